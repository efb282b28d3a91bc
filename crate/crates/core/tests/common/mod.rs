#![allow(dead_code)]

use labshift::{FiniteLabel, Label, NVector};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random vector with support in `[1, max_index]` and entries at most `max_entry`.
pub fn random_vector<R: Rng>(rng: &mut R, max_index: u32, max_entry: u32, max_size: usize) -> NVector {
    let size = rng.gen_range(0..=max_size);
    let pairs: Vec<(u32, u32)> =
        (0..size).map(|_| (rng.gen_range(1..=max_index), rng.gen_range(1..=max_entry))).collect();
    let v = NVector::from_pairs(pairs).expect("positive indices");
    NVector::from_pairs(v.entries().iter().map(|&(l, m)| (l, m.min(max_entry)))).expect("positive indices")
}

/// A nonempty finite label with up to `gens` random generators.
pub fn random_finite<R: Rng>(rng: &mut R, max_index: u32, max_entry: u32, gens: usize) -> FiniteLabel {
    let k = rng.gen_range(1..=gens);
    FiniteLabel::generated((0..k).map(|_| random_vector(rng, max_index, max_entry, 3)))
}

pub fn random_label<R: Rng>(rng: &mut R, max_index: u32, max_entry: u32, gens: usize) -> Label {
    Label::from(random_finite(rng, max_index, max_entry, gens))
}

/// Members of `M - r` computed from the member list.
pub fn minus_by_members(m: &FiniteLabel, r: &NVector) -> Vec<NVector> {
    let mut out: Vec<NVector> = m.members().into_iter().filter_map(|x| x.checked_sub(r)).collect();
    out.sort();
    out.dedup();
    out
}

/// Largest `N` with equal member sets on `B_N`, capped at `cap`.
pub fn distance_exponent(a: &FiniteLabel, b: &FiniteLabel, cap: u32) -> u32 {
    let ma = a.members();
    let mb = b.members();
    let first = ma
        .iter()
        .filter(|x| !b.contains(x))
        .chain(mb.iter().filter(|x| !a.contains(x)))
        .map(|x| x.window_index())
        .min();
    match first {
        Some(w) => w.saturating_sub(1).min(cap),
        None => cap,
    }
}
