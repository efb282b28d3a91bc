//! Translation finiteness, independence certificates and density glue.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::expanding::{DensityRow, ExpandError, ExpandingSystem};
use crate::labels::{Label, LabelError, NVector};
use crate::subshift::{in_a, point_window, time_for, Mode, Partition, SubshiftError};

pub const DEFAULT_TF_THRESHOLD: usize = 25;
pub const DEFAULT_WITNESS_NORM: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TfVerdict {
    TfOnWindow,
    NotTfWithWitness,
    Inconclusive,
}

/// A candidate `B`, given by its members in `[-radius, radius]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TfCandidate {
    pub name: String,
    pub members: Vec<i64>,
}

impl TfCandidate {
    pub fn new(name: impl Into<String>, mut members: Vec<i64>) -> Self {
        members.sort_unstable();
        members.dedup();
        TfCandidate { name: name.into(), members }
    }

    pub fn from_predicate<F: Fn(i64) -> bool>(name: impl Into<String>, radius: u32, f: F) -> Self {
        let r = radius as i64;
        Self::new(name, (-r..=r).filter(|&n| f(n)).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TfReport {
    pub verdict: TfVerdict,
    pub candidate: Option<String>,
    /// `B ∩ [-N_used, N_used]` for the refuting candidate.
    #[serde(rename = "witness_B")]
    pub witness_b: Option<Vec<String>>,
    #[serde(rename = "N_used")]
    pub n_used: u32,
    pub radius: String,
    pub threshold: usize,
    /// `(N, #{n : A - n ⊇ B ∩ [-N, N]})` for the reported candidate.
    pub intersection_sizes: Vec<(u32, usize)>,
}

/// `A`, `A ∩ (0, ∞)` and `A ∩ (-∞, 0)` on `[-radius, radius]`.
pub fn auto_candidates<F: Fn(i64) -> bool>(a: &F, radius: u32) -> Vec<TfCandidate> {
    vec![
        TfCandidate::from_predicate("A", radius, a),
        TfCandidate::from_predicate("A+", radius, |n| n > 0 && a(n)),
        TfCandidate::from_predicate("A-", radius, |n| n < 0 && a(n)),
    ]
}

/// `#{n ∈ [-(R-N), R-N] : b + n ∈ A for all b ∈ B ∩ [-N, N]}`.
fn translate_count<F: Fn(i64) -> bool>(a: &F, b: &[i64], radius: u32, n: u32) -> usize {
    let bn: Vec<i64> = b.iter().copied().filter(|x| x.unsigned_abs() <= n as u64).collect();
    let span = radius.saturating_sub(n) as i64;
    (-span..=span).filter(|&t| bn.iter().all(|&x| a(x + t))).count()
}

/// Table of translate counts for `N = 1..=max(1, radius/4)`.
pub fn tf_table<F: Fn(i64) -> bool>(a: &F, b: &TfCandidate, radius: u32) -> Vec<(u32, usize)> {
    let n_max = (radius / 4).max(1);
    (1..=n_max).map(|n| (n, translate_count(a, &b.members, radius, n))).collect()
}

/// Evaluates the translation-finite condition on `[-radius, radius]`.
///
/// A candidate refutes when every tested `N` leaves at least `threshold` translates.
pub fn tf_check<F: Fn(i64) -> bool + Sync>(
    a: &F,
    radius: u32,
    candidates: &[TfCandidate],
    threshold: usize,
) -> TfReport {
    let n_used = (radius / 4).max(1);
    let mut fallback = None;
    for c in candidates {
        if c.members.is_empty() {
            continue;
        }
        let table = tf_table(a, c, radius);
        if table.iter().all(|&(_, k)| k >= threshold) {
            let w = c.members.iter().filter(|x| x.unsigned_abs() <= n_used as u64).map(|x| x.to_string()).collect();
            return TfReport {
                verdict: TfVerdict::NotTfWithWitness,
                candidate: Some(c.name.clone()),
                witness_b: Some(w),
                n_used,
                radius: radius.to_string(),
                threshold,
                intersection_sizes: table,
            };
        }
        fallback.get_or_insert((c.name.clone(), table));
    }
    let (verdict, candidate, table) = match fallback {
        Some((name, table)) => (TfVerdict::TfOnWindow, Some(name), table),
        None => (TfVerdict::Inconclusive, None, Vec::new()),
    };
    TfReport {
        verdict,
        candidate,
        witness_b: None,
        n_used,
        radius: radius.to_string(),
        threshold,
        intersection_sizes: table,
    }
}

/// `tf_check` for `A[M]`, adding the candidate `B = A[M - r]` built from a member
/// `r > 0` with `M - r ⊋ 0`.
///
/// For that candidate the translates are the times `t` with `r(t) = r` and all digits
/// beyond `2N`; each one is verified pointwise.
pub fn tf_check_label(
    sys: &ExpandingSystem,
    part: &dyn Partition,
    m: &Label,
    radius: u32,
    threshold: usize,
) -> Result<TfReport, SubshiftError> {
    let n_used = (radius / 4).max(1);
    if let Some(r) = deep_member(m, n_used)? {
        return constructive_tf(sys, part, m, &r, n_used, threshold);
    }
    let rr = radius as i64;
    let mut bits = BTreeSet::new();
    let listing = sys.ip_in_interval(&BigInt::from(-rr), &BigInt::from(rr), &crate::expanding::IpMode::Full)?;
    for t in &listing.members {
        if in_a(sys, part, m, t, Mode::Full)? {
            bits.insert(i64::try_from(t).expect("radius fits"));
        }
    }
    let a = |n: i64| bits.contains(&n);
    let cands = auto_candidates(&a, radius);
    Ok(tf_check(&a, radius, &cands, threshold))
}

/// A member `r > 0` of `M ∩ B_N` with `(M - r) ∩ B_N ⊋ {0}`.
fn deep_member(m: &Label, n: u32) -> Result<Option<NVector>, LabelError> {
    let w = m.window(n)?;
    let mut members = w.members();
    members.sort_by(|x, y| x.norm().cmp(&y.norm()).then_with(|| x.cmp(y)));
    Ok(members.into_iter().find(|r| !r.is_zero() && w.minus(r).len() > 1))
}

fn constructive_tf(
    sys: &ExpandingSystem,
    part: &dyn Partition,
    m: &Label,
    r: &NVector,
    n_used: u32,
    threshold: usize,
) -> Result<TfReport, SubshiftError> {
    let rest = m.minus(r);
    let b_window = point_window(sys, part, &rest, n_used, Mode::Full, &BigInt::from(0))?;
    let mut table = Vec::new();
    let mut far = BigInt::from(0);
    let mut all_large = true;
    for n in 1..=n_used {
        let bn: Vec<i64> = b_window.ones.iter().copied().filter(|x| x.unsigned_abs() <= n as u64).collect();
        let mut found = BTreeSet::new();
        let mut floor = 2 * n as u64;
        while found.len() < threshold && floor < 2 * n as u64 + 64 * threshold as u64 {
            let (t, _) = time_for(sys, part, r, floor);
            floor += 1;
            if found.contains(&t) {
                continue;
            }
            let mut ok = true;
            for &b in &bn {
                if !in_a(sys, part, m, &(&t + b), Mode::Full)? {
                    ok = false;
                    break;
                }
            }
            if ok {
                found.insert(t);
            }
        }
        if let Some(t) = found.iter().next_back() {
            far = far.max(t.clone());
        }
        all_large &= found.len() >= threshold;
        table.push((n, found.len()));
    }
    let witness: Vec<String> = b_window.ones.iter().map(|x| x.to_string()).collect();
    Ok(TfReport {
        verdict: if all_large { TfVerdict::NotTfWithWitness } else { TfVerdict::Inconclusive },
        candidate: Some(format!("A[M - {r}]")),
        witness_b: all_large.then_some(witness),
        n_used,
        radius: far.to_string(),
        threshold,
        intersection_sizes: table,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndependenceCertificate {
    #[serde(rename = "F")]
    pub f: Vec<NVector>,
    pub witnesses: Vec<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    #[serde(rename = "A")]
    pub a: Vec<NVector>,
    pub r: NVector,
}

impl IndependenceCertificate {
    /// Re-checks `f + r ∈ M` exactly for `f ∈ A`, for every witness.
    pub fn validate(&self, m: &Label) -> Result<bool, LabelError> {
        if self.witnesses.len() != 1 << self.f.len() {
            return Ok(false);
        }
        for w in &self.witnesses {
            for f in &self.f {
                if m.contains(&f.add(&w.r))? != w.a.contains(f) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// All vectors in `B_bound` of the given norm, in canonical order.
fn vectors_of_norm(norm: u32, bound: u32) -> Vec<NVector> {
    fn go(l: u32, left: u32, bound: u32, cur: &mut Vec<(u32, u32)>, out: &mut Vec<NVector>) {
        if left == 0 {
            out.push(NVector::from_pairs(cur.iter().copied()).expect("positive indices"));
            return;
        }
        if l > bound {
            return;
        }
        for c in (1..=left.min(bound)).rev() {
            cur.push((l, c));
            go(l + 1, left - c, bound, cur, out);
            cur.pop();
        }
        go(l + 1, left, bound, cur, out);
    }
    let mut out = Vec::new();
    go(1, norm, bound, &mut Vec::new(), &mut out);
    out.sort();
    out
}

fn subset_of(f: &[NVector], mask: usize) -> Vec<NVector> {
    f.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, v)| v.clone()).collect()
}

/// Searches `r ∈ B_bound` of norm at most `max_norm` with `F ∩ (M - r) = A` for
/// every `A ⊆ F`, in norm-then-lex order.
///
/// Returns the first subset without a witness on failure.
pub fn independence_certificate_with(
    m: &Label,
    f: &[NVector],
    bound: u32,
    max_norm: u32,
) -> Result<Result<IndependenceCertificate, Vec<NVector>>, LabelError> {
    if f.len() > 16 {
        return Err(LabelError::Precondition("F has more than 16 members".into()));
    }
    for (i, x) in f.iter().enumerate() {
        if !m.contains(x)? {
            return Err(LabelError::Precondition(format!("{x} is not in M")));
        }
        for y in &f[i + 1..] {
            if x.le(y) || y.le(x) {
                return Err(LabelError::Precondition(format!("{x} and {y} are comparable")));
            }
        }
    }
    let total = 1usize << f.len();
    let mut found: BTreeMap<usize, NVector> = BTreeMap::new();
    'outer: for norm in 0..=max_norm {
        let cands = vectors_of_norm(norm, bound);
        let masks: Vec<Result<usize, LabelError>> = cands
            .par_iter()
            .map(|r| {
                let mut mask = 0;
                for (i, x) in f.iter().enumerate() {
                    if m.contains(&x.add(r))? {
                        mask |= 1 << i;
                    }
                }
                Ok(mask)
            })
            .collect();
        for (r, mask) in cands.into_iter().zip(masks) {
            found.entry(mask?).or_insert(r);
            if found.len() == total {
                break 'outer;
            }
        }
    }
    if let Some(missing) = (0..total).find(|k| !found.contains_key(k)) {
        return Ok(Err(subset_of(f, missing)));
    }
    let cert = IndependenceCertificate {
        f: f.to_vec(),
        witnesses: found.into_iter().map(|(k, r)| Witness { a: subset_of(f, k), r }).collect(),
    };
    if !cert.validate(m)? {
        return Err(LabelError::Precondition("certificate failed re-validation".into()));
    }
    Ok(Ok(cert))
}

pub fn independence_certificate(
    m: &Label,
    f: &[NVector],
    bound: u32,
) -> Result<Result<IndependenceCertificate, Vec<NVector>>, LabelError> {
    independence_certificate_with(m, f, bound, DEFAULT_WITNESS_NORM)
}

/// Checks `ρ(M)|F ∈ M` for every `F ⊆ L` and builds the certificate for
/// `{χ(ℓ) : ℓ ∈ L}` with witnesses `ρ(M)|(L ∖ A)`.
///
/// `ρ(M)` is read off the window `B_N`. Returns the first violating `F` on failure.
pub fn flat_independence(
    m: &Label,
    l: &[u32],
    n: u32,
) -> Result<Result<IndependenceCertificate, Vec<u32>>, LabelError> {
    let l: Vec<u32> = l.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    if l.len() > 16 {
        return Err(LabelError::Precondition("L has more than 16 members".into()));
    }
    let rho = m.window_roof(n)?;
    if let Some(x) = l.iter().find(|&&x| rho.get(x) == 0) {
        return Err(LabelError::Precondition(format!("{x} is outside supp ρ(M) on B_{n}")));
    }
    let total = 1usize << l.len();
    let pick = |mask: usize| -> Vec<u32> { l.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x).collect() };
    for mask in 0..total {
        let s = pick(mask);
        if !m.contains(&rho.restrict(|x| s.contains(&x)))? {
            return Ok(Err(s));
        }
    }
    let f: Vec<NVector> = l.iter().map(|&x| NVector::chi(x)).collect();
    let witnesses = (0..total)
        .map(|mask| {
            let rest = pick(!mask & (total - 1));
            Witness { a: subset_of(&f, mask), r: rho.restrict(|x| rest.contains(&x)) }
        })
        .collect();
    let cert = IndependenceCertificate { f, witnesses };
    if !cert.validate(m)? {
        return Err(LabelError::Precondition("certificate failed re-validation".into()));
    }
    Ok(Ok(cert))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityReport {
    pub rows: Vec<DensityRow>,
    pub all_within_bound: bool,
    pub ratios_decreasing: bool,
    pub note: &'static str,
}

/// Density counts of `IP(k)` with the bound check and monotonicity of `count/N`.
pub fn density_report(sys: &ExpandingSystem, windows: &[BigInt]) -> Result<DensityReport, ExpandError> {
    let rows = sys.density_profile(windows)?;
    let all_within_bound = rows.iter().all(|r| r.within_bound);
    let ratios_decreasing = rows.windows(2).all(|w| w[1].ratio < w[0].ratio);
    Ok(DensityReport {
        rows,
        all_within_bound,
        ratios_decreasing,
        note: "zero Banach density: the only invariant measure on the orbit closure is the point mass at the zero point",
    })
}
