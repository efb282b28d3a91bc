use std::collections::BTreeSet;
use std::fmt;

use super::nvector::NVector;

/// A finite hereditary set of NVectors, stored as its antichain of maxima.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FiniteLabel {
    max: Vec<NVector>,
}

/// Keeps the ≤-maximal elements, sorted and deduplicated.
pub fn antichain<I: IntoIterator<Item = NVector>>(items: I) -> Vec<NVector> {
    let mut v: Vec<NVector> = items.into_iter().collect();
    v.sort_by(|a, b| b.norm().cmp(&a.norm()).then_with(|| a.cmp(b)));
    v.dedup();
    let mut kept: Vec<NVector> = Vec::new();
    for x in v {
        if !kept.iter().any(|k| x.le(k)) {
            kept.push(x);
        }
    }
    kept.sort();
    kept
}

impl FiniteLabel {
    /// The empty label ∅.
    pub fn empty() -> Self {
        FiniteLabel { max: Vec::new() }
    }

    /// The label `0 = {𝟘}`.
    pub fn zero() -> Self {
        FiniteLabel { max: vec![NVector::zero()] }
    }

    /// `⟨S⟩`.
    pub fn generated<I: IntoIterator<Item = NVector>>(gens: I) -> Self {
        FiniteLabel { max: antichain(gens) }
    }

    /// `N_n = {kχ(ℓ) : k ≤ n}`.
    pub fn column(l: u32, n: u32) -> Self {
        if n == 0 {
            Self::zero()
        } else {
            Self::generated([NVector::from_pairs([(l, n)]).expect("positive index")])
        }
    }

    pub fn maxima(&self) -> &[NVector] {
        &self.max
    }

    pub fn is_empty(&self) -> bool {
        self.max.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.max.len() == 1 && self.max[0].is_zero()
    }

    pub fn contains(&self, m: &NVector) -> bool {
        self.max.iter().any(|x| m.le(x))
    }

    /// All members in canonical order.
    pub fn members(&self) -> Vec<NVector> {
        let mut set = BTreeSet::new();
        for x in &self.max {
            set.extend(x.below());
        }
        set.into_iter().collect()
    }

    pub fn len(&self) -> usize {
        if self.max.len() == 1 {
            return self.max[0].entries().iter().map(|p| p.1 as usize + 1).product();
        }
        self.members().len()
    }

    /// `M ⊆ N`.
    pub fn is_subset(&self, other: &FiniteLabel) -> bool {
        self.max.iter().all(|x| other.contains(x))
    }

    /// `M - r = {w : w + r ∈ M}`.
    pub fn minus(&self, r: &NVector) -> FiniteLabel {
        FiniteLabel::generated(self.max.iter().filter_map(|x| x.checked_sub(r)))
    }

    /// `M ⊕ N = {m + n}`.
    pub fn oplus(&self, other: &FiniteLabel) -> FiniteLabel {
        let mut g = Vec::with_capacity(self.max.len() * other.max.len());
        for a in &self.max {
            for b in &other.max {
                g.push(a.add(b));
            }
        }
        FiniteLabel::generated(g)
    }

    pub fn union(&self, other: &FiniteLabel) -> FiniteLabel {
        FiniteLabel::generated(self.max.iter().chain(other.max.iter()).cloned())
    }

    pub fn intersect(&self, other: &FiniteLabel) -> FiniteLabel {
        let mut g = Vec::new();
        for a in &self.max {
            for b in &other.max {
                g.push(a.meet(b));
            }
        }
        FiniteLabel::generated(g)
    }

    /// `M ∧ [1, ℓ*]`: members supported in `[1, ℓ*]` (∅ when `ℓ* = 0`).
    pub fn meet_interval(&self, l: u32) -> FiniteLabel {
        if l == 0 {
            return FiniteLabel::empty();
        }
        FiniteLabel::generated(self.max.iter().map(|x| x.restrict(|i| i <= l)))
    }

    /// `M ∩ B_N` (with `B_0 = ∅`).
    pub fn window(&self, n: u32) -> FiniteLabel {
        if n == 0 {
            return FiniteLabel::empty();
        }
        FiniteLabel::generated(self.max.iter().map(|x| x.clamp_window(n)))
    }

    /// Roof `ρ(M)` (zero vector for ∅).
    pub fn roof(&self) -> NVector {
        self.max.iter().fold(NVector::zero(), |acc, x| acc.join(x))
    }

    /// Union of the supports of the members.
    pub fn support(&self) -> Vec<u32> {
        let mut s: BTreeSet<u32> = BTreeSet::new();
        for x in &self.max {
            s.extend(x.support());
        }
        s.into_iter().collect()
    }

    /// `Supp M` reduced to its inclusion-maximal sets.
    pub fn max_supports(&self) -> Vec<Vec<u32>> {
        let sets = antichain(self.max.iter().map(|x| NVector::chi_set(x.support())));
        sets.iter().map(|s| s.support()).collect()
    }

    pub fn max_norm(&self) -> u64 {
        self.max.iter().map(|x| x.norm()).max().unwrap_or(0)
    }

    /// `M ∖ max M`.
    pub fn z_lab(&self) -> FiniteLabel {
        FiniteLabel::generated(self.max.iter().flat_map(|x| x.lower_covers()))
    }

    /// Relabels through an index map; `None` when a maximum leaves the domain.
    pub fn map_indices<F: Fn(u32) -> Option<u32>>(&self, f: F) -> Option<FiniteLabel> {
        let mut g = Vec::with_capacity(self.max.len());
        for x in &self.max {
            g.push(x.map_indices(&f)?);
        }
        Some(FiniteLabel::generated(g))
    }

    /// Shifts every index by `offset`.
    pub fn shifted(&self, offset: u32) -> FiniteLabel {
        self.map_indices(|l| Some(l + offset)).expect("shift is injective")
    }
}

impl fmt::Debug for FiniteLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FiniteLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.max.is_empty() {
            return write!(f, "∅");
        }
        write!(f, "⟨")?;
        for (i, x) in self.max.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "⟩")
    }
}
