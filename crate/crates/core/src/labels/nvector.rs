use std::fmt;

use serde::{Deserialize, Serialize};

/// A finitely supported vector `ℕ → ℤ₊`, stored as sorted `(index, multiplicity)` pairs.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<(u32, u32)>", into = "Vec<(u32, u32)>")]
pub struct NVector(Vec<(u32, u32)>);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("NVector indices start at 1")]
pub struct ZeroIndex;

impl TryFrom<Vec<(u32, u32)>> for NVector {
    type Error = ZeroIndex;
    fn try_from(v: Vec<(u32, u32)>) -> Result<Self, ZeroIndex> {
        NVector::from_pairs(v)
    }
}

impl From<NVector> for Vec<(u32, u32)> {
    fn from(v: NVector) -> Self {
        v.0
    }
}

impl NVector {
    pub fn zero() -> Self {
        NVector(Vec::new())
    }

    /// `χ(ℓ)`.
    pub fn chi(l: u32) -> Self {
        assert!(l >= 1, "index must be positive");
        NVector(vec![(l, 1)])
    }

    /// `χ(S)` for a set of indices.
    pub fn chi_set<I: IntoIterator<Item = u32>>(s: I) -> Self {
        let mut v: Vec<u32> = s.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        assert!(v.first().is_none_or(|&l| l >= 1), "index must be positive");
        NVector(v.into_iter().map(|l| (l, 1)).collect())
    }

    /// Sums duplicate indices and drops zero multiplicities.
    pub fn from_pairs<I: IntoIterator<Item = (u32, u32)>>(pairs: I) -> Result<Self, ZeroIndex> {
        let mut v: Vec<(u32, u32)> = pairs.into_iter().filter(|p| p.1 > 0).collect();
        if v.iter().any(|p| p.0 == 0) {
            return Err(ZeroIndex);
        }
        v.sort_unstable();
        let mut out: Vec<(u32, u32)> = Vec::with_capacity(v.len());
        for (l, m) in v {
            match out.last_mut() {
                Some(last) if last.0 == l => last.1 += m,
                _ => out.push((l, m)),
            }
        }
        Ok(NVector(out))
    }

    /// Dense form: entry `i` of the slice is the multiplicity at index `i+1`.
    pub fn from_dense(d: &[u32]) -> Self {
        NVector(
            d.iter()
                .enumerate()
                .filter(|(_, &m)| m > 0)
                .map(|(i, &m)| (i as u32 + 1, m))
                .collect(),
        )
    }

    pub fn entries(&self) -> &[(u32, u32)] {
        &self.0
    }

    pub fn get(&self, l: u32) -> u32 {
        match self.0.binary_search_by_key(&l, |p| p.0) {
            Ok(i) => self.0[i].1,
            Err(_) => 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `|m|`, the sum of the multiplicities.
    pub fn norm(&self) -> u64 {
        self.0.iter().map(|p| p.1 as u64).sum()
    }

    /// `# supp m`.
    pub fn size(&self) -> usize {
        self.0.len()
    }

    pub fn support(&self) -> Vec<u32> {
        self.0.iter().map(|p| p.0).collect()
    }

    pub fn max_index(&self) -> u32 {
        self.0.last().map_or(0, |p| p.0)
    }

    pub fn max_entry(&self) -> u32 {
        self.0.iter().map(|p| p.1).max().unwrap_or(0)
    }

    /// Smallest `N` with `m ∈ B_N`.
    pub fn window_index(&self) -> u32 {
        self.max_index().max(self.max_entry())
    }

    pub fn in_window(&self, n: u32) -> bool {
        self.window_index() <= n
    }

    pub fn le(&self, other: &NVector) -> bool {
        let mut j = 0;
        for &(l, m) in &self.0 {
            while j < other.0.len() && other.0[j].0 < l {
                j += 1;
            }
            if j == other.0.len() || other.0[j].0 != l || other.0[j].1 < m {
                return false;
            }
        }
        true
    }

    pub fn lt(&self, other: &NVector) -> bool {
        self != other && self.le(other)
    }

    fn merge<F: Fn(u32, u32) -> u32>(&self, other: &NVector, f: F) -> NVector {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            let (l, a, b) = match (self.0.get(i), other.0.get(j)) {
                (Some(&(la, ma)), Some(&(lb, mb))) if la == lb => {
                    i += 1;
                    j += 1;
                    (la, ma, mb)
                }
                (Some(&(la, ma)), Some(&(lb, _))) if la < lb => {
                    i += 1;
                    (la, ma, 0)
                }
                (Some(_), Some(&(lb, mb))) => {
                    j += 1;
                    (lb, 0, mb)
                }
                (Some(&(la, ma)), None) => {
                    i += 1;
                    (la, ma, 0)
                }
                (None, Some(&(lb, mb))) => {
                    j += 1;
                    (lb, 0, mb)
                }
                (None, None) => unreachable!(),
            };
            let v = f(a, b);
            if v > 0 {
                out.push((l, v));
            }
        }
        NVector(out)
    }

    pub fn add(&self, other: &NVector) -> NVector {
        self.merge(other, |a, b| a + b)
    }

    /// `self - other` when `other <= self`.
    pub fn checked_sub(&self, other: &NVector) -> Option<NVector> {
        if !other.le(self) {
            return None;
        }
        Some(self.merge(other, |a, b| a - b))
    }

    pub fn join(&self, other: &NVector) -> NVector {
        self.merge(other, u32::max)
    }

    pub fn meet(&self, other: &NVector) -> NVector {
        self.merge(other, u32::min)
    }

    /// Restriction to the indices accepted by `keep`.
    pub fn restrict<F: Fn(u32) -> bool>(&self, keep: F) -> NVector {
        NVector(self.0.iter().copied().filter(|p| keep(p.0)).collect())
    }

    /// `m ∧ (N·χ[1,N])`, the largest vector of `B_N` below `m`.
    pub fn clamp_window(&self, n: u32) -> NVector {
        NVector(self.0.iter().filter(|p| p.0 <= n).map(|&(l, m)| (l, m.min(n))).collect())
    }

    /// Relabels indices; `f` must be injective on the support.
    pub fn map_indices<F: Fn(u32) -> Option<u32>>(&self, f: F) -> Option<NVector> {
        let mut v = Vec::with_capacity(self.0.len());
        for &(l, m) in &self.0 {
            v.push((f(l)?, m));
        }
        v.sort_unstable();
        if v.windows(2).any(|w| w[0].0 == w[1].0) || v.first().is_some_and(|p| p.0 == 0) {
            return None;
        }
        Some(NVector(v))
    }

    /// Every vector `w <= self`, in canonical order.
    pub fn below(&self) -> Vec<NVector> {
        let mut out = vec![Vec::new()];
        for &(l, m) in &self.0 {
            let mut next = Vec::with_capacity(out.len() * (m as usize + 1));
            for prefix in &out {
                for k in 0..=m {
                    let mut p: Vec<(u32, u32)> = Vec::clone(prefix);
                    if k > 0 {
                        p.push((l, k));
                    }
                    next.push(p);
                }
            }
            out = next;
        }
        let mut v: Vec<NVector> = out.into_iter().map(NVector).collect();
        v.sort();
        v
    }

    /// `m - χ(ℓ)` for each `ℓ` in the support: the lower covers of `m`.
    pub fn lower_covers(&self) -> Vec<NVector> {
        self.0
            .iter()
            .map(|&(l, _)| self.checked_sub(&NVector::chi(l)).expect("index in support"))
            .collect()
    }
}

impl fmt::Debug for NVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for NVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        for (i, &(l, m)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            if m == 1 {
                write!(f, "χ{l}")?;
            } else {
                write!(f, "{m}χ{l}")?;
            }
        }
        Ok(())
    }
}
