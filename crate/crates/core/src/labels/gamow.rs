use std::collections::BTreeMap;

use super::{FiniteLabel, Label, LabelError, NVector};

/// A bijection `τ : L1 → L2` given by finitely many pairs `(i, τ(i))`.
///
/// When the pairs permute their own index set, `τ` is extended by the
/// identity to a bijection of ℕ. Otherwise `L1` and `L2` are exactly the
/// listed domain and image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gamow {
    fwd: BTreeMap<u32, u32>,
    inv: BTreeMap<u32, u32>,
    identity_off: bool,
}

impl Gamow {
    pub fn new(pairs: &[(u32, u32)]) -> Result<Gamow, LabelError> {
        let mut fwd = BTreeMap::new();
        let mut inv = BTreeMap::new();
        for &(a, b) in pairs {
            if a == 0 || b == 0 {
                return Err(LabelError::Precondition("Gamow indices start at 1".into()));
            }
            if fwd.insert(a, b).is_some() || inv.insert(b, a).is_some() {
                return Err(LabelError::Precondition("Gamow map must be a bijection".into()));
            }
        }
        let identity_off = fwd.keys().eq(inv.keys());
        Ok(Gamow { fwd, inv, identity_off })
    }

    pub fn identity() -> Gamow {
        Gamow { fwd: BTreeMap::new(), inv: BTreeMap::new(), identity_off: true }
    }

    /// The increasing bijection `[start, start+len) → [1, len]`.
    pub fn interval(start: u32, len: u32) -> Gamow {
        let pairs: Vec<(u32, u32)> = (0..len).map(|i| (start + i, 1 + i)).collect();
        Gamow::new(&pairs).expect("interval map is a bijection")
    }

    pub fn pairs(&self) -> Vec<(u32, u32)> {
        self.fwd.iter().map(|(&a, &b)| (a, b)).collect()
    }

    pub fn is_permutation(&self) -> bool {
        self.identity_off
    }

    pub fn forward(&self, i: u32) -> Option<u32> {
        match self.fwd.get(&i) {
            Some(&j) => Some(j),
            None if self.identity_off => Some(i),
            None => None,
        }
    }

    pub fn inverse(&self, j: u32) -> Option<u32> {
        match self.inv.get(&j) {
            Some(&i) => Some(i),
            None if self.identity_off => Some(j),
            None => None,
        }
    }

    /// `τ*m = m ∘ τ` for `supp m ⊂ L2`.
    pub fn pull(&self, m: &NVector) -> Option<NVector> {
        m.map_indices(|j| self.inverse(j))
    }

    /// Inverse of [`Gamow::pull`]: the vector `m` with `τ*m = w`.
    pub fn push(&self, w: &NVector) -> Option<NVector> {
        w.map_indices(|i| self.forward(i))
    }

    /// Largest `τ(i)` over `i ≤ n`.
    pub fn image_bound(&self, n: u32) -> u32 {
        let mapped = self.fwd.range(..=n).map(|(_, &j)| j).max().unwrap_or(0);
        if self.identity_off {
            mapped.max(n)
        } else {
            mapped
        }
    }

    pub fn apply_finite(&self, f: &FiniteLabel) -> Result<FiniteLabel, LabelError> {
        let mut g = Vec::new();
        for x in f.maxima() {
            g.push(self.pull(x).ok_or_else(|| LabelError::SupportEscape { m: x.to_string() })?);
        }
        Ok(FiniteLabel::generated(g))
    }

    /// Rejects a base label whose members leave `L2` within the windows this map reaches.
    pub(crate) fn check_escape(&self, base: &Label, n: u32) -> Result<(), LabelError> {
        if self.identity_off {
            return Ok(());
        }
        let reach = self.image_bound(n).max(n);
        let w = base.window(reach)?;
        for x in w.maxima() {
            if x.support().iter().any(|j| !self.inv.contains_key(j)) {
                return Err(LabelError::SupportEscape { m: x.to_string() });
            }
        }
        Ok(())
    }
}
