//! Heights of finite labels and small ordinal arithmetic in Cantor normal form.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::labels::{theta_finite, theta_prime_finite, FiniteLabel};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrdinalError {
    #[error("height is undefined for the empty label")]
    EmptyLabel,
    #[error("supports of {0} and {1} overlap")]
    NonDisjoint(String, String),
    #[error("oplus needs a finite factor")]
    NoFiniteFactor,
    #[error("z* iteration stalled before covering Θ'(M)")]
    Stalled,
    #[error("invalid Cantor normal form: {0}")]
    BadCnf(String),
}

/// An ordinal below `ω^ω`, as `Σ ω^e·c` with strictly decreasing exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "CnfJson", into = "CnfJson")]
pub struct OrdinalCNF {
    terms: Vec<(u32, u64)>,
}

#[derive(Serialize, Deserialize)]
struct CnfJson {
    cnf: Vec<(u32, u64)>,
}

impl TryFrom<CnfJson> for OrdinalCNF {
    type Error = OrdinalError;
    fn try_from(j: CnfJson) -> Result<Self, OrdinalError> {
        OrdinalCNF::from_terms(j.cnf)
    }
}

impl From<OrdinalCNF> for CnfJson {
    fn from(o: OrdinalCNF) -> Self {
        CnfJson { cnf: o.terms }
    }
}

impl OrdinalCNF {
    pub fn zero() -> Self {
        OrdinalCNF { terms: Vec::new() }
    }

    pub fn finite(n: u64) -> Self {
        if n == 0 {
            Self::zero()
        } else {
            OrdinalCNF { terms: vec![(0, n)] }
        }
    }

    pub fn omega() -> Self {
        OrdinalCNF { terms: vec![(1, 1)] }
    }

    /// `ω^e·c`.
    pub fn monomial(e: u32, c: u64) -> Self {
        if c == 0 {
            Self::zero()
        } else {
            OrdinalCNF { terms: vec![(e, c)] }
        }
    }

    pub fn from_terms(terms: Vec<(u32, u64)>) -> Result<Self, OrdinalError> {
        if terms.iter().any(|t| t.1 == 0) {
            return Err(OrdinalError::BadCnf("coefficients must be positive".into()));
        }
        if terms.windows(2).any(|w| w[0].0 <= w[1].0) {
            return Err(OrdinalError::BadCnf("exponents must strictly decrease".into()));
        }
        Ok(OrdinalCNF { terms })
    }

    pub fn terms(&self) -> &[(u32, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_finite(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(0, c)] => Some(*c),
            _ => None,
        }
    }

    pub fn is_limit(&self) -> bool {
        self.terms.last().is_some_and(|t| t.0 > 0)
    }

    /// Ordinal sum `self + other`.
    pub fn add(&self, other: &OrdinalCNF) -> OrdinalCNF {
        let Some(&(e, c)) = other.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<(u32, u64)> = self.terms.iter().copied().filter(|t| t.0 >= e).collect();
        match terms.last_mut() {
            Some(last) if last.0 == e => last.1 += c,
            _ => terms.push((e, c)),
        }
        terms.extend_from_slice(&other.terms[1..]);
        OrdinalCNF { terms }
    }

    pub fn succ(&self) -> OrdinalCNF {
        self.add(&OrdinalCNF::finite(1))
    }

    pub fn max(self, other: OrdinalCNF) -> OrdinalCNF {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl Ord for OrdinalCNF {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            let o = a.0.cmp(&b.0).then(a.1.cmp(&b.1));
            if o != Ordering::Equal {
                return o;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for OrdinalCNF {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for OrdinalCNF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, &(e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            let base = match e {
                0 => String::new(),
                1 => "ω".into(),
                _ => format!("ω^{e}"),
            };
            match (e, c) {
                (0, c) => write!(f, "{c}")?,
                (_, 1) => write!(f, "{base}")?,
                _ => write!(f, "{base}·{c}")?,
            }
        }
        Ok(())
    }
}

/// `z_LAB(M) = M ∖ max M`.
pub fn z_lab(m: &FiniteLabel) -> FiniteLabel {
    m.z_lab()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HeightReport {
    pub height: OrdinalCNF,
    /// The descent `M, z_LAB(M), …, 0`.
    pub chain: Vec<String>,
}

/// Height of a nonempty finite label by iterating `z_LAB` down to `0`.
pub fn height_report(m: &FiniteLabel) -> Result<HeightReport, OrdinalError> {
    if m.is_empty() {
        return Err(OrdinalError::EmptyLabel);
    }
    let mut cur = m.clone();
    let mut chain = vec![cur.to_string()];
    let mut steps = 0u64;
    while !cur.is_zero() {
        cur = cur.z_lab();
        chain.push(cur.to_string());
        steps += 1;
    }
    Ok(HeightReport { height: OrdinalCNF::finite(steps + 1), chain })
}

pub fn height(m: &FiniteLabel) -> Result<OrdinalCNF, OrdinalError> {
    height_report(m).map(|r| r.height)
}

/// `height*` by iterating `z*_M(Φ) = {N ∈ Θ(M) : Θ'(N) ⊆ Φ}` from `{∅}`.
pub fn height_star(m: &FiniteLabel) -> Result<OrdinalCNF, OrdinalError> {
    if m.is_empty() {
        return Err(OrdinalError::EmptyLabel);
    }
    let orbit = theta_finite(m);
    let primes: Vec<BTreeSet<FiniteLabel>> = orbit.iter().map(|n| theta_prime_finite(n).into_iter().collect()).collect();
    let target: BTreeSet<FiniteLabel> = theta_prime_finite(m).into_iter().collect();
    let mut phi: BTreeSet<FiniteLabel> = [FiniteLabel::empty()].into();
    let mut alpha = 0u64;
    while !target.is_subset(&phi) {
        let next: BTreeSet<FiniteLabel> = orbit
            .iter()
            .zip(&primes)
            .filter(|(_, p)| p.is_subset(&phi))
            .map(|(n, _)| n.clone())
            .chain(phi.iter().cloned())
            .collect();
        if next == phi {
            return Err(OrdinalError::Stalled);
        }
        phi = next;
        alpha += 1;
    }
    Ok(OrdinalCNF::finite(alpha + 1))
}

/// A union/⊕ tree over finite labels and declared-height leaves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum HeightExpr {
    Leaf { label: FiniteLabelJson },
    /// An infinite label known only through its height and support.
    Symbolic { name: String, height: OrdinalCNF, support: Vec<u32> },
    Union { parts: Vec<HeightExpr> },
    Oplus { left: Box<HeightExpr>, right: Box<HeightExpr> },
}

/// Generators of a finite label as sparse NVector pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteLabelJson(pub Vec<crate::labels::NVector>);

impl HeightExpr {
    pub fn leaf(f: FiniteLabel) -> HeightExpr {
        HeightExpr::Leaf { label: FiniteLabelJson(f.maxima().to_vec()) }
    }

    /// The explicit finite label, when no symbolic leaf occurs.
    pub fn build(&self) -> Option<FiniteLabel> {
        match self {
            HeightExpr::Leaf { label } => Some(FiniteLabel::generated(label.0.iter().cloned())),
            HeightExpr::Symbolic { .. } => None,
            HeightExpr::Union { parts } => {
                parts.iter().try_fold(FiniteLabel::empty(), |acc, p| Some(acc.union(&p.build()?)))
            }
            HeightExpr::Oplus { left, right } => Some(left.build()?.oplus(&right.build()?)),
        }
    }

    fn support(&self) -> BTreeSet<u32> {
        if let Some(f) = self.build() {
            return f.support().into_iter().collect();
        }
        match self {
            HeightExpr::Symbolic { support, .. } => support.iter().copied().collect(),
            HeightExpr::Union { parts } => parts.iter().flat_map(|p| p.support()).collect(),
            HeightExpr::Oplus { left, right } => left.support().union(&right.support()).copied().collect(),
            HeightExpr::Leaf { .. } => unreachable!("leaves always build"),
        }
    }

    fn is_finite(&self) -> bool {
        match self {
            HeightExpr::Leaf { .. } => true,
            HeightExpr::Symbolic { .. } => false,
            HeightExpr::Union { parts } => parts.iter().all(|p| p.is_finite()),
            HeightExpr::Oplus { left, right } => left.is_finite() && right.is_finite(),
        }
    }

    fn describe(&self) -> String {
        match self {
            HeightExpr::Symbolic { name, .. } => name.clone(),
            _ => match self.build() {
                Some(f) => f.to_string(),
                None => "composite".into(),
            },
        }
    }
}

fn check_disjoint(parts: &[&HeightExpr]) -> Result<(), OrdinalError> {
    let supports: Vec<BTreeSet<u32>> = parts.iter().map(|p| p.support()).collect();
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            if !supports[i].is_disjoint(&supports[j]) {
                return Err(OrdinalError::NonDisjoint(parts[i].describe(), parts[j].describe()));
            }
        }
    }
    Ok(())
}

/// Height of a disjoint union/⊕ tree from the heights of its leaves.
///
/// A disjoint union takes the largest height. For `N ⊕ M` with `N` finite of
/// height `n + 1`, the height is `height(M) + n`.
pub fn composite_height(expr: &HeightExpr) -> Result<OrdinalCNF, OrdinalError> {
    match expr {
        HeightExpr::Leaf { .. } => height(&expr.build().expect("leaf")),
        HeightExpr::Symbolic { height, .. } => Ok(height.clone()),
        HeightExpr::Union { parts } => {
            check_disjoint(&parts.iter().collect::<Vec<_>>())?;
            let mut h = OrdinalCNF::zero();
            for p in parts {
                h = h.max(composite_height(p)?);
            }
            if h.is_zero() {
                return Err(OrdinalError::EmptyLabel);
            }
            Ok(h)
        }
        HeightExpr::Oplus { left, right } => {
            check_disjoint(&[left, right])?;
            let (fin, other) = if left.is_finite() {
                (left, right)
            } else if right.is_finite() {
                (right, left)
            } else {
                return Err(OrdinalError::NoFiniteFactor);
            };
            let hf = composite_height(fin)?.as_finite().expect("finite factor has finite height");
            let ho = composite_height(other)?;
            Ok(ho.add(&OrdinalCNF::finite(hf - 1)))
        }
    }
}
