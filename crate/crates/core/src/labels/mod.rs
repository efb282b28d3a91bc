//! Labels: hereditary families of NVectors and the FIN(ℕ) action on them.
//!
//! A [`Label`] is either an explicit [`FiniteLabel`], a named membership
//! oracle with a declared roof bound, or a formal combination of labels that
//! is evaluated on demand. Every query is answered exactly on finite windows
//! `B_N = {m : m ≤ N, supp m ⊂ [1, N]}`.

mod checks;
mod finite;
mod gamow;
mod json;
mod limits;
mod nvector;

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

pub use checks::{property_check, Probe, Property, Verdict, VerdictKind};
pub use finite::{antichain, FiniteLabel};
pub use gamow::Gamow;
pub use json::LabelJson;
pub use limits::{iterated_limit, limit, Distance, LimitReport, LimitVerdict};
pub use nvector::{NVector, ZeroIndex};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LabelError {
    #[error("query {m} exceeds the declared domain [1,{max}] of {name}")]
    WindowExceeded { name: String, m: String, max: u32 },
    #[error("member {m} has support outside the Gamow target set")]
    SupportEscape { m: String },
    #[error("operation needs a finite label")]
    NotFinite,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unknown builtin label {0:?}")]
    UnknownBuiltin(String),
    #[error("bad builtin parameter: {0}")]
    BadParam(String),
    #[error("invalid label JSON: {0}")]
    Json(String),
    #[error("{0}")]
    Zoo(String),
}

/// Membership predicate for an infinite label.
pub trait LabelOracle: Send + Sync {
    fn name(&self) -> String;

    fn contains(&self, m: &NVector) -> bool;

    /// Upper bound on every entry of every member of `M ∩ B_n`.
    fn roof_bound(&self, n: u32) -> u32;

    /// True only for FIN(ℕ).
    fn is_maximum(&self) -> bool {
        false
    }

    /// Largest index the oracle may be queried at, if limited.
    fn domain(&self) -> Option<u32> {
        None
    }

    /// Builtin description used for JSON round trips.
    fn builtin(&self) -> serde_json::Value {
        serde_json::json!({ "kind": "builtin", "name": self.name() })
    }

    /// Fast window enumeration when the construction allows one.
    fn window(&self, _n: u32) -> Option<FiniteLabel> {
        None
    }

    /// Structural facts known from the construction.
    fn tags(&self) -> OracleTags {
        OracleTags::default()
    }

    /// A strictly increasing chain of `len` members, when the label has an infinite one.
    fn chain(&self, _len: usize) -> Option<Vec<NVector>> {
        None
    }

    /// Extra probe sequences for the finitary and simple checks.
    fn probes(&self) -> Vec<Probe> {
        Vec::new()
    }
}

/// Declared structure of an oracle label.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OracleTags {
    /// Every entry of every member is at most this value.
    pub bound: Option<u32>,
    /// Every member has at most this many support indices.
    pub size_bound: Option<u32>,
    /// Finite type follows from the construction.
    pub finite_type: bool,
}

/// A label in one of its three representations.
#[derive(Clone)]
pub enum Label {
    Finite(FiniteLabel),
    Oracle(Arc<dyn LabelOracle>),
    Minus(Arc<Label>, NVector),
    Oplus(Arc<Label>, Arc<Label>),
    Union(Vec<Label>),
    Intersect(Vec<Label>),
    Meet(Arc<Label>, u32),
    Gamow(Arc<Label>, Arc<Gamow>),
}

impl From<FiniteLabel> for Label {
    fn from(f: FiniteLabel) -> Self {
        Label::Finite(f)
    }
}

/// FIN(ℕ), the maximum label.
struct Everything;

impl LabelOracle for Everything {
    fn name(&self) -> String {
        "fin".into()
    }
    fn contains(&self, _m: &NVector) -> bool {
        true
    }
    fn roof_bound(&self, n: u32) -> u32 {
        n
    }
    fn is_maximum(&self) -> bool {
        true
    }
    fn window(&self, n: u32) -> Option<FiniteLabel> {
        let top = NVector::from_pairs((1..=n).map(|l| (l, n))).expect("positive indices");
        Some(FiniteLabel::generated([top]))
    }
}

impl Label {
    pub fn empty() -> Label {
        Label::Finite(FiniteLabel::empty())
    }

    pub fn zero() -> Label {
        Label::Finite(FiniteLabel::zero())
    }

    pub fn fin() -> Label {
        Label::Oracle(Arc::new(Everything))
    }

    pub fn generated<I: IntoIterator<Item = NVector>>(gens: I) -> Label {
        Label::Finite(FiniteLabel::generated(gens))
    }

    pub fn oracle<O: LabelOracle + 'static>(o: O) -> Label {
        Label::Oracle(Arc::new(o))
    }

    pub fn as_finite(&self) -> Option<&FiniteLabel> {
        match self {
            Label::Finite(f) => Some(f),
            _ => None,
        }
    }

    pub fn is_maximum(&self) -> bool {
        matches!(self, Label::Oracle(o) if o.is_maximum())
    }

    /// `M - r`.
    pub fn minus(&self, r: &NVector) -> Label {
        if r.is_zero() {
            return self.clone();
        }
        match self {
            Label::Finite(f) => Label::Finite(f.minus(r)),
            Label::Oracle(o) if o.is_maximum() => self.clone(),
            Label::Minus(base, s) => Label::Minus(base.clone(), s.add(r)),
            _ => Label::Minus(Arc::new(self.clone()), r.clone()),
        }
    }

    pub fn oplus(&self, other: &Label) -> Label {
        match (self, other) {
            (Label::Finite(a), Label::Finite(b)) => Label::Finite(a.oplus(b)),
            _ => Label::Oplus(Arc::new(self.clone()), Arc::new(other.clone())),
        }
    }

    pub fn union(parts: &[Label]) -> Label {
        if parts.iter().all(|p| p.as_finite().is_some()) {
            let f = parts
                .iter()
                .filter_map(|p| p.as_finite())
                .fold(FiniteLabel::empty(), |acc, p| acc.union(p));
            return Label::Finite(f);
        }
        Label::Union(parts.to_vec())
    }

    pub fn intersect(parts: &[Label]) -> Label {
        if !parts.is_empty() && parts.iter().all(|p| p.as_finite().is_some()) {
            let mut it = parts.iter().filter_map(|p| p.as_finite());
            let first = it.next().expect("nonempty").clone();
            return Label::Finite(it.fold(first, |acc, p| acc.intersect(p)));
        }
        Label::Intersect(parts.to_vec())
    }

    /// `M ∧ [1, ℓ*]`.
    pub fn meet_interval(&self, l: u32) -> Label {
        match self {
            Label::Finite(f) => Label::Finite(f.meet_interval(l)),
            _ => Label::Meet(Arc::new(self.clone()), l),
        }
    }

    /// `τ*M`.
    pub fn gamow(&self, tau: &Gamow) -> Result<Label, LabelError> {
        match self {
            Label::Finite(f) => tau.apply_finite(f).map(Label::Finite),
            _ => Ok(Label::Gamow(Arc::new(self.clone()), Arc::new(tau.clone()))),
        }
    }

    pub fn contains(&self, m: &NVector) -> Result<bool, LabelError> {
        match self {
            Label::Finite(f) => Ok(f.contains(m)),
            Label::Oracle(o) => {
                if let Some(max) = o.domain() {
                    if m.max_index() > max {
                        return Err(LabelError::WindowExceeded { name: o.name(), m: m.to_string(), max });
                    }
                }
                Ok(o.contains(m))
            }
            Label::Minus(base, r) => base.contains(&m.add(r)),
            Label::Oplus(a, b) => {
                if !a.contains(&NVector::zero())? || !b.contains(&NVector::zero())? {
                    return Ok(false);
                }
                for m1 in m.below() {
                    if a.contains(&m1)? && b.contains(&m.checked_sub(&m1).expect("m1 ≤ m"))? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Label::Union(parts) => {
                for p in parts {
                    if p.contains(m)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Label::Intersect(parts) => {
                for p in parts {
                    if !p.contains(m)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Label::Meet(base, l) => {
                if *l == 0 || m.max_index() > *l {
                    return Ok(false);
                }
                base.contains(m)
            }
            Label::Gamow(base, tau) => match tau.push(m) {
                Some(img) => base.contains(&img),
                None => Ok(false),
            },
        }
    }

    pub fn is_empty_label(&self) -> Result<bool, LabelError> {
        Ok(!self.contains(&NVector::zero())?)
    }

    /// Entry bound for members of `M ∩ B_n`.
    pub fn roof_bound(&self, n: u32) -> u32 {
        let b = match self {
            Label::Finite(f) => f.roof().max_entry(),
            Label::Oracle(o) => o.roof_bound(n),
            Label::Minus(base, r) => base.roof_bound(n.saturating_add(r.window_index())),
            Label::Oplus(a, b) => a.roof_bound(n).saturating_add(b.roof_bound(n)),
            Label::Union(p) => p.iter().map(|x| x.roof_bound(n)).max().unwrap_or(0),
            Label::Intersect(p) => p.iter().map(|x| x.roof_bound(n)).min().unwrap_or(n),
            Label::Meet(base, _) => base.roof_bound(n),
            Label::Gamow(base, tau) => base.roof_bound(tau.image_bound(n)),
        };
        b.min(n)
    }

    /// `M ∩ B_N` as an explicit finite label.
    pub fn window(&self, n: u32) -> Result<FiniteLabel, LabelError> {
        match self {
            Label::Finite(f) => return Ok(f.window(n)),
            Label::Oracle(o) => {
                if let Some(w) = o.window(n) {
                    return Ok(w);
                }
            }
            Label::Union(parts) => {
                let mut acc = FiniteLabel::empty();
                for p in parts {
                    acc = acc.union(&p.window(n)?);
                }
                return Ok(acc);
            }
            Label::Intersect(parts) => {
                let mut it = parts.iter();
                let mut acc = match it.next() {
                    Some(p) => p.window(n)?,
                    None => return Ok(FiniteLabel::empty()),
                };
                for p in it {
                    acc = acc.intersect(&p.window(n)?);
                }
                return Ok(acc);
            }
            Label::Meet(base, l) => return Ok(base.window(n)?.meet_interval(*l)),
            Label::Oplus(a, b) => return Ok(a.window(n)?.oplus(&b.window(n)?).window(n)),
            Label::Gamow(base, tau) => tau.check_escape(base, n)?,
            Label::Minus(..) => {}
        }
        self.window_bfs(n)
    }

    /// Heredity-driven growth from `𝟘`, one unit vector at a time.
    fn window_bfs(&self, n: u32) -> Result<FiniteLabel, LabelError> {
        if n == 0 || !self.contains(&NVector::zero())? {
            return Ok(FiniteLabel::empty());
        }
        let cap = self.roof_bound(n);
        let mut seen: HashSet<NVector> = HashSet::new();
        let mut queue = VecDeque::new();
        let mut maxima = Vec::new();
        seen.insert(NVector::zero());
        queue.push_back(NVector::zero());
        while let Some(m) = queue.pop_front() {
            let mut grew = false;
            for l in 1..=n {
                if m.get(l) >= cap {
                    continue;
                }
                let next = m.add(&NVector::chi(l));
                if seen.contains(&next) {
                    grew = true;
                    continue;
                }
                if self.contains(&next)? {
                    grew = true;
                    seen.insert(next.clone());
                    queue.push_back(next);
                }
            }
            if !grew {
                maxima.push(m);
            }
        }
        Ok(FiniteLabel::generated(maxima))
    }

    /// Roof of the window `M ∩ B_N`.
    pub fn window_roof(&self, n: u32) -> Result<NVector, LabelError> {
        Ok(self.window(n)?.roof())
    }

    /// Window agreement `M1 ∩ B_N = M2 ∩ B_N`.
    pub fn agrees_with(&self, other: &Label, n: u32) -> Result<bool, LabelError> {
        Ok(self.window(n)? == other.window(n)?)
    }

    /// Ultrametric distance resolved up to `B_{n_max}`.
    pub fn distance(&self, other: &Label, n_max: u32) -> Result<Distance, LabelError> {
        let a = self.window(n_max)?;
        let b = other.window(n_max)?;
        if a == b {
            return Ok(Distance::AtMost(n_max));
        }
        let mut n = 0;
        while a.window(n + 1) == b.window(n + 1) {
            n += 1;
        }
        Ok(Distance::Exact(n))
    }

    /// Short human-readable description.
    pub fn describe(&self) -> String {
        match self {
            Label::Finite(f) => f.to_string(),
            Label::Oracle(o) => o.name(),
            Label::Minus(b, r) => format!("({}) - {}", b.describe(), r),
            Label::Oplus(a, b) => format!("({}) ⊕ ({})", a.describe(), b.describe()),
            Label::Union(p) => format!("∪[{}]", p.iter().map(|x| x.describe()).collect::<Vec<_>>().join(", ")),
            Label::Intersect(p) => format!("∩[{}]", p.iter().map(|x| x.describe()).collect::<Vec<_>>().join(", ")),
            Label::Meet(b, l) => format!("({}) ∧ [1,{}]", b.describe(), l),
            Label::Gamow(b, _) => format!("τ*({})", b.describe()),
        }
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

/// Orbit closure `Θ(M)` of a finite label (or `{FIN(ℕ)}` for the maximum label).
pub fn theta(m: &Label) -> Result<Vec<Label>, LabelError> {
    if m.is_maximum() {
        return Ok(vec![m.clone()]);
    }
    let f = m.as_finite().ok_or(LabelError::NotFinite)?;
    Ok(theta_finite(f).into_iter().map(Label::Finite).collect())
}

/// `{M - r : r ∈ M} ∪ {∅}`.
pub fn theta_finite(m: &FiniteLabel) -> Vec<FiniteLabel> {
    let mut out: Vec<FiniteLabel> = m.members().iter().map(|r| m.minus(r)).collect();
    out.push(FiniteLabel::empty());
    out.sort();
    out.dedup();
    out
}

/// `Θ'(M)`: the closure of `{M - r : r > 𝟘}`.
pub fn theta_prime_finite(m: &FiniteLabel) -> Vec<FiniteLabel> {
    let mut out: Vec<FiniteLabel> = m
        .members()
        .iter()
        .filter(|r| !r.is_zero())
        .map(|r| m.minus(r))
        .collect();
    out.push(FiniteLabel::empty());
    out.sort();
    out.dedup();
    out
}
