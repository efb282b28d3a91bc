//! The points `x[M]`, `x₊[M]` of `{0,1}^ℤ` on finite windows.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::expanding::{ExpandError, ExpandingSystem, Expansion, IpMode};
use crate::labels::{FiniteLabel, Label, LabelError, NVector};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum SubshiftError {
    #[error(transparent)]
    Expand(#[from] ExpandError),
    #[error(transparent)]
    Label(#[from] LabelError),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// A partition of ℕ into infinite sets `D_1, D_2, …` with increasing minima.
pub trait Partition: Send + Sync {
    fn name(&self) -> &str;
    /// `ℓ(n)`, the block containing `n ≥ 1`.
    fn level(&self, n: u64) -> u32;
    /// `Q(ℓ, i)`, the `i`-th smallest member of `D_ℓ` (`i ≥ 1`).
    fn member(&self, l: u32, i: u64) -> u64;
}

/// `ℓ(n) = ν₂(n) + 1` and `Q(ℓ, i) = 2^{ℓ-1}(2i - 1)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct TwoAdic;

impl Partition for TwoAdic {
    fn name(&self) -> &str {
        "2-adic"
    }
    fn level(&self, n: u64) -> u32 {
        assert!(n >= 1, "levels start at 1");
        n.trailing_zeros() + 1
    }
    fn member(&self, l: u32, i: u64) -> u64 {
        assert!(l >= 1 && i >= 1, "indices start at 1");
        (1u64 << (l - 1)) * (2 * i - 1)
    }
}

pub fn default_partition() -> TwoAdic {
    TwoAdic
}

pub fn partition_by_name(name: &str) -> Option<TwoAdic> {
    matches!(name, "2-adic" | "two-adic" | "2adic").then_some(TwoAdic)
}

/// `r(t) = Σ χ(ℓ(|j_i|))`.
pub fn length_vector_of(part: &dyn Partition, e: &Expansion) -> NVector {
    NVector::from_pairs(e.digits().iter().map(|j| (part.level(j.unsigned_abs()), 1))).expect("levels are positive")
}

pub fn length_vector(sys: &ExpandingSystem, part: &dyn Partition, t: &BigInt) -> Option<NVector> {
    sys.expand(t).map(|e| length_vector_of(part, &e))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Full,
    Plus,
}

impl Mode {
    fn ip(&self) -> IpMode {
        match self {
            Mode::Full => IpMode::Full,
            Mode::Plus => IpMode::Positive,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Mode::Full => "full",
            Mode::Plus => "plus",
        }
    }
}

/// `t ∈ A[M]` (or `A₊[M]`).
pub fn in_a(sys: &ExpandingSystem, part: &dyn Partition, m: &Label, t: &BigInt, mode: Mode) -> Result<bool, SubshiftError> {
    let Some(e) = sys.expand(t) else {
        return Ok(false);
    };
    if mode == Mode::Plus && !e.is_positive() {
        return Ok(false);
    }
    Ok(m.contains(&length_vector_of(part, &e))?)
}

/// The word `x[M]` (or `x₊[M]`) shifted by `shift`, on positions `[-N, N]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubshiftWindow {
    pub radius: u32,
    pub shift: BigInt,
    pub mode: Mode,
    /// Positions `p ∈ [-N, N]` with `p + shift ∈ A`.
    pub ones: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowJson {
    #[serde(rename = "N")]
    pub n: u32,
    pub shift: String,
    pub mode: Mode,
    pub ones: Vec<String>,
}

impl SubshiftWindow {
    pub fn bit(&self, p: i64) -> bool {
        self.ones.binary_search(&p).is_ok()
    }

    pub fn bits(&self) -> Vec<bool> {
        let n = self.radius as i64;
        (-n..=n).map(|p| self.bit(p)).collect()
    }

    /// The same window cut down to a smaller radius.
    pub fn restrict(&self, radius: u32) -> SubshiftWindow {
        let r = radius.min(self.radius) as i64;
        SubshiftWindow {
            radius: radius.min(self.radius),
            shift: self.shift.clone(),
            mode: self.mode,
            ones: self.ones.iter().copied().filter(|p| p.abs() <= r).collect(),
        }
    }

    pub fn is_all_zero(&self) -> bool {
        self.ones.is_empty()
    }

    /// Absolute positions `p + shift` of the ones.
    pub fn absolute_ones(&self) -> Vec<BigInt> {
        self.ones.iter().map(|&p| &self.shift + p).collect()
    }

    pub fn to_json(&self) -> WindowJson {
        WindowJson {
            n: self.radius,
            shift: self.shift.to_string(),
            mode: self.mode,
            ones: self.absolute_ones().iter().map(|t| t.to_string()).collect(),
        }
    }

    /// `#`/`.` per position and a caret under position 0.
    pub fn render_ascii(&self) -> String {
        let mut s: String = self.bits().iter().map(|&b| if b { '#' } else { '.' }).collect();
        s.push('\n');
        s.push_str(&" ".repeat(self.radius as usize));
        s.push_str("^\n");
        s
    }

    /// One-row plain PGM, black for ones.
    pub fn render_pgm(&self) -> String {
        let bits = self.bits();
        let mut s = String::new();
        let _ = writeln!(s, "P2\n{} 1\n1", bits.len());
        let row: Vec<&str> = bits.iter().map(|&b| if b { "0" } else { "1" }).collect();
        let _ = writeln!(s, "{}", row.join(" "));
        s
    }
}

/// `SYM`/`ZER` evidence on a window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SymZer {
    pub symmetric: bool,
    pub zer: bool,
}

pub fn sym_zer_classify(w: &SubshiftWindow) -> SymZer {
    let symmetric = w.ones.iter().all(|&p| w.bit(-p));
    let zer = w.bit(0) && w.ones.iter().all(|&p| p >= 0);
    SymZer { symmetric, zer }
}

/// `S^shift x[M]` on `[-N, N]`.
pub fn point_window(
    sys: &ExpandingSystem,
    part: &dyn Partition,
    m: &Label,
    n: u32,
    mode: Mode,
    shift: &BigInt,
) -> Result<SubshiftWindow, SubshiftError> {
    let lo = shift - n;
    let hi = shift + n;
    let listing = sys.ip_in_interval(&lo, &hi, &mode.ip())?;
    let mut ones = Vec::new();
    for t in &listing.members {
        let e = sys.expand(t).expect("listed members expand");
        if m.contains(&length_vector_of(part, &e))? {
            ones.push((t - shift).to_i64().expect("window offset fits"));
        }
    }
    ones.sort_unstable();
    Ok(SubshiftWindow { radius: n, shift: shift.clone(), mode, ones })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalityReport {
    pub verified: bool,
    pub r: NVector,
    pub around_t: SubshiftWindow,
    pub shifted_label: SubshiftWindow,
}

/// `[t ± N] ∩ A[M] = t + ([±N] ∩ A[M - r(t)])` for `t ∈ A[M]` with `2N ≤ |j_r(t)|`.
pub fn locality_check(
    sys: &ExpandingSystem,
    part: &dyn Partition,
    m: &Label,
    t: &BigInt,
    n: u32,
) -> Result<LocalityReport, SubshiftError> {
    let e = sys.expand(t).ok_or_else(|| SubshiftError::Precondition(format!("{t} is not an expanding time")))?;
    let r = length_vector_of(part, &e);
    if !m.contains(&r)? {
        return Err(SubshiftError::Precondition(format!("{t} is not in A[M]")));
    }
    if let Some(last) = e.last_index() {
        if 2 * n as u64 > last {
            return Err(SubshiftError::Precondition(format!("2N = {} exceeds |j_r(t)| = {last}", 2 * n)));
        }
    }
    let around_t = point_window(sys, part, m, n, Mode::Full, t)?;
    let shifted_label = point_window(sys, part, &m.minus(&r), n, Mode::Full, &BigInt::zero())?;
    Ok(LocalityReport { verified: around_t.ones == shifted_label.ones, r, around_t, shifted_label })
}

/// Positive time `t` with `r(t) = m` whose digits are the smallest members of each
/// `D_ℓ` above `floor`.
pub fn time_for(sys: &ExpandingSystem, part: &dyn Partition, m: &NVector, floor: u64) -> (BigInt, Vec<u64>) {
    let mut digits = Vec::new();
    for &(l, c) in m.entries() {
        let mut i = 1;
        let mut taken = 0;
        while taken < c {
            let q = part.member(l, i);
            if q > floor {
                digits.push(q);
                taken += 1;
            }
            i += 1;
        }
    }
    digits.sort_unstable_by(|a, b| b.cmp(a));
    let t = digits.iter().map(|&j| sys.k(j as i64)).sum();
    (t, digits)
}

/// Largest `R ≤ cap` such that both points agree on `[-R, R]`, or `None` when they
/// already differ at 0.
pub fn agreement_radius(a: &SubshiftWindow, b: &SubshiftWindow, cap: u32) -> Option<u32> {
    let cap = cap.min(a.radius).min(b.radius);
    let mut r = None;
    for p in 0..=cap as i64 {
        if a.bit(p) != b.bit(p) || a.bit(-p) != b.bit(-p) {
            return r;
        }
        r = Some(p as u32);
    }
    r
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AsymptoticRow {
    #[serde(serialize_with = "crate::expanding::ser_big")]
    pub t: BigInt,
    pub min_digit: u64,
    pub radius: Option<u32>,
    /// `min_digit > 2N` forces `radius ≥ N`.
    pub consistent: bool,
}

/// Agreement of `S^{t^i} x[M]` with `x[M - r]` along times with `r(t^i) = r`.
pub fn asymptotic_check(
    sys: &ExpandingSystem,
    part: &dyn Partition,
    m: &Label,
    r: &NVector,
    count: u32,
    n: u32,
) -> Result<Vec<AsymptoticRow>, SubshiftError> {
    if r.is_zero() {
        return Err(SubshiftError::Precondition("r must be positive".into()));
    }
    let cap = 2 * n;
    let limit = point_window(sys, part, &m.minus(r), cap, Mode::Full, &BigInt::zero())?;
    let mut rows = Vec::new();
    for i in 0..count {
        let (t, digits) = time_for(sys, part, r, i as u64);
        let w = point_window(sys, part, m, cap, Mode::Full, &t)?;
        let radius = agreement_radius(&w, &limit, cap);
        let min_digit = *digits.last().expect("r is positive");
        let consistent = min_digit <= 2 * n as u64 || radius.is_some_and(|x| x >= n);
        rows.push(AsymptoticRow { t, min_digit, radius, consistent });
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InjectivityReport {
    #[serde(serialize_with = "crate::expanding::ser_big")]
    pub radius: BigInt,
    pub m_star: String,
    #[serde(serialize_with = "crate::expanding::ser_big")]
    pub position: BigInt,
    pub bit1: bool,
    pub bit2: bool,
}

/// A radius within which `x[M1]` and `x[M2]` differ, with the differing position.
pub fn injectivity_radius(
    sys: &ExpandingSystem,
    part: &dyn Partition,
    m1: &Label,
    m2: &Label,
    n: u32,
) -> Result<InjectivityReport, SubshiftError> {
    let w1 = m1.window(n)?;
    let w2 = m2.window(n)?;
    let m_star = first_difference(&w1, &w2)
        .ok_or_else(|| SubshiftError::Precondition("labels agree on the window".into()))?;
    let top = NVector::from_pairs((1..=n).map(|l| (l, n))).expect("positive indices");
    let (radius, _) = time_for(sys, part, &top, 0);
    let (position, _) = time_for(sys, part, &m_star, 0);
    let bit1 = in_a(sys, part, m1, &position, Mode::Full)?;
    let bit2 = in_a(sys, part, m2, &position, Mode::Full)?;
    debug_assert!(position <= radius);
    Ok(InjectivityReport { radius, m_star: m_star.to_string(), position, bit1, bit2 })
}

/// Smallest member (by norm, then canonical order) of the symmetric difference.
fn first_difference(a: &FiniteLabel, b: &FiniteLabel) -> Option<NVector> {
    let mut diff: Vec<NVector> = a
        .members()
        .into_iter()
        .filter(|m| !b.contains(m))
        .chain(b.members().into_iter().filter(|m| !a.contains(m)))
        .collect();
    diff.sort_by(|x, y| x.norm().cmp(&y.norm()).then_with(|| x.cmp(y)));
    diff.into_iter().next()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NonAsymptoticWitness {
    pub r: String,
    /// Which label contains `r`.
    pub in_first: bool,
    pub rows: Vec<Value>,
}

/// Times along which one point returns to `1` at the origin while the other
/// approaches the fixed point `e`.
pub fn nonasymptotic_witness(
    sys: &ExpandingSystem,
    part: &dyn Partition,
    m1: &Label,
    m2: &Label,
    n: u32,
    count: u32,
) -> Result<Option<NonAsymptoticWitness>, SubshiftError> {
    let w1 = m1.window(n)?;
    let w2 = m2.window(n)?;
    if w1 == w2 {
        return Err(SubshiftError::Precondition("labels agree on the window".into()));
    }
    let positive = |a: &FiniteLabel, b: &FiniteLabel| {
        let mut d: Vec<NVector> = a.members().into_iter().filter(|m| !m.is_zero() && !b.contains(m)).collect();
        d.sort_by(|x, y| x.norm().cmp(&y.norm()).then_with(|| x.cmp(y)));
        d.into_iter().next()
    };
    let (r, in_first, big, small) = match (positive(&w1, &w2), positive(&w2, &w1)) {
        (Some(r), _) => (r, true, m1, m2),
        (None, Some(r)) => (r, false, m2, m1),
        (None, None) => return Ok(None),
    };
    let mut rows = Vec::new();
    for i in 0..count {
        let floor = 2 * (n as u64 + i as u64);
        let (t, _) = time_for(sys, part, &r, floor);
        let a = point_window(sys, part, big, n, Mode::Full, &t)?;
        let b = point_window(sys, part, small, n, Mode::Full, &t)?;
        rows.push(serde_json::json!({
            "t": t.to_string(),
            "origin_bit": a.bit(0),
            "other_window_zero": b.is_all_zero(),
        }));
    }
    Ok(Some(NonAsymptoticWitness { r: r.to_string(), in_first, rows }))
}

/// Window around the absolute position `t` on the point `x[M]`, rendered compactly.
pub fn describe_times(ts: &[BigInt]) -> Vec<String> {
    ts.iter().map(|t| if t.abs() < BigInt::one() << 64 { t.to_string() } else { format!("~2^{}", t.bits()) }).collect()
}
