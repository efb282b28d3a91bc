//! Numeration of integers by a b-expanding digit function.
//!
//! A digit function `k` is odd (`k(-n) = -k(n)`) and grows fast enough that
//! `k(n+1) > b * (k(0) + ... + k(n))`. Integers that are sums of `k(j)` over
//! distinct absolute indices form the set `IP(k)`; each has a unique expansion.

use std::fmt;
use std::sync::{Arc, RwLock};

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default validation depth for the growth invariants.
pub const DEFAULT_N_MAX: u32 = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExpandError {
    #[error("growth violated at n={n}: k({next}) = {k_next} is not > b*sum(k(0..={n})) = {bound}")]
    Growth {
        n: u32,
        next: u32,
        k_next: String,
        bound: String,
    },
    #[error("k(1) = {k1} is below b+1 = {min}")]
    FirstDigit { k1: String, min: u32 },
    #[error("b must be at least 3, got {0}")]
    SmallB(u32),
    #[error("digit base must be at least 2, got {0}")]
    SmallBase(u64),
    #[error("digit table must be nonempty")]
    EmptyTable,
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
    #[error("truncation index {r} out of range 0..={len}")]
    TruncRange { r: usize, len: usize },
    #[error("digit position {i} out of range 1..={len}")]
    DigitRange { i: usize, len: usize },
    #[error("interval is empty: lo > hi")]
    EmptyInterval,
    #[error("restricted sequence must be nonzero with strictly increasing absolute values within the depth")]
    BadSequence,
}

/// How `k(n)` is produced for `n >= 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DigitRule {
    /// `k(n) = base^(n - offset)` for `n >= 1`.
    Power { base: u64, offset: u32 },
    /// Explicit values `k(1), k(2), ...`; past the table the minimal admissible
    /// growth `k(n+1) = b * sum + 1` is used.
    Table(Vec<BigInt>),
}

#[derive(Debug, Clone)]
struct KTable {
    /// `k[n]` for `n >= 0`, with `k[0] = 0`.
    k: Vec<BigInt>,
    /// `sums[n] = k(0) + ... + k(n)`.
    sums: Vec<BigInt>,
}

/// Parameters of a b-expanding function plus a lazily extended value table.
pub struct ExpandingSystem {
    b: u32,
    rule: DigitRule,
    preset: Option<String>,
    memo: RwLock<Arc<KTable>>,
}

impl fmt::Debug for ExpandingSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExpandingSystem")
            .field("b", &self.b)
            .field("rule", &self.rule)
            .field("preset", &self.preset)
            .finish()
    }
}

impl Clone for ExpandingSystem {
    fn clone(&self) -> Self {
        let memo = self.memo.read().expect("memo lock").clone();
        ExpandingSystem {
            b: self.b,
            rule: self.rule.clone(),
            preset: self.preset.clone(),
            memo: RwLock::new(memo),
        }
    }
}

/// Wire form of a system: either a preset name or explicit `(b, base)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SystemSpec {
    Preset { preset: String },
    Params { b: u32, base: u64 },
}

impl ExpandingSystem {
    /// `b = 5`, `k(n) = 7^n`.
    pub fn strict() -> Self {
        Self::build(5, DigitRule::Power { base: 7, offset: 0 }, Some("strict".into()), DEFAULT_N_MAX)
            .expect("strict preset is valid")
    }

    /// `b = 3`, `k(n) = 4^n`.
    pub fn paper() -> Self {
        Self::build(3, DigitRule::Power { base: 4, offset: 0 }, Some("paper".into()), DEFAULT_N_MAX)
            .expect("paper preset is valid")
    }

    pub fn preset(name: &str) -> Result<Self, ExpandError> {
        match name {
            "strict" => Ok(Self::strict()),
            "paper" => Ok(Self::paper()),
            other => Err(ExpandError::UnknownPreset(other.to_string())),
        }
    }

    pub fn with_base(b: u32, base: u64) -> Result<Self, ExpandError> {
        Self::build(b, DigitRule::Power { base, offset: 0 }, None, DEFAULT_N_MAX)
    }

    pub fn from_spec(spec: &SystemSpec) -> Result<Self, ExpandError> {
        match spec {
            SystemSpec::Preset { preset } => Self::preset(preset),
            SystemSpec::Params { b, base } => Self::with_base(*b, *base),
        }
    }

    pub fn spec(&self) -> SystemSpec {
        match (&self.preset, &self.rule) {
            (Some(p), _) => SystemSpec::Preset { preset: p.clone() },
            (None, DigitRule::Power { base, offset: 0 }) => SystemSpec::Params { b: self.b, base: *base },
            _ => SystemSpec::Params { b: self.b, base: 0 },
        }
    }

    /// Validates oddness-compatible growth and `k(1) >= b+1` up to `n_max`.
    pub fn build(b: u32, rule: DigitRule, preset: Option<String>, n_max: u32) -> Result<Self, ExpandError> {
        if b < 3 {
            return Err(ExpandError::SmallB(b));
        }
        match &rule {
            DigitRule::Power { base, .. } if *base < 2 => return Err(ExpandError::SmallBase(*base)),
            DigitRule::Table(t) if t.is_empty() => return Err(ExpandError::EmptyTable),
            _ => {}
        }
        let sys = ExpandingSystem {
            b,
            rule,
            preset,
            memo: RwLock::new(Arc::new(KTable { k: vec![BigInt::zero()], sums: vec![BigInt::zero()] })),
        };
        let tab = sys.table(n_max.max(1) as usize + 1);
        let bb = BigInt::from(b);
        for n in 0..=n_max as usize {
            let bound = &bb * &tab.sums[n];
            if tab.k[n + 1] <= bound {
                return Err(ExpandError::Growth {
                    n: n as u32,
                    next: n as u32 + 1,
                    k_next: tab.k[n + 1].to_string(),
                    bound: bound.to_string(),
                });
            }
        }
        if tab.k[1] < BigInt::from(b + 1) {
            return Err(ExpandError::FirstDigit { k1: tab.k[1].to_string(), min: b + 1 });
        }
        Ok(sys)
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    pub fn rule(&self) -> &DigitRule {
        &self.rule
    }

    pub fn preset_name(&self) -> Option<&str> {
        self.preset.as_deref()
    }

    /// Growth ratio used for density exponents (`log_base 3`).
    pub fn digit_base(&self) -> f64 {
        match &self.rule {
            DigitRule::Power { base, .. } => *base as f64,
            DigitRule::Table(_) => {
                let t = self.table(4);
                t.k[3].to_f64().unwrap_or(f64::MAX) / t.k[2].to_f64().unwrap_or(1.0)
            }
        }
    }

    fn raw_k(&self, n: usize, prev_sum: &BigInt) -> BigInt {
        match &self.rule {
            DigitRule::Power { base, offset } => {
                let e = n as i64 - *offset as i64;
                if e < 0 {
                    BigInt::zero()
                } else {
                    num_traits::pow(BigInt::from(*base), e as usize)
                }
            }
            DigitRule::Table(t) => {
                if n <= t.len() {
                    t[n - 1].clone()
                } else {
                    BigInt::from(self.b) * prev_sum + 1
                }
            }
        }
    }

    /// Snapshot of the memo covering indices `0..=upto` (extends on demand).
    fn table(&self, upto: usize) -> Arc<KTable> {
        {
            let g = self.memo.read().expect("memo lock");
            if g.k.len() > upto {
                return g.clone();
            }
        }
        let mut g = self.memo.write().expect("memo lock");
        if g.k.len() <= upto {
            let mut t = (**g).clone();
            while t.k.len() <= upto {
                let n = t.k.len();
                let v = self.raw_k(n, &t.sums[n - 1]);
                let s = &t.sums[n - 1] + &v;
                t.k.push(v);
                t.sums.push(s);
            }
            *g = Arc::new(t);
        }
        g.clone()
    }

    /// `k(n)` with `k(-n) = -k(n)` and `k(0) = 0`.
    pub fn k(&self, n: i64) -> BigInt {
        let a = n.unsigned_abs() as usize;
        let v = self.table(a).k[a].clone();
        if n < 0 {
            -v
        } else {
            v
        }
    }

    /// `k(0) + ... + k(n)` for `n >= 0`.
    pub fn ksum(&self, n: u32) -> BigInt {
        self.table(n as usize).sums[n as usize].clone()
    }

    /// `sk(n)`: `1` for `|n| <= 1`, otherwise `k(1) + ... + k(|n|-1)`.
    pub fn sk(&self, n: i64) -> BigInt {
        let a = n.unsigned_abs();
        if a <= 1 {
            BigInt::one()
        } else {
            self.ksum(a as u32 - 1)
        }
    }

    /// Smallest `n` with `k(n) - sum(k(1..n)) > bound`: every element of IP(k)
    /// with absolute value at most `bound` uses only indices below `n`.
    pub fn reach_index(&self, bound: &BigInt) -> u32 {
        let mut n = 1usize;
        loop {
            let t = self.table(n);
            if &t.k[n] - &t.sums[n - 1] > *bound {
                return n as u32;
            }
            n += 1;
        }
    }

    /// Unique expansion of `t`, or `None` when `t` is not in IP(k).
    pub fn expand(&self, t: &BigInt) -> Option<Expansion> {
        let mut digits: Vec<i64> = Vec::new();
        let mut rest = t.clone();
        let b = BigInt::from(self.b);
        let mut limit: Option<usize> = None;
        while !rest.is_zero() {
            let a = rest.abs();
            let ba = &b * &a;
            let mut hi = 1usize;
            // exponential search for the first n with (b-1)k(n) > b|t|
            loop {
                let tab = self.table(hi);
                if (&b - 1u32) * &tab.k[hi] > ba {
                    break;
                }
                hi *= 2;
            }
            let tab = self.table(hi);
            let n = tab.k[1..=hi].partition_point(|kn| (&b - 1u32) * kn <= ba);
            if n == 0 {
                return None;
            }
            if ba > (&b + 1u32) * &tab.k[n] {
                return None;
            }
            if let Some(l) = limit {
                if n >= l {
                    return None;
                }
            }
            let j = if rest.sign() == Sign::Minus { -(n as i64) } else { n as i64 };
            rest -= self.k(j);
            digits.push(j);
            limit = Some(n);
        }
        Some(Expansion { digits, value: t.clone() })
    }

    pub fn is_expanding(&self, t: &BigInt) -> bool {
        self.expand(t).is_some()
    }

    /// Value of a digit sequence.
    pub fn value_of(&self, digits: &[i64]) -> BigInt {
        digits.iter().map(|&j| self.k(j)).sum()
    }

    /// Builds an expansion from digits, checking the strict decrease of `|j|`.
    pub fn expansion_from_digits(&self, digits: Vec<i64>) -> Option<Expansion> {
        if digits.contains(&0) {
            return None;
        }
        if digits.windows(2).any(|w| w[0].abs() <= w[1].abs()) {
            return None;
        }
        let value = self.value_of(&digits);
        Some(Expansion { digits, value })
    }

    /// Checks that `t - k(j_i)` is expanding while `t + k(j_i)` is not.
    pub fn neighbor_exclusion(&self, e: &Expansion, i: usize) -> Result<NeighborReport, ExpandError> {
        if i == 0 || i > e.digits.len() {
            return Err(ExpandError::DigitRange { i, len: e.digits.len() });
        }
        let kj = self.k(e.digits[i - 1]);
        let minus = &e.value - &kj;
        let plus = &e.value + &kj;
        let minus_in = self.is_expanding(&minus);
        let plus_in = self.is_expanding(&plus);
        Ok(NeighborReport { minus, plus, minus_in, plus_in, verified: minus_in && !plus_in })
    }

    /// Lists IP(k), IP+(k) or a restricted sumset inside `[lo, hi]`.
    pub fn ip_in_interval(&self, lo: &BigInt, hi: &BigInt, mode: &IpMode) -> Result<IntervalListing, ExpandError> {
        if lo > hi {
            return Err(ExpandError::EmptyInterval);
        }
        let bound = lo.abs().max(hi.abs());
        match mode {
            IpMode::Full | IpMode::Positive => {
                let m = self.reach_index(&bound) as usize;
                let tab = self.table(m);
                let mut out = Vec::new();
                collect(&tab, m, &BigInt::zero(), lo, hi, matches!(mode, IpMode::Positive), &mut out);
                out.sort();
                Ok(IntervalListing {
                    lo: lo.clone(),
                    hi: hi.clone(),
                    mode: mode.clone(),
                    members: out,
                    complete_radius: None,
                    warning: None,
                })
            }
            IpMode::Restricted { seq, depth } => self.restricted(lo, hi, seq, *depth, mode),
        }
    }

    fn restricted(
        &self,
        lo: &BigInt,
        hi: &BigInt,
        seq: &[i64],
        depth: u32,
        mode: &IpMode,
    ) -> Result<IntervalListing, ExpandError> {
        if seq.iter().any(|&a| a == 0 || a.unsigned_abs() > depth as u64)
            || seq.windows(2).any(|w| w[0].abs() >= w[1].abs())
        {
            return Err(ExpandError::BadSequence);
        }
        let d = depth as usize;
        let tab = self.table(d + 1);
        // per index: the set of admissible contributions
        let mut choices: Vec<Vec<BigInt>> = vec![Vec::new(); d + 1];
        let mut lo_rest = vec![BigInt::zero(); d + 1];
        let mut hi_rest = vec![BigInt::zero(); d + 1];
        for n in 1..=d {
            let kn = tab.k[n].clone();
            let c = match seq.iter().find(|a| a.unsigned_abs() as usize == n) {
                Some(&a) => {
                    let ka = if a < 0 { -kn.clone() } else { kn.clone() };
                    vec![BigInt::zero(), -ka.clone(), -(ka * BigInt::from(2))]
                }
                None => vec![BigInt::zero(), kn.clone(), -kn],
            };
            let mn = c.iter().min().cloned().unwrap_or_default();
            let mx = c.iter().max().cloned().unwrap_or_default();
            lo_rest[n] = &lo_rest[n - 1] + mn;
            hi_rest[n] = &hi_rest[n - 1] + mx;
            choices[n] = c;
        }
        let mut out = Vec::new();
        restricted_collect(&choices, &lo_rest, &hi_rest, d, BigInt::zero(), lo, hi, &mut out);
        out.sort();
        out.dedup();
        let radius = &tab.k[d + 1] - &tab.sums[d] * 2 - 1;
        let bound = lo.abs().max(hi.abs());
        let warning = if bound > radius {
            Some(format!("depth {depth} guarantees completeness only within radius {radius}"))
        } else {
            None
        };
        Ok(IntervalListing {
            lo: lo.clone(),
            hi: hi.clone(),
            mode: mode.clone(),
            members: out,
            complete_radius: Some(radius),
            warning,
        })
    }

    /// Count of IP(k) in `[1, n]` for each `n`, with the bound `(3n)^(log_base 3)`.
    pub fn density_profile(&self, ns: &[BigInt]) -> Result<Vec<DensityRow>, ExpandError> {
        let exponent = 3f64.ln() / self.digit_base().ln();
        ns.iter()
            .map(|n| {
                let l = self.ip_in_interval(&BigInt::one(), n, &IpMode::Full)?;
                let count = l.members.len() as u64;
                let nf = n.to_f64().unwrap_or(f64::INFINITY);
                let bound = (3.0 * nf).powf(exponent);
                Ok(DensityRow {
                    n: n.clone(),
                    count,
                    ratio: count as f64 / nf,
                    bound,
                    exponent,
                    within_bound: (count as f64) <= bound,
                })
            })
            .collect()
    }
}

fn collect(tab: &KTable, m: usize, base: &BigInt, lo: &BigInt, hi: &BigInt, positive: bool, out: &mut Vec<BigInt>) {
    if base >= lo && base <= hi {
        out.push(base.clone());
    }
    for n in 1..m {
        let reach = &tab.sums[n - 1];
        for neg in [false, true] {
            if neg && positive {
                continue;
            }
            let center = if neg { base - &tab.k[n] } else { base + &tab.k[n] };
            if &center + reach < *lo || &center - reach > *hi {
                continue;
            }
            collect(tab, n, &center, lo, hi, positive, out);
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn restricted_collect(
    choices: &[Vec<BigInt>],
    lo_rest: &[BigInt],
    hi_rest: &[BigInt],
    n: usize,
    acc: BigInt,
    lo: &BigInt,
    hi: &BigInt,
    out: &mut Vec<BigInt>,
) {
    if n == 0 {
        if &acc >= lo && &acc <= hi {
            out.push(acc);
        }
        return;
    }
    for c in &choices[n] {
        let v = &acc + c;
        if &v + &hi_rest[n - 1] < *lo || &v + &lo_rest[n - 1] > *hi {
            continue;
        }
        restricted_collect(choices, lo_rest, hi_rest, n - 1, v, lo, hi, out);
    }
}

/// The unique signed-digit decomposition of an expanding time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expansion {
    digits: Vec<i64>,
    value: BigInt,
}

impl Expansion {
    pub fn empty() -> Self {
        Expansion { digits: Vec::new(), value: BigInt::zero() }
    }

    pub fn digits(&self) -> &[i64] {
        &self.digits
    }

    pub fn value(&self) -> &BigInt {
        &self.value
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// `|j_r|`, the smallest absolute digit index (None for the empty expansion).
    pub fn last_index(&self) -> Option<u64> {
        self.digits.last().map(|j| j.unsigned_abs())
    }

    pub fn is_positive(&self) -> bool {
        self.digits.iter().all(|&j| j > 0)
    }

    /// Splits into the `r`-truncation and its residual.
    pub fn truncate(&self, sys: &ExpandingSystem, r: usize) -> Result<(Expansion, Expansion), ExpandError> {
        if r > self.digits.len() {
            return Err(ExpandError::TruncRange { r, len: self.digits.len() });
        }
        let head = self.digits[..r].to_vec();
        let tail = self.digits[r..].to_vec();
        let hv = sys.value_of(&head);
        let tv = &self.value - &hv;
        Ok((Expansion { digits: head, value: hv }, Expansion { digits: tail, value: tv }))
    }

    pub fn to_json(&self) -> ExpansionJson {
        ExpansionJson { t: self.value.to_string(), digits: self.digits.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionJson {
    pub t: String,
    pub digits: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NeighborReport {
    #[serde(serialize_with = "ser_big")]
    pub minus: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub plus: BigInt,
    pub minus_in: bool,
    pub plus_in: bool,
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IpMode {
    Full,
    Positive,
    /// `IP(k - k|S) - IP(k|S)` with digits bounded by `depth`; `seq` lists every
    /// term of `S` whose absolute value is at most `depth`.
    Restricted { seq: Vec<i64>, depth: u32 },
}

impl IpMode {
    pub fn name(&self) -> &'static str {
        match self {
            IpMode::Full => "full",
            IpMode::Positive => "positive",
            IpMode::Restricted { .. } => "restricted",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalListing {
    pub lo: BigInt,
    pub hi: BigInt,
    pub mode: IpMode,
    pub members: Vec<BigInt>,
    pub complete_radius: Option<BigInt>,
    pub warning: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalJson {
    pub lo: String,
    pub hi: String,
    pub mode: String,
    pub members: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub warning: Option<String>,
}

impl IntervalListing {
    pub fn to_json(&self) -> IntervalJson {
        IntervalJson {
            lo: self.lo.to_string(),
            hi: self.hi.to_string(),
            mode: self.mode.name().to_string(),
            members: self.members.iter().map(|m| m.to_string()).collect(),
            warning: self.warning.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityRow {
    #[serde(serialize_with = "ser_big")]
    pub n: BigInt,
    pub count: u64,
    pub ratio: f64,
    pub bound: f64,
    pub exponent: f64,
    pub within_bound: bool,
}

pub(crate) fn ser_big<S: serde::Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}
