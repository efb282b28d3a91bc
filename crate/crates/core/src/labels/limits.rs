use std::collections::BTreeMap;

use serde::Serialize;

use super::{FiniteLabel, Label, LabelError, NVector};

/// Ultrametric distance resolved on a finite window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "exponent", rename_all = "kebab-case")]
pub enum Distance {
    /// Exactly `2^-N`.
    Exact(u32),
    /// At most `2^-N`: the windows agree up to the resolution used.
    AtMost(u32),
}

impl Distance {
    pub fn exponent(&self) -> u32 {
        match self {
            Distance::Exact(n) | Distance::AtMost(n) => *n,
        }
    }

    pub fn value(&self) -> f64 {
        0.5f64.powi(self.exponent() as i32)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LimitVerdict {
    ConvergedOnWindow,
    /// Some member keeps entering and leaving the sequence inside the margin.
    NotConvergent,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitReport {
    pub window: u32,
    pub horizon: u32,
    pub margin: u32,
    pub limsup: FiniteLabel,
    pub liminf: FiniteLabel,
    pub verdict: LimitVerdict,
    /// Members whose membership still changes inside the margin.
    pub unsettled: Vec<NVector>,
}

impl LimitReport {
    pub fn limit(&self) -> Option<&FiniteLabel> {
        (self.verdict == LimitVerdict::ConvergedOnWindow).then_some(&self.liminf)
    }
}

/// `LIMSUP` and `LIMINF` of `seq(1), …, seq(horizon)` restricted to `B_N`.
///
/// Members present somewhere in the final `margin` indices form the limsup
/// window; members present throughout them form the liminf window.
pub fn limit<F>(seq: F, n: u32, horizon: u32, margin: u32) -> Result<LimitReport, LabelError>
where
    F: Fn(u32) -> Result<Label, LabelError>,
{
    let windows: Vec<FiniteLabel> = (1..=horizon).map(|i| seq(i)?.window(n)).collect::<Result<_, _>>()?;
    limit_of_windows(&windows, n, margin)
}

pub(crate) fn limit_of_windows(windows: &[FiniteLabel], n: u32, margin: u32) -> Result<LimitReport, LabelError> {
    let horizon = windows.len() as u32;
    if horizon == 0 {
        return Err(LabelError::Precondition("horizon must be positive".into()));
    }
    let margin = margin.clamp(1, horizon);
    let mut flags: BTreeMap<NVector, Vec<bool>> = BTreeMap::new();
    for w in windows {
        for m in w.members() {
            flags.entry(m).or_insert_with(|| Vec::with_capacity(windows.len()));
        }
    }
    for (m, f) in flags.iter_mut() {
        f.extend(windows.iter().map(|w| w.contains(m)));
    }
    let start = (horizon - margin) as usize;
    let mut sup = Vec::new();
    let mut inf = Vec::new();
    let mut unsettled = Vec::new();
    let mut oscillating = false;
    for (m, f) in &flags {
        let tail = &f[start..];
        let any = tail.iter().any(|&b| b);
        let all = tail.iter().all(|&b| b);
        if any {
            sup.push(m.clone());
        }
        if all {
            inf.push(m.clone());
        }
        if any && !all {
            let flips = tail.windows(2).filter(|w| w[0] != w[1]).count();
            if flips >= 2 {
                oscillating = true;
            }
            unsettled.push(m.clone());
        }
    }
    let verdict = if unsettled.is_empty() {
        LimitVerdict::ConvergedOnWindow
    } else if oscillating {
        LimitVerdict::NotConvergent
    } else {
        LimitVerdict::Inconclusive
    };
    Ok(LimitReport {
        window: n,
        horizon,
        margin,
        limsup: FiniteLabel::generated(sup),
        liminf: FiniteLabel::generated(inf),
        verdict,
        unsettled,
    })
}

/// `LIM_outer LIM_inner seq(outer, inner)` on `B_N`.
///
/// The inner limits run to `4·horizon` with margin `2·horizon`, so every inner
/// tail lies beyond every outer index.
pub fn iterated_limit<F>(seq: F, n: u32, horizon: u32, margin: u32) -> Result<LimitReport, LabelError>
where
    F: Fn(u32, u32) -> Result<Label, LabelError>,
{
    let inner_horizon = horizon.saturating_mul(4).max(4);
    let mut inner = Vec::with_capacity(horizon as usize);
    for i in 1..=horizon {
        let r = limit(|j| seq(i, j), n, inner_horizon, inner_horizon / 2)?;
        match r.limit() {
            Some(l) => inner.push(l.clone()),
            None => {
                return Ok(LimitReport { verdict: LimitVerdict::Inconclusive, ..r });
            }
        }
    }
    limit_of_windows(&inner, n, margin)
}
