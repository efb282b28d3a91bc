use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use super::limits::limit_of_windows;
use super::{FiniteLabel, Label, LabelError, LimitVerdict, NVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    FiniteType,
    Finitary,
    Simple,
    Recurrent,
    StronglyRecurrent,
    Flat,
    Sublattice,
}

impl Property {
    pub const ALL: [Property; 7] = [
        Property::FiniteType,
        Property::Finitary,
        Property::Simple,
        Property::Recurrent,
        Property::StronglyRecurrent,
        Property::Flat,
        Property::Sublattice,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Property::FiniteType => "finite-type",
            Property::Finitary => "finitary",
            Property::Simple => "simple",
            Property::Recurrent => "recurrent",
            Property::StronglyRecurrent => "strongly-recurrent",
            Property::Flat => "flat",
            Property::Sublattice => "sublattice",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = LabelError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Property::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| LabelError::Precondition(format!("unknown property {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictKind {
    HoldsOnWindow,
    FailsWithWitness,
    Inconclusive,
}

impl VerdictKind {
    pub fn name(&self) -> &'static str {
        match self {
            VerdictKind::HoldsOnWindow => "holds-on-window",
            VerdictKind::FailsWithWitness => "fails-with-witness",
            VerdictKind::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    #[serde(rename = "verdict")]
    pub kind: VerdictKind,
    pub window: u32,
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub note: String,
}

impl Verdict {
    fn holds(n: u32, witness: Option<Value>, note: impl Into<String>) -> Verdict {
        Verdict { kind: VerdictKind::HoldsOnWindow, window: n, witness, note: note.into() }
    }

    fn fails(n: u32, witness: Value, note: impl Into<String>) -> Verdict {
        Verdict { kind: VerdictKind::FailsWithWitness, window: n, witness: Some(witness), note: note.into() }
    }

    fn inconclusive(n: u32, witness: Option<Value>, note: impl Into<String>) -> Verdict {
        Verdict { kind: VerdictKind::Inconclusive, window: n, witness, note: note.into() }
    }
}

/// A sequence `i ↦ r^i` of NVectors used to sample limits of `M - r^i`.
#[derive(Clone)]
pub struct Probe {
    pub name: String,
    term: Arc<dyn Fn(u32) -> NVector + Send + Sync>,
}

impl Probe {
    pub fn new<F: Fn(u32) -> NVector + Send + Sync + 'static>(name: impl Into<String>, f: F) -> Probe {
        Probe { name: name.into(), term: Arc::new(f) }
    }

    /// `r^i = base + χ(c + d·i)`.
    pub fn arithmetic(base: NVector, c: u32, d: u32) -> Probe {
        let name = format!("{base} + χ({c}+{d}i)");
        Probe::new(name, move |i| base.add(&NVector::chi(c + d * i)))
    }

    pub fn term(&self, i: u32) -> NVector {
        (self.term)(i)
    }
}

impl fmt::Debug for Probe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Probe({})", self.name)
    }
}

fn vecs(v: &[NVector]) -> Value {
    json!(v.iter().map(|m| m.to_string()).collect::<Vec<_>>())
}

/// Runs one property checker on `M ∩ B_N`.
pub fn property_check(m: &Label, which: Property, n: u32, horizon: u32) -> Result<Verdict, LabelError> {
    if n == 0 {
        return Err(LabelError::Precondition("window must be positive".into()));
    }
    match which {
        Property::FiniteType => finite_type(m, n),
        Property::Finitary => probe_check(m, n, horizon, true),
        Property::Simple => probe_check(m, n, horizon, false),
        Property::Recurrent => recurrent(m, n, horizon),
        Property::StronglyRecurrent => strongly_recurrent(m, n),
        Property::Flat => flat(m, n),
        Property::Sublattice => sublattice(m, n),
    }
}

fn unbounded_chain(len: u32) -> Vec<NVector> {
    (1..=len).map(|k| NVector::from_pairs([(1, k)]).expect("index 1")).collect()
}

/// Finite type inherited through the structure of a composite label.
fn finite_type_known(m: &Label) -> bool {
    match m {
        Label::Finite(_) => true,
        Label::Oracle(o) => {
            let t = o.tags();
            t.finite_type || (t.bound.is_some() && t.size_bound.is_some())
        }
        Label::Minus(b, _) | Label::Meet(b, _) | Label::Gamow(b, _) => finite_type_known(b),
        Label::Union(p) => p.iter().all(finite_type_known),
        Label::Intersect(p) => p.iter().any(finite_type_known),
        Label::Oplus(..) => false,
    }
}

fn finite_type(m: &Label, n: u32) -> Result<Verdict, LabelError> {
    if m.is_maximum() {
        return Ok(Verdict::fails(n, vecs(&unbounded_chain(n)), "unbounded chain kχ(1)"));
    }
    if finite_type_known(m) {
        let note = if m.as_finite().is_some() { "finite label" } else { "certified by construction" };
        return Ok(Verdict::holds(n, None, note));
    }
    if let Label::Oracle(o) = m {
        if let Some(chain) = o.chain(n as usize) {
            for w in chain.windows(2) {
                if !w[0].lt(&w[1]) {
                    return Err(LabelError::Precondition(format!("{} declares a non-increasing chain", o.name())));
                }
            }
            for c in &chain {
                if !m.contains(c)? {
                    return Err(LabelError::Precondition(format!("chain element {c} is not a member")));
                }
            }
            return Ok(Verdict::fails(n, vecs(&chain), "prefix of an infinite increasing chain"));
        }
    }
    let w = m.window(n)?;
    Ok(Verdict::inconclusive(
        n,
        Some(json!({ "window_max_norm": w.max_norm() })),
        "no certificate or chain available",
    ))
}

fn default_probes(extra: Vec<Probe>) -> Vec<Probe> {
    let mut out = extra;
    let mut bases = vec![NVector::zero()];
    bases.extend((1..=3).map(NVector::chi));
    for base in bases {
        for d in 1..=3 {
            for c in 0..d {
                out.push(Probe::arithmetic(base.clone(), c, d));
            }
        }
    }
    out
}

fn probe_list(m: &Label) -> Vec<Probe> {
    let extra = match m {
        Label::Oracle(o) => o.probes(),
        _ => Vec::new(),
    };
    default_probes(extra)
}

fn probe_check(m: &Label, n: u32, horizon: u32, finitary: bool) -> Result<Verdict, LabelError> {
    if m.as_finite().is_some() {
        return Ok(Verdict::holds(n, None, "finite label"));
    }
    if m.is_maximum() {
        return Ok(Verdict::fails(n, vecs(&unbounded_chain(n)), "not bounded"));
    }
    let horizon = horizon.max(4);
    let half = (n / 2).max(1);
    let candidates: Vec<FiniteLabel> = if finitary {
        Vec::new()
    } else {
        m.window(half)?.members().iter().map(|r| m.minus(r).window(n)).collect::<Result<_, _>>()?
    };
    let mut converged = 0;
    for p in probe_list(m) {
        let windows: Vec<FiniteLabel> = (1..=horizon).map(|i| m.minus(&p.term(i)).window(n)).collect::<Result<_, _>>()?;
        let report = limit_of_windows(&windows, n, horizon / 2)?;
        if report.verdict != LimitVerdict::ConvergedOnWindow {
            continue;
        }
        converged += 1;
        let lim = &report.liminf;
        if finitary {
            let far: Vec<NVector> = lim.maxima().iter().filter(|x| x.max_index() > half).cloned().collect();
            if !far.is_empty() {
                return Ok(Verdict::fails(
                    n,
                    json!({ "probe": p.name, "limit": lim.to_string(), "far_members": vecs(&far) }),
                    "limit keeps members that escape every fixed window",
                ));
            }
        } else if !lim.is_empty() && !candidates.contains(lim) {
            return Ok(Verdict::fails(
                n,
                json!({ "probe": p.name, "limit": lim.to_string() }),
                format!("limit differs from M - r for every r in B_{half}"),
            ));
        }
    }
    if converged == 0 {
        return Ok(Verdict::inconclusive(n, None, "no probe sequence converged on the window"));
    }
    Ok(Verdict::holds(n, None, format!("{converged} convergent probe sequences consistent")))
}

fn recurrent(m: &Label, n: u32, horizon: u32) -> Result<Verdict, LabelError> {
    if m.is_empty_label()? {
        return Ok(Verdict::holds(n, Some(json!(NVector::chi(1).to_string())), "∅ - r = ∅"));
    }
    if let Some(f) = m.as_finite() {
        let top = f.maxima().iter().max_by_key(|x| x.norm()).expect("nonempty").clone();
        return Ok(Verdict::fails(n, json!(top.to_string()), "a maximal member leaves M - r for every r > 0"));
    }
    if finite_type_known(m) {
        let top = m.window(n)?.maxima().iter().max_by_key(|x| x.norm()).expect("nonempty").clone();
        return Ok(Verdict::fails(n, json!(top.to_string()), "nonempty and of finite type, so M has maximal members"));
    }
    let target = m.window(n)?;
    let reach = n + horizon.max(1);
    let mut tried = 0;
    let mut try_r = |r: NVector| -> Result<Option<Verdict>, LabelError> {
        tried += 1;
        for x in target.maxima() {
            if !m.contains(&x.add(&r))? {
                return Ok(None);
            }
        }
        Ok(Some(Verdict::holds(n, Some(json!(r.to_string())), "(M - r) ∩ B_N = M ∩ B_N")))
    };
    for l in 1..=reach {
        if let Some(v) = try_r(NVector::chi(l))? {
            return Ok(v);
        }
    }
    for a in n + 1..=reach {
        for b in a..=reach {
            if let Some(v) = try_r(NVector::chi(a).add(&NVector::chi(b)))? {
                return Ok(v);
            }
        }
    }
    Ok(Verdict::inconclusive(n, None, format!("no witness among {tried} candidates")))
}

fn strongly_recurrent(m: &Label, n: u32) -> Result<Verdict, LabelError> {
    if m.is_maximum() {
        return Ok(Verdict::fails(n, vecs(&unbounded_chain(n)), "not bounded"));
    }
    if let Some(f) = m.as_finite() {
        return Ok(Verdict::fails(n, json!(f.to_string()), "finite label"));
    }
    let half = (n / 2).max(1);
    let whole = m.window(n)?;
    let mut unresolved = None;
    for r in m.window(half)?.members() {
        let shifted = m.minus(&r);
        let mut forced: BTreeSet<u32> = r.support().into_iter().collect();
        for l in 1..=n {
            let c = NVector::chi(l);
            if whole.contains(&c) && !shifted.contains(&c)? {
                forced.insert(l);
            }
        }
        if forced.iter().any(|&l| l > half) {
            return Ok(Verdict::fails(
                n,
                json!({ "m": r.to_string(), "F": forced }),
                "the exceptional set keeps growing with the window",
            ));
        }
        if unresolved.is_none() {
            for w in whole.members() {
                if w.support().iter().any(|l| forced.contains(l)) {
                    continue;
                }
                if !shifted.contains(&w)? {
                    unresolved = Some(json!({ "m": r.to_string(), "w": w.to_string() }));
                    break;
                }
            }
        }
    }
    match unresolved {
        Some(w) => Ok(Verdict::inconclusive(n, Some(w), "member outside the forced set not in M - m")),
        None => Ok(Verdict::holds(n, None, "forced sets stay inside the half window")),
    }
}

fn flat(m: &Label, n: u32) -> Result<Verdict, LabelError> {
    let w = m.window(n)?;
    let roof = w.roof();
    for x in w.maxima() {
        let top = roof.restrict(|l| x.get(l) > 0);
        if !m.contains(&top)? {
            return Ok(Verdict::fails(n, json!({ "m": x.to_string(), "roof_restriction": top.to_string() }), "ρ|supp m ∉ M"));
        }
    }
    Ok(Verdict::holds(n, None, ""))
}

fn sublattice(m: &Label, n: u32) -> Result<Verdict, LabelError> {
    let w = m.window(n)?;
    if let [a, b, ..] = w.maxima() {
        return Ok(Verdict::fails(n, json!({ "m1": a.to_string(), "m2": b.to_string(), "join": a.join(b).to_string() }), "m1 ∨ m2 ∉ M"));
    }
    Ok(Verdict::holds(n, None, ""))
}
