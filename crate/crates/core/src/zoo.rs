//! Built-in labels for the worked examples, with their expected properties.

use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::analysis;
use crate::labels::{
    iterated_limit, limit, property_check, theta_finite, FiniteLabel, Label, LabelError, LabelOracle, NVector,
    OracleTags, Probe, Property, VerdictKind,
};
use crate::ordinals;

/// Optional construction parameters of a builtin label.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZooParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    /// Binary word, repeated periodically to an infinite sequence.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<String>,
    /// First element of the index progression `L`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<u32>,
    /// Step of the index progression `L`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<u32>,
}

type Pred = Arc<dyn Fn(&NVector) -> bool + Send + Sync>;
type Chain = Arc<dyn Fn(usize) -> Vec<NVector> + Send + Sync>;

/// Membership oracle assembled from a predicate and construction metadata.
#[derive(Clone)]
struct ZooOracle {
    key: String,
    params: ZooParams,
    tags: OracleTags,
    pred: Pred,
    chain: Option<Chain>,
    probes: Vec<Probe>,
    roof: Option<Arc<dyn Fn(u32) -> u32 + Send + Sync>>,
}

impl ZooOracle {
    fn new<P: Fn(&NVector) -> bool + Send + Sync + 'static>(key: &str, params: &ZooParams, pred: P) -> Self {
        ZooOracle {
            key: key.into(),
            params: params.clone(),
            tags: OracleTags::default(),
            pred: Arc::new(pred),
            chain: None,
            probes: Vec::new(),
            roof: None,
        }
    }

    fn bounded(mut self, bound: u32, size: Option<u32>) -> Self {
        self.tags.bound = Some(bound);
        self.tags.size_bound = size;
        self
    }

    fn finite_type(mut self) -> Self {
        self.tags.finite_type = true;
        self
    }

    fn chain<C: Fn(usize) -> Vec<NVector> + Send + Sync + 'static>(mut self, c: C) -> Self {
        self.chain = Some(Arc::new(c));
        self
    }

    fn roof<R: Fn(u32) -> u32 + Send + Sync + 'static>(mut self, r: R) -> Self {
        self.roof = Some(Arc::new(r));
        self
    }

    fn probe(mut self, p: Probe) -> Self {
        self.probes.push(p);
        self
    }

    fn label(self) -> Label {
        Label::oracle(self)
    }
}

impl LabelOracle for ZooOracle {
    fn name(&self) -> String {
        self.key.clone()
    }
    fn contains(&self, m: &NVector) -> bool {
        (self.pred)(m)
    }
    fn roof_bound(&self, n: u32) -> u32 {
        match (&self.roof, self.tags.bound) {
            (Some(r), _) => r(n),
            (None, Some(b)) => b,
            (None, None) => n,
        }
    }
    fn builtin(&self) -> Value {
        let mut v = serde_json::to_value(&self.params).expect("params serialize");
        let obj = v.as_object_mut().expect("params object");
        obj.insert("kind".into(), json!("builtin"));
        obj.insert("name".into(), json!(self.key));
        v
    }
    fn tags(&self) -> OracleTags {
        self.tags
    }
    fn chain(&self, len: usize) -> Option<Vec<NVector>> {
        self.chain.as_ref().map(|c| c(len))
    }
    fn probes(&self) -> Vec<Probe> {
        self.probes.clone()
    }
}

fn entries_le(m: &NVector, b: u32) -> bool {
    m.entries().iter().all(|p| p.1 <= b)
}

fn chi_prefix_chain(step: u32, start: u32) -> impl Fn(usize) -> Vec<NVector> {
    move |len| (1..=len as u32).map(|k| NVector::chi_set((0..k).map(|i| start + step * i))).collect()
}

/// The progression `L = {start + step·i : i ≥ 0}`.
#[derive(Debug, Clone, Copy)]
struct Progression {
    start: u32,
    step: u32,
}

impl Progression {
    fn from(p: &ZooParams) -> Result<Progression, LabelError> {
        let start = p.start.unwrap_or(1);
        let step = p.step.unwrap_or(1);
        if start == 0 || step == 0 {
            return Err(LabelError::BadParam("start and step must be positive".into()));
        }
        Ok(Progression { start, step })
    }

    fn contains(&self, l: u32) -> bool {
        l >= self.start && (l - self.start).is_multiple_of(self.step)
    }
}

// ex11(a): blocks A_1, B_1, A_2, B_2, … with #A_n = n and #B_n = 2^n.

/// Where an index falls in the ex11(a) block layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ex11Slot {
    A { n: u32, pos: u32 },
    B { n: u32, pos: u32 },
}

/// First index of `A_n`.
pub fn ex11a_a_start(n: u32) -> u32 {
    (1..n).map(|j| j + (1u32 << j)).sum::<u32>() + 1
}

/// First index of `B_n`.
pub fn ex11a_b_start(n: u32) -> u32 {
    ex11a_a_start(n) + n
}

/// The set `A_n`.
pub fn ex11a_block_a(n: u32) -> Vec<u32> {
    let s = ex11a_a_start(n);
    (s..s + n).collect()
}

/// `ℓ_A` for `A ⊂ A_n`, via the binary rank of `A` inside `A_n`.
pub fn ex11a_ell(n: u32, a: &[u32]) -> u32 {
    let s = ex11a_a_start(n);
    let rank: u32 = a.iter().map(|&i| 1u32 << (i - s)).sum();
    ex11a_b_start(n) + rank
}

pub fn ex11a_slot(l: u32) -> Ex11Slot {
    let mut n = 1;
    loop {
        let a = ex11a_a_start(n);
        let b = a + n;
        if l < b {
            return Ex11Slot::A { n, pos: l - a };
        }
        if l < b + (1 << n) {
            return Ex11Slot::B { n, pos: l - b };
        }
        n += 1;
    }
}

/// `M_n = ⟨χ(ℓ_A) + χ(i) : i ∈ A ⊂ A_n⟩` as a finite label.
pub fn ex11a_finite(n: u32) -> FiniteLabel {
    let a = ex11a_block_a(n);
    let mut gens = Vec::new();
    for mask in 1u32..(1 << n) {
        let sub: Vec<u32> = a.iter().enumerate().filter(|(j, _)| mask >> j & 1 == 1).map(|(_, &i)| i).collect();
        let l = ex11a_ell(n, &sub);
        for &i in &sub {
            gens.push(NVector::chi_set([l, i]));
        }
    }
    FiniteLabel::generated(gens)
}

fn ex11a_member(m: &NVector) -> bool {
    if !entries_le(m, 1) || m.size() > 2 {
        return false;
    }
    let mut a_part = None;
    let mut b_part = None;
    for l in m.support() {
        match ex11a_slot(l) {
            Ex11Slot::A { n, pos } => a_part = Some((n, pos)),
            Ex11Slot::B { n, pos } => {
                if b_part.is_some() {
                    return false;
                }
                b_part = Some((n, pos));
            }
        }
    }
    match (a_part, b_part) {
        (Some(_), None) if m.size() == 1 => true,
        (None, Some((_, pos))) => m.size() == 1 && pos > 0,
        (Some((na, pa)), Some((nb, pb))) => na == nb && pb >> pa & 1 == 1,
        (None, None) => true,
        _ => false,
    }
}

/// `N_n = ⟨χ(A_n)⟩` placed on the ex11(a) blocks, as one label over all `n`.
fn ex11a_flat_member(m: &NVector) -> bool {
    if !entries_le(m, 1) {
        return false;
    }
    let mut block = None;
    for l in m.support() {
        match ex11a_slot(l) {
            Ex11Slot::A { n, .. } => {
                if block.is_some_and(|b| b != n) {
                    return false;
                }
                block = Some(n);
            }
            Ex11Slot::B { .. } => return false,
        }
    }
    true
}

// ex11(b): L = odd indices, B = even indices, ℓ_A = 2(rank(A) + 1).

pub fn ex11b_ell(a: &[u32]) -> u32 {
    let rank: u32 = a.iter().map(|&i| 1u32 << ((i - 1) / 2)).sum();
    2 * (rank + 1)
}

fn ex11b_member(m: &NVector) -> bool {
    if !entries_le(m, 1) || m.size() > 2 {
        return false;
    }
    let odds: Vec<u32> = m.support().into_iter().filter(|l| l % 2 == 1).collect();
    let evens: Vec<u32> = m.support().into_iter().filter(|l| l % 2 == 0).collect();
    match (odds.as_slice(), evens.as_slice()) {
        ([], []) | ([_], []) => true,
        ([], [e]) => *e > 2,
        ([i], [e]) => {
            let rank = e / 2 - 1;
            let bit = (i - 1) / 2;
            bit < 32 && rank >> bit & 1 == 1
        }
        _ => false,
    }
}

// ex10(c): binary words in length-lex order, ℓ_w = 2^{len w} + value(w).

/// `ℓ_w` for a binary word.
pub fn word_index(w: &[u8]) -> u32 {
    let v = w.iter().fold(0u32, |acc, &b| acc * 2 + b as u32);
    (1u32 << w.len()) + v
}

/// Inverse of [`word_index`].
pub fn index_word(l: u32) -> Vec<u8> {
    let len = 31 - l.leading_zeros();
    (0..len).rev().map(|j| (l >> j & 1) as u8).collect()
}

fn parse_word(x: &str) -> Result<Vec<u8>, LabelError> {
    if x.is_empty() || x.len() > 30 {
        return Err(LabelError::BadParam("x must be a nonempty binary word of length at most 30".into()));
    }
    x.bytes()
        .map(|c| match c {
            b'0' => Ok(0),
            b'1' => Ok(1),
            _ => Err(LabelError::BadParam(format!("x must be binary, got {x:?}"))),
        })
        .collect()
}

fn on_path(x: &[u8], l: u32) -> bool {
    if l < 2 {
        return false;
    }
    let w = index_word(l);
    w.iter().enumerate().all(|(i, &b)| b == x[i % x.len()])
}

fn comparable(a: u32, b: u32) -> bool {
    let (wa, wb) = (index_word(a), index_word(b));
    let k = wa.len().min(wb.len());
    wa[..k] == wb[..k]
}

fn ex10c_member(m: &NVector, x: Option<&[u8]>) -> bool {
    if m.norm() > 2 {
        return false;
    }
    let s = m.support();
    if s.iter().any(|&l| l < 2) {
        return false;
    }
    match x {
        Some(x) => s.iter().all(|&l| on_path(x, l)),
        None => s.len() < 2 || comparable(s[0], s[1]),
    }
}

// ex10(a) and ex10(b).

fn ex10a_member(m: &NVector) -> bool {
    // generators χ(3)+χ(2a+1)+χ(2b) (a ≥ b ≥ 1) and χ(1)+χ(3)+χ(2b) (b ≥ 1)
    let has1 = m.get(1);
    let has3 = m.get(3);
    let evens: Vec<(u32, u32)> = m.entries().iter().copied().filter(|p| p.0 % 2 == 0).collect();
    let odds_big: Vec<(u32, u32)> = m.entries().iter().copied().filter(|p| p.0 % 2 == 1 && p.0 > 3).collect();
    if evens.len() > 1 || evens.iter().any(|p| p.1 > 1) || odds_big.len() > 1 || odds_big.iter().any(|p| p.1 > 1) {
        return false;
    }
    let even = evens.first().map(|p| p.0);
    let odd = odds_big.first().map(|p| p.0);
    let b_ok = |a: u32| even.is_none_or(|e| e / 2 <= a);
    let via_g = has1 == 0
        && match odd {
            Some(o) => has3 <= 1 && b_ok((o - 1) / 2),
            // a = 1 gives 2χ(3) + χ(2); any a ≥ b allows χ(3) + χ(2b)
            None => has3 <= 1 || (has3 == 2 && b_ok(1)),
        };
    let via_h = has1 <= 1 && has3 <= 1 && odd.is_none();
    via_g || via_h
}

fn ex10b_member(m: &NVector) -> bool {
    if !entries_le(m, 1) {
        return false;
    }
    let mut r = [None, None, None];
    for l in m.support() {
        let c = (l % 3) as usize;
        if r[c].is_some() {
            return false;
        }
        r[c] = Some(l);
    }
    if r[1] == Some(1) {
        return false;
    }
    let a = r[0].map(|l| l / 3);
    let b = r[1].map(|l| (l - 1) / 3);
    match r[2] {
        None => true,
        Some(c) => {
            let mut q = (c - 2) / 3;
            let mut e5 = 0;
            while q % 5 == 0 && q > 0 {
                q /= 5;
                e5 += 1;
            }
            let mut e7 = 0;
            while q % 7 == 0 && q > 0 {
                q /= 7;
                e7 += 1;
            }
            q == 1 && e5 >= 1 && e7 >= 1 && a.is_none_or(|a| a == e5) && b.is_none_or(|b| b == e7)
        }
    }
}

// Example permex: every pair (N, ℓ) with ⋃Supp N ⊂ [1, ℓ], each on its own interval.

/// Every finite label supported in `[1, l]` whose roof has maximal entry exactly `e`.
fn labels_in_box(l: u32, e: u32) -> Vec<FiniteLabel> {
    if e == 0 {
        return vec![FiniteLabel::empty(), FiniteLabel::zero()];
    }
    let top = NVector::from_pairs((1..=l).map(|i| (i, e))).expect("positive indices");
    let mut elems = top.below();
    elems.sort_by(|a, b| a.norm().cmp(&b.norm()).then_with(|| a.cmp(b)));
    let mut out = Vec::new();
    let mut chosen: Vec<NVector> = Vec::new();
    fn rec(elems: &[NVector], i: usize, chosen: &mut Vec<NVector>, e: u32, out: &mut Vec<FiniteLabel>) {
        if i == elems.len() {
            if chosen.iter().any(|x| x.max_entry() == e) {
                out.push(FiniteLabel::generated(chosen.iter().cloned()));
            }
            return;
        }
        let x = &elems[i];
        rec(elems, i + 1, chosen, e, out);
        let covered = x.lower_covers().iter().all(|c| chosen.contains(c));
        if covered && (!x.is_zero() || chosen.is_empty()) {
            chosen.push(x.clone());
            rec(elems, i + 1, chosen, e, out);
            chosen.pop();
        }
    }
    rec(&elems, 0, &mut chosen, e, &mut out);
    out.sort();
    out.dedup();
    out
}

#[derive(Debug, Clone)]
pub struct PermexPiece {
    pub start: u32,
    pub len: u32,
    pub label: FiniteLabel,
}

/// Lazily extended interval layout of `M_trans`.
#[derive(Default)]
struct PermexLayout {
    pieces: Vec<PermexPiece>,
    weight: u32,
    end: u32,
}

impl PermexLayout {
    fn extend_to(&mut self, idx: u32) {
        while self.end < idx {
            self.weight += 1;
            let w = self.weight;
            for l in 1..=w {
                let e = w - l;
                for lab in labels_in_box(l, e) {
                    self.pieces.push(PermexPiece { start: self.end + 1, len: l, label: lab });
                    self.end += l;
                }
            }
        }
    }

    fn piece(&mut self, idx: u32) -> PermexPiece {
        self.extend_to(idx);
        let i = self.pieces.partition_point(|p| p.start + p.len <= idx);
        self.pieces[i].clone()
    }
}

/// The first pieces of the `M_trans` layout covering `[1, idx]`.
pub fn permex_pieces(idx: u32) -> Vec<PermexPiece> {
    let mut lay = PermexLayout::default();
    lay.extend_to(idx);
    lay.pieces.into_iter().take_while(|p| p.start <= idx).collect()
}

fn permex_label() -> Label {
    let layout = Arc::new(Mutex::new(PermexLayout::default()));
    let l2 = layout.clone();
    let pred = move |m: &NVector| {
        if m.is_zero() {
            return true;
        }
        let mut lay = layout.lock().expect("layout lock");
        let p = lay.piece(m.max_index());
        let min = m.support()[0];
        if min < p.start {
            return false;
        }
        let local = m.map_indices(|i| Some(i - p.start + 1)).expect("shift is injective");
        p.label.contains(&local)
    };
    let roof = move |n: u32| {
        let mut lay = l2.lock().expect("layout lock");
        lay.extend_to(n.max(1));
        lay.pieces.iter().filter(|p| p.start <= n).map(|p| p.label.roof().max_entry()).max().unwrap_or(0)
    };
    ZooOracle::new("permex", &ZooParams::default(), pred).finite_type().roof(roof).label()
}

/// `N_n = {kχ(ℓ) : k ≤ n}` moved onto index `n`, united over all `n`.
fn nomega_member(m: &NVector) -> bool {
    m.size() <= 1 && m.entries().iter().all(|&(l, k)| k <= l)
}

/// Label for `{"kind":"builtin", …}`.
pub fn builtin(name: &str, params: &ZooParams) -> Result<Label, LabelError> {
    let p = params;
    Ok(match name {
        "fin" | "exFIN" => Label::fin(),
        "empty" => Label::empty(),
        "zero" => Label::zero(),
        "N_n" => {
            let n = p.n.ok_or_else(|| LabelError::BadParam("N_n needs n".into()))?;
            Label::Finite(FiniteLabel::column(1, n))
        }
        "N_omega" => ZooOracle::new(name, p, nomega_member)
            .finite_type()
            .roof(|n| n)
            .label(),
        "proper" => Label::generated([
            NVector::chi_set([1, 2]),
            NVector::from_pairs([(2, 2), (3, 1)]).expect("indices"),
        ]),
        "proper_sub" => Label::generated([NVector::chi_set([1, 2]), NVector::chi_set([2, 3])]),
        "ex6a" => ZooOracle::new(name, p, |m: &NVector| {
            let top = m.max_index();
            m.entries().iter().all(|&(l, k)| k <= 1 || (k == 2 && l == top && l >= 2))
        })
        .bounded(2, None)
        .chain(chi_prefix_chain(1, 1))
        .label(),
        "ex6b" => ZooOracle::new(name, p, |m: &NVector| {
            if !entries_le(m, 1) {
                return false;
            }
            let odds: Vec<u32> = m.support().into_iter().filter(|l| l % 2 == 1).collect();
            match odds.as_slice() {
                [] => true,
                [o] => *o >= 3 && m.support().iter().all(|&l| l <= *o),
                _ => false,
            }
        })
        .bounded(1, None)
        .chain(chi_prefix_chain(2, 2))
        .label(),
        "ex8a" => ZooOracle::new(name, p, |m: &NVector| {
            if !entries_le(m, 1) {
                return false;
            }
            match m.support().as_slice() {
                [] | [_] => true,
                [1, _] => true,
                [a, b] => *b == a + 1,
                _ => false,
            }
        })
        .bounded(1, Some(2))
        .label(),
        "ex8b" => ZooOracle::new(name, p, |m: &NVector| {
            entries_le(m, 1)
                && m.support().iter().filter(|l| *l % 2 == 1).count() <= 1
                && m.support().iter().filter(|l| *l % 2 == 0).count() <= 1
        })
        .bounded(1, Some(2))
        .label(),
        "ex10a" => ZooOracle::new(name, p, ex10a_member).bounded(2, Some(3)).label(),
        "ex10b" => ZooOracle::new(name, p, ex10b_member).bounded(1, Some(3)).label(),
        "ex10cmoved" => match &p.x {
            Some(x) => {
                let w = parse_word(x)?;
                ZooOracle::new(name, p, move |m: &NVector| ex10c_member(m, Some(&w)))
                    .bounded(2, Some(2))
                    .label()
            }
            None => {
                let path = [0u8, 1];
                ZooOracle::new(name, p, |m: &NVector| ex10c_member(m, None))
                    .bounded(2, Some(2))
                    .probe(Probe::new("χ(ℓ_{w_i(0101…)})", move |i| {
                        let w: Vec<u8> = (0..i as usize).map(|j| path[j % 2]).collect();
                        NVector::chi(word_index(&w))
                    }))
                    .label()
            }
        },
        "ex11a" => match p.n {
            Some(n) if (1..=12).contains(&n) => Label::Finite(ex11a_finite(n)),
            Some(_) => return Err(LabelError::BadParam("ex11a needs 1 ≤ n ≤ 12".into())),
            None => ZooOracle::new(name, p, ex11a_member).bounded(1, Some(2)).label(),
        },
        "ex11a_flat" => ZooOracle::new(name, p, ex11a_flat_member).bounded(1, None).finite_type().label(),
        "ex11b" => ZooOracle::new(name, p, ex11b_member).bounded(1, Some(2)).label(),
        "exx" => ZooOracle::new(name, p, |m: &NVector| {
            entries_le(m, 1) && m.support().iter().filter(|l| *l % 2 == 1).count() <= 1
        })
        .bounded(1, None)
        .chain(chi_prefix_chain(2, 2))
        .label(),
        "permex" => permex_label(),
        "chiL_atoms" => {
            let l = Progression::from(p)?;
            ZooOracle::new(name, p, move |m: &NVector| m.norm() <= 1 && m.support().iter().all(|&i| l.contains(i)))
                .bounded(1, Some(1))
                .label()
        }
        "chiL_full" => {
            let l = Progression::from(p)?;
            ZooOracle::new(name, p, move |m: &NVector| entries_le(m, 1) && m.support().iter().all(|&i| l.contains(i)))
                .bounded(1, None)
                .chain(chi_prefix_chain(l.step, l.start))
                .label()
        }
        _ => return Err(LabelError::UnknownBuiltin(name.into())),
    })
}

/// An expected outcome attached to a zoo entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "tag", rename_all = "kebab-case")]
pub enum Expect {
    Property { property: Property, verdict: VerdictKind },
    /// `Θ(M) = {M}`.
    ThetaIsSelf,
    /// The companion label lies below `M` and outside `Θ(M)`.
    NotInTheta { sub: String },
    /// Both iterated limits of `M - χ(2a+1) - χ(2b)`.
    DoubleLimit,
    /// `LIM {M - χ(ℓ)}` along `ℓ → ∞`.
    Limit { expected: String },
    /// Full independence certificate for `{χ(i) : i ∈ A_n}`.
    Independent { n: u32 },
    Height { value: u32 },
    /// Window evidence only; the claim is unproved.
    ExpectedWapUnproved,
}

#[derive(Clone)]
pub struct ZooEntry {
    pub name: String,
    pub citation: String,
    pub label: Label,
    pub expected: Vec<Expect>,
}

fn holds(p: Property) -> Expect {
    Expect::Property { property: p, verdict: VerdictKind::HoldsOnWindow }
}

fn fails(p: Property) -> Expect {
    Expect::Property { property: p, verdict: VerdictKind::FailsWithWitness }
}

/// Names accepted by [`get`].
pub const NAMES: [&str; 21] = [
    "N_n", "N_omega", "exFIN", "empty", "zero", "proper", "proper_sub", "ex6a", "ex6b", "ex8a", "ex8b", "ex10a",
    "ex10b", "ex10cmoved", "ex11a", "ex11a_flat", "ex11b", "exx", "permex", "chiL_atoms", "chiL_full",
];

pub fn get(name: &str, params: &ZooParams) -> Result<ZooEntry, LabelError> {
    use Property::*;
    let label = builtin(name, params)?;
    let (citation, expected) = match name {
        "N_n" => {
            let n = params.n.unwrap_or(0);
            ("height and height* equal to n+1", vec![holds(FiniteType), holds(Finitary), holds(Simple), fails(Recurrent), holds(Sublattice), Expect::Height { value: n + 1 }])
        }
        "N_omega" => ("disjoint union of the N_n, height ω+1", vec![holds(FiniteType)]),
        "fin" | "exFIN" => ("maximum label, Θ(M) = {M}", vec![Expect::ThetaIsSelf, fails(FiniteType), holds(Recurrent)]),
        "empty" => ("empty label", vec![holds(FiniteType), holds(Recurrent)]),
        "zero" => ("label 0", vec![holds(FiniteType), fails(Recurrent), Expect::Height { value: 1 }]),
        "proper" => ("N ⊂ M with N outside Θ(M)", vec![Expect::NotInTheta { sub: "proper_sub".into() }, holds(FiniteType)]),
        "proper_sub" => ("companion of proper", vec![holds(FiniteType)]),
        "ex6a" | "ex6b" => ("generated by its maxima but not of finite type", vec![fails(FiniteType)]),
        "ex8a" => ("finitary but not simple", vec![holds(FiniteType), holds(Finitary), fails(Simple), Expect::Limit { expected: "⟨χ1⟩".into() }]),
        "ex8b" => ("simple but not finitary", vec![holds(FiniteType), holds(Simple), fails(Finitary)]),
        "ex10a" => ("finite type, neither finitary nor simple, non-commuting double limit", vec![holds(FiniteType), fails(Finitary), fails(Simple), Expect::DoubleLimit]),
        "ex10b" => ("not finitary, subshift claimed WAP", vec![holds(FiniteType), fails(Finitary), Expect::ExpectedWapUnproved]),
        "ex10cmoved" => ("finite type with uncountable Θ(M)", vec![holds(FiniteType)]),
        "ex11a" => match params.n {
            Some(n) => ("finite piece M_n of the non-null example", vec![holds(FiniteType), Expect::Independent { n }]),
            None => ("simple, finitary and non-null", vec![holds(FiniteType), holds(Finitary), holds(Simple), Expect::Independent { n: 3 }]),
        },
        "ex11a_flat" => ("union of the flat labels ⟨χ(A_n)⟩", vec![holds(FiniteType), holds(Flat)]),
        "ex11b" => ("finite type and non-tame", vec![holds(FiniteType)]),
        "exx" => ("recurrent but not strongly recurrent", vec![holds(Recurrent), fails(StronglyRecurrent), fails(FiniteType)]),
        "permex" => ("transitive point for the permutation action", vec![holds(FiniteType)]),
        "chiL_atoms" => ("{0} ∪ {χ(ℓ) : ℓ ∈ L}, height 2", vec![holds(FiniteType), fails(Recurrent), Expect::Height { value: 2 }]),
        "chiL_full" => ("{χ(F) : F ⊂ L finite}, a sublattice", vec![holds(Recurrent), holds(StronglyRecurrent), holds(Flat), holds(Sublattice), fails(FiniteType)]),
        _ => return Err(LabelError::UnknownBuiltin(name.into())),
    };
    Ok(ZooEntry { name: name.into(), citation: citation.into(), label, expected })
}

/// Default parameters used by [`verify_all`].
pub fn default_params(name: &str) -> ZooParams {
    match name {
        "N_n" => ZooParams { n: Some(4), ..Default::default() },
        _ => ZooParams::default(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ZooRow {
    pub entry: String,
    pub tag: String,
    pub expected: String,
    pub verdict: String,
    pub pass: bool,
    pub witness: Option<Value>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ZooReport {
    pub window: u32,
    pub horizon: u32,
    pub rows: Vec<ZooRow>,
}

impl ZooReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

fn row(entry: &str, tag: &str, expected: &str, verdict: &str, pass: bool, witness: Option<Value>) -> ZooRow {
    ZooRow { entry: entry.into(), tag: tag.into(), expected: expected.into(), verdict: verdict.into(), pass, witness }
}

fn check_expect(e: &ZooEntry, x: &Expect, n: u32, horizon: u32) -> Result<ZooRow, LabelError> {
    let m = &e.label;
    Ok(match x {
        Expect::Property { property, verdict } => {
            let v = property_check(m, *property, n, horizon)?;
            row(&e.name, property.name(), verdict.name(), v.kind.name(), v.kind == *verdict, v.witness)
        }
        Expect::ThetaIsSelf => {
            let ok = (0..=n).all(|l| m.minus(&NVector::chi(l.max(1))).window(n).ok() == m.window(n).ok());
            row(&e.name, "theta", "{M}", if ok { "{M}" } else { "other" }, ok, None)
        }
        Expect::NotInTheta { sub } => {
            let big = m.as_finite().ok_or(LabelError::NotFinite)?;
            let small = builtin(sub, &ZooParams::default())?;
            let small = small.as_finite().ok_or(LabelError::NotFinite)?;
            let ok = small.is_subset(big) && !theta_finite(big).contains(small);
            row(&e.name, "not-in-theta", "N ⊂ M, N ∉ Θ(M)", if ok { "confirmed" } else { "refuted" }, ok, None)
        }
        Expect::DoubleLimit => {
            let seq = |a: u32, b: u32| Ok(m.minus(&NVector::chi(2 * a + 1).add(&NVector::chi(2 * b))));
            let ba = iterated_limit(|b, a| seq(a, b), n, horizon, horizon / 2)?;
            let ab = iterated_limit(seq, n, horizon, horizon / 2)?;
            let want_ba = FiniteLabel::generated([NVector::chi(3)]);
            let got_ba = ba.limit().cloned();
            let got_ab = ab.limit().cloned();
            let ok = got_ba.as_ref() == Some(&want_ba) && got_ab == Some(FiniteLabel::empty());
            let fmt = |l: Option<FiniteLabel>| l.map_or("unresolved".to_string(), |l| l.to_string());
            row(&e.name, "double-limit", "{χ3, 0} vs ∅", &format!("{} vs {}", fmt(got_ba), fmt(got_ab)), ok, None)
        }
        Expect::Limit { expected } => {
            let r = limit(|l| Ok(m.minus(&NVector::chi(l))), n, horizon, horizon / 2)?;
            let got = r.limit().map_or("unresolved".to_string(), |l| l.to_string());
            row(&e.name, "limit", expected, &got, &got == expected, None)
        }
        Expect::Independent { n: k } => {
            let f: Vec<NVector> = ex11a_block_a(*k).into_iter().map(NVector::chi).collect();
            let bound = ex11a_b_start(*k) + (1 << k);
            let cert = analysis::independence_certificate(m, &f, bound)?;
            let ok = cert.is_ok();
            let verdict = match &cert {
                Ok(c) => format!("{} witnesses", c.witnesses.len()),
                Err(a) => format!("no witness for {a:?}"),
            };
            row(&e.name, "independent", &format!("{} witnesses", 1 << k), &verdict, ok, None)
        }
        Expect::Height { value } => {
            let got = match m.as_finite() {
                Some(f) => ordinals::height(f).map(|h| h.to_string()).unwrap_or_else(|e| e.to_string()),
                None => {
                    let f = m.window(n)?;
                    ordinals::height(&f).map(|h| h.to_string()).unwrap_or_else(|e| e.to_string())
                }
            };
            let want = value.to_string();
            row(&e.name, "height", &want, &got, got == want, None)
        }
        Expect::ExpectedWapUnproved => {
            let v = property_check(m, Property::Simple, n, horizon)?;
            row(&e.name, "expected-wap-unproved", "evidence only", v.kind.name(), true, v.witness)
        }
    })
}

/// Runs every expectation of every entry.
pub fn verify_all(window: u32, horizon: u32) -> Result<ZooReport, LabelError> {
    let rows: Vec<Vec<ZooRow>> = NAMES
        .par_iter()
        .map(|name| {
            let e = get(name, &default_params(name))?;
            e.expected.iter().map(|x| check_expect(&e, x, window, horizon)).collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;
    Ok(ZooReport { window, horizon, rows: rows.into_iter().flatten().collect() })
}
