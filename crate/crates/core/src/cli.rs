//! The `labshift` command line.

use std::io::Write;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::analysis::{self, TfCandidate, TfVerdict, DEFAULT_TF_THRESHOLD};
use crate::expanding::{ExpandingSystem, IpMode};
use crate::labels::{
    limit, property_check, theta_finite, FiniteLabel, Label, LabelJson, LimitVerdict, NVector, Probe, Property,
    VerdictKind,
};
use crate::ordinals::{self, HeightExpr};
use crate::subshift::{self, Mode, TwoAdic};
use crate::zoo::{self, ZooParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;

#[derive(Debug, Parser)]
#[command(name = "labshift", version, about = "Labeled subshifts on finite windows")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Default)]
pub struct GlobalArgs {
    /// Expanding-function preset: strict or paper.
    #[arg(long, global = true)]
    pub preset: Option<String>,
    /// Growth constant b of a custom power rule (requires --base).
    #[arg(long, global = true)]
    pub b: Option<u32>,
    /// Base of a custom power rule k(n) = base^n.
    #[arg(long, global = true)]
    pub base: Option<u64>,
    /// Partition of ℕ into the blocks D_ℓ.
    #[arg(long, global = true)]
    pub partition: Option<String>,
    /// Window size N.
    #[arg(long = "N", global = true)]
    pub n: Option<u32>,
    /// Sequence horizon for limits and checks.
    #[arg(long, global = true)]
    pub horizon: Option<u32>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Recorded in every output header.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Text,
    AsciiWindow,
    Pgm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Full,
    Plus,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Expansion of an integer.
    Expand {
        #[arg(long)]
        t: String,
    },
    /// Expanding times in an interval.
    Ip {
        #[arg(long, allow_hyphen_values = true)]
        lo: String,
        #[arg(long, allow_hyphen_values = true)]
        hi: String,
        /// full, positive, or restricted (with --seq and --depth).
        #[arg(long, default_value = "full")]
        mode: String,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        seq: Vec<i64>,
        #[arg(long, default_value_t = 8)]
        depth: u32,
    },
    /// Counts of IP(k) ∩ [1, n] against the density bound.
    Density {
        #[arg(long, value_delimiter = ',')]
        ns: Vec<String>,
    },
    /// Evaluates a label expression on B_N.
    Label {
        #[arg(long)]
        label: String,
    },
    /// The point x[M] (or x₊[M]) on [-N, N], optionally shifted.
    Window {
        #[arg(long)]
        label: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        shift: String,
        #[arg(long, value_enum, default_value = "full")]
        mode: ModeArg,
    },
    /// Distance between two labels, resolved up to B_N.
    Metric {
        #[arg(long)]
        label: String,
        #[arg(long)]
        other: String,
    },
    /// LIMSUP/LIMINF of M - (r + χ(start + step·i)), or of a builtin family indexed by n.
    Limit {
        #[arg(long)]
        label: Option<String>,
        #[arg(long)]
        family: Option<String>,
        /// Base vector r as JSON pairs.
        #[arg(long, default_value = "[]")]
        r: String,
        #[arg(long, default_value_t = 0)]
        start: u32,
        #[arg(long, default_value_t = 1)]
        step: u32,
        #[arg(long)]
        margin: Option<u32>,
    },
    /// Orbit closure Θ(M) (exact for finite labels, on B_N otherwise).
    Theta {
        #[arg(long)]
        label: String,
    },
    /// height and height* of a finite label, or composite height of an expression.
    Height {
        #[arg(long)]
        label: Option<String>,
        #[arg(long)]
        expr: Option<String>,
    },
    /// Property check on B_N.
    Check {
        #[arg(long)]
        label: String,
        #[arg(long)]
        property: String,
    },
    /// Independence certificate for F, or from flatness over L.
    Certify {
        #[arg(long)]
        label: String,
        /// JSON list of vectors.
        #[arg(long = "F")]
        f: Option<String>,
        #[arg(long = "L", value_delimiter = ',')]
        l: Vec<u32>,
        #[arg(long, default_value_t = 16)]
        bound: u32,
    },
    /// Translation-finite check of A[M], or of the set 2ℕ ∪ -(2ℕ+1) with --example.
    Tf {
        #[arg(long)]
        label: Option<String>,
        #[arg(long)]
        example: bool,
        #[arg(long, default_value_t = 200)]
        radius: u32,
        #[arg(long, default_value_t = DEFAULT_TF_THRESHOLD)]
        threshold: usize,
    },
    /// Injectivity radius and non-asymptotic witness for two labels.
    Witness {
        #[arg(long)]
        label: String,
        #[arg(long)]
        other: String,
        #[arg(long, default_value_t = 4)]
        count: u32,
    },
    /// Runs every zoo expectation.
    ZooVerify,
}

/// Resolved configuration, recorded in every output header.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub preset: Option<String>,
    pub b: Option<u32>,
    pub base: Option<u64>,
    pub partition: String,
    #[serde(rename = "N")]
    pub n: u32,
    pub horizon: u32,
    pub format: Format,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            preset: None,
            b: None,
            base: None,
            partition: "2-adic".into(),
            n: 12,
            horizon: 40,
            format: Format::Json,
            seed: 0,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{flag}: {message}")]
    Usage { flag: String, message: String },
    #[error("{kind}: {message}")]
    Data { kind: &'static str, message: String },
}

impl CliError {
    fn usage(flag: &str, message: impl Into<String>) -> Self {
        CliError::Usage { flag: flag.into(), message: message.into() }
    }

    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage { .. } => EXIT_USAGE,
            CliError::Data { .. } => EXIT_DATA,
        }
    }

    fn payload(&self) -> Value {
        match self {
            CliError::Usage { flag, message } => json!({"error": {"kind": "usage", "flag": flag, "message": message}}),
            CliError::Data { kind, message } => json!({"error": {"kind": kind, "message": message}}),
        }
    }
}

macro_rules! data_error {
    ($($ty:ty => $kind:literal),*) => {
        $(impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                CliError::Data { kind: $kind, message: e.to_string() }
            }
        })*
    };
}

data_error!(
    crate::expanding::ExpandError => "expanding",
    crate::labels::LabelError => "label",
    crate::subshift::SubshiftError => "subshift",
    crate::ordinals::OrdinalError => "ordinal"
);

impl RunConfig {
    /// Defaults, then the file named by `LABSHIFT_CONFIG`, then flags.
    pub fn resolve(g: &GlobalArgs, config_path: Option<&str>) -> Result<RunConfig, CliError> {
        let mut c = match config_path {
            Some(p) => {
                let s = std::fs::read_to_string(p).map_err(|e| CliError::usage("LABSHIFT_CONFIG", e.to_string()))?;
                serde_json::from_str(&s).map_err(|e| CliError::usage("LABSHIFT_CONFIG", e.to_string()))?
            }
            None => RunConfig::default(),
        };
        if g.preset.is_some() {
            c.preset = g.preset.clone();
        }
        if g.b.is_some() || g.base.is_some() {
            c.b = g.b.or(c.b);
            c.base = g.base.or(c.base);
            if g.preset.is_none() {
                c.preset = None;
            }
        }
        if let Some(p) = &g.partition {
            c.partition = p.clone();
        }
        c.n = g.n.unwrap_or(c.n);
        c.horizon = g.horizon.unwrap_or(c.horizon);
        c.format = g.format.unwrap_or(c.format);
        c.seed = g.seed.unwrap_or(c.seed);
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.preset.is_some() && (self.b.is_some() || self.base.is_some()) {
            return Err(CliError::usage("--preset", "conflicts with --b/--base"));
        }
        if self.b.is_some() != self.base.is_some() {
            return Err(CliError::usage(if self.b.is_some() { "--base" } else { "--b" }, "--b and --base go together"));
        }
        self.system()?;
        self.partition()?;
        if self.n == 0 {
            return Err(CliError::usage("--N", "must be positive"));
        }
        if self.horizon == 0 {
            return Err(CliError::usage("--horizon", "must be positive"));
        }
        Ok(())
    }

    pub fn system(&self) -> Result<ExpandingSystem, CliError> {
        match (&self.preset, self.b, self.base) {
            (Some(p), _, _) => ExpandingSystem::preset(p).map_err(|e| CliError::usage("--preset", e.to_string())),
            (None, Some(b), Some(base)) => {
                ExpandingSystem::with_base(b, base).map_err(|e| CliError::usage("--b", e.to_string()))
            }
            _ => Ok(ExpandingSystem::strict()),
        }
    }

    pub fn partition(&self) -> Result<TwoAdic, CliError> {
        subshift::partition_by_name(&self.partition)
            .ok_or_else(|| CliError::usage("--partition", format!("unknown partition {:?}", self.partition)))
    }

    fn header(&self) -> Value {
        let sys = self.system().expect("validated");
        json!({
            "preset": sys.preset_name(),
            "b": sys.b(),
            "partition": self.partition,
            "N": self.n,
            "horizon": self.horizon,
            "seed": self.seed,
        })
    }
}

struct Outcome {
    result: Value,
    code: i32,
    rendered: Option<String>,
}

impl Outcome {
    fn ok(result: Value) -> Self {
        Outcome { result, code: EXIT_OK, rendered: None }
    }

    fn with_code(result: Value, code: i32) -> Self {
        Outcome { result, code, rendered: None }
    }
}

fn parse_label(flag: &str, s: &str) -> Result<Label, CliError> {
    let j = LabelJson::parse(s).map_err(|e| CliError::usage(flag, e.to_string()))?;
    Ok(j.to_label()?)
}

fn parse_big(flag: &str, s: &str) -> Result<BigInt, CliError> {
    BigInt::from_str(s.trim()).map_err(|e| CliError::usage(flag, e.to_string()))
}

fn parse_json<T: serde::de::DeserializeOwned>(flag: &str, s: &str) -> Result<T, CliError> {
    serde_json::from_str(s).map_err(|e| CliError::usage(flag, e.to_string()))
}

pub fn finite_json(f: &FiniteLabel) -> Value {
    json!({"generators": f.maxima(), "display": f.to_string(), "size": f.len()})
}

fn verdict_code(k: VerdictKind) -> i32 {
    match k {
        VerdictKind::HoldsOnWindow => EXIT_OK,
        VerdictKind::FailsWithWitness => EXIT_REFUTED,
        VerdictKind::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn execute(cmd: &Command, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let n = cfg.n;
    Ok(match cmd {
        Command::Expand { t } => {
            let sys = cfg.system()?;
            let t = parse_big("--t", t)?;
            match sys.expand(&t) {
                Some(e) => Outcome::ok(serde_json::to_value(e.to_json()).expect("json")),
                None => Outcome::with_code(json!({"t": t.to_string(), "digits": null}), EXIT_REFUTED),
            }
        }
        Command::Ip { lo, hi, mode, seq, depth } => {
            let sys = cfg.system()?;
            let (lo, hi) = (parse_big("--lo", lo)?, parse_big("--hi", hi)?);
            let mode = match mode.as_str() {
                "full" => IpMode::Full,
                "positive" => IpMode::Positive,
                "restricted" => IpMode::Restricted { seq: seq.clone(), depth: *depth },
                other => return Err(CliError::usage("--mode", format!("unknown mode {other:?}"))),
            };
            Outcome::ok(serde_json::to_value(sys.ip_in_interval(&lo, &hi, &mode)?.to_json()).expect("json"))
        }
        Command::Density { ns } => {
            let sys = cfg.system()?;
            let ns: Vec<BigInt> = if ns.is_empty() {
                (3..=9).map(|e| BigInt::from(4u64.pow(e))).collect()
            } else {
                ns.iter().map(|s| parse_big("--ns", s)).collect::<Result<_, _>>()?
            };
            let r = analysis::density_report(&sys, &ns)?;
            let code = if r.all_within_bound { EXIT_OK } else { EXIT_REFUTED };
            Outcome::with_code(serde_json::to_value(r).expect("json"), code)
        }
        Command::Label { label } => {
            let m = parse_label("--label", label)?;
            let w = m.window(n)?;
            let canonical = serde_json::to_value(LabelJson::from_label(&m)?).expect("json");
            Outcome::ok(json!({"label": canonical, "describe": m.describe(), "window": finite_json(&w)}))
        }
        Command::Window { label, shift, mode } => {
            let sys = cfg.system()?;
            let part = cfg.partition()?;
            let m = parse_label("--label", label)?;
            let shift = parse_big("--shift", shift)?;
            let mode = match mode {
                ModeArg::Full => Mode::Full,
                ModeArg::Plus => Mode::Plus,
            };
            let w = subshift::point_window(&sys, &part, &m, n, mode, &shift)?;
            let rendered = match cfg.format {
                Format::AsciiWindow => Some(w.render_ascii()),
                Format::Pgm => Some(w.render_pgm()),
                _ => None,
            };
            Outcome { result: serde_json::to_value(w.to_json()).expect("json"), code: EXIT_OK, rendered }
        }
        Command::Metric { label, other } => {
            let a = parse_label("--label", label)?;
            let b = parse_label("--other", other)?;
            let d = a.distance(&b, n)?;
            Outcome::ok(json!({"distance": d, "value": d.value()}))
        }
        Command::Limit { label, family, r, start, step, margin } => {
            let margin = margin.unwrap_or(cfg.horizon / 2);
            let report = match (label, family) {
                (Some(l), None) => {
                    let m = parse_label("--label", l)?;
                    let r: NVector = parse_json("--r", r)?;
                    if *step == 0 {
                        return Err(CliError::usage("--step", "must be positive"));
                    }
                    let p = Probe::arithmetic(r, *start, *step);
                    limit(|i| Ok(m.minus(&p.term(i))), n, cfg.horizon, margin)?
                }
                (None, Some(f)) => limit(
                    |i| zoo::builtin(f, &ZooParams { n: Some(i), ..ZooParams::default() }),
                    n,
                    cfg.horizon,
                    margin,
                )?,
                _ => return Err(CliError::usage("--label", "give exactly one of --label and --family")),
            };
            let code = match report.verdict {
                LimitVerdict::ConvergedOnWindow => EXIT_OK,
                LimitVerdict::NotConvergent => EXIT_REFUTED,
                LimitVerdict::Inconclusive => EXIT_INCONCLUSIVE,
            };
            Outcome::with_code(
                json!({
                    "verdict": report.verdict,
                    "limsup": finite_json(&report.limsup),
                    "liminf": finite_json(&report.liminf),
                    "limit": report.limit().map(finite_json),
                    "unsettled": report.unsettled,
                    "window": report.window,
                    "horizon": report.horizon,
                    "margin": report.margin,
                }),
                code,
            )
        }
        Command::Theta { label } => {
            let m = parse_label("--label", label)?;
            let (exact, orbit) = match m.as_finite() {
                Some(f) => (true, theta_finite(f)),
                None => {
                    let w = m.window(n)?;
                    let mut orbit = Vec::new();
                    for r in w.members() {
                        orbit.push(m.minus(&r).window(n)?);
                    }
                    orbit.push(FiniteLabel::empty());
                    orbit.sort();
                    orbit.dedup();
                    (false, orbit)
                }
            };
            Outcome::ok(json!({"exact": exact, "orbit": orbit.iter().map(finite_json).collect::<Vec<_>>()}))
        }
        Command::Height { label, expr } => match (label, expr) {
            (Some(l), None) => {
                let m = parse_label("--label", l)?;
                let f = m.as_finite().ok_or(crate::labels::LabelError::NotFinite)?;
                let h = ordinals::height_report(f)?;
                let hs = ordinals::height_star(f)?;
                Outcome::ok(json!({
                    "height": h.height.to_string(),
                    "height_star": hs.to_string(),
                    "agree": h.height == hs,
                    "chain": h.chain,
                }))
            }
            (None, Some(e)) => {
                let e: HeightExpr = parse_json("--expr", e)?;
                let h = ordinals::composite_height(&e)?;
                let direct = match e.build() {
                    Some(f) => Some(ordinals::height(&f)?.to_string()),
                    None => None,
                };
                Outcome::ok(json!({"height": h.to_string(), "cnf": h, "direct": direct}))
            }
            _ => return Err(CliError::usage("--label", "give exactly one of --label and --expr")),
        },
        Command::Check { label, property } => {
            let m = parse_label("--label", label)?;
            let p = Property::from_str(property).map_err(|e| CliError::usage("--property", e.to_string()))?;
            let v = property_check(&m, p, n, cfg.horizon)?;
            let code = verdict_code(v.kind);
            Outcome::with_code(json!({"property": p.name(), "result": v}), code)
        }
        Command::Certify { label, f, l, bound } => {
            let m = parse_label("--label", label)?;
            match (f, l.is_empty()) {
                (Some(f), true) => {
                    let f: Vec<NVector> = parse_json("--F", f)?;
                    match analysis::independence_certificate(&m, &f, *bound)? {
                        Ok(c) => Outcome::ok(serde_json::to_value(c).expect("json")),
                        Err(a) => Outcome::with_code(json!({"failure": {"A": a}}), EXIT_REFUTED),
                    }
                }
                (None, false) => match analysis::flat_independence(&m, l, n)? {
                    Ok(c) => Outcome::ok(serde_json::to_value(c).expect("json")),
                    Err(s) => Outcome::with_code(json!({"failure": {"F": s}}), EXIT_REFUTED),
                },
                _ => return Err(CliError::usage("--F", "give exactly one of --F and --L")),
            }
        }
        Command::Tf { label, example, radius, threshold } => {
            let report = match (label, example) {
                (Some(l), false) => {
                    let m = parse_label("--label", l)?;
                    analysis::tf_check_label(&cfg.system()?, &cfg.partition()?, &m, *radius, *threshold)?
                }
                (None, true) => {
                    let a = |n: i64| (n >= 0 && n % 2 == 0) || (n < 0 && n % 2 != 0);
                    let mut cands = vec![TfCandidate::from_predicate("2N", *radius, |n| n >= 0 && n % 2 == 0)];
                    cands.extend(analysis::auto_candidates(&a, *radius));
                    analysis::tf_check(&a, *radius, &cands, *threshold)
                }
                _ => return Err(CliError::usage("--label", "give exactly one of --label and --example")),
            };
            let code = match report.verdict {
                TfVerdict::TfOnWindow => EXIT_OK,
                TfVerdict::NotTfWithWitness => EXIT_REFUTED,
                TfVerdict::Inconclusive => EXIT_INCONCLUSIVE,
            };
            Outcome::with_code(serde_json::to_value(report).expect("json"), code)
        }
        Command::Witness { label, other, count } => {
            let sys = cfg.system()?;
            let part = cfg.partition()?;
            let a = parse_label("--label", label)?;
            let b = parse_label("--other", other)?;
            let inj = subshift::injectivity_radius(&sys, &part, &a, &b, n)?;
            let na = subshift::nonasymptotic_witness(&sys, &part, &a, &b, n, *count)?;
            let code = if na.is_some() { EXIT_OK } else { EXIT_INCONCLUSIVE };
            Outcome::with_code(json!({"injectivity": inj, "nonasymptotic": na}), code)
        }
        Command::ZooVerify => {
            let r = zoo::verify_all(n, cfg.horizon)?;
            let code = if r.all_pass() { EXIT_OK } else { EXIT_REFUTED };
            Outcome::with_code(serde_json::to_value(r).expect("json"), code)
        }
    })
}

fn render(cfg: &RunConfig, o: &Outcome) -> String {
    if let Some(s) = &o.rendered {
        return s.clone();
    }
    match cfg.format {
        Format::Json | Format::AsciiWindow | Format::Pgm => {
            let mut s = serde_json::to_string(&json!({"config": cfg.header(), "result": o.result})).expect("json");
            s.push('\n');
            s
        }
        Format::Text => {
            let h = cfg.header();
            format!(
                "# labshift preset={} b={} partition={} N={} horizon={} seed={}\n{}\n",
                h["preset"].as_str().unwrap_or("custom"),
                h["b"],
                cfg.partition,
                cfg.n,
                cfg.horizon,
                cfg.seed,
                serde_json::to_string_pretty(&o.result).expect("json")
            )
        }
    }
}

/// Runs one command, writing to `out` and `err`; returns the exit code.
pub fn run_with<I, T>(args: I, config_path: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let res = RunConfig::resolve(&cli.global, config_path).and_then(|cfg| Ok((execute(&cli.command, &cfg)?, cfg)));
    match res {
        Ok((o, cfg)) => {
            let _ = write!(out, "{}", render(&cfg, &o));
            o.code
        }
        Err(e) => {
            let _ = writeln!(out, "{}", e.payload());
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn run() -> i32 {
    let config = std::env::var("LABSHIFT_CONFIG").ok();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args_os(), config.as_deref(), &mut stdout.lock(), &mut stderr.lock())
}
