//! Command-line front end: argument parsing, TOML run configs and output.
//!
//! Every subcommand reads an optional `--config` TOML file; flags given on
//! the command line take precedence. Exit status is 0 on success, 1 when a
//! check fails and 2 on invalid input.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::analysis::{
    diff_inequality_check, estimate_critical_curve, monotone_path_check, russo_lambda_residual, russo_mu_residual,
    slope_bound_check, ActivityConfig, CurveConfig, ExactEnumerator, PhasePoint, DEFAULT_STATE_LIMIT,
};
use crate::engine::{check_abelian, CapStyle, Domain, Policy, StabilizeOptions, Stabilizer, Verdict, DEFAULT_BUDGET};
use crate::error::{ArwError, Result};
use crate::essential::{lemma_sweep, scan, Decision, EventSpec, SweepConfig};
use crate::randomness::{ParticleLaw, RandomSource};
use crate::state::{InstructionSource, Instance, ParticleConfig};
use crate::topology::Topology;

#[derive(Debug, Parser)]
#[command(name = "arw", version, about = "Activated random walk stabilization and phase-diagram checks")]
pub struct Cli {
    /// Worker threads for parallel sections.
    #[arg(long, env = "ARW_THREADS", global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stabilize a ball from a text instance or a sampled configuration.
    Stabilize(StabilizeArgs),
    /// List essential pairs, or run the randomized lemma sweep.
    EssentialScan(ScanArgs),
    /// Russo-formula residuals by exact enumeration.
    RussoCheck(RussoArgs),
    /// The differential inequality at each phase point.
    DiffIneq(RussoArgs),
    /// Compare an event's probability at p and at q in the semi-line region of p.
    MonotonePath(MonotoneArgs),
    /// Estimate the critical curve by bisection.
    CriticalCurve(CurveArgs),
    /// Quick internal consistency checks.
    Selftest(CommonArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// TOML run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Instruction budget per stabilization.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ModelArgs {
    /// `line`, `grid2d`, `tree r=3`, `cycle n=7` or `path n=4`.
    #[arg(long)]
    pub topology: Option<String>,
    /// `poisson` or `bernoulli`.
    #[arg(long)]
    pub law: Option<String>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub mu: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct EventArgs {
    /// Radius of the event's ball around the origin.
    #[arg(long)]
    pub radius: Option<u32>,
    /// Jump cap on every site of the ball.
    #[arg(long)]
    pub cap: Option<u64>,
    /// Thresholds `H`, one per site in ball order, or a single value for all.
    #[arg(long, value_delimiter = ',')]
    pub threshold: Option<Vec<u64>>,
}

#[derive(Debug, Clone, Args)]
pub struct StabilizeArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Text instance; otherwise a configuration is sampled.
    #[arg(long)]
    pub instance: Option<PathBuf>,
    #[arg(long)]
    pub radius: Option<u32>,
    #[arg(long)]
    pub cap: Option<u64>,
    /// Cap style: `jumps` or `instructions`.
    #[arg(long)]
    pub cap_style: Option<String>,
    /// Toppling order: `fifo` or a seed for uniformly random order.
    #[arg(long)]
    pub policy: Option<String>,
    /// At most one sleep per gap.
    #[arg(long)]
    pub relevant: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub event: EventArgs,
    #[arg(long)]
    pub instance: Option<PathBuf>,
    /// Sampled instances when no instance file is given.
    #[arg(long)]
    pub instances: Option<u64>,
    /// Run the lemma sweep instead of listing pairs.
    #[arg(long)]
    pub sweep: bool,
}

#[derive(Debug, Clone, Args)]
pub struct RussoArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub event: EventArgs,
    /// Phase point `λ,μ`; repeatable.
    #[arg(long = "point")]
    pub points: Vec<String>,
    /// Finite-difference step.
    #[arg(long)]
    pub h: Option<f64>,
    /// Largest accepted residual.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct MonotoneArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub event: EventArgs,
    /// Start point `λ,μ`.
    #[arg(long)]
    pub p: Option<String>,
    /// End point `λ,μ`.
    #[arg(long)]
    pub q: Option<String>,
    #[arg(long)]
    pub samples: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct CurveArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_delimiter = ',')]
    pub lambdas: Option<Vec<f64>>,
    /// Ball radius `L`.
    #[arg(long)]
    pub radius: Option<u32>,
    /// Jump threshold `H` at the origin.
    #[arg(long)]
    pub threshold: Option<u64>,
    #[arg(long)]
    pub samples: Option<u64>,
    /// Final bisection width.
    #[arg(long)]
    pub tol: Option<f64>,
}

/// TOML run configuration. Every field is optional; flags override it.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub topology: Option<String>,
    pub law: Option<String>,
    pub lambda: Option<f64>,
    pub mu: Option<f64>,
    pub points: Option<Vec<[f64; 2]>>,
    pub p: Option<[f64; 2]>,
    pub q: Option<[f64; 2]>,
    pub seed: Option<u64>,
    pub budget: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub h: Option<f64>,
    pub tol: Option<f64>,
    pub samples: Option<u64>,
    pub instances: Option<u64>,
    pub radius: Option<u32>,
    pub cap: Option<u64>,
    pub cap_style: Option<String>,
    pub policy: Option<String>,
    pub relevant: Option<bool>,
    #[serde(default)]
    pub event: EventSection,
    #[serde(default)]
    pub curve: CurveSection,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventSection {
    pub radius: Option<u32>,
    pub cap: Option<u64>,
    pub threshold: Option<Vec<u64>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSection {
    pub lambdas: Option<Vec<f64>>,
    pub radius: Option<u32>,
    pub threshold: Option<u64>,
    pub samples: Option<u64>,
    pub tol: Option<f64>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| ArwError::Config {
            field: e.span().map_or_else(|| "<root>".into(), |s| format!("bytes {}..{}", s.start, s.end)),
            message: e.message().to_string(),
        })
    }
}

/// What a subcommand reports back besides its output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    CheckFailed,
}

impl Status {
    fn from_pass(pass: bool) -> Self {
        if pass {
            Status::Ok
        } else {
            Status::CheckFailed
        }
    }
}

fn config_error(field: &str, message: impl Into<String>) -> ArwError {
    ArwError::Config { field: field.into(), message: message.into() }
}

struct Ctx {
    cfg: RunConfig,
    seed: u64,
    budget: u64,
    out: Option<PathBuf>,
    format: Option<Format>,
}

impl Ctx {
    fn new(common: &CommonArgs) -> Result<Self> {
        let cfg = match &common.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        let budget = common.budget.or(cfg.budget).unwrap_or(DEFAULT_BUDGET);
        if budget == 0 {
            return Err(config_error("budget", "must be positive"));
        }
        Ok(Ctx {
            seed: common.seed.or(cfg.seed).unwrap_or(0),
            budget,
            out: common.out.clone().or(cfg.out.clone()),
            format: common.format.or(cfg.format),
            cfg,
        })
    }

    fn topology(&self, m: &ModelArgs) -> Result<Topology> {
        let s = m.topology.clone().or(self.cfg.topology.clone()).unwrap_or_else(|| "line".into());
        s.parse().map_err(|e: ArwError| config_error("topology", e.to_string()))
    }

    fn family(&self, m: &ModelArgs, default: &str) -> Result<ParticleLaw> {
        let s = m.law.clone().or(self.cfg.law.clone()).unwrap_or_else(|| default.into());
        match s.as_str() {
            "poisson" => Ok(ParticleLaw::Poisson { mean: 1.0 }),
            "bernoulli" => Ok(ParticleLaw::Bernoulli { mean: 0.5 }),
            other => Err(config_error("law", format!("unknown law `{other}`"))),
        }
    }

    fn point(&self, m: &ModelArgs, dl: f64, dm: f64) -> Result<PhasePoint> {
        let lambda = m.lambda.or(self.cfg.lambda).unwrap_or(dl);
        let mu = m.mu.or(self.cfg.mu).unwrap_or(dm);
        PhasePoint::new(lambda, mu)
    }

    fn event(&self, t: Topology, e: &EventArgs, capped: bool) -> Result<EventSpec> {
        let s = &self.cfg.event;
        let radius = e.radius.or(s.radius).unwrap_or(0);
        let cap = e.cap.or(s.cap);
        let sites = t.ball(t.origin(), radius)?;
        let domain = match (cap, capped) {
            (Some(z), _) => Domain::with_uniform_cap(sites.clone(), z, CapStyle::Jumps)?,
            (None, true) => return Err(config_error("event.cap", "a jump cap is required here")),
            (None, false) => Domain::uncapped(sites.clone())?,
        };
        let h = e.threshold.clone().or(s.threshold.clone()).unwrap_or_else(|| vec![1]);
        let h = match h.len() {
            1 => vec![h[0]; sites.len()],
            n if n == sites.len() => h,
            n => return Err(config_error("event.threshold", format!("{n} values for {} sites", sites.len()))),
        };
        EventSpec::jump_threshold(t, domain, h)
    }

    fn meta(&self, command: &str, extra: Value) -> Value {
        let mut m = json!({
            "command": command,
            "version": env!("CARGO_PKG_VERSION"),
            "seed": self.seed,
            "budget": self.budget,
        });
        if let (Value::Object(a), Value::Object(b)) = (&mut m, extra) {
            a.extend(b);
        }
        m
    }

    fn emit_json(&self, meta: Value, result: Value) -> Result<()> {
        let mut text = serde_json::to_string_pretty(&json!({ "meta": meta, "result": result }))
            .map_err(|e| ArwError::Io(e.to_string()))?;
        text.push('\n');
        self.write(&text)
    }

    fn emit_csv(&self, meta: &Value, header: &str, rows: &[String]) -> Result<()> {
        let mut text = String::new();
        if let Value::Object(m) = meta {
            for (k, v) in m {
                let _ = writeln!(text, "# {k}={v}");
            }
        }
        text.push_str(header);
        text.push('\n');
        for r in rows {
            text.push_str(r);
            text.push('\n');
        }
        self.write(&text)
    }

    fn write(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(p) => std::fs::write(p, text)?,
            None => std::io::stdout().write_all(text.as_bytes())?,
        }
        Ok(())
    }
}

fn parse_point(s: &str, field: &str) -> Result<PhasePoint> {
    let (l, m) = s.split_once(',').ok_or_else(|| config_error(field, format!("expected `λ,μ`, got `{s}`")))?;
    let parse = |x: &str| x.trim().parse::<f64>().map_err(|e| config_error(field, format!("`{x}`: {e}")));
    PhasePoint::new(parse(l)?, parse(m)?)
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).unwrap_or(Value::Null)
}

fn stabilize_cmd(a: &StabilizeArgs) -> Result<Status> {
    let ctx = Ctx::new(&a.common)?;
    let radius = a.radius.or(ctx.cfg.radius).unwrap_or(3);
    let (t, eta, tau, origin) = match &a.instance {
        Some(path) => {
            let inst = Instance::parse(&std::fs::read_to_string(path)?)?;
            (inst.topology, inst.eta.clone(), inst.source()?, "file")
        }
        None => {
            let t = ctx.topology(&a.model)?;
            let p = ctx.point(&a.model, 1.0, 0.5)?;
            let law = p.law(&ctx.family(&a.model, "poisson")?)?;
            let src = RandomSource::new(ctx.seed, 0);
            let eta = ParticleConfig::sample(&t.ball(t.origin(), radius)?, &law, &src, &Default::default());
            (t, eta, InstructionSource::lazy(t, src, p.lambda)?, "sampled")
        }
    };
    let style = match a.cap_style.clone().or(ctx.cfg.cap_style.clone()).as_deref() {
        None | Some("jumps") => CapStyle::Jumps,
        Some("instructions") => CapStyle::Instructions,
        Some(o) => return Err(config_error("cap_style", format!("unknown cap style `{o}`"))),
    };
    let sites = t.ball(t.origin(), radius)?;
    let domain = match a.cap.or(ctx.cfg.cap) {
        Some(z) => Domain::with_uniform_cap(sites, z, style)?,
        None => Domain::uncapped(sites)?,
    };
    let policy = match a.policy.clone().or(ctx.cfg.policy.clone()).as_deref() {
        None | Some("fifo") => Policy::Fifo,
        Some(s) => Policy::Random(s.parse().map_err(|_| config_error("policy", format!("`{s}` is neither fifo nor a seed")))?),
    };
    let opts = StabilizeOptions {
        budget: ctx.budget,
        policy,
        relevant: a.relevant || ctx.cfg.relevant.unwrap_or(false),
        stop_when_jumps_exceed: None,
    };
    let res = Stabilizer::new(t, domain)?.run(&eta, &tau, &opts)?;
    let fmt_v = |v| t.format_vertex(v);
    let result = json!({
        "sites": res.sites.iter().map(|&v| fmt_v(v)).collect::<Vec<_>>(),
        "m": res.m,
        "jumps": res.jumps,
        "final": res.final_config.iter().map(|(v, s)| json!([fmt_v(v), s.to_string()])).collect::<Vec<_>>(),
        "halt": to_value(&res.halt),
        "sleeps_used": res.sleeps_used,
        "instructions": res.instructions,
    });
    ctx.emit_json(ctx.meta("stabilize", json!({ "topology": t.to_string(), "radius": radius, "source": origin })), result)?;
    Ok(Status::Ok)
}

fn decision(d: Decision) -> &'static str {
    match d {
        Decision::Yes => "1",
        Decision::No => "0",
        Decision::Inconclusive => "?",
    }
}

fn scan_cmd(a: &ScanArgs) -> Result<Status> {
    let ctx = Ctx::new(&a.common)?;
    if a.sweep {
        let t = ctx.topology(&a.model)?;
        let cfg = SweepConfig {
            topology: t,
            radius: a.event.radius.or(ctx.cfg.event.radius).unwrap_or(2),
            jump_cap: a.event.cap.or(ctx.cfg.event.cap),
            instances: a.instances.or(ctx.cfg.instances).unwrap_or(1000),
            seed: ctx.seed,
            lambdas: vec![0.25, 0.5, 1.0, 2.0, 4.0],
            mus: vec![0.3, 0.6, 1.0, 1.5],
            budget: ctx.budget,
        };
        let r = lemma_sweep(&cfg)?;
        ctx.emit_json(ctx.meta("essential-scan", json!({ "sweep": to_value(&cfg) })), to_value(&r))?;
        return Ok(Status::from_pass(r.violations() == 0 && r.inconclusive == 0));
    }
    let mut instances = Vec::new();
    let t;
    match &a.instance {
        Some(path) => {
            let inst = Instance::parse(&std::fs::read_to_string(path)?)?;
            t = inst.topology;
            instances.push((inst.eta.clone(), inst.source()?));
        }
        None => {
            t = ctx.topology(&a.model)?;
            let p = ctx.point(&a.model, 1.0, 0.5)?;
            let law = p.law(&ctx.family(&a.model, "poisson")?)?;
            let sites = t.ball(t.origin(), a.event.radius.or(ctx.cfg.event.radius).unwrap_or(0))?;
            for r in 0..a.instances.or(ctx.cfg.instances).unwrap_or(1) {
                let src = RandomSource::new(ctx.seed, r);
                let eta = ParticleConfig::sample(&sites, &law, &src, &Default::default());
                instances.push((eta, InstructionSource::lazy(t, src, p.lambda)?));
            }
        }
    }
    let event = ctx.event(t, &a.event, false)?;
    let mut rows = Vec::new();
    let mut inconclusive = false;
    for (i, (eta, tau)) in instances.iter().enumerate() {
        for r in scan(&event, eta, tau, ctx.budget)? {
            inconclusive |= r.s_essential == Decision::Inconclusive || r.p_essential == Decision::Inconclusive;
            rows.push(format!(
                "{i},{},{},{},{},{},{}",
                t.format_vertex(r.vertex).replace(',', ";"),
                r.index,
                decision(r.s_essential),
                decision(r.p_essential),
                u8::from(r.sleeps_positive),
                r.jumps
            ));
        }
    }
    let meta = ctx.meta("essential-scan", json!({ "topology": t.to_string(), "event": event.name() }));
    ctx.emit_csv(&meta, "instance,vertex,index,s_essential,p_essential,sleeps_positive,jumps", &rows)?;
    Ok(Status::from_pass(!inconclusive))
}

fn points(ctx: &Ctx, a: &RussoArgs) -> Result<Vec<PhasePoint>> {
    if !a.points.is_empty() {
        return a.points.iter().map(|s| parse_point(s, "point")).collect();
    }
    if let Some(ps) = &ctx.cfg.points {
        return ps.iter().map(|[l, m]| PhasePoint::new(*l, *m)).collect();
    }
    Ok(vec![ctx.point(&a.model, 1.0, 0.5)?])
}

fn russo_cmd(a: &RussoArgs, inequality: bool) -> Result<Status> {
    let ctx = Ctx::new(&a.common)?;
    let t = ctx.topology(&a.model)?;
    let family = ctx.family(&a.model, if inequality { "poisson" } else { "bernoulli" })?;
    let event = ctx.event(t, &a.event, true)?;
    let e = ExactEnumerator::new(&event, DEFAULT_STATE_LIMIT)?;
    let h = a.h.or(ctx.cfg.h).unwrap_or(1e-4);
    let pts = points(&ctx, a)?;
    for p in &pts {
        p.law(&family)?;
    }
    let meta = ctx.meta(
        if inequality { "diff-ineq" } else { "russo-check" },
        json!({ "topology": t.to_string(), "event": event.name(), "law": family.family(), "h": h, "states": e.state_count() }),
    );
    if inequality {
        let reports = pts.iter().map(|p| diff_inequality_check(&e, p, &family, h)).collect::<Result<Vec<_>>>()?;
        let pass = reports.iter().all(|r| r.pass);
        ctx.emit_json(meta, to_value(&reports))?;
        return Ok(Status::from_pass(pass));
    }
    let tol = a.tol.or(ctx.cfg.tol).unwrap_or(1e-6);
    let mut out = Vec::new();
    let mut pass = true;
    for p in &pts {
        let l = russo_lambda_residual(&e, p, &family, h)?;
        let m = russo_mu_residual(&e, p, &family, h)?;
        let alt = e.alternative_sum(p, &family)?;
        pass &= l.residual < tol && m.residual < tol;
        out.push(json!({
            "point": to_value(p),
            "probability": e.probability(p, &family)?,
            "lambda": to_value(&l),
            "mu": to_value(&m),
            "alternative_sum": alt,
            "pass": l.residual < tol && m.residual < tol,
        }));
    }
    ctx.emit_json(meta, json!({ "tol": tol, "reports": out }))?;
    Ok(Status::from_pass(pass))
}

fn monotone_cmd(a: &MonotoneArgs) -> Result<Status> {
    let ctx = Ctx::new(&a.common)?;
    let t = ctx.topology(&a.model)?;
    let family = ctx.family(&a.model, "poisson")?;
    let pick = |flag: &Option<String>, cfg: Option<[f64; 2]>, field: &str| -> Result<PhasePoint> {
        match (flag, cfg) {
            (Some(s), _) => parse_point(s, field),
            (None, Some([l, m])) => PhasePoint::new(l, m),
            (None, None) => Err(config_error(field, "missing phase point")),
        }
    };
    let p = pick(&a.p, ctx.cfg.p, "p")?;
    let q = pick(&a.q, ctx.cfg.q, "q")?;
    let event = ctx.event(t, &a.event, false)?;
    let samples = a.samples.or(ctx.cfg.samples).unwrap_or(10_000);
    let r = monotone_path_check(&event, &p, &q, &family, samples, ctx.seed, ctx.budget)?;
    let meta = ctx.meta("monotone-path", json!({ "topology": t.to_string(), "event": event.name(), "law": family.family() }));
    ctx.emit_json(meta, to_value(&r))?;
    Ok(Status::from_pass(r.pass))
}

fn curve_cmd(a: &CurveArgs) -> Result<Status> {
    let ctx = Ctx::new(&a.common)?;
    let t = ctx.topology(&a.model)?;
    let c = &ctx.cfg.curve;
    let base = ActivityConfig::defaults(t);
    let activity = ActivityConfig {
        radius: a.radius.or(c.radius).unwrap_or(base.radius),
        threshold: a.threshold.or(c.threshold).unwrap_or(base.threshold),
        samples: a.samples.or(c.samples).unwrap_or(base.samples),
        seed: ctx.seed,
        budget: ctx.budget,
        law: ctx.family(&a.model, "poisson")?,
        ..base
    };
    let lambdas = a.lambdas.clone().or(c.lambdas.clone()).unwrap_or_else(|| vec![0.25, 0.5, 1.0, 2.0]);
    let cfg = CurveConfig { tol: a.tol.or(c.tol).unwrap_or(0.05), ..CurveConfig::new(lambdas, activity) };
    let curve = estimate_critical_curve(&cfg)?;
    let slopes = slope_bound_check(&curve);
    let sandwich = curve.points.iter().all(|p| p.censored.is_some() || p.within_bounds());
    let pass = sandwich && slopes.iter().all(|s| s.pass);
    let meta = ctx.meta(
        "critical-curve",
        json!({
            "topology": t.to_string(),
            "radius": cfg.activity.radius,
            "threshold": cfg.activity.threshold,
            "samples": cfg.activity.samples,
            "tol": cfg.tol,
            "lambdas": cfg.lambdas,
            "isotonic": curve.isotonic,
            "sandwich": sandwich,
            "note": curve.note,
        }),
    );
    if ctx.format == Some(Format::Json) {
        ctx.emit_json(meta, json!({ "curve": to_value(&curve.points), "slopes": to_value(&slopes) }))?;
    } else {
        let rows: Vec<String> = curve
            .points
            .iter()
            .map(|p| format!("{},{},{},{},{}", p.lambda, p.zeta, p.ci_lo, p.ci_hi, u8::from(p.censored.is_some())))
            .collect();
        ctx.emit_csv(&meta, "lambda,zeta,ci_lo,ci_hi,censored", &rows)?;
    }
    Ok(Status::from_pass(pass))
}

fn selftest_cmd(a: &CommonArgs) -> Result<Status> {
    let ctx = Ctx::new(a)?;
    let mut checks = Vec::new();
    // Exact one-site event at (1, 0.5) with Bernoulli particles.
    let o = Topology::Line.origin();
    let ev = EventSpec::jump_threshold(Topology::Line, Domain::with_uniform_cap(vec![o], 1, CapStyle::Jumps)?, vec![1])?;
    let e = ExactEnumerator::new(&ev, DEFAULT_STATE_LIMIT)?;
    let p = PhasePoint::new(1.0, 0.5)?;
    let bern = ParticleLaw::Bernoulli { mean: 0.5 };
    let prob = e.probability(&p, &bern)?;
    checks.push(("one-site probability", (prob - 0.25).abs() < 1e-12));
    let l = russo_lambda_residual(&e, &p, &bern, 1e-4)?;
    let m = russo_mu_residual(&e, &p, &bern, 1e-4)?;
    checks.push(("one-site russo", l.residual < 1e-7 && m.residual < 1e-7));
    // Order independence on a few sampled balls.
    let t = Topology::Line;
    let st = Stabilizer::new(t, Domain::ball(&t, o, 2)?)?;
    let law = ParticleLaw::poisson(0.8)?;
    let mut abelian = true;
    for r in 0..20 {
        let src = RandomSource::new(ctx.seed, r);
        let eta = ParticleConfig::sample(st.domain().sites(), &law, &src, &Default::default());
        let tau = InstructionSource::lazy(t, src, 1.0)?;
        abelian &= check_abelian(&st, &eta, &tau, 5, ctx.seed ^ r, ctx.budget)?.verdict == Verdict::Pass;
    }
    checks.push(("abelian", abelian));
    let sweep = lemma_sweep(&SweepConfig {
        topology: t,
        radius: 2,
        jump_cap: None,
        instances: 100,
        seed: ctx.seed,
        lambdas: vec![0.5, 1.0, 2.0],
        mus: vec![0.5, 1.0],
        budget: ctx.budget,
    })?;
    checks.push(("essential lemmas", sweep.violations() == 0 && sweep.inconclusive == 0));
    let pass = checks.iter().all(|c| c.1);
    let result: Vec<Value> = checks.iter().map(|(n, ok)| json!({ "check": n, "pass": ok })).collect();
    ctx.emit_json(ctx.meta("selftest", json!({})), Value::Array(result))?;
    Ok(Status::from_pass(pass))
}

/// Runs one parsed command line.
pub fn run(cli: &Cli) -> Result<Status> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(config_error("threads", "must be positive"));
        }
        // A pool that already exists keeps its size.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match &cli.command {
        Command::Stabilize(a) => stabilize_cmd(a),
        Command::EssentialScan(a) => scan_cmd(a),
        Command::RussoCheck(a) => russo_cmd(a, false),
        Command::DiffIneq(a) => russo_cmd(a, true),
        Command::MonotonePath(a) => monotone_cmd(a),
        Command::CriticalCurve(a) => curve_cmd(a),
        Command::Selftest(a) => selftest_cmd(a),
    }
}

/// Parses the process arguments, runs, and returns the exit code.
pub fn main_from_env() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(Status::Ok) => 0,
        Ok(Status::CheckFailed) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_round_trip_and_unknown_fields() {
        let cfg = RunConfig::parse(
            "topology = \"line\"\nlaw = \"bernoulli\"\nmu = 0.5\npoints = [[1.0, 0.5]]\n[event]\ncap = 1\nthreshold = [1]\n",
        )
        .unwrap();
        assert_eq!(cfg.event.cap, Some(1));
        assert_eq!(RunConfig::parse(&toml::to_string(&cfg).unwrap()).unwrap(), cfg);
        assert!(matches!(RunConfig::parse("mu = \"x\""), Err(ArwError::Config { .. })));
        assert!(matches!(RunConfig::parse("[event]\nradios = 2\n"), Err(ArwError::Config { .. })));
    }

    #[test]
    fn flags_override_config() {
        let cli = Cli::try_parse_from(["arw", "russo-check", "--mu", "0.3", "--point", "1,0.5"]).unwrap();
        let Command::RussoCheck(a) = cli.command else { panic!() };
        let ctx = Ctx { cfg: RunConfig { mu: Some(0.9), ..Default::default() }, seed: 0, budget: 1, out: None, format: None };
        assert_eq!(ctx.point(&a.model, 1.0, 0.5).unwrap().mu, 0.3);
        assert_eq!(points(&ctx, &a).unwrap(), vec![PhasePoint::new(1.0, 0.5).unwrap()]);
    }

    #[test]
    fn bad_point_is_config_error() {
        assert!(matches!(parse_point("1;2", "p"), Err(ArwError::Config { .. })));
        assert!(parse_point("1, 0.25", "p").is_ok());
    }
}
