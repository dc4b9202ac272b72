//! Argument definitions and dispatch to the library.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lprim::convolution::{conv_lq, conv_multiplier, star, ConvolutionKind};
use lprim::fourier::{fourier, fourier_n, parseval_check, PARSEVAL_WINDOW};
use lprim::funcrepr::descriptor::function_from_json;
use lprim::higher::pair_n;
use lprim::lpspace::{
    conjugate, delta_train_from_json, distribution_from_json, membership_check, multiplier_from_json, pair,
    reconstruct, step_approximate, Membership,
};
use lprim::poisson::{boundary_convergence, extension_of};
use lprim::{Config, Distribution, Error, Expr, HalfPlanePoint, IteratedMultiplier, Multiplier, NthDistribution};

use crate::report::{Cell, RunReport, Table};
use crate::suites;

#[derive(Parser, Debug)]
#[command(name = "lprim", version, about = "Distributions with L^p primitives: norms, pairings, convolution, transforms")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct Global {
    /// Absolute quadrature tolerance.
    #[arg(long, global = true, env = "LPRIM_ABS_TOL")]
    pub abs_tol: Option<f64>,
    /// Relative quadrature tolerance.
    #[arg(long, global = true, env = "LPRIM_REL_TOL")]
    pub rel_tol: Option<f64>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Assert that the first output value equals this.
    #[arg(long, global = true)]
    pub expect: Option<f64>,
    /// Tolerance for --expect.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol: f64,
    /// Worker threads for parallel sections.
    #[arg(long, global = true, env = "LPRIM_THREADS")]
    pub threads: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Primitive `F` of the distribution `f = F'`.
#[derive(Args, Debug, Clone)]
pub struct FArg {
    /// Primitive: DSL text, a JSON descriptor, or @file.
    #[arg(long = "F", visible_alias = "f", value_name = "DESCRIPTOR")]
    pub big_f: String,
    #[arg(long)]
    pub p: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Multiplier,
    Lq,
    Star,
}

impl From<Kind> for ConvolutionKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Multiplier => ConvolutionKind::Multiplier,
            Kind::Lq => ConvolutionKind::Lq,
            Kind::Star => ConvolutionKind::Star,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// ‖f‖'_p = ‖F‖_p.
    Norm {
        #[command(flatten)]
        f: FArg,
    },
    /// ∫ f G = -∫ F g; with --n, the n-th order pairing.
    Pair {
        #[command(flatten)]
        f: FArg,
        /// Multiplier density g = G'.
        #[arg(long)]
        g: String,
        /// Defaults to the conjugate of p.
        #[arg(long)]
        q: Option<f64>,
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
    /// Norm and dual norm sup |∫ f G| over the unit ball.
    Dualnorm {
        #[command(flatten)]
        f: FArg,
    },
    /// F_n(x) = -∫ f T_(x,n).
    Reconstruct {
        #[command(flatten)]
        f: FArg,
        #[arg(long, default_value_t = 16.0)]
        n: f64,
        #[arg(long, value_delimiter = ',', default_value = "0")]
        x: Vec<f64>,
    },
    /// Step-function approximations on n cells.
    Steps {
        #[command(flatten)]
        f: FArg,
        #[arg(long, value_delimiter = ',', default_value = "4,16,64")]
        n: Vec<usize>,
    },
    /// Convolution sampled at --x.
    Conv {
        #[arg(long, value_enum)]
        kind: Kind,
        #[command(flatten)]
        f: FArg,
        #[arg(long)]
        g: String,
        #[arg(long)]
        q: Option<f64>,
        #[arg(long, value_delimiter = ',', default_value = "0")]
        x: Vec<f64>,
    },
    /// f ⋆ g for p = 1; --g is the second primitive.
    Star {
        #[command(flatten)]
        f: FArg,
        #[arg(long)]
        g: String,
        #[arg(long, value_delimiter = ',', default_value = "0")]
        x: Vec<f64>,
    },
    /// f̂(s) = is F̂(s), or (is)^n F̂(s) with --n.
    Fourier {
        #[command(flatten)]
        f: FArg,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        s: Vec<f64>,
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
    /// (f, g) against the windowed discrete transform on --grid points.
    Parseval {
        #[command(flatten)]
        f: FArg,
        #[arg(long)]
        g: String,
        #[arg(long, value_delimiter = ',', default_value = "16384")]
        grid: Vec<usize>,
        #[arg(long, default_value_t = PARSEVAL_WINDOW)]
        half_width: f64,
    },
    /// Harmonic extension of D^n F at (x, y).
    Poisson {
        #[command(flatten)]
        f: FArg,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        x: Vec<f64>,
        #[arg(long)]
        y: f64,
        #[arg(long, default_value_t = 0)]
        n: usize,
    },
    /// ‖U_y‖_p and ‖U_y - F‖_p over a descending grid of y.
    PoissonConverge {
        #[command(flatten)]
        f: FArg,
        #[arg(long, value_delimiter = ',', default_value = "1,0.3,0.1")]
        ys: Vec<f64>,
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
    /// Sufficient test for f ∈ L'^p.
    Membership {
        /// The function f itself (not a primitive).
        #[arg(long = "F", visible_alias = "f", value_name = "DESCRIPTOR")]
        big_f: String,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0.75)]
        alpha: f64,
    },
    /// Runs acceptance suites.
    Verify {
        /// Comma separated suite names, or `all`.
        #[arg(long, value_delimiter = ',', default_value = "all")]
        suite: Vec<String>,
        /// Lists the suites and exits.
        #[arg(long)]
        list: bool,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Norm { .. } => "norm",
            Command::Pair { .. } => "pair",
            Command::Dualnorm { .. } => "dualnorm",
            Command::Reconstruct { .. } => "reconstruct",
            Command::Steps { .. } => "steps",
            Command::Conv { .. } => "conv",
            Command::Star { .. } => "star",
            Command::Fourier { .. } => "fourier",
            Command::Parseval { .. } => "parseval",
            Command::Poisson { .. } => "poisson",
            Command::PoissonConverge { .. } => "poisson-converge",
            Command::Membership { .. } => "membership",
            Command::Verify { .. } => "verify",
        }
    }
}

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    Failure = 1,
    Assertion = 2,
}

pub fn config(g: &Global) -> anyhow::Result<Config> {
    let d = Config::default();
    let cfg = Config::with_tolerances(g.abs_tol.unwrap_or(d.abs_tol), g.rel_tol.unwrap_or(d.rel_tol));
    cfg.validate()?;
    Ok(cfg)
}

fn read_text(s: &str) -> anyhow::Result<String> {
    match s.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).with_context(|| format!("reading {path}")),
        None => Ok(s.to_string()),
    }
}

/// JSON when the text looks like JSON, otherwise `None`.
fn as_json(text: &str) -> anyhow::Result<Option<Value>> {
    let t = text.trim_start();
    if t.starts_with('{') || t.starts_with('"') {
        Ok(Some(serde_json::from_str(t).context("malformed JSON descriptor")?))
    } else {
        Ok(None)
    }
}

pub fn load_function(s: &str) -> anyhow::Result<Expr> {
    let text = read_text(s)?;
    match as_json(&text)? {
        Some(v) => Ok(function_from_json(&v, "")?),
        None => Ok(Expr::parse(text.trim())?),
    }
}

fn require_p(p: Option<f64>) -> anyhow::Result<f64> {
    p.ok_or_else(|| anyhow!("--p is required unless the descriptor carries p"))
}

/// A function descriptor with `--p`, a distribution descriptor
/// `{"primitive", "p"}`, or a delta train `{"atoms"}` with `--p`.
pub fn load_distribution(a: &FArg, cfg: &Config) -> anyhow::Result<Distribution> {
    let text = read_text(&a.big_f)?;
    if let Some(v) = as_json(&text)? {
        if v.get("primitive").is_some() {
            let d = distribution_from_json(&v, "", cfg)?;
            if let Some(p) = a.p {
                if p != d.p() {
                    bail!("--p {p} disagrees with the descriptor's p = {}", d.p());
                }
            }
            return Ok(d);
        }
        if v.get("atoms").is_some() {
            let t = delta_train_from_json::<f64>(&v, "")?;
            return Ok(t.to_distribution(require_p(a.p)?, cfg)?);
        }
        return Ok(Distribution::new(function_from_json(&v, "")?, require_p(a.p)?, cfg)?);
    }
    Ok(Distribution::new(Expr::parse(text.trim())?, require_p(a.p)?, cfg)?)
}

/// A function descriptor with `q`, or `{"density", "q"}`. Densities
/// outside `L^q` become local multipliers.
pub fn load_multiplier(s: &str, q: f64, cfg: &Config) -> anyhow::Result<Multiplier> {
    let text = read_text(s)?;
    if let Some(v) = as_json(&text)? {
        if v.get("density").is_some() {
            return Ok(multiplier_from_json(&v, "", cfg)?);
        }
    }
    let g = load_function(s)?;
    match Multiplier::new(g.clone(), q, cfg) {
        Err(Error::NotInLp { .. }) => Ok(Multiplier::local_with(g, q, cfg)?),
        other => Ok(other?),
    }
}

fn nth_multiplier(g: Expr, q: f64, n: usize, cfg: &Config) -> anyhow::Result<IteratedMultiplier> {
    match IteratedMultiplier::new(g.clone(), q, n, cfg) {
        Err(Error::NotInLp { .. }) => Ok(IteratedMultiplier::local(g, q, n, cfg)?),
        other => Ok(other?),
    }
}

fn row<const N: usize>(cells: [Cell; N]) -> Vec<Cell> {
    cells.into()
}

/// Runs one parsed command.
pub fn dispatch(cli: &Cli) -> anyhow::Result<RunReport> {
    let cfg = config(&cli.global)?;
    let start = Instant::now();
    let inputs = serde_json::to_value(format!("{:?}", cli.command)).unwrap_or(Value::Null);
    let mut r = RunReport::new(cli.command.name(), inputs);
    match &cli.command {
        Command::Norm { f } => {
            let d = load_distribution(f, &cfg)?;
            r.inputs = json!({"F": f.big_f, "p": d.p()});
            r.output("norm", d.norm(), Some(d.norm_err()));
        }
        Command::Pair { f, g, q, n } => {
            let d = load_distribution(f, &cfg)?;
            let q = q.unwrap_or(conjugate(d.p()));
            r.inputs = json!({"F": f.big_f, "g": g, "p": d.p(), "q": q, "n": n});
            let v = if *n == 1 {
                pair(&d, &load_multiplier(g, q, &cfg)?, &cfg)?
            } else {
                let fd = NthDistribution::from_distribution(d, *n)?;
                pair_n(&fd, &nth_multiplier(load_function(g)?, q, *n, &cfg)?, &cfg)?
            };
            r.output("pair", v, None);
        }
        Command::Dualnorm { f } => {
            let d = load_distribution(f, &cfg)?;
            r.inputs = json!({"F": f.big_f, "p": d.p()});
            r.output("norm", d.norm(), Some(d.norm_err()));
            r.output("dual_norm", d.dual_norm(&cfg)?, None);
        }
        Command::Reconstruct { f, n, x } => {
            let d = load_distribution(f, &cfg)?;
            r.inputs = json!({"F": f.big_f, "p": d.p(), "n": n, "x": x});
            let mut t = Table::new(&["x", "n", "value"]);
            for &xi in x {
                let v = reconstruct(&d, xi, *n, &cfg)?;
                r.output(format!("F_n({xi})"), v, None);
                t.push(row([xi.into(), (*n).into(), v.into()]));
            }
            r.table = t;
        }
        Command::Steps { f, n } => {
            let d = load_distribution(f, &cfg)?;
            r.inputs = json!({"F": f.big_f, "p": d.p(), "n": n});
            let mut t = Table::new(&["n", "error", "atoms"]);
            for &k in n {
                let s = step_approximate(&d, k, &cfg)?;
                r.output(format!("error(n={k})"), s.error, None);
                t.push(row([k.into(), s.error.into(), s.train.atoms().len().into()]));
            }
            r.table = t;
        }
        Command::Conv { kind, f, g, q, x } => convolution(&mut r, (*kind).into(), f, g, *q, x, &cfg)?,
        Command::Star { f, g, x } => convolution(&mut r, ConvolutionKind::Star, f, g, None, x, &cfg)?,
        Command::Fourier { f, s, n } => {
            let fa = FArg { p: Some(f.p.unwrap_or(1.0)), ..f.clone() };
            let d = load_distribution(&fa, &cfg)?;
            r.inputs = json!({"F": f.big_f, "p": d.p(), "n": n, "s": s});
            let fd = NthDistribution::from_distribution(d.clone(), *n)?;
            let mut t = Table::new(&["s", "re", "im"]);
            for &si in s {
                let z = if *n == 1 { fourier(&d, si, &cfg)? } else { fourier_n(&fd, si, &cfg)? };
                r.output(format!("re({si})"), z.re, None);
                r.output(format!("im({si})"), z.im, None);
                t.push(row([si.into(), z.re.into(), z.im.into()]));
            }
            r.table = t;
        }
        Command::Parseval { f, g, grid, half_width } => {
            let fa = FArg { p: Some(f.p.unwrap_or(2.0)), ..f.clone() };
            let a = load_distribution(&fa, &cfg)?;
            let b = load_distribution(&FArg { big_f: g.clone(), p: fa.p }, &cfg)?;
            r.inputs = json!({"F": f.big_f, "G": g, "grid": grid, "half_width": half_width});
            let mut t = Table::new(&["grid", "lhs", "rhs", "gap"]);
            for &n in grid {
                let c = parseval_check(&a, &b, n, *half_width, &cfg)?;
                r.output(format!("gap(grid={n})"), c.gap, None);
                t.push(row([n.into(), c.lhs.into(), c.rhs.into(), c.gap.into()]));
            }
            r.table = t;
        }
        Command::Poisson { f, x, y, n } => {
            let big = load_function(&f.big_f)?;
            r.inputs = json!({"F": f.big_f, "x": x, "y": y, "n": n});
            let mut t = Table::new(&["x", "y", "n", "value"]);
            for &xi in x {
                let v = extension_of(&big, *n, HalfPlanePoint::new(xi, *y)?, &cfg)?;
                r.output(format!("u({xi},{y})"), v, None);
                t.push(row([xi.into(), (*y).into(), (*n).into(), v.into()]));
            }
            r.table = t;
        }
        Command::PoissonConverge { f, ys, n } => {
            let d = load_distribution(f, &cfg)?;
            r.inputs = json!({"F": f.big_f, "p": d.p(), "ys": ys, "n": n});
            let fd = NthDistribution::from_distribution(d, *n)?;
            let mut t = Table::new(&["y", "norm", "distance", "contraction"]);
            for b in boundary_convergence(&fd, ys, &cfg)? {
                r.output(format!("norm(y={})", b.y), b.norm, None);
                t.push(row([b.y.into(), b.norm.into(), b.distance.into(), b.contraction.into()]));
            }
            r.table = t;
        }
        Command::Membership { big_f, p, alpha } => {
            let e = load_function(big_f)?;
            r.inputs = json!({"f": big_f, "p": p, "alpha": alpha});
            let m = membership_check(&e, *p, *alpha, &cfg)?;
            let mut t = Table::new(&["result", "detail"]);
            let detail = match &m {
                Membership::Certified { integral, integral_bound, moment, moment_bound } => {
                    r.output("integral", *integral, Some(*integral_bound));
                    r.output("moment", *moment, Some(*moment_bound));
                    format!("integral {integral:e} (bound {integral_bound:e}), moment {moment:e} (bound {moment_bound:e})")
                }
                Membership::NotCertified { reason } | Membership::Inconclusive { reason } => reason.clone(),
            };
            t.push(row([m.label().into(), detail.into()]));
            r.table = t;
        }
        Command::Verify { suite, list } => {
            r.inputs = json!({"suite": suite});
            if *list {
                let mut t = Table::new(&["suite", "about"]);
                for s in suites::SUITES {
                    t.push(row([s.name.into(), s.about.into()]));
                }
                r.table = t;
            } else {
                r.pass_fail = suites::run_named(suite, &cfg).map_err(|e| anyhow!(e))?;
                r.table = assertion_table(&r);
            }
        }
    }
    if let Some(want) = cli.global.expect {
        let first = r.outputs.first().ok_or_else(|| anyhow!("--expect needs a command with a numeric output"))?;
        let v = first.value;
        r.pass_fail.push(crate::report::Assertion {
            suite: "expect".into(),
            name: first.label.clone(),
            relation: "|v - t| <= tol".into(),
            value: v,
            target: want,
            tolerance: cli.global.tol,
            passed: (v - want).abs() <= cli.global.tol,
            detail: String::new(),
        });
    }
    r.wall_time = start.elapsed().as_secs_f64();
    Ok(r)
}

fn convolution(
    r: &mut RunReport,
    kind: ConvolutionKind,
    f: &FArg,
    g: &str,
    q: Option<f64>,
    x: &[f64],
    cfg: &Config,
) -> anyhow::Result<()> {
    let p = if kind == ConvolutionKind::Star { Some(f.p.unwrap_or(1.0)) } else { f.p };
    let d = load_distribution(&FArg { p, ..f.clone() }, cfg)?;
    r.inputs = json!({"kind": kind.name(), "F": f.big_f, "g": g, "p": d.p(), "q": q, "x": x});
    if kind == ConvolutionKind::Multiplier {
        let m = load_multiplier(g, q.unwrap_or(conjugate(d.p())), cfg)?;
        let mut t = Table::new(&["x", "value"]);
        for &xi in x {
            let v = conv_multiplier(&d, &m, xi, cfg)?;
            r.output(format!("({xi})"), v, None);
            t.push(row([xi.into(), v.into()]));
        }
        r.table = t;
        return Ok(());
    }
    let res = if kind == ConvolutionKind::Star {
        let b = load_distribution(&FArg { big_f: g.to_string(), p: Some(1.0) }, cfg)?;
        star(&d, &b, cfg)?
    } else {
        let q = q.ok_or_else(|| anyhow!("--q is required for --kind lq"))?;
        let rr = 1.0 / (1.0 / d.p() + 1.0 / q - 1.0);
        conv_lq(&d, &load_function(g)?, q, rr, false, cfg)?
    };
    let mut t = Table::new(&["x", "value", "primitive"]);
    for &xi in x {
        let v = res.density_at(xi, cfg)?;
        let big = res.primitive().eval(xi)?;
        r.output(format!("({xi})"), v, None);
        t.push(row([xi.into(), v.into(), big.into()]));
    }
    r.output("norm", res.distribution.norm(), Some(res.distribution.norm_err()));
    r.table = t;
    Ok(())
}

fn assertion_table(r: &RunReport) -> Table {
    let mut t = Table::new(&["suite", "name", "relation", "value", "target", "tolerance", "result", "detail"]);
    for a in &r.pass_fail {
        t.push(row([
            a.suite.clone().into(),
            a.name.clone().into(),
            a.relation.clone().into(),
            a.value.into(),
            a.target.into(),
            a.tolerance.into(),
            a.passed.into(),
            a.detail.clone().into(),
        ]));
    }
    t
}

/// Writes the report in the requested format.
pub fn write_report(r: &RunReport, g: &Global, stdout: &mut dyn Write) -> anyhow::Result<()> {
    let mut buf = vec![];
    match g.format {
        Format::Csv => {
            let t = if r.table.is_empty() { r.outputs_table() } else { r.table.clone() };
            t.write_csv(&mut buf)?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut buf, r)?;
            buf.push(b'\n');
        }
    }
    match &g.out {
        Some(path) => std::fs::write(path, &buf).with_context(|| format!("writing {}", path.display()))?,
        None => stdout.write_all(&buf)?,
    }
    Ok(())
}

/// Parses `args`, runs the command and writes its report.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Exit
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { Exit::Failure } else { Exit::Success };
        }
    };
    let result = match cli.global.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(&cli)),
            Err(e) => Err(anyhow!("thread pool: {e}")),
        },
        None => dispatch(&cli),
    };
    let result = result.and_then(|r| write_report(&r, &cli.global, stdout).map(|_| r));
    match result {
        Ok(r) if r.all_passed() => Exit::Success,
        Ok(r) => {
            for a in r.pass_fail.iter().filter(|a| !a.passed) {
                let _ = writeln!(
                    stderr,
                    "FAIL {}: {}: value {:e}, target {:e}, tolerance {:e} {}",
                    a.suite, a.name, a.value, a.target, a.tolerance, a.detail
                );
            }
            Exit::Assertion
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e:#}");
            Exit::Failure
        }
    }
}
