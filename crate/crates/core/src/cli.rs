//! Command-line front end: one subcommand per module plus the preset corpus.

use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::corpus::{self, PRESETS};
use crate::dsl::{FuncDef, SamplePoint};
use crate::error::{Error, Result};
use crate::exact::Scalar;
use crate::fnacc::{
    accrete_continuity, accretion_derivative, accretion_limit, accretion_of_function, interior_extremum_check,
    locally_bounded_probe, AccretionQuery,
};
use crate::integration::{ftc_check, integrate, integrate_uniform, riemann_oracle};
use crate::report::{integral_summary, to_value, Report};
use crate::sequences::{analyze, subsequential_limits, Schedule, SequenceSpec};
use crate::sets::IntervalSet;

pub const THREADS_ENV: &str = "ACCRETION_LAB_THREADS";

#[derive(Parser, Debug)]
#[command(name = "accretion-lab", version, about = "Accretion sets, limits and weighted-sum integrals over exact rationals")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Output::Json, global = true)]
    pub output: Output,
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Include wall-clock time in the report (makes output run-dependent).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate a set expression and report its topology.
    Setop {
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
    },
    /// Accretion, convergence and limsup/liminf of a sequence.
    Seq(SeqArgs),
    /// Accretion of a function at a point, or its limit, continuity or local boundedness.
    Fnacc(FnaccArgs),
    /// Accretion derivative, or the interior extremum check.
    Diff(DiffArgs),
    /// Weighted-sum integral with a Darboux-gap verdict.
    Integrate(IntegrateArgs),
    /// Check integral = F(b) - F(a).
    Ftc(FtcArgs),
    /// Run named presets of the worked examples.
    Corpus(CorpusArgs),
}

#[derive(Args, Debug)]
pub struct SeqArgs {
    /// Catalog JSON, e.g. {"kind":"formula","expr":"1/n"}.
    #[arg(long, conflicts_with_all = ["formula", "odd"])]
    spec: Option<String>,
    /// Formula in n; repeat the flag for a sequence in R^2.
    #[arg(long, action = clap::ArgAction::Append, allow_hyphen_values = true)]
    formula: Option<Vec<String>>,
    #[arg(long, requires = "even", allow_hyphen_values = true)]
    odd: Option<String>,
    #[arg(long, requires = "odd", allow_hyphen_values = true)]
    even: Option<String>,
    #[arg(long)]
    horizon: Option<u64>,
    #[arg(long)]
    eps: Option<String>,
    /// Comma-separated tail indices.
    #[arg(long, value_delimiter = ',')]
    tails: Option<Vec<u64>>,
    #[arg(long)]
    threshold: Option<String>,
    /// Also run the subsequential-limit oracle and compare.
    #[arg(long)]
    oracle: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FnaccMode {
    Accretion,
    Limit,
    Continuity,
    Bounded,
}

#[derive(Args, Debug)]
pub struct FnaccArgs {
    /// Query JSON: {"f", "c", "B", "delete_c", "deltas", "samples", "eps", "tol", "domain"}.
    #[arg(long, conflicts_with_all = ["f", "c"])]
    query: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    f: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    /// Restriction set B.
    #[arg(long = "set")]
    set: Option<String>,
    #[arg(long)]
    domain: Option<String>,
    #[arg(long)]
    delete_c: bool,
    #[arg(long)]
    eps: Option<String>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, value_enum, default_value_t = FnaccMode::Accretion)]
    mode: FnaccMode,
    /// Starting radius for `--mode bounded`.
    #[arg(long, default_value = "1/2")]
    delta: String,
}

#[derive(Args, Debug)]
pub struct DiffArgs {
    #[arg(long, allow_hyphen_values = true)]
    g: String,
    #[arg(long, allow_hyphen_values = true)]
    c: String,
    /// Interval I containing c.
    #[arg(long, default_value = "(-inf, inf)")]
    interval: String,
    #[arg(long)]
    domain: Option<String>,
    /// Check c as an interior argmax on the bounded open interval.
    #[arg(long)]
    extremum: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Strategy {
    Adaptive,
    Uniform,
}

#[derive(Args, Debug)]
pub struct IntegrateArgs {
    #[arg(long, allow_hyphen_values = true)]
    f: String,
    #[arg(long, allow_hyphen_values = true)]
    a: String,
    #[arg(long, allow_hyphen_values = true)]
    b: String,
    #[arg(long, default_value = "1/1000")]
    eps: String,
    #[arg(long, default_value_t = 40)]
    max_depth: u32,
    #[arg(long)]
    domain: Option<String>,
    #[arg(long, value_enum, default_value_t = Strategy::Adaptive)]
    strategy: Strategy,
    /// Also run the random-tag Riemann oracle (uses --seed).
    #[arg(long)]
    oracle: bool,
    /// Write the final partition as CSV.
    #[arg(long)]
    emit_partition: Option<std::path::PathBuf>,
}

#[derive(Args, Debug)]
pub struct FtcArgs {
    #[arg(long, allow_hyphen_values = true)]
    f: String,
    #[arg(long = "F", allow_hyphen_values = true)]
    big_f: String,
    #[arg(long, allow_hyphen_values = true)]
    a: String,
    #[arg(long, allow_hyphen_values = true)]
    b: String,
    #[arg(long, default_value = "1/1000")]
    eps: String,
}

#[derive(Args, Debug)]
pub struct CorpusArgs {
    #[arg(long, conflicts_with_all = ["all", "list"])]
    name: Option<String>,
    #[arg(long)]
    all: bool,
    #[arg(long)]
    list: bool,
}

fn scalar(s: &str) -> Result<Scalar> {
    Ok(Scalar::parse(s)?)
}

fn func(src: &str, domain: Option<&str>) -> Result<FuncDef> {
    let f = FuncDef::parse(src)?;
    match domain {
        Some(d) => f.with_domain(IntervalSet::eval_expr(d)?),
        None => Ok(f),
    }
}

/// Command outcome: the report plus whether every check it ran passed.
struct Done {
    report: Report,
    ok: bool,
}

fn done(report: Report) -> Result<Done> {
    Ok(Done { report, ok: true })
}

fn setop(expr: &str) -> Result<Done> {
    let s = IntervalSet::eval_expr(expr)?;
    let result = json!({ "set": s.to_string(), "topology": to_value(&s.report())? });
    done(Report::new("setop").input("expr", expr).with_result(result))
}

fn seq(a: &SeqArgs) -> Result<Done> {
    let spec = match (&a.spec, &a.formula, &a.odd, &a.even) {
        (Some(j), ..) => SequenceSpec::from_json(j)?,
        (_, Some(f), ..) => match f.as_slice() {
            [x] => SequenceSpec::formula(x)?,
            [x, y] => SequenceSpec::formula2(x, y)?,
            _ => unreachable!("clap bounds the count"),
        },
        (_, _, Some(o), Some(e)) => SequenceSpec::parity(o, e)?,
        _ => return Err(Error::Input("give --spec, --formula or --odd/--even".into())),
    };
    let mut sched = Schedule::default();
    if let Some(h) = a.horizon {
        sched.horizon = h;
    }
    if let Some(e) = &a.eps {
        sched.eps = scalar(e)?;
    }
    if let Some(t) = &a.tails {
        sched.tails = t.clone();
    }
    if let Some(t) = &a.threshold {
        sched.threshold = scalar(t)?;
    }
    let r = analyze(&spec, &sched)?;
    let mut result = to_value(&r)?;
    let mut ok = true;
    if a.oracle {
        let o = subsequential_limits(&spec, &sched)?;
        let matched = r.accretion.eps_matches(&o, &sched.eps);
        ok = matched;
        result["oracle"] = json!({ "subsequential_limits": to_value(&o)?, "eps_matched": matched });
    }
    let report = Report::new("seq").input("sequence", spec.to_string()).input("schedule", to_value(&sched)?);
    Ok(Done { report: report.with_result(result), ok })
}

fn fnacc(a: &FnaccArgs) -> Result<Done> {
    let q = match &a.query {
        Some(j) => AccretionQuery::from_json(j)?,
        None => {
            let (Some(f), Some(c)) = (&a.f, &a.c) else {
                return Err(Error::Input("give --query or both --f and --c".into()));
            };
            let mut q = AccretionQuery::new(func(f, a.domain.as_deref())?, SamplePoint::parse(c)?);
            if let Some(b) = &a.set {
                q.b = IntervalSet::eval_expr(b)?;
            }
            q.delete_c = a.delete_c;
            if let Some(e) = &a.eps {
                q.eps = scalar(e)?;
            }
            if let Some(n) = a.samples {
                q.samples = n;
            }
            q.validate()?;
            q
        }
    };
    let result = match a.mode {
        FnaccMode::Accretion => to_value(&accretion_of_function(&q)?)?,
        FnaccMode::Limit => to_value(&accretion_limit(&q)?)?,
        FnaccMode::Continuity => json!({ "continuity": accrete_continuity(&q.f, &q.c)? }),
        FnaccMode::Bounded => {
            json!({ "locally_bounded": locally_bounded_probe(&q.f, &q.c, &q.b, &scalar(&a.delta)?)? })
        }
    };
    let mode = format!("{:?}", a.mode).to_lowercase();
    done(Report::new("fnacc").input("query", to_value(&q)?).input("mode", mode).with_result(result))
}

fn diff(a: &DiffArgs) -> Result<Done> {
    let g = func(&a.g, a.domain.as_deref())?;
    let c = scalar(&a.c)?;
    let i = IntervalSet::eval_expr(&a.interval)?;
    let report = Report::new("diff").input("g", g.to_string()).input("c", c.to_string()).input("interval", i.to_string());
    if a.extremum {
        let [piece] = i.pieces() else {
            return Err(Error::Precondition(format!("{i} is not an interval")));
        };
        let Some((lo, hi)) = piece.bounds() else {
            return Err(Error::Precondition(format!("{i} is not bounded")));
        };
        let r = interior_extremum_check(&g, lo, hi, &c)?;
        let ok = r.holds;
        return Ok(Done { report: report.input("extremum", true).with_result(to_value(&r)?), ok });
    }
    let r = accretion_derivative(&g, &c, &i)?;
    done(report.with_result(to_value(&r)?))
}

fn integrate_cmd(a: &IntegrateArgs, seed: u64) -> Result<Done> {
    let f = func(&a.f, a.domain.as_deref())?;
    let (lo, hi, eps) = (scalar(&a.a)?, scalar(&a.b)?, scalar(&a.eps)?);
    let v = match a.strategy {
        Strategy::Adaptive => integrate(&f, &lo, &hi, &eps, a.max_depth)?,
        Strategy::Uniform => integrate_uniform(&f, &lo, &hi, &eps, a.max_depth)?,
    };
    let mut result = integral_summary(&v);
    let mut report = Report::new("integrate")
        .input("f", f.to_string())
        .input("a", lo.to_string())
        .input("b", hi.to_string())
        .input("eps", eps.to_string())
        .input("max_depth", a.max_depth)
        .input("strategy", format!("{:?}", a.strategy).to_lowercase());
    if a.oracle {
        result["riemann_oracle"] = to_value(&riemann_oracle(&f, &lo, &hi, &eps, seed)?)?;
        report = report.input("seed", seed);
    }
    if let Some(path) = &a.emit_partition {
        std::fs::write(path, v.partition_csv()?).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
        report = report.note(format!("partition written to {}", path.display()));
    }
    done(report.with_result(result))
}

fn ftc_cmd(a: &FtcArgs) -> Result<Done> {
    let (f, big_f) = (FuncDef::parse(&a.f)?, FuncDef::parse(&a.big_f)?);
    let (lo, hi, eps) = (scalar(&a.a)?, scalar(&a.b)?, scalar(&a.eps)?);
    let r = ftc_check(&f, &big_f, &lo, &hi, &eps)?;
    let result = json!({
        "holds": r.holds,
        "difference": r.difference,
        "error": r.error,
        "integral": integral_summary(&r.integral),
        "spot_checks": r.spot_checks,
    });
    let report = Report::new("ftc")
        .input("f", f.to_string())
        .input("F", big_f.to_string())
        .input("a", lo.to_string())
        .input("b", hi.to_string())
        .input("eps", eps.to_string());
    Ok(Done { report: report.with_result(result), ok: r.holds })
}

fn preset_value(p: &corpus::Preset) -> Result<(Value, bool)> {
    let o = p.run()?;
    Ok((json!({ "name": p.name, "expected": p.expected, "pass": o.pass, "observed": o.observed }), o.pass))
}

fn corpus_cmd(a: &CorpusArgs) -> Result<Done> {
    if a.list {
        let names: Vec<Value> = PRESETS.iter().map(|p| json!({ "name": p.name, "expected": p.expected })).collect();
        return done(Report::new("corpus").input("list", true).with_result(json!({ "presets": names })));
    }
    if let Some(n) = &a.name {
        let (v, ok) = preset_value(corpus::find(n)?)?;
        return Ok(Done { report: Report::new("corpus").input("name", n.as_str()).with_result(v), ok });
    }
    if !a.all {
        return Err(Error::Input("give --name, --all or --list".into()));
    }
    let mut items = Vec::new();
    let mut passed = 0;
    for p in PRESETS {
        let (v, ok) = preset_value(p)?;
        passed += ok as usize;
        items.push(v);
    }
    let ok = passed == PRESETS.len();
    let result = json!({ "presets": items, "passed": passed, "total": PRESETS.len() });
    Ok(Done { report: Report::new("corpus").input("all", true).with_result(result), ok })
}

/// Caps the global rayon pool from `ACCRETION_LAB_THREADS`, once.
pub fn init_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|s| s.trim().parse::<usize>().ok()).filter(|n| *n > 0) {
        // a pool built earlier in the process keeps its size
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

/// Runs one command line; returns the exit code (0 ok, 1 failed check or
/// precondition/domain error, 2 parse error).
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    init_threads();
    let start = Instant::now();
    let res = match &cli.command {
        Command::Setop { expr } => setop(expr),
        Command::Seq(a) => seq(a),
        Command::Fnacc(a) => fnacc(a),
        Command::Diff(a) => diff(a),
        Command::Integrate(a) => integrate_cmd(a, cli.seed),
        Command::Ftc(a) => ftc_cmd(a),
        Command::Corpus(a) => corpus_cmd(a),
    };
    match res {
        Ok(Done { mut report, ok }) => {
            if cli.timing {
                report.timing = Some(start.elapsed());
            }
            let text = match cli.output {
                Output::Json => report.to_json(),
                Output::Text => report.to_text(),
            };
            let _ = out.write_all(text.as_bytes());
            if ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_parse() {
                2
            } else {
                1
            }
        }
    }
}
