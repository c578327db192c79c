//! Named presets for the worked examples, each with its expected outcome.

use serde_json::{json, Value};

use crate::accretion::{AccretionEstimate, Tri};
use crate::dsl::FuncDef;
use crate::error::{Error, Result};
use crate::exact::{within, Point, Scalar};
use crate::fnacc::{accretion_derivative, accretion_limit, accretion_of_function, AccretionQuery};
use crate::integration::{ftc_check, integrate, IntegralStatus};
use crate::report::{integral_summary, to_value};
use crate::sequences::{accretion_of_sequence, analyze, Schedule, SequenceSpec};
use crate::sets::IntervalSet;

pub struct Preset {
    pub name: &'static str,
    pub expected: &'static str,
    run: fn() -> Result<Outcome>,
}

/// What a preset observed and whether it matched.
pub struct Outcome {
    pub pass: bool,
    pub observed: Value,
}

impl Preset {
    pub fn run(&self) -> Result<Outcome> {
        (self.run)()
    }
}

pub const PRESETS: &[Preset] = &[
    Preset { name: "open-interval-sup", expected: "sup((0,3140)) = 3140, and 3140 - 10^-6 is not an upper bound", run: open_interval_sup },
    Preset { name: "divergent-3139-3141", expected: "accretion of 1/n + 3140 + (-1)^n is {3139, 3141}", run: divergent },
    Preset { name: "singleton-unbounded", expected: "accretion of (0 odd, n even) is {0} and it does not converge", run: singleton_unbounded },
    Preset { name: "i^n-accretion", expected: "accretion of i^n (n-1)/n is four clusters at 1, i, -1, -i", run: i_n },
    Preset { name: "q-enumeration", expected: "accretion of an enumeration of Q in [0,1] covers [0,1] at eps = 1/10", run: q_enumeration },
    Preset { name: "dirichlet-accretion", expected: "A(indicatorQ, c, R) = {0, 1} for c = 0, 1/2, sqrt2", run: dirichlet_accretion },
    Preset { name: "thomae-accretion", expected: "A(thomae, 1/2, R) = {0, 1/2}", run: thomae_accretion },
    Preset { name: "recip-at-0", expected: "A(f, 0, R) = {0} for f = 1/x with f(0) = 0, and the limit does not exist", run: recip_at_0 },
    Preset { name: "5cos-recip", expected: "A(5cos(1/x), 0, (0,inf)) = [-5, 5] and the limit does not exist", run: five_cos },
    Preset { name: "abs-derivative", expected: "|x| at 0: derivative does not exist, accretion {-1, 1}", run: abs_derivative },
    Preset { name: "x2cos-recip2-derivative", expected: "x^2 cos(1/x^2) at 0: derivative exists, within 10^-4 of 0", run: x2cos },
    Preset { name: "thomae-integral", expected: "thomae on [0,1] at eps = 1/100: integrable, |estimate| <= 1/100", run: thomae_integral },
    Preset { name: "dirichlet-integral", expected: "indicatorQ on [0,1]: not integrable, gap 1", run: dirichlet_integral },
    Preset { name: "ftc-x2", expected: "integral of x^2 over [0,1] is F(1) - F(0) = 1/3 within 2/1000", run: ftc_x2 },
];

pub fn find(name: &str) -> Result<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name).ok_or_else(|| {
        let names: Vec<&str> = PRESETS.iter().map(|p| p.name).collect();
        Error::Precondition(format!("unknown preset {name:?}; known: {}", names.join(", ")))
    })
}

fn q(s: &str) -> Scalar {
    Scalar::parse(s).expect("preset constant")
}

fn values_are(e: &AccretionEstimate, want: &[&str]) -> bool {
    e.ranges.is_empty() && e.values() == want.iter().map(|s| q(s)).collect::<Vec<_>>()
}

fn open_interval_sup() -> Result<Outcome> {
    let s = IntervalSet::parse("(0,3140)")?;
    let sup = q("3140");
    let below = &sup - &Scalar::pow10_inv(6);
    let report = s.report();
    let pass = report.sup.as_ref().and_then(|x| x.as_finite()) == Some(&sup)
        && s.is_upper_bound(&sup)
        && s.is_acl(&sup)
        && !s.is_upper_bound(&below);
    Ok(Outcome { pass, observed: json!({ "set": s.to_string(), "topology": to_value(&report)?, "sup_minus_1e-6_is_upper_bound": s.is_upper_bound(&below) }) })
}

fn seq_outcome(spec: SequenceSpec, sched: &Schedule, check: impl Fn(&crate::sequences::SequenceReport) -> bool) -> Result<Outcome> {
    let r = analyze(&spec, sched)?;
    Ok(Outcome { pass: check(&r), observed: to_value(&r)? })
}

fn divergent() -> Result<Outcome> {
    seq_outcome(SequenceSpec::formula("1/n + 3140 + (-1)^n")?, &Schedule::default(), |r| {
        values_are(&r.accretion, &["3139", "3141"]) && r.convergence.converges == Tri::No
    })
}

fn singleton_unbounded() -> Result<Outcome> {
    seq_outcome(SequenceSpec::parity("0", "n")?, &Schedule::default(), |r| {
        values_are(&r.accretion, &["0"]) && r.convergence.converges == Tri::No && r.convergence.bounded == Tri::No
    })
}

fn i_n() -> Result<Outcome> {
    let spec = SequenceSpec::from_json(r#"{"kind":"cyclic","values":[["0","1"],["-1","0"],["0","-1"],["1","0"]],"factor":"(n-1)/n"}"#)?;
    let sched = Schedule::default();
    let e = accretion_of_sequence(&spec, &sched)?;
    let axis = [("1", "0"), ("0", "1"), ("-1", "0"), ("0", "-1")].map(|(a, b)| Point::plane(q(a), q(b)));
    let eps = Scalar::pow10_inv(3);
    let near = |p: &Point, a: &Point| within(p, a, &eps).unwrap_or(false);
    let pass = e.clusters.len() == 4
        && e.ranges.is_empty()
        && axis.iter().all(|a| e.clusters.iter().any(|c| near(&c.representative, a)));
    Ok(Outcome { pass, observed: to_value(&e)? })
}

fn q_enumeration() -> Result<Outcome> {
    let sched = Schedule::default().with_eps(q("1/10"));
    let e = accretion_of_sequence(&SequenceSpec::CalkinWilf, &sched)?;
    let eps = q("1/10");
    let pass = e.ranges.len() == 1
        && e.ranges[0].lo.x() <= &eps
        && e.ranges[0].hi.x() >= &(Scalar::one() - &eps);
    Ok(Outcome { pass, observed: to_value(&e)? })
}

fn dirichlet_accretion() -> Result<Outcome> {
    let mut observed = serde_json::Map::new();
    let mut pass = true;
    for c in ["0", "1/2", "sqrt2"] {
        let e = accretion_of_function(&AccretionQuery::at("indicatorQ(x)", c)?)?;
        pass &= values_are(&e, &["0", "1"]);
        observed.insert(c.into(), to_value(&e)?);
    }
    Ok(Outcome { pass, observed: Value::Object(observed) })
}

fn thomae_accretion() -> Result<Outcome> {
    let e = accretion_of_function(&AccretionQuery::at("thomae(x)", "1/2")?)?;
    Ok(Outcome { pass: values_are(&e, &["0", "1/2"]), observed: to_value(&e)? })
}

const RECIP: &str = "piecewise{ {0} -> 0; else -> 1/x }";

fn recip_at_0() -> Result<Outcome> {
    let q0 = AccretionQuery::at(RECIP, "0")?;
    let e = accretion_of_function(&q0)?;
    let l = accretion_limit(&q0)?;
    let pass = values_are(&e, &["0"]) && l.exists == Tri::No && l.locally_bounded == Tri::No;
    Ok(Outcome { pass, observed: json!({ "accretion": to_value(&e)?, "limit": to_value(&l)? }) })
}

fn five_cos() -> Result<Outcome> {
    let q0 = AccretionQuery::at("5*cos(1/x)", "0")?.on(IntervalSet::parse("(0, inf)")?);
    let e = accretion_of_function(&q0)?;
    let l = accretion_limit(&q0)?;
    let full = e.ranges.len() == 1 && e.ranges[0].lo == Point::line(q("-5")) && e.ranges[0].hi == Point::line(q("5"));
    Ok(Outcome { pass: full && l.exists == Tri::No, observed: json!({ "accretion": to_value(&e)?, "limit": to_value(&l)? }) })
}

fn abs_derivative() -> Result<Outcome> {
    let r = accretion_derivative(&FuncDef::parse("abs(x)")?, &Scalar::zero(), &IntervalSet::reals())?;
    Ok(Outcome { pass: r.exists == Tri::No && values_are(&r.accretion, &["-1", "1"]), observed: to_value(&r)? })
}

fn x2cos() -> Result<Outcome> {
    let g = FuncDef::parse("piecewise{ {0} -> 0; else -> x^2*cos(1/x^2) }")?;
    let r = accretion_derivative(&g, &Scalar::zero(), &IntervalSet::reals())?;
    let pass = r.exists == Tri::Yes && r.limit.as_ref().is_some_and(|l| l.abs() <= Scalar::pow10_inv(4));
    Ok(Outcome { pass, observed: to_value(&r)? })
}

fn thomae_integral() -> Result<Outcome> {
    let eps = q("1/100");
    let v = integrate(&FuncDef::parse("thomae(x)")?, &Scalar::zero(), &Scalar::one(), &eps, 40)?;
    let pass = v.status == IntegralStatus::Integrable && v.estimate.as_ref().is_some_and(|e| e.abs() <= eps);
    Ok(Outcome { pass, observed: integral_summary(&v) })
}

fn dirichlet_integral() -> Result<Outcome> {
    let v = integrate(&FuncDef::parse("indicatorQ(x)")?, &Scalar::zero(), &Scalar::one(), &q("1/1000"), 40)?;
    let pass = v.status == IntegralStatus::NotIntegrable && v.gap == Scalar::one();
    Ok(Outcome { pass, observed: integral_summary(&v) })
}

fn ftc_x2() -> Result<Outcome> {
    let r = ftc_check(&FuncDef::parse("x^2")?, &FuncDef::parse("x^3/3")?, &Scalar::zero(), &Scalar::one(), &q("1/1000"))?;
    let observed = json!({
        "holds": r.holds,
        "difference": r.difference,
        "error": r.error,
        "integral": integral_summary(&r.integral),
        "spot_checks": r.spot_checks,
    });
    Ok(Outcome { pass: r.holds && r.difference == q("1/3"), observed })
}
