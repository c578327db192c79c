//! Acceptance suite: one pass/fail line per criterion. Runs without the
//! libtest harness so the lines always print.

use std::time::Instant;

use accretion_lab::accretion::{Tri, Verdict};
use accretion_lab::cli;
use accretion_lab::dsl::{FuncDef, SamplePoint};
use accretion_lab::exact::{ExtendedReal, Point, Scalar};
use accretion_lab::fnacc::{
    accrete_continuity, accretion_derivative, accretion_limit, accretion_of_function, classical_limit,
    interior_extremum_check, sequential_limit, AccretionQuery, Continuity,
};
use accretion_lab::integration::{
    darboux_weights, ftc_check, integrate, integrate_uniform, partition_inequality_check, riemann_oracle,
    IntegralStatus, Partition, WeightVector,
};
use accretion_lab::sequences::{
    accretion_of_sequence, convergence, limsup_liminf, subsequential_limits, Schedule, SequenceSpec,
};
use accretion_lab::sets::{Interval, IntervalSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn q(s: &str) -> Scalar {
    Scalar::parse(s).unwrap()
}

fn f(s: &str) -> FuncDef {
    FuncDef::parse(s).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn random_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    let d = rng.gen_range(1..=12);
    Scalar::new(rng.gen_range(-10 * d..=10 * d), d).unwrap()
}

fn random_set(rng: &mut ChaCha8Rng) -> IntervalSet {
    let n = rng.gen_range(0..=4);
    let mut items = Vec::new();
    for _ in 0..n {
        if rng.gen_bool(0.2) {
            items.push(Interval::point(random_scalar(rng)));
            continue;
        }
        let (mut a, mut b) = (random_scalar(rng), random_scalar(rng));
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        if a == b {
            b = &a + &Scalar::one();
        }
        let lo = if rng.gen_bool(0.1) { ExtendedReal::NegInf } else { ExtendedReal::Finite(a) };
        let hi = if rng.gen_bool(0.1) { ExtendedReal::PosInf } else { ExtendedReal::Finite(b) };
        let (lo_open, hi_open) = (rng.gen_bool(0.5) || lo == ExtendedReal::NegInf, rng.gen_bool(0.5) || hi == ExtendedReal::PosInf);
        if let Some(iv) = Interval::new(lo, lo_open, hi, hi_open) {
            items.push(iv);
        }
    }
    IntervalSet::from_intervals(items)
}

fn c1_topology() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let tiny = Scalar::pow10_inv(6);
    let mut sups = 0;
    for i in 0..1000 {
        let s = random_set(&mut rng);
        let cl = s.closure();
        ensure(s.boundary() == cl.difference(&s.interior()), || format!("boundary law fails for {s}"))?;
        ensure(s.is_open() == s.complement().is_closed(), || format!("open/complement law fails for {s}"))?;
        ensure(cl.closure() == cl, || format!("closure not idempotent for {s}"))?;
        if let Some(ExtendedReal::Finite(sup)) = s.sup() {
            sups += 1;
            ensure(s.is_upper_bound(&sup) && s.is_acl(&sup), || format!("sup {sup} of {s} fails its properties"))?;
            let below = &sup - &tiny;
            ensure(!s.is_upper_bound(&below), || format!("sup - 1e-6 bounds {s} (case {i})"))?;
            let w = s.acl_witness(&sup, &tiny).ok_or_else(|| format!("no witness near sup of {s}"))?;
            ensure(s.contains(&w) && w > below, || format!("bad witness {w} for {s}"))?;
        }
    }
    Ok(format!("1000 random sets, {sups} finite sups, zero failures"))
}

fn vals(e: &accretion_lab::accretion::AccretionEstimate) -> Vec<String> {
    e.values().iter().map(|v| v.to_string()).collect()
}

fn c2_worked_values() -> Check {
    let s = IntervalSet::parse("(0,3140)").map_err(err)?;
    ensure(s.sup() == Some(ExtendedReal::Finite(q("3140"))), || "sup((0,3140)) != 3140".into())?;
    let sched = Schedule::default();
    let e = accretion_of_sequence(&SequenceSpec::formula("1/n + 3140 + (-1)^n").map_err(err)?, &sched).map_err(err)?;
    ensure(vals(&e) == ["3139", "3141"] && e.ranges.is_empty(), || format!("divergent example gave {:?}", vals(&e)))?;
    let b = SequenceSpec::parity("0", "n").map_err(err)?;
    let e = accretion_of_sequence(&b, &sched).map_err(err)?;
    let v = convergence(&b, &sched).map_err(err)?;
    ensure(vals(&e) == ["0"] && v.converges == Tri::No, || format!("parity example gave {:?}, {:?}", vals(&e), v.converges))?;
    let z = SequenceSpec::from_json(r#"{"kind":"cyclic","values":[["0","1"],["-1","0"],["0","-1"],["1","0"]],"factor":"(n-1)/n"}"#)
        .map_err(err)?;
    let e = accretion_of_sequence(&z, &sched).map_err(err)?;
    let eps = Scalar::pow10_inv(3);
    let axis = [("1", "0"), ("0", "1"), ("-1", "0"), ("0", "-1")].map(|(a, b)| Point::plane(q(a), q(b)));
    let found = axis
        .iter()
        .all(|a| e.clusters.iter().any(|c| accretion_lab::exact::within(&c.representative, a, &eps).unwrap()));
    ensure(e.clusters.len() == 4 && found, || format!("i^n example gave {} clusters", e.clusters.len()))?;
    Ok("sup = 3140; {3139, 3141}; {0} with converges = no; 4 clusters at the unit axis points".into())
}

fn c3_dirichlet() -> Check {
    for c in ["0", "1/2", "sqrt2"] {
        let e = accretion_of_function(&AccretionQuery::at("indicatorQ(x)", c).map_err(err)?).map_err(err)?;
        ensure(vals(&e) == ["0", "1"] && e.ranges.is_empty(), || format!("A at {c} gave {:?}", vals(&e)))?;
    }
    let v = integrate(&f("indicatorQ(x)"), &q("0"), &q("1"), &q("1/1000"), 40).map_err(err)?;
    ensure(v.status == IntegralStatus::NotIntegrable && v.gap == Scalar::one(), || format!("integral gave {:?} gap {}", v.status, v.gap))?;
    Ok("A = {0,1} at 0, 1/2, sqrt2; not integrable with gap 1".into())
}

fn c4_thomae() -> Check {
    let t = f("thomae(x)");
    for (c, want) in [("1/2", Continuity::Discontinuous), ("1/3", Continuity::Discontinuous), ("sqrt2", Continuity::Continuous)] {
        let got = accrete_continuity(&t, &SamplePoint::parse(c).map_err(err)?).map_err(err)?;
        ensure(got == want, || format!("continuity at {c}: {got:?}"))?;
    }
    let e = accretion_of_function(&AccretionQuery::at("thomae(x)", "1/2").map_err(err)?).map_err(err)?;
    ensure(vals(&e) == ["0", "1/2"] && e.ranges.is_empty(), || format!("A(t, 1/2, R) = {:?}", vals(&e)))?;
    let eps = q("1/100");
    let v = integrate(&t, &q("0"), &q("1"), &eps, 40).map_err(err)?;
    let est = v.estimate.clone().ok_or_else(|| format!("integral {:?}", v.status))?;
    ensure(v.status == IntegralStatus::Integrable && est.abs() <= eps, || format!("estimate {est}"))?;
    Ok(format!("discontinuous at 1/2, 1/3, continuous at sqrt2; A = {{0, 1/2}}; integral {:.3e} over {} pieces", est.to_f64(), v.partition_used.n()))
}

/// Function, point, restriction set, expected limit.
const THREE_LIMITS: [(&str, &str, &str, Option<&str>); 12] = [
    ("x^2", "3", "R", Some("9")),
    ("piecewise{ {0} -> 0; else -> 1/x }", "0", "R", None),
    ("indicatorQ(x)", "0", "R", None),
    ("thomae(x)", "1/2", "R", Some("0")),
    ("thomae(x)", "sqrt2", "R", Some("0")),
    ("5*cos(1/x)", "0", "(0, inf)", None),
    ("piecewise{ {0} -> 0; else -> x*sin(1/x) }", "0", "R", Some("0")),
    ("piecewise{ {1} -> 2; else -> (x^2-1)/(x-1) }", "1", "R", Some("2")),
    ("piecewise{ {0} -> 0; else -> abs(x)/x }", "0", "R", None),
    ("piecewise{ {0} -> 1; else -> sin(x)/x }", "0", "R", Some("1")),
    ("piecewise{ {0} -> 0; else -> (1-cos(x))/x^2 }", "0", "R", Some("1/2")),
    ("x^3-2*x", "2", "R", Some("4")),
];

fn c5_three_limits() -> Check {
    let tol = Scalar::pow10_inv(6);
    let close = |v: &Option<Scalar>, want: &Scalar| v.as_ref().is_some_and(|x| (x - want).abs() <= tol);
    for (src, c, b, want) in THREE_LIMITS {
        let (fd, cp, bs) = (f(src), SamplePoint::parse(c).map_err(err)?, IntervalSet::eval_expr(b).map_err(err)?);
        let acc = accretion_limit(&AccretionQuery::new(fd.clone(), cp.clone()).on(bs.clone())).map_err(err)?;
        let cl = classical_limit(&fd, &cp, &bs).map_err(err)?;
        let sq = sequential_limit(&fd, &cp, &bs, 20, 7).map_err(err)?;
        let tag = format!("{src} at {c}: accretion {:?}, classical {:?}, sequential {:?}", acc.exists, cl.exists, sq.exists);
        match want {
            Some(l) => {
                let l = q(l);
                ensure(acc.exists == Tri::Yes && cl.exists == Tri::Yes && sq.exists == Tri::Yes, || tag.clone())?;
                ensure(close(&acc.limit, &l) && close(&cl.value, &l) && close(&sq.value, &l), || format!("{tag}: values differ"))?;
            }
            None => ensure(acc.exists == Tri::No && cl.exists == Tri::No && sq.exists == Tri::No, || tag.clone())?,
        }
    }
    Ok("12 functions agree on existence and value".into())
}

const INTEGRATION_CORPUS: [&str; 11] = [
    "x",
    "x^2",
    "x^3",
    "cos(x)",
    "sin(x)",
    "1/(1+x^2)",
    "abs(x-1/2)",
    "piecewise{ [0,1/2) -> 0; else -> 1 }",
    "piecewise{ {0} -> 0; else -> x*sin(1/x) }",
    "thomae(x)",
    "indicatorQ(x)",
];

fn c6_integration_equivalence() -> Check {
    let (a, b, eps) = (q("0"), q("1"), q("1/1000"));
    let two_eps = &eps + &eps;
    let mut integrable = 0;
    for src in INTEGRATION_CORPUS {
        let g = f(src);
        let adaptive = integrate(&g, &a, &b, &eps, 40).map_err(err)?;
        let uniform = integrate_uniform(&g, &a, &b, &eps, 40).map_err(err)?;
        let oracle = riemann_oracle(&g, &a, &b, &eps, 3).map_err(err)?;
        let yes = |s: IntegralStatus| match s {
            IntegralStatus::Integrable => Tri::Yes,
            IntegralStatus::NotIntegrable => Tri::No,
            IntegralStatus::Inconclusive => Tri::Inconclusive,
        };
        let verdicts = (yes(adaptive.status), yes(uniform.status), oracle.integrable);
        ensure(verdicts.0 == verdicts.1 && verdicts.1 == verdicts.2 && verdicts.0 != Tri::Inconclusive, || {
            format!("{src}: adaptive {:?}, darboux-gap {:?}, riemann {:?}", verdicts.0, verdicts.1, verdicts.2)
        })?;
        if verdicts.0 == Tri::Yes {
            integrable += 1;
            let v = [adaptive.estimate.unwrap(), uniform.estimate.unwrap(), oracle.estimate.unwrap()];
            for i in 0..3 {
                for j in i + 1..3 {
                    let d = (&v[i] - &v[j]).abs();
                    ensure(d <= two_eps, || format!("{src}: estimates {} and {} differ by {d}", v[i], v[j]))?;
                }
            }
        }
    }
    Ok(format!("{} functions agree; {integrable} integrable with estimates within 2 eps", INTEGRATION_CORPUS.len()))
}

fn random_partition(rng: &mut ChaCha8Rng) -> Partition {
    let n = rng.gen_range(0..8);
    let mut pts: Vec<Scalar> = (0..n).map(|_| Scalar::new(rng.gen_range(1..1000), 1000).unwrap()).collect();
    pts.push(Scalar::zero());
    pts.push(Scalar::one());
    pts.sort();
    pts.dedup();
    Partition::new(pts).unwrap()
}

fn c7_partition_fuzz() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let fs: Vec<FuncDef> = INTEGRATION_CORPUS.iter().map(|s| f(s)).collect();
    let bump = |rng: &mut ChaCha8Rng| Scalar::new(rng.gen_range(0..100), 64).unwrap();
    for i in 0..500 {
        let g = &fs[rng.gen_range(0..fs.len())];
        let (p1, p2) = (random_partition(&mut rng), random_partition(&mut rng));
        let (u, _) = darboux_weights(g, &p1).map_err(err)?;
        let (_, w) = darboux_weights(g, &p2).map_err(err)?;
        let a = WeightVector(u.0.iter().map(|x| x + &bump(&mut rng)).collect());
        let b = WeightVector(w.0.iter().map(|x| x - &bump(&mut rng)).collect());
        let r = partition_inequality_check(g, &p1, &p2, &a, &b).map_err(err)?;
        ensure(r.holds && r.refinement_lower <= r.refinement_upper, || format!("instance {i}: {g} violated"))?;
        ensure(r.lower_sum <= r.refinement_lower && r.refinement_upper <= r.upper_sum, || format!("instance {i}: chain broken for {g}"))?;
    }
    Ok("500 instances, zero violations".into())
}

fn c8_ftc() -> Check {
    let (a, b, eps) = (q("0"), q("1"), q("1/1000"));
    let mut pairs: Vec<(String, String)> = vec![("1".into(), "x".into())];
    for n in 1..=5 {
        pairs.push((format!("x^{n}"), format!("x^{}/{}", n + 1, n + 1)));
    }
    pairs.push(("cos(x)".into(), "sin(x)".into()));
    let mut worst = Scalar::zero();
    for (small, big) in &pairs {
        let r = ftc_check(&f(small), &f(big), &a, &b, &eps).map_err(err)?;
        ensure(r.holds, || format!("{small} vs {big}: error {}", r.error))?;
        worst = Scalar::max(&worst, &r.error);
    }
    Ok(format!("{} pairs within 2 eps, worst error {:.2e}", pairs.len(), worst.to_f64()))
}

fn c9_derivatives() -> Check {
    let r = accretion_derivative(&f("x^2"), &q("3"), &IntervalSet::reals()).map_err(err)?;
    ensure(r.exists == Tri::Yes && r.limit == Some(q("6")), || format!("x^2 at 3: {:?} {:?}", r.exists, r.limit))?;
    let r = accretion_derivative(&f("abs(x)"), &q("0"), &IntervalSet::reals()).map_err(err)?;
    ensure(r.exists == Tri::No && vals(&r.accretion) == ["-1", "1"], || format!("|x| at 0: {:?} {:?}", r.exists, vals(&r.accretion)))?;
    let g = f("piecewise{ {0} -> 0; else -> x^2*cos(1/x^2) }");
    let r = accretion_derivative(&g, &q("0"), &IntervalSet::reals()).map_err(err)?;
    let ok = r.exists == Tri::Yes && r.limit.as_ref().is_some_and(|l| l.abs() <= Scalar::pow10_inv(4));
    ensure(ok, || format!("x^2 cos(1/x^2) at 0: {:?} {:?}", r.exists, r.limit))?;
    let e = interior_extremum_check(&f("-(x-1)^2"), &q("0"), &q("2"), &q("1")).map_err(err)?;
    ensure(e.holds && e.derivative.limit == Some(Scalar::zero()), || format!("extremum: {:?}", e.derivative.limit))?;
    Ok("6; no with {-1, 1}; 0 within 1e-4; extremum value exactly 0".into())
}

fn sequence_corpus() -> Vec<(&'static str, SequenceSpec)> {
    let j = |s: &str| SequenceSpec::from_json(s).unwrap();
    vec![
        ("n", j(r#"{"kind":"formula","expr":"n"}"#)),
        ("1/n + 3140 + (-1)^n", j(r#"{"kind":"formula","expr":"1/n + 3140 + (-1)^n"}"#)),
        ("parity 0 / n", j(r#"{"kind":"parity","odd":"0","even":"n"}"#)),
        ("i^n (n-1)/n", j(r#"{"kind":"cyclic","values":[["0","1"],["-1","0"],["0","-1"],["1","0"]],"factor":"(n-1)/n"}"#)),
        ("calkin-wilf", j(r#"{"kind":"calkin-wilf"}"#)),
        ("(-1)^n (1 + 1/n)", j(r#"{"kind":"formula","expr":"(-1)^n*(1 + 1/n)"}"#)),
        ("7", j(r#"{"kind":"formula","expr":"7"}"#)),
        ("1/n", j(r#"{"kind":"formula","expr":"1/n"}"#)),
        ("3140 - 1/n", j(r#"{"kind":"formula","expr":"3140 - 1/n"}"#)),
        ("sin(n)", j(r#"{"kind":"formula","expr":"sin(n)"}"#)),
        ("acl witness of 1 in [0,1)", j(r#"{"kind":"acl-witness","set":"[0,1)","point":"1"}"#)),
    ]
}

fn c10_oracle_agreement() -> Check {
    let sched = Schedule::default();
    let mut failures = Vec::new();
    for (name, s) in sequence_corpus() {
        let a = accretion_of_sequence(&s, &sched).map_err(err)?;
        let o = subsequential_limits(&s, &sched).map_err(err)?;
        if !a.eps_matches(&o, &sched.eps) {
            let (m, n) = (accretion_lab::accretion::uncovered(&a, &o, &sched.eps).len(), accretion_lab::accretion::uncovered(&o, &a, &sched.eps).len());
            failures.push(format!("{name} ({m} estimator and {n} oracle representatives unmatched)"));
            continue;
        }
        if s.dim() == 1 && a.verdict == Verdict::FiniteSet && a.values().len() == a.clusters.len() {
            let exact = a.values().iter().all(|v| v.denom().bits() <= 32);
            if let (true, Ok((sup, inf))) = (exact, limsup_liminf(&s, &sched)) {
                // unbounded sides have infinite limsup/liminf and no cluster to compare
                if sup.as_finite().is_none() || inf.as_finite().is_none() {
                    continue;
                }
                let (hi, lo) = (a.values().last().unwrap().clone(), a.values()[0].clone());
                if sup != ExtendedReal::Finite(hi.clone()) || inf != ExtendedReal::Finite(lo.clone()) {
                    failures.push(format!("{name}: limsup/liminf ({sup}, {inf}) vs clusters ({hi}, {lo})"));
                }
            }
        }
    }
    if failures.is_empty() {
        Ok("11 sequences eps-matched; limsup/liminf equal the extreme representatives".into())
    } else {
        Err(format!("mismatch on {}", failures.join("; ")))
    }
}

fn c11_determinism() -> Check {
    let run = || {
        let (mut out, mut errs) = (Vec::new(), Vec::new());
        let code = cli::run(["accretion-lab", "corpus", "--all", "--output", "json"], &mut out, &mut errs);
        (code, out)
    };
    let (c1, o1) = run();
    let (c2, o2) = run();
    ensure(c1 == 0 && c2 == 0, || format!("exit codes {c1}, {c2}"))?;
    ensure(o1 == o2, || "outputs differ".into())?;
    Ok(format!("two runs byte-identical ({} bytes), all presets pass", o1.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 11] = [
        ("topology laws", c1_topology),
        ("worked example values", c2_worked_values),
        ("dirichlet", c3_dirichlet),
        ("thomae", c4_thomae),
        ("three-limits agreement", c5_three_limits),
        ("integration equivalence", c6_integration_equivalence),
        ("partition inequality fuzz", c7_partition_fuzz),
        ("ftc", c8_ftc),
        ("derivative checks", c9_derivatives),
        ("oracle agreement", c10_oracle_agreement),
        ("determinism", c11_determinism),
    ];
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let k = i + 1;
        if !only.is_empty() && !only.contains(&k) {
            continue;
        }
        let start = Instant::now();
        let r = check();
        let secs = start.elapsed().as_secs_f64();
        match r {
            Ok(detail) => println!("criterion {k:>2} PASS  {name}: {detail} [{secs:.1}s]"),
            Err(why) => {
                failed += 1;
                println!("criterion {k:>2} FAIL  {name}: {why} [{secs:.1}s]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
