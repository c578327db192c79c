use accretion_lab::dsl::{FuncDef, SamplePoint};
use accretion_lab::exact::Scalar;
use accretion_lab::integration::{
    darboux_weights, integrate, integrate_uniform, is_upper_weight, riemann_sum, weighted_sum, IntegralStatus, Partition,
    WeightVector,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CORPUS: [&str; 8] = [
    "x",
    "x^2 - x",
    "cos(x)",
    "abs(x-1/3)",
    "thomae(x)",
    "indicatorQ(x)",
    "piecewise{ [0,1/2) -> 0; else -> 1 }",
    "piecewise{ {0} -> 0; else -> x*sin(1/x) }",
];

fn q(s: &str) -> Scalar {
    Scalar::parse(s).unwrap()
}

fn random_partition(rng: &mut ChaCha8Rng) -> Partition {
    let mut pts: Vec<Scalar> = (0..rng.gen_range(0..10)).map(|_| Scalar::new(rng.gen_range(1..720), 720).unwrap()).collect();
    pts.extend([Scalar::zero(), Scalar::one()]);
    pts.sort();
    pts.dedup();
    Partition::new(pts).unwrap()
}

#[test]
fn sandwich_chain() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for src in CORPUS {
        let f = FuncDef::parse(src).unwrap();
        for _ in 0..20 {
            let p = random_partition(&mut rng);
            let (u, w) = darboux_weights(&f, &p).unwrap();
            let tags: Vec<SamplePoint> = p
                .subintervals()
                .map(|(x0, x1)| {
                    if rng.gen_bool(0.5) {
                        SamplePoint::rational(x0 + &((x1 - x0) * Scalar::new(rng.gen_range(0..=16), 16).unwrap()))
                    } else {
                        SamplePoint::sqrt2_affine(x0 - &(x1 - x0), x1 - x0)
                    }
                })
                .collect();
            let r = riemann_sum(&f, &p, &tags).unwrap();
            let bump = WeightVector(u.0.iter().map(|x| x + &q("1/7")).collect());
            let dip = WeightVector(w.0.iter().map(|x| x - &q("1/7")).collect());
            let (su, sw) = (weighted_sum(&p, &u).unwrap(), weighted_sum(&p, &w).unwrap());
            assert!(weighted_sum(&p, &dip).unwrap() <= sw, "{src}");
            assert!(sw <= r.lo && r.hi <= su, "{src} at {p}");
            assert!(su <= weighted_sum(&p, &bump).unwrap(), "{src}");
            assert!(is_upper_weight(&f, &p, &bump).unwrap().admissible);
        }
    }
}

#[test]
fn refinement_monotone() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for src in CORPUS {
        let f = FuncDef::parse(src).unwrap();
        for _ in 0..20 {
            let p = random_partition(&mut rng);
            let finer = p.with_point(Scalar::new(rng.gen_range(1..997), 997).unwrap()).unwrap();
            assert!(finer.refines(&p));
            let (u0, w0) = darboux_weights(&f, &p).unwrap();
            let (u1, w1) = darboux_weights(&f, &finer).unwrap();
            assert!(weighted_sum(&finer, &u1).unwrap() <= weighted_sum(&p, &u0).unwrap(), "{src}");
            assert!(weighted_sum(&finer, &w1).unwrap() >= weighted_sum(&p, &w0).unwrap(), "{src}");
        }
    }
}

#[test]
fn worked_sums() {
    let half = Partition::new(vec![q("0"), q("1/2"), q("1")]).unwrap();
    let (u, w) = darboux_weights(&FuncDef::parse("x").unwrap(), &half).unwrap();
    assert_eq!((weighted_sum(&half, &u).unwrap(), weighted_sum(&half, &w).unwrap()), (q("3/4"), q("1/4")));
    let p = Partition::uniform(&q("0"), &q("1"), 4).unwrap();
    let tags: Vec<SamplePoint> = p.subintervals().map(|(x0, _)| SamplePoint::rational(x0.clone())).collect();
    assert_eq!(riemann_sum(&FuncDef::parse("x^2").unwrap(), &p, &tags).unwrap().exact(), Some(&q("7/32")));
}

#[test]
fn strategies_agree() {
    let eps = q("1/500");
    for src in ["x^2", "cos(x)", "abs(x-1/3)", "piecewise{ [0,1/2) -> 0; else -> 1 }"] {
        let f = FuncDef::parse(src).unwrap();
        let a = integrate(&f, &q("0"), &q("1"), &eps, 40).unwrap();
        let b = integrate_uniform(&f, &q("0"), &q("1"), &eps, 40).unwrap();
        assert_eq!((a.status, b.status), (IntegralStatus::Integrable, IntegralStatus::Integrable), "{src}");
        let d = (a.estimate.unwrap() - b.estimate.unwrap()).abs();
        assert!(d <= &eps + &eps, "{src}: {d}");
    }
}

#[test]
fn unbounded_is_rejected() {
    let f = FuncDef::parse("piecewise{ {0} -> 0; else -> 1/x }").unwrap();
    let e = integrate(&f, &q("0"), &q("1"), &q("1/100"), 20).unwrap_err();
    assert!(e.to_string().contains("not bounded"), "{e}");
}
