//! Acceptance suite: one test per criterion, each printing a PASS line.
//! Expected values come from independent oracles computed here (closed
//! forms, brute-force enumeration, all-pairs sums), never from the
//! engine paths they check.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use degcom::group::words::{lookup_group, parse_element};
use degcom::measure::almost_invariance_defect;
use degcom::{
    ball, build_catalog, conj_canonical, cr_lower_bound, cr_sequence, dc_class_formula,
    dc_montecarlo, dc_of_measure, dc_sequence, index_measurement_curve, mixing_bound,
    neumann_decompose, verify_center_bound, verify_gustafson, verify_nvl,
    verify_uniform_measurement, Caps, Element, GroupSpec, Measure, MeasureSeqSpec,
    MixingParams, Scalar, SubgroupIndex, SubgroupOracle,
};

fn caps() -> Caps {
    Caps::default()
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Quadratic all-pairs dc, the mandated oracle: a plain double loop
/// over the support using only the group operation.
fn dc_all_pairs_oracle(mu: &Measure) -> BigRational {
    let spec = mu.spec();
    let atoms = mu.atoms();
    let mut sum = BigRational::zero();
    for (x, wx) in &atoms {
        for (y, wy) in &atoms {
            if spec.commute(x, y).unwrap() {
                sum += wx.as_rational().unwrap() * wy.as_rational().unwrap();
            }
        }
    }
    sum
}

fn uniform_on_table(name: &str) -> (GroupSpec, Measure) {
    let g = lookup_group(name).unwrap();
    let n = g.order().unwrap() as u16;
    let mu = Measure::uniform(&g, &(0..n).map(Element::Table).collect::<Vec<_>>()).unwrap();
    (g, mu)
}

#[test]
fn acceptance_01_exact_finite_dc() {
    for (name, _) in build_catalog() {
        let (g, mu) = uniform_on_table(name);
        let engine = dc_of_measure(&mu, 1 << 40).unwrap();
        let oracle = dc_all_pairs_oracle(&mu);
        assert_eq!(engine.as_rational().unwrap(), &oracle, "{name}: all-pairs oracle");
        let class_formula = dc_class_formula(g.table().unwrap());
        assert_eq!(engine.as_rational().unwrap(), &class_formula, "{name}: class count");
    }
    for (name, num, den) in [("q8", 5, 8), ("d4", 5, 8), ("s3", 1, 2), ("a4", 1, 3)] {
        let (_, mu) = uniform_on_table(name);
        assert_eq!(dc_of_measure(&mu, 1 << 40).unwrap(), Scalar::rational(num, den));
    }
    println!("ACCEPTANCE 01 PASS: dc(uniform) = #classes/|G| exactly on all {} catalog groups", build_catalog().len());
}

#[test]
fn acceptance_02_gustafson_suite() {
    let five_eighths = rat(5, 8);
    for (name, t) in build_catalog() {
        let dc = dc_class_formula(t);
        if !t.is_abelian() {
            assert!(dc <= five_eighths, "{name}: nonabelian dc {dc} > 5/8");
            let q = t.order() / t.center().len();
            assert!(q >= 4, "{name}: [G:Z] = {q} < 4");
            let bound = rat(1, 2) + BigRational::new(BigInt::one(), BigInt::from(2 * q));
            assert!(dc <= bound, "{name}: dc {dc} above 1/2 + 1/(2q)");
        }
        let v = verify_gustafson(t, name);
        assert!(v.pass, "{name}: {}", v.details);
    }
    for name in ["q8", "d4"] {
        let t = degcom::finite::catalog_table(name).unwrap();
        assert_eq!(dc_class_formula(&t), five_eighths, "{name} attains 5/8");
    }
    println!("ACCEPTANCE 02 PASS: Gustafson bounds hold; q8 and d4 attain 5/8 exactly");
}

#[test]
fn acceptance_03_center_bound_suite() {
    let half = rat(1, 2);
    let mut nonvacuous = 0;
    for (name, t) in build_catalog() {
        let dc = dc_class_formula(t);
        if dc > half {
            nonvacuous += 1;
            let eps = &dc - &half;
            let q = BigRational::from(BigInt::from(t.order() / t.center().len()));
            assert!(&q * &eps <= BigRational::one(), "{name}: [G:Z] > 1/eps");
        }
        let v = verify_center_bound(t, name);
        assert!(v.pass, "{name}: {}", v.details);
    }
    assert!(nonvacuous > 10, "suite exercises the nonvacuous case");
    println!("ACCEPTANCE 03 PASS: centre index <= 1/eps on all catalog groups ({nonvacuous} nonvacuous)");
}

#[test]
fn acceptance_04_neumann_suite() {
    for (name, t) in build_catalog() {
        let nd = neumann_decompose(t, name);
        for c in &nd.checks {
            assert!(c.pass, "{name} {}: {}", c.check, c.details);
        }
        let v = verify_nvl(t, name);
        assert!(v.pass, "{name}: {}", v.details);
    }
    println!("ACCEPTANCE 04 PASS: Neumann decomposition and NVL(ln) hold on all catalog groups");
}

#[test]
fn acceptance_05_random_walk_uniformity() {
    // the displayed bound itself
    let p = MixingParams::new(rat(1, 2), rat(1, 10)).unwrap();
    assert_eq!(mixing_bound(&p).unwrap(), 12801);

    let cases: [(&str, &str); 2] = [("z12", "gens:g^3"), ("d4", "center")];
    for eps in [rat(1, 20), rat(1, 100)] {
        for (name, sub) in cases {
            let g = lookup_group(name).unwrap();
            let h = SubgroupOracle::parse(&g, sub, 1000).unwrap();
            let step = Measure::lazy_uniform_step(&g, g.default_genset()).unwrap();
            let probes = vec![g.identity(), parse_element(&g, if name == "z12" { "g" } else { "r" }).unwrap()];
            let rep = verify_uniform_measurement(&g, &step, &[h], &eps, &probes, &caps()).unwrap();
            assert!(rep.pass, "{name}/{sub} eps={eps}: {rep:?}");
            let e = &rep.entries[0];
            let certified = e.certified_n.unwrap();
            assert!(certified <= e.n_star, "{name}: certified past the bound");
            for (probe, dev) in &e.probe_deviations {
                assert!(
                    dev.as_rational().unwrap() <= &eps,
                    "{name} probe {probe}: deviation {dev:?} above eps"
                );
            }
        }
    }
    println!("ACCEPTANCE 05 PASS: walk coset masses within eps at n* on z12 (index 3) and d4 (center), eps in {{0.05, 0.01}}; mixing_bound(1/2,1/10) = 12801");
}

#[test]
fn acceptance_06_folner_convergence() {
    // Z: ball [-n, n]; evens differ from odds by exactly one element,
    // so |mu_n(xH) - 1/2| = 1/(2(2n+1)) for both probes.
    let z = lookup_group("z").unwrap();
    let h = SubgroupOracle::even_sum(&z).unwrap();
    let seq = MeasureSeqSpec::BallUniform(z.default_genset().clone());
    let probes = vec![z.identity(), parse_element(&z, "e1").unwrap()];
    let curve = index_measurement_curve(&z, &seq, &h, &probes, 1..=500, &caps()).unwrap();
    assert_eq!(curve.index, SubgroupIndex::Finite(2));
    for p in &curve.points {
        let n = p.n as i64;
        let oracle = BigRational::new(BigInt::one(), BigInt::from(2 * (2 * n + 1)));
        for d in &p.deviations {
            assert_eq!(d.as_rational().unwrap(), &oracle, "Z closed-form count at n={n}");
            assert!(d.as_rational().unwrap() <= &rat(1, n), "Z deviation above 1/n");
        }
    }

    // Z^2: diamond |a|+|b| <= n; parity of a+b equals parity of the
    // sphere radius, so evens = 1 + 4*(2 + 4 + ... ) = 1 + 4k(k+1).
    let z2 = lookup_group("z^2").unwrap();
    let h = SubgroupOracle::even_sum(&z2).unwrap();
    let seq = MeasureSeqSpec::BallUniform(z2.default_genset().clone());
    let probes = vec![z2.identity(), parse_element(&z2, "e1").unwrap()];
    let curve = index_measurement_curve(&z2, &seq, &h, &probes, 1..=500, &caps()).unwrap();
    assert_eq!(curve.index, SubgroupIndex::Finite(2));
    for p in &curve.points {
        let n = p.n as i64;
        let size = 2 * n * n + 2 * n + 1;
        assert_eq!(p.support as i64, size);
        let k = n / 2;
        let evens = 1 + 4 * k * (k + 1);
        let even_mass = BigRational::new(BigInt::from(evens), BigInt::from(size));
        let odd_mass = BigRational::new(BigInt::from(size - evens), BigInt::from(size));
        assert_eq!(p.masses[0].as_rational().unwrap(), &even_mass, "Z^2 evens at n={n}");
        assert_eq!(p.masses[1].as_rational().unwrap(), &odd_mass, "Z^2 odds at n={n}");
        for d in &p.deviations {
            assert!(d.as_rational().unwrap() <= &rat(1, n), "Z^2 deviation above 1/n at n={n}");
        }
    }
    println!("ACCEPTANCE 06 PASS: ball deviations <= 1/n for index-2 subgroups of Z and Z^2, n <= 500, matching closed-form counts");
}

#[test]
fn acceptance_07_zxf2_counterexample() {
    // Oracle: with S = {(0,e), (±1,e), (0,x^±1), (0,y^±1)} the product
    // ball is {(k,w) : |k| + |w| <= n}, so
    // |B(n)| = sum_j sphere_j(F2) * (2(n-j)+1) with sphere sizes
    // 1, 4, 12, 36, ... and mu_n(F2) = |B_{F2}(n)| / |B(n)|.
    let g = lookup_group("zxf2").unwrap();
    let gens = g.default_genset();
    assert_eq!(gens.len(), 7, "the seven-element generating set");
    let f2_ball = |n: i64| -> i64 {
        if n == 0 {
            1
        } else {
            2 * 3i64.pow(n as u32) - 1
        }
    };
    let oracle_mass = |n: i64| -> BigRational {
        let mut total = 0i64;
        for j in 0..=n {
            let sphere = f2_ball(j) - if j > 0 { f2_ball(j - 1) } else { 0 };
            total += sphere * (2 * (n - j) + 1);
        }
        BigRational::new(BigInt::from(f2_ball(n)), BigInt::from(total))
    };
    let h = SubgroupOracle::factor(&g, 1).unwrap();
    let seq = MeasureSeqSpec::BallUniform(gens.clone());
    let probes = vec![g.identity()];
    let mut low_coset_cap = caps();
    low_coset_cap.coset = 100;
    let curve = index_measurement_curve(&g, &seq, &h, &probes, 5..=12, &low_coset_cap).unwrap();
    assert!(matches!(curve.index, SubgroupIndex::AtLeast(_)), "F(x,y) has infinite index");
    let tenth = rat(1, 10);
    for p in &curve.points {
        let mass = p.masses[0].as_rational().unwrap();
        assert_eq!(mass, &oracle_mass(p.n as i64), "enumerated mass vs closed form at n={}", p.n);
        assert!(mass >= &tenth, "mu_{}(F2) = {mass} below 0.1", p.n);
    }
    println!("ACCEPTANCE 07 PASS: mu_n(F2) >= 0.1 for 5 <= n <= 12 on Z x F2 (infinite index, no detection)");
}

#[test]
fn acceptance_08_dinf_convergence_triple() {
    let d = lookup_group("dinf").unwrap();
    let seq = MeasureSeqSpec::BallUniform(d.default_genset().clone());
    let quarter = rat(1, 4);

    // dc oracle: ball has 2n+1 translations and 2n-1 reflections, so
    // commuting pairs = 4n + 2n(2n+1) + 2(2n-1) = 4n^2 + 10n - 2.
    let dc_oracle = |n: i64| BigRational::new(BigInt::from(4 * n * n + 10 * n - 2), BigInt::from(16 * n * n));
    // cr oracle: translation classes 0..=n plus the two reflection
    // parities over ball size 4n.
    let cr_oracle = |n: i64| BigRational::new(BigInt::from(n + 3), BigInt::from(4 * n));

    let dc_rep = dc_sequence(&d, &seq, 150..=200, 51, &caps()).unwrap();
    for p in &dc_rep.points {
        assert_eq!(p.value.as_rational().unwrap(), &dc_oracle(p.n as i64), "dc at n={}", p.n);
    }
    for s in [&dc_rep.tail_max, &dc_rep.tail_min] {
        let diff = (s.as_rational().unwrap() - &quarter).abs();
        assert!(diff <= rat(1, 50), "dc tail {s:?} beyond 0.02 of 1/4");
    }

    let cr_rep = cr_sequence(&d, &seq, 150..=200, 51, &caps()).unwrap();
    for p in &cr_rep.points {
        assert_eq!(p.value.as_rational().unwrap(), &cr_oracle(p.n as i64), "cr at n={}", p.n);
    }
    for s in [&cr_rep.tail_max, &cr_rep.tail_min] {
        let diff = (s.as_rational().unwrap() - &quarter).abs();
        assert!(diff <= rat(1, 20), "cr tail {s:?} beyond 0.05 of 1/4");
    }

    // pointwise agreement at n = 200
    let dc200 = dc_rep.points.last().unwrap().value.as_rational().unwrap().clone();
    let cr200 = cr_rep.points.last().unwrap().value.as_rational().unwrap().clone();
    assert!((&dc200 - &cr200).abs() <= rat(1, 20), "|dc - cr| at 200");

    // both tails clear the converse bound 1/4 minus the tolerance
    let bound = cr_lower_bound(2, 1).unwrap();
    assert_eq!(bound, quarter);
    let floor = &bound - rat(1, 20);
    assert!(dc_rep.tail_min.as_rational().unwrap() > &floor);
    assert!(cr_rep.tail_min.as_rational().unwrap() > &floor);
    println!("ACCEPTANCE 08 PASS: D-infinity dc tail within 0.02 of 1/4, cr tail within 0.05, |dc-cr| at 200 <= 0.05, both above 1/4 - tol");
}

#[test]
fn acceptance_09_heisenberg_decay() {
    let h = lookup_group("heisenberg").unwrap();
    let seq = MeasureSeqSpec::BallUniform(h.default_genset().clone());
    let rep = dc_sequence(&h, &seq, 4..=12, 3, &caps()).unwrap();
    // cross-validate the slope-bucket fast path against all-pairs on
    // the small radii
    for n in 4..=6u64 {
        let mu = Measure::ball_uniform(&h, h.default_genset(), n, 1 << 22).unwrap();
        let oracle = dc_all_pairs_oracle(&mu);
        let p = rep.points.iter().find(|p| p.n == n).unwrap();
        assert_eq!(p.value.as_rational().unwrap(), &oracle, "all-pairs at n={n}");
    }
    for w in rep.points.windows(2) {
        assert!(
            w[1].value.as_rational().unwrap() < w[0].value.as_rational().unwrap(),
            "dc not strictly decreasing at n={}->{}",
            w[0].n,
            w[1].n
        );
    }
    let dc4 = rep.points.first().unwrap().value.as_rational().unwrap().clone();
    let dc12 = rep.points.last().unwrap().value.as_rational().unwrap().clone();
    assert!(dc12 < dc4);
    println!(
        "ACCEPTANCE 09 PASS: Heisenberg ball dc strictly decreasing on [4,12]; dc_12 = {:.4} < dc_4 = {:.4}",
        dc12.to_f64().unwrap(),
        dc4.to_f64().unwrap()
    );
}

#[test]
fn acceptance_10_independence_ball_vs_walk() {
    let d = lookup_group("dinf").unwrap();
    let ball_seq = MeasureSeqSpec::BallUniform(d.default_genset().clone());
    let ball_rep = dc_sequence(&d, &ball_seq, 150..=200, 51, &caps()).unwrap();

    let step = Measure::lazy_uniform_step(&d, d.default_genset()).unwrap().to_float();
    let walk_seq = MeasureSeqSpec::WalkPower(step);
    let walk_rep = dc_sequence(&d, &walk_seq, 500..=560, 61, &caps()).unwrap();

    let gap_max = (ball_rep.tail_max.to_f64() - walk_rep.tail_max.to_f64()).abs();
    let gap_min = (ball_rep.tail_min.to_f64() - walk_rep.tail_min.to_f64()).abs();
    assert!(gap_max <= 0.02, "tail max gap {gap_max}");
    assert!(gap_min <= 0.02, "tail min gap {gap_min}");
    println!("ACCEPTANCE 10 PASS: D-infinity ball dc tail and lazy-walk dc tail agree within 0.02 (gaps {gap_max:.4}, {gap_min:.4})");
}

#[test]
fn acceptance_11_montecarlo_calibration() {
    let g = lookup_group("d4").unwrap();
    let step = Measure::lazy_uniform_step(&g, g.default_genset()).unwrap();
    let exact = dc_of_measure(&step.walk_power(50, 1 << 20).unwrap(), 1 << 30)
        .unwrap()
        .to_f64();
    let est = dc_montecarlo(&step, 50, 100_000, 7, &caps()).unwrap();
    assert!(
        est.ci_low <= exact && exact <= est.ci_high,
        "CI [{}, {}] misses exact {exact}",
        est.ci_low,
        est.ci_high
    );
    println!(
        "ACCEPTANCE 11 PASS: Wilson CI [{:.4}, {:.4}] contains exact walk dc {:.6} (D4, n=50, 1e5 trials, seed 7)",
        est.ci_low, est.ci_high, exact
    );
}

#[test]
fn acceptance_12_conjugacy_oracle_equivalence() {
    // canonical ids agree with brute-force conjugator search on all
    // pairs from the radius-4 ball; conjugators from radius 8 (free,
    // dihedral) or 6 (Heisenberg)
    let cases: [(&str, u64); 3] = [("f2", 8), ("dinf", 8), ("heisenberg", 6)];
    for (name, radius) in cases {
        let g = lookup_group(name).unwrap();
        let b4 = ball(&g, g.default_genset(), 4, 1 << 22).unwrap();
        let br = ball(&g, g.default_genset(), radius, 1 << 22).unwrap();
        let b4set: std::collections::HashSet<&Element> = b4.iter().collect();
        // conjugates of each x that land back in the radius-4 ball
        let mut reachable: Vec<std::collections::HashSet<Element>> = Vec::new();
        for x in &b4 {
            let mut set = std::collections::HashSet::new();
            for c in br.iter().map(|gg| g.conjugate(gg, x).unwrap()) {
                if b4set.contains(&c) {
                    set.insert(c);
                }
            }
            reachable.push(set);
        }
        let ids: Vec<_> = b4.iter().map(|x| conj_canonical(&g, x).unwrap()).collect();
        let mut mismatches = 0u64;
        for (i, x) in b4.iter().enumerate() {
            for (j, y) in b4.iter().enumerate() {
                let canon = ids[i] == ids[j];
                let brute = reachable[i].contains(y);
                if canon != brute {
                    mismatches += 1;
                    eprintln!("{name}: canonical {canon} vs brute {brute} for {x:?} ~ {y:?}");
                }
            }
        }
        assert_eq!(mismatches, 0, "{name}: conjugacy rule disagrees with brute force");
    }
    println!("ACCEPTANCE 12 PASS: canonical conjugacy matches brute-force search on radius-4 balls of f2, dinf, heisenberg (zero mismatches)");
}

#[test]
fn acceptance_13_translates_suite() {
    let verdicts = degcom::finite::verify_translates_catalog(4, 125, 20260810);
    for v in &verdicts {
        assert!(v.pass, "{} on {}: {}", v.check, v.group, v.details);
    }
    println!(
        "ACCEPTANCE 13 PASS: X^(3m-1) = <X> for sampled symmetric X with |X| >= |G|/m (m <= 4) on all {} catalog groups",
        verdicts.len()
    );
}

#[test]
fn almost_invariance_defect_curves() {
    // supporting check: ball sequences on Z are almost invariant while
    // free-group balls are not
    let z = lookup_group("z").unwrap();
    let seq = MeasureSeqSpec::BallUniform(z.default_genset().clone());
    let x = parse_element(&z, "e1").unwrap();
    let curve = almost_invariance_defect(&z, &seq, &x, 1..=50, 1 << 22).unwrap();
    for (n, v) in &curve {
        assert_eq!(
            v.as_rational().unwrap(),
            &BigRational::new(2.into(), (2 * *n as i64 + 1).into())
        );
    }
    assert!(curve.last().unwrap().1.to_f64() < curve.first().unwrap().1.to_f64());
}
