//! Degree of commutativity: exact values for a measure, series over
//! measure sequences with tail statistics, Monte-Carlo estimation, and
//! the closed-form bounds.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::group::{ball_layers, heis_primitive_direction, Element, Family, GroupSpec};
use crate::measure::{Measure, MeasureSeqSpec, WalkSeq};
use crate::scalar::{Scalar, Weight};

/// Resource caps shared across the engines.
#[derive(Debug, Clone)]
pub struct Caps {
    /// Ball enumeration atom cap.
    pub ball_atoms: usize,
    /// Convolution support cap.
    pub support_atoms: usize,
    /// Pair-count cap for quadratic dc paths.
    pub pairs: u64,
    /// Coset enumeration cap.
    pub coset: usize,
    /// Conjugacy-class exploration cap.
    pub class: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            ball_atoms: crate::measure::DEFAULT_SUPPORT_CAP,
            support_atoms: crate::measure::DEFAULT_SUPPORT_CAP,
            pairs: 100_000_000,
            coset: 1000,
            class: 10_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct DcPoint {
    pub n: u64,
    pub value: Scalar,
    pub support: u64,
}

/// Value series with tail statistics over the final window. The tail
/// max/min estimate the limsup/liminf honestly at finite n; no claim
/// about the true limit is made.
#[derive(Debug, Clone)]
pub struct DcReport {
    pub points: Vec<DcPoint>,
    pub tail_window: usize,
    pub tail_max: Scalar,
    pub tail_min: Scalar,
}

pub(crate) fn tail_stats(values: &[Scalar], window: usize) -> (Scalar, Scalar) {
    let w = window.max(1).min(values.len());
    let tail = &values[values.len() - w..];
    let mut max = tail[0].clone();
    let mut min = tail[0].clone();
    for v in &tail[1..] {
        if v.total_cmp(&max) == std::cmp::Ordering::Greater {
            max = v.clone();
        }
        if v.total_cmp(&min) == std::cmp::Ordering::Less {
            min = v.clone();
        }
    }
    (max, min)
}

#[derive(Debug, Clone)]
pub struct McEstimate {
    pub mean: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub trials: u64,
    pub seed: u64,
}

/// Structural commuting key: two non-central elements commute iff their
/// keys agree; a central element commutes with everything.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum CommuteKey {
    Translation,
    Reflection(BigInt),
    Slope(BigInt, BigInt),
    Root(Vec<i16>),
}

fn commute_key(spec: &GroupSpec, x: &Element) -> Option<CommuteKey> {
    match (spec.family(), x) {
        (Family::Heisenberg, Element::Heis(u)) => {
            if u.0.is_zero() && u.1.is_zero() {
                None
            } else {
                let (a, b) = heis_primitive_direction(&u.0, &u.1);
                Some(CommuteKey::Slope(a, b))
            }
        }
        (Family::DihedralInf, Element::Dih(u)) => {
            if u.1 {
                Some(CommuteKey::Reflection(u.0.clone()))
            } else if u.0.is_zero() {
                None
            } else {
                Some(CommuteKey::Translation)
            }
        }
        (Family::Free(_), Element::Word(w)) => {
            if w.is_empty() {
                None
            } else {
                let root = crate::group::freeword::primitive_root(w);
                let inv = crate::group::freeword::inverse(&root);
                Some(CommuteKey::Root(root.min(inv)))
            }
        }
        _ => unreachable!("commute_key is only used for keyed families"),
    }
}

fn has_commute_key(spec: &GroupSpec) -> bool {
    matches!(
        spec.family(),
        Family::Heisenberg | Family::DihedralInf | Family::Free(_)
    )
}

/// Probability that two independent draws commute:
/// sum over x, y of mu(x) mu(y) [xy = yx].
///
/// Family fast paths (commuting-key buckets for Heisenberg, infinite
/// dihedral and free groups; table lookups for finite groups) agree
/// exactly with the all-pairs sum.
pub fn dc_of_measure(mu: &Measure, pairs_cap: u64) -> Result<Scalar> {
    if let Some(m) = mu.rational_weights() {
        dc_weighted(mu.spec(), m, pairs_cap).map(Weight::into_scalar)
    } else if let Some(m) = mu.float_weights() {
        dc_weighted(mu.spec(), m, pairs_cap).map(Weight::into_scalar)
    } else {
        unreachable!()
    }
}

fn dc_weighted<W: Weight>(
    spec: &GroupSpec,
    map: &BTreeMap<Element, W>,
    pairs_cap: u64,
) -> Result<W> {
    let mass = map
        .values()
        .fold(W::w_zero(), |acc, w| acc.w_add(w));
    if spec.is_abelian() {
        return Ok(mass.w_mul(&mass));
    }
    match spec.family() {
        Family::Table(t) => {
            let s = map.len() as u64;
            check_pairs(s, pairs_cap)?;
            let atoms: Vec<(u16, &W)> = map
                .iter()
                .map(|(x, w)| match x {
                    Element::Table(i) => (*i, w),
                    _ => unreachable!(),
                })
                .collect();
            let mut total = W::w_zero();
            for (i, wi) in &atoms {
                let mut row = W::w_zero();
                for (j, wj) in &atoms {
                    if t.commutes(*i, *j) {
                        row = row.w_add(wj);
                    }
                }
                total = total.w_add(&wi.w_mul(&row));
            }
            Ok(total)
        }
        Family::Heisenberg | Family::DihedralInf | Family::Free(_) => {
            let mut central = W::w_zero();
            let mut buckets: BTreeMap<CommuteKey, W> = BTreeMap::new();
            for (x, w) in map {
                match commute_key(spec, x) {
                    None => central = central.w_add(w),
                    Some(k) => {
                        buckets
                            .entry(k)
                            .and_modify(|acc| *acc = acc.w_add(w))
                            .or_insert_with(|| w.clone());
                    }
                }
            }
            // central pairs with everything; non-central x commutes with
            // central y and its own bucket
            let mut total = central.w_mul(&mass);
            total = total.w_add(&mass.w_sub(&central).w_mul(&central));
            for m in buckets.values() {
                total = total.w_add(&m.w_mul(m));
            }
            Ok(total)
        }
        _ => {
            let s = map.len() as u64;
            check_pairs(s, pairs_cap)?;
            let atoms: Vec<(&Element, &W)> = map.iter().collect();
            let mut total = W::w_zero();
            for (x, wx) in &atoms {
                let mut row = W::w_zero();
                for (y, wy) in &atoms {
                    if spec.mul_unchecked(x, y) == spec.mul_unchecked(y, x) {
                        row = row.w_add(wy);
                    }
                }
                total = total.w_add(&wx.w_mul(&row));
            }
            Ok(total)
        }
    }
}

fn check_pairs(support: u64, pairs_cap: u64) -> Result<()> {
    if support.saturating_mul(support) > pairs_cap {
        Err(Error::resource("pair count", pairs_cap, None))
    } else {
        Ok(())
    }
}

/// dc_{mu_n} for n in the range, with tail statistics over the final
/// window.
pub fn dc_sequence(
    spec: &GroupSpec,
    seq: &MeasureSeqSpec,
    range: std::ops::RangeInclusive<u64>,
    tail_window: usize,
    caps: &Caps,
) -> Result<DcReport> {
    if range.is_empty() {
        return Err(Error::InvalidArgument("empty n range".to_string()));
    }
    let mut points = Vec::new();
    match seq {
        MeasureSeqSpec::BallUniform(gens) => {
            seq.require_ball_invariants()?;
            if has_commute_key(spec) {
                // Incremental count buckets over BFS layers: uniform
                // weights make dc a pure pair count.
                let mut layers = ball_layers(spec, gens, caps.ball_atoms)?;
                let mut central: u128 = 0;
                let mut total: u128 = 0;
                let mut counts: BTreeMap<CommuteKey, u128> = BTreeMap::new();
                let mut sum_sq: u128 = 0;
                for n in 0..=*range.end() {
                    if let Some(layer) = layers.advance()? {
                        for x in layer {
                            total += 1;
                            match commute_key(spec, x) {
                                None => central += 1,
                                Some(k) => {
                                    let m = counts.entry(k).or_insert(0);
                                    sum_sq += 2 * *m + 1;
                                    *m += 1;
                                }
                            }
                        }
                    }
                    if n >= *range.start() {
                        let pairs =
                            central * total + (total - central) * central + sum_sq;
                        points.push(DcPoint {
                            n,
                            value: Scalar::Rational(BigRational::new(
                                BigInt::from(pairs),
                                BigInt::from(total * total),
                            )),
                            support: total as u64,
                        });
                    }
                }
            } else if spec.is_abelian() {
                let mut layers = ball_layers(spec, gens, caps.ball_atoms)?;
                let mut total = 0u64;
                for n in 0..=*range.end() {
                    if let Some(layer) = layers.advance()? {
                        total += layer.len() as u64;
                    }
                    if n >= *range.start() {
                        points.push(DcPoint {
                            n,
                            value: Scalar::Rational(BigRational::one()),
                            support: total,
                        });
                    }
                }
            } else {
                let mut layers = ball_layers(spec, gens, caps.ball_atoms)?;
                let mut cum: Vec<Element> = Vec::new();
                for n in 0..=*range.end() {
                    if let Some(layer) = layers.advance()? {
                        cum.extend_from_slice(layer);
                    }
                    if n >= *range.start() {
                        let mu = Measure::uniform(spec, &cum)?;
                        points.push(DcPoint {
                            n,
                            value: dc_of_measure(&mu, caps.pairs)?,
                            support: cum.len() as u64,
                        });
                    }
                }
            }
        }
        MeasureSeqSpec::WalkPower(step) => {
            let start = *range.start();
            if start == 0 {
                return Err(Error::InvalidArgument(
                    "walk sequences start at n = 1".to_string(),
                ));
            }
            let mut walk = WalkSeq::new(step.clone(), caps.support_atoms);
            walk.advance_to(start)?;
            for n in start..=*range.end() {
                walk.advance_to(n)?;
                points.push(DcPoint {
                    n,
                    value: dc_of_measure(walk.current(), caps.pairs)?,
                    support: walk.current().support_len() as u64,
                });
            }
        }
        MeasureSeqSpec::Explicit(list) => {
            for n in range.clone() {
                let mu = list.get(n as usize).ok_or_else(|| {
                    Error::InvalidArgument(format!("explicit sequence has no index {n}"))
                })?;
                points.push(DcPoint {
                    n,
                    value: dc_of_measure(mu, caps.pairs)?,
                    support: mu.support_len() as u64,
                });
            }
        }
    }
    let values: Vec<Scalar> = points.iter().map(|p| p.value.clone()).collect();
    let (tail_max, tail_min) = tail_stats(&values, tail_window);
    Ok(DcReport {
        points,
        tail_window,
        tail_max,
        tail_min,
    })
}

/// Monte-Carlo estimate of dc_{mu^{*n}}: pairs of independent n-step
/// endpoints, Wilson 95% interval, deterministic for a fixed seed.
pub fn dc_montecarlo(
    step: &Measure,
    n: u64,
    trials: u64,
    seed: u64,
    caps: &Caps,
) -> Result<McEstimate> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be >= 1".to_string()));
    }
    let walk = step.walk_power(n, caps.support_atoms)?;
    let draws = walk.sample(seed, (2 * trials) as usize);
    let spec = walk.spec();
    let mut hits = 0u64;
    for pair in draws.chunks_exact(2) {
        if spec.mul_unchecked(&pair[0], &pair[1]) == spec.mul_unchecked(&pair[1], &pair[0]) {
            hits += 1;
        }
    }
    let (mean, ci_low, ci_high) = wilson_interval(hits, trials);
    Ok(McEstimate {
        mean,
        ci_low,
        ci_high,
        trials,
        seed,
    })
}

/// Two-sided 95% Wilson score interval.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64, f64) {
    let t = trials as f64;
    let p = successes as f64 / t;
    let z = 1.959963984540054_f64;
    let z2 = z * z;
    let denom = 1.0 + z2 / t;
    let center = (p + z2 / (2.0 * t)) / denom;
    let half = z * (p * (1.0 - p) / t + z2 / (4.0 * t * t)).sqrt() / denom;
    (p, (center - half).max(0.0), (center + half).min(1.0))
}

/// dc of a group with central subgroup of index q from a transversal's
/// centralizer indices: (1/q) * sum over t of 1/[G:C_G(t)], with 1/inf
/// read as 0. Exactly one entry per transversal element; the central
/// coset contributes the mandatory entry 1.
pub fn dc_central_formula(q: u64, centralizer_indices: &[Option<u64>]) -> Result<BigRational> {
    if q < 1 {
        return Err(Error::InvalidArgument("central index q must be >= 1".to_string()));
    }
    if centralizer_indices.len() as u64 != q {
        return Err(Error::InvalidArgument(format!(
            "need exactly q = {q} centralizer indices, got {}",
            centralizer_indices.len()
        )));
    }
    if !centralizer_indices.contains(&Some(1)) {
        return Err(Error::InvalidArgument(
            "no index-1 entry: the transversal must contain the central coset".to_string(),
        ));
    }
    let mut sum = BigRational::zero();
    for idx in centralizer_indices {
        match idx {
            Some(0) => {
                return Err(Error::InvalidArgument("centralizer index 0".to_string()))
            }
            Some(i) => sum += BigRational::new(BigInt::one(), BigInt::from(*i)),
            None => {}
        }
    }
    Ok(sum / BigRational::from(BigInt::from(q)))
}

/// 1/(m^2 d): dc lower bound for a group with an index-m subgroup that
/// is abelian-by-(order-d kernel).
pub fn neumann_lower_bound(m: u64, d: u64) -> Result<BigRational> {
    if m < 1 || d < 1 {
        return Err(Error::InvalidArgument("m and d must be >= 1".to_string()));
    }
    Ok(BigRational::new(BigInt::one(), BigInt::from(m * m * d)))
}

/// 1/2 + 1/(2q): dc upper bound for a nonabelian group with centre of
/// index q.
pub fn gustafson_upper_bound(q: u64) -> Result<BigRational> {
    if q < 1 {
        return Err(Error::InvalidArgument("q must be >= 1".to_string()));
    }
    Ok(BigRational::new(BigInt::one(), BigInt::from(2))
        + BigRational::new(BigInt::one(), BigInt::from(2 * q)))
}

/// Size of the conjugacy class of `x`, exploring conjugates by the
/// default generators; `None` once the orbit exceeds `cap`.
pub fn class_size_capped(spec: &GroupSpec, x: &Element, cap: u64) -> Option<u64> {
    let gens: Vec<Element> = spec
        .default_genset()
        .elements()
        .iter()
        .filter(|g| !spec.is_identity(g))
        .cloned()
        .collect();
    let mut seen = std::collections::HashSet::new();
    seen.insert(x.clone());
    let mut frontier = vec![x.clone()];
    while let Some(y) = frontier.pop() {
        for g in &gens {
            let c = spec
                .conjugate(g, &y)
                .expect("orbit elements stay in the group");
            if !seen.contains(&c) {
                if seen.len() as u64 >= cap {
                    return None;
                }
                seen.insert(c.clone());
                frontier.push(c);
            }
        }
    }
    Some(seen.len() as u64)
}

/// Mass of {x : [G:C_G(x)] <= r}, the class size computed by capped
/// conjugation BFS (exceeding the cap counts as > r).
pub fn mass_of_small_centralizers(mu: &Measure, r: u64, class_cap: u64) -> Result<Scalar> {
    if r < 1 {
        return Err(Error::InvalidArgument("r must be >= 1".to_string()));
    }
    if class_cap <= r {
        return Err(Error::InvalidArgument(format!(
            "class cap {class_cap} must exceed r = {r}"
        )));
    }
    let spec = mu.spec().clone();
    let small = |x: &Element| -> bool {
        matches!(class_size_capped(&spec, x, r + 1), Some(k) if k <= r)
    };
    match (mu.rational_weights(), mu.float_weights()) {
        (Some(m), _) => {
            let mut sum = BigRational::zero();
            for (x, w) in m {
                if small(x) {
                    sum += w;
                }
            }
            Ok(Scalar::Rational(sum))
        }
        (_, Some(m)) => {
            let mut sum = crate::scalar::KahanSum::new();
            for (x, w) in m {
                if small(x) {
                    sum.add(*w);
                }
            }
            Ok(Scalar::Float(sum.value()))
        }
        _ => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::words::lookup_group;
    use crate::group::GenSet;

    fn uniform_on(name: &str) -> (GroupSpec, Measure) {
        let g = lookup_group(name).unwrap();
        let order = g.order().unwrap() as u16;
        let mu = Measure::uniform(&g, &(0..order).map(Element::Table).collect::<Vec<_>>())
            .unwrap();
        (g, mu)
    }

    /// Quadratic all-pairs oracle, independent of the engine's paths.
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

    #[test]
    fn finite_uniform_values() {
        for (name, num, den) in [("q8", 5i64, 8i64), ("s3", 1, 2), ("d4", 5, 8), ("a4", 1, 3)] {
            let (_, mu) = uniform_on(name);
            let dc = dc_of_measure(&mu, 1 << 30).unwrap();
            assert_eq!(dc, Scalar::rational(num, den), "{name}");
            assert_eq!(
                dc.as_rational().unwrap(),
                &dc_all_pairs_oracle(&mu),
                "{name} oracle"
            );
        }
    }

    #[test]
    fn abelian_measures_give_one() {
        let z2 = GroupSpec::lattice(2);
        let mu = Measure::ball_uniform(&z2, z2.default_genset(), 3, 1 << 20).unwrap();
        assert_eq!(dc_of_measure(&mu, 1 << 30).unwrap(), Scalar::rational(1, 1));
    }

    #[test]
    fn bucket_paths_match_all_pairs() {
        let caps = 1u64 << 40;
        let h = GroupSpec::heisenberg();
        for n in 1..=4 {
            let mu = Measure::ball_uniform(&h, h.default_genset(), n, 1 << 20).unwrap();
            let fast = dc_of_measure(&mu, caps).unwrap();
            assert_eq!(fast.as_rational().unwrap(), &dc_all_pairs_oracle(&mu), "heis n={n}");
        }
        let d = GroupSpec::dihedral_inf();
        for n in 1..=5 {
            let mu = Measure::ball_uniform(&d, d.default_genset(), n, 1 << 20).unwrap();
            let fast = dc_of_measure(&mu, caps).unwrap();
            assert_eq!(fast.as_rational().unwrap(), &dc_all_pairs_oracle(&mu), "dinf n={n}");
        }
        let f = GroupSpec::free(2);
        for n in 1..=3 {
            let mu = Measure::ball_uniform(&f, f.default_genset(), n, 1 << 20).unwrap();
            let fast = dc_of_measure(&mu, caps).unwrap();
            assert_eq!(fast.as_rational().unwrap(), &dc_all_pairs_oracle(&mu), "f2 n={n}");
        }
    }

    #[test]
    fn non_uniform_bucket_path_matches() {
        // skewed rational weights exercise the weighted bucket path
        let d = GroupSpec::dihedral_inf();
        let b = crate::group::ball(&d, d.default_genset(), 3, 1 << 20).unwrap();
        let total = (b.len() * (b.len() + 1) / 2) as i64;
        let atoms: Vec<(Element, BigRational)> = b
            .into_iter()
            .enumerate()
            .map(|(i, x)| (x, BigRational::new(BigInt::from(i as i64 + 1), BigInt::from(total))))
            .collect();
        let mu = Measure::from_rational_weights(&d, atoms).unwrap();
        let fast = dc_of_measure(&mu, 1 << 40).unwrap();
        assert_eq!(fast.as_rational().unwrap(), &dc_all_pairs_oracle(&mu));
    }

    #[test]
    fn dc_invariant_under_inversion_pushforward() {
        // xy = yx iff y^-1 x^-1 = x^-1 y^-1, so inversion preserves dc
        let (g, _) = uniform_on("s4");
        let order = g.order().unwrap() as i64;
        let total = order * (order + 1) / 2;
        let atoms: Vec<(Element, BigRational)> = (0..order)
            .map(|i| {
                (
                    Element::Table(i as u16),
                    BigRational::new(BigInt::from(i + 1), BigInt::from(total)),
                )
            })
            .collect();
        let mu = Measure::from_rational_weights(&g, atoms).unwrap();
        let inv = mu.pushforward(|x| g.inv_unchecked(x)).unwrap();
        assert_eq!(
            dc_of_measure(&mu, 1 << 30).unwrap(),
            dc_of_measure(&inv, 1 << 30).unwrap()
        );
    }

    #[test]
    fn central_formula_and_bounds() {
        assert_eq!(
            dc_central_formula(4, &[Some(1), Some(2), Some(2), Some(2)]).unwrap(),
            BigRational::new(5.into(), 8.into())
        );
        assert_eq!(
            dc_central_formula(1, &[Some(1)]).unwrap(),
            BigRational::one()
        );
        assert!(dc_central_formula(0, &[]).is_err());
        // no central coset entry: rejected
        assert!(dc_central_formula(2, &[Some(2), Some(2)]).is_err());

        assert_eq!(
            neumann_lower_bound(2, 1).unwrap(),
            BigRational::new(1.into(), 4.into())
        );
        assert_eq!(neumann_lower_bound(1, 1).unwrap(), BigRational::one());
        assert_eq!(
            neumann_lower_bound(3, 2).unwrap(),
            BigRational::new(1.into(), 18.into())
        );
        assert_eq!(
            gustafson_upper_bound(4).unwrap(),
            BigRational::new(5.into(), 8.into())
        );
        assert_eq!(gustafson_upper_bound(1).unwrap(), BigRational::one());
        assert_eq!(
            gustafson_upper_bound(8).unwrap(),
            BigRational::new(9.into(), 16.into())
        );
    }

    #[test]
    fn small_centralizer_mass() {
        let (_, mu) = uniform_on("s3");
        // class sizes in S3 are {1, 2, 3}: only e and the two 3-cycles
        // have class size <= 2
        assert_eq!(
            mass_of_small_centralizers(&mu, 2, 100).unwrap(),
            Scalar::rational(1, 2)
        );
        let (_, mu) = uniform_on("q8");
        assert_eq!(
            mass_of_small_centralizers(&mu, 2, 100).unwrap(),
            Scalar::rational(1, 1)
        );
        let (_, mu) = uniform_on("z12");
        assert_eq!(
            mass_of_small_centralizers(&mu, 1, 100).unwrap(),
            Scalar::rational(1, 1)
        );
        assert!(mass_of_small_centralizers(&mu, 2, 2).is_err());
    }

    #[test]
    fn dc_sequence_ball_paths() {
        let caps = Caps::default();
        let z2 = GroupSpec::lattice(2);
        let seq = MeasureSeqSpec::BallUniform(z2.default_genset().clone());
        let rep = dc_sequence(&z2, &seq, 1..=5, 3, &caps).unwrap();
        assert!(rep.points.iter().all(|p| p.value == Scalar::rational(1, 1)));
        assert_eq!(rep.points[0].support, 5);

        let d = GroupSpec::dihedral_inf();
        let seq = MeasureSeqSpec::BallUniform(d.default_genset().clone());
        let rep = dc_sequence(&d, &seq, 1..=6, 3, &caps).unwrap();
        for p in &rep.points {
            let n = p.n as i64;
            assert_eq!(p.support as i64, 4 * n);
            assert_eq!(
                p.value,
                Scalar::Rational(BigRational::new(
                    BigInt::from(4 * n * n + 10 * n - 2),
                    BigInt::from(16 * n * n)
                ))
            );
        }
    }

    #[test]
    fn dc_sequence_walk_matches_power() {
        let caps = Caps::default();
        let g = lookup_group("d4").unwrap();
        let step = Measure::lazy_uniform_step(&g, g.default_genset()).unwrap();
        let seq = MeasureSeqSpec::WalkPower(step.clone());
        let rep = dc_sequence(&g, &seq, 3..=6, 2, &caps).unwrap();
        for p in &rep.points {
            let mu = step.walk_power(p.n, 1 << 20).unwrap();
            assert_eq!(p.value, dc_of_measure(&mu, 1 << 30).unwrap());
        }
    }

    #[test]
    fn rejects_asymmetric_ball_gensets() {
        let f2 = GroupSpec::free(2);
        let bad = GenSet::new(
            &f2,
            vec![f2.identity(), Element::word(&[1]), Element::word(&[2])],
        )
        .unwrap();
        let seq = MeasureSeqSpec::BallUniform(bad);
        assert!(dc_sequence(&f2, &seq, 1..=3, 1, &Caps::default()).is_err());
    }

    #[test]
    fn montecarlo_degenerate_cases() {
        let z1 = GroupSpec::lattice(1);
        let step = Measure::lazy_uniform_step(&z1, z1.default_genset()).unwrap();
        let est = dc_montecarlo(&step, 5, 100, 42, &Caps::default()).unwrap();
        assert_eq!(est.mean, 1.0);
        let g = lookup_group("s3").unwrap();
        let step = Measure::lazy_uniform_step(&g, g.default_genset()).unwrap();
        let est = dc_montecarlo(&step, 3, 1, 42, &Caps::default()).unwrap();
        assert!(est.mean == 0.0 || est.mean == 1.0);
        assert!(dc_montecarlo(&step, 3, 0, 42, &Caps::default()).is_err());
    }

    #[test]
    fn central_formula_matches_dc_on_catalog() {
        // dc = (1/q) sum 1/[G:C(t)] over a centre transversal, and the
        // Gustafson bound holds for nonabelian groups
        for (name, t) in crate::group::build_catalog() {
            let (q, indices) = crate::finite::center_transversal_indices(t);
            let opts: Vec<Option<u64>> = indices.iter().map(|&i| Some(i)).collect();
            let formula = dc_central_formula(q, &opts).unwrap();
            let dc = crate::finite::dc_class_formula(t);
            assert_eq!(formula, dc, "{name}");
            if !t.is_abelian() {
                assert!(dc <= gustafson_upper_bound(q).unwrap(), "{name}");
            }
        }
    }

    #[test]
    fn large_centralizer_lemma_at_finite_scale() {
        // uniform mu with dc = alpha: for r > 1/alpha the mass of
        // elements with class size <= r is at least alpha - 1/r
        use num_traits::ToPrimitive;
        for (name, t) in crate::group::build_catalog() {
            let g = GroupSpec::from_table(name, t.clone());
            let mu = Measure::uniform(
                &g,
                &(0..t.order() as u16).map(Element::Table).collect::<Vec<_>>(),
            )
            .unwrap();
            let alpha = crate::finite::dc_class_formula(t);
            let r_min = (alpha.recip().to_f64().unwrap()).floor() as u64 + 1;
            for r in r_min..r_min + 5 {
                let mass = mass_of_small_centralizers(&mu, r, r + t.order() as u64).unwrap();
                let bound = &alpha - BigRational::new(BigInt::one(), BigInt::from(r));
                assert!(
                    mass.as_rational().unwrap() >= &bound,
                    "{name} r={r}: mass {mass:?} below alpha - 1/r = {bound}"
                );
            }
        }
    }

    #[test]
    fn pair_cap_enforced() {
        let (_, mu) = uniform_on("s4");
        assert!(matches!(
            dc_of_measure(&mu, 10),
            Err(Error::Resource(_))
        ));
    }
}
