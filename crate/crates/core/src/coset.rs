//! Schreier coset enumeration, coset masses, the explicit random-walk
//! mixing bound, and exact verification that walk powers measure
//! subgroup index uniformly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::dc::Caps;
use crate::error::{Error, Result};
use crate::group::{ball_layers, words, Element, GenSet, GroupSpec};
use crate::measure::{Measure, MeasureSeqSpec, WalkSeq};
use crate::scalar::Scalar;
use crate::subgroup::SubgroupOracle;

/// Index of a subgroup: exact, or a lower bound when enumeration hit
/// the cap. Infinite index is reported as `AtLeast(cap)` and the target
/// coset mass 1/[G:H] is then read as zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubgroupIndex {
    Finite(usize),
    AtLeast(usize),
}

impl SubgroupIndex {
    /// 1/[G:H] with 1/infinity = 0.
    pub fn target_mass(&self) -> BigRational {
        match self {
            SubgroupIndex::Finite(q) => BigRational::new(BigInt::one(), BigInt::from(*q)),
            SubgroupIndex::AtLeast(_) => BigRational::zero(),
        }
    }
}

impl std::fmt::Display for SubgroupIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SubgroupIndex::Finite(q) => write!(f, "{q}"),
            SubgroupIndex::AtLeast(c) => write!(f, ">={c}"),
        }
    }
}

/// Left-coset table from Schreier BFS: `reps[0] = e`, `depth[i]` the BFS
/// layer of coset i, `action[i][g]` the coset of `gens[g] * reps[i]`
/// (None where enumeration stopped at the cap).
#[derive(Debug, Clone)]
pub struct CosetTable {
    pub reps: Vec<Element>,
    pub depth: Vec<u64>,
    pub action: Vec<Vec<Option<usize>>>,
    pub index: SubgroupIndex,
}

/// Breadth-first enumeration of the left cosets xH, testing coset
/// equality through the membership oracle. Stops at closure or at the
/// cap (reporting `AtLeast(cap)`).
pub fn schreier_cosets(
    spec: &GroupSpec,
    gens: &GenSet,
    h: &SubgroupOracle,
    cap: usize,
) -> Result<CosetTable> {
    if cap < 1 {
        return Err(Error::InvalidArgument("coset cap must be >= 1".to_string()));
    }
    if !h.contains(spec, &spec.identity())? {
        return Err(Error::InvalidArgument(format!(
            "subgroup {} does not contain the identity",
            h.description()
        )));
    }
    let glist: Vec<&Element> = gens.elements().iter().collect();
    let mut reps: Vec<Element> = vec![spec.identity()];
    let mut inv_reps: Vec<Element> = vec![spec.identity()];
    let mut depth: Vec<u64> = vec![0];
    let mut action: Vec<Vec<Option<usize>>> = Vec::new();
    let mut truncated = false;
    let mut i = 0;
    'bfs: while i < reps.len() {
        let mut row: Vec<Option<usize>> = vec![None; glist.len()];
        for (gi, s) in glist.iter().enumerate() {
            let y = spec.mul_unchecked(s, &reps[i]);
            let mut found = None;
            for (j, inv_rep) in inv_reps.iter().enumerate() {
                if h.contains_raw(spec, &spec.mul_unchecked(inv_rep, &y))? {
                    found = Some(j);
                    break;
                }
            }
            match found {
                Some(j) => row[gi] = Some(j),
                None => {
                    if reps.len() >= cap {
                        truncated = true;
                        action.push(row);
                        break 'bfs;
                    }
                    inv_reps.push(spec.inv_unchecked(&y));
                    reps.push(y);
                    depth.push(depth[i] + 1);
                    row[gi] = Some(reps.len() - 1);
                }
            }
        }
        action.push(row);
        i += 1;
    }
    while action.len() < reps.len() {
        action.push(vec![None; glist.len()]);
    }
    let index = if truncated {
        SubgroupIndex::AtLeast(cap)
    } else {
        SubgroupIndex::Finite(reps.len())
    };
    Ok(CosetTable {
        reps,
        depth,
        action,
        index,
    })
}

/// Index of the coset xH among the table's representatives.
pub fn coset_of(
    spec: &GroupSpec,
    h: &SubgroupOracle,
    table: &CosetTable,
    x: &Element,
) -> Result<Option<usize>> {
    let xi = spec.inverse(x)?;
    for (j, rep) in table.reps.iter().enumerate() {
        // x in rep_j H  iff  rep_j^-1 x in H; test via x^-1 rep_j which
        // lies in H exactly when its inverse does.
        if h.contains_raw(spec, &spec.mul_unchecked(&xi, rep))? {
            return Ok(Some(j));
        }
    }
    Ok(None)
}

/// mu(xH) = sum of mu(g) over x^-1 g in H.
pub fn coset_mass(mu: &Measure, h: &SubgroupOracle, x: &Element) -> Result<Scalar> {
    let spec = mu.spec();
    let xi = spec.inverse(x)?;
    if let Some(m) = mu.rational_weights() {
        let mut sum = BigRational::zero();
        for (g, w) in m {
            if h.contains_raw(spec, &spec.mul_unchecked(&xi, g))? {
                sum += w;
            }
        }
        Ok(Scalar::Rational(sum))
    } else if let Some(m) = mu.float_weights() {
        let mut sum = crate::scalar::KahanSum::new();
        for (g, w) in m {
            if h.contains_raw(spec, &spec.mul_unchecked(&xi, g))? {
                sum.add(*w);
            }
        }
        Ok(Scalar::Float(sum.value()))
    } else {
        unreachable!()
    }
}

#[derive(Debug, Clone)]
pub struct IndexCurvePoint {
    pub n: u64,
    pub support: u64,
    /// Per probe: mu_n(xH).
    pub masses: Vec<Scalar>,
    /// Per probe: |mu_n(xH) - 1/[G:H]|.
    pub deviations: Vec<Scalar>,
}

#[derive(Debug, Clone)]
pub struct IndexCurve {
    pub subgroup: String,
    pub index: SubgroupIndex,
    pub probes: Vec<String>,
    pub points: Vec<IndexCurvePoint>,
}

/// Deviations |mu_n(xH) - 1/[G:H]| for each probe x over the range.
/// The index is computed by Schreier enumeration first; `AtLeast` means
/// target mass zero.
pub fn index_measurement_curve(
    spec: &GroupSpec,
    seq: &MeasureSeqSpec,
    h: &SubgroupOracle,
    probes: &[Element],
    range: std::ops::RangeInclusive<u64>,
    caps: &Caps,
) -> Result<IndexCurve> {
    if range.is_empty() {
        return Err(Error::InvalidArgument("empty n range".to_string()));
    }
    let gens = match seq {
        MeasureSeqSpec::BallUniform(g) => g.clone(),
        _ => spec.default_genset().clone(),
    };
    let table = schreier_cosets(spec, &gens, h, caps.coset)?;
    let target = table.index.target_mass();
    let mut points = Vec::new();
    match seq {
        MeasureSeqSpec::BallUniform(gens) => {
            seq.require_ball_invariants()?;
            // identity probes skip the translation multiply
            let inv_probes: Vec<Option<Element>> = probes
                .iter()
                .map(|x| {
                    spec.inverse(x)
                        .map(|xi| if spec.is_identity(&xi) { None } else { Some(xi) })
                })
                .collect::<Result<Vec<_>>>()?;
            let mut layers = ball_layers(spec, gens, caps.ball_atoms)?;
            let mut counts: Vec<u64> = vec![0; probes.len()];
            let mut total: u64 = 0;
            for n in 0..=*range.end() {
                if let Some(layer) = layers.advance()? {
                    for g in layer {
                        total += 1;
                        for (pi, xi) in inv_probes.iter().enumerate() {
                            let hit = match xi {
                                None => h.contains_raw(spec, g)?,
                                Some(xi) => {
                                    h.contains_raw(spec, &spec.mul_unchecked(xi, g))?
                                }
                            };
                            if hit {
                                counts[pi] += 1;
                            }
                        }
                    }
                }
                if n >= *range.start() {
                    let mut masses = Vec::new();
                    let mut deviations = Vec::new();
                    for &c in &counts {
                        let mass = BigRational::new(BigInt::from(c), BigInt::from(total));
                        deviations.push(Scalar::Rational((&mass - &target).abs()));
                        masses.push(Scalar::Rational(mass));
                    }
                    points.push(IndexCurvePoint {
                        n,
                        support: total,
                        masses,
                        deviations,
                    });
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
                let mu = walk.current();
                points.push(curve_point_from_measure(mu, h, probes, &target, n)?);
            }
        }
        MeasureSeqSpec::Explicit(list) => {
            for n in range.clone() {
                let mu = list.get(n as usize).ok_or_else(|| {
                    Error::InvalidArgument(format!("explicit sequence has no index {n}"))
                })?;
                points.push(curve_point_from_measure(mu, h, probes, &target, n)?);
            }
        }
    }
    Ok(IndexCurve {
        subgroup: h.description().to_string(),
        index: table.index,
        probes: probes
            .iter()
            .map(|x| words::render_element(spec, x))
            .collect(),
        points,
    })
}

fn curve_point_from_measure(
    mu: &Measure,
    h: &SubgroupOracle,
    probes: &[Element],
    target: &BigRational,
    n: u64,
) -> Result<IndexCurvePoint> {
    let mut masses = Vec::new();
    let mut deviations = Vec::new();
    for x in probes {
        let mass = coset_mass(mu, h, x)?;
        let dev = match &mass {
            Scalar::Rational(m) => Scalar::Rational((m - target).abs()),
            Scalar::Float(m) => Scalar::Float((m - target.to_f64().unwrap_or(0.0)).abs()),
        };
        masses.push(mass);
        deviations.push(dev);
    }
    Ok(IndexCurvePoint {
        n,
        support: mu.support_len() as u64,
        masses,
        deviations,
    })
}

/// Parameters of the walk mixing bound: c is the minimum step
/// probability (including mu(e)), clamped into (0, 1/2] per the bound's
/// hypothesis; epsilon the target accuracy.
#[derive(Debug, Clone)]
pub struct MixingParams {
    pub c: BigRational,
    pub epsilon: BigRational,
}

impl MixingParams {
    pub fn new(c: BigRational, epsilon: BigRational) -> Result<Self> {
        if !c.is_positive() {
            return Err(Error::InvalidArgument("c must be > 0".to_string()));
        }
        if !epsilon.is_positive() {
            return Err(Error::InvalidArgument("epsilon must be > 0".to_string()));
        }
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        Ok(MixingParams {
            c: if c > half { half } else { c },
            epsilon,
        })
    }

    pub fn for_step(step: &Measure, epsilon: BigRational) -> Result<Self> {
        Self::new(step.min_atom()?, epsilon)
    }
}

/// ceil(1 + 32 (1-c)^2 / (c^4 eps^2)): after this many steps every
/// coset mass of the walk is within eps of 1/[G:H].
pub fn mixing_bound(params: &MixingParams) -> Result<u64> {
    let c = &params.c;
    let eps = &params.epsilon;
    let one = BigRational::one();
    let n = &one
        + BigRational::from(BigInt::from(32)) * (&one - c) * (&one - c)
            / (c * c * c * c * eps * eps);
    let ceil = n.ceil().to_integer();
    ceil.to_u64().ok_or_else(|| {
        Error::InvalidArgument(format!("mixing bound {ceil} exceeds u64"))
    })
}

/// Conductance floor from irreducibility: Phi(r) >= pi_min * c / r with
/// the uniform stationary measure (pi = 1/[G:H] if the index is finite,
/// pi = 1 under the infinite convention).
pub fn conductance_floor(
    c: &BigRational,
    r: &BigRational,
    index: Option<u64>,
) -> Result<BigRational> {
    if !r.is_positive() {
        return Err(Error::InvalidArgument("r must be > 0".to_string()));
    }
    let pi_min = match index {
        Some(0) => return Err(Error::InvalidArgument("index must be >= 1".to_string())),
        Some(q) => BigRational::new(BigInt::one(), BigInt::from(q)),
        None => BigRational::one(),
    };
    Ok(c * pi_min / r)
}

/// Transition matrix of the induced chain on left cosets: from coset i,
/// one step of the left walk moves to the coset of s * rep_i with
/// probability step(s). Requires finite index and rational weights.
pub fn coset_chain(
    spec: &GroupSpec,
    step: &Measure,
    h: &SubgroupOracle,
    table: &CosetTable,
) -> Result<Vec<Vec<BigRational>>> {
    let q = match table.index {
        SubgroupIndex::Finite(q) => q,
        SubgroupIndex::AtLeast(_) => {
            return Err(Error::Unsupported(
                "coset chain needs a finite-index subgroup".to_string(),
            ))
        }
    };
    let weights = step.rational_weights().ok_or_else(|| {
        Error::ModeMismatch("coset chain needs a rational-mode step".to_string())
    })?;
    let mut p = vec![vec![BigRational::zero(); q]; q];
    for (i, rep) in table.reps.iter().enumerate() {
        for (s, w) in weights {
            let y = spec.mul_unchecked(s, rep);
            let j = coset_of(spec, h, table, &y)?.ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "element escapes the enumerated cosets of {}",
                    h.description()
                ))
            })?;
            p[i][j] += w;
        }
    }
    for row in &p {
        let mass: BigRational = row.iter().sum();
        if !mass.is_one() {
            return Err(Error::InvalidArgument(
                "coset chain rows must sum to 1".to_string(),
            ));
        }
    }
    Ok(p)
}

/// Pushforward of a measure onto the coset space.
pub fn pushforward_to_cosets(
    mu: &Measure,
    h: &SubgroupOracle,
    table: &CosetTable,
) -> Result<Vec<BigRational>> {
    let spec = mu.spec();
    let weights = mu.rational_weights().ok_or_else(|| {
        Error::ModeMismatch("coset pushforward needs rational mode".to_string())
    })?;
    let mut out = vec![BigRational::zero(); table.reps.len()];
    for (g, w) in weights {
        let j = coset_of(spec, h, table, g)?.ok_or_else(|| {
            Error::InvalidArgument("atom escapes the enumerated cosets".to_string())
        })?;
        out[j] += w;
    }
    Ok(out)
}

fn mat_mul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = a.len();
    let mut out = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    out
}

fn mat_pow(p: &[Vec<BigRational>], mut e: u64) -> Vec<Vec<BigRational>> {
    let n = p.len();
    let mut acc: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    let mut base = p.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = mat_mul(&acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mat_mul(&base, &base);
        }
    }
    acc
}

/// Total variation distance of the chain's time-n distribution (started
/// at the subgroup coset) from uniform: (1/2) sum_j |P^n[0][j] - 1/q|.
fn tv_from_uniform(row: &[BigRational]) -> BigRational {
    let q = BigInt::from(row.len());
    let target = BigRational::new(BigInt::one(), q);
    let mut sum = BigRational::zero();
    for v in row {
        sum += (v - &target).abs();
    }
    sum / BigRational::from(BigInt::from(2))
}

/// Direct exact evaluation is done whenever n* is at most this; beyond
/// it the certificate relies on squaring plus TV monotonicity.
pub const DIRECT_POWER_LIMIT: u64 = 1 << 15;

#[derive(Debug, Clone)]
pub struct DirectCheck {
    pub max_dev_at_n_star: Scalar,
    pub max_dev_at_2n_star: Scalar,
}

#[derive(Debug, Clone)]
pub struct UniformityEntry {
    pub subgroup: String,
    pub index: usize,
    pub n_star: u64,
    /// Power 2^k <= n* at which the exact TV distance to uniform first
    /// dropped to eps; deviations at any n >= certified_n (so at n* and
    /// 2n*) are bounded by that TV value, which only shrinks.
    pub certified_n: Option<u64>,
    pub tv_at_certified: Option<Scalar>,
    /// Per probe, |mu^{*certified_n}(xH) - 1/q| exactly.
    pub probe_deviations: Vec<(String, Scalar)>,
    pub direct: Option<DirectCheck>,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct UniformityReport {
    pub c: Scalar,
    pub epsilon: Scalar,
    pub entries: Vec<UniformityEntry>,
    pub pass: bool,
}

/// Verifies |mu^{*n}(xH) - 1/[G:H]| <= eps at n = mixing_bound(c, eps)
/// for each listed subgroup, by exact powering of the induced coset
/// chain. The chain is squared until the exact TV distance from uniform
/// is <= eps; TV to stationarity never increases along the chain, so
/// the bound then holds at every later n, in particular at n* and 2n*.
/// When n* is small the matrix powers at n* and 2n* are also evaluated
/// directly.
pub fn verify_uniform_measurement(
    spec: &GroupSpec,
    step: &Measure,
    subgroups: &[SubgroupOracle],
    epsilon: &BigRational,
    probes: &[Element],
    caps: &Caps,
) -> Result<UniformityReport> {
    if !step.is_symmetric() {
        return Err(Error::InvalidMeasure(
            "uniformity verification needs a symmetric step".to_string(),
        ));
    }
    let me = step.atom(&step.spec().identity());
    if me.to_f64() <= 0.0 {
        return Err(Error::InvalidMeasure(
            "step has no mass at the identity: aperiodicity assumption fails".to_string(),
        ));
    }
    let params = MixingParams::for_step(step, epsilon.clone())?;
    let n_star = mixing_bound(&params)?;
    let mut entries = Vec::new();
    for h in subgroups {
        let table = schreier_cosets(spec, spec.default_genset(), h, caps.coset)?;
        let q = match table.index {
            SubgroupIndex::Finite(q) => q,
            SubgroupIndex::AtLeast(_) => {
                return Err(Error::Unsupported(format!(
                    "subgroup {} has index >= cap; exact chain verification needs finite index",
                    h.description()
                )))
            }
        };
        let p = coset_chain(spec, step, h, &table)?;
        let target = BigRational::new(BigInt::one(), BigInt::from(q));
        let mut certified_n = None;
        let mut tv_at_certified = None;
        let mut probe_devs: Vec<(String, Scalar)> = Vec::new();
        let mut power = 1u64;
        let mut q_mat = p.clone();
        loop {
            let tv = tv_from_uniform(&q_mat[0]);
            if tv <= *epsilon {
                certified_n = Some(power);
                tv_at_certified = Some(Scalar::Rational(tv));
                for x in probes {
                    let j = coset_of(spec, h, &table, x)?.ok_or_else(|| {
                        Error::InvalidArgument("probe escapes the cosets".to_string())
                    })?;
                    probe_devs.push((
                        words::render_element(spec, x),
                        Scalar::Rational((&q_mat[0][j] - &target).abs()),
                    ));
                }
                break;
            }
            if power.saturating_mul(2) > n_star {
                break;
            }
            q_mat = mat_mul(&q_mat, &q_mat);
            power *= 2;
        }
        let direct = if n_star <= DIRECT_POWER_LIMIT {
            let at_n = mat_pow(&p, n_star);
            let at_2n = mat_pow(&p, 2 * n_star);
            let max_dev = |m: &[Vec<BigRational>]| {
                let mut best = BigRational::zero();
                for v in &m[0] {
                    let d = (v - &target).abs();
                    if d > best {
                        best = d;
                    }
                }
                Scalar::Rational(best)
            };
            Some(DirectCheck {
                max_dev_at_n_star: max_dev(&at_n),
                max_dev_at_2n_star: max_dev(&at_2n),
            })
        } else {
            None
        };
        let pass = certified_n.is_some()
            && direct.as_ref().is_none_or(|d| {
                d.max_dev_at_n_star.as_rational().is_some_and(|v| v <= epsilon)
                    && d.max_dev_at_2n_star.as_rational().is_some_and(|v| v <= epsilon)
            });
        entries.push(UniformityEntry {
            subgroup: h.description().to_string(),
            index: q,
            n_star,
            certified_n,
            tv_at_certified,
            probe_deviations: probe_devs,
            direct,
            pass,
        });
    }
    let pass = entries.iter().all(|e| e.pass);
    Ok(UniformityReport {
        c: Scalar::Rational(params.c),
        epsilon: Scalar::Rational(params.epsilon),
        entries,
        pass,
    })
}

/// The first `m` coset representatives from the Schreier BFS; they lie
/// in pairwise distinct cosets and, when the index is at least m, BFS
/// yields them within word length m.
pub fn distinct_coset_reps(
    spec: &GroupSpec,
    gens: &GenSet,
    h: &SubgroupOracle,
    m: usize,
    coset_cap: usize,
) -> Result<Vec<Element>> {
    if m < 1 {
        return Err(Error::InvalidArgument("m must be >= 1".to_string()));
    }
    let table = schreier_cosets(spec, gens, h, coset_cap.max(m))?;
    if let SubgroupIndex::Finite(q) = table.index {
        if q < m {
            return Err(Error::InvalidArgument(format!(
                "subgroup has index {q} < m = {m}"
            )));
        }
    }
    // BFS reaches at least one new coset per layer until closure, so
    // the i-th representative has word length at most i < m.
    for (i, d) in table.depth[..m].iter().enumerate() {
        if *d > m as u64 {
            return Err(Error::InvalidArgument(format!(
                "representative {i} has word length {d} > m = {m}"
            )));
        }
    }
    Ok(table.reps[..m].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::words::lookup_group;

    #[test]
    fn schreier_on_z_mod_2z() {
        let z = GroupSpec::lattice(1);
        let h = SubgroupOracle::even_sum(&z).unwrap();
        let t = schreier_cosets(&z, z.default_genset(), &h, 100).unwrap();
        assert_eq!(t.index, SubgroupIndex::Finite(2));
        assert_eq!(t.reps[0], z.identity());

        let z2 = GroupSpec::lattice(2);
        let h = SubgroupOracle::even_sum(&z2).unwrap();
        let t = schreier_cosets(&z2, z2.default_genset(), &h, 100).unwrap();
        assert_eq!(t.index, SubgroupIndex::Finite(2));
    }

    #[test]
    fn schreier_infinite_index_capped() {
        let g = lookup_group("zxf2").unwrap();
        let h = SubgroupOracle::factor(&g, 1).unwrap();
        let t = schreier_cosets(&g, g.default_genset(), &h, 100).unwrap();
        assert_eq!(t.index, SubgroupIndex::AtLeast(100));
        assert_eq!(t.index.target_mass(), BigRational::zero());
    }

    #[test]
    fn schreier_matches_order_quotients() {
        for (name, sub, expect) in [
            ("z12", "gens:g^3", 3usize),
            ("z12", "gens:g^2", 2),
            ("d4", "center", 4),
            ("q8", "gens:i", 2),
            ("s4", "gens:2134,1324,1243", 1),
        ] {
            let g = lookup_group(name).unwrap();
            let h = SubgroupOracle::parse(&g, sub, 1000).unwrap();
            let t = schreier_cosets(&g, g.default_genset(), &h, 1000).unwrap();
            assert_eq!(t.index, SubgroupIndex::Finite(expect), "{name} {sub}");
        }
    }

    #[test]
    fn coset_mass_examples() {
        let z = GroupSpec::lattice(1);
        let h = SubgroupOracle::even_sum(&z).unwrap();
        let b1 = Measure::ball_uniform(&z, z.default_genset(), 1, 1 << 20).unwrap();
        assert_eq!(
            coset_mass(&b1, &h, &z.identity()).unwrap(),
            Scalar::rational(1, 3)
        );
        assert_eq!(
            coset_mass(&b1, &h, &Element::vector(&[1])).unwrap(),
            Scalar::rational(2, 3)
        );
        let d = Measure::dirac(&z, z.identity()).unwrap();
        assert_eq!(
            coset_mass(&d, &h, &z.identity()).unwrap(),
            Scalar::rational(1, 1)
        );
    }

    #[test]
    fn coset_mass_sums_to_one_over_transversal() {
        let g = lookup_group("z12").unwrap();
        let h = SubgroupOracle::parse(&g, "gens:g^3", 100).unwrap();
        let t = schreier_cosets(&g, g.default_genset(), &h, 100).unwrap();
        let step = Measure::lazy_uniform_step(&g, g.default_genset()).unwrap();
        let mu = step.walk_power(7, 1 << 20).unwrap();
        let mut total = BigRational::zero();
        for rep in &t.reps {
            match coset_mass(&mu, &h, rep).unwrap() {
                Scalar::Rational(r) => total += r,
                _ => unreachable!(),
            }
        }
        assert!(total.is_one());
    }

    #[test]
    fn mixing_bound_values() {
        let half = BigRational::new(1.into(), 2.into());
        let tenth = BigRational::new(1.into(), 10.into());
        let p = MixingParams::new(half.clone(), tenth).unwrap();
        assert_eq!(mixing_bound(&p).unwrap(), 12801);
        let p = MixingParams::new(half.clone(), BigRational::one()).unwrap();
        assert_eq!(mixing_bound(&p).unwrap(), 129);
        // monotone decreasing in eps: shrinking eps raises the bound
        let mut prev = 0u64;
        for eps_den in [1i64, 2, 5, 10] {
            let p = MixingParams::new(
                half.clone(),
                BigRational::new(1.into(), eps_den.into()),
            )
            .unwrap();
            let b = mixing_bound(&p).unwrap();
            assert!(b >= prev);
            prev = b;
        }
        // c > 1/2 clamps to 1/2
        let p = MixingParams::new(BigRational::new(3.into(), 4.into()), BigRational::one())
            .unwrap();
        assert_eq!(p.c, half);
        assert!(MixingParams::new(BigRational::zero(), BigRational::one()).is_err());
    }

    #[test]
    fn conductance_floor_values() {
        let half = BigRational::new(1.into(), 2.into());
        let quarter = BigRational::new(1.into(), 4.into());
        assert_eq!(
            conductance_floor(&half, &BigRational::one(), None).unwrap(),
            half
        );
        assert_eq!(
            conductance_floor(&quarter, &BigRational::one(), None).unwrap(),
            quarter
        );
        assert_eq!(
            conductance_floor(&half, &BigRational::from(BigInt::from(2)), None).unwrap(),
            quarter
        );
        assert_eq!(
            conductance_floor(&half, &BigRational::one(), Some(4)).unwrap(),
            BigRational::new(1.into(), 8.into())
        );
        assert!(conductance_floor(&half, &BigRational::zero(), None).is_err());
    }

    #[test]
    fn chain_pushforward_consistency() {
        // pushing mu^{*n} onto cosets equals powering the coset chain
        let g = lookup_group("z12").unwrap();
        let h = SubgroupOracle::parse(&g, "gens:g^3", 100).unwrap();
        let t = schreier_cosets(&g, g.default_genset(), &h, 100).unwrap();
        let step = Measure::lazy_uniform_step(&g, g.default_genset()).unwrap();
        let p = coset_chain(&g, &step, &h, &t).unwrap();
        for n in 1..=6u64 {
            let mu = step.walk_power(n, 1 << 20).unwrap();
            let direct = pushforward_to_cosets(&mu, &h, &t).unwrap();
            let powered = mat_pow(&p, n);
            assert_eq!(direct, powered[0], "n={n}");
        }
    }

    #[test]
    fn uniformity_verification_small() {
        let g = lookup_group("z12").unwrap();
        let h = SubgroupOracle::parse(&g, "gens:g^3", 100).unwrap();
        let step = Measure::lazy_uniform_step(&g, g.default_genset()).unwrap();
        let eps = BigRational::new(1.into(), 20.into());
        let probes = vec![g.identity(), crate::group::words::parse_element(&g, "g").unwrap()];
        let rep = verify_uniform_measurement(
            &g,
            &step,
            &[h],
            &eps,
            &probes,
            &Caps::default(),
        )
        .unwrap();
        assert!(rep.pass, "{rep:?}");
        assert!(rep.entries[0].certified_n.unwrap() <= rep.entries[0].n_star);
    }

    #[test]
    fn aperiodic_step_required() {
        let z = GroupSpec::lattice(1);
        let sym = Measure::uniform(
            &z,
            &[Element::vector(&[1]), Element::vector(&[-1])],
        )
        .unwrap();
        let h = SubgroupOracle::even_sum(&z).unwrap();
        let eps = BigRational::new(1.into(), 10.into());
        let err = verify_uniform_measurement(
            &z,
            &sym,
            &[h],
            &eps,
            &[z.identity()],
            &Caps::default(),
        )
        .unwrap_err();
        assert!(err.to_string().contains("aperiodicity"), "{err}");
    }

    #[test]
    fn distinct_reps_within_word_length() {
        let z = GroupSpec::lattice(1);
        let h = SubgroupOracle::even_sum(&z).unwrap();
        let reps = distinct_coset_reps(&z, z.default_genset(), &h, 2, 100).unwrap();
        assert_eq!(reps, vec![z.identity(), Element::vector(&[1])]);
        assert!(distinct_coset_reps(&z, z.default_genset(), &h, 3, 100).is_err());

        let z2 = GroupSpec::lattice(2);
        let h = SubgroupOracle::even_sum(&z2).unwrap();
        let reps = distinct_coset_reps(&z2, z2.default_genset(), &h, 2, 100).unwrap();
        assert_eq!(reps[0], z2.identity());
        assert_eq!(reps[1], Element::vector(&[1, 0]));

        let reps = distinct_coset_reps(&z2, z2.default_genset(), &h, 1, 100).unwrap();
        assert_eq!(reps, vec![z2.identity()]);
    }

    #[test]
    fn constant_uniform_sequence_has_zero_deviation() {
        let g = lookup_group("d4").unwrap();
        let all: Vec<Element> = (0..8).map(Element::Table).collect();
        let uniform = Measure::uniform(&g, &all).unwrap();
        let seq = MeasureSeqSpec::Explicit(vec![uniform.clone(), uniform.clone(), uniform]);
        let h = SubgroupOracle::parse(&g, "center", 100).unwrap();
        let probes = vec![g.identity(), Element::Table(1)];
        let curve =
            index_measurement_curve(&g, &seq, &h, &probes, 0..=2, &Caps::default()).unwrap();
        for p in &curve.points {
            for d in &p.deviations {
                assert!(d.as_rational().unwrap().is_zero(), "n={}", p.n);
            }
        }
    }

    #[test]
    fn distinct_reps_word_lengths() {
        // index >= m guarantees m representatives within word length m
        let g = lookup_group("s4").unwrap();
        let h = SubgroupOracle::parse(&g, "gens:2134", 100).unwrap();
        let t = schreier_cosets(&g, g.default_genset(), &h, 100).unwrap();
        assert_eq!(t.index, SubgroupIndex::Finite(12));
        for m in 1..=12usize {
            let reps = distinct_coset_reps(&g, g.default_genset(), &h, m, 100).unwrap();
            assert_eq!(reps.len(), m);
            for (i, _) in reps.iter().enumerate() {
                assert!(t.depth[i] <= m as u64);
            }
        }
    }

    #[test]
    fn index_curve_on_z() {
        let z = GroupSpec::lattice(1);
        let h = SubgroupOracle::even_sum(&z).unwrap();
        let seq = MeasureSeqSpec::BallUniform(z.default_genset().clone());
        let probes = vec![z.identity(), Element::vector(&[1])];
        let curve =
            index_measurement_curve(&z, &seq, &h, &probes, 1..=20, &Caps::default()).unwrap();
        assert_eq!(curve.index, SubgroupIndex::Finite(2));
        for p in &curve.points {
            let bound = BigRational::new(1.into(), (2 * (2 * p.n as i64 + 1)).into());
            for d in &p.deviations {
                assert_eq!(d.as_rational().unwrap(), &bound, "n={}", p.n);
            }
        }
    }
}
