//! Finitely supported probability measures on a group: convolution,
//! walk powers, ball-uniform measures, translations and distances.
//!
//! Rational weights are the default and keep every computation exact;
//! float mode exists for very long walks where rational denominators
//! blow up. Support maps are ordered, so iteration (and therefore float
//! accumulation) is deterministic.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::{ball, words, Element, GenSet, GroupSpec};
use crate::scalar::{parse_rational, KahanSum, Scalar, Weight};

pub const DEFAULT_SUPPORT_CAP: usize = 5_000_000;
const FLOAT_MASS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightMode {
    Rational,
    Float,
}

impl std::fmt::Display for WeightMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WeightMode::Rational => write!(f, "rational"),
            WeightMode::Float => write!(f, "float"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Weights {
    Rational(BTreeMap<Element, BigRational>),
    Float(BTreeMap<Element, f64>),
}

/// A finitely supported probability measure with exact-rational or
/// float64 weights. All weights are positive and total mass is 1
/// (exactly in rational mode, within 1e-12 in float mode).
#[derive(Debug, Clone, PartialEq)]
pub struct Measure {
    spec: GroupSpec,
    weights: Weights,
}

impl Measure {
    pub fn dirac(spec: &GroupSpec, x: Element) -> Result<Self> {
        if !spec.contains(&x) {
            return Err(Error::FamilyMismatch(format!(
                "atom {x:?} does not belong to group {}",
                spec.name()
            )));
        }
        let mut m = BTreeMap::new();
        m.insert(x, BigRational::one());
        Ok(Measure {
            spec: spec.clone(),
            weights: Weights::Rational(m),
        })
    }

    /// Uniform measure on a finite list of distinct elements.
    pub fn uniform(spec: &GroupSpec, elems: &[Element]) -> Result<Self> {
        if elems.is_empty() {
            return Err(Error::InvalidMeasure("uniform on empty set".to_string()));
        }
        let w = BigRational::new(BigInt::one(), BigInt::from(elems.len()));
        let mut m = BTreeMap::new();
        for x in elems {
            if !spec.contains(x) {
                return Err(Error::FamilyMismatch(format!(
                    "atom {x:?} does not belong to group {}",
                    spec.name()
                )));
            }
            if m.insert(x.clone(), w.clone()).is_some() {
                return Err(Error::InvalidMeasure(format!("duplicate atom {x:?}")));
            }
        }
        Ok(Measure {
            spec: spec.clone(),
            weights: Weights::Rational(m),
        })
    }

    pub fn from_rational_weights(
        spec: &GroupSpec,
        atoms: Vec<(Element, BigRational)>,
    ) -> Result<Self> {
        let mut m = BTreeMap::new();
        let mut mass = BigRational::zero();
        for (x, w) in atoms {
            if !spec.contains(&x) {
                return Err(Error::FamilyMismatch(format!(
                    "atom {x:?} does not belong to group {}",
                    spec.name()
                )));
            }
            if !w.is_positive() {
                return Err(Error::InvalidMeasure(format!(
                    "non-positive weight {w} at {x:?}"
                )));
            }
            mass += &w;
            if m.insert(x, w).is_some() {
                return Err(Error::InvalidMeasure("duplicate atom".to_string()));
            }
        }
        if !mass.is_one() {
            return Err(Error::InvalidMeasure(format!("total mass {mass} != 1")));
        }
        Ok(Measure {
            spec: spec.clone(),
            weights: Weights::Rational(m),
        })
    }

    pub fn from_float_weights(spec: &GroupSpec, atoms: Vec<(Element, f64)>) -> Result<Self> {
        let mut m = BTreeMap::new();
        for (x, w) in atoms {
            if !spec.contains(&x) {
                return Err(Error::FamilyMismatch(format!(
                    "atom {x:?} does not belong to group {}",
                    spec.name()
                )));
            }
            if w.is_nan() || w <= 0.0 {
                return Err(Error::InvalidMeasure(format!(
                    "non-positive weight {w} at {x:?}"
                )));
            }
            if m.insert(x, w).is_some() {
                return Err(Error::InvalidMeasure("duplicate atom".to_string()));
            }
        }
        let mut mass = KahanSum::new();
        for w in m.values() {
            mass.add(*w);
        }
        if (mass.value() - 1.0).abs() > FLOAT_MASS_TOL {
            return Err(Error::InvalidMeasure(format!(
                "total mass {} != 1",
                mass.value()
            )));
        }
        Ok(Measure {
            spec: spec.clone(),
            weights: Weights::Float(m),
        })
    }

    /// Uniform measure on the radius-`n` ball, exact rational.
    pub fn ball_uniform(spec: &GroupSpec, gens: &GenSet, n: u64, cap: usize) -> Result<Self> {
        let b = ball(spec, gens, n, cap)?;
        Measure::uniform(spec, &b)
    }

    /// Lazy symmetric step: mass 1/2 at the identity and 1/2 spread
    /// uniformly over the non-identity generators. Requires a symmetric
    /// generating set so the step is symmetric.
    pub fn lazy_uniform_step(spec: &GroupSpec, gens: &GenSet) -> Result<Self> {
        if !gens.symmetric() {
            return Err(Error::InvalidGenSet(
                "lazy step needs a symmetric generating set".to_string(),
            ));
        }
        let others: Vec<&Element> = gens
            .elements()
            .iter()
            .filter(|g| !spec.is_identity(g))
            .collect();
        if others.is_empty() {
            return Measure::dirac(spec, spec.identity());
        }
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let each = BigRational::new(BigInt::one(), BigInt::from(2 * others.len()));
        let mut atoms = vec![(spec.identity(), half)];
        for g in others {
            atoms.push(((*g).clone(), each.clone()));
        }
        Measure::from_rational_weights(spec, atoms)
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn mode(&self) -> WeightMode {
        match &self.weights {
            Weights::Rational(_) => WeightMode::Rational,
            Weights::Float(_) => WeightMode::Float,
        }
    }

    pub fn support_len(&self) -> usize {
        match &self.weights {
            Weights::Rational(m) => m.len(),
            Weights::Float(m) => m.len(),
        }
    }

    pub fn support(&self) -> Vec<&Element> {
        match &self.weights {
            Weights::Rational(m) => m.keys().collect(),
            Weights::Float(m) => m.keys().collect(),
        }
    }

    pub fn atoms(&self) -> Vec<(&Element, Scalar)> {
        match &self.weights {
            Weights::Rational(m) => m
                .iter()
                .map(|(x, w)| (x, Scalar::Rational(w.clone())))
                .collect(),
            Weights::Float(m) => m.iter().map(|(x, w)| (x, Scalar::Float(*w))).collect(),
        }
    }

    pub fn atom(&self, x: &Element) -> Scalar {
        match &self.weights {
            Weights::Rational(m) => {
                Scalar::Rational(m.get(x).cloned().unwrap_or_else(BigRational::zero))
            }
            Weights::Float(m) => Scalar::Float(m.get(x).copied().unwrap_or(0.0)),
        }
    }

    pub fn total_mass(&self) -> Scalar {
        match &self.weights {
            Weights::Rational(m) => {
                let mut s = BigRational::zero();
                for w in m.values() {
                    s += w;
                }
                Scalar::Rational(s)
            }
            Weights::Float(m) => {
                let mut s = KahanSum::new();
                for w in m.values() {
                    s.add(*w);
                }
                Scalar::Float(s.value())
            }
        }
    }

    /// Exact-to-float conversion for long-walk computations.
    pub fn to_float(&self) -> Measure {
        match &self.weights {
            Weights::Rational(m) => Measure {
                spec: self.spec.clone(),
                weights: Weights::Float(
                    m.iter()
                        .map(|(x, w)| (x.clone(), w.to_f64().unwrap_or(f64::NAN)))
                        .collect(),
                ),
            },
            Weights::Float(_) => self.clone(),
        }
    }

    fn check_compatible(&self, other: &Measure) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::FamilyMismatch(format!(
                "measures live on different groups ({} vs {})",
                self.spec.name(),
                other.spec.name()
            )));
        }
        if self.mode() != other.mode() {
            return Err(Error::ModeMismatch(format!(
                "{} vs {}",
                self.mode(),
                other.mode()
            )));
        }
        Ok(())
    }

    /// Convolution (mu * nu)(z) = sum_x mu(x) nu(x^-1 z).
    pub fn convolve(&self, other: &Measure, support_cap: usize) -> Result<Measure> {
        self.check_compatible(other)?;
        let spec = &self.spec;
        let weights = match (&self.weights, &other.weights) {
            (Weights::Rational(a), Weights::Rational(b)) => {
                Weights::Rational(convolve_maps(spec, a, b, support_cap)?)
            }
            (Weights::Float(a), Weights::Float(b)) => {
                Weights::Float(convolve_maps(spec, a, b, support_cap)?)
            }
            _ => unreachable!("mode checked above"),
        };
        Ok(Measure {
            spec: spec.clone(),
            weights,
        })
    }

    /// n-fold convolution power by binary powering. On a support-cap
    /// overrun the error carries the largest fully computed power.
    pub fn walk_power(&self, n: u64, support_cap: usize) -> Result<Measure> {
        if n == 0 {
            return Measure::dirac(&self.spec, self.spec.identity());
        }
        let mut acc: Option<(Measure, u64)> = None;
        let mut base = self.clone();
        let mut base_pow = 1u64;
        let mut remaining = n;
        let completed = |acc: &Option<(Measure, u64)>, base_pow: u64| -> u64 {
            acc.as_ref().map(|(_, p)| *p).unwrap_or(0).max(base_pow)
        };
        loop {
            if remaining & 1 == 1 {
                let next = match &acc {
                    None => base.clone(),
                    Some((m, _)) => m.convolve(&base, support_cap).map_err(|e| {
                        attach_power(e, completed(&acc, base_pow))
                    })?,
                };
                let pow = acc.as_ref().map(|(_, p)| *p).unwrap_or(0) + base_pow;
                acc = Some((next, pow));
            }
            remaining >>= 1;
            if remaining == 0 {
                break;
            }
            base = base
                .convolve(&base, support_cap)
                .map_err(|e| attach_power(e, completed(&acc, base_pow)))?;
            base_pow *= 2;
        }
        Ok(acc.expect("n >= 1").0)
    }

    /// Left translation: (x . mu)(A) = mu(x^-1 A), i.e. the atom at g
    /// moves to x*g.
    pub fn translate(&self, x: &Element) -> Result<Measure> {
        if !self.spec.contains(x) {
            return Err(Error::FamilyMismatch(format!(
                "translate by foreign element {x:?}"
            )));
        }
        let spec = self.spec.clone();
        let weights = match &self.weights {
            Weights::Rational(m) => Weights::Rational(
                m.iter()
                    .map(|(g, w)| (spec.mul_unchecked(x, g), w.clone()))
                    .collect(),
            ),
            Weights::Float(m) => Weights::Float(
                m.iter()
                    .map(|(g, w)| (spec.mul_unchecked(x, g), *w))
                    .collect(),
            ),
        };
        Ok(Measure { spec, weights })
    }

    /// Pushforward under an element map (must be injective on the
    /// support; duplicate images are rejected).
    pub fn pushforward(&self, f: impl Fn(&Element) -> Element) -> Result<Measure> {
        let spec = self.spec.clone();
        match &self.weights {
            Weights::Rational(m) => {
                let mut out = BTreeMap::new();
                for (g, w) in m {
                    if out.insert(f(g), w.clone()).is_some() {
                        return Err(Error::InvalidMeasure(
                            "pushforward map is not injective on the support".to_string(),
                        ));
                    }
                }
                Ok(Measure {
                    spec,
                    weights: Weights::Rational(out),
                })
            }
            Weights::Float(m) => {
                let mut out = BTreeMap::new();
                for (g, w) in m {
                    if out.insert(f(g), *w).is_some() {
                        return Err(Error::InvalidMeasure(
                            "pushforward map is not injective on the support".to_string(),
                        ));
                    }
                }
                Ok(Measure {
                    spec,
                    weights: Weights::Float(out),
                })
            }
        }
    }

    /// L1 distance over the union of supports.
    pub fn l1_distance(&self, other: &Measure) -> Result<Scalar> {
        self.check_compatible(other)?;
        match (&self.weights, &other.weights) {
            (Weights::Rational(a), Weights::Rational(b)) => {
                let mut sum = BigRational::zero();
                for (x, w) in a {
                    let v = b.get(x).cloned().unwrap_or_else(BigRational::zero);
                    sum += (w - v).abs();
                }
                for (x, v) in b {
                    if !a.contains_key(x) {
                        sum += v.abs();
                    }
                }
                Ok(Scalar::Rational(sum))
            }
            (Weights::Float(a), Weights::Float(b)) => {
                let mut sum = KahanSum::new();
                for (x, w) in a {
                    let v = b.get(x).copied().unwrap_or(0.0);
                    sum.add((w - v).abs());
                }
                for (x, v) in b {
                    if !a.contains_key(x) {
                        sum.add(v.abs());
                    }
                }
                Ok(Scalar::Float(sum.value()))
            }
            _ => unreachable!("mode checked above"),
        }
    }

    /// mu(x) = mu(x^-1) for every atom. Float mode uses a 1e-12
    /// tolerance since accumulation orders differ between an atom and
    /// its inverse.
    pub fn is_symmetric(&self) -> bool {
        match &self.weights {
            Weights::Rational(m) => m.iter().all(|(x, w)| {
                m.get(&self.spec.inv_unchecked(x)).is_some_and(|v| v == w)
            }),
            Weights::Float(m) => m.iter().all(|(x, w)| {
                m.get(&self.spec.inv_unchecked(x))
                    .is_some_and(|v| (v - w).abs() <= FLOAT_MASS_TOL)
            }),
        }
    }

    /// The minimum atom mass (the `c` of the mixing bound).
    pub fn min_atom(&self) -> Result<BigRational> {
        match &self.weights {
            Weights::Rational(m) => m
                .values()
                .min()
                .cloned()
                .ok_or_else(|| Error::InvalidMeasure("empty measure".to_string())),
            Weights::Float(_) => Err(Error::ModeMismatch(
                "min_atom needs a rational-mode measure".to_string(),
            )),
        }
    }

    /// i.i.d. draws by inverse CDF over the fixed support ordering;
    /// identical seed gives identical output.
    pub fn sample(&self, seed: u64, count: usize) -> Vec<Element> {
        let cum: Vec<(f64, &Element)> = {
            let mut acc = 0.0;
            self.atoms()
                .into_iter()
                .map(|(x, w)| {
                    acc += w.to_f64();
                    (acc, x)
                })
                .collect()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            let u: f64 = rng.random();
            let idx = cum.partition_point(|(c, _)| *c <= u).min(cum.len() - 1);
            out.push(cum[idx].1.clone());
        }
        out
    }

    /// Line-oriented text form: a header naming the group spec and the
    /// weight mode, then one `word TAB weight` line per atom.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("# degcom-measure v1\n");
        out.push_str(&format!("# group\t{}\n", self.spec.name()));
        out.push_str(&format!("# mode\t{}\n", self.mode()));
        for (x, w) in self.atoms() {
            let word = words::render_element(&self.spec, x);
            match w {
                Scalar::Rational(r) => {
                    out.push_str(&format!("{word}\t{}/{}\n", r.numer(), r.denom()))
                }
                Scalar::Float(f) => out.push_str(&format!("{word}\t{f:e}\n")),
            }
        }
        out
    }

    /// Parses the `to_text` format; the group is resolved by name
    /// through the registry.
    pub fn from_text(input: &str) -> Result<Measure> {
        let mut group: Option<GroupSpec> = None;
        let mut mode = WeightMode::Rational;
        let mut rational_atoms = Vec::new();
        let mut float_atoms = Vec::new();
        for line in input.lines() {
            let line = line.trim_end();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let mut parts = rest.trim().splitn(2, '\t');
                match (parts.next(), parts.next()) {
                    (Some("group"), Some(name)) => group = Some(words::lookup_group(name)?),
                    (Some("mode"), Some("float")) => mode = WeightMode::Float,
                    (Some("mode"), Some("rational")) => mode = WeightMode::Rational,
                    _ => {}
                }
                continue;
            }
            let spec = group
                .as_ref()
                .ok_or_else(|| Error::Parse("measure file lacks a group header".to_string()))?;
            let (word, weight) = line
                .split_once('\t')
                .ok_or_else(|| Error::Parse(format!("bad measure line {line:?}")))?;
            let x = words::parse_element(spec, word)?;
            match mode {
                WeightMode::Rational => rational_atoms.push((x, parse_rational(weight)?)),
                WeightMode::Float => float_atoms.push((
                    x,
                    weight
                        .parse::<f64>()
                        .map_err(|_| Error::Parse(format!("bad weight {weight:?}")))?,
                )),
            }
        }
        let spec =
            group.ok_or_else(|| Error::Parse("measure file lacks a group header".to_string()))?;
        match mode {
            WeightMode::Rational => Measure::from_rational_weights(&spec, rational_atoms),
            WeightMode::Float => Measure::from_float_weights(&spec, float_atoms),
        }
    }

    pub(crate) fn rational_weights(&self) -> Option<&BTreeMap<Element, BigRational>> {
        match &self.weights {
            Weights::Rational(m) => Some(m),
            Weights::Float(_) => None,
        }
    }

    pub(crate) fn float_weights(&self) -> Option<&BTreeMap<Element, f64>> {
        match &self.weights {
            Weights::Float(m) => Some(m),
            Weights::Rational(_) => None,
        }
    }
}

fn attach_power(e: Error, completed: u64) -> Error {
    match e {
        Error::Resource(mut r) => {
            r.what = "walk support".to_string();
            r.last_completed = Some(completed);
            Error::Resource(r)
        }
        other => other,
    }
}

fn convolve_maps<W: Weight>(
    spec: &GroupSpec,
    a: &BTreeMap<Element, W>,
    b: &BTreeMap<Element, W>,
    support_cap: usize,
) -> Result<BTreeMap<Element, W>> {
    let mut out: BTreeMap<Element, W> = BTreeMap::new();
    for (x, wx) in a {
        for (y, wy) in b {
            let z = spec.mul_unchecked(x, y);
            let prod = wx.w_mul(wy);
            match out.get_mut(&z) {
                Some(acc) => *acc = acc.w_add(&prod),
                None => {
                    if out.len() >= support_cap {
                        return Err(Error::resource("support atom", support_cap as u64, None));
                    }
                    out.insert(z, prod);
                }
            }
        }
    }
    Ok(out)
}

/// A sequence of measures: uniform-on-ball, random-walk powers, or an
/// explicit list.
#[derive(Debug, Clone)]
pub enum MeasureSeqSpec {
    BallUniform(GenSet),
    WalkPower(Measure),
    Explicit(Vec<Measure>),
}

impl MeasureSeqSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            MeasureSeqSpec::BallUniform(_) => "ball",
            MeasureSeqSpec::WalkPower(_) => "walk",
            MeasureSeqSpec::Explicit(_) => "explicit",
        }
    }

    /// Ball sequences must use a symmetric generating set containing
    /// the identity (so S^n is a nested ball sequence).
    pub fn require_ball_invariants(&self) -> Result<()> {
        if let MeasureSeqSpec::BallUniform(gens) = self {
            if !gens.symmetric() || !gens.contains_identity() {
                return Err(Error::InvalidGenSet(
                    "ball sequence needs a symmetric generating set containing the identity"
                        .to_string(),
                ));
            }
        }
        Ok(())
    }

    /// Steps used for uniformity claims must be symmetric and lazy
    /// (mu(e) > 0 is the aperiodicity assumption).
    pub fn require_walk_uniformity(&self) -> Result<()> {
        if let MeasureSeqSpec::WalkPower(step) = self {
            if !step.is_symmetric() {
                return Err(Error::InvalidMeasure(
                    "walk step must be symmetric".to_string(),
                ));
            }
            let me = step.atom(&step.spec().identity());
            if me.to_f64() <= 0.0 {
                return Err(Error::InvalidMeasure(
                    "walk step needs mu(e) > 0 (aperiodicity)".to_string(),
                ));
            }
        }
        Ok(())
    }
}

/// Sequential walk powers mu^{*1}, mu^{*2}, ...; each step is one
/// convolution with the base step.
pub struct WalkSeq {
    step: Measure,
    current: Measure,
    power: u64,
    cap: usize,
}

impl WalkSeq {
    pub fn new(step: Measure, cap: usize) -> Self {
        let current = step.clone();
        WalkSeq {
            step,
            current,
            power: 1,
            cap,
        }
    }

    pub fn power(&self) -> u64 {
        self.power
    }

    pub fn current(&self) -> &Measure {
        &self.current
    }

    /// Advances to the next power.
    pub fn advance(&mut self) -> Result<()> {
        self.current = self
            .current
            .convolve(&self.step, self.cap)
            .map_err(|e| attach_power(e, self.power))?;
        self.power += 1;
        Ok(())
    }

    pub fn advance_to(&mut self, n: u64) -> Result<()> {
        while self.power < n {
            self.advance()?;
        }
        Ok(())
    }
}

/// The almost-invariance defects ||x.mu_n - mu_n||_1 for n in the range.
pub fn almost_invariance_defect(
    spec: &GroupSpec,
    seq: &MeasureSeqSpec,
    x: &Element,
    range: std::ops::RangeInclusive<u64>,
    support_cap: usize,
) -> Result<Vec<(u64, Scalar)>> {
    if !spec.contains(x) {
        return Err(Error::FamilyMismatch(format!("probe {x:?} not in group")));
    }
    let mut out = Vec::new();
    match seq {
        MeasureSeqSpec::BallUniform(gens) => {
            seq.require_ball_invariants()?;
            let mut layers = crate::group::ball_layers(spec, gens, support_cap)?;
            let mut ball: std::collections::HashSet<Element> = std::collections::HashSet::new();
            for n in 0..=*range.end() {
                if let Some(layer) = layers.advance()? {
                    ball.extend(layer.iter().cloned());
                }
                if n >= *range.start() {
                    let inside = ball
                        .iter()
                        .filter(|g| ball.contains(&spec.mul_unchecked(x, g)))
                        .count();
                    let b = ball.len() as i64;
                    out.push((
                        n,
                        Scalar::Rational(BigRational::new(
                            BigInt::from(2 * (b - inside as i64)),
                            BigInt::from(b),
                        )),
                    ));
                }
            }
        }
        MeasureSeqSpec::WalkPower(step) => {
            if *range.start() == 0 {
                return Err(Error::InvalidArgument(
                    "walk sequences start at n = 1".to_string(),
                ));
            }
            let mut walk = WalkSeq::new(step.clone(), support_cap);
            walk.advance_to(*range.start())?;
            for n in *range.start()..=*range.end() {
                walk.advance_to(n)?;
                let mu = walk.current();
                out.push((n, mu.translate(x)?.l1_distance(mu)?));
            }
        }
        MeasureSeqSpec::Explicit(list) => {
            for n in range {
                let mu = list.get(n as usize).ok_or_else(|| {
                    Error::InvalidArgument(format!("explicit sequence has no index {n}"))
                })?;
                out.push((n, mu.translate(x)?.l1_distance(mu)?));
            }
        }
    }
    Ok(out)
}
