//! Conjugacy-class canonicalization per family and the conjugacy ratio
//! over ball sequences.
//!
//! The family rules (dihedral parity classes, the Heisenberg gcd rule,
//! free-group cyclic reduction) are validated against brute-force
//! conjugator search in the test suites before use.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::dc::{tail_stats, Caps};
use crate::error::{Error, Result};
use crate::group::{ball_layers, freeword, Element, Family, GroupSpec};
use crate::measure::MeasureSeqSpec;
use crate::scalar::Scalar;

/// Canonical conjugacy-class representative, family-tagged. Two
/// elements map to the same id iff they are conjugate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConjClassId {
    /// Minimal element index in the class.
    Table(u16),
    /// Abelian: the element itself.
    Vector(Vec<BigInt>),
    /// Cyclically reduced word, minimal under rotation.
    FreeCyclic(Vec<i16>),
    /// Translation class {t^k, t^-k}, keyed by |k|.
    DihTranslation(BigInt),
    /// Reflection class, keyed by the parity of the offset.
    DihReflection(bool),
    /// Central (0,0,c).
    HeisCentral(BigInt),
    /// (a, b, c mod gcd(a,b)) for (a,b) != (0,0).
    HeisGeneric(BigInt, BigInt, BigInt),
    /// Direct products: componentwise.
    Tuple(Vec<ConjClassId>),
}

pub fn conj_canonical(spec: &GroupSpec, x: &Element) -> Result<ConjClassId> {
    if !spec.contains(x) {
        return Err(Error::FamilyMismatch(format!(
            "element {x:?} not in group {}",
            spec.name()
        )));
    }
    Ok(match (spec.family(), x) {
        (Family::Table(t), Element::Table(i)) => {
            let mut min = *i;
            for g in 0..t.order() as u16 {
                let c = t.mul(t.mul(t.inverse_of(g), *i), g);
                if c < min {
                    min = c;
                }
            }
            ConjClassId::Table(min)
        }
        (Family::Lattice(_), Element::Vector(v)) => ConjClassId::Vector(v.clone()),
        (Family::Free(_), Element::Word(w)) => {
            let (_, core) = freeword::cyclic_reduce(w);
            ConjClassId::FreeCyclic(freeword::min_rotation(&core))
        }
        (Family::DihedralInf, Element::Dih(u)) => {
            if u.1 {
                ConjClassId::DihReflection(u.0.is_odd())
            } else {
                ConjClassId::DihTranslation(u.0.abs())
            }
        }
        (Family::Heisenberg, Element::Heis(u)) => {
            let (a, b, c) = (&u.0, &u.1, &u.2);
            if a.is_zero() && b.is_zero() {
                ConjClassId::HeisCentral(c.clone())
            } else {
                let g = a.gcd(b);
                ConjClassId::HeisGeneric(a.clone(), b.clone(), c.mod_floor(&g))
            }
        }
        (Family::Product(cs), Element::Tuple(xs)) => ConjClassId::Tuple(
            cs.iter()
                .zip(xs)
                .map(|(c, a)| conj_canonical(c, a))
                .collect::<Result<Vec<_>>>()?,
        ),
        _ => unreachable!("contains() was checked"),
    })
}

/// All members of the class when it is finite, `None` for infinite
/// classes (which by convention are never contained in a ball).
pub fn class_members_if_finite(
    spec: &GroupSpec,
    id: &ConjClassId,
) -> Option<Vec<Element>> {
    match (spec.family(), id) {
        (Family::Table(t), ConjClassId::Table(rep)) => {
            let mut out: BTreeSet<u16> = BTreeSet::new();
            for g in 0..t.order() as u16 {
                out.insert(t.mul(t.mul(t.inverse_of(g), *rep), g));
            }
            Some(out.into_iter().map(Element::Table).collect())
        }
        (Family::Lattice(_), ConjClassId::Vector(v)) => {
            Some(vec![Element::Vector(v.clone())])
        }
        (Family::Free(_), ConjClassId::FreeCyclic(w)) => {
            if w.is_empty() {
                Some(vec![Element::Word(Vec::new())])
            } else {
                None
            }
        }
        (Family::DihedralInf, ConjClassId::DihTranslation(k)) => {
            if k.is_zero() {
                Some(vec![Element::dih(0, false)])
            } else {
                Some(vec![
                    Element::Dih(Box::new((k.clone(), false))),
                    Element::Dih(Box::new((-k, false))),
                ])
            }
        }
        (Family::DihedralInf, ConjClassId::DihReflection(_)) => None,
        (Family::Heisenberg, ConjClassId::HeisCentral(c)) => Some(vec![Element::Heis(
            Box::new((BigInt::zero(), BigInt::zero(), c.clone())),
        )]),
        (Family::Heisenberg, ConjClassId::HeisGeneric(..)) => None,
        (Family::Product(cs), ConjClassId::Tuple(ids)) => {
            let mut acc: Vec<Vec<Element>> = vec![Vec::new()];
            for (c, cid) in cs.iter().zip(ids) {
                let members = class_members_if_finite(c, cid)?;
                let mut next = Vec::with_capacity(acc.len() * members.len());
                for prefix in &acc {
                    for m in &members {
                        let mut t = prefix.clone();
                        t.push(m.clone());
                        next.push(t);
                    }
                }
                acc = next;
            }
            Some(acc.into_iter().map(Element::Tuple).collect())
        }
        _ => None,
    }
}

/// Short human-readable label for a class id.
pub fn class_label(spec: &GroupSpec, id: &ConjClassId) -> String {
    match (spec.family(), id) {
        (Family::Table(t), ConjClassId::Table(i)) => format!("class({})", t.name_of(*i)),
        (_, ConjClassId::Vector(v)) => format!(
            "class({})",
            crate::group::words::render_element(spec, &Element::Vector(v.clone()))
        ),
        (_, ConjClassId::FreeCyclic(w)) => {
            if w.is_empty() {
                "class(e)".to_string()
            } else {
                format!(
                    "class({})",
                    crate::group::words::render_element(spec, &Element::Word(w.clone()))
                )
            }
        }
        (_, ConjClassId::DihTranslation(k)) => format!("translation(|{k}|)"),
        (_, ConjClassId::DihReflection(odd)) => {
            format!("reflection({})", if *odd { "odd" } else { "even" })
        }
        (_, ConjClassId::HeisCentral(c)) => format!("central({c})"),
        (_, ConjClassId::HeisGeneric(a, b, c)) => format!("slope({a},{b};{c})"),
        (Family::Product(cs), ConjClassId::Tuple(ids)) => {
            let parts: Vec<String> = cs
                .iter()
                .zip(ids)
                .map(|(c, i)| class_label(c, i))
                .collect();
            format!("({})", parts.join(" | "))
        }
        _ => format!("{id:?}"),
    }
}

#[derive(Debug, Clone)]
pub struct CrPoint {
    pub n: u64,
    pub ball_size: u64,
    pub classes_meeting: u64,
    pub classes_contained: u64,
    pub value: Scalar,
}

#[derive(Debug, Clone)]
pub struct CrReport {
    pub points: Vec<CrPoint>,
    pub tail_window: usize,
    pub tail_max: Scalar,
    pub tail_min: Scalar,
}

/// Conjugacy-ratio series over a uniform-on-ball sequence: per n, the
/// number of classes meeting the ball, the number entirely contained in
/// it (infinite classes never are), and cr = meeting / |ball|.
pub fn cr_sequence(
    spec: &GroupSpec,
    seq: &MeasureSeqSpec,
    range: std::ops::RangeInclusive<u64>,
    tail_window: usize,
    caps: &Caps,
) -> Result<CrReport> {
    if range.is_empty() {
        return Err(Error::InvalidArgument("empty n range".to_string()));
    }
    let mut points = Vec::new();
    match seq {
        MeasureSeqSpec::BallUniform(gens) => {
            seq.require_ball_invariants()?;
            let mut layers = ball_layers(spec, gens, caps.ball_atoms)?;
            let mut ball: HashSet<Element> = HashSet::new();
            let mut seen: BTreeSet<ConjClassId> = BTreeSet::new();
            for n in 0..=*range.end() {
                if let Some(layer) = layers.advance()? {
                    for x in layer {
                        seen.insert(conj_canonical(spec, x)?);
                    }
                    ball.extend(layer.iter().cloned());
                }
                if n >= *range.start() {
                    points.push(cr_point(spec, n, &ball, &seen)?);
                }
            }
        }
        MeasureSeqSpec::Explicit(list) => {
            // explicit sets need not be nested, so each is counted on
            // its own
            for n in range.clone() {
                let mu = list.get(n as usize).ok_or_else(|| {
                    Error::InvalidArgument(format!("explicit sequence has no index {n}"))
                })?;
                let atoms = mu.atoms();
                let first = &atoms.first().expect("measures are nonempty").1;
                if atoms.iter().any(|(_, w)| w != first) {
                    return Err(Error::Unsupported(
                        "conjugacy ratio needs uniform measures".to_string(),
                    ));
                }
                let set: HashSet<Element> = mu.support().into_iter().cloned().collect();
                let mut seen: BTreeSet<ConjClassId> = BTreeSet::new();
                for x in &set {
                    seen.insert(conj_canonical(spec, x)?);
                }
                points.push(cr_point(spec, n, &set, &seen)?);
            }
        }
        MeasureSeqSpec::WalkPower(_) => {
            return Err(Error::Unsupported(
                "conjugacy ratio is defined over uniform set sequences".to_string(),
            ))
        }
    }
    let values: Vec<Scalar> = points.iter().map(|p| p.value.clone()).collect();
    let (tail_max, tail_min) = tail_stats(&values, tail_window);
    Ok(CrReport {
        points,
        tail_window,
        tail_max,
        tail_min,
    })
}

fn cr_point(
    spec: &GroupSpec,
    n: u64,
    set: &HashSet<Element>,
    seen: &BTreeSet<ConjClassId>,
) -> Result<CrPoint> {
    let mut contained = 0u64;
    for id in seen {
        if let Some(members) = class_members_if_finite(spec, id) {
            if members.iter().all(|m| set.contains(m)) {
                contained += 1;
            }
        }
    }
    let meeting = seen.len() as u64;
    let size = set.len() as u64;
    Ok(CrPoint {
        n,
        ball_size: size,
        classes_meeting: meeting,
        classes_contained: contained,
        value: Scalar::Rational(BigRational::new(
            BigInt::from(meeting),
            BigInt::from(size),
        )),
    })
}

/// |{classes meeting the radius-n ball but not contained in it}| / |ball|.
pub fn contained_vs_meeting(
    spec: &GroupSpec,
    seq: &MeasureSeqSpec,
    n: u64,
    caps: &Caps,
) -> Result<BigRational> {
    let rep = cr_sequence(spec, seq, n..=n, 1, caps)?;
    let p = &rep.points[0];
    Ok(BigRational::new(
        BigInt::from(p.classes_meeting - p.classes_contained),
        BigInt::from(p.ball_size),
    ))
}

#[derive(Debug, Clone)]
pub struct CrDcComparison {
    pub n: u64,
    pub cr: Scalar,
    pub dc: Scalar,
    pub diff: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Pointwise check of cr = dc at radius n within a tolerance; both
/// sides exact, only the comparison is numeric.
pub fn verify_cr_eq_dc(
    spec: &GroupSpec,
    seq: &MeasureSeqSpec,
    n: u64,
    tol: f64,
    caps: &Caps,
) -> Result<CrDcComparison> {
    let cr = cr_sequence(spec, seq, n..=n, 1, caps)?.points[0].value.clone();
    let dc = crate::dc::dc_sequence(spec, seq, n..=n, 1, caps)?.points[0]
        .value
        .clone();
    let diff = (cr.to_f64() - dc.to_f64()).abs();
    Ok(CrDcComparison {
        n,
        cr,
        dc,
        diff,
        tol,
        pass: diff <= tol,
    })
}

/// cr lower bound 1/(m^2 d) for a group with an index-m subgroup whose
/// commutators land in a normal subgroup of order d.
pub fn cr_lower_bound(m: u64, d: u64) -> Result<BigRational> {
    crate::dc::neumann_lower_bound(m, d)
}
