//! Group families, canonical element forms and generating sets.
//!
//! Every family works on a canonical form that is unique per group
//! element, so equality and hashing are syntactic. Coordinates are
//! arbitrary-precision: correctness never depends on the radius.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

pub mod ball;
pub mod freeword;
pub mod table;
pub mod words;

pub use ball::{ball, ball_layers, growth_ratio, BallLayers};
pub use table::{build_catalog, FiniteTable};

/// Canonical element form, tagged by family.
///
/// - `Table`: index into a finite multiplication table
/// - `Vector`: Z^d coordinate vector
/// - `Heis`: Heisenberg triple (a,b,c), law (a,b,c)(a',b',c') = (a+a', b+b', c+c'+a*b')
/// - `Word`: freely reduced free-group word
/// - `Dih`: infinite dihedral (n, flip), law (n,f)(m,g) = (n+(-1)^f m, f xor g)
/// - `Tuple`: direct product, componentwise
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    Table(u16),
    Vector(Vec<BigInt>),
    Heis(Box<(BigInt, BigInt, BigInt)>),
    Word(Vec<i16>),
    Dih(Box<(BigInt, bool)>),
    Tuple(Vec<Element>),
}

impl Element {
    pub fn heis(a: i64, b: i64, c: i64) -> Self {
        Element::Heis(Box::new((BigInt::from(a), BigInt::from(b), BigInt::from(c))))
    }

    pub fn vector(coords: &[i64]) -> Self {
        Element::Vector(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn dih(n: i64, flip: bool) -> Self {
        Element::Dih(Box::new((BigInt::from(n), flip)))
    }

    pub fn word(letters: &[i16]) -> Self {
        Element::Word(freeword::reduce(letters.iter().copied()))
    }
}

#[derive(Debug, Clone)]
pub enum Family {
    /// Finite group given by its multiplication table.
    Table(Arc<FiniteTable>),
    /// Z^d.
    Lattice(usize),
    /// Discrete Heisenberg group over Z.
    Heisenberg,
    /// Free group of the given rank.
    Free(usize),
    /// Infinite dihedral group.
    DihedralInf,
    /// Direct product of component groups.
    Product(Vec<GroupSpec>),
}

impl PartialEq for Family {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Family::Table(a), Family::Table(b)) => Arc::ptr_eq(a, b) || a == b,
            (Family::Lattice(a), Family::Lattice(b)) => a == b,
            (Family::Heisenberg, Family::Heisenberg) => true,
            (Family::Free(a), Family::Free(b)) => a == b,
            (Family::DihedralInf, Family::DihedralInf) => true,
            (Family::Product(a), Family::Product(b)) => {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.family == y.family)
            }
            _ => false,
        }
    }
}

/// A concrete group: family, parameters and a default generating set.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupSpec {
    name: String,
    family: Family,
    genset: GenSet,
}

impl GroupSpec {
    pub fn lattice(d: usize) -> Self {
        let family = Family::Lattice(d);
        let mut gens = vec![identity_of(&family)];
        for i in 0..d {
            let mut up = vec![BigInt::zero(); d];
            up[i] = BigInt::from(1);
            let mut down = vec![BigInt::zero(); d];
            down[i] = BigInt::from(-1);
            gens.push(Element::Vector(up));
            gens.push(Element::Vector(down));
        }
        let name = if d == 1 { "z".to_string() } else { format!("z^{d}") };
        Self::assemble(name, family, gens)
    }

    pub fn heisenberg() -> Self {
        let family = Family::Heisenberg;
        let gens = vec![
            identity_of(&family),
            Element::heis(1, 0, 0),
            Element::heis(-1, 0, 0),
            Element::heis(0, 1, 0),
            Element::heis(0, -1, 0),
            Element::heis(0, 0, 1),
            Element::heis(0, 0, -1),
        ];
        Self::assemble("heisenberg".to_string(), family, gens)
    }

    pub fn free(rank: usize) -> Self {
        let family = Family::Free(rank);
        let mut gens = vec![identity_of(&family)];
        for k in 1..=rank {
            gens.push(Element::Word(vec![k as i16]));
            gens.push(Element::Word(vec![-(k as i16)]));
        }
        Self::assemble(format!("f{rank}"), family, gens)
    }

    pub fn dihedral_inf() -> Self {
        let family = Family::DihedralInf;
        let gens = vec![
            identity_of(&family),
            Element::dih(1, false),
            Element::dih(-1, false),
            Element::dih(0, true),
        ];
        Self::assemble("dinf".to_string(), family, gens)
    }

    pub fn from_table(name: &str, table: Arc<FiniteTable>) -> Self {
        let mut gens = vec![Element::Table(table.identity())];
        for &g in table.default_generators() {
            if !gens.contains(&Element::Table(g)) {
                gens.push(Element::Table(g));
            }
            let inv = table.inverse_of(g);
            if !gens.contains(&Element::Table(inv)) {
                gens.push(Element::Table(inv));
            }
        }
        Self::assemble(name.to_string(), Family::Table(table), gens)
    }

    pub fn product(name: &str, components: Vec<GroupSpec>) -> Self {
        let ids: Vec<Element> = components.iter().map(|c| c.identity()).collect();
        let mut gens = vec![Element::Tuple(ids.clone())];
        for (i, c) in components.iter().enumerate() {
            for g in c.genset.elements() {
                if c.is_identity(g) {
                    continue;
                }
                let mut t = ids.clone();
                t[i] = g.clone();
                gens.push(Element::Tuple(t));
            }
        }
        Self::assemble(name.to_string(), Family::Product(components), gens)
    }

    fn assemble(name: String, family: Family, gens: Vec<Element>) -> Self {
        let mut spec = GroupSpec {
            name,
            family,
            genset: GenSet {
                elements: Vec::new(),
                symmetric: true,
                contains_identity: false,
            },
        };
        spec.genset = GenSet::new(&spec, gens).expect("default generating set is valid");
        spec
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn default_genset(&self) -> &GenSet {
        &self.genset
    }

    /// Replaces the default generating set (e.g. from a config document).
    pub fn with_genset(mut self, gens: GenSet) -> Self {
        self.genset = gens;
        self
    }

    pub fn table(&self) -> Option<&Arc<FiniteTable>> {
        match &self.family {
            Family::Table(t) => Some(t),
            _ => None,
        }
    }

    pub fn identity(&self) -> Element {
        identity_of(&self.family)
    }

    pub fn is_identity(&self, x: &Element) -> bool {
        *x == self.identity()
    }

    pub fn order(&self) -> Option<u64> {
        match &self.family {
            Family::Table(t) => Some(t.order() as u64),
            Family::Lattice(0) | Family::Free(0) => Some(1),
            Family::Product(cs) => cs.iter().map(|c| c.order()).product::<Option<u64>>(),
            _ => None,
        }
    }

    pub fn is_abelian(&self) -> bool {
        match &self.family {
            Family::Table(t) => t.is_abelian(),
            Family::Lattice(_) => true,
            Family::Heisenberg => false,
            Family::Free(k) => *k <= 1,
            Family::DihedralInf => false,
            Family::Product(cs) => cs.iter().all(|c| c.is_abelian()),
        }
    }

    /// Checks that `x` is a well-formed canonical element of this group.
    pub fn contains(&self, x: &Element) -> bool {
        match (&self.family, x) {
            (Family::Table(t), Element::Table(i)) => (*i as usize) < t.order(),
            (Family::Lattice(d), Element::Vector(v)) => v.len() == *d,
            (Family::Heisenberg, Element::Heis(_)) => true,
            (Family::Free(k), Element::Word(w)) => {
                freeword::is_reduced(w) && w.iter().all(|&l| l.unsigned_abs() as usize <= *k)
            }
            (Family::DihedralInf, Element::Dih(_)) => true,
            (Family::Product(cs), Element::Tuple(xs)) => {
                cs.len() == xs.len() && cs.iter().zip(xs).all(|(c, x)| c.contains(x))
            }
            _ => false,
        }
    }

    fn check(&self, x: &Element) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::FamilyMismatch(format!(
                "element {x:?} does not belong to group {}",
                self.name
            )))
        }
    }

    pub fn multiply(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul_unchecked(x, y))
    }

    pub(crate) fn mul_unchecked(&self, x: &Element, y: &Element) -> Element {
        match (&self.family, x, y) {
            (Family::Table(t), Element::Table(i), Element::Table(j)) => {
                Element::Table(t.mul(*i, *j))
            }
            (Family::Lattice(_), Element::Vector(a), Element::Vector(b)) => {
                Element::Vector(a.iter().zip(b).map(|(u, v)| u + v).collect())
            }
            (Family::Heisenberg, Element::Heis(u), Element::Heis(v)) => {
                let (a, b, c) = (&u.0, &u.1, &u.2);
                let (a2, b2, c2) = (&v.0, &v.1, &v.2);
                Element::Heis(Box::new((a + a2, b + b2, c + c2 + a * b2)))
            }
            (Family::Free(_), Element::Word(a), Element::Word(b)) => {
                Element::Word(freeword::mul(a, b))
            }
            (Family::DihedralInf, Element::Dih(u), Element::Dih(v)) => {
                let (n, f) = (&u.0, u.1);
                let (m, g) = (&v.0, v.1);
                let shift = if f { n - m } else { n + m };
                Element::Dih(Box::new((shift, f ^ g)))
            }
            (Family::Product(cs), Element::Tuple(xs), Element::Tuple(ys)) => Element::Tuple(
                cs.iter()
                    .zip(xs.iter().zip(ys))
                    .map(|(c, (a, b))| c.mul_unchecked(a, b))
                    .collect(),
            ),
            _ => unreachable!("mul_unchecked called on mismatched forms"),
        }
    }

    pub fn inverse(&self, x: &Element) -> Result<Element> {
        self.check(x)?;
        Ok(self.inv_unchecked(x))
    }

    pub(crate) fn inv_unchecked(&self, x: &Element) -> Element {
        match (&self.family, x) {
            (Family::Table(t), Element::Table(i)) => Element::Table(t.inverse_of(*i)),
            (Family::Lattice(_), Element::Vector(v)) => {
                Element::Vector(v.iter().map(|c| -c).collect())
            }
            (Family::Heisenberg, Element::Heis(u)) => {
                let (a, b, c) = (&u.0, &u.1, &u.2);
                Element::Heis(Box::new((-a, -b, a * b - c)))
            }
            (Family::Free(_), Element::Word(w)) => Element::Word(freeword::inverse(w)),
            (Family::DihedralInf, Element::Dih(u)) => {
                let (n, f) = (&u.0, u.1);
                Element::Dih(Box::new((if f { n.clone() } else { -n }, f)))
            }
            (Family::Product(cs), Element::Tuple(xs)) => Element::Tuple(
                cs.iter()
                    .zip(xs)
                    .map(|(c, a)| c.inv_unchecked(a))
                    .collect(),
            ),
            _ => unreachable!("inv_unchecked called on mismatched form"),
        }
    }

    pub fn commute(&self, x: &Element, y: &Element) -> Result<bool> {
        Ok(self.multiply(x, y)? == self.mul_unchecked(y, x))
    }

    /// Conjugate of `x` by `g`: `g^-1 x g`.
    pub fn conjugate(&self, g: &Element, x: &Element) -> Result<Element> {
        self.check(g)?;
        self.check(x)?;
        let gi = self.inv_unchecked(g);
        Ok(self.mul_unchecked(&self.mul_unchecked(&gi, x), g))
    }

    /// Integer power by repeated squaring.
    pub fn power(&self, x: &Element, k: i64) -> Result<Element> {
        self.check(x)?;
        let mut base = if k < 0 { self.inv_unchecked(x) } else { x.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_unchecked(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul_unchecked(&base, &base);
            }
        }
        Ok(acc)
    }

    /// Membership in the centre.
    pub fn is_central(&self, x: &Element) -> Result<bool> {
        self.check(x)?;
        Ok(match (&self.family, x) {
            (Family::Table(t), Element::Table(i)) => t.center().contains(i),
            (Family::Lattice(_), _) => true,
            (Family::Heisenberg, Element::Heis(u)) => u.0.is_zero() && u.1.is_zero(),
            (Family::Free(k), Element::Word(w)) => *k <= 1 || w.is_empty(),
            (Family::DihedralInf, Element::Dih(u)) => u.0.is_zero() && !u.1,
            (Family::Product(cs), Element::Tuple(xs)) => cs
                .iter()
                .zip(xs)
                .all(|(c, a)| c.is_central(a).unwrap_or(false)),
            _ => unreachable!(),
        })
    }
}

/// Boolean slope test for the Heisenberg fast path: non-central
/// (a,b,c), (a',b',c') commute iff a*b' = a'*b.
pub(crate) fn heis_primitive_direction(a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
    let g = a.gcd(b);
    debug_assert!(!g.is_zero());
    let (mut pa, mut pb) = (a / &g, b / &g);
    if pa.is_negative() || (pa.is_zero() && pb.is_negative()) {
        pa = -pa;
        pb = -pb;
    }
    (pa, pb)
}

fn identity_of(family: &Family) -> Element {
    match family {
        Family::Table(t) => Element::Table(t.identity()),
        Family::Lattice(d) => Element::Vector(vec![BigInt::zero(); *d]),
        Family::Heisenberg => Element::heis(0, 0, 0),
        Family::Free(_) => Element::Word(Vec::new()),
        Family::DihedralInf => Element::dih(0, false),
        Family::Product(cs) => Element::Tuple(cs.iter().map(|c| c.identity()).collect()),
    }
}

/// Finite generating set with computed symmetry/identity flags.
#[derive(Debug, Clone, PartialEq)]
pub struct GenSet {
    elements: Vec<Element>,
    symmetric: bool,
    contains_identity: bool,
}

impl GenSet {
    /// Validates membership and rejects duplicate canonical forms; the
    /// `symmetric` and `contains_identity` flags are computed, never
    /// declared. Whether the set actually generates is a caller contract.
    pub fn new(spec: &GroupSpec, elements: Vec<Element>) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for e in &elements {
            if !spec.contains(e) {
                return Err(Error::FamilyMismatch(format!(
                    "generator {e:?} does not belong to group {}",
                    spec.name()
                )));
            }
            if !seen.insert(e.clone()) {
                return Err(Error::InvalidGenSet(format!(
                    "duplicate generator canonical form {e:?}"
                )));
            }
        }
        let contains_identity = seen.contains(&spec.identity());
        let symmetric = elements
            .iter()
            .all(|e| seen.contains(&spec.inv_unchecked(e)));
        Ok(GenSet {
            elements,
            symmetric,
            contains_identity,
        })
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn contains_identity(&self) -> bool {
        self.contains_identity
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heisenberg_law() {
        let g = GroupSpec::heisenberg();
        let x = Element::heis(1, 0, 0);
        let y = Element::heis(0, 1, 0);
        assert_eq!(g.multiply(&x, &y).unwrap(), Element::heis(1, 1, 1));
        assert_eq!(g.multiply(&y, &x).unwrap(), Element::heis(1, 1, 0));
        assert!(!g.commute(&x, &y).unwrap());
        // commutator [x,y] is the central generator
        let c = g
            .multiply(
                &g.multiply(&x, &y).unwrap(),
                &g.multiply(&g.inverse(&x).unwrap(), &g.inverse(&y).unwrap())
                    .unwrap(),
            )
            .unwrap();
        assert_eq!(c, Element::heis(0, 0, 1));
    }

    #[test]
    fn dihedral_law() {
        let g = GroupSpec::dihedral_inf();
        let s = Element::dih(1, true);
        assert_eq!(g.multiply(&s, &s).unwrap(), g.identity());
        let t = Element::dih(1, false);
        let r = Element::dih(0, true);
        // r t r = t^-1
        let c = g.conjugate(&r, &t).unwrap();
        assert_eq!(c, Element::dih(-1, false));
    }

    #[test]
    fn free_reduction() {
        let g = GroupSpec::free(2);
        let x = Element::word(&[1]);
        let xi = g.inverse(&x).unwrap();
        let y = Element::word(&[2]);
        let p = g
            .multiply(&g.multiply(&x, &xi).unwrap(), &y)
            .unwrap();
        assert_eq!(p, y);
        assert_eq!(g.conjugate(&x, &y).unwrap(), Element::word(&[-1, 2, 1]));
    }

    #[test]
    fn product_componentwise() {
        let g = GroupSpec::product("zxf2", vec![GroupSpec::lattice(1), GroupSpec::free(2)]);
        let a = Element::Tuple(vec![Element::vector(&[1]), Element::word(&[1])]);
        let b = Element::Tuple(vec![Element::vector(&[2]), Element::word(&[-1])]);
        let p = g.multiply(&a, &b).unwrap();
        assert_eq!(
            p,
            Element::Tuple(vec![Element::vector(&[3]), Element::word(&[])])
        );
        assert_eq!(g.default_genset().len(), 7);
        assert!(g.default_genset().symmetric());
        assert!(g.default_genset().contains_identity());
    }

    #[test]
    fn family_mismatch_rejected() {
        let g = GroupSpec::lattice(2);
        let bad = Element::vector(&[1]);
        assert!(g.multiply(&g.identity(), &bad).is_err());
        let other = Element::heis(0, 0, 0);
        assert!(g.commute(&other, &g.identity()).is_err());
    }

    #[test]
    fn power_matches_repeated_mul() {
        let g = GroupSpec::dihedral_inf();
        let t = Element::dih(1, false);
        assert_eq!(g.power(&t, 5).unwrap(), Element::dih(5, false));
        assert_eq!(g.power(&t, -3).unwrap(), Element::dih(-3, false));
        assert_eq!(g.power(&t, 0).unwrap(), g.identity());
    }
}
