//! Subgroup oracles: a membership predicate plus optional generators.
//! Built-in predicates cover the subgroups the verification suites use;
//! generated subgroups get closure-based membership up to a cap.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::group::{words, Element, Family, GroupSpec};

#[derive(Debug, Clone)]
enum SubgroupKind {
    /// Coordinate-sum parity in Z^d (index 2).
    EvenSum,
    /// The centre of the group.
    Center,
    /// {x : all components except `i` are the identity} in a product.
    Factor(usize),
    /// The translation subgroup of the infinite dihedral group (index 2).
    Translations,
    /// Subgroup generated by explicit elements; membership through the
    /// enumerated closure.
    Generated {
        gens: Vec<Element>,
        closure: Arc<BTreeSet<Element>>,
    },
}

#[derive(Debug, Clone)]
pub struct SubgroupOracle {
    kind: SubgroupKind,
    desc: String,
}

impl SubgroupOracle {
    pub fn even_sum(spec: &GroupSpec) -> Result<Self> {
        match spec.family() {
            Family::Lattice(_) => Ok(SubgroupOracle {
                kind: SubgroupKind::EvenSum,
                desc: "even-sum".to_string(),
            }),
            _ => Err(Error::Unsupported(format!(
                "even-sum subgroup needs a lattice group, not {}",
                spec.name()
            ))),
        }
    }

    pub fn center() -> Self {
        SubgroupOracle {
            kind: SubgroupKind::Center,
            desc: "center".to_string(),
        }
    }

    pub fn factor(spec: &GroupSpec, i: usize) -> Result<Self> {
        match spec.family() {
            Family::Product(cs) if i < cs.len() => Ok(SubgroupOracle {
                kind: SubgroupKind::Factor(i),
                desc: format!("factor:{i}"),
            }),
            Family::Product(cs) => Err(Error::InvalidArgument(format!(
                "factor index {i} out of range 0..{}",
                cs.len()
            ))),
            _ => Err(Error::Unsupported(format!(
                "factor subgroup needs a direct product, not {}",
                spec.name()
            ))),
        }
    }

    pub fn translations(spec: &GroupSpec) -> Result<Self> {
        match spec.family() {
            Family::DihedralInf => Ok(SubgroupOracle {
                kind: SubgroupKind::Translations,
                desc: "translations".to_string(),
            }),
            _ => Err(Error::Unsupported(format!(
                "translations subgroup needs the infinite dihedral group, not {}",
                spec.name()
            ))),
        }
    }

    /// Closure of the given generators (and their inverses) enumerated
    /// up to `cap` elements; an unbounded closure is a resource error.
    pub fn generated(spec: &GroupSpec, gens: Vec<Element>, cap: usize) -> Result<Self> {
        let mut seeds: Vec<Element> = Vec::new();
        for g in &gens {
            if !spec.contains(g) {
                return Err(Error::FamilyMismatch(format!(
                    "subgroup generator {g:?} not in group {}",
                    spec.name()
                )));
            }
            let inv = spec.inv_unchecked(g);
            if !seeds.contains(g) {
                seeds.push(g.clone());
            }
            if !seeds.contains(&inv) {
                seeds.push(inv);
            }
        }
        let mut closure: BTreeSet<Element> = BTreeSet::new();
        closure.insert(spec.identity());
        let mut frontier = vec![spec.identity()];
        while let Some(x) = frontier.pop() {
            for s in &seeds {
                let y = spec.mul_unchecked(&x, s);
                if !closure.contains(&y) {
                    if closure.len() >= cap {
                        return Err(Error::resource("subgroup closure", cap as u64, None));
                    }
                    closure.insert(y.clone());
                    frontier.push(y);
                }
            }
        }
        let desc = format!(
            "gens:{}",
            gens.iter()
                .map(|g| words::render_element(spec, g))
                .collect::<Vec<_>>()
                .join(",")
        );
        Ok(SubgroupOracle {
            kind: SubgroupKind::Generated {
                gens,
                closure: Arc::new(closure),
            },
            desc,
        })
    }

    /// Parses a subgroup description: `even-sum`, `center`,
    /// `translations`, `factor:I`, or `gens:w1,w2,...`.
    pub fn parse(spec: &GroupSpec, s: &str, closure_cap: usize) -> Result<Self> {
        let s = s.trim();
        match s {
            "even-sum" => return Self::even_sum(spec),
            "center" => return Ok(Self::center()),
            "translations" => return Self::translations(spec),
            _ => {}
        }
        if let Some(i) = s.strip_prefix("factor:") {
            let i: usize = i
                .parse()
                .map_err(|_| Error::Parse(format!("bad factor index in {s:?}")))?;
            return Self::factor(spec, i);
        }
        if let Some(ws) = s.strip_prefix("gens:") {
            let gens = ws
                .split(',')
                .map(|w| words::parse_element(spec, w))
                .collect::<Result<Vec<_>>>()?;
            return Self::generated(spec, gens, closure_cap);
        }
        Err(Error::Parse(format!("unknown subgroup description {s:?}")))
    }

    pub fn description(&self) -> &str {
        &self.desc
    }

    pub fn generators(&self) -> Option<&[Element]> {
        match &self.kind {
            SubgroupKind::Generated { gens, .. } => Some(gens),
            _ => None,
        }
    }

    pub fn contains(&self, spec: &GroupSpec, x: &Element) -> Result<bool> {
        if !spec.contains(x) {
            return Err(Error::FamilyMismatch(format!(
                "membership probe {x:?} not in group {}",
                spec.name()
            )));
        }
        self.contains_raw(spec, x)
    }

    /// Membership without the form validation; for internal loops whose
    /// elements come straight from group operations.
    pub(crate) fn contains_raw(&self, spec: &GroupSpec, x: &Element) -> Result<bool> {
        Ok(match &self.kind {
            SubgroupKind::EvenSum => match x {
                Element::Vector(v) => v.iter().sum::<num_bigint::BigInt>().is_even(),
                _ => unreachable!("even-sum is lattice-only"),
            },
            SubgroupKind::Center => spec.is_central(x)?,
            SubgroupKind::Factor(i) => match (spec.family(), x) {
                (Family::Product(cs), Element::Tuple(xs)) => cs
                    .iter()
                    .zip(xs)
                    .enumerate()
                    .all(|(j, (c, a))| j == *i || c.is_identity(a)),
                _ => unreachable!("factor is product-only"),
            },
            SubgroupKind::Translations => match x {
                Element::Dih(u) => !u.1,
                _ => unreachable!("translations is dihedral-only"),
            },
            SubgroupKind::Generated { closure, .. } => closure.contains(x),
        })
    }
}
