//! Word-metric balls by breadth-first search with canonical-form
//! deduplication. `ball(spec, S, n)` is the set of all products of at
//! most `n` generators, which equals S^n whenever S contains the
//! identity.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::group::{Element, GenSet, GroupSpec};

/// Iterator over BFS layers: item `r` is the sorted list of elements at
/// word length exactly `r` (layer 0 is `[e]`). Enforces an atom cap; on
/// overrun the error carries the last fully completed radius.
pub struct BallLayers<'a> {
    spec: &'a GroupSpec,
    gens: Vec<Element>,
    visited: HashSet<Element>,
    frontier: Vec<Element>,
    next_radius: u64,
    cap: usize,
    done: bool,
}

impl<'a> BallLayers<'a> {
    pub fn new(spec: &'a GroupSpec, gens: &GenSet, cap: usize) -> Result<Self> {
        let mut expansion = Vec::new();
        for g in gens.elements() {
            if !spec.contains(g) {
                return Err(Error::FamilyMismatch(format!(
                    "generator {g:?} does not belong to group {}",
                    spec.name()
                )));
            }
            if !spec.is_identity(g) {
                expansion.push(g.clone());
            }
        }
        if cap == 0 {
            return Err(Error::resource("ball atom", 0, None));
        }
        let e = spec.identity();
        let mut visited = HashSet::new();
        visited.insert(e.clone());
        Ok(BallLayers {
            spec,
            gens: expansion,
            visited,
            frontier: vec![e],
            next_radius: 0,
            cap,
            done: false,
        })
    }

    /// Number of distinct elements seen so far (ball size at the last
    /// yielded radius).
    pub fn total(&self) -> u64 {
        self.visited.len() as u64
    }

    pub fn visited(&self) -> &HashSet<Element> {
        &self.visited
    }
}

impl<'a> BallLayers<'a> {
    /// Yields the next BFS layer by reference (call r yields radius r);
    /// `None` once a finite group has saturated.
    pub fn advance(&mut self) -> Result<Option<&[Element]>> {
        if self.done {
            return Ok(None);
        }
        if self.next_radius == 0 {
            self.next_radius = 1;
            return Ok(Some(&self.frontier));
        }
        let mut fresh: Vec<Element> = Vec::new();
        for x in &self.frontier {
            for s in &self.gens {
                let y = self.spec.mul_unchecked(x, s);
                if !self.visited.contains(&y) {
                    if self.visited.len() >= self.cap {
                        self.done = true;
                        return Err(Error::resource(
                            "ball atom",
                            self.cap as u64,
                            Some(self.next_radius - 1),
                        ));
                    }
                    self.visited.insert(y.clone());
                    fresh.push(y);
                }
            }
        }
        fresh.sort_unstable();
        self.next_radius += 1;
        if fresh.is_empty() {
            // Finite group saturated: every later layer is empty too.
            self.done = true;
            return Ok(None);
        }
        self.frontier = fresh;
        Ok(Some(&self.frontier))
    }
}

pub fn ball_layers<'a>(
    spec: &'a GroupSpec,
    gens: &GenSet,
    cap: usize,
) -> Result<BallLayers<'a>> {
    BallLayers::new(spec, gens, cap)
}

/// The ball of radius `n` as a sorted, deduplicated element list.
pub fn ball(spec: &GroupSpec, gens: &GenSet, n: u64, cap: usize) -> Result<Vec<Element>> {
    let mut layers = BallLayers::new(spec, gens, cap)?;
    let mut out: Vec<Element> = Vec::new();
    for _ in 0..=n {
        match layers.advance()? {
            Some(layer) => out.extend_from_slice(layer),
            None => break,
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// |S^{n+1}| / |S^n| as an exact rational.
pub fn growth_ratio(
    spec: &GroupSpec,
    gens: &GenSet,
    n: u64,
    cap: usize,
) -> Result<BigRational> {
    let mut layers = BallLayers::new(spec, gens, cap)?;
    let mut size_n = 0u64;
    for r in 0..=n + 1 {
        match layers.advance()? {
            Some(layer) => {
                if r <= n {
                    size_n += layer.len() as u64;
                }
            }
            None => break,
        }
    }
    let size_n1 = layers.total();
    Ok(BigRational::new(BigInt::from(size_n1), BigInt::from(size_n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;
    use num_traits::One;

    #[test]
    fn lattice_ball_sizes() {
        let z = GroupSpec::lattice(1);
        for n in 0..=10u64 {
            let b = ball(&z, z.default_genset(), n, 1 << 20).unwrap();
            assert_eq!(b.len() as u64, 2 * n + 1);
        }
        let z2 = GroupSpec::lattice(2);
        let b1 = ball(&z2, z2.default_genset(), 1, 1 << 20).unwrap();
        assert_eq!(b1.len(), 5);
    }

    #[test]
    fn free_ball_sizes() {
        let f2 = GroupSpec::free(2);
        let b2 = ball(&f2, f2.default_genset(), 2, 1 << 20).unwrap();
        assert_eq!(b2.len(), 17);
        let b0 = ball(&f2, f2.default_genset(), 0, 1 << 20).unwrap();
        assert_eq!(b0, vec![f2.identity()]);
    }

    #[test]
    fn growth_ratios() {
        let z = GroupSpec::lattice(1);
        let r = growth_ratio(&z, z.default_genset(), 10, 1 << 20).unwrap();
        assert_eq!(r, BigRational::new(23.into(), 21.into()));

        let f2 = GroupSpec::free(2);
        let r = growth_ratio(&f2, f2.default_genset(), 3, 1 << 20).unwrap();
        assert!(r > BigRational::new(2.into(), 1.into()));

        // finite group saturates to ratio 1
        let cat = crate::group::build_catalog();
        let z6 = cat.iter().find(|(n, _)| n == "z6").unwrap().1.clone();
        let g = GroupSpec::from_table("z6", z6);
        let r = growth_ratio(&g, g.default_genset(), 20, 1 << 20).unwrap();
        assert!(r.is_one());
    }

    #[test]
    fn cap_reports_last_radius() {
        let f2 = GroupSpec::free(2);
        let err = ball(&f2, f2.default_genset(), 10, 10).unwrap_err();
        match err {
            crate::error::Error::Resource(r) => {
                assert_eq!(r.cap, 10);
                assert_eq!(r.last_completed, Some(1));
            }
            other => panic!("expected resource error, got {other:?}"),
        }
    }

    #[test]
    fn balls_nest() {
        let h = GroupSpec::heisenberg();
        let b3 = ball(&h, h.default_genset(), 3, 1 << 20).unwrap();
        let b4 = ball(&h, h.default_genset(), 4, 1 << 20).unwrap();
        let set: std::collections::HashSet<_> = b4.iter().collect();
        assert!(b3.iter().all(|x| set.contains(x)));
    }
}
