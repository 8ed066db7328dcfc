//! Finite groups as explicit multiplication tables, plus the built-in
//! catalog used by the verification suites.

use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};

/// A finite group given by a full multiplication table over element
/// indices. Latin-square and identity/inverse structure are validated at
/// construction; associativity is checked exhaustively up to order 256
/// and trusted above that.
#[derive(Debug)]
pub struct FiniteTable {
    order: usize,
    table: Vec<u16>,
    inverse: Vec<u16>,
    identity: u16,
    names: Vec<String>,
    gens: Vec<u16>,
    abelian: bool,
    center: OnceLock<Vec<u16>>,
}

impl PartialEq for FiniteTable {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.table == other.table
    }
}

impl Eq for FiniteTable {}

pub const ASSOCIATIVITY_CHECK_LIMIT: usize = 256;

impl FiniteTable {
    pub fn new(
        rows: Vec<Vec<usize>>,
        names: Option<Vec<String>>,
        gens: Vec<usize>,
    ) -> Result<Arc<Self>> {
        let order = rows.len();
        if order == 0 || order > u16::MAX as usize {
            return Err(Error::InvalidGroup(format!("bad table order {order}")));
        }
        let mut table = vec![0u16; order * order];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(Error::InvalidGroup(format!("row {i} has wrong length")));
            }
            for (j, &v) in row.iter().enumerate() {
                if v >= order {
                    return Err(Error::InvalidGroup(format!(
                        "entry ({i},{j}) = {v} out of range"
                    )));
                }
                table[i * order + j] = v as u16;
            }
        }
        // Latin square: rows and columns are permutations.
        for i in 0..order {
            let mut seen_row = vec![false; order];
            let mut seen_col = vec![false; order];
            for j in 0..order {
                let r = table[i * order + j] as usize;
                let c = table[j * order + i] as usize;
                if seen_row[r] || seen_col[c] {
                    return Err(Error::InvalidGroup(format!(
                        "table is not a Latin square at line {i}"
                    )));
                }
                seen_row[r] = true;
                seen_col[c] = true;
            }
        }
        let identity = (0..order)
            .find(|&e| {
                (0..order).all(|j| table[e * order + j] as usize == j)
                    && (0..order).all(|i| table[i * order + e] as usize == i)
            })
            .ok_or_else(|| Error::InvalidGroup("no identity element".to_string()))?;
        let mut inverse = vec![0u16; order];
        for i in 0..order {
            let j = (0..order)
                .find(|&j| {
                    table[i * order + j] as usize == identity
                        && table[j * order + i] as usize == identity
                })
                .ok_or_else(|| {
                    Error::InvalidGroup(format!("element {i} has no two-sided inverse"))
                })?;
            inverse[i] = j as u16;
        }
        if order <= ASSOCIATIVITY_CHECK_LIMIT {
            for a in 0..order {
                for b in 0..order {
                    let ab = table[a * order + b] as usize;
                    for c in 0..order {
                        let bc = table[b * order + c] as usize;
                        if table[ab * order + c] != table[a * order + bc] {
                            return Err(Error::InvalidGroup(format!(
                                "associativity fails at ({a},{b},{c})"
                            )));
                        }
                    }
                }
            }
        }
        let names = match names {
            Some(ns) => {
                if ns.len() != order {
                    return Err(Error::InvalidGroup("name list length mismatch".into()));
                }
                let mut sorted = ns.clone();
                sorted.sort();
                sorted.dedup();
                if sorted.len() != order {
                    return Err(Error::InvalidGroup("duplicate element names".into()));
                }
                ns
            }
            None => (0..order).map(|i| format!("g{i}")).collect(),
        };
        for &g in &gens {
            if g >= order {
                return Err(Error::InvalidGroup(format!("generator index {g} out of range")));
            }
        }
        let abelian =
            (0..order).all(|i| (0..order).all(|j| table[i * order + j] == table[j * order + i]));
        Ok(Arc::new(FiniteTable {
            order,
            table,
            inverse,
            identity: identity as u16,
            names,
            gens: gens.into_iter().map(|g| g as u16).collect(),
            abelian,
            center: OnceLock::new(),
        }))
    }

    fn from_fn(
        order: usize,
        mul: impl Fn(usize, usize) -> usize,
        names: Option<Vec<String>>,
        gens: Vec<usize>,
    ) -> Result<Arc<Self>> {
        let rows = (0..order)
            .map(|i| (0..order).map(|j| mul(i, j)).collect())
            .collect();
        Self::new(rows, names, gens)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> u16 {
        self.identity
    }

    #[inline]
    pub fn mul(&self, i: u16, j: u16) -> u16 {
        self.table[i as usize * self.order + j as usize]
    }

    pub fn inverse_of(&self, i: u16) -> u16 {
        self.inverse[i as usize]
    }

    pub fn commutes(&self, i: u16, j: u16) -> bool {
        self.mul(i, j) == self.mul(j, i)
    }

    pub fn is_abelian(&self) -> bool {
        self.abelian
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name_of(&self, i: u16) -> &str {
        &self.names[i as usize]
    }

    pub fn index_of_name(&self, name: &str) -> Option<u16> {
        self.names.iter().position(|n| n == name).map(|i| i as u16)
    }

    pub fn default_generators(&self) -> &[u16] {
        &self.gens
    }

    /// Sorted indices of the centre.
    pub fn center(&self) -> &[u16] {
        self.center.get_or_init(|| {
            (0..self.order as u16)
                .filter(|&z| (0..self.order as u16).all(|g| self.commutes(z, g)))
                .collect()
        })
    }

    // ---- builders ----

    pub fn cyclic(m: usize) -> Arc<Self> {
        let names = (0..m)
            .map(|i| match i {
                0 => "e".to_string(),
                1 => "g".to_string(),
                _ => format!("g{i}"),
            })
            .collect();
        Self::from_fn(m, |i, j| (i + j) % m, Some(names), if m > 1 { vec![1] } else { vec![] })
            .expect("cyclic table is a group")
    }

    /// Dihedral group of order 2m: index j*m + i for r^i s^j.
    pub fn dihedral(m: usize) -> Arc<Self> {
        assert!(m >= 2);
        let idx = |i: usize, j: usize| j * m + i;
        let mul = move |a: usize, b: usize| {
            let (i, j) = (a % m, a / m);
            let (k, l) = (b % m, b / m);
            let rot = if j == 0 { (i + k) % m } else { (i + m - k) % m };
            idx(rot, j ^ l)
        };
        let names = (0..2 * m)
            .map(|a| {
                let (i, j) = (a % m, a / m);
                match (i, j) {
                    (0, 0) => "e".to_string(),
                    (1, 0) => "r".to_string(),
                    (_, 0) => format!("r{i}"),
                    (0, 1) => "s".to_string(),
                    (1, 1) => "rs".to_string(),
                    _ => format!("r{i}s"),
                }
            })
            .collect();
        Self::from_fn(2 * m, mul, Some(names), vec![idx(1, 0), idx(0, 1)])
            .expect("dihedral table is a group")
    }

    /// Quaternion group, elements [1, -1, i, -i, j, -j, k, -k].
    pub fn quaternion8() -> Arc<Self> {
        // (sign, basis) with basis 0=1, 1=i, 2=j, 3=k.
        let dec = |a: usize| (if a.is_multiple_of(2) { 1i32 } else { -1 }, a / 2);
        let enc = |s: i32, b: usize| b * 2 + usize::from(s < 0);
        // basis products: (sign, basis)
        const BMUL: [[(i32, usize); 4]; 4] = [
            [(1, 0), (1, 1), (1, 2), (1, 3)],
            [(1, 1), (-1, 0), (1, 3), (-1, 2)],
            [(1, 2), (-1, 3), (-1, 0), (1, 1)],
            [(1, 3), (1, 2), (-1, 1), (-1, 0)],
        ];
        let mul = move |a: usize, b: usize| {
            let (sa, ba) = dec(a);
            let (sb, bb) = dec(b);
            let (s, c) = BMUL[ba][bb];
            enc(sa * sb * s, c)
        };
        let names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        Self::from_fn(8, mul, Some(names), vec![2, 4]).expect("quaternion table is a group")
    }

    /// Symmetric group on n letters (n <= 5 is plenty here), elements in
    /// lexicographic one-line order, named by their one-line notation.
    pub fn symmetric(n: usize) -> Arc<Self> {
        let perms = all_permutations(n);
        Self::from_permutations(&perms, transposition_generators(n, &perms))
    }

    /// Alternating group on 4 letters.
    pub fn alternating4() -> Arc<Self> {
        let perms: Vec<Vec<u8>> = all_permutations(4)
            .into_iter()
            .filter(|p| permutation_sign(p) == 1)
            .collect();
        // three-cycles (123) and (124) as one-line images
        let g1 = vec![1u8, 2, 0, 3]; // 1->2,2->3,3->1
        let g2 = vec![1u8, 3, 2, 0]; // 1->2,2->4,4->1
        let gens = vec![
            perms.iter().position(|p| *p == g1).unwrap(),
            perms.iter().position(|p| *p == g2).unwrap(),
        ];
        Self::from_permutations(&perms, gens)
    }

    fn from_permutations(perms: &[Vec<u8>], gens: Vec<usize>) -> Arc<Self> {
        let index: std::collections::BTreeMap<&[u8], usize> = perms
            .iter()
            .enumerate()
            .map(|(i, p)| (p.as_slice(), i))
            .collect();
        let compose = |a: &[u8], b: &[u8]| -> Vec<u8> {
            // apply a first, then b
            a.iter().map(|&k| b[k as usize]).collect()
        };
        let mul = |i: usize, j: usize| index[compose(&perms[i], &perms[j]).as_slice()];
        let names = perms
            .iter()
            .map(|p| p.iter().map(|&k| char::from(b'1' + k)).collect())
            .collect();
        Self::from_fn(perms.len(), mul, Some(names), gens)
            .expect("permutation composition is a group")
    }

    /// Heisenberg group over Z/p, order p^3, index a*p^2 + b*p + c.
    pub fn heisenberg_mod(p: usize) -> Arc<Self> {
        let dec = move |x: usize| (x / (p * p), (x / p) % p, x % p);
        let mul = move |u: usize, v: usize| {
            let (a, b, c) = dec(u);
            let (a2, b2, c2) = dec(v);
            ((a + a2) % p) * p * p + ((b + b2) % p) * p + (c + c2 + a * b2) % p
        };
        let names = (0..p * p * p)
            .map(|x| {
                let (a, b, c) = dec(x);
                format!("h{a}{b}{c}")
            })
            .collect();
        Self::from_fn(p * p * p, mul, Some(names), vec![p * p, p])
            .expect("heisenberg mod p is a group")
    }

    /// Elementary abelian (Z_2)^3, index as 3-bit vector.
    pub fn elementary_abelian_8() -> Arc<Self> {
        let names = (0..8)
            .map(|x| format!("v{}{}{}", (x >> 2) & 1, (x >> 1) & 1, x & 1))
            .collect();
        Self::from_fn(8, |i, j| i ^ j, Some(names), vec![4, 2, 1])
            .expect("xor is a group")
    }

    /// Direct product of two tables, index ia * |B| + ib.
    pub fn direct_product(a: &Arc<Self>, b: &Arc<Self>) -> Arc<Self> {
        let (na, nb) = (a.order, b.order);
        let mul = |i: usize, j: usize| {
            let (ia, ib) = (i / nb, i % nb);
            let (ja, jb) = (j / nb, j % nb);
            (a.mul(ia as u16, ja as u16) as usize) * nb + b.mul(ib as u16, jb as u16) as usize
        };
        let names = (0..na * nb)
            .map(|i| format!("{}|{}", a.names[i / nb], b.names[i % nb]))
            .collect();
        let mut gens = Vec::new();
        for &g in &a.gens {
            gens.push(g as usize * nb + b.identity as usize);
        }
        for &g in &b.gens {
            gens.push(a.identity as usize * nb + g as usize);
        }
        Self::from_fn(na * nb, mul, Some(names), gens).expect("product of groups is a group")
    }
}

fn all_permutations(n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur: Vec<u8> = Vec::new();
    let mut used = vec![false; n];
    fn rec(n: usize, cur: &mut Vec<u8>, used: &mut [bool], out: &mut Vec<Vec<u8>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for k in 0..n {
            if !used[k] {
                used[k] = true;
                cur.push(k as u8);
                rec(n, cur, used, out);
                cur.pop();
                used[k] = false;
            }
        }
    }
    rec(n, &mut cur, &mut used, &mut out);
    out
}

fn permutation_sign(p: &[u8]) -> i32 {
    let mut sign = 1;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                sign = -sign;
            }
        }
    }
    sign
}

fn transposition_generators(n: usize, perms: &[Vec<u8>]) -> Vec<usize> {
    // (1 k) for k = 2..n
    (1..n)
        .map(|k| {
            let mut p: Vec<u8> = (0..n as u8).collect();
            p.swap(0, k);
            perms.iter().position(|q| *q == p).unwrap()
        })
        .collect()
}

/// Fixed catalog of finite test groups: cyclic Z_m for m <= 24, dihedral
/// of order 2m for m <= 12, Q8, S3, S4, A4, Heisenberg mod 2 and 3,
/// (Z_2)^3, and the products D4 x Z2 and Q8 x Z2.
pub fn build_catalog() -> &'static [(String, Arc<FiniteTable>)] {
    static CATALOG: OnceLock<Vec<(String, Arc<FiniteTable>)>> = OnceLock::new();
    CATALOG.get_or_init(|| {
        let mut out: Vec<(String, Arc<FiniteTable>)> = Vec::new();
        for m in 1..=24 {
            out.push((format!("z{m}"), FiniteTable::cyclic(m)));
        }
        for m in 2..=12 {
            out.push((format!("d{m}"), FiniteTable::dihedral(m)));
        }
        out.push(("q8".to_string(), FiniteTable::quaternion8()));
        out.push(("s3".to_string(), FiniteTable::symmetric(3)));
        out.push(("s4".to_string(), FiniteTable::symmetric(4)));
        out.push(("a4".to_string(), FiniteTable::alternating4()));
        out.push(("heis2".to_string(), FiniteTable::heisenberg_mod(2)));
        out.push(("heis3".to_string(), FiniteTable::heisenberg_mod(3)));
        out.push(("z2^3".to_string(), FiniteTable::elementary_abelian_8()));
        let d4 = FiniteTable::dihedral(4);
        let z2 = FiniteTable::cyclic(2);
        out.push(("d4xz2".to_string(), FiniteTable::direct_product(&d4, &z2)));
        let q8 = FiniteTable::quaternion8();
        out.push(("q8xz2".to_string(), FiniteTable::direct_product(&q8, &z2)));
        out
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_orders() {
        let cat = build_catalog();
        let order = |name: &str| {
            cat.iter()
                .find(|(n, _)| n == name)
                .map(|(_, t)| t.order())
                .unwrap()
        };
        assert_eq!(order("q8"), 8);
        assert_eq!(order("s4"), 24);
        assert_eq!(order("heis3"), 27);
        assert_eq!(order("a4"), 12);
        assert_eq!(order("z2^3"), 8);
        assert_eq!(order("d4xz2"), 16);
        assert_eq!(order("q8xz2"), 16);
        assert_eq!(order("d12"), 24);
    }

    #[test]
    fn q8_structure() {
        let q8 = FiniteTable::quaternion8();
        let i = q8.index_of_name("i").unwrap();
        let j = q8.index_of_name("j").unwrap();
        let k = q8.index_of_name("k").unwrap();
        let m1 = q8.index_of_name("-1").unwrap();
        assert_eq!(q8.mul(i, j), k);
        assert_eq!(q8.mul(j, i), q8.index_of_name("-k").unwrap());
        assert_eq!(q8.mul(i, i), m1);
        assert!(q8.commutes(i, m1));
        assert_eq!(q8.center(), &[0, 1]);
    }

    #[test]
    fn latin_square_violation_rejected() {
        let rows = vec![vec![0, 1], vec![1, 1]];
        assert!(FiniteTable::new(rows, None, vec![]).is_err());
    }

    #[test]
    fn associativity_violation_rejected() {
        // Latin square with identity that is not associative: build a
        // quasigroup on 5 points from a non-associative loop.
        let rows = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(FiniteTable::new(rows, None, vec![]).is_err());
    }

    #[test]
    fn s3_is_dihedral3() {
        let s3 = FiniteTable::symmetric(3);
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        assert_eq!(s3.center().len(), 1);
    }
}
