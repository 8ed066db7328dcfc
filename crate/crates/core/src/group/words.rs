//! Text form of elements and group names: generator words like
//! `"t^-1 s"` for probes, generating sets and measure files, and the
//! registry mapping names like `"dinf"` or `"q8"` to group specs.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::group::{build_catalog, Element, Family, GenSet, GroupSpec};

/// Named letters per family (the identity is always spelled `e`).
pub fn letters(spec: &GroupSpec) -> Vec<(String, Element)> {
    match spec.family() {
        Family::Lattice(d) => (0..*d)
            .map(|i| {
                let mut v = vec![BigInt::zero(); *d];
                v[i] = BigInt::from(1);
                (format!("e{}", i + 1), Element::Vector(v))
            })
            .collect(),
        Family::Heisenberg => vec![
            ("x".to_string(), Element::heis(1, 0, 0)),
            ("y".to_string(), Element::heis(0, 1, 0)),
            ("z".to_string(), Element::heis(0, 0, 1)),
        ],
        Family::Free(k) => {
            let base = ["x", "y", "z", "w"];
            (1..=*k)
                .map(|i| {
                    let name = if *k <= base.len() {
                        base[i - 1].to_string()
                    } else {
                        format!("x{i}")
                    };
                    (name, Element::Word(vec![i as i16]))
                })
                .collect()
        }
        Family::DihedralInf => vec![
            ("t".to_string(), Element::dih(1, false)),
            ("s".to_string(), Element::dih(0, true)),
        ],
        Family::Table(_) | Family::Product(_) => Vec::new(),
    }
}

/// Parses a whitespace-separated word of `letter^exp` factors. Table
/// elements are addressed by name (or `#index`); product elements use
/// the tuple form `(w1 | w2 | ...)`.
pub fn parse_element(spec: &GroupSpec, input: &str) -> Result<Element> {
    let s = input.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty element word".to_string()));
    }
    if let Family::Product(components) = spec.family() {
        if s == "e" {
            return Ok(spec.identity());
        }
        let inner = s
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| {
                Error::Parse(format!("product element must be written (w1 | w2 ...): {s:?}"))
            })?;
        let parts: Vec<&str> = split_top_level(inner);
        if parts.len() != components.len() {
            return Err(Error::Parse(format!(
                "expected {} components, got {}",
                components.len(),
                parts.len()
            )));
        }
        let xs = components
            .iter()
            .zip(parts)
            .map(|(c, p)| parse_element(c, p))
            .collect::<Result<Vec<_>>>()?;
        return Ok(Element::Tuple(xs));
    }
    let table = spec.table().cloned();
    let lets = letters(spec);
    let mut acc = spec.identity();
    for token in s.split_whitespace() {
        let (base, exp) = split_power(token)?;
        let atom = if base == "e" {
            spec.identity()
        } else if let Some(t) = &table {
            if let Some(idx) = base.strip_prefix('#') {
                let i: usize = idx
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad element index {base:?}")))?;
                if i >= t.order() {
                    return Err(Error::Parse(format!("element index {i} out of range")));
                }
                Element::Table(i as u16)
            } else {
                Element::Table(t.index_of_name(base).ok_or_else(|| {
                    Error::Parse(format!("unknown element name {base:?} in {}", spec.name()))
                })?)
            }
        } else {
            lets.iter()
                .find(|(n, _)| n == base)
                .map(|(_, el)| el.clone())
                .ok_or_else(|| {
                    Error::Parse(format!("unknown letter {base:?} in {}", spec.name()))
                })?
        };
        let powered = spec.power(&atom, exp)?;
        acc = spec.mul_unchecked(&acc, &powered);
    }
    Ok(acc)
}

fn split_power(token: &str) -> Result<(&str, i64)> {
    match token.rsplit_once('^') {
        Some((base, exp)) if !base.is_empty() => {
            let e: i64 = exp
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in {token:?}")))?;
            Ok((base, e))
        }
        _ => Ok((token, 1)),
    }
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            '|' if depth == 0 => {
                parts.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(s[start..].trim());
    parts
}

/// Renders an element as a parseable word; inverse of `parse_element`.
pub fn render_element(spec: &GroupSpec, x: &Element) -> String {
    if spec.is_identity(x) {
        return "e".to_string();
    }
    match (spec.family(), x) {
        (Family::Table(t), Element::Table(i)) => t.name_of(*i).to_string(),
        (Family::Lattice(_), Element::Vector(v)) => {
            let parts: Vec<String> = v
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| power_str(&format!("e{}", i + 1), c))
                .collect();
            parts.join(" ")
        }
        (Family::Heisenberg, Element::Heis(u)) => {
            let (a, b, c) = (&u.0, &u.1, &u.2);
            let k = c - a * b;
            let mut parts = Vec::new();
            if !a.is_zero() {
                parts.push(power_str("x", a));
            }
            if !b.is_zero() {
                parts.push(power_str("y", b));
            }
            if !k.is_zero() {
                parts.push(power_str("z", &k));
            }
            parts.join(" ")
        }
        (Family::Free(_), Element::Word(w)) => {
            let lets = letters(spec);
            let mut parts: Vec<String> = Vec::new();
            let mut i = 0;
            while i < w.len() {
                let l = w[i];
                let mut run = 1i64;
                while i + (run as usize) < w.len() && w[i + run as usize] == l {
                    run += 1;
                }
                let name = &lets[(l.unsigned_abs() as usize) - 1].0;
                let exp = if l > 0 { run } else { -run };
                parts.push(power_str(name, &BigInt::from(exp)));
                i += run as usize;
            }
            parts.join(" ")
        }
        (Family::DihedralInf, Element::Dih(u)) => {
            let (n, f) = (&u.0, u.1);
            let mut parts = Vec::new();
            if !n.is_zero() {
                parts.push(power_str("t", n));
            }
            if f {
                parts.push("s".to_string());
            }
            parts.join(" ")
        }
        (Family::Product(cs), Element::Tuple(xs)) => {
            let parts: Vec<String> = cs
                .iter()
                .zip(xs)
                .map(|(c, a)| render_element(c, a))
                .collect();
            format!("({})", parts.join(" | "))
        }
        _ => unreachable!("render on mismatched form"),
    }
}

fn power_str(name: &str, exp: &BigInt) -> String {
    if exp.abs() == BigInt::from(1) && exp.is_positive() {
        name.to_string()
    } else {
        format!("{name}^{exp}")
    }
}

/// Parses a generating set given as words, e.g. `["e", "t", "t^-1", "s"]`.
pub fn parse_genset(spec: &GroupSpec, words: &[String]) -> Result<GenSet> {
    let elems = words
        .iter()
        .map(|w| parse_element(spec, w))
        .collect::<Result<Vec<_>>>()?;
    GenSet::new(spec, elems)
}

/// Resolves a group name: `z`, `z^D`, `heisenberg`, `dinf`, `fK`,
/// `zxf2`, or any catalog table name (`q8`, `s3`, `d4`, `z12`, ...).
pub fn lookup_group(name: &str) -> Result<GroupSpec> {
    let n = name.trim().to_ascii_lowercase();
    match n.as_str() {
        "z" => return Ok(GroupSpec::lattice(1)),
        "heisenberg" | "heis" => return Ok(GroupSpec::heisenberg()),
        "dinf" => return Ok(GroupSpec::dihedral_inf()),
        "zxf2" => {
            return Ok(GroupSpec::product(
                "zxf2",
                vec![GroupSpec::lattice(1), GroupSpec::free(2)],
            ))
        }
        _ => {}
    }
    if let Some(d) = n.strip_prefix("z^") {
        let d: usize = d
            .parse()
            .map_err(|_| Error::Parse(format!("bad lattice rank in {name:?}")))?;
        if d == 0 || d > 16 {
            return Err(Error::Parse(format!("lattice rank {d} out of range 1..=16")));
        }
        return Ok(GroupSpec::lattice(d));
    }
    if let Some(k) = n.strip_prefix('f') {
        if let Ok(k) = k.parse::<usize>() {
            if (1..=8).contains(&k) {
                return Ok(GroupSpec::free(k));
            }
        }
    }
    if let Some((_, t)) = build_catalog().iter().find(|(cname, _)| *cname == n) {
        return Ok(GroupSpec::from_table(&n, t.clone()));
    }
    Err(Error::Parse(format!("unknown group {name:?}")))
}

/// Names of all built-in groups (catalog plus the infinite families).
pub fn known_groups() -> Vec<String> {
    let mut out: Vec<String> = vec![
        "z".into(),
        "z^2".into(),
        "z^3".into(),
        "heisenberg".into(),
        "dinf".into(),
        "f2".into(),
        "f3".into(),
        "zxf2".into(),
    ];
    out.extend(build_catalog().iter().map(|(n, _)| n.clone()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roundtrip(spec: &GroupSpec, w: &str) {
        let x = parse_element(spec, w).unwrap();
        let r = render_element(spec, &x);
        assert_eq!(parse_element(spec, &r).unwrap(), x, "roundtrip of {w:?} via {r:?}");
    }

    #[test]
    fn parse_and_render() {
        let d = GroupSpec::dihedral_inf();
        assert_eq!(parse_element(&d, "t^-1").unwrap(), Element::dih(-1, false));
        assert_eq!(parse_element(&d, "t s t").unwrap(), Element::dih(0, true));
        assert_eq!(render_element(&d, &Element::dih(3, true)), "t^3 s");
        roundtrip(&d, "t^-4 s");

        let h = GroupSpec::heisenberg();
        assert_eq!(parse_element(&h, "x y").unwrap(), Element::heis(1, 1, 1));
        roundtrip(&h, "x^2 y^-3 z^5");

        let f = GroupSpec::free(2);
        assert_eq!(
            parse_element(&f, "x x^-1 y").unwrap(),
            Element::word(&[2])
        );
        roundtrip(&f, "x^2 y^-1 x");

        let z2 = GroupSpec::lattice(2);
        assert_eq!(
            parse_element(&z2, "e1^3 e2^-1").unwrap(),
            Element::vector(&[3, -1])
        );
        roundtrip(&z2, "e1^-2 e2^7");
    }

    #[test]
    fn parse_table_names() {
        let g = lookup_group("q8").unwrap();
        let i = parse_element(&g, "i").unwrap();
        let j = parse_element(&g, "j").unwrap();
        let k = parse_element(&g, "i j").unwrap();
        assert_eq!(render_element(&g, &k), "k");
        assert_eq!(parse_element(&g, "i^2").unwrap(), parse_element(&g, "-1").unwrap());
        assert_eq!(g.multiply(&i, &j).unwrap(), k);
        assert_eq!(parse_element(&g, "#0").unwrap(), g.identity());
    }

    #[test]
    fn parse_product_tuple() {
        let g = lookup_group("zxf2").unwrap();
        let x = parse_element(&g, "(e1^2 | x y)").unwrap();
        assert_eq!(
            x,
            Element::Tuple(vec![Element::vector(&[2]), Element::word(&[1, 2])])
        );
        let r = render_element(&g, &x);
        assert_eq!(parse_element(&g, &r).unwrap(), x);
        assert_eq!(parse_element(&g, "e").unwrap(), g.identity());
    }

    #[test]
    fn registry_names() {
        assert!(lookup_group("z^2").is_ok());
        assert!(lookup_group("s4").is_ok());
        assert!(lookup_group("d4").is_ok());
        assert!(lookup_group("nope").is_err());
    }
}
