//! Free-group words as freely reduced signed-letter sequences.
//!
//! Letter `k > 0` is the k-th generator, `-k` its inverse. All functions
//! keep words freely reduced (no adjacent `a a^-1`).

/// Reduces an arbitrary letter sequence.
pub fn reduce(letters: impl IntoIterator<Item = i16>) -> Vec<i16> {
    let mut out: Vec<i16> = Vec::new();
    for l in letters {
        if l == 0 {
            continue;
        }
        if out.last().is_some_and(|&p| p == -l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Concatenation of two reduced words, reduced at the seam.
pub fn mul(a: &[i16], b: &[i16]) -> Vec<i16> {
    let mut out = a.to_vec();
    for &l in b {
        if out.last().is_some_and(|&p| p == -l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

pub fn inverse(a: &[i16]) -> Vec<i16> {
    a.iter().rev().map(|&l| -l).collect()
}

pub fn is_reduced(a: &[i16]) -> bool {
    a.iter().all(|&l| l != 0) && a.windows(2).all(|w| w[0] != -w[1])
}

/// Strips `c ... c^-1` down to the cyclically reduced core, returning
/// `(prefix c, core v)` with the input equal to `c v c^-1`.
pub fn cyclic_reduce(a: &[i16]) -> (Vec<i16>, Vec<i16>) {
    let mut lo = 0;
    let mut hi = a.len();
    while hi - lo >= 2 && a[lo] == -a[hi - 1] {
        lo += 1;
        hi -= 1;
    }
    (a[..lo].to_vec(), a[lo..hi].to_vec())
}

/// Smallest rotation of a cyclically reduced word under the derived
/// `Ord` on letter sequences.
pub fn min_rotation(v: &[i16]) -> Vec<i16> {
    if v.is_empty() {
        return Vec::new();
    }
    let mut best = v.to_vec();
    for i in 1..v.len() {
        let mut rot = Vec::with_capacity(v.len());
        rot.extend_from_slice(&v[i..]);
        rot.extend_from_slice(&v[..i]);
        if rot < best {
            best = rot;
        }
    }
    best
}

/// Primitive root of a nontrivial reduced word: the unique primitive `u`
/// with the input a positive power of `u`. Conjugates `w = c v c^-1`
/// reduce to the core's root: root(w) = c root(v) c^-1.
pub fn primitive_root(a: &[i16]) -> Vec<i16> {
    if a.is_empty() {
        return Vec::new();
    }
    let (prefix, core) = cyclic_reduce(a);
    let n = core.len();
    // A cyclically reduced word is a k-th power iff it is periodic with
    // period n/k, with no cancellation involved.
    let mut root = core.clone();
    for d in 1..=n / 2 {
        if n % d != 0 {
            continue;
        }
        if (d..n).all(|i| core[i] == core[i - d]) {
            root = core[..d].to_vec();
            break;
        }
    }
    let mut out = mul(&prefix, &root);
    out = mul(&out, &inverse(&prefix));
    out
}
