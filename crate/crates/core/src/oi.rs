//! Morphisms of the categories OI and FI.
//!
//! An OI-morphism `[m] -> [n]` is a strictly increasing map and is stored as
//! its image tuple `(e(1), ..., e(m))` with 1-based entries. FI-morphisms are
//! arbitrary injections stored the same way.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest width accepted by the parsers.
pub const MAX_WIDTH: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OIMorphism {
    target: usize,
    image: Vec<u32>,
}

impl OIMorphism {
    pub fn new(target: usize, image: Vec<u32>) -> Result<Self> {
        let mut prev = 0u32;
        for &v in &image {
            if v <= prev || v as usize > target {
                return Err(Error::parse(format!(
                    "image {image:?} is not a strictly increasing map into [{target}]"
                )));
            }
            prev = v;
        }
        Ok(OIMorphism { target, image })
    }

    pub(crate) fn from_raw(target: usize, image: Vec<u32>) -> Self {
        debug_assert!(OIMorphism::new(target, image.clone()).is_ok());
        OIMorphism { target, image }
    }

    pub fn identity(n: usize) -> Self {
        OIMorphism {
            target: n,
            image: (1..=n as u32).collect(),
        }
    }

    pub fn source(&self) -> usize {
        self.image.len()
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn image(&self) -> &[u32] {
        &self.image
    }

    /// Value at `j` (1-based).
    pub fn apply(&self, j: u32) -> u32 {
        self.image[j as usize - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.source() == self.target
    }

    pub fn as_fi(&self) -> FIMorphism {
        FIMorphism {
            target: self.target,
            image: self.image.clone(),
        }
    }
}

impl fmt::Debug for OIMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn write_morphism(f: &mut fmt::Formatter<'_>, target: usize, image: &[u32]) -> fmt::Result {
    write!(f, "[{}->{}: ", image.len(), target)?;
    for (k, v) in image.iter().enumerate() {
        if k > 0 {
            write!(f, ",")?;
        }
        write!(f, "{v}")?;
    }
    write!(f, "]")
}

impl fmt::Display for OIMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_morphism(f, self.target, &self.image)
    }
}

fn parse_morphism(s: &str) -> Result<(usize, Vec<u32>)> {
    let bad = || Error::parse(format!("invalid morphism `{s}` (expected `[m->n: a1,...,am]`)"));
    let inner = s
        .trim()
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(bad)?;
    let (widths, entries) = inner.split_once(':').ok_or_else(bad)?;
    let (m, n) = widths.split_once("->").ok_or_else(bad)?;
    let m: usize = m.trim().parse().map_err(|_| bad())?;
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    if n > MAX_WIDTH {
        return Err(Error::WidthTooLarge(n));
    }
    let image: Vec<u32> = if entries.trim().is_empty() {
        Vec::new()
    } else {
        entries
            .split(',')
            .map(|t| t.trim().parse::<u32>().map_err(|_| bad()))
            .collect::<Result<_>>()?
    };
    if image.len() != m {
        return Err(bad());
    }
    Ok((n, image))
}

impl FromStr for OIMorphism {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (n, image) = parse_morphism(s)?;
        OIMorphism::new(n, image)
    }
}

/// `outer ∘ inner`.
pub fn compose(outer: &OIMorphism, inner: &OIMorphism) -> Result<OIMorphism> {
    if inner.target != outer.source() {
        return Err(Error::WidthMismatch {
            expected: outer.source(),
            found: inner.target,
        });
    }
    Ok(OIMorphism {
        target: outer.target,
        image: inner.image.iter().map(|&j| outer.apply(j)).collect(),
    })
}

/// The inclusion `[m] -> [n]`, `j ↦ j`.
pub fn iota(m: usize, n: usize) -> Result<OIMorphism> {
    if m > n {
        return Err(Error::WidthMismatch { expected: n, found: m });
    }
    Ok(OIMorphism {
        target: n,
        image: (1..=m as u32).collect(),
    })
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// All OI-morphisms `[m] -> [n]` in lexicographic order of their images.
pub fn enumerate_oi(m: usize, n: usize) -> Vec<OIMorphism> {
    let mut out = Vec::with_capacity(binomial(n, m));
    if m > n {
        return out;
    }
    let mut cur: Vec<u32> = (1..=m as u32).collect();
    loop {
        out.push(OIMorphism {
            target: n,
            image: cur.clone(),
        });
        // advance to the next m-subset in lex order
        let mut k = m;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if (cur[k] as usize) < n - (m - 1 - k) {
                cur[k] += 1;
                for t in k + 1..m {
                    cur[t] = cur[t - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Position of `image` (a strictly increasing `d`-tuple in `[n]`) in the
/// lexicographic enumeration of [`enumerate_oi`]`(d, n)`.
pub fn oi_rank(image: &[u32], n: usize) -> usize {
    let d = image.len();
    let mut rank = 0;
    let mut prev = 0usize;
    for (k, &a) in image.iter().enumerate() {
        for v in prev + 1..a as usize {
            rank += binomial(n - v, d - k - 1);
        }
        prev = a as usize;
    }
    rank
}

/// Inverse of [`oi_rank`].
pub fn oi_unrank(mut rank: usize, d: usize, n: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(d);
    let mut v = 1usize;
    for k in 0..d {
        loop {
            let block = binomial(n - v, d - k - 1);
            if rank < block {
                break;
            }
            rank -= block;
            v += 1;
        }
        out.push(v as u32);
        v += 1;
    }
    out
}

/// An injection `[m] -> [n]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FIMorphism {
    target: usize,
    image: Vec<u32>,
}

impl FIMorphism {
    pub fn new(target: usize, image: Vec<u32>) -> Result<Self> {
        let mut seen = vec![false; target + 1];
        for &v in &image {
            if v == 0 || v as usize > target || seen[v as usize] {
                return Err(Error::parse(format!(
                    "image {image:?} is not an injection into [{target}]"
                )));
            }
            seen[v as usize] = true;
        }
        Ok(FIMorphism { target, image })
    }

    pub fn identity(n: usize) -> Self {
        FIMorphism {
            target: n,
            image: (1..=n as u32).collect(),
        }
    }

    pub fn source(&self) -> usize {
        self.image.len()
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn image(&self) -> &[u32] {
        &self.image
    }

    pub fn apply(&self, j: u32) -> u32 {
        self.image[j as usize - 1]
    }

    pub fn is_increasing(&self) -> bool {
        self.image.windows(2).all(|w| w[0] < w[1])
    }

    pub fn compose(&self, inner: &FIMorphism) -> Result<FIMorphism> {
        if inner.target != self.source() {
            return Err(Error::WidthMismatch {
                expected: self.source(),
                found: inner.target,
            });
        }
        Ok(FIMorphism {
            target: self.target,
            image: inner.image.iter().map(|&j| self.apply(j)).collect(),
        })
    }
}

impl fmt::Debug for FIMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for FIMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_morphism(f, self.target, &self.image)
    }
}

impl FromStr for FIMorphism {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (n, image) = parse_morphism(s)?;
        FIMorphism::new(n, image)
    }
}

/// All injections `[m] -> [n]`, lexicographic in the image tuple.
pub fn enumerate_fi(m: usize, n: usize) -> Vec<FIMorphism> {
    fn rec(m: usize, n: usize, cur: &mut Vec<u32>, used: &mut [bool], out: &mut Vec<FIMorphism>) {
        if cur.len() == m {
            out.push(FIMorphism {
                target: n,
                image: cur.clone(),
            });
            return;
        }
        for v in 1..=n {
            if !used[v] {
                used[v] = true;
                cur.push(v as u32);
                rec(m, n, cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    if m <= n {
        rec(m, n, &mut Vec::with_capacity(m), &mut vec![false; n + 1], &mut out);
    }
    out
}

/// Splits an injection `π: [d] -> [n]` as `π = π̃ ∘ σ` with `π̃` increasing
/// and `σ` a permutation of `[d]`.
pub fn fi_factor(pi: &FIMorphism) -> (OIMorphism, FIMorphism) {
    let mut sorted = pi.image.clone();
    sorted.sort_unstable();
    let sigma: Vec<u32> = pi
        .image
        .iter()
        .map(|v| sorted.binary_search(v).expect("value present") as u32 + 1)
        .collect();
    (
        OIMorphism {
            target: pi.target,
            image: sorted,
        },
        FIMorphism {
            target: pi.source(),
            image: sigma,
        },
    )
}

/// The strictly increasing self-map of the positive integers extending an
/// OI-morphism `ε: [m] -> [n]` by `j ↦ ε(m) + j - m` for `j > m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncExtension {
    base: OIMorphism,
}

impl IncExtension {
    pub fn base(&self) -> &OIMorphism {
        &self.base
    }

    pub fn eval(&self, j: u32) -> u32 {
        assert!(j >= 1, "Inc-extensions are defined on positive integers");
        let m = self.base.source() as u32;
        if j <= m {
            self.base.apply(j)
        } else {
            self.base.apply(m) + j - m
        }
    }

    /// The first `count` values `(π(1), ..., π(count))`.
    pub fn values(&self, count: usize) -> Vec<u32> {
        (1..=count as u32).map(|j| self.eval(j)).collect()
    }

    /// Restriction to `[k] -> [π(k)]`.
    pub fn restrict(&self, k: usize) -> OIMorphism {
        let image = self.values(k);
        let target = image.last().copied().unwrap_or(0) as usize;
        OIMorphism { target, image }
    }
}

pub fn inc_extension(eps: &OIMorphism) -> Result<IncExtension> {
    if eps.source() == 0 {
        return Err(Error::EmptySource);
    }
    Ok(IncExtension { base: eps.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn oi(n: usize, img: &[u32]) -> OIMorphism {
        OIMorphism::new(n, img.to_vec()).unwrap()
    }

    fn fi(n: usize, img: &[u32]) -> FIMorphism {
        FIMorphism::new(n, img.to_vec()).unwrap()
    }

    #[test]
    fn compose_examples() {
        assert_eq!(compose(&oi(3, &[2, 3]), &oi(2, &[1, 2])).unwrap(), oi(3, &[2, 3]));
        assert_eq!(compose(&oi(4, &[1, 3, 4]), &oi(3, &[2, 3])).unwrap(), oi(4, &[3, 4]));
        let e = oi(5, &[2, 4]);
        assert_eq!(compose(&iota(5, 5).unwrap(), &e).unwrap(), e);
        assert!(matches!(
            compose(&oi(3, &[1, 2]), &oi(3, &[1, 2])),
            Err(Error::WidthMismatch { .. })
        ));
    }

    #[test]
    fn iota_examples() {
        assert_eq!(iota(2, 4).unwrap().image(), &[1, 2]);
        assert!(iota(0, 3).unwrap().image().is_empty());
        assert!(iota(3, 3).unwrap().is_identity());
        assert!(iota(4, 3).is_err());
    }

    #[test]
    fn enumerate_examples() {
        let imgs = |v: Vec<OIMorphism>| v.iter().map(|e| e.image().to_vec()).collect::<Vec<_>>();
        assert_eq!(imgs(enumerate_oi(1, 2)), vec![vec![1], vec![2]]);
        assert_eq!(imgs(enumerate_oi(2, 3)), vec![vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert!(enumerate_oi(3, 2).is_empty());
        assert_eq!(enumerate_oi(0, 3).len(), 1);

        let fimgs: Vec<_> = enumerate_fi(2, 2).iter().map(|p| p.image().to_vec()).collect();
        assert_eq!(fimgs, vec![vec![1, 2], vec![2, 1]]);
        assert_eq!(enumerate_fi(1, 3).len(), 3);
        assert_eq!(enumerate_fi(2, 4).len(), 12);
        assert!(enumerate_fi(3, 2).is_empty());
    }

    #[test]
    fn counts_and_ranks() {
        for n in 0..=7 {
            for m in 0..=n + 1 {
                let all = enumerate_oi(m, n);
                assert_eq!(all.len(), binomial(n, m));
                for (r, e) in all.iter().enumerate() {
                    assert_eq!(oi_rank(e.image(), n), r);
                    assert_eq!(oi_unrank(r, m, n), e.image());
                }
                let falling: usize = (0..m).map(|i| n.saturating_sub(i)).product();
                assert_eq!(enumerate_fi(m, n).len(), if m > n { 0 } else { falling });
            }
        }
    }

    #[test]
    fn decomposition_through_one_step() {
        for n in 2..=6 {
            for m in 1..n {
                let direct: BTreeSet<_> = enumerate_oi(m, n).into_iter().collect();
                let mut via = BTreeSet::new();
                for beta in enumerate_oi(m + 1, n) {
                    for alpha in enumerate_oi(m, m + 1) {
                        via.insert(compose(&beta, &alpha).unwrap());
                    }
                }
                assert_eq!(direct, via, "OI m={m} n={n}");

                if n <= 5 {
                    let direct: BTreeSet<_> = enumerate_fi(m, n).into_iter().collect();
                    let mut via = BTreeSet::new();
                    for beta in enumerate_fi(m + 1, n) {
                        for alpha in enumerate_fi(m, m + 1) {
                            via.insert(beta.compose(&alpha).unwrap());
                        }
                    }
                    assert_eq!(direct, via, "FI m={m} n={n}");
                }
            }
        }
    }

    #[test]
    fn fi_factor_examples() {
        let (t, s) = fi_factor(&fi(3, &[3, 1]));
        assert_eq!((t.image(), s.image()), (&[1, 3][..], &[2, 1][..]));
        let (t, s) = fi_factor(&fi(4, &[2, 4, 1]));
        assert_eq!((t.image(), s.image()), (&[1, 2, 4][..], &[2, 3, 1][..]));
        let (_, s) = fi_factor(&fi(5, &[1, 4, 5]));
        assert_eq!(s, FIMorphism::identity(3));
    }

    #[test]
    fn fi_factor_round_trip_exhaustive() {
        for n in 0..=5 {
            for d in 0..=n {
                for pi in enumerate_fi(d, n) {
                    let (tilde, sigma) = fi_factor(&pi);
                    assert_eq!(tilde.as_fi().compose(&sigma).unwrap(), pi);
                    let mut img = sigma.image().to_vec();
                    img.sort_unstable();
                    assert_eq!(img, (1..=d as u32).collect::<Vec<_>>());
                }
            }
        }
    }

    #[test]
    fn inc_extension_examples() {
        let ext = inc_extension(&oi(4, &[1, 3])).unwrap();
        assert_eq!(ext.values(6), vec![1, 3, 4, 5, 6, 7]);
        let ext = inc_extension(&OIMorphism::identity(3)).unwrap();
        assert_eq!(ext.values(6), vec![1, 2, 3, 4, 5, 6]);
        let ext = inc_extension(&oi(2, &[2])).unwrap();
        assert_eq!(ext.values(4), vec![2, 3, 4, 5]);
        assert!(matches!(inc_extension(&oi(3, &[])), Err(Error::EmptySource)));
    }

    #[test]
    fn inc_extension_restricts_to_base() {
        for n in 1..=5 {
            for m in 1..=n {
                for eps in enumerate_oi(m, n) {
                    let ext = inc_extension(&eps).unwrap();
                    let vals = ext.values(m + 4);
                    assert!(vals.windows(2).all(|w| w[0] < w[1]));
                    // [m] -> [ε(m)] followed by the inclusion into [n]
                    let r = ext.restrict(m);
                    let back = compose(&iota(r.target(), n).unwrap(), &r).unwrap();
                    assert_eq!(back, eps);
                }
            }
        }
    }

    #[test]
    fn text_form() {
        let e: OIMorphism = "[2->4: 1,3]".parse().unwrap();
        assert_eq!(e, oi(4, &[1, 3]));
        assert_eq!(e.to_string(), "[2->4: 1,3]");
        let empty: OIMorphism = "[0->3: ]".parse().unwrap();
        assert_eq!(empty.to_string(), "[0->3: ]");
        assert!("[2->4: 3,1]".parse::<OIMorphism>().is_err());
        assert!("[2->4: 3,1]".parse::<FIMorphism>().is_ok());
        assert!("[2->4: 1]".parse::<OIMorphism>().is_err());
    }
}
