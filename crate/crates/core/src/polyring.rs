//! Width-indexed polynomial rings.
//!
//! Two variable schemes are supported:
//!
//! * `Tensor(c)`: the ring `K[x_{i,j} : i ∈ [c], j ∈ [n]]` at width `n`, on
//!   which an OI-morphism `ε` acts by `x_{i,j} ↦ x_{i,ε(j)}`.
//! * `DegreeD(d)`: the ring `K[x_π : π ∈ Hom_OI([d],[n])]`, with
//!   `x_π ↦ x_{ε∘π}`.
//!
//! Monomials are dense exponent vectors over the variables at their width.
//! Variables are indexed so that index order is the variable order used by
//! the shipped monomial orders: `x_{1,1} > x_{1,2} > ... > x_{2,1} > ...` in
//! the tensor scheme and lexicographic order of `π` in the degree-`d` scheme.
//! With that indexing the derived `Ord` on exponent vectors is exactly the
//! lexicographic monomial order.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::coeff::Field;
use crate::error::{Error, Result};
use crate::oi::{binomial, oi_rank, oi_unrank, FIMorphism, OIMorphism};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VariableScheme {
    Tensor { c: usize },
    DegreeD { d: usize },
}

/// A variable, identified independently of its index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKey {
    /// `x_{row,col}`, both 1-based.
    Tensor(u32, u32),
    /// `x_π` with `π` given by its increasing image.
    Degree(Vec<u32>),
}

impl VariableScheme {
    pub fn tensor(c: usize) -> Result<Self> {
        if c == 0 {
            return Err(Error::parse("tensor scheme needs c >= 1"));
        }
        Ok(VariableScheme::Tensor { c })
    }

    pub fn nvars(&self, width: usize) -> usize {
        match *self {
            VariableScheme::Tensor { c } => c * width,
            VariableScheme::DegreeD { d } => binomial(width, d),
        }
    }

    pub fn rows(&self) -> Option<usize> {
        match *self {
            VariableScheme::Tensor { c } => Some(c),
            VariableScheme::DegreeD { .. } => None,
        }
    }

    pub fn key(&self, width: usize, idx: usize) -> VarKey {
        match *self {
            VariableScheme::Tensor { .. } => VarKey::Tensor((idx / width) as u32 + 1, (idx % width) as u32 + 1),
            VariableScheme::DegreeD { d } => VarKey::Degree(oi_unrank(idx, d, width)),
        }
    }

    pub fn index(&self, width: usize, key: &VarKey) -> Result<usize> {
        match (*self, key) {
            (VariableScheme::Tensor { c }, VarKey::Tensor(i, j)) => {
                let (i, j) = (*i as usize, *j as usize);
                if i == 0 || i > c || j == 0 || j > width {
                    return Err(Error::parse(format!(
                        "variable x[{i},{j}] out of range for c = {c}, width {width}"
                    )));
                }
                Ok((i - 1) * width + (j - 1))
            }
            (VariableScheme::DegreeD { d }, VarKey::Degree(pi)) => {
                if pi.len() != d {
                    return Err(Error::parse(format!("variable x{pi:?} needs {d} indices")));
                }
                OIMorphism::new(width, pi.clone())?;
                Ok(oi_rank(pi, width))
            }
            _ => Err(Error::SchemeMismatch),
        }
    }

    /// Largest position of `[width]` the variable depends on (0 if none).
    pub(crate) fn last_position(&self, width: usize, idx: usize) -> u32 {
        match *self {
            VariableScheme::Tensor { .. } => (idx % width) as u32 + 1,
            VariableScheme::DegreeD { d } => oi_unrank(idx, d, width).last().copied().unwrap_or(0),
        }
    }

    /// Image of variable `idx` at width `width` under a map of positions.
    /// `map` must be injective on the positions the variable depends on.
    pub(crate) fn map_index(&self, width: usize, idx: usize, target: usize, map: &[u32]) -> usize {
        match *self {
            VariableScheme::Tensor { .. } => {
                let (row, col) = (idx / width, idx % width);
                row * target + (map[col] as usize - 1)
            }
            VariableScheme::DegreeD { d } => {
                let mut img: Vec<u32> = oi_unrank(idx, d, width)
                    .into_iter()
                    .map(|j| map[j as usize - 1])
                    .collect();
                img.sort_unstable();
                oi_rank(&img, target)
            }
        }
    }

    pub fn one(&self, width: usize) -> Monomial {
        Monomial {
            width,
            exps: vec![0; self.nvars(width)],
        }
    }

    pub fn var(&self, width: usize, key: &VarKey) -> Result<Monomial> {
        let mut m = self.one(width);
        m.exps[self.index(width, key)?] = 1;
        Ok(m)
    }
}

impl fmt::Display for VariableScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VariableScheme::Tensor { c } => write!(f, "tensor({c})"),
            VariableScheme::DegreeD { d } => write!(f, "degree({d})"),
        }
    }
}

impl FromStr for VariableScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let arg = |name: &str| -> Option<usize> {
            t.strip_prefix(name)?
                .strip_prefix(['(', ':'])?
                .trim_end_matches(')')
                .parse()
                .ok()
        };
        if let Some(c) = arg("tensor") {
            return VariableScheme::tensor(c);
        }
        if let Some(d) = arg("degree") {
            return Ok(VariableScheme::DegreeD { d });
        }
        Err(Error::parse(format!(
            "unknown scheme `{s}` (expected tensor(c) or degree(d))"
        )))
    }
}

/// A monomial at a fixed width: a dense exponent vector over the variables
/// of the scheme at that width.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Monomial {
    pub(crate) width: usize,
    pub(crate) exps: Vec<u32>,
}

impl Monomial {
    pub fn from_exponents(width: usize, exps: Vec<u32>) -> Self {
        Monomial { width, exps }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u64 {
        self.exps.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Classical divisibility at equal width.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.width == other.width && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.width, other.width);
        Monomial {
            width: self.width,
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }

    /// `self / other`, if `other` divides `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        Some(Monomial {
            width: self.width,
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.width, other.width);
        Monomial {
            width: self.width,
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| *a.max(b)).collect(),
        }
    }

    /// Nonzero entries as `(variable index, exponent)`.
    pub fn support(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| (i, e))
    }

    /// `ε*(self)`.
    pub fn apply_oi(&self, scheme: &VariableScheme, eps: &OIMorphism) -> Result<Monomial> {
        if eps.source() != self.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                found: eps.source(),
            });
        }
        Ok(self.map_positions(scheme, eps.target(), eps.image()))
    }

    /// Image under an injection. In the degree-`d` scheme variable indices
    /// are sorted after mapping.
    pub fn apply_fi(&self, scheme: &VariableScheme, pi: &FIMorphism) -> Result<Monomial> {
        if pi.source() != self.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                found: pi.source(),
            });
        }
        Ok(self.map_positions(scheme, pi.target(), pi.image()))
    }

    pub(crate) fn map_positions(&self, scheme: &VariableScheme, target: usize, map: &[u32]) -> Monomial {
        let mut out = scheme.one(target);
        for (idx, e) in self.support() {
            out.exps[scheme.map_index(self.width, idx, target, map)] += e;
        }
        out
    }

    /// Total exponent in each row of the tensor scheme.
    pub fn row_masses(&self, scheme: &VariableScheme) -> Result<Vec<u64>> {
        let c = scheme.rows().ok_or(Error::SchemeMismatch)?;
        let w = self.width;
        Ok((0..c)
            .map(|r| self.exps[r * w..(r + 1) * w].iter().map(|&e| e as u64).sum())
            .collect())
    }
}

/// A divisibility witness: `ν = map*(μ) · cofactor`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness<M> {
    pub morphism: M,
    pub cofactor: Monomial,
}

/// Variables of `mu` grouped by the last position they depend on.
fn position_groups(scheme: &VariableScheme, mu: &Monomial) -> Vec<Vec<(usize, u32)>> {
    let mut groups = vec![Vec::new(); mu.width + 1];
    for (idx, e) in mu.support() {
        groups[scheme.last_position(mu.width, idx) as usize].push((idx, e));
    }
    groups
}

/// Backtracking search for position maps `[m] -> [n]` along which `mu`
/// divides `nu`. `fixed[i]` pins position `i + 1` when nonzero. Candidates
/// are tried in increasing order, so maps are produced lexicographically.
pub(crate) fn search_position_maps(
    scheme: &VariableScheme,
    mu: &Monomial,
    nu: &Monomial,
    fixed: &[u32],
    increasing: bool,
    first_only: bool,
) -> Vec<Vec<u32>> {
    let (m, n) = (mu.width, nu.width);
    let mut out = Vec::new();
    if m > n || mu.degree() > nu.degree() {
        return out;
    }
    let groups = position_groups(scheme, mu);
    // variables that depend on no position (x_∅ in the degree-0 scheme)
    for &(idx, e) in &groups[0] {
        if nu.exps[scheme.map_index(m, idx, n, &[])] < e {
            return out;
        }
    }

    struct Ctx<'a> {
        scheme: &'a VariableScheme,
        mu_width: usize,
        nu: &'a Monomial,
        groups: &'a [Vec<(usize, u32)>],
        fixed: &'a [u32],
        increasing: bool,
        first_only: bool,
    }

    fn rec(ctx: &Ctx<'_>, map: &mut Vec<u32>, used: &mut [bool], out: &mut Vec<Vec<u32>>) -> bool {
        let m = ctx.mu_width;
        let n = ctx.nu.width as u32;
        let i = map.len();
        if i == m {
            out.push(map.clone());
            return ctx.first_only;
        }
        let (lo, hi) = if ctx.increasing {
            (map.last().copied().unwrap_or(0) + 1, n - (m - i - 1) as u32)
        } else {
            (1, n)
        };
        let pinned = ctx.fixed.get(i).copied().unwrap_or(0);
        for v in lo..=hi {
            if pinned != 0 && v != pinned {
                continue;
            }
            if used[v as usize] {
                continue;
            }
            map.push(v);
            let ok = ctx.groups[i + 1]
                .iter()
                .all(|&(idx, e)| ctx.nu.exps[ctx.scheme.map_index(m, idx, ctx.nu.width, map)] >= e);
            if ok {
                used[v as usize] = true;
                let done = rec(ctx, map, used, out);
                used[v as usize] = false;
                if done {
                    return true;
                }
            }
            map.pop();
        }
        false
    }

    let ctx = Ctx {
        scheme,
        mu_width: m,
        nu,
        groups: &groups,
        fixed,
        increasing,
        first_only,
    };
    rec(&ctx, &mut Vec::with_capacity(m), &mut vec![false; n + 1], &mut out);
    out
}

fn ring_witness<M>(
    scheme: &VariableScheme,
    mu: &Monomial,
    nu: &Monomial,
    map: Vec<u32>,
    wrap: impl Fn(Vec<u32>) -> M,
) -> Witness<M> {
    let image = mu.map_positions(scheme, nu.width, &map);
    let cofactor = nu.checked_div(&image).expect("search only yields dividing maps");
    Witness {
        morphism: wrap(map),
        cofactor,
    }
}

/// First OI-morphism `ε` (in lexicographic order) with `ε*(mu) | nu`.
pub fn oi_divides_ring(scheme: &VariableScheme, mu: &Monomial, nu: &Monomial) -> Option<Witness<OIMorphism>> {
    let maps = search_position_maps(scheme, mu, nu, &[], true, true);
    maps.into_iter()
        .next()
        .map(|m| ring_witness(scheme, mu, nu, m, |img| OIMorphism::from_raw(nu.width, img)))
}

/// All OI-witnesses, lexicographically ordered.
pub fn oi_divides_ring_all(scheme: &VariableScheme, mu: &Monomial, nu: &Monomial) -> Vec<Witness<OIMorphism>> {
    search_position_maps(scheme, mu, nu, &[], true, false)
        .into_iter()
        .map(|m| ring_witness(scheme, mu, nu, m, |img| OIMorphism::from_raw(nu.width, img)))
        .collect()
}

/// First injection `π` (lexicographic in the image tuple) with `π*(mu) | nu`.
pub fn fi_divides_ring(scheme: &VariableScheme, mu: &Monomial, nu: &Monomial) -> Option<Witness<FIMorphism>> {
    let maps = search_position_maps(scheme, mu, nu, &[], false, true);
    maps.into_iter().next().map(|m| {
        ring_witness(scheme, mu, nu, m, |img| {
            FIMorphism::new(nu.width, img).expect("search yields injections")
        })
    })
}

/// Every monomial of `f` has total degree divisible by `e`.
pub fn in_veronese<F: Field>(f: &Polynomial<F>, e: u64) -> bool {
    assert!(e > 0, "Veronese degree must be positive");
    f.terms.keys().all(|m| m.degree() % e == 0)
}

/// All rows of a tensor-scheme monomial carry the same total exponent.
pub fn in_segre(scheme: &VariableScheme, mu: &Monomial) -> Result<bool> {
    let masses = mu.row_masses(scheme)?;
    Ok(masses.windows(2).all(|w| w[0] == w[1]))
}

/// A polynomial at a fixed width. Terms are keyed by monomial; zero
/// coefficients are never stored.
#[derive(Clone)]
pub struct Polynomial<F: Field> {
    scheme: VariableScheme,
    width: usize,
    terms: BTreeMap<Monomial, F::Elem>,
}

impl<F: Field> PartialEq for Polynomial<F> {
    fn eq(&self, other: &Self) -> bool {
        self.scheme == other.scheme && self.width == other.width && self.terms == other.terms
    }
}

impl<F: Field> Eq for Polynomial<F> {}

impl<F: Field> fmt::Debug for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Polynomial")
            .field("width", &self.width)
            .field("terms", &self.terms)
            .finish()
    }
}

impl<F: Field> Polynomial<F> {
    pub fn zero(scheme: VariableScheme, width: usize) -> Self {
        Polynomial {
            scheme,
            width,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &F, scheme: VariableScheme, width: usize, c: F::Elem) -> Self {
        Self::term(field, scheme, c, scheme.one(width))
    }

    pub fn term(field: &F, scheme: VariableScheme, c: F::Elem, mono: Monomial) -> Self {
        let mut p = Self::zero(scheme, mono.width);
        if !field.is_zero(&c) {
            p.terms.insert(mono, c);
        }
        p
    }

    pub fn from_terms(
        field: &F,
        scheme: VariableScheme,
        width: usize,
        terms: impl IntoIterator<Item = (Monomial, F::Elem)>,
    ) -> Result<Self> {
        let mut p = Self::zero(scheme, width);
        for (m, c) in terms {
            if m.width != width || m.exps.len() != scheme.nvars(width) {
                return Err(Error::WidthMismatch {
                    expected: width,
                    found: m.width,
                });
            }
            p.add_term(field, m, c);
        }
        Ok(p)
    }

    pub(crate) fn add_term(&mut self, field: &F, m: Monomial, c: F::Elem) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                if !field.is_zero(&c) {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                let s = field.add(o.get(), &c);
                if field.is_zero(&s) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn scheme(&self) -> VariableScheme {
        self.scheme
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &F::Elem)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&F::Elem> {
        self.terms.get(m)
    }

    /// Largest monomial in lexicographic order.
    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.keys().next_back()
    }

    /// `Some(j)` when every term has total degree `j`.
    pub fn homogeneous_degree(&self) -> Option<u64> {
        let mut it = self.terms.keys().map(Monomial::degree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.scheme != other.scheme {
            return Err(Error::SchemeMismatch);
        }
        if self.width != other.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                found: other.width,
            });
        }
        Ok(())
    }

    pub fn add(&self, field: &F, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(field, m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self, field: &F) -> Self {
        Polynomial {
            scheme: self.scheme,
            width: self.width,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), field.neg(c))).collect(),
        }
    }

    pub fn sub(&self, field: &F, other: &Self) -> Result<Self> {
        self.add(field, &other.neg(field))
    }

    pub fn scale(&self, field: &F, c: &F::Elem) -> Self {
        if field.is_zero(c) {
            return Self::zero(self.scheme, self.width);
        }
        Polynomial {
            scheme: self.scheme,
            width: self.width,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), field.mul(a, c))).collect(),
        }
    }

    pub fn mul_monomial(&self, field: &F, c: &F::Elem, mono: &Monomial) -> Self {
        let mut out = Self::zero(self.scheme, self.width);
        if field.is_zero(c) {
            return out;
        }
        for (m, a) in &self.terms {
            out.terms.insert(m.mul(mono), field.mul(a, c));
        }
        out
    }

    pub fn mul(&self, field: &F, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.scheme, self.width);
        for (m, a) in &self.terms {
            for (n, b) in &other.terms {
                out.add_term(field, m.mul(n), field.mul(a, b));
            }
        }
        Ok(out)
    }

    /// The ring homomorphism `ε*`.
    pub fn apply_oi(&self, field: &F, eps: &OIMorphism) -> Result<Self> {
        if eps.source() != self.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                found: eps.source(),
            });
        }
        let mut out = Self::zero(self.scheme, eps.target());
        for (m, c) in &self.terms {
            out.add_term(field, m.apply_oi(&self.scheme, eps)?, c.clone());
        }
        Ok(out)
    }

    pub fn apply_fi(&self, field: &F, pi: &FIMorphism) -> Result<Self> {
        if pi.source() != self.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                found: pi.source(),
            });
        }
        let mut out = Self::zero(self.scheme, pi.target());
        for (m, c) in &self.terms {
            out.add_term(field, m.apply_fi(&self.scheme, pi)?, c.clone());
        }
        Ok(out)
    }
}
