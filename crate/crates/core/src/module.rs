//! Width components of finitely generated free OI-modules
//! `⊕_λ F(d_λ)(-s_λ)` over the polynomial OI-algebra.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::coeff::Field;
use crate::error::{Error, Result};
use crate::oi::{binomial, compose, enumerate_oi, OIMorphism};
use crate::polyring::{Monomial, Polynomial, VariableScheme};

/// One summand `F(d)(-shift)`: its basis symbols `e_π` sit in degree `shift`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Slot {
    pub d: usize,
    pub shift: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub scheme: VariableScheme,
    pub slots: Vec<Slot>,
}

impl Signature {
    pub fn new(scheme: VariableScheme, slots: Vec<Slot>) -> Self {
        Signature { scheme, slots }
    }

    /// `F(0)`, i.e. the algebra itself.
    pub fn ring(scheme: VariableScheme) -> Self {
        Signature {
            scheme,
            slots: vec![Slot { d: 0, shift: 0 }],
        }
    }

    pub fn free(scheme: VariableScheme, d: usize) -> Self {
        Signature {
            scheme,
            slots: vec![Slot { d, shift: 0 }],
        }
    }

    /// Rank of the width-`n` component as a free module over the width-`n`
    /// polynomial ring.
    pub fn rank(&self, n: usize) -> usize {
        self.slots.iter().map(|s| binomial(n, s.d)).sum()
    }

    /// Basis symbols `(slot, π)` of the width-`n` component, slot-major and
    /// lexicographic in `π`.
    pub fn basis(&self, n: usize) -> Vec<(usize, OIMorphism)> {
        let mut out = Vec::with_capacity(self.rank(n));
        for (k, s) in self.slots.iter().enumerate() {
            out.extend(enumerate_oi(s.d, n).into_iter().map(|p| (k, p)));
        }
        out
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, s) in self.slots.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "({},{})", s.d, s.shift)?;
        }
        Ok(())
    }
}

/// `x^u · e_π` in slot `slot`, at width `mono.width() == basis.target()`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ModuleMonomial {
    pub slot: usize,
    pub basis: OIMorphism,
    pub mono: Monomial,
}

impl fmt::Debug for ModuleMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}·e{{{}; {}}}", self.mono.exponents(), self.slot, self.basis)
    }
}

impl ModuleMonomial {
    pub fn new(slot: usize, basis: OIMorphism, mono: Monomial) -> Result<Self> {
        if basis.target() != mono.width() {
            return Err(Error::WidthMismatch {
                expected: mono.width(),
                found: basis.target(),
            });
        }
        Ok(ModuleMonomial { slot, basis, mono })
    }

    pub fn width(&self) -> usize {
        self.mono.width()
    }

    /// Internal degree: total degree of the ring part plus the slot shift.
    pub fn degree(&self, sig: &Signature) -> i64 {
        self.mono.degree() as i64 + sig.slots[self.slot].shift
    }

    pub fn apply_oi(&self, scheme: &VariableScheme, eps: &OIMorphism) -> Result<Self> {
        Ok(ModuleMonomial {
            slot: self.slot,
            basis: compose(eps, &self.basis)?,
            mono: self.mono.apply_oi(scheme, eps)?,
        })
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        ModuleMonomial {
            slot: self.slot,
            basis: self.basis.clone(),
            mono: self.mono.mul(m),
        }
    }
}

/// Structural order: width, then the basis image lexicographically, then
/// slot, then the ring monomial lexicographically. This coincides with the
/// `paper_lex` monomial order.
impl Ord for ModuleMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.width()
            .cmp(&other.width())
            .then_with(|| self.basis.image().cmp(other.basis.image()))
            .then_with(|| self.slot.cmp(&other.slot))
            .then_with(|| self.mono.exponents().cmp(other.mono.exponents()))
    }
}

impl PartialOrd for ModuleMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// An element of the width-`n` component of a free module.
#[derive(Clone)]
pub struct ModuleElement<F: Field> {
    width: usize,
    terms: BTreeMap<ModuleMonomial, F::Elem>,
}

impl<F: Field> PartialEq for ModuleElement<F> {
    fn eq(&self, other: &Self) -> bool {
        self.width == other.width && self.terms == other.terms
    }
}

impl<F: Field> Eq for ModuleElement<F> {}

impl<F: Field> fmt::Debug for ModuleElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ModuleElement")
            .field("width", &self.width)
            .field("terms", &self.terms)
            .finish()
    }
}

impl<F: Field> ModuleElement<F> {
    pub fn zero(width: usize) -> Self {
        ModuleElement {
            width,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_term(field: &F, c: F::Elem, t: ModuleMonomial) -> Self {
        let mut q = Self::zero(t.width());
        q.add_term(field, t, c);
        q
    }

    /// The basis symbol `e_π` of `slot` at width `π.target()`.
    pub fn basis_element(field: &F, sig: &Signature, slot: usize, pi: OIMorphism) -> Self {
        let mono = sig.scheme.one(pi.target());
        Self::from_term(field, field.one(), ModuleMonomial { slot, basis: pi, mono })
    }

    pub fn from_terms(
        field: &F,
        width: usize,
        terms: impl IntoIterator<Item = (ModuleMonomial, F::Elem)>,
    ) -> Result<Self> {
        let mut q = Self::zero(width);
        for (t, c) in terms {
            if t.width() != width {
                return Err(Error::WidthMismatch {
                    expected: width,
                    found: t.width(),
                });
            }
            q.add_term(field, t, c);
        }
        Ok(q)
    }

    pub(crate) fn add_term(&mut self, field: &F, t: ModuleMonomial, c: F::Elem) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(t) {
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

    /// Terms in increasing structural order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ModuleMonomial, &F::Elem)> + Clone {
        self.terms.iter()
    }

    pub fn coefficient(&self, t: &ModuleMonomial) -> Option<&F::Elem> {
        self.terms.get(t)
    }

    /// Checks that every term is valid for `sig` at this width.
    pub fn validate(&self, sig: &Signature) -> Result<()> {
        for t in self.terms.keys() {
            let slot = sig.slots.get(t.slot).ok_or(Error::SignatureMismatch)?;
            if slot.d != t.basis.source() || t.mono.exponents().len() != sig.scheme.nvars(self.width) {
                return Err(Error::SignatureMismatch);
            }
        }
        Ok(())
    }

    /// `Some(j)` when every term has internal degree `j`.
    pub fn homogeneous_degree(&self, sig: &Signature) -> Option<i64> {
        let mut it = self.terms.keys().map(|t| t.degree(sig));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    fn check_width(&self, other: &Self) -> Result<()> {
        if self.width != other.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                found: other.width,
            });
        }
        Ok(())
    }

    pub fn add(&self, field: &F, other: &Self) -> Result<Self> {
        self.check_width(other)?;
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(field, t.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, field: &F, other: &Self) -> Result<Self> {
        self.check_width(other)?;
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(field, t.clone(), field.neg(c));
        }
        Ok(out)
    }

    pub fn scale(&self, field: &F, c: &F::Elem) -> Self {
        let mut out = Self::zero(self.width);
        if field.is_zero(c) {
            return out;
        }
        for (t, a) in &self.terms {
            out.terms.insert(t.clone(), field.mul(a, c));
        }
        out
    }

    pub fn mul_monomial(&self, field: &F, c: &F::Elem, m: &Monomial) -> Self {
        let mut out = Self::zero(self.width);
        if field.is_zero(c) {
            return out;
        }
        for (t, a) in &self.terms {
            out.terms.insert(t.mul_monomial(m), field.mul(a, c));
        }
        out
    }

    /// Multiplication by a ring element of the same width.
    pub fn mul_polynomial(&self, field: &F, f: &Polynomial<F>) -> Result<Self> {
        if f.width() != self.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                found: f.width(),
            });
        }
        let mut out = Self::zero(self.width);
        for (m, a) in f.terms() {
            for (t, b) in &self.terms {
                out.add_term(field, t.mul_monomial(m), field.mul(a, b));
            }
        }
        Ok(out)
    }

    /// The module map `F(ε)`: `a e_π ↦ ε*(a) e_{ε∘π}`.
    pub fn apply_oi(&self, field: &F, scheme: &VariableScheme, eps: &OIMorphism) -> Result<Self> {
        if eps.source() != self.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                found: eps.source(),
            });
        }
        let mut out = Self::zero(eps.target());
        for (t, c) in &self.terms {
            out.add_term(field, t.apply_oi(scheme, eps)?, c.clone());
        }
        Ok(out)
    }
}

/// The images of the generator `e_{id}` of slot `slot` in every width of
/// `widths`.
pub fn generator_orbit<F: Field>(
    field: &F,
    sig: &Signature,
    slot: usize,
    widths: impl IntoIterator<Item = usize>,
) -> Result<Vec<ModuleElement<F>>> {
    let d = sig.slots.get(slot).ok_or(Error::SignatureMismatch)?.d;
    let generator = ModuleElement::basis_element(field, sig, slot, OIMorphism::identity(d));
    let mut out = Vec::new();
    for n in widths {
        for eps in enumerate_oi(d, n) {
            out.push(generator.apply_oi(field, &sig.scheme, &eps)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Rationals;
    use crate::text::{parse_element, parse_polynomial};

    const T1: VariableScheme = VariableScheme::Tensor { c: 1 };
    const T2: VariableScheme = VariableScheme::Tensor { c: 2 };

    fn el(sig: &Signature, w: usize, s: &str) -> ModuleElement<Rationals> {
        parse_element(&Rationals, sig, s, Some(w)).unwrap()
    }

    fn oi(n: usize, img: &[u32]) -> OIMorphism {
        OIMorphism::new(n, img.to_vec()).unwrap()
    }

    #[test]
    fn apply_examples() {
        let k = Rationals;
        let sig = Signature::free(T1, 1);
        let q = el(&sig, 1, "x[1,1]*e{1}");
        assert_eq!(q.apply_oi(&k, &T1, &oi(2, &[2])).unwrap(), el(&sig, 2, "x[1,2]*e{2}"));
        let q = el(&sig, 3, "x[1,1]^2*e{2} - 3*x[1,3]*e{1}");
        assert_eq!(q.apply_oi(&k, &T1, &OIMorphism::identity(3)).unwrap(), q);
        let q1 = el(&sig, 2, "x[1,1]*e{2}");
        let q2 = el(&sig, 2, "x[1,2]*e{1} + e{2}");
        let e = oi(4, &[2, 4]);
        assert_eq!(
            q1.add(&k, &q2).unwrap().apply_oi(&k, &T1, &e).unwrap(),
            q1.apply_oi(&k, &T1, &e)
                .unwrap()
                .add(&k, &q2.apply_oi(&k, &T1, &e).unwrap())
                .unwrap()
        );
    }

    #[test]
    fn degree_examples() {
        let sig = Signature::new(
            T1,
            vec![
                Slot { d: 1, shift: 0 },
                Slot { d: 1, shift: 3 },
                Slot { d: 1, shift: -1 },
            ],
        );
        let t = |s: &str| el(&sig, 2, s).terms().next().unwrap().0.clone();
        assert_eq!(t("x[1,1]^2*e{λ=0; 1}").degree(&sig), 2);
        assert_eq!(t("e{λ=1; 2}").degree(&sig), 3);
        assert_eq!(t("x[1,1]*e{λ=2; 2}").degree(&sig), 0);
    }

    #[test]
    fn orbit_examples() {
        let k = Rationals;
        let sig = Signature::new(
            T1,
            vec![
                Slot { d: 1, shift: 0 },
                Slot { d: 0, shift: 0 },
                Slot { d: 2, shift: 0 },
            ],
        );
        let orb = generator_orbit(&k, &sig, 0, [2]).unwrap();
        assert_eq!(orb, vec![el(&sig, 2, "e{λ=0; 1}"), el(&sig, 2, "e{λ=0; 2}")]);
        for n in 0..4 {
            assert_eq!(generator_orbit(&k, &sig, 1, [n]).unwrap().len(), 1);
        }
        assert_eq!(generator_orbit(&k, &sig, 2, [3]).unwrap().len(), 3);
        assert_eq!(sig.rank(4), 4 + 1 + 6);
    }

    #[test]
    fn functoriality_and_compatibility() {
        let k = Rationals;
        let sig = Signature::free(T2, 1);
        let q = el(&sig, 2, "x[1,1]*x[2,2]*e{1} - 2*x[2,1]^2*e{2} + e{1}");
        let a = parse_polynomial(&k, &T2, "x[1,1] + 3*x[2,1]^2", Some(1)).unwrap();
        for n in 2..=4 {
            for e1 in enumerate_oi(2, n) {
                let img = q.apply_oi(&k, &T2, &e1).unwrap();
                for t in img.terms() {
                    let src_deg: std::collections::BTreeSet<_> = q.terms().map(|(s, _)| s.degree(&sig)).collect();
                    assert!(src_deg.contains(&t.0.degree(&sig)));
                }
                for p in n..=5 {
                    for e2 in enumerate_oi(n, p) {
                        let direct = q.apply_oi(&k, &T2, &compose(&e2, &e1).unwrap()).unwrap();
                        assert_eq!(direct, img.apply_oi(&k, &T2, &e2).unwrap());
                    }
                }
                // F(ε)(ε̃*(a)·q) = (ε∘ε̃)*(a)·F(ε)(q) with ε̃: [1] -> [2]
                for et in enumerate_oi(1, 2) {
                    let lhs = q
                        .mul_polynomial(&k, &a.apply_oi(&k, &et).unwrap())
                        .unwrap()
                        .apply_oi(&k, &T2, &e1)
                        .unwrap();
                    let rhs = img
                        .mul_polynomial(&k, &a.apply_oi(&k, &compose(&e1, &et).unwrap()).unwrap())
                        .unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn rank_is_binomial() {
        for d in 0..4 {
            let sig = Signature::free(T1, d);
            for n in 0..7 {
                assert_eq!(sig.rank(n), binomial(n, d));
                assert_eq!(sig.basis(n).len(), binomial(n, d));
            }
        }
    }
}
