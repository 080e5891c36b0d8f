//! Text forms of monomials, polynomials and module elements.
//!
//! ```text
//! polynomial   3/2*x[1,1]^2*x[1,2] - x[2,1] + 1      (tensor scheme)
//!              x(1,2)*x(2,3)*x(1,3)                  (degree-d scheme)
//! module term  x[1,1]^2 * e{λ=0; 1,3}                 slot 0, basis image (1,3)
//!              x[1,1] e{}                             single slot, d = 0
//! ```
//!
//! Whitespace is insignificant, `^1` and `*` between factors are optional,
//! and `l=` may be written instead of `λ=`. When no width is given, the
//! smallest width containing every index is used.

use crate::coeff::Field;
use crate::error::{Error, Result};
use crate::module::{ModuleElement, ModuleMonomial, Signature};
use crate::oi::{OIMorphism, MAX_WIDTH};
use crate::polyring::{Monomial, Polynomial, VarKey, VariableScheme};

#[derive(Debug)]
struct RawBasis {
    slot: Option<usize>,
    image: Vec<u32>,
}

#[derive(Debug)]
struct RawTerm {
    negative: bool,
    coefs: Vec<String>,
    vars: Vec<(VarKey, u32)>,
    basis: Option<RawBasis>,
}

struct Parser<'a> {
    src: &'a str,
    chars: Vec<char>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            src,
            chars: src.chars().collect(),
            pos: 0,
        }
    }

    fn err(&self, what: &str) -> Error {
        Error::parse(format!("{what} at position {} in `{}`", self.pos, self.src))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{c}`")))
        }
    }

    fn digits(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn small_int(&mut self) -> Result<u32> {
        let s = self.digits()?;
        s.parse().map_err(|_| self.err("number too large"))
    }

    /// Comma separated integers up to (not including) `close`.
    fn int_list(&mut self, close: char) -> Result<Vec<u32>> {
        let mut out = Vec::new();
        if self.peek() == Some(close) {
            return Ok(out);
        }
        loop {
            out.push(self.small_int()?);
            if !self.eat(',') {
                return Ok(out);
            }
        }
    }

    fn exponent(&mut self) -> Result<u32> {
        if self.eat('^') {
            self.small_int()
        } else {
            Ok(1)
        }
    }

    fn basis(&mut self) -> Result<RawBasis> {
        self.expect('{')?;
        let save = self.pos;
        let mut slot = None;
        self.skip_ws();
        let rest: String = self.chars[self.pos..].iter().take(7).collect();
        let label = ["lambda", "λ", "l"].into_iter().find(|l| rest.starts_with(l));
        if let Some(l) = label {
            self.pos += l.chars().count();
            if self.eat('=') {
                slot = Some(self.small_int()? as usize);
                if !self.eat(';') && self.peek() != Some('}') {
                    return Err(self.err("expected `;` after the slot"));
                }
            } else {
                self.pos = save;
            }
        }
        let image = self.int_list('}')?;
        self.expect('}')?;
        Ok(RawBasis { slot, image })
    }

    fn term(&mut self, negative: bool) -> Result<RawTerm> {
        let mut t = RawTerm {
            negative,
            coefs: Vec::new(),
            vars: Vec::new(),
            basis: None,
        };
        let mut first = true;
        loop {
            match self.peek() {
                Some('*') if !first => {
                    self.pos += 1;
                    continue;
                }
                Some(c) if c.is_ascii_digit() => {
                    let mut s = self.digits()?;
                    if self.eat('/') {
                        s.push('/');
                        s.push_str(&self.digits()?);
                    }
                    t.coefs.push(s);
                }
                Some('x') => {
                    self.pos += 1;
                    if self.eat('[') {
                        let i = self.small_int()?;
                        self.expect(',')?;
                        let j = self.small_int()?;
                        self.expect(']')?;
                        let e = self.exponent()?;
                        t.vars.push((VarKey::Tensor(i, j), e));
                    } else if self.eat('(') {
                        let img = self.int_list(')')?;
                        self.expect(')')?;
                        let e = self.exponent()?;
                        t.vars.push((VarKey::Degree(img), e));
                    } else {
                        return Err(self.err("expected `[` or `(` after `x`"));
                    }
                }
                Some('e') => {
                    self.pos += 1;
                    if t.basis.is_some() {
                        return Err(self.err("more than one basis symbol in a term"));
                    }
                    t.basis = Some(self.basis()?);
                }
                _ => break,
            }
            first = false;
        }
        if first {
            return Err(self.err("expected a term"));
        }
        Ok(t)
    }

    fn sum(&mut self) -> Result<Vec<RawTerm>> {
        let mut terms = Vec::new();
        let mut negative = false;
        if self.eat('-') {
            negative = true;
        } else {
            self.eat('+');
        }
        loop {
            terms.push(self.term(negative)?);
            if self.eat('+') {
                negative = false;
            } else if self.eat('-') {
                negative = true;
            } else {
                break;
            }
        }
        if self.peek().is_some() {
            return Err(self.err("unexpected trailing input"));
        }
        Ok(terms)
    }
}

fn parse_terms(text: &str) -> Result<Vec<RawTerm>> {
    let t = text.trim();
    if t == "0" {
        return Ok(Vec::new());
    }
    Parser::new(t).sum()
}

fn inferred_width(terms: &[RawTerm]) -> usize {
    let mut w = 0usize;
    for t in terms {
        for (k, _) in &t.vars {
            match k {
                VarKey::Tensor(_, j) => w = w.max(*j as usize),
                VarKey::Degree(img) => w = w.max(img.iter().copied().max().unwrap_or(0) as usize),
            }
        }
        if let Some(b) = &t.basis {
            w = w.max(b.image.iter().copied().max().unwrap_or(0) as usize);
        }
    }
    w
}

fn resolve_width(terms: &[RawTerm], width: Option<usize>) -> Result<usize> {
    let inferred = inferred_width(terms);
    let w = match width {
        Some(w) if w < inferred => {
            return Err(Error::parse(format!(
                "index {inferred} does not fit in declared width {w}"
            )))
        }
        Some(w) => w,
        None => inferred,
    };
    if w > MAX_WIDTH {
        return Err(Error::WidthTooLarge(w));
    }
    Ok(w)
}

fn coefficient<F: Field>(field: &F, t: &RawTerm) -> Result<F::Elem> {
    let mut c = field.one();
    for s in &t.coefs {
        c = field.mul(&c, &field.parse(s)?);
    }
    Ok(if t.negative { field.neg(&c) } else { c })
}

fn monomial_of(scheme: &VariableScheme, width: usize, t: &RawTerm) -> Result<Monomial> {
    let mut m = scheme.one(width);
    for (k, e) in &t.vars {
        let idx = scheme.index(width, k)?;
        m.exps[idx] += e;
    }
    Ok(m)
}

pub fn parse_monomial(scheme: &VariableScheme, text: &str, width: Option<usize>) -> Result<Monomial> {
    let terms = parse_terms(text)?;
    if terms.len() != 1 || terms[0].negative || terms[0].basis.is_some() {
        return Err(Error::parse(format!("`{text}` is not a monomial")));
    }
    if terms[0].coefs.iter().any(|c| c != "1") {
        return Err(Error::parse(format!("`{text}` is not a monomial")));
    }
    let w = resolve_width(&terms, width)?;
    monomial_of(scheme, w, &terms[0])
}

pub fn parse_polynomial<F: Field>(
    field: &F,
    scheme: &VariableScheme,
    text: &str,
    width: Option<usize>,
) -> Result<Polynomial<F>> {
    let terms = parse_terms(text)?;
    if terms.iter().any(|t| t.basis.is_some()) {
        return Err(Error::parse(format!("`{text}` contains a basis symbol")));
    }
    let w = resolve_width(&terms, width)?;
    let mut p = Polynomial::zero(*scheme, w);
    for t in &terms {
        p.add_term(field, monomial_of(scheme, w, t)?, coefficient(field, t)?);
    }
    Ok(p)
}

fn module_monomial_of(sig: &Signature, width: usize, t: &RawTerm) -> Result<ModuleMonomial> {
    let mono = monomial_of(&sig.scheme, width, t)?;
    let (slot, image) = match &t.basis {
        Some(b) => {
            let slot = match b.slot {
                Some(s) => s,
                None if sig.slots.len() == 1 => 0,
                None => {
                    return Err(Error::parse(
                        "basis symbol needs an explicit slot `λ=k;` for this signature",
                    ))
                }
            };
            (slot, b.image.clone())
        }
        None if sig.slots.len() == 1 && sig.slots[0].d == 0 => (0, Vec::new()),
        None => return Err(Error::parse("term is missing its basis symbol `e{...}`")),
    };
    let d = sig.slots.get(slot).ok_or(Error::SignatureMismatch)?.d;
    if image.len() != d {
        return Err(Error::parse(format!(
            "basis symbol of slot {slot} needs {d} indices, got {}",
            image.len()
        )));
    }
    ModuleMonomial::new(slot, OIMorphism::new(width, image)?, mono)
}

pub fn parse_module_monomial(sig: &Signature, text: &str, width: Option<usize>) -> Result<ModuleMonomial> {
    let terms = parse_terms(text)?;
    if terms.len() != 1 || terms[0].negative || terms[0].coefs.iter().any(|c| c != "1") {
        return Err(Error::parse(format!("`{text}` is not a module monomial")));
    }
    let w = resolve_width(&terms, width)?;
    module_monomial_of(sig, w, &terms[0])
}

pub fn parse_element<F: Field>(
    field: &F,
    sig: &Signature,
    text: &str,
    width: Option<usize>,
) -> Result<ModuleElement<F>> {
    let terms = parse_terms(text)?;
    let w = resolve_width(&terms, width)?;
    let mut q = ModuleElement::zero(w);
    for t in &terms {
        q.add_term(field, module_monomial_of(sig, w, t)?, coefficient(field, t)?);
    }
    Ok(q)
}

pub fn render_monomial(scheme: &VariableScheme, m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (idx, e) in m.support() {
        let var = match scheme.key(m.width(), idx) {
            VarKey::Tensor(i, j) => format!("x[{i},{j}]"),
            VarKey::Degree(img) => format!("x({})", img.iter().map(u32::to_string).collect::<Vec<_>>().join(",")),
        };
        parts.push(if e == 1 { var } else { format!("{var}^{e}") });
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

pub fn render_module_monomial(sig: &Signature, t: &ModuleMonomial) -> String {
    let img = t.basis.image().iter().map(u32::to_string).collect::<Vec<_>>().join(",");
    let basis = if sig.slots.len() > 1 {
        if img.is_empty() {
            format!("e{{λ={}}}", t.slot)
        } else {
            format!("e{{λ={}; {img}}}", t.slot)
        }
    } else {
        format!("e{{{img}}}")
    };
    if t.mono.is_one() {
        basis
    } else {
        format!("{}*{basis}", render_monomial(&sig.scheme, &t.mono))
    }
}

/// Joins `(coefficient, body)` pairs, where `body` is `None` for a bare
/// constant.
fn render_sum<'a, F: Field>(field: &F, terms: impl Iterator<Item = (&'a F::Elem, Option<String>)>) -> String
where
    F::Elem: 'a,
{
    let mut out = String::new();
    for (k, (c, body)) in terms.enumerate() {
        let negative = field.is_negative(c);
        let abs = if negative { field.neg(c) } else { c.clone() };
        if k == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        match body {
            None => out.push_str(&field.render(&abs)),
            Some(b) if field.is_one(&abs) => out.push_str(&b),
            Some(b) => {
                out.push_str(&field.render(&abs));
                out.push('*');
                out.push_str(&b);
            }
        }
    }
    if out.is_empty() {
        "0".to_string()
    } else {
        out
    }
}

/// Terms from the largest monomial down.
pub fn render_polynomial<F: Field>(field: &F, p: &Polynomial<F>) -> String {
    let scheme = p.scheme();
    render_sum(
        field,
        p.terms().rev().map(|(m, c)| {
            let body = (!m.is_one()).then(|| render_monomial(&scheme, m));
            (c, body)
        }),
    )
}

/// Terms from the largest module monomial down, in structural order.
pub fn render_element<F: Field>(field: &F, sig: &Signature, q: &ModuleElement<F>) -> String {
    render_sum(
        field,
        q.terms().rev().map(|(t, c)| (c, Some(render_module_monomial(sig, t)))),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{PrimeField, Rationals};
    use crate::module::Slot;
    use proptest::prelude::*;

    const T1: VariableScheme = VariableScheme::Tensor { c: 1 };
    const T2: VariableScheme = VariableScheme::Tensor { c: 2 };

    #[test]
    fn polynomial_grammar() {
        let k = Rationals;
        let p = parse_polynomial(&k, &T2, "3/2*x[1,1]^2*x[1,2] - x[2,1] + 1", None).unwrap();
        assert_eq!(p.width(), 2);
        assert_eq!(p.len(), 3);
        assert_eq!(render_polynomial(&k, &p), "3/2*x[1,1]^2*x[1,2] - x[2,1] + 1");
        let q = parse_polynomial(&k, &T2, "  3 / 2 x[1,1]^2 x[1,2]^1-x[2,1]+1 ", None).unwrap();
        assert_eq!(p, q);
        assert!(parse_polynomial(&k, &T2, "0", Some(2)).unwrap().is_zero());
        assert!(parse_polynomial(&k, &T2, "x[3,1]", None).is_err());
        assert!(parse_polynomial(&k, &T2, "x[1,1] +", None).is_err());
        assert!(parse_polynomial(&k, &T2, "x[1,4]", Some(3)).is_err());
        let d2 = VariableScheme::DegreeD { d: 2 };
        let u = parse_polynomial(&k, &d2, "x(1,2)*x(2,3)*x(1,3)^2", None).unwrap();
        assert_eq!(u.width(), 3);
        assert_eq!(render_polynomial(&k, &u), "x(1,2)*x(1,3)^2*x(2,3)");
    }

    #[test]
    fn element_grammar() {
        let k = Rationals;
        let sig = Signature::new(T1, vec![Slot { d: 0, shift: 0 }, Slot { d: 2, shift: 1 }]);
        let q = parse_element(&k, &sig, "x[1,1]^2 * e{λ=1; 1,3} - 2*e{l=0}", None).unwrap();
        assert_eq!(q.width(), 3);
        assert_eq!(render_element(&k, &sig, &q), "x[1,1]^2*e{λ=1; 1,3} - 2*e{λ=0}");
        assert!(parse_element(&k, &sig, "e{1,3}", None).is_err());
        assert!(parse_element(&k, &sig, "e{λ=1; 1}", None).is_err());
        assert!(parse_element(&k, &sig, "e{λ=1; 3,1}", None).is_err());

        let ring = Signature::ring(T1);
        let a = parse_element(&k, &ring, "x[1,1] e{}", None).unwrap();
        let b = parse_element(&k, &ring, "x[1,1]", None).unwrap();
        assert_eq!(a, b);
        assert_eq!(render_element(&k, &ring, &a), "x[1,1]*e{}");
        assert_eq!(render_element(&k, &ring, &ModuleElement::zero(2)), "0");
    }

    #[test]
    fn prime_field_rendering() {
        let f = PrimeField::new(7).unwrap();
        let p = parse_polynomial(&f, &T1, "-x[1,1] + 1/2", None).unwrap();
        assert_eq!(render_polynomial(&f, &p), "6*x[1,1] + 4");
    }

    type RawElement = (usize, Vec<(i64, i64, Vec<u32>, usize)>);

    fn element_strategy() -> impl Strategy<Value = RawElement> {
        (2usize..4).prop_flat_map(|w| {
            let term = (-5i64..6, 1i64..4, prop::collection::vec(0u32..3, 2 * w), 0usize..w);
            (Just(w), prop::collection::vec(term, 0..5))
        })
    }

    proptest! {
        #[test]
        fn element_round_trip((w, raw) in element_strategy()) {
            let k = Rationals;
            let sig = Signature::new(T2, vec![Slot { d: 1, shift: 0 }, Slot { d: 0, shift: 2 }]);
            let mut q = ModuleElement::zero(w);
            for (n, d, exps, pos) in raw {
                let c = k.parse(&format!("{n}/{d}")).unwrap();
                let (slot, img) = if pos % 2 == 0 { (0, vec![pos as u32 + 1]) } else { (1, vec![]) };
                let t = ModuleMonomial::new(slot, OIMorphism::new(w, img).unwrap(),
                    Monomial::from_exponents(w, exps)).unwrap();
                q.add_term(&k, t, c);
            }
            let text = render_element(&k, &sig, &q);
            prop_assert_eq!(parse_element(&k, &sig, &text, Some(w)).unwrap(), q);
        }
    }
}
