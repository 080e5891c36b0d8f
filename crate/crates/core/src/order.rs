//! Monomial orders on free OI-modules, OI-divisibility of module monomials,
//! and the sequence encoding that turns OI-divisibility into a Higman-type
//! embedding problem.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::module::{ModuleMonomial, Signature};
use crate::oi::{enumerate_oi, iota, OIMorphism};
use crate::polyring::{search_position_maps, Monomial, Witness};
use crate::sample;

/// Borrowed view of a module monomial, so that orders can be evaluated on
/// data that does not live in a [`ModuleMonomial`].
#[derive(Clone, Copy, Debug)]
pub struct MonoParts<'a> {
    pub width: usize,
    pub slot: usize,
    pub basis: &'a [u32],
    pub exps: &'a [u32],
}

impl ModuleMonomial {
    pub fn parts(&self) -> MonoParts<'_> {
        MonoParts {
            width: self.width(),
            slot: self.slot,
            basis: self.basis.image(),
            exps: self.mono.exponents(),
        }
    }
}

/// A total order on the monomials of a free OI-module, across all widths.
///
/// Implementations must satisfy, for monomials `μ > ν` of equal width:
/// `uμ > uν > ν` for ring monomials `u ≠ 1`; `F(ε)(μ) > F(ε)(ν)` for every
/// OI-morphism `ε`; and `F(ι_{m,n})(μ) > μ` for `n > m`.
/// [`validate_order`] checks these on random samples.
pub trait MonomialOrder: Send + Sync + fmt::Debug {
    fn name(&self) -> &str;

    fn cmp_parts(&self, a: &MonoParts<'_>, b: &MonoParts<'_>) -> Ordering;

    fn cmp(&self, a: &ModuleMonomial, b: &ModuleMonomial) -> Ordering {
        self.cmp_parts(&a.parts(), &b.parts())
    }
}

fn cmp_basis(a: &MonoParts<'_>, b: &MonoParts<'_>) -> Ordering {
    a.width
        .cmp(&b.width)
        .then_with(|| a.basis.cmp(b.basis))
        .then_with(|| a.slot.cmp(&b.slot))
}

/// Position over term: `e_π` compared through the vector `(m, π(1), ..., π(d))`
/// lexicographically (slot breaks ties), then the ring monomials
/// lexicographically with `x_{i,j} > x_{i',j'}` iff `i < i'`, or `i = i'`
/// and `j < j'`.
#[derive(Clone, Copy, Debug, Default)]
pub struct PaperLex;

impl MonomialOrder for PaperLex {
    fn name(&self) -> &str {
        "paper_lex"
    }

    fn cmp_parts(&self, a: &MonoParts<'_>, b: &MonoParts<'_>) -> Ordering {
        cmp_basis(a, b).then_with(|| a.exps.cmp(b.exps))
    }
}

/// Like [`PaperLex`] but ring monomials are compared by total degree first.
#[derive(Clone, Copy, Debug, Default)]
pub struct WidthGrlex;

impl MonomialOrder for WidthGrlex {
    fn name(&self) -> &str {
        "width_grlex"
    }

    fn cmp_parts(&self, a: &MonoParts<'_>, b: &MonoParts<'_>) -> Ordering {
        cmp_basis(a, b)
            .then_with(|| {
                let da: u64 = a.exps.iter().map(|&e| e as u64).sum();
                let db: u64 = b.exps.iter().map(|&e| e as u64).sum();
                da.cmp(&db)
            })
            .then_with(|| a.exps.cmp(b.exps))
    }
}

pub const ORDER_NAMES: [&str; 2] = ["paper_lex", "width_grlex"];

pub fn order_by_name(name: &str) -> Result<Arc<dyn MonomialOrder>> {
    match name.trim() {
        "paper_lex" => Ok(Arc::new(PaperLex)),
        "width_grlex" => Ok(Arc::new(WidthGrlex)),
        other => Err(Error::UnknownOrder(other.to_string())),
    }
}

fn check_monomial(sig: &Signature, t: &ModuleMonomial) -> Result<()> {
    let slot = sig.slots.get(t.slot).ok_or(Error::SignatureMismatch)?;
    if slot.d != t.basis.source() || t.mono.exponents().len() != sig.scheme.nvars(t.width()) {
        return Err(Error::SignatureMismatch);
    }
    Ok(())
}

pub fn compare(order: &dyn MonomialOrder, sig: &Signature, a: &ModuleMonomial, b: &ModuleMonomial) -> Result<Ordering> {
    check_monomial(sig, a)?;
    check_monomial(sig, b)?;
    Ok(order.cmp(a, b))
}

fn divisibility_maps(mu: &ModuleMonomial, nu: &ModuleMonomial, sig: &Signature, first: bool) -> Vec<Vec<u32>> {
    if mu.slot != nu.slot || mu.width() > nu.width() {
        return Vec::new();
    }
    // ε ∘ π = ρ pins ε on the image of π
    let mut fixed = vec![0u32; mu.width()];
    for (&p, &r) in mu.basis.image().iter().zip(nu.basis.image()) {
        fixed[p as usize - 1] = r;
    }
    search_position_maps(&sig.scheme, &mu.mono, &nu.mono, &fixed, true, first)
}

fn witness_from_map(sig: &Signature, mu: &ModuleMonomial, nu: &ModuleMonomial, map: Vec<u32>) -> Witness<OIMorphism> {
    let image = mu.mono.map_positions(&sig.scheme, nu.width(), &map);
    Witness {
        morphism: OIMorphism::from_raw(nu.width(), map),
        cofactor: nu.mono.checked_div(&image).expect("search yields dividing maps"),
    }
}

/// The lexicographically first `ε` with `ρ = ε∘π` and `ε*(x^u) | x^v`, where
/// `μ = x^u e_π` and `ν = x^v e_ρ`, together with the cofactor.
pub fn oi_divides_mod(
    sig: &Signature,
    mu: &ModuleMonomial,
    nu: &ModuleMonomial,
) -> Result<Option<Witness<OIMorphism>>> {
    check_monomial(sig, mu)?;
    check_monomial(sig, nu)?;
    Ok(divisibility_maps(mu, nu, sig, true)
        .into_iter()
        .next()
        .map(|m| witness_from_map(sig, mu, nu, m)))
}

pub fn oi_divides_mod_all(
    sig: &Signature,
    mu: &ModuleMonomial,
    nu: &ModuleMonomial,
) -> Result<Vec<Witness<OIMorphism>>> {
    check_monomial(sig, mu)?;
    check_monomial(sig, nu)?;
    Ok(divisibility_maps(mu, nu, sig, false)
        .into_iter()
        .map(|m| witness_from_map(sig, mu, nu, m))
        .collect())
}

/// Unchecked fast path used by the reduction loops.
pub(crate) fn oi_divides_unchecked(
    sig: &Signature,
    mu: &ModuleMonomial,
    nu: &ModuleMonomial,
) -> Option<Witness<OIMorphism>> {
    divisibility_maps(mu, nu, sig, true)
        .into_iter()
        .next()
        .map(|m| witness_from_map(sig, mu, nu, m))
}

/// One block `(u, i)` of a Higman code: an exponent vector in `N_0^c` and a
/// position.
pub type HigmanBlock = (Vec<u32>, u32);

/// The sequence encoding of a tensor-scheme module monomial
/// `μ = x_{·,1}^{u_1} ⋯ x_{·,m}^{u_m} e_π`: entry `i` is
/// `(u_i, i) × (u_{π(1)}, π(1)) × ⋯ × (u_{π(d)}, π(d))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HigmanCode {
    pub c: usize,
    pub d: usize,
    pub entries: Vec<Vec<HigmanBlock>>,
}

fn column(mono: &Monomial, c: usize, j: u32) -> Vec<u32> {
    let w = mono.width();
    (0..c).map(|r| mono.exponents()[r * w + j as usize - 1]).collect()
}

pub fn encode_higman(sig: &Signature, mu: &ModuleMonomial) -> Result<HigmanCode> {
    check_monomial(sig, mu)?;
    let c = sig.scheme.rows().ok_or(Error::SchemeMismatch)?;
    let tail: Vec<HigmanBlock> = mu.basis.image().iter().map(|&p| (column(&mu.mono, c, p), p)).collect();
    let entries = (1..=mu.width() as u32)
        .map(|i| {
            let mut e = Vec::with_capacity(tail.len() + 1);
            e.push((column(&mu.mono, c, i), i));
            e.extend(tail.iter().cloned());
            e
        })
        .collect();
    Ok(HigmanCode {
        c,
        d: mu.basis.source(),
        entries,
    })
}

fn sign(x: i64) -> i8 {
    x.signum() as i8
}

/// Componentwise order on the exponent parts plus agreement of the signs
/// `sgn(i_k - i_0) = sgn(j_k - j_0)` on the position parts.
pub fn entry_leq(s: &[HigmanBlock], t: &[HigmanBlock]) -> bool {
    if s.len() != t.len() {
        return false;
    }
    let exps_ok = s
        .iter()
        .zip(t)
        .all(|((a, _), (b, _))| a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x <= y));
    if !exps_ok || s.is_empty() {
        return exps_ok;
    }
    let (i0, j0) = (s[0].1 as i64, t[0].1 as i64);
    s[1..]
        .iter()
        .zip(&t[1..])
        .all(|((_, ik), (_, jk))| sign(*ik as i64 - i0) == sign(*jk as i64 - j0))
}

fn check_codes(s: &HigmanCode, t: &HigmanCode) -> Result<()> {
    if s.c != t.c || s.d != t.d {
        return Err(Error::ParameterMismatch(format!(
            "codes built with (c, d) = ({}, {}) and ({}, {})",
            s.c, s.d, t.c, t.d
        )));
    }
    Ok(())
}

/// Higman embedding of `s` into `t` by left-greedy matching.
pub fn higman_leq(s: &HigmanCode, t: &HigmanCode) -> Result<bool> {
    check_codes(s, t)?;
    let mut pos = 0;
    for e in &s.entries {
        match t.entries[pos..].iter().position(|f| entry_leq(e, f)) {
            Some(k) => pos += k + 1,
            None => return Ok(false),
        }
    }
    Ok(true)
}

/// The same relation decided by dynamic programming over suffixes.
pub fn higman_leq_dp(s: &HigmanCode, t: &HigmanCode) -> Result<bool> {
    check_codes(s, t)?;
    let (p, q) = (s.entries.len(), t.entries.len());
    // fits[i][j]: s[i..] embeds into t[j..]
    let mut fits = vec![vec![false; q + 1]; p + 1];
    for row in fits[p].iter_mut() {
        *row = true;
    }
    for i in (0..p).rev() {
        for j in (0..q).rev() {
            fits[i][j] = fits[i][j + 1] || (entry_leq(&s.entries[i], &t.entries[j]) && fits[i + 1][j + 1]);
        }
    }
    Ok(fits[0][0])
}

/// The OI-divisibility-minimal elements of a finite set, in structural
/// order. Every input is divisible by some output.
pub fn minimal_elements(sig: &Signature, monomials: &[ModuleMonomial]) -> Result<Vec<ModuleMonomial>> {
    for t in monomials {
        check_monomial(sig, t)?;
    }
    let mut pool: Vec<ModuleMonomial> = monomials.to_vec();
    pool.sort();
    pool.dedup();
    let keep: Vec<bool> = pool
        .iter()
        .map(|nu| {
            !pool
                .iter()
                .any(|mu| mu != nu && oi_divides_unchecked(sig, mu, nu).is_some())
        })
        .collect();
    Ok(pool.into_iter().zip(keep).filter(|(_, k)| *k).map(|(t, _)| t).collect())
}

/// Bounds for [`validate_order`].
#[derive(Clone, Copy, Debug)]
pub struct OrderSampling {
    pub pairs: usize,
    pub max_width: usize,
    pub max_degree: u32,
    pub seed: u64,
}

impl Default for OrderSampling {
    fn default() -> Self {
        OrderSampling {
            pairs: 200,
            max_width: 4,
            max_degree: 3,
            seed: 0x5eed,
        }
    }
}

/// Checks the three monomial order axioms on random pairs of monomials of
/// equal width.
pub fn validate_order(order: &dyn MonomialOrder, sig: &Signature, cfg: OrderSampling) -> Result<()> {
    let mut rng = StdRng::seed_from_u64(cfg.seed);
    let fail = |axiom: &str| Error::OrderAxiomViolation {
        order: order.name().to_string(),
        axiom: axiom.to_string(),
    };
    let min_width = sig.slots.iter().map(|s| s.d).min().unwrap_or(0);
    let max_width = cfg.max_width.max(min_width);
    for _ in 0..cfg.pairs {
        let m = rng.gen_range(min_width..=max_width);
        let a = sample::module_monomial(&mut rng, sig, m, cfg.max_degree);
        let b = sample::module_monomial(&mut rng, sig, m, cfg.max_degree);
        let (Some(a), Some(b)) = (a, b) else { continue };
        let (hi, lo) = match order.cmp(&a, &b) {
            Ordering::Greater => (a, b),
            Ordering::Less => (b, a),
            Ordering::Equal => {
                if a != b {
                    return Err(fail("totality (distinct monomials compare equal)"));
                }
                continue;
            }
        };
        if order.cmp(&lo, &hi) != Ordering::Less {
            return Err(fail("antisymmetry"));
        }
        let u = sample::monomial(&mut rng, &sig.scheme, m, cfg.max_degree.max(1));
        if !u.is_one() {
            let (uh, ul) = (hi.mul_monomial(&u), lo.mul_monomial(&u));
            if order.cmp(&uh, &ul) != Ordering::Greater || order.cmp(&ul, &lo) != Ordering::Greater {
                return Err(fail("(i) multiplicativity"));
            }
        }
        for n in m..=m + 1 {
            let all = enumerate_oi(m, n);
            let eps = &all[rng.gen_range(0..all.len())];
            let (eh, el) = (hi.apply_oi(&sig.scheme, eps)?, lo.apply_oi(&sig.scheme, eps)?);
            if order.cmp(&eh, &el) != Ordering::Greater {
                return Err(fail("(ii) compatibility with OI-maps"));
            }
        }
        for n in [m + 1, m + 2] {
            let up = hi.apply_oi(&sig.scheme, &iota(m, n)?)?;
            if order.cmp(&up, &hi) != Ordering::Greater {
                return Err(fail("(iii) width inclusion"));
            }
        }
    }
    Ok(())
}
