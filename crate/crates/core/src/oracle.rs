//! Deliberately naive reference computations for the test suites: dense
//! Macaulay matrices for initial modules and exhaustive morphism enumeration
//! for divisibility.

use crate::coeff::Field;
use crate::error::{Error, Result};
use crate::groebner::GeneratorSet;
use crate::module::{ModuleMonomial, Signature};
use crate::oi::{compose, enumerate_fi, enumerate_oi};
use crate::order::MonomialOrder;
use crate::polyring::{Monomial, VariableScheme};

pub const MAX_ORACLE_WIDTH: usize = 8;

/// All monomials of `scheme` at width `n` of total degree `deg`.
fn monomials(scheme: &VariableScheme, n: usize, deg: i64) -> Vec<Monomial> {
    if deg < 0 {
        return Vec::new();
    }
    let nv = scheme.nvars(n);
    let mut out = Vec::new();
    let mut cur = vec![0u32; nv];
    fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, n: usize, out: &mut Vec<Monomial>) {
        if pos == cur.len() {
            if left == 0 {
                out.push(Monomial::from_exponents(n, cur.clone()));
            }
            return;
        }
        for e in 0..=left {
            cur[pos] = e;
            rec(pos + 1, left - e, cur, n, out);
        }
        cur[pos] = 0;
    }
    rec(0, deg as u32, &mut cur, n, &mut out);
    out
}

/// All module monomials of internal degree `j` at width `n`.
fn module_monomials(sig: &Signature, n: usize, j: i64) -> Vec<ModuleMonomial> {
    let mut out = Vec::new();
    for (slot, basis) in sig.basis(n) {
        for mono in monomials(&sig.scheme, n, j - sig.slots[slot].shift) {
            out.push(ModuleMonomial {
                slot,
                basis: basis.clone(),
                mono,
            });
        }
    }
    out
}

/// Pivot columns of a row echelon form of a dense matrix.
fn echelon_pivots<F: Field>(field: &F, mut m: Vec<Vec<F::Elem>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(r) = (row..m.len()).find(|&r| !field.is_zero(&m[r][col])) else {
            continue;
        };
        m.swap(row, r);
        let inv = field.inv(&m[row][col]).expect("nonzero pivot");
        let (top, rest) = m.split_at_mut(row + 1);
        let pivot = &top[row];
        for other in rest.iter_mut() {
            if field.is_zero(&other[col]) {
                continue;
            }
            let f = field.mul(&other[col], &inv);
            for c in col..ncols {
                if !field.is_zero(&pivot[c]) {
                    other[c] = field.sub_mul(&other[c], &f, &pivot[c]);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// The leading monomials of the width-`n` module `⟨images of gens⟩` in all
/// internal degrees up to `max_degree`, sorted increasingly by `order`.
pub fn initial_module_by_macaulay<F: Field>(
    field: &F,
    gens: &GeneratorSet<F>,
    n: usize,
    max_degree: i64,
    order: &dyn MonomialOrder,
) -> Result<Vec<ModuleMonomial>> {
    let sig = &gens.signature;
    let images = gens.images(field, n);
    let mut degrees = Vec::with_capacity(images.len());
    for g in &images {
        degrees.push(g.homogeneous_degree(sig).ok_or(Error::NonHomogeneous)?);
    }
    let min_degree = sig.slots.iter().map(|s| s.shift).min().unwrap_or(0);
    let mut out = Vec::new();
    for j in min_degree..=max_degree {
        let mut cols = module_monomials(sig, n, j);
        cols.sort_by(|a, b| order.cmp(b, a));
        let mut rows = Vec::new();
        for (g, &dg) in images.iter().zip(&degrees) {
            for w in monomials(&sig.scheme, n, j - dg) {
                let one = field.one();
                let shifted = g.mul_monomial(field, &one, &w);
                let row = cols
                    .iter()
                    .map(|c| shifted.coefficient(c).cloned().unwrap_or_else(|| field.zero()))
                    .collect();
                rows.push(row);
            }
        }
        for p in echelon_pivots(field, rows, cols.len()) {
            out.push(cols[p].clone());
        }
    }
    out.sort_by(|a, b| order.cmp(a, b));
    Ok(out)
}

/// All module monomials at width `n` of internal degree at most
/// `max_degree` that some element of `leads` (all at width `n`) divides in
/// the classical sense, sorted increasingly by `order`.
pub fn classical_span_of_leads(
    sig: &Signature,
    leads: &[ModuleMonomial],
    n: usize,
    max_degree: i64,
    order: &dyn MonomialOrder,
) -> Vec<ModuleMonomial> {
    let min_degree = sig.slots.iter().map(|s| s.shift).min().unwrap_or(0);
    let mut out: Vec<ModuleMonomial> = (min_degree..=max_degree)
        .flat_map(|j| module_monomials(sig, n, j))
        .filter(|t| {
            leads
                .iter()
                .any(|l| l.slot == t.slot && l.basis == t.basis && l.mono.divides(&t.mono))
        })
        .collect();
    out.sort_by(|a, b| order.cmp(a, b));
    out
}

/// OI-divisibility decided by trying every `ε ∈ Hom_OI([m], [n])`.
pub fn divisibility_by_enumeration(sig: &Signature, mu: &ModuleMonomial, nu: &ModuleMonomial) -> Result<bool> {
    let (m, n) = (mu.width(), nu.width());
    if n > MAX_ORACLE_WIDTH {
        return Err(Error::WidthTooLarge(n));
    }
    if mu.slot != nu.slot || m > n {
        return Ok(false);
    }
    for eps in enumerate_oi(m, n) {
        if compose(&eps, &mu.basis)? != nu.basis {
            continue;
        }
        if mu.mono.apply_oi(&sig.scheme, &eps)?.divides(&nu.mono) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Ring-level divisibility by enumerating all OI (or, with `fi`, all FI)
/// morphisms.
pub fn ring_divisibility_by_enumeration(
    scheme: &VariableScheme,
    mu: &Monomial,
    nu: &Monomial,
    fi: bool,
) -> Result<bool> {
    let (m, n) = (mu.width(), nu.width());
    if n > MAX_ORACLE_WIDTH {
        return Err(Error::WidthTooLarge(n));
    }
    if m > n {
        return Ok(false);
    }
    if fi {
        for pi in enumerate_fi(m, n) {
            if mu.apply_fi(scheme, &pi)?.divides(nu) {
                return Ok(true);
            }
        }
    } else {
        for eps in enumerate_oi(m, n) {
            if mu.apply_oi(scheme, &eps)?.divides(nu) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}
