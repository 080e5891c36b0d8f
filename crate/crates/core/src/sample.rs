//! Random monomials for order validation, property tests and benchmarks.

use rand::Rng;

use crate::coeff::Field;
use crate::groebner::GeneratorSet;
use crate::module::{ModuleElement, ModuleMonomial, Signature};
use crate::oi::{binomial, enumerate_oi};
use crate::polyring::{Monomial, VariableScheme};

/// A random monomial of total degree at most `max_degree`.
pub fn monomial<R: Rng + ?Sized>(rng: &mut R, scheme: &VariableScheme, width: usize, max_degree: u32) -> Monomial {
    let mut m = scheme.one(width);
    let nv = scheme.nvars(width);
    if nv == 0 {
        return m;
    }
    let deg = rng.gen_range(0..=max_degree);
    for _ in 0..deg {
        m.exps[rng.gen_range(0..nv)] += 1;
    }
    m
}

/// A random module monomial at `width`, or `None` when no slot has a basis
/// symbol at that width.
pub fn module_monomial<R: Rng + ?Sized>(
    rng: &mut R,
    sig: &Signature,
    width: usize,
    max_degree: u32,
) -> Option<ModuleMonomial> {
    let slots: Vec<usize> = (0..sig.slots.len()).filter(|&k| sig.slots[k].d <= width).collect();
    if slots.is_empty() {
        return None;
    }
    let slot = slots[rng.gen_range(0..slots.len())];
    let bases = enumerate_oi(sig.slots[slot].d, width);
    let basis = bases[rng.gen_range(0..bases.len())].clone();
    Some(ModuleMonomial {
        slot,
        basis,
        mono: monomial(rng, &sig.scheme, width, max_degree),
    })
}

/// A random element `Σ c·x^w·F(ε)(g)` of the width-`width` component of the
/// submodule generated by `gens`, with `terms` summands, multiplier degree at
/// most `max_degree` and coefficients in `-5..=5`. Zero when no generator
/// reaches `width`.
pub fn submodule_element<F: Field, R: Rng + ?Sized>(
    rng: &mut R,
    field: &F,
    gens: &GeneratorSet<F>,
    width: usize,
    terms: usize,
    max_degree: u32,
) -> ModuleElement<F> {
    let scheme = gens.signature.scheme;
    let usable: Vec<&ModuleElement<F>> = gens.gens.iter().filter(|g| g.width() <= width).collect();
    let mut q = ModuleElement::zero(width);
    if usable.is_empty() {
        return q;
    }
    for _ in 0..terms {
        let g = usable[rng.gen_range(0..usable.len())];
        let maps = enumerate_oi(g.width(), width);
        let eps = &maps[rng.gen_range(0..binomial(width, g.width()))];
        let w = monomial(rng, &scheme, width, max_degree);
        let c = field.from_i64(rng.gen_range(-5..=5));
        let image = g
            .apply_oi(field, &scheme, eps)
            .expect("width fits")
            .mul_monomial(field, &c, &w);
        q = q.add(field, &image).expect("same width");
    }
    q
}
