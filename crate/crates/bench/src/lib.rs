//! Benchmark fixtures shared by the criterion benches.

use oigb_core::text::parse_element;
use oigb_core::{Flavor, GeneratorSet, Rationals, Signature, VariableScheme};

/// A generator set over `ℚ` in the ring signature of `tensor(c)`.
pub fn ring_generators(c: usize, gens: &[(usize, &str)]) -> GeneratorSet<Rationals> {
    let sig = Signature::ring(VariableScheme::Tensor { c });
    let elems = gens
        .iter()
        .map(|(w, t)| parse_element(&Rationals, &sig, t, Some(*w)).expect("fixture parses"))
        .collect();
    GeneratorSet::new(&Rationals, &sig, elems, Flavor::OI).expect("fixture is valid")
}
