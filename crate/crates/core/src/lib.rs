//! Gröbner bases for free OI-modules over the polynomial OI-algebra
//! `P = (X^{OI,1})^{⊗c}`, OI-Koszul complexes, and detection of
//! stabilizing Betti numbers across widths.

pub mod coeff;
pub mod error;
pub mod groebner;
pub mod koszul;
pub mod linalg;
pub mod module;
pub mod oi;
#[cfg(any(test, feature = "oracle"))]
pub mod oracle;
pub mod order;
pub mod polyring;
pub mod sample;
pub mod stabilize;
pub mod text;

pub use coeff::{Field, FieldSpec, PrimeField, Rationals};
pub use error::{Error, Result};
pub use groebner::{
    BettiTable, CertStatus, Certification, EquivariantGB, Flavor, GbConfig, GeneratorSet, ResolveTarget,
    WidthResolution,
};
pub use koszul::KoszulComplex;
pub use module::{ModuleElement, ModuleMonomial, Signature, Slot};
pub use oi::{FIMorphism, IncExtension, OIMorphism};
pub use order::{MonomialOrder, PaperLex, WidthGrlex};
pub use polyring::{Monomial, Polynomial, VarKey, VariableScheme, Witness};
pub use stabilize::{StabilityStatus, StabilizationEntry, StabilizationReport};
