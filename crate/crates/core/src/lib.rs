//! Finite periodic groups `Z/a x| (Z/b x T*(n))` and `Z/a x| (Z/b x O*(n))`:
//! exact group engines, automorphism and derivation enumeration, cohomology
//! tables, and homotopy-type counts of the associated spherical space forms.

pub mod autos;
pub mod cohomology;
pub mod derivations;
pub mod error;
pub mod groups;
pub mod modular;
pub mod spaceforms;

pub use error::{Error, Result};
pub use groups::{
    AbelianInvariants, Action, Character, FiniteGroup, GroupElement, GroupSpec, NormalForm,
    PresentationReport, Relation,
};
pub use modular::{Residue, UnitSubgroup};

pub const ENGINE_VERSION: &str = "spaceform-engine/1";
