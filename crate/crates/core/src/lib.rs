pub mod acceptance;
pub mod cyclotomic;
pub mod error;
pub mod finite_field;
pub mod gl2;
pub mod gunitary;
pub mod interval;
pub mod linalg;
pub mod mub;
pub mod polytope;
pub mod weyl_clifford;

pub use cyclotomic::{gauss_sum, CycNumber, GaloisAuto};
pub use error::{Error, Result};
pub use finite_field::{Fe, FieldSpec, FiniteField, QuadraticExtension};
pub use gl2::{GL2Mat, ProjPoint, TypeTag};
pub use gunitary::{EigenResult, GUnitary};
pub use linalg::{CycMatrix, CycVector};
pub use mub::MUBSet;
pub use polytope::{LineOperator, WignerTable};
pub use weyl_clifford::{PhasePoint, PhaseSpace};
