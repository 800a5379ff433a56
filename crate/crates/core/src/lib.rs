//! Exact SU(2) recoupling coefficients, the volume operator of the symmetric
//! coupling scheme, its Racah quadratic algebra and the associated families
//! of discrete orthogonal polynomials.

pub mod algebra;
pub mod angmom;
pub mod askey;
pub mod error;
pub mod families;
pub mod halfint;
pub mod limits;
pub mod quad;
pub mod radical;
pub mod sweep;
pub mod tridiag;
pub mod volume;

pub use angmom::{overlap_coefficient, regge_map, symmetry_orbit, triangle_ok, wigner_3j, wigner_6j, SixJArgs};
pub use error::{Error, Result};
pub use halfint::HalfInt;
pub use quad::{canonicalize, regge_conjugate, Quadrilateral, TransformRecord};
pub use radical::{ExactRadical, RadicalSum, SurdTerm};
pub use volume::{alpha, build_matrix, spectrum, Representation, VolumeMatrix, VolumeSpectrum};
