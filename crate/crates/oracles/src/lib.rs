//! Reference implementations that share no algorithm with the library:
//! Clebsch–Gordan coefficients from highest-weight states and lowering
//! operators, 6j symbols by contracting four 3j symbols, the 144-element
//! symmetry group from Bargmann's array, and the volume commutator built in
//! the full four-spin tensor product.
//!
//! Only the data types (`HalfInt`, `ExactRadical`, `RadicalSum`, `SixJArgs`,
//! `Quadrilateral`) are borrowed from the library.

pub mod bargmann;
pub mod cg;
pub mod tensor;
