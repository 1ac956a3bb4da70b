//! Computational toolkit for cyclic commuting matrix tuples `(T, h)`.
//!
//! A tuple determines, up to unitary equivalence, four equivalent objects:
//!
//! * the moment functional `Λ(z^α z̄^β) = ⟨T^α h, T^β h⟩` ([`tuples::MomentTable`]),
//! * a positive Hilbert–Schmidt operator `L` on the Fock space ([`fock::FockOperator`]),
//! * the kernel `F(z, w) = ⟨e^{⟨T,w⟩} h, e^{⟨T,z⟩} h⟩` ([`kernel`]),
//! * the multiplication-operator model on `ℂ[z]/I` ([`gns`]).
//!
//! On top of these the crate classifies Jordan tuples and writes their moment
//! functional as a finite sum of derivatives of point masses ([`jordan`]),
//! tests joint eigenvalues of `T*` four different ways ([`eigen`]), and
//! convolves cyclic tuples by multiplying their kernels ([`gns::convolve`]).
//!
//! Concrete models with closed-form answers live in [`models`]; the
//! end-to-end reproductions shared by the CLI and the acceptance suite live in
//! [`showcase`].

pub mod eigen;
pub mod error;
pub mod fock;
pub mod gns;
pub mod io;
pub mod jordan;
pub mod kernel;
pub mod linalg;
pub mod models;
pub mod multiindex;
pub mod polynomial;
pub mod random;
pub mod showcase;
pub mod tuples;

pub use error::{Error, Result};
pub use multiindex::MultiIndex;
pub use polynomial::Polynomial;
pub use tuples::{CyclicTuple, MomentTable};

/// Complex scalar used throughout.
pub type Cx = num_complex::Complex64;
/// Dense complex matrix.
pub type CMat = nalgebra::DMatrix<Cx>;
/// Dense complex column vector.
pub type CVec = nalgebra::DVector<Cx>;

pub(crate) const ZERO: Cx = Cx::new(0.0, 0.0);
pub(crate) const ONE: Cx = Cx::new(1.0, 0.0);
