//! Parametrization of monic copositive univariate polynomials.
//!
//! A polynomial `f` is copositive when `f(x) >= 0` for every `x >= 0`. The
//! monic copositive polynomials of degree `d` form a closed convex cone `C_d`,
//! and this crate implements the recursive map `(R>=0)^d -> C_d`
//!
//! ```text
//! phi_big()            = 1
//! phi_big(t0)          = x + t0
//! phi_big(t0..t_{d-1}) = (x - t_{d-2})^2 phi_big(t0..t_{d-3}) + t_{d-1} x
//! ```
//!
//! together with its inverse, an exact copositivity certifier and the
//! machinery (gcd, Sturm chains, root isolation) they are built on.
//!
//! All algorithms are generic over [`Scalar`]: use [`Rational`] for exact
//! results and `f64` for speed.

pub mod copositivity;
pub mod error;
pub mod interval;
pub mod invert;
pub mod parametrize;
pub mod plot;
pub mod poly;
pub mod sampler;
pub mod scalar;
pub mod sturm;

pub use copositivity::{
    is_base_boundary, is_copositive, negativity_witness, BoundaryReport, CopositivityCertificate,
    RootAccounting,
};
pub use error::{Error, Result};
pub use interval::{Endpoint, Interval};
pub use invert::{
    default_precision, invert_base, invert_extension, invert_full, BaseInversion,
    ExtensionInversion, InversionReport,
};
pub use parametrize::{phi_big, phi_ext, psi, Mode, ParameterVector};
pub use poly::{GcdOutcome, NotDivisible, Polynomial};
pub use sampler::{
    sample_copositive, sample_one, sample_params, Distribution, SampleRng, SampleSpec,
};
pub use scalar::{Backend, Rational, Scalar};
pub use sturm::{count_roots_in, isolate_roots, IsolatedRoot, SturmChain};
