//! Numerics for composition operators `C_φ f = f ∘ φ` on Hardy spaces of the
//! upper half-plane.
//!
//! The crate answers two questions about a rational symbol `φ`:
//!
//! 1. **Is `C_φ` bounded?** For rational self-maps of `ℂ⁺` boundedness on every
//!    `H^p(ℂ⁺)` and `L^p(ℝ)` holds exactly when the numerator degree exceeds
//!    the denominator degree by one (equivalently `φ(∞) = ∞`). The
//!    [`boundedness`] module implements the full decision procedure, the
//!    necessary coefficient conditions, the infinite-measure obstruction
//!    witness for the unbounded case, and the exponent rule for quotients of
//!    linear combinations of real powers.
//!
//! 2. **What is the adjoint `C_φ*` on `H²`?** Three independent backends are
//!    provided and cross-validated: a residue/preimage sum over
//!    `φ`-preimages in the upper half-plane ([`adjoint::adjoint_residue`]),
//!    integration against the Aleksandrov–Clark measure system
//!    ([`adjoint::adjoint_boundary_ac`]), and direct quadrature of the
//!    defining boundary integral ([`adjoint::adjoint_integral`]).
//!
//! Supporting machinery: exact-coefficient complex polynomial and rational
//! arithmetic with companion-matrix root finding ([`poly`]), adaptive
//! Gauss–Legendre quadrature over `ℝ` via the tangent substitution ([`quad`]),
//! Poisson/reproducing kernels, inner products and `H²` norms ([`hardy`]),
//! Clark measures ([`ac`]), and the unitary disc↔half-plane transfer used as
//! an independent cross-check channel ([`transfer`]).
//!
//! The crate is `no_std` (with `alloc`); all operations are pure functions
//! over immutable values and are safe to evaluate concurrently.
//!
//! ```
//! use hardy_core::{BoundedSymbol, BoundaryFunction, Complex64, QuadratureConfig};
//! use hardy_core::poly::RationalMap;
//! use hardy_core::adjoint::{adjoint_residue, adjoint_integral};
//!
//! // φ(z) = 2z + i is a self-map of ℂ⁺ with degree gap one, so C_φ is bounded
//! let phi = BoundedSymbol::new(RationalMap::linear(
//!     Complex64::new(2.0, 0.0),
//!     Complex64::new(0.0, 1.0),
//! ))
//! .unwrap();
//!
//! // its adjoint acts on f by (C_φ* f)(z) = (1/2) f((z + i)/2)
//! let f = BoundaryFunction::g_p(2.0);
//! let z = Complex64::new(1.0, 1.0);
//! let expect = f.eval((z + Complex64::new(0.0, 1.0)) / 2.0) * 0.5;
//!
//! let by_residue = adjoint_residue(&phi, &f, z).unwrap().value;
//! let by_integral = adjoint_integral(&phi, &f, z, &QuadratureConfig::default())
//!     .unwrap()
//!     .value;
//! assert!((by_residue - expect).norm() < 1e-12);
//! assert!((by_integral - expect).norm() < 1e-8);
//! ```

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod ac;
pub mod adjoint;
pub mod boundedness;
pub mod hardy;
pub mod poly;
pub mod quad;
pub mod tol;
pub mod transfer;

mod linalg;
mod roots;

pub use num_complex::Complex64;

pub use ac::{ACMeasure, Atom};
pub use adjoint::{AdjointBackend, AdjointResult};
pub use boundedness::{BoundedSymbol, Classification, SymbolClassification};
pub use hardy::{BoundaryFunction, QuadratureConfig};
pub use poly::{Poly, RationalMap, RootSet};
