//! Disc ↔ half-plane identifications and the weighted composition operator on
//! the disc, used as an independent cross-check channel.
//!
//! `J(z) = i(1-z)/(1+z)` maps the open unit disc onto the upper half-plane
//! with inverse `J⁻¹(s) = (i-s)/(i+s)`. The induced unitary (here fixed at
//! exponent 2)
//!
//! ```text
//! (V g)(s)   = g(J⁻¹(s)) / (√π (i+s))
//! (V⁻¹ G)(z) = 2i √π · G(J(z)) / (1+z)
//! ```
//!
//! identifies `H²(𝔻)` with `H²(ℂ⁺)`, and conjugating `C_φ` by it yields the
//! weighted composition operator `(L_Φ f)(z) = ((1+Φ(z))/(1+z)) f(Φ(z))` with
//! `Φ = J⁻¹ ∘ φ ∘ J`. The supremum of that weight over the disc controls
//! boundedness, which is what the blow-up probe below inspects.

use alloc::sync::Arc;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::hardy::BoundaryFunction;
use crate::poly::{PolyError, RationalMap};
use crate::quad;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TransferError {
    #[error("the disc point -1 (image of ∞) is excluded")]
    ExcludedDiscPoint,
    #[error("the half-plane point -i (image of ∞) is excluded")]
    ExcludedHalfPlanePoint,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `J: 𝔻 → ℂ⁺`, `z ↦ i(1-z)/(1+z)`.
pub fn j_map(z: Complex64) -> Result<Complex64, TransferError> {
    let denom = 1.0 + z;
    if denom.norm() < 1e-15 {
        return Err(TransferError::ExcludedDiscPoint);
    }
    Ok(Complex64::new(0.0, 1.0) * (1.0 - z) / denom)
}

/// `J⁻¹: ℂ⁺ → 𝔻`, `s ↦ (i-s)/(i+s)`.
pub fn j_inv(s: Complex64) -> Result<Complex64, TransferError> {
    let i = Complex64::new(0.0, 1.0);
    let denom = i + s;
    if denom.norm() < 1e-15 {
        return Err(TransferError::ExcludedHalfPlanePoint);
    }
    Ok((i - s) / denom)
}

type DiscEvaluator = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// A function on the closed unit disc, evaluable at interior points and on
/// the circle; `flagged_angles` are boundary angles where evaluation is
/// singular (the image of ∞ is θ = π, the point -1).
#[derive(Clone)]
pub struct DiscBoundaryFunction {
    evaluator: DiscEvaluator,
    flagged_angles: Vec<f64>,
}

impl core::fmt::Debug for DiscBoundaryFunction {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("DiscBoundaryFunction")
            .field("flagged_angles", &self.flagged_angles)
            .finish()
    }
}

impl DiscBoundaryFunction {
    pub fn new<F>(evaluator: F, flagged_angles: Vec<f64>) -> Self
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        DiscBoundaryFunction {
            evaluator: Arc::new(evaluator),
            flagged_angles,
        }
    }

    /// The monomial `z^n` (unit `H²(𝔻)` norm).
    pub fn monomial(n: u32) -> Self {
        DiscBoundaryFunction::new(move |z| z.powu(n), Vec::new())
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        (self.evaluator)(z)
    }

    pub fn flagged_angles(&self) -> &[f64] {
        &self.flagged_angles
    }

    /// `H²(𝔻)` norm through the circle mean `(1/2π) ∮ |g|²`; the uniform
    /// angle rule with midpoint offset never lands on flagged angles.
    pub fn h2_norm(&self, nodes: usize) -> f64 {
        let v = quad::circle_mean(
            |theta| {
                let z = Complex64::from_polar(1.0, theta);
                let g = self.eval(z);
                g * g.conj()
            },
            nodes,
        );
        v.re.max(0.0).sqrt()
    }
}

/// The unitary `V: H²(𝔻) → H²(ℂ⁺)`.
pub fn v_map(g: &DiscBoundaryFunction) -> BoundaryFunction {
    let gc = g.clone();
    let scale = 1.0 / core::f64::consts::PI.sqrt();
    BoundaryFunction::new(
        move |s| {
            let i = Complex64::new(0.0, 1.0);
            let denom = i + s;
            if denom.norm() < 1e-15 {
                return Complex64::new(0.0, 0.0);
            }
            gc.eval((i - s) / denom) * scale / denom
        },
        1.0,
        Vec::new(),
        true,
    )
}

/// The inverse unitary `V⁻¹: H²(ℂ⁺) → H²(𝔻)`.
pub fn v_inv(big_g: &BoundaryFunction) -> DiscBoundaryFunction {
    let gc = big_g.clone();
    let factor = Complex64::new(0.0, 2.0 * core::f64::consts::PI.sqrt());
    DiscBoundaryFunction::new(
        move |z| {
            let denom = 1.0 + z;
            if denom.norm() < 1e-15 {
                return Complex64::new(0.0, 0.0);
            }
            let s = Complex64::new(0.0, 1.0) * (1.0 - z) / denom;
            factor * gc.eval(s) / denom
        },
        alloc::vec![core::f64::consts::PI],
    )
}

/// The disc-side weight `(1 + Φ(z))/(1 + z)` at `z`, with `Φ = J⁻¹ ∘ φ ∘ J`.
pub fn disc_weight(phi: &RationalMap, z: Complex64) -> Result<Complex64, TransferError> {
    let s = j_map(z)?;
    let w = phi.eval(s)?;
    let cap_phi = j_inv(w)?;
    Ok((1.0 + cap_phi) / (1.0 + z))
}

/// The weighted composition operator `L_Φ f(z) = ((1+Φ(z))/(1+z)) f(Φ(z))`
/// unitarily equivalent to `C_φ` (exponent 2).
pub fn weighted_comp_disc(
    phi: &RationalMap,
    f_disc: &DiscBoundaryFunction,
    z: Complex64,
) -> Result<Complex64, TransferError> {
    let s = j_map(z)?;
    let w = phi.eval(s)?;
    let cap_phi = j_inv(w)?;
    Ok((1.0 + cap_phi) / (1.0 + z) * f_disc.eval(cap_phi))
}

/// Sampled sup of `|V⁻¹(C_φ(V g))(z) - L_Φ g(z)|` over interior points, the
/// two-path check of the unitary equivalence.
pub fn two_path_equivalence_gap(
    phi: &RationalMap,
    g: &DiscBoundaryFunction,
    points: &[Complex64],
) -> Result<f64, TransferError> {
    let vg = v_map(g);
    let composed = crate::hardy::compose(phi, &vg);
    let back = v_inv(&composed);
    let mut sup = 0.0_f64;
    for &z in points {
        let lhs = back.eval(z);
        let rhs = weighted_comp_disc(phi, g, z)?;
        sup = sup.max((lhs - rhs).norm());
    }
    Ok(sup)
}

/// Disc weights along the ray `z = -1 + δ`; an unbounded symbol shows
/// unbounded growth as `δ` shrinks, mirroring the weight-supremum
/// boundedness criterion.
pub fn weight_along_minus_one(phi: &RationalMap, deltas: &[f64]) -> Vec<f64> {
    deltas
        .iter()
        .map(|&d| {
            disc_weight(phi, Complex64::new(-1.0 + d, 0.0))
                .map(|w| w.norm())
                .unwrap_or(f64::INFINITY)
        })
        .collect()
}
