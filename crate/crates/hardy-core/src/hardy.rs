//! Boundary functions on `ℝ`, the kernel/test-function catalogue, inner
//! products and `H²` norms, Poisson and Cauchy reproduction, and the forward
//! composition operator as a boundary-function transform.
//!
//! Two kernel normalizations coexist in the literature; the catalogue exposes
//! both and all reproducing claims are stated for the normalized one:
//!
//! * `k_z(t) = 1/(conj(z) - t)` (unnormalized),
//! * `K_z(t) = (1/2πi) · 1/(conj(z) - t)`, which satisfies `⟨f, K_z⟩ = f(z)`.

use alloc::sync::Arc;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::poly::RationalMap;
use crate::quad::{self, QuadratureOutcome};
use crate::tol;

pub use crate::quad::QuadratureConfig;

/// Errors from quadrature-backed Hardy-space operations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HardyError {
    #[error("integrand decay {decay} is not > 1; supply a product integrand with faster combined decay")]
    NonIntegrable { decay: f64 },
    #[error("evaluation point must lie in the open upper half-plane (Im z = {im})")]
    NotUpperHalfPlane { im: f64 },
    #[error("norm quadrature left imaginary residue {imag:e}, above the verification threshold")]
    NormImaginaryResidue { imag: f64 },
}

type Evaluator = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// An evaluable function on `ℝ` (extending to `ℂ` where meaningful) with the
/// decay and singularity metadata quadrature needs.
///
/// `decay_exponent` is the claimed `|f(t)| = O(|t|^{-d})` rate as `|t| → ∞`;
/// membership claims in `L²` need `d > 1/2`. `pole_list` holds the real
/// points where the function is singular or non-smooth, used as quadrature
/// split points. `analytic_upper` marks functions that extend analytically to
/// the open upper half-plane (the residue backend requires it).
#[derive(Clone)]
pub struct BoundaryFunction {
    evaluator: Evaluator,
    decay_exponent: f64,
    pole_list: Vec<f64>,
    analytic_upper: bool,
}

impl core::fmt::Debug for BoundaryFunction {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("BoundaryFunction")
            .field("decay_exponent", &self.decay_exponent)
            .field("pole_list", &self.pole_list)
            .field("analytic_upper", &self.analytic_upper)
            .finish()
    }
}

impl BoundaryFunction {
    pub fn new<F>(evaluator: F, decay_exponent: f64, pole_list: Vec<f64>, analytic_upper: bool) -> Self
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        BoundaryFunction {
            evaluator: Arc::new(evaluator),
            decay_exponent,
            pole_list,
            analytic_upper,
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        (self.evaluator)(z)
    }

    pub fn eval_real(&self, t: f64) -> Complex64 {
        (self.evaluator)(Complex64::new(t, 0.0))
    }

    pub fn decay_exponent(&self) -> f64 {
        self.decay_exponent
    }

    pub fn pole_list(&self) -> &[f64] {
        &self.pole_list
    }

    pub fn analytic_upper(&self) -> bool {
        self.analytic_upper
    }

    /// Upper half-plane Poisson kernel `t ↦ P_y(x - t) = (1/π) y/((x-t)² + y²)`.
    /// For small `y` the kernel is a width-`y` spike at `x`, so the split
    /// list grades panel boundaries geometrically from that scale outward.
    pub fn poisson(x: f64, y: f64) -> Self {
        BoundaryFunction::new(
            move |t| {
                let d = Complex64::new(x, 0.0) - t;
                Complex64::new(1.0 / core::f64::consts::PI, 0.0) * y / (d * d + y * y)
            },
            2.0,
            graded_splits(x, y.abs()),
            false,
        )
    }

    /// Unnormalized kernel `k_z(t) = 1/(conj(z) - t)`.
    pub fn kernel_unnormalized(z: Complex64) -> Self {
        let zb = z.conj();
        BoundaryFunction::new(move |t| (zb - t).inv(), 1.0, Vec::new(), z.im > 0.0)
    }

    /// Normalized reproducing kernel `K_z(t) = (1/2πi) · 1/(conj(z) - t)`,
    /// satisfying `⟨f, K_z⟩ = f(z)` for `f ∈ H²`.
    pub fn kernel(z: Complex64) -> Self {
        let zb = z.conj();
        let norm = Complex64::new(0.0, 2.0 * core::f64::consts::PI).inv();
        BoundaryFunction::new(move |t| norm / (zb - t), 1.0, Vec::new(), z.im > 0.0)
    }

    /// `f_p(t) = 1/(1 + |t|^{2/p})`, in `L^p(ℝ)` and `C₀(ℝ)`; not analytic.
    /// The origin is listed as a split point (the modulus kinks there).
    pub fn f_p(p: f64) -> Self {
        let e = 2.0 / p;
        BoundaryFunction::new(
            move |t| Complex64::new(1.0 / (1.0 + t.norm().powf(e)), 0.0),
            e,
            alloc::vec![0.0],
            false,
        )
    }

    /// `g_p(z) = 1/(i + z)^{2/p}`, in `H^p(ℂ⁺)`; exact reciprocal at `p = 2`.
    pub fn g_p(p: f64) -> Self {
        let e = 2.0 / p;
        let i = Complex64::new(0.0, 1.0);
        if p == 2.0 {
            BoundaryFunction::new(move |z| (i + z).inv(), 1.0, Vec::new(), true)
        } else {
            BoundaryFunction::new(move |z| (i + z).powc(Complex64::new(e, 0.0)).inv(), e, Vec::new(), true)
        }
    }

    /// Pointwise linear combination `a·f + b·g`; metadata is the conservative
    /// merge of both operands.
    pub fn linear_combo(a: Complex64, f: &BoundaryFunction, b: Complex64, g: &BoundaryFunction) -> Self {
        let (fc, gc) = (f.clone(), g.clone());
        let mut poles = f.pole_list.clone();
        poles.extend_from_slice(&g.pole_list);
        BoundaryFunction::new(
            move |z| a * fc.eval(z) + b * gc.eval(z),
            f.decay_exponent.min(g.decay_exponent),
            poles,
            f.analytic_upper && g.analytic_upper,
        )
    }

    /// Pointwise product, used to assemble integrands.
    fn product(&self, other: &BoundaryFunction) -> BoundaryFunction {
        let (fc, gc) = (self.clone(), other.clone());
        let mut poles = self.pole_list.clone();
        poles.extend_from_slice(&other.pole_list);
        BoundaryFunction::new(
            move |z| fc.eval(z) * gc.eval(z),
            self.decay_exponent + other.decay_exponent,
            poles,
            self.analytic_upper && other.analytic_upper,
        )
    }
}

/// Panel boundaries accumulating geometrically toward a spike at `center` of
/// inner width `scale`: `center` itself plus shells at `center ± scale·2^j`.
/// Composite Gauss panels resolve a near-singular peak once their sizes track
/// its width, which the shells guarantee at every refinement level.
pub fn graded_splits(center: f64, scale: f64) -> Vec<f64> {
    let mut out = alloc::vec![center];
    if scale <= 0.0 || !scale.is_finite() {
        return out;
    }
    let outer = 4.0 * (1.0 + center.abs());
    let mut s = scale;
    while s < outer {
        out.push(center + s);
        out.push(center - s);
        s *= 4.0;
    }
    out
}

/// `∫_ℝ f(t) dt` by the tangent substitution with panel splits at the listed
/// singularities. Requires summed decay > 1 for absolute convergence.
pub fn integrate_line(f: &BoundaryFunction, cfg: &QuadratureConfig) -> Result<QuadratureOutcome, HardyError> {
    if f.decay_exponent <= 1.0 {
        return Err(HardyError::NonIntegrable {
            decay: f.decay_exponent,
        });
    }
    Ok(quad::integrate_real_line(
        |t| f.eval_real(t),
        &f.pole_list,
        cfg,
    ))
}

/// `⟨f, g⟩ = ∫_ℝ f(t) conj(g(t)) dt`.
pub fn inner_product(
    f: &BoundaryFunction,
    g: &BoundaryFunction,
    cfg: &QuadratureConfig,
) -> Result<QuadratureOutcome, HardyError> {
    let combined = f.decay_exponent + g.decay_exponent;
    if combined <= 1.0 {
        return Err(HardyError::NonIntegrable { decay: combined });
    }
    let mut splits = f.pole_list.clone();
    splits.extend_from_slice(&g.pole_list);
    let (fc, gc) = (f.clone(), g.clone());
    Ok(quad::integrate_real_line(
        move |t| fc.eval_real(t) * gc.eval_real(t).conj(),
        &splits,
        cfg,
    ))
}

/// `‖f‖_{H²} = sqrt(⟨f, f⟩)`. The quadrature's imaginary residue must verify
/// below the threshold before it is discarded.
pub fn h2_norm(f: &BoundaryFunction, cfg: &QuadratureConfig) -> Result<f64, HardyError> {
    let out = inner_product(f, f, cfg)?;
    let re = out.value.re;
    let im = out.value.im;
    if im.abs() > tol::NORM_IMAG_RESIDUE * (1.0 + re.abs()) {
        return Err(HardyError::NormImaginaryResidue { imag: im });
    }
    Ok(re.max(0.0).sqrt())
}

/// Which reproduction route to take in [`reproduce`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReproduceMode {
    /// `∫ P_{Im z}(Re z - t) f(t) dt`.
    Poisson,
    /// `⟨f, K_z⟩`.
    Cauchy,
}

/// Recover `f(z)` for `Im z > 0` from boundary values, by either kernel.
pub fn reproduce(
    f: &BoundaryFunction,
    z: Complex64,
    mode: ReproduceMode,
    cfg: &QuadratureConfig,
) -> Result<Complex64, HardyError> {
    if z.im <= 0.0 {
        return Err(HardyError::NotUpperHalfPlane { im: z.im });
    }
    match mode {
        ReproduceMode::Poisson => {
            let kernel = BoundaryFunction::poisson(z.re, z.im);
            let integrand = kernel.product(f);
            Ok(integrate_line(&integrand, cfg)?.value)
        }
        ReproduceMode::Cauchy => {
            let k = BoundaryFunction::kernel(z);
            Ok(inner_product(f, &k, cfg)?.value)
        }
    }
}

/// The forward operator `C_φ f = f ∘ φ` as a boundary-function transform.
///
/// Caller contract: `φ` is a self-map of the upper half-plane (otherwise the
/// analyticity flag on the result is meaningless). The decay exponent follows
/// from the degree gap: a symbol growing like `|t|^(n-m)` at infinity turns
/// decay `d` into `d·(n-m)`; symbols bounded at infinity destroy decay and the
/// result is marked non-integrable-at-rate-0. Near a real pole of `φ` the
/// composed integrand tends to zero (the symbol escapes to infinity and `f`
/// decays), so the evaluator returns zero there and the pole becomes a panel
/// boundary.
pub fn compose(phi: &RationalMap, f: &BoundaryFunction) -> BoundaryFunction {
    let n = phi.num_degree() as i64;
    let m = phi.den_degree() as i64;
    let decay = if n > m {
        f.decay_exponent() * ((n - m) as f64)
    } else {
        0.0
    };
    let mut poles = phi.real_poles();
    for &p in f.pole_list() {
        if let Ok(pre) = phi.preimages(Complex64::new(p, 0.0), crate::poly::HalfPlaneFilter::RealLine) {
            for &(t, _) in &pre.roots {
                poles.push(t.re);
            }
        }
    }
    let phic = phi.clone();
    let fc = f.clone();
    BoundaryFunction::new(
        move |z| match phic.eval(z) {
            Ok(w) => fc.eval(w),
            Err(_) => Complex64::new(0.0, 0.0),
        },
        decay,
        poles,
        f.analytic_upper(),
    )
}

/// Poisson extension of `f` to height `y`, returned as the boundary function
/// `x ↦ ∫ P_y(x - t) f(t) dt`. Each evaluation performs a quadrature.
pub fn poisson_extend(f: &BoundaryFunction, y: f64, cfg: &QuadratureConfig) -> BoundaryFunction {
    let fc = f.clone();
    let cfgc = cfg.clone();
    BoundaryFunction::new(
        move |z| {
            let kernel = BoundaryFunction::poisson(z.re, y);
            let integrand = kernel.product(&fc);
            quad::integrate_real_line(|t| integrand.eval_real(t), integrand.pole_list(), &cfgc).value
        },
        f.decay_exponent().min(2.0),
        Vec::new(),
        false,
    )
}
