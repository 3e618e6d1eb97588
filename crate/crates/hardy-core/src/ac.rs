//! The Aleksandrov–Clark measure system `(μ_α, c_α)` of a bounded rational
//! symbol, and the Aleksandrov operator `A_φ f(α) = ∫ f dμ_α`.
//!
//! For each `α ∈ ℝ` the function
//!
//! ```text
//! v_α(z) = (1/(π(1+α²))) · Re( i·(1 + α·φ(z)) / (φ(z) - α) )
//! ```
//!
//! is positive and harmonic on `ℂ⁺`, hence has a Herglotz representation
//! `v_α(x+iy) = c_α·y + ∫ P_y(x-t) dμ_α(t)`. The absolutely continuous part
//! of `μ_α` is `v_α` restricted to the line (zero where `φ` is real), the
//! singular part sits on the real preimages `{x : φ(x) = α}`, and for bounded
//! rational symbols (`φ(∞) = ∞`) the point mass at infinity `c_α` vanishes.
//! Atom masses are recovered by collocating the Herglotz identity at interior
//! probe points and solving the resulting linear system in least squares,
//! with the reciprocal-derivative heuristic `w_j = 1/φ'(x_j)` retained solely
//! as a cross-check.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::boundedness::BoundedSymbol;
use crate::hardy::{self, BoundaryFunction, HardyError, QuadratureConfig};
use crate::linalg;
use crate::poly::{HalfPlaneFilter, PolyError};
use crate::tol;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AcError {
    #[error("need at least {needed} probes for {atoms} atoms plus the point mass at infinity, got {got}")]
    TooFewProbes { needed: usize, atoms: usize, got: usize },
    #[error("probe {0} must lie in the open upper half-plane")]
    ProbeNotUpper(Complex64),
    #[error("probe collocation matrix is ill-conditioned (condition {condition:e}); re-select probes with better separated heights")]
    IllConditionedProbes { condition: f64 },
    #[error("critical boundary point: the symbol derivative vanishes at {location}")]
    CriticalBoundaryPoint { location: f64 },
    #[error("fitted point mass at infinity {fitted:e} exceeds the consistency threshold; expected 0 for a bounded rational symbol")]
    CConsistencyFailure { fitted: f64 },
    #[error(transparent)]
    Quadrature(#[from] HardyError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// One point mass of a Clark measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub location: f64,
    pub mass: f64,
}

/// One Clark measure: atoms, absolutely continuous density, and the
/// coefficient of the `y` term (the point mass at infinity). `c` is the
/// semantic value (zero for bounded rational symbols); `fitted_c` and
/// `fit_residual` are diagnostics of the collocation solve.
#[derive(Debug, Clone)]
pub struct ACMeasure {
    pub alpha: f64,
    pub atoms: Vec<Atom>,
    pub density: BoundaryFunction,
    pub c: f64,
    pub fitted_c: f64,
    pub fit_residual: f64,
    density_is_zero: bool,
}

impl ACMeasure {
    /// `Σ masses + ∫ density`, the total variation of the finite part.
    pub fn total_mass(&self, cfg: &QuadratureConfig) -> Result<f64, AcError> {
        let atom_sum: f64 = self.atoms.iter().map(|a| a.mass).sum();
        if self.density_is_zero {
            return Ok(atom_sum);
        }
        let out = hardy::integrate_line(&self.density, cfg)?;
        Ok(atom_sum + out.value.re)
    }

    /// Whether the absolutely continuous part vanishes identically (the
    /// symbol is real on the line).
    pub fn density_is_zero(&self) -> bool {
        self.density_is_zero
    }
}

/// The defining positive harmonic function `v_α` at `z ∈ ℂ⁺`.
pub fn clark_harmonic(phi: &BoundedSymbol, alpha: f64, z: Complex64) -> Result<f64, AcError> {
    let w = phi.map().eval(z)?;
    let i = Complex64::new(0.0, 1.0);
    let q = i * (1.0 + alpha * w) / (w - alpha);
    Ok(q.re / (core::f64::consts::PI * (1.0 + alpha * alpha)))
}

/// Absolutely continuous part of `μ_α` as a boundary function: the case split
/// sends `ζ` with `φ(ζ)` real (within the band) to zero, everything else to
/// `v_α(ζ)`, which equals the Poisson kernel `P_{Im φ(ζ)}(Re φ(ζ) - α)`.
pub fn ac_density(phi: &BoundedSymbol, alpha: f64) -> BoundaryFunction {
    let map = phi.map().clone();
    let mut poles = map.real_poles();
    poles.extend(singular_support(phi, alpha));
    // The density is a sum of Poisson-like bumps centered at the real parts
    // of the preimages φ(t*) = α, with widths set by their heights; graded
    // panel boundaries at those scales keep the bumps resolved wherever they
    // sit on the line.
    if let Ok(rs) = map.preimages(Complex64::new(alpha, 0.0), HalfPlaneFilter::All) {
        for &(t, _) in &rs.roots {
            poles.extend(hardy::graded_splits(t.re, t.im.abs().max(1e-12)));
        }
    }
    let evaluator = move |z: Complex64| -> Complex64 {
        let w = match map.eval(z) {
            Ok(w) => w,
            Err(_) => return Complex64::new(0.0, 0.0), // symbol escapes to ∞, kernel dies
        };
        if w.im.abs() <= tol::DENSITY_REAL_BAND_REL * (1.0 + w.norm()) {
            return Complex64::new(0.0, 0.0);
        }
        let i = Complex64::new(0.0, 1.0);
        let q = i * (1.0 + alpha * w) / (w - alpha);
        Complex64::new(q.re / (core::f64::consts::PI * (1.0 + alpha * alpha)), 0.0)
    };
    BoundaryFunction::new(evaluator, 2.0, poles, false)
}

/// Real preimages `{x : φ(x) = α}`, the carrier of the singular part.
pub fn singular_support(phi: &BoundedSymbol, alpha: f64) -> Vec<f64> {
    match phi
        .map()
        .preimages(Complex64::new(alpha, 0.0), HalfPlaneFilter::RealLine)
    {
        Ok(rs) => rs.roots.iter().map(|&(t, _)| t.re).collect(),
        Err(_) => Vec::new(),
    }
}

/// Default probes: geometric heights `2^k` above the atom cluster, staggered
/// horizontally across the atom spread. Vertical separation conditions the
/// mass-versus-`c` split; the horizontal stagger is required to tell the
/// atoms apart (a purely vertical stack over the mean sees symmetric atom
/// pairs at equal distance and the collocation matrix degenerates).
pub fn default_probes(support: &[f64]) -> Vec<Complex64> {
    let mean = if support.is_empty() {
        0.0
    } else {
        support.iter().sum::<f64>() / support.len() as f64
    };
    let spread = support
        .iter()
        .map(|x| (x - mean).abs())
        .fold(0.0_f64, f64::max)
        .max(1.0);
    let count = support.len() + 3;
    (0..count)
        .map(|k| {
            let u = if count > 1 {
                2.0 * (k as f64) / ((count - 1) as f64) - 1.0
            } else {
                0.0
            };
            Complex64::new(mean + spread * u, (2.0_f64).powi(k as i32))
        })
        .collect()
}

/// Result of the collocation solve for atom masses and `c_α`.
#[derive(Debug, Clone, PartialEq)]
pub struct MassFit {
    pub atoms: Vec<Atom>,
    pub c: f64,
    pub fit_residual: f64,
}

/// Solve the Herglotz collocation system
/// `v_α(z_k) - ∫ P_{y_k}(x_k - t) μ_α^a(t) dt = c·y_k + Σ_j P_{y_k}(x_k - x_j) w_j`
/// for the masses `w_j` and `c`, in least squares over the probes.
pub fn atom_masses_linear_system(
    phi: &BoundedSymbol,
    alpha: f64,
    probes: &[Complex64],
    cfg: &QuadratureConfig,
) -> Result<MassFit, AcError> {
    let support = singular_support(phi, alpha);
    let unknowns = support.len() + 1;
    if probes.len() < unknowns {
        return Err(AcError::TooFewProbes {
            needed: unknowns,
            atoms: support.len(),
            got: probes.len(),
        });
    }
    for &z in probes {
        if z.im <= 0.0 {
            return Err(AcError::ProbeNotUpper(z));
        }
    }

    let density_zero = phi.real_on_line();
    let density = if density_zero {
        None
    } else {
        Some(ac_density(phi, alpha))
    };

    let m = probes.len();
    let mut a = alloc::vec![0.0_f64; m * unknowns];
    let mut b = alloc::vec![0.0_f64; m];
    for (k, &z) in probes.iter().enumerate() {
        let (x, y) = (z.re, z.im);
        let mut lhs = clark_harmonic(phi, alpha, z)?;
        if let Some(d) = &density {
            let kernel = BoundaryFunction::poisson(x, y);
            let integrand = BoundaryFunction::new(
                {
                    let (kc, dc) = (kernel.clone(), d.clone());
                    move |t| kc.eval(t) * dc.eval(t)
                },
                4.0,
                {
                    let mut p = alloc::vec![x];
                    p.extend_from_slice(d.pole_list());
                    p
                },
                false,
            );
            lhs -= hardy::integrate_line(&integrand, cfg)?.value.re;
        }
        b[k] = lhs;
        for (j, &xj) in support.iter().enumerate() {
            a[k * unknowns + j] = poisson_kernel(y, x - xj);
        }
        a[k * unknowns + support.len()] = y;
    }

    let sol = linalg::least_squares(&a, m, unknowns, &b);
    if sol.condition > tol::PROBE_CONDITION_MAX {
        return Err(AcError::IllConditionedProbes {
            condition: sol.condition,
        });
    }
    let atoms = support
        .iter()
        .zip(sol.x.iter())
        .map(|(&location, &mass)| Atom { location, mass })
        .collect();
    Ok(MassFit {
        atoms,
        c: sol.x[support.len()],
        fit_residual: sol.residual_norm,
    })
}

fn poisson_kernel(y: f64, d: f64) -> f64 {
    y / (core::f64::consts::PI * (d * d + y * y))
}

/// Cross-check masses `w_j = 1/φ'(x_j)` at the support points. This rule is a
/// heuristic (it reproduces the collocation masses on the symbols where both
/// apply) and is used only for cross-validation, never as the primary method.
#[derive(Debug, Clone, PartialEq)]
pub struct HeuristicMasses {
    pub atoms: Vec<Atom>,
    pub method: &'static str,
}

pub fn atom_masses_derivative(phi: &BoundedSymbol, alpha: f64) -> Result<HeuristicMasses, AcError> {
    let support = singular_support(phi, alpha);
    let mut atoms = Vec::with_capacity(support.len());
    for &x in &support {
        let d = phi.map().derivative_eval(Complex64::new(x, 0.0))?;
        if d.norm() < 1e-12 {
            return Err(AcError::CriticalBoundaryPoint { location: x });
        }
        atoms.push(Atom {
            location: x,
            mass: d.inv().re,
        });
    }
    Ok(HeuristicMasses {
        atoms,
        method: "derivative-reciprocal heuristic; cross-validation only",
    })
}

/// The point-mass-at-infinity coefficient. For a bounded rational symbol
/// `φ(∞) = ∞`, so `α = ∞` has no preimage and the coefficient is exactly
/// zero; the empirically fitted value is returned as a diagnostic and must
/// stay small.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CCoefficient {
    pub value: f64,
    pub fitted: f64,
}

pub fn c_coefficient(
    phi: &BoundedSymbol,
    alpha: f64,
    cfg: &QuadratureConfig,
) -> Result<CCoefficient, AcError> {
    let support = singular_support(phi, alpha);
    let probes = default_probes(&support);
    let fit = atom_masses_linear_system(phi, alpha, &probes, cfg)?;
    if fit.c.abs() > tol::C_COEFF_FAILURE {
        return Err(AcError::CConsistencyFailure { fitted: fit.c });
    }
    Ok(CCoefficient {
        value: 0.0,
        fitted: fit.c,
    })
}

/// Assemble the full measure: support, masses, density, and coefficient.
pub fn build_measure(
    phi: &BoundedSymbol,
    alpha: f64,
    probes: Option<&[Complex64]>,
    cfg: &QuadratureConfig,
) -> Result<ACMeasure, AcError> {
    let support = singular_support(phi, alpha);
    let default;
    let probes = match probes {
        Some(p) => p,
        None => {
            default = default_probes(&support);
            &default
        }
    };
    let fit = atom_masses_linear_system(phi, alpha, probes, cfg)?;
    if fit.c.abs() > tol::C_COEFF_FAILURE {
        return Err(AcError::CConsistencyFailure { fitted: fit.c });
    }
    Ok(ACMeasure {
        alpha,
        atoms: fit.atoms,
        density: ac_density(phi, alpha),
        c: 0.0,
        fitted_c: fit.c,
        fit_residual: fit.fit_residual,
        density_is_zero: phi.real_on_line(),
    })
}

/// The Aleksandrov operator: `A_φ f(α) = ∫ f dμ_α = Σ_j w_j f(x_j) + ∫ f μ_α^a`.
pub fn aleksandrov_apply(
    phi: &BoundedSymbol,
    f: &BoundaryFunction,
    alpha: f64,
    cfg: &QuadratureConfig,
) -> Result<Complex64, AcError> {
    aleksandrov_apply_detailed(phi, f, alpha, None, cfg).map(|(v, _, _)| v)
}

/// [`aleksandrov_apply`] with probe control, also returning the fitted atoms
/// and the fit residual (the adjoint boundary backend surfaces them as
/// diagnostics).
pub fn aleksandrov_apply_detailed(
    phi: &BoundedSymbol,
    f: &BoundaryFunction,
    alpha: f64,
    probes: Option<&[Complex64]>,
    cfg: &QuadratureConfig,
) -> Result<(Complex64, Vec<Atom>, f64), AcError> {
    if f.decay_exponent() + 2.0 <= 1.0 {
        return Err(AcError::Quadrature(HardyError::NonIntegrable {
            decay: f.decay_exponent() + 2.0,
        }));
    }
    let support = singular_support(phi, alpha);
    let density_zero = phi.real_on_line();

    let mut value = Complex64::new(0.0, 0.0);
    let mut atoms: Vec<Atom> = Vec::new();
    let mut fit_residual = 0.0;
    if !support.is_empty() {
        let default;
        let probes = match probes {
            Some(p) => p,
            None => {
                default = default_probes(&support);
                &default
            }
        };
        let fit = atom_masses_linear_system(phi, alpha, probes, cfg)?;
        for atom in &fit.atoms {
            value += f.eval_real(atom.location) * atom.mass;
        }
        atoms = fit.atoms;
        fit_residual = fit.fit_residual;
    }
    if !density_zero {
        let density = ac_density(phi, alpha);
        let integrand = BoundaryFunction::new(
            {
                let (fc, dc) = (f.clone(), density.clone());
                move |t| fc.eval(t) * dc.eval(t)
            },
            f.decay_exponent() + 2.0,
            {
                let mut p = f.pole_list().to_vec();
                p.extend_from_slice(density.pole_list());
                p
            },
            false,
        );
        value += hardy::integrate_line(&integrand, cfg)?.value;
    }
    Ok((value, atoms, fit_residual))
}
