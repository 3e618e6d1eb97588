//! Complex polynomials and rational maps: arithmetic, evaluation, root
//! finding, half-plane preimage sets, and the conjugate reflection
//! `ψ(s) = conj(r(conj s))` needed by the residue backend.

use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::roots;
use crate::tol;

/// Errors from polynomial and rational-map operations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PolyError {
    #[error("no roots of a constant")]
    ConstantHasNoRoots,
    #[error("root iteration did not converge (residual {residual:e})")]
    RootsNotConverged { residual: f64 },
    #[error("evaluation too close to a pole (distance to nearest pole {distance:e})")]
    PoleProximity { distance: f64 },
    #[error("denominator is identically zero")]
    ZeroDenominator,
    #[error("preimage equation num - z*den is constant; no preimages to solve for")]
    DegeneratePreimageEquation,
}

/// Dense complex polynomial, coefficients in ascending powers.
///
/// Trailing zero coefficients are trimmed on construction, so the leading
/// coefficient is nonzero unless the polynomial is identically zero, and
/// `degree()` equals `coeffs().len() - 1` for nonzero polynomials.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<Complex64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        Poly { coeffs }
    }

    /// Polynomial with the given real coefficients, ascending powers.
    pub fn from_real(coeffs: &[f64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Poly::new(alloc::vec![Complex64::new(0.0, 0.0)])
    }

    pub fn one() -> Self {
        Poly::new(alloc::vec![Complex64::new(1.0, 0.0)])
    }

    /// The monomial `z`.
    pub fn identity() -> Self {
        Poly::new(alloc::vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        ])
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].norm() == 0.0
    }

    /// Degree; zero for constants (including the zero polynomial).
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> Complex64 {
        *self.coeffs.last().expect("coeffs nonempty")
    }

    pub fn constant_term(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// Horner evaluation at `z`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Coefficient-wise derivative.
    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() == 1 {
            return Poly::zero();
        }
        let d: Vec<Complex64> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * (k as f64))
            .collect();
        Poly::new(d)
    }

    /// All coefficients conjugated. For real arguments `x`,
    /// `conj_coeffs(p)(x) = conj(p(x))`.
    pub fn conj_coeffs(&self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c.conj()).collect())
    }

    pub fn scale(&self, c: Complex64) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| a * c).collect())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = alloc::vec![Complex64::new(0.0, 0.0); n];
        for (k, &c) in self.coeffs.iter().enumerate() {
            out[k] += c;
        }
        for (k, &c) in other.coeffs.iter().enumerate() {
            out[k] += c;
        }
        Poly::new(out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = alloc::vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// `Σ |c_k| |z|^k`, the natural scale for backward-error bounds at `z`.
    pub fn magnitude_scale(&self, z: Complex64) -> f64 {
        let r = z.norm();
        let mut acc = 0.0;
        let mut p = 1.0;
        for c in &self.coeffs {
            acc += c.norm() * p;
            p *= r;
        }
        acc
    }

    /// Deflate a known root by synthetic division. The remainder is dropped;
    /// callers are expected to pass genuine roots.
    pub fn deflate(&self, root: Complex64) -> Poly {
        let n = self.coeffs.len();
        if n <= 1 {
            return Poly::zero();
        }
        let mut out = alloc::vec![Complex64::new(0.0, 0.0); n - 1];
        let mut carry = self.coeffs[n - 1];
        for k in (0..n - 1).rev() {
            out[k] = carry;
            carry = self.coeffs[k] + carry * root;
        }
        Poly::new(out)
    }

    /// Whether every coefficient is real to within [`tol::REAL_COEFF_TOL`]
    /// relative to the largest coefficient.
    pub fn is_real(&self) -> bool {
        let scale = self
            .coeffs
            .iter()
            .map(|c| c.norm())
            .fold(0.0_f64, f64::max)
            .max(1e-300);
        self.coeffs
            .iter()
            .all(|c| c.im.abs() <= tol::REAL_COEFF_TOL * scale)
    }

    /// All complex roots with multiplicities (companion-matrix eigenvalues,
    /// Newton-polished, clustered within the multiplicity merge radius).
    pub fn roots(&self) -> Result<RootSet, PolyError> {
        if self.degree() == 0 {
            return Err(PolyError::ConstantHasNoRoots);
        }
        roots::all_roots(self)
    }
}

/// One cluster of roots: location and multiplicity.
pub type RootEntry = (Complex64, usize);

/// Roots of a polynomial together with the worst residual achieved.
///
/// Multiplicities sum to the degree of the defining polynomial. `residual` is
/// the maximum `|p(root)|` over the reported roots; the relative
/// (backward-error) form of the polish guarantee is
/// `|p(root)| <= POLISH_RESIDUAL_REL * Σ |c_k| |root|^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    pub roots: Vec<RootEntry>,
    pub residual: f64,
    pub warnings: Vec<String>,
}

impl RootSet {
    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|&(_, m)| m).sum()
    }

    /// Locations only, multiplicities flattened out.
    pub fn flattened(&self) -> Vec<Complex64> {
        let mut out = Vec::new();
        for &(r, m) in &self.roots {
            for _ in 0..m {
                out.push(r);
            }
        }
        out
    }
}

/// Which roots of the preimage equation to report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfPlaneFilter {
    /// Strictly above the membership band: `Im t > threshold`.
    Upper,
    /// Within the band around `ℝ`: `|Im t| <= threshold`.
    RealLine,
    /// No filtering.
    All,
}

/// A rational map `num/den` with exact complex coefficients, kept in lowest
/// terms: common roots of numerator and denominator within
/// [`tol::APPROX_GCD_TOL`] are cancelled on construction and recorded in
/// `warnings`.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalMap {
    num: Poly,
    den: Poly,
    warnings: Vec<String>,
}

impl RationalMap {
    pub fn new(num: Poly, den: Poly) -> Result<Self, PolyError> {
        if den.is_zero() {
            return Err(PolyError::ZeroDenominator);
        }
        let (num, den, warnings) = cancel_common_roots(num, den);
        Ok(RationalMap { num, den, warnings })
    }

    /// The polynomial `a z + b` (denominator one).
    pub fn linear(a: Complex64, b: Complex64) -> Self {
        RationalMap::new(Poly::new(alloc::vec![b, a]), Poly::one()).expect("denominator is one")
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    /// Warnings recorded at construction (cancelled common roots).
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn num_degree(&self) -> usize {
        if self.num.is_zero() {
            0
        } else {
            self.num.degree()
        }
    }

    pub fn den_degree(&self) -> usize {
        self.den.degree()
    }

    pub fn is_constant(&self) -> bool {
        self.num_degree() == 0 && self.den_degree() == 0 || self.num.is_zero()
    }

    /// Whether the map takes real values on `ℝ` (minus poles): the imaginary
    /// part polynomial `Im(num(x) conj(den(x)))` vanishes identically.
    pub fn real_on_line(&self) -> bool {
        let q = self.num.mul(&self.den.conj_coeffs());
        let scale = q
            .coeffs()
            .iter()
            .map(|c| c.norm())
            .fold(0.0_f64, f64::max)
            .max(1e-300);
        q.coeffs()
            .iter()
            .all(|c| c.im.abs() <= tol::REAL_COEFF_TOL * scale)
    }

    /// `num(z)/den(z)`; errors when `|den(z)|` falls under the pole tolerance.
    pub fn eval(&self, z: Complex64) -> Result<Complex64, PolyError> {
        let n = self.num.eval(z);
        let d = self.den.eval(z);
        if d.norm() < tol::POLE_TOL_REL * (1.0 + n.norm()) {
            return Err(PolyError::PoleProximity {
                distance: self.distance_to_pole(z),
            });
        }
        Ok(n / d)
    }

    /// Derivative `(num' den - num den')/den²` at `z`, same pole tolerance.
    pub fn derivative_eval(&self, z: Complex64) -> Result<Complex64, PolyError> {
        let n = self.num.eval(z);
        let d = self.den.eval(z);
        if d.norm() < tol::POLE_TOL_REL * (1.0 + n.norm()) {
            return Err(PolyError::PoleProximity {
                distance: self.distance_to_pole(z),
            });
        }
        let np = self.num.derivative().eval(z);
        let dp = self.den.derivative().eval(z);
        Ok((np * d - n * dp) / (d * d))
    }

    /// The map `ψ(s) = conj(r(conj s))`: every coefficient conjugated.
    pub fn conj_reflect(&self) -> RationalMap {
        RationalMap {
            num: self.num.conj_coeffs(),
            den: self.den.conj_coeffs(),
            warnings: Vec::new(),
        }
    }

    /// Real roots of the denominator (poles of the map on the line).
    pub fn real_poles(&self) -> Vec<f64> {
        if self.den.degree() == 0 {
            return Vec::new();
        }
        match self.den.roots() {
            Ok(rs) => rs
                .roots
                .iter()
                .filter(|(r, _)| r.im.abs() <= tol::IM_THRESHOLD_REL * (1.0 + r.norm()))
                .map(|(r, _)| r.re)
                .collect(),
            Err(_) => Vec::new(),
        }
    }

    fn distance_to_pole(&self, z: Complex64) -> f64 {
        if self.den.degree() == 0 {
            return f64::INFINITY;
        }
        match self.den.roots() {
            Ok(rs) => rs
                .roots
                .iter()
                .map(|&(p, _)| (z - p).norm())
                .fold(f64::INFINITY, f64::min),
            Err(_) => f64::NAN,
        }
    }

    /// Solutions of `r(t) = z`, i.e. roots of `num - z*den`, restricted by the
    /// half-plane filter. Roots just outside the real band carry a warning and
    /// are reported under the real-line filter.
    pub fn preimages(&self, z: Complex64, filter: HalfPlaneFilter) -> Result<RootSet, PolyError> {
        let p = self.num.sub(&self.den.scale(z));
        if p.degree() == 0 {
            return Err(PolyError::DegeneratePreimageEquation);
        }
        let all = p.roots()?;
        let mut kept: Vec<RootEntry> = Vec::new();
        let mut warnings = all.warnings.clone();
        for &(t, m) in &all.roots {
            let threshold = tol::IM_THRESHOLD_REL * (1.0 + t.norm());
            let in_band = t.im.abs() <= threshold;
            let near_band = !in_band && t.im.abs() <= threshold * (1.0 + tol::AMBIGUOUS_BAND_FACTOR);
            match filter {
                HalfPlaneFilter::All => kept.push((t, m)),
                HalfPlaneFilter::Upper => {
                    if t.im > threshold && !near_band {
                        kept.push((t, m));
                    }
                }
                HalfPlaneFilter::RealLine => {
                    if in_band {
                        kept.push((t, m));
                    } else if near_band {
                        warnings.push(alloc::format!(
                            "root {t} is in the ambiguous band around the real line; reported as real"
                        ));
                        kept.push((t, m));
                    }
                }
            }
        }
        kept.sort_by(|a, b| {
            a.0.re
                .partial_cmp(&b.0.re)
                .unwrap_or(core::cmp::Ordering::Equal)
                .then(a.0.im.partial_cmp(&b.0.im).unwrap_or(core::cmp::Ordering::Equal))
        });
        Ok(RootSet {
            roots: kept,
            residual: all.residual,
            warnings,
        })
    }
}

/// Cancel approximately-common roots of `num` and `den`.
fn cancel_common_roots(num: Poly, den: Poly) -> (Poly, Poly, Vec<String>) {
    let mut warnings = Vec::new();
    if num.is_zero() || num.degree() == 0 || den.degree() == 0 {
        return (num, den, warnings);
    }
    let num_roots = match num.roots() {
        Ok(r) => r,
        Err(_) => return (num, den, warnings),
    };
    let den_roots = match den.roots() {
        Ok(r) => r,
        Err(_) => return (num, den, warnings),
    };
    let mut num_flat = num_roots.flattened();
    let mut den_flat = den_roots.flattened();
    let mut cancelled: Vec<Complex64> = Vec::new();
    let mut i = 0;
    while i < num_flat.len() {
        let mut matched = None;
        for (j, &d) in den_flat.iter().enumerate() {
            if (num_flat[i] - d).norm() <= tol::APPROX_GCD_TOL * (1.0 + d.norm()) {
                matched = Some(j);
                break;
            }
        }
        if let Some(j) = matched {
            cancelled.push(num_flat[i]);
            num_flat.remove(i);
            den_flat.remove(j);
        } else {
            i += 1;
        }
    }
    if cancelled.is_empty() {
        return (num, den, warnings);
    }
    for r in &cancelled {
        warnings.push(alloc::format!("cancelled common root near {r}"));
    }
    // Rebuild from the surviving roots, preserving the leading coefficients.
    let rebuild = |leading: Complex64, roots: &[Complex64]| {
        let mut p = Poly::new(alloc::vec![leading]);
        for &r in roots {
            p = p.mul(&Poly::new(alloc::vec![-r, Complex64::new(1.0, 0.0)]));
        }
        p
    };
    (
        rebuild(num.leading(), &num_flat),
        rebuild(den.leading(), &den_flat),
        warnings,
    )
}
