//! Boundedness decision procedures for `C_φ` with rational symbol: the
//! self-map check, the complete degree-gap characterization, the necessary
//! coefficient conditions, the infinite-measure obstruction witness for the
//! unbounded case, and the exponent rule for quotients of linear combinations
//! of real powers of `z`.
//!
//! For a rational self-map `r` of `ℂ⁺`, `C_r` is bounded on every `H^p(ℂ⁺)`
//! and `L^p(ℝ)` (1 ≤ p < ∞) simultaneously iff `deg num = deg den + 1`,
//! equivalently iff `r(∞) = ∞`. The verdict is therefore p-independent.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::poly::RationalMap;
use crate::tol;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ClassifyError {
    #[error("constant maps are not classified")]
    ConstantMap,
    #[error("negative exponent {exponent} not allowed in a power-quotient map")]
    NegativeExponent { exponent: f64 },
    #[error("term list is empty (or all coefficients vanish)")]
    EmptyTerms,
    #[error("symbol is not a self-map of the upper half-plane: {0:?}")]
    NotSelfMap(SelfMapVerdict),
    #[error("symbol does not induce a bounded composition operator (degree gap {gap})")]
    NotBounded { gap: i64 },
    #[error(transparent)]
    Poly(#[from] crate::poly::PolyError),
}

/// Outcome of the self-map check with the method that decided it.
#[derive(Debug, Clone, PartialEq)]
pub struct SelfMapVerdict {
    pub is_selfmap: bool,
    /// Which route certified the boundary behaviour.
    pub method: &'static str,
    /// Human-readable failure records (empty when the map passes).
    pub failures: Vec<String>,
}

/// One checked condition with its outcome; `passed = None` marks a condition
/// that does not apply (e.g. the constant-ratio condition when `b₀ = 0`).
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionRecord {
    pub name: &'static str,
    pub passed: Option<bool>,
    pub detail: String,
}

/// Boundedness verdict for a rational self-map, with per-condition records.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolClassification {
    pub bounded: bool,
    pub selfmap: SelfMapVerdict,
    /// Numerator degree.
    pub n: usize,
    /// Denominator degree.
    pub m: usize,
    pub leading_ratio: Complex64,
    /// `a₀/b₀`, absent when the denominator constant term vanishes.
    pub constant_ratio: Option<Complex64>,
    pub reasons: Vec<ConditionRecord>,
}

/// Result of classifying a rational map: symbols that fail the self-map
/// hypothesis are reported as not applicable, never as a silent `false`.
#[derive(Debug, Clone, PartialEq)]
pub enum Classification {
    NotSelfMap(SelfMapVerdict),
    Classified(SymbolClassification),
}

impl Classification {
    pub fn is_bounded(&self) -> bool {
        matches!(self, Classification::Classified(c) if c.bounded)
    }
}

/// How an unbounded symbol was caught being small on a set of infinite measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessKind {
    /// The symbol tends to a finite nonzero limit at infinity.
    FiniteLimitAtInfinity,
    /// The symbol decays on the tail (numerator degree below denominator's).
    BoundedOnTail,
}

/// Witness that `|φ| < K` on `{|x| > N}`, a set of infinite measure, which
/// rules out boundedness of `C_φ` on every `L^p` and `H^p`. Paired with the
/// catalogue function named in `test_function` for demonstrations.
#[derive(Debug, Clone, PartialEq)]
pub struct ObstructionWitness {
    pub kind: WitnessKind,
    pub bound_k: f64,
    pub tail_radius: f64,
    pub test_function: &'static str,
}

/// The three coefficient conditions every bounded rational symbol satisfies.
#[derive(Debug, Clone, PartialEq)]
pub struct NecessaryConditions {
    pub degree_gap: ConditionRecord,
    pub leading_ratio: ConditionRecord,
    pub constant_ratio: ConditionRecord,
}

impl NecessaryConditions {
    /// Whether no condition failed (not-applicable records do not count
    /// against the symbol).
    pub fn all_pass(&self) -> bool {
        [&self.degree_gap, &self.leading_ratio, &self.constant_ratio]
            .iter()
            .all(|r| r.passed != Some(false))
    }
}

/// Exponent-rule verdict for quotients of linear combinations of powers.
#[derive(Debug, Clone, PartialEq)]
pub struct QlpVerdict {
    pub bounded: bool,
    /// `a₁ - b₁`, the top-exponent gap; bounded iff the gap is ≥ 1.
    pub gap: f64,
    pub top_num_exponent: f64,
    pub top_den_exponent: f64,
    pub note: &'static str,
}

/// Decide whether `r` maps the open upper half-plane into itself.
///
/// The certificate combines (a) absence of poles in the open upper half-plane,
/// (b) nonnegativity of `Im(num(x) conj(den(x)))` on `ℝ`, certified through
/// its real roots plus a dense sample, and (c) an interior grid sample of
/// `Im r(z)` on `{|Re z| ≤ 10, 1e-3 ≤ Im z ≤ 10}`. The interior grid is what
/// rejects maps like `z²` whose boundary imaginary part vanishes identically
/// while the interior dips below the line.
pub fn is_selfmap(r: &RationalMap) -> Result<SelfMapVerdict, ClassifyError> {
    if r.is_constant() {
        return Err(ClassifyError::ConstantMap);
    }
    let mut failures: Vec<String> = Vec::new();

    // (a) no poles in the open upper half-plane
    if r.den().degree() >= 1 {
        if let Ok(rs) = r.den().roots() {
            for &(p, _) in &rs.roots {
                if p.im > tol::IM_THRESHOLD_REL * (1.0 + p.norm()) {
                    failures.push(format!("pole at {p} lies in the open upper half-plane"));
                }
            }
        }
    }

    // (b) boundary nonnegativity of Im(num * conj(den)) on ℝ
    let q = r.num().mul(&r.den().conj_coeffs());
    let real_on_line = r.real_on_line();
    let method = if real_on_line {
        "real boundary values; pole and interior-grid checks only"
    } else {
        "boundary sign analysis plus interior grid"
    };
    if !real_on_line {
        let h: Vec<f64> = q.coeffs().iter().map(|c| c.im).collect();
        let h_poly = crate::poly::Poly::from_real(&h);
        let mut candidates: Vec<f64> = Vec::new();
        if h_poly.degree() >= 1 {
            if let Ok(rs) = h_poly.roots() {
                let mut reals: Vec<f64> = rs
                    .roots
                    .iter()
                    .filter(|(z, _)| z.im.abs() <= 1e-6 * (1.0 + z.norm()))
                    .map(|(z, _)| z.re)
                    .collect();
                reals.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
                for w in reals.windows(2) {
                    candidates.push(0.5 * (w[0] + w[1]));
                }
                if let (Some(&first), Some(&last)) = (reals.first(), reals.last()) {
                    candidates.push(first - 1.0 - first.abs());
                    candidates.push(last + 1.0 + last.abs());
                }
            }
        }
        for k in 0..512 {
            let theta = -core::f64::consts::FRAC_PI_2 + core::f64::consts::PI * (k as f64 + 0.5) / 512.0;
            candidates.push(theta.tan());
        }
        for &x in &candidates {
            let hx = h_poly.eval(Complex64::new(x, 0.0)).re;
            let scale = 1.0 + q.magnitude_scale(Complex64::new(x, 0.0));
            if hx < -tol::SELFMAP_TOL * scale {
                failures.push(format!(
                    "Im r(x) < 0 on the boundary near x = {x} (Im(num conj(den)) = {hx:e})"
                ));
                break;
            }
        }
    }

    // (c) interior grid
    'grid: for i in 0..20 {
        let re = -10.0 + 20.0 * (i as f64) / 19.0;
        for j in 0..20 {
            let im = 1e-3 * (1e4_f64).powf(j as f64 / 19.0);
            let z = Complex64::new(re, im);
            if let Ok(w) = r.eval(z) {
                if w.im < -tol::SELFMAP_INTERIOR_TOL {
                    failures.push(format!("Im r({z}) = {:e} < 0 in the interior", w.im));
                    break 'grid;
                }
            }
        }
    }

    Ok(SelfMapVerdict {
        is_selfmap: failures.is_empty(),
        method,
        failures,
    })
}

fn leading_ratio_record(r: &RationalMap) -> (Complex64, ConditionRecord) {
    let ratio = r.num().leading() / r.den().leading();
    let ok = ratio.im.abs() <= tol::LEADING_RATIO_IM_REL * ratio.norm() && ratio.re > 0.0;
    (
        ratio,
        ConditionRecord {
            name: "leading ratio real and positive",
            passed: Some(ok),
            detail: format!("a_n/b_m = {ratio}"),
        },
    )
}

fn constant_ratio_record(r: &RationalMap) -> (Option<Complex64>, ConditionRecord) {
    let b0 = r.den().constant_term();
    if b0.norm() == 0.0 {
        return (
            None,
            ConditionRecord {
                name: "constant ratio upper half-plane",
                passed: None,
                detail: String::from("den constant term zero; condition not applicable"),
            },
        );
    }
    let ratio = r.num().constant_term() / b0;
    let ok = ratio.im >= -tol::LEADING_RATIO_IM_REL * (1.0 + ratio.norm());
    (
        Some(ratio),
        ConditionRecord {
            name: "constant ratio upper half-plane",
            passed: Some(ok),
            detail: format!("Im(a_0/b_0) = {}", ratio.im),
        },
    )
}

/// Full boundedness classification. Requires a nonconstant symbol; symbols
/// that are not self-maps yield [`Classification::NotSelfMap`].
pub fn classify_rational(r: &RationalMap) -> Result<Classification, ClassifyError> {
    let sm = is_selfmap(r)?;
    if !sm.is_selfmap {
        return Ok(Classification::NotSelfMap(sm));
    }
    let n = r.num_degree();
    let m = r.den_degree();
    let bounded = n == m + 1;
    let (leading_ratio, lead_rec) = leading_ratio_record(r);
    let (constant_ratio, const_rec) = constant_ratio_record(r);
    let reasons = alloc::vec![
        ConditionRecord {
            name: "self-map of the upper half-plane",
            passed: Some(true),
            detail: String::from(sm.method),
        },
        ConditionRecord {
            name: "degree gap n = m + 1",
            passed: Some(bounded),
            detail: format!("n = {n}, m = {m}"),
        },
        lead_rec,
        const_rec,
    ];
    Ok(Classification::Classified(SymbolClassification {
        bounded,
        selfmap: sm,
        n,
        m,
        leading_ratio,
        constant_ratio,
        reasons,
    }))
}

/// The three necessary coefficient conditions, usable as a fast pre-filter
/// before the full self-map check. Any failure proves the symbol cannot
/// induce a bounded operator.
pub fn necessary_conditions(r: &RationalMap) -> NecessaryConditions {
    let n = r.num_degree();
    let m = r.den_degree();
    let degree_gap = ConditionRecord {
        name: "degree gap n = m + 1",
        passed: Some(n == m + 1),
        detail: format!("n = {n}, m = {m}"),
    };
    let (_, leading_ratio) = leading_ratio_record(r);
    let (_, constant_ratio) = constant_ratio_record(r);
    NecessaryConditions {
        degree_gap,
        leading_ratio,
        constant_ratio,
    }
}

/// When `r(∞)` is finite, produce the witness `|r| < K = |r(∞)| + 1` on
/// `{|x| > N}`, validated on a 1000-point sample of the tail. Returns `None`
/// when `r(∞) = ∞`. Independent of the self-map status.
pub fn infinite_measure_obstruction(r: &RationalMap) -> Option<ObstructionWitness> {
    let n = r.num_degree();
    let m = r.den_degree();
    if n > m && !r.num().is_zero() {
        return None;
    }
    let limit = if n == m && !r.num().is_zero() {
        (r.num().leading() / r.den().leading()).norm()
    } else {
        0.0
    };
    let k = limit + 1.0;
    let accept = 0.5 * (k + limit); // margin between the limit and the bound

    let pole_reach = r
        .real_poles()
        .iter()
        .map(|p| p.abs())
        .fold(0.0_f64, f64::max);
    let mut radius = 2.0 * (1.0 + pole_reach);
    for _ in 0..40 {
        let mut worst = 0.0_f64;
        let mut ok = true;
        for i in 0..1000 {
            let mag = radius * (1e3_f64).powf(i as f64 / 999.0) * (1.0 + 1e-9);
            let x = if i % 2 == 0 { mag } else { -mag };
            match r.eval(Complex64::new(x, 0.0)) {
                Ok(v) => {
                    worst = worst.max(v.norm());
                    if v.norm() >= accept {
                        ok = false;
                        break;
                    }
                }
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if ok && worst < accept {
            let kind = if n == m {
                WitnessKind::FiniteLimitAtInfinity
            } else {
                WitnessKind::BoundedOnTail
            };
            return Some(ObstructionWitness {
                kind,
                bound_k: k,
                tail_radius: radius,
                test_function: "f_2",
            });
        }
        radius *= 2.0;
    }
    None
}

/// Exponent rule for maps `(Σ λ_i z^{a_i}) / (Σ μ_j z^{b_j})` with
/// nonnegative real exponents: bounded iff `a₁ - b₁ ≥ 1` where `a₁`, `b₁` are
/// the top exponents. No self-map verification is attempted for non-rational
/// exponents; the verdict records that it is exponent-rule-only.
pub fn classify_qlp(
    num_terms: &[(Complex64, f64)],
    den_terms: &[(Complex64, f64)],
) -> Result<QlpVerdict, ClassifyError> {
    let top = |terms: &[(Complex64, f64)]| -> Result<f64, ClassifyError> {
        let mut best: Option<f64> = None;
        for &(coeff, exp) in terms {
            if exp < 0.0 {
                return Err(ClassifyError::NegativeExponent { exponent: exp });
            }
            if coeff.norm() == 0.0 {
                continue;
            }
            best = Some(best.map_or(exp, |b: f64| b.max(exp)));
        }
        best.ok_or(ClassifyError::EmptyTerms)
    };
    let a1 = top(num_terms)?;
    let b1 = top(den_terms)?;
    Ok(QlpVerdict {
        bounded: a1 - b1 >= 1.0,
        gap: a1 - b1,
        top_num_exponent: a1,
        top_den_exponent: b1,
        note: "exponent rule only; self-map condition not verified",
    })
}

/// A rational symbol that has been verified to be a bounded-operator symbol:
/// a self-map of `ℂ⁺` with numerator degree one above the denominator's.
/// Operations that require boundedness take this type, so the (root-finding
/// and grid-sampling) verification runs once per symbol rather than per call.
#[derive(Debug, Clone)]
pub struct BoundedSymbol {
    map: RationalMap,
    classification: SymbolClassification,
}

impl BoundedSymbol {
    pub fn new(map: RationalMap) -> Result<Self, ClassifyError> {
        match classify_rational(&map)? {
            Classification::NotSelfMap(v) => Err(ClassifyError::NotSelfMap(v)),
            Classification::Classified(c) => {
                if !c.bounded {
                    Err(ClassifyError::NotBounded {
                        gap: c.n as i64 - c.m as i64,
                    })
                } else {
                    Ok(BoundedSymbol {
                        map,
                        classification: c,
                    })
                }
            }
        }
    }

    pub fn map(&self) -> &RationalMap {
        &self.map
    }

    pub fn classification(&self) -> &SymbolClassification {
        &self.classification
    }

    /// Whether the symbol takes real values on `ℝ` (inner case: the Clark
    /// measures are purely atomic).
    pub fn real_on_line(&self) -> bool {
        self.map.real_on_line()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn z_minus_recip() -> RationalMap {
        RationalMap::new(Poly::from_real(&[-1.0, 0.0, 1.0]), Poly::from_real(&[0.0, 1.0])).unwrap()
    }

    fn neg_recip() -> RationalMap {
        RationalMap::new(Poly::from_real(&[-1.0]), Poly::from_real(&[0.0, 1.0])).unwrap()
    }

    #[test]
    fn selfmap_examples() {
        assert!(is_selfmap(&z_minus_recip()).unwrap().is_selfmap);
        let lin = RationalMap::linear(c(2.0, 0.0), c(0.0, 1.0));
        assert!(is_selfmap(&lin).unwrap().is_selfmap);
        assert!(is_selfmap(&neg_recip()).unwrap().is_selfmap);
        // z^2 has vanishing boundary imaginary part but dips below ℝ inside
        let square = RationalMap::new(Poly::from_real(&[0.0, 0.0, 1.0]), Poly::one()).unwrap();
        let v = is_selfmap(&square).unwrap();
        assert!(!v.is_selfmap);
        assert!(!v.failures.is_empty());
    }

    #[test]
    fn constant_map_rejected() {
        let k = RationalMap::new(Poly::from_real(&[3.0]), Poly::one()).unwrap();
        assert_eq!(is_selfmap(&k), Err(ClassifyError::ConstantMap));
    }

    #[test]
    fn classify_examples() {
        let iso = classify_rational(&z_minus_recip()).unwrap();
        match &iso {
            Classification::Classified(c) => {
                assert!(c.bounded);
                assert_eq!((c.n, c.m), (2, 1));
            }
            _ => panic!("expected classified"),
        }

        let lin = RationalMap::linear(c(2.0, 0.0), c(0.0, 1.0));
        assert!(classify_rational(&lin).unwrap().is_bounded());

        let rec = classify_rational(&neg_recip()).unwrap();
        match &rec {
            Classification::Classified(c) => {
                assert!(!c.bounded);
                assert_eq!((c.n, c.m), (0, 1));
            }
            _ => panic!("-1/z is a self-map"),
        }

        let square = RationalMap::new(Poly::from_real(&[0.0, 0.0, 1.0]), Poly::one()).unwrap();
        assert!(matches!(
            classify_rational(&square).unwrap(),
            Classification::NotSelfMap(_)
        ));
    }

    #[test]
    fn necessary_condition_examples() {
        let lin = RationalMap::linear(c(2.0, 0.0), c(0.0, 1.0));
        let nc = necessary_conditions(&lin);
        assert!(nc.all_pass());
        assert!(nc.constant_ratio.detail.contains("= 1"));

        let square = RationalMap::new(Poly::from_real(&[0.0, 0.0, 1.0]), Poly::one()).unwrap();
        assert_eq!(necessary_conditions(&square).degree_gap.passed, Some(false));

        let iz = RationalMap::linear(c(0.0, 1.0), c(0.0, 0.0));
        assert_eq!(necessary_conditions(&iz).leading_ratio.passed, Some(false));
    }

    #[test]
    fn obstruction_examples() {
        // tail bound oracle: |-1/x| < 1 for |x| > 1
        let w = infinite_measure_obstruction(&neg_recip()).expect("witness");
        assert_eq!(w.bound_k, 1.0);
        assert_eq!(w.kind, WitnessKind::BoundedOnTail);
        assert_eq!(w.test_function, "f_2");

        let lin = RationalMap::linear(c(2.0, 0.0), c(0.0, 1.0));
        assert_eq!(infinite_measure_obstruction(&lin), None);

        // limit at infinity equals 1, independent of self-map status
        let r = RationalMap::new(Poly::from_real(&[1.0, 1.0]), Poly::new(alloc::vec![c(0.0, 2.0), c(1.0, 0.0)]))
            .unwrap();
        let w = infinite_measure_obstruction(&r).expect("witness");
        assert_eq!(w.bound_k, 2.0);
        assert_eq!(w.kind, WitnessKind::FiniteLimitAtInfinity);
    }

    #[test]
    fn qlp_examples() {
        let one = c(1.0, 0.0);
        let v = classify_qlp(&[(one, 1.5)], &[(one, 0.5)]).unwrap();
        assert!(v.bounded);
        assert_eq!(v.gap, 1.0);

        let v = classify_qlp(&[(one, 1.0)], &[(one, 0.5)]).unwrap();
        assert!(!v.bounded);

        // rational special case agrees with the rational classifier
        let v = classify_qlp(&[(one, 2.0), (-one, 0.0)], &[(one, 1.0)]).unwrap();
        assert!(v.bounded);
        assert!(classify_rational(&z_minus_recip()).unwrap().is_bounded());
    }

    #[test]
    fn qlp_errors() {
        let one = c(1.0, 0.0);
        assert!(matches!(
            classify_qlp(&[(one, -0.5)], &[(one, 0.0)]),
            Err(ClassifyError::NegativeExponent { .. })
        ));
        assert!(matches!(
            classify_qlp(&[], &[(one, 0.0)]),
            Err(ClassifyError::EmptyTerms)
        ));
    }

    #[test]
    fn bounded_symbol_gate() {
        assert!(BoundedSymbol::new(z_minus_recip()).is_ok());
        assert!(matches!(
            BoundedSymbol::new(neg_recip()),
            Err(ClassifyError::NotBounded { .. })
        ));
        let square = RationalMap::new(Poly::from_real(&[0.0, 0.0, 1.0]), Poly::one()).unwrap();
        assert!(matches!(
            BoundedSymbol::new(square),
            Err(ClassifyError::NotSelfMap(_))
        ));
    }

    #[test]
    fn scale_invariance() {
        let r = z_minus_recip();
        let s = RationalMap::new(
            r.num().scale(c(0.3, -2.0)),
            r.den().scale(c(0.3, -2.0)),
        )
        .unwrap();
        assert_eq!(
            classify_rational(&r).unwrap().is_bounded(),
            classify_rational(&s).unwrap().is_bounded()
        );
    }
}
