//! Pinned tolerances and numerical thresholds.
//!
//! Every threshold the crate relies on is defined here rather than inline, so
//! that the relationship between them stays auditable (e.g. the root merge
//! radius must sit below the adjoint collision threshold, which must sit below
//! any evaluation height used for boundary lifts).

/// Relative radius below which two polynomial roots are merged into a single
/// root of higher multiplicity: `|r1 - r2| <= MULTIPLICITY_MERGE_REL * (1 + |r|)`.
/// The residue backend relies on this to detect degenerate preimages.
pub const MULTIPLICITY_MERGE_REL: f64 = 1e-7;

/// Relative backward-error bound the Newton polish must reach: for every
/// reported root `r` of `p`, `|p(r)| <= POLISH_RESIDUAL_REL * scale(r)` where
/// `scale(r) = Σ |c_k| |r|^k`.
pub const POLISH_RESIDUAL_REL: f64 = 1e-9;

/// Common roots of numerator and denominator closer than this are cancelled
/// when a rational map is constructed, recording a warning. The theory assumes
/// the map is written in lowest terms; the numerics enforce it.
pub const APPROX_GCD_TOL: f64 = 1e-9;

/// Half-plane membership band for roots: `r` counts as real when
/// `|Im r| <= IM_THRESHOLD_REL * (1 + |r|)`, upper when `Im r` exceeds it.
/// Roots just above the band (within `AMBIGUOUS_BAND_FACTOR` of it) keep a
/// warning attached because membership could be a rounding artefact.
pub const IM_THRESHOLD_REL: f64 = 1e-9;

/// See [`IM_THRESHOLD_REL`].
pub const AMBIGUOUS_BAND_FACTOR: f64 = 0.5;

/// Pole proximity for rational evaluation: `|den(z)| < POLE_TOL_REL * (1 + |num(z)|)`
/// raises an error instead of silently overflowing.
pub const POLE_TOL_REL: f64 = 1e-14;

/// Coefficients with `|Im c| <= REAL_COEFF_TOL * scale` in every position mark
/// a real-coefficient symbol, enabling the fast self-map path (the boundary
/// imaginary part vanishes identically).
pub const REAL_COEFF_TOL: f64 = 1e-14;

/// Boundary nonnegativity slack for the self-map check: `Im(num(x) conj(den(x)))`
/// may dip to `-SELFMAP_TOL * scale(x)` before the map is rejected.
pub const SELFMAP_TOL: f64 = 1e-9;

/// Interior grid rejection threshold: any sampled `Im φ(z) < -SELFMAP_INTERIOR_TOL`
/// on the standard grid disqualifies the symbol.
pub const SELFMAP_INTERIOR_TOL: f64 = 1e-9;

/// Condition (ii) of the necessary coefficient conditions accepts
/// `|Im(a_n/b_m)| <= LEADING_RATIO_IM_REL * |a_n/b_m|` (JSON round-trips
/// introduce coefficient noise at this level).
pub const LEADING_RATIO_IM_REL: f64 = 1e-10;

/// Values of `φ(ζ)` with `|Im φ(ζ)| <= DENSITY_REAL_BAND_REL * (1 + |φ(ζ)|)`
/// count as real for the density case split of the Clark measure.
pub const DENSITY_REAL_BAND_REL: f64 = 1e-10;

/// An atom location `x` for level `α` must satisfy `|φ(x) - α| <= ATOM_TOL * (1 + |α|)`.
pub const ATOM_TOL: f64 = 1e-8;

/// Probe collocation matrices with condition number above this are rejected
/// with advice to re-select probes.
pub const PROBE_CONDITION_MAX: f64 = 1e10;

/// The fitted point-mass-at-infinity coefficient is reported as a diagnostic
/// and expected below this for bounded rational symbols.
pub const C_COEFF_DIAGNOSTIC_MAX: f64 = 1e-8;

/// A fitted coefficient above this is a consistency failure (the theory gives
/// exactly zero whenever `φ(∞) = ∞`).
pub const C_COEFF_FAILURE: f64 = 1e-6;

/// Preimages of an adjoint evaluation point closer than
/// `CRITICAL_COLLISION_REL * (1 + |t|)` are treated as one degenerate cluster
/// and evaluated by the full residue rule instead of the simple-pole formula.
/// The contour evaluation is exact for clusters of nearby simple poles, while
/// the simple-pole weights `1/ψ'(t)` lose accuracy as preimages approach each
/// other, so the threshold sits well above the root merge radius.
pub const CRITICAL_COLLISION_REL: f64 = 1e-4;

/// Vertical lift used when an interior adjoint backend must produce boundary
/// values for a duality pairing: the adjoint is evaluated at
/// `t + i*max(DUALITY_EPS_LIFT, 100 * IM_THRESHOLD_REL * (1 + |t|))`.
/// The floor keeps the O(ε) lift bias well below the 1e-6 duality budget; the
/// relative part keeps lifted preimages clear of the half-plane membership
/// band, which widens with the root magnitude.
pub const DUALITY_EPS_LIFT: f64 = 3e-7;

/// Quadrature defaults: initial Gauss–Legendre node count after the tangent
/// substitution, relative refinement target, and doubling cap. All acceptance
/// tolerances are reached end-to-end at these settings.
pub const DEFAULT_BASE_NODES: usize = 256;
/// See [`DEFAULT_BASE_NODES`].
pub const DEFAULT_QUAD_TOL: f64 = 1e-10;
/// See [`DEFAULT_BASE_NODES`].
pub const DEFAULT_MAX_DOUBLINGS: usize = 6;

/// Nodes per quadrature panel; refinement halves panels rather than raising
/// the rule order.
pub const NODES_PER_PANEL: usize = 32;

/// Uniform-angle node count for circle quadrature on the disc side.
pub const CIRCLE_NODES: usize = 512;

/// `H²` norms discard the imaginary residue of the quadrature after verifying
/// it is below this (relative to the real part).
pub const NORM_IMAG_RESIDUE: f64 = 1e-10;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    #[allow(clippy::assertions_on_constants)]
    fn threshold_ordering() {
        // merge radius < collision threshold: roots fused at the polynomial
        // level are always inside what the adjoint treats as one cluster.
        assert!(MULTIPLICITY_MERGE_REL < CRITICAL_COLLISION_REL);
        assert!(IM_THRESHOLD_REL < CRITICAL_COLLISION_REL);
        assert!(C_COEFF_DIAGNOSTIC_MAX < C_COEFF_FAILURE);
        assert!(POLE_TOL_REL < APPROX_GCD_TOL);
    }
}
