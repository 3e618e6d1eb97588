//! Deterministic grid invariants: kernel mass and reproduction, Poisson
//! semigroup, measure cross-checks, backend agreement, weight sums, and the
//! disc-transfer identities, each over fixed corpora and grids.

use hardy_core::ac;
use hardy_core::adjoint;
use hardy_core::boundedness::BoundedSymbol;
use hardy_core::hardy::{self, BoundaryFunction, QuadratureConfig, ReproduceMode};
use hardy_core::poly::{Poly, RationalMap};
use hardy_core::transfer::{self, DiscBoundaryFunction};
use hardy_core::{tol, Complex64};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn rational(num: &[f64], den: &[f64]) -> RationalMap {
    RationalMap::new(Poly::from_real(num), Poly::from_real(den)).unwrap()
}

/// φ = z - 1/z, the isometry example.
fn isometry_symbol() -> BoundedSymbol {
    BoundedSymbol::new(rational(&[-1.0, 0.0, 1.0], &[0.0, 1.0])).unwrap()
}

/// φ = 2z + 1, purely atomic with mass 1/2.
fn affine_symbol() -> BoundedSymbol {
    BoundedSymbol::new(rational(&[1.0, 2.0], &[1.0])).unwrap()
}

/// φ = 2z + i, absolutely continuous measures.
fn linear_complex_symbol() -> BoundedSymbol {
    BoundedSymbol::new(RationalMap::linear(c(2.0, 0.0), c(0.0, 1.0))).unwrap()
}

/// φ = 2z - 1/(z+i) = (2z(z+i) - 1)/(z+i), mixed-coefficient symbol whose
/// measures are purely absolutely continuous.
fn mixed_symbol() -> BoundedSymbol {
    let num = Poly::new(vec![c(-1.0, 0.0), c(0.0, 2.0), c(2.0, 0.0)]);
    let den = Poly::new(vec![c(0.0, 1.0), c(1.0, 0.0)]);
    BoundedSymbol::new(RationalMap::new(num, den).unwrap()).unwrap()
}

#[test]
fn poisson_kernels_have_unit_mass_on_grid() {
    for i in 0..5 {
        let x = -10.0 + 5.0 * i as f64;
        for j in 0..5 {
            let y = 0.1 * (100.0_f64).powf(j as f64 / 4.0); // 0.1 .. 10
            let p = BoundaryFunction::poisson(x, y);
            let mass = hardy::integrate_line(&p, &cfg()).unwrap().value;
            assert!(
                (mass.re - 1.0).abs() <= 1e-10 && mass.im.abs() <= 1e-12,
                "x={x} y={y} mass={mass}"
            );
        }
    }
}

#[test]
fn kernels_reproduce_on_grid() {
    let g2 = BoundaryFunction::g_p(2.0);
    let mut funcs = vec![g2];
    for &(re, im) in &[(0.0, 1.0), (1.0, 2.0), (-0.5, 0.7)] {
        funcs.push(BoundaryFunction::kernel(c(re, im)));
    }
    for f in &funcs {
        for i in 0..3 {
            let re = -1.0 + i as f64;
            for j in 0..3 {
                let im = 0.5 + 0.75 * j as f64;
                let z = c(re, im);
                let expect = f.eval(z);
                for mode in [ReproduceMode::Poisson, ReproduceMode::Cauchy] {
                    let got = hardy::reproduce(f, z, mode, &cfg()).unwrap();
                    assert!(
                        (got - expect).norm() <= 1e-8 * (1.0 + expect.norm()),
                        "z={z} mode={mode:?} got={got} expect={expect}"
                    );
                }
            }
        }
    }
}

#[test]
fn poisson_extension_is_a_semigroup() {
    let light = QuadratureConfig {
        base_nodes: 128,
        tol: 1e-9,
        max_doublings: 3,
    };
    let funcs = [
        BoundaryFunction::g_p(2.0),
        BoundaryFunction::kernel(c(0.0, 1.0)),
        BoundaryFunction::poisson(0.0, 1.5),
    ];
    let (y1, y2) = (0.6, 0.9);
    for f in &funcs {
        let once = hardy::poisson_extend(f, y1, &light);
        let twice = hardy::poisson_extend(&once, y2, &light);
        let direct = hardy::poisson_extend(f, y1 + y2, &light);
        for &x in &[-1.3, 0.0, 2.1] {
            let a = twice.eval_real(x);
            let b = direct.eval_real(x);
            assert!((a - b).norm() <= 1e-7, "x={x} two-step={a} direct={b}");
        }
    }
}

#[test]
fn forward_composition_with_inner_symbol_is_isometric() {
    let phi = isometry_symbol();
    for f in [
        BoundaryFunction::g_p(2.0),
        BoundaryFunction::kernel(c(0.0, 1.0)),
        BoundaryFunction::kernel(c(1.0, 1.0)),
    ] {
        let defect = adjoint::isometry_defect(&phi, &f, &cfg()).unwrap();
        assert!(defect <= 1e-6, "defect {defect:e}");
    }
}

#[test]
fn cross_method_mass_agreement() {
    // collocation masses vs the reciprocal-derivative heuristic, per atom
    let shifted = BoundedSymbol::new(rational(&[-0.75, -1.0, 1.0], &[-0.5, 1.0])).unwrap(); // (z-0.5) - 1/(z-0.5)
    let symbols = [affine_symbol(), isometry_symbol(), shifted];
    for phi in &symbols {
        for &alpha in &[-2.0, 0.0, 1.0, 3.0] {
            let fit = ac::atom_masses_linear_system(
                phi,
                alpha,
                &ac::default_probes(&ac::singular_support(phi, alpha)),
                &cfg(),
            )
            .unwrap();
            let heur = ac::atom_masses_derivative(phi, alpha).unwrap();
            assert_eq!(fit.atoms.len(), heur.atoms.len());
            for (a, b) in fit.atoms.iter().zip(heur.atoms.iter()) {
                assert!(
                    (a.location - b.location).abs() <= 1e-9,
                    "support mismatch {a:?} {b:?}"
                );
                assert!(
                    (a.mass - b.mass).abs() <= 1e-7,
                    "mass mismatch at alpha={alpha}: {a:?} vs {b:?}"
                );
            }
        }
    }
}

#[test]
fn unit_total_mass_for_unit_leading_ratio_inner_symbols() {
    // inner symbols with leading ratio 1: z - 1/z (and its shift) and z + b
    let shifted = BoundedSymbol::new(rational(&[-0.75, -1.0, 1.0], &[-0.5, 1.0])).unwrap();
    let translate = BoundedSymbol::new(rational(&[3.0, 1.0], &[1.0])).unwrap();
    for phi in [isometry_symbol(), shifted, translate] {
        for &alpha in &[-2.0, 0.0, 1.0] {
            let m = ac::build_measure(&phi, alpha, None, &cfg()).unwrap();
            let total = m.total_mass(&cfg()).unwrap();
            assert!((total - 1.0).abs() <= 1e-8, "alpha={alpha} total={total}");
        }
    }
}

#[test]
fn absolutely_continuous_measure_total_mass_is_reciprocal_slope() {
    // φ = az + b with Im b > 0: the measure is the kernel P at (α - conj b)/a
    // scaled by 1/a, so the total mass is 1/a at every level.
    let phi = linear_complex_symbol();
    for &alpha in &[-1.0, 0.0, 2.5] {
        let m = ac::build_measure(&phi, alpha, None, &cfg()).unwrap();
        assert!(m.atoms.is_empty());
        assert!(!m.density_is_zero());
        let total = m.total_mass(&cfg()).unwrap();
        assert!((total - 0.5).abs() <= 1e-9, "alpha={alpha} total={total}");
    }
}

#[test]
fn poisson_intertwining_on_grid() {
    // A_φ P_z = P_{φ(z)} pointwise over a z × α grid
    for phi in [affine_symbol(), isometry_symbol()] {
        let mut worst = 0.0_f64;
        for i in 0..3 {
            let re = -1.0 + i as f64;
            for j in 0..3 {
                let im = [0.5, 1.0, 2.0][j];
                let z = c(re, im);
                let pz = BoundaryFunction::poisson(z.re, z.im);
                let w = phi.map().eval(z).unwrap();
                for k in 0..5 {
                    let alpha = -3.0 + 1.5 * k as f64;
                    let got = ac::aleksandrov_apply(&phi, &pz, alpha, &cfg()).unwrap();
                    let expect = w.im / (core::f64::consts::PI * ((w.re - alpha).powi(2) + w.im * w.im));
                    worst = worst.max((got - c(expect, 0.0)).norm());
                }
            }
        }
        assert!(worst <= 1e-6, "worst intertwining error {worst:e}");
    }
}

#[test]
fn density_is_nonnegative_everywhere_sampled() {
    let symbols = [linear_complex_symbol(), mixed_symbol()];
    for phi in &symbols {
        for &alpha in &[-2.0, 0.0, 1.5] {
            let d = ac::ac_density(phi, alpha);
            for k in 0..10_000 {
                let theta = -core::f64::consts::FRAC_PI_2
                    + core::f64::consts::PI * (k as f64 + 0.5) / 10_000.0;
                let t = theta.tan();
                let v = d.eval_real(t);
                assert!(v.re >= -1e-12, "negative density {v} at t={t}");
                assert!(v.im.abs() <= 1e-15);
            }
        }
    }
}

#[test]
fn fitted_point_mass_at_infinity_stays_zero() {
    let symbols = [
        affine_symbol(),
        isometry_symbol(),
        linear_complex_symbol(),
        mixed_symbol(),
    ];
    for phi in &symbols {
        for &alpha in &[-1.0, 0.0, 2.0] {
            let cc = ac::c_coefficient(phi, alpha, &cfg()).unwrap();
            assert!(
                cc.fitted.abs() <= tol::C_COEFF_DIAGNOSTIC_MAX,
                "fitted c {:e} at alpha={alpha}",
                cc.fitted
            );
        }
    }
}

#[test]
fn interior_backend_agreement_on_grid() {
    let symbols = [linear_complex_symbol(), isometry_symbol(), mixed_symbol()];
    let funcs = [
        BoundaryFunction::g_p(2.0),
        BoundaryFunction::kernel(c(0.0, 2.0)),
    ];
    for phi in &symbols {
        for f in &funcs {
            for i in 0..3 {
                let re = -1.0 + i as f64;
                for j in 0..3 {
                    let im = 0.7 + 0.6 * j as f64;
                    let z = c(re, im);
                    let a = adjoint::adjoint_residue(phi, f, z).unwrap().value;
                    let b = adjoint::adjoint_integral(phi, f, z, &cfg()).unwrap().value;
                    assert!(
                        (a - b).norm() <= 1e-6 * (1.0 + a.norm()),
                        "z={z} residue={a} integral={b}"
                    );
                }
            }
        }
    }
}

#[test]
fn boundary_backend_agreement_tightens_with_the_lift() {
    // |integral at α+iε - ac at α| for a purely atomic symbol and smooth f,
    // monotone in ε and within 5e-4 at ε = 1e-4
    let phi = isometry_symbol();
    let g2 = BoundaryFunction::g_p(2.0);
    let alpha = 0.5;
    let at_line = adjoint::adjoint_boundary_ac(&phi, &g2, alpha, None, &cfg())
        .unwrap()
        .value;
    let mut gaps = Vec::new();
    for &eps in &[1e-2, 1e-3, 1e-4] {
        let lifted = adjoint::adjoint_integral(&phi, &g2, c(alpha, eps), &cfg())
            .unwrap()
            .value;
        gaps.push((lifted - at_line).norm());
    }
    assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "gaps not monotone: {gaps:?}");
    assert!(gaps[2] <= 5e-4, "gap at 1e-4 is {:e}", gaps[2]);
}

#[test]
fn residue_weights_sum_to_leading_reciprocal() {
    // real-coefficient symbols with φ(∞) = ∞: Σ weights = b_m/a_n, which is 1
    // exactly in the unit-leading-ratio (inner, mass-1) case
    let phi = isometry_symbol();
    let g2 = BoundaryFunction::g_p(2.0);
    for &(re, im) in &[(0.0, 1.0), (1.5, 0.4), (-2.0, 2.5), (0.3, 3.0)] {
        let r = adjoint::adjoint_residue(&phi, &g2, c(re, im)).unwrap();
        let sum: Complex64 = r.weights.iter().sum();
        assert!((sum - c(1.0, 0.0)).norm() <= 1e-10, "weight sum {sum} at {re}+{im}i");
    }
    // linear symbol: the single weight is 1/a
    let lin = linear_complex_symbol();
    let r = adjoint::adjoint_residue(&lin, &g2, c(0.0, 1.0)).unwrap();
    assert!((r.weights[0] - c(0.5, 0.0)).norm() <= 1e-12);
}

#[test]
fn backends_agree_arbitrarily_close_to_the_critical_value() {
    // Approaching the degenerate point, the preimages collide: the residue
    // backend crosses from the simple-pole formula into the clustered contour
    // rule, and the defining integral must agree throughout.
    let phi = isometry_symbol();
    let k3i = BoundaryFunction::kernel(c(0.0, 3.0));
    for &delta in &[1e-3, 1e-5, 1e-8, 1e-10, 0.0] {
        let z = c(0.0, 2.0 + delta);
        let a = adjoint::adjoint_residue(&phi, &k3i, z).unwrap().value;
        let b = adjoint::adjoint_integral(&phi, &k3i, z, &cfg()).unwrap().value;
        assert!(
            (a - b).norm() <= 1e-6 * (1.0 + a.norm()),
            "delta={delta:e} residue={a} integral={b}"
        );
    }
}

#[test]
fn degenerate_point_is_the_limit_of_nearby_values() {
    let phi = isometry_symbol();
    let g2 = BoundaryFunction::g_p(2.0);
    let at = adjoint::adjoint_residue(&phi, &g2, c(0.0, 2.0)).unwrap().value;
    let mut last = f64::INFINITY;
    for &delta in &[1e-2, 1e-3, 1e-4] {
        let near = adjoint::adjoint_residue(&phi, &g2, c(0.0, 2.0 + delta))
            .unwrap()
            .value;
        let gap = (near - at).norm();
        // Lipschitz-style decay toward the degenerate point
        assert!(gap <= 10.0 * delta, "delta={delta:e} gap={gap:e}");
        assert!(gap < last);
        last = gap;
    }
}

#[test]
fn transfer_unitarity_on_basis_slice() {
    for n in 0..4 {
        let g = DiscBoundaryFunction::monomial(n);
        let disc = g.h2_norm(tol::CIRCLE_NODES);
        let plane = hardy::h2_norm(&transfer::v_map(&g), &cfg()).unwrap();
        assert!((disc - 1.0).abs() <= 1e-12);
        assert!((plane - disc).abs() <= 1e-7, "n={n} plane={plane}");
    }
}

#[test]
fn transfer_two_path_equivalence_on_corpus() {
    let symbols = [
        linear_complex_symbol(),
        isometry_symbol(),
        mixed_symbol(),
    ];
    let g = DiscBoundaryFunction::new(|z| z * z + Complex64::new(0.3, -0.1), vec![]);
    let mut points = Vec::new();
    for k in 0..24 {
        let r = 0.05 + 0.83 * (k as f64) / 23.0;
        points.push(Complex64::from_polar(r, 0.9 * k as f64));
    }
    for phi in &symbols {
        let gap = transfer::two_path_equivalence_gap(phi.map(), &g, &points).unwrap();
        assert!(gap <= 1e-7, "two-path gap {gap:e}");
    }
}

#[test]
fn unbounded_symbol_weight_diverges() {
    let neg_recip = rational(&[-1.0], &[0.0, 1.0]);
    let w = transfer::weight_along_minus_one(&neg_recip, &[1e-1, 1e-2, 1e-3, 1e-4, 1e-5]);
    for pair in w.windows(2) {
        assert!(pair[1] > 5.0 * pair[0], "no divergence: {w:?}");
    }
}

#[test]
fn values_are_shareable_across_threads() {
    fn assert_send_sync<T: Send + Sync>() {}
    assert_send_sync::<RationalMap>();
    assert_send_sync::<Poly>();
    assert_send_sync::<BoundedSymbol>();
    assert_send_sync::<BoundaryFunction>();
    assert_send_sync::<DiscBoundaryFunction>();
    assert_send_sync::<hardy_core::ACMeasure>();
    assert_send_sync::<hardy_core::AdjointResult>();

    // and evaluation really is safe to run concurrently
    let phi = isometry_symbol();
    let g2 = BoundaryFunction::g_p(2.0);
    let values: Vec<Complex64> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..4)
            .map(|k| {
                let (phi, g2) = (&phi, &g2);
                scope.spawn(move || {
                    adjoint::adjoint_residue(phi, g2, c(0.1 * k as f64, 1.0))
                        .unwrap()
                        .value
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    for (k, v) in values.iter().enumerate() {
        let direct = adjoint::adjoint_residue(&phi, &g2, c(0.1 * k as f64, 1.0))
            .unwrap()
            .value;
        assert_eq!(*v, direct);
    }
}

#[test]
fn classifier_agrees_with_exponent_rule_on_corpus() {
    let one = c(1.0, 0.0);
    let cases: [(BoundedSymbol, f64, f64); 3] = [
        (affine_symbol(), 1.0, 0.0),
        (isometry_symbol(), 2.0, 1.0),
        (mixed_symbol(), 2.0, 1.0),
    ];
    for (phi, a1, b1) in cases {
        let qlp = hardy_core::boundedness::classify_qlp(&[(one, a1)], &[(one, b1)]).unwrap();
        assert_eq!(qlp.bounded, phi.classification().bounded);
    }
    // and on the unbounded side
    let neg_recip = rational(&[-1.0], &[0.0, 1.0]);
    let cls = hardy_core::boundedness::classify_rational(&neg_recip).unwrap();
    let qlp = hardy_core::boundedness::classify_qlp(&[(one, 0.0)], &[(one, 1.0)]).unwrap();
    assert_eq!(cls.is_bounded(), qlp.bounded);
}
