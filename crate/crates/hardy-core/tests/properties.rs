//! Randomized property tests: algebraic identities of the polynomial layer,
//! classifier consistency over generated self-maps, and linearity of the
//! adjoint backends.

use hardy_core::adjoint;
use hardy_core::boundedness::{self, BoundedSymbol, Classification};
use hardy_core::hardy::{BoundaryFunction, QuadratureConfig};
use hardy_core::poly::{HalfPlaneFilter, Poly, RationalMap};
use hardy_core::{tol, Complex64};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

prop_compose! {
    fn arb_complex(bound: f64)(re in -1.0..1.0f64, im in -1.0..1.0f64) -> Complex64 {
        Complex64::new(bound * re, bound * im)
    }
}

prop_compose! {
    fn arb_poly(max_degree: usize)
        (degree in 1..=max_degree)
        (coeffs in proptest::collection::vec(arb_complex(3.0), degree + 1), degree in Just(degree))
        -> Poly
    {
        let mut coeffs = coeffs;
        // keep the polynomial genuinely of the requested degree
        if coeffs[degree].norm() < 0.2 {
            coeffs[degree] += Complex64::new(0.5, 0.25);
        }
        Poly::new(coeffs)
    }
}

prop_compose! {
    fn arb_rational()(num in arb_poly(4), den in arb_poly(3)) -> RationalMap {
        RationalMap::new(num, den).expect("nonzero denominator")
    }
}

/// Herglotz-style sums `a z + b + Σ c_k/(p_k - z)` with `a > 0`, `Im b >= 0`,
/// `c_k > 0`, `p_k` real are rational self-maps of the upper half-plane with
/// numerator degree one above the denominator degree.
fn pick_map(a: f64, b: Complex64, terms: &[(f64, f64)]) -> RationalMap {
    let mut num = Poly::new(vec![b, Complex64::new(a, 0.0)]);
    let mut den = Poly::one();
    for &(ck, pk) in terms {
        // r -> r + c/(p - z): num/den + c/(p - z)
        let pole = Poly::new(vec![Complex64::new(pk, 0.0), Complex64::new(-1.0, 0.0)]);
        num = num.mul(&pole).add(&den.scale(Complex64::new(ck, 0.0)));
        den = den.mul(&pole);
    }
    RationalMap::new(num, den).expect("nonzero denominator")
}

proptest! {
    #[test]
    fn roots_satisfy_polish_tolerance(p in arb_poly(8)) {
        let rs = p.roots().unwrap();
        prop_assert_eq!(rs.total_multiplicity(), p.degree());
        for &(r, _) in &rs.roots {
            let rel = p.eval(r).norm() / p.magnitude_scale(r).max(1e-300);
            prop_assert!(rel <= tol::POLISH_RESIDUAL_REL, "relative residual {:e} at {}", rel, r);
        }
    }

    #[test]
    fn conj_reflect_is_involution(r in arb_rational()) {
        let back = r.conj_reflect().conj_reflect();
        prop_assert_eq!(back.num().coeffs(), r.num().coeffs());
        prop_assert_eq!(back.den().coeffs(), r.den().coeffs());
    }

    #[test]
    fn conj_reflect_matches_pointwise_conjugation(r in arb_rational(), s in arb_complex(4.0)) {
        let refl = r.conj_reflect();
        let direct = r.eval(s.conj());
        let reflected = refl.eval(s);
        if let (Ok(d), Ok(v)) = (direct, reflected) {
            prop_assert!((v - d.conj()).norm() <= 1e-12 * (1.0 + d.norm()));
        }
    }

    #[test]
    fn preimages_recover_the_sample_point(r in arb_rational(), t0 in arb_complex(3.0)) {
        let w = match r.eval(t0) {
            Ok(w) => w,
            Err(_) => return Ok(()), // sampled a pole
        };
        match r.derivative_eval(t0) {
            Ok(d) => prop_assume!(d.norm() > 1e-3),
            Err(_) => return Ok(()),
        }
        match r.preimages(w, HalfPlaneFilter::All) {
            Ok(rs) => {
                prop_assert_eq!(
                    rs.total_multiplicity(),
                    r.num().sub(&r.den().scale(w)).degree()
                );
                let hit = rs
                    .roots
                    .iter()
                    .map(|&(t, _)| (t - t0).norm())
                    .fold(f64::INFINITY, f64::min);
                prop_assert!(hit <= 1e-8 * (1.0 + t0.norm()), "closest preimage off by {:e}", hit);
            }
            Err(_) => {
                // the preimage equation degenerated (constant); nothing to check
            }
        }
    }

    #[test]
    fn generated_self_maps_classify_bounded(
        a in 0.2..3.0f64,
        b_re in -2.0..2.0f64,
        b_im in 0.0..2.0f64,
        terms in proptest::collection::vec((0.1..2.0f64, -3.0..3.0f64), 0..3),
    ) {
        let r = pick_map(a, c(b_re, b_im), &terms);
        let cls = boundedness::classify_rational(&r).unwrap();
        prop_assert!(cls.is_bounded(), "Herglotz sum must classify bounded: {:?}", cls);
        // boundedness implies all three necessary coefficient conditions
        let nc = boundedness::necessary_conditions(&r);
        prop_assert!(nc.all_pass(), "{:?}", nc);
        // bounded symbols have no infinite-measure obstruction
        prop_assert!(boundedness::infinite_measure_obstruction(&r).is_none());
    }

    #[test]
    fn obstruction_witness_iff_finite_limit(num in arb_poly(3), den in arb_poly(3)) {
        let r = RationalMap::new(num, den).expect("nonzero denominator");
        let finite_limit = r.num_degree() <= r.den_degree();
        match boundedness::infinite_measure_obstruction(&r) {
            Some(w) => {
                prop_assert!(finite_limit);
                prop_assert!(w.bound_k >= 1.0);
            }
            None => prop_assert!(!finite_limit),
        }
    }

    #[test]
    fn classification_is_scale_invariant(scale in arb_complex(3.0)) {
        prop_assume!(scale.norm() > 0.05);
        let r = RationalMap::new(
            Poly::from_real(&[-1.0, 0.0, 1.0]),
            Poly::from_real(&[0.0, 1.0]),
        )
        .unwrap();
        let scaled = RationalMap::new(r.num().scale(scale), r.den().scale(scale)).unwrap();
        let a = boundedness::classify_rational(&r).unwrap();
        let b = boundedness::classify_rational(&scaled).unwrap();
        prop_assert_eq!(a.is_bounded(), b.is_bounded());
        match (a, b) {
            (Classification::Classified(x), Classification::Classified(y)) => {
                prop_assert_eq!(x.n, y.n);
                prop_assert_eq!(x.m, y.m);
            }
            _ => prop_assert!(false, "both classify"),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn inner_product_conjugate_symmetry(
        w_re in -2.0..2.0f64,
        w_im in 0.3..2.5f64,
        pick in 0..3usize,
    ) {
        let cfg = QuadratureConfig::default();
        let f = match pick {
            0 => BoundaryFunction::g_p(2.0),
            1 => BoundaryFunction::kernel(c(-0.5, 1.5)),
            _ => BoundaryFunction::poisson(0.5, 1.0),
        };
        let g = BoundaryFunction::kernel(c(w_re, w_im));
        let fg = hardy_core::hardy::inner_product(&f, &g, &cfg).unwrap().value;
        let gf = hardy_core::hardy::inner_product(&g, &f, &cfg).unwrap().value;
        prop_assert!((fg - gf.conj()).norm() <= 1e-10 * (1.0 + fg.norm()));
        // positivity of the induced norm
        let ff = hardy_core::hardy::inner_product(&f, &f, &cfg).unwrap().value;
        prop_assert!(ff.re > 0.0);
        prop_assert!(ff.im.abs() <= 1e-10 * (1.0 + ff.re));
    }

    #[test]
    fn adjoint_backends_are_linear(
        a in arb_complex(2.0),
        b in arb_complex(2.0),
        w_im in 1.2..3.0f64,
    ) {
        let cfg = QuadratureConfig::default();
        let phi = BoundedSymbol::new(
            RationalMap::new(Poly::from_real(&[-1.0, 0.0, 1.0]), Poly::from_real(&[0.0, 1.0]))
                .unwrap(),
        )
        .unwrap();
        let f = BoundaryFunction::g_p(2.0);
        let g = BoundaryFunction::kernel(c(0.0, w_im));
        let combo = BoundaryFunction::linear_combo(a, &f, b, &g);
        let z = c(0.7, 1.1);

        let r_f = adjoint::adjoint_residue(&phi, &f, z).unwrap().value;
        let r_g = adjoint::adjoint_residue(&phi, &g, z).unwrap().value;
        let r_c = adjoint::adjoint_residue(&phi, &combo, z).unwrap().value;
        prop_assert!((r_c - (a * r_f + b * r_g)).norm() <= 1e-10 * (1.0 + r_c.norm()));

        let i_f = adjoint::adjoint_integral(&phi, &f, z, &cfg).unwrap().value;
        let i_g = adjoint::adjoint_integral(&phi, &g, z, &cfg).unwrap().value;
        let i_c = adjoint::adjoint_integral(&phi, &combo, z, &cfg).unwrap().value;
        prop_assert!((i_c - (a * i_f + b * i_g)).norm() <= 1e-10 * (1.0 + i_c.norm()));

        let alpha = 0.4;
        let a_f = adjoint::adjoint_boundary_ac(&phi, &f, alpha, None, &cfg).unwrap().value;
        let a_g = adjoint::adjoint_boundary_ac(&phi, &g, alpha, None, &cfg).unwrap().value;
        let a_c = adjoint::adjoint_boundary_ac(&phi, &combo, alpha, None, &cfg).unwrap().value;
        prop_assert!((a_c - (a * a_f + b * a_g)).norm() <= 1e-10 * (1.0 + a_c.norm()));
    }

    #[test]
    fn duality_holds_on_generated_self_maps(
        a in 0.5..2.0f64,
        b_re in -1.0..1.0f64,
        b_im in 0.0..1.0f64,
        terms in proptest::collection::vec((0.2..1.5f64, -2.0..2.0f64), 0..2),
    ) {
        let cfg = QuadratureConfig::default();
        let phi = BoundedSymbol::new(pick_map(a, c(b_re, b_im), &terms)).unwrap();
        let f = BoundaryFunction::kernel(c(0.0, 1.0));
        let g = BoundaryFunction::g_p(2.0);
        let gap = adjoint::duality_gap(&phi, &f, &g, &cfg, adjoint::AdjointBackend::Residue).unwrap();
        prop_assert!(gap <= 1e-5, "duality gap {:e} for a Herglotz-sum symbol", gap);
    }

    #[test]
    fn qlp_agrees_with_rational_classifier_on_polynomial_quotients(
        n in 1..4usize,
        m in 0..3usize,
    ) {
        // exponent data of a monomial quotient z^n / z^m
        let one = c(1.0, 0.0);
        let v = boundedness::classify_qlp(&[(one, n as f64)], &[(one, m as f64)]).unwrap();
        prop_assert_eq!(v.bounded, n as f64 - m as f64 >= 1.0);
    }
}
