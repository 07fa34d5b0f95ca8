//! Invariants checked on randomized inputs.

use std::collections::BTreeMap;

use proptest::prelude::*;
use wcsg::cocycles::{cocycle_from_g, cocycle_law_residual, Semicocycle};
use wcsg::flows::{make_catalog_semiflow, semiflow_law_residual, Semiflow};
use wcsg::holo::{Domain, FnKind, HoloFn, QuadPolicy};
use wcsg::semigroup::{continuity_probe, generator_formula_apply, theoretical_bound, WcSemigroup};
use wcsg::spaces::{SeminormIndex, SpaceSpec, Weight};
use wcsg::Complex;

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

fn flow(name: &str) -> Semiflow {
    make_catalog_semiflow(name, &BTreeMap::new()).unwrap()
}

fn dilation(c_re: f64, c_im: f64) -> Semiflow {
    let params = BTreeMap::from([("c".to_string(), c_re), ("c_im".to_string(), c_im)]);
    make_catalog_semiflow("dilation", &params).unwrap()
}

/// Points of the disc of radius `r_max`, from polar coordinates.
fn disc_point(r_max: f64) -> impl Strategy<Value = Complex> {
    (0.0..r_max, 0.0..std::f64::consts::TAU).prop_map(|(r, th)| Complex::from_polar(r, th))
}

fn spaces() -> Vec<SpaceSpec> {
    vec![
        SpaceSpec::hardy(1.0).unwrap(),
        SpaceSpec::hardy(2.0).unwrap(),
        SpaceSpec::bergman(0.0, 2.0).unwrap(),
        SpaceSpec::bergman(0.5, 4.0).unwrap(),
        SpaceSpec::h_infinity(),
        SpaceSpec::hv(Weight::Standard { alpha: 1.0 }).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn dilation_semiflow_law(c_re in 0.0..3.0f64, c_im in -3.0..3.0f64, z in disc_point(0.99),
                             t in 0.0..2.0f64, s in 0.0..2.0f64) {
        let phi = dilation(c_re, c_im);
        let r = semiflow_law_residual(&phi, &[t, s], &[z]).unwrap();
        prop_assert!(r < 1e-13, "residual {r}");
    }

    #[test]
    fn integral_cocycle_law(z in disc_point(0.95), t in 0.0..1.5f64, s in 0.0..1.5f64, which in 0usize..3) {
        let phi = flow(["dilation", "attracting", "rotation"][which]);
        let g = HoloFn::new("z^2-1", Domain::Plane, FnKind::ClosedForm, |z| z * z - 1.0);
        let m = cocycle_from_g(g, &phi, &QuadPolicy::default());
        let r = cocycle_law_residual(&m, &phi, &[t, s], &[z]).unwrap();
        prop_assert!(r < 1e-10, "residual {r}");
    }

    #[test]
    fn norms_are_homogeneous(a in disc_point(0.8), lam_re in -3.0..3.0f64, lam_im in -3.0..3.0f64, k in 0usize..6) {
        let sp = &spaces()[k];
        let f = HoloFn::kernel(a);
        let lam = c(lam_re, lam_im);
        let lhs = sp.norm(&f.scale(lam)).unwrap();
        let rhs = lam.norm() * sp.norm(&f).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-8 * rhs.max(1e-12), "{lhs} vs {rhs}");
    }

    #[test]
    fn seminorms_increase_to_the_norm(a in disc_point(0.8), s1 in 0.05..0.6f64, s2 in 0.6..0.999f64, k in 0usize..6) {
        let sp = &spaces()[k];
        let f = HoloFn::kernel(a).add(&HoloFn::identity());
        let p1 = sp.co_seminorm(&f, SeminormIndex::new(s1).unwrap()).unwrap();
        let p2 = sp.co_seminorm(&f, SeminormIndex::new(s2).unwrap()).unwrap();
        let n = sp.norm(&f).unwrap();
        prop_assert!(p1 <= p2 * (1.0 + 1e-9) && p2 <= n * (1.0 + 1e-7), "{p1} {p2} {n}");
    }

    #[test]
    fn generator_formula_is_linear(a in disc_point(0.7), b_re in -2.0..2.0f64, b_im in -2.0..2.0f64,
                                   z in disc_point(0.9)) {
        let g_flow = HoloFn::new("1-z", Domain::Plane, FnKind::ClosedForm, |z| 1.0 - z);
        let g_mult = HoloFn::new("(z-1)/2", Domain::Plane, FnKind::ClosedForm, |z| (z - 1.0) / 2.0);
        let pol = QuadPolicy::default();
        let (f1, f2) = (HoloFn::kernel(a), HoloFn::exp_scaled(c(0.5, 0.25)));
        let beta = c(b_re, b_im);
        let combo = f1.add(&f2.scale(beta));
        let lhs = generator_formula_apply(&g_flow, &g_mult, &combo, &pol).eval(z).unwrap();
        let rhs = generator_formula_apply(&g_flow, &g_mult, &f1, &pol).eval(z).unwrap()
            + beta * generator_formula_apply(&g_flow, &g_mult, &f2, &pol).eval(z).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-10 * lhs.norm().max(1.0), "{lhs} vs {rhs}");
    }

    #[test]
    fn multiplier_bound(a in disc_point(0.8), t in 0.05..1.5f64, k in 0usize..6) {
        // ‖m_t f‖ ≤ ‖m_t‖_∞‖f‖ with m_t = e^{t(z+1)/2}, whose sup on the disc is e^t.
        let sp = &spaces()[k];
        let m = Semicocycle::multiplication(HoloFn::new("(z+1)/2", Domain::Plane, FnKind::ClosedForm, |z| (z + 1.0) / 2.0));
        let sg = WcSemigroup::new(flow("identity"), m, sp.clone()).unwrap();
        let f = HoloFn::kernel(a);
        let lhs = sp.norm(&sg.apply(t, &f).unwrap()).unwrap();
        let rhs = t.exp() * sp.norm(&f).unwrap();
        prop_assert!(lhs <= rhs * (1.0 + 1e-6), "{lhs} > {rhs}");
    }

    #[test]
    fn split_estimate(a in disc_point(0.8), t in 0.05..1.5f64, k in 0usize..6) {
        // ‖C(t)f‖ ≤ ‖C_{m,id}(t)‖‖C_{1,φ}(t)‖‖f‖, the product the bound formula evaluates.
        let sp = &spaces()[k];
        let phi = flow("attracting");
        let g = HoloFn::new("(z-1)/2", Domain::Plane, FnKind::ClosedForm, |z| (z - 1.0) / 2.0);
        let sg = WcSemigroup::new(phi.clone(), cocycle_from_g(g, &phi, &QuadPolicy::default()), sp.clone()).unwrap();
        let f = HoloFn::kernel(a);
        let bound = theoretical_bound(&sg, t).unwrap().theoretical;
        let lhs = sp.norm(&sg.apply(t, &f).unwrap()).unwrap();
        let rhs = bound * sp.norm(&f).unwrap();
        prop_assert!(lhs <= rhs * (1.0 + 1e-6), "{lhs} > {rhs}");
    }
}

#[test]
fn norm_convergence_implies_gamma_convergence() {
    let policy = QuadPolicy::default();
    let ts = [1e-2, 1e-4, 1e-5];
    let radii = [0.5, 0.9];
    let mut seen_norm_convergent = 0;
    for name in ["dilation", "attracting", "rotation"] {
        let phi = flow(name);
        for sp in [SpaceSpec::hardy(2.0).unwrap(), SpaceSpec::bergman(0.0, 2.0).unwrap(), SpaceSpec::h_infinity()] {
            for m in [Semicocycle::one(), Semicocycle::derivative_of(&phi, &policy)] {
                let sg = WcSemigroup::new(phi.clone(), m, sp.clone()).unwrap();
                for f in [HoloFn::monomial(2), HoloFn::singular_inner()] {
                    let Ok(rep) = continuity_probe(&sg, &f, &ts, &radii) else {
                        continue;
                    };
                    if rep.norm_convergent {
                        seen_norm_convergent += 1;
                        assert!(rep.gamma_convergent, "{} f={}", sg.label(), f.label());
                    }
                }
            }
        }
    }
    assert!(seen_norm_convergent > 0);
}
