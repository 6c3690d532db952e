use dunkl_hankel::bessel::{psi, SeriesEvalSpec};
use dunkl_hankel::poly::Polynomial;
use dunkl_hankel::quadrature::{EndpointRule, QuadratureSpec};
use dunkl_hankel::special::gamma;
use dunkl_hankel::transform::{
    adjointness_check, hankel_gaussian_oracle, hankel_inverse_im, hankel_inverse_oracle, hankel_nonsym, hankel_sym,
    inversion_check_im_re, inversion_check_re_im, master_check, master_check_sym, master_scaling,
    nonsym_from_sym_check, operator_lambda_grid, operator_test_functions, operator_transform_check, plancherel_check,
    transform_curve, GaussianPolynomial,
};
use dunkl_hankel::Error;
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

fn q() -> QuadratureSpec {
    QuadratureSpec::default()
}

/// Composite Simpson on `[-10, 10]`, independent of the library quadrature.
/// Only for `k` with `2k` a nonnegative integer, where the weight is smooth.
fn simpson_transform(p: &[f64], lambda: f64, k: f64) -> f64 {
    let n = 20_000;
    let h = 20.0 / n as f64;
    let spec = SeriesEvalSpec::default();
    let g = |x: f64| {
        let poly: f64 = p.iter().rev().fold(0.0, |acc, a| acc * x + a);
        let w = x.abs().powf(2.0 * k);
        psi(c(x), c(lambda), c(k), &spec).unwrap().value.re * poly * (-x * x).exp() * w
    };
    let mut s = g(-10.0) + g(10.0);
    for i in 1..n {
        let x = -10.0 + i as f64 * h;
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * g(x);
    }
    s * h / 3.0 / gamma(c(k + 0.5)).re
}

#[test]
fn gaussian_transforms_match_independent_quadrature() {
    for (p, k) in [(vec![1.0], 0.0), (vec![1.0], 1.0), (vec![0.5, -1.0, 2.0], 0.5), (vec![0.0, 0.0, 0.0, 1.0], 1.0)] {
        let gp = GaussianPolynomial::decaying(Polynomial::from_real(&p), c(k));
        let oracle = hankel_gaussian_oracle(&gp).unwrap();
        for &l in &[-1.2, 0.0, 0.7, 1.5] {
            let want = simpson_transform(&p, l, k);
            let err = (oracle.eval(c(l)) - c(want)).norm();
            assert!(err < 1e-9 * want.abs().max(1.0), "p = {p:?}, k = {k}, λ = {l}");
        }
    }
}

#[test]
fn constant_gaussian_is_self_dual() {
    for &k in &[0.0, 0.3, 1.0, 2.5] {
        let gp = GaussianPolynomial::decaying(Polynomial::from_real(&[1.0]), c(k));
        for &l in &[-1.0, 0.25, 1.5] {
            let v = hankel_nonsym(&gp, c(l), c(k), &q()).unwrap().value;
            assert!(rel(v, c(l * l).exp()) < 1e-12, "k = {k}");
        }
    }
}

#[test]
fn oracles_invert_each_other() {
    let gp = GaussianPolynomial::decaying(Polynomial::from_real(&[1.0, -2.0, 0.5, 3.0, 0.0, 1.0]), c(0.7));
    let back = hankel_inverse_oracle(&hankel_gaussian_oracle(&gp).unwrap()).unwrap();
    for (a, b) in back.p.coeffs().iter().zip(gp.p.coeffs()) {
        assert!((a - b).norm() < 1e-12);
    }
}

#[test]
fn explicit_radius_below_tail_bound_is_rejected() {
    let gp = GaussianPolynomial::monomial(2, c(1.0));
    let r = hankel_nonsym(&gp, c(1.0), c(1.0), &q().with_radius(2.0));
    assert!(matches!(r, Err(Error::TailBound { .. })), "{r:?}");
    assert!(hankel_nonsym(&gp, c(1.0), c(1.0), &q().with_radius(12.0)).is_ok());
}

#[test]
fn parameters_outside_the_integrable_range_are_rejected() {
    let gp = GaussianPolynomial::monomial(0, c(-0.7));
    assert!(matches!(hankel_nonsym(&gp, c(1.0), c(-0.7), &q()), Err(Error::Precondition(_))));
    assert!(matches!(master_check(c(0.5), c(0.1), c(0.1), -1.0, &q()), Err(Error::Precondition(_))));
    let growing = GaussianPolynomial::growing(Polynomial::from_real(&[1.0]), c(1.0));
    assert!(hankel_gaussian_oracle(&growing).is_err());
}

#[test]
fn endpoint_rules_agree_where_both_apply() {
    let gp = GaussianPolynomial::decaying(Polynomial::from_real(&[1.0, 1.0, 1.0]), c(0.4));
    let gl = QuadratureSpec { endpoint_rule: EndpointRule::GaussLegendre, ..q() };
    let ts = QuadratureSpec { endpoint_rule: EndpointRule::TanhSinh, ..q() };
    let a = hankel_nonsym(&gp, c(0.8), c(0.4), &gl).unwrap().value;
    let b = hankel_nonsym(&gp, c(0.8), c(0.4), &ts).unwrap().value;
    assert!(rel(a, b) < 1e-11);
}

#[test]
fn negative_k_uses_the_endpoint_rule_for_the_singular_weight() {
    let k = c(-0.35);
    let gp = GaussianPolynomial::decaying(Polynomial::from_real(&[2.0, 0.0, -1.0, 1.0]), k);
    let oracle = hankel_gaussian_oracle(&gp).unwrap();
    for &l in &[-1.0, 0.5, 1.25] {
        let r = hankel_nonsym(&gp, c(l), k, &q()).unwrap();
        assert_eq!(r.info.rule, "tanh-sinh+gauss-legendre");
        assert!(rel(r.value, oracle.eval(c(l))) < 1e-10);
    }
}

#[test]
fn master_scaling_prefers_the_half_shift() {
    for &(k, alpha) in &[(0.5, 2.0), (1.5, 0.5), (-0.25, 3.0)] {
        let s = master_scaling(c(k), alpha, &q()).unwrap();
        assert!(s.rel_err_half_shift < 1e-11, "{s:?}");
        assert!(s.rel_err_plain > 1e-2, "{s:?}");
    }
}

#[test]
fn operator_identities_hold_for_a_complex_parameter() {
    let k = Complex64::new(0.6, 0.3);
    let ids = operator_transform_check(k, &operator_test_functions(k), &operator_lambda_grid(), &q()).unwrap();
    assert_eq!(ids.len(), 6);
    for id in ids {
        assert!(id.max_rel_err < 1e-10, "{id:?}");
    }
}

#[test]
fn inversion_round_trips_on_low_monomials() {
    for &k in &[0.0, 0.75, 2.0] {
        for j in 0..=4 {
            let f = GaussianPolynomial::monomial(j, c(k));
            let re_im = inversion_check_re_im(&f, &q()).unwrap();
            assert!(re_im.rel_err < 1e-9 && re_im.oracle_distance < 1e-9, "k = {k}, j = {j}: {re_im:?}");
            let g = hankel_gaussian_oracle(&f).unwrap();
            let im_re = inversion_check_im_re(&g, &q()).unwrap();
            assert!(im_re.rel_err < 1e-9 && im_re.oracle_distance < 1e-9, "k = {k}, j = {j}: {im_re:?}");
        }
    }
}

#[test]
fn transform_curve_tracks_oracle() {
    let f = GaussianPolynomial::monomial(3, c(1.25));
    let lambdas: Vec<f64> = (-8..=8).map(|i| 0.25 * i as f64).collect();
    for p in transform_curve(&f, &lambdas, &q()).unwrap() {
        assert!((p.quadrature - p.oracle).norm() < 1e-11 * p.oracle.norm().max(1.0));
    }
}

fn real_poly(max_degree: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0f64..2.0, 1..=max_degree + 1)
}

fn k_real() -> impl Strategy<Value = f64> {
    prop_oneof![-0.4f64..0.0, 0.0f64..3.0]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn quadrature_matches_oracle(p in real_poly(6), k in k_real(), l in -2.0f64..2.0, li in -1.0f64..1.0) {
        let gp = GaussianPolynomial::decaying(Polynomial::from_real(&p), c(k));
        let lambda = Complex64::new(l, li);
        let want = hankel_gaussian_oracle(&gp).unwrap().eval(lambda);
        let got = hankel_nonsym(&gp, lambda, c(k), &q()).unwrap().value;
        let scale = want.norm().max(gp.p.coeffs().iter().map(|a| a.norm()).fold(0.0, f64::max));
        prop_assert!((got - want).norm() < 1e-10 * scale, "{got} vs {want}");
    }

    #[test]
    fn inverse_quadrature_matches_oracle(p in real_poly(5), k in 0.0f64..2.5, x in -2.0f64..2.0) {
        let g = GaussianPolynomial::growing(Polynomial::from_real(&p), c(k));
        let want = hankel_inverse_oracle(&g).unwrap().eval(c(x));
        let got = hankel_inverse_im(&g, c(x), c(k), &q()).unwrap().value;
        let scale = want.norm().max(g.p.coeffs().iter().map(|a| a.norm()).fold(0.0, f64::max));
        prop_assert!((got - want).norm() < 1e-10 * scale, "{got} vs {want}");
    }

    #[test]
    fn transform_is_linear(p in real_poly(4), r in real_poly(4), a in -2.0f64..2.0, k in k_real(), l in -1.5f64..1.5) {
        let f = GaussianPolynomial::decaying(Polynomial::from_real(&p), c(k));
        let g = GaussianPolynomial::decaying(Polynomial::from_real(&r), c(k));
        let combo = f.scale(c(a)).add(&g);
        let t = |h: &GaussianPolynomial| hankel_nonsym(h, c(l), c(k), &q()).unwrap().value;
        let lhs = t(&combo);
        let rhs = a * t(&f) + t(&g);
        prop_assert!((lhs - rhs).norm() < 1e-11 * (1.0 + rhs.norm() + t(&f).norm()));
    }

    #[test]
    fn even_functions_see_the_symmetric_kernel(p in real_poly(3), k in k_real(), l in -1.5f64..1.5) {
        let even: Vec<f64> = p.iter().enumerate().flat_map(|(i, &a)| if i == 0 { vec![a] } else { vec![0.0, a] }).collect();
        let f = GaussianPolynomial::decaying(Polynomial::from_real(&even), c(k));
        let a = hankel_nonsym(&f, c(l), c(k), &q()).unwrap().value;
        let b = hankel_sym(&f, c(l), c(k), &q()).unwrap().value;
        prop_assert!((a - b).norm() < 1e-12 * a.norm().max(1.0));
    }

    #[test]
    fn real_data_gives_conjugate_symmetric_transforms(p in real_poly(4), k in 0.0f64..2.0, l in -1.5f64..1.5, li in 0.1f64..1.0) {
        let f = GaussianPolynomial::decaying(Polynomial::from_real(&p), c(k));
        let z = Complex64::new(l, li);
        let a = hankel_nonsym(&f, z, c(k), &q()).unwrap().value;
        let b = hankel_nonsym(&f, z.conj(), c(k), &q()).unwrap().value;
        prop_assert!((a - b.conj()).norm() < 1e-12 * a.norm().max(1.0));
    }

    #[test]
    fn tighter_tolerance_agrees(p in real_poly(4), k in k_real(), l in -2.0f64..2.0) {
        let f = GaussianPolynomial::decaying(Polynomial::from_real(&p), c(k));
        let a = hankel_nonsym(&f, c(l), c(k), &q()).unwrap().value;
        let b = hankel_nonsym(&f, c(l), c(k), &q().with_rel_tol(5e-13)).unwrap().value;
        prop_assert!((a - b).norm() < 1e-11 * a.norm().max(1.0));
    }

    #[test]
    fn master_formulas_hold(k in k_real(), l in -1.5f64..1.5, m in -1.5f64..1.5, alpha in 0.5f64..3.0) {
        let a = master_check(c(k), c(l), c(m), alpha, &q()).unwrap();
        prop_assert!(a.rel_err < 1e-10, "{a:?}");
        let s = master_check_sym(c(k), c(l), c(m), alpha, &q()).unwrap();
        prop_assert!(s.rel_err < 1e-10, "{s:?}");
    }

    #[test]
    fn nonsymmetric_master_follows_from_symmetric(k in 0.0f64..2.0, l in -1.5f64..1.5, m in -1.5f64..1.5) {
        prop_assert!(nonsym_from_sym_check(c(k), c(l), c(m), &q()).unwrap().rel_err < 1e-10);
    }

    #[test]
    fn plancherel_and_adjointness(p in real_poly(3), r in real_poly(3), k in k_real()) {
        let f = GaussianPolynomial::decaying(Polynomial::from_real(&p), c(k));
        let g = GaussianPolynomial::decaying(Polynomial::from_real(&r), c(k));
        prop_assert!(plancherel_check(&f, &g, &q()).unwrap().rel_err < 1e-9);
        let d = adjointness_check(&f, &g, &q()).unwrap();
        let scale = 1.0 + p.iter().chain(&r).map(|a| a.abs()).fold(0.0, f64::max).powi(2);
        prop_assert!(d.laplacian < 1e-10 * scale && d.dunkl < 1e-10 * scale, "{d:?}");
    }
}
