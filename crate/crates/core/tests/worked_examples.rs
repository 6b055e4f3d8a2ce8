//! Worked input/output examples for each operator. Closed-form targets are
//! evaluated independently; high-precision values are frozen literals.

#![allow(clippy::excessive_precision)]

use std::f64::consts::{E, PI};

use num_complex::Complex64;
use vfrac::exec::Exec;
use vfrac::limit::LimitConfig;
use vfrac::multivariable::{
    chain_rule_multi, componentwise_check, linear_map_residual, scalar_field, v_gradient, v_jacobian, v_partial,
    vector_map, Point,
};
use vfrac::quadrature::{double_integral_rect, integrate_adaptive, integrate_weighted, Interval, QuadratureConfig};
use vfrac::scalar_calculus::{
    chain_rule, fundamental_check, power_rule, v_derivative_closed, v_derivative_limit, v_derivative_numeric,
    v_integral,
};
use vfrac::special_functions::{
    coefficient_c, coefficient_c_real, log_gamma, log_gamma_real, pochhammer_gen, truncated_h, truncated_ml,
};
use vfrac::vector_field::{
    commutativity_check, green_check, green_lhs, green_rhs, mixed_partial_closed, mixed_partial_limit, GreenForm,
    MixedOrders, Nesting, Region2D,
};
use vfrac::{Error, ParameterSet};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn unit(alpha: f64, trunc: usize) -> ParameterSet {
    ParameterSet::unit(alpha, trunc).unwrap()
}

fn close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol * (1.0 + b.abs()), "{a} vs {b} (tol {tol:e})");
}

fn some_params(alpha: f64) -> ParameterSet {
    ParameterSet::real(1.2, 0.8, 1.5, 1.1, 1.0, 1.3, 3, alpha).unwrap()
}

fn lcfg() -> LimitConfig {
    LimitConfig::default()
}

fn qcfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

#[test]
fn log_gamma_values() {
    assert_eq!(log_gamma_real(1.0).unwrap(), 0.0);
    close(log_gamma_real(5.0).unwrap(), 24f64.ln(), 1e-15);
    // 0.5 ln π
    close(log_gamma_real(0.5).unwrap(), 0.57236494292470008707, 1e-15);
    // principal-branch values frozen from a 40-digit evaluation
    for (z, want) in [
        (Complex64::new(3.0, -2.0), Complex64::new(-0.03163905937396118980377, -2.022193197501327124016)),
        (Complex64::new(0.5, 1.0), Complex64::new(-0.6527906442043729152731, -0.9550077243425691095632)),
    ] {
        let got = log_gamma(z).unwrap();
        assert!((got - want).norm() <= 1e-13 * want.norm(), "{z}: {got}");
    }
    assert!(matches!(log_gamma(c(-2.0)), Err(Error::Pole { .. })));
}

#[test]
fn pochhammer_values() {
    assert_eq!(pochhammer_gen(c(2.3), 0.7, 0).unwrap(), c(1.0));
    close(pochhammer_gen(c(1.0), 1.0, 3).unwrap().re, 6.0, 1e-13);
    // Γ(1.5)/Γ(0.5) = 0.5
    close(pochhammer_gen(c(0.5), 0.5, 2).unwrap().re, 0.5, 1e-14);
}

#[test]
fn mittag_leffler_and_h() {
    let p = ParameterSet::real(1.3, 2.5, 1.0, 1.0, 1.0, 1.0, 0, 0.5).unwrap();
    let gamma_beta = log_gamma_real(2.5).unwrap().exp();
    close(truncated_ml(&p, Complex64::new(3.0, -1.0)).unwrap().re, 1.0 / gamma_beta, 1e-14);
    close(truncated_ml(&unit(0.5, 1), c(0.25)).unwrap().re, 1.25, 1e-15);
    let z = Complex64::new(0.3, -0.2);
    let h = truncated_h(&unit(0.5, 1), z).unwrap();
    assert!((h - (1.0 + z)).norm() < 1e-15);
    let h3 = truncated_h(&unit(0.5, 3), c(0.1)).unwrap().re;
    close(h3, 1.0 + 0.1 + 0.01 / 2.0 + 0.001 / 6.0, 1e-15);
    assert_eq!(truncated_h(&some_params(0.3), c(0.0)).unwrap(), c(1.0));
}

#[test]
fn coefficient_values() {
    close(coefficient_c(&unit(0.5, 2)).unwrap().re, 1.0, 1e-15);
    let p = ParameterSet::real(1.0, 2.0, 1.4, 1.4, 0.8, 0.8, 2, 0.5).unwrap();
    close(coefficient_c_real(&p).unwrap(), 0.5, 1e-14);
    let p = ParameterSet::real(1e-9, 1.7, 2.0, 2.0, 1.0, 1.0, 2, 0.5).unwrap();
    close(coefficient_c_real(&p).unwrap(), 1.0, 1e-8);
}

#[test]
fn quadrature_values() {
    let q = |g: fn(f64) -> f64, a: f64, b: f64| integrate_adaptive(g, Interval::new(a, b).unwrap(), &qcfg()).unwrap();
    close(q(|_| 1.0, 0.0, 1.0).value, 1.0, 1e-14);
    close(q(|x| x * x, 0.0, 1.0).value, 1.0 / 3.0, 1e-14);
    close(q(f64::sin, 0.0, PI).value, 2.0, 1e-12);
    for alpha in [0.2, 0.5, 0.9] {
        let v = integrate_weighted(|x| x.powf(1.0 - alpha), Interval::new(0.0, 1.0).unwrap(), alpha, &qcfg());
        close(v.unwrap().value, 1.0, 1e-10);
    }
    close(integrate_weighted(|_| 1.0, Interval::new(0.0, 1.0).unwrap(), 0.5, &qcfg()).unwrap().value, 2.0, 1e-10);
    close(integrate_weighted(|x| x, Interval::new(1.0, 2.0).unwrap(), 1.0, &qcfg()).unwrap().value, 1.5, 1e-13);
    let unit_sq = || Interval::new(0.0, 1.0).unwrap();
    for (h, want) in [
        (Box::new(|_: f64, _: f64| 1.0) as Box<dyn Fn(f64, f64) -> f64 + Sync>, 1.0),
        (Box::new(|x: f64, y: f64| x * y), 0.25),
        (Box::new(|x: f64, y: f64| (x + y).exp()), (E - 1.0).powi(2)),
    ] {
        let v = double_integral_rect(h, unit_sq(), unit_sq(), &qcfg(), Exec::Auto).unwrap();
        close(v.value, want, 1e-11);
    }
}

#[test]
fn derivative_examples() {
    let p = some_params(0.4);
    assert_eq!(v_derivative_limit(|_| 7.5, 1.3, &p, &lcfg()).unwrap().value, 0.0);
    close(v_derivative_limit(|t| t * t, 1.0, &unit(0.5, 2), &lcfg()).unwrap().value, 2.0, 1e-10);
    // brute-force quotient at small ε agrees to first order
    let h = |eps: f64| truncated_h(&unit(0.5, 2), c(eps)).unwrap().re;
    for eps in [1e-6, 1e-7] {
        close((h(eps).powi(2) - 1.0) / eps, 2.0, 1e-5);
    }
    let cc = coefficient_c_real(&p).unwrap();
    for t in [0.5, 1.0, 2.0] {
        close(v_derivative_limit(|x| x.powf(0.4), t, &p, &lcfg()).unwrap().value, cc * 0.4, 1e-9);
    }
}

#[test]
fn closed_and_numeric_examples() {
    let p = some_params(0.35);
    let cc = coefficient_c_real(&p).unwrap();
    let a = 1.4;
    close(v_derivative_closed(f64::cos, a, &p).unwrap(), cc * a.powf(0.65) * a.cos(), 1e-15);
    close(v_derivative_closed(f64::exp, a, &p).unwrap(), cc * a.powf(0.65) * a.exp(), 1e-15);
    assert_eq!(v_derivative_closed(|_| 0.0, a, &p).unwrap(), 0.0);
    close(v_derivative_numeric(|t| t.powi(3), 2.0, &unit(1.0, 2)).unwrap(), 12.0, 1e-8);
    let p3 = some_params(0.3);
    let c3 = coefficient_c_real(&p3).unwrap();
    close(v_derivative_numeric(f64::sin, 1.0, &p3).unwrap(), c3 * 1f64.cos(), 1e-8);
    let p5 = some_params(0.5);
    let c5 = coefficient_c_real(&p5).unwrap();
    close(v_derivative_numeric(f64::ln, 0.5, &p5).unwrap(), c5 * 0.5f64.sqrt() * 2.0, 1e-8);
}

#[test]
fn power_and_chain_examples() {
    let p = some_params(0.6);
    let cc = coefficient_c_real(&p).unwrap();
    assert_eq!(power_rule(0.0, 1.7, &p).unwrap(), 0.0);
    close(power_rule(0.6, 2.3, &p).unwrap(), cc * 0.6, 1e-15);
    close(power_rule(2.0, 1.0, &unit(0.5, 2)).unwrap(), 2.0, 1e-15);
    let t = 1.3;
    let g_alone = v_derivative_limit(f64::exp, t, &p, &lcfg()).unwrap().value;
    close(chain_rule(|_| 1.0, f64::exp, t, &p, &lcfg()).unwrap().value, g_alone, 1e-15);
    let id = chain_rule(f64::cos, |x| x, t, &p, &lcfg()).unwrap().value;
    close(id, t.cos() * power_rule(1.0, t, &p).unwrap(), 1e-10);
    let u = unit(0.5, 2);
    close(chain_rule(|v| 2.0 * v, |x| x, 2.0, &u, &lcfg()).unwrap().value, 2.0 * 2.0 * 2f64.sqrt(), 1e-10);
}

#[test]
fn integral_examples() {
    for alpha in [0.3, 0.7] {
        let p = some_params(alpha);
        let cc = coefficient_c_real(&p).unwrap();
        close(v_integral(|x| x.powf(1.0 - alpha), 0.0, 1.0, &p, &qcfg()).unwrap().value, 1.0 / cc, 1e-10);
        assert_eq!(v_integral(|_| 0.0, 0.0, 2.0, &p, &qcfg()).unwrap().value, 0.0);
        let tiny = v_integral(f64::exp, 2.0 - 1e-8, 2.0, &p, &qcfg()).unwrap().value;
        assert!(tiny.abs() < 1e-6, "{tiny}");
    }
}

#[test]
fn fundamental_examples() {
    let r = fundamental_check(|_| 1.0, 1.0, 2.0, &unit(0.5, 2), &lcfg(), &qcfg()).unwrap();
    assert!(r.residual < 1e-6, "{r:?}");
    let r = fundamental_check(|x| x, 1.0, 2.0, &unit(1.0, 2), &lcfg(), &qcfg()).unwrap();
    assert!(r.residual < 1e-8, "{r:?}");
    let r = fundamental_check(f64::sin, 0.5, 1.5, &some_params(0.7), &lcfg(), &qcfg()).unwrap();
    assert!(r.residual < 1e-6, "{r:?}");
}

#[test]
fn partial_and_jacobian_examples() {
    let p = some_params(0.45);
    let cc = coefficient_c_real(&p).unwrap();
    let (a, b) = (1.1, 0.6);
    let pt = Point::new(vec![a, b]).unwrap();
    let sin_x = scalar_field(2, |x: &[f64]| x[0].sin());
    close(v_partial(&sin_x, &pt, 0, &p, &lcfg()).unwrap().value, cc * a.powf(0.55) * a.cos(), 1e-9);
    assert_eq!(v_partial(&sin_x, &pt, 1, &p, &lcfg()).unwrap().value, 0.0);
    let u = unit(0.5, 2);
    let one = Point::new(vec![1.0, 1.0]).unwrap();
    let sum = scalar_field(2, |x: &[f64]| x[0] + x[1]);
    close(v_partial(&sum, &one, 0, &u, &lcfg()).unwrap().value, 1.0, 1e-10);

    let id = vector_map(2, 2, |x: &[f64]| x.to_vec());
    let j = v_jacobian(&id, &one, &u, &lcfg(), Exec::Auto).unwrap();
    close(j.entries[(0, 0)], 1.0, 1e-10);
    close(j.entries[(1, 1)], 1.0, 1e-10);
    assert_eq!(j.entries[(0, 1)], 0.0);

    let f = vector_map(2, 2, |x: &[f64]| vec![x[0] * x[1], x[0] + x[1]]);
    let j = v_jacobian(&f, &Point::new(vec![1.0, 2.0]).unwrap(), &u, &lcfg(), Exec::Auto).unwrap();
    let s2 = 2f64.sqrt();
    for ((r, k), want) in [((0, 0), 2.0), ((0, 1), s2), ((1, 0), 1.0), ((1, 1), s2)] {
        close(j.entries[(r, k)], want, 1e-9);
    }
}

#[test]
fn residual_examples() {
    let p = some_params(0.5);
    let f = vector_map(2, 2, |x: &[f64]| vec![x[0].sin() * x[1], (x[0] - x[1]).exp()]);
    let a = Point::new(vec![0.7, 1.3]).unwrap();
    let l = v_jacobian(&f, &a, &p, &lcfg(), Exec::Auto).unwrap().as_linear_map();
    let dir = [0.6, 0.8];
    let r4 = linear_map_residual(&f, &a, &l, &p, &[1e-4 * dir[0], 1e-4 * dir[1]]).unwrap();
    let r6 = linear_map_residual(&f, &a, &l, &p, &[1e-6 * dir[0], 1e-6 * dir[1]]).unwrap();
    assert!(r4 < 1e-2 && r6 < 1e-4 && r4 / r6 > 50.0, "{r4} {r6}");
}

#[test]
fn chain_multi_and_componentwise_examples() {
    let p = some_params(0.65);
    let cc = coefficient_c_real(&p).unwrap();
    let f = vector_map(2, 2, |x: &[f64]| vec![x[0] * x[1] + 1.0, x[0].exp()]);
    let a = Point::new(vec![0.8, 1.5]).unwrap();
    let id = vector_map(2, 2, |y: &[f64]| y.to_vec());
    let via = chain_rule_multi(&id, &f, &a, &p, &lcfg(), Exec::Auto).unwrap();
    let direct = v_jacobian(&f, &a, &p, &lcfg(), Exec::Auto).unwrap().entries;
    assert!((via - &direct).amax() < 1e-10);

    // f = identity, g scalar: gradient of g times diag(C a^(1-α))
    let g = scalar_field(2, |y: &[f64]| y[0] * y[0] * y[1]);
    let v = chain_rule_multi(&g, &id, &a, &p, &lcfg(), Exec::Auto).unwrap();
    let (x0, x1) = (0.8f64, 1.5f64);
    close(v[(0, 0)], 2.0 * x0 * x1 * cc * x0.powf(0.35), 1e-9);
    close(v[(0, 1)], x0 * x0 * cc * x1.powf(0.35), 1e-9);

    assert!(componentwise_check(&f, &a, &p, &lcfg(), Exec::Auto).unwrap() <= 1e-8);
    let single = scalar_field(2, |x: &[f64]| x[0].sin() + x[1]);
    assert_eq!(componentwise_check(&single, &a, &p, &lcfg(), Exec::Auto).unwrap(), 0.0);
    let with_const = vector_map(2, 2, |x: &[f64]| vec![x[0] * x[1], 4.0]);
    let j = v_jacobian(&with_const, &a, &p, &lcfg(), Exec::Auto).unwrap();
    assert_eq!(j.entries.row(1).amax(), 0.0);
}

#[test]
fn gradient_examples() {
    let p = unit(0.5, 2);
    let one = Point::new(vec![1.0, 1.0]).unwrap();
    let [gt, gs] = v_gradient(&scalar_field(2, |x: &[f64]| x[0] + x[1]), &one, 0.5, 0.5, &p, &lcfg()).unwrap();
    close(gt, 1.0, 1e-10);
    close(gs, 1.0, 1e-10);
    let zero = v_gradient(&scalar_field(2, |_: &[f64]| 2.0), &one, 0.3, 0.8, &p, &lcfg()).unwrap();
    assert_eq!(zero, [0.0, 0.0]);
    let q = some_params(0.5);
    let cc = coefficient_c_real(&q).unwrap();
    let (a, t, s, al, ka) = (0.5, 1.2, 0.7, 0.4, 0.9);
    let e = |x: &[f64]| (a * (x[0] + x[1])).exp();
    let [gt, gs] = v_gradient(&scalar_field(2, e), &Point::new(vec![t, s]).unwrap(), al, ka, &q, &lcfg()).unwrap();
    let ev = (a * (t + s)).exp();
    close(gt, cc * a * t.powf(1.0 - al) * ev, 1e-9);
    close(gs, cc * a * s.powf(1.0 - ka) * ev, 1e-9);
}

#[test]
fn mixed_examples() {
    let u = unit(0.5, 2);
    let half = MixedOrders::new(0.5, 0.5).unwrap();
    let add = mixed_partial_limit(&|t: f64, s: f64| t + s, 1.0, 1.0, half, Nesting::SThenT, &u, &lcfg()).unwrap();
    assert!(add.value.abs() < 1e-8, "{add:?}");
    let ts = mixed_partial_limit(&|t: f64, s: f64| t * s, 1.0, 1.0, half, Nesting::TThenS, &u, &lcfg()).unwrap();
    close(ts.value, 1.0, 1e-6);
    assert_eq!(mixed_partial_closed(|_, _| 0.0, 1.0, 2.0, half, &u).unwrap(), 0.0);
    close(mixed_partial_closed(|_, _| 1.0, 4.0, 9.0, half, &u).unwrap(), 6.0, 1e-15);

    let p = some_params(0.5);
    let cc = coefficient_c_real(&p).unwrap();
    let a = 0.5;
    let o = MixedOrders::new(0.35, 0.8).unwrap();
    let (t, s) = (1.4f64, 0.9f64);
    let want = a * a * s.powf(0.2) * t.powf(0.65) * cc * cc * (a * (t + s)).exp();
    let closed = mixed_partial_closed(|x, y| a * a * (a * (x + y)).exp(), t, s, o, &p).unwrap();
    close(closed, want, 1e-14);
    let (r, _) = commutativity_check(&|x: f64, y: f64| (a * (x + y)).exp(), 1.0, 1.0, half, &p, &lcfg()).unwrap();
    assert!(r <= 1e-4);
    let (r, _) = commutativity_check(&|x: f64, y: f64| x * x * y.powi(3), 1.0, 2.0, half, &u, &lcfg()).unwrap();
    assert!(r <= 1e-4);
}

#[test]
fn green_examples() {
    let u = unit(0.5, 2);
    let sq = Region2D::rect(1.0, 2.0, 1.0, 2.0).unwrap();
    let want = 2.0 * (2f64.sqrt() - 1.0);
    let zero = |_: f64, _: f64| 0.0;
    let lhs = green_lhs(&zero, &|x: f64, _: f64| x, &sq, &u, GreenForm::Simplified, &qcfg(), Exec::Auto).unwrap();
    close(lhs.value, want, 1e-12);
    let lhs = green_lhs(&|_: f64, y: f64| y, &zero, &sq, &u, GreenForm::Weighted, &qcfg(), Exec::Auto).unwrap();
    close(lhs.value, -want, 1e-12);
    let k = |_: f64, _: f64| 3.0;
    assert_eq!(green_lhs(&k, &k, &sq, &u, GreenForm::Simplified, &qcfg(), Exec::Auto).unwrap().value, 0.0);

    let b = sq.boundary();
    assert!(b.is_counterclockwise());
    assert_eq!(green_rhs(&zero, &zero, &b, &u, &qcfg(), Exec::Auto).unwrap().value, 0.0);
    let fwd = green_rhs(&zero, &|x: f64, _: f64| x, &b, &u, &qcfg(), Exec::Auto).unwrap().value;
    close(fwd, want, 1e-6);
    let back = green_rhs(&zero, &|x: f64, _: f64| x, &b.reversed(), &u, &qcfg(), Exec::Auto).unwrap().value;
    close(back, -fwd, 1e-12);

    let r13 = Region2D::rect(1.0, 2.0, 1.0, 3.0).unwrap();
    let rep = green_check(&|x: f64, y: f64| x * y, &|x: f64, _: f64| x * x, &r13, &u, &qcfg(), Exec::Auto).unwrap();
    assert!(rep.residual <= 1e-6 * (1.0 + rep.lhs.abs()), "{rep:?}");
    let rep = green_check(&zero, &zero, &r13, &u, &qcfg(), Exec::Auto).unwrap();
    assert_eq!(rep.residual, 0.0);
    let classical = green_check(&|x: f64, y: f64| x * y, &|x: f64, _: f64| x * x, &r13, &unit(1.0, 1), &qcfg(), Exec::Auto);
    assert!(classical.unwrap().residual <= 1e-8);
}
