use std::f64::consts::{E, PI};

use gkcs_core::quadrature::{integrate_circle, integrate_finite, integrate_semi_infinite, QuadratureResult};
use gkcs_core::specfun::{bessel_k, BesselOrder};
use gkcs_core::Result;

type Runner = Box<dyn Fn(f64) -> Result<QuadratureResult<f64>>>;

struct Case {
    name: &'static str,
    exact: f64,
    run: Runner,
}

fn finite(name: &'static str, a: f64, b: f64, exact: f64, f: fn(f64) -> f64) -> Case {
    Case {
        name,
        exact,
        run: Box::new(move |tol| integrate_finite(f, a, b, tol)),
    }
}

fn half_line(name: &'static str, exact: f64, f: fn(f64) -> f64) -> Case {
    Case {
        name,
        exact,
        run: Box::new(move |tol| integrate_semi_infinite(f, tol)),
    }
}

fn circle(name: &'static str, exact: f64, f: fn(f64) -> f64) -> Case {
    Case {
        name,
        exact,
        run: Box::new(move |tol| integrate_circle(f, tol)),
    }
}

fn library() -> Vec<Case> {
    vec![
        finite("x", 0.0, 1.0, 0.5, |x| x),
        finite("sin^2", 0.0, PI, PI / 2.0, |t| t.sin().powi(2)),
        finite("x^-1/2", 0.0, 1.0, 2.0, |x| x.powf(-0.5)),
        finite("e^x", 0.0, 1.0, E - 1.0, f64::exp),
        finite("1/(1+x^2)", 0.0, 1.0, PI / 4.0, |x| 1.0 / (1.0 + x * x)),
        finite("ln x", 0.0, 1.0, -1.0, f64::ln),
        finite("sqrt(1-x^2)", 0.0, 1.0, PI / 4.0, |x| (1.0 - x * x).sqrt()),
        finite("x^3", 0.0, 2.0, 4.0, |x| x.powi(3)),
        finite("x sin x", 0.0, PI, PI, |x| x * x.sin()),
        finite("x^-1/3", 0.0, 2.0, 1.5 * 2.0f64.powf(2.0 / 3.0), |x| x.powf(-1.0 / 3.0)),
        finite("x^2.5", 0.0, 1.0, 1.0 / 3.5, |x| x.powf(2.5)),
        finite("e^-x on [0,10]", 0.0, 10.0, 1.0 - (-10.0f64).exp(), |x| (-x).exp()),
        finite("cos 10x", 0.0, 1.0, 10.0f64.sin() / 10.0, |x| (10.0 * x).cos()),
        half_line("e^-x", 1.0, |x| (-x).exp()),
        half_line("x e^-x", 1.0, |x| x * (-x).exp()),
        half_line("K0(2 sqrt x)", 0.5, |x| {
            bessel_k(BesselOrder::new(0.0).unwrap(), 2.0 * x.sqrt()).unwrap_or(0.0)
        }),
        half_line("1/(1+x)^2", 1.0, |x| 1.0 / ((1.0 + x) * (1.0 + x))),
        half_line("e^-x^2", PI.sqrt() / 2.0, |x| (-x * x).exp()),
        circle("cos^2", 0.5, |t| t.cos().powi(2)),
        circle("1/(2 - cos)", 1.0 / 3.0f64.sqrt(), |t| 1.0 / (2.0 - t.cos())),
    ]
}

// rounding noise in the reference values and the final sums
fn noise(exact: f64) -> f64 {
    64.0 * f64::EPSILON * exact.abs().max(1.0)
}

#[test]
fn error_estimates_bound_actual_errors() {
    let cases = library();
    assert_eq!(cases.len(), 20);
    let mut bounded = 0;
    let mut total = 0;
    for case in &cases {
        for &tol in &[1e-6, 1e-9, 1e-12] {
            let r = (case.run)(tol).unwrap();
            let actual = (r.value - case.exact).abs();
            assert!(
                actual <= (tol * case.exact.abs()).max(tol),
                "{} at tol {tol}: error {actual}",
                case.name
            );
            total += 1;
            if actual <= r.error_estimate.max(noise(case.exact)) {
                bounded += 1;
            }
        }
    }
    assert!(bounded as f64 >= 0.95 * total as f64, "{bounded}/{total} bounded");
}

#[test]
fn halving_tol_never_increases_error() {
    for case in library() {
        let mut tol = 1e-4;
        let mut prev = f64::INFINITY;
        while tol > 1e-13 {
            let err = ((case.run)(tol).unwrap().value - case.exact).abs();
            assert!(
                err <= prev.max(noise(case.exact)),
                "{} at tol {tol}: {err} after {prev}",
                case.name
            );
            prev = err;
            tol /= 2.0;
        }
    }
}
