mod common;

use common::*;
use darboux::operator::*;
use darboux::{Error, Jet, C64};

fn sech2(x: f64) -> f64 {
    let s = 1.0 / x.cosh();
    s * s
}

fn pt() -> Potential {
    Potential::from_jet("-6sech^2", |z| {
        let x = Jet::variable(z);
        let ch = x.cosh();
        Ok((ch * ch).recip() * c(-6.0, 0.0))
    })
}

#[test]
fn free_particle_sine() {
    let v = Potential::zero();
    let u = integrate_schrodinger(&v, c(1.0, 0.0), 0.0, c(0.0, 0.0), c(1.0, 0.0), 10.0).unwrap();
    for i in 0..=100 {
        let x = 0.1 * i as f64;
        assert!((u.eval(x) - c(x.sin(), 0.0)).norm() < 1e-9, "{x}");
        assert!((u.eval_deriv(x) - c(x.cos(), 0.0)).norm() < 1e-9);
    }
    assert_eq!(u.kind(), SolutionKind::Numeric);
}

#[test]
fn poschl_teller_ground_state() {
    let u = integrate_schrodinger_span(&pt(), c(-4.0, 0.0), 0.0, c(1.0, 0.0), c(0.0, 0.0), -5.0, 5.0).unwrap();
    for i in 0..=100 {
        let x = -5.0 + 0.1 * i as f64;
        assert!((u.eval(x) - c(sech2(x), 0.0)).norm() < 1e-8, "{x}");
    }
}

#[test]
fn integration_backwards() {
    let v = Potential::zero();
    let u = integrate_schrodinger(&v, c(1.0, 0.0), 3.0, c(3f64.sin(), 0.0), c(3f64.cos(), 0.0), -2.0).unwrap();
    for x in [-2.0, -1.1, 0.0, 2.9] {
        assert!((u.eval(x) - c(f64::sin(x), 0.0)).norm() < 1e-9);
    }
}

#[test]
fn tolerance_halving_reduces_error() {
    let v = Potential::zero();
    let err = |tol: f64| {
        let u = integrate_schrodinger_tol(&v, c(4.0, 0.0), 0.0, c(0.0, 0.0), c(2.0, 0.0), 20.0, tol).unwrap();
        (0..=200).map(|i| 0.1 * i as f64).map(|x| (u.eval(x) - c((2.0 * x).sin(), 0.0)).norm()).fold(0.0, f64::max)
    };
    let (e1, e2, e3) = (err(1e-6), err(1e-8), err(1e-10));
    assert!(e2 < e1 && e3 < e2, "{e1} {e2} {e3}");
}

#[test]
fn residual_of_sine() {
    let v = Potential::zero();
    let s = SchrodingerSolution::closed_form(c(1.0, 0.0), |x| c(x.sin(), 0.0), |x| c(x.cos(), 0.0));
    let grid = linspace(-3.0, 3.0, 61);
    let rep = residual(&v, &s, &grid);
    assert!(rep.max_abs_dev < 1e-8 && rep.passed);

    let da = 1e-3;
    let wrong = SchrodingerSolution::closed_form(c(1.0 + da, 0.0), |x| c(x.sin(), 0.0), |x| c(x.cos(), 0.0));
    let rep = residual(&v, &wrong, &grid);
    // the deviation is |Δa||u|/(1+|a||u|), at most Δa/2 at |u| = 1
    let want = grid.iter().map(|x| da * x.sin().abs() / (1.0 + (1.0 + da) * x.sin().abs())).fold(0.0, f64::max);
    assert!((rep.max_abs_dev - want).abs() < 1e-8);
}

#[test]
fn residual_excludes_flagged_poles() {
    let v = Potential::new("1/x^2", |z| (z * z).inv() * 2.0).with_singularities(vec![0.0]);
    // u = 1/x solves −u″ + 2u/x² = 0
    let s = SchrodingerSolution::closed_form(c(0.0, 0.0), |x| c(1.0 / x, 0.0), |x| c(-1.0 / (x * x), 0.0));
    let mut grid = linspace(0.4, 1.0, 25);
    grid.extend([0.01, -0.03]);
    let rep = residual(&v, &s, &grid);
    assert_eq!(rep.excluded, 2);
    assert_eq!(rep.status, CheckStatus::Pass, "{rep:?}");
}

#[test]
fn wronskians() {
    let s = SchrodingerSolution::closed_form(c(1.0, 0.0), |x| c(x.sin(), 0.0), |x| c(x.cos(), 0.0));
    let co = SchrodingerSolution::closed_form(c(1.0, 0.0), |x| c(x.cos(), 0.0), |x| c(-x.sin(), 0.0));
    for x in linspace(-4.0, 4.0, 17) {
        assert!((wronskian(&s, &co, x) - c(-1.0, 0.0)).norm() < 1e-15);
    }
    // Abel: numeric solutions of the same equation
    let v = pt();
    let a = c(-1.7, 0.3);
    let u1 = integrate_schrodinger_span(&v, a, 0.0, c(1.0, 0.0), c(0.0, 0.0), -4.0, 4.0).unwrap();
    let u2 = integrate_schrodinger_span(&v, a, 0.0, c(0.0, 0.0), c(1.0, 0.0), -4.0, 4.0).unwrap();
    let w0 = wronskian(&u1, &u2, 0.0);
    for x in linspace(-4.0, 4.0, 81) {
        assert!((wronskian(&u1, &u2, x) - w0).norm() < 1e-8);
    }
}

#[test]
fn bloch_factor_of_plane_wave() {
    let u = SchrodingerSolution::closed_form(c(1.0, 0.0), |x| C64::new(0.0, x).exp(), |x| C64::new(0.0, x).exp() * C64::i());
    let est = bloch_factor(&u, 2.0 * std::f64::consts::PI, &linspace(0.0, 3.0, 7)).unwrap();
    assert!((est.beta - c(1.0, 0.0)).norm() < 1e-12);
    let not = SchrodingerSolution::closed_form(c(1.0, 0.0), |x| c(x.sin() + 0.5, 0.0), |x| c(x.cos(), 0.0));
    assert!(matches!(bloch_factor(&not, 1.0, &linspace(0.0, 3.0, 7)), Err(Error::NotBloch(_))));
}

#[test]
fn monodromy_of_free_particle() {
    let v = Potential::zero().with_period(1.0);
    let m = monodromy(&v, c(4.0, 0.0), 0.0, 1.0).unwrap();
    assert!((m.trace - c(2.0 * 2f64.cos(), 0.0)).norm() < 1e-10);
    assert!(m.is_allowed(1e-9));
    let m = monodromy(&v, c(-1.0, 0.0), 0.0, 1.0).unwrap();
    assert!((m.multipliers.1.norm() - 1f64.exp()).abs() < 1e-9);
    assert!(!m.is_allowed(1e-3));
}

#[test]
fn flagged_singularity_is_refused() {
    let v = Potential::new("pole", |z| (z * z).inv()).with_singularities(vec![0.5]);
    let r = integrate_schrodinger(&v, c(0.0, 0.0), 0.0, c(1.0, 0.0), c(0.0, 0.0), 1.0);
    assert!(matches!(r, Err(Error::SingularityInRange(x)) if x == 0.5));
}

#[test]
fn unflagged_singularity_underflows() {
    let v = Potential::new("hidden pole", |z| ((z - 0.5) * (z - 0.5)).inv() * 6.0);
    let r = integrate_schrodinger(&v, c(0.0, 0.0), 0.0, c(1.0, 0.0), c(0.0, 0.0), 1.0);
    match r {
        Err(Error::StepUnderflow(x)) => assert!((x - 0.5).abs() < 1e-2, "{x}"),
        other => panic!("expected underflow, got {other:?}"),
    }
}

#[test]
fn shift_fit_finds_known_shift() {
    let v0 = pt();
    let grid = linspace(-6.0, 6.0, 241);
    let v0c = v0.clone();
    let fit = shift_fit(&move |x| v0c.at(x + 0.37), &v0, &grid, (-2.0, 2.0), 80);
    assert!((fit.shift - 0.37).abs() < 1e-6);
    assert!(fit.is_displaced_copy());
    let other = |x: f64| c(-2.0 * sech2(x), 0.0);
    let fit = shift_fit(&other, &v0, &grid, (-2.0, 2.0), 80);
    assert!(!fit.is_displaced_copy());
}

#[test]
fn shifted_potential_and_jets() {
    let v = pt();
    let w = v.shifted(c(0.4, 0.0));
    assert!((w.at(0.1) - v.at(0.5)).norm() < 1e-15);
    let d1 = w.derivative(c(0.1, 0.0), 1).unwrap();
    let want = fd1(|x| v.at(x), 0.5, 1e-3);
    assert!((d1 - want).norm() < 1e-9);
    let poly = Potential::polynomial("x^2", vec![0.0, 0.0, 1.0]);
    assert!((poly.derivative(c(3.0, 0.0), 2).unwrap() - c(2.0, 0.0)).norm() < 1e-15);
    assert!(Potential::new("opaque", |z| z).jet(c(0.0, 0.0)).is_err());
}

#[test]
fn report_status_rules() {
    let r = VerificationReport::from_deviations("x", vec![0.0; 9], &[1e-9; 9], 1e-8, 2);
    assert_eq!(r.status, CheckStatus::Degenerate);
    assert!(!r.passed);
    let r = VerificationReport::from_deviations("x", vec![0.0; 9], &[1e-9; 9], 1e-8, 1);
    assert!(r.passed);
    let (r, mean) = VerificationReport::constancy("k", vec![0.0, 1.0], &[c(1.0, 0.0), c(1.0 + 1e-9, 0.0)], 1e-12, 1e-8, 0);
    assert!(r.passed && (mean.re - 1.0).abs() < 1e-9);
}
