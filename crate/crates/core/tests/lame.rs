mod common;

use common::{c, fd1, rel};
use darboux::darboux::{susy1_map, susy1_potential, susy2_potential};
use darboux::invariance::{default_grid, susy2_invariance_test};
use darboux::lame::*;
use darboux::operator::{
    bloch_factor, integrate_schrodinger_tol, linspace, monodromy, residual, residual_with_tol, shift_fit, Potential,
};
use darboux::soliton::{pt_d_min, pt_displacement_relations};
use darboux::{Lattice, C64};
use proptest::prelude::*;

fn lat() -> Lattice {
    Lattice::rectangular(1.0, 2.0).unwrap()
}

fn re(x: f64) -> C64 {
    c(x, 0.0)
}

// e₁, e₂, e₃ and g₂ for (ω, ω′) = (1, 2i) from an independent
// multiprecision evaluation.
const E1: f64 = 1.645_071_742_086;
const E2: f64 = -0.785_673_514_834;
const E3: f64 = -0.859_398_227_253;
const G2: f64 = 8.124_218_443_053;

// a₂ = −5 lies below E₀; its canonical displacement
const D_FAMILY: (f64, f64) = (0.924_082_491_297_5, 0.415_677_401_598_7);

#[test]
fn band_edges_interleave() {
    let ctx = LameContext::new(lat()).unwrap();
    let e = ctx.band_edges;
    let want = [-(3.0 * G2).sqrt(), 3.0 * E3, 3.0 * E2, 3.0 * E1, (3.0 * G2).sqrt()];
    for (a, b) in e.iter().zip(want) {
        assert!((a - b).abs() < 1e-9, "{e:?}");
    }
    assert!(e.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn potential_is_real_periodic_and_even() {
    let v = lame_potential(&lat());
    for &x in &linspace(-3.0, 3.0, 61) {
        let a = v.at(x);
        assert!(a.im.abs() < 1e-12 * (1.0 + a.re.abs()));
        assert!(rel(v.at(x + 2.0), a) < 1e-12);
        assert!(rel(v.at(-x), a) < 1e-12);
    }
}

#[test]
fn pair_relations() {
    let l = lat();
    for d in [re(1.3), re(0.995), c(0.4, 0.9), c(1.7, -0.3)] {
        let p = lame_displacement_pair(d, &l).unwrap();
        let w = l.wp(d).unwrap();
        assert!(rel(p.sum(), -w * 3.0) < 1e-12);
        let dd = p.difference();
        assert!(rel(dd * dd, (l.g2 - w * w * 3.0) * 9.0) < 1e-12);
        let a1s = lame_a1_of_a2(p.a2, &l);
        assert!(a1s.iter().any(|&a| rel(a, p.a1) < 1e-10), "{d}");
    }
}

fn sorted(p: darboux::invariance::DisplacementPair) -> [f64; 2] {
    assert!(p.a1.im.abs() < 1e-12 && p.a2.im.abs() < 1e-12);
    let mut v = [p.a1.re, p.a2.re];
    v.sort_by(f64::total_cmp);
    v
}

#[test]
fn pair_at_half_periods() {
    let l = lat();
    let p = lame_displacement_pair(l.omega, &l).unwrap();
    assert!((p.a2 - re(3.0 * E3)).norm() < 1e-9 && (p.a1 - re(3.0 * E2)).norm() < 1e-9);
    let q = sorted(lame_displacement_pair(l.omega_prime, &l).unwrap());
    assert!((q[0] - 3.0 * E2).abs() < 1e-9 && (q[1] - 3.0 * E1).abs() < 1e-9, "{q:?}");
    let r = sorted(lame_displacement_pair(l.omega + l.omega_prime, &l).unwrap());
    assert!((r[0] - 3.0 * E3).abs() < 1e-9 && (r[1] - 3.0 * E1).abs() < 1e-9, "{r:?}");
}

#[test]
fn real_range_endpoints_and_sweep() {
    let l = lat();
    let (dmin, dmax) = real_displacement_range(&l).unwrap();
    assert_eq!(dmax, 1.0);
    assert!(dmin > 0.9 && dmin < 1.0, "{dmin}");
    let p = lame_displacement_pair(re(dmin), &l).unwrap();
    let want = -(3.0 * G2).sqrt() / 2.0;
    assert!((p.a1 - re(want)).norm() < 1e-6 && (p.a2 - re(want)).norm() < 1e-6, "{p:?}");
    for d in linspace(dmin, dmax, 52).into_iter().skip(1).take(50) {
        let p = lame_displacement_pair(re(d), &l).unwrap();
        for a in [p.a1, p.a2] {
            assert!(a.im.abs() < 1e-12, "{d} {a}");
            assert!(a.re >= 3.0 * E3 - 1e-9 && a.re <= 3.0 * E2 + 1e-9, "{d} {a}");
        }
    }
    let outside = lame_displacement_pair(re(0.8), &l).unwrap();
    assert!(outside.difference().re.abs() < 1e-12 && outside.difference().im.abs() > 1e-3);
}

#[test]
fn d_of_a2_round_trip() {
    let l = lat();
    for a2 in [c(-5.0, 0.0), c(-6.0, 0.0), c(-2.5, 0.0), c(-2.0, 0.7)] {
        let (d, pair) = lame_d_of_a2(a2, &l).unwrap();
        let again = lame_displacement_pair(d, &l).unwrap();
        assert!((again.a2 - a2).norm() < 1e-9 * (1.0 + a2.norm()), "{a2} {d}");
        assert!((pair.a1 - again.a1).norm() < 1e-9);
        assert!(d.re >= 0.0);
    }
    let (d, _) = lame_d_of_a2(re(-5.0), &l).unwrap();
    assert!((d - c(D_FAMILY.0, D_FAMILY.1)).norm() < 1e-9, "{d}");
}

#[test]
fn quartic_identity_and_p_relations() {
    let l = lat();
    let v = lame_potential(&l);
    for d in [re(1.3), c(0.4, 0.9)] {
        let w0 = l.wp(d).unwrap();
        for &x in &linspace(0.05, 1.95, 60) {
            let z = re(x);
            assert!(quartic_identity_residual(d, &l, z).unwrap() < 1e-9, "{d} {x}");
            let (a, b) = (v.jet(z).unwrap(), v.jet(z + d).unwrap());
            let (s, dd) = (a + b, a - b);
            let q = s.deriv() / dd;
            let rhs = s.value() * (2.0 / 3.0) + w0 * 4.0;
            assert!(rel(q.value() * q.value(), rhs) < 1e-9, "{d} {x}");
            assert!((q.derivative(1) / dd.value() - re(1.0 / 3.0)).norm() < 1e-7, "{d} {x}");
            // p = 3S′/D on this branch
            let p = lame_p_jet(d, &l, z).unwrap().value();
            assert!(rel(p * p, q.value() * q.value() * 9.0) < 1e-9);
        }
    }
}

#[test]
fn invariance_sum_tracks_wp() {
    let l = lat();
    let v0 = lame_potential(&l);
    let d = re(1.3);
    let (rep, sum) = susy2_invariance_test(&v0, d, &default_grid(&v0)).unwrap();
    assert!(rep.passed, "{rep:?}");
    assert!(rel(sum, -l.wp(d).unwrap() * 3.0) < 1e-8, "{sum}");
}

#[test]
fn quadrature_data_zeros() {
    let l = lat();
    for d in [re(1.3), re(0.995), c(0.4, 0.9), c(D_FAMILY.0, D_FAMILY.1)] {
        let q = bloch_quadrature_data(d, &l).unwrap();
        let w = l.omega_prime;
        let root = (l.g2 - q.wp0 * q.wp0 * 3.0).sqrt();
        assert!(rel(q.root * q.root, root * root) < 1e-10);
        let t = [(-q.wp0 + root) * 0.5, (-q.wp0 - root) * 0.5];
        let (t1, t2) = (l.wp(q.x1 + w).unwrap(), l.wp(q.x2 + w).unwrap());
        assert!(rel(t1 + t2, -q.wp0) < 1e-9 && rel(t1 * t2, t[0] * t[1]) < 1e-9, "{d}");
        assert!(q.p(&l, q.x1).unwrap().norm() < 1e-8 && q.p(&l, q.x2).unwrap().norm() < 1e-8);
        let (r1, r2) = q.residues(&l).unwrap();
        let want = (q.root * 6.0).inv();
        assert!(rel(r1, want) < 1e-8 && rel(r2, -want) < 1e-8, "{d} {r1} {r2} {want}");
        // the zeros sum to −d modulo periods
        let (s, t) = l.coordinates(q.x1 + q.x2 + d);
        assert!((s - s.round()).abs() < 1e-9 && (t - t.round()).abs() < 1e-9);
        // residue from a small contour around x₁
        let n = 64;
        let mut acc = c(0.0, 0.0);
        for k in 0..n {
            let th = 2.0 * std::f64::consts::PI * (k as f64 + 0.5) / n as f64;
            let e = C64::from_polar(0.01, th);
            acc += e / q.p(&l, q.x1 + e).unwrap();
        }
        assert!(rel(acc / n as f64, want) < 1e-8);
    }
}

#[test]
fn quadrature_data_at_half_period() {
    let l = lat();
    let q = bloch_quadrature_data(l.omega, &l).unwrap();
    assert!((q.x1 - l.omega).norm() < 1e-9, "{q:?}");
    assert!((q.x2 + l.omega_prime * 2.0).norm() < 1e-9, "{q:?}");
}

#[test]
fn zeta_decomposition_of_inverse_p() {
    let l = lat();
    for d in [re(1.3), c(0.4, 0.9)] {
        let q = bloch_quadrature_data(d, &l).unwrap();
        for &x in &linspace(0.05, 1.95, 40) {
            let z = re(x);
            let lhs = (q.a1 - q.a2) / q.p(&l, z).unwrap();
            assert!(rel(lhs, q.zeta_decomposition(&l, z).unwrap()) < 1e-8, "{d} {x}");
        }
    }
}

#[test]
fn bloch_functions_solve_the_equation() {
    let l = lat();
    let v0 = lame_potential(&l);
    let grid = linspace(0.1, 1.9, 80);
    for d in [re(1.3), c(0.4, 0.9), l.omega] {
        let b = LameBloch::new(d, &l).unwrap();
        for u in [b.u2_minus(), b.u2_plus(), b.u1_minus(), b.u1_plus()] {
            let rep = residual(&v0, &u, &grid);
            assert!(rep.passed && rep.max_abs_dev < 1e-6, "{d} {} {rep:?}", u.label());
            for &x in &[0.23, 1.41] {
                let fd = fd1(|t| u.eval(t), x, 1e-3);
                assert!(rel(u.eval_deriv(x), fd) < 1e-8, "{d} {}", u.label());
            }
        }
        assert_eq!(b.u2_minus().eigenvalue(), b.data.a2);
        assert_eq!(b.u1_plus().eigenvalue(), b.data.a1);
    }
}

#[test]
fn bloch_function_matches_integrated_solution() {
    let l = lat();
    let v0 = lame_potential(&l);
    let b = LameBloch::new(re(1.3), &l).unwrap();
    let u = b.u2_minus();
    let x0 = 0.2;
    let num = integrate_schrodinger_tol(&v0, u.eigenvalue(), x0, u.eval(x0), u.eval_deriv(x0), 4.2, 1e-13).unwrap();
    for &x in &[0.9, 2.1, 3.3, 4.2] {
        assert!(rel(num.eval(x), u.eval(x)) < 1e-8, "{x}");
    }
}

#[test]
fn product_identities() {
    let l = lat();
    for d in [re(1.3), c(0.4, 0.9), c(D_FAMILY.0, D_FAMILY.1)] {
        let b = LameBloch::new(d, &l).unwrap();
        let w = l.omega_prime;
        let zd = l.zeta(d).unwrap();
        for &x in &linspace(0.05, 1.95, 39) {
            let z = re(x);
            let p = b.data.p(&l, z).unwrap();
            assert!((b.u2_minus_at(z) * b.u2_plus_at(z + d) - p).norm() < 1e-10 * (1.0 + p.norm()), "{d} {x}");
            assert!((b.u1_plus_at(z) * b.u1_minus_at(z + d) - p).norm() < 1e-10 * (1.0 + p.norm()), "{d} {x}");
            let ratio = (l.sigma(z + w) / l.sigma(z + w + d)).powi(3) * (zd * 3.0 * x).exp();
            assert!(rel(b.u1_minus_at(z + d), b.u2_minus_at(z) * ratio) < 1e-10, "{d} {x}");
        }
        assert!((b.u2_minus().eval(b.x_ref) - re(1.0)).norm() < 1e-14);
    }
}

#[test]
fn root_form_agrees_with_product_form() {
    let l = lat();
    for d in [re(1.3), c(0.4, 0.9)] {
        let u = LameBloch::new(d, &l).unwrap().u2_minus();
        let r = u2_minus_from_root(d, &l, 0.17, -4.0, 4.0).unwrap();
        let k = r.eval(0.17) / u.eval(0.17);
        for &x in &linspace(-3.9, 3.9, 57) {
            assert!(rel(r.eval(x), u.eval(x) * k) < 1e-9, "{d} {x}");
            assert!(rel(r.eval_deriv(x), u.eval_deriv(x) * k) < 1e-8, "{d} {x}");
        }
    }
}

#[test]
fn monodromy_matches_closed_form() {
    let l = lat();
    let v0 = lame_potential(&l);
    for d in [re(1.3), re(0.995), c(0.4, 0.9), c(D_FAMILY.0, D_FAMILY.1)] {
        let b = LameBloch::new(d, &l).unwrap();
        let beta = b.multiplier();
        let formula = b.data.monodromy_formula(&l).unwrap();
        assert!(rel(beta, formula) < 1e-7, "{d} {beta} {formula}");
        let est = bloch_factor(&b.u2_minus(), 2.0, &linspace(0.1, 1.9, 19)).unwrap();
        assert!(rel(est.beta, beta) < 1e-9, "{d}");
        let m = monodromy(&v0, b.data.a2, 0.0, 2.0).unwrap();
        let near = rel(m.multipliers.0, beta).min(rel(m.multipliers.1, beta));
        assert!(near < 1e-7, "{d} {m:?} {beta}");
        let bp = b.u2_plus().bloch_factor().unwrap();
        assert!(rel(bp * beta, re(1.0)) < 1e-9);
    }
}

#[test]
fn band_edge_solution_is_antiperiodic() {
    let l = lat();
    let b = LameBloch::new(l.omega, &l).unwrap();
    assert!((b.data.a2 - re(3.0 * E3)).norm() < 1e-9);
    assert!((b.multiplier() - re(-1.0)).norm() < 1e-8);
    assert!((b.data.monodromy_formula(&l).unwrap() - re(-1.0)).norm() < 1e-8);
    let u = b.u2_minus();
    for &x in &[0.1, 0.7, 1.3] {
        assert!((u.eval(x + 2.0) + u.eval(x)).norm() < 1e-9 * (1.0 + u.eval(x).norm()));
    }
}

#[test]
fn gap_solution_is_not_unimodular() {
    let l = lat();
    let (dmin, dmax) = real_displacement_range(&l).unwrap();
    let b = LameBloch::new(re(0.5 * (dmin + dmax)), &l).unwrap();
    assert!(b.data.a2.re > 3.0 * E3 && b.data.a2.re < 3.0 * E2);
    assert!((b.multiplier().norm() - 1.0).abs() > 1e-3, "{}", b.multiplier());
}

#[test]
fn full_displacement_from_bloch_pair() {
    let l = lat();
    let v0 = lame_potential(&l);
    for d in [re(1.3), c(0.4, 0.9)] {
        let b = LameBloch::new(d, &l).unwrap();
        let v2 = susy2_potential(&v0, &b.u1_plus(), &b.u2_minus()).unwrap();
        let worst = linspace(0.0, 2.0, 200)
            .into_iter()
            .map(|x| (v2.at(x) - v0.eval(re(x) + d)).norm())
            .fold(0.0, f64::max);
        assert!(worst < 1e-7, "{d} {worst}");
    }
}

#[test]
fn jacobi_edges() {
    let j = jacobi_band_edges(&lat()).unwrap();
    let m = (E2 - E3) / (E1 - E3);
    assert!((j.m - m).abs() < 1e-9);
    assert!((j.edges[1] - (m + 1.0)).abs() < 1e-9);
    assert!((j.edges[2] - (4.0 * m + 1.0)).abs() < 1e-9);
    assert!((j.edges[3] - (m + 4.0)).abs() < 1e-9);
    assert!(j.max_deviation() < 1e-9, "{j:?}");
    assert!(j.delta >= 3f64.sqrt() / 2.0);
    // δ is smallest, √3/2, at m = ½: the square lattice
    let js = jacobi_band_edges(&Lattice::rectangular(1.0, 1.0).unwrap()).unwrap();
    assert!((js.m - 0.5).abs() < 1e-9 && (js.delta - 3f64.sqrt() / 2.0).abs() < 1e-9, "{js:?}");
}

fn allowed(v0: &Potential, e: f64) -> bool {
    monodromy(v0, re(e), 0.0, 2.0).unwrap().is_allowed(1e-6)
}

fn interior(a: f64, b: f64) -> Vec<f64> {
    let a = if a.is_finite() { a } else { b - 3.0 };
    let b = if b.is_finite() { b } else { a + 6.0 };
    (1..=5).map(|k| a + (b - a) * k as f64 / 6.0).collect()
}

#[test]
fn bands_and_gaps_from_monodromy() {
    let ctx = LameContext::new(lat()).unwrap();
    for (a, b) in ctx.bands() {
        for e in interior(a, b) {
            assert!(allowed(&ctx.potential, e), "band energy {e}");
        }
    }
    for (a, b) in ctx.gaps() {
        for e in interior(a, b) {
            assert!(!allowed(&ctx.potential, e), "gap energy {e}");
        }
    }
}

#[test]
fn soliton_degeneration() {
    for d in [re(1.7), re(2.2), c(0.9, 0.4)] {
        let lame = soliton_limit_pair(d, 20.0).unwrap();
        let pt = pt_displacement_relations(d).unwrap().primary;
        assert!((lame.sum() - pt.sum()).norm() < 1e-4, "{d} {lame:?} {pt:?}");
        let (dl, dp) = (lame.difference(), pt.difference());
        assert!((dl * dl - dp * dp).norm() < 1e-4, "{d}");
    }
    let l = Lattice::rectangular(20.0, std::f64::consts::FRAC_PI_2).unwrap();
    let (dmin, _) = real_displacement_range(&l).unwrap();
    assert!((dmin - pt_d_min()).abs() < 1e-4, "{dmin}");
}

/// −2[p′/2p + p/4 + (a₁−a₂)/p]′ from jets of p alone.
fn p_route_delta_v(m: &FamilyMember, l: &Lattice, z: C64) -> C64 {
    let p = lame_p_jet(m.pair.d, l, z).unwrap();
    let k = m.pair.a1 - m.pair.a2;
    let lj = p.deriv() / (p * 2.0) + p * 0.25 + p.recip() * k;
    lj.deriv().value() * -2.0
}

#[test]
fn family_delta_v_matches_log_derivative() {
    let l = lat();
    for a2 in [-5.0, -6.0, -5.2] {
        let m = two_gap_family(re(a2), &l).unwrap();
        assert!(m.warning.is_none());
        let u = m.bloch.u2_minus();
        for &x in &linspace(0.0, 2.0, 41) {
            let z = re(x);
            let got = m.delta_v.eval(z);
            assert!(rel(got, p_route_delta_v(&m, &l, z)) < 1e-8, "{a2} {x}");
            let fd = fd1(|t| u.log_derivative(t), x, 1e-3) * -2.0;
            assert!(rel(got, fd) < 1e-7, "{a2} {x}");
        }
    }
}

#[test]
fn family_matches_first_order_partner() {
    let l = lat();
    let v0 = lame_potential(&l);
    let m = two_gap_family(re(-5.0), &l).unwrap();
    let v1 = susy1_potential(&v0, &m.bloch.u2_minus());
    for &x in &linspace(-2.0, 2.0, 41) {
        assert!(rel(m.potential.at(x), v1.at(x)) < 1e-8, "{x}");
    }
}

#[test]
fn swapped_pole_terms_do_not_match() {
    let l = lat();
    let m = two_gap_family(re(-5.0), &l).unwrap();
    let q = m.bloch.data;
    let worst = linspace(0.0, 2.0, 21)
        .into_iter()
        .map(|x| {
            let z = re(x);
            let swap = (l.wp(z - q.x1).unwrap() - l.wp(z - q.x2).unwrap()) * 2.0;
            rel(m.delta_v.eval(z) - swap, p_route_delta_v(&m, &l, z))
        })
        .fold(0.0, f64::max);
    assert!(worst > 1e-2, "{worst}");
}

#[test]
fn family_members_are_real_and_periodic() {
    let l = lat();
    for a2 in [-5.0, -6.0] {
        let m = two_gap_family(re(a2), &l).unwrap();
        for &x in &linspace(-2.0, 2.0, 81) {
            let v = m.potential.at(x);
            assert!(v.im.abs() < 1e-10 * (1.0 + v.re.abs()), "{a2} {x} {v}");
            assert!(rel(m.potential.at(x + 2.0), v) < 1e-10);
        }
        let beta = m.bloch.multiplier();
        assert!(beta.im.abs() < 1e-10 && (beta.norm() - 1.0).abs() > 1e-3, "{beta}");
    }
}

#[test]
fn family_members_are_invariant() {
    let l = lat();
    let m = two_gap_family(re(-5.0), &l).unwrap();
    for d in [0.7, 1.3] {
        let (rep, _) = susy2_invariance_test(&m.potential, re(d), &linspace(0.0, 2.0, 200)).unwrap();
        assert!(rep.passed, "{d} {rep:?}");
    }
}

#[test]
fn family_members_are_close_to_but_not_displaced_copies() {
    let l = lat();
    let v0 = lame_potential(&l);
    let grid = linspace(0.0, 2.0, 401);
    for a2 in [-5.0, -6.0] {
        let m = two_gap_family(re(a2), &l).unwrap();
        let fit = shift_fit(&|x| m.potential.at(x), &v0, &grid, (0.0, 2.0), 200);
        assert!(!fit.is_displaced_copy(), "{fit:?}");
        assert!(fit.relative() > 1e-4 && fit.relative() < 1e-3, "{fit:?}");
    }
}

#[test]
fn warning_above_lowest_edge() {
    let l = lat();
    let m = two_gap_family(re(-4.0), &l).unwrap();
    assert!(m.warning.is_some());
    let m = two_gap_family(c(-5.0, 0.3), &l).unwrap();
    assert!(m.warning.is_some());
}

#[test]
fn perturbed_periodic_potential_properties() {
    let l = lat();
    let v0 = lame_potential(&l);
    let pp = perturbed_periodic_potential(re(-5.2), re(0.5), &l).unwrap();
    let u = &pp.transformation;
    for &x in &linspace(-10.0, 10.0, 201) {
        let v = pp.potential.at(x);
        assert!(v.re.is_finite() && v.im.abs() < 1e-9 * (1.0 + v.re.abs()), "{x} {v}");
        assert!(u.eval(x).re > 0.0);
    }
    let rep = residual(&v0, u, &linspace(-5.0, 5.0, 60));
    assert!(rep.passed, "{rep:?}");
    let k = &pp.bound_state;
    for s in [1.0, -1.0] {
        let (k0, k1, k2) = (k.eval(0.0).norm(), k.eval(10.0 * s).norm(), k.eval(20.0 * s).norm());
        assert!(k1 < 5e-2 * k0 && k2 < 5e-2 * k1, "{k0} {k1} {k2}");
    }
    // Far out one Bloch solution dominates. V₀ is even, so u₂⁺(x) ∝ u₂⁻(−x)
    // and the two tails are the family member and its mirror image.
    let v1 = &pp.member.potential;
    let (left, right) = if pp.member.bloch.multiplier().norm() < 1.0 { (1.0, -1.0) } else { (-1.0, 1.0) };
    for &x in &[14.1, 15.6, 16.3] {
        assert!((pp.potential.at(-x) - v1.at(-left * x)).norm() < 1e-5, "{x}");
        assert!((pp.potential.at(x) - v1.at(right * x)).norm() < 1e-5, "{x}");
    }
}

#[test]
fn perturbed_with_zero_coefficient_is_the_family_member() {
    let pp = perturbed_periodic_potential(re(-5.2), re(0.0), &lat()).unwrap();
    for &x in &linspace(-2.0, 2.0, 21) {
        assert!(rel(pp.potential.at(x), pp.member.potential.at(x)) < 1e-9, "{x}");
    }
}

#[test]
fn perturbed_partner_solutions() {
    let l = lat();
    let pp = perturbed_periodic_potential(re(-5.2), re(0.5), &l).unwrap();
    let other = LameBloch::new(re(1.3), &l).unwrap().u2_minus();
    let mapped = susy1_map(&pp.transformation, &other).unwrap();
    let rep = residual_with_tol(&pp.potential, &mapped, &linspace(-3.0, 3.0, 40), 1e-6);
    assert!(rep.passed, "{rep:?}");
    let rep = residual_with_tol(&pp.potential, &pp.bound_state, &linspace(-3.0, 3.0, 40), 1e-6);
    assert!(rep.passed, "{rep:?}");
}

#[test]
fn node_is_reported() {
    assert!(matches!(
        perturbed_periodic_potential(re(-5.2), re(-0.5), &lat()),
        Err(darboux::Error::Node(_))
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn product_identity_for_random_displacements(dr in 0.2f64..1.8, di in -1.5f64..1.5) {
        let l = lat();
        let d = c(dr, di);
        prop_assume!(lame_displacement_pair(d, &l).map(|p| p.difference().norm() > 1e-3).unwrap_or(false));
        let b = LameBloch::new(d, &l).unwrap();
        for &x in &[0.13, 0.81, 1.57] {
            let z = re(x);
            let p = b.data.p(&l, z).unwrap();
            prop_assert!((b.u2_minus_at(z) * b.u2_plus_at(z + d) - p).norm() < 1e-9 * (1.0 + p.norm()));
        }
        prop_assert!(rel(b.multiplier(), b.data.monodromy_formula(&l).unwrap()) < 1e-7);
    }

    #[test]
    fn pair_sum_is_minus_three_wp(dr in 0.2f64..1.8, di in -1.5f64..1.5) {
        let l = lat();
        let d = c(dr, di);
        let p = lame_displacement_pair(d, &l).unwrap();
        prop_assert!(rel(p.sum(), -l.wp(d).unwrap() * 3.0) < 1e-12);
    }
}

#[test]
fn both_branches_over_the_real_range() {
    let lattice = Lattice::rectangular(1.0, 2.0).unwrap();
    let (dmin, dmax) = real_displacement_range(&lattice).unwrap();
    for a2 in [3.0 * E3 + 1e-3, -2.55, -2.5, -(3.0 * G2).sqrt() / 2.0 - 1e-4] {
        let found = lame_displacements_of_a2(C64::new(a2, 0.0), &lattice);
        assert_eq!(found.len(), 2, "{a2}");
        let real: Vec<_> = found.iter().filter(|(d, _)| d.im.abs() < 1e-9).collect();
        assert_eq!(real.len(), 1, "{a2} {found:?}");
        let (d, pair) = real[0];
        assert!(d.re >= dmin - 1e-6 && d.re <= dmax + 1e-6, "{a2} {d}");
        assert!(pair.a1.im.abs() < 1e-9 && pair.a1.re >= 3.0 * E3 && pair.a1.re <= 3.0 * E2 + 1e-9, "{pair:?}");
        for (d, pair) in &found {
            assert!((lattice.wp(*d).unwrap() * -3.0 - pair.a1 - pair.a2).norm() < 1e-9);
        }
    }
}
