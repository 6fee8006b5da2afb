use anyhow::Result;
use clap::Args;
use darboux::darboux::susy2_potential;
use darboux::lame::{
    lame_d_of_a2, lame_displacements_of_a2, perturbed_periodic_potential, real_displacement_range, two_gap_family, LameBloch, LameContext,
};
use darboux::operator::{shift_fit, Potential, SchrodingerSolution, VerificationReport};
use darboux::soliton::{
    pt_d_min, pt_d_of_a2, pt_delta_v, pt_displacement_relations, pt_family, pt_u1_plus, pt_u2_minus,
};
use darboux::suite::{all_passed, run_suite, SuiteConfig, SuiteFamily};
use darboux::{Settings, C64};
use serde_json::json;

use crate::config::{parse_complex, parse_grid, Common, Family, Format, Grid};
use crate::table::{complex, num, Cell, Kind, Table};
use crate::usage;

/// Rendered output and whether the command's checks passed.
pub struct Outcome {
    pub text: String,
    pub ok: bool,
}

impl Outcome {
    fn table(t: &Table, format: Format, ok: bool) -> Self {
        let text = match format {
            Format::Csv => t.to_csv(),
            Format::Json => t.to_json(),
        };
        Self { text, ok }
    }
}

fn header(command: &str, common: &Common) -> Table {
    let mut t = Table::new(command);
    for (k, v) in common.describe() {
        t.meta(&k, v);
    }
    t
}

fn cplx(z: C64) -> Cell {
    Cell::Complex(z)
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub common: Common,
    /// Eigenvalue of the transformation function u₂⁻.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub a2: Option<C64>,
    /// Use u = u₂⁻ + coef·u₂⁺ (Lamé only).
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub coef: Option<C64>,
}

/// V₁, ΔV and the transformation function.
struct Partner {
    v1: Potential,
    dv: Potential,
    u: SchrodingerSolution,
}

fn sum_potential(label: &str, a: &Potential, b: &Potential) -> Potential {
    let (a, b) = (a.clone(), b.clone());
    Potential::new(label, move |z| a.eval(z) + b.eval(z))
}

fn diff_potential(label: &str, a: &Potential, b: &Potential) -> Potential {
    let (a, b) = (a.clone(), b.clone());
    Potential::new(label, move |z| a.eval(z) - b.eval(z))
}

pub fn eval(args: &EvalArgs) -> Result<Outcome> {
    let c = &args.common;
    let v0 = c.potential()?;
    let mut t = header("eval", c);
    let partner = match (c.family, args.a2) {
        (_, None) => {
            if args.coef.is_some() {
                return Err(usage("--coef needs --a2"));
            }
            None
        }
        (Family::Lame, Some(a2)) => {
            let lattice = c.lattice()?;
            t.meta("a2", complex(a2));
            if let Some(coef) = args.coef {
                let pp = perturbed_periodic_potential(a2, coef, &lattice)?;
                t.meta("coef", complex(coef));
                t.meta("a1", complex(pp.member.pair.a1));
                t.meta("d", complex(pp.member.pair.d));
                t.meta("bound_state_energy", complex(pp.bound_state.eigenvalue()));
                let dv = diff_potential("dV", &pp.potential, &v0);
                Some(Partner { v1: pp.potential, dv, u: pp.transformation })
            } else {
                let m = two_gap_family(a2, &lattice)?;
                t.meta("a1", complex(m.pair.a1));
                t.meta("d", complex(m.pair.d));
                if let Some(w) = &m.warning {
                    t.meta("warning", w.clone());
                }
                Some(Partner { u: m.bloch.u2_minus(), v1: m.potential, dv: m.delta_v })
            }
        }
        (Family::PoschlTeller, Some(a2)) => {
            if args.coef.is_some() {
                return Err(usage("--coef is only supported for the lame family"));
            }
            let d = pt_d_of_a2(a2)?;
            let rel = pt_displacement_relations(d)?.primary;
            t.meta("a2", complex(a2));
            t.meta("a1", complex(rel.a1));
            t.meta("d", complex(d));
            let dv = pt_delta_v(d)?;
            Some(Partner { v1: sum_potential("V1", &v0, &dv), dv, u: pt_u2_minus(d)? })
        }
        (_, Some(_)) => return Err(usage("--a2 is only supported for the lame and poschl-teller families")),
    };
    t.column("x", Kind::Real);
    t.column("V0", Kind::Complex);
    if partner.is_some() {
        t.column("V1", Kind::Complex);
        t.column("dV", Kind::Complex);
        t.column("u", Kind::Complex);
    }
    for x in c.grid.points() {
        let mut row = vec![Cell::Real(x), cplx(v0.at(x))];
        if let Some(p) = &partner {
            row.extend([cplx(p.v1.at(x)), cplx(p.dv.at(x)), cplx(p.u.eval(x))]);
        }
        t.grid_row(x, row);
    }
    Ok(Outcome::table(&t, c.format_or(Format::Csv), true))
}

#[derive(Debug, Clone, Args)]
pub struct BlochArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub d: Option<C64>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, conflicts_with = "d")]
    pub a2: Option<C64>,
}

pub fn bloch(args: &BlochArgs) -> Result<Outcome> {
    let c = &args.common;
    let v0 = c.potential()?;
    let mut t = header("bloch", c);
    t.column("x", Kind::Real);
    t.column("V0", Kind::Complex);
    let sols: Vec<SchrodingerSolution> = match c.family {
        Family::Lame => {
            let lattice = c.lattice()?;
            let d = match (args.d, args.a2) {
                (_, Some(a2)) => lame_d_of_a2(a2, &lattice)?.0,
                (Some(d), None) => d,
                (None, None) => C64::new(1.3, 0.0),
            };
            let b = LameBloch::new(d, &lattice)?;
            t.meta("d", complex(d));
            t.meta("a1", complex(b.data.a1));
            t.meta("a2", complex(b.data.a2));
            t.meta("x1", complex(b.data.x1));
            t.meta("x2", complex(b.data.x2));
            t.meta("multiplier", complex(b.multiplier()));
            t.meta("multiplier_formula", complex(b.data.monodromy_formula(&lattice)?));
            for name in ["u2_minus", "u2_plus", "u1_minus", "u1_plus"] {
                t.column(name, Kind::Complex);
            }
            vec![b.u2_minus(), b.u2_plus(), b.u1_minus(), b.u1_plus()]
        }
        Family::PoschlTeller => {
            let d = match (args.d, args.a2) {
                (_, Some(a2)) => pt_d_of_a2(a2)?,
                (Some(d), None) => d,
                (None, None) => C64::new(1.7, 0.0),
            };
            let rel = pt_displacement_relations(d)?.primary;
            t.meta("d", complex(d));
            t.meta("a1", complex(rel.a1));
            t.meta("a2", complex(rel.a2));
            t.column("u2_minus", Kind::Complex);
            t.column("u1_plus", Kind::Complex);
            vec![pt_u2_minus(d)?, pt_u1_plus(d)?]
        }
        _ => return Err(usage("bloch supports the lame and poschl-teller families")),
    };
    for x in c.grid.points() {
        let mut row = vec![Cell::Real(x), cplx(v0.at(x))];
        row.extend(sols.iter().map(|u| cplx(u.eval(x))));
        t.grid_row(x, row);
    }
    Ok(Outcome::table(&t, c.format_or(Format::Csv), true))
}

#[derive(Debug, Clone, Args)]
pub struct DisplaceArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub d: Option<C64>,
}

/// Builds V₂ from u₁⁺, u₂⁻ and compares it with V₀(x+d).
pub fn displace(args: &DisplaceArgs) -> Result<Outcome> {
    let c = &args.common;
    let v0 = c.potential()?;
    let mut t = header("displace", c);
    let (d, u1, u2) = match c.family {
        Family::Lame => {
            let d = args.d.unwrap_or(C64::new(1.3, 0.0));
            let b = LameBloch::new(d, &c.lattice()?)?;
            (d, b.u1_plus(), b.u2_minus())
        }
        Family::PoschlTeller => {
            let d = args.d.unwrap_or(C64::new(1.0, 0.0));
            (d, pt_u1_plus(d)?, pt_u2_minus(d)?)
        }
        _ => return Err(usage("displace needs closed-form transformation functions: lame or poschl-teller")),
    };
    let v2 = susy2_potential(&v0, &u1, &u2)?;
    let tol = Settings::default().tol(1e-7);
    t.meta("d", complex(d));
    t.meta("a1", complex(u1.eigenvalue()));
    t.meta("a2", complex(u2.eigenvalue()));
    for (name, kind) in [("x", Kind::Real), ("V0", Kind::Complex), ("V0_shifted", Kind::Complex), ("V2", Kind::Complex), ("deviation", Kind::Real)] {
        t.column(name, kind);
    }
    let mut worst: f64 = 0.0;
    for x in c.grid.points() {
        let (a, b) = (v0.eval(C64::new(x, 0.0) + d), v2.at(x));
        let dev = (a - b).norm();
        if dev.is_finite() {
            worst = worst.max(dev);
        }
        t.grid_row(x, vec![Cell::Real(x), cplx(v0.at(x)), cplx(a), cplx(b), Cell::Real(dev)]);
    }
    let ok = worst <= tol && t.rows.len() >= 2;
    t.meta("max_deviation", num(worst));
    t.meta("tolerance", num(tol));
    t.meta("passed", ok.to_string());
    Ok(Outcome::table(&t, c.format_or(Format::Csv), ok))
}

#[derive(Debug, Clone, Args)]
pub struct MapArgs {
    #[command(flatten)]
    pub common: Common,
    /// a2_min:a2_max:n_points; defaults to the real-displacement range.
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    pub a2_grid: Option<Grid>,
}

fn tag(d: C64) -> &'static str {
    if d.im.abs() <= 1e-9 * (1.0 + d.norm()) {
        "real"
    } else {
        "complex"
    }
}

pub fn displacement_map(args: &MapArgs) -> Result<Outcome> {
    let c = &args.common;
    let mut t = header("displacement-map", c);
    t.column("a2", Kind::Real);
    t.column("a1", Kind::Complex);
    t.column("d", Kind::Complex);
    t.column("branch", Kind::Text);
    let text = |s: &str| Cell::Text(s.to_string());
    match c.family {
        Family::Lame => {
            let lattice = c.lattice()?;
            let ctx = LameContext::new(lattice)?;
            let (dmin, dmax) = real_displacement_range(&lattice)?;
            let top = ctx.band_edges[0] / 2.0;
            let grid = args.a2_grid.unwrap_or(Grid { x_min: ctx.band_edges[1], x_max: top, n: 21 });
            t.meta("d_min", num(dmin));
            t.meta("d_max", num(dmax));
            for a2 in grid.points() {
                let found = lame_displacements_of_a2(C64::new(a2, 0.0), &lattice);
                if found.is_empty() {
                    t.excluded.push(a2);
                }
                for (d, pair) in found {
                    t.grid_row(a2, vec![Cell::Real(a2), cplx(pair.a1), cplx(d), text(tag(d))]);
                }
            }
            t.rows.push(vec![Cell::Real(top), cplx(C64::new(top, 0.0)), cplx(C64::new(dmin, 0.0)), text("d_min")]);
            t.rows.push(vec![
                Cell::Real(ctx.band_edges[1]),
                cplx(C64::new(ctx.band_edges[2], 0.0)),
                cplx(C64::new(dmax, 0.0)),
                text("d_max"),
            ]);
        }
        Family::PoschlTeller => {
            let grid = args.a2_grid.unwrap_or(Grid { x_min: -3.95, x_max: -1.05, n: 30 });
            t.meta("d_min", num(pt_d_min()));
            t.meta("d_max", "inf");
            for a2 in grid.points() {
                let z = C64::new(a2, 0.0);
                let row = pt_d_of_a2(z).and_then(|d| {
                    let rel = pt_displacement_relations(d)?;
                    let pair = if (rel.primary.a2 - z).norm() <= (rel.swapped.a2 - z).norm() { rel.primary } else { rel.swapped };
                    Ok(vec![Cell::Real(a2), cplx(pair.a1), cplx(d), text(tag(d))])
                });
                match row {
                    Ok(r) => t.grid_row(a2, r),
                    Err(_) => t.excluded.push(a2),
                }
            }
            t.rows.push(vec![Cell::Real(-3.0), cplx(C64::new(-3.0, 0.0)), cplx(C64::new(pt_d_min(), 0.0)), text("d_min")]);
            t.rows.push(vec![Cell::Real(-4.0), cplx(C64::new(-1.0, 0.0)), cplx(C64::new(f64::INFINITY, 0.0)), text("d_max")]);
        }
        _ => return Err(usage("displacement-map supports the lame and poschl-teller families")),
    }
    Ok(Outcome::table(&t, c.format_or(Format::Csv), true))
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    #[command(flatten)]
    pub common: Common,
    /// Member eigenvalues; repeat for several members.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub a2: Vec<C64>,
}

pub fn family(args: &FamilyArgs) -> Result<Outcome> {
    let c = &args.common;
    let v0 = c.potential()?;
    let mut t = header("family", c);
    let grid = c.grid.points();
    let (members, fit_range): (Vec<(C64, Potential)>, (f64, f64)) = match c.family {
        Family::Lame => {
            let lattice = c.lattice()?;
            let a2s = if args.a2.is_empty() { vec![C64::new(-5.0, 0.0), C64::new(-6.0, 0.0)] } else { args.a2.clone() };
            let mut out = Vec::new();
            for (k, a2) in a2s.into_iter().enumerate() {
                let m = two_gap_family(a2, &lattice)?;
                t.meta(&format!("member{k}_a1"), complex(m.pair.a1));
                t.meta(&format!("member{k}_d"), complex(m.pair.d));
                if let Some(w) = &m.warning {
                    t.meta(&format!("member{k}_warning"), w.clone());
                }
                out.push((a2, m.potential));
            }
            (out, (0.0, lattice.real_period()))
        }
        Family::PoschlTeller => {
            let a2s = if args.a2.is_empty() { vec![C64::new(-4.1, 0.0)] } else { args.a2.clone() };
            let mut out = Vec::new();
            for a2 in a2s {
                if a2.im != 0.0 {
                    return Err(usage("poschl-teller family members need real a2"));
                }
                out.push((a2, pt_family(a2.re)?));
            }
            (out, (c.grid.x_min, c.grid.x_max))
        }
        _ => return Err(usage("family supports the lame and poschl-teller families")),
    };
    t.column("x", Kind::Real);
    t.column("V0", Kind::Complex);
    for (k, (a2, v1)) in members.iter().enumerate() {
        t.meta(&format!("member{k}_a2"), complex(*a2));
        let fit = shift_fit(&|x| v1.at(x), &v0, &grid, fit_range, 200);
        t.meta(&format!("member{k}_shift"), num(fit.shift));
        t.meta(&format!("member{k}_shift_fit_relative"), num(fit.relative()));
        t.column(format!("V1_{k}"), Kind::Complex);
    }
    for &x in &grid {
        let mut row = vec![Cell::Real(x), cplx(v0.at(x))];
        row.extend(members.iter().map(|(_, v)| cplx(v.at(x))));
        t.grid_row(x, row);
    }
    Ok(Outcome::table(&t, c.format_or(Format::Csv), true))
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub d: Option<C64>,
    /// Replace a₂ in the checks that take the factorization constants.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub a2: Option<C64>,
}

fn report_json(r: &VerificationReport) -> serde_json::Value {
    json!({
        "check": r.check_name,
        "status": format!("{:?}", r.status).to_lowercase(),
        "passed": r.passed,
        "max_abs_dev": r.max_abs_dev,
        "mean_abs_dev": r.mean_abs_dev,
        "tolerance": r.tolerance,
        "n_points": r.grid.len(),
        "excluded": r.excluded,
    })
}

pub fn verify(args: &VerifyArgs) -> Result<Outcome> {
    let c = &args.common;
    let (family, d0) = match c.family {
        Family::Lame => (SuiteFamily::Lame(c.lattice()?), 1.3),
        Family::PoschlTeller => (SuiteFamily::PoschlTeller, 1.0),
        Family::TwoSoliton => (SuiteFamily::TwoSoliton(c.soliton_params()?), 1.5),
        Family::Custom => (SuiteFamily::Custom(c.potential()?), 1.0),
    };
    let cfg = SuiteConfig { family, d: args.d.unwrap_or(C64::new(d0, 0.0)), a2: args.a2 };
    let reports = run_suite(&cfg)?;
    let ok = all_passed(&reports);
    let mut t = header("verify", c);
    t.meta("d", complex(cfg.d));
    if let Some(a2) = cfg.a2 {
        t.meta("a2_override", complex(a2));
    }
    t.meta("tolerance_scale", num(Settings::default().tolerance_scale));
    t.meta("passed", ok.to_string());
    let text = match c.format_or(Format::Json) {
        Format::Json => {
            let mut meta = serde_json::Map::new();
            for (k, v) in &t.meta {
                meta.insert(k.clone(), json!(v));
            }
            let checks: Vec<_> = reports.iter().map(report_json).collect();
            let mut s = serde_json::to_string_pretty(&json!({ "meta": meta, "passed": ok, "checks": checks }))?;
            s.push('\n');
            s
        }
        Format::Csv => {
            for (name, kind) in [
                ("check", Kind::Text),
                ("status", Kind::Text),
                ("max_abs_dev", Kind::Real),
                ("mean_abs_dev", Kind::Real),
                ("tolerance", Kind::Real),
                ("n_points", Kind::Text),
                ("excluded", Kind::Text),
            ] {
                t.column(name, kind);
            }
            for r in &reports {
                t.rows.push(vec![
                    Cell::Text(r.check_name.replace(',', ";")),
                    Cell::Text(format!("{:?}", r.status).to_lowercase()),
                    Cell::Real(r.max_abs_dev),
                    Cell::Real(r.mean_abs_dev),
                    Cell::Real(r.tolerance),
                    Cell::Text(r.grid.len().to_string()),
                    Cell::Text(r.excluded.to_string()),
                ]);
            }
            t.to_csv()
        }
    };
    Ok(Outcome { text, ok })
}
