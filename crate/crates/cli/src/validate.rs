//! Self-validation: closed forms against the quadrature oracle.

use std::f64::consts::PI;

use pairfield::model::{charge_density_single, overlap_integral, PairDensity};
use pairfield::moments::{quadrupole_analytic, quadrupole_analytic_with, quadrupole_numeric, QuadrupoleForm};
use pairfield::potentials::{phi_far_field, phi_pair, phi_single};
use pairfield::quadrature::{integrate_scalar, overlap_numeric, potential_numeric};
use pairfield::{Envelope, PacketShape, PairConfig, QuadratureSpec, Symmetry, UnitSystem, Vec3};

use crate::config::RunConfig;
use crate::error::CliError;

pub struct Check {
    pub name: &'static str,
    pub measured: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.measured <= self.tolerance
    }
}

fn max(values: impl IntoIterator<Item = f64>) -> f64 {
    // NaN propagates as a failure.
    values.into_iter().fold(0.0, |acc, v| if v.is_nan() || acc.is_nan() { f64::NAN } else { acc.max(v) })
}

/// Grid of pairs checked besides the configured one. Includes σ ≠ 1 so
/// powers of σ cannot cancel.
fn grid(units: &UnitSystem) -> Result<Vec<PairConfig>, CliError> {
    let mut out = Vec::new();
    for sigma in [1.0, 1.3] {
        let shape = PacketShape::new(sigma, 0.0, units)?;
        for (r0, p0) in [
            (Vec3::new(0.0, 0.0, 0.5), Vec3::new(0.4, 0.0, 0.3)),
            (Vec3::new(0.2, 0.1, 1.2), Vec3::new(0.0, 0.6, 0.0)),
        ] {
            for symmetry in [Symmetry::Symmetric, Symmetry::Antisymmetric] {
                out.push(PairConfig::new(shape, r0 * sigma, p0 / sigma, symmetry));
            }
        }
    }
    Ok(out)
}

pub fn run(cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    let units = cfg.units;
    let spec = QuadratureSpec::default();
    let tol = |default: f64| cfg.tolerance.unwrap_or(default);
    let form = if cfg.inject_fault { QuadrupoleForm::SigmaSquaredOffDiagonal } else { QuadrupoleForm::Derived };
    let mut pairs = grid(&units)?;
    pairs.push(cfg.pair());
    let mut checks = Vec::new();

    // Quadrature failures count as failed checks rather than aborting.
    let rel = |a: f64, b: f64| (a - b).abs() / b.abs();

    let shape = cfg.shape;
    let single = integrate_scalar(
        |x: &Vec3| charge_density_single(&shape, x, &units),
        &Envelope::gaussian(Vec3::zeros(), shape.sigma()),
        &spec,
    )
    .map(|q| rel(q.value, units.e0))
    .unwrap_or(f64::INFINITY);
    checks.push(Check { name: "single density normalization", measured: single, tolerance: tol(1e-8) });

    let pair_norm = max(pairs.iter().map(|pair| {
        let rho = match PairDensity::new(pair, &units) {
            Ok(rho) => rho,
            Err(_) => return f64::INFINITY,
        };
        integrate_scalar(|x: &Vec3| rho.charge(x), &Envelope::for_pair(pair), &spec)
            .map(|q| rel(q.value, 2.0 * units.e0))
            .unwrap_or(f64::INFINITY)
    }));
    checks.push(Check { name: "pair density normalization", measured: pair_norm, tolerance: tol(1e-6) });

    let far_single = max([5.0, 10.0, 20.0].map(|k| {
        let r = k * shape.sigma();
        (phi_single(&shape, r, &units) * r / units.e0 - 1.0).abs()
    }));
    checks.push(Check { name: "single far field", measured: far_single, tolerance: tol(1e-6) });

    let mut far_pair = Vec::new();
    for pair in &pairs {
        let adapted = quadrupole_analytic(pair, &units)?;
        for dir in [Vec3::new(0.0, 0.0, 1.0), Vec3::new(0.6, 0.0, 0.8), Vec3::new(0.0, 1.0, 0.0)] {
            let r_adapted = dir * (200.0 * pair.shape.sigma());
            let r_lab = adapted.rotation.to_lab(&r_adapted);
            let exact = phi_pair(pair, &r_lab, &units)?;
            let approx = phi_far_field(&adapted.tensor, 2.0 * units.e0, &r_adapted);
            far_pair.push(rel(approx, exact));
        }
    }
    checks.push(Check { name: "pair far field (monopole + quadrupole)", measured: max(far_pair), tolerance: tol(1e-5) });

    let overlap = max(pairs.iter().map(|pair| {
        overlap_numeric(pair, &spec, &units)
            .map(|o| (o.modulus - overlap_integral(pair, &units)).abs())
            .unwrap_or(f64::INFINITY)
    }));
    checks.push(Check { name: "overlap integral", measured: overlap, tolerance: tol(1e-8) });

    let mut quad = Vec::new();
    for pair in &pairs {
        let analytic = quadrupole_analytic_with(pair, &units, form)?.tensor;
        let dev = match quadrupole_numeric(pair, &units, &spec) {
            Ok(numeric) => (analytic.to_matrix() - numeric.to_matrix()).abs().max() / analytic.max_abs_component(),
            Err(_) => f64::INFINITY,
        };
        quad.push(dev);
    }
    checks.push(Check { name: "quadrupole analytic vs quadrature", measured: max(quad), tolerance: tol(1e-6) });

    let potential_points = [
        Vec3::zeros(),
        Vec3::new(0.3, -0.2, 0.4),
        Vec3::new(0.0, 0.0, 1.5),
        Vec3::new(2.0, 1.0, -0.5),
        Vec3::new(-1.0, 4.0, 6.0),
    ];
    let mut potential = Vec::new();
    for pair in pairs.iter().step_by(3) {
        let rho = PairDensity::new(pair, &units)?;
        let env = Envelope::for_pair(pair);
        for point in potential_points {
            let r = point * pair.shape.sigma();
            let exact = phi_pair(pair, &r, &units)?;
            let dev = potential_numeric(|x: &Vec3| rho.charge(x), &env, &r, &spec)
                .map(|q| rel(exact, q.value))
                .unwrap_or(f64::INFINITY);
            potential.push(dev);
        }
    }
    checks.push(Check { name: "pair potential vs Coulomb quadrature", measured: max(potential), tolerance: tol(1e-5) });

    let centre = (phi_single(&shape, 0.0, &units) * shape.sigma() / (units.e0 * (2.0 / PI).sqrt()) - 1.0).abs();
    checks.push(Check { name: "single potential at the centre", measured: centre, tolerance: tol(1e-10) });

    Ok(checks)
}

pub fn report(checks: &[Check]) -> String {
    let mut out = String::new();
    for c in checks {
        let status = if c.passed() { "PASS" } else { "FAIL" };
        out.push_str(&format!("{status}  {:<42} measured {:.3e}  tolerance {:.1e}\n", c.name, c.measured, c.tolerance));
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    out.push_str(&format!("{} checks, {} failed\n", checks.len(), failed));
    out
}
