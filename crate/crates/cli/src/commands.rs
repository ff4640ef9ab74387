//! `profile`, `moments`, `surface`, `recover` and `evolve`.

use pairfield::model::{overlap_integral, sigma_at, uncertainty_product};
use pairfield::moments::{magnetic_moment, quadrupole_analytic, recover_p0, recover_r0, surface_mesh, AngularSurfaceMesh};
use pairfield::potentials::{sample_pair, sample_single};
use pairfield::{PacketShape, QuadrupoleTensor, UnitSystem, Vec3};
use serde_json::{json, Value};

use crate::config::{Format, Mode, RunConfig, Target};
use crate::error::CliError;
use crate::output::{csv, json, num};

fn linspace(start: f64, end: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..n)
            .map(|i| if i + 1 == n { end } else { start + (end - start) * i as f64 / (n - 1) as f64 })
            .collect(),
    }
}

fn vector(v: &Vec3) -> Value {
    json!([num(v.x), num(v.y), num(v.z)])
}

pub fn profile(cfg: &RunConfig) -> Result<String, CliError> {
    if cfg.r_min < 0.0 {
        return Err(CliError::Usage(format!("r_min must be non-negative, got {}", cfg.r_min)));
    }
    if !(cfg.r_max > cfg.r_min) {
        return Err(CliError::Usage(format!("r_max ({}) must exceed r_min ({})", cfg.r_max, cfg.r_min)));
    }
    if cfg.points < 2 {
        return Err(CliError::Usage(format!("points must be at least 2, got {}", cfg.points)));
    }
    if let Some(f) = cfg.format.filter(|f| *f != Format::Csv) {
        return Err(CliError::Usage(format!("profile writes CSV only, got format {f:?}")));
    }
    let e0 = cfg.units.e0;
    let pair = cfg.pair();
    let mut rows = Vec::with_capacity(cfg.points);
    for r in linspace(cfg.r_min, cfg.r_max, cfg.points) {
        let point = cfg.direction * r;
        let (sample, charge) = match cfg.mode {
            Mode::Single => (sample_single(&cfg.shape, &cfg.p0, &point, &cfg.units), e0),
            Mode::Pair => (sample_pair(&pair, &point, &cfg.units)?, 2.0 * e0),
        };
        rows.push(vec![r, sample.phi, charge / r, sample.a.x, sample.a.y, sample.a.z]);
    }
    Ok(csv("r,phi,phi_coulomb_reference,A_x,A_y,A_z", rows))
}

pub fn moments_report(cfg: &RunConfig) -> Result<Value, CliError> {
    let pair = cfg.pair();
    let adapted = quadrupole_analytic(&pair, &cfg.units)?;
    let d = adapted.tensor;
    let m = magnetic_moment(&pair, &cfg.units)?;
    let rows: Vec<Value> = (0..3)
        .map(|i| json!([num(adapted.rotation.matrix[(i, 0)]), num(adapted.rotation.matrix[(i, 1)]), num(adapted.rotation.matrix[(i, 2)])]))
        .collect();
    Ok(json!({
        "quadrupole": {
            "dxx": num(d.dxx),
            "dyy": num(d.dyy),
            "dzz": num(d.dzz),
            "dxz": num(d.dxz),
            "trace": num(d.trace()),
        },
        "magnetic_moment": vector(&m),
        "overlap_N": num(overlap_integral(&pair, &cfg.units)),
        "frame_rotation": rows,
        "parameters": {
            "sigma": num(cfg.shape.sigma()),
            "r0": vector(&pair.r0),
            "p0": vector(&pair.p0),
            "symmetry": pair.symmetry.name(),
            "units": {
                "hbar": num(cfg.units.hbar),
                "mass": num(cfg.units.mass),
                "c": num(cfg.units.c),
                "e0": num(cfg.units.e0),
            },
        },
    }))
}

pub fn moments(cfg: &RunConfig) -> Result<String, CliError> {
    if let Some(f) = cfg.format.filter(|f| *f != Format::Json) {
        return Err(CliError::Usage(format!("moments writes JSON only, got format {f:?}")));
    }
    Ok(json(&moments_report(cfg)?))
}

pub fn surface(cfg: &RunConfig) -> Result<String, CliError> {
    let pair = cfg.preset.map(|p| p.pair()).unwrap_or_else(|| cfg.pair());
    let units = if cfg.preset.is_some() { UnitSystem::default() } else { cfg.units };
    let mesh = surface_mesh(&pair, cfg.n_theta, cfg.n_phi, &units)?;
    match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => Ok(surface_csv(&mesh)),
        Format::Obj => Ok(surface_obj(&mesh)),
        Format::Json => Err(CliError::Usage("surface writes csv or obj, got format Json".into())),
    }
}

fn surface_csv(mesh: &AngularSurfaceMesh) -> String {
    let rows = mesh.theta.iter().enumerate().flat_map(|(i, &t)| {
        mesh.phi.iter().enumerate().map(move |(j, &p)| vec![t, p, mesh.values[i][j]])
    });
    csv("theta,phi,value", rows)
}

fn surface_obj(mesh: &AngularSurfaceMesh) -> String {
    let (nt, np) = (mesh.theta.len(), mesh.phi.len());
    let mut out = format!("# quadrupole surface |n.D.n|, {nt} x {np} grid\n");
    for i in 0..nt {
        for j in 0..np {
            let v = mesh.vertex(i, j);
            out.push_str(&format!("v {} {} {}\n", crate::output::cell(v.x), crate::output::cell(v.y), crate::output::cell(v.z)));
        }
    }
    let index = |i: usize, j: usize| i * np + j + 1;
    for i in 0..nt - 1 {
        for j in 0..np - 1 {
            out.push_str(&format!("f {} {} {} {}\n", index(i, j), index(i + 1, j), index(i + 1, j + 1), index(i, j + 1)));
        }
    }
    out
}

/// Tensor, width and units for `recover`: from a moments report when `input`
/// is set, otherwise from inline components.
fn recover_inputs(cfg: &RunConfig) -> Result<(QuadrupoleTensor, PacketShape, UnitSystem), CliError> {
    let Some(path) = &cfg.input else {
        let tensor = cfg
            .tensor
            .ok_or_else(|| CliError::Usage("recover needs 'input' (a moments report) or inline dxx, dzz".into()))?;
        return Ok((tensor, cfg.shape, cfg.units));
    };
    let bad = |what: &str| CliError::Usage(format!("{}: {what}", path.display()));
    let text = std::fs::read_to_string(path).map_err(|e| bad(&format!("cannot read: {e}")))?;
    let report: Value = serde_json::from_str(&text).map_err(|e| bad(&format!("invalid JSON: {e}")))?;
    let field = |value: &Value, key: &str| -> Result<f64, CliError> {
        value.get(key).and_then(Value::as_f64).ok_or_else(|| bad(&format!("missing number '{key}'")))
    };
    let q = report.get("quadrupole").ok_or_else(|| bad("missing 'quadrupole'"))?;
    let tensor = QuadrupoleTensor {
        dxx: field(q, "dxx")?,
        dyy: field(q, "dyy")?,
        dzz: field(q, "dzz")?,
        dxz: field(q, "dxz")?,
    };
    let (shape, units) = match report.get("parameters") {
        Some(p) => {
            let u = p.get("units").ok_or_else(|| bad("missing 'parameters.units'"))?;
            let units = UnitSystem::new(field(u, "hbar")?, field(u, "mass")?, field(u, "c")?, field(u, "e0")?)?;
            (PacketShape::new(field(p, "sigma")?, 0.0, &units)?, units)
        }
        None => (cfg.shape, cfg.units),
    };
    Ok((tensor, shape, units))
}

/// Overlap below which the weak-overlap inverse is trusted.
const WEAK_OVERLAP_N: f64 = 1e-2;
/// Overlap above which the strong-overlap regime holds.
const STRONG_OVERLAP_N: f64 = 0.9;

pub fn recover(cfg: &RunConfig) -> Result<String, CliError> {
    let (tensor, shape, units) = recover_inputs(cfg)?;
    let sigma = shape.sigma();
    let want_r0 = cfg.target != Target::P0;
    let want_p0 = cfg.target != Target::R0;

    let r0 = if want_r0 { Some(recover_r0(&tensor, &units)) } else { None };
    let p0 = if want_p0 { Some(recover_p0(&tensor, &shape, &units)) } else { None };

    let failures: Vec<String> = [r0.as_ref().and_then(|r| r.as_ref().err()), p0.as_ref().and_then(|r| r.as_ref().err())]
        .into_iter()
        .flatten()
        .map(|e| e.to_string())
        .collect();
    let r0_ok = r0.as_ref().and_then(|r| r.as_ref().ok()).copied();
    let p0_ok = p0.as_ref().and_then(|r| r.as_ref().ok()).copied();
    if r0_ok.is_none() && p0_ok.is_none() {
        return Err(CliError::Domain(failures.join("; ")));
    }

    // N implied by the inputs: the self-consistent value from the momentum
    // inverse when available, otherwise the bound exp(−r0²/2σ²).
    let implied_n = match (p0_ok, r0_ok) {
        (Some(p), _) => p.overlap,
        (None, Some(r)) => (-r * r / (2.0 * sigma * sigma)).exp(),
        (None, None) => unreachable!(),
    };
    let mut report = json!({
        "regime": {
            "overlap_N": num(implied_n),
            "weak_overlap": implied_n < WEAK_OVERLAP_N,
            "strong_overlap": implied_n > STRONG_OVERLAP_N,
            "weak_overlap_condition": format!("N < {WEAK_OVERLAP_N}"),
            "strong_overlap_condition": format!("N > {STRONG_OVERLAP_N}"),
        },
    });
    let obj = report.as_object_mut().expect("object literal");
    match r0 {
        Some(Ok(r)) => {
            obj.insert("r0".into(), num(r));
        }
        Some(Err(e)) => {
            obj.insert("r0".into(), Value::Null);
            obj.insert("r0_error".into(), Value::String(e.to_string()));
        }
        None => {}
    }
    match p0 {
        Some(Ok(p)) => {
            obj.insert(
                "p0".into(),
                json!({ "p0x": num(p.p0x), "p0z": num(p.p0z), "r0": num(p.r0), "overlap_N": num(p.overlap) }),
            );
        }
        Some(Err(e)) => {
            obj.insert("p0".into(), Value::Null);
            obj.insert("p0_error".into(), Value::String(e.to_string()));
        }
        None => {}
    }
    Ok(json(&report))
}

pub fn evolve(cfg: &RunConfig) -> Result<String, CliError> {
    if cfg.points < 2 {
        return Err(CliError::Usage(format!("points must be at least 2, got {}", cfg.points)));
    }
    if !(cfg.t_max > cfg.t_min) {
        return Err(CliError::Usage(format!("t_max ({}) must exceed t_min ({})", cfg.t_max, cfg.t_min)));
    }
    let rows = linspace(cfg.t_min, cfg.t_max, cfg.points)
        .into_iter()
        .map(|t| vec![t, sigma_at(&cfg.shape, t), uncertainty_product(&cfg.shape, t, &cfg.units)]);
    Ok(csv("t,sigma_t,uncertainty_product", rows))
}

