//! `key = value` run configuration with flag overrides.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use pairfield::moments::SurfacePreset;
use pairfield::{PacketShape, PairConfig, QuadrupoleTensor, Symmetry, UnitSystem, Vec3};

use crate::error::CliError;

/// Every key a config file or flag may set.
pub const KEYS: &[&str] = &[
    "hbar", "mass", "c", "e0", "sigma", "t0", "r0", "p0", "symmetry", "mode", "direction", "r_min", "r_max",
    "points", "t_min", "t_max", "n_theta", "n_phi", "format", "preset", "target", "dxx", "dyy", "dzz", "dxz",
    "input", "tolerance", "inject_fault",
];

#[derive(Debug, Clone, PartialEq)]
enum Source {
    File { path: PathBuf, line: usize },
    Flag,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::File { path, line } => write!(f, "{}:{line}", path.display()),
            Source::Flag => write!(f, "command line"),
        }
    }
}

/// Raw values, last writer wins.
#[derive(Debug, Default, Clone)]
pub struct RawConfig {
    values: BTreeMap<String, (String, Source)>,
}

impl RawConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text, path)
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self, CliError> {
        let mut raw = Self::default();
        for (index, line) in text.lines().enumerate() {
            let line_no = index + 1;
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(CliError::Usage(format!(
                    "{}:{line_no}: expected 'key = value', got '{content}'",
                    path.display()
                )));
            };
            let key = key.trim();
            let source = Source::File { path: path.to_path_buf(), line: line_no };
            if !KEYS.contains(&key) {
                return Err(CliError::Usage(format!("{source}: unknown key '{key}'")));
            }
            if let Some((_, first)) = raw.values.get(key) {
                return Err(CliError::Usage(format!("{source}: key '{key}' already set at {first}")));
            }
            raw.values.insert(key.to_string(), (value.trim().to_string(), source));
        }
        Ok(raw)
    }

    /// Applies a command-line value; flags win over the file.
    pub fn set_flag(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        if !KEYS.contains(&key) {
            return Err(CliError::Usage(format!("unknown key '{key}'")));
        }
        self.values.insert(key.to_string(), (value.trim().to_string(), Source::Flag));
        Ok(())
    }

    /// `--units hbar=1,mass=1,c=137,e0=1`.
    pub fn set_units(&mut self, spec: &str) -> Result<(), CliError> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("--units: expected name=value, got '{item}'")))?;
            let key = key.trim();
            if !["hbar", "mass", "c", "e0"].contains(&key) {
                return Err(CliError::Usage(format!("--units: unknown constant '{key}' (expected hbar, mass, c, e0)")));
            }
            self.set_flag(key, value)?;
        }
        Ok(())
    }

    fn get<T>(&self, key: &str, parse: impl Fn(&str) -> Result<T, String>) -> Result<Option<T>, CliError> {
        match self.values.get(key) {
            None => Ok(None),
            Some((text, source)) => parse(text)
                .map(Some)
                .map_err(|msg| CliError::Usage(format!("{source}: key '{key}': {msg}"))),
        }
    }

    fn number(&self, key: &str, default: f64) -> Result<f64, CliError> {
        Ok(self.get(key, parse_number)?.unwrap_or(default))
    }

    fn count(&self, key: &str, default: usize) -> Result<usize, CliError> {
        Ok(self
            .get(key, |s| s.parse::<usize>().map_err(|_| format!("expected a non-negative integer, got '{s}'")))?
            .unwrap_or(default))
    }

    fn vector(&self, key: &str, default: Vec3) -> Result<Vec3, CliError> {
        Ok(self.get(key, parse_vector)?.unwrap_or(default))
    }

    fn parsed<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: fmt::Display,
    {
        self.get(key, |s| s.parse::<T>().map_err(|e| e.to_string()))
    }
}

fn parse_number(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(format!("expected a finite number, got '{s}'")),
    }
}

fn parse_vector(s: &str) -> Result<Vec3, String> {
    let parts: Vec<&str> = s.split(|c: char| c == ',' || c.is_whitespace()).filter(|p| !p.is_empty()).collect();
    if parts.len() != 3 {
        return Err(format!("expected three components 'x, y, z', got '{s}'"));
    }
    let mut v = Vec3::zeros();
    for (slot, part) in v.iter_mut().zip(parts) {
        *slot = parse_number(part)?;
    }
    Ok(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Single,
    Pair,
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "single" => Ok(Mode::Single),
            "pair" => Ok(Mode::Pair),
            _ => Err(format!("expected 'single' or 'pair', got '{s}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Obj,
    Json,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "obj" => Ok(Format::Obj),
            "json" => Ok(Format::Json),
            _ => Err(format!("expected csv, obj or json, got '{s}'")),
        }
    }
}

/// Which parameters `recover` should reconstruct.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Auto,
    R0,
    P0,
}

impl FromStr for Target {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "auto" => Ok(Target::Auto),
            "r0" => Ok(Target::R0),
            "p0" => Ok(Target::P0),
            _ => Err(format!("expected auto, r0 or p0, got '{s}'")),
        }
    }
}

/// Fully resolved configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub units: UnitSystem,
    pub shape: PacketShape,
    pub r0: Vec3,
    pub p0: Vec3,
    pub symmetry: Symmetry,
    pub mode: Mode,
    pub direction: Vec3,
    pub r_min: f64,
    pub r_max: f64,
    pub points: usize,
    pub t_min: f64,
    pub t_max: f64,
    pub n_theta: usize,
    pub n_phi: usize,
    pub format: Option<Format>,
    pub preset: Option<SurfacePreset>,
    pub target: Target,
    pub tensor: Option<QuadrupoleTensor>,
    pub input: Option<PathBuf>,
    pub tolerance: Option<f64>,
    pub inject_fault: bool,
}

impl RunConfig {
    pub fn resolve(raw: &RawConfig) -> Result<Self, CliError> {
        let units = UnitSystem::new(
            raw.number("hbar", 1.0)?,
            raw.number("mass", 1.0)?,
            raw.number("c", 1.0)?,
            raw.number("e0", 1.0)?,
        )
        .map_err(|e| CliError::Usage(e.to_string()))?;
        let shape = PacketShape::new(raw.number("sigma", 1.0)?, raw.number("t0", 0.0)?, &units)
            .map_err(|e| CliError::Usage(e.to_string()))?;

        let components = ["dxx", "dyy", "dzz", "dxz"].map(|k| raw.get(k, parse_number));
        let [dxx, dyy, dzz, dxz] = components;
        let (dxx, dyy, dzz, dxz) = (dxx?, dyy?, dzz?, dxz?);
        let tensor = match (dxx, dyy, dzz, dxz) {
            (None, None, None, None) => None,
            (Some(dxx), dyy, Some(dzz), dxz) => Some(QuadrupoleTensor {
                dxx,
                dyy: dyy.unwrap_or(-dxx - dzz),
                dzz,
                dxz: dxz.unwrap_or(0.0),
            }),
            _ => return Err(CliError::Usage("an inline tensor needs at least dxx and dzz".into())),
        };

        let direction = raw.vector("direction", Vec3::z())?;
        let direction = direction
            .try_normalize(0.0)
            .ok_or_else(|| CliError::Usage("key 'direction': must be a nonzero vector".into()))?;

        let config = Self {
            units,
            shape,
            r0: raw.vector("r0", Vec3::new(0.0, 0.0, 1.0))?,
            p0: raw.vector("p0", Vec3::zeros())?,
            symmetry: raw.parsed::<Symmetry>("symmetry")?.unwrap_or(Symmetry::Symmetric),
            mode: raw.parsed::<Mode>("mode")?.unwrap_or(Mode::Single),
            direction,
            r_min: raw.number("r_min", 0.1)?,
            r_max: raw.number("r_max", 10.0)?,
            points: raw.count("points", 100)?,
            t_min: raw.number("t_min", 0.0)?,
            t_max: raw.number("t_max", 10.0)?,
            n_theta: raw.count("n_theta", 33)?,
            n_phi: raw.count("n_phi", 65)?,
            format: raw.parsed::<Format>("format")?,
            preset: raw.parsed::<SurfacePreset>("preset")?,
            target: raw.parsed::<Target>("target")?.unwrap_or(Target::Auto),
            tensor,
            input: raw.get("input", |s| Ok(PathBuf::from(s)))?,
            tolerance: raw.get("tolerance", |s| {
                parse_number(s).and_then(|x| if x > 0.0 { Ok(x) } else { Err(format!("must be positive, got {x}")) })
            })?,
            inject_fault: raw
                .get("inject_fault", |s| s.parse::<bool>().map_err(|_| format!("expected true or false, got '{s}'")))?
                .unwrap_or(false),
        };
        Ok(config)
    }

    pub fn pair(&self) -> PairConfig {
        PairConfig::new(self.shape, self.r0, self.p0, self.symmetry)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<RawConfig, CliError> {
        RawConfig::parse(text, Path::new("run.cfg"))
    }

    #[test]
    fn parses_comments_and_vectors() {
        let raw = parse("# pair run\nsigma = 0.5  # narrow\nr0 = 0, 0, 10\n\np0 = 1 0 0\nsymmetry = antisymmetric\n").unwrap();
        let cfg = RunConfig::resolve(&raw).unwrap();
        assert_eq!(cfg.shape.sigma(), 0.5);
        assert_eq!(cfg.r0, Vec3::new(0.0, 0.0, 10.0));
        assert_eq!(cfg.p0, Vec3::new(1.0, 0.0, 0.0));
        assert_eq!(cfg.symmetry, Symmetry::Antisymmetric);
    }

    #[test]
    fn rejects_unknown_keys_with_line_numbers() {
        let err = parse("sigma = 1\nsigmaa = 2\n").unwrap_err();
        assert_eq!(err.to_string(), "run.cfg:2: unknown key 'sigmaa'");
        let err = parse("sigma = 1\nsigma = 2\n").unwrap_err();
        assert!(err.to_string().starts_with("run.cfg:2: key 'sigma' already set at run.cfg:1"));
        assert!(parse("just words\n").is_err());
    }

    #[test]
    fn reports_bad_values_with_their_source() {
        let raw = parse("points = many\n").unwrap();
        let err = RunConfig::resolve(&raw).unwrap_err();
        assert!(err.to_string().starts_with("run.cfg:1: key 'points'"), "{err}");
        let raw = parse("r0 = 1, 2\n").unwrap();
        assert!(RunConfig::resolve(&raw).is_err());
        let raw = parse("sigma = -1\n").unwrap();
        assert!(RunConfig::resolve(&raw).is_err());
    }

    #[test]
    fn flags_win_over_file() {
        let mut raw = parse("sigma = 2\n").unwrap();
        raw.set_flag("sigma", "3").unwrap();
        raw.set_units("hbar=2, c=137").unwrap();
        let cfg = RunConfig::resolve(&raw).unwrap();
        assert_eq!(cfg.shape.sigma(), 3.0);
        assert_eq!(cfg.units.hbar, 2.0);
        assert_eq!(cfg.units.c, 137.0);
        assert!(raw.set_units("planck=1").is_err());
    }

    #[test]
    fn inline_tensor_fills_dyy_from_trace() {
        let raw = parse("dxx = -1\ndzz = 2\n").unwrap();
        let t = RunConfig::resolve(&raw).unwrap().tensor.unwrap();
        assert_eq!(t.dyy, -1.0);
        let raw = parse("dxz = 1\n").unwrap();
        assert!(RunConfig::resolve(&raw).is_err());
    }
}
