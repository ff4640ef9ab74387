//! Wave functions, overlap and charge/current densities of a single coherent
//! electron and of a coherent electron pair.
//!
//! The pair lives in its centre-of-mass frame. Packet *a* is centred at `+r0`
//! and carries momentum `−p0`; packet *b* is centred at `−r0` and carries
//! `+p0`. All pair quantities are evaluated at the culmination moment `t0`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::units::{PacketShape, UnitSystem};
use crate::{Vec3, ZERO3};

/// Value of a wave function at a point, in units of length^(−3/2).
pub type ComplexAmplitude = Complex64;

/// Spatial exchange symmetry of the pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symmetry {
    /// Symmetric spatial state, antiparallel spins.
    Symmetric,
    /// Antisymmetric spatial state, parallel spins.
    Antisymmetric,
}

impl Symmetry {
    /// `+1` for the symmetric state, `−1` for the antisymmetric one.
    pub fn sign(self) -> f64 {
        match self {
            Symmetry::Symmetric => 1.0,
            Symmetry::Antisymmetric => -1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Symmetry::Symmetric => "symmetric",
            Symmetry::Antisymmetric => "antisymmetric",
        }
    }
}

impl std::str::FromStr for Symmetry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "symmetric" | "s" | "antiparallel" => Ok(Symmetry::Symmetric),
            "antisymmetric" | "a" | "parallel" => Ok(Symmetry::Antisymmetric),
            other => Err(Error::InvalidParameter(format!(
                "unknown symmetry '{other}' (expected symmetric or antisymmetric)"
            ))),
        }
    }
}

/// Relative coordinate, relative momentum and exchange symmetry of a pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairConfig {
    pub shape: PacketShape,
    /// Half-separation: the packet centres sit at `±r0`.
    pub r0: Vec3,
    /// The packets move with momenta `∓p0`.
    pub p0: Vec3,
    pub symmetry: Symmetry,
}

impl PairConfig {
    pub fn new(shape: PacketShape, r0: Vec3, p0: Vec3, symmetry: Symmetry) -> Self {
        Self {
            shape,
            r0,
            p0,
            symmetry,
        }
    }

    /// Exponent `x` of the overlap `N = exp(−x)`.
    pub fn overlap_exponent(&self, units: &UnitSystem) -> f64 {
        let s = self.shape.sigma();
        2.0 * self.p0.norm_squared() * s * s / (units.hbar * units.hbar)
            + self.r0.norm_squared() / (2.0 * s * s)
    }

    /// `1 ± N²`, with the sign fixed by the symmetry.
    ///
    /// Fails with [`Error::DegeneratePair`] when the antisymmetric state has
    /// zero norm.
    pub fn norm_factor(&self, units: &UnitSystem) -> Result<f64> {
        let two_x = 2.0 * self.overlap_exponent(units);
        match self.symmetry {
            Symmetry::Symmetric => Ok(1.0 + (-two_x).exp()),
            Symmetry::Antisymmetric => {
                let value = -(-two_x).exp_m1();
                if value > 0.0 {
                    Ok(value)
                } else {
                    Err(Error::DegeneratePair)
                }
            }
        }
    }
}

/// Overlap integral `N = ⟨ψa|ψb⟩` of the two packets, in `(0, 1]`.
pub fn overlap_integral(pair: &PairConfig, units: &UnitSystem) -> f64 {
    (-pair.overlap_exponent(units)).exp()
}

/// Coordinate uncertainty `σ(t) = σ sqrt(1 + ω²(t − t0)²)`.
pub fn sigma_at(shape: &PacketShape, t: f64) -> f64 {
    shape.sigma() * shape.spread_factor(t)
}

/// Product `σ_x(t) σ_p` with `σ_p = ħ / (2σ)`; equals `ħ/2` at `t0`.
pub fn uncertainty_product(shape: &PacketShape, t: f64, units: &UnitSystem) -> f64 {
    0.5 * units.hbar * shape.spread_factor(t)
}

/// Single coherent packet centred at the origin at time `t`.
///
/// The envelope is centred at `p0 (t − t0) / m`, with width `σ(t)`, and the
/// phase is the plane wave `p0·r / ħ`. At `t = t0` this is the minimum
/// uncertainty Gaussian.
pub fn single_wavefunction(
    shape: &PacketShape,
    p0: &Vec3,
    r: &Vec3,
    t: f64,
    units: &UnitSystem,
) -> ComplexAmplitude {
    let dt = t - shape.t0();
    let spread = shape.spread_factor(t);
    let width_sq = shape.sigma() * shape.sigma() * spread * spread;
    let centre = p0 * (dt / units.mass);
    let amplitude = (2.0 * PI * width_sq).powf(-0.75);
    let envelope = -(r - centre).norm_squared() / (4.0 * width_sq);
    let phase = p0.dot(r) / units.hbar;
    amplitude * Complex64::new(envelope, phase).exp()
}

/// Packet at culmination centred at `centre` with momentum `momentum`.
fn packet(sigma: f64, centre: &Vec3, momentum: &Vec3, r: &Vec3, hbar: f64) -> Complex64 {
    let amplitude = (2.0 * PI * sigma * sigma).powf(-0.75);
    let envelope = -(r - centre).norm_squared() / (4.0 * sigma * sigma);
    let phase = momentum.dot(r) / hbar;
    amplitude * Complex64::new(envelope, phase).exp()
}

/// Single-particle orbitals (ψa, ψb) of the pair evaluated at `r`.
pub fn pair_orbitals(pair: &PairConfig, r: &Vec3, units: &UnitSystem) -> (Complex64, Complex64) {
    let s = pair.shape.sigma();
    let a = packet(s, &pair.r0, &(-pair.p0), r, units.hbar);
    let b = packet(s, &(-pair.r0), &pair.p0, r, units.hbar);
    (a, b)
}

/// Normalized two-electron amplitude `Ψ(r1, r2)` at culmination.
///
/// `Ψ = [ψa(r1)ψb(r2) ± ψa(r2)ψb(r1)] / sqrt(2(1 ± N²))`, so exchanging the
/// arguments multiplies the value by the symmetry sign.
pub fn pair_wavefunction(
    pair: &PairConfig,
    r1: &Vec3,
    r2: &Vec3,
    units: &UnitSystem,
) -> Result<ComplexAmplitude> {
    let norm = pair.norm_factor(units)?;
    let (a1, b1) = pair_orbitals(pair, r1, units);
    let (a2, b2) = pair_orbitals(pair, r2, units);
    let value = a1 * b2 + pair.symmetry.sign() * a2 * b1;
    Ok(value / (2.0 * norm).sqrt())
}

/// Normalized Gaussian `(2πσ²)^(−3/2) exp(−r²/(2σ²))`.
pub(crate) fn gaussian(sigma: f64, r_sq: f64) -> f64 {
    let s2 = sigma * sigma;
    (2.0 * PI * s2).powf(-1.5) * (-r_sq / (2.0 * s2)).exp()
}

/// Charge density `e0 |ψ|²` of the single packet at culmination.
pub fn charge_density_single(shape: &PacketShape, r: &Vec3, units: &UnitSystem) -> f64 {
    units.e0 * gaussian(shape.sigma(), r.norm_squared())
}

/// Current density of the single packet, `(p0 / (m c)) ρ(r)`.
pub fn current_density_single(
    shape: &PacketShape,
    p0: &Vec3,
    r: &Vec3,
    units: &UnitSystem,
) -> Vec3 {
    p0 * (units.beta_factor() * charge_density_single(shape, r, units))
}

/// Pair charge density with its constants precomputed, for repeated
/// evaluation inside quadratures.
///
/// ```text
/// ρ(r) = e0/(1 ± N²) [ g(r − r0) + g(r + r0) ± 2N e^{−r0²/2σ²} g(r) cos(2 p0·r/ħ) ]
/// ```
#[derive(Debug, Clone, Copy)]
pub struct PairDensity {
    sigma: f64,
    r0: Vec3,
    k0: Vec3,
    prefactor: f64,
    interference: f64,
    current_prefactor: f64,
}

impl PairDensity {
    pub fn new(pair: &PairConfig, units: &UnitSystem) -> Result<Self> {
        let norm = pair.norm_factor(units)?;
        let sigma = pair.shape.sigma();
        let n = overlap_integral(pair, units);
        let envelope = (-pair.r0.norm_squared() / (2.0 * sigma * sigma)).exp();
        Ok(Self {
            sigma,
            r0: pair.r0,
            k0: pair.p0 / units.hbar,
            prefactor: units.e0 / norm,
            interference: pair.symmetry.sign() * 2.0 * n * envelope,
            current_prefactor: units.e0 * units.hbar * units.beta_factor() / norm,
        })
    }

    pub fn charge(&self, r: &Vec3) -> f64 {
        let direct = gaussian(self.sigma, (r - self.r0).norm_squared())
            + gaussian(self.sigma, (r + self.r0).norm_squared());
        let exchange =
            self.interference * gaussian(self.sigma, r.norm_squared()) * (2.0 * self.k0.dot(r)).cos();
        self.prefactor * (direct + exchange)
    }

    /// `j = (e0 ħ / (m c)) · 2 ∫ Im(Ψ* ∇₁Ψ) d³r₂`, reduced to single-particle
    /// terms. The direct part carries the opposite packet velocities; the
    /// exchange part is `∓ (r0/σ²) sin(2k0·r)` times the overlap envelope.
    pub fn current(&self, r: &Vec3) -> Vec3 {
        let g_plus = gaussian(self.sigma, (r - self.r0).norm_squared());
        let g_minus = gaussian(self.sigma, (r + self.r0).norm_squared());
        let direct = self.k0 * (g_minus - g_plus);
        let exchange = self.r0
            * (-0.5 * self.interference * gaussian(self.sigma, r.norm_squared())
                * (2.0 * self.k0.dot(r)).sin()
                / (self.sigma * self.sigma));
        (direct + exchange) * self.current_prefactor
    }
}

/// Pair charge density; integrates to `2 e0`.
pub fn charge_density_pair(pair: &PairConfig, r: &Vec3, units: &UnitSystem) -> Result<f64> {
    Ok(PairDensity::new(pair, units)?.charge(r))
}

/// Pair current density (probability current times `e0 / c`).
pub fn current_density_pair(pair: &PairConfig, r: &Vec3, units: &UnitSystem) -> Result<Vec3> {
    Ok(PairDensity::new(pair, units)?.current(r))
}

impl Default for PairConfig {
    fn default() -> Self {
        Self::new(PacketShape::natural(), ZERO3, ZERO3, Symmetry::Symmetric)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn pair(r0: [f64; 3], p0: [f64; 3], symmetry: Symmetry) -> PairConfig {
        PairConfig::new(PacketShape::natural(), Vec3::from(r0), Vec3::from(p0), symmetry)
    }

    #[test]
    fn overlap_examples() {
        let u = UnitSystem::default();
        assert_eq!(overlap_integral(&pair([0.0; 3], [0.0; 3], Symmetry::Symmetric), &u), 1.0);
        let n = overlap_integral(&pair([0.0, 0.0, 1.0], [0.0; 3], Symmetry::Symmetric), &u);
        assert_relative_eq!(n, (-0.5f64).exp(), max_relative = 1e-15);
        let n = overlap_integral(&pair([0.0; 3], [0.0, 0.0, 1.0], Symmetry::Symmetric), &u);
        assert_relative_eq!(n, (-2.0f64).exp(), max_relative = 1e-15);
    }

    #[test]
    fn sigma_and_uncertainty_at_one_inverse_omega() {
        let u = UnitSystem::default();
        let shape = PacketShape::new(0.7, 2.0, &u).unwrap();
        let t = shape.t0() + 1.0 / shape.omega();
        assert_eq!(sigma_at(&shape, shape.t0()), 0.7);
        assert_relative_eq!(sigma_at(&shape, t), 0.7 * 2f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(
            sigma_at(&shape, shape.t0() - 1.0 / shape.omega()),
            0.7 * 2f64.sqrt(),
            max_relative = 1e-15
        );
        assert_eq!(uncertainty_product(&shape, shape.t0(), &u), 0.5);
        assert_relative_eq!(
            uncertainty_product(&shape, t, &u),
            0.5 * 2f64.sqrt(),
            max_relative = 1e-15
        );
    }

    #[test]
    fn single_wavefunction_peak_is_real() {
        let u = UnitSystem::default();
        let shape = PacketShape::natural();
        let psi = single_wavefunction(&shape, &ZERO3, &ZERO3, 0.0, &u);
        assert_relative_eq!(psi.re, (2.0 * PI).sqrt().powf(-1.5), max_relative = 1e-15);
        assert_eq!(psi.im, 0.0);
        let psi = single_wavefunction(&shape, &ZERO3, &Vec3::new(0.3, -1.0, 2.0), 0.0, &u);
        assert_eq!(psi.im, 0.0);
    }

    #[test]
    fn antisymmetric_node_and_degenerate_error() {
        let u = UnitSystem::default();
        let p = pair([0.0, 0.0, 0.5], [0.2, 0.0, 0.0], Symmetry::Antisymmetric);
        let r = Vec3::new(0.1, 0.4, -0.3);
        assert_eq!(pair_wavefunction(&p, &r, &r, &u).unwrap(), Complex64::new(0.0, 0.0));
        let degenerate = pair([0.0; 3], [0.0; 3], Symmetry::Antisymmetric);
        assert_eq!(pair_wavefunction(&degenerate, &r, &r, &u), Err(Error::DegeneratePair));
        assert_eq!(charge_density_pair(&degenerate, &r, &u), Err(Error::DegeneratePair));
    }

    #[test]
    fn symmetric_coincident_pair_doubles_single_density() {
        let u = UnitSystem::default();
        let p = pair([0.0; 3], [0.0; 3], Symmetry::Symmetric);
        for r in [Vec3::zeros(), Vec3::new(0.5, -1.0, 2.0), Vec3::new(3.0, 0.0, 0.0)] {
            let rho = charge_density_pair(&p, &r, &u).unwrap();
            assert_relative_eq!(rho, 2.0 * charge_density_single(&p.shape, &r, &u), max_relative = 1e-15);
        }
    }

    #[test]
    fn antisymmetric_density_suppressed_at_origin() {
        let u = UnitSystem::default();
        let p = pair([0.0; 3], [0.6, 0.0, 0.0], Symmetry::Antisymmetric);
        let rho = charge_density_pair(&p, &ZERO3, &u).unwrap();
        let two_gaussians = 2.0 * charge_density_single(&p.shape, &ZERO3, &u);
        assert!(rho < two_gaussians, "{rho} !< {two_gaussians}");
    }

    #[test]
    fn density_ratio_is_gaussian() {
        let u = UnitSystem::default();
        let shape = PacketShape::natural();
        let rho0 = charge_density_single(&shape, &ZERO3, &u);
        assert_relative_eq!(rho0, (2.0 * PI).powf(-1.5), max_relative = 1e-15);
        for k in [1.0, 2.0, 3.0] {
            let r = Vec3::new(0.0, k, 0.0);
            let ratio = charge_density_single(&shape, &r, &u) / rho0;
            assert_relative_eq!(ratio, (-k * k / 2.0).exp(), max_relative = 1e-14);
        }
    }

    #[test]
    fn single_current_is_velocity_times_density() {
        let u = UnitSystem::new(1.0, 2.0, 3.0, 1.0).unwrap();
        let shape = PacketShape::natural();
        assert_eq!(current_density_single(&shape, &ZERO3, &Vec3::new(1.0, 2.0, 3.0), &u), ZERO3);
        let p0 = Vec3::new(0.3, -0.6, 1.2);
        let r = Vec3::new(0.2, 0.1, -0.4);
        let j = current_density_single(&shape, &p0, &r, &u);
        let rho = charge_density_single(&shape, &r, &u);
        for i in 0..3 {
            assert_relative_eq!(j[i] / rho, p0[i] / 6.0, max_relative = 1e-15);
        }
    }

    #[test]
    fn parses_symmetry_names() {
        assert_eq!("Symmetric".parse::<Symmetry>().unwrap(), Symmetry::Symmetric);
        assert_eq!("parallel".parse::<Symmetry>().unwrap(), Symmetry::Antisymmetric);
        assert!("sideways".parse::<Symmetry>().is_err());
    }
}
