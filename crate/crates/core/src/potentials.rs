//! Scalar and vector potentials of the single packet and of the pair.
//!
//! A normalized Gaussian cloud of width σ has the potential
//! `Φ(x) = erf(|x| / (√2 σ)) / |x|`, finite at the centre with
//! `Φ(0) = √(2/π) / σ`. Written through `Na` with `a² = x·x / (2σ²)`:
//!
//! ```text
//! Φ(x) = √2 / (π^{3/2} σ) · Na(a²)
//! ```
//!
//! The exchange part of the pair density is a Gaussian times `cos(2k0·r)`,
//! `k0 = p0/ħ`. Completing the square turns it into a Gaussian centred at the
//! imaginary point `∓2iσ²k0`, whose potential is `Φ` continued to the complex
//! vector `r ± 2iσ²k0`. The two conjugate terms add up to a real value.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{overlap_integral, PairConfig};
use crate::moments::QuadrupoleTensor;
use crate::special::na_of_square;
use crate::units::{PacketShape, UnitSystem};
use crate::Vec3;

/// Scalar potential and vector potential at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialSample {
    pub phi: f64,
    pub a: Vec3,
}

/// Potential values sampled on strictly increasing radii.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    radii: Vec<f64>,
    values: Vec<f64>,
}

impl RadialProfile {
    pub fn new(radii: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if radii.len() != values.len() {
            return Err(Error::InvalidParameter(format!(
                "profile has {} radii but {} values",
                radii.len(),
                values.len()
            )));
        }
        if radii.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter("profile radii must be strictly increasing".into()));
        }
        Ok(Self { radii, values })
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.radii.iter().copied().zip(self.values.iter().copied())
    }
}

/// Potential of a unit Gaussian cloud at a point with complex squared
/// distance `s` from its centre.
pub fn cloud_potential(sigma: f64, s: Complex64) -> Result<Complex64> {
    let na = na_of_square(s / (2.0 * sigma * sigma))?;
    Ok(na * (2f64.sqrt() / (PI.powf(1.5) * sigma)))
}

fn cloud_potential_real(sigma: f64, r_sq: f64) -> f64 {
    cloud_potential(sigma, Complex64::new(r_sq, 0.0))
        .expect("real arguments inside the switchover radius converge")
        .re
}

/// Scalar potential of the single packet at distance `r` from its centre:
/// `e0 erf(r/(√2σ))/r`, tending to `e0 √(2/π)/σ` at the centre and to `e0/r`
/// far away.
pub fn phi_single(shape: &PacketShape, r: f64, units: &UnitSystem) -> f64 {
    units.e0 * cloud_potential_real(shape.sigma(), r * r)
}

/// Vector potential of the single packet, `(p0/(m c)) φ(r)`.
pub fn a_single(shape: &PacketShape, p0: &Vec3, r: f64, units: &UnitSystem) -> Vec3 {
    p0 * (units.beta_factor() * phi_single(shape, r, units))
}

/// Both potentials of the single packet at a point.
pub fn sample_single(shape: &PacketShape, p0: &Vec3, r: &Vec3, units: &UnitSystem) -> PotentialSample {
    let phi = phi_single(shape, r.norm(), units);
    PotentialSample {
        phi,
        a: p0 * (units.beta_factor() * phi),
    }
}

/// Decomposition of the pair potential at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairPotentialTerms {
    /// Normalized contribution of the two displaced clouds.
    pub direct: f64,
    /// Normalized, signed exchange contribution.
    pub interference: f64,
    /// Imaginary part left over after adding the conjugate exchange terms.
    pub imaginary_residue: f64,
}

impl PairPotentialTerms {
    pub fn total(&self) -> f64 {
        self.direct + self.interference
    }
}

/// Pair potential split into direct and exchange parts.
pub fn phi_pair_terms(pair: &PairConfig, r: &Vec3, units: &UnitSystem) -> Result<PairPotentialTerms> {
    let norm = pair.norm_factor(units)?;
    let sigma = pair.shape.sigma();
    let n = overlap_integral(pair, units);
    let scale = units.e0 / norm;

    let direct = cloud_potential_real(sigma, (r - pair.r0).norm_squared())
        + cloud_potential_real(sigma, (r + pair.r0).norm_squared());

    // Squared length of the complex vector r + 2iσ²k0 (no conjugation).
    let shift = pair.p0 * (2.0 * sigma * sigma / units.hbar);
    let s = Complex64::new(r.norm_squared() - shift.norm_squared(), 2.0 * r.dot(&shift));
    let exchange = cloud_potential(sigma, s)? + cloud_potential(sigma, s.conj())?;
    let weight = pair.symmetry.sign() * n * n;

    Ok(PairPotentialTerms {
        direct: scale * direct,
        interference: scale * weight * exchange.re,
        imaginary_residue: scale * weight * exchange.im,
    })
}

/// Scalar potential of the pair; tends to `2e0/|r|` far away.
pub fn phi_pair(pair: &PairConfig, r: &Vec3, units: &UnitSystem) -> Result<f64> {
    Ok(phi_pair_terms(pair, r, units)?.total())
}

/// Vector potential of the pair, `(p0/(m c)) φ(r)`.
pub fn a_pair(pair: &PairConfig, r: &Vec3, units: &UnitSystem) -> Result<Vec3> {
    Ok(pair.p0 * (units.beta_factor() * phi_pair(pair, r, units)?))
}

/// Both potentials of the pair at a point.
pub fn sample_pair(pair: &PairConfig, r: &Vec3, units: &UnitSystem) -> Result<PotentialSample> {
    let phi = phi_pair(pair, r, units)?;
    Ok(PotentialSample {
        phi,
        a: pair.p0 * (units.beta_factor() * phi),
    })
}

/// Monopole plus quadrupole far field, `Q/r + n·D·n / (2 r³)`.
///
/// `r` must be expressed in the frame of `tensor`. The dipole term vanishes
/// for two particles with equal charge-to-mass ratio.
pub fn phi_far_field(tensor: &QuadrupoleTensor, total_charge: f64, r: &Vec3) -> f64 {
    let dist = r.norm();
    let n = r / dist;
    let quad = n.dot(&(tensor.to_matrix() * n));
    total_charge / dist + 0.5 * quad / (dist * dist * dist)
}

/// Single-packet potential on the given radii.
pub fn profile_single(shape: &PacketShape, radii: &[f64], units: &UnitSystem) -> Result<RadialProfile> {
    let values = radii.iter().map(|&r| phi_single(shape, r, units)).collect();
    RadialProfile::new(radii.to_vec(), values)
}

/// Pair potential at `r · direction` for each `r`.
pub fn profile_pair(
    pair: &PairConfig,
    direction: &Vec3,
    radii: &[f64],
    units: &UnitSystem,
) -> Result<RadialProfile> {
    let n = direction
        .try_normalize(0.0)
        .ok_or_else(|| Error::InvalidParameter("profile direction must be nonzero".into()))?;
    let values = radii
        .iter()
        .map(|&r| phi_pair(pair, &(n * r), units))
        .collect::<Result<Vec<_>>>()?;
    RadialProfile::new(radii.to_vec(), values)
}
