//! Quadrupole tensor and magnetic moment of the pair, their inversion for
//! `r0` and `p0`, and the angular surface of the quadrupole term.
//!
//! Closed forms are written in the adapted frame where `r0` lies along `z`
//! and `p0` in the `x–z` plane. With `s = 4σ⁴/ħ²` and `±` the symmetry sign:
//!
//! ```text
//! D_xx = e0 [ ±2N² s (p0z² − 2p0x²) − 2r0² ] / (1 ± N²)
//! D_yy = e0 [ ±2N² s (p0z² + p0x²) − 2r0² ] / (1 ± N²)
//! D_zz = e0 [ ±2N² s (p0x² − 2p0z²) + 4r0² ] / (1 ± N²)
//! D_xz = e0 [ ∓6N² s  p0x p0z ]             / (1 ± N²)
//! ```
//!
//! These follow from integrating the pair density against `3x_αx_β − r²δ_αβ`;
//! [`quadrupole_numeric`] does that integral by quadrature.

use std::f64::consts::PI;

use nalgebra::Matrix3;

use crate::error::{Error, Result};
use crate::model::{overlap_integral, PairConfig, PairDensity, Symmetry};
use crate::quadrature::{integrate, Envelope, QuadratureSpec};
use crate::units::{PacketShape, UnitSystem};
use crate::Vec3;

/// Traceless symmetric tensor with the components that survive in the
/// adapted frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadrupoleTensor {
    pub dxx: f64,
    pub dyy: f64,
    pub dzz: f64,
    pub dxz: f64,
}

impl QuadrupoleTensor {
    pub fn trace(&self) -> f64 {
        self.dxx + self.dyy + self.dzz
    }

    pub fn max_abs_component(&self) -> f64 {
        [self.dxx, self.dyy, self.dzz, self.dxz]
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn to_matrix(&self) -> Matrix3<f64> {
        Matrix3::new(
            self.dxx, 0.0, self.dxz, //
            0.0, self.dyy, 0.0, //
            self.dxz, 0.0, self.dzz,
        )
    }

    /// Keeps the adapted-frame components of a full symmetric matrix; the
    /// `xz` entry is the average of the two off-diagonal copies.
    pub fn from_matrix(m: &Matrix3<f64>) -> Self {
        Self {
            dxx: m[(0, 0)],
            dyy: m[(1, 1)],
            dzz: m[(2, 2)],
            dxz: 0.5 * (m[(0, 2)] + m[(2, 0)]),
        }
    }
}

/// Rotation from the lab frame into the adapted frame.
///
/// Rows of `matrix` are the adapted axes expressed in lab coordinates, so
/// `matrix * v_lab = v_adapted`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameRotation {
    pub matrix: Matrix3<f64>,
}

impl FrameRotation {
    /// Builds the rotation that puts `r0` on `z` and `p0` in the `x–z` plane
    /// with a non-negative `x` component.
    pub fn adapted(r0: &Vec3, p0: &Vec3) -> Self {
        let ez = r0
            .try_normalize(0.0)
            .or_else(|| p0.try_normalize(0.0))
            .unwrap_or_else(Vec3::z);
        let mut transverse = p0 - ez * ez.dot(p0);
        transverse -= ez * ez.dot(&transverse);
        // Below this the transverse part is rounding noise from a parallel p0.
        let ex = transverse
            .try_normalize(1e-12 * p0.norm())
            .unwrap_or_else(|| any_perpendicular(&ez));
        let ey = ez.cross(&ex);
        Self {
            matrix: Matrix3::from_rows(&[ex.transpose(), ey.transpose(), ez.transpose()]),
        }
    }

    pub fn to_adapted(&self, v: &Vec3) -> Vec3 {
        self.matrix * v
    }

    pub fn to_lab(&self, v: &Vec3) -> Vec3 {
        self.matrix.transpose() * v
    }

    /// `R T Rᵀ` for a tensor given in lab coordinates.
    pub fn tensor_to_adapted(&self, t: &Matrix3<f64>) -> Matrix3<f64> {
        self.matrix * t * self.matrix.transpose()
    }

    /// `Rᵀ T R` for a tensor given in adapted coordinates.
    pub fn tensor_to_lab(&self, t: &Matrix3<f64>) -> Matrix3<f64> {
        self.matrix.transpose() * t * self.matrix
    }
}

fn any_perpendicular(n: &Vec3) -> Vec3 {
    let trial = if n.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
    (trial - n * n.dot(&trial)).normalize()
}

/// Adapted-frame tensor together with the rotation that defines the frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptedQuadrupole {
    pub tensor: QuadrupoleTensor,
    pub rotation: FrameRotation,
}

/// Closed-form variant used by [`quadrupole_analytic_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum QuadrupoleForm {
    /// The form derived from the pair density.
    #[default]
    Derived,
    /// Off-diagonal component with `σ²` in place of `σ⁴`. Dimensionally
    /// wrong; kept as a fault-injection hook for the validation run.
    SigmaSquaredOffDiagonal,
}

/// Closed-form quadrupole tensor in the adapted frame.
pub fn quadrupole_analytic(pair: &PairConfig, units: &UnitSystem) -> Result<AdaptedQuadrupole> {
    quadrupole_analytic_with(pair, units, QuadrupoleForm::Derived)
}

pub fn quadrupole_analytic_with(
    pair: &PairConfig,
    units: &UnitSystem,
    form: QuadrupoleForm,
) -> Result<AdaptedQuadrupole> {
    let norm = pair.norm_factor(units)?;
    let rotation = FrameRotation::adapted(&pair.r0, &pair.p0);
    let p = rotation.to_adapted(&pair.p0);
    let (px, pz) = (p.x, p.z);
    let r0_sq = pair.r0.norm_squared();

    let sigma = pair.shape.sigma();
    let n_sq = overlap_integral(pair, units).powi(2);
    let sign = pair.symmetry.sign();
    let s = 4.0 * sigma.powi(4) / (units.hbar * units.hbar);
    let exchange = sign * 2.0 * n_sq * s;
    let scale = units.e0 / norm;

    let dxz = match form {
        QuadrupoleForm::Derived => -3.0 * exchange * px * pz,
        QuadrupoleForm::SigmaSquaredOffDiagonal => -3.0 * exchange * px * pz / (sigma * sigma),
    };
    let tensor = QuadrupoleTensor {
        dxx: scale * (exchange * (pz * pz - 2.0 * px * px) - 2.0 * r0_sq),
        dyy: scale * (exchange * (pz * pz + px * px) - 2.0 * r0_sq),
        dzz: scale * (exchange * (px * px - 2.0 * pz * pz) + 4.0 * r0_sq),
        dxz: scale * dxz,
    };
    Ok(AdaptedQuadrupole { tensor, rotation })
}

/// Full lab-frame tensor `∫ ρ (3 x xᵀ − r² I) d³r` by quadrature.
pub fn quadrupole_numeric_lab(
    pair: &PairConfig,
    units: &UnitSystem,
    spec: &QuadratureSpec,
) -> Result<Matrix3<f64>> {
    let density = PairDensity::new(pair, units)?;
    let envelope = Envelope::for_pair(pair);
    let result = integrate(
        |x: &Vec3| {
            let rho = density.charge(x);
            (x * x.transpose() * 3.0 - Matrix3::identity() * x.norm_squared()) * rho
        },
        &envelope,
        spec,
    )?;
    Ok(result.value)
}

/// Quadrupole tensor by quadrature, rotated into the adapted frame.
pub fn quadrupole_numeric(
    pair: &PairConfig,
    units: &UnitSystem,
    spec: &QuadratureSpec,
) -> Result<QuadrupoleTensor> {
    let lab = quadrupole_numeric_lab(pair, units, spec)?;
    let rotation = FrameRotation::adapted(&pair.r0, &pair.p0);
    Ok(QuadrupoleTensor::from_matrix(&rotation.tensor_to_adapted(&lab)))
}

/// Expectation value of the magnetic moment `(e0/2mc) ⟨L₁ + L₂⟩`.
///
/// ```text
/// ⟨m⟩ = −(e0 / (m c)) · (1 ∓ N²)/(1 ± N²) · r0 × p0
/// ```
///
/// The classical value `−(e0/(mc)) r0 × p0` is recovered as `N → 0`.
pub fn magnetic_moment(pair: &PairConfig, units: &UnitSystem) -> Result<Vec3> {
    let norm = pair.norm_factor(units)?;
    let n_sq = overlap_integral(pair, units).powi(2);
    let factor = (1.0 - pair.symmetry.sign() * n_sq) / norm;
    Ok(pair.r0.cross(&pair.p0) * (-units.e0 * units.beta_factor() * factor))
}

/// Classical magnetic moment of two point charges, `−(e0/(mc)) r0 × p0`.
pub fn classical_magnetic_moment(pair: &PairConfig, units: &UnitSystem) -> Vec3 {
    pair.r0.cross(&pair.p0) * (-units.e0 * units.beta_factor())
}

/// Inverts `D_zz = 4 e0 r0²`, valid when the packets barely overlap.
pub fn recover_r0(tensor: &QuadrupoleTensor, units: &UnitSystem) -> Result<f64> {
    if !(tensor.dzz > 0.0) {
        return Err(Error::DomainError(format!("dzz must be positive, got {}", tensor.dzz)));
    }
    Ok(0.5 * (tensor.dzz / units.e0).sqrt())
}

/// Relative momentum recovered from the tensor in the strong-overlap regime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumRecovery {
    pub p0x: f64,
    pub p0z: f64,
    /// Self-consistent overlap `N` implied by the recovered parameters.
    pub overlap: f64,
    /// Self-consistent `|r0|` used while iterating for `N`.
    pub r0: f64,
}

/// Recovers `(p0x, p0z)` for a symmetric pair with `N → 1`.
///
/// At `N = 1` the transverse component is `p0x = (ħ/2σ²) sqrt(−(D_zz + 2D_xx)/(3e0))`.
/// For `N < 1` the inverse uses
///
/// ```text
/// p0x² = −(D_zz + 2D_xx) ħ² (1 + N²) / (24 N² e0 σ⁴)
/// p0z  = −D_xz ħ² (1 + N²) / (24 N² e0 σ⁴ p0x)
/// ```
///
/// with `N` iterated to a fixed point together with `r0` from `D_zz − D_xx`.
pub fn recover_p0(
    tensor: &QuadrupoleTensor,
    shape: &PacketShape,
    units: &UnitSystem,
) -> Result<MomentumRecovery> {
    let combo = tensor.dzz + 2.0 * tensor.dxx;
    if !(combo < 0.0) {
        return Err(Error::DomainError(format!(
            "dzz + 2 dxx must be negative, got {combo}"
        )));
    }
    let sigma = shape.sigma();
    let hbar = units.hbar;
    let e0 = units.e0;
    let s = 4.0 * sigma.powi(4) / (hbar * hbar);

    let mut n_sq = 1.0;
    let mut p0x = 0.0;
    let mut p0z = 0.0;
    let mut r0_sq = 0.0;
    for _ in 0..500 {
        p0x = (-combo * (1.0 + n_sq) / (6.0 * n_sq * e0 * s)).sqrt();
        if tensor.dxz != 0.0 && p0x == 0.0 {
            return Err(Error::DivisionByZero("p0x = 0 with nonzero dxz".into()));
        }
        p0z = if tensor.dxz == 0.0 {
            0.0
        } else {
            -tensor.dxz * (1.0 + n_sq) / (6.0 * n_sq * e0 * s * p0x)
        };
        r0_sq = (((1.0 + n_sq) * (tensor.dzz - tensor.dxx) / e0
            - 6.0 * n_sq * s * (p0x * p0x - p0z * p0z))
            / 6.0)
            .max(0.0);
        let next = (-4.0 * sigma * sigma * (p0x * p0x + p0z * p0z) / (hbar * hbar)
            - r0_sq / (sigma * sigma))
            .exp();
        let done = (next - n_sq).abs() <= 1e-15 * n_sq;
        n_sq = next;
        if done {
            break;
        }
    }
    Ok(MomentumRecovery {
        p0x,
        p0z,
        overlap: n_sq.sqrt(),
        r0: r0_sq.sqrt(),
    })
}

/// `n·D·n` at polar angle `theta` and azimuth `phi` of the adapted frame.
pub fn angular_form(tensor: &QuadrupoleTensor, theta: f64, phi: f64) -> f64 {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    tensor.dzz * ct * ct
        + (tensor.dxx * cp * cp + tensor.dyy * sp * sp) * st * st
        + 2.0 * tensor.dxz * ct * st * cp
}

/// Quadrupole term sampled over the sphere.
///
/// `values[i][j]` is the signed `n·D·n` at `(theta[i], phi[j])`; the radial
/// surface is its absolute value. Angles are in the adapted frame.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularSurfaceMesh {
    pub theta: Vec<f64>,
    pub phi: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

impl AngularSurfaceMesh {
    pub fn radius(&self, i: usize, j: usize) -> f64 {
        self.values[i][j].abs()
    }

    /// `+1`, `−1` or `0` for the lobe containing grid point `(i, j)`.
    pub fn sign(&self, i: usize, j: usize) -> i8 {
        let v = self.values[i][j];
        if v > 0.0 {
            1
        } else if v < 0.0 {
            -1
        } else {
            0
        }
    }

    /// Surface vertex `|n·D·n| n̂` for grid point `(i, j)`.
    pub fn vertex(&self, i: usize, j: usize) -> Vec3 {
        let (st, ct) = self.theta[i].sin_cos();
        let (sp, cp) = self.phi[j].sin_cos();
        Vec3::new(st * cp, st * sp, ct) * self.radius(i, j)
    }

    /// Largest spread of values over `phi` at a fixed `theta` row.
    pub fn azimuthal_variation(&self, i: usize) -> f64 {
        let row = &self.values[i];
        let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = row.iter().copied().fold(f64::INFINITY, f64::min);
        max - min
    }
}

/// Samples the quadrupole term of the closed-form tensor on a full
/// `n_theta × n_phi` grid, `theta ∈ [0, π]`, `phi ∈ [0, 2π]`, endpoints
/// included.
pub fn surface_mesh(
    pair: &PairConfig,
    n_theta: usize,
    n_phi: usize,
    units: &UnitSystem,
) -> Result<AngularSurfaceMesh> {
    if n_theta < 2 || n_phi < 2 {
        return Err(Error::InvalidParameter(format!(
            "surface grid needs at least 2×2 points, got {n_theta}×{n_phi}"
        )));
    }
    let tensor = quadrupole_analytic(pair, units)?.tensor;
    Ok(surface_from_tensor(&tensor, n_theta, n_phi))
}

pub fn surface_from_tensor(tensor: &QuadrupoleTensor, n_theta: usize, n_phi: usize) -> AngularSurfaceMesh {
    let theta = linspace(0.0, PI, n_theta);
    let phi = linspace(0.0, 2.0 * PI, n_phi);
    let values = theta
        .iter()
        .map(|&t| phi.iter().map(|&p| angular_form(tensor, t, p)).collect())
        .collect();
    AngularSurfaceMesh { theta, phi, values }
}

fn linspace(start: f64, end: f64, n: usize) -> Vec<f64> {
    let step = (end - start) / (n - 1) as f64;
    (0..n)
        .map(|i| if i + 1 == n { end } else { start + step * i as f64 })
        .collect()
}

/// Named parameter sets for the quadrupole surfaces, in natural units with
/// `σ = 1` and a symmetric state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurfacePreset {
    /// `r0 ∥ p0`, `r0 = 0.42`, `p0 = 0.3`.
    Fig3,
    /// `r0 ∥ p0`, `r0 = 0.42`, `p0 = 0.23`.
    Fig4,
    /// `r0 = 0.42`, `p0 = 0`.
    Fig5,
    /// `r0 ⊥ p0`, `r0 = 0.7`, `p0 = 0.4`.
    Fig6,
}

impl SurfacePreset {
    pub const ALL: [SurfacePreset; 4] = [Self::Fig3, Self::Fig4, Self::Fig5, Self::Fig6];

    pub fn name(self) -> &'static str {
        match self {
            Self::Fig3 => "fig3",
            Self::Fig4 => "fig4",
            Self::Fig5 => "fig5",
            Self::Fig6 => "fig6",
        }
    }

    pub fn pair(self) -> PairConfig {
        let (r0, p0) = match self {
            Self::Fig3 => (Vec3::new(0.0, 0.0, 0.42), Vec3::new(0.0, 0.0, 0.3)),
            Self::Fig4 => (Vec3::new(0.0, 0.0, 0.42), Vec3::new(0.0, 0.0, 0.23)),
            Self::Fig5 => (Vec3::new(0.0, 0.0, 0.42), Vec3::zeros()),
            Self::Fig6 => (Vec3::new(0.0, 0.0, 0.7), Vec3::new(0.4, 0.0, 0.0)),
        };
        PairConfig::new(PacketShape::natural(), r0, p0, Symmetry::Symmetric)
    }
}

impl std::str::FromStr for SurfacePreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| {
                Error::InvalidParameter(format!("unknown preset '{s}' (expected fig3, fig4, fig5 or fig6)"))
            })
    }
}
