//! Brute-force 3D integration, independent of every closed form in the crate.
//!
//! Two volume schemes are available:
//!
//! * [`QuadratureScheme::GaussHermite`]: tensor-product Gauss–Hermite rules
//!   centred on the Gaussian envelopes of the integrand. With several centres
//!   the integrand is split by a Gaussian partition of unity and each piece is
//!   integrated around its own centre.
//! * [`QuadratureScheme::AdaptiveCartesian`]: composite Gauss–Legendre on a
//!   box, doubling the panel count until two levels agree.
//!
//! Errors are reported relative to `∫|f|`, which equals the usual relative
//! error for one-signed integrands and stays meaningful for integrands that
//! cancel (odd functions, oscillating exchange terms).
//!
//! The Coulomb integral `∫ ρ(r') / |r − r'| d³r'` has a kernel singularity
//! and is done separately in spherical coordinates centred at `r`, where the
//! `R²` Jacobian cancels the `1/R` ([`potential_numeric`]).

use std::collections::BinaryHeap;
use std::cmp::Ordering;
use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use nalgebra::Matrix3;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{pair_orbitals, PairConfig};
use crate::units::UnitSystem;
use crate::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureScheme {
    GaussHermite,
    AdaptiveCartesian,
}

/// Quadrature controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub scheme: QuadratureScheme,
    /// Nodes per axis (Gauss–Hermite) or base nodes per axis (box scheme).
    pub points_per_axis: usize,
    pub target_rel_error: f64,
    /// Box half-width beyond the outermost envelope centre, in units of the
    /// envelope scale. Only used by the box scheme.
    pub box_half_width: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            scheme: QuadratureScheme::GaussHermite,
            points_per_axis: 48,
            target_rel_error: 1e-7,
            box_half_width: 10.0,
        }
    }
}

impl QuadratureSpec {
    pub fn adaptive_cartesian() -> Self {
        Self {
            scheme: QuadratureScheme::AdaptiveCartesian,
            ..Self::default()
        }
    }

    pub fn with_points(mut self, points_per_axis: usize) -> Self {
        self.points_per_axis = points_per_axis;
        self
    }

    pub fn with_target(mut self, target_rel_error: f64) -> Self {
        self.target_rel_error = target_rel_error;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.points_per_axis < 8 {
            return Err(Error::InvalidParameter(format!(
                "points_per_axis must be at least 8, got {}",
                self.points_per_axis
            )));
        }
        if !(self.target_rel_error > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "target_rel_error must be positive, got {}",
                self.target_rel_error
            )));
        }
        if !(self.box_half_width > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "box_half_width must be positive, got {}",
                self.box_half_width
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult<T> {
    pub value: T,
    pub estimated_rel_error: f64,
}

/// Values that can be accumulated by the integrators.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

impl QuadValue for Vec3 {
    fn zero() -> Self {
        Vec3::zeros()
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

impl QuadValue for Matrix3<f64> {
    fn zero() -> Self {
        Matrix3::zeros()
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Gaussian envelope(s) the integrand is concentrated in.
#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    pub centers: Vec<Vec3>,
    /// Standard deviation of the envelope Gaussians.
    pub scale: f64,
}

impl Envelope {
    pub fn gaussian(center: Vec3, scale: f64) -> Self {
        Self {
            centers: vec![center],
            scale,
        }
    }

    /// Envelope for pair densities and pair amplitudes: one centre at the
    /// origin while the packets overlap, the two packet centres once they are
    /// more than five widths apart.
    pub fn for_pair(pair: &PairConfig) -> Self {
        let sigma = pair.shape.sigma();
        if pair.r0.norm() <= 5.0 * sigma {
            Self::gaussian(Vec3::zeros(), sigma)
        } else {
            Self {
                centers: vec![pair.r0, -pair.r0],
                scale: sigma,
            }
        }
    }
}

/// Nodes and weights of the `n`-point Gauss–Hermite rule for the weight
/// `exp(−t²)`, ascending.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let pim4 = PI.powf(-0.25);
    let m = n.div_ceil(2);
    let nf = n as f64;
    let mut z = 0.0;
    for i in 0..m {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * nodes[0],
            3 => 1.91 * z - 0.91 * nodes[1],
            _ => 2.0 * z - nodes[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        nodes[i] = z;
        weights[i] = 2.0 / (pp * pp);
    }
    // Newton above fills the positive half in descending order; mirror it.
    let mut pairs: Vec<(f64, f64)> = Vec::with_capacity(n);
    for i in 0..m {
        pairs.push((nodes[i], weights[i]));
        if !(n % 2 == 1 && i == m - 1) {
            pairs.push((-nodes[i], weights[i]));
        }
    }
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal));
    pairs.into_iter().unzip()
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[−1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf + 1.0) * z * p2 - jf * p3) / (jf + 1.0);
            }
            pp = nf * (z * p1 - p2) / (z * z - 1.0);
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-16 {
                break;
            }
        }
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        weights[n - 1 - i] = weights[i];
    }
    (nodes, weights)
}

/// Integrates `f` over all of space.
pub fn integrate<T, F>(f: F, envelope: &Envelope, spec: &QuadratureSpec) -> Result<QuadratureResult<T>>
where
    T: QuadValue,
    F: Fn(&Vec3) -> T,
{
    spec.validate()?;
    if envelope.centers.is_empty() || !(envelope.scale > 0.0) {
        return Err(Error::InvalidParameter("envelope needs a centre and a positive scale".into()));
    }
    let (value, coarse, l1) = match spec.scheme {
        QuadratureScheme::GaussHermite => {
            let n = spec.points_per_axis;
            let fine = gauss_hermite_sum(&f, envelope, n);
            let coarse = gauss_hermite_sum(&f, envelope, n - n / 4);
            (fine.0, coarse.0, fine.1)
        }
        QuadratureScheme::AdaptiveCartesian => return integrate_box(&f, envelope, spec),
    };
    finish(value, coarse, l1, spec.target_rel_error)
}

/// Scalar specialisation of [`integrate`].
pub fn integrate_scalar<F>(f: F, envelope: &Envelope, spec: &QuadratureSpec) -> Result<QuadratureResult<f64>>
where
    F: Fn(&Vec3) -> f64,
{
    integrate(f, envelope, spec)
}

fn finish<T: QuadValue>(value: T, coarse: T, l1: f64, target: f64) -> Result<QuadratureResult<T>> {
    let diff = (value - coarse).magnitude();
    let estimated_rel_error = if l1 > 0.0 { diff / l1 } else { 0.0 };
    if !(estimated_rel_error <= target) {
        return Err(Error::QuadratureFailure {
            estimated: estimated_rel_error,
            target,
        });
    }
    Ok(QuadratureResult {
        value,
        estimated_rel_error,
    })
}

/// Returns `(∫f, ∫|f|)` with an `n`-point Gauss–Hermite product rule per
/// envelope centre.
fn gauss_hermite_sum<T, F>(f: &F, envelope: &Envelope, n: usize) -> (T, f64)
where
    T: QuadValue,
    F: Fn(&Vec3) -> T,
{
    let (t, w) = gauss_hermite(n);
    // ∫ f = (√2 s)³ Σ w_i w_j w_k e^{|t|²} f(c + √2 s t) per centre.
    let stretch = 2f64.sqrt() * envelope.scale;
    let jac = stretch.powi(3);
    let weighted: Vec<f64> = t.iter().zip(&w).map(|(ti, wi)| wi * (ti * ti).exp()).collect();
    let inv_two_s2 = 1.0 / (2.0 * envelope.scale * envelope.scale);
    let multi = envelope.centers.len() > 1;

    let mut total = T::zero();
    let mut l1 = 0.0;
    for (ci, centre) in envelope.centers.iter().enumerate() {
        for (i, &ti) in t.iter().enumerate() {
            for (j, &tj) in t.iter().enumerate() {
                let wij = weighted[i] * weighted[j];
                for (k, &tk) in t.iter().enumerate() {
                    let x = centre + Vec3::new(ti, tj, tk) * stretch;
                    let mut weight = wij * weighted[k] * jac;
                    if multi {
                        // Partition of unity: this centre's share of f.
                        let own = (-(x - centre).norm_squared() * inv_two_s2).exp();
                        let all: f64 = envelope
                            .centers
                            .iter()
                            .map(|c| (-(x - c).norm_squared() * inv_two_s2).exp())
                            .sum();
                        if all == 0.0 {
                            continue;
                        }
                        weight *= own / all;
                        let _ = ci;
                    }
                    let v = f(&x);
                    l1 += weight * v.magnitude();
                    total = total + v * weight;
                }
            }
        }
    }
    (total, l1)
}

fn integrate_box<T, F>(f: &F, envelope: &Envelope, spec: &QuadratureSpec) -> Result<QuadratureResult<T>>
where
    T: QuadValue,
    F: Fn(&Vec3) -> T,
{
    const PANEL_POINTS: usize = 8;
    const MAX_POINTS_PER_AXIS: usize = 256;
    let reach = spec.box_half_width * envelope.scale;
    let mut lo = Vec3::repeat(f64::INFINITY);
    let mut hi = Vec3::repeat(f64::NEG_INFINITY);
    for c in &envelope.centers {
        lo = lo.inf(&(c - Vec3::repeat(reach)));
        hi = hi.sup(&(c + Vec3::repeat(reach)));
    }
    let (gx, gw) = gauss_legendre(PANEL_POINTS);

    let mut panels = spec.points_per_axis.div_ceil(PANEL_POINTS);
    let mut previous = composite_sum(f, &lo, &hi, panels, &gx, &gw);
    loop {
        panels *= 2;
        let current = composite_sum(f, &lo, &hi, panels, &gx, &gw);
        let diff = (current.0 - previous.0).magnitude();
        let est = if current.1 > 0.0 { diff / current.1 } else { 0.0 };
        if est <= spec.target_rel_error || panels * PANEL_POINTS * 2 > MAX_POINTS_PER_AXIS {
            return finish(current.0, previous.0, current.1, spec.target_rel_error);
        }
        previous = current;
    }
}

fn composite_sum<T, F>(f: &F, lo: &Vec3, hi: &Vec3, panels: usize, gx: &[f64], gw: &[f64]) -> (T, f64)
where
    T: QuadValue,
    F: Fn(&Vec3) -> T,
{
    let axis = |d: usize| -> Vec<(f64, f64)> {
        let h = (hi[d] - lo[d]) / panels as f64;
        (0..panels)
            .flat_map(|p| {
                let mid = lo[d] + h * (p as f64 + 0.5);
                gx.iter().zip(gw).map(move |(x, w)| (mid + 0.5 * h * x, 0.5 * h * w))
            })
            .collect()
    };
    let (ax, ay, az) = (axis(0), axis(1), axis(2));
    let mut total = T::zero();
    let mut l1 = 0.0;
    for &(x, wx) in &ax {
        for &(y, wy) in &ay {
            let wxy = wx * wy;
            for &(z, wz) in &az {
                let v = f(&Vec3::new(x, y, z));
                let w = wxy * wz;
                l1 += w * v.magnitude();
                total = total + v * w;
            }
        }
    }
    (total, l1)
}

// Gauss–Kronrod 7/15 nodes and weights (QUADPACK qk15).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut values = [0.0; 15];
    values[7] = f(centre);
    for j in 0..7 {
        let dx = half * XGK[j];
        values[j] = f(centre - dx);
        values[14 - j] = f(centre + dx);
    }
    let weight = |i: usize| WGK[if i <= 7 { i } else { 14 - i }];
    let kronrod: f64 = (0..15).map(|i| weight(i) * values[i]).sum();
    let mut gauss = WG[3] * values[7];
    for j in (1..7).step_by(2) {
        gauss += WG[j / 2] * (values[j] + values[14 - j]);
    }
    let value = kronrod * half;
    let err = ((kronrod - gauss) * half).abs();
    (value, err)
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.partial_cmp(&other.err).unwrap_or(Ordering::Equal)
    }
}

/// Globally adaptive Gauss–Kronrod on `[a, b]` with initial breakpoints.
/// Returns `(value, error estimate)`.
pub(crate) fn adaptive_gk<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    rel_tol: f64,
    max_segments: usize,
) -> (f64, f64) {
    let mut cuts: Vec<f64> = breakpoints.iter().copied().filter(|&x| x > a && x < b).collect();
    cuts.push(a);
    cuts.push(b);
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap_or(Ordering::Equal));
    cuts.dedup();

    let mut heap = BinaryHeap::new();
    let mut value = 0.0;
    let mut err = 0.0;
    for w in cuts.windows(2) {
        let (v, e) = gk15(&mut f, w[0], w[1]);
        value += v;
        err += e;
        heap.push(Segment { a: w[0], b: w[1], value: v, err: e });
    }
    while err > rel_tol * value.abs() && heap.len() < max_segments {
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        let left = gk15(&mut f, worst.a, mid);
        let right = gk15(&mut f, mid, worst.b);
        value += left.0 + right.0 - worst.value;
        err += left.1 + right.1 - worst.err;
        heap.push(Segment { a: worst.a, b: mid, value: left.0, err: left.1 });
        heap.push(Segment { a: mid, b: worst.b, value: right.0, err: right.1 });
    }
    // Re-add in a fixed order so the result does not depend on heap history.
    let mut segments = heap.into_vec();
    segments.sort_by(|x, y| x.a.partial_cmp(&y.a).unwrap_or(Ordering::Equal));
    let value = segments.iter().map(|s| s.value).sum();
    let err = segments.iter().map(|s| s.err).sum();
    (value, err)
}

/// Trapezoid rule over one period `[0, 2π)`, doubling from `start` nodes until
/// two levels agree. Spectrally accurate for smooth periodic integrands.
fn periodic_trapezoid<F: FnMut(f64) -> f64>(mut f: F, start: usize, rel_tol: f64) -> f64 {
    const MAX_NODES: usize = 1 << 14;
    let mut n = start;
    let mut sum: f64 = (0..n).map(|k| f(2.0 * PI * k as f64 / n as f64)).sum();
    let mut value = sum * 2.0 * PI / n as f64;
    while n < MAX_NODES {
        // New nodes sit halfway between the old ones.
        let extra: f64 = (0..n).map(|k| f(2.0 * PI * (k as f64 + 0.5) / n as f64)).sum();
        sum += extra;
        n *= 2;
        let next = sum * 2.0 * PI / n as f64;
        let done = (next - value).abs() <= rel_tol * next.abs();
        value = next;
        if done {
            break;
        }
    }
    value
}

/// Coulomb potential `∫ ρ(r') / |r − r'| d³r'` of a density concentrated in
/// `envelope`, by nested adaptive quadrature in spherical coordinates centred
/// at `r`.
///
/// The polar axis points from `r` towards the envelope centroid. Only
/// `target_rel_error` of `spec` is consulted.
pub fn potential_numeric<F>(
    density: F,
    envelope: &Envelope,
    r: &Vec3,
    spec: &QuadratureSpec,
) -> Result<QuadratureResult<f64>>
where
    F: Fn(&Vec3) -> f64,
{
    spec.validate()?;
    let s = envelope.scale;
    let centroid = envelope.centers.iter().fold(Vec3::zeros(), |acc, c| acc + c)
        / envelope.centers.len() as f64;
    let axis = (centroid - r).try_normalize(1e-12 * s).unwrap_or_else(Vec3::z);
    let e1 = {
        let trial = if axis.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
        (trial - axis * axis.dot(&trial)).normalize()
    };
    let e2 = axis.cross(&e1);

    let mut radial_breaks = Vec::new();
    let mut polar_breaks = Vec::new();
    let mut reach: f64 = 0.0;
    for c in &envelope.centers {
        let d = c - r;
        let dist = d.norm();
        reach = reach.max(dist);
        for k in [-6.0, -3.0, 0.0, 3.0, 6.0] {
            radial_breaks.push(dist + k * s);
        }
        if dist > 0.0 {
            polar_breaks.push((d.dot(&axis) / dist).clamp(-1.0, 1.0).acos());
        }
    }
    let r_max = reach + 14.0 * s;
    let outer_tol = 0.25 * spec.target_rel_error;
    let inner_tol = 0.25 * spec.target_rel_error;
    const MAX_SEGMENTS: usize = 400;

    let (value, err) = adaptive_gk(
        |radius| {
            if radius == 0.0 {
                return 0.0;
            }
            let (shell, _) = adaptive_gk(
                |theta| {
                    let (st, ct) = theta.sin_cos();
                    let start = (8.0 * radius * st / s).ceil().max(8.0) as usize;
                    let ring = periodic_trapezoid(
                        |phi| {
                            let (sp, cp) = phi.sin_cos();
                            let dir = e1 * (st * cp) + e2 * (st * sp) + axis * ct;
                            density(&(r + dir * radius))
                        },
                        start.next_power_of_two(),
                        inner_tol,
                    );
                    ring * st
                },
                0.0,
                PI,
                &polar_breaks,
                inner_tol,
                MAX_SEGMENTS,
            );
            shell * radius
        },
        0.0,
        r_max,
        &radial_breaks,
        outer_tol,
        MAX_SEGMENTS,
    );
    let estimated_rel_error = if value != 0.0 { err / value.abs() } else { err };
    if !(estimated_rel_error <= spec.target_rel_error) {
        return Err(Error::QuadratureFailure {
            estimated: estimated_rel_error,
            target: spec.target_rel_error,
        });
    }
    Ok(QuadratureResult {
        value,
        estimated_rel_error,
    })
}

/// Overlap `⟨ψa|ψb⟩` by quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapEstimate {
    pub modulus: f64,
    pub phase: f64,
    pub estimated_rel_error: f64,
}

pub fn overlap_numeric(pair: &PairConfig, spec: &QuadratureSpec, units: &UnitSystem) -> Result<OverlapEstimate> {
    // ψa*ψb is a Gaussian of width σ centred midway between the packets.
    let envelope = Envelope::gaussian(Vec3::zeros(), pair.shape.sigma());
    let result = integrate(
        |x: &Vec3| {
            let (a, b) = pair_orbitals(pair, x, units);
            a.conj() * b
        },
        &envelope,
        spec,
    )?;
    Ok(OverlapEstimate {
        modulus: result.value.norm(),
        phase: result.value.arg(),
        estimated_rel_error: result.estimated_rel_error,
    })
}

/// `r × (−iħ∇ψ)` by central differences.
fn angular_momentum_on<F: Fn(&Vec3) -> Complex64>(psi: &F, x: &Vec3, hbar: f64, h: f64) -> [Complex64; 3] {
    let mut grad = [Complex64::new(0.0, 0.0); 3];
    for (d, g) in grad.iter_mut().enumerate() {
        let mut step = Vec3::zeros();
        step[d] = h;
        *g = (psi(&(x + step)) - psi(&(x - step))) / (2.0 * h);
    }
    let minus_i_hbar = Complex64::new(0.0, -hbar);
    let p = [grad[0] * minus_i_hbar, grad[1] * minus_i_hbar, grad[2] * minus_i_hbar];
    [
        p[2] * x.y - p[1] * x.z,
        p[0] * x.z - p[2] * x.x,
        p[1] * x.x - p[0] * x.y,
    ]
}

/// Magnetic moment `(e0/2c) ⟨Ψ| r₁×V₁ + r₂×V₂ |Ψ⟩ / ⟨Ψ|Ψ⟩` by quadrature.
///
/// The two-particle integrand is a sum of products of one-particle factors;
/// each 3D factor (`⟨i|j⟩`, `⟨i|r×p|j⟩`) is integrated numerically, with
/// the momentum operator applied by central differences.
pub fn magnetic_moment_numeric(pair: &PairConfig, spec: &QuadratureSpec, units: &UnitSystem) -> Result<Vec3> {
    let sigma = pair.shape.sigma();
    let h = 1e-4 * sigma;
    let psi_a = |x: &Vec3| pair_orbitals(pair, x, units).0;
    let psi_b = |x: &Vec3| pair_orbitals(pair, x, units).1;
    // ψi*ψj is concentrated midway between the two packet centres.
    let around = |centre: Vec3| Envelope::gaussian(centre, sigma);
    let (on_a, on_b, between) = (around(pair.r0), around(-pair.r0), around(Vec3::zeros()));

    type Orbital<'a> = &'a dyn Fn(&Vec3) -> Complex64;
    let overlap = |left: Orbital, right: Orbital, envelope: &Envelope| {
        integrate(|x: &Vec3| left(x).conj() * right(x), envelope, spec).map(|r| r.value)
    };
    let ang = |left: Orbital, right: Orbital, envelope: &Envelope| -> Result<[Complex64; 3]> {
        let mut out = [Complex64::new(0.0, 0.0); 3];
        for (d, slot) in out.iter_mut().enumerate() {
            *slot = integrate(
                |x: &Vec3| left(x).conj() * angular_momentum_on(&right, x, units.hbar, h)[d],
                envelope,
                spec,
            )?
            .value;
        }
        Ok(out)
    };

    let aa = overlap(&psi_a, &psi_a, &on_a)?;
    let bb = overlap(&psi_b, &psi_b, &on_b)?;
    let ab = overlap(&psi_a, &psi_b, &between)?;
    let ba = overlap(&psi_b, &psi_a, &between)?;
    let l_aa = ang(&psi_a, &psi_a, &on_a)?;
    let l_bb = ang(&psi_b, &psi_b, &on_b)?;
    let l_ab = ang(&psi_a, &psi_b, &between)?;
    let l_ba = ang(&psi_b, &psi_a, &between)?;

    let sign = pair.symmetry.sign();
    // Unnormalized Ψ = ψa(1)ψb(2) ± ψa(2)ψb(1).
    let norm = 2.0 * (aa * bb + sign * ab * ba);
    let mut moment = Vec3::zeros();
    for d in 0..3 {
        // Particle 1 and particle 2 contribute equally.
        let l = 2.0 * (l_aa[d] * bb + l_bb[d] * aa + sign * l_ab[d] * ba + sign * l_ba[d] * ab);
        moment[d] = (l / norm).re;
    }
    Ok(moment * (0.5 * units.e0 * units.beta_factor()))
}
