//! Physical constants and single-packet parameters.

use crate::error::{Error, Result};

/// The constants ħ, m, c and e0.
///
/// All fields are strictly positive. [`UnitSystem::default`] gives natural
/// units where every constant equals one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSystem {
    pub hbar: f64,
    pub mass: f64,
    pub c: f64,
    pub e0: f64,
}

impl Default for UnitSystem {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            mass: 1.0,
            c: 1.0,
            e0: 1.0,
        }
    }
}

impl UnitSystem {
    pub fn new(hbar: f64, mass: f64, c: f64, e0: f64) -> Result<Self> {
        for (name, value) in [("hbar", hbar), ("mass", mass), ("c", c), ("e0", e0)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite and positive, got {value}"
                )));
            }
        }
        Ok(Self { hbar, mass, c, e0 })
    }

    /// Velocity-to-light ratio carried by momentum `p`, i.e. `p / (m c)`.
    pub fn beta_factor(&self) -> f64 {
        1.0 / (self.mass * self.c)
    }
}

/// Width and culmination time of a single Gaussian packet.
///
/// The spreading rate `omega = ħ / (2 m σ²)` is derived at construction and
/// cannot be set independently.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketShape {
    sigma: f64,
    t0: f64,
    omega: f64,
}

impl PacketShape {
    pub fn new(sigma: f64, t0: f64, units: &UnitSystem) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "sigma must be finite and positive, got {sigma}"
            )));
        }
        if !t0.is_finite() {
            return Err(Error::InvalidParameter(format!("t0 must be finite, got {t0}")));
        }
        let omega = units.hbar / (2.0 * units.mass * sigma * sigma);
        Ok(Self { sigma, t0, omega })
    }

    /// Unit width, culmination at `t = 0`.
    pub fn natural() -> Self {
        Self::new(1.0, 0.0, &UnitSystem::default()).expect("unit width is valid")
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Width spreading factor `sqrt(1 + ω²(t − t0)²)`.
    pub fn spread_factor(&self, t: f64) -> f64 {
        let wt = self.omega * (t - self.t0);
        (1.0 + wt * wt).sqrt()
    }
}
