//! Drive parameters: the per-mode displacement `lambda_i(t) = i q exp(i w_i t)`
//! seen by an electron of charge `e` encircling the quantized flux of mode `i`.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Dimensionless electron charge `(4 pi / 137)^{1/2}`.
pub fn default_charge() -> f64 {
    (4.0 * PI / 137.0).sqrt()
}

/// Coupling, charge and per-mode angular frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct DriveParams {
    pub xi: f64,
    pub e_charge: f64,
    pub omegas: Vec<f64>,
}

impl DriveParams {
    /// `xi = 1` and the default charge.
    pub fn with_omegas(omegas: Vec<f64>) -> Self {
        Self {
            xi: 1.0,
            e_charge: default_charge(),
            omegas,
        }
    }

    /// Scaled charge `q = xi e / sqrt(2)`, always recomputed.
    pub fn q(&self) -> f64 {
        self.xi * self.e_charge / std::f64::consts::SQRT_2
    }

    pub fn n_modes(&self) -> usize {
        self.omegas.len()
    }

    pub fn validate(&self) -> Result<()> {
        if !self.xi.is_finite() || !self.e_charge.is_finite() {
            return Err(Error::InvalidArgument(
                "xi and charge must be finite".into(),
            ));
        }
        if self.omegas.is_empty() || self.omegas.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidArgument(
                "omegas must be a nonempty list of finite values".into(),
            ));
        }
        Ok(())
    }
}

/// One displacement argument per mode.
#[derive(Debug, Clone, PartialEq)]
pub struct DriveAt {
    pub lambdas: Vec<C64>,
}

impl DriveAt {
    pub fn new(lambdas: Vec<C64>) -> Self {
        Self { lambdas }
    }

    pub fn zeros(modes: usize) -> Self {
        Self {
            lambdas: vec![C64::new(0.0, 0.0); modes],
        }
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    /// Keeps only mode `mode`; every other lambda is zero (`D(0) = 1`).
    pub fn only(&self, mode: usize) -> DriveAt {
        let mut out = DriveAt::zeros(self.lambdas.len());
        out.lambdas[mode] = self.lambdas[mode];
        out
    }

    pub fn negated(&self) -> DriveAt {
        DriveAt {
            lambdas: self.lambdas.iter().map(|l| -l).collect(),
        }
    }
}

/// `lambda_i = i q exp(i w_i t)` for every mode.
pub fn drive_lambda(d: &DriveParams, t: f64) -> DriveAt {
    let q = d.q();
    DriveAt {
        lambdas: d
            .omegas
            .iter()
            .map(|&w| C64::new(0.0, q) * C64::from_polar(1.0, w * t))
            .collect(),
    }
}
