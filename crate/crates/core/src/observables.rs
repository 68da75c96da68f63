//! Measurable quantities derived from a Weyl value: fringe intensity,
//! visibility, phase shift and SQUID current.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Screen coordinate `x` (phase difference of the two paths) and the Weyl
/// value of the mode irradiating the interferometer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FringeQuery {
    pub x: f64,
    pub w: C64,
}

/// `I(x) = 1 + |w| cos(x + arg w)` for equal beam splitting.
pub fn intensity(fq: FringeQuery) -> f64 {
    1.0 + fq.w.norm() * (fq.x + phase_shift(fq.w)).cos()
}

pub fn visibility(w: C64) -> f64 {
    w.norm()
}

/// `arg w` in `(-pi, pi]`; zero when `w == 0` (see [`Fringe::phase_undefined`]).
pub fn phase_shift(w: C64) -> f64 {
    if w == C64::new(0.0, 0.0) {
        0.0
    } else {
        w.arg()
    }
}

/// Visibility and phase shift of one interferometer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fringe {
    pub visibility: f64,
    pub phase_shift: f64,
    /// Set when the visibility is exactly zero and no phase can be read off.
    pub phase_undefined: bool,
}

impl Fringe {
    pub fn of(w: C64) -> Self {
        Self {
            visibility: visibility(w),
            phase_shift: phase_shift(w),
            phase_undefined: w == C64::new(0.0, 0.0),
        }
    }
}

/// Current `I_cr Im(w)` in a single-junction SQUID ring.
pub fn squid_current(w: C64, i_cr: f64) -> Result<f64> {
    if i_cr.is_nan() || i_cr <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "critical current must be > 0, got {i_cr}"
        )));
    }
    Ok(i_cr * w.im)
}

/// `(I_max - I_min) / (I_max + I_min)` over sampled intensities.
pub fn sampled_visibility(intensities: &[f64]) -> f64 {
    let (lo, hi) = intensities
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    (hi - lo) / (hi + lo)
}

/// Least-squares fit of `I(x) = c + a cos x + b sin x` to samples, returning
/// the recovered fringe (`|w| = hypot(a, b)`, `arg w = atan2(-b, a)`).
pub fn fit_fringe(xs: &[f64], intensities: &[f64]) -> Result<Fringe> {
    if xs.len() != intensities.len() || xs.len() < 3 {
        return Err(Error::InvalidArgument(
            "need at least 3 paired samples".into(),
        ));
    }
    let mut ata = [[0.0f64; 3]; 3];
    let mut atb = [0.0f64; 3];
    for (&x, &y) in xs.iter().zip(intensities) {
        let row = [1.0, x.cos(), x.sin()];
        for i in 0..3 {
            for j in 0..3 {
                ata[i][j] += row[i] * row[j];
            }
            atb[i] += row[i] * y;
        }
    }
    let [_, a, b] = solve3(ata, atb)
        .ok_or_else(|| Error::InvalidArgument("fringe samples do not determine a cosine".into()))?;
    let w = C64::new(a, -b);
    Ok(Fringe::of(w))
}

// Gaussian elimination with partial pivoting on a 3x3 system.
fn solve3(mut m: [[f64; 3]; 3], mut rhs: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let pivot = (col..3).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[pivot][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            let pivot_row = m[col];
            for (v, p) in m[row].iter_mut().zip(pivot_row).skip(col) {
                *v -= f * p;
            }
            rhs[row] -= f * rhs[col];
        }
    }
    let mut out = [0.0; 3];
    for row in (0..3).rev() {
        let tail: f64 = (row + 1..3).map(|k| m[row][k] * out[k]).sum();
        out[row] = (rhs[row] - tail) / m[row][row];
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn intensity_examples() {
        for x in [-2.0, 0.0, 1.3] {
            assert_eq!(
                intensity(FringeQuery {
                    x,
                    w: C64::new(0.0, 0.0)
                }),
                1.0
            );
        }
        assert!(
            (intensity(FringeQuery {
                x: 0.0,
                w: C64::new(1.0, 0.0)
            }) - 2.0)
                .abs()
                < 1e-15
        );
        let w = C64::from_polar(0.5, PI / 3.0);
        assert!((intensity(FringeQuery { x: -PI / 3.0, w }) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn visibility_and_phase() {
        let f = Fringe::of(C64::new(0.7, 0.0));
        assert_eq!(f.visibility, 0.7);
        assert_eq!(f.phase_shift, 0.0);
        assert!(!f.phase_undefined);
        let f = Fringe::of(C64::new(0.0, 0.0));
        assert_eq!(f.phase_shift, 0.0);
        assert!(f.phase_undefined);
        // branch (-pi, pi]
        assert!((phase_shift(C64::new(-1.0, 0.0)) - PI).abs() < 1e-15);
    }

    #[test]
    fn squid_current_examples() {
        assert_eq!(squid_current(C64::new(0.4, 0.0), 3.0).unwrap(), 0.0);
        assert_eq!(squid_current(C64::new(0.0, 1.0), 2.0).unwrap(), 2.0);
        assert!(squid_current(C64::new(0.0, 1.0), 0.0).is_err());
        assert!(squid_current(C64::new(0.0, 1.0), -1.0).is_err());
    }

    #[test]
    fn sampled_visibility_equals_modulus() {
        let w = C64::from_polar(0.83, -2.1);
        let xs: Vec<f64> = (0..100_000)
            .map(|k| -PI + 2.0 * PI * k as f64 / 99_999.0)
            .collect();
        let is: Vec<f64> = xs
            .iter()
            .map(|&x| intensity(FringeQuery { x, w }))
            .collect();
        assert!((sampled_visibility(&is) - 0.83).abs() < 1e-9);
    }

    #[test]
    fn fit_recovers_fringe() {
        let w = C64::from_polar(0.31, 2.7);
        let xs: Vec<f64> = (0..1000).map(|k| 2.0 * PI * k as f64 / 1000.0).collect();
        let is: Vec<f64> = xs
            .iter()
            .map(|&x| intensity(FringeQuery { x, w }))
            .collect();
        let f = fit_fringe(&xs, &is).unwrap();
        assert!((f.visibility - 0.31).abs() < 1e-12);
        assert!((f.phase_shift - 2.7).abs() < 1e-12);
        assert!(fit_fringe(&xs[..2], &is[..2]).is_err());
    }
}
