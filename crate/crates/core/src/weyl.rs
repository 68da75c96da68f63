//! Closed-form Weyl functions and phase-factor correlators.
//!
//! For a dyad-sum density operator the multimode Weyl function is
//!
//! `W(l_1, .., l_n) = sum_k w_k prod_i <bra_k,i| D(l_i) |ket_k,i>`
//!
//! with number-basis elements from the Laguerre form and coherent-basis
//! elements from the displaced-vacuum form with its phase `chi`.

use num_complex::Complex64 as C64;

use crate::drive::DriveAt;
use crate::error::{Error, Result};
use crate::special::{laguerre, laguerre_unchecked, sqrt_factorial_ratio, LaguerreQuery};
use crate::states::{ModeSlot, OperatorEnsemble};

/// `<m| D(z) |n>` in the number basis.
///
/// For `m >= n`: `sqrt(n!/m!) z^(m-n) exp(-|z|^2/2) L_n^(m-n)(|z|^2)`.
/// For `m < n` the conjugation identity `<m|D(z)|n> = conj(<n|D(-z)|m>)` is
/// used so the Laguerre order stays nonnegative.
pub fn displacement_element_fock(m: u32, n: u32, z: C64) -> C64 {
    let x = z.norm_sqr();
    let gauss = (-0.5 * x).exp();
    if m >= n {
        let k = m - n;
        z.powu(k) * (sqrt_factorial_ratio(n, m) * gauss * laguerre_unchecked(n, k as f64, x))
    } else {
        let k = n - m;
        (-z.conj()).powu(k)
            * (sqrt_factorial_ratio(m, n) * gauss * laguerre_unchecked(m, k as f64, x))
    }
}

/// `<a| D(z) |b>` in the coherent basis:
/// `exp(-|b - a + z|^2 / 2) exp(chi)` with
/// `chi = (-a z* + a* z - a b* + a* b - z* b + z b*) / 2`.
pub fn displacement_element_coherent(a: C64, b: C64, z: C64) -> C64 {
    let shift = -a + z + b;
    let chi = 0.5
        * (-a * z.conj() + a.conj() * z - a * b.conj() + a.conj() * b - z.conj() * b
            + z * b.conj());
    (-0.5 * shift.norm_sqr() + chi).exp()
}

/// `<bra| D(z) |ket>` for one mode of either kind.
pub fn displacement_element(bra: ModeSlot, ket: ModeSlot, z: C64) -> Result<C64> {
    match (bra, ket) {
        (ModeSlot::Fock(m), ModeSlot::Fock(n)) => Ok(displacement_element_fock(m, n, z)),
        (ModeSlot::Coherent(a), ModeSlot::Coherent(b)) => {
            Ok(displacement_element_coherent(a, b, z))
        }
        _ => Err(Error::KindMismatch),
    }
}

/// `Tr[rho D(l_1) ... D(l_n)]`.
pub fn weyl(rho: &OperatorEnsemble, at: &DriveAt) -> Result<C64> {
    if at.len() != rho.n_modes() {
        return Err(Error::ModeMismatch {
            expected: rho.n_modes(),
            found: at.len(),
        });
    }
    let mut total = C64::new(0.0, 0.0);
    for d in rho.terms() {
        let mut prod = d.weight;
        for (i, &lambda) in at.lambdas.iter().enumerate() {
            prod *= displacement_element(d.bra.slot(i), d.ket.slot(i), lambda)?;
        }
        total += prod;
    }
    Ok(total)
}

/// Single-mode Weyl function of `mode` (all other displacements zero).
pub fn marginal_weyl(rho: &OperatorEnsemble, at: &DriveAt, mode: usize) -> Result<C64> {
    if mode >= at.len() {
        return Err(Error::InvalidMode {
            index: mode,
            modes: at.len(),
        });
    }
    weyl(rho, &at.only(mode))
}

/// Joint Weyl value, per-mode marginals, and `c = joint - prod(marginals)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelatorValue {
    pub joint: C64,
    pub marginals: Vec<C64>,
    pub c: C64,
}

pub fn correlator(rho: &OperatorEnsemble, at: &DriveAt) -> Result<CorrelatorValue> {
    let joint = weyl(rho, at)?;
    let marginals = (0..at.len())
        .map(|i| marginal_weyl(rho, at, i))
        .collect::<Result<Vec<_>>>()?;
    let product: C64 = marginals.iter().product();
    Ok(CorrelatorValue {
        joint,
        marginals,
        c: joint - product,
    })
}

/// Closed forms for the two-mode number states `(N1 N2) <-> (N2 N1)`:
///
/// `c_sep = e^{-q^2} L_N1 L_N2 - (1/4) e^{-q^2} (L_N1 + L_N2)^2`
/// `c_ent = c_sep + e^{-q^2} L_N1^(N2-N1) L_N2^(N1-N2) cos(omega_t)`
///
/// all Laguerre functions evaluated at `q^2`.
pub fn closed_form_number_correlators(n1: u32, n2: u32, q: f64, omega_t: f64) -> (f64, f64) {
    let x = q * q;
    let g = (-x).exp();
    let l1 = laguerre_unchecked(n1, 0.0, x);
    let l2 = laguerre_unchecked(n2, 0.0, x);
    let c_sep = g * l1 * l2 - 0.25 * g * (l1 + l2) * (l1 + l2);
    (
        c_sep,
        c_sep + entangled_number_amplitude(n1, n2, q) * omega_t.cos(),
    )
}

/// `e^{-q^2} L_N1^(N2-N1)(q^2) L_N2^(N1-N2)(q^2)`, the oscillation amplitude
/// of the entangled two-mode number-state correlator.
pub fn entangled_number_amplitude(n1: u32, n2: u32, q: f64) -> f64 {
    let x = q * q;
    let a1 = n2 as i32 - n1 as i32;
    let l = |n, alpha| laguerre(LaguerreQuery::new(n, alpha, x)).unwrap_or(f64::NAN);
    (-x).exp() * l(n1, a1) * l(n2, -a1)
}

/// Beat frequency of the entangled correlator.
///
/// Two modes: `(N1 - N2)(w1 - w2)`.
/// Three modes: `N1 (w3 - w1) + N2 (w1 - w2) + N3 (w2 - w3)`.
pub fn beat_frequency(numbers: &[u32], omegas: &[f64]) -> Result<f64> {
    let photons: Vec<f64> = numbers.iter().map(|&n| n as f64).collect();
    beat_frequency_from_means(&photons, omegas)
}

/// [`beat_frequency`] with (possibly non-integer) mean photon numbers.
pub fn beat_frequency_from_means(photons: &[f64], omegas: &[f64]) -> Result<f64> {
    if photons.len() != omegas.len() {
        return Err(Error::ModeMismatch {
            expected: photons.len(),
            found: omegas.len(),
        });
    }
    match (photons, omegas) {
        ([n1, n2], [w1, w2]) => Ok((n1 - n2) * (w1 - w2)),
        ([n1, n2, n3], [w1, w2, w3]) => Ok(n1 * (w3 - w1) + n2 * (w1 - w2) + n3 * (w2 - w3)),
        _ => Err(Error::InvalidArgument(format!(
            "beat frequency is defined for 2 or 3 modes, got {}",
            photons.len()
        ))),
    }
}
