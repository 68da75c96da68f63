//! Brute-force reference engine on a truncated Fock space.
//!
//! Displacements are dense matrix exponentials of `z a^dag - z^* a` built from
//! truncated ladder matrices; coherent kets are expanded as truncated Poisson
//! amplitude series. Nothing here touches the Laguerre closed forms, so the
//! closed-form engine and this module can check each other.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use crate::drive::DriveAt;
use crate::error::{Error, Result};
use crate::states::{ModeSlot, OperatorEnsemble, ProductKet};

pub const DEFAULT_CUTOFF: usize = 40;
/// Largest total product-basis dimension `(cutoff + 1)^modes`.
pub const MAX_DIMENSION: usize = 100_000;
/// Largest dimension for which a dense density matrix is materialized.
pub const MAX_DENSE_DIMENSION: usize = 2_500;
/// Largest tolerated Poisson tail mass beyond the cutoff.
pub const TAIL_MASS_LIMIT: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncatedSpace {
    cutoff: usize,
    modes: usize,
}

impl TruncatedSpace {
    pub fn new(cutoff: usize, modes: usize) -> Result<Self> {
        if cutoff < 1 {
            return Err(Error::Guard("cutoff must be at least 1".into()));
        }
        if modes < 1 {
            return Err(Error::Guard("at least one mode is required".into()));
        }
        let dim = (cutoff + 1)
            .checked_pow(modes as u32)
            .filter(|&d| d <= MAX_DIMENSION)
            .ok_or_else(|| {
                Error::Guard(format!(
                    "dimension ({}^{modes}) exceeds {MAX_DIMENSION}",
                    cutoff + 1
                ))
            })?;
        debug_assert!(dim >= 2);
        Ok(Self { cutoff, modes })
    }

    pub fn single(cutoff: usize) -> Result<Self> {
        Self::new(cutoff, 1)
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn mode_dim(&self) -> usize {
        self.cutoff + 1
    }

    pub fn dim(&self) -> usize {
        self.mode_dim().pow(self.modes as u32)
    }
}

/// A dense operator on a truncated product space. Basis index ordering puts
/// mode 0 most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    pub matrix: Array2<C64>,
    pub space: TruncatedSpace,
}

impl DenseOperator {
    pub fn identity(space: TruncatedSpace) -> Self {
        Self {
            matrix: Array2::eye(space.dim()),
            space,
        }
    }

    pub fn trace(&self) -> C64 {
        self.matrix.diag().sum()
    }

    pub fn dagger(&self) -> Self {
        Self {
            matrix: self.matrix.t().mapv(|x| x.conj()),
            space: self.space,
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        Self {
            matrix: self.matrix.dot(&other.matrix),
            space: self.space,
        }
    }

    /// Largest entry deviation from `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.matrix
            .iter()
            .zip(other.matrix.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `Tr[self (D_0 x D_1 x ...)]` for per-mode operators `D_i`.
    pub fn trace_with_product(&self, per_mode: &[DenseOperator]) -> Result<C64> {
        if per_mode.len() != self.space.modes {
            return Err(Error::ModeMismatch {
                expected: self.space.modes,
                found: per_mode.len(),
            });
        }
        let md = self.space.mode_dim();
        let digits = |mut idx: usize| {
            let mut out = vec![0usize; self.space.modes];
            for slot in out.iter_mut().rev() {
                *slot = idx % md;
                idx /= md;
            }
            out
        };
        let dim = self.space.dim();
        let all: Vec<Vec<usize>> = (0..dim).map(digits).collect();
        let mut total = C64::new(0.0, 0.0);
        for (r, rd) in all.iter().enumerate() {
            for (c, cd) in all.iter().enumerate() {
                let rho = self.matrix[[r, c]];
                if rho == C64::new(0.0, 0.0) {
                    continue;
                }
                let mut prod = rho;
                for (i, d) in per_mode.iter().enumerate() {
                    prod *= d.matrix[[cd[i], rd[i]]];
                }
                total += prod;
            }
        }
        Ok(total)
    }
}

/// Truncated `a` and `a^dag` on `|0> .. |cutoff>`.
pub fn ladder_matrices(cutoff: usize) -> Result<(DenseOperator, DenseOperator)> {
    let space = TruncatedSpace::single(cutoff)?;
    let n = space.dim();
    let mut a = Array2::<C64>::zeros((n, n));
    for k in 1..n {
        a[[k - 1, k]] = C64::new((k as f64).sqrt(), 0.0);
    }
    let a = DenseOperator { matrix: a, space };
    let a_dag = a.dagger();
    Ok((a, a_dag))
}

fn one_norm(m: &Array2<C64>) -> f64 {
    m.columns()
        .into_iter()
        .map(|col| col.iter().map(|x| x.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `exp(m)` by scaling and squaring around a fixed-degree Taylor core.
pub fn expm(m: &Array2<C64>) -> Array2<C64> {
    const TAYLOR_DEGREE: usize = 20;
    let n = m.nrows();
    let norm = one_norm(m);
    let mut squarings = 0u32;
    while norm / 2f64.powi(squarings as i32) >= 0.5 {
        squarings += 1;
    }
    let scaled = m.mapv(|x| x / 2f64.powi(squarings as i32));
    // Horner: I + X(I + X/2 (I + X/3 (...)))
    let eye = Array2::<C64>::eye(n);
    let mut acc = eye.clone();
    for k in (1..=TAYLOR_DEGREE).rev() {
        acc = &eye + &scaled.dot(&acc).mapv(|x| x / k as f64);
    }
    for _ in 0..squarings {
        acc = acc.dot(&acc);
    }
    acc
}

/// Checks `|z| sqrt(N) < N / 4`.
pub fn check_displacement_guard(z: C64, cutoff: usize) -> Result<()> {
    let n = cutoff as f64;
    if z.norm() * n.sqrt() >= n / 4.0 {
        return Err(Error::Guard(format!(
            "|z| = {} too large for cutoff {cutoff} (need |z| sqrt(N) < N/4)",
            z.norm()
        )));
    }
    Ok(())
}

/// `D(z) = exp(z a^dag - z^* a)` on a truncated single-mode space.
pub fn displacement_matrix(z: C64, cutoff: usize) -> Result<DenseOperator> {
    check_displacement_guard(z, cutoff)?;
    let (a, a_dag) = ladder_matrices(cutoff)?;
    if z == C64::new(0.0, 0.0) {
        return Ok(DenseOperator::identity(a.space));
    }
    let generator = a_dag.matrix.mapv(|x| x * z) - a.matrix.mapv(|x| x * z.conj());
    Ok(DenseOperator {
        matrix: expm(&generator),
        space: a.space,
    })
}

/// Poisson weight of a coherent state beyond `cutoff`:
/// `sum_{n > cutoff} e^{-|A|^2} |A|^{2n} / n!`.
pub fn coherent_tail_mass(a: C64, cutoff: usize) -> f64 {
    let mean = a.norm_sqr();
    if mean == 0.0 {
        return 0.0;
    }
    // log of the first omitted term, then accumulate successive ratios
    let n0 = cutoff + 1;
    let mut log_term = -mean + n0 as f64 * mean.ln();
    for k in 1..=n0 {
        log_term -= (k as f64).ln();
    }
    let mut term = log_term.exp();
    let mut total = 0.0;
    let mut n = n0;
    while term > 0.0 && (term > total * 1e-17 || (n as f64) < mean) && n < n0 + 10_000 {
        total += term;
        n += 1;
        term *= mean / n as f64;
    }
    total
}

/// Truncated number-basis amplitudes of one mode slot.
pub fn embed_slot(slot: ModeSlot, cutoff: usize) -> Result<Array1<C64>> {
    let mut v = Array1::<C64>::zeros(cutoff + 1);
    match slot {
        ModeSlot::Fock(n) => {
            let n = n as usize;
            if n > cutoff {
                return Err(Error::Guard(format!(
                    "occupation {n} exceeds cutoff {cutoff}"
                )));
            }
            v[n] = C64::new(1.0, 0.0);
        }
        ModeSlot::Coherent(a) => {
            let tail = coherent_tail_mass(a, cutoff);
            if tail >= TAIL_MASS_LIMIT {
                return Err(Error::Guard(format!(
                    "coherent amplitude {a} leaves tail mass {tail:.3e} beyond cutoff {cutoff}"
                )));
            }
            let mut coef = C64::new((-0.5 * a.norm_sqr()).exp(), 0.0);
            v[0] = coef;
            for n in 1..=cutoff {
                coef = coef * a / (n as f64).sqrt();
                v[n] = coef;
            }
        }
    }
    Ok(v)
}

fn kron_vectors(parts: &[Array1<C64>]) -> Array1<C64> {
    let mut out = Array1::from_elem(1, C64::new(1.0, 0.0));
    for p in parts {
        let mut next = Array1::<C64>::zeros(out.len() * p.len());
        for (i, x) in out.iter().enumerate() {
            for (j, y) in p.iter().enumerate() {
                next[i * p.len() + j] = x * y;
            }
        }
        out = next;
    }
    out
}

fn embed_ket(ket: &ProductKet, cutoff: usize) -> Result<Vec<Array1<C64>>> {
    ket.modes().iter().map(|&s| embed_slot(s, cutoff)).collect()
}

/// Dense density matrix `sum_k w_k |ket_k><bra_k|` on the truncated space.
pub fn embed_state(rho: &OperatorEnsemble, space: TruncatedSpace) -> Result<DenseOperator> {
    if rho.n_modes() != space.modes() {
        return Err(Error::ModeMismatch {
            expected: space.modes(),
            found: rho.n_modes(),
        });
    }
    let dim = space.dim();
    if dim > MAX_DENSE_DIMENSION {
        return Err(Error::Guard(format!(
            "dense embedding of dimension {dim} exceeds {MAX_DENSE_DIMENSION}"
        )));
    }
    let mut m = Array2::<C64>::zeros((dim, dim));
    for d in rho.terms() {
        let ket = kron_vectors(&embed_ket(&d.ket, space.cutoff())?);
        let bra = kron_vectors(&embed_ket(&d.bra, space.cutoff())?);
        for (r, k) in ket.iter().enumerate() {
            if *k == C64::new(0.0, 0.0) {
                continue;
            }
            let wk = d.weight * k;
            for (c, b) in bra.iter().enumerate() {
                m[[r, c]] += wk * b.conj();
            }
        }
    }
    Ok(DenseOperator { matrix: m, space })
}

/// `Tr[rho_embedded (D(l_0) x D(l_1) x ...)]` with every ket truncated to
/// `cutoff` and every `D` a dense matrix exponential.
///
/// The trace is contracted dyad by dyad and mode by mode, which equals the
/// dense trace without materializing a `dim x dim` density matrix.
pub fn oracle_weyl(rho: &OperatorEnsemble, at: &DriveAt, cutoff: usize) -> Result<C64> {
    if at.len() != rho.n_modes() {
        return Err(Error::ModeMismatch {
            expected: rho.n_modes(),
            found: at.len(),
        });
    }
    TruncatedSpace::new(cutoff, rho.n_modes())?;
    let displacements = at
        .lambdas
        .iter()
        .map(|&z| displacement_matrix(z, cutoff))
        .collect::<Result<Vec<_>>>()?;
    let mut total = C64::new(0.0, 0.0);
    for d in rho.terms() {
        let kets = embed_ket(&d.ket, cutoff)?;
        let bras = embed_ket(&d.bra, cutoff)?;
        let mut prod = d.weight;
        for ((k, b), disp) in kets.iter().zip(&bras).zip(&displacements) {
            let dk = disp.matrix.dot(k);
            prod *= b
                .iter()
                .zip(dk.iter())
                .map(|(x, y)| x.conj() * y)
                .sum::<C64>();
        }
        total += prod;
    }
    Ok(total)
}

/// Dense-matrix route for [`oracle_weyl`]: embeds `rho` and takes the full
/// trace against the tensor product of displacement matrices.
pub fn oracle_weyl_dense(rho: &OperatorEnsemble, at: &DriveAt, cutoff: usize) -> Result<C64> {
    let space = TruncatedSpace::new(cutoff, rho.n_modes())?;
    let dense = embed_state(rho, space)?;
    let displacements = at
        .lambdas
        .iter()
        .map(|&z| displacement_matrix(z, cutoff))
        .collect::<Result<Vec<_>>>()?;
    dense.trace_with_product(&displacements)
}

/// Index-contraction partial trace over `mode`.
pub fn oracle_partial_trace(rho: &DenseOperator, mode: usize) -> Result<DenseOperator> {
    let space = rho.space;
    if mode >= space.modes() {
        return Err(Error::InvalidMode {
            index: mode,
            modes: space.modes(),
        });
    }
    if space.modes() < 2 {
        return Err(Error::InvalidArgument(
            "cannot trace out the only mode".into(),
        ));
    }
    let md = space.mode_dim();
    // index = outer * (md * inner) + k * inner + rest
    let inner = md.pow((space.modes() - 1 - mode) as u32);
    let outer = md.pow(mode as u32);
    let reduced = TruncatedSpace::new(space.cutoff(), space.modes() - 1)?;
    let rdim = reduced.dim();
    let mut out = Array2::<C64>::zeros((rdim, rdim));
    for o1 in 0..outer {
        for i1 in 0..inner {
            let r = o1 * inner + i1;
            for o2 in 0..outer {
                for i2 in 0..inner {
                    let c = o2 * inner + i2;
                    let mut acc = C64::new(0.0, 0.0);
                    for k in 0..md {
                        acc += rho.matrix[[
                            o1 * md * inner + k * inner + i1,
                            o2 * md * inner + k * inner + i2,
                        ]];
                    }
                    out[[r, c]] = acc;
                }
            }
        }
    }
    Ok(DenseOperator {
        matrix: out,
        space: reduced,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{build_family_state, StateFamily};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn smallest_ladder() {
        let (a, a_dag) = ladder_matrices(1).unwrap();
        assert_eq!(a.matrix[[0, 1]], c(1.0, 0.0));
        assert_eq!(a.matrix[[0, 0]], c(0.0, 0.0));
        assert_eq!(a.matrix[[1, 0]], c(0.0, 0.0));
        assert_eq!(a.matrix[[1, 1]], c(0.0, 0.0));
        assert_eq!(a_dag.matrix[[1, 0]], c(1.0, 0.0));
    }

    #[test]
    fn truncated_commutator() {
        let n = 7;
        let (a, a_dag) = ladder_matrices(n).unwrap();
        let comm = a.matmul(&a_dag).matrix - a_dag.matmul(&a).matrix;
        for i in 0..=n {
            for j in 0..=n {
                let want = match (i == j, i == n) {
                    (true, true) => -(n as f64),
                    (true, false) => 1.0,
                    _ => 0.0,
                };
                assert!((comm[[i, j]] - c(want, 0.0)).norm() < 1e-12);
            }
        }
        let number = a_dag.matmul(&a);
        for i in 0..=n {
            assert!((number.matrix[[i, i]] - c(i as f64, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn zero_displacement_is_identity() {
        let d = displacement_matrix(c(0.0, 0.0), 10).unwrap();
        assert!(d.max_abs_diff(&DenseOperator::identity(d.space)) < 1e-15);
    }

    #[test]
    fn vacuum_element() {
        let d = displacement_matrix(c(0.3, 0.0), 40).unwrap();
        assert!((d.matrix[[0, 0]] - c((-0.045f64).exp(), 0.0)).norm() < 1e-12);
        assert!((d.matrix[[0, 0]].re - 0.955997).abs() < 1e-6);
    }

    #[test]
    fn unitarity_on_guarded_block() {
        for z in [c(1.0, 0.0), c(0.3, -0.6), c(-0.5, 0.5)] {
            let d = displacement_matrix(z, 40).unwrap();
            let prod = d.matmul(&d.dagger());
            let inv = d.matmul(&displacement_matrix(-z, 40).unwrap());
            let block = 40 - (5.0 * z.norm()).ceil() as usize;
            for i in 0..block {
                for j in 0..block {
                    let want = if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) };
                    assert!((prod.matrix[[i, j]] - want).norm() < 1e-10);
                    assert!((inv.matrix[[i, j]] - want).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn displacement_guard() {
        assert!(displacement_matrix(c(3.0, 0.0), 40).is_err());
        assert!(displacement_matrix(c(1.0, 0.0), 40).is_ok());
    }

    #[test]
    fn dimension_guard() {
        assert!(TruncatedSpace::new(40, 3).is_ok());
        assert!(TruncatedSpace::new(40, 4).is_err());
        assert!(TruncatedSpace::new(0, 1).is_err());
    }

    #[test]
    fn fock_dyad_embedding() {
        let rho = build_family_state(
            StateFamily::Factorizable,
            &[ModeSlot::Fock(1), ModeSlot::Fock(0)],
        )
        .unwrap();
        let space = TruncatedSpace::new(3, 2).unwrap();
        let dense = embed_state(&rho, space).unwrap();
        let idx = 4; // |1,0> with mode dimension 4
        let nonzero: Vec<_> = dense
            .matrix
            .indexed_iter()
            .filter(|(_, v)| v.norm() > 0.0)
            .collect();
        assert_eq!(nonzero.len(), 1);
        assert_eq!(nonzero[0].0, (idx, idx));
        assert_eq!(*nonzero[0].1, c(1.0, 0.0));
    }

    #[test]
    fn coherent_populations_are_poisson() {
        let v = embed_slot(ModeSlot::Coherent(c(1.0, 0.0)), 40).unwrap();
        let mut fact = 1.0;
        for n in 0..15 {
            if n > 0 {
                fact *= n as f64;
            }
            let want = (-1f64).exp() / fact;
            assert!((v[n].norm_sqr() - want).abs() < 1e-15);
        }
    }

    #[test]
    fn tail_mass_guard() {
        assert!(embed_slot(ModeSlot::Coherent(c(2f64.sqrt(), 0.0)), 2).is_err());
        let tail = coherent_tail_mass(c(2f64.sqrt(), 0.0), 2);
        let want = 1.0 - (-2f64).exp() * (1.0 + 2.0 + 2.0);
        assert!((tail - want).abs() < 1e-12);
        assert!(coherent_tail_mass(c(2f64.sqrt(), 0.0), 40) < 1e-12);
        assert!(embed_slot(ModeSlot::Fock(5), 4).is_err());
    }

    #[test]
    fn entangled_coherent_state_trace() {
        let amps = [
            ModeSlot::Coherent(c(1.0, 0.0)),
            ModeSlot::Coherent(c(0.0, 0.0)),
        ];
        let rho = build_family_state(StateFamily::EntCoherent2, &amps).unwrap();
        let dense = embed_state(&rho, TruncatedSpace::new(40, 2).unwrap()).unwrap();
        assert!((dense.trace() - c(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn vacuum_weyl() {
        let rho = build_family_state(StateFamily::Factorizable, &[ModeSlot::Fock(0)]).unwrap();
        let z = c(0.31, 0.22);
        let w = oracle_weyl(&rho, &DriveAt::new(vec![z]), 40).unwrap();
        // independent series for exp(-|z|^2 / 2)
        let x = -0.5 * z.norm_sqr();
        let mut term = 1.0;
        let mut series = 1.0;
        for k in 1..30 {
            term *= x / k as f64;
            series += term;
        }
        assert!((w - c(series, 0.0)).norm() < 1e-10);
        let w0 = oracle_weyl(&rho, &DriveAt::zeros(1), 40).unwrap();
        assert!((w0 - c(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn partial_trace_of_product_state() {
        let rho = build_family_state(
            StateFamily::Factorizable,
            &[
                ModeSlot::Coherent(c(0.5, 0.1)),
                ModeSlot::Coherent(c(-0.2, 0.3)),
            ],
        )
        .unwrap();
        let space = TruncatedSpace::new(12, 2).unwrap();
        let dense = embed_state(&rho, space).unwrap();
        let red = oracle_partial_trace(&dense, 0).unwrap();
        let single = build_family_state(
            StateFamily::Factorizable,
            &[ModeSlot::Coherent(c(-0.2, 0.3))],
        )
        .unwrap();
        let want = embed_state(&single, TruncatedSpace::single(12).unwrap()).unwrap();
        // factor is scaled by the (truncated) norm of the traced mode
        assert!(red.max_abs_diff(&want) < 1e-10);
        assert!((red.trace() - dense.trace()).norm() < 1e-12);
        assert!(oracle_partial_trace(&dense, 2).is_err());
    }
}
