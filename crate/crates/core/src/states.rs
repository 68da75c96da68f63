//! Multimode photon states as finite sums of weighted dyads.
//!
//! Every density operator handled by the engine is written as
//! `sum_k w_k |ket_k><bra_k|` over product kets whose slots are either all
//! Fock occupations or all coherent amplitudes. No Hilbert-space cutoff is
//! involved: traces, overlaps and partial traces are closed-form.

use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One mode of a product ket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModeSlot {
    Fock(u32),
    Coherent(C64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KetKind {
    Fock,
    Coherent,
}

impl ModeSlot {
    pub fn kind(&self) -> KetKind {
        match self {
            ModeSlot::Fock(_) => KetKind::Fock,
            ModeSlot::Coherent(_) => KetKind::Coherent,
        }
    }

    /// Mean photon number: `N` for a Fock slot, `|A|^2` for a coherent one.
    pub fn mean_photons(&self) -> f64 {
        match *self {
            ModeSlot::Fock(n) => n as f64,
            ModeSlot::Coherent(a) => a.norm_sqr(),
        }
    }

    fn cmp_key(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ModeSlot::Fock(a), ModeSlot::Fock(b)) => a.cmp(b),
            (ModeSlot::Coherent(a), ModeSlot::Coherent(b)) => {
                a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
            }
            (ModeSlot::Fock(_), ModeSlot::Coherent(_)) => Ordering::Less,
            (ModeSlot::Coherent(_), ModeSlot::Fock(_)) => Ordering::Greater,
        }
    }
}

/// Overlap `<a|b>` of two single-mode states of the same kind.
pub fn slot_overlap(a: ModeSlot, b: ModeSlot) -> Result<C64> {
    match (a, b) {
        (ModeSlot::Fock(m), ModeSlot::Fock(n)) => Ok(if m == n {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }),
        (ModeSlot::Coherent(a), ModeSlot::Coherent(b)) => Ok(coherent_overlap(a, b)),
        _ => Err(Error::KindMismatch),
    }
}

/// `tau = <a|b> = exp(-|a|^2/2 - |b|^2/2 + a* b)`.
pub fn coherent_overlap(a: C64, b: C64) -> C64 {
    (-0.5 * a.norm_sqr() - 0.5 * b.norm_sqr() + a.conj() * b).exp()
}

/// A pure product ket over one or more modes, all slots of one kind.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductKet {
    modes: Vec<ModeSlot>,
}

impl ProductKet {
    pub fn new(modes: Vec<ModeSlot>) -> Result<Self> {
        let first = modes
            .first()
            .ok_or_else(|| Error::InvalidArgument("a ket needs at least one mode".into()))?
            .kind();
        if modes.iter().any(|s| s.kind() != first) {
            return Err(Error::KindMismatch);
        }
        if let Some(bad) = modes.iter().find_map(|s| match s {
            ModeSlot::Coherent(a) if !(a.re.is_finite() && a.im.is_finite()) => Some(*a),
            _ => None,
        }) {
            return Err(Error::InvalidArgument(format!(
                "non-finite coherent amplitude {bad}"
            )));
        }
        Ok(Self { modes })
    }

    pub fn fock(occupations: &[u32]) -> Result<Self> {
        Self::new(occupations.iter().map(|&n| ModeSlot::Fock(n)).collect())
    }

    pub fn coherent(amplitudes: &[C64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&a| ModeSlot::Coherent(a)).collect())
    }

    pub fn modes(&self) -> &[ModeSlot] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn kind(&self) -> KetKind {
        self.modes[0].kind()
    }

    pub fn slot(&self, mode: usize) -> ModeSlot {
        self.modes[mode]
    }

    /// The ket with one mode removed. Requires at least two modes.
    pub fn without_mode(&self, mode: usize) -> ProductKet {
        let mut modes = self.modes.clone();
        modes.remove(mode);
        ProductKet { modes }
    }

    fn cmp_key(&self, other: &Self) -> Ordering {
        for (a, b) in self.modes.iter().zip(&other.modes) {
            let o = a.cmp_key(b);
            if o != Ordering::Equal {
                return o;
            }
        }
        self.modes.len().cmp(&other.modes.len())
    }
}

impl fmt::Display for ProductKet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|")?;
        for (i, slot) in self.modes.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            match slot {
                ModeSlot::Fock(n) => write!(f, "{n}")?,
                ModeSlot::Coherent(a) => write!(f, "c:{}", crate::dsl::format_complex(*a))?,
            }
        }
        write!(f, ">")
    }
}

/// `<a|b>` for product kets: product of per-mode overlaps.
pub fn overlap(a: &ProductKet, b: &ProductKet) -> Result<C64> {
    if a.len() != b.len() {
        return Err(Error::ModeMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    if a.kind() != b.kind() {
        return Err(Error::KindMismatch);
    }
    a.modes
        .iter()
        .zip(&b.modes)
        .try_fold(C64::new(1.0, 0.0), |acc, (&x, &y)| {
            Ok(acc * slot_overlap(x, y)?)
        })
}

/// `weight |ket><bra|`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dyad {
    pub weight: C64,
    pub ket: ProductKet,
    pub bra: ProductKet,
}

/// A density operator written as a sum of weighted dyads over product kets.
///
/// Terms are kept in a canonical order (sorted by ket, then bra) with exact
/// duplicates merged and exactly-zero weights dropped, so equality and
/// Hermiticity pairing are deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorEnsemble {
    kind: KetKind,
    n_modes: usize,
    terms: Vec<Dyad>,
}

impl OperatorEnsemble {
    pub fn new(terms: Vec<Dyad>) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::InvalidArgument("an ensemble needs at least one term".into()))?;
        let kind = first.ket.kind();
        let n_modes = first.ket.len();
        for d in &terms {
            for k in [&d.ket, &d.bra] {
                if k.len() != n_modes {
                    return Err(Error::ModeMismatch {
                        expected: n_modes,
                        found: k.len(),
                    });
                }
                if k.kind() != kind {
                    return Err(Error::KindMismatch);
                }
            }
        }
        Ok(Self::canonical(kind, n_modes, terms))
    }

    /// `|ket><ket|` with unit weight.
    pub fn pure_product(ket: ProductKet) -> Self {
        Self {
            kind: ket.kind(),
            n_modes: ket.len(),
            terms: vec![Dyad {
                weight: C64::new(1.0, 0.0),
                bra: ket.clone(),
                ket,
            }],
        }
    }

    /// Normalized pure state `|psi><psi|` for `psi = sum_i c_i |k_i>`.
    pub fn pure_superposition(components: &[(C64, ProductKet)]) -> Result<Self> {
        let mut terms = Vec::with_capacity(components.len() * components.len());
        for (ci, ki) in components {
            for (cj, kj) in components {
                terms.push(Dyad {
                    weight: ci * cj.conj(),
                    ket: ki.clone(),
                    bra: kj.clone(),
                });
            }
        }
        Self::new(terms)?.normalized()
    }

    fn canonical(kind: KetKind, n_modes: usize, mut terms: Vec<Dyad>) -> Self {
        terms.sort_by(|a, b| a.ket.cmp_key(&b.ket).then_with(|| a.bra.cmp_key(&b.bra)));
        let mut merged: Vec<Dyad> = Vec::with_capacity(terms.len());
        for d in terms {
            match merged.last_mut() {
                Some(last) if last.ket == d.ket && last.bra == d.bra => last.weight += d.weight,
                _ => merged.push(d),
            }
        }
        merged.retain(|d| d.weight != C64::new(0.0, 0.0));
        Self {
            kind,
            n_modes,
            terms: merged,
        }
    }

    pub fn kind(&self) -> KetKind {
        self.kind
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn terms(&self) -> &[Dyad] {
        &self.terms
    }

    /// Scales every weight by `1 / trace`.
    pub fn normalized(self) -> Result<Self> {
        let tr = trace(&self);
        if tr.norm() < 1e-300 {
            return Err(Error::ZeroNorm);
        }
        Ok(self.scaled(tr.inv()))
    }

    pub fn scaled(mut self, factor: C64) -> Self {
        for d in &mut self.terms {
            d.weight *= factor;
        }
        self.terms.retain(|d| d.weight != C64::new(0.0, 0.0));
        self
    }

    /// Weighted union of ensembles of matching shape.
    pub fn mix(parts: &[(f64, OperatorEnsemble)]) -> Result<Self> {
        let terms = parts
            .iter()
            .flat_map(|(p, e)| {
                e.terms.iter().map(move |d| Dyad {
                    weight: d.weight * *p,
                    ket: d.ket.clone(),
                    bra: d.bra.clone(),
                })
            })
            .collect();
        Self::new(terms)
    }

    /// Every term `(w, k, b)` has a partner `(conj w, b, k)` within `tol`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.terms.iter().all(|d| {
            self.terms.iter().any(|e| {
                e.ket == d.bra && e.bra == d.ket && (e.weight - d.weight.conj()).norm() <= tol
            })
        })
    }

    /// Largest weight difference between matching terms; `None` when the
    /// two ensembles do not carry the same set of dyads.
    pub fn max_weight_difference(&self, other: &Self) -> Option<f64> {
        if self.terms.len() != other.terms.len() {
            return None;
        }
        self.terms
            .iter()
            .zip(&other.terms)
            .try_fold(0.0f64, |acc, (a, b)| {
                (a.ket == b.ket && a.bra == b.bra).then(|| acc.max((a.weight - b.weight).norm()))
            })
    }
}

/// `Tr rho = sum_k w_k <bra_k|ket_k>`.
pub fn trace(rho: &OperatorEnsemble) -> C64 {
    rho.terms
        .iter()
        .map(|d| d.weight * overlap(&d.bra, &d.ket).expect("ensemble shape is validated"))
        .sum()
}

/// Traces out `mode`: each dyad contributes `w <bra_mode|ket_mode>` on the
/// remaining modes.
pub fn partial_trace(rho: &OperatorEnsemble, mode: usize) -> Result<OperatorEnsemble> {
    if mode >= rho.n_modes {
        return Err(Error::InvalidMode {
            index: mode,
            modes: rho.n_modes,
        });
    }
    if rho.n_modes < 2 {
        return Err(Error::InvalidArgument(
            "cannot trace out the only mode of a single-mode ensemble".into(),
        ));
    }
    let terms = rho
        .terms
        .iter()
        .map(|d| {
            let factor = slot_overlap(d.bra.slot(mode), d.ket.slot(mode))?;
            Ok(Dyad {
                weight: d.weight * factor,
                ket: d.ket.without_mode(mode),
                bra: d.bra.without_mode(mode),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OperatorEnsemble::canonical(
        rho.kind,
        rho.n_modes - 1,
        terms,
    ))
}

/// Reduced operator of a single mode (all other modes traced out).
pub fn reduce_to_mode(rho: &OperatorEnsemble, keep: usize) -> Result<OperatorEnsemble> {
    if keep >= rho.n_modes {
        return Err(Error::InvalidMode {
            index: keep,
            modes: rho.n_modes,
        });
    }
    let mut out = rho.clone();
    for mode in (0..rho.n_modes).rev().filter(|&m| m != keep) {
        out = partial_trace(&out, mode)?;
    }
    Ok(out)
}

/// The built-in state families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateFamily {
    SepNumber2,
    EntNumber2,
    SepCoherent2,
    EntCoherent2,
    SepNumber3,
    EntNumber3,
    SepCoherent3,
    EntCoherent3,
    Factorizable,
}

impl StateFamily {
    pub const ALL: [StateFamily; 9] = [
        StateFamily::SepNumber2,
        StateFamily::EntNumber2,
        StateFamily::SepCoherent2,
        StateFamily::EntCoherent2,
        StateFamily::SepNumber3,
        StateFamily::EntNumber3,
        StateFamily::SepCoherent3,
        StateFamily::EntCoherent3,
        StateFamily::Factorizable,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            StateFamily::SepNumber2 => "sep_number2",
            StateFamily::EntNumber2 => "ent_number2",
            StateFamily::SepCoherent2 => "sep_coherent2",
            StateFamily::EntCoherent2 => "ent_coherent2",
            StateFamily::SepNumber3 => "sep_number3",
            StateFamily::EntNumber3 => "ent_number3",
            StateFamily::SepCoherent3 => "sep_coherent3",
            StateFamily::EntCoherent3 => "ent_coherent3",
            StateFamily::Factorizable => "factorizable",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == name)
    }

    /// Required slot count, or `None` when any count is accepted.
    pub fn slot_count(&self) -> Option<usize> {
        match self {
            StateFamily::SepNumber2
            | StateFamily::EntNumber2
            | StateFamily::SepCoherent2
            | StateFamily::EntCoherent2 => Some(2),
            StateFamily::SepNumber3
            | StateFamily::EntNumber3
            | StateFamily::SepCoherent3
            | StateFamily::EntCoherent3 => Some(3),
            StateFamily::Factorizable => None,
        }
    }

    pub fn slot_kind(&self) -> Option<KetKind> {
        match self {
            StateFamily::SepNumber2
            | StateFamily::EntNumber2
            | StateFamily::SepNumber3
            | StateFamily::EntNumber3 => Some(KetKind::Fock),
            StateFamily::SepCoherent2
            | StateFamily::EntCoherent2
            | StateFamily::SepCoherent3
            | StateFamily::EntCoherent3 => Some(KetKind::Coherent),
            StateFamily::Factorizable => None,
        }
    }

    pub fn is_entangled(&self) -> bool {
        matches!(
            self,
            StateFamily::EntNumber2
                | StateFamily::EntCoherent2
                | StateFamily::EntNumber3
                | StateFamily::EntCoherent3
        )
    }
}

impl fmt::Display for StateFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Normalization rule for the tripartite entangled coherent state.
///
/// `Overlap` divides by the actual norm `2 + 2 Re(t12 t23 t31)`.
/// `PrintedPairwiseSum` uses `[2 + 2 Re(t12 + t23 + t31)]^-1`, which does not
/// give a unit-trace operator; it exists only to reproduce the larger figure-6 curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CoherentNorm {
    #[default]
    Overlap,
    PrintedPairwiseSum,
}

/// The two kets a two- or three-mode family is built from:
/// `(N1 N2), (N2 N1)` or `(N1 N2 N3), (N2 N3 N1)`.
fn family_kets(slots: &[ModeSlot]) -> Result<(ProductKet, ProductKet)> {
    let first = ProductKet::new(slots.to_vec())?;
    let mut rotated = slots.to_vec();
    rotated.rotate_left(1);
    Ok((first, ProductKet::new(rotated)?))
}

/// Builds one of the built-in family density operators from its slot parameters
/// (occupations `N_i` or amplitudes `A_i`).
pub fn build_family_state(family: StateFamily, slots: &[ModeSlot]) -> Result<OperatorEnsemble> {
    build_family_state_with(family, slots, CoherentNorm::Overlap)
}

pub fn build_family_state_with(
    family: StateFamily,
    slots: &[ModeSlot],
    norm: CoherentNorm,
) -> Result<OperatorEnsemble> {
    if let Some(expected) = family.slot_count() {
        if slots.len() != expected {
            return Err(Error::MissingParameters {
                family: family.name(),
                expected,
                found: slots.len(),
            });
        }
    } else if slots.is_empty() {
        return Err(Error::MissingParameters {
            family: family.name(),
            expected: 1,
            found: 0,
        });
    }
    if let Some(kind) = family.slot_kind() {
        if slots.iter().any(|s| s.kind() != kind) {
            return Err(Error::KindMismatch);
        }
    }

    if family == StateFamily::Factorizable {
        return Ok(OperatorEnsemble::pure_product(ProductKet::new(
            slots.to_vec(),
        )?));
    }

    let (k1, k2) = family_kets(slots)?;
    let half = C64::new(0.5, 0.0);
    if !family.is_entangled() {
        return OperatorEnsemble::new(vec![
            Dyad {
                weight: half,
                ket: k1.clone(),
                bra: k1,
            },
            Dyad {
                weight: half,
                ket: k2.clone(),
                bra: k2,
            },
        ]);
    }

    let one = C64::new(1.0, 0.0);
    let unnormalized = OperatorEnsemble::new(vec![
        Dyad {
            weight: one,
            ket: k1.clone(),
            bra: k1.clone(),
        },
        Dyad {
            weight: one,
            ket: k2.clone(),
            bra: k2.clone(),
        },
        Dyad {
            weight: one,
            ket: k1.clone(),
            bra: k2.clone(),
        },
        Dyad {
            weight: one,
            ket: k2,
            bra: k1,
        },
    ])?;
    match (family, norm) {
        (StateFamily::EntCoherent3, CoherentNorm::PrintedPairwiseSum) => {
            let a: Vec<C64> = slots
                .iter()
                .map(|s| match s {
                    ModeSlot::Coherent(a) => *a,
                    ModeSlot::Fock(_) => unreachable!("kind checked above"),
                })
                .collect();
            let sum = coherent_overlap(a[0], a[1])
                + coherent_overlap(a[1], a[2])
                + coherent_overlap(a[2], a[0]);
            let n2 = 1.0 / (2.0 + 2.0 * sum.re);
            Ok(unnormalized.scaled(C64::new(n2, 0.0)))
        }
        _ => unnormalized.normalized(),
    }
}

// JSON form: {"kind": "fock"|"coherent", "modes": n, "terms": [{weight, ket, bra}]}
// with Fock slots as integers and coherent slots as {"re", "im"}.

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum SlotRepr {
    Fock(u32),
    Coherent { re: f64, im: f64 },
}

#[derive(Serialize, Deserialize)]
struct WeightRepr {
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct DyadRepr {
    weight: WeightRepr,
    ket: Vec<SlotRepr>,
    bra: Vec<SlotRepr>,
}

#[derive(Serialize, Deserialize)]
struct EnsembleRepr {
    kind: KetKind,
    modes: usize,
    terms: Vec<DyadRepr>,
}

fn ket_to_repr(k: &ProductKet) -> Vec<SlotRepr> {
    k.modes
        .iter()
        .map(|s| match *s {
            ModeSlot::Fock(n) => SlotRepr::Fock(n),
            ModeSlot::Coherent(a) => SlotRepr::Coherent { re: a.re, im: a.im },
        })
        .collect()
}

fn ket_from_repr(slots: Vec<SlotRepr>, kind: KetKind) -> Result<ProductKet> {
    let modes = slots
        .into_iter()
        .map(|s| match (s, kind) {
            (SlotRepr::Fock(n), KetKind::Fock) => Ok(ModeSlot::Fock(n)),
            (SlotRepr::Coherent { re, im }, KetKind::Coherent) => {
                Ok(ModeSlot::Coherent(C64::new(re, im)))
            }
            // a coherent amplitude written as a bare integer
            (SlotRepr::Fock(n), KetKind::Coherent) => {
                Ok(ModeSlot::Coherent(C64::new(n as f64, 0.0)))
            }
            (SlotRepr::Coherent { .. }, KetKind::Fock) => Err(Error::KindMismatch),
        })
        .collect::<Result<Vec<_>>>()?;
    ProductKet::new(modes)
}

impl Serialize for OperatorEnsemble {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        EnsembleRepr {
            kind: self.kind,
            modes: self.n_modes,
            terms: self
                .terms
                .iter()
                .map(|d| DyadRepr {
                    weight: WeightRepr {
                        re: d.weight.re,
                        im: d.weight.im,
                    },
                    ket: ket_to_repr(&d.ket),
                    bra: ket_to_repr(&d.bra),
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for OperatorEnsemble {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = EnsembleRepr::deserialize(deserializer)?;
        let kind = repr.kind;
        let terms = repr
            .terms
            .into_iter()
            .map(|d| {
                Ok(Dyad {
                    weight: C64::new(d.weight.re, d.weight.im),
                    ket: ket_from_repr(d.ket, kind)?,
                    bra: ket_from_repr(d.bra, kind)?,
                })
            })
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        let ens = OperatorEnsemble::new(terms).map_err(D::Error::custom)?;
        if ens.n_modes != repr.modes {
            return Err(D::Error::custom(Error::ModeMismatch {
                expected: repr.modes,
                found: ens.n_modes,
            }));
        }
        Ok(ens)
    }
}

impl OperatorEnsemble {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}
