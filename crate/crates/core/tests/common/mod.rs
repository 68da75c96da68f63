#![allow(dead_code)]

use rand::Rng;
use weylcorr::{
    build_family_state, DriveAt, ModeSlot, OperatorEnsemble, ProductKet, StateFamily, C64,
};

pub const MAX_FOCK: u32 = 5;
pub const MAX_AMPLITUDE: f64 = std::f64::consts::SQRT_2;

pub fn random_disc<R: Rng>(rng: &mut R, radius: f64) -> C64 {
    C64::from_polar(
        radius * rng.gen::<f64>().sqrt(),
        rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
    )
}

pub fn random_slot<R: Rng>(rng: &mut R, coherent: bool) -> ModeSlot {
    if coherent {
        ModeSlot::Coherent(random_disc(rng, MAX_AMPLITUDE))
    } else {
        ModeSlot::Fock(rng.gen_range(0..=MAX_FOCK))
    }
}

pub fn random_ket<R: Rng>(rng: &mut R, modes: usize, coherent: bool) -> ProductKet {
    ProductKet::new((0..modes).map(|_| random_slot(rng, coherent)).collect()).unwrap()
}

pub fn random_slots<R: Rng>(rng: &mut R, family: StateFamily, modes: usize) -> Vec<ModeSlot> {
    let n = family.slot_count().unwrap_or(modes);
    let coherent = family.slot_kind() == Some(weylcorr::KetKind::Coherent)
        || (family.slot_kind().is_none() && rng.gen());
    (0..n).map(|_| random_slot(rng, coherent)).collect()
}

fn random_superposition<R: Rng>(rng: &mut R, modes: usize, coherent: bool) -> OperatorEnsemble {
    loop {
        let k = rng.gen_range(1..=3);
        let comps: Vec<(C64, ProductKet)> = (0..k)
            .map(|_| {
                (
                    random_disc(rng, 1.0) + C64::new(0.1, 0.0),
                    random_ket(rng, modes, coherent),
                )
            })
            .collect();
        if let Ok(rho) = OperatorEnsemble::pure_superposition(&comps) {
            if weylcorr::states::trace(&rho).norm() > 0.0 {
                return rho;
            }
        }
    }
}

/// A random unit-trace ensemble with 1..=3 modes: products, superpositions,
/// mixtures, or built-in families.
pub fn random_state<R: Rng>(rng: &mut R) -> OperatorEnsemble {
    let modes = rng.gen_range(1..=3usize);
    let coherent = rng.gen::<bool>();
    match rng.gen_range(0..4) {
        0 => OperatorEnsemble::pure_product(random_ket(rng, modes, coherent)),
        1 => random_superposition(rng, modes, coherent),
        2 => {
            let p = rng.gen_range(0.1..0.9);
            OperatorEnsemble::mix(&[
                (p, random_superposition(rng, modes, coherent)),
                (1.0 - p, random_superposition(rng, modes, coherent)),
            ])
            .unwrap()
        }
        _ => {
            let families: Vec<StateFamily> = StateFamily::ALL
                .iter()
                .copied()
                .filter(|f| f.slot_count().is_none_or(|c| c == modes))
                .collect();
            let family = families[rng.gen_range(0..families.len())];
            loop {
                let slots = random_slots(rng, family, modes);
                if let Ok(rho) = build_family_state(family, &slots) {
                    return rho;
                }
            }
        }
    }
}

pub fn random_drive<R: Rng>(rng: &mut R, modes: usize, radius: f64) -> DriveAt {
    DriveAt::new((0..modes).map(|_| random_disc(rng, radius)).collect())
}

pub fn coherent_slots(amps: &[C64]) -> Vec<ModeSlot> {
    amps.iter().map(|&a| ModeSlot::Coherent(a)).collect()
}

pub fn fock_slots(n: &[u32]) -> Vec<ModeSlot> {
    n.iter().map(|&x| ModeSlot::Fock(x)).collect()
}

/// Representative parameters for every built-in family.
pub fn family_examples() -> Vec<(StateFamily, Vec<ModeSlot>)> {
    let c = |re, im| C64::new(re, im);
    StateFamily::ALL
        .iter()
        .map(|&f| {
            let slots = match (f.slot_count(), f.slot_kind()) {
                (Some(2), Some(weylcorr::KetKind::Fock)) => fock_slots(&[1, 0]),
                (Some(3), Some(weylcorr::KetKind::Fock)) => fock_slots(&[0, 1, 2]),
                (Some(2), Some(weylcorr::KetKind::Coherent)) => {
                    coherent_slots(&[c(1.0, 0.0), c(0.0, 0.0)])
                }
                (Some(3), Some(weylcorr::KetKind::Coherent)) => {
                    coherent_slots(&[c(0.0, 0.0), c(1.0, 0.0), c(2f64.sqrt(), 0.0)])
                }
                _ => coherent_slots(&[c(0.3, -0.4), c(1.0, 0.2)]),
            };
            (f, slots)
        })
        .collect()
}
