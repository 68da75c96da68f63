//! Shared fixtures for the engine benchmarks.

use weylcorr::{build_family_state, ModeSlot, OperatorEnsemble, StateFamily, C64};

pub fn number_pair(n1: u32, n2: u32) -> OperatorEnsemble {
    build_family_state(
        StateFamily::EntNumber2,
        &[ModeSlot::Fock(n1), ModeSlot::Fock(n2)],
    )
    .expect("valid number-state family")
}

pub fn coherent_triple() -> OperatorEnsemble {
    let slots = [0.0, 1.0, 2f64.sqrt()].map(|a| ModeSlot::Coherent(C64::new(a, 0.0)));
    build_family_state(StateFamily::EntCoherent3, &slots).expect("valid coherent family")
}
