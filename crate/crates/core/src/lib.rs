//! Weyl-function correlators of quantized electromagnetic modes driving
//! distant electron interferometers.
//!
//! The engine evaluates `Tr[rho D(lambda_1) ... D(lambda_n)]` in closed form
//! for states written as finite sums of product dyads over number or coherent
//! kets. [`oracle`] cross-checks it with dense truncated-space linear algebra.

pub mod drive;
pub mod dsl;
pub mod error;
pub mod observables;
pub mod oracle;
pub mod special;
pub mod states;
pub mod sweep;
pub mod weyl;

pub use num_complex::Complex64 as C64;

pub use drive::{default_charge, drive_lambda, DriveAt, DriveParams};
pub use dsl::{parse_state, render, ParseError, ParseErrorCode};
pub use error::{Error, Result};
pub use observables::{Fringe, FringeQuery};
pub use special::{laguerre, LaguerreQuery};
pub use states::{
    build_family_state, build_family_state_with, CoherentNorm, Dyad, KetKind, ModeSlot,
    OperatorEnsemble, ProductKet, StateFamily,
};
pub use sweep::{
    run_sweep, FigureId, FigureOptions, StateSpec, SweepConfig, SweepSeries, TimeGrid,
};
pub use weyl::{correlator, weyl, CorrelatorValue};
