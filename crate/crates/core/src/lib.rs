//! Exact state-vector simulation of trapped-ion sideband protocols that grow
//! linear cluster states through a shared vibrational mode.
//!
//! * [`register`]: dense ion ⊗ mode state vectors.
//! * [`pulse`]: closed-form red-sideband and carrier propagators.
//! * [`protocol`]: pulse schedules and the runner.
//! * [`verify`]: cluster references, fidelity, stabilizers, leakage.
//! * [`noise`]: per-pulse fidelity estimate and pulse-area jitter.
//! * [`cli`]: sequence files, reports and the command-line front end.

pub mod cli;
pub mod error;
pub mod noise;
pub mod protocol;
pub mod pulse;
pub mod register;
pub mod verify;

pub use error::{Error, Result, TruncationError};
pub use noise::{fidelity_estimate, monte_carlo, MonteCarloResult, NoiseConfig};
pub use protocol::{
    chain_sequence, cluster6_sequence, run, PulseSequence, RunOutput, Snapshot, Step,
};
pub use pulse::{apply_carrier, apply_sideband, Pulse, PulseKind, Transition};
pub use register::{BasisLabel, IonLevel, IonPrep, RegisterState};
pub use verify::{
    fidelity, reference_cluster, stabilizer_expectations, verify_run, VerificationReport,
};
