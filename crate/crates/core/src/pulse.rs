//! Closed-form laser pulse propagators.
//!
//! A resonant red-sideband pulse on ion `k` couples `|x, n⟩ ↔ |g, n+1⟩`,
//! where `x` is the addressed excited level (`e` or `e'`). Its propagator is
//! block diagonal in the excitation number `n + [ion k in x]`; on the block
//! `{|x, n⟩, |g, n+1⟩}` with `c = cos(θ√(n+1)/2)`, `s = sin(θ√(n+1)/2)`:
//!
//! ```text
//! |x, n⟩   →  c|x, n⟩   − e^{iφ} s |g, n+1⟩
//! |g, n+1⟩ →  c|g, n+1⟩ + e^{-iφ} s |x, n⟩
//! ```
//!
//! and `|g, 0⟩` is left alone. Here `θ = ηΩt` is the pulse area. The third
//! level of the addressed ion and every other ion are spectators.
//!
//! A carrier pulse rotates `{g, e}` of one ion with the same matrix at every
//! phonon number.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, TruncationError};
use crate::register::{IonLevel, RegisterState};

/// Probability allowed on `|x, n_max⟩` before a sideband pulse is refused.
pub const TRUNCATION_TOLERANCE: f64 = 1e-12;

/// Which excited level a red-sideband pulse couples to `g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transition {
    Ge,
    GePrime,
}

impl Transition {
    pub fn excited(self) -> IonLevel {
        match self {
            Transition::Ge => IonLevel::E,
            Transition::GePrime => IonLevel::EPrime,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PulseKind {
    SidebandGe,
    #[serde(rename = "sideband_geprime")]
    SidebandGePrime,
    Carrier,
}

impl PulseKind {
    pub fn is_sideband(self) -> bool {
        !matches!(self, PulseKind::Carrier)
    }

    pub fn transition(self) -> Option<Transition> {
        match self {
            PulseKind::SidebandGe => Some(Transition::Ge),
            PulseKind::SidebandGePrime => Some(Transition::GePrime),
            PulseKind::Carrier => None,
        }
    }
}

/// One laser event on a single ion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pulse {
    pub kind: PulseKind,
    /// 1-based ion index.
    pub ion: usize,
    /// Laser phase in radians.
    pub phi: f64,
    /// Pulse area `ηΩt` for sidebands, rotation angle for the carrier.
    pub theta: f64,
}

impl Pulse {
    pub fn sideband(ion: usize, transition: Transition, phi: f64, theta: f64) -> Self {
        let kind = match transition {
            Transition::Ge => PulseKind::SidebandGe,
            Transition::GePrime => PulseKind::SidebandGePrime,
        };
        Pulse {
            kind,
            ion,
            phi,
            theta,
        }
    }

    pub fn carrier(ion: usize, theta: f64, phi: f64) -> Self {
        Pulse {
            kind: PulseKind::Carrier,
            ion,
            phi,
            theta,
        }
    }

    /// Quarter-period sideband pulse taking `|e, 0⟩` to `(|e, 0⟩ + |g, 1⟩)/√2`.
    pub fn half_sideband(ion: usize) -> Self {
        Self::sideband(ion, Transition::Ge, PI, PI / 2.0)
    }

    /// `|e, 0⟩ → |g, 1⟩`, `|g, 0⟩` untouched.
    pub fn map_ion_to_mode(ion: usize) -> Self {
        Self::sideband(ion, Transition::Ge, PI, PI)
    }

    /// `|g, 1⟩ → |e, 0⟩`, `|g, 0⟩` untouched.
    pub fn map_mode_to_ion(ion: usize) -> Self {
        Self::sideband(ion, Transition::Ge, 0.0, PI)
    }

    /// 2π pulse through `e'`: `|g, 1⟩ → −|g, 1⟩`, everything else in the
    /// `n ≤ 1` computational space untouched.
    pub fn phase_gate(ion: usize) -> Self {
        Self::sideband(ion, Transition::GePrime, 0.0, 2.0 * PI)
    }

    /// The pulse undoing this one.
    pub fn inverse(&self) -> Self {
        Pulse {
            theta: -self.theta,
            ..*self
        }
    }

    pub fn validate(&self, n_ions: usize) -> Result<()> {
        if self.ion == 0 || self.ion > n_ions {
            return Err(Error::validation(format!(
                "pulse addresses ion {} but the register has {n_ions} ions",
                self.ion
            )));
        }
        if !self.phi.is_finite() || !self.theta.is_finite() {
            return Err(Error::validation("pulse phase and area must be finite"));
        }
        Ok(())
    }

    pub fn apply(&self, state: &RegisterState) -> Result<RegisterState> {
        match self.kind.transition() {
            Some(t) => apply_sideband(state, self.ion, t, self.phi, self.theta),
            None => apply_carrier(state, self.ion, self.theta, self.phi),
        }
    }
}

/// Applies a red-sideband pulse of area `theta` and phase `phi` to `ion`.
///
/// Fails with [`TruncationError`] if more than [`TRUNCATION_TOLERANCE`] of
/// probability sits on `|x, n_max⟩`, whose partner `|g, n_max+1⟩` lies above
/// the cutoff. Below the threshold `|x, n_max⟩` is left untouched so the map
/// stays exactly unitary on the truncated space.
pub fn apply_sideband(
    state: &RegisterState,
    ion: usize,
    transition: Transition,
    phi: f64,
    theta: f64,
) -> Result<RegisterState> {
    state.check_ion(ion)?;
    if !phi.is_finite() || !theta.is_finite() {
        return Err(Error::validation("pulse phase and area must be finite"));
    }
    let n_max = state.n_max();
    let fock = state.fock_dim();
    let stride = state.ion_stride(ion);
    let block = 3 * stride;
    let x_off = transition.excited().digit() * stride;
    let amps = state.amplitudes();

    let edge: f64 = (0..amps.len())
        .step_by(block)
        .flat_map(|hi| {
            (0..stride)
                .step_by(fock)
                .map(move |lo| hi + x_off + lo + n_max)
        })
        .map(|i| amps[i].norm_sqr())
        .sum();
    if edge > TRUNCATION_TOLERANCE {
        return Err(TruncationError {
            ion,
            n_max,
            probability: edge,
            step: None,
            trial: None,
        }
        .into());
    }

    let rot: Vec<(f64, f64)> = (0..n_max)
        .map(|n| {
            let arg = theta * ((n + 1) as f64).sqrt() / 2.0;
            (arg.cos(), arg.sin())
        })
        .collect();
    let down = Complex64::from_polar(1.0, -phi);
    let up = Complex64::from_polar(1.0, phi);

    let mut out = amps.to_vec();
    for hi in (0..amps.len()).step_by(block) {
        for lo in (0..stride).step_by(fock) {
            let g_base = hi + lo;
            let x_base = hi + x_off + lo;
            for (n, &(c, s)) in rot.iter().enumerate() {
                let ax = amps[x_base + n];
                let ag = amps[g_base + n + 1];
                out[x_base + n] = ax * c + down * s * ag;
                out[g_base + n + 1] = ag * c - up * s * ax;
            }
        }
    }
    Ok(RegisterState::from_raw(state.n_ions(), n_max, out))
}

/// Rotates the `{g, e}` subspace of `ion` by `theta_c` about an axis set by
/// `phi_c`, identically for every phonon number:
///
/// ```text
/// |g⟩ → cos(θ/2)|g⟩ − e^{iφ} sin(θ/2)|e⟩
/// |e⟩ → cos(θ/2)|e⟩ + e^{-iφ} sin(θ/2)|g⟩
/// ```
pub fn apply_carrier(
    state: &RegisterState,
    ion: usize,
    theta_c: f64,
    phi_c: f64,
) -> Result<RegisterState> {
    state.check_ion(ion)?;
    if !phi_c.is_finite() || !theta_c.is_finite() {
        return Err(Error::validation("pulse phase and area must be finite"));
    }
    let stride = state.ion_stride(ion);
    let block = 3 * stride;
    let (s, c) = (theta_c / 2.0).sin_cos();
    let down = Complex64::from_polar(1.0, -phi_c);
    let up = Complex64::from_polar(1.0, phi_c);

    let amps = state.amplitudes();
    let mut out = amps.to_vec();
    for hi in (0..amps.len()).step_by(block) {
        for lo in 0..stride {
            let gi = hi + lo;
            let ei = gi + stride;
            let (ag, ae) = (amps[gi], amps[ei]);
            out[gi] = ag * c + down * s * ae;
            out[ei] = ae * c - up * s * ag;
        }
    }
    Ok(RegisterState::from_raw(state.n_ions(), state.n_max(), out))
}
