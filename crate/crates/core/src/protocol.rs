//! Pulse choreographies that grow a linear cluster state through the shared
//! vibrational mode, and the runner that plays them.
//!
//! The mode acts as a bus qubit. A phase gate on ion `k` multiplies `|g_k, 1⟩`
//! by −1, which in qubit language is `CZ(k, mode)` followed by `Z` on the
//! mode. Even-indexed ions are swapped into the mode, phase-gated against
//! their odd neighbours, and swapped back. Ion 1 and ion 2 are entangled by a
//! half sideband pulse, a mode-to-ion map, and a carrier rotation on ion 1.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::pulse::Pulse;
use crate::register::{IonPrep, RegisterState};

/// One entry of a [`PulseSequence`].
#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub pulse: Pulse,
    pub label: Option<String>,
}

impl Step {
    pub fn new(pulse: Pulse, label: impl Into<String>) -> Self {
        Step {
            pulse,
            label: Some(label.into()),
        }
    }

    pub fn unlabeled(pulse: Pulse) -> Self {
        Step { pulse, label: None }
    }
}

/// Ordered pulses plus the initial state of every ion. The mode always
/// starts in `|0⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseSequence {
    pub preps: Vec<IonPrep>,
    pub steps: Vec<Step>,
}

impl PulseSequence {
    pub fn new(preps: Vec<IonPrep>, steps: Vec<Step>) -> Result<Self> {
        let seq = PulseSequence { preps, steps };
        seq.validate()?;
        Ok(seq)
    }

    pub fn n_ions(&self) -> usize {
        self.preps.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.preps.is_empty() {
            return Err(Error::validation("a sequence needs at least one ion"));
        }
        for (i, step) in self.steps.iter().enumerate() {
            step.pulse.validate(self.n_ions()).map_err(|e| match e {
                Error::Validation(msg) => Error::Validation(format!("step {}: {msg}", i + 1)),
                other => other,
            })?;
        }
        Ok(())
    }

    /// Number of pulses that couple the ions to the mode.
    pub fn sideband_count(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| s.pulse.kind.is_sideband())
            .count()
    }

    pub fn pulses(&self) -> impl Iterator<Item = &Pulse> {
        self.steps.iter().map(|s| &s.pulse)
    }
}

/// State after one step of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    /// 1-based step index.
    pub step_index: usize,
    pub pulse: Pulse,
    pub label: Option<String>,
    pub state: RegisterState,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub final_state: RegisterState,
    pub snapshots: Vec<Snapshot>,
}

/// Prepares the register and plays every step in order.
pub fn run(seq: &PulseSequence, n_max: usize, record_snapshots: bool) -> Result<RunOutput> {
    seq.validate()?;
    let mut state = RegisterState::new(&seq.preps, n_max)?;
    let mut snapshots = Vec::new();
    for (i, step) in seq.steps.iter().enumerate() {
        state = apply_step(&state, &step.pulse, i + 1)?;
        if record_snapshots {
            snapshots.push(Snapshot {
                step_index: i + 1,
                pulse: step.pulse,
                label: step.label.clone(),
                state: state.clone(),
            });
        }
    }
    Ok(RunOutput {
        final_state: state,
        snapshots,
    })
}

/// Applies one pulse, tagging a truncation failure with its step index.
pub(crate) fn apply_step(
    state: &RegisterState,
    pulse: &Pulse,
    step: usize,
) -> Result<RegisterState> {
    pulse.apply(state).map_err(|e| match e {
        Error::Truncation(mut t) => {
            t.step = Some(step);
            Error::Truncation(t)
        }
        other => other,
    })
}

fn half_sideband(ion: usize) -> Step {
    Step::new(
        Pulse::half_sideband(ion),
        format!("half sideband on ion {ion}"),
    )
}

fn phase_gate(ion: usize) -> Step {
    Step::new(
        Pulse::phase_gate(ion),
        format!("phase gate ion {ion} / mode"),
    )
}

fn mode_to_ion(ion: usize) -> Step {
    Step::new(
        Pulse::map_mode_to_ion(ion),
        format!("map mode to ion {ion}"),
    )
}

fn ion_to_mode(ion: usize) -> Step {
    Step::new(
        Pulse::map_ion_to_mode(ion),
        format!("map ion {ion} to mode"),
    )
}

fn carrier_half(ion: usize) -> Step {
    Step::new(
        Pulse::carrier(ion, PI / 2.0, 0.0),
        format!("carrier pi/2 on ion {ion}"),
    )
}

/// The six-ion schedule, written out step by step.
pub fn cluster6_sequence() -> PulseSequence {
    let preps = vec![
        IonPrep::excited(),
        IonPrep::ground(),
        IonPrep::minus(),
        IonPrep::minus(),
        IonPrep::minus(),
        IonPrep::plus(),
    ];
    let steps = vec![
        half_sideband(1),
        phase_gate(3),
        mode_to_ion(2),
        carrier_half(1),
        ion_to_mode(4),
        phase_gate(3),
        phase_gate(5),
        mode_to_ion(4),
        ion_to_mode(6),
        phase_gate(5),
        mode_to_ion(6),
    ];
    PulseSequence { preps, steps }
}

/// Schedule for an `n_ions`-qubit linear cluster state.
///
/// Preps: ion 1 in `|e⟩`, ion 2 in `|g⟩`, odd ions from 3 on in
/// `(|g⟩ − |e⟩)/√2`. Even ions from 4 on start in `(|g⟩ − |e⟩)/√2` when they
/// have two odd neighbours and in `(|g⟩ + |e⟩)/√2` when they are last: each
/// phase gate leaves a `Z` on the ion held in the mode, so an ion gated once
/// needs the opposite starting sign from one gated twice.
///
/// With only two ions there is no ion 3 to gate against ion 2's qubit; a
/// phase gate on ion 2 itself, while it still sits in `|g⟩`, supplies the
/// missing `Z` on the mode.
pub fn chain_sequence(n_ions: usize) -> Result<PulseSequence> {
    if n_ions < 2 {
        return Err(Error::validation(format!(
            "a linear cluster needs at least 2 ions, got {n_ions}"
        )));
    }
    let preps = (1..=n_ions)
        .map(|k| match k {
            1 => IonPrep::excited(),
            2 => IonPrep::ground(),
            k if k % 2 == 0 && k == n_ions => IonPrep::plus(),
            _ => IonPrep::minus(),
        })
        .collect();

    let mut steps = vec![half_sideband(1)];
    steps.push(phase_gate(if n_ions >= 3 { 3 } else { 2 }));
    steps.push(mode_to_ion(2));
    steps.push(carrier_half(1));
    for k in (4..=n_ions).step_by(2) {
        steps.push(ion_to_mode(k));
        steps.push(phase_gate(k - 1));
        if k < n_ions {
            steps.push(phase_gate(k + 1));
        }
        steps.push(mode_to_ion(k));
    }
    Ok(PulseSequence { preps, steps })
}
