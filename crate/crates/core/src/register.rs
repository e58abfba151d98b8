//! Joint Hilbert space of a chain of three-level ions sharing one truncated
//! vibrational mode.
//!
//! Amplitudes are stored densely. The flat index of a basis state
//! `|l_1 l_2 ... l_N⟩|n⟩` is the mixed-radix number whose digits are the ion
//! levels (base 3, `G=0, E=1, EPrime=2`, ion 1 most significant) followed by
//! the phonon number (base `n_max + 1`, least significant). Kets written
//! left-to-right by ion index therefore read straight off the index order.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fock cutoff used when none is given. The ideal protocols never populate
/// `n >= 2`, so the spare level exposes truncation bugs.
pub const DEFAULT_N_MAX: usize = 2;

/// Tolerance on user-supplied normalizations.
pub const NORM_TOLERANCE: f64 = 1e-9;

const LEVELS: usize = 3;

/// Internal level of one ion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IonLevel {
    /// Ground state `|g⟩`, qubit `|0⟩`.
    #[serde(rename = "g")]
    G,
    /// Metastable `|e⟩`, qubit `|1⟩`.
    #[serde(rename = "e")]
    E,
    /// Auxiliary metastable `|e'⟩`, used only by the phase gate.
    #[serde(rename = "eprime")]
    EPrime,
}

impl IonLevel {
    pub const ALL: [IonLevel; 3] = [IonLevel::G, IonLevel::E, IonLevel::EPrime];

    pub fn digit(self) -> usize {
        match self {
            IonLevel::G => 0,
            IonLevel::E => 1,
            IonLevel::EPrime => 2,
        }
    }

    pub fn from_digit(d: usize) -> Option<Self> {
        Self::ALL.get(d).copied()
    }

    pub fn symbol(self) -> &'static str {
        match self {
            IonLevel::G => "g",
            IonLevel::E => "e",
            IonLevel::EPrime => "e'",
        }
    }
}

/// Initial pure state of a single ion.
#[derive(Debug, Clone, PartialEq)]
pub struct IonPrep {
    amps: [Complex64; LEVELS],
}

impl IonPrep {
    /// Builds a prep from `(level, coefficient)` pairs. Each level may appear
    /// at most once and the coefficients must be normalized.
    pub fn new(terms: &[(IonLevel, Complex64)]) -> Result<Self> {
        if terms.is_empty() || terms.len() > LEVELS {
            return Err(Error::validation(format!(
                "an ion prep needs 1 to 3 terms, got {}",
                terms.len()
            )));
        }
        let mut amps = [Complex64::new(0.0, 0.0); LEVELS];
        let mut seen = [false; LEVELS];
        for &(level, c) in terms {
            if seen[level.digit()] {
                return Err(Error::validation(format!(
                    "level {} listed twice in ion prep",
                    level.symbol()
                )));
            }
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(Error::validation("non-finite prep coefficient"));
            }
            seen[level.digit()] = true;
            amps[level.digit()] = c;
        }
        let prep = IonPrep { amps };
        let norm = prep.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::validation(format!(
                "ion prep is not normalized (squared norm {norm})"
            )));
        }
        Ok(prep)
    }

    pub fn basis(level: IonLevel) -> Self {
        let mut amps = [Complex64::new(0.0, 0.0); LEVELS];
        amps[level.digit()] = Complex64::new(1.0, 0.0);
        IonPrep { amps }
    }

    pub fn ground() -> Self {
        Self::basis(IonLevel::G)
    }

    pub fn excited() -> Self {
        Self::basis(IonLevel::E)
    }

    /// `(|g⟩ + |e⟩)/√2`
    pub fn plus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        IonPrep {
            amps: [
                Complex64::new(h, 0.0),
                Complex64::new(h, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        }
    }

    /// `(|g⟩ - |e⟩)/√2`
    pub fn minus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        IonPrep {
            amps: [
                Complex64::new(h, 0.0),
                Complex64::new(-h, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        }
    }

    pub fn amplitude(&self, level: IonLevel) -> Complex64 {
        self.amps[level.digit()]
    }

    /// Non-zero `(level, coefficient)` pairs in level order.
    pub fn terms(&self) -> Vec<(IonLevel, Complex64)> {
        IonLevel::ALL
            .iter()
            .filter(|l| self.amps[l.digit()] != Complex64::new(0.0, 0.0))
            .map(|&l| (l, self.amps[l.digit()]))
            .collect()
    }

    fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }
}

/// A basis ket `|l_1 ... l_N⟩|n⟩`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasisLabel {
    pub levels: Vec<IonLevel>,
    pub phonons: usize,
}

impl fmt::Display for BasisLabel {
    /// Renders as e.g. `g e g g g g;1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.levels.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            let s = match l {
                IonLevel::G => "g",
                IonLevel::E => "e",
                IonLevel::EPrime => "eprime",
            };
            f.write_str(s)?;
        }
        write!(f, ";{}", self.phonons)
    }
}

/// Normalized pure state of `n_ions` three-level ions and one vibrational
/// mode truncated at `n_max` phonons.
#[derive(Debug, Clone, PartialEq)]
pub struct RegisterState {
    n_ions: usize,
    n_max: usize,
    amps: Vec<Complex64>,
}

/// Number of amplitudes for the given register shape.
pub fn dimension(n_ions: usize, n_max: usize) -> usize {
    LEVELS.pow(n_ions as u32) * (n_max + 1)
}

impl RegisterState {
    /// Tensor product of the ion preps with the mode in `|0⟩`.
    pub fn new(preps: &[IonPrep], n_max: usize) -> Result<Self> {
        if preps.is_empty() {
            return Err(Error::validation("a register needs at least one ion"));
        }
        if n_max < 1 {
            return Err(Error::validation("n_max must be at least 1"));
        }
        for (i, p) in preps.iter().enumerate() {
            let norm = p.norm_sqr();
            if (norm - 1.0).abs() > NORM_TOLERANCE {
                return Err(Error::validation(format!(
                    "prep of ion {} is not normalized (squared norm {norm})",
                    i + 1
                )));
            }
        }

        // Kronecker product, ion 1 outermost.
        let mut amps = vec![Complex64::new(1.0, 0.0)];
        for p in preps {
            let mut next = Vec::with_capacity(amps.len() * LEVELS);
            for a in &amps {
                next.extend(p.amps.iter().map(|c| a * c));
            }
            amps = next;
        }
        let fock = n_max + 1;
        let mut full = vec![Complex64::new(0.0, 0.0); amps.len() * fock];
        for (i, a) in amps.into_iter().enumerate() {
            full[i * fock] = a;
        }
        Ok(RegisterState {
            n_ions: preps.len(),
            n_max,
            amps: full,
        })
    }

    /// Wraps a raw amplitude vector, checking its length and normalization.
    pub fn from_amplitudes(n_ions: usize, n_max: usize, amps: Vec<Complex64>) -> Result<Self> {
        if n_ions == 0 {
            return Err(Error::validation("a register needs at least one ion"));
        }
        let dim = dimension(n_ions, n_max);
        if amps.len() != dim {
            return Err(Error::validation(format!(
                "expected {dim} amplitudes for {n_ions} ions and n_max={n_max}, got {}",
                amps.len()
            )));
        }
        let state = RegisterState {
            n_ions,
            n_max,
            amps,
        };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::validation(format!(
                "amplitudes are not normalized (squared norm {norm})"
            )));
        }
        Ok(state)
    }

    pub(crate) fn from_raw(n_ions: usize, n_max: usize, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), dimension(n_ions, n_max));
        RegisterState {
            n_ions,
            n_max,
            amps,
        }
    }

    pub fn n_ions(&self) -> usize {
        self.n_ions
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn fock_dim(&self) -> usize {
        self.n_max + 1
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    /// Distance in the flat index between consecutive levels of `ion` (1-based).
    pub(crate) fn ion_stride(&self, ion: usize) -> usize {
        LEVELS.pow((self.n_ions - ion) as u32) * self.fock_dim()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub(crate) fn check_ion(&self, ion: usize) -> Result<()> {
        if ion == 0 || ion > self.n_ions {
            return Err(Error::validation(format!(
                "ion index {ion} out of range 1..={}",
                self.n_ions
            )));
        }
        Ok(())
    }

    pub(crate) fn check_shape(&self, other: &RegisterState) -> Result<()> {
        if self.n_ions != other.n_ions || self.n_max != other.n_max {
            return Err(Error::validation(format!(
                "shape mismatch: ({} ions, n_max={}) vs ({} ions, n_max={})",
                self.n_ions, self.n_max, other.n_ions, other.n_max
            )));
        }
        Ok(())
    }

    pub fn index_of(&self, label: &BasisLabel) -> Result<usize> {
        if label.levels.len() != self.n_ions {
            return Err(Error::validation(format!(
                "label has {} ions, register has {}",
                label.levels.len(),
                self.n_ions
            )));
        }
        if label.phonons > self.n_max {
            return Err(Error::validation(format!(
                "phonon number {} exceeds n_max={}",
                label.phonons, self.n_max
            )));
        }
        let ions = label
            .levels
            .iter()
            .fold(0usize, |acc, l| acc * LEVELS + l.digit());
        Ok(ions * self.fock_dim() + label.phonons)
    }

    pub fn label_of(&self, index: usize) -> Result<BasisLabel> {
        if index >= self.dim() {
            return Err(Error::validation(format!(
                "basis index {index} out of range for dimension {}",
                self.dim()
            )));
        }
        let phonons = index % self.fock_dim();
        let mut rest = index / self.fock_dim();
        let mut levels = vec![IonLevel::G; self.n_ions];
        for slot in levels.iter_mut().rev() {
            *slot = IonLevel::ALL[rest % LEVELS];
            rest /= LEVELS;
        }
        Ok(BasisLabel { levels, phonons })
    }

    pub fn amplitude(&self, label: &BasisLabel) -> Result<Complex64> {
        Ok(self.amps[self.index_of(label)?])
    }

    /// Level of `ion` (1-based) encoded in the flat `index`.
    pub(crate) fn level_at(&self, index: usize, ion: usize) -> IonLevel {
        IonLevel::ALL[(index / self.ion_stride(ion)) % LEVELS]
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner_product(&self, other: &RegisterState) -> Result<Complex64> {
        self.check_shape(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Probability that `ion` (1-based) is found in `level`.
    pub fn population(&self, ion: usize, level: IonLevel) -> Result<f64> {
        self.check_ion(ion)?;
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| self.level_at(*i, ion) == level)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Probability of finding `n` phonons in the mode.
    pub fn mode_population(&self, n: usize) -> Result<f64> {
        if n > self.n_max {
            return Err(Error::validation(format!(
                "Fock index {n} out of range 0..={}",
                self.n_max
            )));
        }
        Ok(self
            .amps
            .iter()
            .skip(n)
            .step_by(self.fock_dim())
            .map(|a| a.norm_sqr())
            .sum())
    }

    /// Unit phase `p` such that `p * self` best lines up with `reference`,
    /// taken at the reference's largest-magnitude amplitude. Returns 1 when
    /// `self` vanishes there.
    pub fn phase_alignment(&self, reference: &RegisterState) -> Result<Complex64> {
        self.check_shape(reference)?;
        let (k, r) = reference
            .amps
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))
            .expect("registers are never empty");
        let s = self.amps[k];
        if s.norm() == 0.0 || r.norm() == 0.0 {
            return Ok(Complex64::new(1.0, 0.0));
        }
        Ok((r / r.norm()) / (s / s.norm()))
    }

    /// Largest amplitude-wise deviation from `reference` after global phase
    /// alignment.
    pub fn distance_up_to_phase(&self, reference: &RegisterState) -> Result<f64> {
        let p = self.phase_alignment(reference)?;
        Ok(self
            .amps
            .iter()
            .zip(&reference.amps)
            .map(|(a, b)| (p * a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Largest amplitude-wise deviation from `other`, no phase freedom.
    pub fn distance(&self, other: &RegisterState) -> Result<f64> {
        self.check_shape(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Same state embedded with a different Fock cutoff. Fails if shrinking
    /// would drop probability above `NORM_TOLERANCE`.
    pub fn with_n_max(&self, n_max: usize) -> Result<Self> {
        let old = self.fock_dim();
        let new = n_max + 1;
        let mut amps = vec![Complex64::new(0.0, 0.0); dimension(self.n_ions, n_max)];
        let mut dropped = 0.0;
        for (i, a) in self.amps.iter().enumerate() {
            let (ions, n) = (i / old, i % old);
            if n < new {
                amps[ions * new + n] = *a;
            } else {
                dropped += a.norm_sqr();
            }
        }
        if dropped > NORM_TOLERANCE {
            return Err(Error::validation(format!(
                "cannot truncate to n_max={n_max}: would drop probability {dropped:e}"
            )));
        }
        Ok(RegisterState::from_raw(self.n_ions, n_max, amps))
    }
}
