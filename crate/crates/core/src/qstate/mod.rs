//! Exact state vectors over small, labeled tensor-product Hilbert spaces.
//!
//! A [`CompositeState`] is an ordered list of [`SubsystemSpec`]s and a dense
//! amplitude vector in row-major order: the first subsystem is the most
//! significant digit of the flat index. Callers address subsystems by
//! position and basis vectors by [`Label`], never by flat index.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result, C64, TOLERANCES};

mod measure;
mod metrics;

pub use measure::MeasurementRecord;
pub use metrics::{concurrence, phase_invariant_fidelity, pure_bipartite_concurrence};

/// Basis label of a single subsystem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    /// Internal ground level |g⟩.
    G,
    /// Internal excited level |e⟩.
    E,
    /// Momentum lattice site `l`, i.e. |P_l⟩.
    Momentum(i32),
    /// Cavity Fock state |n⟩.
    Fock(u32),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::G => f.write_str("g"),
            Label::E => f.write_str("e"),
            Label::Momentum(l) => write!(f, "P{l}"),
            Label::Fock(n) => write!(f, "{n}"),
        }
    }
}

/// Momentum of lattice site `l` in units of ħk: `P_l = (l₀/2 + l)ħk` for
/// Bragg order `l₀`. With `l₀ = 2`, `P₀ = +ħk` and `P₋₂ = -ħk`.
pub fn momentum_in_hbar_k(l: i32, order: i32) -> i32 {
    order / 2 + l
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SubsystemKind {
    AtomInternal,
    AtomMomentum,
    CavityFock,
}

impl SubsystemKind {
    fn admits(self, label: Label) -> bool {
        matches!(
            (self, label),
            (SubsystemKind::AtomInternal, Label::G | Label::E)
                | (SubsystemKind::AtomMomentum, Label::Momentum(_))
                | (SubsystemKind::CavityFock, Label::Fock(_))
        )
    }
}

/// One tensor factor: a name for reporting, its kind and its ordered basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsystemSpec {
    name: String,
    kind: SubsystemKind,
    labels: Vec<Label>,
}

impl SubsystemSpec {
    pub fn new(name: impl Into<String>, kind: SubsystemKind, labels: Vec<Label>) -> Result<Self> {
        let name = name.into();
        let invalid = |reason| Error::InvalidSubsystem { name: name.clone(), reason };
        if labels.len() < 2 {
            return Err(invalid("dimension must be at least 2"));
        }
        if labels.iter().any(|&l| !kind.admits(l)) {
            return Err(invalid("label does not belong to the subsystem kind"));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(invalid("duplicate basis label"));
            }
        }
        Ok(Self { name, kind, labels })
    }

    /// Two-level atom with basis (g, e).
    pub fn internal(name: impl Into<String>) -> Self {
        Self { name: name.into(), kind: SubsystemKind::AtomInternal, labels: vec![Label::G, Label::E] }
    }

    /// First-order Bragg pair with basis (P₀, P₋₂).
    pub fn momentum_pair(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            kind: SubsystemKind::AtomMomentum,
            labels: vec![Label::Momentum(0), Label::Momentum(-2)],
        }
    }

    /// Momentum lattice with sites `l_min..=l_max`.
    pub fn momentum_lattice(name: impl Into<String>, l_min: i32, l_max: i32) -> Result<Self> {
        Self::new(name, SubsystemKind::AtomMomentum, (l_min..=l_max).map(Label::Momentum).collect())
    }

    /// Cavity Fock space truncated at `n_max` photons.
    pub fn fock(name: impl Into<String>, n_max: u32) -> Result<Self> {
        Self::new(name, SubsystemKind::CavityFock, (0..=n_max).map(Label::Fock).collect())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> SubsystemKind {
        self.kind
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn dimension(&self) -> usize {
        self.labels.len()
    }

    pub fn index_of(&self, label: Label) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    pub(crate) fn require_index(&self, label: Label) -> Result<usize> {
        self.index_of(label)
            .ok_or_else(|| Error::UnknownLabel { subsystem: self.name.clone(), label })
    }

    /// Same basis, ignoring the name.
    pub fn same_basis(&self, other: &SubsystemSpec) -> bool {
        self.kind == other.kind && self.labels == other.labels
    }

    pub fn renamed(&self, name: impl Into<String>) -> Self {
        Self { name: name.into(), ..self.clone() }
    }
}

/// Normalized pure state on an ordered tensor product.
#[derive(Clone, Debug, PartialEq)]
pub struct CompositeState {
    subsystems: Vec<SubsystemSpec>,
    amplitudes: Vec<C64>,
}

/// Builds a normalized state from sparse `(basis tuple, amplitude)` entries.
/// Repeated tuples add up.
pub fn make_state(subsystems: Vec<SubsystemSpec>, entries: &[(&[Label], C64)]) -> Result<CompositeState> {
    let dim = subsystems.iter().map(SubsystemSpec::dimension).product();
    let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
    let strides = strides(&subsystems);
    for (labels, amp) in entries {
        let idx = flat_index(&subsystems, &strides, labels)?;
        amplitudes[idx] += *amp;
    }
    CompositeState::from_amplitudes(subsystems, amplitudes)
}

pub(crate) fn strides(subsystems: &[SubsystemSpec]) -> Vec<usize> {
    let mut strides = vec![1; subsystems.len()];
    for i in (0..subsystems.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * subsystems[i + 1].dimension();
    }
    strides
}

fn flat_index(subsystems: &[SubsystemSpec], strides: &[usize], labels: &[Label]) -> Result<usize> {
    if labels.len() != subsystems.len() {
        return Err(Error::TupleLength { expected: subsystems.len(), got: labels.len() });
    }
    subsystems
        .iter()
        .zip(labels)
        .zip(strides)
        .try_fold(0, |acc, ((s, &l), &stride)| Ok(acc + s.require_index(l)? * stride))
}

impl CompositeState {
    /// Wraps a dense amplitude vector, normalizing it.
    pub fn from_amplitudes(subsystems: Vec<SubsystemSpec>, mut amplitudes: Vec<C64>) -> Result<Self> {
        let dim: usize = subsystems.iter().map(SubsystemSpec::dimension).product();
        if subsystems.is_empty() || amplitudes.len() != dim {
            return Err(Error::TargetMismatch("amplitude count differs from the product of dimensions"));
        }
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm = amplitudes.iter().map(C64::norm_sqr).sum::<f64>().sqrt();
        if norm <= TOLERANCES.probability_floor {
            return Err(Error::ZeroNorm);
        }
        let inv = 1.0 / norm;
        amplitudes.iter_mut().for_each(|a| *a *= inv);
        Ok(Self { subsystems, amplitudes })
    }

    /// Internal constructor for results of norm-preserving maps; no
    /// renormalization so that drift stays observable.
    pub(crate) fn from_parts(subsystems: Vec<SubsystemSpec>, amplitudes: Vec<C64>) -> Self {
        debug_assert_eq!(amplitudes.len(), subsystems.iter().map(SubsystemSpec::dimension).product::<usize>());
        Self { subsystems, amplitudes }
    }

    /// The basis vector with the given labels.
    pub fn basis(subsystems: Vec<SubsystemSpec>, labels: &[Label]) -> Result<Self> {
        make_state(subsystems, &[(labels, C64::new(1.0, 0.0))])
    }

    /// Kronecker product; the subsystem list is `self` followed by `other`.
    pub fn tensor(&self, other: &CompositeState) -> CompositeState {
        let mut subsystems = self.subsystems.clone();
        subsystems.extend(other.subsystems.iter().cloned());
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        Self { subsystems, amplitudes }
    }

    pub fn subsystems(&self) -> &[SubsystemSpec] {
        &self.subsystems
    }

    pub fn subsystem(&self, index: usize) -> Result<&SubsystemSpec> {
        self.subsystems
            .get(index)
            .ok_or(Error::SubsystemIndex { index, count: self.subsystems.len() })
    }

    /// Position of the first subsystem with this name.
    pub fn subsystem_index(&self, name: &str) -> Option<usize> {
        self.subsystems.iter().position(|s| s.name == name)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.subsystems.iter().map(SubsystemSpec::dimension).collect()
    }

    pub fn dimension(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, labels: &[Label]) -> Result<C64> {
        let idx = flat_index(&self.subsystems, &strides(&self.subsystems), labels)?;
        Ok(self.amplitudes[idx])
    }

    pub fn probability(&self, labels: &[Label]) -> Result<f64> {
        self.amplitude(labels).map(|a| a.norm_sqr())
    }

    /// Basis labels of flat index `index`.
    pub fn labels_at(&self, mut index: usize) -> Vec<Label> {
        let mut out = vec![Label::G; self.subsystems.len()];
        for (i, s) in self.subsystems.iter().enumerate().rev() {
            out[i] = s.labels[index % s.dimension()];
            index /= s.dimension();
        }
        out
    }

    /// Iterates `(labels, amplitude)` over every basis vector.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<Label>, C64)> + '_ {
        self.amplitudes.iter().enumerate().map(|(i, &a)| (self.labels_at(i), a))
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(C64::norm_sqr).sum::<f64>().sqrt()
    }

    /// Same amplitudes with subsystem `index` renamed; used to mark which
    /// party holds an atom after the pair is distributed.
    pub fn relabeled(&self, index: usize, name: impl Into<String>) -> Result<CompositeState> {
        let mut out = self.clone();
        let spec = out
            .subsystems
            .get_mut(index)
            .ok_or(Error::SubsystemIndex { index, count: self.subsystems.len() })?;
        spec.name = name.into();
        Ok(out)
    }

    /// Whether two states live on the same ordered bases.
    pub fn same_structure(&self, other: &CompositeState) -> bool {
        self.subsystems.len() == other.subsystems.len()
            && self.subsystems.iter().zip(&other.subsystems).all(|(a, b)| a.same_basis(b))
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index < self.subsystems.len() {
            Ok(())
        } else {
            Err(Error::SubsystemIndex { index, count: self.subsystems.len() })
        }
    }

    /// Flat offsets of every multi-index over `targets` (row-major, in the
    /// order given) and base offsets of every multi-index over the remaining
    /// subsystems. `base + offset` enumerates the full space exactly once.
    pub(crate) fn split_offsets(&self, targets: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
        for (i, &t) in targets.iter().enumerate() {
            self.check_index(t)?;
            if targets[..i].contains(&t) {
                return Err(Error::TargetMismatch("repeated subsystem index"));
            }
        }
        let strides = strides(&self.subsystems);
        let rest: Vec<usize> = (0..self.subsystems.len()).filter(|i| !targets.contains(i)).collect();
        Ok((
            offsets_over(&self.subsystems, &strides, targets),
            offsets_over(&self.subsystems, &strides, &rest),
        ))
    }
}

fn offsets_over(subsystems: &[SubsystemSpec], strides: &[usize], which: &[usize]) -> Vec<usize> {
    let mut offsets = vec![0usize];
    for &s in which {
        let d = subsystems[s].dimension();
        offsets = offsets
            .iter()
            .flat_map(|&o| (0..d).map(move |k| o + k * strides[s]))
            .collect();
    }
    offsets
}
