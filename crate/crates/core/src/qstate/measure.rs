use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CompositeState, Label};
use crate::linalg::unitarity_deviation;
use crate::{Error, Propagator, Result, C64, TOLERANCES};

/// Outcome of a projective measurement on one subsystem.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementRecord {
    pub subsystem: usize,
    pub outcome: Label,
    /// Born probability of `outcome` before collapse.
    pub probability: f64,
    /// Post-measurement state; the measured subsystem stays in place,
    /// collapsed onto `outcome`.
    pub collapsed: CompositeState,
    /// Seed that drove the draw; `None` for deterministic post-selection.
    pub seed: Option<u64>,
}

impl CompositeState {
    /// Applies `u` to the subsystems at `targets` (in the propagator's target
    /// order), acting as the identity elsewhere.
    pub fn apply_local(&self, u: &Propagator, targets: &[usize]) -> Result<CompositeState> {
        if targets.len() != u.targets().len() {
            return Err(Error::TargetMismatch("number of addressed subsystems differs from the operator"));
        }
        for (&t, spec) in targets.iter().zip(u.targets()) {
            let have = self.subsystem(t)?;
            if have.dimension() != spec.dimension() {
                return Err(Error::TargetMismatch("dimension mismatch"));
            }
            if !have.same_basis(spec) {
                return Err(Error::TargetMismatch("basis labels differ"));
            }
        }
        let deviation = unitarity_deviation(u.matrix());
        if !(deviation <= TOLERANCES.unitarity) {
            return Err(Error::NotUnitary { deviation });
        }

        let (offsets, bases) = self.split_offsets(targets)?;
        let m = u.matrix();
        let mut out = vec![C64::new(0.0, 0.0); self.amplitudes.len()];
        let mut local = vec![C64::new(0.0, 0.0); offsets.len()];
        for &base in &bases {
            for (slot, &off) in local.iter_mut().zip(&offsets) {
                *slot = self.amplitudes[base + off];
            }
            for (row, &off) in offsets.iter().enumerate() {
                out[base + off] = local.iter().enumerate().map(|(col, a)| m[(row, col)] * a).sum();
            }
        }
        Ok(CompositeState::from_parts(self.subsystems.clone(), out))
    }

    /// Born probabilities of every basis label of subsystem `index`.
    pub fn outcome_probabilities(&self, index: usize) -> Result<Vec<(Label, f64)>> {
        let (offsets, bases) = self.split_offsets(&[index])?;
        let labels = self.subsystems[index].labels();
        Ok(offsets
            .iter()
            .zip(labels)
            .map(|(&off, &label)| (label, bases.iter().map(|&b| self.amplitudes[b + off].norm_sqr()).sum()))
            .collect())
    }

    /// Projects subsystem `index` onto `outcome`, keeping the subsystem in
    /// place. Returns the branch probability and the renormalized state.
    pub fn project(&self, index: usize, outcome: Label) -> Result<(f64, CompositeState)> {
        let k = self.subsystem(index)?.require_index(outcome)?;
        let (offsets, bases) = self.split_offsets(&[index])?;
        let mut out = vec![C64::new(0.0, 0.0); self.amplitudes.len()];
        let mut probability = 0.0;
        for &b in &bases {
            let a = self.amplitudes[b + offsets[k]];
            probability += a.norm_sqr();
            out[b + offsets[k]] = a;
        }
        if probability < TOLERANCES.probability_floor {
            return Err(Error::ZeroProbability { label: outcome, probability });
        }
        let scale = 1.0 / probability.sqrt();
        out.iter_mut().for_each(|a| *a *= scale);
        Ok((probability, CompositeState::from_parts(self.subsystems.clone(), out)))
    }

    /// Post-selects subsystem `index` on `outcome` and removes it.
    pub fn postselect(&self, index: usize, outcome: Label) -> Result<(f64, CompositeState)> {
        self.postselect_many(&[(index, outcome)])
    }

    /// Joint post-selection on several subsystems; all of them are removed.
    pub fn postselect_many(&self, selections: &[(usize, Label)]) -> Result<(f64, CompositeState)> {
        let targets: Vec<usize> = selections.iter().map(|&(i, _)| i).collect();
        let (offsets, bases) = self.split_offsets(&targets)?;
        if targets.len() == self.subsystems.len() {
            return Err(Error::TargetMismatch("post-selection would remove every subsystem"));
        }
        // offset of the selected joint label tuple
        let mut pick = 0;
        for &(i, label) in selections {
            pick = pick * self.subsystems[i].dimension() + self.subsystems[i].require_index(label)?;
        }
        let amplitudes: Vec<C64> = bases.iter().map(|&b| self.amplitudes[b + offsets[pick]]).collect();
        let probability: f64 = amplitudes.iter().map(C64::norm_sqr).sum();
        if probability < TOLERANCES.probability_floor {
            return Err(Error::ZeroProbability { label: selections[0].1, probability });
        }
        let scale = 1.0 / probability.sqrt();
        let remaining = self
            .subsystems
            .iter()
            .enumerate()
            .filter(|(i, _)| !targets.contains(i))
            .map(|(_, s)| s.clone())
            .collect();
        Ok((probability, CompositeState::from_parts(remaining, amplitudes.into_iter().map(|a| a * scale).collect())))
    }

    /// Removes a subsystem that is in a definite basis state. Fails if it
    /// carries weight anywhere else.
    pub fn factor_out(&self, index: usize, label: Label) -> Result<CompositeState> {
        let (probability, rest) = self.postselect(index, label)?;
        if (1.0 - probability).abs() > TOLERANCES.norm {
            return Err(Error::NotFactorizable { label, probability });
        }
        Ok(rest)
    }

    /// Draws an outcome of subsystem `index` from the Born distribution.
    pub fn sample_measurement(&self, index: usize, seed: u64) -> Result<MeasurementRecord> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut record = self.sample_measurement_with(index, &mut rng)?;
        record.seed = Some(seed);
        Ok(record)
    }

    /// Like [`sample_measurement`](Self::sample_measurement) but drawing
    /// from a caller-owned generator, so several measurements can share one
    /// seeded stream. The record's `seed` is `None`.
    pub fn sample_measurement_with<R: Rng + ?Sized>(&self, index: usize, rng: &mut R) -> Result<MeasurementRecord> {
        let probabilities = self.outcome_probabilities(index)?;
        let draw: f64 = rng.random();
        let mut acc = 0.0;
        let mut chosen = None;
        for &(label, p) in &probabilities {
            if p < TOLERANCES.probability_floor {
                continue;
            }
            chosen = Some(label);
            acc += p;
            if draw < acc {
                break;
            }
        }
        let outcome = chosen.ok_or(Error::ZeroNorm)?;
        let (probability, collapsed) = self.project(index, outcome)?;
        Ok(MeasurementRecord { subsystem: index, outcome, probability, collapsed, seed: None })
    }
}
