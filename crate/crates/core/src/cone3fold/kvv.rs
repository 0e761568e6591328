//! The coefficient-reduction schedule that drives relative vanishing for a
//! birational morphism with an anti-ample exceptional divisor
//! `E = Σ e_i E_i`.
//!
//! Each step raises the boundary `Δ` by `μE` until some coefficient reaches
//! one, removes that component (`D ← D - E_i`, `Δ ← Δ + μE - E_i`), and
//! advances `λ` by `μ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qlattice::Rat;

/// Hard cap on the number of recorded steps.
pub const MAX_STEPS: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KvvState {
    pub step: usize,
    pub lambda: Rat,
    /// `μ_j` used to reach this state; zero for the initial state.
    pub mu: Rat,
    /// Index (0-based) of the component removed to reach this state.
    pub chosen: Option<usize>,
    pub delta: Vec<Rat>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KvvTrace {
    pub multiplicities: Vec<u64>,
    pub target: Rat,
    pub states: Vec<KvvState>,
}

impl KvvTrace {
    pub fn final_lambda(&self) -> &Rat {
        &self.states.last().expect("trace has an initial state").lambda
    }

    /// Number of reduction steps taken.
    pub fn steps(&self) -> usize {
        self.states.len() - 1
    }
}

fn validate(e: &[u64], delta0: &[Rat], target: &Rat) -> Result<()> {
    if e.is_empty() {
        return Err(Error::InvalidParameters("no exceptional components".into()));
    }
    if e.len() != delta0.len() {
        return Err(Error::InvalidParameters(format!(
            "{} multiplicities but {} initial coefficients",
            e.len(),
            delta0.len()
        )));
    }
    if let Some(i) = e.iter().position(|&x| x == 0) {
        return Err(Error::InvalidParameters(format!("multiplicity e_{} is zero", i + 1)));
    }
    if let Some(d) = delta0.iter().find(|d| d.is_negative() || **d >= Rat::one()) {
        return Err(Error::InvalidParameters(format!(
            "initial coefficient {d} is outside [0, 1)"
        )));
    }
    if target.is_negative() {
        return Err(Error::InvalidParameters(format!("negative target {target}")));
    }
    Ok(())
}

/// Run the schedule until `λ ≥ target`, recording every state.
pub fn kvv_schedule(e: &[u64], delta0: &[Rat], target: &Rat) -> Result<KvvTrace> {
    validate(e, delta0, target)?;
    let e_rat: Vec<Rat> = e.iter().map(|&x| Rat::int(x as i64)).collect();
    let mut state = KvvState {
        step: 0,
        lambda: Rat::zero(),
        mu: Rat::zero(),
        chosen: None,
        delta: delta0.to_vec(),
    };
    let mut states = vec![state.clone()];
    while state.lambda < *target {
        if states.len() > MAX_STEPS {
            return Err(Error::InvalidParameters(format!(
                "schedule did not reach {target} within {MAX_STEPS} steps"
            )));
        }
        let (chosen, mu) = state
            .delta
            .iter()
            .zip(&e_rat)
            .map(|(d, ei)| &(&Rat::one() - d) / ei)
            .enumerate()
            .min_by(|(i, a), (j, b)| a.cmp(b).then(i.cmp(j)))
            .expect("at least one component");
        let delta = state
            .delta
            .iter()
            .zip(&e_rat)
            .enumerate()
            .map(|(i, (d, ei))| {
                let raised = d + &(&mu * ei);
                if i == chosen {
                    &raised - &Rat::one()
                } else {
                    raised
                }
            })
            .collect();
        state = KvvState {
            step: state.step + 1,
            lambda: &state.lambda + &mu,
            mu,
            chosen: Some(chosen),
            delta,
        };
        states.push(state.clone());
    }
    Ok(KvvTrace {
        multiplicities: e.to_vec(),
        target: target.clone(),
        states,
    })
}
