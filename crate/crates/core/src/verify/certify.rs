//! Seeded numeric certification: instantiate the inputs at random positive
//! rationals, solve the free parameters numerically by the same triangular
//! procedure, and compare the evaluated tuples exactly.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use super::{EvolutionTrace, VerifyError};
use crate::exactalg::{RationalFunction, Variable};
use crate::Rational;

const POOL_MAX: u64 = 97;
const RETRIES_PER_TRIAL: usize = 20;

fn draw_pool(rng: &mut ChaCha20Rng) -> Rational {
    let p = rng.gen_range(1..=POOL_MAX);
    let q = rng.gen_range(1..=POOL_MAX);
    Rational::new(p.into(), q.into())
}

/// Report of a certification run.
#[derive(Clone, Debug)]
pub struct CertifyReport {
    pub trials: usize,
    pub seed: u64,
    pub retries_used: usize,
}

/// For each trial: draw the input variables from the pool, reduce both
/// final tuples to rational functions of the frees alone, then solve the
/// frees one linear equation at a time (drawing a pool value for any free
/// that no equation pins down) and check every component numerically.
pub fn certify_random(
    upper: &EvolutionTrace,
    lower: &EvolutionTrace,
    trials: usize,
    seed: u64,
) -> Result<CertifyReport, VerifyError> {
    assert!(trials >= 1);
    let lhs = upper.final_flat();
    let rhs = lower.final_flat();
    let free_vars: BTreeSet<Variable> = upper
        .frees
        .iter()
        .chain(&lower.frees)
        .map(|f| f.var.clone())
        .collect();
    let mut inputs: BTreeSet<Variable> = BTreeSet::new();
    for rf in lhs.iter().chain(&rhs) {
        for v in rf.variables() {
            if !free_vars.contains(&v) {
                inputs.insert(v);
            }
        }
    }
    let free_order: Vec<Variable> = upper
        .frees
        .iter()
        .chain(&lower.frees)
        .map(|f| f.var.clone())
        .filter(|v| lhs.iter().chain(&rhs).any(|rf| rf.contains_variable(v)))
        .collect();

    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut retries_used = 0;
    for trial in 0..trials {
        let mut attempts = 0;
        loop {
            match run_trial(&lhs, &rhs, &inputs, &free_order, &mut rng) {
                Ok(Some(bad_component)) => {
                    return Err(VerifyError::CertificationFailed {
                        trial,
                        component: bad_component + 1,
                    });
                }
                Ok(None) => break,
                Err(_) => {
                    attempts += 1;
                    retries_used += 1;
                    if attempts > RETRIES_PER_TRIAL {
                        return Err(VerifyError::PoleRetriesExhausted(RETRIES_PER_TRIAL));
                    }
                }
            }
        }
    }
    Ok(CertifyReport { trials, seed, retries_used })
}

/// One trial. `Ok(None)` means all components matched; `Ok(Some(i))` means
/// component i differed; `Err` means a pole was hit and the trial should be
/// redrawn.
fn run_trial(
    lhs: &[RationalFunction],
    rhs: &[RationalFunction],
    inputs: &BTreeSet<Variable>,
    free_order: &[Variable],
    rng: &mut ChaCha20Rng,
) -> Result<Option<usize>, VerifyError> {
    let mut point: BTreeMap<Variable, RationalFunction> = BTreeMap::new();
    for v in inputs {
        point.insert(v.clone(), RationalFunction::constant(draw_pool(rng)));
    }
    let mut l: Vec<RationalFunction> = Vec::with_capacity(lhs.len());
    let mut r: Vec<RationalFunction> = Vec::with_capacity(rhs.len());
    for rf in lhs {
        l.push(rf.substitute(&point)?);
    }
    for rf in rhs {
        r.push(rf.substitute(&point)?);
    }

    let mut unresolved: Vec<Variable> = free_order.to_vec();
    while !unresolved.is_empty() {
        let mut progressed = false;
        'scan: for i in 0..l.len() {
            let p = l[i].num().mul(r[i].den()).sub(&r[i].num().mul(l[i].den()));
            if p.is_zero() {
                continue;
            }
            for t in &unresolved {
                if p.degree_in(t) != 1 {
                    continue;
                }
                let parts = p.coefficients_in(t);
                if parts[1].is_zero() {
                    continue;
                }
                let value = RationalFunction::new(parts[0].neg(), parts[1].clone())
                    .expect("nonzero cofactor");
                let t = t.clone();
                let mut binding = BTreeMap::new();
                binding.insert(t.clone(), value);
                for slot in l.iter_mut().chain(r.iter_mut()) {
                    *slot = slot.substitute(&binding)?;
                }
                unresolved.retain(|u| u != &t);
                progressed = true;
                break 'scan;
            }
        }
        if !progressed {
            // No equation pins the remaining frees; fill one in from the
            // pool and keep going.
            let t = unresolved.remove(0);
            let mut binding = BTreeMap::new();
            binding.insert(t, RationalFunction::constant(draw_pool(rng)));
            for slot in l.iter_mut().chain(r.iter_mut()) {
                *slot = slot.substitute(&binding)?;
            }
        }
    }

    for i in 0..l.len() {
        let lv = l[i]
            .as_constant()
            .ok_or(VerifyError::PoleRetriesExhausted(0))?;
        let rv = r[i]
            .as_constant()
            .ok_or(VerifyError::PoleRetriesExhausted(0))?;
        if lv != rv {
            return Ok(Some(i));
        }
    }
    Ok(None)
}
