//! The sonnet engine: evolve parameter blocks along the two canonical move
//! chains, compose parametrized correspondences by substitution, and
//! certify that both ways agree — solving for free parameters when the
//! transform is a correspondence rather than a map, with a seeded numeric
//! certifier as an independent witness.

mod certify;
mod flacon;
mod pairlabel;
mod solve;
mod special;

pub use certify::certify_random;
pub use flacon::{run_flacon, FlaconReport};
pub use pairlabel::{run_pairlabel_protocol, PairLabelReport};
pub use solve::{solve_frees, SolveOutcome};
pub use special::{
    quasiinverse_b_to_one, quasiinverse_composite, sr_specialization_is_identity,
};

use std::collections::BTreeSet;
use std::fmt;

use crate::exactalg::{RationalFunction, Variable};
use crate::transforms::{Transform, TransformError};
use crate::words::{Chain, Move, ReducedWord, WordError};

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Alg(#[from] crate::AlgError),
    #[error("traces end at different words: {0} vs {1}")]
    EndWordMismatch(String, String),
    #[error("component {component} differs: {lhs} != {rhs}")]
    ComparisonFailed {
        component: usize,
        lhs: String,
        rhs: String,
    },
    #[error("triangular solving is stuck with {unresolved} free variables and {pending} open equations")]
    SolveStuck { unresolved: usize, pending: usize },
    #[error("numeric certification failed at trial {trial}, component {component}")]
    CertificationFailed { trial: usize, component: usize },
    #[error("could not draw a pole-free sample after {0} retries")]
    PoleRetriesExhausted(usize),
    #[error("start state has {blocks} blocks for a word of length {letters}")]
    StateShape { blocks: usize, letters: usize },
}

/// A free variable introduced while evolving a correspondence, together
/// with the name the tables use for it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeVar {
    pub var: Variable,
    pub paper_name: String,
}

/// Naming scheme for the free variables a braid move introduces.
pub enum FreeNaming {
    /// t1, t2, ... in introduction order.
    Mechanical { next: usize },
    /// Base letter and block offset from the transform's declared free
    /// names, primed by the step level: a1p, a3pp, a3v, a1vi, ...
    PaperPrimes { level_offset: usize },
    /// One explicit name list per braid move, in move order.
    Explicit(Vec<Vec<String>>),
}

impl FreeNaming {
    pub fn mechanical() -> Self {
        FreeNaming::Mechanical { next: 1 }
    }

    fn names(
        &mut self,
        transform: &Transform,
        step_index: usize,
        braid_index: usize,
        position: usize,
    ) -> Vec<String> {
        match self {
            FreeNaming::Mechanical { next } => {
                let mut out = Vec::new();
                for _ in 0..transform.free_count() {
                    out.push(format!("t{next}"));
                    *next += 1;
                }
                out
            }
            FreeNaming::PaperPrimes { level_offset } => {
                let level = step_index + 1 + *level_offset;
                transform
                    .free_hints()
                    .iter()
                    .map(|h| format!("{}{}{}", h.base, position + h.block_offset, prime_suffix(level)))
                    .collect()
            }
            FreeNaming::Explicit(lists) => lists[braid_index].clone(),
        }
    }
}

/// ASCII rendering of prime levels: p, pp, ppp, then roman iv..viii.
pub fn prime_suffix(level: usize) -> String {
    match level {
        1 => "p".into(),
        2 => "pp".into(),
        3 => "ppp".into(),
        4 => "iv".into(),
        5 => "v".into(),
        6 => "vi".into(),
        7 => "vii".into(),
        8 => "viii".into(),
        n => format!("x{n}"),
    }
}

/// One state of an evolution: the word and the per-letter parameter blocks.
#[derive(Clone, Debug)]
pub struct TraceState {
    pub produced_by: Option<Move>,
    pub word: ReducedWord,
    pub blocks: Vec<Vec<RationalFunction>>,
}

impl TraceState {
    pub fn flat(&self) -> Vec<RationalFunction> {
        self.blocks.iter().flatten().cloned().collect()
    }
}

/// All states produced by running a chain, plus the free variables
/// introduced along the way (in introduction order).
#[derive(Clone, Debug)]
pub struct EvolutionTrace {
    pub transform: String,
    pub width: usize,
    pub states: Vec<TraceState>,
    pub frees: Vec<FreeVar>,
}

impl EvolutionTrace {
    pub fn start(&self) -> &TraceState {
        self.states.first().expect("a trace has a start state")
    }

    pub fn end(&self) -> &TraceState {
        self.states.last().expect("a trace has an end state")
    }

    pub fn final_flat(&self) -> Vec<RationalFunction> {
        self.end().flat()
    }

    /// Input variables: everything mentioned by the start state.
    pub fn input_variables(&self) -> BTreeSet<Variable> {
        let mut out = BTreeSet::new();
        for b in &self.start().blocks {
            for rf in b {
                out.extend(rf.variables());
            }
        }
        out
    }

    /// Distinct coordinates of the state after `k` moves: input variables
    /// plus the frees introduced so far. This is the cell-dimension
    /// bookkeeping for correspondences.
    pub fn free_coordinate_count(&self, k: usize) -> usize {
        let braids_so_far = self.states[1..=k]
            .iter()
            .filter(|s| matches!(s.produced_by, Some(Move::Braid(_))))
            .count();
        let braids_total = self.states[1..]
            .iter()
            .filter(|s| matches!(s.produced_by, Some(Move::Braid(_))))
            .count();
        let per_braid = if braids_total == 0 { 0 } else { self.frees.len() / braids_total };
        self.input_variables().len() + braids_so_far * per_braid
    }
}

/// Evolve `start_blocks` along `chain`: a braid move at position k feeds
/// blocks k, k+1, k+2 through the transform (introducing fresh free
/// variables), a commutation move swaps two blocks.
pub fn run_chain(
    transform: &Transform,
    chain: &Chain,
    start_blocks: &[Vec<RationalFunction>],
    naming: &mut FreeNaming,
) -> Result<EvolutionTrace, VerifyError> {
    let words = chain.words();
    if start_blocks.len() != words[0].len() {
        return Err(VerifyError::StateShape {
            blocks: start_blocks.len(),
            letters: words[0].len(),
        });
    }
    for b in start_blocks {
        if b.len() != transform.width() {
            return Err(TransformError::BlockWidthMismatch {
                expected: transform.width(),
                got: b.len(),
            }
            .into());
        }
    }
    let mut blocks: Vec<Vec<RationalFunction>> = start_blocks.to_vec();
    let mut states = vec![TraceState {
        produced_by: None,
        word: words[0].clone(),
        blocks: blocks.clone(),
    }];
    let mut frees = Vec::new();
    let mut braid_index = 0;
    for (step, &mv) in chain.moves().iter().enumerate() {
        match mv {
            Move::Commute(k) => {
                blocks.swap(k - 1, k);
            }
            Move::Braid(k) => {
                let names = naming.names(transform, step, braid_index, k);
                braid_index += 1;
                let fresh: Vec<Variable> = names.iter().map(Variable::new).collect();
                for (v, name) in fresh.iter().zip(&names) {
                    frees.push(FreeVar { var: v.clone(), paper_name: name.clone() });
                }
                let triple = [
                    blocks[k - 1].clone(),
                    blocks[k].clone(),
                    blocks[k + 1].clone(),
                ];
                let out = transform.apply(&triple, &fresh)?;
                blocks[k - 1] = out[0].clone();
                blocks[k] = out[1].clone();
                blocks[k + 1] = out[2].clone();
            }
        }
        states.push(TraceState {
            produced_by: Some(mv),
            word: words[step + 1].clone(),
            blocks: blocks.clone(),
        });
    }
    Ok(EvolutionTrace {
        transform: transform.name().to_string(),
        width: transform.width(),
        states,
        frees,
    })
}

/// Verdict for one component of a final-state comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Equal,
    EqualAfterSolving,
    Failed,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Equal => f.write_str("equal"),
            Verdict::EqualAfterSolving => f.write_str("equal-after-solving"),
            Verdict::Failed => f.write_str("failed"),
        }
    }
}

/// Outcome of comparing the two final states: per-component verdicts, the
/// solved free-variable assignments (fully back-substituted), and the free
/// variables no equation pins down.
#[derive(Clone, Debug)]
pub struct MatchReport {
    pub components: Vec<Verdict>,
    pub solved: Vec<(FreeVar, RationalFunction)>,
    pub unconstrained: Vec<FreeVar>,
    pub ok: bool,
}

impl MatchReport {
    pub fn solved_value(&self, paper_name: &str) -> Option<&RationalFunction> {
        self.solved
            .iter()
            .find(|(fv, _)| fv.paper_name == paper_name)
            .map(|(_, rf)| rf)
    }

    pub fn is_unconstrained(&self, paper_name: &str) -> bool {
        self.unconstrained.iter().any(|fv| fv.paper_name == paper_name)
    }
}

/// Compare the final states of two traces over the same start state. With
/// no free parameters this is componentwise equality; otherwise the
/// triangular solver pins down the frees first.
pub fn compare_traces(
    upper: &EvolutionTrace,
    lower: &EvolutionTrace,
) -> Result<MatchReport, VerifyError> {
    if upper.end().word != lower.end().word {
        return Err(VerifyError::EndWordMismatch(
            upper.end().word.to_string(),
            lower.end().word.to_string(),
        ));
    }
    let lhs = upper.final_flat();
    let rhs = lower.final_flat();
    let mut frees: Vec<FreeVar> = upper.frees.clone();
    frees.extend(lower.frees.iter().cloned());

    if frees.is_empty() {
        let mut components = Vec::with_capacity(lhs.len());
        let mut ok = true;
        for (i, (l, r)) in lhs.iter().zip(&rhs).enumerate() {
            if l.alg_eq(r) {
                components.push(Verdict::Equal);
            } else {
                components.push(Verdict::Failed);
                ok = false;
                return Err(VerifyError::ComparisonFailed {
                    component: i + 1,
                    lhs: l.to_string(),
                    rhs: r.to_string(),
                });
            }
        }
        return Ok(MatchReport { components, solved: Vec::new(), unconstrained: Vec::new(), ok });
    }

    let outcome = solve_frees(&lhs, &rhs, &frees)?;
    let mut components = Vec::with_capacity(lhs.len());
    let mut ok = true;
    for i in 0..lhs.len() {
        if outcome.failed_components.contains(&i) {
            components.push(Verdict::Failed);
            ok = false;
        } else if outcome.initially_equal[i] {
            components.push(Verdict::Equal);
        } else {
            components.push(Verdict::EqualAfterSolving);
        }
    }
    let find = |v: &Variable| -> FreeVar {
        frees
            .iter()
            .find(|fv| &fv.var == v)
            .cloned()
            .expect("solved variables come from the free list")
    };
    let solved = outcome
        .canonical
        .iter()
        .map(|(v, rf)| (find(v), rf.clone()))
        .collect();
    let unconstrained = outcome.unconstrained.iter().map(|v| find(v)).collect();
    Ok(MatchReport { components, solved, unconstrained, ok })
}

/// The conjugated canonical chains used by the evolution tables: both start
/// at 123121 and end at 323123, with the parameters loaded right to left
/// (a6 ... a1 under the word).
pub fn section8_chains() -> (Chain, Chain) {
    use Move::*;
    let start = ReducedWord::parse(4, "123121").expect("table start word");
    let upper = Chain::new(
        start.clone(),
        vec![Commute(3), Braid(1), Braid(3), Commute(2), Commute(5), Braid(3), Braid(1)],
    )
    .expect("upper table chain");
    let lower = Chain::new(
        start,
        vec![Braid(4), Braid(2), Commute(4), Commute(1), Braid(2), Braid(4), Commute(3)],
    )
    .expect("lower table chain");
    (upper, lower)
}

/// Width-1 start blocks a6, a5, ..., a1 (the right-to-left table loading).
pub fn table_start_blocks() -> Vec<Vec<RationalFunction>> {
    (1..=6)
        .rev()
        .map(|k| vec![RationalFunction::var_named(&format!("a{k}"))])
        .collect()
}

/// Width-1 start blocks a1, ..., a6.
pub fn ascending_start_blocks() -> Vec<Vec<RationalFunction>> {
    (1..=6)
        .map(|k| vec![RationalFunction::var_named(&format!("a{k}"))])
        .collect()
}

/// Width-2 start blocks (a1, b1), ..., (a6, b6).
pub fn paired_start_blocks() -> Vec<Vec<RationalFunction>> {
    (1..=6)
        .map(|k| {
            vec![
                RationalFunction::var_named(&format!("a{k}")),
                RationalFunction::var_named(&format!("b{k}")),
            ]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::parse_rf;
    use crate::transforms::builtin;
    use crate::words::canonical_chains_n4;

    fn assert_state(state: &TraceState, expect: &[&str]) {
        let flat = state.flat();
        assert_eq!(flat.len(), expect.len());
        for (i, (got, want)) in flat.iter().zip(expect).enumerate() {
            let want = parse_rf(want).unwrap();
            assert!(
                got.alg_eq(&want),
                "component {}: {} != {}",
                i + 1,
                got,
                want
            );
        }
    }

    #[test]
    fn very_small_upper_chain_states() {
        let t = builtin("very_small").unwrap();
        let (upper, _) = canonical_chains_n4();
        let mut naming = FreeNaming::mechanical();
        let trace = run_chain(&t, &upper, &ascending_start_blocks(), &mut naming).unwrap();
        assert!(trace.frees.is_empty());
        let expected: [&[&str]; 8] = [
            &["a1", "a2", "a3", "a4", "a5", "a6"],
            &["a3", "a1*a3 + a2", "a1", "a4", "a5", "a6"],
            &["a3", "a1*a3 + a2", "a5", "a1*a5 + a4", "a1", "a6"],
            &["a3", "a5", "a1*a3 + a2", "a1*a5 + a4", "a1", "a6"],
            &["a3", "a5", "a1*a3 + a2", "a1*a5 + a4", "a6", "a1"],
            &["a3", "a5", "a6", "a1*a3*a6 + a2*a6 + a1*a5 + a4", "a1*a3 + a2", "a1"],
            &["a6", "a3*a6 + a5", "a3", "a1*a3*a6 + a2*a6 + a1*a5 + a4", "a1*a3 + a2", "a1"],
            &["a6", "a3*a6 + a5", "a1*a3*a6 + a2*a6 + a1*a5 + a4", "a3", "a1*a3 + a2", "a1"],
        ];
        for (state, want) in trace.states.iter().zip(expected.iter()) {
            assert_state(state, want);
        }
    }

    #[test]
    fn very_small_sonnet_holds() {
        let t = builtin("very_small").unwrap();
        let (upper, lower) = canonical_chains_n4();
        let mut naming = FreeNaming::mechanical();
        let up = run_chain(&t, &upper, &ascending_start_blocks(), &mut naming).unwrap();
        let lo = run_chain(&t, &lower, &ascending_start_blocks(), &mut naming).unwrap();
        let report = compare_traces(&up, &lo).unwrap();
        assert!(report.ok);
        assert!(report.components.iter().all(|v| *v == Verdict::Equal));
        assert_state(
            up.end(),
            &[
                "a6",
                "a3*a6 + a5",
                "a1*a3*a6 + a2*a6 + a1*a5 + a4",
                "a3",
                "a1*a3 + a2",
                "a1",
            ],
        );
    }

    #[test]
    fn corrupted_transform_fails_comparison() {
        // Flip a sign in one output of the very small R-matrix.
        let src = "name: broken\nwidth: 1\nblocks: 3\ninputs: a1, a2, a3\nfree:\n\
                   out[1] = a3\nout[2] = a1*a3 - a2\nout[3] = a1\n";
        let tf = crate::formulas::parse_transform_file(src).unwrap();
        let t = crate::transforms::Transform::from_file(&tf).unwrap();
        let (upper, lower) = canonical_chains_n4();
        let mut naming = FreeNaming::mechanical();
        let up = run_chain(&t, &upper, &ascending_start_blocks(), &mut naming).unwrap();
        let lo = run_chain(&t, &lower, &ascending_start_blocks(), &mut naming).unwrap();
        assert!(matches!(
            compare_traces(&up, &lo),
            Err(VerifyError::ComparisonFailed { .. })
        ));
    }

    #[test]
    fn free_coordinate_counts_for_full3() {
        let t = builtin("full3").unwrap();
        let (upper, _) = canonical_chains_n4();
        let mut naming = FreeNaming::PaperPrimes { level_offset: 0 };
        let blocks: Vec<Vec<RationalFunction>> = (1..=6)
            .map(|k| {
                ["a", "b", "c"]
                    .iter()
                    .map(|x| RationalFunction::var_named(&format!("{x}{k}")))
                    .collect()
            })
            .collect();
        let trace = run_chain(&t, &upper, &blocks, &mut naming).unwrap();
        // 18 inputs; R(1) adds 3 frees, R(3) adds 3 more.
        assert_eq!(trace.free_coordinate_count(1), 21);
        assert_eq!(trace.free_coordinate_count(2), 24);
        let names: Vec<&str> = trace.frees.iter().map(|f| f.paper_name.as_str()).collect();
        assert_eq!(
            names,
            ["a1p", "a3p", "b1p", "a3pp", "a5pp", "b3pp", "a3v", "a5v", "b3v", "a1vi", "a3vi", "b1vi"]
        );
    }
}
