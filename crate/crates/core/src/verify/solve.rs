//! Fixpoint triangular solving of the componentwise equations between two
//! final states, for the free parameters of a correspondence.

use std::collections::{BTreeMap, BTreeSet};

use super::{FreeVar, VerifyError};
use crate::exactalg::{Polynomial, RationalFunction, Variable};

/// Result of the triangular solve.
#[derive(Clone, Debug)]
pub struct SolveOutcome {
    /// Assignments in the order they were found; values may mention frees
    /// that are solved later or stay unconstrained.
    pub assignments: Vec<(Variable, RationalFunction)>,
    /// Assignments with all other solved frees substituted away: values
    /// mention inputs and unconstrained frees only.
    pub canonical: BTreeMap<Variable, RationalFunction>,
    /// Frees no equation pins down. They may still appear in canonical
    /// values of solved frees (a product constraint).
    pub unconstrained: Vec<Variable>,
    /// Components that were already identities before any solving.
    pub initially_equal: Vec<bool>,
    /// Components that stay unequal after solving.
    pub failed_components: BTreeSet<usize>,
}

/// Cross-multiplied difference of one component equation.
fn cross_poly(l: &RationalFunction, r: &RationalFunction) -> Polynomial {
    l.num().mul(r.den()).sub(&r.num().mul(l.den()))
}

/// Repeatedly pick the lowest-indexed component equation in which some
/// unresolved free variable occurs linearly with a nonzero cofactor,
/// isolate it by exact division, and substitute everywhere. Stops when no
/// equation makes progress; the remaining equations must then hold
/// identically.
pub fn solve_frees(
    lhs: &[RationalFunction],
    rhs: &[RationalFunction],
    frees: &[FreeVar],
) -> Result<SolveOutcome, VerifyError> {
    assert_eq!(lhs.len(), rhs.len());
    let mut work_l = lhs.to_vec();
    let mut work_r = rhs.to_vec();
    let initially_equal: Vec<bool> = lhs.iter().zip(rhs).map(|(l, r)| l.alg_eq(r)).collect();
    let mut unresolved: Vec<Variable> = frees.iter().map(|f| f.var.clone()).collect();
    let mut assignments: Vec<(Variable, RationalFunction)> = Vec::new();

    'outer: loop {
        for i in 0..work_l.len() {
            let p = cross_poly(&work_l[i], &work_r[i]);
            if p.is_zero() {
                continue;
            }
            for t in &unresolved {
                if p.degree_in(t) != 1 {
                    continue;
                }
                let parts = p.coefficients_in(t);
                let cofactor = &parts[1];
                let rest = &parts[0];
                if cofactor.is_zero() {
                    continue;
                }
                // cofactor * t + rest = 0
                let value = RationalFunction::new(rest.neg(), cofactor.clone())
                    .expect("cofactor is a nonzero polynomial");
                let t = t.clone();
                let mut binding = BTreeMap::new();
                binding.insert(t.clone(), value.clone());
                for slot in work_l.iter_mut().chain(work_r.iter_mut()) {
                    *slot = slot.substitute(&binding)?;
                }
                unresolved.retain(|u| u != &t);
                assignments.push((t, value));
                continue 'outer;
            }
        }
        break;
    }

    let mut failed_components = BTreeSet::new();
    let mut pending_with_frees = 0;
    for i in 0..work_l.len() {
        if !work_l[i].alg_eq(&work_r[i]) {
            failed_components.insert(i);
            let residual_vars: BTreeSet<Variable> = work_l[i]
                .variables()
                .into_iter()
                .chain(work_r[i].variables())
                .collect();
            if unresolved.iter().any(|u| residual_vars.contains(u)) {
                pending_with_frees += 1;
            }
        }
    }
    if pending_with_frees > 0 {
        return Err(VerifyError::SolveStuck {
            unresolved: unresolved.len(),
            pending: pending_with_frees,
        });
    }

    // Back-substitute assignments into each other until fixpoint.
    let mut canonical: BTreeMap<Variable, RationalFunction> = BTreeMap::new();
    let all: BTreeMap<Variable, RationalFunction> = assignments.iter().cloned().collect();
    for (t, value) in &assignments {
        let mut v = value.clone();
        for _ in 0..assignments.len() {
            let mentions: Vec<Variable> = v
                .variables()
                .into_iter()
                .filter(|x| x != t && all.contains_key(x))
                .collect();
            if mentions.is_empty() {
                break;
            }
            let subset: BTreeMap<Variable, RationalFunction> = mentions
                .into_iter()
                .map(|x| (x.clone(), all[&x].clone()))
                .collect();
            v = v.substitute(&subset)?;
        }
        canonical.insert(t.clone(), v);
    }

    Ok(SolveOutcome {
        assignments,
        canonical,
        unconstrained: unresolved,
        initially_equal,
        failed_components,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::parse_rf;

    fn fv(name: &str) -> FreeVar {
        FreeVar {
            var: Variable::new(name),
            paper_name: name.to_string(),
        }
    }

    #[test]
    fn single_linear_unknown() {
        // u * b = a  =>  u = a/b
        let lhs = vec![parse_rf("u*b").unwrap()];
        let rhs = vec![parse_rf("a").unwrap()];
        let out = solve_frees(&lhs, &rhs, &[fv("u")]).unwrap();
        assert!(out.canonical[&Variable::new("u")].alg_eq(&parse_rf("a/b").unwrap()));
        assert!(out.unconstrained.is_empty());
        assert!(out.failed_components.is_empty());
    }

    #[test]
    fn product_of_two_frees_leaves_one_unconstrained() {
        // u*v = a, and nothing else: u is solved as a/v, v stays free.
        let lhs = vec![parse_rf("u*v").unwrap()];
        let rhs = vec![parse_rf("a").unwrap()];
        let out = solve_frees(&lhs, &rhs, &[fv("u"), fv("v")]).unwrap();
        let u = &out.canonical[&Variable::new("u")];
        assert!(u.alg_eq(&parse_rf("a/v").unwrap()));
        assert_eq!(out.unconstrained, vec![Variable::new("v")]);
    }

    #[test]
    fn chained_triangular_solve() {
        // u = a and v * u = b  =>  v = b/a
        let lhs = vec![parse_rf("u").unwrap(), parse_rf("v*u").unwrap()];
        let rhs = vec![parse_rf("a").unwrap(), parse_rf("b").unwrap()];
        let out = solve_frees(&lhs, &rhs, &[fv("u"), fv("v")]).unwrap();
        assert!(out.canonical[&Variable::new("v")].alg_eq(&parse_rf("b/a").unwrap()));
    }

    #[test]
    fn genuinely_unequal_without_frees_is_reported() {
        let lhs = vec![parse_rf("a").unwrap()];
        let rhs = vec![parse_rf("b").unwrap()];
        let out = solve_frees(&lhs, &rhs, &[]).unwrap();
        assert!(out.failed_components.contains(&0));
    }

    #[test]
    fn quadratic_occurrence_is_stuck() {
        // u^2 = a has no linear isolation.
        let lhs = vec![parse_rf("u^2").unwrap()];
        let rhs = vec![parse_rf("a").unwrap()];
        let err = solve_frees(&lhs, &rhs, &[fv("u")]).unwrap_err();
        assert!(matches!(err, VerifyError::SolveStuck { .. }));
    }
}
