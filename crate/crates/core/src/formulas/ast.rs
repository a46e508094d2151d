use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use super::FormulaError;
use crate::exactalg::{RationalFunction, Variable};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprAst {
    Const(Rational),
    Var(String),
    Add(Box<ExprAst>, Box<ExprAst>),
    Sub(Box<ExprAst>, Box<ExprAst>),
    Mul(Box<ExprAst>, Box<ExprAst>),
    Div(Box<ExprAst>, Box<ExprAst>),
    Neg(Box<ExprAst>),
    Pow(Box<ExprAst>, u32),
}

impl ExprAst {
    pub fn identifiers(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_identifiers(&mut out);
        out
    }

    fn collect_identifiers(&self, out: &mut BTreeSet<String>) {
        match self {
            ExprAst::Const(_) => {}
            ExprAst::Var(n) => {
                out.insert(n.clone());
            }
            ExprAst::Add(a, b) | ExprAst::Sub(a, b) | ExprAst::Mul(a, b) | ExprAst::Div(a, b) => {
                a.collect_identifiers(out);
                b.collect_identifiers(out);
            }
            ExprAst::Neg(a) => a.collect_identifiers(out),
            ExprAst::Pow(a, _) => a.collect_identifiers(out),
        }
    }
}

/// Compositional evaluation into the rational-function field.
pub fn ast_to_rf(
    ast: &ExprAst,
    universe: &BTreeMap<String, Variable>,
) -> Result<RationalFunction, FormulaError> {
    match ast {
        ExprAst::Const(q) => Ok(RationalFunction::constant(q.clone())),
        ExprAst::Var(name) => universe
            .get(name)
            .map(|v| RationalFunction::var(v.clone()))
            .ok_or_else(|| FormulaError::UnknownSymbol(name.clone())),
        ExprAst::Add(a, b) => Ok(ast_to_rf(a, universe)?.add(&ast_to_rf(b, universe)?)),
        ExprAst::Sub(a, b) => Ok(ast_to_rf(a, universe)?.sub(&ast_to_rf(b, universe)?)),
        ExprAst::Mul(a, b) => Ok(ast_to_rf(a, universe)?.mul(&ast_to_rf(b, universe)?)),
        ExprAst::Div(a, b) => ast_to_rf(a, universe)?
            .div(&ast_to_rf(b, universe)?)
            .map_err(|_| FormulaError::UnknownSymbol("division by zero expression".into())),
        ExprAst::Neg(a) => Ok(ast_to_rf(a, universe)?.neg()),
        ExprAst::Pow(a, e) => ast_to_rf(a, universe)?
            .pow(*e as i32)
            .map_err(|_| FormulaError::UnknownSymbol("power of zero expression".into())),
    }
}

fn precedence(ast: &ExprAst) -> u8 {
    match ast {
        ExprAst::Add(..) | ExprAst::Sub(..) => 1,
        ExprAst::Mul(..) | ExprAst::Div(..) => 2,
        ExprAst::Neg(..) => 3,
        ExprAst::Pow(..) => 4,
        // Non-integer constants render with a '/', so they bind like a term.
        ExprAst::Const(q) => {
            if q.is_integer() {
                5
            } else {
                2
            }
        }
        ExprAst::Var(_) => 5,
    }
}

fn render_prec(ast: &ExprAst, parent: u8, out: &mut String) {
    let prec = precedence(ast);
    let paren = prec < parent;
    if paren {
        out.push('(');
    }
    match ast {
        ExprAst::Const(q) => out.push_str(&q.to_string()),
        ExprAst::Var(n) => out.push_str(n),
        ExprAst::Add(a, b) => {
            render_prec(a, 1, out);
            out.push_str(" + ");
            render_prec(b, 2, out);
        }
        ExprAst::Sub(a, b) => {
            render_prec(a, 1, out);
            out.push_str(" - ");
            render_prec(b, 2, out);
        }
        ExprAst::Mul(a, b) => {
            render_prec(a, 2, out);
            out.push('*');
            render_prec(b, 3, out);
        }
        ExprAst::Div(a, b) => {
            render_prec(a, 2, out);
            out.push('/');
            // `2/3` would re-lex as the rational atom two-thirds; keep the
            // division node by parenthesizing a divisor that starts with a
            // digit whenever the dividend ends with one.
            let mut rhs = String::new();
            render_prec(b, 3, &mut rhs);
            let merge_hazard = out.chars().last().is_some_and(|c| c.is_ascii_digit())
                && rhs.starts_with(|c: char| c.is_ascii_digit());
            if merge_hazard {
                out.push('(');
                out.push_str(&rhs);
                out.push(')');
            } else {
                out.push_str(&rhs);
            }
        }
        ExprAst::Neg(a) => {
            out.push('-');
            render_prec(a, 3, out);
        }
        ExprAst::Pow(a, e) => {
            render_prec(a, 5, out);
            out.push('^');
            out.push_str(&e.to_string());
        }
    }
    if paren {
        out.push(')');
    }
}

/// Render with minimal parentheses; `parse(render(ast))` is structurally
/// equal to `ast`.
pub fn render(ast: &ExprAst) -> String {
    let mut out = String::new();
    render_prec(ast, 0, &mut out);
    out
}
