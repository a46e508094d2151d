use num_traits::Zero;

use super::ast::ExprAst;
use super::FormulaError;
use crate::Rational;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Nat(Rational),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Nat(n) => format!("`{n}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, FormulaError> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'+' => {
                toks.push((i, Tok::Plus));
                i += 1;
            }
            b'-' => {
                toks.push((i, Tok::Minus));
                i += 1;
            }
            b'*' => {
                toks.push((i, Tok::Star));
                i += 1;
            }
            b'/' => {
                toks.push((i, Tok::Slash));
                i += 1;
            }
            b'^' => {
                toks.push((i, Tok::Caret));
                i += 1;
            }
            b'(' => {
                toks.push((i, Tok::LParen));
                i += 1;
            }
            b')' => {
                toks.push((i, Tok::RParen));
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let digits = &src[start..i];
                let n: num_bigint::BigInt = digits.parse().expect("digits");
                toks.push((start, Tok::Nat(Rational::from_integer(n))));
            }
            b'a'..=b'z' | b'A'..=b'Z' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                toks.push((start, Tok::Ident(src[start..i].to_string())));
            }
            _ => {
                return Err(FormulaError::SyntaxError {
                    offset: i,
                    expected: "an operator, number, identifier, or parenthesis".into(),
                    found: format!("`{}`", &src[i..i + 1]),
                })
            }
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn found(&self) -> String {
        self.peek()
            .map(|t| t.describe())
            .unwrap_or_else(|| "end of input".into())
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        self.pos += 1;
        t
    }

    fn err(&self, expected: &str) -> FormulaError {
        FormulaError::SyntaxError {
            offset: self.offset(),
            expected: expected.into(),
            found: self.found(),
        }
    }

    fn expr(&mut self) -> Result<ExprAst, FormulaError> {
        let mut lhs = self.term(true)?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let rhs = self.term(true)?;
                    lhs = ExprAst::Add(Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let rhs = self.term(true)?;
                    lhs = ExprAst::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self, first_in_term: bool) -> Result<ExprAst, FormulaError> {
        let mut lhs = self.factor(first_in_term)?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    let rhs = self.factor(false)?;
                    lhs = ExprAst::Mul(Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let rhs = self.factor(false)?;
                    lhs = ExprAst::Div(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self, first_in_term: bool) -> Result<ExprAst, FormulaError> {
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.bump();
            let inner = self.factor(first_in_term)?;
            return Ok(ExprAst::Neg(Box::new(inner)));
        }
        let atom = self.atom(first_in_term)?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.bump();
            match self.peek() {
                Some(Tok::Nat(n)) => {
                    let n = n.clone();
                    self.bump();
                    let e: u32 = n
                        .to_integer()
                        .try_into()
                        .map_err(|_| self.err("a small non-negative exponent"))?;
                    return Ok(ExprAst::Pow(Box::new(atom), e));
                }
                _ => return Err(self.err("a non-negative integer exponent")),
            }
        }
        Ok(atom)
    }

    /// `first_in_term` resolves the grammar ambiguity between the rational
    /// atom `nat '/' nat` and term-level division: the two-token form is
    /// only recognized for the leading factor of a term, so `a*2/3` stays
    /// `(a*2)/3` while `2/3*a` is the constant two-thirds times `a`.
    fn atom(&mut self, first_in_term: bool) -> Result<ExprAst, FormulaError> {
        match self.peek() {
            Some(Tok::Nat(n)) => {
                let mut value = n.clone();
                self.bump();
                if first_in_term && matches!(self.peek(), Some(Tok::Slash)) {
                    if let Some(Tok::Nat(d)) = self.peek2() {
                        let d = d.clone();
                        if d.is_zero() {
                            return Err(self.err("a nonzero denominator"));
                        }
                        self.bump();
                        self.bump();
                        value /= d;
                    }
                }
                Ok(ExprAst::Const(value))
            }
            Some(Tok::Ident(name)) => {
                let name = name.clone();
                self.bump();
                Ok(ExprAst::Var(name))
            }
            Some(Tok::LParen) => {
                self.bump();
                let inner = self.expr()?;
                if !matches!(self.peek(), Some(Tok::RParen)) {
                    return Err(self.err("`)`"));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.err("a number, identifier, `-`, or `(`")),
        }
    }
}

pub fn parse_expr(src: &str) -> Result<ExprAst, FormulaError> {
    let toks = lex(src)?;
    let mut p = Parser { toks: &toks, pos: 0, end: src.len() };
    let ast = p.expr()?;
    if p.pos != toks.len() {
        return Err(p.err("end of input"));
    }
    Ok(ast)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::{ast_to_rf, parse_rf, render};
    use crate::RationalFunction;
    use std::collections::BTreeMap;

    #[test]
    fn grammar_shapes() {
        let ast = parse_expr("b*c/(a+c)").unwrap();
        let want = ExprAst::Div(
            Box::new(ExprAst::Mul(
                Box::new(ExprAst::Var("b".into())),
                Box::new(ExprAst::Var("c".into())),
            )),
            Box::new(ExprAst::Add(
                Box::new(ExprAst::Var("a".into())),
                Box::new(ExprAst::Var("c".into())),
            )),
        );
        assert_eq!(ast, want);
    }

    #[test]
    fn rc1_left_side() {
        let got = parse_rf("a1*a3 + a2*b1*c3").unwrap();
        let want = RationalFunction::var_named("a1")
            .mul(&RationalFunction::var_named("a3"))
            .add(
                &RationalFunction::var_named("a2")
                    .mul(&RationalFunction::var_named("b1"))
                    .mul(&RationalFunction::var_named("c3")),
            );
        assert!(got.alg_eq(&want));
    }

    #[test]
    fn negative_exponent_rejected() {
        let err = parse_expr("a^-1").unwrap_err();
        assert!(matches!(err, FormulaError::SyntaxError { .. }));
    }

    #[test]
    fn rational_atom_only_leads_a_term() {
        // 2/3*x == (2/3)*x
        let a = parse_rf("2/3*x").unwrap();
        let b = parse_rf("x*2").unwrap().div(&parse_rf("3").unwrap()).unwrap();
        assert!(a.alg_eq(&b));
        // a*2/3 == (a*2)/3, not a*(2/3) structurally -- same value here,
        // the structural distinction matters for round-tripping
        let ast = parse_expr("a*2/3").unwrap();
        assert!(matches!(ast, ExprAst::Div(_, _)));
    }

    #[test]
    fn bz_c_prime_elaborates() {
        let ast = parse_expr("(a*c+b)/c").unwrap();
        let mut universe = BTreeMap::new();
        for n in ["a", "b", "c"] {
            universe.insert(n.to_string(), crate::Variable::new(n));
        }
        let got = ast_to_rf(&ast, &universe).unwrap();
        let want = parse_rf("a + b/c").unwrap();
        assert!(got.alg_eq(&want));
    }

    #[test]
    fn x_cubed_over_six() {
        let got = parse_rf("x^3/6").unwrap();
        let x = RationalFunction::var_named("x");
        let want = x.mul(&x).mul(&x).div(&RationalFunction::from_int(6)).unwrap();
        assert!(got.alg_eq(&want));
    }

    #[test]
    fn unknown_symbol() {
        let ast = parse_expr("q + 1").unwrap();
        let err = ast_to_rf(&ast, &BTreeMap::new()).unwrap_err();
        assert!(matches!(err, FormulaError::UnknownSymbol(_)));
    }

    #[test]
    fn render_round_trip_samples() {
        for src in [
            "a + b*c",
            "(a + b)*c",
            "-a*b + c^2",
            "1/2*x + x^2/2",
            "a/(b*c)",
            "a*2/3",
            "-(a + b)",
            "(a^2)^3",
        ] {
            let ast = parse_expr(src).unwrap();
            let rendered = render(&ast);
            let reparsed = parse_expr(&rendered).unwrap();
            assert_eq!(ast, reparsed, "{src} -> {rendered}");
        }
    }
}
