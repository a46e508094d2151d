//! Rational functions: exact quotients of canonical polynomials.
//!
//! Equality is decided by cross-multiplication, so no multivariate gcd is
//! ever needed. Normalization cancels shared monomial factors, attempts an
//! exact polynomial division, and makes the denominator monic; this keeps
//! the representation small through long chains of substitutions without
//! being required for correctness.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};

use super::poly::{Monomial, Polynomial, Variable};
use crate::{AlgError, Rational};

#[derive(Clone, Debug)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, AlgError> {
        if den.is_zero() {
            return Err(AlgError::DivisionByZeroFunction);
        }
        let mut rf = RationalFunction { num, den };
        rf.normalize();
        Ok(rf)
    }

    pub fn from_poly(p: Polynomial) -> Self {
        RationalFunction { num: p, den: Polynomial::one() }
    }

    pub fn var(v: Variable) -> Self {
        Self::from_poly(Polynomial::variable(v))
    }

    pub fn var_named(name: &str) -> Self {
        Self::var(Variable::new(name))
    }

    pub fn constant(q: Rational) -> Self {
        Self::from_poly(Polynomial::constant(q))
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(Rational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Self::from_poly(Polynomial::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Polynomial::one())
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn as_constant(&self) -> Option<Rational> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(n / d)
    }

    pub fn variables(&self) -> BTreeSet<Variable> {
        let mut out = self.num.variables();
        out.extend(self.den.variables());
        out
    }

    pub fn contains_variable(&self, v: &Variable) -> bool {
        self.num.contains_variable(v) || self.den.contains_variable(v)
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = Polynomial::one();
            return;
        }
        let content = self.num.monomial_content().gcd(&self.den.monomial_content());
        if !content.is_one() {
            self.num = self.num.div_monomial(&content);
            self.den = self.den.div_monomial(&content);
        }
        if !self.den.is_one() {
            if let Some(q) = self.num.try_exact_div(&self.den) {
                self.num = q;
                self.den = Polynomial::one();
            } else if let Some(q) = self.den.try_exact_div(&self.num) {
                self.num = Polynomial::one();
                self.den = q;
            }
        }
        let lc = self
            .den
            .leading()
            .expect("nonzero denominator")
            .1
            .clone();
        if !lc.is_one() {
            let inv = Rational::one() / lc;
            self.num = self.num.mul_scalar(&inv);
            self.den = self.den.mul_scalar(&inv);
        }
    }

    pub fn add(&self, other: &RationalFunction) -> RationalFunction {
        let (num, den) = if self.den == other.den {
            (self.num.add(&other.num), self.den.clone())
        } else {
            (
                self.num.mul(&other.den).add(&other.num.mul(&self.den)),
                self.den.mul(&other.den),
            )
        };
        let mut rf = RationalFunction { num, den };
        rf.normalize();
        rf
    }

    pub fn sub(&self, other: &RationalFunction) -> RationalFunction {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RationalFunction {
        RationalFunction { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &RationalFunction) -> RationalFunction {
        let mut rf = RationalFunction {
            num: self.num.mul(&other.num),
            den: self.den.mul(&other.den),
        };
        rf.normalize();
        rf
    }

    pub fn div(&self, other: &RationalFunction) -> Result<RationalFunction, AlgError> {
        if other.is_zero() {
            return Err(AlgError::DivisionByZeroFunction);
        }
        let mut rf = RationalFunction {
            num: self.num.mul(&other.den),
            den: self.den.mul(&other.num),
        };
        rf.normalize();
        Ok(rf)
    }

    pub fn inv(&self) -> Result<RationalFunction, AlgError> {
        RationalFunction::one().div(self)
    }

    pub fn pow(&self, e: i32) -> Result<RationalFunction, AlgError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut out = RationalFunction::one();
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        Ok(out)
    }

    pub fn scale(&self, q: &Rational) -> RationalFunction {
        let mut rf = RationalFunction { num: self.num.mul_scalar(q), den: self.den.clone() };
        rf.normalize();
        rf
    }

    /// Equality of the fractions, by cross-multiplication of canonical
    /// polynomials.
    pub fn alg_eq(&self, other: &RationalFunction) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }

    /// Replace variables by rational functions. Unbound variables are left
    /// in place. Fails when the composed denominator vanishes identically.
    pub fn substitute(
        &self,
        bindings: &BTreeMap<Variable, RationalFunction>,
    ) -> Result<RationalFunction, AlgError> {
        let num = eval_poly_rf(&self.num, bindings)?;
        let den = eval_poly_rf(&self.den, bindings)?;
        if den.is_zero() {
            return Err(AlgError::DenominatorVanishes);
        }
        num.div(&den)
    }

    /// Evaluate at a rational point; every variable must be bound.
    pub fn evaluate(
        &self,
        point: &BTreeMap<Variable, Rational>,
    ) -> Result<Rational, AlgError> {
        let num = self
            .num
            .eval_rational(point)
            .map_err(|v| AlgError::UnboundVariable(v.name().to_string()))?;
        let den = self
            .den
            .eval_rational(point)
            .map_err(|v| AlgError::UnboundVariable(v.name().to_string()))?;
        if den.is_zero() {
            return Err(AlgError::PoleAtPoint);
        }
        Ok(num / den)
    }
}

fn eval_poly_rf(
    p: &Polynomial,
    bindings: &BTreeMap<Variable, RationalFunction>,
) -> Result<RationalFunction, AlgError> {
    let mut acc = RationalFunction::zero();
    for (m, c) in p.terms() {
        let mut t = RationalFunction::constant(c.clone());
        for (v, e) in m.factors() {
            let base = match bindings.get(v) {
                Some(rf) => rf.clone(),
                None => RationalFunction::var(v.clone()),
            };
            t = t.mul(&base.pow(*e as i32)?);
        }
        acc = acc.add(&t);
    }
    Ok(acc)
}

/// Cross-multiplication equality. `Eq` and `Hash` are intentionally not
/// implemented: equal fractions may have different representations.
impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        self.alg_eq(other)
    }
}

fn needs_paren_as_den(p: &Polynomial) -> bool {
    if p.num_terms() != 1 {
        return true;
    }
    let (m, c) = p.leading().expect("single term");
    !(c.is_one() && m.factors().len() == 1)
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if self.num.num_terms() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        if needs_paren_as_den(&self.den) {
            write!(f, "/({})", self.den)
        } else {
            write!(f, "/{}", self.den)
        }
    }
}

/// Convenience: a monomial quotient built from variable names, used widely
/// in tests and builtin transform definitions.
pub fn rf_var_product(names: &[&str]) -> RationalFunction {
    let mut out = RationalFunction::one();
    for n in names {
        out = out.mul(&RationalFunction::var_named(n));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rv(name: &str) -> RationalFunction {
        RationalFunction::var_named(name)
    }

    #[test]
    fn inverse_cancels() {
        let a = rv("a");
        let b = rv("b");
        let ab = a.div(&b).unwrap();
        let ba = b.div(&a).unwrap();
        assert!(ab.mul(&ba).is_one());
    }

    #[test]
    fn common_denominator_sum() {
        // 1/a + 1/b = (a+b)/(ab)
        let a = rv("a");
        let b = rv("b");
        let lhs = a.inv().unwrap().add(&b.inv().unwrap());
        let rhs = a.add(&b).div(&a.mul(&b)).unwrap();
        assert!(lhs.alg_eq(&rhs));
    }

    #[test]
    fn fraction_division() {
        // (a1*b3)/(a3p) / a3p = a1*b3/a3p^2
        let lhs = rv("a1")
            .mul(&rv("b3"))
            .div(&rv("a3p"))
            .unwrap()
            .div(&rv("a3p"))
            .unwrap();
        let rhs = rv("a1")
            .mul(&rv("b3"))
            .div(&rv("a3p").mul(&rv("a3p")))
            .unwrap();
        assert!(lhs.alg_eq(&rhs));
    }

    #[test]
    fn equality_by_cross_multiplication() {
        // (ac+bc)/c == a+b
        let a = rv("a");
        let b = rv("b");
        let c = rv("c");
        let lhs = a.mul(&c).add(&b.mul(&c)).div(&c).unwrap();
        let rhs = a.add(&b);
        assert!(lhs.alg_eq(&rhs));
        // bc/(a+c) != bc/(a+b)
        let l2 = b.mul(&c).div(&a.add(&c)).unwrap();
        let r2 = b.mul(&c).div(&a.add(&b)).unwrap();
        assert!(!l2.alg_eq(&r2));
    }

    #[test]
    fn substitute_is_hand_checked() {
        // substitute a -> bc/(a+c) in a+c gives (bc+ac+c^2)/(a+c)
        let a = Variable::new("a");
        let expr = rv("a").add(&rv("c"));
        let mut bindings = BTreeMap::new();
        bindings.insert(
            a,
            rv("b").mul(&rv("c")).div(&rv("a").add(&rv("c"))).unwrap(),
        );
        let got = expr.substitute(&bindings).unwrap();
        let want_num = rv("b")
            .mul(&rv("c"))
            .add(&rv("a").mul(&rv("c")))
            .add(&rv("c").mul(&rv("c")));
        let want = want_num.div(&rv("a").add(&rv("c"))).unwrap();
        assert!(got.alg_eq(&want));
    }

    #[test]
    fn substitute_identity() {
        let expr = rv("a").add(&rv("c")).div(&rv("b")).unwrap();
        let got = expr.substitute(&BTreeMap::new()).unwrap();
        assert!(got.alg_eq(&expr));
    }

    #[test]
    fn evaluate_lusztig_component() {
        // bc/(a+c) at a=1,b=1,c=2 -> 2/3
        let expr = rv("b").mul(&rv("c")).div(&rv("a").add(&rv("c"))).unwrap();
        let mut point = BTreeMap::new();
        for (n, v) in [("a", 1), ("b", 1), ("c", 2)] {
            point.insert(Variable::new(n), Rational::from_integer(v.into()));
        }
        assert_eq!(
            expr.evaluate(&point).unwrap(),
            Rational::new(2.into(), 3.into())
        );
    }

    #[test]
    fn evaluate_pole_and_unbound() {
        let expr = rv("a").sub(&rv("a")).inv();
        // 1/(a-a) normalizes to a zero denominator already at construction
        assert!(matches!(expr, Err(AlgError::DivisionByZeroFunction)));
        let e2 = rv("x");
        let err = e2.evaluate(&BTreeMap::new()).unwrap_err();
        assert!(matches!(err, AlgError::UnboundVariable(_)));
    }

    #[test]
    fn evaluate_matches_direct() {
        let x = rv("x");
        let mut point = BTreeMap::new();
        point.insert(Variable::new("x"), Rational::from_integer(5.into()));
        assert_eq!(x.evaluate(&point).unwrap(), Rational::from_integer(5.into()));
    }
}
