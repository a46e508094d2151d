//! Truncated power series in one distinguished variable, with rational
//! functions of the remaining parameters as coefficients.

use std::fmt;

use num_traits::One;

use super::poly::Variable;
use super::rf::RationalFunction;
use crate::{AlgError, Rational};

/// Coefficients of `x^0 .. x^order`; everything above `order` is unknown.
#[derive(Clone, Debug)]
pub struct TruncatedSeries {
    var: Variable,
    coeffs: Vec<RationalFunction>,
}

impl TruncatedSeries {
    pub fn zero(var: Variable, order: usize) -> Self {
        TruncatedSeries { var, coeffs: vec![RationalFunction::zero(); order + 1] }
    }

    pub fn from_coeffs(var: Variable, coeffs: Vec<RationalFunction>) -> Self {
        assert!(!coeffs.is_empty(), "a series carries at least the constant term");
        TruncatedSeries { var, coeffs }
    }

    pub fn constant(var: Variable, c: RationalFunction, order: usize) -> Self {
        let mut s = Self::zero(var, order);
        s.coeffs[0] = c;
        s
    }

    /// The monomial c * x^k / k!, the building block of distinguished bases.
    pub fn monomial_over_factorial(
        var: Variable,
        c: RationalFunction,
        k: usize,
        order: usize,
    ) -> Self {
        let mut s = Self::zero(var, order);
        if k <= order {
            let mut fact = Rational::one();
            for i in 1..=k {
                fact *= Rational::from_integer(i.into());
            }
            s.coeffs[k] = c.scale(&(Rational::one() / fact));
        }
        s
    }

    /// Interpret a rational function as a polynomial in `var`; the
    /// denominator must not involve `var`.
    pub fn from_rf(expr: &RationalFunction, var: &Variable, order: usize) -> Result<Self, AlgError> {
        if expr.den().contains_variable(var) {
            return Err(AlgError::SeriesDenominator(var.name().to_string()));
        }
        let den = RationalFunction::from_poly(expr.den().clone());
        let parts = expr.num().coefficients_in(var);
        if parts.len() > order + 1 {
            let tail_nonzero = parts[order + 1..].iter().any(|p| !p.is_zero());
            if tail_nonzero {
                return Err(AlgError::InsufficientTruncationOrder {
                    needed: parts.len() - 1,
                    available: order,
                });
            }
        }
        let mut coeffs = vec![RationalFunction::zero(); order + 1];
        for (k, p) in parts.into_iter().enumerate().take(order + 1) {
            coeffs[k] = RationalFunction::from_poly(p).div(&den)?;
        }
        Ok(TruncatedSeries { var, coeffs })
    }

    pub fn var(&self) -> &Variable {
        &self.var
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &RationalFunction {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[RationalFunction] {
        &self.coeffs
    }

    pub fn constant_term(&self) -> &RationalFunction {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> TruncatedSeries {
        let take = order.min(self.order());
        TruncatedSeries {
            var: self.var.clone(),
            coeffs: self.coeffs[..=take].to_vec(),
        }
    }

    fn check_var(&self, other: &TruncatedSeries) -> Result<(), AlgError> {
        if self.var != other.var {
            return Err(AlgError::MixedSeriesVariable(
                self.var.name().to_string(),
                other.var.name().to_string(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &TruncatedSeries) -> Result<TruncatedSeries, AlgError> {
        self.check_var(other)?;
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|k| self.coeffs[k].add(&other.coeffs[k]))
            .collect();
        Ok(TruncatedSeries { var: self.var.clone(), coeffs })
    }

    pub fn sub(&self, other: &TruncatedSeries) -> Result<TruncatedSeries, AlgError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> TruncatedSeries {
        TruncatedSeries {
            var: self.var.clone(),
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn mul(&self, other: &TruncatedSeries) -> Result<TruncatedSeries, AlgError> {
        self.check_var(other)?;
        let order = self.order().min(other.order());
        let mut coeffs = vec![RationalFunction::zero(); order + 1];
        for i in 0..=order.min(self.order()) {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(order - i).min(other.order()) {
                coeffs[i + j] = coeffs[i + j].add(&self.coeffs[i].mul(&other.coeffs[j]));
            }
        }
        Ok(TruncatedSeries { var: self.var.clone(), coeffs })
    }

    pub fn scale(&self, c: &RationalFunction) -> TruncatedSeries {
        TruncatedSeries {
            var: self.var.clone(),
            coeffs: self.coeffs.iter().map(|k| k.mul(c)).collect(),
        }
    }

    /// Derivative in the distinguished variable; the truncation order drops
    /// by one.
    pub fn derivative(&self) -> Result<TruncatedSeries, AlgError> {
        if self.order() == 0 {
            return Err(AlgError::InsufficientTruncationOrder { needed: 1, available: 0 });
        }
        let coeffs = (1..=self.order())
            .map(|k| self.coeffs[k].scale(&Rational::from_integer(k.into())))
            .collect();
        Ok(TruncatedSeries { var: self.var.clone(), coeffs })
    }

    /// Agreement of all coefficients up to the smaller truncation order.
    pub fn eq_through_common_order(&self, other: &TruncatedSeries) -> bool {
        if self.var != other.var {
            return false;
        }
        let order = self.order().min(other.order());
        (0..=order).all(|k| self.coeffs[k].alg_eq(&other.coeffs[k]))
    }

    pub fn eq_through(&self, other: &TruncatedSeries, order: usize) -> Result<bool, AlgError> {
        self.check_var(other)?;
        let available = self.order().min(other.order());
        if available < order {
            return Err(AlgError::InsufficientTruncationOrder { needed: order, available });
        }
        Ok((0..=order).all(|k| self.coeffs[k].alg_eq(&other.coeffs[k])))
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if wrote {
                f.write_str(" + ")?;
            }
            wrote = true;
            let cs = c.to_string();
            let simple = !cs.contains(['+', '-', ' ']);
            if k == 0 {
                write!(f, "{cs}")?;
            } else {
                if simple && cs != "1" {
                    write!(f, "{cs}*")?;
                } else if !simple {
                    write!(f, "({cs})*")?;
                }
                if k == 1 {
                    write!(f, "{}", self.var)?;
                } else {
                    write!(f, "{}^{k}", self.var)?;
                }
            }
        }
        if !wrote {
            f.write_str("0")?;
        }
        write!(f, " + O({}^{})", self.var, self.order() + 1)
    }
}
