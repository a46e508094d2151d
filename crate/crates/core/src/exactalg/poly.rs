//! Canonical multivariate polynomials over arbitrary-precision rationals.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::Rational;

/// A named variable. Cheap to clone; ordered by name.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Variable(Arc<str>);

impl Variable {
    pub fn new(name: impl AsRef<str>) -> Self {
        Variable(Arc::from(name.as_ref()))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl PartialOrd for Variable {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Variable {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.as_ref().cmp(other.0.as_ref())
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A power product of variables. Factors are kept sorted by variable name
/// with strictly positive exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    factors: Vec<(Variable, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { factors: Vec::new() }
    }

    pub fn var(v: Variable) -> Self {
        Monomial { factors: vec![(v, 1)] }
    }

    pub fn from_factors(mut factors: Vec<(Variable, u32)>) -> Self {
        factors.retain(|(_, e)| *e > 0);
        factors.sort_by(|a, b| a.0.cmp(&b.0));
        Monomial { factors }
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[(Variable, u32)] {
        &self.factors
    }

    pub fn total_degree(&self) -> u32 {
        self.factors.iter().map(|(_, e)| e).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() && j < other.factors.len() {
            match self.factors[i].0.cmp(&other.factors[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(self.factors[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.factors[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((self.factors[i].0.clone(), self.factors[i].1 + other.factors[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.factors[i..]);
        out.extend_from_slice(&other.factors[j..]);
        Monomial { factors: out }
    }

    /// Componentwise minimum of exponents.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() && j < other.factors.len() {
            match self.factors[i].0.cmp(&other.factors[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    let e = self.factors[i].1.min(other.factors[j].1);
                    out.push((self.factors[i].0.clone(), e));
                    i += 1;
                    j += 1;
                }
            }
        }
        Monomial { factors: out }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        let mut j = 0;
        for (v, e) in &self.factors {
            loop {
                if j == other.factors.len() {
                    return false;
                }
                match other.factors[j].0.cmp(v) {
                    std::cmp::Ordering::Less => j += 1,
                    std::cmp::Ordering::Equal => {
                        if other.factors[j].1 < *e {
                            return false;
                        }
                        break;
                    }
                    std::cmp::Ordering::Greater => return false,
                }
            }
        }
        true
    }

    /// `other / self`, assuming `self.divides(other)`.
    pub fn div_into(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::new();
        let mut i = 0;
        for (v, e) in &other.factors {
            let mut e = *e;
            if i < self.factors.len() && self.factors[i].0 == *v {
                e -= self.factors[i].1;
                i += 1;
            }
            if e > 0 {
                out.push((v.clone(), e));
            }
        }
        Monomial { factors: out }
    }

    pub fn exponent_of(&self, v: &Variable) -> u32 {
        self.factors
            .iter()
            .find(|(w, _)| w == v)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    /// Graded lexicographic order on variable names: total degree first,
    /// then larger exponent on the lexicographically earliest differing
    /// variable wins.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.factors.get(i), other.factors.get(j)) {
                (None, None) => return Ordering::Equal,
                // A missing variable means exponent zero there, so the side
                // that still has factors is larger on that variable.
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        match ea.cmp(eb) {
                            Ordering::Equal => {}
                            ord => return ord,
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        let mut first = true;
        for (v, e) in &self.factors {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A multivariate polynomial in canonical form: a map from monomials to
/// nonzero rational coefficients, ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Polynomial::constant(Rational::one())
    }

    pub fn constant(q: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(Monomial::one(), q);
        }
        Polynomial { terms }
    }

    pub fn variable(v: Variable) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(v), Rational::one());
        Polynomial { terms }
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Monomial::one())
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// Constant value if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.terms.is_empty() {
            return Some(Rational::zero());
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&Monomial::one()) {
                return Some(c.clone());
            }
        }
        None
    }

    /// Largest monomial and its coefficient.
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn variables(&self) -> BTreeSet<Variable> {
        let mut out = BTreeSet::new();
        for m in self.terms.keys() {
            for (v, _) in m.factors() {
                out.insert(v.clone());
            }
        }
        out
    }

    pub fn contains_variable(&self, v: &Variable) -> bool {
        self.terms
            .keys()
            .any(|m| m.factors().iter().any(|(w, _)| w == v))
    }

    fn add_term(terms: &mut BTreeMap<Monomial, Rational>, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            Self::add_term(&mut terms, m.clone(), c.clone());
        }
        Polynomial { terms }
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            Self::add_term(&mut terms, m.clone(), -c.clone());
        }
        Polynomial { terms }
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut terms = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                Self::add_term(&mut terms, ma.mul(mb), ca * cb);
            }
        }
        Polynomial { terms }
    }

    pub fn mul_scalar(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k * c))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(k, q)| (k.mul(m), q * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut out = Polynomial::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// GCD of all term monomials (the largest monomial dividing every term).
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let mut acc = match it.next() {
            Some(m) => m.clone(),
            None => return Monomial::one(),
        };
        for m in it {
            if acc.is_one() {
                break;
            }
            acc = acc.gcd(m);
        }
        acc
    }

    /// Divide every term's monomial by `m`, which must divide each of them.
    pub fn div_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (m.div_into(k), c.clone()))
                .collect(),
        }
    }

    /// Exact polynomial division: `Some(q)` with `self == q * d`, or `None`
    /// when `d` does not divide `self`.
    pub fn try_exact_div(&self, d: &Polynomial) -> Option<Polynomial> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Polynomial::zero());
        }
        let (dm, dc) = d.leading().expect("nonzero divisor");
        let mut rem = self.clone();
        let mut quot: BTreeMap<Monomial, Rational> = BTreeMap::new();
        while let Some((rm, rc)) = rem.leading() {
            if !dm.divides(rm) {
                return None;
            }
            let qm = dm.div_into(rm);
            let qc = rc / dc;
            rem = rem.sub(&d.mul_monomial(&qm, &qc));
            quot.insert(qm, qc);
        }
        Some(Polynomial { terms: quot })
    }

    /// Maximum exponent of `v` over all terms.
    pub fn degree_in(&self, v: &Variable) -> u32 {
        self.terms
            .keys()
            .map(|m| m.exponent_of(v))
            .max()
            .unwrap_or(0)
    }

    /// Split into (coefficient of v^k) polynomials, indexed by k.
    pub fn coefficients_in(&self, v: &Variable) -> Vec<Polynomial> {
        let deg = self.degree_in(v) as usize;
        let mut out = vec![Polynomial::zero(); deg + 1];
        for (m, c) in &self.terms {
            let e = m.exponent_of(v) as usize;
            let reduced = Monomial::from_factors(
                m.factors()
                    .iter()
                    .filter(|(w, _)| w != v)
                    .cloned()
                    .collect(),
            );
            Self::add_term(&mut out[e].terms, reduced, c.clone());
        }
        out
    }

    pub fn eval_rational(
        &self,
        point: &BTreeMap<Variable, Rational>,
    ) -> Result<Rational, Variable> {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.factors() {
                let x = point.get(v).ok_or_else(|| v.clone())?;
                for _ in 0..*e {
                    t *= x;
                }
            }
            acc += t;
        }
        Ok(acc)
    }
}

fn fmt_coeff_times(f: &mut fmt::Formatter<'_>, c: &Rational, m: &Monomial) -> fmt::Result {
    if m.is_one() {
        return write!(f, "{c}");
    }
    if c.is_one() {
        return write!(f, "{m}");
    }
    write!(f, "{c}*{m}")
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // Leading term first.
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            if idx == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            fmt_coeff_times(f, &c.abs(), m)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(name: &str) -> Variable {
        Variable::new(name)
    }

    fn pv(name: &str) -> Polynomial {
        Polynomial::variable(v(name))
    }

    #[test]
    fn difference_of_squares() {
        let x = pv("x");
        let one = Polynomial::one();
        let lhs = x.add(&one).mul(&x.sub(&one));
        let rhs = x.mul(&x).sub(&one);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn additive_and_multiplicative_identities() {
        let p = pv("a1").mul(&pv("a3")).add(&pv("a2"));
        assert_eq!(p.add(&Polynomial::zero()), p);
        assert_eq!(p.mul(&Polynomial::one()), p);
    }

    #[test]
    fn canonical_form_is_construction_order_independent() {
        let a = pv("a").add(&pv("b")).add(&pv("c"));
        let b = pv("c").add(&pv("a")).add(&pv("b"));
        assert_eq!(a, b);
        let p1 = pv("x").mul(&pv("y")).add(&pv("x").pow(2));
        let p2 = pv("x").pow(2).add(&pv("y").mul(&pv("x")));
        assert_eq!(p1, p2);
    }

    #[test]
    fn graded_lex_ordering() {
        // x^2 > x*y > y^2 > x > y > 1 for x < y in name order
        let x = Monomial::var(v("x"));
        let y = Monomial::var(v("y"));
        let x2 = x.mul(&x);
        let xy = x.mul(&y);
        let y2 = y.mul(&y);
        assert!(x2 > xy);
        assert!(xy > y2);
        assert!(y2 > x);
        assert!(x > y);
        assert!(y > Monomial::one());
    }

    #[test]
    fn exact_division() {
        let p = pv("a").add(&pv("b")).mul(&pv("c").add(&pv("d")));
        let q = p.try_exact_div(&pv("a").add(&pv("b"))).unwrap();
        assert_eq!(q, pv("c").add(&pv("d")));
        assert!(p.try_exact_div(&pv("a").add(&pv("c"))).is_none());
    }

    #[test]
    fn monomial_content_extraction() {
        let p = pv("a").mul(&pv("b")).add(&pv("a").mul(&pv("c")));
        let content = p.monomial_content();
        assert_eq!(content, Monomial::var(v("a")));
        let reduced = p.div_monomial(&content);
        assert_eq!(reduced, pv("b").add(&pv("c")));
    }

    #[test]
    fn display_round_form() {
        let p = pv("x").pow(2).sub(&Polynomial::one());
        assert_eq!(p.to_string(), "x^2 - 1");
        let q = pv("a1").mul(&pv("a3")).add(&pv("a2").mul(&pv("b1")).mul(&pv("c3")));
        assert_eq!(q.to_string(), "a2*b1*c3 + a1*a3");
    }
}
