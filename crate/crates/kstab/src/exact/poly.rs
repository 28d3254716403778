//! Sparse multivariate polynomials over the rationals.
//!
//! A polynomial belongs to a [`PolyRing`], an ordered list of variable
//! names. Terms are kept in a canonical graded-lexicographic order (total
//! degree first, then exponents left to right), so equality is structural
//! and printing is deterministic.

use super::{format_rational, ExactError, Rational};
use num_traits::{One, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

/// Exponent vector with graded-lex ordering.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// An ordered set of variable names shared by the polynomials built on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyRing {
    vars: Arc<Vec<String>>,
}

impl PolyRing {
    pub fn new<S: Into<String>>(vars: Vec<S>) -> Self {
        let vars: Vec<String> = vars.into_iter().map(Into::into).collect();
        PolyRing {
            vars: Arc::new(vars),
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn zero(&self) -> Poly {
        Poly {
            ring: self.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(&self) -> Poly {
        self.constant(Rational::one())
    }

    pub fn constant(&self, c: Rational) -> Poly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial(vec![0; self.len()]), c);
        }
        Poly {
            ring: self.clone(),
            terms,
        }
    }

    pub fn var(&self, name: &str) -> Result<Poly, ExactError> {
        let i = self
            .index_of(name)
            .ok_or_else(|| ExactError::UnknownVariable(name.to_string()))?;
        let mut exps = vec![0; self.len()];
        exps[i] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(Monomial(exps), Rational::one());
        Ok(Poly {
            ring: self.clone(),
            terms,
        })
    }

    /// Parses an expression over this ring's variables.
    ///
    /// Grammar: `+ - * ^` with parentheses, integer or `p/q` literals, and
    /// nonnegative integer exponents. Multiplication is always explicit.
    pub fn parse(&self, text: &str) -> Result<Poly, ExactError> {
        Parser::new(self, text).parse()
    }

    fn describe(&self) -> String {
        format!("[{}]", self.vars.join(", "))
    }
}

/// Sparse polynomial with rational coefficients in a fixed ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    ring: PolyRing,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_zero() {
            Some(Rational::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    /// Total degree; zero polynomial reports 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: &str) -> Result<u32, ExactError> {
        let i = self
            .ring
            .index_of(var)
            .ok_or_else(|| ExactError::UnknownVariable(var.to_string()))?;
        Ok(self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0))
    }

    /// Leading term in graded-lex order.
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    fn insert_term(terms: &mut BTreeMap<Monomial, Rational>, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn assert_same_ring(&self, other: &Poly) {
        assert_eq!(
            self.ring,
            other.ring,
            "polynomial ring mismatch: {} vs {}",
            self.ring.describe(),
            other.ring.describe()
        );
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return self.ring.zero();
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, v)| (m.clone(), v * c))
            .collect();
        Poly {
            ring: self.ring.clone(),
            terms,
        }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = self.ring.one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn derivative(&self, var: &str) -> Result<Poly, ExactError> {
        let i = self
            .ring
            .index_of(var)
            .ok_or_else(|| ExactError::UnknownVariable(var.to_string()))?;
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[i] = e - 1;
            Self::insert_term(&mut terms, Monomial(exps), c * super::rint(e as i64));
        }
        Ok(Poly {
            ring: self.ring.clone(),
            terms,
        })
    }

    /// Antiderivative with respect to `var` (constant of integration 0).
    pub fn antiderivative(&self, var: &str) -> Result<Poly, ExactError> {
        let i = self
            .ring
            .index_of(var)
            .ok_or_else(|| ExactError::UnknownVariable(var.to_string()))?;
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.0[i];
            let mut exps = m.0.clone();
            exps[i] = e + 1;
            Self::insert_term(
                &mut terms,
                Monomial(exps),
                c / super::rint((e + 1) as i64),
            );
        }
        Ok(Poly {
            ring: self.ring.clone(),
            terms,
        })
    }

    /// Substitutes a polynomial for every variable that actually appears.
    /// All replacement polynomials must share one target ring.
    pub fn substitute(&self, map: &BTreeMap<String, Poly>) -> Result<Poly, ExactError> {
        let target = match map.values().next() {
            Some(p) => p.ring.clone(),
            None => self.ring.clone(),
        };
        for p in map.values() {
            if p.ring != target {
                return Err(ExactError::RingMismatch(
                    p.ring.describe(),
                    target.describe(),
                ));
            }
        }
        let mut images: Vec<Option<&Poly>> = vec![None; self.ring.len()];
        for (name, p) in map {
            if let Some(i) = self.ring.index_of(name) {
                images[i] = Some(p);
            }
        }
        let mut acc = target.zero();
        for (m, c) in &self.terms {
            let mut term = target.constant(c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let img = images[i].ok_or_else(|| {
                    ExactError::MissingSubstitution(self.ring.vars[i].clone())
                })?;
                term = &term * &img.pow(e);
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }

    /// Replaces a single variable, leaving the others untouched.
    pub fn subst_var(&self, var: &str, value: &Poly) -> Result<Poly, ExactError> {
        let value = value.embed(&self.ring)?;
        let i = self
            .ring
            .index_of(var)
            .ok_or_else(|| ExactError::UnknownVariable(var.to_string()))?;
        let mut acc = self.ring.zero();
        for (m, c) in &self.terms {
            let e = m.0[i];
            let mut exps = m.0.clone();
            exps[i] = 0;
            let mut base = self.ring.zero();
            Self::insert_term(&mut base.terms, Monomial(exps), c.clone());
            acc = &acc + &(&base * &value.pow(e));
        }
        Ok(acc)
    }

    /// Full evaluation at a rational point.
    pub fn evaluate(&self, point: &BTreeMap<String, Rational>) -> Result<Rational, ExactError> {
        let mut coords: Vec<Option<&Rational>> = vec![None; self.ring.len()];
        for (name, v) in point {
            if let Some(i) = self.ring.index_of(name) {
                coords[i] = Some(v);
            }
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let v = coords[i]
                    .ok_or_else(|| ExactError::MissingPoint(self.ring.vars[i].clone()))?;
                for _ in 0..e {
                    t = &t * v;
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Evaluates a univariate polynomial at a point.
    pub fn eval_univar(&self, x: &Rational) -> Result<Rational, ExactError> {
        let var = self.sole_variable()?;
        match var {
            Some(name) => {
                let mut point = BTreeMap::new();
                point.insert(name, x.clone());
                self.evaluate(&point)
            }
            None => Ok(self.as_constant().unwrap()),
        }
    }

    /// The unique variable with positive degree, or `None` for constants.
    pub fn sole_variable(&self) -> Result<Option<String>, ExactError> {
        let mut found: Option<usize> = None;
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    match found {
                        None => found = Some(i),
                        Some(j) if j == i => {}
                        Some(j) => {
                            return Err(ExactError::NotUnivariate(format!(
                                "{}, {}",
                                self.ring.vars[j], self.ring.vars[i]
                            )))
                        }
                    }
                }
            }
        }
        Ok(found.map(|i| self.ring.vars[i].clone()))
    }

    /// Coefficients of `self` viewed as a polynomial in `var`; index k holds
    /// the coefficient of `var^k`, itself a polynomial with `var`-degree 0.
    pub fn coeffs_in(&self, var: &str) -> Result<Vec<Poly>, ExactError> {
        let i = self
            .ring
            .index_of(var)
            .ok_or_else(|| ExactError::UnknownVariable(var.to_string()))?;
        let deg = self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0) as usize;
        let mut out = vec![self.ring.zero(); deg + 1];
        for (m, c) in &self.terms {
            let k = m.0[i] as usize;
            let mut exps = m.0.clone();
            exps[i] = 0;
            Self::insert_term(&mut out[k].terms, Monomial(exps), c.clone());
        }
        Ok(out)
    }

    /// Maps this polynomial into a larger ring, matching variables by name.
    pub fn embed(&self, target: &PolyRing) -> Result<Poly, ExactError> {
        if self.ring == *target {
            return Ok(self.clone());
        }
        let mut index_map = Vec::with_capacity(self.ring.len());
        for v in self.ring.vars() {
            let j = target
                .index_of(v)
                .ok_or_else(|| ExactError::UnknownVariable(v.clone()))?;
            index_map.push(j);
        }
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut exps = vec![0u32; target.len()];
            for (i, &e) in m.0.iter().enumerate() {
                exps[index_map[i]] += e;
            }
            Self::insert_term(&mut terms, Monomial(exps), c.clone());
        }
        Ok(Poly {
            ring: target.clone(),
            terms,
        })
    }

    /// Drops variables that do not appear; errors if a dropped variable has
    /// positive degree somewhere.
    pub fn project(&self, target: &PolyRing) -> Result<Poly, ExactError> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut exps = vec![0u32; target.len()];
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let name = &self.ring.vars[i];
                match target.index_of(name) {
                    Some(j) => exps[j] += e,
                    None => return Err(ExactError::UnknownVariable(name.clone())),
                }
            }
            Self::insert_term(&mut terms, Monomial(exps), c.clone());
        }
        Ok(Poly {
            ring: target.clone(),
            terms,
        })
    }

    /// Exact multivariate division; `None` when `divisor` does not divide.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        self.assert_same_ring(divisor);
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let mut rem = self.clone();
        let mut quo = self.ring.zero();
        let (dm, dc) = divisor.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        while !rem.is_zero() {
            let (rm, rc) = rem.leading().map(|(m, c)| (m.clone(), c.clone()))?;
            let mut exps = Vec::with_capacity(rm.0.len());
            for (a, b) in rm.0.iter().zip(dm.0.iter()) {
                if a < b {
                    return None;
                }
                exps.push(a - b);
            }
            let qm = Monomial(exps);
            let qc = &rc / &dc;
            let mut t = self.ring.zero();
            Self::insert_term(&mut t.terms, qm, qc);
            rem = &rem - &(&t * divisor);
            quo = &quo + &t;
        }
        Some(quo)
    }

    /// Definite integral of a univariate polynomial over `[a, b]`.
    pub fn integrate(&self, a: &Rational, b: &Rational) -> Result<Rational, ExactError> {
        let var = match self.sole_variable()? {
            Some(v) => v,
            None => {
                let c = self.as_constant().unwrap();
                return Ok(&c * &(b - a));
            }
        };
        let anti = self.antiderivative(&var)?;
        Ok(anti.eval_univar(b)? - anti.eval_univar(a)?)
    }

    /// Definite integral in `var` with polynomial bounds; the result no
    /// longer involves `var`.
    pub fn integrate_in(&self, var: &str, lo: &Poly, hi: &Poly) -> Result<Poly, ExactError> {
        let anti = self.antiderivative(var)?;
        let upper = anti.subst_var(var, hi)?;
        let lower = anti.subst_var(var, lo)?;
        Ok(&upper - &lower)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.assert_same_ring(rhs);
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            Poly::insert_term(&mut terms, m.clone(), c.clone());
        }
        Poly {
            ring: self.ring.clone(),
            terms,
        }
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), -c.clone()))
            .collect();
        Poly {
            ring: self.ring.clone(),
            terms,
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    // Exponent vectors add under term multiplication.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &Poly) -> Poly {
        self.assert_same_ring(rhs);
        let mut terms = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let exps: Vec<u32> = ma.0.iter().zip(mb.0.iter()).map(|(a, b)| a + b).collect();
                Poly::insert_term(&mut terms, Monomial(exps), ca * cb);
            }
        }
        Poly {
            ring: self.ring.clone(),
            terms,
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let mut mono = String::new();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !mono.is_empty() {
                    mono.push('*');
                }
                mono.push_str(&self.ring.vars[i]);
                if e > 1 {
                    mono.push_str(&format!("^{}", e));
                }
            }
            let abs = if c < &Rational::zero() {
                -c.clone()
            } else {
                c.clone()
            };
            let sign = c < &Rational::zero();
            if first {
                if sign {
                    write!(f, "-")?;
                }
                first = false;
            } else if sign {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if mono.is_empty() {
                write!(f, "{}", format_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", mono)?;
            } else {
                write!(f, "{}*{}", format_rational(&abs), mono)?;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    ring: &'a PolyRing,
    chars: Vec<char>,
    pos: usize,
    text: &'a str,
}

impl<'a> Parser<'a> {
    fn new(ring: &'a PolyRing, text: &'a str) -> Self {
        Parser {
            ring,
            chars: text.chars().collect(),
            pos: 0,
            text,
        }
    }

    fn parse(mut self) -> Result<Poly, ExactError> {
        let p = self.expr()?;
        self.skip_ws();
        if self.pos != self.chars.len() {
            return Err(self.err("trailing input"));
        }
        Ok(p)
    }

    fn err(&self, msg: &str) -> ExactError {
        ExactError::BadPoly(format!("{} at position {} in `{}`", msg, self.pos, self.text))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly, ExactError> {
        let mut acc = match self.peek() {
            Some('-') => {
                self.pos += 1;
                -&self.term()?
            }
            Some('+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some('-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, ExactError> {
        let mut acc = self.factor()?;
        while let Some('*') = self.peek() {
            self.pos += 1;
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly, ExactError> {
        if let Some('-') = self.peek() {
            self.pos += 1;
            return Ok(-&self.factor()?);
        }
        let base = self.base()?;
        if let Some('^') = self.peek() {
            self.pos += 1;
            let n = self.uint()?;
            return Ok(base.pow(n));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Poly, ExactError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let p = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(p)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.uint()? as i64;
                if self.peek() == Some('/') {
                    self.pos += 1;
                    let den = self.uint()? as i64;
                    if den == 0 {
                        return Err(self.err("zero denominator"));
                    }
                    Ok(self.ring.constant(super::rat(num, den)))
                } else {
                    Ok(self.ring.constant(super::rint(num)))
                }
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let name = self.ident();
                self.ring
                    .var(&name)
                    .map_err(|_| ExactError::UnknownVariable(name))
            }
            _ => Err(self.err("expected a factor")),
        }
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() {
            let c = self.chars[self.pos];
            if c.is_alphanumeric() || c == '_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn uint(&mut self) -> Result<u32, ExactError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.err("number too large"))
    }
}
