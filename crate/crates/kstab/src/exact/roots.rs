//! Rational root location for univariate polynomials, and polynomial
//! square roots. Used for breakpoint detection in decomposition schedules;
//! irrational roots are never approximated, only flagged.

use super::{ExactError, Poly, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Result of a rational root search on an interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootReport {
    /// Rational roots inside the interval, sorted, multiplicities discarded.
    pub roots: Vec<Rational>,
    /// True when the deflated polynomial still changes sign somewhere in the
    /// interval, so an irrational root must be present.
    pub residual_sign_change: bool,
}

/// All rational roots of `p` inside `[a, b]`.
///
/// Works on the primitive integer form via the rational-root theorem, then
/// deflates each root and sign-tests the residual factor.
pub fn rational_roots(
    p: &Poly,
    a: &Rational,
    b: &Rational,
) -> Result<RootReport, ExactError> {
    if p.is_zero() {
        return Err(ExactError::ZeroPolynomial);
    }
    if p.is_constant() {
        return Ok(RootReport {
            roots: vec![],
            residual_sign_change: false,
        });
    }
    let var = p
        .sole_variable()?
        .expect("non-constant polynomial has a variable");

    // Integer coefficient list, low to high degree.
    let coeffs = univar_coeffs(p, &var)?;
    let ints = to_primitive_integers(&coeffs)?;

    // Strip the power of the variable dividing p: it contributes the root 0.
    let shift = ints.iter().position(|c| !c.is_zero()).unwrap();
    let core: Vec<BigInt> = ints[shift..].to_vec();

    let mut roots = Vec::new();
    if shift > 0 && a <= &Rational::zero() && b >= &Rational::zero() {
        roots.push(Rational::zero());
    }
    let mut candidates: Vec<Rational> = Vec::new();
    if core.len() > 1 {
        let lead = core.last().unwrap().abs();
        let tail = core.first().unwrap().abs();
        let ps = divisors(&tail)?;
        let qs = divisors(&lead)?;
        for pd in &ps {
            for qd in &qs {
                let r = Rational::new(pd.clone(), qd.clone());
                candidates.push(r.clone());
                candidates.push(-r);
            }
        }
    }
    candidates.sort();
    candidates.dedup();

    let mut residual = core;
    for c in candidates {
        if &c < a || &c > b {
            continue;
        }
        let mut hit = false;
        while eval_int_poly(&residual, &c).is_zero() && residual.len() > 1 {
            residual = deflate(&residual, &c);
            hit = true;
        }
        if hit {
            roots.push(c);
        }
    }
    roots.sort();

    // Sign-change test on the residual factor over [a, b], sampling the
    // endpoints and midpoints between consecutive known roots.
    let mut samples = vec![a.clone(), b.clone()];
    let mut cut_points: Vec<Rational> = roots.clone();
    cut_points.insert(0, a.clone());
    cut_points.push(b.clone());
    for w in cut_points.windows(2) {
        if w[0] < w[1] {
            samples.push((&w[0] + &w[1]) / super::rint(2));
        }
    }
    let mut pos = false;
    let mut neg = false;
    for s in &samples {
        let v = eval_int_poly(&residual, s);
        if v.is_positive() {
            pos = true;
        }
        if v.is_negative() {
            neg = true;
        }
    }

    Ok(RootReport {
        roots,
        residual_sign_change: pos && neg,
    })
}

/// Exact square root of a univariate polynomial, if it is a perfect square.
pub fn poly_sqrt(p: &Poly) -> Option<Poly> {
    if p.is_zero() {
        return Some(p.clone());
    }
    if let Some(c) = p.as_constant() {
        return super::rational_sqrt(&c).map(|s| p.ring().constant(s));
    }
    let var = p.sole_variable().ok()??;
    let deg = p.degree_in(&var).ok()?;
    if deg % 2 != 0 {
        return None;
    }
    let coeffs = univar_coeffs(p, &var).ok()?;
    let lead = super::rational_sqrt(&coeffs[deg as usize])?;
    let half = (deg / 2) as usize;
    // Solve for the square root's coefficients from the top down.
    let mut s = vec![Rational::zero(); half + 1];
    s[half] = lead;
    for k in (0..half).rev() {
        // Coefficient of x^(k + half) in s^2 must match coeffs[k + half].
        let mut acc = Rational::zero();
        for i in (k + 1)..=half {
            let j = k + half - i;
            if j > half || j <= k {
                continue;
            }
            acc += &s[i] * &s[j];
        }
        let target = &coeffs[k + half] - &acc;
        s[k] = &target / &(super::rint(2) * &s[half]);
    }
    let ring = p.ring().clone();
    let x = ring.var(&var).ok()?;
    let mut root = ring.zero();
    for (k, c) in s.iter().enumerate() {
        root = &root + &x.pow(k as u32).scale(c);
    }
    if &(&root * &root) == p {
        Some(root)
    } else {
        None
    }
}

fn univar_coeffs(p: &Poly, var: &str) -> Result<Vec<Rational>, ExactError> {
    let cs = p.coeffs_in(var)?;
    cs.iter()
        .map(|c| {
            c.as_constant()
                .ok_or_else(|| ExactError::NotUnivariate(var.to_string()))
        })
        .collect()
}

fn to_primitive_integers(coeffs: &[Rational]) -> Result<Vec<BigInt>, ExactError> {
    let mut lcm = BigInt::one();
    for c in coeffs {
        lcm = num_integer::lcm(lcm, c.denom().clone());
    }
    let mut ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect();
    let mut g = BigInt::zero();
    for c in &ints {
        g = num_integer::gcd(g, c.clone());
    }
    if !g.is_zero() && !g.is_one() {
        for c in &mut ints {
            *c /= &g;
        }
    }
    Ok(ints)
}

/// Positive divisors by trial division; bails out on values that are too
/// large to enumerate honestly.
fn divisors(n: &BigInt) -> Result<Vec<BigInt>, ExactError> {
    let n: u128 = n
        .abs()
        .try_into()
        .map_err(|_| ExactError::RootSearchOverflow)?;
    if n == 0 {
        return Ok(vec![BigInt::one()]);
    }
    if n > 10u128.pow(18) {
        return Err(ExactError::RootSearchOverflow);
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d: u128 = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(BigInt::from(d));
            if d * d != n {
                large.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    Ok(small)
}

fn eval_int_poly(coeffs: &[BigInt], x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for c in coeffs.iter().rev() {
        acc = acc * x + Rational::from_integer(c.clone());
    }
    acc
}

/// Synthetic division of an integer polynomial by (x - r), r = p/q rational.
/// Caller guarantees r is a root; result is rescaled to primitive integers.
fn deflate(coeffs: &[BigInt], r: &Rational) -> Vec<BigInt> {
    let n = coeffs.len();
    let mut out = vec![Rational::zero(); n - 1];
    let mut carry = Rational::zero();
    for i in (1..n).rev() {
        let c = Rational::from_integer(coeffs[i].clone()) + &carry;
        out[i - 1] = c.clone();
        carry = c * r;
    }
    let rs: Vec<Rational> = out;
    to_primitive_integers(&rs).expect("deflation produces finite rationals")
}
