//! Piecewise polynomial functions of one variable with rational breakpoints.

use super::{format_rational, ExactError, Poly, Rational};
use num_traits::Zero;

/// A function given by polynomials on consecutive closed intervals
/// `[b_0, b_1], ..., [b_{k-1}, b_k]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewisePoly {
    var: String,
    breakpoints: Vec<Rational>,
    pieces: Vec<Poly>,
}

impl PiecewisePoly {
    /// Builds a piecewise function. When `continuous` is set, adjacent
    /// pieces must agree at every shared breakpoint.
    pub fn new(
        var: &str,
        breakpoints: Vec<Rational>,
        pieces: Vec<Poly>,
        continuous: bool,
    ) -> Result<Self, ExactError> {
        if breakpoints.len() < 2 || pieces.len() + 1 != breakpoints.len() {
            return Err(ExactError::PieceCountMismatch(
                pieces.len(),
                breakpoints.len(),
            ));
        }
        for w in breakpoints.windows(2) {
            if w[0] >= w[1] {
                return Err(ExactError::BreakpointsNotIncreasing);
            }
        }
        for p in &pieces {
            match p.sole_variable()? {
                Some(v) if v != var => return Err(ExactError::UnknownVariable(v)),
                _ => {}
            }
        }
        if continuous {
            for i in 1..pieces.len() {
                let b = &breakpoints[i];
                if pieces[i - 1].eval_univar(b)? != pieces[i].eval_univar(b)? {
                    return Err(ExactError::DiscontinuousAtBreakpoint(format_rational(b)));
                }
            }
        }
        Ok(PiecewisePoly {
            var: var.to_string(),
            breakpoints,
            pieces,
        })
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Poly] {
        &self.pieces
    }

    pub fn domain(&self) -> (&Rational, &Rational) {
        (
            self.breakpoints.first().unwrap(),
            self.breakpoints.last().unwrap(),
        )
    }

    /// Value at a point; at interior breakpoints the left piece is used
    /// (needs the continuity flag for that choice not to matter).
    pub fn eval(&self, x: &Rational) -> Result<Rational, ExactError> {
        let (lo, hi) = self.domain();
        if x < lo || x > hi {
            return Err(ExactError::OutsideDomain(
                format_rational(x),
                format_rational(x),
                format_rational(lo),
                format_rational(hi),
            ));
        }
        for (i, p) in self.pieces.iter().enumerate() {
            if x <= &self.breakpoints[i + 1] {
                return p.eval_univar(x);
            }
        }
        unreachable!()
    }

    /// Exact integral over `[a, b]`, summed across pieces.
    pub fn integrate(&self, a: &Rational, b: &Rational) -> Result<Rational, ExactError> {
        let (lo, hi) = self.domain();
        if a < lo || b > hi || a > b {
            return Err(ExactError::OutsideDomain(
                format_rational(a),
                format_rational(b),
                format_rational(lo),
                format_rational(hi),
            ));
        }
        let mut acc = Rational::zero();
        for (i, p) in self.pieces.iter().enumerate() {
            let left = std::cmp::max(a, &self.breakpoints[i]);
            let right = std::cmp::min(b, &self.breakpoints[i + 1]);
            if left < right {
                acc += p.integrate(left, right)?;
            }
        }
        Ok(acc)
    }

    /// Integral over the whole domain.
    pub fn integrate_all(&self) -> Result<Rational, ExactError> {
        let (a, b) = (self.domain().0.clone(), self.domain().1.clone());
        self.integrate(&a, &b)
    }

    /// Merges adjacent pieces that carry the same polynomial.
    pub fn simplify(mut self) -> Self {
        let mut i = 0;
        while i + 1 < self.pieces.len() {
            if self.pieces[i] == self.pieces[i + 1] {
                self.pieces.remove(i + 1);
                self.breakpoints.remove(i + 1);
            } else {
                i += 1;
            }
        }
        self
    }
}

impl std::fmt::Display for PiecewisePoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .pieces
            .iter()
            .enumerate()
            .map(|(i, p)| {
                format!(
                    "{} on [{}, {}]",
                    p,
                    format_rational(&self.breakpoints[i]),
                    format_rational(&self.breakpoints[i + 1])
                )
            })
            .collect();
        write!(f, "{{{}}}", parts.join("; "))
    }
}

#[cfg(test)]
mod tests {
    use super::super::{rat, rint, PolyRing};
    use super::*;

    #[test]
    fn integral_matches_hand_values() {
        let r = PolyRing::new(vec!["u"]);
        let f = PiecewisePoly::new(
            "u",
            vec![rint(0), rint(1)],
            vec![r.parse("26 - 2*u^3").unwrap()],
            true,
        )
        .unwrap();
        assert_eq!(f.integrate(&rint(0), &rint(1)).unwrap(), rat(51, 2));
        // Degenerate interval.
        assert_eq!(f.integrate(&rat(1, 2), &rat(1, 2)).unwrap(), rint(0));
    }

    #[test]
    fn corollary_integral() {
        let r = PolyRing::new(vec!["u"]);
        let f = PiecewisePoly::new(
            "u",
            vec![rint(0), rat(1, 2)],
            vec![r.parse("2*(2*u-1)*(2*u^2-2*u-13)").unwrap()],
            true,
        )
        .unwrap();
        let total = f.integrate(&rint(0), &rat(1, 2)).unwrap();
        assert_eq!(total, rat(689, 104));
        assert_eq!(total / rint(26), rat(53, 208));
    }

    #[test]
    fn additivity_over_subdivision() {
        let r = PolyRing::new(vec!["u"]);
        let f = PiecewisePoly::new(
            "u",
            vec![rint(0), rint(1), rint(2)],
            vec![r.parse("26 - 18*u").unwrap(), r.parse("8 - 18*(u-1)").unwrap()],
            true,
        )
        .unwrap();
        let whole = f.integrate(&rint(0), &rint(2)).unwrap();
        let split = f.integrate(&rint(0), &rat(3, 2)).unwrap()
            + f.integrate(&rat(3, 2), &rint(2)).unwrap();
        assert_eq!(whole, split);
    }

    #[test]
    fn continuity_is_enforced() {
        let r = PolyRing::new(vec!["u"]);
        let bad = PiecewisePoly::new(
            "u",
            vec![rint(0), rint(1), rint(2)],
            vec![r.parse("u").unwrap(), r.parse("u + 1").unwrap()],
            true,
        );
        assert!(matches!(
            bad,
            Err(ExactError::DiscontinuousAtBreakpoint(_))
        ));
    }

    #[test]
    fn outside_domain_rejected() {
        let r = PolyRing::new(vec!["u"]);
        let f = PiecewisePoly::new(
            "u",
            vec![rint(0), rint(1)],
            vec![r.parse("u").unwrap()],
            true,
        )
        .unwrap();
        assert!(f.integrate(&rint(0), &rint(2)).is_err());
    }
}
