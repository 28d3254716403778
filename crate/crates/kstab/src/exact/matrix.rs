//! Exact matrices in two flavors: rational entries (rank, kernel,
//! determinant, inverse by Gaussian elimination over Q) and polynomial
//! entries (determinants by cofactor expansion, parametric solves by
//! Cramer's rule).

use super::{ExactError, Poly, PolyRing, Rational};
use num_traits::{One, Zero};

/// Dense matrix over the rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMat {
    rows: usize,
    cols: usize,
    a: Vec<Rational>,
}

impl RatMat {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self, ExactError> {
        if entries.len() != rows * cols {
            return Err(ExactError::DimensionMismatch(format!(
                "{} entries for a {}x{} matrix",
                entries.len(),
                rows,
                cols
            )));
        }
        Ok(RatMat {
            rows,
            cols,
            a: entries,
        })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        RatMat {
            rows,
            cols,
            a: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Rational::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Rational {
        &self.a[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Rational {
        &mut self.a[i * self.cols + j]
    }

    pub fn is_symmetric(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if self.at(i, j) != self.at(j, i) {
                    return false;
                }
            }
        }
        true
    }

    pub fn mul(&self, other: &RatMat) -> Result<RatMat, ExactError> {
        if self.cols != other.rows {
            return Err(ExactError::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = RatMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.at(i, k).is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = self.at(i, k) * other.at(k, j);
                    *out.at_mut(i, j) += v;
                }
            }
        }
        Ok(out)
    }

    /// Row echelon form; returns (echelon matrix, pivot columns).
    fn echelon(&self) -> (RatMat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.at(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for j in 0..m.cols {
                    let tmp = m.at(row, j).clone();
                    *m.at_mut(row, j) = m.at(p, j).clone();
                    *m.at_mut(p, j) = tmp;
                }
            }
            let inv = Rational::one() / m.at(row, col).clone();
            for j in col..m.cols {
                let v = m.at(row, j) * &inv;
                *m.at_mut(row, j) = v;
            }
            for r in 0..m.rows {
                if r != row && !m.at(r, col).is_zero() {
                    let f = m.at(r, col).clone();
                    for j in col..m.cols {
                        let v = m.at(r, j) - &(&f * m.at(row, j));
                        *m.at_mut(r, j) = v;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.echelon().1.len()
    }

    /// Basis of the right kernel.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let (e, pivots) = self.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::new();
        for &f in &free {
            let mut v = vec![Rational::zero(); self.cols];
            v[f] = Rational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -e.at(r, f).clone();
            }
            basis.push(v);
        }
        basis
    }

    pub fn determinant(&self) -> Result<Rational, ExactError> {
        if self.rows != self.cols {
            return Err(ExactError::DimensionMismatch(format!(
                "determinant of {}x{}",
                self.rows, self.cols
            )));
        }
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Rational::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m.at(r, col).is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != col {
                det = -det;
                for j in 0..n {
                    let tmp = m.at(col, j).clone();
                    *m.at_mut(col, j) = m.at(p, j).clone();
                    *m.at_mut(p, j) = tmp;
                }
            }
            det *= m.at(col, col).clone();
            let inv = Rational::one() / m.at(col, col).clone();
            for r in (col + 1)..n {
                if m.at(r, col).is_zero() {
                    continue;
                }
                let f = m.at(r, col) * &inv;
                for j in col..n {
                    let v = m.at(r, j) - &(&f * m.at(col, j));
                    *m.at_mut(r, j) = v;
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<RatMat, ExactError> {
        if self.rows != self.cols {
            return Err(ExactError::DimensionMismatch(format!(
                "inverse of {}x{}",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut aug = RatMat::zero(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                *aug.at_mut(i, j) = self.at(i, j).clone();
            }
            *aug.at_mut(i, n + i) = Rational::one();
        }
        let (e, pivots) = aug.echelon();
        if pivots.len() < n || pivots.iter().take(n).any(|&c| c >= n) {
            return Err(ExactError::SingularMatrix);
        }
        let mut inv = RatMat::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                *inv.at_mut(i, j) = e.at(i, n + j).clone();
            }
        }
        Ok(inv)
    }

    /// Solves the square system `self * x = rhs`.
    pub fn solve(&self, rhs: &[Rational]) -> Result<Vec<Rational>, ExactError> {
        if self.rows != self.cols || rhs.len() != self.rows {
            return Err(ExactError::DimensionMismatch(format!(
                "solve {}x{} with rhs of length {}",
                self.rows,
                self.cols,
                rhs.len()
            )));
        }
        let inv = self.inverse()?;
        let mut out = vec![Rational::zero(); self.rows];
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[i] += inv.at(i, j) * &rhs[j];
            }
        }
        Ok(out)
    }

    /// Negative definiteness via alternating leading principal minors.
    pub fn is_negative_definite(&self) -> Result<bool, ExactError> {
        if self.rows != self.cols {
            return Err(ExactError::DimensionMismatch(
                "definiteness of a non-square matrix".into(),
            ));
        }
        for k in 1..=self.rows {
            let mut sub = RatMat::zero(k, k);
            for i in 0..k {
                for j in 0..k {
                    *sub.at_mut(i, j) = self.at(i, j).clone();
                }
            }
            let d = sub.determinant()?;
            let ok = if k % 2 == 1 {
                d < Rational::zero()
            } else {
                d > Rational::zero()
            };
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Dense matrix with polynomial entries over one shared ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMat {
    rows: usize,
    cols: usize,
    a: Vec<Poly>,
}

impl PolyMat {
    pub fn new(rows: usize, cols: usize, entries: Vec<Poly>) -> Result<Self, ExactError> {
        if entries.len() != rows * cols {
            return Err(ExactError::DimensionMismatch(format!(
                "{} entries for a {}x{} matrix",
                entries.len(),
                rows,
                cols
            )));
        }
        if let Some(first) = entries.first() {
            for e in &entries {
                if e.ring() != first.ring() {
                    return Err(ExactError::RingMismatch(
                        "matrix entry".into(),
                        "matrix entry".into(),
                    ));
                }
            }
        }
        Ok(PolyMat {
            rows,
            cols,
            a: entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Poly {
        &self.a[i * self.cols + j]
    }

    pub fn ring(&self) -> &PolyRing {
        self.a[0].ring()
    }

    pub fn is_symmetric(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if self.at(i, j) != self.at(j, i) {
                    return false;
                }
            }
        }
        true
    }

    /// Determinant by cofactor expansion; fine for the small matrices here.
    pub fn determinant(&self) -> Result<Poly, ExactError> {
        if self.rows != self.cols {
            return Err(ExactError::DimensionMismatch(format!(
                "determinant of {}x{}",
                self.rows, self.cols
            )));
        }
        Ok(det_rec(&self.a, self.rows))
    }

    /// Specializes every entry at a full rational point.
    pub fn evaluate(
        &self,
        point: &std::collections::BTreeMap<String, Rational>,
    ) -> Result<RatMat, ExactError> {
        let mut entries = Vec::with_capacity(self.a.len());
        for e in &self.a {
            entries.push(e.evaluate(point)?);
        }
        RatMat::new(self.rows, self.cols, entries)
    }

}

fn det_rec(a: &[Poly], n: usize) -> Poly {
    let ring = a[0].ring().clone();
    if n == 1 {
        return a[0].clone();
    }
    let mut acc = ring.zero();
    for j in 0..n {
        let pivot = &a[j];
        if pivot.is_zero() {
            continue;
        }
        let mut sub = Vec::with_capacity((n - 1) * (n - 1));
        for i in 1..n {
            for k in 0..n {
                if k != j {
                    sub.push(a[i * n + k].clone());
                }
            }
        }
        let cof = det_rec(&sub, n - 1);
        let signed = if j % 2 == 0 { cof } else { -&cof };
        acc = &acc + &(pivot * &signed);
    }
    acc
}

/// Solution entry of a parametric linear system: `num / den` with `den`
/// equal to one whenever the entry is itself a polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyFraction {
    pub num: Poly,
    pub den: Poly,
}

impl PolyFraction {
    pub fn is_polynomial(&self) -> bool {
        self.den.as_constant().map(|c| c.is_one()).unwrap_or(false)
    }
}

/// Solves a square system with polynomial entries by Cramer's rule.
///
/// Each entry is reduced to a polynomial when the determinant divides the
/// cofactor combination exactly; otherwise it stays a fraction.
pub fn solve_linear(m: &PolyMat, rhs: &[Poly]) -> Result<Vec<PolyFraction>, ExactError> {
    if m.rows() != m.cols() || rhs.len() != m.rows() {
        return Err(ExactError::DimensionMismatch(format!(
            "solve {}x{} with rhs of length {}",
            m.rows(),
            m.cols(),
            rhs.len()
        )));
    }
    let det = m.determinant()?;
    if det.is_zero() {
        return Err(ExactError::SingularMatrix);
    }
    let n = m.rows();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        // Replace column k by the right-hand side.
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(if j == k {
                    rhs[i].clone()
                } else {
                    m.at(i, j).clone()
                });
            }
        }
        let num = det_rec(&entries, n);
        match num.div_exact(&det) {
            Some(q) => out.push(PolyFraction {
                num: q,
                den: det.ring().one(),
            }),
            None => out.push(PolyFraction {
                num,
                den: det.clone(),
            }),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::{rint, PolyRing};
    use super::*;

    #[test]
    fn rank_kernel_det() {
        let m = RatMat::new(
            3,
            3,
            vec![
                rint(1),
                rint(2),
                rint(3),
                rint(2),
                rint(4),
                rint(6),
                rint(0),
                rint(1),
                rint(1),
            ],
        )
        .unwrap();
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        // Kernel vector satisfies M v = 0.
        for i in 0..3 {
            let mut acc = rint(0);
            for j in 0..3 {
                acc += m.at(i, j) * &k[0][j];
            }
            assert_eq!(acc, rint(0));
        }
        assert_eq!(m.determinant().unwrap(), rint(0));
    }

    #[test]
    fn inverse_of_invertible() {
        let m = RatMat::new(2, 2, vec![rint(-2), rint(1), rint(1), rint(-1)]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), RatMat::identity(2));
        assert_eq!(m.solve(&[rint(0), rint(-1)]).unwrap(), vec![rint(1), rint(2)]);
    }

    #[test]
    fn negative_definite_grams() {
        let g = RatMat::new(2, 2, vec![rint(-1), rint(0), rint(0), rint(-1)]).unwrap();
        assert!(g.is_negative_definite().unwrap());
        let h = RatMat::new(2, 2, vec![rint(-1), rint(2), rint(2), rint(-1)]).unwrap();
        assert!(!h.is_negative_definite().unwrap());
    }

    #[test]
    fn identity_system_with_poly_rhs() {
        let r = PolyRing::new(vec!["u"]);
        let m = PolyMat::new(
            2,
            2,
            vec![r.one(), r.zero(), r.zero(), r.one()],
        )
        .unwrap();
        let rhs = vec![r.parse("u").unwrap(), r.parse("1-u").unwrap()];
        let sol = solve_linear(&m, &rhs).unwrap();
        assert!(sol.iter().all(|s| s.is_polynomial()));
        assert_eq!(sol[0].num, rhs[0]);
        assert_eq!(sol[1].num, rhs[1]);
    }

    #[test]
    fn gram_system_from_negative_part() {
        // diag(-1,-1) with rhs (-(v-1), -(v-1)) solves to (v-1, v-1).
        let r = PolyRing::new(vec!["v"]);
        let m = PolyMat::new(
            2,
            2,
            vec![
                r.constant(rint(-1)),
                r.zero(),
                r.zero(),
                r.constant(rint(-1)),
            ],
        )
        .unwrap();
        let rhs = vec![r.parse("-(v-1)").unwrap(), r.parse("-(v-1)").unwrap()];
        let sol = solve_linear(&m, &rhs).unwrap();
        assert_eq!(sol[0].num, r.parse("v-1").unwrap());
        assert_eq!(sol[1].num, r.parse("v-1").unwrap());
    }

    #[test]
    fn cramer_rational_case() {
        // [[-2,1],[1,-1]] x = (0,-1)  =>  x = (1,2), checked by hand.
        let r = PolyRing::new(vec!["u"]);
        let m = PolyMat::new(
            2,
            2,
            vec![
                r.constant(rint(-2)),
                r.one(),
                r.one(),
                r.constant(rint(-1)),
            ],
        )
        .unwrap();
        let sol = solve_linear(&m, &[r.zero(), r.constant(rint(-1))]).unwrap();
        assert_eq!(sol[0].num.as_constant().unwrap(), rint(1));
        assert_eq!(sol[1].num.as_constant().unwrap(), rint(2));
    }

    #[test]
    fn non_polynomial_solution_kept_as_fraction() {
        let r = PolyRing::new(vec!["u"]);
        let m = PolyMat::new(1, 1, vec![r.parse("u").unwrap()]).unwrap();
        let sol = solve_linear(&m, &[r.one()]).unwrap();
        assert!(!sol[0].is_polynomial());
        assert_eq!(sol[0].num, r.one());
        assert_eq!(sol[0].den, r.parse("u").unwrap());
    }

    #[test]
    fn singular_rejected() {
        let r = PolyRing::new(vec!["u"]);
        let m = PolyMat::new(2, 2, vec![r.one(), r.one(), r.one(), r.one()]).unwrap();
        assert!(matches!(
            solve_linear(&m, &[r.zero(), r.zero()]),
            Err(ExactError::SingularMatrix)
        ));
    }

    #[test]
    fn poly_determinant() {
        let r = PolyRing::new(vec!["a", "b"]);
        let m = PolyMat::new(
            2,
            2,
            vec![
                r.parse("a").unwrap(),
                r.parse("b").unwrap(),
                r.parse("b").unwrap(),
                r.parse("a").unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(m.determinant().unwrap(), r.parse("a^2 - b^2").unwrap());
    }
}
