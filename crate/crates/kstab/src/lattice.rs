//! Divisor-class lattices with intersection forms.
//!
//! A threefold lattice carries a trilinear form given by a sparse table of
//! triple products; a surface lattice carries a symmetric Gram matrix of
//! pairwise products. Divisor paths have coefficients polynomial in one or
//! two parameters, so cubes and squares of paths come out as polynomials.

use crate::exact::{ExactError, Poly, PolyRing, RatMat, Rational};
use num_traits::Zero;
use std::collections::BTreeMap;

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("divisor path belongs to lattice `{0}`, expected `{1}`")]
    MismatchedLattice(String, String),
    #[error("path has {0} coefficients, lattice `{1}` has {2} classes")]
    WrongLength(usize, String, usize),
    #[error("unknown class `{0}` in lattice `{1}`")]
    UnknownClass(String, String),
    #[error("restriction matrix is {0}x{1}, expected {2}x{3}")]
    BadRestriction(usize, usize, usize, usize),
    #[error("gram matrix must be symmetric and square")]
    BadGram,
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Finite basis of divisor classes with a trilinear intersection form.
/// Triples absent from the table are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreefoldLattice {
    name: String,
    basis: Vec<String>,
    triples: BTreeMap<[usize; 3], Rational>,
}

impl ThreefoldLattice {
    pub fn new(
        name: &str,
        basis: Vec<String>,
        entries: Vec<(String, String, String, Rational)>,
    ) -> Result<Self, LatticeError> {
        let mut lat = ThreefoldLattice {
            name: name.to_string(),
            basis,
            triples: BTreeMap::new(),
        };
        for (a, b, c, v) in entries {
            let i = lat.class_index(&a)?;
            let j = lat.class_index(&b)?;
            let k = lat.class_index(&c)?;
            let mut key = [i, j, k];
            key.sort_unstable();
            if !v.is_zero() {
                lat.triples.insert(key, v);
            }
        }
        Ok(lat)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn class_index(&self, class: &str) -> Result<usize, LatticeError> {
        self.basis
            .iter()
            .position(|b| b == class)
            .ok_or_else(|| LatticeError::UnknownClass(class.to_string(), self.name.clone()))
    }

    pub fn triple(&self, i: usize, j: usize, k: usize) -> Rational {
        let mut key = [i, j, k];
        key.sort_unstable();
        self.triples.get(&key).cloned().unwrap_or_else(Rational::zero)
    }

    /// Trilinear evaluation of three divisor paths.
    pub fn triple_eval(
        &self,
        d1: &DivisorPath,
        d2: &DivisorPath,
        d3: &DivisorPath,
    ) -> Result<Poly, LatticeError> {
        for d in [d1, d2, d3] {
            self.check_path(d)?;
        }
        let ring = d1.coeffs[0].ring().clone();
        let mut acc = ring.zero();
        for (&[i, j, k], v) in &self.triples {
            // Number of distinct orderings of a sorted triple.
            let perms: &[[usize; 3]] = &[
                [i, j, k],
                [i, k, j],
                [j, i, k],
                [j, k, i],
                [k, i, j],
                [k, j, i],
            ];
            let mut seen: Vec<[usize; 3]> = Vec::new();
            for p in perms {
                if !seen.contains(p) {
                    seen.push(*p);
                }
            }
            for [a, b, c] in seen {
                let term = &(&d1.coeffs[a] * &d2.coeffs[b]) * &d3.coeffs[c];
                acc = &acc + &term.scale(v);
            }
        }
        Ok(acc)
    }

    /// The cube `(D)^3` of one path.
    pub fn cube(&self, d: &DivisorPath) -> Result<Poly, LatticeError> {
        self.triple_eval(d, d, d)
    }

    /// Cube of a constant divisor, as a rational.
    pub fn cube_const(&self, coeffs: &[Rational]) -> Result<Rational, LatticeError> {
        let ring = PolyRing::new(vec!["u"]);
        let path = DivisorPath::constant(self, &ring, coeffs)?;
        let c = self.cube(&path)?;
        Ok(c.as_constant().expect("cube of constant divisor is constant"))
    }

    pub fn path(&self, coeffs: Vec<Poly>) -> Result<DivisorPath, LatticeError> {
        if coeffs.len() != self.rank() {
            return Err(LatticeError::WrongLength(
                coeffs.len(),
                self.name.clone(),
                self.rank(),
            ));
        }
        Ok(DivisorPath {
            lattice: self.name.clone(),
            coeffs,
        })
    }

    fn check_path(&self, d: &DivisorPath) -> Result<(), LatticeError> {
        if d.lattice != self.name {
            return Err(LatticeError::MismatchedLattice(
                d.lattice.clone(),
                self.name.clone(),
            ));
        }
        if d.coeffs.len() != self.rank() {
            return Err(LatticeError::WrongLength(
                d.coeffs.len(),
                self.name.clone(),
                self.rank(),
            ));
        }
        Ok(())
    }
}

/// Finite basis of curve classes on a surface with its Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceLattice {
    name: String,
    basis: Vec<String>,
    gram: RatMat,
}

impl SurfaceLattice {
    pub fn new(name: &str, basis: Vec<String>, gram: RatMat) -> Result<Self, LatticeError> {
        if gram.rows() != basis.len() || !gram.is_symmetric() {
            return Err(LatticeError::BadGram);
        }
        Ok(SurfaceLattice {
            name: name.to_string(),
            basis,
            gram,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn gram(&self) -> &RatMat {
        &self.gram
    }

    pub fn class_index(&self, class: &str) -> Result<usize, LatticeError> {
        self.basis
            .iter()
            .position(|b| b == class)
            .ok_or_else(|| LatticeError::UnknownClass(class.to_string(), self.name.clone()))
    }

    pub fn path(&self, coeffs: Vec<Poly>) -> Result<DivisorPath, LatticeError> {
        if coeffs.len() != self.rank() {
            return Err(LatticeError::WrongLength(
                coeffs.len(),
                self.name.clone(),
                self.rank(),
            ));
        }
        Ok(DivisorPath {
            lattice: self.name.clone(),
            coeffs,
        })
    }

    fn check_path(&self, d: &DivisorPath) -> Result<(), LatticeError> {
        if d.lattice != self.name {
            return Err(LatticeError::MismatchedLattice(
                d.lattice.clone(),
                self.name.clone(),
            ));
        }
        if d.coeffs.len() != self.rank() {
            return Err(LatticeError::WrongLength(
                d.coeffs.len(),
                self.name.clone(),
                self.rank(),
            ));
        }
        Ok(())
    }

    /// Bilinear evaluation of two paths through the Gram matrix.
    pub fn pair_eval(&self, c1: &DivisorPath, c2: &DivisorPath) -> Result<Poly, LatticeError> {
        self.check_path(c1)?;
        self.check_path(c2)?;
        let ring = c1.coeffs[0].ring().clone();
        let mut acc = ring.zero();
        for i in 0..self.rank() {
            for j in 0..self.rank() {
                let g = self.gram.at(i, j);
                if g.is_zero() {
                    continue;
                }
                acc = &acc + &(&c1.coeffs[i] * &c2.coeffs[j]).scale(g);
            }
        }
        Ok(acc)
    }

    /// `(D)^2` of one path.
    pub fn square(&self, d: &DivisorPath) -> Result<Poly, LatticeError> {
        self.pair_eval(d, d)
    }

    /// Pairing of a path against a fixed rational class.
    pub fn pair_class(&self, d: &DivisorPath, class: &[Rational]) -> Result<Poly, LatticeError> {
        self.check_path(d)?;
        let ring = d.coeffs[0].ring().clone();
        let mut acc = ring.zero();
        for i in 0..self.rank() {
            for j in 0..self.rank() {
                let g = self.gram.at(i, j);
                if g.is_zero() || class[j].is_zero() {
                    continue;
                }
                acc = &acc + &d.coeffs[i].scale(&(g * &class[j]));
            }
        }
        Ok(acc)
    }

    /// Pairing of two constant rational classes.
    pub fn pair_consts(&self, a: &[Rational], b: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for i in 0..self.rank() {
            for j in 0..self.rank() {
                acc += self.gram.at(i, j) * &a[i] * &b[j];
            }
        }
        acc
    }
}

/// A divisor written in a lattice basis with polynomial coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorPath {
    lattice: String,
    coeffs: Vec<Poly>,
}

impl DivisorPath {
    pub fn lattice(&self) -> &str {
        &self.lattice
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    /// Constant path from rational coefficients.
    pub fn constant<L: LatticeLike>(
        lat: &L,
        ring: &PolyRing,
        coeffs: &[Rational],
    ) -> Result<DivisorPath, LatticeError> {
        lat.make_path(coeffs.iter().map(|c| ring.constant(c.clone())).collect())
    }

    pub fn add(&self, other: &DivisorPath) -> DivisorPath {
        assert_eq!(self.lattice, other.lattice, "lattice mismatch in path sum");
        DivisorPath {
            lattice: self.lattice.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(other.coeffs.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &DivisorPath) -> DivisorPath {
        assert_eq!(self.lattice, other.lattice, "lattice mismatch in path sum");
        DivisorPath {
            lattice: self.lattice.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(other.coeffs.iter())
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Scales by a polynomial factor.
    pub fn scale_poly(&self, f: &Poly) -> DivisorPath {
        DivisorPath {
            lattice: self.lattice.clone(),
            coeffs: self.coeffs.iter().map(|c| c * f).collect(),
        }
    }

    /// Substitutes a value for one parameter in every coefficient.
    pub fn subst_var(&self, var: &str, value: &Poly) -> Result<DivisorPath, ExactError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.subst_var(var, value))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(DivisorPath {
            lattice: self.lattice.clone(),
            coeffs,
        })
    }

    /// Evaluates every coefficient at a full rational point.
    pub fn evaluate(
        &self,
        point: &BTreeMap<String, Rational>,
    ) -> Result<Vec<Rational>, ExactError> {
        self.coeffs.iter().map(|c| c.evaluate(point)).collect()
    }

    /// Maps all coefficients into a larger parameter ring.
    pub fn embed(&self, ring: &PolyRing) -> Result<DivisorPath, ExactError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.embed(ring))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(DivisorPath {
            lattice: self.lattice.clone(),
            coeffs,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub(crate) fn set_coeffs(&mut self, coeffs: Vec<Poly>) {
        assert_eq!(coeffs.len(), self.coeffs.len());
        self.coeffs = coeffs;
    }
}

/// Anything with a named basis that can host a divisor path.
pub trait LatticeLike {
    fn basis_len(&self) -> usize;
    fn lattice_name(&self) -> &str;
    fn make_path(&self, coeffs: Vec<Poly>) -> Result<DivisorPath, LatticeError>;
}

impl LatticeLike for ThreefoldLattice {
    fn basis_len(&self) -> usize {
        self.rank()
    }
    fn lattice_name(&self) -> &str {
        &self.name
    }
    fn make_path(&self, coeffs: Vec<Poly>) -> Result<DivisorPath, LatticeError> {
        self.path(coeffs)
    }
}

impl LatticeLike for SurfaceLattice {
    fn basis_len(&self) -> usize {
        self.rank()
    }
    fn lattice_name(&self) -> &str {
        &self.name
    }
    fn make_path(&self, coeffs: Vec<Poly>) -> Result<DivisorPath, LatticeError> {
        self.path(coeffs)
    }
}

/// A curve on the ambient variety, modeled as the linear functional
/// `D -> C . D` on divisor classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveFunctional {
    pub name: String,
    pub pairing: Vec<Rational>,
}

impl CurveFunctional {
    pub fn new(name: &str, pairing: Vec<Rational>) -> Self {
        CurveFunctional {
            name: name.to_string(),
            pairing,
        }
    }

    /// Linear pairing against a divisor path.
    pub fn pair(&self, d: &DivisorPath) -> Result<Poly, LatticeError> {
        if self.pairing.len() != d.coeffs.len() {
            return Err(LatticeError::WrongLength(
                self.pairing.len(),
                d.lattice.clone(),
                d.coeffs.len(),
            ));
        }
        let ring = d.coeffs[0].ring().clone();
        let mut acc = ring.zero();
        for (c, p) in d.coeffs.iter().zip(self.pairing.iter()) {
            acc = &acc + &c.scale(p);
        }
        Ok(acc)
    }
}

/// Linear map from a threefold basis to surface classes, given as one row
/// of surface coefficients per threefold class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictionMap {
    pub rows: Vec<Vec<Rational>>,
}

impl RestrictionMap {
    pub fn new(rows: Vec<Vec<Rational>>) -> Self {
        RestrictionMap { rows }
    }

    /// Restricts a threefold path to the surface.
    pub fn restrict(
        &self,
        d: &DivisorPath,
        target: &SurfaceLattice,
    ) -> Result<DivisorPath, LatticeError> {
        if self.rows.len() != d.coeffs.len()
            || self.rows.iter().any(|r| r.len() != target.rank())
        {
            return Err(LatticeError::BadRestriction(
                self.rows.len(),
                self.rows.first().map(|r| r.len()).unwrap_or(0),
                d.coeffs.len(),
                target.rank(),
            ));
        }
        let ring = d.coeffs[0].ring().clone();
        let mut out = vec![ring.zero(); target.rank()];
        for (i, c) in d.coeffs.iter().enumerate() {
            for (j, m) in self.rows[i].iter().enumerate() {
                if m.is_zero() {
                    continue;
                }
                out[j] = &out[j] + &c.scale(m);
            }
        }
        target.path(out)
    }
}
