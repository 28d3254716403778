//! Quadratic forms and polynomial systems: ranks, singular loci, Jacobian
//! smoothness checks in multiprojective charts, and conic-bundle
//! discriminants by symbolic substitution.

use crate::exact::{ExactError, Poly, PolyMat, PolyRing, RatMat, Rational};
use num_traits::Zero;
use std::collections::BTreeMap;

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum GeometryError {
    #[error("polynomial is not quadratic in the form variables: term `{0}`")]
    NotQuadratic(String),
    #[error("missing parameter value for `{0}`")]
    MissingParameter(String),
    #[error("point does not satisfy equation {0} (value {1})")]
    NotOnVariety(usize, String),
    #[error("projective point has an identically zero factor")]
    ZeroFactor(String),
    #[error("point factor count {0} does not match system factor count {1}")]
    FactorCountMismatch(usize, usize),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// A quadratic form `q(x) = x^T M x` with entries polynomial in parameters.
/// A cross term `c x_i x_j` contributes `c/2` to the two symmetric slots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticForm {
    pub form_vars: Vec<String>,
    pub matrix: PolyMat,
}

impl QuadraticForm {
    /// Builds the symmetric matrix of a polynomial that is quadratic in the
    /// given form variables; remaining variables become parameters.
    pub fn from_poly(q: &Poly, form_vars: &[String]) -> Result<Self, GeometryError> {
        let ring = q.ring().clone();
        let param_vars: Vec<String> = ring
            .vars()
            .iter()
            .filter(|v| !form_vars.contains(v))
            .cloned()
            .collect();
        let param_ring = PolyRing::new(param_vars.clone());
        let n = form_vars.len();
        let var_pos: Vec<usize> = form_vars
            .iter()
            .map(|v| {
                ring.index_of(v)
                    .ok_or_else(|| ExactError::UnknownVariable(v.clone()))
            })
            .collect::<Result<_, _>>()?;
        let mut entries = vec![param_ring.zero(); n * n];
        for (mono, coeff) in q.terms() {
            // Split the monomial into its form part and parameter part.
            let mut form_part: Vec<(usize, u32)> = Vec::new();
            let mut param_exps = vec![0u32; param_ring.len()];
            for (i, &e) in mono.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let name = &ring.vars()[i];
                if let Some(k) = var_pos.iter().position(|&p| p == i) {
                    form_part.push((k, e));
                } else {
                    let j = param_ring.index_of(name).expect("parameter indexed");
                    param_exps[j] = e;
                }
            }
            let deg: u32 = form_part.iter().map(|(_, e)| e).sum();
            if deg != 2 {
                return Err(GeometryError::NotQuadratic(format!("{}", q)));
            }
            let mut par = param_ring.one();
            for (j, &e) in param_exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let v = param_ring
                    .var(&param_ring.vars()[j].clone())
                    .expect("param var");
                par = &par * &v.pow(e);
            }
            let par = par.scale(coeff);
            match form_part.as_slice() {
                [(k, 2)] => {
                    entries[k * n + k] = &entries[k * n + k] + &par;
                }
                [(k, 1), (l, 1)] => {
                    let half = par.scale(&crate::exact::rat(1, 2));
                    entries[k * n + l] = &entries[k * n + l] + &half;
                    entries[l * n + k] = &entries[l * n + k] + &half;
                }
                _ => return Err(GeometryError::NotQuadratic(format!("{}", q))),
            }
        }
        Ok(QuadraticForm {
            form_vars: form_vars.to_vec(),
            matrix: PolyMat::new(n, n, entries)?,
        })
    }

    /// Exact rank of the matrix specialized at parameter values.
    pub fn rank_at(&self, params: &BTreeMap<String, Rational>) -> Result<usize, GeometryError> {
        Ok(self.specialize(params)?.rank())
    }

    /// Kernel basis of the specialized matrix; empty when nondegenerate.
    pub fn kernel_at(
        &self,
        params: &BTreeMap<String, Rational>,
    ) -> Result<Vec<Vec<Rational>>, GeometryError> {
        let m = self.specialize(params)?;
        let mut basis = m.kernel();
        for v in &mut basis {
            *v = crate::git::normalize_projective(v);
        }
        Ok(basis)
    }

    /// Determinant of the symmetric matrix, as a parameter polynomial.
    pub fn discriminant(&self) -> Result<Poly, GeometryError> {
        Ok(self.matrix.determinant()?)
    }

    fn specialize(&self, params: &BTreeMap<String, Rational>) -> Result<RatMat, GeometryError> {
        for v in self.matrix.ring().vars() {
            if !params.contains_key(v) {
                return Err(GeometryError::MissingParameter(v.clone()));
            }
        }
        Ok(self.matrix.evaluate(params)?)
    }
}

/// A polynomial system on a product of projective spaces; `factors` groups
/// the variables of each factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolySystem {
    pub equations: Vec<Poly>,
    pub factors: Vec<Vec<String>>,
}

/// A rational point of a multiprojective space, one coordinate vector per
/// factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjPoint {
    pub factors: Vec<Vec<Rational>>,
}

impl ProjPoint {
    pub fn new(factors: Vec<Vec<Rational>>) -> Result<Self, GeometryError> {
        for (i, f) in factors.iter().enumerate() {
            if f.iter().all(|c| c.is_zero()) {
                return Err(GeometryError::ZeroFactor(format!("factor {}", i)));
            }
        }
        Ok(ProjPoint { factors })
    }
}

/// Rank of the Jacobian of the system at the point, computed in the affine
/// chart fixed by one nonzero coordinate per factor. The point must lie on
/// the variety; a complete intersection of codimension `k` is smooth there
/// exactly when the rank equals `k`.
pub fn jacobian_rank_at(sys: &PolySystem, pt: &ProjPoint) -> Result<usize, GeometryError> {
    if pt.factors.len() != sys.factors.len() {
        return Err(GeometryError::FactorCountMismatch(
            pt.factors.len(),
            sys.factors.len(),
        ));
    }
    let mut at = BTreeMap::new();
    let mut fixed: Vec<String> = Vec::new();
    for (names, values) in sys.factors.iter().zip(pt.factors.iter()) {
        let lead = values
            .iter()
            .position(|v| !v.is_zero())
            .expect("ProjPoint has a nonzero coordinate per factor");
        fixed.push(names[lead].clone());
        for (name, value) in names.iter().zip(values.iter()) {
            at.insert(name.clone(), value.clone());
        }
    }
    for (k, eq) in sys.equations.iter().enumerate() {
        let v = eq.evaluate(&at)?;
        if !v.is_zero() {
            return Err(GeometryError::NotOnVariety(
                k,
                crate::exact::format_rational(&v),
            ));
        }
    }
    let free_vars: Vec<String> = sys
        .factors
        .iter()
        .flatten()
        .filter(|v| !fixed.contains(v))
        .cloned()
        .collect();
    let rows = sys.equations.len();
    let cols = free_vars.len();
    let mut entries = Vec::with_capacity(rows * cols);
    for eq in &sys.equations {
        for v in &free_vars {
            entries.push(eq.derivative(v)?.evaluate(&at)?);
        }
    }
    Ok(RatMat::new(rows, cols, entries)?.rank())
}

/// Substitutes base-dependent fiber coordinates into a quadric and returns
/// the quadratic form of the fiber conic over the base.
///
/// `substitution` sends each quadric variable to a polynomial of the shape
/// `(base coefficient) * (fiber variable)` in the combined ring.
pub fn conic_fiber_form(
    quadric: &Poly,
    substitution: &BTreeMap<String, Poly>,
    fiber_vars: &[String],
) -> Result<QuadraticForm, GeometryError> {
    let substituted = quadric.substitute(substitution)?;
    QuadraticForm::from_poly(&substituted, fiber_vars)
}

/// True when `p = c q` for some nonzero rational `c`: cross-multiply by the
/// leading coefficients and compare structurally.
pub fn proportional(p: &Poly, q: &Poly) -> bool {
    match (p.leading(), q.leading()) {
        (None, None) => true,
        (None, Some(_)) | (Some(_), None) => false,
        (Some((_, cp)), Some((_, cq))) => &p.scale(cq) == &q.scale(cp),
    }
}
