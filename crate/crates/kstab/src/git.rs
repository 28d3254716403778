//! Hilbert-Mumford stability for diagonal torus actions, decided exactly.
//!
//! A point with support `s` is classified through the convex hull of the
//! weight vectors of its nonzero coordinates:
//!
//! * unstable when 0 is outside the hull,
//! * stable when 0 is interior and the weights span the whole space,
//! * polystable (closed orbit) but not stable when 0 lies in the relative
//!   interior,
//! * strictly semistable otherwise (0 on the hull boundary in the wrong
//!   way: the orbit is not closed or degenerates).
//!
//! Hull membership is computed with integer cross products in rank <= 2,
//! so every verdict is exact.

use crate::exact::{PolyRing, Rational};
use crate::exact::{Poly, RatMat};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum GitError {
    #[error("weight list length {0} does not match coordinate count {1}")]
    WeightCountMismatch(usize, usize),
    #[error("support is empty")]
    EmptySupport,
    #[error("support index {0} out of range for {1} coordinates")]
    SupportOutOfRange(usize, usize),
    #[error("classification implemented for rank 1 and 2 only, got {0}")]
    UnsupportedRank(usize),
    #[error("too many coordinates for enumeration: {0} > 20")]
    TooManyCoordinates(usize),
    #[error("all quotient map components vanish at the point")]
    AllComponentsVanish,
    #[error("basis change is not invertible")]
    BasisChangeSingular,
    #[error(transparent)]
    Exact(#[from] crate::exact::ExactError),
}

/// A diagonal torus action: one integer weight vector per coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusAction {
    pub rank: usize,
    pub coords: Vec<String>,
    pub weights: Vec<Vec<i64>>,
}

impl TorusAction {
    pub fn new(rank: usize, coords: Vec<String>, weights: Vec<Vec<i64>>) -> Result<Self, GitError> {
        if weights.len() != coords.len() || weights.iter().any(|w| w.len() != rank) {
            return Err(GitError::WeightCountMismatch(weights.len(), coords.len()));
        }
        Ok(TorusAction {
            rank,
            coords,
            weights,
        })
    }

    pub fn coord_index(&self, name: &str) -> Option<usize> {
        self.coords.iter().position(|c| c == name)
    }
}

/// The nonzero coordinates of a point, as sorted indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Support(Vec<usize>);

impl Support {
    pub fn new(mut indices: Vec<usize>, n: usize) -> Result<Self, GitError> {
        if indices.is_empty() {
            return Err(GitError::EmptySupport);
        }
        indices.sort_unstable();
        indices.dedup();
        if let Some(&bad) = indices.iter().find(|&&i| i >= n) {
            return Err(GitError::SupportOutOfRange(bad, n));
        }
        Ok(Support(indices))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn names(&self, action: &TorusAction) -> Vec<String> {
        self.0.iter().map(|&i| action.coords[i].clone()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum StabilityClass {
    Unstable,
    Stable,
    PolystableNotStable,
    SemistableNotPolystable,
}

impl std::fmt::Display for StabilityClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            StabilityClass::Unstable => "Unstable",
            StabilityClass::Stable => "Stable",
            StabilityClass::PolystableNotStable => "PolystableNotStable",
            StabilityClass::SemistableNotPolystable => "SemistableNotPolystable",
        };
        write!(f, "{}", s)
    }
}

impl std::str::FromStr for StabilityClass {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "Unstable" => Ok(StabilityClass::Unstable),
            "Stable" => Ok(StabilityClass::Stable),
            "PolystableNotStable" => Ok(StabilityClass::PolystableNotStable),
            "SemistableNotPolystable" => Ok(StabilityClass::SemistableNotPolystable),
            other => Err(format!("unknown stability class `{}`", other)),
        }
    }
}

/// Where the origin sits relative to the convex hull of a weight set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum HullPosition {
    Outside,
    Interior,
    RelativeInterior,
    Boundary,
}

fn hull_position(points: &[Vec<i64>], rank: usize) -> Result<HullPosition, GitError> {
    match rank {
        1 => hull_position_1d(points),
        2 => Ok(hull_position_2d(points)),
        r => Err(GitError::UnsupportedRank(r)),
    }
}

fn hull_position_1d(points: &[Vec<i64>]) -> Result<HullPosition, GitError> {
    let min = points.iter().map(|p| p[0]).min().unwrap();
    let max = points.iter().map(|p| p[0]).max().unwrap();
    Ok(if min > 0 || max < 0 {
        HullPosition::Outside
    } else if min < 0 && max > 0 {
        HullPosition::Interior
    } else if min == 0 && max == 0 {
        // Hull is the origin itself.
        HullPosition::RelativeInterior
    } else {
        // Origin is an endpoint of the segment.
        HullPosition::Boundary
    })
}

fn cross(o: &[i64; 2], a: &[i64; 2], b: &[i64; 2]) -> i64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn hull_position_2d(points: &[Vec<i64>]) -> HullPosition {
    let mut pts: Vec<[i64; 2]> = points.iter().map(|p| [p[0], p[1]]).collect();
    pts.sort();
    pts.dedup();
    if pts.len() == 1 {
        return if pts[0] == [0, 0] {
            HullPosition::RelativeInterior
        } else {
            HullPosition::Outside
        };
    }
    // Collinear case: hull is a segment.
    let collinear = pts
        .iter()
        .all(|p| cross(&pts[0], pts.last().unwrap(), p) == 0);
    if collinear {
        // Project onto the segment direction and reuse the 1-d logic.
        let d = [
            pts.last().unwrap()[0] - pts[0][0],
            pts.last().unwrap()[1] - pts[0][1],
        ];
        if cross(&[0, 0], &pts[0], &d) != 0 && cross(&pts[0], pts.last().unwrap(), &[0, 0]) != 0 {
            return HullPosition::Outside;
        }
        // Origin on the supporting line iff it is a combination; check it
        // lies on the line through the points first.
        if cross(&pts[0], pts.last().unwrap(), &[0, 0]) != 0 {
            return HullPosition::Outside;
        }
        let proj: Vec<Vec<i64>> = pts.iter().map(|p| vec![p[0] * d[0] + p[1] * d[1]]).collect();
        return hull_position_1d(&proj).expect("1-d projection");
    }
    // Full-dimensional hull: monotone chain.
    let hull = convex_hull_2d(&pts);
    let m = hull.len();
    let mut on_edge = false;
    for i in 0..m {
        let a = &hull[i];
        let b = &hull[(i + 1) % m];
        let c = cross(a, b, &[0, 0]);
        if c < 0 {
            return HullPosition::Outside;
        }
        if c == 0 {
            // On the supporting line of this edge; inside iff between.
            let within = (b[0] - a[0]) * (0 - a[0]) + (b[1] - a[1]) * (0 - a[1]) >= 0
                && (a[0] - b[0]) * (0 - b[0]) + (a[1] - b[1]) * (0 - b[1]) >= 0;
            if within {
                on_edge = true;
            } else {
                return HullPosition::Outside;
            }
        }
    }
    if on_edge {
        HullPosition::Boundary
    } else {
        HullPosition::Interior
    }
}

/// Counterclockwise convex hull of distinct sorted points.
fn convex_hull_2d(pts: &[[i64; 2]]) -> Vec<[i64; 2]> {
    let n = pts.len();
    if n < 3 {
        return pts.to_vec();
    }
    let mut lower: Vec<[i64; 2]> = Vec::new();
    for p in pts {
        while lower.len() >= 2
            && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0
        {
            lower.pop();
        }
        lower.push(*p);
    }
    let mut upper: Vec<[i64; 2]> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0
        {
            upper.pop();
        }
        upper.push(*p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn weights_span_full(points: &[Vec<i64>], rank: usize) -> bool {
    match rank {
        1 => points.iter().any(|p| p[0] != 0),
        2 => {
            for i in 0..points.len() {
                for j in (i + 1)..points.len() {
                    if points[i][0] * points[j][1] - points[i][1] * points[j][0] != 0 {
                        return true;
                    }
                }
            }
            false
        }
        _ => false,
    }
}

/// Hilbert-Mumford classification of one support.
pub fn classify(action: &TorusAction, s: &Support) -> Result<StabilityClass, GitError> {
    if let Some(&bad) = s.indices().iter().find(|&&i| i >= action.coords.len()) {
        return Err(GitError::SupportOutOfRange(bad, action.coords.len()));
    }
    let points: Vec<Vec<i64>> = s
        .indices()
        .iter()
        .map(|&i| action.weights[i].clone())
        .collect();
    let pos = hull_position(&points, action.rank)?;
    Ok(match pos {
        HullPosition::Outside => StabilityClass::Unstable,
        HullPosition::Interior => {
            if weights_span_full(&points, action.rank) {
                StabilityClass::Stable
            } else {
                StabilityClass::PolystableNotStable
            }
        }
        HullPosition::RelativeInterior => StabilityClass::PolystableNotStable,
        HullPosition::Boundary => StabilityClass::SemistableNotPolystable,
    })
}

/// Classification of every nonempty support, sorted by support size and
/// then lexicographically; plus aggregate counts per class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationTable {
    pub rows: Vec<(Support, StabilityClass)>,
    pub counts: BTreeMap<StabilityClass, usize>,
}

pub fn enumerate_classification(action: &TorusAction) -> Result<ClassificationTable, GitError> {
    let n = action.coords.len();
    if n > 20 {
        return Err(GitError::TooManyCoordinates(n));
    }
    let mut rows = Vec::with_capacity((1usize << n) - 1);
    for mask in 1u32..(1 << n) {
        let indices: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        let s = Support::new(indices, n)?;
        let class = classify(action, &s)?;
        rows.push((s, class));
    }
    rows.sort_by(|a, b| {
        (a.0.indices().len(), a.0.indices()).cmp(&(b.0.indices().len(), b.0.indices()))
    });
    let mut counts = BTreeMap::new();
    for (_, c) in &rows {
        *counts.entry(*c).or_insert(0) += 1;
    }
    Ok(ClassificationTable { rows, counts })
}

/// All exponent vectors `e != 0` with `sum e_i w_i = 0` and total degree at
/// most `max_degree`, in lexicographic order.
pub fn invariant_monomials(action: &TorusAction, max_degree: u32) -> Vec<Vec<u32>> {
    let n = action.coords.len();
    let mut out = Vec::new();
    let mut current = vec![0u32; n];
    fn rec(
        action: &TorusAction,
        pos: usize,
        remaining: u32,
        current: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if pos == action.coords.len() {
            let mut weight = vec![0i64; action.rank];
            for (i, &e) in current.iter().enumerate() {
                for (k, w) in weight.iter_mut().enumerate() {
                    *w += action.weights[i][k] * e as i64;
                }
            }
            if weight.iter().all(|&w| w == 0) && current.iter().any(|&e| e > 0) {
                out.push(current.clone());
            }
            return;
        }
        for e in 0..=remaining {
            current[pos] = e;
            rec(action, pos + 1, remaining - e, current, out);
        }
        current[pos] = 0;
    }
    rec(action, 0, max_degree, &mut current, &mut out);
    // Degree first, then earlier coordinates first.
    out.sort_by(|a, b| {
        let da: u32 = a.iter().sum();
        let db: u32 = b.iter().sum();
        da.cmp(&db).then_with(|| b.cmp(a))
    });
    out
}

/// Renders an exponent vector as a monomial in the action's coordinates.
pub fn monomial_name(action: &TorusAction, exps: &[u32]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in exps.iter().enumerate() {
        if e == 1 {
            parts.push(action.coords[i].clone());
        } else if e > 1 {
            parts.push(format!("{}^{}", action.coords[i], e));
        }
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Evaluates a polynomial quotient map at a projective rational point and
/// normalizes the image to primitive integer coordinates with positive
/// leading sign.
pub fn quotient_coords(
    map: &[Poly],
    coords: &[String],
    point: &[Rational],
) -> Result<Vec<Rational>, GitError> {
    let mut at = BTreeMap::new();
    for (name, value) in coords.iter().zip(point.iter()) {
        at.insert(name.clone(), value.clone());
    }
    let mut image = Vec::with_capacity(map.len());
    for p in map {
        image.push(p.evaluate(&at)?);
    }
    if image.iter().all(|v| v.is_zero()) {
        return Err(GitError::AllComponentsVanish);
    }
    Ok(normalize_projective(&image))
}

/// Scales projective coordinates to coprime integers, first nonzero entry
/// positive.
pub fn normalize_projective(coords: &[Rational]) -> Vec<Rational> {
    use num_bigint::BigInt;
    let mut lcm = BigInt::one();
    for c in coords {
        lcm = num_integer::lcm(lcm, c.denom().clone());
    }
    let mut ints: Vec<BigInt> = coords.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    let mut g = BigInt::zero();
    for c in &ints {
        g = num_integer::gcd(g, c.clone());
    }
    if !g.is_zero() && !g.is_one() {
        for c in &mut ints {
            *c /= &g;
        }
    }
    if let Some(first) = ints.iter().find(|c| !c.is_zero()) {
        if first.is_negative() {
            for c in &mut ints {
                *c = -c.clone();
            }
        }
    }
    ints.into_iter().map(Rational::from_integer).collect()
}

/// One claimed diagonal entry of a conjugated action: a monomial in the
/// torus parameters, allowing negative powers and a rational coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClaimedEntry {
    pub coefficient: Rational,
    pub lambda_power: i32,
    pub mu_power: i32,
}

impl ClaimedEntry {
    fn eval(&self, l: &Rational, m: &Rational) -> Rational {
        let mut v = self.coefficient.clone();
        v *= int_pow(l, self.lambda_power);
        v *= int_pow(m, self.mu_power);
        v
    }
}

fn int_pow(x: &Rational, e: i32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e.abs() {
        acc *= x;
    }
    if e < 0 {
        Rational::one() / acc
    } else {
        acc
    }
}

/// Confirms that a matrix family diagonalizes in the given basis with the
/// claimed diagonal monomials, up to one global scalar per sample.
pub fn verify_action_samples<F>(
    matrix_at: F,
    basis_change: &RatMat,
    claimed: &[ClaimedEntry],
    samples: &[(Rational, Rational)],
) -> Result<bool, GitError>
where
    F: Fn(&Rational, &Rational) -> RatMat,
{
    let t_inv = basis_change
        .inverse()
        .map_err(|_| GitError::BasisChangeSingular)?;
    for (l, m) in samples {
        let a = matrix_at(l, m);
        let conj = basis_change
            .mul(&a)
            .and_then(|x| x.mul(&t_inv))
            .map_err(GitError::Exact)?;
        let n = conj.rows();
        if claimed.len() != n {
            return Err(GitError::WeightCountMismatch(claimed.len(), n));
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && !conj.at(i, j).is_zero() {
                    return Ok(false);
                }
            }
        }
        let mut scalar: Option<Rational> = None;
        for (i, entry) in claimed.iter().enumerate() {
            let expected = entry.eval(l, m);
            if expected.is_zero() {
                return Ok(false);
            }
            let ratio = conj.at(i, i) / &expected;
            if ratio.is_zero() {
                return Ok(false);
            }
            match &scalar {
                None => scalar = Some(ratio),
                Some(s) => {
                    if s != &ratio {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Convenience: a poly ring over the action's coordinate names, for
/// building quotient maps from expressions.
pub fn coordinate_ring(action: &TorusAction) -> PolyRing {
    PolyRing::new(action.coords.clone())
}
