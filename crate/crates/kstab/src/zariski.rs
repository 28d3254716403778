//! Zariski decompositions on surfaces.
//!
//! There are two routes and they check each other. `zariski_decompose` and
//! `decompose_family` run the classical active-set algorithm (exactly, over
//! the rationals, with symbolic coefficients along a parameter line), while
//! `verify_schedule` validates decomposition schedules that were declared
//! by hand, including threefold-level schedules where no algorithm is
//! attempted.
//!
//! Negative-part support is always restricted to an explicit candidate
//! pool. Certificates are relative to that pool: a divisor that turns
//! negative against a curve outside the pool cannot be detected here, and
//! reports say so.

use crate::exact::{
    format_rational, rational_roots, rational_sqrt, ExactError, PiecewisePoly, Poly, PolyRing,
    RatMat, Rational,
};
use crate::lattice::{
    CurveFunctional, DivisorPath, LatticeError, SurfaceLattice, ThreefoldLattice,
};
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum ZariskiError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("pool candidate `{0}` has non-negative self-intersection")]
    CandidateNotNegative(String),
    #[error("active set {0} has a Gram matrix that is not negative definite")]
    GramNotNegativeDefinite(String),
    #[error("negative part coefficient of `{0}` is negative; divisor not pseudoeffective against the pool, or pool is wrong")]
    NegativeCoefficient(String),
    #[error("irrational breakpoint: {0}")]
    IrrationalBreakpoint(String),
    #[error("decomposition walk did not terminate: {0}")]
    NonTermination(String),
    #[error("cannot certify sign of `{0}` on [{1}, {2}]")]
    SignUndecided(String, String, String),
    #[error("empty or inverted parameter window")]
    BadWindow,
}

/// Basis curve classes allowed to appear in negative parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NegativeCurvePool {
    candidates: Vec<usize>,
}

impl NegativeCurvePool {
    pub fn new(surface: &SurfaceLattice, names: &[String]) -> Result<Self, ZariskiError> {
        let mut candidates = Vec::new();
        for n in names {
            let i = surface.class_index(n)?;
            if !surface.gram().at(i, i).is_negative() {
                return Err(ZariskiError::CandidateNotNegative(n.clone()));
            }
            candidates.push(i);
        }
        Ok(NegativeCurvePool { candidates })
    }

    pub fn empty() -> Self {
        NegativeCurvePool { candidates: vec![] }
    }

    pub fn candidates(&self) -> &[usize] {
        &self.candidates
    }
}

/// Result of a single exact decomposition `D = P + N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub positive: Vec<Rational>,
    /// Negative part as (basis index, coefficient), active classes only.
    pub negative: Vec<(usize, Rational)>,
}

/// Classical Zariski decomposition of a rational divisor class against a
/// candidate pool. Self-checks its postconditions before returning.
pub fn zariski_decompose(
    surface: &SurfaceLattice,
    divisor: &[Rational],
    pool: &NegativeCurvePool,
) -> Result<Decomposition, ZariskiError> {
    let mut active: Vec<usize> = Vec::new();
    let mut coeffs: Vec<Rational> = Vec::new();
    for _round in 0..=pool.candidates().len() {
        let positive = subtract_active(divisor, &active, &coeffs);
        let mut grew = false;
        for &j in pool.candidates() {
            if active.contains(&j) {
                continue;
            }
            let pc = pair_with_basis(surface, &positive, j);
            if pc.is_negative() {
                active.push(j);
                grew = true;
            }
        }
        if !grew {
            let d = Decomposition {
                positive,
                negative: active
                    .iter()
                    .cloned()
                    .zip(coeffs.iter().cloned())
                    .filter(|(_, c)| !c.is_zero())
                    .collect(),
            };
            self_check(surface, divisor, &d, pool)?;
            return Ok(d);
        }
        coeffs = solve_gram(surface, divisor, &active)?;
        for (&i, c) in active.iter().zip(coeffs.iter()) {
            if c.is_negative() {
                return Err(ZariskiError::NegativeCoefficient(
                    surface.basis()[i].clone(),
                ));
            }
        }
    }
    Err(ZariskiError::NonTermination(
        "active set kept growing past the pool size".into(),
    ))
}

fn pair_with_basis(surface: &SurfaceLattice, d: &[Rational], j: usize) -> Rational {
    let mut unit = vec![Rational::zero(); surface.rank()];
    unit[j] = Rational::one();
    surface.pair_consts(d, &unit)
}

fn subtract_active(
    divisor: &[Rational],
    active: &[usize],
    coeffs: &[Rational],
) -> Vec<Rational> {
    let mut p = divisor.to_vec();
    for (&i, c) in active.iter().zip(coeffs.iter()) {
        p[i] -= c;
    }
    p
}

/// Solves `(D - sum a_i C_i) . C_j = 0` for the active coefficients.
fn solve_gram(
    surface: &SurfaceLattice,
    divisor: &[Rational],
    active: &[usize],
) -> Result<Vec<Rational>, ZariskiError> {
    let k = active.len();
    let mut gram = RatMat::zero(k, k);
    for (r, &i) in active.iter().enumerate() {
        for (c, &j) in active.iter().enumerate() {
            *gram.at_mut(r, c) = surface.gram().at(i, j).clone();
        }
    }
    if !gram.is_negative_definite()? {
        let names: Vec<&str> = active
            .iter()
            .map(|&i| surface.basis()[i].as_str())
            .collect();
        return Err(ZariskiError::GramNotNegativeDefinite(names.join(", ")));
    }
    let rhs: Vec<Rational> = active
        .iter()
        .map(|&j| pair_with_basis(surface, divisor, j))
        .collect();
    Ok(gram.solve(&rhs)?)
}

fn self_check(
    surface: &SurfaceLattice,
    divisor: &[Rational],
    d: &Decomposition,
    pool: &NegativeCurvePool,
) -> Result<(), ZariskiError> {
    // P + N = D.
    let mut total = d.positive.clone();
    for (i, c) in &d.negative {
        total[*i] += c;
    }
    assert_eq!(total, divisor, "positive and negative parts do not sum back");
    // N >= 0, P . C_i = 0 on active classes, P . C >= 0 on the pool.
    for (i, c) in &d.negative {
        assert!(!c.is_negative(), "negative part coefficient below zero");
        let v = pair_with_basis(surface, &d.positive, *i);
        assert!(v.is_zero(), "positive part not orthogonal to active class");
    }
    for &j in pool.candidates() {
        let v = pair_with_basis(surface, &d.positive, j);
        assert!(
            !v.is_negative(),
            "positive part negative against pool candidate"
        );
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Declared schedules and their verification.
// ---------------------------------------------------------------------------

/// A named divisor class with fixed rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedClass {
    pub name: String,
    pub coeffs: Vec<Rational>,
}

/// One interval of a one-parameter schedule; the positive part is the input
/// divisor minus the declared negative components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchedulePiece {
    pub lo: Rational,
    pub hi: Rational,
    pub negative: Vec<(NamedClass, Poly)>,
}

/// A declared-or-computed decomposition schedule along one parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    pub param: String,
    pub pieces: Vec<SchedulePiece>,
}

impl Schedule {
    pub fn window(&self) -> (Rational, Rational) {
        (
            self.pieces.first().map(|p| p.lo.clone()).unwrap_or_else(Rational::zero),
            self.pieces.last().map(|p| p.hi.clone()).unwrap_or_else(Rational::zero),
        )
    }

    /// Positive part of the given piece, as a path.
    pub fn positive_part(
        &self,
        d: &DivisorPath,
        piece: usize,
    ) -> Result<DivisorPath, ZariskiError> {
        let mut out = d.clone();
        for (class, coeff) in &self.pieces[piece].negative {
            let coeffs: Vec<Poly> = out
                .coeffs()
                .iter()
                .zip(class.coeffs.iter())
                .map(|(a, c)| a - &coeff.scale(c))
                .collect();
            out = replace_coeffs(&out, coeffs);
        }
        Ok(out)
    }
}

fn replace_coeffs(d: &DivisorPath, coeffs: Vec<Poly>) -> DivisorPath {
    // DivisorPath is opaque about its lattice tag; rebuild through clone.
    let mut out = d.clone();
    out.set_coeffs(coeffs);
    out
}

/// What a schedule is verified against.
pub enum VerifyTarget<'a> {
    Surface {
        lattice: &'a SurfaceLattice,
        pool: &'a NegativeCurvePool,
    },
    Threefold {
        lattice: &'a ThreefoldLattice,
        curves: &'a [CurveFunctional],
    },
}

/// Outcome of schedule verification: pass/fail, the first violated
/// condition, and the exact volume polynomial of each piece.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScheduleReport {
    pub pass: bool,
    pub first_violation: Option<String>,
    pub volumes: Vec<Poly>,
}

impl ScheduleReport {
    fn fail(msg: String) -> Self {
        ScheduleReport {
            pass: false,
            first_violation: Some(msg),
            volumes: vec![],
        }
    }
}

/// Checks a declared one-parameter schedule: interval structure, class
/// identity (implicit), nonnegative negative parts, orthogonality and pool
/// nefness on surfaces (test-curve nefness on threefolds), and continuity
/// of the volume across breakpoints.
pub fn verify_schedule(
    target: &VerifyTarget,
    schedule: &Schedule,
    d: &DivisorPath,
) -> Result<ScheduleReport, ZariskiError> {
    if schedule.pieces.is_empty() {
        return Ok(ScheduleReport::fail("schedule has no pieces".into()));
    }
    for w in schedule.pieces.windows(2) {
        if w[0].hi != w[1].lo {
            return Ok(ScheduleReport::fail(format!(
                "pieces not contiguous at {}",
                format_rational(&w[0].hi)
            )));
        }
    }
    let mut volumes = Vec::new();
    for (k, piece) in schedule.pieces.iter().enumerate() {
        if piece.lo >= piece.hi {
            return Ok(ScheduleReport::fail(format!(
                "piece {} has an empty interval",
                k
            )));
        }
        // Negativity of the declared coefficients.
        for (class, coeff) in &piece.negative {
            match nonneg_on(coeff, &piece.lo, &piece.hi)? {
                SignOutcome::NonNegative => {}
                SignOutcome::NegativeAt(x) => {
                    return Ok(ScheduleReport::fail(format!(
                        "negative-part coefficient of `{}` is negative at {} on piece {}",
                        class.name,
                        format_rational(&x),
                        k
                    )));
                }
                SignOutcome::Undecided => {
                    return Err(ZariskiError::SignUndecided(
                        coeff.to_string(),
                        format_rational(&piece.lo),
                        format_rational(&piece.hi),
                    ));
                }
            }
        }
        let p = schedule.positive_part(d, k)?;
        match target {
            VerifyTarget::Surface { lattice, pool } => {
                // Orthogonality against every component actually present.
                for (class, coeff) in &piece.negative {
                    if coeff.is_zero() {
                        continue;
                    }
                    let v = lattice.pair_class(&p, &class.coeffs)?;
                    if !v.is_zero() {
                        return Ok(ScheduleReport::fail(format!(
                            "positive part not orthogonal to `{}` on piece {} (pairing {})",
                            class.name, k, v
                        )));
                    }
                }
                for &j in pool.candidates() {
                    let mut unit = vec![Rational::zero(); lattice.rank()];
                    unit[j] = Rational::one();
                    let v = lattice.pair_class(&p, &unit)?;
                    match nonneg_on(&v, &piece.lo, &piece.hi)? {
                        SignOutcome::NonNegative => {}
                        SignOutcome::NegativeAt(x) => {
                            return Ok(ScheduleReport::fail(format!(
                                "positive part negative against `{}` at {} on piece {}",
                                lattice.basis()[j],
                                format_rational(&x),
                                k
                            )));
                        }
                        SignOutcome::Undecided => {
                            return Err(ZariskiError::SignUndecided(
                                v.to_string(),
                                format_rational(&piece.lo),
                                format_rational(&piece.hi),
                            ));
                        }
                    }
                }
                volumes.push(lattice.square(&p)?);
            }
            VerifyTarget::Threefold { lattice, curves } => {
                for c in curves.iter() {
                    let v = c.pair(&p)?;
                    match nonneg_on(&v, &piece.lo, &piece.hi)? {
                        SignOutcome::NonNegative => {}
                        SignOutcome::NegativeAt(x) => {
                            return Ok(ScheduleReport::fail(format!(
                                "positive part negative against curve `{}` at {} on piece {}",
                                c.name,
                                format_rational(&x),
                                k
                            )));
                        }
                        SignOutcome::Undecided => {
                            return Err(ZariskiError::SignUndecided(
                                v.to_string(),
                                format_rational(&piece.lo),
                                format_rational(&piece.hi),
                            ));
                        }
                    }
                }
                volumes.push(lattice.cube(&p)?);
            }
        }
    }
    // Volume continuity at interior breakpoints.
    for k in 1..schedule.pieces.len() {
        let b = &schedule.pieces[k].lo;
        let left = volumes[k - 1].eval_univar(b)?;
        let right = volumes[k].eval_univar(b)?;
        if left != right {
            return Ok(ScheduleReport::fail(format!(
                "volume jumps at breakpoint {}: {} vs {}",
                format_rational(b),
                format_rational(&left),
                format_rational(&right)
            )));
        }
    }
    Ok(ScheduleReport {
        pass: true,
        first_violation: None,
        volumes,
    })
}

/// Exact sign certification of a univariate polynomial on an interval.
#[derive(Debug, Clone, PartialEq, Eq)]
enum SignOutcome {
    NonNegative,
    NegativeAt(Rational),
    Undecided,
}

fn nonneg_on(p: &Poly, lo: &Rational, hi: &Rational) -> Result<SignOutcome, ZariskiError> {
    if p.is_zero() {
        return Ok(SignOutcome::NonNegative);
    }
    if let Some(c) = p.as_constant() {
        return Ok(if c.is_negative() {
            SignOutcome::NegativeAt(lo.clone())
        } else {
            SignOutcome::NonNegative
        });
    }
    let rep = rational_roots(p, lo, hi)?;
    // Sample endpoints, all roots, and midpoints between consecutive cuts.
    let mut cuts = vec![lo.clone()];
    cuts.extend(rep.roots.iter().cloned());
    cuts.push(hi.clone());
    let mut samples = cuts.clone();
    for w in cuts.windows(2) {
        if w[0] < w[1] {
            samples.push((&w[0] + &w[1]) / crate::exact::rint(2));
        }
    }
    for s in &samples {
        if p.eval_univar(s)?.is_negative() {
            return Ok(SignOutcome::NegativeAt(s.clone()));
        }
    }
    if rep.residual_sign_change {
        // An irrational root crosses zero somewhere; all our samples were
        // nonnegative, so the dip could not be bracketed.
        return Ok(SignOutcome::Undecided);
    }
    Ok(SignOutcome::NonNegative)
}

// ---------------------------------------------------------------------------
// Parametric decomposition along a ray D(u, v) = B(u) - v C.
// ---------------------------------------------------------------------------

/// One v-interval of a family decomposition; bounds are polynomials in the
/// outer parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VPiece {
    pub v_lo: Poly,
    pub v_hi: Poly,
    /// Negative part as (basis index, coefficient in (u, v)).
    pub negative: Vec<(usize, Poly)>,
    /// Positive part coefficients in (u, v).
    pub positive: Vec<Poly>,
}

/// Decomposition schedule over one u-cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UCell {
    pub u_lo: Rational,
    pub u_hi: Rational,
    pub vpieces: Vec<VPiece>,
    /// Pseudoeffective threshold t(u) on this cell.
    pub threshold: Poly,
}

/// Full structure of Zariski decompositions of `B(u) - v C` for
/// `u` in a window and `v` in `[0, t(u)]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySchedule {
    pub uvar: String,
    pub vvar: String,
    pub cells: Vec<UCell>,
}

impl FamilySchedule {
    /// Piece-for-piece comparison against another schedule; returns a
    /// description of the first difference.
    pub fn same_as(&self, other: &FamilySchedule) -> Result<(), String> {
        if self.cells.len() != other.cells.len() {
            return Err(format!(
                "cell count differs: {} vs {}",
                self.cells.len(),
                other.cells.len()
            ));
        }
        for (a, b) in self.cells.iter().zip(other.cells.iter()) {
            if a.u_lo != b.u_lo || a.u_hi != b.u_hi {
                return Err(format!(
                    "u-cell [{}, {}] vs [{}, {}]",
                    format_rational(&a.u_lo),
                    format_rational(&a.u_hi),
                    format_rational(&b.u_lo),
                    format_rational(&b.u_hi)
                ));
            }
            if a.threshold != b.threshold {
                return Err(format!(
                    "threshold differs on [{}, {}]: {} vs {}",
                    format_rational(&a.u_lo),
                    format_rational(&a.u_hi),
                    a.threshold,
                    b.threshold
                ));
            }
            if a.vpieces.len() != b.vpieces.len() {
                return Err(format!(
                    "v-piece count differs on [{}, {}]: {} vs {}",
                    format_rational(&a.u_lo),
                    format_rational(&a.u_hi),
                    a.vpieces.len(),
                    b.vpieces.len()
                ));
            }
            for (pa, pb) in a.vpieces.iter().zip(b.vpieces.iter()) {
                if pa.v_lo != pb.v_lo || pa.v_hi != pb.v_hi {
                    return Err(format!(
                        "v-bounds differ: [{}, {}] vs [{}, {}]",
                        pa.v_lo, pa.v_hi, pb.v_lo, pb.v_hi
                    ));
                }
                if pa.negative != pb.negative {
                    return Err(format!(
                        "negative parts differ on v in [{}, {}]",
                        pa.v_lo, pa.v_hi
                    ));
                }
                if pa.positive != pb.positive {
                    return Err(format!(
                        "positive parts differ on v in [{}, {}]",
                        pa.v_lo, pa.v_hi
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Runs the active-set walk over every u-cell of `cells`, decomposing
/// `base(u)|cell - v C` in v from 0 up to the pseudoeffective threshold.
///
/// `base` gives the restricted positive part on each cell. Cells split
/// automatically where the combinatorial pattern changes.
pub fn decompose_family(
    surface: &SurfaceLattice,
    cells: &[(Rational, Rational, DivisorPath)],
    curve_class: &[Rational],
    pool: &NegativeCurvePool,
    uvar: &str,
    vvar: &str,
) -> Result<FamilySchedule, ZariskiError> {
    let mut out: Vec<UCell> = Vec::new();
    for (lo, hi, base) in cells {
        if lo >= hi {
            return Err(ZariskiError::BadWindow);
        }
        let mut work = vec![(lo.clone(), hi.clone())];
        let mut guard = 0;
        while let Some((a, b)) = work.pop() {
            guard += 1;
            if guard > 64 {
                return Err(ZariskiError::NonTermination(
                    "cell splitting did not stabilize".into(),
                ));
            }
            match walk_cell(surface, base, curve_class, &a, &b, pool, uvar, vvar)? {
                WalkOutcome::Done(cell) => {
                    let pos = out
                        .iter()
                        .position(|c| c.u_lo > cell.u_lo)
                        .unwrap_or(out.len());
                    out.insert(pos, cell);
                }
                WalkOutcome::Split(points) => {
                    let mut cuts: Vec<Rational> = points
                        .into_iter()
                        .filter(|x| x > &a && x < &b)
                        .collect();
                    cuts.sort();
                    cuts.dedup();
                    if cuts.is_empty() {
                        return Err(ZariskiError::NonTermination(
                            "pattern unstable but no rational split point found".into(),
                        ));
                    }
                    let mut prev = a.clone();
                    for c in cuts {
                        work.push((prev.clone(), c.clone()));
                        prev = c;
                    }
                    work.push((prev, b.clone()));
                }
            }
        }
    }
    Ok(FamilySchedule {
        uvar: uvar.to_string(),
        vvar: vvar.to_string(),
        cells: out,
    })
}

enum WalkOutcome {
    Done(UCell),
    Split(Vec<Rational>),
}

/// First-order value of an affine-in-v expression just right of a point:
/// the pair (value, slope) ordered lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
struct EpsVal {
    value: Rational,
    slope: Rational,
}

impl EpsVal {
    fn is_negative(&self) -> bool {
        self.value.is_negative() || (self.value.is_zero() && self.slope.is_negative())
    }
}

#[allow(clippy::too_many_arguments)]
fn walk_cell(
    surface: &SurfaceLattice,
    base: &DivisorPath,
    curve_class: &[Rational],
    u_lo: &Rational,
    u_hi: &Rational,
    pool: &NegativeCurvePool,
    uvar: &str,
    vvar: &str,
) -> Result<WalkOutcome, ZariskiError> {
    let ring_uv = PolyRing::new(vec![uvar, vvar]);
    let ring_u = PolyRing::new(vec![uvar]);
    let sample = (u_lo + u_hi) / crate::exact::rint(2);

    // D(u, v) = base(u) - v * C.
    let v = ring_uv.var(vvar)?;
    let mut d_coeffs = Vec::with_capacity(surface.rank());
    for (i, c) in base.coeffs().iter().enumerate() {
        let c = c.embed(&ring_uv)?;
        d_coeffs.push(&c - &v.scale(&curve_class[i]));
    }

    let n = surface.rank();
    let mut v0: Poly = ring_u.zero();
    let mut pieces: Vec<VPiece> = Vec::new();
    let mut splits: Vec<Rational> = Vec::new();
    let mut guard = 0;

    loop {
        guard += 1;
        if guard > 4 * (pool.candidates().len() + 2) {
            return Err(ZariskiError::NonTermination(
                "too many v-pieces in one cell".into(),
            ));
        }
        // Active set just right of v0, decided at the sample point.
        let v0_at_sample = v0.eval_univar(&sample)?;
        let mut active: Vec<usize> = Vec::new();
        let (coeffs, positive) = loop {
            let coeffs = solve_gram_symbolic(surface, &d_coeffs, &active, &ring_uv)?;
            let positive = positive_from(&d_coeffs, &active, &coeffs, n);
            let mut grew = false;
            for &j in pool.candidates() {
                if active.contains(&j) {
                    continue;
                }
                let pc = pair_poly_class(surface, &positive, j)?;
                let ev = eps_at(&pc, uvar, vvar, &sample, &v0_at_sample)?;
                if ev.is_negative() {
                    active.push(j);
                    grew = true;
                }
            }
            if !grew {
                break (coeffs, positive);
            }
        };
        // Components whose coefficient vanishes identically are not part of
        // the support; negative first-order coefficients mean the sample sits
        // on a boundary, which the split logic below will resolve.
        let mut neg: Vec<(usize, Poly)> = Vec::new();
        for (&i, c) in active.iter().zip(coeffs.iter()) {
            if c.is_zero() {
                continue;
            }
            let ev = eps_at(c, uvar, vvar, &sample, &v0_at_sample)?;
            if ev.is_negative() {
                return Err(ZariskiError::NegativeCoefficient(
                    surface.basis()[i].clone(),
                ));
            }
            neg.push((i, c.clone()));
        }

        // Next event in v: new candidate turning negative, active coefficient
        // turning negative, or the volume reaching zero.
        let vol = square_poly(surface, &positive)?;
        // Degenerate start: the volume already vanishes and does not grow,
        // so the threshold is the current point.
        let vol_here = eps_at(&vol, uvar, vvar, &sample, &v0_at_sample)?;
        if vol_here.value.is_zero() && !vol_here.slope.is_positive() {
            match validate_cell(surface, &pieces, pool, u_lo, u_hi, uvar, vvar)? {
                None => {
                    return Ok(WalkOutcome::Done(UCell {
                        u_lo: u_lo.clone(),
                        u_hi: u_hi.clone(),
                        vpieces: pieces,
                        threshold: v0,
                    }));
                }
                Some(points) => {
                    splits.extend(points);
                    return Ok(WalkOutcome::Split(splits));
                }
            }
        }
        let mut best: Option<(Poly, bool)> = None; // (root in u, is_threshold)
        let mut best_val: Option<Rational> = None;

        let consider = |root: Poly,
                            is_threshold: bool,
                            best: &mut Option<(Poly, bool)>,
                            best_val: &mut Option<Rational>|
         -> Result<(), ZariskiError> {
            let val = root.eval_univar(&sample)?;
            if val <= v0_at_sample {
                return Ok(());
            }
            let better = match best_val {
                None => true,
                Some(b) => &val < b || (&val == b && is_threshold),
            };
            if better {
                *best = Some((root, is_threshold));
                *best_val = Some(val);
            }
            Ok(())
        };

        for &j in pool.candidates() {
            if active.contains(&j) {
                continue;
            }
            let pc = pair_poly_class(surface, &positive, j)?;
            if let Some(root) = affine_root_in_v(&pc, vvar, &ring_u)? {
                // Only a downward crossing opens a new piece.
                let slope = v_slope(&pc, vvar, &ring_u)?;
                if is_negative_at(&slope, &sample)? {
                    consider(root, false, &mut best, &mut best_val)?;
                }
            }
        }
        for (_, c) in &neg {
            if let Some(root) = affine_root_in_v(c, vvar, &ring_u)? {
                let slope = v_slope(c, vvar, &ring_u)?;
                if is_negative_at(&slope, &sample)? {
                    consider(root, false, &mut best, &mut best_val)?;
                }
            }
        }
        for root in quadratic_roots_in_v(&vol, vvar, &ring_u, &sample)? {
            consider(root, true, &mut best, &mut best_val)?;
        }

        let Some((v1, is_threshold)) = best else {
            return Err(ZariskiError::NonTermination(
                "no further event and volume never vanishes".into(),
            ));
        };

        // The volume must stay nonnegative up to the chosen event; an
        // irrational zero crossing before it would be an uncertifiable
        // threshold.
        certify_volume_at_sample(
            &vol,
            uvar,
            vvar,
            &sample,
            &v0_at_sample,
            &v1.eval_univar(&sample)?,
        )?;

        pieces.push(VPiece {
            v_lo: v0.clone(),
            v_hi: v1.clone(),
            negative: neg,
            positive,
        });

        if is_threshold {
            // Validate the whole cell pattern; collect split points if the
            // boundary ordering or a sign condition fails inside the cell.
            match validate_cell(surface, &pieces, pool, u_lo, u_hi, uvar, vvar)? {
                None => {
                    return Ok(WalkOutcome::Done(UCell {
                        u_lo: u_lo.clone(),
                        u_hi: u_hi.clone(),
                        vpieces: pieces,
                        threshold: v1,
                    }));
                }
                Some(points) => {
                    splits.extend(points);
                    return Ok(WalkOutcome::Split(splits));
                }
            }
        }
        v0 = v1;
    }
}

/// Checks every sign condition of the assembled pieces over the whole
/// u-cell (edges in v suffice for data affine in v). Returns split points
/// when a condition flips somewhere inside the cell.
#[allow(clippy::too_many_arguments)]
fn validate_cell(
    surface: &SurfaceLattice,
    pieces: &[VPiece],
    pool: &NegativeCurvePool,
    u_lo: &Rational,
    u_hi: &Rational,
    uvar: &str,
    vvar: &str,
) -> Result<Option<Vec<Rational>>, ZariskiError> {
    let ring_u = PolyRing::new(vec![uvar]);
    let mut splits = Vec::new();
    let check_nonneg = |p: &Poly, splits: &mut Vec<Rational>| -> Result<(), ZariskiError> {
        let p = p.project(&ring_u)?;
        match nonneg_on(&p, u_lo, u_hi)? {
            SignOutcome::NonNegative => Ok(()),
            SignOutcome::NegativeAt(x) => {
                // The pattern breaks inside the cell; split at every sign
                // change of this polynomial.
                let rep = rational_roots(&p, u_lo, u_hi)?;
                if rep.roots.is_empty() {
                    return Err(ZariskiError::IrrationalBreakpoint(format!(
                        "sign of {} flips near {} with no rational root",
                        p,
                        format_rational(&x)
                    )));
                }
                splits.extend(rep.roots);
                Ok(())
            }
            SignOutcome::Undecided => Err(ZariskiError::SignUndecided(
                p.to_string(),
                format_rational(u_lo),
                format_rational(u_hi),
            )),
        }
    };

    // Boundary ordering: v_lo <= v_hi per piece, chained automatically.
    for piece in pieces {
        let diff = &piece.v_hi - &piece.v_lo;
        check_nonneg(&diff, &mut splits)?;
    }
    // The volume is quadratic in v, so edge signs alone do not certify the
    // interior. Concave-in-v volumes attain their minimum at the edges,
    // which are checked below; convex ones additionally need the vertex to
    // lie outside the piece or the discriminant to be nonpositive. Where
    // neither certificate holds uniformly, the crossing points split the
    // cell.
    for piece in pieces {
        let vol = square_poly(surface, &piece.positive)?;
        let cs = vol.coeffs_in(vvar)?;
        if cs.len() != 3 {
            continue;
        }
        let lead = cs[2].project(&ring_u)?.as_constant().ok_or_else(|| {
            ZariskiError::IrrationalBreakpoint(format!(
                "volume {} has a non-constant leading coefficient in {}",
                vol, vvar
            ))
        })?;
        if !lead.is_positive() {
            continue;
        }
        let b = cs[1].project(&ring_u)?;
        let c = cs[0].project(&ring_u)?;
        let vertex = b.scale(&(-Rational::one() / (crate::exact::rint(2) * &lead)));
        let below = (&piece.v_lo.project(&ring_u)? - &vertex).project(&ring_u)?;
        let above = (&vertex - &piece.v_hi.project(&ring_u)?).project(&ring_u)?;
        let disc_neg = {
            let disc = &(&b * &b) - &c.scale(&(crate::exact::rint(4) * &lead));
            -&disc
        };
        let mut certified = false;
        for cert in [&below, &above, &disc_neg] {
            if matches!(nonneg_on(cert, u_lo, u_hi)?, SignOutcome::NonNegative) {
                certified = true;
                break;
            }
        }
        if !certified {
            let mut found = false;
            for d in [&below, &above, &disc_neg] {
                if !d.is_constant() && !d.is_zero() {
                    let rep = rational_roots(d, u_lo, u_hi)?;
                    for r in rep.roots {
                        if &r > u_lo && &r < u_hi {
                            splits.push(r);
                            found = true;
                        }
                    }
                }
            }
            if !found {
                return Err(ZariskiError::IrrationalBreakpoint(format!(
                    "volume {} cannot be certified nonnegative on a piece",
                    vol
                )));
            }
        }
    }
    // Edge checks: every declared sign condition at both v-edges.
    for piece in pieces {
        let positive_path_checks = |p: &Poly| -> Result<Vec<Poly>, ZariskiError> {
            Ok(vec![
                p.subst_var(vvar, &piece.v_lo.embed(p.ring())?)?,
                p.subst_var(vvar, &piece.v_hi.embed(p.ring())?)?,
            ])
        };
        for (_, c) in &piece.negative {
            for e in positive_path_checks(c)? {
                check_nonneg(&e, &mut splits)?;
            }
        }
        for &j in pool.candidates() {
            let pc = pair_poly_class(surface, &piece.positive, j)?;
            for e in positive_path_checks(&pc)? {
                check_nonneg(&e, &mut splits)?;
            }
        }
        let vol = square_poly(surface, &piece.positive)?;
        for e in positive_path_checks(&vol)? {
            check_nonneg(&e, &mut splits)?;
        }
    }
    splits.sort();
    splits.dedup();
    splits.retain(|x| x > u_lo && x < u_hi);
    if splits.is_empty() {
        Ok(None)
    } else {
        Ok(Some(splits))
    }
}

fn positive_from(
    d_coeffs: &[Poly],
    active: &[usize],
    coeffs: &[Poly],
    n: usize,
) -> Vec<Poly> {
    let mut p: Vec<Poly> = d_coeffs.to_vec();
    for (&i, c) in active.iter().zip(coeffs.iter()) {
        p[i] = &p[i] - c;
    }
    debug_assert_eq!(p.len(), n);
    p
}

/// Solves the active Gram system with polynomial right-hand sides. The Gram
/// matrix is rational, so the solution is polynomial.
fn solve_gram_symbolic(
    surface: &SurfaceLattice,
    d_coeffs: &[Poly],
    active: &[usize],
    ring: &PolyRing,
) -> Result<Vec<Poly>, ZariskiError> {
    if active.is_empty() {
        return Ok(vec![]);
    }
    let k = active.len();
    let mut gram = RatMat::zero(k, k);
    for (r, &i) in active.iter().enumerate() {
        for (c, &j) in active.iter().enumerate() {
            *gram.at_mut(r, c) = surface.gram().at(i, j).clone();
        }
    }
    if !gram.is_negative_definite()? {
        let names: Vec<&str> = active
            .iter()
            .map(|&i| surface.basis()[i].as_str())
            .collect();
        return Err(ZariskiError::GramNotNegativeDefinite(names.join(", ")));
    }
    let inv = gram.inverse()?;
    // rhs_j = D . C_j as a polynomial.
    let mut rhs = Vec::with_capacity(k);
    for &j in active {
        rhs.push(pair_poly_class(surface, d_coeffs, j)?);
    }
    let mut out = Vec::with_capacity(k);
    for r in 0..k {
        let mut acc = ring.zero();
        for c in 0..k {
            acc = &acc + &rhs[c].scale(inv.at(r, c));
        }
        out.push(acc);
    }
    Ok(out)
}

fn pair_poly_class(
    surface: &SurfaceLattice,
    coeffs: &[Poly],
    j: usize,
) -> Result<Poly, ZariskiError> {
    let ring = coeffs[0].ring().clone();
    let mut acc = ring.zero();
    for (i, c) in coeffs.iter().enumerate() {
        let g = surface.gram().at(i, j);
        if g.is_zero() {
            continue;
        }
        acc = &acc + &c.scale(g);
    }
    Ok(acc)
}

fn square_poly(surface: &SurfaceLattice, coeffs: &[Poly]) -> Result<Poly, ZariskiError> {
    let ring = coeffs[0].ring().clone();
    let mut acc = ring.zero();
    for i in 0..coeffs.len() {
        for j in 0..coeffs.len() {
            let g = surface.gram().at(i, j);
            if g.is_zero() {
                continue;
            }
            acc = &acc + &(&coeffs[i] * &coeffs[j]).scale(g);
        }
    }
    Ok(acc)
}

/// Confirms at the sample parameter that the volume stays nonnegative on
/// `[v0, v1]`; a failure means an irrational threshold sits before the
/// chosen event.
fn certify_volume_at_sample(
    vol: &Poly,
    uvar: &str,
    vvar: &str,
    sample: &Rational,
    v0: &Rational,
    v1: &Rational,
) -> Result<(), ZariskiError> {
    let at = |v: &Rational| -> Result<Rational, ZariskiError> {
        let mut point = std::collections::BTreeMap::new();
        point.insert(uvar.to_string(), sample.clone());
        point.insert(vvar.to_string(), v.clone());
        Ok(vol.evaluate(&point)?)
    };
    if at(v1)?.is_negative() {
        return Err(ZariskiError::IrrationalBreakpoint(format!(
            "volume {} crosses zero before the next event",
            vol
        )));
    }
    let cs = vol.coeffs_in(vvar)?;
    if cs.len() == 3 {
        let a = cs[2].eval_univar(sample)?;
        if a.is_positive() {
            let b = cs[1].eval_univar(sample)?;
            let vertex = -b / (crate::exact::rint(2) * &a);
            if &vertex > v0 && &vertex < v1 && at(&vertex)?.is_negative() {
                return Err(ZariskiError::IrrationalBreakpoint(format!(
                    "volume {} dips below zero inside a piece",
                    vol
                )));
            }
        }
    }
    Ok(())
}

/// Value and v-slope of a (u, v)-polynomial at (u = sample, v = at).
fn eps_at(
    p: &Poly,
    uvar: &str,
    vvar: &str,
    sample: &Rational,
    at: &Rational,
) -> Result<EpsVal, ZariskiError> {
    let mut point = std::collections::BTreeMap::new();
    point.insert(uvar.to_string(), sample.clone());
    point.insert(vvar.to_string(), at.clone());
    let value = p.evaluate(&point)?;
    let slope = p.derivative(vvar)?.evaluate(&point)?;
    Ok(EpsVal { value, slope })
}

/// The v-coefficient of an affine-in-v polynomial, as a polynomial in u.
fn v_slope(p: &Poly, vvar: &str, ring_u: &PolyRing) -> Result<Poly, ZariskiError> {
    let cs = p.coeffs_in(vvar)?;
    if cs.len() > 2 {
        return Err(ZariskiError::IrrationalBreakpoint(format!(
            "expected affine dependence on {}, got degree {}",
            vvar,
            cs.len() - 1
        )));
    }
    if cs.len() < 2 {
        return Ok(ring_u.zero());
    }
    Ok(cs[1].project(ring_u)?)
}

fn is_negative_at(p: &Poly, sample: &Rational) -> Result<bool, ZariskiError> {
    Ok(p.eval_univar(sample)?.is_negative())
}

/// Root in v of an affine-in-v polynomial, as a polynomial in u; `None`
/// when the polynomial does not involve v or has a non-polynomial root.
fn affine_root_in_v(
    p: &Poly,
    vvar: &str,
    ring_u: &PolyRing,
) -> Result<Option<Poly>, ZariskiError> {
    let cs = p.coeffs_in(vvar)?;
    if cs.len() != 2 {
        return Ok(None);
    }
    let c0 = cs[0].project(ring_u)?;
    let c1 = cs[1].project(ring_u)?;
    if let Some(k) = c1.as_constant() {
        if k.is_zero() {
            return Ok(None);
        }
        return Ok(Some(c0.scale(&(-Rational::one() / k))));
    }
    match (-&c0).div_exact(&c1) {
        Some(q) => Ok(Some(q)),
        None => Err(ZariskiError::IrrationalBreakpoint(format!(
            "event locus {} = 0 has a non-polynomial root in {}",
            p, vvar
        ))),
    }
}

/// Polynomial roots in v of a quadratic-in-v volume polynomial.
fn quadratic_roots_in_v(
    p: &Poly,
    vvar: &str,
    ring_u: &PolyRing,
    sample: &Rational,
) -> Result<Vec<Poly>, ZariskiError> {
    if p.is_zero() {
        return Ok(vec![]);
    }
    let cs = p.coeffs_in(vvar)?;
    match cs.len() {
        1 => Ok(vec![]),
        2 => Ok(affine_root_in_v(p, vvar, ring_u)?.into_iter().collect()),
        3 => {
            let a = cs[2]
                .project(ring_u)?
                .as_constant()
                .ok_or_else(|| {
                    ZariskiError::IrrationalBreakpoint(format!(
                        "volume has non-constant leading v-coefficient in {}",
                        p
                    ))
                })?;
            let b = cs[1].project(ring_u)?;
            let c = cs[0].project(ring_u)?;
            // v = (-b +- sqrt(b^2 - 4ac)) / (2a), which must be polynomial.
            let disc = &(&b * &b) - &(&c.scale(&a)).scale(&crate::exact::rint(4));
            let sqrt = match crate::exact::poly_sqrt(&disc) {
                Some(s) => s,
                None => {
                    // The roots are irrational (or at least not polynomial
                    // in u). That is only fatal when such a root is actually
                    // reached; piece certification decides that separately.
                    let dv = disc.eval_univar(sample)?;
                    if dv.is_negative() || rational_sqrt(&dv).is_none() {
                        return Ok(vec![]);
                    }
                    return Err(ZariskiError::IrrationalBreakpoint(format!(
                        "volume root of {} is rational pointwise but not polynomial",
                        p
                    )));
                }
            };
            let two_a = ring_u.constant(&a * crate::exact::rint(2));
            let r1 = (&(-&b) + &sqrt)
                .div_exact(&two_a)
                .ok_or_else(|| ZariskiError::IrrationalBreakpoint(format!(
                    "volume root of {} is not polynomial",
                    p
                )))?;
            let r2 = (&(-&b) - &sqrt)
                .div_exact(&two_a)
                .ok_or_else(|| ZariskiError::IrrationalBreakpoint(format!(
                    "volume root of {} is not polynomial",
                    p
                )))?;
            Ok(vec![r1, r2])
        }
        _ => Err(ZariskiError::IrrationalBreakpoint(format!(
            "volume has degree {} > 2 in {}",
            cs.len() - 1,
            vvar
        ))),
    }
}

/// Zariski decomposition along a one-parameter divisor path, as a
/// schedule over the window. Sign decisions are made at interior sample
/// points and breakpoints come from rational roots of the negative-part
/// coefficients and the nef pairings.
pub fn parametric_zariski(
    surface: &SurfaceLattice,
    d: &DivisorPath,
    lo: &Rational,
    hi: &Rational,
    pool: &NegativeCurvePool,
) -> Result<Schedule, ZariskiError> {
    if lo >= hi {
        return Err(ZariskiError::BadWindow);
    }
    let param = d.coeffs()[0]
        .ring()
        .vars()
        .first()
        .cloned()
        .unwrap_or_else(|| "u".to_string());
    let mut work = vec![(lo.clone(), hi.clone())];
    let mut pieces: Vec<SchedulePiece> = Vec::new();
    let mut guard = 0;
    while let Some((a, b)) = work.pop() {
        guard += 1;
        if guard > 128 {
            return Err(ZariskiError::NonTermination(
                "window splitting did not stabilize".into(),
            ));
        }
        let sample = (&a + &b) / crate::exact::rint(2);
        let at: Vec<Rational> = d
            .coeffs()
            .iter()
            .map(|c| c.eval_univar(&sample))
            .collect::<Result<_, _>>()?;
        let dec = zariski_decompose(surface, &at, pool)?;
        let active: Vec<usize> = dec.negative.iter().map(|(i, _)| *i).collect();
        let coeffs = solve_gram_symbolic_1(surface, d, &active)?;
        // Interior sign changes force a split.
        let mut cuts: Vec<Rational> = Vec::new();
        let mut scan = |p: &Poly| -> Result<(), ZariskiError> {
            if p.is_constant() {
                return Ok(());
            }
            let rep = rational_roots(p, &a, &b)?;
            if rep.residual_sign_change {
                return Err(ZariskiError::IrrationalBreakpoint(format!(
                    "sign of {} changes irrationally on [{}, {}]",
                    p,
                    format_rational(&a),
                    format_rational(&b)
                )));
            }
            cuts.extend(rep.roots.into_iter().filter(|x| x > &a && x < &b));
            Ok(())
        };
        let mut positive = d.coeffs().to_vec();
        for (&i, c) in active.iter().zip(coeffs.iter()) {
            positive[i] = &positive[i] - c;
            scan(c)?;
        }
        for &j in pool.candidates() {
            let pc = pair_poly_class(surface, &positive, j)?;
            scan(&pc)?;
        }
        if cuts.is_empty() {
            let negative = active
                .iter()
                .zip(coeffs.iter())
                .filter(|(_, c)| !c.is_zero())
                .map(|(&i, c)| {
                    let mut unit = vec![Rational::zero(); surface.rank()];
                    unit[i] = Rational::one();
                    (
                        NamedClass {
                            name: surface.basis()[i].clone(),
                            coeffs: unit,
                        },
                        c.clone(),
                    )
                })
                .collect();
            let pos = pieces
                .iter()
                .position(|p| p.lo > a)
                .unwrap_or(pieces.len());
            pieces.insert(
                pos,
                SchedulePiece {
                    lo: a,
                    hi: b,
                    negative,
                },
            );
        } else {
            cuts.sort();
            cuts.dedup();
            let mut prev = a.clone();
            for c in cuts {
                work.push((prev.clone(), c.clone()));
                prev = c;
            }
            work.push((prev, b.clone()));
        }
    }
    // Merge adjacent pieces with identical negative parts.
    let mut merged: Vec<SchedulePiece> = Vec::new();
    for p in pieces {
        match merged.last_mut() {
            Some(last) if last.hi == p.lo && last.negative == p.negative => {
                last.hi = p.hi;
            }
            _ => merged.push(p),
        }
    }
    Ok(Schedule {
        param,
        pieces: merged,
    })
}

fn solve_gram_symbolic_1(
    surface: &SurfaceLattice,
    d: &DivisorPath,
    active: &[usize],
) -> Result<Vec<Poly>, ZariskiError> {
    let ring = d.coeffs()[0].ring().clone();
    solve_gram_symbolic(surface, d.coeffs(), active, &ring)
}

/// Pseudoeffective threshold of `base(u)|cell - v C` as a piecewise
/// polynomial in u over the given cells.
pub fn pseff_threshold(
    surface: &SurfaceLattice,
    cells: &[(Rational, Rational, DivisorPath)],
    curve_class: &[Rational],
    pool: &NegativeCurvePool,
    uvar: &str,
    vvar: &str,
) -> Result<PiecewisePoly, ZariskiError> {
    let fam = decompose_family(surface, cells, curve_class, pool, uvar, vvar)?;
    let mut breakpoints = vec![fam.cells[0].u_lo.clone()];
    let mut pieces = Vec::new();
    for c in &fam.cells {
        breakpoints.push(c.u_hi.clone());
        pieces.push(c.threshold.clone());
    }
    Ok(PiecewisePoly::new(uvar, breakpoints, pieces, true)?.simplify())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rint};

    fn dp6() -> SurfaceLattice {
        let g = RatMat::new(
            3,
            3,
            vec![
                rint(0),
                rint(1),
                rint(1),
                rint(1),
                rint(-1),
                rint(0),
                rint(1),
                rint(0),
                rint(-1),
            ],
        )
        .unwrap();
        SurfaceLattice::new("S", vec!["Z".into(), "e1".into(), "e2".into()], g).unwrap()
    }

    #[test]
    fn static_decomposition_matches_hand_computation() {
        let s = dp6();
        let pool = NegativeCurvePool::new(&s, &["e1".into(), "e2".into()]).unwrap();
        // 2Z + e1 + e2 - vZ at v = 3/2.
        let d = vec![rat(1, 2), rint(1), rint(1)];
        let dec = zariski_decompose(&s, &d, &pool).unwrap();
        assert_eq!(dec.negative, vec![(1, rat(1, 2)), (2, rat(1, 2))]);
        assert_eq!(dec.positive, vec![rat(1, 2), rat(1, 2), rat(1, 2)]);
    }

    #[test]
    fn nef_input_passes_through() {
        let s = dp6();
        let pool = NegativeCurvePool::new(&s, &["e1".into(), "e2".into()]).unwrap();
        let d = vec![rint(2), rint(1), rint(1)];
        let dec = zariski_decompose(&s, &d, &pool).unwrap();
        assert!(dec.negative.is_empty());
        assert_eq!(dec.positive, d);
    }

    #[test]
    fn decomposition_is_idempotent() {
        let s = dp6();
        let pool = NegativeCurvePool::new(&s, &["e1".into(), "e2".into()]).unwrap();
        let d = vec![rat(1, 2), rint(1), rint(1)];
        let dec = zariski_decompose(&s, &d, &pool).unwrap();
        let again = zariski_decompose(&s, &dec.positive, &pool).unwrap();
        assert!(again.negative.is_empty());
        assert_eq!(again.positive, dec.positive);
    }

    fn exceptional_quadric_surface() -> SurfaceLattice {
        // f, g1, g2 with f^2 = 0, f.g_i = 1, g_i^2 = -1, g1.g2 = 0.
        let g = RatMat::new(
            3,
            3,
            vec![
                rint(0),
                rint(1),
                rint(1),
                rint(1),
                rint(-1),
                rint(0),
                rint(1),
                rint(0),
                rint(-1),
            ],
        )
        .unwrap();
        SurfaceLattice::new("F-hat", vec!["f".into(), "g1".into(), "g2".into()], g).unwrap()
    }

    #[test]
    fn exceptional_surface_example() {
        let s = exceptional_quadric_surface();
        let pool = NegativeCurvePool::new(&s, &["g1".into(), "g2".into()]).unwrap();
        // (u - v) f + u (g1 + g2) at (u, v) = (1/2, 1/4).
        let d = vec![rat(1, 4), rat(1, 2), rat(1, 2)];
        let dec = zariski_decompose(&s, &d, &pool).unwrap();
        assert_eq!(dec.negative, vec![(1, rat(1, 4)), (2, rat(1, 4))]);
        // (P)^2 = 2 (u - v)^2 = 1/8.
        let sq = s.pair_consts(&dec.positive, &dec.positive);
        assert_eq!(sq, rat(1, 8));
    }

    #[test]
    fn family_walk_reproduces_the_z_case() {
        let s = dp6();
        let pool = NegativeCurvePool::new(&s, &["e1".into(), "e2".into()]).unwrap();
        let ru = PolyRing::new(vec!["u"]);
        // Base 2Z + e1 + e2 on [0,1]; (3-u)Z + (2-u)(e1+e2) on [1,2]; C = Z.
        let b1 = s
            .path(vec![ru.parse("2").unwrap(), ru.one(), ru.one()])
            .unwrap();
        let b2 = s
            .path(vec![
                ru.parse("3-u").unwrap(),
                ru.parse("2-u").unwrap(),
                ru.parse("2-u").unwrap(),
            ])
            .unwrap();
        let cells = vec![
            (rint(0), rint(1), b1),
            (rint(1), rint(2), b2),
        ];
        let fam = decompose_family(&s, &cells, &[rint(1), rint(0), rint(0)], &pool, "u", "v")
            .unwrap();
        assert_eq!(fam.cells.len(), 2);
        let ruv = PolyRing::new(vec!["u", "v"]);
        // First cell: pieces [0,1] (nef) and [1,2] with N = (v-1)(e1+e2).
        let c0 = &fam.cells[0];
        assert_eq!(c0.vpieces.len(), 2);
        assert_eq!(c0.vpieces[0].v_hi, ru.one());
        assert!(c0.vpieces[0].negative.is_empty());
        assert_eq!(c0.threshold, ru.parse("2").unwrap());
        assert_eq!(
            c0.vpieces[1].negative,
            vec![
                (1, ruv.parse("v-1").unwrap()),
                (2, ruv.parse("v-1").unwrap())
            ]
        );
        // Second cell: threshold 3 - u.
        let c1 = &fam.cells[1];
        assert_eq!(c1.threshold, ru.parse("3-u").unwrap());
        assert_eq!(c1.vpieces.len(), 2);
    }

    #[test]
    fn threshold_curve_merges_cells() {
        let s = exceptional_quadric_surface();
        let pool = NegativeCurvePool::new(&s, &["g1".into(), "g2".into()]).unwrap();
        let ru = PolyRing::new(vec!["u"]);
        let mk = |f: &str, g: &str| {
            s.path(vec![
                ru.parse(f).unwrap(),
                ru.parse(g).unwrap(),
                ru.parse(g).unwrap(),
            ])
            .unwrap()
        };
        let cells = vec![
            (rint(0), rint(1), mk("u", "u")),
            (rint(1), rint(2), mk("u", "1")),
            (rint(2), rint(3), mk("4-u", "1")),
        ];
        let t = pseff_threshold(&s, &cells, &[rint(1), rint(0), rint(0)], &pool, "u", "v")
            .unwrap();
        assert_eq!(t.breakpoints(), &[rint(0), rint(2), rint(3)]);
        assert_eq!(t.pieces()[0], ru.parse("u").unwrap());
        assert_eq!(t.pieces()[1], ru.parse("4-u").unwrap());
    }

    #[test]
    fn ruled_surface_threshold_splits_midway() {
        // Basis s, f with s^2 = f^2 = 0, s.f = 1; no negative curves. The
        // base paths come from restricting a node blow-up schedule; the
        // threshold switches branch strictly inside the second cell.
        let g = RatMat::new(2, 2, vec![rint(0), rint(1), rint(1), rint(0)]).unwrap();
        let s = SurfaceLattice::new("F", vec!["s".into(), "f".into()], g).unwrap();
        let pool = NegativeCurvePool::empty();
        let ru = PolyRing::new(vec!["u"]);
        let cells = vec![
            (
                rint(0),
                rint(1),
                s.path(vec![ru.parse("2*u").unwrap(), ru.parse("3-u").unwrap()])
                    .unwrap(),
            ),
            (
                rint(1),
                rint(2),
                s.path(vec![ru.parse("2").unwrap(), ru.parse("4-2*u").unwrap()])
                    .unwrap(),
            ),
        ];
        let t = pseff_threshold(&s, &cells, &[rint(2), rint(1)], &pool, "u", "v").unwrap();
        assert_eq!(
            t.breakpoints(),
            &[rint(0), rint(1), rat(3, 2), rint(2)]
        );
        assert_eq!(t.pieces()[0], ru.parse("u").unwrap());
        assert_eq!(t.pieces()[1], ru.one());
        assert_eq!(t.pieces()[2], ru.parse("4-2*u").unwrap());
    }

    #[test]
    fn zero_divisor_has_threshold_zero() {
        let s = dp6();
        let pool = NegativeCurvePool::new(&s, &["e1".into(), "e2".into()]).unwrap();
        let ru = PolyRing::new(vec!["u"]);
        let zero = s.path(vec![ru.zero(), ru.zero(), ru.zero()]).unwrap();
        let cells = vec![(rint(0), rint(1), zero)];
        let t = pseff_threshold(&s, &cells, &[rint(1), rint(0), rint(0)], &pool, "u", "v")
            .unwrap();
        assert_eq!(t.pieces(), &[ru.zero()]);
    }

    #[test]
    fn verify_rejects_negative_coefficient() {
        let s = dp6();
        let pool = NegativeCurvePool::new(&s, &["e1".into(), "e2".into()]).unwrap();
        let ru = PolyRing::new(vec!["u"]);
        let d = s
            .path(vec![ru.parse("2").unwrap(), ru.one(), ru.one()])
            .unwrap();
        let schedule = Schedule {
            param: "u".into(),
            pieces: vec![SchedulePiece {
                lo: rint(0),
                hi: rint(1),
                negative: vec![(
                    NamedClass {
                        name: "e1".into(),
                        coeffs: vec![rint(0), rint(1), rint(0)],
                    },
                    ru.parse("-1").unwrap(),
                )],
            }],
        };
        let rep = verify_schedule(
            &VerifyTarget::Surface {
                lattice: &s,
                pool: &pool,
            },
            &schedule,
            &d,
        )
        .unwrap();
        assert!(!rep.pass);
        assert!(rep.first_violation.unwrap().contains("negative"));
    }
}
