//! Fujita and Abban-Zhuang invariants from decomposition schedules.
//!
//! All values are exact rationals obtained by integrating the volume
//! polynomials of verified schedules:
//!
//! * `s_invariant` / `beta`: the expected vanishing order
//!   `S = (1/V) * integral of vol` and `beta = A - S` for a divisor over
//!   the threefold,
//! * `s_w2`: the surface-level functional built from an order term and a
//!   double integral of `(P(u,v))^2`,
//! * `s_w3`: the point-level functional built from `(P(u,v) . C)^2` and the
//!   multiplicity of the point in the relevant negative parts,
//! * `delta_lower_bound`: the minimum of `A/S` ratios.

use crate::exact::{format_rational, PiecewisePoly, Poly, PolyRing, Rational};
use crate::lattice::{
    CurveFunctional, DivisorPath, LatticeError, RestrictionMap, SurfaceLattice, ThreefoldLattice,
};
use crate::zariski::{
    decompose_family, verify_schedule, FamilySchedule, NegativeCurvePool, Schedule,
    ScheduleReport, VerifyTarget, ZariskiError,
};
use num_traits::{Signed, Zero};

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum StabilityError {
    #[error("declared volume {declared} does not match the cube {computed} at parameter 0")]
    VolumeMismatch { declared: String, computed: String },
    #[error("schedule failed verification: {0}")]
    UnverifiedSchedule(String),
    #[error("schedule window must start at 0, found {0}")]
    WindowNotAtZero(String),
    #[error("window mismatch: {0}")]
    WindowMismatch(String),
    #[error("nonpositive S value {0} in a delta bound")]
    NonpositiveS(String),
    #[error("order data must be nonnegative, found {0}")]
    NegativeOrdData(String),
    #[error("point claimed on disjoint curves `{0}` and `{1}`")]
    InconsistentMembership(String, String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Zariski(#[from] ZariskiError),
    #[error(transparent)]
    Exact(#[from] crate::exact::ExactError),
}

/// Threefold-side data shared by the Fujita and flag computations: the
/// lattice, the anticanonical class, the divisor being tested, and the
/// declared decomposition schedule of `-K - u D`.
#[derive(Debug, Clone)]
pub struct ThreefoldSetup {
    pub lattice: ThreefoldLattice,
    pub minus_k: Vec<Rational>,
    pub divisor_class: Vec<Rational>,
    pub volume: Rational,
    pub schedule: Schedule,
    pub test_curves: Vec<CurveFunctional>,
}

impl ThreefoldSetup {
    pub fn param(&self) -> &str {
        &self.schedule.param
    }

    /// `-K - u D` as a divisor path.
    pub fn path(&self) -> Result<DivisorPath, StabilityError> {
        let ring = PolyRing::new(vec![self.param()]);
        let u = ring.var(self.param())?;
        let coeffs = self
            .minus_k
            .iter()
            .zip(self.divisor_class.iter())
            .map(|(k, d)| &ring.constant(k.clone()) - &u.scale(d))
            .collect();
        Ok(self.lattice.path(coeffs)?)
    }

    /// Cross-checks the normalizer against the cube of `-K`, verifies the
    /// schedule, and returns the per-piece volume polynomials.
    pub fn verified_volumes(
        &self,
    ) -> Result<(Vec<(Rational, Rational, Poly)>, ScheduleReport), StabilityError> {
        let cube = self.lattice.cube_const(&self.minus_k)?;
        if cube != self.volume {
            return Err(StabilityError::VolumeMismatch {
                declared: format_rational(&self.volume),
                computed: format_rational(&cube),
            });
        }
        let (w0, _) = self.schedule.window();
        if !w0.is_zero() {
            return Err(StabilityError::WindowNotAtZero(format_rational(&w0)));
        }
        let d = self.path()?;
        let report = verify_schedule(
            &VerifyTarget::Threefold {
                lattice: &self.lattice,
                curves: &self.test_curves,
            },
            &self.schedule,
            &d,
        )?;
        if !report.pass {
            return Err(StabilityError::UnverifiedSchedule(
                report.first_violation.clone().unwrap_or_default(),
            ));
        }
        let mut out = Vec::new();
        for (piece, vol) in self.schedule.pieces.iter().zip(report.volumes.iter()) {
            out.push((piece.lo.clone(), piece.hi.clone(), vol.clone()));
        }
        Ok((out, report))
    }

    /// Restriction of the positive parts to a surface, one path per piece.
    pub fn restricted_positive_parts(
        &self,
        map: &RestrictionMap,
        surface: &SurfaceLattice,
    ) -> Result<Vec<(Rational, Rational, DivisorPath)>, StabilityError> {
        let d = self.path()?;
        let mut out = Vec::new();
        for (k, piece) in self.schedule.pieces.iter().enumerate() {
            let p = self.schedule.positive_part(&d, k)?;
            let restricted = map.restrict(&p, surface)?;
            out.push((piece.lo.clone(), piece.hi.clone(), restricted));
        }
        Ok(out)
    }
}

/// Inputs for a single `beta`/`S` computation.
#[derive(Debug, Clone)]
pub struct FujitaScenario {
    pub setup: ThreefoldSetup,
    pub log_discrepancy: Rational,
}

/// Exact result with the per-interval derivation trace.
#[derive(Debug, Clone)]
pub struct FujitaResult {
    pub s_value: Rational,
    pub beta_value: Rational,
    pub trace: Vec<String>,
}

/// `S = (1/V) * sum of integrals of the piece volumes`.
pub fn s_invariant(sc: &FujitaScenario) -> Result<FujitaResult, StabilityError> {
    let (volumes, _) = sc.setup.verified_volumes()?;
    let mut total = Rational::zero();
    let mut trace = Vec::new();
    for (lo, hi, vol) in &volumes {
        let part = vol.integrate(lo, hi)?;
        trace.push(format!(
            "integral of {} over [{}, {}] = {}",
            vol,
            format_rational(lo),
            format_rational(hi),
            format_rational(&part)
        ));
        total += part;
    }
    let s_value = &total / &sc.setup.volume;
    let beta_value = &sc.log_discrepancy - &s_value;
    trace.push(format!(
        "S = {} / {} = {}",
        format_rational(&total),
        format_rational(&sc.setup.volume),
        format_rational(&s_value)
    ));
    Ok(FujitaResult {
        s_value,
        beta_value,
        trace,
    })
}

/// `beta = A - S`.
pub fn beta(sc: &FujitaScenario) -> Result<FujitaResult, StabilityError> {
    s_invariant(sc)
}

/// Surface flag data: the restriction to a surface, the curve cut down,
/// declared order data, and optionally externally declared schedules for
/// oracle comparison.
#[derive(Debug, Clone)]
pub struct FlagScenario {
    pub setup: ThreefoldSetup,
    pub surface: SurfaceLattice,
    pub restriction: RestrictionMap,
    pub curve_name: String,
    pub curve_class: Vec<Rational>,
    pub pool: NegativeCurvePool,
    /// Declared `ord_C(N(u)|_S)` as a piecewise polynomial over the window.
    pub ord_term: PiecewisePoly,
    /// Declared surface schedules to compare against the computed ones.
    pub declared: Option<FamilySchedule>,
    /// Declared pseudoeffective threshold `t(u)`.
    pub declared_threshold: Option<PiecewisePoly>,
    /// Negative-part components containing the point, with the local
    /// intersection multiplicity along the curve (third-step data).
    pub membership: Vec<(String, Rational)>,
    /// Declared `ord_P(N'(u)|_C)` term for the third step.
    pub ord_nprime: Option<PiecewisePoly>,
}

/// Result of the surface-level functional.
#[derive(Debug, Clone)]
pub struct FlagResult {
    pub value: Rational,
    pub ord_part: Rational,
    pub integral_part: Rational,
    pub family: FamilySchedule,
    pub threshold: PiecewisePoly,
    /// Outcome of comparing the computed schedules with the declared ones.
    pub oracle: Option<Result<(), String>>,
    pub trace: Vec<String>,
}

fn check_ord_nonneg(f: &PiecewisePoly) -> Result<(), StabilityError> {
    // Order functions are nonnegative: sample each piece at its endpoints
    // and midpoint.
    for (i, p) in f.pieces().iter().enumerate() {
        let lo = &f.breakpoints()[i];
        let hi = &f.breakpoints()[i + 1];
        let mid = (lo + hi) / crate::exact::rint(2);
        for x in [lo.clone(), mid, hi.clone()] {
            let v = p.eval_univar(&x)?;
            if v.is_negative() {
                return Err(StabilityError::NegativeOrdData(format_rational(&v)));
            }
        }
    }
    Ok(())
}

/// Shared part of the flag computations: verify the threefold schedule,
/// restrict, decompose the family in `v`, and compare with declarations.
fn flag_family(flag: &FlagScenario) -> Result<(FamilySchedule, PiecewisePoly, Option<Result<(), String>>), StabilityError> {
    let cells = flag
        .setup
        .restricted_positive_parts(&flag.restriction, &flag.surface)?;
    let uvar = flag.setup.param().to_string();
    let vvar = if uvar == "v" { "w".to_string() } else { "v".to_string() };
    let family = decompose_family(
        &flag.surface,
        &cells,
        &flag.curve_class,
        &flag.pool,
        &uvar,
        &vvar,
    )?;
    let mut breakpoints = vec![family.cells[0].u_lo.clone()];
    let mut tpieces = Vec::new();
    for c in &family.cells {
        breakpoints.push(c.u_hi.clone());
        tpieces.push(c.threshold.clone());
    }
    let threshold = PiecewisePoly::new(&uvar, breakpoints, tpieces, true)?.simplify();
    let mut oracle = None;
    if let Some(declared) = &flag.declared {
        oracle = Some(family.same_as(declared));
    }
    if let Some(t) = &flag.declared_threshold {
        let matches = &threshold == &t.clone().simplify();
        let entry = if matches {
            Ok(())
        } else {
            Err(format!(
                "threshold differs: computed {}, declared {}",
                threshold, t
            ))
        };
        oracle = Some(match oracle {
            Some(Ok(())) | None => entry,
            Some(Err(e)) => Err(e),
        });
    }
    Ok((family, threshold, oracle))
}

/// The surface functional: `(3/V) * [ integral of (P(u)|_S)^2 ord_C(N(u)|_S)
/// + double integral of (P(u,v))^2 ]`.
pub fn s_w2(flag: &FlagScenario) -> Result<FlagResult, StabilityError> {
    let (volumes, _) = flag.setup.verified_volumes()?;
    let window = (
        volumes.first().unwrap().0.clone(),
        volumes.last().unwrap().1.clone(),
    );
    let (od_lo, od_hi) = flag.ord_term.domain();
    if od_lo != &window.0 || od_hi != &window.1 {
        return Err(StabilityError::WindowMismatch(format!(
            "ord data on [{}, {}], schedule on [{}, {}]",
            format_rational(od_lo),
            format_rational(od_hi),
            format_rational(&window.0),
            format_rational(&window.1)
        )));
    }
    check_ord_nonneg(&flag.ord_term)?;

    let (family, threshold, oracle) = flag_family(flag)?;
    let mut trace = vec![format!(
        "negative parts and thresholds certified relative to the declared candidate pool ({} classes)",
        flag.pool.candidates().len()
    )];

    // Order term: (P(u)|_S)^2 * ord_C(N(u)|_S), integrated in u.
    let cells = flag
        .setup
        .restricted_positive_parts(&flag.restriction, &flag.surface)?;
    let mut ord_part = Rational::zero();
    for (lo, hi, base) in &cells {
        let sq = flag.surface.square(base)?;
        let part = integrate_against(&sq, lo, hi, &flag.ord_term)?;
        ord_part += part;
    }
    trace.push(format!("order term integral = {}", format_rational(&ord_part)));

    // Double integral of (P(u,v))^2 over v in [v_lo, v_hi], u in the cell.
    let uvar = family.uvar.clone();
    let vvar = family.vvar.clone();
    let mut integral_part = Rational::zero();
    for cell in &family.cells {
        for piece in &cell.vpieces {
            let sq = square_on(&flag.surface, &piece.positive)?;
            let inner = sq.integrate_in(&vvar, &piece.v_lo, &piece.v_hi)?;
            let inner_u = inner.project(&PolyRing::new(vec![uvar.as_str()]))?;
            let part = inner_u.integrate(&cell.u_lo, &cell.u_hi)?;
            trace.push(format!(
                "integral of {} for v in [{}, {}], u in [{}, {}] = {}",
                sq,
                piece.v_lo,
                piece.v_hi,
                format_rational(&cell.u_lo),
                format_rational(&cell.u_hi),
                format_rational(&part)
            ));
            integral_part += part;
        }
    }
    let value = (&ord_part + &integral_part) * crate::exact::rint(3) / &flag.setup.volume;
    trace.push(format!("S(W;C) = {}", format_rational(&value)));
    Ok(FlagResult {
        value,
        ord_part,
        integral_part,
        family,
        threshold,
        oracle,
        trace,
    })
}

/// The point functional: `(3/V) * double integral of (P(u,v).C)^2 + (6/V) *
/// double integral of (P(u,v).C) * ord_P(N'(u)|_C + N(u,v)|_C)`.
pub fn s_w3(flag: &FlagScenario) -> Result<FlagResult, StabilityError> {
    let (_, _) = flag.setup.verified_volumes()?;
    // Membership flags must name pairwise non-disjoint curves.
    for (i, (a, _)) in flag.membership.iter().enumerate() {
        for (b, _) in flag.membership.iter().skip(i + 1) {
            let ia = flag.surface.class_index(a)?;
            let ib = flag.surface.class_index(b)?;
            if flag.surface.gram().at(ia, ib).is_zero() {
                return Err(StabilityError::InconsistentMembership(a.clone(), b.clone()));
            }
        }
    }
    if let Some(f) = &flag.ord_nprime {
        check_ord_nonneg(f)?;
    }

    let (family, threshold, oracle) = flag_family(flag)?;
    let uvar = family.uvar.clone();
    let vvar = family.vvar.clone();
    let ring_u = PolyRing::new(vec![uvar.as_str()]);
    let mut trace = Vec::new();

    let mut first = Rational::zero();
    let mut second = Rational::zero();
    for cell in &family.cells {
        for piece in &cell.vpieces {
            let pc = pair_class_on(&flag.surface, &piece.positive, &flag.curve_class)?;
            // (P . C)^2 part.
            let sq = &pc * &pc;
            let inner = sq.integrate_in(&vvar, &piece.v_lo, &piece.v_hi)?;
            let part = inner.project(&ring_u)?.integrate(&cell.u_lo, &cell.u_hi)?;
            first += part;

            // ord part: contributions of components through the point.
            let mut ordp = pc.ring().zero();
            for (name, mult) in &flag.membership {
                let idx = flag.surface.class_index(name)?;
                for (i, coeff) in &piece.negative {
                    if *i == idx {
                        ordp = &ordp + &coeff.scale(mult);
                    }
                }
            }
            if let Some(f) = &flag.ord_nprime {
                let on_cell = piece_on(f, &cell.u_lo, &cell.u_hi)?;
                ordp = &ordp + &on_cell.embed(pc.ring())?;
            }
            if !ordp.is_zero() {
                let integrand = &pc * &ordp;
                let inner = integrand.integrate_in(&vvar, &piece.v_lo, &piece.v_hi)?;
                let part = inner.project(&ring_u)?.integrate(&cell.u_lo, &cell.u_hi)?;
                trace.push(format!(
                    "ord contribution {} for v in [{}, {}], u in [{}, {}] = {}",
                    integrand,
                    piece.v_lo,
                    piece.v_hi,
                    format_rational(&cell.u_lo),
                    format_rational(&cell.u_hi),
                    format_rational(&part)
                ));
                second += part;
            }
        }
    }
    let v = &flag.setup.volume;
    let value = &(&first * crate::exact::rint(3) / v) + &(&second * crate::exact::rint(6) / v);
    trace.push(format!(
        "S(W;P) = 3/V * {} + 6/V * {} = {}",
        format_rational(&first),
        format_rational(&second),
        format_rational(&value)
    ));
    Ok(FlagResult {
        value,
        ord_part: second,
        integral_part: first,
        family,
        threshold,
        oracle,
        trace,
    })
}

/// `min A_i / S_i` over the entries; every `S` must be positive.
pub fn delta_lower_bound(entries: &[(Rational, Rational)]) -> Result<Rational, StabilityError> {
    let mut best: Option<Rational> = None;
    for (a, s) in entries {
        if !s.is_positive() {
            return Err(StabilityError::NonpositiveS(format_rational(s)));
        }
        let ratio = a / s;
        best = Some(match best {
            None => ratio,
            Some(b) => b.min(ratio),
        });
    }
    best.ok_or_else(|| StabilityError::NonpositiveS("empty entry list".into()))
}

fn square_on(surface: &SurfaceLattice, coeffs: &[Poly]) -> Result<Poly, StabilityError> {
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

fn pair_class_on(
    surface: &SurfaceLattice,
    coeffs: &[Poly],
    class: &[Rational],
) -> Result<Poly, StabilityError> {
    let ring = coeffs[0].ring().clone();
    let mut acc = ring.zero();
    for i in 0..coeffs.len() {
        for j in 0..class.len() {
            let g = surface.gram().at(i, j);
            if g.is_zero() || class[j].is_zero() {
                continue;
            }
            acc = &acc + &coeffs[i].scale(&(g * &class[j]));
        }
    }
    Ok(acc)
}

/// The single polynomial of `f` covering `[lo, hi]`; the interval must not
/// straddle a breakpoint.
fn piece_on(f: &PiecewisePoly, lo: &Rational, hi: &Rational) -> Result<Poly, StabilityError> {
    for (i, p) in f.pieces().iter().enumerate() {
        if &f.breakpoints()[i] <= lo && hi <= &f.breakpoints()[i + 1] {
            return Ok(p.clone());
        }
    }
    Err(StabilityError::WindowMismatch(format!(
        "interval [{}, {}] straddles breakpoints of {}",
        format_rational(lo),
        format_rational(hi),
        f
    )))
}

/// Integrates `g(u) * f(u)` where `g` is a polynomial on `[lo, hi]` and `f`
/// is piecewise; the product is integrated piece by piece.
fn integrate_against(
    g: &Poly,
    lo: &Rational,
    hi: &Rational,
    f: &PiecewisePoly,
) -> Result<Rational, StabilityError> {
    let mut cuts: Vec<Rational> = vec![lo.clone(), hi.clone()];
    for b in f.breakpoints() {
        if b > lo && b < hi {
            cuts.push(b.clone());
        }
    }
    cuts.sort();
    cuts.dedup();
    let mut acc = Rational::zero();
    for w in cuts.windows(2) {
        let piece = piece_on(f, &w[0], &w[1])?;
        let prod = g * &piece.embed(g.ring())?;
        acc += prod.integrate(&w[0], &w[1])?;
    }
    Ok(acc)
}
