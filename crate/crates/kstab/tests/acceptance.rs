//! Acceptance suite: every published value the toolkit must reproduce,
//! one criterion per test, all comparisons exact.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see one
//! PASS line per criterion.

use kstab::exact::{parse_rational, rat, rint, PiecewisePoly, Poly, PolyRing, RatMat, Rational};
use kstab::git::{
    classify, enumerate_classification, verify_action_samples, ClaimedEntry, StabilityClass,
    Support, TorusAction,
};
use kstab::scenario::{parse_scenario, run_scenario, verify_all, Report, Verdict};
use kstab::zariski::{zariski_decompose, NegativeCurvePool};
use kstab::lattice::{SurfaceLattice, ThreefoldLattice};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

fn scenario_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn suite() -> Report {
    verify_all(&scenario_dir(), 4).expect("scenario suite runs")
}

fn entry<'a>(report: &'a Report, id: &str) -> &'a kstab::scenario::ReportEntry {
    report
        .entries
        .iter()
        .find(|e| e.id == id)
        .unwrap_or_else(|| panic!("scenario `{}` missing from the suite", id))
}

fn assert_value(report: &Report, id: &str, what: &str) {
    let e = entry(report, id);
    assert!(
        e.verdict != Verdict::Mismatch,
        "{}: scenario `{}` mismatched: computed {}, expected {}",
        what,
        id,
        e.computed,
        e.expected
    );
}

fn load(id: &str) -> kstab::scenario::ScenarioFile {
    let path = scenario_dir().join(format!("{}.json", id));
    let text = std::fs::read_to_string(&path).expect("scenario file readable");
    parse_scenario(id, &text).expect("scenario parses")
}

#[test]
fn criterion_01_cone_vertex_beta() {
    let report = suite();
    let e = entry(&report, "beth.cone.beta-f");
    assert_eq!(e.verdict, Verdict::Match);
    assert!(e.computed.contains("beta = -3/52"), "got {}", e.computed);
    println!("criterion 1 PASS: beta(F) = -3/52 for the cone-vertex blow-up");
}

#[test]
fn criterion_02_divisorial_integrals() {
    let report = suite();
    for (id, val) in [
        ("beth.eff-cone.s-h", "21/52"),
        ("beth.eff-cone.s-e1e2", "53/208"),
        ("beth.eff-cone.s-conic", "49/104"),
    ] {
        let e = entry(&report, id);
        assert_eq!(e.verdict, Verdict::Match);
        assert!(e.computed.contains(val), "{}: got {}", id, e.computed);
    }
    println!("criterion 2 PASS: divisorial S-integrals 21/52, 53/208, 49/104");
}

#[test]
fn criterion_03_pencil_surface_delta_bound() {
    let report = suite();
    let checks = [
        ("beth.pencil.s-x-s", "S = 3/4"),
        ("beth.pencil.flag-z.surface", "3/4"),
        ("beth.pencil.flag-l1.surface", "99/104"),
        ("beth.pencil.flag-z.point", "21/26"),
        ("beth.pencil.flag-l1.point-off", "37/52"),
        ("beth.pencil.flag-l1.point-on", "99/104"),
        ("beth.pencil.delta-bound", "104/99"),
    ];
    for (id, val) in checks {
        let e = entry(&report, id);
        assert_eq!(e.verdict, Verdict::Match, "{}: {}", id, e.computed);
        assert!(e.computed.contains(val), "{}: got {}", id, e.computed);
    }
    println!(
        "criterion 3 PASS: S_X(S) = 3/4, S(W;C) = 3/4 and 99/104, S(W;P) = 21/26, 37/52, 99/104, delta bound 104/99"
    );
}

#[test]
fn criterion_04_node_blowup() {
    let report = suite();
    let e = entry(&report, "beth.node.beta-f");
    assert_eq!(e.verdict, Verdict::Match);
    assert!(e.computed.contains("S = 99/52") && e.computed.contains("beta = 5/52"));
    let e = entry(&report, "beth.node.flag-fiber.surface");
    assert_eq!(e.verdict, Verdict::Match);
    assert!(e.computed.contains("29/52"));
    // The three-stage schedule verifies with the exact stage volumes; the
    // third stage is flagged because the published display disagrees with
    // its own total.
    let e = entry(&report, "beth.node.schedule");
    assert_eq!(e.verdict, Verdict::Flagged);
    assert!(e.computed.contains("pass = true"));
    assert!(e.computed.contains("2*u^3"));
    assert!(e.computed.contains("6*u^2"), "got {}", e.computed);
    println!(
        "criterion 4 PASS: S_X(F) = 99/52, beta(F) = 5/52, S(W;f) = 29/52, three-stage schedule verified (third integrand flagged against the published display)"
    );
}

#[test]
fn criterion_05_singular_curve_case() {
    let report = suite();
    let e = entry(&report, "beth.curve.beta-f");
    assert_eq!(e.verdict, Verdict::Match);
    assert!(e.computed.contains("beta = 1/26"));
    // 49/54 vs 49/104 is recorded as flagged, never silently resolved.
    let e = entry(&report, "beth.curve.s-surface");
    assert_eq!(e.verdict, Verdict::Flagged);
    assert!(e.computed.contains("49/104"));
    assert!(e.flag_note.as_deref().unwrap_or("").contains("49/54"));
    assert_value(&report, "beth.curve.flag-f-z.ord0", "ord 0");
    assert_value(&report, "beth.curve.flag-f-z.ord1", "ord 1");
    assert!(entry(&report, "beth.curve.flag-f-z.ord0").computed.contains("33/104"));
    assert!(entry(&report, "beth.curve.flag-f-z.ord1").computed.contains("49/104"));
    assert!(entry(&report, "beth.curve.flag-s-z.ord0").computed.contains("51/104"));
    assert!(entry(&report, "beth.curve.flag-s-z.ord1").computed.contains("25/26"));

    // S(W^F;Z) is affine in the declared order: ord = 1/2 must land
    // exactly halfway, at 2/13 * 1/2 + 33/104 = 41/104.
    let mut file = load("beth.curve.flag-f-z.ord1");
    file.inputs["ord"]["pieces"] = serde_json::json!(["0", "1/2*(u-1)"]);
    file.expected = serde_json::json!({"value": "41/104"});
    let entry = run_scenario(&file).expect("modified scenario runs");
    assert_eq!(entry.verdict, Verdict::Match, "{}", entry.computed);
    println!(
        "criterion 5 PASS: beta(F) = 1/26, surface integral 49/104 (flagged vs 49/54), S(W^F;Z) = (2/13) ord + 33/104, S(W;Z) = (49 ord + 51)/104"
    );
}

#[test]
fn criterion_06_second_family() {
    let report = suite();
    let e = entry(&report, "aleph.two-nodes.flag-z.surface");
    assert_eq!(e.verdict, Verdict::Match);
    assert!(e.computed.contains("3/4"));
    let e = entry(&report, "aleph.double-line.beta-s");
    assert_eq!(e.verdict, Verdict::Match);
    assert!(e.computed.contains("beta = 3/52"));
    println!("criterion 6 PASS: two-node flag S(W^S;Z) = 3/4 and double-line beta(S) = 3/52");
}

fn first_action() -> TorusAction {
    TorusAction::new(
        2,
        vec![
            "alpha".into(),
            "beta".into(),
            "gamma".into(),
            "delta".into(),
            "epsilon".into(),
        ],
        vec![
            vec![0, 0],
            vec![1, 1],
            vec![1, -1],
            vec![-1, 1],
            vec![-1, -1],
        ],
    )
    .unwrap()
}

fn second_action() -> TorusAction {
    TorusAction::new(
        2,
        vec!["alpha".into(), "f1".into(), "f2".into(), "g1".into(), "g2".into()],
        vec![
            vec![-4, -4],
            vec![2, 0],
            vec![2, 0],
            vec![0, 2],
            vec![0, 2],
        ],
    )
    .unwrap()
}

#[test]
fn criterion_07_git_tables() {
    let report = suite();
    assert_eq!(entry(&report, "git.first.table").verdict, Verdict::Match);
    assert_eq!(entry(&report, "git.second.table").verdict, Verdict::Match);

    // Structural characterizations, independent of the golden rows.
    let a = first_action();
    let table = enumerate_classification(&a).unwrap();
    let patterns: [&[usize]; 4] = [&[3, 4], &[2, 4], &[1, 3], &[1, 2]];
    for (s, class) in &table.rows {
        let idx = s.indices();
        let in_pattern = patterns
            .iter()
            .any(|p| idx.iter().all(|i| p.contains(i)));
        assert_eq!(
            *class == StabilityClass::Unstable,
            in_pattern,
            "unstable iff inside one of the four coordinate patterns: {:?}",
            idx
        );
        let has_all = [1usize, 2, 3, 4].iter().all(|i| idx.contains(i));
        assert_eq!(*class == StabilityClass::Stable, has_all);
    }
    let polystable: Vec<Vec<usize>> = table
        .rows
        .iter()
        .filter(|(_, c)| *c == StabilityClass::PolystableNotStable)
        .map(|(s, _)| s.indices().to_vec())
        .collect();
    assert_eq!(
        polystable,
        vec![
            vec![0],
            vec![1, 4],
            vec![2, 3],
            vec![0, 1, 4],
            vec![0, 2, 3],
        ]
    );

    let b = second_action();
    let table = enumerate_classification(&b).unwrap();
    assert!(!table
        .counts
        .contains_key(&StabilityClass::SemistableNotPolystable));
    assert!(!table.counts.contains_key(&StabilityClass::PolystableNotStable));
    for (s, class) in &table.rows {
        let idx = s.indices();
        let stable = idx.contains(&0)
            && (idx.contains(&1) || idx.contains(&2))
            && (idx.contains(&3) || idx.contains(&4));
        assert_eq!(*class == StabilityClass::Stable, stable);
    }
    println!(
        "criterion 7 PASS: first-quotient table matches the four unstable patterns and the stability rule; second quotient has no strictly semistable supports"
    );
}

#[test]
fn criterion_08_invariant_monomials() {
    let report = suite();
    assert_eq!(entry(&report, "git.first.monomials").verdict, Verdict::Match);
    let e = entry(&report, "git.second.monomials");
    assert_eq!(e.verdict, Verdict::Match);
    assert_eq!(e.computed.matches("alpha").count(), 9);
    println!("criterion 8 PASS: invariants alpha^2, beta*epsilon, gamma*delta and the nine quintic generators");
}

#[test]
fn criterion_09_discriminants() {
    let report = suite();
    assert_eq!(entry(&report, "beth.discriminant.fiber").verdict, Verdict::Match);
    assert_eq!(entry(&report, "aleph.discriminant.fiber").verdict, Verdict::Match);
    assert_eq!(entry(&report, "aleph.discriminant.double").verdict, Verdict::Match);
    println!(
        "criterion 9 PASS: fiber discriminants proportional to the published curves; the two components coincide at [r:s] = [0:1]"
    );
}

#[test]
fn criterion_10_jacobian_singular_loci() {
    let report = suite();
    let singular = [
        "beth.sing.node-app",
        "beth.sing.node-apm",
        "beth.sing.node-amp",
        "beth.sing.node-amm",
        "beth.sing.curve-point",
        "aleph.sing.node-first",
        "aleph.sing.node-second",
        "aleph.sing.node-extra",
        "aleph.sing.curve-point",
    ];
    for id in singular {
        let e = entry(&report, id);
        assert!(e.verdict != Verdict::Mismatch, "{}: {}", id, e.computed);
        assert_eq!(e.computed, "2", "{} should drop rank", id);
    }
    for id in ["beth.sing.smooth-point", "aleph.sing.smooth-point"] {
        let e = entry(&report, id);
        assert_eq!(e.verdict, Verdict::Match);
        assert_eq!(e.computed, "3", "{} should have full rank", id);
    }
    println!(
        "criterion 10 PASS: Jacobian rank drops at every listed singular point and is full at the sampled smooth points"
    );
}

#[test]
fn criterion_11_oracle_equivalence() {
    // Every scenario that carries a declared schedule is re-derived by the
    // decomposition walk; a piece-for-piece difference would have failed
    // the scenario. Re-assert here against the trace marker.
    let report = suite();
    let declared = [
        "beth.pencil.flag-z.surface",
        "beth.pencil.flag-l1.surface",
        "beth.node.flag-fiber.surface",
        "beth.curve.flag-f-z.ord0",
        "beth.curve.flag-s-z.ord0",
        "aleph.two-nodes.flag-z.surface",
    ];
    for id in declared {
        let e = entry(&report, id);
        assert!(e.verdict != Verdict::Mismatch, "{}: {}", id, e.computed);
        assert!(
            e.trace
                .iter()
                .any(|t| t.contains("reproduces the declared schedule piece for piece")),
            "{} lacks the oracle-equivalence trace",
            id
        );
    }
    println!(
        "criterion 11 PASS: the decomposition walk reproduces every declared surface schedule piece for piece"
    );
}

#[test]
fn action_samples_certify_second_quotient_weights() {
    // The diagonalized weights used for the second table come from
    // conjugating the published matrix family by the eigenbasis change.
    let matrix_at = |l: &Rational, m: &Rational| {
        let l2 = l * l;
        let m2 = m * m;
        let plus = rint(2) * (&l2 + &m2);
        let minus = rint(2) * (&l2 - &m2);
        let alpha = rint(4) / (&l2 * &l2 * &m2 * &m2);
        let z = rint(0);
        RatMat::new(
            5,
            5,
            vec![
                alpha,
                z.clone(),
                z.clone(),
                z.clone(),
                z.clone(),
                z.clone(),
                plus.clone(),
                z.clone(),
                z.clone(),
                minus.clone(),
                z.clone(),
                z.clone(),
                minus.clone(),
                plus.clone(),
                z.clone(),
                z.clone(),
                z.clone(),
                plus.clone(),
                minus.clone(),
                z.clone(),
                z.clone(),
                minus,
                z.clone(),
                z.clone(),
                plus,
            ],
        )
        .unwrap()
    };
    // Rows express (alpha, beta+eps, gamma+delta, beta-eps, gamma-delta).
    let basis_change = RatMat::new(
        5,
        5,
        [
            [1, 0, 0, 0, 0],
            [0, 1, 0, 0, 1],
            [0, 0, 1, 1, 0],
            [0, 1, 0, 0, -1],
            [0, 0, 1, -1, 0],
        ]
        .iter()
        .flatten()
        .map(|&x| rint(x))
        .collect(),
    )
    .unwrap();
    let claimed = vec![
        ClaimedEntry {
            coefficient: rint(4),
            lambda_power: -4,
            mu_power: -4,
        },
        ClaimedEntry {
            coefficient: rint(4),
            lambda_power: 2,
            mu_power: 0,
        },
        ClaimedEntry {
            coefficient: rint(4),
            lambda_power: 2,
            mu_power: 0,
        },
        ClaimedEntry {
            coefficient: rint(4),
            lambda_power: 0,
            mu_power: 2,
        },
        ClaimedEntry {
            coefficient: rint(-4),
            lambda_power: 0,
            mu_power: 2,
        },
    ];
    let samples = [(rint(2), rint(3)), (rint(5), rint(7))];
    assert!(verify_action_samples(matrix_at, &basis_change, &claimed, &samples).unwrap());

    // A wrong claimed weight must be rejected.
    let mut wrong = claimed.clone();
    wrong[1].lambda_power = 0;
    assert!(!verify_action_samples(matrix_at, &basis_change, &wrong, &samples).unwrap());
    println!("second-quotient eigenweights certified at rational samples");
}

#[test]
fn suite_is_clean_and_complete() {
    let report = suite();
    assert!(report.entries.len() >= 30, "suite has {} scenarios", report.entries.len());
    assert_eq!(report.mismatches, 0, "no scenario may mismatch");
    let flagged: Vec<&str> = report
        .entries
        .iter()
        .filter(|e| e.verdict == Verdict::Flagged)
        .map(|e| e.id.as_str())
        .collect();
    assert_eq!(
        flagged,
        vec![
            "beth.curve.s-surface",
            "beth.node.schedule",
            "beth.quadric.rank-generic",
            "beth.quadric.rank-node",
            "beth.sing.node-amm",
            "beth.sing.node-amp",
        ],
        "exactly the known source discrepancies are flagged"
    );
    println!(
        "suite: {} scenarios, {} match, {} flagged, 0 mismatch",
        report.entries.len(),
        report.matches,
        report.flagged
    );
}

#[test]
fn every_shipped_threefold_has_anticanonical_cube_26() {
    let dir = scenario_dir();
    let mut checked = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().map(|e| e != "json").unwrap_or(true) {
            continue;
        }
        let text = std::fs::read_to_string(&path).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        let blocks = [
            v.get("inputs").and_then(|i| i.get("lattice")).map(|_| v["inputs"].clone()),
            v.get("inputs").and_then(|i| i.get("threefold")).cloned(),
        ];
        for block in blocks.into_iter().flatten() {
            let lat = &block["lattice"];
            let basis: Vec<String> = lat["basis"]
                .as_array()
                .unwrap()
                .iter()
                .map(|s| s.as_str().unwrap().to_string())
                .collect();
            let triples = lat["triples"]
                .as_array()
                .unwrap()
                .iter()
                .map(|t| {
                    let a = t.as_array().unwrap();
                    (
                        a[0].as_str().unwrap().to_string(),
                        a[1].as_str().unwrap().to_string(),
                        a[2].as_str().unwrap().to_string(),
                        parse_rational(a[3].as_str().unwrap()).unwrap(),
                    )
                })
                .collect();
            let lattice = ThreefoldLattice::new("L", basis, triples).unwrap();
            let minus_k: Vec<Rational> = block["minus_k"]
                .as_array()
                .unwrap()
                .iter()
                .map(|s| parse_rational(s.as_str().unwrap()).unwrap())
                .collect();
            assert_eq!(
                lattice.cube_const(&minus_k).unwrap(),
                rint(26),
                "anticanonical cube in {:?}",
                path.file_name()
            );
            checked += 1;
        }
    }
    assert!(checked >= 10, "only {} threefold blocks found", checked);
    println!("anticanonical cube is 26 in all {} shipped threefold blocks", checked);
}

// ---------------------------------------------------------------------------
// Criterion 12: randomized property suites, 1000 cases each.
// ---------------------------------------------------------------------------

use num_traits::Zero;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

fn runner() -> TestRunner {
    TestRunner::new(Config {
        cases: 1000,
        failure_persistence: None,
        ..Config::default()
    })
}

fn arb_rational() -> impl Strategy<Value = Rational> {
    (-200i64..200, 1i64..60).prop_map(|(p, q)| rat(p, q))
}

#[test]
fn criterion_12a_rational_field_axioms() {
    runner()
        .run(
            &(arb_rational(), arb_rational(), arb_rational()),
            |(a, b, c)| {
                prop_assert_eq!(&(&(&a + &b) + &c), &(&a + &(&b + &c)));
                prop_assert_eq!(&(&a * &b), &(&b * &a));
                prop_assert_eq!(
                    &(&a * &(&b + &c)),
                    &(&(&a * &b) + &(&a * &c))
                );
                prop_assert_eq!(&(&a - &a), &rint(0));
                if !a.is_zero() {
                    prop_assert_eq!(&(&a * &(rint(1) / &a)), &rint(1));
                }
                Ok(())
            },
        )
        .unwrap();
    println!("criterion 12 PASS (field axioms, 1000 cases)");
}

fn arb_poly(ring: &PolyRing) -> impl Strategy<Value = Poly> {
    let ring = ring.clone();
    proptest::collection::vec(-9i64..10, 4).prop_map(move |cs| {
        let u = ring.var(ring.vars()[0].as_str()).unwrap();
        let mut acc = ring.zero();
        for (k, c) in cs.iter().enumerate() {
            acc = &acc + &u.pow(k as u32).scale(&rint(*c));
        }
        acc
    })
}

#[test]
fn criterion_12b_integral_additivity_and_moments() {
    let ring = PolyRing::new(vec!["u"]);
    let strat = (
        arb_poly(&ring),
        arb_poly(&ring),
        -6i64..6,
        1i64..5,
        1i64..5,
        1i64..4,
    );
    runner()
        .run(&strat, |(p1, p2, start, w1, w2, denom)| {
            let a = rat(start, denom);
            let b = &a + rat(w1, denom);
            let c = &b + rat(w2, denom);
            let f = PiecewisePoly::new(
                "u",
                vec![a.clone(), b.clone(), c.clone()],
                vec![p1.clone(), p2.clone()],
                false,
            )
            .unwrap();
            // Additivity over any subdivision point.
            let mid = (&a + &c) / rint(2);
            let whole = f.integrate(&a, &c).unwrap();
            let split = f.integrate(&a, &mid).unwrap() + f.integrate(&mid, &c).unwrap();
            prop_assert_eq!(&whole, &split);
            // Against the direct moment formula, computed independently of
            // the antiderivative code path.
            let mut direct = Rational::zero();
            for (piece, (lo, hi)) in [(&p1, (&a, &b)), (&p2, (&b, &c))] {
                for (mono, coeff) in piece.terms() {
                    let k = mono.degree() as i64;
                    let moment = (pow_rat(hi, k + 1) - pow_rat(lo, k + 1)) / rint(k + 1);
                    direct += coeff * &moment;
                }
            }
            prop_assert_eq!(&whole, &direct);
            Ok(())
        })
        .unwrap();
    println!("criterion 12 PASS (integral additivity + moment oracle, 1000 cases)");
}

fn pow_rat(x: &Rational, e: i64) -> Rational {
    let mut acc = rint(1);
    for _ in 0..e {
        acc *= x;
    }
    acc
}

#[test]
fn criterion_12c_intersection_multilinearity() {
    // Random sparse trilinear forms on three classes; check symmetry under
    // permutation of arguments and linearity in the first slot.
    let strat = (
        proptest::collection::vec(-5i64..6, 10),
        proptest::collection::vec(-4i64..5, 18),
    );
    runner()
        .run(&strat, |(table, coeffs)| {
            let names = ["A", "B", "C"];
            let mut entries = Vec::new();
            let mut k = 0;
            for i in 0..3 {
                for j in i..3 {
                    for l in j..3 {
                        entries.push((
                            names[i].to_string(),
                            names[j].to_string(),
                            names[l].to_string(),
                            rint(table[k]),
                        ));
                        k += 1;
                    }
                }
            }
            let lat = ThreefoldLattice::new(
                "rand",
                names.iter().map(|s| s.to_string()).collect(),
                entries,
            )
            .unwrap();
            let ring = PolyRing::new(vec!["u"]);
            let u = ring.var("u").unwrap();
            let mk = |cs: &[i64]| {
                lat.path(
                    cs.chunks(2)
                        .map(|ab| &ring.constant(rint(ab[0])) + &u.scale(&rint(ab[1])))
                        .collect(),
                )
                .unwrap()
            };
            let d1 = mk(&coeffs[0..6]);
            let d2 = mk(&coeffs[6..12]);
            let d3 = mk(&coeffs[12..18]);
            let t123 = lat.triple_eval(&d1, &d2, &d3).unwrap();
            prop_assert_eq!(&t123, &lat.triple_eval(&d2, &d1, &d3).unwrap());
            prop_assert_eq!(&t123, &lat.triple_eval(&d3, &d2, &d1).unwrap());
            // Linearity: T(d1 + d2, d2, d3) = T(d1, d2, d3) + T(d2, d2, d3).
            let sum = d1.add(&d2);
            let lhs = lat.triple_eval(&sum, &d2, &d3).unwrap();
            let rhs = &t123 + &lat.triple_eval(&d2, &d2, &d3).unwrap();
            prop_assert_eq!(&lhs, &rhs);

            // Bilinear forms: symmetry and linearity through a symmetric
            // Gram matrix assembled from the same raw data.
            let gram = RatMat::new(
                3,
                3,
                vec![
                    rint(table[0]),
                    rint(table[1]),
                    rint(table[2]),
                    rint(table[1]),
                    rint(table[3]),
                    rint(table[4]),
                    rint(table[2]),
                    rint(table[4]),
                    rint(table[5]),
                ],
            )
            .unwrap();
            let surf = SurfaceLattice::new(
                "rand-surface",
                names.iter().map(|s| s.to_string()).collect(),
                gram,
            )
            .unwrap();
            let mks = |cs: &[i64]| {
                surf.path(
                    cs.chunks(2)
                        .map(|ab| &ring.constant(rint(ab[0])) + &u.scale(&rint(ab[1])))
                        .collect(),
                )
                .unwrap()
            };
            let c1 = mks(&coeffs[0..6]);
            let c2 = mks(&coeffs[6..12]);
            let c3 = mks(&coeffs[12..18]);
            let p12 = surf.pair_eval(&c1, &c2).unwrap();
            prop_assert_eq!(&p12, &surf.pair_eval(&c2, &c1).unwrap());
            let lhs = surf.pair_eval(&c1.add(&c3), &c2).unwrap();
            let rhs = &p12 + &surf.pair_eval(&c3, &c2).unwrap();
            prop_assert_eq!(&lhs, &rhs);
            Ok(())
        })
        .unwrap();
    println!("criterion 12 PASS (trilinear symmetry and linearity, 1000 cases)");
}

fn del_pezzo() -> SurfaceLattice {
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
fn criterion_12d_zariski_postconditions() {
    let s = del_pezzo();
    let pool = NegativeCurvePool::new(&s, &["e1".into(), "e2".into()]).unwrap();
    let strat = (
        0i64..8,
        0i64..8,
        0i64..8,
        0i64..8,
        1i64..4,
        (0i64..6, 1i64..6),
        (0i64..6, 1i64..6),
    );
    runner()
        .run(&strat, |(nef, z, e1, e2, den, v1, v2)| {
            // Effective, hence pseudoeffective, input class.
            let d = vec![
                rat(nef + z, den),
                rat(nef + e1, den),
                rat(nef + e2, den),
            ];
            let dec = zariski_decompose(&s, &d, &pool).unwrap();
            // P + N = D, N >= 0, P orthogonal to active classes, P nef on
            // the pool (re-checked here; the call also self-checks).
            let mut total = dec.positive.clone();
            for (i, c) in &dec.negative {
                prop_assert!(*c >= rint(0));
                total[*i] += c;
            }
            prop_assert_eq!(&total, &d);
            // Idempotence.
            let again = zariski_decompose(&s, &dec.positive, &pool).unwrap();
            prop_assert!(again.negative.is_empty());
            prop_assert_eq!(&again.positive, &dec.positive);
            // Volume is non-increasing along the ray D - vZ, sampled inside
            // the range where the class stays effective (beyond it, failure
            // against a non-pool class is the documented pool limitation).
            let budget = rat(nef + z, den);
            let (va, vb) = {
                let x = &budget * rat(v1.0, 6) / rat(v1.1, 1).max(rint(1));
                let y = &budget * rat(v2.0, 6) / rat(v2.1, 1).max(rint(1));
                let x = x.min(budget.clone());
                let y = y.min(budget.clone());
                if x <= y {
                    (x, y)
                } else {
                    (y, x)
                }
            };
            let ray = |v: &Rational| {
                let mut dd = d.clone();
                dd[0] -= v;
                zariski_decompose(&s, &dd, &pool)
            };
            if let (Ok(da), Ok(db)) = (ray(&va), ray(&vb)) {
                let vol_a = s.pair_consts(&da.positive, &da.positive);
                let vol_b = s.pair_consts(&db.positive, &db.positive);
                prop_assert!(vol_a >= vol_b);
            }
            Ok(())
        })
        .unwrap();
    println!("criterion 12 PASS (decomposition postconditions, 1000 cases)");
}

#[test]
fn criterion_12e_git_partition_and_invariance() {
    let strat = (
        proptest::collection::vec((-3i64..4, -3i64..4), 2..6),
        proptest::num::u8::ANY,
    );
    runner()
        .run(&strat, |(mut weights, mask)| {
            // Duplicate the first weight so an equal-weight swap exists.
            let first = weights[0];
            weights.push(first);
            let n = weights.len();
            let coords: Vec<String> = (0..n).map(|i| format!("x{}", i)).collect();
            let action = TorusAction::new(
                2,
                coords.clone(),
                weights.iter().map(|&(a, b)| vec![a, b]).collect(),
            )
            .unwrap();
            let bits = (mask as usize) % ((1 << n) - 1) + 1;
            let indices: Vec<usize> = (0..n).filter(|i| bits & (1 << i) != 0).collect();
            let support = Support::new(indices.clone(), n).unwrap();
            let class = classify(&action, &support).unwrap();

            // Exactly one class is assigned; negating the torus preserves it.
            let negated = TorusAction::new(
                2,
                coords.clone(),
                weights.iter().map(|&(a, b)| vec![-a, -b]).collect(),
            )
            .unwrap();
            prop_assert_eq!(classify(&negated, &support).unwrap(), class);

            // Swapping the two equal-weight coordinates preserves it.
            let swapped: Vec<usize> = indices
                .iter()
                .map(|&i| {
                    if i == 0 {
                        n - 1
                    } else if i == n - 1 {
                        0
                    } else {
                        i
                    }
                })
                .collect();
            let support2 = Support::new(swapped, n).unwrap();
            prop_assert_eq!(classify(&action, &support2).unwrap(), class);
            Ok(())
        })
        .unwrap();
    println!("criterion 12 PASS (GIT partition and invariances, 1000 cases)");
}

#[test]
fn criterion_12f_report_determinism() {
    // Assembly determinism on randomized entry sets.
    use kstab::scenario::ReportEntry;
    let strat = proptest::collection::vec(("[a-z]{3,10}", 0u8..3), 1..12);
    runner()
        .run(&strat, |items| {
            let entries: Vec<ReportEntry> = items
                .iter()
                .map(|(id, v)| ReportEntry {
                    id: id.clone(),
                    kind: "delta".into(),
                    computed: "1".into(),
                    expected: "1".into(),
                    verdict: match v {
                        0 => Verdict::Match,
                        1 => Verdict::Mismatch,
                        _ => Verdict::Flagged,
                    },
                    provenance: "randomized".into(),
                    flag_note: None,
                    trace: vec![],
                })
                .collect();
            let mut reversed = entries.clone();
            reversed.reverse();
            let a = Report::from_entries(entries).render_table();
            let b = Report::from_entries(reversed).render_table();
            prop_assert_eq!(a, b);
            Ok(())
        })
        .unwrap();

    // The real suite renders byte-identically for any thread count.
    let one = verify_all(&scenario_dir(), 1).unwrap().render_table();
    for threads in [2, 4, 8] {
        let other = verify_all(&scenario_dir(), threads).unwrap().render_table();
        assert_eq!(one, other, "report differs with {} threads", threads);
    }
    println!("criterion 12 PASS (report determinism, 1000 cases + thread counts 1/2/4/8)");
}

#[test]
fn criterion_12g_substitution_composes_with_evaluation() {
    let ring = PolyRing::new(vec!["u"]);
    let uv = PolyRing::new(vec!["u", "v"]);
    let strat = (arb_poly(&ring), arb_poly(&ring), arb_rational(), arb_rational());
    runner()
        .run(&strat, |(p, q, x, y)| {
            // Substitute u -> q(u) - v, then evaluate, against evaluating
            // the composed map directly.
            let image = &q.embed(&uv).unwrap() - &uv.var("v").unwrap();
            let mut map = BTreeMap::new();
            map.insert("u".to_string(), image);
            let composed = p.substitute(&map).unwrap();
            let mut point = BTreeMap::new();
            point.insert("u".to_string(), x.clone());
            point.insert("v".to_string(), y.clone());
            let lhs = composed.evaluate(&point).unwrap();
            let inner = q.eval_univar(&x).unwrap() - &y;
            let rhs = p.eval_univar(&inner).unwrap();
            prop_assert_eq!(lhs, rhs);
            Ok(())
        })
        .unwrap();
    println!("criterion 12 PASS (substitution/evaluation compatibility, 1000 cases)");
}

#[test]
fn criterion_12h_matrix_inverse_roundtrip() {
    let strat = proptest::collection::vec(-9i64..10, 16);
    runner()
        .run(&strat, |cs| {
            let m = RatMat::new(4, 4, cs.iter().map(|&c| rint(c)).collect()).unwrap();
            match m.inverse() {
                Ok(inv) => {
                    prop_assert_eq!(m.mul(&inv).unwrap(), RatMat::identity(4));
                    let det = m.determinant().unwrap();
                    let det_inv = inv.determinant().unwrap();
                    prop_assert_eq!(&det * &det_inv, rint(1));
                }
                Err(_) => {
                    prop_assert_eq!(m.determinant().unwrap(), rint(0));
                }
            }
            Ok(())
        })
        .unwrap();
    println!("criterion 12 PASS (exact inverse round trip, 1000 cases)");
}
