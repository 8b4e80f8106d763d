//! Acceptance suite: prints one `PASS`/`FAIL` line per criterion.
//!
//! Runs without the libtest harness so the lines always reach the log.  The
//! process fails only when a criterion's outcome differs from the recorded
//! expectation in `EXPECTED_FAILURES` — a criterion that is known not to
//! hold keeps printing `FAIL` with the computed evidence, and any change in
//! either direction is flagged.

mod common;

use std::time::{Duration, Instant};

use common::{apply, diagram_and_move, fixture, key, read_fixture, rotations};
use legsurg::invariants::{
    d3, d3_value, evaluate, first_homology, trace_double_parity, unit_fraction_invariants, D3Value, EulerOrbit,
};
use legsurg::kirby::{annulus_twist_family, rgb_resolve, AnnulusPresentation, RgbData, RgbSide};
use legsurg::poly::{alexander, conway_to_alexander, homfly, homfly_to_conway, LaurentPoly, PdCode};
use legsurg::rational::{format_rational, rat, rat_int, to_i64, Int, Rational};
use legsurg::slope::{
    check_characterizing, d3_diophantine, euler_obstruction, overtwisted_equality, Equality, KnotClass, Outcome,
    PipelineOptions,
};
use legsurg::surgery::{NormalStyle, SurgeryComponent, SurgeryDiagram};
use num_traits::Zero;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

/// Criteria whose statements do not hold for this implementation, with the
/// reason.  Everything else must pass.
const EXPECTED_FAILURES: &[(u32, &str)] = &[
    (2, "no planar-diagram transcription of L1 is available; only L0 can be checked term-for-term"),
    (6, "for k = 1 the candidate rot′ = 6 has 6 ≡ 0 (mod 6), so the Euler class does not eliminate it"),
    (11, "the two (+6)-surgeries have equal homology and Euler data but d3 differs (0 vs 1)"),
];

struct Verdict {
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Verdict { pass, detail: detail.into() }
    }
}

fn knot_d3(t: i64, r: i64, coeff: Rational) -> Rational {
    let d = SurgeryDiagram::knot(t, r, coeff).expect("knot diagram");
    d3_value(&d3(&d).expect("d3 evaluates")[0]).expect("torsion Euler class")
}

fn sign(x: i64) -> i64 {
    x.signum()
}

// ---------------------------------------------------------------------------

fn closed_form_sweep() -> Verdict {
    let mut checked = 0usize;
    let mut mismatches = Vec::new();
    let mut check = |label: &str, t: i64, r: i64, got: Rational, want: Rational| {
        checked += 1;
        if got != want && mismatches.len() < 5 {
            mismatches.push(format!("{label} t={t} r={r}: {} vs {}", format_rational(&got), format_rational(&want)));
        }
    };
    for t in -30i64..=2 {
        for r in rotations(t) {
            if t < 1 {
                // Contact (−1), same tb.
                let want = rat(-r * r + 1 - t, 4 * (1 - t));
                check("(-1)", t, r, knot_d3(t, r, rat_int(-1)), want);
                // Contact (−1), the partner branch tb′ = 2 − t.
                let tp = 2 - t;
                for rp in rotations(tp) {
                    let want = rat(rp * rp - 5 + 5 * t, 4 * (1 - t));
                    check("(-1)′", tp, rp, knot_d3(tp, rp, rat_int(-1)), want);
                }
            }
            if t < -1 {
                // Contact (+1), same tb.
                let want = -rat(-r * r - 5 - 5 * t, 4 * (1 + t));
                check("(+1)", t, r, knot_d3(t, r, rat_int(1)), want);
                // Contact (+1), the partner branch tb′ = −t − 2.
                let tp = -t - 2;
                for rp in rotations(tp) {
                    let want = -rat(rp * rp + 1 + t, 4 * (1 + t));
                    check("(+1)′", tp, rp, knot_d3(tp, rp, rat_int(1)), want);
                }
            }
            for n in 1i64..=6 {
                for s in [1i64, -1] {
                    let denom = s + n * t;
                    if denom == 0 {
                        continue;
                    }
                    let want = (rat(n * r * r, denom) + rat_int(s * (3 - n)) - rat_int(3 * sign(denom))) / rat_int(4);
                    check(if s > 0 { "(+1/n)" } else { "(-1/n)" }, t, r, knot_d3(t, r, rat(s, n)), want);
                }
            }
        }
    }
    if mismatches.is_empty() {
        Verdict::new(true, format!("{checked} evaluations agree with the closed forms"))
    } else {
        Verdict::new(false, format!("{checked} evaluations, mismatches: {}", mismatches.join("; ")))
    }
}

fn printed_p_l0() -> LaurentPoly {
    LaurentPoly::from_terms(
        &["l", "m"],
        &[
            (vec![-6, 4], 1),
            (vec![-2, 2], 1),
            (vec![-4, 2], -2),
            (vec![-6, 2], -3),
            (vec![-8, 2], -1),
            (vec![-2, 0], -1),
            (vec![-4, 0], 2),
            (vec![-6, 0], 3),
            (vec![-8, 0], 1),
        ],
    )
}

fn printed_p_l1() -> LaurentPoly {
    LaurentPoly::from_terms(
        &["l", "m"],
        &[
            (vec![-14, 4], 1),
            (vec![-2, 2], 1),
            (vec![-4, 2], -1),
            (vec![-6, 2], 1),
            (vec![-8, 2], -1),
            (vec![-14, 2], -4),
            (vec![-16, 2], -1),
            (vec![-2, 0], -1),
            (vec![-8, 0], 1),
            (vec![-14, 0], 3),
            (vec![-16, 0], 2),
        ],
    )
}

fn homfly_reproduction() -> Verdict {
    let pd0: PdCode = serde_json::from_str(&read_fixture("L0.pd.json")).expect("L0 PD parses");
    let h0 = homfly(&pd0).expect("homfly(L0)");
    let a0 = alexander(&pd0).expect("alexander(L0)");
    let l0_ok = h0 == printed_p_l0();
    let mut notes = vec![format!("L0: homfly {} printed polynomial", if l0_ok { "equals" } else { "differs from" })];

    let l1_ok = if fixture("L1.pd.json").exists() {
        let pd1: PdCode = serde_json::from_str(&read_fixture("L1.pd.json")).expect("L1 PD parses");
        let h1 = homfly(&pd1).expect("homfly(L1)");
        let a1 = alexander(&pd1).expect("alexander(L1)");
        notes.push(format!(
            "L1: homfly {}, alexander {}",
            if h1 == printed_p_l1() { "equals printed" } else { "differs" },
            if a1 == a0 { "equals alexander(L0)" } else { "differs from alexander(L0)" }
        ));
        h1 == printed_p_l1() && a1 == a0
    } else {
        notes.push("L1: no PD transcription available".into());
        false
    };

    // Partial evidence without an L1 diagram: the Alexander polynomial implied
    // by the printed p(L1) against the computed one of L0.
    let implied = homfly_to_conway(&printed_p_l1()).map(|c| conway_to_alexander(&c));
    notes.push(match implied {
        Some(a) if a == a0 => format!("Alexander implied by printed p(L1) = alexander(L0) = {a0}"),
        Some(a) => format!("Alexander implied by printed p(L1) = {a}, alexander(L0) = {a0}"),
        None => "printed p(L1) has no Conway specialization".into(),
    });
    notes.push(format!("homfly(L0) ≠ printed p(L1): {}", h0 != printed_p_l1()));
    Verdict::new(l0_ok && l1_ok, notes.join("; "))
}

fn euler_example() -> Verdict {
    let classes = |rot: i64| -> (Vec<i64>, Vec<i64>) {
        let d = SurgeryDiagram::knot(-3, rot, rat_int(-2)).unwrap();
        let e = evaluate(&d).unwrap();
        let h: Vec<i64> = e.homology.factors().iter().map(|x| to_i64(x).unwrap()).collect();
        let mut c: Vec<i64> = e.branches.iter().map(|b| to_i64(&b.euler[0]).unwrap()).collect();
        c.sort();
        (h, c)
    };
    let (h2, c2) = classes(2);
    let (h0, c0) = classes(0);
    // {3, 1} and {1, −1} in Z/5.
    let pass = h2 == [5] && h0 == [5] && c2 == [1, 3] && c0 == [1, 4];
    Verdict::new(pass, format!("rot 2: {c2:?} in Z/{h2:?}; rot 0: {c0:?} (= {{1, -1}}) in Z/{h0:?}"))
}

fn annulus_family() -> Verdict {
    let p: AnnulusPresentation = serde_json::from_str(&read_fixture("ln_family.json")).expect("presentation parses");
    let mut d3s: Vec<Vec<D3Value>> = Vec::new();
    let mut ok = true;
    for n in 0..=12u64 {
        let e = evaluate(&annulus_twist_family(&p, n).unwrap()).unwrap();
        ok &= e.homology.factors() == [Int::zero()];
        ok &= e.branches.iter().all(|b| b.euler_vector.iter().all(Zero::is_zero));
        d3s.push(e.branches.iter().map(|b| b.d3.clone()).collect());
    }
    let constant = d3s.windows(2).all(|w| w[0] == w[1]);
    let d3 = d3s[0].iter().map(D3Value::to_string).collect::<Vec<_>>().join(", ");
    Verdict::new(ok && constant, format!("n = 0..=12: H1 = Z, e = 0: {ok}; d3 = {{{d3}}} for every n: {constant}"))
}

fn slope_sweep() -> Verdict {
    let mut survivors = Vec::new();
    let mut total = 0;
    for class in ["fig8", "lh_trefoil"] {
        let class = KnotClass::builtin(class).unwrap();
        for t in -10..=-1 {
            for r in class.rotations_at(t) {
                let report = check_characterizing(&class, t, r, &rat_int(-1), PipelineOptions::default()).unwrap();
                total += 1;
                if !report.survivors().is_empty() {
                    survivors.push((report.query.class.clone(), t, r, report.survivors().to_vec()));
                }
            }
        }
    }
    let pass = survivors.len() == 1 && {
        let (_, t, r, c) = &survivors[0];
        (*t, *r) == (-5, 0) && c.iter().all(|c| c.rot == 6)
    };
    Verdict::new(pass, format!("{total} realizable knots; survivors: {survivors:?}"))
}

fn euler_family() -> Verdict {
    let mut parts = Vec::new();
    let mut all = true;
    for k in 1i64..=5 {
        let t = 1 - 6 * k * k;
        let tp = 2 - t;
        let rp = 6 * k;
        let d3_partner = d3_diophantine(t, 0, &rat_int(-1), tp).unwrap().is_some_and(|c| c.solutions.contains(&rp));
        let e = euler_obstruction(t, 0, tp, rp, &rat_int(-1)).unwrap();
        let eliminated = e.outcome == Outcome::Eliminated;
        all &= eliminated;
        parts.push(format!(
            "k={k} (t={t}, r′={rp}, d3 match {d3_partner}): {}",
            if eliminated { "eliminated" } else { "survives" }
        ));
    }
    Verdict::new(all, parts.join("; "))
}

fn rgb_family() -> Verdict {
    let mut ok = true;
    let mut tbs = Vec::new();
    for n in 0..=8u64 {
        let data = RgbData::family(n);
        let g = rgb_resolve(&data, RgbSide::G).unwrap();
        let b = rgb_resolve(&data, RgbSide::B).unwrap();
        let expect = 2 * n as i64 - 6;
        ok &= g.tb == expect && b.tb == expect;
        let dg = SurgeryDiagram::single(g.clone()).unwrap();
        let db = SurgeryDiagram::single(b.clone()).unwrap();
        ok &= key(&dg) == key(&db);
        tbs.push(g.tb);
    }
    Verdict::new(ok, format!("tb(K_G) = tb(K_B) = {tbs:?}; invariants of both resolutions agree: {ok}"))
}

fn trace_parity() -> Verdict {
    let (m, odd) = trace_double_parity(0, 1, 1);
    Verdict::new(m == [[1, 1], [1, 0]] && odd, format!("{m:?}, odd = {odd}"))
}

/// `(H1, sorted Euler orbits, sorted d3)` through the fully expanded (±1)
/// normal forms.
fn expanded_key(d: &SurgeryDiagram) -> (Vec<Int>, Vec<EulerOrbit>, Vec<D3Value>) {
    let mut orbits = Vec::new();
    let mut d3s = Vec::new();
    let mut h1 = None;
    for form in d.normalize(NormalStyle::Expanded).unwrap() {
        let (h, b) = unit_fraction_invariants(&form.diagram).unwrap();
        h1.get_or_insert(h.factors());
        orbits.push(b.orbit);
        d3s.push(b.d3);
    }
    orbits.sort();
    d3s.sort();
    (h1.unwrap(), orbits, d3s)
}

fn normalization_consistency() -> Verdict {
    let mut diagrams: Vec<(String, SurgeryDiagram)> = Vec::new();
    for name in ["trefoil_plus6", "trefoil_minus7_2", "trefoil_5_3"] {
        let d = SurgeryDiagram::from_json(&read_fixture(&format!("diagrams/{name}.json"))).unwrap();
        diagrams.push((name.into(), d));
    }
    let l0 = legsurg::front::LegendrianFront::from_json(&read_fixture("L0.front.json")).unwrap();
    for (p, q) in [(6, 1), (-7, 2), (5, 3)] {
        let c = rat(p, q);
        diagrams.push((format!("unknot {}", format_rational(&c)), SurgeryDiagram::knot(-1, 0, c.clone()).unwrap()));
        let k = SurgeryComponent::from_front(l0.clone(), c.clone()).unwrap();
        diagrams.push((format!("L0 {}", format_rational(&c)), SurgeryDiagram::single(k).unwrap()));
    }
    let mut bad = Vec::new();
    for (name, d) in &diagrams {
        let compact = evaluate(d).unwrap();
        let s = compact.summary();
        let (h1, orbits, d3s) = expanded_key(d);
        if first_homology(d).unwrap().factors() != h1 || s.euler != orbits || s.d3 != d3s {
            bad.push(name.clone());
        }
    }
    // ±1/n: direct evaluation against the push-off expansion.
    for (p, q) in [(1, 2), (-1, 3), (1, 4), (-1, 5)] {
        let d = SurgeryDiagram::knot(-2, 1, rat(p, q)).unwrap();
        if key(&d) != key(&d.expand_unit_fractions().unwrap()) {
            bad.push(format!("push-off {p}/{q}"));
        }
    }
    // Branch cardinalities.
    let count = |c: Rational| {
        let d = SurgeryDiagram::knot(-2, 1, c).unwrap();
        let n = d.branch_count().unwrap();
        assert_eq!(n as usize, d.normalize(NormalStyle::Compact).unwrap().len());
        n
    };
    let mut counts_ok = true;
    for n in 1i64..=6 {
        counts_ok &= count(rat(1, n)) == 1 && count(rat(-1, n)) == 1;
        counts_ok &= count(rat_int(-n)) == n as u64;
        if n > 1 {
            counts_ok &= count(rat_int(n)) == 2;
        }
    }
    Verdict::new(
        bad.is_empty() && counts_ok,
        format!(
            "{} diagrams compared (compact vs expanded), mismatches {bad:?}; branch counts 1 / 2 / |n|: {counts_ok}",
            diagrams.len()
        ),
    )
}

fn move_invariance() -> Verdict {
    let mut runner = TestRunner::new_with_rng(
        Config { cases: 500, failure_persistence: None, ..Config::default() },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    );
    let result = runner.run(&diagram_and_move(4), |(d, mv)| {
        let before = key(&d);
        for after in apply(&d, &mv).map_err(|e| proptest::test_runner::TestCaseError::fail(e.to_string()))? {
            proptest::prop_assert_eq!(&before, &key(&after), "move {:?}", mv);
        }
        Ok(())
    });
    match result {
        Ok(()) => Verdict::new(true, "500 random diagrams: cancel/introduce/slide preserve (H1, Euler, d3)"),
        Err(e) => Verdict::new(false, format!("counterexample: {e}")),
    }
}

fn overtwisted_example() -> Verdict {
    let r = overtwisted_equality(-11, 0, -1, 0, &rat_int(6)).unwrap();
    let d3 = |v: &[D3Value]| v.iter().map(D3Value::to_string).collect::<Vec<_>>().join(", ");
    Verdict::new(
        r.result == Equality::Contactomorphic,
        format!(
            "|H1| = {:?}; Euler orders {:?}; d3 {{{}}} vs {{{}}}; result {:?}",
            r.homology_order,
            r.euler_orders,
            d3(&r.d3[0]),
            d3(&r.d3[1]),
            r.result
        ),
    )
}

// ---------------------------------------------------------------------------

struct Criterion {
    id: u32,
    title: &'static str,
    budget: Duration,
    run: fn() -> Verdict,
}

fn main() {
    let criteria = [
        Criterion { id: 1, title: "d3 closed forms", budget: Duration::from_secs(10), run: closed_form_sweep },
        Criterion { id: 2, title: "HOMFLY reproduction", budget: Duration::from_secs(60), run: homfly_reproduction },
        Criterion { id: 3, title: "Euler class at contact (-2)", budget: Duration::from_secs(1), run: euler_example },
        Criterion { id: 4, title: "annulus-twist family", budget: Duration::from_secs(5), run: annulus_family },
        Criterion { id: 5, title: "slope -1 sweep", budget: Duration::from_secs(5), run: slope_sweep },
        Criterion { id: 6, title: "Euler obstruction family", budget: Duration::from_secs(1), run: euler_family },
        Criterion { id: 7, title: "RGB family", budget: Duration::from_secs(5), run: rgb_family },
        Criterion { id: 8, title: "trace-double parity", budget: Duration::from_secs(1), run: trace_parity },
        Criterion {
            id: 9,
            title: "normalization consistency",
            budget: Duration::from_secs(10),
            run: normalization_consistency,
        },
        Criterion { id: 10, title: "move invariance", budget: Duration::from_secs(60), run: move_invariance },
        Criterion { id: 11, title: "overtwisted equality", budget: Duration::from_secs(1), run: overtwisted_example },
    ];

    let mut unexpected = Vec::new();
    for c in &criteria {
        let start = Instant::now();
        let v = (c.run)();
        let elapsed = start.elapsed();
        let in_time = elapsed <= c.budget;
        let pass = v.pass && in_time;
        let timing = if in_time {
            format!("{:.2}s", elapsed.as_secs_f64())
        } else {
            format!("{:.2}s, over the {}s budget", elapsed.as_secs_f64(), c.budget.as_secs())
        };
        println!(
            "criterion {:>2}: {} — {} ({timing}) — {}",
            c.id,
            if pass { "PASS" } else { "FAIL" },
            c.title,
            v.detail
        );
        let known = EXPECTED_FAILURES.iter().find(|(id, _)| *id == c.id);
        match (pass, known) {
            (false, Some((_, why))) => println!("              known: {why}"),
            (true, Some(_)) => unexpected.push(format!("criterion {} now passes; update EXPECTED_FAILURES", c.id)),
            (false, None) => unexpected.push(format!("criterion {} fails", c.id)),
            (true, None) => {}
        }
    }
    let passed = criteria.len() - EXPECTED_FAILURES.len();
    if unexpected.is_empty() {
        println!("acceptance: {passed}/{} criteria pass; {} known failures", criteria.len(), EXPECTED_FAILURES.len());
    } else {
        for u in &unexpected {
            println!("acceptance: UNEXPECTED: {u}");
        }
        std::process::exit(1);
    }
}
