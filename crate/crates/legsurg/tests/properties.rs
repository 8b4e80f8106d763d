mod common;

use common::{apply, classical, diagram_and_move, key, small_diagram};
use legsurg::front::LegendrianFront;
use legsurg::invariants::{evaluate, first_homology, unit_fraction_invariants};
use legsurg::kirby::handle_slide;
use legsurg::rational::{format_rational, parse_rational, rat};
use legsurg::surgery::{NormalStyle, SurgeryDiagram};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn moves_preserve_invariants((d, mv) in diagram_and_move(4)) {
        let before = key(&d);
        for after in apply(&d, &mv).unwrap() {
            prop_assert_eq!(&before, &key(&after));
        }
    }

    #[test]
    fn slide_then_opposite_slide_restores_the_classical_data(d in small_diagram(4), i in 0usize..4, j in 0usize..4, up in any::<bool>()) {
        prop_assume!(i < d.len() && j < d.len() && i != j);
        let eps = if up { 1 } else { -1 };
        let there = handle_slide(&d, i, j, eps).unwrap();
        let back = handle_slide(&there, i, j, -eps).unwrap();
        prop_assert_eq!(back.linking(), d.linking());
        for (a, b) in back.components().iter().zip(d.components()) {
            prop_assert_eq!((a.tb, a.rot, &a.coeff), (b.tb, b.rot, &b.coeff));
        }
    }

    #[test]
    fn pushoff_expansion_matches_direct_evaluation(d in small_diagram(3)) {
        prop_assert_eq!(key(&d), key(&d.expand_unit_fractions().unwrap()));
    }

    #[test]
    fn compact_and_expanded_normal_forms_agree((tb, rot) in classical(-4, 2), p in -9i64..=9, q in 1i64..=4) {
        prop_assume!(p != 0);
        let d = SurgeryDiagram::knot(tb, rot, rat(p, q)).unwrap();
        let compact = evaluate(&d).unwrap().summary();
        let forms = d.normalize(NormalStyle::Expanded).unwrap();
        prop_assert_eq!(forms.len() as u64, d.branch_count().unwrap());
        let mut orbits = Vec::new();
        let mut d3s = Vec::new();
        for f in &forms {
            prop_assert!(f.diagram.components().iter().all(|c| c.coeff == rat(1, 1) || c.coeff == rat(-1, 1)));
            let (h, b) = unit_fraction_invariants(&f.diagram).unwrap();
            prop_assert_eq!(h.factors(), first_homology(&d).unwrap().factors());
            orbits.push(b.orbit);
            d3s.push(b.d3);
        }
        orbits.sort();
        d3s.sort();
        prop_assert_eq!(compact.euler, orbits);
        prop_assert_eq!(compact.d3, d3s);
    }

    #[test]
    fn diagram_json_round_trips(d in small_diagram(4)) {
        let text = serde_json::to_string(&d).unwrap();
        let back = SurgeryDiagram::from_json(&text).unwrap();
        prop_assert_eq!(&back, &d);
        prop_assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }

    #[test]
    fn rationals_format_canonically(p in -500i64..=500, q in 1i64..=500) {
        let r = rat(p, q);
        let s = format_rational(&r);
        prop_assert_eq!(parse_rational(&s).unwrap(), r.clone());
        let (num, den) = s.split_once('/').unwrap();
        prop_assert!(den.parse::<i64>().unwrap() > 0);
        prop_assert_eq!(num.parse::<i64>().unwrap() * q, p * den.parse::<i64>().unwrap());
    }

    #[test]
    fn stabilization_lowers_tb_and_moves_rot(signs in proptest::collection::vec(prop_oneof![Just(1i8), Just(-1i8)], 0..5)) {
        let base = LegendrianFront::right_trefoil();
        let inv0 = base.classical_invariants().unwrap();
        let f = base.stabilize_many(0, &signs).unwrap();
        let inv = f.classical_invariants().unwrap();
        prop_assert_eq!(inv.tb, inv0.tb - signs.len() as i64);
        let shift: i64 = signs.iter().map(|&s| i64::from(s)).sum();
        prop_assert_eq!((inv.rot_signed - inv0.rot_signed).abs(), shift.abs());
    }
}
