use dhl_core::combinatorics::DEFAULT_GUARD;
use dhl_core::gen::{generate, Family, GenKind, GenParams, MatroidSpec};
use dhl_core::instance::{emit_instance, parse_instance};
use dhl_core::rational::{format_rational, parse_rational};
use proptest::prelude::*;

fn kind() -> impl Strategy<Value = GenKind> {
    prop_oneof![
        Just(GenKind::Random),
        Just(GenKind::HypothesisSatisfying),
        Just(GenKind::HalmanSharp),
        Just(GenKind::RadonSharp),
        Just(GenKind::Slab),
    ]
}

fn family() -> impl Strategy<Value = Family> {
    prop_oneof![Just(Family::Boxes), Just(Family::BoxDirections), Just(Family::Simplex)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn generated_instances_round_trip(
        kind in kind(),
        fam in family(),
        dim in 1usize..=3,
        sets in 2usize..=7,
        points in 1usize..=10,
        targets in 1usize..=2,
        colored in any::<bool>(),
        parts in 0usize..=3,
        uniform in prop::option::of(1usize..=3),
        seed in any::<u64>(),
    ) {
        let boxes_only = fam == Family::Boxes;
        let params = GenParams {
            kind,
            dim,
            sets,
            points,
            targets,
            family: fam,
            classes: if colored { 2 } else { 0 },
            parts,
            matroid: uniform.filter(|_| boxes_only && !colored).map(|rank| MatroidSpec::Uniform { rank }),
            slabs: 1 + sets % 3,
            ..GenParams::default()
        };
        let Ok(inst) = generate(&params, seed, DEFAULT_GUARD) else {
            return Ok(());
        };
        let text = emit_instance(&inst);
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(emit_instance(&back), text);
        let again = generate(&params, seed, DEFAULT_GUARD).unwrap();
        prop_assert_eq!(emit_instance(&again), emit_instance(&inst));
    }

    #[test]
    fn parser_never_panics(text in "\\PC{0,200}") {
        let _ = parse_instance(&text);
        let _ = parse_rational(&text);
    }

    #[test]
    fn rational_text_is_canonical(num in any::<i64>(), den in 1i64..=i64::MAX) {
        let text = format!("{num}/{den}");
        let r = parse_rational(&text).unwrap();
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }
}
