//! Property tests: grammar round-trips, word-to-permutation homomorphism,
//! codec round-trips, and action equivariance on random configurations.

use cubology::codec::{assemble, extract, sample_configuration, AssemblyModel};
use cubology::engine::{apply, compile, LabelledState};
use cubology::geometry::{build_layout, Face, Gen};
use cubology::law::{validate, validate_complete};
use cubology::notation::{parse, render, MoveWord};
use proptest::prelude::*;

fn arb_word() -> impl Strategy<Value = MoveWord> {
    let face = (0..6usize).prop_map(|f| MoveWord::Gen(Gen::Face(Face::ALL[f])));
    let slice = ((0..6usize), (1..=2u8))
        .prop_map(|(f, k)| MoveWord::Gen(Gen::Slice(Face::ALL[f], k)));
    let leaf = prop_oneof![face, slice];
    leaf.prop_recursive(4, 24, 4, |inner| {
        prop_oneof![
            inner.clone().prop_map(|w| MoveWord::Inverse(Box::new(w))),
            (inner.clone(), 2..5u32).prop_map(|(w, e)| MoveWord::Power(Box::new(w), e)),
            prop::collection::vec(inner.clone(), 2..4).prop_map(MoveWord::Sequence),
            (inner.clone(), inner)
                .prop_map(|(a, b)| MoveWord::Commutator(Box::new(a), Box::new(b))),
        ]
    })
}

proptest! {
    #[test]
    fn parse_render_is_the_identity(word in arb_word()) {
        let text = render(&word);
        prop_assert_eq!(parse(&text).expect("canonical text parses"), word);
    }

    #[test]
    fn render_parse_is_idempotent(word in arb_word()) {
        let canonical = render(&word);
        prop_assert_eq!(render(&parse(&canonical).unwrap()), canonical);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn compile_is_a_homomorphism(a in arb_word(), b in arb_word()) {
        let layout = build_layout(6).unwrap();
        let ab = MoveWord::Sequence(vec![a.clone(), b.clone()]);
        let compiled = compile(&layout, &ab).unwrap();
        let split = compile(&layout, &a).unwrap().then(&compile(&layout, &b).unwrap());
        prop_assert_eq!(compiled, split);
    }

    #[test]
    fn inverse_words_invert_states(word in arb_word()) {
        let layout = build_layout(6).unwrap();
        let p = compile(&layout, &word).unwrap();
        let back = compile(&layout, &MoveWord::Inverse(Box::new(word))).unwrap();
        let solved = LabelledState::solved(&layout);
        let there = apply(&solved, &p).unwrap();
        prop_assert_eq!(apply(&there, &back).unwrap(), solved);
    }

    #[test]
    fn words_always_validate(word in arb_word()) {
        let layout = build_layout(7).unwrap();
        let p = compile(&layout, &word).unwrap();
        let state = apply(&LabelledState::solved(&layout), &p).unwrap();
        let config = extract(&state, &layout).unwrap();
        prop_assert!(validate(&config, &layout).unwrap().valid);
        prop_assert!(validate_complete(&config, &layout).unwrap().valid);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn extract_assemble_round_trip(n in prop_oneof![Just(3u32), Just(4), Just(5), Just(6), Just(7)],
                                   seed in any::<u64>(),
                                   sticker in any::<bool>()) {
        let layout = build_layout(n).unwrap();
        let model = if sticker { AssemblyModel::Sticker } else { AssemblyModel::Mechanical };
        let config = sample_configuration(&layout, model, seed);
        let state = assemble(&config, &layout).unwrap();
        prop_assert_eq!(extract(&state, &layout).unwrap(), config);
    }
}
