//! The bounded-depth relation: soundness of the log, monotonicity in the
//! budgets and the coherence closure.

use fgroup::eqrel::{EqrelConfig, EquivRelation};
use fgroup::sample::Sampler;
use fgroup::{BinaryWord, Element, Error};
use proptest::prelude::*;
use rand::Rng;

fn word(s: &str) -> BinaryWord {
    s.parse().unwrap()
}

fn random_word(s: &mut Sampler, min: usize, max: usize) -> BinaryWord {
    let len = s.rng().gen_range(min..=max);
    let text: String = (0..len)
        .map(|_| if s.rng().gen_bool(0.5) { '1' } else { '0' })
        .collect();
    word(&text)
}

fn suffixes(k: usize) -> Vec<String> {
    (0..1usize << k)
        .map(|i| {
            (0..k)
                .rev()
                .map(|b| if i >> b & 1 == 1 { '1' } else { '0' })
                .collect()
        })
        .collect()
}

fn relation(
    gens: &[Element],
    word_budget: usize,
    depth_bound: usize,
    accelerators: bool,
) -> Option<EquivRelation> {
    let config = EqrelConfig {
        word_budget,
        depth_bound,
        accelerators,
        ..EqrelConfig::default()
    };
    match EquivRelation::from_generators(gens, config) {
        Ok(rel) => Some(rel),
        Err(Error::Budget(_)) => None,
        Err(e) => panic!("{e}"),
    }
}

/// Every pair of words of length at most `d` merged by `small` is merged by `large`.
fn refines(small: &mut EquivRelation, large: &mut EquivRelation, d: usize) -> bool {
    small.classes().iter().all(|class| {
        let inside: Vec<_> = class.iter().filter(|w| w.len() <= d).collect();
        inside
            .windows(2)
            .all(|p| large.same_class(p[0], p[1]).unwrap())
    })
}

#[test]
fn generating_pair_collapses_and_single_generator_does_not() {
    let (x0, x1) = (Element::x0(), Element::x1());
    for accelerators in [true, false] {
        let mut both = relation(&[x0.clone(), x1.clone()], 4, 6, accelerators).unwrap();
        assert!(both.inner_collapsed(4).unwrap());
        both.replay().unwrap();
        let mut alone = relation(std::slice::from_ref(&x0), 4, 6, accelerators).unwrap();
        assert!(!alone.inner_collapsed(4).unwrap());
        assert!(alone.inner_class_count(4) > 1);
        alone.replay().unwrap();
    }
}

#[test]
fn seed_pairs_of_x0() {
    let mut rel = relation(&[Element::x0()], 1, 4, false).unwrap();
    assert!(rel.same_class(&word("01"), &word("10")).unwrap());
    assert!(rel.same_class(&word("00"), &word("0")).unwrap());
    assert!(rel.same_class(&word("01"), &word("01")).unwrap());
    assert!(matches!(
        rel.same_class(&word("00000"), &word("0")),
        Err(Error::DepthExceeded { .. })
    ));
}

#[test]
fn hypotheses_propagate_to_descendants() {
    let mut rel = EquivRelation::discrete(4).unwrap();
    rel.add_hypothesis(&word("1"), &word("11")).unwrap();
    for w in ["11", "111", "1111"] {
        assert!(rel.same_class(&word("1"), &word(w)).unwrap());
    }
    assert!(!rel.same_class(&word("1"), &word("0")).unwrap());
    rel.replay().unwrap();
}

#[test]
fn dump_lists_nontrivial_classes() {
    let mut rel = relation(&[Element::x0()], 2, 5, true).unwrap();
    let dump = rel.dump();
    assert!(dump
        .classes
        .iter()
        .all(|c| c.len() > 1 && c.windows(2).all(|p| p[0] < p[1])));
    assert_eq!(dump.log.len(), rel.log().len());
    let json = serde_json::to_string(&dump).unwrap();
    assert!(json.contains("\"classes\""));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn budgets_are_monotone(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let gens = vec![s.nontrivial_element(4), s.nontrivial_element(4)];
        let (Some(mut small), Some(mut more_words), Some(mut deeper)) =
            (relation(&gens, 2, 5, true), relation(&gens, 3, 5, true), relation(&gens, 2, 6, true))
        else {
            return Ok(());
        };
        prop_assert!(refines(&mut small, &mut more_words, 5));
        prop_assert!(refines(&mut small, &mut deeper, 5));
    }

    #[test]
    fn logs_replay(seed in any::<u64>(), accelerators in any::<bool>()) {
        let mut s = Sampler::new(seed);
        let gens = vec![s.nontrivial_element(5), s.nontrivial_element(5)];
        if let Some(rel) = relation(&gens, 3, 6, accelerators) {
            prop_assert!(rel.replay().is_ok(), "{:?}", rel.replay());
        }
    }

    #[test]
    fn coherent_extensions_identify_their_prefixes(seed in any::<u64>(), k in 1usize..=3) {
        let mut s = Sampler::new(seed);
        let (u, v) = (random_word(&mut s, 0, 3), random_word(&mut s, 0, 3));
        let mut rel = EquivRelation::discrete(6).unwrap();
        for w in suffixes(k) {
            let (uw, vw) = (word(&format!("{u}{w}")), word(&format!("{v}{w}")));
            rel.add_hypothesis(&uw, &vw).unwrap();
        }
        prop_assert!(rel.same_class(&u, &v).unwrap());
        prop_assert!(rel.replay().is_ok());
    }
}
