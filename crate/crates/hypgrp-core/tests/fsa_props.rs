//! Randomized invariants of the finite-state toolkit.

use hypgrp_core::fsa::{encode_pair_word, Automaton, Builder, DetOptions};
use proptest::prelude::*;

fn letter_names(base: usize) -> Vec<String> {
    (0..base)
        .map(|i| ((b'a' + i as u8) as char).to_string())
        .collect()
}

/// A random partial DFA: up to `max_states` states, 2–4 letters, state 0
/// initial.
fn arb_dfa(max_states: usize) -> impl Strategy<Value = Automaton> {
    (1..=max_states, 2usize..=4).prop_flat_map(|(n, base)| {
        (
            proptest::collection::vec(proptest::option::of(0..n as u32), n * base),
            proptest::collection::vec(any::<bool>(), n),
        )
            .prop_map(move |(targets, accepting)| {
                let mut b = Builder::new(1, &letter_names(base));
                for _ in 0..n {
                    b.add_state();
                }
                for s in 0..n {
                    b.set_accepting(s as u32, accepting[s]);
                    for l in 0..base {
                        if let Some(t) = targets[s * base + l] {
                            b.add_edge(s as u32, l as u16, t);
                        }
                    }
                }
                b.add_initial(0);
                b.build()
            })
    })
}

/// A random NFA with ε-transitions and multiple initial states.
fn arb_nfa(max_states: usize) -> impl Strategy<Value = Automaton> {
    (2..=max_states, 2usize..=3).prop_flat_map(|(n, base)| {
        let edge = (0..n as u32, 0..=base as u16, 0..n as u32);
        (
            proptest::collection::vec(edge, 0..3 * n),
            proptest::collection::vec(any::<bool>(), n),
            proptest::collection::vec(0..n as u32, 1..=2),
        )
            .prop_map(move |(edges, accepting, initials)| {
                let mut b = Builder::new(1, &letter_names(base));
                for _ in 0..n {
                    b.add_state();
                }
                for s in 0..n {
                    b.set_accepting(s as u32, accepting[s]);
                }
                for (from, label, to) in edges {
                    // The extra label index becomes an ε-transition.
                    let l = if label == base as u16 { hypgrp_core::fsa::EPS } else { label };
                    b.add_edge(from, l, to);
                }
                for i in initials {
                    b.add_initial(i);
                }
                b.build()
            })
    })
}

/// Every word over `base` letters with length at most `max_len`.
fn all_words(base: usize, max_len: usize) -> Vec<Vec<u16>> {
    let mut out: Vec<Vec<u16>> = vec![Vec::new()];
    let mut layer: Vec<Vec<u16>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for l in 0..base as u16 {
                let mut e = w.clone();
                e.push(l);
                next.push(e);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn determinize_preserves_the_language(nfa in arb_nfa(8)) {
        let dfa = nfa.determinize(&DetOptions::default()).unwrap();
        prop_assert!(dfa.is_deterministic());
        for w in all_words(nfa.letters().len(), 4) {
            prop_assert_eq!(nfa.run_labels(&w), dfa.run_labels(&w), "word {:?}", w);
        }
    }

    #[test]
    fn minimize_is_idempotent_and_preserves_the_language(dfa in arb_dfa(10)) {
        let m1 = dfa.minimize();
        let m2 = m1.minimize();
        prop_assert_eq!(&m1, &m2);
        for w in all_words(dfa.letters().len(), 4) {
            prop_assert_eq!(dfa.run_labels(&w), m1.run_labels(&w), "word {:?}", w);
        }
    }

    #[test]
    fn reversal_subsets_certify_membership(
        dfa in arb_dfa(20),
        v in proptest::collection::vec(0u16..4, 0..=8),
        w in proptest::collection::vec(0u16..4, 0..=8),
    ) {
        let base = dfa.letters().len() as u16;
        let v: Vec<u16> = v.into_iter().filter(|&l| l < base).collect();
        let w: Vec<u16> = w.into_iter().filter(|&l| l < base).collect();
        let r = dfa.reverse_with_subsets(None).unwrap();

        let mut tau = Some(dfa.initial());
        for &l in &v {
            tau = tau.and_then(|s| dfa.step(s, l));
        }
        let mut t_state = Some(r.initial());
        for &l in &w {
            t_state = t_state.and_then(|s| r.step(s, l));
        }
        let mut vwr = v.clone();
        vwr.extend(w.iter().rev());
        let member = dfa.run_labels(&vwr);
        match (tau, t_state) {
            (Some(tau), Some(t)) => {
                prop_assert_eq!(r.payload(t).unwrap().contains(&tau), member)
            }
            // A dead run on either side means no completion exists.
            _ => prop_assert!(!member),
        }
    }

    #[test]
    fn pair_product_and_projection_round_trip(w1 in arb_dfa(6), w2 in arb_dfa(6)) {
        prop_assume!(w1.letters() == w2.letters());
        let p = Automaton::pair_product(&w1, &w2);
        let pl = p.pair_labels();
        for u in all_words(w1.letters().len(), 3) {
            for v in all_words(w1.letters().len(), 3) {
                let uw: Vec<u8> = u.iter().map(|&l| l as u8).collect();
                let vw: Vec<u8> = v.iter().map(|&l| l as u8).collect();
                let expect = w1.run_labels(&u) && w2.run_labels(&v);
                prop_assert_eq!(
                    p.run_labels(&encode_pair_word(&pl, &uw, &vw)),
                    expect,
                    "pair ({:?},{:?})", u, v
                );
            }
        }
        let p1 = p.project(1).unwrap().determinize(&DetOptions::default()).unwrap();
        if w2.is_empty_language() {
            prop_assert!(p1.is_empty_language());
        } else {
            prop_assert!(p1.language_equal(&w1).unwrap());
        }
        let p2 = p.project(2).unwrap().determinize(&DetOptions::default()).unwrap();
        if w1.is_empty_language() {
            prop_assert!(p2.is_empty_language());
        } else {
            prop_assert!(p2.language_equal(&w2).unwrap());
        }
    }

    #[test]
    fn diff_witnesses_are_sound_and_shortlex_ordered(a in arb_dfa(8), b in arb_dfa(8)) {
        prop_assume!(a.letters() == b.letters());
        let ws = a.diff_witnesses(&b, 10).unwrap();
        for w in &ws {
            prop_assert!(a.run_labels(w), "witness {:?} not in the left language", w);
            prop_assert!(!b.run_labels(w), "witness {:?} in the right language", w);
        }
        for pair in ws.windows(2) {
            let key = |w: &Vec<u16>| (w.len(), w.clone());
            prop_assert!(key(&pair[0]) < key(&pair[1]), "witnesses out of order");
        }
        if ws.is_empty() {
            for w in all_words(a.letters().len(), 4) {
                prop_assert!(!a.run_labels(&w) || b.run_labels(&w));
            }
        }
    }
}
