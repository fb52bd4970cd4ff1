#![allow(clippy::needless_range_loop)]

use std::collections::BTreeSet;

use proptest::prelude::*;
use repspace::ceers::{
    ceer_discreteness, ceer_equal, example35_edges, injection_when_decidable, iso_with_quotient, saturate,
    CeerPresentation,
};
use repspace::counterexamples::da::replay_da_certificate;
use repspace::counterexamples::oracle::StageTable;
use repspace::counterexamples::{
    bundled_candidates, da_diagonalize, dce_to_embedding, ha_medvedev, Enumeration, OracleSet,
};
use repspace::kernel::transducer::library;
use repspace::kernel::{
    decode_word, encode_word, enumerate_program, pair, unpair, GoedelIndex, Name, Nat, Observation, Transducer,
};

/// Reflexive-symmetric-transitive closure by repeated relaxation on a
/// boolean matrix; shares nothing with the union-find engine.
fn closure_matrix(pairs: &[(Nat, Nat)], universe: usize) -> Vec<Vec<bool>> {
    let mut m = vec![vec![false; universe]; universe];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(a, b) in pairs {
        m[a as usize][b as usize] = true;
        m[b as usize][a as usize] = true;
    }
    for k in 0..universe {
        for i in 0..universe {
            if m[i][k] {
                for j in 0..universe {
                    if m[k][j] {
                        m[i][j] = true;
                    }
                }
            }
        }
    }
    m
}

fn transducer(choice: u8, idx: Nat, param: Nat) -> Transducer {
    match choice % 5 {
        0 => library::identity(),
        1 => library::running_sum(),
        2 => library::throttled_copy(param % 4 + 1),
        3 => library::cylinder(decode_word(param % 500)),
        _ => Transducer::from_program(enumerate_program(GoedelIndex(idx)), vec![param % 3]).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn transducers_are_monotone(choice in 0u8..5, idx in 0u64..5000, param in 0u64..1000,
                                input in prop::collection::vec(0u64..6, 0..12), cut in 0usize..12,
                                f in 0u64..200, extra in 0u64..200) {
        let t = transducer(choice, idx, param);
        let cut = cut.min(input.len());
        let short = t.run(&input[..cut], f);
        prop_assert!(short.is_prefix_of(&t.run(&input, f)));
        prop_assert!(short.is_prefix_of(&t.run(&input[..cut], f + extra)));
    }

    #[test]
    fn word_coding_round_trips(code in 0u64..10_000_000, w in prop::collection::vec(0u64..20, 0..3)) {
        prop_assert_eq!(encode_word(&decode_word(code)), Some(code));
        // long words may overflow, short ones never do
        prop_assert_eq!(decode_word(encode_word(&w).unwrap()).0, w);
    }

    #[test]
    fn pairing_round_trips(a in 0u64..1_000_000, b in 0u64..1_000_000) {
        prop_assert_eq!(unpair(pair(a, b)), (a, b));
    }

    #[test]
    fn observations_are_monotone(step in 0u64..500, f in 0u64..1000, extra in 0u64..1000) {
        let o = Observation::at_step(step);
        prop_assert!(!o.confirmed_by(f) || o.confirmed_by(f + extra));
        prop_assert_eq!(o.observe(1000).step(), Some(step));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn saturation_matches_brute_force(universe in 2usize..=40,
                                      raw in prop::collection::vec((0u64..40, 0u64..40), 0..=25)) {
        let pairs: Vec<(Nat, Nat)> = raw.iter().map(|&(a, b)| (a % universe as Nat, b % universe as Nat)).collect();
        let pres = CeerPresentation::from_pairs(pairs.clone());
        let m = closure_matrix(&pairs, universe);
        let st = saturate(&pres, pairs.len() as u64 + 1);
        for a in 0..universe {
            for b in 0..universe {
                prop_assert_eq!(st.same(a as Nat, b as Nat), m[a][b]);
            }
        }
        prop_assert_eq!(ceer_equal(&pres, 0, 1).confirmed_by(pairs.len() as u64 + 1), m[0][1]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn quotient_iso_round_trips(raw in prop::collection::vec((0u64..41, 0u64..41), 0..15)) {
        let pres = CeerPresentation::from_pairs(raw.clone());
        let iso = iso_with_quotient(Name::constant, &ceer_discreteness(&pres));
        let m = closure_matrix(&raw, 41);
        for n in 0..=40u64 {
            let back = iso.phi_inv(&iso.phi(n), 20_000).unwrap();
            prop_assert!(m[back as usize][n as usize]);
        }
    }

    #[test]
    fn decidable_injection_is_class_constant(raw in prop::collection::vec((0u64..40, 0u64..40), 0..20)) {
        let m = closure_matrix(&raw, 40);
        let m2 = m.clone();
        let inj = injection_when_decidable(move |a, b| m2[a as usize][b as usize], 40);
        for a in 0..40u64 {
            for b in 0..40u64 {
                prop_assert_eq!(inj.iota(a) == inj.iota(b), m[a as usize][b as usize]);
            }
        }
    }

    #[test]
    fn medvedev_round_trip(members in prop::collection::btree_set(0u64..=100, 1..12)) {
        let v: Vec<Nat> = members.iter().copied().collect();
        let med = ha_medvedev(&OracleSet::finite(v.clone())).unwrap();
        let got = med.round_trip(&Enumeration::of_finite(&v), 100, v.len() as u64 + 1);
        prop_assert_eq!(got, members);
    }
}

#[test]
fn example35_out_degree_and_emission_order() {
    let edges = example35_edges(20_000);
    let mut from = BTreeSet::new();
    for e in &edges {
        assert!(from.insert(e.from), "vertex {} has two edges", e.from);
        assert_ne!(e.a_from, e.a_to);
    }
    assert!(edges.windows(2).all(|w| (w[0].fuel, w[0].from) <= (w[1].fuel, w[1].from)));
}

#[test]
fn da_certificates_replay() {
    let cands = bundled_candidates();
    let run = da_diagonalize(&cands, 10_000);
    for (c, cert) in cands.iter().zip(&run.certificates) {
        assert!(replay_da_certificate(&run, c, cert), "{}", c.label);
    }
}

#[test]
fn embedding_round_trips_and_refines() {
    let t = StageTable::dce(&[(2, 1, true), (3, 4, true), (8, 4, false), (1, 6, true)]).unwrap();
    let emb = dce_to_embedding(&t, 16).unwrap();
    for n in 0..10 {
        let member = t.limit_contains(n);
        let tr = emb.iota(n, member.then_some(0)).unwrap();
        assert!(tr.refines(16));
        assert_eq!(emb.inverse(n, tr.value().unwrap()), Some(member));
    }
}
