mod common;

use common::{extend, matrix, rng, walk};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use weave_core::homology::{
    apply_matrix_move, apply_sequence, classify, fresh_names, intersection_moves, is_complementary, is_primitive,
    normalize_move_sequence, reduce_to_primitive, sample_m3, ExtensionKind, ReduceOptions,
};
use weave_core::iso::homologous_primitive_equiv;
use weave_core::pairing::validate_woven;
use weave_core::MatrixMove;

fn kind(mv: &MatrixMove) -> u8 {
    if matches!(mv, MatrixMove::I1 { .. }) {
        1
    } else {
        2
    }
}

fn parts(mv: &MatrixMove) -> (String, [String; 2]) {
    let (g, [a, b]) = mv.intersection_parts().unwrap();
    (g.to_string(), [a.to_string(), b.to_string()])
}

fn make(k: u8, g: &str, a: &str, b: &str) -> MatrixMove {
    let (g, pair) = (g.to_string(), [a.to_string(), b.to_string()]);
    if k == 1 {
        MatrixMove::I1 { g, pair }
    } else {
        MatrixMove::I2 { g, pair }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(160))]

    #[test]
    fn intersection_moves_are_involutions(seed in any::<u64>()) {
        let t = matrix(seed);
        for mv in intersection_moves(&t) {
            let once = apply_matrix_move(&t, &mv).unwrap();
            prop_assert!(validate_woven(&once).is_empty());
            prop_assert_eq!(apply_matrix_move(&once, &mv).unwrap(), t.clone());
        }
    }

    #[test]
    fn moves_on_distinct_elements_or_pairs_commute(seed in any::<u64>()) {
        let (t, _) = walk(&matrix(seed), 3, &mut rng(seed));
        let moves = intersection_moves(&t);
        for (k, a) in moves.iter().enumerate() {
            for b in &moves[k + 1..] {
                let ((ga, pa), (gb, pb)) = (parts(a), parts(b));
                if ga == gb && pa.iter().any(|x| pb.contains(x)) {
                    continue;
                }
                let ab = apply_sequence(&t, &[a.clone(), b.clone()]).unwrap();
                let ba = apply_sequence(&t, &[b.clone(), a.clone()]).unwrap();
                prop_assert_eq!(ab, ba);
            }
        }
    }

    #[test]
    fn composition_follows_parity(seed in any::<u64>()) {
        let (t, _) = walk(&matrix(seed), 2, &mut rng(seed));
        for first in intersection_moves(&t) {
            let (g, [x1, x2]) = parts(&first);
            let mid = apply_matrix_move(&t, &first).unwrap();
            for second in intersection_moves(&mid) {
                let (g2, p2) = parts(&second);
                if g2 != g {
                    continue;
                }
                // Orient so the shared element is x2 and the other is x3.
                let (shared, x3) = if p2[0] == x2 || p2[0] == x1 { (p2[0].clone(), p2[1].clone()) } else if p2[1] == x2 || p2[1] == x1 { (p2[1].clone(), p2[0].clone()) } else { continue };
                if x3 == x1 || x3 == x2 {
                    continue;
                }
                let x1 = if shared == x2 { x1.clone() } else { x2.clone() };
                let expected = if kind(&first) == kind(&second) { 2 } else { 1 };
                let merged = make(expected, &g, &x1, &x3);
                let direct = apply_matrix_move(&t, &merged);
                prop_assert!(direct.is_ok(), "{} then {} should merge into {}", first, second, merged);
                prop_assert_eq!(direct.unwrap(), apply_matrix_move(&mid, &second).unwrap());
            }
        }
    }

    #[test]
    fn complementary_pairs_can_follow_each_other(seed in any::<u64>(), steps in 1usize..8) {
        let mut r = rng(seed);
        let base = matrix(seed);
        let j = r.gen_range(0..base.n_components());
        let names = fresh_names(&base, 2);
        let t = apply_matrix_move(&base, &sample_m3(&base, j, [names[0].clone(), names[1].clone()], &mut r)).unwrap();
        let g1 = names[0].clone();
        let mut cur = t.clone();
        let mut on_g1 = Vec::new();
        for _ in 0..steps {
            let options: Vec<MatrixMove> = intersection_moves(&cur).into_iter().filter(|m| parts(m).0 == g1).collect();
            let Some(mv) = options.choose(&mut r).cloned() else { break };
            cur = apply_matrix_move(&cur, &mv).unwrap();
            on_g1.push(mv);
        }
        for mv in &on_g1 {
            let (_, [a, b]) = parts(mv);
            let mirrored = make(kind(mv), &names[1], &a, &b);
            let next = apply_matrix_move(&cur, &mirrored);
            prop_assert!(next.is_ok(), "{} has no mirror", mv);
            cur = next.unwrap();
        }
        let (a, b) = (cur.find(&names[0]).unwrap(), cur.find(&names[1]).unwrap());
        prop_assert!(is_complementary(&cur, a, b));
    }

    #[test]
    fn normalized_sequences_are_reduced(seed in any::<u64>(), steps in 0usize..16) {
        let t = matrix(seed);
        let (end, moves) = walk(&t, steps, &mut rng(seed ^ 1));
        let norm = normalize_move_sequence(&moves, &t).unwrap();
        prop_assert_eq!(apply_sequence(&t, &norm).unwrap(), end);
        let half = t.weaving().len() / 2;
        let mut blocks: Vec<(String, Vec<MatrixMove>)> = Vec::new();
        for mv in &norm {
            let g = parts(mv).0;
            match blocks.last_mut() {
                Some((last, block)) if *last == g => block.push(mv.clone()),
                _ => {
                    prop_assert!(blocks.iter().all(|(h, _)| *h != g), "element {} appears in two blocks", g);
                    blocks.push((g, vec![mv.clone()]));
                }
            }
        }
        for (g, block) in &blocks {
            let mut touched: Vec<String> = block.iter().flat_map(|m| parts(m).1).collect();
            let len = touched.len();
            touched.sort();
            touched.dedup();
            prop_assert_eq!(touched.len(), len, "block for {} touches an element twice", g);
            prop_assert!(block.len() <= half);
        }
    }

    #[test]
    fn reduction_certifies_a_primitive(seed in any::<u64>()) {
        let (t, _) = walk(&matrix(seed), 3, &mut rng(seed));
        let (p, cert) = reduce_to_primitive(&t, &ReduceOptions::default()).unwrap();
        prop_assert!(is_primitive(&p));
        prop_assert!(!classify(&p).admits_inverse_extension());
        prop_assert_eq!(cert.replay(&t).unwrap(), p.clone());
        let text = weave_core::MoveCertificate::from_text(&cert.to_text()).unwrap();
        prop_assert_eq!(text.replay(&t).unwrap(), p.clone());
        let json: weave_core::MoveCertificate = serde_json::from_value(cert.to_json()).unwrap();
        prop_assert_eq!(json, cert);
    }

    #[test]
    fn primitive_is_independent_of_priority(seed in any::<u64>()) {
        let t = matrix(seed);
        let (p, _) = reduce_to_primitive(&t, &ReduceOptions::default()).unwrap();
        let mut priority = vec![ExtensionKind::M1, ExtensionKind::M2, ExtensionKind::M3, ExtensionKind::M4];
        priority.shuffle(&mut rng(seed));
        let (q, _) = reduce_to_primitive(&t, &ReduceOptions { priority, ..Default::default() }).unwrap();
        prop_assert!(homologous_primitive_equiv(&p, &q).unwrap().is_equivalent());
    }

    #[test]
    fn extensions_do_not_change_the_primitive(seed in any::<u64>()) {
        let t = matrix(seed);
        let mut r = rng(seed ^ 2);
        let (grown, _) = walk(&extend(&t, &mut r), 3, &mut r);
        let (p, _) = reduce_to_primitive(&t, &ReduceOptions::default()).unwrap();
        let (q, _) = reduce_to_primitive(&grown, &ReduceOptions::default()).unwrap();
        prop_assert!(homologous_primitive_equiv(&p, &q).unwrap().is_equivalent());
    }
}
