mod common;

use common::{extend, matrix, rng, scramble, walk};
use proptest::prelude::*;
use rand::Rng;
use weave_core::diagram::{canonical_surface_genus, random_multistring};
use weave_core::homology::{apply_matrix_move, fresh_names, reduce_to_primitive, sample_m3, ReduceOptions};
use weave_core::invariants::{genus_lower_bound, u_components, u_invariant, u_poly_1string};
use weave_core::iso::{distinguish, woven_iso};
use weave_core::pairing::{based_matrix, multistring_based_matrix};
use weave_core::{Multistring, Verdict};

fn u1(ms: &Multistring) -> weave_core::LaurentPoly {
    u_poly_1string(&based_matrix(ms).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn u_survives_extensions_and_intersection_moves(seed in any::<u64>()) {
        let t = matrix(seed);
        let mut r = rng(seed ^ 3);
        let u = u_invariant(&t);
        let grown = extend(&t, &mut r);
        prop_assert_eq!(u_invariant(&grown), u.clone());
        let (moved, _) = walk(&grown, 4, &mut r);
        prop_assert_eq!(u_invariant(&moved), u.clone());
        prop_assert_eq!(u_invariant(&scramble(&moved, seed)), u);
    }

    #[test]
    fn complementary_pairs_have_opposite_signs(seed in any::<u64>()) {
        let t = matrix(seed);
        let mut r = rng(seed);
        let j = r.gen_range(0..t.n_components());
        let names = fresh_names(&t, 2);
        let out = apply_matrix_move(&t, &sample_m3(&t, j, [names[0].clone(), names[1].clone()], &mut r)).unwrap();
        let s = out.base(j);
        let (a, b) = (out.find(&names[0]).unwrap(), out.find(&names[1]).unwrap());
        prop_assert_eq!(out.at(a, s).signum(), -out.at(b, s).signum());
    }

    #[test]
    fn split_strings_collapse_to_induced_u(seed in any::<u64>(), n in 1usize..4) {
        // Split: every arrow kept on its own circle.
        let parts: Vec<Multistring> = (0..n).map(|i| random_multistring(1, 1 + (seed as usize + i) % 5, seed + i as u64).unwrap()).collect();
        let mut words = Vec::new();
        for (i, p) in parts.iter().enumerate() {
            let w: Vec<weave_core::EndpointRef> = p.word(0).into_iter().map(|e| weave_core::EndpointRef::new(format!("c{i}_{}", e.label), e.role)).collect();
            words.push(w);
        }
        let ms = Multistring::from_words(words).unwrap();
        let u = u_components(&multistring_based_matrix(&ms).unwrap());
        let factor = 1i64 << (n - 1);
        for i in 0..n {
            let mut expected = weave_core::LaurentPoly::zero();
            for (t, _, c) in u1(&parts[i]).terms() {
                expected.add_term(c * factor, t, 0);
            }
            prop_assert_eq!(&u[i], &expected);
        }
    }

    #[test]
    fn two_string_u_at_x_one_is_twice_induced(seed in any::<u64>(), m in 1usize..8) {
        let ms = random_multistring(2, m, seed).unwrap();
        let u = u_components(&multistring_based_matrix(&ms).unwrap());
        for (i, ui) in u.iter().enumerate() {
            prop_assert_eq!(ui.at_x_one(), u1(&ms.induced_string(i).unwrap()).scale(2));
        }
    }

    #[test]
    fn one_string_u_properties(seed in any::<u64>(), m in 0usize..9) {
        let ms = random_multistring(1, m, seed).unwrap();
        let u = u1(&ms);
        prop_assert!(u.degree_t().map_or(0, |d| d as usize + 1) <= ms.arrow_count().max(1));
        prop_assert_eq!(u1(&ms.reverse_all_arrows()), u.clone());
        prop_assert_eq!(u1(&ms.reverse_circle(0).unwrap()), -&u);
        prop_assert_eq!(u.eval_t0(), 0);
        prop_assert_eq!(u.derivative_t().eval_t1(), 0);
        let p = reduce_to_primitive(&multistring_based_matrix(&ms).unwrap(), &ReduceOptions::default()).unwrap().0;
        prop_assert!(genus_lower_bound(&p).unwrap() <= canonical_surface_genus(&ms).genus);
    }

    #[test]
    fn woven_iso_finds_relabeled_copies(seed in any::<u64>()) {
        let t = matrix(seed);
        let s = scramble(&t, seed ^ 9);
        let iso = woven_iso(&t, &s);
        prop_assert!(iso.is_some());
        let iso = iso.unwrap();
        prop_assert!(iso.verify(&t, &s));
        prop_assert!(iso.inverse().verify(&s, &t));
    }

    #[test]
    fn distinguish_is_symmetric(a in any::<u64>(), b in any::<u64>()) {
        let (x, y) = (random_multistring(2, 4, a).unwrap(), random_multistring(2, 4, b).unwrap());
        let opts = ReduceOptions::default();
        let (d1, d2) = (distinguish(&x, &y, &opts).unwrap(), distinguish(&y, &x, &opts).unwrap());
        prop_assert_eq!(d1.verdict, d2.verdict);
        prop_assert_eq!(distinguish(&x, &x, &opts).unwrap().verdict, Verdict::NotDistinguished);
    }
}
