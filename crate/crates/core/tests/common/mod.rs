#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use weave_core::diagram::random_multistring;
use weave_core::homology::{apply_matrix_move, fresh_names, intersection_moves, sample_m3, sample_m4};
use weave_core::pairing::multistring_based_matrix;
use weave_core::{ElementId, MatrixMove, Multistring, WovenBasedMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn diagram(seed: u64) -> Multistring {
    let n = 1 + (seed % 3) as usize;
    let m = 2 + (seed / 3 % 6) as usize;
    random_multistring(n, m, seed).unwrap()
}

/// A diagram's matrix, optionally grown by a few random extensions.
pub fn matrix(seed: u64) -> WovenBasedMatrix {
    let mut r = rng(seed ^ 0x5eed);
    let mut t = multistring_based_matrix(&diagram(seed)).unwrap();
    for _ in 0..r.gen_range(0..3) {
        t = extend(&t, &mut r);
    }
    t
}

/// One random extension of any kind.
pub fn extend(t: &WovenBasedMatrix, r: &mut ChaCha8Rng) -> WovenBasedMatrix {
    let names = fresh_names(t, 2);
    let j = r.gen_range(0..t.n_components());
    let mv = match r.gen_range(0..4) {
        0 => MatrixMove::M1 { component: j, element: names[0].clone() },
        1 => MatrixMove::M2 { component: j, element: names[0].clone() },
        2 => sample_m3(t, j, [names[0].clone(), names[1].clone()], r),
        _ => sample_m4(t, [names[0].clone(), names[1].clone()], r)
            .unwrap_or_else(|| sample_m3(t, j, [names[0].clone(), names[1].clone()], r)),
    };
    apply_matrix_move(t, &mv).unwrap()
}

/// Up to `steps` random intersection moves.
pub fn walk(t: &WovenBasedMatrix, steps: usize, r: &mut ChaCha8Rng) -> (WovenBasedMatrix, Vec<MatrixMove>) {
    let mut cur = t.clone();
    let mut moves = Vec::new();
    for _ in 0..steps {
        let Some(mv) = intersection_moves(&cur).choose(r).cloned() else { break };
        cur = apply_matrix_move(&cur, &mv).unwrap();
        moves.push(mv);
    }
    (cur, moves)
}

/// Renames every non-base element and permutes components.
pub fn scramble(m: &WovenBasedMatrix, seed: u64) -> WovenBasedMatrix {
    let mut r = rng(seed);
    let mut perm: Vec<usize> = (0..m.n_components()).collect();
    perm.shuffle(&mut r);
    let mut ids: Vec<usize> = (0..m.dim()).collect();
    ids.shuffle(&mut r);
    let fresh: BTreeMap<String, usize> = m.elements().iter().enumerate().map(|(k, e)| (e.to_string(), ids[k])).collect();
    m.map_elements(|e| match e {
        ElementId::Base(i) => ElementId::Base(perm[*i]),
        ElementId::SelfArrow(i, _) => ElementId::SelfArrow(perm[*i], format!("r{}", fresh[&e.to_string()])),
        ElementId::Weaving(_) => ElementId::Weaving(format!("w{}", fresh[&e.to_string()])),
    })
}
