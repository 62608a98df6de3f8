//! Isomorphism of woven based matrices and equivalence of primitives.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::diagram::Multistring;
use crate::error::MatrixError;
use crate::homology::{
    apply_sequence, coordinates, intersection_orbit, is_primitive, moves_to, orbit_signature, reduce_to_primitive,
    MatrixMove, ReduceOptions, Search,
};
use crate::invariants::InvariantReport;
use crate::pairing::{multistring_based_matrix, ElementId, WovenBasedMatrix};

/// `phi` sends `s_i` to `s_{sigma(i)}`, `G_i` to `G_{sigma(i)}` and `I` to `I'`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WovenIsomorphism {
    pub sigma: Vec<usize>,
    /// Element names of the source to element names of the target.
    pub phi: BTreeMap<String, String>,
}

impl WovenIsomorphism {
    fn from_indices(t1: &WovenBasedMatrix, t2: &WovenBasedMatrix, sigma: Vec<usize>, phi: &[usize]) -> Self {
        let phi = phi
            .iter()
            .enumerate()
            .map(|(a, &b)| (t1.elements()[a].to_string(), t2.elements()[b].to_string()))
            .collect();
        WovenIsomorphism { sigma, phi }
    }

    fn indices(&self, t1: &WovenBasedMatrix, t2: &WovenBasedMatrix) -> Option<Vec<usize>> {
        if self.phi.len() != t1.dim() {
            return None;
        }
        (0..t1.dim())
            .map(|a| self.phi.get(&t1.elements()[a].to_string()).and_then(|b| t2.find(b)))
            .collect()
    }

    /// Re-checks every defining condition against the two matrices.
    pub fn verify(&self, t1: &WovenBasedMatrix, t2: &WovenBasedMatrix) -> bool {
        let Some(phi) = self.indices(t1, t2) else { return false };
        structural_ok(t1, t2, &self.sigma, &phi) && entries_match(t1, t2, &phi, false)
    }

    pub fn inverse(&self) -> WovenIsomorphism {
        let mut sigma = vec![0; self.sigma.len()];
        for (i, &j) in self.sigma.iter().enumerate() {
            sigma[j] = i;
        }
        WovenIsomorphism { sigma, phi: self.phi.iter().map(|(a, b)| (b.clone(), a.clone())).collect() }
    }
}

fn structural_ok(t1: &WovenBasedMatrix, t2: &WovenBasedMatrix, sigma: &[usize], phi: &[usize]) -> bool {
    let n = t1.n_components();
    if t2.n_components() != n || t1.dim() != t2.dim() || sigma.len() != n || phi.len() != t1.dim() {
        return false;
    }
    let mut seen = vec![false; n];
    for &j in sigma {
        if j >= n || std::mem::replace(&mut seen[j], true) {
            return false;
        }
    }
    let mut hit = vec![false; t2.dim()];
    for (a, &b) in phi.iter().enumerate() {
        if std::mem::replace(&mut hit[b], true) {
            return false;
        }
        let ok = match (&t1.elements()[a], &t2.elements()[b]) {
            (ElementId::Base(i), ElementId::Base(j)) => sigma[*i] == *j,
            (ElementId::SelfArrow(i, _), ElementId::SelfArrow(j, _)) => sigma[*i] == *j,
            (ElementId::Weaving(_), ElementId::Weaving(_)) => true,
            _ => false,
        };
        if !ok {
            return false;
        }
    }
    true
}

/// Entries toggled by intersection moves: a non-base self-arrow against a
/// weaving element.
fn movable(m: &WovenBasedMatrix, a: usize, b: usize) -> bool {
    let (ea, eb) = (&m.elements()[a], &m.elements()[b]);
    (matches!(ea, ElementId::SelfArrow(..)) && eb.is_weaving())
        || (matches!(eb, ElementId::SelfArrow(..)) && ea.is_weaving())
}

fn entries_match(t1: &WovenBasedMatrix, t2: &WovenBasedMatrix, phi: &[usize], modulo: bool) -> bool {
    for a in 0..t1.dim() {
        for b in a + 1..t1.dim() {
            if modulo && movable(t1, a, b) {
                continue;
            }
            if t1.at(a, b) != t2.at(phi[a], phi[b]) {
                return false;
            }
        }
    }
    if modulo {
        for a in 0..t1.dim() {
            if matches!(t1.elements()[a], ElementId::SelfArrow(..))
                && orbit_signature(t1, a) != orbit_signature(t2, phi[a])
            {
                return false;
            }
        }
    }
    true
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for k in 0..used.len() {
            if !used[k] {
                used[k] = true;
                cur.push(k);
                go(cur, used, out);
                cur.pop();
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Invariant of an element under isomorphisms inducing `sigma` (identity on
/// the target side).
#[derive(PartialEq, Eq)]
struct Signature {
    kind: u8,
    component: Option<usize>,
    row: Vec<i64>,
    bases: Vec<i64>,
    orbit: Vec<(i64, usize, usize)>,
}

fn signature(m: &WovenBasedMatrix, a: usize, sigma: &[usize], modulo: bool) -> Signature {
    let e = &m.elements()[a];
    let n = m.n_components();
    let mut bases = vec![0; n];
    for k in 0..n {
        bases[sigma[k]] = m.at(a, m.base(k));
    }
    let mut row: Vec<i64> = (0..m.dim()).filter(|&b| !(modulo && movable(m, a, b))).map(|b| m.at(a, b)).collect();
    row.sort_unstable();
    let kind = match e {
        ElementId::Base(_) => 0,
        ElementId::SelfArrow(..) => 1,
        ElementId::Weaving(_) => 2,
    };
    let orbit = if modulo && kind == 1 { orbit_signature(m, a) } else { Vec::new() };
    Signature { kind, component: e.component().map(|c| sigma[c]), row, bases, orbit }
}

fn search(t1: &WovenBasedMatrix, t2: &WovenBasedMatrix, modulo: bool) -> Option<(Vec<usize>, Vec<usize>)> {
    let n = t1.n_components();
    if n != t2.n_components() || t1.dim() != t2.dim() || t1.size() != t2.size() {
        return None;
    }
    let identity: Vec<usize> = (0..n).collect();
    for sigma in permutations(n) {
        if (0..n).any(|i| t1.self_arrows(i).len() != t2.self_arrows(sigma[i]).len()) {
            continue;
        }
        if (0..n).any(|i| signature(t1, t1.base(i), &sigma, modulo) != signature(t2, t2.base(sigma[i]), &identity, modulo)) {
            continue;
        }
        let sig2: Vec<Signature> = (0..t2.dim()).map(|b| signature(t2, b, &identity, modulo)).collect();
        let mut phi = vec![usize::MAX; t1.dim()];
        let mut used = vec![false; t2.dim()];
        for i in 0..n {
            phi[t1.base(i)] = t2.base(sigma[i]);
            used[t2.base(sigma[i])] = true;
        }
        let mut todo: Vec<(usize, Vec<usize>)> = (0..t1.dim())
            .filter(|&a| !t1.elements()[a].is_base())
            .map(|a| {
                let s = signature(t1, a, &sigma, modulo);
                (a, (0..t2.dim()).filter(|&b| !used[b] && sig2[b] == s).collect())
            })
            .collect();
        if todo.iter().any(|(_, c)| c.is_empty()) {
            continue;
        }
        todo.sort_by_key(|(a, c)| (c.len(), *a));
        if assign(t1, t2, &todo, 0, &mut phi, &mut used, modulo) && entries_match(t1, t2, &phi, modulo) {
            return Some((sigma, phi));
        }
    }
    None
}

fn assign(
    t1: &WovenBasedMatrix,
    t2: &WovenBasedMatrix,
    todo: &[(usize, Vec<usize>)],
    depth: usize,
    phi: &mut [usize],
    used: &mut [bool],
    modulo: bool,
) -> bool {
    let Some((a, cands)) = todo.get(depth) else { return true };
    for &c in cands {
        if used[c] {
            continue;
        }
        let consistent = (0..t1.dim())
            .filter(|&b| phi[b] != usize::MAX)
            .all(|b| (modulo && movable(t1, *a, b)) || t1.at(*a, b) == t2.at(c, phi[b]));
        if !consistent {
            continue;
        }
        phi[*a] = c;
        used[c] = true;
        if assign(t1, t2, todo, depth + 1, phi, used, modulo) {
            return true;
        }
        phi[*a] = usize::MAX;
        used[c] = false;
    }
    false
}

/// An isomorphism `t1 → t2`, if any.
pub fn woven_iso(t1: &WovenBasedMatrix, t2: &WovenBasedMatrix) -> Option<WovenIsomorphism> {
    let (sigma, phi) = search(t1, t2, false)?;
    let iso = WovenIsomorphism::from_indices(t1, t2, sigma, &phi);
    debug_assert!(iso.verify(t1, t2));
    Some(iso)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Equivalence {
    /// `moves` take `P1` to a matrix that `iso` carries onto `P2`.
    Equivalent { moves: Vec<MatrixMove>, iso: WovenIsomorphism },
    Inequivalent,
    Undetermined,
}

impl Equivalence {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Equivalence::Equivalent { .. })
    }
}

/// Whether two primitive matrices agree up to intersection moves and
/// isomorphism, decided in orbit coordinates.
pub fn homologous_primitive_equiv(p1: &WovenBasedMatrix, p2: &WovenBasedMatrix) -> Result<Equivalence, MatrixError> {
    if !is_primitive(p1) || !is_primitive(p2) {
        return Err(MatrixError::NotPrimitive);
    }
    let Some((sigma, phi)) = search(p1, p2, true) else { return Ok(Equivalence::Inequivalent) };
    let mut moves = Vec::new();
    for g in (0..p1.dim()).filter(|&a| matches!(p1.elements()[a], ElementId::SelfArrow(..))) {
        let target: BTreeMap<usize, bool> =
            coordinates(p2, phi[g]).into_iter().map(|(x, _, y)| (x, y)).collect();
        let mv = moves_to(p1, g, |x| target[&phi[x]]).expect("equal orbit signatures");
        moves.extend(mv);
    }
    let moved = apply_sequence(p1, &moves)?;
    let iso = WovenIsomorphism::from_indices(&moved, p2, sigma, &phi);
    assert!(iso.verify(&moved, p2), "orbit witness must verify");
    Ok(Equivalence::Equivalent { moves, iso })
}

/// The same question answered by enumerating the orbit of `p1`, up to `cap`
/// states.
pub fn homologous_primitive_equiv_by_search(
    p1: &WovenBasedMatrix,
    p2: &WovenBasedMatrix,
    cap: usize,
) -> Result<Equivalence, MatrixError> {
    if !is_primitive(p1) || !is_primitive(p2) {
        return Err(MatrixError::NotPrimitive);
    }
    let orbit = intersection_orbit(p1, cap);
    for s in &orbit.states {
        if let Some(iso) = woven_iso(s, p2) {
            // Recover the moves by a direct search on the state.
            let moves = moves_between(p1, s);
            return Ok(Equivalence::Equivalent { moves, iso });
        }
    }
    Ok(if orbit.truncated { Equivalence::Undetermined } else { Equivalence::Inequivalent })
}

fn moves_between(from: &WovenBasedMatrix, to: &WovenBasedMatrix) -> Vec<MatrixMove> {
    (0..from.dim())
        .filter(|&a| matches!(from.elements()[a], ElementId::SelfArrow(..)))
        .flat_map(|g| {
            let target: BTreeMap<usize, bool> = coordinates(to, g).into_iter().map(|(x, _, y)| (x, y)).collect();
            moves_to(from, g, |x| target[&x]).expect("same orbit")
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Distinct,
    NotDistinguished,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Distinction {
    pub verdict: Verdict,
    /// Each separating invariant, or why nothing separated the inputs.
    pub evidence: Vec<String>,
    pub reports: Option<[InvariantReport; 2]>,
}

fn sorted<T: Ord + Clone>(v: &[T]) -> Vec<T> {
    let mut v = v.to_vec();
    v.sort();
    v
}

fn show_u(u: &[crate::LaurentPoly]) -> String {
    format!("{{{}}}", u.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))
}

/// Compares two diagrams through their primitive matrices. "Not
/// distinguished" is not a proof of homotopy.
pub fn distinguish(ms1: &Multistring, ms2: &Multistring, opts: &ReduceOptions) -> Result<Distinction, MatrixError> {
    let undetermined = |why: String| Distinction { verdict: Verdict::Undetermined, evidence: vec![why], reports: None };
    if ms1.circle_count() != ms2.circle_count() {
        return Ok(Distinction {
            verdict: Verdict::Distinct,
            evidence: vec![format!("component count: {} vs {}", ms1.circle_count(), ms2.circle_count())],
            reports: None,
        });
    }
    let mut prims = Vec::new();
    for ms in [ms1, ms2] {
        match reduce_to_primitive(&multistring_based_matrix(ms)?, opts) {
            Ok((p, _)) => prims.push(p),
            Err(MatrixError::Undetermined { cap, .. }) => {
                return Ok(undetermined(format!("reduction truncated at {cap} orbit states")))
            }
            Err(e) => return Err(e),
        }
    }
    let (p1, p2) = (&prims[0], &prims[1]);
    let (r1, r2) = (InvariantReport::of_primitive(p1)?, InvariantReport::of_primitive(p2)?);
    let mut evidence = Vec::new();
    if r1.u != r2.u {
        evidence.push(format!("u: {} vs {}", show_u(&r1.u), show_u(&r2.u)));
    }
    for (name, a, b) in [
        ("rho", r1.rho.rho, r2.rho.rho),
        ("rho_prime", r1.rho.rho_prime, r2.rho.rho_prime),
        ("rho_cap", r1.rho.rho_cap, r2.rho.rho_cap),
        ("genus_lower_bound", r1.genus_lower_bound, r2.genus_lower_bound),
    ] {
        if a != b {
            evidence.push(format!("{name}: {a} vs {b}"));
        }
    }
    if sorted(&r1.rho.rho_i) != sorted(&r2.rho.rho_i) {
        evidence.push(format!("rho_i (unordered): {:?} vs {:?}", sorted(&r1.rho.rho_i), sorted(&r2.rho.rho_i)));
    }
    let eq = match opts.search {
        Search::Exact => homologous_primitive_equiv(p1, p2)?,
        Search::Breadth { cap } => homologous_primitive_equiv_by_search(p1, p2, cap)?,
    };
    let verdict = match (&eq, evidence.is_empty()) {
        (Equivalence::Inequivalent, _) => {
            evidence.push("primitive matrices are inequivalent up to intersection moves and isomorphism".into());
            Verdict::Distinct
        }
        (_, false) => Verdict::Distinct,
        (Equivalence::Undetermined, true) => {
            evidence.push("primitive equivalence undetermined: orbit truncated".into());
            Verdict::Undetermined
        }
        (Equivalence::Equivalent { .. }, true) => {
            evidence.push("all invariants agree and the primitive matrices are equivalent".into());
            Verdict::NotDistinguished
        }
    };
    Ok(Distinction { verdict, evidence, reports: Some([r1, r2]) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{fixture_sigma, fixture_tau, gen_beta, random_multistring};
    use crate::homology::{apply_matrix_move, intersection_moves, DEFAULT_CAP};
    use rand::rngs::StdRng;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    fn t(ms: &Multistring) -> WovenBasedMatrix {
        multistring_based_matrix(ms).unwrap()
    }

    fn prim(ms: &Multistring) -> WovenBasedMatrix {
        reduce_to_primitive(&t(ms), &ReduceOptions::default()).unwrap().0
    }

    /// Relabels every non-base element and shuffles components.
    fn scramble(m: &WovenBasedMatrix, seed: u64) -> WovenBasedMatrix {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut perm: Vec<usize> = (0..m.n_components()).collect();
        perm.shuffle(&mut rng);
        let mut names: Vec<usize> = (0..m.dim()).collect();
        names.shuffle(&mut rng);
        let lookup: BTreeMap<String, usize> =
            m.elements().iter().enumerate().map(|(k, e)| (e.to_string(), names[k])).collect();
        m.map_elements(|e| match e {
            ElementId::Base(i) => ElementId::Base(perm[*i]),
            ElementId::SelfArrow(i, _) => ElementId::SelfArrow(perm[*i], format!("r{}", lookup[&e.to_string()])),
            ElementId::Weaving(_) => ElementId::Weaving(format!("w{}", lookup[&e.to_string()])),
        })
    }

    #[test]
    fn reflexive_and_scrambled() {
        let tau = t(&fixture_tau());
        let iso = woven_iso(&tau, &tau).unwrap();
        assert!(iso.verify(&tau, &tau));
        for seed in 0..40 {
            let m = t(&random_multistring(1 + seed as usize % 3, 6, seed).unwrap());
            let s = scramble(&m, seed);
            let iso = woven_iso(&m, &s).expect("relabeled copy");
            assert!(iso.verify(&m, &s));
            assert!(iso.inverse().verify(&s, &m));
            assert!(woven_iso(&s, &m).is_some());
        }
    }

    #[test]
    fn verify_rejects_tampering() {
        let tau = t(&fixture_tau());
        let mut iso = woven_iso(&tau, &tau).unwrap();
        let (a, b) = (iso.phi["x1"].clone(), iso.phi["x2"].clone());
        iso.phi.insert("x1".into(), b);
        iso.phi.insert("x2".into(), a);
        assert!(!iso.verify(&tau, &tau));
        iso.sigma = vec![1, 0, 2];
        assert!(!iso.verify(&tau, &tau));
    }

    #[test]
    fn beta_component_swap() {
        let a = t(&gen_beta(1, 2, 2, 1, 0, 0));
        let b = t(&gen_beta(2, 1, 1, 2, 0, 0));
        let iso = woven_iso(&a, &b).unwrap();
        assert_eq!(iso.sigma, vec![1, 0]);
        // With intersection arrows the family is not swap-symmetric: p-arrows
        // pair with y-arrows by -1 on the first circle and +1 on the second.
        assert!(woven_iso(&t(&gen_beta(1, 1, 2, 1, 1, 0)), &t(&gen_beta(2, 1, 1, 1, 0, 1))).is_none());
        assert!(woven_iso(&t(&gen_beta(1, 2, 2, 1, 1, 1)), &t(&gen_beta(2, 1, 1, 2, 1, 1))).is_none());
    }

    #[test]
    fn primitive_equivalence() {
        let sigma = prim(&fixture_sigma());
        let eq = homologous_primitive_equiv(&sigma, &WovenBasedMatrix::trivial(2)).unwrap();
        assert!(eq.is_equivalent());
        let tau = prim(&fixture_tau());
        assert_eq!(homologous_primitive_equiv(&tau, &WovenBasedMatrix::trivial(3)).unwrap(), Equivalence::Inequivalent);
        assert!(homologous_primitive_equiv(&tau, &tau).unwrap().is_equivalent());
        assert_eq!(
            homologous_primitive_equiv(&t(&fixture_sigma()), &tau),
            Err(MatrixError::NotPrimitive)
        );
    }

    #[test]
    fn equivalence_across_orbit_matches_search() {
        let mut rng = StdRng::seed_from_u64(3);
        let mut checked = 0;
        for seed in 0..80 {
            let p = prim(&random_multistring(2 + seed as usize % 2, 6, seed).unwrap());
            let mut q = p.clone();
            for _ in 0..4 {
                if let Some(mv) = intersection_moves(&q).choose(&mut rng) {
                    q = apply_matrix_move(&q, mv).unwrap();
                }
            }
            let q = scramble(&q, seed);
            let exact = homologous_primitive_equiv(&p, &q).unwrap();
            let Equivalence::Equivalent { moves, iso } = &exact else { panic!("seed {seed}") };
            assert!(iso.verify(&apply_sequence(&p, moves).unwrap(), &q));
            let searched = homologous_primitive_equiv_by_search(&p, &q, DEFAULT_CAP).unwrap();
            assert!(searched.is_equivalent());
            let other = prim(&random_multistring(2 + seed as usize % 2, 6, seed + 1000).unwrap());
            let a = homologous_primitive_equiv(&p, &other).unwrap().is_equivalent();
            let b = homologous_primitive_equiv_by_search(&p, &other, DEFAULT_CAP).unwrap().is_equivalent();
            assert_eq!(a, b, "seed {seed}");
            checked += 1;
        }
        assert_eq!(checked, 80);
    }

    #[test]
    fn distinguish_examples() {
        let opts = ReduceOptions::default();
        let d = distinguish(&fixture_sigma(), &Multistring::trivial(2), &opts).unwrap();
        assert_eq!(d.verdict, Verdict::NotDistinguished);
        let d = distinguish(&gen_beta(1, 2, 1, 2, 2, 1), &gen_beta(1, 2, 1, 2, 1, 2), &opts).unwrap();
        assert_eq!(d.verdict, Verdict::Distinct, "{:?}", d.evidence);
        // alpha(1,1) reduces away; both primitives are one intersection arrow,
        // isomorphic by exchanging the components.
        let d = distinguish(&gen_beta(1, 1, 1, 1, 2, 1), &gen_beta(1, 1, 1, 1, 1, 2), &opts).unwrap();
        assert_eq!(d.verdict, Verdict::NotDistinguished, "{:?}", d.evidence);
        let d = distinguish(&fixture_tau(), &Multistring::trivial(3), &opts).unwrap();
        assert_eq!(d.verdict, Verdict::Distinct);
        assert!(d.evidence.iter().any(|e| e.starts_with("rho: 8 vs 0")), "{:?}", d.evidence);
        let d = distinguish(&fixture_tau(), &Multistring::trivial(2), &opts).unwrap();
        assert_eq!(d.evidence, vec!["component count: 3 vs 2".to_string()]);
        let bfs = ReduceOptions { search: Search::Breadth { cap: 1 }, ..Default::default() };
        assert_eq!(distinguish(&fixture_sigma(), &Multistring::trivial(2), &bfs).unwrap().verdict, Verdict::Undetermined);
    }
}
