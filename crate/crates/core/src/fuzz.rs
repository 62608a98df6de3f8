//! Seeded random walks through homotopy moves, checking that the primitive
//! matrix and its invariants never change.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::diagram::{enumerate_applicable_moves, DiagramMove, MoveKind, Multistring};
use crate::error::MatrixError;
use crate::homology::{reduce_to_primitive, ReduceOptions, Search};
use crate::invariants::InvariantReport;
use crate::iso::{homologous_primitive_equiv, homologous_primitive_equiv_by_search, Equivalence};
use crate::pairing::{multistring_based_matrix, WovenBasedMatrix};

/// `steps` moves: a kind is drawn uniformly among the applicable kinds, then
/// a location uniformly among its applicable instances.
pub fn random_walk(ms: &Multistring, steps: usize, seed: u64) -> Vec<(DiagramMove, Multistring)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = ms.clone();
    let mut out = Vec::with_capacity(steps);
    for _ in 0..steps {
        let all = enumerate_applicable_moves(&cur, &MoveKind::ALL);
        let kinds: Vec<MoveKind> = MoveKind::ALL.iter().copied().filter(|k| all.iter().any(|m| m.kind() == *k)).collect();
        let Some(&kind) = kinds.choose(&mut rng) else { break };
        let of_kind: Vec<&DiagramMove> = all.iter().filter(|m| m.kind() == kind).collect();
        let mv = (*of_kind.choose(&mut rng).expect("kind has moves")).clone();
        cur = mv.apply(&cur).expect("enumerated move applies");
        out.push((mv, cur.clone()));
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct FuzzStep {
    pub step: usize,
    #[serde(rename = "move")]
    pub mv: String,
    pub arrows: usize,
    pub primitive_size: (usize, usize),
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FuzzReport {
    pub seed: u64,
    pub steps: Vec<FuzzStep>,
    pub violations: Vec<String>,
    /// Set when breadth-first orbit search hit its cap.
    pub undetermined: bool,
}

impl FuzzReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && !self.undetermined
    }
}

fn primitive(ms: &Multistring, opts: &ReduceOptions) -> Result<WovenBasedMatrix, MatrixError> {
    Ok(reduce_to_primitive(&multistring_based_matrix(ms)?, opts)?.0)
}

/// Walks `steps` random moves from `ms` and compares every primitive matrix
/// and invariant report with those of `ms`.
pub fn fuzz_invariance(ms: &Multistring, steps: usize, seed: u64, opts: &ReduceOptions) -> Result<FuzzReport, MatrixError> {
    let p0 = primitive(ms, opts)?;
    let r0 = InvariantReport::of_primitive(&p0)?;
    let mut report = FuzzReport { seed, steps: Vec::new(), violations: Vec::new(), undetermined: false };
    for (k, (mv, next)) in random_walk(ms, steps, seed).into_iter().enumerate() {
        let p = match primitive(&next, opts) {
            Ok(p) => p,
            Err(MatrixError::Undetermined { .. }) => {
                report.undetermined = true;
                break;
            }
            Err(e) => return Err(e),
        };
        let r = InvariantReport::of_primitive(&p)?;
        let mut bad = Vec::new();
        let eq = match opts.search {
            Search::Exact => homologous_primitive_equiv(&p0, &p)?,
            Search::Breadth { cap } => homologous_primitive_equiv_by_search(&p0, &p, cap)?,
        };
        match eq {
            Equivalence::Equivalent { .. } => {}
            Equivalence::Inequivalent => bad.push("primitive matrix changed".to_string()),
            Equivalence::Undetermined => report.undetermined = true,
        }
        if r.u != r0.u {
            bad.push("u-invariant changed".into());
        }
        if r.rho != r0.rho {
            bad.push("rho family changed".into());
        }
        if r.genus_lower_bound != r0.genus_lower_bound {
            bad.push("genus lower bound changed".into());
        }
        let self_arrows: usize = (0..next.circle_count()).map(|i| next.self_arrows(i).len()).sum();
        if r0.rho.rho_prime > self_arrows || r0.rho.rho_cap > next.intersection_arrows().len() {
            bad.push("rho exceeds arrow counts".into());
        }
        report.steps.push(FuzzStep {
            step: k + 1,
            mv: mv.to_string(),
            arrows: next.arrow_count(),
            primitive_size: p.size(),
            ok: bad.is_empty(),
        });
        report.violations.extend(bad.into_iter().map(|b| format!("step {} ({mv}): {b}", k + 1)));
    }
    Ok(report)
}
