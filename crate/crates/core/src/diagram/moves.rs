//! Flat virtual Reidemeister moves on chord diagrams.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{EndpointRef, Multistring, Role};
use crate::error::DiagramError;

/// The slot between two cyclically consecutive endpoints of a circle.
///
/// On a circle with `k > 0` endpoints, gap `p` sits between positions `p` and
/// `p + 1 (mod k)`. An arrow-free circle has the single gap `0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Gap {
    pub circle: usize,
    pub position: usize,
}

impl Gap {
    pub fn new(circle: usize, position: usize) -> Self {
        Gap { circle, position }
    }
}

impl fmt::Display for Gap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}@{}", self.circle, self.position)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum T3Variant {
    A,
    B,
    AInverse,
    BInverse,
}

impl T3Variant {
    pub fn inverse(self) -> Self {
        match self {
            T3Variant::A => T3Variant::AInverse,
            T3Variant::AInverse => T3Variant::A,
            T3Variant::B => T3Variant::BInverse,
            T3Variant::BInverse => T3Variant::B,
        }
    }

    /// Arrow placements `(tail arc, tail slot, head arc, head slot)` for arcs
    /// `A = (a, a+)`, `B = (b, b+)`, `C = (c, c+)`.
    fn pattern(self) -> [(u8, u8, u8, u8); 3] {
        let mut p = match self {
            // (a+, b), (b+, c), (c+, a)
            T3Variant::A => [(0, 1, 1, 0), (1, 1, 2, 0), (2, 1, 0, 0)],
            // (a, b+), (b, c+), (c, a+)
            T3Variant::AInverse => [(0, 0, 1, 1), (1, 0, 2, 1), (2, 0, 0, 1)],
            // (a, b), (a+, c), (b+, c+)
            T3Variant::B => [(0, 0, 1, 0), (0, 1, 2, 0), (1, 1, 2, 1)],
            // (a+, b+), (a, c+), (b, c)
            T3Variant::BInverse => [(0, 1, 1, 1), (0, 0, 2, 1), (1, 0, 2, 0)],
        };
        p.sort_unstable();
        p
    }

    const ALL: [T3Variant; 4] = [T3Variant::A, T3Variant::B, T3Variant::AInverse, T3Variant::BInverse];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MoveKind {
    T1a,
    T1b,
    T2,
    T3a,
    T3b,
    T1aInverse,
    T1bInverse,
    T2Inverse,
    T3aInverse,
    T3bInverse,
}

impl MoveKind {
    pub const ALL: [MoveKind; 10] = [
        MoveKind::T1a,
        MoveKind::T1b,
        MoveKind::T2,
        MoveKind::T3a,
        MoveKind::T3b,
        MoveKind::T1aInverse,
        MoveKind::T1bInverse,
        MoveKind::T2Inverse,
        MoveKind::T3aInverse,
        MoveKind::T3bInverse,
    ];

    pub fn is_inverse(self) -> bool {
        matches!(
            self,
            MoveKind::T1aInverse
                | MoveKind::T1bInverse
                | MoveKind::T2Inverse
                | MoveKind::T3aInverse
                | MoveKind::T3bInverse
        )
    }

    fn t3(v: T3Variant) -> Self {
        match v {
            T3Variant::A => MoveKind::T3a,
            T3Variant::B => MoveKind::T3b,
            T3Variant::AInverse => MoveKind::T3aInverse,
            T3Variant::BInverse => MoveKind::T3bInverse,
        }
    }
}

/// A located homotopy move. Arrow-adding moves may pin the labels of the new
/// arrows; otherwise the smallest unused `n<k>` labels are taken.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum DiagramMove {
    /// Adds an arrow whose tail immediately precedes its head.
    T1a { gap: Gap, label: Option<String> },
    /// Adds an arrow whose head immediately precedes its tail.
    T1b { gap: Gap, label: Option<String> },
    /// Adds `(a, b)` and `(b', a')` with `{a, a'}` in the first gap and
    /// `{b, b'}` in the second. Without a flip the gap order is `a a'` and
    /// `b b'`. When both gaps coincide the first pair is placed first.
    T2 {
        first: Gap,
        second: Gap,
        flip_first: bool,
        flip_second: bool,
        labels: Option<[String; 2]>,
    },
    /// Swaps the endpoints inside three empty arcs, each arc named by its
    /// first endpoint in orientation order.
    T3 { variant: T3Variant, arcs: [EndpointRef; 3] },
    T1aInverse { arrow: String },
    T1bInverse { arrow: String },
    T2Inverse { arrows: [String; 2] },
}

impl DiagramMove {
    pub fn kind(&self) -> MoveKind {
        match self {
            DiagramMove::T1a { .. } => MoveKind::T1a,
            DiagramMove::T1b { .. } => MoveKind::T1b,
            DiagramMove::T2 { .. } => MoveKind::T2,
            DiagramMove::T3 { variant, .. } => MoveKind::t3(*variant),
            DiagramMove::T1aInverse { .. } => MoveKind::T1aInverse,
            DiagramMove::T1bInverse { .. } => MoveKind::T1bInverse,
            DiagramMove::T2Inverse { .. } => MoveKind::T2Inverse,
        }
    }

    /// Applies the move, checking its preconditions.
    pub fn apply(&self, ms: &Multistring) -> Result<Multistring, DiagramError> {
        self.apply_with_inverse(ms).map(|(m, _)| m)
    }

    /// Applies the move and returns the move that undoes it on the result.
    pub fn apply_with_inverse(&self, ms: &Multistring) -> Result<(Multistring, DiagramMove), DiagramError> {
        ms.ensure_valid()?;
        let mut words: Vec<Vec<EndpointRef>> = (0..ms.circle_count()).map(|i| ms.word(i)).collect();
        let kind = self.kind();
        let inverse = match self {
            DiagramMove::T1a { gap, label } | DiagramMove::T1b { gap, label } => {
                check_gap(ms, *gap, kind)?;
                let label = pick_label(ms, label.as_deref(), &[], kind)?;
                let block = if kind == MoveKind::T1a {
                    vec![EndpointRef::tail(&label), EndpointRef::head(&label)]
                } else {
                    vec![EndpointRef::head(&label), EndpointRef::tail(&label)]
                };
                insert_blocks(&mut words, vec![(*gap, block)]);
                if kind == MoveKind::T1a {
                    DiagramMove::T1aInverse { arrow: label }
                } else {
                    DiagramMove::T1bInverse { arrow: label }
                }
            }
            DiagramMove::T2 { first, second, flip_first, flip_second, labels } => {
                check_gap(ms, *first, kind)?;
                check_gap(ms, *second, kind)?;
                let (l1, l2) = match labels {
                    Some([a, b]) => {
                        if a == b {
                            return Err(inapplicable(kind, format!("labels `{a}` coincide")));
                        }
                        (pick_label(ms, Some(a), &[], kind)?, pick_label(ms, Some(b), &[], kind)?)
                    }
                    None => {
                        let a = ms.fresh_label(&[]);
                        let b = ms.fresh_label(&[a.as_str()]);
                        (a, b)
                    }
                };
                let mut a_arc = vec![EndpointRef::tail(&l1), EndpointRef::head(&l2)];
                let mut b_arc = vec![EndpointRef::head(&l1), EndpointRef::tail(&l2)];
                if *flip_first {
                    a_arc.reverse();
                }
                if *flip_second {
                    b_arc.reverse();
                }
                if first == second {
                    a_arc.extend(b_arc);
                    insert_blocks(&mut words, vec![(*first, a_arc)]);
                } else {
                    insert_blocks(&mut words, vec![(*first, a_arc), (*second, b_arc)]);
                }
                DiagramMove::T2Inverse { arrows: [l1, l2] }
            }
            DiagramMove::T3 { variant, arcs } => {
                let slots = t3_slots(ms, arcs, kind)?;
                match classify_t3(ms, &slots) {
                    Some(v) if v == *variant => {}
                    Some(v) => {
                        return Err(inapplicable(kind, format!("arcs form a {:?} pattern", MoveKind::t3(v))))
                    }
                    None => return Err(inapplicable(kind, "arcs do not form a triangle of arrows")),
                }
                let mut new_arcs = arcs.clone();
                for (k, &(c, p)) in slots.iter().enumerate() {
                    let len = words[c].len();
                    words[c].swap(p, (p + 1) % len);
                    new_arcs[k] = words[c][p].clone();
                }
                DiagramMove::T3 { variant: variant.inverse(), arcs: new_arcs }
            }
            DiagramMove::T1aInverse { arrow } | DiagramMove::T1bInverse { arrow } => {
                let ends = ms.arrow(arrow)?;
                let (first, second) = if kind == MoveKind::T1aInverse {
                    (ends.tail, ends.head)
                } else {
                    (ends.head, ends.tail)
                };
                let (c, p) = ms.location(first).expect("valid diagram");
                let len = words[c].len();
                if ms.location(second) != Some((c, (p + 1) % len)) {
                    let order = if kind == MoveKind::T1aInverse { "tail then head" } else { "head then tail" };
                    return Err(inapplicable(kind, format!("`{arrow}` does not have adjacent endpoints ({order})")));
                }
                let gap = remove_runs(&mut words, &[(c, p, 2)])[0];
                if kind == MoveKind::T1aInverse {
                    DiagramMove::T1a { gap, label: Some(arrow.clone()) }
                } else {
                    DiagramMove::T1b { gap, label: Some(arrow.clone()) }
                }
            }
            DiagramMove::T2Inverse { arrows: [p, q] } => {
                if p == q {
                    return Err(inapplicable(kind, "needs two distinct arrows"));
                }
                let (ep, eq) = (ms.arrow(p)?, ms.arrow(q)?);
                let first = adjacent_run(ms, ep.tail, eq.head)
                    .ok_or_else(|| inapplicable(kind, format!("tail of `{p}` is not next to head of `{q}`")))?;
                let second = adjacent_run(ms, ep.head, eq.tail)
                    .ok_or_else(|| inapplicable(kind, format!("head of `{p}` is not next to tail of `{q}`")))?;
                t2_inverse(&mut words, ms, [first, second], [p, q])
            }
        };
        let out = Multistring::from_words(words)?;
        Ok((out, inverse))
    }
}

impl fmt::Display for DiagramMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let label = |l: &Option<String>| l.as_ref().map(|l| format!(" {l}")).unwrap_or_default();
        match self {
            DiagramMove::T1a { gap, label: l } => write!(f, "T1a {gap}{}", label(l)),
            DiagramMove::T1b { gap, label: l } => write!(f, "T1b {gap}{}", label(l)),
            DiagramMove::T2 { first, second, flip_first, flip_second, labels } => {
                write!(f, "T2 {first} {second} flips={}{}", *flip_first as u8, *flip_second as u8)?;
                if let Some([a, b]) = labels {
                    write!(f, " {a} {b}")?;
                }
                Ok(())
            }
            DiagramMove::T3 { variant, arcs } => {
                let name = match variant {
                    T3Variant::A => "T3a",
                    T3Variant::B => "T3b",
                    T3Variant::AInverse => "T3a^-1",
                    T3Variant::BInverse => "T3b^-1",
                };
                write!(f, "{name} {} {} {}", arcs[0], arcs[1], arcs[2])
            }
            DiagramMove::T1aInverse { arrow } => write!(f, "T1a^-1 {arrow}"),
            DiagramMove::T1bInverse { arrow } => write!(f, "T1b^-1 {arrow}"),
            DiagramMove::T2Inverse { arrows: [a, b] } => write!(f, "T2^-1 {a} {b}"),
        }
    }
}

fn inapplicable(kind: MoveKind, reason: impl Into<String>) -> DiagramError {
    DiagramError::Inapplicable { kind: format!("{kind:?}"), reason: reason.into() }
}

fn gap_count(ms: &Multistring, circle: usize) -> usize {
    ms.circles()[circle].len().max(1)
}

fn check_gap(ms: &Multistring, gap: Gap, kind: MoveKind) -> Result<(), DiagramError> {
    if gap.circle >= ms.circle_count() {
        return Err(inapplicable(kind, format!("circle {} does not exist", gap.circle)));
    }
    if gap.position >= gap_count(ms, gap.circle) {
        return Err(inapplicable(kind, format!("gap {gap} does not exist")));
    }
    Ok(())
}

fn pick_label(ms: &Multistring, wanted: Option<&str>, avoid: &[&str], kind: MoveKind) -> Result<String, DiagramError> {
    match wanted {
        Some(l) if !super::valid_label(l) => Err(inapplicable(kind, format!("label `{l}` is malformed"))),
        Some(l) if ms.arrows().contains_key(l) => Err(inapplicable(kind, format!("label `{l}` is taken"))),
        Some(l) => Ok(l.to_string()),
        None => Ok(ms.fresh_label(avoid)),
    }
}

/// Inserts each block right after the endpoint at its gap position.
fn insert_blocks(words: &mut [Vec<EndpointRef>], mut blocks: Vec<(Gap, Vec<EndpointRef>)>) {
    blocks.sort_by_key(|b| std::cmp::Reverse(b.0));
    for (gap, block) in blocks {
        let w = &mut words[gap.circle];
        let at = if w.is_empty() { 0 } else { gap.position + 1 };
        w.splice(at..at, block);
    }
}

/// Removes runs `(circle, start, length)` (cyclic, pairwise disjoint and not
/// touching) and reports the gap each run collapsed into.
fn remove_runs(words: &mut [Vec<EndpointRef>], runs: &[(usize, usize, usize)]) -> Vec<Gap> {
    let mut predecessors = Vec::new();
    for &(c, start, _) in runs {
        let len = words[c].len();
        let removed: Vec<usize> = runs
            .iter()
            .filter(|r| r.0 == c)
            .flat_map(|&(_, s, l)| (0..l).map(move |k| (s + k) % len))
            .collect();
        let pred = (1..len)
            .map(|k| (start + len - k) % len)
            .find(|i| !removed.contains(i));
        predecessors.push((c, pred, removed));
    }
    let mut result = Vec::new();
    for (c, pred, _) in &predecessors {
        let removed = &predecessors.iter().find(|p| p.0 == *c).expect("present").2;
        let position = match pred {
            Some(i) => i - removed.iter().filter(|&&r| r < *i).count(),
            None => 0,
        };
        result.push(Gap::new(*c, position));
    }
    let mut by_circle: Vec<(usize, Vec<usize>)> = Vec::new();
    for (c, _, removed) in predecessors {
        if !by_circle.iter().any(|(k, _)| *k == c) {
            by_circle.push((c, removed));
        }
    }
    for (c, mut removed) in by_circle {
        removed.sort_unstable_by(|a, b| b.cmp(a));
        removed.dedup();
        for i in removed {
            words[c].remove(i);
        }
    }
    result
}

/// If `u` and `v` are cyclically consecutive on one circle, the run start in
/// orientation order.
fn adjacent_run(ms: &Multistring, u: super::EndpointId, v: super::EndpointId) -> Option<(usize, usize)> {
    let (cu, pu) = ms.location(u)?;
    let (cv, pv) = ms.location(v)?;
    if cu != cv {
        return None;
    }
    let len = ms.circles()[cu].len();
    if (pu + 1) % len == pv {
        Some((cu, pu))
    } else if (pv + 1) % len == pu {
        Some((cu, pv))
    } else {
        None
    }
}

fn t2_inverse(
    words: &mut [Vec<EndpointRef>],
    ms: &Multistring,
    runs: [(usize, usize); 2],
    [p, q]: [&String; 2],
) -> DiagramMove {
    let [(c1, s1), (c2, s2)] = runs;
    let contiguous = |a: (usize, usize), b: (usize, usize)| {
        a.0 == b.0 && (a.1 + 2) % ms.circles()[a.0].len() == b.1
    };
    let word_at = |c: usize, s: usize| -> [EndpointRef; 2] {
        let len = ms.circles()[c].len();
        [ms.word(c)[s].clone(), ms.word(c)[(s + 1) % len].clone()]
    };
    // The first pair must hold the tail of the first new arrow.
    let (lead, trail, arrow1, arrow2, gaps) = if contiguous(runs[0], runs[1]) {
        let g = remove_runs(words, &[(c1, s1, 4)]);
        (runs[0], runs[1], p, q, [g[0], g[0]])
    } else if contiguous(runs[1], runs[0]) {
        let g = remove_runs(words, &[(c2, s2, 4)]);
        (runs[1], runs[0], q, p, [g[0], g[0]])
    } else {
        let g = remove_runs(words, &[(c1, s1, 2), (c2, s2, 2)]);
        (runs[0], runs[1], p, q, [g[0], g[1]])
    };
    let first = word_at(lead.0, lead.1);
    let second = word_at(trail.0, trail.1);
    // Unflipped orders are (a, a') = (tail arrow1, head arrow2) and
    // (b, b') = (head arrow1, tail arrow2).
    let flip_first = first[0] != EndpointRef::tail(arrow1.as_str());
    let flip_second = second[0] != EndpointRef::head(arrow1.as_str());
    DiagramMove::T2 {
        first: gaps[0],
        second: gaps[1],
        flip_first,
        flip_second,
        labels: Some([arrow1.clone(), arrow2.clone()]),
    }
}

/// Resolves three arcs to `(circle, position of first endpoint)`.
fn t3_slots(ms: &Multistring, arcs: &[EndpointRef; 3], kind: MoveKind) -> Result<[(usize, usize); 3], DiagramError> {
    let mut slots = [(0, 0); 3];
    let mut used = Vec::new();
    for (k, r) in arcs.iter().enumerate() {
        let e = ms.endpoint(r)?;
        let (c, p) = ms.location(e).expect("valid diagram");
        let len = ms.circles()[c].len();
        if len < 2 {
            return Err(inapplicable(kind, format!("arc at {r} has no second endpoint")));
        }
        let next = ms.circles()[c][(p + 1) % len];
        for x in [e, next] {
            if used.contains(&x) {
                return Err(inapplicable(kind, "arcs are not disjoint"));
            }
            used.push(x);
        }
        slots[k] = (c, p);
    }
    Ok(slots)
}

/// Which Type 3 pattern, if any, the three arcs form.
fn classify_t3(ms: &Multistring, slots: &[(usize, usize); 3]) -> Option<T3Variant> {
    let mut place = Vec::with_capacity(6);
    for (arc, &(c, p)) in slots.iter().enumerate() {
        let len = ms.circles()[c].len();
        for (slot, pos) in [p, (p + 1) % len].into_iter().enumerate() {
            let (label, role) = ms.owner(ms.circles()[c][pos])?;
            place.push((label, role, arc as u8, slot as u8));
        }
    }
    let mut labels: Vec<&str> = place.iter().map(|t| t.0).collect();
    labels.sort_unstable();
    labels.dedup();
    if labels.len() != 3 {
        return None;
    }
    let mut arrows = Vec::with_capacity(3);
    for l in labels {
        let t = place.iter().find(|t| t.0 == l && t.1 == Role::Tail)?;
        let h = place.iter().find(|t| t.0 == l && t.1 == Role::Head)?;
        if t.2 == h.2 {
            return None;
        }
        arrows.push((t.2, t.3, h.2, h.3));
    }
    const PERMS: [[u8; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    for perm in PERMS {
        let mut mapped: Vec<_> = arrows
            .iter()
            .map(|&(ta, ts, ha, hs)| (perm[ta as usize], ts, perm[ha as usize], hs))
            .collect();
        mapped.sort_unstable();
        for v in T3Variant::ALL {
            if mapped == v.pattern() {
                return Some(v);
            }
        }
    }
    None
}

/// Every applicable move of the requested kinds, in a fixed order: by kind as
/// listed in [`MoveKind::ALL`], then by location.
pub fn enumerate_applicable_moves(ms: &Multistring, kinds: &[MoveKind]) -> Vec<DiagramMove> {
    if !ms.validate().is_empty() {
        return Vec::new();
    }
    let gaps: Vec<Gap> = (0..ms.circle_count())
        .flat_map(|c| (0..gap_count(ms, c)).map(move |p| Gap::new(c, p)))
        .collect();
    let labels: Vec<&str> = {
        let mut v: Vec<&str> = ms.arrows().keys().map(String::as_str).collect();
        v.sort_by(|a, b| crate::util::natural_cmp(a, b));
        v
    };
    let t3 = if kinds.iter().any(|k| matches!(k, MoveKind::T3a | MoveKind::T3b | MoveKind::T3aInverse | MoveKind::T3bInverse)) {
        t3_candidates(ms)
    } else {
        Vec::new()
    };
    let mut out = Vec::new();
    for kind in MoveKind::ALL.into_iter().filter(|k| kinds.contains(k)) {
        match kind {
            MoveKind::T1a => out.extend(gaps.iter().map(|&gap| DiagramMove::T1a { gap, label: None })),
            MoveKind::T1b => out.extend(gaps.iter().map(|&gap| DiagramMove::T1b { gap, label: None })),
            MoveKind::T2 => {
                for (i, &first) in gaps.iter().enumerate() {
                    for &second in &gaps[i..] {
                        for (flip_first, flip_second) in [(false, false), (false, true), (true, false), (true, true)] {
                            out.push(DiagramMove::T2 { first, second, flip_first, flip_second, labels: None });
                        }
                    }
                }
            }
            MoveKind::T3a | MoveKind::T3b | MoveKind::T3aInverse | MoveKind::T3bInverse => {
                out.extend(t3.iter().filter(|m| m.kind() == kind).cloned())
            }
            MoveKind::T1aInverse | MoveKind::T1bInverse => {
                for &l in &labels {
                    let mv = if kind == MoveKind::T1aInverse {
                        DiagramMove::T1aInverse { arrow: l.to_string() }
                    } else {
                        DiagramMove::T1bInverse { arrow: l.to_string() }
                    };
                    if mv.apply(ms).is_ok() {
                        out.push(mv);
                    }
                }
            }
            MoveKind::T2Inverse => {
                for (i, &p) in labels.iter().enumerate() {
                    for &q in &labels[i + 1..] {
                        let (ep, eq) = (ms.arrows()[p], ms.arrows()[q]);
                        if adjacent_run(ms, ep.tail, eq.head).is_some()
                            && adjacent_run(ms, ep.head, eq.tail).is_some()
                        {
                            out.push(DiagramMove::T2Inverse { arrows: [p.to_string(), q.to_string()] });
                        }
                    }
                }
            }
        }
    }
    out
}

fn t3_candidates(ms: &Multistring) -> Vec<DiagramMove> {
    let mut arcs = Vec::new();
    for (c, circle) in ms.circles().iter().enumerate() {
        let len = circle.len();
        if len < 2 {
            continue;
        }
        for p in 0..len {
            let (a, _) = ms.owner(circle[p]).expect("valid");
            let (b, _) = ms.owner(circle[(p + 1) % len]).expect("valid");
            if a != b {
                arcs.push((c, p));
            }
        }
    }
    let ends = |&(c, p): &(usize, usize)| {
        let circle = &ms.circles()[c];
        [circle[p], circle[(p + 1) % circle.len()]]
    };
    let mut out = Vec::new();
    for i in 0..arcs.len() {
        let ei = ends(&arcs[i]);
        for j in i + 1..arcs.len() {
            let ej = ends(&arcs[j]);
            if ej.iter().any(|e| ei.contains(e)) {
                continue;
            }
            for k in j + 1..arcs.len() {
                let ek = ends(&arcs[k]);
                if ek.iter().any(|e| ei.contains(e) || ej.contains(e)) {
                    continue;
                }
                let slots = [arcs[i], arcs[j], arcs[k]];
                if let Some(variant) = classify_t3(ms, &slots) {
                    let refs = slots.map(|(c, p)| ms.endpoint_ref(ms.circles()[c][p]).expect("valid"));
                    out.push(DiagramMove::T3 { variant, arcs: refs });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{fixture_sigma, fixture_tau, gen_alpha, parse_multistring, random_multistring};

    fn ms(t: &str) -> Multistring {
        parse_multistring(t).unwrap()
    }

    #[test]
    fn t1a_on_empty_circle() {
        let empty = gen_alpha(0, 0);
        let moves = enumerate_applicable_moves(&empty, &[MoveKind::T1a]);
        assert_eq!(moves.len(), 1);
        let out = moves[0].apply(&empty).unwrap();
        assert!(out.equivalent_up_to_relabeling(&ms("circle: a+ a-")));
    }

    #[test]
    fn t1a_inverse_on_kink() {
        let kink = ms("circle: a+ a-");
        let moves = enumerate_applicable_moves(&kink, &[MoveKind::T1aInverse]);
        assert_eq!(moves, vec![DiagramMove::T1aInverse { arrow: "a".into() }]);
        assert_eq!(moves[0].apply(&kink).unwrap(), gen_alpha(0, 0));
    }

    #[test]
    fn t1_inverse_needs_adjacent_endpoints() {
        let m = ms("circle: a+ b+ a- b-");
        let err = DiagramMove::T1aInverse { arrow: "a".into() }.apply(&m).unwrap_err();
        assert!(matches!(err, DiagramError::Inapplicable { .. }));
        assert!(err.to_string().contains("adjacent"));
    }

    #[test]
    fn t2_same_gap_and_distinct_circles() {
        let two = ms("circle:\ncircle:");
        let mv = DiagramMove::T2 {
            first: Gap::new(0, 0),
            second: Gap::new(1, 0),
            flip_first: false,
            flip_second: false,
            labels: Some(["x".into(), "y".into()]),
        };
        let (out, inv) = mv.apply_with_inverse(&two).unwrap();
        assert_eq!(out, ms("circle: x+ y-\ncircle: x- y+"));
        assert_eq!(inv.apply(&out).unwrap(), two);

        let one = gen_alpha(0, 0);
        let mv = DiagramMove::T2 {
            first: Gap::new(0, 0),
            second: Gap::new(0, 0),
            flip_first: true,
            flip_second: false,
            labels: Some(["x".into(), "y".into()]),
        };
        assert_eq!(mv.apply(&one).unwrap(), ms("circle: y- x+ x- y+"));
    }

    #[test]
    fn t3_patterns_from_the_definitions() {
        // (a+, b), (b+, c), (c+, a) with arcs a a+ | b b+ | c c+.
        let a = ms("circle: r- p+ p- q+ q- r+");
        let moves = enumerate_applicable_moves(&a, &[MoveKind::T3a, MoveKind::T3aInverse]);
        assert!(moves.iter().any(|m| m.kind() == MoveKind::T3a), "{moves:?}");
        // (a, b), (a+, c), (b+, c+).
        let b = ms("circle: p+ q+ p- r+\ncircle: q- r-");
        let moves = enumerate_applicable_moves(&b, &[MoveKind::T3b]);
        assert_eq!(moves.len(), 1, "{moves:?}");
        let (out, inv) = moves[0].apply_with_inverse(&b).unwrap();
        assert_eq!(out, ms("circle: q+ p+ r+ p-\ncircle: r- q-"));
        assert_eq!(inv.kind(), MoveKind::T3bInverse);
        assert_eq!(inv.apply(&out).unwrap(), b);
    }

    #[test]
    fn t3_rejects_wrong_variant() {
        let b = ms("circle: p+ q+ p- r+\ncircle: q- r-");
        let mv = enumerate_applicable_moves(&b, &[MoveKind::T3b]).remove(0);
        let DiagramMove::T3 { arcs, .. } = mv else { unreachable!() };
        let wrong = DiagramMove::T3 { variant: T3Variant::A, arcs };
        assert!(wrong.apply(&b).is_err());
    }

    #[test]
    fn every_enumerated_move_round_trips() {
        let mut diagrams = vec![fixture_sigma(), fixture_tau(), gen_alpha(2, 1)];
        diagrams.extend((0..30).map(|s| random_multistring(1 + (s as usize % 3), 4, s).unwrap()));
        for d in diagrams {
            for mv in enumerate_applicable_moves(&d, &MoveKind::ALL) {
                let (out, inv) = mv.apply_with_inverse(&d).unwrap_or_else(|e| panic!("{mv}: {e}"));
                assert!(out.validate().is_empty());
                let delta = out.arrow_count() as i64 - d.arrow_count() as i64;
                let expected = match mv.kind() {
                    MoveKind::T1a | MoveKind::T1b => 1,
                    MoveKind::T2 => 2,
                    MoveKind::T1aInverse | MoveKind::T1bInverse => -1,
                    MoveKind::T2Inverse => -2,
                    _ => 0,
                };
                assert_eq!(delta, expected, "{mv}");
                assert_eq!(inv.apply(&out).unwrap(), d, "{mv} then {inv}");
            }
        }
    }

    #[test]
    fn enumeration_is_deterministic_and_duplicate_free() {
        let s = fixture_sigma();
        let a = enumerate_applicable_moves(&s, &MoveKind::ALL);
        let b = enumerate_applicable_moves(&s, &MoveKind::ALL);
        assert_eq!(a, b);
        let set: std::collections::HashSet<_> = a.iter().collect();
        assert_eq!(set.len(), a.len());
    }
}
