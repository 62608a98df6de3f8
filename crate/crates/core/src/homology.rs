//! Elementary extensions, intersection moves and reduction to primitive form.
//!
//! An intersection move on `g ∈ G_j` only toggles entries `b(g, x)` between
//! `0` and `b(s_j, x)`. Writing `y_x = [b(g,x) ≠ 0] xor [b(s_j,x) < 0]`, both
//! `I1` and `I2` swap two unequal coordinates of `y` whose base values have
//! the same magnitude, and moves on different `g` commute. The orbit of a
//! matrix is therefore the product, over `g` and magnitude classes, of all
//! `y` vectors with a fixed number of ones. The exact search below works in
//! these coordinates; the breadth-first search is kept as a literal oracle.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::MatrixError;
use crate::pairing::{validate_woven, ElementId, WovenBasedMatrix};

pub const DEFAULT_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum MatrixMove {
    /// Adds a `G_j`-annihilating element.
    M1 { component: usize, element: String },
    /// Adds a `G_j`-core element.
    M2 { component: usize, element: String },
    /// Adds a `G_j`-complementary pair; `assignment` gives `b(g1, a)` for
    /// existing `a` (missing names read as 0).
    M3 { component: usize, elements: [String; 2], assignment: BTreeMap<String, i64> },
    /// Adds a sum-annihilating pair; `assignment` gives `b(a, x1)` for
    /// `a ∈ G` (missing names read as 0).
    M4 { elements: [String; 2], assignment: BTreeMap<String, i64> },
    M1Inverse { element: String },
    M2Inverse { element: String },
    M3Inverse { elements: [String; 2] },
    M4Inverse { elements: [String; 2] },
    I1 { g: String, pair: [String; 2] },
    I2 { g: String, pair: [String; 2] },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ExtensionKind {
    M1,
    M2,
    M3,
    M4,
}

pub const DEFAULT_PRIORITY: [ExtensionKind; 4] =
    [ExtensionKind::M1, ExtensionKind::M2, ExtensionKind::M3, ExtensionKind::M4];

impl MatrixMove {
    pub fn is_intersection(&self) -> bool {
        matches!(self, MatrixMove::I1 { .. } | MatrixMove::I2 { .. })
    }

    /// `(g, [x1, x2])` of an intersection move.
    pub fn intersection_parts(&self) -> Option<(&str, [&str; 2])> {
        match self {
            MatrixMove::I1 { g, pair } | MatrixMove::I2 { g, pair } => Some((g, [&pair[0], &pair[1]])),
            _ => None,
        }
    }

    fn intersection(kind: u8, g: &str, a: &str, b: &str) -> Self {
        let (g, pair) = (g.to_string(), [a.to_string(), b.to_string()]);
        if kind == 1 {
            MatrixMove::I1 { g, pair }
        } else {
            MatrixMove::I2 { g, pair }
        }
    }
}

fn write_assignment(f: &mut fmt::Formatter<'_>, a: &BTreeMap<String, i64>) -> fmt::Result {
    for (k, (name, v)) in a.iter().enumerate() {
        write!(f, "{}{name}={v}", if k == 0 { ";" } else { "," })?;
    }
    Ok(())
}

impl fmt::Display for MatrixMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixMove::M1 { component, element } => write!(f, "M1[{}]({element})", component + 1),
            MatrixMove::M2 { component, element } => write!(f, "M2[{}]({element})", component + 1),
            MatrixMove::M3 { component, elements: [a, b], assignment } => {
                write!(f, "M3[{}]({a},{b}", component + 1)?;
                write_assignment(f, assignment)?;
                f.write_str(")")
            }
            MatrixMove::M4 { elements: [a, b], assignment } => {
                write!(f, "M4({a},{b}")?;
                write_assignment(f, assignment)?;
                f.write_str(")")
            }
            MatrixMove::M1Inverse { element } => write!(f, "M1^-1({element})"),
            MatrixMove::M2Inverse { element } => write!(f, "M2^-1({element})"),
            MatrixMove::M3Inverse { elements: [a, b] } => write!(f, "M3^-1({a},{b})"),
            MatrixMove::M4Inverse { elements: [a, b] } => write!(f, "M4^-1({a},{b})"),
            MatrixMove::I1 { g, pair: [a, b] } => write!(f, "I1({g};{a},{b})"),
            MatrixMove::I2 { g, pair: [a, b] } => write!(f, "I2({g};{a},{b})"),
        }
    }
}

impl FromStr for MatrixMove {
    type Err = MatrixError;

    /// Parses the [`Display`](fmt::Display) form, e.g. `I2(g1;x1,x2)` or
    /// `M3[2](a,b;s1=1,x3=-1)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || MatrixError::Format(format!("cannot parse move `{s}`"));
        let s = s.trim();
        let open = s.find('(').ok_or_else(bad)?;
        let inner = s[open + 1..].strip_suffix(')').ok_or_else(bad)?;
        let (head, component) = match s[..open].split_once('[') {
            Some((h, rest)) => {
                let j: usize = rest.strip_suffix(']').and_then(|j| j.parse().ok()).ok_or_else(bad)?;
                (h, Some(j.checked_sub(1).ok_or_else(bad)?))
            }
            None => (&s[..open], None),
        };
        let (args, tail) = match inner.split_once(';') {
            Some((a, t)) => (a, Some(t)),
            None => (inner, None),
        };
        let args: Vec<String> = args.split(',').map(|a| a.trim().to_string()).filter(|a| !a.is_empty()).collect();
        let one = || -> Result<String, MatrixError> {
            match args.as_slice() {
                [a] => Ok(a.clone()),
                _ => Err(bad()),
            }
        };
        let two = || -> Result<[String; 2], MatrixError> {
            match args.as_slice() {
                [a, b] => Ok([a.clone(), b.clone()]),
                _ => Err(bad()),
            }
        };
        let assignment = || -> Result<BTreeMap<String, i64>, MatrixError> {
            let mut out = BTreeMap::new();
            for kv in tail.unwrap_or("").split(',').map(str::trim).filter(|kv| !kv.is_empty()) {
                let (k, v) = kv.split_once('=').ok_or_else(bad)?;
                let v: i64 = v.trim().parse().map_err(|_| bad())?;
                if out.insert(k.trim().to_string(), v).is_some() {
                    return Err(MatrixError::BadAssignment(format!("`{}` assigned twice", k.trim())));
                }
            }
            Ok(out)
        };
        let no_tail = |m: MatrixMove| if tail.is_some() { Err(bad()) } else { Ok(m) };
        match (head, component) {
            ("M1", Some(component)) => no_tail(MatrixMove::M1 { component, element: one()? }),
            ("M2", Some(component)) => no_tail(MatrixMove::M2 { component, element: one()? }),
            ("M3", Some(component)) => Ok(MatrixMove::M3 { component, elements: two()?, assignment: assignment()? }),
            ("M4", None) => Ok(MatrixMove::M4 { elements: two()?, assignment: assignment()? }),
            ("M1^-1", None) => no_tail(MatrixMove::M1Inverse { element: one()? }),
            ("M2^-1", None) => no_tail(MatrixMove::M2Inverse { element: one()? }),
            ("M3^-1", None) => no_tail(MatrixMove::M3Inverse { elements: two()? }),
            ("M4^-1", None) => no_tail(MatrixMove::M4Inverse { elements: two()? }),
            ("I1" | "I2", None) => {
                let g = one()?;
                let pair: Vec<&str> = tail.ok_or_else(bad)?.split(',').map(str::trim).collect();
                match pair.as_slice() {
                    [a, b] => Ok(MatrixMove::intersection(if head == "I1" { 1 } else { 2 }, &g, a, b)),
                    _ => Err(bad()),
                }
            }
            _ => Err(bad()),
        }
    }
}

// ---------------------------------------------------------------------------
// Distinguished elements.

/// `b(g, a) = 0` for every `a`.
pub fn is_annihilating(m: &WovenBasedMatrix, g: usize) -> bool {
    matches!(m.elements()[g], ElementId::SelfArrow(..)) && m.row(g).iter().all(|&v| v == 0)
}

/// `b(g, a) = b(s_i, a)` for every `a`.
pub fn is_core(m: &WovenBasedMatrix, g: usize) -> bool {
    match m.elements()[g] {
        ElementId::SelfArrow(i, _) => m.row(g) == m.row(m.base(i)),
        _ => false,
    }
}

/// `b(g1, a) + b(g2, a) = b(s_i, a)` for every `a`.
pub fn is_complementary(m: &WovenBasedMatrix, g1: usize, g2: usize) -> bool {
    match (&m.elements()[g1], &m.elements()[g2]) {
        (ElementId::SelfArrow(i, _), ElementId::SelfArrow(j, _)) if i == j && g1 != g2 => {
            let s = m.base(*i);
            (0..m.dim()).all(|a| m.at(g1, a) + m.at(g2, a) == m.at(s, a))
        }
        _ => false,
    }
}

/// `b(x1, a) + b(x2, a) = 0` for every `a`.
pub fn is_sum_annihilating(m: &WovenBasedMatrix, x1: usize, x2: usize) -> bool {
    x1 != x2
        && m.elements()[x1].is_weaving()
        && m.elements()[x2].is_weaving()
        && (0..m.dim()).all(|a| m.at(x1, a) + m.at(x2, a) == 0)
}

fn self_component(m: &WovenBasedMatrix, g: usize) -> Option<usize> {
    match m.elements()[g] {
        ElementId::SelfArrow(i, _) => Some(i),
        _ => None,
    }
}

/// `b(g,x1) + b(g,x2) = 0 = b(s_j,x1) + b(s_j,x2)`.
pub fn is_g_annihilating(m: &WovenBasedMatrix, g: usize, x1: usize, x2: usize) -> bool {
    let Some(j) = self_component(m, g) else { return false };
    let s = m.base(j);
    x1 != x2 && m.at(g, x1) + m.at(g, x2) == 0 && m.at(s, x1) + m.at(s, x2) == 0
}

/// `b(g,x1) ≠ b(g,x2)` and `b(s_j,x1) = b(s_j,x2)`.
pub fn is_g_unequal(m: &WovenBasedMatrix, g: usize, x1: usize, x2: usize) -> bool {
    let Some(j) = self_component(m, g) else { return false };
    let s = m.base(j);
    x1 != x2 && m.at(g, x1) != m.at(g, x2) && m.at(s, x1) == m.at(s, x2)
}

/// All distinguished elements, as matrix indices in element order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Classification {
    pub annihilating: Vec<usize>,
    pub core: Vec<usize>,
    pub complementary: Vec<(usize, usize)>,
    pub sum_annihilating: Vec<(usize, usize)>,
    /// `(g, x1, x2)`. Pairs on which the move would change nothing, because
    /// `b(s_j, x1) = b(s_j, x2) = 0`, are left out.
    pub g_annihilating: Vec<(usize, usize, usize)>,
    pub g_unequal: Vec<(usize, usize, usize)>,
}

impl Classification {
    pub fn admits_inverse_extension(&self) -> bool {
        !(self.annihilating.is_empty()
            && self.core.is_empty()
            && self.complementary.is_empty()
            && self.sum_annihilating.is_empty())
    }

    pub fn to_json(&self, m: &WovenBasedMatrix) -> serde_json::Value {
        let n = |a: usize| m.elements()[a].to_string();
        let pairs = |v: &[(usize, usize)]| v.iter().map(|&(a, b)| vec![n(a), n(b)]).collect::<Vec<_>>();
        let triples = |v: &[(usize, usize, usize)]| {
            v.iter().map(|&(g, a, b)| serde_json::json!({ "g": n(g), "pair": [n(a), n(b)] })).collect::<Vec<_>>()
        };
        serde_json::json!({
            "annihilating": self.annihilating.iter().map(|&a| n(a)).collect::<Vec<_>>(),
            "core": self.core.iter().map(|&a| n(a)).collect::<Vec<_>>(),
            "complementary": pairs(&self.complementary),
            "sum_annihilating": pairs(&self.sum_annihilating),
            "g_annihilating": triples(&self.g_annihilating),
            "g_unequal": triples(&self.g_unequal),
        })
    }
}

fn non_base_self_arrows(m: &WovenBasedMatrix) -> Vec<usize> {
    (0..m.dim()).filter(|&a| self_component(m, a).is_some()).collect()
}

pub fn classify(m: &WovenBasedMatrix) -> Classification {
    let gs = non_base_self_arrows(m);
    let xs = m.weaving();
    let mut c = Classification::default();
    for &g in &gs {
        if is_annihilating(m, g) {
            c.annihilating.push(g);
        }
        if is_core(m, g) {
            c.core.push(g);
        }
    }
    for (k, &g1) in gs.iter().enumerate() {
        for &g2 in &gs[k + 1..] {
            if is_complementary(m, g1, g2) {
                c.complementary.push((g1, g2));
            }
        }
    }
    for (k, &x1) in xs.iter().enumerate() {
        for &x2 in &xs[k + 1..] {
            if is_sum_annihilating(m, x1, x2) {
                c.sum_annihilating.push((x1, x2));
            }
        }
    }
    for &g in &gs {
        let s = m.base(self_component(m, g).expect("self-arrow"));
        for (k, &x1) in xs.iter().enumerate() {
            for &x2 in &xs[k + 1..] {
                if is_g_annihilating(m, g, x1, x2) && m.at(s, x1) != 0 {
                    c.g_annihilating.push((g, x1, x2));
                }
                if is_g_unequal(m, g, x1, x2) {
                    c.g_unequal.push((g, x1, x2));
                }
            }
        }
    }
    c
}

/// Every intersection move that changes `m`, in classification order.
pub fn intersection_moves(m: &WovenBasedMatrix) -> Vec<MatrixMove> {
    let n = |a: usize| m.elements()[a].to_string();
    let c = classify(m);
    let mut out: Vec<(usize, usize, usize, u8)> = c
        .g_annihilating
        .iter()
        .map(|&(g, a, b)| (g, a, b, 1))
        .chain(c.g_unequal.iter().map(|&(g, a, b)| (g, a, b, 2)))
        .collect();
    out.sort_unstable();
    out.into_iter().map(|(g, a, b, k)| MatrixMove::intersection(k, &n(g), &n(a), &n(b))).collect()
}

// ---------------------------------------------------------------------------
// Applying moves.

fn lookup(m: &WovenBasedMatrix, name: &str) -> Result<usize, MatrixError> {
    m.find(name).ok_or_else(|| MatrixError::UnknownElement(name.to_string()))
}

fn inapplicable(mv: &MatrixMove, reason: impl Into<String>) -> MatrixError {
    MatrixError::Inapplicable { mv: mv.to_string(), reason: reason.into() }
}

fn check_fresh(m: &WovenBasedMatrix, names: &[&String]) -> Result<(), MatrixError> {
    for (k, n) in names.iter().enumerate() {
        if !crate::diagram::valid_label(n) {
            return Err(MatrixError::Format(format!("malformed element name `{n}`")));
        }
        if m.elements().iter().any(|e| e.label() == Some(n.as_str())) || names[..k].contains(n) {
            return Err(MatrixError::DuplicateElement(n.to_string()));
        }
    }
    Ok(())
}

fn resolve_assignment(
    m: &WovenBasedMatrix,
    assignment: &BTreeMap<String, i64>,
    allow_weaving: bool,
) -> Result<HashMap<usize, i64>, MatrixError> {
    let mut out = HashMap::new();
    for (name, &v) in assignment {
        let a = m
            .find(name)
            .ok_or_else(|| MatrixError::BadAssignment(format!("unknown element `{name}`")))?;
        if !allow_weaving && m.elements()[a].is_weaving() {
            return Err(MatrixError::BadAssignment(format!("`{name}` is in the weaving set")));
        }
        out.insert(a, v);
    }
    Ok(out)
}

fn check_component(m: &WovenBasedMatrix, j: usize) -> Result<(), MatrixError> {
    if j >= m.n_components() {
        return Err(MatrixError::Format(format!("component {} out of range", j + 1)));
    }
    Ok(())
}

fn finish(m: WovenBasedMatrix) -> Result<WovenBasedMatrix, MatrixError> {
    let v = validate_woven(&m);
    if v.is_empty() {
        Ok(m)
    } else {
        Err(MatrixError::Invalid(v))
    }
}

/// Applies a move, checking its preconditions and the constraints on any
/// assignment.
pub fn apply_matrix_move(m: &WovenBasedMatrix, mv: &MatrixMove) -> Result<WovenBasedMatrix, MatrixError> {
    match mv {
        MatrixMove::I1 { g, pair: [a, b] } | MatrixMove::I2 { g, pair: [a, b] } => {
            let (gi, xa, xb) = (lookup(m, g)?, lookup(m, a)?, lookup(m, b)?);
            let Some(j) = self_component(m, gi) else {
                return Err(inapplicable(mv, format!("`{g}` is not a non-base element of G")));
            };
            if !m.elements()[xa].is_weaving() || !m.elements()[xb].is_weaving() || xa == xb {
                return Err(inapplicable(mv, "needs two distinct weaving elements"));
            }
            let ok = if matches!(mv, MatrixMove::I1 { .. }) {
                is_g_annihilating(m, gi, xa, xb)
            } else {
                is_g_unequal(m, gi, xa, xb)
            };
            if !ok {
                let what = if matches!(mv, MatrixMove::I1 { .. }) { "g-annihilating" } else { "g-unequal" };
                return Err(inapplicable(mv, format!("({a},{b}) is not {what} for `{g}`")));
            }
            let s = m.base(j);
            let mut out = m.clone();
            for x in [xa, xb] {
                out.set(gi, x, m.at(s, x) - m.at(gi, x));
            }
            Ok(out)
        }
        MatrixMove::M1 { component, element } | MatrixMove::M2 { component, element } => {
            check_component(m, *component)?;
            check_fresh(m, &[element])?;
            let s = m.base(*component);
            let core = matches!(mv, MatrixMove::M2 { .. });
            let new = ElementId::SelfArrow(*component, element.clone());
            let out = m.with_added(vec![new], |_, other| {
                if core {
                    m.index_of(other).map_or(0, |a| m.at(s, a))
                } else {
                    0
                }
            })?;
            finish(out)
        }
        MatrixMove::M3 { component, elements: [e1, e2], assignment } => {
            check_component(m, *component)?;
            check_fresh(m, &[e1, e2])?;
            let j = *component;
            let s = m.base(j);
            let vals = resolve_assignment(m, assignment, true)?;
            let b1 = |a: usize| vals.get(&a).copied().unwrap_or(0);
            let (id1, id2) = (ElementId::SelfArrow(j, e1.clone()), ElementId::SelfArrow(j, e2.clone()));
            let b12 = b1(s);
            let out = m.with_added(vec![id1.clone(), id2.clone()], |new, other| {
                if let Some(a) = m.index_of(other) {
                    if *new == id1 {
                        b1(a)
                    } else {
                        m.at(s, a) - b1(a)
                    }
                } else if *new == id1 {
                    b12
                } else {
                    -b12
                }
            })?;
            finish(out).map_err(|e| match e {
                MatrixError::Invalid(v) => MatrixError::BadAssignment(format!(
                    "violates the weaving axioms: {}",
                    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
                )),
                e => e,
            })
        }
        MatrixMove::M4 { elements: [e1, e2], assignment } => {
            check_fresh(m, &[e1, e2])?;
            let vals = resolve_assignment(m, assignment, false)?;
            let col = |a: usize| vals.get(&a).copied().unwrap_or(0);
            let (id1, id2) = (ElementId::Weaving(e1.clone()), ElementId::Weaving(e2.clone()));
            let out = m.with_added(vec![id1.clone(), id2.clone()], |new, other| match m.index_of(other) {
                Some(a) if !m.elements()[a].is_weaving() => {
                    if *new == id1 {
                        -col(a)
                    } else {
                        col(a)
                    }
                }
                _ => 0,
            })?;
            finish(out).map_err(|e| match e {
                MatrixError::Invalid(v) => MatrixError::BadAssignment(format!(
                    "violates the weaving axioms: {}",
                    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
                )),
                e => e,
            })
        }
        MatrixMove::M1Inverse { element } | MatrixMove::M2Inverse { element } => {
            let g = lookup(m, element)?;
            let ok = if matches!(mv, MatrixMove::M1Inverse { .. }) { is_annihilating(m, g) } else { is_core(m, g) };
            if !ok {
                let what = if matches!(mv, MatrixMove::M1Inverse { .. }) { "annihilating" } else { "core" };
                return Err(inapplicable(mv, format!("`{element}` is not {what}")));
            }
            Ok(m.without(&[g]))
        }
        MatrixMove::M3Inverse { elements: [a, b] } => {
            let (g1, g2) = (lookup(m, a)?, lookup(m, b)?);
            if !is_complementary(m, g1, g2) {
                return Err(inapplicable(mv, format!("`{a}`, `{b}` are not complementary")));
            }
            Ok(m.without(&[g1, g2]))
        }
        MatrixMove::M4Inverse { elements: [a, b] } => {
            let (x1, x2) = (lookup(m, a)?, lookup(m, b)?);
            if !is_sum_annihilating(m, x1, x2) {
                return Err(inapplicable(mv, format!("`{a}`, `{b}` are not sum-annihilating")));
            }
            Ok(m.without(&[x1, x2]))
        }
    }
}

/// Applies moves in order.
pub fn apply_sequence(m: &WovenBasedMatrix, moves: &[MatrixMove]) -> Result<WovenBasedMatrix, MatrixError> {
    let mut cur = m.clone();
    for mv in moves {
        cur = apply_matrix_move(&cur, mv)?;
    }
    Ok(cur)
}

// ---------------------------------------------------------------------------
// Random valid extensions, for property tests and fuzzing.

/// A random valid `M3` assignment on component `j`.
pub fn sample_m3(m: &WovenBasedMatrix, j: usize, names: [String; 2], rng: &mut impl Rng) -> MatrixMove {
    let s = m.base(j);
    let mut assignment = BTreeMap::new();
    for a in 0..m.dim() {
        let e = &m.elements()[a];
        let v = if e.is_weaving() {
            if rng.gen_bool(0.5) {
                m.at(s, a)
            } else {
                0
            }
        } else {
            rng.gen_range(-2..=2)
        };
        if v != 0 {
            assignment.insert(e.to_string(), v);
        }
    }
    MatrixMove::M3 { component: j, elements: names, assignment }
}

/// A random valid `M4` assignment joining two distinct components. Returns
/// `None` for one-component matrices.
pub fn sample_m4(m: &WovenBasedMatrix, names: [String; 2], rng: &mut impl Rng) -> Option<MatrixMove> {
    let n = m.n_components();
    if n < 2 {
        return None;
    }
    let mut comps: Vec<usize> = (0..n).collect();
    comps.shuffle(rng);
    let (i, j) = (comps[0], comps[1]);
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    let mut assignment = BTreeMap::new();
    for (c, v) in [(i, sign), (j, -sign)] {
        assignment.insert(ElementId::Base(c).to_string(), v);
        for g in m.self_arrows(c) {
            if rng.gen_bool(0.5) {
                assignment.insert(m.elements()[g].to_string(), v);
            }
        }
    }
    Some(MatrixMove::M4 { elements: names, assignment })
}

/// Smallest `n<k>` names not used by `m`.
pub fn fresh_names(m: &WovenBasedMatrix, count: usize) -> Vec<String> {
    (0..)
        .map(|k| format!("n{k}"))
        .filter(|l| m.elements().iter().all(|e| e.label() != Some(l.as_str())))
        .take(count)
        .collect()
}

// ---------------------------------------------------------------------------
// Orbit coordinates.

/// `(x, |b(s_j,x)|, y_x)` for every `x` with `b(s_j, x) ≠ 0`, in element order.
pub(crate) fn coordinates(m: &WovenBasedMatrix, g: usize) -> Vec<(usize, i64, bool)> {
    let s = m.base(self_component(m, g).expect("self-arrow"));
    m.weaving()
        .into_iter()
        .filter(|&x| m.at(s, x) != 0)
        .map(|x| (x, m.at(s, x).abs(), (m.at(g, x) != 0) ^ (m.at(s, x) < 0)))
        .collect()
}

/// Per magnitude class of `g`'s coordinates: `(magnitude, size, ones)`.
/// Constant along the intersection orbit.
pub fn orbit_signature(m: &WovenBasedMatrix, g: usize) -> Vec<(i64, usize, usize)> {
    let mut classes: BTreeMap<i64, (usize, usize)> = BTreeMap::new();
    for (_, mag, y) in coordinates(m, g) {
        let c = classes.entry(mag).or_default();
        c.0 += 1;
        c.1 += y as usize;
    }
    classes.into_iter().map(|(mag, (size, ones))| (mag, size, ones)).collect()
}

/// Number of matrices in the intersection orbit (saturating).
pub fn orbit_size(m: &WovenBasedMatrix) -> u128 {
    fn binom(n: usize, k: usize) -> u128 {
        let k = k.min(n - k);
        (0..k).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
    }
    non_base_self_arrows(m)
        .into_iter()
        .flat_map(|g| orbit_signature(m, g))
        .fold(1u128, |acc, (_, size, ones)| acc.saturating_mul(binom(size, ones)))
}

/// Intersection moves on `g` taking its coordinates to `target(x)`; `None` if
/// the target is outside the orbit. Each `x` is touched at most once.
pub(crate) fn moves_to(m: &WovenBasedMatrix, g: usize, target: impl Fn(usize) -> bool) -> Option<Vec<MatrixMove>> {
    let name = |a: usize| m.elements()[a].to_string();
    let s = m.base(self_component(m, g)?);
    let coords = coordinates(m, g);
    let mut by_class: BTreeMap<i64, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for &(x, mag, y) in &coords {
        let t = target(x);
        if y != t {
            let e = by_class.entry(mag).or_default();
            if y {
                e.0.push(x);
            } else {
                e.1.push(x);
            }
        }
    }
    let mut moves = Vec::new();
    for (down, up) in by_class.values() {
        if down.len() != up.len() {
            return None;
        }
        for (&a, &b) in down.iter().zip(up) {
            let (a, b) = (a.min(b), a.max(b));
            let kind = if m.at(s, a) == m.at(s, b) { 2 } else { 1 };
            moves.push((a, b, kind));
        }
    }
    moves.sort_unstable();
    Some(moves.into_iter().map(|(a, b, k)| MatrixMove::intersection(k, &name(g), &name(a), &name(b))).collect())
}

fn y_at(m: &WovenBasedMatrix, g: usize, x: usize) -> bool {
    let s = m.base(self_component(m, g).expect("self-arrow"));
    (m.at(g, x) != 0) ^ (m.at(s, x) < 0)
}

/// The cheapest inverse extension reachable by intersection moves: fewest
/// moves first, then `priority`, then element order.
fn cheapest_extension(m: &WovenBasedMatrix, priority: &[ExtensionKind]) -> Option<(Vec<MatrixMove>, MatrixMove)> {
    let name = |a: usize| m.elements()[a].to_string();
    let gs = non_base_self_arrows(m);
    let xs = m.weaving();
    let fixed: Vec<usize> = (0..m.dim()).filter(|&a| !m.elements()[a].is_weaving()).collect();
    let mut best: Option<(usize, Vec<MatrixMove>, MatrixMove)> = None;
    let offer = |moves: Vec<MatrixMove>, ext: MatrixMove, best: &mut Option<(usize, Vec<MatrixMove>, MatrixMove)>| {
        if best.as_ref().is_none_or(|b| moves.len() < b.0) {
            *best = Some((moves.len(), moves, ext));
        }
    };
    for &kind in priority {
        match kind {
            ExtensionKind::M1 => {
                for &g in &gs {
                    if fixed.iter().all(|&a| m.at(g, a) == 0) {
                        let s = m.base(self_component(m, g).unwrap());
                        if let Some(mv) = moves_to(m, g, |x| m.at(s, x) < 0) {
                            offer(mv, MatrixMove::M1Inverse { element: name(g) }, &mut best);
                        }
                    }
                }
            }
            ExtensionKind::M2 => {
                for &g in &gs {
                    let s = m.base(self_component(m, g).unwrap());
                    if fixed.iter().all(|&a| m.at(g, a) == m.at(s, a)) {
                        if let Some(mv) = moves_to(m, g, |x| m.at(s, x) > 0) {
                            offer(mv, MatrixMove::M2Inverse { element: name(g) }, &mut best);
                        }
                    }
                }
            }
            ExtensionKind::M3 => {
                for (k, &g1) in gs.iter().enumerate() {
                    for &g2 in &gs[k + 1..] {
                        let j = self_component(m, g1).unwrap();
                        if self_component(m, g2) != Some(j) {
                            continue;
                        }
                        let s = m.base(j);
                        if fixed.iter().all(|&a| m.at(g1, a) + m.at(g2, a) == m.at(s, a)) {
                            if let Some(mv) = moves_to(m, g1, |x| !y_at(m, g2, x)) {
                                offer(mv, MatrixMove::M3Inverse { elements: [name(g1), name(g2)] }, &mut best);
                            }
                        }
                    }
                }
            }
            ExtensionKind::M4 => {
                'pairs: for (k, &x1) in xs.iter().enumerate() {
                    for &x2 in &xs[k + 1..] {
                        if (0..m.n_components()).any(|i| m.at(m.base(i), x1) + m.at(m.base(i), x2) != 0) {
                            continue;
                        }
                        let mut moves = Vec::new();
                        for &g in &gs {
                            let s = m.base(self_component(m, g).unwrap());
                            if m.at(s, x1) == 0 || y_at(m, g, x1) != y_at(m, g, x2) {
                                continue;
                            }
                            let y2 = y_at(m, g, x2);
                            let mag = m.at(s, x2).abs();
                            let partner = coordinates(m, g)
                                .into_iter()
                                .find(|&(z, zm, zy)| z != x1 && z != x2 && zm == mag && zy != y2);
                            let Some((z, _, _)) = partner else { continue 'pairs };
                            let (a, b) = (x2.min(z), x2.max(z));
                            let kind = if m.at(s, a) == m.at(s, b) { 2 } else { 1 };
                            moves.push(MatrixMove::intersection(kind, &name(g), &name(a), &name(b)));
                        }
                        offer(moves, MatrixMove::M4Inverse { elements: [name(x1), name(x2)] }, &mut best);
                    }
                }
            }
        }
    }
    best.map(|(_, moves, ext)| (moves, ext))
}

/// Whether no inverse extension applies anywhere in the intersection orbit.
pub fn is_primitive(m: &WovenBasedMatrix) -> bool {
    cheapest_extension(m, &DEFAULT_PRIORITY).is_none()
}

// ---------------------------------------------------------------------------
// Breadth-first orbit search.

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionOrbit {
    /// Members in breadth-first order, starting with the input.
    pub states: Vec<WovenBasedMatrix>,
    pub truncated: bool,
}

/// Contents of the toggleable entries, used as the dedup key.
fn orbit_key(m: &WovenBasedMatrix, gs: &[usize], xs: &[usize]) -> Vec<u64> {
    let mut key = vec![0u64; (gs.len() * xs.len()).div_ceil(64).max(1)];
    for (k, (g, x)) in gs.iter().flat_map(|&g| xs.iter().map(move |&x| (g, x))).enumerate() {
        if m.at(g, x) != 0 {
            key[k / 64] |= 1 << (k % 64);
        }
    }
    key
}

/// Breadth-first search of the intersection orbit. `visit` sees each state
/// with the moves reaching it and may stop the search by returning `true`.
/// Returns `false` if more than `cap` states would be needed.
fn breadth_first(
    m: &WovenBasedMatrix,
    cap: usize,
    mut visit: impl FnMut(&WovenBasedMatrix, &[MatrixMove]) -> bool,
) -> bool {
    let gs = non_base_self_arrows(m);
    let xs = m.weaving();
    let mut seen = std::collections::HashSet::new();
    let mut parents: Vec<Option<(usize, MatrixMove)>> = vec![None];
    let mut queue = VecDeque::from([(m.clone(), 0usize)]);
    seen.insert(orbit_key(m, &gs, &xs));
    let path = |parents: &[Option<(usize, MatrixMove)>], mut at: usize| {
        let mut p = Vec::new();
        while let Some((up, mv)) = &parents[at] {
            p.push(mv.clone());
            at = *up;
        }
        p.reverse();
        p
    };
    while let Some((cur, id)) = queue.pop_front() {
        if visit(&cur, &path(&parents, id)) {
            return true;
        }
        for mv in intersection_moves(&cur) {
            let next = apply_matrix_move(&cur, &mv).expect("enumerated move applies");
            if seen.insert(orbit_key(&next, &gs, &xs)) {
                if parents.len() >= cap {
                    return false;
                }
                parents.push(Some((id, mv)));
                queue.push_back((next, parents.len() - 1));
            }
        }
    }
    true
}

/// Closure of `m` under intersection moves, in breadth-first order.
pub fn intersection_orbit(m: &WovenBasedMatrix, cap: usize) -> IntersectionOrbit {
    let mut states = Vec::new();
    let complete = breadth_first(m, cap.max(1), |s, _| {
        states.push(s.clone());
        false
    });
    IntersectionOrbit { states, truncated: !complete }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Primitivity {
    Primitive,
    NotPrimitive,
    Undetermined,
}

fn first_extension(m: &WovenBasedMatrix, priority: &[ExtensionKind]) -> Option<MatrixMove> {
    let name = |a: usize| m.elements()[a].to_string();
    let c = classify(m);
    for kind in priority {
        let found = match kind {
            ExtensionKind::M1 => c.annihilating.first().map(|&g| MatrixMove::M1Inverse { element: name(g) }),
            ExtensionKind::M2 => c.core.first().map(|&g| MatrixMove::M2Inverse { element: name(g) }),
            ExtensionKind::M3 => {
                c.complementary.first().map(|&(a, b)| MatrixMove::M3Inverse { elements: [name(a), name(b)] })
            }
            ExtensionKind::M4 => {
                c.sum_annihilating.first().map(|&(a, b)| MatrixMove::M4Inverse { elements: [name(a), name(b)] })
            }
        };
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Primitivity decided by enumerating the orbit, up to `cap` states.
pub fn primitivity_by_search(m: &WovenBasedMatrix, cap: usize) -> Primitivity {
    let mut found = false;
    let complete = breadth_first(m, cap.max(1), |s, _| {
        found = first_extension(s, &DEFAULT_PRIORITY).is_some();
        found
    });
    match (found, complete) {
        (true, _) => Primitivity::NotPrimitive,
        (false, true) => Primitivity::Primitive,
        (false, false) => Primitivity::Undetermined,
    }
}

// ---------------------------------------------------------------------------
// Reduction.

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateStep {
    pub mv: MatrixMove,
    /// Element names before and after the move; empty when unchecked.
    #[serde(default)]
    pub before: Vec<String>,
    #[serde(default)]
    pub after: Vec<String>,
}

/// An auditable record of a move sequence.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveCertificate {
    pub steps: Vec<CertificateStep>,
}

fn element_names(m: &WovenBasedMatrix) -> Vec<String> {
    m.elements().iter().map(ToString::to_string).collect()
}

impl MoveCertificate {
    pub fn moves(&self) -> Vec<MatrixMove> {
        self.steps.iter().map(|s| s.mv.clone()).collect()
    }

    fn record(&mut self, before: &WovenBasedMatrix, mv: MatrixMove, after: &WovenBasedMatrix) {
        self.steps.push(CertificateStep { mv, before: element_names(before), after: element_names(after) });
    }

    /// One move per line.
    pub fn to_text(&self) -> String {
        self.steps.iter().map(|s| format!("{}\n", s.mv)).collect()
    }

    /// Parses [`to_text`](Self::to_text) output; `#` starts a comment.
    pub fn from_text(text: &str) -> Result<Self, MatrixError> {
        let mut steps = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mv = line
                .parse()
                .map_err(|e| MatrixError::Format(format!("line {}: {e}", ln + 1)))?;
            steps.push(CertificateStep { mv, before: Vec::new(), after: Vec::new() });
        }
        Ok(MoveCertificate { steps })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("certificate serializes")
    }

    /// Re-applies every move to `m`, checking recorded element snapshots.
    pub fn replay(&self, m: &WovenBasedMatrix) -> Result<WovenBasedMatrix, MatrixError> {
        let mut cur = m.clone();
        for (k, step) in self.steps.iter().enumerate() {
            if !step.before.is_empty() && step.before != element_names(&cur) {
                return Err(MatrixError::Format(format!("step {}: element set differs before `{}`", k + 1, step.mv)));
            }
            cur = apply_matrix_move(&cur, &step.mv)?;
            if !step.after.is_empty() && step.after != element_names(&cur) {
                return Err(MatrixError::Format(format!("step {}: element set differs after `{}`", k + 1, step.mv)));
            }
        }
        Ok(cur)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Search {
    /// Orbit coordinates; never truncates.
    Exact,
    /// Literal breadth-first orbit enumeration with a state cap; at the first
    /// state admitting an inverse extension the highest-priority one is taken.
    Breadth { cap: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReduceOptions {
    pub priority: Vec<ExtensionKind>,
    pub search: Search,
}

impl Default for ReduceOptions {
    fn default() -> Self {
        ReduceOptions { priority: DEFAULT_PRIORITY.to_vec(), search: Search::Exact }
    }
}

/// Reduces to a primitive matrix by repeatedly reaching and applying an
/// inverse extension. The certificate replays from `m` to the result.
pub fn reduce_to_primitive(
    m: &WovenBasedMatrix,
    opts: &ReduceOptions,
) -> Result<(WovenBasedMatrix, MoveCertificate), MatrixError> {
    let mut cur = m.clone();
    let mut cert = MoveCertificate::default();
    loop {
        let step = match opts.search {
            Search::Exact => cheapest_extension(&cur, &opts.priority),
            Search::Breadth { cap } => {
                let mut hit = None;
                let complete = breadth_first(&cur, cap.max(1), |s, path| {
                    hit = first_extension(s, &opts.priority).map(|ext| (path.to_vec(), ext));
                    hit.is_some()
                });
                if hit.is_none() && !complete {
                    return Err(MatrixError::Undetermined { cap, partial: Box::new(cert) });
                }
                hit
            }
        };
        let Some((moves, ext)) = step else { return Ok((cur, cert)) };
        for mv in moves.into_iter().chain([ext]) {
            let next = apply_matrix_move(&cur, &mv)?;
            cert.record(&cur, mv, &next);
            cur = next;
        }
    }
}

// ---------------------------------------------------------------------------
// Normalization.

/// Rewrites a sequence of intersection moves into per-element blocks, each
/// touching every weaving element at most once, with the same effect.
pub fn normalize_move_sequence(
    seq: &[MatrixMove],
    m: &WovenBasedMatrix,
) -> Result<Vec<MatrixMove>, MatrixError> {
    if let Some(mv) = seq.iter().find(|mv| !mv.is_intersection()) {
        return Err(inapplicable(mv, "only intersection moves can be normalized"));
    }
    apply_sequence(m, seq)?;
    // Moves on distinct elements commute: stable partition by element.
    let mut order: Vec<&str> = Vec::new();
    for mv in seq {
        let (g, _) = mv.intersection_parts().expect("intersection move");
        if !order.contains(&g) {
            order.push(g);
        }
    }
    let mut out = Vec::new();
    for g in order {
        let mut block: Vec<MatrixMove> =
            seq.iter().filter(|mv| mv.intersection_parts().map(|p| p.0) == Some(g)).cloned().collect();
        let gi = lookup(m, g)?;
        loop {
            let shares = |a: &MatrixMove, b: &MatrixMove| {
                let (pa, pb) = (a.intersection_parts().unwrap().1, b.intersection_parts().unwrap().1);
                pa.iter().any(|x| pb.contains(x))
            };
            // Closest pair of moves sharing a weaving element; the moves in
            // between touch neither, so the earlier one commutes up to the later.
            let mut closest: Option<(usize, usize)> = None;
            for i in 0..block.len() {
                for j in i + 1..block.len() {
                    if shares(&block[i], &block[j]) && closest.is_none_or(|(a, b)| j - i < b - a) {
                        closest = Some((i, j));
                    }
                }
            }
            let Some((i, j)) = closest else { break };
            let first = block.remove(i);
            let second = block.remove(j - 1);
            let (p1, p2) = (first.intersection_parts().unwrap().1, second.intersection_parts().unwrap().1);
            let mut rest: Vec<&str> = p1.iter().chain(p2.iter()).copied().collect();
            rest.sort_unstable();
            let mut sym: Vec<&str> = Vec::new();
            for x in &rest {
                if rest.iter().filter(|y| *y == x).count() == 1 {
                    sym.push(x);
                }
            }
            if sym.is_empty() {
                // Same pair twice: an involution cancels.
                continue;
            }
            // Merge at position i: the state there equals the state before
            // `first` on every affected entry.
            let state = apply_sequence(m, &[out.as_slice(), &block[..i]].concat())?;
            let (a, b) = (lookup(&state, sym[0])?, lookup(&state, sym[1])?);
            let (a, b) = (a.min(b), a.max(b));
            let kind = if is_g_annihilating(&state, gi, a, b) {
                1
            } else if is_g_unequal(&state, gi, a, b) {
                2
            } else {
                return Err(inapplicable(&first, "merged move does not apply"));
            };
            let n = |k: usize| state.elements()[k].to_string();
            block.insert(i, MatrixMove::intersection(kind, g, &n(a), &n(b)));
        }
        out.extend(block);
    }
    Ok(out)
}
