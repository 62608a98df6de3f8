//! Based matrices of 1-strings and woven based matrices of multistrings.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::diagram::Multistring;
use crate::error::{DiagramError, MatrixError};
use crate::util::natural_cmp;

/// An element of `G ∪ I`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ElementId {
    /// `s_{i+1}`, the base of component `i`.
    Base(usize),
    SelfArrow(usize, String),
    Weaving(String),
}

impl ElementId {
    pub fn component(&self) -> Option<usize> {
        match self {
            ElementId::Base(i) | ElementId::SelfArrow(i, _) => Some(*i),
            ElementId::Weaving(_) => None,
        }
    }

    pub fn label(&self) -> Option<&str> {
        match self {
            ElementId::Base(_) => None,
            ElementId::SelfArrow(_, l) | ElementId::Weaving(l) => Some(l),
        }
    }

    pub fn is_base(&self) -> bool {
        matches!(self, ElementId::Base(_))
    }

    pub fn is_weaving(&self) -> bool {
        matches!(self, ElementId::Weaving(_))
    }

    /// Display order: component blocks with the base first, then weaving
    /// elements; labels compare naturally.
    fn order_key(&self) -> (usize, u8, &str) {
        match self {
            ElementId::Base(i) => (*i, 0, ""),
            ElementId::SelfArrow(i, l) => (*i, 1, l),
            ElementId::Weaving(l) => (usize::MAX, 2, l),
        }
    }
}

impl Ord for ElementId {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (self.order_key(), other.order_key());
        (a.0, a.1).cmp(&(b.0, b.1)).then_with(|| natural_cmp(a.2, b.2)).then_with(|| a.2.cmp(b.2))
    }
}

impl PartialOrd for ElementId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementId::Base(i) => write!(f, "s{}", i + 1),
            ElementId::SelfArrow(_, l) | ElementId::Weaving(l) => f.write_str(l),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WovenViolation {
    NotSkew { a: String, b: String },
    /// `x` must meet exactly two bases, with opposite values.
    WeavingSupport { x: String, bases: usize },
    WeavingUnbalanced { x: String },
    WeavingValue { g: String, x: String },
    WeavingPair { x: String, y: String },
}

impl fmt::Display for WovenViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WovenViolation::NotSkew { a, b } => write!(f, "b({a},{b}) is not skew-symmetric"),
            WovenViolation::WeavingSupport { x, bases } => {
                write!(f, "`{x}` pairs nontrivially with {bases} bases, expected 2")
            }
            WovenViolation::WeavingUnbalanced { x } => write!(f, "base values of `{x}` do not cancel"),
            WovenViolation::WeavingValue { g, x } => write!(f, "b({g},{x}) is neither 0 nor the base value"),
            WovenViolation::WeavingPair { x, y } => write!(f, "b({x},{y}) must vanish"),
        }
    }
}

/// A woven based matrix: components `(G_i, s_i)`, a weaving set `I` and an
/// integer pairing on `G ∪ I`, stored densely in display order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WovenBasedMatrix {
    n: usize,
    elements: Vec<ElementId>,
    entries: Vec<i64>,
}

impl WovenBasedMatrix {
    /// Builds a matrix from element lists and a pairing function. The result
    /// is sorted into display order and `f` is consulted for both orders of
    /// every pair; skew-symmetry and the weaving axioms are checked.
    pub fn from_fn(
        n: usize,
        self_arrows: Vec<Vec<String>>,
        weaving: Vec<String>,
        mut f: impl FnMut(&ElementId, &ElementId) -> i64,
    ) -> Result<Self, MatrixError> {
        let m = Self::from_fn_unchecked(n, self_arrows, weaving, &mut f)?;
        let v = validate_woven(&m);
        if v.is_empty() {
            Ok(m)
        } else {
            Err(MatrixError::Invalid(v))
        }
    }

    pub(crate) fn from_fn_unchecked(
        n: usize,
        self_arrows: Vec<Vec<String>>,
        weaving: Vec<String>,
        f: &mut impl FnMut(&ElementId, &ElementId) -> i64,
    ) -> Result<Self, MatrixError> {
        if self_arrows.len() != n {
            return Err(MatrixError::Format(format!("{} self-arrow groups for {n} components", self_arrows.len())));
        }
        let mut elements: Vec<ElementId> = (0..n).map(ElementId::Base).collect();
        for (i, group) in self_arrows.into_iter().enumerate() {
            elements.extend(group.into_iter().map(|l| ElementId::SelfArrow(i, l)));
        }
        elements.extend(weaving.into_iter().map(ElementId::Weaving));
        elements.sort();
        let mut seen = std::collections::HashSet::new();
        for e in &elements {
            if let Some(l) = e.label() {
                if !seen.insert(l.to_string()) {
                    return Err(MatrixError::DuplicateElement(l.to_string()));
                }
            }
        }
        let d = elements.len();
        let mut entries = vec![0; d * d];
        for a in 0..d {
            for b in 0..d {
                if a != b {
                    entries[a * d + b] = f(&elements[a], &elements[b]);
                }
            }
        }
        Ok(WovenBasedMatrix { n, elements, entries })
    }

    /// The matrix with components `({s_1}, …, {s_n})`, `I = ∅` and zero pairing.
    pub fn trivial(n: usize) -> Self {
        WovenBasedMatrix { n, elements: (0..n).map(ElementId::Base).collect(), entries: vec![0; n * n] }
    }

    pub fn n_components(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> &[ElementId] {
        &self.elements
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    #[inline]
    pub fn at(&self, a: usize, b: usize) -> i64 {
        self.entries[a * self.elements.len() + b]
    }

    pub(crate) fn set(&mut self, a: usize, b: usize, v: i64) {
        let d = self.elements.len();
        self.entries[a * d + b] = v;
        self.entries[b * d + a] = -v;
    }

    pub fn row(&self, a: usize) -> &[i64] {
        let d = self.elements.len();
        &self.entries[a * d..(a + 1) * d]
    }

    pub fn index_of(&self, e: &ElementId) -> Option<usize> {
        self.elements.binary_search(e).ok()
    }

    /// Looks up an element by display name; labels take precedence over
    /// base names `s<k>`.
    pub fn find(&self, name: &str) -> Option<usize> {
        if let Some(i) = self.elements.iter().position(|e| e.label() == Some(name)) {
            return Some(i);
        }
        let k: usize = name.strip_prefix('s')?.parse().ok()?;
        (1..=self.n).contains(&k).then(|| self.base(k - 1))
    }

    pub fn get(&self, a: &ElementId, b: &ElementId) -> Option<i64> {
        Some(self.at(self.index_of(a)?, self.index_of(b)?))
    }

    /// Index of `s_i`.
    pub fn base(&self, i: usize) -> usize {
        self.index_of(&ElementId::Base(i)).expect("every component has a base")
    }

    /// Indices of `G_i ∖ {s_i}`.
    pub fn self_arrows(&self, i: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&a| matches!(&self.elements[a], ElementId::SelfArrow(c, _) if *c == i)).collect()
    }

    /// Indices of `I`.
    pub fn weaving(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&a| self.elements[a].is_weaving()).collect()
    }

    pub fn component_of(&self, a: usize) -> Option<usize> {
        self.elements[a].component()
    }

    /// `(#G, #I)`, bases included in `#G`.
    pub fn size(&self) -> (usize, usize) {
        let i = self.elements.iter().filter(|e| e.is_weaving()).count();
        (self.dim() - i, i)
    }

    pub fn is_trivial(&self) -> bool {
        self.dim() == self.n
    }

    /// For weaving `x`, the two components whose bases pair with it.
    pub fn weaving_components(&self, x: usize) -> Vec<usize> {
        (0..self.n).filter(|&i| self.at(self.base(i), x) != 0).collect()
    }

    /// Copy with the elements at `drop` removed.
    pub fn without(&self, drop: &[usize]) -> Self {
        let keep: Vec<usize> = (0..self.dim()).filter(|a| !drop.contains(a)).collect();
        let d = keep.len();
        let mut entries = vec![0; d * d];
        for (i, &a) in keep.iter().enumerate() {
            for (j, &b) in keep.iter().enumerate() {
                entries[i * d + j] = self.at(a, b);
            }
        }
        WovenBasedMatrix { n: self.n, elements: keep.iter().map(|&a| self.elements[a].clone()).collect(), entries }
    }

    /// Copy with new elements; `f(new, old_or_new)` gives the pairing of each
    /// added element with every element (called once per unordered pair with
    /// an added element on the left where possible).
    pub(crate) fn with_added(
        &self,
        added: Vec<ElementId>,
        mut f: impl FnMut(&ElementId, &ElementId) -> i64,
    ) -> Result<Self, MatrixError> {
        for e in &added {
            if let Some(l) = e.label() {
                if self.elements.iter().chain(added.iter().filter(|a| *a != e)).any(|x| x.label() == Some(l)) {
                    return Err(MatrixError::DuplicateElement(l.to_string()));
                }
            }
        }
        let mut elements = self.elements.clone();
        elements.extend(added.iter().cloned());
        elements.sort();
        let d = elements.len();
        let old: Vec<Option<usize>> = elements.iter().map(|e| self.index_of(e)).collect();
        let mut entries = vec![0; d * d];
        for a in 0..d {
            for b in a + 1..d {
                let v = match (old[a], old[b]) {
                    (Some(i), Some(j)) => self.at(i, j),
                    (None, _) => f(&elements[a], &elements[b]),
                    (Some(_), None) => -f(&elements[b], &elements[a]),
                };
                entries[a * d + b] = v;
                entries[b * d + a] = -v;
            }
        }
        Ok(WovenBasedMatrix { n: self.n, elements, entries })
    }

    /// Permutes components: component `i` becomes component `perm[i]`.
    pub fn permute_components(&self, perm: &[usize]) -> Self {
        let rename = |e: &ElementId| match e {
            ElementId::Base(i) => ElementId::Base(perm[*i]),
            ElementId::SelfArrow(i, l) => ElementId::SelfArrow(perm[*i], l.clone()),
            ElementId::Weaving(l) => ElementId::Weaving(l.clone()),
        };
        self.map_elements(rename)
    }

    /// Renames elements (must stay kind- and component-compatible) and sorts.
    pub fn map_elements(&self, mut rename: impl FnMut(&ElementId) -> ElementId) -> Self {
        let renamed: Vec<ElementId> = self.elements.iter().map(&mut rename).collect();
        let mut order: Vec<usize> = (0..self.dim()).collect();
        order.sort_by(|&a, &b| renamed[a].cmp(&renamed[b]));
        let d = self.dim();
        let mut entries = vec![0; d * d];
        for (i, &a) in order.iter().enumerate() {
            for (j, &b) in order.iter().enumerate() {
                entries[i * d + j] = self.at(a, b);
            }
        }
        WovenBasedMatrix { n: self.n, elements: order.iter().map(|&a| renamed[a].clone()).collect(), entries }
    }

    /// Aligned table with a header row of element names.
    pub fn to_table(&self) -> String {
        let names: Vec<String> = self.elements.iter().map(ToString::to_string).collect();
        let width = names
            .iter()
            .map(String::len)
            .chain(self.entries.iter().map(|v| v.to_string().len()))
            .max()
            .unwrap_or(1);
        let mut out = format!("{:>width$}", "");
        for n in &names {
            out.push_str(&format!(" {n:>width$}"));
        }
        out.push('\n');
        for (a, n) in names.iter().enumerate() {
            out.push_str(&format!("{n:>width$}"));
            for v in self.row(a) {
                out.push_str(&format!(" {v:>width$}"));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let components: Vec<Value> = (0..self.n)
            .map(|i| {
                let g: Vec<String> = self.self_arrows(i).iter().map(|&a| self.elements[a].to_string()).collect();
                json!({ "base": ElementId::Base(i).to_string(), "self_arrows": g })
            })
            .collect();
        let weaving: Vec<String> = self.weaving().iter().map(|&a| self.elements[a].to_string()).collect();
        let entries: Vec<&[i64]> = (0..self.dim()).map(|a| self.row(a)).collect();
        json!({ "components": components, "weaving": weaving, "entries": entries })
    }

    pub fn from_json(v: &Value) -> Result<Self, MatrixError> {
        let bad = |m: &str| MatrixError::Format(m.to_string());
        let comps = v["components"].as_array().ok_or_else(|| bad("missing `components`"))?;
        let strings = |v: &Value, what: &str| -> Result<Vec<String>, MatrixError> {
            v.as_array()
                .ok_or_else(|| bad(what))?
                .iter()
                .map(|s| s.as_str().map(str::to_string).ok_or_else(|| bad(what)))
                .collect()
        };
        let groups: Vec<Vec<String>> =
            comps.iter().map(|c| strings(&c["self_arrows"], "bad `self_arrows`")).collect::<Result<_, _>>()?;
        let weaving = strings(&v["weaving"], "bad `weaving`")?;
        let rows = v["entries"].as_array().ok_or_else(|| bad("missing `entries`"))?;
        // Listed order is the display order.
        let mut listed = Vec::new();
        for (i, g) in groups.iter().enumerate() {
            listed.push(ElementId::Base(i));
            listed.extend(g.iter().map(|l| ElementId::SelfArrow(i, l.clone())));
        }
        listed.extend(weaving.iter().map(|l| ElementId::Weaving(l.clone())));
        if rows.len() != listed.len() {
            return Err(bad("entry rows do not match elements"));
        }
        let mut table = HashMap::new();
        for (a, row) in rows.iter().enumerate() {
            let row = row.as_array().filter(|r| r.len() == listed.len()).ok_or_else(|| bad("ragged `entries`"))?;
            for (b, val) in row.iter().enumerate() {
                let val = val.as_i64().ok_or_else(|| bad("non-integer entry"))?;
                table.insert((listed[a].clone(), listed[b].clone()), val);
            }
        }
        let n = groups.len();
        let mut diag_ok = true;
        let m = Self::from_fn_unchecked(n, groups, weaving, &mut |a, b| table[&(a.clone(), b.clone())])?;
        for e in &listed {
            diag_ok &= table[&(e.clone(), e.clone())] == 0;
        }
        let v = validate_woven(&m);
        if !diag_ok {
            return Err(bad("nonzero diagonal"));
        }
        if v.is_empty() {
            Ok(m)
        } else {
            Err(MatrixError::Invalid(v))
        }
    }
}

impl fmt::Display for WovenBasedMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_table())
    }
}

/// A based matrix `(G, s, b)`: a single component with no weaving.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasedMatrix(WovenBasedMatrix);

impl BasedMatrix {
    pub fn from_woven(m: WovenBasedMatrix) -> Result<Self, MatrixError> {
        if m.n_components() != 1 || m.size().1 != 0 {
            return Err(MatrixError::Format("a based matrix has one component and no weaving".into()));
        }
        Ok(BasedMatrix(m))
    }

    pub fn as_woven(&self) -> &WovenBasedMatrix {
        &self.0
    }

    pub fn into_woven(self) -> WovenBasedMatrix {
        self.0
    }

    /// `B(g, s)` for each `g ∈ G ∖ {s}`, in element order.
    pub fn n_values(&self) -> Vec<i64> {
        let s = self.0.base(0);
        self.0.self_arrows(0).into_iter().map(|g| self.0.at(g, s)).collect()
    }
}

/// `+1` if `h` links `g` positively, `−1` if negatively, else `0`.
pub fn linking(ms: &Multistring, g: &str, h: &str) -> Result<i64, DiagramError> {
    let eh = ms.arrow(h)?;
    if ms.self_arrow_circle(g)?.is_none() {
        return Err(DiagramError::NotSelfArrow(g.to_string()));
    }
    if g == h {
        return Ok(0);
    }
    let t = ms.in_open_arc(g, eh.tail)?;
    let hd = ms.in_open_arc(g, eh.head)?;
    Ok(match (t, hd) {
        (true, false) => 1,
        (false, true) => -1,
        _ => 0,
    })
}

/// Signed count of the arrows of the whole diagram linking `g`.
pub fn n_of(ms: &Multistring, g: &str) -> Result<i64, DiagramError> {
    let mut total = 0;
    for h in ms.arrows().keys() {
        total += linking(ms, g, h)?;
    }
    Ok(total)
}

/// `g · g'`: arrows running from `ḡ` into `ḡ'` minus arrows running back.
pub fn dot(ms: &Multistring, g: &str, g2: &str) -> Result<i64, DiagramError> {
    for l in [g, g2] {
        if ms.self_arrow_circle(l)?.is_none() {
            return Err(DiagramError::NotSelfArrow(l.to_string()));
        }
    }
    let mut total = 0;
    for ends in ms.arrows().values() {
        let (t1, h1) = (ms.in_open_arc(g, ends.tail)?, ms.in_open_arc(g, ends.head)?);
        let (t2, h2) = (ms.in_open_arc(g2, ends.tail)?, ms.in_open_arc(g2, ends.head)?);
        total += (t1 && h2) as i64 - (h1 && t2) as i64;
    }
    Ok(total)
}

/// `φ(g, x)`: `+1` if the tail of `x` lies in `ḡ`, `−1` if its head does.
fn weave_arrow(ms: &Multistring, g: &str, x: &str) -> i64 {
    let ex = ms.arrows()[x];
    if ms.in_open_arc(g, ex.tail).expect("self-arrow") {
        1
    } else if ms.in_open_arc(g, ex.head).expect("self-arrow") {
        -1
    } else {
        0
    }
}

/// `φ(s_i, x)`: `+1` if the tail of `x` is on circle `i`, `−1` if its head is.
fn weave_base(ms: &Multistring, i: usize, x: &str) -> i64 {
    let ex = ms.arrows()[x];
    if ms.location(ex.tail).map(|l| l.0) == Some(i) {
        1
    } else if ms.location(ex.head).map(|l| l.0) == Some(i) {
        -1
    } else {
        0
    }
}

/// The based matrix of a 1-string.
pub fn based_matrix(ms: &Multistring) -> Result<BasedMatrix, MatrixError> {
    if ms.circle_count() != 1 {
        return Err(DiagramError::NotOneString(ms.circle_count()).into());
    }
    BasedMatrix::from_woven(multistring_based_matrix(ms)?)
}

/// The multistring based matrix: component `i` is circle `i`, the weaving
/// set is the intersection arrows.
pub fn multistring_based_matrix(ms: &Multistring) -> Result<WovenBasedMatrix, MatrixError> {
    ms.ensure_valid()?;
    let n = ms.circle_count();
    let groups: Vec<Vec<String>> = (0..n).map(|i| ms.self_arrows(i).into_iter().map(str::to_string).collect()).collect();
    let weaving: Vec<String> = ms.intersection_arrows().into_iter().map(str::to_string).collect();
    let circle_arrows: Vec<Vec<String>> = groups.clone();
    let between = |i: usize, j: usize| -> Vec<&str> { ms.arrows_between(i, j) };
    let f = |a: &ElementId, b: &ElementId| -> i64 {
        use ElementId::*;
        match (a, b) {
            (Base(i), Base(j)) => between(*i, *j).iter().map(|x| weave_base(ms, *i, x)).sum(),
            (SelfArrow(i, g), Base(j)) if i == j => circle_arrows[*i]
                .iter()
                .map(|h| linking(ms, g, h).expect("self-arrow"))
                .sum(),
            (SelfArrow(i, g), Base(j)) => between(*i, *j).iter().map(|x| weave_arrow(ms, g, x)).sum(),
            (Base(_), SelfArrow(..)) => 0,
            (SelfArrow(i, g), SelfArrow(j, h)) if i == j => {
                let restricted: i64 = circle_arrows[*i]
                    .iter()
                    .map(|k| {
                        let e = ms.arrows()[k.as_str()];
                        let (t1, h1) = (ms.in_open_arc(g, e.tail).unwrap(), ms.in_open_arc(g, e.head).unwrap());
                        let (t2, h2) = (ms.in_open_arc(h, e.tail).unwrap(), ms.in_open_arc(h, e.head).unwrap());
                        (t1 && h2) as i64 - (h1 && t2) as i64
                    })
                    .sum();
                restricted + linking(ms, g, h).expect("self-arrow")
            }
            (SelfArrow(_, g), SelfArrow(_, h)) => dot(ms, g, h).expect("self-arrows"),
            (SelfArrow(_, g), Weaving(x)) => weave_arrow(ms, g, x),
            (Base(i), Weaving(x)) => weave_base(ms, *i, x),
            (Weaving(_), Weaving(_)) => 0,
            (Weaving(_), _) => 0,
        }
    };
    // Entries with a natural formula in one order only are mirrored.
    let mut g = |a: &ElementId, b: &ElementId| -> i64 {
        match (a, b) {
            (ElementId::Base(_), ElementId::SelfArrow(..)) | (ElementId::Weaving(_), _) => -f(b, a),
            _ => f(a, b),
        }
    };
    WovenBasedMatrix::from_fn(n, groups, weaving, &mut g)
}

/// Violations of skew-symmetry and the weaving axioms.
pub fn validate_woven(m: &WovenBasedMatrix) -> Vec<WovenViolation> {
    let mut out = Vec::new();
    let name = |a: usize| m.elements()[a].to_string();
    let d = m.dim();
    for a in 0..d {
        for b in a..d {
            if m.at(a, b) != -m.at(b, a) {
                out.push(WovenViolation::NotSkew { a: name(a), b: name(b) });
            }
        }
    }
    let weaving = m.weaving();
    for &x in &weaving {
        let support = m.weaving_components(x);
        if support.len() != 2 {
            out.push(WovenViolation::WeavingSupport { x: name(x), bases: support.len() });
        } else if m.at(m.base(support[0]), x) != -m.at(m.base(support[1]), x) {
            out.push(WovenViolation::WeavingUnbalanced { x: name(x) });
        }
        for i in 0..m.n_components() {
            let sx = m.at(m.base(i), x);
            for g in m.self_arrows(i) {
                let v = m.at(g, x);
                if v != 0 && v != sx {
                    out.push(WovenViolation::WeavingValue { g: name(g), x: name(x) });
                }
            }
        }
        for &y in &weaving {
            if x < y && m.at(x, y) != 0 {
                out.push(WovenViolation::WeavingPair { x: name(x), y: name(y) });
            }
        }
    }
    out
}

/// Rank over the rationals by fraction-free (Bareiss) elimination.
pub fn integer_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
    let r = m.len();
    let c = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::from(1);
    let mut rank = 0;
    for col in 0..c {
        let Some(p) = (rank..r).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(rank, p);
        for i in rank + 1..r {
            for j in col + 1..c {
                let v = (&m[i][j] * &m[rank][col] - &m[i][col] * &m[rank][j]) / &prev;
                m[i][j] = v;
            }
            m[i][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
        if rank == r {
            break;
        }
    }
    rank
}

/// Rank of the full pairing matrix.
pub fn matrix_rank(m: &WovenBasedMatrix) -> usize {
    let rows: Vec<Vec<i64>> = (0..m.dim()).map(|a| m.row(a).to_vec()).collect();
    integer_rank(&rows)
}

/// `n_j(g) = b(g, s_j)`.
pub(crate) fn n_j(m: &WovenBasedMatrix, g: usize, j: usize) -> i64 {
    m.at(g, m.base(j))
}
