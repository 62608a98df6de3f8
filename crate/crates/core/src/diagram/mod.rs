//! Virtual n-strings as decorated chord diagrams.
//!
//! A [`Multistring`] is a list of oriented core circles, each a cyclic
//! sequence of endpoint ids, together with a table of arrows mapping a label
//! to its `(tail, head)` endpoints. Endpoint ids are opaque; equality and
//! hashing only look at the cyclic words of `(label, role)` tokens.

mod generate;
mod moves;
mod surface;
mod text;

pub use generate::{fixture_sigma, fixture_tau, gen_alpha, gen_beta, random_multistring};
pub use moves::{enumerate_applicable_moves, DiagramMove, Gap, MoveKind, T3Variant};
pub use surface::{canonical_surface_genus, SurfaceGenus};
pub use text::parse_multistring;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::DiagramError;
use crate::util::natural_cmp;

pub type EndpointId = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Tail,
    Head,
}

impl Role {
    pub fn flip(self) -> Role {
        match self {
            Role::Tail => Role::Head,
            Role::Head => Role::Tail,
        }
    }

    pub fn mark(self) -> char {
        match self {
            Role::Tail => '+',
            Role::Head => '-',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ArrowEnds {
    pub tail: EndpointId,
    pub head: EndpointId,
}

impl ArrowEnds {
    pub fn get(&self, role: Role) -> EndpointId {
        match role {
            Role::Tail => self.tail,
            Role::Head => self.head,
        }
    }
}

/// An endpoint named by its arrow label and role, stable across rewrites.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EndpointRef {
    pub label: String,
    pub role: Role,
}

impl EndpointRef {
    pub fn new(label: impl Into<String>, role: Role) -> Self {
        EndpointRef { label: label.into(), role }
    }

    pub fn tail(label: impl Into<String>) -> Self {
        Self::new(label, Role::Tail)
    }

    pub fn head(label: impl Into<String>) -> Self {
        Self::new(label, Role::Head)
    }
}

impl fmt::Display for EndpointRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.label, self.role.mark())
    }
}

/// A structural defect reported by [`Multistring::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    /// An endpoint id occurs more than once across the circles.
    DuplicateEndpoint { endpoint: EndpointId },
    /// An arrow refers to an endpoint id that no circle contains.
    DanglingEndpoint { arrow: String, endpoint: EndpointId },
    /// A circle contains an endpoint id that no arrow refers to.
    OrphanEndpoint { endpoint: EndpointId },
    /// An endpoint id is claimed by two arrow slots.
    SharedEndpoint { endpoint: EndpointId },
    /// The label is not of the form `[A-Za-z0-9_]+`.
    BadLabel { arrow: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateEndpoint { endpoint } => {
                write!(f, "endpoint {endpoint} occurs more than once")
            }
            Violation::DanglingEndpoint { arrow, endpoint } => {
                write!(f, "arrow `{arrow}` refers to missing endpoint {endpoint}")
            }
            Violation::OrphanEndpoint { endpoint } => {
                write!(f, "endpoint {endpoint} belongs to no arrow")
            }
            Violation::SharedEndpoint { endpoint } => {
                write!(f, "endpoint {endpoint} is used by two arrow ends")
            }
            Violation::BadLabel { arrow } => write!(f, "arrow label `{arrow}` is malformed"),
        }
    }
}

pub(crate) fn valid_label(label: &str) -> bool {
    !label.is_empty() && label.bytes().all(|c| c.is_ascii_alphanumeric() || c == b'_')
}

#[derive(Clone, Debug)]
pub struct Multistring {
    circles: Vec<Vec<EndpointId>>,
    arrows: BTreeMap<String, ArrowEnds>,
    location: HashMap<EndpointId, (usize, usize)>,
    owner: HashMap<EndpointId, (String, Role)>,
}

impl Multistring {
    /// Builds a diagram from cyclic words of endpoint tokens, assigning fresh
    /// endpoint ids in reading order.
    pub fn from_words(words: Vec<Vec<EndpointRef>>) -> Result<Self, DiagramError> {
        let mut next: EndpointId = 0;
        let mut circles = Vec::with_capacity(words.len());
        let mut halves: BTreeMap<String, [Option<EndpointId>; 2]> = BTreeMap::new();
        for word in words {
            let mut circle = Vec::with_capacity(word.len());
            for token in word {
                let slot = &mut halves.entry(token.label.clone()).or_default()
                    [(token.role == Role::Head) as usize];
                if slot.is_some() {
                    return Err(DiagramError::Malformed(format!(
                        "endpoint {token} occurs twice"
                    )));
                }
                *slot = Some(next);
                circle.push(next);
                next += 1;
            }
            circles.push(circle);
        }
        let mut arrows = BTreeMap::new();
        for (label, [tail, head]) in halves {
            match (tail, head) {
                (Some(tail), Some(head)) => {
                    arrows.insert(label, ArrowEnds { tail, head });
                }
                _ => {
                    return Err(DiagramError::Malformed(format!(
                        "arrow `{label}` is missing its {}",
                        if tail.is_none() { "tail" } else { "head" }
                    )))
                }
            }
        }
        let ms = Self::from_raw_parts(circles, arrows);
        let violations = ms.validate();
        if violations.is_empty() {
            Ok(ms)
        } else {
            Err(DiagramError::Invalid(violations))
        }
    }

    /// Assembles a diagram without checking any invariant. Use
    /// [`validate`](Self::validate) to inspect the result.
    pub fn from_raw_parts(circles: Vec<Vec<EndpointId>>, arrows: BTreeMap<String, ArrowEnds>) -> Self {
        let mut ms = Multistring {
            circles,
            arrows,
            location: HashMap::new(),
            owner: HashMap::new(),
        };
        ms.reindex();
        ms
    }

    fn reindex(&mut self) {
        self.location.clear();
        self.owner.clear();
        for (c, circle) in self.circles.iter().enumerate() {
            for (p, &e) in circle.iter().enumerate() {
                self.location.entry(e).or_insert((c, p));
            }
        }
        for (label, ends) in &self.arrows {
            self.owner.entry(ends.tail).or_insert((label.clone(), Role::Tail));
            self.owner.entry(ends.head).or_insert((label.clone(), Role::Head));
        }
    }

    /// The empty diagram with `n` arrow-free circles.
    pub fn trivial(n: usize) -> Self {
        Self::from_raw_parts(vec![Vec::new(); n], BTreeMap::new())
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        for circle in &self.circles {
            for &e in circle {
                if !seen.insert(e) {
                    out.push(Violation::DuplicateEndpoint { endpoint: e });
                }
            }
        }
        let mut claimed = HashSet::new();
        for (label, ends) in &self.arrows {
            if !valid_label(label) {
                out.push(Violation::BadLabel { arrow: label.clone() });
            }
            for e in [ends.tail, ends.head] {
                if !seen.contains(&e) {
                    out.push(Violation::DanglingEndpoint { arrow: label.clone(), endpoint: e });
                }
                if !claimed.insert(e) {
                    out.push(Violation::SharedEndpoint { endpoint: e });
                }
            }
        }
        let mut orphans: Vec<_> = seen.difference(&claimed).copied().collect();
        orphans.sort_unstable();
        out.extend(orphans.into_iter().map(|endpoint| Violation::OrphanEndpoint { endpoint }));
        out
    }

    pub(crate) fn ensure_valid(&self) -> Result<(), DiagramError> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(DiagramError::Invalid(v))
        }
    }

    pub fn circle_count(&self) -> usize {
        self.circles.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn circles(&self) -> &[Vec<EndpointId>] {
        &self.circles
    }

    pub fn circle(&self, i: usize) -> Result<&[EndpointId], DiagramError> {
        self.circles
            .get(i)
            .map(Vec::as_slice)
            .ok_or(DiagramError::CircleOutOfRange { index: i, count: self.circles.len() })
    }

    /// Arrows keyed by label, in label order.
    pub fn arrows(&self) -> &BTreeMap<String, ArrowEnds> {
        &self.arrows
    }

    pub fn arrow(&self, label: &str) -> Result<ArrowEnds, DiagramError> {
        self.arrows
            .get(label)
            .copied()
            .ok_or_else(|| DiagramError::UnknownArrow(label.to_string()))
    }

    pub fn location(&self, e: EndpointId) -> Option<(usize, usize)> {
        self.location.get(&e).copied()
    }

    pub fn owner(&self, e: EndpointId) -> Option<(&str, Role)> {
        self.owner.get(&e).map(|(l, r)| (l.as_str(), *r))
    }

    pub fn endpoint_ref(&self, e: EndpointId) -> Option<EndpointRef> {
        self.owner(e).map(|(l, r)| EndpointRef::new(l, r))
    }

    pub fn endpoint(&self, r: &EndpointRef) -> Result<EndpointId, DiagramError> {
        Ok(self.arrow(&r.label)?.get(r.role))
    }

    /// Circle holding the given end of an arrow.
    pub fn circle_of(&self, label: &str, role: Role) -> Result<usize, DiagramError> {
        let e = self.arrow(label)?.get(role);
        self.location(e)
            .map(|(c, _)| c)
            .ok_or_else(|| DiagramError::UnknownArrow(label.to_string()))
    }

    /// `Some(i)` when both ends of the arrow lie on circle `i`.
    pub fn self_arrow_circle(&self, label: &str) -> Result<Option<usize>, DiagramError> {
        let t = self.circle_of(label, Role::Tail)?;
        let h = self.circle_of(label, Role::Head)?;
        Ok((t == h).then_some(t))
    }

    fn sorted_labels(&self, keep: impl Fn(&ArrowEnds) -> bool) -> Vec<&str> {
        let mut v: Vec<&str> = self
            .arrows
            .iter()
            .filter(|(_, a)| keep(a))
            .map(|(l, _)| l.as_str())
            .collect();
        v.sort_by(|a, b| natural_cmp(a, b));
        v
    }

    fn circle_index(&self, e: EndpointId) -> usize {
        self.location[&e].0
    }

    /// Self-arrows on circle `i`, in natural label order.
    pub fn self_arrows(&self, i: usize) -> Vec<&str> {
        self.sorted_labels(|a| {
            let (t, h) = (self.circle_index(a.tail), self.circle_index(a.head));
            t == i && h == i
        })
    }

    /// All intersection arrows, in natural label order.
    pub fn intersection_arrows(&self) -> Vec<&str> {
        self.sorted_labels(|a| self.circle_index(a.tail) != self.circle_index(a.head))
    }

    /// Intersection arrows joining circles `i` and `j` (either direction).
    pub fn arrows_between(&self, i: usize, j: usize) -> Vec<&str> {
        self.sorted_labels(|a| {
            let (t, h) = (self.circle_index(a.tail), self.circle_index(a.head));
            (t == i && h == j) || (t == j && h == i)
        })
    }

    /// Whether endpoint `e` lies in the open arc running from the tail of the
    /// self-arrow `g` to its head along the orientation.
    pub fn in_open_arc(&self, g: &str, e: EndpointId) -> Result<bool, DiagramError> {
        let ends = self.arrow(g)?;
        let (c, pt) = self.location[&ends.tail];
        let (ch, ph) = self.location[&ends.head];
        if c != ch {
            return Err(DiagramError::NotSelfArrow(g.to_string()));
        }
        let Some(&(ce, pe)) = self.location.get(&e) else {
            return Ok(false);
        };
        if ce != c {
            return Ok(false);
        }
        let len = self.circles[c].len();
        let span = (ph + len - pt) % len;
        let offset = (pe + len - pt) % len;
        Ok(offset > 0 && offset < span)
    }

    /// The cyclic word of circle `i` as tokens.
    pub fn word(&self, i: usize) -> Vec<EndpointRef> {
        self.circles[i]
            .iter()
            .map(|&e| {
                self.endpoint_ref(e)
                    .unwrap_or_else(|| EndpointRef::new(format!("?{e}"), Role::Tail))
            })
            .collect()
    }

    /// Words rotated to their lexicographically least rotation.
    pub fn normalized_words(&self) -> Vec<Vec<EndpointRef>> {
        (0..self.circles.len()).map(|i| least_rotation(self.word(i))).collect()
    }

    /// The 1-string carried by circle `i` and its self-arrows.
    pub fn induced_string(&self, i: usize) -> Result<Multistring, DiagramError> {
        self.circle(i)?;
        let word = self
            .word(i)
            .into_iter()
            .filter(|t| self.self_arrow_circle(&t.label).ok().flatten() == Some(i))
            .collect();
        Multistring::from_words(vec![word])
    }

    /// Swaps tail and head of every arrow.
    pub fn reverse_all_arrows(&self) -> Multistring {
        let arrows = self
            .arrows
            .iter()
            .map(|(l, a)| (l.clone(), ArrowEnds { tail: a.head, head: a.tail }))
            .collect();
        Multistring::from_raw_parts(self.circles.clone(), arrows)
    }

    /// Reverses the orientation of circle `i`; arrow directions are kept.
    pub fn reverse_circle(&self, i: usize) -> Result<Multistring, DiagramError> {
        self.circle(i)?;
        let mut circles = self.circles.clone();
        circles[i].reverse();
        Ok(Multistring::from_raw_parts(circles, self.arrows.clone()))
    }

    /// Smallest `n<k>` label not yet in use.
    pub(crate) fn fresh_label(&self, avoid: &[&str]) -> String {
        (0..)
            .map(|k| format!("n{k}"))
            .find(|l| !self.arrows.contains_key(l) && !avoid.contains(&l.as_str()))
            .expect("unbounded label supply")
    }

    /// Canonical form up to rotation of every circle and renaming of labels.
    /// Exponential in the number of circles; intended for small diagrams.
    pub fn relabel_canonical(&self) -> Vec<Vec<(usize, Role)>> {
        let words: Vec<Vec<EndpointRef>> = (0..self.circle_count()).map(|i| self.word(i)).collect();
        let mut best: Option<Vec<Vec<(usize, Role)>>> = None;
        let mut shifts = vec![0usize; words.len()];
        loop {
            let mut names: HashMap<&str, usize> = HashMap::new();
            let encoded: Vec<Vec<(usize, Role)>> = words
                .iter()
                .zip(&shifts)
                .map(|(w, &s)| {
                    (0..w.len())
                        .map(|k| {
                            let t = &w[(k + s) % w.len()];
                            let fresh = names.len();
                            (*names.entry(t.label.as_str()).or_insert(fresh), t.role)
                        })
                        .collect()
                })
                .collect();
            if best.as_ref().is_none_or(|b| encoded < *b) {
                best = Some(encoded);
            }
            let mut k = 0;
            loop {
                if k == shifts.len() {
                    return best.unwrap_or_default();
                }
                shifts[k] += 1;
                if shifts[k] < words[k].len().max(1) {
                    break;
                }
                shifts[k] = 0;
                k += 1;
            }
        }
    }

    pub fn equivalent_up_to_relabeling(&self, other: &Multistring) -> bool {
        self.circle_count() == other.circle_count()
            && self.arrow_count() == other.arrow_count()
            && self.relabel_canonical() == other.relabel_canonical()
    }

    /// Text form: one `circle:` line per core circle.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for word in self.normalized_words() {
            s.push_str("circle:");
            for t in word {
                s.push(' ');
                s.push_str(&t.to_string());
            }
            s.push('\n');
        }
        s
    }
}

fn least_rotation(word: Vec<EndpointRef>) -> Vec<EndpointRef> {
    let n = word.len();
    if n == 0 {
        return word;
    }
    let best = (0..n)
        .min_by(|&a, &b| {
            (0..n)
                .map(|k| &word[(a + k) % n])
                .cmp((0..n).map(|k| &word[(b + k) % n]))
        })
        .unwrap_or(0);
    let mut w = word;
    w.rotate_left(best);
    w
}

impl PartialEq for Multistring {
    fn eq(&self, other: &Self) -> bool {
        self.normalized_words() == other.normalized_words()
    }
}

impl Eq for Multistring {}

impl Hash for Multistring {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.normalized_words().hash(state);
    }
}

impl fmt::Display for Multistring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ms(text: &str) -> Multistring {
        parse_multistring(text).unwrap()
    }

    #[test]
    fn equality_ignores_rotation() {
        assert_eq!(ms("circle: a+ b+ a- b-\n"), ms("circle: a- b- a+ b+\n"));
        assert_ne!(ms("circle: a+ b+ a- b-\n"), ms("circle: a+ a- b+ b-\n"));
    }

    #[test]
    fn relabeling_equivalence() {
        assert!(ms("circle: a+ a-").equivalent_up_to_relabeling(&ms("circle: n0- n0+")));
        assert!(!ms("circle: a+ b+ a- b-").equivalent_up_to_relabeling(&ms("circle: a+ a- b+ b-")));
    }

    #[test]
    fn dangling_and_duplicate_endpoints_reported() {
        let mut arrows = BTreeMap::new();
        arrows.insert("a".to_string(), ArrowEnds { tail: 0, head: 7 });
        let bad = Multistring::from_raw_parts(vec![vec![0, 1]], arrows.clone());
        let v = bad.validate();
        assert!(v.contains(&Violation::DanglingEndpoint { arrow: "a".into(), endpoint: 7 }));
        assert!(v.contains(&Violation::OrphanEndpoint { endpoint: 1 }));

        arrows.insert("a".to_string(), ArrowEnds { tail: 0, head: 1 });
        let dup = Multistring::from_raw_parts(vec![vec![0, 1, 1]], arrows);
        assert_eq!(dup.validate(), vec![Violation::DuplicateEndpoint { endpoint: 1 }]);
    }

    #[test]
    fn open_arc_membership() {
        let m = ms("circle: g+ a+ g- a-");
        let a_tail = m.arrow("a").unwrap().tail;
        let a_head = m.arrow("a").unwrap().head;
        assert!(m.in_open_arc("g", a_tail).unwrap());
        assert!(!m.in_open_arc("g", a_head).unwrap());
        assert!(!m.in_open_arc("g", m.arrow("g").unwrap().tail).unwrap());
    }

    #[test]
    fn induced_string_keeps_only_own_self_arrows() {
        let tau = fixture_tau();
        let alpha = tau.induced_string(1).unwrap();
        assert_eq!(alpha.circle_count(), 1);
        assert_eq!(alpha.arrows().keys().collect::<Vec<_>>(), ["g2"]);
        let split = ms("circle: a+ b+\ncircle: a- b-");
        assert_eq!(split.induced_string(0).unwrap().arrow_count(), 0);
        assert!(matches!(split.induced_string(2), Err(DiagramError::CircleOutOfRange { .. })));
    }

    #[test]
    fn reversals_are_involutions() {
        let s = fixture_sigma();
        assert_eq!(s.reverse_all_arrows().reverse_all_arrows(), s);
        assert_eq!(s.reverse_circle(1).unwrap().reverse_circle(1).unwrap(), s);
        assert_ne!(s.reverse_all_arrows(), s);
    }
}
