//! Homotopy invariants read off (primitive) based matrices.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::MatrixError;
use crate::homology::is_primitive;
use crate::pairing::{matrix_rank, n_j, BasedMatrix, WovenBasedMatrix};

/// Integer polynomial in `t` with Laurent exponents in `x`. Zero
/// coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<(u32, i64), i64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(coeff: i64, t: u32, x: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(coeff, t, x);
        p
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn add_term(&mut self, coeff: i64, t: u32, x: i64) {
        if coeff == 0 {
            return;
        }
        let e = self.terms.entry((t, x)).or_insert(0);
        *e += coeff;
        if *e == 0 {
            self.terms.remove(&(t, x));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(t_exp, x_exp, coeff)` in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, i64, i64)> + '_ {
        self.terms.iter().map(|(&(t, x), &c)| (t, x, c))
    }

    pub fn coeff(&self, t: u32, x: i64) -> i64 {
        self.terms.get(&(t, x)).copied().unwrap_or(0)
    }

    /// Highest power of `t`; `None` for the zero polynomial.
    pub fn degree_t(&self) -> Option<u32> {
        self.terms.keys().map(|&(t, _)| t).max()
    }

    /// Substitutes `x = 1`.
    pub fn at_x_one(&self) -> LaurentPoly {
        let mut p = Self::zero();
        for (t, _, c) in self.terms() {
            p.add_term(c, t, 0);
        }
        p
    }

    /// `∂/∂t`.
    pub fn derivative_t(&self) -> LaurentPoly {
        let mut p = Self::zero();
        for (t, x, c) in self.terms() {
            if t > 0 {
                p.add_term(c * t as i64, t - 1, x);
            }
        }
        p
    }

    /// Value at `t = 0`, `x = 1`.
    pub fn eval_t0(&self) -> i64 {
        self.terms().filter(|&(t, _, _)| t == 0).map(|(_, _, c)| c).sum()
    }

    /// Value at `t = 1`, `x = 1`.
    pub fn eval_t1(&self) -> i64 {
        self.terms().map(|(_, _, c)| c).sum()
    }

    pub fn scale(&self, k: i64) -> LaurentPoly {
        let mut p = Self::zero();
        for (t, x, c) in self.terms() {
            p.add_term(c * k, t, x);
        }
        p
    }
}

impl fmt::Display for LaurentPoly {
    /// Descending monomial order, e.g. `-2*t^2*x^-1 + t + 3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (&(t, x), &c)) in self.terms.iter().rev().enumerate() {
            let mag = c.unsigned_abs();
            match (k, c < 0) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mut factors = Vec::new();
            if mag != 1 || (t == 0 && x == 0) {
                factors.push(mag.to_string());
            }
            match t {
                0 => {}
                1 => factors.push("t".into()),
                _ => factors.push(format!("t^{t}")),
            }
            match x {
                0 => {}
                1 => factors.push("x".into()),
                _ => factors.push(format!("x^{x}")),
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.terms())
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let triples: Vec<(u32, i64, i64)> = Vec::deserialize(d)?;
        let mut p = LaurentPoly::zero();
        for (t, x, c) in triples {
            p.add_term(c, t, x);
        }
        Ok(p)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        let mut p = self.clone();
        for (t, x, c) in o.terms() {
            p.add_term(c, t, x);
        }
        p
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: &LaurentPoly) -> LaurentPoly {
        self + &-o
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(-1)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for (t1, x1, c1) in self.terms() {
            for (t2, x2, c2) in o.terms() {
                p.add_term(c1 * c2, t1 + t2, x1 + x2);
            }
        }
        p
    }
}

/// `Σ_{g ≠ s} sign(n(g)) t^{|n(g)|}`.
pub fn u_poly_1string(t: &BasedMatrix) -> LaurentPoly {
    let mut p = LaurentPoly::zero();
    for n in t.n_values() {
        p.add_term(n.signum(), n.unsigned_abs() as u32, 0);
    }
    p
}

/// `u_i` for each component, in component order.
pub fn u_components(m: &WovenBasedMatrix) -> Vec<LaurentPoly> {
    let n = m.n_components();
    (0..n)
        .map(|i| {
            let s = m.base(i);
            let mut u = LaurentPoly::zero();
            for g in m.self_arrows(i) {
                let ni = n_j(m, g, i);
                if ni == 0 {
                    continue;
                }
                let mut term = LaurentPoly::monomial(ni.signum(), ni.unsigned_abs() as u32, 0);
                for j in (0..n).filter(|&j| j != i) {
                    let e = n_j(m, g, j);
                    let mut factor = LaurentPoly::monomial(1, 0, e);
                    factor.add_term(1, 0, n_j(m, s, j) - e);
                    term = &term * &factor;
                }
                u = &u + &term;
            }
            u
        })
        .collect()
}

/// The multiset `{u_1, …, u_n}`, sorted.
pub fn u_invariant(m: &WovenBasedMatrix) -> Vec<LaurentPoly> {
    let mut u = u_components(m);
    u.sort();
    u
}

/// `Σ_i u_i`: weaker than the multiset, reported only.
pub fn u_sum(m: &WovenBasedMatrix) -> LaurentPoly {
    u_components(m).iter().fold(LaurentPoly::zero(), |acc, u| &acc + u)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RhoFamily {
    pub rho: usize,
    pub rho_prime: usize,
    pub rho_cap: usize,
    /// `#G_i − 1` in component order.
    pub rho_i: Vec<usize>,
}

fn require_primitive(m: &WovenBasedMatrix) -> Result<(), MatrixError> {
    if is_primitive(m) {
        Ok(())
    } else {
        Err(MatrixError::NotPrimitive)
    }
}

pub fn rho_family(m: &WovenBasedMatrix) -> Result<RhoFamily, MatrixError> {
    require_primitive(m)?;
    let n = m.n_components();
    let (g, i) = m.size();
    let rho = RhoFamily {
        rho: g + i - n,
        rho_prime: g - n,
        rho_cap: i,
        rho_i: (0..n).map(|c| m.self_arrows(c).len()).collect(),
    };
    debug_assert_eq!(rho.rho, rho.rho_prime + rho.rho_cap);
    Ok(rho)
}

/// Half the rank of the full pairing matrix.
pub fn genus_lower_bound(m: &WovenBasedMatrix) -> Result<usize, MatrixError> {
    require_primitive(m)?;
    Ok(matrix_rank(m) / 2)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub u: Vec<LaurentPoly>,
    pub u_sum: LaurentPoly,
    #[serde(flatten)]
    pub rho: RhoFamily,
    pub genus_lower_bound: usize,
    /// `(#G_•, #I_•)`, bases included in `#G_•`.
    pub primitive_size: (usize, usize),
}

impl InvariantReport {
    pub fn of_primitive(m: &WovenBasedMatrix) -> Result<Self, MatrixError> {
        let rho = rho_family(m)?;
        Ok(InvariantReport {
            u: u_invariant(m),
            u_sum: u_sum(m),
            rho,
            genus_lower_bound: matrix_rank(m) / 2,
            primitive_size: m.size(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let u: Vec<String> = self.u.iter().map(ToString::to_string).collect();
        out += &format!("u: {{{}}}\n", u.join(", "));
        out += &format!("u_sum: {}\n", self.u_sum);
        out += &format!("rho: {}\nrho_prime: {}\nrho_cap: {}\n", self.rho.rho, self.rho.rho_prime, self.rho.rho_cap);
        let ri: Vec<String> = self.rho.rho_i.iter().map(ToString::to_string).collect();
        out += &format!("rho_i: [{}]\n", ri.join(", "));
        out += &format!("genus_lower_bound: {}\n", self.genus_lower_bound);
        out += &format!("primitive_size: ({}, {})\n", self.primitive_size.0, self.primitive_size.1);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{canonical_surface_genus, fixture_sigma, fixture_tau, gen_alpha, gen_beta, parse_multistring, random_multistring};
    use crate::homology::{reduce_to_primitive, ReduceOptions};
    use crate::pairing::{based_matrix, multistring_based_matrix};

    fn primitive(ms: &crate::Multistring) -> WovenBasedMatrix {
        reduce_to_primitive(&multistring_based_matrix(ms).unwrap(), &ReduceOptions::default()).unwrap().0
    }

    #[test]
    fn display_order() {
        let mut p = LaurentPoly::zero();
        p.add_term(3, 0, 0);
        p.add_term(1, 1, 0);
        p.add_term(-2, 2, -1);
        assert_eq!(p.to_string(), "-2*t^2*x^-1 + t + 3");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
        assert_eq!(LaurentPoly::monomial(-1, 1, 1).to_string(), "-t*x");
        assert_eq!((&LaurentPoly::monomial(1, 2, 0) - &LaurentPoly::constant(1)).to_string(), "t^2 - 1");
        assert_eq!(serde_json::to_string(&p).unwrap(), "[[0,0,3],[1,0,1],[2,-1,-2]]");
        let back: LaurentPoly = serde_json::from_str("[[2,-1,-2],[1,0,1],[0,0,3],[5,0,0]]").unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn cancellation_drops_terms() {
        let p = LaurentPoly::monomial(2, 1, 3);
        assert!((&p - &p).is_zero());
        assert_eq!((&p - &p).terms().count(), 0);
    }

    /// `n(g)` for every arrow of `gen_alpha(p, q)` by direct count.
    #[test]
    fn alpha_u_matches_brute_force() {
        for (p, q) in [(1, 0), (0, 1), (1, 1), (2, 1), (3, 2), (2, 3)] {
            let ms = gen_alpha(p, q);
            let mut brute = LaurentPoly::zero();
            for g in ms.arrows().keys() {
                let n = crate::pairing::n_of(&ms, g).unwrap();
                brute.add_term(n.signum(), n.unsigned_abs() as u32, 0);
            }
            let u = u_poly_1string(&based_matrix(&ms).unwrap());
            assert_eq!(u, brute);
            assert_eq!((u.eval_t0(), u.derivative_t().eval_t1()), (0, 0));
        }
        assert!(u_poly_1string(&based_matrix(&crate::Multistring::trivial(1)).unwrap()).is_zero());
    }

    #[test]
    fn hopf_like_string_has_zero_u() {
        let ms = parse_multistring("circle: x+\ncircle: x-\n").unwrap();
        let u = u_invariant(&multistring_based_matrix(&ms).unwrap());
        assert_eq!(u, vec![LaurentPoly::zero(), LaurentPoly::zero()]);
    }

    #[test]
    fn x_one_gives_twice_induced_u() {
        for args in [(1, 1, 1, 1, 1, 0), (2, 1, 1, 2, 1, 1), (1, 2, 2, 1, 0, 2)] {
            let ms = gen_beta(args.0, args.1, args.2, args.3, args.4, args.5);
            let u = u_components(&multistring_based_matrix(&ms).unwrap());
            for (i, ui) in u.iter().enumerate() {
                let alpha = based_matrix(&ms.induced_string(i).unwrap()).unwrap();
                assert_eq!(ui.at_x_one(), u_poly_1string(&alpha).scale(2));
            }
        }
    }

    /// Term-by-term evaluation straight from the diagram.
    #[test]
    fn beta_u1_two_ways() {
        let ms = gen_beta(1, 1, 1, 1, 1, 0);
        let t = multistring_based_matrix(&ms).unwrap();
        let mut brute = LaurentPoly::zero();
        for g in ms.self_arrows(0) {
            let gi = t.find(g).unwrap();
            let ni = t.at(gi, t.base(0));
            let n2 = t.at(gi, t.base(1));
            let s2 = t.at(t.base(0), t.base(1));
            if ni != 0 {
                brute.add_term(ni.signum(), ni.unsigned_abs() as u32, n2);
                brute.add_term(ni.signum(), ni.unsigned_abs() as u32, s2 - n2);
            }
        }
        assert_eq!(u_components(&t)[0], brute);
    }

    #[test]
    fn rho_examples() {
        let s = primitive(&fixture_sigma());
        let r = rho_family(&s).unwrap();
        assert_eq!((r.rho, r.rho_prime, r.rho_cap), (0, 0, 0));
        let t = primitive(&fixture_tau());
        let r = rho_family(&t).unwrap();
        assert_eq!((r.rho, r.rho_prime, r.rho_cap), (8, 2, 6));
        assert_eq!(t.size(), (5, 6));
        let r = rho_family(&WovenBasedMatrix::trivial(4)).unwrap();
        assert_eq!((r.rho, r.rho_prime, r.rho_cap, r.rho_i), (0, 0, 0, vec![0; 4]));
        let raw = multistring_based_matrix(&fixture_sigma()).unwrap();
        assert_eq!(rho_family(&raw), Err(MatrixError::NotPrimitive));
    }

    #[test]
    fn genus_bounds() {
        assert_eq!(genus_lower_bound(&WovenBasedMatrix::trivial(2)).unwrap(), 0);
        // p + q = 2: the two arrows are complementary and reduce away, while
        // the unreduced pairing still has rank 2, attained by the surface.
        let a = primitive(&gen_alpha(1, 1));
        assert!(a.is_trivial());
        assert_eq!(genus_lower_bound(&a).unwrap(), 0);
        assert_eq!(matrix_rank(&multistring_based_matrix(&gen_alpha(1, 1)).unwrap()) / 2, 1);
        assert_eq!(canonical_surface_genus(&gen_alpha(1, 1)).genus, 1);
        let a = primitive(&gen_alpha(2, 1));
        assert_eq!(genus_lower_bound(&a).unwrap(), 2);
        assert_eq!(canonical_surface_genus(&gen_alpha(2, 1)).genus, 2);
        for seed in 0..40 {
            let ms = random_multistring(1, 6, seed).unwrap();
            let lb = genus_lower_bound(&primitive(&ms)).unwrap();
            assert!(lb <= canonical_surface_genus(&ms).genus, "seed {seed}");
        }
    }

    #[test]
    fn report_text() {
        let r = InvariantReport::of_primitive(&WovenBasedMatrix::trivial(2)).unwrap();
        assert_eq!(
            r.to_text(),
            "u: {0, 0}\nu_sum: 0\nrho: 0\nrho_prime: 0\nrho_cap: 0\nrho_i: [0, 0]\ngenus_lower_bound: 0\nprimitive_size: (2, 0)\n"
        );
        let j = serde_json::to_value(&r).unwrap();
        assert_eq!(j["rho"], 0);
        assert_eq!(j["u"], serde_json::json!([[], []]));
    }
}
