use serde::{Deserialize, Serialize};

use super::Multistring;

/// Topology of the closed surface obtained by thickening the diagram's
/// crossing graph and capping every boundary circle with a disk.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceGenus {
    /// Sum of the genera of the connected components.
    pub genus: usize,
    /// Boundary circles of the thickened diagram before capping.
    pub boundary_components: usize,
    pub components: usize,
}

/// Genus of the canonical surface. Each arrow `(a, b)` is a 4-valent vertex
/// whose half-edges in counter-clockwise order are out(a), out(b), in(a),
/// in(b); faces are the orbits of rotation after edge reversal.
pub fn canonical_surface_genus(ms: &Multistring) -> SurfaceGenus {
    let endpoint_count: usize = ms.circles().iter().map(Vec::len).sum();
    // Dense index per endpoint; darts are 2 * idx (out) and 2 * idx + 1 (in).
    let mut index = std::collections::HashMap::with_capacity(endpoint_count);
    let mut next = vec![0usize; endpoint_count];
    let mut circle_of = vec![0usize; endpoint_count];
    let mut k = 0;
    for (c, circle) in ms.circles().iter().enumerate() {
        for &e in circle {
            index.insert(e, k);
            circle_of[k] = c;
            k += 1;
        }
    }
    for circle in ms.circles() {
        for (p, &e) in circle.iter().enumerate() {
            next[index[&e]] = index[&circle[(p + 1) % circle.len()]];
        }
    }
    let darts = 2 * endpoint_count;
    let mut alpha = vec![0usize; darts];
    for i in 0..endpoint_count {
        alpha[2 * i] = 2 * next[i] + 1;
        alpha[2 * next[i] + 1] = 2 * i;
    }
    let mut sigma = vec![0usize; darts];
    for ends in ms.arrows().values() {
        let (a, b) = (index[&ends.tail], index[&ends.head]);
        let ring = [2 * a, 2 * b, 2 * a + 1, 2 * b + 1];
        for r in 0..4 {
            sigma[ring[r]] = ring[(r + 1) % 4];
        }
    }

    // Union circles joined by arrows.
    let n = ms.circle_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for ends in ms.arrows().values() {
        let (a, b) = (circle_of[index[&ends.tail]], circle_of[index[&ends.head]]);
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    }
    let roots: Vec<usize> = (0..n).map(|c| find(&mut parent, c)).collect();

    // Per component: vertices, edges, faces.
    let mut tally = std::collections::BTreeMap::<usize, (i64, i64, i64)>::new();
    for (c, circle) in ms.circles().iter().enumerate() {
        let t = tally.entry(roots[c]).or_default();
        if circle.is_empty() {
            // An arrow-free circle thickens to an annulus.
            t.2 += 2;
        } else {
            t.1 += circle.len() as i64;
        }
    }
    for ends in ms.arrows().values() {
        tally.entry(roots[circle_of[index[&ends.tail]]]).or_default().0 += 1;
    }
    let mut seen = vec![false; darts];
    for start in 0..darts {
        if seen[start] {
            continue;
        }
        let mut d = start;
        while !seen[d] {
            seen[d] = true;
            d = sigma[alpha[d]];
        }
        tally.get_mut(&roots[circle_of[start / 2]]).expect("tallied").2 += 1;
    }

    let mut genus = 0;
    let mut boundary = 0;
    for &(v, e, f) in tally.values() {
        boundary += f as usize;
        if v > 0 {
            let twice = 2 - (v - e + f);
            debug_assert!(twice >= 0 && twice % 2 == 0);
            genus += (twice / 2) as usize;
        }
    }
    SurfaceGenus { genus, boundary_components: boundary, components: tally.len() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{gen_alpha, parse_multistring};

    #[test]
    fn trivial_circles_are_annuli() {
        let g = canonical_surface_genus(&Multistring::trivial(3));
        assert_eq!(g, SurfaceGenus { genus: 0, boundary_components: 6, components: 3 });
    }

    #[test]
    fn kink_is_planar() {
        let g = canonical_surface_genus(&parse_multistring("circle: a+ a-").unwrap());
        assert_eq!(g, SurfaceGenus { genus: 0, boundary_components: 3, components: 1 });
    }

    #[test]
    fn interleaved_pair_has_genus_one() {
        assert_eq!(canonical_surface_genus(&gen_alpha(1, 1)).genus, 1);
    }

    #[test]
    fn classical_crossing_between_circles_is_planar() {
        // Two circles meeting at two crossings, as in a Hopf-link shadow.
        let ms = parse_multistring("circle: x+ y-\ncircle: x- y+").unwrap();
        assert_eq!(canonical_surface_genus(&ms).genus, 0);
    }
}
