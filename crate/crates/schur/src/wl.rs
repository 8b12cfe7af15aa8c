//! Two-dimensional Weisfeiler–Leman refinement on ordered pairs.
//!
//! A [`RelationColoring`] partitions `V x V` into numbered colors. The
//! stabilizer refines it to the coarsest coherent coloring: for every pair
//! of equal color and every color pair `(i, j)` the number of triangles
//! through the pair is equal. Colors are renumbered canonically on every
//! round (sorted by old color, then by the count signature), so equal
//! inputs yield bit-identical outputs and isomorphic inputs yield aligned
//! color sequences.

use crate::abelian::{AbelianGroup, Elem};
use crate::error::{Error, Result};
use crate::sring::SRing;
use std::collections::BTreeMap;

/// An ordered coloring of `V x V`, colors `0..num_colors` all in use.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationColoring {
    n: usize,
    colors: Vec<u32>,
    num_colors: u32,
}

impl RelationColoring {
    /// Builds a coloring from the `n*n` row-major color matrix. Colors must
    /// be numbered `0..k` with every color present.
    pub fn new(n: usize, colors: Vec<u32>) -> Result<Self> {
        if colors.len() != n * n {
            return Err(Error::Precondition("color matrix must be n*n"));
        }
        let k = colors.iter().copied().max().map_or(0, |m| m + 1);
        let mut present = vec![false; k as usize];
        for &c in &colors {
            present[c as usize] = true;
        }
        if !present.iter().all(|&p| p) {
            return Err(Error::Precondition("color ids must be contiguous"));
        }
        Ok(RelationColoring {
            n,
            colors,
            num_colors: k,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn num_colors(&self) -> u32 {
        self.num_colors
    }

    pub fn color(&self, u: usize, w: usize) -> u32 {
        self.colors[u * self.n + w]
    }

    /// The pairs of one color class.
    pub fn class_pairs(&self, c: u32) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for w in 0..self.n {
                if self.color(u, w) == c {
                    out.push((u, w));
                }
            }
        }
        out
    }

    /// True iff `other` refines `self` classwise.
    pub fn is_refined_by(&self, other: &RelationColoring) -> bool {
        if self.n != other.n {
            return false;
        }
        let mut image = vec![u32::MAX; other.num_colors as usize];
        for (a, b) in other.colors.iter().zip(&self.colors) {
            let slot = &mut image[*a as usize];
            if *slot == u32::MAX {
                *slot = *b;
            } else if *slot != *b {
                return false;
            }
        }
        true
    }
}

/// Stabilizes a coloring to the coarsest coherent refinement with canonical
/// color order. An already-coherent input comes back unchanged.
pub fn wl_stabilize(initial: &RelationColoring) -> RelationColoring {
    let n = initial.n;
    let mut colors = initial.colors.clone();
    let mut num_colors = initial.num_colors;
    loop {
        // signature of (u,w): counts of (color(u,v), color(v,w)) over v
        let mut keys: Vec<(u32, Vec<(u32, u32, u32)>)> = Vec::with_capacity(n * n);
        for u in 0..n {
            for w in 0..n {
                let mut sig: BTreeMap<(u32, u32), u32> = BTreeMap::new();
                for v in 0..n {
                    let a = colors[u * n + v];
                    let b = colors[v * n + w];
                    *sig.entry((a, b)).or_insert(0) += 1;
                }
                let sig: Vec<(u32, u32, u32)> =
                    sig.into_iter().map(|((a, b), c)| (a, b, c)).collect();
                keys.push((colors[u * n + w], sig));
            }
        }
        let mut distinct: Vec<&(u32, Vec<(u32, u32, u32)>)> = keys.iter().collect();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() == num_colors as usize {
            return RelationColoring {
                n,
                colors,
                num_colors,
            };
        }
        let renumber: BTreeMap<&(u32, Vec<(u32, u32, u32)>), u32> = distinct
            .iter()
            .enumerate()
            .map(|(i, k)| (*k, i as u32))
            .collect();
        colors = keys.iter().map(|k| renumber[k]).collect();
        num_colors = distinct.len() as u32;
    }
}

/// Exhaustive coherence check, used by tests: every pair of equal color has
/// equal triangle counts for every color pair.
pub fn is_coherent(coloring: &RelationColoring) -> bool {
    let n = coloring.n;
    let mut reference: Vec<Option<BTreeMap<(u32, u32), u32>>> =
        vec![None; coloring.num_colors as usize];
    for u in 0..n {
        for w in 0..n {
            let mut sig: BTreeMap<(u32, u32), u32> = BTreeMap::new();
            for v in 0..n {
                *sig.entry((coloring.color(u, v), coloring.color(v, w)))
                    .or_insert(0) += 1;
            }
            let c = coloring.color(u, w) as usize;
            match &reference[c] {
                None => reference[c] = Some(sig),
                Some(r) => {
                    if *r != sig {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Initial pair coloring of `G x G` for a family of seed subsets of `G`:
/// the color of `(u, w)` depends on which seeds contain `w - u`, with the
/// diagonal split off. Cell order: diagonal first, then membership
/// signatures in descending order, so a single seed yields
/// (diagonal, seed relation, rest).
pub fn cayley_initial_coloring(group: &AbelianGroup, seeds: &[Vec<Elem>]) -> RelationColoring {
    let n = group.order();
    let mut key_of = vec![(false, Vec::new()); n];
    for (x, key) in key_of.iter_mut().enumerate() {
        let is_diag = x == 0;
        let sig: Vec<bool> = seeds
            .iter()
            .map(|s| s.binary_search(&x).is_ok())
            .collect();
        *key = (is_diag, sig);
    }
    let mut cells: Vec<(bool, Vec<bool>)> = key_of.to_vec();
    cells.sort_unstable_by(|a, b| {
        // diagonal cell first, then signatures descending
        b.0.cmp(&a.0).then_with(|| b.1.cmp(&a.1))
    });
    cells.dedup();
    let cell_index = |key: &(bool, Vec<bool>)| -> u32 {
        cells.iter().position(|c| c == key).unwrap() as u32
    };
    let elem_color: Vec<u32> = key_of.iter().map(cell_index).collect();
    let mut colors = vec![0u32; n * n];
    for u in 0..n {
        for w in 0..n {
            colors[u * n + w] = elem_color[group.sub(w, u)];
        }
    }
    RelationColoring {
        n,
        colors,
        num_colors: cells.len() as u32,
    }
}

/// Stabilizes the Cayley initial coloring of the seeds and reads off the
/// partition of `G`, checking translation invariance on the way.
pub fn stable_cayley_partition(
    group: &AbelianGroup,
    seeds: &[Vec<Elem>],
) -> Result<(Vec<Vec<Elem>>, RelationColoring)> {
    let stable = wl_stabilize(&cayley_initial_coloring(group, seeds));
    let n = group.order();
    for u in 0..n {
        for w in 0..n {
            if stable.color(u, w) != stable.color(0, group.sub(w, u)) {
                return Err(Error::Internal(
                    "stabilized coloring lost translation invariance",
                ));
            }
        }
    }
    let mut partition: Vec<Vec<Elem>> = vec![Vec::new(); stable.num_colors as usize];
    for x in 0..n {
        partition[stable.color(0, x) as usize].push(x);
    }
    Ok((partition, stable))
}

/// The minimal Cayley scheme in which the Cayley graph `Cay(G, X)` is a
/// union of basic relations, as an S-ring. `X` must avoid the identity;
/// it need not be inverse-closed (directed graphs are fine). `X` is an
/// A-set of the result.
pub fn scheme_from_cayley_graph(group: &AbelianGroup, x: &[Elem]) -> Result<SRing> {
    Ok(scheme_with_color_order(group, x)?.0)
}

/// Like [`scheme_from_cayley_graph`], also returning the ring class index of
/// every stabilized WL color, in canonical WL order. Matching these
/// sequences on two graphs yields the candidate algebraic isomorphism of
/// the isomorphism pipeline.
pub fn scheme_with_color_order(
    group: &AbelianGroup,
    x: &[Elem],
) -> Result<(SRing, Vec<usize>)> {
    let mut x = x.to_vec();
    x.sort_unstable();
    x.dedup();
    if x.iter().any(|&e| e == 0) {
        return Err(Error::Precondition("connection set must avoid the identity"));
    }
    if x.iter().any(|&e| e >= group.order()) {
        return Err(Error::ElementOutOfRange(
            *x.iter().max().unwrap(),
            group.order(),
        ));
    }
    let (partition, stable) = stable_cayley_partition(group, &[x.clone()])?;
    let ring = SRing::validate(group.clone(), partition)?;
    debug_assert!(ring.is_a_set(&x));
    let color_to_class: Vec<usize> = (0..stable.num_colors())
        .map(|c| {
            let first = (0..group.order())
                .find(|&e| stable.color(0, e) == c)
                .expect("every color meets row zero by translation invariance");
            ring.class_of(first)
        })
        .collect();
    Ok((ring, color_to_class))
}

/// Reads a connection set: one element literal per line, `#` starts a
/// comment, blank lines ignored.
pub fn parse_connection_set(group: &AbelianGroup, text: &str) -> Result<Vec<Elem>> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        out.push(group.parse_element(line)?);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(s: &str) -> AbelianGroup {
        AbelianGroup::parse(s).unwrap()
    }

    /// Independent naive WL oracle: refine with string signatures and no
    /// canonical renumbering, return only the stable color count.
    fn naive_wl_color_count(initial: &RelationColoring) -> usize {
        let n = initial.vertex_count();
        let mut colors: Vec<String> = (0..n * n)
            .map(|i| initial.colors[i].to_string())
            .collect();
        loop {
            let mut next: Vec<String> = Vec::with_capacity(n * n);
            for u in 0..n {
                for w in 0..n {
                    let mut sig: Vec<String> = (0..n)
                        .map(|v| format!("{}|{}", colors[u * n + v], colors[v * n + w]))
                        .collect();
                    sig.sort();
                    next.push(format!("{}#{}", colors[u * n + w], sig.join(",")));
                }
            }
            let count = |cs: &[String]| {
                let mut s: Vec<&String> = cs.iter().collect();
                s.sort();
                s.dedup();
                s.len()
            };
            if count(&next) == count(&colors) {
                return count(&colors);
            }
            colors = next;
        }
    }

    #[test]
    fn pentagon_stabilizes_to_three_colors() {
        let c5 = group("C5");
        let (ring, order) = scheme_with_color_order(&c5, &[1, 4]).unwrap();
        assert_eq!(ring.rank(), 3);
        assert_eq!(ring.basic_sets(), &[vec![0], vec![1, 4], vec![2, 3]]);
        assert_eq!(order.len(), 3);
    }

    #[test]
    fn complete_graph_gives_rank_two() {
        let g = group("C2xC2");
        let ring = scheme_from_cayley_graph(&g, &[1, 2, 3]).unwrap();
        assert_eq!(ring.rank(), 2);
    }

    #[test]
    fn coherent_input_is_returned_unchanged() {
        let g = group("C2xC4");
        let ring = SRing::validate(g.clone(), vec![vec![0], (1..8).collect()]).unwrap();
        let n = g.order();
        let mut colors = vec![0u32; n * n];
        for u in 0..n {
            for w in 0..n {
                colors[u * n + w] = ring.class_of(g.sub(w, u)) as u32;
            }
        }
        let coloring = RelationColoring::new(n, colors).unwrap();
        assert!(is_coherent(&coloring));
        let stable = wl_stabilize(&coloring);
        assert_eq!(stable, coloring);
    }

    #[test]
    fn stabilization_is_coherent_and_refines_input() {
        let c8 = group("C8");
        let initial = cayley_initial_coloring(&c8, &[vec![1, 7]]);
        let stable = wl_stabilize(&initial);
        assert!(is_coherent(&stable));
        assert!(initial.is_refined_by(&stable));
        assert_eq!(
            stable.num_colors() as usize,
            naive_wl_color_count(&initial),
            "stable color count agrees with the naive oracle"
        );
    }

    #[test]
    fn naive_oracle_agreement_on_assorted_graphs() {
        for (g, x) in [
            (group("C5"), vec![1, 4]),
            (group("C8"), vec![1, 2]),
            (group("C2xC4"), vec![1, 4, 5]),
            (group("C3xC3"), vec![1, 3]),
        ] {
            let initial = cayley_initial_coloring(&g, &[x]);
            let stable = wl_stabilize(&initial);
            assert!(is_coherent(&stable));
            assert_eq!(stable.num_colors() as usize, naive_wl_color_count(&initial));
        }
    }

    #[test]
    fn determinism() {
        let c8 = group("C8");
        let a = wl_stabilize(&cayley_initial_coloring(&c8, &[vec![1, 2]]));
        let b = wl_stabilize(&cayley_initial_coloring(&c8, &[vec![1, 2]]));
        assert_eq!(a, b);
    }

    #[test]
    fn isomorphism_invariance_under_relabeling() {
        // stabilizing the f-image of a coloring yields the f-image of the
        // stabilization, for group automorphisms f used as relabelings
        let g = group("C2xC4");
        let n = g.order();
        let initial = cayley_initial_coloring(&g, &[vec![1, 2]]);
        let stable = wl_stabilize(&initial);
        for f in g.automorphisms() {
            let mut relabeled = vec![0u32; n * n];
            for u in 0..n {
                for w in 0..n {
                    relabeled[f.apply(u) * n + f.apply(w)] = initial.color(u, w);
                }
            }
            let relabeled = RelationColoring::new(n, relabeled).unwrap();
            let stable_relabeled = wl_stabilize(&relabeled);
            for u in 0..n {
                for w in 0..n {
                    assert_eq!(
                        stable_relabeled.color(f.apply(u), f.apply(w)),
                        stable.color(u, w)
                    );
                }
            }
        }
    }

    #[test]
    fn rejects_identity_in_connection_set() {
        let g = group("C4");
        assert!(scheme_from_cayley_graph(&g, &[0, 1]).is_err());
    }

    #[test]
    fn connection_set_parsing() {
        let g = group("C2xC8");
        let text = "# the two generators\n(1,0)\n(0,1) # comment\n\n(0,7)\n";
        let x = parse_connection_set(&g, text).unwrap();
        assert_eq!(
            x,
            vec![
                g.from_coords(&[0, 1]),
                g.from_coords(&[0, 7]),
                g.from_coords(&[1, 0])
            ]
        );
        assert!(parse_connection_set(&g, "(9,9)").is_err());
    }
}
