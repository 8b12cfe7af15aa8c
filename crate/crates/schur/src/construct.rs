//! S-ring constructors: group ring, rank 2, cyclotomic, tensor and wreath
//! products, generalized-wreath detection, and the closure (generated
//! S-ring) of a family of subsets.

use crate::abelian::{AbelianGroup, Elem, GroupHom};
use crate::error::{Error, Result};
use crate::sring::SRing;
use crate::wl;
use std::collections::HashSet;

/// The full group ring `ZG`: every class a singleton.
pub fn full_group_ring(group: &AbelianGroup) -> SRing {
    let partition = group.elements().map(|x| vec![x]).collect();
    SRing::validate(group.clone(), partition).expect("singletons always form an S-ring")
}

/// The rank-2 S-ring `{{e}, G \ {e}}`.
pub fn rank2(group: &AbelianGroup) -> Result<SRing> {
    if group.order() < 2 {
        return Err(Error::Precondition("rank 2 needs at least two elements"));
    }
    let rest: Vec<Elem> = group.elements().skip(1).collect();
    SRing::validate(group.clone(), vec![vec![0], rest])
}

/// Closes a list of automorphisms to the subgroup of `Aut(G)` they
/// generate; the permutation tables are the group elements.
pub fn close_automorphism_group(group: &AbelianGroup, gens: &[GroupHom]) -> Result<Vec<GroupHom>> {
    for f in gens {
        if f.source() != group || f.target() != group || !f.is_bijective() {
            return Err(Error::NotAnAutomorphism);
        }
    }
    let mut seen: HashSet<Vec<Elem>> = HashSet::new();
    let identity = GroupHom::identity(group);
    seen.insert(identity.table().to_vec());
    let mut members = vec![identity];
    let mut frontier = vec![0usize];
    while let Some(i) = frontier.pop() {
        for g in gens {
            let next = members[i].compose(g);
            if seen.insert(next.table().to_vec()) {
                members.push(next);
                frontier.push(members.len() - 1);
            }
        }
    }
    Ok(members)
}

/// The cyclotomic S-ring `cyc(K, G)`: basic sets are the orbits of the
/// subgroup of `Aut(G)` generated by the given automorphisms.
pub fn cyclotomic(group: &AbelianGroup, generators: &[GroupHom]) -> Result<SRing> {
    let k = close_automorphism_group(group, generators)?;
    let mut seen = vec![false; group.order()];
    let mut partition: Vec<Vec<Elem>> = Vec::new();
    for x in group.elements() {
        if seen[x] {
            continue;
        }
        let mut orbit: Vec<Elem> = k.iter().map(|f| f.apply(x)).collect();
        orbit.sort_unstable();
        orbit.dedup();
        for &y in &orbit {
            seen[y] = true;
        }
        partition.push(orbit);
    }
    SRing::validate(group.clone(), partition)
}

/// The tensor product over `G_1 x G_2`: classes are the products
/// `X_1 x X_2`.
pub fn tensor(a1: &SRing, a2: &SRing) -> SRing {
    let g1 = a1.group();
    let g2 = a2.group();
    let factors: Vec<u64> = g1.factors().iter().chain(g2.factors()).copied().collect();
    let g = AbelianGroup::new(&factors).expect("operand factor lists are valid");
    let n2 = g2.order();
    let mut partition = Vec::with_capacity(a1.rank() * a2.rank());
    for x1 in a1.basic_sets() {
        for x2 in a2.basic_sets() {
            let mut class = Vec::with_capacity(x1.len() * x2.len());
            for &a in x1 {
                for &b in x2 {
                    class.push(a * n2 + b);
                }
            }
            partition.push(class);
        }
    }
    SRing::validate(g, partition).expect("tensor products of S-rings are S-rings")
}

/// The wreath product over `G_1 x G_2`: classes `X_1 x {e_2}` together with
/// the full fibers `G_1 x X_2` for the nontrivial classes of the second
/// operand.
pub fn wreath(a1: &SRing, a2: &SRing) -> SRing {
    let g1 = a1.group();
    let g2 = a2.group();
    let factors: Vec<u64> = g1.factors().iter().chain(g2.factors()).copied().collect();
    let g = AbelianGroup::new(&factors).expect("operand factor lists are valid");
    let n2 = g2.order();
    let mut partition = Vec::with_capacity(a1.rank() + a2.rank() - 1);
    for x1 in a1.basic_sets() {
        partition.push(x1.iter().map(|&a| a * n2).collect());
    }
    for (i, x2) in a2.basic_sets().iter().enumerate() {
        if i == a2.identity_index() {
            continue;
        }
        let mut class = Vec::with_capacity(g1.order() * x2.len());
        for a in g1.elements() {
            for &b in x2 {
                class.push(a * n2 + b);
            }
        }
        partition.push(class);
    }
    SRing::validate(g, partition).expect("wreath products of S-rings are S-rings")
}

/// An A-section `U/L` satisfying the generalized-wreath condition:
/// `L <= rad(X)` for every basic set outside `U`.
#[derive(Clone, Debug)]
pub struct GwrWitness {
    pub upper: crate::abelian::Subgroup,
    pub lower: crate::abelian::Subgroup,
    /// `L != {e}` and `U != G`.
    pub proper: bool,
}

/// Every A-section `U/L` for which the S-ring is the `U/L`-wreath product,
/// improper witnesses included.
pub fn gwr_sections(ring: &SRing) -> Result<Vec<GwrWitness>> {
    let group = ring.group();
    let subs = ring.a_subgroups()?;
    // radicals of the classes outside each candidate U are needed often;
    // precompute the class radicals once
    let radicals: Vec<Vec<Elem>> = (0..ring.rank())
        .map(|i| ring.class_radical(i).elements().to_vec())
        .collect();
    let mut out = Vec::new();
    for u in &subs {
        let outside: Vec<usize> = (0..ring.rank())
            .filter(|&i| !u.contains(ring.class(i)[0]))
            .collect();
        for l in &subs {
            if !l.is_subgroup_of(u) {
                continue;
            }
            let ok = outside.iter().all(|&i| {
                l.elements()
                    .iter()
                    .all(|&g| radicals[i].binary_search(&g).is_ok())
            });
            if ok {
                out.push(GwrWitness {
                    upper: u.clone(),
                    lower: l.clone(),
                    proper: l.len() > 1 && u.len() < group.order(),
                });
            }
        }
    }
    Ok(out)
}

/// The coarsest S-ring in which every seed set is an A-set, computed by
/// Weisfeiler–Leman stabilization of the seed relations on `G x G`.
pub fn closure(group: &AbelianGroup, seeds: &[Vec<Elem>]) -> Result<SRing> {
    let mut clean: Vec<Vec<Elem>> = Vec::with_capacity(seeds.len());
    for s in seeds {
        let mut s = s.clone();
        s.sort_unstable();
        s.dedup();
        if let Some(&m) = s.last() {
            if m >= group.order() {
                return Err(Error::ElementOutOfRange(m, group.order()));
            }
        }
        clean.push(s);
    }
    let (partition, _) = wl::stable_cayley_partition(group, &clean)?;
    SRing::validate(group.clone(), partition)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::AbelianGroup;

    fn group(s: &str) -> AbelianGroup {
        AbelianGroup::parse(s).unwrap()
    }

    #[test]
    fn group_ring_ranks() {
        assert_eq!(full_group_ring(&group("C2")).rank(), 2);
        assert_eq!(full_group_ring(&group("C3xC9")).rank(), 27);
    }

    #[test]
    fn group_ring_equals_trivial_cyclotomic() {
        let g = group("C2xC4");
        let zg = full_group_ring(&g);
        let cyc = cyclotomic(&g, &[GroupHom::identity(&g)]).unwrap();
        assert_eq!(zg, cyc);
    }

    #[test]
    fn rank2_basics() {
        let g = group("C2");
        assert_eq!(rank2(&g).unwrap(), full_group_ring(&g));
        let sizes = rank2(&group("C4"))
            .unwrap()
            .valency_profile();
        assert_eq!(sizes, std::collections::BTreeSet::from([1, 3]));
    }

    #[test]
    fn cyclotomic_inversion_over_c5() {
        let g = group("C5");
        let inv = GroupHom::new(g.clone(), g.clone(), vec![g.neg(1)]).unwrap();
        let ring = cyclotomic(&g, &[inv]).unwrap();
        assert_eq!(ring.basic_sets(), &[vec![0], vec![1, 4], vec![2, 3]]);
    }

    #[test]
    fn cyclotomic_rejects_non_automorphisms() {
        let g = group("C4");
        // x -> 2x is a homomorphism but not bijective
        let f = GroupHom::new(g.clone(), g.clone(), vec![2]).unwrap();
        assert!(matches!(
            cyclotomic(&g, &[f]),
            Err(Error::NotAnAutomorphism)
        ));
    }

    #[test]
    fn cyclotomic_sigma_over_c3xc3() {
        // sigma: a -> b, b -> a^2 generates an order-4 group with orbit
        // sizes 1, 4, 4
        let g = group("C3xC3");
        let a = g.from_coords(&[0, 1]);
        let b = g.from_coords(&[1, 0]);
        let sigma = GroupHom::new(
            g.clone(),
            g.clone(),
            vec![g.mul(a, 2), b], // e_1 = b maps to a^2, e_2 = a maps to b
        )
        .unwrap();
        let k = close_automorphism_group(&g, &[sigma.clone()]).unwrap();
        assert_eq!(k.len(), 4);
        let ring = cyclotomic(&g, &[sigma]).unwrap();
        assert_eq!(ring.rank(), 3);
        let mut sizes: Vec<usize> = ring.basic_sets().iter().map(|c| c.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 4, 4]);
    }

    #[test]
    fn tensor_of_group_rings() {
        let c2 = group("C2");
        let z2 = full_group_ring(&c2);
        let t = tensor(&z2, &z2);
        assert_eq!(t, full_group_ring(&group("C2xC2")));
        let r3 = rank2(&group("C3")).unwrap();
        assert_eq!(tensor(&r3, &r3).rank(), 4);
    }

    #[test]
    fn tensor_constants_factor() {
        let a1 = rank2(&group("C3")).unwrap();
        let a2 = full_group_ring(&group("C2"));
        let t = tensor(&a1, &a2);
        let g = t.group().clone();
        // oracle: count representations directly in the product group
        for x in 0..t.rank() {
            for y in 0..t.rank() {
                for z in 0..t.rank() {
                    let z0 = t.class(z)[0];
                    let mut count = 0u32;
                    for &a in t.class(x) {
                        for &b in t.class(y) {
                            if g.add(a, b) == z0 {
                                count += 1;
                            }
                        }
                    }
                    assert_eq!(t.structure_constant(x, y, z), count);
                }
            }
        }
        // and the factorization (x1,x2),(y1,y2),(z1,z2) ->
        // c1 * c2 holds for all index pairs
        for (x, (x1, x2)) in index_pairs(&a1, &a2, &t).iter().enumerate() {
            for (y, (y1, y2)) in index_pairs(&a1, &a2, &t).iter().enumerate() {
                for (z, (z1, z2)) in index_pairs(&a1, &a2, &t).iter().enumerate() {
                    assert_eq!(
                        t.structure_constant(x, y, z),
                        a1.structure_constant(*x1, *y1, *z1)
                            * a2.structure_constant(*x2, *y2, *z2)
                    );
                }
            }
        }
    }

    /// For each tensor class, the pair of operand class indices it came from.
    fn index_pairs(a1: &SRing, a2: &SRing, t: &SRing) -> Vec<(usize, usize)> {
        let n2 = a2.group().order();
        (0..t.rank())
            .map(|i| {
                let e = t.class(i)[0];
                (a1.class_of(e / n2), a2.class_of(e % n2))
            })
            .collect()
    }

    #[test]
    fn wreath_rank_and_radicals() {
        let r2 = rank2(&group("C2")).unwrap();
        let w = wreath(&r2, &r2);
        assert_eq!(w.rank(), 3);
        // classes outside G1 x {e2} are full G1-fibers
        let g = w.group();
        let g1e: Vec<Elem> = vec![0, 2]; // (0,0),(1,0) in C2xC2 with n2 = 2
        for i in 0..w.rank() {
            let class = w.class(i);
            if class.iter().any(|&x| !g1e.contains(&x)) {
                let rad = w.class_radical(i);
                assert!(g1e.iter().all(|&x| rad.contains(x)));
            }
        }
        assert_eq!(g.order(), 4);
    }

    #[test]
    fn wreath_contains_plain_witness() {
        let r2 = rank2(&group("C2")).unwrap();
        let w = wreath(&r2, &rank2(&group("C4")).unwrap());
        let witnesses = gwr_sections(&w).unwrap();
        // U = L = G1 x {e2} = {0, 8} with n2 = 4... the first factor embeds
        // as multiples of |G2|
        let expected: Vec<Elem> = vec![0, 4];
        assert!(witnesses.iter().any(|w| {
            w.upper.elements() == expected.as_slice() && w.lower.elements() == expected.as_slice()
        }));
    }

    #[test]
    fn group_ring_has_only_improper_witnesses() {
        let zg = full_group_ring(&group("C2xC4"));
        for w in gwr_sections(&zg).unwrap() {
            assert!(!w.proper);
        }
    }

    #[test]
    fn closure_trivial_cases() {
        let g = group("C6");
        let rest: Vec<Elem> = (1..6).collect();
        assert_eq!(closure(&g, &[rest]).unwrap(), rank2(&g).unwrap());
        // a single generator splits everything into singletons
        assert_eq!(closure(&g, &[vec![1]]).unwrap(), full_group_ring(&g));
        // no seeds: rank 2
        assert_eq!(closure(&g, &[]).unwrap().rank(), 2);
    }

    #[test]
    fn closure_is_monotone_and_idempotent() {
        let g = group("C2xC4");
        let a = closure(&g, &[vec![1, 2]]).unwrap();
        let b = closure(&g, &[vec![1, 2], vec![3]]).unwrap();
        // more seeds: finer or equal, i.e. every class of a is a union of
        // classes of b
        for class in a.basic_sets() {
            let classes: std::collections::HashSet<usize> =
                class.iter().map(|&x| b.class_of(x)).collect();
            let total: usize = classes.iter().map(|&i| b.class(i).len()).sum();
            assert_eq!(total, class.len());
        }
        // idempotent: closing a ring's own classes returns it
        let again = closure(&g, a.basic_sets()).unwrap();
        assert_eq!(a, again);
    }
}
