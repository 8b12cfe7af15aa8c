//! Algebraic isomorphisms between S-rings: bijections of basic-set index
//! sets preserving every structure constant, together with their induced
//! maps on A-sets and sections, and a pruned backtracking enumerator.

use crate::abelian::{Elem, Section};
use crate::error::{Error, Result};
use crate::sring::SRing;
use std::fmt;

/// A verified algebraic isomorphism, stored as the class-index map from the
/// source S-ring to the target. The source and target rings are passed to
/// the operations explicitly; the map alone identifies the isomorphism.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlgebraicIso {
    map: Vec<usize>,
}

impl AlgebraicIso {
    /// Verifies the class map and wraps it. Fails with the violating triple
    /// if some structure constant is not preserved.
    pub fn new(source: &SRing, target: &SRing, map: Vec<usize>) -> Result<Self> {
        verify_class_map(source, target, &map)?;
        Ok(AlgebraicIso { map })
    }

    /// The identity on a ring's own classes.
    pub fn identity(ring: &SRing) -> Self {
        AlgebraicIso {
            map: (0..ring.rank()).collect(),
        }
    }

    /// Wraps a map without verification. The caller guarantees it preserves
    /// the structure constants.
    pub(crate) fn from_verified(map: Vec<usize>) -> Self {
        AlgebraicIso { map }
    }

    pub fn class_map(&self) -> &[usize] {
        &self.map
    }

    pub fn rank(&self) -> usize {
        self.map.len()
    }

    pub fn apply(&self, class: usize) -> usize {
        self.map[class]
    }

    pub fn inverse(&self) -> AlgebraicIso {
        let mut inv = vec![0; self.map.len()];
        for (i, &j) in self.map.iter().enumerate() {
            inv[j] = i;
        }
        AlgebraicIso { map: inv }
    }

    /// `self` then `next`.
    pub fn compose(&self, next: &AlgebraicIso) -> AlgebraicIso {
        AlgebraicIso {
            map: self.map.iter().map(|&j| next.map[j]).collect(),
        }
    }

    /// Image of an A-set: the union of the images of its classes.
    pub fn image_of_aset(&self, source: &SRing, target: &SRing, s: &[Elem]) -> Result<Vec<Elem>> {
        if !source.is_a_set(s) {
            return Err(Error::NotAnASet);
        }
        let mut classes: Vec<usize> = s.iter().map(|&x| source.class_of(x)).collect();
        classes.sort_unstable();
        classes.dedup();
        let mut out = Vec::new();
        for c in classes {
            out.extend_from_slice(target.class(self.map[c]));
        }
        out.sort_unstable();
        Ok(out)
    }

    /// The algebraic isomorphism induced on an A-section `U/L`: maps the
    /// quotient ring over `U/L` to the quotient ring over `U^phi / L^phi`.
    /// Returns the target section together with the quotient-level map.
    pub fn induced_on_section(
        &self,
        source: &SRing,
        target: &SRing,
        section: &Section,
    ) -> Result<(Section, AlgebraicIso)> {
        let u_img = self.image_of_aset(source, target, section.upper().elements())?;
        let l_img = self.image_of_aset(source, target, section.lower().elements())?;
        let tg = target.group();
        let u_sub = tg.subgroup_generated(&u_img);
        let l_sub = tg.subgroup_generated(&l_img);
        if u_sub.elements() != u_img.as_slice() || l_sub.elements() != l_img.as_slice() {
            return Err(Error::Internal(
                "image of an A-subgroup is not a subgroup",
            ));
        }
        let target_section = tg.quotient(&u_sub, &l_sub)?;
        let qa = source.quotient_sring(section)?;
        let qb = target.quotient_sring(&target_section)?;
        if qa.rank() != qb.rank() {
            return Err(Error::RankMismatch(qa.rank(), qb.rank()));
        }
        let mut map = vec![usize::MAX; qa.rank()];
        for i in 0..source.rank() {
            let x0 = source.class(i)[0];
            if !section.contains(x0) {
                continue;
            }
            let from = qa.class_of(section.project(x0));
            let y0 = target.class(self.map[i])[0];
            let to = qb.class_of(target_section.project(y0));
            if map[from] == usize::MAX {
                map[from] = to;
            } else if map[from] != to {
                return Err(Error::Internal(
                    "section image of an algebraic isomorphism is inconsistent",
                ));
            }
        }
        let iso = AlgebraicIso::new(&qa, &qb, map)?;
        Ok((target_section, iso))
    }

    /// Dump format: a header, then one `i -> j` line per class.
    pub fn dump(&self) -> String {
        let mut out = format!("algiso {}\n", self.map.len());
        for (i, &j) in self.map.iter().enumerate() {
            out.push_str(&format!("{i} -> {j}\n"));
        }
        out
    }
}

impl fmt::Display for AlgebraicIso {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump())
    }
}

/// Checks that `map` is a bijection of class indices preserving all
/// structure constants. The error carries the first violating triple.
pub fn verify_class_map(source: &SRing, target: &SRing, map: &[usize]) -> Result<()> {
    let r = source.rank();
    if target.rank() != r || map.len() != r {
        return Err(Error::RankMismatch(r, target.rank().max(map.len())));
    }
    let mut seen = vec![false; r];
    for &j in map {
        if j >= r || std::mem::replace(&mut seen[j], true) {
            return Err(Error::Precondition("class map must be a bijection"));
        }
    }
    let ts = source.tensor();
    let tt = target.tensor();
    for x in 0..r {
        for y in 0..r {
            for z in 0..r {
                let lhs = ts.get(x, y, z);
                let rhs = tt.get(map[x], map[y], map[z]);
                if lhs != rhs {
                    return Err(Error::AlgisoViolation { x, y, z, lhs, rhs });
                }
            }
        }
    }
    Ok(())
}

/// All algebraic isomorphisms from `source` to `target`, each exactly once,
/// in a deterministic order.
///
/// Backtracking assigns classes in ascending (size, index) order and prunes
/// on class size, the symmetry flag, structure-constant consistency over
/// fully assigned triples, and the subgroup-image constraints
/// `<X>^phi = <X^phi>` and `rad(X)^phi = rad(X^phi)`.
pub fn enumerate_algisos(source: &SRing, target: &SRing) -> Vec<AlgebraicIso> {
    let r = source.rank();
    if target.rank() != r || source.group().order() != target.group().order() {
        return Vec::new();
    }
    let search = Search::prepare(source, target);
    let mut state = SearchState {
        assignment: vec![usize::MAX; r],
        used: vec![false; r],
        found: Vec::new(),
    };
    search.run(0, &mut state);
    state
        .found
        .into_iter()
        .map(AlgebraicIso::from_verified)
        .collect()
}

struct ClassSets {
    /// class indices constituting `<X>`, sorted
    gen: Vec<usize>,
    /// class indices constituting `rad(X)`, sorted
    rad: Vec<usize>,
}

struct Search<'a> {
    source: &'a SRing,
    target: &'a SRing,
    /// source classes in assignment order: ascending (size, index)
    order: Vec<usize>,
    src_sets: Vec<ClassSets>,
    tgt_sets: Vec<ClassSets>,
}

struct SearchState {
    assignment: Vec<usize>,
    used: Vec<bool>,
    found: Vec<Vec<usize>>,
}

impl<'a> Search<'a> {
    fn prepare(source: &'a SRing, target: &'a SRing) -> Self {
        let r = source.rank();
        let mut order: Vec<usize> = (0..r).collect();
        order.sort_by_key(|&i| (source.class(i).len(), i));
        let class_sets = |ring: &SRing| -> Vec<ClassSets> {
            (0..ring.rank())
                .map(|i| {
                    let gen_sub = ring.group().subgroup_generated(ring.class(i));
                    let rad_sub = ring.class_radical(i);
                    let to_classes = |elems: &[Elem]| {
                        let mut cs: Vec<usize> =
                            elems.iter().map(|&x| ring.class_of(x)).collect();
                        cs.sort_unstable();
                        cs.dedup();
                        cs
                    };
                    ClassSets {
                        gen: to_classes(gen_sub.elements()),
                        rad: to_classes(rad_sub.elements()),
                    }
                })
                .collect()
        };
        Search {
            source,
            target,
            order,
            src_sets: class_sets(source),
            tgt_sets: class_sets(target),
        }
    }

    fn run(&self, depth: usize, state: &mut SearchState) {
        if depth == self.order.len() {
            // the incremental checks cover every triple once all classes are
            // assigned, but a full pass keeps the leaf independent of the
            // pruning bookkeeping
            if verify_class_map(self.source, self.target, &state.assignment).is_ok() {
                state.found.push(state.assignment.clone());
            }
            return;
        }
        let x = self.order[depth];
        if state.assignment[x] != usize::MAX {
            // forced earlier by inverse pairing
            if self.consistent(x, state) {
                self.run(depth + 1, state);
            }
            return;
        }
        let x_inv = self.source.inverse_class(x);
        for y in 0..self.target.rank() {
            if state.used[y] || self.target.class(y).len() != self.source.class(x).len() {
                continue;
            }
            let y_inv = self.target.inverse_class(y);
            let symmetric_x = x_inv == x;
            if symmetric_x != (y_inv == y) {
                continue;
            }
            // assign x -> y and force the inverse pairing
            state.assignment[x] = y;
            state.used[y] = true;
            let forced = if !symmetric_x && state.assignment[x_inv] == usize::MAX {
                if state.used[y_inv] {
                    state.assignment[x] = usize::MAX;
                    state.used[y] = false;
                    continue;
                }
                state.assignment[x_inv] = y_inv;
                state.used[y_inv] = true;
                true
            } else {
                false
            };
            let inverse_ok = state.assignment[x_inv] == y_inv;
            if inverse_ok && self.consistent(x, state) && (!forced || self.consistent(x_inv, state))
            {
                self.run(depth + 1, state);
            }
            if forced {
                state.assignment[x_inv] = usize::MAX;
                state.used[y_inv] = false;
            }
            state.assignment[x] = usize::MAX;
            state.used[y] = false;
        }
    }

    /// Incremental consistency after assigning class `new`: structure
    /// constants over fully assigned triples involving `new`, plus the
    /// generated-subgroup and radical image constraints that became
    /// decidable.
    fn consistent(&self, new: usize, state: &mut SearchState) -> bool {
        let a = &state.assignment;
        let r = a.len();
        let ts = self.source.tensor();
        let tt = self.target.tensor();
        for i in 0..r {
            if a[i] == usize::MAX {
                continue;
            }
            for j in 0..r {
                if a[j] == usize::MAX {
                    continue;
                }
                // triples with the new class in each slot
                if ts.get(new, i, j) != tt.get(a[new], a[i], a[j])
                    || ts.get(i, new, j) != tt.get(a[i], a[new], a[j])
                    || ts.get(i, j, new) != tt.get(a[i], a[j], a[new])
                {
                    return false;
                }
            }
        }
        // subgroup-image constraints for classes whose generated subgroup or
        // radical is now fully assigned
        for i in 0..r {
            if a[i] == usize::MAX {
                continue;
            }
            let src = &self.src_sets[i];
            let tgt = &self.tgt_sets[a[i]];
            if !Self::set_constraint_holds(&src.gen, &tgt.gen, a) {
                return false;
            }
            if !Self::set_constraint_holds(&src.rad, &tgt.rad, a) {
                return false;
            }
        }
        true
    }

    /// If every class of `src_set` is assigned, its image must equal
    /// `tgt_set`. Partial assignments only need the assigned part to land
    /// inside `tgt_set`.
    fn set_constraint_holds(src_set: &[usize], tgt_set: &[usize], a: &[usize]) -> bool {
        let mut assigned = 0;
        for &c in src_set {
            if a[c] == usize::MAX {
                continue;
            }
            assigned += 1;
            if tgt_set.binary_search(&a[c]).is_err() {
                return false;
            }
        }
        assigned < src_set.len() || src_set.len() == tgt_set.len()
    }
}
