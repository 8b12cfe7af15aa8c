//! The S-ring data structure.
//!
//! An S-ring over `G` is stored as its defining partition: a list of basic
//! sets with `{e}` first and the rest ordered by (size, elements), so equal
//! rings have equal class indices. The structure-constant tensor is computed
//! on first use and cached.

use crate::abelian::{AbelianGroup, Elem, Section, Subgroup};
use crate::error::{Error, Result};
use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

/// An S-ring over a finite abelian group.
#[derive(Debug)]
pub struct SRing {
    group: AbelianGroup,
    basic_sets: Vec<Vec<Elem>>,
    class_of: Vec<usize>,
    inverse_class: Vec<usize>,
    tensor: OnceLock<StructureTensor>,
}

impl Clone for SRing {
    fn clone(&self) -> Self {
        SRing {
            group: self.group.clone(),
            basic_sets: self.basic_sets.clone(),
            class_of: self.class_of.clone(),
            inverse_class: self.inverse_class.clone(),
            tensor: match self.tensor.get() {
                Some(t) => OnceLock::from(t.clone()),
                None => OnceLock::new(),
            },
        }
    }
}

impl PartialEq for SRing {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.basic_sets == other.basic_sets
    }
}

impl Eq for SRing {}

/// Dense structure-constant tensor `c^Z_{X,Y}`, rank cubed entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureTensor {
    rank: usize,
    entries: Vec<u32>,
}

impl StructureTensor {
    pub fn get(&self, x: usize, y: usize, z: usize) -> u32 {
        self.entries[(x * self.rank + y) * self.rank + z]
    }

    pub fn rank(&self) -> usize {
        self.rank
    }
}

impl SRing {
    /// Checks the three S-ring axioms on a partition and returns the ring.
    ///
    /// The reported errors carry witnesses: the class that is not
    /// inverse-closed, or the pair of classes and pair of elements on which
    /// the representation counts disagree.
    pub fn validate(group: AbelianGroup, partition: Vec<Vec<Elem>>) -> Result<SRing> {
        let n = group.order();
        let mut classes: Vec<Vec<Elem>> = partition;
        for class in &mut classes {
            class.sort_unstable();
            class.dedup();
            if class.is_empty() {
                return Err(Error::NotAPartition("empty class".into()));
            }
            if *class.last().unwrap() >= n {
                return Err(Error::ElementOutOfRange(*class.last().unwrap(), n));
            }
        }
        // canonical order: identity class first, then by (size, elements)
        classes.sort_by(|a, b| {
            let a_e = a[0] == 0 && a.len() == 1;
            let b_e = b[0] == 0 && b.len() == 1;
            b_e.cmp(&a_e).then_with(|| (a.len(), a).cmp(&(b.len(), b)))
        });
        let mut class_of = vec![usize::MAX; n];
        for (i, class) in classes.iter().enumerate() {
            for &x in class {
                if class_of[x] != usize::MAX {
                    return Err(Error::NotAPartition(format!(
                        "element {} appears twice",
                        group.element_literal(x)
                    )));
                }
                class_of[x] = i;
            }
        }
        if class_of.iter().any(|&c| c == usize::MAX) {
            return Err(Error::NotAPartition("not all elements covered".into()));
        }
        if classes[0] != [0] {
            return Err(Error::IdentityNotSingleton);
        }
        // inverse closure
        let mut inverse_class = vec![usize::MAX; classes.len()];
        for (i, class) in classes.iter().enumerate() {
            let mut inv: Vec<Elem> = class.iter().map(|&x| group.neg(x)).collect();
            inv.sort_unstable();
            let j = class_of[inv[0]];
            if classes[j] != inv {
                return Err(Error::NotInverseClosed { class: i });
            }
            inverse_class[i] = j;
        }
        let ring = SRing {
            group,
            basic_sets: classes,
            class_of,
            inverse_class,
            tensor: OnceLock::new(),
        };
        ring.check_module_closure()?;
        Ok(ring)
    }

    /// Axiom 3: for every pair of classes the representation count is
    /// constant on each class. Fails fast with a witness.
    fn check_module_closure(&self) -> Result<()> {
        let n = self.group.order();
        let mut counts = vec![0u32; n];
        for (xi, x) in self.basic_sets.iter().enumerate() {
            for (yi, y) in self.basic_sets.iter().enumerate() {
                counts.iter_mut().for_each(|c| *c = 0);
                for &a in x {
                    for &b in y {
                        counts[self.group.add(a, b)] += 1;
                    }
                }
                for class in &self.basic_sets {
                    let c0 = counts[class[0]];
                    for &z in &class[1..] {
                        if counts[z] != c0 {
                            return Err(Error::NotModuleClosed {
                                x: xi,
                                y: yi,
                                z: class[0],
                                z_other: z,
                                count: c0,
                                count_other: counts[z],
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.basic_sets.len()
    }

    pub fn basic_sets(&self) -> &[Vec<Elem>] {
        &self.basic_sets
    }

    pub fn class(&self, i: usize) -> &[Elem] {
        &self.basic_sets[i]
    }

    /// Index of the class containing `x`.
    pub fn class_of(&self, x: Elem) -> usize {
        self.class_of[x]
    }

    /// Index of the class `{e}` (always 0 in canonical order).
    pub fn identity_index(&self) -> usize {
        0
    }

    /// Index of `X^{-1}` for class `X`.
    pub fn inverse_class(&self, i: usize) -> usize {
        self.inverse_class[i]
    }

    /// The structure constant `c^Z_{X,Y}`: the number of representations of
    /// any fixed `z` in `Z` as `z = x + y` with `x` in `X`, `y` in `Y`.
    pub fn structure_constant(&self, x: usize, y: usize, z: usize) -> u32 {
        if let Some(t) = self.tensor.get() {
            return t.get(x, y, z);
        }
        let z0 = self.basic_sets[z][0];
        let mut c = 0;
        for &a in &self.basic_sets[x] {
            if self.class_of[self.group.sub(z0, a)] == y {
                c += 1;
            }
        }
        c
    }

    /// The full tensor, computed once and cached.
    pub fn tensor(&self) -> &StructureTensor {
        self.tensor.get_or_init(|| {
            let r = self.rank();
            let n = self.group.order();
            let mut entries = vec![0u32; r * r * r];
            let mut counts = vec![0u32; n];
            for x in 0..r {
                for y in 0..r {
                    counts.iter_mut().for_each(|c| *c = 0);
                    for &a in &self.basic_sets[x] {
                        for &b in &self.basic_sets[y] {
                            counts[self.group.add(a, b)] += 1;
                        }
                    }
                    for (z, class) in self.basic_sets.iter().enumerate() {
                        entries[(x * r + y) * r + z] = counts[class[0]];
                    }
                }
            }
            StructureTensor { rank: r, entries }
        })
    }

    /// True iff `s` is a union of basic sets. `s` must be sorted.
    pub fn is_a_set(&self, s: &[Elem]) -> bool {
        debug_assert!(s.windows(2).all(|w| w[0] < w[1]));
        let mut covered = vec![false; self.rank()];
        for &x in s {
            covered[self.class_of[x]] = true;
        }
        let total: usize = covered
            .iter()
            .zip(&self.basic_sets)
            .filter(|(&c, _)| c)
            .map(|(_, class)| class.len())
            .sum();
        total == s.len()
    }

    /// All subgroups that are A-sets, sorted by (order, elements).
    pub fn a_subgroups(&self) -> Result<Vec<Subgroup>> {
        Ok(self
            .group
            .all_subgroups()?
            .into_iter()
            .filter(|h| self.is_a_set(h.elements()))
            .collect())
    }

    /// The radical `rad(S) = {g : S + g = S}` of a non-empty set.
    pub fn radical_of_set(group: &AbelianGroup, s: &[Elem]) -> Result<Subgroup> {
        if s.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut member = vec![false; group.order()];
        for &x in s {
            member[x] = true;
        }
        let stab: Vec<Elem> = group
            .elements()
            .filter(|&g| s.iter().all(|&x| member[group.add(x, g)]))
            .collect();
        Ok(group.subgroup_generated(&stab))
    }

    /// `rad(X)` for the class with index `i`.
    pub fn class_radical(&self, i: usize) -> Subgroup {
        Self::radical_of_set(&self.group, &self.basic_sets[i]).expect("classes are non-empty")
    }

    /// Basic sets containing an element of maximal order `p^k`. Defined for
    /// p-groups of shape `C_{p^k}` or `C_p x C_{p^k}`.
    pub fn highest_basic_sets(&self) -> Result<Vec<usize>> {
        let (p, k, _) = self
            .group
            .p_group_shape()
            .ok_or_else(|| Error::UnsupportedShape(self.group.literal()))?;
        let top = (p as usize).pow(k);
        Ok((0..self.rank())
            .filter(|&i| {
                self.basic_sets[i]
                    .iter()
                    .any(|&x| self.group.element_order(x) == top)
            })
            .collect())
    }

    /// The radical of the S-ring: the subgroup generated by the radicals of
    /// all highest basic sets. Over a cyclic p-group this coincides with the
    /// radical of any basic set containing a generator.
    pub fn sring_radical(&self) -> Result<Subgroup> {
        let highest = self.highest_basic_sets()?;
        let mut seed: Vec<Elem> = Vec::new();
        for i in highest {
            seed.extend_from_slice(self.class_radical(i).elements());
        }
        Ok(self.group.subgroup_generated(&seed))
    }

    /// The permutation of class indices induced by `x -> m*x` for `m`
    /// coprime to the group order. Every image is again a basic set.
    pub fn rational_conjugate(&self, m: i64) -> Result<Vec<usize>> {
        let n = self.group.order() as i64;
        if gcd_i64(m.rem_euclid(n), n) != 1 {
            return Err(Error::NotCoprime {
                m,
                order: self.group.order(),
            });
        }
        let mut perm = vec![usize::MAX; self.rank()];
        for (i, class) in self.basic_sets.iter().enumerate() {
            let mut image: Vec<Elem> = class.iter().map(|&x| self.group.mul(x, m)).collect();
            image.sort_unstable();
            let j = self.class_of[image[0]];
            if self.basic_sets[j] != image {
                return Err(Error::Internal(
                    "rational conjugate of a basic set is not a basic set",
                ));
            }
            perm[i] = j;
        }
        Ok(perm)
    }

    /// The set `X^{[p]} = {p*x : x in X, |X ∩ (H + x)| ≢ 0 mod p}` for the
    /// class `X` with index `i`, where `H` is the p-torsion subgroup.
    /// The result is always an A-set.
    pub fn power_set_p(&self, i: usize, p: usize) -> Result<Vec<Elem>> {
        if p == 0 || self.group.order() % p != 0 {
            return Err(Error::NotADivisor {
                p,
                order: self.group.order(),
            });
        }
        let h: Vec<Elem> = self
            .group
            .elements()
            .filter(|&g| self.group.mul(g, p as i64) == 0)
            .collect();
        let class = &self.basic_sets[i];
        let mut member = vec![false; self.group.order()];
        for &x in class {
            member[x] = true;
        }
        let mut out: BTreeSet<Elem> = BTreeSet::new();
        for &x in class {
            let coset_count = h.iter().filter(|&&g| member[self.group.add(g, x)]).count();
            if coset_count % p != 0 {
                out.insert(self.group.mul(x, p as i64));
            }
        }
        let out: Vec<Elem> = out.into_iter().collect();
        debug_assert!(out.is_empty() || self.is_a_set(&out));
        Ok(out)
    }

    /// The quotient S-ring over an A-section `U/L`: classes are the images
    /// of the basic sets inside `U`, merged when they coincide.
    pub fn quotient_sring(&self, section: &Section) -> Result<SRing> {
        if !self.is_a_set(section.upper().elements()) || !self.is_a_set(section.lower().elements())
        {
            return Err(Error::NotASection);
        }
        let mut images: Vec<Vec<Elem>> = Vec::new();
        let mut seen: std::collections::HashSet<Vec<Elem>> = std::collections::HashSet::new();
        for class in &self.basic_sets {
            if !section.contains(class[0]) {
                continue;
            }
            let mut img: Vec<Elem> = class.iter().map(|&x| section.project(x)).collect();
            img.sort_unstable();
            img.dedup();
            if seen.insert(img.clone()) {
                images.push(img);
            }
        }
        SRing::validate(section.quotient_group().clone(), images)
    }

    /// True iff every basic set satisfies `X = X^{-1}`.
    pub fn is_symmetric(&self) -> bool {
        (0..self.rank()).all(|i| self.inverse_class[i] == i)
    }

    /// True iff every basic set has at most two elements.
    pub fn is_quasi_thin(&self) -> bool {
        self.basic_sets.iter().all(|c| c.len() <= 2)
    }

    /// Searches for an A-subgroup `H ≅ C_2 x C_2` with `A_H = ZH` and
    /// `A_{G/H} = Z(G/H)`; quasi-thin rings with such a subgroup are the
    /// ones the separability criterion for quasi-thin rings excludes.
    pub fn klein_obstruction(&self) -> Result<Option<Subgroup>> {
        let whole = self.group.subgroup_generated(
            &self.group.elements().collect::<Vec<_>>(),
        );
        for h in self.a_subgroups()? {
            if h.len() != 4 || h.elements().iter().any(|&x| self.group.element_order(x) > 2) {
                continue;
            }
            // A_H = ZH: every class inside H is a singleton
            let zh = h
                .elements()
                .iter()
                .all(|&x| self.basic_sets[self.class_of[x]].len() == 1);
            if !zh {
                continue;
            }
            let section = self.group.quotient(&whole, &h)?;
            let quot = self.quotient_sring(&section)?;
            if quot.rank() == quot.group().order() {
                return Ok(Some(h));
            }
        }
        Ok(None)
    }

    /// The set `N(A)` of basic-set cardinalities.
    pub fn valency_profile(&self) -> BTreeSet<usize> {
        self.basic_sets.iter().map(|c| c.len()).collect()
    }

    /// The corresponding Cayley scheme on `G x G`.
    pub fn scheme(&self) -> CayleyScheme<'_> {
        CayleyScheme { ring: self }
    }

    /// Canonical byte key (class index per element); equal keys mean equal
    /// rings over the same group.
    pub fn canonical_key(&self) -> Vec<u16> {
        self.class_of.iter().map(|&c| c as u16).collect()
    }

    /// Text dump: a header line, then one line per basic set listing element
    /// literals, optionally followed by the full tensor as `c X Y Z = n`
    /// lines.
    pub fn dump(&self, with_tensor: bool) -> String {
        let mut out = format!("sring {} rank={}\n", self.group.literal(), self.rank());
        for class in &self.basic_sets {
            let line = class
                .iter()
                .map(|&x| self.group.element_literal(x))
                .collect::<Vec<_>>()
                .join(" ");
            out.push_str(&line);
            out.push('\n');
        }
        if with_tensor {
            let t = self.tensor();
            for x in 0..self.rank() {
                for y in 0..self.rank() {
                    for z in 0..self.rank() {
                        let c = t.get(x, y, z);
                        if c != 0 {
                            out.push_str(&format!("c {x} {y} {z} = {c}\n"));
                        }
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for SRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump(false))
    }
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd_i64(b, a % b)
    }
}

/// The Cayley scheme view of an S-ring: the pair `(u, w)` carries the color
/// of the class of `w - u`, so the basic relation of class `X` is
/// `R(X) = {(g, x + g)}`.
pub struct CayleyScheme<'a> {
    ring: &'a SRing,
}

impl<'a> CayleyScheme<'a> {
    pub fn rank(&self) -> usize {
        self.ring.rank()
    }

    /// Color of the ordered pair `(u, w)`.
    pub fn pair_color(&self, u: Elem, w: Elem) -> usize {
        self.ring.class_of(self.ring.group().sub(w, u))
    }

    /// The valency `n(R(X)) = |X|`.
    pub fn valency(&self, x: usize) -> usize {
        self.ring.class(x).len()
    }

    /// Intersection number computed combinatorially on the relations: fixes
    /// a pair `(g, f)` in relation `t` and counts `h` with `(g, h)` in `r`
    /// and `(h, f)` in `s`.
    pub fn intersection_number(&self, r: usize, s: usize, t: usize) -> u32 {
        let g = 0;
        let f = self.ring.class(t)[0];
        let group = self.ring.group();
        let mut count = 0;
        for h in group.elements() {
            if self.pair_color(g, h) == r && self.pair_color(h, f) == s {
                count += 1;
            }
        }
        count
    }
}
