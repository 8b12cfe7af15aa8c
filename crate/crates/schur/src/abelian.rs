//! Finite abelian groups given as direct products of cyclic factors.
//!
//! A group is a factor list `[d_1, ..., d_r]`; its elements are the residue
//! tuples `(x_1, ..., x_r)` with `0 <= x_i < d_i`, stored by their
//! lexicographic index. The identity is index `0`. All operations are pure
//! and every enumeration is in a fixed deterministic order, so repeated runs
//! produce identical output.

use crate::error::{Error, Result};
use std::collections::HashSet;
use std::fmt;

/// Index of a group element in the lexicographic enumeration of residue
/// tuples.
pub type Elem = usize;

/// A finite abelian group `C_{d_1} x ... x C_{d_r}`.
///
/// Two groups are equal when their factor lists are equal; use
/// [`AbelianGroup::is_isomorphic`] for isomorphism. The trivial group (order
/// one, empty factor list) can arise as a quotient but cannot be written as
/// a literal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    factors: Vec<u64>,
    strides: Vec<usize>,
    order: usize,
}

impl fmt::Debug for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.literal())
    }
}

impl AbelianGroup {
    /// Builds the group from its cyclic factor orders.
    pub fn new(factors: &[u64]) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::EmptyFactorList);
        }
        for &d in factors {
            if d < 2 {
                return Err(Error::InvalidFactor(d));
            }
        }
        Ok(Self::build(factors.to_vec()))
    }

    /// The group of order one. Not constructible through [`AbelianGroup::new`];
    /// quotients `U/U` produce it.
    pub fn trivial() -> Self {
        Self::build(Vec::new())
    }

    fn build(factors: Vec<u64>) -> Self {
        let mut strides = vec![1usize; factors.len()];
        for i in (0..factors.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * factors[i + 1] as usize;
        }
        let order = factors.iter().product::<u64>() as usize;
        AbelianGroup {
            factors,
            strides,
            order: order.max(1),
        }
    }

    /// Parses a literal like `C2xC8` (case-insensitive).
    pub fn parse(s: &str) -> Result<Self> {
        let mut factors = Vec::new();
        for part in s.split(['x', 'X']) {
            let part = part.trim();
            let digits = part
                .strip_prefix(['c', 'C'])
                .ok_or_else(|| Error::Parse(format!("expected `C<n>`, got `{part}`")))?;
            let d: u64 = digits
                .parse()
                .map_err(|_| Error::Parse(format!("bad factor `{part}`")))?;
            factors.push(d);
        }
        Self::new(&factors)
    }

    /// Canonical literal, e.g. `C2xC8`.
    pub fn literal(&self) -> String {
        if self.factors.is_empty() {
            return "C1".into();
        }
        self.factors
            .iter()
            .map(|d| format!("C{d}"))
            .collect::<Vec<_>>()
            .join("x")
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    /// Identity element (the all-zeros tuple).
    pub fn identity(&self) -> Elem {
        0
    }

    /// All elements in lexicographic order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        0..self.order
    }

    /// Decodes an index into its residue tuple.
    pub fn coords(&self, x: Elem) -> Vec<u64> {
        debug_assert!(x < self.order);
        self.factors
            .iter()
            .zip(&self.strides)
            .map(|(&d, &s)| (x / s) as u64 % d)
            .collect()
    }

    /// Encodes a residue tuple into its index. Coordinates are reduced
    /// modulo the factor orders.
    pub fn from_coords(&self, coords: &[u64]) -> Elem {
        debug_assert_eq!(coords.len(), self.factors.len());
        coords
            .iter()
            .zip(self.factors.iter().zip(&self.strides))
            .map(|(&c, (&d, &s))| (c % d) as usize * s)
            .sum()
    }

    pub fn add(&self, x: Elem, y: Elem) -> Elem {
        let mut out = 0;
        for (&d, &s) in self.factors.iter().zip(&self.strides) {
            let a = (x / s) as u64 % d;
            let b = (y / s) as u64 % d;
            out += ((a + b) % d) as usize * s;
        }
        out
    }

    pub fn neg(&self, x: Elem) -> Elem {
        let mut out = 0;
        for (&d, &s) in self.factors.iter().zip(&self.strides) {
            let a = (x / s) as u64 % d;
            out += ((d - a) % d) as usize * s;
        }
        out
    }

    pub fn sub(&self, x: Elem, y: Elem) -> Elem {
        self.add(x, self.neg(y))
    }

    /// `n`-fold sum of `x`; `n` may be any integer.
    pub fn mul(&self, x: Elem, n: i64) -> Elem {
        let mut out = 0;
        for (&d, &s) in self.factors.iter().zip(&self.strides) {
            let a = (x / s) as u64 % d;
            let m = n.rem_euclid(d as i64) as u64;
            out += ((a * m) % d) as usize * s;
        }
        out
    }

    /// Least `n >= 1` with `n*x = 0`.
    pub fn element_order(&self, x: Elem) -> usize {
        let mut ord: u64 = 1;
        for (&d, &s) in self.factors.iter().zip(&self.strides) {
            let a = (x / s) as u64 % d;
            let o = d / gcd(a, d);
            ord = lcm(ord, o);
        }
        ord as usize
    }

    /// Least common multiple of the factor orders.
    pub fn exponent(&self) -> usize {
        self.factors.iter().fold(1u64, |e, &d| lcm(e, d)) as usize
    }

    /// Parses an element literal like `(1,3)`.
    pub fn parse_element(&self, s: &str) -> Result<Elem> {
        let s = s.trim();
        let inner = s
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("expected `(x1,...,xr)`, got `{s}`")))?;
        let coords: Vec<u64> = inner
            .split(',')
            .map(|c| {
                c.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::Parse(format!("bad coordinate `{c}` in `{s}`")))
            })
            .collect::<Result<_>>()?;
        if coords.len() != self.factors.len() {
            return Err(Error::Parse(format!(
                "element `{s}` has {} coordinates, group {} needs {}",
                coords.len(),
                self.literal(),
                self.factors.len()
            )));
        }
        for (&c, &d) in coords.iter().zip(&self.factors) {
            if c >= d {
                return Err(Error::Parse(format!(
                    "coordinate {c} out of range (< {d}) in `{s}`"
                )));
            }
        }
        Ok(self.from_coords(&coords))
    }

    /// Formats an element as `(x1,...,xr)`.
    pub fn element_literal(&self, x: Elem) -> String {
        let coords = self.coords(x);
        let body = coords
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",");
        format!("({body})")
    }

    /// Multiset of prime-power orders of the primary cyclic decomposition,
    /// sorted ascending. Two groups are isomorphic iff these agree.
    pub fn primary_invariants(&self) -> Vec<u64> {
        let mut inv = Vec::new();
        for &d in &self.factors {
            let mut d = d;
            let mut p = 2;
            while p * p <= d {
                if d % p == 0 {
                    let mut q = 1;
                    while d % p == 0 {
                        d /= p;
                        q *= p;
                    }
                    inv.push(q);
                }
                p += 1;
            }
            if d > 1 {
                inv.push(d);
            }
        }
        inv.sort_unstable();
        inv
    }

    pub fn is_isomorphic(&self, other: &AbelianGroup) -> bool {
        self.primary_invariants() == other.primary_invariants()
    }

    /// If the group is a p-group of shape `C_{p^k}` or `C_p x C_{p^k}` with
    /// `p` prime, returns `(p, k, noncyclic)`.
    pub fn p_group_shape(&self) -> Option<(u64, u32, bool)> {
        let inv = self.primary_invariants();
        match inv.as_slice() {
            [q] => {
                let (p, k) = prime_power(*q)?;
                Some((p, k, false))
            }
            [q1, q2] => {
                let (p1, k1) = prime_power(*q1)?;
                let (p2, k2) = prime_power(*q2)?;
                if p1 == p2 && k1.min(k2) == 1 {
                    Some((p1, k1.max(k2), true))
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    /// Smallest subgroup containing `seed`; the empty seed yields `{e}`.
    pub fn subgroup_generated(&self, seed: &[Elem]) -> Subgroup {
        let mut member = vec![false; self.order];
        member[0] = true;
        let mut elems = vec![0];
        let mut frontier = vec![0];
        while let Some(x) = frontier.pop() {
            for &g in seed {
                let y = self.add(x, g);
                if !member[y] {
                    member[y] = true;
                    elems.push(y);
                    frontier.push(y);
                }
            }
        }
        elems.sort_unstable();
        let generators = self.reduce_generators(seed, &member);
        Subgroup {
            elements: elems,
            generators,
        }
    }

    fn reduce_generators(&self, seed: &[Elem], member: &[bool]) -> Vec<Elem> {
        // Greedy irredundant generating list, largest element order first.
        let mut cands: Vec<Elem> = seed.iter().copied().filter(|&g| g != 0).collect();
        cands.sort_by_key(|&g| (std::cmp::Reverse(self.element_order(g)), g));
        cands.dedup();
        let mut gens: Vec<Elem> = Vec::new();
        let mut have = vec![false; self.order];
        have[0] = true;
        let mut count = 1usize;
        let total = member.iter().filter(|&&m| m).count();
        for g in cands {
            if count == total {
                break;
            }
            if have[g] {
                continue;
            }
            gens.push(g);
            // close under the new generator
            let current: Vec<Elem> = (0..self.order).filter(|&x| have[x]).collect();
            for x in current {
                let mut y = x;
                loop {
                    y = self.add(y, g);
                    if have[y] {
                        break;
                    }
                    have[y] = true;
                    count += 1;
                }
            }
        }
        gens.sort_unstable();
        gens
    }

    /// All subgroups, sorted by (order, element list). Bounded because the
    /// scan is exhaustive.
    pub fn all_subgroups(&self) -> Result<Vec<Subgroup>> {
        const BOUND: usize = 256;
        if self.order > BOUND {
            return Err(Error::SizeLimit {
                what: "subgroup enumeration",
                order: self.order,
                bound: BOUND,
            });
        }
        let mut seen: HashSet<Vec<Elem>> = HashSet::new();
        let trivial = self.subgroup_generated(&[]);
        let mut queue = vec![trivial.clone()];
        seen.insert(trivial.elements.clone());
        let mut out = vec![trivial];
        while let Some(h) = queue.pop() {
            for g in self.elements() {
                if h.contains(g) {
                    continue;
                }
                let mut seed = h.generators.clone();
                seed.push(g);
                let bigger = self.subgroup_generated(&seed);
                if seen.insert(bigger.elements.clone()) {
                    queue.push(bigger.clone());
                    out.push(bigger);
                }
            }
        }
        out.sort_by(|a, b| {
            (a.elements.len(), &a.elements).cmp(&(b.elements.len(), &b.elements))
        });
        Ok(out)
    }

    /// The section `U/L` with an explicit projection onto a quotient group in
    /// canonical (primary, ascending) factor form.
    pub fn quotient(&self, u: &Subgroup, l: &Subgroup) -> Result<Section> {
        if !l.elements.iter().all(|&x| u.contains(x)) {
            return Err(Error::NotContained);
        }
        // Cosets of L in U, represented by their least element, in order.
        let mut coset_of = vec![usize::MAX; self.order];
        let mut reps: Vec<Elem> = Vec::new();
        for &x in &u.elements {
            if coset_of[x] != usize::MAX {
                continue;
            }
            let id = reps.len();
            reps.push(x);
            for &h in &l.elements {
                coset_of[self.add(x, h)] = id;
            }
        }
        let m = reps.len();
        debug_assert_eq!(m * l.elements.len(), u.elements.len());
        let add = |a: usize, b: usize| coset_of[self.add(reps[a], reps[b])];
        let (factors, basis) = decompose_abstract(m, &add);
        let quotient = if factors.is_empty() {
            AbelianGroup::trivial()
        } else {
            AbelianGroup::build(factors)
        };
        // Assign tuple coordinates: walk all tuples, map the corresponding
        // coset to the tuple's index.
        let mut coset_to_quot = vec![usize::MAX; m];
        for q in quotient.elements() {
            let coords = quotient.coords(q);
            let mut c = 0usize; // identity coset
            for (&g, &e) in basis.iter().zip(&coords) {
                for _ in 0..e {
                    c = add(c, g);
                }
            }
            debug_assert_eq!(coset_to_quot[c], usize::MAX);
            coset_to_quot[c] = q;
        }
        let mut proj = vec![usize::MAX; self.order];
        for &x in &u.elements {
            proj[x] = coset_to_quot[coset_of[x]];
        }
        Ok(Section {
            u: u.clone(),
            l: l.clone(),
            quotient,
            proj,
        })
    }

    /// Every homomorphism into `target`, exactly once, in a fixed order.
    /// With `iso_only` set, only the bijective ones (empty if the orders
    /// differ or no isomorphism exists).
    pub fn enumerate_homs<'a>(
        &'a self,
        target: &'a AbelianGroup,
        iso_only: bool,
    ) -> impl Iterator<Item = GroupHom> + 'a {
        // Hom(C_{d_1} x ... x C_{d_r}, H) factors coordinatewise: the image of
        // the i-th unit vector can be any element killed by d_i.
        let candidates: Vec<Vec<Elem>> = self
            .factors
            .iter()
            .map(|&d| {
                target
                    .elements()
                    .filter(|&y| target.mul(y, d as i64) == 0)
                    .collect()
            })
            .collect();
        let size_ok = !iso_only || self.order == target.order();
        let mut odometer = vec![0usize; self.factors.len()];
        let mut done = !size_ok || candidates.iter().any(|c| c.is_empty());
        std::iter::from_fn(move || loop {
            if done {
                return None;
            }
            let images: Vec<Elem> = odometer
                .iter()
                .zip(&candidates)
                .map(|(&i, c)| c[i])
                .collect();
            // advance odometer
            let mut i = odometer.len();
            loop {
                if i == 0 {
                    done = true;
                    break;
                }
                i -= 1;
                odometer[i] += 1;
                if odometer[i] < candidates[i].len() {
                    break;
                }
                odometer[i] = 0;
            }
            let hom = GroupHom::from_images(self.clone(), target.clone(), images);
            if !iso_only || hom.is_bijective() {
                return Some(hom);
            }
        })
    }

    /// All automorphisms, in the `enumerate_homs` order.
    pub fn automorphisms(&self) -> Vec<GroupHom> {
        self.enumerate_homs(self, true).collect()
    }
}

fn prime_power(q: u64) -> Option<(u64, u32)> {
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            let mut k = 0;
            let mut q = q;
            while q % p == 0 {
                q /= p;
                k += 1;
            }
            return (q == 1).then_some((p, k));
        }
        p += 1;
    }
    Some((q, 1))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Decomposes an abstract abelian group given by an operation on indices
/// `0..m` (0 is the identity) into cyclic factors of prime-power order.
/// Returns the factor orders (ascending by prime then exponent) with one
/// generator per factor; the group is the internal direct sum of the cyclic
/// groups the generators span.
fn decompose_abstract(m: usize, add: &dyn Fn(usize, usize) -> usize) -> (Vec<u64>, Vec<usize>) {
    if m == 1 {
        return (Vec::new(), Vec::new());
    }
    let order_of = |x: usize| -> usize {
        let mut n = 1;
        let mut y = x;
        while y != 0 {
            y = add(y, x);
            n += 1;
        }
        n
    };
    let mut primes: Vec<usize> = Vec::new();
    let mut n = m;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            primes.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        primes.push(n);
    }
    let mut factors: Vec<u64> = Vec::new();
    let mut basis: Vec<usize> = Vec::new();
    for p in primes {
        // p-primary component: elements of p-power order.
        let comp: Vec<usize> = (0..m)
            .filter(|&x| {
                let mut o = order_of(x);
                while o % p == 0 {
                    o /= p;
                }
                o == 1
            })
            .collect();
        let mut fs = Vec::new();
        let mut bs = Vec::new();
        primary_basis(&comp, add, &order_of, &mut fs, &mut bs);
        factors.extend(fs);
        basis.extend(bs);
    }
    // Sort factors ascending, keeping generators aligned.
    let mut idx: Vec<usize> = (0..factors.len()).collect();
    idx.sort_by_key(|&i| factors[i]);
    (
        idx.iter().map(|&i| factors[i]).collect(),
        idx.iter().map(|&i| basis[i]).collect(),
    )
}

/// Basis of an abelian p-group listed as `comp` (with the ambient `add`):
/// repeatedly split off a cyclic factor of maximal order.
fn primary_basis(
    comp: &[usize],
    add: &dyn Fn(usize, usize) -> usize,
    order_of: &dyn Fn(usize) -> usize,
    factors: &mut Vec<u64>,
    basis: &mut Vec<usize>,
) {
    if comp.len() == 1 {
        return;
    }
    // Generator of maximal order, least element tie-break.
    let g = *comp
        .iter()
        .max_by_key(|&&x| (order_of(x), std::cmp::Reverse(x)))
        .unwrap();
    let og = order_of(g);
    factors.push(og as u64);
    basis.push(g);
    // Quotient by <g>: cosets inside comp.
    let gpow: Vec<usize> = {
        let mut v = vec![0usize];
        let mut y = g;
        while y != 0 {
            v.push(y);
            y = add(y, g);
        }
        v
    };
    let mut coset_of: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
    let mut reps: Vec<usize> = Vec::new();
    for &x in comp {
        if coset_of.contains_key(&x) {
            continue;
        }
        let id = reps.len();
        reps.push(x);
        for &h in &gpow {
            coset_of.insert(add(x, h), id);
        }
    }
    let qm = reps.len();
    if qm == 1 {
        return;
    }
    let qadd = |a: usize, b: usize| coset_of[&add(reps[a], reps[b])];
    let qord = |a: usize| -> usize {
        let mut n = 1;
        let mut y = a;
        while y != 0 {
            y = qadd(y, a);
            n += 1;
        }
        n
    };
    let qcomp: Vec<usize> = (0..qm).collect();
    let mut qfactors = Vec::new();
    let mut qbasis = Vec::new();
    primary_basis(&qcomp, &qadd, &qord, &mut qfactors, &mut qbasis);
    // Lift each quotient generator h-bar to an element of the same order:
    // h^q = g^s with q | s, so h * g^{-s/q} works.
    for (&q, &hbar) in qfactors.iter().zip(&qbasis) {
        let h = reps[hbar];
        let q = q as usize;
        let mut hq = 0usize;
        for _ in 0..q {
            hq = add(hq, h);
        }
        let s = gpow.iter().position(|&y| y == hq).expect("h^q lies in <g>");
        debug_assert_eq!(s % q, 0);
        let t = (og - s / q) % og;
        let mut lifted = h;
        for _ in 0..t {
            lifted = add(lifted, g);
        }
        factors.push(q as u64);
        basis.push(lifted);
    }
}

/// A subgroup, stored as its sorted element list plus a small generating
/// list.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Subgroup {
    elements: Vec<Elem>,
    generators: Vec<Elem>,
}

impl Subgroup {
    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }
}

/// A section `U/L` together with its quotient group and projection table.
#[derive(Clone, Debug)]
pub struct Section {
    u: Subgroup,
    l: Subgroup,
    quotient: AbelianGroup,
    /// `proj[x]` is the quotient element of `x` for `x` in `U`, `usize::MAX`
    /// outside `U`.
    proj: Vec<usize>,
}

impl Section {
    pub fn upper(&self) -> &Subgroup {
        &self.u
    }

    pub fn lower(&self) -> &Subgroup {
        &self.l
    }

    pub fn quotient_group(&self) -> &AbelianGroup {
        &self.quotient
    }

    /// Projection of a `U`-element.
    pub fn project(&self, x: Elem) -> Elem {
        debug_assert_ne!(self.proj[x], usize::MAX, "element outside U");
        self.proj[x]
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.proj[x] != usize::MAX
    }

    /// All `U`-elements mapping onto a given quotient element.
    pub fn fiber(&self, q: Elem) -> Vec<Elem> {
        (0..self.proj.len()).filter(|&x| self.proj[x] == q).collect()
    }
}

/// A homomorphism between abelian groups, stored as the images of the unit
/// vectors. Evaluation goes through a full table built on construction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupHom {
    source: AbelianGroup,
    target: AbelianGroup,
    images: Vec<Elem>,
    table: Vec<Elem>,
}

impl GroupHom {
    /// Builds the homomorphism with the given unit-vector images. The
    /// images must be killed by the corresponding factor orders.
    pub fn new(source: AbelianGroup, target: AbelianGroup, images: Vec<Elem>) -> Result<Self> {
        if images.len() != source.rank() {
            return Err(Error::Precondition("one image per canonical generator"));
        }
        for (&img, &d) in images.iter().zip(source.factors()) {
            if target.mul(img, d as i64) != 0 {
                return Err(Error::Precondition(
                    "generator image order must divide the factor order",
                ));
            }
        }
        Ok(Self::from_images(source, target, images))
    }

    fn from_images(source: AbelianGroup, target: AbelianGroup, images: Vec<Elem>) -> Self {
        let table = source
            .elements()
            .map(|x| {
                let coords = source.coords(x);
                let mut y = 0;
                for (&c, &img) in coords.iter().zip(&images) {
                    y = target.add(y, target.mul(img, c as i64));
                }
                y
            })
            .collect();
        GroupHom {
            source,
            target,
            images,
            table,
        }
    }

    /// The identity automorphism.
    pub fn identity(group: &AbelianGroup) -> Self {
        let images = (0..group.rank())
            .map(|i| {
                let mut coords = vec![0u64; group.rank()];
                coords[i] = 1;
                group.from_coords(&coords)
            })
            .collect();
        Self::from_images(group.clone(), group.clone(), images)
    }

    pub fn source(&self) -> &AbelianGroup {
        &self.source
    }

    pub fn target(&self) -> &AbelianGroup {
        &self.target
    }

    pub fn images(&self) -> &[Elem] {
        &self.images
    }

    pub fn apply(&self, x: Elem) -> Elem {
        self.table[x]
    }

    pub fn table(&self) -> &[Elem] {
        &self.table
    }

    pub fn is_bijective(&self) -> bool {
        if self.source.order() != self.target.order() {
            return false;
        }
        let mut seen = vec![false; self.target.order()];
        self.table.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    /// `self` then `next` (i.e. `x -> next(self(x))`).
    pub fn compose(&self, next: &GroupHom) -> GroupHom {
        debug_assert_eq!(self.target, next.source);
        let images = self.images.iter().map(|&y| next.apply(y)).collect();
        GroupHom::from_images(self.source.clone(), next.target.clone(), images)
    }

    /// Inverse of a bijective homomorphism.
    pub fn inverse(&self) -> Result<GroupHom> {
        if !self.is_bijective() {
            return Err(Error::NotAnAutomorphism);
        }
        let mut inv_table = vec![0usize; self.table.len()];
        for (x, &y) in self.table.iter().enumerate() {
            inv_table[y] = x;
        }
        let images = (0..self.target.rank())
            .map(|i| {
                let mut coords = vec![0u64; self.target.rank()];
                coords[i] = 1;
                inv_table[self.target.from_coords(&coords)]
            })
            .collect();
        Ok(GroupHom::from_images(
            self.target.clone(),
            self.source.clone(),
            images,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(s: &str) -> AbelianGroup {
        AbelianGroup::parse(s).unwrap()
    }

    #[test]
    fn literals_round_trip() {
        for s in ["C2", "C2xC8", "C3xC9", "C2xC2xC4"] {
            assert_eq!(group(s).literal(), s);
        }
        assert_eq!(group("c2Xc8").literal(), "C2xC8");
        assert!(AbelianGroup::parse("C1").is_err());
        assert!(AbelianGroup::parse("D4").is_err());
        assert!(AbelianGroup::new(&[]).is_err());
    }

    #[test]
    fn basic_orders() {
        let g = group("C2");
        assert_eq!(g.order(), 2);
        let d = group("C2xC8");
        assert_eq!(d.order(), 16);
        assert_eq!(group("C3xC9").order(), 27);
    }

    #[test]
    fn element_orders() {
        let d = group("C2xC8");
        assert_eq!(d.element_order(d.identity()), 1);
        assert_eq!(d.element_order(d.from_coords(&[1, 0])), 2);
        let t = group("C3xC9");
        assert_eq!(t.element_order(t.from_coords(&[1, 1])), 9);
    }

    #[test]
    fn element_literals() {
        let d = group("C2xC8");
        let x = d.parse_element("(1,3)").unwrap();
        assert_eq!(d.element_literal(x), "(1,3)");
        assert!(d.parse_element("(2,0)").is_err());
        assert!(d.parse_element("(1)").is_err());
    }

    #[test]
    fn generated_subgroups() {
        let d = group("C2xC8");
        assert_eq!(d.subgroup_generated(&[]).elements(), &[0]);
        let a = d.subgroup_generated(&[d.from_coords(&[0, 1])]);
        assert_eq!(a.len(), 8);
        // both generators are involutions; they span the order-4 subgroup of
        // elements of order at most 2
        let d1 = d.subgroup_generated(&[d.from_coords(&[1, 0]), d.from_coords(&[0, 4])]);
        assert_eq!(d1.len(), 4);
        assert!(d1.elements().iter().all(|&x| d.element_order(x) <= 2));
    }

    /// Brute-force oracle: all subsets closed under the operation.
    fn subgroups_by_subset_closure(g: &AbelianGroup) -> Vec<Vec<Elem>> {
        let n = g.order();
        assert!(n <= 16);
        let mut out = Vec::new();
        for mask in 0u32..(1 << n) {
            if mask & 1 == 0 {
                continue;
            }
            let elems: Vec<Elem> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            let closed = elems
                .iter()
                .all(|&x| elems.iter().all(|&y| mask >> g.add(x, y) & 1 == 1));
            if closed {
                out.push(elems);
            }
        }
        out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        out
    }

    #[test]
    fn all_subgroups_against_subset_closure_oracle() {
        for s in ["C2", "C2xC2", "C2xC4", "C12", "C3xC3"] {
            let g = group(s);
            let subs = g.all_subgroups().unwrap();
            let oracle = subgroups_by_subset_closure(&g);
            let got: Vec<Vec<Elem>> = subs.iter().map(|h| h.elements().to_vec()).collect();
            assert_eq!(got, oracle, "subgroups of {s}");
        }
    }

    #[test]
    fn subgroup_counts() {
        assert_eq!(group("C2").all_subgroups().unwrap().len(), 2);
        assert_eq!(group("C2xC2").all_subgroups().unwrap().len(), 5);
    }

    #[test]
    fn cosets_partition_the_group() {
        let g = group("C2xC4");
        for h in g.all_subgroups().unwrap() {
            let mut seen = vec![false; g.order()];
            let mut cosets = 0;
            for x in g.elements() {
                if seen[x] {
                    continue;
                }
                cosets += 1;
                for &s in h.elements() {
                    let y = g.add(x, s);
                    assert!(!seen[y]);
                    seen[y] = true;
                }
            }
            assert_eq!(cosets * h.len(), g.order());
        }
    }

    #[test]
    fn quotient_trivial_cases() {
        let g = group("C2xC8");
        let whole = g.subgroup_generated(&[g.from_coords(&[1, 0]), g.from_coords(&[0, 1])]);
        let trivial = g.subgroup_generated(&[]);
        let s = g.quotient(&whole, &whole).unwrap();
        assert_eq!(s.quotient_group().order(), 1);
        let s = g.quotient(&whole, &trivial).unwrap();
        assert_eq!(s.quotient_group().order(), 16);
        assert!(s.quotient_group().is_isomorphic(&g));
        // identity projection up to relabeling: kernel is exactly {e}
        assert_eq!(s.fiber(s.project(0)), vec![0]);
    }

    #[test]
    fn quotient_by_a1_is_c2xc4() {
        // D = C2xC8, A_1 the order-2 subgroup inside the C8 factor
        let g = group("C2xC8");
        let whole = g.subgroup_generated(&[g.from_coords(&[1, 0]), g.from_coords(&[0, 1])]);
        let a1 = g.subgroup_generated(&[g.from_coords(&[0, 4])]);
        let s = g.quotient(&whole, &a1).unwrap();
        assert_eq!(s.quotient_group().order(), 8);
        assert!(s.quotient_group().is_isomorphic(&group("C2xC4")));
    }

    #[test]
    fn quotient_projection_is_a_homomorphism() {
        let g = group("C2xC4");
        for u in g.all_subgroups().unwrap() {
            for l in g.all_subgroups().unwrap() {
                if !l.is_subgroup_of(&u) {
                    assert!(g.quotient(&u, &l).is_err());
                    continue;
                }
                let s = g.quotient(&u, &l).unwrap();
                let q = s.quotient_group();
                assert_eq!(q.order() * l.len(), u.len());
                for &x in u.elements() {
                    for &y in u.elements() {
                        assert_eq!(
                            s.project(g.add(x, y)),
                            q.add(s.project(x), s.project(y))
                        );
                    }
                }
                // kernel is exactly L
                let ker = s.fiber(q.identity());
                assert_eq!(ker, l.elements());
            }
        }
    }

    #[test]
    fn c4_automorphisms() {
        let c4 = group("C4");
        let autos = c4.automorphisms();
        assert_eq!(autos.len(), 2);
        assert!(autos.iter().any(|f| (0..4).all(|x| f.apply(x) == x)));
        assert!(autos.iter().any(|f| (0..4).all(|x| f.apply(x) == c4.neg(x))));
    }

    #[test]
    fn no_isomorphism_between_c4_and_klein() {
        let c4 = group("C4");
        let v = group("C2xC2");
        assert_eq!(c4.enumerate_homs(&v, true).count(), 0);
        assert!(!c4.is_isomorphic(&v));
    }

    /// Brute-force oracle: every bijection that is a homomorphism.
    fn isos_by_bijection_filter(g: &AbelianGroup) -> usize {
        let n = g.order();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut count = 0;
        loop {
            let is_hom = (0..n)
                .all(|x| (0..n).all(|y| perm[g.add(x, y)] == g.add(perm[x], perm[y])));
            if is_hom {
                count += 1;
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        count
    }

    fn next_permutation(p: &mut [usize]) -> bool {
        let n = p.len();
        if n < 2 {
            return false;
        }
        let mut i = n - 1;
        while i > 0 && p[i - 1] >= p[i] {
            i -= 1;
        }
        if i == 0 {
            return false;
        }
        let mut j = n - 1;
        while p[j] <= p[i - 1] {
            j -= 1;
        }
        p.swap(i - 1, j);
        p[i..].reverse();
        true
    }

    #[test]
    fn automorphism_count_matches_bijection_oracle() {
        let g = group("C2xC4");
        assert_eq!(g.automorphisms().len(), isos_by_bijection_filter(&g));
    }

    #[test]
    fn homs_are_homomorphisms_and_unique() {
        let g = group("C2xC4");
        let h = group("C2xC2");
        let homs: Vec<GroupHom> = g.enumerate_homs(&h, false).collect();
        let mut seen = HashSet::new();
        for f in &homs {
            assert!(seen.insert(f.table().to_vec()), "duplicate homomorphism");
            for x in g.elements() {
                for y in g.elements() {
                    assert_eq!(f.apply(g.add(x, y)), h.add(f.apply(x), f.apply(y)));
                }
            }
        }
        // coordinatewise: images of the C2 generator (order <= 2: all 4) and
        // of the C4 generator (order <= 4: all 4)
        assert_eq!(homs.len(), 16);
    }

    #[test]
    fn primary_invariants_and_shapes() {
        assert_eq!(group("C12").primary_invariants(), vec![3, 4]);
        assert!(group("C12").is_isomorphic(&group("C3xC4")));
        assert!(!group("C12").is_isomorphic(&group("C2xC6")));
        assert_eq!(group("C2xC8").p_group_shape(), Some((2, 3, true)));
        assert_eq!(group("C8").p_group_shape(), Some((2, 3, false)));
        assert_eq!(group("C3xC9").p_group_shape(), Some((3, 2, true)));
        assert_eq!(group("C4xC4").p_group_shape(), None);
        assert_eq!(group("C12").p_group_shape(), None);
    }

    #[test]
    fn hom_compose_and_inverse() {
        let g = group("C2xC4");
        for f in g.automorphisms() {
            let inv = f.inverse().unwrap();
            let id = f.compose(&inv);
            assert!(g.elements().all(|x| id.apply(x) == x));
        }
    }
}
