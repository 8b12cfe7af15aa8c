//! Exhaustive S-ring enumeration over small groups.
//!
//! Two independent methods back the public entry point:
//!
//! * raw partition backtracking (groups of order up to 16): grow basic sets
//!   over signature-refined cells, forcing inverse classes, and validate
//!   each completed partition;
//! * closure-lattice search (up to order 32): every ring is the join of the
//!   principal closures of its basic sets, so collect the Schur–Wielandt
//!   closures of all subset seeds (up to power-map and complement
//!   equivalence, which do not change the closure) and saturate under
//!   pairwise joins.
//!
//! The methods cross-validate on the overlap; the closure kernel operates
//! on bitmask tables and handles the millions of seeds of an order-27 group
//! in seconds.

use crate::abelian::AbelianGroup;
use crate::error::{Error, Result};
use crate::sring::SRing;
use rayon::prelude::*;
use std::collections::HashSet;

const RAW_BOUND: usize = 16;
const LATTICE_BOUND: usize = 32;

/// Every S-ring over the group, exactly once, in canonical partition order.
/// Orders up to 16 use the raw partition search, orders 17..=32 the
/// closure-lattice search.
pub fn enumerate_srings(group: &AbelianGroup) -> Result<Vec<SRing>> {
    let n = group.order();
    if n <= RAW_BOUND {
        enumerate_raw_partitions(group)
    } else if n <= LATTICE_BOUND {
        enumerate_by_closure_lattice(group)
    } else {
        Err(Error::SizeLimit {
            what: "S-ring enumeration",
            order: n,
            bound: LATTICE_BOUND,
        })
    }
}

/// Raw partition backtracking. Exposed separately so the two methods can be
/// compared on their common range.
pub fn enumerate_raw_partitions(group: &AbelianGroup) -> Result<Vec<SRing>> {
    let n = group.order();
    if n > RAW_BOUND {
        return Err(Error::SizeLimit {
            what: "raw partition enumeration",
            order: n,
            bound: RAW_BOUND,
        });
    }
    let t = SmallGroupTables::new(group);
    let mut keys: Vec<Vec<u8>> = Vec::new();
    let mut state = RawState {
        class_of: vec![UNASSIGNED; n],
        classes: vec![1u32], // {e}
        unassigned: (((1u64 << n) - 1) as u32) & !1,
    };
    state.class_of[0] = 0;
    raw_rec(&t, &mut state, &mut keys);
    keys_to_rings(group, keys)
}

/// Closure-lattice search. Exposed separately for cross-validation.
pub fn enumerate_by_closure_lattice(group: &AbelianGroup) -> Result<Vec<SRing>> {
    let n = group.order();
    if n > LATTICE_BOUND {
        return Err(Error::SizeLimit {
            what: "closure-lattice enumeration",
            order: n,
            bound: LATTICE_BOUND,
        });
    }
    let t = SmallGroupTables::new(group);
    let verbose = std::env::var_os("SCHUR_ENUM_TRACE").is_some();
    let t0 = std::time::Instant::now();
    let principal = principal_closures(&t);
    if verbose {
        eprintln!("principal closures: {} in {:.2?}", principal.len(), t0.elapsed());
    }
    let t1 = std::time::Instant::now();
    let keys = join_saturate(&t, principal);
    if verbose {
        eprintln!("join saturation: {} rings in {:.2?}", keys.len(), t1.elapsed());
    }
    keys_to_rings(group, keys.into_iter().collect())
}

fn keys_to_rings(group: &AbelianGroup, keys: Vec<Vec<u8>>) -> Result<Vec<SRing>> {
    let mut rings: Vec<SRing> = keys
        .into_iter()
        .map(|key| {
            let k = key.iter().copied().max().unwrap() as usize + 1;
            let mut partition: Vec<Vec<usize>> = vec![Vec::new(); k];
            for (x, &c) in key.iter().enumerate() {
                partition[c as usize].push(x);
            }
            SRing::validate(group.clone(), partition)
        })
        .collect::<Result<_>>()?;
    rings.sort_by(|a, b| {
        (a.rank(), a.basic_sets()).cmp(&(b.rank(), b.basic_sets()))
    });
    rings.dedup();
    Ok(rings)
}

// ---------------------------------------------------------------------------
// bitmask group tables and the Schur–Wielandt refinement kernel
// ---------------------------------------------------------------------------

pub(crate) struct SmallGroupTables {
    n: usize,
    add: Vec<u8>,
    neg: Vec<u8>,
    /// permutation tables of x -> m*x for every m coprime to the exponent
    /// (identity included)
    power_maps: Vec<Vec<u8>>,
}

impl SmallGroupTables {
    pub(crate) fn new(group: &AbelianGroup) -> Self {
        let n = group.order();
        assert!(n <= LATTICE_BOUND);
        let mut add = vec![0u8; n * n];
        for x in 0..n {
            for y in 0..n {
                add[x * n + y] = group.add(x, y) as u8;
            }
        }
        let neg: Vec<u8> = (0..n).map(|x| group.neg(x) as u8).collect();
        let exp = group.exponent();
        let power_maps: Vec<Vec<u8>> = (1..=exp)
            .filter(|m| gcd(*m, exp) == 1)
            .map(|m| (0..n).map(|x| group.mul(x, m as i64) as u8).collect())
            .collect();
        SmallGroupTables {
            n,
            add,
            neg,
            power_maps,
        }
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Scratch buffers for the refinement kernel, reused across closures.
struct Scratch {
    /// (old class, key value) -> new class id during a split
    relabel: Vec<u8>,
    touched: Vec<usize>,
}

const NO_ID: u8 = u8::MAX;
const KEYSPACE: usize = (LATTICE_BOUND + 1) * (LATTICE_BOUND + 1);

impl Scratch {
    fn new() -> Self {
        Scratch {
            relabel: vec![NO_ID; LATTICE_BOUND * KEYSPACE],
            touched: Vec::with_capacity(LATTICE_BOUND),
        }
    }

    /// Splits classes by a per-element key (< KEYSPACE); returns the new
    /// class count, or 0 if nothing changed.
    fn split(&mut self, class_of: &mut [u8], keys: impl Fn(usize) -> usize, k: usize) -> usize {
        let mut next = 0u8;
        let mut changed = false;
        for x in 0..class_of.len() {
            let old = class_of[x] as usize;
            let slot = old * KEYSPACE + keys(x);
            let id = self.relabel[slot];
            let id = if id == NO_ID {
                self.relabel[slot] = next;
                self.touched.push(slot);
                next += 1;
                self.relabel[slot]
            } else {
                id
            };
            if id as usize != old {
                changed = true;
            }
            class_of[x] = id;
        }
        for &slot in &self.touched {
            self.relabel[slot] = NO_ID;
        }
        self.touched.clear();
        // `changed` can be a pure relabeling; compare class counts
        if changed || next as usize != k {
            next as usize
        } else {
            k
        }
    }
}

/// Refines `class_of` in place to the coarsest partition that is
/// inverse-closed and has constant representation counts for every pair of
/// its classes, then relabels classes by first occurrence. This is the
/// classical Schur–Wielandt transform; its fixpoints are exactly the
/// S-ring partitions containing the initial one.
fn sw_refine(t: &SmallGroupTables, class_of: &mut [u8], scratch: &mut Scratch) {
    let n = t.n;
    normalize_labels(class_of);
    let mut k = (class_of.iter().copied().max().unwrap() + 1) as usize;
    loop {
        let mut changed = false;
        // inverse closure: split by the class of the inverse
        let nk = {
            let neg = &t.neg;
            let snapshot = class_of.to_vec();
            scratch.split(class_of, |x| snapshot[neg[x] as usize] as usize, k)
        };
        if nk != k {
            changed = true;
            k = nk;
        }
        // product counts: snapshot masks, split by count values. Splits make
        // the masks stale mid-sweep, but counts over unions of classes are
        // still constant on every final class, so the splits stay sound;
        // the next sweep runs on fresh classes.
        let snapshot_k = k;
        let mut masks = vec![0u32; snapshot_k];
        for (x, &c) in class_of.iter().enumerate() {
            masks[c as usize] |= 1 << x;
        }
        for i in 0..snapshot_k {
            for j in i..snapshot_k {
                let mut counts = [0u16; LATTICE_BOUND];
                let mut mi = masks[i];
                while mi != 0 {
                    let x = mi.trailing_zeros() as usize;
                    mi &= mi - 1;
                    let row = &t.add[x * n..(x + 1) * n];
                    let mut mj = masks[j];
                    while mj != 0 {
                        let y = mj.trailing_zeros() as usize;
                        mj &= mj - 1;
                        counts[row[y] as usize] += 1;
                    }
                }
                let nk = scratch.split(class_of, |x| counts[x] as usize, k);
                if nk != k {
                    changed = true;
                    k = nk;
                }
            }
        }
        if !changed {
            break;
        }
    }
    normalize_labels(class_of);
}

/// Relabels classes by first occurrence so equal partitions have equal
/// label vectors.
fn normalize_labels(class_of: &mut [u8]) {
    let mut map = [NO_ID; LATTICE_BOUND + 1];
    let mut next = 0u8;
    for c in class_of.iter_mut() {
        let m = &mut map[*c as usize];
        if *m == NO_ID {
            *m = next;
            next += 1;
        }
        *c = *m;
    }
}

// ---------------------------------------------------------------------------
// principal closures
// ---------------------------------------------------------------------------

/// Closure of a single seed subset (bitmask over elements 1..n, shifted by
/// one so bit 0 is element 1).
fn close_seed(t: &SmallGroupTables, seed: u64, scratch: &mut Scratch) -> Vec<u8> {
    let n = t.n;
    let mut class_of = vec![0u8; n];
    for x in 1..n {
        class_of[x] = if seed >> (x - 1) & 1 == 1 { 1 } else { 2 };
    }
    sw_refine(t, &mut class_of, scratch);
    class_of
}

/// All principal closures needed to generate every S-ring by joins: the
/// closures `<S>` of all subsets that could be basic sets. Seeds are
/// reduced modulo the power maps and the complement within `G \ {e}`
/// (neither changes the closure), and filtered by cheap necessary
/// conditions every basic set satisfies: the power-map image of a basic
/// set is a basic set (so equal to it or disjoint from it), and the
/// self-convolution counts of a basic set are constant on the set and on
/// its inverse.
fn principal_closures(t: &SmallGroupTables) -> HashSet<Vec<u8>> {
    let n = t.n;
    let bits = n - 1;
    let full: u64 = if bits == 64 { u64::MAX } else { (1 << bits) - 1 };
    // power maps on shifted masks (the identity map dropped)
    let shifted_maps: Vec<Vec<u8>> = t
        .power_maps
        .iter()
        .filter(|pm| pm.iter().enumerate().any(|(x, &y)| x as u8 != y))
        .map(|pm| (1..n).map(|x| pm[x] - 1).collect())
        .collect();
    // sub[z * n + x] = z - x, full element indices
    let sub: Vec<u8> = {
        let mut v = vec![0u8; n * n];
        for z in 0..n {
            for x in 0..n {
                v[z * n + x] = t.add[z * n + t.neg[x] as usize];
            }
        }
        v
    };
    let apply = |map: &[u8], s: u64| -> u64 {
        let mut out = 0u64;
        let mut s = s;
        while s != 0 {
            let b = s.trailing_zeros() as usize;
            s &= s - 1;
            out |= 1 << map[b];
        }
        out
    };
    // constant representation count of S + S over the probe set
    let constant_counts = |s_full: u64, probe: u64| -> bool {
        let mut expected = u32::MAX;
        let mut p = probe;
        while p != 0 {
            let z = p.trailing_zeros() as usize;
            p &= p - 1;
            let row = &sub[z * n..(z + 1) * n];
            let mut reps = 0u32;
            let mut m = s_full;
            while m != 0 {
                let x = m.trailing_zeros() as usize;
                m &= m - 1;
                if s_full >> row[x] & 1 == 1 {
                    reps += 1;
                }
            }
            if expected == u32::MAX {
                expected = reps;
            } else if reps != expected {
                return false;
            }
        }
        true
    };
    // The produced closures must cover `<X>` for every basic set X of every
    // ring. The filter conditions are all invariant under the power maps,
    // which also fix closures, so taking the least set of each power orbit
    // keeps exactly one seed per needed closure. The complement of a basic
    // set is merely an A-set, so no complement reduction is possible here.
    let _ = full;
    let keep_seed = |s: u64| -> bool {
        // possible basic set: power images equal or disjoint, and this seed
        // is the least of its power orbit
        for m in &shifted_maps {
            let img = apply(m, s);
            if img < s || (img != s && img & s != 0) {
                return false;
            }
        }
        // self-convolution counts constant on S and on S^{-1}
        let s_full = s << 1;
        let s_inv = {
            let mut out = 0u64;
            let mut m = s_full;
            while m != 0 {
                let x = m.trailing_zeros() as usize;
                m &= m - 1;
                out |= 1 << t.neg[x];
            }
            out
        };
        constant_counts(s_full, s_full) && constant_counts(s_full, s_inv)
    };
    let total: u64 = 1u64 << bits;
    let chunk: u64 = 1 << 16;
    let chunks: Vec<u64> = (0..total.div_ceil(chunk)).collect();
    chunks
        .into_par_iter()
        .map_init(Scratch::new, |scratch, c| {
            let mut local: HashSet<Vec<u8>> = HashSet::new();
            let lo = c * chunk;
            let hi = (lo + chunk).min(total);
            for s in lo..hi {
                if keep_seed(s) {
                    local.insert(close_seed(t, s, scratch));
                }
            }
            local
        })
        .reduce(HashSet::new, |mut a, b| {
            a.extend(b);
            a
        })
}

/// Saturates a set of ring partitions under joins with the principal
/// generators (closure of the common refinement). Every S-ring is a join
/// of the principal closures of its basic sets, and binary joins reach any
/// finite join, so saturating the frontier against the generators yields
/// every ring.
fn join_saturate(t: &SmallGroupTables, principal: HashSet<Vec<u8>>) -> HashSet<Vec<u8>> {
    let generators: Vec<Vec<u8>> = {
        let mut v: Vec<Vec<u8>> = principal.iter().cloned().collect();
        v.sort();
        v
    };
    let mut all = principal;
    let mut frontier = generators.clone();
    while !frontier.is_empty() {
        let next: Vec<Vec<u8>> = frontier
            .par_iter()
            .map_init(Scratch::new, |scratch, a| {
                let mut found = Vec::new();
                for b in &generators {
                    let mut joined = vec![0u8; a.len()];
                    normalize_pair_labels(a, b, &mut joined);
                    sw_refine(t, &mut joined, scratch);
                    if !all.contains(&joined) {
                        found.push(joined);
                    }
                }
                found
            })
            .flatten()
            .collect();
        let mut next: Vec<Vec<u8>> = next;
        next.sort();
        next.dedup();
        next.retain(|r| !all.contains(r));
        for r in &next {
            all.insert(r.clone());
        }
        frontier = next;
    }
    all
}

/// Common refinement of two labelings, labeled by first occurrence.
fn normalize_pair_labels(a: &[u8], b: &[u8], out: &mut [u8]) {
    let mut map = std::collections::HashMap::new();
    let mut next = 0u8;
    for (i, o) in out.iter_mut().enumerate() {
        let key = (a[i], b[i]);
        let id = *map.entry(key).or_insert_with(|| {
            let id = next;
            next += 1;
            id
        });
        *o = id;
    }
}

// ---------------------------------------------------------------------------
// raw partition backtracking
// ---------------------------------------------------------------------------

const UNASSIGNED: u8 = u8::MAX;

struct RawState {
    class_of: Vec<u8>,
    classes: Vec<u32>,
    unassigned: u32,
}

fn raw_rec(t: &SmallGroupTables, state: &mut RawState, out: &mut Vec<Vec<u8>>) {
    let n = t.n;
    if state.unassigned == 0 {
        if partition_is_module_closed(t, &state.classes) {
            let mut key = state.class_of.clone();
            normalize_labels(&mut key);
            out.push(key);
        }
        return;
    }
    // cells: level sets over the unassigned elements of every assigned pair
    // count function; future classes cannot straddle them
    let mut cell_of = vec![0u16; n];
    let mut num_cells = 1u16;
    for i in 0..state.classes.len() {
        for j in i..state.classes.len() {
            let counts = pair_counts(t, state.classes[i], state.classes[j]);
            let mut seen: std::collections::HashMap<(u16, u16), u16> =
                std::collections::HashMap::new();
            let mut next = 0u16;
            let mut rest = state.unassigned;
            while rest != 0 {
                let x = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let key = (cell_of[x], counts[x]);
                let id = *seen.entry(key).or_insert_with(|| {
                    let id = next;
                    next += 1;
                    id
                });
                cell_of[x] = id;
            }
            num_cells = next.max(1);
        }
    }
    let _ = num_cells;
    let x = state.unassigned.trailing_zeros() as usize;
    let mut cell_mask = 0u32;
    let mut rest = state.unassigned;
    while rest != 0 {
        let y = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        if cell_of[y] == cell_of[x] {
            cell_mask |= 1 << y;
        }
    }
    let others = cell_mask & !(1 << x);
    // iterate all submasks of `others`, adding x
    let mut sub = others;
    loop {
        let class = sub | (1 << x);
        try_class(t, state, class, &cell_of, out);
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & others;
    }
}

fn try_class(
    t: &SmallGroupTables,
    state: &mut RawState,
    class: u32,
    cell_of: &[u16],
    out: &mut Vec<Vec<u8>>,
) {
    // inverse image
    let mut inv = 0u32;
    let mut m = class;
    while m != 0 {
        let x = m.trailing_zeros() as usize;
        m &= m - 1;
        inv |= 1 << t.neg[x];
    }
    let new_classes: Vec<u32> = if inv == class {
        vec![class]
    } else if inv & class == 0 {
        // the inverse class is forced; it must fit inside one cell
        debug_assert_eq!(inv & !state.unassigned, 0);
        let first = inv.trailing_zeros() as usize;
        let mut m = inv;
        while m != 0 {
            let y = m.trailing_zeros() as usize;
            m &= m - 1;
            if cell_of[y] != cell_of[first] {
                return;
            }
        }
        vec![class, inv]
    } else {
        return;
    };
    // incremental module-closure checks: counts of every pair involving a
    // new class must be constant on every complete class
    let base = state.classes.len();
    for (idx, &nc) in new_classes.iter().enumerate() {
        for j in 0..base + idx + 1 {
            let other = if j < base {
                state.classes[j]
            } else {
                new_classes[j - base]
            };
            let counts = pair_counts(t, nc, other);
            for &cls in state.classes.iter().chain(new_classes.iter()) {
                let mut m = cls;
                let first = m.trailing_zeros() as usize;
                let c0 = counts[first];
                while m != 0 {
                    let z = m.trailing_zeros() as usize;
                    m &= m - 1;
                    if counts[z] != c0 {
                        return;
                    }
                }
            }
        }
    }
    // commit
    for (i, &nc) in new_classes.iter().enumerate() {
        let id = (base + i) as u8;
        let mut m = nc;
        while m != 0 {
            let y = m.trailing_zeros() as usize;
            m &= m - 1;
            state.class_of[y] = id;
        }
        state.classes.push(nc);
        state.unassigned &= !nc;
    }
    raw_rec(t, state, out);
    // undo
    for &nc in new_classes.iter().rev() {
        state.classes.pop();
        state.unassigned |= nc;
        let mut m = nc;
        while m != 0 {
            let y = m.trailing_zeros() as usize;
            m &= m - 1;
            state.class_of[y] = UNASSIGNED;
        }
    }
}

fn pair_counts(t: &SmallGroupTables, a: u32, b: u32) -> Vec<u16> {
    let n = t.n;
    let mut counts = vec![0u16; n];
    let mut ma = a;
    while ma != 0 {
        let x = ma.trailing_zeros() as usize;
        ma &= ma - 1;
        let row = &t.add[x * n..(x + 1) * n];
        let mut mb = b;
        while mb != 0 {
            let y = mb.trailing_zeros() as usize;
            mb &= mb - 1;
            counts[row[y] as usize] += 1;
        }
    }
    counts
}

fn partition_is_module_closed(t: &SmallGroupTables, classes: &[u32]) -> bool {
    for i in 0..classes.len() {
        for j in i..classes.len() {
            let counts = pair_counts(t, classes[i], classes[j]);
            for &cls in classes {
                let first = cls.trailing_zeros() as usize;
                let c0 = counts[first];
                let mut m = cls;
                while m != 0 {
                    let z = m.trailing_zeros() as usize;
                    m &= m - 1;
                    if counts[z] != c0 {
                        return false;
                    }
                }
            }
        }
    }
    true
}
