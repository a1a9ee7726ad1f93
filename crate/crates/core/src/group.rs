//! Finite groups on element indices, subgroups as element sets.

use alloc::vec::Vec;
use hashbrown::HashMap;

use crate::error::{resource, Result};
use crate::perm::Perm;

/// A finite group whose elements are the indices `0..order()`, with `0`
/// the identity.
pub trait Group {
    fn order(&self) -> usize;
    fn mul(&self, a: usize, b: usize) -> usize;
    fn inv(&self, a: usize) -> usize;

    /// `y^-1 x y`
    fn conj(&self, x: usize, y: usize) -> usize {
        self.mul(self.inv(y), self.mul(x, y))
    }

    fn pow(&self, x: usize, mut k: u64) -> usize {
        let mut r = 0;
        let mut b = x;
        while k > 0 {
            if k & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            k >>= 1;
        }
        r
    }

    fn elt_order(&self, x: usize) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != 0 {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }
}

/// Group given by a full multiplication table.
#[derive(Clone, Debug)]
pub struct TableGroup {
    n: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
    gens: Vec<usize>,
}

impl Group for TableGroup {
    fn order(&self) -> usize {
        self.n
    }
    #[inline]
    fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b] as usize
    }
    #[inline]
    fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }
}

pub const TABLE_LIMIT: usize = 8192;

impl TableGroup {
    /// Tabulate any group. Fails above [`TABLE_LIMIT`] elements.
    pub fn from_group<G: Group + ?Sized>(g: &G) -> Result<Self> {
        let n = g.order();
        if n > TABLE_LIMIT {
            return Err(resource!("group of order {n} is too large to tabulate"));
        }
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                table.push(g.mul(a, b) as u32);
            }
        }
        Self::from_table(n, table)
    }

    pub fn from_table(n: usize, table: Vec<u32>) -> Result<Self> {
        let mut inverse = alloc::vec![0u32; n];
        for a in 0..n {
            for b in 0..n {
                if table[a * n + b] == 0 {
                    inverse[a] = b as u32;
                    break;
                }
            }
        }
        let mut g = TableGroup { n, table, inverse, gens: Vec::new() };
        g.gens = generating_set(&g);
        Ok(g)
    }

    pub fn trivial() -> Self {
        TableGroup { n: 1, table: alloc::vec![0], inverse: alloc::vec![0], gens: Vec::new() }
    }

    pub fn gens(&self) -> &[usize] {
        &self.gens
    }

    /// The subgroup `h` as a group of its own; element `i` of the result is
    /// `h.elems()[i]`.
    pub fn sub_table(&self, h: &Subgroup) -> TableGroup {
        Self::from_subgroup(self, h).expect("subgroup table")
    }

    /// Tabulate a subgroup of any group; element `i` is `h.elems()[i]`.
    pub fn from_subgroup<G: Group + ?Sized>(g: &G, h: &Subgroup) -> Result<TableGroup> {
        let m = h.order();
        if m > TABLE_LIMIT {
            return Err(resource!("subgroup of order {m} is too large to tabulate"));
        }
        let mut table = Vec::with_capacity(m * m);
        for &a in h.elems() {
            for &b in h.elems() {
                let c = g.mul(a as usize, b as usize);
                table.push(h.position(c).expect("subgroup closed under products") as u32);
            }
        }
        TableGroup::from_table(m, table)
    }
}

/// A greedy generating set: add elements not yet generated.
pub fn generating_set<G: Group + ?Sized>(g: &G) -> Vec<usize> {
    let n = g.order();
    let mut gens = Vec::new();
    let mut cur = Subgroup::trivial(n);
    // Prefer elements of large order to keep the set short.
    let mut order: Vec<(usize, usize)> = (1..n).map(|x| (g.elt_order(x), x)).collect();
    order.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    for (_, x) in order {
        if cur.order() == n {
            break;
        }
        if !cur.contains(x) {
            gens.push(x);
            cur = closure(g, &gens);
        }
    }
    gens
}

/// Subgroup of an ambient group: sorted element list plus a membership mask.
#[derive(Clone, Debug)]
pub struct Subgroup {
    mask: Vec<u64>,
    elems: Vec<u32>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.elems == other.elems
    }
}
impl Eq for Subgroup {}
impl core::hash::Hash for Subgroup {
    fn hash<H: core::hash::Hasher>(&self, state: &mut H) {
        self.elems.hash(state)
    }
}
impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.elems.len().cmp(&other.elems.len()).then_with(|| self.elems.cmp(&other.elems))
    }
}

impl Subgroup {
    pub fn from_elems(n: usize, mut elems: Vec<u32>) -> Self {
        elems.sort_unstable();
        elems.dedup();
        let mut mask = alloc::vec![0u64; n.div_ceil(64)];
        for &e in &elems {
            mask[e as usize / 64] |= 1 << (e % 64);
        }
        Subgroup { mask, elems }
    }

    pub fn trivial(n: usize) -> Self {
        Self::from_elems(n, alloc::vec![0])
    }

    pub fn whole(n: usize) -> Self {
        Self::from_elems(n, (0..n as u32).collect())
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.mask[x / 64] >> (x % 64) & 1 == 1
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn elems(&self) -> &[u32] {
        &self.elems
    }

    pub fn is_subset(&self, other: &Subgroup) -> bool {
        self.elems.iter().all(|&x| other.contains(x as usize))
    }

    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        let n = self.mask.len() * 64;
        let e = self.elems.iter().copied().filter(|&x| other.contains(x as usize)).collect();
        let mut s = Self::from_elems(n, e);
        s.mask.truncate(self.mask.len());
        s
    }

    /// Position of `x` in the sorted element list.
    pub fn position(&self, x: usize) -> Option<usize> {
        self.elems.binary_search(&(x as u32)).ok()
    }
}

/// A subgroup as a group in its own right, multiplying through the parent:
/// element `i` is the `i`-th smallest element of the subgroup.
pub struct SubgroupView<'a, G: Group + ?Sized> {
    pub parent: &'a G,
    pub sub: &'a Subgroup,
}

impl<G: Group + ?Sized> Group for SubgroupView<'_, G> {
    fn order(&self) -> usize {
        self.sub.order()
    }
    fn mul(&self, a: usize, b: usize) -> usize {
        let e = self.sub.elems();
        self.sub.position(self.parent.mul(e[a] as usize, e[b] as usize)).expect("subgroup closed under products")
    }
    fn inv(&self, a: usize) -> usize {
        self.sub.position(self.parent.inv(self.sub.elems()[a] as usize)).expect("subgroup closed under inverses")
    }
}

/// Subgroup generated by `gens`.
pub fn closure<G: Group + ?Sized>(g: &G, gens: &[usize]) -> Subgroup {
    let n = g.order();
    let mut seen = alloc::vec![false; n];
    seen[0] = true;
    let mut elems = alloc::vec![0usize];
    let mut i = 0;
    while i < elems.len() {
        let x = elems[i];
        i += 1;
        for &s in gens {
            let y = g.mul(x, s);
            if !seen[y] {
                seen[y] = true;
                elems.push(y);
            }
        }
    }
    Subgroup::from_elems(n, elems.into_iter().map(|x| x as u32).collect())
}

/// Subgroup generated by a subgroup together with extra elements.
pub fn join<G: Group + ?Sized>(g: &G, h: &Subgroup, extra: &[usize]) -> Subgroup {
    let mut gens: Vec<usize> = small_gens(g, h);
    gens.extend_from_slice(extra);
    closure(g, &gens)
}

/// A short generating set of a subgroup (ambient indices).
pub fn small_gens<G: Group + ?Sized>(g: &G, h: &Subgroup) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut cur = Subgroup::trivial(g.order());
    for &x in h.elems() {
        if cur.order() == h.order() {
            break;
        }
        if !cur.contains(x as usize) {
            gens.push(x as usize);
            cur = closure(g, &gens);
        }
    }
    gens
}

/// `y^-1 H y`
pub fn conjugate<G: Group + ?Sized>(g: &G, h: &Subgroup, y: usize) -> Subgroup {
    Subgroup::from_elems(g.order(), h.elems().iter().map(|&x| g.conj(x as usize, y) as u32).collect())
}

pub fn normalizer<G: Group + ?Sized>(g: &G, h: &Subgroup) -> Subgroup {
    let gens = small_gens(g, h);
    let e: Vec<u32> = (0..g.order())
        .filter(|&y| gens.iter().all(|&x| h.contains(g.conj(x, y))))
        .map(|y| y as u32)
        .collect();
    Subgroup::from_elems(g.order(), e)
}

pub fn is_normal<G: Group + ?Sized>(g: &G, h: &Subgroup, in_: &Subgroup) -> bool {
    let hg = small_gens(g, h);
    let kg = small_gens(g, in_);
    hg.iter().all(|&x| kg.iter().all(|&y| h.contains(g.conj(x, y))))
}

/// Right transversal of `h` in `k` (`h <= k`): representatives of the cosets `h y`.
pub fn right_transversal<G: Group + ?Sized>(g: &G, h: &Subgroup, k: &Subgroup) -> Vec<usize> {
    let mut covered = alloc::vec![false; g.order()];
    let mut out = Vec::new();
    for &y in k.elems() {
        let y = y as usize;
        if covered[y] {
            continue;
        }
        out.push(y);
        for &x in h.elems() {
            covered[g.mul(x as usize, y)] = true;
        }
    }
    out
}

/// Left transversal of `h` in `k`: representatives of the cosets `y h`.
pub fn left_transversal<G: Group + ?Sized>(g: &G, h: &Subgroup, k: &Subgroup) -> Vec<usize> {
    let mut covered = alloc::vec![false; g.order()];
    let mut out = Vec::new();
    for &y in k.elems() {
        let y = y as usize;
        if covered[y] {
            continue;
        }
        out.push(y);
        for &x in h.elems() {
            covered[g.mul(y, x as usize)] = true;
        }
    }
    out
}

/// Normal closure of `gens` inside the subgroup `within`.
pub fn normal_closure<G: Group + ?Sized>(g: &G, gens: &[usize], within: &Subgroup) -> Subgroup {
    let wg = small_gens(g, within);
    let mut cur: Vec<usize> = gens.to_vec();
    loop {
        let h = closure(g, &cur);
        let mut grew = false;
        for x in small_gens(g, &h) {
            for &y in &wg {
                let c = g.conj(x, y);
                if !h.contains(c) {
                    cur.push(c);
                    grew = true;
                }
            }
        }
        if !grew {
            return h;
        }
    }
}

pub fn derived_subgroup<G: Group + ?Sized>(g: &G, within: &Subgroup) -> Subgroup {
    let wg = small_gens(g, within);
    let mut comms = Vec::new();
    for &a in &wg {
        for &b in &wg {
            let c = g.mul(g.mul(g.inv(a), g.inv(b)), g.mul(a, b));
            if c != 0 {
                comms.push(c);
            }
        }
    }
    normal_closure(g, &comms, within)
}

pub fn exponent<G: Group + ?Sized>(g: &G, h: &Subgroup) -> u64 {
    let mut e = 1u64;
    for &x in h.elems() {
        e = lcm(e, g.elt_order(x as usize) as u64);
    }
    e
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Conjugacy classes of the subgroup `within` acting on itself; each class is
/// a sorted list, classes ordered by their smallest element.
pub fn conjugacy_classes<G: Group + ?Sized>(g: &G, within: &Subgroup) -> Vec<Vec<u32>> {
    let gens = small_gens(g, within);
    let mut seen = alloc::vec![false; g.order()];
    let mut out = Vec::new();
    for &x in within.elems() {
        let x = x as usize;
        if seen[x] {
            continue;
        }
        seen[x] = true;
        let mut cls = alloc::vec![x];
        let mut i = 0;
        while i < cls.len() {
            let y = cls[i];
            i += 1;
            for &s in &gens {
                let z = g.conj(y, s);
                if !seen[z] {
                    seen[z] = true;
                    cls.push(z);
                }
            }
        }
        let mut c: Vec<u32> = cls.into_iter().map(|v| v as u32).collect();
        c.sort_unstable();
        out.push(c);
    }
    out
}

/// Permutation group with enumerated elements.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    gens: Vec<Perm>,
    elements: Vec<Perm>,
    index: HashMap<Perm, u32>,
}

pub const ENUM_LIMIT: usize = 2_000_000;

impl PermGroup {
    /// Enumerate `<gens>` on `degree` points, failing beyond `limit` elements.
    pub fn new(degree: usize, gens: Vec<Perm>, limit: usize) -> Result<Self> {
        let id = Perm::identity(degree);
        let mut elements = alloc::vec![id.clone()];
        let mut index = HashMap::new();
        index.insert(id, 0u32);
        let mut i = 0;
        while i < elements.len() {
            for s in &gens {
                let y = elements[i].compose(s);
                if !index.contains_key(&y) {
                    if elements.len() >= limit {
                        return Err(resource!("permutation group exceeds {limit} elements"));
                    }
                    index.insert(y.clone(), elements.len() as u32);
                    elements.push(y);
                }
            }
            i += 1;
        }
        Ok(PermGroup { degree, gens, elements, index })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn gens(&self) -> &[Perm] {
        &self.gens
    }
    pub fn element(&self, i: usize) -> &Perm {
        &self.elements[i]
    }
    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }
    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).map(|&i| i as usize)
    }
    /// Indices of the generators.
    pub fn gen_indices(&self) -> Vec<usize> {
        self.gens.iter().map(|p| self.index[p] as usize).collect()
    }
    pub fn table(&self) -> Result<TableGroup> {
        TableGroup::from_group(self)
    }
}

impl Group for PermGroup {
    fn order(&self) -> usize {
        self.elements.len()
    }
    fn mul(&self, a: usize, b: usize) -> usize {
        self.index[&self.elements[a].compose(&self.elements[b])] as usize
    }
    fn inv(&self, a: usize) -> usize {
        self.index[&self.elements[a].inverse()] as usize
    }
}
