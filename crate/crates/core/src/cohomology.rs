//! Second cohomology with values in the roots of unity.
//!
//! Classes in `H^2(G, C^x)` are detected by evaluating a cocycle on
//! generators of the integral homology `H_2(G, Z)`, computed from the
//! normalized bar complex. This pairing ignores the coefficient-dependent
//! `Ext(G^ab, -)` part, so any cocycle with values in `<omega>` (or even in
//! all of `F_q^x`) is classified by its image in `H^2(G, C^x)`.

use alloc::vec::Vec;

use crate::error::{inconsistent, invalid, Result};
use crate::field::FieldSpec;
use crate::group::{lcm, Group, TableGroup};
use crate::snf::Quotient;

/// Normalized 2-cocycle with values in `Z/e`, stored as an `n x n` table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cocycle2 {
    pub n: usize,
    pub e: u64,
    pub vals: Vec<u64>,
}

impl Cocycle2 {
    pub fn zero(n: usize, e: u64) -> Self {
        Cocycle2 { n, e, vals: alloc::vec![0; n * n] }
    }
    #[inline]
    pub fn get(&self, a: usize, b: usize) -> u64 {
        self.vals[a * self.n + b]
    }
    pub fn is_cocycle<G: Group + ?Sized>(&self, g: &G) -> bool {
        let n = self.n;
        (0..n).all(|a| {
            (0..n).all(|b| {
                (0..n).all(|c| {
                    let lhs = (self.get(b, c) + self.get(a, g.mul(b, c))) % self.e;
                    let rhs = (self.get(g.mul(a, b), c) + self.get(a, b)) % self.e;
                    lhs == rhs
                })
            })
        }) && (0..n).all(|a| self.get(0, a) == 0 && self.get(a, 0) == 0)
    }
    pub fn neg(&self) -> Self {
        Cocycle2 { n: self.n, e: self.e, vals: self.vals.iter().map(|&v| (self.e - v) % self.e).collect() }
    }
    pub fn add(&self, o: &Self) -> Self {
        Cocycle2 { n: self.n, e: self.e, vals: self.vals.iter().zip(&o.vals).map(|(&a, &b)| (a + b) % self.e).collect() }
    }
    /// Coboundary of `b: G -> Z/e` with `b(1) = 0`.
    pub fn coboundary<G: Group + ?Sized>(g: &G, e: u64, b: &[u64]) -> Self {
        let n = g.order();
        let mut vals = alloc::vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                vals[x * n + y] = (b[x] + b[y] + e - b[g.mul(x, y)] % e) % e;
            }
        }
        Cocycle2 { n, e, vals }
    }
    /// Reinterpret in `Z/e2` through `Z/e -> Z/e2, 1 -> e2/e` (requires `e | e2`).
    pub fn lift(&self, e2: u64) -> Self {
        let k = e2 / self.e;
        Cocycle2 { n: self.n, e: e2, vals: self.vals.iter().map(|&v| v * k).collect() }
    }
    /// Order of the subgroup of `Z/e` generated by the values.
    pub fn value_order(&self) -> u64 {
        let g = self.vals.iter().fold(self.e, |g, &v| crate::group::gcd(g, v));
        self.e / g
    }
}

/// The Schur multiplier `H^2(G, C^x)` of a group, with explicit cycles.
///
/// Chains `[g|x]` are first rewritten along a spanning tree of the Cayley
/// graph in terms of the chains `[g|s]` with `s` a generator; the boundaries
/// `d[g|h|s]` then generate all relations.
#[derive(Clone, Debug)]
pub struct Multiplier {
    n: usize,
    gens: Vec<usize>,
    /// `expr[(g-1)(n-1) + (x-1)]`: the chain `[g|x]` in generator coordinates.
    expr: Vec<Vec<(usize, i64)>>,
    quotient: Quotient,
}

pub const H2_LIMIT: usize = 128;

#[inline]
fn pair(n: usize, a: usize, b: usize) -> usize {
    (a - 1) * (n - 1) + (b - 1)
}

fn add_into(acc: &mut Vec<(usize, i64)>, v: &[(usize, i64)], sign: i64) {
    for &(i, c) in v {
        match acc.iter_mut().find(|(j, _)| *j == i) {
            Some(e) => e.1 += sign * c,
            None => acc.push((i, sign * c)),
        }
    }
    acc.retain(|&(_, c)| c != 0);
}

impl Multiplier {
    pub fn compute(g: &TableGroup) -> Result<Self> {
        let n = g.order();
        if n > H2_LIMIT {
            return Err(crate::error::resource!("H^2 of a group of order {n} exceeds the bound {H2_LIMIT}"));
        }
        let gens: Vec<usize> = g.gens().to_vec();
        let k = gens.len();
        let gamma = |a: usize, j: usize| (a - 1) * k + j;
        // spanning tree: x = parent[x] * gens[edge[x]]
        let mut parent = alloc::vec![usize::MAX; n];
        let mut edge = alloc::vec![0usize; n];
        let mut order = alloc::vec![0usize];
        parent[0] = 0;
        let mut i = 0;
        while i < order.len() {
            let x = order[i];
            i += 1;
            for (j, &s) in gens.iter().enumerate() {
                let y = g.mul(x, s);
                if parent[y] == usize::MAX {
                    parent[y] = x;
                    edge[y] = j;
                    order.push(y);
                }
            }
        }
        let mut expr: Vec<Vec<(usize, i64)>> = alloc::vec![Vec::new(); (n.max(2) - 1) * (n.max(2) - 1)];
        for &x in order.iter().skip(1) {
            let p = parent[x];
            let j = edge[x];
            for a in 1..n {
                let mut v = Vec::new();
                if p == 0 {
                    v.push((gamma(a, j), 1));
                } else {
                    add_into(&mut v, &expr[pair(n, a, p)].clone(), 1);
                    let ap = g.mul(a, p);
                    if ap != 0 {
                        add_into(&mut v, &[(gamma(ap, j), 1)], 1);
                    }
                    add_into(&mut v, &[(gamma(p, j), 1)], -1);
                }
                expr[pair(n, a, x)] = v;
            }
        }
        let mut rels = Vec::new();
        for a in 1..n {
            for b in 1..n {
                for (j, &s) in gens.iter().enumerate() {
                    let mut v = Vec::new();
                    add_into(&mut v, &[(gamma(b, j), 1)], 1);
                    let ab = g.mul(a, b);
                    if ab != 0 {
                        add_into(&mut v, &[(gamma(ab, j), 1)], -1);
                    }
                    let bs = g.mul(b, s);
                    if bs != 0 {
                        add_into(&mut v, &expr[pair(n, a, bs)], 1);
                    }
                    add_into(&mut v, &expr[pair(n, a, b)], -1);
                    if !v.is_empty() {
                        rels.push(v);
                    }
                }
            }
        }
        let dim = if n == 1 { 0 } else { (n - 1) * k };
        let quotient = Quotient::compute(dim, rels.into_iter())?;
        Ok(Multiplier { n, gens, expr, quotient })
    }

    fn gamma_pair(&self, j: usize) -> (usize, usize) {
        let k = self.gens.len();
        (j / k + 1, self.gens[j % k])
    }

    pub fn group_order(&self) -> usize {
        self.n
    }

    /// Invariant factors of the multiplier.
    pub fn invariants(&self) -> Vec<u64> {
        self.quotient.invariants()
    }

    pub fn order(&self) -> u64 {
        self.invariants().iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.invariants().iter().fold(1, |a, &b| lcm(a, b))
    }

    /// Class of an additive cocycle as coordinates in `Z/d_i`.
    pub fn classify(&self, c: &Cocycle2) -> Result<Vec<u64>> {
        let mut out = Vec::new();
        for (d, cyc) in &self.quotient.torsion {
            let mut s: i128 = 0;
            for &(j, k) in cyc {
                let (a, b) = self.gamma_pair(j);
                s += k as i128 * c.get(a, b) as i128;
            }
            let s = s.rem_euclid(c.e as i128) as u64;
            let step = c.e / crate::group::gcd(c.e, *d);
            if !c.e.is_multiple_of(*d) || !s.is_multiple_of(step) {
                return Err(invalid!("cocycle values do not pair to a root of unity of order {d}"));
            }
            out.push(s / step % d);
        }
        Ok(out)
    }

    /// Class of a multiplicative cocycle with values in `F_q^x`; `val(a, b)`
    /// must be normalized.
    pub fn classify_scalar(&self, f: &FieldSpec, val: impl Fn(usize, usize) -> u64) -> Result<Vec<u64>> {
        let mut out = Vec::new();
        for (d, cyc) in &self.quotient.torsion {
            let mut prod = 1u64;
            for &(j, k) in cyc {
                let (a, b) = self.gamma_pair(j);
                let v = val(a, b);
                let e = (k as i128).rem_euclid(f.q as i128 - 1) as u64;
                prod = f.mul(prod, f.pow(v, e));
            }
            if !f.e.is_multiple_of(*d) {
                return Err(invalid!("field lacks roots of unity of order {d}"));
            }
            let l = f.dlog(prod).ok_or_else(|| inconsistent!("cycle value is not a root of unity"))?;
            let step = f.e / d;
            if l % step != 0 {
                return Err(inconsistent!("cycle value has order not dividing {d}"));
            }
            out.push(l / step);
        }
        Ok(out)
    }

    /// A cocycle with values in `Z/e` in the class with the given coordinates.
    /// Values lie in the subgroup of order `exp(M)`.
    pub fn cocycle(&self, coords: &[u64], e: u64) -> Result<Cocycle2> {
        let n = self.n;
        let inv = self.invariants();
        if inv.iter().any(|d| !e.is_multiple_of(*d)) {
            return Err(invalid!("Z/{e} does not contain the multiplier's exponent"));
        }
        let gv: Vec<i128> = (0..self.quotient.m)
            .map(|j| {
                let mut s: i128 = 0;
                for &(slot, x) in self.quotient.coords_of(j) {
                    if slot < inv.len() {
                        s += x as i128 * (coords[slot] as i128) * (e / inv[slot]) as i128;
                    }
                }
                s.rem_euclid(e as i128)
            })
            .collect();
        let mut vals = alloc::vec![0u64; n * n];
        for a in 1..n {
            for b in 1..n {
                let s: i128 = self.expr[pair(n, a, b)].iter().map(|&(j, x)| x as i128 * gv[j]).sum();
                vals[a * n + b] = s.rem_euclid(e as i128) as u64;
            }
        }
        Ok(Cocycle2 { n, e, vals })
    }

    /// All classes as coordinate vectors, in lexicographic order.
    pub fn classes(&self) -> Vec<Vec<u64>> {
        let inv = self.invariants();
        let mut out = alloc::vec![Vec::new()];
        for &d in &inv {
            let mut next = Vec::new();
            for c in &out {
                for t in 0..d {
                    let mut v = c.clone();
                    v.push(t);
                    next.push(v);
                }
            }
            out = next;
        }
        out
    }

    /// Action of conjugation on classes: the class of
    /// `(a, b) -> c(y a y^-1, y b y^-1)` for each class `c`, where `conj`
    /// maps an element `a` to `y a y^-1` (as local indices).
    pub fn transport(&self, coords: &[u64], conj: &[usize], e: u64) -> Result<Vec<u64>> {
        let c = self.cocycle(coords, e)?;
        let n = self.n;
        let mut vals = alloc::vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                vals[a * n + b] = c.get(conj[a], conj[b]);
            }
        }
        self.classify(&Cocycle2 { n, e, vals })
    }
}

/// Central extension `Z/o x_c G`, with `(a, g)(b, h) = (a + b + c(g, h), gh)`;
/// element `(a, g)` has index `a * |G| + g`. The values of `c` (in `Z/e`) must
/// lie in the subgroup of order `o`.
pub fn central_extension<G: Group + ?Sized>(g: &G, c: &Cocycle2, o: u64) -> Result<TableGroup> {
    let n = g.order();
    let step = c.e / o;
    if !c.e.is_multiple_of(o) || c.vals.iter().any(|v| v % step != 0) {
        return Err(invalid!("cocycle values outside the subgroup of order {o}"));
    }
    let o = o as usize;
    let total = o * n;
    if total > crate::group::TABLE_LIMIT {
        return Err(crate::error::resource!("central extension of order {total} too large"));
    }
    let mut table = Vec::with_capacity(total * total);
    for x in 0..total {
        let (a, gx) = (x / n, x % n);
        for y in 0..total {
            let (b, gy) = (y / n, y % n);
            let z = (a + b + (c.get(gx, gy) / step) as usize) % o;
            table.push((z * n + g.mul(gx, gy)) as u32);
        }
    }
    TableGroup::from_table(total, table)
}

/// A Schur cover: a stem extension whose central kernel is the full
/// multiplier.
#[derive(Clone, Debug)]
pub struct SchurCover {
    pub cover: TableGroup,
    /// Image of each cover element in `G`.
    pub projection: Vec<u32>,
    /// Kernel invariants (equal to the multiplier's).
    pub kernel: Vec<u64>,
}

pub fn schur_cover(g: &TableGroup, mult: &Multiplier) -> Result<SchurCover> {
    let inv = mult.invariants();
    let n = g.order();
    // one coordinate cocycle per invariant, with values in Z/d_i
    let cs: Vec<Cocycle2> = (0..inv.len())
        .map(|i| {
            let mut coords = alloc::vec![0u64; inv.len()];
            coords[i] = 1;
            mult.cocycle(&coords, inv[i])
        })
        .collect::<Result<_>>()?;
    let a: usize = inv.iter().product::<u64>() as usize;
    let total = a * n;
    if total > crate::group::TABLE_LIMIT {
        return Err(crate::error::resource!("Schur cover of order {total} too large"));
    }
    let split = |mut k: usize| -> Vec<u64> {
        inv.iter()
            .map(|&d| {
                let r = (k % d as usize) as u64;
                k /= d as usize;
                r
            })
            .collect()
    };
    let join = |v: &[u64]| -> usize { v.iter().zip(&inv).rev().fold(0, |acc, (&x, &d)| acc * d as usize + x as usize) };
    let mut table = Vec::with_capacity(total * total);
    for x in 0..total {
        let (ka, gx) = (x / n, x % n);
        let va = split(ka);
        for y in 0..total {
            let (kb, gy) = (y / n, y % n);
            let vb = split(kb);
            let s: Vec<u64> = (0..inv.len()).map(|i| (va[i] + vb[i] + cs[i].get(gx, gy)) % inv[i]).collect();
            table.push((join(&s) * n + g.mul(gx, gy)) as u32);
        }
    }
    let cover = TableGroup::from_table(total, table)?;
    let projection = (0..total).map(|x| (x % n) as u32).collect();
    Ok(SchurCover { cover, projection, kernel: inv })
}

/// Projective representation: matrices `P(g)` with
/// `P(g) P(h) = omega^{c(g,h)} P(gh)`.
#[derive(Clone, Debug)]
pub struct ProjRep {
    pub dim: usize,
    pub mats: Vec<crate::linalg::Mat>,
}

/// Irreducible projective representations of `G` for the cocycle `c`
/// (values in `Z/f.e`), built as the representations of the central
/// extension with the matching central character.
pub fn projective_irreducibles<G: Group + ?Sized>(g: &G, f: &FieldSpec, c: &Cocycle2) -> Result<Vec<ProjRep>> {
    let (ext, t, sel) = projective_characters(g, f, c)?;
    let n = g.order();
    let mut out = Vec::new();
    for i in sel {
        let r = crate::rep::irreducible_from_character(&ext, f, &t, i, ext.gens())?;
        out.push(ProjRep { dim: r.dim, mats: (0..n).map(|x| r.images[x].clone()).collect() });
    }
    Ok(out)
}

/// The central extension, its character table, and the characters lying over
/// `omega` on the kernel generator.
pub fn projective_characters<G: Group + ?Sized>(
    g: &G,
    f: &FieldSpec,
    c: &Cocycle2,
) -> Result<(TableGroup, crate::character::CharTable, Vec<usize>)> {
    if c.e != f.e {
        return Err(invalid!("cocycle modulus {} differs from field root order {}", c.e, f.e));
    }
    let o = c.value_order().max(1);
    let ext = central_extension(g, c, o)?;
    let t = crate::character::CharTable::compute(&ext, f)?;
    let z = if o > 1 { g.order() } else { 0 }; // element (1, id)
    let lam = f.root(f.e / o);
    let sel = (0..t.chars.len()).filter(|&i| t.value(i, z) == f.mul(t.degrees[i], lam)).collect();
    Ok((ext, t, sel))
}

/// `|H^1(G, Z/e)| = |Hom(G, Z/e)|`: the elements of the abelianization
/// killed by `e`.
pub fn h1_count(g: &TableGroup, e: u64) -> usize {
    let all = crate::group::Subgroup::whole(g.order());
    let d = crate::group::derived_subgroup(g, &all);
    let pow = |x: usize| {
        let mut o = 1;
        let mut y = x;
        while y != 0 {
            y = g.mul(y, x);
            o += 1;
        }
        let mut z = 0;
        for _ in 0..e % o {
            z = g.mul(z, x);
        }
        z
    };
    (0..g.order()).filter(|&x| d.contains(pow(x))).count() / d.order()
}
