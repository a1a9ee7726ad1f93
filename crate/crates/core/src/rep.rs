//! Matrix representations over `F_q`: construction from characters,
//! equivalence testing, decomposition and Clifford-theoretic helpers.

use alloc::vec::Vec;

use crate::character::CharTable;
use crate::error::{inconsistent, invalid, Result};
use crate::field::FieldSpec;
use crate::group::{Group, Subgroup};
use crate::linalg::{Echelon, Mat};
use crate::poly;

/// A representation given by the matrix of every group element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatRep {
    pub dim: usize,
    pub images: Vec<Mat>,
}

impl MatRep {
    /// Extend generator images to the whole group, checking well-definedness.
    pub fn from_gen_images<G: Group + ?Sized>(g: &G, f: &FieldSpec, gens: &[usize], mats: &[Mat]) -> Result<Self> {
        let dim = mats.first().map_or(1, |m| m.rows);
        let n = g.order();
        let mut images: Vec<Option<Mat>> = alloc::vec![None; n];
        images[0] = Some(Mat::identity(dim));
        let mut queue = alloc::vec![0usize];
        let mut i = 0;
        while i < queue.len() {
            let x = queue[i];
            i += 1;
            for (&s, m) in gens.iter().zip(mats) {
                let y = g.mul(x, s);
                let my = images[x].as_ref().unwrap().mul(f, m);
                match &images[y] {
                    None => {
                        images[y] = Some(my);
                        queue.push(y);
                    }
                    Some(old) if *old != my => return Err(invalid!("matrices do not define a representation")),
                    _ => {}
                }
            }
        }
        if queue.len() != n {
            return Err(invalid!("generators do not generate the group"));
        }
        Ok(MatRep { dim, images: images.into_iter().map(Option::unwrap).collect() })
    }

    pub fn trivial(n: usize) -> Self {
        MatRep { dim: 1, images: alloc::vec![Mat::identity(1); n] }
    }

    pub fn image(&self, x: usize) -> &Mat {
        &self.images[x]
    }

    /// Character values on the classes of `t`.
    pub fn character(&self, f: &FieldSpec, t: &CharTable) -> Vec<u64> {
        t.classes.iter().map(|c| self.images[c[0] as usize].trace(f)).collect()
    }

    pub fn tensor(&self, f: &FieldSpec, o: &MatRep) -> MatRep {
        let dim = self.dim * o.dim;
        let images = self
            .images
            .iter()
            .zip(&o.images)
            .map(|(a, b)| {
                let mut m = Mat::zeros(dim, dim);
                for i in 0..a.rows {
                    for j in 0..a.cols {
                        let x = a.get(i, j);
                        if x == 0 {
                            continue;
                        }
                        for k in 0..b.rows {
                            for l in 0..b.cols {
                                m.set(i * b.rows + k, j * b.cols + l, f.mul(x, b.get(k, l)));
                            }
                        }
                    }
                }
                m
            })
            .collect();
        MatRep { dim, images }
    }

    /// `g -> (rho(g)^-1)^T`
    pub fn contragredient<G: Group + ?Sized>(&self, g: &G) -> MatRep {
        MatRep { dim: self.dim, images: (0..self.images.len()).map(|x| self.images[g.inv(x)].transpose()).collect() }
    }

    /// Restriction to a subgroup; element `i` of the result is `h.elems()[i]`.
    pub fn restrict(&self, h: &Subgroup) -> MatRep {
        MatRep { dim: self.dim, images: h.elems().iter().map(|&x| self.images[x as usize].clone()).collect() }
    }

    /// Is the representation irreducible (character norm one)?
    pub fn is_irreducible(&self, f: &FieldSpec, t: &CharTable) -> bool {
        let c = self.character(f, t);
        t.inner(f, &c, &c) == 1
    }
}

/// Basis of `{T : T a(s) = b(s) T for s in gens}`.
pub fn intertwiners(f: &FieldSpec, a: &[&Mat], b: &[&Mat]) -> Vec<Mat> {
    let da = a[0].rows;
    let db = b[0].rows;
    // unknown T is db x da, index (i, j) -> i * da + j
    let nu = db * da;
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for (am, bm) in a.iter().zip(b) {
        for i in 0..db {
            for j in 0..da {
                let mut r = alloc::vec![0u64; nu];
                for k in 0..da {
                    r[i * da + k] = f.add(r[i * da + k], am.get(k, j));
                }
                for k in 0..db {
                    r[k * da + j] = f.sub(r[k * da + j], bm.get(i, k));
                }
                rows.push(r);
            }
        }
    }
    if rows.is_empty() {
        return alloc::vec![Mat::identity(da)];
    }
    let m = Mat::from_rows(&rows, nu);
    m.nullspace(f).into_iter().map(|v| Mat { rows: db, cols: da, data: v }).collect()
}

/// An invertible intertwiner `T` with `T a(g) = b(g) T`, if the two irreducible
/// representations are equivalent.
pub fn equivalence<G: Group + ?Sized>(g: &G, f: &FieldSpec, gens: &[usize], a: &MatRep, b: &MatRep) -> Option<Mat> {
    let _ = g;
    if a.dim != b.dim {
        return None;
    }
    let am: Vec<&Mat> = gens.iter().map(|&s| &a.images[s]).collect();
    let bm: Vec<&Mat> = gens.iter().map(|&s| &b.images[s]).collect();
    intertwiners(f, &am, &bm).into_iter().find(|t| t.det(f) != 0)
}

/// Simple pseudo-random generator for algorithmic choices.
#[derive(Clone, Debug)]
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(seed ^ 0x853c_49e6_748f_ea9b)
    }
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        self.0 >> 33
    }
    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }
}

/// Irreducible representation affording character `i` of `t`.
///
/// The isotypic component of the regular module is built from the central
/// idempotent; an eigenvector of a random algebra element for an eigenvalue of
/// multiplicity `d` spins up to a single irreducible constituent.
pub fn irreducible_from_character<G: Group + ?Sized>(
    g: &G,
    f: &FieldSpec,
    t: &CharTable,
    i: usize,
    gens: &[usize],
) -> Result<MatRep> {
    let n = g.order();
    let d = t.degrees[i] as usize;
    if d == 1 {
        let mats: Vec<Mat> = gens.iter().map(|&s| Mat::scalar(1, t.value(i, s))).collect();
        return MatRep::from_gen_images(g, f, gens, &mats);
    }
    let scale = f.mul(d as u64, f.inv(n as u64 % f.q));
    // e_chi * h has coefficient d/n chi(h y^-1) at y
    let mut iso = Echelon::new();
    let mut rng = Rng::new(i as u64 + 17);
    let mut tries = 0;
    while iso.len() < d * d {
        let h = if tries < n { tries } else { rng.below(n as u64) as usize };
        tries += 1;
        if tries > 4 * n + 100 {
            return Err(inconsistent!("isotypic component too small"));
        }
        let v: Vec<u64> = (0..n).map(|y| f.mul(scale, t.value(i, g.mul(h, g.inv(y))))).collect();
        iso.insert(f, &v);
    }
    let dd = d * d;
    // action of x on the component: (x v)[y] = v[x^-1 y]
    let act = |x: usize, v: &[u64]| -> Vec<u64> {
        let xi = g.inv(x);
        (0..n).map(|y| v[g.mul(xi, y)]).collect()
    };
    let mut big: Vec<Mat> = Vec::new();
    for &s in gens {
        let mut m = Mat::zeros(dd, dd);
        for (c, b) in iso.basis.iter().enumerate() {
            let co = iso.coords(&act(s, b));
            for r in 0..dd {
                m.set(r, c, co[r]);
            }
        }
        big.push(m);
    }
    // random algebra elements built from products of generators
    let mut words: Vec<Mat> = alloc::vec![Mat::identity(dd)];
    for k in 0..6 {
        let next = words[k].mul(f, &big[k % big.len()]);
        words.push(next);
    }
    for round in 0..50 {
        let mut a = Mat::zeros(dd, dd);
        for w in &words {
            a = a.add(f, &w.scale(f, rng.below(f.q)));
        }
        if round > 0 {
            let s = &big[rng.below(big.len() as u64) as usize];
            a = a.add(f, &s.mul(f, &a).scale(f, rng.below(f.q)));
        }
        let cp = a.charpoly(f);
        for lam in poly::roots(f, &cp) {
            let mut sh = a.clone();
            for r in 0..dd {
                let v = f.sub(sh.get(r, r), lam);
                sh.set(r, r, v);
            }
            let ns = sh.nullspace(f);
            if ns.len() != d {
                continue;
            }
            // spin ns[0]
            let mut sub = Echelon::new();
            sub.insert(f, &ns[0]);
            let mut k = 0;
            while k < sub.len() && sub.len() <= d {
                let v = sub.basis[k].clone();
                k += 1;
                for m in &big {
                    sub.insert(f, &m.mul_vec(f, &v));
                }
            }
            if sub.len() != d {
                continue;
            }
            let mats: Vec<Mat> = big
                .iter()
                .map(|m| {
                    let mut r = Mat::zeros(d, d);
                    for (c, b) in sub.basis.iter().enumerate() {
                        let co = sub.coords(&m.mul_vec(f, b));
                        for rr in 0..d {
                            r.set(rr, c, co[rr]);
                        }
                    }
                    r
                })
                .collect();
            return MatRep::from_gen_images(g, f, gens, &mats);
        }
    }
    Err(inconsistent!("could not split the isotypic component of character {i}"))
}

/// All irreducible representations, ordered as the characters of `t`.
pub fn irreducibles<G: Group + ?Sized>(g: &G, f: &FieldSpec, t: &CharTable, gens: &[usize]) -> Result<Vec<MatRep>> {
    (0..t.chars.len()).map(|i| irreducible_from_character(g, f, t, i, gens)).collect()
}

/// Multiplicity of each character of `t` in `rep`.
pub fn decompose(f: &FieldSpec, t: &CharTable, rep: &MatRep) -> Vec<u64> {
    let c = rep.character(f, t);
    t.chars.iter().map(|chi| t.inner(f, &c, chi)).collect()
}

/// Class function `x -> chi(y x y^-1)` on a normal subgroup, given by element values.
pub fn conjugate_values<G: Group + ?Sized>(g: &G, n: &Subgroup, vals: &[u64], y: usize) -> Vec<u64> {
    n.elems()
        .iter()
        .map(|&x| {
            let c = g.mul(g.mul(y, x as usize), g.inv(y));
            vals[n.position(c).expect("normal subgroup")]
        })
        .collect()
}

/// Inertia group in `l` of a character of the normal subgroup `n`
/// (values listed along `n.elems()`).
pub fn inertia<G: Group + ?Sized>(g: &G, l: &Subgroup, n: &Subgroup, vals: &[u64]) -> Subgroup {
    let e = l
        .elems()
        .iter()
        .copied()
        .filter(|&y| conjugate_values(g, n, vals, y as usize) == vals)
        .collect();
    Subgroup::from_elems(g.order(), e)
}

/// Irreducible representations of `l` lying over `rho`, a representation of
/// the normal subgroup `n` (indexed by positions in `n`) that is inert in
/// `l`, each with its ratio `deg chi / deg rho`.
pub fn irreducibles_over<G: Group + ?Sized>(
    l: &G,
    f: &FieldSpec,
    n: &Subgroup,
    rho: &MatRep,
) -> Result<Vec<(MatRep, u64)>> {
    let vals: Vec<u64> = rho.images.iter().map(|m| m.trace(f)).collect();
    let all = Subgroup::whole(l.order());
    if inertia(l, &all, n, &vals).order() != l.order() {
        return Err(invalid!("rho is not inert in L"));
    }
    let t = CharTable::compute(l, f)?;
    let gens = crate::group::generating_set(l);
    let mut out = Vec::new();
    for i in 0..t.chars.len() {
        let mut ip = 0;
        for &x in n.elems() {
            let xi = n.position(l.inv(x as usize)).expect("subgroup");
            ip = f.add(ip, f.mul(t.value(i, x as usize), vals[xi]));
        }
        if ip != 0 {
            let chi = irreducible_from_character(l, f, &t, i, &gens)?;
            out.push((chi, t.degrees[i] / rho.dim as u64));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::tests::sym;
    use crate::group::TableGroup;
    use crate::perm::Perm;

    fn a5() -> TableGroup {
        let a = Perm::parse("(1,2,3,4,5)", 5).unwrap();
        let b = Perm::parse("(1,2,3)", 5).unwrap();
        crate::group::PermGroup::new(5, alloc::vec![a, b], 100).unwrap().table().unwrap()
    }

    #[test]
    fn irreducibles_of_a5() {
        let g = a5();
        let f = FieldSpec::new(60, 1 << 20).unwrap();
        let t = CharTable::compute(&g, &f).unwrap();
        let irr = irreducibles(&g, &f, &t, g.gens()).unwrap();
        let dims: Vec<usize> = irr.iter().map(|r| r.dim).collect();
        assert_eq!(dims, alloc::vec![1, 3, 3, 4, 5]);
        for (i, r) in irr.iter().enumerate() {
            assert_eq!(r.character(&f, &t), t.chars[i]);
            assert!(r.is_irreducible(&f, &t));
        }
        // 3 (x) 3 = 1 + 3 + 5
        let sq = irr[1].tensor(&f, &irr[1]);
        assert_eq!(decompose(&f, &t, &sq), alloc::vec![1, 1, 0, 0, 1]);
    }

    #[test]
    fn equivalence_detects_conjugate_reps() {
        let g = sym(4).table().unwrap();
        let f = FieldSpec::new(24, 1 << 20).unwrap();
        let t = CharTable::compute(&g, &f).unwrap();
        let irr = irreducibles(&g, &f, &t, g.gens()).unwrap();
        let r = &irr[3];
        // conjugate by an invertible matrix
        let p = Mat::from_rows(&[alloc::vec![1, 2, 0], alloc::vec![0, 1, 5], alloc::vec![3, 0, 1]], 3);
        let pi = p.inverse(&f).unwrap();
        let conj = MatRep { dim: 3, images: r.images.iter().map(|m| p.mul(&f, m).mul(&f, &pi)).collect() };
        let tt = equivalence(&g, &f, g.gens(), r, &conj).unwrap();
        for x in 0..24 {
            assert_eq!(tt.mul(&f, r.image(x)), conj.image(x).mul(&f, &tt));
        }
        assert!(equivalence(&g, &f, g.gens(), &irr[3], &irr[4]).is_none());
    }

    #[test]
    fn irreducibles_over_examples() {
        let s3 = sym(3).table().unwrap();
        let f = FieldSpec::new(6, 1 << 20).unwrap();
        let a3 = crate::group::derived_subgroup(&s3, &Subgroup::whole(6));
        let sub = s3.sub_table(&a3);
        let t = CharTable::compute(&sub, &f).unwrap();
        let reps = irreducibles(&sub, &f, &t, sub.gens()).unwrap();
        let ratios = |r: &MatRep| -> Vec<u64> {
            let mut v: Vec<u64> = irreducibles_over(&s3, &f, &a3, r).unwrap().iter().map(|x| x.1).collect();
            v.sort();
            v
        };
        assert_eq!(ratios(&reps[0]), alloc::vec![1, 1]);
        // nontrivial linear characters of A3 are swapped by S3
        assert!(irreducibles_over(&s3, &f, &a3, &reps[1]).is_err());
        let c4 = crate::group::PermGroup::new(4, alloc::vec![Perm::parse("(1,2,3,4)", 4).unwrap()], 10).unwrap().table().unwrap();
        let f4 = FieldSpec::new(4, 1 << 20).unwrap();
        let c2 = crate::group::closure(&c4, &[c4.mul(c4.gens()[0], c4.gens()[0])]);
        let sub = c4.sub_table(&c2);
        let t = CharTable::compute(&sub, &f4).unwrap();
        let faithful = irreducibles(&sub, &f4, &t, sub.gens()).unwrap().into_iter().find(|r| r.images[1].get(0, 0) != 1).unwrap();
        let over = irreducibles_over(&c4, &f4, &c2, &faithful).unwrap();
        assert_eq!(over.len(), 2);
        for (chi, e) in &over {
            assert_eq!(*e, 1);
            for (k, &x) in c2.elems().iter().enumerate() {
                assert_eq!(chi.image(x as usize), faithful.image(k));
            }
        }
    }

    #[test]
    fn inertia_in_s3() {
        let g = sym(3).table().unwrap();
        let f = FieldSpec::new(6, 1 << 20).unwrap();
        let all = Subgroup::whole(6);
        let a3 = crate::group::derived_subgroup(&g, &all);
        let sub = g.sub_table(&a3);
        let t = CharTable::compute(&sub, &f).unwrap();
        for i in 0..3 {
            let vals: Vec<u64> = (0..3).map(|x| t.value(i, x)).collect();
            let expect = if t.degrees[i] == 1 && vals.iter().all(|&v| v == 1) { 6 } else { 3 };
            assert_eq!(inertia(&g, &all, &a3, &vals).order(), expect);
        }
    }
}
