//! Character tables over `F_q` by the Burnside-Dixon method: characters are
//! read off common eigenvectors of the class multiplication matrices.

use alloc::vec::Vec;

use crate::error::{inconsistent, Result};
use crate::field::FieldSpec;
use crate::group::{conjugacy_classes, Group, Subgroup};
use crate::linalg::{Echelon, Mat};
use crate::poly;

#[derive(Clone, Debug)]
pub struct CharTable {
    /// Classes as sorted element lists; class 0 is the identity.
    pub classes: Vec<Vec<u32>>,
    pub class_of: Vec<u32>,
    pub inverse_class: Vec<usize>,
    /// `chars[i][r]`: value of character `i` on class `r`.
    pub chars: Vec<Vec<u64>>,
    pub degrees: Vec<u64>,
    pub order: usize,
}

impl CharTable {
    pub fn compute<G: Group + ?Sized>(g: &G, f: &FieldSpec) -> Result<Self> {
        let n = g.order();
        if (n as u64).is_multiple_of(f.q) {
            return Err(inconsistent!("field characteristic divides the group order"));
        }
        let classes = conjugacy_classes(g, &Subgroup::whole(n));
        let k = classes.len();
        let mut class_of = alloc::vec![0u32; n];
        for (i, c) in classes.iter().enumerate() {
            for &x in c {
                class_of[x as usize] = i as u32;
            }
        }
        let inverse_class: Vec<usize> =
            classes.iter().map(|c| class_of[g.inv(c[0] as usize)] as usize).collect();
        // a[r][s][t] = #{x in C_r : x^-1 z_t in C_s}
        let mut a = alloc::vec![0u32; k * k * k];
        for (t, ct) in classes.iter().enumerate() {
            let z = ct[0] as usize;
            for x in 0..n {
                let y = g.mul(g.inv(x), z);
                let r = class_of[x] as usize;
                let s = class_of[y] as usize;
                a[(r * k + s) * k + t] += 1;
            }
        }
        let class_mat = |r: usize| -> Mat {
            let mut m = Mat::zeros(k, k);
            for s in 0..k {
                for t in 0..k {
                    m.set(s, t, a[(r * k + s) * k + t] as u64 % f.q);
                }
            }
            m
        };
        let mats: Vec<Mat> = (0..k).map(class_mat).collect();

        let mut pending: Vec<Vec<Vec<u64>>> = alloc::vec![(0..k)
            .map(|i| {
                let mut v = alloc::vec![0u64; k];
                v[i] = 1;
                v
            })
            .collect()];
        let mut done: Vec<Vec<u64>> = Vec::new();
        let mut seed = 0x2545_f491_4f6c_dd1du64;
        let mut attempts = 0;
        while let Some(space) = pending.pop() {
            if space.len() == 1 {
                done.push(space.into_iter().next().unwrap());
                continue;
            }
            attempts += 1;
            if attempts > 64 * k + 64 {
                return Err(inconsistent!("class algebra did not split"));
            }
            let mut m = Mat::zeros(k, k);
            for r in 1..k {
                seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let c = (seed >> 33) % f.q;
                m = m.add(f, &mats[r].scale(f, c));
            }
            let parts = split_space(f, &m, &space)?;
            pending.extend(parts);
        }
        if done.len() != k {
            return Err(inconsistent!("found {} characters for {} classes", done.len(), k));
        }
        let mut chars = Vec::with_capacity(k);
        let mut degrees = Vec::with_capacity(k);
        let bound = (1..).find(|d: &u64| d * d > n as u64).unwrap();
        for mut w in done {
            let w0 = w[0];
            if w0 == 0 {
                return Err(inconsistent!("central character vanishes at the identity"));
            }
            let inv = f.inv(w0);
            for x in w.iter_mut() {
                *x = f.mul(*x, inv);
            }
            let mut s = 0;
            for r in 0..k {
                let term = f.mul(f.mul(w[r], w[inverse_class[r]]), f.inv(classes[r].len() as u64 % f.q));
                s = f.add(s, term);
            }
            let d2 = f.mul(n as u64 % f.q, f.inv(s));
            let d = f
                .small_sqrt(d2, bound)
                .ok_or_else(|| inconsistent!("degree square {d2} has no small root"))?;
            let chi: Vec<u64> =
                (0..k).map(|r| f.mul(f.mul(w[r], d), f.inv(classes[r].len() as u64 % f.q))).collect();
            chars.push(chi);
            degrees.push(d);
        }
        let mut idx: Vec<usize> = (0..k).collect();
        idx.sort_by(|&i, &j| degrees[i].cmp(&degrees[j]).then_with(|| chars[i].cmp(&chars[j])));
        let chars: Vec<Vec<u64>> = idx.iter().map(|&i| chars[i].clone()).collect();
        let degrees: Vec<u64> = idx.iter().map(|&i| degrees[i]).collect();
        let total: u64 = degrees.iter().map(|d| d * d).sum();
        if total != n as u64 {
            return Err(inconsistent!("degree squares sum to {total}, not {n}"));
        }
        Ok(CharTable { classes, class_of, inverse_class, chars, degrees, order: n })
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    /// Value of character `i` at element `x`.
    pub fn value(&self, i: usize, x: usize) -> u64 {
        self.chars[i][self.class_of[x] as usize]
    }

    /// `<a, b> = |G|^-1 sum_g a(g) b(g^-1)` for class functions given on classes.
    pub fn inner(&self, f: &FieldSpec, a: &[u64], b: &[u64]) -> u64 {
        let mut s = 0;
        for r in 0..self.classes.len() {
            let t = f.mul(f.mul(a[r], b[self.inverse_class[r]]), self.classes[r].len() as u64 % f.q);
            s = f.add(s, t);
        }
        f.mul(s, f.inv(self.order as u64 % f.q))
    }
}

/// Split an `m`-invariant subspace (rows are basis vectors) into eigenspaces.
fn split_space(f: &FieldSpec, m: &Mat, space: &[Vec<u64>]) -> Result<Vec<Vec<Vec<u64>>>> {
    let dim = space.len();
    let mut ech = Echelon::new();
    for v in space {
        ech.insert(f, v);
    }
    let basis = ech.basis.clone();
    // restriction: column i holds coordinates of m * b_i
    let mut c = Mat::zeros(dim, dim);
    for (i, b) in basis.iter().enumerate() {
        let img = m.mul_vec(f, b);
        let co = ech.coords(&img);
        for j in 0..dim {
            c.set(j, i, co[j]);
        }
    }
    let cp = c.charpoly(f);
    let roots = poly::roots(f, &cp);
    let mut out = Vec::new();
    let mut total = 0;
    for lam in roots {
        let mut sh = c.clone();
        for i in 0..dim {
            let v = f.sub(sh.get(i, i), lam);
            sh.set(i, i, v);
        }
        let ns = sh.nullspace(f);
        total += ns.len();
        let vecs: Vec<Vec<u64>> = ns
            .iter()
            .map(|u| {
                let mut v = alloc::vec![0u64; basis[0].len()];
                for (ui, b) in u.iter().zip(&basis) {
                    for (vj, bj) in v.iter_mut().zip(b) {
                        *vj = f.add(*vj, f.mul(*ui, *bj));
                    }
                }
                v
            })
            .collect();
        out.push(vecs);
    }
    if total != dim {
        return Err(inconsistent!("class matrix not diagonalizable over the field"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::tests::sym;
    use crate::perm::Perm;

    #[test]
    fn s4_degrees() {
        let f = FieldSpec::new(24, 1 << 20).unwrap();
        let t = CharTable::compute(&sym(4).table().unwrap(), &f).unwrap();
        assert_eq!(t.degrees, alloc::vec![1, 1, 2, 3, 3]);
        for i in 0..5 {
            for j in 0..5 {
                let ip = t.inner(&f, &t.chars[i], &t.chars[j]);
                assert_eq!(ip, (i == j) as u64);
            }
        }
    }

    #[test]
    fn a5_degrees() {
        let a = Perm::parse("(1,2,3,4,5)", 5).unwrap();
        let b = Perm::parse("(1,2,3)", 5).unwrap();
        let g = crate::group::PermGroup::new(5, alloc::vec![a, b], 100).unwrap().table().unwrap();
        let f = FieldSpec::new(60, 1 << 20).unwrap();
        let t = CharTable::compute(&g, &f).unwrap();
        assert_eq!(t.degrees, alloc::vec![1, 3, 3, 4, 5]);
    }
}
