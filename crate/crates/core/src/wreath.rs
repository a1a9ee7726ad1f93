//! Permutational wreath products `B wr_X Q`.
//!
//! An element is a tuple of sections `(b_x)` together with `q` in `Q`; it acts
//! on `Omega x X` by `(w, x) -> (b_x(w), q(x))`, so products follow
//! `(g h)_x = g_{q_h(x)} h_x`.

use alloc::vec::Vec;

use crate::error::{resource, Result};
use crate::group::{Group, PermGroup, TableGroup};
use crate::perm::Perm;

/// Implicit wreath product: elements are encoded as
/// `q + |Q| * sum_x b_x |B|^x`.
#[derive(Clone, Debug)]
pub struct WreathGroup {
    pub base: TableGroup,
    pub top: TableGroup,
    /// Action of each element of the top group on `X`.
    top_action: Vec<Vec<u32>>,
    d: usize,
    order: usize,
}

impl WreathGroup {
    /// `top` must be a permutation group on `X = {0..d-1}`.
    pub fn new(base: TableGroup, top: &PermGroup) -> Result<Self> {
        let d = top.degree();
        let mut order = top.order();
        for _ in 0..d {
            order = order
                .checked_mul(base.order())
                .filter(|&o| o <= u32::MAX as usize)
                .ok_or_else(|| resource!("wreath product too large to index"))?;
        }
        let top_action = top.elements().iter().map(|p| p.images().to_vec()).collect();
        Ok(WreathGroup { base, top: top.table()?, top_action, d, order })
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn encode(&self, sections: &[usize], q: usize) -> usize {
        let nb = self.base.order();
        let mut b = 0usize;
        for x in (0..self.d).rev() {
            b = b * nb + sections[x];
        }
        q + self.top.order() * b
    }

    pub fn decode(&self, g: usize) -> (Vec<usize>, usize) {
        let nq = self.top.order();
        let nb = self.base.order();
        let q = g % nq;
        let mut b = g / nq;
        let mut s = Vec::with_capacity(self.d);
        for _ in 0..self.d {
            s.push(b % nb);
            b /= nb;
        }
        (s, q)
    }

    pub fn top_part(&self, g: usize) -> usize {
        g % self.top.order()
    }

    pub fn section(&self, g: usize, x: usize) -> usize {
        let mut b = g / self.top.order();
        for _ in 0..x {
            b /= self.base.order();
        }
        b % self.base.order()
    }

    #[inline]
    pub fn act(&self, q: usize, x: usize) -> usize {
        self.top_action[q][x] as usize
    }

    pub fn base_element(&self, sections: &[usize]) -> usize {
        self.encode(sections, 0)
    }

    pub fn top_element(&self, q: usize) -> usize {
        q
    }

    /// Permutation on `Omega x X` (point `(w, x)` is `x * |Omega| + w`) given
    /// permutations for the base elements.
    pub fn to_perm(&self, g: usize, base_perms: &[Perm]) -> Perm {
        let (s, q) = self.decode(g);
        let m = base_perms[0].degree();
        let mut img = alloc::vec![0u32; m * self.d];
        for x in 0..self.d {
            let qx = self.act(q, x);
            for w in 0..m {
                img[x * m + w] = (qx * m + base_perms[s[x]].apply(w)) as u32;
            }
        }
        Perm::from_images_unchecked(img)
    }
}

impl Group for WreathGroup {
    fn order(&self) -> usize {
        self.order
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        let (ga, qa) = self.decode(a);
        let (gb, qb) = self.decode(b);
        let s: Vec<usize> = (0..self.d).map(|x| self.base.mul(ga[self.act(qb, x)], gb[x])).collect();
        self.encode(&s, self.top.mul(qa, qb))
    }

    fn inv(&self, a: usize) -> usize {
        let (ga, qa) = self.decode(a);
        let qi = self.top.inv(qa);
        let s: Vec<usize> = (0..self.d).map(|x| self.base.inv(ga[self.act(qi, x)])).collect();
        self.encode(&s, qi)
    }
}

/// The wreath product as a permutation group on `Omega x X`, generated by the
/// base generators in every coordinate and the top generators.
pub fn wreath_perm_group(base_gens: &[Perm], base_degree: usize, top: &PermGroup, limit: usize) -> Result<PermGroup> {
    let d = top.degree();
    let m = base_degree;
    let mut gens = Vec::new();
    for b in base_gens {
        for x in 0..d {
            gens.push(embed_base(b, x, d));
        }
    }
    for q in top.gens() {
        gens.push(embed_top(q, m));
    }
    PermGroup::new(m * d, gens, limit)
}

/// Base element acting as `b` in coordinate `x` only.
pub fn embed_base(b: &Perm, x: usize, d: usize) -> Perm {
    let m = b.degree();
    let mut img: Vec<u32> = (0..(m * d) as u32).collect();
    for w in 0..m {
        img[x * m + w] = (x * m + b.apply(w)) as u32;
    }
    Perm::from_images_unchecked(img)
}

pub fn embed_top(q: &Perm, m: usize) -> Perm {
    let d = q.degree();
    let mut img = alloc::vec![0u32; m * d];
    for x in 0..d {
        for w in 0..m {
            img[x * m + w] = (q.apply(x) * m + w) as u32;
        }
    }
    Perm::from_images_unchecked(img)
}
