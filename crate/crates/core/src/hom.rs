//! Homomorphisms between enumerated groups.

use alloc::vec::Vec;

use crate::error::{invalid, Result};
use crate::group::{Group, Subgroup};

/// A homomorphism stored as a full element map `source -> target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    map: Vec<u32>,
    target_order: usize,
}

impl GroupHom {
    /// Build the homomorphism sending `gens[i]` to `images[i]`.
    ///
    /// The graph `<(g_i, h_i)>` is enumerated inside the direct product; it
    /// defines a map exactly when its order equals that of the source.
    pub fn from_images<G: Group + ?Sized, H: Group + ?Sized>(
        src: &G,
        tgt: &H,
        gens: &[usize],
        images: &[usize],
    ) -> Result<Self> {
        if gens.len() != images.len() {
            return Err(invalid!("{} generators but {} images", gens.len(), images.len()));
        }
        let n = src.order();
        let mut map = alloc::vec![u32::MAX; n];
        map[0] = 0;
        let mut queue = alloc::vec![0usize];
        let mut i = 0;
        while i < queue.len() {
            let x = queue[i];
            i += 1;
            let fx = map[x] as usize;
            for (&s, &t) in gens.iter().zip(images) {
                let y = src.mul(x, s);
                let fy = tgt.mul(fx, t) as u32;
                if map[y] == u32::MAX {
                    map[y] = fy;
                    queue.push(y);
                } else if map[y] != fy {
                    return Err(invalid!("generator images do not define a homomorphism"));
                }
            }
        }
        if queue.len() != n {
            return Err(invalid!("generators do not generate the source group"));
        }
        Ok(GroupHom { map, target_order: tgt.order() })
    }

    pub fn from_map(map: Vec<u32>, target_order: usize) -> Self {
        GroupHom { map, target_order }
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x] as usize
    }

    pub fn map(&self) -> &[u32] {
        &self.map
    }

    pub fn kernel(&self) -> Subgroup {
        let e = (0..self.map.len() as u32).filter(|&x| self.map[x as usize] == 0).collect();
        Subgroup::from_elems(self.map.len(), e)
    }

    pub fn image_of(&self, h: &Subgroup) -> Subgroup {
        Subgroup::from_elems(self.target_order, h.elems().iter().map(|&x| self.map[x as usize]).collect())
    }

    pub fn image(&self) -> Subgroup {
        Subgroup::from_elems(self.target_order, self.map.clone())
    }

    pub fn is_surjective(&self) -> bool {
        self.image().order() == self.target_order
    }

    /// Check the homomorphism property on every pair (test helper; quadratic).
    pub fn verify<G: Group + ?Sized, H: Group + ?Sized>(&self, src: &G, tgt: &H) -> bool {
        (0..src.order()).all(|a| {
            (0..src.order()).all(|b| self.apply(src.mul(a, b)) == tgt.mul(self.apply(a), self.apply(b)))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::tests::sym;

    #[test]
    fn sign_map() {
        let s3 = sym(3).table().unwrap();
        let c2 = crate::group::TableGroup::from_table(2, alloc::vec![0, 1, 1, 0]).unwrap();
        // both generators of S3 (3-cycle, transposition)
        let gens = [s3.gens()[0], s3.gens()[1]];
        let imgs: Vec<usize> = gens.iter().map(|&g| if s3.elt_order(g) == 2 { 1 } else { 0 }).collect();
        let h = GroupHom::from_images(&s3, &c2, &gens, &imgs).unwrap();
        assert!(h.verify(&s3, &c2));
        assert_eq!(h.kernel().order(), 3);
        let bad: Vec<usize> = gens.iter().map(|&g| if s3.elt_order(g) == 3 { 1 } else { 0 }).collect();
        assert!(GroupHom::from_images(&s3, &c2, &gens, &bad).is_err());
    }
}
