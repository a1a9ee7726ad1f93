//! Conjugacy classes of subgroups.

use alloc::vec::Vec;
use hashbrown::HashMap;

use crate::error::{resource, Result};
use crate::group::{conjugate, join, normalizer, right_transversal, Group, Subgroup};

#[derive(Clone, Debug)]
pub struct SubgroupClass {
    pub rep: Subgroup,
    pub normalizer: Subgroup,
    /// Number of conjugates, `[G : N_G(rep)]`.
    pub size: usize,
}

pub const SUBGROUP_LIMIT: usize = 20_000;

/// All subgroups up to conjugacy, built upward by adjoining one element at a
/// time. Classes are ordered by order, then by element list.
pub fn subgroup_classes<G: Group + ?Sized>(g: &G) -> Result<Vec<SubgroupClass>> {
    let n = g.order();
    let all = Subgroup::whole(n);
    let mut seen: HashMap<Subgroup, usize> = HashMap::new();
    let mut classes: Vec<SubgroupClass> = Vec::new();
    let add = |h: Subgroup, seen: &mut HashMap<Subgroup, usize>, classes: &mut Vec<SubgroupClass>| -> Result<bool> {
        if seen.contains_key(&h) {
            return Ok(false);
        }
        let nh = normalizer(g, &h);
        let id = classes.len();
        let tr = right_transversal(g, &nh, &all);
        for &y in &tr {
            seen.insert(conjugate(g, &h, y), id);
        }
        if seen.len() > SUBGROUP_LIMIT {
            return Err(resource!("more than {SUBGROUP_LIMIT} subgroups"));
        }
        classes.push(SubgroupClass { rep: h, normalizer: nh, size: tr.len() });
        Ok(true)
    };
    add(Subgroup::trivial(n), &mut seen, &mut classes)?;
    let mut i = 0;
    while i < classes.len() {
        let h = classes[i].rep.clone();
        let nh = classes[i].normalizer.clone();
        i += 1;
        // Adjoining `y` and `y^k` for `k` in the normalizer gives conjugate results;
        // orbit representatives of N on G \ H are enough.
        let mut done = alloc::vec![false; n];
        let ngens = crate::group::small_gens(g, &nh);
        for y in 0..n {
            if done[y] || h.contains(y) {
                continue;
            }
            let mut orbit = alloc::vec![y];
            done[y] = true;
            let mut j = 0;
            while j < orbit.len() {
                let z = orbit[j];
                j += 1;
                for &s in &ngens {
                    let w = g.conj(z, s);
                    if !done[w] {
                        done[w] = true;
                        orbit.push(w);
                    }
                }
            }
            let k = join(g, &h, &[y]);
            add(k, &mut seen, &mut classes)?;
        }
    }
    classes.sort_by(|a, b| a.rep.cmp(&b.rep));
    Ok(classes)
}

/// Locate the class of an arbitrary subgroup: returns the class index and
/// `y` with `y^-1 h y = rep`.
pub fn locate<G: Group + ?Sized>(g: &G, classes: &[SubgroupClass], h: &Subgroup) -> Option<(usize, usize)> {
    for (i, c) in classes.iter().enumerate() {
        if c.rep.order() != h.order() {
            continue;
        }
        for y in 0..g.order() {
            if h.elems().iter().all(|&x| c.rep.contains(g.conj(x as usize, y))) {
                return Some((i, y));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::tests::sym;
    use crate::group::{closure, TableGroup};
    use crate::perm::Perm;
    use hashbrown::HashSet;

    /// Every subgroup, by closing under adjoining single elements.
    fn all_subgroups<G: Group>(g: &G) -> HashSet<Subgroup> {
        let mut found: HashSet<Subgroup> = HashSet::new();
        let mut stack = alloc::vec![Subgroup::trivial(g.order())];
        found.insert(stack[0].clone());
        while let Some(h) = stack.pop() {
            for y in 0..g.order() {
                let mut gens: Vec<usize> = h.elems().iter().map(|&x| x as usize).collect();
                gens.push(y);
                let k = closure(g, &gens);
                if found.insert(k.clone()) {
                    stack.push(k);
                }
            }
        }
        found
    }

    fn check(g: &TableGroup, expect_classes: usize) {
        let cl = subgroup_classes(g).unwrap();
        assert_eq!(cl.len(), expect_classes);
        let total: usize = cl.iter().map(|c| c.size).sum();
        assert_eq!(total, all_subgroups(g).len());
    }

    #[test]
    fn klein_four() {
        let a = Perm::parse("(1,2)", 4).unwrap();
        let b = Perm::parse("(3,4)", 4).unwrap();
        let g = crate::group::PermGroup::new(4, alloc::vec![a, b], 100).unwrap().table().unwrap();
        check(&g, 5);
    }

    #[test]
    fn a5_has_nine_classes() {
        let a = Perm::parse("(1,2,3,4,5)", 5).unwrap();
        let b = Perm::parse("(1,2,3)", 5).unwrap();
        let g = crate::group::PermGroup::new(5, alloc::vec![a, b], 100).unwrap().table().unwrap();
        assert_eq!(g.order(), 60);
        check(&g, 9);
    }

    #[test]
    fn s4_has_eleven_classes() {
        check(&sym(4).table().unwrap(), 11);
    }

    #[test]
    fn locate_finds_conjugator() {
        let g = sym(4).table().unwrap();
        let cl = subgroup_classes(&g).unwrap();
        for y in [3usize, 7, 11] {
            for c in &cl {
                let h = conjugate(&g, &c.rep, y);
                let (i, z) = locate(&g, &cl, &h).unwrap();
                assert_eq!(conjugate(&g, &h, z), cl[i].rep);
            }
        }
    }
}
