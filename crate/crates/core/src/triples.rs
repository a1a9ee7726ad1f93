//! Representation triples `(rho, f)`: the catalog of equivalence classes,
//! the cocycle of a triple, lookup, extensions and zeta functions.
//!
//! A triple is classified by the image `f(G)` up to conjugacy in `B` and the
//! class of its extension cocycle: with intertwiners `T_a` between `rho` and
//! its conjugates, `T_a T_b = c(a, b) rho(k) T_ab` where `s_a s_b = k s_ab`.

use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::character::CharTable;
use crate::cohomology::{central_extension, projective_characters, Cocycle2, Multiplier};
use crate::dirichlet::{DirichletPoly, Q};
use crate::error::{inconsistent, invalid, Result};
use crate::field::FieldSpec;
use crate::group::{right_transversal, small_gens, Group, Subgroup, TableGroup};
use crate::linalg::Mat;
use crate::rep::{intertwiners, MatRep};
use crate::subgroups::{locate, subgroup_classes, SubgroupClass};

/// One equivalence class: a subgroup class representative and a class of its
/// multiplier.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub class: usize,
    pub coords: Vec<u64>,
    /// Extension cocycle on the representative (local indices).
    pub cocycle: Cocycle2,
    /// `(degree, count)` of the projective irreducibles for the cocycle.
    pub degrees: Vec<(u64, u64)>,
}

#[derive(Clone, Debug)]
pub struct TripleCatalog {
    pub field: FieldSpec,
    pub b: TableGroup,
    pub classes: Vec<SubgroupClass>,
    pub reps: Vec<TableGroup>,
    pub mults: Vec<Multiplier>,
    pub entries: Vec<CatalogEntry>,
    first: Vec<usize>,
    averaged: Vec<Vec<Vec<(usize, Q)>>>,
}

impl TripleCatalog {
    pub fn build(b: &TableGroup, field: FieldSpec) -> Result<Self> {
        let classes = subgroup_classes(b)?;
        let mut reps = Vec::new();
        let mut mults = Vec::new();
        let mut entries = Vec::new();
        let mut first = Vec::new();
        let mut averaged = Vec::new();
        for (ci, c) in classes.iter().enumerate() {
            let h = TableGroup::from_subgroup(b, &c.rep)?;
            let m = Multiplier::compute(&h)?;
            first.push(entries.len());
            let all = m.classes();
            for coords in &all {
                let cocycle = m.cocycle(coords, field.e)?;
                let (_, t, sel) = projective_characters(&h, &field, &cocycle)?;
                let mut degs: Vec<(u64, u64)> = Vec::new();
                for &i in &sel {
                    match degs.iter_mut().find(|(d, _)| *d == t.degrees[i]) {
                        Some(e) => e.1 += 1,
                        None => degs.push((t.degrees[i], 1)),
                    }
                }
                degs.sort_unstable();
                entries.push(CatalogEntry { class: ci, coords: coords.clone(), cocycle, degrees: degs });
            }
            // N(H)/H acts on the classes; lookups average over it
            let tr = right_transversal(b, &c.rep, &c.normalizer);
            let w = Q::new(1, tr.len() as i128);
            let mut av = Vec::new();
            for coords in &all {
                let mut acc: Vec<(usize, Q)> = Vec::new();
                for &n in &tr {
                    let conj: Vec<usize> =
                        c.rep.elems().iter().map(|&x| c.rep.position(b.conj(x as usize, n)).unwrap()).collect();
                    let moved = if all.len() == 1 { coords.clone() } else { m.transport(coords, &conj, field.e)? };
                    let idx = first[ci] + coord_index(&m.invariants(), &moved);
                    match acc.iter_mut().find(|(j, _)| *j == idx) {
                        Some(e) => e.1 += w,
                        None => acc.push((idx, w)),
                    }
                }
                acc.sort_by_key(|&(j, _)| j);
                av.push(acc);
            }
            averaged.push(av);
            reps.push(h);
            mults.push(m);
        }
        Ok(TripleCatalog { field, b: b.clone(), classes, reps, mults, entries, first, averaged })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry_index(&self, class: usize, coords: &[u64]) -> usize {
        self.first[class] + coord_index(&self.mults[class].invariants(), coords)
    }

    /// The entry of `(trivial representation, identity of B)`.
    pub fn identity_entry(&self) -> usize {
        let top = self.classes.len() - 1;
        debug_assert_eq!(self.classes[top].rep.order(), self.b.order());
        self.entry_index(top, &alloc::vec![0; self.mults[top].invariants().len()])
    }

    pub fn subgroup(&self, entry: usize) -> &Subgroup {
        &self.classes[self.entries[entry].class].rep
    }

    /// `[B : N_B(H)]` for the entry's subgroup.
    pub fn conjugates(&self, entry: usize) -> usize {
        self.classes[self.entries[entry].class].size
    }

    pub fn index(&self, entry: usize) -> usize {
        self.b.order() / self.subgroup(entry).order()
    }

    /// `zeta_Theta` truncated at `n`.
    pub fn zeta(&self, entry: usize, n: u64) -> DirichletPoly {
        DirichletPoly::from_counts(n, &self.entries[entry].degrees)
    }

    /// Class of a cocycle on a subgroup `s` of `B` (values indexed by local
    /// positions in `s`): the representative class and `y` with
    /// `y^-1 s y = rep`, together with the class coordinates after transport.
    pub fn classify(&self, s: &Subgroup, gamma: &Cocycle2) -> Result<(usize, usize, Vec<u64>)> {
        let (ci, y) = locate(&self.b, &self.classes, s).ok_or_else(|| inconsistent!("subgroup not found among class representatives"))?;
        let m = &self.mults[ci];
        if m.invariants().is_empty() {
            return Ok((ci, y, Vec::new()));
        }
        let rep = &self.classes[ci].rep;
        let yi = self.b.inv(y);
        let pos: Vec<usize> = rep.elems().iter().map(|&u| s.position(self.b.conj(u as usize, yi)).unwrap()).collect();
        let k = rep.order();
        let mut vals = alloc::vec![0u64; k * k];
        for u in 0..k {
            for v in 0..k {
                vals[u * k + v] = gamma.get(pos[u], pos[v]);
            }
        }
        let coords = m.classify(&Cocycle2 { n: k, e: gamma.e, vals })?;
        Ok((ci, y, coords))
    }

    /// Entry reached by conjugating onto the representative (no averaging)
    /// and the conjugating element.
    pub fn lookup_cocycle(&self, s: &Subgroup, gamma: &Cocycle2) -> Result<(usize, usize)> {
        let (ci, y, coords) = self.classify(s, gamma)?;
        Ok((self.entry_index(ci, &coords), y))
    }

    /// Entries with weights, averaged over the normalizer of the
    /// representative; the weights sum to one.
    pub fn lookup_averaged(&self, s: &Subgroup, gamma: &Cocycle2) -> Result<&[(usize, Q)]> {
        let (ci, _, coords) = self.classify(s, gamma)?;
        let j = coord_index(&self.mults[ci].invariants(), &coords);
        Ok(&self.averaged[ci][j])
    }

    /// As [`Self::lookup_averaged`] for a subgroup whose multiplier is
    /// trivial (no cocycle needed); `None` otherwise.
    pub fn lookup_trivial(&self, s: &Subgroup) -> Option<usize> {
        let (ci, _) = locate(&self.b, &self.classes, s)?;
        if self.mults[ci].invariants().is_empty() {
            Some(self.first[ci])
        } else {
            None
        }
    }

    /// Class index of a subgroup of `B` and whether its multiplier is trivial.
    pub fn locate(&self, s: &Subgroup) -> Option<(usize, usize)> {
        locate(&self.b, &self.classes, s)
    }

    /// A concrete triple for an entry: the central extension of the
    /// representative by its cocycle class, marked by the projection, with
    /// the faithful character of the central kernel.
    pub fn entry_triple(&self, entry: usize) -> Result<RepTriple> {
        let en = &self.entries[entry];
        let h = &self.reps[en.class];
        let rep = &self.classes[en.class].rep;
        let beta = en.cocycle.neg();
        let o = beta.value_order().max(1);
        let ext = central_extension(h, &beta, o)?;
        let n = h.order();
        let marking: Vec<u32> = (0..ext.order()).map(|x| rep.elems()[x % n]).collect();
        let f = &self.field;
        let lam = f.root(f.e / o);
        // kernel {(a, 1)} in local order a = 0..o
        let images = (0..o).map(|a| Mat::scalar(1, f.pow(lam, a))).collect();
        RepTriple::new(ext, marking, self.b.order(), MatRep { dim: 1, images }, f)
    }
}

fn coord_index(inv: &[u64], coords: &[u64]) -> usize {
    let mut idx = 0usize;
    for (d, c) in inv.iter().zip(coords) {
        idx = idx * *d as usize + *c as usize;
    }
    idx
}

/// `(rho, f)`: `rho` an irreducible representation of `N = ker f`, inert in
/// the source.
#[derive(Clone, Debug)]
pub struct RepTriple {
    pub src: TableGroup,
    /// `f` on elements of the source, as elements of `B`.
    pub marking: Vec<u32>,
    pub b_order: usize,
    pub kernel: Subgroup,
    pub ker_table: TableGroup,
    /// Indexed by positions in `kernel`.
    pub rho: MatRep,
}

impl RepTriple {
    pub fn new(src: TableGroup, marking: Vec<u32>, b_order: usize, rho: MatRep, f: &FieldSpec) -> Result<Self> {
        let n = src.order();
        if marking.len() != n {
            return Err(invalid!("marking must give an image for every element"));
        }
        let kernel = Subgroup::from_elems(n, (0..n as u32).filter(|&x| marking[x as usize] == 0).collect());
        let ker_table = TableGroup::from_subgroup(&src, &kernel)?;
        if rho.images.len() != kernel.order() {
            return Err(invalid!("representation is not on the kernel of the marking"));
        }
        let t = CharTable::compute(&ker_table, f)?;
        if !rho.is_irreducible(f, &t) {
            return Err(invalid!("representation is not irreducible"));
        }
        let tr = RepTriple { src, marking, b_order, kernel, ker_table, rho };
        let inertia = tr.inertia(f);
        if inertia.order() != n {
            return Err(invalid!("representation is not inert in the source"));
        }
        Ok(tr)
    }

    /// Elements of the source fixing `rho` up to equivalence.
    pub fn inertia(&self, f: &FieldSpec) -> Subgroup {
        let n = self.src.order();
        let gens = small_gens(&self.src, &self.kernel);
        let mats: Vec<&Mat> = gens.iter().map(|&k| &self.rho.images[self.kernel.position(k).unwrap()]).collect();
        let elems = (0..n as u32)
            .filter(|&y| {
                if mats.is_empty() {
                    return true;
                }
                let conj: Vec<&Mat> = gens
                    .iter()
                    .map(|&k| &self.rho.images[self.kernel.position(self.src.conj(k, self.src.inv(y as usize))).unwrap()])
                    .collect();
                intertwiners(f, &mats, &conj).iter().any(|t| t.det(f) != 0)
            })
            .collect();
        Subgroup::from_elems(n, elems)
    }

    /// Image of the marking and the extension cocycle on it.
    pub fn cocycle(&self, f: &FieldSpec) -> Result<(Subgroup, Cocycle2)> {
        extension_cocycle(&self.src, &self.marking, self.b_order, &Subgroup::whole(self.src.order()), &self.kernel, &self.rho, f)
    }

    pub fn image(&self) -> Subgroup {
        Subgroup::from_elems(self.b_order, self.marking.clone())
    }

    pub fn contragredient(&self) -> RepTriple {
        RepTriple { rho: self.rho.contragredient(&self.ker_table), ..self.clone() }
    }

    /// `sum (deg chi / deg rho)^-s` over the irreducibles `chi` of the source
    /// lying over `rho`.
    pub fn zeta(&self, f: &FieldSpec, n: u64) -> Result<DirichletPoly> {
        let t = CharTable::compute(&self.src, f)?;
        let kt = CharTable::compute(&self.ker_table, f)?;
        let rc = self.rho.character(f, &kt);
        let mut p = DirichletPoly::zero(n);
        for (i, chi) in t.chars.iter().enumerate() {
            let restricted: Vec<u64> = kt.classes.iter().map(|c| chi[t.class_of[self.kernel.elems()[c[0] as usize] as usize] as usize]).collect();
            if kt.inner(f, &restricted, &rc) != 0 {
                p.add_term(t.degrees[i] / self.rho.dim as u64, Q::from_integer(1));
            }
        }
        Ok(p)
    }

    /// Triples over `C` obtained by extending `rho` to `L = ker(g f)`, for a
    /// homomorphism `g: B -> C` given by images of the elements of `B`.
    pub fn g_extensions(&self, g_map: &[u32], c_order: usize, f: &FieldSpec) -> Result<Vec<RepTriple>> {
        let n = self.src.order();
        let comp: Vec<u32> = self.marking.iter().map(|&b| g_map[b as usize]).collect();
        let l = Subgroup::from_elems(n, (0..n as u32).filter(|&x| comp[x as usize] == 0).collect());
        let lt = TableGroup::from_subgroup(&self.src, &l)?;
        let t = CharTable::compute(&lt, f)?;
        let kt = CharTable::compute(&self.ker_table, f)?;
        let rc = self.rho.character(f, &kt);
        let mut out = Vec::new();
        for i in 0..t.chars.len() {
            let restricted: Vec<u64> = kt
                .classes
                .iter()
                .map(|c| t.value(i, l.position(self.kernel.elems()[c[0] as usize] as usize).unwrap()))
                .collect();
            if kt.inner(f, &restricted, &rc) == 0 {
                continue;
            }
            let r = crate::rep::irreducible_from_character(&lt, f, &t, i, lt.gens())?;
            // inertia of the character in the source
            let vals: Vec<u64> = (0..l.order()).map(|x| t.value(i, x)).collect();
            let inert = crate::rep::inertia(&self.src, &Subgroup::whole(n), &l, &vals);
            let st = TableGroup::from_subgroup(&self.src, &inert)?;
            let marking: Vec<u32> = inert.elems().iter().map(|&x| comp[x as usize]).collect();
            // the kernel of the new marking is L, listed in the same order
            out.push(RepTriple::new(st, marking, c_order, r, f)?);
        }
        Ok(out)
    }
}

/// Extension cocycle of `rho` (a representation of the normal subgroup `n`,
/// indexed by positions in `n`) over the subgroup `inertia` of `g`, pushed to
/// its image under `marking` in a group of order `b_order`. Returns the image
/// and the cocycle in local positions of the image.
pub fn extension_cocycle<G: Group + ?Sized>(
    g: &G,
    marking: &[u32],
    b_order: usize,
    inertia: &Subgroup,
    n: &Subgroup,
    rho: &MatRep,
    f: &FieldSpec,
) -> Result<(Subgroup, Cocycle2)> {
    let img = Subgroup::from_elems(b_order, inertia.elems().iter().map(|&x| marking[x as usize]).collect());
    let m = img.order();
    let mut s = alloc::vec![usize::MAX; m];
    for &x in inertia.elems() {
        let a = img.position(marking[x as usize] as usize).unwrap();
        if s[a] == usize::MAX {
            s[a] = x as usize;
        }
    }
    if s[0] != 0 {
        return Err(inconsistent!("identity of the image is not marked by the identity"));
    }
    let d = rho.dim;
    let ngens = small_gens(g, n);
    let src_mats: Vec<&Mat> = ngens.iter().map(|&k| &rho.images[n.position(k).unwrap()]).collect();
    let mut t: Vec<Mat> = Vec::with_capacity(m);
    for &sa in &s {
        if src_mats.is_empty() || sa == 0 {
            t.push(Mat::identity(d));
            continue;
        }
        let sai = g.inv(sa);
        let tgt: Vec<&Mat> =
            ngens.iter().map(|&k| &rho.images[n.position(g.mul(g.mul(sa, k), sai)).unwrap()]).collect();
        let tm = intertwiners(f, &src_mats, &tgt)
            .into_iter()
            .find(|x| x.det(f) != 0)
            .ok_or_else(|| inconsistent!("representation is not inert"))?;
        t.push(tm);
    }
    let mut vals = alloc::vec![0u64; m * m];
    for a in 1..m {
        for b in 1..m {
            let sab = g.mul(s[a], s[b]);
            let ab = img.position(marking[sab] as usize).unwrap();
            let k = g.mul(sab, g.inv(s[ab]));
            let lhs = t[a].mul(f, &t[b]);
            let rhs = rho.images[n.position(k).ok_or_else(|| inconsistent!("marking kernel mismatch"))?].mul(f, &t[ab]);
            let c = scalar_ratio(f, &lhs, &rhs)?;
            vals[a * m + b] = f.dlog(c).ok_or_else(|| inconsistent!("cocycle value is not a root of unity"))?;
        }
    }
    Ok((img, Cocycle2 { n: m, e: f.e, vals }))
}

/// `c` with `a = c b`, for matrices known to be proportional.
pub(crate) fn scalar_ratio(f: &FieldSpec, a: &Mat, b: &Mat) -> Result<u64> {
    let i = b.data.iter().position(|&x| x != 0).ok_or_else(|| inconsistent!("zero intertwiner"))?;
    let c = f.mul(a.data[i], f.inv(b.data[i]));
    if a.data.iter().zip(&b.data).any(|(&x, &y)| x != f.mul(c, y)) {
        return Err(inconsistent!("intertwiner products are not proportional"));
    }
    Ok(c)
}

/// Weighted classification of the irreducible representations of
/// `K = ker(f)` in a finite group `G` with `f: G -> B`: each `psi` adds
/// `(deg psi)^-s` spread over the catalog entries of its triple. This is the
/// vector `zeta_{G, Theta}` computed directly.
pub fn classify_kernel_irreducibles(
    g: &TableGroup,
    marking: &[u32],
    cat: &TripleCatalog,
    n_trunc: u64,
) -> Result<Vec<DirichletPoly>> {
    let f = &cat.field;
    let n = g.order();
    let k = Subgroup::from_elems(n, (0..n as u32).filter(|&x| marking[x as usize] == 0).collect());
    let kt = TableGroup::from_subgroup(g, &k)?;
    let t = CharTable::compute(&kt, f)?;
    let tr = right_transversal(g, &k, &Subgroup::whole(n));
    let mut out = alloc::vec![DirichletPoly::zero(n_trunc); cat.len()];
    let mut memo: HashMap<(Vec<u32>, Vec<u64>), Vec<(usize, Q)>> = HashMap::new();
    for i in 0..t.chars.len() {
        let vals: Vec<u64> = (0..k.order()).map(|x| t.value(i, x)).collect();
        let mut inert = Vec::new();
        for &y in &tr {
            if crate::rep::conjugate_values(g, &k, &vals, y) == vals {
                for &x in k.elems() {
                    inert.push(g.mul(x as usize, y) as u32);
                }
            }
        }
        let inert = Subgroup::from_elems(n, inert);
        let img = Subgroup::from_elems(cat.b.order(), inert.elems().iter().map(|&x| marking[x as usize]).collect());
        let weights: Vec<(usize, Q)> = if let Some(e) = cat.lookup_trivial(&img) {
            alloc::vec![(e, Q::from_integer(1))]
        } else {
            let rho = crate::rep::irreducible_from_character(&kt, f, &t, i, kt.gens())?;
            let (img, gamma) = extension_cocycle(g, marking, cat.b.order(), &inert, &k, &rho, f)?;
            let key = (img.elems().to_vec(), gamma.vals.clone());
            match memo.get(&key) {
                Some(w) => w.clone(),
                None => {
                    let w = cat.lookup_averaged(&img, &gamma)?.to_vec();
                    memo.insert(key, w.clone());
                    w
                }
            }
        };
        for (e, w) in weights {
            out[e].add_term(t.degrees[i], w);
        }
    }
    Ok(out)
}

/// `zeta_G = sum_Theta zeta_{G,Theta} zeta_{Theta-dual} [B : H]^{-1-s}`.
pub fn assemble(cat: &TripleCatalog, z: &[DirichletPoly]) -> Result<DirichletPoly> {
    let n = z.first().map_or(1, |p| p.n);
    let mut total = DirichletPoly::zero(n);
    for (e, zp) in z.iter().enumerate() {
        if zp.is_empty() {
            continue;
        }
        let i = cat.index(e) as u64;
        let factor = DirichletPoly::monomial(n, Q::new(1, i as i128), i);
        total = total.add(&zp.mul(&cat.zeta(e, n))?.mul(&factor)?)?;
    }
    Ok(total)
}

/// Degree counts of the irreducible representations of a finite group.
pub fn group_zeta<G: Group + ?Sized>(g: &G, f: &FieldSpec, n: u64) -> Result<DirichletPoly> {
    let t = CharTable::compute(g, f)?;
    let mut p = DirichletPoly::zero(n);
    for &d in &t.degrees {
        p.add_term(d, Q::from_integer(1));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::PermGroup;
    use crate::perm::Perm;
    use alloc::string::ToString;

    fn pg(deg: usize, gens: &[&str]) -> TableGroup {
        let g = gens.iter().map(|s| Perm::parse(s, deg).unwrap()).collect();
        PermGroup::new(deg, g, 10_000).unwrap().table().unwrap()
    }

    fn field() -> FieldSpec {
        FieldSpec::new(120, 1 << 20).unwrap()
    }

    #[test]
    fn catalog_sizes() {
        let f = field();
        assert_eq!(TripleCatalog::build(&TableGroup::trivial(), f).unwrap().len(), 1);
        assert_eq!(TripleCatalog::build(&pg(2, &["(1,2)"]), f).unwrap().len(), 2);
        let v4 = pg(4, &["(1,2)", "(3,4)"]);
        let cat = TripleCatalog::build(&v4, f).unwrap();
        assert_eq!(cat.len(), 6);
        let top = cat.classes.len() - 1;
        let z: Vec<_> = (0..2).map(|c| cat.zeta(cat.entry_index(top, &[c]), 10)).collect();
        assert_eq!(z[0], DirichletPoly::monomial(10, Q::from_integer(4), 1));
        assert_eq!(z[1], DirichletPoly::monomial(10, Q::from_integer(1), 2));
    }

    #[test]
    fn entries_look_up_to_themselves() {
        let f = field();
        for b in [pg(4, &["(1,2)", "(3,4)"]), pg(4, &["(1,2,3,4)", "(1,3)"]), pg(3, &["(1,2,3)", "(1,2)"])] {
            let cat = TripleCatalog::build(&b, f).unwrap();
            for e in 0..cat.len() {
                let t = cat.entry_triple(e).unwrap();
                let (img, gamma) = t.cocycle(&f).unwrap();
                assert!(gamma.is_cocycle(&TableGroup::from_subgroup(&b, &img).unwrap()));
                let (idx, y) = cat.lookup_cocycle(&img, &gamma).unwrap();
                assert_eq!(idx, e);
                assert_eq!(y, 0);
                let dual = t.contragredient().contragredient();
                assert_eq!(cat.lookup_cocycle(&img, &dual.cocycle(&f).unwrap().1).unwrap().0, e);
                assert_eq!(t.zeta(&f, 100).unwrap(), cat.zeta(e, 100));
            }
        }
    }

    /// The faithful character of the center of an order-8 group `g` with
    /// `g / Z = V4`: its triple over V4, looked up in the catalog.
    fn center_triple_coords(g: TableGroup) -> Vec<u64> {
        let f = field();
        let v4 = pg(4, &["(1,2)(3,4)", "(1,3)(2,4)"]);
        let center: Vec<usize> = (0..8).filter(|&x| (0..8).all(|y| g.mul(x, y) == g.mul(y, x))).collect();
        assert_eq!(center.len(), 2);
        let zc = center[1];
        // marking: quotient by the center, realized on V4 through cosets
        let mut cos = alloc::vec![u32::MAX; 8];
        let mut reps = Vec::new();
        for x in 0..8 {
            if cos[x] == u32::MAX {
                cos[x] = reps.len() as u32;
                cos[g.mul(x, zc)] = reps.len() as u32;
                reps.push(x);
            }
        }
        // identify G/Z with v4 by matching multiplication
        let quot = TableGroup::from_table(4, (0..16).map(|i| cos[g.mul(reps[i / 4], reps[i % 4])]).collect()).unwrap();
        let iso = find_iso(&quot, &v4).unwrap();
        let marking: Vec<u32> = (0..8).map(|x| iso[cos[x] as usize] as u32).collect();
        let rho = MatRep { dim: 1, images: alloc::vec![Mat::scalar(1, 1), Mat::scalar(1, f.q - 1)] };
        let t = RepTriple::new(g, marking, 4, rho, &f).unwrap();
        let cat = TripleCatalog::build(&v4, f).unwrap();
        let (img, gamma) = t.cocycle(&f).unwrap();
        let (e, _) = cat.lookup_cocycle(&img, &gamma).unwrap();
        assert_eq!(cat.subgroup(e).order(), 4);
        assert_eq!(t.zeta(&f, 10).unwrap(), DirichletPoly::monomial(10, Q::from_integer(1), 2));
        cat.entries[e].coords.clone()
    }

    #[test]
    fn quaternion_center_gives_nontrivial_class() {
        let q8 = pg(8, &["(1,2,3,4)(5,6,7,8)", "(1,5,3,7)(2,8,4,6)"]);
        assert_eq!(center_triple_coords(q8), alloc::vec![1]);
    }

    #[test]
    fn dihedral_center_gives_nontrivial_class() {
        let d8 = pg(4, &["(1,2,3,4)", "(1,3)"]);
        assert_eq!(center_triple_coords(d8), alloc::vec![1]);
    }

    fn find_iso(a: &TableGroup, b: &TableGroup) -> Option<Vec<usize>> {
        let n = a.order();
        let mut perm: Vec<usize> = (0..n).collect();
        loop {
            if perm[0] == 0 && (0..n).all(|x| (0..n).all(|y| perm[a.mul(x, y)] == b.mul(perm[x], perm[y]))) {
                return Some(perm);
            }
            // next permutation
            let mut i = n - 1;
            while i > 0 && perm[i - 1] >= perm[i] {
                i -= 1;
            }
            if i == 0 {
                return None;
            }
            let mut j = n - 1;
            while perm[j] <= perm[i - 1] {
                j -= 1;
            }
            perm.swap(i - 1, j);
            perm[i..].reverse();
        }
    }

    #[test]
    fn extensions_to_trivial_group() {
        let f = field();
        let c2 = pg(2, &["(1,2)"]);
        let cat = TripleCatalog::build(&c2, f).unwrap();
        let e = cat.identity_entry();
        let t = cat.entry_triple(e).unwrap();
        let ext = t.g_extensions(&[0, 0], 1, &f).unwrap();
        assert_eq!(ext.len(), 2);
        assert!(ext.iter().all(|x| x.rho.dim == 1 && x.src.order() == 2));
        let same = t.g_extensions(&[0, 1], 2, &f).unwrap();
        assert_eq!(same.len(), 1);
    }

    #[test]
    fn a5_identity_zeta() {
        let a5 = pg(5, &["(1,2,3,4,5)", "(1,2,3)"]);
        let f = FieldSpec::new(60, 1 << 20).unwrap();
        let cat = TripleCatalog::build(&a5, f).unwrap();
        assert_eq!(cat.classes.len(), 9);
        let z = cat.zeta(cat.identity_entry(), 100);
        assert_eq!(z.to_string(), "1 + 2*3^-s + 4^-s + 5^-s");
        let t = cat.entry_triple(cat.identity_entry()).unwrap();
        assert_eq!(t.zeta(&f, 100).unwrap(), z);
    }
}
