//! Branch structures `(X, Q, B, B+, phi)`, their derivation from wreath
//! recursions, and the tower of finite quotients `G_n`.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::field::FieldSpec;
use crate::error::{invalid, resource, Result};
use crate::group::{closure, normal_closure, Group, PermGroup, Subgroup, SubgroupView, TableGroup, TABLE_LIMIT};
use crate::perm::Perm;
use crate::wreath::WreathGroup;

pub const GROUP_LIMIT: usize = 10_000;

/// Generator of `B+`: sections in `B` (as permutations) and a top permutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WreathGen {
    pub sections: Vec<Perm>,
    pub top: Perm,
}

/// Textual description of a branch structure, as stored in fixture files.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchSpec {
    pub name: String,
    pub x: usize,
    pub q_gens: Vec<Perm>,
    pub b_degree: usize,
    pub b_gens: Vec<Perm>,
    pub bplus_gens: Vec<WreathGen>,
    pub phi_images: Vec<Perm>,
}

/// A validated branch structure with all groups enumerated.
#[derive(Clone, Debug)]
pub struct BranchStructure {
    pub spec: BranchSpec,
    pub q: PermGroup,
    pub b_perm: PermGroup,
    pub b: TableGroup,
    /// `B wr_X Q`
    pub b1: WreathGroup,
    pub bplus: Subgroup,
    /// `phi` on `B+`, indexed by `B1` element (`u32::MAX` outside `B+`).
    pub phi: Vec<u32>,
    pub kernel: Subgroup,
}

impl BranchStructure {
    /// A field with enough roots of unity for every character and cocycle
    /// met in the system: `e = exp(B wr Q) * lcm exp M(H)` over `H <= B`.
    pub fn field(&self) -> Result<FieldSpec> {
        let mut e = crate::group::exponent(&self.b1, &Subgroup::whole(self.b1.order()));
        let mut l = 1;
        for c in crate::subgroups::subgroup_classes(&self.b)? {
            let t = TableGroup::from_subgroup(&self.b, &c.rep)?;
            l = num_integer::lcm(l, crate::cohomology::Multiplier::compute(&t)?.exponent());
        }
        e *= l;
        FieldSpec::new(e, 1 << 20)
    }

    pub fn new(spec: BranchSpec) -> Result<Self> {
        let x = spec.x;
        if x == 0 {
            return Err(invalid!("X must be nonempty"));
        }
        for g in &spec.q_gens {
            if g.degree() != x {
                return Err(invalid!("Q generator {g} does not act on {x} points"));
            }
        }
        let q = PermGroup::new(x, spec.q_gens.clone(), GROUP_LIMIT)?;
        for g in &spec.b_gens {
            if g.degree() != spec.b_degree {
                return Err(invalid!("B generator {g} has wrong degree"));
            }
        }
        let b_perm = PermGroup::new(spec.b_degree, spec.b_gens.clone(), GROUP_LIMIT)?;
        let b = b_perm.table()?;
        let b1 = WreathGroup::new(b.clone(), &q)?;
        if spec.bplus_gens.len() != spec.phi_images.len() {
            return Err(invalid!("{} B+ generators but {} phi images", spec.bplus_gens.len(), spec.phi_images.len()));
        }
        let mut gens = Vec::new();
        let mut imgs = Vec::new();
        for (wg, im) in spec.bplus_gens.iter().zip(&spec.phi_images) {
            if wg.sections.len() != x {
                return Err(invalid!("B+ generator has {} sections, expected {x}", wg.sections.len()));
            }
            let secs: Vec<usize> = wg
                .sections
                .iter()
                .map(|s| b_perm.index_of(s).ok_or_else(|| invalid!("section {s} is not in B")))
                .collect::<Result<_>>()?;
            let qi = q.index_of(&wg.top).ok_or_else(|| invalid!("top {} is not in Q", wg.top))?;
            gens.push(b1.encode(&secs, qi));
            imgs.push(b_perm.index_of(im).ok_or_else(|| invalid!("phi image {im} is not in B"))?);
        }
        let (bplus, phi) = graph_hom(&b1, &b, &gens, &imgs)?;
        let image: Vec<u32> = bplus.elems().iter().map(|&e| phi[e as usize]).collect();
        if Subgroup::from_elems(b.order(), image).order() != b.order() {
            return Err(invalid!("phi not onto B"));
        }
        let kernel = Subgroup::from_elems(b1.order(), bplus.elems().iter().copied().filter(|&e| phi[e as usize] == 0).collect());
        Ok(BranchStructure { spec, q, b_perm, b, b1, bplus, phi, kernel })
    }

    pub fn name(&self) -> &str {
        &self.spec.name
    }

    /// `M = |X|`
    pub fn m(&self) -> usize {
        self.spec.x
    }

    #[inline]
    pub fn phi(&self, e: usize) -> usize {
        self.phi[e] as usize
    }
}

/// Enumerate the subgroup generated by `gens` together with the map given on
/// generators; fails if the map is not well defined.
fn graph_hom<G: Group + ?Sized, H: Group + ?Sized>(
    g: &G,
    h: &H,
    gens: &[usize],
    imgs: &[usize],
) -> Result<(Subgroup, Vec<u32>)> {
    let n = g.order();
    let mut map = alloc::vec![u32::MAX; n];
    map[0] = 0;
    let mut queue = alloc::vec![0usize];
    let mut i = 0;
    while i < queue.len() {
        let x = queue[i];
        i += 1;
        for (&s, &t) in gens.iter().zip(imgs) {
            let y = g.mul(x, s);
            let fy = h.mul(map[x] as usize, t) as u32;
            if map[y] == u32::MAX {
                map[y] = fy;
                queue.push(y);
            } else if map[y] != fy {
                return Err(invalid!("phi not a homomorphism"));
            }
        }
    }
    Ok((Subgroup::from_elems(n, queue.into_iter().map(|v| v as u32).collect()), map))
}

/// A word in the generators: `(generator, exponent)` factors, multiplied left
/// to right.
pub type Word = Vec<(usize, i64)>;

/// A self-similar group given by a wreath recursion
/// `g = <g_1, ..., g_d> q_g`, acting by `g(x w) = q_g(x) g_x(w)`, together
/// with normal generators of the branching subgroup `K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WreathRecursion {
    pub name: String,
    pub x: usize,
    pub gen_names: Vec<String>,
    pub tops: Vec<Perm>,
    pub sections: Vec<Vec<Word>>,
    pub kernel_words: Vec<Word>,
}

impl WreathRecursion {
    /// Action of every generator on `X^m`; the word `x_1 .. x_m` has index
    /// `x_1 d^(m-1) + (index of x_2 .. x_m)`.
    pub fn level_perms(&self, m: usize) -> Vec<Perm> {
        let k = self.tops.len();
        if m == 0 {
            return alloc::vec![Perm::identity(1); k];
        }
        let lower = self.level_perms(m - 1);
        let dsz = lower[0].degree();
        let d = self.x;
        (0..k)
            .map(|g| {
                let mut img = alloc::vec![0u32; d * dsz];
                for xi in 0..d {
                    let sec = eval_perm(&self.sections[g][xi], &lower, dsz);
                    let qx = self.tops[g].apply(xi);
                    for r in 0..dsz {
                        img[xi * dsz + r] = (qx * dsz + sec.apply(r)) as u32;
                    }
                }
                Perm::from_images(img).expect("level action is a permutation")
            })
            .collect()
    }
}

fn eval_perm(w: &Word, gens: &[Perm], degree: usize) -> Perm {
    let mut p = Perm::identity(degree);
    for &(g, e) in w {
        let base = if e < 0 { gens[g].inverse() } else { gens[g].clone() };
        for _ in 0..e.unsigned_abs() {
            p = p.compose(&base);
        }
    }
    p
}

fn eval_in<G: Group + ?Sized>(g: &G, w: &Word, gens: &[usize]) -> usize {
    let mut x = 0;
    for &(s, e) in w {
        let base = if e < 0 { g.inv(gens[s]) } else { gens[s] };
        for _ in 0..e.unsigned_abs() {
            x = g.mul(x, base);
        }
    }
    x
}

/// Finite data `(B, B+, phi)` from a wreath recursion: `B` is the image of
/// `G / K` acting on a deep enough level of the tree, realized regularly.
pub fn derive_branch_from_recursion(rec: &WreathRecursion, max_level: usize) -> Result<BranchSpec> {
    let mut prev: Option<(usize, Vec<Perm>)> = None;
    for m in 1..=max_level {
        let lp = rec.level_perms(m);
        let pm = PermGroup::new(lp[0].degree(), lp.clone(), 2_000_000)
            .map_err(|_| resource!("level-{m} quotient of {} exceeds 2000000 elements", rec.name))?;
        let gi = pm.gen_indices();
        let kw: Vec<usize> = rec.kernel_words.iter().map(|w| eval_in(&pm, w, &gi)).collect();
        let km = normal_closure(&pm, &kw, &Subgroup::whole(pm.order()));
        let (bm_order, bm_gens) = coset_action(&pm, &km, &gi);
        if let Some((po, pg)) = &prev {
            if *po == bm_order {
                if !branches_over_kernel(rec, m, &pm, &km) {
                    return Err(invalid!("{}: psi(K) does not contain K^X at level {m}", rec.name));
                }
                if let Ok(spec) = branch_spec_from_quotient(rec, pg) {
                    if BranchStructure::new(spec.clone()).is_ok() {
                        return Ok(spec);
                    }
                }
            }
        }
        prev = Some((bm_order, bm_gens));
    }
    Err(resource!("derivation did not converge: quotient by K did not stabilize within {max_level} levels"))
}

/// `K^X <= psi(K)` in the level-`m` quotient: each kernel generator acting
/// below a single vertex of the first level lies in the image of `K`.
fn branches_over_kernel(rec: &WreathRecursion, m: usize, pm: &PermGroup, km: &Subgroup) -> bool {
    let lower = rec.level_perms(m - 1);
    let dsz = lower[0].degree();
    rec.kernel_words.iter().all(|w| {
        let k = eval_perm(w, &lower, dsz);
        (0..rec.x).all(|x| {
            let img = (0..rec.x * dsz)
                .map(|i| if i / dsz == x { (x * dsz + k.apply(i % dsz)) as u32 } else { i as u32 })
                .collect();
            let p = Perm::from_images(img).expect("permutation");
            pm.index_of(&p).is_some_and(|i| km.contains(i))
        })
    })
}

/// Regular action of the generators on `P / K`.
fn coset_action(p: &PermGroup, k: &Subgroup, gens: &[usize]) -> (usize, Vec<Perm>) {
    let n = p.order();
    let mut coset = alloc::vec![u32::MAX; n];
    let mut reps = Vec::new();
    for x in 0..n {
        if coset[x] != u32::MAX {
            continue;
        }
        let id = reps.len() as u32;
        reps.push(x);
        for &y in k.elems() {
            coset[p.mul(x, y as usize)] = id;
        }
    }
    let c = reps.len();
    let perms = gens
        .iter()
        .map(|&g| {
            let img = reps.iter().map(|&r| coset[p.mul(g, r)]).collect();
            Perm::from_images(img).expect("coset action")
        })
        .collect();
    (c, perms)
}

fn branch_spec_from_quotient(rec: &WreathRecursion, bgens: &[Perm]) -> Result<BranchSpec> {
    let deg = bgens[0].degree();
    let bplus_gens = (0..rec.tops.len())
        .map(|g| WreathGen {
            sections: rec.sections[g].iter().map(|w| eval_perm(w, bgens, deg)).collect(),
            top: rec.tops[g].clone(),
        })
        .collect();
    Ok(BranchSpec {
        name: rec.name.clone(),
        x: rec.x,
        q_gens: dedup_nontrivial(&rec.tops),
        b_degree: deg,
        b_gens: dedup_nontrivial(bgens),
        bplus_gens,
        phi_images: bgens.to_vec(),
    })
}

fn dedup_nontrivial(ps: &[Perm]) -> Vec<Perm> {
    let mut out: Vec<Perm> = Vec::new();
    for p in ps {
        if !p.is_identity() && !out.contains(p) {
            out.push(p.clone());
        }
    }
    out
}

fn w(letters: &[usize]) -> Word {
    letters.iter().map(|&l| (l, 1)).collect()
}

/// The first Grigorchuk group: `a = (1,2)`, `b = <a, c>`, `c = <a, d>`,
/// `d = <1, b>`, with `K` the normal closure of `(ab)^2`.
pub fn grigorchuk_recursion() -> WreathRecursion {
    let (a, b, c, d) = (0, 1, 2, 3);
    let swap = Perm::parse("(1,2)", 2).unwrap();
    let id = Perm::identity(2);
    WreathRecursion {
        name: "grigorchuk".to_string(),
        x: 2,
        gen_names: ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect(),
        tops: alloc::vec![swap, id.clone(), id.clone(), id],
        sections: alloc::vec![alloc::vec![w(&[]), w(&[])], alloc::vec![w(&[a]), w(&[c])], alloc::vec![w(&[a]), w(&[d])], alloc::vec![w(&[]), w(&[b])]],
        kernel_words: alloc::vec![w(&[a, b, a, b])],
    }
}

/// Gupta-Sidki group for an odd prime `p`: `a` the cycle `(1,..,p)`,
/// `t = <a, a^-1, 1, .., 1, t>`, with `K` the derived subgroup.
pub fn gupta_sidki_recursion(p: usize) -> WreathRecursion {
    let cyc: Vec<u32> = (0..p as u32).map(|i| (i + 1) % p as u32).collect();
    let mut tsec: Vec<Word> = alloc::vec![Vec::new(); p];
    tsec[0] = alloc::vec![(0, 1)];
    tsec[1] = alloc::vec![(0, -1)];
    tsec[p - 1] = alloc::vec![(1, 1)];
    WreathRecursion {
        name: alloc::format!("gupta_sidki_{p}"),
        x: p,
        gen_names: alloc::vec!["a".to_string(), "t".to_string()],
        tops: alloc::vec![Perm::from_images(cyc).unwrap(), Perm::identity(p)],
        sections: alloc::vec![alloc::vec![Vec::new(); p], tsec],
        kernel_words: alloc::vec![alloc::vec![(0, -1), (1, -1), (0, 1), (1, 1)]],
    }
}

fn a5_gens() -> Vec<Perm> {
    alloc::vec![Perm::parse("(1,2,3,4,5)", 5).unwrap(), Perm::parse("(1,2,3)", 5).unwrap()]
}

/// `W = A5 wr W`: trivial `B`, `B+ = Q = A5`.
pub fn a5_wreath_spec() -> BranchSpec {
    let id = Perm::identity(1);
    BranchSpec {
        name: "a5_wreath".to_string(),
        x: 5,
        q_gens: a5_gens(),
        b_degree: 1,
        b_gens: Vec::new(),
        bplus_gens: a5_gens().into_iter().map(|q| WreathGen { sections: alloc::vec![id.clone(); 5], top: q }).collect(),
        phi_images: alloc::vec![id.clone(), id],
    }
}

/// Extension of the `A5` wreath structure by `C2`: `B = C2`,
/// `B+ = C2 wr A5`, `phi` the product of the sections.
pub fn c2_extension_spec() -> BranchSpec {
    let id = Perm::identity(2);
    let s = Perm::parse("(1,2)", 2).unwrap();
    let mut sections = alloc::vec![id.clone(); 5];
    sections[0] = s.clone();
    let mut bplus_gens = alloc::vec![WreathGen { sections, top: Perm::identity(5) }];
    let mut phi_images = alloc::vec![s.clone()];
    for q in a5_gens() {
        bplus_gens.push(WreathGen { sections: alloc::vec![id.clone(); 5], top: q });
        phi_images.push(id.clone());
    }
    BranchSpec { name: "a5_wreath_c2ext".to_string(), x: 5, q_gens: a5_gens(), b_degree: 2, b_gens: alloc::vec![s], bplus_gens, phi_images }
}

pub const BUILTINS: [&str; 4] = ["grigorchuk", "gupta_sidki_3", "a5_wreath", "a5_wreath_c2ext"];

/// The wreath recursion behind a built-in structure, where there is one.
pub fn builtin_recursion(name: &str) -> Option<WreathRecursion> {
    match name {
        "grigorchuk" => Some(grigorchuk_recursion()),
        "gupta_sidki_3" => Some(gupta_sidki_recursion(3)),
        _ => None,
    }
}

/// Built-in structures; the two recursion-defined ones are derived.
pub fn builtin_spec(name: &str) -> Result<BranchSpec> {
    match name {
        "grigorchuk" => derive_branch_from_recursion(&grigorchuk_recursion(), 6),
        "gupta_sidki_3" => derive_branch_from_recursion(&gupta_sidki_recursion(3), 5),
        "a5_wreath" => Ok(a5_wreath_spec()),
        "a5_wreath_c2ext" => Ok(c2_extension_spec()),
        _ => Err(invalid!("unknown built-in branch structure {name:?}")),
    }
}

/// One level of the tower: `G_n` with the map `f_{n,0}: G_n -> B`.
#[derive(Clone, Debug)]
pub struct TowerLevel {
    pub level: usize,
    pub group: TableGroup,
    pub to_b: Vec<u32>,
}

impl TowerLevel {
    pub fn kernel(&self) -> Subgroup {
        Subgroup::from_elems(self.group.order(), (0..self.to_b.len() as u32).filter(|&x| self.to_b[x as usize] == 0).collect())
    }
}

/// Largest `|G_n wr Q|` in which the next level is enumerated.
pub const WREATH_LIMIT: usize = 1 << 26;

/// Largest level reached by [`tower_zeta`] without a multiplication table.
pub const TOWER_LIMIT: usize = 100_000_000;

/// `G_{n+1}` inside `G_n wr Q`, with its map to `B`.
fn next_level(bs: &BranchStructure, prev: &TowerLevel) -> Result<(WreathGroup, Subgroup, Vec<u32>)> {
    let k = prev.kernel();
    let lvl = prev.level + 1;
    let ambient = prev.group.order().checked_pow(bs.m() as u32).and_then(|v| v.checked_mul(bs.q.order()));
    if ambient.is_none_or(|o| o > WREATH_LIMIT) {
        return Err(resource!("tower level {lvl} lies in a wreath product above {WREATH_LIMIT} elements"));
    }
    let expect = k.order().checked_pow(bs.m() as u32).and_then(|v| v.checked_mul(bs.bplus.order()));
    if expect.is_none_or(|o| o > TOWER_LIMIT) {
        return Err(resource!("tower level {lvl} exceeds {TOWER_LIMIT} elements"));
    }
    let w = WreathGroup::new(prev.group.clone(), &bs.q)?;
    // a preimage in G_n of every element of B
    let mut lift = alloc::vec![usize::MAX; bs.b.order()];
    for g in (0..prev.group.order()).rev() {
        lift[prev.to_b[g] as usize] = g;
    }
    let mut gens = Vec::new();
    for x in 0..bs.m() {
        for kg in crate::group::small_gens(&prev.group, &k) {
            let mut s = alloc::vec![0usize; bs.m()];
            s[x] = kg;
            gens.push(w.encode(&s, 0));
        }
    }
    for gb in crate::group::small_gens(&bs.b1, &bs.bplus) {
        let (secs, q) = bs.b1.decode(gb);
        let s: Vec<usize> = secs.iter().map(|&b| lift[b]).collect();
        gens.push(w.encode(&s, q));
    }
    let h = closure(&w, &gens);
    let to_b = h
        .elems()
        .iter()
        .map(|&e| {
            let (secs, q) = w.decode(e as usize);
            let bsecs: Vec<usize> = secs.iter().map(|&g| prev.to_b[g] as usize).collect();
            bs.phi[bs.b1.encode(&bsecs, q)]
        })
        .collect();
    Ok((w, h, to_b))
}

/// `G_0 = B`, and `G_{n+1}` the preimage of `B+` in `G_n wr Q`, tabulated.
pub fn tower(bs: &BranchStructure, n: usize) -> Result<Vec<TowerLevel>> {
    let mut levels = alloc::vec![TowerLevel { level: 0, group: bs.b.clone(), to_b: (0..bs.b.order() as u32).collect() }];
    for lvl in 1..=n {
        let prev = levels.last().unwrap();
        let expect = prev.kernel().order().checked_pow(bs.m() as u32).and_then(|v| v.checked_mul(bs.bplus.order()));
        if expect.is_none_or(|o| o > TABLE_LIMIT) {
            return Err(resource!("tower level {lvl} is too large to tabulate"));
        }
        let (w, h, to_b) = next_level(bs, prev)?;
        let group = TableGroup::from_subgroup(&w, &h)?;
        levels.push(TowerLevel { level: lvl, group, to_b });
    }
    Ok(levels)
}

/// Order and character degrees of `G_n`; the last level need not be
/// tabulated.
pub fn tower_zeta(bs: &BranchStructure, n: usize, trunc: u64) -> Result<(usize, crate::dirichlet::DirichletPoly)> {
    let zeta = |g: &dyn Group| -> Result<crate::dirichlet::DirichletPoly> {
        let e = crate::group::exponent(g, &Subgroup::whole(g.order()));
        crate::triples::group_zeta(g, &FieldSpec::new(e, 1 << 20)?, trunc)
    };
    if n == 0 {
        return Ok((bs.b.order(), zeta(&bs.b)?));
    }
    let levels = tower(bs, n - 1)?;
    let (w, h, _) = next_level(bs, levels.last().unwrap())?;
    if h.order() <= TABLE_LIMIT {
        let t = TableGroup::from_subgroup(&w, &h)?;
        return Ok((t.order(), zeta(&t)?));
    }
    Ok((h.order(), zeta(&SubgroupView { parent: &w, sub: &h })?))
}
