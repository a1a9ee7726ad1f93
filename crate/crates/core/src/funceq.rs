//! The functional-equation system relating the partial zeta functions
//! `zeta_{G,Theta}` of a branched group to themselves.
//!
//! For each tuple of catalog entries over `X`, representations of `K^X` are
//! sorted by the partition of `X` recording which coordinates are conjugate.
//! For a partition `P` the inertia of such a tensor product has image
//! `c^-1 (prod H_x x| Q_P) c` in `B wr_X Q`, carrying the cocycle
//! `alpha(g, h) = sum_x alpha_x(g_{q_h(x)}, h_x)`. Counting over coarser
//! partitions is easy; the Moebius function of the partition lattice
//! recovers the exact counts.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use hashbrown::HashMap;
use num_traits::{One, Zero};

use crate::branch::BranchStructure;
use crate::cohomology::{projective_characters, Cocycle2};
use crate::dirichlet::Q;
use crate::error::{inconsistent, Result};
use crate::group::{right_transversal, small_gens, Group, Subgroup, TableGroup};
use crate::linalg::Mat;
use crate::rep::intertwiners;
use crate::triples::{scalar_ratio, TripleCatalog};

/// A set partition of `0..m`, as block labels numbered by first occurrence.
pub type Partition = Vec<u8>;

pub fn partitions(m: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = alloc::vec![0u8; m];
    fn rec(i: usize, max: u8, cur: &mut Partition, out: &mut Vec<Partition>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max + 1 {
            if i == 0 && b > 0 {
                break;
            }
            cur[i] = b;
            rec(i + 1, max.max(b), cur, out);
        }
    }
    if m == 0 {
        return alloc::vec![Vec::new()];
    }
    rec(0, 0, &mut cur, &mut out);
    out
}

pub fn blocks(p: &Partition) -> Vec<Vec<usize>> {
    let k = p.iter().map(|&b| b as usize + 1).max().unwrap_or(0);
    let mut out = alloc::vec![Vec::new(); k];
    for (x, &b) in p.iter().enumerate() {
        out[b as usize].push(x);
    }
    out
}

/// Is every block of `fine` contained in a block of `coarse`?
pub fn refines(fine: &Partition, coarse: &Partition) -> bool {
    (0..fine.len()).all(|x| (0..fine.len()).all(|y| fine[x] != fine[y] || coarse[x] == coarse[y]))
}

/// Moebius function of the partition lattice:
/// `prod over blocks of coarse of (-1)^(k-1) (k-1)!`, with `k` the number of
/// blocks of `fine` inside it.
pub fn mobius(fine: &Partition, coarse: &Partition) -> i128 {
    if !refines(fine, coarse) {
        return 0;
    }
    let mut r = 1i128;
    for bl in blocks(coarse) {
        let mut labels: Vec<u8> = bl.iter().map(|&x| fine[x]).collect();
        labels.sort_unstable();
        labels.dedup();
        let k = labels.len() as i128;
        let mut f = 1i128;
        for j in 1..k {
            f *= j;
        }
        if k % 2 == 0 {
            f = -f;
        }
        r *= f;
    }
    r
}

/// One term `coeff * modulus^-s * prod z[Theta, k]` of `F[target]`; the
/// monomial lists its factors `(Theta, k)` with repetition, sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub target: usize,
    pub coeff: Q,
    pub modulus: u64,
    pub mono: Vec<(usize, u32)>,
}

/// `zeta_G = sum z[Theta, 1] zeta_{Theta-dual} (1/i) i^-s` with `i = [B : H]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowTerm {
    pub entry: usize,
    pub index: u64,
    pub zeta_dual: Vec<(u64, u64)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuncEqSystem {
    /// `M = |X|`
    pub m: usize,
    /// `P = |B|`
    pub p: usize,
    pub num_triples: usize,
    /// Entry of `(trivial, id_B)`: the initial vector.
    pub seed: usize,
    pub terms: Vec<Term>,
    pub row: Vec<RowTerm>,
}

impl FuncEqSystem {
    /// Every term has weighted degree `M` under `deg z[Theta, k] = k`.
    pub fn check_homogeneous(&self) -> Result<()> {
        for t in &self.terms {
            let d: u32 = t.mono.iter().map(|&(_, k)| k).sum();
            if d as usize != self.m {
                return Err(inconsistent!("term of F[{}] has degree {d}, expected {}", t.target, self.m));
            }
        }
        Ok(())
    }

    /// Variables reachable from the assembly row.
    pub fn live_variables(&self) -> Vec<bool> {
        let mut live = alloc::vec![false; self.num_triples];
        let mut stack: Vec<usize> = self.row.iter().map(|r| r.entry).collect();
        for &e in &stack {
            live[e] = true;
        }
        let mut by_target: Vec<Vec<usize>> = alloc::vec![Vec::new(); self.num_triples];
        for (i, t) in self.terms.iter().enumerate() {
            by_target[t.target].push(i);
        }
        while let Some(e) = stack.pop() {
            for &i in &by_target[e] {
                for &(v, _) in &self.terms[i].mono {
                    if !live[v] {
                        live[v] = true;
                        stack.push(v);
                    }
                }
            }
        }
        live
    }

    /// Drop the equations of variables that do not influence `zeta_G`.
    pub fn eliminate_dead(&self) -> (FuncEqSystem, usize) {
        let live = self.live_variables();
        let mut s = self.clone();
        s.terms.retain(|t| live[t.target]);
        (s, live.iter().filter(|&&l| !l).count())
    }

    pub fn terms_of(&self, target: usize) -> impl Iterator<Item = &Term> {
        self.terms.iter().filter(move |t| t.target == target)
    }
}

/// A system after substituting constant variables and identifying
/// variables with identical equations.
#[derive(Clone, Debug)]
pub struct Consolidated {
    pub system: FuncEqSystem,
    /// `(variable, value)` for the substituted constants.
    pub constants: Vec<(usize, Q)>,
    /// `(variable, representative)` for identified variables.
    pub merged: Vec<(usize, usize)>,
    pub dead: usize,
}

impl FuncEqSystem {
    /// Variables whose equations only have constant terms in constant
    /// variables, with their values at the seed's fixed point.
    pub fn constant_variables(&self) -> Vec<Option<Q>> {
        let n = self.num_triples;
        let mut cand = alloc::vec![true; n];
        for t in &self.terms {
            if t.modulus != 1 {
                cand[t.target] = false;
            }
        }
        loop {
            let mut changed = false;
            for t in &self.terms {
                if cand[t.target] && t.mono.iter().any(|&(v, _)| !cand[v]) {
                    cand[t.target] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut val: Vec<Q> = (0..n).map(|v| if v == self.seed { Q::one() } else { Q::zero() }).collect();
        for _ in 0..=n + 1 {
            let mut next = alloc::vec![Q::zero(); n];
            for t in &self.terms {
                if cand[t.target] {
                    next[t.target] += t.coeff * t.mono.iter().map(|&(v, _)| val[v]).product::<Q>();
                }
            }
            for v in 0..n {
                if cand[v] {
                    val[v] = next[v];
                }
            }
        }
        (0..n).map(|v| cand[v].then_some(val[v])).collect()
    }

    pub fn consolidate(&self) -> Consolidated {
        let (mut sys, dead) = self.eliminate_dead();
        let consts = sys.constant_variables();
        let constants: Vec<(usize, Q)> = consts.iter().enumerate().filter_map(|(v, c)| c.map(|c| (v, c))).collect();
        let mut subst: Vec<usize> = (0..sys.num_triples).collect();
        let mut merged = Vec::new();
        loop {
            let mut acc: BTreeMap<(usize, u64, Vec<(usize, u32)>), Q> = BTreeMap::new();
            for t in &sys.terms {
                if consts[t.target].is_some() {
                    continue;
                }
                let mut c = t.coeff;
                let mut mono = Vec::new();
                for &(v, k) in &t.mono {
                    let v = subst[v];
                    match consts[v] {
                        Some(x) => c *= x,
                        None => mono.push((v, k)),
                    }
                }
                mono.sort_unstable();
                *acc.entry((t.target, t.modulus, mono)).or_insert_with(Q::zero) += c;
            }
            sys.terms = acc
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|((target, modulus, mono), coeff)| Term { target, coeff, modulus, mono })
                .collect();
            let mut rhs: BTreeMap<Vec<(Q, u64, Vec<(usize, u32)>)>, usize> = BTreeMap::new();
            let mut by_target: BTreeMap<usize, Vec<(Q, u64, Vec<(usize, u32)>)>> = BTreeMap::new();
            for t in &sys.terms {
                by_target.entry(t.target).or_default().push((t.coeff, t.modulus, t.mono.clone()));
            }
            let mut changed = false;
            for (v, r) in by_target {
                match rhs.get(&r) {
                    Some(&w) => {
                        subst[v] = w;
                        merged.push((v, w));
                        changed = true;
                    }
                    None => {
                        rhs.insert(r, v);
                    }
                }
            }
            let gone: Vec<bool> = (0..sys.num_triples).map(|v| subst[v] != v).collect();
            sys.terms.retain(|t| !gone[t.target]);
            if !changed {
                break;
            }
        }
        for r in sys.row.iter_mut() {
            while subst[r.entry] != r.entry {
                r.entry = subst[r.entry];
            }
        }
        Consolidated { system: sys, constants, merged, dead }
    }
}

impl core::fmt::Display for Term {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "F[{}] += ({})", self.target, self.coeff)?;
        if self.mono.is_empty() && self.modulus == 1 {
            return Ok(());
        }
        if self.modulus != 1 {
            write!(f, "*{}^-s", self.modulus)?;
        }
        let mut i = 0;
        while i < self.mono.len() {
            let j = i + self.mono[i..].iter().take_while(|&&v| v == self.mono[i]).count();
            let (v, k) = self.mono[i];
            write!(f, " * z[{v},{k}]")?;
            if j - i > 1 {
                write!(f, "^{}", j - i)?;
            }
            i = j;
        }
        Ok(())
    }
}

impl core::fmt::Display for FuncEqSystem {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        writeln!(f, "N = {}, M = {}, P = {}, seed = {}", self.num_triples, self.m, self.p, self.seed)?;
        for t in &self.terms {
            writeln!(f, "{t}")?;
        }
        for r in &self.row {
            write!(f, "zeta += z[{},1] * (", r.entry)?;
            for (i, &(d, c)) in r.zeta_dual.iter().enumerate() {
                if i > 0 {
                    write!(f, " + ")?;
                }
                write!(f, "{c}*{d}^-s")?;
            }
            writeln!(f, ") * (1/{0})*{0}^-s", r.index)?;
        }
        Ok(())
    }
}

/// Candidate inertias for a tuple of entries: admissible partitions with
/// conjugator choices, the incidence matrix `iota` (by refinement) and its
/// inverse.
#[derive(Clone, Debug)]
pub struct InertiaCandidates {
    pub partitions: Vec<Partition>,
    pub conjugators: Vec<Vec<Vec<usize>>>,
    pub images: Vec<Vec<Subgroup>>,
    pub iota: Vec<Vec<Q>>,
    pub mu: Vec<Vec<Q>>,
}

struct EntryData {
    pos: Vec<u32>,
    cocycle: Cocycle2,
    zero: bool,
    norm_transversal: Vec<usize>,
    transversal: Vec<usize>,
    conj_count: usize,
}

/// Contribution of one inertia candidate: `(target entry, modulus, weight)`.
type WTerms = Vec<(usize, u64, Q)>;

pub struct Builder<'a> {
    pub bs: &'a BranchStructure,
    pub cat: &'a TripleCatalog,
    ent: Vec<EntryData>,
    q_of_partition: HashMap<Partition, Vec<usize>>,
    memo: HashMap<(Vec<u32>, Vec<u32>), WTerms>,
    memo_model: HashMap<(Partition, Vec<usize>, Vec<usize>), WTerms>,
}

impl<'a> Builder<'a> {
    pub fn new(bs: &'a BranchStructure, cat: &'a TripleCatalog) -> Self {
        let b = &cat.b;
        let whole = Subgroup::whole(b.order());
        let ent = (0..cat.len())
            .map(|e| {
                let h = cat.subgroup(e);
                let mut pos = alloc::vec![u32::MAX; b.order()];
                for (i, &x) in h.elems().iter().enumerate() {
                    pos[x as usize] = i as u32;
                }
                let cl = &cat.classes[cat.entries[e].class];
                let cocycle = cat.entries[e].cocycle.clone();
                EntryData {
                    pos,
                    zero: cocycle.vals.iter().all(|&v| v == 0),
                    cocycle,
                    norm_transversal: right_transversal(b, &cl.normalizer, &whole),
                    transversal: right_transversal(b, h, &whole),
                    conj_count: cl.size,
                }
            })
            .collect();
        Builder { bs, cat, ent, q_of_partition: HashMap::new(), memo: HashMap::new(), memo_model: HashMap::new() }
    }

    fn q_stabilizer(&mut self, p: &Partition) -> Vec<usize> {
        if let Some(v) = self.q_of_partition.get(p) {
            return v.clone();
        }
        let q = &self.bs.q;
        let v: Vec<usize> = (0..q.order())
            .filter(|&qi| (0..p.len()).all(|x| p[q.element(qi).apply(x)] == p[x]))
            .collect();
        self.q_of_partition.insert(p.clone(), v.clone());
        v
    }

    /// Model image `c^-1 (prod H_x x| Q_P) c` and its intersection with `B+`
    /// together with the model cocycle on the latter.
    fn model(&mut self, p: &Partition, ents: &[usize], c: &[usize]) -> (Vec<u32>, Vec<u32>, Vec<u32>) {
        let b1 = &self.bs.b1;
        let m = p.len();
        let qs = self.q_stabilizer(p);
        let cb = b1.base_element(c);
        let cbi = b1.inv(cb);
        let subs: Vec<&[u32]> = ents.iter().map(|&e| self.cat.subgroup(e).elems()).collect();
        let mut full = Vec::new();
        let mut plus = Vec::new();
        let mut model_of_plus = Vec::new();
        let mut idx = alloc::vec![0usize; m];
        loop {
            let secs: Vec<usize> = (0..m).map(|x| subs[x][idx[x]] as usize).collect();
            for &q in &qs {
                let g = b1.encode(&secs, q);
                let h = b1.mul(b1.mul(cbi, g), cb);
                full.push(h as u32);
                if self.bs.bplus.contains(h) {
                    plus.push((h as u32, g as u32));
                }
            }
            let mut x = 0;
            while x < m {
                idx[x] += 1;
                if idx[x] < subs[x].len() {
                    break;
                }
                idx[x] = 0;
                x += 1;
            }
            if x == m {
                break;
            }
        }
        plus.sort_unstable();
        let hplus: Vec<u32> = plus.iter().map(|&(h, _)| h).collect();
        model_of_plus.extend(plus.iter().map(|&(_, g)| g));
        full.sort_unstable();
        (full, hplus, model_of_plus)
    }

    fn model_cocycle(&self, ents: &[usize], model: &[u32]) -> Vec<u32> {
        if ents.iter().all(|&e| self.ent[e].zero) {
            return Vec::new();
        }
        let b1 = &self.bs.b1;
        let m = ents.len();
        let dec: Vec<(Vec<u32>, usize)> = model
            .iter()
            .map(|&g| {
                let (s, q) = b1.decode(g as usize);
                (s.iter().enumerate().map(|(x, &b)| self.ent[ents[x]].pos[b]).collect(), q)
            })
            .collect();
        let n = model.len();
        let e = self.cat.field.e;
        let mut vals = alloc::vec![0u32; n * n];
        for (i, (gs, _)) in dec.iter().enumerate() {
            for (j, (hs, hq)) in dec.iter().enumerate() {
                let mut s = 0u64;
                for x in 0..m {
                    let y = b1.act(*hq, x);
                    s += self.ent[ents[x]].cocycle.get(gs[y] as usize, hs[x] as usize);
                }
                vals[i * n + j] = (s % e) as u32;
            }
        }
        vals
    }

    /// Contributions of the candidate `(P, entries, c)`.
    pub fn candidate_terms(&mut self, p: &Partition, ents: &[usize], c: &[usize]) -> Result<WTerms> {
        let key = (p.clone(), ents.to_vec(), c.to_vec());
        if let Some(w) = self.memo_model.get(&key) {
            return Ok(w.clone());
        }
        let (_, hplus, model) = self.model(p, ents, c);
        let alpha = self.model_cocycle(ents, &model);
        let k2 = (hplus, alpha);
        let w = match self.memo.get(&k2) {
            Some(w) => w.clone(),
            None => {
                let w = self.clifford_terms(&k2.0, &k2.1)?;
                self.memo.insert(k2, w.clone());
                w
            }
        };
        self.memo_model.insert(key, w.clone());
        Ok(w)
    }

    /// Irreducibles of `ker(G+ -> B)` lying over one tensor product, for an
    /// inertia image with intersection `hplus` with `B+` and cocycle `alpha`
    /// (empty when zero).
    fn clifford_terms(&self, hplus: &[u32], alpha: &[u32]) -> Result<WTerms> {
        let bs = self.bs;
        let b1 = &bs.b1;
        let f = &self.cat.field;
        let e = f.e;
        let nh = hplus.len();
        let hsub = Subgroup::from_elems(b1.order(), hplus.to_vec());
        let al = |i: usize, j: usize| -> u64 {
            if alpha.is_empty() {
                0
            } else {
                alpha[i * nh + j] as u64
            }
        };
        let hp = |g: usize| hsub.position(g).unwrap();
        let kk = hsub.intersect(&bs.kernel);
        let i_deg = (bs.kernel.order() / kk.order()) as u64;
        let kt = TableGroup::from_subgroup(b1, &kk)?;
        let nk = kk.order();
        let kpos: Vec<usize> = kk.elems().iter().map(|&k| hp(k as usize)).collect();
        let mut beta = Cocycle2::zero(nk, e);
        for u in 0..nk {
            for v in 0..nk {
                beta.vals[u * nk + v] = (e - al(kpos[u], kpos[v])) % e;
            }
        }
        let (ext, t, sel) = projective_characters(&kt, f, &beta)?;
        let reps = right_transversal(b1, &kk, &hsub);
        // s(h, k) = alpha(h, k) + alpha(hk, h^-1) - alpha(h, h^-1)
        let twist = |h: usize, k: usize| -> u64 {
            let hi = b1.inv(h);
            let hk = b1.mul(h, k);
            (al(hp(h), hp(k)) + al(hp(hk), hp(hi)) + e - al(hp(h), hp(hi))) % e
        };
        let conj_in_k = |h: usize, k: usize| -> usize { kk.position(b1.mul(b1.mul(h, k), b1.inv(h))).unwrap() };
        let mut out: WTerms = Vec::new();
        for &ci in &sel {
            let d = t.degrees[ci];
            let chi = |k: usize| t.value(ci, k);
            let mut stab = Vec::new();
            for &h in &reps {
                let ok = (0..nk).all(|kl| {
                    let k = kk.elems()[kl] as usize;
                    let w = f.pow(f.omega, (e - twist(h, k)) % e);
                    f.mul(w, chi(conj_in_k(h, k))) == chi(kl)
                });
                if ok {
                    stab.extend(kk.elems().iter().map(|&k| b1.mul(k as usize, h) as u32));
                }
            }
            let stab = Subgroup::from_elems(b1.order(), stab);
            let img = Subgroup::from_elems(self.cat.b.order(), stab.elems().iter().map(|&h| bs.phi[h as usize]).collect());
            let weights: Vec<(usize, Q)> = match self.cat.lookup_trivial(&img) {
                Some(ent) => alloc::vec![(ent, Q::one())],
                None => {
                    let gamma = self.target_cocycle(&kt, &kk, &ext, &t, ci, &stab, &img, &al, &hp, &twist)?;
                    self.cat.lookup_averaged(&img, &gamma)?.to_vec()
                }
            };
            for (ent, w) in weights {
                out.push((ent, i_deg * d, w / Q::from_integer(i_deg as i128)));
            }
        }
        Ok(merge(out))
    }

    /// Extension cocycle on `phi(S)` of the representation induced from the
    /// stabilizer `S` of the projective character `ci`.
    fn target_cocycle(
        &self,
        kt: &TableGroup,
        kk: &Subgroup,
        ext: &TableGroup,
        t: &crate::character::CharTable,
        ci: usize,
        stab: &Subgroup,
        img: &Subgroup,
        al: &dyn Fn(usize, usize) -> u64,
        hp: &dyn Fn(usize) -> usize,
        twist: &dyn Fn(usize, usize) -> u64,
    ) -> Result<Cocycle2> {
        let b1 = &self.bs.b1;
        let f = &self.cat.field;
        let e = f.e;
        let r = crate::rep::irreducible_from_character(ext, f, t, ci, ext.gens())?;
        let pi = |k: usize| &r.images[kk.position(k).unwrap()];
        let m = img.order();
        let mut s = alloc::vec![usize::MAX; m];
        for &h in stab.elems() {
            let a = img.position(self.bs.phi[h as usize] as usize).unwrap();
            if s[a] == usize::MAX {
                s[a] = h as usize;
            }
        }
        let kgens: Vec<usize> = small_gens(kt, &Subgroup::whole(kt.order())).iter().map(|&l| kk.elems()[l] as usize).collect();
        let src: Vec<&Mat> = kgens.iter().map(|&k| pi(k)).collect();
        let mut u: Vec<Mat> = Vec::with_capacity(m);
        for &sa in &s {
            if src.is_empty() || sa == 0 {
                u.push(Mat::identity(r.dim));
                continue;
            }
            let sai = b1.inv(sa);
            let tgt: Vec<Mat> = kgens
                .iter()
                .map(|&k| pi(b1.mul(b1.mul(sa, k), sai)).scale(f, f.pow(f.omega, (e - twist(sa, k)) % e)))
                .collect();
            let tref: Vec<&Mat> = tgt.iter().collect();
            let um = intertwiners(f, &src, &tref)
                .into_iter()
                .find(|x| x.det(f) != 0)
                .ok_or_else(|| inconsistent!("stabilizer element without intertwiner"))?;
            u.push(um);
        }
        let mut vals = alloc::vec![0u64; m * m];
        for a in 1..m {
            for b in 1..m {
                let sab = b1.mul(s[a], s[b]);
                let ab = img.position(self.bs.phi[sab] as usize).unwrap();
                let k = b1.mul(sab, b1.inv(s[ab]));
                let c = scalar_ratio(f, &u[a].mul(f, &u[b]), &pi(k).mul(f, &u[ab]))?;
                let lc = f.dlog(c).ok_or_else(|| inconsistent!("intertwiner scalar is not a root of unity"))?;
                vals[a * m + b] = (al(hp(s[a]), hp(s[b])) + e - al(hp(k), hp(s[ab])) + lc) % e;
            }
        }
        Ok(Cocycle2 { n: m, e, vals })
    }

    /// The inertia candidates of a tuple of entries.
    pub fn inertia_candidates(&mut self, ents: &[usize]) -> InertiaCandidates {
        let m = ents.len();
        let parts: Vec<Partition> =
            partitions(m).into_iter().filter(|p| (0..m).all(|x| (0..m).all(|y| p[x] != p[y] || ents[x] == ents[y]))).collect();
        let mut conjugators = Vec::new();
        let mut images = Vec::new();
        for p in &parts {
            let cs = self.conjugator_choices(p, ents);
            let mut imgs = Vec::new();
            for c in &cs {
                let (full, _, _) = self.model(p, ents, c);
                imgs.push(Subgroup::from_elems(self.bs.b1.order(), full));
            }
            conjugators.push(cs);
            images.push(imgs);
        }
        let k = parts.len();
        let iota: Vec<Vec<Q>> = (0..k)
            .map(|i| (0..k).map(|j| if refines(&parts[i], &parts[j]) { Q::one() } else { Q::zero() }).collect())
            .collect();
        let mu = invert(&iota).expect("incidence matrix of a partial order is invertible");
        InertiaCandidates { partitions: parts, conjugators, images, iota, mu }
    }

    /// `prod C_x`: normalizer transversals at the first point of each block,
    /// transversals of the image elsewhere.
    pub fn conjugator_choices(&self, p: &Partition, ents: &[usize]) -> Vec<Vec<usize>> {
        let m = p.len();
        let mut seen = alloc::vec![false; m + 1];
        let lists: Vec<&[usize]> = (0..m)
            .map(|x| {
                let b = p[x] as usize;
                if !seen[b] {
                    seen[b] = true;
                    &self.ent[ents[x]].norm_transversal[..]
                } else {
                    &self.ent[ents[x]].transversal[..]
                }
            })
            .collect();
        let mut out = Vec::new();
        let mut idx = alloc::vec![0usize; m];
        loop {
            out.push((0..m).map(|x| lists[x][idx[x]]).collect());
            let mut x = 0;
            while x < m {
                idx[x] += 1;
                if idx[x] < lists[x].len() {
                    break;
                }
                idx[x] = 0;
                x += 1;
            }
            if x == m {
                return out;
            }
        }
    }

    /// Build the whole system.
    pub fn build(&mut self) -> Result<FuncEqSystem> {
        let m = self.bs.m();
        let nt = self.cat.len();
        let parts = partitions(m);
        let mut acc: BTreeMap<(usize, Vec<(usize, u32)>, u64), Q> = BTreeMap::new();
        for coarse in &parts {
            let bl = blocks(coarse);
            let fines: Vec<(&Partition, i128)> =
                parts.iter().filter(|p| refines(p, coarse)).map(|p| (p, mobius(p, coarse))).collect();
            let mut assign = alloc::vec![0usize; bl.len()];
            loop {
                let mut ents = alloc::vec![0usize; m];
                let mut mono = Vec::new();
                let mut norm = Q::one();
                for (z, block) in bl.iter().enumerate() {
                    for &x in block {
                        ents[x] = assign[z];
                    }
                    mono.push((assign[z], block.len() as u32));
                    norm /= Q::from_integer(self.ent[assign[z]].conj_count as i128);
                }
                mono.sort_unstable();
                for c in self.conjugator_choices(coarse, &ents) {
                    for &(fine, mu) in &fines {
                        for (target, modulus, w) in self.candidate_terms(fine, &ents, &c)? {
                            let v = acc.entry((target, mono.clone(), modulus)).or_insert_with(Q::zero);
                            *v += w * norm * Q::from_integer(mu);
                        }
                    }
                }
                let mut z = 0;
                while z < bl.len() {
                    assign[z] += 1;
                    if assign[z] < nt {
                        break;
                    }
                    assign[z] = 0;
                    z += 1;
                }
                if z == bl.len() {
                    break;
                }
            }
        }
        let terms = acc
            .into_iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|((target, mono, modulus), coeff)| Term { target, coeff, modulus, mono })
            .collect();
        let row = (0..nt)
            .map(|e| RowTerm { entry: e, index: self.cat.index(e) as u64, zeta_dual: self.cat.entries[e].degrees.clone() })
            .collect();
        let sys = FuncEqSystem { m, p: self.cat.b.order(), num_triples: nt, seed: self.cat.identity_entry(), terms, row };
        sys.check_homogeneous()?;
        Ok(sys)
    }
}

fn merge(v: WTerms) -> WTerms {
    let mut acc: BTreeMap<(usize, u64), Q> = BTreeMap::new();
    for (e, m, w) in v {
        *acc.entry((e, m)).or_insert_with(Q::zero) += w;
    }
    acc.into_iter().filter(|(_, w)| !w.is_zero()).map(|((e, m), w)| (e, m, w)).collect()
}

/// Exact inverse of a square rational matrix.
pub fn invert(a: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = a.len();
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            row
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, p);
        let inv = Q::one() / m[col][col];
        for v in m[col].iter_mut() {
            *v *= inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col];
                for j in 0..2 * n {
                    let t = m[col][j] * f;
                    m[r][j] -= t;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Build the system for a branch structure.
pub fn build_system(bs: &BranchStructure, cat: &TripleCatalog) -> Result<FuncEqSystem> {
    Builder::new(bs, cat).build()
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::branch::{BranchSpec, WreathGen};
    use crate::field::FieldSpec;
    use crate::perm::Perm;
    use alloc::string::ToString;

    pub(crate) fn binary_tree() -> BranchSpec {
        let id = Perm::identity(1);
        let s = Perm::parse("(1,2)", 2).unwrap();
        BranchSpec {
            name: "c2".to_string(),
            x: 2,
            q_gens: alloc::vec![s.clone()],
            b_degree: 1,
            b_gens: Vec::new(),
            bplus_gens: alloc::vec![WreathGen { sections: alloc::vec![id.clone(); 2], top: s }],
            phi_images: alloc::vec![id],
        }
    }

    #[test]
    fn bell_numbers() {
        let n: Vec<usize> = (0..7).map(|m| partitions(m).len()).collect();
        assert_eq!(n, alloc::vec![1, 1, 2, 5, 15, 52, 203]);
    }

    #[test]
    fn mobius_inverts_zeta() {
        let ps = partitions(4);
        for a in &ps {
            for c in &ps {
                let s: i128 = ps.iter().filter(|b| refines(a, b) && refines(b, c)).map(|b| mobius(a, b)).sum();
                assert_eq!(s, (a == c) as i128);
            }
        }
    }

    #[test]
    fn binary_system() {
        let bs = BranchStructure::new(binary_tree()).unwrap();
        let f = FieldSpec::new(2, 1 << 16).unwrap();
        let cat = TripleCatalog::build(&bs.b, f).unwrap();
        let sys = build_system(&bs, &cat).unwrap();
        let h = Q::new(1, 2);
        let want = alloc::vec![
            Term { target: 0, coeff: Q::from_integer(2), modulus: 1, mono: alloc::vec![(0, 2)] },
            Term { target: 0, coeff: h, modulus: 2, mono: alloc::vec![(0, 1), (0, 1)] },
            Term { target: 0, coeff: -h, modulus: 2, mono: alloc::vec![(0, 2)] },
        ];
        let mut got = sys.terms.clone();
        got.sort_by(|a, b| (a.modulus, &a.mono).cmp(&(b.modulus, &b.mono)));
        assert_eq!(got, want);
    }

    #[test]
    fn candidates_mu_matches_closed_form() {
        let bs = BranchStructure::new(binary_tree()).unwrap();
        let f = FieldSpec::new(2, 1 << 16).unwrap();
        let cat = TripleCatalog::build(&bs.b, f).unwrap();
        let mut b = Builder::new(&bs, &cat);
        let c = b.inertia_candidates(&[0, 0]);
        assert_eq!(c.partitions.len(), 2);
        for (i, p) in c.partitions.iter().enumerate() {
            for (j, q) in c.partitions.iter().enumerate() {
                assert_eq!(c.mu[i][j], Q::from_integer(mobius(p, q)));
            }
        }
        for (p, imgs) in c.partitions.iter().zip(&c.images) {
            assert_eq!(imgs[0].order(), if p[0] == p[1] { 2 } else { 1 });
        }
    }
}
