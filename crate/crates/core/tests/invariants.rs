//! Algebraic invariants on small groups and on the built-in structures.

use proptest::prelude::*;

use repzeta_core::branch::{builtin_spec, BranchStructure, BUILTINS};
use repzeta_core::character::CharTable;
use repzeta_core::dirichlet::Q;
use repzeta_core::field::FieldSpec;
use repzeta_core::funceq::Builder;
use repzeta_core::group::{exponent, is_normal, Group, PermGroup, Subgroup, TableGroup};
use repzeta_core::perm::Perm;
use repzeta_core::rep::inertia;
use repzeta_core::subgroups::subgroup_classes;
use repzeta_core::triples::TripleCatalog;

fn pg(deg: usize, gens: &[&str]) -> TableGroup {
    let gens = gens.iter().map(|s| Perm::parse(s, deg).unwrap()).collect();
    PermGroup::new(deg, gens, 10_000).unwrap().table().unwrap()
}

fn small_groups() -> Vec<TableGroup> {
    vec![
        pg(4, &["(1,2,3,4)", "(1,2)"]),
        pg(4, &["(1,2,3,4)", "(1,3)"]),
        pg(4, &["(1,2,3)", "(2,3,4)"]),
        pg(8, &["(1,2,3,4)(5,6,7,8)", "(1,5,3,7)(2,8,4,6)"]),
        pg(6, &["(1,2,3)", "(1,2)", "(4,5,6)"]),
        pg(6, &["(1,2)(3,4)", "(1,3)(2,4)", "(1,3,5)(2,4,6)", "(5,6)"]),
        pg(8, &["(1,2)(3,4)(5,6)(7,8)", "(1,3)(2,4)", "(1,5)(2,6)(3,7)(4,8)"]),
        pg(5, &["(1,2,3,4,5)", "(2,5)(3,4)", "(1,2)"]),
    ]
}

struct Normals {
    g: TableGroup,
    f: FieldSpec,
    normals: Vec<Subgroup>,
}

fn normals(g: TableGroup) -> Normals {
    let n = g.order();
    let f = FieldSpec::new(exponent(&g, &Subgroup::whole(n)), 1 << 20).unwrap();
    let normals = subgroup_classes(&g).unwrap().into_iter().filter(|c| c.size == 1).map(|c| c.rep).collect();
    Normals { g, f, normals }
}

/// Values of character `i` of `h`, listed along `h.elems()`.
fn values(t: &CharTable, i: usize, h: &Subgroup) -> Vec<u64> {
    (0..h.order()).map(|x| t.value(i, x)).collect()
}

fn table(g: &TableGroup, h: &Subgroup, f: &FieldSpec) -> CharTable {
    CharTable::compute(&g.sub_table(h), f).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    /// For `N <= L` both normal, `L` inside the inertia group of `rho`, and
    /// `sigma` of `L` lying over `rho`: `sigma|N = e rho` and
    /// `G_sigma <= G_rho`.
    #[test]
    fn inertia_shrinks_up_the_chain(gi in 0usize..8, a in 0usize..64, b in 0usize..64, r in 0usize..64, s in 0usize..64) {
        let Normals { g, f, normals } = normals(small_groups().swap_remove(gi));
        let all = Subgroup::whole(g.order());
        let n = &normals[a % normals.len()];
        let above: Vec<&Subgroup> = normals.iter().filter(|l| n.is_subset(l)).collect();
        let l = above[b % above.len()];
        let tn = table(&g, n, &f);
        let rho = values(&tn, r % tn.num_classes(), n);
        let g_rho = inertia(&g, &all, n, &rho);
        prop_assume!(l.is_subset(&g_rho));
        let tl = table(&g, l, &f);
        let over: Vec<usize> = (0..tl.num_classes())
            .filter(|&i| {
                let sig = values(&tl, i, l);
                let mut acc = 0;
                for &x in n.elems() {
                    let sx = sig[l.position(x as usize).unwrap()];
                    let rx = rho[n.position(g.inv(x as usize)).unwrap()];
                    acc = f.add(acc, f.mul(sx, rx));
                }
                acc != 0
            })
            .collect();
        prop_assert!(!over.is_empty(), "some character of L lies over rho");
        let sigma = values(&tl, over[s % over.len()], l);
        let e = f.mul(sigma[0], f.inv(rho[0]));
        for (k, &x) in n.elems().iter().enumerate() {
            prop_assert_eq!(sigma[l.position(x as usize).unwrap()], f.mul(e, rho[k]));
        }
        let g_sigma = inertia(&g, &all, l, &sigma);
        prop_assert!(g_sigma.is_subset(&g_rho));
        prop_assert!(is_normal(&g, l, &g_sigma));
    }
}

#[test]
fn degree_squares_sum_to_order() {
    for g in small_groups() {
        let n = g.order();
        let f = FieldSpec::new(exponent(&g, &Subgroup::whole(n)), 1 << 20).unwrap();
        let t = CharTable::compute(&g, &f).unwrap();
        assert_eq!(t.degrees.iter().map(|d| d * d).sum::<u64>(), n as u64);
    }
    for name in BUILTINS {
        let bs = BranchStructure::new(builtin_spec(name).unwrap()).unwrap();
        let cat = TripleCatalog::build(&bs.b, bs.field().unwrap()).unwrap();
        for rep in &cat.reps {
            let t = CharTable::compute(rep, &cat.field).unwrap();
            assert_eq!(t.degrees.iter().map(|d| d * d).sum::<u64>(), rep.order() as u64, "{name}");
        }
    }
}

fn is_identity(m: &[Vec<Q>]) -> bool {
    m.iter().enumerate().all(|(i, row)| row.iter().enumerate().all(|(j, &x)| x == Q::from_integer((i == j) as i128)))
}

#[test]
fn iota_and_mu_are_inverse() {
    for name in BUILTINS {
        let bs = BranchStructure::new(builtin_spec(name).unwrap()).unwrap();
        let cat = TripleCatalog::build(&bs.b, bs.field().unwrap()).unwrap();
        let m = bs.m();
        let mut b = Builder::new(&bs, &cat);
        let mut tuples: Vec<Vec<usize>> = (0..cat.len()).map(|e| vec![e; m]).collect();
        tuples.push((0..m).map(|x| x % cat.len()).collect());
        tuples.push((0..m).map(|x| (x / 2) % cat.len()).collect());
        for ents in tuples {
            let c = b.inertia_candidates(&ents);
            let k = c.partitions.len();
            let prod: Vec<Vec<Q>> = (0..k)
                .map(|i| (0..k).map(|j| (0..k).map(|l| c.iota[i][l] * c.mu[l][j]).sum()).collect())
                .collect();
            assert!(is_identity(&prod), "{name} {ents:?}");
        }
    }
}
