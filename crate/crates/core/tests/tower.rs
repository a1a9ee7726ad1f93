//! The fixed-point iterates agree with direct character computations in the
//! finite quotients `G_n`.

use repzeta_core::branch::{builtin_spec, tower, BranchStructure};
use repzeta_core::dirichlet::{assemble_row, iterates};
use repzeta_core::field::FieldSpec;
use repzeta_core::funceq::build_system;
use repzeta_core::group::{exponent, Group, Subgroup};
use repzeta_core::triples::{classify_kernel_irreducibles, group_zeta, TripleCatalog};

fn check(name: &str, levels: usize) {
    let bs = BranchStructure::new(builtin_spec(name).unwrap()).unwrap();
    let cat = TripleCatalog::build(&bs.b, bs.field().unwrap()).unwrap();
    let sys = build_system(&bs, &cat).unwrap();
    let n = u64::MAX;
    let its = iterates(&sys, n, levels).unwrap();
    let tw = tower(&bs, levels).unwrap();
    for (lvl, t) in tw.iter().enumerate() {
        let direct = classify_kernel_irreducibles(&t.group, &t.to_b, &cat, n).unwrap();
        assert_eq!(direct, its[lvl], "{name} level {lvl}: per-triple vectors");
        let e = exponent(&t.group, &Subgroup::whole(t.group.order()));
        let f = FieldSpec::new(e, 1 << 20).unwrap();
        let zg = group_zeta(&t.group, &f, n).unwrap();
        assert_eq!(assemble_row(&sys, &its[lvl]).unwrap(), zg, "{name} level {lvl}: assembled");
    }
}

#[test]
fn grigorchuk_levels() {
    check("grigorchuk", 2);
}

#[test]
fn gupta_sidki_levels() {
    check("gupta_sidki_3", 1);
}

#[test]
fn a5_wreath_levels() {
    check("a5_wreath", 1);
}

#[test]
fn c2_extension_levels() {
    check("a5_wreath_c2ext", 1);
}

#[test]
fn gupta_sidki_second_level_untabulated() {
    let bs = BranchStructure::new(builtin_spec("gupta_sidki_3").unwrap()).unwrap();
    let cat = TripleCatalog::build(&bs.b, bs.field().unwrap()).unwrap();
    let sys = build_system(&bs, &cat).unwrap();
    let (order, direct) = repzeta_core::branch::tower_zeta(&bs, 2, u64::MAX).unwrap();
    assert_eq!(order, 59049);
    let its = iterates(&sys, u64::MAX, 2).unwrap();
    assert_eq!(assemble_row(&sys, &its[2]).unwrap(), direct);
}
