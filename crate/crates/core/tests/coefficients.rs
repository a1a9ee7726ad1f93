use repzeta_core::branch::{builtin_spec, BranchStructure};
use repzeta_core::dirichlet::{iterate_system, DirichletPoly};
use repzeta_core::funceq::build_system;
use repzeta_core::triples::TripleCatalog;

fn coefficients(name: &str, n: u64) -> DirichletPoly {
    let bs = BranchStructure::new(builtin_spec(name).unwrap()).unwrap();
    let cat = TripleCatalog::build(&bs.b, bs.field().unwrap()).unwrap();
    let sys = build_system(&bs, &cat).unwrap();
    iterate_system(&sys, n).unwrap().zeta
}

#[test]
fn a5_wreath_initial_terms() {
    let z = coefficients("a5_wreath", 100);
    assert_eq!(
        z.to_string(),
        "1 + 2*3^-s + 4^-s + 5^-s + 6*15^-s + 3*20^-s + 3*25^-s + 2*45^-s + 60^-s + 19*75^-s + 4*90^-s + 9*100^-s"
    );
}

#[test]
fn c2_extension_initial_terms() {
    let z = coefficients("a5_wreath_c2ext", 100);
    assert_eq!(
        z.to_string(),
        "2 + 4*3^-s + 2*4^-s + 8*5^-s + 4*10^-s + 26*15^-s + 14*20^-s + 48*25^-s + 8*45^-s + 24*50^-s + 28*60^-s \
         + 172*75^-s + 12*80^-s + 24*90^-s + 132*100^-s"
    );
}

#[test]
fn gupta_sidki_low_degrees() {
    let z = coefficients("gupta_sidki_3", 59049);
    let want: [i128; 11] = [
        9,
        26,
        402,
        6876,
        178160,
        7527942,
        461931336,
        31704156696,
        2421457788330,
        197775615899520,
        16915932297409064,
    ];
    for (k, w) in want.iter().enumerate() {
        assert_eq!(z.coeff(3u64.pow(k as u32)), repzeta_core::dirichlet::Q::from_integer(*w), "degree 3^{k}");
    }
    assert!(z.terms().all(|(m, _)| 3u64.pow(m.ilog(3)) == m));
}

#[test]
fn grigorchuk_table() {
    let z = coefficients("grigorchuk", 1 << 15);
    let want: [i128; 16] = [
        8, 10, 29, 100, 413, 1990, 9787, 50810, 278797, 1593796, 9572828, 60125360, 396548538, 2732836832,
        19674348692, 147148989714,
    ];
    for (k, w) in want.iter().enumerate() {
        assert_eq!(z.coeff(1 << k), repzeta_core::dirichlet::Q::from_integer(*w), "degree 2^{k}");
    }
    assert_eq!(z.len(), 16);
}
