use super::*;
use crate::coxeter::{parse_word, CoxeterSystem};
use crate::hecke::Hecke;

fn p(s: &str) -> LaurentInt {
    s.parse().unwrap()
}

fn full(t: &str) -> GroupTable {
    CoxeterSystem::from_type(t).unwrap().enumerate(None).unwrap()
}

fn id(t: &GroupTable, w: &str) -> ElemId {
    t.by_word(&parse_word(w, t.rank()).unwrap()).unwrap()
}

#[test]
fn a1_basics() {
    let t = full("A1");
    let kl = kl_compute(&t).unwrap();
    let (e, s) = (t.identity(), t.generator(0));
    let mut cs = LinComb::basis(s);
    cs.add_term(e, p("u^-1"));
    assert_eq!(kl.c(s), &cs);
    assert_eq!(kl.h(s, s, s).unwrap(), p("u + u^-1"));
    assert_eq!(kl.a(s).unwrap(), 1);
    assert_eq!(kl.a(e).unwrap(), 0);
    assert_eq!(kl.gamma(s, s, s).unwrap(), 1);
    assert_eq!(kl.distinguished().unwrap(), &[e, s]);

    let j = JRing::new(&kl).unwrap();
    assert_eq!(j.mul_basis(s, s), &[(s, 1)]);
    assert_eq!(j.psi_c(s).unwrap(), LinComb::term(s, p("u + u^-1")));
    let mut unit = LinComb::basis(e);
    unit.add_term(s, LaurentInt::one());
    assert_eq!(j.psi_c(e).unwrap(), unit);
    assert!(j.x_expansion_check().unwrap().is_ok());

    let jcm = j.jcm_ideal().unwrap();
    assert_eq!(jcm.dim, 2);
    assert!(jcm.routes_agree());
    let sums = j.cell_sums(&jcm);
    assert_eq!(sums.elements, 2);
    assert!(sums.is_basis());
}

#[test]
fn a2_cells_and_a() {
    let t = full("A2");
    let kl = kl_compute(&t).unwrap();
    assert_eq!(kl.a(t.longest().unwrap()).unwrap(), 3);
    assert_eq!(kl.left_cells().len(), 4);
    assert_eq!(kl.two_sided_cells().len(), 3);
    assert_eq!(kl.distinguished().unwrap().len(), 4);
    assert!(kl.check_basis(&Hecke::new(&t)).unwrap().is_empty());
    assert!(kl.check_structure().unwrap().is_ok());
    // c_{121} = sum of all T~_y with u^{l(y) - 3}
    let w0 = t.longest().unwrap();
    for y in t.ids() {
        assert_eq!(kl.p(y, w0), LaurentInt::u_pow(t.length(y) as i32 - 3));
    }
}

#[test]
fn b2_psi_multiplicative() {
    let t = full("B2");
    let kl = kl_compute(&t).unwrap();
    let j = JRing::new(&kl).unwrap();
    assert_eq!(j.psi_multiplicativity_violations().unwrap(), 0);
    assert!(j.check_unit().unwrap());
    assert!(j.x_expansion_check().unwrap().is_ok());
}

#[test]
fn g2_cells_and_jcm() {
    let t = full("G2");
    let kl = kl_compute(&t).unwrap();
    let mut sizes: Vec<usize> = kl.two_sided_cells().iter().map(Vec::len).collect();
    sizes.sort();
    assert_eq!(sizes, vec![1, 1, 10]);
    let j = JRing::new(&kl).unwrap();
    assert_eq!(j.associativity_violations(), 0);
    let rep = j.x_expansion_check().unwrap();
    assert!(rep.is_ok(), "{rep:?}");

    let jcm = j.jcm_ideal().unwrap();
    assert_eq!(jcm.dim, 8);
    assert!(jcm.routes_agree());
    assert_eq!(j.jcm_ideal_violations(&jcm), 0);
    let sums = j.cell_sums(&jcm);
    assert_eq!(sums.elements, 6);
    assert!(sums.all_inside());
    let g2 = g2_basis_check(&j, &jcm).unwrap();
    assert!(g2.is_ok(), "{g2:?}");
    let t121 = j.basis_vec(id(&t, "121"));
    assert!(jcm.contains(&t121));
}

#[test]
fn jcm_matches_cell_sums_basis() {
    for (ty, dim) in [("A2", 6), ("B2", 6), ("A3", 24)] {
        let t = full(ty);
        let kl = kl_compute(&t).unwrap();
        let j = JRing::new(&kl).unwrap();
        let jcm = j.jcm_ideal().unwrap();
        assert_eq!(jcm.dim, dim, "{ty}");
        assert!(j.cell_sums(&jcm).is_basis(), "{ty}");
    }
}

#[test]
fn kottwitz_a2_b2() {
    let t = full("A2");
    let r = kottwitz_mult_check(&t, None).unwrap();
    assert!(r.multiplicity_one);
    assert_eq!((r.total_dim, r.x_rank, r.involutions), (4, 4, 4));

    let t = full("B2");
    let fx = SpecialFixture::b2();
    let r = kottwitz_mult_check(&t, Some(&fx)).unwrap();
    assert_eq!(r.special_check, Some(true), "{r:?}");
    assert!(r.dims_agree());
}

#[test]
fn limits() {
    let t = full("A2");
    let kl = kl_compute_with(&t, 4, 4);
    assert!(matches!(kl, Err(CellsError::LimitExceeded { .. })));
}
