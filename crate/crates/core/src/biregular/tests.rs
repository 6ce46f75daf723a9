use super::*;
use crate::coxeter::parse_word;

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
fn mu_a1() {
    let t = full("A1");
    let b = Biregular::new(&t).unwrap();
    let (e, s) = (t.identity(), t.generator(0));
    let mut m1 = TensorElt::default();
    m1.add_term(e, e, p("1"));
    m1.add_term(s, s, p("u^-2"));
    assert_eq!(b.mu_of_tz(e).unwrap(), m1);
    let mut ms = TensorElt::default();
    ms.add_term(e, s, p("1"));
    ms.add_term(s, e, p("1"));
    ms.add_term(s, s, p("1 - u^-2"));
    assert_eq!(b.mu_of_tz(s).unwrap(), ms);
}

#[test]
fn pair_table_shapes() {
    for ty in ["A1", "A2", "B2", "G2", "A3"] {
        let t = full(ty);
        let b = Biregular::new(&t).unwrap();
        let pt = b.pair_table().unwrap();
        let rep = b.check_star_products(&pt).unwrap();
        assert!(rep.is_ok(), "{ty}: {rep:?}");
        assert_eq!(rep.checked, t.len().pow(3));
        // d_{x,y,1} = 1 exactly when x = y^-1.
        for x in t.ids() {
            for y in t.ids() {
                let d = pt.get(x, y, t.identity()).d;
                assert_eq!(d == 1, x == t.inverse(y));
            }
        }
    }
}

#[test]
fn star_product_examples() {
    let t = full("A2");
    let b = Biregular::new(&t).unwrap();
    let (e, s1, s2) = (t.identity(), t.generator(0), t.generator(1));
    for y in t.ids() {
        assert_eq!(b.star_product(y, e), t.inverse(y));
    }
    assert_eq!(b.star_product(e, s1), s1);
    assert_eq!(b.star_product(s1, s1), s1);
    assert_eq!(b.star_product(s1, s2), id(&t, "21"));
}

#[test]
fn x_symmetry() {
    for ty in ["A1", "A2", "B2", "G2", "A3"] {
        let t = full(ty);
        let b = Biregular::new(&t).unwrap();
        assert!(b.check_x_symmetry().is_empty(), "{ty}");
    }
}

#[test]
fn pi_reads_as_y_star_x_inverse() {
    for ty in ["A1", "A2", "B2", "G2", "A3"] {
        let t = full(ty);
        let b = Biregular::new(&t).unwrap();
        let pi = b.pi_map().unwrap();
        let r = b.pi_reading(&pi);
        assert_eq!(r.y_star_x_inv, r.pairs, "{ty}: {r:?}");
    }
    let t = full("A1");
    let b = Biregular::new(&t).unwrap();
    let s = t.generator(0);
    let pi = b.pi_map().unwrap();
    assert_eq!(pi[0][0], t.identity());
    assert_eq!(pi[s.index()][s.index()], s);
    assert_eq!(pi[0][s.index()], s);
    assert_eq!(pi[s.index()][0], s);
}

#[test]
fn generic_pipeline_agrees() {
    for ty in ["A1", "A2", "B2"] {
        let rep = crosscheck_generic(&CoxeterSystem::from_type(ty).unwrap()).unwrap();
        assert!(rep.is_ok(), "{ty}: {:?}", &rep.mismatches[..rep.mismatches.len().min(5)]);
        let n = full(ty).len();
        assert_eq!(rep.compared, n * n * n);
    }
}
