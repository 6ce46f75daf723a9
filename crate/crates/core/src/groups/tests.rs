use super::*;
use crate::coxeter::CoxeterSystem;

fn dims(t: &CharacterTable) -> Vec<u64> {
    (0..t.len()).map(|i| t.dim(i)).collect()
}

#[test]
fn conjugacy_small() {
    let s3 = FiniteGroup::named("S3").unwrap();
    let mut sizes: Vec<usize> = s3.classes().iter().map(Class::size).collect();
    sizes.sort_unstable();
    assert_eq!(sizes, vec![1, 2, 3]);
    let t = s3.classes().iter().find(|c| c.size() == 3).unwrap().rep;
    assert_eq!(s3.centralizer(t).len(), 2);
    for (c, z) in conjugacy_data(&s3) {
        assert_eq!(c.size() * z.len(), 6);
    }
    let c2 = FiniteGroup::named("C2").unwrap();
    assert_eq!(c2.classes().len(), 2);
}

#[test]
fn tables_of_named_groups() {
    let c2 = character_table(&FiniteGroup::named("C2").unwrap()).unwrap();
    let vals: Vec<Vec<String>> = c2
        .chars
        .iter()
        .map(|r| r.iter().map(|c| c.to_string()).collect())
        .collect();
    assert_eq!(vals, vec![vec!["1", "1"], vec!["1", "-1"]]);
    for (name, expect) in [
        ("S3", vec![1, 1, 2]),
        ("S4", vec![1, 1, 2, 3, 3]),
        ("S5", vec![1, 1, 4, 4, 5, 5, 6]),
        ("Q8", vec![1, 1, 1, 1, 2]),
        ("D4", vec![1, 1, 1, 1, 2]),
        ("C2^3", vec![1; 8]),
        ("S3xC2", vec![1, 1, 1, 1, 2, 2]),
        ("C5", vec![1; 5]),
        ("C12", vec![1; 12]),
    ] {
        let g = FiniteGroup::named(name).unwrap();
        let t = character_table(&g).unwrap();
        let mut d = dims(&t);
        d.sort_unstable();
        assert_eq!(d, expect, "{name}");
        assert!(t.chars[0].iter().all(|c| c.as_integer() == Some(1.into())));
    }
}

#[test]
fn frobenius_schur() {
    for name in ["S3", "S4", "S5"] {
        let g = FiniteGroup::named(name).unwrap();
        let t = character_table(&g).unwrap();
        assert!((0..t.len()).all(|i| t.fs_indicator(&g, i) == 1), "{name}");
    }
    let q8 = FiniteGroup::named("Q8").unwrap();
    let t = character_table(&q8).unwrap();
    let two = (0..t.len()).find(|&i| t.dim(i) == 2).unwrap();
    assert_eq!(t.fs_indicator(&q8, two), -1);
    let c3 = FiniteGroup::named("C3").unwrap();
    let t = character_table(&c3).unwrap();
    let ind: Vec<i8> = (0..3).map(|i| t.fs_indicator(&c3, i)).collect();
    assert_eq!(ind, vec![1, 0, 0]);
}

#[test]
fn restriction() {
    let s3 = FiniteGroup::named("S3").unwrap();
    let t = character_table(&s3).unwrap();
    let two = (0..t.len()).find(|&i| t.dim(i) == 2).unwrap();
    let tr = s3.classes().iter().find(|c| c.size() == 3).unwrap().rep;
    let h = s3.subgroup(&[0, tr]).unwrap();
    let ht = character_table(&h.group).unwrap();
    assert_eq!(restrict_mult(&s3, &t, two, &h, &ht, 0).unwrap(), 1);
    assert_eq!(restrict_mult(&s3, &t, 0, &h, &ht, 0).unwrap(), 1);
    let triv = s3.subgroup(&[0]).unwrap();
    let tt = character_table(&triv.group).unwrap();
    for i in 0..t.len() {
        assert_eq!(restrict_mult(&s3, &t, i, &triv, &tt, 0).unwrap(), t.dim(i));
    }
    assert!(s3.subgroup(&[0, 1, 2]).is_err() || s3.subgroup(&[0, 1, 2]).unwrap().group.order() == 3);
}

#[test]
fn square_roots() {
    let c2 = FiniteGroup::named("C2").unwrap();
    assert_eq!(c2.square_roots(0), vec![0, 1]);
    let s3 = FiniteGroup::named("S3").unwrap();
    let c = s3.classes().iter().find(|c| c.size() == 2).unwrap().rep;
    assert_eq!(s3.square_roots(c), vec![s3.mul(c, c)]);
    let tr = s3.classes().iter().find(|c| c.size() == 3).unwrap().rep;
    assert!(s3.square_roots(tr).is_empty());
    for name in ["S4", "Q8", "C2^3"] {
        let g = FiniteGroup::named(name).unwrap();
        let total: usize = (0..g.order()).map(|x| g.square_roots(x).len()).sum();
        assert_eq!(total, g.order());
    }
}

#[test]
fn coxeter_groups() {
    for (ty, order, classes) in [("A2", 6, 3), ("B2", 8, 5), ("G2", 12, 6), ("A3", 24, 5), ("B3", 48, 10)] {
        let tb = CoxeterSystem::from_type(ty).unwrap().enumerate(None).unwrap();
        let g = FiniteGroup::from_coxeter(&tb).unwrap();
        assert_eq!((g.order(), g.classes().len()), (order, classes), "{ty}");
        let t = character_table(&g).unwrap();
        assert_eq!(t.len(), classes);
    }
}

#[test]
fn input_formats() {
    let g = FiniteGroup::from_json(r#"{"generators": [[1,0,2],[0,2,1]]}"#).unwrap();
    assert_eq!(g.order(), 6);
    let g = FiniteGroup::from_json(r#"{"name": "C2", "table": [[0,1],[1,0]]}"#).unwrap();
    assert_eq!(g.name(), "C2");
    assert!(FiniteGroup::from_json(r#"{"table": [[0,1],[0,1]]}"#).is_err());
    assert!(FiniteGroup::from_table("bad", vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 1, 0]]).is_err());
    assert!(FiniteGroup::named("Z7").is_err());
}
