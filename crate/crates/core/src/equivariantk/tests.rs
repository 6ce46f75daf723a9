use super::*;

fn grp(name: &str) -> FiniteGroup {
    FiniteGroup::named(name).unwrap()
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[test]
fn kappa_and_v_c2() {
    let g = grp("C2");
    let m = MPairSet::new(&g).unwrap();
    assert_eq!(m.pairs().len(), 4);
    let two = BundleClass {
        coeffs: vec![q(2, 1), q(0, 1), q(0, 1), q(0, 1)],
    };
    assert_eq!(m.kottwitz_kappa(KappaReading::CentralizerOfRoot).unwrap(), two);
    assert_eq!(m.direct_image_v(), two);
    assert_eq!(m.phi_v_direct(0, 1), 2);
    let e = m.basis_element(0);
    for h in 0..2 {
        assert_eq!(m.phi(&e, 0, h), Cyclo::int(1, 1));
    }
}

#[test]
fn kappa_s3() {
    let g = grp("S3");
    let m = MPairSet::new(&g).unwrap();
    let k = m.kottwitz_kappa(KappaReading::CentralizerOfRoot).unwrap();
    let cyc = g.classes().iter().position(|c| c.size() == 2).unwrap();
    let tr = g.classes().iter().position(|c| c.size() == 3).unwrap();
    assert_eq!(k.coeffs[m.index(cyc, 0).unwrap()], q(1, 1));
    for (i, p) in m.pairs().iter().enumerate() {
        if p.class == tr {
            assert!(k.coeffs[i].is_zero());
        }
    }
    assert!(matches!(
        m.kottwitz_kappa(KappaReading::CenterOfCentralizer),
        Err(KError::NonIntegralCoefficient { .. })
    ));
}

#[test]
fn v_elementary_abelian() {
    let g = grp("C2^2");
    let m = MPairSet::new(&g).unwrap();
    let v = m.direct_image_v();
    assert_eq!(v.coeffs[0], q(4, 1));
    assert!(v.coeffs[1..].iter().all(Zero::is_zero));
}

#[test]
fn kappa_v_roster() {
    for name in ["C2", "C2^2", "S3", "S4", "Q8", "D4"] {
        let rep = verify_kappa_v(&grp(name)).unwrap();
        assert!(rep.is_ok(), "{name}: {rep:?}");
    }
}

#[test]
fn chi_and_fourier() {
    let g = grp("C2");
    let m = MPairSet::new(&g).unwrap();
    let v = m.direct_image_v();
    let y = m.pairs()[0];
    assert_eq!(m.chi_pairing(y, &v), Cyclo::int(1, 2));
    // chi_{1,triv}(E_{1,triv}) comes out as 1.
    assert_eq!(m.chi_pairing(y, &m.basis_element(0)), Cyclo::int(1, 1));
    assert_eq!(m.fourier_bracket(y, y), Cyclo::rational(1, q(1, 2)));
    let f = fourier_matrix(&g).unwrap();
    assert!(f.symmetric);
    for name in ["C2", "C2^2", "S3", "S4", "Q8", "D4"] {
        let rep = verify_chi(&grp(name)).unwrap();
        assert_eq!(rep.failures, 0, "{name}: {rep:?}");
    }
    let q8 = verify_chi(&grp("Q8")).unwrap();
    assert!(q8.entries.iter().any(|e| e.fs == -1));
}

#[test]
fn fourier_closed_form() {
    for name in ["C2", "S3", "S4", "Q8"] {
        let f = fourier_matrix(&grp(name)).unwrap();
        assert!(f.symmetric, "{name}");
        assert_eq!(f.closed_form_mismatches, 0, "{name}");
    }
}
