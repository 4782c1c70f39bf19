use proptest::prelude::*;
use rankinlab::typecalc::*;

fn x() -> Expr {
    Expr::var(0)
}

fn y() -> Expr {
    Expr::var(1)
}

fn t1(names: &[&str], z: Expr, f: Vec<Expr>) -> FuncType {
    FuncType::new(names, z, f).unwrap()
}

fn agree(a: &FuncType, b: &FuncType, points: &[Vec<f64>]) {
    for p in points {
        let (za, zb) = (a.z.eval(p), b.z.eval(p));
        assert!(
            (za - zb).abs() <= 1e-12 * za.abs().max(1.0),
            "Z at {p:?}: {za} vs {zb}"
        );
        for (fa, fb) in a.f.iter().zip(&b.f) {
            let (u, v) = (fa.eval(p), fb.eval(p));
            assert!(
                (u - v).abs() <= 1e-12 * u.abs().max(1.0),
                "F at {p:?}: {u} vs {v}"
            );
        }
    }
}

#[test]
fn derivative_of_exponential_type_has_unit_z() {
    let t = t1(&["x"], Expr::one(), vec![x().abs()]);
    let d = type_derivative(&t, 0).unwrap();
    assert!(d.same_as(&t1(&["x"], Expr::one(), vec![x().abs()])), "{d}");
}

#[test]
fn derivative_in_independent_variable_vanishes() {
    let t = t1(&["x", "y"], Expr::one(), vec![x().abs(), Expr::zero()]);
    let d = type_derivative(&t, 1).unwrap();
    assert!(d.z.is_zero());
    assert_eq!(d.f, t.f);
}

#[test]
fn derivative_rejects_bad_index() {
    let t = FuncType::constant(&["x"]);
    assert!(matches!(
        type_derivative(&t, 1),
        Err(TypeError::InvalidIndex(1))
    ));
}

#[test]
fn double_derivative_matches_rule() {
    let t = t1(&["x"], x().abs().sqrt(), vec![x().abs() + Expr::one()]);
    let dd = type_derivative(&type_derivative(&t, 0).unwrap(), 0).unwrap();
    let f = x().abs() + Expr::one();
    let z = x().abs().sqrt() * f.clone() * f.clone() * x().abs().pow(-2.0);
    assert!(dd.same_as(&t1(&["x"], z, vec![f])), "{dd}");
}

#[test]
fn derivatives_commute_across_variables() {
    let t = t1(
        &["x", "y"],
        x().abs().sqrt() * y().abs(),
        vec![x().abs() + y().abs(), Expr::param("Z_h", 1.0) + Expr::one()],
    );
    let a = type_derivative(&type_derivative(&t, 0).unwrap(), 1).unwrap();
    let b = type_derivative(&type_derivative(&t, 1).unwrap(), 0).unwrap();
    assert!(a.same_as(&b), "{a} vs {b}");
}

#[test]
fn product_with_constant_type_is_identity() {
    let t = t1(&["x", "y"], x().abs(), vec![y().abs(), x().abs().sqrt()]);
    let p = type_product(&t, &FuncType::constant(&["x", "y"])).unwrap();
    assert!(p.same_as(&t));
}

#[test]
fn product_of_exponential_and_window() {
    let ex = t1(&["x"], Expr::one(), vec![x().abs()]);
    let zh = Expr::param("Z_h", 1.0);
    let h = t1(&["x"], Expr::one(), vec![zh.clone()]);
    let p = type_product(&ex, &h).unwrap();
    assert!(
        p.same_as(&t1(&["x"], Expr::one(), vec![x().abs() + zh])),
        "{p}"
    );
}

#[test]
fn product_rejects_arity_mismatch() {
    let a = FuncType::constant(&["x"]);
    let b = FuncType::constant(&["x", "y"]);
    assert!(matches!(
        type_product(&a, &b),
        Err(TypeError::ArityMismatch {
            expected: 1,
            got: 2
        })
    ));
    assert!(matches!(
        FuncType::new(&["x"], Expr::one(), vec![]),
        Err(TypeError::ArityMismatch { .. })
    ));
}

#[test]
fn compose_with_identity_inflates_by_one() {
    let outer = t1(&["x"], Expr::one(), vec![x().abs()]);
    let ident = t1(&["x"], x().abs(), vec![Expr::one()]);
    let c = type_compose(&outer, &[(ident, x())]).unwrap();
    let expect = t1(&["x"], Expr::one(), vec![x().abs() + Expr::one()]);
    let pts: Vec<Vec<f64>> = [0.3, 1.0, 7.5, -2.0].iter().map(|&v| vec![v]).collect();
    agree(&c, &expect, &pts);
}

#[test]
fn compose_with_affine_inner() {
    // outer (|y| : 1 + |y|) at y = 2x, inner type (2|x| : 1)
    let outer = t1(&["y"], x().abs(), vec![Expr::one() + x().abs()]);
    let two_x = Expr::c(2.0) * x();
    let inner = t1(&["x"], two_x.clone().abs(), vec![Expr::one()]);
    let c = type_compose(&outer, &[(inner, two_x)]).unwrap();
    let ax = x().abs();
    let expect = t1(
        &["x"],
        Expr::c(2.0) * ax.clone(),
        vec![Expr::c(2.0) * ax + Expr::c(2.0)],
    );
    let pts: Vec<Vec<f64>> = [0.1, 1.0, 3.0, -4.0].iter().map(|&v| vec![v]).collect();
    agree(&c, &expect, &pts);
}

#[test]
fn compose_rejects_mismatch_and_vanishing_inner() {
    let outer = FuncType::constant(&["u", "v"]);
    let inner = (FuncType::constant(&["x"]), x());
    assert!(matches!(
        type_compose(&outer, std::slice::from_ref(&inner)),
        Err(TypeError::ArityMismatch {
            expected: 2,
            got: 1
        })
    ));
    let outer1 = FuncType::constant(&["u"]);
    assert!(matches!(
        type_compose(&outer1, &[(FuncType::constant(&["x"]), Expr::zero())]),
        Err(TypeError::VanishingInner(0))
    ));
}

#[test]
fn w_delta_composition_is_fixture_type_plus_bounded_terms() {
    let p = WDeltaParams::default();
    let composed = w_delta_composed(&p);
    let fixture = fixture_w_delta(p).claimed;
    assert_eq!(composed.arity(), 3);
    let mut pts = Vec::new();
    for (i, &a) in [60.0, 140.0, 333.0].iter().enumerate() {
        for &b in &[40.0, 90.0, 250.0] {
            pts.push(vec![a, b, 30.0 + 50.0 * i as f64]);
        }
    }
    for pt in &pts {
        assert!((composed.z.eval(pt) - 1.0).abs() < 1e-12);
        let s = p.l1 * pt[0] + p.l2 * pt[1] + p.c0 * pt[2];
        let extra = [p.l1 * pt[0] / s, p.l2 * pt[1] / s, p.c0 * pt[2] / s];
        for j in 0..3 {
            let c = composed.f[j].eval(pt);
            let f = fixture.f[j].eval(pt);
            assert!((c - f - extra[j]).abs() < 1e-9 * c.max(1.0), "{j}: {c} {f}");
            assert!(c <= f + 1.0 + 1e-12);
        }
    }
}

#[test]
fn multi_indices_counts() {
    assert_eq!(multi_indices(1, 3).len(), 3);
    assert_eq!(multi_indices(2, 2).len(), 5);
    assert_eq!(multi_indices(3, 3).len(), 19);
    assert!(multi_indices(3, 2)
        .iter()
        .all(|i| (1..=2).contains(&i.iter().sum::<u32>())));
}

fn opts(samples: usize) -> VerifyOptions {
    VerifyOptions {
        samples,
        ..Default::default()
    }
}

#[test]
fn exponential_passes_within_two_pi_cubed() {
    let r = verify_type(&fixture_exponential(), &multi_indices(1, 3), &opts(64)).unwrap();
    assert!(r.pass, "{r:?}");
    let bound = (2.0 * std::f64::consts::PI).powi(3) * 1.05;
    assert!(r.constant <= bound && r.constant_dilated <= bound);
    assert_eq!(r.verdict(), "PASS");
    assert_eq!(r.rows.len(), 64 * 3);
}

#[test]
fn wrong_exponential_fails() {
    let r = verify_type(
        &fixture_wrong_exponential(),
        &multi_indices(1, 3),
        &opts(64),
    )
    .unwrap();
    assert!(!r.pass);
    assert_eq!(r.verdict(), "FAIL");
    assert!(r.constant > 1e3);
    let w = r.worst.unwrap();
    assert!(w.point[0] > 100.0, "worst point {:?}", w.point);
}

#[test]
fn bump_and_product_pass() {
    let idx = multi_indices(1, 3);
    let r = verify_type(&fixture_bump(), &idx, &opts(64)).unwrap();
    assert!(r.pass, "{r:?}");
    let r = verify_type(&fixture_product(100.0), &idx, &opts(64)).unwrap();
    assert!(r.pass, "{} {}", r.constant, r.constant_dilated);
}

#[test]
fn w_delta_fixture_and_composed_type_pass() {
    let p = WDeltaParams::default();
    let idx = multi_indices(3, 2);
    let tf = fixture_w_delta(p);
    let r = verify_type(&tf, &idx, &opts(32)).unwrap();
    assert!(r.pass, "{} {}", r.constant, r.constant_dilated);
    let rc = verify_type(&tf.with_claim(w_delta_composed(&p)), &idx, &opts(32)).unwrap();
    assert!(rc.pass);
    assert!(rc.constant <= r.constant * (1.0 + 1e-12));
}

#[test]
fn kernel_i_passes() {
    let idx = multi_indices(3, 2);
    let r = verify_type(
        &fixture_kernel_i(KernelFixtureParams::default()),
        &idx,
        &opts(12),
    )
    .unwrap();
    assert!(r.pass, "{} {}", r.constant, r.constant_dilated);
    assert!(r.constant <= 1e3);
}

#[test]
fn verify_rejects_bad_input() {
    let tf = fixture_exponential();
    assert!(matches!(
        verify_type(&tf, &[vec![1, 0]], &opts(4)),
        Err(TypeError::ArityMismatch { .. })
    ));
    let bad = TypedFunction::new("f", tf.claimed.clone(), vec![(0.0, 1.0)], |v| e(v[0]));
    assert!(matches!(
        verify_type(&bad, &[vec![1]], &opts(4)),
        Err(TypeError::Domain(_))
    ));
}

#[test]
fn verify_is_deterministic() {
    let idx = multi_indices(1, 2);
    let a = verify_type(&fixture_product(50.0), &idx, &opts(16)).unwrap();
    let b = verify_type(&fixture_product(50.0), &idx, &opts(16)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn e_is_periodic() {
    for &t in &[0.0, 0.25, 0.5, 3.75] {
        let d = e(t) - e(t + 7.0);
        assert!(d.norm() < 1e-12);
    }
    assert!((e(0.25) - num_complex::Complex64::new(0.0, 1.0)).norm() < 1e-15);
}

fn small_type() -> impl Strategy<Value = FuncType> {
    let atom = prop_oneof![
        Just(Expr::one()),
        Just(Expr::var(0).abs()),
        Just(Expr::var(1).abs()),
        Just(Expr::var(0).abs().sqrt()),
        (1u32..5).prop_map(|c| Expr::c(c as f64)),
        Just(Expr::param("Z_h", 1.0)),
    ];
    (atom.clone(), atom.clone(), atom)
        .prop_map(|(z, f0, f1)| FuncType::new(&["x", "y"], z, vec![f0, f1]).unwrap())
}

proptest! {
    #[test]
    fn product_is_commutative_and_associative(a in small_type(), b in small_type(), c in small_type()) {
        let ab = type_product(&a, &b).unwrap();
        let ba = type_product(&b, &a).unwrap();
        prop_assert!(ab.same_as(&ba));
        let l = type_product(&ab, &c).unwrap();
        let r = type_product(&a, &type_product(&b, &c).unwrap()).unwrap();
        prop_assert!(l.same_as(&r));
    }

    #[test]
    fn derivative_commutes(a in small_type()) {
        let xy = type_derivative(&type_derivative(&a, 0).unwrap(), 1).unwrap();
        let yx = type_derivative(&type_derivative(&a, 1).unwrap(), 0).unwrap();
        prop_assert!(xy.same_as(&yx));
    }

    #[test]
    fn zero_marker_is_independence(c in -5.0f64..5.0, x0 in 0.5f64..10.0, y0 in 0.5f64..10.0) {
        // f(x, y) = e(c x) has F_y = 0 and no y-dependence
        let f = move |v: &[f64]| e(c * v[0]);
        prop_assert_eq!(f(&[x0, y0]), f(&[x0, y0 * 3.0]));
        let t = FuncType::new(&["x", "y"], Expr::one(), vec![Expr::var(0).abs(), Expr::zero()]).unwrap();
        prop_assert!(type_derivative(&t, 1).unwrap().z.is_zero());
    }
}
