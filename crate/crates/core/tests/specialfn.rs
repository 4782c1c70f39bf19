use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use rankinlab::specialfn::*;

// Reference values from mpmath at 30 significant digits.
const J_TABLE: &[(f64, f64, f64)] = &[
    (0.0, 0.5, 0.9384698072408129),
    (0.0, 3.0, -0.26005195490193345),
    (0.0, 9.9, -0.2403411055347603),
    (0.0, 10.1, -0.24902965058091),
    (0.0, 47.0, -0.07124878990180619),
    (0.0, 400.0, -0.03882518153078396),
    (0.0, 2500.0, 0.0012370092569681497),
    (1.0, 0.5, 0.2422684576748739),
    (1.0, 3.0, 0.3390589585259365),
    (1.0, 9.9, 0.06836983228369205),
    (1.0, 10.1, 0.01839551545757168),
    (1.0, 47.0, 0.09126876424000789),
    (1.0, 400.0, -0.00922205842858635),
    (1.0, 2500.0, -0.015909426450156753),
    (11.0, 0.5, 5.9418539622324616e-15),
    (11.0, 3.0, 1.7939896623474464e-06),
    (11.0, 9.9, 0.11600652926899067),
    (11.0, 10.1, 0.13041284511756474),
    (11.0, 47.0, 0.043880550861313865),
    (11.0, 400.0, 0.014921890772078075),
    (11.0, 2500.0, 0.015875159164762155),
    (23.5, 0.5, 5.6252780234516e-38),
    (23.5, 3.0, 9.950616392949567e-20),
    (23.5, 9.9, 6.019593530220686e-08),
    (23.5, 10.1, 9.229885700462959e-08),
    (23.5, 47.0, -0.11497492039911716),
    (23.5, 400.0, 0.005458401565285519),
    (23.5, 2500.0, 0.013194560451261538),
    (0.3, 0.5, 0.7002604885070547),
    (0.3, 3.0, -0.0672549924820731),
    (0.3, 9.9, -0.17851060175591094),
    (0.3, 10.1, -0.20863436901803187),
    (0.3, 47.0, -0.021815934868509784),
    (0.3, 400.0, -0.038759249531547614),
    (0.3, 2500.0, -0.006120392071089021),
];

// (t, x, cosh(pi t) K_{2it}(x), (Y_{2it}(x) + Y_{-2it}(x)) / cosh(pi t)), mpmath.
const MAASS_TABLE: &[(f64, f64, f64, f64)] = &[
    (0.0, 0.02, 4.028457330358716, -5.1279108191854705),
    (0.0, 1.0, 0.42102443824070834, 0.1765139284313539),
    (0.0, 7.5, 0.00024917761635611437, 0.23462657229641726),
    (0.0, 30.0, 2.1324774964630563e-14, -0.23459146337332806),
    (0.0, 250.0, 2.1147193716964606e-110, -0.08643369088073254),
    (0.25, 0.02, 1.9336302281407551, -2.461685054018342),
    (0.25, 1.0, 0.5087068708562476, 0.02251248487810389),
    (0.25, 7.5, 0.00032492362515109584, 0.22555764036819548),
    (0.25, 30.0, 2.813142385710172e-14, -0.2338539396495297),
    (0.25, 250.0, 2.79977905006658e-110, -0.08640754053385122),
    (0.9, 0.02, 0.851357912929352, -1.0839738527434322),
    (0.9, 1.0, 0.9726468816531146, -1.023963611018656),
    (0.9, 7.5, 0.0017230917245916186, 0.11505965775937141),
    (0.9, 30.0, 1.7148648805629939e-13, -0.22473366452036278),
    (0.9, 250.0, 1.7818469473893557e-109, -0.086093115555652),
    (1.0, 0.02, 0.07516070484697154, -0.0957838661442907),
    (1.0, 1.0, 0.934508469651296, -1.0647726879535808),
    (1.0, 7.5, 0.002244681570264439, 0.08667871217012386),
    (1.0, 30.0, 2.314964624429482e-13, -0.22232909519604938),
    (1.0, 250.0, 2.431878707091786e-109, -0.08601270526992602),
    (3.3, 0.02, -0.30582897316238655, 0.38940613054635087),
    (3.3, 1.0, -0.4761240148602187, 0.6088414936962864),
    (3.3, 7.5, 0.21940490971430202, -0.3693283928289885),
    (3.3, 30.0, 1.6553984958261067e-10, -0.06097451897617104),
    (3.3, 250.0, 3.0824933942941665e-106, -0.08155822635108614),
    (
        9.53369526135,
        0.02,
        0.019729214247317342,
        -0.025116188326343707,
    ),
    (9.53369526135, 1.0, 0.22283104232157877, -0.2772065554295704),
    (9.53369526135, 7.5, 0.23539136453752568, 0.18941120762545163),
    (
        9.53369526135,
        30.0,
        0.0002266166345055633,
        -0.26086981792096525,
    ),
    (
        9.53369526135,
        250.0,
        5.2054656294110677e-98,
        -0.029927523668507754,
    ),
    (40.0, 0.02, -0.1264178396173824, 0.16096037990047427),
    (40.0, 1.0, 0.010604761401580157, -0.012389427764418879),
    (40.0, 7.5, 0.0928579404755086, -0.15649808669265192),
    (40.0, 30.0, 0.12383419550338577, -0.17175437178861075),
    (40.0, 250.0, 1.0069716150454393e-61, -0.07720087052938483),
];

fn order(v: f64) -> BesselOrder {
    if v == v.trunc() {
        BesselOrder::Integer(v as i64)
    } else {
        BesselOrder::Real(v)
    }
}

/// Taylor partial sum of J_n(x) with `terms` terms.
fn taylor_j(n: u32, x: f64, terms: u32) -> f64 {
    let mut term = (x / 2.0).powi(n as i32) / (1..=n).map(f64::from).product::<f64>();
    let mut sum = 0.0;
    for k in 0..terms {
        sum += term;
        term *= -(x * x / 4.0) / ((k + 1) as f64 * (k + 1 + n) as f64);
    }
    sum
}

/// Y_0(x) = (2/pi)(ln(x/2) + gamma) J_0(x) + (2/pi) sum (-1)^{k+1} H_k (x^2/4)^k / (k!)^2.
fn y0_series(x: f64) -> f64 {
    let euler_gamma = 0.577_215_664_901_532_9;
    let q = x * x / 4.0;
    let (mut term, mut h, mut sum) = (1.0, 0.0, 0.0);
    for k in 1..60 {
        term *= -q / (k * k) as f64;
        h += 1.0 / k as f64;
        sum -= term * h;
    }
    2.0 / PI * ((x / 2.0).ln() + euler_gamma) * taylor_j(0, x, 60) + 2.0 / PI * sum
}

/// int_0^inf e^{-x cosh u} cos(2tu) du by the trapezoid rule, which converges
/// geometrically for this doubly exponentially decaying integrand.
fn k_trapezoid(t: f64, x: f64, step: f64) -> f64 {
    let mut sum = 0.5 * (-x).exp();
    let mut u = step;
    loop {
        let f = (-x * u.cosh()).exp();
        if f < 1e-300 {
            break;
        }
        sum += f * (2.0 * t * u).cos();
        u += step;
    }
    sum * step
}

#[test]
fn bessel_j_trivial_values() {
    let j0 = bessel_j(BesselOrder::Integer(0), 0.0).unwrap();
    assert_eq!(j0.value, 1.0);
    let j1 = bessel_j(BesselOrder::Integer(1), 0.0).unwrap();
    assert_eq!(j1.value, 0.0);
    let j11 = bessel_j(BesselOrder::Integer(11), 1.0).unwrap();
    assert!((j11.value - taylor_j(11, 1.0, 60)).abs() < 1e-12);
}

#[test]
fn bessel_j_matches_reference_table() {
    for &(v, x, want) in J_TABLE {
        let got = bessel_j(order(v), x).unwrap();
        let err = (got.value - want).abs();
        assert!(err < 1e-12, "J_{v}({x}) = {} vs {want}", got.value);
        assert!(
            err <= 10.0 * got.abs_err + 1e-15,
            "J_{v}({x}): error {err:e} above estimate {:e}",
            got.abs_err
        );
    }
}

#[test]
fn phase_decomposition_reconstructs_j() {
    for x in [5.0, 20.0, 100.0] {
        let w = phase_w(11.0, x).unwrap();
        let e = Complex64::from_polar(1.0, x);
        let recon = 2.0 * (e * w.value).re;
        let j = bessel_j(BesselOrder::Integer(11), x).unwrap();
        assert!(
            (recon - j.value).abs() <= 2.0 * w.abs_err + j.abs_err + 1e-14,
            "x = {x}: {recon} vs {}",
            j.value
        );
    }
}

#[test]
fn taylor_and_phase_paths_agree_on_log_grid() {
    let mut x: f64 = 0.1;
    while x <= 1e3 {
        let w = phase_w(11.0, x).unwrap();
        let recon = 2.0 * (Complex64::from_polar(1.0, x) * w.value).re;
        let j = bessel_j(BesselOrder::Integer(11), x).unwrap();
        assert!(
            (recon - j.value).abs() <= 2.0 * w.abs_err + j.abs_err + 1e-14,
            "x = {x}"
        );
        x *= 1.5;
    }
}

#[test]
fn phase_function_envelope() {
    // |W_v(x)| <= C (1 + x)^{-1/2}; C is large for x near 1 because W_11 grows
    // like x^{-11} there, and the ratio settles at 1/sqrt(2 pi) as x grows
    let ratio = |x: f64| phase_w(11.0, x).unwrap().value.norm() * (1.0 + x).sqrt();
    let mut c: f64 = 0.0;
    let mut x: f64 = 1.0;
    while x <= 1e4 {
        c = c.max(ratio(x));
        x *= 2.0;
    }
    assert!(c.is_finite(), "fitted C = {c}");
    for x in [1e3, 1e4, 1e5] {
        assert!(
            (ratio(x) - (2.0 * PI).sqrt().recip()).abs() < 0.05,
            "x = {x}"
        );
    }
    let far = phase_w(11.0, 1e6).unwrap().value.norm();
    let near = phase_w(11.0, 1e2).unwrap().value.norm();
    assert!(far < near);
}

#[test]
fn small_argument_derivative_bound() {
    // |x^i J_v^(i)(x)| <= C x^v for x <= 10, i <= 2, central differences
    let v = 11.0;
    let j = |x: f64| bessel_j(BesselOrder::Integer(11), x).unwrap().value;
    let mut worst: f64 = 0.0;
    let mut x: f64 = 0.5;
    while x <= 10.0 {
        let h = 1e-3 * x;
        let d1 = (j(x + h) - j(x - h)) / (2.0 * h);
        let d2 = (j(x + h) - 2.0 * j(x) + j(x - h)) / (h * h);
        for val in [j(x), x * d1, x * x * d2] {
            worst = worst.max(val.abs() / x.powf(v));
        }
        x *= 1.25;
    }
    assert!(worst < 1e-3, "fitted C = {worst}");
}

#[test]
fn maass_functions_match_reference_table() {
    for &(t, x, k_scaled, y_scaled) in MAASS_TABLE {
        let k = bessel_k_imag_scaled(t, x).unwrap();
        let y = bessel_y_pair_scaled(t, x).unwrap();
        assert!(
            (k.value - k_scaled).abs() < 1e-11,
            "K t={t} x={x}: {} vs {k_scaled}",
            k.value
        );
        assert!(
            (y.value - y_scaled).abs() < 1e-11,
            "Y t={t} x={x}: {} vs {y_scaled}",
            y.value
        );
        assert!((k.value - k_scaled).abs() <= 10.0 * k.abs_err + 1e-15);
        assert!((y.value - y_scaled).abs() <= 10.0 * y.abs_err + 1e-15);
        // unscaled versions carry the same relative accuracy
        let c = (PI * t).cosh();
        let kr = bessel_k_imag(t, x).unwrap();
        assert!((kr.value - k_scaled / c).abs() <= 1e-11 / c);
        let yr = bessel_y_pair(t, x).unwrap();
        assert!((yr.value - y_scaled * c).abs() <= 1e-11 * c);
    }
}

#[test]
fn k0_against_trapezoid_oracle() {
    let k = bessel_k_imag(0.0, 1.0).unwrap();
    let coarse = k_trapezoid(0.0, 1.0, 0.05);
    let fine = k_trapezoid(0.0, 1.0, 0.025);
    assert!((coarse - fine).abs() < 1e-12);
    assert!((k.value - fine).abs() < 1e-8);
    let k = bessel_k_imag(0.4, 2.5).unwrap();
    assert!((k.value - k_trapezoid(0.4, 2.5, 0.02)).abs() < 1e-10);
}

#[test]
fn k_decays_like_exponential() {
    let k = bessel_k_imag(0.0, 50.0).unwrap();
    assert!(k.value.abs() <= (-50.0f64).exp() * 10.0);
    let far = bessel_k_imag(0.7, 800.0).unwrap();
    assert_eq!(far.value, 0.0);
    assert!(far.abs_err >= 0.0 && far.abs_err.is_finite());
}

#[test]
fn y_pair_at_zero_order_is_twice_y0() {
    let y = bessel_y_pair(0.0, 1.0).unwrap();
    assert!((y.value - 2.0 * y0_series(1.0)).abs() < 1e-8);
    assert!((y0_series(1.0) - 0.08825696421567696).abs() < 1e-13);
}

#[test]
fn y_pair_envelope_at_large_x() {
    let mut c: f64 = 0.0;
    let mut x: f64 = 10.0;
    while x <= 1e4 {
        c = c.max(bessel_y_pair(0.5, x).unwrap().value.abs() * x.sqrt());
        x *= 1.7;
    }
    assert!(c < 5.0, "fitted C = {c}");
}

#[test]
fn voronoi_kernels() {
    let hol = KernelKind::Holomorphic { weight: 12 };
    for y in [0.01, 0.3, 2.0, 17.0] {
        assert_eq!(voronoi_kernel(hol, Sign::Minus, y).unwrap().value, 0.0);
    }
    // J^+(y) = 2 pi J_11(4 pi y) ~ 2 pi (2 pi y)^11 / 11! as y -> 0
    let lead = 2.0 * PI * (2.0 * PI).powi(11) / 39_916_800.0;
    for y in [1e-3, 3e-3, 1e-2] {
        let v = voronoi_kernel(hol, Sign::Plus, y).unwrap().value;
        assert!(v.abs() <= 1.01 * lead * y.powi(11));
    }
    let maass = KernelKind::Maass { t: 1.0 };
    let m = voronoi_kernel(maass, Sign::Minus, 10.0).unwrap();
    assert!(m.value != 0.0);
    assert!(m.value.abs() <= (-4.0 * PI * 10.0).exp() * 1e3);
}

#[test]
fn maass_kernels_at_large_spectral_parameter() {
    // t of the first level-one Maass cusp form; mpmath values of
    // (pi / cosh pi t)(Y_{2it} + Y_{-2it})(4 pi y) and 4 cosh(pi t) K_{2it}(4 pi y)
    let kind = KernelKind::Maass { t: 9.53369526135 };
    let cases = [
        (0.01, -0.465433003, 0.465009636),
        (0.5, -0.134682807, -0.934329200),
        (1.0, -0.829762832, -1.23716169),
        (2.0, -0.884717375, 0.0352578354),
    ];
    for (y, plus, minus) in cases {
        let p = voronoi_kernel(kind, Sign::Plus, y).unwrap().value;
        let m = voronoi_kernel(kind, Sign::Minus, y).unwrap().value;
        assert!((p - plus).abs() < 1e-8, "J+({y}) = {p}");
        assert!((m - minus).abs() < 1e-8, "J-({y}) = {m}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn imaginary_order_is_even_in_t(t in 0.0f64..20.0, x in 0.01f64..100.0) {
        prop_assert_eq!(bessel_k_imag(t, x).unwrap().value, bessel_k_imag(-t, x).unwrap().value);
        prop_assert_eq!(bessel_y_pair(t, x).unwrap().value, bessel_y_pair(-t, x).unwrap().value);
    }

    #[test]
    fn j_three_term_recurrence(n in 1i64..30, x in 0.05f64..300.0) {
        let j = |k: i64| bessel_j(BesselOrder::Integer(k), x).unwrap();
        let (a, b, c) = (j(n - 1), j(n), j(n + 1));
        let lhs = a.value + c.value;
        let rhs = 2.0 * n as f64 / x * b.value;
        let tol = a.abs_err + c.abs_err + 2.0 * n as f64 / x * b.abs_err + 1e-13;
        prop_assert!((lhs - rhs).abs() <= tol, "{} vs {}", lhs, rhs);
    }

    #[test]
    fn scaled_k_stays_of_order_one(t in 1.0f64..30.0, x in 0.05f64..50.0) {
        // cosh(pi t) K_{2it}(x) is bounded uniformly in t, and the scaled
        // evaluation keeps its absolute error small on the whole range
        let k = bessel_k_imag_scaled(t, x).unwrap();
        prop_assert!(k.value.abs() < 10.0);
        prop_assert!(k.abs_err < 1e-9);
    }
}
