use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Write};
use std::net::TcpListener;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use proptest::prelude::*;
use rankinlab::forms::*;

/// Coefficients of q prod_m (1 - q^m)^a (1 - q^{bm})^c by repeated multiplication
/// of truncated integer series.
fn eta_product(n_max: usize, factors: &[(usize, u32)]) -> Vec<i128> {
    let mut s = vec![0i128; n_max];
    s[0] = 1;
    for &(step, power) in factors {
        for m in (step..n_max).step_by(step) {
            for _ in 0..power {
                for i in (m..n_max).rev() {
                    s[i] -= s[i - m];
                }
            }
        }
    }
    s
}

fn level_eleven_file(n_max: usize) -> String {
    let a = eta_product(n_max, &[(1, 2), (11, 2)]);
    let mut out = String::from(
        "# eta(z)^2 eta(11z)^2\nlabel: 11.2.a.a\nkind: holomorphic\nlevel: 11\nweight: 2\n\
         newform: true\nnormalization: arithmetic\natkin_lehner: 11:-1\ncoefficients:\n",
    );
    for (i, c) in a.iter().enumerate() {
        out.push_str(&format!("{} {}\n", i + 1, c));
    }
    out
}

#[test]
fn tau_matches_direct_series_product() {
    let tau = ramanujan_tau(300);
    let oracle = eta_product(300, &[(1, 24)]);
    assert_eq!(tau, oracle);
    assert_eq!(tau[0], 1);
    assert_eq!(tau[1], -24);
    assert_eq!(tau[5], tau[1] * tau[2]);
}

#[test]
fn delta_hecke_examples() {
    let d = delta_oracle(100);
    let l = |n| d.lambda(n).unwrap();
    assert!((l(2) * l(3) - l(6)).abs() < 1e-9);
    assert!((l(2) * l(2) - l(4) - 1.0).abs() < 1e-9);
    assert!((l(2) * l(4) - l(8) - l(2)).abs() < 1e-9);
    assert_eq!(l(1), 1.0);
}

#[test]
fn delta_full_hecke_grid() {
    let d = delta_oracle(900);
    let r = hecke_check(&d, 30, 30).unwrap();
    assert_eq!(r.pairs_checked, 900);
    assert!(r.max_abs_violation < 1e-9, "{r:?}");
}

#[test]
fn delta_coprime_multiplicativity() {
    let d = delta_oracle(2000);
    for m in 1..=2000u64 {
        for n in 1..=2000 / m {
            if rankinlab::arith::gcd(m, n) == 1 {
                let diff = d.lambda(m * n).unwrap() - d.lambda(m).unwrap() * d.lambda(n).unwrap();
                assert!(diff.abs() < 1e-9, "({m}, {n})");
            }
        }
    }
}

#[test]
fn hecke_check_needs_coefficients() {
    let d = delta_oracle(50);
    assert!(matches!(
        hecke_check(&d, 10, 10),
        Err(FormError::InsufficientCoefficients { needed: 100, .. })
    ));
}

#[test]
fn level_eleven_newform_loads() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("11.2.a.a.txt"), level_eleven_file(400)).unwrap();
    let src = CoefficientSource::Directory(dir.path().to_path_buf());
    let f = load_form(&src, "11.2.a.a").unwrap();
    assert_eq!(f.level, 11);
    assert_eq!(f.atkin_lehner_product(11), Some(-1));
    assert!((f.lambda(11).unwrap().abs() - 11f64.powf(-0.5)).abs() < 1e-6);
    // a(2) = -2, a(3) = -1, a(5) = 1
    assert!((f.lambda(2).unwrap() + 2.0 / 2f64.sqrt()).abs() < 1e-15);
    assert!((f.lambda(3).unwrap() + 1.0 / 3f64.sqrt()).abs() < 1e-15);
    let r = hecke_check(&f, 20, 20).unwrap();
    assert!(r.max_abs_violation < 1e-9);
    assert!(matches!(
        load_form(&src, "11.2.a.b"),
        Err(FormError::UnknownLabel(_))
    ));
}

#[test]
fn normalization_violation_is_rejected() {
    let text = "label: bad\nkind: holomorphic\nlevel: 1\nweight: 12\nnewform: true\n\
                normalization: analytic\ncoefficients:\n1 2\n2 0.1\n";
    assert!(matches!(
        parse_coefficient_file(text, "bad"),
        Err(FormError::InvariantViolation { n: 1, .. })
    ));
}

#[test]
fn deligne_and_level_violations_are_rejected() {
    let text = "label: bad\nkind: holomorphic\nlevel: 1\nweight: 12\nnewform: true\n\
                normalization: analytic\ncoefficients:\n1 1\n2 2.5\n";
    assert!(matches!(
        parse_coefficient_file(text, "bad"),
        Err(FormError::InvariantViolation { n: 2, .. })
    ));
    let text = "label: bad\nkind: holomorphic\nlevel: 11\nweight: 2\nnewform: true\n\
                normalization: analytic\ncoefficients:\n1 1\n2 0\n3 0\n4 0\n5 0\n6 0\n7 0\n\
                8 0\n9 0\n10 0\n11 0.5\n";
    assert!(matches!(
        parse_coefficient_file(text, "bad"),
        Err(FormError::InvariantViolation { n: 11, .. })
    ));
}

#[test]
fn malformed_files_name_the_problem() {
    let text = "label: x\nkind: holomorphic\nlevel: 1\nweight: 12\ncoefficients:\n1 1\n2 abc\n";
    match parse_coefficient_file(text, "x") {
        Err(FormError::MalformedData { detail, .. }) => assert!(!detail.is_empty()),
        other => panic!("{other:?}"),
    }
}

#[test]
fn coefficient_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = delta_oracle(500);
    let path = dir.path().join("1.12.a.a.txt");
    write_coefficient_file(&d, &path).unwrap();
    let back = load_form(&CoefficientSource::File(path), "1.12.a.a").unwrap();
    assert_eq!(back, d);
}

#[test]
fn maass_form_carries_reflection_sign() {
    let text = "label: m\nkind: maass\nspectral: 9.53369526135\nlevel: 1\nnewform: true\n\
                reflection: -1\ncoefficients:\n1 1\n2 1.549304\n3 0.246899\n";
    let f = parse_coefficient_file(text, "m").unwrap();
    assert_eq!(f.reflection_sign, Some(-1));
    assert!(f.whittaker(1.0).unwrap().is_finite());
}

#[test]
fn wilton_sum_examples() {
    let d = delta_oracle(10_000);
    assert_eq!(wilton_sum(&d, 0.5, 0.3).unwrap().norm(), 0.0);
    let s3 = wilton_sum(&d, 1e3, 0.0).unwrap().norm();
    let s4 = wilton_sum(&d, 1e4, 0.0).unwrap().norm();
    // bounded uniformly in X at fixed level
    let c = 2.0 * s3.max(1.0);
    assert!(s4 <= c, "{s3} {s4}");
    for alpha in [0.5f64.sqrt(), 1.0 / 3.0, 0.1234] {
        let w = wilton_sum(&d, 1e4, alpha).unwrap().norm();
        assert!(w < 10.0, "alpha = {alpha}: {w}");
    }
    assert!(matches!(
        wilton_sum(&d, 2e4, 0.0),
        Err(FormError::InsufficientCoefficients { .. })
    ));
}

#[test]
fn rankin_sum_examples() {
    let d = delta_oracle(10_000);
    assert_eq!(rankin_sum(&d, 0.9).unwrap(), 0.0);
    let v = rankin_sum(&d, 1e4).unwrap();
    assert!(v <= 1.0 * 1e4f64.ln(), "{v}");
    let mut prev = 0.0;
    let mut x = 1.0;
    while x <= 1e4 {
        let s = rankin_sum(&d, x).unwrap();
        assert!(s >= prev);
        prev = s;
        x *= 2.0;
    }
}

/// Minimal HTTP server answering every request with `body`, counting requests.
fn mock_lmfdb(body: String) -> (String, Arc<AtomicUsize>) {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let url = format!("http://{}", listener.local_addr().unwrap());
    let hits = Arc::new(AtomicUsize::new(0));
    let counter = hits.clone();
    std::thread::spawn(move || {
        for stream in listener.incoming() {
            let Ok(mut stream) = stream else { continue };
            let mut reader = BufReader::new(stream.try_clone().unwrap());
            let mut line = String::new();
            while reader.read_line(&mut line).map(|n| n > 0).unwrap_or(false) {
                if line == "\r\n" {
                    break;
                }
                line.clear();
            }
            counter.fetch_add(1, Ordering::SeqCst);
            let resp = format!(
                "HTTP/1.1 200 OK\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{}",
                body.len(),
                body
            );
            let _ = stream.write_all(resp.as_bytes());
        }
    });
    (url, hits)
}

#[test]
fn lmfdb_client_caches_responses() {
    let traces: Vec<i128> = std::iter::once(0)
        .chain(eta_product(100, &[(1, 2), (11, 2)]))
        .collect();
    let body = serde_json::json!({
        "data": [{
            "label": "11.2.a.a", "level": 11, "weight": 2, "dim": 1, "char_order": 1,
            "traces": traces, "atkin_lehner_eigenvals": [[11, -1]]
        }]
    })
    .to_string();
    let (url, hits) = mock_lmfdb(body);
    let cache = tempfile::tempdir().unwrap();
    let src = CoefficientSource::Lmfdb {
        base_url: url,
        cache_dir: cache.path().to_path_buf(),
    };
    let first = load_form(&src, "11.2.a.a").unwrap();
    assert_eq!(hits.load(Ordering::SeqCst), 1);
    let second = load_form(&src, "11.2.a.a").unwrap();
    assert_eq!(
        hits.load(Ordering::SeqCst),
        1,
        "second load must come from the cache"
    );
    let bits = |f: &CuspForm| {
        f.coefficients()
            .iter()
            .map(|x| x.to_bits())
            .collect::<Vec<_>>()
    };
    assert_eq!(bits(&first), bits(&second));
    assert_eq!(first.atkin_lehner, BTreeMap::from([(11, -1)]));
    assert!((first.lambda(11).unwrap().abs() - 11f64.powf(-0.5)).abs() < 1e-6);
    assert!(matches!(
        load_form(&src, "11.2.a.b"),
        Err(FormError::UnknownLabel(_))
    ));
    assert!(matches!(
        load_form(&src, "../etc"),
        Err(FormError::UnknownLabel(_))
    ));
}

#[test]
fn unreachable_service_is_a_network_error() {
    let port = TcpListener::bind("127.0.0.1:0")
        .unwrap()
        .local_addr()
        .unwrap()
        .port();
    let cache = tempfile::tempdir().unwrap();
    let src = CoefficientSource::Lmfdb {
        base_url: format!("http://127.0.0.1:{port}"),
        cache_dir: cache.path().to_path_buf(),
    };
    assert!(matches!(
        load_form(&src, "11.2.a.a"),
        Err(FormError::Network(_))
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn delta_obeys_deligne(n in 1u64..3000) {
        let d = delta_oracle(3000);
        prop_assert!(d.lambda(n).unwrap().abs() <= rankinlab::arith::divisor_tau(n) as f64);
    }

    #[test]
    fn wilton_sum_is_linear(a in -2.0f64..2.0, b in -2.0f64..2.0, alpha in 0.0f64..1.0) {
        let d = delta_oracle(200);
        let mut pert = d.coefficients().to_vec();
        pert[6] += a;
        pert[40] += b;
        let g = CuspForm::new("p", d.kind, 1, false, pert, BTreeMap::new()).unwrap();
        let diff = wilton_sum(&g, 200.0, alpha).unwrap() - wilton_sum(&d, 200.0, alpha).unwrap();
        let e = |n: f64, c: f64| num_complex::Complex64::from_polar(c / n.sqrt(), 2.0 * std::f64::consts::PI * (n * alpha).fract());
        let want = e(7.0, a) + e(41.0, b);
        prop_assert!((diff - want).norm() < 1e-12);
    }
}
