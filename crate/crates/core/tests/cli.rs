use std::fs;
use std::path::Path;

use rankinlab::cli::{main_with_args, parse_config_file, schema, VERBS};

fn run_to(dir: &Path, name: &str, args: &[&str]) -> (i32, String) {
    let out = dir.join(name);
    let mut full = vec!["rankinlab".to_string()];
    full.extend(args.iter().map(|s| s.to_string()));
    full.push("--output".into());
    full.push(out.display().to_string());
    let code = main_with_args(full);
    let text = fs::read_to_string(&out).unwrap_or_default();
    (code, text)
}

fn header_value<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    let prefix = format!("# {key} = ");
    text.lines().find_map(|l| l.strip_prefix(prefix.as_str()))
}

#[test]
fn every_verb_has_a_schema() {
    let names: Vec<&str> = VERBS.iter().map(|v| v.name).collect();
    for verb in [
        "arith",
        "bessel",
        "transform",
        "forms",
        "verify-petersson",
        "verify-voronoi",
        "verify-jutila",
        "verify-large-sieve",
        "moment",
        "typecalc",
        "fetch",
    ] {
        assert!(names.contains(&verb), "{verb}");
    }
    for v in VERBS {
        let s = schema(v);
        assert!(s.contains("--seed") && s.contains("--config") && s.contains("--coeff-dir"));
        for p in v.params {
            assert!(
                s.contains(&format!("--{}", p.key)),
                "{} lacks {}",
                v.name,
                p.key
            );
        }
    }
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(main_with_args(["rankinlab"]), 1);
    assert_eq!(main_with_args(["rankinlab", "frobnicate"]), 1);
    assert_eq!(
        main_with_args(["rankinlab", "arith", "--no-such-flag", "3"]),
        1
    );
    assert_eq!(main_with_args(["rankinlab", "arith", "--c-max", "many"]), 1);
    assert_eq!(main_with_args(["rankinlab", "arith", "--format", "xml"]), 1);
    assert_eq!(main_with_args(["rankinlab", "typecalc", "--order", "4"]), 1);
    assert_eq!(
        main_with_args(["rankinlab", "typecalc", "--fixture", "nope"]),
        1
    );
}

#[test]
fn passing_run_exits_zero_with_header() {
    let dir = tempfile::tempdir().unwrap();
    let (code, text) = run_to(
        dir.path(),
        "arith.csv",
        &[
            "arith", "--c-max", "40", "--p-max", "200", "--d-max", "30", "--seed", "17",
        ],
    );
    assert_eq!(code, 0, "{text}");
    assert!(text.starts_with("# rankinlab "));
    assert_eq!(header_value(&text, "seed"), Some("17"));
    assert_eq!(header_value(&text, "verb"), Some("arith"));
    assert_eq!(header_value(&text, "c-max"), Some("40"));
    assert_eq!(header_value(&text, "verdict"), Some("PASS"));
}

#[test]
fn failing_check_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let (code, text) = run_to(
        dir.path(),
        "sieve.csv",
        &[
            "verify-large-sieve",
            "--trials",
            "2",
            "--q",
            "5",
            "--z",
            "1",
            "--factor",
            "1e-9",
        ],
    );
    assert_eq!(code, 2, "{text}");
    assert_eq!(header_value(&text, "verdict"), Some("FAIL"));
}

#[test]
fn runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "verify-large-sieve",
        "--trials",
        "6",
        "--q",
        "6",
        "--z",
        "1,2",
        "--seed",
        "99",
        "--threads",
        "2",
    ];
    let (c1, a) = run_to(dir.path(), "a.csv", &args);
    let (c2, b) = run_to(dir.path(), "b.csv", &args);
    assert_eq!(c1, 0);
    assert_eq!(c1, c2);
    let strip = |t: &str| {
        t.lines()
            .filter(|l| !l.starts_with("# output = "))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(&a), strip(&b));
    let (_, c) = run_to(
        dir.path(),
        "c.csv",
        &[
            "verify-large-sieve",
            "--trials",
            "6",
            "--q",
            "6",
            "--z",
            "1,2",
            "--seed",
            "100",
            "--threads",
            "2",
        ],
    );
    assert_ne!(
        strip(&a),
        strip(&c),
        "a different seed draws different coefficients"
    );
}

#[test]
fn thread_count_does_not_change_rows() {
    let dir = tempfile::tempdir().unwrap();
    let base = [
        "verify-large-sieve",
        "--trials",
        "4",
        "--q",
        "6",
        "--z",
        "1",
        "--seed",
        "3",
    ];
    let rows = |t: &str| {
        t.lines()
            .filter(|l| !l.starts_with('#'))
            .map(String::from)
            .collect::<Vec<_>>()
    };
    let mut one = base.to_vec();
    one.extend(["--threads", "1"]);
    let mut four = base.to_vec();
    four.extend(["--threads", "4"]);
    let (_, a) = run_to(dir.path(), "t1.csv", &one);
    let (_, b) = run_to(dir.path(), "t4.csv", &four);
    assert!(!rows(&a).is_empty());
    assert_eq!(rows(&a), rows(&b));
}

#[test]
fn config_file_values_apply_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    fs::write(
        &cfg,
        "# arith settings\nc-max = 30\n--p-max = 100\nd-max = 20\nseed = 5\n",
    )
    .unwrap();
    let cfg_s = cfg.display().to_string();
    let (code, text) = run_to(
        dir.path(),
        "r.csv",
        &["arith", "--config", &cfg_s, "--d-max", "25"],
    );
    assert_eq!(code, 0, "{text}");
    assert_eq!(header_value(&text, "c-max"), Some("30"));
    assert_eq!(header_value(&text, "p-max"), Some("100"));
    assert_eq!(header_value(&text, "d-max"), Some("25"));
    assert_eq!(header_value(&text, "seed"), Some("5"));

    fs::write(&cfg, "bogus-key = 1\n").unwrap();
    assert_eq!(
        main_with_args(["rankinlab", "arith", "--config", &cfg_s]),
        1
    );
    assert_eq!(
        main_with_args(["rankinlab", "arith", "--config", "/nonexistent/run.conf"]),
        1
    );
}

#[test]
fn parse_config_file_rules() {
    let m = parse_config_file("a = 1\n\n# c = 3\n  --b=two words \n").unwrap();
    assert_eq!(m.len(), 2);
    assert_eq!(m["a"], "1");
    assert_eq!(m["b"], "two words");
    assert!(parse_config_file("no equals sign").is_err());
}

#[test]
fn jsonl_output_has_header_rows_and_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let (code, text) = run_to(
        dir.path(),
        "r.jsonl",
        &[
            "typecalc",
            "--fixture",
            "wrong",
            "--order",
            "1",
            "--samples",
            "8",
            "--format",
            "jsonl",
            "--seed",
            "4",
        ],
    );
    assert_eq!(code, 0, "{text}");
    let lines: Vec<serde_json::Value> = text
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert!(lines.len() >= 3);
    assert_eq!(lines[0]["seed"], 4);
    assert_eq!(lines[0]["verb"], "typecalc");
    assert_eq!(lines[0]["params"]["fixture"], "wrong");
    assert_eq!(lines[1]["verdict"], "FAIL");
    assert_eq!(lines[1]["expected"], "FAIL");
    assert_eq!(lines.last().unwrap()["verdict"], "PASS");
}

/// Coefficients of eta(z)^2 eta(11z)^2, the newform of level 11 and weight 2.
fn level_eleven_file(n_max: usize) -> String {
    let mut a = vec![0i64; n_max];
    a[0] = 1;
    for &step in &[1usize, 1, 11, 11] {
        for m in (step..n_max).step_by(step) {
            for i in (m..n_max).rev() {
                a[i] -= a[i - m];
            }
        }
    }
    let mut out = String::from(
        "label: 11.2.a.a\nkind: holomorphic\nlevel: 11\nweight: 2\nnewform: true\n\
         normalization: arithmetic\natkin_lehner: 11:-1\ncoefficients:\n",
    );
    for (i, c) in a.iter().enumerate() {
        out.push_str(&format!("{} {}\n", i + 1, c));
    }
    out
}

#[test]
fn forms_from_coefficient_directory() {
    let dir = tempfile::tempdir().unwrap();
    let coeffs = dir.path().join("coeffs");
    fs::create_dir(&coeffs).unwrap();
    fs::write(coeffs.join("11.2.a.a.txt"), level_eleven_file(200)).unwrap();
    let d = coeffs.display().to_string();
    let (code, text) = run_to(
        dir.path(),
        "f.csv",
        &[
            "forms",
            "--label",
            "11.2.a.a",
            "--n-max",
            "10",
            "--hecke-grid",
            "10",
            "--coeff-dir",
            &d,
        ],
    );
    assert_eq!(code, 0, "{text}");
    assert_eq!(header_value(&text, "coeff-dir"), Some(d.as_str()));
    assert_eq!(header_value(&text, "verdict"), Some("PASS"));
}

#[test]
fn forms_builtin_delta_passes() {
    let dir = tempfile::tempdir().unwrap();
    let (code, text) = run_to(dir.path(), "d.csv", &["forms", "--n-max", "12"]);
    assert_eq!(code, 0, "{text}");
    assert!(text.contains("-24"), "tau(2) = -24 should appear:\n{text}");
}
