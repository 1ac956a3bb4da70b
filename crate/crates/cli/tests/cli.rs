use std::path::PathBuf;
use std::process::{Command, Output};

fn fockmodel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fockmodel"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fockmodel-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn vk_example_reports_the_violation() {
    let o = fockmodel(&["example", "varopoulos-kaijser"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let s = stdout(&o);
    assert!(s.contains("5.196152"), "{s}");
    assert!(s.contains("5.000000000"), "{s}");
    assert!(s.contains("ratio"), "{s}");
    assert!(s.trim_end().ends_with("PASS"), "{s}");
}

#[test]
fn classify_two_by_two_jordan_block() {
    let o = fockmodel(&["classify", "--model", "jordan", "--m", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("Jordan at 0; Λ = (1 + ∂∂̄)δ₀"), "{}", stdout(&o));
}

#[test]
fn classify_nonnormal_tuple() {
    let o = fockmodel(&["--format", "machine", "classify", "--model", "nonnormal"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("classification=NotJordan"));
}

#[test]
fn zero_tuple_has_a_single_moment() {
    let o = fockmodel(&["--format", "machine", "moments", "--model", "zero"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.starts_with("# fockmodel-report v1\n"), "{s}");
    assert!(s.contains("entries=1\n"));
    let moments: Vec<&str> = s.lines().filter(|l| l.starts_with("m(")).collect();
    assert_eq!(moments, vec!["m(0);(0)=1.0000000000000000e0,0.0000000000000000e0"]);
}

#[test]
fn machine_output_is_deterministic() {
    let runs = [
        vec!["--format", "machine", "fock", "--model", "random", "--n", "2", "--m", "3", "--degree", "12"],
        vec!["--format", "machine", "certify", "--model", "random-jordan", "--n", "2", "--m", "3"],
        vec!["--format", "machine", "--seed", "7", "example", "atomic-measure"],
    ];
    for args in runs {
        let a = fockmodel(&args);
        let b = fockmodel(&args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(!a.stdout.is_empty());
    }
}

#[test]
fn seed_changes_random_models() {
    let run = |seed: &str| {
        stdout(&fockmodel(&["--format", "machine", "--seed", seed, "moments", "--model", "random", "--degree", "1"]))
    };
    assert_ne!(run("1"), run("2"));
}

#[test]
fn machine_numbers_carry_seventeen_digits() {
    let o = fockmodel(&["--format", "machine", "kernel-eval", "--model", "jordan", "--m", "3", "--z", "1+i", "--w", "-0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let line = s.lines().find(|l| l.starts_with("log_abs_F=")).unwrap();
    let mantissa = line.trim_start_matches("log_abs_F=").split('e').next().unwrap();
    assert_eq!(mantissa.trim_start_matches('-').replace('.', "").len(), 17, "{line}");
}

#[test]
fn malformed_values_exit_two_naming_the_field() {
    let o = fockmodel(&["moments", "--model", "jordan", "--lambda", "1+x"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("lambda"));

    let o = fockmodel(&["kernel-eval", "--model", "vk", "--z", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`z`"), "{}", stderr(&o));

    let o = fockmodel(&["moments", "--model", "no-such-model"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("model"));

    let o = fockmodel(&["example", "no-such-example"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn malformed_tuple_files_exit_two_naming_the_field() {
    let bad_entry = scratch(
        "bad.json",
        r#"{"n":1,"m":1,"matrices":[[[[0.0,0.0]]]],"h":[[1.0]]}"#,
    );
    let o = fockmodel(&["moments", "--input", bad_entry.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`h[0]`"), "{}", stderr(&o));

    let unknown = scratch(
        "unknown.json",
        r#"{"n":1,"m":1,"matrices":[[[[0.0,0.0]]]],"h":[[1.0,0.0]],"extra":1}"#,
    );
    let o = fockmodel(&["moments", "--input", unknown.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("extra"), "{}", stderr(&o));

    let noncommuting = scratch(
        "noncommuting.json",
        r#"{"n":2,"m":2,
            "matrices":[[[[0,0],[1,0]],[[0,0],[0,0]]], [[[0,0],[0,0]],[[1,0],[0,0]]]],
            "h":[[1,0],[0,0]]}"#,
    );
    let o = fockmodel(&["moments", "--input", noncommuting.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("commute"), "{}", stderr(&o));

    let o = fockmodel(&["moments", "--input", "/nonexistent/tuple.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn check_failure_exits_one() {
    // The truncated model of a norm-one tuple at degree 2 misses the tolerance.
    let o = fockmodel(&["fock", "--model", "random", "--n", "2", "--m", "3", "--degree", "2"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).trim_end().ends_with("FAIL"));

    // Non-cyclic input: the eigenpolynomial basis cannot span the space.
    let diag = scratch(
        "diag.json",
        r#"{"n":1,"m":2,"matrices":[[[[1,0],[0,0]],[[0,0],[1,0]]]],"h":[[1,0],[0,0]]}"#,
    );
    let o = fockmodel(&["fock", "--input", diag.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("cyclic"), "{}", stderr(&o));
}

#[test]
fn model_output_feeds_back_as_input() {
    let o = fockmodel(&["model", "jordan", "--m", "3", "--lambda", "0.5-i"]);
    assert_eq!(o.status.code(), Some(0));
    let path = scratch("jordan3.json", &stdout(&o));
    let p = path.to_str().unwrap();
    let from_file = fockmodel(&["--format", "machine", "moments", "--input", p]);
    let builtin = fockmodel(&["--format", "machine", "moments", "--model", "jordan", "--m", "3", "--lambda", "0.5-i"]);
    assert_eq!(from_file.stdout, builtin.stdout);

    let o = fockmodel(&["distribution", "--input", p]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("round_trip_error"));
}

#[test]
fn radial_models_print_moment_documents() {
    let o = fockmodel(&["model", "drury-arveson", "--n", "2", "--degree", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let key = "\"alpha\":[1,1],\"beta\":[1,1],\"value\":[";
    let start = s.find(key).expect("entry for (1,1)") + key.len();
    let re: f64 = s[start..].split(',').next().unwrap().parse().unwrap();
    // Drury-Arveson: ‖z1 z2‖² = 1!1!/2!.
    assert!((re - 0.5).abs() < 1e-14, "{re}");
}

#[test]
fn scalar_convolution_is_tight() {
    let o = fockmodel(&["--format", "machine", "convolve", "--model", "scalar", "--lambda", "1", "--with", "scalar:2"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let norm: f64 = s
        .lines()
        .find_map(|l| l.strip_prefix("norm.1="))
        .unwrap()
        .parse()
        .unwrap();
    assert!((norm - 3.0).abs() <= 1e-12, "{norm}");
}

#[test]
fn eigen_grid_finds_the_jordan_eigenvalue() {
    let o = fockmodel(&["--format", "machine", "eigen", "--model", "jordan", "--m", "2", "--size", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("points=9"));
    let yes: Vec<&str> = s.lines().filter(|l| l.ends_with(".eigenvalue=yes")).collect();
    assert_eq!(yes, vec!["point.5.eigenvalue=yes"]);
}

#[test]
fn certify_jordan_block_exponent() {
    let o = fockmodel(&["--format", "machine", "certify", "--model", "jordan", "--m", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let n_hat: f64 = stdout(&o)
        .lines()
        .find_map(|l| l.strip_prefix("N_hat="))
        .unwrap()
        .parse()
        .unwrap();
    assert!((n_hat - 4.0).abs() < 0.15, "{n_hat}");
}
