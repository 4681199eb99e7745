use fiberforge_cli::{dispatch, Outcome};

fn run(args: &[&str]) -> Outcome {
    let mut argv = vec!["fiberforge"];
    argv.extend_from_slice(args);
    dispatch(argv)
}

fn data(name: &str) -> String {
    format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn betti_of_a5() {
    let out = run(&["group", "betti", &data("a5.fp")]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(out.stdout.trim(), "b1=0, torsion=[]");
}

#[test]
fn inline_presentations() {
    let out = run(&["group", "betti", "<x, y | x^2, y^4>"]);
    assert_eq!(out.stdout.trim(), "b1=0, torsion=[2, 4]");
    let out = run(&["group", "order", "<a, b | a^2, b^3, (a b)^5>"]);
    assert_eq!(out.stdout.trim(), "order=60");
}

#[test]
fn slinf_verdicts() {
    assert_eq!(run(&["wp", "slinf", "c_12*c_12^-1"]).stdout.trim(), "trivial");
    assert_eq!(run(&["wp", "slinf", "c_12"]).stdout.trim(), "nontrivial");
}

#[test]
fn hnn_accepts_both_alphabets() {
    let encoded = run(&["wp", "hnn", "t b a b^-1 t^-1", "--oracle", "free"]);
    assert_eq!(encoded.code, 0, "{}", encoded.stderr);
    let decoded = run(&["wp", "hnn", "t c_1 t^-1", "--oracle", "free"]);
    assert_eq!(encoded.stdout, decoded.stdout);
}

#[test]
fn aspherical_b2() {
    let out = run(&["group", "b2", &data("genus2.fp"), "--assert-aspherical"]);
    assert_eq!(out.stdout.trim(), "b2=1");
}

#[test]
fn json_output_parses() {
    let out = run(&["--json", "group", "betti", &data("a5.fp")]);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["betti"], 0);
    assert_eq!(v["torsion"], serde_json::json!([]));
}

#[test]
fn pipeline_report() {
    let out = run(&["--json", "construct", "pipeline", &data("a5.fp")]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["residually_finite_certified"], false);
    assert_eq!(v["predicted_b1_lambda"], 0);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["group", "betti", "/no/such/file.fp"]).code, 1);
    assert_eq!(run(&["group", "betti", "<x | y>"]).code, 1);
    assert_eq!(run(&["frobnicate"]).code, 1);
    assert_eq!(run(&["--lambda", "3/2", "group", "betti", &data("a5.fp")]).code, 1);
    assert_eq!(run(&["--help"]).code, 0);
    // Coset enumeration of Z cannot finish.
    assert_eq!(run(&["--max-cosets", "50", "group", "order", "<x | >"]).code, 2);
}

#[test]
fn smallcanc_rejects_a5() {
    let out = run(&["smallcanc", "check", &data("a5.fp")]);
    assert!(out.stdout.contains("violated"), "{}", out.stdout);
}

#[test]
fn output_is_deterministic() {
    let args = ["--json", "construct", "rips", "data"];
    let path = data("a5.fp");
    let args: Vec<&str> = args.iter().map(|a| if *a == "data" { path.as_str() } else { a }).collect();
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn emitted_presentations_reparse() {
    use fiberforge::presentations::{FinitePresentation, PresentationJson};
    for sub in ["rips", "uce"] {
        let out = run(&["--json", "construct", sub, &data("a5.fp")]);
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        let json: PresentationJson = serde_json::from_value(v["presentation"].clone()).unwrap();
        let p = FinitePresentation::from_json(&json).unwrap();
        let again = FinitePresentation::from_text(&p.to_string()).unwrap();
        assert_eq!(p, again, "{sub}");
        let text = run(&["construct", sub, &data("a5.fp")]);
        let first_line = text.stdout.lines().find(|l| l.starts_with('<')).unwrap();
        assert_eq!(FinitePresentation::from_text(first_line).unwrap(), p, "{sub}");
    }
}
