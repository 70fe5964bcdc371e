use std::path::PathBuf;

use frugal_cli::{run_command, sidecar_path};
use frugal_core::format::{parse_election, write_election};
use frugal_core::solvers::{select_algorithm, solve, solve_exact, AlgorithmChoice, Limits, DEFAULT_BUDGET_CAP};
use frugal_core::{build_instance, Rule, Variant};
use serde_json::Value;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name].iter().collect();
    p.display().to_string()
}

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn run(args: &[&str]) -> Run {
    let mut argv = vec!["frugal"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_command(argv, &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn json(args: &[&str]) -> Value {
    let r = run(args);
    assert_eq!(r.code, 0, "{}", r.err);
    serde_json::from_str(&r.out).unwrap()
}

#[test]
fn winner_prints_the_name() {
    let r = run(&["winner", &data("three.elec"), "--rule", "plurality"]);
    assert_eq!((r.code, r.out.as_str()), (0, "a\n"));
    let r = run(&["winner", &data("weighted.elec"), "--rule", "borda"]);
    assert_eq!(r.out, "a\n");
}

#[test]
fn vulnerable_lists_votes_ranking_target_above_winner() {
    let v = json(&["vulnerable", &data("three.elec"), "--rule", "plurality", "--target", "p", "--json"]);
    assert_eq!(v["winner"], "a");
    assert_eq!(v["vulnerable"], serde_json::json!([2]));
}

#[test]
fn exact_solve_matches_the_library() {
    let path = data("three.elec");
    let e = parse_election(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let inst = build_instance(e, Rule::Stv, 2, None, Variant::Frugal).unwrap();
    let lib = solve_exact(&inst, Limits::default()).unwrap();
    let v = json(&["solve", &path, "--rule", "stv", "--target", "p", "--algorithm", "exact", "--json"]);
    assert_eq!(v["decision"], lib.decision.to_string());
    assert_eq!(v["cost"], lib.cost);
    assert_eq!(v["witness"].as_array().unwrap().len(), lib.witness.len());
    assert!(v.get("elapsed").is_none());
}

#[test]
fn auto_follows_the_selection_table() {
    let path = data("priced.elec");
    let e = parse_election(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let cases = [
        ("plurality", "frugal", None),
        ("veto", "frugal", None),
        ("bucklin", "frugal", None),
        ("borda", "frugal", None),
        ("plurality", "nonuniform", Some(2)),
        ("veto", "nonuniform", Some(3)),
        ("maximin", "nonuniform", Some(1)),
    ];
    for (rule, variant, budget) in cases {
        let inst = build_instance(e.clone(), rule.parse().unwrap(), 0, budget, variant.parse().unwrap()).unwrap();
        let lib = solve(&inst, AlgorithmChoice::Auto, Limits::default(), DEFAULT_BUDGET_CAP).unwrap();
        let b = budget.map(|b: u64| b.to_string());
        let mut args = vec!["solve", &path, "--rule", rule, "--target", "p", "--variant", variant, "--json"];
        if let Some(b) = &b {
            args.extend(["--budget", b]);
        }
        let v = json(&args);
        assert_eq!(v["algorithm"], select_algorithm(&inst, DEFAULT_BUDGET_CAP).to_string(), "{rule} {variant}");
        assert_eq!(v["decision"], lib.decision.to_string(), "{rule} {variant}");
        assert_eq!(v["cost"], lib.cost, "{rule} {variant}");
        let names: Vec<String> = lib
            .witness
            .iter()
            .map(|(_, r)| inst.election().ranking_names(r).join(">"))
            .collect();
        let got: Vec<&str> = v["witness"].as_array().unwrap().iter().map(|w| w["ranking"].as_str().unwrap()).collect();
        assert_eq!(got, names);
    }
}

#[test]
fn explain_prints_the_table_and_pick() {
    let r = run(&["solve", "--explain"]);
    assert_eq!(r.code, 0);
    assert!(r.out.contains("weighted_threecand"));
    let r = run(&["solve", &data("three.elec"), "--rule", "bucklin", "--target", "p", "--explain"]);
    assert!(r.out.ends_with("selected: frugal_poly\n"));
}

#[test]
fn timing_adds_elapsed() {
    let v = json(&["solve", &data("three.elec"), "--rule", "borda", "--target", "p", "--json", "--timing"]);
    assert!(v["elapsed"].as_f64().unwrap() >= 0.0);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.elec");
    std::fs::write(&bad, "candidates: p,a,b\nvote: a>b\n").unwrap();
    let bad = bad.display().to_string();
    let r = run(&["winner", &bad, "--rule", "plurality"]);
    assert_eq!(r.code, 2);
    assert!(r.err.contains("line 2"), "{}", r.err);

    assert_eq!(run(&["winner", &data("three.elec"), "--rule", "nope"]).code, 2);
    assert_eq!(run(&["winner", &data("three.elec")]).code, 2);
    assert_eq!(run(&["vulnerable", &data("three.elec"), "--rule", "borda", "--target", "zz"]).code, 2);
    assert_eq!(run(&["gen", "no-such-reduction", &data("half.part")]).code, 2);
    assert_eq!(run(&["solve", &data("priced.elec"), "--rule", "borda", "--target", "p", "--variant", "uniform"]).code, 2);

    let three = data("three.elec");
    let r = run(&["solve", &three, "--rule", "borda", "--target", "p", "--algorithm", "poly"]);
    assert_eq!(r.code, 3);
    let r = run(&["solve", &three, "--rule", "borda", "--target", "p", "--algorithm", "exact", "--max-m", "2"]);
    assert_eq!(r.code, 4, "{}", r.err);
    let r = run(&["solve", &three, "--rule", "plurality", "--target", "p", "--variant", "nonuniform", "--budget", "9"]);
    assert_eq!(r.code, 2, "missing prices are a validation error: {}", r.err);
    assert_eq!(run(&["--help"]).code, 0);
}

#[test]
fn verify_reports_pass() {
    let r = run(&["verify", "wmaximin-partition", &data("half.part")]);
    assert_eq!(r.code, 0);
    assert!(r.out.contains("(e) exhaustive equivalence: PASS"));
    assert!(r.out.ends_with("overall: PASS\n"));

    let v = json(&["verify", "borda-x3c", &data("cover.x3c"), "--json"]);
    assert_eq!(v["overall"], "PASS");
    let e = v["checks"].as_array().unwrap().iter().find(|c| c["id"] == "e").unwrap();
    assert_eq!(e["outcome"]["status"], "SKIPPED");

    for (name, file) in [
        ("wplurality-partition", "no.part"),
        ("wcopeland-partition", "no.part"),
        ("wbucklin-partition", "half.part"),
        ("wstv-quarter", "half.part"),
        ("kapproval-x3c", "cover.x3c"),
        ("uniform-borda-cm", "cm.txt"),
        ("cm-dollar", "cm.txt"),
    ] {
        let file = data(file);
        let mut args = vec!["verify", name, &file];
        if name.ends_with("quarter") {
            args.push("--from-half");
        }
        let r = run(&args);
        assert_eq!(r.code, 0, "{name}: {}{}", r.out, r.err);
    }
}

#[test]
fn gen_writes_instance_and_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("inst.elec");
    let p = path.display().to_string();
    let r = run(&["gen", "kapproval-x3c", &data("cover.x3c"), "--out", &p]);
    assert_eq!(r.code, 0, "{}", r.err);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("# reduction: kapproval-x3c\n# rule: kapproval:5\n"));
    let e = parse_election(&text).unwrap();
    assert_eq!(e.num_candidates(), 6 + 4 + 2);
    let cert: Value = serde_json::from_str(&std::fs::read_to_string(sidecar_path(&path)).unwrap()).unwrap();
    assert_eq!(cert["stated_winner"], "q");
    assert_eq!(cert["budget"], 2);

    // The emitted instance is an ordinary election document.
    let r = run(&["solve", &p, "--rule", "kapproval:5", "--target", "p", "--explain"]);
    assert_eq!(r.code, 0);
}

#[test]
fn gen_parameters_are_honored() {
    let x = data("cover.x3c");
    let v = json(&["gen", "kveto-x3c", &x, "--k", "4", "--json"]);
    assert!(v["instance"].as_str().unwrap().contains("# rule: kveto:4\n"));
    let v = json(&["gen", "scoring-x3c", &x, "--vector", "20,18,16,14,12,10,8,6,4,2,1,0", "--json"]);
    assert!(v["instance"].as_str().unwrap().contains("# rule: scoring:20,18,16,14,12,10,8,6,4,2,1,0\n"));
    let v = json(&["gen", "wcopeland-partition", &data("half.part"), "--alpha", "1/2", "--json"]);
    assert!(v["instance"].as_str().unwrap().contains("# rule: copeland:1/2\n"));
    let r = run(&["gen", "scoring-x3c", &x, "--vector", "1,1,1,1,1,1,1,1,1,1,1,1"]);
    assert_eq!(r.code, 2);
}

#[test]
fn oracle_answers() {
    let v = json(&["oracle", "x3c", &data("cover.x3c"), "--json"]);
    assert_eq!((v["decision"].as_str(), v["solution"].clone()), (Some("YES"), serde_json::json!([0, 1])));
    let r = run(&["oracle", "partition", &data("half.part")]);
    assert_eq!(r.out, "decision: YES\nweights: 2\n");
    let r = run(&["oracle", "partition", &data("no.part")]);
    assert_eq!(r.out, "decision: NO\n");
    let v = json(&["oracle", "quarter", &data("half.part"), "--from-half", "--json"]);
    assert_eq!(v["mapped_weights"], serde_json::json!([1, 1, 2, 4]));
    assert_eq!(v["decision"], "YES");
}

#[test]
fn structured_output_is_deterministic() {
    let commands: Vec<Vec<String>> = vec![
        vec!["gen".into(), "borda-x3c".into(), data("cover.x3c"), "--json".into()],
        vec!["gen".into(), "uniform-borda-cm".into(), data("cm.txt"), "--json".into()],
        vec!["verify".into(), "wstv-quarter".into(), data("half.part"), "--from-half".into(), "--json".into()],
        vec![
            "solve".into(),
            data("priced.elec"),
            "--rule".into(),
            "copeland:1/2".into(),
            "--target".into(),
            "p".into(),
            "--json".into(),
        ],
    ];
    for c in &commands {
        let args: Vec<&str> = c.iter().map(String::as_str).collect();
        let first = run(&args);
        assert_eq!(first.code, 0, "{}", first.err);
        assert_eq!(first.out, run(&args).out);
    }
}

#[test]
fn corpus_documents_are_canonical() {
    for name in ["three.elec", "weighted.elec"] {
        let text = std::fs::read_to_string(data(name)).unwrap();
        assert_eq!(write_election(&parse_election(&text).unwrap()), text);
    }
    // Comments are dropped and the tie-break made explicit; the result is a fixed point.
    let text = std::fs::read_to_string(data("priced.elec")).unwrap();
    let once = write_election(&parse_election(&text).unwrap());
    assert_eq!(write_election(&parse_election(&once).unwrap()), once);
}
