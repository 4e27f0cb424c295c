use std::fs;

use tradekit::catalog::parse_any;
use tradekit::cli::{run, EXIT_DATA, EXIT_NO, EXIT_OK, EXIT_UNKNOWN, EXIT_USAGE};
use tradekit::verify;

fn tk(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("tradekit").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn spectrum_exit_codes() {
    assert_eq!(tk(&["spectrum", "--t", "2", "--k", "3", "--m", "6", "--steiner"]).0, EXIT_OK);
    let (code, _, _) = tk(&["spectrum", "--t", "2", "--k", "3", "--m", "7", "--steiner"]);
    assert_eq!(code, EXIT_NO);
    assert_eq!(tk(&["spectrum", "--t", "2", "--k", "4", "--m", "7"]).0, EXIT_UNKNOWN);
    assert_eq!(tk(&["spectrum", "--t", "3", "--k", "3", "--m", "7"]).0, EXIT_USAGE);
}

#[test]
fn spectrum_replay_prints_a_verified_witness() {
    let (code, out, _) = tk(&["spectrum", "--t", "2", "--k", "4", "--m", "9", "--steiner", "--replay", "--json"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("solely_balanced_triples") || out.contains("solely-balanced-triples"), "{out}");
}

#[test]
fn usage_errors() {
    assert_eq!(tk(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(tk(&["search", "--k", "3"]).0, EXIT_USAGE);
    assert_eq!(tk(&["--help"]).0, EXIT_OK);
    assert_eq!(tk(&["--version"]).0, EXIT_OK);
}

#[test]
fn catalog_list_and_show_round_trip() {
    let (code, out, _) = tk(&["catalog", "list"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("ex2.3-out") && out.contains("mined-k3-v11"));
    for fmt in ["compact", "json"] {
        let (code, out, _) = tk(&["catalog", "show", "ex2.3-out", "--format", fmt]);
        assert_eq!(code, EXIT_OK);
        let f = parse_any(&out).unwrap();
        assert!(verify(&f).valid);
        assert_eq!(f.volume(), 6);
    }
    assert_ne!(tk(&["catalog", "show", "no-such-entry"]).0, EXIT_OK);
}

#[test]
fn verify_files() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    let (_, doc, _) = tk(&["catalog", "show", "ex1.3-v8", "--format", "json"]);
    fs::write(&good, &doc).unwrap();
    let (code, out, _) = tk(&["verify", good.to_str().unwrap(), "--steiner-expected"]);
    assert_eq!(code, EXIT_OK, "{out}");

    let bad = dir.path().join("bad.compact");
    fs::write(&bad, "3 2 1\ncollection 1\n12\n34\ncollection 2\n13\n24\ncollection 3\n14\n25\n").unwrap();
    assert_eq!(tk(&["verify", bad.to_str().unwrap()]).0, EXIT_NO);

    let junk = dir.path().join("junk.compact");
    fs::write(&junk, "not a trade\n").unwrap();
    assert_eq!(tk(&["verify", junk.to_str().unwrap()]).0, EXIT_DATA);
    assert_eq!(tk(&["verify", dir.path().join("missing").to_str().unwrap()]).0, EXIT_DATA);
}

#[test]
fn construct_writes_parseable_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    let (code, _, _) = tk(&["construct", "steiner23", "--m", "16", "--format", "json", "-o", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let f = parse_any(&fs::read_to_string(&path).unwrap()).unwrap();
    assert!(verify(&f).steiner && f.volume() == 16);
    assert_eq!(tk(&["construct", "steiner23", "--m", "7"]).0, EXIT_NO);
}

#[test]
fn search_is_identical_with_one_thread() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let args = ["search", "--k", "3", "--t", "2", "--m", "7", "--steiner", "--mode", "exhaustive-none", "--max-found", "10", "--json"];
    let (c1, o1, _) = tk(&[&args[..], &["--threads", "1", "--certificate", a.to_str().unwrap()]].concat());
    let (c2, o2, _) = tk(&[&args[..], &["--certificate", b.to_str().unwrap()]].concat());
    assert_eq!((c1, c2), (EXIT_OK, EXIT_OK));
    assert_eq!(o1, o2);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn aborted_search_is_not_a_certificate() {
    let (code, out, _) = tk(&["search", "--k", "4", "--t", "2", "--m", "8", "--steiner", "--limit-nodes", "1000", "--json"]);
    assert_eq!(code, EXIT_UNKNOWN);
    assert!(out.contains("aborted"));
}
