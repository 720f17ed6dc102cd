//! End-to-end tests of the `concord` binary: exit codes, output formats,
//! determinism, and the published-value fixtures reachable from the CLI.

use std::path::PathBuf;
use std::process::{Command, Output};

use concord::categories::{CategorySet, RatingPair};
use concord::table::ContingencyTable;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_concord"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn temp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("concord_cli_{}_{name}", std::process::id()))
}

/// A 4x4 completion consistent with the published audit marginals:
/// row sums (198,102,103,187), column sums (116,174,129,171), and the
/// published diagonal (98,56,39,118); off-diagonals are one valid solution.
const AUDIT_COMPLETION: [[u64; 4]; 4] = [
    [98, 100, 0, 0],
    [18, 56, 28, 0],
    [0, 11, 39, 53],
    [0, 7, 62, 118],
];

fn audit_marginal_ratings_csv() -> String {
    let labels = ["A", "B", "C", "D"];
    let mut csv = String::from("unit_id,rating_a,rating_b\n");
    let mut unit = 0;
    for (i, row) in AUDIT_COMPLETION.iter().enumerate() {
        for (j, &count) in row.iter().enumerate() {
            for _ in 0..count {
                unit += 1;
                csv.push_str(&format!("u{unit:04},{},{}\n", labels[i], labels[j]));
            }
        }
    }
    csv
}

#[test]
fn audit_completion_reproduces_published_marginals() {
    let cats = CategorySet::vqr_default();
    let pairs: Vec<RatingPair> = AUDIT_COMPLETION
        .iter()
        .enumerate()
        .flat_map(|(i, row)| {
            row.iter().enumerate().flat_map(move |(j, &count)| {
                (0..count).map(move |u| RatingPair::new(format!("x{i}{j}{u}"), i, j))
            })
        })
        .collect();
    let table = ContingencyTable::from_pairs(&pairs, &cats).unwrap();
    assert_eq!(table.n(), 590);
    assert_eq!(table.row_sums(), vec![198, 102, 103, 187]);
    assert_eq!(table.col_sums(), vec![116, 174, 129, 171]);
}

#[test]
fn meta_reproduces_reference_pvalues() {
    let output = run(&[
        "meta",
        "--embedded",
        "--weighting",
        "linear",
        "--test",
        "Area 13",
    ]);
    assert!(output.status.success());
    let out = stdout(&output);
    assert!(out.contains("0.0036"), "{out}");
    assert!(out.contains("**"), "{out}");

    let output = run(&[
        "meta",
        "--embedded",
        "--weighting",
        "vqr",
        "--test",
        "Area 13",
    ]);
    let out = stdout(&output);
    assert!(out.contains("0.0086"), "{out}");

    let output = run(&[
        "meta",
        "--embedded",
        "--weighting",
        "linear",
        "--test",
        "Economic history",
    ]);
    let out = stdout(&output);
    assert!(out.contains("0.3571"), "{out}");
    let test_line = out
        .lines()
        .find(|l| l.starts_with("Economic history"))
        .unwrap();
    assert!(test_line.ends_with("false"), "{test_line}");
}

#[test]
fn meta_loo_flags_electronic_engineering_under_vqr() {
    let output = run(&["meta", "--embedded", "--weighting", "vqr", "--loo"]);
    assert!(output.status.success());
    let out = stdout(&output);
    let line = out
        .lines()
        .find(|l| l.contains("Electronic engineering"))
        .expect("loo row present");
    assert!(line.ends_with("below"), "{line}");

    // same sweep under linear weighting leaves it inside
    let output = run(&["meta", "--embedded", "--weighting", "linear", "--loo"]);
    let out = stdout(&output);
    let line = out
        .lines()
        .find(|l| l.contains("Electronic engineering"))
        .unwrap();
    assert!(line.ends_with("inside"), "{line}");
}

#[test]
fn meta_rejects_ambiguous_and_unknown_labels() {
    let output = run(&[
        "meta",
        "--embedded",
        "--weighting",
        "linear",
        "--test",
        "Informatics",
    ]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("ambiguous"), "{}", stderr(&output));

    let output = run(&[
        "meta",
        "--embedded",
        "--weighting",
        "linear",
        "--test",
        "Astrology",
    ]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("unknown label"));
}

#[test]
fn kappa_concordant_file_reads_almost_perfect() {
    let path = temp_path("concordant.csv");
    let mut csv = String::from("unit_id,rating_a,rating_b\n");
    for i in 0..40 {
        let label = ["A", "B", "C", "D"][i % 4];
        csv.push_str(&format!("u{i},{label},{label}\n"));
    }
    std::fs::write(&path, csv).unwrap();
    let output = run(&[
        "kappa",
        path.to_str().unwrap(),
        "--weights",
        "unweighted",
        "--guideline",
        "landis_koch",
    ]);
    assert!(output.status.success());
    let out = stdout(&output);
    assert!(out.contains("1.0000"), "{out}");
    assert!(out.contains("Almost perfect"), "{out}");
    // the structured caveat always accompanies significance output
    assert!(stderr(&output).contains("significance is not agreement"));
    std::fs::remove_file(&path).ok();
}

#[test]
fn kappa_audit_marginal_file_observed_agreement() {
    let path = temp_path("audit_marginals.csv");
    std::fs::write(&path, audit_marginal_ratings_csv()).unwrap();

    // unweighted observed agreement is the diagonal total over n: 311/590
    let output = run(&["kappa", path.to_str().unwrap(), "--weights", "unweighted"]);
    assert!(output.status.success());
    let out = stdout(&output);
    let row = out.lines().nth(1).unwrap();
    let cols: Vec<&str> = row.split('\t').collect();
    assert_eq!(cols[2], "590");
    assert_eq!(cols[5], "0.5271", "p_o_w column: {row}");

    let output = run(&["kappa", path.to_str().unwrap(), "--weights", "vqr"]);
    let out = stdout(&output);
    assert!(out.lines().nth(1).unwrap().contains("vqr"), "{out}");
    std::fs::remove_file(&path).ok();
}

#[test]
fn kappa_json_round_trips() {
    let path = temp_path("json.csv");
    std::fs::write(
        &path,
        "unit_id,rating_a,rating_b\nu1,A,A\nu2,B,C\nu3,C,C\nu4,D,D\nu5,A,B\n",
    )
    .unwrap();
    let output = run(&[
        "kappa",
        path.to_str().unwrap(),
        "--format",
        "json",
        "--guideline",
        "fleiss",
    ]);
    assert!(output.status.success());
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(parsed["format"], "json");
    assert_eq!(parsed["payload"]["rows"][0]["n"], 5);
    assert!(parsed["payload"]["rows"][0]["kappa"].is_f64());
    assert_eq!(
        parsed["payload"]["rows"][0]["interpretations"][0]["guideline"],
        "fleiss"
    );
    // warnings ride inside the JSON envelope, never on stderr
    assert!(!parsed["warnings"].as_array().unwrap().is_empty());
    assert!(stderr(&output).is_empty());
    std::fs::remove_file(&path).ok();
}

#[test]
fn kappa_parse_errors_exit_2_with_line() {
    let path = temp_path("bad.csv");
    std::fs::write(&path, "unit_id,rating_a,rating_b\nu1,A,A\nu2,E,B\n").unwrap();
    let output = run(&["kappa", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("line 3: unknown rating 'E'"));
    std::fs::remove_file(&path).ok();
}

#[test]
fn funnel_is_byte_deterministic() {
    let a = temp_path("funnel_a.svg");
    let b = temp_path("funnel_b.svg");
    for path in [&a, &b] {
        let output = run(&[
            "funnel",
            "--embedded",
            "--weighting",
            "linear",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(output.status.success(), "{}", stderr(&output));
    }
    let bytes_a = std::fs::read(&a).unwrap();
    let bytes_b = std::fs::read(&b).unwrap();
    assert!(!bytes_a.is_empty());
    assert_eq!(bytes_a, bytes_b);
    let svg = String::from_utf8(bytes_a).unwrap();
    assert!(svg.contains("Area 13 Economics and Statistics"));
    assert!(svg.contains("stroke-dasharray"));
    std::fs::remove_file(&a).ok();
    std::fs::remove_file(&b).ok();
}

#[test]
fn funnel_subareas_highlights_the_held_out_family() {
    let path = temp_path("funnel_subs.svg");
    let output = run(&[
        "funnel",
        "--embedded",
        "--subareas",
        "--weighting",
        "vqr",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "{}", stderr(&output));
    let svg = std::fs::read_to_string(&path).unwrap();
    // the four held-out sub-areas draw filled with labels
    for label in ["Economics", "Economic history", "Management", "Statistics"] {
        assert!(svg.contains(&format!(">{label}</text>")), "{label}");
    }
    // 38 fitted open circles + 4 tested filled circles
    assert_eq!(svg.matches("<circle").count(), 42);
    std::fs::remove_file(&path).ok();
}

#[test]
fn funnel_insufficient_groups_is_a_data_error() {
    let path = temp_path("single_group.csv");
    std::fs::write(
        &path,
        "label,parent,m,kappa_linear,kappa_vqr\nOnly,,100,0.3,0.3\n",
    )
    .unwrap();
    let svg = temp_path("unwritten.svg");
    let output = run(&[
        "funnel",
        path.to_str().unwrap(),
        "--out",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("insufficient groups"));
    std::fs::remove_file(&path).ok();
}

#[test]
fn audit_embedded_matches_published_table() {
    let output = run(&["audit", "--embedded"]);
    assert!(output.status.success());
    let out = stdout(&output);
    let row5 = out.lines().find(|l| l.starts_with("5\t")).unwrap();
    assert!(row5.contains("63\t101\t108\t54\t326"), "{row5}");
    let row6 = out.lines().find(|l| l.starts_with("6\t")).unwrap();
    assert!(row6.contains("54.3\t58.0\t83.7\t31.6\t55.3"), "{row6}");
    let row7 = out.lines().find(|l| l.starts_with("7\t")).unwrap();
    assert!(row7.contains("45\t-17\t18\t1\t64"), "{row7}");
    // assumptions and the printed-percent discrepancy surface on stderr
    let err = stderr(&output);
    assert!(err.contains("assumption"), "{err}");
    assert!(err.contains("21.1"), "{err}");
    assert!(err.contains("20.5"), "{err}");
}

#[test]
fn audit_with_explicit_vectors() {
    let output = run(&[
        "audit",
        "--biblio",
        "198,102,103,187",
        "--ir",
        "116,174,129,171",
        "--concordant-peers",
        "53,73,21,117",
        "--concordant-biblio-ir",
        "98,56,39,118",
    ]);
    assert!(output.status.success());
    assert!(stdout(&output).contains("326"));

    // inconsistent totals: data error
    let output = run(&[
        "audit",
        "--biblio",
        "1,0,0,0",
        "--ir",
        "116,174,129,171",
        "--concordant-peers",
        "53,73,21,117",
        "--concordant-biblio-ir",
        "98,56,39,118",
    ]);
    assert_eq!(output.status.code(), Some(2));

    // missing flags: usage error
    let output = run(&["audit", "--biblio", "1,2,3,4"]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn reproduce_all_passes_every_fixture() {
    let output = run(&["reproduce", "--all"]);
    assert_eq!(output.status.code(), Some(0), "{}", stdout(&output));
    let out = stdout(&output);
    assert!(out.contains("PASS"));
    assert!(!out.contains("\tFAIL"), "{out}");
    assert!(out.contains("failed\t0"));
    // discrepancy warnings are part of the contract
    let err = stderr(&output);
    assert!(err.contains("published-discrepancy"), "{err}");
    assert!(err.contains("0.3441"), "{err}");
    assert!(err.contains("0.6104"), "{err}");
}

#[test]
fn reproduce_json_is_machine_readable() {
    let output = run(&["reproduce", "--table3", "--format", "json"]);
    assert_eq!(output.status.code(), Some(0));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    let checks = parsed["payload"]["checks"].as_array().unwrap();
    assert!(checks.len() >= 10);
    assert!(checks.iter().all(|c| c["pass"] == true));
    assert_eq!(parsed["payload"]["failed"], 0);
}

#[test]
fn reproduce_requires_a_selection() {
    let output = run(&["reproduce"]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_1() {
    let output = run(&["frobnicate"]);
    assert_eq!(output.status.code(), Some(1));
    let output = run(&["meta", "--weighting", "linear"]);
    assert_eq!(output.status.code(), Some(1)); // neither CSV nor --embedded
    let output = run(&["kappa"]);
    assert_eq!(output.status.code(), Some(1)); // missing required input
}

#[test]
fn embedded_data_env_override() {
    let path = temp_path("override.csv");
    std::fs::write(
        &path,
        "label,parent,m,kappa_linear,kappa_vqr\n\
         X,,100,0.5,0.5\nY,,100,0.5,0.5\nZ,,100,0.5,0.5\n",
    )
    .unwrap();
    let output = bin()
        .args(["meta", "--embedded", "--weighting", "linear"])
        .env("CONCORD_EMBEDDED_DATA", &path)
        .output()
        .unwrap();
    assert!(output.status.success());
    let out = stdout(&output);
    let model_row = out.lines().nth(1).unwrap();
    assert!(model_row.contains("0.5000"), "{model_row}");
    assert!(model_row.contains("\t300\t"), "{model_row}");
    std::fs::remove_file(&path).ok();
}

#[test]
fn simulate_commands_are_deterministic() {
    let args = [
        "simulate",
        "coverage",
        "--mu",
        "0.26",
        "--sigma2",
        "3.3",
        "--reps",
        "2000",
        "--seed",
        "7",
    ];
    let first = run(&args);
    assert!(first.status.success(), "{}", stderr(&first));
    let second = run(&args);
    assert_eq!(stdout(&first), stdout(&second));
    let out = stdout(&first);
    let row = out.lines().nth(1).unwrap();
    let rate: f64 = row.split('\t').nth(7).unwrap().parse().unwrap();
    assert!(rate < 0.12, "{rate}");

    let cal = run(&[
        "simulate",
        "se-calibration",
        "--joint",
        "independence",
        "--weights",
        "vqr",
        "--reps",
        "500",
        "--n",
        "400",
        "--seed",
        "11",
    ]);
    assert!(cal.status.success(), "{}", stderr(&cal));
    assert!(stdout(&cal).contains("independence"));
}
