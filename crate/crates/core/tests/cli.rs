//! End-to-end runs of the `seqprobe` binary on the bundled fixtures.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use seqprobe::backend::{MockBackend, MockTable};
use seqprobe::cli::{evaluate_with, RunConfig};
use seqprobe::corpus::tagset_line;

const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");

fn corpus_dir() -> PathBuf {
    Path::new(FIXTURES).join("corpus")
}

fn demos() -> PathBuf {
    corpus_dir().join("train_en.conllu")
}

fn seqprobe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_seqprobe"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_flags<'a>(out: &'a str, corpus: &'a str, demos: &'a str) -> Vec<&'a str> {
    vec![
        "--corpus-dir",
        corpus,
        "--demos",
        demos,
        "--output",
        out,
        "--backend",
        "mock",
    ]
}

struct Dirs {
    _tmp: tempfile::TempDir,
    out: String,
    corpus: String,
    demos: String,
}

fn dirs() -> Dirs {
    let tmp = tempfile::tempdir().unwrap();
    Dirs {
        out: tmp.path().join("out").to_string_lossy().into_owned(),
        corpus: corpus_dir().to_string_lossy().into_owned(),
        demos: demos().to_string_lossy().into_owned(),
        _tmp: tmp,
    }
}

fn evaluate(d: &Dirs, extra: &[&str]) -> Output {
    let mut args = vec!["evaluate"];
    args.extend(run_flags(&d.out, &d.corpus, &d.demos));
    args.extend_from_slice(extra);
    seqprobe(&args)
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn evaluate_decom_prob_writes_one_row_per_language() {
    let d = dirs();
    let o = evaluate(
        &d,
        &[
            "--method",
            "decom",
            "--mode",
            "prob",
            "--shots",
            "17",
            "--languages",
            "en",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let run = Path::new(&d.out).join("decom_prob_k17_noinst");
    let results = fs::read_to_string(run.join("results.csv")).unwrap();
    let lines: Vec<&str> = results.lines().collect();
    assert_eq!(lines.len(), 2, "{results}");
    assert!(lines[0].starts_with("language,"));
    assert!(lines[1].starts_with("en,8,0,"), "{}", lines[1]);
    assert!(lines[1].ends_with(",ok"));
    for f in [
        "predictions.jsonl",
        "timing.jsonl",
        "report.json",
        "per_tag.csv",
    ] {
        assert!(run.join("en").join(f).is_file(), "{f}");
    }
    for f in ["summary.json", "config.toml", "run_meta.json"] {
        assert!(run.join(f).is_file(), "{f}");
    }
    let per_tag = fs::read_to_string(run.join("en/per_tag.csv")).unwrap();
    assert_eq!(per_tag.lines().count(), 18);
}

#[test]
fn iter_with_prob_mode_is_a_config_error() {
    let d = dirs();
    let o = evaluate(
        &d,
        &["--method", "iter", "--mode", "prob", "--languages", "en"],
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--mode gen"), "{}", stderr(&o));
    assert!(!Path::new(&d.out).exists());
}

#[test]
fn unknown_flag_values_exit_with_two() {
    let o = seqprobe(&["evaluate", "--method", "beam"]);
    assert_eq!(o.status.code(), Some(2));
    let o = seqprobe(&["evaluate", "--config", "/nonexistent/run.toml"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn zero_shot_prompts_carry_the_instruction() {
    let tmp = tempfile::tempdir().unwrap();
    let config = RunConfig {
        shots: 0,
        languages: vec!["de".into()],
        corpus_dir: corpus_dir(),
        demos: demos(),
        output: tmp.path().to_path_buf(),
        ..RunConfig::default()
    };
    let backend = MockBackend::new(MockTable::bundled());
    let summary = evaluate_with(&config, &backend).unwrap();
    assert_eq!(summary.exit_code(), 0);
    assert!(summary.run_dir.ends_with("decom_prob_k0_inst"));
    let calls = backend.calls();
    assert!(!calls.is_empty());
    let first_line = format!("{}\nSentence: ", tagset_line());
    assert!(calls.iter().all(|c| c.prompt.starts_with(&first_line)));
}

#[test]
fn missing_language_fails_the_run_but_keeps_the_others() {
    let d = dirs();
    let o = evaluate(&d, &["--shots", "0", "--languages", "de,xx"]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    let results =
        fs::read_to_string(Path::new(&d.out).join("decom_prob_k0_inst/results.csv")).unwrap();
    assert!(results
        .lines()
        .any(|l| l.starts_with("de,") && l.ends_with(",ok")));
    assert!(results
        .lines()
        .any(|l| l.starts_with("xx,") && !l.ends_with(",ok")));
}

#[test]
fn config_file_with_flag_override_and_round_trip() {
    let d = dirs();
    let cfg_path = Path::new(&d.out).with_file_name("run.toml");
    let file_config = RunConfig {
        method: seqprobe::cli::Method::Iter,
        shots: 2,
        languages: vec!["nl".into()],
        corpus_dir: corpus_dir(),
        demos: demos(),
        output: PathBuf::from(&d.out),
        ..RunConfig::default()
    };
    fs::write(&cfg_path, file_config.to_toml()).unwrap();
    let o = seqprobe(&[
        "evaluate",
        "--config",
        cfg_path.to_str().unwrap(),
        "--shots",
        "1",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let written = Path::new(&d.out).join("iter_gen_k1_noinst/config.toml");
    let reloaded = RunConfig::load(&written).unwrap();
    assert_eq!(
        reloaded,
        RunConfig {
            shots: 1,
            ..file_config
        }
    );
}

#[test]
fn ablation_matrix_has_one_row_per_k() {
    let d = dirs();
    let mut args = vec!["ablate"];
    args.extend(run_flags(&d.out, &d.corpus, &d.demos));
    args.extend(["--k", "0,1,3", "--languages", "en,de"]);
    let o = seqprobe(&args);
    assert!(o.status.success(), "{}", stderr(&o));
    let stdout = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines[0], "k,en,de");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("0,") && lines[2].starts_with("1,") && lines[3].starts_with("3,"));
    let file = fs::read_to_string(Path::new(&d.out).join("ablation_decom_prob.csv")).unwrap();
    assert_eq!(file, stdout);
}

#[test]
fn ablation_defaults_to_the_eight_language_subset() {
    let d = dirs();
    let mut args = vec!["ablate"];
    args.extend(run_flags(&d.out, &d.corpus, &d.demos));
    args.extend(["--k", "17"]);
    let o = seqprobe(&args);
    assert!(o.status.success(), "{}", stderr(&o));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert_eq!(stdout.lines().next().unwrap(), "k,en,de,el,fa,hi,nl,ru,zh");
}

#[test]
fn empty_k_list_is_a_config_error() {
    let d = dirs();
    let mut args = vec!["ablate"];
    args.extend(run_flags(&d.out, &d.corpus, &d.demos));
    args.extend(["--k", ""]);
    assert_eq!(seqprobe(&args).status.code(), Some(2));
}

#[test]
fn similarity_table_and_errors() {
    let o = seqprobe(&["similarity"]);
    assert!(o.status.success());
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert_eq!(stdout.lines().count(), 38);
    assert!(stdout.contains("eng-nld,92.43,37,"));

    let o = seqprobe(&["similarity", "--vectors", "/nonexistent/vectors.txt"]);
    assert_eq!(o.status.code(), Some(1));

    let tmp = tempfile::tempdir().unwrap();
    let single = tmp.path().join("one.txt");
    let text: String = seqprobe::cli::BUNDLED_VECTORS
        .split("\n\n")
        .next()
        .unwrap()
        .to_string();
    fs::write(&single, text).unwrap();
    let o = seqprobe(&["similarity", "--vectors", single.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("lacks 37"), "{}", stderr(&o));
}

#[test]
fn compare_joins_runs_and_reports_speedup() {
    let d = dirs();
    let langs = ["--languages", "en,nl"];
    assert!(evaluate(
        &d,
        &[&["--method", "iter", "--shots", "3"][..], &langs].concat()
    )
    .status
    .success());
    assert!(evaluate(
        &d,
        &[&["--method", "decom", "--shots", "3"][..], &langs].concat()
    )
    .status
    .success());
    let iter = format!("{}/iter_gen_k3_noinst", d.out);
    let decom = format!("{}/decom_prob_k3_noinst", d.out);
    let cmp = format!("{}/cmp", d.out);
    let o = seqprobe(&[
        "compare", "--iter", &iter, "--decom", &decom, "--output", &cmp,
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(Path::new(&cmp).join("compare.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
    let speedup: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(Path::new(&cmp).join("speedup.json")).unwrap())
            .unwrap();
    assert_eq!(speedup["setting"], "few_shot");
    assert_eq!(speedup["sentences"], 13);

    let same = format!("{}/same", d.out);
    let o = seqprobe(&[
        "compare", "--iter", &decom, "--decom", &decom, "--output", &same,
    ]);
    assert!(o.status.success());
    let csv = fs::read_to_string(Path::new(&same).join("compare.csv")).unwrap();
    assert!(
        csv.lines().skip(1).all(|l| l.ends_with(",0.000000")),
        "{csv}"
    );
}

#[test]
fn compare_rejects_mismatched_sentences() {
    let d = dirs();
    assert!(evaluate(
        &d,
        &[
            "--method",
            "iter",
            "--shots",
            "0",
            "--languages",
            "en",
            "--sample-size",
            "3"
        ]
    )
    .status
    .success());
    assert!(evaluate(
        &d,
        &[
            "--method",
            "decom",
            "--shots",
            "0",
            "--languages",
            "en",
            "--sample-size",
            "4"
        ]
    )
    .status
    .success());
    let o = seqprobe(&[
        "compare",
        "--iter",
        &format!("{}/iter_gen_k0_inst", d.out),
        "--decom",
        &format!("{}/decom_prob_k0_inst", d.out),
        "--output",
        &format!("{}/cmp", d.out),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("sentence"), "{}", stderr(&o));
}

#[test]
fn group_report_files() {
    let d = dirs();
    let langs = ["--languages", "en,de,zh,hi"];
    assert!(evaluate(&d, &[&["--shots", "0"][..], &langs].concat())
        .status
        .success());
    assert!(evaluate(&d, &[&["--shots", "17"][..], &langs].concat())
        .status
        .success());
    let out = format!("{}/groups", d.out);
    let o = seqprobe(&[
        "group",
        "--zero",
        &format!("{}/decom_prob_k0_inst", d.out),
        "--few",
        &format!("{}/decom_prob_k17_noinst", d.out),
        "--output",
        &out,
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let scatter = fs::read_to_string(Path::new(&out).join("scatter.csv")).unwrap();
    assert_eq!(scatter.lines().count(), 5);
    assert!(scatter.lines().any(|l| l.starts_with("en,,")), "{scatter}");
    assert!(
        scatter.lines().any(|l| l.starts_with("de,32.0,")),
        "{scatter}"
    );
    let means = fs::read_to_string(Path::new(&out).join("group_means.csv")).unwrap();
    // none of en, de, zh, hi is a low-share language in Latin or Cyrillic script
    assert!(
        means.contains("script-known/share-L,few,0,,true"),
        "{means}"
    );
    assert!(String::from_utf8(o.stdout).unwrap().contains("empty group"));
}
