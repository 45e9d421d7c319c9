mod common;

use std::path::PathBuf;
use std::process::Command;

use common::*;
use pir_rescale::analysis::evaluate;
use pir_rescale::cli::{self, ReportRow};
use pir_rescale::{IndexKind, OutlierPolicy, ScopeKind, WeightProfile};

fn run(args: &[&str]) -> (u8, String, String) {
    let mut argv = vec!["pir-rescale".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cli::run(&argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn data() -> String {
    dataset_path().to_string_lossy().into_owned()
}

fn excl() -> String {
    exclusions_path().to_string_lossy().into_owned()
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pir-rescale-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[derive(serde::Deserialize)]
struct Score {
    player: String,
    season: String,
    value: f64,
    excluded: bool,
}

#[test]
fn validate_reports_counts() {
    let (code, out, err) = run(&["validate", &data(), "--exclusions", &excl()]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("114 records"));
    assert!(err.is_empty());
}

#[test]
fn report_json_matches_library() {
    let (code, out, _) = run(&[
        "report",
        &data(),
        "--exclusions",
        &excl(),
        "--format",
        "json",
    ]);
    assert_eq!(code, 0);
    let rows: Vec<ReportRow> = serde_json::from_str(&out).unwrap();
    assert_eq!(rows.len(), 16);
    let lib = table(&fixture(), IndexKind::RescaledPir, &published_exclusions());
    for r in rows {
        let c = lib.cell(r.phase, r.scope, &r.player).unwrap();
        assert_eq!(r.mean_with_outliers, c.mean_with_outliers);
        assert_eq!(r.mean_without_outliers, c.mean_without_outliers);
    }
}

#[test]
fn report_table_rounds_to_four_places() {
    let (code, out, _) = run(&[
        "report",
        &data(),
        "--exclusions",
        &excl(),
        "--scope",
        "joint",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("0.8477 (0.7798)"), "{out}");
    assert!(!out.contains("individual"));
}

#[test]
fn rees_csv_matches_library_scores() {
    let (code, out, _) = run(&["rees", &data(), "--format", "csv", "--scope", "individual"]);
    assert_eq!(code, 0);
    let mut rdr = csv::Reader::from_reader(out.as_bytes());
    let got: Vec<Score> = rdr.deserialize().collect::<Result<_, _>>().unwrap();
    let lib = evaluate(
        &fixture(),
        IndexKind::Rees,
        ScopeKind::Individual,
        &OutlierPolicy::none(),
        &WeightProfile::unit(),
        None,
    )
    .unwrap();
    assert_eq!(got.len(), lib.len());
    for (g, l) in got.iter().zip(&lib) {
        assert_eq!(
            (g.player.as_str(), g.season.as_str(), g.value, g.excluded),
            (l.player.as_str(), l.season.as_str(), l.value, l.excluded)
        );
    }
}

#[test]
fn explicit_unit_weights_equal_default() {
    let a = run(&["rees", &data(), "--format", "json"]);
    let b = run(&[
        "rees",
        &data(),
        "--format",
        "json",
        "--weights",
        "1,1,1,1,1,1,1,1,1,1,1",
    ]);
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
}

#[test]
fn weights_from_file() {
    let path = tmp("weights.txt");
    std::fs::write(&path, "2,1,1,1,1,1,1,1,1,1,1\n").unwrap();
    let (code, out, err) = run(&[
        "rees",
        &data(),
        "--format",
        "json",
        "--weights",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let doubled: Vec<Score> = serde_json::from_str(&out).unwrap();
    let (_, base, _) = run(&["rees", &data(), "--format", "json"]);
    let base: Vec<Score> = serde_json::from_str(&base).unwrap();
    // the extra term is the rescaled points value, so it lies in [0, 1]
    for (d, b) in doubled.iter().zip(&base) {
        let extra = d.value - b.value;
        assert!(
            (-1e-12..=1.0 + 1e-12).contains(&extra),
            "{} {}",
            d.season,
            extra
        );
    }
    assert!(doubled.iter().zip(&base).any(|(d, b)| d.value > b.value));
}

#[test]
fn wrong_weight_count_is_an_error() {
    let (code, out, err) = run(&["rees", &data(), "--weights", "1,1"]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert_eq!(err.lines().count(), 1);
    assert!(err.starts_with("error: "));
}

#[test]
fn usage_errors_exit_two() {
    let (code, out, err) = run(&["frobnicate"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.starts_with("error: "));
    let (code, _, _) = run(&["report", &data(), "--phase", "preseason"]);
    assert_eq!(code, 2);
}

#[test]
fn missing_dataset_is_a_runtime_error() {
    let (code, out, err) = run(&["pir", "/nonexistent/data.csv"]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(err.contains("/nonexistent/data.csv"));
}

#[test]
fn unmatched_exclusion_is_reported() {
    let path = tmp("excl.csv");
    std::fs::write(&path, "player,season,phase\nZZ,1990-91,regular\n").unwrap();
    let (code, _, err) = run(&["report", &data(), "--exclusions", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("ZZ"), "{err}");
}

#[test]
fn outliers_lists_published_exclusions() {
    let (code, out, _) = run(&[
        "outliers",
        &data(),
        "--exclusions",
        &excl(),
        "--format",
        "csv",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 11);
    assert!(out.contains("LB,1988-89,regular"));
}

#[test]
fn unknown_player_trajectory_fails_without_plot() {
    let plot = tmp("none.svg");
    let (code, out, _) = run(&[
        "trajectory",
        &data(),
        "--player",
        "ZZ",
        "--plot",
        plot.to_str().unwrap(),
    ]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(!plot.exists());
}

#[test]
fn trajectory_plot_is_deterministic() {
    let (a, b) = (tmp("a.svg"), tmp("b.svg"));
    for p in [&a, &b] {
        let (code, _, err) = run(&[
            "trajectory",
            &data(),
            "--player",
            "LB",
            "--kind",
            "rees",
            "--plot",
            p.to_str().unwrap(),
        ]);
        assert_eq!(code, 0, "{err}");
    }
    let sa = std::fs::read_to_string(&a).unwrap();
    assert_eq!(sa, std::fs::read_to_string(&b).unwrap());
    assert!(sa.contains("LB rees"));
}

#[test]
fn binary_runs() {
    let out = Command::new(env!("CARGO_BIN_EXE_pir-rescale"))
        .args(["pir", &data(), "--phase", "regular", "--format", "json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let scores: Vec<Score> = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(scores.len(), 61);

    let bad = Command::new(env!("CARGO_BIN_EXE_pir-rescale"))
        .arg("nope")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(bad.stdout.is_empty());
}
