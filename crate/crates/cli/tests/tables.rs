use std::process::Command;

use ifem_cli::{emit_table, parse_csv, OutputFormat};
use ifem_core::study::{run_study, StudyConfig};

fn small_config() -> StudyConfig {
    let mut c = StudyConfig::default_2d();
    c.min_exp = 2;
    c.max_exp = 5;
    c
}

#[test]
fn csv_round_trip_reproduces_rates() {
    let records = run_study(&small_config()).unwrap();
    let csv = emit_table(&records, OutputFormat::Csv).unwrap();
    let rows = parse_csv(&csv).unwrap();
    assert_eq!(rows.len(), records.len());
    for row in &rows {
        let prev = rows
            .iter()
            .find(|r| r.alpha == row.alpha && 2 * r.n_cells_per_axis == row.n_cells_per_axis);
        match prev {
            None => assert!(row.eoc_l2.is_none() && row.eoc_h1.is_none()),
            Some(p) => {
                let l2 = (p.err_l2_alpha / row.err_l2_alpha).log2();
                let h1 = (p.err_h1semi_alpha / row.err_h1semi_alpha).log2();
                assert!((l2 - row.eoc_l2.unwrap()).abs() < 1e-12);
                assert!((h1 - row.eoc_h1.unwrap()).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn two_levels_give_numeric_rates() {
    let mut c = small_config();
    c.max_exp = 3;
    c.alphas = vec![0.0];
    let csv = emit_table(&run_study(&c).unwrap(), OutputFormat::Csv).unwrap();
    let rows = parse_csv(&csv).unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].eoc_l2.is_none());
    assert!(rows[1].eoc_l2.is_some() && rows[1].eoc_h1.is_some());
}

#[test]
fn repeated_runs_are_byte_identical() {
    let c = small_config();
    let a = emit_table(&run_study(&c).unwrap(), OutputFormat::Csv).unwrap();
    let b = emit_table(&run_study(&c).unwrap(), OutputFormat::Csv).unwrap();
    assert_eq!(a, b);
}

#[test]
fn l2_error_decreases_with_alpha() {
    let rows = parse_csv(&emit_table(&run_study(&small_config()).unwrap(), OutputFormat::Csv).unwrap()).unwrap();
    for n in [4, 8, 16, 32] {
        let level: Vec<f64> = rows.iter().filter(|r| r.n_cells_per_axis == n).map(|r| r.err_l2_alpha).collect();
        assert_eq!(level.len(), 6);
        assert!(level.windows(2).all(|w| w[1] <= w[0]), "n={n}: {level:?}");
    }
}

fn ifem(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_ifem")).args(args).output().unwrap()
}

#[test]
fn binary_exit_codes() {
    let ok = ifem(&["--min-exp", "2", "--max-exp", "2", "--alphas", "0,0.3", "--quiet"]);
    assert_eq!(ok.status.code(), Some(0));
    let text = String::from_utf8(ok.stdout).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.starts_with("dim,n_cells_per_axis,h,n_dofs,alpha,err_L2_alpha,err_H1semi_alpha,eoc_L2,eoc_H1\n"));

    let bad = ifem(&["--alphas", "0.7"]);
    assert_eq!(bad.status.code(), Some(1));
    let bad = ifem(&["--dim", "5"]);
    assert_eq!(bad.status.code(), Some(1));

    let stuck = ifem(&["--min-exp", "3", "--max-exp", "3", "--cg-tol", "1e-300", "--quiet"]);
    assert_eq!(stuck.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&stuck.stderr).contains("solver"));
}

#[test]
fn markdown_output_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.md");
    let out = ifem(&[
        "--min-exp", "2", "--max-exp", "3", "--alphas", "0.2", "--format", "markdown", "--quiet",
        "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let md = std::fs::read_to_string(path).unwrap();
    assert!(md.starts_with("### alpha = 0.2"));
    assert_eq!(md.lines().filter(|l| l.starts_with("| 4 ") || l.starts_with("| 8 ")).count(), 2);
}
