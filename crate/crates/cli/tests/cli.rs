//! End-to-end tests of the binary: exit codes, format stability, and
//! byte-level determinism.

use eaclass_core::ea::{ea_equivalent, AffineMap, EAElement};
use eaclass_core::func::{write_table, FuncTable};
use eaclass_core::linalg::{FqMatrix, FqVector};
use eaclass_core::{Field, Settings};
use std::path::Path;
use std::process::Output;

fn run(args: &[&str]) -> Output {
    std::process::Command::new(env!("CARGO_BIN_EXE_eaclass"))
        .args(args)
        .env_remove("EACLASS_ENUMERATION_BUDGET")
        .env_remove("EACLASS_ORACLE_BUDGET")
        .env_remove("EACLASS_FIT_BUDGET")
        .env_remove("EACLASS_CONJUGACY_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn csv_row(out: &Output) -> (Vec<String>, Vec<String>) {
    let text = stdout(out);
    let mut lines = text.lines();
    let header = lines.next().expect("header").split(',').map(str::to_string).collect();
    let row = lines.next().expect("row").split(',').map(str::to_string).collect();
    (header, row)
}

fn field(q: u64) -> &'static Field {
    Field::get(q).unwrap()
}

#[test]
fn group_order_csv() {
    let out = run(&["group-order", "--q", "2", "--n", "3", "--format", "csv"]);
    assert!(out.status.success());
    let (header, row) = csv_row(&out);
    assert_eq!(header, ["q", "n", "gl_order", "agl_order"]);
    assert_eq!(row, ["2", "3", "168", "1344"]);
}

#[test]
fn count_classes_smallest() {
    let out = run(&["count-classes", "--q", "2", "--n", "1", "--m", "1", "--format", "csv"]);
    assert!(out.status.success());
    let (header, row) = csv_row(&out);
    assert_eq!(
        header,
        ["q", "n", "m", "method", "gamma_order", "class_count", "naive_num", "naive_den", "ratio_decimal"]
    );
    assert_eq!(row[5], "2");
    let conj = run(&[
        "count-classes", "--q", "2", "--n", "1", "--m", "1", "--method", "conjugacy", "--format", "csv",
    ]);
    let (_, row2) = csv_row(&conj);
    assert_eq!(row2[5], "2");
}

#[test]
fn relative_error_frozen_values() {
    let out = run(&["relative-error", "--q", "2", "--n", "2", "--m", "2", "--format", "csv"]);
    assert!(out.status.success());
    let (header, row) = csv_row(&out);
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    assert_eq!(row[col("class_count")], "5");
    assert_eq!(row[col("ratio_num")], "45");
    assert_eq!(row[col("ratio_den")], "4");
    assert_eq!(row[col("abs_error_num")], "41");
    assert_eq!(row[col("abs_error_den")], "4");
    assert_eq!(row[col("ratio_decimal")], "11.25000000000000000000");
}

#[test]
fn bounds_at_2_4_4() {
    let out = run(&["bounds", "--q", "2", "--n", "4", "--m", "4", "--format", "csv"]);
    assert!(out.status.success());
    let (header, row) = csv_row(&out);
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    let expect = eaclass_core::logq::log2_biguint(
        &eaclass_core::linalg::agl_order(4, 2).unwrap().pow(2),
    ) - 64.0;
    assert_eq!(row[col("ea_exponent")], format!("{expect:.12}"));
    assert_eq!(row[col("ea_vacuous")], "false");
}

#[test]
fn stab_sample_bytes_are_reproducible_for_any_thread_count() {
    let args = ["stab-sample", "--q", "2", "--n", "2", "--m", "2", "--trials", "100", "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let one = run(&[
        "stab-sample", "--q", "2", "--n", "2", "--m", "2", "--trials", "100", "--seed", "7",
        "--threads", "1",
    ]);
    let four = run(&[
        "stab-sample", "--q", "2", "--n", "2", "--m", "2", "--trials", "100", "--seed", "7",
        "--threads", "4",
    ]);
    assert_eq!(a.stdout, one.stdout);
    assert_eq!(a.stdout, four.stdout);
}

#[test]
fn selftest_passes() {
    let out = run(&["selftest", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.lines().skip(1).all(|l| l.contains(",pass,")), "{text}");
}

#[test]
fn budget_refusal_is_exit_code_2() {
    let out = run(&[
        "orbit-census", "--q", "2", "--n", "3", "--m", "3", "--oracle-budget", "1000",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("budget"), "{err}");
}

#[test]
fn usage_errors_are_exit_code_1() {
    let out = run(&["count-classes", "--q", "2", "--n", "1", "--m", "1", "--bogus-flag"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!String::from_utf8(out.stderr).unwrap().is_empty());
    let out = run(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(1));
    // missing table file
    let out = run(&["stabilizer", "--input", "/nonexistent/t.sbox.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_and_version_exit_zero() {
    assert!(run(&["--help"]).status.success());
    assert!(run(&["--version"]).status.success());
}

#[test]
fn fix_count_from_flags() {
    // identity at (2,2,2) fixes all 256 tables
    let out = run(&[
        "fix-count", "--q", "2", "--n", "2", "--m", "2",
        "--p", "1,0,0,1", "--a", "0,0", "--qmat", "1,0,0,1", "--b", "0,0",
        "--format", "csv",
    ]);
    assert!(out.status.success());
    let (header, row) = csv_row(&out);
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    assert_eq!(row[col("total")], "256");
    assert_eq!(row[col("log_q_total")], "8");
    assert_eq!(row[col("bound_case")], "identity");

    // output swap with identity input at (2,1,2): two cycles of one, total 4
    let out = run(&[
        "fix-count", "--q", "2", "--n", "1", "--m", "2",
        "--p", "1", "--a", "0", "--qmat", "0,1,1,0", "--b", "0,0",
        "--format", "csv",
    ]);
    let (header, row) = csv_row(&out);
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    assert_eq!(row[col("total")], "4");
    assert_eq!(row[col("per_orbit")], "1:2;1:2");
}

#[test]
fn fix_count_all_with_oracle() {
    let out = run(&[
        "fix-count-all", "--q", "2", "--n", "1", "--m", "1", "--oracle", "--format", "csv",
    ]);
    assert!(out.status.success());
    let (header, row) = csv_row(&out);
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    assert_eq!(row[col("gamma_order")], "4");
    assert_eq!(row[col("class_count")], "2");
    assert_eq!(row[col("oracle_mismatches")], "0");
}

#[test]
fn stabilizer_and_element_files() {
    let dir = tempfile::tempdir().unwrap();
    let table_path = dir.path().join("f.sbox.json");
    let f = FuncTable::zero(field(2), 1, 1);
    write_table(&f, &table_path).unwrap();
    let elements_path = dir.path().join("stab.json");
    let out = run(&[
        "stabilizer",
        "--input",
        table_path.to_str().unwrap(),
        "--elements-out",
        elements_path.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let (header, row) = csv_row(&out);
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    assert_eq!(row[col("stabilizer_size")], "2");
    assert_eq!(row[col("is_trivial")], "false");
    let elements: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&elements_path).unwrap()).unwrap();
    assert_eq!(elements.as_array().unwrap().len(), 2);
}

fn write_pair(dir: &Path, a: &FuncTable, b: &FuncTable) -> (String, String) {
    let fa = dir.join("a.sbox.json");
    let fb = dir.join("b.sbox.json");
    write_table(a, &fa).unwrap();
    write_table(b, &fb).unwrap();
    (fa.to_str().unwrap().to_string(), fb.to_str().unwrap().to_string())
}

#[test]
fn ea_check_finds_and_verifies_witness() {
    let dir = tempfile::tempdir().unwrap();
    let f = FuncTable::random(field(2), 2, 2, 5);
    let g = EAElement::new(
        AffineMap::new(
            FqMatrix::new(field(2), 2, 2, vec![0, 1, 1, 0]).unwrap(),
            FqVector::new(field(2), vec![1, 0]).unwrap(),
        )
        .unwrap(),
        AffineMap::translation(field(2), FqVector::new(field(2), vec![1, 1]).unwrap()),
    );
    let moved = g.apply(&f).unwrap();
    let (fa, fb) = write_pair(dir.path(), &f, &moved);
    let witness_path = dir.path().join("w.json");
    let out = run(&[
        "ea-check", "--f", &fa, "--g", &fb,
        "--witness-out", witness_path.to_str().unwrap(),
        "--format", "csv",
    ]);
    assert!(out.status.success());
    let (header, row) = csv_row(&out);
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    assert_eq!(row[col("equivalent")], "true");
    // the emitted witness really maps f to moved
    let w = EAElement::from_json(&std::fs::read_to_string(&witness_path).unwrap()).unwrap();
    assert_eq!(w.apply(&f).unwrap(), moved);
}

#[test]
fn ccz_check_is_coarser_than_ea() {
    let dir = tempfile::tempdir().unwrap();
    let zero = FuncTable::zero(field(2), 1, 1);
    let id_map = FuncTable::identity_map(field(2), 1);
    assert!(ea_equivalent(&zero, &id_map, &Settings::default()).unwrap().is_none());
    let (fa, fb) = write_pair(dir.path(), &zero, &id_map);
    let ea = run(&["ea-check", "--f", &fa, "--g", &fb, "--format", "csv"]);
    let (_, row) = csv_row(&ea);
    assert_eq!(row[3], "false");
    let ccz = run(&["ccz-check", "--f", &fa, "--g", &fb, "--format", "csv"]);
    let (_, row) = csv_row(&ccz);
    assert_eq!(row[3], "true");
}

#[test]
fn collision_modes() {
    let exact = run(&["collision", "--q", "2", "--n", "1", "--m", "1", "--exact", "--format", "csv"]);
    assert!(exact.status.success());
    let (header, row) = csv_row(&exact);
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    assert_eq!(row[col("prob_num")], "1");
    assert_eq!(row[col("prob_den")], "2");
    let mc = run(&[
        "collision", "--q", "2", "--n", "1", "--m", "1", "--mc", "--trials", "400", "--seed", "11",
        "--format", "csv",
    ]);
    assert!(mc.status.success());
    let (header, row) = csv_row(&mc);
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    assert_eq!(row[col("exact_num")], "1");
    assert_eq!(row[col("exact_den")], "2");
    // neither mode selected
    let neither = run(&["collision", "--q", "2", "--n", "1", "--m", "1"]);
    assert_eq!(neither.status.code(), Some(1));
}

#[test]
fn structured_output_is_json_with_ordered_keys() {
    let out = run(&[
        "count-classes", "--q", "2", "--n", "1", "--m", "1", "--format", "structured",
    ]);
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = value.as_array().unwrap();
    assert_eq!(rows.len(), 1);
    let keys: Vec<&String> = rows[0].as_object().unwrap().keys().collect();
    assert_eq!(
        keys,
        ["q", "n", "m", "method", "gamma_order", "class_count", "naive_num", "naive_den", "ratio_decimal"]
    );
}

#[test]
fn output_file_flag() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let out = run(&[
        "group-order", "--q", "3", "--n", "2", "--format", "csv",
        "--output", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("3,2,48,432"), "{text}");
}

#[test]
fn malformed_table_file_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.sbox.json");
    std::fs::write(&path, r#"{"q":2,"n":2,"m":2,"table":[0,1,2]}"#).unwrap();
    let out = run(&["stabilizer", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("table length"));
}

#[test]
fn stab_census_matches_known_fraction() {
    let out = run(&["stab-census", "--q", "2", "--n", "1", "--m", "1", "--format", "csv"]);
    let (header, row) = csv_row(&out);
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    assert_eq!(row[col("nontrivial")], "4");
    assert_eq!(row[col("total")], "4");
    assert_eq!(row[col("fraction_num")], "1");
    assert_eq!(row[col("fraction_den")], "1");
}
