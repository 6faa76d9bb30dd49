use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn fano(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_fano")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> Value {
    let (code, stdout, stderr) = fano(args);
    assert_eq!(code, 0, "{args:?}: {stderr}");
    serde_json::from_str(&stdout).unwrap()
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fano-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn bounds_report() {
    let v = json(&["bounds", "--r", "1", "--d", "3", "--e", "1", "--n", "3"]);
    assert_eq!(v["f_e_nrd"], 0);
    assert_eq!(v["N_1_waldron"], 3);
    assert!(v.get("N_tilde").is_none());
    let v = json(&["bounds", "--r", "1", "--d", "3", "--e", "2"]);
    assert_eq!(v["N_tilde"], 8);
}

#[test]
fn construct_then_certify_the_output() {
    let v = json(&[
        "construct",
        "waldron",
        "--r",
        "1",
        "--d",
        "3",
        "--n",
        "3",
        "--seed",
        "5",
    ]);
    assert_eq!(v["certificate"]["e_generating"], true);
    let poly = v["form"]["poly"].as_str().unwrap();
    let path = temp_file("waldron.txt", poly);
    let p = path.to_str().unwrap();
    let c = json(&["certify", "--r", "1", "--n", "3", "--poly", p]);
    assert_eq!(c["e_generating"], true);
    assert_eq!(c["image_smooth_c"], 1);
    let t = json(&["tangent", "--r", "1", "--n", "3", "--poly", p]);
    assert_eq!(t["tangent_dim"], 0);
    assert_eq!(t["f1"], 0);
}

#[test]
fn certify_reports_base_points() {
    let path = temp_file("base.txt", "y1*x0^3 + y2*x0^2*x1");
    let c = json(&["certify", "--r", "1", "--n", "3", "--poly", path.to_str().unwrap()]);
    assert_eq!(c["e_generating"], false);
    assert!(c.get("image_smooth_c").is_none());
}

#[test]
fn pencil_and_nenashev_and_quadric() {
    let v = json(&[
        "construct",
        "pencil",
        "--r",
        "1",
        "--d",
        "3",
        "--n",
        "4",
        "--a",
        "1",
        "--b",
        "0",
        "--field",
        "101",
    ]);
    assert_eq!(v["certificate"]["e_generating"], true);
    assert!(v["form"]["poly"].as_str().unwrap().contains("y0"));
    let v = json(&["construct", "nenashev", "--r", "1", "--e", "2", "--d", "3", "--n", "8"]);
    assert_eq!(v["certificate"]["e_generating"], true);
    let v = json(&["construct", "quadric-veronese", "--r", "1", "--e", "2", "--n", "5"]);
    assert_eq!(v["gram_rank"], 6);
}

#[test]
fn schubert_subcommands() {
    let v = json(&["schubert", "count", "--r", "1", "--n", "4", "--d", "5"]);
    assert_eq!(v["count"], "2875");
    assert_eq!(v["quotient"], "115");
    let v = json(&["schubert", "degree", "--r", "1", "--n", "3", "--d", "2"]);
    assert_eq!(v["degree"], "4");
    let v = json(&["schubert", "poly", "--r", "1", "--d", "3"]);
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 3);
    assert_eq!(terms[0]["coeff"], "18");
}

#[test]
fn enumerate_subcommands() {
    let path = temp_file("fermat.txt", "x0^3 + x1^3 + x2^3 + x3^3");
    let v = json(&[
        "enumerate",
        "fano",
        "--q",
        "7",
        "--r",
        "1",
        "--poly",
        path.to_str().unwrap(),
    ]);
    assert_eq!(v["count"], 27);
    let v = json(&["enumerate", "planes", "--n", "3", "--r", "1", "--q", "7"]);
    assert_eq!(v["count"], 2850);
    let v = json(&["enumerate", "quadric-families", "--r", "1", "--q", "5"]);
    assert_eq!(v["family_sizes"], serde_json::json!([6, 6]));
}

#[test]
fn waldron_reduced_mod_p_contains_its_plane() {
    let v = json(&[
        "construct",
        "waldron",
        "--r",
        "1",
        "--d",
        "3",
        "--n",
        "3",
        "--field",
        "11",
        "--seed",
        "2",
    ]);
    let path = temp_file("waldron11.txt", v["form"]["poly"].as_str().unwrap());
    let c = json(&[
        "enumerate",
        "fano",
        "--q",
        "11",
        "--r",
        "1",
        "--n",
        "3",
        "--poly",
        path.to_str().unwrap(),
    ]);
    assert!(c["count"].as_u64().unwrap() >= 1);
}

#[test]
fn generators_find() {
    let v = json(&[
        "generators",
        "find",
        "--r",
        "1",
        "--b",
        "4",
        "--m",
        "6",
        "--c",
        "2",
        "--seed",
        "3",
    ]);
    assert_eq!(v["members"].as_array().unwrap().len(), 6);
    let (code, _, stderr) = fano(&["generators", "find", "--r", "1", "--b", "2", "--m", "1", "--c", "1"]);
    assert_eq!(code, 1);
    assert!(stderr.contains("attempts"));
}

#[test]
fn exit_codes() {
    assert_eq!(fano(&["nonsense"]).0, 64);
    assert_eq!(fano(&["bounds", "--r", "x", "--d", "3"]).0, 64);
    assert_eq!(fano(&["--help"]).0, 0);
    assert_eq!(fano(&["construct", "waldron", "--r", "1", "--d", "3", "--n", "2"]).0, 1);
    assert_eq!(
        fano(&[
            "construct",
            "pencil",
            "--r",
            "1",
            "--d",
            "3",
            "--n",
            "4",
            "--a",
            "0",
            "--b",
            "0"
        ])
        .0,
        1
    );
    assert_eq!(fano(&["enumerate", "quadric-families", "--r", "1", "--q", "2"]).0, 1);
    assert_eq!(
        fano(&["certify", "--r", "1", "--n", "3", "--poly", "/nonexistent/file"]).0,
        1
    );
}

#[test]
fn output_is_reproducible() {
    let args = [
        "construct",
        "waldron",
        "--r",
        "2",
        "--d",
        "4",
        "--n",
        "7",
        "--seed",
        "11",
    ];
    let a = fano(&args);
    let b = fano(&args);
    let mut threaded = vec!["--threads", "3"];
    threaded.extend(args);
    let c = fano(&threaded);
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn out_and_tsv() {
    let dir = std::env::temp_dir().join(format!("fano-cli-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("report.tsv");
    let (code, stdout, _) = fano(&[
        "--format",
        "tsv",
        "--out",
        out.to_str().unwrap(),
        "schubert",
        "count",
        "--r",
        "1",
        "--n",
        "3",
        "--d",
        "3",
    ]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let text = std::fs::read_to_string(out).unwrap();
    assert!(text.contains("count\t27\n"));
}
