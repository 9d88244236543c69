use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn specs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../specs")
}

fn kazlab(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kazlab"))
        .args(args)
        .arg("--out-dir")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn write_spec(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

const F2_SMALL: &str = r#"{
  "presentation": { "generators": ["a", "b"], "relators": [] },
  "chain": [["a^2", "b^2", "a*b*a^-1*b^-1"]],
  "degrees": [1]
}"#;

#[test]
fn betti_row_for_klein_four_quotient() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "f2.json", F2_SMALL);
    let out = kazlab(&["betti", spec.to_str().unwrap()], &dir.path().join("out"));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("out/betti.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "quotient_index,group_index,degree,kernel_dim,gap,ratio_num,ratio_den");
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!((row[1], row[2], row[3]), ("4", "1", "5"));
    assert_eq!((row[5], row[6]), ("5", "4"));
}

#[test]
fn verify_cert_on_cyclic_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let spec = specs().join("cyclic_z3_certificate.json");
    let out = kazlab(&["verify-cert", spec.to_str().unwrap()], dir.path());
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("z3-gap-6: true"));
    assert!(stdout.contains("z3-gap-5-tampered: false"));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("verify-cert.json")).unwrap()).unwrap();
    let results = json["results"].as_array().unwrap();
    assert_eq!(results[0]["claim"]["epsilon"], "6");
    assert_eq!(results[0]["claim"]["kind"], "uniform-gap");
    assert!(results[0]["soundness"].as_array().unwrap().iter().all(|r| r["holds"] == true));
    assert_eq!(results[1]["residual"][0][0], "4 - 2*a - 2*a^-1");
}

#[test]
fn obstruct_on_surface_group_degree_two() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(
        dir.path(),
        "g2.json",
        r#"{
  "presentation": { "generators": ["a", "b", "c", "d"], "relators": ["a*b*a^-1*b^-1*c*d*c^-1*d^-1"] },
  "chain": { "abelian": [2, 3] },
  "degrees": [2],
  "beta_ref": { "value": "0", "provenance": "user-cited", "citation": "aspherical closed surface" }
}"#,
    );
    let out = kazlab(&["obstruct", spec.to_str().unwrap()], &dir.path().join("out"));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/obstruct.json")).unwrap()).unwrap();
    let report = &json["results"][0];
    assert_eq!(report["verdict"], "persistent-discrepancy");
    assert_eq!(report["beta_ref"]["provenance"], "user-cited");
    assert!(json["tolerances"]["zero"].is_number());
    for row in report["rows"].as_array().unwrap() {
        assert_eq!(row["d_star_value"], 1);
        assert_eq!(row["discrepancy"], "1");
    }
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let spec = specs().join("free_f2.json");
    for cmd in ["luck", "project", "bounds"] {
        let a = dir.path().join(format!("{cmd}-a"));
        let b = dir.path().join(format!("{cmd}-b"));
        assert!(kazlab(&[cmd, spec.to_str().unwrap(), "--threads", "3"], &a).status.success());
        assert!(kazlab(&[cmd, spec.to_str().unwrap()], &b).status.success());
        for ext in ["json", "csv"] {
            let file = format!("{cmd}.{ext}");
            assert_eq!(std::fs::read(a.join(&file)).unwrap(), std::fs::read(b.join(&file)).unwrap(), "{file}");
        }
        assert!(a.join(format!("{cmd}.meta.json")).exists());
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");

    let broken = write_spec(dir.path(), "broken.json", "{ not json");
    assert_eq!(kazlab(&["betti", broken.to_str().unwrap()], &out_dir).status.code(), Some(2));

    let unknown = write_spec(
        dir.path(),
        "unknown.json",
        r#"{ "presentation": { "generators": ["a"], "relators": ["a*q"] }, "chain": [[]] }"#,
    );
    assert_eq!(kazlab(&["betti", unknown.to_str().unwrap()], &out_dir).status.code(), Some(2));

    let spec = write_spec(dir.path(), "f2.json", F2_SMALL);
    let out = kazlab(&["betti", spec.to_str().unwrap(), "--max-cosets", "2"], &out_dir);
    assert_eq!(out.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "computational-failure");
    assert!(out_dir.join("betti.error.json").exists());

    let no_chain = write_spec(dir.path(), "nochain.json", r#"{ "presentation": { "generators": ["a"] } }"#);
    assert_eq!(kazlab(&["luck", no_chain.to_str().unwrap()], &out_dir).status.code(), Some(2));
}

#[test]
fn chain_identity_violation_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(
        dir.path(),
        "bad.json",
        r#"{
  "presentation": { "generators": ["a"], "relators": ["a^3"] },
  "chain": [[]],
  "higher_codifferentials": [[["1 + a"]]]
}"#,
    );
    let out = kazlab(&["betti", spec.to_str().unwrap()], &dir.path().join("out"));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("chain identity"));
}
