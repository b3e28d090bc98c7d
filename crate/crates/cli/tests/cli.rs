use std::process::Command;

fn halo(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_halo")).args(args).output().expect("binary runs")
}

fn json(out: &std::process::Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn rejects_level_not_11_mod_12() {
    let out = halo(&["domain", "--l", "13"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("11 mod 12"));
}

#[test]
fn domain_other_level() {
    let out = halo(&["domain", "--l", "23"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["schema"], "halo.domain/1");
    assert_eq!(v["level"], "529");
    assert!(v["checks"].as_object().unwrap().values().all(|x| x == "PASS"));
}

#[test]
fn halo_refuses_beyond_radius() {
    let out = halo(&["halo", "--beta", "1/7"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("1/89"));
}

#[test]
fn json_is_deterministic() {
    let a = halo(&["domain"]);
    let b = halo(&["domain"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["triangle_count"], "44");
}

#[test]
fn csv_output_has_header() {
    let out = halo(&["domain", "--out", "csv"]);
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.starts_with("check,verdict\n"));
}

#[test]
fn quadratic_weight_zero_pairing_fails() {
    let out = halo(&["classical", "--k", "0", "--eps", "quadratic"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["Atkin-Lehner pairing"]["verdict"], "FAIL");
    assert_eq!(v["Atkin-Lehner pairing"]["unpaired"], "44");
}

#[test]
fn bad_beta_is_usage_error() {
    for b in ["1", "0", "x/2"] {
        assert_eq!(halo(&["newton", "--beta", b]).status.code(), Some(2));
    }
}
