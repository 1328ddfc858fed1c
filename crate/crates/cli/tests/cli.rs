use std::process::{Command, Output};

fn filtk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_filtk"))
        .args(args)
        .current_dir(concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures"))
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn space_info_for_c2() {
    let o = filtk(&["space-info", "--builtin", "C2"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("LC* = 13 subsets; accordion: no"));
}

#[test]
fn graph_tor_over_z3() {
    let o = filtk(&["graph-tor", "--space", "Z3", "--file", "ck_z3.json"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().any(|l| l == "Tor_1 odd: Z/2"));
}

#[test]
fn graph_tor_over_s_warns() {
    let o = filtk(&["graph-tor", "--file", "ck_s.json", "--n", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().any(|l| l == "Tor_1 even: Z/2"));
    assert!(String::from_utf8_lossy(&o.stderr)
        .contains("warning: the relations of S are reconstructed from naturality"));
}

#[test]
fn module_pd_of_the_example() {
    let o = filtk(&[
        "module-pd",
        "--space",
        "Z4",
        "--file",
        "m_example.json",
        "--max",
        "4",
    ]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "pd = 2");
}

#[test]
fn json_tor_report() {
    let o = filtk(&[
        "module-tor",
        "--file",
        "m_example.json",
        "--n",
        "2",
        "--format",
        "json",
    ]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o).trim(),
        r#"{"12345":{"2":{"even":"Z^1","odd":"0"}}}"#
    );
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rep = filtk::ntmod::TorReport::from_json(&v).unwrap();
    assert_eq!(rep.to_json(), v);
}

#[test]
fn text_and_json_agree() {
    let t = stdout(&filtk(&["graph-tor", "--file", "ck_z3.json", "--n", "1"]));
    let j = stdout(&filtk(&[
        "graph-tor",
        "--file",
        "ck_z3.json",
        "--n",
        "1",
        "--format",
        "json",
    ]));
    let rep = filtk::ntmod::TorReport::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
    let g = rep.aggregate(1);
    assert!(t.contains(&format!("Tor_1 even: {}", g.even)));
    assert!(t.contains(&format!("Tor_1 odd: {}", g.odd)));
}

#[test]
fn output_is_deterministic() {
    let a = filtk(&["graph-fk", "--file", "ck_s.json", "--format", "json"]);
    let b = filtk(&["graph-fk", "--file", "ck_s.json", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn graph_checks_and_k_groups() {
    let o = filtk(&["graph-check", "--file", "ck_z3.json"]);
    assert!(stdout(&o).contains("condition (K): yes"));
    let o = filtk(&["graph-k", "--file", "ck_z3.json", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.get("1234").is_some());
}

#[test]
fn module_checks() {
    assert_eq!(
        stdout(&filtk(&["module-validate", "--file", "m_example.json"])).trim(),
        "valid"
    );
    assert_eq!(
        stdout(&filtk(&["module-exact", "--file", "m_example.json"])).trim(),
        "exact"
    );
    assert!(filtk(&["cat-table", "--builtin", "Z3"]).status.success());
}

#[test]
fn exit_codes() {
    assert_eq!(
        filtk(&["graph-tor", "--file", "missing.json"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        filtk(&["graph-tor", "--space", "S", "--file", "ck_z3.json"])
            .status
            .code(),
        Some(2)
    );
    let dir = std::env::temp_dir().join(format!("filtk-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let mut codes = Vec::new();
    for adj in ["[[2,0],[1,2]]", "[[2,1],[0,2]]"] {
        let path = dir.join("g.json");
        let text = format!(
            r#"{{"space":"Z1","blocks":[{{"point":"1","vertices":1}},{{"point":"2","vertices":1}}],"adjacency":{adj}}}"#
        );
        std::fs::write(&path, text).unwrap();
        assert!(filtk(&["graph-check", "--file", path.to_str().unwrap()])
            .status
            .success());
        codes.push(
            filtk(&["graph-tor", "--file", path.to_str().unwrap()])
                .status
                .code()
                .unwrap(),
        );
    }
    std::fs::remove_dir_all(&dir).unwrap();
    // exactly one orientation breaks triangularity
    codes.sort_unstable();
    assert_eq!(codes, vec![0, 3]);
}
