use dhmono::cli::run;

fn tmp(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("dhmono-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn args(extra: &[&str]) -> Vec<String> {
    std::iter::once("dhmono").chain(extra.iter().copied()).map(String::from).collect()
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(args(&["report", "--genus", "5"])), 2);
    assert_eq!(run(args(&["report", "--n", "4"])), 2);
    assert_eq!(run(args(&["report", "--preset", "nope"])), 2);
    assert_eq!(run(args(&["report", "--orbit", "1"])), 2);
    assert_eq!(run(args(&["report", "--checks", "span,unknown"])), 2);
    assert_eq!(run(args(&["frobnicate"])), 2);
}

#[test]
fn report_is_valid_json_with_seeds() {
    let out = tmp("report.json");
    let code = run(args(&[
        "report", "--orbit", "1,0", "--orbit", "0,1", "--checks", "span,irreducibility,separation",
        "--seed", "7", "--out", out.to_str().unwrap(),
    ]));
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let certs = v["certificates"].as_array().unwrap();
    assert_eq!(certs.len(), 5);
    assert!(certs.iter().all(|c| c["seed"] == 7 && c["status"] == "PASS"));
    assert_eq!(v["summary"]["pass"], 5);
    assert_eq!(v["exit_code"], 0);
}

#[test]
fn report_csv_has_one_row_per_certificate() {
    let out = tmp("report.csv");
    let code = run(args(&[
        "report", "--orbit", "1,1", "--checks", "span", "--format", "csv", "--out", out.to_str().unwrap(),
    ]));
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "check,params,status,seed,runtime_ms");
    assert_eq!(lines.len(), 2);
    assert!(lines[1].starts_with("span,"));
    assert!(lines[1].contains(",PASS,"));
}

#[test]
fn matrices_dump_is_deterministic() {
    let a = tmp("m1.json");
    let b = tmp("m2.json");
    for p in [&a, &b] {
        assert_eq!(run(args(&["matrices", "--orbit", "1,0", "--out", p.to_str().unwrap()])), 0);
    }
    let ta = std::fs::read(&a).unwrap();
    assert_eq!(ta, std::fs::read(&b).unwrap());
    let v: serde_json::Value = serde_json::from_slice(&ta).unwrap();
    let m = v["orbits"][0]["monodromies"]
        .as_array()
        .unwrap()
        .iter()
        .find(|m| m["i"] == 2 && m["j"] == 11)
        .unwrap();
    assert_eq!(m["kind"], "Reflection");
    assert_eq!(
        m["matrix"],
        serde_json::json!([[["0/1", "0/1"], ["1/1", "0/1"]], [["1/1", "0/1"], ["0/1", "0/1"]]])
    );
}

#[test]
fn matrices_csv_rows_carry_coefficients() {
    let out = tmp("m.csv");
    assert_eq!(
        run(args(&["matrices", "--orbit", "1,2", "--format", "csv", "--out", out.to_str().unwrap()])),
        0
    );
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("orbit,matrix,row,col,coefficients"));
    let row = lines.next().unwrap();
    assert!(row.starts_with("\"1,2\",passing_1,0,0,"));
    // φ(3) = 2 coefficients per entry
    assert_eq!(row.rsplit(',').next().unwrap().split(';').count(), 2);
}
