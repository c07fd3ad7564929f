use flagchow::cli::{run, suggestions};
use flagchow::report::Report;

fn flagchow(args: &str) -> (i32, String, String) {
    let argv = std::iter::once("flagchow").chain(args.split_whitespace()).map(Into::into);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &str) -> (i32, Report) {
    let (code, out, err) = flagchow(&format!("{args} --json"));
    assert!(err.is_empty(), "{err}");
    (code, Report::from_json(&out).unwrap())
}

fn column<'a>(r: &'a Report, table: &str, col: &str) -> Vec<&'a serde_json::Value> {
    let t = r.table(table).unwrap();
    let j = t.column(col).unwrap();
    t.rows.iter().map(|row| &row[j]).collect()
}

#[test]
fn chow_spin7_table() {
    let (code, r) = json("chow Spin_7 -p 2");
    assert_eq!(code, 0);
    let groups: Vec<_> = column(&r, "chow groups", "group").iter().map(|v| v.as_str().unwrap().to_string()).collect();
    assert_eq!(groups, ["Z", "Z/2", "Z"]);
    let degs: Vec<_> = column(&r, "chow groups", "deg").iter().map(|v| v.as_i64().unwrap()).collect();
    assert_eq!(degs, [0, 4, 6]);
    let chow_degs: Vec<_> = column(&r, "chow groups", "chow_deg").iter().map(|v| v.as_i64().unwrap()).collect();
    assert_eq!(chow_degs, [0, 2, 3]);
    assert_eq!(column(&r, "chow groups", "names")[1], &serde_json::json!(["c_2"]));
}

#[test]
fn poincare_e8_p5() {
    let (code, r) = json("poincare E8 -p 5");
    assert_eq!(code, 0);
    let degs: Vec<_> = column(&r, "poincare series", "deg").iter().map(|v| v.as_i64().unwrap()).collect();
    assert_eq!(degs, [0, 12, 24, 36, 48]);
    assert!(column(&r, "poincare series", "dim").iter().all(|v| v.as_i64() == Some(1)));
}

#[test]
fn validate_all_flags_known_lines_only() {
    let (code, r) = json("validate --all");
    assert_eq!(code, 0);
    let t = r.table("lines").unwrap();
    let (v, k) = (t.column("verdict").unwrap(), t.column("known").unwrap());
    let flagged: Vec<_> = t.rows.iter().filter(|row| row[v] == "inconsistent").collect();
    assert_eq!(flagged.len(), 2);
    assert!(flagged.iter().all(|row| row[k] == true));
}

#[test]
fn exit_codes() {
    assert_eq!(flagchow("validate").0, 2);
    assert_eq!(flagchow("frobnicate").0, 2);
    assert_eq!(flagchow("chow E8").0, 2);
    assert_eq!(flagchow("--help").0, 0);
    let (code, _, err) = flagchow("chow Spin7");
    assert_eq!(code, 2);
    assert!(err.contains("Spin_7"), "{err}");
    assert_eq!(flagchow("chow E7 -p 7").0, 2);
    assert_eq!(flagchow("verify-edge Spin_11 Spin_7 --labels y6").0, 1);
    assert_eq!(flagchow("verify-edge Spin_11 Spin_7").0, 0);
    assert_eq!(flagchow("ss-run Spin_9").0, 1);
    assert_eq!(flagchow("ss-run Spin_7 --s-max 8").0, 0);
    assert_eq!(flagchow("verify-restriction Spin_11 Spin_9").0, 2);
    assert_eq!(flagchow("ss-run E8 -p 3").0, 2);
    assert_eq!(flagchow("verify-edge E7 pt -p 3 --convention sideways").0, 2);
}

#[test]
fn exit_codes_are_deterministic() {
    for args in ["list", "chow Spin_11", "verify-restriction Spin_11 Spin_7", "ss-run Spin_11"] {
        assert_eq!(flagchow(args), flagchow(args), "{args}");
    }
}

#[test]
fn json_and_text_agree() {
    for args in [
        "list",
        "show E8 -p 3",
        "poincare E8 -p 2 -N 40",
        "chow Spin_11",
        "chow E8 -p 3",
        "verify-edge E8 E7 -p 3",
        "verify-restriction Spin_11 Spin_7",
        "validate Spin_11",
        "ss-run R_2(R)",
    ] {
        let (code, text, _) = flagchow(args);
        let (jcode, r) = json(args);
        assert_eq!(code, jcode, "{args}");
        assert_eq!(r.render(), text, "{args}");
        let again = Report::from_json(&r.to_json()).unwrap();
        assert_eq!(again, r);
    }
}

#[test]
fn degree_cap_truncates() {
    let (_, r) = json("chow Spin_11 -N 8");
    let degs: Vec<_> = column(&r, "chow groups", "deg").iter().map(|v| v.as_i64().unwrap()).collect();
    assert_eq!(degs, [0, 4, 6, 8]);
}

#[test]
fn spin_chain_edges_and_restrictions() {
    assert_eq!(flagchow("verify-edge Spin_21 Spin_19").0, 0);
    assert_eq!(flagchow("verify-edge Spin_17 Spin_15").0, 0);
    assert_eq!(flagchow("verify-edge E8 E7 -p 2").0, 0);
    assert_eq!(flagchow("verify-edge E8 R_4 -p 2").0, 0);
}

#[test]
fn ss_run_table() {
    let (code, r) = json("ss-run Spin_7");
    assert_eq!(code, 0);
    let e_inf: Vec<_> = column(&r, "total dimensions", "e_inf").iter().map(|v| v.as_u64().unwrap()).collect();
    assert_eq!(e_inf.len(), 24);
    assert!(e_inf.iter().enumerate().all(|(n, &d)| d == u64::from(n <= 6)));
}

#[test]
fn custom_catalog_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cat.txt");
    std::fs::write(&path, "[entry Spin_7 p=2]\ngen y6 deg=6 h=2\nres (2,v1)y6\nchow 4: free=1\n").unwrap();
    let (code, out, _) = flagchow(&format!("chow Spin_7 --catalog {}", path.display()));
    assert_eq!(code, 1, "{out}");
    std::fs::write(&path, "[entry Spin_7 p=2]\ngen y6 deg=6 h=2 h=3\n").unwrap();
    let (code, _, err) = flagchow(&format!("list --catalog {}", path.display()));
    assert_eq!(code, 2);
    assert!(err.contains("line 2"), "{err}");
    let (code, _, _) = flagchow(&format!("list --catalog {}", dir.path().join("missing").display()));
    assert_eq!(code, 2);
}

#[test]
fn report_verb_passes() {
    let (code, r) = json("report");
    assert_eq!(code, 0);
    assert_eq!(r.table("criteria").unwrap().rows.len(), 10);
}

#[test]
fn suggestions_prefer_close_names() {
    let names: Vec<String> = ["E7", "E8", "Spin_7", "R_4"].iter().map(|s| s.to_string()).collect();
    assert_eq!(suggestions("E9", &names), ["E7", "E8"]);
    assert_eq!(suggestions("zzzzzz", &names).len(), 3);
}
