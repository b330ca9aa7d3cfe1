use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn pentalab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pentalab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

const ONES: &str =
    r#"{"k":3,"n":5,"coords":"xy","x":["1","1","1","1","1"],"y":["1","1","1","1","1"]}"#;
// the S+ = -i configuration at site 2
const SPAIR: &str = r#"{"coords":"spair","n":3,"sminus":[0,{"re":0,"im":1},5],"s":[-1,0,1],"monodromy":[[1,0],[0,1]]}"#;

#[test]
fn all_ones_orbit_is_constant() {
    let dir = tempfile::tempdir().unwrap();
    let state = write(dir.path(), "ones.json", ONES);
    let o = pentalab(&[
        "iterate",
        "--state",
        state.to_str().unwrap(),
        "--steps",
        "10",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 11);
    for (t, r) in rows.iter().enumerate() {
        assert_eq!(*r, format!("{t},1,1,1,1,1,1,1,1,1,1"));
    }
}

#[test]
fn casimir_column_is_constant_off_level() {
    let dir = tempfile::tempdir().unwrap();
    let state = write(
        dir.path(),
        "pq.json",
        r#"{"k":3,"n":6,"coords":"pq","p":["2","1/3","5","-1/2","3/4","7"],"q":["1","2","-3","1/5","4","2/7"]}"#,
    );
    let out_path = dir.path().join("orbit.csv");
    let o = pentalab(&[
        "iterate",
        "--state",
        state.to_str().unwrap(),
        "--steps",
        "4",
        "--out",
        out_path.to_str().unwrap(),
        "--decimal",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = fs::read_to_string(out_path).unwrap();
    let header: Vec<&str> = text.lines().next().unwrap().split(',').collect();
    let col = header.iter().position(|h| *h == "casimir").unwrap();
    let values: Vec<String> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(col).unwrap().to_string())
        .collect();
    assert_eq!(values.len(), 5);
    assert!(
        values.iter().all(|v| *v == values[0] && v != "1"),
        "{values:?}"
    );
    assert!(header.contains(&"casimir~"));
}

#[test]
fn missing_file_names_the_path() {
    let o = pentalab(&["iterate", "--state", "/nonexistent/state.json"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("/nonexistent/state.json"));
}

#[test]
fn singular_orbit_exits_three_with_step() {
    let dir = tempfile::tempdir().unwrap();
    // sigma_2 = x_2 + y_2 = 0
    let state = write(
        dir.path(),
        "bad.json",
        r#"{"k":3,"n":5,"coords":"xy","x":["1","2","1","1","1"],"y":["1","-2","1","1","1"]}"#,
    );
    let o = pentalab(&[
        "iterate",
        "--state",
        state.to_str().unwrap(),
        "--steps",
        "3",
    ]);
    assert_eq!(code(&o), 3);
    let err = stderr(&o);
    assert!(err.contains("step 1") && err.contains("sigma_2"), "{err}");
}

#[test]
fn verify_integrals_passes() {
    let o = pentalab(&[
        "verify",
        "--suite",
        "integrals",
        "--k",
        "3",
        "--n",
        "7",
        "--trials",
        "20",
        "--seed",
        "42",
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS invariant-under-t"));
}

#[test]
fn verify_reports_stable_range() {
    let o = pentalab(&["verify", "--suite", "xy-bracket", "--k", "4", "--n", "6"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("outside stable range n ≥ 2k−1 = 7"));
}

#[test]
fn verify_unknown_suite() {
    let o = pentalab(&["verify", "--suite", "nonsense"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn injected_fault_fails_with_counterexample() {
    let o = pentalab(&[
        "verify",
        "--suite",
        "pq-bracket",
        "--k",
        "3",
        "--n",
        "5",
        "--trials",
        "2",
        "--inject-fault",
    ]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("counterexample (trial 0)"));
}

#[test]
fn verify_output_is_deterministic() {
    let args = [
        "verify", "--suite", "dynamics", "--k", "4", "--n", "9", "--trials", "8", "--seed", "3",
    ];
    assert_eq!(stdout(&pentalab(&args)), stdout(&pentalab(&args)));
}

#[test]
fn integrals_csv() {
    let dir = tempfile::tempdir().unwrap();
    let state = write(dir.path(), "ones.json", ONES);
    let o = pentalab(&["integrals", "--state", state.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("i,j,value"));
    assert_eq!(out.lines().count(), 1 + 4 * 6);
}

#[test]
fn render_pentagon_layers() {
    let dir = tempfile::tempdir().unwrap();
    let state = write(dir.path(), "ones.json", ONES);
    let svg = dir.path().join("p.svg");
    let o = pentalab(&[
        "render",
        "--state",
        state.to_str().unwrap(),
        "--backend",
        "float",
        "--steps",
        "2",
        "--out",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(
        fs::read_to_string(&svg)
            .unwrap()
            .matches("class=\"layer\"")
            .count(),
        3
    );
    let o = pentalab(&[
        "render",
        "--state",
        state.to_str().unwrap(),
        "--backend",
        "float",
        "--out",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        fs::read_to_string(&svg)
            .unwrap()
            .matches("class=\"layer\"")
            .count(),
        1
    );
}

#[test]
fn render_needs_an_embedding() {
    let dir = tempfile::tempdir().unwrap();
    let state = write(dir.path(), "ones.json", ONES);
    let o = pentalab(&["render", "--state", state.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
}

#[test]
fn circle_render_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let state = write(dir.path(), "sp.json", SPAIR);
    let (a, b) = (dir.path().join("a.svg"), dir.path().join("b.svg"));
    for p in [&a, &b] {
        let o = pentalab(&[
            "render",
            "--state",
            state.to_str().unwrap(),
            "--backend",
            "complex",
            "--site",
            "2",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
    }
    let svg = fs::read(&a).unwrap();
    assert_eq!(svg, fs::read(&b).unwrap());
    assert_eq!(
        String::from_utf8(svg)
            .unwrap()
            .matches("class=\"construction\"")
            .count(),
        4
    );
}

#[test]
fn leapfrog_orbit_reaches_minus_i() {
    let dir = tempfile::tempdir().unwrap();
    let state = write(dir.path(), "sp.json", SPAIR);
    let o = pentalab(&[
        "iterate",
        "--state",
        state.to_str().unwrap(),
        "--backend",
        "complex",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let row = stdout(&o).lines().nth(2).unwrap().to_string();
    assert_eq!(row.split(',').nth(2), Some("0.0-1.0i"));
}

#[test]
fn convert_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let state = write(
        dir.path(),
        "xy.json",
        r#"{"k":3,"n":5,"coords":"xy","x":["2","1/3","5","-1/2","3/4"],"y":["1","2","-3","1/5","4"]}"#,
    );
    let s = state.to_str().unwrap();
    for to in ["corner", "polygon", "plane"] {
        let mid = dir.path().join(format!("{to}.json"));
        let o = pentalab(&[
            "convert",
            "--state",
            s,
            "--to",
            to,
            "--out",
            mid.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0, "{to}: {}", stderr(&o));
        let back = pentalab(&["convert", "--state", mid.to_str().unwrap(), "--to", "xy"]);
        assert_eq!(code(&back), 0, "{to}: {}", stderr(&back));
        let doc: serde_json::Value = serde_json::from_str(&stdout(&back)).unwrap();
        assert_eq!(
            doc["x"],
            serde_json::json!(["2", "1/3", "5", "-1/2", "3/4"]),
            "{to}"
        );
        assert_eq!(
            doc["y"],
            serde_json::json!(["1", "2", "-3", "1/5", "4"]),
            "{to}"
        );
    }
}

#[test]
fn lattice_export() {
    let dir = tempfile::tempdir().unwrap();
    let state = write(
        dir.path(),
        "sp.json",
        r#"{"coords":"spair","n":5,"sminus":[0.1,1.3,2.2,3.4,4.1],"s":[0.6,1.9,2.4,3.1,4.7],"monodromy":[[1,0.7],[0.1,1.2]]}"#,
    );
    let o = pentalab(&["lattice", "--state", state.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("m,n,re,im"));
    assert_eq!(out.lines().count(), 1 + 36);
    let bad = pentalab(&["lattice", "--state", state.to_str().unwrap(), "--q", "-1"]);
    assert_eq!(code(&bad), 2);
}

#[test]
fn random_states_need_a_shape() {
    let o = pentalab(&["iterate", "--k", "3"]);
    assert_eq!(code(&o), 2);
    let o = pentalab(&[
        "iterate", "--k", "3", "--n", "6", "--steps", "2", "--seed", "11",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), 4);
}
