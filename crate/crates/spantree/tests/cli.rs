use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spantree")).args(args).output().unwrap()
}

fn graph(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("graphs").join(name).to_str().unwrap().to_string()
}

struct Scratch(PathBuf);

impl Scratch {
    fn new(tag: &str) -> Scratch {
        let dir = std::env::temp_dir().join(format!("spantree-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Scratch(dir)
    }

    fn file(&self, name: &str, text: &str) -> String {
        let path = self.0.join(name);
        std::fs::write(&path, text).unwrap();
        path.to_str().unwrap().to_string()
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn exit_code_triple() {
    let tmp = Scratch::new("exit");
    let ok = bin(&["verify", &graph("three_cycle.graph")]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));
    assert!(stdout(&ok).contains("Phi = 1,"));

    let lift = tmp.0.join("k3.lift").to_str().unwrap().to_string();
    assert_eq!(bin(&["lift", &graph("k3.graph"), "--out", &lift]).status.code(), Some(0));
    let labels = format!("{lift}.labels");
    let text = std::fs::read_to_string(&labels).unwrap();
    std::fs::write(&labels, text.replacen("root 0", "root 2", 1)).unwrap();
    let bad = bin(&["check-lift", &graph("k3.graph"), &lift]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("violation"));

    let not_sc = tmp.file("path.graph", "graph 3\nedge 0 1 1\nedge 1 2 1\n");
    let input = bin(&["verify", &not_sc]);
    assert_eq!(input.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&input.stderr).contains("not strongly connected"));
}

#[test]
fn usage_and_syntax_errors_exit_2() {
    let tmp = Scratch::new("usage");
    assert_eq!(bin(&["verify"]).status.code(), Some(2));
    assert_eq!(bin(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(bin(&["verify", "/nonexistent/g.graph"]).status.code(), Some(2));
    let dup = tmp.file("dup.graph", "graph 2\nedge 0 1 1\nedge 0 1 2\nedge 1 0 1\n");
    let out = bin(&["verify", &dup]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    let k3 = graph("k3.graph");
    assert_eq!(bin(&["verify", &k3, "--checks", "phi,bogus"]).status.code(), Some(2));
    assert_eq!(bin(&["verify", &k3, "--lift-cap", "5"]).status.code(), Some(2));
}

#[test]
fn k3_report_values_and_determinism() {
    let k3 = graph("k3.graph");
    let a = bin(&["verify", &k3, "--seed", "11"]);
    let b = bin(&["verify", &k3, "--seed", "11"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.contains("Phi = 27, tau(G) = 9, tau(lift) = 243"), "{text}");
    assert!(text.contains("seed 11"));
}

#[test]
fn structured_report() {
    let out = bin(&["verify", &graph("two_cycle.graph"), "--format", "structured", "--checks", "phi,lift", "--timings"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["checks"].as_array().unwrap().len(), 2);
    assert_eq!(v["checks"][0]["name"], "lift");
    assert!(v["checks"][1]["millis"].is_u64());
    assert_eq!(v["summary"]["passed"], 2);
}

#[test]
fn enumerate_listings() {
    let k3 = graph("k3.graph");
    let trees = stdout(&bin(&["enumerate", &k3, "trees", "--root", "0"]));
    assert_eq!(
        trees,
        "root 0 tree 1>0,2>0 weight 1\nroot 0 tree 1>0,2>1 weight 1\nroot 0 tree 1>2,2>0 weight 1\n"
    );
    let forests = stdout(&bin(&["enumerate", &k3, "forests", "--roots", "0,1"]));
    assert_eq!(forests.lines().count(), 2);
    let subsets = stdout(&bin(&["enumerate", &graph("three_cycle.graph"), "subsets"]));
    assert_eq!(subsets, "{0,1,2} k 1 m' 1\n{0} k 1 m' 0\n{1} k 1 m' 0\n{2} k 1 m' 0\n");
    assert_eq!(bin(&["enumerate", &k3, "forests"]).status.code(), Some(2));
}

#[test]
fn lift_of_two_cycle_is_the_two_cycle() {
    let tmp = Scratch::new("lift");
    let out = tmp.0.join("two.lift").to_str().unwrap().to_string();
    assert_eq!(bin(&["lift", &graph("two_cycle.graph"), "--out", &out]).status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), "graph 2\nedge 0 1 1\nedge 1 0 1\n");
    assert_eq!(bin(&["check-lift", &graph("two_cycle.graph"), &out]).status.code(), Some(0));
}

#[test]
fn zeta_table_for_uniform_k3() {
    let tmp = Scratch::new("zeta");
    let uk3 = tmp.file(
        "uk3.graph",
        "graph 3\nedge 0 1 1/2\nedge 0 2 1/2\nedge 1 0 1/2\nedge 1 2 1/2\nedge 2 0 1/2\nedge 2 1 1/2\n",
    );
    let out = bin(&["zeta", &uk3, "--order", "3"]);
    assert_eq!(stdout(&out), "s^0 1\ns^1 0\ns^2 3/4\ns^3 1/4\n");
    let phi = stdout(&bin(&["phi", &uk3]));
    assert!(phi.contains("phi via lift 27/64"));
    let report = stdout(&bin(&["verify", &uk3]));
    assert!(report.contains("PASS r-at-one"), "{report}");
    assert!(report.contains("PASS stationarity"));
}

#[test]
fn symbolic_schrodinger_record() {
    let tmp = Scratch::new("schr");
    let g = tmp.file("two.graph", "graph 2\nedge 0 1 sym\nedge 1 0 sym\n");
    let out = stdout(&bin(&["schrodinger", &g]));
    assert_eq!(
        out,
        "det H_lift x_0_1*y_1 + x_1_0*y_0 + y_0*y_1\nfactor {0,1} ^ 1: x_0_1*y_1 + x_1_0*y_0 + y_0*y_1\nidentity holds\n"
    );
}
