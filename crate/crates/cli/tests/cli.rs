use std::path::PathBuf;
use std::process::{Command, Output};

use relhyp_core::graph::{cayley_ball, MetricGraph};
use relhyp_core::group::FreeGroup;
use serde_json::Value;

fn data(path: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(path).display().to_string()
}

fn relhyp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relhyp"))
        .args(args)
        .env_remove("RELHYP_THREADS")
        .output()
        .expect("run relhyp")
}

fn report(args: &[&str]) -> Value {
    let out = relhyp(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn ball_of_free_group() {
    let r = report(&["ball", "--group", &data("groups/free2.json"), "--radius", "2"]);
    assert_eq!(r["result"]["vertices"], 17);
    assert_eq!(r["result"]["edges"], 16);
    assert_eq!(r["manifest"]["command"], "ball");
    assert_eq!(r["manifest"]["seed"], 0);
    assert_eq!(r["manifest"]["inputs"]["group"].as_str().unwrap().len(), 64);
}

#[test]
fn delta_of_a_tree() {
    let r = report(&["delta", "--graph", &data("graphs/tree.json"), "--mode", "exhaustive"]);
    assert_eq!(r["result"]["delta"], 0);
    assert_eq!(r["result"]["measure"], "slim");
}

#[test]
fn tc_on_a5() {
    let r = report(&["tc", "--presentation", &data("groups/a5.json"), "--max-cosets", "200"]);
    assert_eq!(r["result"]["cosets"], 60);
    assert_eq!(r["result"]["status"], "complete");
}

#[test]
fn tc_out_of_budget_exits_3_with_a_report() {
    let out = relhyp(&["tc", "--presentation", &data("groups/a5.json"), "--max-cosets", "10"]);
    assert_eq!(out.status.code(), Some(3));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["result"]["status"], "budget_exhausted");
}

#[test]
fn usage_and_input_errors_exit_2() {
    assert_eq!(relhyp(&["ball", "--no-such-flag"]).status.code(), Some(2));
    assert_eq!(relhyp(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(relhyp(&["ball", "--group", "/nonexistent.json", "--radius", "1"]).status.code(), Some(2));
    // no peripheral in the file and none on the command line
    let out = relhyp(&["coneoff", "--group", &data("groups/free2.json"), "--radius", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = relhyp(&["cog", "validate", "--cog", &data("cog/twisted_triangle.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("composition"));
}

#[test]
fn budget_errors_exit_3() {
    let out = relhyp(&["ball", "--group", &data("groups/free2.json"), "--radius", "6", "--max-vertices", "100"]);
    assert_eq!(out.status.code(), Some(3));
    let out = relhyp(&["delta", "--group", &data("groups/free2.json"), "--radius", "5", "--exhaustive-bound", "50"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn dot_round_trips_through_json() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("ball.dot");
    let out = relhyp(&["ball", "--group", &data("groups/free2.json"), "--radius", "3", "--dot", dot.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let g = MetricGraph::from_dot(&std::fs::read_to_string(&dot).unwrap()).unwrap();
    let want = cayley_ball(&FreeGroup::new(2), 3, 1000).unwrap().graph;
    assert_eq!(g.to_json(), want.to_json());
}

#[test]
fn out_flag_writes_the_same_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let args = ["cog", "develop", "--cog", &data("cog/dinfty.json"), "--radius", "4"];
    let stdout = relhyp(&args).stdout;
    let mut with_out = args.to_vec();
    let p = path.to_str().unwrap().to_string();
    with_out.extend(["--out", &p]);
    assert_eq!(relhyp(&with_out).status.code(), Some(0));
    assert_eq!(std::fs::read(&path).unwrap(), stdout);
}

#[test]
fn peripheral_flag_overrides_the_file() {
    let r = report(&["coneoff", "--group", &data("groups/free2.json"), "--radius", "2", "--peripheral", "1"]);
    assert_eq!(r["result"]["ball_vertices"], 17);
    assert_eq!(r["manifest"]["parameters"]["peripheral"], serde_json::json!([1]));
    let both = report(&["coneoff", "--group", &data("groups/free2.json"), "--radius", "2", "--peripheral", "1,2"]);
    assert_eq!(both["result"]["cones"], 1);
    assert_eq!(both["result"]["group_diameter"], 2);
}

#[test]
fn seed_changes_only_sampled_reports() {
    let args = |seed: &'static str| {
        vec!["delta", "--group", "", "--radius", "3", "--mode", "sampled", "--samples", "50", "--seed", seed]
    };
    let z2 = data("groups/z2.json");
    let run = |seed| {
        let mut a = args(seed);
        a[2] = &z2;
        report(&a)
    };
    let (a, b) = (run("1"), run("1"));
    assert_eq!(a, b);
    assert_eq!(a["manifest"]["seed"], 1);
    assert_eq!(a["result"]["mode"]["seed"], 1);
}

#[test]
fn thread_env_var_is_honoured() {
    let args = ["bcp", "--group", &data("groups/free2_a.json"), "--radius", "2"];
    let plain = relhyp(&args).stdout;
    let env = Command::new(env!("CARGO_BIN_EXE_relhyp")).args(args).env("RELHYP_THREADS", "3").output().unwrap();
    assert_eq!(env.status.code(), Some(0));
    assert_eq!(env.stdout, plain);
}

#[test]
fn cog_present_of_the_segment() {
    let r = report(&["cog", "present", "--cog", &data("cog/segment.json")]);
    assert_eq!(r["result"]["simplified"]["relators"], serde_json::json!(["aa", "bbb"]));
    assert!(r["result"]["free_product"].is_string());
    let bad = relhyp(&["cog", "present", "--cog", &data("cog/segment.json"), "--tree", "5"]);
    assert_eq!(bad.status.code(), Some(2));
}
