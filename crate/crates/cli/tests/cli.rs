use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use nalgebra::DVector;
use parc_core::{BrasResult, ErrorProfile, TrajectoryPair};
use parc_models::{track_pwa_plan, turtlebot_system, AffineFit, TrackerGains, TURTLEBOT_DT, TURTLEBOT_THETA_POINTS};
use parc_polytope::HPolytope;
use parc_pwa::uniform_points;
use serde_json::{json, Value};
use tempfile::TempDir;

fn scenario() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios/turtlebot.json")
}

fn parc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_parc")).args(args).output().expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn compute(dir: &Path) -> PathBuf {
    let out = dir.join("result.json");
    let o = parc(&["compute", "--scenario", s(&scenario()), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    out
}

fn read<T: serde::de::DeserializeOwned>(p: &Path) -> T {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn write(p: &Path, v: &impl serde::Serialize) {
    std::fs::write(p, serde_json::to_string(v).unwrap()).unwrap();
}

#[test]
fn turtlebot_compute_is_nonempty_and_round_trips() {
    let dir = TempDir::new().unwrap();
    let out = compute(dir.path());
    let text = std::fs::read_to_string(&out).unwrap();
    let r: BrasResult = serde_json::from_str(&text).unwrap();
    assert!(!r.empty && !r.avoid.is_empty());
    assert_eq!(r.provenance.seed, Some(0));
    assert_eq!(serde_json::to_string_pretty(&r).unwrap() + "\n", text);
    let meta: Value = read(&dir.path().join("result.json.meta.json"));
    assert!(meta["wall_time_s"].as_f64().unwrap() >= 0.0);
}

#[test]
fn swallowed_goal_gives_flagged_empty_result() {
    let dir = TempDir::new().unwrap();
    let profile = ErrorProfile::zeros(2, 8, HPolytope::from_bounds(&[-9.0; 5], &[9.0; 5]).unwrap());
    let profile = ErrorProfile { e_tf: vec![1.5, 1.5], ..profile };
    let pp = dir.path().join("profile.json");
    write(&pp, &profile);
    let out = dir.path().join("r.json");
    let o = parc(&["compute", "--scenario", s(&scenario()), "--error-profile", s(&pp), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let r: BrasResult = read(&out);
    assert!(r.empty && r.avoid.is_empty());
}

#[test]
fn malformed_scenario_exits_with_parse_code() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"layout\": ").unwrap();
    let o = parc(&["compute", "--scenario", s(&bad), "--out", s(&dir.path().join("r.json"))]);
    assert_eq!(o.status.code(), Some(2));
    let o = parc(&["compute", "--scenario", s(&dir.path().join("missing.json")), "--out", "x.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_model_and_wrong_expert_exit_codes() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("r.json");
    let o = parc(&["compute", "--scenario", s(&scenario()), "--model", "car", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(2));
    // zero turn rate at the lowest speed falls short of the goal
    let o = parc(&["compute", "--scenario", s(&scenario()), "--expert-k", "0.5,0", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(3));
    let o = parc(&["compute", "--scenario", s(&scenario()), "--expert-budget", "0", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn sampled_plans_all_pass() {
    let dir = TempDir::new().unwrap();
    let result = compute(dir.path());
    let plans = dir.path().join("plans.json");
    let o = parc(&[
        "sample", "--scenario", s(&scenario()), "--result", s(&result), "--n", "100", "--seed", "0", "--out", s(&plans),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let file: Value = read(&plans);
    let list = file["plans"].as_array().unwrap();
    assert_eq!(list.len(), 100);
    assert!(list.iter().all(|p| p["passed"] == json!(true)));
    let o = parc(&["verify", "--scenario", s(&scenario()), "--plans", s(&plans)]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn zero_samples_write_an_empty_plan_file() {
    let dir = TempDir::new().unwrap();
    let result = compute(dir.path());
    let plans = dir.path().join("plans.json");
    let o = parc(&["sample", "--scenario", s(&scenario()), "--result", s(&result), "--n", "0", "--out", s(&plans)]);
    assert_eq!(o.status.code(), Some(0));
    let file: Value = read(&plans);
    assert!(file["plans"].as_array().unwrap().is_empty());
}

#[test]
fn removing_avoid_sets_is_caught() {
    let dir = TempDir::new().unwrap();
    let result = compute(dir.path());
    let mut r: BrasResult = read(&result);
    r.avoid.clear();
    let tampered = dir.path().join("tampered.json");
    write(&tampered, &r);
    let plans = dir.path().join("plans.json");
    let o = parc(&["sample", "--scenario", s(&scenario()), "--result", s(&tampered), "--n", "300", "--out", s(&plans)]);
    assert_eq!(o.status.code(), Some(6));
    let file: Value = read(&plans);
    assert!(file["plans"].as_array().unwrap().iter().any(|p| p["passed"] == json!(false)));
}

/// Planning rows `p(t) = p0 + t (M k + c)` for the TurtleBot layout.
fn affine_trajectories(ks: &[[f64; 2]]) -> Vec<Value> {
    let m = [[1.0, -0.5], [0.25, 2.0], [0.0, 1.0]];
    let c = [0.1, -0.2, 0.3];
    ks.iter()
        .map(|k| {
            let t: Vec<f64> = (0..=8).map(|i| i as f64 * 0.5).collect();
            let states: Vec<Vec<f64>> = t
                .iter()
                .map(|&t| (0..3).map(|i| -1.0 + t * (m[i][0] * k[0] + m[i][1] * k[1] + c[i])).collect())
                .collect();
            json!({ "k": k, "t": t, "states": states })
        })
        .collect()
}

#[test]
fn fit_recovers_synthetic_affine_data() {
    let dir = TempDir::new().unwrap();
    let data = dir.path().join("data.json");
    write(&data, &affine_trajectories(&[[0.5, -1.0], [1.0, 0.0], [2.0, 1.0], [1.5, -0.5], [0.7, 0.3]]));
    let out = dir.path().join("fit.json");
    let o = parc(&["fit", "--scenario", s(&scenario()), "--data", s(&data), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let fit: AffineFit = read(&out);
    assert_eq!(fit.steps.len(), 8);
    for step in &fit.steps {
        let want = [([0.5, -0.25], 0.05), ([0.125, 1.0], -0.1), ([0.0, 0.5], 0.15)];
        for (f, (c, d)) in step.iter().zip(want) {
            assert!((f.coeffs[0] - c[0]).abs() < 1e-8 && (f.coeffs[1] - c[1]).abs() < 1e-8);
            assert!((f.offset - d).abs() < 1e-8);
        }
    }
    // the fitted model drives compute like a named model
    let model = format!("affine-fit:{}", s(&out));
    let r = dir.path().join("r.json");
    let o = parc(&["compute", "--scenario", s(&scenario()), "--model", &model, "--expert-k", "1.25,0", "--out", s(&r)]);
    assert!(matches!(o.status.code(), Some(0) | Some(3)), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn fit_rejects_misaligned_and_degenerate_data() {
    let dir = TempDir::new().unwrap();
    let mut data = affine_trajectories(&[[0.5, -1.0], [1.0, 0.0], [2.0, 1.0], [1.5, -0.5]]);
    data[2]["t"][3] = json!(1.6);
    let p = dir.path().join("data.json");
    write(&p, &data);
    let out = dir.path().join("fit.json");
    let o = parc(&["fit", "--scenario", s(&scenario()), "--data", s(&p), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(2));
    write(&p, &affine_trajectories(&[[1.0, 0.0], [1.0, 0.0], [1.0, 0.0], [1.0, 0.0]]));
    let o = parc(&["fit", "--scenario", s(&scenario()), "--data", s(&p), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(7));
}

fn tracked_pairs(n: usize) -> Vec<TrajectoryPair> {
    let sys = turtlebot_system(TURTLEBOT_DT, TURTLEBOT_THETA_POINTS).unwrap();
    let lo = [-4.2, -0.2, 0.5, -1.0, 0.53];
    let hi = [-3.8, 0.2, 2.0, 1.0, 0.73];
    uniform_points(&lo, &hi, n, 7)
        .iter()
        .filter_map(|x| track_pwa_plan(&sys, &DVector::from(x.clone()), TrackerGains::default(), 1.0, 0.05).ok())
        .collect()
}

#[test]
fn error_envelopes_are_nonnegative() {
    let dir = TempDir::new().unwrap();
    let pairs = dir.path().join("pairs.json");
    write(&pairs, &tracked_pairs(40));
    let out = dir.path().join("profile.json");
    let o = parc(&["error", "--scenario", s(&scenario()), "--pairs", s(&pairs), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let profile: ErrorProfile = read(&out);
    assert_eq!(profile.e_int.len(), 8);
    assert!(profile.e_tf.iter().chain(profile.e_int.iter().flatten()).all(|&e| e >= 0.0));
    assert!(profile.e_tf.iter().any(|&e| e > 0.0));
}

#[test]
fn error_rejects_mismatched_time_grids() {
    let dir = TempDir::new().unwrap();
    let mut pairs = tracked_pairs(5);
    // move the sample at the first grid time off the grid
    pairs[1].t[10] += 0.01;
    let p = dir.path().join("pairs.json");
    write(&p, &pairs);
    let o = parc(&["error", "--scenario", s(&scenario()), "--pairs", s(&p), "--out", s(&dir.path().join("e.json"))]);
    assert_eq!(o.status.code(), Some(2));
}

fn read_ring(p: &Path) -> Vec<[f64; 2]> {
    let mut r = csv::Reader::from_path(p).unwrap();
    assert_eq!(r.headers().unwrap(), vec!["x", "y"]);
    r.records()
        .map(|row| {
            let row = row.unwrap();
            [row[0].parse().unwrap(), row[1].parse().unwrap()]
        })
        .collect()
}

#[test]
fn plotdata_rings_are_closed_and_inside_the_projection() {
    let dir = TempDir::new().unwrap();
    let result = compute(dir.path());
    let plots = dir.path().join("plots");
    let o = parc(&["plotdata", "--result", s(&result), "--dims", "0,1", "--out", s(&plots)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r: BrasResult = read(&result);
    let ring = read_ring(&plots.join("reach.csv"));
    assert!(ring.len() >= 4);
    assert_eq!(ring.first(), ring.last());
    // each vertex lifts to a point of the reach set: check by LP feasibility
    for v in &ring {
        let fixed = HPolytope::from_bounds(&[v[0] - 1e-6, v[1] - 1e-6, -1e3, -1e3, -1e3], &[v[0] + 1e-6, v[1] + 1e-6, 1e3, 1e3, 1e3]).unwrap();
        assert!(!r.reach.intersect(&fixed).unwrap().is_empty().unwrap());
    }
    // counterclockwise orientation gives a positive signed area
    let area: f64 = ring.windows(2).map(|w| w[0][0] * w[1][1] - w[1][0] * w[0][1]).sum();
    assert!(area > 0.0);
    for a in &r.avoid {
        assert!(plots.join(format!("avoid_{}_{}.csv", a.obstacle, a.t)).exists());
    }
}

#[test]
fn plotdata_writes_header_for_empty_sets_and_rejects_bad_dims() {
    let dir = TempDir::new().unwrap();
    let result = compute(dir.path());
    let mut r: BrasResult = read(&result);
    r.empty = true;
    r.reach = HPolytope::empty(5);
    let empty = dir.path().join("empty.json");
    write(&empty, &r);
    let plots = dir.path().join("plots");
    let o = parc(&["plotdata", "--result", s(&empty), "--out", s(&plots)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(plots.join("reach.csv")).unwrap(), "x,y\n");
    for dims in ["0,0", "0,5", "1"] {
        let o = parc(&["plotdata", "--result", s(&result), "--dims", dims, "--out", s(&plots)]);
        assert_eq!(o.status.code(), Some(2), "dims {dims}");
    }
}

#[test]
fn plotdata_writes_plan_trajectories() {
    let dir = TempDir::new().unwrap();
    let result = compute(dir.path());
    let plans = dir.path().join("plans.json");
    parc(&["sample", "--scenario", s(&scenario()), "--result", s(&result), "--n", "3", "--out", s(&plans)]);
    let plots = dir.path().join("plots");
    let o = parc(&["plotdata", "--result", s(&result), "--out", s(&plots), "--plans", s(&plans), "--scenario", s(&scenario())]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let mut rd = csv::Reader::from_path(plots.join("plan_2.csv")).unwrap();
    assert_eq!(rd.headers().unwrap(), vec!["t", "x", "y"]);
    assert_eq!(rd.records().count(), 8 * 50 + 1);
}

#[test]
fn outputs_do_not_depend_on_thread_count() {
    let dir = TempDir::new().unwrap();
    let mut files = Vec::new();
    for threads in ["1", "4"] {
        let out = dir.path().join(format!("r{threads}.json"));
        let o = parc(&["compute", "--scenario", s(&scenario()), "--threads", threads, "--skip-filter", "--out", s(&out)]);
        assert_eq!(o.status.code(), Some(0));
        let plans = dir.path().join(format!("p{threads}.json"));
        let o = parc(&["sample", "--scenario", s(&scenario()), "--result", s(&out), "--n", "20", "--threads", threads, "--out", s(&plans)]);
        assert_eq!(o.status.code(), Some(0));
        files.push((std::fs::read(out).unwrap(), std::fs::read(plans).unwrap()));
    }
    assert!(files[0] == files[1]);
}
