use std::path::Path;
use std::process::{Command, Output};
use std::sync::Arc;

use slicenorm::geometry::SampledFunction;
use slicenorm::io::{read_slice, write_sampled, Provenance};
use slicenorm::testfns::RandomPolynomial;
use slicenorm::{GridSpec, ImaginaryUnit, Quaternion};

const SMALL: &[&str] = &["--n-polar", "8", "--n-azimuth", "16", "--nt", "32"];

fn slicenorm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slicenorm")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn small_grid() -> Arc<slicenorm::BoundaryGrid> {
    Arc::new(GridSpec::new(8, 16, 32).build().unwrap())
}

fn write_input(dir: &Path, name: &str, phi: &SampledFunction) -> String {
    let path = dir.join(name);
    write_sampled(&path, phi, &Provenance::with_seed(0)).unwrap();
    path.display().to_string()
}

fn field(line: &str, key: &str) -> f64 {
    line.strip_prefix(key).unwrap().trim().parse().unwrap()
}

fn summary_value(out: &str, key: &str) -> f64 {
    field(out.lines().find(|l| l.starts_with(key)).unwrap(), key)
}

#[test]
fn coarse_sphere_fails_verify_with_exit_one() {
    let mut args = vec!["verify", "--n-polar", "4", "--n-azimuth", "8", "--nt", "16", "--restarts", "1", "--iters", "2"];
    let table = slicenorm(&args);
    assert_eq!(table.status.code(), Some(1));
    let text = stdout(&table);
    let row = text.lines().find(|l| l.starts_with("sferica 4/3")).expect("sferica row");
    assert!(row.ends_with("FAIL"), "{row}");

    // the JSON report carries the same numbers
    args.push("--json");
    let json = slicenorm(&args);
    assert_eq!(json.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(v["all_pass"], false);
    assert_eq!(v["grid"]["n_polar"], 4);
    let checks = v["checks"].as_array().unwrap();
    let table_rows: Vec<&str> = text.lines().skip(2).take(checks.len()).collect();
    for (c, row) in checks.iter().zip(table_rows) {
        let name = c["name"].as_str().unwrap();
        assert!(row.starts_with(name), "{row} vs {name}");
        let computed = slicenorm::verify::sig9(c["computed"].as_f64().unwrap());
        assert!(row.contains(&computed), "{row} lacks {computed}");
    }
}

#[test]
fn unknown_tolerance_and_bad_flags_are_usage_errors() {
    assert_eq!(slicenorm(&["verify", "--tol", "bogus=1"]).status.code(), Some(2));
    assert_eq!(slicenorm(&["verify", "--n-polar", "0"]).status.code(), Some(2));
    assert_eq!(slicenorm(&["norm"]).status.code(), Some(2));
    assert_eq!(slicenorm(&["norm", "inf", "search"]).status.code(), Some(2));
    assert_eq!(slicenorm(&["--help"]).status.code(), Some(0));
}

#[test]
fn norm_commands() {
    let inf = slicenorm(&["norm", "inf", "bound"]);
    assert_eq!(inf.status.code(), Some(0));
    assert_eq!(summary_value(&stdout(&inf), "upper bound"), 1.33333333);

    let four = slicenorm(&["norm", "4", "bound"]);
    assert_eq!(summary_value(&stdout(&four), "upper bound"), 1.36346324);

    let mut args = vec!["norm", "2", "search", "--restarts", "1", "--iters", "3"];
    args.extend(SMALL);
    let two = slicenorm(&args);
    assert_eq!(two.status.code(), Some(0));
    assert!((summary_value(&stdout(&two), "lower bound") - 1.0).abs() <= 1e-6);
}

#[test]
fn norm_search_writes_report_and_witness_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("p3.json");
    let report_s = report.display().to_string();
    let mut args = vec!["norm", "3", "search", "--restarts", "1", "--iters", "3", "--seed", "5", "-o", &report_s];
    args.extend(SMALL);
    assert_eq!(slicenorm(&args).status.code(), Some(0));
    let first = std::fs::read(&report).unwrap();
    let witness = std::fs::read(dir.path().join("p3.witness.csv")).unwrap();
    assert_eq!(slicenorm(&args).status.code(), Some(0));
    assert_eq!(std::fs::read(&report).unwrap(), first);
    assert_eq!(std::fs::read(dir.path().join("p3.witness.csv")).unwrap(), witness);

    let v: serde_json::Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(v["seed"], 5);
    assert_eq!(v["grid"]["n_t"], 32);
    assert!(v["version"].is_string());
    assert!(v["witness_file"].as_str().unwrap().ends_with("p3.witness.csv"));
    let lb = v["lower_bound"].as_f64().unwrap();
    let witness = slicenorm::io::read_sampled(&dir.path().join("p3.witness.csv")).unwrap();
    assert!((slicenorm::norm::ratio(&witness, 3.0).unwrap() - lb).abs() <= 1e-12);
}

#[test]
fn project_constant_is_unchanged() {
    let dir = tempfile::tempdir().unwrap();
    let c = Quaternion::new(0.5, -1.0, 2.0, 0.25);
    let phi = SampledFunction::sample(small_grid(), &|_: &ImaginaryUnit, _: f64| c);
    let input = write_input(dir.path(), "const.csv", &phi);
    let out = dir.path().join("const.slice.csv");
    let o = slicenorm(&["project", &input, "--route", "fourier", "-o", &out.display().to_string()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let f = read_slice(&out).unwrap();
    for k in 0..f.n_t() {
        assert!((f.a()[k] - c).norm() < 1e-14);
        assert!(f.b()[k].norm() < 1e-14);
    }
}

#[test]
fn project_first_coordinate_times_sine() {
    // φ(e^{Jt}) = J_1 sin t projects to -(1/3) I i sin t
    let dir = tempfile::tempdir().unwrap();
    let grid = small_grid();
    let phi = SampledFunction::sample(grid.clone(), &|j: &ImaginaryUnit, t: f64| Quaternion::real(j.x() * t.sin()));
    let input = write_input(dir.path(), "sine.json", &phi);
    for route in ["fourier", "boundary"] {
        let out = dir.path().join(format!("sine.{route}.json"));
        let o = slicenorm(&["project", &input, "--route", route, "-o", &out.display().to_string()]);
        assert_eq!(o.status.code(), Some(0));
        let f = read_slice(&out).unwrap();
        for k in 0..f.n_t() {
            let t = grid.circle().node(k);
            assert!(f.a()[k].norm() < 1e-13);
            assert!((f.b()[k] - Quaternion::I * (-t.sin() / 3.0)).norm() < 1e-13, "{route} at {k}");
        }
    }
}

#[test]
fn routes_agree_and_output_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let phi = RandomPolynomial::new(3, 11).sample(small_grid());
    let input = write_input(dir.path(), "poly.csv", &phi);
    let run = |route: &str, name: &str| {
        let out = dir.path().join(name);
        let o = slicenorm(&["project", &input, "--route", route, "-o", &out.display().to_string()]);
        assert_eq!(o.status.code(), Some(0));
        (out, stdout(&o))
    };
    let (fourier, _) = run("fourier", "f.csv");
    let (boundary, summary) = run("boundary", "b.csv");
    let (again, _) = run("boundary", "b2.csv");
    assert_eq!(std::fs::read(&boundary).unwrap(), std::fs::read(&again).unwrap());
    let text = std::fs::read_to_string(&boundary).unwrap();
    assert!(text.contains("# seed: 0") && text.contains(r#"# grid: {"n_polar":8,"n_azimuth":16,"n_t":32"#) && text.contains("# slicenorm "));

    let (f, b) = (read_slice(&fourier).unwrap(), read_slice(&boundary).unwrap());
    let scale = phi.max_abs();
    for k in 0..f.n_t() {
        assert!((f.a()[k] - b.a()[k]).norm() <= 1e-10 * scale);
        assert!((f.b()[k] - b.b()[k]).norm() <= 1e-10 * scale);
    }
    assert!(summary_value(&summary, "slice defect after") < 1e-11);
    assert!(summary_value(&summary, "L2 norm output") <= summary_value(&summary, "L2 norm input"));
}

#[test]
fn project_interior_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let phi = RandomPolynomial::new(2, 4).sample(small_grid());
    let input = write_input(dir.path(), "poly.csv", &phi);
    let out = dir.path().join("int.csv");
    let o = slicenorm(&["project", &input, "--route", "interior", "--r", "0.5", "-o", &out.display().to_string()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let f = read_slice(&out).unwrap();
    let t = phi.grid().circle().node(3);
    let want = slicenorm::projection::project_interior(&phi, 0.5, &ImaginaryUnit::J, t).unwrap();
    assert!((f.a()[3] + ImaginaryUnit::J.as_quaternion() * f.b()[3] - want).norm() < 1e-12);

    assert_eq!(slicenorm(&["project", &input, "--route", "interior"]).status.code(), Some(2));
    assert_eq!(slicenorm(&["project", &input, "--route", "interior", "--r", "1.5"]).status.code(), Some(2));
}

#[test]
fn ill_defined_input_is_refused_unless_forced() {
    let dir = tempfile::tempdir().unwrap();
    let phi = SampledFunction::sample(small_grid(), &|j: &ImaginaryUnit, _: f64| j.as_quaternion());
    let input = write_input(dir.path(), "axis.csv", &phi);
    let out = dir.path().join("axis.out.csv").display().to_string();
    let refused = slicenorm(&["project", &input, "-o", &out]);
    assert_eq!(refused.status.code(), Some(1));
    let msg = String::from_utf8(refused.stderr).unwrap();
    assert!(msg.contains("defect 2.000e0") && msg.contains("paired with"), "{msg}");
    assert!(!Path::new(&out).exists());

    let forced = slicenorm(&["project", &input, "-o", &out, "--force"]);
    assert_eq!(forced.status.code(), Some(0));
    assert_eq!(summary_value(&stdout(&forced), "well-definedness defect"), 2.0);
}

#[test]
fn kernel_eval_matches_library() {
    let o = slicenorm(&["kernel-eval", "0.9", "i", "0.4", "0,1,1", "-2"]);
    assert_eq!(o.status.code(), Some(0));
    let j: ImaginaryUnit = "0,1,1".parse().unwrap();
    let k = slicenorm::projection::slice_kernel(0.9, &ImaginaryUnit::I, 0.4, &j, -2.0).unwrap();
    let printed: Vec<f64> = stdout(&o).split_whitespace().map(|s| s.parse().unwrap()).collect();
    for (p, want) in printed.iter().zip(k.components()) {
        assert!((p - want).abs() <= 1e-8 * want.abs().max(1.0));
    }
    let json = slicenorm(&["kernel-eval", "0.9", "i", "0.4", "0,1,1", "-2", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(v["value"][0].as_f64().unwrap(), k.w);
}
