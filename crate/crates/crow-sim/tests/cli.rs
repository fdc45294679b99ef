use std::path::Path;
use std::process::{Command, Output};

fn crowsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crowsim"))
        .args(args)
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

const CONFIG: &str = r#"
[system]
kind = "crow"
omega0 = [3.8327430373795477, -0.0009688583247035]
beta1 = [0.00987, -0.0000197]

[state]
kind = "sts"
u = 0.5
n_th = 0.1

[time]
end = 5.0
points = 41
scaled = true

[output]
cavities = [0, 1, 2]
pairs = [[1, -1]]
"#;

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("exp.toml");
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn run_writes_series_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), CONFIG);
    let out_path = dir.path().join("out.csv");
    let out = crowsim(&["run", &config, "--out", out_path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(&out_path).unwrap();
    assert!(csv.contains("# created_unix: "));
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 42);
    assert!(dir.path().join("out_summary.csv").exists());
    assert!(!dir.path().join("out_lossless.csv").exists());
}

#[test]
fn flags_override_the_config() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), CONFIG);
    let out = crowsim(&[
        "run",
        &config,
        "--format",
        "json",
        "--lossless",
        "--mode",
        "envelope",
        "--no-timestamp",
    ]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let echo = &doc["metadata"]["config"]["output"];
    assert_eq!(echo["lossless"], true);
    assert_eq!(echo["mode"], "envelope");
    assert!(doc["metadata"].get("created_unix").is_none());
    assert_eq!(
        doc["metadata"]["units"]["scaled_time"],
        "t / tau, tau = 1 / Re(Omega0 beta1)"
    );
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), CONFIG);
    let outputs: Vec<Vec<u8>> = (0..2)
        .map(|i| {
            let path = dir.path().join(format!("run{i}.json"));
            let out = crowsim(&[
                "run",
                &config,
                "--format",
                "json",
                "--no-timestamp",
                "--out",
                path.to_str().unwrap(),
            ]);
            assert_eq!(code(&out), 0);
            std::fs::read(path).unwrap()
        })
        .collect();
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn echoed_config_reproduces_the_run() {
    let first = crowsim(&["preset", "fig5", "--format", "json", "--no-timestamp"]);
    assert_eq!(code(&first), 0);
    let doc: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
    let config: crow_sim::ExperimentConfig =
        serde_json::from_value(doc["metadata"]["config"].clone()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), &config.to_toml_string());
    let second = crowsim(&["run", &path, "--format", "json", "--no-timestamp"]);
    assert_eq!(code(&second), 0);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn sweep_writes_one_file_per_value() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("sweep");
    let out = crowsim(&[
        "sweep",
        "--preset",
        "fig2",
        "--param",
        "state.u",
        "--from",
        "0.5",
        "--to",
        "1.5",
        "--steps",
        "3",
        "--format",
        "json",
        "--no-timestamp",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let mut names: Vec<String> = std::fs::read_dir(&out_dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    assert_eq!(names, ["u_0.5.json", "u_1.5.json", "u_1.json"]);
    let doc: serde_json::Value =
        serde_json::from_slice(&std::fs::read(out_dir.join("u_1.5.json")).unwrap()).unwrap();
    assert_eq!(doc["metadata"]["config"]["state"]["u"], 1.5);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // Configuration errors.
    assert_eq!(code(&crowsim(&["preset", "nope"])), 1);
    assert_eq!(code(&crowsim(&["run"])), 1);
    let bad = write_config(dir.path(), &CONFIG.replace("points = 41", "points = 1"));
    assert_eq!(code(&crowsim(&["run", &bad])), 1);
    // Engine errors: a cavity with gain, and a Bessel argument out of range.
    let gain = write_config(dir.path(), &CONFIG.replace("-0.0009688583247035", "0.001"));
    assert_eq!(code(&crowsim(&["run", &gain])), 2);
    let long = write_config(dir.path(), &CONFIG.replace("end = 5.0", "end = 1.0e6"));
    let out = crowsim(&["run", &long]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("engine error"));
    // I/O errors.
    assert_eq!(
        code(&crowsim(&[
            "run",
            dir.path().join("missing.toml").to_str().unwrap()
        ])),
        3
    );
    let unwritable = dir.path().join("no/such/dir/out.csv");
    assert_eq!(
        code(&crowsim(&[
            "preset",
            "fig2",
            "--out",
            unwritable.to_str().unwrap()
        ])),
        3
    );
    let matrix = write_config(
        dir.path(),
        "[system]\nkind = \"general_matrix\"\nmatrix_file = \"absent.txt\"\n[state]\nkind = \"svs\"\nu = 1\n\
         [time]\nend = 1\npoints = 2\n[output]\nengine = \"mode_sum\"\n",
    );
    assert_eq!(code(&crowsim(&["run", &matrix])), 3);
    // Help is not an error.
    assert_eq!(code(&crowsim(&["--help"])), 0);
}
