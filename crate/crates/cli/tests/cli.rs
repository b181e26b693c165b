use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_corrdyn");

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn scripts_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scripts")
}

fn corrdyn(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("CORRDYN_SEED")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = corrdyn(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON report")
}

/// Runs a script with the built binary; returns its stdout as JSON lines.
fn script(name: &str, out_file: &Path) -> Vec<Value> {
    let out = Command::new("bash")
        .arg(scripts_dir().join(name))
        .env("CORRDYN", BIN)
        .env("OUT", out_file)
        .env_remove("CORRDYN_SEED")
        .output()
        .expect("bash runs");
    assert!(
        out.status.success(),
        "{name}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .filter(|l| l.starts_with('{'))
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn circle_relation_script() {
    let reports = script("circle_relation.sh", Path::new("/dev/null"));
    assert_eq!(reports.len(), 3);
    assert_eq!(reports[0]["result"]["invariant"], true);
    assert_eq!(reports[1]["result"]["total_weight"], 4);
    let fock = &reports[2]["result"];
    assert_eq!(fock["dims"], serde_json::json!([3, 4, 6, 8]));
    assert_eq!(fock["relation"]["exact"], true);
    assert_eq!(fock["vanishing"]["all_zero"], true);
    assert!(!fock["vanishing"]["checks"].as_array().unwrap().is_empty());
}

#[test]
fn monomial_circle_script() {
    let r = script("monomial_circle.sh", Path::new("/dev/null"));
    assert_eq!(r.len(), 6);
    assert_eq!(r[0]["result"]["expansive"], false);
    assert_eq!(r[0]["result"]["concurrence"], true);
    assert_eq!(r[1]["result"]["expansive"], true);
    assert_eq!(r[1]["result"]["concurrence"], true);
    assert_eq!(r[2]["result"]["free"], true);
    assert_eq!(r[2]["result"]["gp"]["finite"], true);
    assert_eq!(r[3]["result"]["free"], false);
    assert_eq!(r[3]["result"]["gp"]["finite"], false);
    assert_eq!(r[4]["result"]["k0"]["group"], "Z/2");
    assert_eq!(r[4]["result"]["k1"]["group"], "0");
    for s in r[5]["result"]["samples"].as_array().unwrap() {
        let v = &s["value"];
        assert!((v[0].as_f64().unwrap() - 3.0).abs() < 1e-9);
        assert!(v[1].as_f64().unwrap().abs() < 1e-9);
    }
}

#[test]
fn product_family_script() {
    let r = script("product_family.sh", Path::new("/dev/null"));
    assert_eq!(r[0]["result"]["cardinalities"]["B"], 3);
    assert_eq!(r[1]["result"]["k0"]["group"], "Z^3");
    assert_eq!(r[1]["result"]["k1"]["group"], "0");
    assert_eq!(r[2]["result"]["k1"]["group"], "Z/2");
}

#[test]
fn kgroup_table_script_matches_closed_forms() {
    let out = Command::new("bash")
        .arg(scripts_dir().join("kgroup_table.sh"))
        .env("CORRDYN", BIN)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("m,n,k0,k1"));
    let group = |rank: usize, t: usize| match (rank, t) {
        (0, t) if t <= 1 => "0".to_string(),
        (0, t) => format!("Z/{t}"),
        (r, t) => {
            let free = if r == 1 {
                "Z".to_string()
            } else {
                format!("Z^{r}")
            };
            if t <= 1 {
                free
            } else {
                format!("{free} (+) Z/{t}")
            }
        }
    };
    let mut count = 0;
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        let (m, n): (usize, usize) = (f[0].parse().unwrap(), f[1].parse().unwrap());
        let (k0, k1) = match (m, n) {
            (1, 1) => (group(2, 0), group(2, 0)),
            (_, 1) => (group(1, m - 1), group(1, 0)),
            (1, _) => (group(1, 0), group(1, n - 1)),
            _ => (group(0, m - 1), group(0, n - 1)),
        };
        assert_eq!((f[2], f[3]), (k0.as_str(), k1.as_str()), "({m}, {n})");
        count += 1;
    }
    assert_eq!(count, 36);
}

#[test]
fn render_script_writes_csv_and_ppm() {
    let dir = std::env::temp_dir().join(format!("corrdyn-render-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let ppm = dir.join("out.ppm");
    let reports = script("render.sh", &ppm);
    assert_eq!(reports.len(), 1);
    assert_eq!(reports[0]["result"]["format"], "ppm");
    let img = std::fs::read(&ppm).unwrap();
    assert!(img.starts_with(b"P6\n400 400\n255\n"));
    assert_eq!(img.len(), b"P6\n400 400\n255\n".len() + 3 * 400 * 400);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn output_is_byte_identical_across_runs() {
    let spec = fixture("circle_relation.json");
    let args = [
        "render",
        "--spec",
        &spec,
        "--iters",
        "500",
        "--seed",
        "3",
        "--workers",
        "3",
        "--out",
        "csv",
    ];
    let (a, b) = (corrdyn(&args), corrdyn(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let header = String::from_utf8_lossy(&a.stdout);
    assert!(header.starts_with("re,im,chart\n"));
    assert_eq!(header.lines().count(), 501);
    let args = ["branch", "--spec", &spec];
    assert_eq!(corrdyn(&args).stdout, corrdyn(&args).stdout);
}

#[test]
fn seed_env_var_overrides_the_flag() {
    let spec = fixture("circle_relation.json");
    let run = |seed: &str, env: Option<&str>| {
        let mut c = Command::new(BIN);
        c.args(["render", "--spec", &spec, "--iters", "50", "--seed", seed]);
        match env {
            Some(v) => c.env("CORRDYN_SEED", v),
            None => c.env_remove("CORRDYN_SEED"),
        };
        c.output().unwrap().stdout
    };
    assert_eq!(run("1", Some("9")), run("9", None));
    assert_ne!(run("1", None), run("9", None));
}

#[test]
fn timing_is_opt_in() {
    let v = json(&[
        "--timing", "kgroups", "--family", "monomial", "--m", "2", "--n", "2",
    ]);
    assert!(v["wall_time_ms"].as_f64().unwrap() >= 0.0);
    let v = json(&["kgroups", "--family", "monomial", "--m", "2", "--n", "2"]);
    assert!(v.get("wall_time_ms").is_none());
}

#[test]
fn fibers_report_multiplicities() {
    let spec = fixture("square_map.json");
    let v = json(&[
        "fibers",
        "--spec",
        &spec,
        "--point",
        "0",
        "--direction",
        "backward",
    ]);
    let pts = v["result"]["backward"]["points"].as_array().unwrap();
    assert_eq!(pts.len(), 1);
    assert_eq!(pts[0]["multiplicity"], 2);
    let v = json(&[
        "fibers",
        "--spec",
        &spec,
        "--point",
        "inf",
        "--direction",
        "forward",
    ]);
    assert_eq!(v["result"]["forward"]["points"][0]["point"], "inf");
    let v = json(&["fibers", "--spec", &spec, "--point", "-4,0"]);
    assert_eq!(v["result"]["forward"]["total_multiplicity"], 1);
    assert_eq!(v["result"]["backward"]["total_multiplicity"], 2);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| corrdyn(args).status.code().unwrap();
    let spec = fixture("circle_relation.json");
    assert_eq!(
        code(&["kgroups", "--family", "monomial", "--m", "3", "--n", "2"]),
        0
    );
    assert_eq!(
        code(&["fibers", "--spec", "/does/not/exist.json", "--point", "0"]),
        2
    );
    assert_eq!(code(&["fibers", "--spec", &spec, "--point", "zero"]), 2);
    assert_eq!(code(&["expansive", "--spec", &spec]), 2);
    assert_eq!(
        code(&["kgroups", "--family", "relations", "--pairs", "2:3"]),
        2
    );
    assert_eq!(code(&["kgroups", "--table", "21", "2"]), 2);
    assert_eq!(
        code(&["free", "--family", "monomial", "--m", "2", "--n", "3", "--gp", "7"]),
        3
    );
    assert_eq!(
        code(&[
            "fock",
            "--spec",
            &spec,
            "--set",
            &fixture("circle_set.json"),
            "--k",
            "9"
        ]),
        3
    );
    assert_eq!(
        code(&["free", "--family", "product", "--exponents", "2,4"]),
        4
    );
    // clap usage errors
    assert_eq!(code(&["kgroups", "--bogus"]), 2);
}
