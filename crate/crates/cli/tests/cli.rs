use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lindquant::cascade::{cascade_quantize, table_quantize_deg3};
use lindquant::classical::{catalog, CATALOG_NAMES};
use lindquant::{DensityMatrix, Lindbladian, SystemFile};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lindquant"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read<T: serde::de::DeserializeOwned>(p: &Path) -> T {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

struct Scratch {
    dir: TempDir,
}

impl Scratch {
    fn new() -> Self {
        Self {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn write(&self, name: &str, contents: &str) -> PathBuf {
        let p = self.path(name);
        std::fs::write(&p, contents).unwrap();
        p
    }
}

#[test]
fn catalog_list_and_show() {
    let o = run(&["catalog", "list"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), 10);

    let o = run(&["catalog", "list", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 10);

    let o = run(&["catalog", "show", "hopf", "--param", "mu=3"]);
    assert_eq!(code(&o), 0);
    let sys: SystemFile = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(sys.name.as_deref(), Some("hopf"));
    let expected = catalog("hopf", &[("mu".to_string(), 3.0)].into_iter().collect()).unwrap();
    assert_eq!(sys.system, expected.system);

    let o = run(&["catalog", "show", "lienard_cubic", "--lindblad"]);
    let l: Lindbladian = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(l.approx_eq(&expected_published("lienard_cubic"), 0.0));
    assert!(stderr(&o).contains("erratum"));

    assert_eq!(code(&run(&["catalog", "show", "nope"])), 3);
    assert_eq!(code(&run(&["catalog", "show", "hopf", "--param", "nu=1"])), 3);
}

fn expected_published(name: &str) -> Lindbladian {
    catalog(name, &Default::default()).unwrap().published.unwrap()
}

#[test]
fn quantize_matches_library_and_round_trips() {
    let s = Scratch::new();
    let out = s.path("hopf.json");
    let o = run(&["quantize", "--catalog", "hopf", "--out", path_str(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stderr(&o).contains("dissipators: 2"));
    let l: Lindbladian = read(&out);
    let h = catalog("hopf", &Default::default()).unwrap().system.to_complex();
    // Lossless: bit-identical to the in-process result.
    assert_eq!(l, table_quantize_deg3(&h).unwrap());
    assert!(l.approx_eq(&expected_published("hopf"), 1e-12));

    let out_c = s.path("hopf_cascade.json");
    run(&["quantize", "--catalog", "hopf", "--method", "cascade", "--out", path_str(&out_c)]);
    let lc: Lindbladian = read(&out_c);
    assert_eq!(lc, cascade_quantize(&h).unwrap());
    assert_eq!(code(&run(&["verify", "--lindblad", path_str(&out_c), "--catalog", "hopf"])), 0);
}

#[test]
fn every_catalog_system_round_trips_through_verify() {
    let s = Scratch::new();
    for name in CATALOG_NAMES {
        for method in ["table", "cascade"] {
            let out = s.path(&format!("{name}_{method}.json"));
            let o = run(&["quantize", "--catalog", name, "--method", method, "--out", path_str(&out)]);
            assert_eq!(code(&o), 0, "{name} {method}: {}", stderr(&o));
            let o = run(&["verify", "--lindblad", path_str(&out), "--catalog", name]);
            assert_eq!(code(&o), 0, "{name} {method}: {}", stdout(&o));
        }
        let golden = s.path(&format!("{name}_printed.json"));
        run(&["catalog", "show", name, "--lindblad", "--out", path_str(&golden)]);
        let o = run(&["verify", "--lindblad", path_str(&golden), "--catalog", name]);
        assert_eq!(code(&o), 0, "{name} printed: {}", stdout(&o));
    }
}

#[test]
fn random_systems_round_trip_through_verify() {
    let s = Scratch::new();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for case in 0..50 {
        let degree = rng.gen_range(0..=6u32);
        let mut rows = Vec::new();
        for n in 0..=degree {
            for j in 0..=n {
                rows.push((j, n - j, rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            }
        }
        let doc = serde_json::json!({ "form": "complex", "h": rows });
        let sys = s.write(&format!("sys{case}.json"), &doc.to_string());
        let out = s.path(&format!("l{case}.json"));
        let o = run(&["quantize", "--system", path_str(&sys), "--out", path_str(&out)]);
        assert_eq!(code(&o), 0, "case {case}: {}", stderr(&o));
        let expected = if degree <= 3 { "Table" } else { "Cascade" };
        assert!(stderr(&o).contains(expected), "case {case}: {}", stderr(&o));
        let o = run(&["verify", "--lindblad", path_str(&out), "--system", path_str(&sys)]);
        assert_eq!(code(&o), 0, "case {case}: {}", stdout(&o));
    }
}

#[test]
fn verification_failure_and_input_errors() {
    let s = Scratch::new();
    let golden = s.path("vdp.json");
    run(&["catalog", "show", "van_der_pol", "--param", "mu=0.5", "--lindblad", "--out", path_str(&golden)]);
    assert_eq!(code(&run(&["verify", "--lindblad", path_str(&golden), "--catalog", "van_der_pol"])), 0);

    let mut l: Lindbladian = read(&golden);
    l.dissipators[0].rate += 0.1;
    let bad = s.write("perturbed.json", &serde_json::to_string(&l).unwrap());
    let o = run(&["verify", "--lindblad", path_str(&bad), "--catalog", "van_der_pol"]);
    assert_eq!(code(&o), 1);
    let residual: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!(!residual.as_array().unwrap().is_empty());

    // Degree 4 through the table.
    let sys = s.write("quartic.json", r#"{"form":"complex","h":[[0,4,1.0,0.0]]}"#);
    assert_eq!(code(&run(&["quantize", "--system", path_str(&sys), "--method", "table"])), 3);
    assert_eq!(code(&run(&["quantize", "--system", path_str(&sys)])), 0);

    // Empty h gives an empty generator.
    let sys = s.write("empty.json", r#"{"form":"complex","h":[]}"#);
    let o = run(&["quantize", "--system", path_str(&sys)]);
    let l: Lindbladian = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(l.is_empty());

    let negative = s.write("neg.json", r#"{"hamiltonian":[],"dissipators":[{"rate":-1,"operator":[[0,1,1,0]]}]}"#);
    assert_eq!(code(&run(&["steady", "--lindblad", path_str(&negative), "--fock", "5"])), 3);
    assert_eq!(code(&run(&["verify", "--lindblad", "/nonexistent.json", "--catalog", "hopf"])), 3);
    assert_eq!(code(&run(&["steady", "--catalog", "hopf"])), 3);
    assert_eq!(code(&run(&["steady", "--catalog", "hopf", "--fock", "1"])), 3);
    assert_eq!(code(&run(&["wigner", "--catalog", "hopf", "--fock", "8", "--grid", "1:0:5"])), 3);
    assert_eq!(code(&run(&["stochastic", "--kappa", "0.1", "--dt", "-1"])), 3);
    assert_eq!(code(&run(&["stochastic", "--kappa", "-0.1", "--fock", "6", "--t-final", "0.01"])), 3);
    assert_eq!(code(&run(&["quantize", "--catalog", "hopf", "--system", "x.json"])), 3);
    assert_eq!(code(&run(&["frobnicate"])), 3);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn outputs_are_written_atomically() {
    let s = Scratch::new();
    let target = s.path("missing_dir/out.json");
    assert_eq!(code(&run(&["quantize", "--catalog", "hopf", "--out", path_str(&target)])), 3);
    assert!(!target.exists());

    // A failed run leaves an existing output untouched, and no temporaries behind.
    let out = s.write("keep.json", "previous");
    let o = run(&["quantize", "--catalog", "hopf", "--method", "table", "--param", "mu=x", "--out", path_str(&out)]);
    assert_eq!(code(&o), 3);
    assert_eq!(std::fs::read_to_string(&out).unwrap(), "previous");
    assert_eq!(std::fs::read_dir(s.dir.path()).unwrap().count(), 1);
}

#[test]
fn steady_state_dumps() {
    let s = Scratch::new();
    let damp = s.write("damp.json", r#"{"hamiltonian":[],"dissipators":[{"rate":2.0,"operator":[[0,1,1.0,0.0]]}]}"#);
    let out = s.path("vac.json");
    let o = run(&["steady", "--lindblad", path_str(&damp), "--fock", "6", "--out", path_str(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: serde_json::Value = read(&out);
    assert_eq!(v["dim"], 6);
    assert!(v["observables"]["n"].as_f64().unwrap().abs() < 1e-12);
    let rho: DensityMatrix = serde_json::from_value(v["state"].clone()).unwrap();
    assert!(rho.max_abs_diff(&DensityMatrix::vacuum(6)) < 1e-12);

    let amp = s.write("amp.json", r#"{"hamiltonian":[],"dissipators":[{"rate":2.0,"operator":[[1,0,1.0,0.0]]}]}"#);
    let o = run(&["steady", "--lindblad", path_str(&amp), "--auto-truncate", "--max-fock", "20"]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
    assert!(stderr(&o).contains("did not converge"));

    let o = run(&["steady", "--catalog", "hopf", "--auto-truncate", "--out", path_str(&out)]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = read(&out);
    assert_eq!(v["auto_truncated"], true);
}

#[test]
fn hopf_wigner_has_a_crater() {
    let s = Scratch::new();
    let state = s.path("hopf.json");
    assert_eq!(code(&run(&["steady", "--catalog", "hopf", "--fock", "30", "--out", path_str(&state)])), 0);
    let o = run(&["wigner", "--state", path_str(&state), "--grid", "-3:3:31", "--scale-unit"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 31 * 31);
    let max = rows.iter().map(|r| r[2].abs()).fold(0.0, f64::max);
    assert!((max - 1.0).abs() < 1e-12);
    let centre = rows.iter().find(|r| r[0] == 0.0 && r[1] == 0.0).unwrap()[2];
    assert!(centre < 0.5, "centre {centre}");

    // Same grid straight from the generator.
    let o2 = run(&["wigner", "--catalog", "hopf", "--fock", "30", "--grid", "-3:3:31", "--scale-unit"]);
    assert_eq!(stdout(&o), stdout(&o2));
}

#[test]
fn evolve_preserves_trace() {
    let o = run(&["evolve", "--catalog", "hopf", "--fock", "20", "--initial", "coherent:1,0.5", "--t-final", "1", "--samples", "11"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 11);
    assert_eq!(rows[10][0], 1.0);
    for r in &rows {
        assert!((r[1] - 1.0).abs() < 1e-9);
        assert!(r[5] > -1e-8);
    }
    let x0 = 2f64.sqrt();
    assert!((rows[0][2] - x0).abs() < 1e-6);
    assert_eq!(code(&run(&["evolve", "--catalog", "hopf", "--fock", "4", "--initial", "fock:9"])), 3);
}

#[test]
fn stochastic_runs_are_reproducible() {
    let s = Scratch::new();
    let args = |seed: &str, kappa: &str, out: &Path, spikes: &Path| {
        run(&[
            "stochastic", "--kappa", kappa, "--fock", "8", "--t-final", "0.5", "--seed", seed, "--out", path_str(out),
            "--spikes", path_str(spikes), "--grid", "-3:3:31",
        ])
    };
    let (a, b, c) = (s.path("a.csv"), s.path("b.csv"), s.path("c.csv"));
    let sp = s.path("spikes.csv");
    assert_eq!(code(&args("3", "0.3", &a, &sp)), 0);
    assert_eq!(code(&args("3", "0.3", &b, &sp)), 0);
    assert_eq!(code(&args("4", "0.3", &c, &sp)), 0);
    let (ta, tb) = (std::fs::read_to_string(&a).unwrap(), std::fs::read_to_string(&b).unwrap());
    assert_eq!(ta, tb);
    assert!(ta.starts_with("t,x_star,y_star\n"));
    assert_eq!(csv_rows(&ta).len(), 11);
    assert!(std::fs::read_to_string(&sp).unwrap().starts_with("index,t,interval\n"));

    // Without noise the steady state does not move.
    let o = args("3", "0", &a, &sp);
    assert_eq!(code(&o), 0);
    assert!(stderr(&o).contains("too few"));

    let o = run(&["stochastic", "--kappa", "0.3", "--fock", "6", "--t-final", "0.1", "--trajectories", "4", "--save-every", "20"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 6);
    assert_eq!(rows[0][2], 0.0);
    assert!(rows[5][2] > 0.0);
}

#[test]
fn scan_emits_one_row_per_kappa() {
    let o = run(&[
        "scan", "--kappa", "0.050,0.243,1.178", "--fock", "8", "--t-final", "0.5", "--grid", "-3:3:21",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("kappa,sigma_bar,inv_sigma_bar,n_spikes\n"));
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[1].starts_with("0.243,"));
    // Too short for three spikes: every row is flagged.
    assert_eq!(stderr(&o).matches("too few").count(), 3);
}

#[test]
fn user_system_is_accepted_by_noise_commands() {
    let s = Scratch::new();
    let l = expected_published("hopf");
    let p = s.write("hopf.json", &serde_json::to_string(&l).unwrap());
    let o = run(&["stochastic", "--lindblad", path_str(&p), "--kappa", "0.2", "--fock", "8", "--t-final", "0.1", "--grid", "-3:3:11"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
}
