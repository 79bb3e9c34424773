//! Subcommand implementations.

use std::fmt::Write as _;

use anyhow::{bail, Context, Result};
use lindquant::cascade::{cascade_quantize, table_quantize_deg3, verify_ehrenfest};
use lindquant::classical::{catalog as lookup, catalog_names};
use lindquant::fock::{
    auto_truncate, evolve as run_evolve, expectation, momentum, position, steady_state, wigner as wigner_grid,
    EvolveOptions, TruncationOptions,
};
use lindquant::stochastic::{
    biased_initial_state, coherence_scan, detect_spikes, ensemble_expectation, mode_trajectory, scan_csv,
    DetectorConfig, NoisyGenerator, RunConfig, ScanConfig, SignalAxis, SpikeStatistics,
};
use lindquant::{Complex64, DensityMatrix, Error, Lindbladian, NormalOrderedPolynomial};
use serde::Serialize;

use crate::io::{initial_state, load_lindbladian, load_state, load_system, read_json, to_json, write_output};
use crate::{
    Axis, CatalogCommand, EvolveArgs, GeneratorSource, Method, NoiseArgs, QuantizeArgs, ScanArgs, SteadyArgs,
    StochasticArgs, Truncation, VerifyArgs, WignerArgs,
};

/// Drift residual above tolerance.
#[derive(Debug)]
pub struct VerificationFailed(pub String);

impl std::fmt::Display for VerificationFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for VerificationFailed {}

/// 1 for verification failures, 2 for numerical failures, 3 for everything else.
pub fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if cause.is::<VerificationFailed>() {
            return 1;
        }
        if let Some(err) = cause.downcast_ref::<Error>() {
            return match err {
                Error::DegenerateSteadyState(_)
                | Error::TruncationDivergence { .. }
                | Error::StepUnderflow { .. }
                | Error::Unstable { .. }
                | Error::TooFewSpikes(_) => 2,
                _ => 3,
            };
        }
    }
    3
}

fn generator(src: &GeneratorSource) -> Result<Lindbladian> {
    load_lindbladian(src.lindblad.as_deref(), src.catalog.as_deref(), &src.params)
}

fn check_dim(n: usize) -> Result<()> {
    if n < 2 {
        bail!("Fock dimension must be at least 2, got {n}");
    }
    Ok(())
}

fn check_truncation(t: &Truncation) -> Result<()> {
    match (t.fock, t.auto_truncate) {
        (Some(n), _) => check_dim(n),
        (None, true) if t.max_fock < 8 => bail!("--max-fock must be at least 8, got {}", t.max_fock),
        (None, true) => Ok(()),
        (None, false) => bail!("give --fock N or --auto-truncate"),
    }
}

/// Steady state, its dimension and whether the dimension was chosen adaptively.
fn solve_steady(l: &Lindbladian, t: &Truncation) -> Result<(DensityMatrix, usize, bool)> {
    match t.fock {
        Some(n) => Ok((steady_state(l, n)?, n, false)),
        None => {
            let opts = TruncationOptions {
                start: 8,
                ceiling: t.max_fock,
                ..TruncationOptions::default()
            };
            let r = auto_truncate(l, &[], &opts)?;
            Ok((r.steady_state, r.n, true))
        }
    }
}

#[derive(Serialize)]
struct Observables {
    /// `[Re, Im]` of `⟨â⟩`.
    a: [f64; 2],
    n: f64,
    x: f64,
    y: f64,
    purity: f64,
    min_eigenvalue: f64,
}

fn observables(rho: &DensityMatrix) -> Observables {
    let a = expectation(rho, &NormalOrderedPolynomial::a());
    let n = expectation(rho, &NormalOrderedPolynomial::monomial(1, 1, Complex64::new(1.0, 0.0)));
    let m = rho.as_mat();
    let purity = (m * m).diagonal().column_vector().iter().map(|z| z.re).sum();
    Observables {
        a: [a.re, a.im],
        n: n.re,
        x: expectation(rho, &position()).re,
        y: expectation(rho, &momentum()).re,
        purity,
        min_eigenvalue: rho.min_eigenvalue(),
    }
}

pub fn quantize(a: &QuantizeArgs) -> Result<()> {
    let sys = load_system(a.source.system.as_deref(), a.source.catalog.as_deref(), &a.source.params)?;
    let h = sys.system.to_complex();
    let method = a
        .method
        .unwrap_or(if h.degree() <= 3 { Method::Table } else { Method::Cascade });
    let l = match method {
        Method::Table => table_quantize_deg3(&h)?,
        Method::Cascade => cascade_quantize(&h)?,
    };
    write_output(a.out.as_deref(), &to_json(&l)?)?;
    eprintln!(
        "method: {method:?}, dissipators: {}, max operator degree: {}",
        l.dissipators.len(),
        l.max_operator_degree()
    );
    Ok(())
}

pub fn verify(a: &VerifyArgs) -> Result<()> {
    if !(a.tol > 0.0) {
        bail!("--tol must be positive");
    }
    let l: Lindbladian = read_json(&a.lindblad)?;
    l.validate().with_context(|| format!("generator in {}", a.lindblad.display()))?;
    let sys = load_system(a.source.system.as_deref(), a.source.catalog.as_deref(), &a.source.params)?;
    let r = verify_ehrenfest(&l, &sys.system.to_complex())?;
    if r.passes(a.tol) {
        println!("max residual {:.3e} <= {:.1e}: OK", r.max_abs, a.tol);
        return Ok(());
    }
    println!("{}", serde_json::to_string(&r.residual)?);
    Err(VerificationFailed(format!("max residual {:.3e} exceeds {:.1e}", r.max_abs, a.tol)).into())
}

pub fn steady(a: &SteadyArgs) -> Result<()> {
    check_truncation(&a.truncation)?;
    let l = generator(&a.generator)?;
    let (rho, n, auto) = solve_steady(&l, &a.truncation)?;
    let obs = observables(&rho);
    eprintln!(
        "N = {n}{}: ⟨â†â⟩ = {:.6}, ⟨x⟩ = {:.6}, ⟨y⟩ = {:.6}, purity = {:.6}",
        if auto { " (auto)" } else { "" },
        obs.n,
        obs.x,
        obs.y,
        obs.purity
    );
    let doc = serde_json::json!({
        "dim": n,
        "auto_truncated": auto,
        "observables": obs,
        "state": rho,
    });
    write_output(a.out.as_deref(), &to_json(&doc)?)
}

pub fn wigner(a: &WignerArgs) -> Result<()> {
    let rho = match &a.state {
        Some(path) => load_state(path)?,
        None => {
            check_truncation(&a.truncation)?;
            let l = generator(&a.generator)?;
            solve_steady(&l, &a.truncation)?.0
        }
    };
    let mut w = wigner_grid(&rho, &a.grid);
    eprintln!("W range [{:.4e}, {:.4e}], grid integral {:.6}", w.min(), w.max(), w.integral());
    if a.scale_unit {
        w = w.scaled_unit();
    }
    write_output(a.out.as_deref(), &w.to_csv())
}

pub fn evolve(a: &EvolveArgs) -> Result<()> {
    check_truncation(&a.truncation)?;
    if !(a.t_final > 0.0 && a.t_final.is_finite()) {
        bail!("--t-final must be finite and positive");
    }
    if a.samples < 2 {
        bail!("--samples must be at least 2");
    }
    let l = generator(&a.generator)?;
    let n = match a.truncation.fock {
        Some(n) => n,
        None => solve_steady(&l, &a.truncation)?.1,
    };
    let rho0 = initial_state(&a.initial, n)?;
    let opts = EvolveOptions {
        save_times: (0..a.samples)
            .map(|k| a.t_final * k as f64 / (a.samples - 1) as f64)
            .collect(),
        ..EvolveOptions::default()
    };
    let traj = run_evolve(&l, &rho0, a.t_final, &opts)?;
    let mut csv = String::from("t,trace,x,y,n,min_eigenvalue\n");
    for (t, rho) in traj.times.iter().zip(&traj.states) {
        let o = observables(rho);
        let _ = writeln!(csv, "{t},{},{},{},{},{}", rho.trace().re, o.x, o.y, o.n, o.min_eigenvalue);
    }
    eprintln!("N = {n}, {} samples to t = {}", traj.times.len(), a.t_final);
    write_output(a.out.as_deref(), &csv)
}

/// Noise-free generator for the stochastic commands; FitzHugh–Nagumo unless given.
fn noise_base(n: &NoiseArgs) -> Result<Lindbladian> {
    check_dim(n.fock)?;
    if !(n.dt > 0.0 && n.dt.is_finite()) {
        bail!("--dt must be finite and positive");
    }
    if n.save_every == 0 {
        bail!("--save-every must be at least 1");
    }
    if !n.bias.is_finite() {
        bail!("--bias must be finite");
    }
    if n.generator.lindblad.is_none() && n.generator.catalog.is_none() {
        return load_lindbladian(None, Some("fitzhugh_nagumo"), &n.generator.params);
    }
    generator(&n.generator)
}

fn run_config(n: &NoiseArgs) -> RunConfig {
    RunConfig {
        dt: n.dt,
        seed: n.seed,
        save_every: n.save_every,
        ..RunConfig::default()
    }
}

fn check_horizon(t_final: f64, dt: f64) -> Result<()> {
    if !(t_final > 0.0 && t_final.is_finite()) {
        bail!("--t-final must be finite and positive");
    }
    if t_final < dt {
        bail!("--t-final {t_final} is shorter than one step ({dt})");
    }
    Ok(())
}

pub fn stochastic(a: &StochasticArgs) -> Result<()> {
    let base = noise_base(&a.noise)?;
    check_horizon(a.t_final, a.noise.dt)?;
    if a.trajectories == 0 {
        bail!("--trajectories must be at least 1");
    }
    let g = NoisyGenerator::new(base.clone(), a.kappa)?;
    let rho0 = biased_initial_state(&base, a.noise.fock, a.noise.bias)?;
    let cfg = run_config(&a.noise);

    if a.trajectories > 1 {
        let stats = ensemble_expectation(&g, &rho0, a.t_final, &cfg, a.trajectories, &position())?;
        let mut csv = String::from("t,mean_x,sem_x\n");
        for ((t, m), s) in stats.times.iter().zip(&stats.mean).zip(&stats.sem) {
            let _ = writeln!(csv, "{t},{m},{s}");
        }
        eprintln!("{} trajectories, {} samples", a.trajectories, stats.times.len());
        return write_output(a.out.as_deref(), &csv);
    }

    let modes = mode_trajectory(&g, &rho0, a.t_final, &cfg, &a.noise.grid)?;
    let signal = match a.noise.axis {
        Axis::X => &modes.x,
        Axis::Y => &modes.y,
    };
    let spikes = detect_spikes(&modes.times, signal, &DetectorConfig::default())?;
    match SpikeStatistics::from_spike_times(spikes.clone()) {
        Ok(s) => eprintln!(
            "{} spikes, mean interval {:.4}, σ̄ = {:.4}",
            spikes.len(),
            s.mean,
            s.sigma_bar
        ),
        Err(Error::TooFewSpikes(k)) => eprintln!("{k} spikes: too few for interval statistics"),
        Err(e) => return Err(e.into()),
    }
    if let Some(path) = &a.spikes {
        let mut csv = String::from("index,t,interval\n");
        for (i, t) in spikes.iter().enumerate() {
            let iv = if i == 0 { f64::NAN } else { t - spikes[i - 1] };
            let _ = writeln!(csv, "{i},{t},{iv}");
        }
        write_output(Some(path), &csv)?;
    }
    write_output(a.out.as_deref(), &modes.to_csv())
}

pub fn scan(a: &ScanArgs) -> Result<()> {
    let base = noise_base(&a.noise)?;
    check_horizon(a.t_final, a.noise.dt)?;
    if let Some(k) = a.kappa.iter().find(|k| !(**k >= 0.0 && k.is_finite())) {
        bail!("noise strength {k} must be finite and >= 0");
    }
    let rho0 = biased_initial_state(&base, a.noise.fock, a.noise.bias)?;
    let cfg = ScanConfig {
        t_final: a.t_final,
        run: run_config(&a.noise),
        grid: a.noise.grid.clone(),
        detector: DetectorConfig::default(),
        axis: match a.noise.axis {
            Axis::X => SignalAxis::X,
            Axis::Y => SignalAxis::Y,
        },
    };
    let rows = coherence_scan(&base, &a.kappa, &rho0, &cfg)?;
    for r in rows.iter().filter(|r| r.stats.is_none()) {
        eprintln!("κ = {}: {} spikes, too few for interval statistics", r.kappa, r.n_spikes);
    }
    write_output(a.out.as_deref(), &scan_csv(&rows))
}

pub fn catalog(c: &CatalogCommand) -> Result<()> {
    match c {
        CatalogCommand::List { json } => {
            let names = catalog_names();
            if *json {
                let doc: Vec<_> = names
                    .iter()
                    .map(|(n, p)| serde_json::json!({ "name": n, "params": p.iter().cloned().collect::<std::collections::BTreeMap<_, _>>() }))
                    .collect();
                print!("{}", to_json(&doc)?);
            } else {
                for (n, p) in names {
                    let params: Vec<String> = p.iter().map(|(k, v)| format!("{k}={v}")).collect();
                    println!("{n:<16} {}", params.join(" "));
                }
            }
            Ok(())
        }
        CatalogCommand::Show {
            name,
            params,
            lindblad,
            out,
        } => {
            let e = lookup(name, &params.iter().cloned().collect())?;
            for note in &e.errata {
                eprintln!("erratum: {note}");
            }
            let text = if *lindblad {
                match &e.published {
                    Some(l) => to_json(l)?,
                    None => bail!("`{name}` has no printed generator for these parameters"),
                }
            } else {
                to_json(&load_system(None, Some(name), params)?)?
            };
            write_output(out.as_deref(), &text)
        }
    }
}
