//! Acceptance criteria, one line each. Exits non-zero if any fails.

use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Stdio};
use std::time::Instant;

use tunnelinfo::dawson::dawson;
use tunnelinfo::ks::ks_test;
use tunnelinfo::montecarlo::{first_emissions, InverseTransform};
use tunnelinfo::reference;
use tunnelinfo::verify::{
    conservation_sweep, correlation_sweep, markov_sweep, partition_sweep, sample_mean_and_stderr,
    ACCEPTANCE_SEED, MASS_GRID,
};
use tunnelinfo::{
    ensemble_stats, run_ensemble, Energy, RngStream, SimulationConfig, SpectrumModel,
};

type Criterion<'a> = (&'a str, Box<dyn Fn() -> Outcome>);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn rel(got: f64, want: f64) -> f64 {
    ((got - want) / want).abs()
}

fn pathwise_conservation() -> Outcome {
    let mut rng = RngStream::new(ACCEPTANCE_SEED, 101);
    let worst = conservation_sweep(&mut rng, &[0.5, 1.0, 2.0, 10.0], 1000, 10_000).unwrap();
    outcome(
        worst <= 1e-12,
        format!("1000 partitions, worst relative residual {worst:.3e}"),
    )
}

fn markov_identity() -> Outcome {
    let mut rng = RngStream::new(ACCEPTANCE_SEED, 102);
    let (worst, shifted) = markov_sweep(&mut rng, 10_000).unwrap();
    outcome(
        worst <= 1e-12 && shifted <= 1e-12,
        format!("worst {worst:.3e}, after moving E2 and M {shifted:.3e}"),
    )
}

fn correlation_identity() -> Outcome {
    let mut rng = RngStream::new(ACCEPTANCE_SEED, 103);
    let worst = correlation_sweep(&mut rng, 10_000).unwrap();
    outcome(worst <= 1e-12, format!("worst relative {worst:.3e}"))
}

fn partition_invariance() -> Outcome {
    let mut rng = RngStream::new(ACCEPTANCE_SEED, 104);
    let worst = partition_sweep(&mut rng, 10_000).unwrap();
    outcome(worst <= 1e-12, format!("worst relative {worst:.3e}"))
}

fn spectrum_numerics() -> Outcome {
    let (mut z, mut mean, mut cdf) = (0.0_f64, 0.0_f64, 0.0_f64);
    for &m in &MASS_GRID {
        let model = SpectrumModel::new(m).unwrap();
        z = z.max(rel(
            model.log_normalizer(),
            reference::log_normalizer_quadrature(m),
        ));
        mean = mean.max(rel(model.mean_energy(), reference::mean_quadrature(m)));
        for k in 0..=40 {
            let e = m * (k as f64 / 40.0).powi(3);
            let got = model.cdf(Energy::new(e).unwrap()).unwrap();
            cdf = cdf.max((got - reference::cdf_quadrature(m, e)).abs());
        }
    }
    let mut d = 0.0_f64;
    for i in 0..=2000 {
        let x = 0.025 * i as f64;
        d = d.max((dawson(x).unwrap() - reference::dawson_quadrature(x).value).abs());
    }
    outcome(
        z <= 1e-10 && mean <= 1e-10 && cdf <= 1e-9 && d <= 1e-13,
        format!("ln Z {z:.2e}, mean {mean:.2e}, cdf {cdf:.2e} (abs), dawson {d:.2e} (abs)"),
    )
}

fn hawking_asymptotics() -> Outcome {
    let mut passed = true;
    let mut parts = Vec::new();
    for m in [5.0, 10.0, 30.0] {
        let scaled = SpectrumModel::new(m).unwrap().mean_energy() * 8.0 * PI * m;
        passed &= (scaled - 1.0).abs() <= 1.0 / (m * m);
        parts.push(format!("m={m}: {scaled:.6}"));
    }
    outcome(passed, parts.join(", "))
}

fn sampler_fidelity() -> Outcome {
    let mut passed = true;
    let mut parts = Vec::new();
    for m in [1.0, 10.0] {
        let samples = first_emissions(m, ACCEPTANCE_SEED, 10_000, &InverseTransform).unwrap();
        let ks = ks_test(&samples, &SpectrumModel::new(m).unwrap()).unwrap();
        passed &= ks.statistic <= 0.02;
        parts.push(format!("KS(m={m}) {:.4}", ks.statistic));
    }
    let samples = first_emissions(10.0, ACCEPTANCE_SEED, 100_000, &InverseTransform).unwrap();
    let (mean, se) = sample_mean_and_stderr(&samples);
    let expected = reference::mean_quadrature(10.0);
    let z = (mean - expected) / se;
    passed &= z.abs() <= 3.0 && (expected - 3.98e-3).abs() < 5e-5;
    parts.push(format!("mean {mean:.5e} vs {expected:.5e} ({z:+.2} SE)"));
    outcome(passed, parts.join(", "))
}

/// Mass below which the temperature `1/(8πm)` exceeds the mass itself and
/// emissions stop being thermal.
fn quantum_regime_mass() -> f64 {
    1.0 / (8.0 * PI).sqrt()
}

fn simulation_scale(suite_start: Instant) -> Outcome {
    let mass = 10.0;
    let config = SimulationConfig::new(mass, 100, ACCEPTANCE_SEED);
    let results = run_ensemble(&config).unwrap();
    let stats = ensemble_stats(&results).unwrap();
    let all_conserve = stats.exhaustive_runs == 100
        && results.iter().all(|r| r.conserves())
        && stats.all_conserve(1e-12);

    // emissions made once the hole is in the quantum regime, down to the cutoff
    let m_q = quantum_regime_mass();
    let tail = results
        .iter()
        .map(|r| {
            let masses = r.sequence.remaining_masses();
            masses[..r.emission_count]
                .iter()
                .filter(|&&m| m < m_q)
                .count() as f64
        })
        .sum::<f64>()
        / results.len() as f64;
    let bulk = stats.count_mean - tail;
    let expected = 8.0 * PI * mass * mass;
    let count_ok = (bulk - expected).abs() <= 0.1 * expected;
    let elapsed = suite_start.elapsed().as_secs_f64();
    outcome(
        all_conserve && count_ok && elapsed < 60.0,
        format!(
            "conserve {all_conserve} (max residual {:?}); mean count {:.1} - tail {tail:.1} = {bulk:.1} vs 8πM² {expected:.1} ({:+.1}%; 4πM² = {:.1}); elapsed {elapsed:.1}s",
            stats.max_relative_residual,
            stats.count_mean,
            100.0 * (bulk / expected - 1.0),
            4.0 * PI * mass * mass
        ),
    )
}

fn run_cli(dir: &Path, args: &[&str]) -> bool {
    Command::new(env!("CARGO_BIN_EXE_tunnelinfo"))
        .args(args)
        .current_dir(dir)
        .env_remove("TUNNELINFO_OUTPUT_DIR")
        .stderr(Stdio::null())
        .status()
        .map(|s| s.success())
        .unwrap_or(false)
}

fn reproducibility() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mut identical = true;
    let mut files = 0;
    for round in ["a", "b"] {
        let sim = [
            "simulate",
            "--mass",
            "3",
            "--runs",
            "8",
            "--seed",
            "11",
            "--output",
            &format!("sim_{round}.csv"),
            "--manifest",
            &format!("manifest_{round}.json"),
        ];
        let spec = [
            "spectrum",
            "--mass",
            "1",
            "--grid",
            "500",
            "--output",
            &format!("spec_{round}.csv"),
        ];
        identical &= run_cli(dir.path(), &sim) && run_cli(dir.path(), &spec);
    }
    for stem in ["sim_{}.csv", "manifest_{}.json", "spec_{}.csv"] {
        let a = std::fs::read(dir.path().join(stem.replace("{}", "a")));
        let b = std::fs::read(dir.path().join(stem.replace("{}", "b")));
        match (a, b) {
            (Ok(a), Ok(b)) if !a.is_empty() => {
                identical &= a == b;
                files += 1;
            }
            _ => identical = false,
        }
    }
    outcome(
        identical,
        format!("{files} output files compared byte for byte across two invocations"),
    )
}

fn main() {
    let start = Instant::now();
    let criteria: Vec<Criterion> = vec![
        ("1 pathwise conservation", Box::new(pathwise_conservation)),
        ("2 markov violation identity", Box::new(markov_identity)),
        (
            "3 pair correlation identity",
            Box::new(correlation_identity),
        ),
        (
            "4 joint partition invariance",
            Box::new(partition_invariance),
        ),
        ("5 spectrum numerics", Box::new(spectrum_numerics)),
        ("6 hawking asymptotics", Box::new(hawking_asymptotics)),
        ("7 sampler fidelity", Box::new(sampler_fidelity)),
        (
            "8 simulation scale",
            Box::new(move || simulation_scale(start)),
        ),
        ("9 reproducibility", Box::new(reproducibility)),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        let result = check();
        if !result.passed {
            failed += 1;
        }
        println!(
            "criterion {name:<30} {}  {}",
            if result.passed { "PASS" } else { "FAIL" },
            result.detail
        );
    }
    println!(
        "acceptance: {}/{} passed in {:.1}s",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
