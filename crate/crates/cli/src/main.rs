//! `rml` command line: sample ensembles, inspect spectra, query essential
//! LCDs, estimate small-ball probabilities, and run the named experiments.
//!
//! Exit codes: 0 success, 1 usage error, 2 runtime error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rml_core::arithmetic::{essential_lcd, LcdMode, LcdQuery};
use rml_core::ensembles::{self, EnsembleSpec, MatrixData};
use rml_core::experiments::{self, ExperimentConfig};
use rml_core::report;
use rml_core::rng;

#[derive(Parser)]
#[command(name = "rml", version, about = "random-matrix Monte Carlo laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw one matrix sample from an ensemble spec (JSON) into the binary
    /// container, optionally also as CSV.
    Sample(SampleArgs),
    /// Spectral summary of a matrix container: singular values, min gap,
    /// least singular value, optional real-eigenvalue count.
    Spectrum(SpectrumArgs),
    /// Essential LCD of a vector (CSV, one row per direction component).
    Lcd(LcdArgs),
    /// Small-ball probability P(||Mv|| <= t sqrt(n)) for an ensemble.
    Smallball(SmallballArgs),
    /// Run a configured experiment; writes rows.csv, report.json,
    /// config-echo.json.
    Experiment(ExperimentArgs),
    /// Deterministic property suites (block identities, interlacing,
    /// lattice identities); exits 0 when everything holds.
    Selftest,
}

#[derive(Args)]
struct SampleArgs {
    /// Ensemble spec JSON file.
    #[arg(long)]
    spec: PathBuf,
    /// Output path for the binary matrix container.
    #[arg(long)]
    out: PathBuf,
    /// Optional CSV dump for inspection.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 0)]
    trial: u64,
}

#[derive(Args)]
struct SpectrumArgs {
    /// Input matrix container.
    #[arg(long)]
    input: PathBuf,
    /// Also count real eigenvalues (square real matrices).
    #[arg(long, default_value_t = false)]
    real_eigs: bool,
    /// Output CSV path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LcdArgs {
    /// Vector file: CSV, one row per direction component (1, 2 or 4 rows).
    #[arg(long)]
    vector: PathBuf,
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    gamma: f64,
    /// "infimum" or "certify".
    #[arg(long, default_value = "infimum")]
    mode: String,
    /// Search bound K.
    #[arg(long, default_value_t = 100.0)]
    k_bound: f64,
    /// Bracket width / scan step.
    #[arg(long, default_value_t = 1e-5)]
    step: f64,
    /// Dimension count in sqrt(alpha m); defaults to the vector length.
    #[arg(long)]
    ambient: Option<usize>,
}

#[derive(Args)]
struct SmallballArgs {
    #[arg(long)]
    spec: PathBuf,
    #[arg(long)]
    vector: PathBuf,
    #[arg(long)]
    t: f64,
    /// Monte Carlo trials; use --exact for exhaustive enumeration.
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long, default_value_t = false)]
    exact: bool,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Subaction; only "run" is defined.
    action: String,
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    trials_override: Option<u64>,
    #[arg(long)]
    law_override: Option<String>,
    /// Write a gnuplot script next to rows.csv instead of producing plots.
    #[arg(long, default_value_t = false)]
    emit_gnuplot: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // help/version are successful exits; anything else is usage
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), String> {
    match cli.command {
        Command::Sample(a) => cmd_sample(a),
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Lcd(a) => cmd_lcd(a),
        Command::Smallball(a) => cmd_smallball(a),
        Command::Experiment(a) => cmd_experiment(a),
        Command::Selftest => cmd_selftest(),
    }
}

fn seed_or_random(seed: Option<u64>) -> u64 {
    match seed {
        Some(s) => s,
        None => {
            let s = rng::random_master_seed();
            println!("master_seed: {s}");
            s
        }
    }
}

fn cmd_sample(a: SampleArgs) -> Result<(), String> {
    let text = std::fs::read_to_string(&a.spec).map_err(|e| format!("read spec: {e}"))?;
    let spec: EnsembleSpec = serde_json::from_str(&text).map_err(|e| format!("parse spec: {e}"))?;
    let seed = seed_or_random(a.seed);
    let sample =
        ensembles::sample_trial::<f64>(&spec, seed, a.trial).map_err(|e| e.to_string())?;
    for w in &sample.warnings {
        eprintln!("warning: {w}");
    }
    let mut f = std::fs::File::create(&a.out).map_err(|e| e.to_string())?;
    ensembles::write_matrix_binary(&mut f, &sample.data).map_err(|e| e.to_string())?;
    if let Some(csv) = &a.csv {
        let mut f = std::fs::File::create(csv).map_err(|e| e.to_string())?;
        ensembles::write_matrix_csv(&mut f, &sample.data).map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn cmd_spectrum(a: SpectrumArgs) -> Result<(), String> {
    let mut f = std::fs::File::open(&a.input).map_err(|e| e.to_string())?;
    let data = ensembles::read_matrix_binary(&mut f).map_err(|e| e.to_string())?;
    let m = match &data {
        MatrixData::Real(m) => m.clone(),
        MatrixData::Complex(c) => {
            if a.real_eigs {
                return Err("real eigenvalue count needs a real matrix".into());
            }
            c.real_embedding()
        }
    };
    let s = rml_core::spectral::summary(&m, a.real_eigs && m.is_square())
        .map_err(|e| e.to_string())?;
    let header = "rows,cols,sigma_min,op_norm,min_gap,min_gap_index,min_gap_scaled,real_eig_count";
    let line = format!(
        "{},{},{:.12e},{:.12e},{:.12e},{},{:.12e},{}",
        m.rows(),
        m.cols(),
        s.sigma_min,
        s.op_norm,
        s.min_gap,
        s.min_gap_index,
        s.min_gap_scaled,
        s.real_eig_count.map_or(String::from(""), |c| c.to_string()),
    );
    match &a.out {
        None => {
            println!("{header}");
            println!("{line}");
        }
        Some(p) => {
            let mut f = std::fs::File::create(p).map_err(|e| e.to_string())?;
            writeln!(f, "{header}\n{line}").map_err(|e| e.to_string())?;
        }
    }
    Ok(())
}

fn read_vector_rows(path: &PathBuf) -> Result<Vec<Vec<f64>>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    let mut rows = vec![];
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let row: Result<Vec<f64>, _> = line.split(',').map(|t| t.trim().parse::<f64>()).collect();
        rows.push(row.map_err(|e| format!("parse vector: {e}"))?);
    }
    if rows.is_empty() {
        return Err("vector file is empty".into());
    }
    Ok(rows)
}

fn cmd_lcd(a: LcdArgs) -> Result<(), String> {
    let rows = read_vector_rows(&a.vector)?;
    let mode = match a.mode.as_str() {
        "infimum" => LcdMode::FindInfimum,
        "certify" => LcdMode::CertifyLowerBound,
        other => return Err(format!("unknown mode '{other}' (use infimum|certify)")),
    };
    let q = LcdQuery {
        directions: rows,
        alpha: a.alpha,
        gamma: a.gamma,
        ambient_count: a.ambient,
        search_bound: a.k_bound,
        scan_step: a.step,
        mode,
        eval_budget: 200_000_000,
    };
    let r = essential_lcd(&q).map_err(|e| e.to_string())?;
    println!("{}", serde_json::to_string_pretty(&r).map_err(|e| e.to_string())?);
    Ok(())
}

fn cmd_smallball(a: SmallballArgs) -> Result<(), String> {
    let text = std::fs::read_to_string(&a.spec).map_err(|e| e.to_string())?;
    let spec: EnsembleSpec = serde_json::from_str(&text).map_err(|e| format!("parse spec: {e}"))?;
    let rows = read_vector_rows(&a.vector)?;
    let v = rows.into_iter().next().unwrap();
    let seed = seed_or_random(a.seed);
    let mut stream = rng::stream(seed, "cli-smallball", 0);
    let trials = if a.exact { None } else { Some(a.trials.unwrap_or(100_000)) };
    let est = rml_core::anticoncentration::small_ball_matrix(&spec, &v, a.t, trials, &mut stream)
        .map_err(|e| e.to_string())?;
    println!("{}", serde_json::to_string_pretty(&est).map_err(|e| e.to_string())?);
    Ok(())
}

fn cmd_experiment(a: ExperimentArgs) -> Result<(), String> {
    if a.action != "run" {
        return Err(format!("unknown experiment action '{}'; use 'run'", a.action));
    }
    let text = std::fs::read_to_string(&a.config).map_err(|e| format!("read config: {e}"))?;
    let mut value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| format!("parse config: {e}"))?;
    // seed resolution: flag > config > fresh random (printed)
    if let Some(seed) = a.seed {
        value["master_seed"] = serde_json::json!(seed);
    } else if value.get("master_seed").is_none() {
        let s = rng::random_master_seed();
        println!("master_seed: {s}");
        value["master_seed"] = serde_json::json!(s);
    }
    if let Some(t) = a.trials_override {
        value["trials"] = serde_json::json!(t);
    }
    if let Some(l) = &a.law_override {
        value["law"] = serde_json::json!(l);
    }
    let workers = a
        .workers
        .or_else(|| std::env::var("RML_WORKERS").ok().and_then(|v| v.parse().ok()));
    if let Some(w) = workers {
        value["workers"] = serde_json::json!(w);
    }
    let config: ExperimentConfig =
        serde_json::from_value(value.clone()).map_err(|e| format!("config schema: {e}"))?;
    let rep = experiments::run(&config).map_err(|e| e.to_string())?;
    report::write_report(&a.out, &rep, &value).map_err(|e| e.to_string())?;
    if a.emit_gnuplot {
        let script = report::gnuplot_script("rows.csv");
        std::fs::write(a.out.join("plot.gp"), script).map_err(|e| e.to_string())?;
    }
    println!(
        "{}: {} rows, {:.2}s, hash {}",
        rep.experiment,
        rep.rows.len(),
        rep.runtime_secs,
        rep.config_hash
    );
    Ok(())
}

fn cmd_selftest() -> Result<(), String> {
    use rml_core::distributions::{EntryLaw, Law};
    use rml_core::ensembles::Family;
    use rml_core::linalg::sym_eigen;
    use rml_core::mat::dot;

    let mut failures = 0usize;
    let mut check = |name: &str, ok: bool| {
        println!("{} {}", if ok { "PASS" } else { "FAIL" }, name);
        if !ok {
            failures += 1;
        }
    };

    // Block identity: nonnegative eigenvalues of L_A equal singular values.
    let law = Law::Entry(EntryLaw::rademacher());
    let mut worst_block = 0.0f64;
    for t in 0..50 {
        let n = 4 + (t % 5);
        let spec = EnsembleSpec::new(Family::IidSquare { n }, law.clone()).unwrap();
        let s = ensembles::sample_trial::<f64>(&spec, 17, t as u64).unwrap();
        let a = s.real().unwrap();
        let sv = rml_core::spectral::svd_values(a).unwrap();
        let la_spec = EnsembleSpec::new(Family::BlockLa { n }, law.clone()).unwrap();
        let mut la = ensembles::sample_trial::<f64>(&la_spec, 17, 1000 + t as u64).unwrap();
        // rebuild L_A from this exact A rather than a fresh sample
        if let MatrixData::Real(m) = &mut la.data {
            for i in 0..n {
                for j in 0..n {
                    m[(i, n + j)] = a[(i, j)];
                    m[(n + j, i)] = a[(i, j)];
                }
            }
            let eig = sym_eigen(m).unwrap();
            let nonneg: Vec<f64> = eig.values.iter().copied().filter(|x| *x >= 0.0).collect();
            for (x, y) in nonneg.iter().zip(&sv) {
                worst_block = worst_block.max((x - y).abs() / sv[0].max(1.0));
            }
        }
    }
    check("block identity (singular values vs block eigenvalues)", worst_block < 1e-10);

    // Interlacing of principal minors of L_A.
    let mut worst_inter = f64::NEG_INFINITY;
    for t in 0..50 {
        let spec = EnsembleSpec::new(Family::BlockLa { n: 4 }, law.clone()).unwrap();
        let s = ensembles::sample_trial::<f64>(&spec, 23, t).unwrap();
        let m = s.real().unwrap();
        for j in 0..8 {
            worst_inter = worst_inter.max(rml_core::spectral::interlacing_check(m, j).unwrap());
        }
    }
    check("Cauchy interlacing on block matrices", worst_inter <= 1e-9);

    // Component norms of curly-L eigenvectors agree.
    let mut worst_comp = 0.0f64;
    for t in 0..50 {
        let n = 5;
        let spec = EnsembleSpec::new(Family::BlockCurlyLa { n }, law.clone()).unwrap();
        let s = ensembles::sample_trial::<f64>(&spec, 29, t).unwrap();
        let eig = sym_eigen(s.real().unwrap()).unwrap();
        for k in 0..(2 * n - 1) {
            if eig.values[k].abs() > 1e-8 {
                let v = eig.vectors.col(k);
                let n1 = rml_core::mat::norm2(&v[0..n - 1]);
                let n2 = rml_core::mat::norm2(&v[n - 1..]);
                worst_comp = worst_comp.max((n1 - n2).abs());
            }
        }
    }
    check("eigenvector component norms on the trimmed block matrix", worst_comp < 1e-8);

    // Eigenvalue-gap inner product bound on symmetric matrices.
    let mut bound_ok = true;
    for t in 0..50 {
        let spec = EnsembleSpec::new(Family::IidSquare { n: 6 }, law.clone()).unwrap();
        let s = ensembles::sample_trial::<f64>(&spec, 31, t).unwrap();
        let b = s.real().unwrap();
        let m = rml_core::mat::Mat::from_fn(6, 6, |i, j| b[(i, j)] + b[(j, i)]);
        let full = sym_eigen(&m).unwrap();
        for j in 0..6 {
            let minor = sym_eigen(&m.principal_minor(j)).unwrap();
            let xj: Vec<f64> = (0..6).filter(|&i| i != j).map(|i| m[(i, j)]).collect();
            for a_i in 0..6 {
                let uj = full.vectors[(j, a_i)];
                if uj.abs() < 1e-10 {
                    continue;
                }
                for b_i in 0..5 {
                    let v = minor.vectors.col(b_i);
                    let lhs = dot(&v, &xj).abs();
                    let rhs = (full.values[a_i] - minor.values[b_i]).abs() / uj.abs();
                    if lhs > rhs + 1e-9 {
                        bound_ok = false;
                    }
                }
            }
        }
    }
    check("eigenpair inner-product bound against principal minors", bound_ok);

    // Lattice identities.
    let lat_ok = (rml_core::arithmetic::dist_to_int_lattice(&[0.5f64]) - 0.5).abs() < 1e-15
        && rml_core::arithmetic::dist_to_int_lattice(&[2.0f64, -7.0]) == 0.0
        && (rml_core::arithmetic::dist_to_int_lattice(&[0.3f64, 0.4]) - 0.5).abs() < 1e-15;
    check("integer lattice distance identities", lat_ok);

    if failures == 0 {
        Ok(())
    } else {
        Err(format!("{failures} selftest suites failed"))
    }
}
