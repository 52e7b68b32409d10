//! Command-line front end: pointwise evaluation, norm tables, modulus
//! sweeps, classification tables, and the full staged experiment.
//!
//! Every run starts from the built-in default configuration, optionally
//! replaced by `--config <file.json>`, with individual keys overridable
//! by flags of the same name.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use bumplab::experiment::{classify_a, classify_u, savare_compare, w1_table};
use bumplab::experiment::{run_experiment, ExperimentConfig, MainTheoremConfig, Mode};
use bumplab::modulus::{diff_norm, full_window, samples_to_csv, DiffOpts};
use bumplab::norms::{w_lp_norm, w_prime_lp_norm};
use bumplab::reference::{reference_w_lp_norm, reference_w_prime_lp_norm};
use bumplab::render::{parse_ext, sig17, sig_short};

#[derive(Parser)]
#[command(
    name = "bumplab",
    version,
    about = "Verification laboratory for power-bump trains and their radial lifts"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate w/v/u/A/f pointwise.
    Eval(EvalArgs),
    /// Closed-form norms against the independent quadrature oracle.
    Norms(ConfigArgs),
    /// Smoothness-modulus sweep for one train and one rho; emits CSV.
    Modulus(ModulusArgs),
    /// Membership case tables (and the gradient table in L mode).
    Classify(ConfigArgs),
    /// Full staged verification run; emits a report and CSV artifacts.
    Experiment(ExperimentArgs),
}

/// Configuration keys, each matching a JSON key of the config file.
#[derive(Args)]
struct ConfigArgs {
    /// JSON configuration file; defaults apply for absent keys.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    /// Integrability threshold; accepts "inf".
    #[arg(long, value_parser = parse_ext_arg)]
    mu: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    /// "main" or "L".
    #[arg(long)]
    mode: Option<String>,
    /// Comma-separated; entries accept "inf".
    #[arg(long = "rho_list", value_delimiter = ',', value_parser = parse_ext_arg)]
    rho_list: Option<Vec<f64>>,
    /// Comma-separated dyadic step exponents j (steps h = 2^-j).
    #[arg(long = "h_exponents", value_delimiter = ',')]
    h_exponents: Option<Vec<u32>>,
    /// Comma-separated ambient dimensions.
    #[arg(long = "d_list", value_delimiter = ',')]
    d_list: Option<Vec<usize>>,
    /// JSON object merged over the default tolerances.
    #[arg(long)]
    tolerances: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// Which function: w (train), v (window), u (antiderivative),
    /// A (radial flux profile), f (strong-form datum).
    #[arg(long)]
    what: String,
    /// Comma-separated evaluation points: train coordinate for w,
    /// radius for the others.
    #[arg(long, value_delimiter = ',')]
    at: Vec<f64>,
    /// Ambient dimension for A and f.
    #[arg(long, default_value_t = 1)]
    d: usize,
}

#[derive(Args)]
struct ModulusArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// "solution" for the primal train, "field" for the dual.
    #[arg(long, default_value = "solution")]
    train: String,
    /// Integrability index of the modulus; accepts "inf".
    #[arg(long, value_parser = parse_ext_arg)]
    rho: f64,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// Artifact directory (report.json, report.txt, sweep CSVs).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_ext_arg(s: &str) -> Result<f64, String> {
    parse_ext(s).ok_or_else(|| format!("expected a number or \"inf\", got {s:?}"))
}

fn load_config(args: &ConfigArgs) -> Result<ExperimentConfig> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            ExperimentConfig::from_json(&text)?
        }
        None => ExperimentConfig::default(),
    };
    if let Some(p) = args.p {
        cfg.p = p;
    }
    if let Some(lambda) = args.lambda {
        cfg.lambda = lambda;
    }
    if let Some(mu) = args.mu {
        cfg.mu = mu;
    }
    if let Some(epsilon) = args.epsilon {
        cfg.epsilon = epsilon;
    }
    if let Some(mode) = &args.mode {
        cfg.mode = mode.parse::<Mode>()?;
    }
    if let Some(rho_list) = &args.rho_list {
        cfg.rho_list = rho_list.clone();
    }
    if let Some(h_exponents) = &args.h_exponents {
        cfg.h_exponents = h_exponents.clone();
    }
    if let Some(d_list) = &args.d_list {
        cfg.d_list = d_list.clone();
    }
    if let Some(text) = &args.tolerances {
        let mut base = serde_json::to_value(&cfg.tolerances)?;
        let patch: serde_json::Value =
            serde_json::from_str(text).context("parsing --tolerances")?;
        match (&mut base, patch) {
            (serde_json::Value::Object(b), serde_json::Value::Object(p)) => {
                for (k, v) in p {
                    if !b.contains_key(&k) {
                        bail!("unknown tolerance key {k:?}");
                    }
                    b.insert(k, v);
                }
            }
            _ => bail!("--tolerances takes a JSON object"),
        }
        cfg.tolerances = serde_json::from_value(base)?;
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn derive(cfg: &ExperimentConfig) -> Result<MainTheoremConfig> {
    Ok(match cfg.mode {
        Mode::Main => {
            bumplab::experiment::select_params_main(cfg.p, cfg.lambda, cfg.mu, cfg.epsilon)?
        }
        Mode::L => bumplab::experiment::select_params_l(cfg.p, cfg.mu, cfg.epsilon)?,
    })
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Eval(args) => cmd_eval(args),
        Cmd::Norms(args) => cmd_norms(args),
        Cmd::Modulus(args) => cmd_modulus(args),
        Cmd::Classify(args) => cmd_classify(args),
        Cmd::Experiment(args) => cmd_experiment(args),
    }
}

fn cmd_eval(args: EvalArgs) -> Result<ExitCode> {
    let cfg = load_config(&args.config)?;
    let derived = derive(&cfg)?;
    let bump = derived.bump()?;
    let field = derived.field(args.d)?;
    for &x in &args.at {
        let value = match args.what.as_str() {
            "w" => bump.eval_w(x),
            "v" => bump.eval_v(x),
            "u" => bump.eval_u(x),
            "A" | "a" => field.a_radial_profile(x),
            "f" => field.eval_f_strong(x)?,
            other => bail!("--what must be one of w, v, u, A, f; got {other:?}"),
        };
        println!("{} {}", sig17(x), sig17(value));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_norms(args: ConfigArgs) -> Result<ExitCode> {
    let cfg = load_config(&args)?;
    let derived = derive(&cfg)?;
    let trains = [("solution", derived.bump()?), ("field", derived.dual_bump()?)];
    println!(
        "{:<9} {:<6} {:<10} {:>24} {:>24} {:>10}",
        "train", "rho", "kind", "closed", "reference", "rel"
    );
    let mut worst: f64 = 0.0;
    for (name, train) in &trains {
        for &rho in &cfg.rho_list {
            let label = sig_short(rho);
            if rho.is_finite() {
                let closed = w_lp_norm(train, rho)?;
                let reference = reference_w_lp_norm(train, rho, 1e-12)?;
                let rel = (closed - reference).abs() / reference;
                worst = worst.max(rel);
                println!(
                    "{name:<9} {label:<6} {:<10} {:>24} {:>24} {rel:>10.2e}",
                    "train",
                    sig17(closed),
                    sig17(reference)
                );
                let closed = w_prime_lp_norm(train, rho)?;
                let reference = reference_w_prime_lp_norm(train, rho, 1e-12)?;
                match (closed.finite(), reference.finite()) {
                    (Some(c), Some(r)) => {
                        let rel = (c - r).abs() / r;
                        worst = worst.max(rel);
                        println!(
                            "{name:<9} {label:<6} {:<10} {:>24} {:>24} {rel:>10.2e}",
                            "slope",
                            sig17(c),
                            sig17(r)
                        );
                    }
                    (c, r) => {
                        let show = |v: Option<f64>| match v {
                            Some(x) => sig17(x),
                            None => "divergent".to_string(),
                        };
                        let agree = c.is_none() == r.is_none();
                        if !agree {
                            worst = f64::INFINITY;
                        }
                        println!(
                            "{name:<9} {label:<6} {:<10} {:>24} {:>24} {:>10}",
                            "slope",
                            show(c),
                            show(r),
                            if agree { "agree" } else { "DISAGREE" }
                        );
                    }
                }
            } else {
                let closed = w_lp_norm(train, rho)?;
                println!(
                    "{name:<9} {label:<6} {:<10} {:>24} {:>24} {:>10}",
                    "train",
                    sig17(closed),
                    "(exact sup)",
                    "--"
                );
            }
        }
    }
    if worst.is_finite() && worst <= cfg.tolerances.norm_rel {
        println!("max relative deviation {worst:.2e} within {:.1e}", cfg.tolerances.norm_rel);
        Ok(ExitCode::SUCCESS)
    } else {
        println!("max relative deviation {worst:.2e} EXCEEDS {:.1e}", cfg.tolerances.norm_rel);
        Ok(ExitCode::FAILURE)
    }
}

fn cmd_modulus(args: ModulusArgs) -> Result<ExitCode> {
    let cfg = load_config(&args.config)?;
    let derived = derive(&cfg)?;
    let (train, sigma) = match args.train.as_str() {
        "solution" => (derived.bump()?, derived.sigma),
        "field" => (derived.dual_bump()?, derived.sigma_dual),
        other => bail!("--train must be \"solution\" or \"field\", got {other:?}"),
    };
    let opts = DiffOpts {
        order: 8,
        cutoff_factor: 64.0,
        refine_check: None,
    };
    let mut samples = Vec::new();
    for &j in &cfg.h_exponents {
        let h = 2f64.powi(-(j as i32));
        match diff_norm(&train, h, args.rho, full_window(&train), &opts) {
            Ok(s) => samples.push(s),
            Err(e) => eprintln!("skipping 2^-{j}: {e}"),
        }
    }
    let csv = samples_to_csv(&samples);
    match &args.out {
        Some(path) => {
            std::fs::write(path, &csv).with_context(|| format!("writing {}", path.display()))?;
            eprintln!("wrote {} samples to {}", samples.len(), path.display());
        }
        None => print!("{csv}"),
    }
    match bumplab::fit::fit_exponent(&samples) {
        Ok(fit) => {
            eprint!("fitted slope {:.6} (max log residual {:.2e})", fit.slope, fit.max_residual);
            match bumplab::fit::predicted_exponent(sigma, derived.theta, args.rho) {
                Ok(pe) => eprintln!(", predicted {pe:.6}"),
                Err(e) => eprintln!(", prediction not asserted: {e}"),
            }
        }
        Err(e) => eprintln!("no fit: {e}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_classify(args: ConfigArgs) -> Result<ExitCode> {
    let cfg = load_config(&args)?;
    let derived = derive(&cfg)?;
    let q = derived.p;
    println!(
        "derived: theta = {:.6}, sigma = {:.6}, dual sigma = {:.6}",
        derived.theta, derived.sigma, derived.sigma_dual
    );
    println!("\nsolution membership (threshold rho = {}):", sig_short(derived.mu * (derived.p - 1.0)));
    for rho in table_rhos(derived.mu * (derived.p - 1.0), &cfg.rho_list) {
        println!("  {}", classify_u(rho, q, &derived)?.describe());
    }
    println!("\nfield membership (threshold rho = {}):", sig_short(derived.mu));
    for rho in table_rhos(derived.mu, &cfg.rho_list) {
        println!("  {}", classify_a(rho, q, &derived)?.describe());
    }
    if cfg.mode == Mode::L {
        let mut rhos = vec![1.2, 1.5, 4.0];
        if derived.mu.is_finite() {
            rhos.push(derived.mu - 0.01);
            rhos.push(derived.mu + 0.01);
        }
        rhos.sort_by(|a, b| a.partial_cmp(b).unwrap());
        println!("\ngradient integrability (expected member iff rho < {}):", sig_short(derived.mu));
        for row in w1_table(&derived, &rhos)? {
            println!(
                "  rho = {:<5} expected {:<5} measured {:<5} {}",
                sig_short(row.rho),
                row.expected_member,
                row.measured_member,
                if row.pass() { "ok" } else { "MISMATCH" }
            );
        }
    }
    let line = savare_compare(&derived)?;
    println!(
        "\nshift comparison: guaranteed {:.6}, excluded above {:.6} ({})",
        line.guaranteed, line.excluded_above, line.note
    );
    Ok(ExitCode::SUCCESS)
}

fn table_rhos(threshold: f64, rho_list: &[f64]) -> Vec<f64> {
    let mut rhos = Vec::new();
    if threshold.is_finite() {
        rhos.push((2.0 * threshold).max(threshold + 1.0));
        rhos.push(threshold);
        rhos.push(((1.0 + threshold) * 0.5).max(1.0));
    } else {
        rhos.push(f64::INFINITY);
        rhos.push(4.0);
    }
    rhos.extend(rho_list.iter().copied().filter(|r| *r >= 1.0));
    rhos.sort_by(|a, b| b.partial_cmp(a).unwrap());
    rhos.dedup();
    rhos
}

fn cmd_experiment(args: ExperimentArgs) -> Result<ExitCode> {
    let cfg = load_config(&args.config)?;
    let report = run_experiment(&cfg, args.out.as_deref())?;
    print!("{}", report.render_text());
    if let Some(dir) = &args.out {
        eprintln!("artifacts written to {}", dir.display());
    }
    Ok(if report.overall_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}
