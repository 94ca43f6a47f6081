//! `coanalytic`: batch front end for the range-space toolkit.
//!
//! Exit codes: 0 on success, 2 when the verdict is `unknown`, 1 on any error.

mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use coanalytic_core::acceptance::{self, AcceptanceConfig, DEFAULT_SEED};
use coanalytic_core::decay::{decay_fit, sample_class_f, universal_mult_probe, ClassRule};
use coanalytic_core::mate::{
    mate_residual, mate_stability, normalize_nonextreme, pythagorean_mate, sup_norm_on_circle,
    winding_number, DEFAULT_GRID,
};
use coanalytic_core::multipliers::{
    crofoot_verify, growth_report, mult_check, numeric_mult_norm_singular, onto_check, Decision,
    OntoDecision, GROWTH_LEVELS,
};
use coanalytic_core::rangespace::decompose;
use coanalytic_core::sections::{
    kernel_degree_for, kernel_tail_bound, reproducing_residual, RangeElement, DEFAULT_KERNEL_EPS,
};
use coanalytic_core::shiftop::{adjoint_residual, shift_norm_closed, shift_norm_sections};
use coanalytic_core::symbols::CIRCLE_TOL;
use coanalytic_core::{CircleZeroPolynomial, CoefficientSeries, RationalSymbol};

use report::{Format, Outcome, Table};

#[derive(Args, Debug, Serialize)]
struct Common {
    /// Numeric tolerance; each command documents its default.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed for random trials.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case", tag = "name")]
enum Command {
    /// Circle-zero symbol of a rational function.
    Reduce {
        #[arg(long)]
        rational: String,
    },
    /// f = a·f̃ + p with deg p < N.
    Decompose {
        #[arg(long)]
        a: String,
        #[arg(long)]
        f: String,
    },
    /// Range norm of a polynomial, with its preimage.
    Norm {
        #[arg(long)]
        a: String,
        #[arg(long)]
        f: String,
    },
    /// Reproducing-kernel residual at λ.
    KernelCheck {
        #[arg(long)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, default_value = "[1]")]
        f: String,
        /// Kernel truncation; chosen from the tail bound when omitted.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        sweep: Option<String>,
    },
    /// Multiplier verdict for φ: M(ā1) → M(ā2).
    MultCheck {
        #[arg(long)]
        a1: String,
        #[arg(long)]
        a2: String,
        #[arg(long, allow_hyphen_values = true)]
        phi: String,
        /// Also run the finite-section growth oracle.
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value = "64,256,1024")]
        levels: String,
    },
    /// Whether multipliers from M(ā1) onto M(ā2) exist.
    OntoCheck {
        #[arg(long)]
        a1: String,
        #[arg(long)]
        a2: String,
        /// Verify 1/(1 − λ̄a) numerically (equal symbols only).
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        #[arg(long, default_value_t = 16)]
        n: usize,
        #[arg(long, default_value_t = 8)]
        trials: usize,
    },
    /// Norm of the shift: closed form against finite sections.
    ShiftNorm {
        #[arg(long)]
        a: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value = "0:2048")]
        sweep: String,
    },
    /// Residual of the backward-shift adjoint formula.
    AdjointCheck {
        #[arg(long)]
        a: String,
        #[arg(long, default_value_t = 32)]
        n: usize,
    },
    /// Pythagorean mate b with |a|² + |b|² = 1.
    Mate {
        #[arg(long, conflicts_with = "a")]
        rational: Option<String>,
        #[arg(long)]
        a: Option<String>,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        /// Replace a by a/(2‖a‖∞) first.
        #[arg(long)]
        normalize: bool,
    },
    /// Fit |ψ̂(n)| ≈ C e^{−c√n}.
    DecayFit {
        #[arg(long, conflicts_with = "sample_c")]
        psi: Option<String>,
        /// Use the synthetic coefficients e^{−c√k} instead of --psi.
        #[arg(long)]
        sample_c: Option<f64>,
        #[arg(long, default_value_t = 4096)]
        n: usize,
        #[arg(long)]
        window: Option<String>,
    },
    /// Section norms of multiplication by ψ on several range spaces.
    Probe {
        #[arg(long, conflicts_with = "sample_c")]
        psi: Option<String>,
        #[arg(long)]
        sample_c: Option<f64>,
        #[arg(long, default_value_t = 512)]
        n: usize,
        /// Symbols to probe; z−1, z²−1 and (z−1)² when omitted.
        #[arg(long)]
        a: Vec<String>,
        #[arg(long, default_value = "64,256,1024")]
        levels: String,
    },
    /// Convergence tables for the shift norm, kernels, mates or multiplier sections.
    Convergence {
        #[arg(long, value_parser = ["shift", "kernel", "mate", "mult"])]
        study: String,
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        a1: Option<String>,
        #[arg(long)]
        a2: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        phi: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        #[arg(long, default_value = "[1]")]
        f: String,
        #[arg(long)]
        rational: Option<String>,
        #[arg(long)]
        sweep: Option<String>,
    },
    /// Run the acceptance suite.
    Selftest {
        /// Criterion keys or numbers; repeatable or comma separated.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Reduce { .. } => "reduce",
            Command::Decompose { .. } => "decompose",
            Command::Norm { .. } => "norm",
            Command::KernelCheck { .. } => "kernel-check",
            Command::MultCheck { .. } => "mult-check",
            Command::OntoCheck { .. } => "onto-check",
            Command::ShiftNorm { .. } => "shift-norm",
            Command::AdjointCheck { .. } => "adjoint-check",
            Command::Mate { .. } => "mate",
            Command::DecayFit { .. } => "decay-fit",
            Command::Probe { .. } => "probe",
            Command::Convergence { .. } => "convergence",
            Command::Selftest { .. } => "selftest",
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "coanalytic", version, about = "Range spaces of co-analytic Toeplitz operators")]
struct Invocation {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

fn circle_tol(c: &Common) -> f64 {
    c.tol.unwrap_or(CIRCLE_TOL)
}

fn positive(n: usize, what: &str) -> Result<usize> {
    if n == 0 {
        bail!("{what} must be at least 1");
    }
    Ok(n)
}

fn check_tol(c: &Common) -> Result<()> {
    match c.tol {
        Some(t) if !(t > 0.0) => bail!("--tol must be positive"),
        _ => Ok(()),
    }
}

fn psi_from(psi: &Option<String>, sample_c: Option<f64>, n: usize) -> Result<CoefficientSeries> {
    match (psi, sample_c) {
        (Some(p), _) => input::coefficients(p),
        (None, Some(c)) => Ok(sample_class_f(c, positive(n, "--n")?)?),
        (None, None) => bail!("give --psi or --sample-c"),
    }
}

fn standard_probe_symbols() -> Vec<CircleZeroPolynomial> {
    use std::f64::consts::PI;
    [vec![(0.0, 1)], vec![(0.0, 1), (PI, 1)], vec![(0.0, 2)]]
        .iter()
        .map(|z| CircleZeroPolynomial::from_pairs(z).expect("valid"))
        .collect()
}

fn required<'a>(v: &'a Option<String>, flag: &str) -> Result<&'a str> {
    v.as_deref()
        .ok_or_else(|| anyhow::anyhow!("--{flag} is required for this study"))
}

fn mate_symbol(rational: &Option<String>, a: &Option<String>, c: &Common) -> Result<RationalSymbol> {
    match (rational, a) {
        (Some(r), _) => input::rational(r),
        (None, Some(a)) => Ok(RationalSymbol::polynomial(
            input::class_a(a, circle_tol(c))?.expand().clone(),
        )?),
        (None, None) => bail!("give --rational or --a"),
    }
}

fn num(x: f64) -> Value {
    json!(x)
}

fn run(command: &Command, c: &Common) -> Result<Outcome> {
    check_tol(c)?;
    match command {
        Command::Reduce { rational } => {
            let a = coanalytic_core::symbols::reduce(&input::rational(rational)?, circle_tol(c))?;
            Outcome::json(&json!({ "classA": a }))
        }
        Command::Decompose { a, f } => {
            let a = input::class_a(a, circle_tol(c))?;
            let f = input::coefficients(f)?;
            let d = decompose(&a, &f)?;
            let back = &(a.expand() * &d.f_tilde) + &d.p;
            Outcome::json(&json!({
                "decomposition": d,
                "reconstruction": back.max_abs_diff(&f),
            }))
        }
        Command::Norm { a, f } => {
            let a = input::class_a(a, circle_tol(c))?;
            let e = RangeElement::new(&a, input::coefficients(f)?);
            let residual = e.residual();
            Outcome::json(&json!({ "rangeElement": e, "residual": residual }))
        }
        Command::KernelCheck { a, lambda, f, n, sweep } => {
            let a = input::class_a(a, circle_tol(c))?;
            let lambda = input::scalar(lambda)?;
            let f = input::coefficients(f)?;
            if let Some(s) = sweep {
                let mut t = Table::new(&["n", "residual", "tail_bound"]);
                for n in input::sweep(s)? {
                    let r = reproducing_residual(&a, &f, lambda, n)?;
                    t.push(vec![json!(n), num(r), num(kernel_tail_bound(&a, lambda, n))]);
                }
                return Ok(Outcome::json(&json!({ "lambda": lambda }))?.with_table(t));
            }
            let eps = c.tol.unwrap_or(DEFAULT_KERNEL_EPS);
            let n = match n {
                Some(n) => *n,
                None => kernel_degree_for(&a, lambda, eps, f.degree().unwrap_or(0))?,
            };
            Outcome::json(&json!({
                "lambda": lambda,
                "n": n,
                "tailBound": kernel_tail_bound(&a, lambda, n),
                "residual": reproducing_residual(&a, &f, lambda, n)?,
            }))
        }
        Command::MultCheck { a1, a2, phi, oracle, levels } => {
            let a1 = input::class_a(a1, circle_tol(c))?;
            let a2 = input::class_a(a2, circle_tol(c))?;
            let phi = input::phi(phi)?;
            let v = mult_check(&a1, &a2, &phi);
            let mut body = serde_json::to_value(&v)?;
            if *oracle {
                let levels = input::sizes(levels)?;
                let g = growth_report(|n| numeric_mult_norm_singular(&a1, &a2, &phi, n), &levels);
                body["oracle"] = serde_json::to_value(&g)?;
            }
            let code = if v.decision == Decision::Unknown { 2 } else { 0 };
            Ok(Outcome::json(&body)?.with_code(code))
        }
        Command::OntoCheck { a1, a2, lambda, n, trials } => {
            let a1 = input::class_a(a1, circle_tol(c))?;
            let a2 = input::class_a(a2, circle_tol(c))?;
            let v = onto_check(&a1, &a2)?;
            let mut body = serde_json::to_value(&v)?;
            if let Some(l) = lambda {
                if v.decision != OntoDecision::Exist {
                    bail!("--lambda applies only when a1 = a2");
                }
                let r = crofoot_verify(&a1, input::scalar(l)?, positive(*n, "--n")?, *trials, c.seed)?;
                body["crofoot"] = serde_json::to_value(&r)?;
            }
            let code = if v.decision == OntoDecision::Unknown { 2 } else { 0 };
            Ok(Outcome::json(&body)?.with_code(code))
        }
        Command::ShiftNorm { a, n, sweep } => {
            let a = input::class_a(a, circle_tol(c))?;
            let ns = match n {
                Some(n) => vec![*n],
                None => input::sweep(sweep)?,
            };
            let r = shift_norm_sections(&a, &ns)?;
            let mut t = Table::new(&["n", "sigma_max", "closed_form", "gap"]);
            for (n, s) in &r.section_values {
                t.push(vec![json!(n), num(*s), num(r.closed_form), num(r.closed_form - s)]);
            }
            Ok(Outcome::json(&r)?.with_table(t))
        }
        Command::AdjointCheck { a, n } => {
            let a = input::class_a(a, circle_tol(c))?;
            Outcome::json(&json!({ "n": n, "residual": adjoint_residual(&a, *n)? }))
        }
        Command::Mate { rational, a, grid, normalize } => {
            let mut sym = mate_symbol(rational, a, c)?;
            let mut scale = None;
            if *normalize {
                let (s, l) = normalize_nonextreme(&sym, *grid)?;
                sym = s;
                scale = Some(l);
            }
            let m = pythagorean_mate(&sym, *grid)?;
            let zeros = winding_number(&m.b, 1.0 - 1e-3, *grid);
            Outcome::json(&json!({
                "mate": m,
                "scale": scale,
                "zerosInDisk": zeros,
            }))
        }
        Command::DecayFit { psi, sample_c, n, window } => {
            let psi = psi_from(psi, *sample_c, *n)?;
            let rule = ClassRule::default();
            let last = psi.degree().unwrap_or(0);
            let w = match window {
                Some(w) => match input::sizes(&w.replace(':', ","))?.as_slice() {
                    [a, b] => (*a, *b),
                    _ => bail!("--window expects a:b"),
                },
                None => (rule.window_start.min(last), last),
            };
            let fit = decay_fit(&psi, w)?;
            let in_class = fit.in_class(&rule);
            Outcome::json(&json!({ "fit": fit, "inClass": in_class, "rule": rule }))
        }
        Command::Probe { psi, sample_c, n, a, levels } => {
            let psi = psi_from(psi, *sample_c, *n)?;
            let symbols = if a.is_empty() {
                standard_probe_symbols()
            } else {
                a.iter()
                    .map(|s| input::class_a(s, circle_tol(c)))
                    .collect::<Result<Vec<_>>>()?
            };
            let table = universal_mult_probe(&psi, &symbols, &input::sizes(levels)?)?;
            let mut t = Table::new(&["symbol", "n", "sigma_max", "growth_ratio"]);
            for r in &table.rows {
                t.push(vec![json!(r.symbol), json!(r.n), num(r.sigma_max), num(r.growth_ratio)]);
            }
            Ok(Outcome::json(&json!({ "bounded": table.bounded, "symbols": symbols }))?.with_table(t))
        }
        Command::Convergence { study, a, a1, a2, phi, lambda, f, rational, sweep } => {
            convergence(study, a, a1, a2, phi, lambda, f, rational, sweep, c)
        }
        Command::Selftest { only } => {
            let cfg = AcceptanceConfig {
                seed: c.seed,
                tolerance: c.tol,
                only: only.clone(),
            };
            let results = acceptance::run(&cfg);
            if results.is_empty() {
                bail!("--only selected no criteria");
            }
            for r in &results {
                eprintln!("{r}");
            }
            let failed = results.iter().filter(|r| !r.passed).count();
            let mut t = Table::new(&["id", "key", "passed", "seconds", "detail"]);
            for r in &results {
                t.push(vec![json!(r.id), json!(r.key), json!(r.passed), num(r.seconds), json!(r.detail)]);
            }
            Ok(Outcome::json(&json!({ "passed": results.len() - failed, "failed": failed }))?
                .with_table(t)
                .with_code(if failed > 0 { 1 } else { 0 }))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn convergence(
    study: &str,
    a: &Option<String>,
    a1: &Option<String>,
    a2: &Option<String>,
    phi: &Option<String>,
    lambda: &Option<String>,
    f: &str,
    rational: &Option<String>,
    sweep: &Option<String>,
    c: &Common,
) -> Result<Outcome> {
    match study {
        "shift" => {
            let a = input::class_a(required(a, "a")?, circle_tol(c))?;
            let ns = input::sweep(sweep.as_deref().unwrap_or("0:2048"))?;
            let r = shift_norm_sections(&a, &ns)?;
            let mut t = Table::new(&["n", "sigma_max", "closed_form", "gap"]);
            for (n, s) in &r.section_values {
                t.push(vec![json!(n), num(*s), num(r.closed_form), num(r.closed_form - s)]);
            }
            Ok(Outcome::json(&json!({ "closedForm": shift_norm_closed(&a) }))?.with_table(t))
        }
        "kernel" => {
            let a = input::class_a(required(a, "a")?, circle_tol(c))?;
            let lambda = input::scalar(required(lambda, "lambda")?)?;
            let f = input::coefficients(f)?;
            let mut t = Table::new(&["n", "residual", "tail_bound"]);
            for n in input::sweep(sweep.as_deref().unwrap_or("0:256"))? {
                let r = reproducing_residual(&a, &f, lambda, n)?;
                t.push(vec![json!(n), num(r), num(kernel_tail_bound(&a, lambda, n))]);
            }
            Ok(Outcome::json(&json!({ "lambda": lambda }))?.with_table(t))
        }
        "mate" => {
            let sym = mate_symbol(rational, a, c)?;
            let sup = sup_norm_on_circle(&sym, DEFAULT_GRID)?;
            let sym = if sup > 1.0 { normalize_nonextreme(&sym, DEFAULT_GRID)?.0 } else { sym };
            let mut t = Table::new(&["grid", "residual", "change_vs_double"]);
            for m in input::sizes(sweep.as_deref().unwrap_or("64,256,1024,4096"))? {
                let b = pythagorean_mate(&sym, m)?;
                t.push(vec![
                    json!(m),
                    num(mate_residual(&sym, &b.b, m)),
                    num(mate_stability(&sym, m)?),
                ]);
            }
            Ok(Outcome::json(&json!({ "normalized": sup > 1.0 }))?.with_table(t))
        }
        "mult" => {
            let a1 = input::class_a(required(a1, "a1")?, circle_tol(c))?;
            let a2 = input::class_a(required(a2, "a2")?, circle_tol(c))?;
            let phi = input::phi(required(phi, "phi")?)?;
            let levels = match sweep {
                Some(s) => input::sizes(s)?,
                None => GROWTH_LEVELS.to_vec(),
            };
            let g = growth_report(|n| numeric_mult_norm_singular(&a1, &a2, &phi, n), &levels);
            let mut t = Table::new(&["n", "sigma_max", "growth_ratio"]);
            let mut prev: Option<f64> = None;
            for (n, s) in &g.levels {
                t.push(vec![json!(n), num(*s), num(prev.map_or(1.0, |p| s / p))]);
                prev = Some(*s);
            }
            Ok(Outcome::json(&json!({ "bounded": g.bounded, "maxRatio": g.max_ratio }))?.with_table(t))
        }
        other => bail!("unknown study {other:?}"),
    }
}

fn error_object(e: &anyhow::Error) -> Value {
    let kind = e
        .downcast_ref::<coanalytic_core::Error>()
        .map_or("input", |c| c.kind());
    json!({ "error": { "kind": kind, "message": format!("{e:#}") } })
}

fn main() -> ExitCode {
    let inv = Invocation::parse();
    let name = inv.command.name();
    let config = json!({ "common": &inv.common, "command": &inv.command });
    let result = run(&inv.command, &inv.common).and_then(|o| {
        let text = report::render(name, &config, &o, inv.common.format)?;
        report::emit(&text, inv.common.out.as_deref())?;
        Ok(o.code)
    });
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("{}", error_object(&e));
            ExitCode::from(1)
        }
    }
}
