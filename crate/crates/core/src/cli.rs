//! Command-line front end. Every subcommand builds a JSON document; CSV is a
//! flat rendering of the same data. Exact quantities are always "p/q"
//! strings.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::anharmonic::{solve_perturbed_eigenvalue_with, PinchConfig};
use crate::error::{Error, Result};
use crate::exact::{MultiPolynomial, Rational, RealRoot};
use crate::fermion::solve_fermion_spectrum;
use crate::hypervirial::{p_moments_and_bound, solve_q_moments, PhysicalParams};
use crate::lmethod::{density, solve_coefficients};
use crate::oracle::{diagonalize, saturation_check, FockState};
use crate::positivity::{det_sequence, detect_inconsistency, extract_spectrum};
use crate::weyl::{parse_hamiltonian, LAMBDA};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_INCONSISTENT: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "moment-spectra", version, about = "Spectra, moments and densities from moment positivity")]
pub struct RunConfig {
    #[arg(long, value_enum, default_value_t = OutputFormat::Json, global = true)]
    pub format: OutputFormat,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Eigenvalues from determinant positivity or ε-pinching.
    #[command(subcommand)]
    Spectrum(SpectrumCommand),
    /// Level-N density from the L-function recurrence.
    Density {
        #[arg(long)]
        level: u32,
        /// a:b:steps, inclusive, rational end points.
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        #[arg(long, default_value = "1")]
        hbar: Rational,
    },
    /// Perturbed ⟨q^k⟩ and the first-order Heisenberg bound.
    Hypervirial {
        #[arg(long, default_value = "1")]
        m: Rational,
        #[arg(long, default_value = "1")]
        omega: Rational,
        #[arg(long, default_value = "1")]
        hbar: Rational,
        #[arg(long, default_value_t = 6)]
        max_k: u32,
    },
    /// Single fermionic mode.
    Fermion {
        #[arg(long, default_value = "1")]
        omega: Rational,
        #[arg(long, default_value = "1")]
        hbar: Rational,
    },
    /// Truncated-basis eigenvalues of (p² + q²)/2 + εq⁴ against the ε series.
    Oracle(OracleArgs),
    /// Cauchy–Schwarz residual for f = aⁿ + a†ⁿ, g = aⁿ − a†ⁿ.
    Saturation {
        #[arg(long)]
        n: u32,
        /// Comma-separated number-basis amplitudes, e.g. "1,0.5-0.2i,i".
        #[arg(long, allow_hyphen_values = true)]
        state: String,
        #[arg(long, default_value_t = 40)]
        dim: usize,
        #[arg(long, default_value_t = 1.0)]
        hbar: f64,
    },
    /// Consistency of ⟨[H, T_{m,n}]⟩ = 0 with positivity.
    CheckConsistency {
        /// Sum of terms c*q^m*p^n.
        #[arg(long, allow_hyphen_values = true)]
        hamiltonian: String,
        #[arg(long, default_value_t = 4)]
        max_order: u32,
    },
}

#[derive(Subcommand, Debug)]
pub enum SpectrumCommand {
    Harmonic {
        #[arg(long)]
        max_blocks: u32,
        #[arg(long, default_value = "1")]
        hbar: Rational,
    },
    Anharmonic {
        #[arg(long)]
        level: u32,
        #[arg(long)]
        eps_order: u32,
        #[arg(long, default_value_t = 8)]
        max_blocks: u32,
        #[arg(long, default_value_t = 10)]
        max_extra_orders: u32,
    },
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[arg(long)]
    epsilon: f64,
    #[arg(long)]
    dim: usize,
    /// Eigenvalues reported.
    #[arg(long, default_value_t = 6)]
    count: usize,
    /// Levels compared against the exact ε series.
    #[arg(long, default_value_t = 2)]
    levels: u32,
    #[arg(long, default_value_t = 1)]
    eps_order: u32,
}

/// A rendered result: the JSON document and its CSV rows.
pub struct Artifact {
    pub json: Value,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_) | Error::InsufficientOrder { .. } => EXIT_INVALID,
        _ => EXIT_INCONSISTENT,
    }
}

/// Parses, runs and writes; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    match run(&cfg).and_then(|a| emit(&cfg, &a)) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn run(cfg: &RunConfig) -> Result<Artifact> {
    log::info!("running {:?}", cfg.command);
    match &cfg.command {
        Command::Spectrum(SpectrumCommand::Harmonic { max_blocks, hbar }) => harmonic(*max_blocks, hbar),
        Command::Spectrum(SpectrumCommand::Anharmonic { level, eps_order, max_blocks, max_extra_orders }) => {
            anharmonic(*level, *eps_order, &PinchConfig { max_blocks: *max_blocks, max_extra_orders: *max_extra_orders })
        }
        Command::Density { level, grid, hbar } => density_cmd(*level, grid, hbar),
        Command::Hypervirial { m, omega, hbar, max_k } => hypervirial(m, omega, hbar, *max_k),
        Command::Fermion { omega, hbar } => fermion(omega, hbar),
        Command::Oracle(a) => oracle(a),
        Command::Saturation { n, state, dim, hbar } => saturation(*n, state, *dim, *hbar),
        Command::CheckConsistency { hamiltonian, max_order } => consistency(hamiltonian, *max_order),
    }
}

pub fn render(format: OutputFormat, a: &Artifact) -> Result<String> {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&a.json).map_err(|e| Error::Internal(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Error::Internal(e.to_string());
            w.write_record(&a.header).map_err(io)?;
            for r in &a.rows {
                w.write_record(r).map_err(io)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Internal(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
        }
    }
}

fn emit(cfg: &RunConfig, a: &Artifact) -> Result<()> {
    let text = render(cfg.format, a)?;
    let io = |e: std::io::Error| Error::InvalidInput(format!("cannot write output: {e}"));
    match &cfg.output {
        Some(p) => std::fs::write(p, text).map_err(io),
        None => std::io::stdout().lock().write_all(text.as_bytes()).map_err(io),
    }
}

fn root_json(r: &RealRoot, scale: &Rational) -> Value {
    match r.exact() {
        Some(v) => json!((v * scale).to_string()),
        None => {
            let (lo, hi) = r.bounds();
            json!({ "lo": (&lo * scale).to_string(), "hi": (&hi * scale).to_string() })
        }
    }
}

fn root_text(r: &RealRoot, scale: &Rational) -> String {
    match root_json(r, scale) {
        Value::String(s) => s,
        v => v.to_string(),
    }
}

fn lambda_coefficients(p: &MultiPolynomial) -> Result<Vec<Rational>> {
    let u = p
        .to_univariate(LAMBDA)
        .ok_or_else(|| Error::Internal(format!("{p} is not a polynomial in λ alone")))?;
    u.coeffs()
        .iter()
        .map(|c| {
            if c.im.is_zero() {
                Ok(c.re.clone())
            } else {
                Err(Error::Internal(format!("complex coefficient {c} in a determinant")))
            }
        })
        .collect()
}

// (1/4^{n−1}) ∏_{k≤n} (λ − α_k)(λ + α_k), α_k = (2k − 1)/2
fn product_formula(n: u32) -> MultiPolynomial {
    let lam = MultiPolynomial::var(LAMBDA);
    let mut p = MultiPolynomial::rational(Rational::new(1, 4).pow(n - 1));
    for k in 1..=n as i64 {
        let a = MultiPolynomial::rational(Rational::new(2 * k - 1, 2));
        p = &p * &(&(&lam - &a) * &(&lam + &a));
    }
    p
}

fn positive(name: &str, v: &Rational) -> Result<()> {
    if v.is_positive() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{name} must be positive, got {v}")))
    }
}

fn harmonic(max_blocks: u32, hbar: &Rational) -> Result<Artifact> {
    if max_blocks == 0 {
        return Err(Error::InvalidInput("--max-blocks must be at least 1".into()));
    }
    positive("hbar", hbar)?;
    let dets = det_sequence(max_blocks)?;
    for (i, d) in dets.iter().enumerate() {
        if *d != product_formula(i as u32 + 1) {
            return Err(Error::Inconsistent(format!("d_{} departs from the product formula: {d}", i + 1)));
        }
    }
    let rep = extract_spectrum(&dets)?;
    let one = Rational::one();
    let coeffs: Vec<Vec<Rational>> = dets.iter().map(lambda_coefficients).collect::<Result<_>>()?;
    let json = json!({
        "command": "spectrum harmonic",
        "hbar": hbar,
        "max_blocks": max_blocks,
        "certified": rep.certified_eigenvalues.iter().map(|r| root_json(r, hbar)).collect::<Vec<_>>(),
        "certified_lambda_hat": rep.certified_eigenvalues.iter().map(|r| root_json(r, &one)).collect::<Vec<_>>(),
        "tail": root_json(&rep.resolution_bound, hbar),
        "feasible_continuum": rep.feasible_continuum,
        "determinants": coeffs.iter().enumerate().map(|(i, c)| json!({ "n": i + 1, "coefficients": c })).collect::<Vec<_>>(),
        "notes": rep.notes,
    });
    let mut rows = Vec::new();
    for (i, r) in rep.certified_eigenvalues.iter().enumerate() {
        rows.push(vec!["certified".into(), i.to_string(), String::new(), root_text(r, hbar)]);
    }
    rows.push(vec!["tail".into(), String::new(), String::new(), root_text(&rep.resolution_bound, hbar)]);
    for (i, c) in coeffs.iter().enumerate() {
        for (k, v) in c.iter().enumerate() {
            rows.push(vec![format!("d_{}", i + 1), (i + 1).to_string(), k.to_string(), v.to_string()]);
        }
    }
    Ok(Artifact { json, header: vec!["kind", "n", "power", "value"], rows })
}

fn anharmonic(level: u32, k: u32, pin: &PinchConfig) -> Result<Artifact> {
    let e = solve_perturbed_eigenvalue_with(level, k, pin)?;
    let json = json!({
        "command": "spectrum anharmonic",
        "level": level,
        "eps_order": k,
        "series": e.series_string(),
        "result": e,
    });
    let rows = e
        .coefficients
        .iter()
        .zip(&e.blocks_used)
        .enumerate()
        .map(|(o, (c, b))| vec![o.to_string(), c.to_string(), b.to_string()])
        .collect();
    Ok(Artifact { json, header: vec!["order", "coefficient", "blocks_used"], rows })
}

fn parse_grid(spec: &str) -> Result<Vec<Rational>> {
    let bad = || Error::InvalidInput(format!("grid `{spec}` is not a:b:steps"));
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let a: Rational = parts[0].trim().parse().map_err(|_| bad())?;
    let b: Rational = parts[1].trim().parse().map_err(|_| bad())?;
    let steps: i64 = parts[2].trim().parse().map_err(|_| bad())?;
    if steps < 1 || (steps == 1 && a != b) || b < a {
        return Err(bad());
    }
    if steps == 1 {
        return Ok(vec![a]);
    }
    let h = (&b - &a) / Rational::from(steps - 1);
    Ok((0..steps).map(|i| &a + &(&h * Rational::from(i))).collect())
}

fn density_cmd(level: u32, grid: &str, hbar: &Rational) -> Result<Artifact> {
    positive("hbar", hbar)?;
    let xs = parse_grid(grid)?;
    let sol = solve_coefficients(level)?;
    let samples = density(&sol, &xs, hbar.to_f64())?;
    let json = json!({
        "command": "density",
        "level": level,
        "hbar": hbar,
        "eigenvalue": &sol.eigenvalue * hbar,
        "l_coefficients": sol.coefficients,
        "density": {
            "variable": "xi = x/sqrt(hbar)",
            "weight": "exp(-xi^2)/sqrt(pi*hbar)",
            "coefficients": sol.density_coefficients,
        },
        "samples": samples.iter().map(|(x, p)| json!({ "x": x, "p": p })).collect::<Vec<_>>(),
    });
    let rows = samples.iter().map(|(x, p)| vec![x.to_string(), format!("{p:e}")]).collect();
    Ok(Artifact { json, header: vec!["x", "density"], rows })
}

fn hypervirial(m: &Rational, omega: &Rational, hbar: &Rational, max_k: u32) -> Result<Artifact> {
    let params = PhysicalParams::new(m.clone(), omega.clone(), hbar.clone())?;
    let t = solve_q_moments(1, max_k)?;
    let b = p_moments_and_bound()?;
    let mut moments = Vec::new();
    let mut rows = Vec::new();
    for ((k, j), v) in t.entries() {
        let s = params.apply(v).to_string();
        rows.push(vec!["q_moment".into(), k.to_string(), j.to_string(), s.clone()]);
        moments.push(json!({ "k": k, "order": j, "value": s }));
    }
    let p2: Vec<String> = b.p2.iter().map(|f| params.apply(f).to_string()).collect();
    let bound: Vec<String> = b.bound.iter().map(|f| params.apply(f).to_string()).collect();
    for (j, s) in p2.iter().enumerate() {
        rows.push(vec!["p2".into(), "2".into(), j.to_string(), s.clone()]);
    }
    for (j, s) in bound.iter().enumerate() {
        rows.push(vec!["energy_bound".into(), String::new(), j.to_string(), s.clone()]);
    }
    let json = json!({
        "command": "hypervirial",
        "params": params,
        "variables": { "energy": "E", "coupling": "eps" },
        "q_moments": moments,
        "p2": p2,
        "qp_symmetric": params.apply(&b.qp_symmetric).to_string(),
        "energy_bound": bound,
    });
    Ok(Artifact { json, header: vec!["quantity", "k", "order", "value"], rows })
}

fn fermion(omega: &Rational, hbar: &Rational) -> Result<Artifact> {
    let states = solve_fermion_spectrum(omega, hbar)?;
    let rows = states
        .iter()
        .map(|s| {
            vec![
                s.eigenvalue.to_string(),
                s.in_units_of_hbar_omega.to_string(),
                s.xi.to_string(),
                s.xi_star.to_string(),
                s.n_dagger_n.to_string(),
                s.n_n_dagger.to_string(),
                s.covariance.to_string(),
                s.saturates(hbar).to_string(),
            ]
        })
        .collect();
    let json = json!({
        "command": "fermion",
        "omega": omega,
        "hbar": hbar,
        "eigenstates": states.iter().map(|s| json!({ "state": s, "saturates": s.saturates(hbar) })).collect::<Vec<_>>(),
    });
    let header = vec![
        "eigenvalue",
        "in_units_of_hbar_omega",
        "xi",
        "xi_star",
        "n_dagger_n",
        "n_n_dagger",
        "covariance",
        "saturates",
    ];
    Ok(Artifact { json, header, rows })
}

fn oracle(a: &OracleArgs) -> Result<Artifact> {
    let s = diagonalize(a.epsilon, a.dim)?;
    let pin = PinchConfig::default();
    let mut series = Vec::new();
    for level in 0..a.levels.min(a.count as u32) {
        let e = solve_perturbed_eigenvalue_with(level, a.eps_order, &pin)?;
        let at: f64 = e.coefficients.iter().rev().fold(0.0, |acc, c| acc * a.epsilon + c.to_f64());
        series.push((e.series_string(), at));
    }
    let mut levels = Vec::new();
    let mut rows = Vec::new();
    for (n, ev) in s.eigenvalues.iter().take(a.count).enumerate() {
        let cmp = series.get(n);
        levels.push(json!({
            "level": n,
            "eigenvalue": ev,
            "series": cmp.map(|c| c.0.clone()),
            "series_value": cmp.map(|c| c.1),
            "delta": cmp.map(|c| ev - c.1),
        }));
        rows.push(vec![
            n.to_string(),
            format!("{ev:e}"),
            cmp.map(|c| c.0.clone()).unwrap_or_default(),
            cmp.map(|c| format!("{:e}", ev - c.1)).unwrap_or_default(),
        ]);
    }
    let json = json!({
        "command": "oracle",
        "epsilon": a.epsilon,
        "dim": a.dim,
        "check_dim": s.check_dim,
        "max_shift": s.max_shift,
        "converged": s.converged,
        "levels": levels,
    });
    Ok(Artifact { json, header: vec!["level", "eigenvalue", "series", "delta"], rows })
}

/// "1", "-0.5", "0.2+0.1i", "i", "-2i".
pub fn parse_complex(t: &str) -> Result<Complex64> {
    let bad = || Error::InvalidInput(format!("cannot read amplitude `{t}`"));
    let t = t.trim();
    if t.is_empty() {
        return Err(bad());
    }
    let num = |s: &str| -> Result<f64> {
        match s {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => s.parse().map_err(|_| bad()),
        }
    };
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex64::new(num(t)?, 0.0));
    };
    // split at the last sign that is not an exponent sign or the leading one
    let b = body.as_bytes();
    let cut = (1..b.len()).rev().find(|&i| (b[i] == b'+' || b[i] == b'-') && !matches!(b[i - 1], b'e' | b'E'));
    match cut {
        Some(i) => Ok(Complex64::new(num(&body[..i])?, num(&body[i..])?)),
        None => Ok(Complex64::new(0.0, num(body)?)),
    }
}

fn saturation(n: u32, state: &str, dim: usize, hbar: f64) -> Result<Artifact> {
    if !(hbar > 0.0) {
        return Err(Error::InvalidInput(format!("hbar must be positive, got {hbar}")));
    }
    let amps: Vec<Complex64> = state.split(',').map(parse_complex).collect::<Result<_>>()?;
    if amps.len() > dim {
        return Err(Error::InvalidInput(format!("{} amplitudes exceed --dim {dim}", amps.len())));
    }
    let mut v = amps;
    v.resize(dim, Complex64::new(0.0, 0.0));
    let st = FockState::new(v)?;
    let r = saturation_check(n, &st, hbar)?;
    let json = json!({ "command": "saturation", "dim": dim, "hbar": hbar, "report": r });
    let mut rows = vec![
        vec!["n".into(), n.to_string()],
        vec!["ff".into(), format!("{:e}", r.ff)],
        vec!["gg".into(), format!("{:e}", r.gg)],
        vec!["fg_abs2".into(), format!("{:e}", r.fg_abs2)],
        vec!["residual".into(), format!("{:e}", r.residual)],
    ];
    if let (Some((l, rhs)), Some(gap)) = (r.explicit, r.formulation_gap) {
        rows.push(vec!["explicit_lhs".into(), format!("{l:e}")]);
        rows.push(vec!["explicit_rhs".into(), format!("{rhs:e}")]);
        rows.push(vec!["formulation_gap".into(), format!("{gap:e}")]);
    }
    Ok(Artifact { json, header: vec!["field", "value"], rows })
}

fn consistency(src: &str, max_order: u32) -> Result<Artifact> {
    let h = parse_hamiltonian(src)?;
    if max_order == 0 {
        return Err(Error::InvalidInput("--max-order must be at least 1".into()));
    }
    // the lowest order that fails gives the most elementary witness
    let mut r = detect_inconsistency(&h, 1)?;
    for order in 2..=max_order {
        if !r.consistent {
            break;
        }
        r = detect_inconsistency(&h, order)?;
    }
    let mut rows = vec![vec!["verdict".into(), String::new(), if r.consistent { "consistent" } else { "inconsistent" }.into()]];
    for c in &r.contradictions {
        let src = c.source.map(|(m, n)| format!("T{m}_{n}")).unwrap_or_default();
        rows.push(vec!["contradiction".into(), src, c.statement.clone()]);
    }
    for l in &r.lambda_relations {
        rows.push(vec!["lambda_relation".into(), String::new(), l.clone()]);
    }
    let json = json!({ "command": "check-consistency", "hamiltonian": src, "report": r });
    Ok(Artifact { json, header: vec!["kind", "source", "detail"], rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_amplitudes() {
        let c = |re, im| Complex64::new(re, im);
        assert_eq!(parse_complex("1").unwrap(), c(1.0, 0.0));
        assert_eq!(parse_complex("0.2+0.1i").unwrap(), c(0.2, 0.1));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("1e-3-2i").unwrap(), c(1e-3, -2.0));
        assert!(parse_complex("x").is_err());
    }

    #[test]
    fn grids() {
        let g = parse_grid("-4:4:81").unwrap();
        assert_eq!(g.len(), 81);
        assert_eq!(g[1], Rational::new(-39, 10));
        assert!(parse_grid("1:0:3").is_err());
        assert!(parse_grid("0:1").is_err());
    }

    #[test]
    fn product_formula_first() {
        assert_eq!(product_formula(1), det_sequence(1).unwrap()[0]);
    }
}
