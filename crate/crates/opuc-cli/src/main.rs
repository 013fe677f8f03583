//! Command-line front end for the circle-measure toolkit: zero listings,
//! reference tables, verification suites, chain-sequence data, and figure
//! point sets. All CSV output is deterministic: fixed orderings, fixed
//! seeds, six-decimal rounding with the negative-zero sign dropped.
//!
//! Exit codes: 0 success, 1 verification failure, 2 configuration error,
//! 3 numerical non-convergence.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use opuc_core::cpoly::CPoly;
use opuc_core::kernels::{
    cd_kernel, check_norm_inequalities, diag_gap_bound, eval_grid_16, lubinsky_gap,
    subreproducing_check, Method,
};
use opuc_core::marcellan::{marcellan_a_seq, quasi_family, verify_m2, with_tilde, QuasiFamily};
use opuc_core::measure::{companion_tilde, ASeqHint, MeasureSpec};
use opuc_core::popuc_chain::{chain_data, popuc, popuc_lc, verify_r_consistency};
use opuc_core::szego::{family_from_measure, OpucFamily};
use opuc_core::{Error, InequalityReport};

const MAX_DEGREE: usize = 64;

#[derive(Parser)]
#[command(name = "opuc", version, about = "Circle-measure polynomial toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Zeros of a base, quasi, or boundary-parameter polynomial.
    Zeros(ZerosArgs),
    /// Run a verification suite; exits 1 when any report fails.
    Verify(VerifyArgs),
    /// Emit a reference zero table as CSV.
    Table(TableArgs),
    /// Emit chain-sequence data as JSON.
    Chain(ChainArgs),
    /// Emit figure point sets as CSV (series,re,im).
    PlotData(PlotArgs),
}

#[derive(Args)]
struct FamilyArgs {
    /// Named measure preset: lebesgue, lebesgue-norm, bernstein:<a>,
    /// christoffel-1, christoffel-i, rational-example.
    #[arg(long)]
    preset: Option<String>,
    /// Inline JSON measure spec (alternative to --preset).
    #[arg(long)]
    spec: Option<String>,
    /// Polynomial degree (<= 64).
    #[arg(long, default_value_t = 6)]
    n: usize,
}

#[derive(Args)]
struct ZerosArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Quasi-polynomial a-rule: marcellan, constant:<c>, table1a,
    /// constant-seq:n/(n+1), constant-seq:(n/(n+1))i, or an explicit
    /// comma-separated list a_1,...,a_N.
    #[arg(long = "a", alias = "quasi")]
    a_rule: Option<String>,
    /// Para-orthogonal polynomial at --zeta instead of the base polynomial.
    #[arg(long)]
    popuc: bool,
    /// Boundary point for --popuc (default 1).
    #[arg(long, default_value = "1")]
    zeta: String,
    /// The combination z^n - 1 - gamma(z^{n-1} - 1); needs --gamma, no preset.
    #[arg(long = "popuc-lc")]
    popuc_lc: bool,
    /// Combination parameter for --popuc-lc.
    #[arg(long)]
    gamma: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Suite: norms, lubinsky, subrepro, diaggap, m2, cdformula, chain.
    #[arg(long)]
    suite: String,
    /// a-rule for the suites built on a quasi pair (default marcellan).
    #[arg(long = "a", alias = "quasi", default_value = "marcellan")]
    a_rule: String,
    /// Companion measure override (preset name or JSON spec).
    #[arg(long)]
    tilde: Option<String>,
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct TableArgs {
    /// Which table: 1, 2, or 3.
    which: u8,
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct ChainArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// a-rule for the quasi pair (default marcellan).
    #[arg(long = "a", alias = "quasi", default_value = "marcellan")]
    a_rule: String,
    /// Companion measure override (preset name or JSON spec).
    #[arg(long)]
    tilde: Option<String>,
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct PlotArgs {
    /// Figure number: 1..=4.
    #[arg(long)]
    figure: u8,
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Failure with the process exit code it maps to.
struct Fail {
    code: i32,
    msg: String,
}

type CliResult<T> = Result<T, Fail>;

fn config_err<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(Fail {
        code: 2,
        msg: msg.into(),
    })
}

fn from_core(e: Error) -> Fail {
    let code = match e {
        Error::NonConvergence { .. } => 3,
        _ => 2,
    };
    Fail {
        code,
        msg: e.to_string(),
    }
}

fn main() {
    let cli = Cli::parse();
    let outcome = match cli.cmd {
        Cmd::Zeros(args) => cmd_zeros(args),
        Cmd::Verify(args) => cmd_verify(args),
        Cmd::Table(args) => cmd_table(args),
        Cmd::Chain(args) => cmd_chain(args),
        Cmd::PlotData(args) => cmd_plot_data(args),
    };
    match outcome {
        Ok(code) => std::process::exit(code),
        Err(fail) => {
            eprintln!("error: {}", fail.msg);
            std::process::exit(fail.code);
        }
    }
}

// ---- configuration plumbing -------------------------------------------------

fn quad_override() -> CliResult<Option<usize>> {
    match std::env::var("OPUC_QUADN") {
        Ok(raw) => match raw.trim().parse::<usize>() {
            Ok(n) => Ok(Some(n)),
            Err(_) => config_err(format!("OPUC_QUADN must be an unsigned integer, got {raw:?}")),
        },
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => config_err(format!("OPUC_QUADN: {e}")),
    }
}

fn parse_spec_str(s: &str) -> CliResult<MeasureSpec> {
    let t = s.trim();
    if t.starts_with('{') {
        let spec: MeasureSpec = match serde_json::from_str(t) {
            Ok(spec) => spec,
            Err(e) => return config_err(format!("bad measure JSON: {e}")),
        };
        spec.validate().map_err(from_core)?;
        return Ok(spec);
    }
    parse_preset(t)
}

fn parse_preset(p: &str) -> CliResult<MeasureSpec> {
    let spec = match p {
        "lebesgue" => MeasureSpec::Lebesgue { normalized: false },
        "lebesgue-norm" => MeasureSpec::Lebesgue { normalized: true },
        "christoffel-1" => MeasureSpec::ChristoffelLebesgue {
            gamma: Complex64::new(1.0, 0.0),
        },
        "christoffel-i" => MeasureSpec::ChristoffelLebesgue {
            gamma: Complex64::new(0.0, 1.0),
        },
        "rational-example" => MeasureSpec::RationalMarcellan {
            k: 1.0,
            beta: Complex64::new(0.8, 0.0),
            chi1: Complex64::new(0.3, 0.0),
            chi2: Complex64::new(0.0, -0.4),
        },
        _ => {
            if let Some(rest) = p.strip_prefix("bernstein:") {
                let a = parse_complex(rest)?;
                let spec = MeasureSpec::BernsteinSzego { a };
                spec.validate().map_err(from_core)?;
                return Ok(spec);
            }
            return config_err(format!(
                "unknown preset {p:?}; expected lebesgue, lebesgue-norm, bernstein:<a>, \
                 christoffel-1, christoffel-i, or rational-example"
            ));
        }
    };
    Ok(spec)
}

fn resolve_spec(fam: &FamilyArgs) -> CliResult<MeasureSpec> {
    match (&fam.preset, &fam.spec) {
        (Some(_), Some(_)) => config_err("pass either --preset or --spec, not both"),
        (Some(p), None) => parse_preset(p),
        (None, Some(j)) => parse_spec_str(j),
        (None, None) => config_err("a measure is required: pass --preset or --spec"),
    }
}

fn check_degree(n: usize) -> CliResult<()> {
    if n > MAX_DEGREE {
        return config_err(format!("degree {n} exceeds the supported cap {MAX_DEGREE}"));
    }
    Ok(())
}

/// Parses a complex literal: decimal or fraction parts, optional trailing
/// `i`, e.g. `0.4`, `-1.16`, `1.25i`, `(5/4)i`, `1/6-i`, `0.3+0.2i`, `-i`.
fn parse_complex(s: &str) -> CliResult<Complex64> {
    let t: String = s.trim().chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return config_err("empty complex literal");
    }
    // Find a top-level +/- separating real and imaginary parts.
    let bytes = t.as_bytes();
    let mut depth = 0usize;
    let mut split = None;
    for (k, &b) in bytes.iter().enumerate().skip(1) {
        match b {
            b'(' => depth += 1,
            b')' => depth = depth.saturating_sub(1),
            b'+' | b'-' if depth == 0 => {
                let prev = bytes[k - 1];
                if prev != b'e' && prev != b'E' && prev != b'(' && prev != b'/' {
                    split = Some(k);
                }
            }
            _ => {}
        }
    }
    let (re_tok, im_tok) = match split {
        Some(k) => (&t[..k], &t[k..]),
        None => {
            if t.ends_with('i') || t.ends_with('I') {
                ("", t.as_str())
            } else {
                (t.as_str(), "")
            }
        }
    };
    let re = if re_tok.is_empty() {
        0.0
    } else {
        parse_real(re_tok).ok_or_else(|| Fail {
            code: 2,
            msg: format!("bad real part in complex literal {s:?}"),
        })?
    };
    let im = if im_tok.is_empty() {
        0.0
    } else {
        let body = &im_tok[..im_tok.len() - 1];
        match body {
            "" | "+" => 1.0,
            "-" => -1.0,
            _ => parse_real(body).ok_or_else(|| Fail {
                code: 2,
                msg: format!("bad imaginary part in complex literal {s:?}"),
            })?,
        }
    };
    if !im_tok.is_empty() && !(im_tok.ends_with('i') || im_tok.ends_with('I')) {
        return config_err(format!("imaginary part must end in 'i' in {s:?}"));
    }
    Ok(Complex64::new(re, im))
}

/// A decimal number or a fraction `p/q`, optionally parenthesized.
fn parse_real(tok: &str) -> Option<f64> {
    let mut t = tok;
    let mut sign = 1.0;
    if let Some(rest) = t.strip_prefix('-') {
        sign = -1.0;
        t = rest;
    } else if let Some(rest) = t.strip_prefix('+') {
        t = rest;
    }
    let t = t
        .strip_prefix('(')
        .and_then(|x| x.strip_suffix(')'))
        .unwrap_or(t);
    if let Some((p, q)) = t.split_once('/') {
        let q: f64 = q.parse().ok()?;
        if q == 0.0 {
            return None;
        }
        let p: f64 = p.parse().ok()?;
        Some(sign * p / q)
    } else {
        t.parse::<f64>().ok().map(|v| sign * v)
    }
}

// ---- a-sequence rules --------------------------------------------------------

enum ARule {
    Marcellan,
    Constant(Complex64),
    Table1A,
    Ratio(Complex64),
    List(Vec<Complex64>),
}

fn parse_a_rule(s: &str) -> CliResult<ARule> {
    let t = s.trim();
    match t {
        "marcellan" => return Ok(ARule::Marcellan),
        "table1a" => return Ok(ARule::Table1A),
        _ => {}
    }
    if let Some(body) = t.strip_prefix("constant-seq:") {
        return match body {
            "n/(n+1)" => Ok(ARule::Ratio(Complex64::new(1.0, 0.0))),
            "(n/(n+1))i" => Ok(ARule::Ratio(Complex64::new(0.0, 1.0))),
            _ => config_err(format!(
                "unsupported constant-seq rule {body:?}; known: n/(n+1), (n/(n+1))i"
            )),
        };
    }
    if let Some(body) = t.strip_prefix("constant:") {
        return Ok(ARule::Constant(parse_complex(body)?));
    }
    if t.contains(',') {
        let vals = t
            .split(',')
            .map(parse_complex)
            .collect::<CliResult<Vec<_>>>()?;
        return Ok(ARule::List(vals));
    }
    config_err(format!(
        "unknown a-rule {t:?}; expected marcellan, constant:<c>, table1a, \
         constant-seq:..., or a comma-separated list"
    ))
}

fn a_values(rule: &ARule, base: &OpucFamily) -> CliResult<Vec<Complex64>> {
    let n = base.n_max;
    match rule {
        ARule::Marcellan => marcellan_a_seq(base).map_err(from_core),
        ARule::Constant(c) => Ok(vec![*c; n]),
        ARule::Table1A => Ok((1..=n)
            .map(|k| Complex64::new(1.0 / (k as f64 + 1.0), -1.0))
            .collect()),
        ARule::Ratio(f) => Ok((1..=n)
            .map(|k| f * (k as f64 / (k as f64 + 1.0)))
            .collect()),
        ARule::List(vals) => {
            if vals.len() != n {
                return config_err(format!(
                    "a-list has {} entries, the degree-{n} family needs exactly {n}",
                    vals.len()
                ));
            }
            Ok(vals.clone())
        }
    }
}

fn a_hint(rule: &ARule) -> Option<ASeqHint> {
    match rule {
        ARule::Marcellan => Some(ASeqHint::Marcellan),
        ARule::Constant(c) => Some(ASeqHint::Constant(*c)),
        ARule::Ratio(f) => Some(ASeqHint::RatioTimes(*f)),
        ARule::Table1A | ARule::List(_) => None,
    }
}

/// Base family, quasi family with companion attached, companion family.
fn build_pair(
    spec: &MeasureSpec,
    n: usize,
    quad: Option<usize>,
    rule: &ARule,
    tilde_arg: &Option<String>,
) -> CliResult<(OpucFamily, QuasiFamily, OpucFamily)> {
    let base = family_from_measure(spec, n, quad).map_err(from_core)?;
    let a = a_values(rule, &base)?;
    let tilde_spec = match tilde_arg {
        Some(t) => parse_spec_str(t)?,
        None => {
            let hint = match a_hint(rule) {
                Some(h) => h,
                None => {
                    return config_err(
                        "this a-rule has no companion measure rule; pass --tilde explicitly",
                    )
                }
            };
            companion_tilde(spec, &hint).map_err(from_core)?
        }
    };
    let tilde = family_from_measure(&tilde_spec, n, quad).map_err(from_core)?;
    let qf = quasi_family(&base, &a).map_err(from_core)?;
    let qf = with_tilde(qf, tilde_spec).map_err(from_core)?;
    Ok((base, qf, tilde))
}

// ---- formatting ----------------------------------------------------------------

/// Six decimals with the negative-zero sign dropped.
fn f6(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

/// Six-decimal complex cell, always signed imaginary part, no commas.
fn c6(z: Complex64) -> String {
    let s = format!("{:+.6}", z.im);
    let im = if s == "-0.000000" { "+0.000000".into() } else { s };
    format!("{}{}i", f6(z.re), im)
}

fn emit(out: &Option<String>, content: &str) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, content).map_err(|e| Fail {
            code: 2,
            msg: format!("cannot write {path}: {e}"),
        }),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

// ---- zeros -----------------------------------------------------------------------

fn cmd_zeros(args: ZerosArgs) -> CliResult<i32> {
    let n = args.family.n;
    check_degree(n)?;
    let quad = quad_override()?;

    let poly: CPoly = if args.popuc_lc {
        let gamma = match &args.gamma {
            Some(g) => parse_complex(g)?,
            None => return config_err("--popuc-lc needs --gamma"),
        };
        if n < 2 {
            return config_err("--popuc-lc needs n >= 2");
        }
        popuc_lc(n, gamma)
    } else {
        let spec = resolve_spec(&args.family)?;
        let fam = family_from_measure(&spec, n.max(1), quad).map_err(from_core)?;
        if args.popuc {
            if n < 1 {
                return config_err("--popuc needs n >= 1");
            }
            let zeta = parse_complex(&args.zeta)?;
            popuc(&fam, n, zeta).map_err(from_core)?
        } else if let Some(rule) = &args.a_rule {
            let rule = parse_a_rule(rule)?;
            let a = a_values(&rule, &fam)?;
            let qf = quasi_family(&fam, &a).map_err(from_core)?;
            qf.qphi[n].clone()
        } else {
            fam.phi[n].clone()
        }
    };

    let roots = poly.roots().map_err(from_core)?;
    let content = match args.format {
        Format::Csv => {
            let mut s = String::from("re,im\n");
            for z in &roots {
                let _ = writeln!(s, "{},{}", f6(z.re), f6(z.im));
            }
            s
        }
        Format::Json => {
            let pairs: Vec<[f64; 2]> = roots.iter().map(|z| [z.re, z.im]).collect();
            let mut s = serde_json::to_string_pretty(&serde_json::json!({ "zeros": pairs }))
                .expect("json");
            s.push('\n');
            s
        }
    };
    emit(&args.out, &content)?;
    Ok(0)
}

// ---- verify ----------------------------------------------------------------------

struct SplitMix64(u64);

impl SplitMix64 {
    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    fn in_disk(&mut self, radius: f64) -> Complex64 {
        let rho = radius * self.next_f64().sqrt();
        let theta = std::f64::consts::TAU * self.next_f64();
        Complex64::from_polar(rho, theta)
    }
}

fn cmd_verify(args: VerifyArgs) -> CliResult<i32> {
    let n = args.family.n;
    check_degree(n)?;
    if n < 1 {
        return config_err("verify needs n >= 1");
    }
    let quad = quad_override()?;
    let spec = resolve_spec(&args.family)?;
    let rule = parse_a_rule(&args.a_rule)?;

    let (value, all_pass) = match args.suite.as_str() {
        "norms" => {
            let (base, qf, _) = build_pair(&spec, n, quad, &rule, &args.tilde)?;
            let mut reports = Vec::new();
            for k in 1..=n {
                reports.extend(check_norm_inequalities(&base, &qf, k).map_err(from_core)?);
            }
            report_array(reports)
        }
        "lubinsky" => {
            let (base, qf, tilde) = build_pair(&spec, n, quad, &rule, &args.tilde)?;
            let a: Vec<Complex64> = qf.a[1..].to_vec();
            let grid = eval_grid_16();
            let mut reports = Vec::new();
            for k in 1..=n {
                for (i, &z) in grid.iter().enumerate().step_by(4) {
                    let w = grid[(i + 5) % grid.len()];
                    let (rep, _) = lubinsky_gap(&base, &tilde, &a, k, z, w).map_err(from_core)?;
                    reports.push(rep);
                }
            }
            report_array(reports)
        }
        "subrepro" => {
            let fam = family_from_measure(&spec, n, quad).map_err(from_core)?;
            let mut reports = Vec::new();
            for (p, w) in subrepro_fixtures(&spec, &fam)? {
                reports.push(subreproducing_check(&fam, &p, w).map_err(from_core)?);
            }
            report_array(reports)
        }
        "diaggap" => {
            let (base, qf, _) = build_pair(&spec, n, quad, &rule, &args.tilde)?;
            let mut reports = Vec::new();
            for k in 0..8 {
                let z = Complex64::from_polar(1.0, 0.2 + 0.74 * k as f64);
                let (first, second) = diag_gap_bound(&base, &qf, n, z).map_err(from_core)?;
                reports.push(first);
                if let Some(second) = second {
                    reports.push(second);
                }
            }
            report_array(reports)
        }
        "m2" => {
            let (_, qf, _) = build_pair(&spec, n, quad, &rule, &args.tilde)?;
            let rep = verify_m2(&qf, quad, None).map_err(from_core)?;
            let pass = rep.pass();
            (serde_json::to_value(&rep).expect("json"), pass)
        }
        "cdformula" => {
            let fam = family_from_measure(&spec, n, quad).map_err(from_core)?;
            let mut rng = SplitMix64(0x0BAD_5EED_CAFE_F00D);
            let mut worst = 0.0_f64;
            for _ in 0..100 {
                let z = rng.in_disk(0.95);
                let w = rng.in_disk(0.95);
                for k in 1..=n {
                    let s = cd_kernel(&fam, k, z, w, Method::Sum).map_err(from_core)?;
                    let f = cd_kernel(&fam, k, z, w, Method::Formula).map_err(from_core)?;
                    worst = worst.max((s - f).norm() / s.norm().max(1.0));
                }
            }
            let rep = InequalityReport::new(
                format!("cd-formula n<={n} 100 pairs"),
                worst,
                1e-9,
            );
            report_array(vec![rep])
        }
        "chain" => {
            if n < 2 {
                return config_err("the chain suite needs n >= 2");
            }
            let (base, qf, tilde) = build_pair(&spec, n, quad, &rule, &args.tilde)?;
            let a: Vec<Complex64> = qf.a[1..].to_vec();
            let chain = chain_data(&base, &a, &tilde, n).map_err(from_core)?;
            let mut reports = Vec::new();
            for k in 1..=n {
                reports.push(InequalityReport::new(
                    format!("chain-identity n={k}"),
                    (chain.c[k] - (1.0 - chain.g[k - 1]) * chain.g[k]).abs(),
                    1e-10,
                ));
            }
            let ttrr = verify_r_consistency(&base, &a, &tilde, n).map_err(from_core)?;
            reports.push(InequalityReport::new(
                "ttrr-consistency".to_string(),
                ttrr.max_dev,
                1e-7,
            ));
            let pass = reports.iter().all(|r| r.pass);
            let value = serde_json::json!({
                "degenerate": chain.degenerate,
                "violations": chain.violations,
                "reports": serde_json::to_value(&reports).expect("json"),
            });
            (value, pass)
        }
        other => {
            return config_err(format!(
                "unknown suite {other:?}; expected norms, lubinsky, subrepro, diaggap, \
                 m2, cdformula, or chain"
            ))
        }
    };

    let mut content = serde_json::to_string_pretty(&value).expect("json");
    content.push('\n');
    emit(&args.out, &content)?;
    Ok(if all_pass { 0 } else { 1 })
}

fn report_array(reports: Vec<InequalityReport>) -> (serde_json::Value, bool) {
    let pass = reports.iter().all(|r| r.pass);
    (serde_json::to_value(&reports).expect("json"), pass)
}

/// Admissible fixtures for the sub-reproducing check: polynomials with
/// nonnegative coefficients in the monic basis, evaluated where the basis is
/// real and nonnegative.
fn subrepro_fixtures(
    spec: &MeasureSpec,
    fam: &OpucFamily,
) -> CliResult<Vec<(CPoly, Complex64)>> {
    let one = Complex64::new(1.0, 0.0);
    match spec {
        MeasureSpec::Lebesgue { .. } => {
            let p = CPoly::new(vec![one, one, one]);
            Ok(vec![
                (p.clone(), Complex64::new(0.7, 0.0)),
                (p, Complex64::new(0.3, 0.0)),
            ])
        }
        MeasureSpec::ChristoffelLebesgue { gamma } if (gamma - one).norm() < 1e-12 => {
            let mut p = CPoly::zero();
            for (j, phi) in fam.phi.iter().enumerate() {
                p = p.add(&phi.scale(Complex64::new(1.0 / (j as f64 + 1.0), 0.0)));
            }
            Ok(vec![
                (p.clone(), Complex64::new(0.3, 0.0)),
                (p, Complex64::new(0.8, 0.0)),
            ])
        }
        MeasureSpec::BernsteinSzego { a } if a.im == 0.0 && a.re < 0.6 => {
            let p = CPoly::new(vec![one, Complex64::new(0.5, 0.0)]);
            Ok(vec![(p, Complex64::new(0.6, 0.0))])
        }
        _ => config_err(
            "no admissible sub-reproducing fixture for this measure; supported: \
             lebesgue, lebesgue-norm, christoffel-1, bernstein:<a> with real a < 0.6",
        ),
    }
}

// ---- tables ---------------------------------------------------------------------

fn sorted_cells(p: &CPoly) -> CliResult<Vec<String>> {
    let roots = p.roots().map_err(from_core)?;
    Ok(roots.iter().map(|z| c6(*z)).collect())
}

fn columns_to_csv(headers: &[&str], cols: &[Vec<String>]) -> String {
    let rows = cols.iter().map(Vec::len).max().unwrap_or(0);
    let mut s = headers.join(",");
    s.push('\n');
    for r in 0..rows {
        let line: Vec<&str> = cols
            .iter()
            .map(|col| col.get(r).map(String::as_str).unwrap_or(""))
            .collect();
        s.push_str(&line.join(","));
        s.push('\n');
    }
    s
}

fn quasi_with(fam: &OpucFamily, rule: impl Fn(usize) -> Complex64) -> CliResult<QuasiFamily> {
    let a: Vec<Complex64> = (1..=fam.n_max).map(rule).collect();
    quasi_family(fam, &a).map_err(from_core)
}

fn table1(quad: Option<usize>) -> CliResult<String> {
    let spec = MeasureSpec::ChristoffelLebesgue {
        gamma: Complex64::new(1.0, 0.0),
    };
    let fam = family_from_measure(&spec, 7, quad).map_err(from_core)?;
    let q_shift = quasi_with(&fam, |k| Complex64::new(1.0 / (k as f64 + 1.0), -1.0))?;
    let q_const = quasi_with(&fam, |_| Complex64::new(-1.16, 0.0))?;
    let q_ratio = quasi_with(&fam, |k| Complex64::new(k as f64 / (k as f64 + 1.0), 0.0))?;
    let cols = vec![
        sorted_cells(&fam.phi[5])?,
        sorted_cells(&fam.phi[6])?,
        sorted_cells(&q_shift.qphi[5])?,
        sorted_cells(&q_const.qphi[6])?,
        sorted_cells(&q_ratio.qphi[5])?,
    ];
    Ok(columns_to_csv(
        &[
            "phi5",
            "phi6",
            "tphi5[a=1/(n+1)-i]",
            "tphi6[a=-1.16]",
            "tphi5[a=n/(n+1)]",
        ],
        &cols,
    ))
}

fn table2(quad: Option<usize>) -> CliResult<String> {
    let spec = MeasureSpec::ChristoffelLebesgue {
        gamma: Complex64::new(0.0, 1.0),
    };
    let fam = family_from_measure(&spec, 6, quad).map_err(from_core)?;
    let q_const_i = quasi_with(&fam, |_| Complex64::new(0.0, 1.25))?;
    let q_const = quasi_with(&fam, |_| Complex64::new(1.1, 0.0))?;
    let q_ratio = quasi_with(&fam, |k| Complex64::new(0.0, k as f64 / (k as f64 + 1.0)))?;
    let cols = vec![
        sorted_cells(&fam.phi[4])?,
        sorted_cells(&fam.phi[5])?,
        sorted_cells(&q_const_i.qphi[4])?,
        sorted_cells(&q_const.qphi[5])?,
        sorted_cells(&q_ratio.qphi[4])?,
    ];
    Ok(columns_to_csv(
        &[
            "phi4",
            "phi5",
            "tphi4[a=(5/4)i]",
            "tphi5[a=1.1]",
            "tphi4[a=(n/(n+1))i]",
        ],
        &cols,
    ))
}

fn table3() -> CliResult<String> {
    let cases: [(usize, f64); 4] = [(6, 0.9), (7, 0.2), (6, 2.0), (7, 9.1)];
    let mut cols = Vec::new();
    for (n, gamma) in cases {
        cols.push(sorted_cells(&popuc_lc(n, Complex64::new(gamma, 0.0)))?);
    }
    Ok(columns_to_csv(
        &[
            "lc[n=6;gamma=0.9]",
            "lc[n=7;gamma=0.2]",
            "lc[n=6;gamma=2]",
            "lc[n=7;gamma=9.1]",
        ],
        &cols,
    ))
}

fn cmd_table(args: TableArgs) -> CliResult<i32> {
    let quad = quad_override()?;
    let content = match args.which {
        1 => table1(quad)?,
        2 => table2(quad)?,
        3 => table3()?,
        other => return config_err(format!("no table {other}; expected 1, 2, or 3")),
    };
    emit(&args.out, &content)?;
    Ok(0)
}

// ---- chain -----------------------------------------------------------------------

fn cmd_chain(args: ChainArgs) -> CliResult<i32> {
    let n = args.family.n;
    check_degree(n)?;
    if n < 2 {
        return config_err("chain needs n >= 2");
    }
    let quad = quad_override()?;
    let spec = resolve_spec(&args.family)?;
    let rule = parse_a_rule(&args.a_rule)?;
    let (base, qf, tilde) = build_pair(&spec, n, quad, &rule, &args.tilde)?;
    let a: Vec<Complex64> = qf.a[1..].to_vec();
    let chain = chain_data(&base, &a, &tilde, n).map_err(from_core)?;
    let value = serde_json::json!({
        "t": chain.t,
        "c": chain.c,
        "g": chain.g,
        "tau": [chain.tau.re, chain.tau.im],
        "degenerate": chain.degenerate,
    });
    let mut content = serde_json::to_string_pretty(&value).expect("json");
    content.push('\n');
    emit(&args.out, &content)?;
    Ok(0)
}

// ---- plot data -------------------------------------------------------------------

fn push_series(s: &mut String, name: &str, roots: &[Complex64]) {
    for z in roots {
        let _ = writeln!(s, "{name},{},{}", f6(z.re), f6(z.im));
    }
}

fn plot_zero_sets(labels: &[&str], polys: &[&CPoly]) -> CliResult<String> {
    let mut s = String::from("series,re,im\n");
    for (name, poly) in labels.iter().zip(polys) {
        let roots = poly.roots().map_err(from_core)?;
        push_series(&mut s, name, &roots);
    }
    Ok(s)
}

/// The geometric partial sum 1 + z + ... + z^n.
fn geometric_sum(n: usize) -> CPoly {
    CPoly::new(vec![Complex64::new(1.0, 0.0); n + 1])
}

/// z^n - 1.
fn power_minus_one(n: usize) -> CPoly {
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
    coeffs[0] = Complex64::new(-1.0, 0.0);
    coeffs[n] = Complex64::new(1.0, 0.0);
    CPoly::new(coeffs)
}

fn cmd_plot_data(args: PlotArgs) -> CliResult<i32> {
    let quad = quad_override()?;
    let content = match args.figure {
        1 => {
            let spec = MeasureSpec::ChristoffelLebesgue {
                gamma: Complex64::new(1.0, 0.0),
            };
            let fam = family_from_measure(&spec, 7, quad).map_err(from_core)?;
            let q_shift = quasi_with(&fam, |k| Complex64::new(1.0 / (k as f64 + 1.0), -1.0))?;
            let q_const = quasi_with(&fam, |_| Complex64::new(-1.16, 0.0))?;
            let q_ratio =
                quasi_with(&fam, |k| Complex64::new(k as f64 / (k as f64 + 1.0), 0.0))?;
            plot_zero_sets(
                &[
                    "phi5",
                    "phi6",
                    "tphi5[a=1/(n+1)-i]",
                    "tphi6[a=-1.16]",
                    "tphi5[a=n/(n+1)]",
                ],
                &[
                    &fam.phi[5],
                    &fam.phi[6],
                    &q_shift.qphi[5],
                    &q_const.qphi[6],
                    &q_ratio.qphi[5],
                ],
            )?
        }
        2 => {
            let spec = MeasureSpec::ChristoffelLebesgue {
                gamma: Complex64::new(0.0, 1.0),
            };
            let fam = family_from_measure(&spec, 6, quad).map_err(from_core)?;
            let q_const_i = quasi_with(&fam, |_| Complex64::new(0.0, 1.25))?;
            let q_const = quasi_with(&fam, |_| Complex64::new(1.1, 0.0))?;
            let q_ratio =
                quasi_with(&fam, |k| Complex64::new(0.0, k as f64 / (k as f64 + 1.0)))?;
            plot_zero_sets(
                &[
                    "phi4",
                    "phi5",
                    "tphi4[a=(5/4)i]",
                    "tphi5[a=1.1]",
                    "tphi4[a=(n/(n+1))i]",
                ],
                &[
                    &fam.phi[4],
                    &fam.phi[5],
                    &q_const_i.qphi[4],
                    &q_const.qphi[5],
                    &q_ratio.qphi[4],
                ],
            )?
        }
        3 => plot_zero_sets(
            &["lc[n=6;gamma=0.9]", "popuc[n=6]", "rsum[n=6]"],
            &[
                &popuc_lc(6, Complex64::new(0.9, 0.0)),
                &power_minus_one(6),
                &geometric_sum(6),
            ],
        )?,
        4 => plot_zero_sets(
            &["lc[n=7;gamma=0.2]", "popuc[n=7]", "rsum[n=7]"],
            &[
                &popuc_lc(7, Complex64::new(0.2, 0.0)),
                &power_minus_one(7),
                &geometric_sum(7),
            ],
        )?,
        other => return config_err(format!("no figure {other}; expected 1..=4")),
    };
    emit(&args.out, &content)?;
    Ok(0)
}
