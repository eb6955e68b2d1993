//! Command-line driver: `compute`, `verify` and `selftest`.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::Error;
use crate::linalg::Ring;
use crate::opalg::{epsilon_op, eta_op, OperatorR};
use crate::perm::Perm;
use crate::relators::{
    check_lemma11, check_lemma12, check_lemma14, k_delta_form, k_on_letters, prime_of, proof_replay, psi_xq_word,
    smoothing, theorem1_verify, RelatorContext, RelatorParams, Theorem1Status,
};
use crate::series::t_series;
use crate::suites::{self, Profile, SuiteReport};

const TARGETS: &str = "\
Verify targets and the statements they check:
  lemma2        x_{pi1}..x_{pir} = x1..xr + sum of words with one bracket [y_i,y_{i+1}]
  lemma4        psi_{x^m}(x1..xr) by multilinear projection = ordered-partition sum
  lemma6        psi_{X^m} o psi_{X^n} = psi_{X^mn}, checked on sigma_r
  cor7          the operator algebra is commutative, checked on sigma_r(psi_{x^a})
  lemma8        the epsilon_n = psi_{z^n/n!} are orthogonal idempotents
  lemma9        the series t_i have coefficients with denominators prime to p
  cor10         sigma_1(eta) = 1 and sigma_n(eta) has coefficient sum 0 for n != 1 mod (p-1)
  lemma11       delta(psi_{X^q}(x1..xn)) = K_n(x2,..,xn,x1) mod I_{n-1}
  lemma12       psi_{X^q}(x1..xn) = K_n(x2,..,xn,x1) mod Gamma_{n-1} (with smoothing)
  lemma14       K_n(x_pi) - K_n(x) in I_{n-1}, psi_{X^q}(x_pi) - psi_{X^q}(x) in Gamma_{n-1}
  theorem1      K_n in I_{n-1} when n != 1 mod (p-1)
  proof-replay  steps (a)-(g) of the integral argument for theorem1
  all           every suite at the selected profile

Exit codes: 0 verified, 1 refuted or failed, 2 usage error.
Env: WALL_RELATORS_THREADS caps worker threads.";

#[derive(Parser, Debug)]
#[command(name = "wall-relators", version, about = "Exact computations with multilinear Burnside relators K_n", after_help = TARGETS)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print an exact object.
    Compute {
        #[arg(value_enum)]
        kind: ComputeKind,
        #[command(flatten)]
        opts: Opts,
    },
    /// Check a statement and print its certificate.
    Verify {
        #[arg(value_enum)]
        target: VerifyTarget,
        #[command(flatten)]
        opts: Opts,
    },
    /// Run every suite and print a scoreboard.
    Selftest {
        #[command(flatten)]
        opts: Opts,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComputeKind {
    /// K_n(x1,..,xn)
    Kn,
    /// delta(psi_{X^q}(x1..xn))
    KnDelta,
    /// K_n reduced mod p
    KnModP,
    /// psi_{X^q}(x1..xn), or psi_{x^m}(x1..xn) with --m
    Psi,
    /// sigma_n(eta)
    Eta,
    /// sigma_n(epsilon_m)
    Epsilon,
    /// t_i for the prime p (i from --m, default 1)
    TSeries,
    /// z_n from the smoothing construction
    Smoothing,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyTarget {
    Lemma2,
    Lemma4,
    Lemma6,
    Cor7,
    Lemma8,
    Lemma9,
    Cor10,
    Lemma11,
    Lemma12,
    Lemma14,
    Theorem1,
    ProofReplay,
    All,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingArg {
    #[value(name = "Z")]
    Z,
    #[value(name = "Q")]
    Q,
    #[value(name = "Zp")]
    Zp,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProfileArg {
    Quick,
    Full,
}

#[derive(Args, Debug, Clone)]
pub struct Opts {
    /// Prime p (inferred from q when omitted).
    #[arg(long)]
    pub p: Option<u64>,
    /// Exponent q, a power of p.
    #[arg(long)]
    pub q: Option<u64>,
    /// Arity / degree n.
    #[arg(long)]
    pub n: Option<usize>,
    /// Secondary index (power m, epsilon index, t-series residue).
    #[arg(long)]
    pub m: Option<usize>,
    /// Largest degree exercised by suites.
    #[arg(long)]
    pub max_degree: Option<usize>,
    /// Coefficient ring for lattice membership.
    #[arg(long, value_enum)]
    pub ring: Option<RingArg>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Seed for randomized suites.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "quick")]
    pub profile: ProfileArg,
    /// Series truncation degree.
    #[arg(long)]
    pub cap: Option<usize>,
    /// Permutation in one-line notation, e.g. 2,1,3 (lemma14).
    #[arg(long)]
    pub perm: Option<String>,
    /// Also write the JSON result to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// What a run produced: exit code, text for stdout, warnings for stderr,
/// and the JSON document (printed with `--format json`, written by `--out`).
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub text: String,
    pub warnings: Vec<String>,
    pub json: Value,
}

impl Outcome {
    fn new(code: i32, text: String, json: Value) -> Self {
        Outcome { code, text, warnings: Vec::new(), json }
    }

    fn usage(msg: impl Into<String>) -> Self {
        let msg = msg.into();
        Outcome::new(2, format!("error: {msg}"), json!({ "error": msg }))
    }

    /// The bytes to print on stdout for the chosen format.
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Json => serde_json::to_string_pretty(&self.json).expect("serializable"),
        }
    }
}

fn from_error(e: Error) -> Outcome {
    let code = match e {
        Error::InvalidParams(_)
        | Error::HypothesisNotMet { .. }
        | Error::HypothesisNeverHolds
        | Error::ArityMismatch { .. }
        | Error::BadResidue { .. }
        | Error::CapExceeded { .. } => 2,
        _ => 1,
    };
    let msg = e.to_string();
    Outcome::new(code, format!("error: {msg}"), json!({ "error": msg }))
}

type Run = std::result::Result<Outcome, Outcome>;

fn need<T: Copy>(v: Option<T>, flag: &str) -> std::result::Result<T, Outcome> {
    v.ok_or_else(|| Outcome::usage(format!("--{flag} is required")))
}

/// (p, q) from the flags; p is inferred from q, and q defaults to p.
fn resolve_pq(o: &Opts) -> std::result::Result<(u64, u64), Outcome> {
    match (o.p, o.q) {
        (Some(p), Some(q)) => {
            if prime_of(q) != Some(p) {
                return Err(Outcome::usage(format!("q = {q} is not a power of p = {p}")));
            }
            Ok((p, q))
        }
        (None, Some(q)) => {
            prime_of(q).map(|p| (p, q)).ok_or_else(|| Outcome::usage(format!("q = {q} is not a prime power")))
        }
        (Some(p), None) => {
            if prime_of(p) != Some(p) {
                return Err(Outcome::usage(format!("p = {p} is not prime")));
            }
            Ok((p, p))
        }
        (None, None) => Err(Outcome::usage("--q or --p is required")),
    }
}

fn ring_of(o: &Opts, p: u64) -> Ring {
    match o.ring {
        None | Some(RingArg::Z) => Ring::Z,
        Some(RingArg::Q) => Ring::Q,
        Some(RingArg::Zp) => Ring::Zp(p),
    }
}

fn relator_params(o: &Opts) -> std::result::Result<RelatorParams, Outcome> {
    let (p, q) = resolve_pq(o)?;
    let n = need(o.n, "n")?;
    RelatorParams::new(p, q, n, ring_of(o, p)).map_err(from_error)
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_from<I, T>(args: I) -> (Outcome, Format, Option<PathBuf>)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return (Outcome::new(code, text.trim_end().to_string(), Value::Null), Format::Text, None);
        }
    };
    let opts = match &cli.command {
        Command::Compute { opts, .. } | Command::Verify { opts, .. } | Command::Selftest { opts } => opts.clone(),
    };
    let outcome = match cli.command {
        Command::Compute { kind, opts } => compute(kind, &opts),
        Command::Verify { target, opts } => verify(target, &opts),
        Command::Selftest { opts } => Ok(selftest(&opts)),
    };
    (outcome.unwrap_or_else(|e| e), opts.format, opts.out)
}

fn compute(kind: ComputeKind, o: &Opts) -> Run {
    let (text, value) = match kind {
        ComputeKind::Kn | ComputeKind::KnDelta | ComputeKind::KnModP => {
            let params = relator_params(o)?;
            let letters: Vec<u32> = (1..=params.n as u32).collect();
            let k = match kind {
                ComputeKind::KnDelta => k_delta_form(&params),
                _ => k_on_letters(params.q, &letters),
            };
            if kind == ComputeKind::KnModP {
                let reduced = k.poly().reduce_mod(params.p).ok_or_else(|| {
                    Outcome::new(1, "error: K_n has a coefficient that is not p-integral".into(), Value::Null)
                })?;
                (reduced.to_string(), json!({ "p": params.p, "q": params.q, "n": params.n, "value": reduced.to_json() }))
            } else {
                (k.to_string(), json!({ "q": params.q, "n": params.n, "value": k.to_json(), "text": k.to_string() }))
            }
        }
        ComputeKind::Psi => {
            let n = need(o.n, "n")?;
            let poly = match o.m {
                Some(m) => OperatorR::x_power(m, n).psi_apply_word(n).map_err(from_error)?,
                None => psi_xq_word(&relator_params(o)?),
            };
            (poly.to_string(), json!({ "n": n, "m": o.m, "q": o.q, "value": poly.to_json() }))
        }
        ComputeKind::Eta => {
            let (p, _) = resolve_pq(o)?;
            let n = need(o.n, "n")?;
            let s = eta_op(p, n).sigma(n).map_err(from_error)?;
            (s.to_string(), json!({ "p": p, "n": n, "sigma": s.to_json() }))
        }
        ComputeKind::Epsilon => {
            let n = need(o.n, "n")?;
            let m = need(o.m, "m")?;
            let s = epsilon_op(m, n).sigma(n).map_err(from_error)?;
            (s.to_string(), json!({ "m": m, "n": n, "sigma": s.to_json() }))
        }
        ComputeKind::TSeries => {
            let (p, _) = resolve_pq(o)?;
            let i = o.m.unwrap_or(1) as u64;
            let cap = o.cap.unwrap_or(10);
            let t = t_series(p, i, cap).map_err(from_error)?;
            let coeffs: Vec<Value> = t.coeffs().iter().map(crate::rational::q_json).collect();
            (t.to_string(), json!({ "p": p, "i": i, "cap": cap, "coeffs": coeffs, "text": t.to_string() }))
        }
        ComputeKind::Smoothing => {
            let params = relator_params(o)?;
            let r = smoothing(&params).map_err(from_error)?;
            (r.z_n.poly().to_string(), r.to_json())
        }
    };
    Ok(Outcome::new(0, text, value))
}

fn suite_outcome(rep: SuiteReport) -> Outcome {
    let mut text = rep.scoreboard_line();
    for f in &rep.failures {
        text.push_str(&format!("\n  failed: {f}"));
    }
    Outcome::new(if rep.passed() { 0 } else { 1 }, text, rep.to_json())
}

fn pass_code(ok: bool) -> i32 {
    if ok {
        0
    } else {
        1
    }
}

fn verify(target: VerifyTarget, o: &Opts) -> Run {
    let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
    let out = match target {
        VerifyTarget::Lemma2 => suite_outcome(suites::lemma2(o.max_degree.unwrap_or(6), 20, &mut rng)),
        VerifyTarget::Lemma4 => suite_outcome(suites::psi_definitions(o.m.unwrap_or(4), o.max_degree.unwrap_or(6))),
        VerifyTarget::Lemma6 => suite_outcome(suites::lemma6(o.m.unwrap_or(4) as u64, o.max_degree.unwrap_or(5))),
        VerifyTarget::Cor7 => suite_outcome(suites::cor7(o.m.unwrap_or(4), o.max_degree.unwrap_or(5))),
        VerifyTarget::Lemma8 => suite_outcome(suites::lemma8(o.max_degree.unwrap_or(5))),
        VerifyTarget::Lemma9 => {
            let (p, _) = resolve_pq(o)?;
            if p == 2 {
                return Err(Outcome::usage("lemma9 needs an odd prime"));
            }
            suite_outcome(suites::lemma9(&[p], o.cap.unwrap_or(10)))
        }
        VerifyTarget::Cor10 => {
            let (p, _) = resolve_pq(o)?;
            let ns: Vec<usize> = match o.n {
                Some(n) => vec![n],
                None => (2..=o.max_degree.unwrap_or(6)).collect(),
            };
            suite_outcome(suites::cor10(&[(p, ns)]))
        }
        VerifyTarget::Lemma11 => {
            let params = relator_params(o)?;
            let c = check_lemma11(&RelatorContext::new(params.q), &params).map_err(from_error)?;
            Outcome::new(pass_code(c.passed()), c.to_text(), c.to_json())
        }
        VerifyTarget::Lemma12 => {
            let params = relator_params(o)?;
            let c = check_lemma12(&RelatorContext::new(params.q), &params).map_err(from_error)?;
            Outcome::new(pass_code(c.passed()), c.to_text(), c.to_json())
        }
        VerifyTarget::Lemma14 => {
            let params = relator_params(o)?;
            let perms: Vec<Perm> = match &o.perm {
                Some(s) => vec![parse_perm(s, params.n)?],
                None => (0..5).map(|_| Perm::random(params.n, &mut rng)).collect(),
            };
            let ctx = RelatorContext::new(params.q);
            let mut texts = Vec::new();
            let mut values = Vec::new();
            let mut ok = true;
            for pi in &perms {
                let r = check_lemma14(&ctx, &params, pi).map_err(from_error)?;
                ok &= r.passed();
                texts.push(r.to_text());
                values.push(r.to_json());
            }
            Outcome::new(pass_code(ok), texts.join("\n"), json!({ "passed": ok, "checks": values }))
        }
        VerifyTarget::Theorem1 => theorem1(o)?,
        VerifyTarget::ProofReplay => {
            let params = relator_params(o)?;
            let r = proof_replay(&RelatorContext::new(params.q), &params).map_err(from_error)?;
            Outcome::new(pass_code(r.passed()), r.to_text(), r.to_json())
        }
        VerifyTarget::All => selftest(o),
    };
    Ok(out)
}

fn theorem1(o: &Opts) -> Run {
    let params = relator_params(o)?;
    let ctx = RelatorContext::new(params.q);
    let r = theorem1_verify(&ctx, &params).map_err(from_error)?;
    let mut out = Outcome::new(pass_code(r.passed()), r.to_text(), r.to_json());
    match r.status {
        Theorem1Status::Verified => {}
        Theorem1Status::RationalOnly => out.warnings.push(format!(
            "WARNING: K_n lies in the Q-span of I_{} but NOT in the {} lattice; this contradicts the integral conclusion",
            params.n - 1,
            params.ring
        )),
        Theorem1Status::Refuted => out.warnings.push("WARNING: K_n is not even in the Q-span of I_{n-1}".into()),
    }
    Ok(out)
}

fn parse_perm(s: &str, n: usize) -> std::result::Result<Perm, Outcome> {
    let images: Vec<u32> = s
        .split(',')
        .map(|t| t.trim().parse::<u32>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Outcome::usage(format!("bad permutation '{s}'")))?;
    let mut sorted = images.clone();
    sorted.sort_unstable();
    if sorted != (1..=n as u32).collect::<Vec<_>>() {
        return Err(Outcome::usage(format!("'{s}' is not a permutation of 1..{n}")));
    }
    Ok(Perm::from_one_line(&images))
}

fn selftest(o: &Opts) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
    let profile = match o.profile {
        ProfileArg::Quick => Profile::Quick,
        ProfileArg::Full => Profile::Full,
    };
    let max_degree = o.max_degree.unwrap_or(6);
    let reports = suites::run_all(profile, max_degree, &mut rng);
    let ok = reports.iter().all(SuiteReport::passed);
    let mut text = String::new();
    for r in &reports {
        text.push_str(&r.scoreboard_line());
        text.push('\n');
        for f in &r.failures {
            text.push_str(&format!("    failed: {f}\n"));
        }
    }
    text.push_str(if ok { "ALL PASS" } else { "FAILURES PRESENT" });
    Outcome::new(pass_code(ok), text, suites::suites_json(o.seed, profile, max_degree, &reports))
}

/// Configures the worker pool from `WALL_RELATORS_THREADS`.
pub fn init_threads() {
    if let Some(n) = std::env::var("WALL_RELATORS_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}
