//! Command-line front end. Output is line-oriented plain text; exit codes
//! are 0 (success, divides), 1 (refuted, not divides) and 2 (error or
//! undecided).

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::divrel::{self, check_axioms, check_cancellation, check_complement, check_seminorm_laws, check_total, CheckReport};
use crate::error::Error;
use crate::funcring::{approx_by_level, local_global_check, spectrum_points, CompactSpace, LCFunction, Polynomial};
use crate::hensel::{divides_by_root_criterion, qth_root_of_unit, RootCriterion, RootSpec};
use crate::logic::Decision;
use crate::padic::{check_prime, format_rational, parse_rational, rational_pow_p, vp_rational, PAdic, DEFAULT_PRECISION};
use crate::sampling::{FunctionSampler, PAdicSampler, RationalSampler};

pub const SEED_ENV: &str = "CXQP_SEED";

#[derive(Debug, Parser)]
#[command(name = "cxqp", version, about = "Exact bounded-precision p-adic arithmetic and divisibility checks")]
pub struct Cli {
    #[command(flatten)]
    pub opts: Options,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    /// The prime p.
    #[arg(long, global = true)]
    pub p: Option<u64>,
    /// Root exponent q (a prime different from p).
    #[arg(long, global = true)]
    pub q: Option<u64>,
    /// Relative precision in p-adic digits.
    #[arg(long = "N", visible_alias = "precision", global = true, default_value_t = DEFAULT_PRECISION)]
    pub n: u32,
    /// Level k of Z_p (cosets mod p^k).
    #[arg(long, global = true)]
    pub k: Option<u32>,
    #[arg(long, global = true, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 10_000)]
    pub trials: u64,
    /// Write the resulting function file here instead of stdout.
    #[arg(long, short = 'o', global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RelationName {
    CanonicalQp,
    CanonicalStar,
    Rational,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// p-adic valuation of a rational.
    Vp { value: String },
    /// Embed a rational into Q_p at precision N.
    Embed { value: String },
    /// Kochen operator of a rational or literal.
    Gamma { value: String },
    /// |x|_p of a rational or literal.
    Norm { value: String },
    /// Decide g |* f by the q-th root criterion.
    Divides { g: PathBuf, f: PathBuf },
    /// q-th root of a 1-unit, congruent to 1 mod p.
    HenselRoot { value: String },
    /// Sample the divisibility axioms (1)-(8), totality, cancellation and the complement identity.
    AxiomsCheck {
        #[arg(value_enum)]
        relation: RelationName,
    },
    /// Sample the semi-norm laws.
    SeminormCheck {
        #[arg(value_enum)]
        relation: RelationName,
    },
    /// Compare p | f(x) at every point with p |* f.
    LocalGlobal { input: PathBuf },
    /// Level-k locally constant approximation of a polynomial on Z_p.
    Approx {
        /// Coefficients, lowest degree first, e.g. `0,0,1` for x^2.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        coeffs: Vec<String>,
    },
    /// Values and absolute values at each spectrum point, and the sup norm.
    Spectrum { input: PathBuf },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    File { path: PathBuf, source: Error },
    #[error("missing flag --{0}")]
    Missing(&'static str),
    #[error("invalid value for {field}: {msg}")]
    Field { field: &'static str, msg: String },
    #[error(transparent)]
    Write(#[from] io::Error),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `args` (including the program name) and runs the command. Reports
/// go to `out`, diagnostics to `err`; the return value is the exit code.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match run(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn prime(opts: &Options) -> CliResult<u32> {
    let p = opts.p.ok_or(CliError::Missing("p"))?;
    Ok(check_prime(p)?)
}

fn exponent(opts: &Options) -> CliResult<u32> {
    let q = opts.q.ok_or(CliError::Missing("q"))?;
    let q = check_prime(q)?;
    Ok(q)
}

fn precision(opts: &Options) -> CliResult<u32> {
    if opts.n == 0 {
        return Err(Error::InvalidPrecision.into());
    }
    Ok(opts.n)
}

/// A rational `n` or `n/d`, or a padic literal such as `3^-1 * [1,2]`.
fn parse_value(s: &str, p: u32, n: u32) -> CliResult<PAdic> {
    let s = s.trim();
    if s.contains('[') || s.starts_with("O(") {
        return PAdic::parse_literal(s, p, n).map_err(|e| CliError::Field { field: "value", msg: e.to_string() });
    }
    let r = parse_rational(s).map_err(|e| CliError::Field { field: "value", msg: e.to_string() })?;
    Ok(PAdic::embed(&r, p, n))
}

fn read_function(path: &Path, n: u32) -> CliResult<LCFunction> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    LCFunction::parse_file(&text, n).map_err(|source| CliError::File { path: path.into(), source })
}

fn emit_function(f: &LCFunction, opts: &Options, out: &mut dyn Write) -> CliResult<()> {
    match &opts.out {
        Some(path) => std::fs::write(path, f.to_file_string()).map_err(|source| CliError::Io { path: path.clone(), source }),
        None => Ok(out.write_all(f.to_file_string().as_bytes())?),
    }
}

fn decision_code(d: Decision) -> u8 {
    match d {
        Decision::Yes => 0,
        Decision::No => 1,
        Decision::Undecided => 2,
    }
}

fn function_sampler(p: u32, n: u32, k: Option<u32>) -> CliResult<FunctionSampler> {
    let mut sampler = FunctionSampler::desk_scale(p, n);
    if let Some(k) = k {
        sampler.spaces = vec![CompactSpace::zp_level(k, p)?];
    }
    Ok(sampler)
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> CliResult<u8> {
    let o = &cli.opts;
    match &cli.command {
        Command::Vp { value } => {
            let p = prime(o)?;
            let r = parse_rational(value).map_err(|e| CliError::Field { field: "value", msg: e.to_string() })?;
            writeln!(out, "{}", vp_rational(&r, p))?;
        }
        Command::Embed { value } => {
            let p = prime(o)?;
            let r = parse_rational(value).map_err(|e| CliError::Field { field: "value", msg: e.to_string() })?;
            writeln!(out, "{}", PAdic::embed(&r, p, precision(o)?))?;
        }
        Command::Gamma { value } => {
            let p = prime(o)?;
            let x = parse_value(value, p, precision(o)?)?;
            let g = x.kochen_gamma()?;
            writeln!(out, "{g}")?;
            writeln!(out, "v={}", g.valuation())?;
        }
        Command::Norm { value } => {
            let p = prime(o)?;
            let x = parse_value(value, p, precision(o)?)?;
            writeln!(out, "{}", format_rational(&x.norm_abs()?))?;
        }
        Command::HenselRoot { value } => {
            let (p, q, n) = (prime(o)?, exponent(o)?, precision(o)?);
            let target = parse_value(value, p, n)?;
            let y = qth_root_of_unit(&RootSpec::new(q, target, n)?)?;
            writeln!(out, "{y}")?;
        }
        Command::Divides { g, f } => {
            let (q, n) = (exponent(o)?, precision(o)?);
            let g = read_function(g, n)?;
            let f = read_function(f, n)?;
            if let Some(p) = o.p {
                let p = check_prime(p)?;
                if p != g.prime() {
                    return Err(Error::PrimeMismatch(p, g.prime()).into());
                }
            }
            match divides_by_root_criterion(&g, &f, q)? {
                RootCriterion::Divides(h) => {
                    emit_function(&h, o, out)?;
                    if o.out.is_some() {
                        writeln!(out, "divides")?;
                    }
                    return Ok(0);
                }
                RootCriterion::Refuted(r) => {
                    writeln!(
                        out,
                        "refuted point={} vp_g={} vp_f={} vp_rhs={}",
                        r.point.index, r.vp_g, r.vp_f, r.vp_rhs
                    )?;
                    return Ok(1);
                }
            }
        }
        Command::AxiomsCheck { relation } => {
            let (p, n) = (prime(o)?, precision(o)?);
            let (axioms, extra) = match relation {
                RelationName::CanonicalQp => {
                    let rel = divrel::canonical_qp(p, n)?;
                    let s = PAdicSampler::new(p, n);
                    axioms_report(
                        check_axioms(&rel, &s, o.trials, o.seed),
                        [
                            check_total(&rel, &s, o.trials, o.seed),
                            check_cancellation(&rel, &s, o.trials, o.seed),
                            check_complement(&rel, &s, o.trials, o.seed),
                        ],
                    )
                }
                RelationName::CanonicalStar => {
                    let space = o.k.map(|k| CompactSpace::zp_level(k, p)).transpose()?;
                    let rel = divrel::canonical_star(p, n, space)?;
                    let s = function_sampler(p, n, o.k)?;
                    axioms_report(
                        check_axioms(&rel, &s, o.trials, o.seed),
                        [
                            check_total(&rel, &s, o.trials, o.seed),
                            check_cancellation(&rel, &s, o.trials, o.seed),
                            check_complement(&rel, &s, o.trials, o.seed),
                        ],
                    )
                }
                RelationName::Rational => {
                    let rel = divrel::rationals_via_qp(p, n)?;
                    let s = RationalSampler::new(p);
                    axioms_report(
                        check_axioms(&rel, &s, o.trials, o.seed),
                        [
                            check_total(&rel, &s, o.trials, o.seed),
                            check_cancellation(&rel, &s, o.trials, o.seed),
                            check_complement(&rel, &s, o.trials, o.seed),
                        ],
                    )
                }
            };
            write!(out, "{axioms}{extra}")?;
            return Ok(if axioms.total_failures() == 0 { 0 } else { 1 });
        }
        Command::SeminormCheck { relation } => {
            let (p, n) = (prime(o)?, precision(o)?);
            let report = match relation {
                RelationName::CanonicalQp => {
                    check_seminorm_laws(&divrel::canonical_qp(p, n)?, &PAdicSampler::new(p, n), o.trials, o.seed)
                }
                RelationName::CanonicalStar => {
                    let space = o.k.map(|k| CompactSpace::zp_level(k, p)).transpose()?;
                    let rel = divrel::canonical_star(p, n, space)?;
                    check_seminorm_laws(&rel, &function_sampler(p, n, o.k)?, o.trials, o.seed)
                }
                RelationName::Rational => {
                    check_seminorm_laws(&divrel::rationals_via_qp(p, n)?, &RationalSampler::new(p), o.trials, o.seed)
                }
            };
            write!(out, "{report}")?;
            return Ok(if report.total_failures() == 0 { 0 } else { 1 });
        }
        Command::LocalGlobal { input } => {
            let f = read_function(input, precision(o)?)?;
            let lg = local_global_check(&f);
            writeln!(out, "pointwise={} global={} agree={}", lg.pointwise, lg.global, lg.agree())?;
            return Ok(decision_code(lg.agree()));
        }
        Command::Approx { coeffs } => {
            let (p, n) = (prime(o)?, precision(o)?);
            let k = o.k.ok_or(CliError::Missing("k"))?;
            let coeffs = coeffs
                .iter()
                .map(|c| parse_rational(c).map_err(|e| CliError::Field { field: "coeffs", msg: e.to_string() }))
                .collect::<CliResult<Vec<_>>>()?;
            let a = approx_by_level(&Polynomial::new(coeffs), p, k, n)?;
            writeln!(out, "error_bound={}", format_rational(&a.error_bound))?;
            emit_function(&a.function, o, out)?;
        }
        Command::Spectrum { input } => {
            let f = read_function(input, precision(o)?)?;
            for pt in spectrum_points(&f.space()) {
                let v = f.gelfand(pt)?;
                let abs = match v.norm_abs() {
                    Ok(a) => format_rational(&a),
                    Err(_) => {
                        let a = v.absolute_precision().unwrap_or(0);
                        format!("<={}", format_rational(&rational_pow_p(f.prime(), -a)))
                    }
                };
                writeln!(out, "point={} value={} abs={}", pt.index, v, abs)?;
            }
            writeln!(out, "sup={}", format_rational(&f.sup_norm()?))?;
        }
    }
    Ok(0)
}

fn axioms_report<const M: usize>(axioms: CheckReport, extra: [divrel::PropertyReport; M]) -> (CheckReport, String) {
    let extra = extra.iter().map(|r| format!("{r}\n")).collect();
    (axioms, extra)
}

/// Runs [`main_with_args`] with the process arguments and standard streams.
pub fn main() -> u8 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    let code = main_with_args(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    let _ = io::stdout().flush();
    code
}
