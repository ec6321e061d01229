//! Batch verification and exploration commands over the `binmu` library.
//!
//! Every command produces a [`Report`]; the process exit code is 0 when all
//! checks pass, 1 when a check fails and 2 for usage errors.

pub mod report;

use binmu::diophantine::{DEFAULT_QUOTIENTS, DEFAULT_WINDOW_START};
use binmu::sequences::{cross_check, tabulate};
use binmu::series::DEFAULT_PRECISION;
use binmu::{
    certified_cf_prefix, convergents, decimal_preview, estimate_mu, estimate_mu_for_constant,
    eval_f, eval_s, fermat_reciprocal_sum, formal_identity_check, format_rational,
    liouville_partial, verify_relation_with, Base, Constant, ContinuedFraction, DepthPolicy,
    DigitSource, Enclosure, Error, MuEstimate,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::time::Instant;

pub use report::{Check, Format, Report};

/// Digits shown in decimal previews of exact rationals.
pub const PREVIEW_DIGITS: usize = 50;

/// Index whose digit sum the hidden `--corrupt` flag perturbs.
pub const CORRUPTED_INDEX: u64 = 5;

#[derive(Debug, Parser)]
#[command(
    name = "binmu",
    version,
    about = "Digit-sum series, certified enclosures and irrationality-exponent estimates"
)]
pub struct Cli {
    /// Output layout.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate s2(n) and the three routes to f(n) on [1, range-end] and cross-check them.
    Seq {
        #[arg(long, default_value_t = 16)]
        range_end: u64,
        /// Largest n checked against the brute-force series expansion.
        #[arg(long, default_value_t = 4096)]
        oracle_cap: u64,
        /// Rows printed; the cross-check always covers the whole range.
        #[arg(long, default_value_t = 64)]
        max_rows: u64,
    },
    /// Print a certified enclosure of a constant.
    Eval {
        #[arg(value_enum)]
        which: EvalTarget,
        #[arg(long, default_value_t = 2, allow_negative_numbers = true)]
        base: i64,
        /// Truncation depth (Liouville: number of factorial terms).
        #[arg(long, default_value_t = 4)]
        terms: u64,
    },
    /// Check S(1/b) = b/(b-1)·F(1/b) on certified enclosures and F(x) = (1-x)S(x) formally.
    Verify {
        #[arg(long, default_value_t = 2, allow_negative_numbers = true)]
        base: i64,
        /// Enclosure widths are pushed below base^-precision.
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        precision: u32,
        /// Degree of the formal power-series check.
        #[arg(long, default_value_t = 4096)]
        degree: u64,
        /// Negative control: perturb one digit-sum coefficient.
        #[arg(long, hide = true)]
        corrupt: bool,
    },
    /// Estimate the irrationality exponent from a certified continued-fraction prefix.
    Mu {
        #[arg(value_enum)]
        which: MuTarget,
        #[arg(long, default_value_t = 2, allow_negative_numbers = true)]
        base: i64,
        /// Quotients used (F, S: certified quotients required; golden: length).
        #[arg(long)]
        quotients: Option<usize>,
        #[arg(long)]
        window_start: Option<usize>,
        /// Liouville truncation depth.
        #[arg(long)]
        terms: Option<u32>,
        /// Depth cap for the F/S truncation search.
        #[arg(long)]
        max_terms: Option<u64>,
        /// Lower end of the open acceptance band for mu_hat.
        #[arg(long)]
        band_min: Option<f64>,
        /// Upper end of the open acceptance band for mu_hat.
        #[arg(long)]
        band_max: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EvalTarget {
    #[value(name = "F", alias = "f")]
    #[serde(rename = "F")]
    F,
    #[value(name = "S", alias = "s")]
    #[serde(rename = "S")]
    S,
    Fermat,
    Liouville,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MuTarget {
    #[value(name = "F", alias = "f")]
    #[serde(rename = "F")]
    F,
    #[value(name = "S", alias = "s")]
    #[serde(rename = "S")]
    S,
    Liouville,
    Golden,
}

impl MuTarget {
    fn defaults(self) -> MuDefaults {
        match self {
            MuTarget::F | MuTarget::S => MuDefaults {
                quotients: DEFAULT_QUOTIENTS,
                window_start: DEFAULT_WINDOW_START,
                band: (Some(2.0), Some(2.5)),
            },
            MuTarget::Liouville => MuDefaults {
                quotients: 0,
                window_start: 1,
                band: (Some(5.0), None),
            },
            MuTarget::Golden => MuDefaults {
                quotients: 30,
                window_start: 5,
                band: (Some(2.0), Some(2.25)),
            },
        }
    }
}

struct MuDefaults {
    quotients: usize,
    window_start: usize,
    band: (Option<f64>, Option<f64>),
}

/// Default Liouville depth for `mu liouville`.
pub const DEFAULT_LIOUVILLE_DEPTH: u32 = 6;

/// Errors that abort a command before a report exists (exit code 2).
#[derive(Debug)]
pub struct UsageError(pub String);

impl From<Error> for UsageError {
    fn from(e: Error) -> Self {
        UsageError(e.to_string())
    }
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: u8,
}

/// Parse arguments (including the program name) and run the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    stdout: String::new(),
                    stderr: text,
                    code: 2,
                }
            } else {
                Outcome {
                    stdout: text,
                    stderr: String::new(),
                    code: 0,
                }
            };
        }
    };
    match execute(&cli.command) {
        Ok(report) => Outcome {
            stdout: report.render(cli.format),
            stderr: String::new(),
            code: report.exit_code(),
        },
        Err(UsageError(msg)) => Outcome {
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
            code: 2,
        },
    }
}

pub fn execute(command: &Command) -> Result<Report, UsageError> {
    let start = Instant::now();
    let mut report = match *command {
        Command::Seq {
            range_end,
            oracle_cap,
            max_rows,
        } => cmd_seq(range_end, oracle_cap, max_rows)?,
        Command::Eval { which, base, terms } => cmd_eval(which, base, terms)?,
        Command::Verify {
            base,
            precision,
            degree,
            corrupt,
        } => cmd_verify(base, precision, degree, corrupt)?,
        Command::Mu {
            which,
            base,
            quotients,
            window_start,
            terms,
            max_terms,
            band_min,
            band_max,
        } => cmd_mu(
            which,
            MuOptions {
                base,
                quotients,
                window_start,
                terms,
                max_terms,
                band: (band_min, band_max),
            },
        )?,
    };
    report.set_elapsed(start.elapsed());
    Ok(report)
}

fn base_of(b: i64) -> Result<Base, UsageError> {
    Ok(Base::try_from(b)?)
}

pub fn cmd_seq(range_end: u64, oracle_cap: u64, max_rows: u64) -> Result<Report, UsageError> {
    if range_end == 0 {
        return Err(UsageError("range end must be at least 1".into()));
    }
    let mut report = Report::new("seq");
    report.input("range_end", range_end);
    report.input("oracle_cap", oracle_cap);

    let shown = range_end.min(max_rows);
    let rows = if shown > 0 {
        tabulate(shown, oracle_cap)?
    } else {
        Vec::new()
    };
    report.text(format!(
        "{:>10} {:>6} {:>8} {:>8} {:>8}",
        "n", "s2(n)", "f mult", "f diff", "f series"
    ));
    for r in &rows {
        let oracle = r.oracle.map_or_else(|| "-".to_string(), |o| o.to_string());
        report.text(format!(
            "{:>10} {:>6} {:>8} {:>8} {:>8}",
            r.n, r.s2, r.multiplicative, r.difference, oracle
        ));
    }
    if range_end > shown {
        report.text(format!(
            "({} further rows checked, not shown)",
            range_end - shown
        ));
    }
    report.result("rows", &rows);
    report.result("rows_omitted", range_end - shown);

    let summary = cross_check(range_end, oracle_cap)?;
    let detail = match &summary.first_mismatch {
        None => format!(
            "multiplicative = difference on [1, {range_end}], series oracle agrees on [1, {}]",
            summary.oracle_checked
        ),
        Some(row) => format!("routes disagree at n = {}: {row:?}", row.n),
    };
    report.check("routes_agree", summary.passed(), detail);
    report.result("summary", &summary);
    Ok(report)
}

fn preview(r: &binmu::Rational) -> String {
    format!(
        "≈ {} (decimal preview, non-authoritative)",
        decimal_preview(r, PREVIEW_DIGITS)
    )
}

fn show_enclosure(report: &mut Report, e: &Enclosure) {
    report.text(format!("target  {}", e.target()));
    report.text(format!("lo      {}", format_rational(e.lo())));
    report.text(format!("        {}", preview(e.lo())));
    report.text(format!("hi      {}", format_rational(e.hi())));
    report.text(format!("        {}", preview(e.hi())));
    report.text(format!("width   {}", format_rational(&e.width())));
    report.text(format!("        {}", preview(&e.width())));
    report.result("enclosure", e);
    report.result("lo_preview", decimal_preview(e.lo(), PREVIEW_DIGITS));
    report.result("hi_preview", decimal_preview(e.hi(), PREVIEW_DIGITS));
}

pub fn cmd_eval(which: EvalTarget, base: i64, terms: u64) -> Result<Report, UsageError> {
    let mut report = Report::new("eval");
    report.input("which", which);
    let small_terms =
        || u32::try_from(terms).map_err(|_| UsageError(format!("terms {terms} out of range")));
    let enclosure = match which {
        EvalTarget::F => {
            let b = base_of(base)?;
            report.input("base", b);
            eval_f(b, small_terms()?)?
        }
        EvalTarget::S => {
            let b = base_of(base)?;
            report.input("base", b);
            eval_s(b, terms)?
        }
        EvalTarget::Fermat => fermat_reciprocal_sum(small_terms()?)?,
        EvalTarget::Liouville => liouville_partial(small_terms()?)?,
    };
    report.input("terms", terms);
    show_enclosure(&mut report, &enclosure);
    report.check(
        "enclosure_ordered",
        enclosure.lo() <= enclosure.hi(),
        "lo is the exact partial sum, hi adds the certified tail bound",
    );
    Ok(report)
}

pub fn cmd_verify(
    base: i64,
    precision: u32,
    degree: u64,
    corrupt: bool,
) -> Result<Report, UsageError> {
    let b = base_of(base)?;
    let mut report = Report::new("verify");
    report.input("base", b);
    report.input("precision", precision);
    report.input("degree", degree);
    if corrupt {
        report.input("corrupt_index", CORRUPTED_INDEX);
    }
    let source = if corrupt {
        DigitSource::Corrupted {
            index: CORRUPTED_INDEX,
        }
    } else {
        DigitSource::Exact
    };
    let relation = verify_relation_with(b, precision, source)?;
    report.text(format!(
        "F terms {}, S terms {}",
        relation.f_terms, relation.s_terms
    ));
    report.text(format!("{}", relation.scaled_f));
    report.text(format!("{}", relation.s));
    let detail = if relation.holds {
        format!(
            "enclosures of S(1/{b}) and {b}/{}·F(1/{b}) intersect at widths below {b}^-{precision}",
            b.get() - 1
        )
    } else {
        format!(
            "enclosures are disjoint; gap {}",
            format_rational(&relation.gap)
        )
    };
    report.check("special_value_relation", relation.holds, detail);
    report.result("relation", &relation);

    let formal = formal_identity_check(degree);
    report.check(
        "formal_identity",
        formal,
        format!("F(x) and (1-x)S(x) coefficients compared through x^{degree}"),
    );
    Ok(report)
}

fn show_estimate(
    report: &mut Report,
    prefix: &ContinuedFraction,
    est: &MuEstimate,
) -> Result<(), UsageError> {
    report.text(format!(
        "certified prefix ({} quotients): {prefix}",
        prefix.len()
    ));
    let table = convergents(prefix)?;
    report.text(format!("{:>4}  {}", "k", "p_k/q_k"));
    for (k, (p, q)) in table.entries().iter().enumerate() {
        report.text(format!("{k:>4}  {p}/{q}"));
    }
    report.text(est.to_string());
    report.result("prefix", prefix);
    report.result("convergents", &table);
    report.result("estimate", est);
    Ok(())
}

fn band_check(report: &mut Report, mu_hat: f64, band: (Option<f64>, Option<f64>)) {
    let above = band.0.is_none_or(|lo| mu_hat > lo);
    let below = band.1.is_none_or(|hi| mu_hat < hi);
    let fmt = |b: Option<f64>, inf: &str| b.map_or_else(|| inf.to_string(), |v| v.to_string());
    report.check(
        "mu_band",
        above && below,
        format!(
            "mu_hat = {mu_hat:.6}, band ({}, {})",
            fmt(band.0, "-inf"),
            fmt(band.1, "inf")
        ),
    );
}

/// Optional knobs of `mu`; unset values fall back to per-target defaults.
#[derive(Debug, Clone, Copy, Default)]
pub struct MuOptions {
    pub base: i64,
    pub quotients: Option<usize>,
    pub window_start: Option<usize>,
    pub terms: Option<u32>,
    pub max_terms: Option<u64>,
    pub band: (Option<f64>, Option<f64>),
}

pub fn cmd_mu(which: MuTarget, options: MuOptions) -> Result<Report, UsageError> {
    let MuOptions {
        base,
        quotients,
        window_start,
        terms,
        max_terms,
        band,
    } = options;
    let defaults = which.defaults();
    let window_start = window_start.unwrap_or(defaults.window_start);
    let band = (band.0.or(defaults.band.0), band.1.or(defaults.band.1));
    let mut report = Report::new("mu");
    report.input("which", which);

    let outcome = match which {
        MuTarget::F | MuTarget::S => {
            let b = base_of(base)?;
            let quotients = quotients.unwrap_or(defaults.quotients);
            report.input("base", b);
            report.input("quotients", quotients);
            report.input("window_start", window_start);
            let constant = if which == MuTarget::F {
                Constant::F
            } else {
                Constant::S
            };
            let mut policy = DepthPolicy {
                quotients,
                window_start,
                ..DepthPolicy::default()
            };
            if let Some(max) = max_terms {
                report.input("max_terms", max);
                policy.max_f_terms = u32::try_from(max).unwrap_or(u32::MAX);
                policy.max_s_terms = max;
            }
            estimate_mu_for_constant(b, constant, &policy).map(|est| {
                report.text(format!("{} after {} terms", est.enclosure, est.terms));
                report.result("terms", est.terms);
                report.result("certified_len", est.certified_len);
                report.check(
                    "certified_quotients",
                    true,
                    format!("{} certified, {quotients} used", est.certified_len),
                );
                (est.prefix, est.estimate)
            })
        }
        MuTarget::Liouville => {
            let depth = terms.unwrap_or(DEFAULT_LIOUVILLE_DEPTH);
            report.input("terms", depth);
            report.input("window_start", window_start);
            let enclosure = liouville_partial(depth)?;
            let mut prefix = certified_cf_prefix(&enclosure);
            if let Some(q) = quotients {
                report.input("quotients", q);
                prefix = prefix.truncated(q);
            }
            report.text(format!("{enclosure}"));
            estimate_mu(&prefix, window_start).map(|est| {
                report.check(
                    "certified_quotients",
                    true,
                    format!("{} certified", prefix.len()),
                );
                (prefix, est)
            })
        }
        MuTarget::Golden => {
            let n = quotients.unwrap_or(defaults.quotients);
            report.input("quotients", n);
            report.input("window_start", window_start);
            report.text(
                "synthetic calibration expansion [1; 1, 1, …], not derived from an enclosure",
            );
            let cf = ContinuedFraction::golden(n);
            estimate_mu(&cf, window_start).map(|est| (cf, est))
        }
    };

    match outcome {
        Ok((prefix, est)) => {
            show_estimate(&mut report, &prefix, &est)?;
            band_check(&mut report, est.mu_hat, band);
        }
        Err(e @ (Error::InsufficientQuotients { .. } | Error::WindowTooShort { .. })) => {
            report.check(
                "certified_quotients",
                false,
                format!("insufficient quotients: {e}"),
            );
        }
        Err(e) => return Err(e.into()),
    }
    Ok(report)
}
