//! Argument parsing, experiment execution and CSV/manifest emission.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fracsep_core::attractor::cover_with_budget;
use fracsep_core::cantor::{
    common_base, make_asymmetric, make_symmetric, rewrite_sign_uniform, rewrite_two_level_with,
    BlockCoeffMatrix, CoeffVector, Eligibility,
};
use fracsep_core::dimension::{
    assouad_estimate_with, box_counts, diff_bound_check, fit_exponent, similarity_dimension,
    DiffBoundParams, DimensionFit,
};
use fracsep_core::error::Error as CoreError;
use fracsep_core::ifs::{Sign, Similarity1D, DEFAULT_WORD_BUDGET, IFS1D};
use fracsep_core::scalar::{parse_rational, Mode, Scalar};
use fracsep_core::separation::{
    scan_scales, wsd_hausdorff_report, wsd_report, wsp_min_separation, Budgets, Checker,
    SeparationReport, TestPoints, Verdict,
};

#[derive(Parser, Debug)]
#[command(
    name = "fracsep",
    version,
    about = "Separation conditions and dimension estimates for self-similar sets on the line"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CheckerArg {
    Wsp,
    Wsd,
    WsdHausdorff,
}

/// System selection: exactly one of the four forms.
#[derive(Args, Clone, Debug)]
pub struct IfsArgs {
    /// Middle-lambda Cantor system, e.g. --symmetric 1/4
    #[arg(long, value_name = "LAMBDA")]
    symmetric: Option<String>,
    /// Asymmetric Cantor pair, e.g. --asymmetric 1/25,1/5
    #[arg(long, value_name = "C1,C2")]
    asymmetric: Option<String>,
    /// Common-base pair c^p1, c^p2, e.g. --common-base 1/5,2,1
    #[arg(long, value_name = "C,P1,P2")]
    common_base: Option<String>,
    /// Explicit maps "ratio,translation;..."; a negative ratio reflects
    #[arg(long, value_name = "LIST")]
    maps: Option<String>,
    /// Arithmetic mode; exact is the default for rational inputs
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
}

#[derive(Args, Clone, Debug)]
pub struct OutputArgs {
    /// CSV output path; stdout when omitted. A manifest is written alongside.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Cap on words per scale cut
    #[arg(long, default_value_t = DEFAULT_WORD_BUDGET, value_name = "N")]
    budget_words: usize,
    /// Refinement depth for deciding suspected class equalities
    #[arg(long, default_value_t = 6, value_name = "DEPTH")]
    budget_merge_depth: u32,
    /// Seed for any sampling
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Interval cover of the attractor at scale b
    Cover {
        #[command(flatten)]
        ifs: IfsArgs,
        #[arg(long)]
        b: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Minimal sup-norm separation between distinct cut maps
    Wsp {
        #[command(flatten)]
        ifs: IfsArgs,
        #[arg(long)]
        b: String,
        #[arg(long)]
        threshold: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Minimal normalized test-point gap between difference classes
    Wsd {
        #[command(flatten)]
        ifs: IfsArgs,
        #[arg(long)]
        b: String,
        /// Test points in K, e.g. --points 0,1 (hull endpoints by default)
        #[arg(long)]
        points: Option<String>,
        #[arg(long)]
        threshold: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Minimal normalized Hausdorff distance between refined class covers
    WsdHausdorff {
        #[command(flatten)]
        ifs: IfsArgs,
        #[arg(long)]
        b: String,
        #[arg(long, default_value_t = 2)]
        depth: u32,
        #[arg(long)]
        threshold: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// One checker across a decreasing list of scales
    Scan {
        #[command(flatten)]
        ifs: IfsArgs,
        #[arg(long, value_name = "B1,B2,...")]
        b_list: String,
        #[arg(long, value_enum, default_value_t = CheckerArg::Wsd)]
        checker: CheckerArg,
        #[arg(long)]
        points: Option<String>,
        #[arg(long, default_value_t = 2)]
        depth: u32,
        #[arg(long)]
        threshold: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Similarity dimension (bisection on sum c_i^D = 1)
    DimSim {
        #[command(flatten)]
        ifs: IfsArgs,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Box counts of the cover at scale b over a radius list, with the
    /// fitted exponent
    DimBox {
        #[command(flatten)]
        ifs: IfsArgs,
        #[arg(long)]
        b: String,
        #[arg(long, value_name = "E1,E2,...")]
        eps_list: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Localized covering exponent over centers and (r, rho) pairs
    DimAssouad {
        #[command(flatten)]
        ifs: IfsArgs,
        /// Scale pairs "r,rho;r,rho;..."
        #[arg(long, value_name = "PAIRS")]
        pairs: String,
        /// Centers in K (sampled from the seed when omitted)
        #[arg(long)]
        centers: Option<String>,
        #[arg(long, default_value_t = 8)]
        num_centers: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Difference-set exponent against twice the attractor exponent
    DiffBound {
        #[command(flatten)]
        ifs: IfsArgs,
        #[arg(long, default_value_t = 0.05)]
        slack: f64,
        /// Scales for the separation evidence scan
        #[arg(long, value_name = "B1,B2,...")]
        b_list: Option<String>,
        #[arg(long)]
        threshold: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sign-uniform rewriting of a digit expansion (one- or two-level)
    Rewrite {
        /// Base for a single-level rewrite, e.g. --lambda 1/4
        #[arg(long)]
        lambda: Option<String>,
        /// Digits like "[1,-2,0]"
        #[arg(long)]
        coeffs: Option<String>,
        /// Common base "c,p1,p2" for a two-level rewrite
        #[arg(long, value_name = "C,P1,P2")]
        common_base: Option<String>,
        /// Digit matrix like `[[1,-2],[0,1]]`
        #[arg(long)]
        matrix: Option<String>,
        /// Allow c^p2 up to 1/3 (uncertified regime, still exactly verified)
        #[arg(long)]
        relaxed: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Headline contrast: an irrational log-ratio pair against a rational one
    Henderson {
        /// Irrational-log-ratio pair (decimal ratios are parsed exactly)
        #[arg(long, default_value = "0.2,0.3", value_name = "C1,C2")]
        irrational: String,
        /// Rational-log-ratio pair as a common base
        #[arg(long, default_value = "1/5,2,1", value_name = "C,P1,P2")]
        rational: String,
        /// Scales for the irrational series
        #[arg(
            long,
            default_value = "1/10,1/100,1/1000,1/10000",
            value_name = "B1,..."
        )]
        b_list: String,
        /// Scales for the rational series (powers of the base by default)
        #[arg(long, value_name = "B1,...")]
        rational_b_list: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Complete,
    Violation,
    Undetermined,
    BudgetExceeded,
}

pub struct CliError {
    usage: bool,
    message: String,
}

impl CliError {
    fn usage(msg: impl Into<String>) -> CliError {
        CliError {
            usage: true,
            message: msg.into(),
        }
    }

    pub fn exit_code(&self) -> u8 {
        if self.usage {
            2
        } else {
            4
        }
    }

    pub fn diagnostic(&self) -> String {
        let kind = if self.usage { "usage" } else { "budget" };
        format!("error[{}]: {}", kind, self.message)
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> CliError {
        match e {
            CoreError::BudgetExceeded { .. } => CliError {
                usage: false,
                message: e.to_string(),
            },
            other => CliError {
                usage: true,
                message: other.to_string(),
            },
        }
    }
}

struct RunOutput {
    csv: String,
    verdict: String,
    max_words_used: usize,
    undetermined_pairs: usize,
    outcome: Outcome,
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    let started = Instant::now();
    let echo: Vec<String> = std::env::args().collect();
    let (output_args, result) = dispatch(&cli.command)?;
    let wall_ms = started.elapsed().as_millis();
    match &output_args.out {
        Some(path) => {
            std::fs::write(path, &result.csv)
                .map_err(|e| CliError::usage(format!("cannot write {}: {}", path.display(), e)))?;
            let manifest = render_manifest(&echo, &output_args, &result, wall_ms);
            let manifest_path = PathBuf::from(format!("{}.manifest", path.display()));
            std::fs::write(&manifest_path, manifest).map_err(|e| {
                CliError::usage(format!("cannot write {}: {}", manifest_path.display(), e))
            })?;
        }
        None => {
            print!("{}", result.csv);
        }
    }
    Ok(result.outcome)
}

fn render_manifest(
    echo: &[String],
    output: &OutputArgs,
    result: &RunOutput,
    wall_ms: u128,
) -> String {
    let mut m = String::new();
    let _ = writeln!(m, "spec: {}", echo.join(" "));
    let _ = writeln!(m, "library_version: {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(m, "budget_words: {}", output.budget_words);
    let _ = writeln!(m, "budget_merge_depth: {}", output.budget_merge_depth);
    let _ = writeln!(m, "seed: {}", output.seed);
    let _ = writeln!(m, "max_words_used: {}", result.max_words_used);
    let _ = writeln!(m, "undetermined_pairs: {}", result.undetermined_pairs);
    let _ = writeln!(m, "wall_ms: {}", wall_ms);
    let _ = writeln!(m, "verdict: {}", result.verdict);
    m
}

fn budgets_from(output: &OutputArgs) -> Budgets {
    Budgets {
        max_words: output.budget_words,
        merge_depth: output.budget_merge_depth,
    }
}

fn mode_of(args: &IfsArgs) -> Mode {
    match args.mode {
        ModeArg::Exact => Mode::Exact,
        ModeArg::Float => Mode::Float,
    }
}

fn parse_scalar(s: &str, mode: Mode, what: &str) -> Result<Scalar, CliError> {
    Scalar::parse(s, mode).map_err(|_| CliError::usage(format!("{}: cannot parse {:?}", what, s)))
}

fn parse_scalar_list(s: &str, mode: Mode, what: &str) -> Result<Vec<Scalar>, CliError> {
    s.split(',')
        .map(|part| parse_scalar(part.trim(), mode, what))
        .collect()
}

fn build_ifs(args: &IfsArgs) -> Result<IFS1D, CliError> {
    let mode = mode_of(args);
    let picked = [
        args.symmetric.is_some(),
        args.asymmetric.is_some(),
        args.common_base.is_some(),
        args.maps.is_some(),
    ]
    .iter()
    .filter(|&&p| p)
    .count();
    if picked != 1 {
        return Err(CliError::usage(
            "select exactly one of --symmetric, --asymmetric, --common-base, --maps",
        ));
    }
    if let Some(lam) = &args.symmetric {
        let lam = parse_scalar(lam, mode, "--symmetric")?;
        return make_symmetric(&lam).map_err(|e| CliError::usage(format!("--symmetric: {}", e)));
    }
    if let Some(pair) = &args.asymmetric {
        let parts = parse_scalar_list(pair, mode, "--asymmetric")?;
        if parts.len() != 2 {
            return Err(CliError::usage("--asymmetric expects c1,c2"));
        }
        return make_asymmetric(&parts[0], &parts[1])
            .map_err(|e| CliError::usage(format!("--asymmetric: {}", e)));
    }
    if let Some(spec) = &args.common_base {
        let (c1, c2) = parse_common_base(spec, mode)?;
        return make_asymmetric(&c1, &c2)
            .map_err(|e| CliError::usage(format!("--common-base: {}", e)));
    }
    let maps_spec = args.maps.as_ref().unwrap();
    let mut maps = Vec::new();
    for part in maps_spec.split(';') {
        let fields: Vec<&str> = part.split(',').map(str::trim).collect();
        if fields.len() != 2 {
            return Err(CliError::usage(format!(
                "--maps: expected ratio,translation but got {:?}",
                part
            )));
        }
        let raw_ratio = parse_scalar(fields[0], mode, "--maps ratio")?;
        let translation = parse_scalar(fields[1], mode, "--maps translation")?;
        let (ratio, sign) = if raw_ratio.is_negative() {
            (-&raw_ratio, Sign::Minus)
        } else {
            (raw_ratio, Sign::Plus)
        };
        maps.push(
            Similarity1D::new(ratio, sign, translation)
                .map_err(|e| CliError::usage(format!("--maps: {}", e)))?,
        );
    }
    IFS1D::new(maps).map_err(|e| CliError::usage(format!("--maps: {}", e)))
}

fn parse_common_base(spec: &str, mode: Mode) -> Result<(Scalar, Scalar), CliError> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(CliError::usage("--common-base expects c,p1,p2"));
    }
    let p1: u32 = parts[1]
        .parse()
        .map_err(|_| CliError::usage(format!("--common-base: bad exponent {:?}", parts[1])))?;
    let p2: u32 = parts[2]
        .parse()
        .map_err(|_| CliError::usage(format!("--common-base: bad exponent {:?}", parts[2])))?;
    match mode {
        Mode::Exact => {
            let c = parse_rational(parts[0]).ok_or_else(|| {
                CliError::usage(format!("--common-base: bad base {:?}", parts[0]))
            })?;
            let params = common_base(&c, p1, p2)
                .map_err(|e| CliError::usage(format!("--common-base: {}", e)))?;
            Ok((
                Scalar::from_rational(params.c1),
                Scalar::from_rational(params.c2),
            ))
        }
        Mode::Float => {
            let c: f64 = parts[0]
                .parse()
                .map_err(|_| CliError::usage(format!("--common-base: bad base {:?}", parts[0])))?;
            if p1 <= p2 || p2 == 0 {
                return Err(CliError::usage("--common-base needs p1 > p2 >= 1"));
            }
            Ok((
                Scalar::from_f64(c.powi(p1 as i32)),
                Scalar::from_f64(c.powi(p2 as i32)),
            ))
        }
    }
}

fn test_points(ifs: &IFS1D, points: &Option<String>, mode: Mode) -> Result<TestPoints, CliError> {
    match points {
        None => Ok(TestPoints::hull_endpoints(ifs)),
        Some(list) => {
            let values = parse_scalar_list(list, mode, "--points")?;
            TestPoints::from_raw(values).map_err(|e| CliError::usage(format!("--points: {}", e)))
        }
    }
}

fn reports_to_output(reports: &[SeparationReport], aborted: bool) -> RunOutput {
    let mut csv = String::from(SeparationReport::CSV_HEADER);
    csv.push('\n');
    for r in reports {
        csv.push_str(&r.csv_row());
        csv.push('\n');
    }
    let any_fail = reports.iter().any(|r| r.verdict == Verdict::Fail);
    let any_undetermined = reports.iter().any(|r| r.verdict == Verdict::Undetermined);
    let outcome = if any_fail {
        Outcome::Violation
    } else if any_undetermined {
        Outcome::Undetermined
    } else {
        Outcome::Complete
    };
    let verdict = if aborted {
        "budget-exceeded".to_string()
    } else if any_fail {
        "fail".to_string()
    } else if any_undetermined {
        "undetermined".to_string()
    } else {
        "pass".to_string()
    };
    RunOutput {
        csv,
        verdict,
        max_words_used: reports.iter().map(|r| r.word_count).max().unwrap_or(0),
        undetermined_pairs: reports.iter().map(|r| r.undetermined_pairs).sum(),
        outcome,
    }
}

fn fit_to_output(fit: &DimensionFit) -> RunOutput {
    let mut csv = String::from(DimensionFit::CSV_HEADER);
    csv.push('\n');
    csv.push_str(&fit.csv_rows());
    RunOutput {
        csv,
        verdict: "complete".to_string(),
        max_words_used: 0,
        undetermined_pairs: 0,
        outcome: Outcome::Complete,
    }
}

fn dispatch(command: &Command) -> Result<(OutputArgs, RunOutput), CliError> {
    match command {
        Command::Cover { ifs, b, output } => {
            let system = build_ifs(ifs)?;
            let scale = parse_scalar(b, mode_of(ifs), "--b")?;
            let set = cover_with_budget(&system, &scale, output.budget_words)?;
            let result = RunOutput {
                csv: set.to_csv(),
                verdict: "complete".to_string(),
                max_words_used: set.len(),
                undetermined_pairs: 0,
                outcome: Outcome::Complete,
            };
            Ok((output.clone(), result))
        }
        Command::Wsp {
            ifs,
            b,
            threshold,
            output,
        } => {
            let system = build_ifs(ifs)?;
            let mode = mode_of(ifs);
            let scale = parse_scalar(b, mode, "--b")?;
            let thr = threshold
                .as_ref()
                .map(|t| parse_scalar(t, mode, "--threshold"))
                .transpose()?;
            let report = wsp_min_separation(&system, &scale, thr.as_ref(), &budgets_from(output))?;
            Ok((output.clone(), reports_to_output(&[report], false)))
        }
        Command::Wsd {
            ifs,
            b,
            points,
            threshold,
            output,
        } => {
            let system = build_ifs(ifs)?;
            let mode = mode_of(ifs);
            let scale = parse_scalar(b, mode, "--b")?;
            let pts = test_points(&system, points, mode)?;
            let thr = threshold
                .as_ref()
                .map(|t| parse_scalar(t, mode, "--threshold"))
                .transpose()?;
            let report = wsd_report(&system, &scale, &pts, thr.as_ref(), &budgets_from(output))?;
            Ok((output.clone(), reports_to_output(&[report], false)))
        }
        Command::WsdHausdorff {
            ifs,
            b,
            depth,
            threshold,
            output,
        } => {
            let system = build_ifs(ifs)?;
            let mode = mode_of(ifs);
            let scale = parse_scalar(b, mode, "--b")?;
            let thr = threshold
                .as_ref()
                .map(|t| parse_scalar(t, mode, "--threshold"))
                .transpose()?;
            let report =
                wsd_hausdorff_report(&system, &scale, *depth, thr.as_ref(), &budgets_from(output))?;
            Ok((output.clone(), reports_to_output(&[report], false)))
        }
        Command::Scan {
            ifs,
            b_list,
            checker,
            points,
            depth,
            threshold,
            output,
        } => {
            let system = build_ifs(ifs)?;
            let mode = mode_of(ifs);
            let scales = parse_scalar_list(b_list, mode, "--b-list")?;
            let pts = test_points(&system, points, mode)?;
            let thr = threshold
                .as_ref()
                .map(|t| parse_scalar(t, mode, "--threshold"))
                .transpose()?;
            let checker = match checker {
                CheckerArg::Wsp => Checker::Wsp,
                CheckerArg::Wsd => Checker::Wsd,
                CheckerArg::WsdHausdorff => Checker::WsdHausdorff { depth: *depth },
            };
            let outcome = scan_scales(
                &system,
                &scales,
                checker,
                &pts,
                thr.as_ref(),
                &budgets_from(output),
            )?;
            let aborted = outcome.aborted.is_some();
            let mut result = reports_to_output(&outcome.reports, aborted);
            if let Some(err) = outcome.aborted {
                // Partial results are kept; the exit code still reports the trip.
                eprintln!("error[budget]: {} (partial results kept)", err);
                result.outcome = Outcome::BudgetExceeded;
            }
            Ok((output.clone(), result))
        }
        Command::DimSim { ifs, tol, output } => {
            let system = build_ifs(ifs)?;
            let d = similarity_dimension(&system, *tol)?;
            let residual: f64 = system
                .maps()
                .iter()
                .map(|m| m.ratio().to_f64().powf(d))
                .sum::<f64>()
                - 1.0;
            let mut csv = String::from(DimensionFit::CSV_HEADER);
            csv.push('\n');
            let _ = writeln!(csv, "similarity,,,,{:.16e},{:.16e}", d, residual.abs());
            let result = RunOutput {
                csv,
                verdict: "complete".to_string(),
                max_words_used: 0,
                undetermined_pairs: 0,
                outcome: Outcome::Complete,
            };
            Ok((output.clone(), result))
        }
        Command::DimBox {
            ifs,
            b,
            eps_list,
            output,
        } => {
            let system = build_ifs(ifs)?;
            let mode = mode_of(ifs);
            let scale = parse_scalar(b, mode, "--b")?;
            let eps = parse_scalar_list(eps_list, mode, "--eps-list")?;
            let set = cover_with_budget(&system, &scale, output.budget_words)?;
            let counts = box_counts(&set, &eps)?;
            let samples: Vec<(f64, u64)> = counts.iter().map(|(e, n)| (e.to_f64(), *n)).collect();
            let fit = fit_exponent(&samples)?;
            Ok((output.clone(), fit_to_output(&fit)))
        }
        Command::DimAssouad {
            ifs,
            pairs,
            centers,
            num_centers,
            output,
        } => {
            let system = build_ifs(ifs)?;
            let mode = mode_of(ifs);
            let mut scale_pairs = Vec::new();
            for part in pairs.split(';') {
                let fields: Vec<&str> = part.split(',').map(str::trim).collect();
                if fields.len() != 2 {
                    return Err(CliError::usage(format!(
                        "--pairs: expected r,rho, got {:?}",
                        part
                    )));
                }
                scale_pairs.push((
                    parse_scalar(fields[0], mode, "--pairs r")?,
                    parse_scalar(fields[1], mode, "--pairs rho")?,
                ));
            }
            let center_values = match centers {
                Some(list) => parse_scalar_list(list, mode, "--centers")?,
                None => fracsep_core::dimension::sample_attractor_points(
                    &system,
                    *num_centers,
                    12,
                    output.seed,
                ),
            };
            let fit = assouad_estimate_with(
                &system,
                &center_values,
                &scale_pairs,
                &budgets_from(output),
            )?;
            Ok((output.clone(), fit_to_output(&fit)))
        }
        Command::DiffBound {
            ifs,
            slack,
            b_list,
            threshold,
            output,
        } => {
            let system = build_ifs(ifs)?;
            let mode = mode_of(ifs);
            let mut params = DiffBoundParams::defaults_for(&system);
            params.slack = *slack;
            params.seed = output.seed;
            params.budgets = budgets_from(output);
            if let Some(list) = b_list {
                params.wsd_scales = parse_scalar_list(list, mode, "--b-list")?;
            }
            if let Some(t) = threshold {
                params.wsd_threshold = Some(parse_scalar(t, mode, "--threshold")?);
            }
            let report = diff_bound_check(&system, &params)?;
            let mut csv = String::from("set,kind,exponent,residual,bound,verdict\n");
            let _ = writeln!(
                csv,
                "attractor,{},{:.16e},{:.16e},,",
                report.fit_attractor.kind,
                report.fit_attractor.exponent,
                report.fit_attractor.residual
            );
            let _ = writeln!(
                csv,
                "difference,{},{:.16e},{:.16e},{:.16e},{}",
                report.fit_difference.kind,
                report.fit_difference.exponent,
                report.fit_difference.residual,
                report.bound,
                report.verdict
            );
            let _ = writeln!(csv, "similarity-dimension,,{:.16e},,,", report.sim_dim);
            let outcome = match report.verdict {
                Verdict::Pass => Outcome::Complete,
                Verdict::Fail => Outcome::Violation,
                Verdict::Undetermined => Outcome::Undetermined,
            };
            let result = RunOutput {
                csv,
                verdict: report.verdict.to_string(),
                max_words_used: 0,
                undetermined_pairs: 0,
                outcome,
            };
            Ok((output.clone(), result))
        }
        Command::Rewrite {
            lambda,
            coeffs,
            common_base,
            matrix,
            relaxed,
            output,
        } => {
            let result = run_rewrite(lambda, coeffs, common_base, matrix, *relaxed)?;
            Ok((output.clone(), result))
        }
        Command::Henderson {
            irrational,
            rational,
            b_list,
            rational_b_list,
            output,
        } => {
            let result = run_henderson(irrational, rational, b_list, rational_b_list, output)?;
            Ok((output.clone(), result))
        }
    }
}

fn run_rewrite(
    lambda: &Option<String>,
    coeffs: &Option<String>,
    common_base_spec: &Option<String>,
    matrix: &Option<String>,
    relaxed: bool,
) -> Result<RunOutput, CliError> {
    let mut csv = String::from("i,j,original,rewritten,borrowed\n");
    match (lambda, coeffs, common_base_spec, matrix) {
        (Some(lam), Some(digits), None, None) => {
            let lam = parse_rational(lam)
                .ok_or_else(|| CliError::usage(format!("--lambda: cannot parse {:?}", lam)))?;
            let digits = parse_bracketed_ints(digits)
                .ok_or_else(|| CliError::usage("--coeffs: expected a list like [1,-2,0]"))?;
            let v = CoeffVector::from_digits(&digits, lam)
                .map_err(|e| CliError::usage(e.to_string()))?;
            let r = rewrite_sign_uniform(&v).map_err(|e| CliError::usage(e.to_string()))?;
            for (i, ((orig, new), borrowed)) in digits
                .iter()
                .zip(r.vector.coeffs())
                .zip(&r.borrowed)
                .enumerate()
            {
                let _ = writeln!(csv, "{},,{},{},{}", i, orig, new, borrowed);
            }
        }
        (None, None, Some(base), Some(matrix)) => {
            let parts: Vec<&str> = base.split(',').map(str::trim).collect();
            if parts.len() != 3 {
                return Err(CliError::usage("--common-base expects c,p1,p2"));
            }
            let c = parse_rational(parts[0])
                .ok_or_else(|| CliError::usage(format!("bad base {:?}", parts[0])))?;
            let p1: u32 = parts[1]
                .parse()
                .map_err(|_| CliError::usage("bad exponent p1"))?;
            let p2: u32 = parts[2]
                .parse()
                .map_err(|_| CliError::usage("bad exponent p2"))?;
            let rows = parse_bracketed_matrix(matrix)
                .ok_or_else(|| CliError::usage("--matrix: expected [[1,-2],[0,1]]"))?;
            let m = BlockCoeffMatrix::from_digits(&rows, c, p1, p2)
                .map_err(|e| CliError::usage(e.to_string()))?;
            let eligibility = if relaxed {
                Eligibility::Relaxed
            } else {
                Eligibility::Strict
            };
            let r = rewrite_two_level_with(&m, eligibility)
                .map_err(|e| CliError::usage(e.to_string()))?;
            for (i, row) in rows.iter().enumerate() {
                for (j, orig) in row.iter().enumerate() {
                    let new = &r.matrix.entries()[i][j];
                    let borrowed = r.inner_borrowed[i][j] || (j == 0 && r.block_borrowed[i]);
                    let _ = writeln!(csv, "{},{},{},{},{}", i, j, orig, new, borrowed);
                }
            }
        }
        _ => {
            return Err(CliError::usage(
                "rewrite needs either --lambda with --coeffs, or --common-base with --matrix",
            ))
        }
    }
    Ok(RunOutput {
        csv,
        verdict: "complete".to_string(),
        max_words_used: 0,
        undetermined_pairs: 0,
        outcome: Outcome::Complete,
    })
}

fn run_henderson(
    irrational: &str,
    rational: &str,
    b_list: &str,
    rational_b_list: &Option<String>,
    output: &OutputArgs,
) -> Result<RunOutput, CliError> {
    let budgets = budgets_from(output);
    // irrational series
    let parts = parse_scalar_list(irrational, Mode::Exact, "--irrational")?;
    if parts.len() != 2 {
        return Err(CliError::usage("--irrational expects c1,c2"));
    }
    let irr_ifs = make_asymmetric(&parts[0], &parts[1])
        .map_err(|e| CliError::usage(format!("--irrational: {}", e)))?;
    let irr_scales = parse_scalar_list(b_list, Mode::Exact, "--b-list")?;
    let irr_pts = TestPoints::hull_endpoints(&irr_ifs);
    let irr = scan_scales(
        &irr_ifs,
        &irr_scales,
        Checker::Wsd,
        &irr_pts,
        None,
        &budgets,
    )?;
    if let Some(e) = irr.aborted {
        return Err(e.into());
    }

    // rational series
    let (c1, c2) = parse_common_base(rational, Mode::Exact)?;
    let rat_ifs =
        make_asymmetric(&c1, &c2).map_err(|e| CliError::usage(format!("--rational: {}", e)))?;
    let rat_scales = match rational_b_list {
        Some(list) => parse_scalar_list(list, Mode::Exact, "--rational-b-list")?,
        None => (1..=6).map(|k| c2.powi(k)).collect(),
    };
    let rat_pts = TestPoints::hull_endpoints(&rat_ifs);
    let rat = scan_scales(
        &rat_ifs,
        &rat_scales,
        Checker::Wsd,
        &rat_pts,
        None,
        &budgets,
    )?;
    if let Some(e) = rat.aborted {
        return Err(e.into());
    }

    let min_eps = |reports: &[SeparationReport]| -> Option<Scalar> {
        reports.iter().filter_map(|r| r.eps_star.clone()).min()
    };
    let irr_min = min_eps(&irr.reports);
    let rat_min = min_eps(&rat.reports);
    let contrast = match (&irr_min, &rat_min) {
        (Some(i), Some(r)) => i < r,
        _ => false,
    };

    let mut csv = String::from("series,");
    csv.push_str(SeparationReport::CSV_HEADER);
    csv.push('\n');
    for r in &irr.reports {
        let _ = writeln!(csv, "irrational,{}", r.csv_row());
    }
    for r in &rat.reports {
        let _ = writeln!(csv, "rational,{}", r.csv_row());
    }
    let fmt = |s: &Option<Scalar>| s.as_ref().map(|v| v.to_string()).unwrap_or_default();
    let _ = writeln!(
        csv,
        "contrast,,,,{},{},,{}",
        fmt(&irr_min),
        fmt(&rat_min),
        if contrast { "pass" } else { "fail" }
    );
    let max_words = irr
        .reports
        .iter()
        .chain(&rat.reports)
        .map(|r| r.word_count)
        .max()
        .unwrap_or(0);
    Ok(RunOutput {
        csv,
        verdict: if contrast {
            "pass".into()
        } else {
            "fail".into()
        },
        max_words_used: max_words,
        undetermined_pairs: 0,
        outcome: if contrast {
            Outcome::Complete
        } else {
            Outcome::Violation
        },
    })
}

fn parse_bracketed_ints(s: &str) -> Option<Vec<i64>> {
    let inner = s.trim().strip_prefix('[')?.strip_suffix(']')?;
    if inner.trim().is_empty() {
        return Some(Vec::new());
    }
    inner.split(',').map(|p| p.trim().parse().ok()).collect()
}

fn parse_bracketed_matrix(s: &str) -> Option<Vec<Vec<i64>>> {
    let inner = s.trim().strip_prefix('[')?.strip_suffix(']')?;
    let mut rows = Vec::new();
    let mut rest = inner.trim();
    while !rest.is_empty() {
        rest = rest.strip_prefix(',').unwrap_or(rest).trim_start();
        let start = rest.find('[')?;
        let end = rest.find(']')?;
        let row = &rest[start + 1..end];
        rows.push(
            row.split(',')
                .filter(|p| !p.trim().is_empty())
                .map(|p| p.trim().parse().ok())
                .collect::<Option<Vec<i64>>>()?,
        );
        rest = rest[end + 1..].trim_start();
    }
    Some(rows)
}
