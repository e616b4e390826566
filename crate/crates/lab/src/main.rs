use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::Serialize;

use rrd_core::discrepancy::GoodEventConfig;
use rrd_core::matrix::{Matrix01, SignedMatrix};
use rrd_core::rank::{corank_exact, rank_screened, IntMatrix};
use rrd_core::rng::seeded;
use rrd_core::sampler::{evaluate_asymptotic_count, for_each_regular, sample_signed_rrd, RrdSampler, SampleConfig, SampleMode};
use rrd_core::scalar::fraction;

use rrd_lab::experiments::{all_ones, restricted_sweep};
use rrd_lab::report::{to_csv, to_json, write_atomic};
use rrd_lab::{
    coupling_audit, d2_cycle_experiment, discrepancy_audit, erdos_oracle, mc_singularity, perm_sum_experiment,
    run_report, AuditMode, CouplingAuditSpec, ExperimentSpec, LabError,
};

#[derive(Parser)]
#[command(name = "rrdlab", version, about = "Random regular digraph matrix lab")]
struct Cli {
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Output file, or output directory for `mc-singularity`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    #[value(alias = "exact-dp")]
    Exact,
    Mcmc,
    Enumerate,
}

impl From<Mode> for SampleMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Exact => SampleMode::ExactDp,
            Mode::Mcmc => SampleMode::Mcmc,
            Mode::Enumerate => SampleMode::Enumerate,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Audit {
    Exact,
    Chi2,
}

impl From<Audit> for AuditMode {
    fn from(m: Audit) -> Self {
        match m {
            Audit::Exact => AuditMode::Exact,
            Audit::Chi2 => AuditMode::Chi2,
        }
    }
}

#[derive(Args)]
struct Size {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Draw matrices from M_{n,d}, or list all of them in enumerate mode.
    Sample {
        #[command(flatten)]
        size: Size,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        #[arg(long)]
        steps: Option<u64>,
        #[arg(long, default_value_t = 1)]
        count: u64,
        /// Attach iid signs.
        #[arg(long)]
        signed: bool,
    },
    /// Exact and asymptotic |M_{n,d}|.
    Count {
        #[command(flatten)]
        size: Size,
    },
    /// Singularity rates of M and M± over a grid of cells.
    McSingularity {
        /// Cells as `n:d`, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        grid: Vec<String>,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, value_enum, default_value_t = Mode::Mcmc)]
        mode: Mode,
        #[arg(long)]
        steps: Option<u64>,
        #[arg(long, default_value = "mc_singularity")]
        name: String,
    },
    /// d = 2 singular fraction against the cycle-parity benchmarks.
    D2Cycles {
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, value_enum, default_value_t = Mode::Mcmc)]
        mode: Mode,
        #[arg(long)]
        steps: Option<u64>,
        /// Judge against the benchmark weighted by the uniform law on M_{n,2}.
        #[arg(long)]
        weighted: bool,
    },
    /// Singular fraction of the sum of two random permutation matrices.
    PermSum {
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
    },
    /// Largest atom of a signed sum.
    Erdos {
        /// Coefficients such as `1,1/2,-3`.
        #[arg(long, value_delimiter = ',', conflicts_with = "ones", allow_hyphen_values = true)]
        x: Vec<String>,
        /// Use the all-ones vector of this length.
        #[arg(long)]
        ones: Option<usize>,
    },
    /// Checks that a random shuffle preserves the uniform law.
    CouplingAudit {
        #[command(flatten)]
        size: Size,
        /// Row pair, 1-based.
        #[arg(long, value_delimiter = ',', num_args = 2, default_values_t = [1, 2])]
        rows: Vec<usize>,
        #[arg(long, value_enum, default_value_t = Audit::Exact)]
        mode: Audit,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        /// Frozen columns, 1-based.
        #[arg(long, value_delimiter = ',')]
        frozen: Vec<usize>,
        /// Restricted shuffle size.
        #[arg(long)]
        s: Option<usize>,
        /// Every frozen set and size, exact mode.
        #[arg(long, conflicts_with_all = ["frozen", "s"])]
        all_restricted: bool,
    },
    /// Good-event and codegree checks on sampled matrices.
    DiscrepancyAudit {
        #[command(flatten)]
        size: Size,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, value_enum, default_value_t = Mode::Mcmc)]
        mode: Mode,
        /// JSON file with check constants.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 0.95)]
        min_pass_rate: f64,
    },
    /// Rank of a matrix file, or of a sampled matrix.
    Rank {
        /// Text matrix (`0/1` or `-/0/+` entries).
        #[arg(long, conflicts_with_all = ["n", "d"])]
        input: Option<PathBuf>,
        #[arg(long, requires = "d")]
        n: Option<usize>,
        #[arg(long, requires = "n")]
        d: Option<usize>,
        #[arg(long)]
        signed: bool,
        /// Always run exact elimination and report a kernel basis.
        #[arg(long)]
        certify: bool,
    },
}

enum Outcome {
    Pass,
    Fail,
}

struct Output<'a> {
    format: Format,
    out: Option<&'a Path>,
}

impl Output<'_> {
    fn emit<T: Serialize>(&self, value: &T, text: impl FnOnce() -> String, csv: Option<String>) -> Result<(), LabError> {
        let body = match self.format {
            Format::Json => to_json(value)?,
            Format::Text => text(),
            Format::Csv => csv.ok_or_else(|| LabError::InvalidSpec("csv output is not available here".into()))?,
        };
        match self.out {
            Some(path) => write_atomic(path, &body),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(body.as_bytes()).map_err(|e| LabError::io("<stdout>", e))
            }
        }
    }
}

fn parse_cell(s: &str) -> Result<(usize, usize), LabError> {
    let bad = || LabError::InvalidSpec(format!("cell {s:?} is not n:d"));
    let (n, d) = s.split_once([':', 'x']).ok_or_else(bad)?;
    Ok((n.trim().parse().map_err(|_| bad())?, d.trim().parse().map_err(|_| bad())?))
}

fn zero_based(v: &[usize], what: &str) -> Result<Vec<usize>, LabError> {
    v.iter()
        .map(|&x| x.checked_sub(1).ok_or_else(|| LabError::InvalidSpec(format!("{what} are 1-based"))))
        .collect()
}

fn verdict(pass: bool) -> Outcome {
    if pass {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}

fn run(cli: Cli) -> Result<Outcome, LabError> {
    let out = Output { format: cli.format, out: cli.out.as_deref() };
    let seed = cli.seed;
    match cli.command {
        Command::Sample { size, mode, steps, count, signed } => {
            let mode = SampleMode::from(mode);
            let mut cfg = SampleConfig::new(size.n, size.d, mode, seed);
            if let Some(s) = steps {
                cfg.mcmc_steps = s;
            }
            cfg.validate()?;
            let mut texts = Vec::new();
            if mode == SampleMode::Enumerate {
                for_each_regular(size.n, size.d, |m| texts.push(m.to_text(size.d)));
            } else {
                let sampler = RrdSampler::new(size.n, size.d, mode, Some(cfg.mcmc_steps))?;
                let mut rng = seeded(seed);
                for _ in 0..count {
                    texts.push(if signed {
                        sample_signed_rrd(&sampler, &mut rng).to_text(size.d)
                    } else {
                        sampler.sample(&mut rng).to_text(size.d)
                    });
                }
            }
            let rows: Vec<Vec<&str>> = texts.iter().map(|t| t.lines().skip(1).collect()).collect();
            out.emit(&rows, || texts.join("\n"), None)?;
            Ok(Outcome::Pass)
        }
        Command::Count { size } => {
            let r = evaluate_asymptotic_count(size.n, size.d)?;
            let text = || {
                let exact = r.exact.as_ref().map_or("over budget".to_string(), |e| e.to_string());
                let ratio = r.ratio.map_or("-".to_string(), |x| format!("{x:.6}"));
                format!(
                    "n={} d={}\nexact      {exact}\nasymptotic {:.6e}\nratio      {ratio}\n",
                    r.n, r.d, r.asymptotic
                )
            };
            let csv = format!(
                "n,d,exact,asymptotic,ratio\n{},{},{},{},{}\n",
                r.n,
                r.d,
                r.exact.as_ref().map_or(String::new(), |e| e.to_string()),
                r.asymptotic,
                r.ratio.map_or(String::new(), |x| x.to_string())
            );
            out.emit(&r, text, Some(csv))?;
            Ok(Outcome::Pass)
        }
        Command::McSingularity { grid, trials, mode, steps, name } => {
            let grid = grid.iter().map(|s| parse_cell(s)).collect::<Result<Vec<_>, _>>()?;
            let spec = ExperimentSpec {
                name,
                grid,
                trials,
                mode: mode.into(),
                steps,
                seed,
                out: cli.out.clone().unwrap_or_else(|| PathBuf::from(".")),
            };
            if cli.out.is_some() {
                let files = run_report(&spec)?;
                println!("{}\n{}", files.json.display(), files.csv.display());
                return Ok(Outcome::Pass);
            }
            let cells = mc_singularity(&spec)?;
            let text = || {
                let mut s = String::from("n\td\ttrials\tsingular\tci95\t\tsigned\tci95\t\tseconds\n");
                for c in &cells {
                    s += &format!(
                        "{}\t{}\t{}\t{}\t[{:.4},{:.4}]\t{}\t[{:.4},{:.4}]\t{:.2}\n",
                        c.n,
                        c.d,
                        c.plain.trials,
                        c.plain.hits,
                        c.plain.ci_low,
                        c.plain.ci_high,
                        c.signed.hits,
                        c.signed.ci_low,
                        c.signed.ci_high,
                        c.plain.wall_time
                    );
                }
                s
            };
            Output { format: cli.format, out: None }.emit(&cells, text, Some(to_csv(&cells)))?;
            Ok(Outcome::Pass)
        }
        Command::D2Cycles { n, trials, mode, steps, weighted } => {
            let rows = d2_cycle_experiment(&n, trials, mode.into(), steps, seed)?;
            let pass = rows.iter().all(|r| if weighted { r.within_ci_weighted } else { r.within_ci });
            let text = || {
                let mut s = String::from("n\ttrials\tsingular\tp_hat\tci95\t\t\t1-q_n\t\tweighted\n");
                for r in &rows {
                    s += &format!(
                        "{}\t{}\t{}\t{:.5}\t[{:.5},{:.5}]\t{:.5}{}\t{:.5}{}\n",
                        r.n,
                        r.estimate.trials,
                        r.estimate.hits,
                        r.estimate.p_hat,
                        r.estimate.ci_low,
                        r.estimate.ci_high,
                        r.one_minus_q_f64,
                        if r.within_ci { "" } else { " *" },
                        r.weighted_f64,
                        if r.within_ci_weighted { "" } else { " *" },
                    );
                }
                s
            };
            let mut csv = String::from("n,trials,hits,p_hat,ci_low,ci_high,seed,one_minus_q,weighted\n");
            for r in &rows {
                let e = &r.estimate;
                csv += &format!(
                    "{},{},{},{},{},{},{},{},{}\n",
                    r.n, e.trials, e.hits, e.p_hat, e.ci_low, e.ci_high, e.seed, r.one_minus_q_f64, r.weighted_f64
                );
            }
            out.emit(&rows, text, Some(csv))?;
            Ok(verdict(pass))
        }
        Command::PermSum { n, trials } => {
            let rows = perm_sum_experiment(&n, trials, seed)?;
            let text = || {
                let mut s = String::from("n\ttrials\tsingular\tp_hat\tci95\n");
                for r in &rows {
                    let e = &r.estimate;
                    s += &format!(
                        "{}\t{}\t{}\t{:.5}\t[{:.5},{:.5}]{}\n",
                        r.n,
                        e.trials,
                        e.hits,
                        e.p_hat,
                        e.ci_low,
                        e.ci_high,
                        if r.exhaustive { "\texhaustive" } else { "" }
                    );
                }
                s
            };
            let mut csv = String::from("n,trials,hits,p_hat,ci_low,ci_high,seed\n");
            for r in &rows {
                let e = &r.estimate;
                csv += &format!("{},{},{},{},{},{},{}\n", r.n, e.trials, e.hits, e.p_hat, e.ci_low, e.ci_high, e.seed);
            }
            out.emit(&rows, text, Some(csv))?;
            Ok(Outcome::Pass)
        }
        Command::Erdos { x, ones } => {
            let x: Vec<BigRational> = match ones {
                Some(m) => all_ones(m),
                None => x
                    .iter()
                    .map(|s| fraction::parse(s).ok_or_else(|| LabError::InvalidSpec(format!("bad coefficient {s:?}"))))
                    .collect::<Result<_, _>>()?,
            };
            let r = erdos_oracle(&x)?;
            let text = || {
                format!(
                    "m={}\nmax_atom {} ({:.6})\nbound    {} ({:.6})\n1/sqrt(m) {:.6}\n",
                    r.m,
                    fraction::to_string(&r.max_atom),
                    num_traits::ToPrimitive::to_f64(&r.max_atom).unwrap_or(f64::NAN),
                    fraction::to_string(&r.bound),
                    num_traits::ToPrimitive::to_f64(&r.bound).unwrap_or(f64::NAN),
                    r.inv_sqrt_m
                )
            };
            out.emit(&r, text, None)?;
            Ok(verdict(r.within_bound && r.within_sqrt))
        }
        Command::CouplingAudit { size, rows, mode, trials, frozen, s, all_restricted } => {
            let rows = zero_based(&rows, "rows")?;
            let (i1, i2) = (rows[0], rows[1]);
            let verdicts = if all_restricted {
                restricted_sweep(size.n, size.d, i1, i2)?
            } else {
                let restricted = match s {
                    Some(s) => Some((zero_based(&frozen, "frozen columns")?, s)),
                    None if !frozen.is_empty() => {
                        return Err(LabError::InvalidSpec("--frozen needs --s".into()));
                    }
                    None => None,
                };
                let spec = CouplingAuditSpec { n: size.n, d: size.d, i1, i2, restricted, mode: mode.into(), trials, seed };
                vec![coupling_audit(&spec)?]
            };
            let pass = verdicts.iter().all(|v| v.pass);
            let text = || {
                let mut s = String::new();
                for v in &verdicts {
                    let stat = match &v.chi_square {
                        Some(c) => format!("chi2 {:.2} < {:.2}", c.statistic, c.critical),
                        None => format!("tv {}", v.tv_exact.as_ref().map_or(v.tv.to_string(), fraction::to_string)),
                    };
                    s += &format!(
                        "frozen={:?} s={} support={} {stat} {}\n",
                        v.frozen.iter().map(|j| j + 1).collect::<Vec<_>>(),
                        v.s.map_or("full".to_string(), |s| s.to_string()),
                        v.support,
                        if v.pass { "PASS" } else { "FAIL" }
                    );
                }
                s
            };
            out.emit(&verdicts, text, None)?;
            Ok(verdict(pass))
        }
        Command::DiscrepancyAudit { size, trials, mode, config, min_pass_rate } => {
            let cfg = match config {
                Some(path) => {
                    let raw = fs::read_to_string(&path).map_err(|e| LabError::io(&path, e))?;
                    serde_json::from_str::<GoodEventConfig>(&raw)?
                }
                None => GoodEventConfig::default(),
            };
            let audit = discrepancy_audit(size.n, size.d, trials, mode.into(), &cfg, seed)?;
            let rate = audit.estimate.p_hat;
            let text = || {
                let mut s = format!(
                    "n={} d={} passed {}/{} ({:.3}, ci95 [{:.3},{:.3}])\n",
                    audit.n, audit.d, audit.passed, trials, rate, audit.estimate.ci_low, audit.estimate.ci_high
                );
                for smp in audit.samples.iter().filter(|s| !s.pass) {
                    let failed: Vec<&str> = smp
                        .good_d
                        .events
                        .iter()
                        .chain(std::iter::once(&smp.codegree))
                        .filter(|e| !e.pass)
                        .map(|e| e.name.as_str())
                        .collect();
                    s += &format!("trial {} failed: {}\n", smp.trial, failed.join(", "));
                }
                s
            };
            out.emit(&audit, text, None)?;
            Ok(verdict(rate >= min_pass_rate))
        }
        Command::Rank { input, n, d, signed, certify } => {
            let (a, label) = match (input, n, d) {
                (Some(path), _, _) => {
                    let raw = fs::read_to_string(&path).map_err(|e| LabError::io(&path, e))?;
                    let is_signed = raw.lines().skip(1).any(|l| l.contains(['+', '-']));
                    if is_signed {
                        (IntMatrix::from(&SignedMatrix::parse_text(&raw)?.0), path.display().to_string())
                    } else {
                        (IntMatrix::from(&Matrix01::parse_text(&raw)?.0), path.display().to_string())
                    }
                }
                (None, Some(n), Some(d)) => {
                    let sampler = RrdSampler::best(n, d)?;
                    let mut rng = seeded(seed);
                    let a = if signed {
                        IntMatrix::from(&sample_signed_rrd(&sampler, &mut rng))
                    } else {
                        IntMatrix::from(&sampler.sample(&mut rng))
                    };
                    (a, format!("sample n={n} d={d} seed={seed}"))
                }
                _ => return Err(LabError::InvalidSpec("give --input or both --n and --d".into())),
            };
            let r = if certify { corank_exact(&a) } else { rank_screened(&a) };
            let text = || {
                let mut s = format!("{label}\nrank {} corank {} ({:?})\n", r.rank, r.corank, r.method);
                for v in &r.kernel_basis {
                    s += &v.iter().map(fraction::to_string).collect::<Vec<_>>().join(" ");
                    s.push('\n');
                }
                s
            };
            out.emit(&r, text, None)?;
            Ok(Outcome::Pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            eprintln!("rrdlab: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("rrdlab: {e}");
            ExitCode::from(2)
        }
    }
}
