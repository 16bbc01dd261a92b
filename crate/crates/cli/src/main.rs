//! Command-line front end: every library operation behind one binary with
//! reproducible, machine-readable output.
//!
//! Exit codes: 0 success, 2 budget refusal, 1 any other error. All numeric
//! output is exact (decimal integers and rationals); base-q logarithmic
//! values are the one approximate rendering and print as `q^<exponent>`.

mod output;
mod selftest;

use clap::{Args, Parser, Subcommand};
use eaclass_core::burnside::{relative_error, CountMethod};
use eaclass_core::ccz::ccz_equivalent;
use eaclass_core::collision::{
    collision_prob_exact, collision_upper_ccz, collision_upper_ea, nontrivial_stab_bound,
    nontrivial_stab_census, orbit_partition,
};
use eaclass_core::ea::{ea_equivalent, stabilizer, AffineMap, AglGroup, EAElement};
use eaclass_core::fixcount::{fix_count_bruteforce, fix_count_exact, fix_count_upper, BoundCase};
use eaclass_core::func::{function_space_size, read_table};
use eaclass_core::linalg::{agl_order, gl_order, FqMatrix, FqVector};
use eaclass_core::logq::decimal_string;
use eaclass_core::mc::{mc_collision, mc_trivial_stab};
use eaclass_core::{Error, Field, Settings};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use output::{Format, Table};
use std::path::PathBuf;
use std::process::ExitCode;

const DECIMAL_DIGITS: u32 = 20;
/// Exact reference values accompany sampled estimates up to this space size.
const EXACT_REFERENCE_LIMIT: u64 = 1 << 16;

#[derive(Parser)]
#[command(
    name = "eaclass",
    version,
    about = "Exact group-action computations on vectorial function tables",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,

    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Worker threads for the data-parallel sweeps (0 = library default).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Largest group order enumerated element by element.
    #[arg(long, global = true, env = "EACLASS_ENUMERATION_BUDGET")]
    enumeration_budget: Option<u64>,

    /// Largest function-space size swept exhaustively.
    #[arg(long, global = true, env = "EACLASS_ORACLE_BUDGET")]
    oracle_budget: Option<u64>,

    /// Largest affine-fit solution space enumerated.
    #[arg(long, global = true, env = "EACLASS_FIT_BUDGET")]
    fit_budget: Option<u64>,

    /// Largest group order partitioned into conjugacy classes.
    #[arg(long, global = true, env = "EACLASS_CONJUGACY_BUDGET")]
    conjugacy_budget: Option<u64>,
}

#[derive(Args, Clone)]
struct SizeArgs {
    /// Field size (a supported prime power).
    #[arg(long)]
    q: u64,
    /// Input dimension.
    #[arg(long)]
    n: usize,
    /// Output dimension.
    #[arg(long)]
    m: usize,
}

#[derive(Args, Clone)]
struct ElementArgs {
    /// Group element as a JSON file.
    #[arg(long, conflicts_with_all = ["p", "a", "qmat", "b"])]
    element: Option<PathBuf>,
    /// Input matrix, comma-separated row-major entries.
    #[arg(long, requires_all = ["a", "qmat", "b"])]
    p: Option<String>,
    /// Input translation, comma-separated entries.
    #[arg(long)]
    a: Option<String>,
    /// Output matrix, comma-separated row-major entries.
    #[arg(long)]
    qmat: Option<String>,
    /// Output translation, comma-separated entries.
    #[arg(long)]
    b: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Orders of GL(n, q) and AGL(n, q).
    GroupOrder {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
    },
    /// Exact count of functions fixed by one group element.
    FixCount {
        #[command(flatten)]
        size: SizeArgs,
        #[command(flatten)]
        element: ElementArgs,
    },
    /// Sweep the whole group: fixed-count sum, class count, extremes.
    FixCountAll {
        #[command(flatten)]
        size: SizeArgs,
        /// Also replay every element against the brute-force oracle.
        #[arg(long)]
        oracle: bool,
    },
    /// Number of equivalence classes by group averaging.
    CountClasses {
        #[command(flatten)]
        size: SizeArgs,
        #[arg(long, value_enum, default_value = "exhaustive")]
        method: MethodArg,
    },
    /// Exact ratio of the class count to the naive estimate.
    RelativeError {
        #[command(flatten)]
        size: SizeArgs,
        #[arg(long, value_enum, default_value = "exhaustive")]
        method: MethodArg,
    },
    /// Full orbit partition of the function space.
    OrbitCensus {
        #[command(flatten)]
        size: SizeArgs,
    },
    /// Stabilizer of one function table.
    Stabilizer {
        /// Function table file.
        #[arg(long)]
        input: PathBuf,
        /// Also write every stabilizer element to a JSON file.
        #[arg(long)]
        elements_out: Option<PathBuf>,
    },
    /// Exact fraction of functions with a nontrivial stabilizer.
    StabCensus {
        #[command(flatten)]
        size: SizeArgs,
    },
    /// Sampled fraction of functions with a nontrivial stabilizer.
    StabSample {
        #[command(flatten)]
        size: SizeArgs,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
    },
    /// Collision probability: exact from the census, or sampled.
    Collision {
        #[command(flatten)]
        size: SizeArgs,
        #[arg(long, conflicts_with = "mc")]
        exact: bool,
        #[arg(long, requires_all = ["trials", "seed"])]
        mc: bool,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Closed-form bound evaluations over an (n, m) grid.
    Bounds {
        #[command(flatten)]
        size: SizeArgs,
        /// Upper end of the n sweep (inclusive; defaults to n).
        #[arg(long)]
        n_max: Option<usize>,
        /// Upper end of the m sweep (inclusive; defaults to m).
        #[arg(long)]
        m_max: Option<usize>,
    },
    /// Equivalence test for two function tables, with witness.
    EaCheck {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
        /// Write the witness element to a JSON file when found.
        #[arg(long)]
        witness_out: Option<PathBuf>,
    },
    /// Graph-equivalence test for two function tables, with witness.
    CczCheck {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
        #[arg(long)]
        witness_out: Option<PathBuf>,
    },
    /// Run the oracle-equivalence suites; nonzero exit on any failure.
    Selftest,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, clap::ValueEnum)]
enum MethodArg {
    Exhaustive,
    Conjugacy,
}

impl From<MethodArg> for CountMethod {
    fn from(m: MethodArg) -> CountMethod {
        match m {
            MethodArg::Exhaustive => CountMethod::Exhaustive,
            MethodArg::Conjugacy => CountMethod::Conjugacy,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    ExitCode::SUCCESS
                }
                _ => {
                    eprint!("{e}");
                    ExitCode::from(1)
                }
            };
        }
    };
    #[cfg(feature = "parallel")]
    if cli.threads > 0 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::BudgetExceeded { .. } | Error::SolutionSpaceTooLarge { .. } => {
                    ExitCode::from(2)
                }
                _ => ExitCode::from(1),
            }
        }
    }
}

fn settings_from(cli: &Cli) -> Settings {
    let mut s = Settings::default();
    if let Some(v) = cli.enumeration_budget {
        s.enumeration_budget = v;
    }
    if let Some(v) = cli.oracle_budget {
        s.oracle_budget = v;
    }
    if let Some(v) = cli.fit_budget {
        s.fit_budget = v;
    }
    if let Some(v) = cli.conjugacy_budget {
        s.conjugacy_budget = v;
    }
    s
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    let settings = settings_from(cli);
    let (table, code) = dispatch(cli, &settings)?;
    emit(cli, &table)?;
    Ok(code)
}

fn emit(cli: &Cli, table: &Table) -> Result<(), Error> {
    match &cli.output {
        Some(path) => {
            let mut buf = Vec::new();
            table.render(cli.format, &mut buf).expect("in-memory write");
            std::fs::write(path, buf)
                .map_err(|source| Error::Io { path: path.display().to_string(), source })
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            table
                .render(cli.format, &mut lock)
                .map_err(|source| Error::Io { path: "<stdout>".into(), source })
        }
    }
}

fn dispatch(cli: &Cli, settings: &Settings) -> Result<(Table, ExitCode), Error> {
    let ok = ExitCode::SUCCESS;
    match &cli.command {
        Command::GroupOrder { q, n } => {
            let mut t = Table::new(vec!["q", "n", "gl_order", "agl_order"]);
            t.push(vec![
                q.to_string(),
                n.to_string(),
                gl_order(*n, *q)?.to_string(),
                agl_order(*n, *q)?.to_string(),
            ]);
            Ok((t, ok))
        }
        Command::FixCount { size, element } => {
            let g = load_element(size, element)?;
            let detail = fix_count_exact(&g);
            let (case, exponent) = if g.is_identity() {
                ("identity".to_string(), String::new())
            } else {
                let b = fix_count_upper(&g)?;
                (bound_case_name(b.case).to_string(), decimal_string(&b.exponent, 12))
            };
            let mut t = Table::new(vec![
                "q",
                "n",
                "m",
                "orbit_count",
                "total",
                "log_q_total",
                "bound_case",
                "bound_exponent",
                "per_orbit",
            ]);
            let per_orbit = detail
                .per_orbit
                .iter()
                .map(|(len, count)| format!("{len}:{count}"))
                .collect::<Vec<_>>()
                .join(";");
            t.push(vec![
                size.q.to_string(),
                size.n.to_string(),
                size.m.to_string(),
                detail.per_orbit.len().to_string(),
                detail.total.to_string(),
                detail.log_q_total.map(|k| k.to_string()).unwrap_or_default(),
                case,
                exponent,
                per_orbit,
            ]);
            Ok((t, ok))
        }
        Command::FixCountAll { size, oracle } => {
            let field = Field::get(size.q)?;
            let report = fix_count_all(field, size, *oracle, settings)?;
            Ok((report, ok))
        }
        Command::CountClasses { size, method } => {
            let field = Field::get(size.q)?;
            let r = relative_error(field, size.n, size.m, (*method).into(), settings)?;
            Ok((class_count_table(&r.report), ok))
        }
        Command::RelativeError { size, method } => {
            let field = Field::get(size.q)?;
            let r = relative_error(field, size.n, size.m, (*method).into(), settings)?;
            let mut t = Table::new(vec![
                "q",
                "n",
                "m",
                "method",
                "gamma_order",
                "class_count",
                "naive_num",
                "naive_den",
                "ratio_num",
                "ratio_den",
                "ratio_decimal",
                "abs_error_num",
                "abs_error_den",
                "abs_error_decimal",
            ]);
            t.push(vec![
                r.report.q.to_string(),
                r.report.n.to_string(),
                r.report.m.to_string(),
                r.report.method.to_string(),
                r.report.gamma_order.to_string(),
                r.report.class_count.to_string(),
                r.report.naive_estimate.numer().to_string(),
                r.report.naive_estimate.denom().to_string(),
                r.report.ratio.numer().to_string(),
                r.report.ratio.denom().to_string(),
                decimal_string(&r.report.ratio, DECIMAL_DIGITS),
                r.abs_error.numer().to_string(),
                r.abs_error.denom().to_string(),
                decimal_string(&r.abs_error, DECIMAL_DIGITS),
            ]);
            Ok((t, ok))
        }
        Command::OrbitCensus { size } => {
            let field = Field::get(size.q)?;
            let census = orbit_partition(field, size.n, size.m, settings)?;
            let mut t = Table::new(vec![
                "orbit_id",
                "size",
                "stabilizer_size",
                "representative_table",
            ]);
            for (i, o) in census.orbits.iter().enumerate() {
                let rep = o
                    .representative
                    .table()
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(";");
                t.push(vec![
                    i.to_string(),
                    o.size.to_string(),
                    o.stabilizer_size.to_string(),
                    rep,
                ]);
            }
            Ok((t, ok))
        }
        Command::Stabilizer { input, elements_out } => {
            let f = read_table(input)?;
            let report = stabilizer(&f, settings)?;
            if let Some(path) = elements_out {
                let docs: Vec<serde_json::Value> =
                    report.elements.iter().map(|g| compact_json(&g.to_json())).collect();
                let text = serde_json::to_string_pretty(&docs).expect("serializable");
                std::fs::write(path, text)
                    .map_err(|source| Error::Io { path: path.display().to_string(), source })?;
            }
            let mut t = Table::new(vec!["q", "n", "m", "stabilizer_size", "is_trivial"]);
            t.push(vec![
                f.q().to_string(),
                f.n().to_string(),
                f.m().to_string(),
                report.size.to_string(),
                report.is_trivial.to_string(),
            ]);
            Ok((t, ok))
        }
        Command::StabCensus { size } => {
            let field = Field::get(size.q)?;
            let r = nontrivial_stab_census(field, size.n, size.m, settings)?;
            let mut t = Table::new(vec![
                "q",
                "n",
                "m",
                "nontrivial",
                "total",
                "fraction_num",
                "fraction_den",
                "fraction_decimal",
            ]);
            t.push(vec![
                size.q.to_string(),
                size.n.to_string(),
                size.m.to_string(),
                r.nontrivial.to_string(),
                r.total.to_string(),
                r.fraction.numer().to_string(),
                r.fraction.denom().to_string(),
                decimal_string(&r.fraction, DECIMAL_DIGITS),
            ]);
            Ok((t, ok))
        }
        Command::StabSample { size, trials, seed } => {
            let field = Field::get(size.q)?;
            let est = mc_trivial_stab(field, size.n, size.m, *trials, *seed, settings)?;
            let exact = exact_stab_reference(field, size, settings)?;
            Ok((experiment_table(size, &est, exact), ok))
        }
        Command::Collision { size, exact, mc, trials, seed } => {
            let field = Field::get(size.q)?;
            if *mc {
                let est = mc_collision(
                    field,
                    size.n,
                    size.m,
                    trials.expect("required by clap"),
                    seed.expect("required by clap"),
                    settings,
                )?;
                let exact_ref = exact_collision_reference(field, size, settings)?;
                return Ok((experiment_table(size, &est, exact_ref), ExitCode::SUCCESS));
            }
            if !*exact {
                return Err(Error::InvalidArgument(
                    "choose --exact or --mc for the collision probability".into(),
                ));
            }
            let census = orbit_partition(field, size.n, size.m, settings)?;
            let prob = collision_prob_exact(&census);
            let eps = nontrivial_stab_census(field, size.n, size.m, settings)?.fraction;
            let upper = collision_upper_ea(size.q, size.n, size.m)?;
            let upper_ratio = upper.ratio.clone().expect("materializable at census sizes");
            let lower = (BigRational::one() - &eps) * &upper_ratio;
            let mut t = Table::new(vec![
                "q",
                "n",
                "m",
                "orbits",
                "prob_num",
                "prob_den",
                "prob_decimal",
                "upper_num",
                "upper_den",
                "upper_vacuous",
                "eps_num",
                "eps_den",
                "lower_num",
                "lower_den",
            ]);
            t.push(vec![
                size.q.to_string(),
                size.n.to_string(),
                size.m.to_string(),
                census.num_orbits().to_string(),
                prob.numer().to_string(),
                prob.denom().to_string(),
                decimal_string(&prob, DECIMAL_DIGITS),
                upper_ratio.numer().to_string(),
                upper_ratio.denom().to_string(),
                upper.vacuous.to_string(),
                eps.numer().to_string(),
                eps.denom().to_string(),
                lower.numer().to_string(),
                lower.denom().to_string(),
            ]);
            Ok((t, ok))
        }
        Command::Bounds { size, n_max, m_max } => {
            let n_hi = n_max.unwrap_or(size.n).max(size.n);
            let m_hi = m_max.unwrap_or(size.m).max(size.m);
            let mut t = Table::new(vec![
                "q",
                "n",
                "m",
                "ea_bound",
                "ea_exponent",
                "ea_vacuous",
                "ccz_bound",
                "ccz_exponent",
                "ccz_vacuous",
                "stab_bound",
                "stab_case1_exponent",
                "stab_case2_exponent",
                "stab_binding_case",
                "stab_exponent",
                "stab_vacuous",
            ]);
            for n in size.n..=n_hi {
                for m in size.m..=m_hi {
                    let ea = collision_upper_ea(size.q, n, m)?;
                    let ccz = collision_upper_ccz(size.q, n, m)?;
                    let stab = nontrivial_stab_bound(size.q, n, m)?;
                    t.push(vec![
                        size.q.to_string(),
                        n.to_string(),
                        m.to_string(),
                        ea.logq.to_string(),
                        format!("{:.12}", ea.logq.exponent),
                        ea.vacuous.to_string(),
                        ccz.logq.to_string(),
                        format!("{:.12}", ccz.logq.exponent),
                        ccz.vacuous.to_string(),
                        format!("{}^{:.12}", size.q, stab.exponent),
                        format!("{:.12}", stab.case1_exponent),
                        format!("{:.12}", stab.case2_exponent),
                        bound_case_name(stab.binding).to_string(),
                        format!("{:.12}", stab.exponent),
                        stab.vacuous.to_string(),
                    ]);
                }
            }
            Ok((t, ok))
        }
        Command::EaCheck { f, g, witness_out } => {
            let lhs = read_table(f)?;
            let rhs = read_table(g)?;
            let witness = ea_equivalent(&lhs, &rhs, settings)?;
            if let (Some(path), Some(w)) = (witness_out, witness.as_ref()) {
                std::fs::write(path, w.to_json())
                    .map_err(|source| Error::Io { path: path.display().to_string(), source })?;
            }
            let mut t = Table::new(vec!["q", "n", "m", "equivalent", "witness"]);
            t.push(vec![
                lhs.q().to_string(),
                lhs.n().to_string(),
                lhs.m().to_string(),
                witness.is_some().to_string(),
                witness.map(|w| compact_json(&w.to_json()).to_string()).unwrap_or_default(),
            ]);
            Ok((t, ok))
        }
        Command::CczCheck { f, g, witness_out } => {
            let lhs = read_table(f)?;
            let rhs = read_table(g)?;
            let witness = ccz_equivalent(&lhs, &rhs, settings)?;
            let witness_json = witness.as_ref().map(graph_witness_json);
            if let (Some(path), Some(json)) = (witness_out, witness_json.as_ref()) {
                let text = serde_json::to_string_pretty(json).expect("serializable");
                std::fs::write(path, text)
                    .map_err(|source| Error::Io { path: path.display().to_string(), source })?;
            }
            let mut t = Table::new(vec!["q", "n", "m", "equivalent", "witness"]);
            t.push(vec![
                lhs.q().to_string(),
                lhs.n().to_string(),
                lhs.m().to_string(),
                witness.is_some().to_string(),
                witness_json.map(|j| j.to_string()).unwrap_or_default(),
            ]);
            Ok((t, ok))
        }
        Command::Selftest => {
            let results = selftest::run_all(settings);
            let mut t = Table::new(vec!["suite", "status", "detail"]);
            let mut all_ok = true;
            for r in &results {
                all_ok &= r.passed;
                t.push(vec![
                    r.name.to_string(),
                    if r.passed { "pass".into() } else { "fail".into() },
                    r.detail.clone(),
                ]);
            }
            Ok((t, if all_ok { ExitCode::SUCCESS } else { ExitCode::from(1) }))
        }
    }
}

fn bound_case_name(case: BoundCase) -> &'static str {
    match case {
        BoundCase::InputSide => "input-side",
        BoundCase::OutputSide => "output-side",
    }
}

fn class_count_table(r: &eaclass_core::burnside::ClassCountReport) -> Table {
    let mut t = Table::new(vec![
        "q",
        "n",
        "m",
        "method",
        "gamma_order",
        "class_count",
        "naive_num",
        "naive_den",
        "ratio_decimal",
    ]);
    t.push(vec![
        r.q.to_string(),
        r.n.to_string(),
        r.m.to_string(),
        r.method.to_string(),
        r.gamma_order.to_string(),
        r.class_count.to_string(),
        r.naive_estimate.numer().to_string(),
        r.naive_estimate.denom().to_string(),
        decimal_string(&r.ratio, DECIMAL_DIGITS),
    ]);
    t
}

fn experiment_table(
    size: &SizeArgs,
    est: &eaclass_core::mc::McEstimate,
    exact: Option<BigRational>,
) -> Table {
    let mut t = Table::new(vec![
        "q",
        "n",
        "m",
        "generator",
        "seed",
        "trials",
        "successes",
        "estimate_num",
        "estimate_den",
        "estimate_decimal",
        "ci_low",
        "ci_high",
        "exact_num",
        "exact_den",
    ]);
    t.push(vec![
        size.q.to_string(),
        size.n.to_string(),
        size.m.to_string(),
        eaclass_core::rng::GENERATOR.to_string(),
        est.seed.to_string(),
        est.trials.to_string(),
        est.successes.to_string(),
        est.estimate.numer().to_string(),
        est.estimate.denom().to_string(),
        decimal_string(&est.estimate, DECIMAL_DIGITS),
        format!("{:.12}", est.ci_low),
        format!("{:.12}", est.ci_high),
        exact.as_ref().map(|e| e.numer().to_string()).unwrap_or_default(),
        exact.as_ref().map(|e| e.denom().to_string()).unwrap_or_default(),
    ]);
    t
}

fn space_within(size: &SizeArgs, settings: &Settings, limit: u64) -> Result<bool, Error> {
    let (space, _) = function_space_size(size.q, size.n, size.m)?;
    Ok(space.to_u64().is_some_and(|s| s <= limit.min(settings.oracle_budget)))
}

fn exact_stab_reference(
    field: &'static Field,
    size: &SizeArgs,
    settings: &Settings,
) -> Result<Option<BigRational>, Error> {
    if space_within(size, settings, EXACT_REFERENCE_LIMIT)? {
        Ok(Some(nontrivial_stab_census(field, size.n, size.m, settings)?.fraction))
    } else {
        Ok(None)
    }
}

fn exact_collision_reference(
    field: &'static Field,
    size: &SizeArgs,
    settings: &Settings,
) -> Result<Option<BigRational>, Error> {
    if space_within(size, settings, EXACT_REFERENCE_LIMIT)? {
        let census = orbit_partition(field, size.n, size.m, settings)?;
        Ok(Some(collision_prob_exact(&census)))
    } else {
        Ok(None)
    }
}

fn compact_json(pretty: &str) -> serde_json::Value {
    serde_json::from_str(pretty).expect("round-trip of generated JSON")
}

fn graph_witness_json(w: &AffineMap) -> serde_json::Value {
    serde_json::json!({
        "q": w.field().q(),
        "dim": w.dim(),
        "L": w.matrix().entries().iter().map(|&x| x as u64).collect::<Vec<_>>(),
        "t": w.shift().entries().iter().map(|&x| x as u64).collect::<Vec<_>>(),
    })
}

fn parse_entries(field: &'static Field, text: &str, what: &str) -> Result<Vec<u8>, Error> {
    text.split(',')
        .map(|tok| {
            let v: u64 = tok.trim().parse().map_err(|_| {
                Error::InvalidArgument(format!("{what}: cannot parse entry {tok:?}"))
            })?;
            if v >= field.q() as u64 {
                return Err(Error::InvalidArgument(format!(
                    "{what}: entry {v} out of range for F_{}",
                    field.q()
                )));
            }
            Ok(v as u8)
        })
        .collect()
}

fn load_element(size: &SizeArgs, args: &ElementArgs) -> Result<EAElement, Error> {
    if let Some(path) = &args.element {
        let text = std::fs::read_to_string(path)
            .map_err(|source| Error::Io { path: path.display().to_string(), source })?;
        let g = EAElement::from_json(&text)?;
        if g.input().field().q() as u64 != size.q
            || g.input().dim() != size.n
            || g.output().dim() != size.m
        {
            return Err(Error::InvalidArgument(
                "element file does not match --q/--n/--m".into(),
            ));
        }
        return Ok(g);
    }
    let (Some(p), Some(a), Some(qm), Some(b)) = (&args.p, &args.a, &args.qmat, &args.b) else {
        return Err(Error::InvalidArgument(
            "provide --element FILE or all of --p --a --qmat --b".into(),
        ));
    };
    let field = Field::get(size.q)?;
    let input = AffineMap::new(
        FqMatrix::new(field, size.n, size.n, parse_entries(field, p, "--p")?)?,
        FqVector::new(field, parse_entries(field, a, "--a")?)?,
    )?;
    let output = AffineMap::new(
        FqMatrix::new(field, size.m, size.m, parse_entries(field, qm, "--qmat")?)?,
        FqVector::new(field, parse_entries(field, b, "--b")?)?,
    )?;
    Ok(EAElement::new(input, output))
}

/// Whole-group sweep with the spectrum extremes and optional oracle replay.
fn fix_count_all(
    field: &'static Field,
    size: &SizeArgs,
    oracle: bool,
    settings: &Settings,
) -> Result<Table, Error> {
    let group_u = AglGroup::enumerate(field, size.n, settings.enumeration_budget)?;
    let group_w = AglGroup::enumerate(field, size.m, settings.enumeration_budget)?;
    let gamma = group_u.len() as u64 * group_w.len() as u64;
    if gamma > settings.enumeration_budget {
        return Err(Error::BudgetExceeded {
            what: "whole-group fixed-count sweep".into(),
            required: gamma.to_string(),
            budget: settings.enumeration_budget,
        });
    }
    let mut sum = BigUint::ZERO;
    let mut max_nontrivial = BigUint::ZERO;
    let mut zero_count = 0u64;
    let mut mismatches = 0u64;
    for a_in in group_u.elements() {
        for a_out in group_w.elements() {
            let g = EAElement::new(a_in.clone(), a_out.clone());
            let detail = fix_count_exact(&g);
            if oracle && fix_count_bruteforce(&g, settings)? != detail.total {
                mismatches += 1;
            }
            if detail.log_q_total.is_none() {
                zero_count += 1;
            }
            if !g.is_identity() && detail.total > max_nontrivial {
                max_nontrivial = detail.total.clone();
            }
            sum += detail.total;
        }
    }
    let class_count = &sum / BigUint::from(gamma);
    if !(&sum % BigUint::from(gamma)).is_zero() {
        return Err(Error::IntegralityViolation(format!(
            "fixed-count sum {sum} not divisible by group order {gamma}"
        )));
    }
    let mut t = Table::new(vec![
        "q",
        "n",
        "m",
        "gamma_order",
        "fix_sum",
        "class_count",
        "max_nontrivial_fix",
        "zero_fix_elements",
        "oracle_checked",
        "oracle_mismatches",
    ]);
    t.push(vec![
        size.q.to_string(),
        size.n.to_string(),
        size.m.to_string(),
        gamma.to_string(),
        sum.to_string(),
        class_count.to_string(),
        max_nontrivial.to_string(),
        zero_count.to_string(),
        oracle.to_string(),
        mismatches.to_string(),
    ]);
    Ok(t)
}
