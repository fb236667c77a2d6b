//! Command-line front end for efz-core.
//!
//! Every command reduces to a numeric [`Table`] plus the parameter set that
//! produced it. The table is rendered as text, CSV or JSON, always preceded by
//! the parameters, and [`read_csv`] parses the CSV form back.

// Negated comparisons are how NaN arguments get rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use efz_core::archimedean::{i_arch, ArchimedeanQuery};
use efz_core::bounds::{
    self, effective_constants, effective_q0_with, effective_verify, falpha_constants,
    falpha_proportion, family_bounds_log, figure_data, general_modulus_proportion, helper_t_lower,
    hr_proportion, interval_min_bound, lambda_exponent, ltheta_proportion, quadratic_beta_max,
    quadratic_boundary_numeric, quadratic_proportion, BoundReport, Figure, Range, Table, TermKind,
};
use efz_core::characters::{build_characters, conductor_average, Character, CharacterTable};
use efz_core::explicit_formula::{balance, weil_rhs_with};
use efz_core::primes::{build_table, PrimeTable, Twist, WeightedSumQuery, MAX_LIMIT};
use efz_core::zerofinder::{find_zeros_for_modulus, find_zeros_with, gamma_stats, ZeroList};
use efz_core::{Error, Execution, TestFunction};

/// Exit code for domain and input errors.
pub const EXIT_DOMAIN: i32 = 2;
/// Exit code for capacity, precision and convergence errors.
pub const EXIT_CAPACITY: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "efz",
    version,
    about = "Explicit-formula numerics for Dirichlet L-functions and their low-lying zeros",
    after_help = "Anchors:\n  \
                  bounds lowest-zero       height of the lowest zero\n  \
                  bounds low-zero-count    number of zeros below the lowest-zero height\n  \
                  bounds central-order     order of vanishing at the central point\n  \
                  bounds nonreal-zero      lowest non-real zero\n  \
                  bounds family            family average central order, min and max lowest zero\n  \
                  bounds effective-zero    effective lowest-zero bound\n  \
                  effective q0|chain       effective threshold and its constant chain\n  \
                  optimize falpha          optimal F^alpha constants\n  \
                  optimize quadratic       quadratic-family maximum\n  \
                  weil rhs|balance         explicit formula\n  \
                  zeros find|stats         critical-line zeros and the zero-counting band"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for randomized procedures; echoed in the header.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Cap on worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Run data-parallel loops on the calling thread only.
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Test functions: values, Fourier transforms, σ weights.
    #[command(subcommand)]
    Tf(TfCmd),
    /// Archimedean integral I(F_T) [Gauss integral term of the explicit formula].
    Arch {
        #[arg(long)]
        tf: TestFunction,
        #[arg(long = "T")]
        t_dil: f64,
        /// Parity δ (or Re μ in general).
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        delta: f64,
    },
    /// Prime sums: Chebyshev ψ and dilated weighted sums.
    #[command(subcommand)]
    Primes(PrimesCmd),
    /// Dirichlet character groups.
    #[command(subcommand)]
    Chars(CharsCmd),
    /// Explicit formula [weil]: right-hand side and balance against measured zeros.
    #[command(subcommand)]
    Weil(WeilCmd),
    /// Critical-line zeros [zero counting band].
    #[command(subcommand)]
    Zeros(ZerosCmd),
    /// Bounds on low-lying zeros [lowest-zero, central-order, family, effective-zero], proportions and figure data.
    #[command(subcommand)]
    Bounds(BoundsCmd),
    /// Effective threshold q0 and the constant chain [effective-zero].
    #[command(subcommand)]
    Effective(EffectiveCmd),
    /// Parameter optimizations [falpha constants, quadratic family].
    #[command(subcommand)]
    Optimize(OptimizeCmd),
}

#[derive(Debug, Subcommand)]
pub enum TfCmd {
    /// F(x) on a grid.
    Eval {
        #[arg(long)]
        tf: TestFunction,
        /// Point or lo:hi:step grid.
        #[arg(long, allow_hyphen_values = true)]
        x: Range,
    },
    /// F̂(t) in closed form and by quadrature.
    Fourier {
        #[arg(long)]
        tf: TestFunction,
        #[arg(long, allow_hyphen_values = true)]
        t: Range,
        /// Quadrature tolerance.
        #[arg(long, default_value_t = 1e-11)]
        tol: f64,
    },
    /// σ(F) = ∫|u|F(u)² du, closed form and by quadrature.
    Sigma {
        #[arg(long)]
        tf: TestFunction,
    },
}

#[derive(Debug, Subcommand)]
pub enum PrimesCmd {
    /// Chebyshev ψ(x).
    Psi {
        #[arg(long)]
        x: f64,
    },
    /// Σ w(n) F(log n/T) Λ(n)/√n with an optional character or Kronecker twist.
    Sum {
        #[arg(long)]
        tf: TestFunction,
        #[arg(long = "T")]
        t_dil: f64,
        /// Modulus of the twisting character.
        #[arg(long, requires = "char_index", conflicts_with = "kronecker")]
        q: Option<u64>,
        /// Index of the twisting character in its table.
        #[arg(long = "char", requires = "q")]
        char_index: Option<usize>,
        /// Discriminant d of a Kronecker twist (d|n).
        #[arg(long, allow_hyphen_values = true)]
        kronecker: Option<i64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum CharsCmd {
    /// All characters mod q with conductor, parity, order.
    Build {
        #[arg(long)]
        q: u64,
    },
    /// Average log-conductor against log q - Σ log p/(p-1).
    Conductor {
        #[arg(long)]
        q: u64,
    },
    /// Orthogonality defect of the character table.
    Ortho {
        #[arg(long)]
        q: u64,
    },
}

#[derive(Debug, Args)]
pub struct CharSelect {
    #[arg(long)]
    pub q: u64,
    /// Character index; every primitive character when omitted.
    #[arg(long = "char")]
    pub char_index: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum WeilCmd {
    /// log(q/π) - I_χ(F_T) - 2Σ Re χ(n) F(log n/T) Λ(n)/√n.
    Rhs {
        #[command(flatten)]
        select: CharSelect,
        #[arg(long)]
        tf: TestFunction,
        #[arg(long = "T")]
        t_dil: f64,
    },
    /// Right-hand side against the zero sum up to a height, with the tail bound.
    Balance {
        #[command(flatten)]
        select: CharSelect,
        #[arg(long)]
        tf: TestFunction,
        #[arg(long = "T")]
        t_dil: f64,
        #[arg(long, default_value_t = 60.0)]
        height: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum ZerosCmd {
    /// Zeros with |γ| ≤ height.
    Find {
        #[command(flatten)]
        select: CharSelect,
        #[arg(long)]
        height: f64,
    },
    /// Lowest zero, lowest non-real zero and central order.
    Stats {
        #[command(flatten)]
        select: CharSelect,
        #[arg(long, default_value_t = 30.0)]
        height: f64,
    },
}

#[derive(Debug, Args)]
pub struct ConductorArg {
    /// Modulus q.
    #[arg(long, required_unless_present = "log_q", conflicts_with = "log_q")]
    pub q: Option<f64>,
    /// log q, for moduli beyond floating-point range.
    #[arg(long = "log-q")]
    pub log_q: Option<f64>,
}

impl ConductorArg {
    fn log_q(&self) -> f64 {
        self.log_q
            .unwrap_or_else(|| self.q.map_or(f64::NAN, f64::ln))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Proportion {
    Hr,
    Falpha,
    General,
    Ltheta,
    Quadratic,
    Lambda,
}

#[derive(Debug, Subcommand)]
pub enum BoundsCmd {
    /// |γ_χ| ≤ π/(2L) + π(log4+1)/(2L²), L = loglog q.
    LowestZero {
        #[command(flatten)]
        q: ConductorArg,
    },
    /// Zeros below π/(2L) + πC/(2L²).
    LowZeroCount {
        #[command(flatten)]
        q: ConductorArg,
        #[arg(long = "C")]
        c: f64,
    },
    /// Order of vanishing at the central point.
    CentralOrder {
        #[command(flatten)]
        q: ConductorArg,
    },
    /// Lowest non-real zero.
    NonrealZero {
        #[command(flatten)]
        q: ConductorArg,
    },
    /// Family average central order, minimum and maximum lowest zero.
    Family {
        #[command(flatten)]
        q: ConductorArg,
    },
    /// Effective lowest-zero bound.
    EffectiveZero {
        #[command(flatten)]
        q: ConductorArg,
    },
    /// Proportion curves on a β grid.
    Proportion {
        #[arg(long, value_enum)]
        which: Proportion,
        #[arg(long, allow_hyphen_values = true)]
        beta: Range,
    },
    /// Figure data on a β grid.
    Figure {
        #[arg(long)]
        which: Figure,
        #[arg(long, allow_hyphen_values = true)]
        beta: Range,
    },
    /// Lower bound for the minimum over an interval of length a.
    Interval {
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum EffectiveCmd {
    /// q0 = π e^C for a target height t0 and the function F^α.
    Q0 {
        #[arg(long)]
        t0: f64,
        #[arg(long)]
        alpha: f64,
    },
    /// Effective-bound constants and the verification over the loglog q grid.
    Chain,
    /// Lower bound on T from aT + b e^T/T³ ≥ c.
    Helper {
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, allow_hyphen_values = true)]
        b: f64,
        #[arg(long, allow_hyphen_values = true)]
        c: f64,
        #[arg(long, allow_hyphen_values = true)]
        delta: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum OptimizeCmd {
    /// Minimize f(α) = (6α²+π²-3)(α+1)/(12π²(α-1)).
    Falpha,
    /// Largest β reachable by the quadratic family.
    Quadratic,
    /// Domain boundary of the quadratic-family proportion.
    QuadraticBoundary,
}

/// A command's result: echoed parameters and a numeric table.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub params: Vec<(String, String)>,
    pub table: Table,
}

impl Output {
    fn new(params: Vec<(String, String)>, columns: &[&str], rows: Vec<Vec<f64>>) -> Output {
        Output {
            params,
            table: Table {
                columns: columns.iter().map(|c| c.to_string()).collect(),
                rows,
            },
        }
    }

    /// Render in the requested format.
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut out = String::new();
                for (k, v) in &self.params {
                    out.push_str(&format!("# {k}={v}\n"));
                }
                out.push_str(&self.table.to_csv());
                out
            }
            Format::Json => {
                let params: serde_json::Map<String, serde_json::Value> = self
                    .params
                    .iter()
                    .map(|(k, v)| (k.clone(), v.clone().into()))
                    .collect();
                let rows = self.table.to_json();
                let mut doc = serde_json::Map::new();
                doc.insert("params".into(), params.into());
                match rows.as_array().map(Vec::as_slice) {
                    Some([single]) => doc.insert("result".into(), single.clone()),
                    _ => doc.insert("rows".into(), rows),
                };
                let mut s = serde_json::to_string_pretty(&serde_json::Value::Object(doc))
                    .unwrap_or_default();
                s.push('\n');
                s
            }
            Format::Text => {
                let mut out = String::new();
                for (k, v) in &self.params {
                    out.push_str(&format!("# {k} = {v}\n"));
                }
                let cells: Vec<Vec<String>> = self
                    .table
                    .rows
                    .iter()
                    .map(|r| r.iter().map(|v| v.to_string()).collect())
                    .collect();
                let widths: Vec<usize> = self
                    .table
                    .columns
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        cells
                            .iter()
                            .map(|r| r[i].len())
                            .chain([c.len()])
                            .max()
                            .unwrap_or(0)
                    })
                    .collect();
                let line = |items: Vec<&str>| {
                    items
                        .iter()
                        .zip(&widths)
                        .map(|(s, w)| format!("{s:>w$}"))
                        .collect::<Vec<_>>()
                        .join("  ")
                };
                out.push_str(&line(
                    self.table.columns.iter().map(String::as_str).collect(),
                ));
                out.push('\n');
                for r in &cells {
                    out.push_str(&line(r.iter().map(String::as_str).collect()));
                    out.push('\n');
                }
                out
            }
        }
    }
}

/// Parse CSV produced by [`Output::render`]: `# key=value` header lines, a
/// column row, then numeric rows.
pub fn read_csv(text: &str) -> Result<(Vec<(String, String)>, Table), String> {
    let params = text
        .lines()
        .take_while(|l| l.starts_with('#'))
        .filter_map(|l| l.trim_start_matches('#').trim().split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let columns = reader
        .headers()
        .map_err(|e| e.to_string())?
        .iter()
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| e.to_string())?;
        let row = record
            .iter()
            .map(|c| c.parse::<f64>().map_err(|e| format!("{c:?}: {e}")))
            .collect::<Result<Vec<f64>, String>>()?;
        rows.push(row);
    }
    Ok((params, Table { columns, rows }))
}

fn flag(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

fn kv(pairs: &[(&str, String)]) -> Vec<(String, String)> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

/// Prime table reaching the support of F_T.
fn table_for(f: &TestFunction, t_dil: f64) -> efz_core::Result<PrimeTable> {
    let reach = (f.support_halfwidth() * t_dil).exp();
    if !reach.is_finite() || reach > MAX_LIMIT as f64 {
        return Err(Error::Capacity(format!(
            "{f} at T = {t_dil} needs primes up to {reach:.3e}, beyond the sieve limit {MAX_LIMIT}"
        )));
    }
    build_table((reach.ceil() as u64).max(2) + 1)
}

fn selected(table: &CharacterTable, index: Option<usize>) -> efz_core::Result<Vec<&Character>> {
    match index {
        Some(i) => {
            let chi = table.get(i).ok_or_else(|| {
                Error::Domain(format!(
                    "character index {i} out of range for q = {}",
                    table.modulus()
                ))
            })?;
            Ok(vec![chi])
        }
        None => Ok(table.primitive().collect()),
    }
}

fn zero_lists(
    select: &CharSelect,
    height: f64,
    exec: Execution,
) -> efz_core::Result<Vec<ZeroList>> {
    let table = build_characters(select.q)?;
    match select.char_index {
        Some(_) => selected(&table, select.char_index)?
            .into_iter()
            .map(|chi| find_zeros_with(chi, height, exec))
            .collect(),
        None => find_zeros_for_modulus(&table, height, exec),
    }
}

fn report_output(name: &str, reports: &[BoundReport]) -> Output {
    let mut params = vec![("command".to_string(), format!("bounds {name}"))];
    if let Some(r) = reports.first() {
        for (k, v) in &r.input {
            params.push((k.clone(), v.to_string()));
        }
    }
    let mut columns = vec!["value".to_string(), "valid".to_string()];
    let first = reports.first().map(|r| r.terms.clone()).unwrap_or_default();
    for t in &first {
        let tag = match t.kind {
            TermKind::Main | TermKind::SecondOrder => "",
            TermKind::ErrorBudget => " (not included)",
            TermKind::Auxiliary => " (auxiliary)",
        };
        if !tag.is_empty() {
            params.push((
                format!("term {}", t.name),
                tag.trim().trim_matches(['(', ')']).to_string(),
            ));
        }
        columns.push(t.name.clone());
    }
    let labels: Vec<&str> = reports.iter().map(|r| r.kind.label()).collect();
    params.push(("rows".to_string(), labels.join(",")));
    let rows = reports
        .iter()
        .map(|r| {
            let mut row = vec![r.value, flag(r.valid)];
            row.extend(r.terms.iter().map(|t| t.value));
            row
        })
        .collect();
    Output {
        params,
        table: Table { columns, rows },
    }
}

/// Execute a parsed command.
pub fn execute(cli: &Cli) -> efz_core::Result<Output> {
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let mut out = dispatch(&cli.command, exec)?;
    let mut common = vec![
        (
            "format".to_string(),
            format!("{:?}", cli.format).to_lowercase(),
        ),
        ("seed".to_string(), cli.seed.to_string()),
        (
            "threads".to_string(),
            cli.threads.map_or("default".to_string(), |n| n.to_string()),
        ),
        (
            "execution".to_string(),
            if cli.sequential {
                "sequential"
            } else {
                "parallel"
            }
            .to_string(),
        ),
    ];
    common.append(&mut out.params);
    out.params = common;
    Ok(out)
}

fn dispatch(cmd: &Command, exec: Execution) -> efz_core::Result<Output> {
    match cmd {
        Command::Tf(c) => tf(c),
        Command::Arch { tf, t_dil, delta } => {
            let v = i_arch(&ArchimedeanQuery::new(*tf, *t_dil, *delta)?)?;
            Ok(Output::new(
                kv(&[
                    ("command", "arch".into()),
                    ("tf", tf.to_string()),
                    ("T", t_dil.to_string()),
                    ("delta", delta.to_string()),
                ]),
                &["i_arch"],
                vec![vec![v]],
            ))
        }
        Command::Primes(c) => primes(c, exec),
        Command::Chars(c) => chars(c),
        Command::Weil(c) => weil(c, exec),
        Command::Zeros(c) => zeros(c, exec),
        Command::Bounds(c) => bounds_cmd(c, exec),
        Command::Effective(c) => effective(c, exec),
        Command::Optimize(c) => optimize(c),
    }
}

fn tf(cmd: &TfCmd) -> efz_core::Result<Output> {
    match cmd {
        TfCmd::Eval { tf, x } => Ok(Output::new(
            kv(&[
                ("command", "tf eval".into()),
                ("tf", tf.to_string()),
                ("x", format!("{}:{}:{}", x.lo, x.hi, x.step)),
            ]),
            &["x", "value"],
            x.points()
                .into_iter()
                .map(|p| vec![p, tf.eval(p)])
                .collect(),
        )),
        TfCmd::Fourier { tf, t, tol } => {
            let rows = t
                .points()
                .into_iter()
                .map(|p| Ok(vec![p, tf.fourier(p), tf.fourier_numeric(p, *tol)?]))
                .collect::<efz_core::Result<_>>()?;
            Ok(Output::new(
                kv(&[
                    ("command", "tf fourier".into()),
                    ("tf", tf.to_string()),
                    ("t", format!("{}:{}:{}", t.lo, t.hi, t.step)),
                    ("tol", tol.to_string()),
                ]),
                &["t", "closed_form", "quadrature"],
                rows,
            ))
        }
        TfCmd::Sigma { tf } => Ok(Output::new(
            kv(&[("command", "tf sigma".into()), ("tf", tf.to_string())]),
            &["sigma", "sigma_quadrature"],
            vec![vec![tf.sigma_weight()?, tf.sigma_weight_numeric(1e-12)?]],
        )),
    }
}

fn primes(cmd: &PrimesCmd, exec: Execution) -> efz_core::Result<Output> {
    match cmd {
        PrimesCmd::Psi { x } => {
            if !(*x >= 1.0) || *x > MAX_LIMIT as f64 {
                return Err(Error::Domain(format!(
                    "psi needs 1 <= x <= {MAX_LIMIT}, got {x}"
                )));
            }
            let table = build_table((x.floor() as u64).max(2))?;
            Ok(Output::new(
                kv(&[("command", "primes psi".into()), ("x", x.to_string())]),
                &["x", "psi"],
                vec![vec![*x, table.chebyshev_psi(*x)?]],
            ))
        }
        PrimesCmd::Sum {
            tf,
            t_dil,
            q,
            char_index,
            kronecker,
        } => {
            let primes = table_for(tf, *t_dil)?;
            let chars = q.map(build_characters).transpose()?;
            let twist = match (&chars, char_index, kronecker) {
                (Some(table), Some(i), _) => Twist::Character(selected(table, Some(*i))?[0]),
                (_, _, Some(d)) => Twist::Kronecker(*d),
                _ => Twist::None,
            };
            let query = WeightedSumQuery {
                f: *tf,
                t_dil: *t_dil,
                twist,
            };
            let v = primes.weighted_sum_with(&query, exec)?;
            let twist_name = match twist {
                Twist::None => "none".to_string(),
                Twist::Character(c) => format!("character {} mod {}", c.index(), c.modulus()),
                Twist::Kronecker(d) => format!("kronecker {d}"),
            };
            Ok(Output::new(
                kv(&[
                    ("command", "primes sum".into()),
                    ("tf", tf.to_string()),
                    ("T", t_dil.to_string()),
                    ("twist", twist_name),
                ]),
                &["sum"],
                vec![vec![v]],
            ))
        }
    }
}

fn chars(cmd: &CharsCmd) -> efz_core::Result<Output> {
    match cmd {
        CharsCmd::Build { q } => {
            let table = build_characters(*q)?;
            let rows = table
                .characters()
                .iter()
                .map(|c| {
                    vec![
                        c.index() as f64,
                        c.conductor() as f64,
                        c.parity() as f64,
                        c.order() as f64,
                        flag(c.is_primitive()),
                        flag(c.is_real()),
                    ]
                })
                .collect();
            Ok(Output::new(
                kv(&[("command", "chars build".into()), ("q", q.to_string())]),
                &["index", "conductor", "parity", "order", "primitive", "real"],
                rows,
            ))
        }
        CharsCmd::Conductor { q } => {
            let (lhs, rhs) = conductor_average(*q)?;
            Ok(Output::new(
                kv(&[("command", "chars conductor".into()), ("q", q.to_string())]),
                &["mean_log_conductor", "log_q_minus_sum", "difference"],
                vec![vec![lhs, rhs, lhs - rhs]],
            ))
        }
        CharsCmd::Ortho { q } => {
            let table = build_characters(*q)?;
            Ok(Output::new(
                kv(&[("command", "chars ortho".into()), ("q", q.to_string())]),
                &["characters", "orthogonality_defect"],
                vec![vec![table.len() as f64, table.orthogonality_defect()]],
            ))
        }
    }
}

fn weil(cmd: &WeilCmd, exec: Execution) -> efz_core::Result<Output> {
    match cmd {
        WeilCmd::Rhs { select, tf, t_dil } => {
            let primes = table_for(tf, *t_dil)?;
            let table = build_characters(select.q)?;
            let rows = selected(&table, select.char_index)?
                .into_iter()
                .map(|chi| {
                    let e = weil_rhs_with(chi, *tf, *t_dil, &primes, exec)?;
                    Ok(vec![
                        e.q as f64,
                        e.char_index as f64,
                        e.log_term,
                        e.arch_term,
                        e.prime_term,
                        e.rhs,
                    ])
                })
                .collect::<efz_core::Result<_>>()?;
            Ok(Output::new(
                kv(&[
                    ("command", "weil rhs".into()),
                    ("q", select.q.to_string()),
                    (
                        "char",
                        select
                            .char_index
                            .map_or("primitive".into(), |i| i.to_string()),
                    ),
                    ("tf", tf.to_string()),
                    ("T", t_dil.to_string()),
                ]),
                &[
                    "q",
                    "char_index",
                    "log_term",
                    "arch_term",
                    "prime_term",
                    "rhs",
                ],
                rows,
            ))
        }
        WeilCmd::Balance {
            select,
            tf,
            t_dil,
            height,
        } => {
            let primes = table_for(tf, *t_dil)?;
            let table = build_characters(select.q)?;
            let lists = zero_lists(select, *height, exec)?;
            let rows = lists
                .iter()
                .map(|zl| {
                    let chi = table
                        .get(zl.char_index)
                        .ok_or_else(|| Error::Data(format!("no character {}", zl.char_index)))?;
                    let b = balance(chi, zl, *tf, *t_dil, &primes)?;
                    Ok(vec![
                        zl.modulus as f64,
                        zl.char_index as f64,
                        b.evaluation.rhs,
                        b.zero_side,
                        b.residual,
                        b.tail_bound,
                        flag(b.holds(1e-6)),
                        flag(b.zeros_complete),
                    ])
                })
                .collect::<efz_core::Result<_>>()?;
            Ok(Output::new(
                kv(&[
                    ("command", "weil balance".into()),
                    ("q", select.q.to_string()),
                    (
                        "char",
                        select
                            .char_index
                            .map_or("primitive".into(), |i| i.to_string()),
                    ),
                    ("tf", tf.to_string()),
                    ("T", t_dil.to_string()),
                    ("height", height.to_string()),
                    ("slack", "1e-6".into()),
                ]),
                &[
                    "q",
                    "char_index",
                    "rhs",
                    "zero_side",
                    "residual",
                    "tail_bound",
                    "holds",
                    "zeros_complete",
                ],
                rows,
            ))
        }
    }
}

fn zeros(cmd: &ZerosCmd, exec: Execution) -> efz_core::Result<Output> {
    match cmd {
        ZerosCmd::Find { select, height } => {
            let lists = zero_lists(select, *height, exec)?;
            let rows = lists
                .iter()
                .flat_map(|zl| {
                    zl.zeros.iter().map(move |z| {
                        vec![
                            zl.modulus as f64,
                            zl.char_index as f64,
                            z.gamma,
                            z.multiplicity as f64,
                            z.residual,
                        ]
                    })
                })
                .collect();
            let complete = lists.iter().all(|zl| zl.complete);
            Ok(Output::new(
                kv(&[
                    ("command", "zeros find".into()),
                    ("q", select.q.to_string()),
                    (
                        "char",
                        select
                            .char_index
                            .map_or("primitive".into(), |i| i.to_string()),
                    ),
                    ("height", height.to_string()),
                    ("complete", complete.to_string()),
                ]),
                &[
                    "q",
                    "char_index",
                    "gamma",
                    "multiplicity",
                    "refined_residual",
                ],
                rows,
            ))
        }
        ZerosCmd::Stats { select, height } => {
            let lists = zero_lists(select, *height, exec)?;
            let rows = lists
                .iter()
                .map(|zl| {
                    let s = gamma_stats(zl);
                    vec![
                        zl.modulus as f64,
                        zl.char_index as f64,
                        s.gamma1,
                        s.gamma1_nonreal,
                        s.n_central as f64,
                        flag(s.complete),
                    ]
                })
                .collect();
            Ok(Output::new(
                kv(&[
                    ("command", "zeros stats".into()),
                    ("q", select.q.to_string()),
                    (
                        "char",
                        select
                            .char_index
                            .map_or("primitive".into(), |i| i.to_string()),
                    ),
                    ("height", height.to_string()),
                ]),
                &[
                    "q",
                    "char_index",
                    "gamma1",
                    "gamma1_nonreal",
                    "n_central",
                    "complete",
                ],
                rows,
            ))
        }
    }
}

fn check_log_q(q: &ConductorArg) -> efz_core::Result<f64> {
    let lq = q.log_q();
    if !(lq > 1.0) || !lq.is_finite() {
        return Err(Error::Domain(format!(
            "bounds need q > e, got log q = {lq}"
        )));
    }
    Ok(lq)
}

fn bounds_cmd(cmd: &BoundsCmd, exec: Execution) -> efz_core::Result<Output> {
    match cmd {
        BoundsCmd::LowestZero { q } => Ok(report_output(
            "lowest-zero",
            &[bounds::lowest_zero_bound_log(check_log_q(q)?)],
        )),
        BoundsCmd::LowZeroCount { q, c } => Ok(report_output(
            "low-zero-count",
            &[bounds::low_zero_count_log(check_log_q(q)?, *c)],
        )),
        BoundsCmd::CentralOrder { q } => Ok(report_output(
            "central-order",
            &[bounds::central_order_bound_log(check_log_q(q)?)],
        )),
        BoundsCmd::NonrealZero { q } => Ok(report_output(
            "nonreal-zero",
            &[bounds::nonreal_zero_bound_log(check_log_q(q)?)],
        )),
        BoundsCmd::Family { q } => Ok(report_output(
            "family",
            &family_bounds_log(check_log_q(q)?)?,
        )),
        BoundsCmd::EffectiveZero { q } => Ok(report_output(
            "effective-zero",
            &[bounds::effective_zero_bound_log(check_log_q(q)?)],
        )),
        BoundsCmd::Proportion { which, beta } => {
            let points = beta.points();
            let (columns, rows): (&[&str], Vec<efz_core::Result<Vec<f64>>>) = match which {
                Proportion::Hr => (
                    &["beta", "value"],
                    exec.map(&points, |&b| Ok(vec![b, hr_proportion(b)?])),
                ),
                Proportion::Falpha => (
                    &["beta", "value"],
                    exec.map(&points, |&b| Ok(vec![b, falpha_proportion(b)?])),
                ),
                Proportion::General => (
                    &["beta", "value"],
                    exec.map(&points, |&b| Ok(vec![b, general_modulus_proportion(b)?])),
                ),
                Proportion::Ltheta => (
                    &["beta", "value"],
                    exec.map(&points, |&b| Ok(vec![b, ltheta_proportion(b)?])),
                ),
                Proportion::Quadratic => (
                    &["beta", "value", "alpha"],
                    exec.map(&points, |&b| {
                        let r = quadratic_proportion(b)?;
                        Ok(vec![b, r.value, r.alpha])
                    }),
                ),
                Proportion::Lambda => (
                    &["beta", "lambda", "t_coef", "theta"],
                    exec.map(&points, |&b| {
                        let r = lambda_exponent(b)?;
                        Ok(vec![b, r.lambda, r.t_coef, r.theta])
                    }),
                ),
            };
            Ok(Output::new(
                kv(&[
                    ("command", "bounds proportion".into()),
                    ("which", format!("{which:?}").to_lowercase()),
                    ("beta", format!("{}:{}:{}", beta.lo, beta.hi, beta.step)),
                ]),
                columns,
                rows.into_iter().collect::<efz_core::Result<_>>()?,
            ))
        }
        BoundsCmd::Figure { which, beta } => {
            let table = figure_data(*which, beta, exec)?;
            Ok(Output {
                params: kv(&[
                    ("command", "bounds figure".into()),
                    ("which", format!("{which:?}").to_lowercase()),
                    ("beta", format!("{}:{}:{}", beta.lo, beta.hi, beta.step)),
                ]),
                table,
            })
        }
        BoundsCmd::Interval { a } => Ok(Output::new(
            kv(&[("command", "bounds interval".into()), ("a", a.to_string())]),
            &["a", "bound"],
            vec![vec![*a, interval_min_bound(*a)?]],
        )),
    }
}

fn effective(cmd: &EffectiveCmd, exec: Execution) -> efz_core::Result<Output> {
    match cmd {
        EffectiveCmd::Q0 { t0, alpha } => {
            if !(*t0 > 0.0) || !(*alpha > 1.0) {
                return Err(Error::Domain(format!(
                    "q0 needs t0 > 0 and alpha > 1, got {t0}, {alpha}"
                )));
            }
            let t_max = ((alpha + 1.0) / (alpha - 1.0)).sqrt() * std::f64::consts::PI / t0;
            let reach = t_max.exp();
            if !(reach <= MAX_LIMIT as f64) {
                return Err(Error::Capacity(format!(
                    "q0 needs primes up to e^{t_max:.4}, beyond the sieve limit {MAX_LIMIT}"
                )));
            }
            let primes = build_table(reach.ceil() as u64 + 1)?;
            let r = effective_q0_with(*t0, *alpha, &primes, exec)?;
            Ok(Output::new(
                kv(&[
                    ("command", "effective q0".into()),
                    ("t0", t0.to_string()),
                    ("alpha", alpha.to_string()),
                    ("step", bounds::EFFECTIVE_STEP.to_string()),
                ]),
                &[
                    "C",
                    "q0",
                    "argmax_T",
                    "argmax_delta",
                    "T_max",
                    "argmax_at_edge",
                    "arch_at_max",
                    "prime_at_max",
                ],
                vec![vec![
                    r.c,
                    r.q0,
                    r.argmax_t,
                    r.argmax_delta as f64,
                    r.t_max,
                    flag(r.argmax_at_edge),
                    r.arch_at_max,
                    r.prime_at_max,
                ]],
            ))
        }
        EffectiveCmd::Chain => {
            let k = effective_constants()?;
            let verified = effective_verify()?;
            Ok(Output::new(
                kv(&[("command", "effective chain".into())]),
                &[
                    "kernel_max",
                    "kernel_integral",
                    "kernel_half",
                    "gauss",
                    "psi_const",
                    "four_psi",
                    "two_psi",
                    "slope",
                    "offset",
                    "verified",
                ],
                vec![vec![
                    k.kernel_max,
                    k.kernel_integral,
                    k.kernel_half,
                    k.gauss,
                    k.psi_const,
                    k.four_psi,
                    k.two_psi,
                    k.slope,
                    k.offset,
                    flag(verified),
                ]],
            ))
        }
        EffectiveCmd::Helper { a, b, c, delta } => Ok(Output::new(
            kv(&[
                ("command", "effective helper".into()),
                ("a", a.to_string()),
                ("b", b.to_string()),
                ("c", c.to_string()),
                ("delta", delta.to_string()),
            ]),
            &["t_lower"],
            vec![vec![helper_t_lower(*a, *b, *c, *delta)?]],
        )),
    }
}

fn optimize(cmd: &OptimizeCmd) -> efz_core::Result<Output> {
    match cmd {
        OptimizeCmd::Falpha => {
            let k = falpha_constants()?;
            Ok(Output::new(
                kv(&[
                    ("command", "optimize falpha".into()),
                    ("unimodal", k.search.unimodal.to_string()),
                ]),
                &["alpha0", "f_alpha0", "beta0", "iterations"],
                vec![vec![
                    k.alpha0,
                    k.f_alpha0,
                    k.beta0,
                    k.search.iterations as f64,
                ]],
            ))
        }
        OptimizeCmd::Quadratic => {
            let m = quadratic_beta_max()?;
            Ok(Output::new(
                kv(&[("command", "optimize quadratic".into())]),
                &["beta", "t_coef"],
                vec![vec![m.beta, m.t_coef]],
            ))
        }
        OptimizeCmd::QuadraticBoundary => Ok(Output::new(
            kv(&[("command", "optimize quadratic-boundary".into())]),
            &["boundary", "closed_form"],
            vec![vec![
                quadratic_boundary_numeric()?,
                bounds::quadratic_boundary(),
            ]],
        )),
    }
}

/// Exit code for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Domain(_) | Error::Data(_) => EXIT_DOMAIN,
        Error::Quadrature { .. } | Error::Capacity(_) | Error::Precision { .. } | Error::Io(_) => {
            EXIT_CAPACITY
        }
    }
}

/// Parse arguments, run, write to the given streams and return the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_DOMAIN } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                write!(stdout, "{rendered}")
            } else {
                write!(stderr, "{rendered}")
            };
            return code;
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = configure_threads(n) {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_DOMAIN;
        }
    }
    match execute(&cli) {
        Ok(out) => {
            let _ = write!(stdout, "{}", out.render(cli.format));
            0
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(feature = "parallel")]
fn configure_threads(n: usize) -> Result<(), String> {
    if n == 0 {
        return Err("--threads must be at least 1".into());
    }
    // A second configuration in the same process keeps the first pool.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}

#[cfg(not(feature = "parallel"))]
fn configure_threads(n: usize) -> Result<(), String> {
    if n == 0 {
        return Err("--threads must be at least 1".into());
    }
    Ok(())
}
