//! `phash`: rate bounds for perfect hash codes from the command line.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use phash_bounds::classic::{
    conjecture_bound, dvj_bound, fk_bound, km_bound, km_default_range, BoundReport, Method,
};
use phash_bounds::cluster::{
    cluster_rate_bound_with, compute_cluster_matrix_with, default_order, epsilon_sweep,
    maximize_reduced_form, psi_max_rate_bound, report_from_matrix, SameCellMode,
};
use phash_bounds::codes::{max_code_search, verify_hash_code, Code, Verdict};
use phash_bounds::expr::parse_real;
use phash_bounds::optimize::{psi_max_global, SearchConfig};
use phash_bounds::reference::{default_case, default_epsilon};
use phash_bounds::render::{
    check_precision, format_up, json_document, render_reports, Manifest, OutputFormat,
};
use phash_bounds::tables::{cluster_bounds_table, known_bounds_table};
use phash_bounds::{Error, KernelContext, PartitionKind};

const EXIT_PARAMS: u8 = 2;
const EXIT_MISMATCH: u8 = 3;

#[derive(Parser)]
#[command(name = "phash", version, about = "Upper bounds on the rate of perfect (b,k)-hash codes")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    #[arg(long, global = true, value_enum, default_value_t = Format::Md)]
    format: Format,
    /// Decimals for printed values, rounded upward [default: 7; 5 for `table`]
    #[arg(long, global = true)]
    precision: Option<usize>,
    #[arg(long, global = true)]
    verbose: bool,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    restarts: Option<usize>,
    /// TOML file of search settings (restarts, max_iterations, initial_step, seed, ...)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Md,
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum SameCell {
    Strict,
    Relaxed,
}

#[derive(Subcommand)]
enum Command {
    /// One bound: fk, km, dvj, conjecture, psimax, cluster-max, cluster-min
    Bound {
        #[arg(long)]
        b: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        method: String,
        /// Kernel order; for km, fixes the minimization to this single j
        #[arg(long)]
        j: Option<usize>,
        #[arg(long)]
        j_min: Option<usize>,
        #[arg(long)]
        j_max: Option<usize>,
        /// Threshold, e.g. 9/100 or (4+sqrt(5))/44
        #[arg(long)]
        eps: Option<String>,
    },
    /// Recompute a published comparison table (1 or 2); exits 3 on disagreement
    Table {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=2))]
        which: u8,
    },
    /// Global maximum of the kernel of order j (default k-2)
    PsiMax {
        #[arg(long)]
        b: usize,
        #[arg(long)]
        j: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Cell suprema, reduced-form maximum and clustered bound
    Cluster {
        #[arg(long)]
        b: usize,
        #[arg(long)]
        k: usize,
        /// cluster-max or cluster-min [default: the tabulated partition for (b,k)]
        #[arg(long)]
        method: Option<String>,
        #[arg(long)]
        j: Option<usize>,
        #[arg(long)]
        eps: Option<String>,
        #[arg(long, value_enum, default_value_t = SameCell::Strict)]
        same_cell: SameCell,
    },
    /// Clustered bound over a list (a,b,c) or range (lo:hi:count) of thresholds
    Sweep {
        #[arg(long)]
        b: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        method: Option<String>,
        #[arg(long)]
        j: Option<usize>,
        #[arg(long)]
        grid: String,
    },
    /// Check the (b,k)-hash property of a code file
    Verify {
        path: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Largest (b,k)-hash code of length n (exact when b^n <= budget, else greedy)
    Search {
        #[arg(long)]
        b: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
    },
}

enum Failure {
    Params(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ResourceGuard(_) | Error::InfeasibleRegion(_) => Failure::Other(e.to_string()),
            _ => Failure::Params(e.to_string()),
        }
    }
}

struct Ctx {
    format: OutputFormat,
    digits: usize,
    verbose: bool,
    cfg: SearchConfig,
    args: Vec<String>,
}

impl Ctx {
    fn manifest(&self, command: &str) -> Manifest {
        Manifest::new(command, self.args.clone(), &self.cfg, self.digits)
    }

    fn reports(&self, command: &str, title: &str, reports: &[BoundReport]) -> String {
        render_reports(title, reports, self.format, self.digits, &self.manifest(command), self.verbose)
    }
}

fn search_config(common: &Common) -> Result<SearchConfig, Failure> {
    let mut cfg = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Params(format!("{}: {e}", path.display())))?;
            toml::from_str(&text).map_err(|e| Failure::Params(format!("{}: {e}", path.display())))?
        }
        None => SearchConfig::default(),
    };
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    if let Some(r) = common.restarts {
        cfg.restarts = r;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn epsilon(text: &Option<String>) -> Result<Option<f64>, Failure> {
    text.as_deref().map(parse_real).transpose().map_err(Failure::from)
}

fn partition(method: Option<&str>, b: usize, k: usize) -> Result<PartitionKind, Failure> {
    match method {
        Some("cluster-max") => Ok(PartitionKind::MaxBased),
        Some("cluster-min") => Ok(PartitionKind::MinBased),
        Some(other) => Err(Failure::Params(format!("expected cluster-max or cluster-min, got `{other}`"))),
        None => default_case(b, k)
            .map(|c| c.kind)
            .ok_or_else(|| Failure::Params(format!("no tabulated partition for ({b},{k}); pass --method"))),
    }
}

fn grid(text: &str) -> Result<Vec<f64>, Failure> {
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [lo, hi, n] => {
            let (lo, hi) = (parse_real(lo)?, parse_real(hi)?);
            let n: usize = n
                .trim()
                .parse()
                .map_err(|_| Failure::Params(format!("bad grid count `{n}`")))?;
            Ok(match n {
                0 => Vec::new(),
                1 => vec![lo],
                _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
            })
        }
        [list] if list.trim().is_empty() => Ok(Vec::new()),
        [list] => list.split(',').map(|t| parse_real(t).map_err(Failure::from)).collect(),
        _ => Err(Failure::Params(format!("grid must be `a,b,c` or `lo:hi:count`, got `{text}`"))),
    }
}

fn run(cli: Cli) -> Result<(String, u8), Failure> {
    let common = &cli.common;
    let default_digits = if matches!(cli.command, Command::Table { .. }) { 5 } else { 7 };
    let digits = common.precision.unwrap_or(default_digits);
    check_precision(digits)?;
    let ctx = Ctx {
        format: match common.format {
            Format::Md => OutputFormat::Markdown,
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        },
        digits,
        verbose: common.verbose,
        cfg: search_config(common)?,
        args: std::env::args().skip(1).collect(),
    };
    let cfg = &ctx.cfg;

    match &cli.command {
        Command::Bound {
            b,
            k,
            method,
            j,
            j_min,
            j_max,
            eps,
        } => {
            let (b, k) = (*b, *k);
            let method: Method = method.parse()?;
            let eps = epsilon(eps)?;
            let report = match method {
                Method::FredmanKomlos => fk_bound(b, k)?,
                Method::KornerMarton => {
                    let range = match (j, j_min, j_max) {
                        (Some(j), _, _) => *j..=*j,
                        (None, lo, hi) => {
                            let d = km_default_range(k);
                            lo.unwrap_or(*d.start())..=hi.unwrap_or(*d.end())
                        }
                    };
                    km_bound(b, k, range)?
                }
                Method::Dvj => dvj_bound(b, k)?,
                Method::Conjecture => conjecture_bound(b, k)?,
                Method::PsiMax => psi_max_rate_bound(b, k, cfg)?,
                Method::ClusterMax | Method::ClusterMin => {
                    let kind = partition(Some(method.short_name()), b, k)?;
                    cluster_rate_bound_with(b, k, kind, eps, *j, SameCellMode::Strict, cfg)?
                }
                Method::FromKernelMaximum => {
                    return Err(Failure::Params("from-m is a library function; use psimax or cluster-*".into()))
                }
            };
            Ok((ctx.reports("bound", "Rate bound", &[report]), 0))
        }
        Command::Table { which } => {
            let table = match which {
                1 => known_bounds_table(cfg)?,
                _ => cluster_bounds_table(cfg)?,
            };
            let code = if table.mismatches() > 0 { EXIT_MISMATCH } else { 0 };
            Ok((table.render(ctx.format, ctx.digits, &ctx.manifest("table")), code))
        }
        Command::PsiMax { b, j, k } => {
            let j = match (j, k) {
                (Some(j), _) => *j,
                (None, Some(k)) if *k >= 3 => default_order(*k),
                _ => return Err(Failure::Params("pass --j, or --k >= 3 for j = k-2".into())),
            };
            let kc = KernelContext::new(*b, j)?;
            let w = psi_max_global(&kc, cfg)?;
            let out = match ctx.format {
                OutputFormat::Json => json_document(
                    &ctx.manifest("psi-max"),
                    &json!({ "b": b, "j": j, "witness": w, "rounded": format_up(w.value, ctx.digits) }),
                ),
                OutputFormat::Csv => format!(
                    "b,j,psi_max,method\n{b},{j},{},{:?}\n",
                    format_up(w.value, ctx.digits),
                    w.method
                ),
                OutputFormat::Markdown => {
                    let mut s = format!(
                        "| b | j | max Psi | found by |\n|---|---|---|---|\n| {b} | {j} | {} | {:?} |\n",
                        format_up(w.value, ctx.digits),
                        w.method
                    );
                    if ctx.verbose {
                        s += &format!("\np = {:?}\nq = {:?}\n", w.p.probs(), w.q.probs());
                    }
                    s
                }
            };
            Ok((out, 0))
        }
        Command::Cluster {
            b,
            k,
            method,
            j,
            eps,
            same_cell,
        } => {
            let (b, k) = (*b, *k);
            let kind = partition(method.as_deref(), b, k)?;
            let eps = match epsilon(eps)?.or_else(|| default_epsilon(b, k, kind)) {
                Some(e) => e,
                None => return Err(Failure::Params(format!("no default threshold for ({b},{k}); pass --eps"))),
            };
            let j = j.unwrap_or(default_order(k.max(3)));
            let mode = match same_cell {
                SameCell::Strict => SameCellMode::Strict,
                SameCell::Relaxed => SameCellMode::Relaxed,
            };
            let cm = compute_cluster_matrix_with(kind, b, j, eps, mode, cfg)?;
            let reduced = maximize_reduced_form(&cm);
            let report = report_from_matrix(k, &cm, mode)?;
            let out = match ctx.format {
                OutputFormat::Json => json_document(
                    &ctx.manifest("cluster"),
                    &json!({
                        "matrix": cm,
                        "reduced": reduced,
                        "report": report,
                        "rounded": format_up(report.value, ctx.digits),
                    }),
                ),
                _ => {
                    let d = ctx.digits;
                    let mut s = if ctx.format == OutputFormat::Csv {
                        format!(
                            "m1,m2,m3,m4,M,eta0\n{},{},{},{},{},{}\n\n",
                            format_up(cm.m1, d),
                            format_up(cm.m2, d),
                            format_up(cm.m3, d),
                            format_up(cm.m4, d),
                            format_up(reduced.m, d),
                            reduced.eta.balanced()
                        )
                    } else {
                        format!(
                            "| m1 | m2 | m3 | m4 | M | eta0 | unbalanced cells |\n|---|---|---|---|---|---|---|\n| {} | {} | {} | {} | {} | {:.7} | {} |\n\n",
                            format_up(cm.m1, d),
                            format_up(cm.m2, d),
                            format_up(cm.m3, d),
                            format_up(cm.m4, d),
                            format_up(reduced.m, d),
                            reduced.eta.balanced(),
                            reduced.support_pattern.unbalanced_cells
                        )
                    };
                    s += &ctx.reports("cluster", "Clustered bound", &[report]);
                    s
                }
            };
            Ok((out, 0))
        }
        Command::Sweep {
            b,
            k,
            method,
            j,
            grid: g,
        } => {
            let kind = partition(method.as_deref(), *b, *k)?;
            let points = grid(g)?;
            let (reports, best) = epsilon_sweep(*b, *k, kind, *j, &points, cfg)?;
            let mut out = ctx.reports("sweep", "Threshold sweep", &reports);
            if let (Some(i), false) = (best, ctx.format == OutputFormat::Json) {
                let prefix = if ctx.format == OutputFormat::Csv { "# " } else { "\n" };
                out += &format!(
                    "{prefix}smallest bound {} at eps = {}\n",
                    format_up(reports[i].value, ctx.digits),
                    points[i]
                );
            }
            Ok((out, 0))
        }
        Command::Verify { path, k } => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Params(format!("{}: {e}", path.display())))?;
            let code = Code::parse(&text)?;
            let verdict = verify_hash_code(&code, *k)?;
            let exit = if verdict.holds() { 0 } else { EXIT_MISMATCH };
            let out = match (&verdict, ctx.format) {
                (_, OutputFormat::Json) => json_document(
                    &ctx.manifest("verify"),
                    &json!({
                        "b": code.b(), "n": code.n(), "k": k, "words": code.len(),
                        "holds": verdict.holds(),
                        "counterexample": match &verdict {
                            Verdict::Counterexample(set) => set.iter().map(|&i| code.format_word(&code.words()[i])).collect(),
                            Verdict::Holds => Vec::new(),
                        },
                    }),
                ),
                (Verdict::Holds, _) => format!(
                    "holds: {} words of length {} form a ({},{})-hash code\n",
                    code.len(),
                    code.n(),
                    code.b(),
                    k
                ),
                (Verdict::Counterexample(set), _) => {
                    let words: Vec<String> = set.iter().map(|&i| code.format_word(&code.words()[i])).collect();
                    format!("counterexample: {{{}}} have no coordinate where all differ\n", words.join(", "))
                }
            };
            Ok((out, exit))
        }
        Command::Search { b, k, n, budget } => {
            let found = max_code_search(*b, *k, *n, *budget)?;
            let km = if *k >= 3 && b >= k {
                Some(km_bound(*b, *k, km_default_range(*k))?.value)
            } else {
                None
            };
            let out = match ctx.format {
                OutputFormat::Json => json_document(
                    &ctx.manifest("search"),
                    &json!({
                        "mode": found.mode, "nodes": found.nodes, "size": found.code.len(),
                        "rate": found.code.rate(), "km_bound": km,
                        "words": found.code.words().iter().map(|w| found.code.format_word(w)).collect::<Vec<_>>(),
                    }),
                ),
                _ => {
                    let mut s = format!(
                        "{:?} search: {} words, rate {}",
                        found.mode,
                        found.code.len(),
                        format_up(found.code.rate(), ctx.digits)
                    );
                    if let Some(km) = km {
                        s += &format!(" (asymptotic bound {})", format_up(km, ctx.digits));
                    }
                    s += "\n\n";
                    s += &found.code.to_text();
                    s
                }
            };
            Ok((out, 0))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(Failure::Params(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_PARAMS)
        }
        Err(Failure::Other(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
