use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use clawbench::baselines::{exact_mwis, greedy_mwis};
use clawbench::construction::{bcc, build_lemma_graph, verify_lemma_bounds, ConstructionLabels, ConstructionParams};
use clawbench::experiments::{
    self, run_appendix_a, run_appendix_c, run_gap_experiment, run_thm4, Format, GapConfig, HSource, Tabular,
};
use clawbench::invariants::{self, ReportRequest};
use clawbench::ramsey::{catalog_witness, search_ramsey, RamseyQuery};
use clawbench::relax::{self, FractionalPoint, PseudoMoment};
use clawbench::{dimacs, Error, Graph, Limits, Result, VertexWeights};

const EXIT_ERROR: u8 = 1;
const EXIT_NOT_FOUND: u8 = 2;
const EXIT_ASSERTION: u8 = 3;

#[derive(Parser)]
#[command(
    name = "clawbench",
    version,
    about = "Claw-free gap constructions and exact relaxation audits"
)]
struct Cli {
    /// Seed for randomized searches.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the command's report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Report format for experiments.
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Json)]
    format: OutFormat,
    /// Vertex limit for the exact exponential solvers.
    #[arg(long, global = true, default_value_t = Limits::default().vertices)]
    guard_vertices: usize,
    /// Variable limit for Sherali–Adams LPs.
    #[arg(long, global = true, default_value_t = relax::DEFAULT_LP_VARS)]
    guard_lp_vars: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Generate graphs.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Exact invariants of a DIMACS graph; all but the clique list by default.
    Invariants {
        graph: PathBuf,
        #[arg(long)]
        alpha: bool,
        #[arg(long)]
        omega: bool,
        #[arg(long)]
        chi: bool,
        #[arg(long)]
        max_claw: bool,
        #[arg(long)]
        cliques: bool,
    },
    /// Ramsey witnesses.
    #[command(subcommand)]
    Ramsey(RamseyCommand),
    /// Verify a construction against its promised bounds.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Relaxation checks and optima.
    #[command(subcommand)]
    Relax(RelaxCommand),
    /// Maximum-weight independent set.
    Mwis {
        #[arg(value_enum)]
        method: MwisMethod,
        graph: PathBuf,
        #[arg(long)]
        weights: Option<PathBuf>,
    },
    /// Experiment presets.
    #[command(subcommand)]
    Experiment(ExperimentCommand),
}

#[derive(Subcommand)]
enum GenCommand {
    /// The block-ring construction from a Ramsey graph H.
    Construction {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        tau: usize,
        /// DIMACS file for H, or `auto` for the catalog `(k-1, τ)` witness.
        #[arg(long, default_value = "auto")]
        ramsey: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        labels: Option<PathBuf>,
    },
    /// Conflict graph of two graphs joined by a perfect matching.
    Bcc {
        #[arg(long)]
        h1: PathBuf,
        #[arg(long)]
        h2: PathBuf,
        /// `identity`, or a JSON array giving the H2 partner of each H1 vertex.
        #[arg(long, default_value = "identity")]
        matching: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum RamseyCommand {
    /// Seeded local search; exit status 2 when no witness is found.
    Search {
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Stored witness; exit status 2 when the catalog has none.
    Catalog {
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Check connectivity, claw-freeness and the α, ω bounds of a built construction.
    Lemma1 {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        labels: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        tau: usize,
        #[arg(long)]
        ramsey: PathBuf,
    },
}

#[derive(Subcommand)]
enum RelaxCommand {
    /// Exhaustive Sherali–Adams feasibility of a pseudo-moment file.
    SaCheck {
        #[arg(long)]
        level: usize,
        #[arg(long)]
        point: PathBuf,
        graph: PathBuf,
    },
    /// The uniform point `1/(ω + ℓ)` on singletons.
    SaUniform {
        #[arg(long)]
        level: usize,
        #[arg(long)]
        omega_bound: Option<usize>,
        graph: PathBuf,
    },
    /// Exact optimum of the Sherali–Adams LP.
    SaOptimize {
        #[arg(long)]
        level: usize,
        graph: PathBuf,
    },
    /// Exact QSTAB optimum.
    QstabValue {
        graph: PathBuf,
        #[arg(long)]
        weights: Option<PathBuf>,
    },
    /// The constant point `1/t`, checked for QSTAB membership.
    QstabBad {
        #[arg(long)]
        t: usize,
        graph: PathBuf,
    },
    /// Positive semidefiniteness of the moment and edge matrices.
    SosCheck {
        #[arg(long)]
        level: usize,
        #[arg(long)]
        moments: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        graph: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MwisMethod {
    Greedy,
    Exact,
}

/// How the experiment obtains H.
#[derive(Args)]
struct RamseyArgs {
    /// `auto` (catalog), `search`, or a DIMACS file.
    #[arg(long, default_value = "auto")]
    ramsey: String,
    /// Vertex count for `--ramsey search`.
    #[arg(long)]
    search_n: Option<usize>,
    /// Clique bound t for `--ramsey search`, or the catalog entry for `auto`.
    #[arg(long)]
    t: Option<usize>,
    #[arg(long, default_value_t = 100_000)]
    budget: u64,
}

#[derive(Args)]
struct SolveArgs {
    /// Solve the Sherali–Adams and QSTAB LPs exactly.
    #[arg(long)]
    solve_lp: bool,
    /// Compute the exact chromatic number.
    #[arg(long)]
    chi: bool,
}

#[derive(Subcommand)]
enum ExperimentCommand {
    /// Sherali–Adams gap on the construction with fixed parameters.
    Thm5 {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        tau: usize,
        #[arg(long)]
        ell: usize,
        #[command(flatten)]
        ramsey: RamseyArgs,
        #[command(flatten)]
        solve: SolveArgs,
    },
    /// QSTAB bad point `1/t` against the exact independence number.
    AppendixA {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        t: usize,
    },
    /// Linear-rounds parameterization: p = k, ℓ = round(n k / f_k).
    AppendixC {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        fk: usize,
        #[command(flatten)]
        ramsey: RamseyArgs,
        #[command(flatten)]
        solve: SolveArgs,
    },
    /// Parameters derived from ε and a target size.
    Thm4 {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        ramsey: RamseyArgs,
        #[command(flatten)]
        solve: SolveArgs,
    },
}

/// What a command produced: the text to emit and whether a checked assertion failed.
struct Outcome {
    text: String,
    code: u8,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, code: 0 }
    }

    fn checked(text: String, holds: bool) -> Self {
        Outcome {
            text,
            code: if holds { 0 } else { EXIT_ASSERTION },
        }
    }
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn read_graph(path: &Path) -> Result<Graph> {
    dimacs::read_file(path)
}

fn read_weights(path: Option<&PathBuf>) -> Result<Option<VertexWeights>> {
    path.map(|p| VertexWeights::parse(&read_text(p)?)).transpose()
}

/// Writes DIMACS to `output`, or returns it for stdout.
fn graph_output(g: &Graph, output: Option<&PathBuf>) -> Result<String> {
    match output {
        Some(path) => {
            dimacs::write_file(path, g)?;
            Ok(String::new())
        }
        None => Ok(dimacs::write(g)),
    }
}

fn h_source(args: &RamseyArgs, seed: u64) -> Result<HSource> {
    Ok(match args.ramsey.as_str() {
        "auto" => HSource::Catalog { t: args.t },
        "search" => HSource::Search {
            n: args.search_n.unwrap_or(0),
            t: args
                .t
                .ok_or_else(|| Error::Invalid("--ramsey search needs --t".into()))?,
            seed,
            budget: args.budget,
        },
        file => HSource::Given(read_graph(Path::new(file))?),
    })
}

fn experiment_output<T: Serialize + Tabular>(reports: &[T], cli: &Cli) -> Result<String> {
    let format = match cli.format {
        OutFormat::Json => Format::Json,
        OutFormat::Csv => Format::Csv,
    };
    experiments::render_reports(reports, format)
}

fn run(cli: &Cli) -> Result<Outcome> {
    let limits = Limits {
        vertices: cli.guard_vertices,
        ..Limits::default()
    };
    match &cli.command {
        Command::Gen(GenCommand::Construction {
            k,
            p,
            tau,
            ramsey,
            output,
            labels,
        }) => {
            let h = if ramsey == "auto" {
                if *k < 4 {
                    return Err(Error::Invalid(format!("k must be at least 4, got {k}")));
                }
                catalog_witness(k - 1, *tau)
                    .ok_or_else(|| Error::Invalid(format!("no catalog witness for ({}, {tau})", k - 1)))?
            } else {
                read_graph(Path::new(ramsey))?
            };
            let params = ConstructionParams {
                k: *k,
                p: *p,
                tau: *tau,
                h,
            };
            let (g, l) = build_lemma_graph(&params)?;
            if let Some(path) = labels {
                std::fs::write(path, l.to_json()).map_err(|e| Error::io(path, e))?;
            }
            Ok(Outcome::ok(graph_output(&g, output.as_ref())?))
        }
        Command::Gen(GenCommand::Bcc {
            h1,
            h2,
            matching,
            output,
        }) => {
            let (h1, h2) = (read_graph(h1)?, read_graph(h2)?);
            let perm: Vec<usize> = if matching == "identity" {
                (0..h1.vertex_count()).collect()
            } else {
                serde_json::from_str(&read_text(Path::new(matching))?)?
            };
            Ok(Outcome::ok(graph_output(&bcc(&h1, &h2, &perm)?, output.as_ref())?))
        }
        Command::Invariants {
            graph,
            alpha,
            omega,
            chi,
            max_claw,
            cliques,
        } => {
            let g = read_graph(graph)?;
            let mut request = ReportRequest {
                alpha: *alpha,
                omega: *omega,
                chi: *chi,
                max_claw: *max_claw,
                cliques: *cliques,
            };
            if request == ReportRequest::default() {
                request = ReportRequest {
                    cliques: false,
                    ..ReportRequest::all()
                };
            }
            Ok(Outcome::ok(json(&invariants::report(&g, request, &limits)?)?))
        }
        Command::Ramsey(RamseyCommand::Search {
            s,
            t,
            n,
            budget,
            output,
        }) => {
            let q = RamseyQuery {
                s: *s,
                t: *t,
                n: *n,
                seed: cli.seed,
                budget: *budget,
            };
            match search_ramsey(&q)? {
                Some(g) => Ok(Outcome::ok(graph_output(&g, output.as_ref())?)),
                None => Ok(Outcome {
                    text: String::new(),
                    code: EXIT_NOT_FOUND,
                }),
            }
        }
        Command::Ramsey(RamseyCommand::Catalog { s, t, output }) => match catalog_witness(*s, *t) {
            Some(g) => Ok(Outcome::ok(graph_output(&g, output.as_ref())?)),
            None => Ok(Outcome {
                text: String::new(),
                code: EXIT_NOT_FOUND,
            }),
        },
        Command::Verify(VerifyCommand::Lemma1 {
            graph,
            labels,
            k,
            p,
            tau,
            ramsey,
        }) => {
            let g = read_graph(graph)?;
            let labels = ConstructionLabels::from_json(&read_text(labels)?)?;
            let params = ConstructionParams {
                k: *k,
                p: *p,
                tau: *tau,
                h: read_graph(ramsey)?,
            };
            let report = verify_lemma_bounds(&g, &labels, &params, &limits)?;
            Ok(Outcome::checked(json(&report)?, !report.any_fail()))
        }
        Command::Relax(cmd) => relax_command(cmd, cli, &limits),
        Command::Mwis { method, graph, weights } => {
            let g = read_graph(graph)?;
            let w = read_weights(weights.as_ref())?.unwrap_or_else(|| VertexWeights::unit(g.vertex_count()));
            let result = match method {
                MwisMethod::Greedy => greedy_mwis(&g, &w)?,
                MwisMethod::Exact => exact_mwis(&g, &w, &limits)?,
            };
            Ok(Outcome::ok(json(&result)?))
        }
        Command::Experiment(cmd) => experiment_command(cmd, cli, &limits),
    }
}

fn relax_command(cmd: &RelaxCommand, cli: &Cli, limits: &Limits) -> Result<Outcome> {
    match cmd {
        RelaxCommand::SaCheck { level, point, graph } => {
            let g = read_graph(graph)?;
            let y = PseudoMoment::read_file(point)?;
            let check = relax::sa_feasible(&y, *level, &g, limits)?;
            Ok(Outcome::checked(json(&check)?, check.feasible))
        }
        RelaxCommand::SaUniform {
            level,
            omega_bound,
            graph,
        } => {
            let g = read_graph(graph)?;
            let y = relax::uniform_pseudo_moment(&g, *level, *omega_bound, limits)?;
            Ok(Outcome::ok(y.to_json() + "\n"))
        }
        RelaxCommand::SaOptimize { level, graph } => {
            let g = read_graph(graph)?;
            let (opt, y) = relax::sa_optimum(&g, *level, cli.guard_lp_vars, limits)?;
            #[derive(Serialize)]
            struct Out {
                level: usize,
                optimum: String,
                moments: serde_json::Value,
            }
            Ok(Outcome::ok(json(&Out {
                level: *level,
                optimum: clawbench::rational::format(&opt),
                moments: serde_json::from_str(&y.to_json())?,
            })?))
        }
        RelaxCommand::QstabValue { graph, weights } => {
            let g = read_graph(graph)?;
            let w = read_weights(weights.as_ref())?;
            let (opt, x) = relax::qstab_optimum(&g, w.as_ref(), limits)?;
            #[derive(Serialize)]
            struct Out {
                optimum: String,
                point: serde_json::Value,
            }
            Ok(Outcome::ok(json(&Out {
                optimum: clawbench::rational::format(&opt),
                point: serde_json::from_str(&x.to_json())?,
            })?))
        }
        RelaxCommand::QstabBad { t, graph } => {
            let g = read_graph(graph)?;
            let x: FractionalPoint = relax::qstab_bad_point(&g, *t, limits)?;
            let violation = relax::qstab_feasible(&x, &g, limits)?;
            #[derive(Serialize)]
            struct Out {
                objective: String,
                feasible: bool,
                violation: Option<relax::PointViolation>,
                point: serde_json::Value,
            }
            let feasible = violation.is_none();
            let out = Out {
                objective: clawbench::rational::format(&x.objective(None)),
                feasible,
                violation,
                point: serde_json::from_str(&x.to_json())?,
            };
            Ok(Outcome::checked(json(&out)?, feasible))
        }
        RelaxCommand::SosCheck {
            level,
            moments,
            tol,
            graph,
        } => {
            let g = read_graph(graph)?;
            let z = PseudoMoment::read_file(moments)?;
            let report = relax::sos_check(&z, *level, &g, *tol)?;
            Ok(Outcome::checked(json(&report)?, report.passed))
        }
    }
}

fn experiment_command(cmd: &ExperimentCommand, cli: &Cli, limits: &Limits) -> Result<Outcome> {
    let config = |k, source, solve: &SolveArgs| GapConfig {
        k,
        p: 0,
        tau: 0,
        ell: 0,
        source,
        solve_lp: solve.solve_lp,
        chi: solve.chi,
        lp_vars: cli.guard_lp_vars,
    };
    let report = match cmd {
        ExperimentCommand::Thm5 {
            k,
            p,
            tau,
            ell,
            ramsey,
            solve,
        } => {
            let cfg = GapConfig {
                p: *p,
                tau: *tau,
                ell: *ell,
                ..config(*k, h_source(ramsey, cli.seed)?, solve)
            };
            run_gap_experiment(&cfg, limits)?
        }
        ExperimentCommand::AppendixC { k, fk, ramsey, solve } => {
            run_appendix_c(*k, *fk, &config(*k, h_source(ramsey, cli.seed)?, solve), limits)?
        }
        ExperimentCommand::Thm4 {
            k,
            epsilon,
            n,
            ramsey,
            solve,
        } => run_thm4(
            *k,
            *epsilon,
            *n,
            &config(*k, h_source(ramsey, cli.seed)?, solve),
            limits,
        )?,
        ExperimentCommand::AppendixA { graph, t } => {
            let g = read_graph(graph)?;
            let report = run_appendix_a(&g, &graph.display().to_string(), *t, limits)?;
            let holds = report.failed_assertions().is_empty();
            return Ok(Outcome::checked(experiment_output(&[report], cli)?, holds));
        }
    };
    let failed = report.failed_assertions();
    if !failed.is_empty() {
        eprintln!("assertions failed: {}", failed.join(", "));
    }
    Ok(Outcome::checked(experiment_output(&[report], cli)?, failed.is_empty()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli).and_then(|outcome| {
        match &cli.out {
            Some(path) => std::fs::write(path, &outcome.text).map_err(|e| Error::io(path, e))?,
            None => print!("{}", outcome.text),
        }
        Ok(outcome.code)
    });
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
