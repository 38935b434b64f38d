//! The `sparsity` command line. Every verb reads a hypergraph (or, for
//! `experiment`, a config) as a path, inline JSON, or `-` for stdin.

use std::ffi::OsString;
use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::error::Error;
use crate::experiment::{run_experiment, ExperimentConfig};
use crate::field::{write_matrix, Field, PrimeField, Rationals, DEFAULT_PRIME};
use crate::hypergraph::Hypergraph;
use crate::matroid::{cross_validate, derive_seeds, linear_report, LinearMatroid, RetryPolicy};
use crate::oracle::{find_orientation, SparsityOracle};
use crate::params::SparsityParams;
use crate::realization::realize_kl;

#[derive(Debug, Parser)]
#[command(
    name = "sparsity",
    version,
    about = "Linear realizations of (k,l)-sparsity matroids"
)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Debug, Subcommand)]
enum Verb {
    /// Report whether the hypergraph is (k,l)-sparse and tight.
    Check {
        #[command(flatten)]
        graph: GraphArgs,
        /// Exit with status 1 unless the hypergraph is sparse.
        #[arg(long)]
        expect_sparse: bool,
    },
    /// Report whether the hypergraph is (k,l)-tight.
    Tight(GraphArgs),
    /// Find an orientation with every out-degree equal to k (needs m = kn).
    Orient(GraphArgs),
    /// Linear rank next to the combinatorial rank.
    Rank(GraphArgs),
    /// Print a realization matrix.
    Realize {
        #[command(flatten)]
        graph: GraphArgs,
        /// Also write the matrix U to this path.
        #[arg(long, value_name = "PATH")]
        emit_u: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Matrix)]
        format: Format,
    },
    /// Greedy basis of the linear matroid, in ground-set order.
    Basis(GraphArgs),
    /// A circuit inside the given edges.
    Circuit {
        #[command(flatten)]
        graph: GraphArgs,
        /// Comma-separated edge indices; defaults to every edge.
        #[arg(long, value_delimiter = ',')]
        edges: Option<Vec<usize>>,
    },
    /// Print a complete ground hypergraph.
    Complete {
        #[arg(short = 'n')]
        n: usize,
        #[arg(short = 'd', default_value_t = 2)]
        d: usize,
        /// Multiplicity of each d-subset.
        #[arg(short = 'm', default_value_t = 1)]
        m: usize,
    },
    /// Run an agreement experiment described by a JSON config.
    Experiment {
        /// Config path, inline JSON, or `-` for stdin.
        input: String,
        /// Overrides the config's base seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides the config's trials per cell.
        #[arg(long)]
        trials: Option<usize>,
        /// Overrides the config's modulus (0 = rationals).
        #[arg(long)]
        modulus: Option<u64>,
    },
}

#[derive(Debug, Args)]
struct GraphArgs {
    /// Hypergraph path, inline JSON, or `-` for stdin.
    input: String,
    #[arg(short = 'k')]
    k: usize,
    #[arg(short = 'l', default_value_t = 0)]
    ell: usize,
    /// Edge size. Omitted: taken from the hypergraph, which may then have
    /// mixed edge sizes.
    #[arg(short = 'd')]
    d: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Field modulus; 0 selects the rationals.
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    modulus: u64,
    /// Independent realizations drawn before giving up.
    #[arg(long, default_value_t = 3)]
    trials: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Matrix,
}

/// Evaluates `$body` with `$f` bound to the field selected by `$modulus`
/// (0 for the rationals).
macro_rules! with_field {
    ($modulus:expr, $f:ident, $body:expr) => {
        match $modulus {
            0 => {
                let $f = &Rationals;
                $body
            }
            p => {
                let $f = &PrimeField::new(p)?;
                $body
            }
        }
    };
}

enum Failure {
    Usage(String),
    Error(Error),
    /// Ran fine but the answer is a domain failure.
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Error(e.into())
    }
}

/// Runs the CLI and returns the process exit code: 0 on success, 1 on a
/// domain failure, 2 on a usage error.
pub fn run<I, T>(argv: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{text}");
                return 0;
            }
            let text = text.strip_prefix("error: ").unwrap_or(&text);
            let _ = write!(err, "error:usage: {text}");
            return 2;
        }
    };
    match execute(cli.verb, stdin, out) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error:usage: {msg}");
            2
        }
        Err(Failure::Domain(msg)) => {
            let _ = writeln!(err, "error:domain: {msg}");
            1
        }
        Err(Failure::Error(e)) => {
            let _ = writeln!(err, "error:{}: {e}", e.category());
            match e.category() {
                "cap" | "domain" | "discrepancy" => 1,
                _ => 2,
            }
        }
    }
}

fn read_input(input: &str, stdin: &mut dyn Read) -> std::result::Result<String, Failure> {
    if input == "-" {
        let mut text = String::new();
        stdin.read_to_string(&mut text)?;
        Ok(text)
    } else if input.trim_start().starts_with('{') {
        Ok(input.to_string())
    } else {
        std::fs::read_to_string(input)
            .map_err(|e| Failure::Usage(format!("cannot read {input}: {e}")))
    }
}

fn load(
    args: &GraphArgs,
    stdin: &mut dyn Read,
) -> std::result::Result<(Hypergraph, SparsityParams), Failure> {
    let g = Hypergraph::from_json(&read_input(&args.input, stdin)?)?;
    let p = match args.d {
        Some(d) => SparsityParams::uniform(args.k, args.ell, d)?,
        None => match g.uniform_size() {
            Some(d) => SparsityParams::uniform(args.k, args.ell, d)?,
            None => {
                let min = g.edges().iter().map(|e| e.size()).min().unwrap_or(2);
                SparsityParams::non_uniform(args.k, args.ell, min)?
            }
        },
    };
    p.check_graph(&g)?;
    Ok((g, p))
}

fn emit<T: Serialize>(out: &mut dyn Write, value: &T) -> std::result::Result<(), Failure> {
    writeln!(
        out,
        "{}",
        serde_json::to_string(value).map_err(Error::from)?
    )?;
    Ok(())
}

fn execute(
    verb: Verb,
    stdin: &mut dyn Read,
    out: &mut dyn Write,
) -> std::result::Result<(), Failure> {
    match verb {
        Verb::Check {
            graph,
            expect_sparse,
        } => {
            let (g, p) = load(&graph, stdin)?;
            let oracle = SparsityOracle::default();
            let verdict = oracle.is_sparse(&g, &p)?;
            let tight = verdict.is_sparse() && g.m() as i64 == p.bound(g.n());
            let report = match &verdict.violation {
                None => json!({"sparse": true, "tight": tight}),
                Some(v) => json!({"sparse": false, "tight": false, "violation": v}),
            };
            emit(out, &report)?;
            if expect_sparse && !verdict.is_sparse() {
                return Err(Failure::Domain("hypergraph is not sparse".into()));
            }
            Ok(())
        }
        Verb::Tight(graph) => {
            let (g, p) = load(&graph, stdin)?;
            let tight = SparsityOracle::default().is_tight(&g, &p)?;
            emit(out, &json!({ "tight": tight }))
        }
        Verb::Orient(graph) => {
            let (g, _) = load(&graph, stdin)?;
            let orientation = find_orientation(&g, graph.k)?;
            emit(out, &json!({ "orientation": orientation }))
        }
        Verb::Realize {
            graph,
            emit_u,
            format,
        } => {
            let (g, p) = load(&graph, stdin)?;
            with_field!(
                graph.modulus,
                f,
                realize(f, &g, &p, &graph, emit_u.as_deref(), format, out)
            )
        }
        Verb::Rank(graph) => {
            let (g, p) = load(&graph, stdin)?;
            with_field!(graph.modulus, f, rank(f, &g, &p, &graph, out))
        }
        Verb::Basis(graph) => {
            let (g, p) = load(&graph, stdin)?;
            let seeds = derive_seeds(graph.seed, graph.trials.max(1));
            let basis = with_field!(
                graph.modulus,
                f,
                LinearMatroid::new(&g, &p, f, &seeds)?.basis()
            );
            emit(out, &json!({ "rank": basis.len(), "basis": basis }))
        }
        Verb::Circuit { graph, edges } => {
            let (g, p) = load(&graph, stdin)?;
            let idx = edges.unwrap_or_else(|| (0..g.m()).collect());
            let seeds = derive_seeds(graph.seed, graph.trials.max(1));
            let circuit = with_field!(
                graph.modulus,
                f,
                LinearMatroid::new(&g, &p, f, &seeds)?.circuit(&idx)?
            );
            emit(out, &json!({ "circuit": circuit }))
        }
        Verb::Complete { n, d, m } => {
            let g = Hypergraph::complete_uniform(n, d, m)?;
            writeln!(out, "{}", g.to_json())?;
            Ok(())
        }
        Verb::Experiment {
            input,
            seed,
            trials,
            modulus,
        } => {
            let text = read_input(&input, stdin)?;
            let mut cfg: ExperimentConfig = serde_json::from_str(&text).map_err(Error::from)?;
            if let Some(s) = seed {
                cfg.base_seed = s;
            }
            if let Some(t) = trials {
                cfg.trials = t;
            }
            if let Some(p) = modulus {
                cfg.modulus = p;
            }
            let summary = run_experiment(&cfg, out)?;
            if summary.agreements < summary.records {
                return Err(Failure::Domain(format!(
                    "{} of {} trials disagree",
                    summary.records - summary.agreements,
                    summary.records
                )));
            }
            Ok(())
        }
    }
}

fn realize<F: Field>(
    field: &F,
    g: &Hypergraph,
    p: &SparsityParams,
    args: &GraphArgs,
    emit_u: Option<&str>,
    format: Format,
    out: &mut dyn Write,
) -> std::result::Result<(), Failure> {
    let r = realize_kl(g, p, field, args.seed)?;
    let header = json!({
        "k": p.k,
        "l": p.ell,
        "d": p.d(),
        "n": g.n(),
        "m": g.m(),
        "seed": args.seed,
        "modulus": field.spec().modulus(),
    });
    match format {
        Format::Matrix => {
            writeln!(out, "{header}")?;
            write!(out, "{}", write_matrix(field, r.matrix()))?;
        }
        Format::Json => {
            let m = r.matrix();
            let rows: Vec<Vec<String>> = (0..m.rows())
                .map(|i| m.row(i).iter().map(|x| field.format(x)).collect())
                .collect();
            emit(out, &json!({ "header": header, "matrix": rows }))?;
        }
    }
    if let Some(path) = emit_u {
        std::fs::write(path, write_matrix(field, r.u()))?;
    }
    Ok(())
}

fn rank<F: Field>(
    field: &F,
    g: &Hypergraph,
    p: &SparsityParams,
    args: &GraphArgs,
    out: &mut dyn Write,
) -> std::result::Result<(), Failure> {
    let policy = RetryPolicy {
        retries: args.trials.max(1) - 1,
        ..RetryPolicy::default()
    };
    let oracle = SparsityOracle::default();
    let report = if g.n() <= oracle.cap() {
        cross_validate(g, p, field, args.seed, policy, &oracle)?
    } else {
        linear_report(g, p, field, args.seed, policy)?
    };
    writeln!(out, "{}", report.to_json())?;
    Ok(())
}
