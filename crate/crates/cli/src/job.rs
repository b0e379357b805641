//! Command-line flags, the optional TOML config, and their validation into a [`JobSpec`].

use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use sagbi_core::hilbert::Grading;
use sagbi_core::matchings::Mode;
use sagbi_core::minors::{diagonal_order, minor_polynomial, minor_polynomials, submax_lex_order, MatrixRing};
use sagbi_core::poly::parse_polynomial_list;
use sagbi_core::sagbi::{SagbiOptions, Stop};
use sagbi_core::universal::UniversalCase;
use sagbi_core::{Field, MonomialOrder, Polynomial, RingContext};

const SAGBI_COLUMNS: &str = "\
TSV output:
  summary line   #SAGBI, #rel, max_deg_sagbi, max_deg_rel, status
                 (#rel counts minimized generators of the defining ideal; degrees are ambient)
  basis lines    index, degree, initial monomial, polynomial
  with --relations (or the `relations` command) the defining ideal follows:
  relation lines index, degree, polynomial in Y1..Yk
  rho lines      index, expression of the basis element in Y1..Yk";

const MATCHINGS_COLUMNS: &str = "\
TSV output: '#' lines carry shape, group order, totals and sampling parameters, then one row per orbit:
  canonical     lex-smallest matrix of the orbit, rows separated by ';'
  orbit_size    number of vertices in the orbit
  full_support  whether every entry is positive
  h_vector      numerator of the Hilbert series of the matching's toric algebra, or 'truncated'
  first_defect  first degree where the Hilbert function falls short of the reference, or 'none'";

const HILBERT_COLUMNS: &str = "\
TSV output: one row per degree k with columns k, H(k); a '#' line reports the grading, the
Krull dimension and the h-vector when they are known.";

const VERIFY_COLUMNS: &str = "\
Cases: a233 (M_2 plus X_ij*Delta in 3x3), g36 (the four structured types of G(3,6)), g37
(seeded random coherent matchings of G(3,7); needs --seed). Exit code 0 when the case verifies,
1 with a counterexample otherwise.";

#[derive(Parser, Debug)]
#[command(name = "sagbi", version, about = "SAGBI bases, defining ideals and coherent matchings of minors")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// TOML file with defaults for any flag; flags given on the command line win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Worker threads (default: available cores).
    #[arg(long, env = "SAGBI_THREADS", global = true)]
    pub threads: Option<usize>,

    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,

    /// Grading used for Hilbert functions.
    #[arg(long, value_enum, global = true)]
    pub grading: Option<GradingArg>,

    /// Seed for randomized modes.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute a SAGBI basis and report its size and the size of the defining ideal.
    #[command(after_help = SAGBI_COLUMNS)]
    Sagbi {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        bounds: BoundArgs,
        /// Also print the relations and the retract expressions.
        #[arg(long)]
        relations: bool,
    },
    /// Compute the defining ideal of the subalgebra generated by the input.
    #[command(after_help = SAGBI_COLUMNS)]
    Relations {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Enumerate coherent matchings (vertices of the Newton polytope) up to symmetry.
    #[command(after_help = MATCHINGS_COLUMNS)]
    Matchings {
        #[command(flatten)]
        input: InputArgs,
        /// Bound on the size of the selection space in exhaustive mode.
        #[arg(long)]
        cap: Option<u128>,
        /// Sample random weights instead of enumerating.
        #[arg(long)]
        random: bool,
        /// Random mode: maximal number of samples.
        #[arg(long)]
        trials: Option<usize>,
        /// Random mode: stop after this many consecutive samples without a new orbit.
        #[arg(long)]
        stall: Option<usize>,
        /// Only report full-support orbits.
        #[arg(long)]
        full_support: bool,
        /// Degree up to which orbit representatives are compared with the reference.
        #[arg(long)]
        k_max: Option<usize>,
    },
    /// Run a universal SAGBI verification.
    #[command(after_help = VERIFY_COLUMNS)]
    Verify {
        #[arg(value_enum)]
        case: CaseArg,
        /// Number of samples for g37.
        #[arg(long)]
        count: Option<usize>,
    },
    /// Hilbert function of the subalgebra generated by the input.
    #[command(after_help = HILBERT_COLUMNS)]
    Hilbert {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        k_max: Option<usize>,
        /// `semigroup` counts the initial algebra of a degree-bounded SAGBI run;
        /// `linear` ranks the graded pieces of the subalgebra directly.
        #[arg(long, value_enum)]
        method: Option<MethodArg>,
    },
}

#[derive(Args, Debug, Default)]
pub struct InputArgs {
    /// Generic matrix shape `MxN`; variables are X11..Xmn.
    #[arg(long)]
    pub matrix: Option<String>,
    /// Use the t-minors of the matrix as generators.
    #[arg(long)]
    pub minors: Option<usize>,
    /// Add the determinant of the (square) matrix to the generators.
    #[arg(long)]
    pub det: bool,
    /// Comma-separated variable names when no matrix is given.
    #[arg(long)]
    pub vars: Option<String>,
    /// Characteristic of the coefficient field (0 or a prime).
    #[arg(long = "char")]
    pub characteristic: Option<u64>,
    /// Generators separated by ';'.
    #[arg(long)]
    pub gens: Option<String>,
    /// File with generators separated by ';' ('#' starts a comment line).
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Monomial order: diagonal, submax, lex, degrevlex, or weight:w1,w2,... (degrevlex tiebreak).
    #[arg(long)]
    pub order: Option<String>,
}

#[derive(Args, Debug, Default)]
pub struct BoundArgs {
    /// Run the degree-by-degree variant up to this normalized degree.
    #[arg(long)]
    pub degree: Option<u64>,
    /// Maximal number of rounds of the general variant (default 10).
    #[arg(long)]
    pub rounds: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Tsv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GradingArg {
    Ambient,
    Normalized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CaseArg {
    A233,
    G36,
    G37,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Semigroup,
    Linear,
}

/// Same keys as the long flags, with `-` written as `_`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub threads: Option<usize>,
    pub format: Option<Format>,
    pub grading: Option<GradingArg>,
    pub seed: Option<u64>,
    pub matrix: Option<String>,
    pub minors: Option<usize>,
    pub det: Option<bool>,
    pub vars: Option<String>,
    #[serde(rename = "char")]
    pub characteristic: Option<u64>,
    pub gens: Option<String>,
    pub file: Option<PathBuf>,
    pub order: Option<String>,
    pub degree: Option<u64>,
    pub rounds: Option<usize>,
    pub cap: Option<u64>,
    pub random: Option<bool>,
    pub trials: Option<usize>,
    pub stall: Option<usize>,
    pub full_support: Option<bool>,
    pub k_max: Option<usize>,
    pub count: Option<usize>,
    pub method: Option<MethodArg>,
}

/// Invalid input; reported with exit code 2.
#[derive(Debug)]
pub struct Usage(pub String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Usage {
        Usage(e.to_string())
    }
}

pub fn load_config(path: Option<&Path>) -> Result<Config, Usage> {
    let Some(path) = path else { return Ok(Config::default()) };
    let text = std::fs::read_to_string(path).map_err(|e| Usage(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| Usage(format!("{}: {e}", path.display())))
}

/// A ring with its generators and order.
pub struct Input {
    pub ring: Arc<RingContext>,
    pub matrix: Option<MatrixRing>,
    pub gens: Vec<Polynomial>,
    pub order: MonomialOrder,
    pub description: String,
}

pub enum Task {
    Sagbi { opts: SagbiOptions, relations: bool, only_relations: bool },
    Matchings { mode: Mode, full_support: bool, k_max: usize },
    Verify(UniversalCase),
    Hilbert { k_max: usize, method: MethodArg },
}

/// Everything a command needs, validated.
pub struct JobSpec {
    pub task: Task,
    pub input: Option<Input>,
    pub format: Format,
    pub grading: Grading,
    pub threads: Option<usize>,
}

fn shape(s: &str) -> Result<(usize, usize), Usage> {
    let (m, n) = s.split_once(['x', 'X']).ok_or_else(|| Usage(format!("matrix shape `{s}` is not MxN")))?;
    Ok((m.trim().parse()?, n.trim().parse()?))
}

fn order_for(spec: &str, ring: &RingContext, matrix: Option<&MatrixRing>) -> Result<MonomialOrder, Usage> {
    let n = ring.nvars();
    Ok(match spec {
        "diagonal" => diagonal_order(matrix.ok_or_else(|| Usage("the diagonal order needs --matrix".into()))?),
        "submax" => submax_lex_order(matrix.ok_or_else(|| Usage("the submax order needs --matrix".into()))?)?,
        "lex" => MonomialOrder::lex(n),
        "degrevlex" => MonomialOrder::degrevlex(n),
        w if w.starts_with("weight:") => {
            let weights = w["weight:".len()..].split(',').map(|x| x.trim().parse::<i64>()).collect::<Result<Vec<_>, _>>()?;
            if weights.len() != n {
                return Err(Usage(format!("weight has {} entries for {n} variables", weights.len())));
            }
            MonomialOrder::weight(weights, MonomialOrder::degrevlex(n))?
        }
        other => return Err(Usage(format!("unknown order `{other}`"))),
    })
}

fn build_input(a: InputArgs, cfg: &Config) -> Result<Input, Usage> {
    let field = Field::new(a.characteristic.or(cfg.characteristic).unwrap_or(0))?;
    let matrix_spec = a.matrix.or_else(|| cfg.matrix.clone());
    let minors = a.minors.or(cfg.minors);
    let det = a.det || cfg.det.unwrap_or(false);
    let gens_text = a.gens.or_else(|| cfg.gens.clone());
    let file = a.file.or_else(|| cfg.file.clone());
    let vars = a.vars.or_else(|| cfg.vars.clone());
    let matrix = match &matrix_spec {
        Some(s) => {
            let (m, n) = shape(s)?;
            Some(MatrixRing::with_field(m, n, field)?)
        }
        None => None,
    };
    let ring = match (&matrix, &vars) {
        (Some(_), Some(_)) => return Err(Usage("give either --matrix or --vars".into())),
        (Some(mr), None) => mr.ring().clone(),
        (None, Some(v)) => RingContext::new(v.split(',').map(|x| x.trim().to_string()).collect(), field)?,
        (None, None) => return Err(Usage("no ring: give --matrix or --vars".into())),
    };
    let mut gens = Vec::new();
    let mut parts = Vec::new();
    if let Some(t) = minors {
        let mr = matrix.as_ref().ok_or_else(|| Usage("--minors needs --matrix".into()))?;
        gens.extend(minor_polynomials(t, mr)?);
        parts.push(format!("{t}-minors"));
    }
    if det {
        let mr = matrix.as_ref().ok_or_else(|| Usage("--det needs --matrix".into()))?;
        if mr.rows() != mr.cols() {
            return Err(Usage("--det needs a square matrix".into()));
        }
        let all: Vec<usize> = (0..mr.rows()).collect();
        gens.push(minor_polynomial(mr, &all, &all)?);
        parts.push("det".into());
    }
    if let Some(text) = &gens_text {
        gens.extend(parse_polynomial_list(&ring, text)?);
        parts.push("inline".into());
    }
    if let Some(path) = &file {
        let text = std::fs::read_to_string(path).map_err(|e| Usage(format!("{}: {e}", path.display())))?;
        gens.extend(parse_polynomial_list(&ring, &text)?);
        parts.push(path.display().to_string());
    }
    if gens.is_empty() {
        return Err(Usage("empty generator list".into()));
    }
    if let Some(i) = gens.iter().position(|g| g.is_zero()) {
        return Err(Usage(format!("generator {} is zero", i + 1)));
    }
    let default_order = if matrix.is_some() { "diagonal" } else { "degrevlex" };
    let order_spec = a.order.or_else(|| cfg.order.clone()).unwrap_or_else(|| default_order.into());
    let order = order_for(&order_spec, &ring, matrix.as_ref())?;
    let description = format!("{ring} generators {} order {order_spec}", parts.join("+"));
    Ok(Input { ring, matrix, gens, order, description })
}

fn sagbi_options(b: BoundArgs, cfg: &Config) -> SagbiOptions {
    match b.degree.or(cfg.degree) {
        Some(d) => SagbiOptions::by_degree(d),
        None => SagbiOptions::general(Stop::Rounds(b.rounds.or(cfg.rounds).unwrap_or(10))),
    }
}

impl JobSpec {
    pub fn from_cli(cli: Cli) -> Result<JobSpec, Usage> {
        let cfg = load_config(cli.config.as_deref())?;
        let seed = cli.seed.or(cfg.seed);
        let format = cli.format.or(cfg.format).unwrap_or(Format::Tsv);
        let grading = match cli.grading.or(cfg.grading).unwrap_or(GradingArg::Normalized) {
            GradingArg::Ambient => Grading::Ambient,
            GradingArg::Normalized => Grading::Normalized,
        };
        let threads = cli.threads.or(cfg.threads);
        if threads == Some(0) {
            return Err(Usage("--threads must be positive".into()));
        }
        let (task, input) = match cli.command {
            Command::Sagbi { input, bounds, relations } => {
                let opts = sagbi_options(bounds, &cfg);
                (Task::Sagbi { opts, relations, only_relations: false }, Some(build_input(input, &cfg)?))
            }
            Command::Relations { input, bounds } => {
                let opts = sagbi_options(bounds, &cfg);
                (Task::Sagbi { opts, relations: true, only_relations: true }, Some(build_input(input, &cfg)?))
            }
            Command::Matchings { input, cap, random, trials, stall, full_support, k_max } => {
                let input = build_input(input, &cfg)?;
                if input.matrix.is_none() {
                    return Err(Usage("matchings need --matrix".into()));
                }
                let mode = if random || cfg.random.unwrap_or(false) {
                    let seed = seed.ok_or_else(|| Usage("random mode needs --seed".into()))?;
                    Mode::Random {
                        trials: trials.or(cfg.trials).unwrap_or(100_000),
                        stall_limit: stall.or(cfg.stall).unwrap_or(2_000),
                        seed,
                    }
                } else {
                    Mode::Exhaustive { cap: cap.or(cfg.cap.map(u128::from)).unwrap_or(Mode::DEFAULT_CAP) }
                };
                let full_support = full_support || cfg.full_support.unwrap_or(false);
                (Task::Matchings { mode, full_support, k_max: k_max.or(cfg.k_max).unwrap_or(6) }, Some(input))
            }
            Command::Verify { case, count } => {
                let case = match case {
                    CaseArg::A233 => UniversalCase::A233,
                    CaseArg::G36 => UniversalCase::G36,
                    CaseArg::G37 => UniversalCase::G37Sampled {
                        count: count.or(cfg.count).unwrap_or(50),
                        seed: seed.ok_or_else(|| Usage("g37 sampling needs --seed".into()))?,
                    },
                };
                (Task::Verify(case), None)
            }
            Command::Hilbert { input, k_max, method } => {
                let k_max = k_max.or(cfg.k_max).unwrap_or(6);
                let method = method.or(cfg.method).unwrap_or(MethodArg::Semigroup);
                (Task::Hilbert { k_max, method }, Some(build_input(input, &cfg)?))
            }
        };
        Ok(JobSpec { task, input, format, grading, threads })
    }
}
