//! Command-line front end: every library computation as a subcommand with
//! text and JSON output.
//!
//! Exit codes: 0 on success, 1 when a verification ran and failed (or a
//! resource ceiling stopped the computation), 2 on usage errors.

use std::io::Read as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use relfm::algebra::{
    buchberger_with, normal_form, parse_expression, OrderKind, RankVector,
};
use relfm::combinatorics::{enumerate_chains, enumerate_nests};
use relfm::decomposition::{
    brackets_summands, distinct_summands, motive_expression, poincare_from_summands, Summand,
};
use relfm::geometry::{GeometrySpec, Space};
use relfm::presentation::{build_brackets, build_distinct, OverlapSemantics, RingPresentation};
use relfm::verify::{semantics_discriminate, verify_space, Budget};
use relfm::{Error, Result};

#[derive(Parser)]
#[command(
    name = "relfm",
    version,
    about = "Chow rings of compactified point configurations relative to a subspace: \
             presentations, Hilbert series, and additive decompositions"
)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpaceArg {
    /// The compactification whose boundary records clusters on D.
    Brackets,
    /// The compactification that also separates colliding points.
    Distinct,
}

impl SpaceArg {
    fn to_space(self) -> Space {
        match self {
            SpaceArg::Brackets => Space::Brackets,
            SpaceArg::Distinct => Space::Distinct,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SemanticsArg {
    /// Kill x_S·x_T whenever neither index set contains the other.
    Incomparable,
    /// Kill x_S·x_T only for crossing index sets.
    Standard,
}

impl SemanticsArg {
    fn to_semantics(self) -> OverlapSemantics {
        match self {
            SemanticsArg::Incomparable => OverlapSemantics::Incomparable,
            SemanticsArg::Standard => OverlapSemantics::Standard,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Args)]
struct SpecArgs {
    /// Which compactification to work in.
    #[arg(long, value_enum)]
    space: SpaceArg,
    /// Dimension of the ambient projective space X = P^m.
    #[arg(long)]
    m: u64,
    /// Number of points.
    #[arg(long)]
    n: usize,
    /// Codimension of the distinguished linear subspace D (0 = empty D).
    #[arg(long, default_value_t = 1)]
    codim: u64,
}

impl SpecArgs {
    fn to_spec(&self) -> Result<GeometrySpec> {
        GeometrySpec::try_new(self.m, self.n, self.codim, self.space.to_space())
    }
}

#[derive(Args)]
struct CommonArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Which x_S·x_T products are relations.
    #[arg(long, value_enum, default_value_t = SemanticsArg::Incomparable)]
    semantics: SemanticsArg,
    /// Explicit Gröbner pair budget; also admits instances beyond the
    /// default verification ceiling.
    #[arg(long)]
    budget: Option<usize>,
    /// Assert that the run uses no randomness. Always true — every
    /// computation here is deterministic; the flag exists for scripting.
    #[arg(long)]
    seedless: bool,
}

impl CommonArgs {
    fn to_budget(&self) -> Budget {
        match self.budget {
            Some(limit) => Budget::with_limit(limit),
            None => Budget::default(),
        }
    }
}

#[derive(Subcommand)]
enum Verb {
    /// Rank vector through the additive decomposition route.
    Betti {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// Allow the combined decomposition at codimension >= 2 (an
        /// untested analogy, off by default).
        #[arg(long)]
        experimental: bool,
    },
    /// Generators-and-relations dump of the chosen presentation.
    Presentation {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Rank vector through the Gröbner/Hilbert route.
    Hilbert {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Formal motive sum of the additive decomposition.
    Motive {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// Allow the combined decomposition at codimension >= 2.
        #[arg(long)]
        experimental: bool,
    },
    /// Enumerate the nests on {1..n}.
    Nests {
        /// Number of points.
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Enumerate the chains on {1..n} (singleton minima iff codim >= 2).
    Chains {
        /// Number of points.
        #[arg(long)]
        n: usize,
        /// Codimension of D; singleton chain minima are admissible from 2 up.
        #[arg(long, default_value_t = 1)]
        codim: u64,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Cross-method verification: both routes must give identical ranks.
    Verify {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Decide the x-overlap semantics empirically at four points.
    Discriminate {
        /// Ambient dimension (budgets restrict this to 1).
        #[arg(long, default_value_t = 1)]
        m: u64,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Normal form of the product of two class expressions in a
    /// presentation, read as the first two nonempty lines of the input.
    Multiply {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// File holding the two expressions; stdin when omitted.
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.verb) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Argument(_) | Error::Unsupported(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn build_for(spec: &GeometrySpec, sem: OverlapSemantics) -> Result<RingPresentation> {
    match spec.space {
        Space::Brackets => build_brackets(spec, sem),
        Space::Distinct => build_distinct(spec, sem),
    }
}

fn summands_for(spec: &GeometrySpec, experimental: bool) -> Result<Vec<Summand>> {
    match spec.space {
        Space::Brackets => brackets_summands(spec),
        Space::Distinct => distinct_summands(spec, experimental),
    }
}

fn ranks_json(ranks: &RankVector) -> Value {
    Value::from(ranks.ranks().to_vec())
}

fn ranks_text(ranks: &RankVector) -> String {
    format!("{:?}", ranks.ranks())
}

/// Prints one line, exiting quietly when the reader has gone away (e.g.
/// `relfm chains --n 5 | head`), as conventional line tools do.
fn print_line(line: &str) {
    use std::io::Write as _;
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    if let Err(e) = writeln!(lock, "{line}") {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: cannot write to stdout: {e}");
        std::process::exit(1);
    }
}

fn emit(format: FormatArg, text: String, json: Value) {
    match format {
        FormatArg::Text => print_line(&text),
        FormatArg::Json => {
            print_line(&serde_json::to_string(&json).expect("serializable value"))
        }
    }
}

fn run(verb: Verb) -> Result<ExitCode> {
    match verb {
        Verb::Betti {
            spec,
            common,
            experimental,
        } => {
            let spec = spec.to_spec()?;
            let summands = summands_for(&spec, experimental)?;
            let ranks = poincare_from_summands(&spec, &summands)?;
            emit(
                common.format,
                ranks_text(&ranks),
                json!({"schema": 1, "spec": spec, "ranks": ranks_json(&ranks)}),
            );
            Ok(ExitCode::SUCCESS)
        }
        Verb::Presentation { spec, common } => {
            let spec = spec.to_spec()?;
            let pres = build_for(&spec, common.semantics.to_semantics())?;
            let mut payload = pres.to_json();
            payload["schema"] = json!(1);
            emit(common.format, pres.render_text(), payload);
            Ok(ExitCode::SUCCESS)
        }
        Verb::Hilbert { spec, common } => {
            let spec = spec.to_spec()?;
            let budget = common.to_budget();
            budget.ensure_admits(&spec)?;
            let sem = common.semantics.to_semantics();
            let pres = build_for(&spec, sem)?;
            let ranks =
                relfm::verify::presentation_ranks(&pres, OrderKind::DegRevLex, &budget)?;
            emit(
                common.format,
                ranks_text(&ranks),
                json!({
                    "schema": 1,
                    "spec": spec,
                    "semantics": sem,
                    "ranks": ranks_json(&ranks),
                }),
            );
            Ok(ExitCode::SUCCESS)
        }
        Verb::Motive {
            spec,
            common,
            experimental,
        } => {
            let spec = spec.to_spec()?;
            let summands = summands_for(&spec, experimental)?;
            let motive = motive_expression(&summands)?;
            let mut payload = motive.to_json();
            payload["schema"] = json!(1);
            payload["spec"] = serde_json::to_value(spec).expect("serializable spec");
            payload["text"] = json!(motive.to_string());
            emit(common.format, motive.to_string(), payload);
            Ok(ExitCode::SUCCESS)
        }
        Verb::Nests { n, common } => {
            let nests = enumerate_nests(n)?;
            let lines: Vec<String> = nests.iter().map(|x| x.to_string()).collect();
            emit(
                common.format,
                lines.join("\n"),
                json!({"schema": 1, "n": n, "count": lines.len(), "nests": lines}),
            );
            Ok(ExitCode::SUCCESS)
        }
        Verb::Chains { n, codim, common } => {
            let chains = enumerate_chains(n, codim >= 2)?;
            let lines: Vec<String> = chains.iter().map(|x| x.to_string()).collect();
            emit(
                common.format,
                lines.join("\n"),
                json!({
                    "schema": 1,
                    "n": n,
                    "codim": codim,
                    "count": lines.len(),
                    "chains": lines,
                }),
            );
            Ok(ExitCode::SUCCESS)
        }
        Verb::Verify { spec, common } => {
            let spec = spec.to_spec()?;
            let report = verify_space(&spec, common.semantics.to_semantics(), &common.to_budget())?;
            let text = format!(
                "presentation ranks: {}\ndecomposition ranks: {}\nequal: {}\npalindromic: {}\ntop rank one: {}\npassed: {}",
                ranks_text(&report.ranks_presentation),
                ranks_text(&report.ranks_decomposition),
                report.equal,
                report.palindromic,
                report.top_rank_one,
                report.passed(),
            );
            let passed = report.passed();
            emit(common.format, text, report.to_json());
            Ok(if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Verb::Discriminate { m, common } => {
            let report = semantics_discriminate(m, &common.to_budget())?;
            let text = format!(
                "decomposition ranks: {}\nincomparable ranks: {}\nstandard ranks: {}\nmatching: {}\ndegree-2 excess of standard: {}\nconsistent: {}",
                ranks_text(&report.decomposition),
                ranks_text(&report.incomparable),
                ranks_text(&report.standard),
                report.matching.join(", "),
                report.degree_two_excess,
                report.consistent,
            );
            let consistent = report.consistent;
            emit(common.format, text, report.to_json());
            Ok(if consistent {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Verb::Multiply {
            spec,
            common,
            input,
        } => {
            let spec = spec.to_spec()?;
            let budget = common.to_budget();
            budget.ensure_admits(&spec)?;
            let raw = match input {
                Some(path) => std::fs::read_to_string(&path).map_err(|e| {
                    Error::argument(format!("cannot read {}: {e}", path.display()))
                })?,
                None => {
                    let mut buf = String::new();
                    std::io::stdin()
                        .read_to_string(&mut buf)
                        .map_err(|e| Error::argument(format!("cannot read stdin: {e}")))?;
                    buf
                }
            };
            let exprs: Vec<&str> = raw
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .collect();
            if exprs.len() < 2 {
                return Err(Error::argument(
                    "multiply needs two expressions, one per nonempty line",
                ));
            }
            let pres = build_for(&spec, common.semantics.to_semantics())?;
            let order = pres.elimination_order();
            let gb = buchberger_with(&pres.generators(), order.clone(), &budget.config())?;
            let f = parse_expression(pres.table(), exprs[0])?;
            let g = parse_expression(pres.table(), exprs[1])?;
            let product = normal_form(&f.mul(&g)?, &gb)?;
            let rendered = product.render(&order);
            emit(
                common.format,
                rendered.clone(),
                json!({
                    "schema": 1,
                    "spec": spec,
                    "inputs": [exprs[0], exprs[1]],
                    "product": rendered,
                }),
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}
