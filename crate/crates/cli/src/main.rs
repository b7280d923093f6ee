//! `cordial`: construct, verify, search and survey cordial labelings of
//! paths and cycles over finite abelian groups.

mod solve;
mod survey;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use cordial::{parse_graph, parse_group, verify, Error, LabelConstraint, Labeling, SearchBudget};
use serde_json::json;

use solve::{Solved, Status};
use survey::{groups_in, parse_range, SurveyPlan};

const EXIT_USAGE: u8 = 1;
const EXIT_NOT_CORDIAL: u8 = 2;
const EXIT_UNKNOWN: u8 = 3;
const EXIT_VERIFY: u8 = 4;

#[derive(Parser)]
#[command(
    name = "cordial",
    version,
    about = "Cordial labelings of paths and cycles over finite abelian groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a cordial labeling, or show that none exists.
    Label {
        #[arg(short = 'g', long)]
        group: String,
        #[arg(short = 'G', long)]
        graph: String,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Check a labeling file (`-` reads standard input).
    Verify { input: PathBuf },
    /// Run the backtracking search directly.
    Search {
        #[arg(short = 'g', long)]
        group: String,
        #[arg(short = 'G', long)]
        graph: String,
        /// Require pairwise distinct labels.
        #[arg(long)]
        injective: bool,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Tabulate many (group, graph) instances.
    Survey(SurveyArgs),
}

#[derive(Args, Clone, Copy)]
struct BudgetArgs {
    /// Node budget per search.
    #[arg(long, default_value_t = SearchBudget::default().max_nodes)]
    budget_nodes: u64,
    /// Wall-clock budget per search, in milliseconds.
    #[arg(long, default_value_t = SearchBudget::default().max_millis)]
    budget_ms: u64,
}

impl BudgetArgs {
    fn budget(self) -> Result<SearchBudget> {
        Ok(SearchBudget::new(self.budget_nodes, self.budget_ms)?)
    }
}

#[derive(Args)]
struct SurveyArgs {
    #[arg(short = 'g', long, conflicts_with_all = ["odd_orders", "orders"])]
    group: Option<String>,
    /// Every group of odd order in the range.
    #[arg(long, conflicts_with = "orders")]
    odd_orders: Option<String>,
    /// Every group of order in the range.
    #[arg(long)]
    orders: Option<String>,
    #[arg(long)]
    paths: Option<String>,
    #[arg(long)]
    cycles: Option<String>,
    /// Write every cordial labeling into this directory.
    #[arg(long)]
    emit: Option<PathBuf>,
    /// Re-decide small instances by plain search.
    #[arg(long)]
    cross_check: bool,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
    /// Fill the millis column; without it the column is 0 and output is
    /// reproducible byte for byte.
    #[arg(long)]
    timing: bool,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let internal = e
                .chain()
                .any(|c| matches!(c.downcast_ref::<Error>(), Some(Error::Internal { .. })));
            ExitCode::from(if internal { EXIT_VERIFY } else { EXIT_USAGE })
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Label {
            group,
            graph,
            output,
            budget,
        } => {
            let (g, s) = (parse_group(&group)?, parse_graph(&graph)?);
            let solved = solve::solve(&g, &s, budget.budget()?)?;
            report_solved(&g, &s, solved, output)
        }
        Command::Search {
            group,
            graph,
            injective,
            output,
            budget,
        } => {
            let (g, s) = (parse_group(&group)?, parse_graph(&graph)?);
            let cons = if injective {
                LabelConstraint::injective()
            } else {
                LabelConstraint::none()
            };
            let solved = solve::search(&g, &s, &cons, budget.budget()?)?;
            report_solved(&g, &s, solved, output)
        }
        Command::Verify { input } => cmd_verify(&input),
        Command::Survey(args) => cmd_survey(args),
    }
}

fn write_out(output: Option<&PathBuf>, text: &str) -> Result<()> {
    match output {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn report_solved(
    group: &cordial::GroupSpec,
    shape: &cordial::GraphShape,
    solved: Solved,
    output: Option<PathBuf>,
) -> Result<u8> {
    let mut doc = json!({
        "v": 1,
        "group": group.to_string(),
        "graph": shape.to_string(),
        "status": solved.status.as_str(),
        "method": solved.method,
        "nodes": solved.nodes,
    });
    if let Some(reason) = &solved.reason {
        doc["reason"] = json!(reason);
    }
    let mut code = match solved.status {
        Status::Cordial => 0,
        Status::NotCordial => EXIT_NOT_CORDIAL,
        Status::Unknown => EXIT_UNKNOWN,
    };
    if let Some(lab) = &solved.labeling {
        // Round trip through the wire format before trusting the result.
        let back = Labeling::from_json(&lab.to_json())?;
        let report = verify(&back);
        if !report.cordial || &back != lab {
            code = EXIT_VERIFY;
        }
        doc["labeling"] = serde_json::to_value(lab.to_doc())?;
        doc["report"] = serde_json::to_value(report)?;
    }
    let mut text = serde_json::to_string_pretty(&doc)?;
    text.push('\n');
    write_out(output.as_ref(), &text)?;
    Ok(code)
}

fn cmd_verify(input: &PathBuf) -> Result<u8> {
    let text = if input.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?
    };
    // Accept the document `label` writes as well as a bare labeling.
    let value: serde_json::Value = serde_json::from_str(&text).context("parsing labeling JSON")?;
    let lab = match value.get("labeling") {
        Some(inner) => Labeling::from_json(&inner.to_string())?,
        None => Labeling::from_json(&text)?,
    };
    let report = verify(&lab);
    let doc = json!({
        "v": 1,
        "group": lab.group().to_string(),
        "graph": lab.shape().to_string(),
        "cordial": report.cordial,
        "vertex_balanced": report.vertex_balanced,
        "edge_balanced": report.edge_balanced,
        "vertex_counts": report.vertex_counts,
        "edge_counts": report.edge_counts,
        "elements": lab.group().elements().iter().map(|e| e.residues().to_vec()).collect::<Vec<_>>(),
    });
    println!("{}", serde_json::to_string_pretty(&doc)?);
    Ok(if report.cordial { 0 } else { EXIT_VERIFY })
}

fn cmd_survey(args: SurveyArgs) -> Result<u8> {
    let groups = match (&args.group, &args.odd_orders, &args.orders) {
        (Some(g), _, _) => vec![parse_group(g)?],
        (None, Some(r), _) => groups_in(parse_range(r)?, true),
        (None, None, Some(r)) => groups_in(parse_range(r)?, false),
        (None, None, None) => bail!("survey needs -g, --odd-orders or --orders"),
    };
    let mut shapes = Vec::new();
    if let Some(r) = &args.paths {
        for n in parse_range(r)? {
            shapes.push(cordial::GraphShape::path(n)?);
        }
    }
    if let Some(r) = &args.cycles {
        for n in parse_range(r)? {
            shapes.push(cordial::GraphShape::cycle(n)?);
        }
    }
    if shapes.is_empty() {
        bail!("survey needs --paths or --cycles");
    }
    let plan = SurveyPlan {
        groups,
        shapes,
        budget: args.budget.budget()?,
        jobs: args.jobs,
        timing: args.timing,
        cross_check: args.cross_check,
        emit: args.emit.clone(),
    };
    let result = survey::run(&plan)?;
    let text = match args.format {
        Format::Csv => survey::to_csv(&result.rows)?,
        Format::Json => survey::to_json(&result.rows)?,
    };
    write_out(args.output.as_ref(), &text)?;
    for d in &result.disagreements {
        eprintln!("cross-check disagreement: {d}");
    }
    Ok(if result.disagreements.is_empty() {
        0
    } else {
        EXIT_VERIFY
    })
}
