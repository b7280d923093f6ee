use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use cordial::{groups_of_order, verify, GraphShape, GroupSpec, LabelConstraint, SearchBudget};
use rayon::prelude::*;
use serde::Serialize;

use crate::solve::{search, solve, Status};

/// Cross-checks only run on instances this small.
const CROSS_CHECK_MAX_ORDER: u64 = 16;
const CROSS_CHECK_MAX_VERTICES: usize = 24;
const CROSS_CHECK_NODES: u64 = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurveyRow {
    pub group: String,
    pub graph: String,
    pub status: String,
    pub method: String,
    pub nodes: u64,
    pub millis: u64,
}

pub struct SurveyPlan {
    pub groups: Vec<GroupSpec>,
    pub shapes: Vec<GraphShape>,
    pub budget: SearchBudget,
    pub jobs: usize,
    pub timing: bool,
    pub cross_check: bool,
    pub emit: Option<PathBuf>,
}

pub struct SurveyResult {
    pub rows: Vec<SurveyRow>,
    /// Human-readable cross-check disagreements.
    pub disagreements: Vec<String>,
}

/// Parses an inclusive range `a..b`.
pub fn parse_range(text: &str) -> Result<RangeInclusive<usize>> {
    let (a, b) = text
        .split_once("..")
        .with_context(|| format!("range `{text}` must look like a..b"))?;
    let a: usize = a
        .trim()
        .parse()
        .with_context(|| format!("bad range start in `{text}`"))?;
    let b: usize = b
        .trim()
        .parse()
        .with_context(|| format!("bad range end in `{text}`"))?;
    if a > b {
        bail!("range `{text}` is empty");
    }
    Ok(a..=b)
}

pub fn groups_in(orders: RangeInclusive<usize>, odd_only: bool) -> Vec<GroupSpec> {
    orders
        .filter(|&k| k >= 2 && (!odd_only || k % 2 == 1))
        .flat_map(|k| groups_of_order(k as u64))
        .collect()
}

pub fn emit_name(group: &GroupSpec, shape: &GraphShape) -> String {
    let graph: String = shape
        .to_string()
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '-' })
        .collect();
    format!("{group}_{graph}.json")
}

pub fn run(plan: &SurveyPlan) -> Result<SurveyResult> {
    if let Some(dir) = &plan.emit {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let tasks: Vec<(&GroupSpec, &GraphShape)> = plan
        .groups
        .iter()
        .flat_map(|g| plan.shapes.iter().map(move |s| (g, s)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(plan.jobs.max(1))
        .build()
        .context("building the worker pool")?;
    let results: Vec<Result<(SurveyRow, Option<String>)>> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(g, s)| run_one(plan, g, s))
            .collect()
    });

    let mut rows = Vec::with_capacity(results.len());
    let mut disagreements = Vec::new();
    for r in results {
        let (row, disagreement) = r?;
        rows.push(row);
        disagreements.extend(disagreement);
    }
    Ok(SurveyResult {
        rows,
        disagreements,
    })
}

fn run_one(
    plan: &SurveyPlan,
    group: &GroupSpec,
    shape: &GraphShape,
) -> Result<(SurveyRow, Option<String>)> {
    let start = Instant::now();
    let solved =
        solve(group, shape, plan.budget).with_context(|| format!("{shape} over {group}"))?;
    let millis = if plan.timing {
        start.elapsed().as_millis() as u64
    } else {
        0
    };

    if let (Some(dir), Some(lab)) = (&plan.emit, &solved.labeling) {
        write_labeling(&dir.join(emit_name(group, shape)), lab)?;
    }
    let disagreement = if plan.cross_check {
        cross_check(group, shape, solved.status, plan.budget)?
    } else {
        None
    };
    let row = SurveyRow {
        group: group.to_string(),
        graph: shape.to_string(),
        status: solved.status.as_str().to_string(),
        method: solved.method,
        nodes: solved.nodes,
        millis,
    };
    Ok((row, disagreement))
}

fn write_labeling(path: &Path, lab: &cordial::Labeling) -> Result<()> {
    if !verify(lab).cordial {
        bail!(
            "refusing to emit an unverified labeling to {}",
            path.display()
        );
    }
    let mut text = lab.to_json();
    text.push('\n');
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Reruns small instances through plain search and reports a contradiction
/// between the two decisions. Undecided searches are not disagreements.
fn cross_check(
    group: &GroupSpec,
    shape: &GraphShape,
    status: Status,
    budget: SearchBudget,
) -> Result<Option<String>> {
    if status == Status::Unknown
        || group.order() > CROSS_CHECK_MAX_ORDER
        || shape.vertex_count() > CROSS_CHECK_MAX_VERTICES
    {
        return Ok(None);
    }
    let budget = budget.with_nodes(budget.max_nodes.min(CROSS_CHECK_NODES));
    let oracle = search(group, shape, &LabelConstraint::none(), budget)?;
    if oracle.status == Status::Unknown || oracle.status == status {
        return Ok(None);
    }
    Ok(Some(format!(
        "{shape} over {group}: pipeline says {}, search says {}",
        status.as_str(),
        oracle.status.as_str()
    )))
}

pub fn to_csv(rows: &[SurveyRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    if rows.is_empty() {
        w.write_record(["group", "graph", "status", "method", "nodes", "millis"])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn to_json(rows: &[SurveyRow]) -> Result<String> {
    let mut text = serde_json::to_string_pretty(&serde_json::json!({ "v": 1, "rows": rows }))?;
    text.push('\n');
    Ok(text)
}
