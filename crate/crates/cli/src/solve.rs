use cordial::construct::{cycle_for_odd_group, path_for_group, PathOutcome};
use cordial::{
    search_cordial, Error, GraphShape, GroupSpec, LabelConstraint, Labeling, SearchBudget,
    SearchStatus,
};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Cordial,
    NotCordial,
    Unknown,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Cordial => "cordial",
            Status::NotCordial => "not_cordial",
            Status::Unknown => "unknown",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Solved {
    pub status: Status,
    pub method: String,
    pub nodes: u64,
    pub labeling: Option<Labeling>,
    pub reason: Option<String>,
}

impl Solved {
    fn unknown(route: &str, reason: String) -> Self {
        Self {
            status: Status::Unknown,
            method: route.to_string(),
            nodes: 0,
            labeling: None,
            reason: Some(reason),
        }
    }
}

/// Paths go through the path pipeline, single cycles over odd groups through
/// the odd-cycle pipeline, everything else straight to search.
pub fn solve(group: &GroupSpec, shape: &GraphShape, budget: SearchBudget) -> Result<Solved, Error> {
    let (route, result) = match shape {
        GraphShape::Path(n) => ("path pipeline", solve_path(group, *n, budget)),
        GraphShape::Cycles(ls) if ls.len() == 1 && group.order() % 2 == 1 && group.order() >= 3 => {
            ("odd cycle pipeline", solve_odd_cycle(group, ls[0], budget))
        }
        _ => (
            "search",
            search(group, shape, &LabelConstraint::none(), budget),
        ),
    };
    match result {
        Err(Error::BudgetExhausted(what)) => Ok(Solved::unknown(route, what)),
        other => other,
    }
}

fn solve_path(group: &GroupSpec, n: usize, budget: SearchBudget) -> Result<Solved, Error> {
    Ok(match path_for_group(group, n, budget)? {
        PathOutcome::Labeled(c) => Solved {
            status: Status::Cordial,
            method: c.method,
            nodes: c.nodes,
            labeling: Some(c.labeling),
            reason: None,
        },
        PathOutcome::NotCordial { reason } => Solved {
            status: Status::NotCordial,
            method: "path pipeline".into(),
            nodes: 0,
            labeling: None,
            reason: Some(reason),
        },
    })
}

fn solve_odd_cycle(group: &GroupSpec, n: usize, budget: SearchBudget) -> Result<Solved, Error> {
    let c = cycle_for_odd_group(group, n, budget)?;
    Ok(Solved {
        status: Status::Cordial,
        method: c.method,
        nodes: c.nodes,
        labeling: Some(c.labeling),
        reason: None,
    })
}

pub fn search(
    group: &GroupSpec,
    shape: &GraphShape,
    cons: &LabelConstraint,
    budget: SearchBudget,
) -> Result<Solved, Error> {
    let out = search_cordial(group, shape, cons, budget)?;
    let nodes = out.nodes;
    let (status, labeling, reason) = match out.status {
        SearchStatus::Found(lab) => (Status::Cordial, Some(lab), None),
        SearchStatus::ExhaustedNoSolution => {
            (Status::NotCordial, None, Some("exhaustive search".into()))
        }
        SearchStatus::BudgetExceeded => (
            Status::Unknown,
            None,
            Some("search budget exhausted".into()),
        ),
    };
    Ok(Solved {
        status,
        method: "search".into(),
        nodes,
        labeling,
        reason,
    })
}
