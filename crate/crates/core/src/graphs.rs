//! Paths, disjoint unions of cycles, labelings and the cordiality verifier.
//!
//! Every constructor in this crate funnels its output through [`verify`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::abelian::{GroupElement, GroupSpec};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GraphShape {
    Path(usize),
    /// Disjoint union of cycles, each of length at least 3.
    Cycles(Vec<usize>),
}

impl GraphShape {
    pub fn path(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidShape("path needs at least one vertex".into()));
        }
        Ok(Self::Path(n))
    }

    pub fn cycle(n: usize) -> Result<Self> {
        Self::cycles(vec![n])
    }

    pub fn cycles(lengths: Vec<usize>) -> Result<Self> {
        if lengths.is_empty() {
            return Err(Error::InvalidShape("no cycle lengths".into()));
        }
        if let Some(&bad) = lengths.iter().find(|&&n| n < 3) {
            return Err(Error::InvalidShape(format!(
                "cycle length {bad} is below 3"
            )));
        }
        Ok(Self::Cycles(lengths))
    }

    pub fn vertex_count(&self) -> usize {
        match self {
            Self::Path(n) => *n,
            Self::Cycles(ls) => ls.iter().sum(),
        }
    }

    pub fn edge_count(&self) -> usize {
        match self {
            Self::Path(n) => n - 1,
            Self::Cycles(ls) => ls.iter().sum(),
        }
    }

    pub fn is_single_cycle(&self) -> bool {
        matches!(self, Self::Cycles(ls) if ls.len() == 1)
    }

    /// Consecutive pairs in vertex order; each cycle closes with its wrap pair.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        match self {
            Self::Path(n) => (1..*n).map(|i| (i - 1, i)).collect(),
            Self::Cycles(ls) => {
                let mut out = Vec::with_capacity(self.edge_count());
                let mut start = 0;
                for &len in ls {
                    for i in 0..len {
                        out.push((start + i, start + (i + 1) % len));
                    }
                    start += len;
                }
                out
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Self::Path(n) => Self::path(*n).map(|_| ()),
            Self::Cycles(ls) => Self::cycles(ls.clone()).map(|_| ()),
        }
    }
}

impl fmt::Display for GraphShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Path(n) => write!(f, "path:{n}"),
            Self::Cycles(ls) if ls.len() == 1 => write!(f, "cycle:{}", ls[0]),
            Self::Cycles(ls) => {
                write!(f, "cycles:")?;
                for (i, l) in ls.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{l}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for GraphShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_graph(s)
    }
}

/// Parses `path:<n>`, `cycle:<n>` or `cycles:<n1>,<n2>,...`.
pub fn parse_graph(text: &str) -> Result<GraphShape> {
    let bad = |why: &str| Error::GraphSyntax(text.into(), why.into());
    let (kind, rest) = text
        .trim()
        .split_once(':')
        .ok_or_else(|| bad("missing `:`"))?;
    let nums: Vec<usize> = rest
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| bad("expected comma-separated integers"))?;
    match (kind, nums.as_slice()) {
        ("path", [n]) => GraphShape::path(*n),
        ("cycle", [n]) => GraphShape::cycle(*n),
        ("cycles", _) => GraphShape::cycles(nums),
        ("path" | "cycle", _) => Err(bad("expected a single length")),
        _ => Err(bad("kind must be path, cycle or cycles")),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labeling {
    group: GroupSpec,
    shape: GraphShape,
    labels: Vec<GroupElement>,
}

impl Labeling {
    pub fn new(group: GroupSpec, shape: GraphShape, labels: Vec<GroupElement>) -> Result<Self> {
        shape.validate()?;
        if labels.len() != shape.vertex_count() {
            return Err(Error::MalformedLabeling(format!(
                "{} labels for {} vertices",
                labels.len(),
                shape.vertex_count()
            )));
        }
        if let Some(bad) = labels.iter().find(|l| !group.contains(l)) {
            return Err(Error::MalformedLabeling(format!(
                "label {bad} is not an element of {group}"
            )));
        }
        Ok(Self {
            group,
            shape,
            labels,
        })
    }

    /// Builds a labeling from raw residue vectors.
    pub fn from_residues(
        group: GroupSpec,
        shape: GraphShape,
        labels: Vec<Vec<u64>>,
    ) -> Result<Self> {
        let labels = labels
            .into_iter()
            .map(GroupElement::from_residues)
            .collect();
        Self::new(group, shape, labels)
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn shape(&self) -> &GraphShape {
        &self.shape
    }

    pub fn labels(&self) -> &[GroupElement] {
        &self.labels
    }

    pub fn into_labels(self) -> Vec<GroupElement> {
        self.labels
    }

    /// Induced edge labels in [`GraphShape::edges`] order.
    pub fn edge_labels(&self) -> Vec<GroupElement> {
        self.shape
            .edges()
            .into_iter()
            .map(|(u, v)| self.group.add_unchecked(&self.labels[u], &self.labels[v]))
            .collect()
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = std::collections::HashSet::with_capacity(self.labels.len());
        self.labels.iter().all(|l| seen.insert(l))
    }

    pub fn to_doc(&self) -> LabelingDoc {
        LabelingDoc {
            v: 1,
            group: self.group.moduli().to_vec(),
            shape: match &self.shape {
                GraphShape::Path(n) => ShapeDoc::Path { n: *n },
                GraphShape::Cycles(ls) => ShapeDoc::Cycles {
                    lengths: ls.clone(),
                },
            },
            labels: self.labels.iter().map(|l| l.residues().to_vec()).collect(),
        }
    }

    pub fn from_doc(doc: LabelingDoc) -> Result<Self> {
        if doc.v != 1 {
            return Err(Error::MalformedLabeling(format!(
                "unsupported schema version {}",
                doc.v
            )));
        }
        let group = GroupSpec::new(doc.group)?;
        let shape = match doc.shape {
            ShapeDoc::Path { n } => GraphShape::path(n)?,
            ShapeDoc::Cycles { lengths } => GraphShape::cycles(lengths)?,
        };
        Self::from_residues(group, shape, doc.labels)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("labeling serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: LabelingDoc =
            serde_json::from_str(text).map_err(|e| Error::MalformedLabeling(e.to_string()))?;
        Self::from_doc(doc)
    }
}

/// Wire form of a labeling.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelingDoc {
    #[serde(default = "schema_v1")]
    pub v: u32,
    pub group: Vec<u64>,
    pub shape: ShapeDoc,
    pub labels: Vec<Vec<u64>>,
}

fn schema_v1() -> u32 {
    1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ShapeDoc {
    Path { n: usize },
    Cycles { lengths: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CordialityReport {
    /// `v_c`, indexed by canonical element order.
    pub vertex_counts: Vec<usize>,
    /// `e_c`, indexed by canonical element order.
    pub edge_counts: Vec<usize>,
    pub vertex_balanced: bool,
    pub edge_balanced: bool,
    pub cordial: bool,
}

impl CordialityReport {
    pub fn vertex_spread(&self) -> (usize, usize) {
        spread(&self.vertex_counts)
    }

    pub fn edge_spread(&self) -> (usize, usize) {
        spread(&self.edge_counts)
    }
}

fn spread(counts: &[usize]) -> (usize, usize) {
    let min = counts.iter().copied().min().unwrap_or(0);
    let max = counts.iter().copied().max().unwrap_or(0);
    (min, max)
}

/// Tallies vertex and edge label classes over every group element, empty
/// classes included.
pub fn verify(lab: &Labeling) -> CordialityReport {
    let n = lab.group.order() as usize;
    let mut vertex_counts = vec![0usize; n];
    let mut edge_counts = vec![0usize; n];
    for l in &lab.labels {
        vertex_counts[lab.group.index_of(l)] += 1;
    }
    for e in lab.edge_labels() {
        edge_counts[lab.group.index_of(&e)] += 1;
    }
    let balanced = |c: &[usize]| {
        let (lo, hi) = spread(c);
        hi - lo <= 1
    };
    let vertex_balanced = balanced(&vertex_counts);
    let edge_balanced = balanced(&edge_counts);
    CordialityReport {
        vertex_counts,
        edge_counts,
        vertex_balanced,
        edge_balanced,
        cordial: vertex_balanced && edge_balanced,
    }
}

pub fn is_cordial(lab: &Labeling) -> bool {
    verify(lab).cordial
}

/// Opens a cordial single-cycle labeling into a cordial path by deleting the
/// first edge whose label class is as large as any.
pub fn cut_cycle(lab: &Labeling) -> Result<Labeling> {
    let n = match lab.shape {
        GraphShape::Cycles(ref ls) if ls.len() == 1 => ls[0],
        _ => return Err(Error::Precondition("cut_cycle needs a single cycle".into())),
    };
    let report = verify(lab);
    if !report.cordial {
        return Err(Error::Precondition(
            "cut_cycle needs a cordial labeling".into(),
        ));
    }
    let max = report.edge_spread().1;
    let cut = lab
        .edge_labels()
        .iter()
        .position(|e| report.edge_counts[lab.group.index_of(e)] == max)
        .expect("some edge attains the maximum");
    let labels = (1..=n).map(|k| lab.labels[(cut + k) % n].clone()).collect();
    Labeling::new(lab.group.clone(), GraphShape::path(n)?, labels)
}
