//! Cordial labelings of paths and 2-regular graphs over finite abelian groups.
//!
//! A labeling assigns a group element to each vertex; each edge receives the
//! sum of its endpoint labels. It is cordial when the vertex label classes
//! and the edge label classes are each balanced to within one, counting
//! every element of the group including empty classes.

pub mod abelian;
pub mod construct;
pub mod error;
pub mod graphs;
pub mod search;

pub use abelian::{groups_of_order, parse_group, GroupElement, GroupSpec, Structure, Sylow2};
pub use error::{Error, Result};
pub use graphs::{
    cut_cycle, is_cordial, parse_graph, verify, CordialityReport, GraphShape, Labeling,
};
pub use search::{
    find_complete_mapping, find_harmonious, find_rstar, search_cordial, CompleteMapping,
    HarmoniousVariant, LabelConstraint, SearchBudget, SearchOutcome, SearchStatus,
};
