//! Generators for cordial labelings. Every labeling leaving this module has
//! passed [`verify`]; a rejection is reported as [`Error::Internal`].

mod blocks;
mod blowup;
mod odd_cycle;
mod paths;
mod sequential;
mod short;
mod two_regular;

pub use blocks::product_cycle_blocks;
pub use blowup::blow_up_cycle;
pub use odd_cycle::{cycle_for_odd_group, Z3Z3_CYCLES};
pub use paths::{elementary2_sequences, extend_path, path_for_group, MasterSequences, PathOutcome};
pub use sequential::sequential_cycle_zk;
pub use short::{decompose_short, ShortDecomposition};
pub use two_regular::{two_regular_pair, two_regular_product};

use crate::error::{Error, Result};
use crate::graphs::{verify, Labeling};

/// A verified labeling together with how it was obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constructed {
    pub labeling: Labeling,
    /// Short name of the construction or oracle that produced the labeling.
    pub method: String,
    /// Search nodes spent, zero for closed-form constructions.
    pub nodes: u64,
}

impl Constructed {
    pub(crate) fn new(labeling: Labeling, method: impl Into<String>, nodes: u64) -> Result<Self> {
        let method = method.into();
        let labeling = checked(labeling, &method)?;
        Ok(Self {
            labeling,
            method,
            nodes,
        })
    }
}

/// Passes `lab` through the verifier.
pub(crate) fn checked(lab: Labeling, method: &str) -> Result<Labeling> {
    let report = verify(&lab);
    if report.cordial {
        Ok(lab)
    } else {
        Err(Error::Internal {
            method: method.to_string(),
            detail: format!(
                "vertex spread {:?}, edge spread {:?} on {} over {}",
                report.vertex_spread(),
                report.edge_spread(),
                lab.shape(),
                lab.group()
            ),
        })
    }
}

pub(crate) fn unknown<T>(what: impl std::fmt::Display) -> Result<T> {
    Err(Error::BudgetExhausted(what.to_string()))
}
