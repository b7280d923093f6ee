use crate::abelian::GroupSpec;
use crate::error::{Error, Result};
use crate::graphs::{verify, GraphShape, Labeling};
use crate::search::{find_complete_mapping, SearchBudget, SearchStatus};

use super::{checked, unknown};

fn single_cycle_over_whole_group(lab: &Labeling, name: &str) -> Result<usize> {
    let m = match lab.shape() {
        GraphShape::Cycles(ls) if ls.len() == 1 => ls[0],
        other => {
            return Err(Error::Precondition(format!(
                "{name} must be a single cycle, got {other}"
            )))
        }
    };
    if m as u64 != lab.group().order() {
        return Err(Error::Precondition(format!(
            "{name} must have as many vertices as its group has elements"
        )));
    }
    if !lab.is_injective() || !verify(lab).cordial {
        return Err(Error::Precondition(format!(
            "{name} must be injective and cordial"
        )));
    }
    Ok(m)
}

fn product_group(a: &GroupSpec, b: &GroupSpec) -> Result<GroupSpec> {
    GroupSpec::new(a.moduli().iter().chain(b.moduli()).copied().collect())
}

fn pair(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().chain(b).copied().collect()
}

/// `|B|` disjoint copies of `C_m` over `A x B`, from a cordial `C_m` over `A`
/// (`|A| = m`) and a complete mapping `phi` of `B` with `theta(g) = phi(g) - g`.
///
/// In copy `j`, vertex `i` gets `(c1(x_i), -theta(b_j))` for odd `i` and
/// `(c1(x_i), phi(b_j))` for even `i`, so consecutive vertices sum to
/// `(c1(x_i) + c1(x_{i+1}), b_j)`. For odd `m` the closing edge joins two odd
/// positions and carries `-2 theta(b_j)`, a bijection only when `|B|` is odd.
pub fn two_regular_product(c1: &Labeling, b: &GroupSpec, budget: SearchBudget) -> Result<Labeling> {
    let m = single_cycle_over_whole_group(c1, "base cycle")?;
    if b.involution_count() == 1 {
        return Err(Error::Precondition(format!(
            "{b} has exactly one involution and so no complete mapping"
        )));
    }
    if m % 2 == 1 && b.order() % 2 == 0 {
        return Err(Error::Precondition(format!(
            "odd cycle length {m} with even |B| = {}: closing edges would all share one label",
            b.order()
        )));
    }
    let out = find_complete_mapping(b, budget)?;
    let cm = match out.status {
        SearchStatus::Found(cm) => cm,
        SearchStatus::ExhaustedNoSolution => {
            return Err(Error::Precondition(format!("{b} has no complete mapping")))
        }
        SearchStatus::BudgetExceeded => return unknown(format!("complete mapping of {b}")),
    };
    let group = product_group(c1.group(), b)?;
    let n = b.order() as usize;
    let mut labels = Vec::with_capacity(m * n);
    for j in 0..n {
        let minus_theta = b.neg(&cm.theta[j])?;
        for (i, x) in c1.labels().iter().enumerate() {
            let second = if i % 2 == 0 { &minus_theta } else { &cm.phi[j] };
            labels.push(pair(x.residues(), second.residues()));
        }
    }
    let lab = Labeling::from_residues(group, GraphShape::cycles(vec![m; n])?, labels)?;
    checked(lab, "complete-mapping product")
}

/// Two cycles of length `mn/2` over `A x B` from cordial `C_m` over `A` and
/// `C_n` over `B` (`|A| = m`, `|B| = n`, both with more than one involution).
///
/// Vertices `v_{i,j}` sit in an `m x n` grid; `v_{i,j}` is joined to
/// `v_{i+1,j}` and `v_{m,j}` to `v_{1,j+2}`, which splits the grid into the
/// odd and the even columns. Odd `i` gets `(c1(x_i), c2(y_j))`, even `i` gets
/// `(c1(x_i), c2(y_{j+1}))`, and every edge label occurs once.
pub fn two_regular_pair(c1: &Labeling, c2: &Labeling) -> Result<Labeling> {
    let m = single_cycle_over_whole_group(c1, "first cycle")?;
    let n = single_cycle_over_whole_group(c2, "second cycle")?;
    for g in [c1.group(), c2.group()] {
        if g.involution_count() <= 1 {
            return Err(Error::Precondition(format!(
                "{g} needs more than one involution"
            )));
        }
    }
    let group = product_group(c1.group(), c2.group())?;
    let label = |i: usize, j: usize| {
        let col = if i % 2 == 0 { j } else { (j + 1) % n };
        pair(c1.labels()[i].residues(), c2.labels()[col].residues())
    };

    // Walk the wiring from v_{1,1} and v_{1,2}; each walk must close after
    // mn/2 vertices.
    let mut labels = Vec::with_capacity(m * n);
    let mut seen = vec![false; m * n];
    for start in [0, 1] {
        let (mut i, mut j) = (0, start);
        loop {
            if seen[i * n + j] {
                break;
            }
            seen[i * n + j] = true;
            labels.push(label(i, j));
            if i + 1 < m {
                i += 1;
            } else {
                i = 0;
                j = (j + 2) % n;
            }
        }
    }
    if labels.len() != m * n {
        return Err(Error::Internal {
            method: "paired product".into(),
            detail: "wiring did not split into two cycles".into(),
        });
    }
    let half = m * n / 2;
    let lab = Labeling::from_residues(group, GraphShape::cycles(vec![half, half])?, labels)?;
    checked(lab, "paired product")
}
