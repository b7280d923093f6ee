use crate::abelian::GroupSpec;
use crate::error::{Error, Result};
use crate::graphs::{verify, GraphShape, Labeling};
use crate::search::SearchBudget;

use super::{checked, sequential_cycle_zk};

fn in_range(x: usize, lo: usize, hi: usize) -> bool {
    lo <= x && x <= hi
}

/// Whether `parts` fits the all-blocks-long case over `Z_m`.
pub(crate) fn is_case1(parts: &[usize], m: usize) -> bool {
    !parts.is_empty() && parts.iter().all(|&p| in_range(p, 2, m - 1))
}

/// Whether `parts` fits the case ending in a short block of one extra vertex.
pub(crate) fn is_case2(parts: &[usize], m: usize) -> bool {
    let l = parts.len();
    l >= 2
        && parts[..l - 2].iter().all(|&p| in_range(p, 2, m - 1))
        && in_range(parts[l - 2], 1, m - 2)
        && parts[l - 1] == 1
}

/// Extends an injective cordial `C_k` over `H` (odd order) to an injective
/// cordial `C_n` over `H x Z_m`, `n = k + sum(parts)`.
///
/// Vertex `v_i`, `i <= l`, becomes a block of `parts[i] + 1` vertices whose
/// second coordinates follow a sequential `Z_m` labeling from `0` to
/// `s = (m+1)/2`; vertices after the blocks alternate `0`, `s`. Every edge
/// between blocks then has second coordinate `s` and every edge inside block
/// `i` has first coordinate `2c(v_i)` and second coordinate other than `s`.
/// The alternation closes up only when `k - l` is even.
pub fn product_cycle_blocks(
    base: &Labeling,
    m: u64,
    parts: &[usize],
    budget: SearchBudget,
) -> Result<Labeling> {
    let h_group = base.group();
    let k = match base.shape() {
        GraphShape::Cycles(ls) if ls.len() == 1 => ls[0],
        other => {
            return Err(Error::Precondition(format!(
                "base must be a single cycle, got {other}"
            )))
        }
    };
    if h_group.order() % 2 == 0 || k as u64 > h_group.order() {
        return Err(Error::Precondition(format!(
            "base must be a cycle of length at most |H| over an odd group, got C_{k} over {h_group}"
        )));
    }
    if !base.is_injective() || !verify(base).cordial {
        return Err(Error::Precondition(
            "base must be injective and cordial".into(),
        ));
    }
    if m < 3 || m % 2 == 0 {
        return Err(Error::Precondition(format!(
            "m = {m} must be odd and at least 3"
        )));
    }
    let l = parts.len();
    let mu = m as usize;
    let case2 = !is_case1(parts, mu) && is_case2(parts, mu);
    if !case2 && !is_case1(parts, mu) {
        return Err(Error::Precondition(format!(
            "parts {parts:?} fit neither block pattern for m = {m}"
        )));
    }
    if l > k || (k - l) % 2 == 1 {
        return Err(Error::Precondition(format!(
            "{l} blocks on C_{k}: need l <= k and k - l even for the alternation to close"
        )));
    }

    let s = (m + 1) / 2;
    let mut second: Vec<(usize, u64)> = Vec::with_capacity(k + parts.iter().sum::<usize>());
    let mut w = 0;
    for (i, &r) in parts.iter().enumerate() {
        if case2 && i == l - 1 {
            second.push((i, (s + m - w) % m));
            second.push((i, s));
        } else if case2 && i == l - 2 {
            let seq = sequential_cycle_zk(m, r + 2, budget)?;
            let z: Vec<u64> = seq.labels().iter().map(|e| e.residues()[0]).collect();
            w = z[r];
            second.extend(z[..=r].iter().map(|&x| (i, x)));
        } else {
            let seq = sequential_cycle_zk(m, r + 1, budget)?;
            second.extend(seq.labels().iter().map(|e| (i, e.residues()[0])));
        }
    }
    for i in l..k {
        second.push((i, if (i - l) % 2 == 0 { 0 } else { s }));
    }

    let mut moduli = h_group.moduli().to_vec();
    moduli.push(m);
    let group = GroupSpec::new(moduli)?;
    let labels = second
        .into_iter()
        .map(|(i, z)| {
            let mut v = base.labels()[i].residues().to_vec();
            v.push(z);
            v
        })
        .collect::<Vec<_>>();
    let n = labels.len();
    let lab = Labeling::from_residues(group, GraphShape::cycle(n)?, labels)?;
    if !lab.is_injective() {
        return Err(Error::Internal {
            method: "product".into(),
            detail: "labels repeat".into(),
        });
    }
    checked(lab, "product")
}
