use crate::abelian::{gcd, mod_inverse, GroupSpec};
use crate::error::{Error, Result};
use crate::graphs::{GraphShape, Labeling};
use crate::search::{
    find_harmonious, search_cordial, HarmoniousVariant, LabelConstraint, SearchBudget, SearchStatus,
};

use super::{checked, unknown};

/// Node cap for the first, short attempt at an even-length labeling.
const QUICK_NODES: u64 = 100_000;

/// Injective cordial labeling of `C_r` over `Z_k` (k = 2l+1 odd) with
/// `c(v_1) = 0` and `c(v_r) = l+1`.
///
/// Odd `r` uses the sequential formula `c(v_{2i+1}) = i`, `c(v_{2i}) = l+i`,
/// read backwards from `v_1` so that `l+1` lands on `v_r`. Even `r` is found
/// by a constrained search; when that stalls, a closed-form labeling with
/// near-consecutive sums is moved onto the required endpoints by an affine map.
pub fn sequential_cycle_zk(k: u64, r: usize, budget: SearchBudget) -> Result<Labeling> {
    if k % 2 == 0 || k < 3 {
        return Err(Error::Precondition(format!(
            "modulus {k} must be odd and at least 3"
        )));
    }
    if r < 3 || r as u64 > k {
        return Err(Error::Precondition(format!(
            "cycle length {r} outside [3, {k}]"
        )));
    }
    let group = GroupSpec::new(vec![k])?;
    let l = (k - 1) / 2;
    let shape = GraphShape::cycle(r)?;
    let method = "sequential";

    if r % 2 == 1 {
        let old = |j: usize| -> u64 {
            if j % 2 == 0 {
                (j / 2) as u64
            } else {
                l + (j as u64 + 1) / 2
            }
        };
        let labels: Vec<Vec<u64>> = (0..r)
            .map(|j| vec![if j == 0 { old(0) } else { old(r - j) }])
            .collect();
        return finish(Labeling::from_residues(group, shape, labels)?, method);
    }

    let cons = LabelConstraint::injective()
        .fix(0, group.element(vec![0])?)
        .fix(r - 1, group.element(vec![l + 1])?);
    let quick = budget.with_nodes(budget.max_nodes.min(QUICK_NODES));
    let out = search_cordial(&group, &shape, &cons, quick)?;
    match out.status {
        SearchStatus::Found(lab) => return finish(lab, method),
        SearchStatus::ExhaustedNoSolution => {
            return Err(Error::Internal {
                method: method.into(),
                detail: format!("no labeling of C_{r} over Z_{k} with the required endpoints"),
            })
        }
        SearchStatus::BudgetExceeded => {}
    }
    if let Some(labels) = even_closed_form(k, r) {
        let lab = Labeling::from_residues(group.clone(), shape.clone(), labels)?;
        if lab.is_injective() {
            if let Ok(lab) = finish(lab, method) {
                return Ok(lab);
            }
        }
    }
    if r as u64 == k - 1 {
        // A non-identity harmonious listing is an injective C_{k-1} with
        // distinct sums; move it onto the endpoints.
        let out = find_harmonious(&group, HarmoniousVariant::Nonidentity, budget)?;
        if let Some(listing) = out.into_found() {
            let raw: Vec<u64> = listing.iter().map(|e| e.residues()[0]).collect();
            if let Some(labels) = normalize(&raw, k) {
                return finish(Labeling::from_residues(group, shape, labels)?, method);
            }
        }
    }
    let out = search_cordial(&group, &shape, &cons, budget)?;
    match out.status {
        SearchStatus::Found(lab) => finish(lab, method),
        _ => unknown(format!("even sequential labeling of C_{r} over Z_{k}")),
    }
}

fn finish(lab: Labeling, method: &str) -> Result<Labeling> {
    if !lab.is_injective() {
        return Err(Error::Internal {
            method: method.into(),
            detail: "labels repeat".into(),
        });
    }
    checked(lab, method)
}

/// Sums of the raw sequence run through consecutive residues with one or two
/// gaps, so they stay distinct for `r` below `k`. Returns `None` when no
/// adjacent pair differs by a unit, or for `r = k - 1` with `r = 2 mod 4`.
fn even_closed_form(k: u64, r: usize) -> Option<Vec<Vec<u64>>> {
    let h = r / 2;
    let (j1, j2) = if r % 4 == 0 {
        (h - 1, usize::MAX)
    } else if r as u64 + 3 <= k {
        (h - 2, h - 1)
    } else {
        return None;
    };
    let raw: Vec<u64> = (0..r)
        .map(|i| {
            let t = (i / 2) as u64;
            if i % 2 == 0 {
                (t + (i >= j1) as u64) % k
            } else {
                (h as u64 + 1 + t + (i >= j2) as u64) % k
            }
        })
        .collect();
    normalize(&raw, k)
}

/// Affine image `u (x - raw[i])` of a labeling, read backwards from the
/// chosen vertex, so that `v_1 = 0` and `v_r = l + 1`. Needs an adjacent
/// pair whose difference is a unit.
fn normalize(raw: &[u64], k: u64) -> Option<Vec<Vec<u64>>> {
    let r = raw.len();
    let l = (k - 1) / 2;
    let (i, d) = (0..r)
        .map(|i| (i, (raw[(i + 1) % r] + k - raw[i]) % k))
        .find(|&(_, d)| gcd(d, k) == 1)?;
    let u = (l + 1) * mod_inverse(d, k)? % k;
    let map = |x: u64| u * ((x + k - raw[i]) % k) % k;
    Some((0..r).map(|j| vec![map(raw[(i + r - j) % r])]).collect())
}
