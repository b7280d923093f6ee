use crate::abelian::{GroupElement, GroupSpec};
use crate::error::{Error, Result};
use crate::graphs::{cut_cycle, verify, GraphShape, Labeling};
use crate::search::{
    find_harmonious, find_rstar, restart_limit, search_cordial, CayleyTable, HarmoniousVariant,
    LabelConstraint, Meter, SearchBudget, SearchStatus, Tally, FIRST_PASS_NODES, RESTART_SEED,
};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{checked, cycle_for_odd_group, unknown, Constructed};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PathOutcome {
    Labeled(Constructed),
    /// Proven impossible; `reason` names the argument.
    NotCordial {
        reason: String,
    },
}

impl PathOutcome {
    pub fn labeled(&self) -> Option<&Constructed> {
        match self {
            PathOutcome::Labeled(c) => Some(c),
            PathOutcome::NotCordial { .. } => None,
        }
    }
}

/// The two label sequences built from a normalized R*-sequence of `(Z2)^p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MasterSequences {
    /// Length `2k`; prefixes of length `k+2 ..= 2k` are cordial paths.
    pub double: Vec<GroupElement>,
    /// Length `3k`; prefixes of length `2k+2 ..= 3k` are cordial paths.
    pub triple: Vec<GroupElement>,
}

/// Builds
/// `a2..a_{k-1}, a1, 0, 0, a3..a_{k-1}, a1, a2` and
/// `a1..a_{k-1}, a1, 0, 0, 0, a3..a_{k-1}, a1, a2, a2, a3..a_{k-1}`
/// from an R*-sequence `a1..a_{k-1}` with `a2 = a1 + a3`.
pub fn elementary2_sequences(group: &GroupSpec, rstar: &[GroupElement]) -> Result<MasterSequences> {
    let k = group.order() as usize;
    if !group.is_elementary_2() || k < 4 {
        return Err(Error::Precondition(format!(
            "{group} is not (Z2)^p with p >= 2"
        )));
    }
    if rstar.len() != k - 1 || rstar.iter().any(|e| !group.contains(e)) {
        return Err(Error::Precondition(format!(
            "expected {} elements of {group}",
            k - 1
        )));
    }
    if group.add(&rstar[0], &rstar[2])? != rstar[1] {
        return Err(Error::Precondition(
            "sequence is not normalized: a2 != a1 + a3".into(),
        ));
    }
    let a = |i: usize| rstar[i - 1].clone();
    let zero = group.identity();
    let run = |from: usize| (from..k).map(a);

    let mut double: Vec<GroupElement> = run(2).collect();
    double.extend([a(1), zero.clone(), zero.clone()]);
    double.extend(run(3));
    double.extend([a(1), a(2)]);

    let mut triple: Vec<GroupElement> = run(1).collect();
    triple.extend([a(1), zero.clone(), zero.clone(), zero]);
    triple.extend(run(3));
    triple.extend([a(1), a(2), a(2)]);
    triple.extend(run(3));

    debug_assert_eq!((double.len(), triple.len()), (2 * k, 3 * k));
    Ok(MasterSequences { double, triple })
}

/// Appends one copy of every element to a cordial path so that the path stays
/// cordial, found by backtracking over the appended block.
pub fn extend_path(lab: &Labeling, budget: SearchBudget) -> Result<Labeling> {
    extend_counted(lab, budget).map(|(l, _)| l)
}

fn extend_counted(lab: &Labeling, budget: SearchBudget) -> Result<(Labeling, u64)> {
    let GraphShape::Path(len) = *lab.shape() else {
        return Err(Error::Precondition("extension needs a path".into()));
    };
    let report = verify(lab);
    if !report.cordial {
        return Err(Error::Precondition("extension needs a cordial path".into()));
    }
    let group = lab.group();
    let table = CayleyTable::new(group)?;
    let n = table.order();
    let mut edges = Tally::balanced(n, len - 1 + n);
    if !edges.preload(&report.edge_counts) {
        return Err(Error::NoExtension(
            "edge counts cannot be rebalanced".into(),
        ));
    }
    let last = group.index_of(&lab.labels()[len - 1]);
    let mut meter = Meter::new(budget);
    let mut block = None;
    let mut rng = ChaCha8Rng::seed_from_u64(RESTART_SEED);
    for round in 0u32.. {
        let limit = if round == 0 {
            FIRST_PASS_NODES
        } else {
            restart_limit(n as u64, round - 1)
        };
        match extension_attempt(
            &table,
            edges.clone(),
            last,
            &mut meter,
            limit,
            (round > 0).then_some(&mut rng),
        ) {
            Some(Some(b)) => {
                block = Some(b);
                break;
            }
            Some(None) => break,
            None if meter.exceeded() => break,
            None => {}
        }
    }
    let Some(block) = block else {
        return if meter.exceeded() {
            unknown(format!("extension of P_{len} over {group}"))
        } else {
            Err(Error::NoExtension(format!("P_{len} over {group}")))
        };
    };
    let mut labels = lab.labels().to_vec();
    labels.extend(block.iter().map(|&i| group.element_at(i)));
    let out = Labeling::new(group.clone(), GraphShape::path(len + n)?, labels)?;
    Ok((checked(out, "extension")?, meter.nodes()))
}

/// One depth-first pass over the appended block: `Some(Some(block))` found,
/// `Some(None)` exhausted, `None` cut off.
fn extension_attempt(
    table: &CayleyTable,
    mut edges: Tally,
    last: usize,
    meter: &mut Meter,
    limit: u64,
    mut rng: Option<&mut ChaCha8Rng>,
) -> Option<Option<Vec<usize>>> {
    let n = table.order();
    let mut order: Vec<Vec<usize>> = vec![(0..n).collect(); n];
    let mut used = vec![false; n];
    let mut block: Vec<usize> = Vec::with_capacity(n);
    let mut next = vec![0usize; n];
    let mut spent = 0u64;
    let mut enter = |pos: usize, order: &mut [Vec<usize>]| {
        if let Some(rng) = rng.as_deref_mut() {
            order[pos].shuffle(rng);
        }
    };
    enter(0, &mut order);
    loop {
        let pos = block.len();
        if pos == n {
            return Some(Some(block));
        }
        let prev = if pos == 0 { last } else { block[pos - 1] };
        let mut placed = false;
        while next[pos] < n {
            let c = order[pos][next[pos]];
            next[pos] += 1;
            if used[c] {
                continue;
            }
            spent += 1;
            if spent > limit || !meter.tick() {
                return None;
            }
            let e = table.add(prev, c);
            if !edges.inc(e) {
                continue;
            }
            if edges.deficit() > n - pos - 1 {
                edges.dec(e);
                continue;
            }
            used[c] = true;
            block.push(c);
            placed = true;
            break;
        }
        if placed {
            if block.len() < n {
                next[block.len()] = 0;
                enter(block.len(), &mut order);
            }
            continue;
        }
        let Some(c) = block.pop() else {
            return Some(None);
        };
        used[c] = false;
        let prev = block.last().copied().unwrap_or(last);
        edges.dec(table.add(prev, c));
    }
}

/// Cordial labeling of `P_n` over `group`, or a proof that none exists.
///
/// Only `(Z2)^p`, `p >= 2`, with `n` in `{2^p, 2^p + 1}` is not cordial.
/// Odd groups cut a cordial cycle; even harmonious groups repeat a searched
/// harmonious listing; `(Z2)^p` uses prefixes of an R*-sequence and of the
/// two master sequences; everything else is searched up to `|G| + 1`
/// vertices and extended a block of `|G|` vertices at a time.
pub fn path_for_group(group: &GroupSpec, n: usize, budget: SearchBudget) -> Result<PathOutcome> {
    if n == 0 {
        return Err(Error::Precondition(
            "a path needs at least one vertex".into(),
        ));
    }
    let k = group.order() as usize;
    let labeled = |c: Constructed| Ok(PathOutcome::Labeled(c));

    if group.is_elementary_2() && k >= 4 {
        if n == k || n == k + 1 {
            return Ok(PathOutcome::NotCordial {
                reason: format!("P_{k} and P_{} are not cordial over {group}", k + 1),
            });
        }
        if n > 3 * k {
            return extended(group, n, base_len(n, 2 * k + 1, k), budget);
        }
        return labeled(elementary2_base(group, n, budget)?);
    }

    if k % 2 == 1 {
        return labeled(match n {
            1 => Constructed::new(path_of(group, vec![group.identity()])?, "trivial", 0)?,
            2 => Constructed::new(
                path_of(group, vec![group.identity(), group.element_at(1)])?,
                "trivial",
                0,
            )?,
            _ => {
                let c = cycle_for_odd_group(group, n, budget)?;
                let path = cut_cycle(&c.labeling)?;
                Constructed::new(path, format!("cut {}", c.method), c.nodes)?
            }
        });
    }

    if group.classify().harmonious {
        let out = find_harmonious(group, HarmoniousVariant::Full, budget)?;
        let nodes = out.nodes;
        let Some(listing) = out.into_found() else {
            return unknown(format!("harmonious listing of {group}"));
        };
        let labels = listing.iter().cycle().take(n).cloned().collect();
        return labeled(Constructed::new(
            path_of(group, labels)?,
            "repeated harmonious",
            nodes,
        )?);
    }

    if n <= k + 1 {
        return searched(group, n, budget);
    }
    extended(group, n, base_len(n, 2, k), budget)
}

/// Length in `[lo, lo + k)` congruent to `n` modulo `k`.
fn base_len(n: usize, lo: usize, k: usize) -> usize {
    lo + (n - lo) % k
}

fn path_of(group: &GroupSpec, labels: Vec<GroupElement>) -> Result<Labeling> {
    let n = labels.len();
    Labeling::new(group.clone(), GraphShape::path(n)?, labels)
}

fn searched(group: &GroupSpec, n: usize, budget: SearchBudget) -> Result<PathOutcome> {
    let out = search_cordial(
        group,
        &GraphShape::path(n)?,
        &LabelConstraint::none(),
        budget,
    )?;
    let nodes = out.nodes;
    match out.status {
        SearchStatus::Found(lab) => Ok(PathOutcome::Labeled(Constructed::new(
            lab, "search", nodes,
        )?)),
        SearchStatus::ExhaustedNoSolution => Ok(PathOutcome::NotCordial {
            reason: "exhaustive search".into(),
        }),
        SearchStatus::BudgetExceeded => unknown(format!("P_{n} over {group}")),
    }
}

fn elementary2_base(group: &GroupSpec, n: usize, budget: SearchBudget) -> Result<Constructed> {
    let k = group.order() as usize;
    let out = find_rstar(group, budget)?;
    let nodes = out.nodes;
    if let SearchStatus::Found(rstar) = out.status {
        // The 3k prefix of length 2k+1 holds a_2 once; search covers it.
        let pick = if n < k {
            Some((rstar[..n].to_vec(), "R*-prefix"))
        } else {
            let seqs = elementary2_sequences(group, &rstar)?;
            if n <= 2 * k {
                Some((seqs.double[..n].to_vec(), "master-2k"))
            } else if n > 2 * k + 1 {
                Some((seqs.triple[..n].to_vec(), "master-3k"))
            } else {
                None
            }
        };
        if let Some((labels, method)) = pick {
            let lab = path_of(group, labels)?;
            if verify(&lab).cordial {
                return Constructed::new(lab, method, nodes);
            }
        }
    }
    match searched(group, n, budget)? {
        PathOutcome::Labeled(c) => Ok(c),
        PathOutcome::NotCordial { .. } => Err(Error::Internal {
            method: "search".into(),
            detail: format!("exhaustive search found no cordial P_{n} over {group}"),
        }),
    }
}

fn extended(group: &GroupSpec, n: usize, base: usize, budget: SearchBudget) -> Result<PathOutcome> {
    let k = group.order() as usize;
    let start = match path_for_group(group, base, budget)? {
        PathOutcome::Labeled(c) => c,
        PathOutcome::NotCordial { reason } => {
            return Err(Error::Internal {
                method: "extension".into(),
                detail: format!("base P_{base} over {group} is not cordial ({reason})"),
            })
        }
    };
    let mut lab = start.labeling;
    let mut nodes = start.nodes;
    while lab.labels().len() < n {
        match extend_counted(&lab, budget) {
            Ok((next, used)) => {
                lab = next;
                nodes += used;
            }
            Err(Error::NoExtension(_) | Error::BudgetExhausted(_)) if k <= 1024 => {
                return searched(group, n, budget)
            }
            Err(e) => return Err(e),
        }
    }
    Ok(PathOutcome::Labeled(Constructed::new(
        lab,
        format!("{} + extension", start.method),
        nodes,
    )?))
}
