//! Bounded, deterministic backtracking oracles.
//!
//! Every search walks candidates in canonical element order and stops at the
//! first solution. Payloads are re-checked before they are returned.
//! [`SearchStatus::ExhaustedNoSolution`] is a proof of non-existence;
//! [`SearchStatus::BudgetExceeded`] is not, and callers must never read it as
//! one.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::abelian::{gcd, GroupElement, GroupSpec};
use crate::error::{Error, Result};
use crate::graphs::{verify, GraphShape, Labeling};

/// Largest group order the oracles will build a Cayley table for.
pub const MAX_SEARCH_ORDER: u64 = 1024;

/// Node budget is checked on every placement, the clock every 1024 nodes.
const CLOCK_INTERVAL: u64 = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub max_millis: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            max_nodes: 10_000_000,
            max_millis: 60_000,
        }
    }
}

impl SearchBudget {
    pub fn new(max_nodes: u64, max_millis: u64) -> Result<Self> {
        if max_nodes == 0 || max_millis == 0 {
            return Err(Error::Precondition(
                "search budgets must be positive".into(),
            ));
        }
        Ok(Self {
            max_nodes,
            max_millis,
        })
    }

    pub fn with_nodes(self, max_nodes: u64) -> Self {
        Self { max_nodes, ..self }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchStatus<T> {
    Found(T),
    ExhaustedNoSolution,
    BudgetExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome<T> {
    pub status: SearchStatus<T>,
    /// Tentative placements made.
    pub nodes: u64,
}

impl<T> SearchOutcome<T> {
    fn new(status: SearchStatus<T>, nodes: u64) -> Self {
        Self { status, nodes }
    }

    pub fn found(&self) -> Option<&T> {
        match &self.status {
            SearchStatus::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn into_found(self) -> Option<T> {
        match self.status {
            SearchStatus::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_exhausted(&self) -> bool {
        matches!(self.status, SearchStatus::ExhaustedNoSolution)
    }

    pub fn is_budget_exceeded(&self) -> bool {
        matches!(self.status, SearchStatus::BudgetExceeded)
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> SearchOutcome<U> {
        let status = match self.status {
            SearchStatus::Found(t) => SearchStatus::Found(f(t)),
            SearchStatus::ExhaustedNoSolution => SearchStatus::ExhaustedNoSolution,
            SearchStatus::BudgetExceeded => SearchStatus::BudgetExceeded,
        };
        SearchOutcome::new(status, self.nodes)
    }
}

/// Restrictions on the labels a search may use.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelConstraint {
    /// Vertex index to required label.
    pub fixed: BTreeMap<usize, GroupElement>,
    pub injective: bool,
    /// Exact vertex count per element, in canonical order.
    pub multiplicity: Option<Vec<usize>>,
}

impl LabelConstraint {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn injective() -> Self {
        Self {
            injective: true,
            ..Self::default()
        }
    }

    pub fn fix(mut self, vertex: usize, label: GroupElement) -> Self {
        self.fixed.insert(vertex, label);
        self
    }
}

/// A bijection `phi` of the group such that `theta(g) = -g + phi(g)` is also a
/// bijection. Both maps are indexed by canonical element order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompleteMapping {
    pub phi: Vec<GroupElement>,
    pub theta: Vec<GroupElement>,
}

impl CompleteMapping {
    /// Checks bijectivity of both maps and the defining relation.
    pub fn check(&self, group: &GroupSpec) -> bool {
        let n = group.order() as usize;
        if self.phi.len() != n || self.theta.len() != n {
            return false;
        }
        let bij = |v: &[GroupElement]| {
            let mut seen = vec![false; n];
            v.iter().all(|e| {
                group.contains(e) && !std::mem::replace(&mut seen[group.index_of(e)], true)
            })
        };
        bij(&self.phi)
            && bij(&self.theta)
            && group
                .elements()
                .iter()
                .enumerate()
                .all(|(i, g)| group.sub(&self.phi[i], g).ok().as_ref() == Some(&self.theta[i]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HarmoniousVariant {
    /// Cyclic listing of every element with all consecutive sums distinct.
    Full,
    /// Cyclic listing of the non-identity elements with distinct sums.
    Nonidentity,
}

/// Dense addition table over canonical indices.
pub(crate) struct CayleyTable {
    n: usize,
    sum: Vec<u32>,
}

impl CayleyTable {
    pub(crate) fn new(group: &GroupSpec) -> Result<Self> {
        if group.order() > MAX_SEARCH_ORDER {
            return Err(Error::Precondition(format!(
                "search over {group} (order {}) exceeds the search cap {MAX_SEARCH_ORDER}",
                group.order()
            )));
        }
        let n = group.order() as usize;
        let elems = group.elements();
        let mut sum = vec![0u32; n * n];
        for (i, a) in elems.iter().enumerate() {
            for (j, b) in elems.iter().enumerate().skip(i) {
                let s = group.index_of(&group.add_unchecked(a, b)) as u32;
                sum[i * n + j] = s;
                sum[j * n + i] = s;
            }
        }
        Ok(Self { n, sum })
    }

    #[inline]
    pub(crate) fn add(&self, a: usize, b: usize) -> usize {
        self.sum[a * self.n + b] as usize
    }

    pub(crate) fn order(&self) -> usize {
        self.n
    }

    /// Index of the sum of all elements.
    fn total(&self) -> usize {
        (0..self.n).fold(0, |acc, i| self.add(acc, i))
    }

    fn scale(&self, k: usize, a: usize) -> usize {
        (0..k).fold(0, |acc, _| self.add(acc, a))
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Representatives of the orbits of `x -> k x` with `k` a unit modulo the
/// exponent. These maps are automorphisms fixing the identity, so restricting
/// the label next to a pinned identity to one representative per orbit loses
/// no solutions up to symmetry.
pub(crate) fn power_orbit_representatives(group: &GroupSpec) -> Vec<usize> {
    let exp = group.exponent();
    let units: Vec<i64> = (1..exp.max(2))
        .filter(|&k| gcd(k, exp) == 1)
        .map(|k| k as i64)
        .collect();
    group
        .elements()
        .iter()
        .enumerate()
        .filter(|(i, e)| {
            units
                .iter()
                .all(|&k| group.index_of(&group.scale(k, e).expect("same group")) >= *i)
        })
        .map(|(i, _)| i)
        .collect()
}

pub(crate) struct Meter {
    nodes: u64,
    max_nodes: u64,
    max_millis: u128,
    start: Instant,
    exceeded: bool,
}

impl Meter {
    pub(crate) fn new(budget: SearchBudget) -> Self {
        Self {
            nodes: 0,
            max_nodes: budget.max_nodes,
            max_millis: budget.max_millis as u128,
            start: Instant::now(),
            exceeded: false,
        }
    }

    /// Counts one placement; false once the budget is gone.
    #[inline]
    pub(crate) fn tick(&mut self) -> bool {
        self.nodes += 1;
        let out_of_time = || self.start.elapsed().as_millis() > self.max_millis;
        if self.nodes > self.max_nodes || (self.nodes % CLOCK_INTERVAL == 0 && out_of_time()) {
            self.exceeded = true;
        }
        !self.exceeded
    }

    pub(crate) fn nodes(&self) -> u64 {
        self.nodes
    }

    pub(crate) fn exceeded(&self) -> bool {
        self.exceeded
    }

    pub(crate) fn outcome<T>(&self, found: Option<T>) -> SearchOutcome<T> {
        let status = match found {
            Some(t) => SearchStatus::Found(t),
            None if self.exceeded => SearchStatus::BudgetExceeded,
            None => SearchStatus::ExhaustedNoSolution,
        };
        SearchOutcome::new(status, self.nodes)
    }
}

/// Per-class counters with a cap and a limited number of classes allowed to
/// reach it, which together encode "max - min <= 1" for a known total.
#[derive(Clone)]
pub(crate) struct Tally {
    counts: Vec<usize>,
    cap: usize,
    slots: usize,
    at_cap: usize,
    floor: usize,
    deficit: usize,
}

impl Tally {
    /// Balanced tally for `total` items over `classes` classes.
    pub(crate) fn balanced(classes: usize, total: usize) -> Self {
        let floor = total / classes;
        let rem = total % classes;
        let (cap, slots) = if rem == 0 {
            (floor, classes)
        } else {
            (floor + 1, rem)
        };
        Self {
            counts: vec![0; classes],
            cap,
            slots,
            at_cap: 0,
            floor,
            deficit: floor * classes,
        }
    }

    /// Seeds the tally with existing counts.
    pub(crate) fn preload(&mut self, counts: &[usize]) -> bool {
        for (c, &k) in counts.iter().enumerate() {
            for _ in 0..k {
                if !self.inc(c) {
                    return false;
                }
            }
        }
        true
    }

    #[inline]
    pub(crate) fn inc(&mut self, c: usize) -> bool {
        let k = self.counts[c];
        if k >= self.cap || (k + 1 == self.cap && self.at_cap == self.slots) {
            return false;
        }
        self.counts[c] = k + 1;
        if k + 1 == self.cap {
            self.at_cap += 1;
        }
        if k < self.floor {
            self.deficit -= 1;
        }
        true
    }

    #[inline]
    pub(crate) fn dec(&mut self, c: usize) {
        let k = self.counts[c];
        debug_assert!(k > 0);
        if k == self.cap {
            self.at_cap -= 1;
        }
        if k <= self.floor {
            self.deficit += 1;
        }
        self.counts[c] = k - 1;
    }

    /// Classes still below the floor need at least this many more items.
    #[inline]
    pub(crate) fn deficit(&self) -> usize {
        self.deficit
    }
}

/// Vertex-by-vertex search state shared by the restarts of `search_cordial`.
struct CordialProblem<'a> {
    table: &'a CayleyTable,
    /// Earlier neighbours of each vertex.
    back: &'a [Vec<usize>],
    edges_total: usize,
    injective: bool,
    mult: Option<&'a [usize]>,
}

impl CordialProblem<'_> {
    fn solve(&self, cands: &mut [Vec<usize>], meter: &mut Meter) -> Option<Vec<usize>> {
        match self.attempt(cands, meter, FIRST_PASS_NODES, None) {
            Attempt::Found(a) => return Some(a),
            Attempt::Exhausted => return None,
            Attempt::Cutoff if meter.exceeded() => return None,
            Attempt::Cutoff => {}
        }
        let v = cands.len() as u64;
        let mut rng = ChaCha8Rng::seed_from_u64(RESTART_SEED);
        let mut round = 0;
        loop {
            round += 1;
            match self.attempt(cands, meter, restart_limit(v, round - 1), Some(&mut rng)) {
                Attempt::Found(a) => return Some(a),
                Attempt::Exhausted => return None,
                Attempt::Cutoff if meter.exceeded() => return None,
                Attempt::Cutoff => {}
            }
        }
    }

    /// Complete depth-first pass, cut off after `limit` nodes. With `rng`,
    /// each vertex shuffles its candidates whenever the search enters it.
    fn attempt(
        &self,
        cands: &mut [Vec<usize>],
        meter: &mut Meter,
        limit: u64,
        mut rng: Option<&mut ChaCha8Rng>,
    ) -> Attempt {
        let n = self.table.order();
        let verts = cands.len();
        let mut vtally = if self.injective {
            let mut t = Tally::balanced(n, verts.min(n));
            t.cap = 1;
            t.slots = n;
            t.floor = 0;
            t.deficit = 0;
            t
        } else {
            Tally::balanced(n, verts)
        };
        let mut etally = Tally::balanced(n, self.edges_total);
        let mut assign: Vec<usize> = vec![usize::MAX; verts];
        let mut next: Vec<usize> = vec![0; verts];
        let mut placed_edges = 0usize;
        let mut pos = 0usize;
        let mut spent = 0u64;
        let mut enter = |pos: usize, cands: &mut [Vec<usize>]| {
            if let Some(rng) = rng.as_deref_mut() {
                cands[pos].shuffle(rng);
            }
        };
        if verts == 0 {
            return Attempt::Found(assign);
        }
        enter(0, cands);

        loop {
            if pos == verts {
                return Attempt::Found(assign);
            }
            let mut placed = false;
            while next[pos] < cands[pos].len() {
                let c = cands[pos][next[pos]];
                next[pos] += 1;
                spent += 1;
                if spent > limit || !meter.tick() {
                    return Attempt::Cutoff;
                }
                if let Some(m) = self.mult {
                    if vtally.counts[c] >= m[c] {
                        continue;
                    }
                }
                if !vtally.inc(c) {
                    continue;
                }
                let mut ok = true;
                let mut done = 0;
                for &p in &self.back[pos] {
                    let e = self.table.add(c, assign[p]);
                    if !etally.inc(e) {
                        ok = false;
                        break;
                    }
                    done += 1;
                }
                let remaining_v = verts - pos - 1;
                let remaining_e = self.edges_total - placed_edges - done;
                if ok && (vtally.deficit() > remaining_v || etally.deficit() > remaining_e) {
                    ok = false;
                }
                if ok {
                    assign[pos] = c;
                    placed_edges += done;
                    placed = true;
                    break;
                }
                for &p in self.back[pos].iter().take(done) {
                    etally.dec(self.table.add(c, assign[p]));
                }
                vtally.dec(c);
            }
            if placed {
                pos += 1;
                if pos < verts {
                    next[pos] = 0;
                    enter(pos, cands);
                }
                continue;
            }
            if pos == 0 {
                return Attempt::Exhausted;
            }
            pos -= 1;
            let c = assign[pos];
            for &p in &self.back[pos] {
                etally.dec(self.table.add(c, assign[p]));
                placed_edges -= 1;
            }
            vtally.dec(c);
            assign[pos] = usize::MAX;
        }
    }
}

/// Depth-first search for a cordial labeling of `shape` over `group`.
///
/// Vertices are labeled in order with candidates in canonical element order;
/// if that pass stalls, seeded restarts shuffle the candidates per vertex.
/// Branches are cut as soon as a vertex or edge class would make balance
/// unreachable. With no pinned labels and no multiplicity target, vertex 0 is
/// pinned to the identity (translation symmetry) and vertex 1 ranges over
/// one representative per power-automorphism orbit.
pub fn search_cordial(
    group: &GroupSpec,
    shape: &GraphShape,
    cons: &LabelConstraint,
    budget: SearchBudget,
) -> Result<SearchOutcome<Labeling>> {
    let table = CayleyTable::new(group)?;
    let n = table.order();
    let verts = shape.vertex_count();
    let edges_total = shape.edge_count();

    let mut fixed: Vec<Option<usize>> = vec![None; verts];
    for (&v, label) in &cons.fixed {
        if v >= verts || !group.contains(label) {
            return Err(Error::Precondition(format!(
                "fixed label {label} at vertex {v} is invalid"
            )));
        }
        fixed[v] = Some(group.index_of(label));
    }
    if let Some(m) = &cons.multiplicity {
        if m.len() != n || m.iter().sum::<usize>() != verts {
            return Err(Error::Precondition(
                "multiplicity must list one count per element summing to the vertex count".into(),
            ));
        }
    }

    // Partners of each vertex among earlier vertices.
    let mut back: Vec<Vec<usize>> = vec![Vec::new(); verts];
    for (u, v) in shape.edges() {
        let (lo, hi) = if u < v { (u, v) } else { (v, u) };
        back[hi].push(lo);
    }

    let symmetric = cons.fixed.is_empty() && cons.multiplicity.is_none();
    let second: Vec<usize> = if symmetric && verts > 1 {
        power_orbit_representatives(group)
    } else {
        Vec::new()
    };

    let mut meter = Meter::new(budget);

    // Both sums are forced when every vertex has degree two and both
    // multisets of class counts are forced; then edges sum to twice the
    // vertices or there is no solution.
    if matches!(shape, GraphShape::Cycles(_)) && edges_total % n == 0 {
        let vertex_sum = match &cons.multiplicity {
            Some(m) => Some(
                m.iter()
                    .enumerate()
                    .fold(0, |acc, (i, &k)| table.add(acc, table.scale(k, i))),
            ),
            None if verts % n == 0 => Some(table.scale(verts / n, table.total())),
            None => None,
        };
        if let Some(vs) = vertex_sum {
            if table.scale(edges_total / n, table.total()) != table.add(vs, vs) {
                return Ok(meter.outcome(None));
            }
        }
    }

    let mut cands: Vec<Vec<usize>> = (0..verts)
        .map(|pos| match fixed[pos] {
            Some(f) => vec![f],
            None if symmetric && pos == 0 => vec![0],
            None if symmetric && pos == 1 => second.clone(),
            None => (0..n).collect(),
        })
        .collect();
    let problem = CordialProblem {
        table: &table,
        back: &back,
        edges_total,
        injective: cons.injective,
        mult: cons.multiplicity.as_deref(),
    };
    let solved = problem.solve(&mut cands, &mut meter);

    let found = if let Some(assign) = solved {
        let labels = assign.iter().map(|&i| group.element_at(i)).collect();
        let lab = Labeling::new(group.clone(), shape.clone(), labels)?;
        let report = verify(&lab);
        assert!(
            report.cordial,
            "search_cordial produced an unbalanced labeling"
        );
        if cons.injective {
            assert!(lab.is_injective());
        }
        Some(lab)
    } else {
        None
    };
    Ok(meter.outcome(found))
}

/// Finds a complete mapping of `group`, or proves there is none.
///
/// Odd order: `phi(g) = 2g`, so `theta` is the identity. Otherwise a
/// backtracking search over `phi` in canonical order, cut whenever the values
/// still unassigned cannot balance: the remaining `theta` values must sum to
/// the remaining `phi` values minus the remaining domain. At the root that
/// residual is the sum of all elements, nonzero exactly when the group has a
/// single involution.
pub fn find_complete_mapping(
    group: &GroupSpec,
    budget: SearchBudget,
) -> Result<SearchOutcome<CompleteMapping>> {
    let elems = group.elements();
    if group.order() % 2 == 1 {
        let phi: Vec<_> = elems
            .iter()
            .map(|g| group.scale(2, g))
            .collect::<Result<_>>()?;
        let cm = CompleteMapping {
            phi,
            theta: elems.clone(),
        };
        debug_assert!(cm.check(group));
        return Ok(SearchOutcome::new(SearchStatus::Found(cm), 0));
    }

    let table = CayleyTable::new(group)?;
    let n = table.order();
    let neg: Vec<usize> = (0..n)
        .map(|i| {
            (0..n)
                .find(|&j| table.add(i, j) == 0)
                .expect("inverse exists")
        })
        .collect();
    let mut meter = Meter::new(budget);
    let mut phi = vec![usize::MAX; n];
    let mut phi_used = vec![false; n];
    let mut theta_used = vec![false; n];
    // Running sums of the unassigned domain, phi values and theta values.
    let total = table.total();
    let mut rest_dom = total;
    let mut rest_phi = total;
    let mut rest_theta = total;

    let feasible = |rd: usize, rp: usize, rt: usize| table.add(rt, rd) == rp;
    let mut next = vec![0usize; n];
    let mut pos = 0usize;
    let mut solved = false;

    if feasible(rest_dom, rest_phi, rest_theta) {
        'outer: loop {
            if pos == n {
                solved = true;
                break;
            }
            let mut placed = false;
            while next[pos] < n {
                let v = next[pos];
                next[pos] += 1;
                if phi_used[v] {
                    continue;
                }
                if !meter.tick() {
                    break 'outer;
                }
                let t = table.add(v, neg[pos]);
                if theta_used[t] {
                    continue;
                }
                let rd = table.add(rest_dom, neg[pos]);
                let rp = table.add(rest_phi, neg[v]);
                let rt = table.add(rest_theta, neg[t]);
                if !feasible(rd, rp, rt) {
                    continue;
                }
                phi[pos] = v;
                phi_used[v] = true;
                theta_used[t] = true;
                rest_dom = rd;
                rest_phi = rp;
                rest_theta = rt;
                placed = true;
                break;
            }
            if placed {
                pos += 1;
                if pos < n {
                    next[pos] = 0;
                }
                continue;
            }
            if pos == 0 {
                break;
            }
            pos -= 1;
            let v = phi[pos];
            let t = table.add(v, neg[pos]);
            phi_used[v] = false;
            theta_used[t] = false;
            rest_dom = table.add(rest_dom, pos);
            rest_phi = table.add(rest_phi, v);
            rest_theta = table.add(rest_theta, t);
        }
    }

    let found = solved.then(|| {
        let cm = CompleteMapping {
            phi: phi.iter().map(|&i| group.element_at(i)).collect(),
            theta: (0..n)
                .map(|g| group.element_at(table.add(phi[g], neg[g])))
                .collect(),
        };
        assert!(cm.check(group), "complete mapping failed its check");
        cm
    });
    Ok(meter.outcome(found))
}

/// Checks that `listing` enumerates the elements required by `variant` and
/// that its cyclic consecutive sums are pairwise distinct.
pub fn check_harmonious(
    group: &GroupSpec,
    listing: &[GroupElement],
    variant: HarmoniousVariant,
) -> bool {
    let n = group.order() as usize;
    let expected = match variant {
        HarmoniousVariant::Full => n,
        HarmoniousVariant::Nonidentity => n - 1,
    };
    if listing.len() != expected || expected == 0 {
        return false;
    }
    let id = group.identity();
    let mut seen = vec![false; n];
    for e in listing {
        if !group.contains(e)
            || (variant == HarmoniousVariant::Nonidentity && *e == id)
            || std::mem::replace(&mut seen[group.index_of(e)], true)
        {
            return false;
        }
    }
    let mut sums = vec![false; n];
    (0..listing.len()).all(|i| {
        let s = group.add_unchecked(&listing[i], &listing[(i + 1) % listing.len()]);
        !std::mem::replace(&mut sums[group.index_of(&s)], true)
    })
}

/// Node cap for the canonical-order first pass of a search; seeded
/// restarts follow.
pub(crate) const FIRST_PASS_NODES: u64 = 200_000;
pub(crate) const RESTART_SEED: u64 = 0x0063_6f72_6469_616c;

/// Node cap of restart `round` for a problem of size `n`: `20 n^2`, doubled
/// every eight rounds so that a finite tree is eventually searched in full.
pub(crate) fn restart_limit(n: u64, round: u32) -> u64 {
    (20 * n * n)
        .max(10_000)
        .saturating_mul(1 << (round / 8).min(40))
}

/// A cyclic listing problem: arrange `pool` so consecutive sums (including the
/// closing one) are distinct and `accept` holds.
struct ListingProblem<'a> {
    table: &'a CayleyTable,
    pool: &'a [usize],
    first: &'a [usize],
    second: Option<&'a [usize]>,
    accept: &'a dyn Fn(&[usize]) -> bool,
}

enum Attempt {
    Found(Vec<usize>),
    Exhausted,
    Cutoff,
}

impl ListingProblem<'_> {
    fn candidates(&self, depth: usize, used: &[bool], rng: Option<&mut ChaCha8Rng>) -> Vec<usize> {
        let mut v: Vec<usize> = match (depth, self.second) {
            (0, _) => self.first.to_vec(),
            (1, Some(s)) => s.to_vec(),
            _ => self.pool.iter().copied().filter(|&c| !used[c]).collect(),
        };
        if depth > 0 {
            if let Some(rng) = rng {
                v.shuffle(rng);
            }
        }
        v
    }

    /// Depth-first search; with `rng` the candidates at each depth are
    /// shuffled. Still complete unless cut off by `limit` or the meter.
    fn attempt(&self, meter: &mut Meter, limit: u64, mut rng: Option<&mut ChaCha8Rng>) -> Attempt {
        let n = self.table.order();
        let len = self.pool.len();
        if len == 0 {
            return Attempt::Exhausted;
        }
        let mut used = vec![false; n];
        let mut sum_used = vec![false; n];
        let mut seq: Vec<usize> = Vec::with_capacity(len);
        let mut cands = vec![self.candidates(0, &used, rng.as_deref_mut())];
        let mut idx = vec![0usize];
        let mut spent = 0u64;
        loop {
            let d = seq.len();
            if d == len {
                let wrap = self.table.add(seq[len - 1], seq[0]);
                if (len == 1 || !sum_used[wrap]) && (self.accept)(&seq) {
                    return Attempt::Found(seq);
                }
            } else {
                let mut placed = false;
                while idx[d] < cands[d].len() {
                    let c = cands[d][idx[d]];
                    idx[d] += 1;
                    if used[c] {
                        continue;
                    }
                    spent += 1;
                    if spent > limit || !meter.tick() {
                        return Attempt::Cutoff;
                    }
                    if d > 0 {
                        let s = self.table.add(seq[d - 1], c);
                        if sum_used[s] {
                            continue;
                        }
                        sum_used[s] = true;
                    }
                    used[c] = true;
                    seq.push(c);
                    placed = true;
                    break;
                }
                if placed {
                    if seq.len() < len {
                        cands.push(self.candidates(seq.len(), &used, rng.as_deref_mut()));
                        idx.push(0);
                    }
                    continue;
                }
                cands.pop();
                idx.pop();
            }
            let Some(c) = seq.pop() else {
                return Attempt::Exhausted;
            };
            used[c] = false;
            if let Some(&prev) = seq.last() {
                sum_used[self.table.add(prev, c)] = false;
            }
        }
    }

    /// A canonical-order pass, then shuffled restarts from a fixed seed until
    /// the meter runs out. `None` means exhausted or out of budget; the meter
    /// tells which.
    fn solve(&self, meter: &mut Meter) -> Option<Vec<usize>> {
        match self.attempt(meter, FIRST_PASS_NODES, None) {
            Attempt::Found(seq) => return Some(seq),
            Attempt::Exhausted => return None,
            Attempt::Cutoff if meter.exceeded() => return None,
            Attempt::Cutoff => {}
        }
        let n = self.table.order() as u64;
        let mut rng = ChaCha8Rng::seed_from_u64(RESTART_SEED);
        let mut round = 0;
        loop {
            round += 1;
            match self.attempt(meter, restart_limit(n, round - 1), Some(&mut rng)) {
                Attempt::Found(seq) => return Some(seq),
                Attempt::Exhausted => return None,
                Attempt::Cutoff if meter.exceeded() => return None,
                Attempt::Cutoff => {}
            }
        }
    }
}

/// Smallest generator of the units modulo a prime `p`.
fn primitive_root(p: u64) -> u64 {
    let factors: Vec<u64> = crate::abelian::prime_power_factors(p - 1)
        .into_iter()
        .map(|(q, _)| q)
        .collect();
    let pow = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        b %= p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        acc
    };
    (2..p)
        .find(|&g| factors.iter().all(|&q| pow(g, (p - 1) / q) != 1))
        .expect("prime modulus has a primitive root")
}

/// Searches for a harmonious listing of `group`.
///
/// Odd order takes the fast path: canonical element order is harmonious for
/// every odd-order group written as a product of cyclic factors. Groups that
/// [`GroupSpec::classify`] marks non-harmonious return
/// [`SearchStatus::ExhaustedNoSolution`] for the full variant, confirmed by
/// exhaustion when the order is at most 8. The non-identity variant fails
/// only for `Z3` among groups with a trivial or non-cyclic Sylow 2-subgroup;
/// other groups are searched.
pub fn find_harmonious(
    group: &GroupSpec,
    variant: HarmoniousVariant,
    budget: SearchBudget,
) -> Result<SearchOutcome<Vec<GroupElement>>> {
    let n = group.order();
    if variant == HarmoniousVariant::Full && n % 2 == 1 {
        let listing = group.elements();
        assert!(check_harmonious(group, &listing, variant));
        return Ok(SearchOutcome::new(SearchStatus::Found(listing), 0));
    }
    if variant == HarmoniousVariant::Full && !group.classify().harmonious && n > 8 {
        return Ok(SearchOutcome::new(SearchStatus::ExhaustedNoSolution, 0));
    }

    if variant == HarmoniousVariant::Nonidentity && group.is_cyclic() && n >= 5 && is_prime(n) {
        // Powers of a primitive root g: consecutive sums g^i (1 + g) are distinct.
        let g = primitive_root(n);
        let listing: Vec<GroupElement> = std::iter::successors(Some(1u64), |x| Some(x * g % n))
            .take(n as usize - 1)
            .map(|x| group.element_reduced(&[x as i64]).expect("cyclic group"))
            .collect();
        assert!(check_harmonious(group, &listing, variant));
        return Ok(SearchOutcome::new(SearchStatus::Found(listing), 0));
    }

    let table = CayleyTable::new(group)?;
    let mut meter = Meter::new(budget);
    let (pool, first, second): (Vec<usize>, Vec<usize>, Option<Vec<usize>>) = match variant {
        // Rotate the identity to the front, then use the automorphisms fixing it.
        HarmoniousVariant::Full => (
            (0..n as usize).collect(),
            vec![0],
            Some(power_orbit_representatives(group)),
        ),
        HarmoniousVariant::Nonidentity => ((1..n as usize).collect(), vec![1], None),
    };
    let problem = ListingProblem {
        table: &table,
        pool: &pool,
        first: &first,
        second: second.as_deref(),
        accept: &|_| true,
    };
    let found = problem.solve(&mut meter).map(|seq| {
        seq.into_iter()
            .map(|i| group.element_at(i))
            .collect::<Vec<_>>()
    });
    if let Some(l) = &found {
        assert!(
            check_harmonious(group, l, variant),
            "harmonious listing failed its check"
        );
    }
    Ok(meter.outcome(found))
}

/// Whether `seq` has an index `i` with `a[i-1] + a[i+1] = a[i]` (cyclically).
pub fn rstar_positions(group: &GroupSpec, seq: &[GroupElement]) -> Vec<usize> {
    let k = seq.len();
    (0..k)
        .filter(|&i| {
            let s = group.add_unchecked(&seq[(i + k - 1) % k], &seq[(i + 1) % k]);
            s == seq[i]
        })
        .collect()
}

/// Searches for an R*-sequence of an elementary abelian 2-group of order at
/// least 4: a listing of the non-identity elements with distinct cyclic
/// consecutive sums and an index where the middle element is the sum of its
/// neighbours. The result is rotated so that index is the second position,
/// i.e. `a[1] = a[0] + a[2]`.
pub fn find_rstar(
    group: &GroupSpec,
    budget: SearchBudget,
) -> Result<SearchOutcome<Vec<GroupElement>>> {
    if !group.is_elementary_2() || group.order() < 4 {
        return Err(Error::Precondition(format!(
            "{group} is not an elementary abelian 2-group of order at least 4"
        )));
    }
    let table = CayleyTable::new(group)?;
    let n = table.order();
    let mut meter = Meter::new(budget);
    let pool: Vec<usize> = (1..n).collect();
    let accept = |seq: &[usize]| {
        let k = seq.len();
        (0..k).any(|i| table.add(seq[(i + k - 1) % k], seq[(i + 1) % k]) == seq[i])
    };
    let problem = ListingProblem {
        table: &table,
        pool: &pool,
        first: &[1],
        second: None,
        accept: &accept,
    };
    let found = problem.solve(&mut meter).map(|seq| {
        let k = seq.len();
        let i = (0..k)
            .find(|&i| table.add(seq[(i + k - 1) % k], seq[(i + 1) % k]) == seq[i])
            .expect("accepted listing has an R* position");
        // rotate so position i lands at index 1
        let start = (i + k - 1) % k;
        (0..k)
            .map(|j| group.element_at(seq[(start + j) % k]))
            .collect::<Vec<_>>()
    });
    if let Some(s) = &found {
        assert!(check_harmonious(group, s, HarmoniousVariant::Nonidentity));
        assert!(rstar_positions(group, s).contains(&1));
    }
    Ok(meter.outcome(found))
}
