use crate::abelian::{GroupElement, GroupSpec};
use crate::error::{Error, Result};
use crate::graphs::{GraphShape, Labeling};
use crate::search::{
    find_harmonious, search_cordial, HarmoniousVariant, LabelConstraint, SearchBudget, SearchStatus,
};

use super::{
    blow_up_cycle, decompose_short, product_cycle_blocks, sequential_cycle_zk, unknown, Constructed,
};

/// Injective cordial labelings of `C_4`, `C_6`, `C_8` over `Z3 x Z3`, the
/// lengths no block decomposition reaches. Regenerated by `search_cordial`
/// in the tests.
pub const Z3Z3_CYCLES: [(usize, &[[u64; 2]]); 3] = [
    (4, &[[0, 0], [0, 1], [0, 2], [1, 0]]),
    (6, &[[0, 0], [0, 1], [0, 2], [1, 0], [1, 2], [1, 1]]),
    (
        8,
        &[
            [0, 0],
            [0, 1],
            [1, 0],
            [0, 2],
            [2, 2],
            [2, 1],
            [1, 2],
            [2, 0],
        ],
    ),
];

/// Cordial labeling of `C_n` over a group of odd order.
///
/// * `n >= |G|`: canonical harmonious listing blown up by `n / |G|` with
///   remainder `n % |G|`.
/// * `n` at most the largest primary factor `q`: sequential `Z_q` labeling in
///   that coordinate.
/// * otherwise: a block decomposition over the primary factors, a harmonious
///   (or non-identity harmonious) base over `H`, the block product with
///   `Z_m`, and zeros in the remaining factors.
///
/// Labels are built in primary coordinates and mapped to the written group.
pub fn cycle_for_odd_group(
    group: &GroupSpec,
    n: usize,
    budget: SearchBudget,
) -> Result<Constructed> {
    let k = group.order();
    if k % 2 == 0 || k < 3 {
        return Err(Error::Precondition(format!(
            "{group} must have odd order at least 3"
        )));
    }
    if n < 3 {
        return Err(Error::Precondition(format!("cycle length {n} is below 3")));
    }
    let ku = k as usize;
    if n >= ku {
        let out = find_harmonious(group, HarmoniousVariant::Full, budget)?;
        let nodes = out.nodes;
        let Some(listing) = out.into_found() else {
            return unknown(format!("harmonious listing of {group}"));
        };
        let base = Labeling::new(group.clone(), GraphShape::cycle(ku)?, listing)?;
        let method = if n == ku { "harmonious" } else { "blow-up" };
        return Constructed::new(blow_up_cycle(&base, n / ku, n % ku)?, method, nodes);
    }

    let primary = group.primary().to_vec();
    let embed = |coords: Vec<Vec<u64>>| -> Result<Labeling> {
        let labels = coords
            .iter()
            .map(|c| group.from_primary_coords(c))
            .collect();
        Labeling::new(group.clone(), GraphShape::cycle(n)?, labels)
    };
    let widen = |value: &[u64], positions: &[usize]| -> Vec<u64> {
        let mut c = vec![0; primary.len()];
        for (&v, &p) in value.iter().zip(positions) {
            c[p] = v;
        }
        c
    };

    if primary[0] >= n as u64 {
        let seq = sequential_cycle_zk(primary[0], n, budget)?;
        let coords = seq
            .labels()
            .iter()
            .map(|e| widen(e.residues(), &[0]))
            .collect();
        return Constructed::new(embed(coords)?, "sequential", 0);
    }

    let d = match decompose_short(&primary, n) {
        Ok(d) => d,
        Err(Error::Precondition(_)) => return direct_search(group, n, budget),
        Err(e) => return Err(e),
    };
    let mut positions = d.h_positions.clone();
    positions.push(d.m_position);

    if d.special_z3z3 {
        let (_, rows) = Z3Z3_CYCLES
            .iter()
            .find(|(len, _)| *len == n)
            .expect("table covers every special length");
        let coords = rows.iter().map(|p| widen(p, &positions)).collect();
        return Constructed::new(embed(coords)?, "table", 0);
    }

    let h = GroupSpec::new(d.h.clone())?;
    let mut nodes = 0;
    let base_labels: Vec<GroupElement> = if d.base_len as u64 == d.e {
        h.elements()
    } else {
        let out = find_harmonious(&h, HarmoniousVariant::Nonidentity, budget)?;
        nodes += out.nodes;
        match out.status {
            SearchStatus::Found(l) => l,
            _ => return unknown(format!("non-identity harmonious listing of {h}")),
        }
    };
    let base = Labeling::new(h.clone(), GraphShape::cycle(d.base_len)?, base_labels)?;
    let (product, method) = if d.parts.is_empty() {
        (base, "harmonious")
    } else {
        (
            product_cycle_blocks(&base, d.m, &d.parts, budget)?,
            "product",
        )
    };
    let coords = if d.parts.is_empty() {
        product
            .labels()
            .iter()
            .map(|e| widen(e.residues(), &d.h_positions))
            .collect()
    } else {
        product
            .labels()
            .iter()
            .map(|e| widen(e.residues(), &positions))
            .collect()
    };
    Constructed::new(embed(coords)?, method, nodes)
}

fn direct_search(group: &GroupSpec, n: usize, budget: SearchBudget) -> Result<Constructed> {
    let out = search_cordial(
        group,
        &GraphShape::cycle(n)?,
        &LabelConstraint::none(),
        budget,
    )?;
    let nodes = out.nodes;
    match out.status {
        SearchStatus::Found(lab) => Constructed::new(lab, "search", nodes),
        SearchStatus::ExhaustedNoSolution => Err(Error::Internal {
            method: "search".into(),
            detail: format!("exhaustive search found no cordial C_{n} over {group}"),
        }),
        SearchStatus::BudgetExceeded => unknown(format!("C_{n} over {group}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::parse_group;
    use crate::graphs::verify;

    fn b() -> SearchBudget {
        SearchBudget::default()
    }

    #[test]
    fn table_matches_search() {
        let g = parse_group("Z3xZ3").unwrap();
        for (n, rows) in Z3Z3_CYCLES {
            let shape = GraphShape::cycle(n).unwrap();
            let out = search_cordial(&g, &shape, &LabelConstraint::none(), b()).unwrap();
            let got: Vec<Vec<u64>> = out
                .found()
                .unwrap()
                .labels()
                .iter()
                .map(|e| e.residues().to_vec())
                .collect();
            let want: Vec<Vec<u64>> = rows.iter().map(|r| r.to_vec()).collect();
            assert_eq!(got, want, "C_{n}");
        }
    }

    #[test]
    fn special_lengths() {
        let g = parse_group("Z3xZ3").unwrap();
        for n in [4, 6, 8] {
            let c = cycle_for_odd_group(&g, n, b()).unwrap();
            assert_eq!(c.method, "table");
            assert!(c.labeling.is_injective());
        }
        let c = cycle_for_odd_group(&parse_group("Z5xZ5").unwrap(), 14, b()).unwrap();
        assert_eq!(c.method, "product");
        assert!(verify(&c.labeling).cordial);
    }

    #[test]
    fn long_cycles_blow_up() {
        let g = parse_group("Z15").unwrap();
        let c = cycle_for_odd_group(&g, 40, b()).unwrap();
        assert_eq!(c.method, "blow-up");
        let rep = verify(&c.labeling);
        assert!(rep.vertex_counts.iter().all(|&v| v == 2 || v == 3));
        assert_eq!(rep.vertex_counts.iter().filter(|&&v| v == 3).count(), 10);
    }

    #[test]
    fn written_order_is_respected() {
        // Z3xZ9 has primary factors [9, 3]; labels must be in the written group.
        let g = parse_group("Z3xZ9").unwrap();
        for n in 3..=30 {
            let c = cycle_for_odd_group(&g, n, b()).unwrap();
            assert_eq!(c.labeling.group(), &g);
            assert_eq!(c.labeling.labels().len(), n);
        }
    }

    #[test]
    fn rejects_even_groups_and_short_cycles() {
        assert!(cycle_for_odd_group(&parse_group("Z4").unwrap(), 5, b()).is_err());
        assert!(cycle_for_odd_group(&parse_group("Z5").unwrap(), 2, b()).is_err());
    }
}
