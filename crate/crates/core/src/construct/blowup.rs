use crate::error::{Error, Result};
use crate::graphs::{verify, GraphShape, Labeling};

use super::checked;

/// Replaces vertex `v_i` of an injective cordial `C_k` (|G| = k odd) by a run
/// of `m` equally labeled vertices, plus one more for each of the first `r`
/// vertices, giving `C_{mk+r}`.
///
/// Inside a run the edges carry `2c(v_i)`, which is a bijection of `G` for odd
/// order; the class of `2c(v_i)` ends with `m+1` edges for `i <= r` and `m`
/// otherwise, so edges stay balanced.
pub fn blow_up_cycle(base: &Labeling, m: usize, r: usize) -> Result<Labeling> {
    let group = base.group();
    let k = match base.shape() {
        GraphShape::Cycles(ls) if ls.len() == 1 => ls[0],
        other => {
            return Err(Error::Precondition(format!(
                "blow-up needs a single cycle, got {other}"
            )))
        }
    };
    if group.order() % 2 == 0 || group.order() != k as u64 {
        return Err(Error::Precondition(format!(
            "blow-up needs an odd group of order {k}, got {group}"
        )));
    }
    if !base.is_injective() || !verify(base).cordial {
        return Err(Error::Precondition(
            "blow-up base must be injective and cordial".into(),
        ));
    }
    if m == 0 || r >= k {
        return Err(Error::Precondition(format!(
            "need m >= 1 and r < {k}, got m={m}, r={r}"
        )));
    }
    let mut labels = Vec::with_capacity(m * k + r);
    for (i, c) in base.labels().iter().enumerate() {
        let copies = m + usize::from(i < r);
        labels.extend(std::iter::repeat(c.clone()).take(copies));
    }
    let lab = Labeling::new(group.clone(), GraphShape::cycle(m * k + r)?, labels)?;
    checked(lab, "blow-up")
}
