use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::blocks::{is_case1, is_case2};

/// How a cycle shorter than the group is assembled from a base cycle over a
/// subgroup `H`, a prime-power factor `Z_m` and the remaining factors `B`.
///
/// Positions index into the primary factor list the decomposition was built
/// from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShortDecomposition {
    pub h: Vec<u64>,
    pub h_positions: Vec<usize>,
    pub m: u64,
    pub m_position: usize,
    pub b: Vec<u64>,
    pub e: u64,
    pub beta: usize,
    pub r_prime: usize,
    pub parts: Vec<usize>,
    /// `e` for a full harmonious base, `e - 1` for a non-identity one.
    pub base_len: usize,
    pub special_z3z3: bool,
    /// False when the standard part lists did not fit and another split
    /// was chosen.
    pub standard_parts: bool,
}

impl ShortDecomposition {
    pub fn cycle_len(&self) -> usize {
        self.base_len + self.parts.iter().sum::<usize>()
    }
}

/// Splits `r = base_len + sum(parts)` over the primary factors of an odd group.
///
/// `H` is the longest prefix of factors with `e = |H| <= r` and `m` the next
/// factor. Part lists follow the case analysis on `m = 3` / `m > 3` and the
/// parities of `beta` and `r'`, where `r - e = beta (m-1) + r'`. Each list is
/// then checked against the block patterns and the requirement that
/// `base_len - l` is even; when it fails, other factor splits and part lists
/// are tried in a fixed order.
pub fn decompose_short(primary: &[u64], r: usize) -> Result<ShortDecomposition> {
    if primary.len() < 2 {
        return Err(Error::Precondition(
            "need at least two primary factors".into(),
        ));
    }
    if primary.iter().any(|&q| q % 2 == 0 || q < 3) || primary.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::Precondition(format!(
            "{primary:?} must be odd prime powers sorted non-increasing"
        )));
    }
    let order: u64 = primary.iter().product();
    if r < 3 || r as u64 >= order || primary[0] >= r as u64 {
        return Err(Error::Precondition(format!(
            "cycle length {r} must lie in ({}, {order})",
            primary[0]
        )));
    }

    let mut j = 1;
    while j + 1 < primary.len() && primary[..=j].iter().product::<u64>() <= r as u64 {
        j += 1;
    }
    let e: u64 = primary[..j].iter().product();
    let m = primary[j];
    let (beta, r_prime) = {
        let t = r - e as usize;
        (t / (m as usize - 1), t % (m as usize - 1))
    };
    let skeleton =
        |base_len: usize, parts: Vec<usize>, special: bool, follows: bool| ShortDecomposition {
            h: primary[..j].to_vec(),
            h_positions: (0..j).collect(),
            m,
            m_position: j,
            b: primary[j + 1..].to_vec(),
            e,
            beta,
            r_prime,
            parts,
            base_len,
            special_z3z3: special,
            standard_parts: follows,
        };

    let (base_len, parts) = case_parts(e as usize, m as usize, beta, r_prime);
    if m == 3 && e == 3 && r_prime == 1 {
        return Ok(skeleton(3, Vec::new(), true, true));
    }
    if valid(base_len, &parts, m as usize, r) {
        return Ok(skeleton(base_len, parts, false, true));
    }

    // Same split, other part lists; then other splits.
    let mut splits = vec![((0..j).collect::<Vec<_>>(), j)];
    for mask in 1u32..(1 << primary.len()) {
        let hs: Vec<usize> = (0..primary.len())
            .filter(|i| mask & (1 << i) != 0)
            .collect();
        for t in 0..primary.len() {
            if mask & (1 << t) == 0 && (hs.as_slice(), t) != (splits[0].0.as_slice(), splits[0].1) {
                splits.push((hs.clone(), t));
            }
        }
    }
    for (hs, t) in splits {
        let e: u64 = hs.iter().map(|&i| primary[i]).product();
        let m = primary[t];
        if e > r as u64 || e * m <= r as u64 {
            continue;
        }
        let lens = if e > 3 {
            vec![e as usize, e as usize - 1]
        } else {
            vec![e as usize]
        };
        for base_len in lens {
            if let Some(parts) = solve_parts(base_len, r - base_len, m as usize) {
                let t_total = r - e as usize;
                return Ok(ShortDecomposition {
                    h: hs.iter().map(|&i| primary[i]).collect(),
                    b: (0..primary.len())
                        .filter(|i| !hs.contains(i) && *i != t)
                        .map(|i| primary[i])
                        .collect(),
                    h_positions: hs,
                    m,
                    m_position: t,
                    e,
                    beta: t_total / (m as usize - 1),
                    r_prime: t_total % (m as usize - 1),
                    parts,
                    base_len,
                    special_z3z3: false,
                    standard_parts: false,
                });
            }
        }
    }
    Err(Error::Precondition(format!(
        "no block decomposition of C_{r} over primary factors {primary:?}"
    )))
}

/// The standard part lists for each case, before any validity check.
fn case_parts(e: usize, m: usize, beta: usize, rp: usize) -> (usize, Vec<usize>) {
    let rep = |x: usize, n: usize| std::iter::repeat(x).take(n);
    if beta == 0 && rp == 0 {
        return (e, Vec::new());
    }
    if m == 3 {
        return match (rp, beta % 2) {
            (0, 1) => (e, rep(2, beta).collect()),
            (0, _) => (e, rep(2, beta - 1).chain([1, 1]).collect()),
            _ => (e - 1, rep(2, beta + 1).collect()),
        };
    }
    if beta == 0 {
        return (e - 1, vec![rp + 1]);
    }
    let parts = match (beta % 2, rp) {
        (0, rp) if rp >= 2 => rep(m - 1, beta).chain([rp]).collect(),
        (0, rp) => rep(m - 1, beta - 1).chain([m - 3, 2 + rp]).collect(),
        (_, 0) => rep(m - 1, beta).collect(),
        (_, rp) => rep(m - 1, beta - 1).chain([m - 2, rp, 1]).collect(),
    };
    (e, parts)
}

fn valid(base_len: usize, parts: &[usize], m: usize, r: usize) -> bool {
    if base_len < 3 || base_len + parts.iter().sum::<usize>() != r {
        return false;
    }
    if parts.is_empty() {
        return true;
    }
    let l = parts.len();
    l <= base_len && (base_len - l) % 2 == 0 && (is_case1(parts, m) || is_case2(parts, m))
}

/// Smallest admissible block count first; within it, the long-block pattern
/// before the one ending in a single extra vertex.
fn solve_parts(k: usize, total: usize, m: usize) -> Option<Vec<usize>> {
    if k < 3 {
        return None;
    }
    if total == 0 {
        return Some(Vec::new());
    }
    let widen = |parts: &mut [usize], mut extra: usize, caps: &[usize]| {
        for (p, &cap) in parts.iter_mut().zip(caps) {
            let add = extra.min(cap - *p);
            *p += add;
            extra -= add;
        }
        extra == 0
    };
    for l in (1..=k).filter(|l| (k - l) % 2 == 0) {
        if 2 * l <= total {
            let mut parts = vec![2; l];
            if widen(&mut parts, total - 2 * l, &vec![m - 1; l]) {
                return Some(parts);
            }
        }
        if l >= 2 && 2 * l - 2 <= total {
            let mut parts = vec![2; l - 2];
            parts.extend([1, 1]);
            let mut caps = vec![m - 1; l - 2];
            caps.extend([m - 2, 1]);
            if widen(&mut parts, total - (2 * l - 2), &caps) {
                return Some(parts);
            }
        }
    }
    None
}
