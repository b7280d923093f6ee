//! Finite abelian groups given as ordered products of cyclic factors.
//!
//! A [`GroupSpec`] keeps the factorization it was written with (`Z3xZ9`) and
//! derives its primary decomposition: every modulus is split by CRT into
//! prime powers and the pieces are sorted non-increasing. Elements are residue
//! vectors over the written factors; the canonical element order is
//! mixed-radix ascending with the last factor varying fastest.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest group order accepted by [`GroupSpec::new`].
pub const DEFAULT_MAX_ORDER: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement {
    residues: Vec<u64>,
}

impl GroupElement {
    /// Wraps residues without checking them against any group.
    pub fn from_residues(residues: Vec<u64>) -> Self {
        Self { residues }
    }

    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    pub fn into_residues(self) -> Vec<u64> {
        self.residues
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.residues.len() == 1 {
            return write!(f, "{}", self.residues[0]);
        }
        write!(f, "(")?;
        for (i, r) in self.residues.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    moduli: Vec<u64>,
    order: u64,
    primary: Vec<u64>,
    /// For each primary entry, the written factor it lives in and the
    /// generator of that cyclic piece inside the factor.
    primary_embedding: Vec<(usize, u64)>,
    strides: Vec<u64>,
}

impl GroupSpec {
    pub fn new(moduli: Vec<u64>) -> Result<Self> {
        Self::with_max_order(moduli, DEFAULT_MAX_ORDER)
    }

    pub fn with_max_order(moduli: Vec<u64>, max_order: u64) -> Result<Self> {
        if moduli.is_empty() {
            return Err(Error::GroupSyntax(String::new(), "no factors".into()));
        }
        let mut order: u64 = 1;
        for &m in &moduli {
            if m < 2 {
                return Err(Error::FactorTooSmall(m));
            }
            order =
                order
                    .checked_mul(m)
                    .filter(|&o| o <= max_order)
                    .ok_or(Error::GroupTooLarge {
                        order: order.saturating_mul(m),
                        max: max_order,
                    })?;
        }

        let mut pieces: Vec<(u64, usize, u64)> = Vec::new();
        for (idx, &m) in moduli.iter().enumerate() {
            for (_, q) in prime_power_factors(m) {
                pieces.push((q, idx, m / q));
            }
        }
        // Stable sort keeps written order among equal prime powers.
        pieces.sort_by_key(|p| std::cmp::Reverse(p.0));
        let primary = pieces.iter().map(|p| p.0).collect();
        let primary_embedding = pieces.iter().map(|p| (p.1, p.2)).collect();

        let mut strides = vec![1u64; moduli.len()];
        for i in (0..moduli.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * moduli[i + 1];
        }

        Ok(Self {
            moduli,
            order,
            primary,
            primary_embedding,
            strides,
        })
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Prime-power orders of the primary decomposition, sorted non-increasing.
    pub fn primary(&self) -> &[u64] {
        &self.primary
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    /// The group written as the product of its primary factors.
    pub fn primary_group(&self) -> GroupSpec {
        GroupSpec::new(self.primary.clone()).expect("primary factors of a valid group")
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::from_residues(vec![0; self.moduli.len()])
    }

    pub fn is_cyclic(&self) -> bool {
        self.moduli.iter().fold(1, |acc, &m| lcm(acc, m)) == self.order
    }

    pub fn exponent(&self) -> u64 {
        self.moduli.iter().fold(1, |acc, &m| lcm(acc, m))
    }

    pub fn element(&self, residues: Vec<u64>) -> Result<GroupElement> {
        self.check(&residues)?;
        if residues.iter().zip(&self.moduli).any(|(r, m)| r >= m) {
            return Err(Error::MalformedLabeling(format!(
                "residues {residues:?} out of range for {self}"
            )));
        }
        Ok(GroupElement::from_residues(residues))
    }

    /// Reduces arbitrary integers into the group.
    pub fn element_reduced(&self, values: &[i64]) -> Result<GroupElement> {
        self.check(values)?;
        Ok(GroupElement::from_residues(
            values
                .iter()
                .zip(&self.moduli)
                .map(|(&v, &m)| v.rem_euclid(m as i64) as u64)
                .collect(),
        ))
    }

    pub fn contains(&self, e: &GroupElement) -> bool {
        e.residues.len() == self.moduli.len()
            && e.residues.iter().zip(&self.moduli).all(|(r, m)| r < m)
    }

    fn check<T>(&self, coords: &[T]) -> Result<()> {
        if coords.len() != self.moduli.len() {
            return Err(Error::DimensionMismatch {
                expected: self.moduli.len(),
                got: coords.len(),
            });
        }
        Ok(())
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(&a.residues)?;
        self.check(&b.residues)?;
        Ok(self.add_unchecked(a, b))
    }

    pub(crate) fn add_unchecked(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement::from_residues(
            a.residues
                .iter()
                .zip(&b.residues)
                .zip(&self.moduli)
                .map(|((x, y), m)| (x + y) % m)
                .collect(),
        )
    }

    pub fn neg(&self, a: &GroupElement) -> Result<GroupElement> {
        self.scale(-1, a)
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        let nb = self.neg(b)?;
        self.add(a, &nb)
    }

    /// The `k`-fold sum of `a`; negative `k` scales the inverse.
    pub fn scale(&self, k: i64, a: &GroupElement) -> Result<GroupElement> {
        self.check(&a.residues)?;
        Ok(GroupElement::from_residues(
            a.residues
                .iter()
                .zip(&self.moduli)
                .map(|(&x, &m)| {
                    let k = k.rem_euclid(m as i64) as u128;
                    ((k * x as u128) % m as u128) as u64
                })
                .collect(),
        ))
    }

    /// Position of `e` in the canonical element order.
    pub fn index_of(&self, e: &GroupElement) -> usize {
        e.residues
            .iter()
            .zip(&self.strides)
            .map(|(r, s)| r * s)
            .sum::<u64>() as usize
    }

    pub fn element_at(&self, index: usize) -> GroupElement {
        let mut idx = index as u64;
        GroupElement::from_residues(
            self.strides
                .iter()
                .zip(&self.moduli)
                .map(|(s, m)| {
                    let r = (idx / s) % m;
                    idx %= s;
                    r
                })
                .collect(),
        )
    }

    /// All elements in canonical (mixed-radix ascending) order.
    pub fn elements(&self) -> Vec<GroupElement> {
        (0..self.order as usize)
            .map(|i| self.element_at(i))
            .collect()
    }

    pub fn element_order(&self, e: &GroupElement) -> u64 {
        e.residues
            .iter()
            .zip(&self.moduli)
            .fold(1, |acc, (&r, &m)| lcm(acc, m / gcd(r, m)))
    }

    /// Number of elements of order exactly two.
    pub fn involution_count(&self) -> u64 {
        let even = self.moduli.iter().filter(|&&m| m % 2 == 0).count() as u32;
        (1u64 << even) - 1
    }

    pub fn is_elementary_2(&self) -> bool {
        self.primary.iter().all(|&q| q == 2)
    }

    /// Order of the Sylow 2-subgroup.
    pub fn sylow2_order(&self) -> u64 {
        self.primary.iter().filter(|&&q| q % 2 == 0).product()
    }

    pub fn sylow2(&self) -> Sylow2 {
        match self.primary.iter().filter(|&&q| q % 2 == 0).count() {
            0 => Sylow2::Trivial,
            1 => Sylow2::Cyclic,
            _ => Sylow2::Noncyclic,
        }
    }

    pub fn classify(&self) -> Structure {
        let sylow2 = self.sylow2();
        let elementary_2 = self.is_elementary_2();
        Structure {
            odd_order: self.order % 2 == 1,
            elementary_2,
            sylow2,
            harmonious: sylow2 != Sylow2::Cyclic && !elementary_2,
            // Z2 itself is P-cordial (every path over Z2 is cordial), so only
            // elementary 2-groups of rank at least two are excluded.
            p_cordial: !(elementary_2 && self.primary.len() >= 2),
            has_complete_mapping: self.involution_count() != 1,
            r_star_guaranteed: sylow2 == Sylow2::Noncyclic && self.sylow2_order() != 8,
        }
    }

    /// Maps a vector of residues over the primary factors (in the order of
    /// [`GroupSpec::primary`]) to the corresponding element of this group.
    ///
    /// This is the isomorphism between the primary decomposition and the
    /// written factorization.
    pub fn from_primary_coords(&self, coords: &[u64]) -> GroupElement {
        debug_assert_eq!(coords.len(), self.primary.len());
        let mut out = vec![0u64; self.moduli.len()];
        for ((&c, &(idx, gen)), &q) in coords
            .iter()
            .zip(&self.primary_embedding)
            .zip(&self.primary)
        {
            let m = self.moduli[idx];
            out[idx] = (out[idx] + (c % q) * gen) % m;
        }
        GroupElement::from_residues(out)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.moduli.iter().enumerate() {
            if i > 0 {
                write!(f, "x")?;
            }
            write!(f, "Z{m}")?;
        }
        Ok(())
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_group(s)
    }
}

/// Parses `Z3xZ9`, `3x9`, `45`, ... into a group.
pub fn parse_group(text: &str) -> Result<GroupSpec> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(Error::GroupSyntax(text.into(), "empty".into()));
    }
    let mut moduli = Vec::new();
    for part in trimmed.split('x') {
        let digits = part.strip_prefix('Z').unwrap_or(part);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::GroupSyntax(
                text.into(),
                format!("expected `Z<k>` or `<k>`, found `{part}`"),
            ));
        }
        let k: u64 = digits
            .parse()
            .map_err(|_| Error::GroupSyntax(text.into(), format!("factor `{part}` too large")))?;
        if k < 2 {
            return Err(Error::FactorTooSmall(k));
        }
        moduli.push(k);
    }
    GroupSpec::new(moduli)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sylow2 {
    Trivial,
    Cyclic,
    Noncyclic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Structure {
    pub odd_order: bool,
    pub elementary_2: bool,
    pub sylow2: Sylow2,
    pub harmonious: bool,
    pub p_cordial: bool,
    pub has_complete_mapping: bool,
    pub r_star_guaranteed: bool,
}

/// Every abelian group of order `n`, one per primary decomposition, each
/// written as its primary factors sorted non-increasing.
pub fn groups_of_order(n: u64) -> Vec<GroupSpec> {
    if n < 2 {
        return Vec::new();
    }
    let mut choices: Vec<Vec<Vec<u64>>> = Vec::new();
    for (p, q) in prime_power_factors(n) {
        let mut alpha = 0;
        let mut t = q;
        while t > 1 {
            t /= p;
            alpha += 1;
        }
        choices.push(
            partitions(alpha)
                .into_iter()
                .map(|parts| parts.into_iter().map(|a| p.pow(a)).collect())
                .collect(),
        );
    }
    let mut combos: Vec<Vec<u64>> = vec![Vec::new()];
    for opts in &choices {
        let mut next = Vec::new();
        for base in &combos {
            for opt in opts {
                let mut v = base.clone();
                v.extend_from_slice(opt);
                next.push(v);
            }
        }
        combos = next;
    }
    combos
        .into_iter()
        .map(|mut v| {
            v.sort_unstable_by(|a, b| b.cmp(a));
            GroupSpec::new(v).expect("order within limits")
        })
        .collect()
}

/// Integer partitions of `n` as non-increasing part lists, largest first.
fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=n.min(max)).rev() {
            prefix.push(part);
            go(n - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// `(p, p^a)` for every prime `p` dividing `n`, ascending in `p`.
pub fn prime_power_factors(mut n: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut q = 1;
            while n % p == 0 {
                n /= p;
                q *= p;
            }
            out.push((p, q));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, n));
    }
    out
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Inverse of `a` modulo `m`, if it exists.
pub(crate) fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}
