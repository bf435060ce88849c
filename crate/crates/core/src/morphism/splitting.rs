//! Splitting types of bundles on the projective line, read off from
//! dimensions of twisted sections.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{ExactMatrix, Scalar};

use super::{MorphismError, MorphismP1};

/// `O(k_1) + ... + O(k_r)`, entries kept in decreasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SplittingType(Vec<i64>);

impl SplittingType {
    pub fn new(mut entries: Vec<i64>) -> Self {
        entries.sort_unstable_by(|a, b| b.cmp(a));
        SplittingType(entries)
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn min(&self) -> Option<i64> {
        self.0.last().copied()
    }

    pub fn max(&self) -> Option<i64> {
        self.0.first().copied()
    }

    /// `h^0` of the bundle twisted by `O(-t)`: `sum_j max(0, k_j - t + 1)`.
    pub fn h0_twisted(&self, t: i64) -> usize {
        self.0.iter().map(|&k| (k - t + 1).max(0) as usize).sum()
    }

    /// The profile `t -> h^0(E(-t))` on `lo..=hi`.
    pub fn profile(&self, lo: i64, hi: i64) -> BTreeMap<i64, usize> {
        (lo..=hi).map(|t| (t, self.h0_twisted(t))).collect()
    }
}

impl std::fmt::Display for SplittingType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|k| k.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Recovers `{k_j}` from `h(t) = sum_j max(0, k_j - t + 1)` given on a range of
/// consecutive twists that starts at or below `min k_j` and ends where `h`
/// reaches zero.
pub fn splitting_from_twist_profile(
    h: &BTreeMap<i64, usize>,
    rank: usize,
    degree: i64,
) -> Result<SplittingType, MorphismError> {
    let bad = |why: String| Err(MorphismError::ProfileInconsistent(why));
    let (Some((&lo, _)), Some((&hi, &last))) = (h.first_key_value(), h.last_key_value()) else {
        return bad("empty profile".into());
    };
    if h.len() as i64 != hi - lo + 1 {
        return bad("twists are not consecutive".into());
    }
    if last != 0 {
        return bad(format!("h({hi}) = {last} has not reached zero"));
    }
    // D(t) = h(t) - h(t + 1) = #{j : k_j >= t}
    let mut counts = Vec::new();
    for t in lo..hi {
        let (a, b) = (h[&t], h[&(t + 1)]);
        if b > a {
            return bad(format!("h increases between {t} and {}", t + 1));
        }
        counts.push(a - b);
    }
    if counts.first().copied().unwrap_or(0) != rank {
        return bad(format!("h({lo}) - h({}) differs from the rank {rank}", lo + 1));
    }
    let mut entries = Vec::with_capacity(rank);
    for (i, &c) in counts.iter().enumerate() {
        let next = counts.get(i + 1).copied().unwrap_or(0);
        if next > c {
            return bad(format!("second difference negative at {}", lo + i as i64));
        }
        entries.extend(std::iter::repeat_n(lo + i as i64, c - next));
    }
    let split = SplittingType::new(entries);
    if split.degree() != degree {
        return bad(format!("decoded degree {} differs from {degree}", split.degree()));
    }
    if let Some((&t, _)) = h.iter().find(|(&t, &v)| split.h0_twisted(t) != v) {
        return bad(format!("h({t}) is not reproduced"));
    }
    Ok(split)
}

/// Dimension of `{(g_0, ..., g_n) : deg g_i = m - d, sum f_i g_i = 0}`.
pub(crate) fn syzygy_dim<S: Scalar>(comps: &[crate::algebra::HomPoly<S>], m: i64) -> usize {
    let d = comps[0].degree() as i64;
    if m < d {
        return 0;
    }
    let e = (m - d) as usize;
    let rows = m as usize + 1;
    let mut mat = ExactMatrix::zeros(rows, comps.len() * (e + 1));
    for (i, f) in comps.iter().enumerate() {
        for a in 0..=e {
            for (r, c) in f.coeffs().iter().enumerate() {
                mat[(r + a, i * (e + 1) + a)] = c.clone();
            }
        }
    }
    mat.kernel_dim()
}

/// Splitting of `f^* T_{P^{n_k}}` per factor.
///
/// The dual `f^* Omega` is the syzygy bundle of the components, so
/// `h^0(f^* Omega(m))` is a syzygy dimension and the decoder returns `{-a_i}`.
pub fn splitting_tangent_pullback<S: Scalar>(f: &MorphismP1<S>) -> Result<Vec<SplittingType>, MorphismError> {
    f.require_valid()?;
    f.factors()
        .iter()
        .map(|comps| {
            let n = comps.len() as i64 - 1;
            let d = comps[0].degree() as i64;
            // entries a_i lie in [d, 2d], so twists -m for m in d-1 ..= 2d+1 suffice
            let profile: BTreeMap<i64, usize> = (d - 1..=2 * d + 1).map(|m| (-m, syzygy_dim(comps, m))).collect();
            let dual = splitting_from_twist_profile(&profile, n as usize, -(n + 1) * d)?;
            Ok(SplittingType::new(dual.entries().iter().map(|k| -k).collect()))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistVanishing {
    pub per_factor: Vec<bool>,
    pub overall: bool,
}

/// Whether `H^1(f^* T(-c))` vanishes: `min a_i - c >= -1` in every factor.
pub fn h1_twist_vanishes(splitting: &[SplittingType], c: i64) -> TwistVanishing {
    let per_factor: Vec<bool> = splitting.iter().map(|s| s.min().is_none_or(|m| m - c >= -1)).collect();
    let overall = per_factor.iter().all(|&b| b);
    TwistVanishing { per_factor, overall }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Field, HomPoly, Rational, RationalField};

    fn form(c: &[i64]) -> HomPoly<Rational> {
        let f = RationalField::default();
        HomPoly::new(c.iter().map(|&x| f.from_i64(x)).collect())
    }

    fn map(comps: &[&[i64]]) -> MorphismP1<Rational> {
        MorphismP1::new(vec![comps.iter().map(|c| form(c)).collect()]).unwrap()
    }

    #[test]
    fn decoder_examples() {
        // forward evaluation of {1, 0, 0}
        let h: BTreeMap<i64, usize> = [(0, 4), (1, 1), (2, 0)].into();
        assert_eq!(splitting_from_twist_profile(&h, 3, 1).unwrap(), SplittingType::new(vec![1, 0, 0]));

        for d in 0..6 {
            let h: BTreeMap<i64, usize> = (0..=d + 1).map(|t| (t, (d - t + 1).max(0) as usize)).collect();
            assert_eq!(splitting_from_twist_profile(&h, 1, d).unwrap(), SplittingType::new(vec![d]));
        }

        let h: BTreeMap<i64, usize> = [(0, 3), (1, 0)].into();
        assert!(matches!(splitting_from_twist_profile(&h, 1, 2), Err(MorphismError::ProfileInconsistent(_))));
    }

    #[test]
    fn decoder_rejects_the_nonconforming_profile() {
        // h(0)=4, h(1)=2, h(2)=1 is not of the form sum max(0, k_j - t + 1) for rank 3, degree 1
        let h: BTreeMap<i64, usize> = [(0, 4), (1, 2), (2, 1), (3, 0)].into();
        assert!(matches!(splitting_from_twist_profile(&h, 3, 1), Err(MorphismError::ProfileInconsistent(_))));
    }

    #[test]
    fn known_tangent_splittings() {
        assert_eq!(splitting_tangent_pullback(&map(&[&[1, 0], &[0, 1]])).unwrap(), vec![SplittingType::new(vec![2])]);
        assert_eq!(
            splitting_tangent_pullback(&map(&[&[1, 0], &[0, 1], &[0, 0]])).unwrap(),
            vec![SplittingType::new(vec![2, 1])]
        );
        assert_eq!(
            splitting_tangent_pullback(&map(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap(),
            vec![SplittingType::new(vec![3, 3])]
        );
        // rational normal cubic in P^3 is balanced: {4, 4, 4}
        assert_eq!(
            splitting_tangent_pullback(&map(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]])).unwrap(),
            vec![SplittingType::new(vec![4, 4, 4])]
        );
        // a conic in a plane of P^3: {3, 3, 2}
        assert_eq!(
            splitting_tangent_pullback(&map(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[0, 0, 0]])).unwrap(),
            vec![SplittingType::new(vec![3, 3, 2])]
        );
    }

    #[test]
    fn base_points_are_rejected() {
        assert_eq!(splitting_tangent_pullback(&map(&[&[1, 0, 0], &[0, 1, 0]])), Err(MorphismError::BasePoint));
    }

    #[test]
    fn twist_vanishing_examples() {
        let id = [SplittingType::new(vec![2])];
        assert!(h1_twist_vanishes(&id, 0).overall);
        let line = [SplittingType::new(vec![2, 1])];
        assert!(h1_twist_vanishes(&line, 2).overall);
        assert!(!h1_twist_vanishes(&line, 3).overall);
    }
}
