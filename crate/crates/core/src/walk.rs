//! Random-walk representation of the cancellation degree.
//!
//! A root configuration places `A_j` red and `B_j` blue balls in urn `j`.
//! The walk `S_k = sum_{j<=k} (A_j - B_j)` determines the cancellation
//! degree: `beta = sum_{j=1}^{m-1} I_j`, where `I` splices the excess of the
//! walk over its running minimum (from the left before the first global
//! minimum, from the right after it).

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest allowed ball count per urn. Keeps every partial sum, and the
/// final degree, comfortably inside 64-bit range for any feasible `m`.
pub const MAX_ENTRY: u64 = u32::MAX as u64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("root configuration needs at least one urn")]
    Empty,
    #[error("{field} has length {got}, expected {expected}")]
    LengthMismatch {
        field: &'static str,
        got: usize,
        expected: usize,
    },
    #[error("urn {urn}: count {value} exceeds the supported maximum {MAX_ENTRY}")]
    EntryTooLarge { urn: usize, value: u64 },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WalkError {
    #[error("excess sum overflows 64-bit range")]
    Overflow,
}

/// Exponent vectors of the integer-rooted numerator and denominator:
/// `f(k) = prod (k-j)^{A_j}`, `g(k) = prod (k-j)^{B_j}` with roots in `1..=m`.
///
/// Red balls are numerator roots (counts `A`), blue balls denominator roots
/// (counts `B`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootConfig {
    a: Vec<u64>,
    b: Vec<u64>,
}

impl RootConfig {
    pub fn new(a: Vec<u64>, b: Vec<u64>) -> Result<Self, ConfigError> {
        if a.is_empty() {
            return Err(ConfigError::Empty);
        }
        if a.len() != b.len() {
            return Err(ConfigError::LengthMismatch {
                field: "B",
                got: b.len(),
                expected: a.len(),
            });
        }
        for (urn, &value) in a.iter().chain(b.iter()).enumerate() {
            if value > MAX_ENTRY {
                return Err(ConfigError::EntryTooLarge {
                    urn: urn % a.len() + 1,
                    value,
                });
            }
        }
        Ok(Self { a, b })
    }

    /// Number of urns.
    pub fn m(&self) -> usize {
        self.a.len()
    }

    /// Red (numerator) counts `A_1..A_m`.
    pub fn red(&self) -> &[u64] {
        &self.a
    }

    /// Blue (denominator) counts `B_1..B_m`.
    pub fn blue(&self) -> &[u64] {
        &self.b
    }

    pub fn total_red(&self) -> u64 {
        self.a.iter().sum()
    }

    pub fn total_blue(&self) -> u64 {
        self.b.iter().sum()
    }

    /// Reverse urn order and swap colors: `A'_j = B_{m+1-j}`, `B'_j = A_{m+1-j}`.
    ///
    /// This is the time-reversal symmetry of the matching problem; it
    /// preserves the cancellation degree.
    #[must_use]
    pub fn reversed(&self) -> Self {
        let a: Vec<u64> = self.b.iter().rev().copied().collect();
        let b: Vec<u64> = self.a.iter().rev().copied().collect();
        Self { a, b }
    }
}

/// The walk functionals of a configuration.
///
/// All sequences are indexed `0..=m` in step with the partial sums
/// (`sums[0] = 0`). `spliced_excess[j]` is the left excess for `j <= argmin`
/// and the right excess after it; the degree is its sum over `1..=m-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkStats {
    sums: Vec<i64>,
    prefix_min: Vec<i64>,
    suffix_min: Vec<i64>,
    argmin: usize,
    left_excess: Vec<i64>,
    right_excess: Vec<i64>,
    spliced_excess: Vec<i64>,
    beta: u64,
}

impl WalkStats {
    /// Partial sums `S_0..S_m` of the increments `A_j - B_j`.
    pub fn sums(&self) -> &[i64] {
        &self.sums
    }

    /// Running minima from the left: `M_k = min_{j<=k} S_j`.
    pub fn prefix_min(&self) -> &[i64] {
        &self.prefix_min
    }

    /// Running minima from the right: `M~_k = min_{j>=k} S_j`.
    pub fn suffix_min(&self) -> &[i64] {
        &self.suffix_min
    }

    /// Index of the first attainment of the global minimum of the walk.
    pub fn argmin(&self) -> usize {
        self.argmin
    }

    /// `Y_k = S_k - M_k`.
    pub fn left_excess(&self) -> &[i64] {
        &self.left_excess
    }

    /// `Y~_k = S_k - M~_k`.
    pub fn right_excess(&self) -> &[i64] {
        &self.right_excess
    }

    /// `I_k`: the left excess up to the argmin, the right excess after it.
    pub fn spliced_excess(&self) -> &[i64] {
        &self.spliced_excess
    }

    /// Degree of the cancellation polynomial: `sum_{j=1}^{m-1} I_j`.
    pub fn beta(&self) -> u64 {
        self.beta
    }
}

/// Compute the walk representation of a configuration.
///
/// Runs in time linear in `m`. Fails only if the spliced-excess sum leaves
/// 64-bit range, which valid configurations of any practical size do not.
pub fn compute_walk(config: &RootConfig) -> Result<WalkStats, WalkError> {
    let m = config.m();
    let mut sums = Vec::with_capacity(m + 1);
    sums.push(0i64);
    for j in 0..m {
        // Entries are capped at 2^32 - 1, so the increment itself is safe.
        let step = config.a[j] as i64 - config.b[j] as i64;
        let next = sums[j].checked_add(step).ok_or(WalkError::Overflow)?;
        sums.push(next);
    }

    let mut prefix_min = Vec::with_capacity(m + 1);
    let mut running = i64::MAX;
    for &s in &sums {
        running = running.min(s);
        prefix_min.push(running);
    }

    let mut suffix_min = vec![0i64; m + 1];
    running = i64::MAX;
    for k in (0..=m).rev() {
        running = running.min(sums[k]);
        suffix_min[k] = running;
    }

    // First attainment of the global minimum.
    let global_min = prefix_min[m];
    let argmin = sums
        .iter()
        .position(|&s| s == global_min)
        .expect("global minimum is attained");

    let left_excess: Vec<i64> = sums.iter().zip(&prefix_min).map(|(s, m)| s - m).collect();
    let right_excess: Vec<i64> = sums.iter().zip(&suffix_min).map(|(s, m)| s - m).collect();
    let spliced_excess: Vec<i64> = (0..=m)
        .map(|j| {
            if j <= argmin {
                left_excess[j]
            } else {
                right_excess[j]
            }
        })
        .collect();

    let mut beta: i128 = 0;
    for &v in &spliced_excess[1..m] {
        beta += v as i128;
    }
    let beta = u64::try_from(beta).map_err(|_| WalkError::Overflow)?;

    Ok(WalkStats {
        sums,
        prefix_min,
        suffix_min,
        argmin,
        left_excess,
        right_excess,
        spliced_excess,
        beta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn walk(a: &[u64], b: &[u64]) -> WalkStats {
        compute_walk(&RootConfig::new(a.to_vec(), b.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn single_up_down_step() {
        let w = walk(&[1, 0], &[0, 1]);
        assert_eq!(w.sums(), &[0, 1, 0]);
        assert_eq!(w.argmin(), 0);
        assert_eq!(w.spliced_excess()[1], 1);
        assert_eq!(w.beta(), 1);
    }

    #[test]
    fn single_down_up_step() {
        let w = walk(&[0, 1], &[1, 0]);
        assert_eq!(w.sums(), &[0, -1, 0]);
        assert_eq!(w.argmin(), 1);
        assert_eq!(w.beta(), 0);
    }

    #[test]
    fn equal_counts_vanish() {
        let w = walk(&[2, 3, 1], &[2, 3, 1]);
        assert!(w.sums().iter().all(|&s| s == 0));
        assert_eq!(w.beta(), 0);
    }

    #[test]
    fn four_urn_example() {
        let w = walk(&[0, 2, 0, 0], &[1, 0, 0, 1]);
        assert_eq!(w.sums(), &[0, -1, 1, 1, 0]);
        assert_eq!(w.argmin(), 1);
        assert_eq!(w.left_excess()[1], 0);
        assert_eq!(w.right_excess()[2], 1);
        assert_eq!(w.right_excess()[3], 1);
        assert_eq!(w.beta(), 2);
    }

    #[test]
    fn empty_config_rejected() {
        assert_eq!(RootConfig::new(vec![], vec![]), Err(ConfigError::Empty));
    }

    #[test]
    fn length_mismatch_names_field() {
        let err = RootConfig::new(vec![1], vec![0, 1]).unwrap_err();
        assert_eq!(
            err.to_string(),
            "B has length 2, expected 1".to_string()
        );
    }

    #[test]
    fn argmin_is_first_attainment() {
        // S = (0, -1, 0, -1): global min -1 first attained at k = 1.
        let w = walk(&[0, 1, 0], &[1, 0, 1]);
        assert_eq!(w.sums(), &[0, -1, 0, -1]);
        assert_eq!(w.argmin(), 1);
    }

    fn config_strategy() -> impl Strategy<Value = RootConfig> {
        (1usize..7).prop_flat_map(|m| {
            (
                prop::collection::vec(0u64..4, m),
                prop::collection::vec(0u64..4, m),
            )
                .prop_map(|(a, b)| RootConfig::new(a, b).unwrap())
        })
    }

    proptest! {
        #[test]
        fn argmin_matches_direct_scan(config in config_strategy()) {
            let w = compute_walk(&config).unwrap();
            let s = w.sums();
            let direct = (0..s.len())
                .find(|&k| s.iter().skip(k + 1).all(|&v| v >= s[k]))
                .unwrap();
            prop_assert_eq!(w.argmin(), direct);
            prop_assert_eq!(w.left_excess()[w.argmin()], 0);
            prop_assert_eq!(w.right_excess()[w.argmin()], 0);
        }

        #[test]
        fn reversal_preserves_beta(config in config_strategy()) {
            let w = compute_walk(&config).unwrap();
            let r = compute_walk(&config.reversed()).unwrap();
            prop_assert_eq!(w.beta(), r.beta());
        }

        #[test]
        fn equal_vectors_give_zero(a in prop::collection::vec(0u64..5, 1..8)) {
            let config = RootConfig::new(a.clone(), a).unwrap();
            prop_assert_eq!(compute_walk(&config).unwrap().beta(), 0);
        }
    }
}
