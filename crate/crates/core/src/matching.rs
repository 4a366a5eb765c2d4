//! Admissible ball matchings: weights, d-profiles, the LIFO stack
//! construction of the optimum, and an exhaustive oracle.
//!
//! A matching pairs red balls (numerator roots) with blue balls (denominator
//! roots). Admissibility: each pair has the red ball at position `i <= j`
//! (the blue position), and among unmatched balls every red sits strictly to
//! the right of every blue. The weight of a matching is the sum of `j - i`
//! over its pairs; the minimum weight over admissible matchings equals the
//! cancellation degree.

use rand::Rng;
use thiserror::Error;

use crate::walk::{compute_walk, RootConfig};

/// Default cap on total ball count for the exhaustive oracle.
pub const DEFAULT_BRUTE_FORCE_CAP: u64 = 10;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatchingError {
    #[error("{total} balls exceed the enumeration cap {cap}; use stack_matching instead")]
    SizeCapExceeded { total: u64, cap: u64 },
}

/// A multiset of red-blue pairs plus the unmatched balls on each side.
///
/// Positions are 1-based urn indices. Pair `(i, j)` matches a red ball in
/// urn `i` with a blue ball in urn `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    pairs: Vec<(usize, usize)>,
    unmatched_red: Vec<usize>,
    unmatched_blue: Vec<usize>,
}

impl Matching {
    pub fn new(
        mut pairs: Vec<(usize, usize)>,
        mut unmatched_red: Vec<usize>,
        mut unmatched_blue: Vec<usize>,
    ) -> Self {
        pairs.sort_unstable();
        unmatched_red.sort_unstable();
        unmatched_blue.sort_unstable();
        Self {
            pairs,
            unmatched_red,
            unmatched_blue,
        }
    }

    pub fn empty() -> Self {
        Self::new(Vec::new(), Vec::new(), Vec::new())
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn unmatched_red(&self) -> &[usize] {
        &self.unmatched_red
    }

    pub fn unmatched_blue(&self) -> &[usize] {
        &self.unmatched_blue
    }

    /// Sum of `j - i` over all pairs.
    pub fn weight(&self) -> u64 {
        self.pairs
            .iter()
            .map(|&(i, j)| j.saturating_sub(i) as u64)
            .sum()
    }
}

/// Check the admissibility conditions of `matching` against `config`:
/// pair order `i <= j`, multiset conservation of both colors, and the
/// unmatched-separation condition.
pub fn is_admissible(matching: &Matching, config: &RootConfig) -> bool {
    let m = config.m();
    let in_range = |p: usize| (1..=m).contains(&p);

    if !matching.pairs.iter().all(|&(i, j)| {
        in_range(i) && in_range(j) && i <= j
    }) {
        return false;
    }
    if !matching
        .unmatched_red
        .iter()
        .chain(&matching.unmatched_blue)
        .all(|&p| in_range(p))
    {
        return false;
    }

    // Multiset conservation: used balls per urn must equal the urn counts.
    let mut red = vec![0u64; m + 1];
    let mut blue = vec![0u64; m + 1];
    for &(i, j) in &matching.pairs {
        red[i] += 1;
        blue[j] += 1;
    }
    for &i in &matching.unmatched_red {
        red[i] += 1;
    }
    for &j in &matching.unmatched_blue {
        blue[j] += 1;
    }
    if red[1..] != *config.red() || blue[1..] != *config.blue() {
        return false;
    }

    // Unmatched reds all strictly right of unmatched blues.
    match (
        matching.unmatched_red.first(),
        matching.unmatched_blue.last(),
    ) {
        (Some(&min_red), Some(&max_blue)) => min_red > max_blue,
        _ => true,
    }
}

/// Weight and d-profile of a matching on `m` urns.
///
/// `d[t - 1]` (for `t = 1..m-1`) counts the pairs `(i, j)` with `i <= t < j`,
/// i.e. the pairs spanning the gap between urns `t` and `t + 1`; the weight
/// equals the profile sum.
pub fn weight_and_profile(matching: &Matching, m: usize) -> (u64, Vec<u64>) {
    let mut d = vec![0u64; m.saturating_sub(1)];
    for &(i, j) in &matching.pairs {
        for slot in d.iter_mut().take(j - 1).skip(i - 1) {
            *slot += 1;
        }
    }
    (matching.weight(), d)
}

/// Build the minimum-weight admissible matching with the LIFO stack
/// algorithm.
///
/// Forward pass over urns `1..=argmin`: red balls go on the stack, blue
/// balls match against its top, excess blues are left unmatched. Backward
/// pass from urn `m` down to `argmin + 1`: the same with colors swapped.
/// The resulting d-profile equals the walk's spliced excess entrywise, so
/// the weight equals the cancellation degree.
pub fn stack_matching(config: &RootConfig) -> Matching {
    let m = config.m();
    // The argmin needs no overflow checks: track sums in i128.
    let mut best = (0i128, 0usize);
    let mut sum = 0i128;
    for j in 1..=m {
        sum += config.red()[j - 1] as i128 - config.blue()[j - 1] as i128;
        if sum < best.0 {
            best = (sum, j);
        }
    }
    let argmin = best.1;

    let mut pairs = Vec::new();
    let mut unmatched_red = Vec::new();
    let mut unmatched_blue = Vec::new();
    // Stack entries are run-length encoded as (position, count).
    let mut stack: Vec<(usize, u64)> = Vec::new();

    for j in 1..=argmin {
        let reds = config.red()[j - 1];
        if reds > 0 {
            stack.push((j, reds));
        }
        let mut blues = config.blue()[j - 1];
        while blues > 0 {
            match stack.last_mut() {
                Some((i, count)) => {
                    let take = blues.min(*count);
                    for _ in 0..take {
                        pairs.push((*i, j));
                    }
                    blues -= take;
                    *count -= take;
                    if *count == 0 {
                        stack.pop();
                    }
                }
                None => {
                    for _ in 0..blues {
                        unmatched_blue.push(j);
                    }
                    blues = 0;
                }
            }
        }
    }
    debug_assert!(stack.is_empty(), "forward stack drains at the argmin");

    for j in (argmin + 1..=m).rev() {
        let blues = config.blue()[j - 1];
        if blues > 0 {
            stack.push((j, blues));
        }
        let mut reds = config.red()[j - 1];
        while reds > 0 {
            match stack.last_mut() {
                Some((jj, count)) => {
                    let take = reds.min(*count);
                    for _ in 0..take {
                        pairs.push((j, *jj));
                    }
                    reds -= take;
                    *count -= take;
                    if *count == 0 {
                        stack.pop();
                    }
                }
                None => {
                    for _ in 0..reds {
                        unmatched_red.push(j);
                    }
                    reds = 0;
                }
            }
        }
    }

    Matching::new(pairs, unmatched_red, unmatched_blue)
}

/// Exact minimum weight over all admissible matchings, by exhaustive
/// recursive assignment. Refuses configurations with more than `cap` balls
/// in total.
pub fn brute_force_beta(config: &RootConfig, cap: u64) -> Result<u64, MatchingError> {
    let total = config.total_red() + config.total_blue();
    if total > cap {
        return Err(MatchingError::SizeCapExceeded { total, cap });
    }

    let reds: Vec<usize> = positions(config.red());
    let mut blue_avail: Vec<u64> = config.blue().to_vec();
    let mut best = u64::MAX;
    assign(&reds, 0, &mut blue_avail, usize::MAX, 0, &mut best);
    debug_assert_ne!(best, u64::MAX, "the stack matching is always admissible");
    Ok(best)
}

fn positions(counts: &[u64]) -> Vec<usize> {
    let mut out = Vec::new();
    for (idx, &count) in counts.iter().enumerate() {
        for _ in 0..count {
            out.push(idx + 1);
        }
    }
    out
}

/// Recurse over red balls in increasing position; each is either left
/// unmatched or paired with an available blue at a position at least its
/// own. Branches whose partial weight already meets the best are pruned.
fn assign(
    reds: &[usize],
    next: usize,
    blue_avail: &mut Vec<u64>,
    min_unmatched_red: usize,
    weight: u64,
    best: &mut u64,
) {
    if weight >= *best {
        return;
    }
    if next == reds.len() {
        // Condition 4: every remaining blue must sit left of every
        // unmatched red.
        let max_unmatched_blue = blue_avail.iter().rposition(|&c| c > 0).map(|p| p + 1);
        let ok = match max_unmatched_blue {
            Some(blue) => min_unmatched_red == usize::MAX || min_unmatched_red > blue,
            None => true,
        };
        if ok {
            *best = weight;
        }
        return;
    }

    let red = reds[next];
    for j in red..=blue_avail.len() {
        if blue_avail[j - 1] > 0 {
            blue_avail[j - 1] -= 1;
            assign(
                reds,
                next + 1,
                blue_avail,
                min_unmatched_red,
                weight + (j - red) as u64,
                best,
            );
            blue_avail[j - 1] += 1;
        }
    }
    // Leave this red unmatched. Reds are visited in increasing position,
    // so the first one left unmatched is the minimum.
    assign(
        reds,
        next + 1,
        blue_avail,
        min_unmatched_red.min(red),
        weight,
        best,
    );
}

/// Draw some admissible matching at random: each red ball tosses a coin to
/// stay unmatched or grabs a random available blue to its right; drawings
/// that violate the unmatched-separation condition are rejected. Falls back
/// to the stack matching when rejection takes too long.
///
/// This is a test aid for properties quantified over admissible matchings;
/// it makes no claim about the induced distribution.
pub fn sample_admissible_matching<R: Rng + ?Sized>(
    config: &RootConfig,
    rng: &mut R,
) -> Matching {
    let reds = positions(config.red());
    for _ in 0..64 {
        let mut blue_avail = config.blue().to_vec();
        let mut pairs = Vec::new();
        let mut unmatched_red = Vec::new();
        for &red in &reds {
            let open: Vec<usize> = (red..=blue_avail.len())
                .filter(|&j| blue_avail[j - 1] > 0)
                .collect();
            if open.is_empty() || rng.random::<bool>() {
                unmatched_red.push(red);
            } else {
                let j = open[rng.random_range(0..open.len())];
                blue_avail[j - 1] -= 1;
                pairs.push((red, j));
            }
        }
        let unmatched_blue = positions(&blue_avail);
        let candidate = Matching::new(pairs, unmatched_red, unmatched_blue);
        if is_admissible(&candidate, config) {
            return candidate;
        }
    }
    stack_matching(config)
}
