//! Integer-rooted polynomials and the cancellation triple.
//!
//! Polynomials are kept as root multisets; verification never expands them.
//! The defining identity `f(x) b(x) c(x) = g(x) a(x) c(x+1)` is checked by
//! exact evaluation at enough integer points to pin the polynomials down.

use num_bigint::BigInt;
use thiserror::Error;

use crate::matching::Matching;
use crate::walk::RootConfig;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CancelError {
    #[error("matching is not admissible: pair ({i}, {j}) has the red ball right of the blue")]
    PairOutOfOrder { i: usize, j: usize },
    #[error("matching is not admissible: unmatched red at {red} left of unmatched blue at {blue}")]
    SeparationViolated { red: usize, blue: usize },
}

/// A monic polynomial with integer roots, stored as the root multiset.
/// The empty multiset is the constant 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntRootPoly {
    roots: Vec<i64>,
}

impl IntRootPoly {
    pub fn from_roots(mut roots: Vec<i64>) -> Self {
        roots.sort_unstable();
        Self { roots }
    }

    pub fn one() -> Self {
        Self { roots: Vec::new() }
    }

    pub fn roots(&self) -> &[i64] {
        &self.roots
    }

    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    pub fn is_one(&self) -> bool {
        self.roots.is_empty()
    }

    /// Exact value of the polynomial at an integer point.
    pub fn eval(&self, x: i64) -> BigInt {
        let mut acc = BigInt::from(1);
        for &r in &self.roots {
            acc *= BigInt::from(x - r);
        }
        acc
    }

    /// The polynomial `p(x + shift)`, whose roots are `r - shift`.
    #[must_use]
    pub fn compose_shift(&self, shift: i64) -> Self {
        Self {
            roots: self.roots.iter().map(|&r| r - shift).collect(),
        }
    }

    /// Coefficients in ascending degree order; monic, so the last is 1.
    pub fn expand(&self) -> Vec<BigInt> {
        let mut coeffs = vec![BigInt::from(1)];
        for &r in &self.roots {
            // Multiply by (x - r).
            let mut next = vec![BigInt::from(0); coeffs.len() + 1];
            for (k, coeff) in coeffs.iter().enumerate() {
                next[k] -= coeff * r;
                next[k + 1] += coeff;
            }
            coeffs = next;
        }
        coeffs
    }
}

/// The triple `(a, b, c)` with `f/g = (a/b) * c(x+1)/c(x)`: `a` carries the
/// unmatched red positions, `b` the unmatched blue positions, and `c` one
/// root run per matched pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CancellationTriple {
    pub a: IntRootPoly,
    pub b: IntRootPoly,
    pub c: IntRootPoly,
}

/// Numerator and denominator of the input ratio: root `j` of `f` with
/// multiplicity `A_j`, of `g` with multiplicity `B_j`.
pub fn build_fg(config: &RootConfig) -> (IntRootPoly, IntRootPoly) {
    let repeat = |counts: &[u64]| {
        let mut roots = Vec::new();
        for (idx, &count) in counts.iter().enumerate() {
            for _ in 0..count {
                roots.push(idx as i64 + 1);
            }
        }
        IntRootPoly::from_roots(roots)
    };
    (repeat(config.red()), repeat(config.blue()))
}

/// Build the cancellation triple of an admissible matching.
///
/// Each pair `(i, j)` contributes the root run `i+1..=j` to `c`, which
/// telescopes `(x-i)/(x-j)` into `c(x+1)/c(x)`; unmatched positions go to
/// `a` (red) and `b` (blue). `degree(c)` equals the matching weight.
pub fn cancellation_from_matching(
    matching: &Matching,
) -> Result<CancellationTriple, CancelError> {
    for &(i, j) in matching.pairs() {
        if i > j {
            return Err(CancelError::PairOutOfOrder { i, j });
        }
    }
    if let (Some(&red), Some(&blue)) = (
        matching.unmatched_red().first(),
        matching.unmatched_blue().last(),
    ) {
        if red <= blue {
            return Err(CancelError::SeparationViolated { red, blue });
        }
    }

    let mut c_roots = Vec::new();
    for &(i, j) in matching.pairs() {
        for s in i + 1..=j {
            c_roots.push(s as i64);
        }
    }
    let a_roots = matching.unmatched_red().iter().map(|&p| p as i64).collect();
    let b_roots = matching.unmatched_blue().iter().map(|&p| p as i64).collect();

    Ok(CancellationTriple {
        a: IntRootPoly::from_roots(a_roots),
        b: IntRootPoly::from_roots(b_roots),
        c: IntRootPoly::from_roots(c_roots),
    })
}

/// Check that a triple solves the cancellation identity for `config` and
/// satisfies the shift-coprimality side condition.
///
/// The identity `f(x) b(x) c(x) = g(x) a(x) c(x+1)` is decided by exact
/// evaluation at `D + 1` distinct integer points, `D` the larger total
/// degree; the side condition reduces, for integer-rooted `a` and `b`, to
/// every root of `a` exceeding every root of `b`.
pub fn verify_triple(config: &RootConfig, triple: &CancellationTriple) -> bool {
    let degree = identity_degree(config, triple);
    let start = config.m() as i64 + 1;
    verify_triple_at(config, triple, (0..=degree).map(|k| start + k as i64))
}

/// [`verify_triple`] with caller-chosen evaluation points. The verdict is
/// independent of the choice as long as the points are distinct and at
/// least `D + 1` of them are supplied.
pub fn verify_triple_at(
    config: &RootConfig,
    triple: &CancellationTriple,
    points: impl IntoIterator<Item = i64>,
) -> bool {
    if !shift_coprime(&triple.a, &triple.b) {
        return false;
    }
    let (f, g) = build_fg(config);
    let c_up = triple.c.compose_shift(1);
    points.into_iter().all(|x| {
        f.eval(x) * triple.b.eval(x) * triple.c.eval(x)
            == g.eval(x) * triple.a.eval(x) * c_up.eval(x)
    })
}

fn identity_degree(config: &RootConfig, triple: &CancellationTriple) -> usize {
    let (f, g) = build_fg(config);
    let lhs = f.degree() + triple.b.degree() + triple.c.degree();
    let rhs = g.degree() + triple.a.degree() + triple.c.degree();
    lhs.max(rhs)
}

/// The integer-root form of the Gosper side condition: `gcd(a(x), b(x+h)) = 1`
/// for every `h >= 0`, i.e. the smallest root of `a` exceeds the largest
/// root of `b`. Vacuously true when either polynomial is constant.
pub fn shift_coprime(a: &IntRootPoly, b: &IntRootPoly) -> bool {
    match (a.roots().first(), b.roots().last()) {
        (Some(&min_a), Some(&max_b)) => min_a > max_b,
        _ => true,
    }
}

/// Ascending coefficients of the expanded polynomial.
pub fn expand_poly(p: &IntRootPoly) -> Vec<BigInt> {
    p.expand()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::{sample_admissible_matching, stack_matching, Matching};
    use crate::rng::substream;
    use crate::walk::compute_walk;
    use proptest::prelude::*;

    fn config(a: &[u64], b: &[u64]) -> RootConfig {
        RootConfig::new(a.to_vec(), b.to_vec()).unwrap()
    }

    fn poly(roots: &[i64]) -> IntRootPoly {
        IntRootPoly::from_roots(roots.to_vec())
    }

    #[test]
    fn build_fg_transcribes_counts() {
        let (f, _) = build_fg(&config(&[2, 0, 0], &[0, 0, 0]));
        assert_eq!(f.roots(), &[1, 1]);
        let (f, g) = build_fg(&config(&[0, 0, 0, 0], &[1, 0, 0, 1]));
        assert!(f.is_one());
        assert_eq!(g.roots(), &[1, 4]);
    }

    #[test]
    fn triple_from_stack_matching() {
        let m = Matching::new(vec![(2, 2), (1, 3)], vec![], vec![]);
        let t = cancellation_from_matching(&m).unwrap();
        assert_eq!(t.c.roots(), &[2, 3]);
        assert!(t.a.is_one());
        assert!(t.b.is_one());
        assert!(verify_triple(&config(&[1, 1, 0], &[0, 1, 1]), &t));
    }

    #[test]
    fn triple_with_unmatched_balls() {
        let m = Matching::new(vec![(2, 4)], vec![2], vec![1]);
        let t = cancellation_from_matching(&m).unwrap();
        assert_eq!(t.c.roots(), &[3, 4]);
        assert_eq!(t.a.roots(), &[2]);
        assert_eq!(t.b.roots(), &[1]);
        assert!(verify_triple(&config(&[0, 2, 0, 0], &[1, 0, 0, 1]), &t));
    }

    #[test]
    fn triple_of_empty_matching() {
        let m = Matching::new(vec![], vec![2], vec![1]);
        let t = cancellation_from_matching(&m).unwrap();
        assert!(t.c.is_one());
        assert_eq!(t.a.roots(), &[2]);
        assert_eq!(t.b.roots(), &[1]);
        assert!(verify_triple(&config(&[0, 1], &[1, 0]), &t));
    }

    #[test]
    fn inadmissible_matching_rejected() {
        let m = Matching::new(vec![(3, 1)], vec![], vec![]);
        assert_eq!(
            cancellation_from_matching(&m),
            Err(CancelError::PairOutOfOrder { i: 3, j: 1 })
        );
        let m = Matching::new(vec![], vec![1], vec![2]);
        assert_eq!(
            cancellation_from_matching(&m),
            Err(CancelError::SeparationViolated { red: 1, blue: 2 })
        );
    }

    #[test]
    fn verify_accepts_correct_root_run() {
        let c = config(&[1, 0], &[0, 1]);
        let t = CancellationTriple {
            a: IntRootPoly::one(),
            b: IntRootPoly::one(),
            c: poly(&[2]),
        };
        assert!(verify_triple(&c, &t));
    }

    #[test]
    fn verify_rejects_shifted_root_run() {
        // The off-by-one variant of c fails the identity.
        let c = config(&[1, 0], &[0, 1]);
        let t = CancellationTriple {
            a: IntRootPoly::one(),
            b: IntRootPoly::one(),
            c: poly(&[1]),
        };
        assert!(!verify_triple(&c, &t));
    }

    #[test]
    fn verify_trivial_identity() {
        let c = config(&[2, 1], &[2, 1]);
        let t = CancellationTriple {
            a: IntRootPoly::one(),
            b: IntRootPoly::one(),
            c: IntRootPoly::one(),
        };
        assert!(verify_triple(&c, &t));
    }

    #[test]
    fn verify_rejects_violated_side_condition() {
        // f/g = (x-1)/(x-2) also equals a/b with a=(x-1), b=(x-2), c=1,
        // but that pair is not shift-coprime.
        let c = config(&[1, 0], &[0, 1]);
        let t = CancellationTriple {
            a: poly(&[1]),
            b: poly(&[2]),
            c: IntRootPoly::one(),
        };
        assert!(!verify_triple(&c, &t));
    }

    #[test]
    fn expand_small_polys() {
        assert_eq!(
            poly(&[2, 3]).expand(),
            vec![BigInt::from(6), BigInt::from(-5), BigInt::from(1)]
        );
        assert_eq!(IntRootPoly::one().expand(), vec![BigInt::from(1)]);
        assert_eq!(
            poly(&[1, 1]).expand(),
            vec![BigInt::from(1), BigInt::from(-2), BigInt::from(1)]
        );
    }

    fn random_config() -> impl Strategy<Value = RootConfig> {
        (1usize..8).prop_flat_map(|m| {
            (
                prop::collection::vec(0u64..4, m),
                prop::collection::vec(0u64..4, m),
            )
                .prop_map(|(a, b)| RootConfig::new(a, b).unwrap())
        })
    }

    proptest! {
        #[test]
        fn stack_triple_verifies_with_degree_beta(c in random_config()) {
            let beta = compute_walk(&c).unwrap().beta();
            let t = cancellation_from_matching(&stack_matching(&c)).unwrap();
            prop_assert_eq!(t.c.degree() as u64, beta);
            prop_assert!(verify_triple(&c, &t));
        }

        #[test]
        fn verdict_is_point_independent(c in random_config(), seed in 0u64..500) {
            let mut rng = substream(seed, 1);
            let matching = sample_admissible_matching(&c, &mut rng);
            let t = cancellation_from_matching(&matching).unwrap();
            let degree = identity_degree(&c, &t);
            let m = c.m() as i64;
            let default = verify_triple(&c, &t);
            let shifted = verify_triple_at(&c, &t, (0..=degree).map(|k| m + 7 + k as i64));
            let negative = verify_triple_at(&c, &t, (0..=degree).map(|k| -m - 1 - k as i64));
            prop_assert_eq!(default, shifted);
            prop_assert_eq!(default, negative);
            // Matchings built from admissible pairings always verify.
            prop_assert!(default);
        }
    }
}
