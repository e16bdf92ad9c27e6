//! The characterization: whether any finite category has the given matrix
//! of hom-set sizes, answered from the matrix alone with a machine-readable
//! construction route or refutation reason.

use std::fmt;

use thiserror::Error;

use crate::matrix::{MatrixError, PosMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecideError {
    #[error("submatrix cross-check needs size >= 3, got {0}")]
    TooSmall(usize),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// How a realizable matrix gets its witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Route {
    /// The one-object, one-morphism category.
    Trivial,
    /// Constant-composition category; every diagonal entry is at least 2.
    Leinster,
    /// Indexed construction around the unique diagonal-1 object.
    OneUnit,
    /// Merge equivalent indices, realize the reduced matrix, expand back.
    ReduceThen(Box<Route>),
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Route::Trivial => write!(f, "trivial"),
            Route::Leinster => write!(f, "leinster"),
            Route::OneUnit => write!(f, "one_unit"),
            Route::ReduceThen(inner) => write!(f, "reduce_then({inner})"),
        }
    }
}

/// The specific violated condition, with the smallest witnessing indices.
/// All indices refer to the input matrix (reduction-internal indices are
/// translated back through class representatives).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reason {
    /// `entry(i,i) <= entry(i,k) * entry(k,i)` where `entry(k,k) = 1`.
    DiagViolation { i: usize, k: usize },
    /// `entry(i,j) < entry(i,k) * entry(k,j)` where `entry(k,k) = 1`.
    OffdiagViolation { i: usize, j: usize, k: usize },
    /// The reduced matrix keeps diagonal 1s at two distinct indices.
    ReducedTwoUnits { i: usize, j: usize },
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reason::DiagViolation { i, k } => write!(f, "reason=diag_violation i={i} k={k}"),
            Reason::OffdiagViolation { i, j, k } => {
                write!(f, "reason=offdiag_violation i={i} j={j} k={k}")
            }
            Reason::ReducedTwoUnits { i, j } => write!(f, "reason=reduced_two_units i={i} j={j}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Realizable(Route),
    NotRealizable(Reason),
}

impl Verdict {
    pub fn is_realizable(&self) -> bool {
        matches!(self, Verdict::Realizable(_))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Realizable(route) => write!(f, "REALIZABLE route={route}"),
            Verdict::NotRealizable(reason) => write!(f, "NOT_REALIZABLE {reason}"),
        }
    }
}

/// Decides whether any finite category has hom-set sizes `m`.
///
/// Dispatch on the set `D` of diagonal-1 indices: empty means the
/// constant-composition construction applies; a singleton `{k}` is decided
/// by the one-unit criterion (`entry(i,i) > entry(i,k)·entry(k,i)` for all
/// `i ≠ k` and `entry(i,j) ≥ entry(i,k)·entry(k,j)` for all `i ≠ j` away
/// from `k`); two or more diagonal 1s survive in the reduced matrix exactly
/// when the matrix is refuted, and otherwise the answer is the reduced
/// matrix's, wrapped in [`Route::ReduceThen`].
pub fn decide(m: &PosMatrix) -> Verdict {
    let n = m.n();
    if n == 1 {
        return if m.entry(1, 1) == 1 {
            Verdict::Realizable(Route::Trivial)
        } else {
            Verdict::Realizable(Route::Leinster)
        };
    }

    let ones = m.diagonal_ones();
    match ones.as_slice() {
        [] => Verdict::Realizable(Route::Leinster),
        [k] => decide_one_unit(m, *k),
        _ => {
            let red = m.reduce();
            let reduced_ones = red.reduced.diagonal_ones();
            if reduced_ones.len() >= 2 {
                return Verdict::NotRealizable(Reason::ReducedTwoUnits {
                    i: red.representative(reduced_ones[0]),
                    j: red.representative(reduced_ones[1]),
                });
            }
            match decide(&red.reduced) {
                Verdict::Realizable(route) => {
                    Verdict::Realizable(Route::ReduceThen(Box::new(route)))
                }
                Verdict::NotRealizable(reason) => {
                    // Translate class indices back to representatives; the
                    // violated inequality holds verbatim in the original.
                    let r = |a: usize| red.representative(a);
                    Verdict::NotRealizable(match reason {
                        Reason::DiagViolation { i, k } => Reason::DiagViolation { i: r(i), k: r(k) },
                        Reason::OffdiagViolation { i, j, k } => Reason::OffdiagViolation {
                            i: r(i),
                            j: r(j),
                            k: r(k),
                        },
                        Reason::ReducedTwoUnits { i, j } => {
                            Reason::ReducedTwoUnits { i: r(i), j: r(j) }
                        }
                    })
                }
            }
        }
    }
}

fn decide_one_unit(m: &PosMatrix, k: usize) -> Verdict {
    let n = m.n();
    for i in (1..=n).filter(|&i| i != k) {
        if m.entry(i, i) <= m.entry(i, k) * m.entry(k, i) {
            return Verdict::NotRealizable(Reason::DiagViolation { i, k });
        }
    }
    for i in (1..=n).filter(|&i| i != k) {
        for j in (1..=n).filter(|&j| j != k && j != i) {
            if m.entry(i, j) < m.entry(i, k) * m.entry(k, j) {
                return Verdict::NotRealizable(Reason::OffdiagViolation { i, j, k });
            }
        }
    }
    Verdict::Realizable(Route::OneUnit)
}

/// Conjunction of `decide` over all 3-element principal submatrices.
/// Realizability of the whole matrix is determined by these.
pub fn check_by_submatrices(m: &PosMatrix) -> Result<bool, DecideError> {
    let n = m.n();
    if n < 3 {
        return Err(DecideError::TooSmall(n));
    }
    for a in 1..=n {
        for b in (a + 1)..=n {
            for c in (b + 1)..=n {
                let sub = m.principal_submatrix(&[a, b, c])?;
                if !decide(&sub).is_realizable() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::tests::arb_matrix;
    use proptest::prelude::*;

    fn m(rows: &[&[u64]]) -> PosMatrix {
        PosMatrix::from_rows(rows)
    }

    #[test]
    fn flagship_negative() {
        assert_eq!(
            decide(&m(&[&[2, 2], &[1, 1]])),
            Verdict::NotRealizable(Reason::DiagViolation { i: 1, k: 2 })
        );
    }

    #[test]
    fn two_by_two_examples() {
        assert_eq!(
            decide(&m(&[&[3, 1], &[2, 1]])),
            Verdict::Realizable(Route::OneUnit)
        );
        assert_eq!(
            decide(&m(&[&[1, 1], &[1, 1]])),
            Verdict::Realizable(Route::ReduceThen(Box::new(Route::Trivial)))
        );
        assert_eq!(
            decide(&m(&[&[1, 2], &[2, 2]])),
            Verdict::NotRealizable(Reason::DiagViolation { i: 2, k: 1 })
        );
    }

    #[test]
    fn three_by_three_examples() {
        assert_eq!(
            decide(&m(&[&[1, 2, 2], &[2, 5, 4], &[2, 4, 5]])),
            Verdict::Realizable(Route::OneUnit)
        );
        assert_eq!(
            decide(&m(&[&[1, 2, 2], &[2, 4, 4], &[2, 4, 5]])),
            Verdict::NotRealizable(Reason::DiagViolation { i: 2, k: 1 })
        );
    }

    #[test]
    fn offdiag_violation_reports_smallest_indices() {
        // k = 1; entry(2,3) = 1 < entry(2,1)*entry(1,3) = 4.
        assert_eq!(
            decide(&m(&[&[1, 2, 2], &[2, 5, 1], &[2, 4, 5]])),
            Verdict::NotRealizable(Reason::OffdiagViolation { i: 2, j: 3, k: 1 })
        );
    }

    #[test]
    fn reduced_two_units() {
        assert_eq!(
            decide(&m(&[&[1, 2], &[2, 1]])),
            Verdict::NotRealizable(Reason::ReducedTwoUnits { i: 1, j: 2 })
        );
        // Non-reduced with mergeable units: [[1,1],[1,1]] reduces to [1].
        assert!(decide(&m(&[&[1, 1], &[1, 1]])).is_realizable());
        // Four objects, two merged pairs, still two units after reduction.
        let a = m(&[
            &[1, 1, 2, 2],
            &[1, 1, 2, 2],
            &[3, 3, 1, 1],
            &[3, 3, 1, 1],
        ]);
        assert_eq!(
            decide(&a),
            Verdict::NotRealizable(Reason::ReducedTwoUnits { i: 1, j: 3 })
        );
    }

    #[test]
    fn reduce_then_one_unit() {
        let a = m(&[&[1, 1, 2], &[1, 1, 2], &[2, 2, 5]]);
        assert_eq!(
            decide(&a),
            Verdict::Realizable(Route::ReduceThen(Box::new(Route::OneUnit)))
        );
    }

    #[test]
    fn reduction_translates_violation_indices() {
        // Classes {1,2}, {3}; reduced [[1,2],[2,2]] has a diagonal
        // violation at reduced index 2, i.e. original index 3.
        let a = m(&[&[1, 1, 2], &[1, 1, 2], &[2, 2, 2]]);
        assert_eq!(
            decide(&a),
            Verdict::NotRealizable(Reason::DiagViolation { i: 3, k: 1 })
        );
    }

    #[test]
    fn single_object_routes() {
        assert_eq!(decide(&m(&[&[1]])), Verdict::Realizable(Route::Trivial));
        assert_eq!(decide(&m(&[&[5]])), Verdict::Realizable(Route::Leinster));
    }

    #[test]
    fn verdict_serialization() {
        assert_eq!(
            decide(&m(&[&[2, 2], &[1, 1]])).to_string(),
            "NOT_REALIZABLE reason=diag_violation i=1 k=2"
        );
        assert_eq!(decide(&m(&[&[1]])).to_string(), "REALIZABLE route=trivial");
        assert_eq!(
            decide(&m(&[&[1, 1], &[1, 1]])).to_string(),
            "REALIZABLE route=reduce_then(trivial)"
        );
        assert_eq!(
            decide(&m(&[&[1, 2, 2], &[2, 5, 1], &[2, 4, 5]])).to_string(),
            "NOT_REALIZABLE reason=offdiag_violation i=2 j=3 k=1"
        );
        assert_eq!(
            decide(&m(&[&[1, 2], &[2, 1]])).to_string(),
            "NOT_REALIZABLE reason=reduced_two_units i=1 j=2"
        );
    }

    /// The four-case closed form for 2x2 matrices.
    fn closed_form_2x2(a: u64, b: u64, c: u64, d: u64) -> bool {
        (a == 1 && b == 1 && c == 1 && d == 1)
            || (a == 1 && d > b * c)
            || (d == 1 && a > b * c)
            || (a > 1 && d > 1)
    }

    #[test]
    fn two_by_two_closed_form_exhaustive() {
        for a in 1..=4u64 {
            for b in 1..=4u64 {
                for c in 1..=4u64 {
                    for d in 1..=4u64 {
                        let verdict = decide(&m(&[&[a, b], &[c, d]]));
                        assert_eq!(
                            verdict.is_realizable(),
                            closed_form_2x2(a, b, c, d),
                            "mismatch at [[{a},{b}],[{c},{d}]]: {verdict}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn check_by_submatrices_examples() {
        assert!(check_by_submatrices(&m(&[&[1, 2, 2], &[2, 5, 4], &[2, 4, 5]])).unwrap());
        // A diagonal violation survives restriction to any triple holding
        // both of its indices.
        assert!(!check_by_submatrices(&m(&[&[1, 2, 2], &[2, 4, 4], &[2, 4, 5]])).unwrap());
        assert_eq!(
            check_by_submatrices(&m(&[&[1, 1], &[1, 1]])).unwrap_err(),
            DecideError::TooSmall(2)
        );
    }

    #[test]
    fn equivariance_exhaustive_n3() {
        // All 3x3 matrices with entries in {1,2}, under all 6 permutations.
        let perms: [[usize; 3]; 6] = [
            [1, 2, 3],
            [1, 3, 2],
            [2, 1, 3],
            [2, 3, 1],
            [3, 1, 2],
            [3, 2, 1],
        ];
        for bits in 0..(1u32 << 9) {
            let entries: Vec<u64> = (0..9).map(|b| 1 + ((bits >> b) & 1) as u64).collect();
            let mat = PosMatrix::new(3, entries);
            let expected = decide(&mat).is_realizable();
            for p in &perms {
                let permuted = mat.permute(p).unwrap();
                assert_eq!(decide(&permuted).is_realizable(), expected);
            }
        }
    }

    proptest! {
        #[test]
        fn equivariance_random(mat in arb_matrix(4, 3), seed in any::<u64>()) {
            let n = mat.n();
            let mut perm: Vec<usize> = (1..=n).collect();
            // Fisher-Yates driven by the seed.
            let mut state = seed | 1;
            for i in (1..n).rev() {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let j = (state >> 33) as usize % (i + 1);
                perm.swap(i, j);
            }
            let permuted = mat.permute(&perm).unwrap();
            prop_assert_eq!(decide(&permuted).is_realizable(), decide(&mat).is_realizable());
        }

        #[test]
        fn reduction_preserves_the_answer(mat in arb_matrix(5, 3)) {
            let red = mat.reduce();
            prop_assert_eq!(
                decide(&mat).is_realizable(),
                decide(&red.reduced).is_realizable()
            );
        }
    }
}
