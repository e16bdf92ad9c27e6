//! Square matrices of strictly positive integers and the row/column
//! equivalence reduction used by the decision procedure.
//!
//! Indices are 1-based throughout the public API, matching the file formats
//! and the verdict serialization.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("empty input: expected the matrix size")]
    MissingSize,
    #[error("invalid token `{0}`: expected an integer")]
    InvalidToken(String),
    #[error("matrix size must be at least 1, got {0}")]
    BadSize(i64),
    #[error("expected {expected} entries for a {n}x{n} matrix, found {found}")]
    EntryCount {
        n: usize,
        expected: usize,
        found: usize,
    },
    #[error("entry ({row},{col}) is zero: only strictly positive matrices are supported")]
    ZeroEntry { row: usize, col: usize },
    #[error("entry ({row},{col}) is {value}: entries must be strictly positive")]
    NegativeEntry { row: usize, col: usize, value: i64 },
    #[error("trailing token `{0}` after the last matrix entry")]
    TrailingToken(String),
    #[error("invalid index set: {0}")]
    InvalidIndexSet(String),
    #[error("permutation {0:?} is not a bijection on 1..={1}")]
    InvalidPermutation(Vec<usize>, usize),
}

/// A square matrix of strictly positive integers; entry `(i, j)` is the
/// intended number of morphisms from object `i` to object `j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PosMatrix {
    n: usize,
    entries: Vec<u64>,
}

impl PosMatrix {
    /// Builds a matrix from row-major entries. Panics if the entry count is
    /// not `n*n` or any entry is zero; use [`PosMatrix::parse`] for
    /// untrusted input.
    pub fn new(n: usize, entries: Vec<u64>) -> Self {
        assert!(n >= 1, "matrix size must be at least 1");
        assert_eq!(entries.len(), n * n, "entry count must be n*n");
        assert!(
            entries.iter().all(|&e| e >= 1),
            "entries must be strictly positive"
        );
        PosMatrix { n, entries }
    }

    /// Convenience constructor from nested rows.
    pub fn from_rows(rows: &[&[u64]]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        PosMatrix::new(n, rows.concat())
    }

    /// Parses the matrix file format: `#`-comment lines, then the size `n`,
    /// then `n*n` whitespace-separated entries in row-major order.
    pub fn parse(text: &str) -> Result<Self, MatrixError> {
        let mut tokens = text
            .lines()
            .filter(|line| !line.trim_start().starts_with('#'))
            .flat_map(str::split_whitespace);

        let size_tok = tokens.next().ok_or(MatrixError::MissingSize)?;
        let size: i64 = size_tok
            .parse()
            .map_err(|_| MatrixError::InvalidToken(size_tok.to_string()))?;
        if size < 1 {
            return Err(MatrixError::BadSize(size));
        }
        let n = size as usize;

        let mut entries = Vec::with_capacity(n * n);
        for tok in tokens.by_ref() {
            if entries.len() == n * n {
                return Err(MatrixError::TrailingToken(tok.to_string()));
            }
            let value: i64 = tok
                .parse()
                .map_err(|_| MatrixError::InvalidToken(tok.to_string()))?;
            let row = entries.len() / n + 1;
            let col = entries.len() % n + 1;
            if value == 0 {
                return Err(MatrixError::ZeroEntry { row, col });
            }
            if value < 0 {
                return Err(MatrixError::NegativeEntry { row, col, value });
            }
            entries.push(value as u64);
        }
        if entries.len() != n * n {
            return Err(MatrixError::EntryCount {
                n,
                expected: n * n,
                found: entries.len(),
            });
        }
        Ok(PosMatrix { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry at row `i`, column `j` (1-based).
    pub fn entry(&self, i: usize, j: usize) -> u64 {
        debug_assert!(i >= 1 && i <= self.n && j >= 1 && j <= self.n);
        self.entries[(i - 1) * self.n + (j - 1)]
    }

    /// 1-based indices `i` with `entry(i, i) = 1`.
    pub fn diagonal_ones(&self) -> Vec<usize> {
        (1..=self.n).filter(|&i| self.entry(i, i) == 1).collect()
    }

    /// True iff row `i` equals row `j` and column `i` equals column `j`.
    pub fn indices_equivalent(&self, i: usize, j: usize) -> bool {
        (1..=self.n).all(|k| self.entry(k, i) == self.entry(k, j))
            && (1..=self.n).all(|k| self.entry(i, k) == self.entry(j, k))
    }

    /// True iff no two distinct indices are equivalent.
    pub fn is_reduced(&self) -> bool {
        (1..=self.n).all(|i| ((i + 1)..=self.n).all(|j| !self.indices_equivalent(i, j)))
    }

    /// Groups equivalent indices into classes, takes the minimum of each
    /// class as its representative, and restricts the matrix to the
    /// representatives. Classes are ordered by their representative, so the
    /// reduced matrix is a genuine principal submatrix.
    pub fn reduce(&self) -> Reduction {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut class_map = vec![0usize; self.n];
        for i in 1..=self.n {
            match classes
                .iter()
                .position(|class| self.indices_equivalent(class[0], i))
            {
                Some(a) => {
                    classes[a].push(i);
                    class_map[i - 1] = a + 1;
                }
                None => {
                    classes.push(vec![i]);
                    class_map[i - 1] = classes.len();
                }
            }
        }
        let representatives: Vec<usize> = classes.iter().map(|class| class[0]).collect();
        let reduced = self
            .principal_submatrix(&representatives)
            .expect("representatives form a valid index set");
        Reduction {
            classes,
            representatives,
            class_map,
            reduced,
        }
    }

    /// Restriction to the same subset of rows and columns. `idx` must be
    /// nonempty, strictly increasing, and within `1..=n`.
    pub fn principal_submatrix(&self, idx: &[usize]) -> Result<PosMatrix, MatrixError> {
        if idx.is_empty() {
            return Err(MatrixError::InvalidIndexSet("empty".to_string()));
        }
        if idx.windows(2).any(|w| w[0] >= w[1]) {
            return Err(MatrixError::InvalidIndexSet(format!(
                "{idx:?} is not strictly increasing"
            )));
        }
        if idx[0] < 1 || *idx.last().unwrap() > self.n {
            return Err(MatrixError::InvalidIndexSet(format!(
                "{idx:?} is out of range 1..={}",
                self.n
            )));
        }
        let m = idx.len();
        let mut entries = Vec::with_capacity(m * m);
        for &i in idx {
            for &j in idx {
                entries.push(self.entry(i, j));
            }
        }
        Ok(PosMatrix { n: m, entries })
    }

    /// Relabels indices: `output(i, j) = entry(perm(i), perm(j))`. `perm`
    /// must be a bijection on `1..=n` given as `perm[i-1] = perm(i)`.
    pub fn permute(&self, perm: &[usize]) -> Result<PosMatrix, MatrixError> {
        if !is_bijection(perm, self.n) {
            return Err(MatrixError::InvalidPermutation(perm.to_vec(), self.n));
        }
        let mut entries = Vec::with_capacity(self.n * self.n);
        for i in 1..=self.n {
            for j in 1..=self.n {
                entries.push(self.entry(perm[i - 1], perm[j - 1]));
            }
        }
        Ok(PosMatrix {
            n: self.n,
            entries,
        })
    }

    /// Sum of all entries: the total morphism count of any category
    /// realizing the matrix.
    pub fn total(&self) -> u64 {
        self.entries.iter().sum()
    }
}

pub(crate) fn is_bijection(perm: &[usize], n: usize) -> bool {
    if perm.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p < 1 || p > n || seen[p - 1] {
            return false;
        }
        seen[p - 1] = true;
    }
    true
}

impl fmt::Display for PosMatrix {
    /// Writes the matrix file format: `n`, then one line per row.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.n)?;
        for i in 1..=self.n {
            for j in 1..=self.n {
                if j > 1 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.entry(i, j))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Result of [`PosMatrix::reduce`]: the partition of indices into
/// equivalence classes and the matrix restricted to class representatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    /// Classes of mutually equivalent indices, each sorted ascending,
    /// ordered by their minimum element.
    pub classes: Vec<Vec<usize>>,
    /// `representatives[a-1]` is the minimum element of class `a`.
    pub representatives: Vec<usize>,
    /// `class_map[i-1]` is the 1-based class containing index `i`.
    pub class_map: Vec<usize>,
    /// The matrix restricted to the representatives.
    pub reduced: PosMatrix,
}

impl Reduction {
    /// Number of classes.
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// The class containing original index `i` (1-based).
    pub fn class_of(&self, i: usize) -> usize {
        self.class_map[i - 1]
    }

    /// The representative (minimum element) of class `a` (1-based).
    pub fn representative(&self, a: usize) -> usize {
        self.representatives[a - 1]
    }
}
