//! Explicit witness categories for every realizable matrix.
//!
//! The one-unit construction encodes every morphism that factors through
//! the unit object by an optional out-index (which arrow leaves the unit)
//! and an optional in-index (which arrow enters it); composition keeps the
//! out-index of the left factor and the in-index of the right factor, and a
//! composite with no remaining parts is the unit itself. Extra morphisms
//! absorb into that core: used on the left they act as the (1,1) core
//! element of their hom-set, on the right as the maximal one, except that a
//! diagonal extra composed with itself is itself.

use std::fmt;

use thiserror::Error;

use crate::category::{
    add_identities, CategoryError, FinCategory, MorphId, SemiCategory, MAX_TABLE_CELLS,
};
use crate::decide::{decide, Reason, Route, Verdict};
use crate::matrix::{PosMatrix, Reduction};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructError {
    #[error("matrix is not realizable ({0})")]
    NotRealizable(Reason),
    #[error("entry (1,1) must be 1, found {found}")]
    UnitEntryNotOne { found: u64 },
    #[error("diagonal entry ({i},{i}) must be at least 2, found {found}")]
    DiagTooSmall { i: usize, found: u64 },
    #[error("negative extra count s({i}) = {count}: entry({i},{i}) <= entry(1,{i})*entry({i},1)")]
    NegativeDiagExtra { i: usize, count: i64 },
    #[error("negative extra count t({i},{j}) = {count}: entry({i},{j}) < entry({i},1)*entry(1,{j})")]
    NegativeOffdiagExtra { i: usize, j: usize, count: i64 },
    #[error("unit count z must be at least 1, got {0}")]
    BadUnitCount(u64),
    #[error("matrix entries are too large to materialize")]
    EntriesTooLarge,
    #[error(transparent)]
    Category(#[from] CategoryError),
}

/// Counts of morphisms the one-unit core leaves to fill: `s(i)` extra
/// endomorphisms at object `i >= 2` (beyond the core and the identity) and
/// `t(i,j)` extra morphisms from `i` to `j` for distinct `i, j >= 2`. All
/// counts are nonnegative exactly when the one-unit criterion holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtraCounts {
    n: usize,
    s: Vec<i64>,
    t: Vec<i64>,
}

impl ExtraCounts {
    pub fn from_matrix(m: &PosMatrix) -> Result<ExtraCounts, ConstructError> {
        let n = m.n();
        // Entries are capped so every product below fits in i64.
        for i in 1..=n {
            for j in 1..=n {
                if m.entry(i, j) > 1 << 31 {
                    return Err(ConstructError::EntriesTooLarge);
                }
            }
        }
        let mut s = vec![0i64; n + 1];
        let mut t = vec![0i64; (n + 1) * (n + 1)];
        for i in 2..=n {
            s[i] = m.entry(i, i) as i64 - (m.entry(1, i) * m.entry(i, 1)) as i64 - 1;
            for j in (2..=n).filter(|&j| j != i) {
                t[i * (n + 1) + j] =
                    m.entry(i, j) as i64 - (m.entry(i, 1) * m.entry(1, j)) as i64;
            }
        }
        Ok(ExtraCounts { n, s, t })
    }

    /// Extra endomorphisms at object `i` (valid for `2 <= i <= n`).
    pub fn s(&self, i: usize) -> i64 {
        debug_assert!((2..=self.n).contains(&i));
        self.s[i]
    }

    /// Extra morphisms from `i` to `j` (valid for distinct `i, j >= 2`).
    pub fn t(&self, i: usize, j: usize) -> i64 {
        debug_assert!((2..=self.n).contains(&i) && (2..=self.n).contains(&j) && i != j);
        self.t[i * (self.n + 1) + j]
    }

    pub fn all_nonnegative(&self) -> bool {
        self.first_negative().is_none()
    }

    /// The first negative count in scan order: `s(2..n)`, then `t` rows.
    pub fn first_negative(&self) -> Option<ConstructError> {
        for i in 2..=self.n {
            if self.s(i) < 0 {
                return Some(ConstructError::NegativeDiagExtra {
                    i,
                    count: self.s(i),
                });
            }
        }
        for i in 2..=self.n {
            for j in (2..=self.n).filter(|&j| j != i) {
                if self.t(i, j) < 0 {
                    return Some(ConstructError::NegativeOffdiagExtra {
                        i,
                        j,
                        count: self.t(i, j),
                    });
                }
            }
        }
        None
    }
}

impl fmt::Display for ExtraCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s=[")?;
        for i in 2..=self.n {
            if i > 2 {
                write!(f, ",")?;
            }
            write!(f, "{}", self.s(i))?;
        }
        write!(f, "] t=[")?;
        let mut first = true;
        for i in 2..=self.n {
            for j in (2..=self.n).filter(|&j| j != i) {
                if !first {
                    write!(f, ",")?;
                }
                first = false;
                write!(f, "({i},{j})={}", self.t(i, j))?;
            }
        }
        write!(f, "]")
    }
}

/// Realizes any matrix whose diagonal entries are all at least 2: every
/// composite of non-identity morphisms with source `i` and target `k` is
/// the same distinguished morphism of `hom(i,k)`.
pub fn construct_leinster(m: &PosMatrix) -> Result<FinCategory, ConstructError> {
    let n = m.n();
    for i in 1..=n {
        if m.entry(i, i) < 2 {
            return Err(ConstructError::DiagTooSmall {
                i,
                found: m.entry(i, i),
            });
        }
    }
    let size = |i: usize, j: usize| (m.entry(i, j) as usize) - usize::from(i == j);
    let semi = SemiCategory::from_fn(n, size, |g, f| MorphId::new(f.src, g.dst, 1))?;
    let all: Vec<usize> = (1..=n).collect();
    Ok(add_identities(&semi, &all)?)
}

/// Morphism roles in the one-unit core, in semicategory-local numbering
/// (identities not yet inserted).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Part {
    /// The unit: the sole element of hom(1,1).
    Unit,
    /// hom(1,j): an arrow leaving the unit object, out-index `out`.
    Out { out: usize },
    /// hom(i,1): an arrow entering the unit object, in-index `in_`.
    In { in_: usize },
    /// hom(i,j), i,j >= 2: factors as (arrow out of the unit, index `out`)
    /// after (arrow into the unit, index `in_`).
    Core { out: usize, in_: usize },
    /// An adjoined morphism beyond the core.
    Extra,
}

struct OneUnitLayout<'a> {
    m: &'a PosMatrix,
}

impl OneUnitLayout<'_> {
    fn in_max(&self, i: usize) -> usize {
        self.m.entry(i, 1) as usize
    }

    fn out_max(&self, j: usize) -> usize {
        self.m.entry(1, j) as usize
    }

    fn core_size(&self, i: usize, j: usize) -> usize {
        self.out_max(j) * self.in_max(i)
    }

    fn classify(&self, mor: MorphId) -> Part {
        match (mor.src, mor.dst) {
            (1, 1) => Part::Unit,
            (1, _) => Part::Out { out: mor.local },
            (_, 1) => Part::In { in_: mor.local },
            (i, j) => {
                let core = self.core_size(i, j);
                if mor.local <= core {
                    Part::Core {
                        out: (mor.local - 1) / self.in_max(i) + 1,
                        in_: (mor.local - 1) % self.in_max(i) + 1,
                    }
                } else {
                    Part::Extra
                }
            }
        }
    }

    fn core_local(&self, i: usize, out: usize, in_: usize) -> usize {
        (out - 1) * self.in_max(i) + in_
    }

    /// `g∘f` in the core-plus-extras semicategory.
    fn compose(&self, g: MorphId, f: MorphId) -> MorphId {
        debug_assert_eq!(f.dst, g.src);
        let fp = self.classify(f);
        let gp = self.classify(g);
        // A diagonal extra squared is itself.
        if f == g && fp == Part::Extra {
            return f;
        }
        // Absorption: an extra acts as its hom-set's (1,1) core element on
        // the left and as the maximal one on the right.
        let right = match fp {
            Part::Extra => Part::Core {
                out: self.out_max(f.dst),
                in_: self.in_max(f.src),
            },
            p => p,
        };
        let left = match gp {
            Part::Extra => Part::Core { out: 1, in_: 1 },
            p => p,
        };
        let out = match left {
            Part::Out { out } | Part::Core { out, .. } => Some(out),
            _ => None,
        };
        let in_ = match right {
            Part::In { in_ } | Part::Core { in_, .. } => Some(in_),
            _ => None,
        };
        let local = match (f.src, g.dst) {
            (1, 1) => 1,
            (1, _) => out.expect("arrow out of the unit has an out-index"),
            (_, 1) => in_.expect("arrow into the unit has an in-index"),
            (i, _) => self.core_local(i, out.unwrap(), in_.unwrap()),
        };
        MorphId::new(f.src, g.dst, local)
    }
}

/// Realizes a matrix with `entry(1,1) = 1` satisfying the one-unit
/// criterion: the indexed core, the absorbed extras, then free identities
/// at every object except the unit.
pub fn construct_one_unit(m: &PosMatrix) -> Result<FinCategory, ConstructError> {
    if m.entry(1, 1) != 1 {
        return Err(ConstructError::UnitEntryNotOne {
            found: m.entry(1, 1),
        });
    }
    let counts = ExtraCounts::from_matrix(m)?;
    if let Some(err) = counts.first_negative() {
        return Err(err);
    }
    let n = m.n();
    let layout = OneUnitLayout { m };
    let size = |i: usize, j: usize| match (i, j) {
        (1, 1) => 1,
        (1, j) => layout.out_max(j),
        (i, 1) => layout.in_max(i),
        (i, j) if i == j => layout.core_size(i, j) + counts.s(i) as usize,
        (i, j) => layout.core_size(i, j) + counts.t(i, j) as usize,
    };
    let semi = SemiCategory::from_fn(n, size, |g, f| layout.compose(g, f))?;
    let rest: Vec<usize> = (2..=n).collect();
    Ok(add_identities(&semi, &rest)?)
}

/// Grows `hom(1,1)` from the singleton identity to `z` morphisms. The
/// identity stays designated; each new morphism acts as the identity on
/// arrows through the unit object, is idempotent, and the product of two
/// distinct new morphisms is the first of them. Composites that previously
/// collapsed to the identity through the unit land on the first new
/// morphism instead, which is what keeps the extended table associative.
pub fn augment_unit(c: &FinCategory, z: u64) -> Result<FinCategory, ConstructError> {
    if z < 1 {
        return Err(ConstructError::BadUnitCount(z));
    }
    if c.hom_size(1, 1) != 1 {
        return Err(ConstructError::Category(CategoryError::UnitNotSingleton {
            found: c.hom_size(1, 1),
        }));
    }
    if z == 1 {
        return Ok(c.clone());
    }
    if z > MAX_TABLE_CELLS as u64 {
        return Err(ConstructError::EntriesTooLarge);
    }
    let n = c.n();
    let z = z as usize;
    let size = |i: usize, j: usize| {
        if (i, j) == (1, 1) {
            z
        } else {
            c.hom_size(i, j)
        }
    };
    let unit = MorphId::new(1, 1, 1);
    let comp = move |g: MorphId, f: MorphId| {
        if f.src == 1 && f.dst == 1 {
            if f == unit {
                return g; // g∘id
            }
            // f is some n_t.
            if g.dst == 1 {
                // g is in hom(1,1) too.
                return if g == unit || g == f {
                    f // id∘n_t and n_t∘n_t
                } else {
                    MorphId::new(1, 1, 2) // n_s∘n_t = n_1
                };
            }
            return g; // w∘n_t = w
        }
        if g.src == 1 && g.dst == 1 {
            if g == unit {
                return f; // id∘f
            }
            return f; // n_t∘v = v
        }
        if f.src == 1 && g.dst == 1 {
            // Through the unit object: previously forced to the identity,
            // now the first new morphism.
            return MorphId::new(1, 1, 2);
        }
        let r = c.compose(g, f);
        MorphId::new(f.src, g.dst, r.local)
    };
    Ok(FinCategory::from_fn(
        n,
        size,
        |i| c.identity(i).local,
        comp,
    )?)
}

/// Inflates a witness for the reduced matrix back to the full index set:
/// `hom(i,j)` is a tagged copy of the reduced witness's
/// `hom(class(i), class(j))` with composition and identities inherited
/// componentwise. Objects merged by the reduction come out isomorphic.
pub fn expand_reduced(b: &FinCategory, red: &Reduction) -> Result<FinCategory, ConstructError> {
    let got = b.matrix_of();
    if got != red.reduced {
        let n = red.reduced.n();
        if got.n() != n {
            return Err(ConstructError::Category(CategoryError::MatrixMismatch {
                i: 0,
                j: 0,
                expected: n as u64,
                found: got.n() as u64,
            }));
        }
        for i in 1..=n {
            for j in 1..=n {
                if got.entry(i, j) != red.reduced.entry(i, j) {
                    return Err(ConstructError::Category(CategoryError::MatrixMismatch {
                        i,
                        j,
                        expected: red.reduced.entry(i, j),
                        found: got.entry(i, j),
                    }));
                }
            }
        }
    }
    let n = red.class_map.len();
    let class = |i: usize| red.class_of(i);
    Ok(FinCategory::from_fn(
        n,
        |i, j| b.hom_size(class(i), class(j)),
        |i| b.identity(class(i)).local,
        |g, f| {
            let r = b.compose(
                MorphId::new(class(g.src), class(g.dst), g.local),
                MorphId::new(class(f.src), class(f.dst), f.local),
            );
            MorphId::new(f.src, g.dst, r.local)
        },
    )?)
}

/// The permutation placing object `k` first and keeping the rest in order.
pub(crate) fn unit_first_permutation(k: usize, n: usize) -> Vec<usize> {
    let mut perm = Vec::with_capacity(n);
    perm.push(k);
    perm.extend((1..=n).filter(|&i| i != k));
    perm
}

/// Renames objects of a category built for `m.permute(perm)` so its matrix
/// becomes `m` itself.
fn relabel_objects(c: &FinCategory, perm: &[usize]) -> FinCategory {
    let n = c.n();
    let mut inv = vec![0usize; n];
    for (a, &p) in perm.iter().enumerate() {
        inv[p - 1] = a + 1;
    }
    let map = |o: usize| inv[o - 1];
    FinCategory::from_fn(
        n,
        |i, j| c.hom_size(map(i), map(j)),
        |i| c.identity(map(i)).local,
        |g, f| {
            let r = c.compose(
                MorphId::new(map(g.src), map(g.dst), g.local),
                MorphId::new(map(f.src), map(f.dst), f.local),
            );
            MorphId::new(f.src, g.dst, r.local)
        },
    )
    .expect("relabeling preserves sizes")
}

/// Builds a witness category for any realizable matrix by following the
/// verdict's route. Errs with the refutation reason otherwise.
pub fn construct_witness(m: &PosMatrix) -> Result<FinCategory, ConstructError> {
    match decide(m) {
        Verdict::NotRealizable(reason) => Err(ConstructError::NotRealizable(reason)),
        Verdict::Realizable(route) => build_route(m, &route),
    }
}

fn build_route(m: &PosMatrix, route: &Route) -> Result<FinCategory, ConstructError> {
    match route {
        Route::Trivial => Ok(FinCategory::from_fn(1, |_, _| 1, |_| 1, |_, _| {
            MorphId::new(1, 1, 1)
        })?),
        Route::Leinster => construct_leinster(m),
        Route::OneUnit => {
            let ones = m.diagonal_ones();
            debug_assert_eq!(ones.len(), 1);
            let perm = unit_first_permutation(ones[0], m.n());
            let normalized = m.permute(&perm).expect("unit-first permutation is valid");
            let c = construct_one_unit(&normalized)?;
            Ok(relabel_objects(&c, &perm))
        }
        Route::ReduceThen(inner) => {
            let red = m.reduce();
            let b = build_route(&red.reduced, inner)?;
            expand_reduced(&b, &red)
        }
    }
}

/// Human-readable name of the construction behind a route, for witness
/// file comments.
pub fn route_summary(route: &Route) -> String {
    match route {
        Route::Trivial => "single object with only its identity".to_string(),
        Route::Leinster => "constant composition with free identities".to_string(),
        Route::OneUnit => "indexed core around the unit object".to_string(),
        Route::ReduceThen(inner) => {
            format!("expansion of a reduced witness: {}", route_summary(inner))
        }
    }
}
