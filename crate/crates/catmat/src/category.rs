//! Finite categories and semicategories as explicit composition tables,
//! and the exhaustive verifier for the identity and associativity laws.
//!
//! Morphisms are addressed positionally: an object pair plus a 1-based
//! local index into that hom-set. Composition is written `g∘f` meaning
//! "`f` first, then `g`".

use std::fmt;

use thiserror::Error;

use crate::matrix::PosMatrix;

/// Hard cap on composition table cells, to fail cleanly instead of
/// exhausting memory on absurd inputs.
pub(crate) const MAX_TABLE_CELLS: u128 = 1 << 25;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CategoryError {
    #[error("hom({i},{j}) is empty: hom sizes must be strictly positive")]
    EmptyHom { i: usize, j: usize },
    #[error("composition table would need {cells} cells (maximum {MAX_TABLE_CELLS})")]
    TableTooLarge { cells: u128 },
    #[error("object {object} is out of range 1..={n}")]
    BadObject { object: usize, n: usize },
    #[error("object {object} has no two-sided identity")]
    MissingIdentity { object: usize },
    #[error("hom(1,1) must be the singleton identity, found {found} morphisms")]
    UnitNotSingleton { found: usize },
    #[error("matrix mismatch at ({i},{j}): expected {expected}, found {found}")]
    MatrixMismatch {
        i: usize,
        j: usize,
        expected: u64,
        found: u64,
    },
}

/// A morphism named by position: source object, target object, and 1-based
/// index within `hom(src, dst)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MorphId {
    pub src: usize,
    pub dst: usize,
    pub local: usize,
}

impl MorphId {
    pub fn new(src: usize, dst: usize, local: usize) -> Self {
        MorphId { src, dst, local }
    }
}

impl fmt::Display for MorphId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}[{}]", self.src, self.dst, self.local)
    }
}

/// Dense composition table: for every composable pair `(f: i→j, g: j→k)` a
/// result local index into `hom(i,k)`. Zero marks an unassigned cell, which
/// only partial tables (the search oracle) use.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Table {
    n: usize,
    sizes: Vec<u32>,
    offsets: Vec<usize>,
    vals: Vec<u32>,
}

impl Table {
    pub(crate) fn new(n: usize, sizes: &[usize]) -> Result<Table, CategoryError> {
        assert!(n >= 1 && sizes.len() == n * n);
        for i in 1..=n {
            for j in 1..=n {
                if sizes[(i - 1) * n + (j - 1)] == 0 {
                    return Err(CategoryError::EmptyHom { i, j });
                }
            }
        }
        let mut offsets = Vec::with_capacity(n * n * n);
        let mut cells: u128 = 0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    offsets.push(cells as usize);
                    cells += sizes[i * n + j] as u128 * sizes[j * n + k] as u128;
                    if cells > MAX_TABLE_CELLS {
                        return Err(CategoryError::TableTooLarge { cells });
                    }
                }
            }
        }
        Ok(Table {
            n,
            sizes: sizes.iter().map(|&s| s as u32).collect(),
            offsets,
            vals: vec![0; cells as usize],
        })
    }

    pub(crate) fn from_sizes_of(m: &PosMatrix) -> Result<Table, CategoryError> {
        let n = m.n();
        let mut sizes = Vec::with_capacity(n * n);
        for i in 1..=n {
            for j in 1..=n {
                let e = m.entry(i, j);
                if e as u128 > MAX_TABLE_CELLS {
                    return Err(CategoryError::TableTooLarge { cells: e as u128 });
                }
                sizes.push(e as usize);
            }
        }
        Table::new(n, &sizes)
    }

    #[inline]
    pub(crate) fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub(crate) fn size(&self, i: usize, j: usize) -> usize {
        self.sizes[(i - 1) * self.n + (j - 1)] as usize
    }

    #[inline]
    pub(crate) fn cell(&self, i: usize, j: usize, k: usize, f: usize, g: usize) -> usize {
        debug_assert!(f >= 1 && f <= self.size(i, j) && g >= 1 && g <= self.size(j, k));
        let block = ((i - 1) * self.n + (j - 1)) * self.n + (k - 1);
        self.offsets[block] + (f - 1) * self.size(j, k) + (g - 1)
    }

    #[inline]
    pub(crate) fn total_cells(&self) -> usize {
        self.vals.len()
    }

    /// Raw composite local for `g∘f` with `f ∈ hom(i,j)`, `g ∈ hom(j,k)`;
    /// zero if unassigned.
    #[inline]
    pub(crate) fn get(&self, i: usize, j: usize, k: usize, f: usize, g: usize) -> u32 {
        self.vals[self.cell(i, j, k, f, g)]
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, k: usize, f: usize, g: usize, result: u32) {
        let cell = self.cell(i, j, k, f, g);
        self.vals[cell] = result;
    }

    pub(crate) fn sizes_matrix(&self) -> PosMatrix {
        PosMatrix::new(self.n, self.sizes.iter().map(|&s| s as u64).collect())
    }

    /// Fills every composable pair from `comp`, asserting each result lies
    /// in the correct hom-set.
    pub(crate) fn fill(&mut self, comp: impl Fn(MorphId, MorphId) -> MorphId) {
        for i in 1..=self.n {
            for j in 1..=self.n {
                for k in 1..=self.n {
                    for f in 1..=self.size(i, j) {
                        for g in 1..=self.size(j, k) {
                            let r = comp(MorphId::new(j, k, g), MorphId::new(i, j, f));
                            assert!(
                                r.src == i && r.dst == k && r.local >= 1 && r.local <= self.size(i, k),
                                "composite of {} and {} must land in hom({i},{k}), got {r}",
                                MorphId::new(j, k, g),
                                MorphId::new(i, j, f),
                            );
                            self.set(i, j, k, f, g, r.local as u32);
                        }
                    }
                }
            }
        }
    }
}

/// Objects, positive hom-set sizes, and a total associative composition
/// table, without identities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemiCategory {
    pub(crate) table: Table,
}

/// A [`SemiCategory`] together with an identity morphism per object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinCategory {
    pub(crate) table: Table,
    pub(crate) ids: Vec<u32>,
}

impl SemiCategory {
    /// Builds a semicategory with `hom(i,j)` of size `size(i,j)` and every
    /// composite given by `comp(g, f)`. The laws are not checked here; run
    /// [`verify_semi`] for that.
    pub fn from_fn(
        n: usize,
        size: impl Fn(usize, usize) -> usize,
        comp: impl Fn(MorphId, MorphId) -> MorphId,
    ) -> Result<SemiCategory, CategoryError> {
        let mut sizes = Vec::with_capacity(n * n);
        for i in 1..=n {
            for j in 1..=n {
                sizes.push(size(i, j));
            }
        }
        let mut table = Table::new(n, &sizes)?;
        table.fill(comp);
        Ok(SemiCategory { table })
    }

    pub fn n(&self) -> usize {
        self.table.n()
    }

    pub fn hom_size(&self, i: usize, j: usize) -> usize {
        self.table.size(i, j)
    }

    /// `g∘f`: `f` first, then `g`. Panics if the pair is not composable.
    pub fn compose(&self, g: MorphId, f: MorphId) -> MorphId {
        compose_in(&self.table, g, f)
    }

    /// Entry `(i,j)` is `|hom(i,j)|`.
    pub fn matrix_of(&self) -> PosMatrix {
        self.table.sizes_matrix()
    }
}

impl FinCategory {
    /// Builds a category from explicit sizes, identity locals, and a
    /// composition function. The laws are not checked here; run [`verify`]
    /// for that.
    pub fn from_fn(
        n: usize,
        size: impl Fn(usize, usize) -> usize,
        identity: impl Fn(usize) -> usize,
        comp: impl Fn(MorphId, MorphId) -> MorphId,
    ) -> Result<FinCategory, CategoryError> {
        let semi = SemiCategory::from_fn(n, size, comp)?;
        let ids: Vec<u32> = (1..=n).map(|i| identity(i) as u32).collect();
        for (i, &id) in ids.iter().enumerate() {
            assert!(
                id >= 1 && id as usize <= semi.table.size(i + 1, i + 1),
                "identity local {id} out of range for hom({0},{0})",
                i + 1
            );
        }
        Ok(FinCategory {
            table: semi.table,
            ids,
        })
    }

    pub(crate) fn from_table(table: Table, ids: Vec<u32>) -> FinCategory {
        FinCategory { table, ids }
    }

    pub fn n(&self) -> usize {
        self.table.n()
    }

    pub fn hom_size(&self, i: usize, j: usize) -> usize {
        self.table.size(i, j)
    }

    /// The identity morphism at object `i`.
    pub fn identity(&self, i: usize) -> MorphId {
        MorphId::new(i, i, self.ids[i - 1] as usize)
    }

    /// `g∘f`: `f` first, then `g`. Panics if the pair is not composable.
    pub fn compose(&self, g: MorphId, f: MorphId) -> MorphId {
        compose_in(&self.table, g, f)
    }

    /// Entry `(i,j)` is `|hom(i,j)|`.
    pub fn matrix_of(&self) -> PosMatrix {
        self.table.sizes_matrix()
    }

    /// Total number of morphisms.
    pub fn total_morphisms(&self) -> u64 {
        self.matrix_of().total()
    }

    /// All morphisms in lexicographic `(src, dst, local)` order.
    pub fn morphisms(&self) -> impl Iterator<Item = MorphId> + '_ {
        let n = self.n();
        (1..=n).flat_map(move |i| {
            (1..=n).flat_map(move |j| {
                (1..=self.hom_size(i, j)).map(move |l| MorphId::new(i, j, l))
            })
        })
    }

    /// Overwrites a single composite. This can invalidate the category
    /// laws; it exists for fault injection against the verifier.
    pub fn override_composite(&mut self, g: MorphId, f: MorphId, result: MorphId) {
        assert!(f.dst == g.src && result.src == f.src && result.dst == g.dst);
        self.table
            .set(f.src, f.dst, g.dst, f.local, g.local, result.local as u32);
    }

    /// Drops the identity designations, viewing the category as a
    /// semicategory.
    pub fn as_semi(&self) -> SemiCategory {
        SemiCategory {
            table: self.table.clone(),
        }
    }
}

fn compose_in(table: &Table, g: MorphId, f: MorphId) -> MorphId {
    assert!(
        f.dst == g.src,
        "morphisms {g} and {f} are not composable as g∘f"
    );
    let local = table.get(f.src, f.dst, g.dst, f.local, g.local);
    debug_assert!(local >= 1, "composition table has an unassigned cell");
    MorphId::new(f.src, g.dst, local as usize)
}

/// One broken law instance found by the verifier.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Violation {
    /// `identity(f.dst)∘f ≠ f`.
    IdentityLeft { f: MorphId },
    /// `f∘identity(f.src) ≠ f`.
    IdentityRight { f: MorphId },
    /// `(h∘g)∘f ≠ h∘(g∘f)`; `left` and `right` are the two results.
    Associativity {
        h: MorphId,
        g: MorphId,
        f: MorphId,
        left: MorphId,
        right: MorphId,
    },
    /// The composite of `(g, f)` is unassigned or outside `hom(f.src, g.dst)`.
    Closure { g: MorphId, f: MorphId, result: usize },
    /// `|hom(i,j)|` disagrees with the expected matrix. An object-count
    /// mismatch is reported with `i = j = 0`.
    Cardinality {
        i: usize,
        j: usize,
        expected: u64,
        actual: u64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::IdentityLeft { f } => write!(out, "identity-left f={f}"),
            Violation::IdentityRight { f } => write!(out, "identity-right f={f}"),
            Violation::Associativity { h, g, f, left, right } => {
                write!(out, "associativity h={h} g={g} f={f} left={left} right={right}")
            }
            Violation::Closure { g, f, result } => write!(out, "closure g={g} f={f} result={result}"),
            Violation::Cardinality { i, j, expected, actual } => {
                write!(out, "cardinality i={i} j={j} expected={expected} actual={actual}")
            }
        }
    }
}

/// Outcome of verification: `ok` iff `violations` is empty. Violations are
/// sorted canonically, so reports are reproducible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok {
            writeln!(out, "ok")
        } else {
            for v in &self.violations {
                writeln!(out, "{v}")?;
            }
            Ok(())
        }
    }
}

/// Exhaustively checks closure, both identity laws, every associativity
/// triple, and (when given) hom-size agreement with `expected`.
pub fn verify(c: &FinCategory, expected: Option<&PosMatrix>) -> VerificationReport {
    run_checks(&c.table, Some(&c.ids), expected, false)
}

/// [`verify`] without the identity-law checks.
pub fn verify_semi(s: &SemiCategory, expected: Option<&PosMatrix>) -> VerificationReport {
    run_checks(&s.table, None, expected, false)
}

/// Fail-fast law check used internally by the search oracle.
pub(crate) fn laws_hold(table: &Table, ids: &[u32]) -> bool {
    run_checks(table, Some(ids), None, true).ok
}

fn run_checks(
    table: &Table,
    ids: Option<&[u32]>,
    expected: Option<&PosMatrix>,
    fail_fast: bool,
) -> VerificationReport {
    let n = table.n();
    let mut violations = Vec::new();

    macro_rules! report {
        ($v:expr) => {
            violations.push($v);
            if fail_fast {
                return VerificationReport {
                    ok: false,
                    violations,
                };
            }
        };
    }

    // Closure and totality.
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                for f in 1..=table.size(i, j) {
                    for g in 1..=table.size(j, k) {
                        let r = table.get(i, j, k, f, g) as usize;
                        if r < 1 || r > table.size(i, k) {
                            report!(Violation::Closure {
                                g: MorphId::new(j, k, g),
                                f: MorphId::new(i, j, f),
                                result: r,
                            });
                        }
                    }
                }
            }
        }
    }

    // Identity laws.
    if let Some(ids) = ids {
        for o in 1..=n {
            let id = ids[o - 1] as usize;
            for i in 1..=n {
                for f in 1..=table.size(i, o) {
                    let r = table.get(i, o, o, f, id) as usize;
                    if r >= 1 && r <= table.size(i, o) && r != f {
                        report!(Violation::IdentityLeft {
                            f: MorphId::new(i, o, f),
                        });
                    }
                }
            }
            for k in 1..=n {
                for f in 1..=table.size(o, k) {
                    let r = table.get(o, o, k, id, f) as usize;
                    if r >= 1 && r <= table.size(o, k) && r != f {
                        report!(Violation::IdentityRight {
                            f: MorphId::new(o, k, f),
                        });
                    }
                }
            }
        }
    }

    // Associativity over every composable triple.
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                for l in 1..=n {
                    let (sij, sjk, skl) = (table.size(i, j), table.size(j, k), table.size(k, l));
                    for f in 1..=sij {
                        for g in 1..=sjk {
                            let m1 = table.get(i, j, k, f, g) as usize;
                            if m1 < 1 || m1 > table.size(i, k) {
                                continue; // already a closure violation
                            }
                            for h in 1..=skl {
                                let m2 = table.get(j, k, l, g, h) as usize;
                                if m2 < 1 || m2 > table.size(j, l) {
                                    continue;
                                }
                                let lhs = table.get(i, j, l, f, m2) as usize;
                                let rhs = table.get(i, k, l, m1, h) as usize;
                                if lhs < 1
                                    || lhs > table.size(i, l)
                                    || rhs < 1
                                    || rhs > table.size(i, l)
                                {
                                    continue;
                                }
                                if lhs != rhs {
                                    report!(Violation::Associativity {
                                        h: MorphId::new(k, l, h),
                                        g: MorphId::new(j, k, g),
                                        f: MorphId::new(i, j, f),
                                        left: MorphId::new(i, l, lhs),
                                        right: MorphId::new(i, l, rhs),
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    // Hom-size agreement.
    if let Some(m) = expected {
        if m.n() != n {
            report!(Violation::Cardinality {
                i: 0,
                j: 0,
                expected: m.n() as u64,
                actual: n as u64,
            });
        } else {
            for i in 1..=n {
                for j in 1..=n {
                    let actual = table.size(i, j) as u64;
                    if m.entry(i, j) != actual {
                        report!(Violation::Cardinality {
                            i,
                            j,
                            expected: m.entry(i, j),
                            actual,
                        });
                    }
                }
            }
        }
    }

    violations.sort_unstable();
    VerificationReport {
        ok: violations.is_empty(),
        violations,
    }
}

/// Adjoins a fresh identity at each object in `objects`, extending
/// composition by the identity laws. The new identity takes local index 1;
/// existing morphisms in that hom-set shift up by one. Objects not listed
/// must already contain a two-sided identity, which stays designated.
pub fn add_identities(s: &SemiCategory, objects: &[usize]) -> Result<FinCategory, CategoryError> {
    let n = s.n();
    let mut fresh = vec![false; n + 1];
    for &o in objects {
        if o < 1 || o > n {
            return Err(CategoryError::BadObject { object: o, n });
        }
        fresh[o] = true;
    }

    let mut ids = vec![0u32; n];
    for o in 1..=n {
        if fresh[o] {
            ids[o - 1] = 1;
        } else {
            ids[o - 1] = find_two_sided_identity(&s.table, o)
                .ok_or(CategoryError::MissingIdentity { object: o })? as u32;
        }
    }

    let size = |i: usize, j: usize| s.table.size(i, j) + usize::from(i == j && fresh[i]);
    let shift = |i: usize, j: usize, local: usize| {
        local + usize::from(i == j && fresh[i])
    };
    let comp = |g: MorphId, f: MorphId| {
        let f_is_new = f.src == f.dst && fresh[f.src] && f.local == 1;
        let g_is_new = g.src == g.dst && fresh[g.src] && g.local == 1;
        match (f_is_new, g_is_new) {
            (true, _) => g,
            (false, true) => f,
            (false, false) => {
                let old_f = f.local - usize::from(f.src == f.dst && fresh[f.src]);
                let old_g = g.local - usize::from(g.src == g.dst && fresh[g.src]);
                let r = s.table.get(f.src, f.dst, g.dst, old_f, old_g) as usize;
                MorphId::new(f.src, g.dst, shift(f.src, g.dst, r))
            }
        }
    };
    FinCategory::from_fn(n, size, |i| ids[i - 1] as usize, comp)
}

fn find_two_sided_identity(table: &Table, o: usize) -> Option<usize> {
    let n = table.n();
    (1..=table.size(o, o)).find(|&u| {
        (1..=n).all(|i| (1..=table.size(i, o)).all(|f| table.get(i, o, o, f, u) == f as u32))
            && (1..=n).all(|k| (1..=table.size(o, k)).all(|g| table.get(o, o, k, u, g) == g as u32))
    })
}
