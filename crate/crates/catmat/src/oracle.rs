//! Ground truth by exhaustive search: enumerate every composition table
//! with the given hom-set sizes, pruning with incremental associativity
//! checks, and report a witness, a complete refutation, or budget
//! exhaustion.
//!
//! The only symmetry used is pinning the identity of each `hom(i,i)` to
//! local index 1, which any category admits by relabeling within hom-sets,
//! so `Exhausted` really means no category with those sizes exists.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use crate::category::{laws_hold, verify, FinCategory, Table};
use crate::decide::{decide, Verdict};
use crate::matrix::PosMatrix;

/// Search limits and strategy knobs.
#[derive(Debug, Clone)]
pub struct SearchConfig {
    /// Maximum number of value assignments before giving up.
    pub node_budget: u64,
    /// Verify found candidates with the early-exit law check instead of a
    /// full report. Classification is unaffected.
    pub fail_fast: bool,
    /// Number of top-level branches explored concurrently; 1 is
    /// sequential and returns a deterministic witness.
    pub parallel_width: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            node_budget: 10_000_000,
            fail_fast: true,
            parallel_width: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    /// A verified category with the requested matrix.
    Found(FinCategory),
    /// The whole tree was traversed; no category exists.
    Exhausted,
    /// The node budget ran out first.
    Inconclusive { nodes_used: u64 },
}

impl SearchOutcome {
    pub fn label(&self) -> &'static str {
        match self {
            SearchOutcome::Found(_) => "FOUND",
            SearchOutcome::Exhausted => "EXHAUSTED",
            SearchOutcome::Inconclusive { .. } => "INCONCLUSIVE",
        }
    }
}

/// One undetermined composite: the pair `(f ∈ hom(i,j), g ∈ hom(j,k))`
/// with both factors non-identity.
#[derive(Debug, Clone, Copy)]
struct Var {
    i: usize,
    j: usize,
    k: usize,
    f: usize,
    g: usize,
    domain: u32,
}

/// An associativity constraint over non-identity morphisms
/// `f: i→j, g: j→k, h: k→l`.
#[derive(Debug, Clone, Copy)]
struct Triple {
    i: usize,
    j: usize,
    k: usize,
    l: usize,
    f: usize,
    g: usize,
    h: usize,
}

struct Problem {
    matrix: PosMatrix,
    /// Identity-involving composites pre-assigned, all else zero.
    base: Table,
    /// Undetermined pairs sorted by (k, j, i, g, f).
    vars: Vec<Var>,
    triples: Vec<Triple>,
    /// Triple ids indexed by the variable serving as one of its two inner
    /// pairs. Triples can also become determined through their derived
    /// pairs; those late violations are caught by the full check at leaves.
    var_triples: Vec<Vec<u32>>,
}

impl Problem {
    fn build(m: &PosMatrix) -> Result<Problem, ()> {
        let mut base = Table::from_sizes_of(m).map_err(|_| ())?;
        let n = m.n();
        let size = |i: usize, j: usize| m.entry(i, j) as usize;
        let is_id = |i: usize, j: usize, local: usize| i == j && local == 1;

        let mut vars = Vec::new();
        let mut var_of_cell = vec![u32::MAX; base.total_cells()];
        for i in 1..=n {
            for j in 1..=n {
                for k in 1..=n {
                    for f in 1..=size(i, j) {
                        for g in 1..=size(j, k) {
                            if is_id(i, j, f) {
                                base.set(i, j, k, f, g, g as u32);
                            } else if is_id(j, k, g) {
                                base.set(i, j, k, f, g, f as u32);
                            } else {
                                vars.push(Var {
                                    i,
                                    j,
                                    k,
                                    f,
                                    g,
                                    domain: size(i, k) as u32,
                                });
                            }
                        }
                    }
                }
            }
        }
        vars.sort_by_key(|v| (v.k, v.j, v.i, v.g, v.f));
        for (idx, v) in vars.iter().enumerate() {
            var_of_cell[base.cell(v.i, v.j, v.k, v.f, v.g)] = idx as u32;
        }

        let mut triples = Vec::new();
        let mut var_triples = vec![Vec::new(); vars.len()];
        for i in 1..=n {
            for j in 1..=n {
                for k in 1..=n {
                    for l in 1..=n {
                        for f in 1..=size(i, j) {
                            if is_id(i, j, f) {
                                continue;
                            }
                            for g in 1..=size(j, k) {
                                if is_id(j, k, g) {
                                    continue;
                                }
                                for h in 1..=size(k, l) {
                                    if is_id(k, l, h) {
                                        continue;
                                    }
                                    let tid = triples.len() as u32;
                                    triples.push(Triple { i, j, k, l, f, g, h });
                                    for cell in [
                                        base.cell(i, j, k, f, g),
                                        base.cell(j, k, l, g, h),
                                    ] {
                                        let var = var_of_cell[cell];
                                        debug_assert_ne!(var, u32::MAX);
                                        if var_triples[var as usize].last() != Some(&tid) {
                                            var_triples[var as usize].push(tid);
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }

        Ok(Problem {
            matrix: m.clone(),
            base,
            vars,
            triples,
            var_triples,
        })
    }

    /// False iff the triple is fully determined and violated.
    #[inline]
    fn triple_ok(&self, table: &Table, t: &Triple) -> bool {
        let m1 = table.get(t.i, t.j, t.k, t.f, t.g);
        if m1 == 0 {
            return true;
        }
        let m2 = table.get(t.j, t.k, t.l, t.g, t.h);
        if m2 == 0 {
            return true;
        }
        let lhs = table.get(t.i, t.j, t.l, t.f, m2 as usize);
        if lhs == 0 {
            return true;
        }
        let rhs = table.get(t.i, t.k, t.l, m1 as usize, t.h);
        rhs == 0 || lhs == rhs
    }
}

enum RunResult {
    Found(FinCategory),
    Exhausted,
    OutOfBudget,
    /// Another branch already produced a witness.
    Stopped,
}

struct Searcher<'a> {
    prob: &'a Problem,
    table: Table,
    ids: Vec<u32>,
    nodes: &'a AtomicU64,
    budget: u64,
    stop: &'a AtomicBool,
    fail_fast: bool,
}

impl Searcher<'_> {
    fn assign_and_descend(&mut self, depth: usize, value: u32) -> RunResult {
        let v = self.prob.vars[depth];
        if self.nodes.fetch_add(1, Ordering::Relaxed) + 1 > self.budget {
            return RunResult::OutOfBudget;
        }
        self.table.set(v.i, v.j, v.k, v.f, v.g, value);
        let consistent = self.prob.var_triples[depth]
            .iter()
            .all(|&tid| self.prob.triple_ok(&self.table, &self.prob.triples[tid as usize]));
        let result = if consistent {
            self.descend(depth + 1)
        } else {
            RunResult::Exhausted
        };
        self.table.set(v.i, v.j, v.k, v.f, v.g, 0);
        result
    }

    fn descend(&mut self, depth: usize) -> RunResult {
        if self.stop.load(Ordering::Relaxed) {
            return RunResult::Stopped;
        }
        if depth == self.prob.vars.len() {
            return match self.check_leaf() {
                Some(c) => RunResult::Found(c),
                None => RunResult::Exhausted,
            };
        }
        let domain = self.prob.vars[depth].domain;
        let mut out_of_budget = false;
        for value in 1..=domain {
            match self.assign_and_descend(depth, value) {
                RunResult::Found(c) => return RunResult::Found(c),
                RunResult::Stopped => return RunResult::Stopped,
                RunResult::OutOfBudget => {
                    out_of_budget = true;
                    break;
                }
                RunResult::Exhausted => {}
            }
        }
        if out_of_budget {
            RunResult::OutOfBudget
        } else {
            RunResult::Exhausted
        }
    }

    /// All pairs assigned: reject unless every law holds, then verify the
    /// candidate for real before reporting it.
    fn check_leaf(&self) -> Option<FinCategory> {
        if !self
            .prob
            .triples
            .iter()
            .all(|t| self.prob.triple_ok(&self.table, t))
        {
            return None;
        }
        let candidate = FinCategory::from_table(self.table.clone(), self.ids.clone());
        let ok = if self.fail_fast {
            laws_hold(&self.table, &self.ids)
                && candidate.matrix_of() == self.prob.matrix
        } else {
            verify(&candidate, Some(&self.prob.matrix)).ok
        };
        assert!(ok, "leaf candidate failed verification");
        Some(candidate)
    }
}

/// Searches for any category whose hom-set sizes are `m`.
///
/// Sequential runs (`parallel_width = 1`) are fully deterministic. Parallel
/// runs split the first variable's values across workers; when the search
/// completes within budget the classification is scheduling-independent,
/// though a different witness may be returned. Instances too large to
/// materialize a composition table are reported as `Inconclusive` with zero
/// nodes used.
pub fn search(m: &PosMatrix, cfg: &SearchConfig) -> SearchOutcome {
    let prob = match Problem::build(m) {
        Ok(p) => p,
        Err(()) => return SearchOutcome::Inconclusive { nodes_used: 0 },
    };
    let ids = vec![1u32; m.n()];
    let nodes = AtomicU64::new(0);
    let stop = AtomicBool::new(false);

    let width = cfg.parallel_width.max(1);
    if width == 1 || prob.vars.is_empty() {
        let mut searcher = Searcher {
            prob: &prob,
            table: prob.base.clone(),
            ids,
            nodes: &nodes,
            budget: cfg.node_budget,
            stop: &stop,
            fail_fast: cfg.fail_fast,
        };
        return finish(searcher.descend(0), &nodes);
    }

    let domain = prob.vars[0].domain;
    let workers = width.min(domain as usize);
    let results: Vec<RunResult> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let prob = &prob;
                let nodes = &nodes;
                let stop = &stop;
                let ids = ids.clone();
                scope.spawn(move || {
                    let mut searcher = Searcher {
                        prob,
                        table: prob.base.clone(),
                        ids,
                        nodes,
                        budget: cfg.node_budget,
                        stop,
                        fail_fast: cfg.fail_fast,
                    };
                    let mut out_of_budget = false;
                    for value in ((w + 1)..=domain as usize).step_by(workers) {
                        match searcher.assign_and_descend(0, value as u32) {
                            RunResult::Found(c) => {
                                stop.store(true, Ordering::Relaxed);
                                return RunResult::Found(c);
                            }
                            RunResult::Stopped => return RunResult::Stopped,
                            RunResult::OutOfBudget => {
                                out_of_budget = true;
                                break;
                            }
                            RunResult::Exhausted => {}
                        }
                    }
                    if out_of_budget {
                        RunResult::OutOfBudget
                    } else {
                        RunResult::Exhausted
                    }
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });

    let mut outcome = RunResult::Exhausted;
    for r in results {
        match r {
            RunResult::Found(c) => return finish(RunResult::Found(c), &nodes),
            RunResult::OutOfBudget | RunResult::Stopped => outcome = RunResult::OutOfBudget,
            RunResult::Exhausted => {}
        }
    }
    finish(outcome, &nodes)
}

fn finish(result: RunResult, nodes: &AtomicU64) -> SearchOutcome {
    match result {
        RunResult::Found(c) => SearchOutcome::Found(c),
        RunResult::Exhausted => SearchOutcome::Exhausted,
        RunResult::OutOfBudget | RunResult::Stopped => SearchOutcome::Inconclusive {
            nodes_used: nodes.load(Ordering::Relaxed),
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Agreement {
    Agree,
    Disagree,
    Undecided,
}

/// Side-by-side run of the decision procedure and the search oracle.
#[derive(Debug, Clone)]
pub struct CrossReport {
    pub verdict: Verdict,
    pub outcome: SearchOutcome,
    pub agreement: Agreement,
}

/// Runs both `decide` and `search` and reports whether they agree. A
/// disagreement would be a finding against one of the two.
pub fn cross_validate(m: &PosMatrix, cfg: &SearchConfig) -> CrossReport {
    let verdict = decide(m);
    let outcome = search(m, cfg);
    let agreement = match (&verdict, &outcome) {
        (_, SearchOutcome::Inconclusive { .. }) => Agreement::Undecided,
        (Verdict::Realizable(_), SearchOutcome::Found(_)) => Agreement::Agree,
        (Verdict::NotRealizable(_), SearchOutcome::Exhausted) => Agreement::Agree,
        _ => Agreement::Disagree,
    };
    CrossReport {
        verdict,
        outcome,
        agreement,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::PosMatrix;

    fn m(rows: &[&[u64]]) -> PosMatrix {
        PosMatrix::from_rows(rows)
    }

    #[test]
    fn flagship_matrix_is_refuted() {
        let outcome = search(&m(&[&[2, 2], &[1, 1]]), &SearchConfig::default());
        assert_eq!(outcome, SearchOutcome::Exhausted);
    }

    #[test]
    fn trivial_matrix_is_found() {
        match search(&m(&[&[1]]), &SearchConfig::default()) {
            SearchOutcome::Found(c) => {
                assert_eq!(c.n(), 1);
                assert!(verify(&c, Some(&m(&[&[1]]))).ok);
            }
            other => panic!("expected Found, got {}", other.label()),
        }
    }

    #[test]
    fn low_diagonal_matrix_is_refuted() {
        assert_eq!(
            search(&m(&[&[1, 2], &[2, 2]]), &SearchConfig::default()),
            SearchOutcome::Exhausted
        );
    }

    #[test]
    fn one_unit_instance_is_found_and_verifies() {
        match search(&m(&[&[3, 1], &[2, 1]]), &SearchConfig::default()) {
            SearchOutcome::Found(c) => {
                assert!(verify(&c, Some(&m(&[&[3, 1], &[2, 1]]))).ok);
            }
            other => panic!("expected Found, got {}", other.label()),
        }
    }

    #[test]
    fn tiny_budget_is_inconclusive() {
        let cfg = SearchConfig {
            node_budget: 10,
            ..SearchConfig::default()
        };
        match search(&m(&[&[2, 2, 2], &[2, 2, 2], &[2, 2, 2]]), &cfg) {
            SearchOutcome::Inconclusive { nodes_used } => assert!(nodes_used >= 10),
            other => panic!("expected Inconclusive, got {}", other.label()),
        }
    }

    #[test]
    fn sequential_witness_is_deterministic() {
        let cfg = SearchConfig::default();
        let a = search(&m(&[&[2, 1], &[1, 2]]), &cfg);
        let b = search(&m(&[&[2, 1], &[1, 2]]), &cfg);
        assert_eq!(a, b);
        assert!(matches!(a, SearchOutcome::Found(_)));
    }

    #[test]
    fn budget_growth_only_resolves_inconclusive() {
        let target = m(&[&[2, 2], &[2, 2]]);
        let mut last_definite: Option<&'static str> = None;
        for budget in [1u64, 10, 100, 10_000, 10_000_000] {
            let cfg = SearchConfig {
                node_budget: budget,
                ..SearchConfig::default()
            };
            match search(&target, &cfg) {
                SearchOutcome::Inconclusive { .. } => {
                    assert_eq!(last_definite, None, "definite answer regressed");
                }
                definite => {
                    if let Some(prev) = last_definite {
                        assert_eq!(prev, definite.label());
                    }
                    last_definite = Some(definite.label());
                }
            }
        }
        assert_eq!(last_definite, Some("FOUND"));
    }

    #[test]
    fn parallel_classification_matches_sequential() {
        for rows in [
            [[2u64, 2], [1, 1]],
            [[2, 2], [2, 2]],
            [[1, 2], [2, 2]],
            [[3, 1], [2, 1]],
        ] {
            let target = m(&[&rows[0], &rows[1]]);
            let seq = search(&target, &SearchConfig::default());
            let par = search(
                &target,
                &SearchConfig {
                    parallel_width: 4,
                    ..SearchConfig::default()
                },
            );
            assert_eq!(seq.label(), par.label(), "on {target:?}");
            if let SearchOutcome::Found(c) = par {
                assert!(verify(&c, Some(&target)).ok);
            }
        }
    }

    #[test]
    fn cross_validation_agrees_on_the_flagship() {
        let report = cross_validate(&m(&[&[2, 2], &[1, 1]]), &SearchConfig::default());
        assert_eq!(report.agreement, Agreement::Agree);
        assert!(!report.verdict.is_realizable());
    }

    #[test]
    fn cross_validation_undecided_under_tiny_budget() {
        let cfg = SearchConfig {
            node_budget: 3,
            ..SearchConfig::default()
        };
        let report = cross_validate(&m(&[&[2, 2, 2], &[2, 2, 2], &[2, 2, 2]]), &cfg);
        assert_eq!(report.agreement, Agreement::Undecided);
    }

    #[test]
    fn oversized_instance_is_inconclusive_up_front() {
        let huge = m(&[&[1 << 20, 1 << 20], &[1 << 20, 1 << 20]]);
        assert_eq!(
            search(&huge, &SearchConfig::default()),
            SearchOutcome::Inconclusive { nodes_used: 0 }
        );
    }

    #[test]
    fn every_refuted_2x2_with_entries_up_to_3_is_exhausted() {
        let mut refuted = 0;
        for a in 1..=3u64 {
            for b in 1..=3u64 {
                for c in 1..=3u64 {
                    for d in 1..=3u64 {
                        let mat = m(&[&[a, b], &[c, d]]);
                        if decide(&mat).is_realizable() {
                            continue;
                        }
                        refuted += 1;
                        assert_eq!(
                            search(&mat, &SearchConfig::default()),
                            SearchOutcome::Exhausted,
                            "oracle failed to exhaust {mat:?}"
                        );
                    }
                }
            }
        }
        assert_eq!(refuted, 36);
    }

    #[test]
    fn every_refuted_3x3_with_entries_up_to_2_is_exhausted() {
        let mut refuted = 0;
        for bits in 0..(1u32 << 9) {
            let entries: Vec<u64> = (0..9).map(|b| 1 + ((bits >> b) & 1) as u64).collect();
            let mat = PosMatrix::new(3, entries);
            if decide(&mat).is_realizable() {
                continue;
            }
            refuted += 1;
            assert_eq!(
                search(&mat, &SearchConfig::default()),
                SearchOutcome::Exhausted,
                "oracle failed to exhaust {mat:?}"
            );
        }
        assert!(refuted > 100, "expected a substantial refuted set, got {refuted}");
    }

    #[test]
    fn parallel_width_beyond_the_root_domain_is_fine() {
        let target = m(&[&[2, 1], &[1, 2]]);
        let cfg = SearchConfig {
            parallel_width: 16,
            ..SearchConfig::default()
        };
        assert!(matches!(search(&target, &cfg), SearchOutcome::Found(_)));
    }
}
