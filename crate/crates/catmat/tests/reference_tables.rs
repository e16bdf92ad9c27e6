//! Pins the constructed composition tables against independent
//! transcriptions of their defining equations, family by family, so a
//! regression in the builders cannot hide behind the law checker.

use catmat::category::MorphId;
use catmat::construct::{augment_unit, construct_one_unit, construct_witness};
use catmat::matrix::PosMatrix;

fn m(rows: &[&[u64]]) -> PosMatrix {
    PosMatrix::from_rows(rows)
}

/// Two objects, unit at object 2, hom(1,1) = {id, loops}, one arrow each
/// way scaled by (b, c): matrix [[bc+1, b], [c, 1]].
///
/// Layout at object 1: local 1 is the identity; the loop with out-index
/// j (which arrow leaves object 2) and in-index i (which arrow enters it)
/// sits at local 1 + (j-1)*b + i.
struct TwoObject {
    b: usize,
    cat: catmat::category::FinCategory,
}

impl TwoObject {
    fn build(b: u64, c: u64) -> TwoObject {
        let mat = m(&[&[b * c + 1, b], &[c, 1]]);
        let cat = construct_witness(&mat).unwrap();
        assert!(catmat::category::verify(&cat, Some(&mat)).ok);
        TwoObject {
            b: b as usize,
            cat,
        }
    }

    fn id1(&self) -> MorphId {
        MorphId::new(1, 1, 1)
    }

    fn id2(&self) -> MorphId {
        MorphId::new(2, 2, 1)
    }

    /// Loop at object 1 routed out by arrow `j` and back in by arrow `i`.
    fn loop_(&self, i: usize, j: usize) -> MorphId {
        MorphId::new(1, 1, 1 + (j - 1) * self.b + i)
    }

    fn fwd(&self, i: usize) -> MorphId {
        MorphId::new(1, 2, i)
    }

    fn back(&self, j: usize) -> MorphId {
        MorphId::new(2, 1, j)
    }
}

#[test]
fn two_object_unit_table_matches_the_equations() {
    for (b, c) in [(1u64, 1u64), (1, 2), (2, 1), (2, 3)] {
        let t = TwoObject::build(b, c);
        let (b, c) = (b as usize, c as usize);
        // loop(i,j) ∘ loop(n,p) = loop(n,j)
        for i in 1..=b {
            for j in 1..=c {
                for n in 1..=b {
                    for p in 1..=c {
                        assert_eq!(
                            t.cat.compose(t.loop_(i, j), t.loop_(n, p)),
                            t.loop_(n, j)
                        );
                    }
                }
            }
        }
        // fwd(n) ∘ loop(i,j) = fwd(i)
        for n in 1..=b {
            for i in 1..=b {
                for j in 1..=c {
                    assert_eq!(t.cat.compose(t.fwd(n), t.loop_(i, j)), t.fwd(i));
                }
            }
        }
        // back(j) ∘ fwd(i) = loop(i,j)
        for j in 1..=c {
            for i in 1..=b {
                assert_eq!(t.cat.compose(t.back(j), t.fwd(i)), t.loop_(i, j));
            }
        }
        // fwd(i) ∘ back(j) = id at object 2
        for i in 1..=b {
            for j in 1..=c {
                assert_eq!(t.cat.compose(t.fwd(i), t.back(j)), t.id2());
            }
        }
        // loop(i,j) ∘ back(k) = back(j)
        for i in 1..=b {
            for j in 1..=c {
                for k in 1..=c {
                    assert_eq!(t.cat.compose(t.loop_(i, j), t.back(k)), t.back(j));
                }
            }
        }
        // Identity laws on a sample.
        assert_eq!(t.cat.compose(t.loop_(1, 1), t.id1()), t.loop_(1, 1));
        assert_eq!(t.cat.compose(t.id2(), t.fwd(1)), t.fwd(1));
    }
}

#[test]
fn two_object_extra_loops_absorb() {
    // [[5,1],[2,1]]: two loops beyond the routed core (5 = 1*2 + 1 + 2).
    let mat = m(&[&[5, 1], &[2, 1]]);
    let cat = construct_witness(&mat).unwrap();
    assert!(catmat::category::verify(&cat, Some(&mat)).ok);
    let t = TwoObject { b: 1, cat };
    let x1 = MorphId::new(1, 1, 4);
    let x2 = MorphId::new(1, 1, 5);
    // Extras are idempotent, and distinct extras collapse to the loop
    // routed out first and in last.
    assert_eq!(t.cat.compose(x1, x1), x1);
    assert_eq!(t.cat.compose(x2, x2), x2);
    assert_eq!(t.cat.compose(x1, x2), t.loop_(1, 1));
    assert_eq!(t.cat.compose(x2, x1), t.loop_(1, 1));
    // As a left factor an extra acts like loop(1,1); as a right factor
    // like loop(b,c).
    for k in 1..=2usize {
        assert_eq!(t.cat.compose(t.fwd(1), [x1, x2][k - 1]), t.fwd(1));
        assert_eq!(t.cat.compose([x1, x2][k - 1], t.back(k)), t.back(1));
        assert_eq!(t.cat.compose([x1, x2][k - 1], t.loop_(1, 2)), t.loop_(1, 1));
        assert_eq!(t.cat.compose(t.loop_(1, 2), [x1, x2][k - 1]), t.loop_(1, 2));
    }
}

/// Three objects with the unit first: matrix
/// [[1,a,b],[c,ac+1,bc],[p,ap,bp+1]]. Every hom-set between non-unit
/// objects is indexed by (which arrow leaves the unit, which arrow enters
/// it); this struct names the nine families.
struct ThreeObject {
    c: usize,
    p: usize,
    cat: catmat::category::FinCategory,
}

impl ThreeObject {
    fn build(a: u64, b: u64, c: u64, p: u64) -> ThreeObject {
        let mat = m(&[
            &[1, a, b],
            &[c, a * c + 1, b * c],
            &[p, a * p, b * p + 1],
        ]);
        let cat = construct_one_unit(&mat).unwrap();
        assert!(catmat::category::verify(&cat, Some(&mat)).ok);
        ThreeObject {
            c: c as usize,
            p: p as usize,
            cat,
        }
    }

    fn unit(&self) -> MorphId {
        MorphId::new(1, 1, 1)
    }

    /// 1 → 2, index i ≤ a.
    fn unit_to_mid(&self, i: usize) -> MorphId {
        MorphId::new(1, 2, i)
    }

    /// 1 → 3, index i ≤ b.
    fn unit_to_end(&self, i: usize) -> MorphId {
        MorphId::new(1, 3, i)
    }

    /// 2 → 1, index j ≤ c.
    fn mid_to_unit(&self, j: usize) -> MorphId {
        MorphId::new(2, 1, j)
    }

    /// 3 → 1, index j ≤ p.
    fn end_to_unit(&self, j: usize) -> MorphId {
        MorphId::new(3, 1, j)
    }

    /// 2 → 2 loop: out i ≤ a, in j ≤ c; local 1 is the identity.
    fn mid_loop(&self, i: usize, j: usize) -> MorphId {
        MorphId::new(2, 2, 1 + (i - 1) * self.c + j)
    }

    /// 3 → 3 loop: out i ≤ b, in j ≤ p; local 1 is the identity.
    fn end_loop(&self, i: usize, j: usize) -> MorphId {
        MorphId::new(3, 3, 1 + (i - 1) * self.p + j)
    }

    /// 2 → 3: out i ≤ b, in j ≤ c.
    fn mid_to_end(&self, i: usize, j: usize) -> MorphId {
        MorphId::new(2, 3, (i - 1) * self.c + j)
    }

    /// 3 → 2: out i ≤ a, in j ≤ p.
    fn end_to_mid(&self, i: usize, j: usize) -> MorphId {
        MorphId::new(3, 2, (i - 1) * self.p + j)
    }
}

#[test]
fn three_object_unit_table_matches_the_equations() {
    for (a, b, c, p) in [(1u64, 1, 1, 1), (2, 1, 2, 1), (2, 2, 2, 2), (3, 1, 2, 3)] {
        let t = ThreeObject::build(a, b, c, p);
        let (a, b, c, p) = (a as usize, b as usize, c as usize, p as usize);
        let compose = |g, f| t.cat.compose(g, f);

        for i in 1..=b {
            for j in 1..=p {
                for i2 in 1..=b {
                    for j2 in 1..=p {
                        assert_eq!(
                            compose(t.end_loop(i, j), t.end_loop(i2, j2)),
                            t.end_loop(i, j2)
                        );
                    }
                }
                for i2 in 1..=a {
                    for j2 in 1..=p {
                        assert_eq!(
                            compose(t.end_to_mid(i2, j2), t.end_loop(i, j)),
                            t.end_to_mid(i2, j)
                        );
                    }
                }
                for x in 1..=p {
                    assert_eq!(compose(t.end_to_unit(x), t.end_loop(i, j)), t.end_to_unit(j));
                }
                for i2 in 1..=b {
                    for j2 in 1..=c {
                        assert_eq!(
                            compose(t.mid_to_end(i2, j2), t.end_to_mid(i, j)),
                            t.end_loop(i2, j)
                        );
                    }
                }
            }
        }
        for i in 1..=a {
            for j in 1..=p {
                for x in 1..=c {
                    assert_eq!(compose(t.mid_to_unit(x), t.end_to_mid(i, j)), t.end_to_unit(j));
                }
                for i2 in 1..=a {
                    for j2 in 1..=c {
                        assert_eq!(
                            compose(t.mid_loop(i2, j2), t.end_to_mid(i, j)),
                            t.end_to_mid(i2, j)
                        );
                    }
                }
            }
        }
        // Factorizations through the unit.
        for j in 1..=p {
            for i in 1..=b {
                assert_eq!(compose(t.unit_to_end(i), t.end_to_unit(j)), t.end_loop(i, j));
            }
            for i in 1..=a {
                assert_eq!(compose(t.unit_to_mid(i), t.end_to_unit(j)), t.end_to_mid(i, j));
            }
        }
        for j in 1..=c {
            for i in 1..=b {
                assert_eq!(compose(t.unit_to_end(i), t.mid_to_unit(j)), t.mid_to_end(i, j));
            }
            for i in 1..=a {
                assert_eq!(compose(t.unit_to_mid(i), t.mid_to_unit(j)), t.mid_loop(i, j));
            }
        }
        // Arrows into the unit collapse everything to it.
        for j in 1..=p {
            for i in 1..=b {
                assert_eq!(compose(t.end_to_unit(j), t.unit_to_end(i)), t.unit());
            }
        }
        for j in 1..=c {
            for i in 1..=a {
                assert_eq!(compose(t.mid_to_unit(j), t.unit_to_mid(i)), t.unit());
            }
        }
        // Mid-object loops and crossings.
        for i in 1..=a {
            for j in 1..=c {
                for i2 in 1..=a {
                    for j2 in 1..=c {
                        assert_eq!(
                            compose(t.mid_loop(i, j), t.mid_loop(i2, j2)),
                            t.mid_loop(i, j2)
                        );
                    }
                }
                for i2 in 1..=b {
                    for j2 in 1..=c {
                        assert_eq!(
                            compose(t.mid_to_end(i2, j2), t.mid_loop(i, j)),
                            t.mid_to_end(i2, j)
                        );
                    }
                }
                for x in 1..=c {
                    assert_eq!(compose(t.mid_to_unit(x), t.mid_loop(i, j)), t.mid_to_unit(j));
                }
            }
        }
        for i in 1..=b {
            for j in 1..=c {
                for i2 in 1..=b {
                    for j2 in 1..=p {
                        assert_eq!(
                            compose(t.end_loop(i2, j2), t.mid_to_end(i, j)),
                            t.mid_to_end(i2, j)
                        );
                    }
                }
                for i2 in 1..=a {
                    for j2 in 1..=p {
                        assert_eq!(
                            compose(t.end_to_mid(i2, j2), t.mid_to_end(i, j)),
                            t.mid_loop(i2, j)
                        );
                    }
                }
                for x in 1..=p {
                    assert_eq!(compose(t.end_to_unit(x), t.mid_to_end(i, j)), t.mid_to_unit(j));
                }
            }
        }
        // Outgoing arrows recover their out-index.
        for j in 1..=a {
            for i in 1..=a {
                for x in 1..=c {
                    assert_eq!(compose(t.mid_loop(i, x), t.unit_to_mid(j)), t.unit_to_mid(i));
                }
                for x in 1..=p {
                    assert_eq!(compose(t.end_to_mid(i, x), t.unit_to_end(1)), t.unit_to_mid(i));
                }
            }
        }
        for j in 1..=b {
            for i in 1..=b {
                for x in 1..=c {
                    assert_eq!(compose(t.mid_to_end(i, x), t.unit_to_mid(1)), t.unit_to_end(i));
                }
                for x in 1..=p {
                    assert_eq!(compose(t.end_loop(i, x), t.unit_to_end(j)), t.unit_to_end(i));
                }
            }
        }
    }
}

#[test]
fn grown_unit_object_acts_as_identity_on_arrows() {
    let base = construct_one_unit(&m(&[&[1, 2, 2], &[2, 5, 4], &[2, 4, 5]])).unwrap();
    let grown = augment_unit(&base, 3).unwrap();
    let n1 = MorphId::new(1, 1, 2);
    let n2 = MorphId::new(1, 1, 3);
    for j in [2usize, 3] {
        for v in 1..=grown.hom_size(j, 1) {
            let arrow = MorphId::new(j, 1, v);
            assert_eq!(grown.compose(n1, arrow), arrow);
            assert_eq!(grown.compose(n2, arrow), arrow);
        }
        for w in 1..=grown.hom_size(1, j) {
            let arrow = MorphId::new(1, j, w);
            assert_eq!(grown.compose(arrow, n1), arrow);
            assert_eq!(grown.compose(arrow, n2), arrow);
        }
        // Arrows through the grown unit object now land on the first new
        // loop rather than the identity.
        for w in 1..=grown.hom_size(1, j) {
            for v in 1..=grown.hom_size(j, 1) {
                assert_eq!(
                    grown.compose(MorphId::new(j, 1, v), MorphId::new(1, j, w)),
                    n1
                );
            }
        }
    }
}
