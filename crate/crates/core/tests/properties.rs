//! Property-based checks of the algebraic foundations: cubical index
//! combinatorics, exact linear algebra, minor identities, and the class
//! ring with its realization.

use std::collections::BTreeSet;

use proptest::prelude::*;

use cdesc_core::cubical::{interval, CubeIndex, CubicalOrder};
use cdesc_core::gysin::{cauchy_binet_count, laplace_identity_count};
use cdesc_core::linalg::{int_mat_mul, int_minor_det, parse_q, qi, show_q, QMat};
use cdesc_core::motive::{dual_class, realize_e, Atom, AtomRegistry, EPoly, MotiveClass};

fn bits() -> impl Strategy<Value = Vec<bool>> {
    prop::collection::vec(any::<bool>(), 0..6)
}

fn index() -> impl Strategy<Value = CubeIndex> {
    bits().prop_map(CubeIndex::new)
}

/// Interval closure of an arbitrary set of indices; the result is a valid
/// cubical order by construction.
fn close_intervals(mut members: BTreeSet<CubeIndex>) -> BTreeSet<CubeIndex> {
    members.insert(CubeIndex::zero());
    loop {
        let mut grew = false;
        let now: Vec<CubeIndex> = members.iter().cloned().collect();
        for a in &now {
            for c in &now {
                if a.leq(c) {
                    for b in interval(a, c) {
                        grew |= members.insert(b);
                    }
                }
            }
        }
        if !grew {
            return members;
        }
    }
}

fn order() -> impl Strategy<Value = CubicalOrder> {
    prop::collection::btree_set(index(), 1..6).prop_map(|m| {
        CubicalOrder::new(close_intervals(m)).expect("interval closure is a cubical order")
    })
}

fn int_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-4i64..=4, c..=c), r..=r)
    })
}

fn qmat(max_rows: usize, max_cols: usize) -> impl Strategy<Value = QMat> {
    int_matrix(max_rows, max_cols).prop_map(|rows| {
        QMat::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(qi).collect())
                .collect(),
        )
        .expect("rectangular rows")
    })
}

fn registry() -> AtomRegistry {
    let mut reg = AtomRegistry::new();
    reg.register(Atom::new("P1", 1, &[(0, 0, 0, 1), (2, 1, 1, 1)]).unwrap())
        .unwrap();
    reg.register(Atom::new("P2", 2, &[(0, 0, 0, 1), (2, 1, 1, 1), (4, 2, 2, 1)]).unwrap())
        .unwrap();
    reg
}

fn class() -> impl Strategy<Value = MotiveClass> {
    prop::collection::vec((0usize..3, -2i64..=2, -3i64..=3), 0..5).prop_map(|terms| {
        let names = ["pt", "P1", "P2"];
        let mut c = MotiveClass::zero();
        for (i, t, k) in terms {
            c.add_term(names[i], t, k);
        }
        c
    })
}

fn epoly() -> impl Strategy<Value = EPoly> {
    prop::collection::vec((-2i64..=2, -2i64..=2, -3i64..=3), 0..5).prop_map(|terms| {
        let mut p = EPoly::zero();
        for (u, v, c) in terms {
            p.add_term(u, v, c);
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bit_string_round_trip(b in bits()) {
        let a = CubeIndex::new(b.clone());
        let width = b.len().max(1);
        let s = a.to_bit_string(width);
        prop_assert_eq!(CubeIndex::parse(&s).unwrap(), a);
    }

    #[test]
    fn leq_is_a_partial_order(a in index(), b in index(), c in index()) {
        prop_assert!(a.leq(&a));
        if a.leq(&b) && b.leq(&a) {
            prop_assert_eq!(&a, &b);
        }
        if a.leq(&b) && b.leq(&c) {
            prop_assert!(a.leq(&c));
        }
        let sup_a: BTreeSet<usize> = a.support().into_iter().collect();
        let sup_b: BTreeSet<usize> = b.support().into_iter().collect();
        prop_assert_eq!(a.leq(&b), sup_a.is_subset(&sup_b));
    }

    #[test]
    fn intervals_are_boolean_cubes(a in index(), b in index()) {
        if a.leq(&b) {
            let iv = interval(&a, &b);
            let span = b.weight() - a.weight();
            prop_assert_eq!(iv.len(), 1usize << span);
            for m in &iv {
                prop_assert!(a.leq(m) && m.leq(&b));
            }
        }
    }

    #[test]
    fn closed_sets_are_orders_with_consistent_edges(o in order()) {
        for (lo, hi, i) in o.covering_edges() {
            prop_assert_eq!(&lo.with_bit(i), &hi);
            prop_assert_eq!(hi.weight(), lo.weight() + 1);
            prop_assert!(o.contains(&lo) && o.contains(&hi));
        }
        // Every in-order covering pair appears exactly once.
        let edges = o.covering_edges();
        for a in o.members() {
            for i in 0..o.coord_width() + 1 {
                let b = a.with_bit(i);
                if b != *a && o.contains(&b) {
                    prop_assert_eq!(
                        edges.iter().filter(|(x, y, _)| x == a && *y == b).count(),
                        1
                    );
                }
            }
        }
    }

    #[test]
    fn product_orders_multiply(x in order(), y in order()) {
        let (p, split) = x.product(&y);
        prop_assert_eq!(p.len(), x.len() * y.len());
        prop_assert_eq!(split.left_width + split.right_width, p.coord_width());
        prop_assert_eq!(split.left.len(), x.len());
        prop_assert_eq!(split.right.len(), y.len());
    }

    #[test]
    fn kernel_and_rank_add_up(m in qmat(4, 4)) {
        let k = m.kernel_basis();
        prop_assert!(m.mul(&k).is_zero());
        prop_assert_eq!(m.rank() + k.cols(), m.cols());
    }

    #[test]
    fn inverses_multiply_to_identity(m in qmat(4, 4)) {
        if m.rows() == m.cols() {
            if let Some(inv) = m.inverse() {
                prop_assert_eq!(m.mul(&inv), QMat::identity(m.rows()));
                prop_assert_eq!(inv.mul(&m), QMat::identity(m.rows()));
            } else {
                prop_assert_eq!(m.det(), qi(0));
            }
        }
    }

    #[test]
    fn minor_of_full_square_is_the_determinant(rows in int_matrix(4, 4)) {
        let n = rows.len().min(rows[0].len());
        let square: Vec<Vec<i64>> =
            rows.iter().take(n).map(|r| r.iter().take(n).copied().collect()).collect();
        let all: Vec<usize> = (0..n).collect();
        let as_q = QMat::from_rows(
            square.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect(),
        )
        .unwrap();
        prop_assert_eq!(qi(int_minor_det(&square, &all, &all)), as_q.det());
    }

    #[test]
    fn rational_strings_round_trip(p in -40i64..=40, q in 1i64..=12) {
        let x = qi(p) / qi(q);
        prop_assert_eq!(parse_q(&show_q(&x)).unwrap(), x);
    }

    #[test]
    fn minor_expansions_hold(m in int_matrix(4, 4)) {
        prop_assert!(laplace_identity_count(&m).is_ok());
    }

    #[test]
    fn product_minors_hold(a in int_matrix(4, 3), b0 in int_matrix(3, 4)) {
        // Reshape `b0` so the inner dimensions agree.
        let inner = a[0].len();
        let b: Vec<Vec<i64>> = (0..inner)
            .map(|i| b0[i % b0.len()].clone())
            .collect();
        prop_assert!(cauchy_binet_count(&a, &b).is_ok());
    }

    #[test]
    fn integer_products_associate(a in int_matrix(3, 3), b in int_matrix(3, 3), c in int_matrix(3, 3)) {
        // Reshape to a common chain of dimensions.
        let b: Vec<Vec<i64>> = (0..a[0].len()).map(|i| b[i % b.len()].clone()).collect();
        let c: Vec<Vec<i64>> = (0..b[0].len()).map(|i| c[i % c.len()].clone()).collect();
        let left = int_mat_mul(&int_mat_mul(&a, &b), &c);
        let right = int_mat_mul(&a, &int_mat_mul(&b, &c));
        prop_assert_eq!(left, right);
    }

    #[test]
    fn class_ring_laws(a in class(), b in class(), c in class(), s in -2i64..=2, t in -2i64..=2) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert!(a.sub(&a).is_zero());
        prop_assert_eq!(a.add(&b).scale(s), a.scale(s).add(&b.scale(s)));
        prop_assert_eq!(a.twist(s).twist(t), a.twist(s + t));
        prop_assert_eq!(a.add(&b).twist(s), a.twist(s).add(&b.twist(s)));
    }

    #[test]
    fn duality_is_an_involution(a in class()) {
        let reg = registry();
        let twice = dual_class(&reg, &dual_class(&reg, &a).unwrap()).unwrap();
        prop_assert_eq!(twice, a);
    }

    #[test]
    fn realization_is_additive_and_twists(a in class(), b in class(), n in -2i64..=2) {
        let reg = registry();
        let ra = realize_e(&reg, &a).unwrap();
        let rb = realize_e(&reg, &b).unwrap();
        prop_assert_eq!(realize_e(&reg, &a.add(&b)).unwrap(), ra.add(&rb));
        let lefschetz = EPoly::monomial(n, n, 1);
        prop_assert_eq!(realize_e(&reg, &a.twist(n)).unwrap(), ra.mul(&lefschetz));
    }

    #[test]
    fn polynomial_ring_laws(p in epoly(), q in epoly(), r in epoly()) {
        prop_assert_eq!(p.mul(&q), q.mul(&p));
        prop_assert_eq!(p.mul(&q).mul(&r), p.mul(&q.mul(&r)));
        prop_assert_eq!(p.add(&q).mul(&r), p.mul(&r).add(&q.mul(&r)));
        prop_assert_eq!(p.invert_vars().invert_vars(), p.clone());
        prop_assert_eq!(p.mul(&q).invert_vars(), p.invert_vars().mul(&q.invert_vars()));
        prop_assert_eq!(p.add(&q).eval_at_one(), p.eval_at_one() + q.eval_at_one());
        prop_assert_eq!(p.mul(&q).eval_at_one(), p.eval_at_one() * q.eval_at_one());
    }
}
