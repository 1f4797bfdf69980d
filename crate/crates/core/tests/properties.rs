use std::sync::OnceLock;

use proptest::prelude::*;

use kalman_core::congr::{self, enumerate_congruences, Congruence, Op};
use kalman_core::document::{parse_algebra, serialize_algebra};
use kalman_core::fixtures::heyting_arrow;
use kalman_core::kalman::{self, center_algebra, KalmanLevel};
use kalman_core::search::{enumerate_arrow_tables, enumerate_lattices, are_isomorphic};
use kalman_core::varieties::{check, classify};
use kalman_core::{FiniteAlgebra, Table, VarietyLabel};

fn lattices() -> &'static [FiniteAlgebra] {
    static CELL: OnceLock<Vec<FiniteAlgebra>> = OnceLock::new();
    CELL.get_or_init(|| (1..=5).flat_map(|n| enumerate_lattices(n, false, false)).collect())
}

fn distributive() -> &'static [FiniteAlgebra] {
    static CELL: OnceLock<Vec<FiniteAlgebra>> = OnceLock::new();
    CELL.get_or_init(|| (1..=6).flat_map(|n| enumerate_lattices(n, true, true)).collect())
}

fn hemi_tables() -> &'static [FiniteAlgebra] {
    static CELL: OnceLock<Vec<FiniteAlgebra>> = OnceLock::new();
    CELL.get_or_init(|| {
        (1..=3)
            .flat_map(|n| enumerate_lattices(n, false, true))
            .chain([kalman_core::fixtures::boolean4()])
            .flat_map(|base| enumerate_arrow_tables(&base, VarietyLabel::HIS0).unwrap())
            .collect()
    })
}

fn labels(max: usize) -> impl Strategy<Value = Vec<usize>> {
    (1..=max).prop_flat_map(|n| prop::collection::vec(0..n, n))
}

fn random_ops() -> impl Strategy<Value = (usize, Vec<usize>, Vec<Vec<usize>>)> {
    (1..=5usize).prop_flat_map(|n| {
        (
            Just(n),
            prop::collection::vec(0..n, n),
            prop::collection::vec(prop::collection::vec(0..n, n), n),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn partition_lattice_laws(a in labels(7), seed in any::<u64>()) {
        let n = a.len();
        let b: Vec<usize> = (0..n).map(|i| ((seed >> (i % 32)) as usize + i) % n).collect();
        let (x, y) = (Congruence::from_labels(&a), Congruence::from_labels(&b));
        prop_assert_eq!(x.meet(&y), y.meet(&x));
        prop_assert_eq!(x.join(&y), y.join(&x));
        prop_assert_eq!(x.meet(&x.join(&y)), x.clone());
        prop_assert_eq!(x.join(&x.meet(&y)), x.clone());
        prop_assert!(x.meet(&y).le(&x) && x.le(&x.join(&y)));
        prop_assert_eq!(x.le(&y), x.meet(&y) == x);
        prop_assert!(Congruence::identity(n).le(&x) && x.le(&Congruence::total(n)));
    }

    #[test]
    fn congruences_form_a_sublattice((n, unary, rows) in random_ops()) {
        let ops = [Op::Unary(unary), Op::Binary(Table::from_rows(&rows).unwrap())];
        let all = enumerate_congruences(n, &ops).unwrap();
        prop_assert!(all.contains(&Congruence::identity(n)));
        prop_assert!(all.contains(&Congruence::total(n)));
        for x in &all {
            prop_assert!(x.is_compatible(&ops));
            for y in &all {
                prop_assert!(all.contains(&x.meet(y)));
                prop_assert!(all.contains(&x.join(y)));
            }
        }
    }

    #[test]
    fn documents_round_trip(i in any::<prop::sample::Index>(), names in any::<bool>()) {
        let mut alg = i.get(lattices()).clone();
        if names {
            alg = alg.clone().with_names((0..alg.size()).map(|k| format!("e{k}")));
        }
        if let Some(arrow) = heyting_arrow(&alg) {
            alg = alg.with_arrow(arrow);
        }
        let text = serialize_algebra(&alg);
        let back = parse_algebra(&text).unwrap();
        prop_assert_eq!(serialize_algebra(&back), text);
        prop_assert_eq!(back, alg);
    }

    #[test]
    fn pair_algebra_shape(i in any::<prop::sample::Index>()) {
        let h = i.get(distributive());
        let k = kalman::kalman(h, KalmanLevel::Bdl).unwrap();
        let t = &k.algebra;
        let inv = t.involution.as_ref().unwrap();
        let c = t.center.unwrap();
        let meet = h.meet.as_ref().unwrap();
        let zero = h.bottom.unwrap();
        let expected = (0..h.size())
            .flat_map(|a| (0..h.size()).map(move |b| (a, b)))
            .filter(|&(a, b)| meet.get(a, b) == zero)
            .count();
        prop_assert_eq!(t.size(), expected);
        prop_assert_eq!(inv[c], c);
        for x in 0..t.size() {
            prop_assert_eq!(inv[inv[x]], x);
            let (a, b) = k.pair(x);
            prop_assert_eq!(k.pair(inv[x]), (b, a));
            for y in 0..t.size() {
                prop_assert_eq!(t.leq(x, y), t.leq(inv[y], inv[x]));
            }
        }
        let center = center_algebra(t).unwrap().algebra;
        let stripped = FiniteAlgebra::lattice(center.order.clone()).unwrap();
        prop_assert!(are_isomorphic(&stripped, h).unwrap().is_some());
    }

    #[test]
    fn class_membership_is_upward_closed(i in any::<prop::sample::Index>()) {
        let h = i.get(hemi_tables());
        let found = classify(h).unwrap();
        prop_assert!(found.contains(&VarietyLabel::HIS0));
        for label in &found {
            for sup in label.superclasses() {
                prop_assert!(found.contains(sup), "{} without {}", label, sup);
            }
        }
    }

    #[test]
    fn wb_congruences_restrict_to_center(i in any::<prop::sample::Index>()) {
        let h = i.get(hemi_tables());
        let t = kalman::kalman(h, KalmanLevel::His).unwrap().algebra;
        for theta in congr::enumerate_wb_congruences(&t).unwrap() {
            let tau = congr::gamma_restrict(&t, &theta).unwrap();
            prop_assert_eq!(congr::sigma_expand(&t, &tau).unwrap(), theta.clone());
            let q = congr::quotient_wb(&t, &theta).unwrap();
            prop_assert_eq!(q.size(), theta.num_blocks());
            prop_assert!(check(VarietyLabel::KleenePoset, &q).unwrap().ok);
        }
    }
}
