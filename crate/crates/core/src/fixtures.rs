//! Small named algebras used by tests, the CLI and the demo.
//!
//! Element 0 is always the bottom and element `n - 1` the top.

use crate::finord::{Elem, FiniteAlgebra, Order, Table};

/// `0 < 1 < ... < n-1` with meet, join and bounds.
pub fn chain(n: usize) -> FiniteAlgebra {
    FiniteAlgebra::lattice(Order::chain(n)).expect("chains are lattices")
}

/// `{0, a, b, 1}` with `a`, `b` incomparable.
pub fn boolean4() -> FiniteAlgebra {
    let order = Order::from_fn(4, |i, j| i == j || i == 0 || j == 3);
    FiniteAlgebra::lattice(order)
        .expect("Boolean-4 is a lattice")
        .with_names(["0", "a", "b", "1"])
}

/// Bottom, three pairwise incomparable atoms, top.
pub fn diamond_m3() -> FiniteAlgebra {
    let order = Order::from_fn(5, |i, j| i == j || i == 0 || j == 4);
    FiniteAlgebra::lattice(order).expect("M3 is a lattice")
}

/// The pentagon `0 < a < b < 1`, `0 < c < 1`.
pub fn pentagon_n5() -> FiniteAlgebra {
    // 0 = bottom, 1 = a, 2 = b, 3 = c, 4 = top
    let order = Order::from_fn(5, |i, j| {
        i == j || i == 0 || j == 4 || (i == 1 && j == 2)
    });
    FiniteAlgebra::lattice(order)
        .expect("N5 is a lattice")
        .with_names(["0", "a", "b", "c", "1"])
}

/// A bottom element under `k` pairwise incomparable atoms; no top when `k > 1`.
pub fn antichain_with_bottom(k: usize) -> FiniteAlgebra {
    let order = Order::from_fn(k + 1, |i, j| i == j || i == 0);
    FiniteAlgebra::from_order(order).with_lattice_ops().with_bounds()
}

/// Largest `x` with `x ∧ a <= b`, for every `a`, `b`; `None` when some pair
/// has no such maximum or the meet is missing.
pub fn heyting_arrow(alg: &FiniteAlgebra) -> Option<Table> {
    let meet = alg.meet.as_ref()?;
    let n = alg.size();
    let mut rows = vec![vec![0; n]; n];
    for a in 0..n {
        for b in 0..n {
            rows[a][b] = alg
                .order
                .greatest(|x| alg.leq(meet.get(x, a), b))
                .exists()?;
        }
    }
    Table::from_rows(&rows).ok()
}

/// `a → b = 1` if `a <= b`, else `b`.
pub fn hilbert_default_arrow(alg: &FiniteAlgebra) -> Option<Table> {
    let top = alg.top?;
    Some(Table::from_fn(alg.size(), |a, b| if alg.leq(a, b) { top } else { b }))
}

pub fn with_heyting_arrow(alg: FiniteAlgebra) -> FiniteAlgebra {
    let arrow = heyting_arrow(&alg).expect("finite distributive lattice has a residuum");
    alg.with_arrow(arrow)
}

/// The 3-chain `0 < a < 1` with the arrow whose rows are
/// `[1, a, 1]`, `[0, 1, 1]`, `[0, 0, 1]`. It is a hemi-implicative lattice
/// but fails `1 ∧ (1 → a) = 1 ∧ a`.
pub fn three_chain_hemi() -> FiniteAlgebra {
    let arrow = Table::from_rows(&[vec![2, 1, 2], vec![0, 2, 2], vec![0, 0, 2]]).unwrap();
    chain(3).with_names(["0", "a", "1"]).with_arrow(arrow)
}

/// Boolean-4 with `a → b = 1` if `a <= b` and `b` otherwise.
pub fn boolean4_hilbert() -> FiniteAlgebra {
    let b4 = boolean4();
    let arrow = hilbert_default_arrow(&b4).unwrap();
    b4.with_arrow(arrow)
}

/// The 2-chain with `0 → 1 = 0`: semi-Heyting but not Heyting.
pub fn two_chain_semi_heyting() -> FiniteAlgebra {
    let arrow = Table::from_rows(&[vec![1, 0], vec![0, 1]]).unwrap();
    chain(2).with_arrow(arrow)
}

/// `0 < c < 1` with `∼0 = 1`, `∼c = c`.
pub fn kleene_chain3() -> FiniteAlgebra {
    chain(3)
        .with_names(["0", "c", "1"])
        .with_involution(vec![2, 1, 0])
        .with_center(1)
}

/// Index of the element named `name`, for fixtures with names.
pub fn named(alg: &FiniteAlgebra, name: &str) -> Elem {
    alg.names
        .as_ref()
        .and_then(|ns| ns.iter().position(|n| n == name))
        .unwrap_or_else(|| panic!("no element named {name}"))
}
