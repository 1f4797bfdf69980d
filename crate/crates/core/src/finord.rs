//! Finite posets, partial lattice operations and the `FiniteAlgebra` carrier
//! that every other module works over.
//!
//! The order relation is the source of truth. Operation tables are optional
//! and, when supplied, must agree with the greatest lower / least upper
//! bounds computed from the order.

use std::fmt;

use crate::error::{Error, Result};

/// Element of a finite carrier, as an index `0..n`.
pub type Elem = usize;

/// Result of asking for a partial meet or join.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MeetResult {
    Exists(Elem),
    DoesNotExist,
}

impl MeetResult {
    pub fn exists(self) -> Option<Elem> {
        match self {
            MeetResult::Exists(m) => Some(m),
            MeetResult::DoesNotExist => None,
        }
    }
}

impl From<Option<Elem>> for MeetResult {
    fn from(value: Option<Elem>) -> Self {
        match value {
            Some(m) => MeetResult::Exists(m),
            None => MeetResult::DoesNotExist,
        }
    }
}

/// A binary relation on `0..n`, intended to be a partial order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Order {
    n: usize,
    rel: Vec<bool>,
}

impl Order {
    pub fn from_fn(n: usize, mut leq: impl FnMut(Elem, Elem) -> bool) -> Self {
        let mut rel = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                rel.push(leq(i, j));
            }
        }
        Order { n, rel }
    }

    pub fn from_matrix(matrix: &[Vec<bool>]) -> Result<Self> {
        let n = matrix.len();
        if let Some((i, row)) = matrix.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::Input(format!(
                "order matrix is not square: row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        Ok(Order::from_fn(n, |i, j| matrix[i][j]))
    }

    /// Total order `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Self {
        Order::from_fn(n, |i, j| i <= j)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.rel[a * self.n + b]
    }

    #[inline]
    pub fn lt(&self, a: Elem, b: Elem) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn to_matrix(&self) -> Vec<Vec<bool>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.leq(i, j)).collect())
            .collect()
    }

    pub fn reversed(&self) -> Order {
        Order::from_fn(self.n, |i, j| self.leq(j, i))
    }

    /// Induced order on `elements`, re-indexed by position.
    pub fn restrict(&self, elements: &[Elem]) -> Order {
        Order::from_fn(elements.len(), |i, j| self.leq(elements[i], elements[j]))
    }

    pub fn down_size(&self, a: Elem) -> usize {
        (0..self.n).filter(|&x| self.leq(x, a)).count()
    }

    pub fn up_size(&self, a: Elem) -> usize {
        (0..self.n).filter(|&x| self.leq(a, x)).count()
    }

    pub fn validate(&self) -> PosetReport {
        let n = self.n;
        let mut violations = Vec::new();
        for i in 0..n {
            if !self.leq(i, i) {
                violations.push(PosetViolation::Reflexivity(i));
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if self.leq(i, j) && self.leq(j, i) {
                    violations.push(PosetViolation::Antisymmetry(i, j));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if !self.leq(i, j) {
                    continue;
                }
                for k in 0..n {
                    if self.leq(j, k) && !self.leq(i, k) {
                        violations.push(PosetViolation::Transitivity(i, j, k));
                    }
                }
            }
        }
        PosetReport { violations }
    }

    pub fn glb(&self, a: Elem, b: Elem) -> MeetResult {
        self.greatest(|x| self.leq(x, a) && self.leq(x, b))
    }

    pub fn lub(&self, a: Elem, b: Elem) -> MeetResult {
        self.least(|x| self.leq(a, x) && self.leq(b, x))
    }

    /// Greatest element of `{x : pred(x)}`, if there is one.
    pub fn greatest(&self, pred: impl Fn(Elem) -> bool) -> MeetResult {
        let members: Vec<Elem> = (0..self.n).filter(|&x| pred(x)).collect();
        let Some(&cand) = members.iter().max_by_key(|&&x| self.down_size(x)) else {
            return MeetResult::DoesNotExist;
        };
        if members.iter().all(|&x| self.leq(x, cand)) {
            MeetResult::Exists(cand)
        } else {
            MeetResult::DoesNotExist
        }
    }

    pub fn least(&self, pred: impl Fn(Elem) -> bool) -> MeetResult {
        let members: Vec<Elem> = (0..self.n).filter(|&x| pred(x)).collect();
        let Some(&cand) = members.iter().max_by_key(|&&x| self.up_size(x)) else {
            return MeetResult::DoesNotExist;
        };
        if members.iter().all(|&x| self.leq(cand, x)) {
            MeetResult::Exists(cand)
        } else {
            MeetResult::DoesNotExist
        }
    }

    pub fn bottom(&self) -> Option<Elem> {
        (0..self.n).find(|&b| (0..self.n).all(|x| self.leq(b, x)))
    }

    pub fn top(&self) -> Option<Elem> {
        (0..self.n).find(|&t| (0..self.n).all(|x| self.leq(x, t)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PosetViolation {
    Reflexivity(Elem),
    Antisymmetry(Elem, Elem),
    Transitivity(Elem, Elem, Elem),
}

impl fmt::Display for PosetViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PosetViolation::Reflexivity(i) => write!(f, "reflexivity fails at {i}"),
            PosetViolation::Antisymmetry(i, j) => {
                write!(f, "antisymmetry fails at ({i},{j})")
            }
            PosetViolation::Transitivity(i, j, k) => {
                write!(f, "transitivity fails at ({i},{j},{k})")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PosetReport {
    pub violations: Vec<PosetViolation>,
}

impl PosetReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_poset(leq: &[Vec<bool>]) -> Result<PosetReport> {
    Ok(Order::from_matrix(leq)?.validate())
}

/// Dense `n × n` operation table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Table {
    n: usize,
    data: Vec<Elem>,
}

impl Table {
    pub fn from_fn(n: usize, mut f: impl FnMut(Elem, Elem) -> Elem) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Table { n, data }
    }

    pub fn try_from_fn(
        n: usize,
        mut f: impl FnMut(Elem, Elem) -> Result<Elem>,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j)?);
            }
        }
        Ok(Table { n, data })
    }

    pub fn from_rows(rows: &[Vec<Elem>]) -> Result<Self> {
        let n = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Input(format!(
                    "table is not square: row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if let Some(v) = row.iter().find(|&&v| v >= n) {
                return Err(Error::Input(format!(
                    "table entry {v} in row {i} is out of range 0..{n}"
                )));
            }
        }
        Ok(Table::from_fn(n, |i, j| rows[i][j]))
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, a: Elem, b: Elem) -> Elem {
        self.data[a * self.n + b]
    }

    pub fn rows(&self) -> Vec<Vec<Elem>> {
        self.data.chunks(self.n.max(1)).map(|r| r.to_vec()).take(self.n).collect()
    }
}

/// Precomputed partial meets and joins of an order.
#[derive(Clone, Debug)]
pub struct PartialOps {
    n: usize,
    meet: Vec<Option<Elem>>,
    join: Vec<Option<Elem>>,
}

impl PartialOps {
    pub fn of(order: &Order) -> Self {
        let n = order.size();
        let mut meet = vec![None; n * n];
        let mut join = vec![None; n * n];
        for a in 0..n {
            for b in a..n {
                let m = order.glb(a, b).exists();
                let j = order.lub(a, b).exists();
                meet[a * n + b] = m;
                meet[b * n + a] = m;
                join[a * n + b] = j;
                join[b * n + a] = j;
            }
        }
        PartialOps { n, meet, join }
    }

    #[inline]
    pub fn meet(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.meet[a * self.n + b]
    }

    #[inline]
    pub fn join(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.join[a * self.n + b]
    }

    pub fn meet_total(&self) -> bool {
        self.meet.iter().all(Option::is_some)
    }

    pub fn join_total(&self) -> bool {
        self.join.iter().all(Option::is_some)
    }

    pub fn meet_table(&self) -> Option<Table> {
        self.meet_total()
            .then(|| Table::from_fn(self.n, |a, b| self.meet(a, b).unwrap()))
    }

    pub fn join_table(&self) -> Option<Table> {
        self.join_total()
            .then(|| Table::from_fn(self.n, |a, b| self.join(a, b).unwrap()))
    }
}

/// One finite structure carrying an order, optional operation tables and
/// optional distinguished constants.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteAlgebra {
    pub names: Option<Vec<String>>,
    pub order: Order,
    pub meet: Option<Table>,
    pub join: Option<Table>,
    pub arrow: Option<Table>,
    pub involution: Option<Vec<Elem>>,
    pub bottom: Option<Elem>,
    pub top: Option<Elem>,
    pub center: Option<Elem>,
}

impl FiniteAlgebra {
    pub fn from_order(order: Order) -> Self {
        FiniteAlgebra {
            names: None,
            order,
            meet: None,
            join: None,
            arrow: None,
            involution: None,
            bottom: None,
            top: None,
            center: None,
        }
    }

    pub fn size(&self) -> usize {
        self.order.size()
    }

    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.order.leq(a, b)
    }

    pub fn name(&self, a: Elem) -> String {
        match &self.names {
            Some(names) => names[a].clone(),
            None => a.to_string(),
        }
    }

    pub fn with_names<S: Into<String>>(mut self, names: impl IntoIterator<Item = S>) -> Self {
        self.names = Some(names.into_iter().map(Into::into).collect());
        self
    }

    pub fn with_arrow(mut self, arrow: Table) -> Self {
        self.arrow = Some(arrow);
        self
    }

    pub fn with_involution(mut self, involution: Vec<Elem>) -> Self {
        self.involution = Some(involution);
        self
    }

    pub fn with_center(mut self, center: Elem) -> Self {
        self.center = Some(center);
        self
    }

    /// Fills in bottom and top from the order when they exist.
    pub fn with_bounds(mut self) -> Self {
        self.bottom = self.order.bottom();
        self.top = self.order.top();
        self
    }

    /// Fills in whichever of the meet and join tables are total.
    pub fn with_lattice_ops(mut self) -> Self {
        let ops = PartialOps::of(&self.order);
        self.meet = ops.meet_table();
        self.join = ops.join_table();
        self
    }

    /// Lattice with bounds derived from a poset; fails if not a lattice.
    pub fn lattice(order: Order) -> Result<Self> {
        let alg = FiniteAlgebra::from_order(order).with_lattice_ops().with_bounds();
        if alg.meet.is_none() || alg.join.is_none() {
            return Err(Error::Precondition("order is not a lattice".into()));
        }
        Ok(alg)
    }

    pub fn glb(&self, a: Elem, b: Elem) -> Result<MeetResult> {
        self.check_index(a)?;
        self.check_index(b)?;
        Ok(self.order.glb(a, b))
    }

    pub fn lub(&self, a: Elem, b: Elem) -> Result<MeetResult> {
        self.check_index(a)?;
        self.check_index(b)?;
        Ok(self.order.lub(a, b))
    }

    pub(crate) fn check_index(&self, a: Elem) -> Result<()> {
        if a < self.size() {
            Ok(())
        } else {
            Err(Error::Input(format!(
                "element {a} out of range for carrier of size {}",
                self.size()
            )))
        }
    }

    pub(crate) fn require_meet(&self, what: &str) -> Result<&Table> {
        self.meet
            .as_ref()
            .ok_or_else(|| Error::Precondition(format!("{what} needs a meet table")))
    }

    pub(crate) fn require_join(&self, what: &str) -> Result<&Table> {
        self.join
            .as_ref()
            .ok_or_else(|| Error::Precondition(format!("{what} needs a join table")))
    }

    pub(crate) fn require_arrow(&self, what: &str) -> Result<&Table> {
        self.arrow
            .as_ref()
            .ok_or_else(|| Error::Precondition(format!("{what} needs an arrow table")))
    }

    pub(crate) fn require_involution(&self, what: &str) -> Result<&[Elem]> {
        self.involution
            .as_deref()
            .ok_or_else(|| Error::Precondition(format!("{what} needs an involution")))
    }

    pub(crate) fn require_bottom(&self, what: &str) -> Result<Elem> {
        self.bottom
            .ok_or_else(|| Error::Precondition(format!("{what} needs a bottom element")))
    }

    pub(crate) fn require_top(&self, what: &str) -> Result<Elem> {
        self.top
            .ok_or_else(|| Error::Precondition(format!("{what} needs a top element")))
    }

    pub(crate) fn require_center(&self, what: &str) -> Result<Elem> {
        self.center
            .ok_or_else(|| Error::Precondition(format!("{what} needs a center element")))
    }

    /// Checks every structural invariant: the order is a partial order,
    /// tables and constants are in range and agree with the order, and the
    /// involution is a self-inverse permutation fixing the center.
    pub fn validate(&self) -> Result<()> {
        let n = self.size();
        let report = self.order.validate();
        if let Some(v) = report.violations.first() {
            return Err(Error::Consistency(format!("order is not a partial order: {v}")));
        }
        if let Some(names) = &self.names {
            if names.len() != n {
                return Err(Error::Input(format!(
                    "{} names supplied for a carrier of size {n}",
                    names.len()
                )));
            }
            for (i, a) in names.iter().enumerate() {
                if names[..i].contains(a) {
                    return Err(Error::Input(format!("duplicate element name {a:?}")));
                }
            }
        }
        for (label, table) in [("meet", &self.meet), ("join", &self.join), ("arrow", &self.arrow)] {
            if let Some(t) = table {
                if t.size() != n {
                    return Err(Error::Input(format!(
                        "{label} table has size {}, carrier has size {n}",
                        t.size()
                    )));
                }
                if let Some(v) = t.data.iter().find(|&&v| v >= n) {
                    return Err(Error::Input(format!("{label} table entry {v} out of range")));
                }
            }
        }
        if let Some(meet) = &self.meet {
            for a in 0..n {
                for b in 0..n {
                    let got = meet.get(a, b);
                    match self.order.glb(a, b) {
                        MeetResult::Exists(m) if m == got => {}
                        MeetResult::Exists(m) => {
                            return Err(Error::Consistency(format!(
                                "meet[{a}][{b}] = {got} but the greatest lower bound is {m}"
                            )))
                        }
                        MeetResult::DoesNotExist => {
                            return Err(Error::Consistency(format!(
                                "meet[{a}][{b}] = {got} but {a} and {b} have no greatest lower bound"
                            )))
                        }
                    }
                }
            }
        }
        if let Some(join) = &self.join {
            for a in 0..n {
                for b in 0..n {
                    let got = join.get(a, b);
                    match self.order.lub(a, b) {
                        MeetResult::Exists(m) if m == got => {}
                        MeetResult::Exists(m) => {
                            return Err(Error::Consistency(format!(
                                "join[{a}][{b}] = {got} but the least upper bound is {m}"
                            )))
                        }
                        MeetResult::DoesNotExist => {
                            return Err(Error::Consistency(format!(
                                "join[{a}][{b}] = {got} but {a} and {b} have no least upper bound"
                            )))
                        }
                    }
                }
            }
        }
        for (label, c) in [("bottom", self.bottom), ("top", self.top), ("center", self.center)] {
            if let Some(c) = c {
                if c >= n {
                    return Err(Error::Input(format!("{label} index {c} out of range")));
                }
            }
        }
        if let Some(b) = self.bottom {
            if let Some(x) = (0..n).find(|&x| !self.leq(b, x)) {
                return Err(Error::Consistency(format!(
                    "bottom {b} is not below element {x}"
                )));
            }
        }
        if let Some(t) = self.top {
            if let Some(x) = (0..n).find(|&x| !self.leq(x, t)) {
                return Err(Error::Consistency(format!("top {t} is not above element {x}")));
            }
        }
        if let Some(inv) = &self.involution {
            if inv.len() != n {
                return Err(Error::Input(format!(
                    "involution has length {}, carrier has size {n}",
                    inv.len()
                )));
            }
            if let Some(x) = (0..n).find(|&x| inv[x] >= n) {
                return Err(Error::Input(format!("involution[{x}] out of range")));
            }
            if let Some(x) = (0..n).find(|&x| inv[inv[x]] != x) {
                return Err(Error::Consistency(format!(
                    "involution is not self-inverse at {x}"
                )));
            }
            if let Some(c) = self.center {
                if inv[c] != c {
                    return Err(Error::Consistency(format!(
                        "center {c} is not fixed by the involution"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Order on all pairs `(a, b)` given by `a <= d` and `e <= b`, i.e. the
/// product of the order with its dual. Pair `(a, b)` has index `a * n + b`.
pub fn dual_product_order(p: &FiniteAlgebra) -> Order {
    let n = p.size();
    Order::from_fn(n * n, |i, j| {
        let (a, b) = (i / n, i % n);
        let (d, e) = (j / n, j % n);
        p.leq(a, d) && p.leq(e, b)
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistributivityReport {
    pub distributive: bool,
    /// `(x, y, z)` with `x ∧ (y ∨ z) != (x ∧ y) ∨ (x ∧ z)`.
    pub witness: Option<(Elem, Elem, Elem)>,
}

pub fn is_distributive_lattice(p: &FiniteAlgebra) -> Result<DistributivityReport> {
    let meet = p.require_meet("distributivity test")?;
    let join = p.require_join("distributivity test")?;
    p.require_bottom("distributivity test")?;
    p.require_top("distributivity test")?;
    let n = p.size();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let lhs = meet.get(x, join.get(y, z));
                let rhs = join.get(meet.get(x, y), meet.get(x, z));
                if lhs != rhs {
                    return Ok(DistributivityReport {
                        distributive: false,
                        witness: Some((x, y, z)),
                    });
                }
            }
        }
    }
    Ok(DistributivityReport {
        distributive: true,
        witness: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn validate_small_cases() {
        assert!(validate_poset(&[vec![true]]).unwrap().ok());
        assert!(validate_poset(&Order::chain(2).to_matrix()).unwrap().ok());
        let bad = vec![vec![true, true], vec![true, true]];
        assert_eq!(
            validate_poset(&bad).unwrap().violations,
            vec![PosetViolation::Antisymmetry(0, 1)]
        );
        let ragged = vec![vec![true, false], vec![true]];
        assert!(matches!(validate_poset(&ragged), Err(Error::Input(_))));
    }

    #[test]
    fn transitivity_witness() {
        // 0 <= 1 <= 2 but not 0 <= 2
        let m = vec![
            vec![true, true, false],
            vec![false, true, true],
            vec![false, false, true],
        ];
        let r = validate_poset(&m).unwrap();
        assert_eq!(r.violations, vec![PosetViolation::Transitivity(0, 1, 2)]);
    }

    #[test]
    fn glb_and_lub_examples() {
        let c2 = fixtures::chain(2);
        assert_eq!(c2.glb(0, 1).unwrap(), MeetResult::Exists(0));
        assert_eq!(c2.lub(0, 1).unwrap(), MeetResult::Exists(1));

        let anti = FiniteAlgebra::from_order(Order::from_fn(2, |i, j| i == j));
        assert_eq!(anti.glb(0, 1).unwrap(), MeetResult::DoesNotExist);

        let b4 = fixtures::boolean4();
        assert_eq!(b4.glb(1, 2).unwrap(), MeetResult::Exists(0));
        assert_eq!(b4.lub(1, 2).unwrap(), MeetResult::Exists(3));

        // bottom plus two atoms, no top
        let v = fixtures::antichain_with_bottom(2);
        assert_eq!(v.lub(1, 2).unwrap(), MeetResult::DoesNotExist);
        assert_eq!(v.glb(1, 2).unwrap(), MeetResult::Exists(0));

        assert!(matches!(c2.glb(0, 5), Err(Error::Input(_))));
    }

    #[test]
    fn dual_product_order_two_chain() {
        let c2 = fixtures::chain(2);
        let d = dual_product_order(&c2);
        assert!(d.validate().ok());
        let idx = |a: usize, b: usize| a * 2 + b;
        assert!(d.leq(idx(0, 1), idx(0, 0)));
        assert!(d.leq(idx(0, 0), idx(1, 0)));
        assert!(d.leq(idx(0, 1), idx(1, 1)));
        assert!(d.leq(idx(1, 1), idx(1, 0)));
        assert!(!d.leq(idx(0, 0), idx(1, 1)));
        assert!(!d.leq(idx(1, 1), idx(0, 0)));
        assert_eq!(dual_product_order(&fixtures::chain(1)).size(), 1);
    }

    #[test]
    fn distributivity_examples() {
        for n in 1..6 {
            assert!(is_distributive_lattice(&fixtures::chain(n)).unwrap().distributive);
        }
        assert!(is_distributive_lattice(&fixtures::boolean4()).unwrap().distributive);
        let m3 = is_distributive_lattice(&fixtures::diamond_m3()).unwrap();
        assert!(!m3.distributive);
        let (x, y, z) = m3.witness.unwrap();
        let m = fixtures::diamond_m3();
        let (meet, join) = (m.meet.as_ref().unwrap(), m.join.as_ref().unwrap());
        assert_ne!(
            meet.get(x, join.get(y, z)),
            join.get(meet.get(x, y), meet.get(x, z))
        );
        let missing = FiniteAlgebra::from_order(Order::chain(2));
        assert!(matches!(
            is_distributive_lattice(&missing),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn validate_rejects_wrong_meet_cell() {
        let mut c3 = fixtures::chain(3);
        let mut rows = c3.meet.as_ref().unwrap().rows();
        rows[1][2] = 2;
        c3.meet = Some(Table::from_rows(&rows).unwrap());
        let err = c3.validate().unwrap_err();
        assert!(err.to_string().contains("meet[1][2]"), "{err}");
    }
}
