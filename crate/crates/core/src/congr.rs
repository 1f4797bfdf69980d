//! Congruences, well-behaved congruences and their quotients, filters and
//! congruent filters.
//!
//! A [`Congruence`] is stored as a block assignment where every block is
//! labelled by its smallest member, so two equal relations always compare
//! equal. Compatibility with operations is never stored; it is recomputed.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finord::{Elem, FiniteAlgebra, Order, Table};
use crate::kalman::{self, center_algebra, CenterAlgebra, KCondition};
use crate::varieties::{CheckReport, Ctx};

/// Union-find over `0..n` with the smaller root kept as representative.
struct Partition {
    parent: Vec<Elem>,
}

impl Partition {
    fn new(n: usize) -> Self {
        Partition {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: Elem) -> Elem {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// True when the two classes were distinct.
    fn union(&mut self, a: Elem, b: Elem) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    fn into_congruence(mut self) -> Congruence {
        let n = self.parent.len();
        let blocks = (0..n).map(|x| self.find(x)).collect();
        Congruence { blocks }
    }
}

/// An equivalence relation on `0..n`; `blocks[x]` is the least element
/// related to `x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Congruence {
    blocks: Vec<Elem>,
}

impl Congruence {
    pub fn identity(n: usize) -> Self {
        Congruence {
            blocks: (0..n).collect(),
        }
    }

    pub fn total(n: usize) -> Self {
        Congruence { blocks: vec![0; n] }
    }

    /// From any labelling: `labels[x] == labels[y]` iff `x` and `y` are related.
    pub fn from_labels<T: PartialEq>(labels: &[T]) -> Self {
        let blocks = (0..labels.len())
            .map(|x| (0..=x).find(|&y| labels[y] == labels[x]).unwrap())
            .collect();
        Congruence { blocks }
    }

    /// The least equivalence containing `pairs`.
    pub fn from_pairs(n: usize, pairs: &[(Elem, Elem)]) -> Result<Self> {
        let mut p = Partition::new(n);
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::Input(format!(
                    "pair ({a}, {b}) out of range for carrier of size {n}"
                )));
            }
            p.union(a, b);
        }
        Ok(p.into_congruence())
    }

    /// From explicit blocks, which must cover `0..n` exactly once.
    pub fn from_blocks(n: usize, blocks: &[Vec<Elem>]) -> Result<Self> {
        let mut seen = vec![false; n];
        let mut p = Partition::new(n);
        for block in blocks {
            for &x in block {
                if x >= n {
                    return Err(Error::Input(format!("element {x} out of range")));
                }
                if std::mem::replace(&mut seen[x], true) {
                    return Err(Error::Input(format!("element {x} is in two blocks")));
                }
                p.union(block[0], x);
            }
        }
        if let Some(x) = seen.iter().position(|s| !s) {
            return Err(Error::Input(format!("element {x} is in no block")));
        }
        Ok(p.into_congruence())
    }

    pub fn size(&self) -> usize {
        self.blocks.len()
    }

    /// Least element of the block containing `x`.
    pub fn block_of(&self, x: Elem) -> Elem {
        self.blocks[x]
    }

    pub fn related(&self, a: Elem, b: Elem) -> bool {
        self.blocks[a] == self.blocks[b]
    }

    /// Block representatives in increasing order.
    pub fn representatives(&self) -> Vec<Elem> {
        (0..self.size()).filter(|&x| self.blocks[x] == x).collect()
    }

    pub fn num_blocks(&self) -> usize {
        self.representatives().len()
    }

    pub fn blocks(&self) -> Vec<Vec<Elem>> {
        self.representatives()
            .into_iter()
            .map(|r| (0..self.size()).filter(|&x| self.blocks[x] == r).collect())
            .collect()
    }

    pub fn matrix(&self) -> Vec<Vec<bool>> {
        let n = self.size();
        (0..n)
            .map(|a| (0..n).map(|b| self.related(a, b)).collect())
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.blocks.iter().enumerate().all(|(x, &b)| x == b)
    }

    pub fn is_total(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    /// `self ⊆ other` as relations.
    pub fn le(&self, other: &Congruence) -> bool {
        (0..self.size()).all(|x| other.related(x, self.blocks[x]))
    }

    pub fn meet(&self, other: &Congruence) -> Congruence {
        let labels: Vec<(Elem, Elem)> = (0..self.size())
            .map(|x| (self.blocks[x], other.blocks[x]))
            .collect();
        Congruence::from_labels(&labels)
    }

    pub fn join(&self, other: &Congruence) -> Congruence {
        let mut p = Partition::new(self.size());
        for x in 0..self.size() {
            p.union(x, self.blocks[x]);
            p.union(x, other.blocks[x]);
        }
        p.into_congruence()
    }

    /// First operation and arguments at which compatibility fails.
    pub fn compatibility_failure(&self, ops: &[Op]) -> Option<(usize, Vec<Elem>)> {
        let n = self.size();
        for (i, op) in ops.iter().enumerate() {
            match op {
                Op::Unary(f) => {
                    for a in 0..n {
                        let b = self.blocks[a];
                        if !self.related(f[a], f[b]) {
                            return Some((i, vec![a, b]));
                        }
                    }
                }
                Op::Binary(t) => {
                    for a in 0..n {
                        let a2 = self.blocks[a];
                        for b in 0..n {
                            let b2 = self.blocks[b];
                            if !self.related(t.get(a, b), t.get(a2, b2)) {
                                return Some((i, vec![a, a2, b, b2]));
                            }
                        }
                    }
                }
            }
        }
        None
    }

    pub fn is_compatible(&self, ops: &[Op]) -> bool {
        self.compatibility_failure(ops).is_none()
    }
}

impl fmt::Display for Congruence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks()
            .iter()
            .map(|b| {
                let items: Vec<String> = b.iter().map(|x| x.to_string()).collect();
                items.join(" ")
            })
            .collect();
        write!(f, "{}", parts.join(" | "))
    }
}

/// A basic operation on `0..n`.
#[derive(Clone, Debug)]
pub enum Op {
    Unary(Vec<Elem>),
    Binary(Table),
}

impl Op {
    fn arity_size(&self) -> usize {
        match self {
            Op::Unary(f) => f.len(),
            Op::Binary(t) => t.size(),
        }
    }
}

/// Every operation stored on the algebra: meet, join, arrow, involution.
pub fn algebra_ops(alg: &FiniteAlgebra) -> Vec<Op> {
    let mut ops = Vec::new();
    ops.extend(alg.meet.clone().map(Op::Binary));
    ops.extend(alg.join.clone().map(Op::Binary));
    ops.extend(alg.arrow.clone().map(Op::Binary));
    ops.extend(alg.involution.clone().map(Op::Unary));
    ops
}

/// Least congruence containing `(a, b)`. Every pair merged is pushed through
/// every translation until nothing new is merged.
fn principal(n: usize, ops: &[Op], a: Elem, b: Elem) -> Congruence {
    let mut p = Partition::new(n);
    let mut queue = VecDeque::new();
    if p.union(a, b) {
        queue.push_back((a, b));
    }
    while let Some((x, y)) = queue.pop_front() {
        for op in ops {
            match op {
                Op::Unary(f) => {
                    if p.union(f[x], f[y]) {
                        queue.push_back((f[x], f[y]));
                    }
                }
                Op::Binary(t) => {
                    for z in 0..n {
                        for (u, v) in [(t.get(x, z), t.get(y, z)), (t.get(z, x), t.get(z, y))] {
                            if p.union(u, v) {
                                queue.push_back((u, v));
                            }
                        }
                    }
                }
            }
        }
    }
    p.into_congruence()
}

/// All equivalence relations on `0..n` compatible with every operation,
/// sorted. Computed as the joins of principal congruences.
pub fn enumerate_congruences(n: usize, ops: &[Op]) -> Result<Vec<Congruence>> {
    if let Some(op) = ops.iter().find(|op| op.arity_size() != n) {
        return Err(Error::Input(format!(
            "operation on {} elements for a carrier of size {n}",
            op.arity_size()
        )));
    }
    let mut principals = BTreeSet::new();
    for a in 0..n {
        for b in a + 1..n {
            principals.insert(principal(n, ops, a, b));
        }
    }
    let principals: Vec<Congruence> = principals.into_iter().collect();
    let mut found = BTreeSet::from([Congruence::identity(n)]);
    let mut frontier = vec![Congruence::identity(n)];
    while let Some(theta) = frontier.pop() {
        for p in &principals {
            let j = theta.join(p);
            if found.insert(j.clone()) {
                frontier.push(j);
            }
        }
    }
    Ok(found.into_iter().collect())
}

/// `Con` of an algebra with respect to all of its stored operations.
pub fn algebra_congruences(alg: &FiniteAlgebra) -> Result<Vec<Congruence>> {
    enumerate_congruences(alg.size(), &algebra_ops(alg))
}

/// Which clause of well-behavedness failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WbClause {
    /// Not compatible with the arrow and the involution.
    C1,
    /// Relatedness not determined by `x∨c` and `∼x∨c`.
    C2,
    /// Meets of related elements above the center are not related.
    C3,
}

impl fmt::Display for WbClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            WbClause::C1 => "C1",
            WbClause::C2 => "C2",
            WbClause::C3 => "C3",
        };
        f.write_str(s)
    }
}

/// Where the meet-compatibility clause is quantified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MeetScope {
    /// Over the elements above the center, the defining version.
    #[default]
    Center,
    /// Over all of the carrier wherever both meets exist. Diagnostic only.
    Carrier,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WbReport {
    pub ok: bool,
    pub clause: Option<WbClause>,
    pub witness: Vec<Elem>,
}

impl WbReport {
    fn pass() -> Self {
        WbReport {
            ok: true,
            clause: None,
            witness: Vec::new(),
        }
    }

    fn fail(clause: WbClause, witness: Vec<Elem>) -> Self {
        WbReport {
            ok: false,
            clause: Some(clause),
            witness,
        }
    }
}

/// Precomputed data for well-behavedness tests on one structure.
struct WbContext {
    n: usize,
    /// `x ∨ c`
    up: Vec<Elem>,
    /// `∼x ∨ c`
    neg_up: Vec<Elem>,
    ops: Vec<Op>,
    center: CenterAlgebra,
    /// Meet on the carrier where it exists.
    meet: Vec<Option<Elem>>,
}

impl WbContext {
    fn new(t: &FiniteAlgebra) -> Result<Self> {
        let report = kalman::check_k_conditions(t, &KCondition::BASIC)?;
        require_ok(&report, t, "well-behaved congruences need K1-K5")?;
        let ctx = Ctx::new(t);
        let n = t.size();
        let inv = t.involution.clone().expect("checked by the K battery");
        let up = (0..n)
            .map(|x| {
                ctx.vc(x).ok_or_else(|| {
                    Error::Precondition(format!("{} ∨ c does not exist", t.name(x)))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let neg_up = (0..n).map(|x| up[inv[x]]).collect();
        let ops = vec![
            Op::Binary(t.arrow.clone().expect("checked by the K battery")),
            Op::Unary(inv),
        ];
        let center = center_algebra(t)?;
        let meet = (0..n * n).map(|i| ctx.meet(i / n, i % n)).collect();
        Ok(WbContext {
            n,
            up,
            neg_up,
            ops,
            center,
            meet,
        })
    }

    fn check(&self, theta: &Congruence, scope: MeetScope) -> WbReport {
        if let Some((_, w)) = theta.compatibility_failure(&self.ops) {
            return WbReport::fail(WbClause::C1, w);
        }
        for x in 0..self.n {
            for y in 0..self.n {
                let lhs = theta.related(x, y);
                let rhs = theta.related(self.up[x], self.up[y])
                    && theta.related(self.neg_up[x], self.neg_up[y]);
                if lhs != rhs {
                    return WbReport::fail(WbClause::C2, vec![x, y]);
                }
            }
        }
        let domain: Vec<Elem> = match scope {
            MeetScope::Center => self.center.embedding.clone(),
            MeetScope::Carrier => (0..self.n).collect(),
        };
        for &x in &domain {
            for &y in domain.iter().filter(|&&y| theta.related(x, y)) {
                for &z in &domain {
                    for &w in domain.iter().filter(|&&w| theta.related(z, w)) {
                        let (Some(m1), Some(m2)) = (self.meet(x, z), self.meet(y, w)) else {
                            continue;
                        };
                        if !theta.related(m1, m2) {
                            return WbReport::fail(WbClause::C3, vec![x, y, z, w]);
                        }
                    }
                }
            }
        }
        WbReport::pass()
    }

    fn meet(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.meet[a * self.n + b]
    }
}

fn require_ok(report: &CheckReport, t: &FiniteAlgebra, what: &str) -> Result<()> {
    if report.ok {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{what}: {}", report.describe(t))))
    }
}

fn require_same_size(t: &FiniteAlgebra, theta: &Congruence) -> Result<()> {
    if theta.size() == t.size() {
        Ok(())
    } else {
        Err(Error::Input(format!(
            "relation on {} elements for a carrier of size {}",
            theta.size(),
            t.size()
        )))
    }
}

/// Checks the three clauses of well-behavedness, with the meet clause over
/// the center as defined.
pub fn is_well_behaved(t: &FiniteAlgebra, theta: &Congruence) -> Result<WbReport> {
    is_well_behaved_with(t, theta, MeetScope::Center)
}

pub fn is_well_behaved_with(
    t: &FiniteAlgebra,
    theta: &Congruence,
    scope: MeetScope,
) -> Result<WbReport> {
    require_same_size(t, theta)?;
    Ok(WbContext::new(t)?.check(theta, scope))
}

/// All well-behaved congruences, sorted.
pub fn enumerate_wb_congruences(t: &FiniteAlgebra) -> Result<Vec<Congruence>> {
    let wb = WbContext::new(t)?;
    Ok(enumerate_congruences(wb.n, &wb.ops)?
        .into_iter()
        .filter(|theta| wb.check(theta, MeetScope::Center).ok)
        .collect())
}

/// Congruences of the center algebra with respect to its meet and arrow.
pub fn center_congruences(center: &CenterAlgebra) -> Result<Vec<Congruence>> {
    let alg = &center.algebra;
    let meet = alg.require_meet("center congruences")?.clone();
    let arrow = alg.require_arrow("center congruences")?.clone();
    enumerate_congruences(alg.size(), &[Op::Binary(meet), Op::Binary(arrow)])
}

/// Restriction of `θ` to the elements above the center, indexed as in
/// [`center_algebra`].
pub fn gamma_restrict(t: &FiniteAlgebra, theta: &Congruence) -> Result<Congruence> {
    require_same_size(t, theta)?;
    let center = center_algebra(t)?;
    let labels: Vec<Elem> = center.embedding.iter().map(|&x| theta.block_of(x)).collect();
    Ok(Congruence::from_labels(&labels))
}

/// `(x, y)` related iff `x∨c, y∨c` and `∼x∨c, ∼y∨c` are related by `τ`.
pub fn sigma_expand(t: &FiniteAlgebra, tau: &Congruence) -> Result<Congruence> {
    let wb = WbContext::new(t)?;
    if tau.size() != wb.center.embedding.len() {
        return Err(Error::Input(format!(
            "relation on {} elements for a center of size {}",
            tau.size(),
            wb.center.embedding.len()
        )));
    }
    let idx = |x: Elem| wb.center.index_of(x).expect("x ∨ c lies above c");
    let labels: Vec<(Elem, Elem)> = (0..wb.n)
        .map(|x| (tau.block_of(idx(wb.up[x])), tau.block_of(idx(wb.neg_up[x]))))
        .collect();
    Ok(Congruence::from_labels(&labels))
}

/// The quotient by a well-behaved congruence, ordered by
/// `x/θ ≪ y/θ` iff `(x∨c)∧(y∨c) θ x∨c` and `(∼y∨c)∧(∼x∨c) θ ∼y∨c`.
/// Element `i` of the result is the block whose least member is the `i`-th
/// representative.
pub fn quotient_wb(t: &FiniteAlgebra, theta: &Congruence) -> Result<FiniteAlgebra> {
    require_same_size(t, theta)?;
    let wb = WbContext::new(t)?;
    let report = wb.check(theta, MeetScope::Center);
    if !report.ok {
        return Err(Error::Precondition(format!(
            "relation is not well-behaved: {} fails at {:?}",
            report.clause.unwrap(),
            report.witness
        )));
    }
    let reps = theta.representatives();
    let m = reps.len();
    let class = |x: Elem| reps.binary_search(&theta.block_of(x)).unwrap();
    let center_meet = |a: Elem, b: Elem| -> Result<Elem> {
        wb.meet(a, b).ok_or_else(|| {
            Error::Precondition(format!(
                "meet of {} and {} above the center does not exist",
                t.name(a),
                t.name(b)
            ))
        })
    };
    let mut leq = vec![vec![false; m]; m];
    for (i, &x) in reps.iter().enumerate() {
        for (j, &y) in reps.iter().enumerate() {
            let first = theta.related(center_meet(wb.up[x], wb.up[y])?, wb.up[x]);
            let second =
                theta.related(center_meet(wb.neg_up[y], wb.neg_up[x])?, wb.neg_up[y]);
            leq[i][j] = first && second;
        }
    }
    let order = Order::from_matrix(&leq)?;
    if let Some(v) = order.validate().violations.first() {
        return Err(Error::theorem("the quotient order is a partial order", v.to_string()));
    }
    for x in 0..wb.n {
        for y in 0..wb.n {
            if t.leq(x, y) && !order.leq(class(x), class(y)) {
                return Err(Error::theorem(
                    "the projection onto the quotient is monotone",
                    format!("{} ≤ {}", t.name(x), t.name(y)),
                ));
            }
        }
    }
    let inv = t.involution.as_ref().unwrap();
    let arrow = t.arrow.as_ref().unwrap();
    let mut q = FiniteAlgebra::from_order(order).with_lattice_ops();
    q.involution = Some(reps.iter().map(|&x| class(inv[x])).collect());
    q.arrow = Some(Table::from_fn(m, |i, j| class(arrow.get(reps[i], reps[j]))));
    q.center = t.center.map(class);
    q.bottom = t.bottom.map(class);
    q.top = t.top.map(class);
    if let Some(names) = &t.names {
        q.names = Some(reps.iter().map(|&x| names[x].clone()).collect());
    }
    q.validate()
        .map_err(|e| Error::theorem("the quotient is a well-formed structure", e.to_string()))?;
    let battery = kalman::check_khis0(&q)?;
    if !battery.ok {
        return Err(Error::theorem(
            "the quotient by a well-behaved congruence is in KhIS0",
            battery.describe(&q),
        ));
    }
    Ok(q)
}

/// Membership vector of a filter.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Filter {
    members: Vec<bool>,
}

impl Filter {
    pub fn from_members(members: Vec<bool>) -> Self {
        Filter { members }
    }

    /// `{x : a ≤ x}`
    pub fn principal(alg: &FiniteAlgebra, a: Elem) -> Self {
        Filter {
            members: (0..alg.size()).map(|x| alg.leq(a, x)).collect(),
        }
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.members[x]
    }

    pub fn elements(&self) -> Vec<Elem> {
        (0..self.members.len()).filter(|&x| self.members[x]).collect()
    }

    pub fn members(&self) -> &[bool] {
        &self.members
    }

    /// Nonempty, up-closed and closed under meets.
    pub fn is_filter(&self, alg: &FiniteAlgebra) -> bool {
        let n = alg.size();
        if self.members.len() != n || !self.members.iter().any(|&m| m) {
            return false;
        }
        let ctx = Ctx::new(alg);
        let els = self.elements();
        let up = els
            .iter()
            .all(|&a| (0..n).all(|b| !alg.leq(a, b) || self.members[b]));
        let meets = els.iter().all(|&a| {
            els.iter()
                .all(|&b| ctx.meet(a, b).is_some_and(|m| self.members[m]))
        });
        up && meets
    }
}

impl fmt::Display for Filter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.elements().iter().map(|x| x.to_string()).collect();
        write!(f, "{{{}}}", items.join(", "))
    }
}

/// All filters. With a total meet every filter is the up-set of the meet of
/// its members, so these are exactly the principal up-sets.
pub fn enumerate_filters(h: &FiniteAlgebra) -> Result<Vec<Filter>> {
    h.require_meet("filter enumeration")?;
    let set: BTreeSet<Filter> = (0..h.size()).map(|a| Filter::principal(h, a)).collect();
    Ok(set.into_iter().collect())
}

struct TermCtx<'a> {
    ctx: Ctx<'a>,
}

impl<'a> TermCtx<'a> {
    fn new(h: &'a FiniteAlgebra, what: &str) -> Result<Self> {
        h.require_meet(what)?;
        h.require_arrow(what)?;
        Ok(TermCtx { ctx: Ctx::new(h) })
    }

    fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.ctx.meet(a, b).unwrap()
    }

    fn arrow(&self, a: Elem, b: Elem) -> Elem {
        self.ctx.arrow(a, b).unwrap()
    }

    fn biarrow(&self, a: Elem, b: Elem) -> Elem {
        self.meet(self.arrow(a, b), self.arrow(b, a))
    }

    fn t(&self, a: Elem, b: Elem, f: Elem) -> Elem {
        self.biarrow(self.arrow(a, b), self.arrow(self.meet(a, f), self.meet(b, f)))
    }
}

/// `a ↔ b = (a → b) ∧ (b → a)`
pub fn biarrow(h: &FiniteAlgebra, a: Elem, b: Elem) -> Result<Elem> {
    h.check_index(a)?;
    h.check_index(b)?;
    Ok(TermCtx::new(h, "the biarrow")?.biarrow(a, b))
}

/// `t(a, b, f) = (a → b) ↔ ((a ∧ f) → (b ∧ f))`
pub fn t_term(h: &FiniteAlgebra, a: Elem, b: Elem, f: Elem) -> Result<Elem> {
    for x in [a, b, f] {
        h.check_index(x)?;
    }
    Ok(TermCtx::new(h, "the t-term")?.t(a, b, f))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilterReport {
    pub congruent: bool,
    /// `(a, b, f)` with `f` in the filter and `t(a, b, f)` outside it.
    pub witness: Option<(Elem, Elem, Elem)>,
}

fn require_filter(h: &FiniteAlgebra, f: &Filter) -> Result<()> {
    if f.is_filter(h) {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{f} is not a filter")))
    }
}

pub fn is_congruent_filter(h: &FiniteAlgebra, f: &Filter) -> Result<FilterReport> {
    require_filter(h, f)?;
    let tc = TermCtx::new(h, "congruent filters")?;
    let n = h.size();
    for a in 0..n {
        for b in 0..n {
            for g in f.elements() {
                if !f.contains(tc.t(a, b, g)) {
                    return Ok(FilterReport {
                        congruent: false,
                        witness: Some((a, b, g)),
                    });
                }
            }
        }
    }
    Ok(FilterReport {
        congruent: true,
        witness: None,
    })
}

/// The congruent filters among [`enumerate_filters`].
pub fn enumerate_congruent_filters(h: &FiniteAlgebra) -> Result<Vec<Filter>> {
    let mut out = Vec::new();
    for f in enumerate_filters(h)? {
        if is_congruent_filter(h, &f)?.congruent {
            out.push(f);
        }
    }
    Ok(out)
}

/// `Θ(F) = {(a, b) : a ∧ f = b ∧ f for some f ∈ F}`.
pub fn theta_of_filter(h: &FiniteAlgebra, f: &Filter) -> Result<Congruence> {
    let report = is_congruent_filter(h, f)?;
    if !report.congruent {
        return Err(Error::Precondition(format!("{f} is not a congruent filter")));
    }
    let relation = meet_relation(h, f);
    let n = h.size();
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if relation[a][b] {
                pairs.push((a, b));
            }
        }
    }
    let theta = Congruence::from_pairs(n, &pairs)?;
    if theta.matrix() != relation {
        return Err(Error::theorem(
            "Θ(F) is an equivalence relation",
            format!("F = {f}"),
        ));
    }
    Ok(theta)
}

/// The relation `a ∧ f = b ∧ f` for some `f ∈ F`, as a matrix.
pub fn meet_relation(h: &FiniteAlgebra, f: &Filter) -> Vec<Vec<bool>> {
    let ctx = Ctx::new(h);
    let n = h.size();
    (0..n)
        .map(|a| {
            (0..n)
                .map(|b| f.elements().iter().any(|&g| ctx.meet(a, g) == ctx.meet(b, g)))
                .collect()
        })
        .collect()
}

/// The relation `a ↔ b ∈ F`, as a matrix.
pub fn biarrow_relation(h: &FiniteAlgebra, f: &Filter) -> Result<Vec<Vec<bool>>> {
    let tc = TermCtx::new(h, "the biarrow relation")?;
    let n = h.size();
    Ok((0..n)
        .map(|a| (0..n).map(|b| f.contains(tc.biarrow(a, b))).collect())
        .collect())
}

/// The block of the top element.
pub fn top_class(h: &FiniteAlgebra, theta: &Congruence) -> Result<Filter> {
    let top = h.require_top("the top class")?;
    require_same_size(h, theta)?;
    Ok(Filter::from_members(
        (0..h.size()).map(|x| theta.related(x, top)).collect(),
    ))
}

/// Least congruent filter containing `xs`, by iterating the t-terms from the
/// filter generated by `xs ∪ {1}` until nothing changes.
pub fn congruent_filter_generated(h: &FiniteAlgebra, xs: &[Elem]) -> Result<Filter> {
    let top = h.require_top("generated congruent filter")?;
    let tc = TermCtx::new(h, "generated congruent filter")?;
    for &x in xs {
        h.check_index(x)?;
    }
    let n = h.size();
    let mut least = xs.iter().fold(top, |acc, &x| tc.meet(acc, x));
    loop {
        let current = Filter::principal(h, least);
        let mut next = least;
        for g in current.elements() {
            for a in 0..n {
                for b in 0..n {
                    next = tc.meet(next, tc.t(a, b, g));
                }
            }
        }
        if next == least {
            return Ok(current);
        }
        least = next;
    }
}

/// The well-behaved congruences of one structure, enumerated once.
#[derive(Clone, Debug)]
pub struct WbLattice {
    n: usize,
    pub members: Vec<Congruence>,
}

impl WbLattice {
    pub fn new(t: &FiniteAlgebra) -> Result<Self> {
        let battery = kalman::check_khis0(t)?;
        require_ok(&battery, t, "well-behaved congruence lattice needs KhIS0")?;
        Ok(WbLattice {
            n: t.size(),
            members: enumerate_wb_congruences(t)?,
        })
    }

    /// Least member containing `pairs`: the intersection of all members
    /// that contain them.
    pub fn generated(&self, pairs: &[(Elem, Elem)]) -> Result<Congruence> {
        if let Some(&(x, y)) = pairs.iter().find(|&&(x, y)| x >= self.n || y >= self.n) {
            return Err(Error::Input(format!("pair ({x}, {y}) out of range")));
        }
        Ok(self
            .members
            .iter()
            .filter(|theta| pairs.iter().all(|&(x, y)| theta.related(x, y)))
            .fold(Congruence::total(self.n), |acc, theta| acc.meet(theta)))
    }
}

/// Least well-behaved congruence containing `pairs`.
pub fn principal_wb_congruence(t: &FiniteAlgebra, pairs: &[(Elem, Elem)]) -> Result<Congruence> {
    WbLattice::new(t)?.generated(pairs)
}

/// `q(x, y) = ((x∨c) ↔ (y∨c)) ∧ ((∼x∨c) ↔ (∼y∨c))`
pub fn q_term(t: &FiniteAlgebra, x: Elem, y: Elem) -> Result<Elem> {
    t.check_index(x)?;
    t.check_index(y)?;
    let c = t.require_center("the q-term")?;
    let inv = t.require_involution("the q-term")?;
    t.require_arrow("the q-term")?;
    let ctx = Ctx::new(t);
    let missing = |what: String| Error::Input(format!("{what} does not exist"));
    let join_c = |a: Elem| {
        ctx.join(a, c)
            .ok_or_else(|| missing(format!("{} ∨ c", t.name(a))))
    };
    let bi = |a: Elem, b: Elem| {
        ctx.biarrow(a, b)
            .ok_or_else(|| missing(format!("{} ↔ {}", t.name(a), t.name(b))))
    };
    let left = bi(join_c(x)?, join_c(y)?)?;
    let right = bi(join_c(inv[x])?, join_c(inv[y])?)?;
    ctx.meet(left, right)
        .ok_or_else(|| missing(format!("{} ∧ {}", t.name(left), t.name(right))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::kalman::{kalman, KalmanLevel};
    use crate::varieties;

    /// All set partitions of `0..n` as restricted growth strings.
    fn all_partitions(n: usize) -> Vec<Congruence> {
        fn go(i: usize, rgs: &mut Vec<usize>, max: usize, out: &mut Vec<Congruence>) {
            if i == rgs.len() {
                out.push(Congruence::from_labels(rgs));
                return;
            }
            for v in 0..=max + 1 {
                rgs[i] = v;
                go(i + 1, rgs, max.max(v), out);
            }
        }
        if n == 0 {
            return vec![Congruence::identity(0)];
        }
        let mut out = Vec::new();
        let mut rgs = vec![0; n];
        go(1, &mut rgs, 0, &mut out);
        out
    }

    fn brute_force(alg: &FiniteAlgebra) -> Vec<Congruence> {
        let ops = algebra_ops(alg);
        let mut out: Vec<Congruence> = all_partitions(alg.size())
            .into_iter()
            .filter(|c| c.is_compatible(&ops))
            .collect();
        out.sort();
        out
    }

    #[test]
    fn partition_counts_are_bell_numbers() {
        let bell = [1, 1, 2, 5, 15, 52];
        for (n, &b) in bell.iter().enumerate() {
            assert_eq!(all_partitions(n).len(), b);
        }
    }

    #[test]
    fn chain_congruence_counts() {
        assert_eq!(algebra_congruences(&chain(1)).unwrap().len(), 1);
        assert_eq!(algebra_congruences(&chain(2)).unwrap().len(), 2);
        assert_eq!(algebra_congruences(&chain(3)).unwrap().len(), 4);
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for alg in [
            chain(4),
            boolean4(),
            diamond_m3(),
            pentagon_n5(),
            three_chain_hemi(),
            boolean4_hilbert(),
            kleene_chain3(),
            with_heyting_arrow(chain(5)),
        ] {
            assert_eq!(algebra_congruences(&alg).unwrap(), brute_force(&alg));
        }
    }

    #[test]
    fn congruence_lattice_operations() {
        let a = Congruence::from_pairs(4, &[(0, 1)]).unwrap();
        let b = Congruence::from_pairs(4, &[(1, 2)]).unwrap();
        let j = a.join(&b);
        assert!(j.related(0, 2) && !j.related(0, 3));
        assert!(a.meet(&b).is_identity());
        assert!(a.le(&j) && !j.le(&a));
        assert_eq!(j.to_string(), "0 1 2 | 3");
        let blocks = Congruence::from_blocks(4, &[vec![3, 1], vec![0], vec![2]]).unwrap();
        assert_eq!(blocks.block_of(3), 1);
        assert!(Congruence::from_blocks(3, &[vec![0, 1]]).is_err());
    }

    fn k_heyting(h: FiniteAlgebra) -> FiniteAlgebra {
        kalman(&with_heyting_arrow(h), KalmanLevel::Heyting).unwrap().algebra
    }

    fn k_his(h: FiniteAlgebra) -> FiniteAlgebra {
        kalman(&h, KalmanLevel::His).unwrap().algebra
    }

    #[test]
    fn identity_and_total_are_well_behaved() {
        let t = k_heyting(chain(3));
        for theta in [Congruence::identity(t.size()), Congruence::total(t.size())] {
            assert!(is_well_behaved(&t, &theta).unwrap().ok);
        }
    }

    #[test]
    fn well_behavedness_needs_the_k_conditions() {
        assert!(matches!(
            is_well_behaved(&kleene_chain3(), &Congruence::identity(3)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn arrow_involution_congruence_failing_c2() {
        let sources = [
            with_heyting_arrow(chain(3)),
            with_heyting_arrow(boolean4()),
            three_chain_hemi(),
            boolean4_hilbert(),
            two_chain_semi_heyting(),
        ];
        let failing = sources
            .iter()
            .flat_map(|h| {
                let t = k_his(h.clone());
                let wb = WbContext::new(&t).unwrap();
                enumerate_congruences(t.size(), &wb.ops)
                    .unwrap()
                    .into_iter()
                    .map(move |theta| wb.check(&theta, MeetScope::Center))
            })
            .find(|r| r.clause == Some(WbClause::C2))
            .expect("some (→,∼)-congruence fails C2");
        assert_eq!(failing.witness.len(), 2);
    }

    #[test]
    fn wb_counts_match_source_congruences() {
        let t = k_his(two_chain_semi_heyting());
        assert_eq!(enumerate_wb_congruences(&t).unwrap().len(), 2);
        let h = boolean4_hilbert();
        let t = k_his(h.clone());
        let ops = [
            Op::Binary(h.meet.clone().unwrap()),
            Op::Binary(h.arrow.clone().unwrap()),
        ];
        let source = enumerate_congruences(4, &ops).unwrap();
        assert_eq!(enumerate_wb_congruences(&t).unwrap().len(), source.len());
        assert_eq!(enumerate_wb_congruences(&k_his(chain(1).with_arrow(
            Table::from_rows(&[vec![0]]).unwrap()
        ))).unwrap().len(), 1);
    }

    #[test]
    fn gamma_sigma_round_trip() {
        let t = k_heyting(boolean4());
        let center = center_algebra(&t).unwrap();
        let taus = center_congruences(&center).unwrap();
        let thetas = enumerate_wb_congruences(&t).unwrap();
        assert_eq!(taus.len(), thetas.len());
        for tau in &taus {
            let sigma = sigma_expand(&t, tau).unwrap();
            assert!(is_well_behaved(&t, &sigma).unwrap().ok);
            assert_eq!(&gamma_restrict(&t, &sigma).unwrap(), tau);
        }
        for theta in &thetas {
            let gamma = gamma_restrict(&t, theta).unwrap();
            assert_eq!(&sigma_expand(&t, &gamma).unwrap(), theta);
        }
    }

    #[test]
    fn gamma_of_filter_congruence() {
        // collapsing the filter {a, 1} of the 3-chain
        let h = with_heyting_arrow(chain(3));
        let k = kalman(&h, KalmanLevel::Heyting).unwrap();
        let t = &k.algebra;
        let f = Filter::principal(&h, 1);
        let source_theta = theta_of_filter(&h, &f).unwrap();
        let center = center_algebra(t).unwrap();
        let tau = Congruence::from_labels(
            &center
                .embedding
                .iter()
                .map(|&x| source_theta.block_of(k.pair(x).0))
                .collect::<Vec<_>>(),
        );
        let theta = sigma_expand(t, &tau).unwrap();
        assert!(!theta.is_identity() && !theta.is_total());
        assert_eq!(gamma_restrict(t, &theta).unwrap(), tau);
    }

    #[test]
    fn quotients() {
        let t = k_heyting(chain(3));
        let id = quotient_wb(&t, &Congruence::identity(t.size())).unwrap();
        assert_eq!(id.order, t.order);
        let one = quotient_wb(&t, &Congruence::total(t.size())).unwrap();
        assert_eq!(one.size(), 1);
        let c = t.center.unwrap();
        for theta in enumerate_wb_congruences(&t).unwrap() {
            let q = quotient_wb(&t, &theta).unwrap();
            let reps = theta.representatives();
            let class = |x: Elem| reps.binary_search(&theta.block_of(x)).unwrap();
            let qctx = Ctx::new(&q);
            let tctx = Ctx::new(&t);
            for x in 0..t.size() {
                let joined = qctx.join(class(x), class(c)).expect("x/θ ∨ c/θ exists");
                assert_eq!(joined, class(tctx.vc(x).unwrap()));
            }
        }
    }

    #[test]
    fn quotient_rejects_non_wb() {
        let t = k_heyting(chain(3));
        let bad = Congruence::from_pairs(t.size(), &[(0, 1)]).unwrap();
        assert!(!is_well_behaved(&t, &bad).unwrap().ok);
        assert!(matches!(quotient_wb(&t, &bad), Err(Error::Precondition(_))));
    }

    fn subset_scan_filters(h: &FiniteAlgebra) -> Vec<Filter> {
        let n = h.size();
        let mut out: Vec<Filter> = (1u32..1 << n)
            .map(|mask| Filter::from_members((0..n).map(|i| mask >> i & 1 == 1).collect()))
            .filter(|f| f.is_filter(h))
            .collect();
        out.sort();
        out
    }

    #[test]
    fn filter_enumeration() {
        assert_eq!(enumerate_filters(&chain(2)).unwrap().len(), 2);
        assert_eq!(enumerate_filters(&chain(3)).unwrap().len(), 3);
        for h in [boolean4(), diamond_m3(), pentagon_n5(), chain(4)] {
            assert_eq!(enumerate_filters(&h).unwrap(), subset_scan_filters(&h));
        }
        // bottom, three atoms, top: one filter per element
        assert_eq!(enumerate_filters(&diamond_m3()).unwrap().len(), 5);
    }

    #[test]
    fn t_term_values() {
        let h = with_heyting_arrow(chain(2));
        assert_eq!(t_term(&h, 0, 1, 1).unwrap(), 1);
        let h = three_chain_hemi();
        let tc = TermCtx::new(&h, "test").unwrap();
        for a in 0..3 {
            for b in 0..3 {
                let ab = tc.arrow(a, b);
                assert_eq!(t_term(&h, a, b, 2).unwrap(), tc.biarrow(ab, ab));
                for f in 0..3 {
                    let rhs = tc.arrow(tc.meet(a, f), tc.meet(b, f));
                    let expect = tc.meet(tc.arrow(ab, rhs), tc.arrow(rhs, ab));
                    assert_eq!(t_term(&h, a, b, f).unwrap(), expect);
                }
            }
        }
    }

    #[test]
    fn all_filters_congruent_in_is0_and_sh() {
        for h in [
            with_heyting_arrow(boolean4()),
            with_heyting_arrow(chain(4)),
            two_chain_semi_heyting(),
        ] {
            for f in enumerate_filters(&h).unwrap() {
                assert!(is_congruent_filter(&h, &f).unwrap().congruent);
            }
        }
    }

    #[test]
    fn three_chain_hemi_filters() {
        // {a, 1}: t(1, a, a) = (1→a) ↔ (a→a) = a ↔ 1 = a ∧ (1 → a) = a, inside.
        // {1}: t(a, 1, 0) = (a→1) ↔ (0→0) = 1. Scan for the real answer.
        let h = three_chain_hemi();
        let report = is_congruent_filter(&h, &Filter::principal(&h, 2)).unwrap();
        assert!(report.congruent);
        let f = Filter::principal(&h, 1);
        let report = is_congruent_filter(&h, &f).unwrap();
        if let Some((a, b, g)) = report.witness {
            assert!(!f.contains(t_term(&h, a, b, g).unwrap()));
        }
        assert!(is_congruent_filter(&h, &Filter::principal(&h, 0)).unwrap().congruent);
    }

    #[test]
    fn theta_of_filters() {
        let h = with_heyting_arrow(chain(2));
        assert!(theta_of_filter(&h, &Filter::principal(&h, 1)).unwrap().is_identity());
        assert!(theta_of_filter(&h, &Filter::principal(&h, 0)).unwrap().is_total());
        for h in [three_chain_hemi(), boolean4_hilbert(), with_heyting_arrow(chain(4))] {
            for f in enumerate_congruent_filters(&h).unwrap() {
                let theta = theta_of_filter(&h, &f).unwrap();
                assert_eq!(theta.matrix(), biarrow_relation(&h, &f).unwrap());
                assert!(theta.is_compatible(&algebra_ops(&h)));
            }
        }
    }

    #[test]
    fn congruences_correspond_to_congruent_filters() {
        for h in [three_chain_hemi(), boolean4_hilbert(), two_chain_semi_heyting()] {
            let cons = algebra_congruences(&h).unwrap();
            let mut filters: Vec<Filter> =
                cons.iter().map(|t| top_class(&h, t).unwrap()).collect();
            filters.sort();
            assert_eq!(filters, enumerate_congruent_filters(&h).unwrap());
            for theta in &cons {
                let f = top_class(&h, theta).unwrap();
                assert_eq!(&theta_of_filter(&h, &f).unwrap(), theta);
            }
        }
    }

    #[test]
    fn generated_filters() {
        let h = with_heyting_arrow(boolean4());
        assert_eq!(congruent_filter_generated(&h, &[]).unwrap(), Filter::principal(&h, 3));
        for a in 0..4 {
            assert_eq!(congruent_filter_generated(&h, &[a]).unwrap(), Filter::principal(&h, a));
        }
        let h = three_chain_hemi();
        let g = congruent_filter_generated(&h, &[1]).unwrap();
        assert!(g.contains(1) && is_congruent_filter(&h, &g).unwrap().congruent);
        for f in enumerate_congruent_filters(&h).unwrap() {
            if f.contains(1) {
                assert!(g.elements().iter().all(|&x| f.contains(x)));
            }
        }
    }

    #[test]
    fn principal_wb() {
        let t = k_heyting(chain(2));
        assert!(principal_wb_congruence(&t, &[(1, 1)]).unwrap().is_identity());
        let (bottom, top) = (t.bottom.unwrap(), t.top.unwrap());
        assert!(principal_wb_congruence(&t, &[(bottom, top)]).unwrap().is_total());
    }

    #[test]
    fn q_term_and_corollary() {
        let t = k_heyting(boolean4());
        let n = t.size();
        let center = center_algebra(&t).unwrap();
        for x in 0..n {
            assert_eq!(q_term(&t, x, x).unwrap(), t.top.unwrap());
        }
        for x in 0..n {
            for y in 0..n {
                let theta = principal_wb_congruence(&t, &[(x, y)]).unwrap();
                let qxy = q_term(&t, x, y).unwrap();
                let gen = congruent_filter_generated(
                    &center.algebra,
                    &[center.index_of(qxy).unwrap()],
                )
                .unwrap();
                for z in 0..n {
                    for w in 0..n {
                        let qzw = q_term(&t, z, w).unwrap();
                        let in_filter = gen.contains(center.index_of(qzw).unwrap());
                        assert_eq!(theta.related(z, w), in_filter);
                        assert_eq!(theta.related(z, w), t.leq(qxy, qzw));
                    }
                }
            }
        }
    }

    #[test]
    fn q_term_on_default_arrow_chain() {
        let k = kleene_chain3();
        let t = k.clone().with_arrow(kalman::khil_default_arrow(&k).unwrap());
        // q(0, 1) = (c ↔ 1) ∧ (1 ↔ c)
        let expected = {
            let ctx = Ctx::new(&t);
            ctx.biarrow(1, 2).unwrap()
        };
        assert_eq!(q_term(&t, 0, 2).unwrap(), expected);
    }

    #[test]
    fn carrier_scope_is_diagnostic_only() {
        let t = k_his(three_chain_hemi());
        for theta in enumerate_wb_congruences(&t).unwrap() {
            let center = is_well_behaved(&t, &theta).unwrap();
            let carrier = is_well_behaved_with(&t, &theta, MeetScope::Carrier).unwrap();
            assert!(center.ok);
            if !carrier.ok {
                assert_eq!(carrier.clause, Some(WbClause::C3));
            }
        }
        assert!(varieties::check_kleene_poset(&t).unwrap().ok);
    }
}
