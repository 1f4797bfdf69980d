//! Exhaustive enumeration of small algebras, isomorphism testing and
//! counterexample search.
//!
//! Lattices are generated one element at a time in a linear-extension order:
//! element 0 is the bottom, each new element is placed above a down-closed
//! set of the elements already present, and the top comes last. A partial
//! order is kept only if its labelling is the least, over all of its linear
//! extensions, in the order that compares leq cells square by square
//! (`(0,k), (k,0), (1,k), (k,1), ..., (k,k)` for `k = 0, 1, ...`). Every
//! prefix of a linear extension is a down-set, so a non-least prefix can
//! never grow into a least labelling and is pruned.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::finord::{is_distributive_lattice, Elem, FiniteAlgebra, Order, Table};
use crate::kalman::{self, KCondition, KalmanLevel};
use crate::varieties::{self, VarietyLabel};

/// Whether the labelling `0..m` of `leq` is the least of its linear
/// extensions in square-by-square cell order, `false < true`.
fn is_canonical(leq: &[Vec<bool>]) -> bool {
    let m = leq.len();
    if m <= 2 {
        return true;
    }
    let mut perm = vec![0; m];
    let mut used = vec![false; m];
    used[0] = true;
    !beats_identity(leq, 1, &mut perm, &mut used)
}

/// True when some completion of `perm[..p]` gives a smaller labelling than
/// the identity, given that the first `p` layers tie.
fn beats_identity(leq: &[Vec<bool>], p: usize, perm: &mut [Elem], used: &mut [bool]) -> bool {
    let m = leq.len();
    if p == m {
        return false;
    }
    for e in 0..m {
        if used[e] || (0..m).any(|d| d != e && !used[d] && leq[d][e]) {
            continue;
        }
        perm[p] = e;
        let mut cmp = std::cmp::Ordering::Equal;
        for q in 0..p {
            let mine = [leq[perm[q]][e], leq[e][perm[q]]];
            let base = [leq[q][p], leq[p][q]];
            cmp = mine.cmp(&base);
            if cmp.is_ne() {
                break;
            }
        }
        match cmp {
            std::cmp::Ordering::Less => return true,
            std::cmp::Ordering::Greater => continue,
            std::cmp::Ordering::Equal => {
                used[e] = true;
                let found = beats_identity(leq, p + 1, perm, used);
                used[e] = false;
                if found {
                    return true;
                }
            }
        }
    }
    false
}

struct Frame {
    /// Order on the bottom plus the middle elements placed so far.
    leq: Vec<Vec<bool>>,
    /// Strict down-sets available to the next element, as bitmasks.
    choices: Vec<u32>,
    next: usize,
}

impl Frame {
    fn new(leq: Vec<Vec<bool>>) -> Self {
        let m = leq.len();
        // middle elements are 1..m; a down-set of them, as a bitmask over 1..m
        let choices = (0u32..1 << (m - 1))
            .filter(|&mask| {
                let has = |x: usize| mask >> (x - 1) & 1 == 1;
                (1..m).all(|x| !has(x) || (1..m).all(|y| !leq[y][x] || has(y)))
            })
            .collect();
        Frame {
            leq,
            choices,
            next: 0,
        }
    }

    fn extend(&self, mask: u32) -> Vec<Vec<bool>> {
        let m = self.leq.len();
        let mut leq: Vec<Vec<bool>> = self
            .leq
            .iter()
            .map(|row| {
                let mut r = row.clone();
                r.push(false);
                r
            })
            .collect();
        let mut row = vec![false; m + 1];
        row[m] = true;
        leq.push(row);
        leq[0][m] = true;
        for x in 1..m {
            leq[x][m] = mask >> (x - 1) & 1 == 1;
        }
        leq
    }
}

/// Lazy stream of bounded lattices on `n` elements, bottom at 0 and top at
/// `n - 1`. Modulo isomorphism it yields one lattice per class; otherwise
/// every labelling compatible with a linear extension.
pub struct LatticeStream {
    n: usize,
    distributive: bool,
    modulo_iso: bool,
    stack: Vec<Frame>,
    small: Option<Vec<FiniteAlgebra>>,
}

pub fn enumerate_lattices(n: usize, distributive: bool, modulo_iso: bool) -> LatticeStream {
    let (stack, small) = if n <= 2 {
        let alg = (n >= 1).then(|| FiniteAlgebra::lattice(Order::chain(n)).unwrap());
        (Vec::new(), Some(alg.into_iter().collect()))
    } else {
        (vec![Frame::new(vec![vec![true]])], None)
    };
    LatticeStream {
        n,
        distributive,
        modulo_iso,
        stack,
        small,
    }
}

impl LatticeStream {
    fn finish(&self, middle: &[Vec<bool>]) -> Option<FiniteAlgebra> {
        let n = self.n;
        let order = Order::from_fn(n, |i, j| {
            j == n - 1 || (i < n - 1 && j < n - 1 && middle[i][j])
        });
        let alg = FiniteAlgebra::lattice(order).ok()?;
        if self.distributive && !is_distributive_lattice(&alg).ok()?.distributive {
            return None;
        }
        Some(alg)
    }
}

impl Iterator for LatticeStream {
    type Item = FiniteAlgebra;

    fn next(&mut self) -> Option<FiniteAlgebra> {
        if let Some(small) = &mut self.small {
            return small.pop();
        }
        let target = self.n - 1;
        loop {
            let frame = self.stack.last_mut()?;
            if frame.leq.len() == target {
                let frame = self.stack.pop().unwrap();
                if let Some(alg) = self.finish(&frame.leq) {
                    return Some(alg);
                }
                continue;
            }
            if frame.next == frame.choices.len() {
                self.stack.pop();
                continue;
            }
            let mask = frame.choices[frame.next];
            frame.next += 1;
            let leq = frame.extend(mask);
            if self.modulo_iso && !is_canonical(&leq) {
                continue;
            }
            self.stack.push(Frame::new(leq));
        }
    }
}

/// All lattices of every size from 1 to `max_size`.
pub fn lattices_up_to(
    max_size: usize,
    distributive: bool,
    modulo_iso: bool,
) -> impl Iterator<Item = FiniteAlgebra> {
    (1..=max_size).flat_map(move |n| enumerate_lattices(n, distributive, modulo_iso))
}

/// Every bijection `a → b` preserving and reflecting the order; only the first
/// when `all` is false.
pub fn order_isomorphisms(a: &Order, b: &Order, all: bool) -> Vec<Vec<Elem>> {
    let n = a.size();
    if n != b.size() {
        return Vec::new();
    }
    let key = |o: &Order, x: Elem| (o.down_size(x), o.up_size(x));
    let ka: Vec<_> = (0..n).map(|x| key(a, x)).collect();
    let kb: Vec<_> = (0..n).map(|x| key(b, x)).collect();
    let mut out = Vec::new();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(
        x: usize,
        a: &Order,
        b: &Order,
        ka: &[(usize, usize)],
        kb: &[(usize, usize)],
        map: &mut [Elem],
        used: &mut [bool],
        all: bool,
        out: &mut Vec<Vec<Elem>>,
    ) {
        let n = map.len();
        if x == n {
            out.push(map.to_vec());
            return;
        }
        for y in 0..n {
            if used[y] || ka[x] != kb[y] {
                continue;
            }
            let consistent = (0..x).all(|p| {
                a.leq(p, x) == b.leq(map[p], y) && a.leq(x, p) == b.leq(y, map[p])
            });
            if !consistent {
                continue;
            }
            map[x] = y;
            used[y] = true;
            go(x + 1, a, b, ka, kb, map, used, all, out);
            used[y] = false;
            if !all && !out.is_empty() {
                return;
            }
        }
    }
    go(0, a, b, &ka, &kb, &mut map, &mut used, all, &mut out);
    out
}

pub fn automorphisms(order: &Order) -> Vec<Vec<Elem>> {
    order_isomorphisms(order, order, true)
}

fn signature(a: &FiniteAlgebra) -> [bool; 7] {
    [
        a.meet.is_some(),
        a.join.is_some(),
        a.arrow.is_some(),
        a.involution.is_some(),
        a.bottom.is_some(),
        a.top.is_some(),
        a.center.is_some(),
    ]
}

fn preserves(a: &FiniteAlgebra, b: &FiniteAlgebra, map: &[Elem]) -> bool {
    let n = a.size();
    let table = |ta: &Option<Table>, tb: &Option<Table>| match (ta, tb) {
        (Some(ta), Some(tb)) => {
            (0..n).all(|x| (0..n).all(|y| map[ta.get(x, y)] == tb.get(map[x], map[y])))
        }
        _ => true,
    };
    let constant = |ca: Option<Elem>, cb: Option<Elem>| match (ca, cb) {
        (Some(x), Some(y)) => map[x] == y,
        _ => true,
    };
    let involution = match (&a.involution, &b.involution) {
        (Some(ia), Some(ib)) => (0..n).all(|x| map[ia[x]] == ib[map[x]]),
        _ => true,
    };
    table(&a.meet, &b.meet)
        && table(&a.join, &b.join)
        && table(&a.arrow, &b.arrow)
        && involution
        && constant(a.bottom, b.bottom)
        && constant(a.top, b.top)
        && constant(a.center, b.center)
}

/// An isomorphism `a → b` preserving the order both ways and every table and
/// constant, if one exists. Structures of different sizes are never
/// isomorphic; differing sets of tables or constants are an input error.
pub fn are_isomorphic(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Result<Option<Vec<Elem>>> {
    if signature(a) != signature(b) {
        return Err(Error::Input(
            "structures carry different tables or constants".into(),
        ));
    }
    if a.size() != b.size() {
        return Ok(None);
    }
    Ok(order_isomorphisms(&a.order, &b.order, true)
        .into_iter()
        .find(|m| preserves(a, b, m)))
}

fn require_arrow_class(class: VarietyLabel) -> Result<bool> {
    use VarietyLabel::*;
    match class {
        HIS0 | Hil0 | IS0 => Ok(false),
        HBDL | SH | HA => Ok(true),
        other => Err(Error::Input(format!("{other} is not a class with an arrow"))),
    }
}

/// Values allowed in cell `(a, b)` by the single-cell consequences of the
/// class axioms.
fn cell_candidates(base: &FiniteAlgebra, class: VarietyLabel, a: Elem, b: Elem) -> Vec<Elem> {
    use VarietyLabel::*;
    let meet = base.meet.as_ref().unwrap();
    let top = base.top.unwrap();
    let n = base.size();
    let diagonal_is_top = matches!(class, HIS0 | HBDL | SH);
    if a == b && diagonal_is_top {
        return vec![top];
    }
    (0..n)
        .filter(|&x| match class {
            HIS0 | HBDL => base.leq(meet.get(a, x), b),
            _ => meet.get(a, x) == meet.get(a, b),
        })
        .collect()
}

/// Lazy stream of the arrow tables making `base` a member of `class`.
pub struct ArrowStream {
    base: FiniteAlgebra,
    class: VarietyLabel,
    candidates: Vec<Vec<Elem>>,
    digits: Vec<usize>,
    done: bool,
}

pub fn enumerate_arrow_tables(base: &FiniteAlgebra, class: VarietyLabel) -> Result<ArrowStream> {
    let lattice = require_arrow_class(class)?;
    base.require_meet("arrow enumeration")?;
    base.require_top("arrow enumeration")?;
    if lattice {
        base.require_join("arrow enumeration")?;
    }
    let n = base.size();
    let candidates: Vec<Vec<Elem>> = (0..n * n)
        .map(|i| cell_candidates(base, class, i / n, i % n))
        .collect();
    let done = candidates.iter().any(Vec::is_empty);
    Ok(ArrowStream {
        base: base.clone(),
        class,
        digits: vec![0; candidates.len()],
        candidates,
        done,
    })
}

impl ArrowStream {
    fn current(&self) -> FiniteAlgebra {
        let n = self.base.size();
        let table = Table::from_fn(n, |a, b| self.candidates[a * n + b][self.digits[a * n + b]]);
        self.base.clone().with_arrow(table)
    }

    fn advance(&mut self) {
        for i in (0..self.digits.len()).rev() {
            self.digits[i] += 1;
            if self.digits[i] < self.candidates[i].len() {
                return;
            }
            self.digits[i] = 0;
        }
        self.done = true;
    }
}

impl Iterator for ArrowStream {
    type Item = FiniteAlgebra;

    fn next(&mut self) -> Option<FiniteAlgebra> {
        while !self.done {
            let alg = self.current();
            self.advance();
            if varieties::check(self.class, &alg).is_ok_and(|r| r.ok) {
                return Some(alg);
            }
        }
        None
    }
}

/// Order-reversing involutions of a lattice, in lexicographic order.
pub fn involutions(order: &Order) -> Vec<Vec<Elem>> {
    let n = order.size();
    let mut out = Vec::new();
    let mut inv = vec![usize::MAX; n];
    fn go(x: usize, order: &Order, inv: &mut [Elem], out: &mut Vec<Vec<Elem>>) {
        let n = inv.len();
        if x == n {
            out.push(inv.to_vec());
            return;
        }
        if inv[x] != usize::MAX {
            return go(x + 1, order, inv, out);
        }
        for y in x..n {
            if inv[y] != usize::MAX {
                continue;
            }
            inv[x] = y;
            inv[y] = x;
            let ok = (0..n).filter(|&p| inv[p] != usize::MAX).all(|p| {
                (0..n).filter(|&q| inv[q] != usize::MAX).all(|q| {
                    order.leq(p, q) == order.leq(inv[q], inv[p])
                })
            });
            if ok {
                go(x + 1, order, inv, out);
            }
            inv[x] = usize::MAX;
            inv[y] = usize::MAX;
        }
    }
    go(0, order, &mut inv, &mut out);
    out
}

fn conjugate_vec(v: &[Elem], g: &[Elem]) -> Vec<Elem> {
    let mut out = vec![0; v.len()];
    for x in 0..v.len() {
        out[g[x]] = g[v[x]];
    }
    out
}

fn conjugate_table(t: &Table, g: &[Elem]) -> Vec<Elem> {
    let n = t.size();
    let mut out = vec![0; n * n];
    for a in 0..n {
        for b in 0..n {
            out[g[a] * n + g[b]] = g[t.get(a, b)];
        }
    }
    out
}

fn table_flat(t: &Table) -> Vec<Elem> {
    let n = t.size();
    (0..n * n).map(|i| t.get(i / n, i % n)).collect()
}

/// Involutive algebras over the distributive lattices of size `n`, passing
/// the checker of `class` (De Morgan, Kleene or centered Kleene).
fn involutive_population(
    n: usize,
    class: VarietyLabel,
    modulo_iso: bool,
) -> impl Iterator<Item = FiniteAlgebra> {
    enumerate_lattices(n, true, modulo_iso).flat_map(move |lat| {
        let autos = if modulo_iso {
            automorphisms(&lat.order)
        } else {
            Vec::new()
        };
        involutions(&lat.order)
            .into_iter()
            .filter(|inv| autos.iter().all(|g| conjugate_vec(inv, g) >= *inv))
            .filter_map(|inv| {
                let center = (0..n).find(|&x| inv[x] == x);
                let mut alg = lat.clone().with_involution(inv);
                alg.center = center.filter(|_| class != VarietyLabel::DeMorgan);
                varieties::check(class, &alg)
                    .is_ok_and(|r| r.ok)
                    .then_some(alg)
            })
            .collect::<Vec<_>>()
    })
}

fn arrow_population(
    n: usize,
    class: VarietyLabel,
    modulo_iso: bool,
) -> Result<impl Iterator<Item = FiniteAlgebra>> {
    let distributive = require_arrow_class(class)?;
    Ok(enumerate_lattices(n, distributive, modulo_iso).flat_map(move |lat| {
        let autos = if modulo_iso {
            automorphisms(&lat.order)
        } else {
            Vec::new()
        };
        enumerate_arrow_tables(&lat, class)
            .expect("lattices carry meet, join and bounds")
            .filter(move |alg| {
                let t = alg.arrow.as_ref().unwrap();
                let flat = table_flat(t);
                autos.iter().all(|g| conjugate_table(t, g) >= flat)
            })
    }))
}

/// Every enumerated member of `class` on exactly `n` elements.
pub fn population(
    class: VarietyLabel,
    n: usize,
    modulo_iso: bool,
) -> Result<Box<dyn Iterator<Item = FiniteAlgebra>>> {
    use VarietyLabel::*;
    Ok(match class {
        MS => Box::new(enumerate_lattices(n, false, modulo_iso)),
        BDL => Box::new(enumerate_lattices(n, true, modulo_iso)),
        HIS0 | Hil0 | IS0 | HBDL | SH | HA => Box::new(arrow_population(n, class, modulo_iso)?),
        DeMorgan | Kleene | CenteredKleene => {
            Box::new(involutive_population(n, class, modulo_iso))
        }
        KleenePoset => Box::new(involutive_population(n, CenteredKleene, modulo_iso)),
        NelsonLattice | NelsonAlgebra => {
            return Err(Error::Input(format!("no enumerator for {class}")))
        }
    })
}

/// Level at which the pair construction is applied to a member of `class`.
pub fn source_level(class: VarietyLabel) -> Result<KalmanLevel> {
    use VarietyLabel::*;
    match class {
        MS => Ok(KalmanLevel::Semilattice),
        BDL => Ok(KalmanLevel::Bdl),
        HIS0 | Hil0 | IS0 | HBDL | SH => Ok(KalmanLevel::His),
        HA => Ok(KalmanLevel::Heyting),
        other => Err(Error::Input(format!(
            "{other} is not a source class for the pair construction"
        ))),
    }
}

/// `None` when the algebra satisfies the property, else a one-line reason.
pub type Property = fn(VarietyLabel, &FiniteAlgebra) -> Result<Option<String>>;

fn kalman_ck(class: VarietyLabel, h: &FiniteAlgebra) -> Result<Option<String>> {
    let k = kalman::kalman(h, source_level(class)?)?;
    let ck = kalman::check_ck(&k.algebra)?;
    Ok(ck.witness.map(|(x, y)| {
        format!(
            "K(H) fails (CK) at x={}, y={}",
            k.algebra.name(x),
            k.algebra.name(y)
        )
    }))
}

fn kalman_conditions(class: VarietyLabel, h: &FiniteAlgebra) -> Result<Option<String>> {
    use VarietyLabel::*;
    let k = kalman::kalman(h, source_level(class)?)?;
    let t = &k.algebra;
    let mut report = kalman::battery(&k)?;
    match class {
        Hil0 => report.absorb(kalman::check_khil_conditions(t)?),
        IS0 => report.absorb(kalman::check_k_conditions(t, &KCondition::ALL)?),
        HBDL => report.absorb(kalman::check_khbdl(t)?),
        SH => {
            report.absorb(kalman::check_khbdl(t)?);
            report.absorb(kalman::check_ksh_condition(t)?);
        }
        _ => {}
    }
    Ok((!report.ok).then(|| report.describe(t)))
}

/// The structure the K6/CK and default-arrow properties talk about: the pair
/// algebra of a source, or a centered Kleene algebra itself.
fn structure_under_test(class: VarietyLabel, alg: &FiniteAlgebra) -> Result<FiniteAlgebra> {
    match class {
        VarietyLabel::CenteredKleene | VarietyLabel::KleenePoset => {
            let arrow = kalman::khil_default_arrow(alg)?;
            Ok(alg.clone().with_arrow(arrow))
        }
        _ => Ok(kalman::kalman(alg, source_level(class)?)?.algebra),
    }
}

fn k6_implies_ck(class: VarietyLabel, alg: &FiniteAlgebra) -> Result<Option<String>> {
    let t = structure_under_test(class, alg)?;
    if !kalman::check_k_conditions(&t, &[KCondition::K6])?.ok {
        return Ok(None);
    }
    let ck = kalman::check_ck(&t)?;
    Ok(ck.witness.map(|(x, y)| {
        format!("K6 holds but (CK) fails at x={}, y={}", t.name(x), t.name(y))
    }))
}

fn centered_kleene_ck(_: VarietyLabel, t: &FiniteAlgebra) -> Result<Option<String>> {
    let ck = kalman::check_ck(t)?;
    Ok(ck.witness.map(|(x, y)| {
        format!(
            "(CK) fails at x={}, y={}: x ∧ y = c but no z has z ∨ c = x and ∼z ∨ c = y",
            t.name(x),
            t.name(y)
        )
    }))
}

fn khil_default(_: VarietyLabel, t: &FiniteAlgebra) -> Result<Option<String>> {
    let arrow = kalman::khil_default_arrow(t)?;
    let t = t.clone().with_arrow(arrow);
    let mut report = kalman::check_k_conditions(&t, &KCondition::BASIC)?;
    if report.ok {
        report.absorb(kalman::check_khil_conditions(&t)?);
    }
    Ok((!report.ok).then(|| report.describe(&t)))
}

fn alpha_beta_roundtrip(class: VarietyLabel, h: &FiniteAlgebra) -> Result<Option<String>> {
    let level = source_level(class)?;
    let alpha = kalman::alpha_map(h, level)?;
    if !alpha.report().is_isomorphism() {
        return Ok(Some("α is not an isomorphism".into()));
    }
    let k = kalman::kalman(h, level)?;
    let beta = kalman::beta_map(&k.algebra, level)?;
    if !beta.report().is_isomorphism() {
        return Ok(Some("β is not an isomorphism".into()));
    }
    Ok(None)
}

fn kalman_battery(class: VarietyLabel, h: &FiniteAlgebra) -> Result<Option<String>> {
    let k = kalman::kalman(h, source_level(class)?)?;
    let report = kalman::battery(&k)?;
    Ok((!report.ok).then(|| report.describe(&k.algebra)))
}

pub const PREDICATES: &[(&str, &str, Property)] = &[
    ("kalman-ck", "the pair algebra satisfies (CK)", kalman_ck),
    (
        "kalman-battery",
        "the pair algebra passes its class battery including (CK)",
        kalman_battery,
    ),
    (
        "kalman-conditions",
        "the pair algebra passes the conditions its source class guarantees",
        kalman_conditions,
    ),
    ("k6-implies-ck", "(K6) implies (CK)", k6_implies_ck),
    (
        "centered-kleene-ck",
        "every centered Kleene algebra satisfies (CK)",
        centered_kleene_ck,
    ),
    (
        "khil-default",
        "the default arrow satisfies K1-K5 and KHil1-KHil5",
        khil_default,
    ),
    (
        "alpha-beta-roundtrip",
        "α and β are isomorphisms",
        alpha_beta_roundtrip,
    ),
];

pub fn lookup_predicate(name: &str) -> Result<Property> {
    PREDICATES
        .iter()
        .find(|(n, _, _)| *n == name)
        .map(|(_, _, p)| *p)
        .ok_or_else(|| {
            let known: Vec<&str> = PREDICATES.iter().map(|(n, _, _)| *n).collect();
            Error::Input(format!(
                "unknown predicate {name:?}; known: {}",
                known.join(", ")
            ))
        })
}

#[derive(Clone, Debug)]
pub struct EnumerationSpec {
    pub class: VarietyLabel,
    pub max_size: usize,
    pub modulo_iso: bool,
    pub predicate: String,
    /// Worker threads; `None` uses the default pool.
    pub jobs: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchStatus {
    AllSatisfy,
    CounterexampleFound,
}

impl fmt::Display for SearchStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SearchStatus::AllSatisfy => "all satisfy",
            SearchStatus::CounterexampleFound => "counterexample found",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Witness {
    pub algebra: FiniteAlgebra,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub witness: Option<Witness>,
    /// Members of the class examined, per size `1..=max_size` reached.
    pub examined: Vec<usize>,
}

impl SearchOutcome {
    pub fn total_examined(&self) -> usize {
        self.examined.iter().sum()
    }
}

const BATCH: usize = 64;

/// Runs the predicate over the class in enumeration order, size by size, and
/// stops at the first failure. Batches are judged in parallel and merged in
/// order, so the result does not depend on the number of workers.
pub fn find_counterexample(spec: &EnumerationSpec) -> Result<SearchOutcome> {
    if spec.max_size == 0 {
        return Err(Error::Input("max size must be at least 1".into()));
    }
    let property = lookup_predicate(&spec.predicate)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = spec.jobs {
        builder = builder.num_threads(j.max(1));
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Input(format!("cannot start workers: {e}")))?;
    let class = spec.class;
    let mut examined = Vec::new();
    for n in 1..=spec.max_size {
        let mut stream = population(class, n, spec.modulo_iso)?;
        let mut count = 0;
        loop {
            let batch: Vec<FiniteAlgebra> = stream.by_ref().take(BATCH).collect();
            if batch.is_empty() {
                break;
            }
            let verdicts: Vec<Result<Option<String>>> =
                pool.install(|| batch.par_iter().map(|a| property(class, a)).collect());
            for (alg, verdict) in batch.into_iter().zip(verdicts) {
                count += 1;
                if let Some(detail) = verdict? {
                    examined.push(count);
                    return Ok(SearchOutcome {
                        status: SearchStatus::CounterexampleFound,
                        witness: Some(Witness {
                            algebra: alg,
                            detail,
                        }),
                        examined,
                    });
                }
            }
        }
        examined.push(count);
    }
    Ok(SearchOutcome {
        status: SearchStatus::AllSatisfy,
        witness: None,
        examined,
    })
}
