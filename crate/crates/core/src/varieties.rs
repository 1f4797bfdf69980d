//! Axiom checkers for the algebra classes involved in the construction, and
//! the term translations between Nelson lattices and Nelson algebras.
//!
//! Every axiom is a named predicate over a tuple of elements. A checker runs a
//! list of axioms by exhaustive lexicographic scan and records, per axiom, the
//! first tuple at which it fails. Partial operations are resolved through the
//! order, so a term that does not exist counts as a failure.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::finord::{Elem, FiniteAlgebra, Table};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarietyLabel {
    /// Bounded meet-semilattices.
    MS,
    BDL,
    /// Bounded hemi-implicative semilattices.
    HIS0,
    /// Bounded Hilbert algebras with infimum.
    Hil0,
    /// Bounded implicative semilattices.
    IS0,
    /// Hemi-implicative lattices.
    HBDL,
    SH,
    HA,
    DeMorgan,
    Kleene,
    CenteredKleene,
    KleenePoset,
    NelsonLattice,
    NelsonAlgebra,
}

impl VarietyLabel {
    pub const ALL: [VarietyLabel; 14] = [
        VarietyLabel::MS,
        VarietyLabel::BDL,
        VarietyLabel::HIS0,
        VarietyLabel::Hil0,
        VarietyLabel::IS0,
        VarietyLabel::HBDL,
        VarietyLabel::SH,
        VarietyLabel::HA,
        VarietyLabel::DeMorgan,
        VarietyLabel::Kleene,
        VarietyLabel::CenteredKleene,
        VarietyLabel::KleenePoset,
        VarietyLabel::NelsonLattice,
        VarietyLabel::NelsonAlgebra,
    ];

    pub fn name(self) -> &'static str {
        match self {
            VarietyLabel::MS => "MS",
            VarietyLabel::BDL => "BDL",
            VarietyLabel::HIS0 => "hIS0",
            VarietyLabel::Hil0 => "Hil0",
            VarietyLabel::IS0 => "IS0",
            VarietyLabel::HBDL => "hBDL",
            VarietyLabel::SH => "SH",
            VarietyLabel::HA => "HA",
            VarietyLabel::DeMorgan => "DeMorgan",
            VarietyLabel::Kleene => "Kleene",
            VarietyLabel::CenteredKleene => "CenteredKleene",
            VarietyLabel::KleenePoset => "KleenePoset",
            VarietyLabel::NelsonLattice => "NelsonLattice",
            VarietyLabel::NelsonAlgebra => "NelsonAlgebra",
        }
    }

    /// Classes that every member of `self` also belongs to (direct edges only).
    pub fn superclasses(self) -> &'static [VarietyLabel] {
        use VarietyLabel::*;
        match self {
            Hil0 => &[HIS0],
            IS0 => &[Hil0],
            HBDL => &[HIS0, BDL],
            SH => &[HBDL],
            HA => &[SH],
            BDL => &[MS],
            Kleene => &[DeMorgan],
            CenteredKleene => &[Kleene],
            DeMorgan => &[BDL],
            _ => &[],
        }
    }
}

impl fmt::Display for VarietyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for VarietyLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        VarietyLabel::ALL
            .into_iter()
            .find(|l| l.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                let known: Vec<_> = VarietyLabel::ALL.iter().map(|l| l.name()).collect();
                Error::Input(format!("unknown class {s:?}; expected one of {}", known.join(", ")))
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub axiom: String,
    pub witness: Vec<Elem>,
}

impl Violation {
    /// Human-readable form, using element names when the algebra has them.
    pub fn describe(&self, alg: &FiniteAlgebra) -> String {
        let Some(ax) = lookup_axiom(&self.axiom) else {
            let w: Vec<String> = self.witness.iter().map(|&e| alg.name(e)).collect();
            return format!("{} fails at ({})", self.axiom, w.join(", "));
        };
        let bindings: Vec<String> = ax
            .vars
            .chars()
            .zip(&self.witness)
            .map(|(v, &e)| format!("{v}={}", alg.name(e)))
            .collect();
        if bindings.is_empty() {
            format!("{} fails: {}", ax.name, ax.statement)
        } else {
            format!("{} fails at {}: {}", ax.name, bindings.join(", "), ax.statement)
        }
    }

    /// Re-evaluates the named axiom at the witness; `true` means the witness
    /// still violates it.
    pub fn recheck(&self, alg: &FiniteAlgebra) -> Result<bool> {
        if let Some(rest) = self.axiom.strip_prefix(NELSON_VIA_LATTICE) {
            let lattice = nelson_algebra_as_lattice(alg)?;
            let inner = Violation {
                axiom: rest.to_string(),
                witness: self.witness.clone(),
            };
            return inner.recheck(&lattice);
        }
        let ax = lookup_axiom(&self.axiom)
            .ok_or_else(|| Error::Input(format!("unknown axiom {:?}", self.axiom)))?;
        if self.witness.len() != ax.arity || self.witness.iter().any(|&e| e >= alg.size()) {
            return Err(Error::Input(format!("witness does not fit axiom {}", ax.name)));
        }
        Ok(!ax.holds_at(&Ctx::new(alg), &self.witness))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub label: String,
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl CheckReport {
    pub fn new(label: impl Into<String>, violations: Vec<Violation>) -> Self {
        CheckReport {
            label: label.into(),
            ok: violations.is_empty(),
            violations,
        }
    }

    pub fn violation(&self, axiom: &str) -> Option<&Violation> {
        self.violations.iter().find(|v| v.axiom == axiom)
    }

    pub fn fails(&self, axiom: &str) -> bool {
        self.violation(axiom).is_some()
    }

    pub fn absorb(&mut self, other: CheckReport) {
        for v in other.violations {
            if !self.fails(&v.axiom) {
                self.violations.push(v);
            }
        }
        self.ok = self.violations.is_empty();
    }

    pub fn describe(&self, alg: &FiniteAlgebra) -> String {
        if self.ok {
            return format!("{}: ok", self.label);
        }
        let lines: Vec<String> = self.violations.iter().map(|v| v.describe(alg)).collect();
        format!("{}: {}", self.label, lines.join("; "))
    }
}

/// Evaluation context: total or partial operations resolved once up front.
pub struct Ctx<'a> {
    pub alg: &'a FiniteAlgebra,
    n: usize,
    meet: Vec<Option<Elem>>,
    join: Vec<Option<Elem>>,
}

impl<'a> Ctx<'a> {
    pub fn new(alg: &'a FiniteAlgebra) -> Self {
        let n = alg.size();
        let meet = match &alg.meet {
            Some(t) => (0..n * n).map(|i| Some(t.get(i / n, i % n))).collect(),
            None => (0..n * n).map(|i| alg.order.glb(i / n, i % n).exists()).collect(),
        };
        let join = match &alg.join {
            Some(t) => (0..n * n).map(|i| Some(t.get(i / n, i % n))).collect(),
            None => (0..n * n).map(|i| alg.order.lub(i / n, i % n).exists()).collect(),
        };
        Ctx { alg, n, meet, join }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.alg.order.leq(a, b)
    }

    #[inline]
    pub fn meet(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.meet[a * self.n + b]
    }

    #[inline]
    pub fn join(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.join[a * self.n + b]
    }

    #[inline]
    pub fn arrow(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.alg.arrow.as_ref().map(|t| t.get(a, b))
    }

    /// The involution `∼`.
    #[inline]
    pub fn neg(&self, a: Elem) -> Option<Elem> {
        self.alg.involution.as_ref().map(|inv| inv[a])
    }

    pub fn c(&self) -> Option<Elem> {
        self.alg.center
    }

    pub fn top(&self) -> Option<Elem> {
        self.alg.top
    }

    pub fn bottom(&self) -> Option<Elem> {
        self.alg.bottom
    }

    /// `x ∨ c`
    #[inline]
    pub fn vc(&self, x: Elem) -> Option<Elem> {
        self.join(x, self.c()?)
    }

    /// `x ∧ c`
    #[inline]
    pub fn wc(&self, x: Elem) -> Option<Elem> {
        self.meet(x, self.c()?)
    }

    pub fn meet_total(&self) -> bool {
        self.meet.iter().all(Option::is_some)
    }

    pub fn join_total(&self) -> bool {
        self.join.iter().all(Option::is_some)
    }

    /// `¬x = x → 0`
    pub fn lneg(&self, x: Elem) -> Option<Elem> {
        self.arrow(x, self.bottom()?)
    }

    /// `x ∗ y = ¬(x → ¬y)`
    pub fn star(&self, x: Elem, y: Elem) -> Option<Elem> {
        self.lneg(self.arrow(x, self.lneg(y)?)?)
    }

    /// `a ↔ b = (a → b) ∧ (b → a)`
    pub fn biarrow(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.meet(self.arrow(a, b)?, self.arrow(b, a)?)
    }

    pub(crate) fn require(&self, what: &str, features: &[Feature]) -> Result<()> {
        for f in features {
            let present = match f {
                Feature::Meet => self.meet_total(),
                Feature::Join => self.join_total(),
                Feature::Arrow => self.alg.arrow.is_some(),
                Feature::Involution => self.alg.involution.is_some(),
                Feature::Bottom => self.alg.bottom.is_some(),
                Feature::Top => self.alg.top.is_some(),
                Feature::Center => self.alg.center.is_some(),
            };
            if !present {
                return Err(Error::Precondition(format!("{what} needs {}", f.describe())));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) enum Feature {
    Meet,
    Join,
    Arrow,
    Involution,
    Bottom,
    Top,
    Center,
}

impl Feature {
    fn describe(self) -> &'static str {
        match self {
            Feature::Meet => "a total meet",
            Feature::Join => "a total join",
            Feature::Arrow => "an arrow table",
            Feature::Involution => "an involution",
            Feature::Bottom => "a bottom element",
            Feature::Top => "a top element",
            Feature::Center => "a center element",
        }
    }
}

pub type Predicate = fn(&Ctx, &[Elem]) -> Option<bool>;

/// A named condition quantified universally over `arity` elements.
pub struct Axiom {
    pub name: &'static str,
    pub arity: usize,
    /// One letter per quantified variable, in witness order.
    pub vars: &'static str,
    pub statement: &'static str,
    /// `None` means some term is undefined, which counts as a failure.
    pub holds: Predicate,
}

impl Axiom {
    pub fn holds_at(&self, ctx: &Ctx, args: &[Elem]) -> bool {
        (self.holds)(ctx, args).unwrap_or(false)
    }

    /// First failing tuple in lexicographic order.
    pub fn first_failure(&self, ctx: &Ctx) -> Option<Vec<Elem>> {
        let n = ctx.size();
        let mut args = vec![0; self.arity];
        if self.arity > 0 && n == 0 {
            return None;
        }
        loop {
            if !self.holds_at(ctx, &args) {
                return Some(args);
            }
            let mut i = self.arity;
            loop {
                if i == 0 {
                    return None;
                }
                i -= 1;
                args[i] += 1;
                if args[i] < n {
                    break;
                }
                args[i] = 0;
            }
        }
    }
}

pub(crate) fn run(label: &str, ctx: &Ctx, axioms: &[&Axiom]) -> CheckReport {
    let violations = axioms
        .iter()
        .filter_map(|ax| {
            ax.first_failure(ctx).map(|w| Violation {
                axiom: ax.name.to_string(),
                witness: w,
            })
        })
        .collect();
    CheckReport::new(label, violations)
}

fn b(v: bool) -> Option<bool> {
    Some(v)
}

pub static MEET_TOTAL: Axiom = Axiom {
    name: "meet-total",
    arity: 2,
    vars: "ab",
    statement: "a∧b exists",
    holds: |t, v| b(t.meet(v[0], v[1]).is_some()),
};

pub static JOIN_TOTAL: Axiom = Axiom {
    name: "join-total",
    arity: 2,
    vars: "ab",
    statement: "a∨b exists",
    holds: |t, v| b(t.join(v[0], v[1]).is_some()),
};

pub static BOUNDED: Axiom = Axiom {
    name: "bounded",
    arity: 0,
    vars: "",
    statement: "bottom and top are present",
    holds: |t, _| b(t.bottom().is_some() && t.top().is_some()),
};

pub static HAS_BOTTOM: Axiom = Axiom {
    name: "bottom",
    arity: 0,
    vars: "",
    statement: "a bottom element is present",
    holds: |t, _| b(t.bottom().is_some()),
};

pub static DISTRIBUTIVE: Axiom = Axiom {
    name: "distributive",
    arity: 3,
    vars: "xyz",
    statement: "x∧(y∨z) = (x∧y)∨(x∧z)",
    holds: |t, v| {
        let lhs = t.meet(v[0], t.join(v[1], v[2])?)?;
        let rhs = t.join(t.meet(v[0], v[1])?, t.meet(v[0], v[2])?)?;
        b(lhs == rhs)
    },
};

pub static W2: Axiom = Axiom {
    name: "W2",
    arity: 2,
    vars: "ab",
    statement: "a∧(a→b) ≤ b",
    holds: |t, v| b(t.leq(t.meet(v[0], t.arrow(v[0], v[1])?)?, v[1])),
};

pub static W3: Axiom = Axiom {
    name: "W3",
    arity: 1,
    vars: "a",
    statement: "a→a = 1",
    holds: |t, v| b(t.arrow(v[0], v[0])? == t.top()?),
};

pub static HILBERT_1: Axiom = Axiom {
    name: "Hilbert-1",
    arity: 2,
    vars: "ab",
    statement: "a→(b→a) = 1",
    holds: |t, v| b(t.arrow(v[0], t.arrow(v[1], v[0])?)? == t.top()?),
};

pub static HILBERT_2: Axiom = Axiom {
    name: "Hilbert-2",
    arity: 3,
    vars: "abd",
    statement: "a→(b→d) = (a→b)→(a→d)",
    holds: |t, v| {
        let (a, bb, d) = (v[0], v[1], v[2]);
        let lhs = t.arrow(a, t.arrow(bb, d)?)?;
        let rhs = t.arrow(t.arrow(a, bb)?, t.arrow(a, d)?)?;
        b(lhs == rhs)
    },
};

pub static HILBERT_3: Axiom = Axiom {
    name: "Hilbert-3",
    arity: 2,
    vars: "ab",
    statement: "a→b = b→a = 1 implies a = b",
    holds: |t, v| {
        let one = t.top()?;
        let both = t.arrow(v[0], v[1])? == one && t.arrow(v[1], v[0])? == one;
        b(!both || v[0] == v[1])
    },
};

fn meet_arrow_eq(t: &Ctx, v: &[Elem]) -> Option<bool> {
    b(t.meet(v[0], t.arrow(v[0], v[1])?)? == t.meet(v[0], v[1])?)
}

fn arrow_over_meet(t: &Ctx, v: &[Elem]) -> Option<(Elem, Elem)> {
    let (a, bb, d) = (v[0], v[1], v[2]);
    let lhs = t.arrow(a, t.meet(bb, d)?)?;
    let rhs = t.meet(t.arrow(a, bb)?, t.arrow(a, d)?)?;
    Some((lhs, rhs))
}

pub static MEET_ARROW: Axiom = Axiom {
    name: "meet-arrow",
    arity: 2,
    vars: "ab",
    statement: "a∧(a→b) = a∧b",
    holds: meet_arrow_eq,
};

pub static ARROW_MEET_SUB: Axiom = Axiom {
    name: "arrow-meet-sub",
    arity: 3,
    vars: "abd",
    statement: "a→(b∧d) ≤ (a→b)∧(a→d)",
    holds: |t, v| {
        let (l, r) = arrow_over_meet(t, v)?;
        b(t.leq(l, r))
    },
};

pub static RESIDUATION: Axiom = Axiom {
    name: "residuation",
    arity: 3,
    vars: "abd",
    statement: "a ≤ b→d iff a∧b ≤ d",
    holds: |t, v| {
        let (a, bb, d) = (v[0], v[1], v[2]);
        b(t.leq(a, t.arrow(bb, d)?) == t.leq(t.meet(a, bb)?, d))
    },
};

pub static ARROW_MEET_DIST: Axiom = Axiom {
    name: "arrow-meet-dist",
    arity: 3,
    vars: "abd",
    statement: "a→(b∧d) = (a→b)∧(a→d)",
    holds: |t, v| {
        let (l, r) = arrow_over_meet(t, v)?;
        b(l == r)
    },
};

pub static MEET_ABSORB: Axiom = Axiom {
    name: "meet-absorb",
    arity: 2,
    vars: "ab",
    statement: "a ≤ b→(a∧b)",
    holds: |t, v| b(t.leq(v[0], t.arrow(v[1], t.meet(v[0], v[1])?)?)),
};

pub static SH2: Axiom = Axiom {
    name: "SH2",
    arity: 2,
    vars: "ab",
    statement: "a∧(a→b) = a∧b",
    holds: meet_arrow_eq,
};

pub static SH3: Axiom = Axiom {
    name: "SH3",
    arity: 3,
    vars: "abd",
    statement: "a∧(b→d) = a∧((a∧b)→(a∧d))",
    holds: |t, v| {
        let (a, bb, d) = (v[0], v[1], v[2]);
        let lhs = t.meet(a, t.arrow(bb, d)?)?;
        let rhs = t.meet(a, t.arrow(t.meet(a, bb)?, t.meet(a, d)?)?)?;
        b(lhs == rhs)
    },
};

pub static SH4: Axiom = Axiom {
    name: "SH4",
    arity: 1,
    vars: "a",
    statement: "a→a = 1",
    holds: |t, v| b(t.arrow(v[0], v[0])? == t.top()?),
};

pub static RELATIVE_PSEUDOCOMPLEMENT: Axiom = Axiom {
    name: "relative-pseudocomplement",
    arity: 2,
    vars: "ab",
    statement: "a→b is the largest x with x∧a ≤ b",
    holds: |t, v| {
        let (a, bb) = (v[0], v[1]);
        let got = t.arrow(a, bb)?;
        let n = t.size();
        let mut best = None;
        for x in 0..n {
            if t.leq(t.meet(x, a)?, bb) {
                best = match best {
                    None => Some(x),
                    Some(m) if t.leq(m, x) => Some(x),
                    keep => keep,
                };
            }
        }
        let best = best?;
        // best is maximal among the candidates; it is the largest only if
        // every candidate lies below it.
        for x in 0..n {
            if t.leq(t.meet(x, a)?, bb) && !t.leq(x, best) {
                return Some(false);
            }
        }
        b(got == best)
    },
};

pub static INVOLUTIVE: Axiom = Axiom {
    name: "involutive",
    arity: 1,
    vars: "x",
    statement: "∼∼x = x",
    holds: |t, v| b(t.neg(t.neg(v[0])?)? == v[0]),
};

pub static DE_MORGAN: Axiom = Axiom {
    name: "de-morgan",
    arity: 2,
    vars: "xy",
    statement: "∼(x∨y) = ∼x∧∼y",
    holds: |t, v| {
        let lhs = t.neg(t.join(v[0], v[1])?)?;
        let rhs = t.meet(t.neg(v[0])?, t.neg(v[1])?)?;
        b(lhs == rhs)
    },
};

pub static KLEENE: Axiom = Axiom {
    name: "kleene",
    arity: 2,
    vars: "xy",
    statement: "x∧∼x ≤ y∨∼y",
    holds: |t, v| {
        let lhs = t.meet(v[0], t.neg(v[0])?)?;
        let rhs = t.join(v[1], t.neg(v[1])?)?;
        b(t.leq(lhs, rhs))
    },
};

pub static CENTER_FIXED: Axiom = Axiom {
    name: "center",
    arity: 0,
    vars: "",
    statement: "a center c with ∼c = c is present",
    holds: |t, _| {
        let c = t.c()?;
        b(t.neg(c)? == c)
    },
};

pub static KP1: Axiom = Axiom {
    name: "KP1",
    arity: 0,
    vars: "",
    statement: "the order is a partial order",
    holds: |t, _| b(t.alg.order.validate().ok()),
};

pub static KP2_INVOLUTIVE: Axiom = Axiom {
    name: "KP2-involutive",
    arity: 1,
    vars: "x",
    statement: "∼∼x = x",
    holds: |t, v| b(t.neg(t.neg(v[0])?)? == v[0]),
};

pub static KP2_ANTITONE: Axiom = Axiom {
    name: "KP2-antitone",
    arity: 2,
    vars: "xy",
    statement: "x ≤ y implies ∼y ≤ ∼x",
    holds: |t, v| b(!t.leq(v[0], v[1]) || t.leq(t.neg(v[1])?, t.neg(v[0])?)),
};

pub static KP3: Axiom = Axiom {
    name: "KP3",
    arity: 0,
    vars: "",
    statement: "∼c = c",
    holds: |t, _| {
        let c = t.c()?;
        b(t.neg(c)? == c)
    },
};

pub static KP4: Axiom = Axiom {
    name: "KP4",
    arity: 1,
    vars: "x",
    statement: "x∨c exists",
    holds: |t, v| b(t.vc(v[0]).is_some()),
};

pub static KP5: Axiom = Axiom {
    name: "KP5",
    arity: 1,
    vars: "x",
    statement: "(x∨c)∧(∼x∨c) exists and equals c",
    holds: |t, v| {
        let m = t.meet(t.vc(v[0])?, t.vc(t.neg(v[0])?)?)?;
        b(m == t.c()?)
    },
};

/// `x ∧ c` computed as `∼(∼x ∨ c)`.
fn wc_derived(t: &Ctx, x: Elem) -> Option<Elem> {
    t.neg(t.vc(t.neg(x)?)?)
}

pub static KP6: Axiom = Axiom {
    name: "KP6",
    arity: 2,
    vars: "xy",
    statement: "x∧c ≤ y∧c and x∨c ≤ y∨c imply x ≤ y",
    holds: |t, v| {
        let (x, y) = (v[0], v[1]);
        let premise = t.leq(wc_derived(t, x)?, wc_derived(t, y)?) && t.leq(t.vc(x)?, t.vc(y)?);
        b(!premise || t.leq(x, y))
    },
};

pub static NL_RESIDUATION: Axiom = Axiom {
    name: "NL-residuation",
    arity: 3,
    vars: "xyz",
    statement: "x∗y ≤ z iff x ≤ y→z",
    holds: |t, v| {
        let (x, y, z) = (v[0], v[1], v[2]);
        b(t.leq(t.star(x, y)?, z) == t.leq(x, t.arrow(y, z)?))
    },
};

pub static NL_COMMUTATIVE: Axiom = Axiom {
    name: "NL-commutative",
    arity: 2,
    vars: "xy",
    statement: "x∗y = y∗x",
    holds: |t, v| b(t.star(v[0], v[1])? == t.star(v[1], v[0])?),
};

pub static NL_ASSOCIATIVE: Axiom = Axiom {
    name: "NL-associative",
    arity: 3,
    vars: "xyz",
    statement: "(x∗y)∗z = x∗(y∗z)",
    holds: |t, v| {
        let (x, y, z) = (v[0], v[1], v[2]);
        b(t.star(t.star(x, y)?, z)? == t.star(x, t.star(y, z)?)?)
    },
};

pub static NL_UNIT: Axiom = Axiom {
    name: "NL-unit",
    arity: 1,
    vars: "x",
    statement: "x∗1 = 1∗x = x",
    holds: |t, v| {
        let one = t.top()?;
        b(t.star(v[0], one)? == v[0] && t.star(one, v[0])? == v[0])
    },
};

pub static NL_INVOLUTIVE: Axiom = Axiom {
    name: "NL-involutive",
    arity: 1,
    vars: "x",
    statement: "¬¬x = x",
    holds: |t, v| b(t.lneg(t.lneg(v[0])?)? == v[0]),
};

pub static NL_NELSON: Axiom = Axiom {
    name: "NL-nelson",
    arity: 2,
    vars: "xy",
    statement: "(x²→y)∧((¬y)²→¬x) ≤ x→y",
    holds: |t, v| {
        let (x, y) = (v[0], v[1]);
        let ny = t.lneg(y)?;
        let left = t.arrow(t.star(x, x)?, y)?;
        let right = t.arrow(t.star(ny, ny)?, t.lneg(x)?)?;
        b(t.leq(t.meet(left, right)?, t.arrow(x, y)?))
    },
};

pub static NA_WEAK_ROUNDTRIP: Axiom = Axiom {
    name: "NA-weak-roundtrip",
    arity: 2,
    vars: "xy",
    statement: "x⇒y is recovered as x²→y from the translated lattice",
    holds: |_, _| None,
};

pub static NA_NEG_ROUNDTRIP: Axiom = Axiom {
    name: "NA-neg-roundtrip",
    arity: 1,
    vars: "x",
    statement: "∼x is recovered as x→0 from the translated lattice",
    holds: |_, _| None,
};

/// Prefix for Nelson-algebra violations found on the translated lattice.
pub const NELSON_VIA_LATTICE: &str = "via-lattice:";

static VARIETY_AXIOMS: &[&Axiom] = &[
    &MEET_TOTAL,
    &JOIN_TOTAL,
    &BOUNDED,
    &HAS_BOTTOM,
    &DISTRIBUTIVE,
    &W2,
    &W3,
    &HILBERT_1,
    &HILBERT_2,
    &HILBERT_3,
    &MEET_ARROW,
    &ARROW_MEET_SUB,
    &RESIDUATION,
    &ARROW_MEET_DIST,
    &MEET_ABSORB,
    &SH2,
    &SH3,
    &SH4,
    &RELATIVE_PSEUDOCOMPLEMENT,
    &INVOLUTIVE,
    &DE_MORGAN,
    &KLEENE,
    &CENTER_FIXED,
    &KP1,
    &KP2_INVOLUTIVE,
    &KP2_ANTITONE,
    &KP3,
    &KP4,
    &KP5,
    &KP6,
    &NL_RESIDUATION,
    &NL_COMMUTATIVE,
    &NL_ASSOCIATIVE,
    &NL_UNIT,
    &NL_INVOLUTIVE,
    &NL_NELSON,
];

/// Finds any axiom known to the library by name, including the conditions
/// on pair algebras defined in [`crate::kalman`].
pub fn lookup_axiom(name: &str) -> Option<&'static Axiom> {
    VARIETY_AXIOMS
        .iter()
        .chain(crate::kalman::CONDITIONS.iter())
        .chain([&NA_WEAK_ROUNDTRIP, &NA_NEG_ROUNDTRIP].iter())
        .find(|ax| ax.name == name)
        .copied()
}

use Feature::*;

const ARROW_SEMILATTICE: &[Feature] = &[Meet, Top, Arrow];
const ARROW_LATTICE: &[Feature] = &[Meet, Join, Arrow, Bottom, Top];
const INVOLUTIVE_LATTICE: &[Feature] = &[Meet, Join, Involution, Bottom, Top];

pub fn check_bounded_semilattice(h: &FiniteAlgebra) -> Result<CheckReport> {
    let ctx = Ctx::new(h);
    Ok(run("MS", &ctx, &[&MEET_TOTAL, &BOUNDED]))
}

pub fn check_bdl(h: &FiniteAlgebra) -> Result<CheckReport> {
    let ctx = Ctx::new(h);
    Ok(run(
        "BDL",
        &ctx,
        &[&MEET_TOTAL, &JOIN_TOTAL, &BOUNDED, &DISTRIBUTIVE],
    ))
}

/// `(W2)` is checked in its equational form `a∧(a→b) ≤ b`.
pub fn check_hemi_implicative_semilattice(h: &FiniteAlgebra) -> Result<CheckReport> {
    let ctx = Ctx::new(h);
    ctx.require("hIS0 check", ARROW_SEMILATTICE)?;
    Ok(run("hIS0", &ctx, &[&HAS_BOTTOM, &W2, &W3]))
}

pub fn check_hilbert_with_infimum(h: &FiniteAlgebra) -> Result<CheckReport> {
    let ctx = Ctx::new(h);
    ctx.require("Hil0 check", ARROW_SEMILATTICE)?;
    Ok(run(
        "Hil0",
        &ctx,
        &[
            &HAS_BOTTOM,
            &HILBERT_1,
            &HILBERT_2,
            &HILBERT_3,
            &MEET_ARROW,
            &ARROW_MEET_SUB,
        ],
    ))
}

/// Residuation is the defining condition. The four-clause characterisation
/// is recorded alongside it, and a disagreement between the two is an error.
pub fn check_implicative_semilattice(h: &FiniteAlgebra) -> Result<CheckReport> {
    let ctx = Ctx::new(h);
    ctx.require("IS0 check", ARROW_SEMILATTICE)?;
    let defining = run("IS0", &ctx, &[&HAS_BOTTOM, &RESIDUATION]);
    let clauses = run("IS0", &ctx, &[&W2, &W3, &ARROW_MEET_DIST, &MEET_ABSORB]);
    let residuated = !defining.fails(RESIDUATION.name);
    if residuated != clauses.ok {
        let witness = match clauses.violations.first() {
            Some(v) => v.describe(h),
            None => defining.violation(RESIDUATION.name).unwrap().describe(h),
        };
        return Err(Error::theorem(
            "residuation is equivalent to the four-clause characterisation",
            witness,
        ));
    }
    let mut report = defining;
    report.absorb(clauses);
    Ok(report)
}

pub fn check_hemi_implicative_lattice(h: &FiniteAlgebra) -> Result<CheckReport> {
    let ctx = Ctx::new(h);
    ctx.require("hBDL check", ARROW_LATTICE)?;
    Ok(run("hBDL", &ctx, &[&DISTRIBUTIVE, &W2, &W3]))
}

pub fn check_semi_heyting(h: &FiniteAlgebra) -> Result<CheckReport> {
    let ctx = Ctx::new(h);
    ctx.require("SH check", ARROW_LATTICE)?;
    Ok(run("SH", &ctx, &[&DISTRIBUTIVE, &SH2, &SH3, &SH4]))
}

pub fn check_heyting(h: &FiniteAlgebra) -> Result<CheckReport> {
    let ctx = Ctx::new(h);
    ctx.require("HA check", ARROW_LATTICE)?;
    Ok(run("HA", &ctx, &[&RELATIVE_PSEUDOCOMPLEMENT]))
}

pub fn check_de_morgan(t: &FiniteAlgebra) -> Result<CheckReport> {
    let ctx = Ctx::new(t);
    ctx.require("De Morgan check", INVOLUTIVE_LATTICE)?;
    Ok(run("DeMorgan", &ctx, &[&DISTRIBUTIVE, &INVOLUTIVE, &DE_MORGAN]))
}

pub fn check_kleene(t: &FiniteAlgebra) -> Result<CheckReport> {
    let ctx = Ctx::new(t);
    ctx.require("Kleene check", INVOLUTIVE_LATTICE)?;
    Ok(run(
        "Kleene",
        &ctx,
        &[&DISTRIBUTIVE, &INVOLUTIVE, &DE_MORGAN, &KLEENE],
    ))
}

/// A missing center is reported as a violation rather than an error.
pub fn check_centered_kleene(t: &FiniteAlgebra) -> Result<CheckReport> {
    let ctx = Ctx::new(t);
    ctx.require("centered Kleene check", INVOLUTIVE_LATTICE)?;
    Ok(run(
        "CenteredKleene",
        &ctx,
        &[&DISTRIBUTIVE, &INVOLUTIVE, &DE_MORGAN, &KLEENE, &CENTER_FIXED],
    ))
}

/// The six Kleene-poset clauses over partial meets and joins. The last clause
/// uses `x∧c = ∼(∼x∨c)`; when clauses 2 to 5 hold, the real infimum is
/// checked to exist and agree, and the center is checked to be unique.
pub fn check_kleene_poset(t: &FiniteAlgebra) -> Result<CheckReport> {
    let ctx = Ctx::new(t);
    ctx.require("Kleene poset check", &[Involution, Center])?;
    let report = run(
        "KleenePoset",
        &ctx,
        &[&KP1, &KP2_INVOLUTIVE, &KP2_ANTITONE, &KP3, &KP4, &KP5, &KP6],
    );
    let prerequisites = ["KP2-involutive", "KP2-antitone", "KP3", "KP4", "KP5"];
    if prerequisites.iter().all(|a| !report.fails(a)) {
        let c = t.center.unwrap();
        for x in 0..t.size() {
            let derived = wc_derived(&ctx, x);
            if derived.is_none() || ctx.meet(x, c) != derived {
                return Err(Error::theorem(
                    "x∧c exists and equals ∼(∼x∨c)",
                    format!("x = {}", t.name(x)),
                ));
            }
        }
        let inv = t.involution.as_ref().unwrap();
        for other in (0..t.size()).filter(|&d| d != c && inv[d] == d) {
            let acts_as_center = (0..t.size()).all(|x| {
                let up = |y| ctx.join(y, other);
                match (up(x), up(inv[x])) {
                    (Some(p), Some(q)) => ctx.meet(p, q) == Some(other),
                    _ => false,
                }
            });
            if acts_as_center {
                return Err(Error::theorem(
                    "the center is unique",
                    format!("second center {}", t.name(other)),
                ));
            }
        }
    }
    Ok(report)
}

/// Checks the arrow as the residuated implication of an involutive residuated
/// lattice, with `¬x = x→0` and `x∗y = ¬(x→¬y)`.
pub fn check_nelson_lattice(t: &FiniteAlgebra) -> Result<CheckReport> {
    let ctx = Ctx::new(t);
    ctx.require("Nelson lattice check", ARROW_LATTICE)?;
    Ok(run(
        "NelsonLattice",
        &ctx,
        &[
            &NL_RESIDUATION,
            &NL_COMMUTATIVE,
            &NL_ASSOCIATIVE,
            &NL_UNIT,
            &NL_INVOLUTIVE,
            &NL_NELSON,
        ],
    ))
}

/// `(x ⇒ y, ∼x)` as `(x²→y, ¬x)`.
pub fn nelson_lattice_to_algebra_ops(t: &FiniteAlgebra) -> Result<(Table, Vec<Elem>)> {
    let report = check_nelson_lattice(t)?;
    if !report.ok {
        return Err(Error::Precondition(format!(
            "not a Nelson lattice: {}",
            report.describe(t)
        )));
    }
    let ctx = Ctx::new(t);
    let weak = Table::from_fn(t.size(), |x, y| {
        ctx.arrow(ctx.star(x, x).unwrap(), y).unwrap()
    });
    let neg = (0..t.size()).map(|x| ctx.lneg(x).unwrap()).collect();
    Ok((weak, neg))
}

/// `(x∗y, x→y)` as `(∼(x⇒∼y) ∨ ∼(y⇒∼x), (x⇒y) ∧ (∼y⇒∼x))`, reading the
/// algebra's arrow as the weak implication `⇒`.
pub fn nelson_algebra_to_lattice_ops(t: &FiniteAlgebra) -> Result<(Table, Table)> {
    let ctx = Ctx::new(t);
    ctx.require("Nelson algebra translation", &[Meet, Join, Arrow, Involution])?;
    let inv = t.involution.as_ref().unwrap();
    if inv.iter().any(|&x| x >= t.size()) {
        return Err(Error::Input("involution entry out of range".into()));
    }
    let weak = |x, y| ctx.arrow(x, y).unwrap();
    let star = Table::from_fn(t.size(), |x, y| {
        let l = inv[weak(x, inv[y])];
        let r = inv[weak(y, inv[x])];
        ctx.join(l, r).unwrap()
    });
    let arrow = Table::from_fn(t.size(), |x, y| {
        ctx.meet(weak(x, y), weak(inv[y], inv[x])).unwrap()
    });
    Ok((star, arrow))
}

fn nelson_algebra_as_lattice(t: &FiniteAlgebra) -> Result<FiniteAlgebra> {
    let (_, arrow) = nelson_algebra_to_lattice_ops(t)?;
    let mut lattice = t.clone();
    lattice.arrow = Some(arrow);
    Ok(lattice)
}

/// Nelson algebras are checked through the translation: the translated
/// structure must be a Nelson lattice whose translation back returns the
/// original weak implication and involution.
pub fn check_nelson_algebra(t: &FiniteAlgebra) -> Result<CheckReport> {
    let ctx = Ctx::new(t);
    ctx.require("Nelson algebra check", ARROW_LATTICE)?;
    ctx.require("Nelson algebra check", &[Involution])?;
    let lattice = nelson_algebra_as_lattice(t)?;
    let inner = check_nelson_lattice(&lattice)?;
    let mut violations: Vec<Violation> = inner
        .violations
        .into_iter()
        .map(|v| Violation {
            axiom: format!("{NELSON_VIA_LATTICE}{}", v.axiom),
            witness: v.witness,
        })
        .collect();
    if violations.is_empty() {
        let (weak, neg) = nelson_lattice_to_algebra_ops(&lattice)?;
        let original = t.arrow.as_ref().unwrap();
        let inv = t.involution.as_ref().unwrap();
        let n = t.size();
        if let Some(i) = (0..n * n).find(|&i| weak.get(i / n, i % n) != original.get(i / n, i % n)) {
            violations.push(Violation {
                axiom: NA_WEAK_ROUNDTRIP.name.into(),
                witness: vec![i / n, i % n],
            });
        }
        if let Some(x) = (0..n).find(|&x| neg[x] != inv[x]) {
            violations.push(Violation {
                axiom: NA_NEG_ROUNDTRIP.name.into(),
                witness: vec![x],
            });
        }
    }
    Ok(CheckReport::new("NelsonAlgebra", violations))
}

pub fn check(label: VarietyLabel, alg: &FiniteAlgebra) -> Result<CheckReport> {
    match label {
        VarietyLabel::MS => check_bounded_semilattice(alg),
        VarietyLabel::BDL => check_bdl(alg),
        VarietyLabel::HIS0 => check_hemi_implicative_semilattice(alg),
        VarietyLabel::Hil0 => check_hilbert_with_infimum(alg),
        VarietyLabel::IS0 => check_implicative_semilattice(alg),
        VarietyLabel::HBDL => check_hemi_implicative_lattice(alg),
        VarietyLabel::SH => check_semi_heyting(alg),
        VarietyLabel::HA => check_heyting(alg),
        VarietyLabel::DeMorgan => check_de_morgan(alg),
        VarietyLabel::Kleene => check_kleene(alg),
        VarietyLabel::CenteredKleene => check_centered_kleene(alg),
        VarietyLabel::KleenePoset => check_kleene_poset(alg),
        VarietyLabel::NelsonLattice => check_nelson_lattice(alg),
        VarietyLabel::NelsonAlgebra => check_nelson_algebra(alg),
    }
}

/// Every label whose checker passes. Missing features count as failure.
pub fn classify(alg: &FiniteAlgebra) -> Result<Vec<VarietyLabel>> {
    let mut out = Vec::new();
    for label in VarietyLabel::ALL {
        match check(label, alg) {
            Ok(r) if r.ok => out.push(label),
            Ok(_) | Err(Error::Precondition(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}
