//! Factorizations whose factors are pairwise related: enumeration, the
//! derived divisibility relation, atom and prime detection, and window-scale
//! unique-factorization diagnostics.
//!
//! A factorization of `a` under a relation `tau` is `a = unit * f1 * ... * fn`
//! with `unit` in {+1, -1}, every factor a nonzero nonunit, and every ordered
//! pair of factors at distinct positions related by `tau` — both directions,
//! so the notion is order-independent even for non-symmetric `tau`. Length-1
//! products have no pairs to check and are always valid; they are the trivial
//! factorizations `a = 1*a = (-1)*(-a)`.
//!
//! Factor lists are emitted in canonical form, sorted by universe key
//! (2 < -2 < 3 < -3 < ...); permutations of one list are not emitted
//! separately. Two factorizations are equivalent when they agree up to order
//! and sign, which is what `FactorizationClass` captures.

use crate::domain::{signed_divisors, Elem, Window};
use crate::relation::Relation;
use serde::Serialize;
use serde_json::json;
use std::collections::{BTreeSet, HashMap};
use std::ops::ControlFlow;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauFactorization {
    pub target: Elem,
    pub unit: i64,
    pub factors: Vec<Elem>,
}

impl TauFactorization {
    fn assemble(target: Elem, factors: Vec<Elem>) -> TauFactorization {
        let prod: i64 = factors.iter().map(|f| f.get()).product();
        let unit = if prod == target.get() { 1 } else { -1 };
        TauFactorization {
            target,
            unit,
            factors,
        }
    }

    pub fn class(&self) -> FactorizationClass {
        FactorizationClass::of(&self.factors)
    }

    pub fn verify(&self, tau: &Relation, window: &Window) -> bool {
        if self.factors.is_empty() || !matches!(self.unit, 1 | -1) {
            return false;
        }
        let prod: i128 = self.factors.iter().map(|f| f.get() as i128).product();
        if self.unit as i128 * prod != self.target.get() as i128 {
            return false;
        }
        for (i, &a) in self.factors.iter().enumerate() {
            for (j, &b) in self.factors.iter().enumerate() {
                if i != j && !tau.holds(a, b, window) {
                    return false;
                }
            }
        }
        true
    }

    /// One dump line: target, unit, factor list, and the class it falls in.
    pub fn json(&self) -> serde_json::Value {
        json!({
            "target": self.target.get(),
            "unit": self.unit,
            "factors": self.factors.iter().map(|f| f.get()).collect::<Vec<i64>>(),
            "class": serde_json::to_value(self.class()).unwrap(),
        })
    }
}

/// Equivalence class of a factorization up to reorder and sign: the length
/// together with the multiset of absolute values.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct FactorizationClass {
    #[serde(rename = "n")]
    pub length: usize,
    pub abs_multiset: Vec<u64>,
}

impl FactorizationClass {
    pub fn of(factors: &[Elem]) -> FactorizationClass {
        let mut abs: Vec<u64> = factors.iter().map(|f| f.abs()).collect();
        abs.sort_unstable();
        FactorizationClass {
            length: abs.len(),
            abs_multiset: abs,
        }
    }
}

/// Depth-first walk over canonical factor lists of `remaining`, extending
/// `chosen` with divisors no smaller (by universe key) than the last one.
/// `admit` filters candidate factors; `visit` can break out early.
fn dfs(
    remaining: u64,
    tau: &Relation,
    window: &Window,
    min_length: usize,
    admit: &mut dyn FnMut(Elem) -> bool,
    chosen: &mut Vec<Elem>,
    visit: &mut dyn FnMut(&[Elem]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    if remaining == 1 {
        if chosen.len() >= min_length {
            return visit(chosen);
        }
        return ControlFlow::Continue(());
    }
    let min_key = chosen.last().map(|f| f.universe_key());
    for d in signed_divisors(remaining as i64) {
        let f = Elem::new(d).unwrap();
        if let Some(k) = min_key {
            if f.universe_key() < k {
                continue;
            }
        }
        if !admit(f) {
            continue;
        }
        if !chosen
            .iter()
            .all(|&g| tau.holds(g, f, window) && tau.holds(f, g, window))
        {
            continue;
        }
        chosen.push(f);
        let flow = dfs(
            remaining / f.abs(),
            tau,
            window,
            min_length,
            admit,
            chosen,
            visit,
        );
        chosen.pop();
        if flow.is_break() {
            return flow;
        }
    }
    ControlFlow::Continue(())
}

fn visit_factorizations(
    target: Elem,
    tau: &Relation,
    window: &Window,
    min_length: usize,
    admit: &mut dyn FnMut(Elem) -> bool,
    visit: &mut dyn FnMut(&[Elem]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let mut chosen = Vec::new();
    dfs(
        target.abs(),
        tau,
        window,
        min_length,
        admit,
        &mut chosen,
        visit,
    )
}

/// All factorizations of `a` under `tau` with at least `min_length` factors,
/// sorted by length and then lexicographically on the factor lists in
/// universe-key order. Pass `min_length` 1 to include the two trivial
/// factorizations, 2 to exclude them.
pub fn enumerate_factorizations(
    a: Elem,
    tau: &Relation,
    window: &Window,
    min_length: usize,
) -> Vec<TauFactorization> {
    let mut lists: Vec<Vec<Elem>> = Vec::new();
    let _ = visit_factorizations(a, tau, window, min_length, &mut |_| true, &mut |fs| {
        lists.push(fs.to_vec());
        ControlFlow::Continue(())
    });
    lists.sort_by_key(|fs| {
        (
            fs.len(),
            fs.iter().map(|f| f.universe_key()).collect::<Vec<_>>(),
        )
    });
    lists
        .into_iter()
        .map(|factors| {
            let fz = TauFactorization::assemble(a, factors);
            assert!(fz.verify(tau, window));
            fz
        })
        .collect()
}

/// Derived divisibility: `a` divides `b` under `tau` when `a` appears
/// literally as a factor in some factorization of `b` (trivial ones count,
/// so `a` always divides `a` and `-a`).
pub fn tau_divides(a: Elem, b: Elem, tau: &Relation, window: &Window) -> bool {
    if a.abs() == b.abs() {
        return true;
    }
    if !b.abs().is_multiple_of(a.abs()) {
        return false;
    }
    visit_factorizations(b, tau, window, 2, &mut |_| true, &mut |fs| {
        if fs.contains(&a) {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })
    .is_break()
}

/// The divisibility induced by `tau`, packaged as a relation. The window is
/// captured now and used for the inner factor searches regardless of the
/// window later evaluations pass.
pub fn tau_divides_relation(tau: &Relation, window: &Window) -> Relation {
    Relation::TauDivides(Box::new(tau.clone()), *window)
}

/// True when `a` admits no factorization with two or more factors.
pub fn is_tau_atom(a: Elem, tau: &Relation, window: &Window) -> bool {
    !visit_factorizations(a, tau, window, 2, &mut |_| true, &mut |_| {
        ControlFlow::Break(())
    })
    .is_break()
}

/// True when for every window multiple `b` of `p`, every factorization of
/// `b` with two or more factors has some factor divisible by `p`.
pub fn is_tau_prime(p: Elem, tau: &Relation, window: &Window) -> bool {
    for b in window.universe() {
        if b.abs() % p.abs() != 0 {
            continue;
        }
        let escaped = visit_factorizations(b, tau, window, 2, &mut |_| true, &mut |fs| {
            if fs.iter().any(|f| f.abs() % p.abs() == 0) {
                ControlFlow::Continue(())
            } else {
                ControlFlow::Break(())
            }
        })
        .is_break();
        if escaped {
            return false;
        }
    }
    true
}

#[derive(Debug, Clone, Serialize)]
pub struct UfdEntry {
    pub element: Elem,
    pub is_atom: bool,
    pub class_count: usize,
    pub classes: Vec<FactorizationClass>,
}

#[derive(Debug, Clone, Serialize)]
pub struct UfdDiagnostic {
    pub relation: String,
    pub window: Window,
    /// One entry per universe element, in universe order.
    pub entries: Vec<UfdEntry>,
    /// Elements with two or more atom-factorization classes.
    pub ufd_failures: Vec<Elem>,
    /// Non-atoms with no factorization into atoms at all.
    pub atomicity_failures: Vec<Elem>,
}

fn memo_atom(memo: &mut HashMap<u64, bool>, x: Elem, tau: &Relation, window: &Window) -> bool {
    if let Some(&v) = memo.get(&x.abs()) {
        return v;
    }
    let v = is_tau_atom(x, tau, window);
    memo.insert(x.abs(), v);
    v
}

/// For every window element, the distinct classes of its factorizations into
/// atoms. An atom's own class list is the single trivial class. Elements with
/// several classes witness non-unique factorization; non-atoms with none
/// witness non-atomicity.
pub fn ufd_diagnostic(tau: &Relation, window: &Window) -> UfdDiagnostic {
    // Atomhood only depends on |x|: a factorization of -x is one of x with
    // the unit flipped.
    let mut memo: HashMap<u64, bool> = HashMap::new();
    let mut entries = Vec::new();
    for a in window.universe() {
        let mut classes: BTreeSet<FactorizationClass> = BTreeSet::new();
        let _ = visit_factorizations(
            a,
            tau,
            window,
            1,
            &mut |f| memo_atom(&mut memo, f, tau, window),
            &mut |fs| {
                classes.insert(FactorizationClass::of(fs));
                ControlFlow::Continue(())
            },
        );
        let is_atom = memo_atom(&mut memo, a, tau, window);
        entries.push(UfdEntry {
            element: a,
            is_atom,
            class_count: classes.len(),
            classes: classes.into_iter().collect(),
        });
    }
    let ufd_failures = entries
        .iter()
        .filter(|e| e.class_count >= 2)
        .map(|e| e.element)
        .collect();
    let atomicity_failures = entries
        .iter()
        .filter(|e| !e.is_atom && e.class_count == 0)
        .map(|e| e.element)
        .collect();
    UfdDiagnostic {
        relation: tau.to_string(),
        window: *window,
        entries,
        ufd_failures,
        atomicity_failures,
    }
}
