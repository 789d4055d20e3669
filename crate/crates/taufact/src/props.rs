//! Bounded property checking over a window: classical relation properties,
//! the factorization-flavored ones (divisive, associate-preserving,
//! multiplicative, and the two shared-witness properties of composed
//! relations), and the transfer laws that move properties between two
//! relations and their composition.
//!
//! Every check is an exhaustive scan over tuples drawn from the window
//! universe. A `fails` verdict carries the first counterexample in
//! enumeration order (role-labeled, replayable through `Relation::holds`);
//! `holds_on_window` is a bounded claim, not a proof, except when the
//! relation's decisions are exact. Product tuples whose product escapes the
//! witness universe are skipped and counted, never silently widened.

use crate::domain::{crt_witness, signed_divisors, Elem, Window};
use crate::relation::Relation;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap, HashSet};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PropertyId {
    Reflexive,
    Symmetric,
    Transitive,
    Antisymmetric,
    Equivalence,
    PartialOrder,
    DivisiveLeft,
    DivisiveRight,
    Divisive,
    AssocPresLeft,
    AssocPresRight,
    AssocPres,
    MultLeft,
    MultRight,
    Multiplicative,
    Property1,
    Property2,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown property `{given}`; valid names: {valid}")]
pub struct UnknownProperty {
    pub given: String,
    pub valid: String,
}

impl PropertyId {
    pub const ALL: [PropertyId; 17] = [
        PropertyId::Reflexive,
        PropertyId::Symmetric,
        PropertyId::Transitive,
        PropertyId::Antisymmetric,
        PropertyId::Equivalence,
        PropertyId::PartialOrder,
        PropertyId::DivisiveLeft,
        PropertyId::DivisiveRight,
        PropertyId::Divisive,
        PropertyId::AssocPresLeft,
        PropertyId::AssocPresRight,
        PropertyId::AssocPres,
        PropertyId::MultLeft,
        PropertyId::MultRight,
        PropertyId::Multiplicative,
        PropertyId::Property1,
        PropertyId::Property2,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PropertyId::Reflexive => "reflexive",
            PropertyId::Symmetric => "symmetric",
            PropertyId::Transitive => "transitive",
            PropertyId::Antisymmetric => "antisymmetric",
            PropertyId::Equivalence => "equivalence",
            PropertyId::PartialOrder => "partial_order",
            PropertyId::DivisiveLeft => "divisive_left",
            PropertyId::DivisiveRight => "divisive_right",
            PropertyId::Divisive => "divisive",
            PropertyId::AssocPresLeft => "assoc_pres_left",
            PropertyId::AssocPresRight => "assoc_pres_right",
            PropertyId::AssocPres => "assoc_pres",
            PropertyId::MultLeft => "mult_left",
            PropertyId::MultRight => "mult_right",
            PropertyId::Multiplicative => "multiplicative",
            PropertyId::Property1 => "property1",
            PropertyId::Property2 => "property2",
        }
    }

    pub fn parse(s: &str) -> Result<PropertyId, UnknownProperty> {
        PropertyId::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| UnknownProperty {
                given: s.to_string(),
                valid: PropertyId::ALL
                    .into_iter()
                    .map(PropertyId::as_str)
                    .collect::<Vec<_>>()
                    .join(", "),
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    HoldsOnWindow,
    Fails,
    NotApplicable,
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessEntry {
    pub pair: (i64, i64),
    pub witness: i64,
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub property: String,
    pub relation: String,
    pub window: Window,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<BTreeMap<String, i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_trace: Option<Vec<WitnessEntry>>,
    pub skipped_tuples: u64,
    pub exact: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "is_false")]
    pub empty_relation: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failed_hypothesis: Option<String>,
    #[serde(skip_serializing_if = "is_false")]
    pub law_violation: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckReport {
    fn blank(property: impl Into<String>, relation: String, window: &Window) -> CheckReport {
        CheckReport {
            property: property.into(),
            relation,
            window: *window,
            verdict: Verdict::HoldsOnWindow,
            counterexample: None,
            witness_trace: None,
            skipped_tuples: 0,
            exact: false,
            seed: None,
            empty_relation: false,
            failed_hypothesis: None,
            law_violation: false,
            detail: None,
        }
    }

    pub fn holds(&self) -> bool {
        self.verdict == Verdict::HoldsOnWindow
    }
}

fn roles(entries: &[(&str, i64)]) -> BTreeMap<String, i64> {
    entries.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

/// Materialized window pairs of a relation, with first/second-keyed
/// adjacency for tuple scans. Lists follow universe order, so "first
/// counterexample" is independent of how the scan is partitioned.
struct PairIndex {
    pairs: Vec<(Elem, Elem)>,
    set: HashSet<(i64, i64)>,
    succ: HashMap<i64, Vec<Elem>>,
    pred: HashMap<i64, Vec<Elem>>,
}

impl PairIndex {
    fn build(r: &Relation, window: &Window) -> PairIndex {
        let pairs = r.enumerate(window);
        let mut set = HashSet::with_capacity(pairs.len());
        let mut succ: HashMap<i64, Vec<Elem>> = HashMap::new();
        let mut pred: HashMap<i64, Vec<Elem>> = HashMap::new();
        for &(a, b) in &pairs {
            set.insert((a.get(), b.get()));
            succ.entry(a.get()).or_default().push(b);
            pred.entry(b.get()).or_default().push(a);
        }
        PairIndex {
            pairs,
            set,
            succ,
            pred,
        }
    }

    fn has(&self, a: Elem, b: Elem) -> bool {
        self.set.contains(&(a.get(), b.get()))
    }

    fn succ(&self, a: Elem) -> &[Elem] {
        self.succ.get(&a.get()).map_or(&[], |v| v.as_slice())
    }

    #[allow(dead_code)]
    fn pred(&self, b: Elem) -> &[Elem] {
        self.pred.get(&b.get()).map_or(&[], |v| v.as_slice())
    }

    fn image_contains(&self, x: Elem) -> bool {
        self.pred.contains_key(&x.get())
    }

    fn coimage_contains(&self, x: Elem) -> bool {
        self.succ.contains_key(&x.get())
    }
}

/// Membership that prefers the index for window pairs and falls back to
/// direct evaluation for elements beyond the window (products can reach up
/// to the witness bound).
fn member(r: &Relation, idx: &PairIndex, window: &Window, a: Elem, b: Elem) -> bool {
    if window.contains(a) && window.contains(b) {
        idx.has(a, b)
    } else {
        r.holds(a, b, window)
    }
}

/// Deterministic composition witness for a pair known (or suspected) to be
/// in compose(first, second): the congruence family gets the exact minimal
/// witness, everything else the first hit in universe order.
fn compose_witness(
    first: &Relation,
    second: &Relation,
    a: Elem,
    b: Elem,
    window: &Window,
) -> Option<Elem> {
    if let (Relation::ModN(n), Relation::ModN(m)) = (first, second) {
        if *n >= 2 && *m >= 2 {
            return crt_witness(a.get(), b.get(), *m, *n);
        }
    }
    window
        .witness_universe()
        .find(|&c| second.holds(a, c, window) && first.holds(c, b, window))
}

pub fn check(r: &Relation, p: PropertyId, window: &Window) -> CheckReport {
    let idx = PairIndex::build(r, window);
    check_inner(r, p, window, &idx)
}

fn check_inner(r: &Relation, p: PropertyId, window: &Window, idx: &PairIndex) -> CheckReport {
    let mut report = CheckReport::blank(p.as_str(), r.to_string(), window);
    report.exact = r.decision_is_exact();
    report.empty_relation = idx.pairs.is_empty();
    match p {
        PropertyId::Reflexive => {
            if let Some(a) = window.universe().find(|&a| !idx.has(a, a)) {
                fail(&mut report, roles(&[("a", a.get())]));
            }
        }
        PropertyId::Symmetric => {
            if let Some(&(a, b)) = idx.pairs.iter().find(|&&(a, b)| !idx.has(b, a)) {
                fail(&mut report, roles(&[("a", a.get()), ("b", b.get())]));
            }
        }
        PropertyId::Transitive => {
            'scan: for &(a, b) in &idx.pairs {
                for &c in idx.succ(b) {
                    if !idx.has(a, c) {
                        fail(
                            &mut report,
                            roles(&[("a", a.get()), ("b", b.get()), ("c", c.get())]),
                        );
                        break 'scan;
                    }
                }
            }
        }
        PropertyId::Antisymmetric => {
            // Up to associates: mutual relatedness forces |a| = |b|.
            if let Some(&(a, b)) = idx
                .pairs
                .iter()
                .find(|&&(a, b)| idx.has(b, a) && a.abs() != b.abs())
            {
                fail(&mut report, roles(&[("a", a.get()), ("b", b.get())]));
            }
        }
        PropertyId::Equivalence => {
            return composite(
                r,
                window,
                idx,
                &[
                    PropertyId::Reflexive,
                    PropertyId::Symmetric,
                    PropertyId::Transitive,
                ],
                report,
            );
        }
        PropertyId::PartialOrder => {
            return composite(
                r,
                window,
                idx,
                &[
                    PropertyId::Reflexive,
                    PropertyId::Antisymmetric,
                    PropertyId::Transitive,
                ],
                report,
            );
        }
        PropertyId::DivisiveLeft => {
            'scan: for &(a, b) in &idx.pairs {
                for d in signed_divisors(a.get()) {
                    let a_prime = Elem::new(d).unwrap();
                    if !idx.has(a_prime, b) {
                        fail(
                            &mut report,
                            roles(&[("a", a.get()), ("b", b.get()), ("a_prime", d)]),
                        );
                        break 'scan;
                    }
                }
            }
        }
        PropertyId::DivisiveRight => {
            'scan: for &(a, b) in &idx.pairs {
                for d in signed_divisors(b.get()) {
                    let b_prime = Elem::new(d).unwrap();
                    if !idx.has(a, b_prime) {
                        fail(
                            &mut report,
                            roles(&[("a", a.get()), ("b", b.get()), ("b_prime", d)]),
                        );
                        break 'scan;
                    }
                }
            }
        }
        PropertyId::Divisive => {
            return composite(
                r,
                window,
                idx,
                &[PropertyId::DivisiveLeft, PropertyId::DivisiveRight],
                report,
            );
        }
        PropertyId::AssocPresLeft => {
            if let Some(&(a, b)) = idx.pairs.iter().find(|&&(a, b)| !idx.has(a.negate(), b)) {
                fail(
                    &mut report,
                    roles(&[("a", a.get()), ("b", b.get()), ("c", -a.get())]),
                );
            }
        }
        PropertyId::AssocPresRight => {
            if let Some(&(a, b)) = idx.pairs.iter().find(|&&(a, b)| !idx.has(a, b.negate())) {
                fail(
                    &mut report,
                    roles(&[("a", a.get()), ("b", b.get()), ("c", -b.get())]),
                );
            }
        }
        PropertyId::AssocPres => {
            return composite(
                r,
                window,
                idx,
                &[PropertyId::AssocPresLeft, PropertyId::AssocPresRight],
                report,
            );
        }
        PropertyId::MultLeft => {
            'scan: for a in window.universe() {
                for b in window.universe() {
                    for &c in idx.succ(a) {
                        if !idx.has(b, c) {
                            continue;
                        }
                        let ab = a.get() * b.get();
                        if ab.unsigned_abs() > window.witness_bound() {
                            report.skipped_tuples += 1;
                            continue;
                        }
                        if !member(r, idx, window, Elem::new(ab).unwrap(), c) {
                            fail(
                                &mut report,
                                roles(&[
                                    ("a", a.get()),
                                    ("b", b.get()),
                                    ("c", c.get()),
                                    ("ab", ab),
                                ]),
                            );
                            break 'scan;
                        }
                    }
                }
            }
        }
        PropertyId::MultRight => {
            'scan: for a in window.universe() {
                for &b in idx.succ(a) {
                    for &c in idx.succ(a) {
                        let bc = b.get() * c.get();
                        if bc.unsigned_abs() > window.witness_bound() {
                            report.skipped_tuples += 1;
                            continue;
                        }
                        if !member(r, idx, window, a, Elem::new(bc).unwrap()) {
                            fail(
                                &mut report,
                                roles(&[
                                    ("a", a.get()),
                                    ("b", b.get()),
                                    ("c", c.get()),
                                    ("bc", bc),
                                ]),
                            );
                            break 'scan;
                        }
                    }
                }
            }
        }
        PropertyId::Multiplicative => {
            return composite(
                r,
                window,
                idx,
                &[PropertyId::MultLeft, PropertyId::MultRight],
                report,
            );
        }
        PropertyId::Property1 | PropertyId::Property2 => {
            let Relation::Compose(first, second) = r else {
                report.verdict = Verdict::NotApplicable;
                report.detail = Some("only defined for a composed relation".into());
                return report;
            };
            check_shared_witness(p, first, second, window, idx, &mut report);
        }
    }
    report
}

fn fail(report: &mut CheckReport, ce: BTreeMap<String, i64>) {
    report.verdict = Verdict::Fails;
    report.counterexample = Some(ce);
}

fn composite(
    r: &Relation,
    window: &Window,
    idx: &PairIndex,
    parts: &[PropertyId],
    mut report: CheckReport,
) -> CheckReport {
    for &part in parts {
        let sub = check_inner(r, part, window, idx);
        report.skipped_tuples += sub.skipped_tuples;
        if !sub.holds() {
            report.verdict = Verdict::Fails;
            report.counterexample = sub.counterexample;
            report.witness_trace = sub.witness_trace;
            report.detail = Some(format!("fails {}", part.as_str()));
            return report;
        }
    }
    report
}

fn check_shared_witness(
    p: PropertyId,
    first: &Relation,
    second: &Relation,
    window: &Window,
    idx: &PairIndex,
    report: &mut CheckReport,
) {
    let admits = |a: Elem, b: Elem, c: Elem, d: Elem| match p {
        PropertyId::Property1 => {
            second.holds(a, d, window) && second.holds(b, d, window) && first.holds(d, c, window)
        }
        _ => second.holds(a, d, window) && first.holds(d, b, window) && first.holds(d, c, window),
    };
    let record = |report: &mut CheckReport, a: Elem, b: Elem, c: Elem| {
        let premises = match p {
            PropertyId::Property1 => [(a, c), (b, c)],
            _ => [(a, b), (a, c)],
        };
        report.witness_trace = premises
            .iter()
            .map(|&(x, y)| {
                compose_witness(first, second, x, y, window).map(|w| WitnessEntry {
                    pair: (x.get(), y.get()),
                    witness: w.get(),
                })
            })
            .collect();
        fail(
            report,
            roles(&[("a", a.get()), ("b", b.get()), ("c", c.get())]),
        );
    };
    for a in window.universe() {
        if idx.succ(a).is_empty() {
            continue;
        }
        match p {
            PropertyId::Property1 => {
                for b in window.universe() {
                    for &c in idx.succ(a) {
                        if !idx.has(b, c) {
                            continue;
                        }
                        if !window.witness_universe().any(|d| admits(a, b, c, d)) {
                            record(report, a, b, c);
                            return;
                        }
                    }
                }
            }
            _ => {
                for &b in idx.succ(a) {
                    for &c in idx.succ(a) {
                        if !window.witness_universe().any(|d| admits(a, b, c, d)) {
                            record(report, a, b, c);
                            return;
                        }
                    }
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransferLaw {
    ReflexiveLeftFactor,
    ReflexiveRightFactor,
    ReflexiveBothFactors,
    ComposeDivisiveLeft,
    ComposeDivisiveRight,
    ComposeDivisive,
    ComposeDivisiveBothOrders,
    ComposeMultiplicativeLeft,
    ComposeMultiplicativeRight,
    SquareReflexive,
    SquareSymmetric,
    SquareTransitive,
    SquareEquivalence,
    SquarePartialOrder,
    SubsetTransitiveContainment,
    SubsetTransitiveCompose,
    SubsetTransitiveComposeFlipped,
    SubsetEquivalence,
    SubsetPartialOrder,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown transfer law `{given}`; valid names: {valid}")]
pub struct UnknownLaw {
    pub given: String,
    pub valid: String,
}

impl TransferLaw {
    pub const ALL: [TransferLaw; 19] = [
        TransferLaw::ReflexiveLeftFactor,
        TransferLaw::ReflexiveRightFactor,
        TransferLaw::ReflexiveBothFactors,
        TransferLaw::ComposeDivisiveLeft,
        TransferLaw::ComposeDivisiveRight,
        TransferLaw::ComposeDivisive,
        TransferLaw::ComposeDivisiveBothOrders,
        TransferLaw::ComposeMultiplicativeLeft,
        TransferLaw::ComposeMultiplicativeRight,
        TransferLaw::SquareReflexive,
        TransferLaw::SquareSymmetric,
        TransferLaw::SquareTransitive,
        TransferLaw::SquareEquivalence,
        TransferLaw::SquarePartialOrder,
        TransferLaw::SubsetTransitiveContainment,
        TransferLaw::SubsetTransitiveCompose,
        TransferLaw::SubsetTransitiveComposeFlipped,
        TransferLaw::SubsetEquivalence,
        TransferLaw::SubsetPartialOrder,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TransferLaw::ReflexiveLeftFactor => "reflexive-left-factor",
            TransferLaw::ReflexiveRightFactor => "reflexive-right-factor",
            TransferLaw::ReflexiveBothFactors => "reflexive-both-factors",
            TransferLaw::ComposeDivisiveLeft => "compose-divisive-left",
            TransferLaw::ComposeDivisiveRight => "compose-divisive-right",
            TransferLaw::ComposeDivisive => "compose-divisive",
            TransferLaw::ComposeDivisiveBothOrders => "compose-divisive-both-orders",
            TransferLaw::ComposeMultiplicativeLeft => "compose-multiplicative-left",
            TransferLaw::ComposeMultiplicativeRight => "compose-multiplicative-right",
            TransferLaw::SquareReflexive => "square-reflexive",
            TransferLaw::SquareSymmetric => "square-symmetric",
            TransferLaw::SquareTransitive => "square-transitive",
            TransferLaw::SquareEquivalence => "square-equivalence",
            TransferLaw::SquarePartialOrder => "square-partial-order",
            TransferLaw::SubsetTransitiveContainment => "subset-transitive-containment",
            TransferLaw::SubsetTransitiveCompose => "subset-transitive-compose",
            TransferLaw::SubsetTransitiveComposeFlipped => "subset-transitive-compose-flipped",
            TransferLaw::SubsetEquivalence => "subset-equivalence",
            TransferLaw::SubsetPartialOrder => "subset-partial-order",
        }
    }

    pub fn parse(s: &str) -> Result<TransferLaw, UnknownLaw> {
        TransferLaw::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| UnknownLaw {
                given: s.to_string(),
                valid: TransferLaw::ALL
                    .into_iter()
                    .map(TransferLaw::as_str)
                    .collect::<Vec<_>>()
                    .join(", "),
            })
    }
}

struct LawRun<'a> {
    t1: &'a Relation,
    t2: &'a Relation,
    window: &'a Window,
    report: CheckReport,
    decided: bool,
}

impl<'a> LawRun<'a> {
    fn new(law: TransferLaw, t1: &'a Relation, t2: &'a Relation, window: &'a Window) -> LawRun<'a> {
        let mut report = CheckReport::blank(law.as_str(), format!("tau1={t1}, tau2={t2}"), window);
        report.exact = Relation::compose(t1.clone(), t2.clone()).decision_is_exact();
        LawRun {
            t1,
            t2,
            window,
            report,
            decided: false,
        }
    }

    fn comp(&self) -> Relation {
        Relation::compose(self.t1.clone(), self.t2.clone())
    }

    fn flip(&self) -> Relation {
        Relation::compose(self.t2.clone(), self.t1.clone())
    }

    /// Hypothesis drawn from a property check; failure makes the law
    /// not applicable.
    fn hyp(&mut self, label: &str, rel: &Relation, p: PropertyId) -> bool {
        if self.decided {
            return false;
        }
        let sub = check(rel, p, self.window);
        if sub.holds() {
            true
        } else {
            self.report.verdict = Verdict::NotApplicable;
            self.report.failed_hypothesis = Some(label.to_string());
            self.report.counterexample = sub.counterexample;
            self.report.detail = sub.detail;
            self.decided = true;
            false
        }
    }

    /// Structural hypothesis with an optional counterexample.
    fn hyp_that(&mut self, label: &str, ok: bool, ce: Option<BTreeMap<String, i64>>) -> bool {
        if self.decided {
            return false;
        }
        if ok {
            true
        } else {
            self.report.verdict = Verdict::NotApplicable;
            self.report.failed_hypothesis = Some(label.to_string());
            self.report.counterexample = ce;
            self.decided = true;
            false
        }
    }

    /// Conclusion part drawn from a property check; failure with hypotheses
    /// already passed is a law violation.
    fn conclude(&mut self, label: &str, rel: &Relation, p: PropertyId) -> bool {
        if self.decided {
            return false;
        }
        let sub = check(rel, p, self.window);
        self.report.skipped_tuples += sub.skipped_tuples;
        self.report.empty_relation |= sub.empty_relation;
        if sub.holds() {
            true
        } else {
            self.report.verdict = Verdict::Fails;
            self.report.law_violation = true;
            self.report.counterexample = sub.counterexample;
            self.report.witness_trace = sub.witness_trace;
            self.report.detail = Some(match &sub.detail {
                Some(d) => format!("{label}: {d}"),
                None => label.to_string(),
            });
            self.decided = true;
            false
        }
    }

    /// Conclusion part `sub_rel` contained in `sup_rel` on the window. When
    /// the superset is a composition, the witnesses backing each contained
    /// pair are recorded (small relations only, to keep reports readable).
    fn conclude_subset(&mut self, label: &str, sub_rel: &Relation, sup_rel: &Relation) -> bool {
        if self.decided {
            return false;
        }
        let sub_idx = PairIndex::build(sub_rel, self.window);
        let sup_idx = PairIndex::build(sup_rel, self.window);
        if let Some(&(a, b)) = sub_idx.pairs.iter().find(|&&(a, b)| !sup_idx.has(a, b)) {
            self.report.verdict = Verdict::Fails;
            self.report.law_violation = true;
            self.report.counterexample = Some(roles(&[("a", a.get()), ("b", b.get())]));
            self.report.detail = Some(label.to_string());
            self.decided = true;
            return false;
        }
        if let Relation::Compose(first, second) = sup_rel {
            if sub_idx.pairs.len() <= 200 && self.report.witness_trace.is_none() {
                self.report.witness_trace = sub_idx
                    .pairs
                    .iter()
                    .map(|&(a, b)| {
                        compose_witness(first, second, a, b, self.window).map(|w| WitnessEntry {
                            pair: (a.get(), b.get()),
                            witness: w.get(),
                        })
                    })
                    .collect();
            }
        }
        true
    }

    fn finish(self) -> CheckReport {
        self.report
    }
}

fn first_pair_difference(a: &Relation, b: &Relation, window: &Window) -> Option<(Elem, Elem)> {
    let ia = PairIndex::build(a, window);
    let ib = PairIndex::build(b, window);
    for x in window.universe() {
        for y in window.universe() {
            if ia.has(x, y) != ib.has(x, y) {
                return Some((x, y));
            }
        }
    }
    None
}

fn first_missing_pair(sub: &Relation, sup: &Relation, window: &Window) -> Option<(Elem, Elem)> {
    let si = PairIndex::build(sub, window);
    let pi = PairIndex::build(sup, window);
    si.pairs.iter().find(|&&(a, b)| !pi.has(a, b)).copied()
}

fn is_nonempty(r: &Relation, window: &Window) -> bool {
    window
        .universe()
        .any(|a| window.universe().any(|b| r.holds(a, b, window)))
}

pub fn check_transfer(
    law: TransferLaw,
    t1: &Relation,
    t2: &Relation,
    window: &Window,
) -> CheckReport {
    let mut run = LawRun::new(law, t1, t2, window);
    let comp = run.comp();
    let flip = run.flip();
    match law {
        TransferLaw::ReflexiveLeftFactor => {
            if run.hyp("tau1 reflexive", t1, PropertyId::Reflexive) {
                run.conclude_subset("tau2 contained in composition", t2, &comp);
            }
        }
        TransferLaw::ReflexiveRightFactor => {
            if run.hyp("tau2 reflexive", t2, PropertyId::Reflexive) {
                run.conclude_subset("tau1 contained in composition", t1, &comp);
            }
        }
        TransferLaw::ReflexiveBothFactors => {
            if run.hyp("tau1 reflexive", t1, PropertyId::Reflexive)
                && run.hyp("tau2 reflexive", t2, PropertyId::Reflexive)
                && run.conclude("composition reflexive", &comp, PropertyId::Reflexive)
            {
                run.conclude(
                    "flipped composition reflexive",
                    &flip,
                    PropertyId::Reflexive,
                );
            }
        }
        TransferLaw::ComposeDivisiveLeft => {
            if run.hyp("tau2 divisive_left", t2, PropertyId::DivisiveLeft) {
                run.conclude("composition divisive_left", &comp, PropertyId::DivisiveLeft);
            }
        }
        TransferLaw::ComposeDivisiveRight => {
            if run.hyp("tau1 divisive_right", t1, PropertyId::DivisiveRight) {
                run.conclude(
                    "composition divisive_right",
                    &comp,
                    PropertyId::DivisiveRight,
                );
            }
        }
        TransferLaw::ComposeDivisive => {
            if run.hyp("tau1 divisive_right", t1, PropertyId::DivisiveRight)
                && run.hyp("tau2 divisive_left", t2, PropertyId::DivisiveLeft)
            {
                run.conclude("composition divisive", &comp, PropertyId::Divisive);
            }
        }
        TransferLaw::ComposeDivisiveBothOrders => {
            if run.hyp("tau1 divisive", t1, PropertyId::Divisive)
                && run.hyp("tau2 divisive", t2, PropertyId::Divisive)
                && run.conclude("composition divisive", &comp, PropertyId::Divisive)
            {
                run.conclude("flipped composition divisive", &flip, PropertyId::Divisive);
            }
        }
        TransferLaw::ComposeMultiplicativeLeft => {
            let nonempty = is_nonempty(&comp, window);
            if run.hyp_that("composition nonempty", nonempty, None)
                && run.hyp("tau2 mult_left", t2, PropertyId::MultLeft)
                && run.hyp("property1", &comp, PropertyId::Property1)
            {
                run.conclude("composition mult_left", &comp, PropertyId::MultLeft);
            }
        }
        TransferLaw::ComposeMultiplicativeRight => {
            let nonempty = is_nonempty(&comp, window);
            if run.hyp_that("composition nonempty", nonempty, None)
                && run.hyp("tau1 mult_right", t1, PropertyId::MultRight)
                && run.hyp("property2", &comp, PropertyId::Property2)
            {
                run.conclude("composition mult_right", &comp, PropertyId::MultRight);
            }
        }
        TransferLaw::SquareReflexive
        | TransferLaw::SquareSymmetric
        | TransferLaw::SquareTransitive
        | TransferLaw::SquareEquivalence
        | TransferLaw::SquarePartialOrder => {
            let same = first_pair_difference(t1, t2, window);
            let same_ok = run.hyp_that(
                "tau1 equals tau2 on window",
                same.is_none(),
                same.map(|(a, b)| roles(&[("a", a.get()), ("b", b.get())])),
            );
            if !same_ok {
                return run.finish();
            }
            if !run.hyp_that("square nonempty", is_nonempty(&comp, window), None) {
                return run.finish();
            }
            match law {
                TransferLaw::SquareReflexive => {
                    if run.hyp("tau reflexive", t1, PropertyId::Reflexive) {
                        run.conclude("square reflexive", &comp, PropertyId::Reflexive);
                    }
                }
                TransferLaw::SquareSymmetric => {
                    if run.hyp("tau symmetric", t1, PropertyId::Symmetric) {
                        let t1_idx = PairIndex::build(t1, window);
                        let sq_idx = PairIndex::build(&comp, window);
                        let unfixed = window.universe().find(|&x| {
                            (t1_idx.coimage_contains(x) || t1_idx.image_contains(x))
                                && !sq_idx.has(x, x)
                        });
                        if let Some(x) = unfixed {
                            run.report.verdict = Verdict::Fails;
                            run.report.law_violation = true;
                            run.report.counterexample = Some(roles(&[("x", x.get())]));
                            run.report.detail =
                                Some("identity on coimage and image contained in square".into());
                            run.decided = true;
                        } else {
                            run.conclude("square symmetric", &comp, PropertyId::Symmetric);
                        }
                    }
                }
                TransferLaw::SquareTransitive => {
                    if run.hyp("tau transitive", t1, PropertyId::Transitive)
                        && run.conclude_subset("square contained in tau", &comp, t1)
                    {
                        run.conclude("square transitive", &comp, PropertyId::Transitive);
                    }
                }
                TransferLaw::SquareEquivalence => {
                    if run.hyp("tau equivalence", t1, PropertyId::Equivalence) {
                        run.conclude("square equivalence", &comp, PropertyId::Equivalence);
                    }
                }
                TransferLaw::SquarePartialOrder => {
                    if run.hyp("tau partial_order", t1, PropertyId::PartialOrder) {
                        run.conclude("square partial_order", &comp, PropertyId::PartialOrder);
                    }
                }
                _ => unreachable!(),
            }
        }
        TransferLaw::SubsetTransitiveContainment => {
            let missing = first_missing_pair(t1, t2, window);
            if run.hyp_that(
                "tau1 contained in tau2",
                missing.is_none(),
                missing.map(|(a, b)| roles(&[("a", a.get()), ("b", b.get())])),
            ) && run.hyp("tau2 transitive", t2, PropertyId::Transitive)
                && run.conclude_subset("composition contained in tau2", &comp, t2)
            {
                run.conclude_subset("flipped composition contained in tau2", &flip, t2);
            }
        }
        TransferLaw::SubsetTransitiveCompose | TransferLaw::SubsetTransitiveComposeFlipped => {
            let target = if law == TransferLaw::SubsetTransitiveCompose {
                &comp
            } else {
                &flip
            };
            let missing = first_missing_pair(t1, t2, window);
            if !run.hyp_that(
                "tau1 contained in tau2",
                missing.is_none(),
                missing.map(|(a, b)| roles(&[("a", a.get()), ("b", b.get())])),
            ) {
                return run.finish();
            }
            if !run.hyp("tau2 transitive", t2, PropertyId::Transitive) {
                return run.finish();
            }
            let target_idx = PairIndex::build(target, window);
            let t1_idx = PairIndex::build(t1, window);
            let unfixed = window
                .universe()
                .find(|&x| target_idx.image_contains(x) && !t1_idx.has(x, x));
            if run.hyp_that(
                "identity on composition image contained in tau1",
                unfixed.is_none(),
                unfixed.map(|x| roles(&[("x", x.get())])),
            ) {
                run.conclude("composition transitive", target, PropertyId::Transitive);
            }
        }
        TransferLaw::SubsetEquivalence | TransferLaw::SubsetPartialOrder => {
            let missing = first_missing_pair(t1, t2, window);
            let ok = run.hyp("tau1 reflexive", t1, PropertyId::Reflexive)
                && run.hyp_that("composition nonempty", is_nonempty(&comp, window), None)
                && run.hyp_that(
                    "flipped composition nonempty",
                    is_nonempty(&flip, window),
                    None,
                )
                && run.hyp_that(
                    "tau1 contained in tau2",
                    missing.is_none(),
                    missing.map(|(a, b)| roles(&[("a", a.get()), ("b", b.get())])),
                );
            if ok {
                let p = if law == TransferLaw::SubsetEquivalence {
                    PropertyId::Equivalence
                } else {
                    PropertyId::PartialOrder
                };
                let hyp_label = if p == PropertyId::Equivalence {
                    "tau2 equivalence"
                } else {
                    "tau2 partial_order"
                };
                if run.hyp(hyp_label, t2, p) && run.conclude("composition inherits", &comp, p) {
                    run.conclude("flipped composition inherits", &flip, p);
                }
            }
        }
    }
    run.finish()
}
