//! The built-in verification suite. Every item replays a fixed set of
//! checks and claims against relations constructed from scratch, records a
//! JSON report, and either matches its expected outcome or fails the run.
//! Items are independent, so they can run on any number of worker threads;
//! reports are written in a fixed order afterwards and the summary last,
//! which keeps two runs with the same flags byte-identical.

use std::collections::BTreeSet;
use std::fs;
use std::io;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde_json::{json, Value};
use taufact::domain::{gcd, Elem, Window};
use taufact::factor::{
    enumerate_factorizations, tau_divides, tau_divides_relation, ufd_diagnostic,
};
use taufact::props::{check, check_transfer, PropertyId, TransferLaw, Verdict};
use taufact::relation::{BlockSpec, PrimePattern, Relation, SetSpec};
use taufact::reldef;
use taufact::report;
use taufact::search::{search_counterexample, RelationSampler, SearchOutcome};

/// Anchor slugs naming the statements the suite covers. Each suite item
/// carries exactly one of these; the meta-test in this module fails if an
/// anchor has no item.
pub const ANCHORS: [&str; 26] = [
    "definition-composition",
    "composition-projections",
    "inverse-and-identity",
    "definition-tau-factorization",
    "definition-lateral-properties",
    "example-ideal-containment",
    "example-sign-pair-composition",
    "proposition-reflexivity",
    "example-partition-composition",
    "proposition-divisive-transfer",
    "tables-divisive-composition",
    "example-pattern-composition",
    "properties-shared-witness",
    "proposition-multiplicative-composition",
    "proposition-square-properties",
    "proposition-subset-transitivity",
    "proposition-subset-equivalence-order",
    "example-subset-multiplicative-failure",
    "congruence-family-profile",
    "congruence-composition-gcd",
    "congruence-divisor-corollary",
    "congruence-degenerate-moduli",
    "derived-divisibility-relation",
    "proposition-divisibility-transfer",
    "derived-divisibility-laws",
    "composed-ufd-failure",
];

pub struct Ctx {
    pub window: Window,
    pub seed: u64,
}

/// One pass/fail observation inside an item, with its JSON rendering.
type Entry = (bool, Value);

/// Overall verdict of an item plus the rendered entries.
pub type ItemOutcome = (bool, Vec<Value>);

type RunFn = Box<dyn Fn(&Ctx) -> Vec<Entry> + Send + Sync>;

pub struct SuiteItem {
    pub id: String,
    pub anchor: &'static str,
    run: RunFn,
}

impl SuiteItem {
    /// Run the item's checks; true means every entry passed.
    pub fn execute(&self, ctx: &Ctx) -> ItemOutcome {
        let entries = (self.run)(ctx);
        let pass = entries.iter().all(|(ok, _)| *ok);
        (pass, entries.into_iter().map(|(_, v)| v).collect())
    }
}

fn item(
    id: impl Into<String>,
    anchor: &'static str,
    run: impl Fn(&Ctx) -> Vec<Entry> + Send + Sync + 'static,
) -> SuiteItem {
    SuiteItem {
        id: id.into(),
        anchor,
        run: Box::new(run),
    }
}

fn e(v: i64) -> Elem {
    Elem::new(v).unwrap()
}

fn win(b: u64, w: u64) -> Window {
    Window::new(b, w).unwrap()
}

fn ext(pairs: &[(i64, i64)]) -> Relation {
    Relation::extensional(pairs.iter().copied()).unwrap()
}

fn pat(pairs: &[(&[u64], &[u64])]) -> Relation {
    Relation::pattern(
        pairs
            .iter()
            .map(|(l, r)| {
                (
                    PrimePattern::new(l.iter().copied()).unwrap(),
                    PrimePattern::new(r.iter().copied()).unwrap(),
                )
            })
            .collect(),
    )
}

/// Left-divisive but not right-divisive: both associates of 2 relate to 2,
/// nothing else does.
fn sided_left() -> Relation {
    ext(&[(2, 2), (-2, 2)])
}

/// Right-divisive but not left-divisive.
fn sided_right() -> Relation {
    ext(&[(2, 2), (2, -2)])
}

fn holds(r: &Relation, a: i64, b: i64, w: &Window) -> bool {
    r.holds(e(a), e(b), w)
}

fn pairs(r: &Relation, w: &Window) -> Vec<(i64, i64)> {
    r.enumerate(w)
        .into_iter()
        .map(|(a, b)| (a.get(), b.get()))
        .collect()
}

fn subset_of(sub: &Relation, sup: &Relation, w: &Window) -> bool {
    sub.enumerate(w)
        .into_iter()
        .all(|(a, b)| sup.holds(a, b, w))
}

fn same_pairs(x: &Relation, y: &Relation, w: &Window) -> bool {
    x.enumerate(w) == y.enumerate(w)
}

fn check_entry(r: &Relation, p: PropertyId, w: &Window, expected: Verdict) -> Entry {
    let rep = check(r, p, w);
    let pass = rep.verdict == expected;
    let doc = json!({
        "kind": "check",
        "expected": serde_json::to_value(expected).unwrap(),
        "pass": pass,
        "report": serde_json::to_value(&rep).unwrap(),
    });
    (pass, doc)
}

fn transfer_entry(
    law: TransferLaw,
    t1: &Relation,
    t2: &Relation,
    w: &Window,
    expected: Verdict,
) -> Entry {
    let rep = check_transfer(law, t1, t2, w);
    let pass = rep.verdict == expected;
    let doc = json!({
        "kind": "transfer",
        "law": law.as_str(),
        "expected": serde_json::to_value(expected).unwrap(),
        "pass": pass,
        "report": serde_json::to_value(&rep).unwrap(),
    });
    (pass, doc)
}

fn claim(name: &str, pass: bool) -> Entry {
    (pass, json!({"kind": "claim", "name": name, "pass": pass}))
}

fn claim_det(name: &str, pass: bool, detail: Value) -> Entry {
    (
        pass,
        json!({"kind": "claim", "name": name, "pass": pass, "detail": detail}),
    )
}

fn composition_definition(_: &Ctx) -> Vec<Entry> {
    let w = win(10, 20);
    let comp = Relation::compose(ext(&[(3, 2)]), ext(&[(2, 3)]));
    let flipped = Relation::compose(ext(&[(2, 3)]), ext(&[(3, 2)]));
    let broken = Relation::compose(ext(&[(5, 7)]), ext(&[(2, 3)]));
    let wide = win(10, 80);
    let far = Relation::compose(ext(&[(60, 2)]), ext(&[(2, 60)]));
    vec![
        claim("inner-then-outer-order", pairs(&comp, &w) == vec![(2, 2)]),
        claim("flipped-order-differs", pairs(&flipped, &w) == vec![(3, 3)]),
        claim("broken-chain-is-empty", pairs(&broken, &w).is_empty()),
        claim("witness-within-witness-bound", holds(&far, 2, 2, &wide)),
        claim(
            "witness-beyond-witness-bound",
            !holds(&far, 2, 2, &win(10, 20)),
        ),
    ]
}

fn composition_projections(_: &Ctx) -> Vec<Entry> {
    let w = win(12, 36);
    let instances: Vec<(&str, Relation, Relation)> = vec![
        ("congruences", Relation::modn(4), Relation::modn(6)),
        ("sided", sided_left(), Relation::Full),
        (
            "patterns",
            pat(&[(&[3], &[2]), (&[2], &[3])]),
            pat(&[(&[3], &[3]), (&[3], &[7])]),
        ),
    ];
    let mut out = Vec::new();
    for (label, t1, t2) in instances {
        let comp = Relation::compose(t1.clone(), t2.clone());
        out.push(claim(
            &format!("coimage-containment-{label}"),
            comp.coimage(&w).is_subset(&t2.coimage(&w)),
        ));
        out.push(claim(
            &format!("image-containment-{label}"),
            comp.image(&w).is_subset(&t1.image(&w)),
        ));
    }
    out
}

fn inverse_identity_laws(_: &Ctx) -> Vec<Entry> {
    let w = win(12, 24);
    let r = Relation::IdealContainment;
    let id_im = Relation::identity_on(SetSpec::ImageOf(Box::new(r.clone())));
    let id_coim = Relation::identity_on(SetSpec::CoimageOf(Box::new(r.clone())));
    let round = Relation::compose(r.clone(), Relation::inverse_of(r.clone()));
    let round_rev = Relation::compose(Relation::inverse_of(r.clone()), r.clone());
    let t1 = Relation::modn(4);
    let t2 = Relation::IdealContainment;
    let inv_comp = Relation::inverse_of(Relation::compose(t1.clone(), t2.clone()));
    let comp_inv = Relation::compose(
        Relation::inverse_of(t2.clone()),
        Relation::inverse_of(t1.clone()),
    );
    vec![
        claim(
            "inverse-involution",
            same_pairs(
                &Relation::inverse_of(Relation::inverse_of(r.clone())),
                &r,
                &w,
            ),
        ),
        claim("identity-on-image", subset_of(&id_im, &round, &w)),
        claim("identity-on-coimage", subset_of(&id_coim, &round_rev, &w)),
        claim(
            "inverse-of-composition",
            same_pairs(&inv_comp, &comp_inv, &w),
        ),
    ]
}

fn factorization_definition(_: &Ctx) -> Vec<Entry> {
    let w = win(20, 40);
    let full = Relation::Full;
    let trivial = enumerate_factorizations(e(4), &full, &w, 1);
    let nontrivial = enumerate_factorizations(e(4), &full, &w, 2);
    let lists: Vec<Vec<i64>> = nontrivial
        .iter()
        .map(|f| f.factors.iter().map(|x| x.get()).collect())
        .collect();
    let twelve = enumerate_factorizations(e(12), &Relation::modn(2), &w, 2);
    let twelve_classes: BTreeSet<_> = twelve.iter().map(|f| f.class()).collect();
    let class_lists: Vec<(usize, Vec<u64>)> = twelve_classes
        .iter()
        .map(|c| (c.length, c.abs_multiset.clone()))
        .collect();
    vec![
        claim(
            "two-trivial-factorizations",
            trivial.iter().filter(|f| f.factors.len() == 1).count() == 2,
        ),
        claim_det(
            "factor-lists-for-4",
            lists == vec![vec![2, 2], vec![2, -2], vec![-2, -2]],
            json!(lists),
        ),
        claim(
            "every-factorization-verifies",
            trivial
                .iter()
                .chain(nontrivial.iter())
                .all(|f| f.verify(&full, &w)),
        ),
        claim_det(
            "even-pairwise-splittings-of-12",
            class_lists == vec![(2, vec![2, 6])],
            json!(class_lists),
        ),
        claim(
            "odd-prime-has-no-nontrivial",
            enumerate_factorizations(e(7), &full, &w, 2).is_empty(),
        ),
    ]
}

fn lateral_property_definitions(_: &Ctx) -> Vec<Entry> {
    let w = win(12, 36);
    vec![
        check_entry(
            &Relation::Full,
            PropertyId::Divisive,
            &w,
            Verdict::HoldsOnWindow,
        ),
        check_entry(
            &Relation::modn(2),
            PropertyId::Multiplicative,
            &w,
            Verdict::HoldsOnWindow,
        ),
        check_entry(
            &Relation::modn(2),
            PropertyId::AssocPres,
            &w,
            Verdict::HoldsOnWindow,
        ),
        check_entry(
            &sided_left(),
            PropertyId::DivisiveLeft,
            &w,
            Verdict::HoldsOnWindow,
        ),
        check_entry(&sided_left(), PropertyId::DivisiveRight, &w, Verdict::Fails),
        check_entry(
            &sided_right(),
            PropertyId::DivisiveRight,
            &w,
            Verdict::HoldsOnWindow,
        ),
        check_entry(&sided_right(), PropertyId::DivisiveLeft, &w, Verdict::Fails),
    ]
}

fn example_ideal_containment(_: &Ctx) -> Vec<Entry> {
    let w = win(100, 200);
    let r = Relation::IdealContainment;
    vec![
        check_entry(&r, PropertyId::PartialOrder, &w, Verdict::HoldsOnWindow),
        check_entry(&r, PropertyId::MultLeft, &w, Verdict::HoldsOnWindow),
        check_entry(&r, PropertyId::MultRight, &w, Verdict::Fails),
        check_entry(&r, PropertyId::DivisiveRight, &w, Verdict::HoldsOnWindow),
        check_entry(&r, PropertyId::DivisiveLeft, &w, Verdict::Fails),
        claim(
            "containment-examples",
            holds(&r, 8, 4, &w)
                && holds(&r, 8, 2, &w)
                && !holds(&r, 8, 16, &w)
                && !holds(&r, 4, 8, &w),
        ),
        claim(
            "product-escapes-right-factor",
            holds(&r, 8, 4, &w) && !holds(&r, 8, 16, &w),
        ),
        claim(
            "power-chain-left-replacement",
            holds(&r, 64, 8, &w)
                && taufact::domain::divides(4, 64).unwrap()
                && !holds(&r, 4, 8, &w),
        ),
    ]
}

fn example_sign_pairs(_: &Ctx) -> Vec<Entry> {
    let w = win(5, 10);
    let t1 = sided_right();
    let t2 = sided_left();
    let comp = Relation::compose(t1.clone(), t2.clone());
    vec![
        claim_det(
            "composition-pairs",
            pairs(&comp, &w) == vec![(2, 2), (2, -2), (-2, 2), (-2, -2)],
            json!(pairs(&comp, &w)),
        ),
        check_entry(&t1, PropertyId::DivisiveRight, &w, Verdict::HoldsOnWindow),
        check_entry(&t1, PropertyId::DivisiveLeft, &w, Verdict::Fails),
        check_entry(&t2, PropertyId::DivisiveLeft, &w, Verdict::HoldsOnWindow),
        check_entry(&t2, PropertyId::DivisiveRight, &w, Verdict::Fails),
        check_entry(&comp, PropertyId::Symmetric, &w, Verdict::HoldsOnWindow),
        check_entry(&comp, PropertyId::Divisive, &w, Verdict::HoldsOnWindow),
    ]
}

fn reflexivity_laws(t1: Relation, t2: Relation) -> impl Fn(&Ctx) -> Vec<Entry> {
    move |ctx| {
        vec![
            transfer_entry(
                TransferLaw::ReflexiveLeftFactor,
                &t1,
                &t2,
                &ctx.window,
                Verdict::HoldsOnWindow,
            ),
            transfer_entry(
                TransferLaw::ReflexiveRightFactor,
                &t1,
                &t2,
                &ctx.window,
                Verdict::HoldsOnWindow,
            ),
            transfer_entry(
                TransferLaw::ReflexiveBothFactors,
                &t1,
                &t2,
                &ctx.window,
                Verdict::HoldsOnWindow,
            ),
        ]
    }
}

fn sign_partition() -> Relation {
    Relation::partition(vec![
        BlockSpec::Negatives,
        BlockSpec::PositivesExcept([1].into_iter().collect()),
    ])
    .unwrap()
}

fn partition_fine() -> Relation {
    Relation::partition(vec![
        BlockSpec::Negatives,
        BlockSpec::Finite([e(2)].into_iter().collect()),
        BlockSpec::PositivesExcept([1, 2].into_iter().collect()),
    ])
    .unwrap()
}

fn partition_shifted() -> Relation {
    Relation::partition(vec![
        BlockSpec::Negatives,
        BlockSpec::Finite([e(2), e(3)].into_iter().collect()),
        BlockSpec::PositivesExcept([1, 2, 3].into_iter().collect()),
    ])
    .unwrap()
}

fn example_partitions(_: &Ctx) -> Vec<Entry> {
    let w = win(20, 60);
    let t1 = partition_fine();
    let t2 = partition_shifted();
    let comp = Relation::compose(t1.clone(), t2.clone());
    vec![
        check_entry(&t1, PropertyId::Equivalence, &w, Verdict::HoldsOnWindow),
        check_entry(&t2, PropertyId::Equivalence, &w, Verdict::HoldsOnWindow),
        claim("cross-block-pair-in", holds(&comp, 2, 5, &w)),
        claim("reverse-pair-out", !holds(&comp, 5, 2, &w)),
        check_entry(&comp, PropertyId::Symmetric, &w, Verdict::Fails),
        check_entry(&comp, PropertyId::Equivalence, &w, Verdict::Fails),
    ]
}

fn divisive_transfer_full(_: &Ctx) -> Vec<Entry> {
    let w = win(10, 30);
    let t = Relation::Full;
    [
        TransferLaw::ComposeDivisiveLeft,
        TransferLaw::ComposeDivisiveRight,
        TransferLaw::ComposeDivisive,
        TransferLaw::ComposeDivisiveBothOrders,
    ]
    .into_iter()
    .map(|law| transfer_entry(law, &t, &t, &w, Verdict::HoldsOnWindow))
    .collect()
}

fn divisive_transfer_lateral(_: &Ctx) -> Vec<Entry> {
    let w = win(10, 30);
    let t1 = sided_right();
    let t2 = sided_left();
    vec![
        transfer_entry(
            TransferLaw::ComposeDivisiveLeft,
            &t1,
            &t2,
            &w,
            Verdict::HoldsOnWindow,
        ),
        transfer_entry(
            TransferLaw::ComposeDivisiveRight,
            &t1,
            &t2,
            &w,
            Verdict::HoldsOnWindow,
        ),
        transfer_entry(
            TransferLaw::ComposeDivisive,
            &t1,
            &t2,
            &w,
            Verdict::HoldsOnWindow,
        ),
        transfer_entry(
            TransferLaw::ComposeDivisiveBothOrders,
            &t1,
            &t2,
            &w,
            Verdict::NotApplicable,
        ),
    ]
}

fn divisive_transfer_product(_: &Ctx) -> Vec<Entry> {
    let w = win(10, 30);
    let t1 = Relation::product([2, -2, 3, -3, 6, -6]).unwrap();
    let t2 = Relation::Full;
    [
        TransferLaw::ComposeDivisiveLeft,
        TransferLaw::ComposeDivisiveRight,
        TransferLaw::ComposeDivisive,
        TransferLaw::ComposeDivisiveBothOrders,
    ]
    .into_iter()
    .map(|law| transfer_entry(law, &t1, &t2, &w, Verdict::HoldsOnWindow))
    .collect()
}

/// Row/column kinds for the three composition tables.
const TABLE_KINDS: [&str; 3] = ["div", "divL", "divR"];

fn kind_relation(kind: &str) -> Relation {
    match kind {
        "div" => Relation::Full,
        "divL" => sided_left(),
        "divR" => sided_right(),
        _ => unreachable!(),
    }
}

fn kind_property(kind: &str) -> PropertyId {
    match kind {
        "div" => PropertyId::Divisive,
        "divL" => PropertyId::DivisiveLeft,
        "divR" => PropertyId::DivisiveRight,
        _ => unreachable!(),
    }
}

fn table_cell(table: u8, k1: &'static str, k2: &'static str) -> SuiteItem {
    let (conclusion, law) = match table {
        1 => (PropertyId::Divisive, TransferLaw::ComposeDivisive),
        2 => (PropertyId::DivisiveLeft, TransferLaw::ComposeDivisiveLeft),
        3 => (PropertyId::DivisiveRight, TransferLaw::ComposeDivisiveRight),
        _ => unreachable!(),
    };
    let positive = match table {
        1 => (k1 == "div" || k1 == "divR") && (k2 == "div" || k2 == "divL"),
        2 => k2 != "divR",
        3 => k1 != "divL",
        _ => unreachable!(),
    };
    item(
        format!("table-{table}-cell-{k1}-{k2}"),
        "tables-divisive-composition",
        move |_| {
            let w = win(10, 20);
            let t1 = kind_relation(k1);
            let t2 = kind_relation(k2);
            let mut out = vec![
                check_entry(&t1, kind_property(k1), &w, Verdict::HoldsOnWindow),
                check_entry(&t2, kind_property(k2), &w, Verdict::HoldsOnWindow),
            ];
            if positive {
                out.push(transfer_entry(law, &t1, &t2, &w, Verdict::HoldsOnWindow));
            } else {
                let comp = Relation::compose(t1, t2);
                out.push(check_entry(&comp, conclusion, &w, Verdict::Fails));
            }
            out
        },
    )
}

fn search_demonstration(ctx: &Ctx) -> Vec<Entry> {
    let w = win(10, 40);
    match search_counterexample(
        &[],
        PropertyId::DivisiveLeft,
        &RelationSampler::default(),
        400,
        ctx.seed,
        &w,
    ) {
        SearchOutcome::Found {
            trial,
            tau1,
            tau2,
            report,
        } => {
            let comp = Relation::compose(tau1.clone(), tau2.clone());
            vec![
                claim_det(
                    "counterexample-found",
                    true,
                    json!({
                        "trial": trial,
                        "tau1": reldef::relation_to_value(&tau1),
                        "tau2": reldef::relation_to_value(&tau2),
                        "seed": report.seed,
                    }),
                ),
                check_entry(&comp, PropertyId::DivisiveLeft, &w, Verdict::Fails),
            ]
        }
        SearchOutcome::Exhausted { trials } => vec![claim_det(
            "counterexample-found",
            false,
            json!({"exhausted_trials": trials}),
        )],
    }
}

fn pattern_tau1() -> Relation {
    pat(&[(&[3], &[2]), (&[2], &[3]), (&[7], &[5]), (&[5], &[7])])
}

fn pattern_tau2() -> Relation {
    pat(&[
        (&[3], &[3]),
        (&[3], &[7]),
        (&[7], &[3]),
        (&[3], &[3, 7]),
        (&[3, 7], &[3]),
    ])
}

fn example_multiplicative_patterns(_: &Ctx) -> Vec<Entry> {
    let w = win(25, 50);
    let t1 = pattern_tau1();
    let t2 = pattern_tau2();
    let comp = Relation::compose(t1.clone(), t2.clone());
    let flipped = Relation::compose(t2.clone(), t1.clone());
    vec![
        check_entry(&t1, PropertyId::Multiplicative, &w, Verdict::HoldsOnWindow),
        check_entry(&t2, PropertyId::Multiplicative, &w, Verdict::HoldsOnWindow),
        claim(
            "memberships-in",
            holds(&comp, 3, 2, &w)
                && holds(&comp, 3, 5, &w)
                && holds(&comp, 7, 2, &w)
                && holds(&comp, 21, 2, &w),
        ),
        claim(
            "memberships-out",
            !holds(&comp, 3, 10, &w) && !holds(&comp, 5, 2, &w),
        ),
        check_entry(&comp, PropertyId::MultRight, &w, Verdict::Fails),
        claim(
            "flipped-memberships",
            holds(&flipped, 2, 3, &w) && holds(&flipped, 5, 3, &w) && !holds(&flipped, 10, 3, &w),
        ),
        check_entry(&flipped, PropertyId::MultLeft, &w, Verdict::Fails),
    ]
}

fn shared_witness_congruences(_: &Ctx) -> Vec<Entry> {
    let w = win(20, 80);
    let forward = Relation::compose(Relation::modn(4), Relation::modn(2));
    let backward = Relation::compose(Relation::modn(2), Relation::modn(4));
    vec![
        check_entry(&forward, PropertyId::Property1, &w, Verdict::HoldsOnWindow),
        check_entry(&backward, PropertyId::Property1, &w, Verdict::Fails),
        check_entry(&backward, PropertyId::Property2, &w, Verdict::HoldsOnWindow),
        check_entry(&forward, PropertyId::Property2, &w, Verdict::Fails),
        check_entry(
            &Relation::modn(4),
            PropertyId::Property1,
            &w,
            Verdict::NotApplicable,
        ),
    ]
}

fn multiplicative_composition_left(_: &Ctx) -> Vec<Entry> {
    let w = win(20, 80);
    let mut out: Vec<Entry> = [(4, 2), (6, 2), (2, 2)]
        .into_iter()
        .map(|(n, m)| {
            transfer_entry(
                TransferLaw::ComposeMultiplicativeLeft,
                &Relation::modn(n),
                &Relation::modn(m),
                &w,
                Verdict::HoldsOnWindow,
            )
        })
        .collect();
    out.push(transfer_entry(
        TransferLaw::ComposeMultiplicativeLeft,
        &Relation::modn(3),
        &Relation::modn(2),
        &w,
        Verdict::NotApplicable,
    ));
    out
}

fn multiplicative_composition_right(_: &Ctx) -> Vec<Entry> {
    let w = win(20, 80);
    let mut out: Vec<Entry> = [(2, 4), (2, 6), (2, 2)]
        .into_iter()
        .map(|(n, m)| {
            transfer_entry(
                TransferLaw::ComposeMultiplicativeRight,
                &Relation::modn(n),
                &Relation::modn(m),
                &w,
                Verdict::HoldsOnWindow,
            )
        })
        .collect();
    out.push(transfer_entry(
        TransferLaw::ComposeMultiplicativeRight,
        &Relation::modn(2),
        &Relation::modn(3),
        &w,
        Verdict::NotApplicable,
    ));
    out
}

fn square_properties_congruence(_: &Ctx) -> Vec<Entry> {
    let w = win(20, 80);
    let t = Relation::modn(4);
    [
        TransferLaw::SquareReflexive,
        TransferLaw::SquareSymmetric,
        TransferLaw::SquareTransitive,
        TransferLaw::SquareEquivalence,
    ]
    .into_iter()
    .map(|law| transfer_entry(law, &t, &t, &w, Verdict::HoldsOnWindow))
    .collect()
}

fn square_properties_order(_: &Ctx) -> Vec<Entry> {
    let w = win(20, 40);
    let t = Relation::IdealContainment;
    vec![
        transfer_entry(
            TransferLaw::SquareTransitive,
            &t,
            &t,
            &w,
            Verdict::HoldsOnWindow,
        ),
        transfer_entry(
            TransferLaw::SquarePartialOrder,
            &t,
            &t,
            &w,
            Verdict::HoldsOnWindow,
        ),
    ]
}

fn square_properties_symmetric_pair(_: &Ctx) -> Vec<Entry> {
    let w = win(10, 20);
    let t = ext(&[(2, 3), (3, 2)]);
    vec![
        transfer_entry(
            TransferLaw::SquareSymmetric,
            &t,
            &t,
            &w,
            Verdict::HoldsOnWindow,
        ),
        transfer_entry(
            TransferLaw::SquareTransitive,
            &t,
            &t,
            &w,
            Verdict::NotApplicable,
        ),
    ]
}

fn subset_transitivity_laws(t1: Relation, t2: Relation, w: Window) -> impl Fn(&Ctx) -> Vec<Entry> {
    move |_| {
        [
            TransferLaw::SubsetTransitiveContainment,
            TransferLaw::SubsetTransitiveCompose,
            TransferLaw::SubsetTransitiveComposeFlipped,
        ]
        .into_iter()
        .map(|law| transfer_entry(law, &t1, &t2, &w, Verdict::HoldsOnWindow))
        .collect()
    }
}

fn subset_equivalence_sign_blocks(_: &Ctx) -> Vec<Entry> {
    let w = win(20, 60);
    vec![transfer_entry(
        TransferLaw::SubsetEquivalence,
        &sign_partition(),
        &Relation::Full,
        &w,
        Verdict::HoldsOnWindow,
    )]
}

fn subset_equivalence_congruence(_: &Ctx) -> Vec<Entry> {
    let w = win(20, 60);
    vec![
        transfer_entry(
            TransferLaw::SubsetEquivalence,
            &Relation::modn(4),
            &Relation::modn(2),
            &w,
            Verdict::HoldsOnWindow,
        ),
        transfer_entry(
            TransferLaw::SubsetEquivalence,
            &Relation::modn(6),
            &Relation::modn(2),
            &w,
            Verdict::HoldsOnWindow,
        ),
    ]
}

fn subset_partial_order(_: &Ctx) -> Vec<Entry> {
    let w = win(20, 60);
    let id = Relation::identity_on(SetSpec::All);
    let ideal = Relation::IdealContainment;
    vec![
        transfer_entry(
            TransferLaw::SubsetPartialOrder,
            &id,
            &ideal,
            &w,
            Verdict::HoldsOnWindow,
        ),
        transfer_entry(
            TransferLaw::SubsetPartialOrder,
            &ideal,
            &ideal,
            &w,
            Verdict::HoldsOnWindow,
        ),
        transfer_entry(
            TransferLaw::SubsetPartialOrder,
            &id,
            &id,
            &w,
            Verdict::HoldsOnWindow,
        ),
    ]
}

fn subset_multiplicative_pattern(_: &Ctx) -> Vec<Entry> {
    let w = win(12, 24);
    let t1 = pat(&[(&[2], &[2])]);
    let t2 = Relation::union(t1.clone(), pat(&[(&[3], &[2])]));
    let comp = Relation::compose(t1.clone(), t2.clone());
    vec![
        claim("containment", subset_of(&t1, &t2, &w)),
        check_entry(&t1, PropertyId::Multiplicative, &w, Verdict::HoldsOnWindow),
        check_entry(&t2, PropertyId::MultRight, &w, Verdict::HoldsOnWindow),
        check_entry(&t2, PropertyId::MultLeft, &w, Verdict::Fails),
        claim("composition-equals-extension", same_pairs(&comp, &t2, &w)),
        check_entry(&comp, PropertyId::MultLeft, &w, Verdict::Fails),
    ]
}

fn subset_multiplicative_chain(_: &Ctx) -> Vec<Entry> {
    let w = win(12, 24);
    let t1 = ext(&[(2, 2)]);
    let t2 = ext(&[(2, 2), (2, 4), (2, 8), (2, 16)]);
    let comp = Relation::compose(t1.clone(), t2.clone());
    vec![
        claim("containment", subset_of(&t1, &t2, &w)),
        check_entry(&t2, PropertyId::MultRight, &w, Verdict::HoldsOnWindow),
        claim("composition-collapses", same_pairs(&comp, &t1, &w)),
        check_entry(&comp, PropertyId::MultRight, &w, Verdict::Fails),
    ]
}

fn congruence_profile(ctx: &Ctx) -> Vec<Entry> {
    let w = &ctx.window;
    vec![
        check_entry(
            &Relation::modn(2),
            PropertyId::AssocPres,
            w,
            Verdict::HoldsOnWindow,
        ),
        check_entry(&Relation::modn(3), PropertyId::AssocPres, w, Verdict::Fails),
        check_entry(
            &Relation::modn(2),
            PropertyId::Multiplicative,
            w,
            Verdict::HoldsOnWindow,
        ),
        check_entry(
            &Relation::modn(3),
            PropertyId::Multiplicative,
            w,
            Verdict::Fails,
        ),
        check_entry(
            &Relation::modn(5),
            PropertyId::Multiplicative,
            w,
            Verdict::Fails,
        ),
        check_entry(&Relation::modn(2), PropertyId::Divisive, w, Verdict::Fails),
        check_entry(&Relation::modn(3), PropertyId::Divisive, w, Verdict::Fails),
        check_entry(
            &Relation::modn(2),
            PropertyId::Equivalence,
            w,
            Verdict::HoldsOnWindow,
        ),
        check_entry(
            &Relation::modn(5),
            PropertyId::Equivalence,
            w,
            Verdict::HoldsOnWindow,
        ),
        check_entry(
            &Relation::modn(12),
            PropertyId::Equivalence,
            w,
            Verdict::HoldsOnWindow,
        ),
    ]
}

fn congruence_gcd_composition(ctx: &Ctx) -> Vec<Entry> {
    let w = &ctx.window;
    let mut out = Vec::new();
    for (n, m) in [(4u64, 6u64), (6, 10), (12, 18), (5, 7), (9, 12), (20, 15)] {
        let comp = Relation::compose(Relation::modn(n as i64), Relation::modn(m as i64));
        let expected = Relation::modn(gcd(n, m) as i64);
        out.push(claim(
            &format!("gcd-{n}-{m}"),
            same_pairs(&comp, &expected, w),
        ));
    }
    out.push(claim(
        "congruence-composition-is-exact",
        Relation::compose(Relation::modn(4), Relation::modn(6)).decision_is_exact(),
    ));
    out
}

fn corollary_divides(ctx: &Ctx) -> Vec<Entry> {
    let w = &ctx.window;
    let mut out = Vec::new();
    for (n, m) in [(3i64, 6i64), (2, 8), (5, 15)] {
        let tn = Relation::modn(n);
        let tm = Relation::modn(m);
        let comp = Relation::compose(tm.clone(), tn.clone());
        out.push(claim(
            &format!("containment-{n}-{m}"),
            subset_of(&tm, &tn, w),
        ));
        out.push(claim(
            &format!("absorption-{n}-{m}"),
            same_pairs(&comp, &tn, w),
        ));
        out.push(claim(
            &format!("lcm-containment-{n}-{m}"),
            subset_of(&tm, &comp, w),
        ));
    }
    out
}

fn congruence_degenerate(_: &Ctx) -> Vec<Entry> {
    let w = win(15, 30);
    vec![
        claim(
            "zero-is-identity",
            same_pairs(&Relation::modn(0), &Relation::identity_on(SetSpec::All), &w),
        ),
        claim(
            "one-is-full",
            same_pairs(&Relation::modn(1), &Relation::Full, &w),
        ),
        claim(
            "negative-modulus",
            same_pairs(&Relation::modn(-4), &Relation::modn(4), &w),
        ),
        claim(
            "zero-absorbs",
            same_pairs(
                &Relation::compose(Relation::modn(3), Relation::modn(0)),
                &Relation::modn(3),
                &w,
            ),
        ),
        claim(
            "one-dominates",
            same_pairs(
                &Relation::compose(Relation::modn(3), Relation::modn(1)),
                &Relation::modn(1),
                &w,
            ),
        ),
    ]
}

fn derived_divisibility_basics(_: &Ctx) -> Vec<Entry> {
    let w = win(30, 30);
    let m2 = Relation::modn(2);
    let full = Relation::Full;
    let d2 = tau_divides_relation(&m2, &w);
    vec![
        claim("even-split-admits-factor", tau_divides(e(2), e(8), &m2, &w)),
        claim("parity-blocks-factor", !tau_divides(e(2), e(6), &m2, &w)),
        claim(
            "associate-target-trivial",
            tau_divides(e(6), e(-6), &m2, &w),
        ),
        claim(
            "unrestricted-matches-divisibility",
            tau_divides(e(2), e(8), &full, &w)
                && tau_divides(e(-2), e(8), &full, &w)
                && !tau_divides(e(3), e(8), &full, &w),
        ),
        check_entry(&d2, PropertyId::Reflexive, &w, Verdict::HoldsOnWindow),
        check_entry(&d2, PropertyId::Antisymmetric, &w, Verdict::HoldsOnWindow),
    ]
}

fn divisibility_transfer(_: &Ctx) -> Vec<Entry> {
    let w = win(20, 40);
    let instances: Vec<(&str, Relation, Relation)> = vec![
        ("congruence-full", Relation::modn(2), Relation::Full),
        (
            "containment-full",
            Relation::IdealContainment,
            Relation::Full,
        ),
        ("congruence-self", Relation::modn(2), Relation::modn(2)),
    ];
    let mut out = Vec::new();
    for (label, t1, t2) in instances {
        let id_coim = Relation::identity_on(SetSpec::CoimageOf(Box::new(t1.clone())));
        out.push(claim(
            &format!("identity-premise-{label}"),
            subset_of(&id_coim, &t2, &w),
        ));
        let comp = Relation::compose(t1.clone(), t2.clone());
        let mut promoted = true;
        let mut checked = 0u64;
        for a in w.universe() {
            for b in w.universe() {
                if tau_divides(a, b, &t1, &w) {
                    checked += 1;
                    if !tau_divides(a, b, &comp, &w) {
                        promoted = false;
                    }
                }
            }
        }
        out.push(claim_det(
            &format!("divisibility-promotes-{label}"),
            promoted,
            json!({"pairs_checked": checked}),
        ));
    }
    out
}

fn derived_divisibility_square(_: &Ctx) -> Vec<Entry> {
    let w = win(30, 30);
    let dfull = tau_divides_relation(&Relation::Full, &w);
    let ideal = Relation::IdealContainment;
    let ideal_sq = Relation::compose(ideal.clone(), ideal.clone());
    let d_ideal = tau_divides_relation(&ideal, &w);
    let d_ideal_sq = tau_divides_relation(&ideal_sq, &w);
    let m4 = Relation::modn(4);
    let m4_sq = Relation::compose(m4.clone(), m4.clone());
    let d_m4 = tau_divides_relation(&m4, &w);
    let d_m4_sq = tau_divides_relation(&m4_sq, &w);
    vec![
        claim(
            "divisive-square-identity",
            same_pairs(&dfull, &Relation::compose(dfull.clone(), dfull.clone()), &w),
        ),
        claim(
            "transitive-square-containment",
            subset_of(
                &d_ideal_sq,
                &Relation::compose(d_ideal.clone(), d_ideal.clone()),
                &w,
            ),
        ),
        claim(
            "reflexive-transitive-chain-lower",
            subset_of(&d_m4, &d_m4_sq, &w),
        ),
        claim(
            "reflexive-transitive-chain-upper",
            subset_of(&d_m4_sq, &Relation::compose(d_m4.clone(), d_m4.clone()), &w),
        ),
    ]
}

fn ufd_window_failure(_: &Ctx) -> Vec<Entry> {
    let w = win(50, 100);
    let inner = ext(&[(4, 4), (6, 6), (9, 9)]);
    let comp = Relation::compose(Relation::Full, inner.clone());
    let comp_classes: BTreeSet<_> = enumerate_factorizations(e(36), &comp, &w, 2)
        .iter()
        .map(|f| f.class().abs_multiset.clone())
        .collect();
    let inner_classes: BTreeSet<_> = enumerate_factorizations(e(36), &inner, &w, 2)
        .iter()
        .map(|f| f.class().abs_multiset.clone())
        .collect();
    let diag = ufd_diagnostic(&comp, &w);
    let atom_shy = ufd_diagnostic(&ext(&[(6, 6), (2, 3), (3, 2)]), &w);
    vec![
        claim_det(
            "two-classes-under-composition",
            comp_classes == BTreeSet::from([vec![4, 9], vec![6, 6]]),
            json!(comp_classes),
        ),
        claim_det(
            "one-class-under-inner",
            inner_classes == BTreeSet::from([vec![6, 6]]),
            json!(inner_classes),
        ),
        claim_det(
            "uniqueness-failures-flagged",
            diag.ufd_failures == vec![e(36), e(-36)],
            json!(diag
                .ufd_failures
                .iter()
                .map(|x| x.get())
                .collect::<Vec<_>>()),
        ),
        claim_det(
            "atomicity-failures-flagged",
            atom_shy.atomicity_failures == vec![e(36), e(-36)],
            json!(atom_shy
                .atomicity_failures
                .iter()
                .map(|x| x.get())
                .collect::<Vec<_>>()),
        ),
    ]
}

pub fn items() -> Vec<SuiteItem> {
    let mut v = vec![
        item(
            "composition-definition",
            "definition-composition",
            composition_definition,
        ),
        item(
            "composition-projections",
            "composition-projections",
            composition_projections,
        ),
        item(
            "inverse-identity-laws",
            "inverse-and-identity",
            inverse_identity_laws,
        ),
        item(
            "factorization-definition",
            "definition-tau-factorization",
            factorization_definition,
        ),
        item(
            "lateral-property-definitions",
            "definition-lateral-properties",
            lateral_property_definitions,
        ),
        item(
            "example-ideal-containment",
            "example-ideal-containment",
            example_ideal_containment,
        ),
        item(
            "example-sign-pairs",
            "example-sign-pair-composition",
            example_sign_pairs,
        ),
        item(
            "reflexivity-congruences",
            "proposition-reflexivity",
            reflexivity_laws(Relation::modn(2), Relation::modn(3)),
        ),
        item(
            "reflexivity-nested-congruences",
            "proposition-reflexivity",
            reflexivity_laws(Relation::modn(4), Relation::modn(6)),
        ),
        item(
            "reflexivity-mixed",
            "proposition-reflexivity",
            reflexivity_laws(Relation::Full, Relation::modn(5)),
        ),
        item(
            "example-partitions",
            "example-partition-composition",
            example_partitions,
        ),
        item(
            "divisive-transfer-full",
            "proposition-divisive-transfer",
            divisive_transfer_full,
        ),
        item(
            "divisive-transfer-lateral",
            "proposition-divisive-transfer",
            divisive_transfer_lateral,
        ),
        item(
            "divisive-transfer-product",
            "proposition-divisive-transfer",
            divisive_transfer_product,
        ),
    ];
    for table in [1u8, 2, 3] {
        for k1 in TABLE_KINDS {
            for k2 in TABLE_KINDS {
                v.push(table_cell(table, k1, k2));
            }
        }
    }
    v.extend([
        item(
            "search-demonstration",
            "tables-divisive-composition",
            search_demonstration,
        ),
        item(
            "example-multiplicative-patterns",
            "example-pattern-composition",
            example_multiplicative_patterns,
        ),
        item(
            "shared-witness-congruences",
            "properties-shared-witness",
            shared_witness_congruences,
        ),
        item(
            "multiplicative-composition-left",
            "proposition-multiplicative-composition",
            multiplicative_composition_left,
        ),
        item(
            "multiplicative-composition-right",
            "proposition-multiplicative-composition",
            multiplicative_composition_right,
        ),
        item(
            "square-properties-congruence",
            "proposition-square-properties",
            square_properties_congruence,
        ),
        item(
            "square-properties-order",
            "proposition-square-properties",
            square_properties_order,
        ),
        item(
            "square-properties-symmetric-pair",
            "proposition-square-properties",
            square_properties_symmetric_pair,
        ),
        item(
            "subset-transitivity-identity",
            "proposition-subset-transitivity",
            subset_transitivity_laws(
                Relation::identity_on(SetSpec::All),
                Relation::IdealContainment,
                win(20, 60),
            ),
        ),
        item(
            "subset-transitivity-congruence",
            "proposition-subset-transitivity",
            subset_transitivity_laws(Relation::modn(4), Relation::modn(2), win(20, 60)),
        ),
        item(
            "subset-transitivity-empty",
            "proposition-subset-transitivity",
            subset_transitivity_laws(ext(&[]), Relation::modn(2), win(20, 60)),
        ),
        item(
            "subset-equivalence-sign-blocks",
            "proposition-subset-equivalence-order",
            subset_equivalence_sign_blocks,
        ),
        item(
            "subset-equivalence-congruence",
            "proposition-subset-equivalence-order",
            subset_equivalence_congruence,
        ),
        item(
            "subset-partial-order",
            "proposition-subset-equivalence-order",
            subset_partial_order,
        ),
        item(
            "subset-multiplicative-pattern",
            "example-subset-multiplicative-failure",
            subset_multiplicative_pattern,
        ),
        item(
            "subset-multiplicative-chain",
            "example-subset-multiplicative-failure",
            subset_multiplicative_chain,
        ),
        item(
            "congruence-profile",
            "congruence-family-profile",
            congruence_profile,
        ),
        item(
            "congruence-gcd-composition",
            "congruence-composition-gcd",
            congruence_gcd_composition,
        ),
        item(
            "corollary-divides",
            "congruence-divisor-corollary",
            corollary_divides,
        ),
        item(
            "congruence-degenerate",
            "congruence-degenerate-moduli",
            congruence_degenerate,
        ),
        item(
            "derived-divisibility-basics",
            "derived-divisibility-relation",
            derived_divisibility_basics,
        ),
        item(
            "divisibility-transfer",
            "proposition-divisibility-transfer",
            divisibility_transfer,
        ),
        item(
            "derived-divisibility-square",
            "derived-divisibility-laws",
            derived_divisibility_square,
        ),
        item(
            "ufd-window-failure",
            "composed-ufd-failure",
            ufd_window_failure,
        ),
    ]);
    v
}

/// Anchor-to-item mapping actually realized by `items()`.
pub fn manifest() -> Vec<(&'static str, Vec<String>)> {
    let all = items();
    ANCHORS
        .iter()
        .map(|&a| {
            (
                a,
                all.iter()
                    .filter(|it| it.anchor == a)
                    .map(|it| it.id.clone())
                    .collect(),
            )
        })
        .collect()
}

pub struct SuiteRun {
    pub total: usize,
    pub failed: Vec<String>,
    pub summary: Value,
}

pub fn run_suite(out_dir: &Path, window: &Window, seed: u64, jobs: usize) -> io::Result<SuiteRun> {
    let ctx = Ctx {
        window: *window,
        seed,
    };
    let all = items();
    let results: Mutex<Vec<Option<ItemOutcome>>> = Mutex::new(vec![None; all.len()]);
    let next = AtomicUsize::new(0);
    let workers = jobs.max(1).min(all.len());
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= all.len() {
                    break;
                }
                let outcome = all[i].execute(&ctx);
                results.lock().unwrap()[i] = Some(outcome);
            });
        }
    });
    let results = results.into_inner().unwrap();

    fs::create_dir_all(out_dir)?;
    let mut failed = Vec::new();
    let mut listing = Vec::new();
    for (it, slot) in all.iter().zip(results) {
        let (pass, entries) = slot.expect("every item ran");
        let status = if pass { "pass" } else { "fail" };
        if !pass {
            failed.push(it.id.clone());
        }
        let doc = json!({
            "item": it.id,
            "provenance": it.anchor,
            "status": status,
            "entries": entries,
        });
        fs::write(
            out_dir.join(format!("{}.json", it.id)),
            report::canonical(&doc),
        )?;
        listing.push(json!({"id": it.id, "provenance": it.anchor, "status": status}));
    }
    let summary = json!({
        "item_count": all.len(),
        "items": listing,
        "seed": seed,
        "status": if failed.is_empty() { "pass" } else { "fail" },
        "window": serde_json::to_value(window).unwrap(),
    });
    fs::write(out_dir.join("summary.json"), report::canonical(&summary))?;
    Ok(SuiteRun {
        total: all.len(),
        failed,
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn every_anchor_is_covered() {
        for (anchor, ids) in manifest() {
            assert!(!ids.is_empty(), "anchor {anchor} has no suite item");
        }
    }

    #[test]
    fn every_item_uses_a_known_anchor() {
        let known: HashSet<&str> = ANCHORS.into_iter().collect();
        for it in items() {
            assert!(
                known.contains(it.anchor),
                "item {} has unknown anchor {}",
                it.id,
                it.anchor
            );
        }
    }

    #[test]
    fn item_ids_are_unique() {
        let all = items();
        let ids: HashSet<&str> = all.iter().map(|it| it.id.as_str()).collect();
        assert_eq!(ids.len(), all.len());
    }

    #[test]
    fn table_cells_are_all_present() {
        let all = items();
        let cells = all.iter().filter(|it| it.id.starts_with("table-")).count();
        assert_eq!(cells, 27);
    }
}
