//! The acceptance gate: one test per criterion, each printing a PASS line
//! once its assertions have all held.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use taufact::domain::{gcd, lcm, Elem, Window};
use taufact::factor::{
    enumerate_factorizations, is_tau_prime, tau_divides, tau_divides_relation, ufd_diagnostic,
};
use taufact::props::{check, check_transfer, PropertyId, TransferLaw};
use taufact::relation::{BlockSpec, PrimePattern, Relation, SetSpec};
use taufact_cli::suite;

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

fn same(x: &Relation, y: &Relation, w: &Window) -> bool {
    x.enumerate(w) == y.enumerate(w)
}

fn subset(sub: &Relation, sup: &Relation, w: &Window) -> bool {
    sub.enumerate(w)
        .into_iter()
        .all(|(a, b)| sup.holds(a, b, w))
}

#[test]
fn criterion_1_gcd_grid() {
    let started = Instant::now();
    for n in 2u64..=30 {
        for m in 2u64..=30 {
            let l = lcm(n, m);
            let w = win(200, (3 * l).max(200));
            let comp = Relation::compose(Relation::modn(n as i64), Relation::modn(m as i64));
            let expect = Relation::modn(gcd(n, m) as i64);
            assert!(
                same(&comp, &expect, &w),
                "composition of mod {n} and mod {m} missed mod {}",
                gcd(n, m)
            );
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 30, "grid took {elapsed:?}");
    println!("[acceptance] criterion 1 (gcd grid): PASS ({elapsed:?})");
}

#[test]
fn criterion_2_divisor_corollary() {
    let w = win(100, 600);
    let mut pairs = Vec::new();
    for n in 2i64..=10 {
        for k in 2i64..=4 {
            pairs.push((n, n * k));
        }
    }
    pairs.truncate(20);
    assert_eq!(pairs.len(), 20);
    for (n, m) in pairs {
        let tn = Relation::modn(n);
        let tm = Relation::modn(m);
        let comp = Relation::compose(tm.clone(), tn.clone());
        assert!(subset(&tm, &tn, &w), "mod {m} inside mod {n}");
        assert!(same(&comp, &tn, &w), "absorption for {n} | {m}");
        let l = lcm(n as u64, m as u64) as i64;
        assert!(
            subset(&Relation::modn(l), &comp, &w),
            "lcm inside composition"
        );
    }
    println!("[acceptance] criterion 2 (divisor corollary): PASS");
}

#[test]
fn criterion_3_counterexample_replays() {
    // Partition pair: same-block relations whose composition is asymmetric.
    let w = win(20, 60);
    let t1 = Relation::partition(vec![
        BlockSpec::Negatives,
        BlockSpec::Finite([e(2)].into_iter().collect()),
        BlockSpec::PositivesExcept([1, 2].into_iter().collect()),
    ])
    .unwrap();
    let t2 = Relation::partition(vec![
        BlockSpec::Negatives,
        BlockSpec::Finite([e(2), e(3)].into_iter().collect()),
        BlockSpec::PositivesExcept([1, 2, 3].into_iter().collect()),
    ])
    .unwrap();
    let comp = Relation::compose(t1, t2);
    assert!(comp.holds(e(2), e(5), &w));
    assert!(!comp.holds(e(5), e(2), &w));

    // Pattern pair: membership profile of the composed prime-support relation.
    let wp = win(25, 50);
    let p1 = pat(&[(&[3], &[2]), (&[2], &[3]), (&[7], &[5]), (&[5], &[7])]);
    let p2 = pat(&[
        (&[3], &[3]),
        (&[3], &[7]),
        (&[7], &[3]),
        (&[3], &[3, 7]),
        (&[3, 7], &[3]),
    ]);
    let pcomp = Relation::compose(p1, p2);
    assert!(pcomp.holds(e(3), e(2), &wp));
    assert!(pcomp.holds(e(3), e(5), &wp));
    assert!(!pcomp.holds(e(3), e(10), &wp));

    // Ideal containment: right-multiplication escapes, and replacing the
    // left element by a divisor escapes, at the recorded tuples.
    let wi = win(100, 200);
    let ideal = Relation::IdealContainment;
    assert!(ideal.holds(e(8), e(4), &wi) && !ideal.holds(e(8), e(16), &wi));
    assert_eq!(
        check(&ideal, PropertyId::MultRight, &wi).verdict,
        taufact::props::Verdict::Fails
    );
    assert!(ideal.holds(e(64), e(8), &wi) && !ideal.holds(e(4), e(8), &wi));
    assert_eq!(
        check(&ideal, PropertyId::DivisiveLeft, &wi).verdict,
        taufact::props::Verdict::Fails
    );

    // Sign pairs compose to exactly the four sign combinations.
    let ws = win(5, 10);
    let scomp = Relation::compose(ext(&[(2, 2), (2, -2)]), ext(&[(2, 2), (-2, 2)]));
    let got: Vec<(i64, i64)> = scomp
        .enumerate(&ws)
        .into_iter()
        .map(|(a, b)| (a.get(), b.get()))
        .collect();
    assert_eq!(got, vec![(2, 2), (2, -2), (-2, 2), (-2, -2)]);
    println!("[acceptance] criterion 3 (counterexample replays): PASS");
}

#[test]
fn criterion_4_transfer_laws() {
    let w = win(30, 120);
    let m2 = Relation::modn(2);
    let m3 = Relation::modn(3);
    let m4 = Relation::modn(4);
    let m5 = Relation::modn(5);
    let m6 = Relation::modn(6);
    let full = Relation::Full;
    let ideal = Relation::IdealContainment;
    let id_all = Relation::identity_on(SetSpec::All);
    let sided_l = ext(&[(2, 2), (-2, 2)]);
    let sided_r = ext(&[(2, 2), (2, -2)]);
    let product = Relation::product([2, -2, 3, -3, 6, -6]).unwrap();
    let sym_pair = ext(&[(2, 3), (3, 2)]);
    let sign_blocks = Relation::partition(vec![
        BlockSpec::Negatives,
        BlockSpec::PositivesExcept([1].into_iter().collect()),
    ])
    .unwrap();

    let reflexive = vec![
        (m2.clone(), m3.clone()),
        (m4.clone(), m6.clone()),
        (full.clone(), m5.clone()),
    ];
    let divisive = vec![
        (full.clone(), full.clone()),
        (sided_r.clone(), sided_l.clone()),
        (product.clone(), full.clone()),
    ];
    let mult_left = vec![
        (m4.clone(), m2.clone()),
        (m6.clone(), m2.clone()),
        (m2.clone(), m2.clone()),
    ];
    let mult_right = vec![
        (m2.clone(), m4.clone()),
        (m2.clone(), m6.clone()),
        (m2.clone(), m2.clone()),
    ];
    let squares_equiv = vec![
        (m4.clone(), m4.clone()),
        (m5.clone(), m5.clone()),
        (m6.clone(), m6.clone()),
    ];
    let squares_sym = vec![
        (m4.clone(), m4.clone()),
        (m5.clone(), m5.clone()),
        (sym_pair.clone(), sym_pair.clone()),
    ];
    let squares_ord = vec![
        (ideal.clone(), ideal.clone()),
        (id_all.clone(), id_all.clone()),
        (m4.clone(), m4.clone()),
    ];
    let subset_trans = vec![
        (id_all.clone(), ideal.clone()),
        (m4.clone(), m2.clone()),
        (ext(&[]), m2.clone()),
    ];
    let subset_equiv = vec![
        (sign_blocks.clone(), full.clone()),
        (m4.clone(), m2.clone()),
        (m6.clone(), m2.clone()),
    ];
    let subset_order = vec![
        (id_all.clone(), ideal.clone()),
        (ideal.clone(), ideal.clone()),
        (id_all.clone(), id_all.clone()),
    ];

    let plan: Vec<(TransferLaw, &Vec<(Relation, Relation)>)> = vec![
        (TransferLaw::ReflexiveLeftFactor, &reflexive),
        (TransferLaw::ReflexiveRightFactor, &reflexive),
        (TransferLaw::ReflexiveBothFactors, &reflexive),
        (TransferLaw::ComposeDivisiveLeft, &divisive),
        (TransferLaw::ComposeDivisiveRight, &divisive),
        (TransferLaw::ComposeDivisive, &divisive),
        (TransferLaw::ComposeDivisiveBothOrders, &divisive),
        (TransferLaw::ComposeMultiplicativeLeft, &mult_left),
        (TransferLaw::ComposeMultiplicativeRight, &mult_right),
        (TransferLaw::SquareReflexive, &squares_equiv),
        (TransferLaw::SquareSymmetric, &squares_sym),
        (TransferLaw::SquareTransitive, &squares_ord),
        (TransferLaw::SquareEquivalence, &squares_equiv),
        (TransferLaw::SquarePartialOrder, &squares_ord),
        (TransferLaw::SubsetTransitiveContainment, &subset_trans),
        (TransferLaw::SubsetTransitiveCompose, &subset_trans),
        (TransferLaw::SubsetTransitiveComposeFlipped, &subset_trans),
        (TransferLaw::SubsetEquivalence, &subset_equiv),
        (TransferLaw::SubsetPartialOrder, &subset_order),
    ];
    let mut held = 0usize;
    let mut not_applicable = 0usize;
    for (law, instances) in plan {
        assert!(instances.len() >= 3);
        for (t1, t2) in instances {
            let rep = check_transfer(law, t1, t2, &w);
            assert!(
                !rep.law_violation,
                "{} violated on tau1={t1}, tau2={t2}: {:?}",
                law.as_str(),
                rep.counterexample
            );
            if rep.holds() {
                held += 1;
            } else {
                not_applicable += 1;
            }
        }
    }
    assert!(held >= 40, "only {held} law instances concluded");
    println!(
        "[acceptance] criterion 4 (transfer laws): PASS ({held} held, {not_applicable} not applicable)"
    );
}

#[test]
fn criterion_5_tables() {
    let ctx = suite::Ctx {
        window: win(50, 600),
        seed: 0,
    };
    let cells: Vec<_> = suite::items()
        .into_iter()
        .filter(|it| it.id.starts_with("table-"))
        .collect();
    assert_eq!(cells.len(), 27);
    for cell in cells {
        let (pass, entries) = cell.execute(&ctx);
        assert!(pass, "cell {} failed: {entries:?}", cell.id);
    }
    println!("[acceptance] criterion 5 (composition tables): PASS");
}

#[test]
fn criterion_6_ufd_diagnostic() {
    let w = win(50, 100);
    let inner = ext(&[(4, 4), (6, 6), (9, 9)]);
    let comp = Relation::compose(Relation::Full, inner.clone());
    let diag = ufd_diagnostic(&comp, &w);
    let entry36 = diag
        .entries
        .iter()
        .find(|en| en.element == e(36))
        .expect("36 inside the window");
    assert_eq!(entry36.class_count, 2);
    let classes: BTreeSet<Vec<u64>> = entry36
        .classes
        .iter()
        .map(|c| c.abs_multiset.clone())
        .collect();
    assert_eq!(classes, BTreeSet::from([vec![4, 9], vec![6, 6]]));
    assert_eq!(diag.ufd_failures, vec![e(36), e(-36)]);

    let inner_diag = ufd_diagnostic(&inner, &w);
    let inner36 = inner_diag
        .entries
        .iter()
        .find(|en| en.element == e(36))
        .unwrap();
    assert_eq!(inner36.class_count, 1);
    assert!(inner_diag.ufd_failures.is_empty());

    let full_diag = ufd_diagnostic(&Relation::Full, &win(100, 100));
    assert!(full_diag.entries.iter().all(|en| en.class_count == 1));
    assert!(full_diag.ufd_failures.is_empty());
    println!("[acceptance] criterion 6 (ufd diagnostic): PASS");
}

#[test]
fn criterion_7_derived_divisibility() {
    let w = win(30, 60);
    // Divisive relations: derived divisibility equals its own square.
    for tau in [
        Relation::Full,
        Relation::product([2, -2, 3, -3, 6, -6]).unwrap(),
    ] {
        let d = tau_divides_relation(&tau, &w);
        let dd = Relation::compose(d.clone(), d.clone());
        assert!(same(&d, &dd, &w), "square mismatch for {tau}");
    }
    // Transitive relations: divisibility under the square sits inside the
    // square of divisibility.
    for tau in [Relation::IdealContainment, Relation::modn(4)] {
        let sq = Relation::power(&tau, 2).unwrap();
        let d_sq = tau_divides_relation(&sq, &w);
        let d = tau_divides_relation(&tau, &w);
        let dd = Relation::compose(d.clone(), d.clone());
        assert!(subset(&d_sq, &dd, &w), "containment mismatch for {tau}");
    }
    // Reflexive and transitive: the full chain.
    for tau in [
        Relation::IdealContainment,
        Relation::modn(4),
        Relation::modn(2),
    ] {
        let sq = Relation::power(&tau, 2).unwrap();
        let d = tau_divides_relation(&tau, &w);
        let d_sq = tau_divides_relation(&sq, &w);
        let dd = Relation::compose(d.clone(), d.clone());
        assert!(subset(&d, &d_sq, &w), "lower chain for {tau}");
        assert!(subset(&d_sq, &dd, &w), "upper chain for {tau}");
    }
    // Promotion through composition when the second factor fixes the
    // coimage of the first.
    for (t1, t2) in [
        (Relation::modn(2), Relation::Full),
        (Relation::IdealContainment, Relation::Full),
        (Relation::modn(2), Relation::modn(2)),
    ] {
        let id_coim = Relation::identity_on(SetSpec::CoimageOf(Box::new(t1.clone())));
        assert!(subset(&id_coim, &t2, &w));
        let comp = Relation::compose(t1.clone(), t2.clone());
        for a in w.universe() {
            for b in w.universe() {
                if tau_divides(a, b, &t1, &w) {
                    assert!(
                        tau_divides(a, b, &comp, &w),
                        "promotion failed at ({a}, {b}) for tau1={t1}"
                    );
                }
            }
        }
    }
    // A transitive relation against its square: factorizations, derived
    // divisibility, and primes all transfer.
    let tau = Relation::modn(2);
    let sq = Relation::power(&tau, 2).unwrap();
    assert!(subset(&sq, &tau, &w));
    for a in w.universe() {
        let under_sq: BTreeSet<Vec<i64>> = enumerate_factorizations(a, &sq, &w, 1)
            .into_iter()
            .map(|f| f.factors.iter().map(|x| x.get()).collect())
            .collect();
        let under_tau: BTreeSet<Vec<i64>> = enumerate_factorizations(a, &tau, &w, 1)
            .into_iter()
            .map(|f| f.factors.iter().map(|x| x.get()).collect())
            .collect();
        assert!(under_sq.is_subset(&under_tau), "factorizations at {a}");
    }
    for a in w.universe() {
        for b in w.universe() {
            if tau_divides(a, b, &sq, &w) {
                assert!(tau_divides(a, b, &tau, &w), "divisibility at ({a}, {b})");
            }
        }
    }
    for p in w.universe() {
        if is_tau_prime(p, &tau, &w) {
            assert!(is_tau_prime(p, &sq, &w), "prime transfer at {p}");
        }
    }
    println!("[acceptance] criterion 7 (derived divisibility): PASS");
}

fn oracle_lists(target: i64) -> BTreeSet<Vec<i64>> {
    fn rec(rem: u64, tuple: &mut Vec<i64>, out: &mut BTreeSet<Vec<i64>>) {
        if rem == 1 {
            if tuple.len() >= 2 {
                let mut t = tuple.clone();
                t.sort_by_key(|v| (v.unsigned_abs(), *v < 0));
                out.insert(t);
            }
            return;
        }
        for d in 2..=rem {
            if rem.is_multiple_of(d) {
                for s in [1i64, -1] {
                    tuple.push(s * d as i64);
                    rec(rem / d, tuple, out);
                    tuple.pop();
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    rec(target.unsigned_abs(), &mut Vec::new(), &mut out);
    out
}

#[test]
fn criterion_8_oracle_equivalence() {
    let w = win(1000, 1000);
    let full = Relation::Full;
    for a in 2i64..=1000 {
        let expected = oracle_lists(a);
        for target in [a, -a] {
            let got: BTreeSet<Vec<i64>> = enumerate_factorizations(e(target), &full, &w, 2)
                .into_iter()
                .map(|f| f.factors.iter().map(|x| x.get()).collect())
                .collect();
            assert_eq!(got, expected, "factor lists of {target}");
        }
    }
    println!("[acceptance] criterion 8 (oracle equivalence): PASS");
}

#[test]
fn criterion_9_suite_determinism() {
    fn run_into(dir: &Path) -> std::time::Duration {
        let started = Instant::now();
        let out = Command::new(env!("CARGO_BIN_EXE_taufact"))
            .arg("paper-suite")
            .arg("--out")
            .arg(dir)
            .output()
            .unwrap();
        assert!(
            out.status.success(),
            "suite failed: {}",
            String::from_utf8_lossy(&out.stdout)
        );
        started.elapsed()
    }
    let base = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance-suite");
    let first = base.join("run1");
    let second = base.join("run2");
    for d in [&first, &second] {
        if d.exists() {
            fs::remove_dir_all(d).unwrap();
        }
        fs::create_dir_all(d).unwrap();
    }
    let t1 = run_into(&first);
    let t2 = run_into(&second);
    assert!(
        t1.as_secs() < 60 && t2.as_secs() < 60,
        "runs took {t1:?} and {t2:?}"
    );

    let mut names: Vec<String> = fs::read_dir(&first)
        .unwrap()
        .map(|en| en.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert!(names.contains(&"summary.json".to_string()));
    let mut other: Vec<String> = fs::read_dir(&second)
        .unwrap()
        .map(|en| en.unwrap().file_name().into_string().unwrap())
        .collect();
    other.sort();
    assert_eq!(names, other);
    for name in names {
        let a = fs::read(first.join(&name)).unwrap();
        let b = fs::read(second.join(&name)).unwrap();
        assert_eq!(a, b, "byte difference in {name}");
    }
    println!("[acceptance] criterion 9 (suite determinism): PASS ({t1:?} and {t2:?})");
}
