//! Binary relations on the nonzero nonunit integers, as evaluable syntax
//! trees. A `Relation` is immutable; combinators (`compose`, `inverse`,
//! `union`, ...) wrap their operands rather than materializing pairs, and
//! every membership decision is made against a `Window`.
//!
//! Composition `compose(first, second)` applies `second` first:
//! `a (first . second) b` iff there is a witness `c` with `a second c` and
//! `c first b`. The witness is searched over the window's witness universe,
//! so a composed relation is in general an under-approximation — except for
//! the congruence family, where the decision is exact: `modn(n) . modn(m)`
//! holds iff the two-congruence system has a solution, which `crt_witness`
//! decides outright.

use crate::domain::{crt_solvable, DomainError, Elem, Window};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelationError {
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("partition blocks {0} and {1} overlap")]
    OverlappingBlocks(usize, usize),
    #[error("{0} is not prime, so it cannot appear in a prime pattern")]
    NotPrime(u64),
    #[error("a prime pattern needs at least one prime")]
    EmptyPattern,
    #[error("power of a relation needs a positive exponent")]
    ZeroPower,
}

/// One block of a partition of the carrier set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockSpec {
    /// An explicit finite set.
    Finite(BTreeSet<Elem>),
    /// Every x <= -2.
    Negatives,
    /// Every x >= 2 except the listed values.
    PositivesExcept(BTreeSet<u64>),
}

impl BlockSpec {
    pub fn contains(&self, x: Elem) -> bool {
        match self {
            BlockSpec::Finite(set) => set.contains(&x),
            BlockSpec::Negatives => x.get() < 0,
            BlockSpec::PositivesExcept(excl) => x.get() > 0 && !excl.contains(&x.abs()),
        }
    }

    fn overlaps(&self, other: &BlockSpec) -> bool {
        use BlockSpec::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.intersection(b).next().is_some(),
            (Finite(a), Negatives) | (Negatives, Finite(a)) => a.iter().any(|x| x.get() < 0),
            (Finite(a), PositivesExcept(e)) | (PositivesExcept(e), Finite(a)) => {
                a.iter().any(|x| x.get() > 0 && !e.contains(&x.abs()))
            }
            (Negatives, Negatives) => true,
            (Negatives, PositivesExcept(_)) | (PositivesExcept(_), Negatives) => false,
            // Two cofinite positive blocks always share some large value.
            (PositivesExcept(_), PositivesExcept(_)) => true,
        }
    }
}

/// Matches positive integers whose prime support is exactly this set of
/// primes (every exponent >= 1). Negative integers never match.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PrimePattern {
    primes: BTreeSet<u64>,
}

impl PrimePattern {
    pub fn new(primes: impl IntoIterator<Item = u64>) -> Result<Self, RelationError> {
        let primes: BTreeSet<u64> = primes.into_iter().collect();
        if primes.is_empty() {
            return Err(RelationError::EmptyPattern);
        }
        for &p in &primes {
            if !is_prime(p) {
                return Err(RelationError::NotPrime(p));
            }
        }
        Ok(PrimePattern { primes })
    }

    pub fn primes(&self) -> &BTreeSet<u64> {
        &self.primes
    }

    pub fn matches(&self, x: Elem) -> bool {
        x.get() > 0 && prime_support(x.abs()) == self.primes
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn prime_support(mut v: u64) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    let mut d = 2;
    while d * d <= v {
        if v.is_multiple_of(d) {
            out.insert(d);
            while v.is_multiple_of(d) {
                v /= d;
            }
        }
        d += 1;
    }
    if v > 1 {
        out.insert(v);
    }
    out
}

/// A set expression for identity restrictions.
#[derive(Debug, Clone, PartialEq)]
pub enum SetSpec {
    All,
    Finite(BTreeSet<Elem>),
    ImageOf(Box<Relation>),
    CoimageOf(Box<Relation>),
}

impl SetSpec {
    pub fn contains(&self, x: Elem, window: &Window) -> bool {
        match self {
            SetSpec::All => true,
            SetSpec::Finite(set) => set.contains(&x),
            SetSpec::ImageOf(r) => window.universe().any(|a| r.holds(a, x, window)),
            SetSpec::CoimageOf(r) => window.universe().any(|b| r.holds(x, b, window)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Relation {
    /// An explicit finite set of ordered pairs.
    Extensional(BTreeSet<(Elem, Elem)>),
    /// Everything relates to everything.
    Full,
    /// S x S for an explicit finite S.
    Product(BTreeSet<Elem>),
    /// Congruence mod n. n = 0 is the identity, n = 1 the full relation; the
    /// modulus is stored nonnegative (mod -n equals mod n).
    ModN(u64),
    /// a related to b iff the principal ideal (a) sits inside (b), i.e. b | a.
    IdealContainment,
    /// Same-block relation of a partition with pairwise disjoint blocks.
    Partition(Vec<BlockSpec>),
    /// Union of pattern pairs: a related to b iff some pair (L, R) has L
    /// matching a and R matching b.
    Pattern(Vec<(PrimePattern, PrimePattern)>),
    /// compose(first, second): second applies first, first second.
    Compose(Box<Relation>, Box<Relation>),
    Inverse(Box<Relation>),
    Union(Box<Relation>, Box<Relation>),
    Intersection(Box<Relation>, Box<Relation>),
    /// Diagonal pairs (x, x) for x in the set.
    IdentityOn(SetSpec),
    /// The derived divisibility relation of an inner relation: a related to b
    /// iff a appears literally as a factor in some factorization of b whose
    /// factors are pairwise related (both directions) under the inner
    /// relation. Carries its own window for the inner pairwise checks.
    TauDivides(Box<Relation>, Window),
}

impl Relation {
    pub fn extensional(
        pairs: impl IntoIterator<Item = (i64, i64)>,
    ) -> Result<Relation, RelationError> {
        let mut set = BTreeSet::new();
        for (a, b) in pairs {
            set.insert((Elem::new(a)?, Elem::new(b)?));
        }
        Ok(Relation::Extensional(set))
    }

    pub fn product(elems: impl IntoIterator<Item = i64>) -> Result<Relation, RelationError> {
        let mut set = BTreeSet::new();
        for v in elems {
            set.insert(Elem::new(v)?);
        }
        Ok(Relation::Product(set))
    }

    pub fn modn(n: i64) -> Relation {
        Relation::ModN(n.unsigned_abs())
    }

    pub fn partition(blocks: Vec<BlockSpec>) -> Result<Relation, RelationError> {
        for i in 0..blocks.len() {
            for j in (i + 1)..blocks.len() {
                if blocks[i].overlaps(&blocks[j]) {
                    return Err(RelationError::OverlappingBlocks(i, j));
                }
            }
        }
        Ok(Relation::Partition(blocks))
    }

    pub fn pattern(pairs: Vec<(PrimePattern, PrimePattern)>) -> Relation {
        Relation::Pattern(pairs)
    }

    pub fn compose(first: Relation, second: Relation) -> Relation {
        Relation::Compose(Box::new(first), Box::new(second))
    }

    pub fn inverse_of(r: Relation) -> Relation {
        Relation::Inverse(Box::new(r))
    }

    pub fn union(a: Relation, b: Relation) -> Relation {
        Relation::Union(Box::new(a), Box::new(b))
    }

    pub fn intersection(a: Relation, b: Relation) -> Relation {
        Relation::Intersection(Box::new(a), Box::new(b))
    }

    pub fn identity_on(set: SetSpec) -> Relation {
        Relation::IdentityOn(set)
    }

    /// k-fold composition, right-associated. k = 0 is rejected: the identity
    /// would not be a relation of this family on the whole carrier.
    pub fn power(r: &Relation, k: u32) -> Result<Relation, RelationError> {
        if k == 0 {
            return Err(RelationError::ZeroPower);
        }
        let mut acc = r.clone();
        for _ in 1..k {
            acc = Relation::compose(r.clone(), acc);
        }
        Ok(acc)
    }

    pub fn holds(&self, a: Elem, b: Elem, window: &Window) -> bool {
        match self {
            Relation::Extensional(pairs) => pairs.contains(&(a, b)),
            Relation::Full => true,
            Relation::Product(s) => s.contains(&a) && s.contains(&b),
            Relation::ModN(n) => modn_holds(*n, a, b),
            Relation::IdealContainment => a.get() % b.get() == 0,
            Relation::Partition(blocks) => {
                let ia = blocks.iter().position(|blk| blk.contains(a));
                let ib = blocks.iter().position(|blk| blk.contains(b));
                matches!((ia, ib), (Some(i), Some(j)) if i == j)
            }
            Relation::Pattern(pairs) => pairs.iter().any(|(l, r)| l.matches(a) && r.matches(b)),
            Relation::Compose(first, second) => compose_holds(first, second, a, b, window),
            Relation::Inverse(inner) => inner.holds(b, a, window),
            Relation::Union(l, r) => l.holds(a, b, window) || r.holds(a, b, window),
            Relation::Intersection(l, r) => l.holds(a, b, window) && r.holds(a, b, window),
            Relation::IdentityOn(set) => a == b && set.contains(a, window),
            Relation::TauDivides(inner, win) => crate::factor::tau_divides(a, b, inner, win),
        }
    }

    /// All pairs over the window universe, in universe order on both
    /// coordinates (first coordinate major).
    pub fn enumerate(&self, window: &Window) -> Vec<(Elem, Elem)> {
        let mut out = Vec::new();
        for a in window.universe() {
            for b in window.universe() {
                if self.holds(a, b, window) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn enumerate_set(&self, window: &Window) -> BTreeSet<(Elem, Elem)> {
        self.enumerate(window).into_iter().collect()
    }

    /// Right projection over the window.
    pub fn image(&self, window: &Window) -> BTreeSet<Elem> {
        let mut out = BTreeSet::new();
        for a in window.universe() {
            for b in window.universe() {
                if self.holds(a, b, window) {
                    out.insert(b);
                }
            }
        }
        out
    }

    /// Left projection (domain of definition) over the window.
    pub fn coimage(&self, window: &Window) -> BTreeSet<Elem> {
        let mut out = BTreeSet::new();
        for a in window.universe() {
            for b in window.universe() {
                if self.holds(a, b, window) {
                    out.insert(a);
                    break;
                }
            }
        }
        out
    }

    /// True when membership decisions never depend on the bounded witness
    /// search: every composition in the tree is of the congruence family
    /// (decided by `crt_witness`). Such results are exact facts, not
    /// window-scale approximations.
    pub fn decision_is_exact(&self) -> bool {
        match self {
            Relation::Extensional(_)
            | Relation::Full
            | Relation::Product(_)
            | Relation::ModN(_)
            | Relation::IdealContainment
            | Relation::Partition(_)
            | Relation::Pattern(_) => true,
            Relation::Compose(first, second) => {
                matches!(
                    (first.as_ref(), second.as_ref()),
                    (Relation::ModN(_), Relation::ModN(_))
                )
            }
            Relation::Inverse(inner) => inner.decision_is_exact(),
            Relation::Union(l, r) | Relation::Intersection(l, r) => {
                l.decision_is_exact() && r.decision_is_exact()
            }
            Relation::IdentityOn(set) => match set {
                SetSpec::All | SetSpec::Finite(_) => true,
                SetSpec::ImageOf(r) | SetSpec::CoimageOf(r) => r.decision_is_exact(),
            },
            Relation::TauDivides(inner, _) => inner.decision_is_exact(),
        }
    }
}

fn modn_holds(n: u64, a: Elem, b: Elem) -> bool {
    match n {
        0 => a == b,
        1 => true,
        n => (a.get() - b.get()).rem_euclid(n as i64) == 0,
    }
}

fn compose_holds(first: &Relation, second: &Relation, a: Elem, b: Elem, window: &Window) -> bool {
    if let (Relation::ModN(n), Relation::ModN(m)) = (first, second) {
        return modn_compose_holds(*n, *m, a, b);
    }
    // An explicit operand narrows the witness candidates to the finitely many
    // values it mentions; otherwise scan the witness universe.
    if let Relation::Extensional(pairs) = second {
        return pairs
            .range((a, Elem::new(i64::MIN).unwrap())..=(a, Elem::new(i64::MAX).unwrap()))
            .any(|&(_, c)| window.witness_contains(c) && first.holds(c, b, window));
    }
    if let Relation::Extensional(pairs) = first {
        return pairs
            .iter()
            .any(|&(c, b2)| b2 == b && window.witness_contains(c) && second.holds(a, c, window));
    }
    window
        .witness_universe()
        .any(|c| second.holds(a, c, window) && first.holds(c, b, window))
}

/// Exact decision for modn(n) . modn(m): a witness c with m | (c - a) and
/// n | (b - c) exists in the carrier iff the plain congruence system is
/// solvable, since a solution class always contains a nonzero nonunit.
fn modn_compose_holds(n: u64, m: u64, a: Elem, b: Elem) -> bool {
    match (n, m) {
        (0, 0) => a == b,
        (n, 0) => modn_holds(n, a, b),
        (0, m) => modn_holds(m, a, b),
        (1, _) | (_, 1) => true,
        (n, m) => crt_solvable(a.get(), b.get(), m, n),
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::Extensional(pairs) => {
                write!(f, "extensional{{")?;
                for (i, (a, b)) in pairs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "({a},{b})")?;
                }
                write!(f, "}}")
            }
            Relation::Full => write!(f, "full"),
            Relation::Product(s) => {
                write!(f, "product{{")?;
                for (i, e) in s.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{e}")?;
                }
                write!(f, "}}")
            }
            Relation::ModN(n) => write!(f, "modn({n})"),
            Relation::IdealContainment => write!(f, "ideal_containment"),
            Relation::Partition(blocks) => {
                write!(f, "partition[")?;
                for (i, blk) in blocks.iter().enumerate() {
                    if i > 0 {
                        write!(f, " | ")?;
                    }
                    match blk {
                        BlockSpec::Finite(set) => {
                            write!(f, "{{")?;
                            for (j, e) in set.iter().enumerate() {
                                if j > 0 {
                                    write!(f, ",")?;
                                }
                                write!(f, "{e}")?;
                            }
                            write!(f, "}}")?;
                        }
                        BlockSpec::Negatives => write!(f, "negatives")?,
                        BlockSpec::PositivesExcept(excl) => {
                            write!(f, "positives\\{{")?;
                            for (j, v) in excl.iter().enumerate() {
                                if j > 0 {
                                    write!(f, ",")?;
                                }
                                write!(f, "{v}")?;
                            }
                            write!(f, "}}")?;
                        }
                    }
                }
                write!(f, "]")
            }
            Relation::Pattern(pairs) => {
                write!(f, "pattern[")?;
                for (i, (l, r)) in pairs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "(")?;
                    fmt_primes(f, l)?;
                    write!(f, "->")?;
                    fmt_primes(f, r)?;
                    write!(f, ")")?;
                }
                write!(f, "]")
            }
            Relation::Compose(a, b) => write!(f, "compose({a}, {b})"),
            Relation::Inverse(r) => write!(f, "inverse({r})"),
            Relation::Union(a, b) => write!(f, "union({a}, {b})"),
            Relation::Intersection(a, b) => write!(f, "intersection({a}, {b})"),
            Relation::IdentityOn(set) => match set {
                SetSpec::All => write!(f, "identity"),
                SetSpec::Finite(s) => {
                    write!(f, "identity_on{{")?;
                    for (i, e) in s.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{e}")?;
                    }
                    write!(f, "}}")
                }
                SetSpec::ImageOf(r) => write!(f, "identity_on(image({r}))"),
                SetSpec::CoimageOf(r) => write!(f, "identity_on(coimage({r}))"),
            },
            Relation::TauDivides(inner, _) => write!(f, "tau_divides({inner})"),
        }
    }
}

fn fmt_primes(f: &mut fmt::Formatter<'_>, p: &PrimePattern) -> fmt::Result {
    write!(f, "{{")?;
    for (i, q) in p.primes().iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{q}")?;
    }
    write!(f, "}}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn e(v: i64) -> Elem {
        Elem::new(v).unwrap()
    }

    fn w(b: u64, wb: u64) -> Window {
        Window::new(b, wb).unwrap()
    }

    fn pairs(r: &Relation, win: &Window) -> Vec<(i64, i64)> {
        r.enumerate(win)
            .into_iter()
            .map(|(a, b)| (a.get(), b.get()))
            .collect()
    }

    #[test]
    fn modn_membership() {
        let r = Relation::modn(3);
        let win = w(12, 12);
        assert!(r.holds(e(4), e(10), &win));
        assert!(!r.holds(e(4), e(9), &win));
        assert!(r.holds(e(-2), e(4), &win));
        // Normalization: mod -3 is mod 3.
        assert_eq!(Relation::modn(-3), Relation::ModN(3));
    }

    #[test]
    fn modn_zero_is_identity_and_one_is_full() {
        let win = w(6, 6);
        assert_eq!(
            pairs(&Relation::modn(0), &win),
            pairs(&Relation::identity_on(SetSpec::All), &win)
        );
        assert_eq!(
            pairs(&Relation::modn(1), &win),
            pairs(&Relation::Full, &win)
        );
    }

    #[test]
    fn identity_enumerates_in_universe_order() {
        let win = w(3, 3);
        assert_eq!(
            pairs(&Relation::identity_on(SetSpec::All), &win),
            vec![(2, 2), (-2, -2), (3, 3), (-3, -3)]
        );
    }

    #[test]
    fn ideal_containment_is_divisibility() {
        let win = w(10, 10);
        let r = Relation::IdealContainment;
        assert!(r.holds(e(8), e(4), &win));
        assert!(!r.holds(e(8), e(16), &win));
        assert!(!r.holds(e(4), e(8), &win));
        assert!(r.holds(e(-6), e(3), &win));
    }

    #[test]
    fn sign_pair_composition_frozen() {
        // first = {(2,2),(2,-2)}, second = {(2,2),(-2,2)}: composing gives all
        // four sign combinations on 2.
        let t1 = Relation::extensional([(2, 2), (2, -2)]).unwrap();
        let t2 = Relation::extensional([(2, 2), (-2, 2)]).unwrap();
        let comp = Relation::compose(t1, t2);
        let win = w(5, 10);
        assert_eq!(pairs(&comp, &win), vec![(2, 2), (2, -2), (-2, 2), (-2, -2)]);
    }

    #[test]
    fn partition_same_block() {
        // Negatives, {2}, positives except 2 — and its coarser sibling.
        let p1 = Relation::partition(vec![
            BlockSpec::Negatives,
            BlockSpec::Finite([e(2)].into()),
            BlockSpec::PositivesExcept([1, 2].into()),
        ])
        .unwrap();
        let p2 = Relation::partition(vec![
            BlockSpec::Negatives,
            BlockSpec::Finite([e(2), e(3)].into()),
            BlockSpec::PositivesExcept([1, 2, 3].into()),
        ])
        .unwrap();
        let win = w(10, 10);
        assert!(p1.holds(e(3), e(5), &win));
        assert!(!p1.holds(e(2), e(5), &win));
        assert!(p2.holds(e(2), e(3), &win));
        assert!(!p2.holds(e(3), e(5), &win));

        // (2,5) flows through the composition but (5,2) does not.
        let comp = Relation::compose(p1, p2);
        assert!(comp.holds(e(2), e(5), &win));
        assert!(!comp.holds(e(5), e(2), &win));
    }

    #[test]
    fn partition_overlap_rejected() {
        let err = Relation::partition(vec![
            BlockSpec::PositivesExcept([2].into()),
            BlockSpec::PositivesExcept([3].into()),
        ]);
        assert_eq!(err, Err(RelationError::OverlappingBlocks(0, 1)));
        let err = Relation::partition(vec![
            BlockSpec::Finite([e(2)].into()),
            BlockSpec::PositivesExcept([3].into()),
        ]);
        assert_eq!(err, Err(RelationError::OverlappingBlocks(0, 1)));
    }

    #[test]
    fn pattern_matching() {
        let p = PrimePattern::new([2]).unwrap();
        assert!(p.matches(e(8)));
        assert!(!p.matches(e(-8)));
        assert!(!p.matches(e(6)));
        let p37 = PrimePattern::new([3, 7]).unwrap();
        assert!(p37.matches(e(21)));
        assert!(p37.matches(e(63)));
        assert!(!p37.matches(e(9)));
        assert!(PrimePattern::new([4]).is_err());
        assert!(PrimePattern::new([]).is_err());
    }

    #[test]
    fn pattern_composition_membership() {
        // Left relation sends 3-powers to 2-powers and 7-powers to 5-powers;
        // right relation moves support {3},{7},{3,7} around. Composed, 3 goes
        // to both 2 and 5 but never to 10.
        let pp = |s: &[u64]| PrimePattern::new(s.iter().copied()).unwrap();
        let t1 = Relation::pattern(vec![
            (pp(&[3]), pp(&[2])),
            (pp(&[2]), pp(&[3])),
            (pp(&[7]), pp(&[5])),
            (pp(&[5]), pp(&[7])),
        ]);
        let t2 = Relation::pattern(vec![
            (pp(&[3]), pp(&[3])),
            (pp(&[3]), pp(&[7])),
            (pp(&[7]), pp(&[3])),
            (pp(&[3]), pp(&[3, 7])),
            (pp(&[3, 7]), pp(&[3])),
        ]);
        let comp = Relation::compose(t1, t2);
        let win = w(30, 60);
        assert!(comp.holds(e(3), e(2), &win));
        assert!(comp.holds(e(3), e(5), &win));
        assert!(comp.holds(e(7), e(2), &win));
        assert!(comp.holds(e(21), e(2), &win));
        assert!(!comp.holds(e(3), e(10), &win));
        assert!(!comp.holds(e(5), e(2), &win));
    }

    #[test]
    fn compose_of_full_and_extensional() {
        let marked = Relation::extensional([(4, 4), (6, 6), (9, 9)]).unwrap();
        let comp = Relation::compose(Relation::Full, marked);
        let win = w(12, 12);
        let got = pairs(&comp, &win);
        let expect: Vec<(i64, i64)> = win
            .universe()
            .flat_map(|a| win.universe().map(move |b| (a.get(), b.get())))
            .filter(|&(a, _)| a == 4 || a == 6 || a == 9)
            .collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn congruence_composition_is_gcd_congruence() {
        let win = w(60, 600);
        for (n, m) in [(4i64, 6i64), (2, 8), (5, 7), (9, 12), (10, 15)] {
            let comp = Relation::compose(Relation::modn(n), Relation::modn(m));
            let g = crate::domain::gcd(n as u64, m as u64) as i64;
            assert_eq!(
                pairs(&comp, &win),
                pairs(&Relation::modn(g), &win),
                "composition of modn({n}) after modn({m})"
            );
        }
    }

    #[test]
    fn congruence_composition_edge_moduli() {
        let win = w(20, 60);
        let cases = [
            (0i64, 0i64, Relation::modn(0)),
            (4, 0, Relation::modn(4)),
            (0, 4, Relation::modn(4)),
            (4, 1, Relation::Full),
            (1, 4, Relation::Full),
            (1, 0, Relation::Full),
        ];
        for (n, m, expect) in cases {
            let comp = Relation::compose(Relation::modn(n), Relation::modn(m));
            assert_eq!(
                pairs(&comp, &win),
                pairs(&expect, &win),
                "modn({n}) after modn({m})"
            );
        }
    }

    /// The generic bounded witness search, kept here as the reference the
    /// exact congruence path must agree with when the witness bound is large
    /// enough.
    fn compose_by_search(
        first: &Relation,
        second: &Relation,
        a: Elem,
        b: Elem,
        win: &Window,
    ) -> bool {
        win.witness_universe()
            .any(|c| second.holds(a, c, win) && first.holds(c, b, win))
    }

    #[test]
    fn exact_congruence_path_agrees_with_search() {
        for (n, m) in [(4u64, 6u64), (3, 5), (8, 12), (2, 9)] {
            let l = crate::domain::lcm(n, m);
            let win = w(30, 3 * l);
            let first = Relation::ModN(n);
            let second = Relation::ModN(m);
            let comp = Relation::compose(first.clone(), second.clone());
            for a in win.universe() {
                for b in win.universe() {
                    assert_eq!(
                        comp.holds(a, b, &win),
                        compose_by_search(&first, &second, a, b, &win),
                        "disagreement at ({a},{b}) for moduli ({n},{m})"
                    );
                }
            }
        }
    }

    #[test]
    fn power_folds_composition() {
        let win = w(20, 60);
        let r = Relation::modn(4);
        let p2 = Relation::power(&r, 2).unwrap();
        assert_eq!(pairs(&p2, &win), pairs(&r, &win));
        let chain = Relation::extensional([(2, 3)]).unwrap();
        let p = Relation::power(&chain, 2).unwrap();
        assert!(p.enumerate(&win).is_empty());
        assert_eq!(Relation::power(&r, 0), Err(RelationError::ZeroPower));
        let p3 = Relation::power(&r, 3).unwrap();
        assert_eq!(pairs(&p3, &win), pairs(&r, &win));
    }

    #[test]
    fn image_coimage_projections() {
        let r = Relation::extensional([(2, 3), (2, 5), (4, 3)]).unwrap();
        let win = w(6, 6);
        let im: Vec<i64> = r.image(&win).into_iter().map(Elem::get).collect();
        let coim: Vec<i64> = r.coimage(&win).into_iter().map(Elem::get).collect();
        assert_eq!(im, vec![3, 5]);
        assert_eq!(coim, vec![2, 4]);
    }

    #[test]
    fn exactness_classification() {
        let exact = Relation::compose(Relation::modn(4), Relation::modn(6));
        assert!(exact.decision_is_exact());
        let approx = Relation::compose(Relation::Full, Relation::modn(6));
        assert!(!approx.decision_is_exact());
        assert!(Relation::IdealContainment.decision_is_exact());
        assert!(!Relation::union(approx, Relation::Full).decision_is_exact());
    }

    prop_compose! {
        fn small_relation()(pairs in prop::collection::vec(((2i64..=9).prop_union(-9i64..=-2), (2i64..=9).prop_union(-9i64..=-2)), 0..8)) -> Relation {
            Relation::extensional(pairs).unwrap()
        }
    }

    proptest! {
        #[test]
        fn inverse_is_an_involution(r in small_relation()) {
            let win = w(9, 18);
            let back = Relation::inverse_of(Relation::inverse_of(r.clone()));
            prop_assert_eq!(r.enumerate(&win), back.enumerate(&win));
        }

        #[test]
        fn coimage_is_image_of_inverse(r in small_relation()) {
            let win = w(9, 18);
            let inv = Relation::inverse_of(r.clone());
            prop_assert_eq!(r.coimage(&win), inv.image(&win));
            prop_assert_eq!(r.image(&win), inv.coimage(&win));
        }

        #[test]
        fn inverse_of_composition_swaps_and_inverts(r1 in small_relation(), r2 in small_relation()) {
            let win = w(9, 18);
            let lhs = Relation::inverse_of(Relation::compose(r1.clone(), r2.clone()));
            let rhs = Relation::compose(
                Relation::inverse_of(r2),
                Relation::inverse_of(r1),
            );
            prop_assert_eq!(lhs.enumerate(&win), rhs.enumerate(&win));
        }

        #[test]
        fn identity_on_image_sits_inside_back_and_forth(r in small_relation()) {
            let win = w(9, 18);
            let inv = Relation::inverse_of(r.clone());
            let back_forth = Relation::compose(r.clone(), inv.clone());
            for x in r.image(&win) {
                prop_assert!(back_forth.holds(x, x, &win), "missing ({x},{x})");
            }
            let forth_back = Relation::compose(inv, r.clone());
            for x in r.coimage(&win) {
                prop_assert!(forth_back.holds(x, x, &win), "missing ({x},{x})");
            }
        }

        #[test]
        fn composition_projections_shrink(r1 in small_relation(), r2 in small_relation()) {
            let win = w(9, 18);
            let comp = Relation::compose(r1.clone(), r2.clone());
            prop_assert!(comp.coimage(&win).is_subset(&r2.coimage(&win)));
            prop_assert!(comp.image(&win).is_subset(&r1.image(&win)));
        }
    }
}
