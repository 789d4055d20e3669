//! Randomized search for counterexamples to conjectured transfer shapes:
//! sample small relation pairs satisfying the requested per-slot
//! hypotheses, compose them, and report the first composition that
//! violates the conclusion. Fully deterministic for a given seed.

use crate::domain::{signed_divisors, Elem, Window};
use crate::props::{check, CheckReport, PropertyId};
use crate::relation::{BlockSpec, PrimePattern, Relation};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeSet, HashSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Slot {
    Tau1,
    Tau2,
}

impl Slot {
    pub fn as_str(self) -> &'static str {
        match self {
            Slot::Tau1 => "tau1",
            Slot::Tau2 => "tau2",
        }
    }

    pub fn parse(s: &str) -> Option<Slot> {
        match s {
            "tau1" => Some(Slot::Tau1),
            "tau2" => Some(Slot::Tau2),
            _ => None,
        }
    }
}

/// Size knobs for the sampled relations. Small defaults keep each trial
/// cheap enough to run hundreds of trials in well under a second.
#[derive(Debug, Clone)]
pub struct RelationSampler {
    pub max_pairs: usize,
    pub max_abs: u64,
    pub primes: Vec<u64>,
    pub max_blocks: usize,
}

impl Default for RelationSampler {
    fn default() -> RelationSampler {
        RelationSampler {
            max_pairs: 12,
            max_abs: 12,
            primes: vec![2, 3, 5, 7],
            max_blocks: 4,
        }
    }
}

#[derive(Debug, Clone)]
pub enum SearchOutcome {
    Found {
        trial: u64,
        tau1: Relation,
        tau2: Relation,
        report: Box<CheckReport>,
    },
    Exhausted {
        trials: u64,
    },
}

impl RelationSampler {
    fn sample(&self, needs: &HashSet<PropertyId>, rng: &mut ChaCha8Rng) -> Relation {
        let wants = |p: PropertyId| needs.contains(&p);
        if wants(PropertyId::Equivalence) || wants(PropertyId::Reflexive) {
            self.sample_partition(rng)
        } else if wants(PropertyId::PartialOrder) {
            if rng.gen_bool(0.5) {
                Relation::IdealContainment
            } else {
                Relation::identity_on(crate::relation::SetSpec::All)
            }
        } else if wants(PropertyId::MultLeft)
            || wants(PropertyId::MultRight)
            || wants(PropertyId::Multiplicative)
        {
            self.sample_pattern(rng)
        } else {
            self.sample_extensional(needs, rng)
        }
    }

    fn sample_partition(&self, rng: &mut ChaCha8Rng) -> Relation {
        let nvals = rng.gen_range(1..=3usize);
        let mut vals: BTreeSet<u64> = BTreeSet::new();
        for _ in 0..nvals {
            vals.insert(rng.gen_range(2..=self.max_abs));
        }
        let nblocks = rng.gen_range(1..=vals.len().min(self.max_blocks.saturating_sub(2)).max(1));
        let mut finite: Vec<BTreeSet<Elem>> = vec![BTreeSet::new(); nblocks];
        for &v in &vals {
            let i = rng.gen_range(0..nblocks);
            finite[i].insert(Elem::new(v as i64).unwrap());
        }
        let mut blocks = vec![BlockSpec::Negatives];
        for f in finite.into_iter().filter(|f| !f.is_empty()) {
            blocks.push(BlockSpec::Finite(f));
        }
        blocks.push(BlockSpec::PositivesExcept(vals));
        Relation::partition(blocks).unwrap()
    }

    fn sample_pattern(&self, rng: &mut ChaCha8Rng) -> Relation {
        let subset = |rng: &mut ChaCha8Rng| -> BTreeSet<u64> {
            let size = rng.gen_range(1..=2usize.min(self.primes.len()));
            let mut s = BTreeSet::new();
            while s.len() < size {
                s.insert(self.primes[rng.gen_range(0..self.primes.len())]);
            }
            s
        };
        let n = rng.gen_range(1..=3usize);
        let mut pairs: BTreeSet<(BTreeSet<u64>, BTreeSet<u64>)> = BTreeSet::new();
        for _ in 0..n {
            pairs.insert((subset(rng), subset(rng)));
        }
        // Close under products on both sides so the sample is
        // multiplicative by construction.
        loop {
            let mut grown = pairs.clone();
            for (l1, r1) in &pairs {
                for (l2, r2) in &pairs {
                    if r1 == r2 {
                        grown.insert((l1 | l2, r1.clone()));
                    }
                    if l1 == l2 {
                        grown.insert((l1.clone(), r1 | r2));
                    }
                }
            }
            if grown.len() == pairs.len() {
                break;
            }
            pairs = grown;
        }
        let specs = pairs
            .into_iter()
            .map(|(l, r)| (PrimePattern::new(l).unwrap(), PrimePattern::new(r).unwrap()))
            .collect();
        Relation::pattern(specs)
    }

    fn sample_extensional(&self, needs: &HashSet<PropertyId>, rng: &mut ChaCha8Rng) -> Relation {
        let wants = |p: PropertyId| needs.contains(&p);
        let mut pairs: BTreeSet<(i64, i64)> = BTreeSet::new();
        let n = rng.gen_range(1..=self.max_pairs);
        let draw = |rng: &mut ChaCha8Rng| -> i64 {
            let mag = rng.gen_range(2..=self.max_abs) as i64;
            if rng.gen_bool(0.5) {
                mag
            } else {
                -mag
            }
        };
        for _ in 0..n {
            let a = draw(rng);
            let b = draw(rng);
            pairs.insert((a, b));
        }
        let div_left = wants(PropertyId::DivisiveLeft) || wants(PropertyId::Divisive);
        let div_right = wants(PropertyId::DivisiveRight) || wants(PropertyId::Divisive);
        let assoc_left = wants(PropertyId::AssocPresLeft) || wants(PropertyId::AssocPres);
        let assoc_right = wants(PropertyId::AssocPresRight) || wants(PropertyId::AssocPres);
        let symmetric = wants(PropertyId::Symmetric);
        let transitive = wants(PropertyId::Transitive);
        loop {
            let mut grown = pairs.clone();
            for &(a, b) in &pairs {
                if div_left {
                    for d in signed_divisors(a) {
                        grown.insert((d, b));
                    }
                }
                if div_right {
                    for d in signed_divisors(b) {
                        grown.insert((a, d));
                    }
                }
                if assoc_left {
                    grown.insert((-a, b));
                }
                if assoc_right {
                    grown.insert((a, -b));
                }
                if symmetric {
                    grown.insert((b, a));
                }
                if transitive {
                    for &(c, d) in &pairs {
                        if c == b {
                            grown.insert((a, d));
                        }
                    }
                }
            }
            if grown.len() == pairs.len() {
                break;
            }
            pairs = grown;
        }
        Relation::extensional(pairs).unwrap()
    }
}

pub fn search_counterexample(
    hypotheses: &[(Slot, PropertyId)],
    conclusion: PropertyId,
    sampler: &RelationSampler,
    budget: u64,
    seed: u64,
    window: &Window,
) -> SearchOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let needs_for = |slot: Slot| -> HashSet<PropertyId> {
        hypotheses
            .iter()
            .filter(|&&(s, p)| {
                s == slot && p != PropertyId::Property1 && p != PropertyId::Property2
            })
            .map(|&(_, p)| p)
            .collect()
    };
    let needs1 = needs_for(Slot::Tau1);
    let needs2 = needs_for(Slot::Tau2);
    for trial in 0..budget {
        let tau1 = sampler.sample(&needs1, &mut rng);
        let tau2 = sampler.sample(&needs2, &mut rng);
        let comp = Relation::compose(tau1.clone(), tau2.clone());
        let ok = hypotheses.iter().all(|&(slot, p)| {
            let target = match p {
                PropertyId::Property1 | PropertyId::Property2 => &comp,
                _ => match slot {
                    Slot::Tau1 => &tau1,
                    Slot::Tau2 => &tau2,
                },
            };
            check(target, p, window).holds()
        });
        if !ok {
            continue;
        }
        let mut report = check(&comp, conclusion, window);
        if !report.holds() {
            report.seed = Some(seed);
            return SearchOutcome::Found {
                trial,
                tau1,
                tau2,
                report: Box::new(report),
            };
        }
    }
    SearchOutcome::Exhausted { trials: budget }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::props::Verdict;

    fn w(b: u64, wb: u64) -> Window {
        Window::new(b, wb).unwrap()
    }

    fn outcome_fingerprint(o: &SearchOutcome) -> String {
        match o {
            SearchOutcome::Found {
                trial, tau1, tau2, ..
            } => format!("found@{trial}: {tau1} ; {tau2}"),
            SearchOutcome::Exhausted { trials } => format!("exhausted@{trials}"),
        }
    }

    #[test]
    fn same_seed_same_outcome() {
        let win = w(10, 40);
        let sampler = RelationSampler::default();
        let hyps = [
            (Slot::Tau1, PropertyId::DivisiveLeft),
            (Slot::Tau2, PropertyId::DivisiveLeft),
        ];
        let a = search_counterexample(&hyps, PropertyId::Divisive, &sampler, 50, 7, &win);
        let b = search_counterexample(&hyps, PropertyId::Divisive, &sampler, 50, 7, &win);
        assert_eq!(outcome_fingerprint(&a), outcome_fingerprint(&b));
    }

    #[test]
    fn left_divisive_factors_do_not_force_divisive_composition() {
        let win = w(10, 40);
        let sampler = RelationSampler::default();
        let hyps = [
            (Slot::Tau1, PropertyId::DivisiveLeft),
            (Slot::Tau2, PropertyId::DivisiveLeft),
        ];
        let outcome = search_counterexample(&hyps, PropertyId::Divisive, &sampler, 200, 0, &win);
        let SearchOutcome::Found {
            tau1, tau2, report, ..
        } = outcome
        else {
            panic!("expected a counterexample within budget");
        };
        assert_eq!(report.verdict, Verdict::Fails);
        assert_eq!(report.seed, Some(0));
        // Replay: hypotheses hold, conclusion fails.
        assert!(check(&tau1, PropertyId::DivisiveLeft, &win).holds());
        assert!(check(&tau2, PropertyId::DivisiveLeft, &win).holds());
        let comp = Relation::compose(tau1, tau2);
        assert!(!check(&comp, PropertyId::Divisive, &win).holds());
    }

    #[test]
    fn equivalence_factors_do_not_force_symmetric_composition() {
        let win = w(12, 40);
        let sampler = RelationSampler::default();
        let hyps = [
            (Slot::Tau1, PropertyId::Equivalence),
            (Slot::Tau2, PropertyId::Equivalence),
        ];
        let outcome = search_counterexample(&hyps, PropertyId::Symmetric, &sampler, 300, 0, &win);
        let SearchOutcome::Found {
            tau1, tau2, report, ..
        } = outcome
        else {
            panic!("expected a counterexample within budget");
        };
        assert_eq!(report.verdict, Verdict::Fails);
        assert!(check(&tau1, PropertyId::Equivalence, &win).holds());
        assert!(check(&tau2, PropertyId::Equivalence, &win).holds());
    }

    #[test]
    fn multiplicative_factors_do_not_force_mult_right_composition() {
        let win = w(12, 60);
        let sampler = RelationSampler::default();
        let hyps = [
            (Slot::Tau1, PropertyId::Multiplicative),
            (Slot::Tau2, PropertyId::Multiplicative),
        ];
        let outcome = search_counterexample(&hyps, PropertyId::MultRight, &sampler, 300, 0, &win);
        let SearchOutcome::Found {
            tau1, tau2, report, ..
        } = outcome
        else {
            panic!("expected a counterexample within budget");
        };
        assert_eq!(report.verdict, Verdict::Fails);
        assert!(check(&tau1, PropertyId::Multiplicative, &win).holds());
        assert!(check(&tau2, PropertyId::Multiplicative, &win).holds());
    }

    #[test]
    fn impossible_hypotheses_exhaust() {
        let win = w(10, 20);
        let sampler = RelationSampler::default();
        // Asking an extensional sample to be reflexive on the whole window
        // cannot succeed; partitions are reflexive, so demand antisymmetry
        // too and the negatives block always breaks it.
        let hyps = [
            (Slot::Tau1, PropertyId::Reflexive),
            (Slot::Tau1, PropertyId::Antisymmetric),
        ];
        let outcome = search_counterexample(&hyps, PropertyId::Symmetric, &sampler, 20, 3, &win);
        assert!(matches!(outcome, SearchOutcome::Exhausted { trials: 20 }));
    }
}
