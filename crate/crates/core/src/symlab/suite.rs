//! Randomized runner over many small domains.

use std::fmt;

use rayon::prelude::*;

use super::props::{
    check_distribution_preservation, check_element_preservation, check_mapping_preservation,
    check_permuted_commutativity,
};
use super::witnesses::{mod3_family, non_implication_witnesses};
use super::{
    accumulated_pushforward, orbits, pushforward, FiniteDistribution, FiniteMap, FinitePermutation,
    PROB_TOL,
};
use crate::error::{Error, Result};
use crate::synthgen::{derive_seed, PixelRng};

pub fn random_permutation(n: usize, rng: &mut PixelRng) -> FinitePermutation {
    let mut v: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        v.swap(i, rng.below(i as u64 + 1) as usize);
    }
    FinitePermutation::new(v).expect("shuffle is a bijection")
}

/// A random involution: a shuffled prefix is paired off, the rest is fixed.
pub fn random_involution(n: usize, rng: &mut PixelRng) -> FinitePermutation {
    let order = random_permutation(n, rng);
    let pairs = rng.below(n as u64 / 2 + 1) as usize;
    let mut v: Vec<usize> = (0..n).collect();
    for p in 0..pairs {
        let (a, b) = (order.apply(2 * p), order.apply(2 * p + 1));
        v[a] = b;
        v[b] = a;
    }
    FinitePermutation::new(v).expect("disjoint transpositions")
}

pub fn random_map(n: usize, rng: &mut PixelRng) -> FiniteMap {
    FiniteMap::new((0..n).map(|_| rng.below(n as u64) as usize).collect()).expect("in range")
}

/// A map commuting with `t`: each orbit generator `g` (orbit size `m`) is
/// sent to a random `y` whose orbit size divides `m`, candidates being
/// rejected otherwise, and `T^a g ↦ T^a y` extends it.
pub fn random_commuting_map(t: &FinitePermutation, rng: &mut PixelRng) -> FiniteMap {
    let n = t.len();
    let decomposition = orbits(t);
    let mut v = vec![0; n];
    for orbit in decomposition.orbits() {
        let m = orbit.len();
        let mut y = loop {
            let y = rng.below(n as u64) as usize;
            if m % decomposition.orbit_size(y) == 0 {
                break y;
            }
        };
        for &x in orbit.members() {
            v[x] = y;
            y = t.apply(y);
        }
    }
    FiniteMap::new(v).expect("in range")
}

/// A deliberately broken generator: a commuting map with the image of one
/// non-fixed element bumped, which breaks commutation whenever `T` is not the
/// identity.
fn faulty_commuting_map(t: &FinitePermutation, rng: &mut PixelRng) -> FiniteMap {
    let mut v = random_commuting_map(t, rng).as_slice().to_vec();
    if let Some(x) = (0..t.len()).find(|&x| !t.is_fixed(x)) {
        v[x] = (v[x] + 1) % t.len();
    }
    FiniteMap::new(v).expect("in range")
}

/// Random `T`-symmetric distribution: one integer weight in `1..=8` per
/// orbit, normalised.
pub fn random_symmetric_distribution(
    t: &FinitePermutation,
    rng: &mut PixelRng,
) -> FiniteDistribution {
    let decomposition = orbits(t);
    let mut weights = vec![0.0; t.len()];
    for orbit in decomposition.orbits() {
        let w = (1 + rng.below(8)) as f64;
        for &x in orbit.members() {
            weights[x] = w;
        }
    }
    FiniteDistribution::from_weights(&weights).expect("positive weights")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    /// Domains have `1..=max_n` elements.
    pub max_n: usize,
    pub trials: usize,
    pub seed: u64,
    /// Swap in a generator whose maps do not commute, as a negative control.
    pub faulty_generator: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            max_n: 12,
            trials: 1000,
            seed: 0,
            faulty_generator: false,
        }
    }
}

/// Result for one proposition across all trials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub name: &'static str,
    pub checked: usize,
    pub failures: usize,
    /// Dump of the first failure.
    pub witness: Option<String>,
}

impl Outcome {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            checked: 0,
            failures: 0,
            witness: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }

    fn merge(&mut self, other: Outcome) {
        self.checked += other.checked;
        self.failures += other.failures;
        if self.witness.is_none() {
            self.witness = other.witness;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub outcomes: Vec<Outcome>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(Outcome::passed)
    }

    pub fn outcome(&self, name: &str) -> Option<&Outcome> {
        self.outcomes.iter().find(|o| o.name == name)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .outcomes
            .iter()
            .map(|o| o.name.len())
            .max()
            .unwrap_or(0);
        for o in &self.outcomes {
            let status = if o.passed() { "PASS" } else { "FAIL" };
            writeln!(
                f,
                "{status}  {:<width$}  checked={} failures={}",
                o.name, o.checked, o.failures
            )?;
            if let Some(w) = &o.witness {
                writeln!(f, "      witness: {w}")?;
            }
        }
        Ok(())
    }
}

pub const ELEMENT: &str = "element symmetry iff commutation on symmetric elements";
pub const MAPPING: &str = "mapping preservation iff commutation";
pub const GENERATOR: &str = "generated maps commute";
pub const DISTRIBUTION: &str = "commuting map keeps distribution symmetric";
pub const ORBITS: &str = "orbit images are orbits";
pub const KERNEL: &str = "kernel-multiplicity reconstruction";
pub const MASS: &str = "mass conservation";
pub const PERMUTED: &str = "conjugation family is permuted commutative";

const TRIAL_NAMES: [&str; 8] = [
    ELEMENT,
    MAPPING,
    GENERATOR,
    DISTRIBUTION,
    ORBITS,
    KERNEL,
    MASS,
    PERMUTED,
];

fn run_trial(cfg: &SuiteConfig, trial: usize) -> Vec<Outcome> {
    let mut out: Vec<Outcome> = TRIAL_NAMES.iter().map(|&n| Outcome::new(n)).collect();
    let mut rng = PixelRng::new(derive_seed(cfg.seed, &[trial as u64]));
    let n = 1 + rng.below(cfg.max_n as u64) as usize;
    let t = match rng.below(8) {
        0 => FinitePermutation::identity(n),
        1..=3 => random_involution(n, &mut rng),
        _ => random_permutation(n, &mut rng),
    };
    let arbitrary = random_map(n, &mut rng);
    let commuting = if cfg.faulty_generator {
        faulty_commuting_map(&t, &mut rng)
    } else {
        random_commuting_map(&t, &mut rng)
    };
    let d = random_symmetric_distribution(&t, &mut rng);
    let ctx = |j: &FiniteMap| format!("trial {trial}: T={:?} J={:?}", t.as_slice(), j.as_slice());

    for j in [&arbitrary, &commuting] {
        let e = check_element_preservation(&t, j);
        out[0].record(e.holds(), || format!("{} {e}", ctx(j)));
        let m = check_mapping_preservation(&t, j);
        out[1].record(m.holds(), || format!("{} {m}", ctx(j)));
    }

    out[2].record(commuting.commutes_with(&t), || {
        format!(
            "{} fails at x={:?}",
            ctx(&commuting),
            commuting.commutation_failure(&t)
        )
    });
    let r = check_distribution_preservation(&t, &commuting, &d);
    if r.applicable && r.commutes() {
        out[3].record(r.pushforward_symmetric, || {
            format!("{} D={:?}", ctx(&commuting), d.probs())
        });
        out[4].record(r.orbit_image_witness.is_none(), || {
            format!("{} orbit of {:?}", ctx(&commuting), r.orbit_image_witness)
        });
        out[5].record(
            r.kernel_witness.is_none() && r.reconstruction_error.is_some_and(|e| e <= PROB_TOL),
            || {
                format!(
                    "{} kernel witness {:?} error {:?}",
                    ctx(&commuting),
                    r.kernel_witness,
                    r.reconstruction_error
                )
            },
        );
    }

    let family: Vec<FiniteMap> =
        std::iter::successors(Some(arbitrary.clone()), |j| Some(j.conjugate(&t)))
            .take(t.order())
            .collect();
    for dist in [
        pushforward(&d, &arbitrary),
        pushforward(&d, &commuting),
        accumulated_pushforward(&d, &family).expect("non-empty family"),
    ] {
        out[6].record((dist.total() - 1.0).abs() <= PROB_TOL, || {
            format!("{} total {}", ctx(&arbitrary), dist.total())
        });
    }
    let p = check_permuted_commutativity(&t, &family, &d);
    out[7].record(p.sigma.is_some() && p.holds(), || {
        format!(
            "{} family of {} sigma={:?} accumulated symmetric={}",
            ctx(&arbitrary),
            family.len(),
            p.sigma,
            p.accumulated_symmetric
        )
    });
    out
}

/// Runs `cfg.trials` randomized trials, then the fixed witnesses.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    if cfg.max_n == 0 {
        return Err(Error::InvalidParameter("max_n must be at least 1".into()));
    }
    let per_trial: Vec<Vec<Outcome>> = (0..cfg.trials)
        .into_par_iter()
        .map(|k| run_trial(cfg, k))
        .collect();
    let mut outcomes: Vec<Outcome> = TRIAL_NAMES.iter().map(|&n| Outcome::new(n)).collect();
    for trial in per_trial {
        for (acc, o) in outcomes.iter_mut().zip(trial) {
            acc.merge(o);
        }
    }
    for w in non_implication_witnesses() {
        let mut o = Outcome::new(w.name);
        o.record(w.passed, || w.detail.clone());
        outcomes.push(o);
    }
    let (t, family) = mod3_family();
    let d = FiniteDistribution::uniform(t.len());
    let p = check_permuted_commutativity(&t, &family, &d);
    let mut o = Outcome::new("mod-3 family is permuted commutative");
    o.record(
        p.sigma.as_deref() == Some(&[1, 2, 0][..]) && p.holds(),
        || format!("{p:?}"),
    );
    outcomes.push(o);
    Ok(SuiteReport { outcomes })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_respect_their_contracts() {
        let mut rng = PixelRng::new(11);
        for _ in 0..300 {
            let n = 1 + rng.below(12) as usize;
            let inv = random_involution(n, &mut rng);
            assert!(orbits(&inv).orbits().iter().all(|o| o.len() <= 2));
            let t = random_permutation(n, &mut rng);
            assert!(random_commuting_map(&t, &mut rng).commutes_with(&t));
            let d = random_symmetric_distribution(&t, &mut rng);
            assert!(super::super::is_dist_symmetric(&d, &t));
        }
    }

    #[test]
    fn small_suite_passes() {
        let cfg = SuiteConfig {
            trials: 200,
            ..SuiteConfig::default()
        };
        let r = run_suite(&cfg).unwrap();
        assert!(r.all_passed(), "{r}");
        assert_eq!(r.outcome(MASS).unwrap().checked, 600);
    }

    #[test]
    fn single_element_domain_is_vacuous() {
        let cfg = SuiteConfig {
            max_n: 1,
            trials: 20,
            ..SuiteConfig::default()
        };
        assert!(run_suite(&cfg).unwrap().all_passed());
        assert!(run_suite(&SuiteConfig { max_n: 0, ..cfg }).is_err());
    }

    #[test]
    fn faulty_generator_is_caught() {
        let cfg = SuiteConfig {
            trials: 100,
            faulty_generator: true,
            ..SuiteConfig::default()
        };
        let r = run_suite(&cfg).unwrap();
        assert!(!r.all_passed());
        let o = r.outcome(GENERATOR).unwrap();
        assert!(o.failures > 0);
        assert!(o.witness.as_ref().unwrap().contains("fails at x=Some("));
    }

    #[test]
    fn report_is_deterministic() {
        let cfg = SuiteConfig {
            trials: 50,
            seed: 9,
            ..SuiteConfig::default()
        };
        assert_eq!(
            run_suite(&cfg).unwrap().to_string(),
            run_suite(&cfg).unwrap().to_string()
        );
    }
}
