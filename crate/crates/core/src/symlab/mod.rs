//! Exhaustive checks of symmetry preservation on small finite domains.
//!
//! Elements are the ids `0..n`. A [`FinitePermutation`] plays the role of the
//! symmetry transform `T`, a [`FiniteMap`] the processing map `J`, and a
//! [`FiniteDistribution`] the data distribution `D`.

mod props;
mod suite;
mod witnesses;

pub use props::{
    check_distribution_preservation, check_element_preservation, check_mapping_preservation,
    check_permuted_commutativity, find_permutation, DistributionReport, ElementReport,
    MappingReport, PermutedReport,
};
pub use suite::{
    random_commuting_map, random_involution, random_map, random_permutation,
    random_symmetric_distribution, run_suite, Outcome, SuiteConfig, SuiteReport,
};
pub use witnesses::{mod3_family, non_implication_witnesses, WitnessReport};

use crate::error::{Error, Result};

/// Absolute tolerance on probabilities.
pub const PROB_TOL: f64 = 1e-12;

/// A bijection on `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinitePermutation(Vec<usize>);

impl FinitePermutation {
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        if mapping.is_empty() {
            return Err(Error::InvalidParameter("empty domain".into()));
        }
        let mut seen = vec![false; mapping.len()];
        for &y in &mapping {
            if y >= mapping.len() || std::mem::replace(&mut seen[y], true) {
                return Err(Error::InvalidParameter(format!(
                    "{mapping:?} is not a bijection"
                )));
            }
        }
        Ok(Self(mapping))
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    /// Builds a permutation from disjoint cycles; unlisted elements are fixed.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut mapping: Vec<usize> = (0..n).collect();
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                let next = cycle[(i + 1) % cycle.len()];
                if x >= n {
                    return Err(Error::InvalidParameter(format!("{x} outside 0..{n}")));
                }
                mapping[x] = next;
            }
        }
        Self::new(mapping)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (x, &y) in self.0.iter().enumerate() {
            inv[y] = x;
        }
        Self(inv)
    }

    pub fn is_fixed(&self, x: usize) -> bool {
        self.0[x] == x
    }

    /// Least `k >= 1` with `T^k = id`.
    pub fn order(&self) -> usize {
        fn gcd(a: usize, b: usize) -> usize {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        orbits(self)
            .orbits()
            .iter()
            .map(|o| o.len())
            .fold(1, |acc, m| acc / gcd(acc, m) * m)
    }
}

/// An arbitrary total function `0..n -> 0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteMap(Vec<usize>);

impl FiniteMap {
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        let n = mapping.len();
        if n == 0 {
            return Err(Error::InvalidParameter("empty domain".into()));
        }
        if let Some(&y) = mapping.iter().find(|&&y| y >= n) {
            return Err(Error::InvalidParameter(format!("image {y} outside 0..{n}")));
        }
        Ok(Self(mapping))
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn constant(n: usize, y: usize) -> Self {
        assert!(y < n, "constant {y} outside 0..{n}");
        Self(vec![y; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// `T ∘ J ∘ T⁻¹`.
    pub fn conjugate(&self, t: &FinitePermutation) -> Self {
        let inv = t.inverse();
        Self(
            (0..self.len())
                .map(|x| t.apply(self.apply(inv.apply(x))))
                .collect(),
        )
    }

    /// First `x` with `J(T(x)) != T(J(x))`.
    pub fn commutation_failure(&self, t: &FinitePermutation) -> Option<usize> {
        same_size(self.len(), t.len());
        (0..self.len()).find(|&x| self.apply(t.apply(x)) != t.apply(self.apply(x)))
    }

    pub fn commutes_with(&self, t: &FinitePermutation) -> bool {
        self.commutation_failure(t).is_none()
    }
}

impl From<FinitePermutation> for FiniteMap {
    fn from(p: FinitePermutation) -> Self {
        Self(p.0)
    }
}

/// Probabilities over `0..n`, non-negative and summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteDistribution(Vec<f64>);

impl FiniteDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidParameter("empty domain".into()));
        }
        if probs.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::InvalidParameter(
                "probabilities must be finite and non-negative".into(),
            ));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > PROB_TOL {
            return Err(Error::InvalidParameter(format!(
                "probabilities sum to {total}"
            )));
        }
        Ok(Self(probs))
    }

    /// Normalises non-negative weights.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total.is_finite() && total > 0.0) {
            return Err(Error::InvalidParameter(
                "weights must have positive total".into(),
            ));
        }
        Self::new(weights.iter().map(|w| w / total).collect())
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n > 0, "empty domain");
        Self(vec![1.0 / n as f64; n])
    }

    pub fn point(n: usize, x: usize) -> Self {
        assert!(x < n, "{x} outside 0..{n}");
        let mut p = vec![0.0; n];
        p[x] = 1.0;
        Self(p)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn prob(&self, x: usize) -> f64 {
        self.0[x]
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        same_size(self.len(), other.len());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// One cycle of `T` listed from its generator: `g, T g, T² g, ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit(Vec<usize>);

impl Orbit {
    pub fn generator(&self) -> usize {
        self.0[0]
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Partition of the domain into the cycles of `T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitDecomposition {
    orbits: Vec<Orbit>,
    index: Vec<usize>,
}

impl OrbitDecomposition {
    pub fn orbits(&self) -> &[Orbit] {
        &self.orbits
    }

    /// The orbit containing `x`.
    pub fn orbit_of(&self, x: usize) -> &Orbit {
        &self.orbits[self.index[x]]
    }

    pub fn orbit_size(&self, x: usize) -> usize {
        self.orbit_of(x).len()
    }
}

/// Cycle decomposition of `t`, generators being the smallest member of each
/// cycle.
pub fn orbits(t: &FinitePermutation) -> OrbitDecomposition {
    let n = t.len();
    let mut index = vec![usize::MAX; n];
    let mut out = Vec::new();
    for g in 0..n {
        if index[g] != usize::MAX {
            continue;
        }
        let mut members = vec![g];
        index[g] = out.len();
        let mut x = t.apply(g);
        while x != g {
            index[x] = out.len();
            members.push(x);
            x = t.apply(x);
        }
        out.push(Orbit(members));
    }
    OrbitDecomposition { orbits: out, index }
}

/// `D_J(y) = Σ_{x : J(x) = y} D(x)`.
pub fn pushforward(d: &FiniteDistribution, j: &FiniteMap) -> FiniteDistribution {
    same_size(d.len(), j.len());
    let mut out = vec![0.0; d.len()];
    for (x, &p) in d.0.iter().enumerate() {
        out[j.apply(x)] += p;
    }
    FiniteDistribution(out)
}

/// Pushforward averaged over a family of maps.
pub fn accumulated_pushforward(
    d: &FiniteDistribution,
    family: &[FiniteMap],
) -> Result<FiniteDistribution> {
    if family.is_empty() {
        return Err(Error::InvalidParameter("empty family".into()));
    }
    let weight = 1.0 / family.len() as f64;
    let mut out = vec![0.0; d.len()];
    for j in family {
        same_size(d.len(), j.len());
        for (x, &p) in d.0.iter().enumerate() {
            out[j.apply(x)] += p * weight;
        }
    }
    Ok(FiniteDistribution(out))
}

/// `D(x) = D(T x)` for every `x`, within [`PROB_TOL`].
pub fn is_dist_symmetric(d: &FiniteDistribution, t: &FinitePermutation) -> bool {
    same_size(d.len(), t.len());
    (0..d.len()).all(|x| (d.prob(x) - d.prob(t.apply(x))).abs() <= PROB_TOL)
}

/// `x = T x`.
pub fn is_element_symmetric(x: usize, t: &FinitePermutation) -> bool {
    t.is_fixed(x)
}

fn same_size(a: usize, b: usize) {
    assert_eq!(a, b, "domain sizes differ");
}
