//! Checks of the preservation statements. Each check evaluates both sides of
//! its claim through separate enumerations and records a witness whenever a
//! side fails.

use std::fmt;

use super::{
    accumulated_pushforward, is_dist_symmetric, orbits, pushforward, FiniteDistribution, FiniteMap,
    FinitePermutation, PROB_TOL,
};

/// Element symmetry: `J` keeps every `T`-fixed element fixed iff `J`
/// commutes with `T` on the fixed elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementReport {
    pub symmetric_elements: Vec<usize>,
    /// A fixed `x` whose image `J(x)` is not fixed.
    pub preservation_witness: Option<usize>,
    /// A fixed `x` with `J(T x) != T(J x)`.
    pub commutation_witness: Option<usize>,
}

impl ElementReport {
    pub fn preserves(&self) -> bool {
        self.preservation_witness.is_none()
    }

    pub fn commutes_on_symmetric(&self) -> bool {
        self.commutation_witness.is_none()
    }

    /// The two sides agree.
    pub fn holds(&self) -> bool {
        self.preserves() == self.commutes_on_symmetric()
    }
}

pub fn check_element_preservation(t: &FinitePermutation, j: &FiniteMap) -> ElementReport {
    assert_eq!(t.len(), j.len(), "domain sizes differ");
    let symmetric_elements: Vec<usize> = (0..t.len()).filter(|&x| t.apply(x) == x).collect();
    let preservation_witness = symmetric_elements.iter().copied().find(|&x| {
        let y = j.apply(x);
        t.apply(y) != y
    });
    let commutation_witness = symmetric_elements
        .iter()
        .copied()
        .find(|&x| j.apply(t.apply(x)) != t.apply(j.apply(x)));
    ElementReport {
        symmetric_elements,
        preservation_witness,
        commutation_witness,
    }
}

/// Mapping preservation: `J` carries every pair `(a, T a)` to a pair
/// `(J a, T J a)` iff `J` commutes with `T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MappingReport {
    /// `x` with `J(T x) != T(J x)`.
    pub commutation_witness: Option<usize>,
    /// A pair `(a, b)` with `b = T a` but `J b != T(J a)`.
    pub mapping_witness: Option<(usize, usize)>,
}

impl MappingReport {
    pub fn commutes(&self) -> bool {
        self.commutation_witness.is_none()
    }

    pub fn preserves_mapping(&self) -> bool {
        self.mapping_witness.is_none()
    }

    pub fn holds(&self) -> bool {
        self.commutes() == self.preserves_mapping()
    }
}

pub fn check_mapping_preservation(t: &FinitePermutation, j: &FiniteMap) -> MappingReport {
    assert_eq!(t.len(), j.len(), "domain sizes differ");
    let n = t.len();
    let commutation_witness = j.commutation_failure(t);
    // Scan the whole product domain for related pairs instead of generating
    // them from T.
    let mut mapping_witness = None;
    'outer: for a in 0..n {
        for b in 0..n {
            if b == t.apply(a) && j.apply(b) != t.apply(j.apply(a)) {
                mapping_witness = Some((a, b));
                break 'outer;
            }
        }
    }
    MappingReport {
        commutation_witness,
        mapping_witness,
    }
}

/// Distribution preservation for a commuting `J`, plus the orbit route to
/// the same conclusion.
#[derive(Clone, Debug, PartialEq)]
pub struct DistributionReport {
    /// `D` is `T`-symmetric, so the statement applies.
    pub applicable: bool,
    pub commutation_witness: Option<usize>,
    pub pushforward_symmetric: bool,
    /// Generator of an orbit whose image is not the orbit of its image.
    pub orbit_image_witness: Option<usize>,
    /// Generator of an orbit whose kernel count differs from the ratio of
    /// orbit sizes.
    pub kernel_witness: Option<usize>,
    /// Largest deviation between the orbit reconstruction and the direct
    /// pushforward. `None` when the orbit route does not apply.
    pub reconstruction_error: Option<f64>,
}

impl DistributionReport {
    pub fn commutes(&self) -> bool {
        self.commutation_witness.is_none()
    }

    /// Vacuously true when `D` is asymmetric or `J` does not commute.
    pub fn holds(&self) -> bool {
        if !self.applicable || !self.commutes() {
            return true;
        }
        self.pushforward_symmetric
            && self.orbit_image_witness.is_none()
            && self.kernel_witness.is_none()
            && self.reconstruction_error.is_some_and(|e| e <= PROB_TOL)
    }
}

pub fn check_distribution_preservation(
    t: &FinitePermutation,
    j: &FiniteMap,
    d: &FiniteDistribution,
) -> DistributionReport {
    assert_eq!(t.len(), j.len(), "domain sizes differ");
    let applicable = is_dist_symmetric(d, t);
    let commutation_witness = j.commutation_failure(t);
    let direct = pushforward(d, j);
    let pushforward_symmetric = is_dist_symmetric(&direct, t);
    let mut report = DistributionReport {
        applicable,
        commutation_witness,
        pushforward_symmetric,
        orbit_image_witness: None,
        kernel_witness: None,
        reconstruction_error: None,
    };
    if !applicable || commutation_witness.is_some() {
        return report;
    }

    // D is constant on each orbit, so D = Σ_i D(x_i) 1_<x_i>. A commuting J
    // maps <x_i> onto <J x_i>, collapsing |ker| elements onto each image,
    // which gives D_J = Σ_i D(x_i) |ker| 1_<J x_i>.
    let decomposition = orbits(t);
    let mut rebuilt = vec![0.0; d.len()];
    for orbit in decomposition.orbits() {
        let g = orbit.generator();
        let jg = j.apply(g);
        let mut image: Vec<usize> = orbit.members().iter().map(|&x| j.apply(x)).collect();
        image.sort_unstable();
        image.dedup();
        let mut target = decomposition.orbit_of(jg).members().to_vec();
        target.sort_unstable();
        if image != target && report.orbit_image_witness.is_none() {
            report.orbit_image_witness = Some(g);
        }
        let kernel = orbit
            .members()
            .iter()
            .filter(|&&x| j.apply(x) == jg)
            .count();
        if kernel * target.len() != orbit.len() && report.kernel_witness.is_none() {
            report.kernel_witness = Some(g);
        }
        for &y in decomposition.orbit_of(jg).members() {
            rebuilt[y] += d.prob(g) * kernel as f64;
        }
    }
    report.reconstruction_error = Some(
        rebuilt
            .iter()
            .zip(direct.probs())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max),
    );
    report
}

/// Permuted commutativity of a family `{J_j}`: some permutation `σ` with
/// `T ∘ J_j = J_σ(j) ∘ T` for all `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct PermutedReport {
    pub sigma: Option<Vec<usize>>,
    pub d_symmetric: bool,
    pub accumulated_symmetric: bool,
}

impl PermutedReport {
    /// If `σ` exists and `D` is symmetric, the accumulated pushforward is
    /// symmetric.
    pub fn holds(&self) -> bool {
        self.sigma.is_none() || !self.d_symmetric || self.accumulated_symmetric
    }
}

/// Finds `σ` by bipartite matching between `T ∘ J_j` and `J_k ∘ T`.
pub fn find_permutation(t: &FinitePermutation, family: &[FiniteMap]) -> Option<Vec<usize>> {
    let n = t.len();
    let left: Vec<Vec<usize>> = family
        .iter()
        .map(|j| (0..n).map(|x| t.apply(j.apply(x))).collect())
        .collect();
    let right: Vec<Vec<usize>> = family
        .iter()
        .map(|j| (0..n).map(|x| j.apply(t.apply(x))).collect())
        .collect();
    let edges: Vec<Vec<usize>> = left
        .iter()
        .map(|l| (0..family.len()).filter(|&k| right[k] == *l).collect())
        .collect();

    fn augment(
        j: usize,
        edges: &[Vec<usize>],
        seen: &mut [bool],
        owner: &mut [Option<usize>],
    ) -> bool {
        for &k in &edges[j] {
            if !std::mem::replace(&mut seen[k], true)
                && owner[k].is_none_or(|o| augment(o, edges, seen, owner))
            {
                owner[k] = Some(j);
                return true;
            }
        }
        false
    }

    let mut owner = vec![None; family.len()];
    for j in 0..family.len() {
        let mut seen = vec![false; family.len()];
        if !augment(j, &edges, &mut seen, &mut owner) {
            return None;
        }
    }
    let mut sigma = vec![0; family.len()];
    for (k, o) in owner.iter().enumerate() {
        sigma[o.expect("perfect matching")] = k;
    }
    Some(sigma)
}

/// # Panics
/// If `family` is empty.
pub fn check_permuted_commutativity(
    t: &FinitePermutation,
    family: &[FiniteMap],
    d: &FiniteDistribution,
) -> PermutedReport {
    let accumulated = accumulated_pushforward(d, family).expect("non-empty family");
    PermutedReport {
        sigma: find_permutation(t, family),
        d_symmetric: is_dist_symmetric(d, t),
        accumulated_symmetric: is_dist_symmetric(&accumulated, t),
    }
}

impl fmt::Display for ElementReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "symmetric={:?} preserves={} (witness {:?}) commutes_on_symmetric={} (witness {:?})",
            self.symmetric_elements,
            self.preserves(),
            self.preservation_witness,
            self.commutes_on_symmetric(),
            self.commutation_witness
        )
    }
}

impl fmt::Display for MappingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "commutes={} (witness {:?}) preserves_mapping={} (witness {:?})",
            self.commutes(),
            self.commutation_witness,
            self.preserves_mapping(),
            self.mapping_witness
        )
    }
}
