//! Concrete counterexamples separating the preservation notions.

use super::props::{check_element_preservation, check_permuted_commutativity};
use super::{
    accumulated_pushforward, is_dist_symmetric, pushforward, FiniteDistribution, FiniteMap,
    FinitePermutation,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessReport {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Three-element family on two 3-cycles with `T ∘ J_k = J_{k+1 mod 3} ∘ T`.
/// No member commutes with `T`.
pub fn mod3_family() -> (FinitePermutation, Vec<FiniteMap>) {
    let t = FinitePermutation::from_cycles(6, &[&[0, 1, 2], &[3, 4, 5]]).expect("valid cycles");
    let j0 = FiniteMap::new(vec![3, 1, 2, 3, 4, 5]).expect("valid map");
    let j1 = j0.conjugate(&t);
    let j2 = j1.conjugate(&t);
    (t, vec![j0, j1, j2])
}

/// Builds and verifies:
///
/// * (a) element symmetry preserved (vacuously) while distribution symmetry
///   is lost;
/// * (b) distribution symmetry preserved while element symmetry is lost;
/// * (c) non-commuting maps whose accumulated pushforward stays symmetric.
pub fn non_implication_witnesses() -> Vec<WitnessReport> {
    vec![witness_a(), witness_b(), witness_c()]
}

fn witness_a() -> WitnessReport {
    let t = FinitePermutation::from_cycles(4, &[&[0, 1], &[2, 3]]).expect("valid cycles");
    let j = FiniteMap::new(vec![0, 0, 2, 3]).expect("valid map");
    let d = FiniteDistribution::uniform(4);
    let e = check_element_preservation(&t, &j);
    let dj = pushforward(&d, &j);
    let passed = e.symmetric_elements.is_empty()
        && e.preserves()
        && is_dist_symmetric(&d, &t)
        && !is_dist_symmetric(&dj, &t);
    WitnessReport {
        name: "element preservation without distribution preservation",
        passed,
        detail: format!("T=(0 1)(2 3) J={:?} D_J={:?}", j.as_slice(), dj.probs()),
    }
}

fn witness_b() -> WitnessReport {
    let t = FinitePermutation::from_cycles(3, &[&[1, 2]]).expect("valid cycles");
    let j = FiniteMap::new(vec![1, 0, 2]).expect("valid map");
    let d = FiniteDistribution::uniform(3);
    let e = check_element_preservation(&t, &j);
    let dj = pushforward(&d, &j);
    let passed = is_dist_symmetric(&dj, &t) && !e.preserves();
    WitnessReport {
        name: "distribution preservation without element preservation",
        passed,
        detail: format!(
            "T=(0)(1 2) J={:?} D_J={:?} broken at {:?}",
            j.as_slice(),
            dj.probs(),
            e.preservation_witness
        ),
    }
}

fn witness_c() -> WitnessReport {
    let (t, family) = mod3_family();
    let d = FiniteDistribution::uniform(t.len());
    let none_commute = family.iter().all(|j| !j.commutes_with(&t));
    let single_asymmetric = !is_dist_symmetric(&pushforward(&d, &family[0]), &t);
    let r = check_permuted_commutativity(&t, &family, &d);
    let accumulated = accumulated_pushforward(&d, &family).expect("non-empty family");
    let passed = none_commute
        && single_asymmetric
        && r.sigma.as_deref() == Some(&[1, 2, 0][..])
        && r.accumulated_symmetric;
    WitnessReport {
        name: "non-commuting family preserving distribution symmetry",
        passed,
        detail: format!(
            "T=(0 1 2)(3 4 5) sigma={:?} accumulated={:?}",
            r.sigma,
            accumulated.probs()
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_witnesses_verify() {
        for w in non_implication_witnesses() {
            assert!(w.passed, "{}: {}", w.name, w.detail);
        }
    }

    #[test]
    fn mod3_relation_holds_pointwise() {
        let (t, f) = mod3_family();
        for k in 0..3 {
            for x in 0..6 {
                assert_eq!(t.apply(f[k].apply(x)), f[(k + 1) % 3].apply(t.apply(x)));
            }
        }
    }
}
