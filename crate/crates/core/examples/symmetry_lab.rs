//! Finite-domain checks: orbits, pushforwards, counterexamples and the
//! randomized suite.
//!
//! `cargo run --example symmetry_lab`

use chirascope::symlab::{
    check_distribution_preservation, mod3_family, non_implication_witnesses, orbits, pushforward,
    run_suite, FiniteDistribution, FiniteMap, FinitePermutation, SuiteConfig,
};

fn main() -> chirascope::Result<()> {
    // A reflection-like involution on six points with two fixed points.
    let t = FinitePermutation::from_cycles(6, &[&[0, 5], &[1, 4]])?;
    for o in orbits(&t).orbits() {
        println!("orbit {:?}", o.members());
    }

    // Folding the orbit {1, 4} onto {0, 5} commutes with T.
    let j = FiniteMap::new(vec![0, 0, 2, 3, 5, 5])?;
    let d = FiniteDistribution::new(vec![0.125, 0.25, 0.125, 0.125, 0.25, 0.125])?;
    let r = check_distribution_preservation(&t, &j, &d);
    println!(
        "commutes={} D_J={:?} symmetric={} reconstruction error={:?}",
        r.commutes(),
        pushforward(&d, &j).probs(),
        r.pushforward_symmetric,
        r.reconstruction_error
    );

    for w in non_implication_witnesses() {
        println!(
            "{} [{}]: {}",
            w.name,
            if w.passed { "ok" } else { "FAILED" },
            w.detail
        );
    }
    let (t3, family) = mod3_family();
    println!("mod-3 family on T={:?}:", t3.as_slice());
    for (k, j) in family.iter().enumerate() {
        println!("  J_{k} = {:?}", j.as_slice());
    }

    println!();
    print!("{}", run_suite(&SuiteConfig::default())?);
    Ok(())
}
