//! Simulated photon counting: estimate d(l) from samples and compare with
//! the exact value.

use hoa::criteria::d_criterion;
use hoa::montecarlo::{run, run_task, DEFAULT_RESAMPLES};
use hoa::states::StateSpec;

fn main() -> hoa::Result<()> {
    let seed = 2024;
    for spec in [
        StateSpec::Binomial {
            p: 0.5,
            max_photons: 10,
        },
        StateSpec::Geometric { eta: 0.5 },
        StateSpec::PhotonAddedCoherent {
            alpha: 1.0,
            added_photons: 3,
        },
    ] {
        let pnd = spec.build_for_moments(1e-12, 4)?;
        for l in 1..=3 {
            let est = run(&pnd, l, 1_000_000, seed, DEFAULT_RESAMPLES)?;
            println!(
                "{:<10} l = {l}: {:>12.5} ± {:<10.5} exact {:>12.5}",
                spec.family(),
                est.d_hat,
                est.stderr,
                d_criterion(&pnd, l)
            );
        }
    }

    // Independent tasks under one master seed use disjoint streams.
    let pnd = StateSpec::Binomial {
        p: 0.5,
        max_photons: 10,
    }
    .build(1e-12)?;
    let tasks: Vec<f64> = (0..4)
        .map(|t| run_task(&pnd, 1, 100_000, seed, t, 50).map(|e| e.d_hat))
        .collect::<Result<_, _>>()?;
    println!("task estimates of d(1): {tasks:?}");
    Ok(())
}
