//! Photon-number distributions for each state family, with CSV and JSON
//! serialization.

use hoa::states::{hs_min_size, StateSpec};

fn main() -> hoa::Result<()> {
    let specs = [
        StateSpec::Binomial {
            p: 0.5,
            max_photons: 10,
        },
        StateSpec::GeneralizedBinomial {
            max_photons: 10,
            alpha: 2.0,
            beta: 1.0,
        },
        StateSpec::ReciprocalBinomial {
            max_photons: 6,
            theta: 0.3,
        },
        StateSpec::NegativeBinomial {
            eta: 0.5,
            min_photons: 3,
        },
        StateSpec::Geometric { eta: 0.25 },
        StateSpec::PhotonAddedCoherent {
            alpha: 1.0,
            added_photons: 2,
        },
        StateSpec::Hypergeometric {
            size: hs_min_size(4, 0.25),
            max_photons: 4,
            eta: 0.25,
        },
    ];
    for spec in &specs {
        let pnd = spec.build(1e-12)?;
        println!(
            "{:<10} n = {}..={:<4} sum = {:.15} mean = {:.6} truncated = {} tail <= {:.1e}",
            spec.family(),
            pnd.n_min,
            pnd.n_max(),
            pnd.total(),
            pnd.mean(),
            pnd.truncated,
            pnd.tail_bound
        );
    }

    let pnd = specs[0].build(1e-12)?;
    let mut csv = Vec::new();
    pnd.write_csv(&mut csv)?;
    print!(
        "\n{}",
        String::from_utf8_lossy(&csv)
            .lines()
            .take(4)
            .collect::<Vec<_>>()
            .join("\n")
    );
    println!(
        "\n...\n{}",
        pnd.to_json()?.chars().take(120).collect::<String>()
    );

    // Invalid parameters are rejected before building.
    let bad = StateSpec::Hypergeometric {
        size: 5.0,
        max_photons: 4,
        eta: 0.25,
    };
    println!("\n{:?}", bad.build(1e-12).err());
    Ok(())
}
