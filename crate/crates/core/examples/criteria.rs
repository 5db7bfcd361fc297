//! d(l), A_l and R(l, m), the three-way classification and the inequality
//! hierarchy.

use hoa::criteria::{evaluate, hierarchy_check};
use hoa::moments::moment_vector;
use hoa::states::StateSpec;

fn main() -> hoa::Result<()> {
    let states = [
        (
            "binomial p=0.5 M=10",
            StateSpec::Binomial {
                p: 0.5,
                max_photons: 10,
            },
        ),
        (
            "coherent |α|²=1",
            StateSpec::PhotonAddedCoherent {
                alpha: 1.0,
                added_photons: 0,
            },
        ),
        ("geometric η=0.5", StateSpec::Geometric { eta: 0.5 }),
    ];
    for (name, spec) in &states {
        let pnd = spec.build_for_moments(1e-14, 5)?;
        let mv = moment_vector(&pnd, 4);
        println!("{name}: factorial moments {:?}", mv.normal);
        for l in 1..=3 {
            let r = evaluate(&pnd, l, Some(l), None)?;
            println!(
                "  l = {l}: d = {:>12.6e}  A = {:>10.6}  R(l,l) = {:>10.6}  {}",
                r.d,
                r.a.unwrap_or(f64::NAN),
                r.r.unwrap_or(f64::NAN),
                r.classification
            );
        }
        let h = hierarchy_check(&pnd, 3);
        let links: Vec<String> = h
            .links
            .iter()
            .map(|x| {
                format!(
                    "k={} {}",
                    x.k,
                    if x.equal {
                        "="
                    } else if x.holds {
                        "<"
                    } else {
                        ">"
                    }
                )
            })
            .collect();
        println!(
            "  hierarchy: {} (full chain: {})",
            links.join(", "),
            h.full_chain
        );
    }
    Ok(())
}
