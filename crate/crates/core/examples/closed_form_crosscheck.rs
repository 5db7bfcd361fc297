//! Closed-form d(l) against direct summation, family by family.

use hoa::closedform::{crosscheck, crosscheck_family, d_closed, d_oracle};
use hoa::states::StateSpec;

fn main() -> hoa::Result<()> {
    let spec = StateSpec::GeneralizedBinomial {
        max_photons: 20,
        alpha: 2.0,
        beta: 1.0,
    };
    for l in [1, 4, 8, 9] {
        println!(
            "GBS l = {l}: closed {:>16.8e}  summed {:>16.8e}",
            d_closed(&spec, l)?,
            d_oracle(&spec, l, 1e-12)?
        );
    }

    let report = crosscheck(&StateSpec::Geometric { eta: 0.5 }, 3, 1e-9)?;
    for row in &report.rows {
        println!(
            "geometric l = {}: summed {} closed {} -> {}",
            row.l, row.d_oracle, row.d_closed, row.note
        );
    }

    for family in hoa::states::FAMILIES {
        println!(
            "{family:<10} {}",
            crosscheck_family(family, 4, 1e-9)?.summary()
        );
    }
    Ok(())
}
