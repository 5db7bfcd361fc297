//! Preset figure datasets, written as CSV into a directory (default
//! `figures/`).

use std::fs::File;

use hoa::cli::{figure_preset, Axis, FigureId};

fn main() -> hoa::Result<()> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "figures".into());
    std::fs::create_dir_all(&dir)?;
    for id in FigureId::ALL {
        let preset = figure_preset(id);
        let table = preset.dataset(false, 1e-12)?;
        let path = format!("{dir}/{}.csv", id.name());
        table.write_csv(File::create(&path)?)?;
        println!("{path:<20} {:>5} rows  {}", table.rows.len(), preset.title);
    }

    // Narrow the fig6 window and compare closed form with summation.
    let mut preset = figure_preset(FigureId::Fig6);
    preset.override_axis(Axis::linear("eta", 0.1, 0.4, 7))?;
    let closed = preset.dataset(false, 1e-12)?;
    let summed = preset.dataset(true, 1e-12)?;
    for ((eta, c), s) in closed
        .values("eta")
        .iter()
        .zip(closed.values("d8"))
        .zip(summed.values("d8"))
    {
        println!(
            "eta = {:.2}: closed {:>12.4e}  summed {:>12.4e}",
            eta.unwrap(),
            c.unwrap(),
            s.unwrap()
        );
    }
    Ok(())
}
