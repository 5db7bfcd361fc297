//! A two-axis sweep from a JSON configuration, with both evaluation methods
//! and the agreement columns.

use hoa::cli::{run_sweep, SweepConfig};

const CONFIG: &str = r#"{
    "state": {"state": "hs", "params": {"L": 40, "M": 4, "eta": 0.5}},
    "axes": [
        {"name": "eta", "start": 0.2, "stop": 0.8, "count": 3},
        {"name": "M", "start": 2, "stop": 6, "count": 3}
    ],
    "l_values": [1, 3],
    "method": "both",
    "outputs": {"A": true, "R": [1, 2]},
    "minimal_l": true
}"#;

fn main() -> hoa::Result<()> {
    let cfg: SweepConfig = serde_json::from_str(CONFIG)?;
    let table = run_sweep(&cfg)?;
    table.write_csv(std::io::stdout())?;
    Ok(())
}
