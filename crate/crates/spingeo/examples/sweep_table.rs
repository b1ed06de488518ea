//! Build a classical-limit sweep table programmatically, the same record
//! schema the `spingeo sweep` subcommand emits.
//!
//! ```bash
//! cargo run --release --example sweep_table
//! ```

use spingeo::cli::{cmd_sweep, load_config, render_sweep_csv};

const CONFIG: &str = r#"{
    "systems": [],
    "sweep": {
        "j_values": [8, 32, 128, 512],
        "p_scale": 1.0,
        "lines": [
            {"point": [0, 0, 0],   "dir": [1, 0, 0]},
            {"point": [0, 0, 1],   "dir": [0, 1, 0]},
            {"point": [1, -1, 0],  "dir": [0.2, 0.3, 1]}
        ]
    }
}"#;

fn main() {
    let config = load_config(CONFIG).expect("valid config");
    let rows = cmd_sweep(&config).expect("sweep");
    print!("{}", render_sweep_csv(&rows));
}
