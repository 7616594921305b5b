//! Loads a scenario from TOML over a preset and writes the decoherence
//! report as CSV, as the command-line tool does.

use pointer_decoherence::cli::cmd_decohere;
use pointer_decoherence::config::Scenario;

const DOC: &str = r#"
preset = "desk"

[grid]
gamma_t = { min = 1e-3, max = 1e3, points = 13, spacing = "log" }
"#;

fn main() -> pointer_decoherence::Result<()> {
    let s = Scenario::from_toml(DOC, None)?;
    println!("config hash {}", s.config_hash());
    cmd_decohere(&s)?.write_csv(std::io::stdout().lock())
}
