//! Write the bundled preset configurations as JSON files.
//!
//! Usage: cargo run -p qubit-cavity --example dump_presets [dir]

use qubit_cavity::scenario::{preset, PRESET_NAMES};

fn main() -> std::io::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "presets".to_string());
    std::fs::create_dir_all(&dir)?;
    for name in PRESET_NAMES {
        let config = preset(name).expect("bundled preset");
        let mut text = serde_json::to_string_pretty(&config).expect("serializable config");
        text.push('\n');
        let path = std::path::Path::new(&dir).join(format!("{name}.json"));
        std::fs::write(&path, text)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
