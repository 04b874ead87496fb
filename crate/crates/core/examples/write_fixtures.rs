//! Regenerates `fixtures/*.json` from the built-in catalog.
//!
//! cargo run -p nonhaus-core --example write_fixtures -- fixtures

use std::path::PathBuf;

use nonhaus_core::document::system_to_json;
use nonhaus_core::fixtures::catalog;

fn main() -> std::io::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "fixtures".into()));
    std::fs::create_dir_all(&dir)?;
    for (name, build) in catalog() {
        let path = dir.join(format!("{name}.json"));
        std::fs::write(&path, system_to_json(&build()) + "\n")?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
