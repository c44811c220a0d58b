//! Regenerates the files under `fixtures/` from the built-in definitions.

use std::fs;
use std::path::Path;

fn main() -> std::io::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    fs::create_dir_all(&dir)?;
    for (name, m) in copos_core::fixtures::all() {
        fs::write(dir.join(format!("{name}.txt")), m.to_text())?;
    }
    Ok(())
}
