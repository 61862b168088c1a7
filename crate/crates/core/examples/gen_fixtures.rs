//! Writes the fixture corpus to `fixtures/`.

use std::path::Path;

use mltt_core::declarative::corpus::{corpus, render};

fn main() -> std::io::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    std::fs::create_dir_all(&dir)?;
    for (name, ds) in corpus() {
        std::fs::write(dir.join(name), render(&ds))?;
        println!("{name}: {} derivations", ds.len());
    }
    Ok(())
}
