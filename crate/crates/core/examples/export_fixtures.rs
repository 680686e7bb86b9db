//! Regenerate the files under `data/`: the named models as `.ea.json` and
//! the derivation corpus as `.prf.json`.
//!
//! ```text
//! cargo run --example export_fixtures [-- <output dir>]
//! ```

use std::path::PathBuf;

use effect_workbench::corpus::corpus;
use effect_workbench::io;
use effect_workbench::models;

fn main() {
    let root = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data"));
    let model_dir = root.join("models");
    let proof_dir = root.join("proofs");
    std::fs::create_dir_all(&model_dir).unwrap();
    std::fs::create_dir_all(&proof_dir).unwrap();

    for name in models::NAMES {
        let e = models::by_name(name).unwrap();
        let path = model_dir.join(format!("{name}.ea.json"));
        io::write(&path, &io::effect_to_json(e.tables())).unwrap();
        println!("{}", path.display());
    }
    for (id, d) in corpus().iter() {
        let path = proof_dir.join(format!("{id}.prf.json"));
        io::write(&path, &io::derivation_to_json(d)).unwrap();
        println!("{}", path.display());
    }
}
