//! Regenerates include/phonolearn.h from the exported items.

use std::env;
use std::path::PathBuf;

fn main() {
    let crate_dir = PathBuf::from(env::var("CARGO_MANIFEST_DIR").unwrap());
    let header = crate_dir.join("include/phonolearn.h");
    cbindgen::generate(&crate_dir)
        .expect("cbindgen config and exported items must stay in sync")
        .write_to_file(header);
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");
}
