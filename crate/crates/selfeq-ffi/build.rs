// SPDX-License-Identifier: MIT

//! Generates the C header for this crate with cbindgen.
//!
//! The header is written into `OUT_DIR` and its path is exported to the
//! crate's own targets as `SELFEQ_GENERATED_HEADER`, so the header-sync test
//! can compare it against the committed copy in `include/selfeq.h`.

use std::env;
use std::path::PathBuf;

fn main() {
    let crate_dir = env::var("CARGO_MANIFEST_DIR").expect("CARGO_MANIFEST_DIR is set by cargo");
    let out_dir = PathBuf::from(env::var("OUT_DIR").expect("OUT_DIR is set by cargo"));
    let header = out_dir.join("selfeq.h");

    let config = cbindgen::Config::from_file(PathBuf::from(&crate_dir).join("cbindgen.toml"))
        .expect("cbindgen.toml is readable and well formed");
    cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(config)
        .generate()
        .expect("the C header generates from the crate sources")
        .write_to_file(&header);

    println!("cargo:rustc-env=SELFEQ_GENERATED_HEADER={}", header.display());
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");
}
