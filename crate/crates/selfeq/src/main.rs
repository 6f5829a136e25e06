// SPDX-License-Identifier: MIT
//! `selfeq` — exact rational-homotopy computations on cell complexes and
//! cochain algebras.
//!
//! ```text
//! selfeq <COMMAND> [INPUT]... [--max-degree N] [--int-bound N] [--seed N] [--format human|machine]
//! ```
//!
//! Run `selfeq examples` for the built-in registry; inputs may also be paths
//! to spec files containing a `space`, `algebra` or `sullivan` block.

use clap::Parser;
use selfeq::cli::{exec, Opts};

#[derive(Parser)]
#[command(
    name = "selfeq",
    version,
    about = "Exact rational-homotopy computations: Lie models, self-closeness numbers, duality checks"
)]
struct Args {
    /// Command: model, homology, selfmaps, group, nse, formal, split,
    /// cohomology, pd, csymplectic, connsum, wedge, mimura-toda, examples
    command: String,

    /// Built-in example names or spec-file paths (connsum and wedge take
    /// two; examples takes none)
    input: Vec<String>,

    /// Largest homotopy degree shown in homology tables
    #[arg(long, default_value_t = 16)]
    max_degree: u32,

    /// Search bound for integral solution enumeration
    #[arg(long, default_value_t = 100)]
    int_bound: u64,

    /// Determinism seed recorded in the report
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Output format: human or machine
    #[arg(long, default_value = "human")]
    format: String,
}

fn main() {
    let args = Args::parse();
    let opts = Opts {
        max_degree: args.max_degree,
        int_bound: args.int_bound,
        seed: args.seed,
    };
    std::process::exit(exec(&args.command, &args.input, &opts, &args.format));
}
