//! `texsynth` command line tool.
//!
//! Exit codes: 0 success, 1 anomalies found (`detect` only), 2 usage or I/O
//! error, 3 no conforming block to synthesize from (`synthesize` only).

mod commands;

use clap::Parser;

fn main() {
    let cli = commands::Cli::parse();
    std::process::exit(commands::run(cli));
}
