//! Produce a machine-readable report and read it back.
//!
//! Usage:
//!   cargo run --example json_report

use quasitoric::report::{
    run_compute, ColoringSource, DChoice, OutputFormat, PairSource, PolytopeSource, Report,
    RunConfig,
};

fn main() {
    let cfg = RunConfig {
        polytope: PolytopeSource::Expression("cube:2 x polygon:6".into()),
        coloring: ColoringSource::Auto,
        pair: PairSource::Staircase,
        d: DChoice::Both,
        format: OutputFormat::Json,
        check_only: false,
    };
    let report = run_compute(&cfg).unwrap();
    let json = serde_json::to_string_pretty(&report).unwrap();
    println!("{json}");

    // Reports round-trip: parsing and re-rendering is the identity.
    let parsed: Report = serde_json::from_str(&json).unwrap();
    assert_eq!(serde_json::to_string_pretty(&parsed).unwrap(), json);
    eprintln!("round-trip ok; rank = {}", parsed.classes.rank_dual);
}
