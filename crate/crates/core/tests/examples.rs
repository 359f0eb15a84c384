//! Every example in examples/ runs to completion.

#[allow(dead_code)]
#[path = "../examples/sat_incremental.rs"]
mod sat_incremental;

#[allow(dead_code)]
#[path = "../examples/dimacs_roundtrip.rs"]
mod dimacs_roundtrip;

#[allow(dead_code)]
#[path = "../examples/example1_census.rs"]
mod example1_census;

#[allow(dead_code)]
#[path = "../examples/ipog_example1.rs"]
mod ipog_example1;

#[allow(dead_code)]
#[path = "../examples/bot_streaming.rs"]
mod bot_streaming;

#[allow(dead_code)]
#[path = "../examples/pbot_pool_budget.rs"]
mod pbot_pool_budget;

#[allow(dead_code)]
#[path = "../examples/sutgen_from_cnf.rs"]
mod sutgen_from_cnf;

#[allow(dead_code)]
#[path = "../examples/verify_reference_arrays.rs"]
mod verify_reference_arrays;

#[allow(dead_code)]
#[path = "../examples/format_conversion.rs"]
mod format_conversion;

#[allow(dead_code)]
#[path = "../examples/mini_benchmark.rs"]
mod mini_benchmark;

#[test]
fn census_example_reports_the_known_counts() {
    assert!(example1_census::run_example().unwrap().starts_with("total=82 allowed=69 forbidden=13\n"));
}

#[test]
fn every_example_runs() {
    assert!(!sat_incremental::run_example().unwrap().is_empty());
    assert!(!dimacs_roundtrip::run_example().unwrap().is_empty());
    assert!(!example1_census::run_example().unwrap().is_empty());
    assert!(!ipog_example1::run_example().unwrap().is_empty());
    assert!(!bot_streaming::run_example().unwrap().is_empty());
    assert!(!pbot_pool_budget::run_example().unwrap().is_empty());
    assert!(!sutgen_from_cnf::run_example().unwrap().is_empty());
    assert!(!verify_reference_arrays::run_example().unwrap().is_empty());
    assert!(!format_conversion::run_example().unwrap().is_empty());
    assert!(!mini_benchmark::run_example().unwrap().is_empty());
}
