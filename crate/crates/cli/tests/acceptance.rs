use std::time::{Duration, Instant};

use dgker::linalg::Field;
use dgker_cli::harness;

#[test]
fn acceptance() {
    let start = Instant::now();
    let outcomes = harness::run(Field::F2, 0, 64);
    let elapsed = start.elapsed();
    for o in &outcomes {
        println!("{}", o.line());
    }
    println!(
        "{} criteria in {:.1} s",
        outcomes.len(),
        elapsed.as_secs_f64()
    );
    assert_eq!(outcomes.len(), 15);
    let failed: Vec<usize> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| o.id)
        .collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
    assert!(elapsed < Duration::from_secs(60), "suite took {elapsed:?}");
}
