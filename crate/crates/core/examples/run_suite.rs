//! Running check suites from code and reading the reports.

use padic_opalg::suite::{run_suite, RunConfig, Status, Suite};

fn main() -> padic_opalg::Result<()> {
    let config = RunConfig {
        p: 5,
        l: 2,
        k: 2,
        j: 1,
        samples: 5,
        ..RunConfig::default()
    };
    for r in run_suite(&config, Suite::All)? {
        let tag = match r.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
        };
        println!("{tag:5} {}", r.id);
    }
    let bad = RunConfig { k: 3, ..config };
    println!("{}", run_suite(&bad, Suite::All).unwrap_err());
    Ok(())
}
