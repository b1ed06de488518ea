//! Run the full verification suite: quadrature oracles for every closed
//! form, finite differences for the edth chart formula, commutators and
//! operator identities, and the closed D^2 against exact moments.
//!
//! ```bash
//! cargo run --release --example verification
//! ```

use spingeo::half::HalfInt;
use spingeo::oracle::{run_suite, SuiteLimits};

fn main() {
    let limits = SuiteLimits {
        s_max: HalfInt::from_int(2),
        j_max: HalfInt::from_int(6),
    };
    let report = run_suite(limits, 1e-9);
    print!("{report}");
    println!(
        "\nsuite {}",
        if report.all_pass() {
            "PASSED"
        } else {
            "FAILED"
        }
    );
    std::process::exit(if report.all_pass() { 0 } else { 1 });
}
