//! Exact verification of the recurrence instance: equalities, Nadler, class S, right limsup.

use hausfix::corpus::{verify_example, VerifyOptions};

fn main() -> hausfix::Result<()> {
    let depth = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(200);
    let report = verify_example(depth, &VerifyOptions::default())?;
    println!("{report}");
    Ok(())
}
