//! Enumerate every effect algebra up to a size and print the census.
//!
//! ```text
//! cargo run --release --example census -- 6
//! ```

use effect_workbench::enumerate::census;

fn main() {
    let max: usize = std::env::args().nth(1).map(|a| a.parse().expect("size")).unwrap_or(5);
    let report = census(max).expect("size within the cap");
    println!("{report}");
}
