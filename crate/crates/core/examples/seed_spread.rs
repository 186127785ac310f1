//! Fitted constants of one 2D inequality over seeds 1..=12.
//!
//! ```text
//! cargo run --release --example seed_spread -- <id> <band> [n]
//! ```

use mhd_core::inequality::{fit_constants, FamilyKind, FieldFamily, InequalityId};
use mhd_core::Grid;

fn main() {
    let mut args = std::env::args().skip(1);
    let usage = "usage: seed_spread <id> <band> [n]";
    let id: InequalityId = args.next().expect(usage).parse().expect("unknown inequality id");
    let band: i64 = args.next().expect(usage).parse().expect("band must be an integer");
    let n: usize = args.next().map_or(64, |s| s.parse().expect("n must be an integer"));
    let grid = Grid::new(2, n).expect("invalid grid");
    let constants: Vec<f64> = (1..=12)
        .map(|seed| {
            let family = FieldFamily::new(FamilyKind::RandomBand, 2, 200, seed, band);
            fit_constants(&family, &id, &grid).expect("fit failed").fitted_constant.unwrap_or(f64::NAN)
        })
        .collect();
    let lo = constants.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = constants.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    println!("{id} band {band} n {n}: {constants:.4?}");
    println!("min {lo:.4} max {hi:.4} spread {:.1}%", 100.0 * (hi - lo) / lo);
}
