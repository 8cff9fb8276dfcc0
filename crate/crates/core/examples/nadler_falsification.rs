//! The largest observed H(Tx, Ty) / d(x, y) on the instance creeps towards 1
//! as the slice deepens, so no Nadler constant r < 1 fits every depth.

use hausfix::corpus::example_nadler_estimate;

fn main() -> hausfix::Result<()> {
    for depth in [3, 4, 6, 8, 12, 16] {
        let est = example_nadler_estimate(depth)?;
        println!(
            "depth {depth:>2}: ratio ~{:.8} at ({}, {}) over {} pairs",
            est.ratio.to_f64(),
            est.witness.0,
            est.witness.1,
            est.pairs
        );
    }
    Ok(())
}
