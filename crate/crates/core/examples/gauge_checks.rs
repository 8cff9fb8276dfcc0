//! Sample-based checks of the class-S and right-limsup conditions for a few gauges.

use hausfix::gauge::{check_geraghty_class, check_mizoguchi_takahashi, halving_grid};
use hausfix::{Exact, Gauge, GaugeRule};

fn main() -> hausfix::Result<()> {
    let gauges = [
        ("constant 1/2", Gauge::constant(Exact::ratio(1, 2))?),
        ("t/(1+t)", Gauge::rule(GaugeRule::SaturatingRatio { scale: Exact::one() })?),
        ("1/(1+t)", Gauge::rule(GaugeRule::ReciprocalShift { scale: Exact::one() })?),
    ];
    let probes: Vec<Exact> = (1..=100).map(Exact::from).chain((1..=20).map(|k| Exact::ratio(1, 1 << k))).collect();
    let eps = halving_grid(Exact::ratio(1, 2), 10);
    let deltas = halving_grid(Exact::one(), 30);
    for (name, g) in &gauges {
        let s = check_geraghty_class(g, &probes, &eps)?;
        let mt = check_mizoguchi_takahashi(g, &Exact::zero(), &probes, &deltas)?;
        println!(
            "{name:<13} class S {:?}; at 0: {:?} (limsup ~{:.4})",
            s.verdict,
            mt.verdict,
            mt.limsup_estimate.to_f64()
        );
    }
    Ok(())
}
