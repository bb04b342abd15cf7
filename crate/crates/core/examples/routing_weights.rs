//! Weighted routing: how path weights turn into branch frequencies.

use devs_consanguinity::process::route_select;
use devs_consanguinity::stochastic::RngStream;

fn main() {
    let sides = [
        ("male", [("MP_C", 35.7), ("MP_NC", 65.9)]),
        ("female", [("FP_C", 35.7), ("FP_NC", 64.2)]),
    ];
    let mut rng = RngStream::new(2024);
    let n = 200_000;
    for (side, paths) in sides {
        let total: f64 = paths.iter().map(|(_, w)| w).sum();
        let mut counts = [0u64; 2];
        for _ in 0..n {
            counts[route_select(&paths, rng.uniform()).unwrap()] += 1;
        }
        println!("{side}:");
        for ((name, w), c) in paths.iter().zip(counts) {
            println!("  {name:<6} weight {w:>5}  expected {:.5}  observed {:.5}", w / total, c as f64 / n as f64);
        }
    }
}
