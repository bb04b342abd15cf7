//! Sampling the offspring-count distribution by inverse CDF.

use devs_consanguinity::stochastic::{mean_of, sample_discrete, DiscreteDistribution, RngStream};

fn main() {
    let dist = DiscreteDistribution::offspring_default();
    println!("value  P      cumulative");
    for ((v, p), (_, c)) in dist.probabilities().zip(dist.entries()) {
        println!("{v:>5}  {p:.2}   {c:.2}");
    }

    let mut rng = RngStream::new(7);
    let n = 100_000;
    let mut histogram = [0u64; 6];
    for _ in 0..n {
        histogram[sample_discrete(&dist, rng.uniform()) as usize] += 1;
    }
    let sample_mean = histogram.iter().enumerate().map(|(k, c)| k as f64 * *c as f64).sum::<f64>() / n as f64;

    println!("\n{n} draws:");
    for (k, c) in histogram.iter().enumerate() {
        println!("{k}: {:.4}", *c as f64 / n as f64);
    }
    println!("sample mean {sample_mean:.4}, exact mean {:.4}", mean_of(&dist));
}
