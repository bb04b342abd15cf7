//! Congenital-disorder probability by parental relationship and allele
//! frequency, plus a direct Monte Carlo check.

use devs_consanguinity::genetics::{
    assign_disorder, disorder_probability, inbreeding_coefficient, AlleleFrequency, ConsanguinityDegree,
};
use devs_consanguinity::process::Entity;
use devs_consanguinity::stochastic::RngStream;
use devs_consanguinity::SimTime;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let freqs = [0.001, 0.01, 0.05];
    print!("{:<28}{:>9}", "relationship", "F");
    for q in freqs {
        print!("{:>14}", format!("q={q}"));
    }
    println!();
    for degree in ConsanguinityDegree::ALL {
        let f = inbreeding_coefficient(degree);
        print!("{:<28}{:>9.5}", degree.as_str(), f.value());
        for q in freqs {
            let p = disorder_probability(AlleleFrequency::new(q)?, f);
            print!("{p:>14.3e}");
        }
        println!();
    }

    let q = AlleleFrequency::new(0.01)?;
    let mut rng = RngStream::new(1);
    let n = 1_000_000;
    let affected = (0..n)
        .filter(|&i| {
            let child = Entity::new(i, "Child_C", SimTime::ZERO);
            assign_disorder(child, ConsanguinityDegree::FirstCousin, q, &mut rng).is_affected()
        })
        .count();
    println!(
        "\nfirst cousins, q = 0.01: {affected} of {n} affected ({:.3e}, exact {:.3e})",
        affected as f64 / n as f64,
        disorder_probability(q, inbreeding_coefficient(ConsanguinityDegree::FirstCousin))
    );
    Ok(())
}
