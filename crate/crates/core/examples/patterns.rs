//! Bounded formula universes and the designation patterns a matrix realizes.
//!
//!     cargo run --example patterns

use nmatrix::{builtin_family, formulas_up_to, realized_patterns, Family};

fn main() -> Result<(), nmatrix::Error> {
    let d12 = builtin_family(Family::D, 1, 2)?;
    let theta = formulas_up_to(d12.signature(), 2, 1, 10_000)?;
    println!("Θ = {} formulas", theta.len());
    let pats = realized_patterns(&d12, &theta)?;
    println!("D12 realizes {} of {} subsets", pats.len(), 1usize << theta.len());
    for set in pats.sets().iter().take(5) {
        let names: Vec<String> = set.iter().map(|f| f.to_string()).collect();
        println!("  {{{}}}", names.join(", "));
    }
    Ok(())
}
