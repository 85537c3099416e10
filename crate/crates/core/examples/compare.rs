//! Compare the logics of two matrices over a bounded universe.
//!
//!     cargo run --example compare

use nmatrix::{
    bounded_equivalent, bounded_leq, builtin_family, distinguishing_sequent, formulas_up_to, Family,
};

fn main() -> Result<(), nmatrix::Error> {
    let d12 = builtin_family(Family::D, 1, 2)?;
    let u11 = builtin_family(Family::U, 1, 1)?;
    let u22 = builtin_family(Family::U, 2, 2)?;

    let theta = formulas_up_to(d12.signature(), 1, 1, 10_000)?;
    println!("⊳U11 ⊆ ⊳D12 over Θ: {}", bounded_leq(&u11, &d12, &theta)?);
    if let Some(s) = distinguishing_sequent(&d12, &u11, &theta)? {
        println!("holds in D12, fails in U11: {s}");
    }

    let rep = bounded_equivalent(&u11, &u22, 2, 2)?;
    println!("U11 vs U22 over {} formulas: equivalent = {}", rep.universe.len(), rep.equivalent());
    Ok(())
}
