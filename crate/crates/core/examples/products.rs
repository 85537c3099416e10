//! Products and ultraproducts over finite index sets.
//!
//!     cargo run --example products

use nmatrix::{builtin_family, find_isomorphism, product, ultrafilters, ultraproduct, Family};

fn main() -> Result<(), nmatrix::Error> {
    let u = builtin_family(Family::U, 1, 1)?;
    let mp = builtin_family(Family::MP, 1, 1)?;
    let d = builtin_family(Family::D, 1, 2)?;

    let prod = product(&[u.clone(), mp.clone()])?;
    println!("U11 × MP11: {} values, {} designated", prod.size(), prod.designated().len());

    // On a finite index set every ultrafilter is principal, so the
    // ultraproduct collapses onto the chosen factor.
    let ms = [u, mp, d];
    for f in ultrafilters(ms.len()) {
        let up = ultraproduct(&ms, &f)?;
        let same = find_isomorphism(&up, &ms[f.generator()]).is_some();
        println!("principal at {}: {} values, ≅ factor: {same}", f.generator(), up.size());
    }
    Ok(())
}
