//! Strict homomorphisms, their images, and searching for maps.
//!
//!     cargo run --example homomorphisms

use nmatrix::{
    builtin_family, find_isomorphism, find_strict_hom, image, is_covering, is_strict,
    kernel_partition, Family, HomFlags, HomMap,
};

fn main() -> Result<(), nmatrix::Error> {
    let d12 = builtin_family(Family::D, 1, 2)?;
    let d22 = builtin_family(Family::D, 2, 2)?;
    let u11 = builtin_family(Family::U, 1, 1)?;

    // Collapse every value onto its designation class.
    let h = HomMap::from_names(&d12, &u11, &[("⊥0", "⊥0"), ("⊤0", "⊤0"), ("⊤1", "⊤0")])?;
    println!("h = {h}");
    println!("strict: {}, covering: {}", is_strict(&h), is_covering(&h));
    println!("kernel: {}", kernel_partition(&h).display(&d12));
    println!("{}", image(&h)?);

    let flags = HomFlags {
        covering: true,
        ..HomFlags::default()
    };
    match find_strict_hom(&d22, &u11, flags) {
        Some(g) => println!("covering D22 → U11: {g}"),
        None => println!("no covering D22 → U11"),
    }
    println!("covering D12 → U11 exists: {}", find_strict_hom(&d12, &u11, flags).is_some());
    println!("D12 ≅ D12: {}", find_isomorphism(&d12, &d12).is_some());
    Ok(())
}
