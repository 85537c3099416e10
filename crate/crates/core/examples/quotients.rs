//! Compatible partitions and the quotients that keep a rule sound.
//!
//!     cargo run --example quotients

use nmatrix::{
    builtin_family, enumerate_compatible_partitions, parse_sequent, quotient, restriction,
    sound_compatible_quotients, Family, Nmatrix, Partition,
};

fn main() -> Result<(), nmatrix::Error> {
    // D13 with the mixed cells among ⊤0,⊤1 and ⊤1,⊤2 widened to all of D.
    let d = builtin_family(Family::D, 1, 3)?;
    let top = d.designated().clone();
    let m = Nmatrix::from_fn(d.signature().clone(), d.values().to_vec(), top.clone(), |_, a| {
        match (a[0], a[1]) {
            (1, 2) | (2, 1) | (2, 3) | (3, 2) => top.clone(),
            _ => d.apply("->", a).clone(),
        }
    })?;

    for p in enumerate_compatible_partitions(&m)? {
        println!("compatible: {}", p.display(&m));
    }
    let id = parse_sequent("|- ->(p,p)", m.signature())?;
    for (p, q) in sound_compatible_quotients(&m, &[id])? {
        println!("sound: {} → {} values", p.display(&m), q.size());
    }

    let p = Partition::from_names(&m, &[vec!["⊤0", "⊤1"]])?;
    println!("{}", quotient(&m, &p)?);

    let d21 = builtin_family(Family::D, 2, 1)?;
    match restriction(&d21, &d21.set_of(&["⊥0", "⊤0"])?) {
        Ok(r) => println!("{r}"),
        Err(e) => println!("restriction: {e}"),
    }
    Ok(())
}
