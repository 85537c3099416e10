//! Decide multiple-conclusion sequents in single matrices and in classes.
//!
//!     cargo run --example entailment

use nmatrix::{builtin_family, entails, entails_class, parse_sequent, Family};

fn main() -> Result<(), nmatrix::Error> {
    let mp = builtin_family(Family::MP, 1, 1)?;
    let u = builtin_family(Family::U, 1, 1)?;
    let sig = mp.signature();

    for text in ["p, ->(p,q) |- q", "|- p, ->(p,q)", "->(p,q), ->(q,r) |- ->(p,r)"] {
        let s = parse_sequent(text, sig)?;
        for (name, m) in [("MP11", &mp), ("U11", &u)] {
            let v = entails(m, &s)?;
            match &v.witness {
                None => println!("{name}: {s} holds"),
                Some(w) => println!("{name}: {s} fails at {}", w.display(m)),
            }
        }
    }

    // A class entails what each member entails.
    let s = parse_sequent("p, ->(p,q) |- q", sig)?;
    let class = entails_class(&[mp.clone(), u.clone()], &s)?;
    if let Some((i, w)) = &class.failure {
        let m = [&mp, &u][*i];
        println!("class: refuted by member {i} at {}", w.display(m));
    }
    Ok(())
}
