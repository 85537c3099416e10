//! A mediating matrix that covers two matrices sound for the same rules.
//!
//!     cargo run --example witness_chain

use nmatrix::{parse_sequent, witness_chain, BitSet, Nmatrix, PairMode, Signature};

fn negation(third: &[usize]) -> Result<Nmatrix, nmatrix::Error> {
    let sig = Signature::new([("¬", 1)])?;
    let values = vec!["⊥0".to_string(), "⊤0".into(), "⊤1".into()];
    Nmatrix::from_fn(sig, values, BitSet::from_indices(3, [1, 2]), |_, a| match a[0] {
        0 => BitSet::singleton(3, 1),
        1 => BitSet::singleton(3, 0),
        _ => BitSet::from_indices(3, third.iter().copied()),
    })
}

fn main() -> Result<(), nmatrix::Error> {
    let m1 = negation(&[0, 2])?;
    let m2 = negation(&[1, 2])?;
    let sig = m1.signature().clone();
    let rules = vec![parse_sequent("|- p, ¬(p)", &sig)?, parse_sequent("¬(¬(p)) |- p", &sig)?];

    for (a, b, mode) in [(&m1, &m2, PairMode::LookBehind), (&m2, &m1, PairMode::LookAhead)] {
        match witness_chain(a, b, &rules, mode) {
            Some(ch) => {
                println!("{mode:?}:\n{}", ch.mediator);
                println!("  onto second: {}", ch.onto_second);
                println!("  onto first:  {}", ch.onto_first);
            }
            None => println!("{mode:?}: none"),
        }
    }
    Ok(())
}
