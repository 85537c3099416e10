//! Rule soundness, rule sets, and substitution instances over few variables.
//!
//!     cargo run --example rules

use nmatrix::{
    builtin_family, check_rule_under_all_substitutions, parse_sequent, rule_sound, ruleset_sound,
    Family,
};

fn main() -> Result<(), nmatrix::Error> {
    let i11 = builtin_family(Family::I, 1, 1)?;
    let sig = i11.signature();
    let mp = parse_sequent("p, ->(p,q) |- q", sig)?;
    let id = parse_sequent("|- ->(p,p)", sig)?;
    println!("MP sound in I11: {}", rule_sound(&i11, &mp)?.holds);
    println!("id sound in I11: {}", rule_sound(&i11, &id)?.holds);

    let u = builtin_family(Family::U, 1, 1)?;
    let rs = ruleset_sound(&u, &[id.clone(), mp])?;
    if let Some((i, w)) = rs.failure {
        println!("U11: rule {i} fails at {}", w.display(&u));
    }

    // This rule fails in MP11, yet every instance with a single variable
    // holds: one variable is not enough to pin down the logic.
    let mp11 = builtin_family(Family::MP, 1, 1)?;
    let rule = parse_sequent("->(p0,p1), ->(->(p0,p0),p2), ->(->(p1,p1),p2) |- p2", sig)?;
    let rep = check_rule_under_all_substitutions(&mp11, &rule, 1)?;
    println!(
        "rule holds: {}; {} instances, all hold: {}",
        rep.verdict.holds,
        rep.instances.len(),
        rep.all_instances_hold()
    );
    for (_, inst, v) in &rep.instances {
        println!("  {inst}: {}", v.holds);
    }
    Ok(())
}
