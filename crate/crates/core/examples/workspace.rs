//! Load a workspace from text and run CLI commands against it in-process.
//!
//!     cargo run --example workspace

use nmatrix::cli::{parse_workspace, run, Args};
use nmatrix::validate_nmatrix;

const TEXT: &str = r#"
signature: -> /2
family MP 1 1 as MP11
nmatrix B {
  values: 0 1 ;
  designated: 1 ;
  table -> { 0 0 : 1 ; 0 1 : 1 ; 1 0 : 0 ; 1 1 : 1 ; }
}
rules MP { "p, ->(p,q) |- q" }
hom c from MP11 to B { ⊥0 : 0 ; ⊤0 : 1 }
"#;

fn main() {
    let ws = parse_workspace(TEXT).expect("workspace parses");
    println!("matrices: {:?}", ws.matrix_names().collect::<Vec<_>>());

    for argv in [
        ["nmx", "-", "entails", "B", "->(->(p,q),p) |- p"],
        ["nmx", "-", "find-hom", "B", "MP11"],
        ["nmx", "-", "ruleset-sound", "B", "MP"],
    ] {
        let args = <Args as clap::Parser>::parse_from(argv);
        let out = run(&args, &ws).expect("command runs");
        print!("[exit {}] {}", out.code, out.text);
    }

    // Descriptions can be checked before they become matrices.
    let mut raw = nmatrix::RawNmatrix {
        signature: ws.signature().unwrap().clone(),
        values: vec!["0".into(), "1".into()],
        designated: vec!["1".into(), "2".into()],
        ..Default::default()
    };
    raw.tables.insert("->".into(), vec![(vec!["0".into(), "0".into()], vec![])]);
    for v in validate_nmatrix(&raw) {
        println!("invalid: {v}");
    }
}
