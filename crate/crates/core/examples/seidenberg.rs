//! Seidenberg's field, where -1 is a sum of squares, and the constants that
//! appear when solutions of Y'' + Y = 0 are adjoined.

use realpv::seidenberg::{build_seidenberg, new_constant_demo};

fn main() {
    let f = build_seidenberg().unwrap();
    println!("a' = {}, b' = {}", f.a().derive(), f.b().derive());
    println!("derivative of the relation before reduction: {}", f.relation_derivative());
    let w = f.witness().unwrap();
    println!("witness {w}: verifies = {}", w.verify());
    print!("{}", new_constant_demo().unwrap().to_text());
}
