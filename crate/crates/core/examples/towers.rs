//! Differential towers: Q(t)(e) with e' = e, and the circle tower with its
//! conjugation and constant scan.

use realpv::tower::{constant_scan, DiffTower, GeneratorKind};

fn main() {
    let k = DiffTower::rational_functions("t");
    let e = k.parse("1").unwrap();
    let l = k.adjoin_exponential("e", &e).unwrap();
    let x = l.parse("t^2*e + 1/t").unwrap();
    println!("d/dt ({x}) = {}", x.derive());

    let circle = k
        .adjoin_text(&[
            ("c", GeneratorKind::Algebraic, "-s", None),
            ("s", GeneratorKind::Algebraic, "c", Some("s^2 + c^2 - 1")),
        ])
        .unwrap();
    for line in circle.describe() {
        println!("  {line}");
    }
    let g = realpv::tower::complexify(&circle).unwrap();
    let w = g.parse("c + i*s").unwrap();
    println!("w = {w}, w' = {}, conj(w) = {}, w*conj(w) = {}", w.derive(), w.conj(), &w * &w.conj());
    let found = constant_scan(&circle, 3, 1);
    println!("constants found up to degree 3: {}", found.len());
}
