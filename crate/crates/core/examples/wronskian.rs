//! Wronskians decide linear independence over the constants.

use realpv::tower::{DiffTower, GeneratorKind};
use realpv::wronskian::{independent_over_constants, wronskian_det, wronskian_matrix};

fn main() {
    let l = DiffTower::rational_functions("t")
        .adjoin_text(&[
            ("c", GeneratorKind::Algebraic, "-s", None),
            ("s", GeneratorKind::Algebraic, "c", Some("s^2 + c^2 - 1")),
        ])
        .unwrap();
    let s = l.var("s").unwrap();
    let c = l.var("c").unwrap();
    let m = wronskian_matrix(&[s.clone(), c.clone()]).unwrap();
    for row in m.rows() {
        println!("  {}", row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("  "));
    }
    println!("Wr(s, c) = {}", wronskian_det(&[s.clone(), c.clone()]).unwrap());

    let mixed = l.parse("2*s - 3*c").unwrap();
    let family = [s, c, mixed];
    println!("Wr(s, c, 2s - 3c) = {}", wronskian_det(&family).unwrap());
    println!("independent: {}", independent_over_constants(&family));

    let t = l.parse("t").unwrap();
    let poly = [l.one(), t.clone(), &t * &t];
    println!("Wr(1, t, t^2) = {}", wronskian_det(&poly).unwrap());
}
