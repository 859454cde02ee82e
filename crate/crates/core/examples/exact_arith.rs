//! Gaussian rationals, polynomials and a Groebner basis.

use realpv::arith::{buchberger, parse_gauss, parse_poly, Ring, DEFAULT_BUDGET};

fn main() {
    let z = parse_gauss("3/5 + 4/5*i").unwrap();
    println!("z = {z}, conj(z) = {}, z*conj(z) = {}", z.conj(), &z * &z.conj());

    let ring = Ring::new(&["x", "y"]);
    let circle = parse_poly(&ring, "x^2 + y^2 - 1").unwrap();
    let line = parse_poly(&ring, "x - y").unwrap();
    let gb = buchberger(&[circle, line], DEFAULT_BUDGET).unwrap();
    println!("groebner basis of (x^2 + y^2 - 1, x - y):");
    for r in gb.rules() {
        println!("  {}", r.as_poly());
    }
    let p = parse_poly(&ring, "x^3 + y").unwrap();
    println!("normal form of x^3 + y: {}", gb.normal_form(&p));
}
