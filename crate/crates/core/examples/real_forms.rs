//! Real forms: twisting the circle by -I and the two radical presentations.

use realpv::pv::{build_pv, BuildOptions, EquationClass, LinearODE};
use realpv::real_forms::{h1_enumerate, non_reality_witness, radical_pair, twist, Cocycle, H1Group};
use realpv::tower::DiffTower;

fn main() {
    let k = DiffTower::rational_functions("t");
    for h in [H1Group::Gl1, H1Group::Mu2, H1Group::So2] {
        let classes: Vec<String> = h1_enumerate(h).unwrap().iter().map(|a| a.to_string()).collect();
        println!("H1({}) representatives: {}", h.label(), classes.join(", "));
    }

    let ode = LinearODE::parse(&k, &["1", "0"]).unwrap();
    let circle = build_pv(&k, &ode, EquationClass::Circle, &BuildOptions::default()).unwrap();
    println!("untwisted witness: {:?}", non_reality_witness(circle.ext()).map(|w| w.to_string()));
    let twisted = twist(&circle, &Cocycle::minus_identity(2)).unwrap();
    for line in twisted.ext().describe() {
        println!("  {line}");
    }
    let w = non_reality_witness(twisted.ext()).unwrap();
    println!("twisted witness {w} verifies: {}", w.verify());

    let ode = LinearODE::parse(&k, &["-1/(2*t)"]).unwrap();
    let radical = build_pv(&k, &ode, EquationClass::Radical, &BuildOptions::default()).unwrap();
    let rep = radical_pair(&radical).unwrap();
    print!("{}", rep.to_text());
}
