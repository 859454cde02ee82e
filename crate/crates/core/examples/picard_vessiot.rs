//! Picard-Vessiot extensions for each supported class, with certificates.

use realpv::pv::{build_pv, realify, verify_pv, BuildOptions, EquationClass, LinearODE};
use realpv::tower::DiffTower;

fn main() {
    let k = DiffTower::rational_functions("t");
    let cases = [
        (vec!["-1"], EquationClass::Exp),
        (vec!["-1/(2*t)"], EquationClass::Radical),
        (vec!["1", "0"], EquationClass::Circle),
        (vec!["2", "-3"], EquationClass::ConstCoeff2),
        (vec!["5", "-2"], EquationClass::ConstCoeff2),
    ];
    for (coeffs, class) in cases {
        let ode = LinearODE::parse(&k, &coeffs).unwrap();
        let pv = build_pv(&k, &ode, class, &BuildOptions::default()).unwrap();
        let rep = verify_pv(&pv).unwrap();
        let sols: Vec<String> = pv.solutions().iter().map(|y| y.to_string()).collect();
        println!("{ode}  [{}]", class.label());
        println!("  solutions: {}", sols.join(", "));
        println!("  wronskian: {}", pv.certificates().wronskian);
        println!("  certificates pass: {}", rep.all_passed());
    }

    let ode = LinearODE::parse(&k, &["1", "0"]).unwrap();
    let circle = build_pv(&k, &ode, EquationClass::Circle, &BuildOptions::default()).unwrap();
    let back = realify(&circle.complexify().unwrap()).unwrap();
    println!("realify(complexify(circle)) solutions: {:?}", back.solutions().iter().map(|y| y.canonical()).collect::<Vec<_>>());
}
