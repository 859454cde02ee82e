//! Relation ideals, defining sets and the action of group elements.

use realpv::arith::{GaussRat, Matrix};
use realpv::group::GaloisGroup;
use realpv::pv::{build_pv, BuildOptions, EquationClass, LinearODE};
use realpv::tower::DiffTower;

fn main() {
    let k = DiffTower::rational_functions("t");
    for (coeffs, class) in [(vec!["-1"], EquationClass::Exp), (vec!["-1/(2*t)"], EquationClass::Radical), (vec!["1", "0"], EquationClass::Circle)] {
        let ode = LinearODE::parse(&k, &coeffs).unwrap();
        let pv = build_pv(&k, &ode, class, &BuildOptions::default()).unwrap();
        let g = GaloisGroup::new(&pv).unwrap();
        println!("{ode}");
        println!("  relations: {:?}", g.relations().canonical());
        println!("  defining set: {:?}", g.defining().canonical());
    }

    let ode = LinearODE::parse(&k, &["1", "0"]).unwrap();
    let pv = build_pv(&k, &ode, EquationClass::Circle, &BuildOptions::default()).unwrap();
    let g = GaloisGroup::new(&pv).unwrap();
    let rot = g
        .element(Matrix::from_rows(vec![
            vec![GaussRat::frac(3, 5), GaussRat::frac(-4, 5)],
            vec![GaussRat::frac(4, 5), GaussRat::frac(3, 5)],
        ]))
        .unwrap();
    let s = pv.ext().var("s").unwrap();
    println!("rotation by (3/5, 4/5) sends s to {}", g.apply(&rot, &s).unwrap());
    let twice = g.compose(&rot, &rot).unwrap();
    println!("its square is {} and sends s to {}", twice.matrix, g.apply(&twice, &s).unwrap());
    println!("diag(2, 2) is a member: {}", g.is_member(&Matrix::from_ints(&[&[2, 0], &[0, 2]])));
}
