//! The Galois correspondence for y' = y: subgroups, fixed fields and the
//! failure of weak normality over K(e^3).

use realpv::correspondence::{check_correspondence, fixed_field, weak_normality_demo, Descriptor, IntermediateField, Subgroup, Window};
use realpv::group::GaloisGroup;
use realpv::pv::{build_pv, BuildOptions, EquationClass, LinearODE};
use realpv::tower::DiffTower;

fn main() {
    let k = DiffTower::rational_functions("t");
    let ode = LinearODE::parse(&k, &["-1"]).unwrap();
    let pv = build_pv(&k, &ode, EquationClass::Exp, &BuildOptions::default()).unwrap();
    let g = GaloisGroup::new(&pv).unwrap();
    let w = Window::default();

    let lattice: Vec<Subgroup> = [Descriptor::Full, Descriptor::MuN(6), Descriptor::MuN(3), Descriptor::MuN(2), Descriptor::Trivial]
        .into_iter()
        .map(|d| Subgroup::from_descriptor(&g, d).unwrap())
        .collect();
    for h in &lattice {
        println!("{:>8} -> {}", h.label(), fixed_field(&g, h, w).unwrap().describe());
    }
    let rep = check_correspondence(&g, &lattice, w).unwrap();
    println!("correspondence checks pass: {} ({} checks)", rep.all_passed(), rep.checks.len());

    let f = IntermediateField::parse(&pv, &["e^3"]).unwrap();
    let rep = weak_normality_demo(&g, &f).unwrap();
    println!("over {}: {} real automorphisms, {} complexified elements", f.describe(), rep.data["real automorphisms"].as_str().unwrap(), rep.data["complexified elements"].as_str().unwrap());
}
