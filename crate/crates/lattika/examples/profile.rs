use lattika::embed::*;
use lattika::lattice::*;
use lattika::linalg::int;
use std::time::Instant;

fn main() {
    let m = lattice_m();
    let t0 = Instant::now();
    let ctx = EichlerContext::new(&m).unwrap();
    eprintln!("ctx: {:?}", t0.elapsed());

    let t0 = Instant::now();
    let form = ctx.disc().form().clone();
    let els = form.elements().unwrap();
    eprintln!("elements({}): {:?}", els.len(), t0.elapsed());

    let t0 = Instant::now();
    let classes: Vec<_> = els
        .iter()
        .filter(|e| {
            form.element_order(e) == int(2)
                && form.q(e) == lattika::linalg::rat(3, 2)
        })
        .cloned()
        .collect();
    eprintln!("classes({}): {:?}", classes.len(), t0.elapsed());

    let t0 = Instant::now();
    let orbits = lattika::disc::tau_orbit_partition(&form, &classes).unwrap();
    eprintln!("tau partition({} orbits): {:?}", orbits.len(), t0.elapsed());
    for o in &orbits { eprintln!("  orbit size {}", o.len()); }

    let t0 = Instant::now();
    let v1 = ctx.canonical_vector(&int(-2), &int(2), &orbits[0][0]).unwrap();
    let v2 = ctx.canonical_vector(&int(-2), &int(2), &orbits[1][0]).unwrap();
    eprintln!("canonical vectors: {:?}", t0.elapsed());

    let t0 = Instant::now();
    let merged = merge_via_complement(&m, &v1, &v2).unwrap();
    eprintln!("merge: {} in {:?}", merged.is_some(), t0.elapsed());
}
