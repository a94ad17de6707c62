//! Vertices and distances in the local tree of lattice classes: the
//! metric only sees the chosen prime, and homothety never moves a vertex.
//!
//! Run with: cargo run -p qmod --example bruhat_tits_tree

use num_bigint::BigInt;
use num_rational::BigRational;
use qmod::{tree_distance, vertex_of, PlaneLattice};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn main() {
    let p = 3i64;
    let std = PlaneLattice::from_ints([[1, 0], [0, 1]], p).unwrap();
    let step1 = PlaneLattice::from_ints([[1, 0], [0, 3]], p).unwrap();
    let step2 = PlaneLattice::from_ints([[1, 0], [0, 9]], p).unwrap();
    let sideways = PlaneLattice::from_ints([[3, 0], [0, 1]], p).unwrap();

    println!("distances at p = {p}:");
    for (name, l) in [
        ("standard", &std),
        ("diag(1,3)", &step1),
        ("diag(1,9)", &step2),
        ("diag(3,1)", &sideways),
    ] {
        println!(
            "  d(standard, {name}) = {}",
            tree_distance(&std, l).unwrap()
        );
    }
    // diag(1,3) and diag(3,1) are distinct neighbours of the standard vertex
    assert_eq!(tree_distance(&step1, &sideways).unwrap(), 2);

    // homothety by p (or by anything prime to p) fixes the vertex
    let scaled = std.scale(&rat(9, 1));
    assert_eq!(vertex_of(&scaled), vertex_of(&std));
    let unit_scaled = step1.scale(&rat(7, 5));
    assert_eq!(vertex_of(&unit_scaled), vertex_of(&step1));
    println!("homothety classes are scale-invariant, as they should be");

    // at a prime where the lattices agree the distance vanishes
    let l = PlaneLattice::from_ints([[1, 0], [0, 3]], 2).unwrap();
    let m = PlaneLattice::from_ints([[1, 0], [0, 1]], 2).unwrap();
    assert_eq!(tree_distance(&l, &m).unwrap(), 0);
    println!("a 3-part is invisible in the tree at 2");
}
