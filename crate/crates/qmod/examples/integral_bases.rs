//! Integral quaternion bases: the bounded search for anticommuting pairs
//! iota^2 = a, eta^2 = b inside an order, square-root enumeration, and
//! the divisibility constraint N | 4ab on Eichler levels.
//!
//! Run with: cargo run -p qmod --example integral_bases

use num_bigint::BigInt;
use qmod::order::{intersect, SearchOutcome};
use qmod::{
    check_basis_divisibility, endomorphism_order, enumerate_sqrt, find_anticommuting_basis,
    PlaneLattice,
};

fn main() {
    // Eichler orders of level N in M_2(Q), presented as (1, 1):
    // a pair with iota^2 = eta^2 = 1 exists for N = 1 and 2, and the
    // divisibility N | 4ab = 4 is necessary. The boundary case N = 4
    // satisfies the divisibility yet admits no pair (a dyadic parity
    // obstruction), so the search stays inconclusive there.
    let std_lattice = PlaneLattice::from_ints([[1, 0], [0, 1]], 2).unwrap();
    let o_std = endomorphism_order(&std_lattice).unwrap();
    for n in [1i64, 2, 3, 4, 6] {
        let other =
            endomorphism_order(&PlaneLattice::from_ints([[1, 0], [0, n]], 2).unwrap()).unwrap();
        let eichler = intersect(&o_std, &other).unwrap();
        assert_eq!(eichler.eichler_level(), &BigInt::from(n));
        let divides =
            check_basis_divisibility(&BigInt::from(n), &BigInt::from(1), &BigInt::from(1));
        match find_anticommuting_basis(&eichler, 50).unwrap() {
            SearchOutcome::Found((iota, eta)) => {
                assert!(divides, "a found pair forces N | 4ab");
                println!("level {n}: found iota = {iota}, eta = {eta}");
            }
            SearchOutcome::Inconclusive => {
                println!(
                    "level {n}: inconclusive at height 50 (N | 4ab is {})",
                    if divides { "satisfied" } else { "violated" }
                );
            }
        }
    }

    // all square roots of -1 of height 1 in the Hurwitz-saturated order
    let alg = qmod::QuaternionAlgebra::new(-1, -1).unwrap();
    let hurwitz = qmod::saturate_to_maximal(&qmod::standard_order(&alg)).unwrap();
    let roots = enumerate_sqrt(&hurwitz, &BigInt::from(-1), 1).unwrap();
    println!("\nsquare roots of -1 of height <= 1 in the maximal order of (-1,-1):");
    for root in &roots {
        println!("  {root}");
    }
}
