//! Distance ideals of maximal orders in M_2(Q) and their agreement with
//! the tree metric: rho(O, O') is the index of the intersection, the
//! level of the intersection, and the product of local tree distances.
//!
//! Run with: cargo run -p qmod --example distance_ideals

use num_bigint::BigInt;
use num_traits::One;
use qmod::order::intersect;
use qmod::{distance_ideal, endomorphism_order, narrow_picard_quotient, tree_distance, PlaneLattice};

fn main() {
    // Over Q the narrow Picard quotient is trivial, so Eichler orders of a
    // fixed level form a single conjugacy type and the distance ideal
    // classifies maximal orders up to conjugation.
    let pic = narrow_picard_quotient(&BigInt::from(6));
    assert_eq!(pic.eichler_type_count, 1);

    let pairs: [([[i64; 2]; 2], [[i64; 2]; 2]); 4] = [
        ([[1, 0], [0, 1]], [[1, 0], [0, 9]]),
        ([[1, 0], [0, 1]], [[2, 1], [0, 6]]),
        ([[1, 2], [0, 5]], [[3, 0], [1, 4]]),
        ([[1, 0], [0, 1]], [[1, 0], [0, 1]]),
    ];
    for (rows1, rows2) in pairs {
        let o1 = endomorphism_order(&PlaneLattice::from_ints(rows1, 2).unwrap()).unwrap();
        let o2 = endomorphism_order(&PlaneLattice::from_ints(rows2, 2).unwrap()).unwrap();
        let rho = distance_ideal(&o1, &o2).unwrap();
        let level = intersect(&o1, &o2).unwrap().eichler_level().clone();
        println!("L1 = {rows1:?}, L2 = {rows2:?}");
        println!("  rho(End L1, End L2) = ({})", rho.generator);
        println!("  level of the intersection = {level}");
        assert_eq!(rho.generator, level);

        // per-prime tree distances multiply back to the global ideal
        let mut product = BigInt::one();
        for p in [2i64, 3, 5, 7, 11, 13] {
            let d = tree_distance(
                &PlaneLattice::from_ints(rows1, p).unwrap(),
                &PlaneLattice::from_ints(rows2, p).unwrap(),
            )
            .unwrap();
            if d > 0 {
                println!("  tree distance at {p}: {d}");
            }
            product *= BigInt::from(p).pow(d);
        }
        assert_eq!(product, rho.generator);
        println!("  product of p^distance = {product}\n");
    }
}
