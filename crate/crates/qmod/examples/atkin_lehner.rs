//! Atkin-Lehner representatives of a maximal order: one element omega_d
//! of norm d (times a square) per divisor d | D, each normalizing the
//! order, forming an elementary 2-group of rank 2r.
//!
//! Run with: cargo run -p qmod --example atkin_lehner

use num_bigint::BigInt;
use qmod::order::SearchOutcome;
use qmod::{algebra_of_discriminant, atkin_lehner_group, saturate_to_maximal, standard_order};

fn main() {
    for d in [6i64, 10, 15, 22] {
        let alg = algebra_of_discriminant(&BigInt::from(d)).unwrap();
        let order = saturate_to_maximal(&standard_order(&alg)).unwrap();
        let w = atkin_lehner_group(&order, 50).unwrap();
        println!("D = {d}: |W| = {} (elementary 2-group)", w.group_order);
        for (div, rep) in &w.reps {
            match rep {
                SearchOutcome::Found(q) => {
                    println!("  w_{div} = {q}   (norm {})", q.norm());
                    assert!(order.is_normalized_by(q));
                }
                SearchOutcome::Inconclusive => println!("  w_{div}: INCONCLUSIVE"),
            }
        }
        println!();
    }
}
