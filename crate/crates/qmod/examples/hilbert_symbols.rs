//! Hilbert symbols, ramification sets and the product formula.
//!
//! Run with: cargo run -p qmod --example hilbert_symbols

use num_bigint::BigInt;
use num_rational::BigRational;
use qmod::{hilbert_symbol, ramified_places, Place, QuaternionAlgebra};

fn r(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

fn main() {
    // The Hamilton quaternions ramify at 2 and at infinity.
    for (a, b) in [(-1i64, -1i64), (-10, 2), (2, 5), (1, 7), (-6, 2)] {
        let places: Vec<Place> = vec![
            Place::Infinite,
            Place::finite(2),
            Place::finite(3),
            Place::finite(5),
            Place::finite(7),
        ];
        println!("(a, b) = ({a}, {b})");
        for v in &places {
            println!("  ({a}, {b})_{v} = {}", hilbert_symbol(&r(a), &r(b), v));
        }
        let ram = ramified_places(&r(a), &r(b)).unwrap();
        let names: Vec<String> = ram.iter().map(|v| v.to_string()).collect();
        println!("  ramified exactly at: {{{}}}", names.join(", "));

        // the symbols multiply to +1 over all places
        let product: i32 = ram
            .iter()
            .map(|v| hilbert_symbol(&r(a), &r(b), v))
            .product();
        assert_eq!(product, 1);

        let alg = QuaternionAlgebra::new(a, b).unwrap();
        println!(
            "  reduced discriminant {} ({})\n",
            alg.discriminant(),
            if alg.is_division() {
                "division"
            } else {
                "split"
            }
        );
    }

    // Isomorphism is equality of ramification sets, not of presentations.
    let b10 = QuaternionAlgebra::new(-10, 2).unwrap();
    let other = QuaternionAlgebra::new(2, 5).unwrap();
    assert!(b10.is_isomorphic(&other));
    println!("(-10, 2) and (2, 5) present the same algebra of discriminant 10");
}
