//! The twisting dichotomy for every admissible discriminant up to 200:
//! which algebras admit a presentation (-D, m / Q) with m | D.
//!
//! Run with: cargo run -p qmod --example twisting_scan

use num_bigint::BigInt;
use qmod::algebra::validate_indefinite_discriminant;
use qmod::twisting_classification;

fn main() {
    let mut twisting = 0;
    let mut total = 0;
    println!("{:>5}  {:<12} parameters", "D", "twisting?");
    for d in 2i64..=200 {
        let d = BigInt::from(d);
        if validate_indefinite_discriminant(&d).is_err() {
            continue;
        }
        let t = twisting_classification(&d).unwrap();
        total += 1;
        if t.is_twisting {
            twisting += 1;
        }
        let params: Vec<String> = t.twisting_params.iter().map(|m| m.to_string()).collect();
        println!(
            "{:>5}  {:<12} {}",
            t.d,
            if t.is_twisting { "yes" } else { "no" },
            params.join(", ")
        );
    }
    println!("\n{twisting} of {total} admissible discriminants up to 200 are twisting");
}
