//! The full moduli-field bound report: the discriminant-10 algebra is
//! twisting, so the Galois group of the moduli-field extension embeds in
//! C2 x C2, the moduli field is generated by two distinguished quadratic
//! multiplications, and any field of definition L of the endomorphisms
//! over a base K satisfies L = kO.K with Gal(L/K) among 1, C2, C2 x C2.
//!
//! Run with: cargo run -p qmod --example moduli_bounds

use num_bigint::BigInt;
use qmod::{moduli_bound_report, SearchBounds};

fn main() {
    for d in [10i64, 14] {
        let report = moduli_bound_report(&BigInt::from(d), None, SearchBounds::default()).unwrap();
        println!("D = {d} ({})", report.bounds.applied);
        let exponent = if report.twisting.is_twisting {
            report.bounds.twisting_exponent
        } else {
            report.bounds.nontwisting_exponent
        };
        println!("  Galois bound over the base moduli field: C2^{exponent}");
        println!(
            "  quadratic-order rule: {}",
            report.twisting.quadratic_order_rule
        );
        for f in &report.twisting.distinguished_fields {
            println!("  distinguished: {} (m = {})", f.field, f.m);
        }
        println!(
            "  definition fields: {} with Gal(L/K) among {:?}",
            report.prop42.compositum, report.prop42.galois_lk_options
        );
        println!("  conclusive: {}\n", report.conclusive);
    }

    // the full report is stable JSON
    let report = moduli_bound_report(&BigInt::from(10), None, SearchBounds::default()).unwrap();
    println!(
        "{}",
        serde_json::to_string_pretty(&serde_json::to_value(&report).unwrap()).unwrap()
    );
}
