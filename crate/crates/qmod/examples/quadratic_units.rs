//! Roots of unity in imaginary quadratic orders and the generator list
//! for the 2-torsion behind the moduli bounds.
//!
//! Run with: cargo run -p qmod --example quadratic_units

use num_bigint::BigInt;
use qmod::{make_field, roots_of_unity, u0_generators, QuadField, QuadOrder};

fn main() {
    for d in [1i64, 3, 10, 6, 15] {
        let field = make_field(&BigInt::from(d)).unwrap();
        let order = QuadOrder::maximal(field.clone());
        let units = roots_of_unity(&order).unwrap();
        println!(
            "Q(sqrt({})): fundamental discriminant {}, omega = {}, omega_odd = {}",
            field.radicand, field.fundamental_discriminant, units.omega, units.omega_odd
        );
        let gens = u0_generators(&BigInt::from(d), &order).unwrap();
        for g in &gens {
            println!(
                "  generator class: {} + {} sqrt({})",
                g.x, g.y, field.radicand
            );
        }
    }

    // non-maximal orders lose the extra units: conductor 2 in Q(sqrt(-3))
    let field = QuadField::new(BigInt::from(-3)).unwrap();
    let suborder = QuadOrder::new(field, BigInt::from(2)).unwrap();
    let units = roots_of_unity(&suborder).unwrap();
    println!(
        "conductor-2 order of Q(sqrt(-3)): omega = {}, omega_odd = {}",
        units.omega, units.omega_odd
    );
}
