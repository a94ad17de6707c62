//! Standard orders, reduced discriminants and saturation to maximal
//! orders, with the exact-JSON serialization round trip.
//!
//! Run with: cargo run -p qmod --example maximal_orders

use qmod::order::QuatOrder;
use qmod::{saturate_to_maximal, standard_order, QuaternionAlgebra};

fn main() {
    for (a, b) in [(-1i64, -1i64), (1, 1), (-6, 2), (-10, 2), (-1, 7)] {
        let alg = QuaternionAlgebra::new(a, b).unwrap();
        let std_order = standard_order(&alg);
        println!(
            "Z<i,j> in ({a}, {b}): disc = {} = |4ab|",
            std_order.reduced_discriminant()
        );
        let maximal = saturate_to_maximal(&std_order).unwrap();
        println!(
            "  saturates to a maximal order of disc {} = disc(B)",
            maximal.reduced_discriminant()
        );
        assert_eq!(maximal.reduced_discriminant(), alg.discriminant());
        for row in maximal.lattice().basis() {
            let cells: Vec<String> = row.iter().map(qmod::util::format_rational).collect();
            println!("    [{}]", cells.join(", "));
        }

        // orders serialize exactly; parsing re-validates the ring axioms
        let json = maximal.to_json().unwrap();
        let back = QuatOrder::from_json(&json).unwrap();
        assert_eq!(back, maximal);
    }
    println!("all serialization round trips were exact");
}
