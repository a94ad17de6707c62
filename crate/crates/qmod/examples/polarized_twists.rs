//! Polarized orders (O, mu) and their twists: the search for trace-zero
//! mu-anticommuting normalizers of negative norm, the groups U0, V0 and
//! the stable group W0 they generate.
//!
//! Run with: cargo run -p qmod --example polarized_twists

use num_bigint::BigInt;
use qmod::{
    algebra_of_discriminant, find_polarization, find_twists, saturate_to_maximal, stable_group,
    standard_order, u0_structure,
};

fn main() {
    // D = 10 is twisting, D = 14 is not: the group theory splits cleanly.
    for d in [10i64, 14] {
        let alg = algebra_of_discriminant(&BigInt::from(d)).unwrap();
        let order = saturate_to_maximal(&standard_order(&alg)).unwrap();
        let polarized = find_polarization(&order, 40)
            .unwrap()
            .found()
            .expect("a polarization always exists");
        println!("D = {d}: mu = {}", polarized.mu());

        let u0 = u0_structure(&polarized).unwrap();
        println!(
            "  R_mu: Q(sqrt({})) of conductor {}, omega = {}, omega_odd = {}",
            u0.r_mu.field.radicand, u0.r_mu.conductor, u0.omega, u0.omega_odd
        );
        println!("  U0 = C2^{}", u0.rank);

        let report = find_twists(&polarized, 25).unwrap();
        if report.twists.is_empty() {
            println!("  no twists (conclusive: {})", report.conclusive);
        } else {
            for t in &report.twists {
                println!("  twist chi = {} with label m = {}", t.element, t.label);
                assert!(polarized.mu().anticommutes_with(&t.element));
            }
        }
        let w0 = stable_group(&polarized, &report);
        let elems: Vec<String> = w0.elements.iter().map(|e| e.to_string()).collect();
        println!(
            "  W0 has order {} with divisor labels {{{}}}\n",
            w0.order,
            elems.join(", ")
        );
    }
}
