//! Hermite and Laguerre polynomials, connection coefficients and mixed moments.

use idforge::orthopoly::{connection, hermite_table, laguerre, mixed_moment, Case};

fn main() {
    for h in hermite_table(5) {
        println!("H_{} = {}", h.n, h.poly);
    }
    for n in 0..=3 {
        println!("L_{}(x|β) = {}", n, laguerre(n).poly);
    }
    for case in [Case::Normal, Case::Gamma] {
        println!("{case}: radical-free H_(4,n)");
        for n in 0..=4 {
            println!("  n = {n}: {}", connection(case, 4, n).radical_free);
        }
        println!("  E X^2 Y^2 = {}", mixed_moment(case, 2, 2));
    }
}
