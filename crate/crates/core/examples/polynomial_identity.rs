//! Builds both sides of two family identities and compares them exactly.

use idforge::identities::{build_ex1, build_g1};

fn main() {
    let (lhs, rhs) = build_g1(3);
    println!("k = 3");
    println!("  lhs = {lhs}");
    println!("  rhs = {rhs}");
    println!("  equal: {}", lhs == rhs);

    // Negative m leaves the polynomials behind.
    let (lhs, rhs) = build_ex1(2, -2);
    println!("n = 2, m = -2");
    println!("  lhs = {lhs}");
    println!("  rhs = {rhs}");
    println!("  equal: {}", lhs == rhs);
    if let Some(d) = lhs.first_difference(&rhs) {
        println!("  {d}");
    }
}
