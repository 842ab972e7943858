//! Exact combinatorics and the two quadratic fields.

use idforge::exactnum::{binomial, double_factorial, rat, rising_factorial, QuadExtNum, Scalar};

fn main() -> idforge::error::Result<()> {
    println!("binom(10, 4) = {}", binomial(10, 4));
    println!("binom(-3, 2) = {}", binomial(-3, 2));
    for n in [-1, 0, 7, 8] {
        println!("{n}!! = {}", double_factorial(n)?);
    }

    let x = rat(1, 2);
    println!("(1/2)^(4)  = {}", rising_factorial(&x, 4)?);
    println!("(1/2)^(-2) = {}", rising_factorial(&x, -2)?);
    match rising_factorial(&rat(1, 1), -1) {
        Ok(v) => println!("(1)^(-1) = {v}"),
        Err(e) => println!("(1)^(-1): {e}"),
    }

    let i = QuadExtNum::i();
    let one_plus_i = i.embed(&rat(1, 1)) + i.clone();
    println!("(1+i)^8 = {}", one_plus_i.pow(8));

    let phi = QuadExtNum::golden_phi();
    println!("phi = {phi}, 1/(1+phi) = {}", (phi.one_like() + phi.clone()).checked_inv()?);
    Ok(())
}
