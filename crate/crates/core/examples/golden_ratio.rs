//! Fibonacci and Lucas numbers against powers of the golden ratio in Q(sqrt(5)).

use idforge::exactnum::{QuadExtNum, Scalar};
use idforge::identities::{fib_lucas, params, verify};

fn main() -> idforge::error::Result<()> {
    let phi = QuadExtNum::golden_phi();
    let one_plus_phi = phi.one_like() + phi.clone();
    for n in 0..=10u64 {
        let fl = fib_lucas(n);
        let p = one_plus_phi.pow(n as u32);
        let check = &fl.l * &fl.l - 5 * &fl.f * &fl.f;
        println!("n={n:2} F={:<3} L={:<4} L^2-5F^2={check:>3}  (1+phi)^n = {p}", fl.f, fl.l);
    }
    for id in ["COR-PHI-LUC", "COR-PHI-FIB", "R-G1-LUC", "R-G1-FIB"] {
        let r = verify(id, &params(&[("k", 12)]))?;
        println!("{id} at k=12: {}", r.status);
    }
    Ok(())
}
