//! Helpers shared by the integration tests.
#![allow(dead_code)]

use idforge::exactnum::rat_int;
use idforge::polyalg::{Monomial, MultiPoly, Var};

/// `E X^m Y^l` for a standard normal pair with correlation ρ, by brute force
/// over the perfect matchings of m copies of X and l copies of Y. Each pair
/// inside one group weighs 1, each X-Y pair weighs ρ.
pub fn isserlis_moment(m: usize, l: usize) -> MultiPoly {
    let labels: Vec<bool> = std::iter::repeat_n(false, m).chain(std::iter::repeat_n(true, l)).collect();
    // counts[e] = number of matchings with e cross pairs
    let mut counts = vec![0i64; m.min(l) + 1];
    let mut used = vec![false; labels.len()];
    matchings(&labels, &mut used, 0, &mut counts);
    counts
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0)
        .map(|(e, c)| MultiPoly::term(rat_int(*c), Monomial::var(Var::Rho, e as u32)))
        .sum()
}

fn matchings(labels: &[bool], used: &mut [bool], cross: usize, counts: &mut [i64]) {
    let Some(first) = used.iter().position(|u| !u) else {
        counts[cross] += 1;
        return;
    };
    used[first] = true;
    for other in first + 1..labels.len() {
        if used[other] {
            continue;
        }
        used[other] = true;
        let c = cross + usize::from(labels[first] != labels[other]);
        matchings(labels, used, c, counts);
        used[other] = false;
    }
    used[first] = false;
}

/// Runs the command line in process: (exit code, stdout, stderr).
pub fn run_cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = idforge::cli::run(std::iter::once("idforge").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}
