//! Verifies the theorem families at a few cells, then a deliberately broken copy.

use idforge::identities::{lookup, params, verify, verify_descriptor};

fn main() -> idforge::error::Result<()> {
    let cells: [(&str, &[(&str, i64)]); 6] = [
        ("THM1.i", &[("k", 20)]),
        ("THM1.ii", &[("k", 20)]),
        ("THM1.iii", &[("n", 6), ("m", 9)]),
        ("THM1.iii", &[("n", 6), ("m", -4)]),
        ("THM1.iv", &[("n", 10)]),
        ("THM1.v", &[("n", 10)]),
    ];
    for (id, p) in cells {
        let r = verify(id, &params(p))?;
        let tag = if r.empirical { " (empirical)" } else { "" };
        println!("{id} {:?}: {}{tag} in {:.2} ms", r.params, r.status, r.elapsed_ms);
    }

    let broken = lookup("THM1.v")?.with_perturbed_rhs();
    let r = verify_descriptor(&broken, &params(&[("n", 4)]))?;
    println!("perturbed THM1.v: {} ({})", r.status, r.witness.unwrap_or_default());
    Ok(())
}
