//! Every specialized entry at one small cell, with its parent recheck.

use idforge::identities::{registry, verify_descriptor, Params};

fn main() -> idforge::error::Result<()> {
    for d in registry().iter().filter(|d| !d.id.starts_with("THM1.")) {
        let p: Params = d.params.iter().map(|s| (s.name.to_string(), 4.clamp(s.min, s.max))).collect();
        if d.check_params(&p).is_err() {
            continue;
        }
        let (lhs, rhs) = d.build(&p)?;
        let r = verify_descriptor(d, &p)?;
        let parent = d.derivation.map(|x| x.parent).unwrap_or("-");
        println!("{:<14} {:<6} parent {:<8} lhs {lhs}  rhs {rhs}", d.id, r.status, parent);
    }
    Ok(())
}
