//! Compares the three P_S routes (definitions, simplified brute force,
//! closed form) on every small parameter set.

use rmacode::deception::{p_deception_from_definitions, p_substitution_bruteforce, p_substitution_closed_form};
use rmacode::{Error, RmCode, SubcodeParams};

fn main() -> rmacode::Result<()> {
    for m in 1..=4 {
        for r in 1..=m.min(2) {
            let code = RmCode::new(m, r)?;
            for source_len in 1..=5 {
                for tag_len in 1..=source_len.min(3) {
                    let params = SubcodeParams::new(source_len, tag_len);
                    if params.check(&code).is_err() {
                        continue;
                    }
                    let def = p_deception_from_definitions(&code, &params)?;
                    let brute = p_substitution_bruteforce(&code, &params)?;
                    let closed = match p_substitution_closed_form(&code, &params) {
                        Ok(rep) => rep.p_s.to_string(),
                        Err(Error::NoWitness { .. }) => "-".into(),
                        Err(e) => return Err(e),
                    };
                    println!(
                        "m={m} r={r} M={source_len} l={tag_len}: definition={} brute={} closed={closed}",
                        def.p_s, brute.p_s
                    );
                }
            }
        }
    }
    Ok(())
}
