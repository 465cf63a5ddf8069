//! Closed-form P_I and P_S for RM(m,1), M = 4, l = 3, over m = 4..=8,
//! checked against the simplified brute force.

use rmacode::deception::{p_substitution_bruteforce, p_substitution_closed_form, render_table};
use rmacode::{RmCode, SubcodeParams};

fn main() -> rmacode::Result<()> {
    let params = SubcodeParams::new(4, 3);
    let mut reports = Vec::new();
    for m in 4..=8 {
        let code = RmCode::new(m, 1)?;
        let closed = p_substitution_closed_form(&code, &params)?;
        let brute = p_substitution_bruteforce(&code, &params)?;
        assert_eq!(closed.p_s, brute.p_s);
        reports.push(closed);
    }
    print!("{}", render_table(&reports));
    Ok(())
}
