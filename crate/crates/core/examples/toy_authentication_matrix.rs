//! The authentication matrix of the smallest example, RM(2,1) with M = 2 and
//! l = 1, and its deception probabilities computed from the definitions.

use rmacode::{authentication_matrix, p_deception_from_definitions, RmCode, SubcodeParams};

fn main() -> rmacode::Result<()> {
    let code = RmCode::new(2, 1)?;
    let params = SubcodeParams::new(2, 1);

    for s in ["00", "10", "01", "11"] {
        let s = s.parse().unwrap();
        println!("source {s} -> codeword {}", code.encode_source(&params, &s)?);
    }

    let matrix = authentication_matrix(&code, &params)?;
    print!("{}", matrix.to_csv());

    let report = p_deception_from_definitions(&code, &params)?;
    println!("P_I = {}  P_S = {}", report.p_i, report.p_s);
    Ok(())
}
