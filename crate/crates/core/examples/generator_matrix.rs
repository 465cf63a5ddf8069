//! Prints the generator matrix of RM(m, r) and the weights of the prefix
//! codewords in a sub-code.
//!
//! cargo run --example generator_matrix -- 3 1

use rmacode::{RmCode, SubcodeParams};

fn main() -> rmacode::Result<()> {
    let args: Vec<u32> = std::env::args().skip(1).map(|a| a.parse().expect("integer argument")).collect();
    let (m, r) = (args.first().copied().unwrap_or(3), args.get(1).copied().unwrap_or(1));
    let code = RmCode::new(m, r)?;
    println!("RM({m},{r}): n={} k={}", code.n(), code.k_dim());
    for (degree, rows) in code.blocks() {
        println!("degree {degree}: rows {rows:?}");
    }
    print!("{}", code.to_text());

    let source_len = (code.k_dim() - 1).min(code.n() - 1);
    let params = SubcodeParams::new(source_len, 1);
    println!(
        "prefix codeword weights with M={source_len}: {:?}",
        code.prefix_codeword_weights(&params)?
    );
    Ok(())
}
