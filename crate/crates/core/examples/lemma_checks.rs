//! Tag distributions of prefix vectors: which tags occur, how often, and
//! the reversal symmetry between weights w and n - w.

use rmacode::deception::{prefix_tag_maximum, tag_distribution, wt_range};
use rmacode::BitVector;

fn main() -> rmacode::Result<()> {
    let (n, l) = (16, 3);
    for w in 1..n {
        let dist = tag_distribution(&BitVector::prefix(w, n), l)?;
        let mirrored = tag_distribution(&BitVector::prefix(n - w, n), l)?;
        let (wt, count) = prefix_tag_maximum(w, n, l);
        let tags: Vec<String> = dist.counts().iter().map(|(t, c)| format!("{t}:{c}")).collect();
        println!(
            "w={w:2} wt range {:?} best wt={wt} ({count}/{}) P_t={} mirrored={} tags [{}]",
            wt_range(w, n, l),
            dist.total(),
            dist.p_t(),
            mirrored.p_t(),
            tags.join(" ")
        );
    }
    Ok(())
}
