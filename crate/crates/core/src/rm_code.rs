//! Reed-Muller generator matrices and sub-code encoding.
//!
//! Columns are indexed `0..n` with `n = 2^m`. The degree-one row for
//! variable `i` has a one at column `c` exactly when bit `i` of `c` is zero,
//! so the row for the highest variable is `[1_{n/2}, 0_{n/2}]`. Degree-`j`
//! rows are entry-wise products of `j` degree-one rows, one per `j`-subset of
//! variables in colex order, which puts the subset of the `j` highest
//! variables last and makes the last row of every block a prefix vector
//! `[1_{2^{m-j}}, 0]`. Blocks are stacked highest degree first and the
//! all-one row closes the matrix.

use std::fmt::Write as _;
use std::ops::Range;

use crate::bits::BitVector;
use crate::error::{Error, Result};
use crate::subsets::{binomial_u128, ColexSubsets};

/// Largest supported blocklength exponent.
pub const MAX_M: u32 = 20;
/// Largest generator matrix (rows times columns, in bits) we agree to build.
pub const MAX_GENERATOR_BITS: u128 = 1 << 30;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RmCode {
    m: u32,
    r: u32,
    n: usize,
    rows: Vec<BitVector>,
    /// `(degree, row range)` from the top of the matrix down.
    blocks: Vec<(u32, Range<usize>)>,
}

/// Dimension of RM(m, r): `sum_{i<=r} C(m, i)`.
pub fn rm_dimension(m: u32, r: u32) -> u128 {
    (0..=r.min(m))
        .map(|i| binomial_u128(m as u64, i as u64).unwrap_or(u128::MAX))
        .sum()
}

impl RmCode {
    /// Builds the generator matrix of RM(m, r).
    pub fn new(m: u32, r: u32) -> Result<Self> {
        if m < 1 {
            return Err(Error::param(format!("m must be at least 1, got {m}")));
        }
        if r > m {
            return Err(Error::param(format!("order r={r} exceeds m={m}")));
        }
        if m > MAX_M {
            return Err(Error::Guardrail {
                what: "m",
                value: m as u128,
                limit: MAX_M as u128,
            });
        }
        let n = 1usize << m;
        let k_dim = rm_dimension(m, r);
        let bits = k_dim * n as u128;
        if bits > MAX_GENERATOR_BITS {
            return Err(Error::Guardrail {
                what: "generator matrix bits",
                value: bits,
                limit: MAX_GENERATOR_BITS,
            });
        }

        let monomials: Vec<BitVector> = (0..m as usize)
            .map(|i| {
                let mut row = BitVector::zeros(n);
                for c in 0..n {
                    if (c >> i) & 1 == 0 {
                        row.set(c, true);
                    }
                }
                row
            })
            .collect();

        let mut rows = Vec::with_capacity(k_dim as usize);
        let mut blocks = Vec::with_capacity(r as usize + 1);
        for degree in (1..=r).rev() {
            let start = rows.len();
            for subset in ColexSubsets::new(m as usize, degree as usize) {
                let mut row = monomials[subset[0]].clone();
                for &var in &subset[1..] {
                    row = row.and(&monomials[var]);
                }
                rows.push(row);
            }
            blocks.push((degree, start..rows.len()));
        }
        let start = rows.len();
        rows.push(BitVector::ones(n));
        blocks.push((0, start..rows.len()));

        Ok(RmCode {
            m,
            r,
            n,
            rows,
            blocks,
        })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// Blocklength `2^m`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of generator rows.
    pub fn k_dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    /// Row range of the degree-`degree` block, if present.
    pub fn block(&self, degree: u32) -> Option<Range<usize>> {
        self.blocks
            .iter()
            .find(|(d, _)| *d == degree)
            .map(|(_, range)| range.clone())
    }

    pub fn blocks(&self) -> &[(u32, Range<usize>)] {
        &self.blocks
    }

    /// `u G` over GF(2).
    pub fn encode(&self, u: &BitVector) -> Result<BitVector> {
        if u.len() != self.k_dim() {
            return Err(Error::dim(self.k_dim(), u.len()));
        }
        let mut c = BitVector::zeros(self.n);
        for (i, row) in self.rows.iter().enumerate() {
            if u.get(i) {
                c.xor_assign(row);
            }
        }
        Ok(c)
    }

    /// Places the source into the information vector:
    /// `u = [0_{k-M-1}, s, 0]`, or `[0_{k-M}, s]` when the last bit is not frozen.
    pub fn source_to_input(&self, params: &SubcodeParams, s: &BitVector) -> Result<BitVector> {
        params.check(self)?;
        if s.len() != params.source_len() {
            return Err(Error::dim(params.source_len(), s.len()));
        }
        let mut u = BitVector::zeros(self.k_dim());
        let start = params.source_start(self);
        for i in 0..s.len() {
            u.set(start + i, s.get(i));
        }
        Ok(u)
    }

    pub fn encode_source(&self, params: &SubcodeParams, s: &BitVector) -> Result<BitVector> {
        self.encode(&self.source_to_input(params, s)?)
    }

    /// The generator rows carrying the source bits, in source order.
    pub fn active_rows(&self, params: &SubcodeParams) -> Result<&[BitVector]> {
        params.check(self)?;
        let start = params.source_start(self);
        Ok(&self.rows[start..start + params.source_len()])
    }

    /// Every `w` in `1..n` for which `[1_w, 0_{n-w}]` lies in the sub-code
    /// spanned by the active rows, ascending.
    pub fn prefix_codeword_weights(&self, params: &SubcodeParams) -> Result<Vec<usize>> {
        let space = RowSpace::new(self.active_rows(params)?);
        Ok(space.prefix_weights())
    }

    /// Generator matrix as text: one row per line of `0`/`1` characters.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.k_dim() * (self.n + 1));
        for row in &self.rows {
            let _ = writeln!(out, "{row}");
        }
        out
    }
}

/// Source and tag lengths plus the frozen-bit choice for a sub-code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SubcodeParams {
    source_len: usize,
    tag_len: usize,
    freeze_last: bool,
}

impl SubcodeParams {
    /// The standard configuration: source of `source_len` bits sitting just
    /// above the frozen all-one row, tags of `tag_len` bits.
    pub fn new(source_len: usize, tag_len: usize) -> Self {
        SubcodeParams {
            source_len,
            tag_len,
            freeze_last: true,
        }
    }

    /// Variant with the all-one row left free, so the source may span the
    /// whole code. Only meaningful for analysing why the freeze is needed.
    pub fn without_frozen_bit(source_len: usize, tag_len: usize) -> Self {
        SubcodeParams {
            source_len,
            tag_len,
            freeze_last: false,
        }
    }

    /// `M`.
    pub fn source_len(&self) -> usize {
        self.source_len
    }

    /// `l`.
    pub fn tag_len(&self) -> usize {
        self.tag_len
    }

    pub fn freezes_last(&self) -> bool {
        self.freeze_last
    }

    /// Index of the first source row in `G`.
    pub fn source_start(&self, code: &RmCode) -> usize {
        code.k_dim() - self.source_len - usize::from(self.freeze_last)
    }

    /// Validates `1 <= l <= M < n` and `M <= k - 1` (or `M <= k` unfrozen).
    pub fn check(&self, code: &RmCode) -> Result<()> {
        let (m_len, l) = (self.source_len, self.tag_len);
        let max_source = code.k_dim() - usize::from(self.freeze_last);
        if l < 1 {
            return Err(Error::param("tag length l must be at least 1"));
        }
        if m_len < l {
            return Err(Error::param(format!(
                "source length M={m_len} must be at least the tag length l={l}"
            )));
        }
        if m_len >= code.n() {
            return Err(Error::param(format!(
                "source length M={m_len} must be below the blocklength n={}",
                code.n()
            )));
        }
        if m_len > max_source {
            return Err(Error::param(format!(
                "source length M={m_len} exceeds {max_source} for RM({},{}) with dimension {}{}",
                code.m(),
                code.r(),
                code.k_dim(),
                if self.freeze_last { " and the frozen last bit" } else { "" }
            )));
        }
        Ok(())
    }
}

/// Reduced row-echelon basis of a set of GF(2) vectors.
#[derive(Debug, Clone)]
pub struct RowSpace {
    len: usize,
    /// `(pivot column, row)`; each row is zero at every other pivot column.
    basis: Vec<(usize, BitVector)>,
}

impl RowSpace {
    pub fn new(rows: &[BitVector]) -> Self {
        let len = rows.first().map_or(0, BitVector::len);
        let mut basis: Vec<(usize, BitVector)> = Vec::new();
        for row in rows {
            let mut v = row.clone();
            for (pivot, b) in &basis {
                if v.get(*pivot) {
                    v.xor_assign(b);
                }
            }
            if let Some(pivot) = v.first_one() {
                for (_, b) in basis.iter_mut() {
                    if b.get(pivot) {
                        b.xor_assign(&v);
                    }
                }
                basis.push((pivot, v));
            }
        }
        RowSpace { len, basis }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Residue of `v` after eliminating every pivot column.
    pub fn reduce(&self, v: &BitVector) -> BitVector {
        let mut out = v.clone();
        for (pivot, b) in &self.basis {
            if v.get(*pivot) {
                out.xor_assign(b);
            }
        }
        out
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        v.len() == self.len && self.reduce(v).is_zero()
    }

    /// Weights `w` in `1..len` with `[1_w, 0]` in the span.
    ///
    /// Reduction is linear and `prefix(w+1) = prefix(w) + e_w`, so the
    /// residue is carried forward one coordinate at a time.
    pub fn prefix_weights(&self) -> Vec<usize> {
        let mut pivot_row: Vec<Option<usize>> = vec![None; self.len];
        for (idx, (pivot, _)) in self.basis.iter().enumerate() {
            pivot_row[*pivot] = Some(idx);
        }
        let mut residue = BitVector::zeros(self.len);
        let mut weight = 0usize;
        let mut out = Vec::new();
        for w in 1..self.len {
            let col = w - 1;
            match pivot_row[col] {
                Some(idx) => {
                    // e_col reduces to e_col + row, and row already has a one at col.
                    let row = &self.basis[idx].1;
                    let mut delta = row.clone();
                    delta.flip(col);
                    residue.xor_assign(&delta);
                    weight = residue.weight();
                }
                None => {
                    weight = if residue.get(col) { weight - 1 } else { weight + 1 };
                    residue.flip(col);
                }
            }
            if weight == 0 {
                out.push(w);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    fn rows_text(code: &RmCode) -> Vec<String> {
        code.rows().iter().map(|r| r.to_string()).collect()
    }

    #[test]
    fn rm21_matches_toy_matrix() {
        let code = RmCode::new(2, 1).unwrap();
        assert_eq!(rows_text(&code), vec!["1010", "1100", "1111"]);
        assert_eq!(code.to_text(), "1010\n1100\n1111\n");
    }

    #[test]
    fn rm11_rows() {
        let code = RmCode::new(1, 1).unwrap();
        assert_eq!(rows_text(&code), vec!["10", "11"]);
    }

    #[test]
    fn rm31_last_degree_one_row_is_prefix() {
        let code = RmCode::new(3, 1).unwrap();
        let block = code.block(1).unwrap();
        assert_eq!(code.rows()[block.end - 1], bv("11110000"));
    }

    #[test]
    fn dimension_and_block_layout() {
        let code = RmCode::new(4, 2).unwrap();
        assert_eq!(code.k_dim(), 11);
        assert_eq!(code.n(), 16);
        assert_eq!(code.block(2), Some(0..6));
        assert_eq!(code.block(1), Some(6..10));
        assert_eq!(code.block(0), Some(10..11));
        assert_eq!(code.rows()[10], BitVector::ones(16));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(RmCode::new(0, 0), Err(Error::Parameter(_))));
        assert!(matches!(RmCode::new(3, 4), Err(Error::Parameter(_))));
        assert!(matches!(RmCode::new(21, 1), Err(Error::Guardrail { .. })));
        assert!(matches!(RmCode::new(20, 20), Err(Error::Guardrail { .. })));
    }

    #[test]
    fn encode_examples() {
        let code = RmCode::new(2, 1).unwrap();
        assert_eq!(code.encode(&bv("100")).unwrap(), bv("1010"));
        assert_eq!(code.encode(&bv("000")).unwrap(), bv("0000"));
        assert_eq!(code.encode(&bv("110")).unwrap(), bv("0110"));
        assert_eq!(code.encode(&bv("10")), Err(Error::dim(3, 2)));
    }

    #[test]
    fn source_placement() {
        let code = RmCode::new(2, 1).unwrap();
        let p = SubcodeParams::new(2, 1);
        assert_eq!(code.source_to_input(&p, &bv("10")).unwrap(), bv("100"));

        let code = RmCode::new(5, 1).unwrap();
        let p = SubcodeParams::new(4, 3);
        assert_eq!(code.source_to_input(&p, &bv("0000")).unwrap(), bv("000000"));
        assert_eq!(code.source_to_input(&p, &bv("1011")).unwrap(), bv("010110"));
        assert!(code.source_to_input(&p, &bv("101")).is_err());
    }

    #[test]
    fn encode_source_examples() {
        let code = RmCode::new(2, 1).unwrap();
        let p = SubcodeParams::new(2, 1);
        assert_eq!(code.encode_source(&p, &bv("01")).unwrap(), bv("1100"));
        assert_eq!(code.encode_source(&p, &bv("00")).unwrap(), bv("0000"));

        let code = RmCode::new(4, 1).unwrap();
        let p = SubcodeParams::new(4, 3);
        assert_eq!(
            code.encode_source(&p, &bv("0001")).unwrap(),
            BitVector::prefix(8, 16)
        );
    }

    #[test]
    fn params_validation() {
        let code = RmCode::new(2, 1).unwrap();
        assert!(SubcodeParams::new(2, 1).check(&code).is_ok());
        assert!(SubcodeParams::new(3, 1).check(&code).is_err());
        assert!(SubcodeParams::new(1, 2).check(&code).is_err());
        assert!(SubcodeParams::new(2, 0).check(&code).is_err());
        assert!(SubcodeParams::without_frozen_bit(3, 1).check(&code).is_ok());

        let rep = RmCode::new(3, 0).unwrap();
        assert!(SubcodeParams::new(1, 1).check(&rep).is_err());
    }

    #[test]
    fn prefix_weights_examples() {
        let code = RmCode::new(2, 1).unwrap();
        assert_eq!(code.prefix_codeword_weights(&SubcodeParams::new(2, 1)).unwrap(), vec![2]);
        let code = RmCode::new(4, 1).unwrap();
        assert_eq!(code.prefix_codeword_weights(&SubcodeParams::new(4, 3)).unwrap(), vec![8]);
    }

    #[test]
    fn prefix_weights_agree_with_direct_membership() {
        for m in 1..=5 {
            for r in 1..=m {
                let code = RmCode::new(m, r).unwrap();
                for source_len in 1..code.k_dim().min(code.n()) {
                    let p = SubcodeParams::new(source_len, 1);
                    let space = RowSpace::new(code.active_rows(&p).unwrap());
                    let direct: Vec<usize> = (1..code.n())
                        .filter(|&w| space.contains(&BitVector::prefix(w, code.n())))
                        .collect();
                    assert_eq!(space.prefix_weights(), direct, "m={m} r={r} M={source_len}");
                }
            }
        }
    }

    #[test]
    fn generator_has_full_rank() {
        for m in 1..=7 {
            for r in 0..=m {
                let code = RmCode::new(m, r).unwrap();
                assert_eq!(RowSpace::new(code.rows()).rank(), code.k_dim(), "m={m} r={r}");
            }
        }
    }

    #[test]
    fn every_block_ends_in_a_prefix_row() {
        for m in 1..=7 {
            for r in 0..=m {
                let code = RmCode::new(m, r).unwrap();
                for degree in 1..=r {
                    let block = code.block(degree).unwrap();
                    let unit = BitVector::unit(block.end - 1, code.k_dim());
                    assert_eq!(
                        code.encode(&unit).unwrap(),
                        BitVector::prefix(1 << (m - degree), code.n()),
                        "m={m} r={r} degree={degree}"
                    );
                }
            }
        }
    }

    #[test]
    fn exhaustive_minimum_distance() {
        for m in 1..=4u32 {
            for r in 0..=m {
                let code = RmCode::new(m, r).unwrap();
                let k = code.k_dim();
                let min = (1u64..1 << k)
                    .map(|x| code.encode(&BitVector::from_u64(x, k)).unwrap().weight())
                    .min()
                    .unwrap();
                assert_eq!(min, 1 << (m - r), "m={m} r={r}");
            }
        }
    }

    #[test]
    fn flipping_the_last_input_bit_adds_the_all_one_vector() {
        let code = RmCode::new(4, 2).unwrap();
        let k = code.k_dim();
        for x in (0u64..1 << (k - 1)).step_by(7) {
            let u = BitVector::from_u64(x << 1, k);
            let mut u2 = u.clone();
            u2.flip(k - 1);
            let sum = code.encode(&u).unwrap().xor(&code.encode(&u2).unwrap());
            assert_eq!(sum, BitVector::ones(code.n()));
        }
    }
}
