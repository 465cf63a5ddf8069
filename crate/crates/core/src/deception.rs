//! Exact probabilities of deception.
//!
//! Three routes compute the substitution probability `P_S`, each checkable
//! against the next on small instances:
//!
//! * [`p_deception_from_definitions`] builds the full key-by-source tag
//!   table and evaluates the impersonation and substitution games literally,
//!   including the outer maximisation over the observed message.
//! * [`p_substitution_bruteforce`] maximises the tag-collision fraction
//!   `P_t(c)` over every nonzero sub-code codeword `c`.
//! * [`p_substitution_closed_form`] evaluates
//!   `max_w max_wt C(w, wt) C(n-w, l-wt) / C(n, l)` over the weights `w` in
//!   `[n/2^r, n/2]` for which the prefix vector `[1_w, 0_{n-w}]` is a
//!   sub-code codeword.
//!
//! Every probability is an exact big-integer rational.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::bits::BitVector;
use crate::error::{Error, Result};
use crate::rm_code::{RmCode, SubcodeParams};
use crate::subsets::{binomial, binomial_signed, binomial_u128, for_each_subset};

/// Enumeration limits for the brute-force routes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest key space `C(n,l) * 2^l` the definition-level route enumerates.
    pub max_keys: u128,
    /// Largest source space `2^M` the definition-level route enumerates.
    pub max_definition_sources: u128,
    /// Largest `C(n,l)` the subset scans enumerate.
    pub max_subsets: u128,
    /// Largest source space `2^M` the simplified brute force scans.
    pub max_sources: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_keys: 1_000_000,
            max_definition_sources: 1 << 12,
            max_subsets: 100_000_000,
            max_sources: 1 << 20,
        }
    }
}

pub const ENV_GUARDRAIL_KEYS: &str = "RMACODE_GUARDRAIL_KEYS";
pub const ENV_GUARDRAIL_SUBSETS: &str = "RMACODE_GUARDRAIL_SUBSETS";

impl Limits {
    /// Defaults, overridden by `RMACODE_GUARDRAIL_KEYS` and
    /// `RMACODE_GUARDRAIL_SUBSETS` when set.
    pub fn from_env() -> Result<Self> {
        let mut limits = Limits::default();
        if let Some(v) = read_env_limit(ENV_GUARDRAIL_KEYS)? {
            limits.max_keys = v;
        }
        if let Some(v) = read_env_limit(ENV_GUARDRAIL_SUBSETS)? {
            limits.max_subsets = v;
        }
        Ok(limits)
    }
}

fn read_env_limit(name: &str) -> Result<Option<u128>> {
    match std::env::var(name) {
        Ok(raw) => raw
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::param(format!("{name} must be a non-negative integer, got {raw:?}"))),
        Err(_) => Ok(None),
    }
}

fn guard(what: &'static str, value: Option<u128>, limit: u128) -> Result<u128> {
    match value {
        Some(v) if v <= limit => Ok(v),
        Some(v) => Err(Error::Guardrail {
            what,
            value: v,
            limit,
        }),
        None => Err(Error::Guardrail {
            what,
            value: u128::MAX,
            limit,
        }),
    }
}

fn pow2(bits: usize) -> Option<u128> {
    1u128.checked_shl(bits as u32).filter(|_| bits < 128)
}

fn ratio(num: impl Into<BigUint>, den: impl Into<BigUint>) -> BigRational {
    BigRational::new(BigInt::from(num.into()), BigInt::from(den.into()))
}

/// Decimal rendering with four places, rounding half to even.
pub fn to_dec4(value: &BigRational) -> String {
    let numer = value.numer();
    let denom = value.denom();
    assert!(numer.sign() != Sign::Minus, "probabilities are non-negative");
    let scaled = numer * BigInt::from(10_000);
    let mut q = &scaled / denom;
    let rem = &scaled % denom;
    let twice = rem * 2;
    if twice > *denom || (twice == *denom && (&q % 2u32) == BigInt::one()) {
        q += 1;
    }
    let whole = &q / 10_000u32;
    let frac = (&q % 10_000u32).to_u32().unwrap_or(0);
    format!("{whole}.{frac:04}")
}

/// `num/den` in lowest terms.
pub fn to_exact(value: &BigRational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    BruteforceSimplified,
    BruteforceDefinition,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::ClosedForm => "closed_form",
            Method::BruteforceSimplified => "bruteforce_simplified",
            Method::BruteforceDefinition => "bruteforce_definition",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeceptionReport {
    pub m: u32,
    pub r: u32,
    pub source_len: usize,
    pub tag_len: usize,
    pub p_i: BigRational,
    pub p_s: BigRational,
    /// Weight of the maximising codeword.
    pub witness_w: usize,
    /// Weight of the maximising tag.
    pub witness_wt: usize,
    pub method: Method,
}

/// Flat, string-valued form used for JSON output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportRecord {
    pub m: u32,
    pub r: u32,
    #[serde(rename = "M")]
    pub source_len: usize,
    pub l: usize,
    pub p_i: String,
    pub p_i_dec4: String,
    pub p_s: String,
    pub p_s_dec4: String,
    pub w: usize,
    pub wt: usize,
    pub method: Method,
}

impl DeceptionReport {
    /// `P_S >= P_I = 1 / 2^l`.
    pub fn satisfies_bounds(&self) -> bool {
        self.p_i == p_impersonation(self.tag_len) && self.p_s >= self.p_i
    }

    pub fn record(&self) -> ReportRecord {
        ReportRecord {
            m: self.m,
            r: self.r,
            source_len: self.source_len,
            l: self.tag_len,
            p_i: to_exact(&self.p_i),
            p_i_dec4: to_dec4(&self.p_i),
            p_s: to_exact(&self.p_s),
            p_s_dec4: to_dec4(&self.p_s),
            w: self.witness_w,
            wt: self.witness_wt,
            method: self.method,
        }
    }

    /// `m r M l P_I(exact) P_I(dec4) P_S(exact) P_S(dec4) w wt method`.
    pub fn record_line(&self) -> String {
        let r = self.record();
        format!(
            "{} {} {} {} {} {} {} {} {} {} {}",
            r.m, r.r, r.source_len, r.l, r.p_i, r.p_i_dec4, r.p_s, r.p_s_dec4, r.w, r.wt, r.method
        )
    }
}

pub const RECORD_HEADER: &str = "m r M l P_I(exact) P_I(dec4) P_S(exact) P_S(dec4) w wt method";

/// Aligned human-readable table of reports.
pub fn render_table(reports: &[DeceptionReport]) -> String {
    let header: Vec<String> = RECORD_HEADER.split(' ').map(str::to_owned).collect();
    let rows: Vec<Vec<String>> = reports
        .iter()
        .map(|r| r.record_line().split(' ').map(str::to_owned).collect())
        .collect();
    let widths: Vec<usize> = (0..header.len())
        .map(|c| {
            rows.iter()
                .map(|row| row[c].len())
                .chain([header[c].len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let fmt_row = |row: &[String]| {
        row.iter()
            .zip(&widths)
            .map(|(cell, w)| format!("{cell:>w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_owned()
    };
    let mut out = fmt_row(&header);
    out.push('\n');
    for row in &rows {
        out.push_str(&fmt_row(row));
        out.push('\n');
    }
    out
}

/// `1 / 2^l`.
pub fn p_impersonation(tag_len: usize) -> BigRational {
    ratio(BigUint::one(), BigUint::one() << tag_len)
}

/// Feasible tag weights `(min, max)` for a weight-`w` prefix codeword:
/// `max(0, l - (n - w))` up to `min(l, w)`.
pub fn wt_range(w: usize, n: usize, l: usize) -> (usize, usize) {
    (l.saturating_sub(n - w), l.min(w))
}

/// `C(w, wt) * C(n - w, l - wt)`: subsets picking `wt` of the ones and
/// `l - wt` of the zeros of a weight-`w` word. Zero outside the feasible range.
pub fn count_tags_by_weight(w: usize, n: usize, l: usize, wt: usize) -> BigUint {
    binomial_signed(w as i64, wt as i64) * binomial_signed(n as i64 - w as i64, l as i64 - wt as i64)
}

/// `P_t` of the prefix vector of weight `w`: best tag weight and its count.
pub fn prefix_tag_maximum(w: usize, n: usize, l: usize) -> (usize, BigUint) {
    let (lo, hi) = wt_range(w, n, l);
    let mut best = (lo, count_tags_by_weight(w, n, l, lo));
    for wt in lo + 1..=hi {
        let count = count_tags_by_weight(w, n, l, wt);
        if count > best.1 {
            best = (wt, count);
        }
    }
    best
}

pub fn p_substitution_closed_form(code: &RmCode, params: &SubcodeParams) -> Result<DeceptionReport> {
    params.check(code)?;
    let n = code.n();
    let l = params.tag_len();
    let lo = n >> code.r();
    let hi = n / 2;
    let weights: Vec<usize> = code
        .prefix_codeword_weights(params)?
        .into_iter()
        .filter(|&w| (lo..=hi).contains(&w))
        .collect();

    let mut best: Option<(usize, usize, BigUint)> = None;
    for w in weights {
        let (wt, count) = prefix_tag_maximum(w, n, l);
        if best.as_ref().is_none_or(|(_, _, c)| count > *c) {
            best = Some((w, wt, count));
        }
    }
    let (w, wt, count) = best.ok_or(Error::NoWitness { lo, hi })?;
    Ok(DeceptionReport {
        m: code.m(),
        r: code.r(),
        source_len: params.source_len(),
        tag_len: l,
        p_i: p_impersonation(l),
        p_s: ratio(count, binomial(n as u64, l as u64)),
        witness_w: w,
        witness_wt: wt,
        method: Method::ClosedForm,
    })
}

/// How often each tag appears as `c` read at a size-`l` coordinate subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagDistribution {
    tag_len: usize,
    counts: BTreeMap<BitVector, u64>,
    total: u64,
}

impl TagDistribution {
    pub fn counts(&self) -> &BTreeMap<BitVector, u64> {
        &self.counts
    }

    pub fn count(&self, tag: &BitVector) -> u64 {
        self.counts.get(tag).copied().unwrap_or(0)
    }

    /// `C(n, l)`.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn tag_len(&self) -> usize {
        self.tag_len
    }

    /// Most frequent tag (smallest weight, then smallest value, on ties) and its count.
    pub fn max_tag(&self) -> (BitVector, u64) {
        let (tag, count) = self
            .counts
            .iter()
            .max_by(|(ta, ca), (tb, cb)| {
                ca.cmp(cb)
                    .then_with(|| tb.weight().cmp(&ta.weight()))
                    .then_with(|| tb.cmp(ta))
            })
            .expect("distribution has at least one tag");
        (tag.clone(), *count)
    }

    /// `P_t(c) = max count / C(n, l)`.
    pub fn p_t(&self) -> BigRational {
        ratio(self.max_tag().1, self.total)
    }
}

/// Raw tag histogram keyed by the MSB-first integer value of the tag.
#[derive(Debug)]
enum TagCounts {
    Dense(Vec<u64>),
    Sparse(HashMap<u64, u64>),
}

impl TagCounts {
    fn entries(&self) -> Vec<(u64, u64)> {
        match self {
            TagCounts::Dense(v) => v
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(t, &c)| (t as u64, c))
                .collect(),
            TagCounts::Sparse(map) => {
                let mut e: Vec<(u64, u64)> = map.iter().map(|(&t, &c)| (t, c)).collect();
                e.sort_unstable();
                e
            }
        }
    }
}

const DENSE_TAG_BITS: usize = 16;

fn check_scan(n: usize, l: usize, limits: &Limits) -> Result<u64> {
    if l > 64 {
        return Err(Error::Guardrail {
            what: "tag length for enumeration",
            value: l as u128,
            limit: 64,
        });
    }
    let total = guard(
        "C(n,l) subsets",
        binomial_u128(n as u64, l as u64),
        limits.max_subsets,
    )?;
    Ok(total as u64)
}

/// Enumerates every size-`l` subset of coordinates in colex order and
/// histograms the projected tags.
fn scan_tags(c: &BitVector, l: usize) -> TagCounts {
    let words = c.words();
    let bit = |i: usize| (words[i >> 6] >> (i & 63)) & 1;
    if l <= DENSE_TAG_BITS {
        let mut counts = vec![0u64; 1 << l];
        for_each_subset(c.len(), l, |subset| {
            let tag = subset.iter().fold(0u64, |acc, &i| (acc << 1) | bit(i));
            counts[tag as usize] += 1;
        });
        TagCounts::Dense(counts)
    } else {
        let mut counts = HashMap::new();
        for_each_subset(c.len(), l, |subset| {
            let tag = subset.iter().fold(0u64, |acc, &i| (acc << 1) | bit(i));
            *counts.entry(tag).or_insert(0) += 1;
        });
        TagCounts::Sparse(counts)
    }
}

pub fn tag_distribution(c: &BitVector, tag_len: usize) -> Result<TagDistribution> {
    tag_distribution_with(c, tag_len, &Limits::default())
}

pub fn tag_distribution_with(c: &BitVector, tag_len: usize, limits: &Limits) -> Result<TagDistribution> {
    if tag_len < 1 || tag_len > c.len() {
        return Err(Error::param(format!(
            "tag length {tag_len} must lie in 1..={}",
            c.len()
        )));
    }
    let total = check_scan(c.len(), tag_len, limits)?;
    let counts = scan_tags(c, tag_len)
        .entries()
        .into_iter()
        .map(|(t, count)| (BitVector::from_u64(t, tag_len), count))
        .collect();
    Ok(TagDistribution {
        tag_len,
        counts,
        total,
    })
}

/// The best offset pair found by scanning every nonzero source difference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubstitutionOptimum {
    pub delta_s: BitVector,
    pub codeword: BitVector,
    pub delta_t: BitVector,
    /// Number of `k1` reading `delta_t` off `codeword`.
    pub count: u64,
    /// `C(n, l)`.
    pub total: u64,
}

impl SubstitutionOptimum {
    pub fn probability(&self) -> BigRational {
        ratio(self.count, self.total)
    }
}

/// Maximises the number of `k1` reading `t` off `encode_source(s)` over all
/// nonzero `s` and all tags `t`. Ties go to the smallest codeword weight,
/// then tag weight, then source value, then tag value.
pub fn best_substitution(
    code: &RmCode,
    params: &SubcodeParams,
    limits: &Limits,
) -> Result<SubstitutionOptimum> {
    params.check(code)?;
    let m_len = params.source_len();
    let l = params.tag_len();
    let sources = guard("2^M sources", pow2(m_len), limits.max_sources)?;
    let total = check_scan(code.n(), l, limits)?;

    // (w, wt, source, tag): smaller wins ties.
    type TieKey = (usize, usize, u64, u64);
    let mut best: Option<(u64, TieKey, BitVector)> = None;
    for x in 1..sources as u64 {
        let s = BitVector::from_u64(x, m_len);
        let c = code.encode_source(params, &s)?;
        let w = c.weight();
        for (t, count) in scan_tags(&c, l).entries() {
            let key = (w, t.count_ones() as usize, x, t);
            let better = match &best {
                None => true,
                Some((bc, bk, _)) => count > *bc || (count == *bc && key < *bk),
            };
            if better {
                best = Some((count, key, c.clone()));
            }
        }
    }
    let (count, (_, _, x, t), codeword) = best.expect("at least one nonzero source");
    Ok(SubstitutionOptimum {
        delta_s: BitVector::from_u64(x, m_len),
        codeword,
        delta_t: BitVector::from_u64(t, l),
        count,
        total,
    })
}

pub fn p_substitution_bruteforce(code: &RmCode, params: &SubcodeParams) -> Result<DeceptionReport> {
    p_substitution_bruteforce_with(code, params, &Limits::default())
}

pub fn p_substitution_bruteforce_with(
    code: &RmCode,
    params: &SubcodeParams,
    limits: &Limits,
) -> Result<DeceptionReport> {
    let opt = best_substitution(code, params, limits)?;
    Ok(DeceptionReport {
        m: code.m(),
        r: code.r(),
        source_len: params.source_len(),
        tag_len: params.tag_len(),
        p_i: p_impersonation(params.tag_len()),
        p_s: opt.probability(),
        witness_w: opt.codeword.weight(),
        witness_wt: opt.delta_t.weight(),
        method: Method::BruteforceSimplified,
    })
}

/// The full table of tags: one row per key, one column per source.
///
/// Keys run over `k1` in colex order and, within each `k1`, `k2` in
/// ascending MSB-first integer order. Source columns are in ascending
/// integer order with the first source bit least significant: column `j`
/// holds the source whose bit `i` is bit `i` of `j` (see [`matrix_source`]).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuthMatrix {
    n: usize,
    tag_len: usize,
    source_len: usize,
    k1s: Vec<Vec<usize>>,
    /// `tags[key_row][source]`, tags as MSB-first integers.
    tags: Vec<Vec<u64>>,
}

impl AuthMatrix {
    pub fn key_count(&self) -> usize {
        self.tags.len()
    }

    pub fn source_count(&self) -> usize {
        1 << self.source_len
    }

    /// `(k1, k2)` for a row.
    pub fn key(&self, row: usize) -> (&[usize], BitVector) {
        let per_k1 = 1usize << self.tag_len;
        (
            &self.k1s[row / per_k1],
            BitVector::from_u64((row % per_k1) as u64, self.tag_len),
        )
    }

    /// Source of column `col`.
    pub fn source(&self, col: usize) -> BitVector {
        matrix_source(col as u64, self.source_len)
    }

    pub fn tag(&self, row: usize, source: usize) -> BitVector {
        BitVector::from_u64(self.tags[row][source], self.tag_len)
    }

    pub fn row(&self, row: usize) -> Vec<BitVector> {
        (0..self.source_count()).map(|s| self.tag(row, s)).collect()
    }

    /// CSV with a header of source indices; `k1` as its length-`n`
    /// indicator, `k2` and tags as bit strings.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k1,k2");
        for s in 0..self.source_count() {
            out.push_str(&format!(",{s}"));
        }
        out.push('\n');
        for row in 0..self.key_count() {
            let (k1, k2) = self.key(row);
            let mut indicator = BitVector::zeros(self.n);
            for &i in k1 {
                indicator.set(i, true);
            }
            out.push_str(&format!("{indicator},{k2}"));
            for s in 0..self.source_count() {
                out.push_str(&format!(",{}", self.tag(row, s)));
            }
            out.push('\n');
        }
        out
    }
}

/// Source for authentication-matrix column `col`: bit `i` of the source is
/// bit `i` of `col`.
pub fn matrix_source(col: u64, source_len: usize) -> BitVector {
    let mut s = BitVector::zeros(source_len);
    for i in 0..source_len {
        s.set(i, (col >> i) & 1 == 1);
    }
    s
}

fn check_definition_limits(code: &RmCode, params: &SubcodeParams, limits: &Limits) -> Result<()> {
    params.check(code)?;
    let l = params.tag_len();
    let keys = binomial_u128(code.n() as u64, l as u64).and_then(|c| c.checked_mul(pow2(l)?));
    guard("key space C(n,l)*2^l", keys, limits.max_keys)?;
    guard(
        "2^M sources",
        pow2(params.source_len()),
        limits.max_definition_sources,
    )?;
    Ok(())
}

pub fn authentication_matrix(code: &RmCode, params: &SubcodeParams) -> Result<AuthMatrix> {
    authentication_matrix_with(code, params, &Limits::default())
}

pub fn authentication_matrix_with(
    code: &RmCode,
    params: &SubcodeParams,
    limits: &Limits,
) -> Result<AuthMatrix> {
    check_definition_limits(code, params, limits)?;
    let m_len = params.source_len();
    let l = params.tag_len();
    let codewords = (0..1u64 << m_len)
        .map(|x| code.encode_source(params, &matrix_source(x, m_len)))
        .collect::<Result<Vec<_>>>()?;

    let mut k1s = Vec::new();
    for_each_subset(code.n(), l, |subset| k1s.push(subset.to_vec()));
    let mut tags = Vec::with_capacity(k1s.len() << l);
    for k1 in &k1s {
        let projected: Vec<u64> = codewords
            .iter()
            .map(|c| k1.iter().fold(0u64, |acc, &i| (acc << 1) | c.get(i) as u64))
            .collect();
        for k2 in 0..1u64 << l {
            tags.push(projected.iter().map(|p| p ^ k2).collect());
        }
    }
    Ok(AuthMatrix {
        n: code.n(),
        tag_len: l,
        source_len: m_len,
        k1s,
        tags,
    })
}

pub fn p_deception_from_definitions(code: &RmCode, params: &SubcodeParams) -> Result<DeceptionReport> {
    p_deception_from_definitions_with(code, params, &Limits::default())
}

/// Evaluates both games directly on the authentication matrix under uniform keys.
///
/// Impersonation: `max_{s', t'} |{k : E_k(s') = t'}| / |K|`.
/// Substitution: `max_{(s,t) observable} max_{s' != s, t'}
/// |{k : E_k(s) = t, E_k(s') = t'}| / |{k : E_k(s) = t}|`.
pub fn p_deception_from_definitions_with(
    code: &RmCode,
    params: &SubcodeParams,
    limits: &Limits,
) -> Result<DeceptionReport> {
    let matrix = authentication_matrix_with(code, params, limits)?;
    let l = params.tag_len();
    let tags_per_source = 1usize << l;
    let sources = matrix.source_count();
    let keys = matrix.key_count();
    let weights = (0..sources as u64)
        .map(|x| {
            code.encode_source(params, &matrix_source(x, params.source_len()))
                .map(|c| c.weight())
        })
        .collect::<Result<Vec<usize>>>()?;

    let mut p_i = BigRational::zero();
    for s in 0..sources {
        let mut hist = vec![0u64; tags_per_source];
        for row in &matrix.tags {
            hist[row[s] as usize] += 1;
        }
        let best = *hist.iter().max().unwrap_or(&0);
        p_i = p_i.max(ratio(best, keys as u64));
    }

    // (numerator, denominator, witness key) of the best conditional probability.
    let mut best: Option<(u64, u64, (usize, usize))> = None;
    let mut consistent: Vec<Vec<usize>> = vec![Vec::new(); tags_per_source];
    let mut hist = vec![0u64; tags_per_source];
    for s in 0..sources {
        for list in consistent.iter_mut() {
            list.clear();
        }
        for (k, row) in matrix.tags.iter().enumerate() {
            consistent[row[s] as usize].push(k);
        }
        for (t, observed_keys) in consistent.iter().enumerate() {
            let den = observed_keys.len() as u64;
            if den == 0 {
                continue;
            }
            for s2 in (0..sources).filter(|&s2| s2 != s) {
                hist.iter_mut().for_each(|h| *h = 0);
                for &k in observed_keys {
                    hist[matrix.tags[k][s2] as usize] += 1;
                }
                for (t2, &num) in hist.iter().enumerate() {
                    if num == 0 {
                        continue;
                    }
                    let w = weights[s ^ s2];
                    let wt = ((t ^ t2) as u64).count_ones() as usize;
                    let better = match best {
                        None => true,
                        Some((bn, bd, bw)) => {
                            let lhs = num as u128 * bd as u128;
                            let rhs = bn as u128 * den as u128;
                            lhs > rhs || (lhs == rhs && (w, wt) < bw)
                        }
                    };
                    if better {
                        best = Some((num, den, (w, wt)));
                    }
                }
            }
        }
    }
    let (num, den, (w, wt)) = best.ok_or_else(|| Error::param("source space must hold at least two sources"))?;
    Ok(DeceptionReport {
        m: code.m(),
        r: code.r(),
        source_len: params.source_len(),
        tag_len: l,
        p_i,
        p_s: ratio(num, den),
        witness_w: w,
        witness_wt: wt,
        method: Method::BruteforceDefinition,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    fn frac(n: u64, d: u64) -> BigRational {
        ratio(n, d)
    }

    fn code_params(m: u32, r: u32, source_len: usize, l: usize) -> (RmCode, SubcodeParams) {
        (RmCode::new(m, r).unwrap(), SubcodeParams::new(source_len, l))
    }

    #[test]
    fn impersonation_values() {
        assert_eq!(p_impersonation(1), frac(1, 2));
        assert_eq!(p_impersonation(3), frac(1, 8));
        assert_eq!(to_dec4(&p_impersonation(3)), "0.1250");
    }

    #[test]
    fn dec4_rounds_half_to_even() {
        assert_eq!(to_dec4(&frac(1, 3)), "0.3333");
        assert_eq!(to_dec4(&frac(2, 3)), "0.6667");
        assert_eq!(to_dec4(&frac(1, 20_000)), "0.0000");
        assert_eq!(to_dec4(&frac(3, 20_000)), "0.0002");
        assert_eq!(to_dec4(&frac(1, 1)), "1.0000");
        assert_eq!(to_dec4(&frac(1920, 4960)), "0.3871");
    }

    #[test]
    fn wt_range_examples() {
        assert_eq!(wt_range(8, 16, 3), (0, 3));
        assert_eq!(wt_range(2, 4, 3), (1, 2));
        assert_eq!(wt_range(3, 4, 3), (2, 3));
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_tags_by_weight(8, 16, 3, 1), BigUint::from(224u32));
        assert_eq!(count_tags_by_weight(2, 4, 1, 1), BigUint::from(2u32));
        assert_eq!(count_tags_by_weight(2, 4, 1, 3), BigUint::zero());
        for w in 1..16 {
            let (lo, hi) = wt_range(w, 16, 5);
            let sum: BigUint = (lo..=hi).map(|wt| count_tags_by_weight(w, 16, 5, wt)).sum();
            assert_eq!(sum, binomial(16, 5));
        }
    }

    #[test]
    fn closed_form_examples() {
        let (c, p) = code_params(4, 1, 4, 3);
        let rep = p_substitution_closed_form(&c, &p).unwrap();
        assert_eq!(rep.p_s, frac(224, 560));
        assert_eq!((rep.witness_w, rep.witness_wt), (8, 1));

        let (c, p) = code_params(2, 1, 2, 1);
        assert_eq!(p_substitution_closed_form(&c, &p).unwrap().p_s, frac(1, 2));

        let (c, p) = code_params(6, 1, 4, 3);
        let rep = p_substitution_closed_form(&c, &p).unwrap();
        assert_eq!(rep.p_s, frac(15872, 41664));
        assert_eq!(to_dec4(&rep.p_s), "0.3810");
    }

    #[test]
    fn tag_distribution_examples() {
        let d = tag_distribution(&bv("1100"), 1).unwrap();
        assert_eq!(d.count(&bv("0")), 2);
        assert_eq!(d.count(&bv("1")), 2);
        assert_eq!(d.p_t(), frac(1, 2));

        let d = tag_distribution(&bv("0000"), 1).unwrap();
        assert_eq!(d.counts().len(), 1);
        assert_eq!(d.count(&bv("0")), 4);
        assert_eq!(d.p_t(), frac(1, 1));

        let d = tag_distribution(&BitVector::prefix(8, 16), 3).unwrap();
        assert_eq!(d.count(&bv("100")), 224);
        assert_eq!(BigUint::from(d.count(&bv("100"))), count_tags_by_weight(8, 16, 3, 1));
        assert_eq!(d.total(), 560);
    }

    #[test]
    fn tag_distribution_guardrail() {
        let limits = Limits {
            max_subsets: 10,
            ..Limits::default()
        };
        assert!(matches!(
            tag_distribution_with(&BitVector::zeros(16), 3, &limits),
            Err(Error::Guardrail { .. })
        ));
    }

    #[test]
    fn sparse_histogram_matches_dense_counts() {
        // l = 17 takes the hash-map path; an all-zero word has a single tag.
        let d = tag_distribution(&BitVector::zeros(18), 17).unwrap();
        assert_eq!(d.counts().len(), 1);
        assert_eq!(d.total(), 18);
        let d = tag_distribution(&BitVector::prefix(1, 18), 17).unwrap();
        assert_eq!(d.count(&BitVector::zeros(17)), 1);
        assert_eq!(d.count(&BitVector::prefix(1, 17)), 17);
    }

    #[test]
    fn bruteforce_examples() {
        let (c, p) = code_params(2, 1, 2, 1);
        assert_eq!(p_substitution_bruteforce(&c, &p).unwrap().p_s, frac(1, 2));
        let (c, p) = code_params(4, 1, 4, 3);
        assert_eq!(p_substitution_bruteforce(&c, &p).unwrap().p_s, frac(2, 5));
        let c = RmCode::new(2, 1).unwrap();
        let unfrozen = SubcodeParams::without_frozen_bit(3, 1);
        assert_eq!(p_substitution_bruteforce(&c, &unfrozen).unwrap().p_s, frac(1, 1));
    }

    #[test]
    fn table_one_matrix() {
        let (c, p) = code_params(2, 1, 2, 1);
        let matrix = authentication_matrix(&c, &p).unwrap();
        let expected = [
            "0110", "1001", "0011", "1100", "0101", "1010", "0000", "1111",
        ];
        assert_eq!(matrix.key_count(), 8);
        for (row, want) in expected.iter().enumerate() {
            let got: String = matrix.row(row).iter().map(|t| t.to_string()).collect();
            assert_eq!(&got, want, "row {row}");
        }
        let (k1, k2) = matrix.key(6);
        assert_eq!((k1, k2), (&[3usize][..], bv("0")));
        let sources: Vec<String> = (0..4).map(|j| matrix.source(j).to_string()).collect();
        assert_eq!(sources, vec!["00", "10", "01", "11"]);
    }

    #[test]
    fn definitions_on_toy_example() {
        let (c, p) = code_params(2, 1, 2, 1);
        let rep = p_deception_from_definitions(&c, &p).unwrap();
        assert_eq!(rep.p_i, frac(1, 2));
        assert_eq!(rep.p_s, frac(1, 2));
        assert!(rep.satisfies_bounds());
    }

    #[test]
    fn definitions_match_bruteforce_on_rm31() {
        let (c, p) = code_params(3, 1, 2, 1);
        let def = p_deception_from_definitions(&c, &p).unwrap();
        let brute = p_substitution_bruteforce(&c, &p).unwrap();
        assert_eq!(def.p_i, frac(1, 2));
        assert_eq!(def.p_s, brute.p_s);
    }

    #[test]
    fn definition_guardrail() {
        let (c, p) = code_params(8, 1, 4, 3);
        assert!(matches!(
            p_deception_from_definitions(&c, &p),
            Err(Error::Guardrail { .. })
        ));
    }

    #[test]
    fn record_line_layout() {
        let (c, p) = code_params(4, 1, 4, 3);
        let rep = p_substitution_closed_form(&c, &p).unwrap();
        assert_eq!(rep.record_line(), "4 1 4 3 1/8 0.1250 2/5 0.4000 8 1 closed_form");
        let table = render_table(&[rep]);
        assert_eq!(table.lines().count(), 2);
        assert!(table.contains("closed_form"));
    }
}
