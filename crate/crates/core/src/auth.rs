//! Keys, tagging and verification for RM authentication codes.
//!
//! A key is a pair `(k1, k2)`: `k1` picks `l` coordinates of the codeword,
//! `k2` is an `l`-bit mask. The tag of a source `s` is the codeword of `s`
//! read at `k1` (ascending coordinate order) XOR `k2`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::BitVector;
use crate::error::{Error, Result};
use crate::rm_code::{RmCode, SubcodeParams};

/// A Reed-Muller code together with the sub-code parameters in use.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuthConfig {
    code: RmCode,
    params: SubcodeParams,
}

impl AuthConfig {
    pub fn new(code: RmCode, params: SubcodeParams) -> Result<Self> {
        params.check(&code)?;
        Ok(AuthConfig { code, params })
    }

    /// Shorthand for RM(m, r) with source length `source_len` and tag length `tag_len`.
    pub fn rm(m: u32, r: u32, source_len: usize, tag_len: usize) -> Result<Self> {
        AuthConfig::new(RmCode::new(m, r)?, SubcodeParams::new(source_len, tag_len))
    }

    pub fn code(&self) -> &RmCode {
        &self.code
    }

    pub fn params(&self) -> &SubcodeParams {
        &self.params
    }

    pub fn n(&self) -> usize {
        self.code.n()
    }

    pub fn source_len(&self) -> usize {
        self.params.source_len()
    }

    pub fn tag_len(&self) -> usize {
        self.params.tag_len()
    }

    pub fn encode_source(&self, s: &BitVector) -> Result<BitVector> {
        self.code.encode_source(&self.params, s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AuthKey {
    k1: Vec<usize>,
    k2: BitVector,
}

impl AuthKey {
    /// `k1` must be strictly increasing with entries below `n`, and have the
    /// same length as `k2`.
    pub fn new(k1: Vec<usize>, k2: BitVector, n: usize) -> Result<Self> {
        if k1.len() != k2.len() {
            return Err(Error::dim(k1.len(), k2.len()));
        }
        if let Some(&bad) = k1.iter().find(|&&i| i >= n) {
            return Err(Error::Index { index: bad, len: n });
        }
        if k1.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Malformed(
                "k1 indices must be distinct and ascending".into(),
            ));
        }
        Ok(AuthKey { k1, k2 })
    }

    /// Builds a key from the weight-`l` indicator form of `k1`.
    pub fn from_indicator(indicator: &BitVector, k2: BitVector) -> Result<Self> {
        AuthKey::new(indicator.ones_indices(), k2, indicator.len())
    }

    pub fn k1(&self) -> &[usize] {
        &self.k1
    }

    pub fn k2(&self) -> &BitVector {
        &self.k2
    }

    /// Length-`n` indicator vector of `k1`.
    pub fn indicator(&self, n: usize) -> BitVector {
        let mut v = BitVector::zeros(n);
        for &i in &self.k1 {
            v.set(i, true);
        }
        v
    }

    pub fn tag_len(&self) -> usize {
        self.k2.len()
    }
}

/// A source followed by its tag.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Message {
    pub source: BitVector,
    pub tag: BitVector,
}

impl Message {
    pub fn new(source: BitVector, tag: BitVector) -> Self {
        Message { source, tag }
    }

    fn check(&self, config: &AuthConfig) -> Result<()> {
        if self.source.len() != config.source_len() {
            return Err(Error::dim(config.source_len(), self.source.len()));
        }
        if self.tag.len() != config.tag_len() {
            return Err(Error::dim(config.tag_len(), self.tag.len()));
        }
        Ok(())
    }
}

/// Draws a uniform key from `K1 x K2` with a ChaCha8 stream seeded by `seed`.
pub fn sample_key(config: &AuthConfig, seed: u64) -> AuthKey {
    sample_key_with(config, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// As [`sample_key`], drawing from a caller-owned generator.
pub fn sample_key_with<R: Rng + ?Sized>(config: &AuthConfig, rng: &mut R) -> AuthKey {
    let n = config.n();
    let l = config.tag_len();
    let mut indices: Vec<usize> = (0..n).collect();
    for i in 0..l {
        let j = rng.gen_range(i..n);
        indices.swap(i, j);
    }
    indices.truncate(l);
    indices.sort_unstable();
    let mut k2 = BitVector::zeros(l);
    for i in 0..l {
        k2.set(i, rng.gen::<bool>());
    }
    AuthKey { k1: indices, k2 }
}

/// Entries of `c` at `k1`, in ascending index order.
pub fn project(c: &BitVector, k1: &[usize]) -> Result<BitVector> {
    let mut out = BitVector::zeros(k1.len());
    for (pos, &idx) in k1.iter().enumerate() {
        if idx >= c.len() {
            return Err(Error::Index {
                index: idx,
                len: c.len(),
            });
        }
        out.set(pos, c.get(idx));
    }
    Ok(out)
}

/// Tag of `s` under `key`.
pub fn generate_tag(config: &AuthConfig, s: &BitVector, key: &AuthKey) -> Result<BitVector> {
    if s.len() != config.source_len() {
        return Err(Error::dim(config.source_len(), s.len()));
    }
    if key.tag_len() != config.tag_len() {
        return Err(Error::dim(config.tag_len(), key.tag_len()));
    }
    let c = config.encode_source(s)?;
    let mut t = project(&c, &key.k1)?;
    t.xor_assign(&key.k2);
    Ok(t)
}

/// Accepts the message iff its tag is the one `key` assigns to its source.
pub fn verify(config: &AuthConfig, msg: &Message, key: &AuthKey) -> Result<bool> {
    msg.check(config)?;
    Ok(generate_tag(config, &msg.source, key)? == msg.tag)
}

/// Wire form: source bits then tag bits, MSB-first, zero-padded to a byte.
pub fn encode_message(msg: &Message) -> Vec<u8> {
    msg.source.concat(&msg.tag).to_bytes()
}

pub fn decode_message(bytes: &[u8], config: &AuthConfig) -> Result<Message> {
    let total = config.source_len() + config.tag_len();
    let expected = total.div_ceil(8);
    if bytes.len() > expected {
        return Err(Error::Malformed(format!(
            "{} trailing bytes after a {expected}-byte message",
            bytes.len() - expected
        )));
    }
    let bits = BitVector::from_bytes(bytes, total)?;
    Ok(Message {
        source: bits.slice(0, config.source_len()),
        tag: bits.slice(config.source_len(), config.tag_len()),
    })
}

/// Parameters echoed in a key file header.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KeyHeader {
    pub m: u32,
    pub r: u32,
    pub source_len: usize,
    pub tag_len: usize,
}

impl KeyHeader {
    pub fn of(config: &AuthConfig) -> Self {
        KeyHeader {
            m: config.code().m(),
            r: config.code().r(),
            source_len: config.source_len(),
            tag_len: config.tag_len(),
        }
    }
}

impl fmt::Display for KeyHeader {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "rmacode m={} r={} M={} l={}",
            self.m, self.r, self.source_len, self.tag_len
        )
    }
}

/// Two-line key file: the parameter header, then `k1=<hex> k2=<hex>` where
/// `k1` is the length-`n` indicator and both are MSB-first packed.
pub fn write_key_file(config: &AuthConfig, key: &AuthKey) -> String {
    format!(
        "{}\nk1={} k2={}\n",
        KeyHeader::of(config),
        key.indicator(config.n()).to_hex(),
        key.k2.to_hex()
    )
}

pub fn read_key_file(text: &str) -> Result<(KeyHeader, AuthKey)> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header_line = lines
        .next()
        .ok_or_else(|| Error::Malformed("empty key file".into()))?;
    let key_line = lines
        .next()
        .ok_or_else(|| Error::Malformed("key file is missing the key line".into()))?;
    if lines.next().is_some() {
        return Err(Error::Malformed("unexpected extra lines in key file".into()));
    }

    let mut fields = header_line.split_whitespace();
    if fields.next() != Some("rmacode") {
        return Err(Error::Malformed("key file header must start with 'rmacode'".into()));
    }
    let (mut m, mut r, mut source_len, mut tag_len) = (None, None, None, None);
    for field in fields {
        let (name, value) = field
            .split_once('=')
            .ok_or_else(|| Error::Malformed(format!("bad header field {field:?}")))?;
        let value: u64 = value
            .parse()
            .map_err(|_| Error::Malformed(format!("bad number in header field {field:?}")))?;
        match name {
            "m" => m = Some(value as u32),
            "r" => r = Some(value as u32),
            "M" => source_len = Some(value as usize),
            "l" => tag_len = Some(value as usize),
            _ => return Err(Error::Malformed(format!("unknown header field {name:?}"))),
        }
    }
    let missing = |name: &str| Error::Malformed(format!("key file header is missing {name}"));
    let header = KeyHeader {
        m: m.ok_or_else(|| missing("m"))?,
        r: r.ok_or_else(|| missing("r"))?,
        source_len: source_len.ok_or_else(|| missing("M"))?,
        tag_len: tag_len.ok_or_else(|| missing("l"))?,
    };
    if header.m < 1 || header.m > crate::rm_code::MAX_M {
        return Err(Error::Malformed(format!("unsupported m={} in key file", header.m)));
    }

    let (mut k1_hex, mut k2_hex) = (None, None);
    for field in key_line.split_whitespace() {
        match field.split_once('=') {
            Some(("k1", v)) => k1_hex = Some(v),
            Some(("k2", v)) => k2_hex = Some(v),
            _ => return Err(Error::Malformed(format!("bad key field {field:?}"))),
        }
    }
    let n = 1usize << header.m;
    let indicator = BitVector::from_hex(
        k1_hex.ok_or_else(|| Error::Malformed("missing k1".into()))?,
        n,
    )?;
    let k2 = BitVector::from_hex(
        k2_hex.ok_or_else(|| Error::Malformed("missing k2".into()))?,
        header.tag_len,
    )?;
    if indicator.weight() != header.tag_len {
        return Err(Error::Malformed(format!(
            "k1 has weight {}, expected l={}",
            indicator.weight(),
            header.tag_len
        )));
    }
    Ok((header, AuthKey::from_indicator(&indicator, k2)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    fn toy() -> AuthConfig {
        AuthConfig::rm(2, 1, 2, 1).unwrap()
    }

    fn key(k1: &[usize], k2: &str, n: usize) -> AuthKey {
        AuthKey::new(k1.to_vec(), bv(k2), n).unwrap()
    }

    #[test]
    fn key_shape_and_determinism() {
        let config = toy();
        for seed in 0..50 {
            let k = sample_key(&config, seed);
            assert_eq!(k.k1().len(), 1);
            assert!(k.k1()[0] < 4);
            assert_eq!(k.k2().len(), 1);
            assert_eq!(k, sample_key(&config, seed));
        }
        let big = AuthConfig::rm(6, 1, 4, 3).unwrap();
        let k = sample_key(&big, 99);
        assert_eq!(k.k1().len(), 3);
        assert!(k.k1().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn key_validation() {
        assert!(AuthKey::new(vec![2, 1], bv("00"), 4).is_err());
        assert!(AuthKey::new(vec![1, 1], bv("00"), 4).is_err());
        assert!(AuthKey::new(vec![4], bv("0"), 4).is_err());
        assert!(AuthKey::new(vec![1], bv("00"), 4).is_err());
        let k = AuthKey::from_indicator(&bv("0101"), bv("10")).unwrap();
        assert_eq!(k.k1(), &[1, 3]);
        assert_eq!(k.indicator(4), bv("0101"));
    }

    #[test]
    fn projection_examples() {
        assert_eq!(project(&bv("1100"), &[0]).unwrap(), bv("1"));
        assert_eq!(project(&bv("1100"), &[2, 3]).unwrap(), bv("00"));
        assert_eq!(project(&bv("1010"), &[0, 2]).unwrap(), bv("11"));
        assert!(matches!(project(&bv("1010"), &[4]), Err(Error::Index { .. })));
    }

    #[test]
    fn tag_examples() {
        let config = toy();
        assert_eq!(generate_tag(&config, &bv("10"), &key(&[0], "0", 4)).unwrap(), bv("1"));
        for k1 in 0..4 {
            assert_eq!(generate_tag(&config, &bv("00"), &key(&[k1], "0", 4)).unwrap(), bv("0"));
        }
        assert_eq!(generate_tag(&config, &bv("11"), &key(&[3], "1", 4)).unwrap(), bv("1"));
        assert!(generate_tag(&config, &bv("1"), &key(&[3], "1", 4)).is_err());
    }

    #[test]
    fn verify_examples() {
        let config = toy();
        let k = key(&[0], "0", 4);
        assert!(verify(&config, &Message::new(bv("01"), bv("1")), &k).unwrap());
        assert!(!verify(&config, &Message::new(bv("01"), bv("0")), &k).unwrap());
        assert!(verify(&config, &Message::new(bv("01"), bv("10")), &k).is_err());
    }

    #[test]
    fn wire_format() {
        let config = toy();
        let msg = Message::new(bv("01"), bv("1"));
        assert_eq!(encode_message(&msg), vec![0x60]);
        assert_eq!(decode_message(&[0x60], &config).unwrap(), msg);
        assert!(decode_message(&[], &config).is_err());
        assert!(decode_message(&[0x60, 0x00], &config).is_err());
        assert!(decode_message(&[0x61], &config).is_err());
    }

    #[test]
    fn key_file_roundtrip() {
        let config = AuthConfig::rm(4, 1, 4, 3).unwrap();
        let k = sample_key(&config, 42);
        let text = write_key_file(&config, &k);
        assert!(text.starts_with("rmacode m=4 r=1 M=4 l=3\nk1="));
        let (header, parsed) = read_key_file(&text).unwrap();
        assert_eq!(header, KeyHeader::of(&config));
        assert_eq!(parsed, k);
    }

    #[test]
    fn key_file_rejects_garbage() {
        assert!(read_key_file("").is_err());
        assert!(read_key_file("rmacode m=2 r=1 M=2 l=1\n").is_err());
        assert!(read_key_file("rmacode m=2 r=1 M=2 l=1\nk1=c0 k2=00\n").is_err());
        assert!(read_key_file("other m=2 r=1 M=2 l=1\nk1=80 k2=00\n").is_err());
        assert!(read_key_file("rmacode m=2 r=1 M=2 l=1\nk1=80 k2=00\n").is_ok());
    }
}
