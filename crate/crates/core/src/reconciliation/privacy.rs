//! Toeplitz hashing over GF(2) and the frame checksum.

use rand::RngCore;

use crate::rng::{stream, Domain};
use crate::{Error, Result};

fn pack(bits: impl ExactSizeIterator<Item = bool>) -> Vec<u64> {
    let mut words = vec![0u64; bits.len().div_ceil(64) + 1];
    for (i, b) in bits.enumerate() {
        if b {
            words[i / 64] |= 1 << (i % 64);
        }
    }
    words
}

/// 64 bits of `words` starting at bit `offset`.
fn window(words: &[u64], offset: usize) -> u64 {
    let (w, s) = (offset / 64, offset % 64);
    if s == 0 {
        words[w]
    } else {
        (words[w] >> s) | (words[w + 1] << (64 - s))
    }
}

/// Compresses `bits` to `out_len` bits with a random Toeplitz matrix derived
/// from `seed`.
///
/// The matrix is `T[i][j] = r[i − j + n − 1]` for a random string `r` of
/// `n + out_len − 1` bits, so output bit `i` is the parity of
/// `r[i..i+n] · reverse(bits)`.
pub fn privacy_amplification(bits: &[bool], seed: u64, out_len: usize) -> Result<Vec<bool>> {
    let n = bits.len();
    if out_len > n {
        return Err(Error::usage(format!("cannot extract {out_len} bits from {n}")));
    }
    if out_len == 0 {
        return Ok(Vec::new());
    }
    let mut rng = stream(seed, Domain::PrivacyAmplification, 0);
    let r_bits = n + out_len - 1;
    let mut r = vec![0u64; r_bits.div_ceil(64) + 2];
    for w in r.iter_mut().take(r_bits.div_ceil(64)) {
        *w = rng.next_u64();
    }
    // Mask bits beyond the string so both parties agree on trailing zeros.
    if !r_bits.is_multiple_of(64) {
        r[r_bits / 64] &= (1u64 << (r_bits % 64)) - 1;
    }
    let x = pack(bits.iter().rev().copied());
    let full_words = n / 64;
    let tail = n % 64;
    let tail_mask = if tail == 0 { 0 } else { (1u64 << tail) - 1 };
    Ok((0..out_len)
        .map(|i| {
            let mut acc = 0u64;
            for (w, xw) in x[..full_words].iter().enumerate() {
                acc ^= window(&r, i + 64 * w) & xw;
            }
            if tail != 0 {
                acc ^= window(&r, i + 64 * full_words) & x[full_words] & tail_mask;
            }
            acc.count_ones() % 2 == 1
        })
        .collect())
}

/// Modulus of the checksum polynomial hash (largest prime below 2³²).
const CHECKSUM_PRIME: u64 = 4_294_967_291;
/// Number of bits disclosed by [`checksum`].
pub const CHECKSUM_BITS: usize = 32;

/// 32-bit polynomial hash of a bit string: bytes are the coefficients,
/// evaluated at a point derived from `key` modulo a 32-bit prime. The
/// length is absorbed last.
pub fn checksum(bits: &[bool], key: u64) -> u32 {
    let point = 2 + key % (CHECKSUM_PRIME - 3);
    let mut h = 0u64;
    for chunk in bits.chunks(8) {
        let byte = chunk.iter().enumerate().fold(0u64, |acc, (i, &b)| acc | ((b as u64) << i));
        h = (h * point + byte + 1) % CHECKSUM_PRIME;
    }
    h = (h * point + bits.len() as u64 % CHECKSUM_PRIME) % CHECKSUM_PRIME;
    h as u32
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    /// Oracle: literal matrix-vector product over GF(2).
    fn naive(bits: &[bool], seed: u64, out_len: usize) -> Vec<bool> {
        let n = bits.len();
        let mut rng = stream(seed, Domain::PrivacyAmplification, 0);
        let r_bits = n + out_len - 1;
        let words: Vec<u64> = (0..r_bits.div_ceil(64)).map(|_| rng.next_u64()).collect();
        let r = |k: usize| (words[k / 64] >> (k % 64)) & 1 == 1;
        (0..out_len)
            .map(|i| (0..n).fold(false, |acc, j| acc ^ (r(i + n - 1 - j) & bits[j])))
            .collect()
    }

    #[test]
    fn matches_naive_product() {
        let mut rng = stream(5, Domain::Test, 0);
        for &(n, l) in &[(1, 1), (63, 10), (64, 64), (65, 3), (200, 130), (1000, 999)] {
            let bits: Vec<bool> = (0..n).map(|_| rng.random()).collect();
            assert_eq!(privacy_amplification(&bits, 9, l).unwrap(), naive(&bits, 9, l), "n={n} l={l}");
        }
    }

    #[test]
    fn deterministic_and_edge_cases() {
        let bits: Vec<bool> = (0..500).map(|i| i % 3 == 0).collect();
        assert_eq!(privacy_amplification(&bits, 1, 100).unwrap(), privacy_amplification(&bits, 1, 100).unwrap());
        assert!(privacy_amplification(&bits, 1, 0).unwrap().is_empty());
        assert!(matches!(privacy_amplification(&bits, 1, 501), Err(Error::Usage(_))));
    }

    #[test]
    fn single_flip_diffuses() {
        let mut rng = stream(6, Domain::Test, 0);
        let (n, l, trials) = (256, 64, 10_000);
        let mut flipped = 0usize;
        for t in 0..trials {
            let mut bits: Vec<bool> = (0..n).map(|_| rng.random()).collect();
            let a = privacy_amplification(&bits, t as u64, l).unwrap();
            let k = rng.random_range(0..n);
            bits[k] = !bits[k];
            let b = privacy_amplification(&bits, t as u64, l).unwrap();
            flipped += a.iter().zip(&b).filter(|(x, y)| x != y).count();
        }
        let frac = flipped as f64 / (trials * l) as f64;
        assert!((frac - 0.5).abs() < 0.02, "fraction {frac}");
    }

    #[test]
    fn checksum_detects_changes() {
        let bits: Vec<bool> = (0..4096).map(|i| (i * 7) % 5 == 0).collect();
        let c = checksum(&bits, 42);
        assert_eq!(c, checksum(&bits, 42));
        for k in [0, 1, 100, 4095] {
            let mut other = bits.clone();
            other[k] = !other[k];
            assert_ne!(checksum(&other, 42), c);
        }
        assert_ne!(checksum(&bits[..4095], 42), c);
    }
}
