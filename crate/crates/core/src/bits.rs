//! Fixed-length bit strings used for candidate IDs and broadcast payloads.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;

use crate::error::Error;

/// A bit string of declared length.
///
/// Position 1 (index 0) is the most significant bit, so two strings of equal
/// length order exactly like the unsigned integers they spell. The empty
/// string `ε` orders below every non-empty string. Unequal lengths compare
/// lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Bitstring {
    len: usize,
    // Bit `i` lives in word `i / 64` at shift `63 - i % 64`. Unused trailing
    // bits are always zero.
    words: SmallVec<[u64; 4]>,
}

impl Bitstring {
    /// The empty string `ε`.
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn zeros(len: usize) -> Self {
        let mut words = SmallVec::new();
        words.resize(len.div_ceil(64), 0);
        Self { len, words }
    }

    pub fn ones(len: usize) -> Self {
        let mut s = Self::zeros(len);
        for i in 0..len {
            s.set(i, true);
        }
        s
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut s = Self::zeros(bits.len());
        for (i, b) in bits.into_iter().enumerate() {
            s.set(i, b);
        }
        s
    }

    /// The low `len` bits of `value`, most significant first.
    pub fn from_u64(value: u64, len: usize) -> Self {
        assert!(len <= 64, "from_u64 supports at most 64 bits");
        Self::from_bits((0..len).map(|i| (value >> (len - 1 - i)) & 1 == 1))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Bit at zero-based index `i`.
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        (self.words[i / 64] >> (63 - i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let mask = 1u64 << (63 - i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// The first `len` bits.
    pub fn prefix(&self, len: usize) -> Bitstring {
        assert!(len <= self.len);
        Self::from_bits((0..len).map(|i| self.get(i)))
    }

    /// Bitwise OR of two strings of equal length.
    pub fn or(&self, other: &Bitstring) -> Bitstring {
        assert_eq!(self.len, other.len, "OR of unequal lengths");
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
        out
    }

    /// True when every 1 of `self` is also a 1 of `other`.
    pub fn is_covered_by(&self, other: &Bitstring) -> bool {
        self.len == other.len && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }
}

impl Ord for Bitstring {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.len == other.len {
            return self.words.cmp(&other.words);
        }
        let common = self.len.min(other.len);
        for i in 0..common {
            match self.get(i).cmp(&other.get(i)) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        self.len.cmp(&other.len)
    }
}

impl PartialOrd for Bitstring {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            f.write_str("ε")
        } else {
            write!(f, "\"{self}\"")
        }
    }
}

impl FromStr for Bitstring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidBitstring(format!("unexpected character {other:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_bits(bits))
    }
}

impl Serialize for Bitstring {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Bitstring {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bs(s: &str) -> Bitstring {
        s.parse().unwrap()
    }

    #[test]
    fn empty_is_below_everything() {
        assert!(Bitstring::empty() < bs("0"));
        assert!(Bitstring::empty() < bs("0000"));
        assert_eq!(Bitstring::empty().to_string(), "");
    }

    #[test]
    fn msb_first_order() {
        assert!(bs("1000") > bs("0111"));
        assert!(bs("0110") < bs("1011"));
        assert_eq!(bs("1011").prefix(2), bs("10"));
    }

    #[test]
    fn or_and_cover() {
        let m = bs("1010").or(&bs("0110"));
        assert_eq!(m, bs("1110"));
        assert!(bs("1010").is_covered_by(&m));
        assert!(!bs("0001").is_covered_by(&m));
        assert_eq!(m.count_ones(), 3);
    }

    #[test]
    fn rejects_garbage() {
        assert!("10x".parse::<Bitstring>().is_err());
    }

    #[test]
    fn wide_strings_span_words() {
        let mut s = Bitstring::zeros(130);
        s.set(0, true);
        s.set(129, true);
        assert_eq!(s.count_ones(), 2);
        assert!(s.get(129));
        let t: Bitstring = s.to_string().parse().unwrap();
        assert_eq!(s, t);
    }

    proptest! {
        #[test]
        fn equal_length_order_matches_integers(a in any::<u64>(), b in any::<u64>(), len in 1usize..=64) {
            let mask = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
            let (a, b) = (a & mask, b & mask);
            prop_assert_eq!(Bitstring::from_u64(a, len).cmp(&Bitstring::from_u64(b, len)), a.cmp(&b));
        }

        #[test]
        fn text_roundtrip(bits in proptest::collection::vec(any::<bool>(), 0..200)) {
            let s = Bitstring::from_bits(bits.clone());
            let back: Bitstring = s.to_string().parse().unwrap();
            prop_assert_eq!(back.iter().collect::<Vec<_>>(), bits);
        }
    }
}
