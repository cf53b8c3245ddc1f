//! Fixed-length bit strings.
//!
//! The whole crate shares one bit-order convention: a string of length `len`
//! is written most-significant bit first, and "bit 1" of the written form is
//! the coefficient of x^(len-1) when the string is read as a binary
//! polynomial. Internally bit `j` (little-endian, `j = 0` is the last written
//! bit / the constant term) lives at limb `j / 64`, position `j % 64`.

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use std::fmt;

type Limbs = SmallVec<[u64; 2]>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Bits {
    len: usize,
    limbs: Limbs,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum BitsError {
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("value does not fit in {0} bits")]
    Overflow(usize),
    #[error("invalid hex string {0:?} for {1} bits")]
    BadHex(String, usize),
}

fn limb_count(len: usize) -> usize {
    len.div_ceil(64)
}

impl Bits {
    pub fn zero(len: usize) -> Self {
        Bits {
            len,
            limbs: smallvec::smallvec![0; limb_count(len)],
        }
    }

    /// Builds an `len`-bit string whose integer value is `val` (bit 0 of
    /// `val` = constant term = last written bit).
    pub fn from_u64(val: u64, len: usize) -> Result<Self, BitsError> {
        if len < 64 && val >> len != 0 {
            return Err(BitsError::Overflow(len));
        }
        let mut b = Bits::zero(len);
        if len > 0 {
            b.limbs[0] = val;
        }
        Ok(b)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.iter().all(|&w| w == 0)
    }

    /// Coefficient of x^j.
    #[inline]
    pub fn coeff(&self, j: usize) -> bool {
        debug_assert!(j < self.len);
        self.limbs[j / 64] >> (j % 64) & 1 == 1
    }

    #[inline]
    pub fn set_coeff(&mut self, j: usize, v: bool) {
        debug_assert!(j < self.len);
        let mask = 1u64 << (j % 64);
        if v {
            self.limbs[j / 64] |= mask;
        } else {
            self.limbs[j / 64] &= !mask;
        }
    }

    pub fn flip_coeff(&mut self, j: usize) {
        debug_assert!(j < self.len);
        self.limbs[j / 64] ^= 1u64 << (j % 64);
    }

    /// The last bit of the written form (the constant term).
    pub fn last_bit(&self) -> bool {
        self.len > 0 && self.limbs[0] & 1 == 1
    }

    /// Index of the highest set coefficient, or None for the zero string.
    pub fn degree(&self) -> Option<usize> {
        for (i, &w) in self.limbs.iter().enumerate().rev() {
            if w != 0 {
                return Some(i * 64 + 63 - w.leading_zeros() as usize);
            }
        }
        None
    }

    pub fn xor_assign(&mut self, other: &Bits) -> Result<(), BitsError> {
        if self.len != other.len {
            return Err(BitsError::LengthMismatch(self.len, other.len));
        }
        for (a, b) in self.limbs.iter_mut().zip(other.limbs.iter()) {
            *a ^= b;
        }
        Ok(())
    }

    pub fn xor(&self, other: &Bits) -> Result<Bits, BitsError> {
        let mut out = self.clone();
        out.xor_assign(other)?;
        Ok(out)
    }

    /// First `t` bits of the written form, i.e. coefficients
    /// x^(len-1)..x^(len-t), re-indexed as a t-bit string.
    pub fn high_bits(&self, t: usize) -> Bits {
        assert!(t <= self.len);
        let shift = self.len - t;
        let mut out = Bits::zero(t);
        for j in 0..t {
            if self.coeff(j + shift) {
                out.set_coeff(j, true);
            }
        }
        out
    }

    /// Last `k` bits of the written form (coefficients x^(k-1)..x^0).
    pub fn low_bits(&self, k: usize) -> Bits {
        assert!(k <= self.len);
        let mut out = Bits::zero(k);
        for j in 0..k {
            if self.coeff(j) {
                out.set_coeff(j, true);
            }
        }
        out
    }

    /// Concatenation `high ∥ low` in the written order.
    pub fn concat(high: &Bits, low: &Bits) -> Bits {
        let mut out = Bits::zero(high.len + low.len);
        for j in 0..low.len {
            if low.coeff(j) {
                out.set_coeff(j, true);
            }
        }
        for j in 0..high.len {
            if high.coeff(j) {
                out.set_coeff(j + low.len, true);
            }
        }
        out
    }

    /// Integer value; only valid for len <= 64.
    pub fn to_u64(&self) -> u64 {
        assert!(self.len <= 64);
        if self.len == 0 {
            0
        } else {
            self.limbs[0]
        }
    }

    pub fn limbs(&self) -> &[u64] {
        &self.limbs
    }

    pub(crate) fn limbs_mut(&mut self) -> &mut [u64] {
        &mut self.limbs
    }

    pub fn random<R: rand::Rng>(len: usize, rng: &mut R) -> Bits {
        let mut b = Bits::zero(len);
        for w in b.limbs.iter_mut() {
            *w = rng.gen();
        }
        b.mask_top();
        b
    }

    pub(crate) fn mask_top(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(w) = self.limbs.last_mut() {
                *w &= (1u64 << rem) - 1;
            }
        } else if self.len == 0 {
            self.limbs.clear();
        }
    }

    /// Hex rendering of the written form, one digit per 4 bits, left-padded
    /// with zero bits to a whole number of digits.
    pub fn to_hex(&self) -> String {
        let digits = self.len.div_ceil(4);
        let mut s = String::with_capacity(digits);
        for d in (0..digits).rev() {
            let mut nib = 0u8;
            for k in 0..4 {
                let j = d * 4 + k;
                if j < self.len && self.coeff(j) {
                    nib |= 1 << k;
                }
            }
            s.push(char::from_digit(nib as u32, 16).unwrap());
        }
        if digits == 0 {
            s.push('0');
        }
        s
    }

    pub fn from_hex(s: &str, len: usize) -> Result<Bits, BitsError> {
        let digits = len.div_ceil(4).max(1);
        let bad = || BitsError::BadHex(s.to_string(), len);
        if s.len() != digits {
            return Err(bad());
        }
        let mut out = Bits::zero(len);
        for (pos, ch) in s.chars().rev().enumerate() {
            let nib = ch.to_digit(16).ok_or_else(bad)? as u64;
            for k in 0..4 {
                let j = pos * 4 + k;
                if nib >> k & 1 == 1 {
                    if j >= len {
                        return Err(bad());
                    }
                    out.set_coeff(j, true);
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bits<{}>({})", self.len, self.to_hex())
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl Serialize for Bits {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_hex())
    }
}

// Deserialization needs the length from context, so Bits deserializes via an
// intermediate hex string at the call sites that know the length.
#[derive(Serialize, Deserialize)]
pub struct HexBits(pub String);

impl HexBits {
    pub fn decode(&self, len: usize) -> Result<Bits, BitsError> {
        Bits::from_hex(&self.0, len)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn written_order_examples() {
        // 0b1011 written MSB-first: bit 1 = coeff of x^3.
        let b = Bits::from_u64(0b1011, 4).unwrap();
        assert!(b.coeff(3) && !b.coeff(2) && b.coeff(1) && b.coeff(0));
        assert_eq!(b.high_bits(2).to_u64(), 0b10);
        assert_eq!(b.low_bits(2).to_u64(), 0b11);
        assert_eq!(b.to_hex(), "b");
        assert!(b.last_bit());
    }

    #[test]
    fn concat_recovers_split() {
        for n in 0..=12usize {
            for t in 0..=n {
                for v in 0..1u64 << n {
                    let x = Bits::from_u64(v, n).unwrap();
                    let hi = x.high_bits(t);
                    let lo = x.low_bits(n - t);
                    assert_eq!(Bits::concat(&hi, &lo), x);
                }
            }
        }
    }

    #[test]
    fn empty_string() {
        let e = Bits::zero(0);
        assert!(e.is_empty() && e.is_zero() && !e.last_bit());
        assert_eq!(e.to_hex(), "0");
    }

    #[test]
    fn wide_roundtrip() {
        let mut rng = rand::rngs::mock::StepRng::new(0x9e3779b97f4a7c15, 0x517cc1b727220a95);
        for len in [65, 127, 128, 200, 521, 4096] {
            let b = Bits::random(len, &mut rng);
            assert_eq!(Bits::from_hex(&b.to_hex(), len).unwrap(), b);
        }
    }

    proptest! {
        #[test]
        fn hex_roundtrip(v in 0u64.., len in 1usize..=64) {
            let v = if len < 64 { v & ((1 << len) - 1) } else { v };
            let b = Bits::from_u64(v, len).unwrap();
            prop_assert_eq!(Bits::from_hex(&b.to_hex(), len).unwrap(), b);
        }

        #[test]
        fn xor_is_involutive(a in 0u64.., b in 0u64..) {
            let x = Bits::from_u64(a, 64).unwrap();
            let y = Bits::from_u64(b, 64).unwrap();
            let z = x.xor(&y).unwrap();
            prop_assert_eq!(z.xor(&y).unwrap(), x);
        }
    }
}
