//! Carryless binary-polynomial arithmetic in GF(2^m).
//!
//! Elements are m-bit strings read as polynomials over GF(2); bit 1 of the
//! written form is the coefficient of x^(m-1) (see [`crate::bits`]). Fields
//! up to m = 64 take a single-limb fast path; wider fields (up to 4096) run
//! on limb arrays. All operations are pure functions on immutable values and
//! are safe to call concurrently.

mod table;

use crate::bits::Bits;
use serde::de::Error as _;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GfError {
    #[error("field mismatch: element width {0}, expected {1}")]
    FieldMismatch(usize, usize),
    #[error("invalid reduction polynomial: {0}")]
    InvalidPolynomial(String),
    #[error("no built-in irreducible polynomial of degree {0}")]
    NoStandardPolynomial(usize),
    #[error("degree-{0} polynomial is not in the built-in table; only m <= 16 is validated from scratch")]
    UntrustedPolynomial(usize),
    #[error("empty coefficient list")]
    EmptyCoefficients,
    #[error("cannot take {0} bits from a {1}-bit element")]
    TruncateTooLong(usize, usize),
    #[error("zero has no inverse")]
    ZeroInverse,
}

/// A binary field GF(2^m) fixed by its reduction polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    m: usize,
    poly: Bits, // m+1 bits, degree exactly m, constant term 1
}

/// An element of some GF(2^m); carries only its bit string. Width is checked
/// against the field on every operation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    bits: Bits,
}

impl FieldSpec {
    /// Field with the built-in low-weight irreducible polynomial for `m`.
    pub fn standard(m: usize) -> Result<FieldSpec, GfError> {
        let taps = table::standard_taps(m).ok_or(GfError::NoStandardPolynomial(m))?;
        let mut poly = Bits::zero(m + 1);
        poly.set_coeff(m, true);
        poly.set_coeff(0, true);
        for &t in taps.iter() {
            if t != 0 {
                poly.set_coeff(t as usize, true);
            }
        }
        Ok(FieldSpec { m, poly })
    }

    /// Field with an explicit reduction polynomial (an (m+1)-bit string).
    ///
    /// Degree and constant term are always checked. Irreducibility is proven
    /// by exhaustive trial division for m <= 16; wider polynomials are only
    /// accepted when they match the built-in table.
    pub fn new(m: usize, poly: Bits) -> Result<FieldSpec, GfError> {
        if m == 0 {
            return Err(GfError::InvalidPolynomial("m must be positive".into()));
        }
        if poly.len() != m + 1 {
            return Err(GfError::InvalidPolynomial(format!(
                "expected {} bits, got {}",
                m + 1,
                poly.len()
            )));
        }
        if poly.degree() != Some(m) {
            return Err(GfError::InvalidPolynomial("top coefficient not set".into()));
        }
        if !poly.last_bit() {
            return Err(GfError::InvalidPolynomial("constant term not set".into()));
        }
        if m <= 16 {
            if !trial_division_irreducible(poly.to_u64() as u32, m) {
                return Err(GfError::InvalidPolynomial("reducible".into()));
            }
        } else {
            let standard = FieldSpec::standard(m)?;
            if standard.poly != poly {
                return Err(GfError::UntrustedPolynomial(m));
            }
        }
        Ok(FieldSpec { m, poly })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn reduction_poly(&self) -> &Bits {
        &self.poly
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            bits: Bits::zero(self.m),
        }
    }

    pub fn one(&self) -> FieldElement {
        self.element(1).unwrap()
    }

    /// Element from an integer value (m <= 64 convenience).
    pub fn element(&self, val: u64) -> Result<FieldElement, GfError> {
        let bits = Bits::from_u64(val, self.m)
            .map_err(|_| GfError::FieldMismatch(64, self.m))?;
        Ok(FieldElement { bits })
    }

    pub fn element_from_bits(&self, bits: Bits) -> Result<FieldElement, GfError> {
        if bits.len() != self.m {
            return Err(GfError::FieldMismatch(bits.len(), self.m));
        }
        Ok(FieldElement { bits })
    }

    pub fn random<R: rand::Rng>(&self, rng: &mut R) -> FieldElement {
        FieldElement {
            bits: Bits::random(self.m, rng),
        }
    }
}

impl FieldElement {
    pub fn bits(&self) -> &Bits {
        &self.bits
    }

    pub fn into_bits(self) -> Bits {
        self.bits
    }

    pub fn width(&self) -> usize {
        self.bits.len()
    }

    pub fn is_zero(&self) -> bool {
        self.bits.is_zero()
    }

    pub fn to_u64(&self) -> u64 {
        self.bits.to_u64()
    }
}

/// Addition: bitwise XOR of equal-width elements.
pub fn gf_add(a: &FieldElement, b: &FieldElement) -> Result<FieldElement, GfError> {
    let bits = a
        .bits
        .xor(&b.bits)
        .map_err(|_| GfError::FieldMismatch(b.width(), a.width()))?;
    Ok(FieldElement { bits })
}

/// Carryless product reduced modulo the field's polynomial.
pub fn gf_mul(a: &FieldElement, b: &FieldElement, f: &FieldSpec) -> Result<FieldElement, GfError> {
    check_width(a, f)?;
    check_width(b, f)?;
    if f.m < 64 {
        let p = mul_small(a.to_u64(), b.to_u64(), f.poly.to_u64(), f.m);
        return f.element(p);
    }
    Ok(FieldElement {
        bits: mul_wide(&a.bits, &b.bits, f),
    })
}

/// Square-and-multiply exponentiation; gf_pow(a, 0) is 1.
pub fn gf_pow(a: &FieldElement, e: u64, f: &FieldSpec) -> Result<FieldElement, GfError> {
    check_width(a, f)?;
    let mut result = f.one();
    let mut base = a.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = gf_mul(&result, &base, f)?;
        }
        e >>= 1;
        if e > 0 {
            base = gf_mul(&base, &base, f)?;
        }
    }
    Ok(result)
}

/// Multiplicative inverse by Fermat: a^(2^m - 2).
pub fn gf_inv(a: &FieldElement, f: &FieldSpec) -> Result<FieldElement, GfError> {
    check_width(a, f)?;
    if a.is_zero() {
        return Err(GfError::ZeroInverse);
    }
    // 2^m - 2 = 2 + 4 + ... + 2^(m-1)
    let mut sq = a.clone();
    let mut acc = f.one();
    for _ in 1..f.m {
        sq = gf_mul(&sq, &sq, f)?;
        acc = gf_mul(&acc, &sq, f)?;
    }
    Ok(acc)
}

/// Evaluates sum_{i=1..r} coeffs[i-1] * point^i by Horner's scheme.
/// Note the sum starts at i = 1: there is no constant term.
pub fn poly_eval(
    coeffs: &[FieldElement],
    point: &FieldElement,
    f: &FieldSpec,
) -> Result<FieldElement, GfError> {
    let last = coeffs.last().ok_or(GfError::EmptyCoefficients)?;
    check_width(point, f)?;
    check_width(last, f)?;
    let mut acc = last.clone();
    for c in coeffs[..coeffs.len() - 1].iter().rev() {
        check_width(c, f)?;
        acc = gf_mul(&acc, point, f)?;
        acc = gf_add(&acc, c)?;
    }
    gf_mul(&acc, point, f)
}

/// First `t` bits of the element's written form (coefficients of
/// x^(m-1)..x^(m-t)).
pub fn truncate(a: &FieldElement, t: usize) -> Result<Bits, GfError> {
    if t > a.width() {
        return Err(GfError::TruncateTooLong(t, a.width()));
    }
    Ok(a.bits.high_bits(t))
}

fn check_width(a: &FieldElement, f: &FieldSpec) -> Result<(), GfError> {
    if a.width() != f.m {
        Err(GfError::FieldMismatch(a.width(), f.m))
    } else {
        Ok(())
    }
}

/// Shift-and-reduce multiply for m < 64 (the poly fits in one limb).
#[inline]
fn mul_small(a: u64, b: u64, poly: u64, m: usize) -> u64 {
    let top = 1u64 << m;
    let mut work = a;
    let mut acc = 0u64;
    let mut b = b;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= work;
        }
        b >>= 1;
        if b != 0 {
            work <<= 1;
            if work & top != 0 {
                work ^= poly;
            }
        }
    }
    acc
}

fn mul_wide(a: &Bits, b: &Bits, f: &FieldSpec) -> Bits {
    let m = f.m;
    let words = (m + 1).div_ceil(64);
    let mut work: SmallVec<[u64; 8]> = SmallVec::from_slice(a.limbs());
    work.resize(words, 0);
    let mut acc: SmallVec<[u64; 8]> = smallvec::smallvec![0; words];
    let poly = f.poly.limbs();
    let top_word = m / 64;
    let top_mask = 1u64 << (m % 64);
    for j in 0..m {
        if b.coeff(j) {
            for (x, w) in acc.iter_mut().zip(work.iter()) {
                *x ^= w;
            }
        }
        if j + 1 < m {
            // work <<= 1, then clear bit m by subtracting the poly
            let mut carry = 0u64;
            for w in work.iter_mut() {
                let next = *w >> 63;
                *w = (*w << 1) | carry;
                carry = next;
            }
            if work[top_word] & top_mask != 0 {
                for (w, p) in work.iter_mut().zip(poly.iter()) {
                    *w ^= p;
                }
            }
        }
    }
    let mut out = Bits::zero(m);
    out.limbs_mut()
        .copy_from_slice(&acc[..m.div_ceil(64)]);
    out.mask_top();
    out
}

/// Irreducibility by exhaustive trial division, for m <= 16. Divides by every
/// polynomial of degree 1..=m/2; compositeness of a trial divisor is harmless.
fn trial_division_irreducible(poly: u32, m: usize) -> bool {
    debug_assert!(m <= 16);
    if m == 1 {
        return true;
    }
    for g in 2u32..1 << (m / 2 + 1) {
        if g.is_power_of_two() {
            continue; // x^k divides nothing with constant term 1
        }
        let mut rem = poly;
        let dg = 31 - g.leading_zeros();
        loop {
            let dr = 31u32.wrapping_sub(rem.leading_zeros());
            if rem == 0 || dr < dg {
                break;
            }
            rem ^= g << (dr - dg);
        }
        if rem == 0 {
            return false;
        }
    }
    true
}

impl Serialize for FieldSpec {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = ser.serialize_struct("FieldSpec", 2)?;
        s.serialize_field("m", &self.m)?;
        s.serialize_field("reduction_poly", &self.poly.to_hex())?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            m: usize,
            reduction_poly: String,
        }
        let raw = Raw::deserialize(de)?;
        let poly = Bits::from_hex(&raw.reduction_poly, raw.m + 1)
            .map_err(|e| D::Error::custom(e.to_string()))?;
        FieldSpec::new(raw.m, poly).map_err(|e| D::Error::custom(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf8() -> FieldSpec {
        // x^3 + x + 1
        FieldSpec::new(3, Bits::from_u64(0b1011, 4).unwrap()).unwrap()
    }

    #[test]
    fn add_is_xor() {
        let f = gf8();
        let a = f.element(0b101).unwrap();
        let b = f.element(0b011).unwrap();
        assert_eq!(gf_add(&a, &b).unwrap().to_u64(), 0b110);
        assert_eq!(gf_add(&a, &f.zero()).unwrap(), a);
        assert!(gf_add(&a, &a).unwrap().is_zero());
        let wide = FieldSpec::standard(4).unwrap().element(1).unwrap();
        assert!(matches!(gf_add(&a, &wide), Err(GfError::FieldMismatch(..))));
    }

    #[test]
    fn mul_examples() {
        let f = gf8();
        let x = f.element(0b010).unwrap();
        assert_eq!(gf_mul(&x, &x, &f).unwrap().to_u64(), 0b100);
        let a = f.element(0b011).unwrap();
        let b = f.element(0b101).unwrap();
        assert_eq!(gf_mul(&a, &b, &f).unwrap().to_u64(), 0b100);
        assert_eq!(gf_mul(&a, &f.one(), &f).unwrap(), a);
    }

    #[test]
    fn pow_examples() {
        let f = gf8();
        let x = f.element(0b010).unwrap();
        assert_eq!(gf_pow(&x, 0, &f).unwrap(), f.one());
        assert_eq!(gf_pow(&x, 1, &f).unwrap(), x);
        // x^3 = x + 1 under x^3 + x + 1
        assert_eq!(gf_pow(&x, 3, &f).unwrap().to_u64(), 0b011);
    }

    #[test]
    fn poly_eval_no_constant_term() {
        let f = gf8();
        let zero = [f.zero(), f.zero()];
        let p = f.element(0b010).unwrap();
        assert!(poly_eval(&zero, &p, &f).unwrap().is_zero());
        assert!(poly_eval(&[f.one()], &f.zero(), &f).unwrap().is_zero());
        // single linear term: 1 * p
        assert_eq!(poly_eval(&[f.one()], &p, &f).unwrap(), p);
        assert!(matches!(
            poly_eval(&[], &p, &f),
            Err(GfError::EmptyCoefficients)
        ));
    }

    #[test]
    fn truncate_examples() {
        let f4 = FieldSpec::standard(4).unwrap();
        let a = f4.element(0b1011).unwrap();
        assert_eq!(truncate(&a, 2).unwrap().to_u64(), 0b10);
        assert_eq!(truncate(&a, 4).unwrap(), *a.bits());
        let b = f4.element(0b0110).unwrap();
        assert_eq!(truncate(&b, 3).unwrap().to_u64(), 0b011);
        assert!(truncate(&a, 5).is_err());
    }

    /// Exhaustive field-axiom check for tiny m; the same loops back the
    /// acceptance suite at m = 3, 4.
    fn axioms_exhaustive(f: &FieldSpec) {
        let n = 1u64 << f.m();
        for a in 0..n {
            let ea = f.element(a).unwrap();
            assert!(gf_mul(&ea, &f.zero(), f).unwrap().is_zero());
            if a != 0 {
                let inv = gf_inv(&ea, f).unwrap();
                assert_eq!(gf_mul(&ea, &inv, f).unwrap(), f.one());
            }
            for b in 0..n {
                let eb = f.element(b).unwrap();
                assert_eq!(gf_add(&ea, &eb).unwrap(), gf_add(&eb, &ea).unwrap());
                assert_eq!(gf_mul(&ea, &eb, f).unwrap(), gf_mul(&eb, &ea, f).unwrap());
                for c in 0..n {
                    let ec = f.element(c).unwrap();
                    let ab_c = gf_mul(&gf_mul(&ea, &eb, f).unwrap(), &ec, f).unwrap();
                    let a_bc = gf_mul(&ea, &gf_mul(&eb, &ec, f).unwrap(), f).unwrap();
                    assert_eq!(ab_c, a_bc);
                    let lhs = gf_mul(&ea, &gf_add(&eb, &ec).unwrap(), f).unwrap();
                    let rhs = gf_add(
                        &gf_mul(&ea, &eb, f).unwrap(),
                        &gf_mul(&ea, &ec, f).unwrap(),
                    )
                    .unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn axioms_m2_m3_m4() {
        for m in 2..=4 {
            axioms_exhaustive(&FieldSpec::standard(m).unwrap());
        }
    }

    #[test]
    fn lagrange_small_fields() {
        for m in 1..=8 {
            let f = FieldSpec::standard(m).unwrap();
            for a in 1..1u64 << m {
                let e = f.element(a).unwrap();
                assert_eq!(gf_pow(&e, (1 << m) - 1, &f).unwrap(), f.one());
            }
        }
    }

    #[test]
    fn rejects_reducible_and_malformed() {
        // x^2 + 1 = (x+1)^2
        assert!(FieldSpec::new(2, Bits::from_u64(0b101, 3).unwrap()).is_err());
        // constant term missing
        assert!(FieldSpec::new(2, Bits::from_u64(0b110, 3).unwrap()).is_err());
        // top bit missing
        assert!(FieldSpec::new(3, Bits::from_u64(0b0011, 4).unwrap()).is_err());
        // m > 16 not in the table
        let mut p = Bits::zero(18);
        p.set_coeff(17, true);
        p.set_coeff(5, true);
        p.set_coeff(0, true);
        assert!(matches!(
            FieldSpec::new(17, p),
            Err(GfError::UntrustedPolynomial(17)) | Err(GfError::InvalidPolynomial(_))
        ));
    }

    #[test]
    fn standard_table_small_degrees_validate() {
        for m in 1..=16 {
            let f = FieldSpec::standard(m).unwrap();
            assert!(FieldSpec::new(m, f.reduction_poly().clone()).is_ok());
        }
    }

    /// Frobenius sanity for wider table entries: in GF(2^m), a^(2^m) = a.
    /// Fails for most reducible moduli, so it guards the generated table.
    #[test]
    fn standard_table_frobenius_sanity() {
        let mut rng = crate::rng::stream(0xf1e1d, 0);
        for m in [17, 24, 31, 32, 33, 48, 56, 64, 100, 128, 163, 256, 521, 1024, 4096] {
            let f = match FieldSpec::standard(m) {
                Ok(f) => f,
                Err(_) => continue, // not every width is in the table
            };
            for e in [f.element(2).unwrap(), f.random(&mut rng)] {
                let mut v = e.clone();
                for _ in 0..m {
                    v = gf_mul(&v, &v, &f).unwrap();
                }
                assert_eq!(v, e, "frobenius failed at m={m}");
            }
        }
    }

    #[test]
    fn wide_inverse_roundtrip() {
        let mut rng = crate::rng::stream(0xabc, 7);
        for m in [64, 65, 128, 256] {
            let f = FieldSpec::standard(m).unwrap();
            let a = f.random(&mut rng);
            if a.is_zero() {
                continue;
            }
            let inv = gf_inv(&a, &f).unwrap();
            assert_eq!(gf_mul(&a, &inv, &f).unwrap(), f.one());
        }
    }

    #[test]
    fn fieldspec_serde_roundtrip() {
        let f = FieldSpec::standard(8).unwrap();
        let json = serde_json::to_string(&f).unwrap();
        let back: FieldSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
    }
}
