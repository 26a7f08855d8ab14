//! Exact set arithmetic over F_p.
//!
//! Sets are dense bit-vectors of p bits. A sumset X+Y is computed by OR-ing
//! cyclic rotations of the larger operand's vector, one rotation per element
//! of the smaller operand, so the cost is O(min(|X|,|Y|) * p / 64).

use crate::error::{Error, Result};
use std::fmt;

const WORD_BITS: usize = 64;

/// The ambient prime modulus. Primality is certified at construction.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Largest modulus for which a dense bit-vector of p bits is affordable.
    pub const CAP: u64 = 1 << 26;

    pub fn new(p: u64) -> Result<Self> {
        if p > Self::CAP {
            return Err(Error::ExceedsCap(p, Self::CAP));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        // p < 2^26, so a*b < 2^52 never overflows.
        a * b % self.p
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse of a nonzero element.
    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(a != 0 && a < self.p);
        self.pow(a, self.p - 2)
    }
}

/// Deterministic trial division; moduli are capped at 2^26 so this is cheap.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// An immutable subset of F_p: dense membership bit-vector plus cached size.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FpSet {
    field: PrimeField,
    words: Vec<u64>,
    size: u64,
}

impl FpSet {
    pub fn empty(field: PrimeField) -> Self {
        let nwords = (field.p as usize).div_ceil(WORD_BITS);
        FpSet {
            field,
            words: vec![0; nwords],
            size: 0,
        }
    }

    /// The whole field.
    pub fn full(field: PrimeField) -> Self {
        let mut s = Self::empty(field);
        for w in &mut s.words {
            *w = u64::MAX;
        }
        s.mask_tail();
        s.size = field.p;
        s
    }

    /// Elements outside [0, p) are rejected, not reduced; duplicates collapse.
    pub fn from_elems(field: PrimeField, elems: &[u64]) -> Result<Self> {
        let mut s = Self::empty(field);
        for &e in elems {
            if e >= field.p {
                return Err(Error::OutOfRange(e, field.p));
            }
            s.insert_unchecked(e);
        }
        Ok(s)
    }

    pub fn singleton(field: PrimeField, e: u64) -> Result<Self> {
        Self::from_elems(field, &[e])
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn len(&self) -> u64 {
        self.size
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    #[inline]
    pub fn contains(&self, e: u64) -> bool {
        e < self.field.p && self.words[e as usize / WORD_BITS] >> (e as usize % WORD_BITS) & 1 == 1
    }

    /// Members in ascending order.
    pub fn elements(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let base = (i * WORD_BITS) as u64;
            BitIter { word: w, base }
        })
    }

    pub fn to_vec(&self) -> Vec<u64> {
        self.elements().collect()
    }

    fn insert_unchecked(&mut self, e: u64) {
        let (i, b) = (e as usize / WORD_BITS, e as usize % WORD_BITS);
        if self.words[i] >> b & 1 == 0 {
            self.words[i] |= 1 << b;
            self.size += 1;
        }
    }

    fn mask_tail(&mut self) {
        let p = self.field.p as usize;
        if p % WORD_BITS != 0 {
            let last = self.words.len() - 1;
            self.words[last] &= (1u64 << (p % WORD_BITS)) - 1;
        }
    }

    fn recount(&mut self) {
        self.size = self.words.iter().map(|w| w.count_ones() as u64).sum();
    }

    fn check_field(&self, other: &FpSet) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.p, other.field.p));
        }
        Ok(())
    }

    /// {x + y mod p : x in X, y in Y}.
    pub fn sumset(&self, other: &FpSet) -> Result<FpSet> {
        self.check_field(other)?;
        let (small, large) = if self.size <= other.size {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = FpSet::empty(self.field);
        for s in small.elements() {
            or_rotated(&mut out.words, &large.words, s, self.field.p);
        }
        out.mask_tail();
        out.recount();
        Ok(out)
    }

    /// {x - y mod p : x in X, y in Y}.
    pub fn difference(&self, other: &FpSet) -> Result<FpSet> {
        self.check_field(other)?;
        let p = self.field.p;
        let mut out = FpSet::empty(self.field);
        if self.size >= other.size {
            // X - y is the rotation of X by -y.
            for y in other.elements() {
                or_rotated(&mut out.words, &self.words, self.field.neg(y), p);
            }
        } else {
            // X - Y = union over x of the rotation of -Y by x.
            let neg = other.negate();
            for x in self.elements() {
                or_rotated(&mut out.words, &neg.words, x, p);
            }
        }
        out.mask_tail();
        out.recount();
        Ok(out)
    }

    /// {x * y mod p : x in X, y in Y}, with early exit once the result
    /// saturates F_p (or its nonzero part when neither operand contains 0).
    pub fn productset(&self, other: &FpSet) -> Result<FpSet> {
        self.check_field(other)?;
        let p = self.field.p;
        let cap = if self.contains(0) || other.contains(0) {
            p
        } else {
            p - 1
        };
        let mut out = FpSet::empty(self.field);
        let ys: Vec<u64> = other.to_vec();
        'outer: for x in self.elements() {
            for &y in &ys {
                out.insert_unchecked(x * y % p);
                if out.size == cap {
                    break 'outer;
                }
            }
        }
        Ok(out)
    }

    /// {a x mod p : x in X}. a = 0 collapses a nonempty set to {0}.
    pub fn dilate(&self, a: u64) -> FpSet {
        let p = self.field.p;
        let a = a % p;
        let mut out = FpSet::empty(self.field);
        if a == 0 {
            if !self.is_empty() {
                out.insert_unchecked(0);
            }
            return out;
        }
        for x in self.elements() {
            out.insert_unchecked(a * x % p);
        }
        out
    }

    /// {-x mod p : x in X}.
    pub fn negate(&self) -> FpSet {
        let mut out = FpSet::empty(self.field);
        for x in self.elements() {
            out.insert_unchecked(self.field.neg(x));
        }
        out
    }

    pub fn intersect(&self, other: &FpSet) -> Result<FpSet> {
        self.check_field(other)?;
        let mut out = self.clone();
        for (w, o) in out.words.iter_mut().zip(&other.words) {
            *w &= o;
        }
        out.recount();
        Ok(out)
    }

    pub fn union(&self, other: &FpSet) -> Result<FpSet> {
        self.check_field(other)?;
        let mut out = self.clone();
        for (w, o) in out.words.iter_mut().zip(&other.words) {
            *w |= o;
        }
        out.recount();
        Ok(out)
    }

    /// |X ∩ Y| without materializing the intersection.
    pub fn intersection_size(&self, other: &FpSet) -> Result<u64> {
        self.check_field(other)?;
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as u64)
            .sum())
    }

    pub fn remove(&self, e: u64) -> FpSet {
        let mut out = self.clone();
        if out.contains(e) {
            let (i, b) = (e as usize / WORD_BITS, e as usize % WORD_BITS);
            out.words[i] &= !(1u64 << b);
            out.size -= 1;
        }
        out
    }
}

struct BitIter {
    word: u64,
    base: u64,
}

impl Iterator for BitIter {
    type Item = u64;
    #[inline]
    fn next(&mut self) -> Option<u64> {
        if self.word == 0 {
            return None;
        }
        let t = self.word.trailing_zeros() as u64;
        self.word &= self.word - 1;
        Some(self.base + t)
    }
}

/// OR the cyclic rotation of `src` by `shift` positions (mod p) into `acc`.
/// Bit i of src lands on bit (i + shift) mod p. Bits at index >= p stay zero
/// in every vector except possibly the tail word of `acc`, which callers mask.
fn or_rotated(acc: &mut [u64], src: &[u64], shift: u64, p: u64) {
    if shift == 0 {
        for (a, s) in acc.iter_mut().zip(src) {
            *a |= s;
        }
        return;
    }
    let shift = shift as usize;
    let p = p as usize;
    // Left part: src bit i -> acc bit i + shift, for i < p - shift.
    let (w, b) = (shift / WORD_BITS, shift % WORD_BITS);
    let n = acc.len();
    if b == 0 {
        for i in w..n {
            acc[i] |= src[i - w];
        }
    } else {
        for i in w..n {
            let lo = src[i - w] << b;
            let hi = if i - w >= 1 {
                src[i - w - 1] >> (WORD_BITS - b)
            } else {
                0
            };
            acc[i] |= lo | hi;
        }
    }
    // Wrapped part: src bit i -> acc bit i - (p - shift), for i >= p - shift.
    let t = p - shift;
    let (w, b) = (t / WORD_BITS, t % WORD_BITS);
    if b == 0 {
        for i in 0..n - w {
            acc[i] |= src[i + w];
        }
    } else {
        for i in 0..n - w {
            let lo = src[i + w] >> b;
            let hi = if i + w + 1 < n {
                src[i + w + 1] << (WORD_BITS - b)
            } else {
                0
            };
            acc[i] |= lo | hi;
        }
    }
}

/// Set text format: line 1 `p=<modulus>`, line 2 comma-separated residues in
/// ascending order, newline-terminated.
impl fmt::Display for FpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p={}", self.field.p)?;
        let mut first = true;
        for e in self.elements() {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
            first = false;
        }
        writeln!(f)
    }
}

pub fn parse_set_text(text: &str) -> Result<FpSet> {
    let mut lines = text.lines();
    let head = lines
        .next()
        .ok_or_else(|| Error::Parse("empty set file".into()))?;
    let p_str = head
        .strip_prefix("p=")
        .ok_or_else(|| Error::Parse(format!("expected `p=<modulus>`, got `{head}`")))?;
    let p: u64 = p_str
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad modulus `{p_str}`")))?;
    let field = PrimeField::new(p)?;
    let body = lines.next().unwrap_or("").trim();
    let mut elems = Vec::new();
    if !body.is_empty() {
        for tok in body.split(',') {
            let e: u64 = tok
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad residue `{tok}`")))?;
            elems.push(e);
        }
    }
    FpSet::from_elems(field, &elems)
}
