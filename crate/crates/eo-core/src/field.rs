//! Exact arithmetic in GF(p^k) for small odd primes p (the library default is
//! p = 3), realized as the quotient ring GF(p)[t]/(m) for a pinned monic
//! irreducible modulus m of degree k.
//!
//! Every run must be reproducible, so a field is never "GF(9)" in the
//! abstract: it is GF(3)[t]/(t²+1), with the modulus recorded in all
//! serialized output. When no modulus is supplied we deterministically pick
//! the *smallest* monic irreducible of degree k, ordering candidates by the
//! integer Σ cᵢ·pⁱ of their coefficient digits.
//!
//! Elements are coefficient vectors of length k over GF(p) in the power basis
//! of t. All arithmetic is exact; there is no floating point anywhere.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

/// Largest supported extension degree. Keeps field orders comfortably inside
/// `u64` and the default-modulus search cheap.
pub const MAX_EXT_DEGREE: usize = 12;

/// Errors arising from field construction and embeddings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldError {
    NotPrime(u64),
    DegreeOutOfRange(usize),
    ModulusNotMonic,
    ModulusWrongDegree { expected: usize, got: usize },
    ModulusReducible,
    NoEmbedding(String),
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::NotPrime(p) => write!(f, "{p} is not a prime"),
            FieldError::DegreeOutOfRange(k) => {
                write!(f, "extension degree {k} out of range 1..={MAX_EXT_DEGREE}")
            }
            FieldError::ModulusNotMonic => write!(f, "modulus is not monic"),
            FieldError::ModulusWrongDegree { expected, got } => {
                write!(f, "modulus has degree {got}, expected {expected}")
            }
            FieldError::ModulusReducible => write!(f, "modulus is reducible over the prime field"),
            FieldError::NoEmbedding(why) => write!(f, "no field embedding: {why}"),
        }
    }
}

impl std::error::Error for FieldError {}

/// Dense polynomials over GF(p) as little-endian digit vectors, used only for
/// modulus bookkeeping (irreducibility tests, the default-modulus search).
mod primepoly {
    /// Multiplicative inverse of a nonzero digit mod p.
    pub fn dig_inv(a: u8, p: u8) -> u8 {
        let mut r = 1u64;
        let mut b = a as u64;
        let mut e = p as u64 - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p as u64;
            }
            b = b * b % p as u64;
            e >>= 1;
        }
        r as u8
    }

    pub fn norm(v: &mut Vec<u8>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    pub fn sub(a: &[u8], b: &[u8], p: u8) -> Vec<u8> {
        let mut out = vec![0u8; a.len().max(b.len())];
        for (i, o) in out.iter_mut().enumerate() {
            let x = a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0) % p;
            *o = x % p;
        }
        norm(&mut out);
        out
    }

    pub fn mul(a: &[u8], b: &[u8], p: u8) -> Vec<u8> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![0u8; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = ((out[i + j] as u16 + x as u16 * y as u16) % p as u16) as u8;
            }
        }
        norm(&mut out);
        out
    }

    /// Remainder of a by b, b nonzero.
    pub fn rem(a: &[u8], b: &[u8], p: u8) -> Vec<u8> {
        let mut r = a.to_vec();
        norm(&mut r);
        let db = b.len() - 1;
        let lb_inv = dig_inv(b[db], p);
        while r.len() > db {
            let dr = r.len() - 1;
            let q = (r[dr] as u16 * lb_inv as u16 % p as u16) as u8;
            for i in 0..=db {
                let t = r[dr - db + i] as u16 + (p as u16) * (p as u16)
                    - q as u16 * b[i] as u16 % (p as u16) * 1;
                r[dr - db + i] = ((t + p as u16 * p as u16) % p as u16) as u8;
            }
            norm(&mut r);
            if r.len() == dr + 1 {
                // leading digit must have cancelled
                unreachable!("polynomial division failed to reduce degree");
            }
        }
        r
    }

    pub fn gcd(a: &[u8], b: &[u8], p: u8) -> Vec<u8> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        norm(&mut a);
        norm(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        if let Some(&l) = a.last() {
            let inv = dig_inv(l, p);
            for d in a.iter_mut() {
                *d = (*d as u16 * inv as u16 % p as u16) as u8;
            }
        }
        a
    }

    /// x^(p^e) mod m, by repeated exponentiation-by-squaring to the p-th power.
    pub fn x_pow_p_tower(e: usize, m: &[u8], p: u8) -> Vec<u8> {
        let mut cur = if m.len() > 2 { vec![0, 1] } else { rem(&[0, 1], m, p) };
        for _ in 0..e {
            cur = pow_mod(&cur, p as u64, m, p);
        }
        cur
    }

    pub fn pow_mod(base: &[u8], mut e: u64, m: &[u8], p: u8) -> Vec<u8> {
        let mut result = vec![1u8];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                result = rem(&mul(&result, &b, p), m, p);
            }
            b = rem(&mul(&b, &b, p), m, p);
            e >>= 1;
        }
        result
    }

    /// Rabin irreducibility test over GF(p).
    pub fn is_irreducible(f: &[u8], p: u8) -> bool {
        let mut f = f.to_vec();
        norm(&mut f);
        if f.len() < 2 {
            return false;
        }
        let k = f.len() - 1;
        if k == 1 {
            return true;
        }
        // x^(p^k) == x mod f
        let xq = x_pow_p_tower(k, &f, p);
        if sub(&xq, &[0, 1], p) != Vec::<u8>::new() {
            return false;
        }
        // for every prime divisor d of k: gcd(x^(p^(k/d)) - x, f) = 1
        let mut rest = k;
        let mut d = 2;
        let mut prime_divs = vec![];
        while d * d <= rest {
            if rest % d == 0 {
                prime_divs.push(d);
                while rest % d == 0 {
                    rest /= d;
                }
            }
            d += 1;
        }
        if rest > 1 {
            prime_divs.push(rest);
        }
        for q in prime_divs {
            let xe = x_pow_p_tower(k / q, &f, p);
            let g = gcd(&sub(&xe, &[0, 1], p), &f, p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }

    /// Smallest monic irreducible of degree k over GF(p), ordered by the
    /// integer encoding Σ cᵢ·pⁱ of the non-leading digits.
    pub fn default_modulus(p: u8, k: usize) -> Vec<u8> {
        let count = (p as u64).pow(k as u32);
        for n in 0..count {
            let mut f = vec![0u8; k + 1];
            let mut m = n;
            for digit in f.iter_mut().take(k) {
                *digit = (m % p as u64) as u8;
                m /= p as u64;
            }
            f[k] = 1;
            if is_irreducible(&f, p) {
                return f;
            }
        }
        unreachable!("an irreducible polynomial of degree {k} over GF({p}) exists");
    }
}

/// The description of a concrete finite field GF(p)[t]/(modulus).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FieldSpec {
    p: u8,
    k: usize,
    /// Little-endian coefficients, length k+1, monic irreducible over GF(p).
    modulus: Vec<u8>,
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D>(deserializer: D) -> Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        #[derive(Deserialize)]
        struct Raw {
            p: u8,
            k: usize,
            modulus: Vec<u8>,
        }
        let raw = Raw::deserialize(deserializer)?;
        FieldSpec::with_modulus(raw.p, raw.k, &raw.modulus).map_err(serde::de::Error::custom)
    }
}

impl FieldSpec {
    /// Field with the deterministic default modulus for GF(p^k).
    pub fn new(p: u8, k: usize) -> Result<Self, FieldError> {
        check_p_k(p, k)?;
        Ok(FieldSpec {
            p,
            k,
            modulus: primepoly::default_modulus(p, k),
        })
    }

    /// Field with an explicit modulus (validated monic irreducible of degree k).
    pub fn with_modulus(p: u8, k: usize, modulus: &[u8]) -> Result<Self, FieldError> {
        check_p_k(p, k)?;
        let mut m: Vec<u8> = modulus.iter().map(|&c| c % p).collect();
        primepoly::norm(&mut m);
        if m.len() != k + 1 {
            return Err(FieldError::ModulusWrongDegree {
                expected: k,
                got: m.len().saturating_sub(1),
            });
        }
        if m[k] != 1 {
            return Err(FieldError::ModulusNotMonic);
        }
        if !primepoly::is_irreducible(&m, p) {
            return Err(FieldError::ModulusReducible);
        }
        Ok(FieldSpec { p, k, modulus: m })
    }

    pub fn p(&self) -> u8 {
        self.p
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }

    /// Number of elements, p^k.
    pub fn order(&self) -> u64 {
        (self.p as u64).pow(self.k as u32)
    }
}

fn check_p_k(p: u8, k: usize) -> Result<(), FieldError> {
    let is_prime = p >= 2 && (2..p).all(|d| p % d != 0);
    if !is_prime {
        return Err(FieldError::NotPrime(p as u64));
    }
    if k == 0 || k > MAX_EXT_DEGREE {
        return Err(FieldError::DegreeOutOfRange(k));
    }
    Ok(())
}

/// A shared handle to a finite field. Cheap to clone; element values hold one.
#[derive(Clone)]
pub struct Field(Arc<FieldSpec>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.k)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.0.p, self.0.k)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Field {}

impl std::ops::Deref for Field {
    type Target = FieldSpec;

    fn deref(&self) -> &FieldSpec {
        &self.0
    }
}

impl Field {
    pub fn new(p: u8, k: usize) -> Result<Field, FieldError> {
        Ok(Field(Arc::new(FieldSpec::new(p, k)?)))
    }

    /// GF(3^k) with the default modulus — the workhorse of this crate.
    pub fn gf3(k: usize) -> Field {
        Field::new(3, k).expect("degree within supported range")
    }

    pub fn with_modulus(p: u8, k: usize, modulus: &[u8]) -> Result<Field, FieldError> {
        Ok(Field(Arc::new(FieldSpec::with_modulus(p, k, modulus)?)))
    }

    pub fn from_spec(spec: FieldSpec) -> Field {
        Field(Arc::new(spec))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            field: self.clone(),
            c: vec![0; self.0.k],
        }
    }

    pub fn one(&self) -> FieldElement {
        self.scalar(1)
    }

    /// The image of an integer under Z -> GF(p) -> GF(p^k).
    pub fn scalar(&self, n: i64) -> FieldElement {
        let mut c = vec![0; self.0.k];
        c[0] = n.rem_euclid(self.0.p as i64) as u8;
        FieldElement {
            field: self.clone(),
            c,
        }
    }

    /// Element from little-endian coefficients (reduced mod p; signed for
    /// convenience, so -1 means p-1). Excess length beyond k must be zeros.
    pub fn elt(&self, coeffs: &[i64]) -> FieldElement {
        assert!(
            coeffs.len() <= self.0.k || coeffs[self.0.k..].iter().all(|&c| c == 0),
            "coefficient vector longer than extension degree"
        );
        let mut c = vec![0; self.0.k];
        for (i, &v) in coeffs.iter().take(self.0.k).enumerate() {
            c[i] = v.rem_euclid(self.0.p as i64) as u8;
        }
        FieldElement {
            field: self.clone(),
            c,
        }
    }

    /// The n-th element in enumeration order: base-p digits of n, little-endian.
    pub fn from_index(&self, n: u64) -> FieldElement {
        assert!(n < self.order(), "index {n} out of range");
        let mut c = vec![0; self.0.k];
        let mut m = n;
        for digit in c.iter_mut() {
            *digit = (m % self.0.p as u64) as u8;
            m /= self.0.p as u64;
        }
        FieldElement {
            field: self.clone(),
            c,
        }
    }

    /// All field elements in deterministic (index) order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order()).map(move |n| self.from_index(n))
    }

    /// The generator t of the power basis (equals 0 when k = 1).
    pub fn gen(&self) -> FieldElement {
        if self.0.k == 1 {
            // t is the modulus root; the default degree-1 modulus is t itself
            let root = self.0.p - self.0.modulus[0] % self.0.p;
            return self.scalar(root as i64 % self.0.p as i64);
        }
        self.elt(&[0, 1])
    }
}

/// An element of GF(p^k), in the power basis of the field's modulus.
#[derive(Clone)]
pub struct FieldElement {
    field: Field,
    c: Vec<u8>,
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[u8] {
        &self.c
    }

    /// Position in the deterministic enumeration order: Σ cᵢ·pⁱ.
    pub fn index(&self) -> u64 {
        let p = self.field.p() as u64;
        self.c.iter().rev().fold(0u64, |acc, &d| acc * p + d as u64)
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&d| d == 0)
    }

    pub fn is_one(&self) -> bool {
        self.c[0] == 1 && self.c[1..].iter().all(|&d| d == 0)
    }

    pub fn pow(&self, mut e: u64) -> FieldElement {
        let mut result = self.field.one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        result
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<FieldElement> {
        if self.is_zero() {
            return None;
        }
        Some(self.pow(self.field.order() - 2))
    }

    /// The absolute Frobenius a ↦ a^p.
    pub fn frobenius(&self) -> FieldElement {
        self.pow(self.field.p() as u64)
    }

    /// The inverse of Frobenius, computed as a ↦ a^(p^(k-1)); in particular
    /// the unique p-th root (cube root when p = 3).
    pub fn inv_frobenius(&self) -> FieldElement {
        let k = self.field.k() as u32;
        self.pow((self.field.p() as u64).pow(k - 1))
    }

    fn assert_same_field(&self, other: &FieldElement) {
        debug_assert!(
            self.field == other.field,
            "mixed-field arithmetic: {:?} vs {:?}",
            self.field,
            other.field
        );
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.assert_same_field(other);
        self.c == other.c
    }
}

impl Eq for FieldElement {}

impl std::hash::Hash for FieldElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.c.hash(state);
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldElement {
    /// Enumeration (index) order; used for deterministic sorting of output.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.assert_same_field(other);
        self.c.iter().rev().cmp(other.c.iter().rev())
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ff{:?}", self.c)
    }
}

impl fmt::Display for FieldElement {
    /// Elements print as their enumeration index — the same integers the CLI
    /// accepts as parameter values.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

impl Serialize for FieldElement {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.c.iter())
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;

    fn add(self, rhs: &FieldElement) -> FieldElement {
        self.assert_same_field(rhs);
        let p = self.field.p();
        let c = self
            .c
            .iter()
            .zip(&rhs.c)
            .map(|(&a, &b)| (a + b) % p)
            .collect();
        FieldElement {
            field: self.field.clone(),
            c,
        }
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;

    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self.assert_same_field(rhs);
        let p = self.field.p();
        let c = self
            .c
            .iter()
            .zip(&rhs.c)
            .map(|(&a, &b)| (a + p - b) % p)
            .collect();
        FieldElement {
            field: self.field.clone(),
            c,
        }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;

    fn neg(self) -> FieldElement {
        let p = self.field.p();
        let c = self.c.iter().map(|&a| (p - a) % p).collect();
        FieldElement {
            field: self.field.clone(),
            c,
        }
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;

    fn mul(self, rhs: &FieldElement) -> FieldElement {
        self.assert_same_field(rhs);
        let p = self.field.p() as u16;
        let k = self.field.k();
        let modulus = self.field.modulus();
        // schoolbook product, then reduction by the monic modulus
        let mut prod = vec![0u8; 2 * k - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.c.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u16 + a as u16 * b as u16) % p) as u8;
            }
        }
        for i in (k..2 * k - 1).rev() {
            let lead = prod[i];
            if lead == 0 {
                continue;
            }
            prod[i] = 0;
            for (j, &m) in modulus.iter().enumerate().take(k) {
                let idx = i - k + j;
                let t = prod[idx] as u16 + p * p - lead as u16 * m as u16 % p;
                prod[idx] = (t % p) as u8;
            }
        }
        prod.truncate(k);
        FieldElement {
            field: self.field.clone(),
            c: prod,
        }
    }
}

impl Div for &FieldElement {
    type Output = FieldElement;

    fn div(self, rhs: &FieldElement) -> FieldElement {
        let inv = rhs.inv().expect("division by zero field element");
        self * &inv
    }
}

macro_rules! forward_owned_binop {
    ($imp:ident, $method:ident) => {
        impl $imp for FieldElement {
            type Output = FieldElement;

            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }

        impl $imp<&FieldElement> for FieldElement {
            type Output = FieldElement;

            fn $method(self, rhs: &FieldElement) -> FieldElement {
                (&self).$method(rhs)
            }
        }

        impl $imp<FieldElement> for &FieldElement {
            type Output = FieldElement;

            fn $method(self, rhs: FieldElement) -> FieldElement {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);
forward_owned_binop!(Div, div);

impl Neg for FieldElement {
    type Output = FieldElement;

    fn neg(self) -> FieldElement {
        -&self
    }
}

/// A ring embedding GF(p^k) ↪ GF(p^K) for k | K, pinned by mapping the small
/// field's generator to the *smallest* root (in enumeration order) of the
/// small modulus inside the big field. Deterministic, hence reproducible.
pub struct FieldEmbedding {
    from: Field,
    to: Field,
    /// Powers r^0, …, r^(k-1) of the chosen root.
    powers: Vec<FieldElement>,
}

impl FieldEmbedding {
    pub fn new(from: &Field, to: &Field) -> Result<FieldEmbedding, FieldError> {
        if from.p() != to.p() {
            return Err(FieldError::NoEmbedding(format!(
                "different characteristics {} and {}",
                from.p(),
                to.p()
            )));
        }
        if to.k() % from.k() != 0 {
            return Err(FieldError::NoEmbedding(format!(
                "degree {} does not divide {}",
                from.k(),
                to.k()
            )));
        }
        let root = to
            .elements()
            .find(|cand| {
                let mut acc = to.zero();
                for &m in from.modulus().iter().rev() {
                    acc = &(&acc * cand) + &to.scalar(m as i64);
                }
                acc.is_zero()
            })
            .ok_or_else(|| {
                FieldError::NoEmbedding("modulus has no root in the big field".into())
            })?;
        let mut powers = Vec::with_capacity(from.k());
        let mut cur = to.one();
        for _ in 0..from.k() {
            powers.push(cur.clone());
            cur = &cur * &root;
        }
        Ok(FieldEmbedding {
            from: from.clone(),
            to: to.clone(),
            powers,
        })
    }

    pub fn from_field(&self) -> &Field {
        &self.from
    }

    pub fn to_field(&self) -> &Field {
        &self.to
    }

    pub fn apply(&self, e: &FieldElement) -> FieldElement {
        assert!(e.field() == &self.from, "element not in the source field");
        let mut acc = self.to.zero();
        for (digit, power) in e.coeffs().iter().zip(&self.powers) {
            if *digit != 0 {
                acc = &acc + &(&self.to.scalar(*digit as i64) * power);
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn default_moduli_are_the_smallest_irreducibles() {
        assert_eq!(Field::gf3(1).modulus(), &[0, 1]);
        assert_eq!(Field::gf3(2).modulus(), &[1, 0, 1]);
        assert_eq!(Field::gf3(3).modulus(), &[1, 2, 0, 1]);
    }

    #[test]
    fn prime_field_tables() {
        let f = Field::gf3(1);
        let two = f.scalar(2);
        assert_eq!(&two + &two, f.one());
        assert_eq!(&two * &two, f.one());
        assert_eq!(-&f.one(), two);
    }

    #[test]
    fn gf9_generator_squares_to_minus_one() {
        let f = Field::gf3(2);
        let t = f.gen();
        assert_eq!(&t * &t, f.scalar(2));
    }

    #[test]
    fn inverses_over_gf27() {
        let f = Field::gf3(3);
        for a in f.elements() {
            match a.inv() {
                Some(ai) => assert!((&a * &ai).is_one()),
                None => assert!(a.is_zero()),
            }
        }
    }

    #[test]
    fn frobenius_round_trips() {
        for k in 1..=3 {
            let f = Field::gf3(k);
            for a in f.elements() {
                assert_eq!(a.frobenius().inv_frobenius(), a);
                assert_eq!(a.inv_frobenius().frobenius(), a);
            }
        }
    }

    #[test]
    fn inv_frobenius_matches_explicit_powers() {
        let f3 = Field::gf3(1);
        assert_eq!(f3.scalar(2).inv_frobenius(), f3.scalar(2));
        let f9 = Field::gf3(2);
        for a in f9.elements() {
            assert_eq!(a.inv_frobenius(), a.pow(3));
        }
        let f27 = Field::gf3(3);
        for a in f27.elements() {
            assert_eq!(a.inv_frobenius(), a.pow(9));
        }
    }

    #[test]
    fn enumeration_round_trips_and_orders() {
        let f = Field::gf3(2);
        let all: Vec<_> = f.elements().collect();
        assert_eq!(all.len(), 9);
        for (i, a) in all.iter().enumerate() {
            assert_eq!(a.index(), i as u64);
            assert_eq!(&f.from_index(i as u64), a);
        }
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn spec_serialization_shape() {
        let f = Field::gf3(2);
        let json = serde_json::to_string(f.spec()).unwrap();
        assert_eq!(json, r#"{"p":3,"k":2,"modulus":[1,0,1]}"#);
        let back: FieldSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(&back, f.spec());
        assert!(serde_json::from_str::<FieldSpec>(r#"{"p":3,"k":2,"modulus":[0,0,1]}"#).is_err());
    }

    #[test]
    fn element_serialization_is_the_coefficient_vector() {
        let f = Field::gf3(2);
        let e = f.elt(&[1, 2]);
        assert_eq!(serde_json::to_string(&e).unwrap(), "[1,2]");
    }

    #[test]
    fn embeddings_are_ring_maps() {
        let small = Field::gf3(2);
        let big = Field::gf3(4);
        let emb = FieldEmbedding::new(&small, &big).unwrap();
        let images: Vec<_> = small.elements().map(|a| emb.apply(&a)).collect();
        // injective
        for i in 0..images.len() {
            for j in 0..i {
                assert_ne!(images[i], images[j]);
            }
        }
        for a in small.elements() {
            for b in small.elements() {
                assert_eq!(emb.apply(&(&a + &b)), &emb.apply(&a) + &emb.apply(&b));
                assert_eq!(emb.apply(&(&a * &b)), &emb.apply(&a) * &emb.apply(&b));
            }
        }
        assert!(emb.apply(&small.one()).is_one());
    }

    #[test]
    fn bad_moduli_are_rejected() {
        assert_eq!(
            Field::with_modulus(3, 2, &[0, 0, 1]).unwrap_err(),
            FieldError::ModulusReducible
        );
        assert_eq!(
            Field::with_modulus(3, 2, &[1, 0, 2]).unwrap_err(),
            FieldError::ModulusNotMonic
        );
        assert_eq!(Field::new(4, 1).unwrap_err(), FieldError::NotPrime(4));
    }

    fn gf27_element() -> impl Strategy<Value = FieldElement> {
        (0u64..27).prop_map(|n| Field::gf3(3).from_index(n))
    }

    proptest! {
        #[test]
        fn pth_roots_are_additive(a in gf27_element(), b in gf27_element()) {
            // semilinearity backbone: (a+b)^(1/p) = a^(1/p) + b^(1/p)
            prop_assert_eq!(
                (&a + &b).inv_frobenius(),
                &a.inv_frobenius() + &b.inv_frobenius()
            );
        }

        #[test]
        fn field_axioms_sampled(a in gf27_element(), b in gf27_element(), c in gf27_element()) {
            prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        }

        #[test]
        fn frobenius_is_a_ring_map(a in gf27_element(), b in gf27_element()) {
            prop_assert_eq!((&a + &b).frobenius(), &a.frobenius() + &b.frobenius());
            prop_assert_eq!((&a * &b).frobenius(), &a.frobenius() * &b.frobenius());
        }
    }
}
