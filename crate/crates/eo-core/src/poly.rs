//! Dense univariate polynomials over a finite field, in canonical
//! (no-trailing-zeros) form. The zero polynomial has an empty coefficient
//! vector and degree `None`.
//!
//! Besides the usual ring operations this module provides the pieces the
//! Cartier machinery leans on: coefficientwise Frobenius, the grouping of a
//! polynomial by residue classes of exponents mod p, exact p-th roots of
//! p-th-power polynomials, resultants, and square-free parts (char-p aware).

use crate::field::{Field, FieldElement};
use serde::Serialize;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// A polynomial Σ cᵢ·xⁱ with coefficients in a fixed finite field.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    c: Vec<FieldElement>,
}

impl Poly {
    pub fn new(field: &Field, mut coeffs: Vec<FieldElement>) -> Poly {
        debug_assert!(coeffs.iter().all(|e| e.field() == field));
        while coeffs.last().map(|e| e.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        Poly {
            field: field.clone(),
            c: coeffs,
        }
    }

    pub fn zero(field: &Field) -> Poly {
        Poly {
            field: field.clone(),
            c: vec![],
        }
    }

    pub fn one(field: &Field) -> Poly {
        Poly::constant(field.one())
    }

    pub fn x(field: &Field) -> Poly {
        Poly::new(field, vec![field.zero(), field.one()])
    }

    pub fn constant(value: FieldElement) -> Poly {
        let field = value.field().clone();
        Poly::new(&field, vec![value])
    }

    pub fn monomial(coeff: FieldElement, exp: usize) -> Poly {
        let field = coeff.field().clone();
        let mut c = vec![field.zero(); exp + 1];
        c[exp] = coeff;
        Poly::new(&field, c)
    }

    /// Convenience constructor from little-endian signed integer coefficients.
    pub fn from_ints(field: &Field, coeffs: &[i64]) -> Poly {
        Poly::new(field, coeffs.iter().map(|&n| field.scalar(n)).collect())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to -1.
    pub fn deg(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    /// Coefficient of xⁱ (zero beyond the stored length).
    pub fn coeff(&self, i: usize) -> FieldElement {
        self.c.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Leading coefficient; the zero polynomial yields zero.
    pub fn lc(&self) -> FieldElement {
        self.c.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_monic(&self) -> bool {
        self.lc().is_one()
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        let inv = self.lc().inv().expect("nonzero leading coefficient");
        self.scale(&inv)
    }

    pub fn scale(&self, s: &FieldElement) -> Poly {
        Poly::new(&self.field, self.c.iter().map(|a| a * s).collect())
    }

    pub fn evaluate(&self, at: &FieldElement) -> FieldElement {
        let mut acc = self.field.zero();
        for coeff in self.c.iter().rev() {
            acc = &(&acc * at) + coeff;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.c.len() <= 1 {
            return Poly::zero(&self.field);
        }
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, a)| &self.field.scalar(i as i64) * a)
            .collect();
        Poly::new(&self.field, c)
    }

    pub fn pow(&self, mut e: usize) -> Poly {
        let mut result = Poly::one(&self.field);
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

    /// Multiply by x^k.
    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![self.field.zero(); k];
        c.extend(self.c.iter().cloned());
        Poly::new(&self.field, c)
    }

    /// Truncate to degree < k (i.e. reduce mod x^k).
    pub fn truncated(&self, k: usize) -> Poly {
        Poly::new(&self.field, self.c.iter().take(k).cloned().collect())
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn divmod(&self, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let dd = divisor.c.len();
        if self.c.len() < dd {
            return (Poly::zero(&self.field), self.clone());
        }
        let lc_inv = divisor.lc().inv().expect("nonzero leading coefficient");
        let mut rem = self.c.clone();
        let mut quot = vec![self.field.zero(); self.c.len() - dd + 1];
        for top in (dd - 1..rem.len()).rev() {
            let q = &rem[top] * &lc_inv;
            if q.is_zero() {
                continue;
            }
            let base = top + 1 - dd;
            quot[base] = q.clone();
            for (i, dcoeff) in divisor.c.iter().enumerate() {
                rem[base + i] = &rem[base + i] - &(&q * dcoeff);
            }
        }
        rem.truncate(dd - 1);
        (Poly::new(&self.field, quot), Poly::new(&self.field, rem))
    }

    pub fn rem(&self, divisor: &Poly) -> Poly {
        self.divmod(divisor).1
    }

    /// Exact division; panics if the divisor does not divide self.
    pub fn div_exact(&self, divisor: &Poly) -> Poly {
        let (q, r) = self.divmod(divisor);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: returns (g, u, v) with u·self + v·other = g, g monic.
    pub fn xgcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let field = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut u0, mut u1) = (Poly::one(field), Poly::zero(field));
        let (mut v0, mut v1) = (Poly::zero(field), Poly::one(field));
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1);
            let u = &u0 - &(&q * &u1);
            let v = &v0 - &(&q * &v1);
            r0 = r1;
            r1 = r;
            u0 = u1;
            u1 = u;
            v0 = v1;
            v1 = v;
        }
        if r0.is_zero() {
            return (r0, u0, v0);
        }
        let s = r0.lc().inv().expect("nonzero leading coefficient");
        (r0.scale(&s), u0.scale(&s), v0.scale(&s))
    }

    /// Resultant of two polynomials; zero iff they share a root in the
    /// algebraic closure (or either is zero).
    pub fn resultant(&self, other: &Poly) -> FieldElement {
        if self.is_zero() || other.is_zero() {
            return self.field.zero();
        }
        let mut a = self.clone();
        let mut b = other.clone();
        let mut acc = self.field.one();
        let mut negate = false;
        loop {
            let (da, db) = (a.deg() as u64, b.deg() as u64);
            if db == 0 {
                acc = &acc * &b.lc().pow(da);
                break;
            }
            if da < db {
                std::mem::swap(&mut a, &mut b);
                if da % 2 == 1 && db % 2 == 1 {
                    negate = !negate;
                }
                continue;
            }
            let r = a.rem(&b);
            if r.is_zero() {
                return self.field.zero();
            }
            acc = &acc * &b.lc().pow(da - r.deg() as u64);
            if da % 2 == 1 && db % 2 == 1 {
                negate = !negate;
            }
            a = b;
            b = r;
        }
        if negate {
            -&acc
        } else {
            acc
        }
    }

    /// Apply the field Frobenius to every coefficient (x is untouched).
    pub fn frobenius_coeffs(&self) -> Poly {
        Poly::new(&self.field, self.c.iter().map(|a| a.frobenius()).collect())
    }

    /// Apply the inverse Frobenius to every coefficient.
    pub fn inv_frobenius_coeffs(&self) -> Poly {
        Poly::new(
            &self.field,
            self.c.iter().map(|a| a.inv_frobenius()).collect(),
        )
    }

    /// Substitute x ↦ x^p: returns f(x^p).
    pub fn inflate(&self, p: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![self.field.zero(); (self.c.len() - 1) * p + 1];
        for (i, a) in self.c.iter().enumerate() {
            c[i * p] = a.clone();
        }
        Poly::new(&self.field, c)
    }

    /// Inverse of [`Poly::inflate`]: for f with all exponents divisible by p,
    /// return g with g(x^p) = f(x). Panics if some exponent is not.
    pub fn deflate(&self, p: usize) -> Poly {
        let mut c = vec![];
        for (i, a) in self.c.iter().enumerate() {
            if i % p == 0 {
                c.push(a.clone());
            } else {
                assert!(a.is_zero(), "exponent {i} not divisible by {p}");
            }
        }
        Poly::new(&self.field, c)
    }

    /// Split by exponent residue class mod p: returns parts[0..p] with
    /// f(x) = Σ_j parts[j](x^p) · x^j.
    pub fn class_split(&self, p: usize) -> Vec<Poly> {
        let mut parts = vec![vec![]; p];
        for (i, a) in self.c.iter().enumerate() {
            parts[i % p].push(a.clone());
        }
        parts
            .into_iter()
            .map(|c| Poly::new(&self.field, c))
            .collect()
    }

    /// Exact p-th root of a p-th power polynomial: g with g^p = f.
    /// Panics if f is not a p-th power.
    pub fn pth_root(&self) -> Poly {
        let p = self.field.p() as usize;
        self.deflate(p).inv_frobenius_coeffs()
    }

    /// Multiplicative inverse as a power series mod x^m; the constant term
    /// must be nonzero.
    pub fn series_inverse(&self, m: usize) -> Poly {
        let c0_inv = self
            .coeff(0)
            .inv()
            .expect("series inverse needs a unit constant term");
        let mut inv = vec![c0_inv.clone()];
        for n in 1..m {
            // c₀·invₙ = −Σ_{i=1..n} cᵢ·inv_{n−i}
            let mut s = self.field.zero();
            for i in 1..=n.min(self.c.len().saturating_sub(1)) {
                s = &s + &(&self.c[i] * &inv[n - i]);
            }
            inv.push(-&(&s * &c0_inv));
        }
        Poly::new(&self.field, inv)
    }

    /// Product of the distinct irreducible factors (monic radical),
    /// correct in characteristic p.
    pub fn squarefree_part(&self) -> Poly {
        assert!(!self.is_zero(), "radical of the zero polynomial");
        let f = self.monic();
        if f.deg() <= 0 {
            return Poly::one(&self.field);
        }
        let fp = f.derivative();
        if fp.is_zero() {
            // every exponent divisible by p: f = g^p exactly
            return f.pth_root().squarefree_part();
        }
        let d = f.gcd(&fp);
        if d.deg() == 0 {
            return f;
        }
        // f/d collects the factors with multiplicity not divisible by p,
        // each once; the rest still live in d.
        let w = f.div_exact(&d);
        let rest = d.squarefree_part();
        let overlap = w.gcd(&rest);
        (&w * &rest.div_exact(&overlap)).monic()
    }

    /// Ord at x = 0: the index of the lowest nonzero coefficient.
    /// Panics on the zero polynomial.
    pub fn valuation_at_zero(&self) -> usize {
        self.c
            .iter()
            .position(|a| !a.is_zero())
            .expect("valuation of the zero polynomial")
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    if i == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl Serialize for Poly {
    /// Little-endian array of element coefficient arrays.
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.c.iter())
    }
}

impl Add for &Poly {
    type Output = Poly;

    fn add(self, rhs: &Poly) -> Poly {
        let n = self.c.len().max(rhs.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            c.push(&self.coeff(i) + &rhs.coeff(i));
        }
        Poly::new(&self.field, c)
    }
}

impl Sub for &Poly {
    type Output = Poly;

    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.c.len().max(rhs.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            c.push(&self.coeff(i) - &rhs.coeff(i));
        }
        Poly::new(&self.field, c)
    }
}

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        Poly::new(&self.field, self.c.iter().map(|a| -a).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(&self.field);
        }
        let mut c = vec![self.field.zero(); self.c.len() + rhs.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                c[i + j] = &c[i + j] + &(a * b);
            }
        }
        Poly::new(&self.field, c)
    }
}

macro_rules! forward_poly_binop {
    ($imp:ident, $method:ident) => {
        impl $imp for Poly {
            type Output = Poly;

            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }

        impl $imp<&Poly> for Poly {
            type Output = Poly;

            fn $method(self, rhs: &Poly) -> Poly {
                (&self).$method(rhs)
            }
        }

        impl $imp<Poly> for &Poly {
            type Output = Poly;

            fn $method(self, rhs: Poly) -> Poly {
                self.$method(&rhs)
            }
        }
    };
}

forward_poly_binop!(Add, add);
forward_poly_binop!(Sub, sub);
forward_poly_binop!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        -&self
    }
}
