//! Reduced rational functions N(x)/D(x) over a finite field: denominator
//! monic, gcd(N, D) = 1, zero represented as 0/1. All operations renormalize,
//! so equality is plain structural equality.
//!
//! On top of the field operations this module provides the local-expansion
//! helpers used when checking where a differential is regular: the order of
//! vanishing at x = 0, Laurent coefficients and principal parts at x = 0, and
//! the sum of residues over all finite points (computed at infinity).

use crate::field::{Field, FieldElement};
use crate::poly::Poly;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    /// Build N/D in canonical form; panics if D = 0.
    pub fn new(num: Poly, den: Poly) -> RatFunc {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RatFunc {
                den: Poly::one(num.field()),
                num,
            };
        }
        let g = num.gcd(&den);
        let mut num = num.div_exact(&g);
        let mut den = den.div_exact(&g);
        if !den.is_monic() {
            let inv = den.lc().inv().expect("nonzero leading coefficient");
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RatFunc { num, den }
    }

    pub fn from_poly(p: Poly) -> RatFunc {
        RatFunc {
            den: Poly::one(p.field()),
            num: p,
        }
    }

    pub fn zero(field: &Field) -> RatFunc {
        RatFunc::from_poly(Poly::zero(field))
    }

    pub fn one(field: &Field) -> RatFunc {
        RatFunc::from_poly(Poly::one(field))
    }

    pub fn x(field: &Field) -> RatFunc {
        RatFunc::from_poly(Poly::x(field))
    }

    pub fn constant(value: FieldElement) -> RatFunc {
        RatFunc::from_poly(Poly::constant(value))
    }

    /// x^e for a signed exponent.
    pub fn x_pow(field: &Field, e: i64) -> RatFunc {
        if e >= 0 {
            RatFunc::from_poly(Poly::monomial(field.one(), e as usize))
        } else {
            RatFunc {
                num: Poly::one(field),
                den: Poly::monomial(field.one(), (-e) as usize),
            }
        }
    }

    pub fn field(&self) -> &Field {
        self.num.field()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// Some(numerator) when the denominator is 1.
    pub fn as_poly(&self) -> Option<&Poly> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn inv(&self) -> Option<RatFunc> {
        if self.is_zero() {
            return None;
        }
        Some(RatFunc::new(self.den.clone(), self.num.clone()))
    }

    /// Evaluate at a field point; `None` at a pole.
    pub fn evaluate(&self, at: &FieldElement) -> Option<FieldElement> {
        let d = self.den.evaluate(at);
        let inv = d.inv()?;
        Some(&self.num.evaluate(at) * &inv)
    }

    pub fn derivative(&self) -> RatFunc {
        // (N/D)' = (N'D - N D')/D²
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        RatFunc::new(n, &self.den * &self.den)
    }

    pub fn frobenius_coeffs(&self) -> RatFunc {
        RatFunc::new(
            self.num.frobenius_coeffs(),
            self.den.frobenius_coeffs(),
        )
    }

    pub fn inv_frobenius_coeffs(&self) -> RatFunc {
        RatFunc::new(
            self.num.inv_frobenius_coeffs(),
            self.den.inv_frobenius_coeffs(),
        )
    }

    /// Substitute x ↦ x^p.
    pub fn inflate(&self, p: usize) -> RatFunc {
        RatFunc::new(self.num.inflate(p), self.den.inflate(p))
    }

    /// Order of vanishing at x = 0 (negative at a pole); `None` for zero.
    pub fn valuation_at_zero(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        Some(self.num.valuation_at_zero() as i64 - self.den.valuation_at_zero() as i64)
    }

    /// Degree of the numerator minus degree of the denominator; `None` for
    /// zero. This is minus the order of vanishing at x = ∞.
    pub fn top_degree(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        Some(self.num.deg() - self.den.deg())
    }

    /// The coefficient of x^j in the Laurent expansion at x = 0.
    pub fn laurent_coeff_at_zero(&self, j: i64) -> FieldElement {
        let field = self.field().clone();
        if self.is_zero() {
            return field.zero();
        }
        let m = self.den.valuation_at_zero();
        // N / (x^m · D₀) with D₀(0) ≠ 0: coeff of x^j = coeff of x^(j+m) in N/D₀
        let idx = j + m as i64;
        if idx < 0 {
            return field.zero();
        }
        let d0 = Poly::new(
            &field,
            self.den.coeffs()[m..].to_vec(),
        );
        let series_len = idx as usize + 1;
        let series = &self.num.truncated(series_len) * &d0.series_inverse(series_len);
        series.coeff(idx as usize)
    }

    /// Principal part at x = 0 as the polynomial-in-1/x tail: returns the
    /// rational function Σ_{i≥1} cᵢ·x^{-i} (zero when regular at 0).
    pub fn principal_part_at_zero(&self) -> RatFunc {
        let field = self.field().clone();
        if self.is_zero() {
            return self.clone();
        }
        let m = self.den.valuation_at_zero();
        if m == 0 {
            return RatFunc::zero(&field);
        }
        let d0 = Poly::new(&field, self.den.coeffs()[m..].to_vec());
        // N/D₀ = s mod x^m determines all negative-exponent coefficients
        let series = (&self.num.truncated(m) * &d0.series_inverse(m)).truncated(m);
        RatFunc::new(series, Poly::monomial(field.one(), m))
    }

    /// Sum of the residues of self·dx over every finite point of the x-line
    /// (points in the algebraic closure included), computed as minus the
    /// residue at infinity. Exact: with N = Q·D + R, deg R < deg D = d, the
    /// sum is the coefficient of x^(d-1) in R (D is monic).
    pub fn sum_of_finite_residues(&self) -> FieldElement {
        let d = self.den.deg();
        if d <= 0 {
            return self.field().zero();
        }
        let r = self.num.rem(&self.den);
        r.coeff(d as usize - 1)
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;

    fn add(self, rhs: &RatFunc) -> RatFunc {
        RatFunc::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;

    fn sub(self, rhs: &RatFunc) -> RatFunc {
        RatFunc::new(
            &(&self.num * &rhs.den) - &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;

    fn mul(self, rhs: &RatFunc) -> RatFunc {
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for &RatFunc {
    type Output = RatFunc;

    fn div(self, rhs: &RatFunc) -> RatFunc {
        assert!(!rhs.is_zero(), "division by the zero rational function");
        RatFunc::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;

    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_ratfunc_binop {
    ($imp:ident, $method:ident) => {
        impl $imp for RatFunc {
            type Output = RatFunc;

            fn $method(self, rhs: RatFunc) -> RatFunc {
                (&self).$method(&rhs)
            }
        }

        impl $imp<&RatFunc> for RatFunc {
            type Output = RatFunc;

            fn $method(self, rhs: &RatFunc) -> RatFunc {
                (&self).$method(rhs)
            }
        }

        impl $imp<RatFunc> for &RatFunc {
            type Output = RatFunc;

            fn $method(self, rhs: RatFunc) -> RatFunc {
                self.$method(&rhs)
            }
        }
    };
}

forward_ratfunc_binop!(Add, add);
forward_ratfunc_binop!(Sub, sub);
forward_ratfunc_binop!(Mul, mul);
forward_ratfunc_binop!(Div, div);

impl Neg for RatFunc {
    type Output = RatFunc;

    fn neg(self) -> RatFunc {
        -&self
    }
}
