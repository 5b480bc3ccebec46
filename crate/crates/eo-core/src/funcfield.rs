//! Arithmetic in the function field of a trigonal model.
//!
//! Elements of `K = k(x)[y]/(F)` are stored as coordinates
//! `(c₀, c₁, c₂)` with respect to the power basis `{1, y, y²}`, each a
//! rational function of x. The module provides ring and field operations,
//! the trace to `k(x)`, the derivation `d/dx` (using `dy/dx = -F_x/F_y`),
//! the decomposition `f = f₀³ + f₁³·x + f₂³·x²` underlying the Cartier
//! operator, and the family-specific bases of holomorphic differentials.

use std::fmt;

use crate::curve::{CurveModel, Family};
use crate::field::Field;
use crate::linalg::Matrix;
use crate::poly::Poly;
use crate::ratfunc::RatFunc;

/// An element of the function field, `c₀ + c₁·y + c₂·y²`.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionFieldElement {
    c: [RatFunc; 3],
}

impl FunctionFieldElement {
    pub fn new(c0: RatFunc, c1: RatFunc, c2: RatFunc) -> Self {
        FunctionFieldElement { c: [c0, c1, c2] }
    }

    pub fn zero(field: &Field) -> Self {
        let z = RatFunc::zero(field);
        FunctionFieldElement {
            c: [z.clone(), z.clone(), z],
        }
    }

    pub fn one(field: &Field) -> Self {
        let z = RatFunc::zero(field);
        FunctionFieldElement {
            c: [RatFunc::one(field), z.clone(), z],
        }
    }

    /// The coordinate function x.
    pub fn x(field: &Field) -> Self {
        let z = RatFunc::zero(field);
        FunctionFieldElement {
            c: [RatFunc::x(field), z.clone(), z],
        }
    }

    /// The coordinate function y.
    pub fn y(field: &Field) -> Self {
        let z = RatFunc::zero(field);
        FunctionFieldElement {
            c: [z.clone(), RatFunc::one(field), z],
        }
    }

    pub fn from_ratfunc(r: RatFunc) -> Self {
        let field = r.field().clone();
        let z = RatFunc::zero(&field);
        FunctionFieldElement {
            c: [r, z.clone(), z],
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        Self::from_ratfunc(RatFunc::from_poly(p))
    }

    /// Build from y-coordinates given as polynomials.
    pub fn from_poly_coords(c0: Poly, c1: Poly, c2: Poly) -> Self {
        FunctionFieldElement {
            c: [
                RatFunc::from_poly(c0),
                RatFunc::from_poly(c1),
                RatFunc::from_poly(c2),
            ],
        }
    }

    pub fn coords(&self) -> &[RatFunc; 3] {
        &self.c
    }

    pub fn coord(&self, i: usize) -> &RatFunc {
        &self.c[i]
    }

    pub fn field(&self) -> &Field {
        self.c[0].field()
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(RatFunc::is_zero)
    }

    /// Multiply by a scalar from k(x).
    pub fn scale(&self, r: &RatFunc) -> Self {
        FunctionFieldElement {
            c: [&self.c[0] * r, &self.c[1] * r, &self.c[2] * r],
        }
    }

    /// True if all three coordinates are polynomials in x.
    pub fn has_polynomial_coords(&self) -> bool {
        self.c.iter().all(|r| r.as_poly().is_some())
    }
}

impl fmt::Display for FunctionFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})·y + ({})·y²", self.c[0], self.c[1], self.c[2])
    }
}

impl std::ops::Add for &FunctionFieldElement {
    type Output = FunctionFieldElement;
    fn add(self, rhs: &FunctionFieldElement) -> FunctionFieldElement {
        FunctionFieldElement {
            c: [
                &self.c[0] + &rhs.c[0],
                &self.c[1] + &rhs.c[1],
                &self.c[2] + &rhs.c[2],
            ],
        }
    }
}

impl std::ops::Sub for &FunctionFieldElement {
    type Output = FunctionFieldElement;
    fn sub(self, rhs: &FunctionFieldElement) -> FunctionFieldElement {
        FunctionFieldElement {
            c: [
                &self.c[0] - &rhs.c[0],
                &self.c[1] - &rhs.c[1],
                &self.c[2] - &rhs.c[2],
            ],
        }
    }
}

impl std::ops::Neg for &FunctionFieldElement {
    type Output = FunctionFieldElement;
    fn neg(self) -> FunctionFieldElement {
        FunctionFieldElement {
            c: [-&self.c[0], -&self.c[1], -&self.c[2]],
        }
    }
}

/// A rational differential `coeff · dx`.
#[derive(Clone, Debug, PartialEq)]
pub struct Differential {
    coeff: FunctionFieldElement,
}

impl Differential {
    pub fn new(coeff: FunctionFieldElement) -> Self {
        Differential { coeff }
    }

    /// The function u with ω = u·dx.
    pub fn coeff(&self) -> &FunctionFieldElement {
        &self.coeff
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }
}

impl std::ops::Add for &Differential {
    type Output = Differential;
    fn add(self, rhs: &Differential) -> Differential {
        Differential {
            coeff: &self.coeff + &rhs.coeff,
        }
    }
}

impl std::ops::Sub for &Differential {
    type Output = Differential;
    fn sub(self, rhs: &Differential) -> Differential {
        Differential {
            coeff: &self.coeff - &rhs.coeff,
        }
    }
}

impl CurveModel {
    /// y³ rewritten in the power basis: `h - a₂y² - a₁y`.
    pub fn y_cubed(&self) -> FunctionFieldElement {
        FunctionFieldElement::from_poly_coords(self.hx().clone(), -self.a1x(), -self.a2x())
    }

    /// Product in the function field.
    pub fn ff_mul(
        &self,
        u: &FunctionFieldElement,
        v: &FunctionFieldElement,
    ) -> FunctionFieldElement {
        let field = self.field();
        let zero = RatFunc::zero(field);
        let mut w = vec![zero.clone(); 5];
        for i in 0..3 {
            if u.c[i].is_zero() {
                continue;
            }
            for j in 0..3 {
                if v.c[j].is_zero() {
                    continue;
                }
                let prod = &u.c[i] * &v.c[j];
                w[i + j] = &w[i + j] + &prod;
            }
        }
        self.reduce_ypoly_coords(w)
    }

    /// Reduce a y-polynomial (length ≥ 3 coordinate vector) modulo
    /// `y³ = h - a₂y² - a₁y`.
    fn reduce_ypoly_coords(&self, mut w: Vec<RatFunc>) -> FunctionFieldElement {
        let m = self.y_cubed();
        while w.len() > 3 {
            let top = w.pop().expect("nonempty");
            let d = w.len(); // degree of the popped term
            if top.is_zero() {
                continue;
            }
            for (j, mj) in m.c.iter().enumerate() {
                let idx = d - 3 + j;
                let add = &top * mj;
                w[idx] = &w[idx] + &add;
            }
        }
        while w.len() < 3 {
            w.push(RatFunc::zero(self.field()));
        }
        FunctionFieldElement {
            c: [w[0].clone(), w[1].clone(), w[2].clone()],
        }
    }

    /// Matrix of multiplication by u with respect to `{1, y, y²}`,
    /// columns = coordinates of `u·yʲ`.
    pub fn ff_mul_matrix(&self, u: &FunctionFieldElement) -> Matrix<RatFunc> {
        let field = self.field();
        let y = FunctionFieldElement::y(field);
        let mut m = Matrix::zeros(3, 3, &RatFunc::zero(field));
        let mut cur = u.clone();
        for j in 0..3 {
            for i in 0..3 {
                m[(i, j)] = cur.c[i].clone();
            }
            if j < 2 {
                cur = self.ff_mul(&cur, &y);
            }
        }
        m
    }

    /// Multiplicative inverse, None for zero (or for a zero divisor, which
    /// cannot occur on models accepted by the smoothness check).
    pub fn ff_inv(&self, u: &FunctionFieldElement) -> Option<FunctionFieldElement> {
        if u.is_zero() {
            return None;
        }
        let field = self.field();
        let m = self.ff_mul_matrix(u);
        let mut rhs = Matrix::zeros(3, 1, &RatFunc::zero(field));
        rhs[(0, 0)] = RatFunc::one(field);
        let sol = m.solve_right(&rhs)?;
        Some(FunctionFieldElement {
            c: [sol[(0, 0)].clone(), sol[(1, 0)].clone(), sol[(2, 0)].clone()],
        })
    }

    /// Quotient u/v; None when v is not invertible.
    pub fn ff_div(
        &self,
        u: &FunctionFieldElement,
        v: &FunctionFieldElement,
    ) -> Option<FunctionFieldElement> {
        Some(self.ff_mul(u, &self.ff_inv(v)?))
    }

    /// Trace to k(x): `Tr(1) = 0`, `Tr(y) = -a₂`, `Tr(y²) = a₂² + a₁`.
    pub fn ff_trace(&self, u: &FunctionFieldElement) -> RatFunc {
        let a2 = RatFunc::from_poly(self.a2x().clone());
        let a1 = RatFunc::from_poly(self.a1x().clone());
        let tr_y = -&a2;
        let tr_y2 = &(&a2 * &a2) + &a1;
        &(&u.c[1] * &tr_y) + &(&u.c[2] * &tr_y2)
    }

    /// ∂F/∂y as a function field element (`2a₂·y + a₁`).
    pub fn fy_element(&self) -> FunctionFieldElement {
        let two = self.field().scalar(2);
        FunctionFieldElement::from_poly_coords(
            self.a1x().clone(),
            self.a2x().scale(&two),
            Poly::zero(self.field()),
        )
    }

    /// ∂F/∂x as a function field element (`a₂'·y² + a₁'·y - h'`).
    pub fn fx_element(&self) -> FunctionFieldElement {
        FunctionFieldElement::from_poly_coords(
            -&self.hx().derivative(),
            self.a1x().derivative(),
            self.a2x().derivative(),
        )
    }

    /// dy/dx = -F_x / F_y (defined because F is separable in y).
    pub fn yprime(&self) -> FunctionFieldElement {
        let fx = self.fx_element();
        let fy = self.fy_element();
        self.ff_div(&-&fx, &fy)
            .expect("F_y is invertible on a separable model")
    }

    /// Derivation d/dx with a precomputed dy/dx.
    pub fn ff_derivative_given(
        &self,
        u: &FunctionFieldElement,
        yprime: &FunctionFieldElement,
    ) -> FunctionFieldElement {
        let field = self.field();
        let coord_part = FunctionFieldElement {
            c: [
                u.c[0].derivative(),
                u.c[1].derivative(),
                u.c[2].derivative(),
            ],
        };
        // ∂u/∂y = c₁ + 2c₂·y.
        let du_dy = FunctionFieldElement {
            c: [
                u.c[1].clone(),
                &u.c[2] * &RatFunc::constant(field.scalar(2)),
                RatFunc::zero(field),
            ],
        };
        &coord_part + &self.ff_mul(&du_dy, yprime)
    }

    /// Derivation d/dx on the function field.
    pub fn ff_derivative(&self, u: &FunctionFieldElement) -> FunctionFieldElement {
        self.ff_derivative_given(u, &self.yprime())
    }
}

/// Cube an element of k(x): `r³ = r̂(x³)` with coefficient-wise Frobenius.
fn ratfunc_cube(r: &RatFunc) -> RatFunc {
    r.frobenius_coeffs().inflate(3)
}

/// Solver for the decomposition `f = f₀³ + f₁³·x + f₂³·x²`.
///
/// Cubes of power-basis elements live in the subfield generated by x³ and
/// y³, so the decomposition splits into two cheap steps: a fixed 3×3 change
/// of basis {1, y, y²} → {1, y³, y⁶} over k(x) (inverted once per curve),
/// followed by a per-coordinate split of x-exponents by residue class mod 3.
pub struct CubeDecomposer {
    curve: CurveModel,
    /// Inverse of the change-of-basis matrix whose columns are 1, y³, y⁶
    /// written in the power basis.
    inv: Matrix<RatFunc>,
    /// `y³ᵇ` for b = 0, 1, 2, reduced to the power basis.
    cubes: [FunctionFieldElement; 3],
}

impl CubeDecomposer {
    pub fn new(curve: &CurveModel) -> CubeDecomposer {
        let field = curve.field();
        let one = FunctionFieldElement::one(field);
        let m1 = curve.y_cubed();
        let m2 = curve.ff_mul(&m1, &m1);
        let cubes = [one, m1, m2];
        let mut t = Matrix::zeros(3, 3, &RatFunc::zero(field));
        for (b, mb) in cubes.iter().enumerate() {
            for s in 0..3 {
                t[(s, b)] = mb.coord(s).clone();
            }
        }
        let inv = t
            .inverse()
            .expect("the powers 1, y³, y⁶ stay independent for accepted models");
        CubeDecomposer {
            curve: curve.clone(),
            inv,
            cubes,
        }
    }

    pub fn curve(&self) -> &CurveModel {
        &self.curve
    }

    /// Split f into `(f₀, f₁, f₂)` with `f = f₀³ + f₁³·x + f₂³·x²`.
    pub fn decompose(&self, f: &FunctionFieldElement) -> [FunctionFieldElement; 3] {
        let field = self.curve.field();
        // Coordinates γ_b of f in the basis {1, y³, y⁶} over k(x).
        let mut gamma = [
            RatFunc::zero(field),
            RatFunc::zero(field),
            RatFunc::zero(field),
        ];
        for (b, g) in gamma.iter_mut().enumerate() {
            for s in 0..3 {
                *g = &*g + &(&self.inv[(b, s)] * f.coord(s));
            }
        }
        // γ_b = (P·Q²)/Q³ for γ_b = P/Q in lowest terms, and Q³ is Q with
        // cubed coefficients evaluated at x³. Splitting P·Q² by exponent
        // residue mod 3 therefore exhibits γ_b = Σⱼ xʲ·(Sⱼ/Q̃)(x³), and the
        // coefficientwise cube root Sⱼ^⅓/Q is the y^b-coordinate of fⱼ.
        let zero3 = [
            RatFunc::zero(field),
            RatFunc::zero(field),
            RatFunc::zero(field),
        ];
        let mut coords = [zero3.clone(), zero3.clone(), zero3];
        for (b, g) in gamma.iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            let q = g.den();
            let s = &(g.num() * q) * q;
            for (j, part) in s.class_split(3).into_iter().enumerate() {
                coords[j][b] = RatFunc::new(part.inv_frobenius_coeffs(), q.clone());
            }
        }
        let [c0, c1, c2] = coords;
        let out = [
            FunctionFieldElement { c: c0 },
            FunctionFieldElement { c: c1 },
            FunctionFieldElement { c: c2 },
        ];
        debug_assert!(
            {
                let recombined = self.recombine(&out);
                recombined == *f
            },
            "cube decomposition failed to recombine"
        );
        out
    }

    /// Evaluate `f₀³ + f₁³·x + f₂³·x²` (used to verify decompositions).
    pub fn recombine(&self, parts: &[FunctionFieldElement; 3]) -> FunctionFieldElement {
        let field = self.curve.field();
        let mut acc = FunctionFieldElement::zero(field);
        for (j, fj) in parts.iter().enumerate() {
            // fⱼ³ = Σ_b (c_b)³ · y^(3b), with (c_b)³ computed coefficientwise.
            let mut cube = FunctionFieldElement::zero(field);
            for (b, cb) in fj.coords().iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                let scaled = self.cubes[b].scale(&ratfunc_cube(cb));
                cube = &cube + &scaled;
            }
            acc = &acc + &cube.scale(&RatFunc::x_pow(field, j as i64));
        }
        acc
    }

    /// The j-th part of the decomposition alone, skipping the assembly of
    /// the other two (the Cartier operator needs only j = 2). Agreement
    /// with [`CubeDecomposer::decompose`] is pinned by a property test.
    fn part(&self, f: &FunctionFieldElement, j: usize) -> FunctionFieldElement {
        let field = self.curve.field();
        let mut coords = [
            RatFunc::zero(field),
            RatFunc::zero(field),
            RatFunc::zero(field),
        ];
        for (b, out) in coords.iter_mut().enumerate() {
            let mut g = RatFunc::zero(field);
            for s in 0..3 {
                g = &g + &(&self.inv[(b, s)] * f.coord(s));
            }
            if g.is_zero() {
                continue;
            }
            let q = g.den();
            let s_poly = &(g.num() * q) * q;
            let part = s_poly.class_split(3).swap_remove(j);
            *out = RatFunc::new(part.inv_frobenius_coeffs(), q.clone());
        }
        FunctionFieldElement { c: coords }
    }

    /// Cartier operator: `C(f·dx) = f₂·dx` where `f = f₀³ + f₁³x + f₂³x²`.
    pub fn cartier(&self, omega: &Differential) -> Differential {
        Differential::new(self.part(omega.coeff(), 2))
    }
}

/// Decompose `f = f₀³ + f₁³·x + f₂³·x²` (one-shot convenience wrapper).
pub fn p_power_decompose(
    curve: &CurveModel,
    f: &FunctionFieldElement,
) -> [FunctionFieldElement; 3] {
    CubeDecomposer::new(curve).decompose(f)
}

/// Apply the Cartier operator to a single differential.
pub fn cartier(curve: &CurveModel, omega: &Differential) -> Differential {
    CubeDecomposer::new(curve).cartier(omega)
}

/// A basis of the holomorphic differentials of a built-in family, stored as
/// `ωᵢ = nᵢ/s · dx` with shared denominator s.
#[derive(Clone, Debug)]
pub struct BasisData {
    pub numerators: [FunctionFieldElement; 4],
    pub denominator: FunctionFieldElement,
    pub omegas: [Differential; 4],
}

/// The family-specific basis of H⁰(Ω¹); None for custom models.
pub fn holomorphic_basis(curve: &CurveModel) -> Option<BasisData> {
    let field = curve.field();
    let one = FunctionFieldElement::one(field);
    let x = FunctionFieldElement::x(field);
    let x2 = FunctionFieldElement::from_poly(Poly::monomial(field.one(), 2));
    let y = FunctionFieldElement::y(field);
    let (numerators, denominator) = match curve.family() {
        Family::F32 => {
            // {1, x, x², y - b} / (y - b).
            let b = curve.a1x().clone();
            let s = FunctionFieldElement::from_poly_coords(
                -&b,
                Poly::one(field),
                Poly::zero(field),
            );
            ([one, x, x2, s.clone()], s)
        }
        Family::F321 => {
            // {x, x², y-1, x(y-1)} / (x³(y - 1)), i.e. the differentials
            // dx/(x²(y-1)), dx/(x(y-1)), dx/x³, dx/x². The numerators must
            // vanish to order ≥ 2 at the unibranch point over (0,1)
            // (where x has valuation 3 and y-1 valuation 2) and have pole
            // order ≤ 4 along y ~ bx³ and ≤ 2 along the y ~ γx branches
            // at infinity; {1, y} fail the first condition.
            let x3 = Poly::monomial(field.one(), 3);
            let s = FunctionFieldElement::from_poly_coords(
                -&x3,
                x3,
                Poly::zero(field),
            );
            let w = FunctionFieldElement::from_poly_coords(
                Poly::constant(field.scalar(-1)),
                Poly::one(field),
                Poly::zero(field),
            );
            let xw = FunctionFieldElement::from_poly_coords(
                Poly::monomial(field.scalar(-1), 1),
                Poly::x(field),
                Poly::zero(field),
            );
            ([x, x2, w, xw], s)
        }
        Family::F43A | Family::F43C => {
            // {1, x, x², y} / (y - θ) where θ is the y-coefficient (for
            // f43c the displayed denominator y + 2x³ + 2x² is y - θ with
            // θ = x³ + x²).
            let theta = curve.a1x().clone();
            let s = FunctionFieldElement::from_poly_coords(
                -&theta,
                Poly::one(field),
                Poly::zero(field),
            );
            ([one, x, x2, y], s)
        }
        Family::F43B => {
            // {1, x, x², y}: the model y³ - y = h has unit F_y.
            let s = FunctionFieldElement::one(field);
            ([one, x, x2, y], s)
        }
        Family::F21 => {
            // {1, x, x², y} / x².
            let s = FunctionFieldElement::from_poly(Poly::monomial(field.one(), 2));
            ([one, x, x2, y], s)
        }
        Family::Custom => return None,
    };
    let sinv = curve
        .ff_inv(&denominator)
        .expect("basis denominator is nonzero");
    let omegas = [
        Differential::new(curve.ff_mul(&numerators[0], &sinv)),
        Differential::new(curve.ff_mul(&numerators[1], &sinv)),
        Differential::new(curve.ff_mul(&numerators[2], &sinv)),
        Differential::new(curve.ff_mul(&numerators[3], &sinv)),
    ];
    Some(BasisData {
        numerators,
        denominator,
        omegas,
    })
}
