//! The matrix of the Cartier operator on holomorphic differentials.
//!
//! For a basis ω₁..ω₄ of H⁰(Ω¹) the matrix M is defined by
//! `C(ω_j) = Σᵢ M[i][j]·ωᵢ`; since C is 1/3-semilinear, the coordinate
//! action of C is `v ↦ M·σ⁻¹(v)` where σ is the Frobenius of the
//! coefficient field. Iterates of C are represented by the twisted products
//! `Mₙ = M·σ⁻¹(M)···σ^{-(n-1)}(M)`, whose ranks give the a-number
//! (`g - rank M₁`) and the p-rank (`rank M_g`).

use std::fmt;

use crate::curve::{CurveModel, Family};
use crate::field::FieldElement;
use crate::funcfield::{holomorphic_basis, BasisData, CubeDecomposer, FunctionFieldElement};
use crate::linalg::Matrix;

/// Errors from building the Cartier–Manin matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CartierError {
    /// The model has no registered basis of holomorphic differentials
    /// (custom models).
    BasisUnavailable(Family),
    /// The registered basis failed validation: either its elements are not
    /// independent, or the Cartier image of a basis vector leaves the span.
    BasisValidationFailed(String),
}

impl fmt::Display for CartierError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CartierError::BasisUnavailable(fam) => {
                write!(f, "no holomorphic basis registered for family `{fam}`")
            }
            CartierError::BasisValidationFailed(msg) => {
                write!(f, "holomorphic basis validation failed: {msg}")
            }
        }
    }
}

impl std::error::Error for CartierError {}

/// The Cartier–Manin matrix in the "rooted" convention: entries are the
/// actual basis coordinates of C(ωⱼ) (cube roots of the entries of the
/// matrix of C³-linear algebra displays).
#[derive(Clone, Debug, PartialEq)]
pub struct CartierMatrix {
    m: Matrix<FieldElement>,
}

impl CartierMatrix {
    pub fn new(m: Matrix<FieldElement>) -> CartierMatrix {
        assert_eq!(m.rows(), m.cols());
        CartierMatrix { m }
    }

    pub fn matrix(&self) -> &Matrix<FieldElement> {
        &self.m
    }

    pub fn genus(&self) -> usize {
        self.m.rows()
    }

    /// Matrix of the n-th iterate of C: `M·σ⁻¹(M)···σ^{-(n-1)}(M)`.
    pub fn semilinear_power(&self, n: usize) -> Matrix<FieldElement> {
        assert!(n >= 1);
        let mut acc = self.m.clone();
        let mut twist = self.m.clone();
        for _ in 1..n {
            twist = twist.map(|e| e.inv_frobenius());
            acc = acc.matmul(&twist);
        }
        acc
    }

    /// Ranks of M₁..M_g.
    pub fn rank_profile(&self) -> Vec<usize> {
        let g = self.genus();
        let mut out = Vec::with_capacity(g);
        let mut acc = self.m.clone();
        let mut twist = self.m.clone();
        out.push(acc.rank());
        for _ in 1..g {
            twist = twist.map(|e| e.inv_frobenius());
            acc = acc.matmul(&twist);
            out.push(acc.rank());
        }
        out
    }

    /// a-number: corank of C on H⁰(Ω¹).
    pub fn a_number(&self) -> usize {
        self.genus() - self.m.rank()
    }

    /// p-rank: stable rank of the iterates of C.
    pub fn p_rank(&self) -> usize {
        *self.rank_profile().last().expect("nonempty profile")
    }

    /// JSON form: row-major coefficient arrays plus the convention tag.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = (0..self.m.rows())
            .map(|i| {
                serde_json::Value::Array(
                    (0..self.m.cols())
                        .map(|j| {
                            serde_json::Value::Array(
                                self.m[(i, j)]
                                    .coeffs()
                                    .iter()
                                    .map(|&c| serde_json::Value::from(c))
                                    .collect(),
                            )
                        })
                        .collect(),
                )
            })
            .collect();
        serde_json::json!({
            "convention": "column-action-rooted",
            "matrix": rows,
        })
    }
}

/// Express u in the k-span of the basis numerators; fails if u leaves the
/// span. The returned coordinates are constants of the coefficient field.
pub(crate) fn express_in_numerator_span(
    basis: &BasisData,
    us: &[FunctionFieldElement],
) -> Result<Vec<Vec<FieldElement>>, CartierError> {
    let field = basis.numerators[0].field().clone();
    let mut degree_bound = 0usize;
    let mut polys = Vec::new();
    for n in basis.numerators.iter().chain(us.iter()) {
        let mut coords = Vec::with_capacity(3);
        for c in n.coords() {
            let p = c.as_poly().ok_or_else(|| {
                CartierError::BasisValidationFailed(
                    "element has non-polynomial coordinates".into(),
                )
            })?;
            degree_bound = degree_bound.max(p.coeffs().len());
            coords.push(p.clone());
        }
        polys.push(coords);
    }
    let rows = 3 * degree_bound.max(1);
    let flatten = |coords: &[crate::poly::Poly]| -> Vec<FieldElement> {
        let mut v = Vec::with_capacity(rows);
        for p in coords {
            let cs = p.coeffs();
            for i in 0..degree_bound.max(1) {
                v.push(cs.get(i).cloned().unwrap_or_else(|| field.zero()));
            }
        }
        v
    };
    let mut a = Matrix::zeros(rows, 4, &field.zero());
    for (col, coords) in polys[..4].iter().enumerate() {
        for (r, val) in flatten(coords).into_iter().enumerate() {
            a[(r, col)] = val;
        }
    }
    if a.rank() != 4 {
        return Err(CartierError::BasisValidationFailed(
            "basis numerators are not linearly independent over the field".into(),
        ));
    }
    let mut b = Matrix::zeros(rows, us.len(), &field.zero());
    for (col, coords) in polys[4..].iter().enumerate() {
        for (r, val) in flatten(coords).into_iter().enumerate() {
            b[(r, col)] = val;
        }
    }
    let sol = a.solve_right(&b).ok_or_else(|| {
        CartierError::BasisValidationFailed(
            "Cartier image of a basis vector leaves the basis span".into(),
        )
    })?;
    Ok((0..us.len())
        .map(|j| (0..4).map(|i| sol[(i, j)].clone()).collect())
        .collect())
}

/// Cartier–Manin matrix using a prebuilt decomposer and basis (the fast
/// path for sweeps, which reuse the decomposer for the de Rham module).
pub fn cartier_manin_with(
    dec: &CubeDecomposer,
    basis: &BasisData,
) -> Result<CartierMatrix, CartierError> {
    let curve = dec.curve();
    // Express C(ωⱼ)·s in the numerator span: C(ωⱼ) = Σᵢ αᵢⱼ·(nᵢ/s).
    let mut scaled_images = Vec::with_capacity(4);
    for omega in &basis.omegas {
        let c = dec.cartier(omega);
        scaled_images.push(curve.ff_mul(c.coeff(), &basis.denominator));
    }
    let coords = express_in_numerator_span(basis, &scaled_images)?;
    let field = curve.field();
    let mut m = Matrix::zeros(4, 4, &field.zero());
    for (j, col) in coords.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            m[(i, j)] = v.clone();
        }
    }
    Ok(CartierMatrix::new(m))
}

/// Compute the Cartier–Manin matrix of a built-in family member.
pub fn cartier_manin_matrix(curve: &CurveModel) -> Result<CartierMatrix, CartierError> {
    let basis = holomorphic_basis(curve).ok_or(CartierError::BasisUnavailable(curve.family()))?;
    let dec = CubeDecomposer::new(curve);
    cartier_manin_with(&dec, &basis)
}
