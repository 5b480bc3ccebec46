//! Semilinear symplectic modules and Ekedahl–Oort combinatorics.
//!
//! A module packages a 2g-dimensional space over GF(3^k) with an alternating
//! nondegenerate pairing and a σ⁻¹-linear operator V (coordinate action
//! `u ↦ vmat·σ⁻¹(u)`). The canonical filtration is the closure of {0, G}
//! under V-images and orthogonal complements; the final type v records
//! `v(dim W) = dim V(W)` along it, and the Young diagram μ of v is the
//! Ekedahl–Oort type. F is never stored: it is the σ-twisted adjoint of V,
//! `⟨F(u), w⟩ = ⟨u, V(w)⟩^σ`, recovered as a matrix when needed.

use std::fmt;

use crate::field::{Field, FieldElement};
use crate::linalg::Matrix;

/// Violations reported by module validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleViolation {
    OddDimension(usize),
    ShapeMismatch(String),
    FieldMismatch,
    NotAlternating,
    DegeneratePairing,
    ImageNotLagrangian,
    KernelNotLagrangian,
    AdjointMismatch,
    KernelOfFNotImageOfV,
    ImageOfFNotKernelOfV,
}

impl fmt::Display for ModuleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleViolation::OddDimension(d) => write!(f, "dimension {d} is not even"),
            ModuleViolation::ShapeMismatch(msg) => write!(f, "shape mismatch: {msg}"),
            ModuleViolation::FieldMismatch => write!(f, "entries from different fields"),
            ModuleViolation::NotAlternating => write!(f, "pairing is not alternating"),
            ModuleViolation::DegeneratePairing => write!(f, "pairing is degenerate"),
            ModuleViolation::ImageNotLagrangian => write!(f, "image of V is not Lagrangian"),
            ModuleViolation::KernelNotLagrangian => write!(f, "kernel of V is not Lagrangian"),
            ModuleViolation::AdjointMismatch => {
                write!(f, "derived F fails the adjoint identity")
            }
            ModuleViolation::KernelOfFNotImageOfV => {
                write!(f, "kernel of derived F differs from image of V")
            }
            ModuleViolation::ImageOfFNotKernelOfV => {
                write!(f, "image of derived F differs from kernel of V")
            }
        }
    }
}

impl std::error::Error for ModuleViolation {}

/// Errors from the Ekedahl–Oort machinery.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EoError {
    Violation(ModuleViolation),
    /// Canonical-filtration members failed to form a chain (internal).
    NonNested,
    /// A canonical graded piece dropped rank only partially (internal).
    InterpolationAmbiguous,
    /// No final type corresponds to the requested data.
    NoSuchFinalType,
    FieldMismatch,
    BadInput(String),
}

impl fmt::Display for EoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EoError::Violation(v) => write!(f, "module validation failed: {v}"),
            EoError::NonNested => write!(f, "canonical subspaces are not totally ordered"),
            EoError::InterpolationAmbiguous => {
                write!(f, "rank drop is neither zero nor full on a graded piece")
            }
            EoError::NoSuchFinalType => write!(f, "no final type matches the request"),
            EoError::FieldMismatch => write!(f, "modules over different fields"),
            EoError::BadInput(msg) => write!(f, "bad input: {msg}"),
        }
    }
}

impl std::error::Error for EoError {}

impl From<ModuleViolation> for EoError {
    fn from(v: ModuleViolation) -> EoError {
        EoError::Violation(v)
    }
}

/// An Ekedahl–Oort type: strictly decreasing positive parts, possibly empty.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EOType {
    mu: Vec<usize>,
}

impl EOType {
    pub fn new(mu: Vec<usize>) -> Result<EOType, EoError> {
        for w in mu.windows(2) {
            if w[0] <= w[1] {
                return Err(EoError::BadInput(format!(
                    "parts must strictly decrease, got {mu:?}"
                )));
            }
        }
        if mu.last().is_some_and(|&m| m == 0) {
            return Err(EoError::BadInput("zero part".into()));
        }
        Ok(EOType { mu })
    }

    pub fn empty() -> EOType {
        EOType { mu: vec![] }
    }

    pub fn parts(&self) -> &[usize] {
        &self.mu
    }

    /// Codimension of the stratum: Σ μᵢ.
    pub fn codimension(&self) -> usize {
        self.mu.iter().sum()
    }

    /// a-number: the number of parts.
    pub fn a_number(&self) -> usize {
        self.mu.len()
    }

    /// p-rank: g − μ₁ (g for the empty type).
    pub fn p_rank(&self, g: usize) -> usize {
        g - self.mu.first().copied().unwrap_or(0)
    }

    /// Parse "[3,2]", "3,2", or "[]"/"" (empty type).
    pub fn parse(s: &str) -> Result<EOType, EoError> {
        let inner = s.trim().trim_start_matches('[').trim_end_matches(']').trim();
        if inner.is_empty() {
            return Ok(EOType::empty());
        }
        let mu = inner
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| EoError::BadInput(format!("bad part `{p}` in `{s}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        EOType::new(mu)
    }
}

impl fmt::Display for EOType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.mu.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

/// Comparison in the specialization order: μ ⪯ υ iff μ has no more parts
/// and μᵢ ≤ υᵢ for every shared index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderRel {
    Equal,
    Less,
    Greater,
    Incomparable,
}

pub fn eo_partial_order(a: &EOType, b: &EOType) -> OrderRel {
    let below = |x: &EOType, y: &EOType| {
        x.mu.len() <= y.mu.len() && x.mu.iter().zip(&y.mu).all(|(p, q)| p <= q)
    };
    match (below(a, b), below(b, a)) {
        (true, true) => OrderRel::Equal,
        (true, false) => OrderRel::Less,
        (false, true) => OrderRel::Greater,
        (false, false) => OrderRel::Incomparable,
    }
}

/// All 2^g types with parts ≤ g, sorted by (codimension, parts).
pub fn enumerate_eo_types(g: usize) -> Vec<EOType> {
    let mut out = Vec::with_capacity(1 << g);
    for mask in 0u32..(1 << g) {
        let mut mu: Vec<usize> = (1..=g).rev().filter(|i| mask >> (i - 1) & 1 == 1).collect();
        mu.shrink_to_fit();
        out.push(EOType { mu });
    }
    out.sort_by_key(|t| (t.codimension(), t.mu.clone()));
    out
}

/// Covering pairs (lower, upper) of the specialization order on the 2^g types.
pub fn eo_covering_pairs(g: usize) -> Vec<(EOType, EOType)> {
    let all = enumerate_eo_types(g);
    let mut out = Vec::new();
    for a in &all {
        for b in &all {
            if eo_partial_order(a, b) != OrderRel::Less {
                continue;
            }
            let strictly_between = all.iter().any(|c| {
                eo_partial_order(a, c) == OrderRel::Less && eo_partial_order(c, b) == OrderRel::Less
            });
            if !strictly_between {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    out
}

/// A final type: v(0..=2g) with v(0)=0, steps in {0,1}, v(2g)=g, and the
/// symmetry v(2g−i) = v(i) − i + g.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinalType {
    v: Vec<usize>,
}

impl FinalType {
    pub fn new(v: Vec<usize>) -> Result<FinalType, EoError> {
        if v.len() < 3 || v.len() % 2 == 0 {
            return Err(EoError::BadInput(format!(
                "a final type needs odd length ≥ 3, got {}",
                v.len()
            )));
        }
        let g = (v.len() - 1) / 2;
        if v[0] != 0 {
            return Err(EoError::BadInput("v(0) must be 0".into()));
        }
        if v[2 * g] != g {
            return Err(EoError::BadInput("v(2g) must be g".into()));
        }
        for w in v.windows(2) {
            if w[1] != w[0] && w[1] != w[0] + 1 {
                return Err(EoError::BadInput("steps must be 0 or 1".into()));
            }
        }
        for i in 0..=g {
            if v[2 * g - i] + i != v[i] + g {
                return Err(EoError::BadInput(format!(
                    "symmetry v(2g−i)=v(i)−i+g fails at i={i}"
                )));
            }
        }
        Ok(FinalType { v })
    }

    pub fn g(&self) -> usize {
        (self.v.len() - 1) / 2
    }

    pub fn values(&self) -> &[usize] {
        &self.v
    }

    pub fn at(&self, i: usize) -> usize {
        self.v[i]
    }

    /// n-fold application starting from i (dimension of Vⁿ of the canonical
    /// piece of dimension i).
    pub fn iterate(&self, i: usize, n: usize) -> usize {
        let mut d = i;
        for _ in 0..n {
            d = self.v[d];
        }
        d
    }

    /// Young diagram μ_j = #{i : 1 ≤ i ≤ g, v(i)+j ≤ i}, kept while positive.
    pub fn young_diagram(&self) -> EOType {
        let g = self.g();
        let mut mu = Vec::new();
        for j in 1..=g {
            let count = (1..=g).filter(|&i| self.v[i] + j <= i).count();
            if count == 0 {
                break;
            }
            mu.push(count);
        }
        EOType { mu }
    }
}

impl fmt::Display for FinalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.v.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Final type of an E-O type: brute force over the 2^g step patterns on
/// 1..=g, extended by the symmetry v(2g−i) = v(i)−i+g.
pub fn mu_to_final_type(mu: &EOType, g: usize) -> Result<FinalType, EoError> {
    if mu.mu.first().is_some_and(|&m| m > g) || mu.mu.len() > g {
        return Err(EoError::NoSuchFinalType);
    }
    for mask in 0u32..(1 << g) {
        let mut v = vec![0usize; 2 * g + 1];
        for i in 1..=g {
            v[i] = v[i - 1] + ((mask >> (i - 1)) & 1) as usize;
        }
        for i in (0..g).rev() {
            v[2 * g - i] = v[i] + g - i;
        }
        let Ok(ft) = FinalType::new(v) else { continue };
        if &ft.young_diagram() == mu {
            return Ok(ft);
        }
    }
    Err(EoError::NoSuchFinalType)
}

/// A subspace of a fixed ambient coordinate space, stored as a reduced
/// row-echelon basis (zero rows dropped), so equality is matrix equality.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    basis: Matrix<FieldElement>,
    ambient: usize,
}

impl Subspace {
    pub fn from_rows(rows: Matrix<FieldElement>) -> Subspace {
        let ambient = rows.cols();
        assert!(ambient > 0, "ambient space must have positive dimension");
        if rows.rows() == 0 {
            return Subspace { basis: rows, ambient };
        }
        let zero = rows[(0, 0)].field().zero();
        let (rr, pivots) = rows.rref();
        let dim = pivots.len();
        let basis = if dim == 0 {
            Matrix::zeros(0, ambient, &zero)
        } else {
            rr.submatrix(0..dim, 0..ambient)
        };
        Subspace { basis, ambient }
    }

    pub fn zero(ambient: usize, field: &Field) -> Subspace {
        Subspace {
            basis: Matrix::zeros(0, ambient, &field.zero()),
            ambient,
        }
    }

    pub fn full(ambient: usize, field: &Field) -> Subspace {
        Subspace {
            basis: Matrix::identity(ambient, &field.zero()),
            ambient,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &Matrix<FieldElement> {
        &self.basis
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        assert_eq!(self.ambient, other.ambient);
        if other.dim() == 0 {
            return true;
        }
        if other.dim() > self.dim() {
            return false;
        }
        self.basis.vstack(&other.basis).rank() == self.dim()
    }
}

/// A chain of subspaces with the dimension of V(W) recorded for each member.
#[derive(Clone, Debug)]
pub struct Flag {
    pub members: Vec<Subspace>,
    pub images: Vec<Subspace>,
}

/// A 2g-dimensional space with an alternating nondegenerate pairing and a
/// σ⁻¹-linear operator V whose image and kernel are Lagrangian.
#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticSemilinearModule {
    field: Field,
    g: usize,
    gram: Matrix<FieldElement>,
    vmat: Matrix<FieldElement>,
}

fn mat_frob(m: &Matrix<FieldElement>) -> Matrix<FieldElement> {
    m.map(|e| e.frobenius())
}

fn mat_invfrob(m: &Matrix<FieldElement>) -> Matrix<FieldElement> {
    m.map(|e| e.inv_frobenius())
}

impl SymplecticSemilinearModule {
    /// Validate and build. All structural requirements are enforced here, so
    /// a constructed module is always analyzable.
    pub fn try_new(
        field: &Field,
        gram: Matrix<FieldElement>,
        vmat: Matrix<FieldElement>,
    ) -> Result<SymplecticSemilinearModule, ModuleViolation> {
        let n = gram.rows();
        if n % 2 != 0 || n == 0 {
            return Err(ModuleViolation::OddDimension(n));
        }
        if gram.cols() != n || vmat.rows() != n || vmat.cols() != n {
            return Err(ModuleViolation::ShapeMismatch(format!(
                "gram {}×{}, vmat {}×{}",
                gram.rows(),
                gram.cols(),
                vmat.rows(),
                vmat.cols()
            )));
        }
        for i in 0..n {
            for j in 0..n {
                if gram[(i, j)].field() != field || vmat[(i, j)].field() != field {
                    return Err(ModuleViolation::FieldMismatch);
                }
            }
        }
        let m = SymplecticSemilinearModule {
            field: field.clone(),
            g: n / 2,
            gram,
            vmat,
        };
        m.validate()?;
        Ok(m)
    }

    /// Re-run all structural checks, reporting the first violation.
    pub fn validate(&self) -> Result<(), ModuleViolation> {
        let n = 2 * self.g;
        for i in 0..n {
            if !self.gram[(i, i)].is_zero() {
                return Err(ModuleViolation::NotAlternating);
            }
            for j in 0..n {
                if self.gram[(i, j)] != -&self.gram[(j, i)] {
                    return Err(ModuleViolation::NotAlternating);
                }
            }
        }
        if self.gram.rank() != n {
            return Err(ModuleViolation::DegeneratePairing);
        }
        let im_v = self.im_v();
        if im_v.dim() != self.g || !self.is_isotropic(&im_v) {
            return Err(ModuleViolation::ImageNotLagrangian);
        }
        let ker_v = self.ker_v();
        if ker_v.dim() != self.g || !self.is_isotropic(&ker_v) {
            return Err(ModuleViolation::KernelNotLagrangian);
        }
        // Adjoint identity in matrix form: fmatᵀ·G = σ(G·vmat).
        let fmat = self.fmat();
        if fmat.transpose().matmul(&self.gram) != mat_frob(&self.gram.matmul(&self.vmat)) {
            return Err(ModuleViolation::AdjointMismatch);
        }
        if self.ker_f() != im_v {
            return Err(ModuleViolation::KernelOfFNotImageOfV);
        }
        if self.im_f() != ker_v {
            return Err(ModuleViolation::ImageOfFNotKernelOfV);
        }
        Ok(())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn gram(&self) -> &Matrix<FieldElement> {
        &self.gram
    }

    pub fn vmat(&self) -> &Matrix<FieldElement> {
        &self.vmat
    }

    /// Matrix of the σ-twisted adjoint F (action `u ↦ fmat·σ(u)`), from
    /// fmatᵀ·G = σ(G·vmat).
    pub fn fmat(&self) -> Matrix<FieldElement> {
        let gt_inv = self
            .gram
            .transpose()
            .inverse()
            .expect("validated pairing is nondegenerate");
        gt_inv.matmul(&mat_frob(&self.gram.matmul(&self.vmat)).transpose())
    }

    /// V applied to a subspace: rows b ↦ σ⁻¹(b)·vmatᵀ.
    pub fn v_of(&self, w: &Subspace) -> Subspace {
        if w.dim() == 0 {
            return Subspace::zero(2 * self.g, &self.field);
        }
        Subspace::from_rows(mat_invfrob(w.basis()).matmul(&self.vmat.transpose()))
    }

    /// Orthogonal complement with respect to the pairing.
    pub fn perp(&self, w: &Subspace) -> Subspace {
        if w.dim() == 0 {
            return Subspace::full(2 * self.g, &self.field);
        }
        Subspace::from_rows(w.basis().matmul(&self.gram).nullspace())
    }

    pub fn im_v(&self) -> Subspace {
        Subspace::from_rows(self.vmat.transpose())
    }

    pub fn ker_v(&self) -> Subspace {
        // vmat·σ⁻¹(u) = 0 ⟺ u ∈ σ(null vmat).
        Subspace::from_rows(mat_frob(&self.vmat.nullspace()))
    }

    pub fn ker_f(&self) -> Subspace {
        Subspace::from_rows(mat_invfrob(&self.fmat().nullspace()))
    }

    pub fn im_f(&self) -> Subspace {
        Subspace::from_rows(self.fmat().transpose())
    }

    fn is_isotropic(&self, w: &Subspace) -> bool {
        if w.dim() == 0 {
            return true;
        }
        let b = w.basis();
        let products = b.matmul(&self.gram).matmul(&b.transpose());
        (0..products.rows()).all(|i| (0..products.cols()).all(|j| products[(i, j)].is_zero()))
    }

    /// Smallest chain containing {0, G} closed under V-images and perps.
    pub fn canonical_filtration(&self) -> Result<Flag, EoError> {
        let n = 2 * self.g;
        let mut members = vec![Subspace::zero(n, &self.field), Subspace::full(n, &self.field)];
        for _pass in 0..(4 * self.g + 4) {
            let mut added = false;
            let snapshot = members.clone();
            for w in &snapshot {
                for cand in [self.v_of(w), self.perp(w)] {
                    if !members.contains(&cand) {
                        members.push(cand);
                        added = true;
                    }
                }
            }
            if !added {
                members.sort_by_key(|w| w.dim());
                for pair in members.windows(2) {
                    if !pair[1].contains(&pair[0]) {
                        return Err(EoError::NonNested);
                    }
                }
                let images = members.iter().map(|w| self.v_of(w)).collect();
                return Ok(Flag { members, images });
            }
        }
        Err(EoError::NonNested)
    }

    /// Final type: v(dim W) = dim V(W) on canonical members, interpolated
    /// with slope 0 or 1 on each graded piece.
    pub fn final_type(&self) -> Result<FinalType, EoError> {
        let flag = self.canonical_filtration()?;
        let n = 2 * self.g;
        let mut v = vec![usize::MAX; n + 1];
        for (w, img) in flag.members.iter().zip(&flag.images) {
            v[w.dim()] = img.dim();
        }
        let known: Vec<usize> = (0..=n).filter(|&d| v[d] != usize::MAX).collect();
        for pair in known.windows(2) {
            let (d0, d1) = (pair[0], pair[1]);
            let (v0, v1) = (v[d0], v[d1]);
            let slope = if v1 == v0 {
                0
            } else if v1 == v0 + (d1 - d0) {
                1
            } else {
                return Err(EoError::InterpolationAmbiguous);
            };
            for d in d0 + 1..d1 {
                v[d] = v0 + slope * (d - d0);
            }
        }
        FinalType::new(v)
    }

    /// Ekedahl–Oort type of the module.
    pub fn eo_type(&self) -> Result<EOType, EoError> {
        Ok(self.final_type()?.young_diagram())
    }

    /// Block-diagonal sum; the result is validated.
    pub fn direct_sum(
        &self,
        other: &SymplecticSemilinearModule,
    ) -> Result<SymplecticSemilinearModule, EoError> {
        if self.field != other.field {
            return Err(EoError::FieldMismatch);
        }
        let n = 2 * (self.g + other.g);
        let z = self.field.zero();
        let mut gram = Matrix::zeros(n, n, &z);
        let mut vmat = Matrix::zeros(n, n, &z);
        let a = 2 * self.g;
        for i in 0..a {
            for j in 0..a {
                gram[(i, j)] = self.gram[(i, j)].clone();
                vmat[(i, j)] = self.vmat[(i, j)].clone();
            }
        }
        for i in 0..2 * other.g {
            for j in 0..2 * other.g {
                gram[(a + i, a + j)] = other.gram[(i, j)].clone();
                vmat[(a + i, a + j)] = other.vmat[(i, j)].clone();
            }
        }
        SymplecticSemilinearModule::try_new(&self.field, gram, vmat).map_err(EoError::Violation)
    }

    /// JSON form: {"g":.., "field":{..}, "gram":[[..]], "vmat":[[..]]}.
    pub fn to_json(&self) -> serde_json::Value {
        let mat_json = |m: &Matrix<FieldElement>| -> serde_json::Value {
            serde_json::Value::Array(
                (0..m.rows())
                    .map(|i| {
                        serde_json::Value::Array(
                            (0..m.cols())
                                .map(|j| {
                                    serde_json::Value::Array(
                                        m[(i, j)]
                                            .coeffs()
                                            .iter()
                                            .map(|&c| serde_json::Value::from(c))
                                            .collect(),
                                    )
                                })
                                .collect(),
                        )
                    })
                    .collect(),
            )
        };
        serde_json::json!({
            "g": self.g,
            "field": {"p": self.field.spec().p(), "k": self.field.spec().k()},
            "gram": mat_json(&self.gram),
            "vmat": mat_json(&self.vmat),
        })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<SymplecticSemilinearModule, EoError> {
        let bad = |msg: &str| EoError::BadInput(msg.to_string());
        let p = value["field"]["p"]
            .as_u64()
            .ok_or_else(|| bad("field.p missing"))? as u8;
        let k = value["field"]["k"]
            .as_u64()
            .ok_or_else(|| bad("field.k missing"))? as usize;
        let field = Field::new(p, k).map_err(|e| EoError::BadInput(e.to_string()))?;
        let read_mat = |v: &serde_json::Value| -> Result<Matrix<FieldElement>, EoError> {
            let rows = v.as_array().ok_or_else(|| bad("matrix must be an array"))?;
            let mut data = Vec::new();
            for row in rows {
                let row = row.as_array().ok_or_else(|| bad("row must be an array"))?;
                let mut out = Vec::new();
                for entry in row {
                    let coeffs = entry
                        .as_array()
                        .ok_or_else(|| bad("entry must be a coefficient array"))?
                        .iter()
                        .map(|c| c.as_i64().ok_or_else(|| bad("coefficient must be an integer")))
                        .collect::<Result<Vec<_>, _>>()?;
                    out.push(field.elt(&coeffs));
                }
                data.push(out);
            }
            if data.is_empty() {
                return Err(bad("empty matrix"));
            }
            Ok(Matrix::from_rows(data))
        };
        let gram = read_mat(&value["gram"])?;
        let vmat = read_mat(&value["vmat"])?;
        SymplecticSemilinearModule::try_new(&field, gram, vmat).map_err(EoError::Violation)
    }
}

/// The two named rank-2 building blocks with their classical V-action.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StandardBlock {
    /// V(e₂)=e₁, V(e₁)=e₁.
    OrdinaryElliptic,
    /// V(e₂)=e₁, V(e₁)=0.
    SupersingularElliptic,
}

impl StandardBlock {
    pub fn parse(s: &str) -> Option<StandardBlock> {
        match s {
            "ordinary-elliptic" => Some(StandardBlock::OrdinaryElliptic),
            "supersingular-elliptic" | "superspecial-elliptic" => {
                Some(StandardBlock::SupersingularElliptic)
            }
            _ => None,
        }
    }
}

pub fn standard_block(block: StandardBlock, field: &Field) -> SymplecticSemilinearModule {
    let z = field.zero();
    let one = field.one();
    let gram = Matrix::from_rows(vec![
        vec![z.clone(), one.clone()],
        vec![-&one, z.clone()],
    ]);
    let vmat = match block {
        StandardBlock::OrdinaryElliptic => Matrix::from_rows(vec![
            vec![one.clone(), one.clone()],
            vec![z.clone(), z.clone()],
        ]),
        StandardBlock::SupersingularElliptic => Matrix::from_rows(vec![
            vec![z.clone(), one.clone()],
            vec![z.clone(), z.clone()],
        ]),
    };
    SymplecticSemilinearModule::try_new(field, gram, vmat)
        .expect("standard blocks are valid modules")
}

/// A module realizing the requested E-O type: with v = mu_to_final_type(μ),
/// V(eᵢ) = e_{v(i)} where v jumps and 0 where it stays, against the
/// antidiagonal pairing ⟨eᵢ, e_{2g+1−i}⟩ = ±1.
pub fn standard_module(
    mu: &EOType,
    g: usize,
    field: &Field,
) -> Result<SymplecticSemilinearModule, EoError> {
    let v = mu_to_final_type(mu, g)?;
    let n = 2 * g;
    let z = field.zero();
    let one = field.one();
    let mut gram = Matrix::zeros(n, n, &z);
    for i in 0..g {
        gram[(i, n - 1 - i)] = one.clone();
        gram[(n - 1 - i, i)] = -&one;
    }
    let mut vmat = Matrix::zeros(n, n, &z);
    for i in 1..=n {
        if v.at(i) > v.at(i - 1) {
            vmat[(v.at(i) - 1, i - 1)] = one.clone();
        }
    }
    SymplecticSemilinearModule::try_new(field, gram, vmat).map_err(EoError::Violation)
}

/// What the rank profile alone determines about the E-O type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CartierOnly {
    Determined(EOType),
    Ambiguous(Vec<EOType>),
}

impl CartierOnly {
    pub fn candidates(&self) -> Vec<EOType> {
        match self {
            CartierOnly::Determined(t) => vec![t.clone()],
            CartierOnly::Ambiguous(ts) => ts.clone(),
        }
    }
}

/// Deduce the E-O type from the Cartier rank profile (r₁..r_g) alone:
/// rₙ = dim Vⁿ(G_g) = v∘ⁿ(g), so candidates are the final types matching
/// the whole profile.
pub fn eo_type_from_rank_profile(profile: &[usize]) -> Result<CartierOnly, EoError> {
    let g = profile.len();
    if g == 0 || g > 6 {
        return Err(EoError::BadInput("profile length must be 1..=6".into()));
    }
    let mut candidates = Vec::new();
    for mu in enumerate_eo_types(g) {
        let v = mu_to_final_type(&mu, g)?;
        if (1..=g).all(|n| v.iterate(g, n) == profile[n - 1]) {
            candidates.push(mu);
        }
    }
    match candidates.len() {
        0 => Err(EoError::NoSuchFinalType),
        1 => Ok(CartierOnly::Determined(candidates.pop().expect("one"))),
        _ => Ok(CartierOnly::Ambiguous(candidates)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> Field {
        Field::gf3(1)
    }

    fn f9() -> Field {
        Field::gf3(2)
    }

    #[test]
    fn eo_type_basics() {
        let t = EOType::new(vec![3, 2]).unwrap();
        assert_eq!(t.codimension(), 5);
        assert_eq!(t.a_number(), 2);
        assert_eq!(t.p_rank(4), 1);
        assert_eq!(t.to_string(), "[3,2]");
        assert_eq!(EOType::parse("[3,2]").unwrap(), t);
        assert_eq!(EOType::parse("3,2").unwrap(), t);
        assert_eq!(EOType::parse("[]").unwrap(), EOType::empty());
        assert_eq!(EOType::empty().p_rank(4), 4);
        assert!(EOType::new(vec![2, 2]).is_err());
        assert!(EOType::new(vec![1, 0]).is_err());
    }

    #[test]
    fn enumeration_counts_and_extremes() {
        for g in 1..=6 {
            let all = enumerate_eo_types(g);
            assert_eq!(all.len(), 1 << g);
            let mut dedup = all.clone();
            dedup.dedup();
            assert_eq!(dedup.len(), all.len());
        }
        let g4 = enumerate_eo_types(4);
        assert!(g4.contains(&EOType::empty()));
        assert!(g4.contains(&EOType::new(vec![4, 3, 2, 1]).unwrap()));
    }

    #[test]
    fn partial_order_cases() {
        let empty = EOType::empty();
        let t41 = EOType::new(vec![4, 1]).unwrap();
        let t32 = EOType::new(vec![3, 2]).unwrap();
        assert_eq!(eo_partial_order(&empty, &t41), OrderRel::Less);
        assert_eq!(eo_partial_order(&t41, &empty), OrderRel::Greater);
        assert_eq!(eo_partial_order(&t32, &t41), OrderRel::Incomparable);
        assert_eq!(eo_partial_order(&t32, &t32), OrderRel::Equal);
        // Transitivity and antisymmetry over the whole g=4 poset.
        let all = enumerate_eo_types(4);
        for a in &all {
            for b in &all {
                for c in &all {
                    if eo_partial_order(a, b) == OrderRel::Less
                        && eo_partial_order(b, c) == OrderRel::Less
                    {
                        assert_eq!(eo_partial_order(a, c), OrderRel::Less);
                    }
                }
                if eo_partial_order(a, b) == OrderRel::Equal {
                    assert_eq!(a, b);
                }
            }
        }
    }

    #[test]
    fn final_type_round_trips_all_types() {
        for g in 1..=4 {
            for mu in enumerate_eo_types(g) {
                let v = mu_to_final_type(&mu, g).unwrap();
                assert_eq!(v.young_diagram(), mu, "g={g} mu={mu}");
                // v-level identities: p-rank counts fixed points, a = g − v(g).
                let fixed = (1..=g).filter(|&i| v.at(i) == i).count();
                assert_eq!(fixed, mu.p_rank(g));
                assert_eq!(g - v.at(g), mu.a_number());
            }
        }
    }

    #[test]
    fn ordinary_and_superspecial_final_types() {
        let ord = mu_to_final_type(&EOType::empty(), 4).unwrap();
        assert_eq!(ord.values(), &[0, 1, 2, 3, 4, 4, 4, 4, 4]);
        let ss = mu_to_final_type(&EOType::new(vec![4, 3, 2, 1]).unwrap(), 4).unwrap();
        assert_eq!(ss.values(), &[0, 0, 0, 0, 0, 1, 2, 3, 4]);
        let t32 = FinalType::new(vec![0, 1, 1, 1, 2, 2, 3, 4, 4]).unwrap();
        assert_eq!(t32.young_diagram(), EOType::new(vec![3, 2]).unwrap());
    }

    #[test]
    fn named_blocks_match_classical_action() {
        let f = f3();
        let ord = standard_block(StandardBlock::OrdinaryElliptic, &f);
        assert!(ord.validate().is_ok());
        assert_eq!(ord.eo_type().unwrap(), EOType::empty());
        let flag = ord.canonical_filtration().unwrap();
        assert_eq!(
            flag.members.iter().map(|w| w.dim()).collect::<Vec<_>>(),
            vec![0, 1, 2]
        );
        // V(A₂)=A₁ and V(A₁)=A₁.
        assert_eq!(flag.images[2], flag.members[1]);
        assert_eq!(flag.images[1], flag.members[1]);

        let ss = standard_block(StandardBlock::SupersingularElliptic, &f);
        assert_eq!(ss.eo_type().unwrap(), EOType::new(vec![1]).unwrap());
        let flag = ss.canonical_filtration().unwrap();
        assert_eq!(flag.images[1].dim(), 0);
    }

    #[test]
    fn validation_rejects_bad_modules() {
        let f = f3();
        let z = f.zero();
        let one = f.one();
        // Zero pairing.
        let gram = Matrix::zeros(2, 2, &z);
        let vmat = Matrix::from_rows(vec![vec![z.clone(), one.clone()], vec![z.clone(), z.clone()]]);
        assert_eq!(
            SymplecticSemilinearModule::try_new(&f, gram, vmat).unwrap_err(),
            ModuleViolation::DegeneratePairing
        );
        // Identity V on dim 4: image is everything, not Lagrangian.
        let n = 4;
        let mut gram = Matrix::zeros(n, n, &z);
        for i in 0..2 {
            gram[(i, n - 1 - i)] = one.clone();
            gram[(n - 1 - i, i)] = -&one;
        }
        let vmat = Matrix::identity(n, &z);
        assert_eq!(
            SymplecticSemilinearModule::try_new(&f, gram, vmat).unwrap_err(),
            ModuleViolation::ImageNotLagrangian
        );
        // Non-alternating pairing.
        let gram = Matrix::identity(2, &z);
        let vmat = Matrix::from_rows(vec![vec![z.clone(), one.clone()], vec![z.clone(), z.clone()]]);
        assert_eq!(
            SymplecticSemilinearModule::try_new(&f, gram, vmat).unwrap_err(),
            ModuleViolation::NotAlternating
        );
    }

    #[test]
    fn standard_modules_round_trip_all_types() {
        for g in 1..=4 {
            for mu in enumerate_eo_types(g) {
                let m = standard_module(&mu, g, &f3()).unwrap();
                assert!(m.validate().is_ok(), "g={g} mu={mu}");
                assert_eq!(m.eo_type().unwrap(), mu, "g={g} mu={mu}");
            }
        }
        // Same over an extension field.
        for mu in enumerate_eo_types(3) {
            let m = standard_module(&mu, 3, &f9()).unwrap();
            assert_eq!(m.eo_type().unwrap(), mu);
        }
    }

    #[test]
    fn standard_g2_prank1_block_action() {
        // V(A₄)=A₂, V(A₂)=A₁, V(A₁)=A₁, A₁^⊥=A₃ for the genus-2 block
        // with one part.
        let m = standard_module(&EOType::new(vec![1]).unwrap(), 2, &f3()).unwrap();
        let flag = m.canonical_filtration().unwrap();
        let dims: Vec<usize> = flag.members.iter().map(|w| w.dim()).collect();
        assert_eq!(dims, vec![0, 1, 2, 3, 4]);
        assert_eq!(flag.images[4], flag.members[2]);
        assert_eq!(flag.images[2], flag.members[1]);
        assert_eq!(flag.images[1], flag.members[1]);
        assert_eq!(m.perp(&flag.members[1]), flag.members[3]);
    }

    #[test]
    fn four_product_computations() {
        let f = f3();
        let ordinary = standard_block(StandardBlock::OrdinaryElliptic, &f);
        let supersingular = standard_block(StandardBlock::SupersingularElliptic, &f);
        let t = |parts: &[usize]| EOType::new(parts.to_vec()).unwrap();

        // Genus-1 ordinary ⊕ genus-3 of type [2,1] → [2,1].
        let b21 = standard_module(&t(&[2, 1]), 3, &f).unwrap();
        let sum = ordinary.direct_sum(&b21).unwrap();
        assert_eq!(sum.eo_type().unwrap(), t(&[2, 1]));

        // Genus-1 supersingular ⊕ genus-3 of type [1] → [2,1].
        let b1 = standard_module(&t(&[1]), 3, &f).unwrap();
        let sum = supersingular.direct_sum(&b1).unwrap();
        assert_eq!(sum.eo_type().unwrap(), t(&[2, 1]));

        // Two genus-2 blocks of type [1] → [2,1].
        let a1 = standard_module(&t(&[1]), 2, &f).unwrap();
        let sum = a1.direct_sum(&a1).unwrap();
        assert_eq!(sum.eo_type().unwrap(), t(&[2, 1]));

        // Genus-1 supersingular ⊕ genus-3 of type [3] → [4,2].
        let b3 = standard_module(&t(&[3]), 3, &f).unwrap();
        let sum = supersingular.direct_sum(&b3).unwrap();
        assert_eq!(sum.eo_type().unwrap(), t(&[4, 2]));

        // Two genus-2 blocks of type [2] → [4,3].
        let a2 = standard_module(&t(&[2]), 2, &f).unwrap();
        let sum = a2.direct_sum(&a2).unwrap();
        assert_eq!(sum.eo_type().unwrap(), t(&[4, 3]));
    }

    #[test]
    fn product_filtration_matches_block_description() {
        // Ordinary g1 ⊕ [2,1] g3: canonical chain 0 ⊂ C₂ ⊂ C₄ ⊂ C₆ ⊂ C₈
        // with V(C₈)=C₄, V(C₄)=C₂, V(C₂)=C₂, V(C₆)=C₄.
        let f = f3();
        let sum = standard_block(StandardBlock::OrdinaryElliptic, &f)
            .direct_sum(&standard_module(&EOType::new(vec![2, 1]).unwrap(), 3, &f).unwrap())
            .unwrap();
        let flag = sum.canonical_filtration().unwrap();
        let dims: Vec<usize> = flag.members.iter().map(|w| w.dim()).collect();
        assert_eq!(dims, vec![0, 2, 4, 6, 8]);
        assert_eq!(flag.images[4], flag.members[2]);
        assert_eq!(flag.images[2], flag.members[1]);
        assert_eq!(flag.images[1], flag.members[1]);
        assert_eq!(flag.images[3], flag.members[2]);
        assert_eq!(sum.perp(&flag.members[1]), flag.members[3]);
    }

    #[test]
    fn rank_profile_deductions() {
        let t = |parts: &[usize]| EOType::new(parts.to_vec()).unwrap();
        assert_eq!(
            eo_type_from_rank_profile(&[2, 1, 1, 1]).unwrap(),
            CartierOnly::Ambiguous(vec![t(&[3, 1]), t(&[3, 2])])
        );
        assert_eq!(
            eo_type_from_rank_profile(&[2, 0, 0, 0]).unwrap(),
            CartierOnly::Determined(t(&[4, 3]))
        );
        assert_eq!(
            eo_type_from_rank_profile(&[1, 1, 1, 1]).unwrap(),
            CartierOnly::Determined(t(&[3, 2, 1]))
        );
        assert_eq!(
            eo_type_from_rank_profile(&[2, 2, 2, 2]).unwrap(),
            CartierOnly::Determined(t(&[2, 1]))
        );
        assert_eq!(
            eo_type_from_rank_profile(&[4, 4, 4, 4]).unwrap(),
            CartierOnly::Determined(EOType::empty())
        );
        assert_eq!(
            eo_type_from_rank_profile(&[0, 0, 0, 0]).unwrap(),
            CartierOnly::Determined(t(&[4, 3, 2, 1]))
        );
    }

    #[test]
    fn rank_profile_consistency_with_standard_modules() {
        // For every type, the Cartier-only deduction from the true profile
        // contains the true type.
        for mu in enumerate_eo_types(4) {
            let v = mu_to_final_type(&mu, 4).unwrap();
            let profile: Vec<usize> = (1..=4).map(|n| v.iterate(4, n)).collect();
            let deduced = eo_type_from_rank_profile(&profile).unwrap();
            assert!(deduced.candidates().contains(&mu), "mu={mu}");
        }
    }

    #[test]
    fn module_json_round_trip() {
        let f = f9();
        let m = standard_module(&EOType::new(vec![3, 1]).unwrap(), 4, &f).unwrap();
        let j = m.to_json();
        let back = SymplecticSemilinearModule::from_json(&j).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.eo_type().unwrap(), EOType::new(vec![3, 1]).unwrap());
    }

    #[test]
    fn covering_pairs_sanity() {
        let pairs = eo_covering_pairs(2);
        // Chain ∅ < [1] < [2] < [2,1] at g=2.
        assert_eq!(pairs.len(), 3);
        let pairs4 = eo_covering_pairs(4);
        // Every cover is strict and has no intermediate.
        for (a, b) in &pairs4 {
            assert_eq!(eo_partial_order(a, b), OrderRel::Less);
        }
        // The ordinary type covers nothing and is covered only by [1].
        let covered_by_empty: Vec<_> = pairs4
            .iter()
            .filter(|(a, _)| a == &EOType::empty())
            .collect();
        assert_eq!(covered_by_empty.len(), 1);
        assert_eq!(covered_by_empty[0].1, EOType::new(vec![1]).unwrap());
    }

    #[test]
    fn scaling_gram_leaves_types_unchanged() {
        let f = f9();
        let c = f.from_index(5);
        for mu in [vec![], vec![3, 2], vec![4, 3, 2, 1]] {
            let mu = EOType::new(mu).unwrap();
            let m = standard_module(&mu, 4, &f).unwrap();
            let scaled =
                SymplecticSemilinearModule::try_new(&f, m.gram().scale(&c), m.vmat().clone())
                    .unwrap();
            assert_eq!(scaled.eo_type().unwrap(), mu);
        }
    }
}
