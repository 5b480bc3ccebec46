//! Trigonal curve models in characteristic 3.
//!
//! A model is a plane equation `y³ + a₂(x)·y² + a₁(x)·y = h(x)` over a field
//! of characteristic 3, with `h` monic of degree 5 and `deg a₂, deg a₁ ≤ 3`.
//! Built-in families fix the shape of the coefficient polynomials and expose
//! a small list of named parameters; a custom model supplies the coefficient
//! polynomials directly.
//!
//! Construction validates parameter constraints and runs a smoothness check
//! on the affine model: the x-coordinates of candidate singular points are
//! cut out by resultants, and the y-coordinates are then extracted by a gcd
//! computation over `k[x]/(φ)` that splits the modulus whenever a leading
//! coefficient fails to be invertible.

use std::collections::BTreeMap;
use std::fmt;

use crate::field::{Field, FieldElement};
use crate::linalg::Matrix;
use crate::poly::Poly;
use crate::ratfunc::RatFunc;

/// Identifies which built-in family a model belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    F32,
    F321,
    F43A,
    F43B,
    F43C,
    F21,
    Custom,
}

impl Family {
    /// All built-in families, in canonical order.
    pub const BUILTIN: [Family; 6] = [
        Family::F32,
        Family::F321,
        Family::F43A,
        Family::F43B,
        Family::F43C,
        Family::F21,
    ];

    /// Canonical lower-case name used in CLI arguments and JSON.
    pub fn name(&self) -> &'static str {
        match self {
            Family::F32 => "f32",
            Family::F321 => "f321",
            Family::F43A => "f43a",
            Family::F43B => "f43b",
            Family::F43C => "f43c",
            Family::F21 => "f21",
            Family::Custom => "custom",
        }
    }

    /// Parse a family name (case-insensitive).
    pub fn parse(s: &str) -> Option<Family> {
        match s.to_ascii_lowercase().as_str() {
            "f32" => Some(Family::F32),
            "f321" => Some(Family::F321),
            "f43a" => Some(Family::F43A),
            "f43b" => Some(Family::F43B),
            "f43c" => Some(Family::F43C),
            "f21" => Some(Family::F21),
            "custom" => Some(Family::Custom),
            _ => None,
        }
    }

    /// Names of the free parameters, in the order used by sweeps and CSV.
    pub fn param_names(&self) -> &'static [&'static str] {
        match self {
            Family::F32 => &["a3", "a2", "a0", "b"],
            Family::F321 => &["b", "c", "d"],
            Family::F43A => &["b1", "a1", "a2"],
            Family::F43B => &["a2", "a1"],
            Family::F43C => &["a1", "a2"],
            Family::F21 => &["a", "b"],
            Family::Custom => &[],
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Errors arising while building or validating a curve model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurveError {
    /// The coefficient field does not have characteristic 3.
    WrongCharacteristic(u8),
    /// A required parameter is missing.
    MissingParam(String),
    /// A parameter not belonging to the family was supplied.
    UnexpectedParam(String),
    /// A parameter value lives in a different field than the model.
    ParamFieldMismatch(String),
    /// A family constraint (typically a non-vanishing condition) fails.
    ConstraintViolation(String),
    /// The affine model has a disallowed singular point; the string
    /// describes the witness locus.
    SingularCurve(String),
    /// The coefficient polynomials do not have the required shape.
    MalformedModel(String),
    /// A JSON description could not be decoded into a model.
    BadInput(String),
}

impl fmt::Display for CurveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveError::WrongCharacteristic(p) => {
                write!(f, "curve models require characteristic 3, got {p}")
            }
            CurveError::MissingParam(name) => write!(f, "missing parameter `{name}`"),
            CurveError::UnexpectedParam(name) => write!(f, "unexpected parameter `{name}`"),
            CurveError::ParamFieldMismatch(name) => {
                write!(f, "parameter `{name}` lives in a different field")
            }
            CurveError::ConstraintViolation(msg) => write!(f, "constraint violated: {msg}"),
            CurveError::SingularCurve(msg) => write!(f, "singular model: {msg}"),
            CurveError::MalformedModel(msg) => write!(f, "malformed model: {msg}"),
            CurveError::BadInput(msg) => write!(f, "bad curve description: {msg}"),
        }
    }
}

impl std::error::Error for CurveError {}

/// A trigonal plane model `y³ + a₂(x)·y² + a₁(x)·y = h(x)` over GF(3ᵏ).
#[derive(Clone, Debug, PartialEq)]
pub struct CurveModel {
    field: Field,
    family: Family,
    params: BTreeMap<String, FieldElement>,
    a2x: Poly,
    a1x: Poly,
    hx: Poly,
}

impl CurveModel {
    /// Construct a member of a built-in family from named parameters.
    ///
    /// Validates the parameter list, the family's non-vanishing constraints,
    /// and smoothness of the affine model. The `f321` family is special: its
    /// plane model always carries a unibranch singular point at `(0, 1)`
    /// (resolved in the smooth projective model), so exactly that locus is
    /// tolerated; any other singular point is rejected.
    pub fn from_family(
        family: Family,
        field: &Field,
        params: &BTreeMap<String, FieldElement>,
    ) -> Result<CurveModel, CurveError> {
        if field.p() != 3 {
            return Err(CurveError::WrongCharacteristic(field.p()));
        }
        if family == Family::Custom {
            return Err(CurveError::BadInput(
                "custom models are built from coefficient polynomials, not parameters".into(),
            ));
        }
        let names = family.param_names();
        for name in params.keys() {
            if !names.contains(&name.as_str()) {
                return Err(CurveError::UnexpectedParam(name.clone()));
            }
        }
        let get = |name: &str| -> Result<FieldElement, CurveError> {
            let v = params
                .get(name)
                .ok_or_else(|| CurveError::MissingParam(name.to_string()))?;
            if v.field() != field {
                return Err(CurveError::ParamFieldMismatch(name.to_string()));
            }
            Ok(v.clone())
        };

        let one = Poly::one(field);
        let (a2x, a1x, hx) = match family {
            Family::F32 => {
                // y³ + y² + b·y = x⁵ + a₃x³ + a₂x² + a₀, with a₂ ≠ 0.
                let a3 = get("a3")?;
                let a2 = get("a2")?;
                let a0 = get("a0")?;
                let b = get("b")?;
                if a2.is_zero() {
                    return Err(CurveError::ConstraintViolation("f32 requires a2 != 0".into()));
                }
                let h = Poly::new(
                    field,
                    vec![
                        a0,
                        field.zero(),
                        a2,
                        a3,
                        field.zero(),
                        field.one(),
                    ],
                );
                (one.clone(), Poly::constant(b.clone()), h)
            }
            Family::F321 => {
                // y³ - b·x³(y² + y) = x⁵ + cx³ + dx² + 1, with b ≠ 0, d ≠ 0.
                let b = get("b")?;
                let c = get("c")?;
                let d = get("d")?;
                if b.is_zero() {
                    return Err(CurveError::ConstraintViolation("f321 requires b != 0".into()));
                }
                if d.is_zero() {
                    return Err(CurveError::ConstraintViolation("f321 requires d != 0".into()));
                }
                let minus_b_x3 = Poly::monomial(-&b, 3);
                let h = Poly::new(
                    field,
                    vec![
                        field.one(),
                        field.zero(),
                        d,
                        c,
                        field.zero(),
                        field.one(),
                    ],
                );
                (minus_b_x3.clone(), minus_b_x3, h)
            }
            Family::F43A => {
                // y³ + y² + θ(x)·y = h(x) with
                //   θ(x) = x³ + x² + b₁x + b₂,
                //   h(x) = x⁵ + a₄x⁴ + a₃x³ + a₂x² + a₁x,
                // and the closure conditions
                //   b₂ = b₁² + a₂,  a₄ = b₁ - 1,  a₃ = b₁³ + b₁² + b₁ + a₂.
                let b1 = get("b1")?;
                let a1 = get("a1")?;
                let a2 = get("a2")?;
                let b2 = &(&b1 * &b1) + &a2;
                let a4 = &b1 - &field.one();
                let b1sq = &b1 * &b1;
                let a3 = &(&(&(&b1sq * &b1) + &b1sq) + &b1) + &a2;
                let theta = Poly::new(field, vec![b2, b1, field.one(), field.one()]);
                let h = Poly::new(field, vec![field.zero(), a1, a2, a3, a4, field.one()]);
                (one.clone(), theta, h)
            }
            Family::F43B => {
                // y³ - y = x⁵ + a₂x² + a₁x. Always smooth.
                let a2 = get("a2")?;
                let a1 = get("a1")?;
                let h = Poly::new(
                    field,
                    vec![
                        field.zero(),
                        a1,
                        a2,
                        field.zero(),
                        field.zero(),
                        field.one(),
                    ],
                );
                (Poly::zero(field), Poly::constant(-&field.one()), h)
            }
            Family::F43C => {
                // y³ + y² + (x³ + x²)·y = x⁵ + 2x⁴ + a₁x + a₂, with a₁ ≠ 0.
                let a1 = get("a1")?;
                let a2 = get("a2")?;
                if a1.is_zero() {
                    return Err(CurveError::ConstraintViolation("f43c requires a1 != 0".into()));
                }
                let a1x = Poly::new(field, vec![field.zero(), field.zero(), field.one(), field.one()]);
                let h = Poly::new(
                    field,
                    vec![
                        a2,
                        a1,
                        field.zero(),
                        field.zero(),
                        field.scalar(2),
                        field.one(),
                    ],
                );
                (one.clone(), a1x, h)
            }
            Family::F21 => {
                // y³ + b·x²y = x⁵ + ax⁴ + x, with b ≠ 0.
                let a = get("a")?;
                let b = get("b")?;
                if b.is_zero() {
                    return Err(CurveError::ConstraintViolation("f21 requires b != 0".into()));
                }
                let h = Poly::new(
                    field,
                    vec![
                        field.zero(),
                        field.one(),
                        field.zero(),
                        field.zero(),
                        a,
                        field.one(),
                    ],
                );
                (Poly::zero(field), Poly::monomial(b.clone(), 2), h)
            }
            Family::Custom => unreachable!(),
        };

        let model = CurveModel {
            field: field.clone(),
            family,
            params: params.clone(),
            a2x,
            a1x,
            hx,
        };
        model.enforce_smoothness()?;
        Ok(model)
    }

    /// Construct a model directly from coefficient polynomials.
    ///
    /// Requires `h` monic of degree 5 and `deg a₂, deg a₁ ≤ 3`, and rejects
    /// any model whose affine chart has a singular point.
    pub fn custom(field: &Field, a2x: Poly, a1x: Poly, hx: Poly) -> Result<CurveModel, CurveError> {
        if field.p() != 3 {
            return Err(CurveError::WrongCharacteristic(field.p()));
        }
        if hx.deg() != 5 || !hx.is_monic() {
            return Err(CurveError::MalformedModel(
                "h(x) must be monic of degree 5".into(),
            ));
        }
        if a2x.deg() > 3 || a1x.deg() > 3 {
            return Err(CurveError::MalformedModel(
                "coefficients of y² and y must have degree at most 3".into(),
            ));
        }
        let model = CurveModel {
            field: field.clone(),
            family: Family::Custom,
            params: BTreeMap::new(),
            a2x,
            a1x,
            hx,
        };
        model.enforce_smoothness()?;
        Ok(model)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn params(&self) -> &BTreeMap<String, FieldElement> {
        &self.params
    }

    /// Coefficient of y² in the defining equation.
    pub fn a2x(&self) -> &Poly {
        &self.a2x
    }

    /// Coefficient of y in the defining equation.
    pub fn a1x(&self) -> &Poly {
        &self.a1x
    }

    /// Right-hand side h(x) of the defining equation.
    pub fn hx(&self) -> &Poly {
        &self.hx
    }

    /// Defining polynomial `F = y³ + a₂y² + a₁y - h` as a y-polynomial with
    /// x-polynomial coefficients, lowest degree first.
    pub fn f_ypoly(&self) -> Vec<Poly> {
        vec![
            -&self.hx,
            self.a1x.clone(),
            self.a2x.clone(),
            Poly::one(&self.field),
        ]
    }

    /// ∂F/∂y = 2a₂y + a₁ (the 3y² term vanishes in characteristic 3).
    pub fn fy_ypoly(&self) -> Vec<Poly> {
        let two = self.field.scalar(2);
        strip_ypoly(vec![self.a1x.clone(), self.a2x.scale(&two)])
    }

    /// ∂F/∂x = a₂'y² + a₁'y - h'.
    pub fn fx_ypoly(&self) -> Vec<Poly> {
        strip_ypoly(vec![
            -&self.hx.derivative(),
            self.a1x.derivative(),
            self.a2x.derivative(),
        ])
    }

    /// Run the smoothness check and translate the report into the
    /// family-specific acceptance policy.
    fn enforce_smoothness(&self) -> Result<(), CurveError> {
        match self.smoothness_check() {
            SmoothnessReport::Smooth => {
                if self.family == Family::F321 {
                    // The f321 plane model must carry its singular point at
                    // (0, 1); a smooth report would mean the model was built
                    // incorrectly.
                    return Err(CurveError::MalformedModel(
                        "f321 model unexpectedly smooth at x = 0".into(),
                    ));
                }
                Ok(())
            }
            SmoothnessReport::Degenerate(msg) => Err(CurveError::SingularCurve(msg)),
            SmoothnessReport::Singular(loci) => {
                if self.family == Family::F321 {
                    let x = Poly::x(&self.field);
                    let y_minus_one = Poly::new(
                        &self.field,
                        vec![-&self.field.one(), self.field.one()],
                    );
                    let only_cusp = loci.iter().all(|locus| {
                        locus.x_minimal == x && locus.y_squarefree(&self.field) == Some(y_minus_one.clone())
                    });
                    if only_cusp && !loci.is_empty() {
                        return Ok(());
                    }
                }
                let witness = loci
                    .iter()
                    .map(|l| l.describe())
                    .collect::<Vec<_>>()
                    .join("; ");
                Err(CurveError::SingularCurve(witness))
            }
        }
    }

    /// Locate singular points of the affine model.
    ///
    /// Candidate x-coordinates are the common roots of
    /// `Res_y(F, F_y)` and `Res_y(F, F_x)`; over each branch of the
    /// squarefree candidate polynomial, the y-locus is
    /// `gcd(F, F_x, F_y) mod φ`, computed with dynamic modulus splitting so
    /// that non-invertible leading coefficients refine the branch instead of
    /// aborting.
    pub fn smoothness_check(&self) -> SmoothnessReport {
        let field = &self.field;
        let f = self.f_ypoly();
        let fy = self.fy_ypoly();
        let fx = self.fx_ypoly();

        if fy.is_empty() {
            // F = y³ - h: purely inseparable y-fiber. Singular points sit
            // over roots of h' (with y the cube root of h there).
            let hp = self.hx.derivative();
            if hp.is_zero() {
                return SmoothnessReport::Degenerate(
                    "both partial derivatives vanish identically".into(),
                );
            }
            let sf = hp.squarefree_part();
            if sf.deg() <= 0 {
                return SmoothnessReport::Smooth;
            }
            let locus = SingularLocus {
                x_minimal: sf.clone(),
                y_factor: reduce_ypoly(&f, &sf),
            };
            return SmoothnessReport::Singular(vec![locus]);
        }

        let r1 = resultant_y(field, &f, &fy);
        let r2 = resultant_y(field, &f, &fx);
        let candidates = match (r1.is_zero(), r2.is_zero()) {
            (true, true) => {
                return SmoothnessReport::Degenerate(
                    "the model shares a component with both partial derivatives".into(),
                )
            }
            (true, false) => r2,
            (false, _) => {
                if r2.is_zero() {
                    r1
                } else {
                    r1.gcd(&r2)
                }
            }
        };
        if candidates.deg() <= 0 {
            return SmoothnessReport::Smooth;
        }
        let sf = candidates.squarefree_part();
        let mut loci = Vec::new();
        for (modulus, gcd) in branch_gcd(field, &[f.clone(), fy, fx], &sf) {
            if gcd.len() > 1 {
                loci.push(SingularLocus {
                    x_minimal: modulus,
                    y_factor: gcd,
                });
            }
        }
        if loci.is_empty() {
            SmoothnessReport::Smooth
        } else {
            loci.sort_by(|a, b| {
                a.x_minimal
                    .coeffs()
                    .iter()
                    .map(FieldElement::index)
                    .collect::<Vec<_>>()
                    .cmp(&b.x_minimal.coeffs().iter().map(FieldElement::index).collect::<Vec<_>>())
            });
            SmoothnessReport::Singular(loci)
        }
    }

    /// JSON description of the model, suitable for round-tripping.
    pub fn to_json(&self) -> serde_json::Value {
        let mut obj = serde_json::Map::new();
        obj.insert(
            "family".into(),
            serde_json::Value::String(self.family.name().to_string()),
        );
        obj.insert("field".into(), serde_json::to_value(self.field.spec()).unwrap());
        if self.family == Family::Custom {
            obj.insert("a2x".into(), poly_to_json(&self.a2x));
            obj.insert("a1x".into(), poly_to_json(&self.a1x));
            obj.insert("hx".into(), poly_to_json(&self.hx));
        } else {
            let mut params = serde_json::Map::new();
            for (k, v) in &self.params {
                params.insert(
                    k.clone(),
                    serde_json::Value::Array(
                        v.coeffs()
                            .iter()
                            .map(|c| serde_json::Value::from(*c))
                            .collect(),
                    ),
                );
            }
            obj.insert("params".into(), serde_json::Value::Object(params));
        }
        serde_json::Value::Object(obj)
    }

    /// Rebuild a model from its JSON description.
    pub fn from_json(value: &serde_json::Value) -> Result<CurveModel, CurveError> {
        let obj = value
            .as_object()
            .ok_or_else(|| CurveError::BadInput("expected an object".into()))?;
        let family_name = obj
            .get("family")
            .and_then(|v| v.as_str())
            .ok_or_else(|| CurveError::BadInput("missing `family`".into()))?;
        let family = Family::parse(family_name)
            .ok_or_else(|| CurveError::BadInput(format!("unknown family `{family_name}`")))?;
        let spec = obj
            .get("field")
            .ok_or_else(|| CurveError::BadInput("missing `field`".into()))?;
        let spec: crate::field::FieldSpec = serde_json::from_value(spec.clone())
            .map_err(|e| CurveError::BadInput(format!("bad field spec: {e}")))?;
        let field = Field::from_spec(spec);
        if family == Family::Custom {
            let a2x = poly_from_json(&field, obj.get("a2x"))?;
            let a1x = poly_from_json(&field, obj.get("a1x"))?;
            let hx = poly_from_json(&field, obj.get("hx"))?;
            return CurveModel::custom(&field, a2x, a1x, hx);
        }
        let params_json = obj
            .get("params")
            .and_then(|v| v.as_object())
            .ok_or_else(|| CurveError::BadInput("missing `params`".into()))?;
        let mut params = BTreeMap::new();
        for (k, v) in params_json {
            let coeffs = elt_coeffs_from_json(v)
                .ok_or_else(|| CurveError::BadInput(format!("bad value for parameter `{k}`")))?;
            params.insert(k.clone(), field.elt(&coeffs));
        }
        CurveModel::from_family(family, &field, &params)
    }
}

fn poly_to_json(p: &Poly) -> serde_json::Value {
    serde_json::Value::Array(
        p.coeffs()
            .iter()
            .map(|c| {
                serde_json::Value::Array(c.coeffs().iter().map(|&d| serde_json::Value::from(d)).collect())
            })
            .collect(),
    )
}

fn poly_from_json(field: &Field, v: Option<&serde_json::Value>) -> Result<Poly, CurveError> {
    let arr = v
        .and_then(|v| v.as_array())
        .ok_or_else(|| CurveError::BadInput("missing polynomial coefficients".into()))?;
    let mut coeffs = Vec::with_capacity(arr.len());
    for c in arr {
        let digits = elt_coeffs_from_json(c)
            .ok_or_else(|| CurveError::BadInput("bad polynomial coefficient".into()))?;
        coeffs.push(field.elt(&digits));
    }
    Ok(Poly::new(field, coeffs))
}

fn elt_coeffs_from_json(v: &serde_json::Value) -> Option<Vec<i64>> {
    v.as_array()?.iter().map(|d| d.as_i64()).collect()
}

/// Outcome of the smoothness check on the affine model.
#[derive(Clone, Debug, PartialEq)]
pub enum SmoothnessReport {
    /// No singular points on the affine chart.
    Smooth,
    /// Isolated singular points, described branch by branch.
    Singular(Vec<SingularLocus>),
    /// The singular locus has positive dimension (non-reduced or reducible
    /// model); the string explains what degenerated.
    Degenerate(String),
}

/// One branch of the singular locus: x-coordinates are the roots of
/// `x_minimal` (squarefree), and over that branch the y-coordinates satisfy
/// the y-polynomial `y_factor` (coefficients reduced mod `x_minimal`).
#[derive(Clone, Debug, PartialEq)]
pub struct SingularLocus {
    pub x_minimal: Poly,
    pub y_factor: Vec<Poly>,
}

impl SingularLocus {
    /// Human-readable witness description.
    pub fn describe(&self) -> String {
        let ys = self
            .y_factor
            .iter()
            .enumerate()
            .map(|(i, c)| format!("({c})·y^{i}"))
            .collect::<Vec<_>>()
            .join(" + ");
        format!("x root of {}, y root of {}", self.x_minimal, ys)
    }

    /// If all y-coefficients are constants (deg 0 branch data), the monic
    /// squarefree part of the y-polynomial over the base field.
    pub fn y_squarefree(&self, field: &Field) -> Option<Poly> {
        let mut coeffs = Vec::with_capacity(self.y_factor.len());
        for c in &self.y_factor {
            if c.deg() > 0 {
                return None;
            }
            coeffs.push(if c.is_zero() {
                field.zero()
            } else {
                c.coeffs()[0].clone()
            });
        }
        Some(Poly::new(field, coeffs).squarefree_part())
    }
}

fn strip_ypoly(mut v: Vec<Poly>) -> Vec<Poly> {
    while v.last().is_some_and(Poly::is_zero) {
        v.pop();
    }
    v
}

fn reduce_ypoly(f: &[Poly], modulus: &Poly) -> Vec<Poly> {
    strip_ypoly(f.iter().map(|c| c.rem(modulus)).collect())
}

/// Resultant in y of two y-polynomials with x-polynomial coefficients,
/// computed as the determinant of the Sylvester matrix over the rational
/// function field (the result is always a polynomial).
pub fn resultant_y(field: &Field, f: &[Poly], g: &[Poly]) -> Poly {
    let f = strip_ypoly(f.to_vec());
    let g = strip_ypoly(g.to_vec());
    if f.is_empty() || g.is_empty() {
        return Poly::zero(field);
    }
    let (df, dg) = (f.len() - 1, g.len() - 1);
    if df == 0 {
        return f[0].pow(dg);
    }
    if dg == 0 {
        return g[0].pow(df);
    }
    let n = df + dg;
    let zero = RatFunc::zero(field);
    let mut m = Matrix::zeros(n, n, &zero);
    // dg rows of f's coefficients, then df rows of g's, each shifted.
    for r in 0..dg {
        for (i, c) in f.iter().enumerate() {
            m[(r, r + df - i)] = RatFunc::from_poly(c.clone());
        }
    }
    for r in 0..df {
        for (i, c) in g.iter().enumerate() {
            m[(dg + r, r + dg - i)] = RatFunc::from_poly(c.clone());
        }
    }
    m.det()
        .as_poly()
        .expect("resultant of polynomial matrices is a polynomial")
        .clone()
}

/// gcd of several y-polynomials over `k[x]/(modulus)` with dynamic splitting:
/// whenever a leading coefficient is a zero divisor, the modulus is factored
/// and both branches are pursued. Returns `(branch modulus, monic gcd)`
/// pairs covering the squarefree input modulus.
pub fn branch_gcd(field: &Field, polys: &[Vec<Poly>], modulus: &Poly) -> Vec<(Poly, Vec<Poly>)> {
    let mut out = Vec::new();
    branch_gcd_inner(field, polys, modulus.clone(), &mut out);
    out.sort_by(|a, b| {
        a.0.coeffs()
            .iter()
            .map(FieldElement::index)
            .collect::<Vec<_>>()
            .cmp(&b.0.coeffs().iter().map(FieldElement::index).collect::<Vec<_>>())
    });
    out
}

fn branch_gcd_inner(
    field: &Field,
    polys: &[Vec<Poly>],
    modulus: Poly,
    out: &mut Vec<(Poly, Vec<Poly>)>,
) {
    debug_assert!(modulus.deg() > 0);
    let mut acc: Option<Vec<Poly>> = None;
    for p in polys {
        let reduced = reduce_ypoly(p, &modulus);
        acc = Some(match acc {
            None => reduced,
            Some(g) => match gcd_pair(field, g, reduced, &modulus) {
                GcdOutcome::Done(g) => g,
                GcdOutcome::Split(m1, m2) => {
                    branch_gcd_inner(field, polys, m1, out);
                    branch_gcd_inner(field, polys, m2, out);
                    return;
                }
            },
        });
    }
    let Some(mut g) = acc else { return };
    // Normalize to a monic y-polynomial; making it monic can itself split.
    if let Some(lead) = g.last().cloned() {
        let bezout = lead.xgcd(&modulus);
        let common = bezout.0;
        if common.deg() > 0 && common.deg() < modulus.deg() {
            let other = modulus.div_exact(&common);
            branch_gcd_inner(field, polys, common, out);
            branch_gcd_inner(field, polys, other, out);
            return;
        }
        let inv = bezout.1.rem(&modulus);
        for c in g.iter_mut() {
            *c = (&*c * &inv).rem(&modulus);
        }
    }
    out.push((modulus, g));
}

enum GcdOutcome {
    Done(Vec<Poly>),
    Split(Poly, Poly),
}

fn gcd_pair(_field: &Field, a: Vec<Poly>, b: Vec<Poly>, modulus: &Poly) -> GcdOutcome {
    let mut a = strip_ypoly(a);
    let mut b = strip_ypoly(b);
    loop {
        if b.is_empty() {
            return GcdOutcome::Done(a);
        }
        if a.is_empty() {
            return GcdOutcome::Done(b);
        }
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        let lead = b.last().expect("nonempty").clone();
        let (g, u, _) = lead.xgcd(modulus);
        if g.deg() > 0 {
            if g.deg() == modulus.deg() {
                // Leading coefficient vanishes on the whole branch.
                b.pop();
                b = strip_ypoly(b);
                continue;
            }
            let other = modulus.div_exact(&g);
            return GcdOutcome::Split(g, other);
        }
        let inv = u.rem(modulus);
        // One long-division pass: a mod b over k[x]/(modulus).
        while a.len() >= b.len() {
            let shift = a.len() - b.len();
            let top = a.last().expect("nonempty").clone();
            let factor = (&top * &inv).rem(modulus);
            if !factor.is_zero() {
                for (i, c) in b.iter().enumerate() {
                    let sub = (&factor * c).rem(modulus);
                    a[shift + i] = (&a[shift + i] - &sub).rem(modulus);
                }
            }
            debug_assert!(a.last().is_some_and(|c| c.rem(modulus).is_zero()));
            a.pop();
            a = strip_ypoly(a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
        b = strip_ypoly(b);
    }
}
