//! Acceptance gate: eleven numbered criteria, one test per criterion, each
//! ending in a single `criterion NN: pass` line (a failing criterion panics
//! with the matching `fail` line instead). Exhaustive parameter surveys are
//! built once, shared, and their build time is charged against the criteria
//! that consume them.

use eo_cli::sweep::{csv_string, sweep_family, SweepReport};
use eo_core::{
    cartier_manin_matrix, classify, curve_module, enumerate_eo_types, mu_to_final_type,
    standard_block, standard_module, CartierOnly, CubeDecomposer, CurveError, CurveModel,
    Differential, EOType, Family, Field, FieldElement, FunctionFieldElement, Matrix, Method,
    Poly, RatFunc, StandardBlock, SymplecticSemilinearModule,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

const FAMILIES: [Family; 6] = [
    Family::F32,
    Family::F321,
    Family::F43A,
    Family::F43B,
    Family::F43C,
    Family::F21,
];

/// Families whose de Rham chart exists, so `curve_module` succeeds.
const CHART_FAMILIES: [Family; 5] = [
    Family::F32,
    Family::F43A,
    Family::F43B,
    Family::F43C,
    Family::F21,
];

fn t(parts: &[usize]) -> EOType {
    EOType::new(parts.to_vec()).unwrap()
}

fn pass(n: u32, what: &str) {
    println!("criterion {n:02}: pass — {what}");
}

macro_rules! check {
    ($n:expr, $cond:expr, $($msg:tt)*) => {{
        assert!($cond, "criterion {:02}: fail — {}", $n, format!($($msg)*));
    }};
}

// ---------------------------------------------------------------------------
// Shared data: exhaustive Cartier-level surveys and GF(3) de Rham modules.
// ---------------------------------------------------------------------------

/// One smooth parameter point of a survey: its lexicographic coordinates and
/// everything the Cartier–Manin matrix alone determines.
struct SurveyPoint {
    indices: Vec<u64>,
    profile: Vec<usize>,
    a: usize,
    f: usize,
    /// Rank of the fifth semilinear power equals the fourth (stability).
    stable: bool,
    only: CartierOnly,
}

struct Survey {
    family: Family,
    field: Field,
    smooth: Vec<SurveyPoint>,
    constraint: u64,
    singular: u64,
}

struct Surveys {
    all: Vec<Survey>,
    build: Duration,
}

fn params_at(family: Family, field: &Field, indices: &[u64]) -> BTreeMap<String, FieldElement> {
    family
        .param_names()
        .iter()
        .zip(indices)
        .map(|(n, &i)| (n.to_string(), field.from_index(i)))
        .collect()
}

fn curve_at(family: Family, field: &Field, indices: &[u64]) -> CurveModel {
    CurveModel::from_family(family, field, &params_at(family, field, indices))
        .expect("surveyed point rebuilds")
}

fn survey_family(family: Family, field: &Field) -> Survey {
    let names = family.param_names();
    let order = field.spec().order();
    let total = order.pow(names.len() as u32);
    let mut smooth = Vec::new();
    let (mut constraint, mut singular) = (0u64, 0u64);
    for flat in 0..total {
        let mut indices = vec![0u64; names.len()];
        let mut rest = flat;
        for slot in indices.iter_mut().rev() {
            *slot = rest % order;
            rest /= order;
        }
        match CurveModel::from_family(family, field, &params_at(family, field, &indices)) {
            Err(CurveError::ConstraintViolation(_)) => constraint += 1,
            Err(CurveError::SingularCurve(_)) => singular += 1,
            Err(e) => panic!("unexpected rejection for {family} at {indices:?}: {e}"),
            Ok(curve) => {
                let m = cartier_manin_matrix(&curve).expect("matrix for accepted model");
                let profile = m.rank_profile();
                let only = eo_core::eo_type_from_rank_profile(&profile)
                    .expect("every observed profile classifies");
                let stable = m.semilinear_power(5).rank() == profile[3];
                smooth.push(SurveyPoint {
                    indices,
                    a: m.a_number(),
                    f: m.p_rank(),
                    stable,
                    profile,
                    only,
                });
            }
        }
    }
    Survey {
        family,
        field: field.clone(),
        smooth,
        constraint,
        singular,
    }
}

/// Every parameter point of every family over GF(3) and GF(9), classified at
/// the Cartier level. Built once; `build` records the wall-clock cost.
fn surveys() -> &'static Surveys {
    static CELL: OnceLock<Surveys> = OnceLock::new();
    CELL.get_or_init(|| {
        let start = Instant::now();
        let mut all = Vec::new();
        for k in 1..=2 {
            let field = Field::gf3(k);
            for family in FAMILIES {
                all.push(survey_family(family, &field));
            }
        }
        Surveys {
            all,
            build: start.elapsed(),
        }
    })
}

fn survey_for(family: Family, k: usize) -> &'static Survey {
    surveys()
        .all
        .iter()
        .find(|s| s.family == family && s.field.spec().k() == k)
        .expect("family surveyed over both fields")
}

struct ModuleSet {
    items: Vec<(CurveModel, SymplecticSemilinearModule)>,
    build: Duration,
}

/// The full de Rham module of every smooth GF(3) point of the five families
/// with a chart. Built once.
fn gf3_modules() -> &'static ModuleSet {
    static CELL: OnceLock<ModuleSet> = OnceLock::new();
    CELL.get_or_init(|| {
        let start = Instant::now();
        let f3 = Field::gf3(1);
        let mut items = Vec::new();
        for family in CHART_FAMILIES {
            for point in &survey_for(family, 1).smooth {
                let curve = curve_at(family, &f3, &point.indices);
                let module = curve_module(&curve).expect("chart module");
                items.push((curve, module));
            }
        }
        ModuleSet {
            items,
            build: start.elapsed(),
        }
    })
}

// ---------------------------------------------------------------------------
// Closed-form matrix references (independent oracles).
// ---------------------------------------------------------------------------

/// f32 matrix, derived by substituting w = y − b and decomposing 1/w:
/// displayed (cubed) entries
/// [[a₂, 0, a₀+b²−b³, 0], [1, 0, a₃, 0], [0,0,0,0], [0,0,−1,0]];
/// the matrix itself takes cube roots entrywise.
fn f32_closed_form(
    field: &Field,
    a3: &FieldElement,
    a2: &FieldElement,
    a0: &FieldElement,
    b: &FieldElement,
) -> Matrix<FieldElement> {
    let z = field.zero();
    let one = field.one();
    let b2 = b * b;
    let b3 = &b2 * b;
    let raw = Matrix::from_rows(vec![
        vec![a2.clone(), z.clone(), &(a0 + &b2) - &b3, z.clone()],
        vec![one.clone(), z.clone(), a3.clone(), z.clone()],
        vec![z.clone(), z.clone(), z.clone(), z.clone()],
        vec![z.clone(), z.clone(), -&one, z.clone()],
    ]);
    raw.map(|e| e.inv_frobenius())
}

/// f43a matrix in the constraint-substituted form, free parameters
/// (b₁, a₁, a₂) with b₂ = b₁² + a₂: displayed (cubed) entries
/// [[0, 2b₁b₂+a₁, b₂², b₂²+b₁(2b₁b₂+a₁)], [0,0,b₁³,b₁³],
///  [0,0,1,1], [0,0,−1,−1]].
fn f43a_closed_form(
    field: &Field,
    b1: &FieldElement,
    a1: &FieldElement,
    a2: &FieldElement,
) -> Matrix<FieldElement> {
    let b2 = &(b1 * b1) + a2;
    let two = field.scalar(2);
    let u = &(&(&two * b1) * &b2) + a1;
    let b2sq = &b2 * &b2;
    let b13 = &(b1 * b1) * b1;
    let z = field.zero();
    let one = field.one();
    let neg = -&one;
    let raw = Matrix::from_rows(vec![
        vec![z.clone(), u.clone(), b2sq.clone(), &b2sq + &(b1 * &u)],
        vec![z.clone(), z.clone(), b13.clone(), b13.clone()],
        vec![z.clone(), z.clone(), one.clone(), one.clone()],
        vec![z.clone(), z.clone(), neg.clone(), neg.clone()],
    ]);
    raw.map(|e| e.inv_frobenius())
}

/// f43c matrix: displayed (cubed) entries
/// [[0, a₁, a₂, a₂], [0,0,0,0], [0,0,1,1], [0,0,−1,−1]].
fn f43c_closed_form(
    field: &Field,
    a1: &FieldElement,
    a2: &FieldElement,
) -> Matrix<FieldElement> {
    let z = field.zero();
    let one = field.one();
    let neg = -&one;
    let raw = Matrix::from_rows(vec![
        vec![z.clone(), a1.clone(), a2.clone(), a2.clone()],
        vec![z.clone(), z.clone(), z.clone(), z.clone()],
        vec![z.clone(), z.clone(), one.clone(), one.clone()],
        vec![z.clone(), z.clone(), neg.clone(), neg.clone()],
    ]);
    raw.map(|e| e.inv_frobenius())
}

/// Draw random parameter tuples until `want` of them give accepted models;
/// run `check` on each accepted curve with its parameter values.
fn random_valid_curves(
    n: u32,
    family: Family,
    field: &Field,
    rng: &mut ChaCha8Rng,
    want: u32,
    mut verify: impl FnMut(&CurveModel, &[FieldElement]),
) {
    let order = field.spec().order();
    let nparams = family.param_names().len();
    let mut accepted = 0u32;
    let mut attempts = 0u32;
    while accepted < want {
        attempts += 1;
        check!(
            n,
            attempts < 100_000,
            "random search for valid {family} tuples stalled after {attempts} draws"
        );
        let indices: Vec<u64> = (0..nparams).map(|_| rng.gen_range(0..order)).collect();
        let params = params_at(family, field, &indices);
        let Ok(curve) = CurveModel::from_family(family, field, &params) else {
            continue;
        };
        let values: Vec<FieldElement> = family
            .param_names()
            .iter()
            .map(|name| params[*name].clone())
            .collect();
        verify(&curve, &values);
        accepted += 1;
    }
}

// ---------------------------------------------------------------------------
// The eleven criteria.
// ---------------------------------------------------------------------------

#[test]
fn criterion_01_f32_matrix_closed_form_over_gf27() {
    let start = Instant::now();
    let f27 = Field::gf3(3);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    random_valid_curves(1, Family::F32, &f27, &mut rng, 100, |curve, v| {
        let m = cartier_manin_matrix(curve).expect("matrix");
        let expected = f32_closed_form(&f27, &v[0], &v[1], &v[2], &v[3]);
        check!(
            1,
            m.matrix() == &expected,
            "matrix mismatch at (a3,a2,a0,b) = ({},{},{},{})",
            v[0],
            v[1],
            v[2],
            v[3]
        );
    });
    let elapsed = start.elapsed();
    check!(
        1,
        elapsed < Duration::from_secs(5),
        "took {elapsed:?}, budget is 5 s"
    );
    pass(
        1,
        &format!("100 random GF(27) f32 matrices match the closed form in {elapsed:.2?}"),
    );
}

#[test]
fn criterion_02_f43a_and_f43c_matrix_closed_forms_over_gf27() {
    let start = Instant::now();
    let f27 = Field::gf3(3);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    random_valid_curves(2, Family::F43A, &f27, &mut rng, 100, |curve, v| {
        let m = cartier_manin_matrix(curve).expect("matrix");
        let expected = f43a_closed_form(&f27, &v[0], &v[1], &v[2]);
        check!(
            2,
            m.matrix() == &expected,
            "f43a mismatch at (b1,a1,a2) = ({},{},{})",
            v[0],
            v[1],
            v[2]
        );
    });
    random_valid_curves(2, Family::F43C, &f27, &mut rng, 100, |curve, v| {
        let m = cartier_manin_matrix(curve).expect("matrix");
        let expected = f43c_closed_form(&f27, &v[0], &v[1]);
        check!(
            2,
            m.matrix() == &expected,
            "f43c mismatch at (a1,a2) = ({},{})",
            v[0],
            v[1]
        );
    });
    let elapsed = start.elapsed();
    pass(
        2,
        &format!(
            "100 random GF(27) matrices each for f43a and f43c match their closed forms in {elapsed:.2?}"
        ),
    );
}

#[test]
fn criterion_03_family_invariant_tables_over_gf3_and_gf9() {
    let sv = surveys();
    let mods = gf3_modules();

    // Per-family expectations: rank profile, a, f, and (when the Cartier
    // matrix alone pins it down) the type.
    let table: &[(Family, [usize; 4], usize, usize, Option<&[usize]>)] = &[
        (Family::F32, [2, 1, 1, 1], 2, 1, None),
        (Family::F321, [1, 1, 1, 1], 3, 1, Some(&[3, 2, 1])),
        (Family::F43A, [2, 0, 0, 0], 2, 0, Some(&[4, 3])),
        (Family::F43B, [2, 0, 0, 0], 2, 0, Some(&[4, 3])),
        (Family::F43C, [2, 0, 0, 0], 2, 0, Some(&[4, 3])),
        (Family::F21, [2, 2, 2, 2], 2, 2, Some(&[2, 1])),
    ];
    let mut points = 0u64;
    for (family, profile, a, f, mu) in table {
        for k in 1..=2 {
            let survey = survey_for(*family, k);
            check!(
                3,
                !survey.smooth.is_empty(),
                "{family} has no smooth point over GF(3^{k})"
            );
            let order = survey.field.spec().order();
            let total = order.pow(family.param_names().len() as u32);
            check!(
                3,
                survey.smooth.len() as u64 + survey.constraint + survey.singular == total,
                "{family} over GF(3^{k}): enumeration does not cover the parameter space"
            );
            for p in &survey.smooth {
                points += 1;
                check!(
                    3,
                    p.profile == profile.to_vec() && p.a == *a && p.f == *f,
                    "{family} at {:?} over GF(3^{k}): profile {:?}, a={}, f={} (expected {profile:?}, a={a}, f={f})",
                    p.indices,
                    p.profile,
                    p.a,
                    p.f
                );
                if let Some(mu) = *mu {
                    check!(
                        3,
                        p.only == CartierOnly::Determined(t(mu)),
                        "{family} at {:?} over GF(3^{k}): type not determined as {:?}",
                        p.indices,
                        mu
                    );
                }
            }
        }
    }

    // The full de Rham pipeline over GF(3) must agree with the table on the
    // chart families, and decides the f32 type that the matrix alone cannot.
    let mut f32_full_types: BTreeSet<String> = BTreeSet::new();
    let mut f32_points = 0u64;
    for (curve, module) in &mods.items {
        let mu = module.eo_type().expect("canonical filtration");
        match curve.family() {
            Family::F32 => {
                f32_points += 1;
                f32_full_types.insert(mu.to_string());
            }
            Family::F21 => check!(3, mu == t(&[2, 1]), "f21 module type {mu}"),
            _ => check!(3, mu == t(&[4, 3]), "{} module type {mu}", curve.family()),
        }
    }

    let elapsed = sv.build + mods.build;
    check!(
        3,
        elapsed < Duration::from_secs(60),
        "surveys and modules took {elapsed:?}, budget is 60 s"
    );

    // Deliberately last: every attainable part of the table is verified
    // above before this type assertion is reached.
    check!(
        3,
        f32_full_types == BTreeSet::from(["[3,2]".to_string()]),
        "f32 type: expected [3,2] on every smooth point, but the full de Rham module \
         computes {} uniformly on all {f32_points} smooth GF(3) points; the Cartier \
         candidate set is {{[3,1],[3,2]}} and the canonical filtration resolves it to \
         [3,1] every time (the ignored exhaustive GF(9) census agrees on all 4608 points)",
        f32_full_types.iter().cloned().collect::<Vec<_>>().join(", ")
    );
    pass(
        3,
        &format!("{points} smooth points across six families match the invariant table in {elapsed:.2?}"),
    );
}

#[test]
fn criterion_04_direct_sum_reference_cases() {
    let f = Field::gf3(1);
    let ordinary = standard_block(StandardBlock::OrdinaryElliptic, &f);
    let supersingular = standard_block(StandardBlock::SupersingularElliptic, &f);

    let cases: [(&str, SymplecticSemilinearModule, &[usize]); 4] = [
        (
            "ordinary genus-1 ⊕ genus-3 of type [2,1]",
            ordinary
                .direct_sum(&standard_module(&t(&[2, 1]), 3, &f).unwrap())
                .unwrap(),
            &[2, 1],
        ),
        (
            "two genus-2 blocks of type [1]",
            {
                let a1 = standard_module(&t(&[1]), 2, &f).unwrap();
                a1.direct_sum(&a1).unwrap()
            },
            &[2, 1],
        ),
        (
            "supersingular genus-1 ⊕ genus-3 of type [3]",
            supersingular
                .direct_sum(&standard_module(&t(&[3]), 3, &f).unwrap())
                .unwrap(),
            &[4, 2],
        ),
        (
            "two genus-2 blocks of type [2]",
            {
                let a2 = standard_module(&t(&[2]), 2, &f).unwrap();
                a2.direct_sum(&a2).unwrap()
            },
            &[4, 3],
        ),
    ];
    for (label, sum, expected) in &cases {
        let mu = sum.eo_type().expect("sum classifies");
        check!(4, mu == t(expected), "{label}: computed {mu}, expected {expected:?}");
    }
    pass(4, "the four reference direct sums give [2,1], [2,1], [4,2], [4,3]");
}

#[test]
fn criterion_05_type_lattice_and_final_type_round_trip() {
    let types = enumerate_eo_types(4);
    check!(5, types.len() == 16, "expected 16 strata, got {}", types.len());
    for mu in &types {
        let ft = mu_to_final_type(mu, 4).expect("final type exists");
        check!(
            5,
            &ft.young_diagram() == mu,
            "round trip broke at {mu}: final type {ft} re-reads as {}",
            ft.young_diagram()
        );
    }

    // Ordinary ↦ the empty type, superspecial ↦ [4,3,2,1], both as final
    // type values and as fourfold products of elliptic blocks.
    let ordinary = mu_to_final_type(&EOType::empty(), 4).unwrap();
    check!(
        5,
        ordinary.values() == [0, 1, 2, 3, 4, 4, 4, 4, 4],
        "ordinary final type came out as {ordinary}"
    );
    let superspecial = mu_to_final_type(&t(&[4, 3, 2, 1]), 4).unwrap();
    check!(
        5,
        superspecial.values() == [0, 0, 0, 0, 0, 1, 2, 3, 4],
        "superspecial final type came out as {superspecial}"
    );

    let f = Field::gf3(1);
    let ord1 = standard_block(StandardBlock::OrdinaryElliptic, &f);
    let ss1 = standard_block(StandardBlock::SupersingularElliptic, &f);
    let mut ord4 = ord1.clone();
    let mut ss4 = ss1.clone();
    for _ in 0..3 {
        ord4 = ord4.direct_sum(&ord1).unwrap();
        ss4 = ss4.direct_sum(&ss1).unwrap();
    }
    check!(
        5,
        ord4.eo_type().unwrap() == EOType::empty(),
        "fourfold ordinary product is {}",
        ord4.eo_type().unwrap()
    );
    check!(
        5,
        ss4.eo_type().unwrap() == t(&[4, 3, 2, 1]),
        "fourfold supersingular product is {}",
        ss4.eo_type().unwrap()
    );
    pass(5, "16 strata, exact young∘final round trip, ordinary ↦ [] and superspecial ↦ [4,3,2,1]");
}

#[test]
fn criterion_06_module_invariant_suite() {
    let mods = gf3_modules();
    let mut checked = 0u64;

    let mut suite = |n: u32, label: &str, module: &SymplecticSemilinearModule| {
        if let Err(v) = module.validate() {
            check!(n, false, "{label}: structural violation: {v}");
        }
        let ft = module.final_type().expect("final type");
        let (v, g) = (ft.values(), module.g());
        for i in 0..=g {
            check!(
                n,
                v[2 * g - i] + i == v[i] + g,
                "{label}: v-symmetry fails at i={i} in {ft}"
            );
        }
        checked += 1;
    };

    // Every curve module over GF(3), plus the weld of its Verschiebung
    // matrix against the stand-alone Cartier–Manin matrix.
    for (curve, module) in &mods.items {
        let label = format!("{} module at {:?}", curve.family(), curve.params());
        suite(6, &label, module);
        let cm = cartier_manin_matrix(curve).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                check!(
                    6,
                    module.vmat()[(i, j)] == cm.matrix()[(i, j)],
                    "{label}: vmat holomorphic block differs from the Cartier matrix at ({i},{j})"
                );
            }
            for j in 4..8 {
                check!(
                    6,
                    module.vmat()[(i + 4, j)].is_zero(),
                    "{label}: V does not land in the holomorphic block (row {}, col {j})",
                    i + 4
                );
            }
        }
        let im = module.im_v();
        check!(6, im.dim() == 4, "{label}: im V has dimension {}", im.dim());
        for r in 0..im.dim() {
            for c in 4..8 {
                check!(
                    6,
                    im.basis()[(r, c)].is_zero(),
                    "{label}: im V leaves the holomorphic block"
                );
            }
        }
    }

    // Every standard module for every stratum, over both fields, and the
    // reference direct sums.
    for k in 1..=2 {
        let f = Field::gf3(k);
        for mu in enumerate_eo_types(4) {
            let m = standard_module(&mu, 4, &f).unwrap();
            suite(6, &format!("standard {mu} over GF(3^{k})"), &m);
        }
    }
    let f = Field::gf3(1);
    let ordinary = standard_block(StandardBlock::OrdinaryElliptic, &f);
    let supersingular = standard_block(StandardBlock::SupersingularElliptic, &f);
    suite(6, "ordinary elliptic block", &ordinary);
    suite(6, "supersingular elliptic block", &supersingular);
    let sums = [
        ordinary
            .direct_sum(&standard_module(&t(&[2, 1]), 3, &f).unwrap())
            .unwrap(),
        standard_module(&t(&[1]), 2, &f)
            .unwrap()
            .direct_sum(&standard_module(&t(&[1]), 2, &f).unwrap())
            .unwrap(),
        supersingular
            .direct_sum(&standard_module(&t(&[3]), 3, &f).unwrap())
            .unwrap(),
        standard_module(&t(&[2]), 2, &f)
            .unwrap()
            .direct_sum(&standard_module(&t(&[2]), 2, &f).unwrap())
            .unwrap(),
    ];
    for (i, sum) in sums.iter().enumerate() {
        suite(6, &format!("reference direct sum #{}", i + 1), sum);
    }
    pass(
        6,
        &format!("{checked} modules pass validation, v-symmetry, and the Verschiebung/Cartier weld"),
    );
}

#[test]
fn criterion_07_rank_identities_on_all_classified_points() {
    let mut points = 0u64;
    for survey in &surveys().all {
        for p in &survey.smooth {
            points += 1;
            let where_ = format!(
                "{} at {:?} over GF(3^{})",
                survey.family,
                p.indices,
                survey.field.spec().k()
            );
            check!(
                7,
                p.a == 4 - p.profile[0],
                "{where_}: a = {} but 4 − rank(C) = {}",
                p.a,
                4 - p.profile[0]
            );
            check!(7, p.stable, "{where_}: rank profile not stable after four steps");
            check!(
                7,
                p.f == p.profile[3],
                "{where_}: f = {} but the stable rank is {}",
                p.f,
                p.profile[3]
            );
            for w in p.profile.windows(2) {
                check!(7, w[0] >= w[1], "{where_}: profile {:?} not monotone", p.profile);
            }
            // The type-level invariants must agree with the matrix-level
            // ones on every candidate the profile admits.
            for cand in p.only.candidates() {
                check!(
                    7,
                    cand.a_number() == p.a && cand.p_rank(4) == p.f,
                    "{where_}: candidate {cand} disagrees with a={}, f={}",
                    p.a,
                    p.f
                );
            }
            check!(
                7,
                (1..=4).contains(&(p.a + p.f)),
                "{where_}: a + f = {} outside 1..=4",
                p.a + p.f
            );
        }
    }
    pass(7, &format!("a = 4 − rank(C), f = stable rank, and 1 ≤ a+f ≤ 4 on all {points} points"));
}

#[test]
fn criterion_08_no_superspecial_curve_in_any_family() {
    let sv = surveys();
    let mut points = 0u64;
    for survey in &sv.all {
        for p in &survey.smooth {
            points += 1;
            check!(
                8,
                p.a < 4,
                "superspecial point: {} at {:?} over GF(3^{}) has a = 4",
                survey.family,
                p.indices,
                survey.field.spec().k()
            );
        }
    }
    check!(
        8,
        sv.build < Duration::from_secs(600),
        "exhaustive sweeps took {:?}, budget is 10 min",
        sv.build
    );
    pass(
        8,
        &format!(
            "all {points} smooth points across six families over GF(3) and GF(9) have a ≤ 3 ({:.2?})",
            sv.build
        ),
    );
}

#[test]
fn criterion_09_cartier_operator_algebra_randomized() {
    let f9 = Field::gf3(2);
    // First accepted f32 model over GF(9), by enumeration order.
    let curve = (0..6561u64)
        .find_map(|flat| {
            let indices = [flat / 729 % 9, flat / 81 % 9, flat / 9 % 9, flat % 9];
            CurveModel::from_family(
                Family::F32,
                &f9,
                &params_at(Family::F32, &f9, &indices),
            )
            .ok()
        })
        .expect("a smooth f32 model over GF(9)");
    let c = &curve;
    let dec = CubeDecomposer::new(c);
    let yp = c.yprime();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let order = f9.spec().order();

    let rand_poly = |rng: &mut ChaCha8Rng, max_deg: usize| -> Poly {
        let deg = rng.gen_range(0..=max_deg);
        Poly::new(
            &f9,
            (0..=deg).map(|_| f9.from_index(rng.gen_range(0..order))).collect(),
        )
    };
    let rand_ratfunc = |rng: &mut ChaCha8Rng| -> RatFunc {
        let num = rand_poly(rng, 2);
        let den = loop {
            let d = rand_poly(rng, 1);
            if !d.is_zero() {
                break d;
            }
        };
        RatFunc::new(num, den)
    };
    let rand_elt = |rng: &mut ChaCha8Rng| -> FunctionFieldElement {
        FunctionFieldElement::new(rand_ratfunc(rng), rand_ratfunc(rng), rand_ratfunc(rng))
    };

    for trial in 0..1000 {
        // Re-cubing: the decomposition parts reassemble to the element.
        let g = rand_elt(&mut rng);
        let parts = dec.decompose(&g);
        check!(9, dec.recombine(&parts) == g, "re-cubing failed on trial {trial}: {g}");

        // Semilinearity: C(u³ω) = u·C(ω).
        let u = rand_elt(&mut rng);
        let omega = Differential::new(rand_elt(&mut rng));
        let u3 = c.ff_mul(&u, &c.ff_mul(&u, &u));
        let lhs = dec.cartier(&Differential::new(c.ff_mul(&u3, omega.coeff())));
        let rhs = Differential::new(c.ff_mul(&u, &dec.cartier(&omega).coeff().clone()));
        check!(9, lhs == rhs, "semilinearity failed on trial {trial}");

        // Exactness: C(df) = 0.
        let h = rand_elt(&mut rng);
        let dh = Differential::new(c.ff_derivative_given(&h, &yp));
        check!(9, dec.cartier(&dh).is_zero(), "C(d·) ≠ 0 on trial {trial}: {h}");

        // Additivity: C(ω₁ + ω₂) = C(ω₁) + C(ω₂).
        let o1 = Differential::new(rand_elt(&mut rng));
        let o2 = Differential::new(rand_elt(&mut rng));
        let sum = dec.cartier(&(&o1 + &o2));
        check!(
            9,
            sum == &dec.cartier(&o1) + &dec.cartier(&o2),
            "additivity failed on trial {trial}"
        );
    }
    pass(9, "re-cubing, semilinearity, exactness, and additivity hold in 1000 random trials each");
}

#[test]
fn criterion_10_ambiguity_contract() {
    let expected_pair = BTreeSet::from(["[3,1]".to_string(), "[3,2]".to_string()]);
    for k in 1..=2 {
        // f32: the matrix alone must leave exactly {[3,1],[3,2]} open.
        for p in &survey_for(Family::F32, k).smooth {
            let candidates: BTreeSet<String> =
                p.only.candidates().iter().map(|c| c.to_string()).collect();
            check!(
                10,
                matches!(p.only, CartierOnly::Ambiguous(_)) && candidates == expected_pair,
                "f32 at {:?} over GF(3^{k}): Cartier-only gave {candidates:?}",
                p.indices
            );
        }
        // The other five families: the matrix alone decides.
        for family in [Family::F321, Family::F43A, Family::F43B, Family::F43C, Family::F21] {
            for p in &survey_for(family, k).smooth {
                check!(
                    10,
                    matches!(p.only, CartierOnly::Determined(_)),
                    "{family} at {:?} over GF(3^{k}): Cartier-only did not decide",
                    p.indices
                );
            }
        }
    }

    // Full-pipeline agreement on every GF(3) point of the decided families.
    let f3 = Field::gf3(1);
    for family in [Family::F321, Family::F43A, Family::F43B, Family::F43C, Family::F21] {
        for p in &survey_for(family, 1).smooth {
            let report = classify(&curve_at(family, &f3, &p.indices)).expect("classifies");
            let CartierOnly::Determined(mu) = &p.only else {
                unreachable!("checked above")
            };
            check!(
                10,
                report.mu.as_ref() == Some(mu),
                "{family} at {:?}: full pipeline {:?} vs Cartier-only {mu}",
                p.indices,
                report.mu
            );
            let expected_method = if family == Family::F321 {
                Method::CartierOnly
            } else {
                Method::Full
            };
            check!(
                10,
                report.method == expected_method,
                "{family} at {:?}: method {}",
                p.indices,
                report.method
            );
        }
    }

    // Deliberately last: the f32 resolution. Everything above passed.
    let mut resolved: BTreeSet<String> = BTreeSet::new();
    let mut n = 0u64;
    for (curve, module) in &gf3_modules().items {
        if curve.family() == Family::F32 {
            n += 1;
            resolved.insert(module.eo_type().unwrap().to_string());
        }
    }
    check!(
        10,
        resolved == BTreeSet::from(["[3,2]".to_string()]),
        "f32 full pipeline: expected the ambiguity {{[3,1],[3,2]}} to resolve to [3,2], \
         but the canonical filtration yields {} on all {n} smooth GF(3) points \
         (the ignored exhaustive GF(9) census agrees on all 4608 points)",
        resolved.iter().cloned().collect::<Vec<_>>().join(", ")
    );
    pass(10, "f32 stays ambiguous at the Cartier level and resolves as expected; the rest are decided");
}

#[test]
fn criterion_11_sweeps_are_deterministic_across_worker_counts() {
    let combos = [(Family::F32, 1usize), (Family::F43C, 2usize)];
    for (family, k) in combos {
        let field = Field::gf3(k);
        let mut outputs: Vec<(String, String)> = Vec::new();
        for workers in [1usize, 2, 4] {
            let rows = sweep_family(family, &field, Some(workers)).expect("sweep");
            let csv = csv_string(family, &field, &rows);
            let json = SweepReport::from_rows(family, &field, &rows)
                .to_json()
                .to_string();
            outputs.push((csv, json));
        }
        for w in outputs.windows(2) {
            check!(
                11,
                w[0] == w[1],
                "{family} over GF(3^{k}): outputs differ between worker counts"
            );
        }
    }
    pass(11, "CSV and JSON sweep outputs are byte-identical with 1, 2, and 4 workers");
}

/// Exhaustive full-pipeline census of f32 over GF(9); slow (about two
/// minutes), so ignored by default. This is the evidence backing the
/// uniform-[3,1] statements in the two failing type assertions.
#[test]
#[ignore = "exhaustive GF(9) census, about two minutes; run with --ignored"]
fn f32_full_census_over_gf9_is_uniformly_31() {
    let f9 = Field::gf3(2);
    let survey = survey_for(Family::F32, 2);
    let mut n = 0u64;
    for p in &survey.smooth {
        let report = classify(&curve_at(Family::F32, &f9, &p.indices)).expect("classifies");
        assert_eq!(report.method, Method::Full, "at {:?}", p.indices);
        assert_eq!(
            report.mu,
            Some(t(&[3, 1])),
            "full-module type at {:?}",
            p.indices
        );
        n += 1;
    }
    assert_eq!(n, 4608, "smooth f32 count over GF(9)");
    println!("census: all {n} smooth f32 points over GF(9) have full-module type [3,1]");
}
