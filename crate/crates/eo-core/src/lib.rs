//! Exact-arithmetic toolkit for computing Cartier-Manin matrices and
//! Ekedahl-Oort invariants of genus-4 trigonal curves in characteristic 3.

pub mod cartier;
pub mod curve;
pub mod derham;
pub mod eo;
pub mod field;
pub mod funcfield;
pub mod linalg;
pub mod poly;
pub mod ratfunc;

pub use cartier::{cartier_manin_matrix, cartier_manin_with, CartierError, CartierMatrix};
pub use curve::{CurveError, CurveModel, Family, SmoothnessReport};
pub use derham::{
    classify, curve_module, derham_pairing, eo_type_from_cartier_only, eo_type_of_curve,
    gram_matrix, h1dr_basis, reduce_to_coordinates, verschiebung_matrix, CechClass, CechCover,
    ClassificationReport, DeRhamError, Method,
};
pub use eo::{
    enumerate_eo_types, eo_covering_pairs, eo_partial_order, eo_type_from_rank_profile,
    mu_to_final_type, standard_block, standard_module, CartierOnly, EOType, EoError, FinalType,
    Flag, ModuleViolation, OrderRel, StandardBlock, Subspace, SymplecticSemilinearModule,
};
pub use field::{Field, FieldElement, FieldEmbedding, FieldError, FieldSpec};
pub use funcfield::{BasisData, CubeDecomposer, Differential, FunctionFieldElement};
pub use linalg::{Matrix, Ring};
pub use poly::Poly;
pub use ratfunc::RatFunc;
