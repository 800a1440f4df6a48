//! Gravity filtration on configurations of little cubes and the cobar
//! spectral sequence it induces on iterated loop spaces of sphere wedges.

pub mod chain;
pub mod coalgebra;
pub mod cobar;
pub mod geometry;
pub mod graded;
pub mod gravity;
pub mod io;
pub mod linalg;
pub mod random;

pub use chain::Chain;
pub use coalgebra::{
    binomial_coalgebra, coalgebra_from_table, comodule_from_table, tensor_algebra, CoactionTable, Coalgebra, Comodule,
    CoproductTable, Side, TensorCoalgebra,
};
pub use cobar::{
    cobar_differential, cotor, euler_by_degree, two_sided_differential, verify_d_squared, Bidegree, CobarBox,
    CobarComplex, CobarError, CobarWord, CotorTable, DSquaredReport, SignConvention,
};
pub use geometry::{
    deform_g, dis, gravity_degree, is_decomposable, is_stable, m_clamp, mol, ol, overlap_d, shrink_h, sigma,
    skewer_degree, u_value, validate_config, Axis, CubeConfig, DeformParams, GeometryError, LittleCube, Rational,
    SubsetPartition,
};
pub use graded::{AlgebraError, BasisElement, GradedMap, GradedSpace};
pub use gravity::{
    build_e1, compare_d1, compare_d1_routes, compute_e2, d1_cobar, d1_shuffle, verify_d1_squared, weight_split,
    BigradedPage, Cell, D1Comparison, D1Route, E1Word, GravityBox, GravityE1, GravityError, SphereWedge,
};
pub use linalg::{FieldError, Fp, FpMatrix};
pub use random::{gen_random_coalgebra, gen_random_config, RandomError};
