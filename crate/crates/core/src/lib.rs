//! Exact-arithmetic engine for twisted complexes of locally free modules over a
//! finite combinatorial site.
//!
//! The engine works over a discrete model of a compact space with a soft
//! structure sheaf: a finite point set, a finite open cover, the nerve of
//! index tuples, and a partition of unity. Modules are pointwise graded
//! vector spaces over an exact field (rationals or a prime field), module
//! maps are pointwise matrix families, and all checks are algebraic
//! identities verified with zero tolerance.
//!
//! Layers, bottom up:
//!
//! * [`scalar`] / [`matrix`] — exact field elements and small dense linear
//!   algebra (reduced row echelon form, kernels, solving).
//! * [`site`] — points, cover, nerve, partitions of unity.
//! * [`bundle`] — graded bundles (locally free modules) and sheaf morphisms.
//! * [`cochain`] — the bigraded Cech hom-algebra and its differentials.
//! * [`twisted`] — twisted complexes, Maurer-Cartan residuals, shift, cone,
//!   and the twisting functor from global complexes.
//! * [`homology`] — pointwise homology, weak-equivalence tests, hom-complex
//!   cohomology on both the global and the twisted side.
//! * [`globalize`] — the constructive descent algorithms: gluing modulo Q,
//!   higher gluing, globalization with verified certificates, and morphism
//!   descent with explicit homotopies.
//! * [`sample`] — seeded random generators for sites, complexes and
//!   morphisms, used by the test suites and benchmarks.
//!
//! Every value is immutable after construction and every operation is a pure
//! function of its inputs, so evaluation order never matters and results are
//! reproducible bit for bit.

pub mod bundle;
pub mod cochain;
pub mod error;
pub mod globalize;
pub mod homology;
pub mod matrix;
pub mod sample;
pub mod scalar;
pub mod site;
pub mod twisted;

pub use bundle::{direct_sum, kernel_subbundle, DirectSum, GradedBundle, SheafMorphism};
pub use cochain::{act, compose, delta_hom, delta_sheaf, HomCochain, SheafCochain};
pub use error::{Error, Result};
pub use globalize::{
    descend_coboundary, descend_morphism, globalize, glue_modulo, higher_glue, DescentDataModQ,
    DescentResult, GlobalizationCertificate, HigherGlueOutcome,
};
pub use homology::{
    hom_complex_cohomology_global, hom_complex_cohomology_twisted, is_weak_equivalence,
    local_homology, HomologyTable, WeqFailure, WeqReport,
};
pub use matrix::{rref, Matrix, Rref};
pub use scalar::{FieldTag, Scalar};
pub use site::{
    build_nerve, default_partition, validate_site, NerveTuple, PartitionOfUnity, Site,
    SiteDiagnostic,
};
pub use twisted::{
    cone, global_hom_diff, hom_diff, mc_residual, shift, shift_morphism, twist_morphism,
    twist_object, GlobalComplex, TwistedComplex,
};
