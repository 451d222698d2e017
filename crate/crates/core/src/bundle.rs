//! Graded bundles and sheaf morphisms on the discrete site.
//!
//! A graded bundle records a fiber dimension for each point of its open and
//! each degree in a bounded window; a sheaf morphism records one matrix per
//! point and source degree. Absent entries mean zero. Composition is plain
//! pointwise matrix product with degree shifts adding; all Koszul signs live
//! one layer up, in the cochain algebra.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{FieldTag, Scalar};
use crate::site::Site;

/// Pointwise graded fiber dimensions over an open set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedBundle {
    open: BTreeSet<usize>,
    dims: BTreeMap<(usize, i64), usize>,
}

impl GradedBundle {
    /// Builds a bundle; zero dimensions are dropped, points must lie in the
    /// open.
    pub fn new(open: BTreeSet<usize>, dims: BTreeMap<(usize, i64), usize>) -> Result<GradedBundle> {
        for (&(x, _), &d) in &dims {
            if d > 0 && !open.contains(&x) {
                return Err(Error::Invalid(format!(
                    "bundle dimension at point {x} outside its open"
                )));
            }
        }
        let dims = dims.into_iter().filter(|&(_, d)| d > 0).collect();
        Ok(GradedBundle { open, dims })
    }

    pub fn zero(open: BTreeSet<usize>) -> GradedBundle {
        GradedBundle {
            open,
            dims: BTreeMap::new(),
        }
    }

    pub fn open(&self) -> &BTreeSet<usize> {
        &self.open
    }

    pub fn dim(&self, point: usize, degree: i64) -> usize {
        self.dims.get(&(point, degree)).copied().unwrap_or(0)
    }

    pub fn dims(&self) -> &BTreeMap<(usize, i64), usize> {
        &self.dims
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    /// Smallest and largest degree carrying a nonzero fiber anywhere.
    pub fn window(&self) -> Option<(i64, i64)> {
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for &(_, n) in self.dims.keys() {
            lo = lo.min(n);
            hi = hi.max(n);
        }
        if lo <= hi {
            Some((lo, hi))
        } else {
            None
        }
    }

    /// Degrees present anywhere in the bundle.
    pub fn degrees(&self) -> BTreeSet<i64> {
        self.dims.keys().map(|&(_, n)| n).collect()
    }

    /// Pointwise restriction to a subset of the open.
    pub fn restrict(&self, sub: &BTreeSet<usize>) -> Result<GradedBundle> {
        if !sub.is_subset(&self.open) {
            return Err(Error::RestrictOutsideOpen);
        }
        let dims = self
            .dims
            .iter()
            .filter(|((x, _), _)| sub.contains(x))
            .map(|(&k, &v)| (k, v))
            .collect();
        Ok(GradedBundle {
            open: sub.clone(),
            dims,
        })
    }

    /// Extension by zero to the whole point set of the site.
    pub fn extend_by_zero(&self, site: &Site) -> GradedBundle {
        GradedBundle {
            open: site.all_points(),
            dims: self.dims.clone(),
        }
    }

    /// The shifted bundle: new fiber at degree `n` is the old fiber at `n+1`.
    pub fn shift(&self) -> GradedBundle {
        let dims = self
            .dims
            .iter()
            .map(|(&(x, n), &d)| ((x, n - 1), d))
            .collect();
        GradedBundle {
            open: self.open.clone(),
            dims,
        }
    }
}

/// An ordered direct sum with deterministic block offsets.
#[derive(Debug, Clone)]
pub struct DirectSum {
    pub parts: Vec<GradedBundle>,
    pub total: GradedBundle,
    field: FieldTag,
}

/// Pointwise, degreewise sum of dimensions; all summands must live on the
/// same open. Block offsets follow the summand order.
pub fn direct_sum(parts: Vec<GradedBundle>, field: FieldTag) -> Result<DirectSum> {
    let open = match parts.first() {
        Some(b) => b.open().clone(),
        None => BTreeSet::new(),
    };
    let mut dims: BTreeMap<(usize, i64), usize> = BTreeMap::new();
    for b in &parts {
        if b.open() != &open {
            return Err(Error::OpenMismatch);
        }
        for (&k, &d) in b.dims() {
            *dims.entry(k).or_insert(0) += d;
        }
    }
    let total = GradedBundle { open, dims };
    Ok(DirectSum {
        parts,
        total,
        field,
    })
}

impl DirectSum {
    fn offset(&self, j: usize, point: usize, degree: i64) -> usize {
        self.parts[..j].iter().map(|b| b.dim(point, degree)).sum()
    }

    /// The inclusion of summand `j` into the total bundle.
    pub fn inclusion(&self, j: usize) -> SheafMorphism {
        let part = &self.parts[j];
        let mut mats = BTreeMap::new();
        for (&(x, n), &d) in part.dims() {
            let total_d = self.total.dim(x, n);
            let mut m = Matrix::zeros(self.field, total_d, d);
            let off = self.offset(j, x, n);
            m.paste(off, 0, &Matrix::identity(self.field, d));
            mats.insert((x, n), m);
        }
        SheafMorphism {
            source: part.clone(),
            target: self.total.clone(),
            shift: 0,
            field: self.field,
            mats,
        }
    }

    /// The projection of the total bundle onto summand `j`.
    pub fn projection(&self, j: usize) -> SheafMorphism {
        let part = &self.parts[j];
        let mut mats = BTreeMap::new();
        for (&(x, n), &d) in part.dims() {
            let total_d = self.total.dim(x, n);
            let mut m = Matrix::zeros(self.field, d, total_d);
            let off = self.offset(j, x, n);
            m.paste(0, off, &Matrix::identity(self.field, d));
            mats.insert((x, n), m);
        }
        SheafMorphism {
            source: self.total.clone(),
            target: part.clone(),
            shift: 0,
            field: self.field,
            mats,
        }
    }
}

/// A module map between graded bundles over one open: a matrix per point and
/// source degree, raising the degree by a fixed shift.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SheafMorphism {
    source: GradedBundle,
    target: GradedBundle,
    shift: i64,
    field: FieldTag,
    mats: BTreeMap<(usize, i64), Matrix>,
}

impl SheafMorphism {
    /// Builds a morphism, checking every stored matrix against the declared
    /// dimensions. Zero matrices are dropped.
    pub fn new(
        source: GradedBundle,
        target: GradedBundle,
        shift: i64,
        field: FieldTag,
        mats: BTreeMap<(usize, i64), Matrix>,
    ) -> Result<SheafMorphism> {
        if source.open() != target.open() {
            return Err(Error::OpenMismatch);
        }
        for (&(x, n), m) in &mats {
            if m.field() != field {
                return Err(Error::FieldMismatch);
            }
            let want_rows = target.dim(x, n + shift);
            let want_cols = source.dim(x, n);
            if m.rows() != want_rows || m.cols() != want_cols {
                return Err(Error::ShapeMismatch(format!(
                    "matrix at point {x}, degree {n}: got {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    want_rows,
                    want_cols
                )));
            }
            if !source.open().contains(&x) {
                return Err(Error::Invalid(format!(
                    "morphism matrix at point {x} outside the open"
                )));
            }
        }
        let mats = mats.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        Ok(SheafMorphism {
            source,
            target,
            shift,
            field,
            mats,
        })
    }

    pub fn zero(
        source: GradedBundle,
        target: GradedBundle,
        shift: i64,
        field: FieldTag,
    ) -> Result<SheafMorphism> {
        SheafMorphism::new(source, target, shift, field, BTreeMap::new())
    }

    pub fn identity(bundle: GradedBundle, field: FieldTag) -> SheafMorphism {
        let mats = bundle
            .dims()
            .iter()
            .map(|(&k, &d)| (k, Matrix::identity(field, d)))
            .collect();
        SheafMorphism {
            source: bundle.clone(),
            target: bundle,
            shift: 0,
            field,
            mats,
        }
    }

    pub fn source(&self) -> &GradedBundle {
        &self.source
    }

    pub fn target(&self) -> &GradedBundle {
        &self.target
    }

    pub fn shift_degree(&self) -> i64 {
        self.shift
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn open(&self) -> &BTreeSet<usize> {
        self.source.open()
    }

    pub fn mats(&self) -> &BTreeMap<(usize, i64), Matrix> {
        &self.mats
    }

    /// The matrix at a point and source degree, materializing zeros for
    /// absent entries.
    pub fn mat_at(&self, point: usize, degree: i64) -> Matrix {
        match self.mats.get(&(point, degree)) {
            Some(m) => m.clone(),
            None => Matrix::zeros(
                self.field,
                self.target.dim(point, degree + self.shift),
                self.source.dim(point, degree),
            ),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mats.is_empty()
    }

    /// Plain pointwise composition `self o other`; shifts add.
    pub fn compose(&self, other: &SheafMorphism) -> Result<SheafMorphism> {
        if other.target != self.source {
            return Err(Error::ShapeMismatch(
                "composition endpoint bundles differ".into(),
            ));
        }
        let shift = self.shift + other.shift;
        let mut mats = BTreeMap::new();
        for (&(x, n), g) in &other.mats {
            let f = self.mat_at(x, n + other.shift);
            let m = f.mul(g)?;
            if !m.is_zero() {
                mats.insert((x, n), m);
            }
        }
        SheafMorphism::new(
            other.source.clone(),
            self.target.clone(),
            shift,
            self.field,
            mats,
        )
    }

    pub fn add(&self, other: &SheafMorphism) -> Result<SheafMorphism> {
        if self.source != other.source || self.target != other.target || self.shift != other.shift {
            return Err(Error::ShapeMismatch("sum of incompatible morphisms".into()));
        }
        let mut mats = self.mats.clone();
        for (&k, m) in &other.mats {
            let cur = match mats.remove(&k) {
                Some(c) => c.add(m)?,
                None => m.clone(),
            };
            if !cur.is_zero() {
                mats.insert(k, cur);
            }
        }
        SheafMorphism::new(
            self.source.clone(),
            self.target.clone(),
            self.shift,
            self.field,
            mats,
        )
    }

    pub fn sub(&self, other: &SheafMorphism) -> Result<SheafMorphism> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> SheafMorphism {
        let mats = self.mats.iter().map(|(&k, m)| (k, m.neg())).collect();
        SheafMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            shift: self.shift,
            field: self.field,
            mats,
        }
    }

    pub fn scale(&self, c: &Scalar) -> Result<SheafMorphism> {
        let mut mats = BTreeMap::new();
        for (&k, m) in &self.mats {
            let s = m.scale(c)?;
            if !s.is_zero() {
                mats.insert(k, s);
            }
        }
        SheafMorphism::new(
            self.source.clone(),
            self.target.clone(),
            self.shift,
            self.field,
            mats,
        )
    }

    /// Pointwise restriction to a subset of the open.
    pub fn restrict(&self, sub: &BTreeSet<usize>) -> Result<SheafMorphism> {
        let source = self.source.restrict(sub)?;
        let target = self.target.restrict(sub)?;
        let mats = self
            .mats
            .iter()
            .filter(|((x, _), _)| sub.contains(x))
            .map(|(&k, m)| (k, m.clone()))
            .collect();
        SheafMorphism::new(source, target, self.shift, self.field, mats)
    }

    /// Reindexes the morphism by the degree shift of both endpoint bundles,
    /// scaling by the given sign. Used by the shift functor.
    pub fn shift_reindex(&self, sign: &Scalar) -> Result<SheafMorphism> {
        let mut mats = BTreeMap::new();
        for (&(x, n), m) in &self.mats {
            let s = m.scale(sign)?;
            if !s.is_zero() {
                mats.insert((x, n - 1), s);
            }
        }
        SheafMorphism::new(
            self.source.shift(),
            self.target.shift(),
            self.shift,
            self.field,
            mats,
        )
    }
}

/// The kernel of a morphism in a single source degree, with its inclusion.
///
/// The fiber at each point is the null space of the pointwise matrix, so the
/// kernel is again a pointwise-dimension family and the composite
/// `m o inclusion` vanishes identically.
pub fn kernel_subbundle(m: &SheafMorphism, degree: i64) -> Result<(GradedBundle, SheafMorphism)> {
    let mut dims = BTreeMap::new();
    let mut mats = BTreeMap::new();
    for &x in m.open() {
        let mat = m.mat_at(x, degree);
        let basis = mat.kernel_basis();
        if basis.cols() > 0 {
            dims.insert((x, degree), basis.cols());
            mats.insert((x, degree), basis);
        }
    }
    let kernel = GradedBundle::new(m.open().clone(), dims)?;
    let incl = SheafMorphism::new(kernel.clone(), m.source().clone(), 0, m.field(), mats)?;
    Ok((kernel, incl))
}
