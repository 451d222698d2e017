//! Constructive descent: gluing modulo Q, higher gluing along a twist,
//! globalization of a twisted complex with a verified certificate, and the
//! explicit descent homotopies for morphisms.
//!
//! The globalization runs the downward induction over degrees: at each level
//! it forms the mapping cone of the partial comparison morphism, glues the
//! kernels of the cone differential with the partition of unity, extracts the
//! next differential and comparison components, and *checks* every identity
//! it relies on (Maurer-Cartan of the cone, acyclicity above the level, the
//! gluing of the extracted differential, the closedness of the extended
//! morphism, and the homology conditions) with exact arithmetic. A failed
//! check aborts with a witness instead of producing corrupted output.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::bundle::{direct_sum, kernel_subbundle, DirectSum, GradedBundle, SheafMorphism};
use crate::cochain::HomCochain;
use crate::error::{Error, Result};
use crate::homology::{
    induced_homology_map, is_weak_equivalence, local_differential, local_homology, WeqReport,
};
use crate::matrix::Matrix;
use crate::site::{validate_site, Site};
use crate::twisted::{
    cone, global_hom_diff, hom_diff, twist_morphism, twist_object, GlobalComplex, TwistedComplex,
};

/// Transition data for a family of local bundles that fails to be a cocycle
/// only up to a correction through the modules `Q_i`.
#[derive(Debug, Clone)]
pub struct DescentDataModQ {
    site: Arc<Site>,
    pub p: Vec<GradedBundle>,
    pub q: Vec<GradedBundle>,
    /// `tau_i : Q_i -> P_i`
    pub tau: Vec<SheafMorphism>,
    /// `theta_{ji} : P_i| -> P_j|` keyed by `(j, i)`
    pub theta: BTreeMap<(usize, usize), SheafMorphism>,
    /// `vartheta_{kji} : P_i| -> Q_k|` keyed by `(k, j, i)`
    pub vartheta: BTreeMap<(usize, usize, usize), SheafMorphism>,
}

impl DescentDataModQ {
    pub fn new(
        site: Arc<Site>,
        p: Vec<GradedBundle>,
        q: Vec<GradedBundle>,
        tau: Vec<SheafMorphism>,
        theta: BTreeMap<(usize, usize), SheafMorphism>,
        vartheta: BTreeMap<(usize, usize, usize), SheafMorphism>,
    ) -> Result<DescentDataModQ> {
        let n = site.n_opens();
        if p.len() != n || q.len() != n || tau.len() != n {
            return Err(Error::FamilyMismatch);
        }
        for i in 0..n {
            if p[i].open() != site.open(i) || q[i].open() != site.open(i) {
                return Err(Error::OpenMismatch);
            }
            if tau[i].source() != &q[i] || tau[i].target() != &p[i] || tau[i].shift_degree() != 0 {
                return Err(Error::ShapeMismatch(format!("tau at open {i}")));
            }
        }
        for (&(j, i), m) in &theta {
            let supp = site.support(&[j, i]);
            if m.source() != &p[i].restrict(&supp)?
                || m.target() != &p[j].restrict(&supp)?
                || m.shift_degree() != 0
            {
                return Err(Error::ShapeMismatch(format!("theta at pair ({j}, {i})")));
            }
        }
        for (&(k, j, i), m) in &vartheta {
            let supp = site.support(&[k, j, i]);
            if m.source() != &p[i].restrict(&supp)?
                || m.target() != &q[k].restrict(&supp)?
                || m.shift_degree() != 0
            {
                return Err(Error::ShapeMismatch(format!(
                    "vartheta at triple ({k}, {j}, {i})"
                )));
            }
        }
        Ok(DescentDataModQ {
            site,
            p,
            q,
            tau,
            theta,
            vartheta,
        })
    }

    pub fn site(&self) -> &Arc<Site> {
        &self.site
    }

    fn theta_at(&self, j: usize, i: usize) -> Result<SheafMorphism> {
        let supp = self.site.support(&[j, i]);
        match self.theta.get(&(j, i)) {
            Some(m) => Ok(m.clone()),
            None => SheafMorphism::zero(
                self.p[i].restrict(&supp)?,
                self.p[j].restrict(&supp)?,
                0,
                self.site.field(),
            ),
        }
    }

    fn vartheta_at(&self, k: usize, j: usize, i: usize) -> Result<SheafMorphism> {
        let supp = self.site.support(&[k, j, i]);
        match self.vartheta.get(&(k, j, i)) {
            Some(m) => Ok(m.clone()),
            None => SheafMorphism::zero(
                self.p[i].restrict(&supp)?,
                self.q[k].restrict(&supp)?,
                0,
                self.site.field(),
            ),
        }
    }

    /// Checks `theta_{ii} = id` and the cocycle-mod-Q relation on every
    /// nonempty ordered triple, naming the first violated triple.
    pub fn validate(&self) -> Result<()> {
        for i in 0..self.site.n_opens() {
            if self.site.support(&[i]).is_empty() {
                continue;
            }
            let id = SheafMorphism::identity(self.p[i].clone(), self.site.field());
            if self.theta_at(i, i)? != id {
                return Err(Error::CocycleViolation { triple: (i, i, i) });
            }
        }
        let n = self.site.n_opens();
        for k in 0..n {
            for j in 0..n {
                for i in 0..n {
                    let supp = self.site.support(&[k, j, i]);
                    if supp.is_empty() {
                        continue;
                    }
                    let lhs = self.theta_at(k, i)?.restrict(&supp)?.sub(
                        &self
                            .theta_at(k, j)?
                            .restrict(&supp)?
                            .compose(&self.theta_at(j, i)?.restrict(&supp)?)?,
                    )?;
                    let rhs = self.tau[k]
                        .restrict(&supp)?
                        .compose(&self.vartheta_at(k, j, i)?)?;
                    if lhs != rhs {
                        return Err(Error::CocycleViolation { triple: (k, j, i) });
                    }
                }
            }
        }
        Ok(())
    }
}

/// A glued bundle on the whole space with its comparison maps, surjective
/// onto each local bundle modulo `Q`.
#[derive(Debug, Clone)]
pub struct DescentResult {
    pub bundle: GradedBundle,
    pub sum: DirectSum,
    /// `psi_i : R|_{U_i} -> P_i`
    pub psi: Vec<SheafMorphism>,
    /// `xi_{ji} : R|_{U_{ji}} -> Q_j|` keyed by `(j, i)`
    pub xi: BTreeMap<(usize, usize), SheafMorphism>,
}

/// Glues the local bundles of a descent datum modulo Q into a bundle on all
/// of the space, using the partition of unity:
/// `psi_i = sum_j theta_{ij}(rho_j -)` and `xi_{ji} = sum_k rho_k vartheta_{jik}(-)`.
/// Both result identities are verified exactly before returning.
pub fn glue_modulo(data: &DescentDataModQ) -> Result<DescentResult> {
    let site = data.site.clone();
    if let Some(d) = validate_site(&site).into_iter().next() {
        return Err(Error::InvalidSite(d.to_string()));
    }
    data.validate()?;
    let field = site.field();

    let parts: Vec<GradedBundle> = data.p.iter().map(|b| b.extend_by_zero(&site)).collect();
    let sum = direct_sum(parts, field)?;
    let bundle = sum.total.clone();

    let block_cols = |x: usize, deg: i64| -> Vec<usize> {
        (0..site.n_opens())
            .map(|j| sum.parts[j].dim(x, deg))
            .collect()
    };

    // psi_i = sum_j theta_{ij}(rho_j -)
    let mut psi = Vec::new();
    for i in 0..site.n_opens() {
        let u_i = site.open(i);
        let mut mats = BTreeMap::new();
        for &x in u_i {
            for deg in degrees_of(&data.p[i], x) {
                let rows = data.p[i].dim(x, deg);
                let widths = block_cols(x, deg);
                let total: usize = widths.iter().sum();
                let mut m = Matrix::zeros(field, rows, total);
                let mut off = 0usize;
                for j in 0..site.n_opens() {
                    let w = widths[j];
                    if w > 0 && site.open(j).contains(&x) {
                        let th = data.theta_at(i, j)?;
                        let block = th.mat_at(x, deg).scale(site.rho(j, x))?;
                        m.paste(0, off, &block);
                    }
                    off += w;
                }
                if !m.is_zero() {
                    mats.insert((x, deg), m);
                }
            }
        }
        psi.push(SheafMorphism::new(
            bundle.restrict(u_i)?,
            data.p[i].clone(),
            0,
            field,
            mats,
        )?);
    }

    // xi_{ji} = sum_k rho_k vartheta_{jik}(-)
    let mut xi = BTreeMap::new();
    for j in 0..site.n_opens() {
        for i in 0..site.n_opens() {
            let supp = site.support(&[j, i]);
            if supp.is_empty() {
                continue;
            }
            let mut mats = BTreeMap::new();
            for &x in &supp {
                for deg in degrees_of(&data.p[i], x) {
                    let rows = data.q[j].dim(x, deg);
                    let widths = block_cols(x, deg);
                    let total: usize = widths.iter().sum();
                    let mut m = Matrix::zeros(field, rows, total);
                    let mut off = 0usize;
                    for k in 0..site.n_opens() {
                        let w = widths[k];
                        if w > 0 && site.open(k).contains(&x) {
                            let vt = data.vartheta_at(j, i, k)?;
                            let block = vt.mat_at(x, deg).scale(site.rho(k, x))?;
                            m.paste(0, off, &block);
                        }
                        off += w;
                    }
                    if !m.is_zero() {
                        mats.insert((x, deg), m);
                    }
                }
            }
            xi.insert(
                (j, i),
                SheafMorphism::new(
                    bundle.restrict(&supp)?,
                    data.q[j].restrict(&supp)?,
                    0,
                    field,
                    mats,
                )?,
            );
        }
    }

    // verify psi_j - theta_{ji} psi_i = tau_j xi_{ji} on every overlap
    for j in 0..site.n_opens() {
        for i in 0..site.n_opens() {
            let supp = site.support(&[j, i]);
            if supp.is_empty() {
                continue;
            }
            let lhs = psi[j]
                .restrict(&supp)?
                .sub(&data.theta_at(j, i)?.compose(&psi[i].restrict(&supp)?)?)?;
            let rhs = data.tau[j]
                .restrict(&supp)?
                .compose(xi.get(&(j, i)).expect("xi built for nonempty overlaps"))?;
            if lhs != rhs {
                return Err(Error::DescentIdentity {
                    context: format!("compatibility of psi_{j} and psi_{i}"),
                });
            }
        }
    }

    // verify surjectivity modulo Q pointwise
    for i in 0..site.n_opens() {
        for &x in site.open(i) {
            for deg in degrees_of(&data.p[i], x) {
                let dim = data.p[i].dim(x, deg);
                let stacked = psi[i].mat_at(x, deg).hstack(&data.tau[i].mat_at(x, deg))?;
                if stacked.rank() < dim {
                    return Err(Error::SurjectivityFailure {
                        open: i,
                        point: site.point_name(x).to_string(),
                        degree: deg,
                    });
                }
            }
        }
    }

    Ok(DescentResult {
        bundle,
        sum,
        psi,
        xi,
    })
}

fn degrees_of(b: &GradedBundle, x: usize) -> Vec<i64> {
    b.dims()
        .keys()
        .filter(|&&(px, _)| px == x)
        .map(|&(_, n)| n)
        .collect()
}

/// Output of [`higher_glue`]: the glued kernel bundle in one degree, the
/// comparison cochain, and the kernel data per open.
#[derive(Debug, Clone)]
pub struct HigherGlueOutcome {
    /// The glued bundle on all points, concentrated in the requested degree.
    pub bundle: GradedBundle,
    /// The direct-sum structure of the glued bundle.
    pub sum: DirectSum,
    /// Kernel inclusions `ker b^{0,1}_i -> F_i` in the requested degree.
    pub kernel_inclusions: Vec<SheafMorphism>,
    /// The comparison pieces `psi^{k,-k}`, a closed degree-zero cochain from
    /// the concentrated complex to the twisted complex.
    pub psi: HomCochain,
    /// The concentrated complex (zero differential) the cochain starts from.
    pub source: GlobalComplex,
}

/// Glues the degree-`level` kernels of the local differentials along the
/// higher twist components:
/// `psi^{k,-k} = (-1)^k sum_j b^{k+1,-k}_{(i_0...i_k j)}(rho_j -)`.
///
/// Preconditions checked exactly: the twist satisfies Maurer-Cartan, and the
/// local homology vanishes pointwise above `level`. Postconditions checked
/// exactly: `psi` is closed for the differential of the dg-category (its
/// degree-zero part therefore lands in the kernels), and `psi^{0,0}` is
/// surjective onto the kernels modulo the image of the differential.
pub fn higher_glue(f: &TwistedComplex, level: i64) -> Result<HigherGlueOutcome> {
    let site = f.site().clone();
    if let Some(d) = validate_site(&site).into_iter().next() {
        return Err(Error::InvalidSite(d.to_string()));
    }
    f.validate()?;
    let field = site.field();

    // acyclicity above the level, pointwise
    for i in 0..site.n_opens() {
        let d = local_differential(f, i);
        let table = local_homology(&site, &f.bundles()[i], &d)?;
        for (&(x, n), &h) in table.entries() {
            if n > level && h > 0 {
                return Err(Error::AcyclicityFailure {
                    open: i,
                    point: site.point_name(x).to_string(),
                    degree: n,
                });
            }
        }
    }

    // kernels of the local differentials in the requested degree
    let mut kernels = Vec::new();
    let mut inclusions = Vec::new();
    for i in 0..site.n_opens() {
        let d = local_differential(f, i);
        let (k, incl) = kernel_subbundle(&d, level)?;
        kernels.push(k);
        inclusions.push(incl);
    }
    let parts: Vec<GradedBundle> = kernels.iter().map(|k| k.extend_by_zero(&site)).collect();
    let sum = direct_sum(parts, field)?;
    let bundle = sum.total.clone();

    let source_diff = SheafMorphism::zero(bundle.clone(), bundle.clone(), 1, field)?;
    let source = GlobalComplex::new(site.clone(), bundle.clone(), source_diff)?;
    let source_family: Vec<GradedBundle> = (0..site.n_opens())
        .map(|i| bundle.restrict(site.open(i)))
        .collect::<Result<_>>()?;

    let mut psi = HomCochain::zero(site.clone(), source_family, f.bundles().to_vec())?;

    // group the twist components b^{k+1,-k} at tuples (i_0...i_k, j)
    let mut acc: BTreeMap<Vec<usize>, BTreeMap<(usize, i64), Matrix>> = BTreeMap::new();
    for ((ext_tuple, _q), piece) in f.twist().components() {
        if ext_tuple.len() < 2 {
            continue;
        }
        let k = ext_tuple.len() - 2;
        let j = *ext_tuple.last().unwrap();
        let tuple: Vec<usize> = ext_tuple[..ext_tuple.len() - 1].to_vec();
        let supp = site.support(&tuple);
        if supp.is_empty() {
            continue;
        }
        let first = tuple[0];
        let sign_negate = k % 2 == 1;
        for &x in &supp {
            if !site.open(j).contains(&x) {
                continue;
            }
            let rows = f.bundles()[first].dim(x, level - k as i64);
            let cols = bundle.dim(x, level);
            if rows == 0 || cols == 0 {
                continue;
            }
            // block for summand j: (-1)^k rho_j(x) b^{k+1,-k}(x) incl_j(x)
            let incl = inclusions[j].mat_at(x, level);
            let core = piece.mat_at(x, level).mul(&incl)?;
            let mut scaled = core.scale(site.rho(j, x))?;
            if sign_negate {
                scaled = scaled.neg();
            }
            if scaled.is_zero() {
                continue;
            }
            let mut block = Matrix::zeros(field, rows, cols);
            let off: usize = (0..j).map(|l| sum.parts[l].dim(x, level)).sum();
            block.paste(0, off, &scaled);
            let slot = acc.entry(tuple.clone()).or_default();
            let cur = match slot.remove(&(x, level)) {
                Some(c) => c.add(&block)?,
                None => block,
            };
            slot.insert((x, level), cur);
        }
    }
    for (tuple, mats) in acc {
        let k = tuple.len() - 1;
        let supp = site.support(&tuple);
        let src = bundle.restrict(&supp)?;
        let tgt = f.bundles()[tuple[0]].restrict(&supp)?;
        let mats = mats.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        let piece = SheafMorphism::new(src, tgt, -(k as i64), field, mats)?;
        psi.insert(tuple, -(k as i64), piece)?;
    }

    // closedness of psi against the concentrated source and the twist
    let te = twist_object(&source)?;
    if !hom_diff(&psi, &te, f)?.is_zero() {
        return Err(Error::ResidualNonzero {
            context: "higher gluing identity".into(),
        });
    }

    // surjectivity onto the kernels modulo the previous differential
    for i in 0..site.n_opens() {
        let d = local_differential(f, i);
        let psi0 = psi.component(&[i], 0);
        for &x in site.open(i) {
            let kmat = inclusions[i].mat_at(x, level);
            if kmat.cols() == 0 {
                continue;
            }
            let psim = match psi0 {
                Some(m) => m.mat_at(x, level),
                None => Matrix::zeros(field, f.bundles()[i].dim(x, level), bundle.dim(x, level)),
            };
            let prev = d.mat_at(x, level - 1);
            let span = psim.hstack(&prev)?;
            let with_kernel = span.hstack(&kmat)?;
            if span.rank() != with_kernel.rank() {
                return Err(Error::SurjectivityFailure {
                    open: i,
                    point: site.point_name(x).to_string(),
                    degree: level,
                });
            }
        }
    }

    Ok(HigherGlueOutcome {
        bundle,
        sum,
        kernel_inclusions: inclusions,
        psi,
        source,
    })
}

/// A verified globalization: the global complex, the comparison morphism,
/// the (identically zero) intertwining residual, and the weak-equivalence
/// report.
#[derive(Debug, Clone)]
pub struct GlobalizationCertificate {
    pub complex: GlobalComplex,
    pub phi: HomCochain,
    pub intertwine_residual: HomCochain,
    pub weq: WeqReport,
}

/// Raw comparison-morphism entries keyed by (tuple, q), then (point, degree).
type PhiEntries = BTreeMap<(Vec<usize>, i64), BTreeMap<(usize, i64), Matrix>>;

struct Builder {
    site: Arc<Site>,
    e_dims: BTreeMap<(usize, i64), usize>,
    e_mats: BTreeMap<(usize, i64), Matrix>,
    phi_mats: PhiEntries,
}

impl Builder {
    fn complex(&self) -> Result<GlobalComplex> {
        let bundle = GradedBundle::new(self.site.all_points(), self.e_dims.clone())?;
        let diff = SheafMorphism::new(
            bundle.clone(),
            bundle.clone(),
            1,
            self.site.field(),
            self.e_mats.clone(),
        )?;
        GlobalComplex::new(self.site.clone(), bundle, diff)
    }

    fn phi(&self, e: &GlobalComplex, f: &TwistedComplex) -> Result<HomCochain> {
        let src: Vec<GradedBundle> = (0..self.site.n_opens())
            .map(|i| e.bundle().restrict(self.site.open(i)))
            .collect::<Result<_>>()?;
        let mut out = HomCochain::zero(self.site.clone(), src, f.bundles().to_vec())?;
        for ((tuple, q), mats) in &self.phi_mats {
            for (&(x, deg), m) in mats {
                if m.is_zero() {
                    continue;
                }
                out.insert_matrix(tuple.clone(), *q, x, deg, m.clone())?;
            }
        }
        Ok(out)
    }

    fn add_phi_entry(&mut self, tuple: Vec<usize>, q: i64, x: usize, deg: i64, m: Matrix) {
        if m.is_zero() {
            return;
        }
        self.phi_mats
            .entry((tuple, q))
            .or_default()
            .insert((x, deg), m);
    }
}

/// Checks that the comparison morphism induces pointwise homology
/// isomorphisms in every degree at or above `iso_from`, and a surjection at
/// `surj_at`, for every open and point.
fn check_homology_conditions(
    e: &GlobalComplex,
    f: &TwistedComplex,
    phi: &HomCochain,
    iso_from: i64,
    surj_at: i64,
    top: i64,
) -> Result<()> {
    let site = e.site().clone();
    for i in 0..site.n_opens() {
        let df = local_differential(f, i);
        let phi0 = phi.component(&[i], 0);
        for &x in site.open(i) {
            for l in surj_at..=top {
                if l < iso_from && l != surj_at {
                    continue;
                }
                let phim = match phi0 {
                    Some(m) => m.mat_at(x, l),
                    None => {
                        Matrix::zeros(site.field(), f.bundles()[i].dim(x, l), e.bundle().dim(x, l))
                    }
                };
                let induced = induced_homology_map(
                    &e.diff().mat_at(x, l - 1),
                    &e.diff().mat_at(x, l),
                    &df.mat_at(x, l - 1),
                    &df.mat_at(x, l),
                    &phim,
                )?;
                if l >= iso_from {
                    if induced.rows() != induced.cols() || induced.rank() != induced.rows() {
                        return Err(Error::InductionCheckFailed {
                            degree: l,
                            open: i,
                            point: site.point_name(x).to_string(),
                            detail: "homology isomorphism above the level",
                        });
                    }
                } else if induced.rank() != induced.rows() {
                    return Err(Error::InductionCheckFailed {
                        degree: l,
                        open: i,
                        point: site.point_name(x).to_string(),
                        detail: "homology surjectivity at the level",
                    });
                }
            }
        }
    }
    Ok(())
}

/// Globalizes a valid twisted complex: returns a global complex, a closed
/// degree-zero comparison morphism from its twist image, the (zero)
/// intertwining residual, and the verified weak-equivalence report.
pub fn globalize(f: &TwistedComplex) -> Result<GlobalizationCertificate> {
    let site = f.site().clone();
    if let Some(d) = validate_site(&site).into_iter().next() {
        return Err(Error::InvalidSite(d.to_string()));
    }
    f.validate()?;

    let mut builder = Builder {
        site: site.clone(),
        e_dims: BTreeMap::new(),
        e_mats: BTreeMap::new(),
        phi_mats: BTreeMap::new(),
    };

    let Some((m0, top)) = f.window() else {
        let e = builder.complex()?;
        let te = twist_object(&e)?;
        let phi = builder.phi(&e, f)?;
        let residual = hom_diff(&phi, &te, f)?;
        let weq = is_weak_equivalence(&phi, &te, f)?;
        return Ok(GlobalizationCertificate {
            complex: e,
            phi,
            intertwine_residual: residual,
            weq,
        });
    };

    for m in (m0 + 1..=top).rev() {
        let e = builder.complex()?;
        e.validate()?;
        let te = twist_object(&e)?;
        let phi = builder.phi(&e, f)?;
        // induction hypotheses, executed rather than trusted
        check_homology_conditions(&e, f, &phi, m + 2, m + 1, top)?;
        let g = cone(&phi, &te, f)?;
        // the cone must be pointwise acyclic above the current level
        for i in 0..site.n_opens() {
            let table = local_homology(&site, &g.bundles()[i], &local_differential(&g, i))?;
            for (&(x, n), &h) in table.entries() {
                if n > m && h > 0 {
                    return Err(Error::AcyclicityFailure {
                        open: i,
                        point: site.point_name(x).to_string(),
                        degree: n,
                    });
                }
            }
        }
        let hg = higher_glue(&g, m)?;

        // extract the new differential: a^{0,1} = -(top rows of psi^{0,0}),
        // which must agree across the opens containing each point
        let mut new_diff: BTreeMap<usize, Matrix> = BTreeMap::new();
        for i in 0..site.n_opens() {
            let psi0 = hg.psi.component(&[i], 0);
            for &x in site.open(i) {
                let cols = hg.bundle.dim(x, m);
                if cols == 0 {
                    continue;
                }
                let e_rows = e.bundle().dim(x, m + 1);
                let mat = match psi0 {
                    Some(p) => p.mat_at(x, m),
                    None => Matrix::zeros(site.field(), g.bundles()[i].dim(x, m), cols),
                };
                let a_part = mat.select_rows(&(0..e_rows).collect::<Vec<_>>()).neg();
                match new_diff.get(&x) {
                    Some(prev) => {
                        if prev != &a_part {
                            return Err(Error::DescentIdentity {
                                context: format!(
                                    "glued differential disagrees at point {}",
                                    site.point_name(x)
                                ),
                            });
                        }
                    }
                    None => {
                        new_diff.insert(x, a_part);
                    }
                }
            }
        }

        // extract the new comparison components
        for i in 0..site.n_opens() {
            let psi0 = hg.psi.component(&[i], 0);
            for &x in site.open(i) {
                let cols = hg.bundle.dim(x, m);
                if cols == 0 {
                    continue;
                }
                let e_rows = e.bundle().dim(x, m + 1);
                let f_rows = f.bundles()[i].dim(x, m);
                let mat = match psi0 {
                    Some(p) => p.mat_at(x, m),
                    None => Matrix::zeros(site.field(), e_rows + f_rows, cols),
                };
                let f_part = mat.select_rows(&(e_rows..e_rows + f_rows).collect::<Vec<_>>());
                builder.add_phi_entry(vec![i], 0, x, m, f_part);
            }
        }
        for ((tuple, q), piece) in hg.psi.components() {
            if tuple.len() < 2 {
                continue;
            }
            for (&(x, deg), mat) in piece.mats() {
                builder.add_phi_entry(tuple.clone(), *q, x, deg, mat.clone());
            }
        }

        // grow the partial complex by the new degree
        for (&(x, n), &d) in hg.bundle.dims() {
            debug_assert_eq!(n, m);
            builder.e_dims.insert((x, n), d);
        }
        for (x, mat) in new_diff {
            if !mat.is_zero() {
                builder.e_mats.insert((x, m), mat);
            }
        }

        let e = builder.complex()?;
        e.validate()?;
        let te = twist_object(&e)?;
        let phi = builder.phi(&e, f)?;
        if !hom_diff(&phi, &te, f)?.is_zero() {
            return Err(Error::ResidualNonzero {
                context: format!("intertwining residual after level {m}"),
            });
        }
        check_homology_conditions(&e, f, &phi, m + 1, m, top)?;
    }

    // base case: glue the kernels of the cone differential along its
    // degree-zero transitions, anchored at the least open per point
    {
        let e = builder.complex()?;
        e.validate()?;
        let te = twist_object(&e)?;
        let phi = builder.phi(&e, f)?;
        check_homology_conditions(&e, f, &phi, m0 + 2, m0 + 1, top)?;
        let g = cone(&phi, &te, f)?;

        for x in 0..site.n_points() {
            let alpha = (0..site.n_opens())
                .find(|&i| site.open(i).contains(&x))
                .expect("site is validated as a cover");
            let c0_alpha = local_differential(&g, alpha);
            let kernel = c0_alpha.mat_at(x, m0).kernel_basis();
            if kernel.cols() == 0 {
                continue;
            }
            let e_rows = e.bundle().dim(x, m0 + 1);
            builder.e_dims.insert((x, m0), kernel.cols());

            for i in 0..site.n_opens() {
                if !site.open(i).contains(&x) {
                    continue;
                }
                let c1 = match g.twist().component(&[i, alpha], 0) {
                    Some(m) => m.mat_at(x, m0),
                    None => Matrix::zeros(
                        site.field(),
                        g.bundles()[i].dim(x, m0),
                        g.bundles()[alpha].dim(x, m0),
                    ),
                };
                let t = c1.mul(&kernel)?;
                // the transition must land in the kernel on U_i and be
                // invertible as a map of kernels
                let c0_i = local_differential(&g, i);
                if !c0_i.mat_at(x, m0).mul(&t)?.is_zero() {
                    return Err(Error::KernelTransitionNotInvertible {
                        open: i,
                        point: site.point_name(x).to_string(),
                    });
                }
                let k_i = c0_i.mat_at(x, m0).kernel_basis();
                let coords = k_i.solve(&t)?;
                let invertible = match &coords {
                    Some(y) => {
                        y.rows() == kernel.cols()
                            && y.cols() == kernel.cols()
                            && y.rank() == kernel.cols()
                            && k_i.cols() == kernel.cols()
                    }
                    None => false,
                };
                if !invertible {
                    return Err(Error::KernelTransitionNotInvertible {
                        open: i,
                        point: site.point_name(x).to_string(),
                    });
                }
                // top rows must be transition-invariant: they give the glued
                // differential
                let t_top = t.select_rows(&(0..e_rows).collect::<Vec<_>>());
                let k_top = kernel.select_rows(&(0..e_rows).collect::<Vec<_>>());
                if t_top != k_top {
                    return Err(Error::DescentIdentity {
                        context: format!(
                            "base-case differential disagrees at point {}",
                            site.point_name(x)
                        ),
                    });
                }
                let f_rows = f.bundles()[i].dim(x, m0);
                let t_bottom = t.select_rows(&(e_rows..e_rows + f_rows).collect::<Vec<_>>());
                builder.add_phi_entry(vec![i], 0, x, m0, t_bottom);
            }
            let a = kernel.select_rows(&(0..e_rows).collect::<Vec<_>>()).neg();
            if !a.is_zero() {
                builder.e_mats.insert((x, m0), a);
            }
        }
    }

    let e = builder.complex()?;
    e.validate()?;
    let te = twist_object(&e)?;
    let phi = builder.phi(&e, f)?;
    let residual = hom_diff(&phi, &te, f)?;
    if !residual.is_zero() {
        return Err(Error::ResidualNonzero {
            context: "final intertwining residual".into(),
        });
    }
    let weq = is_weak_equivalence(&phi, &te, f)?;
    if !weq.is_equivalence {
        let w = weq.failures[0].clone();
        return Err(Error::InductionCheckFailed {
            degree: w.degree,
            open: w.open,
            point: w.point,
            detail: "final weak equivalence",
        });
    }
    Ok(GlobalizationCertificate {
        complex: e,
        phi,
        intertwine_residual: residual,
        weq,
    })
}

/// Descends a closed cochain between twist images to a closed global
/// morphism plus an explicit homotopy:
/// `phi_tilde = sum_i rho_i phi^{0,n}_i` and
/// `phi_hat^{k,n-1-k}_{(i_0...i_k)} = sum_j rho_j phi^{k+1,n-1-k}_{(j i_0...i_k)}`,
/// with `phi - T(phi_tilde) = d phi_hat` verified exactly.
pub fn descend_morphism(
    phi: &HomCochain,
    source: &GlobalComplex,
    target: &GlobalComplex,
) -> Result<(SheafMorphism, HomCochain)> {
    let site = source.site().clone();
    if let Some(d) = validate_site(&site).into_iter().next() {
        return Err(Error::InvalidSite(d.to_string()));
    }
    let te = twist_object(source)?;
    let tf = twist_object(target)?;
    if !hom_diff(phi, &te, &tf)?.is_zero() {
        return Err(Error::NotClosed);
    }
    let degrees = phi.total_degrees();
    if degrees.len() > 1 {
        return Err(Error::WrongDegree {
            expected: *degrees.iter().next().unwrap(),
        });
    }
    let n = degrees.iter().next().copied().unwrap_or(0);
    let field = site.field();

    // phi_tilde = sum_i rho_i phi^{0,n}_i
    let mut tilde_mats: BTreeMap<(usize, i64), Matrix> = BTreeMap::new();
    for i in 0..site.n_opens() {
        let Some(p0) = phi.component(&[i], n) else {
            continue;
        };
        for &x in site.open(i) {
            for deg in degrees_of(source.bundle(), x) {
                let m = p0.mat_at(x, deg).scale(site.rho(i, x))?;
                if m.is_zero() {
                    continue;
                }
                let cur = match tilde_mats.remove(&(x, deg)) {
                    Some(c) => c.add(&m)?,
                    None => m,
                };
                tilde_mats.insert((x, deg), cur);
            }
        }
    }
    let tilde_mats = tilde_mats
        .into_iter()
        .filter(|(_, m)| !m.is_zero())
        .collect();
    let phi_tilde = SheafMorphism::new(
        source.bundle().clone(),
        target.bundle().clone(),
        n,
        field,
        tilde_mats,
    )?;
    if !global_hom_diff(&phi_tilde, source, target)?.is_zero() {
        return Err(Error::ResidualNonzero {
            context: "descended morphism is not closed".into(),
        });
    }

    // phi_hat from the higher components, weighted by the partition
    let src_family: Vec<GradedBundle> = (0..site.n_opens())
        .map(|i| source.bundle().restrict(site.open(i)))
        .collect::<Result<_>>()?;
    let tgt_family: Vec<GradedBundle> = (0..site.n_opens())
        .map(|i| target.bundle().restrict(site.open(i)))
        .collect::<Result<_>>()?;
    let mut phi_hat = HomCochain::zero(site.clone(), src_family, tgt_family)?;
    for ((ext_tuple, q), piece) in phi.components() {
        if ext_tuple.len() < 2 {
            continue;
        }
        let j = ext_tuple[0];
        let tuple: Vec<usize> = ext_tuple[1..].to_vec();
        let supp = site.support(&tuple);
        if supp.is_empty() {
            continue;
        }
        for (&(x, deg), m) in piece.mats() {
            if !supp.contains(&x) {
                continue;
            }
            let scaled = m.scale(site.rho(j, x))?;
            if scaled.is_zero() {
                continue;
            }
            phi_hat.insert_matrix(tuple.clone(), *q, x, deg, scaled)?;
        }
    }

    // the exact identity phi - T(phi_tilde) = d phi_hat
    let t_tilde = twist_morphism(&phi_tilde, source, target)?;
    let lhs = phi.sub(&t_tilde)?;
    let rhs = hom_diff(&phi_hat, &te, &tf)?;
    if lhs != rhs {
        return Err(Error::ResidualNonzero {
            context: "morphism descent identity".into(),
        });
    }
    Ok((phi_tilde, phi_hat))
}

/// Given a global morphism whose twist image is exact, with an explicit
/// primitive, produces a global primitive: `psi_tilde = sum_j rho_j
/// (primitive)^{0,n-1}_j`, with `phi = d psi_tilde` verified exactly.
pub fn descend_coboundary(
    phi: &SheafMorphism,
    primitive: &HomCochain,
    source: &GlobalComplex,
    target: &GlobalComplex,
) -> Result<SheafMorphism> {
    let site = source.site().clone();
    if let Some(d) = validate_site(&site).into_iter().next() {
        return Err(Error::InvalidSite(d.to_string()));
    }
    let te = twist_object(source)?;
    let tf = twist_object(target)?;
    let t_phi = twist_morphism(phi, source, target)?;
    if t_phi.sub(&hom_diff(primitive, &te, &tf)?)?
        != HomCochain::zero(site.clone(), te.bundles().to_vec(), tf.bundles().to_vec())?
    {
        return Err(Error::DescentIdentity {
            context: "twist image is not the differential of the primitive".into(),
        });
    }
    let n = phi.shift_degree();
    let field = site.field();
    let mut mats: BTreeMap<(usize, i64), Matrix> = BTreeMap::new();
    for j in 0..site.n_opens() {
        let Some(p0) = primitive.component(&[j], n - 1) else {
            continue;
        };
        for &x in site.open(j) {
            for deg in degrees_of(source.bundle(), x) {
                let m = p0.mat_at(x, deg).scale(site.rho(j, x))?;
                if m.is_zero() {
                    continue;
                }
                let cur = match mats.remove(&(x, deg)) {
                    Some(c) => c.add(&m)?,
                    None => m,
                };
                mats.insert((x, deg), cur);
            }
        }
    }
    let mats = mats.into_iter().filter(|(_, m)| !m.is_zero()).collect();
    let psi_tilde = SheafMorphism::new(
        source.bundle().clone(),
        target.bundle().clone(),
        n - 1,
        field,
        mats,
    )?;
    let d_psi = global_hom_diff(&psi_tilde, source, target)?;
    if &d_psi != phi {
        return Err(Error::ResidualNonzero {
            context: "coboundary descent identity".into(),
        });
    }
    Ok(psi_tilde)
}

/// Anchor index used by the base case: the least open containing the point.
pub fn anchor_index(site: &Site, point: usize) -> Option<usize> {
    (0..site.n_opens()).find(|&i| site.open(i).contains(&point))
}
