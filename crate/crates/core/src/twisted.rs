//! Twisted complexes, global complexes, and the dg-category structure:
//! Maurer-Cartan residuals, the differential on morphisms, shift, mapping
//! cone, and the twisting functor.
//!
//! A twisted complex is a family of local graded bundles together with a
//! total-degree-one endomorphism cochain `a = sum a^{k,1-k}` whose
//! Maurer-Cartan residual `delta a + a.a` vanishes identically. A global
//! complex is one graded bundle on all points with a square-zero degree-one
//! differential.
//!
//! The mapping cone implemented here uses the block table
//! `[[(-1)^{k-1} a^{k,1-k}, 0], [phi^{k,-k}, b^{k,1-k}]]` on
//! `G^n = E^{n+1} (+) F^n`. This is the unique sign assignment for which the
//! residual of the cone vanishes exactly for *every* closed degree-zero
//! morphism under the composition and differential conventions of
//! [`crate::cochain`]; the runtime asserts the residual anyway, so no sign
//! drift can pass silently.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::bundle::{GradedBundle, SheafMorphism};
use crate::cochain::{compose, delta_hom, HomCochain};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::site::Site;

/// Local graded bundles plus a Maurer-Cartan twist.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistedComplex {
    site: Arc<Site>,
    bundles: Vec<GradedBundle>,
    twist: HomCochain,
}

impl TwistedComplex {
    /// Structural construction: the twist must be an endomorphism cochain of
    /// the bundle family, homogeneous of total degree one. The Maurer-Cartan
    /// equation itself is checked separately by [`TwistedComplex::validate`],
    /// so corrupted data can be represented and diagnosed.
    pub fn new(
        site: Arc<Site>,
        bundles: Vec<GradedBundle>,
        twist: HomCochain,
    ) -> Result<TwistedComplex> {
        if twist.source_family() != bundles.as_slice()
            || twist.target_family() != bundles.as_slice()
        {
            return Err(Error::FamilyMismatch);
        }
        if !twist.is_homogeneous_of_degree(1) {
            return Err(Error::WrongDegree { expected: 1 });
        }
        Ok(TwistedComplex {
            site,
            bundles,
            twist,
        })
    }

    pub fn zero(site: Arc<Site>) -> TwistedComplex {
        let bundles: Vec<GradedBundle> = (0..site.n_opens())
            .map(|i| GradedBundle::zero(site.open(i).clone()))
            .collect();
        let twist = HomCochain::zero(site.clone(), bundles.clone(), bundles.clone())
            .expect("zero family is well-formed");
        TwistedComplex {
            site,
            bundles,
            twist,
        }
    }

    pub fn site(&self) -> &Arc<Site> {
        &self.site
    }

    pub fn bundles(&self) -> &[GradedBundle] {
        &self.bundles
    }

    pub fn twist(&self) -> &HomCochain {
        &self.twist
    }

    /// The degree window over all opens, if any fiber is nonzero.
    pub fn window(&self) -> Option<(i64, i64)> {
        let mut acc: Option<(i64, i64)> = None;
        for b in &self.bundles {
            if let Some((lo, hi)) = b.window() {
                acc = Some(match acc {
                    Some((a, b2)) => (a.min(lo), b2.max(hi)),
                    None => (lo, hi),
                });
            }
        }
        acc
    }

    /// The Maurer-Cartan residual `delta a + a.a`.
    pub fn mc_residual(&self) -> HomCochain {
        mc_residual(self)
    }

    /// Errors with the first nonzero residual entry, if any.
    pub fn validate(&self) -> Result<()> {
        let r = self.mc_residual();
        match first_nonzero_entry(&r) {
            None => Ok(()),
            Some((tuple, q, point, degree)) => Err(Error::McViolation {
                p: tuple.len() - 1,
                tuple,
                q,
                point: self.site.point_name(point).to_string(),
                degree,
            }),
        }
    }
}

/// Locates one nonzero matrix entry of a cochain for diagnostics.
pub fn first_nonzero_entry(c: &HomCochain) -> Option<(Vec<usize>, i64, usize, i64)> {
    for ((tuple, q), m) in c.components() {
        for (&(x, n), mat) in m.mats() {
            if !mat.is_zero() {
                return Some((tuple.clone(), *q, x, n));
            }
        }
    }
    None
}

/// `delta a + a.a`, assembled componentwise.
pub fn mc_residual(t: &TwistedComplex) -> HomCochain {
    let d = delta_hom(&t.twist).expect("twist is structurally valid");
    let aa = compose(&t.twist, &t.twist).expect("endomorphism cochain composes with itself");
    d.add(&aa).expect("same families")
}

/// The differential `d phi = delta phi + b.phi - (-1)^{|phi|} phi.a` on a
/// morphism between twisted complexes, applied per homogeneous piece.
pub fn hom_diff(
    phi: &HomCochain,
    source: &TwistedComplex,
    target: &TwistedComplex,
) -> Result<HomCochain> {
    if phi.source_family() != source.bundles.as_slice()
        || phi.target_family() != target.bundles.as_slice()
    {
        return Err(Error::FamilyMismatch);
    }
    let mut out = delta_hom(phi)?;
    out = out.add(&compose(&target.twist, phi)?)?;
    for n in phi.total_degrees() {
        let piece = phi.homogeneous_part(n);
        let pa = compose(&piece, &source.twist)?;
        if n.rem_euclid(2) == 0 {
            out = out.sub(&pa)?;
        } else {
            out = out.add(&pa)?;
        }
    }
    Ok(out)
}

/// Shift of a twisted complex: bundles move down one degree and the piece
/// `a^{k,1-k}` is scaled by `(-1)^{k-1}`.
pub fn shift(t: &TwistedComplex) -> TwistedComplex {
    let bundles: Vec<GradedBundle> = t.bundles.iter().map(GradedBundle::shift).collect();
    let mut twist = HomCochain::zero(t.site.clone(), bundles.clone(), bundles.clone())
        .expect("shifted family is well-formed");
    for ((tuple, q), m) in t.twist.components() {
        let k = tuple.len() - 1;
        let sign = sign_scalar(&t.site, (k as i64) - 1);
        let piece = m.shift_reindex(&sign).expect("reindex keeps shapes");
        twist
            .insert(tuple.clone(), *q, piece)
            .expect("shifted component is well-formed");
    }
    TwistedComplex {
        site: t.site.clone(),
        bundles,
        twist,
    }
}

/// Shift of a morphism: `phi[1]^{p,q} = (-1)^q phi^{p,q}`, reindexed to the
/// shifted families.
pub fn shift_morphism(phi: &HomCochain) -> Result<HomCochain> {
    let source: Vec<GradedBundle> = phi
        .source_family()
        .iter()
        .map(GradedBundle::shift)
        .collect();
    let target: Vec<GradedBundle> = phi
        .target_family()
        .iter()
        .map(GradedBundle::shift)
        .collect();
    let site = phi.site().clone();
    let mut out = HomCochain::zero(site.clone(), source, target)?;
    for ((tuple, q), m) in phi.components() {
        let sign = sign_scalar(&site, *q);
        let piece = m.shift_reindex(&sign)?;
        out.insert(tuple.clone(), *q, piece)?;
    }
    Ok(out)
}

fn sign_scalar(site: &Site, exponent: i64) -> Scalar {
    if exponent.rem_euclid(2) == 0 {
        Scalar::one(site.field())
    } else {
        Scalar::one(site.field()).neg()
    }
}

/// Mapping cone of a closed degree-zero morphism `phi: E -> F`.
///
/// `G^n_i = E^{n+1}_i (+) F^n_i`, with twist blocks
/// `[[(-1)^{k-1} a, 0], [phi, b]]`. Closedness of `phi` is a precondition and
/// the residual of the result is asserted before returning.
pub fn cone(
    phi: &HomCochain,
    source: &TwistedComplex,
    target: &TwistedComplex,
) -> Result<TwistedComplex> {
    if !phi.is_homogeneous_of_degree(0) {
        return Err(Error::WrongDegree { expected: 0 });
    }
    if !hom_diff(phi, source, target)?.is_zero() {
        return Err(Error::NotClosed);
    }
    let site = source.site.clone();
    let field = site.field();

    // cone bundles: shifted source block first, target block second
    let bundles: Vec<GradedBundle> = (0..site.n_opens())
        .map(|i| {
            let mut dims: BTreeMap<(usize, i64), usize> = BTreeMap::new();
            for (&(x, n), &d) in source.bundles[i].dims() {
                *dims.entry((x, n - 1)).or_insert(0) += d;
            }
            for (&(x, n), &d) in target.bundles[i].dims() {
                *dims.entry((x, n)).or_insert(0) += d;
            }
            GradedBundle::new(site.open(i).clone(), dims).expect("cone dims live on the open")
        })
        .collect();

    let mut twist = HomCochain::zero(site.clone(), bundles.clone(), bundles.clone())?;

    // every tuple where a, phi or b stores a component contributes
    let mut keys: std::collections::BTreeSet<Vec<usize>> = std::collections::BTreeSet::new();
    for (t, _) in source.twist.components().keys() {
        keys.insert(t.clone());
    }
    for (t, _) in target.twist.components().keys() {
        keys.insert(t.clone());
    }
    for (t, _) in phi.components().keys() {
        keys.insert(t.clone());
    }

    for tuple in keys {
        let k = tuple.len() - 1;
        let q = 1 - k as i64;
        let supp = site.support(&tuple);
        if supp.is_empty() {
            continue;
        }
        let first = tuple[0];
        let last = *tuple.last().unwrap();
        let src_e = source.bundles[last].restrict(&supp)?;
        let src_f = target.bundles[last].restrict(&supp)?;
        let tgt_e = source.bundles[first].restrict(&supp)?;
        let tgt_f = target.bundles[first].restrict(&supp)?;
        let a_piece = source.twist.component(&tuple, q);
        let b_piece = target.twist.component(&tuple, q);
        let phi_piece = phi.component(&tuple, -(k as i64));
        if a_piece.is_none() && b_piece.is_none() && phi_piece.is_none() {
            continue;
        }
        let a_sign = sign_scalar(&site, (k as i64) - 1);

        let mut mats: BTreeMap<(usize, i64), Matrix> = BTreeMap::new();
        for &x in &supp {
            // source degrees n of the cone fiber E^{n+1} (+) F^n
            let mut degrees: std::collections::BTreeSet<i64> = std::collections::BTreeSet::new();
            for &(px, n) in src_e.dims().keys() {
                if px == x {
                    degrees.insert(n - 1);
                }
            }
            for &(px, n) in src_f.dims().keys() {
                if px == x {
                    degrees.insert(n);
                }
            }
            for n in degrees {
                let se = src_e.dim(x, n + 1);
                let sf = src_f.dim(x, n);
                let te = tgt_e.dim(x, n + q + 1);
                let tf = tgt_f.dim(x, n + q);
                let mut block = Matrix::zeros(field, te + tf, se + sf);
                if let Some(a) = a_piece {
                    let m = a.mat_at(x, n + 1).scale(&a_sign)?;
                    block.paste(0, 0, &m);
                }
                if let Some(p) = phi_piece {
                    block.paste(te, 0, &p.mat_at(x, n + 1));
                }
                if let Some(b) = b_piece {
                    block.paste(te, se, &b.mat_at(x, n));
                }
                if !block.is_zero() {
                    mats.insert((x, n), block);
                }
            }
        }
        let cone_src = bundles[last].restrict(&supp)?;
        let cone_tgt = bundles[first].restrict(&supp)?;
        let piece = SheafMorphism::new(cone_src, cone_tgt, q, field, mats)?;
        twist.insert(tuple, q, piece)?;
    }

    let out = TwistedComplex {
        site,
        bundles,
        twist,
    };
    if !out.mc_residual().is_zero() {
        return Err(Error::ResidualNonzero {
            context: "mapping cone".into(),
        });
    }
    Ok(out)
}

/// A bounded complex of global sections: one bundle on all points with a
/// square-zero differential of degree one.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalComplex {
    site: Arc<Site>,
    bundle: GradedBundle,
    diff: SheafMorphism,
}

impl GlobalComplex {
    pub fn new(
        site: Arc<Site>,
        bundle: GradedBundle,
        diff: SheafMorphism,
    ) -> Result<GlobalComplex> {
        if bundle.open() != &site.all_points() {
            return Err(Error::Invalid(
                "global complex bundle must live on all points".into(),
            ));
        }
        if diff.source() != &bundle || diff.target() != &bundle || diff.shift_degree() != 1 {
            return Err(Error::ShapeMismatch(
                "differential must be a degree-one endomorphism of the bundle".into(),
            ));
        }
        Ok(GlobalComplex { site, bundle, diff })
    }

    pub fn zero(site: Arc<Site>) -> GlobalComplex {
        let bundle = GradedBundle::zero(site.all_points());
        let diff = SheafMorphism::zero(bundle.clone(), bundle.clone(), 1, site.field())
            .expect("zero differential is well-formed");
        GlobalComplex { site, bundle, diff }
    }

    pub fn site(&self) -> &Arc<Site> {
        &self.site
    }

    pub fn bundle(&self) -> &GradedBundle {
        &self.bundle
    }

    pub fn diff(&self) -> &SheafMorphism {
        &self.diff
    }

    /// Checks `d o d = 0`, pointing at the first bad point and degree.
    pub fn validate(&self) -> Result<()> {
        let dd = self.diff.compose(&self.diff)?;
        if let Some((&(x, n), _)) = dd.mats().iter().next() {
            return Err(Error::NotSquareZero {
                point: self.site.point_name(x).to_string(),
                degree: n,
            });
        }
        Ok(())
    }

    pub fn window(&self) -> Option<(i64, i64)> {
        self.bundle.window()
    }
}

/// The differential on global morphisms:
/// `d f = d_F o f - (-1)^{|f|} f o d_E`.
pub fn global_hom_diff(
    f: &SheafMorphism,
    source: &GlobalComplex,
    target: &GlobalComplex,
) -> Result<SheafMorphism> {
    if f.source() != &source.bundle || f.target() != &target.bundle {
        return Err(Error::ShapeMismatch(
            "morphism endpoints do not match the complexes".into(),
        ));
    }
    let n = f.shift_degree();
    let left = target.diff.compose(f)?;
    let right = f.compose(&source.diff)?;
    if n.rem_euclid(2) == 0 {
        left.sub(&right)
    } else {
        left.add(&right)
    }
}

/// The twisting functor on objects: restrict to each open, take the
/// differential as the degree-one piece and identities as transitions.
pub fn twist_object(e: &GlobalComplex) -> Result<TwistedComplex> {
    e.validate()?;
    let site = e.site.clone();
    let bundles: Vec<GradedBundle> = (0..site.n_opens())
        .map(|i| e.bundle.restrict(site.open(i)))
        .collect::<Result<_>>()?;
    let mut twist = HomCochain::zero(site.clone(), bundles.clone(), bundles.clone())?;
    for i in 0..site.n_opens() {
        let d = e.diff.restrict(site.open(i))?;
        twist.insert(vec![i], 1, d)?;
    }
    for i in 0..site.n_opens() {
        for j in 0..site.n_opens() {
            let supp = site.support(&[i, j]);
            if supp.is_empty() {
                continue;
            }
            let id = SheafMorphism::identity(e.bundle.restrict(&supp)?, site.field());
            twist.insert(vec![i, j], 0, id)?;
        }
    }
    TwistedComplex::new(site, bundles, twist)
}

/// The twisting functor on morphisms: only the `(0, n)` piece, equal to the
/// restriction.
pub fn twist_morphism(
    f: &SheafMorphism,
    source: &GlobalComplex,
    target: &GlobalComplex,
) -> Result<HomCochain> {
    if f.source() != &source.bundle || f.target() != &target.bundle {
        return Err(Error::ShapeMismatch(
            "morphism endpoints do not match the complexes".into(),
        ));
    }
    let site = source.site.clone();
    let src_bundles: Vec<GradedBundle> = (0..site.n_opens())
        .map(|i| source.bundle.restrict(site.open(i)))
        .collect::<Result<_>>()?;
    let tgt_bundles: Vec<GradedBundle> = (0..site.n_opens())
        .map(|i| target.bundle.restrict(site.open(i)))
        .collect::<Result<_>>()?;
    let mut out = HomCochain::zero(site.clone(), src_bundles, tgt_bundles)?;
    for i in 0..site.n_opens() {
        let piece = f.restrict(site.open(i))?;
        out.insert(vec![i], f.shift_degree(), piece)?;
    }
    Ok(out)
}
