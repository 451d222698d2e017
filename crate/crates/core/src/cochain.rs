//! The bigraded Cech hom-algebra over the nerve.
//!
//! A hom cochain assigns to each index tuple `(i_0, ..., i_p)` with nonempty
//! intersection a sheaf morphism from the source bundle on the *last* index
//! to the target bundle on the *first* index, of some degree shift `q`. The
//! bidegree is `(p, q)` and the total degree is `p + q`; general elements are
//! finite sums of homogeneous pieces.
//!
//! Sign conventions, fixed once here and used literally everywhere above:
//!
//! * composition: `(u.v)^{p+r,q+s} = (-1)^{qr} u^{p,q} o v^{r,s}`, with both
//!   factors restricted to the common intersection and glued along the index
//!   shared by the two tuples;
//! * the action on sheaf cochains uses the same sign;
//! * the differential on hom cochains sums the *interior* faces only,
//!   `(delta u)_{i_0...i_{p+1}} = sum_{k=1}^{p} (-1)^k u_{... without i_k ...}`,
//!   while the differential on sheaf cochains keeps the last face as well,
//!   summing `k = 1, ..., p+1`.
//!
//! Under these conventions the composition is associative, the interior-face
//! differential squares to zero and satisfies the Leibniz rule, and the
//! module axiom holds for the action; the test suites check all of this
//! exactly, over both coefficient fields.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::bundle::{GradedBundle, SheafMorphism};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::site::Site;

/// Key of one stored homogeneous component: the index tuple and the sheaf
/// degree `q` of its morphism. The Cech degree is the tuple length minus one.
pub type CochainKey = (Vec<usize>, i64);

/// An element of the bigraded hom complex between two bundle families.
#[derive(Debug, Clone, PartialEq)]
pub struct HomCochain {
    site: Arc<Site>,
    source: Vec<GradedBundle>,
    target: Vec<GradedBundle>,
    comps: BTreeMap<CochainKey, SheafMorphism>,
}

impl HomCochain {
    pub fn zero(
        site: Arc<Site>,
        source: Vec<GradedBundle>,
        target: Vec<GradedBundle>,
    ) -> Result<HomCochain> {
        if source.len() != site.n_opens() || target.len() != site.n_opens() {
            return Err(Error::FamilyMismatch);
        }
        for (i, b) in source.iter().chain(target.iter()).enumerate() {
            let open = site.open(i % site.n_opens());
            if b.open() != open {
                return Err(Error::Invalid(format!(
                    "family bundle {} does not live on its open",
                    i % site.n_opens()
                )));
            }
        }
        Ok(HomCochain {
            site,
            source,
            target,
            comps: BTreeMap::new(),
        })
    }

    /// The identity endomorphism cochain: identity in bidegree `(0, 0)` on
    /// every singleton tuple, zero elsewhere.
    pub fn identity(site: Arc<Site>, family: Vec<GradedBundle>) -> Result<HomCochain> {
        let mut out = HomCochain::zero(site.clone(), family.clone(), family.clone())?;
        for (i, b) in family.iter().enumerate() {
            let id = SheafMorphism::identity(b.clone(), site.field());
            out.insert(vec![i], 0, id)?;
        }
        Ok(out)
    }

    pub fn site(&self) -> &Arc<Site> {
        &self.site
    }

    pub fn source_family(&self) -> &[GradedBundle] {
        &self.source
    }

    pub fn target_family(&self) -> &[GradedBundle] {
        &self.target
    }

    pub fn components(&self) -> &BTreeMap<CochainKey, SheafMorphism> {
        &self.comps
    }

    pub fn component(&self, tuple: &[usize], q: i64) -> Option<&SheafMorphism> {
        self.comps.get(&(tuple.to_vec(), q))
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// Total degrees `p + q` of the stored pieces.
    pub fn total_degrees(&self) -> BTreeSet<i64> {
        self.comps
            .keys()
            .map(|(t, q)| (t.len() as i64 - 1) + q)
            .collect()
    }

    /// True when every stored piece has the given total degree.
    pub fn is_homogeneous_of_degree(&self, n: i64) -> bool {
        self.total_degrees().iter().all(|&d| d == n)
    }

    /// The part of the cochain in one total degree.
    pub fn homogeneous_part(&self, n: i64) -> HomCochain {
        let comps = self
            .comps
            .iter()
            .filter(|((t, q), _)| (t.len() as i64 - 1) + q == n)
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        HomCochain {
            site: self.site.clone(),
            source: self.source.clone(),
            target: self.target.clone(),
            comps,
        }
    }

    /// Inserts (adds) a component, validating tuple support, orientation and
    /// shapes.
    pub fn insert(&mut self, tuple: Vec<usize>, q: i64, m: SheafMorphism) -> Result<()> {
        if tuple.is_empty() {
            return Err(Error::Invalid("empty index tuple".into()));
        }
        for &i in &tuple {
            if i >= self.site.n_opens() {
                return Err(Error::Invalid(format!("tuple references open {i}")));
            }
        }
        let supp = self.site.support(&tuple);
        if supp.is_empty() {
            // components over empty intersections are identically zero
            return if m.is_zero() {
                Ok(())
            } else {
                Err(Error::Invalid(
                    "nonzero component over an empty intersection".into(),
                ))
            };
        }
        let last = *tuple.last().unwrap();
        let first = tuple[0];
        let want_source = self.source[last].restrict(&supp)?;
        let want_target = self.target[first].restrict(&supp)?;
        if m.source() != &want_source || m.target() != &want_target {
            return Err(Error::ShapeMismatch(format!(
                "component at tuple {tuple:?} has wrong endpoint bundles"
            )));
        }
        if m.shift_degree() != q {
            return Err(Error::ShapeMismatch(format!(
                "component at tuple {tuple:?} has shift {} but degree {q}",
                m.shift_degree()
            )));
        }
        let key = (tuple, q);
        let cur = match self.comps.remove(&key) {
            Some(existing) => existing.add(&m)?,
            None => m,
        };
        if !cur.is_zero() {
            self.comps.insert(key, cur);
        }
        Ok(())
    }

    /// Builds a single matrix entry into a component morphism and inserts it.
    pub fn insert_matrix(
        &mut self,
        tuple: Vec<usize>,
        q: i64,
        point: usize,
        degree: i64,
        mat: Matrix,
    ) -> Result<()> {
        let supp = self.site.support(&tuple);
        if supp.is_empty() {
            return Err(Error::Invalid(
                "matrix component over an empty intersection".into(),
            ));
        }
        let last = *tuple.last().unwrap();
        let first = tuple[0];
        let source = self.source[last].restrict(&supp)?;
        let target = self.target[first].restrict(&supp)?;
        let m = SheafMorphism::new(
            source,
            target,
            q,
            self.site.field(),
            BTreeMap::from([((point, degree), mat)]),
        )?;
        self.insert(tuple, q, m)
    }

    pub fn add(&self, other: &HomCochain) -> Result<HomCochain> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::FamilyMismatch);
        }
        let mut out = self.clone();
        for ((t, q), m) in &other.comps {
            out.insert(t.clone(), *q, m.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &HomCochain) -> Result<HomCochain> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> HomCochain {
        let comps = self
            .comps
            .iter()
            .map(|(k, m)| (k.clone(), m.neg()))
            .collect();
        HomCochain {
            site: self.site.clone(),
            source: self.source.clone(),
            target: self.target.clone(),
            comps,
        }
    }

    pub fn scale(&self, c: &Scalar) -> Result<HomCochain> {
        let mut comps = BTreeMap::new();
        for (k, m) in &self.comps {
            let s = m.scale(c)?;
            if !s.is_zero() {
                comps.insert(k.clone(), s);
            }
        }
        Ok(HomCochain {
            site: self.site.clone(),
            source: self.source.clone(),
            target: self.target.clone(),
            comps,
        })
    }
}

/// Composition of hom cochains, `(u.v)^{p+r,q+s} = (-1)^{qr} u o v` glued
/// along the shared index.
pub fn compose(u: &HomCochain, v: &HomCochain) -> Result<HomCochain> {
    if u.source != v.target {
        return Err(Error::FamilyMismatch);
    }
    let mut out = HomCochain::zero(u.site.clone(), v.source.clone(), u.target.clone())?;
    for ((s_tuple, q), f) in &u.comps {
        for ((t_tuple, s_deg), g) in &v.comps {
            if s_tuple.last() != t_tuple.first() {
                continue;
            }
            let mut tuple = s_tuple.clone();
            tuple.extend_from_slice(&t_tuple[1..]);
            let supp = u.site.support(&tuple);
            if supp.is_empty() {
                continue;
            }
            let r = (t_tuple.len() - 1) as i64;
            let sign = if (q * r).rem_euclid(2) == 1 {
                Scalar::one(u.site.field()).neg()
            } else {
                Scalar::one(u.site.field())
            };
            let piece = f
                .restrict(&supp)?
                .compose(&g.restrict(&supp)?)?
                .scale(&sign)?;
            out.insert(tuple, q + s_deg, piece)?;
        }
    }
    Ok(out)
}

/// Interior-face Cech differential on hom cochains: faces `k = 1, ..., p`
/// of each output tuple, signed `(-1)^k`; the two outer faces are omitted.
pub fn delta_hom(u: &HomCochain) -> Result<HomCochain> {
    let mut out = HomCochain::zero(u.site.clone(), u.source.clone(), u.target.clone())?;
    for ((tuple, q), f) in &u.comps {
        let p = tuple.len() - 1;
        // contributions: insert one index at each interior position
        for pos in 1..=p {
            for j in 0..u.site.n_opens() {
                let mut t = tuple.clone();
                t.insert(pos, j);
                let supp = u.site.support(&t);
                if supp.is_empty() {
                    continue;
                }
                let sign = if pos % 2 == 1 {
                    Scalar::one(u.site.field()).neg()
                } else {
                    Scalar::one(u.site.field())
                };
                let piece = f.restrict(&supp)?.scale(&sign)?;
                out.insert(t, *q, piece)?;
            }
        }
    }
    Ok(out)
}

/// A cochain of sections: per tuple and sheaf degree, a column vector over
/// each point of the intersection, valued in the bundle on the first index.
#[derive(Debug, Clone, PartialEq)]
pub struct SheafCochain {
    site: Arc<Site>,
    family: Vec<GradedBundle>,
    comps: BTreeMap<CochainKey, BTreeMap<usize, Matrix>>,
}

impl SheafCochain {
    pub fn zero(site: Arc<Site>, family: Vec<GradedBundle>) -> Result<SheafCochain> {
        if family.len() != site.n_opens() {
            return Err(Error::FamilyMismatch);
        }
        Ok(SheafCochain {
            site,
            family,
            comps: BTreeMap::new(),
        })
    }

    pub fn family(&self) -> &[GradedBundle] {
        &self.family
    }

    pub fn components(&self) -> &BTreeMap<CochainKey, BTreeMap<usize, Matrix>> {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// Inserts (adds) the section value at one point of a tuple.
    pub fn insert_value(
        &mut self,
        tuple: Vec<usize>,
        q: i64,
        point: usize,
        col: Matrix,
    ) -> Result<()> {
        if tuple.is_empty() {
            return Err(Error::Invalid("empty index tuple".into()));
        }
        let supp = self.site.support(&tuple);
        if !supp.contains(&point) {
            return if col.is_zero() {
                Ok(())
            } else {
                Err(Error::Invalid(
                    "nonzero section value outside the intersection".into(),
                ))
            };
        }
        let first = tuple[0];
        let want_rows = self.family[first].dim(point, q);
        if col.rows() != want_rows || col.cols() != 1 {
            return Err(Error::ShapeMismatch(format!(
                "section value at tuple {tuple:?}, point {point}: got {}x{}, expected {want_rows}x1",
                col.rows(),
                col.cols()
            )));
        }
        let slot = self.comps.entry((tuple, q)).or_default();
        let cur = match slot.remove(&point) {
            Some(c) => c.add(&col)?,
            None => col,
        };
        if !cur.is_zero() {
            slot.insert(point, cur);
        }
        let key_empty = slot.is_empty();
        if key_empty {
            // drop fully-zero components
            let keys: Vec<CochainKey> = self
                .comps
                .iter()
                .filter(|(_, v)| v.is_empty())
                .map(|(k, _)| k.clone())
                .collect();
            for k in keys {
                self.comps.remove(&k);
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &SheafCochain) -> Result<SheafCochain> {
        if self.family != other.family {
            return Err(Error::FamilyMismatch);
        }
        let mut out = self.clone();
        for ((t, q), vals) in &other.comps {
            for (&x, col) in vals {
                out.insert_value(t.clone(), *q, x, col.clone())?;
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> SheafCochain {
        let comps = self
            .comps
            .iter()
            .map(|(k, vals)| (k.clone(), vals.iter().map(|(&x, c)| (x, c.neg())).collect()))
            .collect();
        SheafCochain {
            site: self.site.clone(),
            family: self.family.clone(),
            comps,
        }
    }
}

/// Evaluation of a hom cochain on a sheaf cochain, with the composition sign.
pub fn act(u: &HomCochain, c: &SheafCochain) -> Result<SheafCochain> {
    if u.source != c.family {
        return Err(Error::FamilyMismatch);
    }
    let mut out = SheafCochain::zero(u.site.clone(), u.target.clone())?;
    for ((s_tuple, q), f) in &u.comps {
        for ((t_tuple, s_deg), vals) in &c.comps {
            if s_tuple.last() != t_tuple.first() {
                continue;
            }
            let mut tuple = s_tuple.clone();
            tuple.extend_from_slice(&t_tuple[1..]);
            let supp = u.site.support(&tuple);
            if supp.is_empty() {
                continue;
            }
            let r = (t_tuple.len() - 1) as i64;
            let negate = (q * r).rem_euclid(2) == 1;
            for (&x, col) in vals {
                if !supp.contains(&x) {
                    continue;
                }
                let mut v = f.mat_at(x, *s_deg).mul(col)?;
                if negate {
                    v = v.neg();
                }
                out.insert_value(tuple.clone(), q + s_deg, x, v)?;
            }
        }
    }
    Ok(out)
}

/// Cech differential on sheaf cochains: faces `k = 1, ..., p+1`, signed
/// `(-1)^k`; only the zeroth face is omitted.
pub fn delta_sheaf(c: &SheafCochain) -> Result<SheafCochain> {
    let mut out = SheafCochain::zero(c.site.clone(), c.family.clone())?;
    for ((tuple, q), vals) in &c.comps {
        let len = tuple.len();
        for pos in 1..=len {
            for j in 0..c.site.n_opens() {
                let mut t = tuple.clone();
                t.insert(pos, j);
                let supp = c.site.support(&t);
                if supp.is_empty() {
                    continue;
                }
                let negate = pos % 2 == 1;
                for (&x, col) in vals {
                    if !supp.contains(&x) {
                        continue;
                    }
                    let v = if negate { col.neg() } else { col.clone() };
                    out.insert_value(t.clone(), *q, x, v)?;
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;
    use crate::scalar::FieldTag;

    const Q: FieldTag = FieldTag::Rational;

    fn one_point_site_three_opens() -> Arc<Site> {
        // a single point shared by three opens, so triple tuples exist
        Arc::new(
            Site::new(
                vec!["w".into()],
                vec![
                    BTreeSet::from([0]),
                    BTreeSet::from([0]),
                    BTreeSet::from([0]),
                ],
                Q,
                None,
            )
            .unwrap(),
        )
    }

    fn line_family(site: &Arc<Site>, degree: i64) -> Vec<GradedBundle> {
        (0..site.n_opens())
            .map(|i| {
                let open = site.open(i).clone();
                let dims = open.iter().map(|&x| ((x, degree), 1)).collect();
                GradedBundle::new(open, dims).unwrap()
            })
            .collect()
    }

    #[test]
    fn composition_sign_on_triple_overlap() {
        // u^{1,1} = [2], v^{1,0} = [3]  =>  (u.v)^{2,1} = [-6]
        let site = one_point_site_three_opens();
        let e = line_family(&site, 0);
        let f0 = line_family(&site, 0);
        let f1 = line_family(&site, 1);
        let mut v = HomCochain::zero(site.clone(), e.clone(), f0.clone()).unwrap();
        v.insert_matrix(vec![1, 2], 0, 0, 0, Matrix::from_int_rows(Q, &[&[3]]))
            .unwrap();
        let mut u = HomCochain::zero(site.clone(), f0, f1).unwrap();
        u.insert_matrix(vec![0, 1], 1, 0, 0, Matrix::from_int_rows(Q, &[&[2]]))
            .unwrap();
        let uv = compose(&u, &v).unwrap();
        let piece = uv.component(&[0, 1, 2], 1).unwrap();
        assert_eq!(piece.mat_at(0, 0), Matrix::from_int_rows(Q, &[&[-6]]));
    }

    #[test]
    fn compose_with_zero_is_zero() {
        let site = one_point_site_three_opens();
        let e = line_family(&site, 0);
        let mut u = HomCochain::zero(site.clone(), e.clone(), e.clone()).unwrap();
        u.insert_matrix(vec![0, 1], 0, 0, 0, Matrix::from_int_rows(Q, &[&[5]]))
            .unwrap();
        let z = HomCochain::zero(site.clone(), e.clone(), e.clone()).unwrap();
        assert!(compose(&u, &z).unwrap().is_zero());
    }

    #[test]
    fn compose_matches_pointwise_product_in_degree_zero() {
        // q = 0 pieces only: plain matrix products, against a direct oracle
        let site = one_point_site_three_opens();
        let e = line_family(&site, 0);
        let mut u = HomCochain::zero(site.clone(), e.clone(), e.clone()).unwrap();
        u.insert_matrix(vec![0, 1], 0, 0, 0, Matrix::from_int_rows(Q, &[&[4]]))
            .unwrap();
        let mut v = HomCochain::zero(site.clone(), e.clone(), e.clone()).unwrap();
        v.insert_matrix(vec![1, 2], 0, 0, 0, Matrix::from_int_rows(Q, &[&[7]]))
            .unwrap();
        let uv = compose(&u, &v).unwrap();
        let direct = Matrix::from_int_rows(Q, &[&[4]])
            .mul(&Matrix::from_int_rows(Q, &[&[7]]))
            .unwrap();
        assert_eq!(uv.component(&[0, 1, 2], 0).unwrap().mat_at(0, 0), direct);
    }

    #[test]
    fn delta_hom_kills_zero_cochains_and_is_vacuous_at_p0() {
        let site = one_point_site_three_opens();
        let e = line_family(&site, 0);
        let mut u = HomCochain::zero(site.clone(), e.clone(), e.clone()).unwrap();
        u.insert_matrix(vec![0], 0, 0, 0, Matrix::from_int_rows(Q, &[&[9]]))
            .unwrap();
        // p = 0: the interior-face sum is empty
        assert!(delta_hom(&u).unwrap().is_zero());
    }

    #[test]
    fn delta_hom_single_interior_face() {
        // p = 1, u_{i0 i2} = [5]  =>  (delta u)_{i0 i1 i2} = [-5]
        let site = one_point_site_three_opens();
        let e = line_family(&site, 0);
        let mut u = HomCochain::zero(site.clone(), e.clone(), e.clone()).unwrap();
        u.insert_matrix(vec![0, 2], 0, 0, 0, Matrix::from_int_rows(Q, &[&[5]]))
            .unwrap();
        let d = delta_hom(&u).unwrap();
        let piece = d.component(&[0, 1, 2], 0).unwrap();
        assert_eq!(piece.mat_at(0, 0), Matrix::from_int_rows(Q, &[&[-5]]));
    }

    #[test]
    fn delta_hom_is_linear() {
        let site = one_point_site_three_opens();
        let e = line_family(&site, 0);
        let mut u = HomCochain::zero(site.clone(), e.clone(), e.clone()).unwrap();
        u.insert_matrix(vec![0, 2], 0, 0, 0, Matrix::from_int_rows(Q, &[&[5]]))
            .unwrap();
        let mut v = HomCochain::zero(site.clone(), e.clone(), e.clone()).unwrap();
        v.insert_matrix(vec![1, 2], 0, 0, 0, Matrix::from_int_rows(Q, &[&[3]]))
            .unwrap();
        let lhs = delta_hom(&u.add(&v).unwrap()).unwrap();
        let rhs = delta_hom(&u).unwrap().add(&delta_hom(&v).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn delta_hom_squares_to_zero() {
        let site = one_point_site_three_opens();
        let e = line_family(&site, 0);
        let mut u = HomCochain::zero(site.clone(), e.clone(), e.clone()).unwrap();
        u.insert_matrix(vec![0, 1], 0, 0, 0, Matrix::from_int_rows(Q, &[&[2]]))
            .unwrap();
        u.insert_matrix(vec![2, 0], 0, 0, 0, Matrix::from_int_rows(Q, &[&[3]]))
            .unwrap();
        let dd = delta_hom(&delta_hom(&u).unwrap()).unwrap();
        assert!(dd.is_zero());
    }

    #[test]
    fn delta_sheaf_small_cases() {
        let site = one_point_site_three_opens();
        let e = line_family(&site, 0);
        let mut c = SheafCochain::zero(site.clone(), e.clone()).unwrap();
        c.insert_value(vec![0], 0, 0, Matrix::from_int_rows(Q, &[&[1]]))
            .unwrap();
        // p = 0: (delta c)_{i0 i1} = -c_{i0}|
        let d = delta_sheaf(&c).unwrap();
        let vals = d.components().get(&(vec![0, 1], 0)).unwrap();
        assert_eq!(vals.get(&0).unwrap(), &Matrix::from_int_rows(Q, &[&[-1]]));

        // p = 1: (delta c)_{i0 i1 i2} = -c_{i0 i2}| + c_{i0 i1}|
        let mut c1 = SheafCochain::zero(site.clone(), e.clone()).unwrap();
        c1.insert_value(vec![0, 2], 0, 0, Matrix::from_int_rows(Q, &[&[1]]))
            .unwrap();
        let d1 = delta_sheaf(&c1).unwrap();
        // face removing position 1 lands on (0,1,2) with sign -1
        let vals1 = d1.components().get(&(vec![0, 1, 2], 0)).unwrap();
        assert_eq!(vals1.get(&0).unwrap(), &Matrix::from_int_rows(Q, &[&[-1]]));
        // face appending at the end: (0,2,j) with sign +1
        let vals2 = d1.components().get(&(vec![0, 2, 1], 0)).unwrap();
        assert_eq!(vals2.get(&0).unwrap(), &Matrix::from_int_rows(Q, &[&[1]]));

        let z = SheafCochain::zero(site.clone(), e).unwrap();
        assert!(delta_sheaf(&z).unwrap().is_zero());
    }

    #[test]
    fn identity_cochain_acts_trivially() {
        let site = one_point_site_three_opens();
        let e = line_family(&site, 0);
        let id = HomCochain::identity(site.clone(), e.clone()).unwrap();
        let mut c = SheafCochain::zero(site.clone(), e.clone()).unwrap();
        c.insert_value(vec![1, 2], 0, 0, Matrix::from_int_rows(Q, &[&[4]]))
            .unwrap();
        assert_eq!(act(&id, &c).unwrap(), c);
        let z = SheafCochain::zero(site.clone(), e.clone()).unwrap();
        assert!(act(&id, &z).unwrap().is_zero());
    }

    #[test]
    fn compose_and_act_reject_family_mismatch() {
        let site = one_point_site_three_opens();
        let e = line_family(&site, 0);
        let f = line_family(&site, 1);
        let u = HomCochain::zero(site.clone(), e.clone(), e.clone()).unwrap();
        let v = HomCochain::zero(site.clone(), f.clone(), f.clone()).unwrap();
        assert_eq!(compose(&u, &v), Err(crate::error::Error::FamilyMismatch));
        let c = SheafCochain::zero(site.clone(), f).unwrap();
        assert_eq!(act(&u, &c), Err(crate::error::Error::FamilyMismatch));
    }

    #[test]
    fn empty_intersection_components_are_rejected() {
        let site = Arc::new(
            Site::new(
                vec!["a".into(), "b".into()],
                vec![BTreeSet::from([0]), BTreeSet::from([1])],
                Q,
                None,
            )
            .unwrap(),
        );
        let family: Vec<GradedBundle> = (0..2)
            .map(|i| {
                let open = site.open(i).clone();
                let dims = open.iter().map(|&x| ((x, 0i64), 1)).collect();
                GradedBundle::new(open, dims).unwrap()
            })
            .collect();
        let mut u = HomCochain::zero(site.clone(), family.clone(), family).unwrap();
        let err = u.insert_matrix(vec![0, 1], 0, 0, 0, Matrix::from_int_rows(Q, &[&[1]]));
        assert!(err.is_err());
    }
}
