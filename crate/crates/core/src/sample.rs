//! Seeded random generators for sites, complexes, morphisms and descent
//! data. Test suites and benchmarks drive everything through these, with
//! fixed seeds, so failures reproduce exactly.
//!
//! Global complexes are built per point from elementary pieces (identity
//! segments and singletons) conjugated by random invertible matrices, so the
//! generator knows the homology of its output by construction. Chain maps
//! are sampled uniformly from the exact solution space of the chain-map
//! equations via a kernel computation. Closed morphism cochains are sampled
//! as a twisted chain map plus the differential of a random cochain, which
//! reaches every cohomology class.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::bundle::{GradedBundle, SheafMorphism};
use crate::cochain::HomCochain;
use crate::error::Result;
use crate::globalize::DescentDataModQ;
use crate::matrix::Matrix;
use crate::scalar::{FieldTag, Scalar};
use crate::site::{PartitionOfUnity, Site};
use crate::twisted::{
    cone, hom_diff, shift, twist_morphism, twist_object, GlobalComplex, TwistedComplex,
};

/// Deterministic generator with a fixed seed.
pub fn small_rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Size bounds for sampled data.
#[derive(Debug, Clone, Copy)]
pub struct SampleConfig {
    pub max_points: usize,
    pub max_opens: usize,
    pub degree_lo: i64,
    pub degree_hi: i64,
    pub max_rank: usize,
    pub field: FieldTag,
}

pub fn sample_scalar(rng: &mut StdRng, field: FieldTag) -> Scalar {
    match field {
        FieldTag::Rational => Scalar::from_integer(rng.random_range(-2..=2), field),
        FieldTag::Prime(p) => Scalar::from_integer(rng.random_range(0..p as i64), field),
    }
}

pub fn sample_nonzero_scalar(rng: &mut StdRng, field: FieldTag) -> Scalar {
    loop {
        let s = sample_scalar(rng, field);
        if !s.is_zero() {
            return s;
        }
    }
}

pub fn sample_matrix(rng: &mut StdRng, field: FieldTag, rows: usize, cols: usize) -> Matrix {
    let mut m = Matrix::zeros(field, rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, sample_scalar(rng, field));
        }
    }
    m
}

pub fn sample_invertible(rng: &mut StdRng, field: FieldTag, n: usize) -> Matrix {
    loop {
        let m = sample_matrix(rng, field, n, n);
        if m.rank() == n {
            return m;
        }
    }
}

/// A random site: covered points, nonempty opens, least-index partition.
pub fn sample_site(rng: &mut StdRng, cfg: &SampleConfig) -> Result<Arc<Site>> {
    let n_points = rng.random_range(1..=cfg.max_points);
    let n_opens = rng.random_range(1..=cfg.max_opens);
    let points: Vec<String> = (0..n_points).map(|i| format!("p{i}")).collect();
    let mut opens: Vec<BTreeSet<usize>> = Vec::new();
    for _ in 0..n_opens {
        let mut open = BTreeSet::new();
        for x in 0..n_points {
            if rng.random_bool(0.6) {
                open.insert(x);
            }
        }
        if open.is_empty() {
            open.insert(rng.random_range(0..n_points));
        }
        opens.push(open);
    }
    for x in 0..n_points {
        if !opens.iter().any(|u| u.contains(&x)) {
            let k = rng.random_range(0..opens.len());
            opens[k].insert(x);
        }
    }
    Ok(Arc::new(Site::new(points, opens, cfg.field, None)?))
}

/// A random partition of unity for the given site's cover: random weights
/// inside each open, corrected on the least open so the sums are one.
pub fn sample_partition(rng: &mut StdRng, site: &Site) -> PartitionOfUnity {
    let field = site.field();
    let mut rho = vec![vec![Scalar::zero(field); site.n_points()]; site.n_opens()];
    for x in 0..site.n_points() {
        let owners: Vec<usize> = (0..site.n_opens())
            .filter(|&i| site.open(i).contains(&x))
            .collect();
        let mut sum = Scalar::zero(field);
        for &i in &owners[1..] {
            let v = sample_scalar(rng, field);
            sum = sum.add(&v);
            rho[i][x] = v;
        }
        rho[owners[0]][x] = Scalar::one(field).sub(&sum);
    }
    PartitionOfUnity::new(rho)
}

/// A random global complex plus its homology table, known by construction:
/// per point, a sum of identity segments and singletons, conjugated by
/// random invertible matrices in every degree.
pub fn sample_global_complex_with_homology(
    rng: &mut StdRng,
    site: &Arc<Site>,
    cfg: &SampleConfig,
) -> (GlobalComplex, BTreeMap<(usize, i64), usize>) {
    let field = site.field();
    let (lo, hi) = (cfg.degree_lo, cfg.degree_hi);
    let mut dims: BTreeMap<(usize, i64), usize> = BTreeMap::new();
    let mut mats: BTreeMap<(usize, i64), Matrix> = BTreeMap::new();
    let mut homology: BTreeMap<(usize, i64), usize> = BTreeMap::new();

    for x in 0..site.n_points() {
        // segments starting at degree d, and singletons at degree d
        let mut segs: BTreeMap<i64, usize> = BTreeMap::new();
        let mut singles: BTreeMap<i64, usize> = BTreeMap::new();
        for d in lo..=hi {
            let prev = segs.get(&(d - 1)).copied().unwrap_or(0);
            let budget = cfg.max_rank.saturating_sub(prev);
            let s = if d < hi && budget >= 2 && rng.random_bool(0.5) {
                1
            } else {
                0
            };
            let t_budget = budget.saturating_sub(s);
            let t = if t_budget >= 1 && rng.random_bool(0.5) {
                1
            } else {
                0
            };
            segs.insert(d, s);
            singles.insert(d, t);
        }
        let dim_at = |d: i64| -> usize {
            singles.get(&d).copied().unwrap_or(0)
                + segs.get(&d).copied().unwrap_or(0)
                + segs.get(&(d - 1)).copied().unwrap_or(0)
        };
        let mut basis_change: BTreeMap<i64, (Matrix, Matrix)> = BTreeMap::new();
        for d in lo..=hi {
            let n = dim_at(d);
            if n > 0 {
                let p = sample_invertible(rng, field, n);
                let p_inv = p.inverse().expect("square").expect("invertible");
                basis_change.insert(d, (p, p_inv));
            }
        }
        for d in lo..=hi {
            let n = dim_at(d);
            if n == 0 {
                continue;
            }
            dims.insert((x, d), n);
            let t = singles.get(&d).copied().unwrap_or(0);
            if t > 0 {
                homology.insert((x, d), t);
            }
            // elementary differential: starts at d map onto ends at d+1
            let rows = dim_at(d + 1);
            if rows == 0 {
                continue;
            }
            let s_d = segs.get(&d).copied().unwrap_or(0);
            if s_d == 0 {
                continue;
            }
            let mut elem = Matrix::zeros(field, rows, n);
            let t_next = singles.get(&(d + 1)).copied().unwrap_or(0);
            let s_next = segs.get(&(d + 1)).copied().unwrap_or(0);
            for sigma in 0..s_d {
                elem.set(t_next + s_next + sigma, t + sigma, Scalar::one(field));
            }
            let (p_next, _) = basis_change.get(&(d + 1)).expect("dim > 0");
            let (_, p_inv) = basis_change.get(&d).expect("dim > 0");
            let m = p_next.mul(&elem).unwrap().mul(p_inv).unwrap();
            if !m.is_zero() {
                mats.insert((x, d), m);
            }
        }
    }

    let bundle = GradedBundle::new(site.all_points(), dims).expect("dims on all points");
    let diff = SheafMorphism::new(bundle.clone(), bundle.clone(), 1, field, mats)
        .expect("conjugated elementary differential is well-formed");
    let e = GlobalComplex::new(site.clone(), bundle, diff).expect("structurally valid");
    debug_assert!(e.validate().is_ok());
    (e, homology)
}

pub fn sample_global_complex(
    rng: &mut StdRng,
    site: &Arc<Site>,
    cfg: &SampleConfig,
) -> GlobalComplex {
    sample_global_complex_with_homology(rng, site, cfg).0
}

/// A uniformly random degree-`n` chain map `f : E -> F`, i.e. an exact
/// solution of `d_F f = (-1)^n f d_E`, sampled from the kernel of the
/// constraint system point by point.
pub fn sample_chain_map(
    rng: &mut StdRng,
    e: &GlobalComplex,
    f: &GlobalComplex,
    degree: i64,
) -> SheafMorphism {
    let site = e.site().clone();
    let field = site.field();
    let mut mats: BTreeMap<(usize, i64), Matrix> = BTreeMap::new();
    let window = e.bundle().window();
    for x in 0..site.n_points() {
        let Some((lo, hi)) = window else { break };
        // variable layout: entries of f_d for d in the window
        let mut offsets: BTreeMap<i64, usize> = BTreeMap::new();
        let mut total = 0usize;
        for d in lo..=hi {
            offsets.insert(d, total);
            total += f.bundle().dim(x, d + degree) * e.bundle().dim(x, d);
        }
        if total == 0 {
            continue;
        }
        let var =
            |d: i64, r: usize, c: usize| -> usize { offsets[&d] + r * e.bundle().dim(x, d) + c };
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        for d in lo..=hi {
            let df = f.diff().mat_at(x, d + degree);
            let de = e.diff().mat_at(x, d);
            let out_rows = f.bundle().dim(x, d + degree + 1);
            let in_cols = e.bundle().dim(x, d);
            for i in 0..out_rows {
                for j in 0..in_cols {
                    let mut row = vec![Scalar::zero(field); total];
                    // d_F f_d contribution
                    for k in 0..f.bundle().dim(x, d + degree) {
                        let coeff = df.get(i, k);
                        if !coeff.is_zero() {
                            let v = var(d, k, j);
                            row[v] = row[v].add(coeff);
                        }
                    }
                    // -(-1)^degree f_{d+1} d_E contribution
                    if d < hi {
                        for l in 0..e.bundle().dim(x, d + 1) {
                            let coeff = de.get(l, j);
                            if !coeff.is_zero() {
                                let signed = if degree.rem_euclid(2) == 0 {
                                    coeff.neg()
                                } else {
                                    coeff.clone()
                                };
                                let v = var(d + 1, i, l);
                                row[v] = row[v].add(&signed);
                            }
                        }
                    }
                    if row.iter().any(|s| !s.is_zero()) {
                        rows.push(row);
                    }
                }
            }
        }
        let constraint = if rows.is_empty() {
            Matrix::zeros(field, 0, total)
        } else {
            Matrix::from_rows(field, rows).expect("uniform rows")
        };
        let basis = constraint.kernel_basis();
        let coeffs = sample_matrix(rng, field, basis.cols(), 1);
        let solution = basis.mul(&coeffs).expect("shapes agree");
        for d in lo..=hi {
            let r = f.bundle().dim(x, d + degree);
            let c = e.bundle().dim(x, d);
            if r == 0 || c == 0 {
                continue;
            }
            let mut m = Matrix::zeros(field, r, c);
            for i in 0..r {
                for j in 0..c {
                    m.set(i, j, solution.get(var(d, i, j), 0).clone());
                }
            }
            if !m.is_zero() {
                mats.insert((x, d), m);
            }
        }
    }
    SheafMorphism::new(e.bundle().clone(), f.bundle().clone(), degree, field, mats)
        .expect("solution of the chain-map system is well-formed")
}

/// A random, unconstrained hom cochain of the given total degree with Cech
/// degrees up to `max_p`.
pub fn sample_cochain(
    rng: &mut StdRng,
    site: &Arc<Site>,
    source: &[GradedBundle],
    target: &[GradedBundle],
    total_degree: i64,
    max_p: usize,
    density: f64,
) -> HomCochain {
    let mut out = HomCochain::zero(site.clone(), source.to_vec(), target.to_vec())
        .expect("families are well-formed");
    for p in 0..=max_p {
        let q = total_degree - p as i64;
        for t in site.tuples_of_len(p + 1) {
            if !rng.random_bool(density) {
                continue;
            }
            let src = &source[*t.indices.last().unwrap()];
            let tgt = &target[t.indices[0]];
            for &x in &t.support {
                let degs: BTreeSet<i64> = src
                    .dims()
                    .keys()
                    .filter(|&&(px, _)| px == x)
                    .map(|&(_, n)| n)
                    .collect();
                for deg in degs {
                    let rows = tgt.dim(x, deg + q);
                    let cols = src.dim(x, deg);
                    if rows == 0 || cols == 0 {
                        continue;
                    }
                    let m = sample_matrix(rng, site.field(), rows, cols);
                    if m.is_zero() {
                        continue;
                    }
                    out.insert_matrix(t.indices.clone(), q, x, deg, m)
                        .expect("sampled component is well-formed");
                }
            }
        }
    }
    out
}

/// A random sheaf cochain with components up to the given Cech degree.
pub fn sample_sheaf_cochain(
    rng: &mut StdRng,
    site: &Arc<Site>,
    family: &[GradedBundle],
    max_p: usize,
    density: f64,
) -> crate::cochain::SheafCochain {
    let mut out = crate::cochain::SheafCochain::zero(site.clone(), family.to_vec())
        .expect("family is well-formed");
    for p in 0..=max_p {
        for t in site.tuples_of_len(p + 1) {
            if !rng.random_bool(density) {
                continue;
            }
            let first = &family[t.indices[0]];
            for &x in &t.support {
                let degs: BTreeSet<i64> = first
                    .dims()
                    .keys()
                    .filter(|&&(px, _)| px == x)
                    .map(|&(_, n)| n)
                    .collect();
                for q in degs {
                    let rows = first.dim(x, q);
                    if rows == 0 {
                        continue;
                    }
                    let col = sample_matrix(rng, site.field(), rows, 1);
                    if col.is_zero() {
                        continue;
                    }
                    out.insert_value(t.indices.clone(), q, x, col)
                        .expect("sampled section is well-formed");
                }
            }
        }
    }
    out
}

/// A random homogeneous cochain of one bidegree.
pub fn sample_homogeneous_cochain(
    rng: &mut StdRng,
    site: &Arc<Site>,
    source: &[GradedBundle],
    target: &[GradedBundle],
    p: usize,
    q: i64,
    density: f64,
) -> HomCochain {
    let mut out = HomCochain::zero(site.clone(), source.to_vec(), target.to_vec())
        .expect("families are well-formed");
    for t in site.tuples_of_len(p + 1) {
        if !rng.random_bool(density) {
            continue;
        }
        let src = &source[*t.indices.last().unwrap()];
        let tgt = &target[t.indices[0]];
        for &x in &t.support {
            let degs: BTreeSet<i64> = src
                .dims()
                .keys()
                .filter(|&&(px, _)| px == x)
                .map(|&(_, n)| n)
                .collect();
            for deg in degs {
                let rows = tgt.dim(x, deg + q);
                let cols = src.dim(x, deg);
                if rows == 0 || cols == 0 {
                    continue;
                }
                let m = sample_matrix(rng, site.field(), rows, cols);
                if m.is_zero() {
                    continue;
                }
                out.insert_matrix(t.indices.clone(), q, x, deg, m)
                    .expect("sampled component is well-formed");
            }
        }
    }
    out
}

/// A random *closed* degree-`n` cochain between two twist images: the twist
/// of a chain map plus the differential of a random cochain.
pub fn sample_closed_morphism(
    rng: &mut StdRng,
    e: &GlobalComplex,
    f: &GlobalComplex,
    degree: i64,
) -> HomCochain {
    let chain = sample_chain_map(rng, e, f, degree);
    let te = twist_object(e).expect("valid complex");
    let tf = twist_object(f).expect("valid complex");
    let t = twist_morphism(&chain, e, f).expect("chain map twists");
    let eta = sample_cochain(
        rng,
        e.site(),
        te.bundles(),
        tf.bundles(),
        degree - 1,
        2,
        0.6,
    );
    let d_eta = hom_diff(&eta, &te, &tf).expect("families match");
    t.add(&d_eta).expect("same families")
}

/// A random valid twisted complex: a twist image, a shift of one, or the
/// cone of a random closed degree-zero morphism between twist images.
pub fn sample_twisted(
    rng: &mut StdRng,
    site: &Arc<Site>,
    cfg: &SampleConfig,
    depth: usize,
) -> TwistedComplex {
    let choice = if depth == 0 {
        0
    } else {
        rng.random_range(0..3)
    };
    match choice {
        1 => shift(&sample_twisted(rng, site, cfg, depth - 1)),
        2 => {
            let e = sample_global_complex(rng, site, cfg);
            let f = sample_global_complex(rng, site, cfg);
            let phi = sample_closed_morphism(rng, &e, &f, 0);
            let te = twist_object(&e).expect("valid");
            let tf = twist_object(&f).expect("valid");
            cone(&phi, &te, &tf).expect("cone of a closed morphism")
        }
        _ => twist_object(&sample_global_complex(rng, site, cfg)).expect("valid"),
    }
}

/// Random descent data modulo Q, valid by construction: honest transition
/// cocycles for two auxiliary bundles, a global map between them, and a
/// random perturbation of the transitions through it.
pub fn sample_descent_data(rng: &mut StdRng, site: &Arc<Site>, max_rank: usize) -> DescentDataModQ {
    let field = site.field();
    let rp = rng.random_range(1..=max_rank);
    let rq = rng.random_range(1..=max_rank);
    let n = site.n_opens();

    // trivialization frames per open and point
    let mut gp: BTreeMap<(usize, usize), Matrix> = BTreeMap::new();
    let mut gq: BTreeMap<(usize, usize), Matrix> = BTreeMap::new();
    for i in 0..n {
        for &x in site.open(i) {
            gp.insert((i, x), sample_invertible(rng, field, rp));
            gq.insert((i, x), sample_invertible(rng, field, rq));
        }
    }
    let tau_global: BTreeMap<usize, Matrix> = (0..site.n_points())
        .map(|x| (x, sample_matrix(rng, field, rp, rq)))
        .collect();
    // perturbations mu_{ji} (zero on the diagonal)
    let mut mu: BTreeMap<(usize, usize, usize), Matrix> = BTreeMap::new();
    for j in 0..n {
        for i in 0..n {
            if i == j {
                continue;
            }
            for &x in &site.support(&[j, i]) {
                mu.insert((j, i, x), sample_matrix(rng, field, rq, rp));
            }
        }
    }
    let mu_at = |j: usize, i: usize, x: usize| -> Matrix {
        mu.get(&(j, i, x))
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(field, rq, rp))
    };
    let theta0 = |j: usize, i: usize, x: usize| -> Matrix {
        gp[&(j, x)]
            .mul(&gp[&(i, x)].inverse().unwrap().unwrap())
            .unwrap()
    };
    let sigma0 = |k: usize, j: usize, x: usize| -> Matrix {
        gq[&(k, x)]
            .mul(&gq[&(j, x)].inverse().unwrap().unwrap())
            .unwrap()
    };
    let tau_at = |i: usize, x: usize| -> Matrix {
        gp[&(i, x)]
            .mul(&tau_global[&x])
            .unwrap()
            .mul(&gq[&(i, x)].inverse().unwrap().unwrap())
            .unwrap()
    };

    let rank_bundle = |open: &BTreeSet<usize>, rank: usize| -> GradedBundle {
        let dims = open.iter().map(|&x| ((x, 0i64), rank)).collect();
        GradedBundle::new(open.clone(), dims).expect("constant-rank bundle")
    };
    let p_bundles: Vec<GradedBundle> = (0..n).map(|i| rank_bundle(site.open(i), rp)).collect();
    let q_bundles: Vec<GradedBundle> = (0..n).map(|i| rank_bundle(site.open(i), rq)).collect();

    let mut tau = Vec::new();
    for i in 0..n {
        let mats = site
            .open(i)
            .iter()
            .map(|&x| ((x, 0i64), tau_at(i, x)))
            .collect();
        tau.push(
            SheafMorphism::new(q_bundles[i].clone(), p_bundles[i].clone(), 0, field, mats)
                .expect("tau shapes"),
        );
    }

    let mut theta = BTreeMap::new();
    for j in 0..n {
        for i in 0..n {
            let supp = site.support(&[j, i]);
            if supp.is_empty() {
                continue;
            }
            let mats = supp
                .iter()
                .map(|&x| {
                    let base = theta0(j, i, x);
                    let m = if i == j {
                        base
                    } else {
                        base.add(&tau_at(j, x).mul(&mu_at(j, i, x)).unwrap())
                            .unwrap()
                    };
                    ((x, 0i64), m)
                })
                .collect();
            theta.insert(
                (j, i),
                SheafMorphism::new(
                    p_bundles[i].restrict(&supp).unwrap(),
                    p_bundles[j].restrict(&supp).unwrap(),
                    0,
                    field,
                    mats,
                )
                .expect("theta shapes"),
            );
        }
    }

    let mut vartheta = BTreeMap::new();
    for k in 0..n {
        for j in 0..n {
            for i in 0..n {
                let supp = site.support(&[k, j, i]);
                if supp.is_empty() {
                    continue;
                }
                let mut mats = BTreeMap::new();
                for &x in &supp {
                    // mu_{ki} - sigma0_{kj} mu_{ji} - mu_{kj} theta0_{ji}
                    //         - mu_{kj} tau_j mu_{ji}
                    let a = mu_at(k, i, x);
                    let b = sigma0(k, j, x).mul(&mu_at(j, i, x)).unwrap();
                    let c = mu_at(k, j, x).mul(&theta0(j, i, x)).unwrap();
                    let d = mu_at(k, j, x)
                        .mul(&tau_at(j, x))
                        .unwrap()
                        .mul(&mu_at(j, i, x))
                        .unwrap();
                    let m = a.sub(&b).unwrap().sub(&c).unwrap().sub(&d).unwrap();
                    if !m.is_zero() {
                        mats.insert((x, 0i64), m);
                    }
                }
                let m = SheafMorphism::new(
                    p_bundles[i].restrict(&supp).unwrap(),
                    q_bundles[k].restrict(&supp).unwrap(),
                    0,
                    field,
                    mats,
                )
                .expect("vartheta shapes");
                if !m.is_zero() {
                    vartheta.insert((k, j, i), m);
                }
            }
        }
    }

    DescentDataModQ::new(site.clone(), p_bundles, q_bundles, tau, theta, vartheta)
        .expect("constructed data is well-formed")
}
