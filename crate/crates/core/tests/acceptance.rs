//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its case counts. Every check is an exact algebraic identity; there are no
//! tolerances anywhere.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use std::time::Instant;

use rand::Rng;

use descent_core::sample::{
    sample_closed_morphism, sample_cochain, sample_global_complex, sample_homogeneous_cochain,
    sample_matrix, sample_nonzero_scalar, sample_sheaf_cochain, sample_site, sample_twisted,
    small_rng, SampleConfig,
};
use descent_core::{
    act, compose, cone, delta_hom, descend_coboundary, descend_morphism, global_hom_diff,
    globalize, hom_complex_cohomology_global, hom_complex_cohomology_twisted, hom_diff,
    local_homology, shift, twist_morphism, twist_object, FieldTag, GradedBundle, HomCochain,
    Matrix, Scalar, SheafMorphism, Site, TwistedComplex,
};

const F7: FieldTag = FieldTag::Prime(7);

fn cfg(field: FieldTag) -> SampleConfig {
    SampleConfig {
        max_points: 4,
        max_opens: 3,
        degree_lo: 0,
        degree_hi: 2,
        max_rank: 3,
        field,
    }
}

fn small(field: FieldTag) -> SampleConfig {
    SampleConfig {
        max_points: 3,
        max_opens: 2,
        degree_lo: 0,
        degree_hi: 1,
        max_rank: 2,
        field,
    }
}

#[test]
fn criterion_1_dg_algebra_axioms() {
    let start = Instant::now();
    let mut rng = small_rng(101);
    let mut cochains = 0usize;

    for field in [FieldTag::Rational, F7] {
        let c = cfg(field);

        // associativity of the composition
        for _ in 0..40 {
            let site = sample_site(&mut rng, &c).unwrap();
            let fam: Vec<Vec<GradedBundle>> = (0..4)
                .map(|_| {
                    twist_object(&sample_global_complex(&mut rng, &site, &c))
                        .unwrap()
                        .bundles()
                        .to_vec()
                })
                .collect();
            let (p1, q1) = (rng.random_range(0..=2), rng.random_range(-2..=2));
            let (p2, q2) = (rng.random_range(0..=2), rng.random_range(-2..=2));
            let (p3, q3) = (rng.random_range(0..=2), rng.random_range(-2..=2));
            let u = sample_homogeneous_cochain(&mut rng, &site, &fam[2], &fam[3], p1, q1, 0.7);
            let v = sample_homogeneous_cochain(&mut rng, &site, &fam[1], &fam[2], p2, q2, 0.7);
            let w = sample_homogeneous_cochain(&mut rng, &site, &fam[0], &fam[1], p3, q3, 0.7);
            cochains += 3;
            let lhs = compose(&compose(&u, &v).unwrap(), &w).unwrap();
            let rhs = compose(&u, &compose(&v, &w).unwrap()).unwrap();
            assert_eq!(lhs, rhs, "associativity failed over {field}");
        }

        // Leibniz rule for the interior-face differential
        for _ in 0..35 {
            let site = sample_site(&mut rng, &c).unwrap();
            let e = twist_object(&sample_global_complex(&mut rng, &site, &c)).unwrap();
            let f = twist_object(&sample_global_complex(&mut rng, &site, &c)).unwrap();
            let g = twist_object(&sample_global_complex(&mut rng, &site, &c)).unwrap();
            let (p, q) = (rng.random_range(0..=2), rng.random_range(-2..=2));
            let u =
                sample_homogeneous_cochain(&mut rng, &site, f.bundles(), g.bundles(), p, q, 0.7);
            let v = sample_cochain(&mut rng, &site, e.bundles(), f.bundles(), 0, 2, 0.7);
            cochains += 2;
            let lhs = delta_hom(&compose(&u, &v).unwrap()).unwrap();
            let du_v = compose(&delta_hom(&u).unwrap(), &v).unwrap();
            let u_dv = compose(&u, &delta_hom(&v).unwrap()).unwrap();
            let rhs = if (p as i64 + q).rem_euclid(2) == 0 {
                du_v.add(&u_dv).unwrap()
            } else {
                du_v.sub(&u_dv).unwrap()
            };
            assert_eq!(lhs, rhs, "Leibniz failed over {field}");
        }

        // module axiom for the action on sheaf cochains
        for _ in 0..30 {
            let site = sample_site(&mut rng, &c).unwrap();
            let e = twist_object(&sample_global_complex(&mut rng, &site, &c)).unwrap();
            let f = twist_object(&sample_global_complex(&mut rng, &site, &c)).unwrap();
            let g = twist_object(&sample_global_complex(&mut rng, &site, &c)).unwrap();
            let (p, q) = (rng.random_range(0..=2), rng.random_range(-2..=2));
            let u =
                sample_homogeneous_cochain(&mut rng, &site, f.bundles(), g.bundles(), p, q, 0.7);
            let v = sample_cochain(&mut rng, &site, e.bundles(), f.bundles(), 1, 2, 0.7);
            let s = sample_sheaf_cochain(&mut rng, &site, e.bundles(), 2, 0.7);
            cochains += 2;
            let lhs = act(&compose(&u, &v).unwrap(), &s).unwrap();
            let rhs = act(&u, &act(&v, &s).unwrap()).unwrap();
            assert_eq!(lhs, rhs, "module axiom failed over {field}");
        }

        // the differential of the dg-category squares to zero
        for _ in 0..40 {
            let site = sample_site(&mut rng, &c).unwrap();
            let e = sample_twisted(&mut rng, &site, &c, 1);
            let f = sample_twisted(&mut rng, &site, &c, 1);
            let n = rng.random_range(-1..=1);
            let phi = sample_cochain(&mut rng, &site, e.bundles(), f.bundles(), n, 2, 0.6);
            cochains += 1;
            let d = hom_diff(&phi, &e, &f).unwrap();
            let dd = hom_diff(&d, &e, &f).unwrap();
            assert!(dd.is_zero(), "d^2 != 0 over {field}");
        }
    }

    assert!(cochains >= 500, "only {cochains} cochains exercised");
    println!(
        "criterion 1 PASS: dg-algebra axioms exact on {} homogeneous cochains over q and fp:7 ({:.2?})",
        cochains,
        start.elapsed()
    );
}

#[test]
fn criterion_2_mc_preservation_and_corruption_detection() {
    let start = Instant::now();
    let mut rng = small_rng(102);
    let mut valid_cases = 0usize;

    for field in [FieldTag::Rational, F7] {
        let c = cfg(field);
        // twist images
        for _ in 0..20 {
            let site = sample_site(&mut rng, &c).unwrap();
            let t = twist_object(&sample_global_complex(&mut rng, &site, &c)).unwrap();
            assert!(t.mc_residual().is_zero());
            valid_cases += 1;
        }
        // shifts
        for _ in 0..15 {
            let site = sample_site(&mut rng, &c).unwrap();
            let t = shift(&sample_twisted(&mut rng, &site, &c, 1));
            assert!(t.mc_residual().is_zero());
            valid_cases += 1;
        }
        // cones of closed degree-zero morphisms
        for _ in 0..15 {
            let site = sample_site(&mut rng, &c).unwrap();
            let e = sample_global_complex(&mut rng, &site, &c);
            let f = sample_global_complex(&mut rng, &site, &c);
            let phi = sample_closed_morphism(&mut rng, &e, &f, 0);
            let g = cone(&phi, &twist_object(&e).unwrap(), &twist_object(&f).unwrap()).unwrap();
            assert!(g.mc_residual().is_zero());
            valid_cases += 1;
        }
    }
    assert!(valid_cases >= 100);

    // corruption trials: single-entry corruption must be detected, with the
    // residual confined to the corrupted point and to tuples containing the
    // corrupted tuple
    let mut corruption_trials = 0usize;
    while corruption_trials < 50 {
        let field = if corruption_trials % 2 == 0 {
            FieldTag::Rational
        } else {
            F7
        };
        let c = cfg(field);
        let site = sample_site(&mut rng, &c).unwrap();
        let t = sample_twisted(&mut rng, &site, &c, 1);
        let keys: Vec<(Vec<usize>, i64)> = t.twist().components().keys().cloned().collect();
        if keys.is_empty() {
            continue;
        }
        let (tuple, q) = keys[rng.random_range(0..keys.len())].clone();
        let piece = t.twist().component(&tuple, q).unwrap().clone();
        let mat_keys: Vec<(usize, i64)> = piece.mats().keys().cloned().collect();
        let (x0, deg0) = mat_keys[rng.random_range(0..mat_keys.len())];
        let mat = piece.mats().get(&(x0, deg0)).unwrap();
        let (r, cidx) = (
            rng.random_range(0..mat.rows()),
            rng.random_range(0..mat.cols()),
        );
        let mut bump = Matrix::zeros(field, mat.rows(), mat.cols());
        bump.set(r, cidx, sample_nonzero_scalar(&mut rng, field));
        let supp = site.support(&tuple);
        let src = t.bundles()[*tuple.last().unwrap()].restrict(&supp).unwrap();
        let tgt = t.bundles()[tuple[0]].restrict(&supp).unwrap();
        let bump_mor =
            SheafMorphism::new(src, tgt, q, field, BTreeMap::from([((x0, deg0), bump)])).unwrap();
        let mut twist = t.twist().clone();
        twist.insert(tuple.clone(), q, bump_mor).unwrap();
        let corrupted = TwistedComplex::new(site.clone(), t.bundles().to_vec(), twist).unwrap();
        let residual = corrupted.mc_residual();
        if residual.is_zero() {
            // the bump landed on another valid twist; does not count as a trial
            continue;
        }
        for ((rt, _), m) in residual.components() {
            let mut it = rt.iter();
            assert!(
                tuple.iter().all(|n| it.any(|h| h == n)),
                "residual at {rt:?} does not localize the corrupted tuple {tuple:?}"
            );
            for (&(x, _), mm) in m.mats() {
                assert!(
                    mm.is_zero() || x == x0,
                    "residual leaked off the corrupted point"
                );
            }
        }
        assert!(corrupted.validate().is_err());
        corruption_trials += 1;
    }

    println!(
        "criterion 2 PASS: {} valid constructions with zero residual, {} corruptions detected and localized ({:.2?})",
        valid_cases, corruption_trials, start.elapsed()
    );
}

/// Hand-authored two-open fixtures with transitions that are not the
/// identity: a line glued by the scalar 2, a rank-two unipotent gluing over
/// fp:7, and a two-degree complex with scalar transitions conjugating the
/// differential.
fn hand_fixtures() -> Vec<TwistedComplex> {
    let mut out = Vec::new();

    let two_open_site = |field: FieldTag| -> Arc<Site> {
        Arc::new(
            Site::new(
                vec!["x".into(), "y".into(), "z".into()],
                vec![BTreeSet::from([0, 1]), BTreeSet::from([1, 2])],
                field,
                None,
            )
            .unwrap(),
        )
    };
    let rank_bundle = |site: &Arc<Site>, i: usize, ranks: &[(i64, usize)]| -> GradedBundle {
        let mut dims = BTreeMap::new();
        for &x in site.open(i) {
            for &(deg, r) in ranks {
                dims.insert((x, deg), r);
            }
        }
        GradedBundle::new(site.open(i).clone(), dims).unwrap()
    };

    // fixture 1: rank-one line at degree 0, glued by 2 over the rationals
    {
        let site = two_open_site(FieldTag::Rational);
        let field = site.field();
        let bundles: Vec<GradedBundle> = (0..2).map(|i| rank_bundle(&site, i, &[(0, 1)])).collect();
        let mut twist = HomCochain::zero(site.clone(), bundles.clone(), bundles.clone()).unwrap();
        let entries: [((usize, usize), Matrix); 4] = [
            ((0, 0), Matrix::identity(field, 1)),
            ((1, 1), Matrix::identity(field, 1)),
            ((0, 1), Matrix::from_int_rows(field, &[&[2]])),
            (
                (1, 0),
                Matrix::from_rows(field, vec![vec![Scalar::rational(1, 2).unwrap()]]).unwrap(),
            ),
        ];
        for ((a, b), m) in entries {
            let tuple = vec![a, b];
            for &x in &site.support(&tuple) {
                twist
                    .insert_matrix(tuple.clone(), 0, x, 0, m.clone())
                    .unwrap();
            }
        }
        out.push(TwistedComplex::new(site, bundles, twist).unwrap());
    }

    // fixture 2: rank-two unipotent gluing over fp:7
    {
        let site = two_open_site(F7);
        let field = site.field();
        let bundles: Vec<GradedBundle> = (0..2).map(|i| rank_bundle(&site, i, &[(0, 2)])).collect();
        let mut twist = HomCochain::zero(site.clone(), bundles.clone(), bundles.clone()).unwrap();
        let m = Matrix::from_int_rows(field, &[&[1, 3], &[0, 1]]);
        let m_inv = m.inverse().unwrap().unwrap();
        let entries: [((usize, usize), Matrix); 4] = [
            ((0, 0), Matrix::identity(field, 2)),
            ((1, 1), Matrix::identity(field, 2)),
            ((0, 1), m),
            ((1, 0), m_inv),
        ];
        for ((a, b), mm) in entries {
            let tuple = vec![a, b];
            for &x in &site.support(&tuple) {
                twist
                    .insert_matrix(tuple.clone(), 0, x, 0, mm.clone())
                    .unwrap();
            }
        }
        out.push(TwistedComplex::new(site, bundles, twist).unwrap());
    }

    // fixture 3: two degrees with scalar transitions 2 and 4 conjugating a
    // nonzero differential across the overlap
    {
        let site = two_open_site(FieldTag::Rational);
        let field = site.field();
        let bundles: Vec<GradedBundle> = (0..2)
            .map(|i| rank_bundle(&site, i, &[(0, 1), (1, 1)]))
            .collect();
        let mut twist = HomCochain::zero(site.clone(), bundles.clone(), bundles.clone()).unwrap();
        // differentials: on U_0, d = 3 at x, 1 at y; on U_1 the chain
        // condition forces d(y) = 1/2 against the transitions, and d(z) = 5
        let x = site.point_index("x").unwrap();
        let y = site.point_index("y").unwrap();
        let z = site.point_index("z").unwrap();
        twist
            .insert_matrix(vec![0], 1, x, 0, Matrix::from_int_rows(field, &[&[3]]))
            .unwrap();
        twist
            .insert_matrix(vec![0], 1, y, 0, Matrix::identity(field, 1))
            .unwrap();
        twist
            .insert_matrix(
                vec![1],
                1,
                y,
                0,
                Matrix::from_rows(field, vec![vec![Scalar::rational(1, 2).unwrap()]]).unwrap(),
            )
            .unwrap();
        twist
            .insert_matrix(vec![1], 1, z, 0, Matrix::from_int_rows(field, &[&[5]]))
            .unwrap();
        // transitions: 2 at degree 0 and 4 at degree 1, and their inverses
        for (deg, forward, back) in [
            (
                0i64,
                Scalar::from_integer(2, field),
                Scalar::rational(1, 2).unwrap(),
            ),
            (
                1,
                Scalar::from_integer(4, field),
                Scalar::rational(1, 4).unwrap(),
            ),
        ] {
            twist
                .insert_matrix(
                    vec![0, 1],
                    0,
                    y,
                    deg,
                    Matrix::from_rows(field, vec![vec![forward]]).unwrap(),
                )
                .unwrap();
            twist
                .insert_matrix(
                    vec![1, 0],
                    0,
                    y,
                    deg,
                    Matrix::from_rows(field, vec![vec![back]]).unwrap(),
                )
                .unwrap();
        }
        for i in 0..2usize {
            for &p in &site.support(&[i, i]) {
                for deg in [0i64, 1] {
                    twist
                        .insert_matrix(vec![i, i], 0, p, deg, Matrix::identity(field, 1))
                        .unwrap();
                }
            }
        }
        out.push(TwistedComplex::new(site, bundles, twist).unwrap());
    }

    for t in &out {
        t.validate().expect("hand fixture satisfies Maurer-Cartan");
    }
    out
}

#[test]
fn criterion_3_quasi_essential_surjectivity() {
    let start = Instant::now();
    let mut rng = small_rng(103);
    let mut cases = 0usize;

    // twist images; half of them run over a random non-0/1 partition of unity
    for k in 0..8 {
        let field = if k % 2 == 0 { FieldTag::Rational } else { F7 };
        let c = cfg(field);
        let mut site = sample_site(&mut rng, &c).unwrap();
        if k % 2 == 1 {
            let pou = descent_core::sample::sample_partition(&mut rng, &site);
            site = Arc::new(
                Site::new(
                    site.points().to_vec(),
                    site.opens().to_vec(),
                    field,
                    Some(pou),
                )
                .unwrap(),
            );
        }
        let t = twist_object(&sample_global_complex(&mut rng, &site, &c)).unwrap();
        let cert = globalize(&t).unwrap();
        assert!(cert.intertwine_residual.is_zero());
        assert!(cert.weq.is_equivalence);
        cases += 1;
    }
    // shifts
    for k in 0..5 {
        let field = if k % 2 == 0 { FieldTag::Rational } else { F7 };
        let c = small(field);
        let site = sample_site(&mut rng, &c).unwrap();
        let t = shift(&sample_twisted(&mut rng, &site, &c, 1));
        let cert = globalize(&t).unwrap();
        assert!(cert.intertwine_residual.is_zero());
        assert!(cert.weq.is_equivalence);
        cases += 1;
    }
    // cones of random closed morphisms between twist images
    for k in 0..9 {
        let field = if k % 2 == 0 { FieldTag::Rational } else { F7 };
        let c = small(field);
        let site = sample_site(&mut rng, &c).unwrap();
        let e = sample_global_complex(&mut rng, &site, &c);
        let f = sample_global_complex(&mut rng, &site, &c);
        let phi = sample_closed_morphism(&mut rng, &e, &f, 0);
        let g = cone(&phi, &twist_object(&e).unwrap(), &twist_object(&f).unwrap()).unwrap();
        let cert = globalize(&g).unwrap();
        assert!(cert.intertwine_residual.is_zero());
        assert!(cert.weq.is_equivalence);
        cases += 1;
    }
    // hand-authored two-open fixtures with nontrivial transitions
    for t in hand_fixtures() {
        let cert = globalize(&t).unwrap();
        assert!(cert.intertwine_residual.is_zero());
        assert!(cert.weq.is_equivalence);
        cases += 1;
    }

    assert!(cases >= 25);
    println!(
        "criterion 3 PASS: {} globalizations with zero intertwining residual and pointwise homology isomorphisms ({:.2?})",
        cases,
        start.elapsed()
    );
}

#[test]
fn criterion_4_quasi_fully_faithfulness() {
    let start = Instant::now();
    let mut rng = small_rng(104);

    // hom-complex cohomology agrees degree by degree on both sides
    let mut pairs = 0usize;
    for k in 0..25 {
        let field = if k % 2 == 0 { FieldTag::Rational } else { F7 };
        let c = small(field);
        let site = sample_site(&mut rng, &c).unwrap();
        let e = sample_global_complex(&mut rng, &site, &c);
        let f = sample_global_complex(&mut rng, &site, &c);
        let global = hom_complex_cohomology_global(&e, &f).unwrap();
        let twisted = hom_complex_cohomology_twisted(
            &twist_object(&e).unwrap(),
            &twist_object(&f).unwrap(),
            None,
        )
        .unwrap();
        assert_eq!(global, twisted, "hom cohomology mismatch on pair {k}");
        pairs += 1;
    }
    // margins: the twisted side also vanishes one degree beyond the window
    for k in 0..3 {
        let field = if k % 2 == 0 { FieldTag::Rational } else { F7 };
        let mut c = small(field);
        c.max_points = 2;
        c.degree_hi = 0;
        let site = sample_site(&mut rng, &c).unwrap();
        let e = sample_global_complex(&mut rng, &site, &c);
        let f = sample_global_complex(&mut rng, &site, &c);
        let global = hom_complex_cohomology_global(&e, &f).unwrap();
        let lohi = (
            global.keys().next().copied().unwrap_or(0) - 1,
            global.keys().last().copied().unwrap_or(0) + 1,
        );
        let twisted = hom_complex_cohomology_twisted(
            &twist_object(&e).unwrap(),
            &twist_object(&f).unwrap(),
            Some(lohi),
        )
        .unwrap();
        for (n, dim) in &twisted {
            assert_eq!(*dim, global.get(n).copied().unwrap_or(0));
        }
    }

    // morphism descent: phi - T(phi_tilde) = d(phi_hat), verified exactly
    // inside descend_morphism before it returns
    let mut descents = 0usize;
    while descents < 50 {
        let field = if descents % 2 == 0 {
            FieldTag::Rational
        } else {
            F7
        };
        let mut c = small(field);
        c.max_opens = if descents % 4 < 2 { 2 } else { 3 };
        let degree = if descents % 3 == 0 { 1 } else { 0 };
        let site = sample_site(&mut rng, &c).unwrap();
        if site.n_opens() < 2 {
            continue;
        }
        let e = sample_global_complex(&mut rng, &site, &c);
        let f = sample_global_complex(&mut rng, &site, &c);
        let phi = sample_closed_morphism(&mut rng, &e, &f, degree);
        let (tilde, _hat) = descend_morphism(&phi, &e, &f).unwrap();
        assert!(global_hom_diff(&tilde, &e, &f).unwrap().is_zero());
        descents += 1;
    }

    // coboundary descent inverts exactly
    let mut coboundaries = 0usize;
    while coboundaries < 25 {
        let field = if coboundaries % 2 == 0 {
            FieldTag::Rational
        } else {
            F7
        };
        let c = small(field);
        let site = sample_site(&mut rng, &c).unwrap();
        let e = sample_global_complex(&mut rng, &site, &c);
        let f = sample_global_complex(&mut rng, &site, &c);
        let mut mats = BTreeMap::new();
        for x in 0..site.n_points() {
            if let Some((lo, hi)) = e.bundle().window() {
                for deg in lo..=hi {
                    let r = f.bundle().dim(x, deg);
                    let cdim = e.bundle().dim(x, deg);
                    if r * cdim > 0 {
                        let m = sample_matrix(&mut rng, site.field(), r, cdim);
                        if !m.is_zero() {
                            mats.insert((x, deg), m);
                        }
                    }
                }
            }
        }
        let psi = SheafMorphism::new(
            e.bundle().clone(),
            f.bundle().clone(),
            0,
            site.field(),
            mats,
        )
        .unwrap();
        let phi = global_hom_diff(&psi, &e, &f).unwrap();
        if phi.is_zero() {
            continue;
        }
        let primitive = twist_morphism(&psi, &e, &f).unwrap();
        let back = descend_coboundary(&phi, &primitive, &e, &f).unwrap();
        assert_eq!(global_hom_diff(&back, &e, &f).unwrap(), phi);
        coboundaries += 1;
    }

    println!(
        "criterion 4 PASS: {} hom-cohomology pairs agree, {} morphism descents and {} coboundary descents exact ({:.2?})",
        pairs, descents, coboundaries, start.elapsed()
    );
}

#[test]
fn criterion_5_roundtrip() {
    let start = Instant::now();
    let mut rng = small_rng(105);
    let mut cases = 0usize;
    for k in 0..25 {
        let field = if k % 2 == 0 { FieldTag::Rational } else { F7 };
        let c = cfg(field);
        let site = sample_site(&mut rng, &c).unwrap();
        let e = sample_global_complex(&mut rng, &site, &c);
        let t = twist_object(&e).unwrap();
        let cert = globalize(&t).unwrap();
        // the witness: a closed degree-zero morphism T(recovered) -> T(E)
        // whose degree-zero component is a pointwise quasi-isomorphism on
        // every open, checked inside globalize; re-check the tables here
        assert!(cert.weq.is_equivalence);
        assert!(cert.intertwine_residual.is_zero());
        let recovered = local_homology(&site, cert.complex.bundle(), cert.complex.diff()).unwrap();
        let original = local_homology(&site, e.bundle(), e.diff()).unwrap();
        assert_eq!(recovered, original);
        cases += 1;
    }
    assert!(cases >= 25);
    println!(
        "criterion 5 PASS: {} roundtrips weakly equivalent to the original with verified witnesses ({:.2?})",
        cases,
        start.elapsed()
    );
}

/// The shift sign table and the Euler-characteristic conservation law, kept
/// alongside the numbered criteria as cross-checks of the same corpus.
#[test]
fn supporting_invariants() {
    let mut rng = small_rng(106);
    for _ in 0..10 {
        let c = cfg(FieldTag::Rational);
        let site = sample_site(&mut rng, &c).unwrap();
        let t = sample_twisted(&mut rng, &site, &c, 2);
        assert!(shift(&t).mc_residual().is_zero());
        for (i, table) in descent_core::homology::twisted_homology_tables(&t)
            .unwrap()
            .iter()
            .enumerate()
        {
            for &x in site.open(i) {
                assert!(descent_core::homology::euler_characteristics_match(
                    &t.bundles()[i],
                    table,
                    x
                ));
            }
        }
    }
}
