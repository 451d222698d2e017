//! The discrete model of a compact space with soft structure sheaf: a finite
//! point set, a finite open cover, the nerve of index tuples, and a partition
//! of unity.
//!
//! Sections of the structure sheaf over an open are field-valued functions on
//! its points, so every section over any subset extends and partitions of
//! unity exist for every cover. Index tuples with repeated entries are
//! first-class citizens of the nerve; tuples with empty intersection are
//! never stored.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{FieldTag, Scalar};

/// Weights of a partition of unity: one scalar function on the points per
/// open, supported inside that open and summing to one at every point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionOfUnity {
    rho: Vec<Vec<Scalar>>,
}

impl PartitionOfUnity {
    pub fn new(rho: Vec<Vec<Scalar>>) -> PartitionOfUnity {
        PartitionOfUnity { rho }
    }

    pub fn weight(&self, open: usize, point: usize) -> &Scalar {
        &self.rho[open][point]
    }

    pub fn table(&self) -> &[Vec<Scalar>] {
        &self.rho
    }
}

/// A tuple of open indices with its (nonempty) intersection.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct NerveTuple {
    pub indices: Vec<usize>,
    pub support: BTreeSet<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Site {
    points: Vec<String>,
    opens: Vec<BTreeSet<usize>>,
    field: FieldTag,
    pou: PartitionOfUnity,
}

impl Site {
    /// Builds a site. When no partition of unity is supplied the least-index
    /// one is used, which requires the opens to cover the points.
    pub fn new(
        points: Vec<String>,
        opens: Vec<BTreeSet<usize>>,
        field: FieldTag,
        pou: Option<PartitionOfUnity>,
    ) -> Result<Site> {
        for open in &opens {
            if let Some(&x) = open.iter().find(|&&x| x >= points.len()) {
                return Err(Error::InvalidSite(format!(
                    "open references unknown point index {x}"
                )));
            }
        }
        let pou = match pou {
            Some(p) => {
                if p.rho.len() != opens.len() || p.rho.iter().any(|r| r.len() != points.len()) {
                    return Err(Error::InvalidSite(
                        "partition table shape does not match opens/points".into(),
                    ));
                }
                for row in &p.rho {
                    for v in row {
                        if v.field() != field {
                            return Err(Error::FieldMismatch);
                        }
                    }
                }
                p
            }
            None => default_partition(&opens, &points, field)?,
        };
        Ok(Site {
            points,
            opens,
            field,
            pou,
        })
    }

    pub fn n_points(&self) -> usize {
        self.points.len()
    }

    pub fn n_opens(&self) -> usize {
        self.opens.len()
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn point_name(&self, x: usize) -> &str {
        &self.points[x]
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn point_index(&self, name: &str) -> Option<usize> {
        self.points.iter().position(|p| p == name)
    }

    pub fn open(&self, i: usize) -> &BTreeSet<usize> {
        &self.opens[i]
    }

    pub fn opens(&self) -> &[BTreeSet<usize>] {
        &self.opens
    }

    pub fn pou(&self) -> &PartitionOfUnity {
        &self.pou
    }

    pub fn rho(&self, open: usize, point: usize) -> &Scalar {
        self.pou.weight(open, point)
    }

    /// All points of the site as a set.
    pub fn all_points(&self) -> BTreeSet<usize> {
        (0..self.points.len()).collect()
    }

    /// Intersection of the opens named by the tuple; empty tuple means the
    /// whole point set.
    pub fn support(&self, indices: &[usize]) -> BTreeSet<usize> {
        let mut it = indices.iter();
        let Some(&first) = it.next() else {
            return self.all_points();
        };
        let mut acc = self.opens[first].clone();
        for &i in it {
            acc = acc.intersection(&self.opens[i]).cloned().collect();
            if acc.is_empty() {
                break;
            }
        }
        acc
    }

    /// All index tuples of exactly the given length with nonempty support,
    /// in lexicographic order. Repeated indices are included.
    pub fn tuples_of_len(&self, len: usize) -> Vec<NerveTuple> {
        // depth-first in lexicographic order, pruning empty intersections early
        fn extend(
            site: &Site,
            prefix: &mut Vec<usize>,
            support: &BTreeSet<usize>,
            len: usize,
            out: &mut Vec<NerveTuple>,
        ) {
            if prefix.len() == len {
                if !prefix.is_empty() {
                    out.push(NerveTuple {
                        indices: prefix.clone(),
                        support: support.clone(),
                    });
                }
                return;
            }
            for i in 0..site.n_opens() {
                let next: BTreeSet<usize> = support.intersection(&site.opens[i]).cloned().collect();
                if next.is_empty() {
                    continue;
                }
                prefix.push(i);
                extend(site, prefix, &next, len, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if len == 0 {
            return out;
        }
        extend(self, &mut Vec::new(), &self.all_points(), len, &mut out);
        out
    }
}

/// The least-index partition of unity: at each point the first open
/// containing it gets weight one, every other open gets zero.
pub fn default_partition(
    opens: &[BTreeSet<usize>],
    points: &[String],
    field: FieldTag,
) -> Result<PartitionOfUnity> {
    let mut rho = vec![vec![Scalar::zero(field); points.len()]; opens.len()];
    for x in 0..points.len() {
        match opens.iter().position(|u| u.contains(&x)) {
            Some(i) => rho[i][x] = Scalar::one(field),
            None => {
                return Err(Error::NotACover {
                    point: points[x].clone(),
                })
            }
        }
    }
    Ok(PartitionOfUnity { rho })
}

/// All tuples of length `1..=max_length` with nonempty intersection, ordered
/// by length and then lexicographically.
pub fn build_nerve(site: &Site, max_length: usize) -> Vec<NerveTuple> {
    let mut out = Vec::new();
    for len in 1..=max_length {
        out.extend(site.tuples_of_len(len));
    }
    out
}

/// A single problem found by [`validate_site`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SiteDiagnostic {
    NotCovered { point: String },
    SupportViolation { open: usize, point: String },
    PartitionSumNotOne { point: String },
}

impl fmt::Display for SiteDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SiteDiagnostic::NotCovered { point } => {
                write!(f, "point {point} lies in no open")
            }
            SiteDiagnostic::SupportViolation { open, point } => {
                write!(f, "support violation at point {point}, index {open}")
            }
            SiteDiagnostic::PartitionSumNotOne { point } => {
                write!(f, "partition sum != 1 at {point}")
            }
        }
    }
}

/// Checks the cover and both partition-of-unity invariants; the site is valid
/// exactly when the report is empty.
pub fn validate_site(site: &Site) -> Vec<SiteDiagnostic> {
    let mut out = Vec::new();
    for x in 0..site.n_points() {
        if !site.opens().iter().any(|u| u.contains(&x)) {
            out.push(SiteDiagnostic::NotCovered {
                point: site.point_name(x).to_string(),
            });
        }
    }
    for (i, open) in site.opens().iter().enumerate() {
        for x in 0..site.n_points() {
            if !open.contains(&x) && !site.rho(i, x).is_zero() {
                out.push(SiteDiagnostic::SupportViolation {
                    open: i,
                    point: site.point_name(x).to_string(),
                });
            }
        }
    }
    for x in 0..site.n_points() {
        let mut sum = Scalar::zero(site.field());
        for i in 0..site.n_opens() {
            sum = sum.add(site.rho(i, x));
        }
        if !sum.is_one() {
            out.push(SiteDiagnostic::PartitionSumNotOne {
                point: site.point_name(x).to_string(),
            });
        }
    }
    out
}
