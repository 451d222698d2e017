//! JSON fixture schema: sites, objects and morphisms, with matrices stored
//! row-major, rationals as "a/b" strings and prime-field residues as
//! integers. Omitted blocks are zero; degree windows are explicit.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use descent_core::{
    twist_object, Error as CoreError, FieldTag, GlobalComplex, GradedBundle, HomCochain, Matrix,
    PartitionOfUnity, Scalar, SheafMorphism, Site, TwistedComplex,
};

use crate::CliError;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FixtureFile {
    pub format_version: u32,
    pub field: String,
    pub site: SiteSchema,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub objects: BTreeMap<String, ObjectSchema>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub morphisms: BTreeMap<String, MorphismSchema>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SiteSchema {
    pub points: Vec<String>,
    pub opens: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<Vec<Vec<Value>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ObjectSchema {
    Global {
        bundle: BundleSchema,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        differential: Vec<DiffEntry>,
    },
    Twisted {
        bundles: Vec<BundleSchema>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        twist: Vec<TwistEntry>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BundleSchema {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<[i64; 2]>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub dims: BTreeMap<String, Vec<usize>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiffEntry {
    pub point: String,
    pub degree: i64,
    pub matrix: Vec<Vec<Value>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TwistEntry {
    pub k: usize,
    pub tuple: Vec<usize>,
    pub point: String,
    pub degree: i64,
    pub matrix: Vec<Vec<Value>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MorphismSchema {
    pub source: String,
    pub target: String,
    pub total_degree: i64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub components: Vec<CompEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CompEntry {
    pub tuple: Vec<usize>,
    pub q: i64,
    pub point: String,
    pub degree: i64,
    pub matrix: Vec<Vec<Value>>,
}

/// A fixture resolved into engine objects.
pub struct Loaded {
    pub field: FieldTag,
    pub site: Arc<Site>,
    pub globals: BTreeMap<String, GlobalComplex>,
    pub twisteds: BTreeMap<String, TwistedComplex>,
    pub morphisms: BTreeMap<String, LoadedMorphism>,
}

pub struct LoadedMorphism {
    pub source: String,
    pub target: String,
    pub total_degree: i64,
    pub cochain: HomCochain,
}

impl Loaded {
    /// The twisted complex a morphism endpoint refers to: either a twisted
    /// object directly or the twist image of a global one.
    pub fn endpoint(&self, name: &str) -> Result<TwistedComplex, CliError> {
        if let Some(t) = self.twisteds.get(name) {
            return Ok(t.clone());
        }
        if let Some(g) = self.globals.get(name) {
            return twist_object(g).map_err(CliError::math);
        }
        Err(CliError::input(format!("unresolved object {name:?}")))
    }
}

pub fn parse_field(text: &str) -> Result<FieldTag, CliError> {
    if text == "q" {
        return Ok(FieldTag::Rational);
    }
    if let Some(p) = text.strip_prefix("fp:") {
        let p: u64 = p
            .parse()
            .map_err(|_| CliError::input(format!("bad field {text:?}")))?;
        return FieldTag::prime(p).map_err(CliError::input_core);
    }
    Err(CliError::input(format!(
        "bad field {text:?} (expected q or fp:<prime>)"
    )))
}

fn scalar_from_value(v: &Value, field: FieldTag) -> Result<Scalar, CliError> {
    match v {
        Value::String(s) => Scalar::parse(s, field).map_err(CliError::input_core),
        Value::Number(n) => {
            let i = n
                .as_i64()
                .ok_or_else(|| CliError::input(format!("non-integer scalar {n}")))?;
            Ok(Scalar::from_integer(i, field))
        }
        other => Err(CliError::input(format!("bad scalar {other}"))),
    }
}

pub fn scalar_to_value(s: &Scalar) -> Value {
    match s {
        Scalar::Rational(_) => Value::String(s.render()),
        Scalar::Prime { residue, .. } => Value::Number((*residue).into()),
    }
}

fn matrix_from_rows(rows: &[Vec<Value>], field: FieldTag) -> Result<Matrix, CliError> {
    let data = rows
        .iter()
        .map(|r| r.iter().map(|v| scalar_from_value(v, field)).collect())
        .collect::<Result<Vec<Vec<Scalar>>, CliError>>()?;
    Matrix::from_rows(field, data).map_err(CliError::input_core)
}

pub fn matrix_to_rows(m: &Matrix) -> Vec<Vec<Value>> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| scalar_to_value(m.get(i, j)))
                .collect()
        })
        .collect()
}

fn bundle_from_schema(
    schema: &BundleSchema,
    open: &BTreeSet<usize>,
    site: &Site,
) -> Result<GradedBundle, CliError> {
    let mut dims = BTreeMap::new();
    if let Some([lo, hi]) = schema.window {
        for (point, table) in &schema.dims {
            let x = site
                .point_index(point)
                .ok_or_else(|| CliError::input(format!("unknown point {point:?}")))?;
            if table.len() as i64 != hi - lo + 1 {
                return Err(CliError::input(format!(
                    "dimension table for point {point:?} does not match the window"
                )));
            }
            for (k, &d) in table.iter().enumerate() {
                if d > 0 {
                    dims.insert((x, lo + k as i64), d);
                }
            }
        }
    } else if !schema.dims.is_empty() {
        return Err(CliError::input(
            "bundle has dimension tables but no window".to_string(),
        ));
    }
    GradedBundle::new(open.clone(), dims).map_err(CliError::input_core)
}

pub fn bundle_to_schema(b: &GradedBundle, site: &Site) -> BundleSchema {
    let Some((lo, hi)) = b.window() else {
        return BundleSchema {
            window: None,
            dims: BTreeMap::new(),
        };
    };
    let mut dims: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for &x in b.open() {
        let table: Vec<usize> = (lo..=hi).map(|n| b.dim(x, n)).collect();
        if table.iter().any(|&d| d > 0) {
            dims.insert(site.point_name(x).to_string(), table);
        }
    }
    BundleSchema {
        window: Some([lo, hi]),
        dims,
    }
}

pub fn load(text: &str, field_flag: Option<&str>) -> Result<Loaded, CliError> {
    let file: FixtureFile =
        serde_json::from_str(text).map_err(|e| CliError::input(format!("bad fixture: {e}")))?;
    if file.format_version != FORMAT_VERSION {
        return Err(CliError::input(format!(
            "unsupported format_version {}",
            file.format_version
        )));
    }
    let field = parse_field(&file.field)?;
    if let Some(flag) = field_flag {
        let want = parse_field(flag)?;
        if want != field {
            return Err(CliError::input(format!(
                "fixture field {} does not match --field {}",
                file.field, flag
            )));
        }
    }

    let points = file.site.points.clone();
    let mut opens = Vec::new();
    for open in &file.site.opens {
        let mut set = BTreeSet::new();
        for name in open {
            let x = points.iter().position(|p| p == name).ok_or_else(|| {
                CliError::input(format!("open references unknown point {name:?}"))
            })?;
            set.insert(x);
        }
        opens.push(set);
    }
    let pou = match &file.site.partition {
        Some(rows) => {
            let mut table = Vec::new();
            for row in rows {
                let parsed = row
                    .iter()
                    .map(|v| scalar_from_value(v, field))
                    .collect::<Result<Vec<Scalar>, CliError>>()?;
                table.push(parsed);
            }
            Some(PartitionOfUnity::new(table))
        }
        None => None,
    };
    let site = Arc::new(Site::new(points, opens, field, pou).map_err(CliError::input_core)?);

    let mut globals = BTreeMap::new();
    let mut twisteds = BTreeMap::new();
    for (name, obj) in &file.objects {
        match obj {
            ObjectSchema::Global {
                bundle,
                differential,
            } => {
                let b = bundle_from_schema(bundle, &site.all_points(), &site)?;
                let mut mats = BTreeMap::new();
                for entry in differential {
                    let x = site.point_index(&entry.point).ok_or_else(|| {
                        CliError::input(format!("unknown point {:?}", entry.point))
                    })?;
                    let m = matrix_from_rows(&entry.matrix, field)?;
                    mats.insert((x, entry.degree), m);
                }
                let d = SheafMorphism::new(b.clone(), b.clone(), 1, field, mats)
                    .map_err(CliError::input_core)?;
                let g = GlobalComplex::new(site.clone(), b, d).map_err(CliError::input_core)?;
                globals.insert(name.clone(), g);
            }
            ObjectSchema::Twisted { bundles, twist } => {
                if bundles.len() != site.n_opens() {
                    return Err(CliError::input(format!(
                        "object {name:?} has {} bundles for {} opens",
                        bundles.len(),
                        site.n_opens()
                    )));
                }
                let family: Vec<GradedBundle> = bundles
                    .iter()
                    .enumerate()
                    .map(|(i, s)| bundle_from_schema(s, site.open(i), &site))
                    .collect::<Result<_, CliError>>()?;
                let mut cochain = HomCochain::zero(site.clone(), family.clone(), family.clone())
                    .map_err(CliError::input_core)?;
                for entry in twist {
                    if entry.k + 1 != entry.tuple.len() {
                        return Err(CliError::input(format!(
                            "twist entry k = {} does not match tuple {:?}",
                            entry.k, entry.tuple
                        )));
                    }
                    let x = site.point_index(&entry.point).ok_or_else(|| {
                        CliError::input(format!("unknown point {:?}", entry.point))
                    })?;
                    let m = matrix_from_rows(&entry.matrix, field)?;
                    let q = 1 - entry.k as i64;
                    cochain
                        .insert_matrix(entry.tuple.clone(), q, x, entry.degree, m)
                        .map_err(CliError::input_core)?;
                }
                let t = TwistedComplex::new(site.clone(), family, cochain)
                    .map_err(CliError::input_core)?;
                twisteds.insert(name.clone(), t);
            }
        }
    }

    let mut morphisms = BTreeMap::new();
    for (name, schema) in &file.morphisms {
        let src_family = endpoint_family(&globals, &twisteds, &site, &schema.source)?;
        let tgt_family = endpoint_family(&globals, &twisteds, &site, &schema.target)?;
        let mut cochain =
            HomCochain::zero(site.clone(), src_family, tgt_family).map_err(CliError::input_core)?;
        for entry in &schema.components {
            let p = entry.tuple.len() as i64 - 1;
            if p + entry.q != schema.total_degree {
                return Err(CliError::input(format!(
                    "component at tuple {:?} has total degree {} but the morphism declares {}",
                    entry.tuple,
                    p + entry.q,
                    schema.total_degree
                )));
            }
            let x = site
                .point_index(&entry.point)
                .ok_or_else(|| CliError::input(format!("unknown point {:?}", entry.point)))?;
            let m = matrix_from_rows(&entry.matrix, field)?;
            cochain
                .insert_matrix(entry.tuple.clone(), entry.q, x, entry.degree, m)
                .map_err(CliError::input_core)?;
        }
        morphisms.insert(
            name.clone(),
            LoadedMorphism {
                source: schema.source.clone(),
                target: schema.target.clone(),
                total_degree: schema.total_degree,
                cochain,
            },
        );
    }

    Ok(Loaded {
        field,
        site,
        globals,
        twisteds,
        morphisms,
    })
}

fn endpoint_family(
    globals: &BTreeMap<String, GlobalComplex>,
    twisteds: &BTreeMap<String, TwistedComplex>,
    site: &Arc<Site>,
    name: &str,
) -> Result<Vec<GradedBundle>, CliError> {
    if let Some(t) = twisteds.get(name) {
        return Ok(t.bundles().to_vec());
    }
    if let Some(g) = globals.get(name) {
        return (0..site.n_opens())
            .map(|i| {
                g.bundle()
                    .restrict(site.open(i))
                    .map_err(CliError::input_core)
            })
            .collect();
    }
    Err(CliError::input(format!(
        "morphism endpoint {name:?} does not resolve"
    )))
}

/// Serializes a site back into its schema.
pub fn site_to_schema(site: &Site) -> SiteSchema {
    SiteSchema {
        points: site.points().to_vec(),
        opens: site
            .opens()
            .iter()
            .map(|open| {
                open.iter()
                    .map(|&x| site.point_name(x).to_string())
                    .collect()
            })
            .collect(),
        partition: Some(
            site.pou()
                .table()
                .iter()
                .map(|row| row.iter().map(scalar_to_value).collect())
                .collect(),
        ),
    }
}

pub fn global_to_schema(g: &GlobalComplex, site: &Site) -> ObjectSchema {
    let differential = g
        .diff()
        .mats()
        .iter()
        .map(|(&(x, n), m)| DiffEntry {
            point: site.point_name(x).to_string(),
            degree: n,
            matrix: matrix_to_rows(m),
        })
        .collect();
    ObjectSchema::Global {
        bundle: bundle_to_schema(g.bundle(), site),
        differential,
    }
}

pub fn twisted_to_schema(t: &TwistedComplex, site: &Site) -> ObjectSchema {
    let mut twist = Vec::new();
    for ((tuple, _q), piece) in t.twist().components() {
        for (&(x, n), m) in piece.mats() {
            twist.push(TwistEntry {
                k: tuple.len() - 1,
                tuple: tuple.clone(),
                point: site.point_name(x).to_string(),
                degree: n,
                matrix: matrix_to_rows(m),
            });
        }
    }
    ObjectSchema::Twisted {
        bundles: t
            .bundles()
            .iter()
            .map(|b| bundle_to_schema(b, site))
            .collect(),
        twist,
    }
}

pub fn morphism_to_schema(
    cochain: &HomCochain,
    source: &str,
    target: &str,
    total_degree: i64,
    site: &Site,
) -> MorphismSchema {
    let mut components = Vec::new();
    for ((tuple, q), piece) in cochain.components() {
        for (&(x, n), m) in piece.mats() {
            components.push(CompEntry {
                tuple: tuple.clone(),
                q: *q,
                point: site.point_name(x).to_string(),
                degree: n,
                matrix: matrix_to_rows(m),
            });
        }
    }
    MorphismSchema {
        source: source.to_string(),
        target: target.to_string(),
        total_degree,
        components,
    }
}

/// Classifies a core error as input-shaped (exit 2) for loader paths.
impl CliError {
    pub fn input_core(e: CoreError) -> CliError {
        CliError::input(e.to_string())
    }
}
