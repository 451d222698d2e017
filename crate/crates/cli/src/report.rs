//! Report documents and the per-subcommand drivers. Every document is a
//! plain struct with a fixed field order, so serialization is deterministic.

use std::collections::BTreeMap;

use serde::Serialize;

use descent_core::homology::twisted_homology_tables;
use descent_core::{
    cone, descend_morphism, global_hom_diff, globalize, is_weak_equivalence, local_homology, shift,
    twist_object, validate_site, GlobalComplex, HomologyTable, TwistedComplex,
};

use crate::fixture::{
    self, global_to_schema, morphism_to_schema, site_to_schema, twisted_to_schema, FixtureFile,
    Loaded, MorphismSchema, ObjectSchema, FORMAT_VERSION,
};
use crate::{CliError, Common};

#[derive(Serialize)]
struct ValidateReport {
    format_version: u32,
    command: &'static str,
    field: String,
    site: SiteCheck,
    objects: Vec<ObjectCheck>,
    ok: bool,
}

#[derive(Serialize)]
struct SiteCheck {
    valid: bool,
    diagnostics: Vec<String>,
}

#[derive(Serialize)]
struct ObjectCheck {
    name: String,
    kind: &'static str,
    status: &'static str,
    detail: String,
}

pub fn run_validate(common: &Common) -> Result<u8, CliError> {
    let (loaded, name) = common.load()?;
    if name.is_some() {
        return Err(CliError::input("validate takes no object name".into()));
    }
    let diagnostics: Vec<String> = validate_site(&loaded.site)
        .iter()
        .map(|d| d.to_string())
        .collect();
    let mut objects = Vec::new();
    let mut ok = diagnostics.is_empty();
    for (name, g) in &loaded.globals {
        let (status, detail) = match g.validate() {
            Ok(()) => ("ok", "d*d = 0".to_string()),
            Err(e) => {
                ok = false;
                ("invalid", e.to_string())
            }
        };
        objects.push(ObjectCheck {
            name: name.clone(),
            kind: "global",
            status,
            detail,
        });
    }
    for (name, t) in &loaded.twisteds {
        let (status, detail) = match t.validate() {
            Ok(()) => ("ok", "MC residual: 0".to_string()),
            Err(e) => {
                ok = false;
                ("invalid", e.to_string())
            }
        };
        objects.push(ObjectCheck {
            name: name.clone(),
            kind: "twisted",
            status,
            detail,
        });
    }
    let report = ValidateReport {
        format_version: FORMAT_VERSION,
        command: "validate",
        field: loaded.field.to_string(),
        site: SiteCheck {
            valid: diagnostics.is_empty(),
            diagnostics,
        },
        objects,
        ok,
    };
    common.emit(&report)?;
    Ok(if ok { 0 } else { 1 })
}

#[derive(Serialize)]
struct HomologyEntry {
    point: String,
    degree: i64,
    dim: usize,
}

fn table_entries(table: &HomologyTable, loaded: &Loaded) -> Vec<HomologyEntry> {
    table
        .entries()
        .iter()
        .map(|(&(x, n), &d)| HomologyEntry {
            point: loaded.site.point_name(x).to_string(),
            degree: n,
            dim: d,
        })
        .collect()
}

#[derive(Serialize)]
struct HomologyReport {
    format_version: u32,
    command: &'static str,
    objects: Vec<ObjectHomology>,
    ok: bool,
}

#[derive(Serialize)]
struct ObjectHomology {
    name: String,
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    table: Option<Vec<HomologyEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    per_open: Option<Vec<OpenTable>>,
}

#[derive(Serialize)]
struct OpenTable {
    open: usize,
    entries: Vec<HomologyEntry>,
}

pub fn run_homology(common: &Common) -> Result<u8, CliError> {
    let (loaded, name) = common.load()?;
    let mut objects = Vec::new();
    let wanted = |n: &String| name.as_deref().map_or(true, |w| w == n);
    for (obj_name, g) in &loaded.globals {
        if !wanted(obj_name) {
            continue;
        }
        let table = local_homology(&loaded.site, g.bundle(), g.diff()).map_err(CliError::math)?;
        objects.push(ObjectHomology {
            name: obj_name.clone(),
            kind: "global",
            table: Some(table_entries(&table, &loaded)),
            per_open: None,
        });
    }
    for (obj_name, t) in &loaded.twisteds {
        if !wanted(obj_name) {
            continue;
        }
        let tables = twisted_homology_tables(t).map_err(CliError::math)?;
        let per_open = tables
            .iter()
            .enumerate()
            .map(|(i, table)| OpenTable {
                open: i,
                entries: table_entries(table, &loaded),
            })
            .collect();
        objects.push(ObjectHomology {
            name: obj_name.clone(),
            kind: "twisted",
            table: None,
            per_open: Some(per_open),
        });
    }
    if objects.is_empty() {
        return Err(CliError::input(match name {
            Some(n) => format!("object {n:?} does not resolve"),
            None => "fixture has no objects".into(),
        }));
    }
    let report = HomologyReport {
        format_version: FORMAT_VERSION,
        command: "homology",
        objects,
        ok: true,
    };
    common.emit(&report)?;
    Ok(0)
}

#[derive(Serialize)]
struct WeqReportDoc {
    format_version: u32,
    command: &'static str,
    morphism: String,
    closed: bool,
    weak_equivalence: bool,
    failures: Vec<WeqFailureDoc>,
}

#[derive(Serialize)]
struct WeqFailureDoc {
    open: usize,
    point: String,
    degree: i64,
}

fn named_morphism<'a>(
    loaded: &'a Loaded,
    name: &Option<String>,
) -> Result<(&'a str, &'a fixture::LoadedMorphism), CliError> {
    match name {
        Some(n) => loaded
            .morphisms
            .get_key_value(n)
            .map(|(k, v)| (k.as_str(), v))
            .ok_or_else(|| CliError::input(format!("morphism {n:?} does not resolve"))),
        None => {
            if loaded.morphisms.len() == 1 {
                let (k, v) = loaded.morphisms.iter().next().unwrap();
                Ok((k.as_str(), v))
            } else {
                Err(CliError::input(
                    "fixture does not have exactly one morphism; name one".into(),
                ))
            }
        }
    }
}

fn named_twisted(
    loaded: &Loaded,
    name: &Option<String>,
) -> Result<(String, TwistedComplex), CliError> {
    match name {
        Some(n) => Ok((n.clone(), loaded.endpoint(n)?)),
        None => {
            if loaded.twisteds.len() == 1 {
                let (k, v) = loaded.twisteds.iter().next().unwrap();
                Ok((k.clone(), v.clone()))
            } else {
                Err(CliError::input(
                    "fixture does not have exactly one twisted object; name one".into(),
                ))
            }
        }
    }
}

fn named_global(
    loaded: &Loaded,
    name: &Option<String>,
) -> Result<(String, GlobalComplex), CliError> {
    match name {
        Some(n) => loaded
            .globals
            .get(n)
            .cloned()
            .map(|g| (n.clone(), g))
            .ok_or_else(|| CliError::input(format!("global object {n:?} does not resolve"))),
        None => {
            if loaded.globals.len() == 1 {
                let (k, v) = loaded.globals.iter().next().unwrap();
                Ok((k.clone(), v.clone()))
            } else {
                Err(CliError::input(
                    "fixture does not have exactly one global object; name one".into(),
                ))
            }
        }
    }
}

pub fn run_weq(common: &Common) -> Result<u8, CliError> {
    let (loaded, name) = common.load()?;
    let (morphism_name, m) = named_morphism(&loaded, &name)?;
    let source = loaded.endpoint(&m.source)?;
    let target = loaded.endpoint(&m.target)?;
    let report = is_weak_equivalence(&m.cochain, &source, &target).map_err(CliError::math)?;
    let doc = WeqReportDoc {
        format_version: FORMAT_VERSION,
        command: "weq",
        morphism: morphism_name.to_string(),
        closed: true,
        weak_equivalence: report.is_equivalence,
        failures: report
            .failures
            .iter()
            .map(|f| WeqFailureDoc {
                open: f.open,
                point: f.point.clone(),
                degree: f.degree,
            })
            .collect(),
    };
    let ok = doc.weak_equivalence;
    common.emit(&doc)?;
    Ok(if ok { 0 } else { 1 })
}

fn emit_fixture(
    common: &Common,
    loaded: &Loaded,
    name: String,
    object: ObjectSchema,
) -> Result<u8, CliError> {
    let doc = FixtureFile {
        format_version: FORMAT_VERSION,
        field: loaded.field.to_string(),
        site: site_to_schema(&loaded.site),
        objects: BTreeMap::from([(name, object)]),
        morphisms: BTreeMap::new(),
    };
    common.emit(&doc)?;
    Ok(0)
}

pub fn run_cone(common: &Common) -> Result<u8, CliError> {
    let (loaded, name) = common.load()?;
    let (morphism_name, m) = named_morphism(&loaded, &name)?;
    let source = loaded.endpoint(&m.source)?;
    let target = loaded.endpoint(&m.target)?;
    let g = cone(&m.cochain, &source, &target).map_err(CliError::math)?;
    let schema = twisted_to_schema(&g, &loaded.site);
    emit_fixture(common, &loaded, format!("{morphism_name}.cone"), schema)
}

pub fn run_shift(common: &Common) -> Result<u8, CliError> {
    let (loaded, name) = common.load()?;
    let (obj_name, t) = named_twisted(&loaded, &name)?;
    t.validate().map_err(CliError::math)?;
    let s = shift(&t);
    let schema = twisted_to_schema(&s, &loaded.site);
    emit_fixture(common, &loaded, format!("{obj_name}.shift"), schema)
}

pub fn run_twist(common: &Common) -> Result<u8, CliError> {
    let (loaded, name) = common.load()?;
    let (obj_name, g) = named_global(&loaded, &name)?;
    let t = twist_object(&g).map_err(CliError::math)?;
    let schema = twisted_to_schema(&t, &loaded.site);
    emit_fixture(common, &loaded, format!("{obj_name}.twist"), schema)
}

#[derive(Serialize)]
struct GlobalizeReport {
    format_version: u32,
    command: &'static str,
    object: String,
    complex: ObjectSchema,
    phi: MorphismSchema,
    residuals: Residuals,
    weak_equivalence: bool,
    homology: Vec<OpenComparison>,
}

#[derive(Serialize)]
struct Residuals {
    intertwine: &'static str,
    maurer_cartan: &'static str,
}

#[derive(Serialize)]
struct OpenComparison {
    open: usize,
    source: Vec<HomologyEntry>,
    target: Vec<HomologyEntry>,
}

pub fn run_globalize(common: &Common) -> Result<u8, CliError> {
    let (loaded, name) = common.load()?;
    let (obj_name, t) = named_twisted(&loaded, &name)?;
    let cert = globalize(&t).map_err(CliError::math)?;
    debug_assert!(cert.intertwine_residual.is_zero());
    let homology = cert
        .weq
        .source_tables
        .iter()
        .zip(&cert.weq.target_tables)
        .enumerate()
        .map(|(i, (s, tgt))| OpenComparison {
            open: i,
            source: table_entries(s, &loaded),
            target: table_entries(tgt, &loaded),
        })
        .collect();
    let report = GlobalizeReport {
        format_version: FORMAT_VERSION,
        command: "globalize",
        object: obj_name.clone(),
        complex: global_to_schema(&cert.complex, &loaded.site),
        phi: morphism_to_schema(
            &cert.phi,
            &format!("{obj_name}.globalized"),
            &obj_name,
            0,
            &loaded.site,
        ),
        residuals: Residuals {
            intertwine: "zero",
            maurer_cartan: "zero",
        },
        weak_equivalence: cert.weq.is_equivalence,
        homology,
    };
    common.emit(&report)?;
    Ok(0)
}

#[derive(Serialize)]
struct DescendReport {
    format_version: u32,
    command: &'static str,
    morphism: String,
    phi_tilde: GlobalMorphismDoc,
    phi_hat: MorphismSchema,
    identity: &'static str,
}

#[derive(Serialize)]
struct GlobalMorphismDoc {
    degree: i64,
    closed: bool,
    entries: Vec<GlobalEntry>,
}

#[derive(Serialize)]
struct GlobalEntry {
    point: String,
    degree: i64,
    matrix: Vec<Vec<serde_json::Value>>,
}

pub fn run_descend_morphism(common: &Common) -> Result<u8, CliError> {
    let (loaded, name) = common.load()?;
    let (morphism_name, m) = named_morphism(&loaded, &name)?;
    let source = loaded.globals.get(&m.source).ok_or_else(|| {
        CliError::input(format!(
            "descend-morphism needs global endpoints; {:?} is not global",
            m.source
        ))
    })?;
    let target = loaded.globals.get(&m.target).ok_or_else(|| {
        CliError::input(format!(
            "descend-morphism needs global endpoints; {:?} is not global",
            m.target
        ))
    })?;
    let (tilde, hat) = descend_morphism(&m.cochain, source, target).map_err(CliError::math)?;
    let closed = global_hom_diff(&tilde, source, target)
        .map_err(CliError::math)?
        .is_zero();
    let entries = tilde
        .mats()
        .iter()
        .map(|(&(x, n), mm)| GlobalEntry {
            point: loaded.site.point_name(x).to_string(),
            degree: n,
            matrix: fixture::matrix_to_rows(mm),
        })
        .collect();
    let report = DescendReport {
        format_version: FORMAT_VERSION,
        command: "descend-morphism",
        morphism: morphism_name.to_string(),
        phi_tilde: GlobalMorphismDoc {
            degree: m.total_degree,
            closed,
            entries,
        },
        phi_hat: morphism_to_schema(&hat, &m.source, &m.target, m.total_degree - 1, &loaded.site),
        identity: "exact",
    };
    common.emit(&report)?;
    Ok(0)
}

#[derive(Serialize)]
struct RoundtripReport {
    format_version: u32,
    command: &'static str,
    object: String,
    weak_equivalence: bool,
    homology_match: bool,
    residuals: Residuals,
}

pub fn run_roundtrip(common: &Common) -> Result<u8, CliError> {
    let (loaded, name) = common.load()?;
    let (obj_name, g) = named_global(&loaded, &name)?;
    let t = twist_object(&g).map_err(CliError::math)?;
    let cert = globalize(&t).map_err(CliError::math)?;
    let recovered = local_homology(&loaded.site, cert.complex.bundle(), cert.complex.diff())
        .map_err(CliError::math)?;
    let original = local_homology(&loaded.site, g.bundle(), g.diff()).map_err(CliError::math)?;
    let homology_match = recovered == original;
    let report = RoundtripReport {
        format_version: FORMAT_VERSION,
        command: "roundtrip",
        object: obj_name,
        weak_equivalence: cert.weq.is_equivalence,
        homology_match,
        residuals: Residuals {
            intertwine: "zero",
            maurer_cartan: "zero",
        },
    };
    let ok = report.weak_equivalence && homology_match;
    common.emit(&report)?;
    Ok(if ok { 0 } else { 1 })
}
