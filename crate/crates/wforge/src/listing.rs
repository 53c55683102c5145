//! Catalog listing as text or JSON.

use serde::Serialize;
use wforge_core::catalog::{descriptors, FamilyDescriptor};

#[derive(Debug, Serialize)]
pub struct ParamEntry {
    pub name: String,
    pub domain: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub default: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct LimitEntry {
    pub lambda: f64,
    pub family: String,
}

#[derive(Debug, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub params: Vec<ParamEntry>,
    pub template: String,
    pub periodicity: String,
    pub assoc_angle: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cr_constant: Option<String>,
    pub limits: Vec<LimitEntry>,
    pub notes: String,
}

impl From<&FamilyDescriptor> for CatalogEntry {
    fn from(d: &FamilyDescriptor) -> Self {
        CatalogEntry {
            name: d.name.into(),
            params: d
                .params
                .iter()
                .map(|p| ParamEntry { name: p.name.into(), domain: p.to_string(), default: p.default })
                .collect(),
            template: d.template.into(),
            periodicity: d.periodicity.as_str().into(),
            assoc_angle: d.assoc_angle,
            cr_constant: d.cr_constant.map(|c| format!("{} (derived)", c)),
            limits: d.limits.iter().map(|(l, f)| LimitEntry { lambda: *l, family: f.name().into() }).collect(),
            notes: d.notes.into(),
        }
    }
}

pub fn entries() -> Vec<CatalogEntry> {
    descriptors().iter().map(CatalogEntry::from).collect()
}

pub fn to_json() -> String {
    let mut s = serde_json::to_string_pretty(&entries()).expect("catalog serializes");
    s.push('\n');
    s
}

/// Header plus one aligned line per family.
pub fn to_text() -> String {
    let rows: Vec<[String; 5]> = entries()
        .into_iter()
        .map(|e| {
            let params = if e.params.is_empty() {
                "-".to_string()
            } else {
                e.params.iter().map(|p| p.domain.clone()).collect::<Vec<_>>().join("; ")
            };
            [e.name, params, e.periodicity, e.cr_constant.unwrap_or_else(|| "-".into()), e.template]
        })
        .collect();
    let header = ["family", "parameters", "periodicity", "chern-ricci constant", "f(G)"].map(String::from);
    table(&header, &rows)
}

/// Left-aligned columns separated by two spaces.
pub fn table<const N: usize>(header: &[String; N], rows: &[[String; N]]) -> String {
    let mut widths = header.each_ref().map(|h| h.chars().count());
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: &[String; N]| {
        let mut s = String::new();
        for (k, c) in cells.iter().enumerate() {
            if k + 1 == N {
                s.push_str(c);
            } else {
                s.push_str(c);
                s.push_str(&" ".repeat(widths[k] - c.chars().count() + 2));
            }
        }
        s.trim_end().to_string()
    };
    let mut out = line(header);
    out.push('\n');
    for r in rows {
        out.push_str(&line(r));
        out.push('\n');
    }
    out
}
