//! Manifold descriptors: the JSON input format, loading and validation,
//! Betti tables, and the built-in catalog.

mod catalog;

pub use catalog::{catalog_export, catalog_get, CATALOG_NAMES};

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2::ClassId;
use crate::steenrod::{Class, SteenrodError, UnstableModule, ValidationReport, ViolationKind};

#[derive(Debug, Error)]
pub enum SpaceError {
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("{location}: {message}")]
    Schema { location: String, message: String },
    #[error("descriptor `{name}` is invalid:\n{report}")]
    Invalid {
        name: String,
        report: ValidationReport,
    },
    #[error("unknown catalog entry `{0}`")]
    UnknownCatalogEntry(String),
}

impl SpaceError {
    fn schema(location: impl Into<String>, message: impl fmt::Display) -> Self {
        SpaceError::Schema {
            location: location.into(),
            message: message.to_string(),
        }
    }

    /// Input errors are malformed files; everything else is a mathematical violation.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, SpaceError::Invalid { .. })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegralFlags {
    pub two_torsion_free: bool,
    pub torsion_free: bool,
    pub even_degrees_only: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassEntry {
    name: String,
    degree: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SqEntry {
    k: usize,
    from: String,
    to: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CupEntry {
    a: String,
    b: String,
    result: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DescriptorFile {
    name: String,
    complex_dimension: usize,
    compact: bool,
    classes: Vec<ClassEntry>,
    #[serde(default)]
    sq: Vec<SqEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cup: Option<Vec<CupEntry>>,
    #[serde(default)]
    integral: IntegralFlags,
}

/// Finite model of a complex manifold X of complex dimension n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifoldDescriptor {
    pub name: String,
    pub complex_dimension: usize,
    pub compact: bool,
    pub module: UnstableModule,
    pub integral: IntegralFlags,
}

impl ManifoldDescriptor {
    pub fn n(&self) -> usize {
        self.complex_dimension
    }

    /// Real dimension 2n.
    pub fn real_dimension(&self) -> usize {
        2 * self.complex_dimension
    }

    /// Degrees of the basis classes, in declaration order.
    pub fn basis_degrees(&self) -> Vec<usize> {
        self.module.basis().iter().map(|c| c.degree).collect()
    }

    /// Euler characteristic of X.
    pub fn euler_characteristic(&self) -> i64 {
        self.module
            .basis()
            .iter()
            .map(|c| if c.degree % 2 == 0 { 1 } else { -1 })
            .sum()
    }

    /// Module axioms plus descriptor invariants.
    pub fn validate(&self) -> ValidationReport {
        let mut report = self.module.validate();
        self.check_invariants(&mut report);
        report
    }

    fn check_invariants(&self, report: &mut ValidationReport) {
        let n2 = self.real_dimension();
        let zeros = self.module.classes_in_degree(0);
        if zeros.len() != 1 {
            report.push(
                ViolationKind::Descriptor,
                zeros.first().map_or("", |&id| self.module.name(id)),
                "connectedness",
                format!(
                    "expected exactly one class in degree 0, found {}",
                    zeros.len()
                ),
            );
        }
        for c in self.module.basis() {
            if c.degree > n2 {
                report.push(
                    ViolationKind::Descriptor,
                    &c.name,
                    "degree range",
                    format!("degree {} exceeds the real dimension {n2}", c.degree),
                );
            }
        }
        if self.compact {
            let tops = self.module.classes_in_degree(n2);
            if tops.len() != 1 {
                report.push(
                    ViolationKind::Descriptor,
                    tops.first().map_or("", |&id| self.module.name(id)),
                    "fundamental class",
                    format!(
                        "compact X needs exactly one class in degree {n2}, found {}",
                        tops.len()
                    ),
                );
            }
            let b = self.module.betti();
            for k in 0..=n2 {
                let (lo, hi) = (
                    b.get(k).copied().unwrap_or(0),
                    b.get(n2 - k).copied().unwrap_or(0),
                );
                if k < n2 - k && lo != hi {
                    report.push(
                        ViolationKind::Descriptor,
                        "",
                        "Poincare symmetry",
                        format!("b_{k} = {lo} but b_{} = {hi}", n2 - k),
                    );
                }
            }
        }
        if self.integral.torsion_free && !self.integral.two_torsion_free {
            report.push(
                ViolationKind::Descriptor,
                "",
                "integral flags",
                "torsion_free requires two_torsion_free",
            );
        }
    }

    /// Parses a descriptor without checking module axioms or invariants.
    pub fn parse(text: &str) -> Result<Self, SpaceError> {
        let file: DescriptorFile = serde_json::from_str(text)?;
        if file.complex_dimension == 0 {
            return Err(SpaceError::schema(
                "complex_dimension",
                "must be at least 1",
            ));
        }
        let basis = file
            .classes
            .iter()
            .map(|c| Class {
                name: c.name.clone(),
                degree: c.degree,
            })
            .collect();
        let mut module = UnstableModule::new(basis, 2 * file.complex_dimension)
            .map_err(|e| SpaceError::schema("classes", e))?;
        let mut seen = std::collections::BTreeSet::new();
        for (i, e) in file.sq.iter().enumerate() {
            let loc = format!("sq[{i}]");
            if e.k == 0 {
                return Err(SpaceError::schema(
                    loc,
                    SteenrodError::ZeroSquare(e.from.clone()),
                ));
            }
            let from = module
                .id(&e.from)
                .map_err(|err| SpaceError::schema(format!("{loc}.from"), err))?;
            if !seen.insert((e.k, from)) {
                return Err(SpaceError::schema(
                    loc,
                    format!("duplicate entry for Sq^{} `{}`", e.k, e.from),
                ));
            }
            let to = resolve(&module, &e.to, &format!("{loc}.to"))?;
            module.set_sq_ids(e.k, from, to);
        }
        if let Some(cup) = &file.cup {
            module.enable_cup();
            let mut seen = std::collections::BTreeSet::new();
            for (i, e) in cup.iter().enumerate() {
                let loc = format!("cup[{i}]");
                let a = module
                    .id(&e.a)
                    .map_err(|err| SpaceError::schema(format!("{loc}.a"), err))?;
                let b = module
                    .id(&e.b)
                    .map_err(|err| SpaceError::schema(format!("{loc}.b"), err))?;
                if !seen.insert((a.min(b), a.max(b))) {
                    return Err(SpaceError::schema(
                        loc,
                        format!("duplicate product `{}` x `{}`", e.a, e.b),
                    ));
                }
                let result = resolve(&module, &e.result, &format!("{loc}.result"))?;
                module.set_cup_ids(a, b, result);
            }
        }
        Ok(ManifoldDescriptor {
            name: file.name,
            complex_dimension: file.complex_dimension,
            compact: file.compact,
            module,
            integral: file.integral,
        })
    }

    pub fn to_json(&self) -> String {
        let m = &self.module;
        let names = |ids: &std::collections::BTreeSet<ClassId>| -> Vec<String> {
            ids.iter().map(|&id| m.name(id).to_string()).collect()
        };
        let file = DescriptorFile {
            name: self.name.clone(),
            complex_dimension: self.complex_dimension,
            compact: self.compact,
            classes: m
                .basis()
                .iter()
                .map(|c| ClassEntry {
                    name: c.name.clone(),
                    degree: c.degree,
                })
                .collect(),
            sq: m
                .sq_entries()
                .map(|(k, from, to)| SqEntry {
                    k,
                    from: m.name(from).to_string(),
                    to: names(to),
                })
                .collect(),
            cup: m.cup_entries().map(|entries| {
                entries
                    .map(|(a, b, r)| CupEntry {
                        a: m.name(a).to_string(),
                        b: m.name(b).to_string(),
                        result: names(r),
                    })
                    .collect()
            }),
            integral: self.integral,
        };
        let mut s = serde_json::to_string_pretty(&file).expect("descriptor serializes");
        s.push('\n');
        s
    }
}

fn resolve(
    module: &UnstableModule,
    names: &[String],
    loc: &str,
) -> Result<Vec<ClassId>, SpaceError> {
    names
        .iter()
        .enumerate()
        .map(|(i, n)| {
            module
                .id(n)
                .map_err(|e| SpaceError::schema(format!("{loc}[{i}]"), e))
        })
        .collect()
}

/// Parses and fully validates a descriptor.
pub fn load_descriptor(text: &str) -> Result<ManifoldDescriptor, SpaceError> {
    let d = ManifoldDescriptor::parse(text)?;
    let report = d.validate();
    if !report.is_valid() {
        return Err(SpaceError::Invalid {
            name: d.name,
            report,
        });
    }
    Ok(d)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceLabel {
    X,
    Exceptional,
    Sym2,
    Config,
    Hilb2,
}

impl fmt::Display for SpaceLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpaceLabel::X => "x",
            SpaceLabel::Exceptional => "exceptional",
            SpaceLabel::Sym2 => "sym2",
            SpaceLabel::Config => "config",
            SpaceLabel::Hilb2 => "hilb2",
        })
    }
}

/// Per-degree dimensions. Trailing zero degrees are dropped; any degree
/// not stored is zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiTable {
    pub label: SpaceLabel,
    dims: Vec<usize>,
    /// Largest degree that can be nonzero for this space.
    top: usize,
}

impl BettiTable {
    pub fn new(label: SpaceLabel, top: usize, mut dims: Vec<usize>) -> Self {
        assert!(
            dims.iter().skip(top + 1).all(|&d| d == 0),
            "{label} table has classes above degree {top}"
        );
        while dims.last() == Some(&0) {
            dims.pop();
        }
        BettiTable { label, dims, top }
    }

    pub fn get(&self, k: usize) -> usize {
        self.dims.get(k).copied().unwrap_or(0)
    }

    /// Signed lookup; negative degrees are zero.
    pub fn at(&self, k: i64) -> usize {
        if k < 0 {
            0
        } else {
            self.get(k as usize)
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn euler(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(k, &d)| if k % 2 == 0 { d as i64 } else { -(d as i64) })
            .sum()
    }

    pub fn total(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Space-separated dimensions from degree 0 to the last nonzero degree.
    pub fn row(&self) -> String {
        self.dims
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for BettiTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.row())
    }
}

pub fn betti_of_x(d: &ManifoldDescriptor) -> BettiTable {
    BettiTable::new(SpaceLabel::X, d.real_dimension(), d.module.betti())
}
