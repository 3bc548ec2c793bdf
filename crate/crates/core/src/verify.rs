//! Consistency checks packaged as one report: module axioms, agreement of
//! the two Hilbert-scheme routes, duality, Euler characteristic, universal
//! coefficients, the leading-coefficient property and stored answers.

use std::fmt;

use serde::Serialize;

use crate::betti::{
    betti_hilb2_closed, betti_hilb2_exact, betti_sym2_f2, hilb2_euler, integral_sym2,
};
use crate::kernel::{corollary_check, kernel_summary, Mode};
use crate::spaces::{catalog_get, BettiTable, ManifoldDescriptor};

pub const DEFAULT_SEED: u64 = 2;
pub const DEFAULT_SAMPLES: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Note,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Note => "note",
        })
    }
}

/// Where a stored row comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Printed in the literature.
    Published,
    /// Computed independently (enumeration or a classical identification).
    Derived,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Published => "published",
            Provenance::Derived => "derived",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowKind {
    /// The computed table must match.
    Expected,
    /// A printed row known to disagree with the exact-sequence computation;
    /// both are reported and neither is treated as truth.
    Discrepancy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct KnownRow {
    pub name: &'static str,
    pub row: &'static [usize],
    pub provenance: Provenance,
    pub kind: RowKind,
    pub source: &'static str,
}

/// Stored Hilbert-scheme rows.
pub const KNOWN_HILB2: [KnownRow; 6] = [
    KnownRow {
        name: "p1",
        row: &[1, 0, 1, 0, 1],
        provenance: Provenance::Derived,
        kind: RowKind::Expected,
        source: "the two-point Hilbert scheme of P^1 is P^2",
    },
    KnownRow {
        name: "p2",
        row: &[1, 0, 2, 0, 3, 0, 2, 0, 1],
        provenance: Provenance::Derived,
        kind: RowKind::Expected,
        source: "closed-form enumeration",
    },
    KnownRow {
        name: "p3",
        row: &[1, 0, 2, 0, 4, 0, 4, 0, 4, 0, 2, 0, 1],
        provenance: Provenance::Derived,
        kind: RowKind::Expected,
        source: "closed-form enumeration",
    },
    KnownRow {
        name: "k3",
        row: &[1, 0, 23, 0, 276, 0, 23, 0, 1],
        provenance: Provenance::Derived,
        kind: RowKind::Expected,
        source: "closed-form enumeration; standard Betti numbers of K3^[2]",
    },
    KnownRow {
        name: "elliptic_y",
        row: &[1, 1, 13, 14, 92, 14, 13, 1, 1],
        provenance: Provenance::Published,
        kind: RowKind::Expected,
        source: "Y^[2] row of the Enriques/elliptic comparison table",
    },
    KnownRow {
        name: "enriques_x",
        row: &[1, 1, 13, 15, 94, 15, 13, 1, 1],
        provenance: Provenance::Published,
        kind: RowKind::Discrepancy,
        source: "X^[2] row of the Enriques/elliptic comparison table",
    },
];

pub fn known_row(name: &str) -> Option<&'static KnownRow> {
    KNOWN_HILB2.iter().find(|r| r.name == name)
}

/// Both rows of a known-answer comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowComparison {
    pub computed: Vec<usize>,
    pub reference: Vec<usize>,
    pub provenance: Provenance,
    pub kind: RowKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckEntry {
    pub check: String,
    pub status: Status,
    pub details: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rows: Option<RowComparison>,
}

impl CheckEntry {
    fn new(check: &str, status: Status, details: impl Into<String>) -> Self {
        CheckEntry {
            check: check.to_string(),
            status,
            details: details.into(),
            rows: None,
        }
    }

    fn from_bool(check: &str, ok: bool, details: impl Into<String>) -> Self {
        let status = if ok { Status::Pass } else { Status::Fail };
        CheckEntry::new(check, status, details)
    }
}

impl fmt::Display for CheckEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:<4}  {}: {}", self.status, self.check, self.details)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub name: String,
    pub seed: u64,
    pub entries: Vec<CheckEntry>,
}

impl Report {
    /// Notes never fail a report.
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.status != Status::Fail)
    }

    pub fn entry(&self, check: &str) -> Option<&CheckEntry> {
        self.entries.iter().find(|e| e.check == check)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(f, "{e}")?;
        }
        Ok(())
    }
}

fn row_string(row: &[usize]) -> String {
    row.iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// `dims[k] == dims[top - k]` for every `k` in `0..=top`.
pub fn check_duality(t: &BettiTable, top: usize) -> bool {
    t.dims().len() <= top + 1 && (0..=top).all(|k| t.get(k) == t.get(top - k))
}

/// Alternating sum equals `(chi^2 + chi)/2 + (n-1) chi`.
pub fn check_euler(d: &ManifoldDescriptor, t: &BettiTable) -> bool {
    t.euler() == hilb2_euler(d)
}

/// Compares a Hilbert-scheme table against the stored row for `d.name`.
/// Rows stored as discrepancies produce a note quoting both rows.
pub fn known_answers(d: &ManifoldDescriptor, t: &BettiTable) -> CheckEntry {
    let check = "known answer";
    let Some(known) = known_row(&d.name) else {
        return CheckEntry::new(
            check,
            Status::Note,
            format!("no stored row for `{}`", d.name),
        );
    };
    let computed = t.dims().to_vec();
    let matches = computed == known.row;
    let (status, details) = match (known.kind, matches) {
        (RowKind::Expected, true) => (
            Status::Pass,
            format!(
                "{} matches the {} row ({})",
                row_string(&computed),
                known.provenance,
                known.source
            ),
        ),
        (RowKind::Expected, false) => (
            Status::Fail,
            format!(
                "computed {} but the {} row is {} ({})",
                row_string(&computed),
                known.provenance,
                row_string(known.row),
                known.source
            ),
        ),
        (RowKind::Discrepancy, _) => (
            Status::Note,
            format!(
                "discrepancy: computed row {} vs {} row {} ({}); Euler characteristics {} and {}",
                row_string(&computed),
                known.provenance,
                row_string(known.row),
                known.source,
                t.euler(),
                BettiTable::new(t.label, t.top(), known.row.to_vec()).euler()
            ),
        ),
    };
    CheckEntry {
        rows: Some(RowComparison {
            computed,
            reference: known.row.to_vec(),
            provenance: known.provenance,
            kind: known.kind,
        }),
        ..CheckEntry::new(check, status, details)
    }
}

pub fn run_suite(d: &ManifoldDescriptor, seed: u64) -> Report {
    let mut entries = Vec::new();
    let sq1_zero = d.module.is_sq1_zero();

    let validation = d.validate();
    entries.push(CheckEntry::from_bool(
        "module validation",
        validation.is_valid(),
        if validation.is_valid() {
            format!("valid; {} note(s)", validation.notes.len())
        } else {
            validation
                .violations
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join("; ")
        },
    ));

    let summary = kernel_summary(d, Mode::All);
    let redundancy = summary.redundancy();
    entries.push(if redundancy.is_empty() {
        CheckEntry::new(
            "kernel generators",
            Status::Pass,
            "nonzero generators are independent",
        )
    } else {
        CheckEntry::new(
            "kernel generators",
            Status::Note,
            format!("redundant generators by degree: {redundancy:?}"),
        )
    });

    let exact = betti_hilb2_exact(d);
    if sq1_zero {
        let entry = match (&exact, &betti_hilb2_closed(d)) {
            (Ok(a), Ok(b)) => CheckEntry::from_bool(
                "method agreement",
                a == b,
                format!("exact {a} / closed {b}"),
            ),
            (Err(e), _) | (_, Err(e)) => {
                CheckEntry::new("method agreement", Status::Fail, e.to_string())
            }
        };
        entries.push(entry);
    } else {
        entries.push(CheckEntry::new(
            "method agreement",
            Status::Note,
            "skipped: Sq^1 is nonzero, closed form does not apply",
        ));
    }

    match &exact {
        Ok(t) => {
            let top = 2 * d.real_dimension();
            if d.compact {
                entries.push(CheckEntry::from_bool(
                    "duality",
                    check_duality(t, top),
                    format!("{t} on [0, {top}]"),
                ));
            } else {
                entries.push(CheckEntry::new(
                    "duality",
                    Status::Note,
                    "skipped: X is not compact (Borel-Moore caveat)",
                ));
            }
            entries.push(CheckEntry::from_bool(
                "euler",
                check_euler(d, t),
                format!(
                    "alternating sum {} vs expected {}",
                    t.euler(),
                    hilb2_euler(d)
                ),
            ));
        }
        Err(e) => {
            entries.push(CheckEntry::new("duality", Status::Fail, e.to_string()));
            entries.push(CheckEntry::new("euler", Status::Fail, e.to_string()));
        }
    }

    entries.push(match integral_sym2(d) {
        Ok(profile) => {
            let f2 = betti_sym2_f2(d);
            let bad: Vec<usize> = (0..=f2.top())
                .filter(|&k| {
                    let g = profile.get(k);
                    let prev = if k > 0 {
                        profile.get(k - 1).two_torsion
                    } else {
                        0
                    };
                    f2.get(k) != g.free_rank + g.two_torsion + prev
                })
                .collect();
            CheckEntry::from_bool(
                "universal coefficients",
                bad.is_empty(),
                if bad.is_empty() {
                    format!("sym2 F2 row {f2} consistent with integral profile")
                } else {
                    format!("mismatch in degrees {bad:?}")
                },
            )
        }
        Err(_) => CheckEntry::new(
            "universal coefficients",
            Status::Note,
            "skipped: torsion_free flag not set",
        ),
    });

    entries.push(if sq1_zero {
        match corollary_check(d, DEFAULT_SAMPLES, seed) {
            Ok(r) => CheckEntry::from_bool("corollary", r.passed(), r.to_string()),
            Err(e) => CheckEntry::new("corollary", Status::Fail, e.to_string()),
        }
    } else {
        CheckEntry::new("corollary", Status::Note, "skipped: Sq^1 is nonzero")
    });

    entries.push(match &exact {
        Ok(t) => known_answers(d, t),
        Err(e) => CheckEntry::new("known answer", Status::Fail, e.to_string()),
    });

    Report {
        name: d.name.clone(),
        seed,
        entries,
    }
}

/// A single-entry change to a catalog descriptor's Steenrod data.
pub struct Mutant {
    pub catalog: &'static str,
    pub description: &'static str,
    apply: fn(&mut ManifoldDescriptor),
}

impl Mutant {
    pub fn build(&self) -> ManifoldDescriptor {
        let mut d = catalog_get(self.catalog).expect("catalog entry");
        (self.apply)(&mut d);
        d
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MutantOutcome {
    pub catalog: &'static str,
    pub description: &'static str,
    pub rejected: bool,
    pub suite_changed: bool,
}

impl MutantOutcome {
    pub fn detected(&self) -> bool {
        self.rejected || self.suite_changed
    }
}

fn set(d: &mut ManifoldDescriptor, k: usize, from: &str, to: &[&str]) {
    d.module.set_sq(k, from, to).expect("catalog classes");
}

pub fn standard_mutants() -> Vec<Mutant> {
    vec![
        Mutant {
            catalog: "p2",
            description: "drop Sq^2 h = h2",
            apply: |d| set(d, 2, "h", &[]),
        },
        Mutant {
            catalog: "p1",
            description: "add Sq^2 1 = h",
            apply: |d| set(d, 2, "1", &["h"]),
        },
        Mutant {
            catalog: "p3",
            description: "add Sq^2 h2 = h3",
            apply: |d| set(d, 2, "h2", &["h3"]),
        },
        Mutant {
            catalog: "k3",
            description: "add Sq^2 x1 = w",
            apply: |d| set(d, 2, "x1", &["w"]),
        },
        Mutant {
            catalog: "enriques_x",
            description: "add Sq^1 t2 = s",
            apply: |d| set(d, 1, "t2", &["s"]),
        },
        Mutant {
            catalog: "elliptic_y",
            description: "add Sq^1 x1 = s",
            apply: |d| set(d, 1, "x1", &["s"]),
        },
    ]
}

/// Runs every standard mutant against validation and the suite.
pub fn mutation_smoke(seed: u64) -> Vec<MutantOutcome> {
    standard_mutants()
        .iter()
        .map(|m| {
            let original = run_suite(&catalog_get(m.catalog).expect("catalog entry"), seed);
            let mutant = m.build();
            MutantOutcome {
                catalog: m.catalog,
                description: m.description,
                rejected: !mutant.validate().is_valid(),
                suite_changed: run_suite(&mutant, seed).entries != original.entries,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{SpaceLabel, CATALOG_NAMES};

    fn desc(name: &str) -> ManifoldDescriptor {
        catalog_get(name).unwrap()
    }

    #[test]
    fn duality_examples() {
        let t = |dims: Vec<usize>| BettiTable::new(SpaceLabel::Hilb2, 8, dims);
        assert!(check_duality(&t(vec![1, 0, 1, 0, 1]), 4));
        assert!(check_duality(&t(vec![1, 2, 1]), 2));
        assert!(!check_duality(&t(vec![1, 1, 0]), 2));
        assert!(!check_duality(&t(vec![1, 0, 1, 0, 1]), 2));
    }

    #[test]
    fn euler_examples() {
        let t = |dims: Vec<usize>| BettiTable::new(SpaceLabel::Hilb2, 12, dims);
        assert!(check_euler(
            &desc("p2"),
            &t(vec![1, 0, 2, 0, 3, 0, 2, 0, 1])
        ));
        assert!(check_euler(&desc("p1"), &t(vec![1, 0, 1, 0, 1])));
        let x = desc("enriques_x");
        assert!(check_euler(&x, &betti_hilb2_exact(&x).unwrap()));
        assert!(!check_euler(&desc("p1"), &t(vec![1, 0, 2, 0, 1])));
    }

    #[test]
    fn known_answer_entries() {
        for (name, status) in [
            ("elliptic_y", Status::Pass),
            ("p1", Status::Pass),
            ("k3", Status::Pass),
            ("enriques_x", Status::Note),
        ] {
            let d = desc(name);
            let e = known_answers(&d, &betti_hilb2_exact(&d).unwrap());
            assert_eq!(e.status, status, "{name}: {e}");
        }
        let x = desc("enriques_x");
        let e = known_answers(&x, &betti_hilb2_exact(&x).unwrap());
        assert!(e.details.contains("1 1 13 13 90 13 13 1 1"));
        assert!(e.details.contains("1 1 13 15 94 15 13 1 1"));
        let rows = e.rows.unwrap();
        assert_eq!(rows.kind, RowKind::Discrepancy);
        assert_eq!(rows.provenance, Provenance::Published);

        let wrong = BettiTable::new(SpaceLabel::Hilb2, 4, vec![1, 0, 2, 0, 1]);
        assert_eq!(known_answers(&desc("p1"), &wrong).status, Status::Fail);
    }

    #[test]
    fn catalog_suites() {
        for name in CATALOG_NAMES {
            let r = run_suite(&desc(name), DEFAULT_SEED);
            assert!(r.passed(), "{name}:\n{r}");
        }
        let k3 = run_suite(&desc("k3"), DEFAULT_SEED);
        assert!(k3.entries.iter().all(|e| e.status == Status::Pass), "{k3}");
        let y = run_suite(&desc("elliptic_y"), DEFAULT_SEED);
        assert_eq!(y.entry("known answer").unwrap().status, Status::Pass);
        let x = run_suite(&desc("enriques_x"), DEFAULT_SEED);
        assert_eq!(x.entry("duality").unwrap().status, Status::Pass);
        assert_eq!(x.entry("euler").unwrap().status, Status::Pass);
        assert_eq!(x.entry("known answer").unwrap().status, Status::Note);
    }

    #[test]
    fn suite_is_deterministic() {
        let d = desc("p3");
        assert_eq!(run_suite(&d, 11), run_suite(&d, 11));
    }

    #[test]
    fn report_json_shape() {
        let r = run_suite(&desc("p1"), DEFAULT_SEED);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        for e in v["entries"].as_array().unwrap() {
            assert!(e["check"].is_string());
            assert!(matches!(
                e["status"].as_str(),
                Some("pass" | "fail" | "note")
            ));
            assert!(e["details"].is_string());
        }
    }

    #[test]
    fn every_mutant_is_detected() {
        let outcomes = mutation_smoke(DEFAULT_SEED);
        assert!(outcomes.len() >= 5);
        for o in &outcomes {
            assert!(o.detected(), "{o:?}");
        }
        let y = outcomes.iter().find(|o| o.catalog == "elliptic_y").unwrap();
        assert!(!y.rejected && y.suite_changed);
    }
}
