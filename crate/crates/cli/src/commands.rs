use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use hilb2_core::betti::{
    betti_config, betti_hilb2_closed, betti_hilb2_exact, betti_sym2_f2, integral_sym2, BettiError,
};
use hilb2_core::exdiv::betti_exceptional;
use hilb2_core::kernel::{kernel_generators, kernel_summary, Mode};
use hilb2_core::spaces::{self, catalog_get, CATALOG_NAMES};
use hilb2_core::verify::{known_answers, run_suite, Status};
use hilb2_core::{betti_of_x, BettiTable, ManifoldDescriptor, SpaceError};
use serde_json::json;

use crate::{Format, IntegralSpace, KernelMode, Method, ReportFormat, Space};

// Output goes to a closed pipe silently instead of panicking, as with `| head`.
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

macro_rules! put {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = write!(std::io::stdout(), $($t)*);
    }};
}

pub const CATALOG_DIR_ENV: &str = "HILB2_CATALOG_DIR";

pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }

    fn math(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn catalog_dir() -> Option<PathBuf> {
    std::env::var_os(CATALOG_DIR_ENV).map(PathBuf::from)
}

/// Descriptor text for a catalog name, preferring the override directory.
fn catalog_text(name: &str) -> Result<String, Failure> {
    if let Some(dir) = catalog_dir() {
        let file = dir.join(format!("{name}.json"));
        if file.is_file() {
            return fs::read_to_string(&file)
                .map_err(|e| Failure::input(format!("cannot read {}: {e}", file.display())));
        }
    }
    spaces::catalog_export(name).map_err(|e| Failure::input(e.to_string()))
}

/// Reads a descriptor file; a path that does not exist is tried as a catalog name.
fn read_source(path: &Path) -> Result<String, Failure> {
    if path.exists() {
        return fs::read_to_string(path)
            .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())));
    }
    match path.to_str() {
        Some(name) if !name.contains(['/', '.']) => catalog_text(name)
            .map_err(|_| Failure::input(format!("{name}: no such file or catalog entry"))),
        _ => Err(Failure::input(format!("{}: no such file", path.display()))),
    }
}

fn space_error(e: SpaceError) -> Failure {
    if e.is_input_error() {
        Failure::input(e.to_string())
    } else {
        Failure::math(e.to_string())
    }
}

fn load(path: &Path) -> Result<ManifoldDescriptor, Failure> {
    spaces::load_descriptor(&read_source(path)?).map_err(space_error)
}

pub fn validate(path: &Path, format: ReportFormat) -> CmdResult {
    let text = read_source(path)?;
    let d = ManifoldDescriptor::parse(&text).map_err(space_error)?;
    let report = d.validate();
    match format {
        ReportFormat::Text => put!("{report}"),
        ReportFormat::Json => out!(
            "{}",
            serde_json::to_string_pretty(&report).expect("report serializes")
        ),
    }
    if report.is_valid() {
        Ok(())
    } else {
        Err(Failure::math(format!(
            "{} violation(s) in `{}`",
            report.violations.len(),
            d.name
        )))
    }
}

pub fn betti(path: &Path, space: Space, method: Option<Method>, format: Format) -> CmdResult {
    let d = load(path)?;
    if method.is_some() && space != Space::Hilb2 {
        return Err(Failure::input("--method applies to --space hilb2 only"));
    }
    let mut notes = Vec::new();
    if !d.compact {
        notes.push("X is not compact; duality checks do not apply".to_string());
    }
    let single = |t: BettiTable, notes: Vec<String>| {
        print_rows(&d, &t.label.to_string(), &[(None, &t)], &notes, format);
        Ok(())
    };
    match space {
        Space::X => single(betti_of_x(&d), notes),
        Space::Exceptional => single(betti_exceptional(&d), notes),
        Space::Sym2 => single(betti_sym2_f2(&d), notes),
        Space::Config => single(betti_config(&d), notes),
        Space::Hilb2 => {
            let method = method.unwrap_or(Method::Exact);
            let math = |e: BettiError| Failure::math(e.to_string());
            let exact = match method {
                Method::Exact | Method::Both => Some(betti_hilb2_exact(&d).map_err(math)?),
                Method::Closed => None,
            };
            // with --method both an inapplicable closed form still shows the exact row
            let closed = match method {
                Method::Closed => Some(Ok(betti_hilb2_closed(&d).map_err(math)?)),
                Method::Both => Some(betti_hilb2_closed(&d)),
                Method::Exact => None,
            };
            let (closed, closed_err) = match closed {
                Some(Ok(t)) => (Some(t), None),
                Some(Err(e)) => (None, Some(e)),
                None => (None, None),
            };
            let known = known_answers(
                &d,
                exact.as_ref().or(closed.as_ref()).expect("one method ran"),
            );
            if known.status != Status::Pass && known.rows.is_some() {
                notes.push(format!("known answer: {}", known.details));
            }
            let mut rows = Vec::new();
            if let Some(t) = &exact {
                rows.push((Some("exact"), t));
            }
            if let Some(t) = &closed {
                rows.push((Some("closed"), t));
            }
            print_rows(&d, "hilb2", &rows, &notes, format);
            if let Some(e) = closed_err {
                return Err(math(e));
            }
            match (&exact, &closed) {
                (Some(a), Some(b)) if a != b => Err(Failure {
                    code: 3,
                    message: format!("methods disagree: exact {a} vs closed {b}"),
                }),
                _ if known.status == Status::Fail => Err(Failure::math(known.details)),
                _ => Ok(()),
            }
        }
    }
}

fn print_rows(
    d: &ManifoldDescriptor,
    space: &str,
    rows: &[(Option<&str>, &BettiTable)],
    notes: &[String],
    format: Format,
) {
    match format {
        Format::Table => {
            for (method, t) in rows {
                match method {
                    Some(m) if rows.len() > 1 => out!("{m}: {t}"),
                    _ => out!("{t}"),
                }
            }
            for n in notes {
                out!("note: {n}");
            }
        }
        Format::Csv => {
            for (method, t) in rows {
                if rows.len() > 1 {
                    out!("# method={}", method.unwrap_or(""));
                }
                out!("degree,dimension");
                for (k, dim) in t.dims().iter().enumerate() {
                    out!("{k},{dim}");
                }
            }
            for n in notes {
                out!("# note: {n}");
            }
        }
        Format::Json => {
            let rows: Vec<_> = rows
                .iter()
                .map(|(method, t)| json!({ "method": method, "dims": t.dims() }))
                .collect();
            let value = json!({ "name": d.name, "space": space, "rows": rows, "notes": notes });
            out!("{}", serde_json::to_string_pretty(&value).expect("json"));
        }
    }
}

pub fn kernel(path: &Path, degree: Option<usize>, generators: bool, mode: KernelMode) -> CmdResult {
    let d = load(path)?;
    let mode = match mode {
        KernelMode::All => Mode::All,
        KernelMode::Families12 => Mode::Families12,
    };
    let summary = kernel_summary(&d, mode);
    match degree {
        Some(k) => out!("{k}: {}", summary.dimensions.get(&k).copied().unwrap_or(0)),
        None => out!(
            "{}",
            summary
                .dimensions
                .iter()
                .map(|(k, v)| format!("{k}:{v}"))
                .collect::<Vec<_>>()
                .join(" ")
        ),
    }
    if generators {
        for g in kernel_generators(&d, mode) {
            if degree.is_some_and(|k| g.value.degree() != k as i64) {
                continue;
            }
            let zero = if g.is_zero() { " (zero)" } else { "" };
            out!(
                "family {} u={} j={} degree {}: {}{zero}",
                g.family.number(),
                d.module.name(g.source),
                g.j,
                g.value.degree(),
                g.value.display(&d.module)
            );
        }
    }
    let redundancy: BTreeMap<usize, usize> = summary.redundancy();
    if !redundancy.is_empty() {
        let parts: Vec<String> = redundancy.iter().map(|(k, r)| format!("{k}:{r}")).collect();
        out!("note: redundant generators by degree {}", parts.join(" "));
    }
    Ok(())
}

pub fn integral(path: &Path, space: IntegralSpace) -> CmdResult {
    let d = load(path)?;
    match space {
        IntegralSpace::Sym2 => {
            let profile = integral_sym2(&d).map_err(|e| Failure::math(e.to_string()))?;
            put!("{profile}");
        }
    }
    Ok(())
}

pub fn check(path: &Path, seed: u64, format: ReportFormat) -> CmdResult {
    let d = load(path)?;
    let report = run_suite(&d, seed);
    match format {
        ReportFormat::Text => put!("{report}"),
        ReportFormat::Json => out!("{}", report.to_json()),
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::math(format!("suite failed for `{}`", d.name)))
    }
}

fn catalog_names() -> Vec<String> {
    let mut names: Vec<String> = CATALOG_NAMES.iter().map(|s| s.to_string()).collect();
    if let Some(dir) = catalog_dir() {
        if let Ok(entries) = fs::read_dir(dir) {
            let mut extra: Vec<String> = entries
                .filter_map(|e| e.ok())
                .filter_map(|e| {
                    let p = e.path();
                    (p.extension()? == "json").then(|| p.file_stem()?.to_str().map(String::from))?
                })
                .filter(|n| !names.contains(n))
                .collect();
            extra.sort();
            names.extend(extra);
        }
    }
    names
}

pub fn catalog_list() -> CmdResult {
    for name in catalog_names() {
        out!("{name}");
    }
    Ok(())
}

pub fn catalog_show(name: &str) -> CmdResult {
    if !catalog_names().iter().any(|n| n == name) {
        return Err(Failure::input(format!("unknown catalog entry `{name}`")));
    }
    let d = spaces::load_descriptor(&catalog_text(name)?).map_err(space_error)?;
    let f = d.integral;
    out!("name: {}", d.name);
    out!("complex dimension: {}", d.n());
    out!("compact: {}", d.compact);
    out!("betti: {}", betti_of_x(&d));
    out!("classes: {}", d.module.len());
    out!("sq entries: {}", d.module.sq_entries().count());
    out!(
        "cup table: {}",
        if d.module.has_cup() { "yes" } else { "no" }
    );
    out!("sq1 zero: {}", d.module.is_sq1_zero());
    out!(
        "integral: two_torsion_free={} torsion_free={} even_degrees_only={}",
        f.two_torsion_free,
        f.torsion_free,
        f.even_degrees_only
    );
    Ok(())
}

pub fn catalog_export(name: &str, output: Option<&Path>) -> CmdResult {
    let text = if catalog_names().iter().any(|n| n == name) {
        catalog_text(name)?
    } else {
        // reports the unknown name
        catalog_get(name).map_err(|e| Failure::input(e.to_string()))?;
        unreachable!("catalog_get accepted a name missing from the catalog list")
    };
    match output {
        Some(p) => fs::write(p, text)
            .map_err(|e| Failure::input(format!("cannot write {}: {e}", p.display()))),
        None => {
            put!("{text}");
            Ok(())
        }
    }
}
