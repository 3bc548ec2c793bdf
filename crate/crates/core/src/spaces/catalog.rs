//! Built-in descriptors.
//!
//! | name         | n | notes                                                         |
//! |--------------|---|---------------------------------------------------------------|
//! | `p1`..`p3`   |   | projective spaces, full cup tables, `Sq^2i h^j = binom(j,i) h^(i+j)` |
//! | `k3`         | 2 | cup form `3H + 2E8` reduced mod 2; even form, so `Sq^2 = 0` on H^2 |
//! | `enriques_x` | 2 | Enriques surface, `Sq^1 t = t2`, `Sq^1 x1 = s`                 |
//! | `elliptic_y` | 2 | elliptic surface with multiple fibres 4,4; same F2 Betti numbers, `Sq^1 = 0` |
//!
//! The Enriques entry is in a normal form forced only by the ranks of `Sq^1`
//! (1, 1, 0 out of H^1, H^2, H^3), which the integral groups
//! `Z, 0, Z^10 + Z/2, Z/2, Z` determine. Its true `Sq^2` on H^2 is the cup
//! product with the canonical class mod 2; it is stored as zero here because
//! for surfaces neither the kernel dimensions nor the Hilbert-scheme Betti
//! numbers depend on `Sq^2` on H^2. No cup table is given for either
//! elliptic surface.

use crate::steenrod::{Class, UnstableModule};

use super::{IntegralFlags, ManifoldDescriptor, SpaceError};

pub const CATALOG_NAMES: [&str; 6] = ["p1", "p2", "p3", "k3", "enriques_x", "elliptic_y"];

const TORSION_FREE_EVEN: IntegralFlags = IntegralFlags {
    two_torsion_free: true,
    torsion_free: true,
    even_degrees_only: true,
};

pub fn catalog_get(name: &str) -> Result<ManifoldDescriptor, SpaceError> {
    match name {
        "p1" => Ok(projective(1)),
        "p2" => Ok(projective(2)),
        "p3" => Ok(projective(3)),
        "k3" => Ok(k3()),
        "enriques_x" => Ok(enriques_x()),
        "elliptic_y" => Ok(elliptic_y()),
        other => Err(SpaceError::UnknownCatalogEntry(other.to_string())),
    }
}

/// The descriptor file for a catalog entry.
pub fn catalog_export(name: &str) -> Result<String, SpaceError> {
    catalog_get(name).map(|d| d.to_json())
}

fn class(name: impl Into<String>, degree: usize) -> Class {
    Class {
        name: name.into(),
        degree,
    }
}

fn power_name(j: usize) -> String {
    match j {
        0 => "1".to_string(),
        1 => "h".to_string(),
        j => format!("h{j}"),
    }
}

fn projective(n: usize) -> ManifoldDescriptor {
    let basis = (0..=n).map(|j| class(power_name(j), 2 * j)).collect();
    let mut module = UnstableModule::new(basis, 2 * n).expect("distinct names");
    module.enable_cup();
    for i in 1..=n {
        for j in i..=n {
            if i + j <= n {
                module
                    .set_cup(&power_name(i), &power_name(j), &[&power_name(i + j)])
                    .expect("known classes");
            }
        }
    }
    // Sq^{2i} h^j = binom(j, i) h^{i+j}, for 1 <= i <= j
    for j in 1..=n {
        for i in 1..=j {
            if i + j <= n && crate::steenrod::binomial_mod2(j as i64, i as i64) {
                module
                    .set_sq(2 * i, &power_name(j), &[&power_name(i + j)])
                    .expect("known classes");
            }
        }
    }
    ManifoldDescriptor {
        name: format!("p{n}"),
        complex_dimension: n,
        compact: true,
        module,
        integral: TORSION_FREE_EVEN,
    }
}

/// Edges of the E8 Dynkin diagram on nodes 0..8: a chain of seven with the
/// eighth node attached to the fifth.
const E8_EDGES: [(usize, usize); 7] = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)];

fn k3() -> ManifoldDescriptor {
    let mut basis = vec![class("1", 0)];
    basis.extend((1..=22).map(|i| class(format!("x{i}"), 2)));
    basis.push(class("w", 4));
    let mut module = UnstableModule::new(basis, 4).expect("distinct names");
    module.enable_cup();
    let x = |i: usize| format!("x{}", i + 1);
    let mut pairs = Vec::new();
    for h in 0..3 {
        pairs.push((2 * h, 2 * h + 1));
    }
    for block in 0..2 {
        let offset = 6 + 8 * block;
        pairs.extend(E8_EDGES.iter().map(|&(a, b)| (offset + a, offset + b)));
    }
    for (a, b) in pairs {
        module.set_cup(&x(a), &x(b), &["w"]).expect("known classes");
    }
    ManifoldDescriptor {
        name: "k3".to_string(),
        complex_dimension: 2,
        compact: true,
        module,
        integral: TORSION_FREE_EVEN,
    }
}

fn elliptic_surface_basis(h2: impl IntoIterator<Item = String>) -> Vec<Class> {
    let mut basis = vec![class("1", 0), class("t", 1)];
    basis.extend(h2.into_iter().map(|name| class(name, 2)));
    basis.push(class("s", 3));
    basis.push(class("w", 4));
    basis
}

fn enriques_x() -> ManifoldDescriptor {
    let h2 = std::iter::once("t2".to_string()).chain((1..=11).map(|i| format!("x{i}")));
    let mut module = UnstableModule::new(elliptic_surface_basis(h2), 4).expect("distinct names");
    module.set_sq(1, "t", &["t2"]).expect("known classes");
    module.set_sq(1, "x1", &["s"]).expect("known classes");
    ManifoldDescriptor {
        name: "enriques_x".to_string(),
        complex_dimension: 2,
        compact: true,
        module,
        integral: IntegralFlags::default(),
    }
}

fn elliptic_y() -> ManifoldDescriptor {
    let h2 = (1..=12).map(|i| format!("x{i}"));
    let module = UnstableModule::new(elliptic_surface_basis(h2), 4).expect("distinct names");
    ManifoldDescriptor {
        name: "elliptic_y".to_string(),
        complex_dimension: 2,
        compact: true,
        module,
        integral: IntegralFlags::default(),
    }
}
