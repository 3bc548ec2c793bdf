//! Betti numbers of S^2 X, S^2 X - X and X^[2].
//!
//! Pair classes `v_i (x) v_j` are only ever counted. The Hilbert scheme is
//! computed two ways: from the localization sequence
//!
//! ```text
//! H^(m-2)(E_X) --i_*--> H^m(X^[2]) --> H^m(S^2X - X) --d--> H^(m-1)(E_X)
//! ```
//!
//! which gives `dim H^m(X^[2]) = (E[m-2] - K[m-2]) + (C[m] - K[m-1])` with
//! K the kernel of i_*, and, when Sq^1 = 0, from the closed-form basis.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::exdiv::betti_exceptional;
use crate::kernel::{kernel_dimensions, Mode};
use crate::spaces::{BettiTable, ManifoldDescriptor, SpaceLabel};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BettiError {
    #[error("negative rank in degree {degree}: {details}")]
    NegativeRank { degree: usize, details: String },
    #[error("Sq^1 is nonzero on `{0}`; the closed form needs Sq^1 = 0")]
    Sq1NotZero(String),
    #[error("integral computation needs the torsion_free flag")]
    TorsionFlagRequired,
}

fn table(
    label: SpaceLabel,
    top: usize,
    mut dims: Vec<usize>,
    counts: impl IntoIterator<Item = usize>,
) -> BettiTable {
    for k in counts {
        if k >= dims.len() {
            dims.resize(k + 1, 0);
        }
        dims[k] += 1;
    }
    BettiTable::new(label, top, dims)
}

fn pairs(degrees: &[usize]) -> impl Iterator<Item = usize> + '_ {
    degrees
        .iter()
        .enumerate()
        .flat_map(move |(i, &a)| degrees[i + 1..].iter().map(move |&b| a + b))
}

/// Basis of H*(S^2X - X): one class in degree `|v_i| + |v_j|` per `i < j`,
/// and one in each degree `2|v_i| + jj` for `0 <= jj <= 2n - 1 - |v_i|`.
pub fn betti_config(d: &ManifoldDescriptor) -> BettiTable {
    let m = d.real_dimension();
    let degrees = d.basis_degrees();
    let singles = degrees
        .iter()
        .filter(|&&v| v < m)
        .flat_map(|&v| (0..m - v).map(move |jj| 2 * v + jj));
    table(
        SpaceLabel::Config,
        2 * m,
        Vec::new(),
        pairs(&degrees).chain(singles),
    )
}

/// Mod-2 homology of S^2 X from basis degrees: one class per pair `i < j`
/// in degree `|u_i| + |u_j|`, one in each degree `|u_i|+2 ..= 2|u_i|` for
/// `|u_i| > 0`, and one in degree 0 for each degree-0 class.
pub fn betti_sym2_f2_from_degrees(degrees: &[usize], top: usize) -> BettiTable {
    let singles = degrees
        .iter()
        .flat_map(|&u| if u == 0 { 0..1 } else { u + 2..2 * u + 1 });
    table(
        SpaceLabel::Sym2,
        top,
        Vec::new(),
        pairs(degrees).chain(singles),
    )
}

pub fn betti_sym2_f2(d: &ManifoldDescriptor) -> BettiTable {
    betti_sym2_f2_from_degrees(&d.basis_degrees(), 2 * d.real_dimension())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GroupRank {
    pub free_rank: usize,
    pub two_torsion: usize,
}

/// Integral homology as `Z^r + (Z/2)^t` per degree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GroupProfile {
    pub groups: BTreeMap<usize, GroupRank>,
}

impl GroupProfile {
    pub fn get(&self, k: usize) -> GroupRank {
        self.groups.get(&k).copied().unwrap_or_default()
    }

    fn add_free(&mut self, k: usize) {
        self.groups.entry(k).or_default().free_rank += 1;
    }

    fn add_torsion(&mut self, k: usize) {
        self.groups.entry(k).or_default().two_torsion += 1;
    }

    pub fn lines(&self) -> Vec<String> {
        self.groups
            .iter()
            .map(|(k, g)| {
                let mut parts = Vec::new();
                if g.free_rank > 0 {
                    parts.push(format!("Z^{}", g.free_rank));
                }
                if g.two_torsion > 0 {
                    parts.push(format!("(Z/2)^{}", g.two_torsion));
                }
                format!("{k}: {}", parts.join(" + "))
            })
            .collect()
    }
}

impl fmt::Display for GroupProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in self.lines() {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// Integral homology of S^2 X for torsion-free X with a homology basis in
/// the given degrees.
pub fn integral_sym2_from_degrees(degrees: &[usize]) -> GroupProfile {
    let mut p = GroupProfile::default();
    for (i, &a) in degrees.iter().enumerate() {
        for &b in &degrees[i..] {
            p.add_free(a + b);
        }
        if a % 2 == 1 {
            // the diagonal pair is not free in odd degree
            let g = p.groups.get_mut(&(2 * a)).expect("just added");
            g.free_rank -= 1;
            if *g == GroupRank::default() {
                p.groups.remove(&(2 * a));
            }
        }
        if a > 0 {
            // even: |u|+2, ..., 2|u|-2; odd: |u|+2, ..., 2|u|-1
            let last = if a % 2 == 0 { 2 * a - 2 } else { 2 * a - 1 };
            for k in (a + 2..=last).step_by(2) {
                p.add_torsion(k);
            }
        }
    }
    p
}

pub fn integral_sym2(d: &ManifoldDescriptor) -> Result<GroupProfile, BettiError> {
    if !d.integral.torsion_free {
        return Err(BettiError::TorsionFlagRequired);
    }
    Ok(integral_sym2_from_degrees(&d.basis_degrees()))
}

/// Exact-sequence route: works for any valid descriptor.
pub fn betti_hilb2_exact(d: &ManifoldDescriptor) -> Result<BettiTable, BettiError> {
    hilb2_from_sequence(
        &betti_exceptional(d),
        &betti_config(d),
        &kernel_dimensions(d, Mode::All),
        2 * d.real_dimension(),
    )
}

/// `dims[m] = (E[m-2] - K[m-2]) + (C[m] - K[m-1])` for `0 <= m <= top`.
pub fn hilb2_from_sequence(
    e: &BettiTable,
    c: &BettiTable,
    kernel: &BTreeMap<usize, usize>,
    top: usize,
) -> Result<BettiTable, BettiError> {
    let k = |deg: i64| -> usize {
        if deg < 0 {
            0
        } else {
            kernel.get(&(deg as usize)).copied().unwrap_or(0)
        }
    };
    let mut dims = Vec::with_capacity(top + 1);
    for m in 0..=top as i64 {
        let (e_m, k_m) = (e.at(m - 2), k(m - 2));
        let (c_m, k_prev) = (c.at(m), k(m - 1));
        let image = e_m
            .checked_sub(k_m)
            .ok_or_else(|| BettiError::NegativeRank {
                degree: m as usize,
                details: format!(
                    "kernel dimension {k_m} exceeds dim H^{}(E_X) = {e_m}",
                    m - 2
                ),
            })?;
        let restricted = c_m
            .checked_sub(k_prev)
            .ok_or_else(|| BettiError::NegativeRank {
                degree: m as usize,
                details: format!(
                    "kernel dimension {k_prev} in degree {} exceeds dim H^{m}(S^2X-X) = {c_m}",
                    m - 1
                ),
            })?;
        dims.push(image + restricted);
    }
    Ok(BettiTable::new(SpaceLabel::Hilb2, top, dims))
}

/// Closed-form route, valid when Sq^1 = 0: one class in degree
/// `|v_i| + |v_j|` per `i <= j` except `i = j` with `|v_i|` odd, and one in
/// each degree `|v_i| + 2p` for `1 <= p <= n - 1`.
pub fn betti_hilb2_closed(d: &ManifoldDescriptor) -> Result<BettiTable, BettiError> {
    if let Some((_, from, _)) = d.module.sq_entries().find(|e| e.0 == 1) {
        return Err(BettiError::Sq1NotZero(d.module.name(from).to_string()));
    }
    let degrees = d.basis_degrees();
    let n = d.n();
    let diagonal = degrees.iter().filter(|&&v| v % 2 == 0).map(|&v| 2 * v);
    let exceptional = degrees.iter().flat_map(|&v| (1..n).map(move |p| v + 2 * p));
    Ok(table(
        SpaceLabel::Hilb2,
        2 * d.real_dimension(),
        Vec::new(),
        pairs(&degrees).chain(diagonal).chain(exceptional),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Hilb2TorsionFlags {
    pub no_2_torsion: bool,
    pub no_torsion: bool,
    pub torsion_free_even: bool,
}

pub fn torsion_flags_hilb2(d: &ManifoldDescriptor) -> Hilb2TorsionFlags {
    Hilb2TorsionFlags {
        no_2_torsion: d.integral.two_torsion_free,
        no_torsion: d.integral.torsion_free,
        torsion_free_even: d.integral.torsion_free
            && d.compact
            && d.basis_degrees().iter().all(|v| v % 2 == 0),
    }
}

/// `(chi^2 + chi)/2 + (n-1) chi`, the Euler characteristic of X^[2].
pub fn hilb2_euler(d: &ManifoldDescriptor) -> i64 {
    let chi = d.euler_characteristic();
    (chi * chi + chi) / 2 + (d.n() as i64 - 1) * chi
}
