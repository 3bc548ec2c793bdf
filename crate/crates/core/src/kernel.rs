//! Kernel of the pushforward i_*: H*(E_X; F2) -> H*(X^[2]; F2).
//!
//! The kernel is spanned by four families built from each basis class u:
//!
//! | family | degree of u | base value                                   | e-power range          |
//! |--------|-------------|----------------------------------------------|------------------------|
//! | 1      | 2a          | `e^a u + e^(a-1) Sq^2 u + ... + Sq^2a u`     | `0 <= j <= n-1-a`      |
//! | 2      | 2a+1        | `e^a u + e^(a-1) Sq^2 u + ... + Sq^2a u`     | `0 <= j <= n-1-a`      |
//! | 3      | 2a          | `e^(a-1) Sq^1 u + ... + Sq^(2a-1) u`         | `0 <= j <= n-1-a`      |
//! | 4      | 2a+1        | `e^a Sq^1 u + ... + Sq^(2a+1) u`             | `0 <= j <= n-2-a`      |
//!
//! Each generator is `e^j` times its base value. Families 3 and 4 vanish
//! when Sq^1 = 0, and families 1 and 2 then form a basis.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::exdiv::{ExClass, ExceptionalDivisor};
use crate::gf2::{span_dims_by_degree, ClassId, GradedElement};
use crate::spaces::ManifoldDescriptor;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KernelError {
    #[error("Sq^1 is nonzero on `{0}`; the check assumes no 2-torsion")]
    Sq1NotZero(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Family {
    One = 1,
    Two = 2,
    Three = 3,
    Four = 4,
}

impl Family {
    pub fn number(self) -> u8 {
        self as u8
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    All,
    /// Families 1 and 2 only.
    Families12,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelGenerator {
    pub family: Family,
    pub source: ClassId,
    pub j: usize,
    pub value: ExClass,
}

impl KernelGenerator {
    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// Degree in H*(E_X): `2j + 2|u|` for families 1 and 4, `2j + 2|u| - 1`
    /// for families 2 and 3.
    pub fn degree(&self) -> i64 {
        self.value.degree()
    }
}

impl GradedElement for KernelGenerator {
    fn degree(&self) -> usize {
        self.value.degree().max(0) as usize
    }

    fn support(&self) -> Vec<usize> {
        self.value.support()
    }
}

fn last_j(n: usize, a: usize, family: Family) -> Option<usize> {
    let slack = if family == Family::Four { 2 } else { 1 };
    (n as i64 - slack - a as i64).try_into().ok()
}

/// Generators in basis order of u, then family, then j.
pub fn kernel_generators(d: &ManifoldDescriptor, mode: Mode) -> Vec<KernelGenerator> {
    let ex = ExceptionalDivisor::new(d);
    let m = &d.module;
    let mut out = Vec::new();
    for source in m.ids() {
        let u = m.class_vector(source);
        let r = u.degree();
        let a = r / 2;
        let (main, odd_squares) = if r.is_multiple_of(2) {
            (
                (Family::One, ex.boundary_with_b(&u)),
                (Family::Three, ex.boundary_no_b(&u)),
            )
        } else {
            (
                (Family::Two, ex.boundary_no_b(&u)),
                (Family::Four, ex.boundary_with_b(&u)),
            )
        };
        let mut families = vec![main];
        if mode == Mode::All {
            families.push(odd_squares);
        }
        for (family, base) in families {
            let Some(last) = last_j(d.n(), a, family) else {
                continue;
            };
            let mut value = base;
            for j in 0..=last {
                if j > 0 {
                    value = ex
                        .e_multiply(&value)
                        .expect("generator ranges keep e-powers below n");
                }
                out.push(KernelGenerator {
                    family,
                    source,
                    j,
                    value: value.clone(),
                });
            }
        }
    }
    out
}

/// Dimension of the kernel of i_* in each degree where it is nonzero.
pub fn kernel_dimensions(d: &ManifoldDescriptor, mode: Mode) -> BTreeMap<usize, usize> {
    span_dims_by_degree(&kernel_generators(d, mode))
}

/// Kernel dimensions together with the raw nonzero generator counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelSummary {
    pub dimensions: BTreeMap<usize, usize>,
    pub nonzero_generators: BTreeMap<usize, usize>,
    pub zero_generators: usize,
}

impl KernelSummary {
    /// Degrees where nonzero generators are linearly dependent, with the
    /// number of redundant generators.
    pub fn redundancy(&self) -> BTreeMap<usize, usize> {
        self.nonzero_generators
            .iter()
            .filter_map(|(&deg, &count)| {
                let dim = self.dimensions.get(&deg).copied().unwrap_or(0);
                (count > dim).then_some((deg, count - dim))
            })
            .collect()
    }
}

pub fn kernel_summary(d: &ManifoldDescriptor, mode: Mode) -> KernelSummary {
    let gens = kernel_generators(d, mode);
    let mut nonzero = BTreeMap::new();
    let mut zero = 0;
    for g in &gens {
        if g.is_zero() {
            zero += 1;
        } else {
            *nonzero.entry(GradedElement::degree(g)).or_insert(0) += 1;
        }
    }
    KernelSummary {
        dimensions: span_dims_by_degree(&gens),
        nonzero_generators: nonzero,
        zero_generators: zero,
    }
}

/// A kernel element violating the divisibility property: its highest
/// nonzero coefficient sits at an e-power below half its degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorollaryCounterexample {
    pub element: ExClass,
    /// Index l with 2l > k whose coefficient survives.
    pub l: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorollaryReport {
    pub samples: usize,
    pub seed: u64,
    pub checked: usize,
    pub counterexamples: Vec<CorollaryCounterexample>,
}

impl CorollaryReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

impl fmt::Display for CorollaryReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} samples (seed {}), {} in even degree, {} counterexamples",
            self.samples,
            self.seed,
            self.checked,
            self.counterexamples.len()
        )
    }
}

/// For `w` in H^(2k)(E_X) written `e^(k-l) b_l + e^(k-l-1) b_(l+1) + ...`:
/// returns the first `l` with `2l > k` such that every coefficient above
/// e^(k-l) vanishes but `b_l` does not. Odd-degree and zero `w` pass.
pub fn corollary_violation(w: &ExClass) -> Option<usize> {
    if w.degree() < 0 || w.degree() % 2 == 1 {
        return None;
    }
    let k = (w.degree() / 2) as usize;
    let lead = w.leading_power()?;
    // all powers above `lead` vanish; lead = k - l with 2l > k means 2*lead < k
    let l = k - lead;
    (2 * l > k).then_some(l)
}

/// Samples random F2-combinations of kernel generators in even degrees and
/// checks the leading-coefficient property on each.
pub fn corollary_check(
    d: &ManifoldDescriptor,
    samples: usize,
    seed: u64,
) -> Result<CorollaryReport, KernelError> {
    if let Some((_, from, _)) = d.module.sq_entries().find(|e| e.0 == 1) {
        return Err(KernelError::Sq1NotZero(d.module.name(from).to_string()));
    }
    let mut by_degree: BTreeMap<i64, Vec<ExClass>> = BTreeMap::new();
    for g in kernel_generators(d, Mode::All) {
        if !g.is_zero() && g.value.degree() % 2 == 0 {
            by_degree.entry(g.value.degree()).or_default().push(g.value);
        }
    }
    let degrees: Vec<i64> = by_degree.keys().copied().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = CorollaryReport {
        samples,
        seed,
        checked: 0,
        counterexamples: Vec::new(),
    };
    if degrees.is_empty() {
        return Ok(report);
    }
    let ex = ExceptionalDivisor::new(d);
    for _ in 0..samples {
        let deg = degrees[rng.gen_range(0..degrees.len())];
        let mut w = ex.zero(deg);
        for g in &by_degree[&deg] {
            if rng.gen_bool(0.5) {
                w = w.add(g);
            }
        }
        report.checked += 1;
        if let Some(l) = corollary_violation(&w) {
            report
                .counterexamples
                .push(CorollaryCounterexample { element: w, l });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::catalog_get;

    fn desc(name: &str) -> ManifoldDescriptor {
        catalog_get(name).unwrap()
    }

    fn nonzero(gens: &[KernelGenerator]) -> Vec<&KernelGenerator> {
        gens.iter().filter(|g| !g.is_zero()).collect()
    }

    #[test]
    fn p1_has_only_the_unit() {
        let d = desc("p1");
        let gens = kernel_generators(&d, Mode::All);
        let nz = nonzero(&gens);
        assert_eq!(nz.len(), 1);
        assert_eq!(nz[0].family, Family::One);
        assert_eq!(d.module.name(nz[0].source), "1");
        assert_eq!(nz[0].j, 0);
        assert_eq!(nz[0].value.display(&d.module).to_string(), "e^0*(1)");
    }

    #[test]
    fn p2_generators() {
        let d = desc("p2");
        let gens = kernel_generators(&d, Mode::All);
        let shown: Vec<String> = nonzero(&gens)
            .iter()
            .map(|g| g.value.display(&d.module).to_string())
            .collect();
        assert_eq!(shown, ["e^0*(1)", "e^1*(1)", "e^1*(h) + e^0*(h2)"]);
        assert_eq!(
            kernel_dimensions(&d, Mode::All),
            BTreeMap::from([(0, 1), (2, 1), (4, 1)])
        );
    }

    #[test]
    fn enriques_degree_two() {
        let d = desc("enriques_x");
        let gens = kernel_generators(&d, Mode::All);
        let deg2: Vec<(Family, &str, usize)> = nonzero(&gens)
            .into_iter()
            .filter(|g| g.value.degree() == 2)
            .map(|g| (g.family, d.module.name(g.source), g.j))
            .collect();
        assert_eq!(deg2, [(Family::One, "1", 1), (Family::Four, "t", 0)]);
    }

    #[test]
    fn dimensions_for_surfaces() {
        assert_eq!(
            kernel_dimensions(&desc("enriques_x"), Mode::All),
            BTreeMap::from([(0, 1), (1, 1), (2, 2), (3, 2), (4, 12), (5, 1)])
        );
        assert_eq!(
            kernel_dimensions(&desc("elliptic_y"), Mode::All),
            BTreeMap::from([(0, 1), (1, 1), (2, 1), (3, 1), (4, 12), (5, 1)])
        );
    }

    #[test]
    fn families12_are_a_basis() {
        for name in crate::spaces::CATALOG_NAMES {
            let s = kernel_summary(&desc(name), Mode::Families12);
            assert_eq!(s.dimensions, s.nonzero_generators, "{name}");
            assert!(s.redundancy().is_empty());
        }
    }

    #[test]
    fn odd_families_vanish_without_sq1() {
        for name in ["elliptic_y", "k3", "p3"] {
            let gens = kernel_generators(&desc(name), Mode::All);
            assert!(gens
                .iter()
                .filter(|g| matches!(g.family, Family::Three | Family::Four))
                .all(KernelGenerator::is_zero));
        }
    }

    #[test]
    fn e_stability() {
        for name in crate::spaces::CATALOG_NAMES {
            let d = desc(name);
            let ex = ExceptionalDivisor::new(&d);
            let gens = kernel_generators(&d, Mode::All);
            for pair in gens.windows(2) {
                let (g, next) = (&pair[0], &pair[1]);
                if g.family == next.family && g.source == next.source {
                    assert_eq!(next.j, g.j + 1);
                    assert_eq!(ex.e_multiply(&g.value).unwrap(), next.value, "{name}");
                }
            }
        }
    }

    #[test]
    fn family1_at_j0_is_the_restriction() {
        for name in crate::spaces::CATALOG_NAMES {
            let d = desc(name);
            let ex = ExceptionalDivisor::new(&d);
            for g in kernel_generators(&d, Mode::All) {
                if g.family == Family::One && g.j == 0 {
                    let u = d.module.class_vector(g.source);
                    assert_eq!(ex.hilb_restriction(&u).unwrap(), g.value);
                }
            }
        }
    }

    #[test]
    fn generator_ranges() {
        let d = desc("p3");
        for g in kernel_generators(&d, Mode::All) {
            let a = d.module.degree_of(g.source) / 2;
            let max = if g.family == Family::Four {
                3 - 2 - a as i64
            } else {
                3 - 1 - a as i64
            };
            assert!((g.j as i64) <= max);
        }
    }

    #[test]
    fn corollary_property() {
        for name in ["p2", "p3", "k3"] {
            let r = corollary_check(&desc(name), 100, 7).unwrap();
            assert!(r.passed(), "{name}: {r}");
            assert_eq!(r.checked, 100);
        }
        let p2 = desc("p2");
        assert_eq!(
            corollary_violation(&ExceptionalDivisor::new(&p2).zero(4)),
            None
        );
        assert!(matches!(
            corollary_check(&desc("enriques_x"), 10, 0),
            Err(KernelError::Sq1NotZero(_))
        ));
    }

    #[test]
    fn corollary_detects_low_leading_power() {
        // h2 alone in degree 4: k = 2, leading power 0, l = 2 > k/2
        let p2 = desc("p2");
        let ex = ExceptionalDivisor::new(&p2);
        let w = ex.monomial(0, &p2.module.vector(&["h2"]).unwrap());
        assert_eq!(corollary_violation(&w), Some(2));
        let ok = ex.monomial(1, &p2.module.vector(&["h"]).unwrap());
        assert_eq!(corollary_violation(&ok), None);
    }

    #[test]
    fn corollary_is_deterministic() {
        let d = desc("k3");
        assert_eq!(
            corollary_check(&d, 50, 42).unwrap(),
            corollary_check(&d, 50, 42).unwrap()
        );
    }
}
