//! Unstable modules over the mod-2 Steenrod algebra.
//!
//! A module is a graded F2 basis together with sparsely stored `Sq^k` maps
//! (`k >= 1`; `Sq^0` is the identity and never stored) and an optional cup
//! product table. [`UnstableModule::validate`] checks the grading, the
//! instability condition, the square rule `Sq^|u| u = u u`, the Cartan
//! formula on stored products and every Adem relation up to the top degree.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::gf2::{ClassId, F2Vector};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SteenrodError {
    #[error("unknown class `{0}`")]
    UnknownClass(String),
    #[error("duplicate class name `{0}`")]
    DuplicateClass(String),
    #[error("invalid class name {0:?}: names must be nonempty ASCII")]
    InvalidName(String),
    #[error("Sq^0 is the identity and cannot be stored (class `{0}`)")]
    ZeroSquare(String),
    #[error("classes {0:?} do not share one degree")]
    MixedDegrees(Vec<String>),
    #[error("Adem relation needs 1 <= a < 2b, got a={a}, b={b}")]
    AdemNotApplicable { a: usize, b: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Class {
    pub name: String,
    pub degree: usize,
}

/// Finite graded F2 basis with Steenrod squares and optional cup products.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnstableModule {
    basis: Vec<Class>,
    index: HashMap<String, ClassId>,
    sq: BTreeMap<(usize, ClassId), BTreeSet<ClassId>>,
    cup: Option<BTreeMap<(ClassId, ClassId), BTreeSet<ClassId>>>,
    top_degree: usize,
}

fn ordered(a: ClassId, b: ClassId) -> (ClassId, ClassId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl UnstableModule {
    pub fn new(basis: Vec<Class>, top_degree: usize) -> Result<Self, SteenrodError> {
        let mut index = HashMap::with_capacity(basis.len());
        for (i, c) in basis.iter().enumerate() {
            if c.name.is_empty() || !c.name.is_ascii() {
                return Err(SteenrodError::InvalidName(c.name.clone()));
            }
            if index.insert(c.name.clone(), ClassId(i)).is_some() {
                return Err(SteenrodError::DuplicateClass(c.name.clone()));
            }
        }
        Ok(UnstableModule {
            basis,
            index,
            sq: BTreeMap::new(),
            cup: None,
            top_degree,
        })
    }

    pub fn basis(&self) -> &[Class] {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn top_degree(&self) -> usize {
        self.top_degree
    }

    pub fn ids(&self) -> impl Iterator<Item = ClassId> {
        (0..self.basis.len()).map(ClassId)
    }

    pub fn id(&self, name: &str) -> Result<ClassId, SteenrodError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| SteenrodError::UnknownClass(name.to_string()))
    }

    pub fn name(&self, id: ClassId) -> &str {
        &self.basis[id.0].name
    }

    pub fn degree_of(&self, id: ClassId) -> usize {
        self.basis[id.0].degree
    }

    pub fn class_vector(&self, id: ClassId) -> F2Vector {
        F2Vector::basis(self.degree_of(id), id)
    }

    /// Basis classes of degree `d`, in declaration order.
    pub fn classes_in_degree(&self, d: usize) -> Vec<ClassId> {
        self.ids().filter(|&id| self.degree_of(id) == d).collect()
    }

    /// Number of basis classes per degree, indexed `0..=top_degree`.
    pub fn betti(&self) -> Vec<usize> {
        let top = self
            .basis
            .iter()
            .map(|c| c.degree)
            .max()
            .unwrap_or(0)
            .max(self.top_degree);
        let mut b = vec![0; top + 1];
        for c in &self.basis {
            b[c.degree] += 1;
        }
        b
    }

    /// Resolves class names into a homogeneous vector.
    pub fn vector(&self, names: &[&str]) -> Result<F2Vector, SteenrodError> {
        let ids = names
            .iter()
            .map(|n| self.id(n))
            .collect::<Result<Vec<_>, _>>()?;
        let mut degrees = ids.iter().map(|&id| self.degree_of(id));
        let degree = degrees.next().unwrap_or(0);
        if degrees.any(|d| d != degree) {
            return Err(SteenrodError::MixedDegrees(
                names.iter().map(|s| s.to_string()).collect(),
            ));
        }
        Ok(F2Vector::from_ids(degree, ids))
    }

    /// Stores `Sq^k from = sum(to)`, replacing any previous entry. An empty
    /// target list removes the entry.
    pub fn set_sq(&mut self, k: usize, from: &str, to: &[&str]) -> Result<(), SteenrodError> {
        if k == 0 {
            return Err(SteenrodError::ZeroSquare(from.to_string()));
        }
        let from = self.id(from)?;
        let targets = to
            .iter()
            .map(|n| self.id(n))
            .collect::<Result<Vec<_>, _>>()?;
        self.set_sq_ids(k, from, targets);
        Ok(())
    }

    pub(crate) fn set_sq_ids(&mut self, k: usize, from: ClassId, to: Vec<ClassId>) {
        let mut set = BTreeSet::new();
        for t in to {
            if !set.remove(&t) {
                set.insert(t);
            }
        }
        if set.is_empty() {
            self.sq.remove(&(k, from));
        } else {
            self.sq.insert((k, from), set);
        }
    }

    /// Stored entries `(k, from, to)` ordered by `k` then basis order.
    pub fn sq_entries(&self) -> impl Iterator<Item = (usize, ClassId, &BTreeSet<ClassId>)> {
        self.sq.iter().map(|(&(k, from), to)| (k, from, to))
    }

    /// Replaces the `Sq^k` map on degree-`d` classes with `f`, which receives
    /// each source class and returns its image.
    pub fn replace_sq_on_degree(
        &mut self,
        k: usize,
        d: usize,
        mut f: impl FnMut(ClassId) -> Vec<ClassId>,
    ) {
        for id in self.classes_in_degree(d) {
            let image = f(id);
            self.set_sq_ids(k, id, image);
        }
    }

    pub fn has_cup(&self) -> bool {
        self.cup.is_some()
    }

    /// Enables the cup table (empty until products are added).
    pub fn enable_cup(&mut self) {
        if self.cup.is_none() {
            self.cup = Some(BTreeMap::new());
        }
    }

    pub fn set_cup(&mut self, a: &str, b: &str, result: &[&str]) -> Result<(), SteenrodError> {
        let a = self.id(a)?;
        let b = self.id(b)?;
        let result = result
            .iter()
            .map(|n| self.id(n))
            .collect::<Result<Vec<_>, _>>()?;
        self.set_cup_ids(a, b, result);
        Ok(())
    }

    pub(crate) fn set_cup_ids(&mut self, a: ClassId, b: ClassId, result: Vec<ClassId>) {
        let table = self.cup.get_or_insert_with(BTreeMap::new);
        let mut set = BTreeSet::new();
        for t in result {
            if !set.remove(&t) {
                set.insert(t);
            }
        }
        if set.is_empty() {
            table.remove(&ordered(a, b));
        } else {
            table.insert(ordered(a, b), set);
        }
    }

    pub fn cup_entries(
        &self,
    ) -> Option<impl Iterator<Item = (ClassId, ClassId, &BTreeSet<ClassId>)>> {
        self.cup
            .as_ref()
            .map(|t| t.iter().map(|(&(a, b), r)| (a, b, r)))
    }

    /// Applies `Sq^k`. Stored targets of the wrong degree are ignored here;
    /// `validate` reports them.
    pub fn sq(&self, k: usize, v: &F2Vector) -> F2Vector {
        if k == 0 {
            return v.clone();
        }
        let target = v.degree() + k;
        let mut out = F2Vector::zero(target);
        if k > v.degree() {
            return out;
        }
        for &id in v.terms() {
            if let Some(to) = self.sq.get(&(k, id)) {
                for &t in to {
                    if self.degree_of(t) == target {
                        out.toggle(t);
                    }
                }
            }
        }
        out
    }

    pub fn sq_named(&self, k: usize, names: &[&str]) -> Result<F2Vector, SteenrodError> {
        Ok(self.sq(k, &self.vector(names)?))
    }

    /// The unique degree-0 class, if there is exactly one.
    pub fn unit(&self) -> Option<ClassId> {
        let zeros = self.classes_in_degree(0);
        (zeros.len() == 1).then(|| zeros[0])
    }

    /// Cup product of basis classes. Products not in the table are zero
    /// except those with the unit. `None` when the module has no table.
    pub fn cup_classes(&self, a: ClassId, b: ClassId) -> Option<F2Vector> {
        let table = self.cup.as_ref()?;
        let degree = self.degree_of(a) + self.degree_of(b);
        if let Some(r) = table.get(&ordered(a, b)) {
            return Some(F2Vector::from_ids(
                degree,
                r.iter().copied().filter(|&t| self.degree_of(t) == degree),
            ));
        }
        let unit = self.unit();
        Some(if unit == Some(a) {
            self.class_vector(b)
        } else if unit == Some(b) {
            self.class_vector(a)
        } else {
            F2Vector::zero(degree)
        })
    }

    pub fn cup(&self, x: &F2Vector, y: &F2Vector) -> Option<F2Vector> {
        self.cup.as_ref()?;
        let mut out = F2Vector::zero(x.degree() + y.degree());
        for &a in x.terms() {
            for &b in y.terms() {
                out += &self.cup_classes(a, b)?;
            }
        }
        Some(out)
    }

    pub fn is_sq1_zero(&self) -> bool {
        !self.sq.keys().any(|&(k, _)| k == 1)
    }

    pub fn format_vector(&self, v: &F2Vector) -> String {
        if v.is_zero() {
            return "0".to_string();
        }
        v.terms()
            .iter()
            .map(|&id| self.name(id))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        self.check_grading(&mut report);
        if self.cup.is_some() {
            self.check_cup_degrees(&mut report);
            self.check_square_rule(&mut report);
            self.check_cartan(&mut report);
        } else {
            report
                .notes
                .push("no cup table: square rule and Cartan formula checks skipped".to_string());
        }
        self.check_adem(&mut report);
        report
    }

    fn check_grading(&self, report: &mut ValidationReport) {
        for (&(k, from), to) in &self.sq {
            let d = self.degree_of(from);
            for &t in to {
                if self.degree_of(t) != d + k {
                    report.push(
                        ViolationKind::DegreeShift,
                        self.name(from),
                        format!("Sq^{k}"),
                        format!(
                            "target `{}` has degree {}, expected {}",
                            self.name(t),
                            self.degree_of(t),
                            d + k
                        ),
                    );
                }
            }
            if k > d {
                report.push(
                    ViolationKind::Instability,
                    self.name(from),
                    format!("Sq^{k}"),
                    format!("Sq^{k} must vanish on a class of degree {d}"),
                );
            }
        }
    }

    fn check_cup_degrees(&self, report: &mut ValidationReport) {
        let Some(entries) = self.cup_entries() else {
            return;
        };
        for (a, b, r) in entries {
            let expected = self.degree_of(a) + self.degree_of(b);
            for &t in r {
                if self.degree_of(t) != expected {
                    report.push(
                        ViolationKind::CupDegree,
                        self.name(a),
                        format!("cup with `{}`", self.name(b)),
                        format!(
                            "result `{}` has degree {}, expected {expected}",
                            self.name(t),
                            self.degree_of(t)
                        ),
                    );
                }
            }
        }
    }

    fn check_square_rule(&self, report: &mut ValidationReport) {
        for id in self.ids() {
            let d = self.degree_of(id);
            if d == 0 {
                continue;
            }
            let u = self.class_vector(id);
            let square = self.cup(&u, &u).expect("cup table present");
            let sq = self.sq(d, &u);
            if sq != square {
                report.push(
                    ViolationKind::SquareRule,
                    self.name(id),
                    format!("Sq^{d}"),
                    format!(
                        "Sq^{d} gives {} but the cup square is {}",
                        self.format_vector(&sq),
                        self.format_vector(&square)
                    ),
                );
            }
        }
    }

    fn check_cartan(&self, report: &mut ValidationReport) {
        let entries: Vec<(ClassId, ClassId)> = self
            .cup_entries()
            .expect("cup table present")
            .map(|(a, b, _)| (a, b))
            .collect();
        for (a, b) in entries {
            let x = self.class_vector(a);
            let y = self.class_vector(b);
            let product = self.cup(&x, &y).expect("cup table present");
            for i in 1..=x.degree() + y.degree() {
                let lhs = self.sq(i, &product);
                let mut rhs = F2Vector::zero(lhs.degree());
                for j in 0..=i {
                    rhs += &self
                        .cup(&self.sq(j, &x), &self.sq(i - j, &y))
                        .expect("cup table present");
                }
                if lhs != rhs {
                    report.push(
                        ViolationKind::Cartan,
                        self.name(a),
                        format!("Sq^{i} of product with `{}`", self.name(b)),
                        format!(
                            "Sq^{i}(xy) = {} but the Cartan sum is {}",
                            self.format_vector(&lhs),
                            self.format_vector(&rhs)
                        ),
                    );
                }
            }
        }
    }

    fn check_adem(&self, report: &mut ValidationReport) {
        let top = self.top_degree;
        for b in 1..=top {
            for a in 1..(2 * b).min(top + 1) {
                if a + b > top {
                    break;
                }
                let expansion = adem_expand(a, b).expect("a < 2b by construction");
                for id in self.ids() {
                    let u = self.class_vector(id);
                    let lhs = self.sq(a, &self.sq(b, &u));
                    let mut rhs = F2Vector::zero(lhs.degree());
                    for &(x, y) in &expansion {
                        rhs += &self.sq(x, &self.sq(y, &u));
                    }
                    if lhs != rhs {
                        report.push(
                            ViolationKind::Adem,
                            self.name(id),
                            format!("Sq^{a}Sq^{b}"),
                            format!(
                                "Sq^{a}Sq^{b} gives {} but the Adem expansion {} gives {}",
                                self.format_vector(&lhs),
                                format_expansion(&expansion),
                                self.format_vector(&rhs)
                            ),
                        );
                    }
                }
            }
        }
    }
}

/// `binom(n, k) mod 2`, zero outside `0 <= k <= n`.
pub fn binomial_mod2(n: i64, k: i64) -> bool {
    n >= 0 && k >= 0 && k <= n && (n & k) == k
}

/// Adem expansion of `Sq^a Sq^b` for `1 <= a < 2b`:
/// `sum_c binom(b-c-1, a-2c) Sq^(a+b-c) Sq^c`. Pairs `(x, 0)` stand for `Sq^x`.
pub fn adem_expand(a: usize, b: usize) -> Result<Vec<(usize, usize)>, SteenrodError> {
    if a == 0 || a >= 2 * b {
        return Err(SteenrodError::AdemNotApplicable { a, b });
    }
    let (ai, bi) = (a as i64, b as i64);
    Ok((0..=a / 2)
        .filter(|&c| binomial_mod2(bi - c as i64 - 1, ai - 2 * c as i64))
        .map(|c| (a + b - c, c))
        .collect())
}

fn format_expansion(terms: &[(usize, usize)]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    terms
        .iter()
        .map(|&(x, y)| {
            if y == 0 {
                format!("Sq^{x}")
            } else {
                format!("Sq^{x}Sq^{y}")
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    DegreeShift,
    Instability,
    SquareRule,
    Cartan,
    Adem,
    CupDegree,
    /// Descriptor-level conditions checked by [`crate::spaces`].
    Descriptor,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ViolationKind::DegreeShift => "degree-shift",
            ViolationKind::Instability => "instability",
            ViolationKind::SquareRule => "square-rule",
            ViolationKind::Cartan => "cartan",
            ViolationKind::Adem => "adem",
            ViolationKind::CupDegree => "cup-degree",
            ViolationKind::Descriptor => "descriptor",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Witnessing basis class.
    pub class: String,
    pub operation: String,
    pub details: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} violation at `{}` ({}): {}",
            self.kind, self.class, self.operation, self.details
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(
        &mut self,
        kind: ViolationKind,
        class: &str,
        operation: impl Into<String>,
        details: impl Into<String>,
    ) {
        self.violations.push(Violation {
            kind,
            class: class.to_string(),
            operation: operation.into(),
            details: details.into(),
        });
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            writeln!(f, "valid")?;
        }
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn projective_plane() -> UnstableModule {
        let mut m = UnstableModule::new(
            vec![
                Class {
                    name: "1".into(),
                    degree: 0,
                },
                Class {
                    name: "h".into(),
                    degree: 2,
                },
                Class {
                    name: "h2".into(),
                    degree: 4,
                },
            ],
            4,
        )
        .unwrap();
        m.set_sq(2, "h", &["h2"]).unwrap();
        m.enable_cup();
        m.set_cup("h", "h", &["h2"]).unwrap();
        m
    }

    #[test]
    fn adem_examples() {
        assert_eq!(adem_expand(1, 2).unwrap(), vec![(3, 0)]);
        assert_eq!(adem_expand(1, 1).unwrap(), vec![]);
        assert_eq!(adem_expand(2, 2).unwrap(), vec![(3, 1)]);
        assert_eq!(
            adem_expand(2, 1),
            Err(SteenrodError::AdemNotApplicable { a: 2, b: 1 })
        );
        assert!(adem_expand(0, 3).is_err());
    }

    #[test]
    fn sq1_sq_even_is_sq_odd() {
        for j in 1..10 {
            assert_eq!(adem_expand(1, 2 * j).unwrap(), vec![(2 * j + 1, 0)]);
            assert_eq!(adem_expand(1, 2 * j + 1).unwrap(), vec![]);
        }
    }

    #[test]
    fn adem_matches_textbook_relations() {
        assert_eq!(adem_expand(2, 3).unwrap(), vec![(5, 0), (4, 1)]);
        assert_eq!(adem_expand(3, 2).unwrap(), vec![]);
        assert_eq!(adem_expand(3, 3).unwrap(), vec![(5, 1)]);
        assert_eq!(adem_expand(2, 4).unwrap(), vec![(6, 0), (5, 1)]);
    }

    #[test]
    fn binomials() {
        assert!(binomial_mod2(0, 0));
        assert!(!binomial_mod2(-1, 0));
        assert!(binomial_mod2(5, 1));
        assert!(!binomial_mod2(6, 1));
        assert!(!binomial_mod2(2, 3));
    }

    #[test]
    fn sq_identity_instability_and_matrix() {
        let m = projective_plane();
        let h = m.vector(&["h"]).unwrap();
        assert_eq!(m.sq(0, &h), h);
        assert_eq!(m.sq(2, &h), m.vector(&["h2"]).unwrap());
        assert!(m.sq(3, &h).is_zero());
        assert!(m.sq(1, &h).is_zero());
        assert_eq!(m.sq_named(2, &["h"]).unwrap(), m.vector(&["h2"]).unwrap());
        assert!(matches!(
            m.sq_named(1, &["q"]),
            Err(SteenrodError::UnknownClass(_))
        ));
    }

    #[test]
    fn projective_plane_is_valid() {
        let m = projective_plane();
        let report = m.validate();
        assert!(report.is_valid(), "{report}");
        assert!(m.is_sq1_zero());
    }

    #[test]
    fn degree_shift_is_reported() {
        let mut m = UnstableModule::new(
            vec![
                Class {
                    name: "1".into(),
                    degree: 0,
                },
                Class {
                    name: "h".into(),
                    degree: 2,
                },
                Class {
                    name: "c".into(),
                    degree: 3,
                },
                Class {
                    name: "h2".into(),
                    degree: 4,
                },
            ],
            4,
        )
        .unwrap();
        m.set_sq(2, "h", &["c"]).unwrap();
        let report = m.validate();
        assert!(report.has(ViolationKind::DegreeShift));
        assert_eq!(report.violations[0].class, "h");
    }

    #[test]
    fn square_rule_violation() {
        let mut m = projective_plane();
        m.set_sq(2, "h", &[]).unwrap();
        let report = m.validate();
        assert!(report.has(ViolationKind::SquareRule), "{report}");
    }

    #[test]
    fn instability_violation() {
        let mut m = projective_plane();
        m.set_sq(2, "1", &["h"]).unwrap();
        assert!(m.validate().has(ViolationKind::Instability));
    }

    #[test]
    fn skipped_cup_checks_are_noted() {
        let m = UnstableModule::new(
            vec![Class {
                name: "1".into(),
                degree: 0,
            }],
            0,
        )
        .unwrap();
        let report = m.validate();
        assert!(report.is_valid());
        assert_eq!(report.notes.len(), 1);
        assert!(m.is_sq1_zero());
        assert!(UnstableModule::new(vec![], 0).unwrap().is_sq1_zero());
    }

    #[test]
    fn names_are_checked() {
        let dup = UnstableModule::new(
            vec![
                Class {
                    name: "a".into(),
                    degree: 0,
                },
                Class {
                    name: "a".into(),
                    degree: 1,
                },
            ],
            2,
        );
        assert_eq!(dup.unwrap_err(), SteenrodError::DuplicateClass("a".into()));
        let bad = UnstableModule::new(
            vec![Class {
                name: "é".into(),
                degree: 0,
            }],
            0,
        );
        assert!(matches!(bad, Err(SteenrodError::InvalidName(_))));
    }

    #[test]
    fn validate_is_side_effect_free() {
        let m = projective_plane();
        let before = m.clone();
        let r1 = m.validate();
        let r2 = m.validate();
        assert_eq!(r1, r2);
        assert_eq!(m, before);
    }
}
