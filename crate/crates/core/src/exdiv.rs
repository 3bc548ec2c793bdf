//! Cohomology of the exceptional divisor E_X = P(T*X).
//!
//! H*(E_X; F2) is free over H*(X; F2) on 1, e, ..., e^(n-1), so a class of
//! degree d is a list of coefficients `c_j` in H^(d-2j)(X) standing for
//! `sum_j e^j c_j`. Reducing e^n needs the Chern classes of X, which a
//! descriptor does not carry, so any operation that would produce e^n fails.

use std::fmt;

use thiserror::Error;

use crate::gf2::{F2Vector, GradedElement};
use crate::spaces::{BettiTable, ManifoldDescriptor, SpaceLabel};
use crate::steenrod::UnstableModule;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExdivError {
    #[error("multiplying by e would need e^{power}, beyond the free basis 1..e^{max}")]
    OutOfRange { power: usize, max: usize },
    #[error("restriction formula needs an even-degree class, got degree {0}")]
    OddDegree(usize),
}

/// An element `sum_j e^j c_j` of H^degree(E_X; F2).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExClass {
    /// Total degree. Negative only for the zero class of an empty sum.
    degree: i64,
    coeffs: Vec<F2Vector>,
}

fn coeff_degree(degree: i64, j: usize) -> usize {
    (degree - 2 * j as i64).max(0) as usize
}

impl ExClass {
    pub fn zero(n: usize, degree: i64) -> Self {
        ExClass {
            degree,
            coeffs: (0..n)
                .map(|j| F2Vector::zero(coeff_degree(degree, j)))
                .collect(),
        }
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn n(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient of e^j.
    pub fn coeff(&self, j: usize) -> &F2Vector {
        &self.coeffs[j]
    }

    pub fn coeffs(&self) -> &[F2Vector] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(F2Vector::is_zero)
    }

    /// Highest e-power with a nonzero coefficient.
    pub fn leading_power(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    /// Adds `e^power * v`; `v` must have degree `self.degree - 2 * power`.
    pub fn add_term(&mut self, power: usize, v: &F2Vector) {
        if v.is_zero() {
            return;
        }
        assert!(power < self.n(), "e^{power} is outside the free basis");
        assert_eq!(
            v.degree() as i64,
            self.degree - 2 * power as i64,
            "inhomogeneous term"
        );
        self.coeffs[power] += v;
    }

    pub fn add(&self, other: &ExClass) -> ExClass {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        assert_eq!(
            self.degree, other.degree,
            "adding classes of different degrees"
        );
        let mut out = self.clone();
        for (j, c) in other.coeffs.iter().enumerate() {
            out.coeffs[j] += c;
        }
        out
    }

    pub fn display<'a>(&'a self, module: &'a UnstableModule) -> impl fmt::Display + 'a {
        DisplayExClass {
            class: self,
            module,
        }
    }
}

impl GradedElement for ExClass {
    fn degree(&self) -> usize {
        self.degree.max(0) as usize
    }

    fn support(&self) -> Vec<usize> {
        let n = self.n();
        self.coeffs
            .iter()
            .enumerate()
            .flat_map(|(j, c)| c.terms().iter().map(move |id| id.0 * n + j))
            .collect()
    }
}

struct DisplayExClass<'a> {
    class: &'a ExClass,
    module: &'a UnstableModule,
}

impl fmt::Display for DisplayExClass<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.class.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .class
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| format!("e^{j}*({})", self.module.format_vector(c)))
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

/// Operations on H*(E_X; F2) for a fixed descriptor.
#[derive(Clone, Copy, Debug)]
pub struct ExceptionalDivisor<'a> {
    module: &'a UnstableModule,
    n: usize,
}

impl<'a> ExceptionalDivisor<'a> {
    pub fn new(d: &'a ManifoldDescriptor) -> Self {
        ExceptionalDivisor {
            module: &d.module,
            n: d.n(),
        }
    }

    pub fn from_module(module: &'a UnstableModule, n: usize) -> Self {
        ExceptionalDivisor { module, n }
    }

    pub fn module(&self) -> &'a UnstableModule {
        self.module
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Top degree of E_X, a closed manifold of real dimension 4n-2.
    pub fn top_degree(&self) -> usize {
        4 * self.n - 2
    }

    pub fn zero(&self, degree: i64) -> ExClass {
        ExClass::zero(self.n, degree)
    }

    /// `e^power * v`.
    pub fn monomial(&self, power: usize, v: &F2Vector) -> ExClass {
        let mut c = self.zero(v.degree() as i64 + 2 * power as i64);
        c.add_term(power, v);
        c
    }

    pub fn e_multiply(&self, c: &ExClass) -> Result<ExClass, ExdivError> {
        if !c.coeffs[self.n - 1].is_zero() {
            return Err(ExdivError::OutOfRange {
                power: self.n,
                max: self.n - 1,
            });
        }
        let mut out = self.zero(c.degree + 2);
        for j in 0..self.n - 1 {
            out.coeffs[j + 1] = c.coeffs[j].clone();
        }
        Ok(out)
    }

    /// `sum_i e^(top_power - i) Sq^(first_square + 2i) u` for `i = 0..=top_power`
    /// in total degree `degree`. Sums landing above the top degree of E_X vanish.
    fn alternating_sum(
        &self,
        u: &F2Vector,
        degree: i64,
        top_power: i64,
        first_square: usize,
    ) -> ExClass {
        let mut out = self.zero(degree);
        if top_power < 0 || degree > self.top_degree() as i64 {
            return out;
        }
        for i in 0..=top_power as usize {
            let power = top_power as usize - i;
            out.add_term(power, &self.module.sq(first_square + 2 * i, u));
        }
        out
    }

    /// Image under the localization boundary of the class of S^2 Z - Z,
    /// for Z dual to `u` of degree r: lands in degree 2r - 1.
    ///
    /// `r = 2a`: `e^(a-1) Sq^1 u + e^(a-2) Sq^3 u + ... + Sq^(2a-1) u`;
    /// `r = 2a+1`: `e^a u + e^(a-1) Sq^2 u + ... + Sq^(2a) u`.
    pub fn boundary_no_b(&self, u: &F2Vector) -> ExClass {
        let r = u.degree();
        let a = (r / 2) as i64;
        let degree = 2 * r as i64 - 1;
        if r.is_multiple_of(2) {
            self.alternating_sum(u, degree, a - 1, 1)
        } else {
            self.alternating_sum(u, degree, a, 0)
        }
    }

    /// Boundary of `b [S^2 Z - Z]`, in degree 2r.
    ///
    /// `r = 2a`: `e^a u + e^(a-1) Sq^2 u + ... + Sq^(2a) u`;
    /// `r = 2a+1`: `e^a Sq^1 u + e^(a-1) Sq^3 u + ... + Sq^(2a+1) u`.
    pub fn boundary_with_b(&self, u: &F2Vector) -> ExClass {
        let r = u.degree();
        let a = (r / 2) as i64;
        let degree = 2 * r as i64;
        if r.is_multiple_of(2) {
            self.alternating_sum(u, degree, a, 0)
        } else {
            self.alternating_sum(u, degree, a, 1)
        }
    }

    /// Restriction to E_X of the class of Z^[2] for Z dual to `u`, `|u| = 2a`:
    /// `e^a u + e^(a-1) Sq^2 u + ... + Sq^(2a) u`.
    pub fn hilb_restriction(&self, u: &F2Vector) -> Result<ExClass, ExdivError> {
        let r = u.degree();
        if r % 2 == 1 {
            return Err(ExdivError::OddDegree(r));
        }
        Ok(self.alternating_sum(u, 2 * r as i64, (r / 2) as i64, 0))
    }
}

/// `dims[k] = sum_{i<n} b_(k-2i)(X)`.
pub fn betti_exceptional(d: &ManifoldDescriptor) -> BettiTable {
    let b = d.module.betti();
    let top = 4 * d.n() - 2;
    let mut dims = vec![0; top.max(b.len() - 1) + 1];
    for i in 0..d.n() {
        for (k, &bk) in b.iter().enumerate() {
            dims[k + 2 * i] += bk;
        }
    }
    BettiTable::new(SpaceLabel::Exceptional, top, dims)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::catalog_get;

    fn desc(name: &str) -> ManifoldDescriptor {
        catalog_get(name).unwrap()
    }

    #[test]
    fn e_multiply_shifts_and_refuses_e_to_the_n() {
        let p2 = desc("p2");
        let ex = ExceptionalDivisor::new(&p2);
        let one = p2.module.vector(&["1"]).unwrap();
        let e = ex.e_multiply(&ex.monomial(0, &one)).unwrap();
        assert_eq!(e, ex.monomial(1, &one));
        assert_eq!(
            ex.e_multiply(&e),
            Err(ExdivError::OutOfRange { power: 2, max: 1 })
        );

        let p3 = desc("p3");
        let ex = ExceptionalDivisor::new(&p3);
        let h = p3.module.vector(&["h"]).unwrap();
        let h2 = p3.module.vector(&["h2"]).unwrap();
        let c = ex.monomial(1, &h).add(&ex.monomial(0, &h2));
        let expected = ex.monomial(2, &h).add(&ex.monomial(1, &h2));
        assert_eq!(ex.e_multiply(&c).unwrap(), expected);
    }

    #[test]
    fn boundary_examples_enriques() {
        let x = desc("enriques_x");
        let m = &x.module;
        let ex = ExceptionalDivisor::new(&x);
        let one = m.vector(&["1"]).unwrap();
        assert!(ex.boundary_no_b(&one).is_zero());
        assert_eq!(ex.boundary_with_b(&one), ex.monomial(0, &one));

        let t = m.vector(&["t"]).unwrap();
        assert_eq!(ex.boundary_no_b(&t), ex.monomial(0, &t));
        let t2 = m.vector(&["t2"]).unwrap();
        assert_eq!(ex.boundary_with_b(&t), ex.monomial(0, &t2));

        let x1 = m.vector(&["x1"]).unwrap();
        let s = m.vector(&["s"]).unwrap();
        assert_eq!(ex.boundary_no_b(&x1), ex.monomial(0, &s));
        assert_eq!(ex.boundary_no_b(&x1).degree(), 3);
    }

    #[test]
    fn restriction_examples() {
        let p2 = desc("p2");
        let ex = ExceptionalDivisor::new(&p2);
        let m = &p2.module;
        let one = m.vector(&["1"]).unwrap();
        let h = m.vector(&["h"]).unwrap();
        let h2 = m.vector(&["h2"]).unwrap();
        assert_eq!(ex.hilb_restriction(&one).unwrap(), ex.monomial(0, &one));
        let expected = ex.monomial(1, &h).add(&ex.monomial(0, &h2));
        assert_eq!(ex.hilb_restriction(&h).unwrap(), expected);
        assert_eq!(ex.boundary_with_b(&h), expected);
        assert_eq!(expected.display(m).to_string(), "e^1*(h) + e^0*(h2)");

        let k3 = desc("k3");
        let ex = ExceptionalDivisor::new(&k3);
        for id in k3.module.classes_in_degree(2) {
            let u = k3.module.class_vector(id);
            assert_eq!(ex.hilb_restriction(&u).unwrap(), ex.monomial(1, &u));
        }

        let x = desc("enriques_x");
        let ex = ExceptionalDivisor::new(&x);
        let t = x.module.vector(&["t"]).unwrap();
        assert_eq!(ex.hilb_restriction(&t), Err(ExdivError::OddDegree(1)));
    }

    #[test]
    fn top_class_terms_vanish_by_dimension() {
        let p2 = desc("p2");
        let ex = ExceptionalDivisor::new(&p2);
        let top = p2.module.vector(&["h2"]).unwrap();
        assert!(ex.boundary_with_b(&top).is_zero());
        assert!(ex.boundary_no_b(&top).is_zero());
    }

    #[test]
    fn betti_exceptional_examples() {
        assert_eq!(betti_exceptional(&desc("p1")).dims(), &[1, 0, 1]);
        assert_eq!(
            betti_exceptional(&desc("p2")).dims(),
            &[1, 0, 2, 0, 2, 0, 1]
        );
        assert_eq!(
            betti_exceptional(&desc("enriques_x")).dims(),
            &[1, 1, 13, 2, 13, 1, 1]
        );
    }

    #[test]
    fn boundary_properties_on_catalog() {
        for name in crate::spaces::CATALOG_NAMES {
            let d = desc(name);
            let ex = ExceptionalDivisor::new(&d);
            let m = &d.module;
            for id in m.ids() {
                let u = m.class_vector(id);
                let a = u.degree() / 2;
                let no_b = ex.boundary_no_b(&u);
                let with_b = ex.boundary_with_b(&u);
                for c in [&no_b, &with_b] {
                    if let Some(p) = c.leading_power() {
                        assert!(p <= a, "{name} {}: power {p} > {a}", m.name(id));
                    }
                }
                if u.degree().is_multiple_of(2) {
                    assert_eq!(with_b, ex.hilb_restriction(&u).unwrap(), "{name}");
                }
            }
            // linearity on pairs of same-degree classes
            for deg in 0..=d.real_dimension() {
                let ids = m.classes_in_degree(deg);
                for pair in ids.windows(2) {
                    let (u, v) = (m.class_vector(pair[0]), m.class_vector(pair[1]));
                    let sum = &u + &v;
                    assert_eq!(
                        ex.boundary_no_b(&sum),
                        ex.boundary_no_b(&u).add(&ex.boundary_no_b(&v))
                    );
                    assert_eq!(
                        ex.boundary_with_b(&sum),
                        ex.boundary_with_b(&u).add(&ex.boundary_with_b(&v))
                    );
                }
            }
        }
    }
}
