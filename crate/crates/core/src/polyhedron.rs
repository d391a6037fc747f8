//! Convex polyhedra given by weak and strict linear inequalities, with an
//! exact Fourier–Motzkin emptiness test.

use std::fmt;

use num::{Signed, Zero};

use crate::rational::{format_rational, Rational};

/// `coeffs · z < rhs` (strict) or `coeffs · z ≤ rhs`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
    pub strict: bool,
}

impl Constraint {
    pub fn le(coeffs: Vec<Rational>, rhs: Rational) -> Constraint {
        Constraint { coeffs, rhs, strict: false }
    }

    pub fn lt(coeffs: Vec<Rational>, rhs: Rational) -> Constraint {
        Constraint { coeffs, rhs, strict: true }
    }

    /// `coeffs · z ≥ rhs` (or `>` when strict).
    pub fn ge(coeffs: Vec<Rational>, rhs: Rational, strict: bool) -> Constraint {
        Constraint { coeffs: coeffs.into_iter().map(|c| -c).collect(), rhs: -rhs, strict }
    }

    /// The complementary half-space.
    pub fn negated(&self) -> Constraint {
        Constraint { coeffs: self.coeffs.iter().map(|c| -c).collect(), rhs: -&self.rhs, strict: !self.strict }
    }

    fn is_trivial(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Whether a constraint with all-zero coefficients holds.
    fn trivially_holds(&self) -> bool {
        if self.strict {
            self.rhs.is_positive()
        } else {
            !self.rhs.is_negative()
        }
    }

    /// Scales so the first nonzero coefficient has absolute value one.
    fn normalized(mut self) -> Constraint {
        if let Some(lead) = self.coeffs.iter().find(|c| !c.is_zero()).map(|c| c.abs()) {
            for c in &mut self.coeffs {
                *c = &*c / &lead;
            }
            self.rhs = &self.rhs / &lead;
        }
        self
    }

    pub fn holds_at(&self, z: &[Rational]) -> bool {
        let lhs: Rational = self.coeffs.iter().zip(z).map(|(a, x)| a * x).sum();
        if self.strict {
            lhs < self.rhs
        } else {
            lhs <= self.rhs
        }
    }
}

impl fmt::Debug for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.coeffs.iter().map(format_rational).collect();
        write!(f, "[{}]·z {} {}", terms.join(", "), if self.strict { "<" } else { "≤" }, format_rational(&self.rhs))
    }
}

/// Intersection of finitely many half-spaces in ℚᵈ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polyhedron {
    dim: usize,
    constraints: Vec<Constraint>,
}

impl Polyhedron {
    pub fn universe(dim: usize) -> Polyhedron {
        Polyhedron { dim, constraints: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn with(mut self, c: Constraint) -> Polyhedron {
        debug_assert_eq!(c.coeffs.len(), self.dim);
        self.constraints.push(c);
        self
    }

    pub fn intersect(&self, other: &Polyhedron) -> Polyhedron {
        let mut constraints = self.constraints.clone();
        constraints.extend(other.constraints.iter().cloned());
        Polyhedron { dim: self.dim, constraints }
    }

    /// Replaces strict inequalities by weak ones. For a nonempty polyhedron
    /// this is its topological closure.
    pub fn relaxed(&self) -> Polyhedron {
        let constraints = self.constraints.iter().map(|c| Constraint { strict: false, ..c.clone() }).collect();
        Polyhedron { dim: self.dim, constraints }
    }

    pub fn contains(&self, z: &[Rational]) -> bool {
        self.constraints.iter().all(|c| c.holds_at(z))
    }

    /// `self ∖ other` as pairwise disjoint polyhedra, empty ones dropped.
    pub fn minus(&self, other: &Polyhedron) -> Vec<Polyhedron> {
        let mut out = Vec::new();
        let mut prefix = self.clone();
        for c in &other.constraints {
            let part = prefix.clone().with(c.negated());
            if !part.is_empty() {
                out.push(part);
            }
            prefix = prefix.with(c.clone());
            if prefix.is_empty() {
                break;
            }
        }
        out
    }

    /// Exact emptiness by Fourier–Motzkin elimination; strictness propagates
    /// through every combination that uses a strict inequality.
    pub fn is_empty(&self) -> bool {
        let mut rows: Vec<Constraint> = Vec::new();
        for c in &self.constraints {
            if c.is_trivial() {
                if !c.trivially_holds() {
                    return true;
                }
            } else {
                rows.push(c.clone().normalized());
            }
        }
        for var in 0..self.dim {
            rows = tighten(rows);
            let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
            for r in rows {
                if r.coeffs[var].is_positive() {
                    pos.push(r);
                } else if r.coeffs[var].is_negative() {
                    neg.push(r);
                } else {
                    rest.push(r);
                }
            }
            for p in &pos {
                for n in &neg {
                    let (wp, wn) = (-&n.coeffs[var], p.coeffs[var].clone());
                    let coeffs: Vec<Rational> = p.coeffs.iter().zip(&n.coeffs).map(|(a, b)| a * &wp + b * &wn).collect();
                    let combined = Constraint { coeffs, rhs: &p.rhs * &wp + &n.rhs * &wn, strict: p.strict || n.strict };
                    if combined.is_trivial() {
                        if !combined.trivially_holds() {
                            return true;
                        }
                    } else {
                        rest.push(combined.normalized());
                    }
                }
            }
            rows = rest;
        }
        rows.iter().any(|r| !r.trivially_holds())
    }
}

/// Keeps only the tightest constraint per coefficient vector.
fn tighten(rows: Vec<Constraint>) -> Vec<Constraint> {
    let mut out: Vec<Constraint> = Vec::with_capacity(rows.len());
    for r in rows {
        match out.iter_mut().find(|o| o.coeffs == r.coeffs) {
            Some(o) => {
                if r.rhs < o.rhs || (r.rhs == o.rhs && r.strict) {
                    *o = r;
                }
            }
            None => out.push(r),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn strictness_matters() {
        // x ≤ 0 and x ≥ 0: the point 0.
        let p = Polyhedron::universe(1).with(Constraint::le(v(&[1]), rat(0))).with(Constraint::ge(v(&[1]), rat(0), false));
        assert!(!p.is_empty());
        let q = Polyhedron::universe(1).with(Constraint::lt(v(&[1]), rat(0))).with(Constraint::ge(v(&[1]), rat(0), false));
        assert!(q.is_empty());
        assert!(!q.relaxed().is_empty());
    }

    #[test]
    fn triangle_in_the_plane() {
        // t ≥ 0, x − t > 0, x < 1: nonempty; adding t ≥ 1 empties it.
        let tri = Polyhedron::universe(2)
            .with(Constraint::ge(v(&[1, 0]), rat(0), false))
            .with(Constraint::ge(v(&[-1, 1]), rat(0), true))
            .with(Constraint::lt(v(&[0, 1]), rat(1)));
        assert!(!tri.is_empty());
        assert!(tri.contains(&[rat(0), crate::rational::ratio(1, 2)]));
        assert!(tri.clone().with(Constraint::ge(v(&[1, 0]), rat(1), false)).is_empty());
        assert!(!tri.relaxed().with(Constraint::ge(v(&[1, 0]), rat(1), false)).is_empty());
    }

    #[test]
    fn trivial_rows() {
        let p = Polyhedron::universe(2).with(Constraint::le(v(&[0, 0]), rat(-1)));
        assert!(p.is_empty());
        assert!(!Polyhedron::universe(3).is_empty());
    }
}
