//! Linear subspaces of projective space, given by linear forms.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::dot;
use crate::poly::VarSet;
use crate::{Poly, Rat, RatMat};

/// Common zero set of homogeneous linear forms, stored as the rows of a
/// matrix in reduced echelon form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearVariety {
    vars: VarSet,
    rows: Vec<Vec<Rat>>,
}

impl LinearVariety {
    pub fn from_rows(vars: &VarSet, rows: &[Vec<Rat>]) -> Result<Self> {
        let n = vars.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension(format!("linear form rows must have length {n}")));
        }
        if rows.is_empty() {
            return Ok(LinearVariety { vars: vars.clone(), rows: Vec::new() });
        }
        let (e, piv) = RatMat::from_rows(rows, n)?.rref();
        Ok(LinearVariety { vars: vars.clone(), rows: (0..piv.len()).map(|i| e.row(i).to_vec()).collect() })
    }

    /// From homogeneous linear polynomials over `vars`.
    pub fn from_forms(vars: &VarSet, forms: &[Poly]) -> Result<Self> {
        let rows = forms
            .iter()
            .map(|f| match f.linear_coeffs() {
                Some((c, k)) if k.is_zero() && f.vars() == vars => Ok(c),
                _ => Err(Error::Precondition(format!("{f} is not a linear form over the ambient variables"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(vars, &rows)
    }

    /// `V(x_j : j in J)`.
    pub fn coordinate(vars: &VarSet, zeroed: &[usize]) -> Self {
        let rows: Vec<Vec<Rat>> = zeroed
            .iter()
            .map(|&j| (0..vars.len()).map(|i| if i == j { Rat::from_integer(1.into()) } else { Rat::zero() }).collect())
            .collect();
        Self::from_rows(vars, &rows).expect("coordinate rows")
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn rows(&self) -> &[Vec<Rat>] {
        &self.rows
    }

    pub fn forms(&self) -> Vec<Poly> {
        self.rows.iter().map(|r| Poly::linear(&self.vars, r, Rat::zero())).collect()
    }

    /// Projective dimension; `-1` for the empty set.
    pub fn dim(&self) -> isize {
        self.vars.len() as isize - 1 - self.rows.len() as isize
    }

    /// Basis of the underlying vector space, in reduced echelon form.
    pub fn parametrize(&self) -> Vec<Vec<Rat>> {
        if self.rows.is_empty() {
            return RatMat::identity(self.vars.len()).to_rows();
        }
        RatMat::from_rows(&self.rows, self.vars.len()).expect("rows").kernel_basis()
    }

    pub fn contains_point(&self, x: &[Rat]) -> bool {
        self.rows.iter().all(|r| dot(r, x).is_zero())
    }

    /// `other` is a subset of `self`.
    pub fn contains(&self, other: &LinearVariety) -> bool {
        other.parametrize().iter().all(|v| self.contains_point(v))
    }

    pub fn intersect(&self, other: &LinearVariety) -> Result<Self> {
        let rows: Vec<Vec<Rat>> = self.rows.iter().chain(&other.rows).cloned().collect();
        Self::from_rows(&self.vars, &rows)
    }

    /// `p` vanishes identically on the variety, by symbolic substitution of
    /// a parametrization.
    pub fn vanishes(&self, p: &Poly) -> Result<bool> {
        let basis = self.parametrize();
        if basis.is_empty() {
            return Ok(true);
        }
        let t = VarSet::numbered("t", basis.len());
        let images: Vec<Poly> = (0..self.vars.len())
            .map(|i| {
                let c: Vec<Rat> = basis.iter().map(|b| b[i].clone()).collect();
                Poly::linear(&t, &c, Rat::zero())
            })
            .collect();
        Ok(p.substitute(&images, &t)?.is_zero())
    }

    /// Points of the underlying space: the basis vectors, their sum, and
    /// `sum (k+1) b_k`.
    pub fn sample_points(&self) -> Vec<Vec<Rat>> {
        let basis = self.parametrize();
        let mut out = basis.clone();
        if basis.len() > 1 {
            let n = self.vars.len();
            let mut s = vec![Rat::zero(); n];
            let mut w = vec![Rat::zero(); n];
            for (k, b) in basis.iter().enumerate() {
                for i in 0..n {
                    s[i] += &b[i];
                    w[i] += &b[i] * Rat::from_integer((k as i64 + 1).into());
                }
            }
            out.push(s);
            out.push(w);
        }
        out
    }
}

/// Components compare by dimension, then by echelon rows.
impl PartialOrd for LinearVariety {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LinearVariety {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.dim().cmp(&other.dim()).then_with(|| self.rows.cmp(&other.rows))
    }
}

impl fmt::Display for LinearVariety {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let forms: Vec<String> = self.forms().iter().map(|p| p.to_string()).collect();
        write!(f, "V({})", forms.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn vars() -> VarSet {
        VarSet::numbered("x", 4)
    }

    #[test]
    fn dimension_and_containment() {
        let v = vars();
        let plane = LinearVariety::coordinate(&v, &[0]);
        let line = LinearVariety::coordinate(&v, &[0, 2]);
        assert_eq!(plane.dim(), 2);
        assert_eq!(line.dim(), 1);
        assert!(plane.contains(&line));
        assert!(!line.contains(&plane));
        assert_eq!(plane.intersect(&line).unwrap(), line);
    }

    #[test]
    fn vanishing_is_symbolic() {
        let v = vars();
        let p = Poly::parse("x1*x2 + x3^2 - x4^2", &v).unwrap();
        let l = LinearVariety::from_forms(&v, &[Poly::parse("x1", &v).unwrap(), Poly::parse("x3 + x4", &v).unwrap()])
            .unwrap();
        assert!(l.vanishes(&p).unwrap());
        let m = LinearVariety::from_forms(&v, &[Poly::parse("x1 - x2", &v).unwrap()]).unwrap();
        assert!(!m.vanishes(&p).unwrap());
        assert!(m.contains_point(&[int(1), int(1), int(5), int(0)]));
    }

    #[test]
    fn non_linear_form_rejected() {
        let v = vars();
        assert!(LinearVariety::from_forms(&v, &[Poly::parse("x1*x2", &v).unwrap()]).is_err());
        assert!(LinearVariety::from_forms(&v, &[Poly::parse("x1 + 1", &v).unwrap()]).is_err());
    }
}
