//! Dense univariate polynomials over the rationals: gcd and rational roots.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::poly::{Monomial, SparsePoly};
use crate::Rat;

/// Coefficients from the constant term upward, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly(Vec<Rat>);

/// Prints in the variable `t`, highest degree first.
impl std::fmt::Display for UPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let vars = crate::VarSet::new(["t"]).expect("one label");
        let mut p = SparsePoly::zero(&vars);
        for (k, c) in self.0.iter().enumerate() {
            p = &p + &SparsePoly::monomial(&vars, Monomial(vec![k as u32]), c.clone());
        }
        write!(f, "{p}")
    }
}

impl UPoly {
    pub fn new(mut c: Vec<Rat>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        UPoly(c)
    }

    /// Reads a polynomial that involves only variable `v`.
    pub fn from_sparse(p: &SparsePoly<Rat>, v: usize) -> Option<Self> {
        if p.support().iter().any(|&i| i != v) {
            return None;
        }
        let deg = p.degree_in(v).unwrap_or(0) as usize;
        let n = p.vars().len();
        let c = (0..=deg)
            .map(|k| {
                let mut e = vec![0; n];
                e[v] = k as u32;
                p.coeff(&Monomial(e))
            })
            .collect();
        Some(UPoly::new(c))
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.0.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
    }

    fn monic(&self) -> Self {
        match self.0.last() {
            None => self.clone(),
            Some(l) => UPoly(self.0.iter().map(|c| c / l).collect()),
        }
    }

    fn rem(&self, d: &Self) -> Self {
        let mut r = self.0.clone();
        let dl = d.0.last().expect("nonzero divisor");
        let dd = d.0.len() - 1;
        while r.len() > dd && !r.is_empty() {
            let f = r.last().unwrap() / dl;
            let shift = r.len() - 1 - dd;
            for (i, c) in d.0.iter().enumerate() {
                r[shift + i] -= &f * c;
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        UPoly(r)
    }

    /// Monic greatest common divisor; zero only if both inputs are zero.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// All rational roots, ascending, without multiplicity. `None` when a
    /// coefficient is too large to enumerate divisors of.
    pub fn rational_roots(&self) -> Option<Vec<Rat>> {
        if self.is_zero() {
            return None;
        }
        let mut den = BigInt::one();
        for c in &self.0 {
            den = den.lcm(c.denom());
        }
        let mut ints: Vec<BigInt> = self.0.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        let mut roots = Vec::new();
        let lead_zeros = ints.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros > 0 {
            roots.push(Rat::zero());
            ints.drain(..lead_zeros);
        }
        if ints.len() > 1 {
            let ps = divisors(ints.first().unwrap())?;
            let qs = divisors(ints.last().unwrap())?;
            let mut cands: Vec<Rat> = Vec::new();
            for p in &ps {
                for q in &qs {
                    let r = Rat::new(p.clone(), q.clone());
                    cands.push(r.clone());
                    cands.push(-r);
                }
            }
            cands.sort();
            cands.dedup();
            let shifted = UPoly(ints.iter().map(|c| Rat::from_integer(c.clone())).collect());
            roots.extend(cands.into_iter().filter(|r| shifted.eval(r).is_zero()));
        }
        roots.sort();
        roots.dedup();
        Some(roots)
    }
}

const DIVISOR_LIMIT: u64 = 1 << 50;

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n == 0 || n > DIVISOR_LIMIT {
        return None;
    }
    let mut out = Vec::new();
    let r = n.sqrt();
    for d in 1..=r {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d != n / d {
                out.push(BigInt::from(n / d));
            }
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn u(c: &[i64]) -> UPoly {
        UPoly::new(c.iter().map(|&v| int(v)).collect())
    }

    #[test]
    fn gcd_of_shared_factor() {
        // (x - 1)(x + 2) and (x - 1)(x - 3)
        let g = u(&[-2, 1, 1]).gcd(&u(&[3, -4, 1]));
        assert_eq!(g, u(&[-1, 1]));
        assert_eq!(u(&[1, 1]).gcd(&u(&[2])), u(&[1]));
    }

    #[test]
    fn rational_roots_found() {
        // (2x - 1)(x + 3) x
        let p = u(&[0, -3, 5, 2]);
        assert_eq!(p.rational_roots().unwrap(), vec![int(-3), int(0), rat(1, 2)]);
        assert_eq!(u(&[2, 0, 1]).rational_roots().unwrap(), vec![]);
    }
}
