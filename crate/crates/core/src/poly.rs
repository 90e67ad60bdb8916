//! Sparse multivariate polynomials with dense exponent vectors.
//!
//! Terms are kept in a `BTreeMap` keyed by [`Monomial`], whose order is
//! graded lexicographic with the first variable largest. Printing walks the
//! map from the largest monomial down.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::Rat;

/// Ordered, duplicate-free variable labels shared between polynomials.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VarSet(Arc<Vec<String>>);

impl VarSet {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let distinct: BTreeSet<&String> = labels.iter().collect();
        if distinct.len() != labels.len() {
            return Err(Error::Precondition("variable labels must be distinct".into()));
        }
        Ok(VarSet(Arc::new(labels)))
    }

    /// `prefix1, ..., prefixN`.
    pub fn numbered(prefix: &str, n: usize) -> Self {
        VarSet(Arc::new((1..=n).map(|i| format!("{prefix}{i}")).collect()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.0[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.0.iter().position(|l| l == label)
    }

    /// The sub-list of labels at `idx`, in that order.
    pub fn subset(&self, idx: &[usize]) -> Self {
        VarSet(Arc::new(idx.iter().map(|&i| self.0[i].clone()).collect()))
    }
}

impl fmt::Debug for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Exponent vector; `Ord` is graded lexicographic.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// Indices with positive exponent.
    pub fn support(&self) -> Vec<usize> {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i).collect()
    }

    pub fn is_squarefree(&self) -> bool {
        self.0.iter().all(|&e| e <= 1)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SparsePoly<T> {
    vars: VarSet,
    terms: BTreeMap<Monomial, T>,
}

impl<T: Scalar> SparsePoly<T> {
    pub fn zero(vars: &VarSet) -> Self {
        SparsePoly { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &VarSet, c: T) -> Self {
        Self::monomial(vars, Monomial::one(vars.len()), c)
    }

    pub fn var(vars: &VarSet, i: usize) -> Self {
        Self::monomial(vars, Monomial::var(vars.len(), i), T::one())
    }

    pub fn monomial(vars: &VarSet, m: Monomial, c: T) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(m, c);
        p
    }

    /// Product of the variables at `idx` times `c`.
    pub fn squarefree(vars: &VarSet, idx: &[usize], c: T) -> Self {
        let mut e = vec![0; vars.len()];
        for &i in idx {
            e[i] += 1;
        }
        Self::monomial(vars, Monomial(e), c)
    }

    /// `sum coefs[i] * x_i + c`.
    pub fn linear(vars: &VarSet, coefs: &[T], c: T) -> Self {
        let mut p = Self::constant(vars, c);
        for (i, a) in coefs.iter().enumerate() {
            p.add_term(Monomial::var(vars.len(), i), a.clone());
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: T) {
        debug_assert_eq!(m.0.len(), self.vars.len());
        if c.negligible() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = v.clone() + c;
                if v.negligible() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms from the largest monomial to the smallest.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &T)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, m: &Monomial) -> T {
        self.terms.get(m).cloned().unwrap_or_else(T::zero)
    }

    /// `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[i]).max()
    }

    pub fn is_constant(&self) -> bool {
        self.total_degree().unwrap_or(0) == 0
    }

    pub fn constant_term(&self) -> T {
        self.coeff(&Monomial::one(self.vars.len()))
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn leading(&self) -> Option<(&Monomial, &T)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &T) -> Self {
        let mut p = Self::zero(&self.vars);
        for (m, v) in &self.terms {
            p.add_term(m.clone(), v.clone() * c.clone());
        }
        p
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(&self.vars, T::one());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, point: &[T]) -> Result<T> {
        if point.len() != self.vars.len() {
            return Err(Error::Dimension(format!(
                "point has {} coordinates, polynomial has {} variables",
                point.len(),
                self.vars.len()
            )));
        }
        let mut acc = T::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                for _ in 0..e {
                    t = t * x.clone();
                }
            }
            acc = acc + t;
        }
        Ok(acc)
    }

    pub fn partial(&self, i: usize) -> Self {
        let mut p = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e > 0 {
                let mut n = m.clone();
                n.0[i] -= 1;
                p.add_term(n, c.clone() * T::from_int(e as i64));
            }
        }
        p
    }

    /// Drops every term divisible by one of the variables at `zeroed`.
    pub fn restrict_zero(&self, zeroed: &[usize]) -> Self {
        let mut p = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            if zeroed.iter().all(|&i| m.0[i] == 0) {
                p.terms.insert(m.clone(), c.clone());
            }
        }
        p
    }

    /// [`restrict_zero`](Self::restrict_zero) by label.
    pub fn restrict_zero_labels(&self, labels: &[&str]) -> Result<Self> {
        let idx = labels
            .iter()
            .map(|l| self.vars.index_of(l).ok_or_else(|| Error::Precondition(format!("unknown variable {l}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.restrict_zero(&idx))
    }

    /// Replaces variable `i` by the constant `v`.
    pub fn specialize(&self, i: usize, v: &T) -> Self {
        let mut p = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            let mut n = m.clone();
            let e = std::mem::replace(&mut n.0[i], 0);
            let mut t = c.clone();
            for _ in 0..e {
                t = t * v.clone();
            }
            p.add_term(n, t);
        }
        p
    }

    /// Composes with `x_i -> images[i]`; all images share one target
    /// variable set (`target`, needed when `images` is empty).
    pub fn substitute(&self, images: &[SparsePoly<T>], target: &VarSet) -> Result<Self> {
        if images.len() != self.vars.len() {
            return Err(Error::Dimension(format!(
                "{} images for {} variables",
                images.len(),
                self.vars.len()
            )));
        }
        if let Some(bad) = images.iter().find(|q| q.vars != *target) {
            return Err(Error::Precondition(format!(
                "substitution image over {:?}, expected {:?}",
                bad.vars, target
            )));
        }
        let mut powers: Vec<Vec<SparsePoly<T>>> = images.iter().map(|q| vec![Self::constant(target, T::one()), q.clone()]).collect();
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut t = Self::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// [`substitute`](Self::substitute) keyed by label; every variable that
    /// occurs in `self` must be mapped.
    pub fn substitute_map(&self, map: &HashMap<String, SparsePoly<T>>, target: &VarSet) -> Result<Self> {
        let used: BTreeSet<usize> = self.terms.keys().flat_map(|m| m.support()).collect();
        let images = (0..self.vars.len())
            .map(|i| match map.get(self.vars.label(i)) {
                Some(q) => Ok(q.clone()),
                None if !used.contains(&i) => Ok(Self::zero(target)),
                None => Err(Error::Precondition(format!("no image for variable {}", self.vars.label(i)))),
            })
            .collect::<Result<Vec<_>>>()?;
        self.substitute(&images, target)
    }

    /// Moves the polynomial to `target`, sending variable `i` to
    /// `index_map[i]`.
    pub fn embed(&self, target: &VarSet, index_map: &[usize]) -> Self {
        let mut p = Self::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0; target.len()];
            for (i, &k) in m.0.iter().enumerate() {
                e[index_map[i]] += k;
            }
            p.add_term(Monomial(e), c.clone());
        }
        p
    }

    /// Largest monomial dividing every term, and the cofactor.
    pub fn monomial_content(&self) -> Result<(Monomial, Self)> {
        let mut it = self.terms.keys();
        let first = it.next().ok_or_else(|| Error::Precondition("monomial content of zero".into()))?;
        let mut g = first.0.clone();
        for m in it {
            for (a, &b) in g.iter_mut().zip(&m.0) {
                *a = (*a).min(b);
            }
        }
        let g = Monomial(g);
        let mut q = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            q.terms.insert(m.div(&g), c.clone());
        }
        Ok((g, q))
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (dm, dc) = d.leading()?;
        let (dm, dc) = (dm.clone(), dc.clone());
        let mut r = self.clone();
        let mut q = Self::zero(&self.vars);
        while let Some((rm, rc)) = r.leading() {
            if !dm.divides(rm) {
                return None;
            }
            let m = rm.div(&dm);
            let c = rc.clone() / dc.clone();
            let t = Self::monomial(&self.vars, m.clone(), c.clone());
            r = &r - &(&t * d);
            q.add_term(m, c);
            if !T::EXACT && r.terms.len() > 4 * self.terms.len() + 16 {
                return None;
            }
        }
        Some(q)
    }

    /// Exact division by a nonzero form of degree at most one.
    pub fn divide_linear(&self, l: &Self) -> Result<Option<Self>> {
        match l.total_degree() {
            None => Err(Error::Precondition("division by the zero form".into())),
            Some(d) if d > 1 => Err(Error::Precondition("divisor is not linear".into())),
            _ => Ok(self.div_exact(l)),
        }
    }

    /// `(coefficients, constant)` when the degree is at most one.
    pub fn linear_coeffs(&self) -> Option<(Vec<T>, T)> {
        if self.total_degree().unwrap_or(0) > 1 {
            return None;
        }
        let n = self.vars.len();
        let coefs = (0..n).map(|i| self.coeff(&Monomial::var(n, i))).collect();
        Some((coefs, self.constant_term()))
    }

    /// Indices of variables that occur.
    pub fn support(&self) -> Vec<usize> {
        let s: BTreeSet<usize> = self.terms.keys().flat_map(|m| m.support()).collect();
        s.into_iter().collect()
    }

    /// Sylvester resultant eliminating variable `v`. Rows for `self` come
    /// first, each listing coefficients from the highest power down.
    pub fn resultant(&self, q: &Self, v: usize) -> Result<Self> {
        if self.is_zero() || q.is_zero() {
            return Err(Error::Precondition("resultant of the zero polynomial".into()));
        }
        if self.vars != q.vars {
            return Err(Error::Precondition("resultant operands use different variables".into()));
        }
        let a = self.coeffs_in(v);
        let b = q.coeffs_in(v);
        let (m, n) = (a.len() - 1, b.len() - 1);
        let size = m + n;
        let zero = Self::zero(&self.vars);
        let mut s = vec![vec![zero.clone(); size]; size];
        for r in 0..n {
            for (k, c) in a.iter().rev().enumerate() {
                s[r][r + k] = c.clone();
            }
        }
        for r in 0..m {
            for (k, c) in b.iter().rev().enumerate() {
                s[n + r][r + k] = c.clone();
            }
        }
        Ok(poly_det(s, &self.vars))
    }

    /// Coefficients of powers of variable `v`, lowest power first.
    pub fn coeffs_in(&self, v: usize) -> Vec<Self> {
        let deg = self.degree_in(v).unwrap_or(0) as usize;
        let mut out = vec![Self::zero(&self.vars); deg + 1];
        for (m, c) in &self.terms {
            let mut n = m.clone();
            let e = std::mem::replace(&mut n.0[v], 0) as usize;
            out[e].add_term(n, c.clone());
        }
        out
    }

    /// Renders with `labels` in place of the variable names.
    pub fn fmt_with(&self, labels: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors = Vec::new();
            if !abs.is_one() || m.degree() == 0 {
                factors.push(abs.to_string());
            }
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(labels[i].clone()),
                    _ => factors.push(format!("{}^{e}", labels[i])),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

/// Determinant of a matrix of polynomials by Bareiss elimination with exact
/// polynomial division.
fn poly_det<T: Scalar>(mut a: Vec<Vec<SparsePoly<T>>>, vars: &VarSet) -> SparsePoly<T> {
    let n = a.len();
    if n == 0 {
        return SparsePoly::constant(vars, T::one());
    }
    let mut negate = false;
    let mut prev = SparsePoly::constant(vars, T::one());
    for k in 0..n - 1 {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return SparsePoly::zero(vars);
        };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate { -&d } else { d }
}

impl SparsePoly<Rat> {
    /// Parses the canonical text form (and a little more: parentheses and
    /// powers of parenthesized groups) over `vars`.
    pub fn parse(s: &str, vars: &VarSet) -> Result<Self> {
        let toks = tokenize(s)?;
        let mut p = Parser { toks, pos: 0, vars };
        let e = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(Error::Parse(format!("unexpected trailing input in {s:?}")));
        }
        Ok(e)
    }

    /// Scales to integer coefficients with gcd one and a positive leading
    /// coefficient. Returns the scaled polynomial and the factor `c` with
    /// `self = c * result`.
    pub fn primitive(&self) -> (Self, Rat) {
        if self.is_zero() {
            return (self.clone(), Rat::one());
        }
        let mut den = BigInt::one();
        let mut num = BigInt::zero();
        for c in self.terms.values() {
            den = den.lcm(c.denom());
        }
        for c in self.terms.values() {
            num = num.gcd(&(c.numer() * (&den / c.denom())));
        }
        let mut c = Rat::new(num, den);
        if self.leading().is_some_and(|(_, v)| v.is_negative()) {
            c = -c;
        }
        (self.scale(&(Rat::one() / &c)), c)
    }

    pub fn to_f64(&self) -> SparsePoly<f64> {
        let mut p = SparsePoly::zero(&self.vars);
        for (m, c) in &self.terms {
            p.add_term(m.clone(), crate::scalar::to_f64(c));
        }
        p
    }
}

impl<T: Scalar> fmt::Display for SparsePoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with(self.vars.labels()))
    }
}

impl<T: Scalar> fmt::Debug for SparsePoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<T: Scalar> Add for &SparsePoly<T> {
    type Output = SparsePoly<T>;
    fn add(self, rhs: Self) -> SparsePoly<T> {
        assert_eq!(self.vars, rhs.vars, "adding polynomials over different variables");
        let mut p = self.clone();
        for (m, c) in &rhs.terms {
            p.add_term(m.clone(), c.clone());
        }
        p
    }
}

impl<T: Scalar> Sub for &SparsePoly<T> {
    type Output = SparsePoly<T>;
    fn sub(self, rhs: Self) -> SparsePoly<T> {
        self + &(-rhs)
    }
}

impl<T: Scalar> Neg for &SparsePoly<T> {
    type Output = SparsePoly<T>;
    fn neg(self) -> SparsePoly<T> {
        SparsePoly { vars: self.vars.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

impl<T: Scalar> Mul for &SparsePoly<T> {
    type Output = SparsePoly<T>;
    fn mul(self, rhs: Self) -> SparsePoly<T> {
        assert_eq!(self.vars, rhs.vars, "multiplying polynomials over different variables");
        let mut p = SparsePoly::zero(&self.vars);
        for (m, c) in &self.terms {
            for (n, d) in &rhs.terms {
                p.add_term(m.mul(n), c.clone() * d.clone());
            }
        }
        p
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Tok::Num(text.parse().map_err(|_| Error::Parse(format!("bad number {text}")))?));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else if c == '\u{2212}' {
            out.push(Tok::Sym('-'));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    vars: &'a VarSet,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<SparsePoly<Rat>> {
        let mut acc = SparsePoly::zero(self.vars);
        let mut first = true;
        loop {
            let neg = if self.eat('-') {
                true
            } else {
                if !self.eat('+') && !first {
                    break;
                }
                false
            };
            let t = self.term()?;
            acc = if neg { &acc - &t } else { &acc + &t };
            first = false;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<SparsePoly<Rat>> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn exponent(&mut self) -> Result<u32> {
        if !self.eat('^') {
            return Ok(1);
        }
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                u32::try_from(&n).map_err(|_| Error::Parse("exponent too large".into()))
            }
            _ => Err(Error::Parse("expected exponent after ^".into())),
        }
    }

    fn factor(&mut self) -> Result<SparsePoly<Rat>> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let mut v = Rat::from_integer(n);
                if self.eat('/') {
                    match self.toks.get(self.pos).cloned() {
                        Some(Tok::Num(d)) if !d.is_zero() => {
                            self.pos += 1;
                            v /= Rat::from_integer(d);
                        }
                        _ => return Err(Error::Parse("expected nonzero denominator".into())),
                    }
                }
                Ok(SparsePoly::constant(self.vars, v))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let i = self.vars.index_of(&name).ok_or_else(|| Error::Parse(format!("unknown variable {name}")))?;
                let e = self.exponent()?;
                Ok(SparsePoly::var(self.vars, i).pow(e))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("unbalanced parenthesis".into()));
                }
                let e = self.exponent()?;
                Ok(inner.pow(e))
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;
    use crate::Poly;
    use proptest::prelude::*;

    fn xs(n: usize) -> VarSet {
        VarSet::numbered("x", n)
    }

    fn p(s: &str, v: &VarSet) -> Poly {
        Poly::parse(s, v).unwrap()
    }

    #[test]
    fn display_is_descending_grlex() {
        let v = xs(4);
        let q = p("x2*x3 + 3*x3*x4 + x1*x2 + x1*x4", &v);
        assert_eq!(q.to_string(), "x1*x2 + x1*x4 + x2*x3 + 3*x3*x4");
        assert_eq!(p("-x1^2 + 1/2", &v).to_string(), "-x1^2 + 1/2");
        assert_eq!(Poly::zero(&v).to_string(), "0");
        assert_eq!(p("2 - x2", &v).to_string(), "-x2 + 2");
    }

    #[test]
    fn substitute_examples() {
        let x = xs(2);
        let y = VarSet::numbered("y", 2);
        let q = p("x1*x2", &x);
        let imgs = vec![p("y1 + 1", &y), p("y2 + 1", &y)];
        assert_eq!(q.substitute(&imgs, &y).unwrap(), p("y1*y2 + y1 + y2 + 1", &y));
        let map = HashMap::from([("x1".to_string(), p("y1", &y))]);
        assert!(matches!(q.substitute_map(&map, &y), Err(Error::Precondition(_))));
    }

    #[test]
    fn restrict_examples() {
        let v = xs(4);
        let sq = p("x3*x4 + x1*x4 + x1*x2 + x2*x3", &v);
        assert_eq!(sq.restrict_zero(&[0]), p("x3*x4 + x2*x3", &v));
        assert_eq!(sq.restrict_zero(&[]), sq);
        assert_eq!(sq.restrict_zero_labels(&["x1"]).unwrap(), p("x3*x4 + x2*x3", &v));
        assert!(sq.restrict_zero_labels(&["z"]).is_err());
    }

    #[test]
    fn monomial_content_examples() {
        let v = xs(6);
        let q = p("x6*(x3*x4 + x1*x4 + x1*x2 + x2*x3)", &v);
        let (m, c) = q.monomial_content().unwrap();
        assert_eq!(m, Monomial(vec![0, 0, 0, 0, 0, 1]));
        assert_eq!(c, p("x3*x4 + x1*x4 + x1*x2 + x2*x3", &v));
        let (m, c) = p("x1*x2", &v).monomial_content().unwrap();
        assert_eq!(m.support(), vec![0, 1]);
        assert_eq!(c, Poly::constant(&v, int(1)));
        assert!(Poly::zero(&v).monomial_content().is_err());
    }

    #[test]
    fn divide_linear_examples() {
        let v = xs(4);
        let q = p("(x1 + x2)*(x3 + x4)", &v);
        assert_eq!(q.divide_linear(&p("x1 + x2", &v)).unwrap(), Some(p("x3 + x4", &v)));
        assert_eq!(p("x1*x2", &v).divide_linear(&p("x1 + x2", &v)).unwrap(), None);
        assert!(q.divide_linear(&Poly::zero(&v)).is_err());
    }

    #[test]
    fn resultant_examples() {
        let y = VarSet::numbered("y", 2);
        let r = p("y2 - y1", &y).resultant(&p("y2 + y1", &y), 1).unwrap();
        assert_eq!(r, p("2*y1", &y));
        let f = p("y1*y2 + y2^2 - 3", &y);
        assert!(f.resultant(&f, 1).unwrap().is_zero());
        let r = p("y1*y2 - 1", &y).resultant(&p("y1 + y2", &y), 1).unwrap();
        assert_eq!(r, p("y1^2 + 1", &y));
        assert!(p("y1", &y).resultant(&Poly::zero(&y), 1).is_err());
    }

    #[test]
    fn primitive_normalizes() {
        let v = xs(2);
        let (q, c) = p("-3/2*x1 - 9/4*x2", &v).primitive();
        assert_eq!(q, p("2*x1 + 3*x2", &v));
        assert_eq!(c, crate::scalar::rat(-3, 4));
    }

    fn arb_poly(n: usize, max_terms: usize, max_deg: u32) -> impl Strategy<Value = Poly> {
        prop::collection::vec((prop::collection::vec(0..=max_deg, n), -6i64..=6, 1i64..=3), 0..=max_terms).prop_map(
            move |terms| {
                let v = xs(n);
                let mut q = Poly::zero(&v);
                for (e, a, b) in terms {
                    q.add_term(Monomial(e), crate::scalar::rat(a, b));
                }
                q
            },
        )
    }

    fn arb_linear(n: usize) -> impl Strategy<Value = Poly> {
        prop::collection::vec(-4i64..=4, n + 1).prop_map(move |c| {
            let coefs: Vec<Rat> = c[..n].iter().map(|&v| int(v)).collect();
            Poly::linear(&xs(n), &coefs, int(c[n]))
        })
    }

    proptest! {
        #[test]
        fn print_parse_roundtrip(q in arb_poly(3, 6, 3)) {
            prop_assert_eq!(Poly::parse(&q.to_string(), q.vars()).unwrap(), q);
        }

        #[test]
        fn substitute_is_multiplicative(a in arb_poly(2, 4, 2), b in arb_poly(2, 4, 2), l in arb_linear(3), k in arb_linear(3)) {
            let t = xs(3);
            let imgs = vec![l, k];
            let lhs = (&a * &b).substitute(&imgs, &t).unwrap();
            let rhs = &a.substitute(&imgs, &t).unwrap() * &b.substitute(&imgs, &t).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn restrict_composes(q in arb_poly(4, 8, 2), s in prop::collection::vec(0usize..4, 0..3), t in prop::collection::vec(0usize..4, 0..3)) {
            let both: Vec<usize> = s.iter().chain(&t).copied().collect();
            prop_assert_eq!(q.restrict_zero(&both), q.restrict_zero(&s).restrict_zero(&t));
        }

        #[test]
        fn divide_linear_inverts_product(q in arb_poly(3, 5, 2), l in arb_linear(3)) {
            prop_assume!(!l.is_zero());
            prop_assert_eq!((&q * &l).divide_linear(&l).unwrap(), Some(q));
        }
    }
}
