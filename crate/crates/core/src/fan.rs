//! Simplicial fans given by a ray matrix and a list of maximal cones.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::feasibility::{feasible, Ineq};
use crate::linalg::dot;
use crate::poly::VarSet;
use crate::scalar::int;
use crate::{Rat, RatMat};

/// A simplicial fan in `R^d`. Rays are rows of an `n x d` matrix and keep
/// their input order everywhere; cones are sorted lists of row indices.
#[derive(Clone, Debug)]
pub struct SimplicialFan {
    d: usize,
    rays: RatMat,
    max_cones: Vec<Vec<usize>>,
    vars: VarSet,
    faces: OnceLock<BTreeSet<Vec<usize>>>,
}

impl PartialEq for SimplicialFan {
    fn eq(&self, other: &Self) -> bool {
        self.d == other.d && self.rays == other.rays && self.max_cones == other.max_cones && self.vars == other.vars
    }
}

/// The star fan of a cone `tau` together with the data relating it to the
/// parent fan.
#[derive(Clone, Debug)]
pub struct StarFanData {
    /// The star fan, in dimension `d - |tau|`, with rays labelled as in the
    /// parent.
    pub fan: SimplicialFan,
    pub tau: Vec<usize>,
    /// `nb(tau)` ascending; star ray `i` comes from parent ray `ray_map[i]`.
    pub ray_map: Vec<usize>,
    /// `|det T_tau|`.
    pub c_tau: Rat,
    pub t_tau: RatMat,
}

/// The subfan of full-dimensional cones and the rays it loses.
#[derive(Clone, Debug)]
pub struct BarFan {
    pub fan: SimplicialFan,
    /// Parent index of each ray kept.
    pub kept: Vec<usize>,
    pub dropped: Vec<usize>,
}

impl SimplicialFan {
    /// Builds and validates (non-strict) a fan.
    pub fn new(d: usize, rays: RatMat, max_cones: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self> {
        let f = Self::from_parts(d, rays, max_cones, labels)?;
        f.validate(false)?;
        Ok(f)
    }

    /// Builds a fan checking only shapes and index ranges. Cones are sorted;
    /// their order is kept.
    pub fn from_parts(d: usize, rays: RatMat, max_cones: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self> {
        let n = rays.rows();
        if rays.cols() != d {
            return Err(Error::Dimension(format!("rays have {} coordinates, expected {d}", rays.cols())));
        }
        let vars = match labels {
            Some(l) if l.len() != n => {
                return Err(Error::Dimension(format!("{} labels for {n} rays", l.len())));
            }
            Some(l) => VarSet::new(l)?,
            None => VarSet::numbered("x", n),
        };
        let mut cones = Vec::with_capacity(max_cones.len());
        for c in max_cones {
            let mut c = c;
            c.sort_unstable();
            if let Some(&bad) = c.iter().find(|&&r| r >= n) {
                return Err(Error::Validation(format!("cone {c:?} uses ray index {bad} but there are {n} rays")));
            }
            if c.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Validation(format!("cone {c:?} repeats a ray")));
            }
            cones.push(c);
        }
        Ok(SimplicialFan { d, rays, max_cones: cones, vars, faces: OnceLock::new() })
    }

    /// Convenience constructor from integer rows and 0-based cones.
    pub fn from_ints(d: usize, rays: &[&[i64]], cones: &[&[usize]]) -> Result<Self> {
        let rows: Vec<Vec<Rat>> = rays.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect();
        let m = RatMat::from_rows(&rows, d)?;
        Self::new(d, m, cones.iter().map(|c| c.to_vec()).collect(), None)
    }

    /// The fan in `R^0` with a single zero-dimensional cone.
    pub fn trivial() -> Self {
        Self::from_parts(0, RatMat::zeros(0, 0), vec![vec![]], None).expect("trivial fan")
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.rays.rows()
    }

    pub fn rays(&self) -> &RatMat {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &[Rat] {
        self.rays.row(i)
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn labels(&self) -> Vec<String> {
        self.vars.labels().to_vec()
    }

    /// Full-dimensional cones in input order.
    pub fn d_cones(&self) -> Vec<&Vec<usize>> {
        self.max_cones.iter().filter(|c| c.len() == self.d).collect()
    }

    /// Every cone of the fan, including the zero cone.
    pub fn cones(&self) -> &BTreeSet<Vec<usize>> {
        self.faces.get_or_init(|| {
            let mut all = BTreeSet::new();
            for c in &self.max_cones {
                for k in 0..=c.len() {
                    for s in c.iter().copied().combinations(k) {
                        all.insert(s);
                    }
                }
            }
            all
        })
    }

    /// Whether the (sorted) index set spans a cone of the fan.
    pub fn is_cone(&self, s: &[usize]) -> bool {
        self.cones().contains(s)
    }

    pub fn sub_matrix(&self, cone: &[usize]) -> RatMat {
        self.rays.select_rows(cone)
    }

    /// `|det U_sigma|` for a full-dimensional cone.
    pub fn det_abs(&self, cone: &[usize]) -> Rat {
        self.sub_matrix(cone).det().map(|v| v.abs()).unwrap_or_else(|_| Rat::zero())
    }

    /// Checks the fan invariants. Strict mode also certifies that every two
    /// maximal cones meet in a common face.
    pub fn validate(&self, strict: bool) -> Result<()> {
        let n = self.n();
        if self.rays.rank() != self.d {
            return Err(Error::Validation(format!("ray matrix has rank {}, expected {}", self.rays.rank(), self.d)));
        }
        for i in 0..n {
            if self.ray(i).iter().all(Zero::is_zero) {
                return Err(Error::Validation(format!("ray {} is the zero vector", i + 1)));
            }
        }
        for (i, j) in (0..n).tuple_combinations() {
            let pair = self.rays.select_rows(&[i, j]);
            if pair.rank() == 1 && dot(self.ray(i), self.ray(j)).is_positive() {
                return Err(Error::Validation(format!("duplicate ray: rays {} and {} are positive multiples", i + 1, j + 1)));
            }
        }
        for c in &self.max_cones {
            if c.len() > self.d {
                return Err(Error::Validation(format!("cone {} has more than d = {} rays", one_based(c), self.d)));
            }
            if self.sub_matrix(c).rank() != c.len() {
                return Err(Error::Validation(format!("cone {} is not simplicial", one_based(c))));
            }
        }
        for (a, b) in self.max_cones.iter().tuple_combinations() {
            let (sa, sb): (BTreeSet<_>, BTreeSet<_>) = (a.iter().collect(), b.iter().collect());
            if sa.is_subset(&sb) || sb.is_subset(&sa) {
                return Err(Error::Validation(format!(
                    "maximal cones {} and {} are nested or repeated",
                    one_based(a),
                    one_based(b)
                )));
            }
        }
        if strict {
            for (a, b) in self.max_cones.iter().tuple_combinations() {
                if !self.meet_in_common_face(a, b) {
                    return Err(Error::Validation(format!(
                        "cones {} and {} do not intersect in a common face",
                        one_based(a),
                        one_based(b)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Looks for `h` with `h = 0` on the shared rays, `h >= 1` on the rest of
    /// `a` and `h <= -1` on the rest of `b`.
    fn meet_in_common_face(&self, a: &[usize], b: &[usize]) -> bool {
        let shared: Vec<usize> = a.iter().filter(|r| b.contains(r)).copied().collect();
        // Parametrize {h : h . u = 0 for shared u} as h = K^T t.
        let basis = if shared.is_empty() {
            RatMat::identity(self.d).to_rows()
        } else {
            self.sub_matrix(&shared).kernel_basis()
        };
        let k = basis.len();
        let project = |r: usize| -> Vec<Rat> { basis.iter().map(|v| dot(v, self.ray(r))).collect() };
        let mut cons = Vec::new();
        for &r in a.iter().filter(|r| !shared.contains(r)) {
            cons.push(Ineq::new(project(r), Rat::one()));
        }
        for &r in b.iter().filter(|r| !shared.contains(r)) {
            cons.push(Ineq::at_most(project(r), -Rat::one()));
        }
        feasible(&cons, k)
    }

    /// Every maximal cone is full-dimensional and every ridge lies in exactly
    /// two of them. Meaningful for strictly valid fans.
    pub fn is_complete(&self) -> bool {
        if self.max_cones.iter().any(|c| c.len() != self.d) || self.max_cones.is_empty() {
            return false;
        }
        if self.d == 0 {
            return true;
        }
        let mut count: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for c in &self.max_cones {
            for r in c.iter().copied().combinations(self.d - 1) {
                *count.entry(r).or_default() += 1;
            }
        }
        count.values().all(|&v| v == 2)
    }

    /// Rays `rho` not in `tau` with `tau + rho` a cone.
    pub fn neighbours(&self, tau: &[usize]) -> Vec<usize> {
        (0..self.n())
            .filter(|r| !tau.contains(r))
            .filter(|&r| {
                let mut s = tau.to_vec();
                s.push(r);
                s.sort_unstable();
                self.is_cone(&s)
            })
            .collect()
    }

    /// The star fan at `tau`. `T_tau` is the inverse of the basis obtained by
    /// appending standard basis vectors, in index order, to the rows of `tau`.
    pub fn star_fan(&self, tau: &[usize]) -> Result<StarFanData> {
        let mut tau = tau.to_vec();
        tau.sort_unstable();
        if !self.is_cone(&tau) {
            return Err(Error::Precondition(format!("{} is not a cone of the fan", one_based(&tau))));
        }
        let d = self.d;
        let k = tau.len();
        let mut basis: Vec<Vec<Rat>> = tau.iter().map(|&r| self.ray(r).to_vec()).collect();
        for j in 0..d {
            if basis.len() == d {
                break;
            }
            let mut e = vec![Rat::zero(); d];
            e[j] = Rat::one();
            basis.push(e);
            if RatMat::from_rows(&basis, d)?.rank() < basis.len() {
                basis.pop();
            }
        }
        let b = RatMat::from_rows(&basis, d)?;
        let t = b.inverse()?.ok_or_else(|| Error::Consistency("star basis is singular".into()))?;
        let c_tau = t.det()?.abs();
        let ut = self.rays.mul(&t)?;
        for (i, &r) in tau.iter().enumerate() {
            for j in 0..d {
                let want = if i == j { Rat::one() } else { Rat::zero() };
                if ut[(r, j)] != want {
                    return Err(Error::Consistency(format!("row {} of U T is not a unit vector", r + 1)));
                }
            }
        }
        let nb = self.neighbours(&tau);
        let cols: Vec<usize> = (k..d).collect();
        let u_tau = ut.select_rows(&nb).select_cols(&cols);
        let pos: BTreeMap<usize, usize> = nb.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let cones: Vec<Vec<usize>> = self
            .max_cones
            .iter()
            .filter(|c| tau.iter().all(|r| c.contains(r)))
            .map(|c| c.iter().filter(|r| !tau.contains(r)).map(|r| pos[r]).collect())
            .collect();
        let labels = nb.iter().map(|&r| self.vars.label(r).to_string()).collect();
        let fan = Self::from_parts(d - k, u_tau, cones, Some(labels))?;
        Ok(StarFanData { fan, tau, ray_map: nb, c_tau, t_tau: t })
    }

    /// Product fan with ray matrix `U1 (+) U2`; rays of `other` are offset by
    /// `self.n()`.
    pub fn product(&self, other: &Self) -> Self {
        let (n1, n2, d1, d2) = (self.n(), other.n(), self.d, other.d);
        let rays = RatMat::from_fn(n1 + n2, d1 + d2, |i, j| match (i < n1, j < d1) {
            (true, true) => self.rays[(i, j)].clone(),
            (false, false) => other.rays[(i - n1, j - d1)].clone(),
            _ => Rat::zero(),
        });
        let mut cones = Vec::new();
        for a in &self.max_cones {
            for b in &other.max_cones {
                cones.push(a.iter().copied().chain(b.iter().map(|r| r + n1)).collect());
            }
        }
        let labels: Vec<String> = self.labels().into_iter().chain(other.labels()).collect();
        let labels = VarSet::new(labels.clone()).ok().map(|_| labels);
        Self::from_parts(d1 + d2, rays, cones, labels).expect("product of fans")
    }

    /// The subfan of full-dimensional cones and their faces.
    pub fn bar_fan(&self) -> BarFan {
        let d_cones: Vec<&Vec<usize>> = self.d_cones();
        let kept: BTreeSet<usize> = d_cones.iter().flat_map(|c| c.iter().copied()).collect();
        let kept: Vec<usize> = kept.into_iter().collect();
        let dropped: Vec<usize> = (0..self.n()).filter(|r| !kept.contains(r)).collect();
        let pos: BTreeMap<usize, usize> = kept.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let cones = d_cones.iter().map(|c| c.iter().map(|r| pos[r]).collect()).collect();
        let labels = kept.iter().map(|&r| self.vars.label(r).to_string()).collect();
        let fan = Self::from_parts(self.d, self.rays.select_rows(&kept), cones, Some(labels)).expect("subfan");
        BarFan { fan, kept, dropped }
    }
}

/// `{1,2,5}`-style rendering of a 0-based index set.
pub fn one_based(c: &[usize]) -> String {
    format!("{{{}}}", c.iter().map(|r| (r + 1).to_string()).join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pentagon() -> SimplicialFan {
        SimplicialFan::from_ints(2, &[&[1, 0], &[0, 1], &[-1, 1], &[-1, 0], &[0, -1]], &[
            &[0, 1],
            &[1, 2],
            &[2, 3],
            &[3, 4],
            &[0, 4],
        ])
        .unwrap()
    }

    fn square() -> SimplicialFan {
        SimplicialFan::from_ints(2, &[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]], &[&[0, 1], &[1, 2], &[2, 3], &[0, 3]])
            .unwrap()
    }

    #[test]
    fn pentagon_is_valid_and_complete() {
        let f = pentagon();
        f.validate(true).unwrap();
        assert!(f.is_complete());
        assert_eq!(f.det_abs(&[0, 1]), int(1));
    }

    #[test]
    fn duplicate_ray_rejected() {
        let r = SimplicialFan::from_ints(2, &[&[1, 0], &[2, 0], &[0, 1]], &[&[0, 2]]);
        match r {
            Err(Error::Validation(m)) => assert!(m.contains("duplicate ray"), "{m}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn overlapping_cones_rejected_in_strict_mode() {
        // Cones {e1, e2} and {e1 + e2, -e1 + 2 e2} overlap in their interiors.
        let f = SimplicialFan::from_ints(2, &[&[1, 0], &[0, 1], &[1, 1], &[-1, 2]], &[&[0, 1], &[2, 3]]).unwrap();
        assert!(f.validate(false).is_ok());
        assert!(matches!(f.validate(true), Err(Error::Validation(_))));
    }

    #[test]
    fn cone_through_interior_of_another_rejected() {
        // cone(e1 + e2, -e1) contains (1, 2), interior to cone(e1, e2).
        let f = SimplicialFan::from_ints(2, &[&[1, 0], &[0, 1], &[-1, 0], &[1, 1]], &[&[0, 1], &[3, 2]]).unwrap();
        assert!(f.validate(true).is_err());
        assert!(square().validate(true).is_ok());
    }

    #[test]
    fn star_of_square_at_first_ray() {
        let s = square().star_fan(&[0]).unwrap();
        assert_eq!(s.c_tau, int(1));
        assert_eq!(s.ray_map, vec![1, 3]);
        assert_eq!(s.fan.dim(), 1);
        assert!(s.fan.is_complete());
    }

    #[test]
    fn star_at_maximal_cone_is_trivial() {
        let s = pentagon().star_fan(&[1, 2]).unwrap();
        assert_eq!(s.fan.dim(), 0);
        assert_eq!(s.fan.n(), 0);
        assert_eq!(s.fan.max_cones(), &[Vec::<usize>::new()]);
        assert!(pentagon().star_fan(&[0, 2]).is_err());
    }

    #[test]
    fn star_determinant_identity() {
        let f = pentagon();
        for tau in [vec![0], vec![3]] {
            let s = f.star_fan(&tau).unwrap();
            for c in f.d_cones().into_iter().filter(|c| c.contains(&tau[0])) {
                let rest: Vec<usize> = c
                    .iter()
                    .filter(|r| !tau.contains(r))
                    .map(|r| s.ray_map.iter().position(|x| x == r).unwrap())
                    .collect();
                assert_eq!(s.fan.det_abs(&rest), &s.c_tau * f.det_abs(c));
            }
        }
    }

    #[test]
    fn product_counts() {
        let seg = SimplicialFan::from_ints(1, &[&[1], &[-1]], &[&[0], &[1]]).unwrap();
        let p = pentagon().product(&seg);
        assert_eq!(p.n(), 7);
        assert_eq!(p.d_cones().len(), 10);
        assert!(p.is_complete());
        p.validate(true).unwrap();
        let t = pentagon().product(&SimplicialFan::trivial());
        assert_eq!(t, pentagon());
    }

    #[test]
    fn completeness_negative_cases() {
        let single = SimplicialFan::from_ints(2, &[&[1, 0], &[0, 1]], &[&[0, 1]]).unwrap();
        assert!(!single.is_complete());
    }

    #[test]
    fn bar_fan_drops_isolated_ray() {
        let f = SimplicialFan::from_ints(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[2]]).unwrap();
        let b = f.bar_fan();
        assert_eq!(b.dropped, vec![2]);
        assert_eq!(b.kept, vec![0, 1]);
        let p = pentagon().bar_fan();
        assert!(p.dropped.is_empty());
        assert_eq!(p.fan, pentagon());
    }
}
