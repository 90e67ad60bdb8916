//! Polyhedra `{y : U y + z >= 0}`: vertices, faces, normal fans and the
//! dual-volume oracle.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use itertools::Itertools;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fan::{one_based, SimplicialFan};
use crate::feasibility::{feasible, Ineq};
use crate::linalg::dot;
use crate::poly::VarSet;
use crate::scalar::int;
use crate::{Rat, RatMat};

#[derive(Clone, Debug, PartialEq)]
pub struct HPolytope {
    u: RatMat,
    z: Vec<Rat>,
    vars: VarSet,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VertexData {
    pub point: Vec<Rat>,
    /// Rows tight at the point, ascending.
    pub active: Vec<usize>,
}

/// A face, named by the facets containing it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FaceRef {
    pub facets: Vec<usize>,
    pub dim: usize,
}

/// Normal fan of a simple polyhedron. `fan` uses only the rows that are
/// facets; `rows[i]` is the polytope row of fan ray `i`.
#[derive(Clone, Debug)]
pub struct NormalFan {
    pub fan: SimplicialFan,
    pub rows: Vec<usize>,
    pub dropped: Vec<usize>,
}

impl HPolytope {
    pub fn new(u: RatMat, z: Vec<Rat>, labels: Option<Vec<String>>) -> Result<Self> {
        if z.len() != u.rows() {
            return Err(Error::Dimension(format!("z has length {}, U has {} rows", z.len(), u.rows())));
        }
        if u.rank() != u.cols() {
            return Err(Error::Precondition(format!("U has rank {}, expected {}", u.rank(), u.cols())));
        }
        let vars = match labels {
            Some(l) if l.len() != u.rows() => {
                return Err(Error::Dimension(format!("{} labels for {} rows", l.len(), u.rows())));
            }
            Some(l) => VarSet::new(l)?,
            None => VarSet::numbered("x", u.rows()),
        };
        Ok(HPolytope { u, z, vars })
    }

    pub fn from_ints(u: &[&[i64]], z: &[i64]) -> Result<Self> {
        let d = u.first().map_or(0, |r| r.len());
        let rows: Vec<Vec<Rat>> = u.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect();
        Self::new(RatMat::from_rows(&rows, d)?, z.iter().map(|&v| int(v)).collect(), None)
    }

    /// Same rows, new right-hand side.
    pub fn with_z(&self, z: Vec<Rat>) -> Result<Self> {
        Self::new(self.u.clone(), z, Some(self.vars.labels().to_vec()))
    }

    pub fn dim(&self) -> usize {
        self.u.cols()
    }

    pub fn n(&self) -> usize {
        self.u.rows()
    }

    pub fn u(&self) -> &RatMat {
        &self.u
    }

    pub fn z(&self) -> &[Rat] {
        &self.z
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    /// `u_i . y + z_i`.
    pub fn slack(&self, i: usize, y: &[Rat]) -> Rat {
        dot(self.u.row(i), y) + &self.z[i]
    }

    pub fn contains(&self, y: &[Rat]) -> bool {
        (0..self.n()).all(|i| !self.slack(i, y).is_negative())
    }

    pub fn strictly_contains(&self, y: &[Rat]) -> bool {
        (0..self.n()).all(|i| self.slack(i, y).is_positive())
    }

    /// All vertices, allowing more than `d` tight rows. Sorted by active set.
    pub fn vertices_general(&self) -> Vec<VertexData> {
        let d = self.dim();
        let mut found: BTreeMap<Vec<usize>, Vec<Rat>> = BTreeMap::new();
        let mut seen: BTreeSet<Vec<Rat>> = BTreeSet::new();
        for s in (0..self.n()).combinations(d) {
            let a = self.u.select_rows(&s);
            if a.det().map_or(true, |v| v.is_zero()) {
                continue;
            }
            let rhs: Vec<Rat> = s.iter().map(|&i| -self.z[i].clone()).collect();
            let Ok(Some(y)) = a.solve(&rhs) else { continue };
            if !self.contains(&y) || !seen.insert(y.clone()) {
                continue;
            }
            let active: Vec<usize> = (0..self.n()).filter(|&i| self.slack(i, &y).is_zero()).collect();
            found.insert(active, y);
        }
        found.into_iter().map(|(active, point)| VertexData { point, active }).collect()
    }

    /// Vertices of a simple polyhedron, sorted by active set.
    pub fn vertices(&self) -> Result<Vec<VertexData>> {
        let vs = self.vertices_general();
        if let Some(v) = vs.iter().find(|v| v.active.len() > self.dim()) {
            return Err(Error::NonSimple(v.active.clone()));
        }
        Ok(vs)
    }

    /// The recession cone `{U y >= 0}` is zero. Decided by Fourier–Motzkin.
    pub fn is_bounded(&self) -> bool {
        let d = self.dim();
        let base: Vec<Ineq> = (0..self.n()).map(|i| Ineq::new(self.u.row(i).to_vec(), Rat::zero())).collect();
        for j in 0..d {
            for s in [1, -1] {
                let mut cons = base.clone();
                let mut a = vec![Rat::zero(); d];
                a[j] = int(s);
                cons.push(Ineq::new(a, Rat::one()));
                if feasible(&cons, d) {
                    return false;
                }
            }
        }
        true
    }

    pub fn normal_fan(&self) -> Result<NormalFan> {
        let vs = self.vertices()?;
        if vs.is_empty() {
            return Err(Error::Precondition("polyhedron has no vertex".into()));
        }
        let rows: BTreeSet<usize> = vs.iter().flat_map(|v| v.active.iter().copied()).collect();
        let rows: Vec<usize> = rows.into_iter().collect();
        let dropped = (0..self.n()).filter(|r| !rows.contains(r)).collect();
        let pos: HashMap<usize, usize> = rows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let cones = vs.iter().map(|v| v.active.iter().map(|r| pos[r]).collect()).collect();
        let labels = rows.iter().map(|&r| self.vars.label(r).to_string()).collect();
        let fan = SimplicialFan::new(self.dim(), self.u.select_rows(&rows), cones, Some(labels))?;
        Ok(NormalFan { fan, rows, dropped })
    }

    /// The normal fan on all rows; fails if some row is not a facet.
    pub fn fan(&self) -> Result<SimplicialFan> {
        let nf = self.normal_fan()?;
        if !nf.dropped.is_empty() {
            return Err(Error::Precondition(format!("rows {} are not facets", one_based(&nf.dropped))));
        }
        Ok(nf.fan)
    }

    /// Faces of dimension `k`, as facet sets realised by vertex active sets.
    pub fn faces(&self, k: usize) -> Result<Vec<FaceRef>> {
        let d = self.dim();
        if k > d {
            return Ok(Vec::new());
        }
        let vs = self.vertices()?;
        let mut out = BTreeSet::new();
        for v in &vs {
            for s in v.active.iter().copied().combinations(d - k) {
                out.insert(s);
            }
        }
        Ok(out.into_iter().map(|facets| FaceRef { facets, dim: k }).collect())
    }

    /// The face cut out by `facets`, checked to exist.
    pub fn face(&self, facets: &[usize]) -> Result<FaceRef> {
        let mut f = facets.to_vec();
        f.sort_unstable();
        f.dedup();
        let vs = self.vertices()?;
        if !vs.iter().any(|v| f.iter().all(|r| v.active.contains(r))) {
            return Err(Error::Precondition(format!("facets {} do not meet in a face", one_based(&f))));
        }
        Ok(FaceRef { dim: self.dim() - f.len(), facets: f })
    }

    /// Indices into [`vertices`](Self::vertices) of the vertices on a face.
    pub fn face_vertices(&self, face: &FaceRef) -> Result<Vec<usize>> {
        let vs = self.vertices()?;
        Ok((0..vs.len()).filter(|&i| face.facets.iter().all(|r| vs[i].active.contains(r))).collect())
    }

    /// Rows meeting `face` in one of its facets, i.e. the neighbours of the
    /// corresponding cone of the normal fan.
    pub fn face_neighbours(&self, face: &FaceRef) -> Result<Vec<usize>> {
        let vs = self.vertices()?;
        let on: Vec<&VertexData> = vs.iter().filter(|v| face.facets.iter().all(|r| v.active.contains(r))).collect();
        let s: BTreeSet<usize> =
            on.iter().flat_map(|v| v.active.iter().copied()).filter(|r| !face.facets.contains(r)).collect();
        Ok(s.into_iter().collect())
    }

    /// Normalized volume (`d!` times Euclidean) of the polar of
    /// `{y : U y + x >= 0}`, by a placing triangulation of the points
    /// `u_i / x_i` started at the origin. Shares no code with the
    /// amplitude.
    pub fn dual_volume_oracle(&self, x: &[Rat]) -> Result<Rat> {
        if x.len() != self.n() {
            return Err(Error::Dimension(format!("x has length {}, expected {}", x.len(), self.n())));
        }
        if let Some(i) = x.iter().position(|v| !v.is_positive()) {
            return Err(Error::Precondition(format!("x_{} is not positive", i + 1)));
        }
        if !self.is_bounded() {
            return Err(Error::Unbounded);
        }
        let d = self.dim();
        let mut pts: Vec<Vec<Rat>> =
            (0..self.n()).map(|i| self.u.row(i).iter().map(|c| c / &x[i]).collect()).collect();
        pts.sort();
        pts.dedup();
        pts.insert(0, vec![Rat::zero(); d]);
        Ok(placing_volume(&pts, d))
    }
}

fn orient(pts: &[Vec<Rat>], facet: &[usize], p: usize) -> Rat {
    let d = pts[p].len();
    let base = &pts[facet[0]];
    let mut rows: Vec<Vec<Rat>> = facet[1..].iter().map(|&i| pts[i].iter().zip(base).map(|(a, b)| a - b).collect()).collect();
    rows.push(pts[p].iter().zip(base).map(|(a, b)| a - b).collect());
    RatMat::from_rows(&rows, d).and_then(|m| m.det()).unwrap_or_else(|_| Rat::zero())
}

fn simplex_volume(pts: &[Vec<Rat>], s: &[usize]) -> Rat {
    let d = pts[s[0]].len();
    let rows: Vec<Vec<Rat>> = s[1..].iter().map(|&i| pts[i].iter().zip(&pts[s[0]]).map(|(a, b)| a - b).collect()).collect();
    RatMat::from_rows(&rows, d).and_then(|m| m.det()).map(|v| v.abs()).unwrap_or_else(|_| Rat::zero())
}

/// Beneath-beyond placing triangulation; returns the summed normalized
/// volume of its simplices.
fn placing_volume(pts: &[Vec<Rat>], d: usize) -> Rat {
    let mut simplex = vec![0usize];
    for i in 1..pts.len() {
        if simplex.len() == d + 1 {
            break;
        }
        let mut trial = simplex.clone();
        trial.push(i);
        let rows: Vec<Vec<Rat>> =
            trial[1..].iter().map(|&j| pts[j].iter().zip(&pts[trial[0]]).map(|(a, b)| a - b).collect()).collect();
        if RatMat::from_rows(&rows, d).map(|m| m.rank()).unwrap_or(0) == trial.len() - 1 {
            simplex = trial;
        }
    }
    if simplex.len() < d + 1 {
        return Rat::zero();
    }
    let mut volume = simplex_volume(pts, &simplex);
    let mut boundary: HashMap<Vec<usize>, usize> = HashMap::new();
    for (k, &v) in simplex.iter().enumerate() {
        let mut f = simplex.clone();
        f.remove(k);
        boundary.insert(f, v);
    }
    for p in 0..pts.len() {
        if simplex.contains(&p) {
            continue;
        }
        let visible: Vec<(Vec<usize>, usize)> = boundary
            .iter()
            .filter(|(f, &opp)| {
                let a = orient(pts, f, p);
                let b = orient(pts, f, opp);
                !a.is_zero() && a.is_positive() != b.is_positive()
            })
            .map(|(f, &o)| (f.clone(), o))
            .collect();
        if visible.is_empty() {
            continue;
        }
        let mut ridge_count: HashMap<Vec<usize>, usize> = HashMap::new();
        for (f, _) in &visible {
            for k in 0..f.len() {
                let mut r = f.clone();
                r.remove(k);
                *ridge_count.entry(r).or_default() += 1;
            }
        }
        let mut added = Vec::new();
        for (f, _) in &visible {
            let mut s = f.clone();
            s.push(p);
            volume += simplex_volume(pts, &s);
            for k in 0..f.len() {
                let mut r = f.clone();
                let v = r.remove(k);
                if ridge_count[&r] == 1 {
                    r.push(p);
                    r.sort_unstable();
                    added.push((r, v));
                }
            }
        }
        for (f, _) in &visible {
            boundary.remove(f);
        }
        boundary.extend(added);
    }
    volume
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn pentagon(z: &[i64]) -> HPolytope {
        HPolytope::from_ints(&[&[1, 0], &[0, 1], &[-1, 1], &[-1, 0], &[0, -1]], z).unwrap()
    }

    #[test]
    fn pentagon_vertices_and_fan() {
        let p = pentagon(&[1, 1, 1, 1, 1]);
        let vs = p.vertices().unwrap();
        assert_eq!(vs.len(), 5);
        assert_eq!(vs[0].active, vec![0, 1]);
        assert_eq!(vs[0].point, vec![int(-1), int(-1)]);
        let f = p.fan().unwrap();
        assert_eq!(f.max_cones(), &[vec![0, 1], vec![0, 4], vec![1, 2], vec![2, 3], vec![3, 4]]);
        assert!(f.is_complete());
        assert_eq!(p.faces(1).unwrap().len(), 5);
    }

    #[test]
    fn chamber_crossing_gives_quadrilateral() {
        let p = pentagon(&[1, 1, 1, 3, 1]);
        let nf = p.normal_fan().unwrap();
        assert_eq!(nf.dropped, vec![3]);
        assert_eq!(nf.fan.d_cones().len(), 4);
    }

    #[test]
    fn non_simple_vertex_reported() {
        let p = pentagon(&[1, 1, 1, 2, 1]);
        assert_eq!(p.vertices(), Err(Error::NonSimple(vec![2, 3, 4])));
    }

    #[test]
    fn cube_counts() {
        let p = HPolytope::from_ints(&[&[1, 0, 0], &[-1, 0, 0], &[0, 1, 0], &[0, -1, 0], &[0, 0, 1], &[0, 0, -1]], &[
            0, 1, 0, 1, 0, 1,
        ])
        .unwrap();
        assert_eq!(p.vertices().unwrap().len(), 8);
        assert_eq!(p.faces(2).unwrap().len(), 6);
        assert_eq!(p.faces(1).unwrap().len(), 12);
    }

    #[test]
    fn boundedness() {
        assert!(pentagon(&[1; 5]).is_bounded());
        let half = HPolytope::from_ints(&[&[1, 0], &[0, 1]], &[0, 0]).unwrap();
        assert!(!half.is_bounded());
    }

    #[test]
    fn dual_volume_examples() {
        let p = pentagon(&[1; 5]);
        assert_eq!(p.dual_volume_oracle(&vec![int(1); 5]).unwrap(), int(5));
        assert_eq!(p.dual_volume_oracle(&vec![int(2); 5]).unwrap(), rat(5, 4));
        let sq = HPolytope::from_ints(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]], &[1, 1, 1, 1]).unwrap();
        assert_eq!(sq.dual_volume_oracle(&vec![int(1); 4]).unwrap(), int(4));
        assert!(p.dual_volume_oracle(&[int(1), int(0), int(1), int(1), int(1)]).is_err());
    }
}
