//! Wall forms of simplex faces, deformation-cone membership, chamber
//! spaces and degenerations of the Warren adjoint.

use num_traits::{One, Signed, Zero};

use crate::amplitude::{adjoint, warren_adjoint, WarrenPoly};
use crate::error::{Error, Result};
use crate::fan::one_based;
use crate::feasibility::{feasible, Ineq};
use crate::linalg::dot;
use crate::polytope::{FaceRef, HPolytope};
use crate::poly::VarSet;
use crate::variety::LinearVariety;
use crate::{Poly, Rat, RatMat};

/// `W` is the determinant of the rows `[u_rho | x_rho]`, `nb` rows first,
/// then the facets containing the face, each block ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct WallForm {
    pub face: FaceRef,
    pub sigma: Vec<usize>,
    pub nb: Vec<usize>,
    /// Coefficient of every `x_rho`; zero outside `nb` and `sigma`.
    pub coefs: Vec<Rat>,
    /// Common sign of the `nb` coefficients.
    pub sign: i8,
    /// Rays in neither `nb` nor `sigma`.
    pub k_set: Vec<usize>,
}

impl WallForm {
    pub fn form(&self, vars: &VarSet) -> Poly {
        Poly::linear(vars, &self.coefs, Rat::zero())
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        dot(&self.coefs, x)
    }

    /// `sign * W(x)`, nonnegative on the deformation cone.
    pub fn signed_eval(&self, x: &[Rat]) -> Rat {
        let v = self.eval(x);
        if self.sign < 0 { -v } else { v }
    }
}

pub fn wall_form(p: &HPolytope, face: &FaceRef) -> Result<WallForm> {
    let face = p.face(&face.facets)?;
    let d = p.dim();
    if face.dim == 0 {
        return Err(Error::Precondition(format!("face {} is a vertex", one_based(&face.facets))));
    }
    let nverts = p.face_vertices(&face)?.len();
    if nverts != face.dim + 1 {
        return Err(Error::Precondition(format!("face {} is not a simplex", one_based(&face.facets))));
    }
    let nb = p.face_neighbours(&face)?;
    let sigma = face.facets.clone();
    let rows: Vec<usize> = nb.iter().chain(&sigma).copied().collect();
    debug_assert_eq!(rows.len(), d + 1);
    let mut coefs = vec![Rat::zero(); p.n()];
    let cols: Vec<usize> = (0..d).collect();
    for (i, &r) in rows.iter().enumerate() {
        let others: Vec<usize> = rows.iter().copied().filter(|&s| s != r).collect();
        let minor = p.u().select_rows(&others).select_cols(&cols).det()?;
        coefs[r] = if (i + d).is_multiple_of(2) { minor } else { -minor };
    }
    let positive = coefs[nb[0]].is_positive();
    if nb.iter().any(|&r| coefs[r].is_zero() || coefs[r].is_positive() != positive) {
        return Err(Error::Consistency(format!("wall of {} has mixed neighbour signs", one_based(&sigma))));
    }
    let k_set = (0..p.n()).filter(|r| !rows.contains(r)).collect();
    Ok(WallForm { face, sigma, nb, coefs, sign: if positive { 1 } else { -1 }, k_set })
}

/// One signed wall per edge; no redundancy removal.
pub fn deformation_cone(p: &HPolytope) -> Result<Vec<WallForm>> {
    p.faces(1)?.iter().map(|e| wall_form(p, e)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    Interior,
    /// Indices of the walls with `W = 0`.
    Boundary(Vec<usize>),
    /// Indices of the violated walls.
    Outside(Vec<usize>),
}

pub fn membership(walls: &[WallForm], x: &[Rat]) -> Membership {
    let vals: Vec<Rat> = walls.iter().map(|w| w.signed_eval(x)).collect();
    let bad: Vec<usize> = (0..walls.len()).filter(|&i| vals[i].is_negative()).collect();
    if !bad.is_empty() {
        return Membership::Outside(bad);
    }
    let zero: Vec<usize> = (0..walls.len()).filter(|&i| vals[i].is_zero()).collect();
    if zero.is_empty() { Membership::Interior } else { Membership::Boundary(zero) }
}

/// For each wall, whether it supports a facet of the deformation cone.
/// Works in the coordinates outside one full cone, which is a complement
/// of `im(U)`; parallel walls count once, at their first occurrence.
pub fn facet_defining(p: &HPolytope, walls: &[WallForm]) -> Result<Vec<bool>> {
    let vs = p.vertices()?;
    let sigma = &vs.first().ok_or_else(|| Error::Precondition("no vertex".into()))?.active;
    let free: Vec<usize> = (0..p.n()).filter(|r| !sigma.contains(r)).collect();
    let reduced: Vec<Vec<Rat>> = walls
        .iter()
        .map(|w| {
            let s = Rat::from_integer(w.sign.into());
            free.iter().map(|&r| &w.coefs[r] * &s).collect()
        })
        .collect();
    let normalized: Vec<Vec<Rat>> = reduced
        .iter()
        .map(|r| match r.iter().find(|v| !v.is_zero()) {
            Some(l) => {
                let l = l.abs();
                r.iter().map(|v| v / &l).collect()
            }
            None => r.clone(),
        })
        .collect();
    let mut out = Vec::with_capacity(walls.len());
    for i in 0..walls.len() {
        if normalized[..i].contains(&normalized[i]) {
            out.push(false);
            continue;
        }
        let mut cons: Vec<Ineq> = (0..walls.len())
            .filter(|&j| j != i && normalized[j] != normalized[i])
            .map(|j| Ineq::new(reduced[j].clone(), Rat::zero()))
            .collect();
        cons.push(Ineq::at_most(reduced[i].clone(), -Rat::one()));
        out.push(feasible(&cons, free.len()));
    }
    Ok(out)
}

/// Simplex faces of positive dimension.
pub fn simplex_faces(p: &HPolytope) -> Result<Vec<FaceRef>> {
    let mut out = Vec::new();
    for k in 1..=p.dim() {
        for f in p.faces(k)? {
            if p.face_vertices(&f)?.len() == k + 1 {
                out.push(f);
            }
        }
    }
    Ok(out)
}

/// `{W = 0, x_sigma = 0}`, checked to lie in the adjoint hypersurface.
pub fn chamber_space(p: &HPolytope, face: &FaceRef) -> Result<LinearVariety> {
    let w = wall_form(p, face)?;
    let vars = p.vars();
    let mut rows = vec![w.coefs.clone()];
    rows.extend(LinearVariety::coordinate(vars, &w.sigma).rows().iter().cloned());
    let v = LinearVariety::from_rows(vars, &rows)?;
    if !v.vanishes(&adjoint(&p.fan()?))? {
        return Err(Error::Consistency(format!("adjoint does not vanish on chamber space of {}", one_based(&w.sigma))));
    }
    Ok(v)
}

/// The point where the rows of the wall determinant meet when `W(x) = 0`.
pub fn shrink_vertex(p: &HPolytope, face: &FaceRef, x: &[Rat]) -> Result<Vec<Rat>> {
    let w = wall_form(p, face)?;
    if x.len() != p.n() {
        return Err(Error::Dimension(format!("x has length {}, expected {}", x.len(), p.n())));
    }
    if !w.eval(x).is_zero() {
        return Err(Error::Precondition("x is not on the wall".into()));
    }
    let rows: Vec<usize> = w.nb.iter().chain(&w.sigma).copied().collect();
    let rhs: Vec<Rat> = rows.iter().map(|&r| -x[r].clone()).collect();
    p.u().select_rows(&rows).solve(&rhs)?.ok_or_else(|| Error::Consistency("wall system inconsistent".into()))
}

#[derive(Clone, Debug)]
pub enum Degeneration {
    None,
    /// The polytope at `z0` lost the listed facets; each linear form
    /// `u_rho . y + z0_rho` divides the Warren adjoint.
    LostFacets { warren: WarrenPoly, lost: Vec<usize>, factors: Vec<(Poly, Poly)> },
    /// No facet lost; the Warren adjoint vanishes at the shrunken vertex
    /// and on the affine space `U_sigma y + z0_sigma = 0`.
    Vertex { warren: WarrenPoly, vertex: Vec<Rat> },
}

/// Rows that are facets of the full-dimensional polytope `p`.
pub fn facet_rows(p: &HPolytope) -> Result<Vec<usize>> {
    let vs = p.vertices_general();
    let affine_dim = |pts: &[&Vec<Rat>]| -> usize {
        if pts.is_empty() {
            return 0;
        }
        let rows: Vec<Vec<Rat>> = pts[1..].iter().map(|q| q.iter().zip(pts[0]).map(|(a, b)| a - b).collect()).collect();
        if rows.is_empty() { 0 } else { RatMat::from_rows(&rows, p.dim()).map(|m| m.rank()).unwrap_or(0) }
    };
    let all: Vec<&Vec<Rat>> = vs.iter().map(|v| &v.point).collect();
    if all.is_empty() || affine_dim(&all) < p.dim() {
        return Err(Error::Precondition("polytope is not full-dimensional".into()));
    }
    Ok((0..p.n())
        .filter(|&r| {
            let on: Vec<&Vec<Rat>> = vs.iter().filter(|v| v.active.contains(&r)).map(|v| &v.point).collect();
            on.len() >= p.dim() && affine_dim(&on) + 1 == p.dim()
        })
        .collect())
}

pub fn degeneration_check(p: &HPolytope, face: &FaceRef, z0: &[Rat]) -> Result<Degeneration> {
    let walls = deformation_cone(p)?;
    match membership(&walls, z0) {
        Membership::Interior => return Ok(Degeneration::None),
        Membership::Outside(v) => {
            let names: Vec<String> = v.iter().map(|&i| one_based(&walls[i].sigma)).collect();
            return Err(Error::Precondition(format!("z0 violates the walls of {}", names.join(" "))));
        }
        Membership::Boundary(_) => {}
    }
    let w = wall_form(p, face)?;
    if !w.eval(z0).is_zero() {
        return Err(Error::Precondition(format!("z0 is not on the wall of {}", one_based(&w.sigma))));
    }
    let fan = p.fan()?;
    let warren = warren_adjoint(&fan, z0)?;
    let p0 = p.with_z(z0.to_vec())?;
    let facets = facet_rows(&p0)?;
    let lost: Vec<usize> = (0..p.n()).filter(|r| !facets.contains(r)).collect();
    let y = warren.poly.vars().clone();
    if !lost.is_empty() {
        let mut factors = Vec::new();
        for &r in &lost {
            let l = Poly::linear(&y, p.u().row(r), z0[r].clone());
            let q = warren.poly.divide_linear(&l)?.ok_or_else(|| {
                Error::Consistency(format!("u_{} . y + z0 does not divide the Warren adjoint", r + 1))
            })?;
            factors.push((l, q));
        }
        return Ok(Degeneration::LostFacets { warren, lost, factors });
    }
    let vertex = shrink_vertex(p, face, z0)?;
    if !warren.poly.eval(&vertex)?.is_zero() {
        return Err(Error::Consistency("Warren adjoint does not vanish at the shrunken vertex".into()));
    }
    // Affine space U_sigma y + z0_sigma = 0: vertex + kernel of U_sigma.
    let kernel = p.u().select_rows(&w.sigma).kernel_basis();
    if !kernel.is_empty() {
        let t = VarSet::numbered("t", kernel.len());
        let images: Vec<Poly> = (0..p.dim())
            .map(|j| {
                let c: Vec<Rat> = kernel.iter().map(|k| k[j].clone()).collect();
                Poly::linear(&t, &c, vertex[j].clone())
            })
            .collect();
        if !warren.poly.substitute(&images, &t)?.is_zero() {
            return Err(Error::Consistency("Warren adjoint does not vanish on the degenerate face".into()));
        }
    }
    Ok(Degeneration::Vertex { warren, vertex })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scalar::int;

    fn ints(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn pentagon_wall_of_edge_four() {
        let p = fixtures::polytope("pentagon");
        let w = wall_form(&p, &FaceRef { facets: vec![3], dim: 1 }).unwrap();
        assert_eq!(w.nb, vec![2, 4]);
        assert_eq!(w.k_set, vec![0, 1]);
        assert_eq!(w.form(p.vars()).to_string(), "-x3 + x4 - x5");
        assert_eq!(w.sign, -1);
        let walls = deformation_cone(&p).unwrap();
        assert_eq!(walls.len(), 5);
        assert_eq!(membership(&walls, &ints(&[1, 1, 1, 1, 1])), Membership::Interior);
        assert!(matches!(membership(&walls, &ints(&[1, 1, 1, 2, 1])), Membership::Boundary(_)));
        assert!(matches!(membership(&walls, &ints(&[1, 1, 1, 3, 1])), Membership::Outside(_)));
        let v = shrink_vertex(&p, &w.face, &ints(&[1, 1, 1, 2, 1])).unwrap();
        assert_eq!(v, ints(&[2, 1]));
    }

    #[test]
    fn cuboid_walls() {
        let p = fixtures::polytope("cuboid");
        let tri = wall_form(&p, &FaceRef { facets: vec![0], dim: 2 }).unwrap();
        assert_eq!(tri.nb, vec![2, 3, 4]);
        let edge = wall_form(&p, &FaceRef { facets: vec![2, 3], dim: 1 }).unwrap();
        assert_eq!(edge.nb, vec![0, 5]);
        let walls = deformation_cone(&p).unwrap();
        assert_eq!(walls.len(), 12);
        let facet = facet_defining(&p, &walls).unwrap();
        let i35 = walls.iter().position(|w| w.sigma == vec![2, 4]).unwrap();
        assert!(!facet[i35]);
        assert_eq!(membership(&walls, p.z()), Membership::Interior);
        assert!(matches!(membership(&walls, &ints(&[7, 0, 1, 0, 0, 2])), Membership::Boundary(_)));
        assert_eq!(simplex_faces(&p).unwrap().len(), 14);
        for f in simplex_faces(&p).unwrap() {
            chamber_space(&p, &f).unwrap();
        }
    }

    #[test]
    fn cuboid_degenerations() {
        let p = fixtures::polytope("cuboid");
        let d0 = degeneration_check(&p, &FaceRef { facets: vec![0], dim: 2 }, &ints(&[7, 0, 1, 0, 0, 2])).unwrap();
        let Degeneration::LostFacets { lost, factors, .. } = d0 else { panic!("facet should be lost") };
        assert_eq!(lost, vec![0]);
        assert_eq!(factors[0].0.to_string(), "-8*y1 - 11*y2 - 7*y3 + 7");
        let z1 = ints(&[33, -26, 9, 0, 0, 0]);
        let d1 = degeneration_check(&p, &FaceRef { facets: vec![2, 3], dim: 1 }, &z1).unwrap();
        let Degeneration::Vertex { warren, vertex } = d1 else { panic!("vertex degeneration expected") };
        assert_eq!(vertex, ints(&[0, 3, 0]));
        let expect = Poly::parse(
            "-16*(120*y1*y2 - 38*y1*y3 + 165*y2^2 + 79*y2*y3 - 495*y2 + 8*y3^2 - 72*y3)",
            warren.poly.vars(),
        )
        .unwrap();
        assert_eq!(warren.poly, expect);
        assert!(matches!(
            degeneration_check(&p, &FaceRef { facets: vec![0], dim: 2 }, p.z()).unwrap(),
            Degeneration::None
        ));
    }

    #[test]
    fn membership_matches_normal_fan() {
        use rand::{Rng, SeedableRng};
        for name in ["pentagon", "cuboid", "hexagon"] {
            let p = fixtures::polytope(name);
            let walls = deformation_cone(&p).unwrap();
            let fan = p.fan().unwrap();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
            for _ in 0..40 {
                let x: Vec<Rat> = p.z().iter().map(|z| z + Rat::new(rng.gen_range(-40..=40).into(), 10.into())).collect();
                let same = p
                    .with_z(x.clone())
                    .ok()
                    .and_then(|q| q.normal_fan().ok())
                    .is_some_and(|nf| nf.dropped.is_empty() && nf.fan.max_cones() == fan.max_cones());
                assert_eq!(membership(&walls, &x) == Membership::Interior, same, "{name} at {x:?}");
            }
        }
    }
}
