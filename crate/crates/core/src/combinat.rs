//! Irrelevant ideal, primitive collections, edge hyperplanes, the
//! interpolation characterization of the adjoint, and split faces.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};

use crate::amplitude::{adjoint, restrict_adjoint};
use crate::error::{Error, Result};
use crate::fan::{one_based, SimplicialFan};
use crate::polytope::{FaceRef, HPolytope};
use crate::variety::LinearVariety;
use crate::{Monomial, Poly, Rat, RatMat};

fn by_size_then_lex(a: &Vec<usize>, b: &Vec<usize>) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// Supports of the minimal generators `x^(complement of s)` over maximal
/// cones `s`, sorted by size then lexicographically.
pub fn irrelevant_generators(fan: &SimplicialFan) -> Vec<Vec<usize>> {
    let comps: Vec<Vec<usize>> =
        fan.max_cones().iter().map(|c| (0..fan.n()).filter(|r| !c.contains(r)).collect()).collect();
    let mut out: Vec<Vec<usize>> = comps
        .iter()
        .filter(|a| !comps.iter().any(|b| b != *a && b.len() < a.len() && b.iter().all(|r| a.contains(r))))
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    out.sort_by(by_size_then_lex);
    out
}

/// Minimal subsets of rays that do not span a cone, sorted by size then
/// lexicographically.
pub fn primitive_collections(fan: &SimplicialFan) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0..fan.n()).filter(|&r| !fan.is_cone(&[r])).map(|r| vec![r]).collect();
    for c in fan.cones() {
        let start = c.last().map_or(0, |&m| m + 1);
        for r in start..fan.n() {
            if c.is_empty() || !fan.is_cone(&[r]) {
                continue;
            }
            let mut s = c.clone();
            s.push(r);
            if !fan.is_cone(&s) && (0..s.len()).all(|k| fan.is_cone(&[&s[..k], &s[k + 1..]].concat())) {
                out.push(s);
            }
        }
    }
    out.sort_by(by_size_then_lex);
    out
}

/// Every monomial of `adj` is divisible by a generator.
pub fn adj_in_irrelevant(adj: &Poly, gens: &[Vec<usize>]) -> bool {
    let n = adj.vars().len();
    let gens: Vec<Monomial> =
        gens.iter().map(|g| Monomial((0..n).map(|i| u32::from(g.contains(&i))).collect())).collect();
    adj.terms().all(|(m, _)| gens.iter().any(|g| g.divides(m)))
}

/// The coordinate subspaces `Lambda_J` over primitive collections `J`.
pub fn z_components(fan: &SimplicialFan) -> Vec<LinearVariety> {
    primitive_collections(fan).iter().map(|j| LinearVariety::coordinate(fan.vars(), j)).collect()
}

/// `H_e`: the form `u_{v1} x_{Q2} + u_{v2} x_{Q1}` of an edge `e` with
/// endpoints `v1 < v2`, where `Q_i` contains `v_i` but not `e`.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeHyperplane {
    pub edge: FaceRef,
    pub outer: (usize, usize),
    pub coefs: (Rat, Rat),
}

impl EdgeHyperplane {
    pub fn form(&self, vars: &crate::VarSet) -> Poly {
        let mut c = vec![Rat::zero(); vars.len()];
        c[self.outer.1] = self.coefs.0.clone();
        c[self.outer.0] += &self.coefs.1;
        Poly::linear(vars, &c, Rat::zero())
    }

    /// `Lambda_e` intersected with `H_e`.
    pub fn variety(&self, vars: &crate::VarSet) -> LinearVariety {
        LinearVariety::coordinate(vars, &self.edge.facets)
            .intersect(&LinearVariety::from_forms(vars, &[self.form(vars)]).expect("linear form"))
            .expect("same ambient")
    }
}

pub fn edge_hyperplanes(p: &HPolytope) -> Result<Vec<EdgeHyperplane>> {
    let vs = p.vertices()?;
    let mut out = Vec::new();
    for edge in p.faces(1)? {
        let ends = p.face_vertices(&edge)?;
        if ends.len() != 2 {
            return Err(Error::Unbounded);
        }
        let outer = |i: usize| vs[i].active.iter().copied().find(|r| !edge.facets.contains(r)).expect("simple vertex");
        let u = |i: usize| p.u().select_rows(&vs[i].active).det().expect("square").abs();
        out.push(EdgeHyperplane {
            outer: (outer(ends[0]), outer(ends[1])),
            coefs: (u(ends[0]), u(ends[1])),
            edge,
        });
    }
    Ok(out)
}

/// Rebuilds the adjoint of a bounded simple polytope as the unique
/// combination of the irrelevant generators vanishing on every
/// `Lambda_e` meet `H_e`, scaled so the lexicographically smallest cone
/// carries `|det U_s|`.
pub fn interpolate_adjoint(p: &HPolytope) -> Result<Poly> {
    let vs = p.vertices()?;
    let n = p.n();
    let vars = p.vars().clone();
    let mons: Vec<Vec<usize>> = vs.iter().map(|v| (0..n).filter(|r| !v.active.contains(r)).collect()).collect();
    let mut rows = Vec::new();
    for h in edge_hyperplanes(p)? {
        // A point of Lambda_e meet H_e with all other coordinates 1.
        let mut x = vec![Rat::one(); n];
        for &r in &h.edge.facets {
            x[r] = Rat::zero();
        }
        x[h.outer.0] = h.coefs.0.clone();
        x[h.outer.1] = -h.coefs.1.clone();
        rows.push(mons.iter().map(|m| m.iter().fold(Rat::one(), |a, &r| a * &x[r])).collect::<Vec<Rat>>());
    }
    let kernel = RatMat::from_rows(&rows, vs.len())?.kernel_basis();
    if kernel.len() != 1 {
        return Err(Error::Consistency(format!("interpolation space has dimension {}", kernel.len())));
    }
    let k = &kernel[0];
    let first = (0..vs.len()).min_by(|&a, &b| vs[a].active.cmp(&vs[b].active)).expect("a vertex");
    let target = p.u().select_rows(&vs[first].active).det()?.abs();
    let scale = target / &k[first];
    let mut out = Poly::zero(&vars);
    for (m, c) in mons.iter().zip(k) {
        out = &out + &Poly::squarefree(&vars, m, c * &scale);
    }
    Ok(out)
}

/// `Adj|_{Lambda_face} = constant * x^prefactor * prod factors`.
#[derive(Clone, Debug)]
pub struct SplitRestriction {
    pub prefactor: Vec<usize>,
    pub constant: Rat,
    /// Primitive integer linear forms over the polytope variables.
    pub factors: Vec<Poly>,
}

impl SplitRestriction {
    pub fn assemble(&self, vars: &crate::VarSet) -> Poly {
        self.factors.iter().fold(Poly::squarefree(vars, &self.prefactor, self.constant.clone()), |a, f| &a * f)
    }

    /// The linear spaces `Lambda_face` meet `{factor = 0}`, one per factor.
    pub fn planes(&self, vars: &crate::VarSet, face: &FaceRef) -> Vec<LinearVariety> {
        let base = LinearVariety::coordinate(vars, &face.facets);
        self.factors
            .iter()
            .map(|f| base.intersect(&LinearVariety::from_forms(vars, std::slice::from_ref(f)).expect("linear")).expect("ambient"))
            .collect()
    }
}

/// The linear factorization of the restriction to a face whose normal fan
/// is a product of simplex fans, detected by its primitive collections
/// being pairwise disjoint and covering all rays. `None` otherwise.
pub fn split_restriction(p: &HPolytope, face: &FaceRef) -> Result<Option<SplitRestriction>> {
    let face = p.face(&face.facets)?;
    let fan = p.fan()?;
    let res = restrict_adjoint(&fan, &face.facets)?;
    let star = &res.star.fan;
    let prims = primitive_collections(star);
    let covered: BTreeSet<usize> = prims.iter().flatten().copied().collect();
    if covered.len() != star.n() || prims.iter().map(Vec::len).sum::<usize>() != star.n() {
        return Ok(None);
    }
    let sv = star.vars();
    let mut factors = Vec::new();
    let mut product = Poly::constant(sv, Rat::one());
    for s in &prims {
        let mut f = res.star_adjoint.clone();
        for r in (0..star.n()).filter(|r| !s.contains(r)) {
            f = f.specialize(r, &Rat::one());
        }
        let (f, _) = f.primitive();
        product = &product * &f;
        factors.push(f);
    }
    let lead = |q: &Poly| q.leading().map(|(m, c)| (m.clone(), c.clone()));
    let (Some((m, a)), Some((_, b))) = (lead(&res.star_adjoint), lead(&product)) else {
        return Err(Error::Consistency("empty star adjoint on a split face".into()));
    };
    let k = a / b;
    if product.scale(&k) != res.star_adjoint {
        return Err(Error::Consistency(format!("face {} does not split as detected", one_based(&face.facets))));
    }
    let _ = m;
    let vars = fan.vars();
    let out = SplitRestriction {
        prefactor: res.prefactor.clone(),
        constant: k / &res.c_tau,
        factors: factors.iter().map(|f| f.embed(vars, &res.star.ray_map)).collect(),
    };
    if out.assemble(vars) != adjoint(&fan).restrict_zero(&face.facets) {
        return Err(Error::Consistency("split restriction does not reassemble".into()));
    }
    Ok(Some(out))
}

/// Lifts a linear space inside the adjoint hypersurface of a face to one
/// inside the adjoint hypersurface of the polytope. `v` lives over the
/// variables of the face's star fan.
pub fn lift_face_space(p: &HPolytope, face: &FaceRef, v: &LinearVariety) -> Result<LinearVariety> {
    let face = p.face(&face.facets)?;
    let fan = p.fan()?;
    let res = restrict_adjoint(&fan, &face.facets)?;
    if v.vars() != res.star.fan.vars() {
        return Err(Error::Precondition("space is not over the face's variables".into()));
    }
    if !v.vanishes(&res.star_adjoint)? {
        return Err(Error::Precondition("face adjoint does not vanish on the space".into()));
    }
    let n = fan.n();
    let mut rows: Vec<Vec<Rat>> = v
        .rows()
        .iter()
        .map(|r| {
            let mut full = vec![Rat::zero(); n];
            for (i, &src) in res.star.ray_map.iter().enumerate() {
                full[src] = r[i].clone();
            }
            full
        })
        .collect();
    rows.extend(LinearVariety::coordinate(fan.vars(), &face.facets).rows().iter().cloned());
    let lifted = LinearVariety::from_rows(fan.vars(), &rows)?;
    if !lifted.vanishes(&adjoint(&fan))? {
        return Err(Error::Consistency("lifted space is not in the adjoint hypersurface".into()));
    }
    Ok(lifted)
}

/// Pairs of cones `(rho, J)` with `rho` a dropped ray and `J` a primitive
/// collection of the full-dimensional subfan; the adjoint vanishes on every
/// `Lambda_rho` and on every `Lambda_J`.
pub fn dropped_ray_spaces(fan: &SimplicialFan) -> Vec<LinearVariety> {
    let bar = fan.bar_fan();
    let mut out: Vec<LinearVariety> =
        bar.dropped.iter().map(|&r| LinearVariety::coordinate(fan.vars(), &[r])).collect();
    for j in primitive_collections(&bar.fan) {
        let lifted: Vec<usize> = j.iter().map(|&r| bar.kept[r]).collect();
        out.push(LinearVariety::coordinate(fan.vars(), &lifted));
    }
    out.into_iter().unique().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn labels(sets: &[Vec<usize>]) -> Vec<String> {
        sets.iter().map(|s| s.iter().map(|r| (r + 1).to_string()).collect()).collect()
    }

    #[test]
    fn cone_over_square_ideal() {
        let f = fixtures::fan("cone-over-square");
        assert_eq!(labels(&irrelevant_generators(&f)), ["126", "146", "236", "346", "1235", "1245"]);
        assert_eq!(labels(&primitive_collections(&f)), ["13", "16", "24", "26", "56", "346"]);
        assert!(adj_in_irrelevant(&adjoint(&f), &irrelevant_generators(&f)));
    }

    #[test]
    fn ngon_primitive_count() {
        for name in ["pentagon", "hexagon", "octagon-alpha2"] {
            let f = fixtures::fan(name);
            let n = f.n();
            assert_eq!(primitive_collections(&f).len(), n * (n - 3) / 2);
        }
    }

    #[test]
    fn corrupted_adjoint_leaves_ideal() {
        let f = fixtures::fan("pentagon");
        let mut a = adjoint(&f);
        a.add_term(Monomial(vec![1, 1, 1, 0, 0]), Rat::from_integer((-1).into()));
        a.add_term(Monomial(vec![1, 1, 0, 0, 1]), Rat::one());
        a.add_term(Monomial(vec![1, 0, 1, 0, 1]), Rat::one());
        assert!(!adj_in_irrelevant(&a, &irrelevant_generators(&f)));
    }

    #[test]
    fn interpolation_matches_adjoint() {
        for name in ["pentagon", "unit-square", "cube", "cuboid", "abhy3", "hexagon", "simplex2"] {
            let p = fixtures::polytope(name);
            assert_eq!(interpolate_adjoint(&p).unwrap(), adjoint(&p.fan().unwrap()), "{name}");
        }
        let sq = interpolate_adjoint(&fixtures::polytope("unit-square")).unwrap();
        assert_eq!(sq.to_string(), "x1*x2 + x1*x4 + x2*x3 + x3*x4");
    }

    #[test]
    fn pentagon_edge_hyperplanes() {
        let p = fixtures::polytope("pentagon");
        let hs = edge_hyperplanes(&p).unwrap();
        assert_eq!(hs.len(), 5);
        let e4 = hs.iter().find(|h| h.edge.facets == vec![3]).unwrap();
        assert_eq!(e4.form(p.vars()).to_string(), "x3 + x5");
    }

    #[test]
    fn abhy_quadrilateral_splits() {
        let p = fixtures::polytope("abhy3");
        let x14 = p.vars().index_of("x14").unwrap();
        let s = split_restriction(&p, &FaceRef { facets: vec![x14], dim: 2 }).unwrap().unwrap();
        let pre: Vec<&str> = s.prefactor.iter().map(|&r| p.vars().label(r)).collect();
        assert_eq!(pre, ["x25", "x26", "x35", "x36"]);
        let fs: Vec<String> = s.factors.iter().map(|f| f.to_string()).collect();
        assert_eq!(fs, ["x13 + x24", "x15 + x46"]);
        let x13 = p.vars().index_of("x13").unwrap();
        assert!(split_restriction(&p, &FaceRef { facets: vec![x13], dim: 2 }).unwrap().is_none());
    }

    #[test]
    fn edge_point_lifts_to_edge_space() {
        let p = fixtures::polytope("pentagon");
        let face = FaceRef { facets: vec![3], dim: 1 };
        let res = restrict_adjoint(&p.fan().unwrap(), &[3]).unwrap();
        let point = LinearVariety::from_forms(res.star.fan.vars(), std::slice::from_ref(&res.star_adjoint)).unwrap();
        let lifted = lift_face_space(&p, &face, &point).unwrap();
        let h = edge_hyperplanes(&p).unwrap().into_iter().find(|h| h.edge.facets == vec![3]).unwrap();
        assert_eq!(lifted, h.variety(p.vars()));
    }

    #[test]
    fn z_components_in_adjoint() {
        for name in ["cone-over-square", "fulton", "hexagon"] {
            let f = fixtures::fan(name);
            let a = adjoint(&f);
            for c in z_components(&f).iter().chain(&dropped_ray_spaces(&f)) {
                assert!(c.vanishes(&a).unwrap(), "{name}: {c}");
            }
        }
    }
}
