//! Singular locus of the adjoint hypersurface.
//!
//! Inside the zero set of the irrelevant ideal the singular locus is cut
//! out by small structured systems, one per primitive collection. Outside
//! it, the matrix `M` and the toric variety `Y` give a sufficient test for
//! emptiness.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::amplitude::{adjoint, restrict_adjoint, warren_adjoint};
use crate::combinat::primitive_collections;
use crate::error::{Error, Result};
use crate::fan::{one_based, SimplicialFan};
use crate::linalg::integer_kernel_basis;
use crate::polytope::HPolytope;
use crate::univariate::UPoly;
use crate::variety::LinearVariety;
use crate::{Poly, Rat, RatMat, VarSet};

/// `d Adj / d x_rho` for every ray.
pub fn partials(fan: &SimplicialFan) -> Vec<Poly> {
    let a = adjoint(fan);
    (0..fan.n()).map(|r| a.partial(r)).collect()
}

/// `scale * x^monomial * star_adjoint = 0`, the equation contributed by
/// `ray` in `J`; the star is taken at `tau = J - {ray}`.
#[derive(Clone, Debug)]
pub struct SingEquation {
    pub ray: usize,
    pub tau: Vec<usize>,
    pub monomial: Vec<usize>,
    pub scale: Rat,
    /// Over the variables of the fan.
    pub star_adjoint: Poly,
}

impl SingEquation {
    pub fn poly(&self) -> Poly {
        let vars = self.star_adjoint.vars();
        &Poly::squarefree(vars, &self.monomial, self.scale.clone()) * &self.star_adjoint
    }
}

#[derive(Clone, Debug)]
pub struct SingSystem {
    pub j: Vec<usize>,
    pub equations: Vec<SingEquation>,
}

pub fn sing_system(fan: &SimplicialFan, j: &[usize]) -> Result<SingSystem> {
    let mut j = j.to_vec();
    j.sort_unstable();
    j.dedup();
    let primitive = !fan.is_cone(&j)
        && j.iter().all(|r| {
            let rest: Vec<usize> = j.iter().copied().filter(|s| s != r).collect();
            fan.is_cone(&rest)
        });
    if !primitive {
        return Err(Error::Precondition(format!("{} is not a primitive collection", one_based(&j))));
    }
    let parts = partials(fan);
    let vars = fan.vars();
    let mut equations = Vec::with_capacity(j.len());
    for (r, part) in parts.iter().enumerate() {
        let restricted = part.restrict_zero(&j);
        if !j.contains(&r) {
            if !restricted.is_zero() {
                return Err(Error::Consistency(format!("partial {} survives on the coordinate space of J", r + 1)));
            }
            continue;
        }
        let tau: Vec<usize> = j.iter().copied().filter(|&s| s != r).collect();
        let res = restrict_adjoint(fan, &tau)?;
        if !res.prefactor.contains(&r) {
            return Err(Error::Consistency(format!("ray {} neighbours {}", r + 1, one_based(&tau))));
        }
        let eq = SingEquation {
            ray: r,
            monomial: res.prefactor.iter().copied().filter(|&s| s != r).collect(),
            scale: Rat::one() / &res.c_tau,
            star_adjoint: res.star_adjoint.embed(vars, &res.star.ray_map),
            tau,
        };
        if eq.poly() != restricted {
            return Err(Error::Consistency(format!("equation for ray {} disagrees with the partial", r + 1)));
        }
        equations.push(eq);
    }
    Ok(SingSystem { j, equations })
}

pub fn all_sing_systems(fan: &SimplicialFan) -> Result<Vec<SingSystem>> {
    primitive_collections(fan).iter().map(|j| sing_system(fan, j)).collect()
}

/// A linear piece of the singular locus inside the irrelevant locus, with
/// the primitive collections whose systems produce it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingComponent {
    pub space: LinearVariety,
    pub sources: Vec<Vec<usize>>,
}

/// Every distinct linear space obtained by choosing one factor per
/// equation, before removing spaces contained in others.
pub fn solution_spaces(systems: &[SingSystem]) -> Result<Vec<SingComponent>> {
    let mut found: BTreeMap<LinearVariety, Vec<Vec<usize>>> = BTreeMap::new();
    for sys in systems {
        let Some(vars) = sys.equations.first().map(|e| e.star_adjoint.vars().clone()) else { continue };
        let n = vars.len();
        let unit = |i: usize| -> Vec<Rat> { (0..n).map(|k| if k == i { Rat::one() } else { Rat::zero() }).collect() };
        // Alternative linear forms per equation; identically zero equations
        // impose nothing.
        let mut choices: Vec<Vec<Vec<Rat>>> = Vec::new();
        for eq in &sys.equations {
            if eq.star_adjoint.is_zero() {
                continue;
            }
            let mut opts: Vec<Vec<Rat>> = eq.monomial.iter().map(|&i| unit(i)).collect();
            match eq.star_adjoint.total_degree() {
                Some(0) => {}
                Some(1) => opts.push(eq.star_adjoint.linear_coeffs().expect("degree one").0),
                _ => {
                    return Err(Error::Precondition(format!(
                        "nonlinear star adjoint for ray {} in {}; use the factored cover",
                        eq.ray + 1,
                        one_based(&sys.j)
                    )))
                }
            }
            choices.push(opts);
        }
        let base: Vec<Vec<Rat>> = sys.j.iter().map(|&i| unit(i)).collect();
        for pick in choices.iter().map(|c| c.iter()).multi_cartesian_product() {
            let mut rows = base.clone();
            rows.extend(pick.into_iter().cloned());
            let v = LinearVariety::from_rows(&vars, &rows)?;
            if v.dim() >= 0 {
                let src = found.entry(v).or_default();
                if !src.contains(&sys.j) {
                    src.push(sys.j.clone());
                }
            }
        }
        if choices.is_empty() {
            let src = found.entry(LinearVariety::from_rows(&vars, &base)?).or_default();
            if !src.contains(&sys.j) {
                src.push(sys.j.clone());
            }
        }
    }
    Ok(found.into_iter().map(|(space, sources)| SingComponent { space, sources }).collect())
}

/// Maximal linear components of the union of the systems' solution sets,
/// sorted by dimension and echelon form.
pub fn decompose_linear(systems: &[SingSystem]) -> Result<Vec<SingComponent>> {
    let all = solution_spaces(systems)?;
    let maximal = all
        .iter()
        .filter(|c| !all.iter().any(|o| o.space != c.space && o.space.contains(&c.space)))
        .cloned()
        .collect();
    Ok(maximal)
}

/// `"30 components of dim 1, 2 components of dim 2"`.
pub fn component_summary(components: &[SingComponent]) -> String {
    let counts = components.iter().counts_by(|c| c.space.dim());
    counts
        .into_iter()
        .sorted()
        .map(|(d, k)| format!("{k} component{} of dim {d}", if k == 1 { "" } else { "s" }))
        .join(", ")
}

/// Per primitive collection, the equations as monomial times star adjoint.
/// No decomposition is attempted.
pub struct FactoredCover<'a> {
    pub systems: &'a [SingSystem],
}

impl fmt::Display for FactoredCover<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for sys in self.systems {
            let Some(first) = sys.equations.first() else { continue };
            let vars = first.star_adjoint.vars();
            let names: Vec<&str> = sys.j.iter().map(|&i| vars.label(i)).collect();
            writeln!(f, "J = {{{}}}", names.join(", "))?;
            writeln!(f, "  {} = 0", names.join(" = "))?;
            for eq in &sys.equations {
                let tau: Vec<&str> = eq.tau.iter().map(|&i| vars.label(i)).collect();
                let mut factors: Vec<String> = Vec::new();
                if !eq.scale.is_one() {
                    factors.push(crate::scalar::fmt_rat(&eq.scale));
                }
                factors.extend(eq.monomial.iter().map(|&i| vars.label(i).to_string()));
                if eq.star_adjoint.is_zero() {
                    writeln!(f, "  0 = 0  [star of {}: no full-dimensional cones]", tau.join(","))?;
                    continue;
                }
                if !eq.star_adjoint.is_constant() {
                    factors.push(format!("({})", eq.star_adjoint));
                } else if !eq.star_adjoint.constant_term().is_one() || factors.is_empty() {
                    factors.push(eq.star_adjoint.to_string());
                }
                writeln!(f, "  {} = 0  [star of {}]", factors.join("*"), tau.join(","))?;
            }
        }
        Ok(())
    }
}

/// `M[rho][s] = |det U_s|` if `rho` is not in `s`; columns follow the input
/// order of the full-dimensional cones.
#[derive(Clone, Debug)]
pub struct SingMatrixData {
    pub cones: Vec<Vec<usize>>,
    pub m: RatMat,
    /// Support of `x^(complement of s)` per column, as 0/1 entries.
    pub exponents: Vec<Vec<BigInt>>,
    pub kernel: Vec<Vec<Rat>>,
}

pub fn build_m(fan: &SimplicialFan) -> Result<SingMatrixData> {
    let d = fan.dim();
    if fan.max_cones().iter().any(|c| c.len() != d) || !fan.bar_fan().dropped.is_empty() {
        return Err(Error::Precondition("the fan has maximal cones of lower dimension".into()));
    }
    let cones: Vec<Vec<usize>> = fan.d_cones().into_iter().cloned().collect();
    let dets: Vec<Rat> = cones.iter().map(|c| fan.det_abs(c)).collect();
    let m = RatMat::from_fn(fan.n(), cones.len(), |r, s| if cones[s].contains(&r) { Rat::zero() } else { dets[s].clone() });
    let exponents = (0..fan.n())
        .map(|r| cones.iter().map(|c| if c.contains(&r) { BigInt::zero() } else { BigInt::one() }).collect())
        .collect();
    let kernel = m.kernel_basis();
    Ok(SingMatrixData { cones, m, exponents, kernel })
}

#[derive(Clone, Debug, PartialEq)]
pub enum SingVerdict {
    /// The singular locus lies in the irrelevant locus.
    Guaranteed(String),
    Inconclusive(String),
    /// A torus point of `Y` in the kernel of `M`.
    TorusWitness(Vec<Rat>),
}

/// A basis of the integer vectors `l` with `E l = 0`; each gives the
/// binomial `prod y^(l+) = prod y^(l-)` vanishing on `Y`.
pub fn lattice_binomials(data: &SingMatrixData) -> Vec<Vec<BigInt>> {
    integer_kernel_basis(&data.exponents, data.cones.len())
}

/// Lattice vectors `sum c_i l_i` with `c_i` in `{-1, 0, 1}`, up to sign. The
/// basis binomials alone can vanish on extra coordinate components.
fn small_lattice_vectors(basis: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    const MAX_BASIS: usize = 6;
    let k = basis.len().min(MAX_BASIS);
    let mut out: Vec<Vec<BigInt>> = basis.to_vec();
    for coeffs in (0..k).map(|_| -1i32..=1).multi_cartesian_product() {
        let first = coeffs.iter().find(|&&c| c != 0);
        if first != Some(&1) || coeffs.iter().filter(|&&c| c != 0).count() < 2 {
            continue;
        }
        let v: Vec<BigInt> = (0..basis[0].len())
            .map(|j| coeffs.iter().zip(basis).map(|(&c, l)| BigInt::from(c) * &l[j]).sum())
            .collect();
        out.push(v);
    }
    out
}

fn binomial_holds(l: &[BigInt], y: &[Rat]) -> bool {
    let side = |positive: bool| -> Rat {
        l.iter().zip(y).fold(Rat::one(), |acc, (e, v)| {
            if e.is_zero() || e.is_positive() != positive {
                return acc;
            }
            let k: u32 = e.abs().try_into().expect("small exponent");
            acc * num_traits::pow(v.clone(), k as usize)
        })
    };
    side(true) == side(false)
}

fn binomial_on_line(l: &[BigInt], k1: &[Rat], k2: &[Rat], st: &VarSet) -> Poly {
    let side = |positive: bool| -> Poly {
        let mut acc = Poly::constant(st, Rat::one());
        for (i, e) in l.iter().enumerate() {
            if e.is_zero() || e.is_positive() != positive {
                continue;
            }
            let k: u32 = e.abs().try_into().expect("small exponent");
            let lin = Poly::linear(st, &[k1[i].clone(), k2[i].clone()], Rat::zero());
            acc = &acc * &lin.pow(k);
        }
        acc
    };
    &side(true) - &side(false)
}

pub fn sing_in_z_check(fan: &SimplicialFan) -> Result<SingVerdict> {
    let data = build_m(fan)?;
    let lattice = lattice_binomials(&data);
    Ok(match data.kernel.len() {
        0 => SingVerdict::Guaranteed("M has trivial kernel".into()),
        1 => {
            let k = &data.kernel[0];
            if k.iter().any(Zero::is_zero) {
                SingVerdict::Inconclusive("kernel vector meets coordinate hyperplanes".into())
            } else if let Some(l) = lattice.iter().find(|l| !binomial_holds(l, k)) {
                SingVerdict::Guaranteed(format!("kernel point violates the binomial {}", fmt_binomial(l, &data.cones)))
            } else {
                SingVerdict::TorusWitness(k.clone())
            }
        }
        2 => {
            let st = VarSet::new(["s", "t"]).expect("labels");
            let forms: Vec<Poly> = small_lattice_vectors(&lattice)
                .iter()
                .map(|l| binomial_on_line(l, &data.kernel[0], &data.kernel[1], &st))
                .filter(|f| !f.is_zero())
                .collect();
            if forms.is_empty() {
                return Ok(SingVerdict::Inconclusive("kernel line lies on every basis binomial".into()));
            }
            let at_infinity = forms.iter().all(|f| f.eval(&[Rat::one(), Rat::zero()]).is_ok_and(|v| v.is_zero()));
            let g = forms
                .iter()
                .map(|f| UPoly::from_sparse(&f.specialize(1, &Rat::one()), 0).expect("univariate"))
                .reduce(|a, b| a.gcd(&b))
                .expect("nonempty");
            if at_infinity || g.degree().is_some_and(|d| d > 0) {
                SingVerdict::Inconclusive("kernel line meets the binomial variety".into())
            } else {
                SingVerdict::Guaranteed("kernel line misses the binomial variety".into())
            }
        }
        k => SingVerdict::Inconclusive(format!("kernel of M has dimension {k}")),
    })
}

fn fmt_binomial(l: &[BigInt], cones: &[Vec<usize>]) -> String {
    let side = |positive: bool| -> String {
        let f: Vec<String> = l
            .iter()
            .enumerate()
            .filter(|(_, e)| !e.is_zero() && e.is_positive() == positive)
            .map(|(i, e)| {
                let name = format!("y{}", cones[i].iter().map(|r| (r + 1).to_string()).join("_"));
                if e.abs().is_one() { name } else { format!("{name}^{}", e.abs()) }
            })
            .collect();
        if f.is_empty() { "1".into() } else { f.join("*") }
    };
    format!("{} = {}", side(true), side(false))
}

/// Rays of a polygon fan in cyclic order, from ray 0 towards its
/// lower-indexed neighbour. Errors unless the cones are consecutive pairs.
pub fn polygon_order(fan: &SimplicialFan) -> Result<Vec<usize>> {
    let n = fan.n();
    let not_polygon = || Error::Precondition("not the fan of a polygon".into());
    if fan.dim() != 2 || n < 3 || fan.max_cones().len() != n || fan.max_cones().iter().any(|c| c.len() != 2) {
        return Err(not_polygon());
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for c in fan.max_cones() {
        adj[c[0]].push(c[1]);
        adj[c[1]].push(c[0]);
    }
    if adj.iter().any(|a| a.len() != 2) {
        return Err(not_polygon());
    }
    let mut order = vec![0, adj[0][0].min(adj[0][1])];
    while order.len() < n {
        let (prev, cur) = (order[order.len() - 2], order[order.len() - 1]);
        let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
        if next == 0 {
            return Err(not_polygon());
        }
        order.push(next);
    }
    let last = order[n - 1];
    if !adj[last].contains(&0) {
        return Err(not_polygon());
    }
    Ok(order)
}

/// `|det|` of consecutive cones along [`polygon_order`].
pub fn polygon_dets(fan: &SimplicialFan) -> Result<Vec<Rat>> {
    let o = polygon_order(fan)?;
    let n = o.len();
    Ok((0..n).map(|i| fan.det_abs(&[o[i], o[(i + 1) % n]])).collect())
}

/// False only when `n` is a multiple of 4 and the alternating products of
/// the consecutive determinants agree.
pub fn ngon_generic_check(fan: &SimplicialFan) -> Result<bool> {
    let u = polygon_dets(fan)?;
    if u.len() % 4 != 0 {
        return Ok(true);
    }
    let even: Rat = u.iter().step_by(2).product();
    let odd: Rat = u.iter().skip(1).step_by(2).product();
    Ok(even != odd)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Smoothness {
    Smooth,
    SingularAt(Vec<Rat>),
    /// Common factor of the resultants with no rational root, per attempt.
    RetryExhausted(Vec<UPoly>),
}

pub const SHEAR_ATTEMPTS: usize = 5;

fn input_seed(p: &HPolytope, z: &[Rat]) -> u64 {
    // FNV-1a over the printed input; stable across runs and platforms.
    let text = format!("{:?}|{:?}", p.u().to_rows(), z);
    text.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

fn univariate(p: &Poly, v: usize) -> UPoly {
    UPoly::from_sparse(p, v).expect("eliminant in one variable")
}

/// Common factor of `Res_v(f, f_1)` and `Res_v(f, f_2)`, in the other variable.
fn eliminant(f: &Poly, v: usize) -> Result<UPoly> {
    let other = 1 - v;
    let (f1, f2) = (f.partial(0), f.partial(1));
    let res = |g: &Poly| -> Result<UPoly> {
        if g.is_zero() {
            return Ok(UPoly::new(Vec::new()));
        }
        if g.degree_in(v) == Some(0) && f.degree_in(v) == Some(0) {
            // Neither involves v: the system in the other variable is f = g = 0.
            return Ok(univariate(g, other));
        }
        Ok(univariate(&f.resultant(g, v)?, other))
    };
    Ok(res(&f1)?.gcd(&res(&f2)?))
}

fn common_roots(polys: &[UPoly]) -> Option<Vec<Rat>> {
    let g = polys.iter().cloned().reduce(|a, b| a.gcd(&b))?;
    if g.is_zero() {
        return None;
    }
    g.rational_roots()
}

/// Decides smoothness of the affine curve `adj_{P_z}(y) = 0` for `d = 2`.
pub fn warren_smoothness_d2(p: &HPolytope, z: &[Rat]) -> Result<Smoothness> {
    if p.dim() != 2 {
        return Err(Error::Precondition("smoothness certificate needs d = 2".into()));
    }
    let fan = p.fan()?;
    let w = warren_adjoint(&fan, z)?;
    match w.degree {
        None => return Err(Error::Precondition("Warren adjoint is zero".into())),
        Some(d) if d <= 1 => return Ok(Smoothness::Smooth),
        _ => {}
    }
    let y = w.poly.vars().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(input_seed(p, z));
    let mut gcds = Vec::new();
    for _ in 0..SHEAR_ATTEMPTS {
        let (a, b): (i64, i64) = (rng.gen_range(-3..=3), rng.gen_range(-3..=3));
        // y = S y' with S = [[1 + ab, a], [b, 1]], det S = 1.
        let s = [[Rat::from_integer((1 + a * b).into()), Rat::from_integer(a.into())], [
            Rat::from_integer(b.into()),
            Rat::one(),
        ]];
        let images: Vec<Poly> = s.iter().map(|row| Poly::linear(&y, row, Rat::zero())).collect();
        let f = w.poly.substitute(&images, &y)?;
        let g1 = eliminant(&f, 1)?;
        let g2 = eliminant(&f, 0)?;
        if g1.degree() == Some(0) && g2.degree() == Some(0) {
            return Ok(Smoothness::Smooth);
        }
        if !g1.is_zero() {
            if let Some(roots) = g1.rational_roots() {
                for r in roots {
                    let fixed: Vec<UPoly> = [f.clone(), f.partial(0), f.partial(1)]
                        .iter()
                        .map(|h| univariate(&h.specialize(0, &r), 1))
                        .collect();
                    if let Some(ys) = common_roots(&fixed) {
                        if let Some(t) = ys.first() {
                            let pt = [r.clone(), t.clone()];
                            let orig: Vec<Rat> = s
                                .iter()
                                .map(|row| &row[0] * &pt[0] + &row[1] * &pt[1])
                                .collect();
                            return Ok(Smoothness::SingularAt(orig));
                        }
                    }
                }
            }
        }
        gcds.push(g1);
    }
    Ok(Smoothness::RetryExhausted(gcds))
}
