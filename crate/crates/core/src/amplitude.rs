//! Toric amplitudes, universal adjoints and their specializations.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fan::{one_based, SimplicialFan, StarFanData};
use crate::polytope::{FaceRef, HPolytope};
use crate::poly::VarSet;
use crate::scalar::{from_f64, to_f64};
use crate::{FloatMat, Poly, Rat};

/// `Amp = sum coef / prod_{rho in cone} x_rho`, one term per full cone.
#[derive(Clone, Debug)]
pub struct AmplitudeExpansion {
    pub fan: SimplicialFan,
    /// `(|det U_s|, s)`, sorted by cone.
    pub terms: Vec<(Rat, Vec<usize>)>,
}

impl AmplitudeExpansion {
    pub fn evaluate(&self, x: &[Rat]) -> Result<Rat> {
        if x.len() != self.fan.n() {
            return Err(Error::Dimension(format!("x has length {}, expected {}", x.len(), self.fan.n())));
        }
        let mut total = Rat::zero();
        for (c, cone) in &self.terms {
            let mut den = Rat::one();
            for &r in cone {
                den *= &x[r];
            }
            if den.is_zero() {
                return Err(Error::Pole(cone.clone()));
            }
            total += c / den;
        }
        Ok(total)
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for AmplitudeExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let labels = self.fan.labels();
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(c, cone)| {
                let den: Vec<&str> = cone.iter().map(|&r| labels[r].as_str()).collect();
                let den = if den.is_empty() { "1".to_string() } else { den.join("*") };
                format!("{}/({})", crate::scalar::fmt_rat(c), den)
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

pub fn amplitude(fan: &SimplicialFan) -> AmplitudeExpansion {
    let mut terms: Vec<(Rat, Vec<usize>)> = fan.d_cones().into_iter().map(|c| (fan.det_abs(c), c.clone())).collect();
    terms.sort_by(|a, b| a.1.cmp(&b.1));
    AmplitudeExpansion { fan: fan.clone(), terms }
}

fn complement(n: usize, cone: &[usize]) -> Vec<usize> {
    (0..n).filter(|r| !cone.contains(r)).collect()
}

/// `sum_s |det U_s| prod_{rho not in s} x_rho`.
pub fn adjoint(fan: &SimplicialFan) -> Poly {
    let mut p = Poly::zero(fan.vars());
    for c in fan.d_cones() {
        let m = Poly::squarefree(fan.vars(), &complement(fan.n(), c), fan.det_abs(c));
        p = &p + &m;
    }
    p
}

/// The adjoint printed with one term per full cone, in input cone order.
pub fn adjoint_cone_order(fan: &SimplicialFan) -> String {
    let mut out = String::new();
    for c in fan.d_cones() {
        let t = Poly::squarefree(fan.vars(), &complement(fan.n(), c), fan.det_abs(c)).to_string();
        if out.is_empty() {
            out = t;
        } else if let Some(rest) = t.strip_prefix('-') {
            out = format!("{out} - {rest}");
        } else {
            out = format!("{out} + {t}");
        }
    }
    if out.is_empty() { "0".into() } else { out }
}

pub fn evaluate_amplitude(fan: &SimplicialFan, x: &[Rat]) -> Result<Rat> {
    amplitude(fan).evaluate(x)
}

/// Factors of `Adj|_{x_tau = 0} = c^{-1} * x^prefactor * Adj_star`.
#[derive(Clone, Debug)]
pub struct Restriction {
    /// Rays outside `tau` and its neighbours.
    pub prefactor: Vec<usize>,
    pub star: StarFanData,
    /// Adjoint of the star fan, over its own variables.
    pub star_adjoint: Poly,
    pub c_tau: Rat,
}

impl Restriction {
    /// The right-hand side, as a polynomial in the variables of the fan.
    pub fn assemble(&self, vars: &VarSet) -> Poly {
        let lifted = self.star_adjoint.embed(vars, &self.star.ray_map);
        let pre = Poly::squarefree(vars, &self.prefactor, Rat::one() / &self.c_tau);
        &pre * &lifted
    }
}

pub fn restrict_adjoint(fan: &SimplicialFan, tau: &[usize]) -> Result<Restriction> {
    let star = fan.star_fan(tau)?;
    let prefactor: Vec<usize> = (0..fan.n()).filter(|r| !star.tau.contains(r) && !star.ray_map.contains(r)).collect();
    let star_adjoint = adjoint(&star.fan);
    let res = Restriction { prefactor, c_tau: star.c_tau.clone(), star, star_adjoint };
    let lhs = adjoint(fan).restrict_zero(&res.star.tau);
    if lhs != res.assemble(fan.vars()) {
        return Err(Error::Consistency(format!("restriction identity fails at {}", one_based(&res.star.tau))));
    }
    Ok(res)
}

/// `res_{Lambda_tau} Amp = c^{-1} Amp_star`.
#[derive(Clone, Debug)]
pub struct Residue {
    pub inv_c: Rat,
    pub star_amplitude: AmplitudeExpansion,
    pub star: StarFanData,
}

pub fn residue(fan: &SimplicialFan, tau: &[usize]) -> Result<Residue> {
    let star = fan.star_fan(tau)?;
    Ok(Residue { inv_c: Rat::one() / &star.c_tau, star_amplitude: amplitude(&star.fan), star })
}

/// Restriction of the polytope adjoint to the face cut out by `face`.
pub fn face_restrict(p: &HPolytope, face: &FaceRef) -> Result<Restriction> {
    let face = p.face(&face.facets)?;
    restrict_adjoint(&p.fan()?, &face.facets)
}

/// `Adj(U y)` is the zero polynomial in `y`.
pub fn vanishes_on_im_u(fan: &SimplicialFan) -> bool {
    let y = VarSet::numbered("y", fan.dim());
    let images: Vec<Poly> = (0..fan.n()).map(|r| Poly::linear(&y, fan.ray(r), Rat::zero())).collect();
    adjoint(fan).substitute(&images, &y).expect("images match").is_zero()
}

/// `Adj(U y + z)` over `y1..yd`.
#[derive(Clone, Debug, PartialEq)]
pub struct WarrenPoly {
    pub poly: Poly,
    pub z: Vec<Rat>,
    /// `None` for the zero polynomial.
    pub degree: Option<u32>,
}

pub fn warren_adjoint(fan: &SimplicialFan, z: &[Rat]) -> Result<WarrenPoly> {
    if z.len() != fan.n() {
        return Err(Error::Dimension(format!("z has length {}, expected {}", z.len(), fan.n())));
    }
    let y = VarSet::numbered("y", fan.dim());
    let images: Vec<Poly> = (0..fan.n()).map(|r| Poly::linear(&y, fan.ray(r), z[r].clone())).collect();
    let poly = adjoint(fan).substitute(&images, &y)?;
    let degree = poly.total_degree();
    let bound = (fan.n() - fan.dim()) as u32;
    if let Some(d) = degree {
        if d > bound || (fan.is_complete() && d + 1 > bound) {
            return Err(Error::Consistency(format!("Warren adjoint has degree {d}")));
        }
    }
    Ok(WarrenPoly { poly, z: z.to_vec(), degree })
}

/// Output of [`santalo_point`].
#[derive(Clone, Debug)]
pub struct SantaloPoint {
    pub y: Vec<f64>,
    pub grad_norm: f64,
    pub iterations: usize,
}

pub const SANTALO_MAX_ITER: usize = 200;

struct Barrier {
    rows: Vec<Vec<f64>>,
    z: Vec<f64>,
    terms: Vec<(f64, Vec<usize>)>,
}

impl Barrier {
    fn value(&self, y: &[f64]) -> f64 {
        let s = self.slacks(y);
        self.terms.iter().map(|(c, cone)| c / cone.iter().map(|&r| s[r]).product::<f64>()).sum::<f64>().ln()
    }

    fn slacks(&self, y: &[f64]) -> Vec<f64> {
        self.rows.iter().zip(&self.z).map(|(u, z)| u.iter().zip(y).map(|(a, b)| a * b).sum::<f64>() + z).collect()
    }

    /// Gradient and Hessian of `log Amp(U y + z)`.
    fn derivatives(&self, y: &[f64]) -> (Vec<f64>, Vec<Vec<f64>>) {
        let d = y.len();
        let s = self.slacks(y);
        let mut a = 0.0;
        let mut g = vec![0.0; d];
        let mut h = vec![vec![0.0; d]; d];
        for (c, cone) in &self.terms {
            let t = c / cone.iter().map(|&r| s[r]).product::<f64>();
            let mut w = vec![0.0; d];
            for &r in cone {
                for j in 0..d {
                    w[j] += self.rows[r][j] / s[r];
                }
            }
            a += t;
            for i in 0..d {
                g[i] -= t * w[i];
                for j in 0..d {
                    let mut q = w[i] * w[j];
                    for &r in cone {
                        q += self.rows[r][i] * self.rows[r][j] / (s[r] * s[r]);
                    }
                    h[i][j] += t * q;
                }
            }
        }
        let gf: Vec<f64> = g.iter().map(|v| v / a).collect();
        let hf = (0..d).map(|i| (0..d).map(|j| h[i][j] / a - gf[i] * gf[j]).collect()).collect();
        (gf, hf)
    }
}

/// Minimizer of `log Amp(U y + z)` over the interior of a bounded simple
/// polytope, by damped Newton from the vertex barycenter. Stops when the
/// Newton decrement drops below `tol`; at most [`SANTALO_MAX_ITER`] steps.
pub fn santalo_point(p: &HPolytope, tol: f64) -> Result<SantaloPoint> {
    if !(tol > 0.0) {
        return Err(Error::Precondition("tolerance must be positive".into()));
    }
    if !p.is_bounded() {
        return Err(Error::Unbounded);
    }
    let fan = p.fan()?;
    let vs = p.vertices()?;
    let d = p.dim();
    let mut y: Vec<f64> = (0..d).map(|j| vs.iter().map(|v| to_f64(&v.point[j])).sum::<f64>() / vs.len() as f64).collect();
    let barrier = Barrier {
        rows: (0..p.n()).map(|i| p.u().row(i).iter().map(to_f64).collect()).collect(),
        z: p.z().iter().map(to_f64).collect(),
        terms: amplitude(&fan).terms.iter().map(|(c, cone)| (to_f64(c), cone.clone())).collect(),
    };
    let interior = |y: &[f64]| -> bool {
        let Some(q) = y.iter().map(|&v| from_f64(v)).collect::<Option<Vec<Rat>>>() else { return false };
        p.strictly_contains(&q)
    };
    if !interior(&y) {
        return Err(Error::Precondition("polytope has empty interior".into()));
    }
    let norm = |g: &[f64]| g.iter().map(|v| v * v).sum::<f64>().sqrt();
    for it in 0..SANTALO_MAX_ITER {
        let (g, h) = barrier.derivatives(&y);
        let hm = FloatMat::from_rows(&h, d)?;
        let neg: Vec<f64> = g.iter().map(|v| -v).collect();
        let step = hm.solve(&neg)?.ok_or_else(|| Error::Convergence { iterations: it, last: y.clone() })?;
        let dec2: f64 = -g.iter().zip(&step).map(|(a, b)| a * b).sum::<f64>();
        if dec2.max(0.0).sqrt() < tol {
            return Ok(SantaloPoint { grad_norm: norm(&g), y, iterations: it });
        }
        let f0 = barrier.value(&y);
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let cand: Vec<f64> = y.iter().zip(&step).map(|(a, b)| a + t * b).collect();
            if interior(&cand) && barrier.value(&cand) <= f0 - 0.25 * t * dec2 {
                y = cand;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            // Round-off floor: the decrement is as small as f64 allows.
            if dec2.sqrt() < 1e-6 {
                return Ok(SantaloPoint { grad_norm: norm(&g), y, iterations: it });
            }
            return Err(Error::Convergence { iterations: it, last: y });
        }
    }
    Err(Error::Convergence { iterations: SANTALO_MAX_ITER, last: y })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

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
    fn pentagon_adjoint_in_cone_order() {
        assert_eq!(adjoint_cone_order(&pentagon()), "x3*x4*x5 + x1*x4*x5 + x1*x2*x5 + x1*x2*x3 + x2*x3*x4");
        let a = adjoint(&pentagon());
        assert_eq!(a.num_terms(), 5);
        assert!(a.is_homogeneous() && a.total_degree() == Some(3));
    }

    #[test]
    fn amplitude_identity_and_homogeneity() {
        let f = pentagon();
        let x: Vec<Rat> = [2, 3, 5, 7, 11].iter().map(|&v| int(v)).collect();
        let amp = evaluate_amplitude(&f, &x).unwrap();
        let prod: Rat = x.iter().fold(Rat::one(), |a, b| a * b);
        assert_eq!(adjoint(&f).eval(&x).unwrap(), amp.clone() * prod);
        let x2: Vec<Rat> = x.iter().map(|v| v * int(3)).collect();
        assert_eq!(evaluate_amplitude(&f, &x2).unwrap(), amp / int(9));
        assert_eq!(evaluate_amplitude(&f, &vec![int(1); 5]).unwrap(), int(5));
        assert_eq!(
            evaluate_amplitude(&f, &[int(0), int(1), int(1), int(1), int(1)]),
            Err(Error::Pole(vec![0, 1]))
        );
    }

    #[test]
    fn scaled_square_adjoint() {
        let f = SimplicialFan::from_ints(2, &[&[3, 0], &[0, 1], &[-1, 0], &[0, -1]], &[
            &[0, 1],
            &[1, 2],
            &[2, 3],
            &[0, 3],
        ])
        .unwrap();
        assert_eq!(adjoint(&f).to_string(), "x1*x2 + x1*x4 + 3*x2*x3 + 3*x3*x4");
        assert_eq!(adjoint_cone_order(&f), "3*x3*x4 + x1*x4 + x1*x2 + 3*x2*x3");
    }

    #[test]
    fn square_restriction_at_first_ray() {
        let r = restrict_adjoint(&square(), &[0]).unwrap();
        assert_eq!(r.prefactor, vec![2]);
        assert_eq!(r.c_tau, int(1));
        assert_eq!(r.star_adjoint.to_string(), "x2 + x4");
    }

    #[test]
    fn restriction_at_full_cone() {
        let f = SimplicialFan::from_ints(2, &[&[2, 1], &[0, 1], &[-1, 0], &[0, -1]], &[
            &[0, 1],
            &[1, 2],
            &[2, 3],
            &[0, 3],
        ])
        .unwrap();
        let r = restrict_adjoint(&f, &[0, 1]).unwrap();
        assert_eq!(r.prefactor, vec![2, 3]);
        assert_eq!(r.star_adjoint.to_string(), "1");
        assert_eq!(Rat::one() / r.c_tau, int(2));
    }

    #[test]
    fn warren_pentagon() {
        let w = warren_adjoint(&pentagon(), &vec![int(1); 5]).unwrap();
        assert_eq!(w.poly.to_string(), "-y1*y2 - 3*y1 + 3*y2 + 5");
        assert_eq!(w.degree, Some(2));
    }

    #[test]
    fn vanishing_on_column_span() {
        assert!(vanishes_on_im_u(&pentagon()));
        assert!(vanishes_on_im_u(&square()));
        let three = square().max_cones()[..3].to_vec();
        let open = SimplicialFan::new(2, square().rays().clone(), three, None).unwrap();
        assert!(!vanishes_on_im_u(&open));
    }

    #[test]
    fn residue_of_square() {
        let r = residue(&square(), &[0]).unwrap();
        assert_eq!(r.inv_c, int(1));
        assert_eq!(r.star_amplitude.terms.len(), 2);
        assert_eq!(r.star_amplitude.to_string(), "1/(x2) + 1/(x4)");
        let full = residue(&square(), &[0, 1]).unwrap();
        assert_eq!(full.star_amplitude.evaluate(&[]).unwrap() * full.inv_c, int(1));
    }

    #[test]
    fn santalo_unit_square() {
        let p = HPolytope::from_ints(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]], &[0, 1, 0, 1]).unwrap();
        let s = santalo_point(&p, 1e-10).unwrap();
        assert!((s.y[0] - 0.5).abs() < 1e-8 && (s.y[1] - 0.5).abs() < 1e-8);
        assert!(s.grad_norm < 1e-8);
        let _ = rat(1, 2);
    }
}
