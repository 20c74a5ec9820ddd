//! Log-barrier Newton method over `{σ ⪰ 0, σ^Γ ⪰ 0, Tr σ = 1}`.
//!
//! σ is parametrised as `I/d + Σ x_k B_k` with `B_k` an orthonormal basis of
//! traceless Hermitian matrices, so the trace constraint is built in. Each stage
//! minimises `f(σ) − μ (ln det σ + ln det σ^Γ)` by damped Newton steps; μ shrinks
//! tenfold per stage. Both cones have barrier parameter `d`, so a centred point
//! is within `2 d μ` of the optimum.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::Result;
use crate::qla::{herm_eig_unchecked, herm_eigvals_unchecked, rel_entropy, CMatrix};
use crate::states::{random_mixed, RandomSpec};

use super::{pt_right, BipartiteView, Bipartition, Method, OptimizerConfig, OptimizerReport};
use crate::states::DensityMatrix;

type M = DMatrix<Complex64>;

const ARMIJO: f64 = 1e-4;
const NEWTON_TOL: f64 = 1e-13;
const MAX_HALVINGS: usize = 60;

/// Relative entropy of entanglement with respect to the PPT set, in bits.
pub fn ree_ppt(
    rho: &DensityMatrix,
    cut: &Bipartition,
    cfg: &OptimizerConfig,
) -> Result<OptimizerReport> {
    let view = BipartiteView::new(rho, cut)?;
    if is_ppt(&view) {
        return Ok(OptimizerReport::exact(0.0, Method::Feasible, Some(view.mat)));
    }
    let target = cfg.tol.max(1e-8);
    let out = solve(&view, Objective::RelEntropy, target * std::f64::consts::LN_2, cfg)?;
    let value = rel_entropy(&view.mat, &out.sigma)?;
    let residual = out.gap / std::f64::consts::LN_2;
    Ok(OptimizerReport {
        value,
        iterations: out.iterations,
        converged: out.centred && residual <= 10.0 * target,
        residual,
        method: Method::BarrierNewton,
        closest: Some(out.sigma),
        basis: None,
    })
}

/// Hilbert-Schmidt distance to the PPT set by the same barrier method.
pub(crate) fn hs_distance_barrier(
    view: &BipartiteView,
    cfg: &OptimizerConfig,
) -> Result<OptimizerReport> {
    if is_ppt(view) {
        return Ok(OptimizerReport::exact(0.0, Method::Feasible, Some(view.mat.clone())));
    }
    // gap on ½‖ρ−σ‖²
    let target = 1e-14;
    let out = solve(view, Objective::HalfHs, target, cfg)?;
    let v = (&view.mat - &out.sigma).frobenius();
    let lower = (v * v - 2.0 * out.gap).max(0.0).sqrt();
    let residual = v - lower;
    Ok(OptimizerReport {
        value: v,
        iterations: out.iterations,
        converged: out.centred,
        residual,
        method: Method::BarrierNewton,
        closest: Some(out.sigma),
        basis: None,
    })
}

pub(crate) fn is_ppt(view: &BipartiteView) -> bool {
    herm_eigvals_unchecked(&view.gamma(&view.mat))[0] >= 0.0
}

#[derive(Clone, Copy, PartialEq)]
enum Objective {
    /// `−Tr ρ ln σ` (nats).
    RelEntropy,
    /// `½ ‖ρ − σ‖²`.
    HalfHs,
}

struct Outcome {
    sigma: CMatrix,
    gap: f64,
    iterations: usize,
    centred: bool,
}

/// Orthonormal traceless Hermitian coordinates.
struct Coords {
    d: usize,
}

impl Coords {
    fn n(&self) -> usize {
        self.d * self.d - 1
    }

    fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let d = self.d;
        (0..d).flat_map(move |j| (j + 1..d).map(move |k| (j, k)))
    }

    fn coords(&self, m: &M) -> Vec<f64> {
        let s2 = std::f64::consts::SQRT_2;
        let mut x = Vec::with_capacity(self.n());
        for (j, k) in self.pairs() {
            let z = m[(j, k)];
            x.push(s2 * z.re);
            x.push(-s2 * z.im);
        }
        let mut prefix = 0.0;
        for mm in 1..self.d {
            prefix += m[(mm - 1, mm - 1)].re;
            let norm = ((mm * (mm + 1)) as f64).sqrt();
            x.push((prefix - mm as f64 * m[(mm, mm)].re) / norm);
        }
        x
    }

    fn matrix(&self, x: &[f64]) -> M {
        let d = self.d;
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut m = M::zeros(d, d);
        let mut idx = 0;
        for (j, k) in self.pairs() {
            let (s, a) = (x[idx], x[idx + 1]);
            idx += 2;
            m[(j, k)] = Complex64::new(s * h, -a * h);
            m[(k, j)] = Complex64::new(s * h, a * h);
        }
        for mm in 1..d {
            let c = x[idx] / ((mm * (mm + 1)) as f64).sqrt();
            idx += 1;
            for j in 0..mm {
                m[(j, j)].re += c;
            }
            m[(mm, mm)].re -= mm as f64 * c;
        }
        m
    }

    fn basis(&self, k: usize) -> M {
        let mut e = vec![0.0; self.n()];
        e[k] = 1.0;
        self.matrix(&e)
    }
}

/// `(ln a − ln b)/(a − b)`.
fn f1(a: f64, b: f64) -> f64 {
    let s = a + b;
    let x = (a - b) / s;
    if x.abs() < 0.1 {
        let x2 = x * x;
        // atanh(x)/x
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..9 {
            term *= x2;
            sum += term / (2 * k + 1) as f64;
        }
        sum * 2.0 / s
    } else {
        (a.ln() - b.ln()) / (a - b)
    }
}

/// Second divided difference of `ln`.
fn f2(a: f64, b: f64, c: f64) -> f64 {
    let mut v = [a, b, c];
    v.sort_by(|p, q| q.total_cmp(p));
    let [x, y, z] = v;
    let m = (x + y + z) / 3.0;
    if x - z <= 1e-4 * m {
        -1.0 / (2.0 * m * m)
    } else {
        (f1(x, y) - f1(y, z)) / (x - z)
    }
}

struct Point {
    sigma: M,
    lam: Vec<f64>,
    v: M,
    tau_lam: Vec<f64>,
    tau_v: M,
    /// `V† ρ V`.
    r: M,
    value: f64,
}

struct Problem<'a> {
    rho: &'a M,
    dl: usize,
    dr: usize,
    obj: Objective,
    coords: Coords,
}

fn eig(m: &M) -> (Vec<f64>, M) {
    let e = herm_eig_unchecked(&CMatrix(m.clone()));
    (e.eigenvalues, e.eigenvectors.0)
}

fn scaled(v: &M, f: impl Fn(usize) -> f64) -> M {
    // V diag(f) V†
    let mut left = v.clone();
    for (k, mut col) in left.column_iter_mut().enumerate() {
        col *= Complex64::new(f(k), 0.0);
    }
    &left * v.adjoint()
}

impl Problem<'_> {
    fn gamma(&self, x: &M) -> M {
        pt_right(&CMatrix(x.clone()), self.dl, self.dr).0
    }

    fn eval(&self, sigma: M, mu: f64) -> Option<Point> {
        let (lam, v) = eig(&sigma);
        if lam[0] <= 0.0 {
            return None;
        }
        let (tau_lam, tau_v) = eig(&self.gamma(&sigma));
        if tau_lam[0] <= 0.0 {
            return None;
        }
        let r = v.adjoint() * self.rho * &v;
        let fid = match self.obj {
            Objective::RelEntropy => -(0..lam.len()).map(|i| r[(i, i)].re * lam[i].ln()).sum::<f64>(),
            Objective::HalfHs => 0.5 * (self.rho - &sigma).norm_squared(),
        };
        let logdet: f64 = lam.iter().chain(&tau_lam).map(|l| l.ln()).sum();
        let value = fid - mu * logdet;
        value.is_finite().then_some(Point {
            sigma,
            lam,
            v,
            tau_lam,
            tau_v,
            r,
            value,
        })
    }

    fn gradient(&self, p: &Point, mu: f64) -> Vec<f64> {
        let d = p.lam.len();
        let mut g = match self.obj {
            Objective::RelEntropy => {
                let mut l = p.r.clone();
                for i in 0..d {
                    for j in 0..d {
                        l[(i, j)] *= f1(p.lam[i], p.lam[j]);
                    }
                }
                -(&p.v * l * p.v.adjoint())
            }
            Objective::HalfHs => &p.sigma - self.rho,
        };
        let s_inv = scaled(&p.v, |k| 1.0 / p.lam[k]);
        let t_inv = scaled(&p.tau_v, |k| 1.0 / p.tau_lam[k]);
        g -= (s_inv + self.gamma(&t_inv)) * Complex64::new(mu, 0.0);
        self.coords.coords(&g)
    }

    fn hessian(&self, p: &Point, mu: f64) -> DMatrix<f64> {
        let d = p.lam.len();
        let n = self.coords.n();
        let s_inv = scaled(&p.v, |k| 1.0 / p.lam[k]);
        let t_inv = scaled(&p.tau_v, |k| 1.0 / p.tau_lam[k]);
        let t2 = if self.obj == Objective::RelEntropy {
            let mut t = vec![0.0; d * d * d];
            for a in 0..d {
                for b in 0..d {
                    for c in 0..d {
                        t[(a * d + b) * d + c] = f2(p.lam[a], p.lam[b], p.lam[c]);
                    }
                }
            }
            t
        } else {
            Vec::new()
        };
        let mut h = DMatrix::<f64>::zeros(n, n);
        let vh = p.v.adjoint();
        let mu_c = Complex64::new(mu, 0.0);
        for l in 0..n {
            let x = self.coords.basis(l);
            let mut hx = (&s_inv * &x * &s_inv + self.gamma(&(&t_inv * self.gamma(&x) * &t_inv))) * mu_c;
            match self.obj {
                Objective::RelEntropy => {
                    let xt = &vh * &x * &p.v;
                    let mut m = M::zeros(d, d);
                    for b in 0..d {
                        for c in 0..d {
                            let mut acc = Complex64::new(0.0, 0.0);
                            for a in 0..d {
                                let w = t2[(a * d + b) * d + c];
                                acc += (p.r[(b, a)] * xt[(a, c)] + xt[(b, a)] * p.r[(a, c)]) * w;
                            }
                            m[(b, c)] = -acc;
                        }
                    }
                    hx += &p.v * m * &vh;
                }
                Objective::HalfHs => hx += &x,
            }
            let col = self.coords.coords(&hx);
            for (k, val) in col.into_iter().enumerate() {
                h[(k, l)] = val;
            }
        }
        (&h + h.transpose()) * 0.5
    }
}

fn newton_direction(h: &DMatrix<f64>, g: &[f64]) -> Vec<f64> {
    let n = g.len();
    let rhs = nalgebra::DVector::from_iterator(n, g.iter().map(|x| -x));
    let scale = (0..n).map(|i| h[(i, i)].abs()).fold(0.0, f64::max).max(1e-300);
    let mut shift = 0.0;
    loop {
        let mut hs = h.clone();
        for i in 0..n {
            hs[(i, i)] += shift;
        }
        if let Some(ch) = hs.cholesky() {
            return ch.solve(&rhs).iter().copied().collect();
        }
        shift = if shift == 0.0 { 1e-14 * scale } else { shift * 10.0 };
    }
}

fn start_point(view: &BipartiteView, cfg: &OptimizerConfig) -> Result<M> {
    let d = view.dim();
    let id = M::identity(d, d) * Complex64::new(1.0 / d as f64, 0.0);
    let mut s0 = if cfg.random_start {
        let w = random_mixed(&view.shape(), RandomSpec::ginibre(cfg.seed))?;
        (&view.mat.0 + &id + &w.mat().0) * Complex64::new(1.0 / 3.0, 0.0)
    } else {
        (&view.mat.0 + &id) * Complex64::new(0.5, 0.0)
    };
    let margin = 0.1 / d as f64;
    let e = herm_eigvals_unchecked(&pt_right(&CMatrix(s0.clone()), view.dl, view.dr))[0];
    if e < margin {
        let s = (margin - e) / (1.0 / d as f64 - e);
        s0 = s0 * Complex64::new(1.0 - s, 0.0) + &id * Complex64::new(s, 0.0);
    }
    Ok(s0)
}

fn solve(view: &BipartiteView, obj: Objective, target_gap: f64, cfg: &OptimizerConfig) -> Result<Outcome> {
    let d = view.dim();
    let nu = 2.0 * d as f64;
    let prob = Problem {
        rho: &view.mat.0,
        dl: view.dl,
        dr: view.dr,
        obj,
        coords: Coords { d },
    };
    let mu_final = target_gap / nu;
    let mut mu = match obj {
        Objective::RelEntropy => 0.1_f64,
        Objective::HalfHs => 1e-3,
    }
    .max(mu_final);
    let mut point = prob
        .eval(start_point(view, cfg)?, mu)
        .expect("start point is strictly feasible");
    let mut iterations = 0;
    let mut last_dec = f64::INFINITY;
    loop {
        // re-evaluate the barrier at the new μ
        point = prob.eval(point.sigma.clone(), mu).expect("iterate stays feasible");
        let mut centred = false;
        while iterations < cfg.max_iters {
            let g = prob.gradient(&point, mu);
            let h = prob.hessian(&point, mu);
            let dx = newton_direction(&h, &g);
            let slope: f64 = g.iter().zip(&dx).map(|(a, b)| a * b).sum();
            last_dec = (-slope).max(0.0);
            if last_dec / 2.0 <= NEWTON_TOL {
                centred = true;
                break;
            }
            iterations += 1;
            let step = prob.coords.matrix(&dx);
            let mut t = 1.0;
            let mut next = None;
            for _ in 0..MAX_HALVINGS {
                let trial = &point.sigma + &step * Complex64::new(t, 0.0);
                if let Some(p) = prob.eval(trial, mu) {
                    if p.value <= point.value + ARMIJO * t * slope {
                        next = Some(p);
                        break;
                    }
                }
                t *= 0.5;
            }
            match next {
                Some(p) => point = p,
                None => {
                    // no progress possible at working precision
                    centred = last_dec < 1e-9;
                    break;
                }
            }
        }
        if mu <= mu_final || iterations >= cfg.max_iters {
            let gap = nu * mu + last_dec.min(1.0);
            return Ok(Outcome {
                sigma: CMatrix(point.sigma.clone()).hermitian_part(),
                gap,
                iterations,
                centred: centred && iterations < cfg.max_iters,
            });
        }
        mu = (mu / 10.0).max(mu_final);
    }
}
