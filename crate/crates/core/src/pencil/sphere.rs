//! Minimization of `F(x) = <Ax,x> - <Bx,x>^κ` over the unit sphere of `C^n`.
//!
//! Riemannian gradient descent: the Euclidean gradient is projected onto the
//! tangent space, a Barzilai–Borwein trial step is backtracked until the Armijo
//! condition holds, and the iterate is renormalized to the sphere.

use crate::linalg::{CVector, ComplexMatrix, C64};

pub const MAX_ITERATIONS: usize = 500;
const REL_DECREASE: f64 = 1e-12;
const ARMIJO: f64 = 1e-4;

/// Quadratic-form objective on the sphere. `A`, `B` are Hermitian, `κ ≥ 1`.
#[derive(Debug, Clone)]
pub struct SphereProblem {
    a: ComplexMatrix,
    b: ComplexMatrix,
    kappa: f64,
    /// Below this value of `<Bx,x>` the power term is treated as zero.
    b_floor: f64,
}

#[derive(Debug, Clone)]
pub struct SphereMinimum {
    pub value: f64,
    pub argmin: CVector,
    pub converged: bool,
    pub evaluations: usize,
}

impl SphereProblem {
    pub fn new(a: ComplexMatrix, b: ComplexMatrix, kappa: f64, b_floor: f64) -> Self {
        assert!(kappa >= 1.0, "exponent must be >= 1");
        Self {
            a: a.hermitian_part(),
            b: b.hermitian_part(),
            kappa,
            b_floor,
        }
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    fn power_term(&self, bx: f64) -> f64 {
        if bx < self.b_floor {
            0.0
        } else {
            bx.powf(self.kappa)
        }
    }

    /// Objective at `x`, which is normalized first.
    pub fn value(&self, x: &CVector) -> f64 {
        let nrm = x.norm();
        let x = x / C64::new(nrm, 0.0);
        self.value_unit(&x)
    }

    fn value_unit(&self, x: &CVector) -> f64 {
        let ax = self.a.quadratic_form(x);
        let bx = self.b.quadratic_form(x);
        ax - self.power_term(bx)
    }

    /// Returns `(F(x), Riemannian gradient)` for unit `x`.
    fn value_and_gradient(&self, x: &CVector) -> (f64, CVector) {
        let ax_vec = self.a.mul_vec(x);
        let bx_vec = self.b.mul_vec(x);
        let ax = x.dotc(&ax_vec).re;
        let bx = x.dotc(&bx_vec).re;
        let (value, grad) = if bx < self.b_floor {
            (ax, ax_vec * C64::new(2.0, 0.0))
        } else {
            let coeff = self.kappa * bx.powf(self.kappa - 1.0);
            (
                ax - bx.powf(self.kappa),
                (ax_vec - bx_vec * C64::new(coeff, 0.0)) * C64::new(2.0, 0.0),
            )
        };
        let radial = x.dotc(&grad).re;
        let tangent = grad - x * C64::new(radial, 0.0);
        (value, tangent)
    }

    /// Local descent from one starting point.
    pub fn descend(&self, start: &CVector) -> SphereMinimum {
        let mut x = start / C64::new(start.norm(), 0.0);
        let (mut fx, mut g) = self.value_and_gradient(&x);
        let mut evaluations = 1;
        let mut step = 1.0;
        let mut prev: Option<(CVector, CVector)> = None;
        let mut converged = false;

        for _ in 0..MAX_ITERATIONS {
            let gnorm2 = g.norm_squared();
            if gnorm2 < 1e-28 {
                converged = true;
                break;
            }
            if let Some((px, pg)) = &prev {
                let s = &x - px;
                let y = &g - pg;
                let sy = s.dotc(&y).re;
                if sy > 1e-300 {
                    step = (s.norm_squared() / sy).clamp(1e-8, 1e4);
                }
            }
            let mut accepted = None;
            let mut t = step;
            for _ in 0..60 {
                let trial = &x - &g * C64::new(t, 0.0);
                let trial = &trial / C64::new(trial.norm(), 0.0);
                let ft = self.value_unit(&trial);
                evaluations += 1;
                if ft <= fx - ARMIJO * t * gnorm2 {
                    accepted = Some((trial, ft));
                    break;
                }
                t *= 0.5;
            }
            let Some((x_new, f_new)) = accepted else {
                // no descent possible at machine precision
                converged = true;
                break;
            };
            let decrease = fx - f_new;
            let (f_next, g_next) = self.value_and_gradient(&x_new);
            evaluations += 1;
            prev = Some((std::mem::replace(&mut x, x_new), std::mem::replace(&mut g, g_next)));
            fx = f_next;
            step = t;
            if decrease <= REL_DECREASE * fx.abs().max(1e-3) {
                converged = true;
                break;
            }
        }
        SphereMinimum {
            value: fx,
            argmin: x,
            converged,
            evaluations,
        }
    }

    /// Best local minimum over all starts; ties keep the earliest start.
    pub fn minimize<'a>(&self, starts: impl IntoIterator<Item = &'a CVector>) -> SphereMinimum {
        let mut best: Option<SphereMinimum> = None;
        let mut evaluations = 0;
        for start in starts {
            let local = self.descend(start);
            evaluations += local.evaluations;
            if best.as_ref().is_none_or(|b| local.value < b.value) {
                best = Some(local);
            }
        }
        let mut best = best.expect("at least one start");
        best.evaluations = evaluations;
        best
    }

    /// Plain minimum over sample points (no descent).
    pub fn sample_min<'a>(&self, points: impl IntoIterator<Item = &'a CVector>) -> Option<(f64, CVector)> {
        let mut best: Option<(f64, &CVector)> = None;
        for x in points {
            let v = self.value_unit(x);
            if best.is_none_or(|(b, _)| v < b) {
                best = Some((v, x));
            }
        }
        best.map(|(v, x)| (v, x.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pencil::qmc::SphereSequence;

    #[test]
    fn finds_rayleigh_minimum() {
        // κ = 1, B = 0: minimum of <Ax,x> is the smallest eigenvalue
        let a = ComplexMatrix::from_real_rows(&[&[2.0, 1.0, 0.0], &[1.0, 2.0, 0.0], &[0.0, 0.0, 5.0]]);
        let problem = SphereProblem::new(a, ComplexMatrix::zeros(3), 1.0, 1e-14);
        let starts: Vec<CVector> = SphereSequence::new(3, 1).take(8).collect();
        let best = problem.minimize(&starts);
        assert!((best.value - 1.0).abs() < 1e-9, "{}", best.value);
        assert!(best.converged);
    }

    #[test]
    fn commuting_diagonal_minimum_is_at_a_vertex() {
        // F = sum a_j w_j - (sum b_j w_j)^2 is concave in the weights w_j = |x_j|^2
        let a = ComplexMatrix::from_real_diagonal(&[1.0, 0.0, 4.0]);
        let b = ComplexMatrix::from_real_diagonal(&[1.0, 0.5, 2.0]);
        let problem = SphereProblem::new(a, b, 2.0, 1e-14);
        let starts: Vec<CVector> = SphereSequence::new(3, 4).take(16).collect();
        let best = problem.minimize(&starts);
        // vertices: 1-1 = 0, 0-0.25 = -0.25, 4-4 = 0
        assert!((best.value + 0.25).abs() < 1e-9, "{}", best.value);
        assert!(best.argmin[1].norm() > 1.0 - 1e-6);
    }
}
