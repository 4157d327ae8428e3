use super::{FarFieldBc, SolverConfig};
use crate::error::{Error, Result};
use crate::model::{Grid1D, Parameters};
use crate::numerics::tridiag;

/// Wall potential and the reference potential used by
/// [`FarFieldBc::ReferenceState`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonBc {
    pub phi_b: f64,
    pub phi_ref: f64,
}

impl PoissonBc {
    pub fn from_params(p: &Parameters) -> Self {
        Self { phi_b: p.phi_b(), phi_ref: p.phi_ref() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoissonSolution {
    pub phi: Vec<f64>,
    pub iterations: usize,
    /// Max-norm residual of the discrete equation at the returned `phi`.
    pub residual: f64,
    /// Potential on the far face.
    pub phi_far: f64,
}

/// Second-difference stencil on cell centres with Dirichlet values on the
/// two end faces: row `i` reads `lo[i] phi[i-1] + di[i] phi[i] + up[i] phi[i+1]`,
/// where the missing neighbours of the end cells are the face values.
pub(crate) struct Laplacian {
    pub lo: Vec<f64>,
    pub di: Vec<f64>,
    pub up: Vec<f64>,
}

impl Laplacian {
    pub fn new(grid: &Grid1D) -> Self {
        let x = grid.centers();
        let m = x.len();
        let (mut lo, mut di, mut up) = (vec![0.0; m], vec![0.0; m], vec![0.0; m]);
        for i in 0..m {
            let a = if i == 0 { x[0] } else { x[i] - x[i - 1] };
            let b = if i + 1 == m { grid.length() - x[i] } else { x[i + 1] - x[i] };
            lo[i] = 2.0 / (a * (a + b));
            up[i] = 2.0 / (b * (a + b));
            di[i] = -2.0 / (a * b);
        }
        Self { lo, di, up }
    }

    /// `D2 phi` with face values `left` and `right`.
    pub fn apply(&self, phi: &[f64], left: f64, right: f64) -> Vec<f64> {
        let m = phi.len();
        (0..m)
            .map(|i| {
                let l = if i == 0 { left } else { phi[i - 1] };
                let r = if i + 1 == m { right } else { phi[i + 1] };
                self.lo[i] * l + self.di[i] * phi[i] + self.up[i] * r
            })
            .collect()
    }
}

fn residual(lap: &Laplacian, eps2: f64, phi: &[f64], n: &[f64], left: f64, right: f64) -> Vec<f64> {
    lap.apply(phi, left, right).iter().zip(phi).zip(n).map(|((d2, p), n)| eps2 * d2 + (-p).exp() - n).collect()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, b| a.max(b.abs()))
}

/// Solves `eps^2 D2 phi + e^{-phi} = n` with `phi = phi_b` on the wall face
/// and the far-face value chosen by `cfg.far_field_bc`.
///
/// Newton's method with the tridiagonal Jacobian `eps^2 D2 - diag(e^{-phi})`,
/// which is negative definite, and a backtracking line search on the
/// max-norm residual. Stops when the residual drops below `cfg.newton_tol`,
/// or below the rounding floor of `eps^2 D2 phi` when that is larger.
/// Starts from `guess`, or from `-ln n`.
pub fn newton_poisson(
    n: &[f64],
    grid: &Grid1D,
    eps: f64,
    bc: &PoissonBc,
    cfg: &SolverConfig,
    guess: Option<&[f64]>,
) -> Result<PoissonSolution> {
    let m = grid.len();
    assert_eq!(n.len(), m);
    if let Some(cell) = n.iter().position(|v| !(*v > 0.0)) {
        return Err(Error::NonPositiveDensity { cell });
    }
    let phi_far = match cfg.far_field_bc {
        FarFieldBc::QuasineutralDirichlet => -n[m - 1].ln(),
        FarFieldBc::ReferenceState => bc.phi_ref,
    };
    let eps2 = eps * eps;
    let lap = Laplacian::new(grid);
    let mut phi: Vec<f64> = match guess {
        Some(g) => g.to_vec(),
        None => n.iter().map(|v| -v.ln()).collect(),
    };
    let mut g = residual(&lap, eps2, &phi, n, bc.phi_b, phi_far);
    let mut norm = max_abs(&g);
    let scale = (0..m).map(|i| lap.lo[i] + lap.up[i] - lap.di[i]).fold(0.0, f64::max) * eps2;
    let floor = |phi: &[f64]| 64.0 * f64::EPSILON * scale * (max_abs(phi).max(bc.phi_b.abs()).max(phi_far.abs()) + 1.0);
    let mut iterations = 0;
    while norm >= cfg.newton_tol.max(floor(&phi)) {
        if iterations == cfg.newton_max_iter {
            return Err(Error::NewtonDivergence { iterations, residual: norm });
        }
        iterations += 1;
        let lower: Vec<f64> = lap.lo.iter().map(|v| eps2 * v).collect();
        let upper: Vec<f64> = lap.up.iter().map(|v| eps2 * v).collect();
        let diag: Vec<f64> = lap.di.iter().zip(&phi).map(|(d, p)| eps2 * d - (-p).exp()).collect();
        let rhs: Vec<f64> = g.iter().map(|v| -v).collect();
        let step = tridiag::solve(&lower, &diag, &upper, &rhs)?;
        let mut lambda = 1.0;
        loop {
            let trial: Vec<f64> = phi.iter().zip(&step).map(|(p, s)| p + lambda * s).collect();
            let gt = residual(&lap, eps2, &trial, n, bc.phi_b, phi_far);
            let nt = max_abs(&gt);
            if nt < norm || lambda < 1e-4 {
                phi = trial;
                g = gt;
                norm = nt;
                break;
            }
            lambda *= 0.5;
        }
        if !norm.is_finite() {
            return Err(Error::NewtonDivergence { iterations, residual: norm });
        }
    }
    Ok(PoissonSolution { phi, iterations, residual: norm, phi_far })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build_grid;

    fn cfg() -> SolverConfig {
        SolverConfig::default()
    }

    #[test]
    fn neutral_constant_state_is_exact() {
        let g = Grid1D::uniform(1.0, 100).unwrap();
        let phi_b: f64 = 0.3;
        let n = vec![(-phi_b).exp(); 100];
        let bc = PoissonBc { phi_b, phi_ref: phi_b };
        for far in [FarFieldBc::QuasineutralDirichlet, FarFieldBc::ReferenceState] {
            let c = SolverConfig { far_field_bc: far, ..cfg() };
            let s = newton_poisson(&n, &g, 0.01, &bc, &c, None).unwrap();
            assert!(s.phi.iter().all(|p| (p - phi_b).abs() < 1e-12));
            assert!(s.residual < 1e-12);
        }
    }

    fn manufactured(cells: usize, eps: f64) -> f64 {
        let g = Grid1D::uniform(1.0, cells).unwrap();
        let phi_b = 0.5;
        let exact = |x: f64| phi_b * (-x).exp();
        let n: Vec<f64> = g.centers().iter().map(|&x| eps * eps * exact(x) + (-exact(x)).exp()).collect();
        // the far value -ln n(L) is not phi*(L); pin the reference instead
        let bc = PoissonBc { phi_b, phi_ref: exact(1.0) };
        let c = SolverConfig { far_field_bc: FarFieldBc::ReferenceState, ..cfg() };
        let s = newton_poisson(&n, &g, eps, &bc, &c, None).unwrap();
        s.phi.iter().zip(g.centers()).map(|(p, &x)| (p - exact(x)).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn manufactured_solution_second_order() {
        for eps in [1.0, 0.1] {
            let e: Vec<f64> = [80, 160, 320].iter().map(|&m| manufactured(m, eps)).collect();
            for w in e.windows(2) {
                let order = (w[0] / w[1]).log2();
                assert!((order - 2.0).abs() < 0.2, "eps = {eps}: {e:?}");
            }
        }
    }

    #[test]
    fn quasineutral_away_from_the_wall() {
        let eps = 1e-3;
        let g = build_grid(1.0, eps, 1.0, 1e-3).unwrap();
        let n: Vec<f64> = g.centers().iter().map(|x| 1.0 + 0.3 * (2.0 * x).sin()).collect();
        let bc = PoissonBc { phi_b: 0.4, phi_ref: 0.0 };
        let s = newton_poisson(&n, &g, eps, &bc, &cfg(), None).unwrap();
        let cut = 10.0 * eps * eps.ln().abs();
        let worst = g
            .centers()
            .iter()
            .zip(&s.phi)
            .zip(&n)
            .filter(|((x, _), _)| **x > cut)
            .map(|((_, p), n)| (p + n.ln()).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-3, "{worst}");
    }

    #[test]
    fn warm_start_converges_quickly() {
        let g = build_grid(1.5, 0.01, 0.8, 1e-3).unwrap();
        let n: Vec<f64> = g.centers().iter().map(|x| 1.0 + 0.1 * (-x / 0.01).exp()).collect();
        let bc = PoissonBc { phi_b: 0.05, phi_ref: 0.0 };
        let cold = newton_poisson(&n, &g, 0.01, &bc, &cfg(), None).unwrap();
        let n2: Vec<f64> = n.iter().map(|v| v * (1.0 + 1e-4)).collect();
        let warm = newton_poisson(&n2, &g, 0.01, &bc, &cfg(), Some(&cold.phi)).unwrap();
        assert!(warm.iterations <= 3, "{}", warm.iterations);
    }

    #[test]
    fn rejects_non_positive_density() {
        let g = Grid1D::uniform(1.0, 10).unwrap();
        let mut n = vec![1.0; 10];
        n[4] = 0.0;
        let bc = PoissonBc { phi_b: 0.0, phi_ref: 0.0 };
        assert!(matches!(newton_poisson(&n, &g, 0.1, &bc, &cfg(), None), Err(Error::NonPositiveDensity { cell: 4 })));
    }

    #[test]
    fn iteration_cap_is_reported() {
        let g = Grid1D::uniform(1.0, 50).unwrap();
        let n = vec![2.0; 50];
        let bc = PoissonBc { phi_b: 3.0, phi_ref: 0.0 };
        let c = SolverConfig { newton_max_iter: 1, ..cfg() };
        assert!(matches!(newton_poisson(&n, &g, 0.01, &bc, &c, None), Err(Error::NewtonDivergence { .. })));
    }
}
