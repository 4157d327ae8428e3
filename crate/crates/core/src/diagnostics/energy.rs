use serde::{Deserialize, Serialize};

use super::weight::WeightFn;
use crate::error::{Error, Result};
use crate::model::{Grid1D, PlasmaState};

/// Below this `|phi|` the removable singularity of `h0` is bridged by its
/// Taylor series.
const H0_SERIES_BELOW: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HChoice {
    /// `h0(phi) = -(e^{-phi} - 1 + phi) / phi`, for the undifferentiated unknowns.
    H0,
    /// `h1(phi) = e^{-phi} - 1`, for derivatives.
    H1,
}

pub fn h0(phi: f64) -> f64 {
    if phi.abs() < H0_SERIES_BELOW {
        -phi * (0.5 - phi * (1.0 / 6.0 - phi * (1.0 / 24.0 - phi / 120.0)))
    } else {
        -((-phi).exp_m1() + phi) / phi
    }
}

pub fn h1(phi: f64) -> f64 {
    (-phi).exp_m1()
}

impl HChoice {
    pub fn eval(self, phi: f64) -> f64 {
        match self {
            HChoice::H0 => h0(phi),
            HChoice::H1 => h1(phi),
        }
    }
}

/// Weighted energy of a perturbation `(n, u, phi)` around a background
/// `(n_a, u_a, phi_a)`:
///
/// ```text
/// int eta [ (n_a + n)|u|^2/2 + Ti n^2/(2(n_a + n)) + eps^2 |d3 phi|^2/2
///           + e^{-phi_a}(1 + h(phi)) phi^2/2 ]
/// ```
///
/// by the midpoint rule on cells; the gradient term lives on interior faces.
pub fn weighted_energy_a(pert: &PlasmaState, background: &PlasmaState, grid: &Grid1D, ti: f64, w: &WeightFn, h: HChoice) -> Result<f64> {
    let x = grid.centers();
    let dx = grid.widths();
    let mut total = 0.0;
    for i in 0..grid.len() {
        let n = background.n[i] + pert.n[i];
        if n <= 0.0 {
            return Err(Error::NegativeDensity { cell: i, value: n });
        }
        let sym = (-background.phi[i]).exp() * (1.0 + h.eval(pert.phi[i]));
        if sym <= 0.0 {
            return Err(Error::NonPositiveSymmetrizer { cell: i, value: sym });
        }
        let u2 = pert.u1[i].powi(2) + pert.u2[i].powi(2) + pert.u3[i].powi(2);
        let density = 0.5 * (n * u2 + ti * pert.n[i].powi(2) / n + sym * pert.phi[i].powi(2));
        total += w.eval_all(x[i]).0 * density * dx[i];
    }
    let eps2 = w.eps * w.eps;
    for i in 0..grid.len().saturating_sub(1) {
        let gap = x[i + 1] - x[i];
        let slope = (pert.phi[i + 1] - pert.phi[i]) / gap;
        let eta = w.eval_all(grid.faces()[i + 1]).0;
        total += 0.5 * eta * eps2 * slope * slope * gap;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flat() -> (Grid1D, PlasmaState) {
        let g = Grid1D::uniform(1.5, 300).unwrap();
        let bg = PlasmaState::uniform(300, 1.0, -2.0, 0.0);
        (g, bg)
    }

    #[test]
    fn zero_perturbation_has_zero_energy() {
        let (g, bg) = flat();
        let w = WeightFn::new(0.05, 0.75, 0.01);
        let e = weighted_energy_a(&PlasmaState::zeros(300), &bg, &g, 1.0, &w, HChoice::H0).unwrap();
        assert_eq!(e, 0.0);
    }

    #[test]
    fn constant_potential_closed_form() {
        let (g, bg) = flat();
        let w = WeightFn::new(0.0, 0.75, 0.01);
        let c = 0.3;
        let mut p = PlasmaState::zeros(300);
        p.phi.fill(c);
        for h in [HChoice::H0, HChoice::H1] {
            let e = weighted_energy_a(&p, &bg, &g, 1.0, &w, h).unwrap();
            let expect = 0.5 * c * c * (1.0 + h.eval(c)) * 1.5;
            assert!((e - expect).abs() < 1e-13 * expect);
        }
    }

    #[test]
    fn kinetic_and_pressure_terms() {
        let (g, bg) = flat();
        let w = WeightFn::new(0.0, 0.75, 0.01);
        let mut p = PlasmaState::zeros(300);
        p.u3.fill(0.1);
        p.u1.fill(0.2);
        p.n.fill(0.5);
        let e = weighted_energy_a(&p, &bg, &g, 2.0, &w, HChoice::H0).unwrap();
        let expect = 0.5 * (1.5 * 0.05 + 2.0 * 0.25 / 1.5) * 1.5;
        assert!((e - expect).abs() < 1e-13);
    }

    #[test]
    fn h0_series_joins_the_formula() {
        let phi = 0.999_999e-6f64;
        let s = h0(phi);
        let f = -((-phi).exp_m1() + phi) / phi;
        assert!((s / f - 1.0).abs() < 1e-8);
        // slope at 0 is -1/2
        let small = h0(1e-8);
        let extrapolated = h0(1e-3) * 1e-5 / (1.0 - 1e-3 / 3.0 + 1e-6 / 12.0);
        assert!((small / extrapolated - 1.0).abs() < 1e-8);
        assert_eq!(h0(0.0), 0.0);
    }

    #[test]
    fn symmetrizer_must_stay_positive() {
        let (g, bg) = flat();
        let w = WeightFn::new(0.05, 0.75, 0.01);
        let mut p = PlasmaState::zeros(300);
        p.phi[10] = 800.0;
        let r = weighted_energy_a(&p, &bg, &g, 1.0, &w, HChoice::H1);
        assert!(matches!(r, Err(Error::NonPositiveSymmetrizer { cell: 10, .. })));
    }
}
