use crate::error::{Error, Result};

use super::Grid1D;

/// Ion density, velocity and potential on the cells of a [`Grid1D`].
#[derive(Debug, Clone, PartialEq)]
pub struct PlasmaState {
    pub n: Vec<f64>,
    pub u1: Vec<f64>,
    pub u2: Vec<f64>,
    pub u3: Vec<f64>,
    pub phi: Vec<f64>,
    pub time: f64,
}

impl PlasmaState {
    /// Uniform state `(n, 0, 0, u3, phi)`.
    pub fn uniform(cells: usize, n: f64, u3: f64, phi: f64) -> Self {
        Self { n: vec![n; cells], u1: vec![0.0; cells], u2: vec![0.0; cells], u3: vec![u3; cells], phi: vec![phi; cells], time: 0.0 }
    }

    pub fn zeros(cells: usize) -> Self {
        Self::uniform(cells, 0.0, 0.0, 0.0)
    }

    pub fn len(&self) -> usize {
        self.n.len()
    }

    pub fn is_empty(&self) -> bool {
        self.n.is_empty()
    }

    /// Checks lengths, finiteness and positivity of the density.
    pub fn validate(&self, grid: &Grid1D) -> Result<()> {
        let m = grid.len();
        for (name, f) in self.fields() {
            if f.len() != m {
                return Err(Error::InvalidParameter { name: "state", reason: format!("field {name} has {} cells, grid has {m}", f.len()) });
            }
            if let Some(i) = f.iter().position(|v| !v.is_finite()) {
                return Err(Error::InvalidParameter { name: "state", reason: format!("field {name} is not finite at cell {i}") });
            }
        }
        if let Some((cell, &value)) = self.n.iter().enumerate().find(|(_, &v)| v <= 0.0) {
            return Err(Error::NegativeDensity { cell, value });
        }
        Ok(())
    }

    pub fn fields(&self) -> [(&'static str, &Vec<f64>); 5] {
        [("n", &self.n), ("u1", &self.u1), ("u2", &self.u2), ("u3", &self.u3), ("phi", &self.phi)]
    }

    /// Pointwise difference `self - other` (time taken from `self`).
    pub fn difference(&self, other: &PlasmaState) -> PlasmaState {
        let d = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x - y).collect::<Vec<_>>();
        PlasmaState {
            n: d(&self.n, &other.n),
            u1: d(&self.u1, &other.u1),
            u2: d(&self.u2, &other.u2),
            u3: d(&self.u3, &other.u3),
            phi: d(&self.phi, &other.phi),
            time: self.time,
        }
    }

    pub fn total_mass(&self, grid: &Grid1D) -> f64 {
        grid.integrate(&self.n)
    }
}
