use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical and asymptotic constants of a run.
///
/// The reference state is `(n_ref, u = (0, 0, w_ref))` with `w_ref < 0`
/// (flow towards the wall at `x3 = 0`). The wall potential is
/// `phi_b = phi_c + phi_ref` with `phi_ref = -ln n_ref`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Parameters {
    pub ion_temperature: f64,
    pub epsilon: f64,
    pub n_ref: f64,
    pub w_ref: f64,
    pub phi_c: f64,
    /// Boundary-layer amplitude `delta`.
    pub bl_amplitude: f64,
    /// Decay parameter `mu` of the convective weight.
    pub weight_mu: f64,
    /// Uniform decay rate `gamma0` of the layer profiles.
    pub gamma0: f64,
    /// Order `K` of the expansion; only 0 and 1 are built.
    pub expansion_order: u32,
    pub final_time: f64,
}

impl Default for Parameters {
    fn default() -> Self {
        Self {
            ion_temperature: 1.0,
            epsilon: 0.01,
            n_ref: 1.0,
            w_ref: -2.0,
            phi_c: 0.05,
            bl_amplitude: 0.05,
            weight_mu: 0.75,
            gamma0: 0.8,
            expansion_order: 1,
            final_time: 0.1,
        }
    }
}

/// Largest `delta / mu^2` for which `1/2 <= eta <= 2` is guaranteed.
pub const MAX_WEIGHT_RATIO: f64 = 0.1;

impl Parameters {
    pub fn validate(&self) -> Result<()> {
        let bad = |name: &'static str, reason: &str| Err(Error::InvalidParameter { name, reason: reason.to_string() });
        let finite = [
            self.ion_temperature,
            self.epsilon,
            self.n_ref,
            self.w_ref,
            self.phi_c,
            self.bl_amplitude,
            self.weight_mu,
            self.gamma0,
            self.final_time,
        ];
        if finite.iter().any(|v| !v.is_finite()) {
            return bad("parameters", "all values must be finite");
        }
        if self.ion_temperature <= 0.0 {
            return bad("ion_temperature", "must be > 0");
        }
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return bad("epsilon", "must lie in (0, 1]");
        }
        if self.n_ref <= 0.0 {
            return bad("n_ref", "must be > 0");
        }
        if self.w_ref >= 0.0 {
            return bad("w_ref", "must be < 0");
        }
        if self.bl_amplitude < 0.0 {
            return bad("bl_amplitude", "must be >= 0");
        }
        if self.weight_mu <= 0.0 {
            return bad("weight_mu", "must be > 0");
        }
        if self.gamma0 <= 0.0 {
            return bad("gamma0", "must be > 0");
        }
        if self.expansion_order > 1 {
            return bad("expansion_order", "only orders 0 and 1 are supported");
        }
        if self.final_time <= 0.0 {
            return bad("final_time", "must be > 0");
        }
        if self.weight_ratio() > MAX_WEIGHT_RATIO {
            return bad("weight_mu", "bl_amplitude / weight_mu^2 must not exceed 0.1");
        }
        if !self.phi_b().is_finite() {
            return bad("phi_c", "wall potential is not finite");
        }
        Ok(())
    }

    pub fn phi_ref(&self) -> f64 {
        -self.n_ref.ln()
    }

    pub fn phi_b(&self) -> f64 {
        self.phi_c + self.phi_ref()
    }

    pub fn weight_ratio(&self) -> f64 {
        self.bl_amplitude / (self.weight_mu * self.weight_mu)
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid() {
        Parameters::default().validate().unwrap();
    }

    #[test]
    fn wall_potential() {
        let p = Parameters { n_ref: 2.0, phi_c: 0.1, ..Default::default() };
        assert!((p.phi_b() - (0.1 - 2f64.ln())).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_values() {
        let base = Parameters::default();
        for p in [
            Parameters { ion_temperature: 0.0, ..base },
            Parameters { epsilon: 1.5, ..base },
            Parameters { epsilon: 0.0, ..base },
            Parameters { n_ref: -1.0, ..base },
            Parameters { w_ref: 0.5, ..base },
            Parameters { expansion_order: 2, ..base },
            Parameters { bl_amplitude: 0.5, weight_mu: 0.5, ..base },
            Parameters { final_time: f64::NAN, ..base },
        ] {
            assert!(p.validate().is_err(), "{p:?}");
        }
    }
}
