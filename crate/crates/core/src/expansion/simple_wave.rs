use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Compactly supported bump `(1 - r^2)^8`, `r = (x - center)/width`, of class `C^7`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bump {
    pub center: f64,
    pub width: f64,
    pub amplitude: f64,
}

impl Bump {
    pub fn none() -> Self {
        Self { center: 0.0, width: 1.0, amplitude: 0.0 }
    }

    /// Value and first derivative in `x`.
    pub fn eval(&self, x: f64) -> (f64, f64) {
        let r = (x - self.center) / self.width;
        if self.amplitude == 0.0 || r.abs() >= 1.0 {
            return (0.0, 0.0);
        }
        let q = 1.0 - r * r;
        let q7 = q.powi(7);
        let b = q7 * q;
        let db = -16.0 * r * q7 / self.width;
        (self.amplitude * b, self.amplitude * db)
    }

    /// `max |d/dx|` of the bump, by sampling.
    pub fn max_slope(&self) -> f64 {
        (0..=2000).map(|k| self.eval(self.center - self.width + 2.0 * self.width * k as f64 / 2000.0).1.abs()).fold(0.0, f64::max)
    }
}

/// Leading-order regular fields and their `x3` derivatives at one point.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RegularSample {
    pub n: f64,
    pub u3: f64,
    pub phi: f64,
    pub dn: f64,
    pub du3: f64,
    pub dphi: f64,
}

/// A solution `(n0, u0, phi0 = -ln n0)` of the quasineutral limit system.
pub trait LeadingOrder: Sync {
    fn sample(&self, t: f64, x3: f64) -> RegularSample;
}

/// Exact simple wave of the slow family `u - c` of the isothermal Euler
/// system with sound speed `c = sqrt(Ti + 1)`.
///
/// The invariant `u + c ln n` is constant, and the state is transported
/// unchanged along `x = xi + (u(xi) - c) t`. At `t = 0`,
/// `ln n = ln n_ref + bump(x)`. Valid until characteristics cross.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimpleWave {
    pub ti: f64,
    pub n_ref: f64,
    pub u_ref: f64,
    pub bump: Bump,
}

impl SimpleWave {
    pub fn new(ti: f64, n_ref: f64, u_ref: f64, bump: Bump) -> Result<Self> {
        if !(ti > 0.0 && n_ref > 0.0 && bump.width > 0.0) {
            return Err(Error::InvalidParameter { name: "simple wave", reason: "need Ti, n_ref, width > 0".into() });
        }
        Ok(Self { ti, n_ref, u_ref, bump })
    }

    pub fn sound_speed(&self) -> f64 {
        (self.ti + 1.0).sqrt()
    }

    /// Time at which the first characteristics cross.
    pub fn breaking_time(&self) -> f64 {
        let c = self.sound_speed();
        let worst = (0..=4000)
            .map(|k| self.bump.eval(self.bump.center - self.bump.width + 2.0 * self.bump.width * k as f64 / 4000.0).1)
            .fold(0.0, f64::max);
        if worst > 0.0 {
            1.0 / (c * worst)
        } else {
            f64::INFINITY
        }
    }

    fn speed(&self, xi: f64) -> (f64, f64) {
        let c = self.sound_speed();
        let (b, db) = self.bump.eval(xi);
        (self.u_ref - c * b - c, -c * db)
    }

    /// Foot `xi` of the characteristic through `(t, x)` and `dxi/dx`.
    fn foot(&self, t: f64, x: f64) -> (f64, f64) {
        let c = self.sound_speed();
        let base = self.u_ref - c;
        if self.bump.amplitude == 0.0 || t == 0.0 {
            return (x - base * t, 1.0);
        }
        let amp = c * self.bump.amplitude.abs();
        let (mut lo, mut hi) = (x - (base + amp) * t, x - (base - amp) * t);
        if lo > hi {
            std::mem::swap(&mut lo, &mut hi);
        }
        let mut xi = x - base * t;
        for _ in 0..200 {
            let (s, ds) = self.speed(xi);
            let g = xi + s * t - x;
            if g > 0.0 {
                hi = hi.min(xi);
            } else {
                lo = lo.max(xi);
            }
            let dg = 1.0 + ds * t;
            let mut next = xi - g / dg;
            if !(next >= lo && next <= hi) || dg <= 0.0 {
                next = 0.5 * (lo + hi);
            }
            let moved = (next - xi).abs();
            xi = next;
            if moved < 1e-15 * (1.0 + xi.abs()) {
                break;
            }
        }
        let (_, ds) = self.speed(xi);
        (xi, 1.0 / (1.0 + ds * t))
    }
}

impl LeadingOrder for SimpleWave {
    fn sample(&self, t: f64, x3: f64) -> RegularSample {
        let c = self.sound_speed();
        let (xi, dxi) = self.foot(t, x3);
        let (b, db) = self.bump.eval(xi);
        let ln_n = self.n_ref.ln() + b;
        let n = ln_n.exp();
        let u3 = self.u_ref - c * b;
        let dl = db * dxi;
        RegularSample { n, u3, phi: -ln_n, dn: n * dl, du3: -c * dl, dphi: -dl }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wave() -> SimpleWave {
        SimpleWave::new(1.0, 1.0, -2.0, Bump { center: 0.3, width: 0.2, amplitude: 0.1 }).unwrap()
    }

    #[test]
    fn satisfies_the_limit_system() {
        let w = wave();
        let c2 = w.ti + 1.0;
        let (h, k) = (1e-5, 1e-5);
        for &(t, x) in &[(0.02, 0.25), (0.05, 0.2), (0.08, 0.1)] {
            let s = w.sample(t, x);
            let nt = (w.sample(t + k, x).n - w.sample(t - k, x).n) / (2.0 * k);
            let ut = (w.sample(t + k, x).u3 - w.sample(t - k, x).u3) / (2.0 * k);
            let mass = nt + s.n * s.du3 + s.u3 * s.dn;
            let mom = ut + s.u3 * s.du3 + c2 * s.dn / s.n;
            assert!(mass.abs() < 1e-5 && mom.abs() < 1e-5, "{mass} {mom}");
            let fd = (w.sample(t, x + h).n - w.sample(t, x - h).n) / (2.0 * h);
            assert!((fd - s.dn).abs() < 1e-5);
        }
    }

    #[test]
    fn constant_state_away_from_bump() {
        let s = wave().sample(0.01, 1.0);
        assert_eq!((s.n, s.u3, s.dn), (1.0, -2.0, 0.0));
        assert!(wave().breaking_time() > 0.1);
    }
}
