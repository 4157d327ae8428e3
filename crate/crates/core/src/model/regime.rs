use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default width of the band around each sonic threshold that is treated as
/// undecidable.
pub const DEFAULT_SONIC_MARGIN: f64 = 1e-3;

/// Outflow regime of the boundary trace of the normal velocity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `u3(0) < -sqrt(Ti + 1)`: Bohm condition, sheath at leading order.
    Supersonic,
    /// `-sqrt(Ti + 1) < u3(0) < -sqrt(Ti)`: no layer, one boundary condition
    /// for the limit system.
    Intermediate,
    /// Anything slower. Reported only.
    SubsonicOrCharacteristic,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::Supersonic => "supersonic",
            Regime::Intermediate => "intermediate",
            Regime::SubsonicOrCharacteristic => "subsonic_or_characteristic",
        }
    }
}

/// Classifies a wall trace of the normal velocity.
pub fn classify_regime(trace_u3: f64, ti: f64, margin: f64) -> Result<Regime> {
    if !(ti > 0.0) {
        return Err(Error::InvalidParameter { name: "ti", reason: "must be > 0".into() });
    }
    classify_with_speeds(trace_u3, ti.sqrt(), (ti + 1.0).sqrt(), margin)
}

/// Same as [`classify_regime`] with the ion sound speed `c_ion = sqrt(Ti)` and
/// the quasineutral (Bohm) speed `c_bohm = sqrt(Ti + 1)` given explicitly.
pub fn classify_with_speeds(trace_u3: f64, c_ion: f64, c_bohm: f64, margin: f64) -> Result<Regime> {
    if !(margin > 0.0) {
        return Err(Error::InvalidParameter { name: "margin", reason: "must be > 0".into() });
    }
    if !trace_u3.is_finite() {
        return Err(Error::DomainError { value: trace_u3, reason: "trace velocity must be finite" });
    }
    let thresholds = [-c_bohm, -c_ion, c_ion, c_bohm];
    if thresholds.iter().any(|s| (trace_u3 - s).abs() < margin) {
        return Err(Error::MarginViolation { trace_u3, margin });
    }
    if trace_u3 + c_bohm <= -margin {
        Ok(Regime::Supersonic)
    } else if trace_u3 >= -c_bohm + margin && trace_u3 <= -c_ion - margin {
        Ok(Regime::Intermediate)
    } else {
        Ok(Regime::SubsonicOrCharacteristic)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_cases() {
        assert_eq!(classify_regime(-2.0, 1.0, 0.05).unwrap(), Regime::Supersonic);
        assert_eq!(classify_regime(-1.2, 1.0, 0.05).unwrap(), Regime::Intermediate);
        assert!(matches!(classify_regime(-1.4142, 1.0, 0.05), Err(Error::MarginViolation { .. })));
        assert_eq!(classify_regime(-0.5, 1.0, 0.05).unwrap(), Regime::SubsonicOrCharacteristic);
    }

    #[test]
    fn near_ion_sound_speed_is_an_error() {
        assert!(classify_regime(-1.0005, 1.0, DEFAULT_SONIC_MARGIN).is_err());
        assert!(classify_regime(-1.0, 1.0, 0.0).is_err());
    }

    proptest! {
        #[test]
        fn invariant_under_common_rescaling(
            trace in -5.0f64..0.0,
            ti in 0.1f64..4.0,
            scale in 0.1f64..10.0,
        ) {
            let (ci, cb, margin) = (ti.sqrt(), (ti + 1.0).sqrt(), 1e-3);
            let a = classify_with_speeds(trace, ci, cb, margin);
            let b = classify_with_speeds(scale * trace, scale * ci, scale * cb, scale * margin);
            match (a, b) {
                (Ok(x), Ok(y)) => prop_assert_eq!(x, y),
                (Err(_), Err(_)) => {}
                (x, y) => prop_assert!(false, "{:?} vs {:?}", x, y),
            }
        }
    }
}
