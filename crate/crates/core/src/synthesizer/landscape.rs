use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{circuit_from_vector, ParamId, DIM};
use crate::error::{Error, Result};
use crate::protocol::{phase_optimized_fidelity, ProtocolParams};
use crate::quantum_core::Unitary4;

/// `steps` evenly spaced values over `[lo, hi]`; a single step samples `lo`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisSpec {
    pub param: ParamId,
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl AxisSpec {
    pub fn value(&self, i: usize) -> f64 {
        if self.steps <= 1 {
            self.lo
        } else {
            // Multiply before dividing so grid nodes like π land exactly.
            self.lo + (self.hi - self.lo) * i as f64 / (self.steps - 1) as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Landscape {
    pub axis1: AxisSpec,
    pub axis2: AxisSpec,
    /// `(axis1 value, axis2 value, fidelity)`, axis1 outer, axis2 inner.
    pub points: Vec<(f64, f64, f64)>,
}

impl Landscape {
    pub fn max(&self) -> (f64, f64, f64) {
        self.points
            .iter()
            .copied()
            .fold((f64::NAN, f64::NAN, f64::NEG_INFINITY), |best, p| if p.2 > best.2 { p } else { best })
    }

    /// CSV with header `axis1,axis2,fidelity`, `\n` line endings and values
    /// at 12 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("axis1,axis2,fidelity\n");
        for (a, b, f) in &self.points {
            out.push_str(&format!("{},{},{}\n", format_sig(*a, 12), format_sig(*b, 12), format_sig(*f, 12)));
        }
        out
    }
}

/// Shortest decimal rendering of `x` rounded to `digits` significant digits.
pub fn format_sig(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{:.*e}", digits.saturating_sub(1), x).parse().expect("valid float");
    if rounded == 0.0 {
        "0".to_string()
    } else {
        format!("{rounded}")
    }
}

fn base_vector(fixed: &ProtocolParams<f64>) -> [f64; DIM] {
    [
        fixed.jt(),
        fixed.coupling.gamma,
        fixed.pulse1.omega,
        fixed.pulse1.theta,
        fixed.pulse1.phi,
        fixed.pulse2.omega,
        fixed.pulse2.theta,
        fixed.pulse2.phi,
    ]
}

/// Phase-optimized fidelity over a 2-D slice of the parameter space; the
/// remaining parameters come from `fixed` (with `Jt = J·t`).
pub fn fidelity_landscape(
    target: &Unitary4<f64>,
    axis1: AxisSpec,
    axis2: AxisSpec,
    fixed: &ProtocolParams<f64>,
) -> Result<Landscape> {
    if axis1.param == axis2.param {
        return Err(Error::InvalidParameter(format!("sweep axes must differ, both are {}", axis1.param)));
    }
    for axis in [&axis1, &axis2] {
        if axis.steps == 0 {
            return Err(Error::InvalidParameter(format!("axis {} needs at least one step", axis.param)));
        }
        if !(axis.lo.is_finite() && axis.hi.is_finite()) {
            return Err(Error::NonFinite("sweep range"));
        }
    }
    let base = base_vector(fixed);
    let points = (0..axis1.steps)
        .into_par_iter()
        .flat_map_iter(|i| {
            let a = axis1.value(i);
            (0..axis2.steps).map(move |k| {
                let b = axis2.value(k);
                let mut x = base;
                x[axis1.param.index()] = a;
                x[axis2.param.index()] = b;
                (a, b, phase_optimized_fidelity(target, &circuit_from_vector(&x)).fidelity)
            })
        })
        .collect();
    Ok(Landscape { axis1, axis2, points })
}
