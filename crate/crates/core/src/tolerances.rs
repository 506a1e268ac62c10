use serde::{Deserialize, Serialize};

/// Numerical thresholds shared by every layer.
///
/// All are absolute except `light` (relative to `y² + z²`) and `resid_floor`
/// (relative to the scale of the reduced equation).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Lightlike boundary for isotropic vectors.
    pub light: f64,
    /// Minimum W for a point to carry a normal frame.
    pub admissible: f64,
    /// Minimum |x_i| for the chart used by the second fundamental form.
    pub chart: f64,
    /// Minimum |LN - M²| for the Laplacian to be defined.
    pub nondeg: f64,
    /// Maximum |D| for a factor pair to count as degenerate.
    pub deg: f64,
    /// Minimum relative residual for a reduced equation to count as failing.
    pub resid_floor: f64,
    /// Minimum |cos| accepted by the tangent.
    pub pole: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            light: 1e-12,
            admissible: 1e-10,
            chart: 1e-10,
            nondeg: 1e-8,
            deg: 1e-9,
            resid_floor: 1e-3,
            pole: 1e-12,
        }
    }
}
