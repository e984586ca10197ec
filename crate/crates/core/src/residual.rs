//! Running maximum of a residual over sample points.

use serde::{Deserialize, Serialize};

use crate::fieldlang::Point4;

/// Sample at which a residual was observed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WorstPoint {
    pub x: Point4,
    pub p: [f64; 4],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxResidual {
    pub value: f64,
    pub worst: WorstPoint,
    pub samples: usize,
}

impl Default for MaxResidual {
    fn default() -> Self {
        MaxResidual {
            value: 0.0,
            worst: WorstPoint { x: [0.0; 4], p: [0.0; 4] },
            samples: 0,
        }
    }
}

impl MaxResidual {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records one sample. NaN counts as an infinite residual so that it can
    /// never hide behind a finite maximum.
    pub fn record(&mut self, value: f64, x: &Point4, p: &[f64; 4]) {
        let v = if value.is_nan() { f64::INFINITY } else { value };
        if self.samples == 0 || v > self.value {
            self.value = v;
            self.worst = WorstPoint { x: *x, p: *p };
        }
        self.samples += 1;
    }

    pub fn record_x(&mut self, value: f64, x: &Point4) {
        self.record(value, x, &[0.0; 4]);
    }

    pub fn merge(&mut self, other: &MaxResidual) {
        if other.samples == 0 {
            return;
        }
        let samples = self.samples + other.samples;
        if self.samples == 0 || other.value > self.value {
            self.value = other.value;
            self.worst = other.worst;
        }
        self.samples = samples;
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.value <= tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keeps_first_worst_on_ties_and_flags_nan() {
        let mut m = MaxResidual::new();
        m.record_x(1.0, &[1.0; 4]);
        m.record_x(1.0, &[2.0; 4]);
        assert_eq!(m.worst.x, [1.0; 4]);
        m.record_x(f64::NAN, &[3.0; 4]);
        assert!(m.value.is_infinite());
        assert_eq!(m.samples, 3);
        assert!(!m.passes(1e300));
    }
}
