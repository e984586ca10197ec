use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::expr::{Point4, ScalarFieldExpr};
use super::FieldError;

/// Coordinate box of the local chart together with the sampling policy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartBox {
    pub lo: [f64; 4],
    pub hi: [f64; 4],
    pub seed: u64,
    pub sample_count: usize,
}

impl Default for ChartBox {
    fn default() -> Self {
        ChartBox {
            lo: [-0.5; 4],
            hi: [0.5; 4],
            seed: 42,
            sample_count: 200,
        }
    }
}

impl ChartBox {
    pub fn new(lo: [f64; 4], hi: [f64; 4], seed: u64, sample_count: usize) -> Result<Self, FieldError> {
        let b = ChartBox {
            lo,
            hi,
            seed,
            sample_count,
        };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<(), FieldError> {
        for a in 0..4 {
            if !(self.lo[a].is_finite() && self.hi[a].is_finite() && self.lo[a] < self.hi[a]) {
                return Err(FieldError::Chart(format!(
                    "bounds of x{} must satisfy lo < hi, got [{}, {}]",
                    a + 1,
                    self.lo[a],
                    self.hi[a]
                )));
            }
        }
        Ok(())
    }

    pub fn contains(&self, x: &Point4) -> bool {
        (0..4).all(|a| self.lo[a] <= x[a] && x[a] <= self.hi[a])
    }

    pub fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }

    pub fn sample_point(&self, rng: &mut impl Rng) -> Point4 {
        std::array::from_fn(|a| rng.gen_range(self.lo[a]..self.hi[a]))
    }

    /// `sample_count` points, deterministic in `seed` and `stream`.
    pub fn sample_points(&self, stream: u64) -> Vec<Point4> {
        let mut rng = self.rng(stream);
        (0..self.sample_count).map(|_| self.sample_point(&mut rng)).collect()
    }

    /// Checks that `expr` evaluates to a finite value at every sampled point.
    pub fn validate_expr(&self, expr: &ScalarFieldExpr) -> Result<(), FieldError> {
        for x in self.sample_points(0) {
            expr.eval(&x)?;
        }
        Ok(())
    }
}

/// Uniform covector in `[-1, 1]^4`.
pub fn sample_covector(rng: &mut impl Rng) -> [f64; 4] {
    std::array::from_fn(|_| rng.gen_range(-1.0..1.0))
}
