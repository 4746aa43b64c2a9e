use base_algebra::BaseAlgebra;
use linalg_core::{derive_rng, Rng};
use serde::{Deserialize, Serialize};

use crate::error::FreeProbError;

/// Seeded Monte Carlo schedule: which matricial sizes to visit and how many
/// Haar samples to draw at each.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct McConfig {
    pub algebra: BaseAlgebra,
    pub n_ladder: Vec<usize>,
    pub samples: usize,
    pub seed: u64,
}

impl McConfig {
    pub fn new(
        algebra: BaseAlgebra,
        n_ladder: Vec<usize>,
        samples: usize,
        seed: u64,
    ) -> Result<Self, FreeProbError> {
        if n_ladder.is_empty() {
            return Err(FreeProbError::BadConfig("empty N-ladder".into()));
        }
        if n_ladder.windows(2).any(|w| w[0] >= w[1]) {
            return Err(FreeProbError::BadConfig(
                "N-ladder must be strictly increasing".into(),
            ));
        }
        if n_ladder[0] == 0 {
            return Err(FreeProbError::BadConfig("N must be positive".into()));
        }
        if samples == 0 {
            return Err(FreeProbError::BadConfig("need at least one sample".into()));
        }
        Ok(McConfig {
            algebra,
            n_ladder,
            samples,
            seed,
        })
    }

    /// Independent stream per `(N, sample)`; results never depend on how
    /// samples are scheduled across workers.
    pub fn stream(&self, n: usize, sample: usize) -> Rng {
        derive_rng(self.seed, &[n as u64, sample as u64])
    }
}
