//! Numerical tolerances and search budgets.
//!
//! Every threshold used by the library lives in [`Tolerances`] so that a run
//! can be reproduced from its report alone.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Agreement of two representations of the same map.
    pub coherence: f64,
    /// `|phi(I) - I|` for unitality and trace preservation.
    pub unital: f64,
    /// Relative floor on the Choi spectrum for complete positivity.
    pub psd_rel: f64,
    /// Pass threshold for sphere searches.
    pub search_pass: f64,
    /// "Zero" threshold for the rank-one search.
    pub search_zero: f64,
    /// Relative eigenvalue floor for matrix square roots.
    pub sqrt_floor_rel: f64,
    /// Relative floor below which a Perron-Frobenius eigenvector is singular.
    pub singular_rel: f64,
    /// Relative width of the peripheral band.
    pub peripheral_band: f64,
    /// Relative positivity floor for Perron-Frobenius eigenvectors.
    pub pf_positive_rel: f64,
    /// Relative kernel threshold for multiplicative-domain forms.
    pub kernel_rel: f64,
    /// Upper edge of the kernel guard band.
    pub kernel_guard_rel: f64,
    /// Relative allowance for negative form eigenvalues.
    pub form_psd_rel: f64,
    /// Subspace containment and principal-angle tolerance.
    pub containment: f64,
    /// Relative singular-value threshold for word-span ranks.
    pub rank_rel: f64,
    /// Relative eigenvalue threshold for ranks of images of projections.
    pub image_rank_rel: f64,
    /// `|r - 1|` threshold in the unitality/radius equivalence.
    pub radius_one: f64,
    /// `|phi(I) - I|` threshold in the unitality/radius equivalence.
    pub unit_defect: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            coherence: 1e-10,
            unital: 1e-9,
            psd_rel: 1e-9,
            search_pass: 1e-8,
            search_zero: 1e-12,
            sqrt_floor_rel: 1e-12,
            singular_rel: 1e-10,
            peripheral_band: 1e-9,
            pf_positive_rel: 1e-9,
            kernel_rel: 1e-8,
            kernel_guard_rel: 1e-6,
            form_psd_rel: 1e-7,
            containment: 1e-7,
            rank_rel: 1e-9,
            image_rank_rel: 1e-8,
            radius_one: 1e-8,
            unit_defect: 1e-7,
        }
    }
}

/// Budget for multistart sphere searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchBudget {
    /// Number of random starts; `None` means `8 * D^2`.
    pub starts: Option<usize>,
    /// Descent iterations per start.
    pub iterations: usize,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            starts: None,
            iterations: 500,
            seed: 0x05ee_d0f5_ca1e,
        }
    }
}

impl SearchBudget {
    pub fn starts_for(&self, dim: usize) -> usize {
        self.starts.unwrap_or(8 * dim * dim).max(1)
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }
}
