/// Knobs shared by the homology, K-theory and comparison engines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComputeOptions {
    /// Highest homology degree computed for finite groupoids.
    pub max_degree: usize,
    /// Minimum stage at which colimit torsion certificates are recorded.
    pub stage: usize,
    /// Upper bound on the number of nerve simplices enumerated in one degree.
    pub size_bound: usize,
    /// Report ranks only, dropping torsion.
    pub rational_only: bool,
}

pub const DEFAULT_MAX_DEGREE: usize = 3;
pub const DEFAULT_STAGE: usize = 3;
pub const DEFAULT_SIZE_BOUND: usize = 200_000;

impl Default for ComputeOptions {
    fn default() -> Self {
        Self {
            max_degree: DEFAULT_MAX_DEGREE,
            stage: DEFAULT_STAGE,
            size_bound: DEFAULT_SIZE_BOUND,
            rational_only: false,
        }
    }
}
