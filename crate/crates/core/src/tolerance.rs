/// Numerical thresholds shared by every floating-point routine.
///
/// All values are relative. The defaults are the ones the test-suite pins.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Singular values `σ ≤ rank · σ_max` count as zero.
    pub rank: f64,
    /// Relative threshold for "this quantity vanishes" checks (coplanarity,
    /// projective equality, degenerate minors).
    pub zero: f64,
    /// Eigenvalues `|λ| ≤ inertia · max|λ|` count as zero when computing inertia.
    pub inertia: f64,
    /// A companion root is real when `|im| ≤ imag · (1 + |re|)`.
    pub imag: f64,
    /// Real roots closer than this are the same root.
    pub root_dedup: f64,
    /// Relative coefficient perturbation under which three clustered roots
    /// are treated as one triple root.
    pub root_cluster_triple: f64,
    /// Same for a pair of roots.
    pub root_cluster_pair: f64,
    /// Residual differences below this are ties.
    pub residual_tie: f64,
    /// Relative residual certifying a projective transport.
    pub transport: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rank: 1e-10,
            zero: 1e-10,
            inertia: 1e-10,
            imag: 1e-8,
            root_dedup: 1e-8,
            root_cluster_triple: 1e-6,
            root_cluster_pair: 1e-10,
            residual_tie: 1e-14,
            transport: 1e-8,
        }
    }
}
