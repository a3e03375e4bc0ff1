//! One shared tolerance record threaded through every operation.
//!
//! Thresholds are relative wherever a natural scale exists (sigma_max,
//! matrix norm) and absolute otherwise. The whole family scales by a
//! single factor so callers get one knob.

/// Tolerance family used across the crate.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Hermitian-ness of inputs, ‖M − M*‖_max.
    pub hermitian: f64,
    /// Idempotency of projections, ‖P² − P‖_max.
    pub idempotent: f64,
    /// Orthonormality of subspace bases, ‖B*B − I‖_max.
    pub orthonormal: f64,
    /// Eigen/SVD reconstruction residual (relative to 1 + ‖M‖).
    pub factorization: f64,
    /// Eigenvalue clustering radius around {−1, 0, +1} and the open-interval
    /// margin for eigenvalues of H.
    pub gap: f64,
    /// Outer edge of the clustering gray zone; eigenvalues between `gap`
    /// and this bound are rejected instead of classified.
    pub cluster_guard: f64,
    /// Supersymmetry residuals, per unit of dimension.
    pub supersym: f64,
    /// Vanishing-block assertions inside the decomposition, per unit of
    /// dimension; hard failure at 10x.
    pub decompose: f64,
    /// Round-trip reconstruction of a pair from its decomposition.
    pub reconstruction: f64,
    /// Relative singular-value cutoff for null spaces.
    pub null_space: f64,
    /// Relative rank cutoff for 2x2 fibers.
    pub rank: f64,
    /// Absolute floor under the fiber rank cutoff.
    pub rank_floor: f64,
    /// Threshold below which a scalar coefficient counts as zero.
    pub coeff_zero: f64,
    /// Principal-angle agreement between kernel bases.
    pub kernel_angle: f64,
    /// Moore-Penrose / Drazin defining-identity residuals.
    pub inverse_identity: f64,
    /// Agreement between fiber Drazin forms and the oracle limit formula.
    pub drazin_agree: f64,
    /// Compatible-range fiber criteria.
    pub cor: f64,
    /// |z| − 1 bound for unimodular scalars.
    pub unimodular: f64,
    /// Commutation residual ‖VH − HV‖ for intertwiner parameters.
    pub commute: f64,
    /// Subspace containment residual.
    pub containment: f64,
    /// Matching radius for spectra compared as sets.
    pub set_match: f64,
    /// Agreement between the distance formula and the grid search.
    pub distance_search: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermitian: 1e-10,
            idempotent: 1e-9,
            orthonormal: 1e-10,
            factorization: 1e-9,
            gap: 1e-8,
            cluster_guard: 1e-6,
            supersym: 1e-10,
            decompose: 1e-9,
            reconstruction: 1e-8,
            null_space: 1e-10,
            rank: 1e-8,
            rank_floor: 1e-12,
            coeff_zero: 1e-8,
            kernel_angle: 1e-7,
            inverse_identity: 1e-8,
            drazin_agree: 1e-6,
            cor: 1e-8,
            unimodular: 1e-10,
            commute: 1e-8,
            containment: 1e-8,
            set_match: 1e-8,
            distance_search: 1e-4,
        }
    }
}

impl Tolerances {
    /// Scales the whole family by one factor (the CLI `--tol` knob).
    pub fn scaled(&self, factor: f64) -> Self {
        assert!(factor.is_finite() && factor > 0.0, "tolerance scale must be positive");
        Self {
            hermitian: self.hermitian * factor,
            idempotent: self.idempotent * factor,
            orthonormal: self.orthonormal * factor,
            factorization: self.factorization * factor,
            gap: self.gap * factor,
            cluster_guard: self.cluster_guard * factor,
            supersym: self.supersym * factor,
            decompose: self.decompose * factor,
            reconstruction: self.reconstruction * factor,
            null_space: self.null_space * factor,
            rank: self.rank * factor,
            rank_floor: self.rank_floor * factor,
            coeff_zero: self.coeff_zero * factor,
            kernel_angle: self.kernel_angle * factor,
            inverse_identity: self.inverse_identity * factor,
            drazin_agree: self.drazin_agree * factor,
            cor: self.cor * factor,
            unimodular: self.unimodular * factor,
            commute: self.commute * factor,
            containment: self.containment * factor,
            set_match: self.set_match * factor,
            distance_search: self.distance_search * factor,
        }
    }
}
