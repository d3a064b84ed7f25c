//! The exponent table, the exploration algorithm, and the identity checks
//! relating a graph to its spanning tree graph.

mod explore;
mod mprime;
mod phi;
mod schrodinger;
mod zeta;

pub use explore::{
    canonical_tree, count_psi_superset, exploration_check, exploration_psi, m_count,
    psi_distribution, EdgeOrdering, ExplorationSummary,
};
pub use mprime::{m_condition_check, m_prime, MPrimeTable};
pub use phi::{
    lift_minors, phi_report, phi_via_lift, phi_via_minor, phi_via_product,
    tree_weight_stationarity_check, PhiReport,
};
pub use schrodinger::{
    schrodinger_identity_check, sp_formula_check, stochastic_bridge, ProductIdentity,
};
pub use zeta::{
    det_pencil, lift_trace_check, linear_coefficient_check, overcount_identity_check,
    r_factorization_check, r_polynomial, tau_from_zeta_derivative, vertex_weighted_zeta_check,
    zeta_truncated_check,
};

use crate::algebra::{Ring, UniPoly};

/// Just enough multiplicative structure to evaluate products with integer
/// exponents.
pub(crate) trait Multiplicative: Clone + PartialEq {
    fn unit() -> Self;
    fn times(&self, other: &Self) -> Self;
    fn power(&self, exp: u32) -> Self;
}

impl<R: Ring> Multiplicative for R {
    fn unit() -> Self {
        R::one()
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn power(&self, exp: u32) -> Self {
        self.pow(exp)
    }
}

impl<R: Ring> Multiplicative for UniPoly<R> {
    fn unit() -> Self {
        UniPoly::one()
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn power(&self, exp: u32) -> Self {
        self.pow(exp)
    }
}

/// `prod base^exp` split into the factors with positive exponent and those
/// with negative exponent, so identities can be compared without dividing.
pub(crate) fn split_product<T: Multiplicative>(
    factors: impl IntoIterator<Item = (T, i64)>,
) -> (T, T) {
    let mut num = T::unit();
    let mut den = T::unit();
    for (base, exp) in factors {
        let e = u32::try_from(exp.unsigned_abs()).expect("exponent fits in u32");
        match exp.signum() {
            1 => num = num.times(&base.power(e)),
            -1 => den = den.times(&base.power(e)),
            _ => {}
        }
    }
    (num, den)
}
