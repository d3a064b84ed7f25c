use alloc::format;
use alloc::vec::Vec;

use super::{split_product, MPrimeTable};
use crate::algebra::Ring;
use crate::arborescence::{laplacian, psi_sum, tau};
use crate::graph::Digraph;
use crate::lift::LiftGraph;
use crate::{Error, Result};

/// The ratio `tau(lift) / tau(G)` obtained three ways.
#[derive(Clone, Debug, PartialEq)]
pub struct PhiReport<R> {
    pub tau_graph: R,
    pub tau_lift: R,
    /// `tau(lift) / tau(G)`.
    pub phi_lift: R,
    /// Product of forest sums raised to the exponents `m'`.
    pub phi_product: R,
    /// Lift Laplacian minor at `t` over `w(t)`, one per lift vertex.
    pub phi_minor: Vec<R>,
}

impl<R: Ring> PhiReport<R> {
    pub fn phi(&self) -> &R {
        &self.phi_lift
    }

    pub fn product_agrees(&self) -> bool {
        self.phi_product == self.phi_lift
    }

    pub fn minors_agree(&self) -> bool {
        self.phi_minor.iter().all(|p| *p == self.phi_lift)
    }

    pub fn agree(&self) -> bool {
        self.product_agrees() && self.minors_agree()
    }

    /// Error carrying the first disagreement, if any.
    pub fn check(&self) -> Result<()> {
        if !self.product_agrees() {
            return Err(Error::violation(
                "phi",
                format!("lift ratio {} != product {}", self.phi_lift, self.phi_product),
            ));
        }
        if let Some(t) = self.phi_minor.iter().position(|p| *p != self.phi_lift) {
            return Err(Error::violation(
                "phi",
                format!("lift vertex {t}: minor ratio {} != lift ratio {}", self.phi_minor[t], self.phi_lift),
            ));
        }
        Ok(())
    }
}

/// Determinant of the lift Laplacian with row and column `t` removed, for
/// every lift vertex `t`.
pub fn lift_minors<R: Ring>(lift: &LiftGraph<R>) -> Vec<R> {
    let l = laplacian(lift.graph());
    (0..lift.vertex_count())
        .map(|t| l.minor(&[t]).expect("lift vertex is a label").det())
        .collect()
}

/// `(tau(G), tau(lift), tau(lift) / tau(G))`, with `tau(lift)` summed from
/// the lift minors and `tau(G)` by enumeration.
pub fn phi_via_lift<R: Ring>(g: &Digraph<R>, minors: &[R]) -> Result<(R, R, R)> {
    let tau_graph = tau(g);
    let tau_lift = R::sum(minors);
    let phi = tau_lift.div_exact(&tau_graph)?;
    Ok((tau_graph, tau_lift, phi))
}

/// Minor at `t` over the weight of the tree `t`, for each lift vertex.
pub fn phi_via_minor<R: Ring>(g: &Digraph<R>, lift: &LiftGraph<R>, minors: &[R]) -> Result<Vec<R>> {
    lift.trees()
        .iter()
        .zip(minors)
        .map(|(t, m)| m.div_exact(&t.weight(g)))
        .collect()
}

/// Product over proper strongly connected `W` of the weight of forests
/// rooted at `V \ W`, to the power `m'(W)`.
pub fn phi_via_product<R: Ring>(g: &Digraph<R>, table: &MPrimeTable) -> Result<R> {
    let n = g.vertex_count();
    let factors = table
        .proper()
        .filter(|(_, m)| *m != 0)
        .map(|(w, m)| Ok((psi_sum(g, w.complement(n))?, m)))
        .collect::<Result<Vec<(R, i64)>>>()?;
    let (num, den) = split_product(factors);
    num.div_exact(&den)
}

pub fn phi_report<R: Ring>(g: &Digraph<R>, lift: &LiftGraph<R>, table: &MPrimeTable) -> Result<PhiReport<R>> {
    let minors = lift_minors(lift);
    let (tau_graph, tau_lift, phi_lift) = phi_via_lift(g, &minors)?;
    Ok(PhiReport {
        phi_minor: phi_via_minor(g, lift, &minors)?,
        phi_product: phi_via_product(g, table)?,
        tau_graph,
        tau_lift,
        phi_lift,
    })
}

/// For row-stochastic weights, the tree weights `w(t)` form an invariant
/// row vector of the lifted transition matrix. Returns the weights.
pub fn tree_weight_stationarity_check<R: Ring>(g: &Digraph<R>, lift: &LiftGraph<R>) -> Result<Vec<R>> {
    if !g.rows_sum_to_one() {
        return Err(Error::Precondition("rows of the weight matrix must sum to one".into()));
    }
    let weights: Vec<R> = lift.trees().iter().map(|t| t.weight(g)).collect();
    let lg = lift.graph();
    for u in 0..lift.vertex_count() {
        let inflow = lg
            .in_edges(u)
            .iter()
            .map(|&k| weights[lg.edge(k).source].mul(&lg.edge(k).weight))
            .fold(weights[u].mul(&lg.diagonal()[u]), |acc, x| acc.add(&x));
        if inflow != weights[u] {
            return Err(Error::violation(
                "stationarity",
                format!("lift vertex {u} ({}): inflow {inflow}, weight {}", lift.tree(u), weights[u]),
            ));
        }
    }
    Ok(weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rational, MultiPoly, Rational};
    use crate::graph::fixtures::*;
    use crate::lift::{build_lift, DEFAULT_LIFT_CAP};
    use crate::theorem::m_prime;

    fn report(g: &Digraph<Rational>) -> PhiReport<Rational> {
        let lift = build_lift(g, DEFAULT_LIFT_CAP).unwrap();
        phi_report(g, &lift, &m_prime(g).unwrap()).unwrap()
    }

    #[test]
    fn k3_unit_weights() {
        let r = report(&k3());
        assert_eq!(r.tau_graph, rational(9, 1));
        assert_eq!(r.tau_lift, rational(243, 1));
        assert_eq!(r.phi_lift, rational(27, 1));
        assert!(r.agree());
        assert_eq!(r.check(), Ok(()));
    }

    #[test]
    fn uniform_k3_chain() {
        let r = report(&uniform_k3());
        assert_eq!(r.tau_graph, rational(9, 4));
        assert_eq!(r.tau_lift, rational(243, 256));
        assert_eq!(r.phi_lift, rational(27, 64));
        assert!(r.agree());
    }

    #[test]
    fn three_cycle_symbolic() {
        let (g, _) = symbolic(&cycle3());
        let lift = build_lift(&g, DEFAULT_LIFT_CAP).unwrap();
        let r = phi_report(&g, &lift, &m_prime(&g).unwrap()).unwrap();
        assert_eq!(r.tau_lift, r.tau_graph);
        assert_eq!(r.phi_lift, MultiPoly::one());
        assert!(r.agree());
    }

    #[test]
    fn k3_symbolic() {
        let (g, _) = symbolic(&k3());
        let lift = build_lift(&g, DEFAULT_LIFT_CAP).unwrap();
        let r = phi_report(&g, &lift, &m_prime(&g).unwrap()).unwrap();
        assert!(r.agree());
        assert_eq!(r.phi_lift.total_degree(), 6);
    }

    #[test]
    fn single_vertex() {
        let r = report(&unit(1, &[]));
        assert_eq!(r.phi_lift, rational(1, 1));
        assert!(r.agree());
    }

    #[test]
    fn disagreement_is_reported() {
        let mut r = report(&k3());
        r.phi_minor[4] = rational(26, 1);
        assert!(!r.minors_agree());
        assert!(r.check().unwrap_err().is_violation());
    }

    #[test]
    fn stationarity() {
        let g = cycle3();
        let lift = build_lift(&g, DEFAULT_LIFT_CAP).unwrap();
        assert_eq!(tree_weight_stationarity_check(&g, &lift), Ok(vec![rational(1, 1); 3]));

        let g = uniform_k3();
        let lift = build_lift(&g, DEFAULT_LIFT_CAP).unwrap();
        assert_eq!(tree_weight_stationarity_check(&g, &lift), Ok(vec![rational(1, 4); 9]));

        let lift = build_lift(&k3(), DEFAULT_LIFT_CAP).unwrap();
        assert!(matches!(
            tree_weight_stationarity_check(&k3(), &lift),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn stationarity_with_holding() {
        let g = Digraph::from_triples(
            3,
            vec![
                (0, 1, rational(1, 3)),
                (0, 2, rational(1, 3)),
                (1, 2, rational(1, 2)),
                (2, 0, rational(3, 4)),
            ],
        )
        .unwrap()
        .with_diagonal(vec![rational(1, 3), rational(1, 2), rational(1, 4)])
        .unwrap();
        let lift = build_lift(&g, DEFAULT_LIFT_CAP).unwrap();
        assert!(tree_weight_stationarity_check(&g, &lift).is_ok());
    }
}
