use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{split_product, MPrimeTable};
use crate::algebra::{Rational, Ring, RingMatrix};
use crate::graph::{Digraph, Edge, VertexSet};
use crate::lift::{lift_matrix, lift_schrodinger, schrodinger_matrix, LiftGraph};
use crate::{Error, Result};

/// Both sides of a determinant product identity `lhs * den = num`, where
/// `num / den` is the product of `factors` raised to their exponents.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductIdentity<R> {
    pub lhs: R,
    pub num: R,
    pub den: R,
    /// `(W, base, exponent)` for every factor with a nonzero exponent.
    pub factors: Vec<(VertexSet, R, i64)>,
}

impl<R: Ring> ProductIdentity<R> {
    fn new(lhs: R, factors: Vec<(VertexSet, R, i64)>) -> Self {
        let (num, den) = split_product(factors.iter().map(|(_, b, e)| (b.clone(), *e)));
        ProductIdentity {
            lhs,
            num,
            den,
            factors,
        }
    }

    pub fn holds(&self) -> bool {
        self.lhs.mul(&self.den) == self.num
    }

    fn require(self, check: &'static str) -> Result<Self> {
        if self.holds() {
            return Ok(self);
        }
        let listing: Vec<String> = self
            .factors
            .iter()
            .map(|(w, b, e)| format!("{w}^{e}: {b}"))
            .collect();
        Err(Error::violation(
            check,
            format!("left side {}, factors [{}]", self.lhs, listing.join("; ")),
        ))
    }
}

/// `det H_lift = prod det(H restricted to W)^m'(W)` over all strongly
/// connected `W`, the full vertex set included. `H = Q + Y` with `Q` the
/// Laplacian of `g` and `Y = diag(y)`; the lift must come from `g`.
pub fn schrodinger_identity_check<R: Ring>(
    g: &Digraph<R>,
    y: &[R],
    lift: &LiftGraph<R>,
    table: &MPrimeTable,
) -> Result<ProductIdentity<R>> {
    let h = schrodinger_matrix(g, y)?;
    let lhs = lift_schrodinger(lift, y)?.det();
    let factors = table
        .entries()
        .iter()
        .filter(|e| e.2 != 0)
        .map(|&(w, _, m)| Ok((w, h.restrict_to(&w.to_vec())?.det(), m)))
        .collect::<Result<Vec<_>>>()?;
    ProductIdentity::new(lhs, factors).require("schrodinger")
}

/// `det(I - S_lift P_lift) = det(I - SP) * prod det((I - SP) restricted
/// to W)^m'(W)` over proper strongly connected `W`. `P` is the full weight
/// matrix of `g` (diagonal included), `S = diag(s)`, and the lift must come
/// from `g`. The factor `det(I - SP)` is folded into the product.
pub fn sp_formula_check<R: Ring>(
    g: &Digraph<R>,
    s: &[R],
    lift: &LiftGraph<R>,
    table: &MPrimeTable,
) -> Result<ProductIdentity<R>> {
    let n = g.vertex_count();
    let a = RingMatrix::identity(n).sub(&g.weight_matrix().scale_rows(s)?)?;
    let lifted = lift_matrix(lift).scale_rows(&lift.lift_values(s))?;
    let lhs = RingMatrix::identity(lifted.dim()).sub(&lifted)?.det();
    let mut factors = Vec::new();
    factors.push((VertexSet::full(n), a.det(), 1));
    for (w, m) in table.proper().filter(|(_, m)| *m != 0) {
        factors.push((w, a.restrict_to(&w.to_vec())?.det(), m));
    }
    ProductIdentity::new(lhs, factors).require("sp-formula")
}

/// Rewrite edge weights `x` and vertex weights `y` as a weight matrix `P`
/// and scaling `s` with `I - SP = H`: `s_i = 1 - y_i`,
/// `p(i,j) = x(i,j) / (1 - y_i)` and `p(i,i) = (1 - y_i - sum_j x(i,j)) / (1 - y_i)`.
pub fn stochastic_bridge(g: &Digraph<Rational>, y: &[Rational]) -> Result<(Digraph<Rational>, Vec<Rational>)> {
    if y.len() != g.vertex_count() {
        return Err(Error::Dimension("one vertex weight per vertex expected".into()));
    }
    let s: Vec<Rational> = y.iter().map(|yi| <Rational as Ring>::one() - yi).collect();
    if let Some(v) = s.iter().position(|si| Ring::is_zero(si)) {
        return Err(Error::Precondition(format!("vertex weight of {v} is 1")));
    }
    let edges = g
        .edges()
        .iter()
        .map(|e| Edge {
            source: e.source,
            target: e.target,
            weight: &e.weight / &s[e.source],
        })
        .collect();
    let diagonal = (0..g.vertex_count())
        .map(|v| (&s[v] - g.out_weight(v)) / &s[v])
        .collect();
    Ok((Digraph::new(g.vertex_count(), edges, Some(diagonal))?, s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rational, MultiPoly};
    use crate::graph::fixtures::*;
    use crate::lift::{build_lift, DEFAULT_LIFT_CAP};
    use crate::policy::Sampler;
    use crate::theorem::{m_prime, r_polynomial};

    #[test]
    fn zero_vertex_weights_give_zero_equals_zero() {
        let g = k3();
        let lift = build_lift(&g, DEFAULT_LIFT_CAP).unwrap();
        let id = schrodinger_identity_check(&g, &vec![rational(0, 1); 3], &lift, &m_prime(&g).unwrap()).unwrap();
        assert_eq!(id.lhs, rational(0, 1));
        assert_eq!(id.num, rational(0, 1));
    }

    #[test]
    fn two_cycle_symbolic() {
        let (g, mut reg) = symbolic(&two_cycle());
        let y = [reg.var("y_0"), reg.var("y_1")];
        let lift = build_lift(&g, DEFAULT_LIFT_CAP).unwrap();
        let id = schrodinger_identity_check(&g, &y, &lift, &m_prime(&g).unwrap()).unwrap();
        assert_eq!(id.factors.len(), 1);
        assert_eq!(id.lhs, schrodinger_matrix(&g, &y).unwrap().det());
    }

    #[test]
    fn k3_symbolic() {
        let (g, mut reg) = symbolic(&k3());
        let y: Vec<MultiPoly> = (0..3).map(|v| reg.var(&format!("y_{v}"))).collect();
        let lift = build_lift(&g, DEFAULT_LIFT_CAP).unwrap();
        let id = schrodinger_identity_check(&g, &y, &lift, &m_prime(&g).unwrap()).unwrap();
        assert_eq!(id.factors.len(), 4);
        assert!(id.den.is_one());
    }

    #[test]
    fn k3_random_rational() {
        let g = k3();
        let mut s = Sampler::new(2);
        let x = g.map_weights(|_| s.rational());
        let y = s.rationals(3);
        let lift = build_lift(&x, DEFAULT_LIFT_CAP).unwrap();
        let table = m_prime(&x).unwrap();
        let id = schrodinger_identity_check(&x, &y, &lift, &table).unwrap();
        assert!(id.holds());
        let bad = ProductIdentity::new(id.lhs + rational(1, 1), id.factors);
        assert!(bad.require("schrodinger").unwrap_err().is_violation());
    }

    #[test]
    fn sp_formula_random() {
        let mut s = Sampler::new(9);
        for g in [cycle3(), k3(), unit(3, &[(0, 1), (1, 0), (1, 2), (2, 1)])] {
            let p = g
                .map_weights(|_| s.rational())
                .with_diagonal(s.rationals(3))
                .unwrap();
            let lift = build_lift(&p, DEFAULT_LIFT_CAP).unwrap();
            let table = m_prime(&p).unwrap();
            let scale = s.rationals(3);
            sp_formula_check(&p, &scale, &lift, &table).unwrap();
        }
    }

    #[test]
    fn sp_formula_with_scalar_s_matches_r() {
        let p = uniform_k3();
        let lift = build_lift(&p, DEFAULT_LIFT_CAP).unwrap();
        let table = m_prime(&p).unwrap();
        let r = r_polynomial(&p, &lift).unwrap();
        for c in [rational(1, 3), rational(2, 1), rational(-5, 7)] {
            let id = sp_formula_check(&p, &[c.clone(), c.clone(), c.clone()], &lift, &table).unwrap();
            let det = id.factors[0].1.clone();
            assert_eq!(id.lhs, det * r.eval(&c));
        }
    }

    #[test]
    fn bridge_matches_schrodinger_matrix() {
        let mut s = Sampler::new(4);
        let x = k3().map_weights(|_| s.rational());
        let y = vec![rational(1, 3), rational(-2, 5), rational(7, 2)];
        let (p, scale) = stochastic_bridge(&x, &y).unwrap();
        let i_minus_sp = RingMatrix::identity(3).sub(&p.weight_matrix().scale_rows(&scale).unwrap()).unwrap();
        assert_eq!(i_minus_sp, schrodinger_matrix(&x, &y).unwrap());
        assert!(stochastic_bridge(&x, &[rational(1, 1), rational(0, 1), rational(0, 1)]).is_err());
    }

    #[test]
    fn bridge_carries_the_identity() {
        let mut s = Sampler::new(6);
        let x = unit(3, &[(0, 1), (1, 0), (1, 2), (2, 1)]).map_weights(|_| s.rational());
        let y = vec![s.unit_interval(), s.unit_interval(), s.unit_interval()];
        let (p, scale) = stochastic_bridge(&x, &y).unwrap();
        let lift_x = build_lift(&x, DEFAULT_LIFT_CAP).unwrap();
        let lift_p = build_lift(&p, DEFAULT_LIFT_CAP).unwrap();
        let table = m_prime(&x).unwrap();
        let a = schrodinger_identity_check(&x, &y, &lift_x, &table).unwrap();
        let b = sp_formula_check(&p, &scale, &lift_p, &table).unwrap();
        assert_eq!(a.lhs, b.lhs);
    }
}
