use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;

use super::{split_product, MPrimeTable};
use crate::algebra::{Rational, Ring, RingMatrix, TruncatedSeries, UniPoly};
use crate::arborescence::tau;
use crate::graph::Digraph;
use crate::lift::{lift_matrix, LiftGraph};
use crate::walks::{closed_walk_support_sums, closed_walk_totals};
use crate::{Error, Result};

/// `det(I - s*m)` as a polynomial in `s`.
pub fn det_pencil<R: Ring>(m: &RingMatrix<R>) -> UniPoly<R> {
    UniPoly::new(R::char_coeffs(m))
}

/// `R(s) = det(I - s*P_lift) / det(I - s*P)`, which must be a polynomial.
pub fn r_polynomial<R: Ring>(g: &Digraph<R>, lift: &LiftGraph<R>) -> Result<UniPoly<R>> {
    let top = det_pencil(&lift_matrix(lift));
    let bottom = det_pencil(&g.weight_matrix());
    top.div_exact(&bottom).map_err(|e| match e {
        Error::InexactDivision => Error::violation(
            "r-polynomial",
            format!("det(I - sP) = {bottom} does not divide det(I - sP_lift) = {top}"),
        ),
        other => other,
    })
}

/// `R(s)` against the product over proper strongly connected `W` of
/// `det((I - sP) restricted to W)^m'(W)`, compared after moving negative
/// exponents to the other side.
pub fn r_factorization_check<R: Ring>(
    g: &Digraph<R>,
    table: &MPrimeTable,
    r: &UniPoly<R>,
) -> Result<()> {
    let m = g.weight_matrix();
    let factors = table
        .proper()
        .filter(|(_, e)| *e != 0)
        .map(|(w, e)| Ok((det_pencil(&m.restrict_to(&w.to_vec())?), e)))
        .collect::<Result<Vec<(UniPoly<R>, i64)>>>()?;
    let (num, den) = split_product(factors.iter().cloned());
    if r.mul(&den) != num {
        let listing: Vec<String> = table
            .proper()
            .filter(|(_, e)| *e != 0)
            .zip(&factors)
            .map(|((w, e), (f, _))| format!("{w}^{e}: {f}"))
            .collect();
        return Err(Error::violation(
            "r-factorization",
            format!("R(s) = {r}, factors [{}]", listing.join("; ")),
        ));
    }
    Ok(())
}

fn trace_of_diagonal<R: Ring>(g: &Digraph<R>) -> R {
    R::sum(g.diagonal())
}

/// `R(0) = 1` and the coefficient of `s` in `R` is `trace P - trace P_lift`.
pub fn linear_coefficient_check<R: Ring>(
    g: &Digraph<R>,
    lift: &LiftGraph<R>,
    r: &UniPoly<R>,
) -> Result<()> {
    if !r.coeff(0).is_one() {
        return Err(Error::violation("r-constant", format!("R(0) = {}", r.coeff(0))));
    }
    let expect = trace_of_diagonal(g).sub(&trace_of_diagonal(lift.graph()));
    if r.coeff(1) != expect {
        return Err(Error::violation(
            "r-linear",
            format!("coefficient of s is {}, trace difference is {expect}", r.coeff(1)),
        ));
    }
    Ok(())
}

/// For rows summing to one, the derivative of `det(I - sP)` at `s = 1` is
/// `-tau(G)`. Returns `tau(G)`.
pub fn tau_from_zeta_derivative<R: Ring>(g: &Digraph<R>) -> Result<R> {
    if !g.rows_sum_to_one() {
        return Err(Error::Precondition("rows of the weight matrix must sum to one".into()));
    }
    let slope = det_pencil(&g.weight_matrix()).derivative().eval(&R::one());
    let t = tau(g);
    if slope != t.neg() {
        return Err(Error::violation(
            "zeta-derivative",
            format!("derivative at 1 is {slope}, tau = {t}"),
        ));
    }
    Ok(t)
}

fn compare_series(check: &'static str, walks: &TruncatedSeries, det: &TruncatedSeries) -> Result<()> {
    if let Some(k) = (0..=walks.order()).find(|&k| walks.coeff(k) != det.coeff(k)) {
        return Err(Error::violation(
            check,
            format!("coefficient of s^{k}: {} from walks, {} from the determinant", walks.coeff(k), det.coeff(k)),
        ));
    }
    Ok(())
}

fn walk_zeta(g: &Digraph<Rational>, order: usize) -> Result<TruncatedSeries> {
    let totals = closed_walk_totals(g, order)?;
    let mut exponent = Vec::with_capacity(order + 1);
    exponent.push(Rational::from_integer(BigInt::from(0)));
    for n in 1..=order {
        exponent.push(&totals[n] / Rational::from_integer(BigInt::from(n)));
    }
    TruncatedSeries::new(exponent, order).exp()
}

/// `exp(sum_n s^n/n * (closed walk weight of length n))` against the series
/// of `1 / det(I - sP)`, coefficientwise up to `order`. Returns the series.
pub fn zeta_truncated_check(g: &Digraph<Rational>, order: usize) -> Result<TruncatedSeries> {
    compare_zeta("zeta-series", g, &g.weight_matrix(), order)
}

/// Walk series of `g` against `1 / det(I - s*m)`. Both sides are computed
/// after the substitution `s -> s / D`, with `D` the common denominator of
/// all entries, so the arithmetic runs on integer weights; the walk series
/// is scaled back before it is returned.
fn compare_zeta(
    check: &'static str,
    g: &Digraph<Rational>,
    m: &RingMatrix<Rational>,
    order: usize,
) -> Result<TruncatedSeries> {
    let denominators = g
        .edges()
        .iter()
        .map(|e| &e.weight)
        .chain(g.diagonal())
        .chain((0..m.dim()).flat_map(|i| m.row(i)));
    let d = Rational::from_integer(denominators.fold(BigInt::from(1), |acc, q| acc.lcm(q.denom())));
    let walks = walk_zeta(&g.map_weights(|w| w * &d), order)?;
    let det = TruncatedSeries::from_poly(&det_pencil(&m.scale(&d)), order).inverse()?;
    compare_series(check, &walks, &det)?;
    let mut power = <Rational as Ring>::one();
    let mut coeffs = Vec::with_capacity(order + 1);
    for k in 0..=order {
        coeffs.push(walks.coeff(k) / &power);
        power = power * &d;
    }
    Ok(TruncatedSeries::new(coeffs, order))
}

/// Vertex-weighted zeta function: each walk also carries the product of
/// `s_v` over its vertices. Compared with `1 / det(I - u*SP)` in the
/// bookkeeping variable `u`; also checks that the pencil at `u = 1` is
/// `det(I - SP)`.
pub fn vertex_weighted_zeta_check(
    g: &Digraph<Rational>,
    s: &[Rational],
    order: usize,
) -> Result<TruncatedSeries> {
    let weighted = g.scale_rows(s)?;
    let sp = RingMatrix::diagonal(s).mul(&g.weight_matrix())?;
    let walks = compare_zeta("vertex-zeta-series", &weighted, &sp, order)?;
    let pencil = det_pencil(&sp);
    let direct = RingMatrix::identity(sp.dim()).sub(&sp)?.det_bareiss();
    let at_one = pencil.eval(&<Rational as Ring>::one());
    if direct != at_one {
        return Err(Error::violation(
            "vertex-zeta-determinant",
            format!("det(I - SP) = {direct}, pencil at 1 = {at_one}"),
        ));
    }
    Ok(walks)
}

/// For each length `n`, the closed walks counted with multiplicity
/// `k(support) - 1` equal `sum m'(W) * (walks inside W)` over proper
/// strongly connected `W`. Returns the number of lengths checked.
pub fn overcount_identity_check<R: Ring>(
    g: &Digraph<R>,
    table: &MPrimeTable,
    max_len: usize,
) -> Result<usize> {
    let walks = closed_walk_support_sums(g, max_len)?;
    for n in 1..=max_len {
        let mut lhs = R::zero();
        for (w, weight) in walks.supports(n) {
            let k = table
                .k(*w)
                .ok_or_else(|| Error::violation("overcount", format!("walk support {w} is not strongly connected")))?;
            lhs = lhs.add(&weight.mul(&R::from_int(k as i64 - 1)));
        }
        let mut rhs = R::zero();
        for (w, m) in table.proper().filter(|(_, m)| *m != 0) {
            rhs = rhs.add(&walks.total_within(n, w).mul(&R::from_int(m)));
        }
        if lhs != rhs {
            return Err(Error::violation(
                "overcount",
                format!("length {n}: weighted walks {lhs}, exponent sum {rhs}"),
            ));
        }
    }
    Ok(max_len)
}

/// `trace(P_lift^n) = sum_W k(W) * (walks of length n with support W)`.
pub fn lift_trace_check<R: Ring>(
    g: &Digraph<R>,
    lift: &LiftGraph<R>,
    table: &MPrimeTable,
    max_len: usize,
) -> Result<usize> {
    let walks = closed_walk_support_sums(g, max_len)?;
    let m = lift_matrix(lift);
    let mut power = m.clone();
    for n in 1..=max_len {
        if n > 1 {
            power = power.mul(&m)?;
        }
        let mut expect = R::zero();
        for (w, weight) in walks.supports(n) {
            let k = table.k(*w).unwrap_or(0);
            expect = expect.add(&weight.mul(&R::from_int(k as i64)));
        }
        let got = power.trace();
        if got != expect {
            return Err(Error::violation(
                "lift-trace",
                format!("length {n}: trace of lift power {got}, forest-weighted walks {expect}"),
            ));
        }
    }
    Ok(max_len)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rational, MultiPoly};
    use crate::graph::fixtures::*;
    use crate::lift::{build_lift, DEFAULT_LIFT_CAP};
    use crate::theorem::m_prime;

    fn poly(cs: &[(i64, i64)]) -> UniPoly<Rational> {
        UniPoly::new(cs.iter().map(|&(n, d)| rational(n, d)).collect())
    }

    fn r_of(g: &Digraph<Rational>) -> UniPoly<Rational> {
        r_polynomial(g, &build_lift(g, DEFAULT_LIFT_CAP).unwrap()).unwrap()
    }

    #[test]
    fn three_cycle_r_is_one() {
        let g = cycle3();
        assert_eq!(det_pencil(&g.weight_matrix()), poly(&[(1, 1), (0, 1), (0, 1), (-1, 1)]));
        assert_eq!(r_of(&g), UniPoly::one());
    }

    #[test]
    fn uniform_k3_r_at_one() {
        let g = uniform_k3();
        assert_eq!(det_pencil(&g.weight_matrix()), poly(&[(1, 1), (0, 1), (-3, 4), (-1, 4)]));
        let r = r_of(&g);
        assert_eq!(r.eval(&rational(1, 1)), rational(27, 64));
        assert_eq!(r.coeff(0), rational(1, 1));
        r_factorization_check(&g, &m_prime(&g).unwrap(), &r).unwrap();
    }

    #[test]
    fn factorization_detects_tampering() {
        let g = uniform_k3();
        let r = r_of(&g).mul(&poly(&[(1, 1), (1, 7)]));
        assert!(r_factorization_check(&g, &m_prime(&g).unwrap(), &r).unwrap_err().is_violation());
    }

    #[test]
    fn linear_coefficient_examples() {
        let g = uniform_k3();
        let lift = build_lift(&g, DEFAULT_LIFT_CAP).unwrap();
        linear_coefficient_check(&g, &lift, &r_polynomial(&g, &lift).unwrap()).unwrap();
        assert_eq!(r_polynomial(&g, &lift).unwrap().coeff(1), rational(0, 1));

        let g = two_cycle()
            .map_weights(|_| rational(3, 4))
            .with_diagonal(vec![rational(1, 4); 2])
            .unwrap();
        let lift = build_lift(&g, DEFAULT_LIFT_CAP).unwrap();
        let r = r_polynomial(&g, &lift).unwrap();
        assert_eq!(r, UniPoly::one());
        linear_coefficient_check(&g, &lift, &r).unwrap();
    }

    #[test]
    fn symbolic_diagonal_linear_coefficient() {
        let (g, mut reg) = symbolic(&k3());
        let d: Vec<MultiPoly> = (0..3).map(|v| reg.var(&format!("d_{v}"))).collect();
        let g = g.with_diagonal(d.clone()).unwrap();
        let lift = build_lift(&g, DEFAULT_LIFT_CAP).unwrap();
        let r = r_polynomial(&g, &lift).unwrap();
        let sum = MultiPoly::sum(&d);
        assert_eq!(r.coeff(1), sum.sub(&sum.mul(&MultiPoly::from_int(3))));
        linear_coefficient_check(&g, &lift, &r).unwrap();
        r_factorization_check(&g, &m_prime(&g).unwrap(), &r).unwrap();
    }

    #[test]
    fn derivative_gives_tau() {
        assert_eq!(tau_from_zeta_derivative(&cycle3()), Ok(rational(3, 1)));
        assert_eq!(tau_from_zeta_derivative(&uniform_k3()), Ok(rational(9, 4)));
        assert_eq!(tau_from_zeta_derivative(&two_cycle()), Ok(rational(2, 1)));
        assert!(matches!(tau_from_zeta_derivative(&k3()), Err(Error::Precondition(_))));
    }

    #[test]
    fn uniform_k3_series() {
        let s = zeta_truncated_check(&uniform_k3(), 3).unwrap();
        assert_eq!(s.coeffs(), poly(&[(1, 1), (0, 1), (3, 4), (1, 4)]).coeffs());
        zeta_truncated_check(&uniform_k3(), 8).unwrap();
    }

    #[test]
    fn single_vertex_series_is_geometric() {
        let g = unit(1, &[]).with_diagonal(vec![rational(2, 5)]).unwrap();
        let s = zeta_truncated_check(&g, 6).unwrap();
        for k in 0..=6 {
            assert_eq!(*s.coeff(k), Ring::pow(&rational(2, 5), k as u32));
        }
    }

    #[test]
    fn vertex_weighted_series() {
        let g = uniform_k3();
        let ones = vec![rational(1, 1); 3];
        assert_eq!(
            vertex_weighted_zeta_check(&g, &ones, 8).unwrap(),
            zeta_truncated_check(&g, 8).unwrap()
        );
        vertex_weighted_zeta_check(&g, &[rational(1, 1), rational(1, 2), rational(1, 3)], 6).unwrap();
        let s = [rational(0, 1), rational(1, 1), rational(1, 1)];
        // walks through vertex 0 vanish, leaving the 2-cycle on {1, 2}
        let series = vertex_weighted_zeta_check(&g, &s, 4).unwrap();
        assert_eq!(series.coeffs(), poly(&[(1, 1), (0, 1), (1, 4), (0, 1), (1, 16)]).coeffs());
    }

    #[test]
    fn overcounting() {
        for g in [k3(), cycle3(), uniform_k3().with_diagonal(vec![rational(1, 5); 3]).unwrap()] {
            let table = m_prime(&g).unwrap();
            assert_eq!(overcount_identity_check(&g, &table, 6), Ok(6));
            let lift = build_lift(&g, DEFAULT_LIFT_CAP).unwrap();
            assert_eq!(lift_trace_check(&g, &lift, &table, 5), Ok(5));
        }
    }
}
