use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use super::{Rational, Ring};
use crate::{Error, Result};

/// Exponent vector of a monomial, one slot per variable index.
///
/// Trailing zero exponents are never stored, so a monomial does not need to
/// know how many variables the surrounding registry declares. Comparison is
/// lexicographic on the padded vectors, which is a valid monomial order with
/// variable 0 the most significant.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(index: usize) -> Self {
        let mut exps = vec![0; index + 1];
        exps[index] = 1;
        Monomial(exps)
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        let mut exps = exps.to_vec();
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exponent(&self, var: usize) -> u32 {
        self.0.get(var).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let (long, short) = if self.0.len() >= other.0.len() {
            (&self.0, &other.0)
        } else {
            (&other.0, &self.0)
        };
        let mut exps = long.clone();
        for (e, s) in exps.iter_mut().zip(short) {
            *e += s;
        }
        Monomial(exps)
    }

    /// `self / other` when `other` divides `self`.
    fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        if other.0.len() > self.0.len() {
            return None;
        }
        let mut exps = self.0.clone();
        for (e, o) in exps.iter_mut().zip(&other.0) {
            *e = e.checked_sub(*o)?;
        }
        Some(Monomial::from_exponents(&exps))
    }
}

/// Ordered list of variable names. Variable `i` of a [`MultiPoly`] is the
/// `i`-th name here.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VarRegistry {
    names: Vec<String>,
}

impl VarRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Index of `name`, registering it if it is new.
    pub fn intern(&mut self, name: &str) -> usize {
        match self.index_of(name) {
            Some(i) => i,
            None => {
                self.names.push(name.to_string());
                self.names.len() - 1
            }
        }
    }

    /// The polynomial consisting of the single variable `name`.
    pub fn var(&mut self, name: &str) -> MultiPoly {
        MultiPoly::var(self.intern(name))
    }

    /// Turn a name-keyed assignment into one indexed like the registry.
    pub fn assignment<'a, I>(&self, values: I) -> Result<Vec<Rational>>
    where
        I: IntoIterator<Item = (&'a str, Rational)>,
    {
        let mut slots: Vec<Option<Rational>> = vec![None; self.names.len()];
        for (name, value) in values {
            if let Some(i) = self.index_of(name) {
                slots[i] = Some(value);
            }
        }
        slots
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::MissingVariable(self.names[i].clone())))
            .collect()
    }
}

/// Sparse multivariate polynomial with rational coefficients.
///
/// Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !Zero::is_zero(&c) {
            terms.insert(Monomial::one(), c);
        }
        MultiPoly { terms }
    }

    pub fn var(index: usize) -> Self {
        Self::term(Monomial::var(index), One::one())
    }

    pub fn term(mono: Monomial, coeff: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !Zero::is_zero(&coeff) {
            terms.insert(mono, coeff);
        }
        MultiPoly { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Highest exponent of variable `var` appearing in any term.
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exponent(var)).max().unwrap_or(0)
    }

    /// Number of variable slots any term uses.
    pub fn var_span(&self) -> usize {
        self.terms.keys().map(|m| m.0.len()).max().unwrap_or(0)
    }

    /// Returns the constant value when the polynomial has no variables.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Zero::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, mono: Monomial, coeff: Rational) {
        use alloc::collections::btree_map::Entry;
        if Zero::is_zero(&coeff) {
            return;
        }
        match self.terms.entry(mono) {
            Entry::Vacant(slot) => {
                slot.insert(coeff);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += coeff;
                if Zero::is_zero(slot.get()) {
                    slot.remove();
                }
            }
        }
    }

    /// Substitute rational values for every variable. `values[i]` is the
    /// value of variable `i`.
    pub fn evaluate(&self, values: &[Rational]) -> Result<Rational> {
        let mut total: Rational = Zero::zero();
        for (mono, coeff) in &self.terms {
            let mut value = coeff.clone();
            for (var, &e) in mono.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let x = values
                    .get(var)
                    .ok_or_else(|| Error::MissingVariable(alloc::format!("#{var}")))?;
                value *= num_traits::pow(x.clone(), e as usize);
            }
            total += value;
        }
        Ok(total)
    }

    /// Substitute the single variable `var` by the polynomial `value`.
    pub fn substitute(&self, var: usize, value: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::default();
        for (mono, coeff) in &self.terms {
            let e = mono.exponent(var);
            let mut rest = mono.0.clone();
            if var < rest.len() {
                rest[var] = 0;
            }
            let base = MultiPoly::term(Monomial::from_exponents(&rest), coeff.clone());
            out = out.add(&base.mul(&value.pow(e)));
        }
        out
    }

    /// Render with names from `reg`; unknown indices print as `v<i>`.
    pub fn display<'a>(&'a self, reg: &'a VarRegistry) -> PolyDisplay<'a> {
        PolyDisplay {
            poly: self,
            names: Some(reg),
        }
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a MultiPoly,
    names: Option<&'a VarRegistry>,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (mono, coeff)) in self.poly.terms.iter().rev().enumerate() {
            let negative = coeff.is_negative();
            let magnitude = coeff.abs();
            if k == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            let unit = One::is_one(&magnitude);
            if !unit || mono.is_one() {
                write!(f, "{magnitude}")?;
            }
            let mut first = unit;
            for (var, &e) in mono.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                match self.names.and_then(|r| r.names.get(var)) {
                    Some(name) => f.write_str(name)?,
                    None => write!(f, "v{var}")?,
                }
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        PolyDisplay {
            poly: self,
            names: None,
        }
        .fmt(f)
    }
}

impl Ring for MultiPoly {
    fn zero() -> Self {
        MultiPoly::default()
    }

    fn one() -> Self {
        MultiPoly::constant(One::one())
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add(&self, other: &Self) -> Self {
        let (mut out, smaller) = if self.terms.len() >= other.terms.len() {
            (self.clone(), other)
        } else {
            (other.clone(), self)
        };
        for (m, c) in &smaller.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = MultiPoly::default();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    fn neg(&self) -> Self {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    /// Multivariate division driven by the lexicographic leading term. When
    /// `den` divides `self` every intermediate remainder is a multiple of
    /// `den`, so its leading monomial is divisible by that of `den`; the
    /// first time that fails the division is known to be inexact.
    fn div_exact(&self, den: &Self) -> Result<Self> {
        let (lead_mono, lead_coeff) = den.leading_term().ok_or(Error::DivisionByZero)?;
        if den.terms.len() == 1 {
            let mut out = MultiPoly::default();
            for (m, c) in &self.terms {
                let q = m.checked_div(lead_mono).ok_or(Error::InexactDivision)?;
                out.terms.insert(q, c / lead_coeff);
            }
            return Ok(out);
        }
        let mut rem = self.clone();
        let mut quot = MultiPoly::default();
        while let Some((rm, rc)) = rem.leading_term() {
            let qm = rm.checked_div(lead_mono).ok_or(Error::InexactDivision)?;
            let qc = rc / lead_coeff;
            for (dm, dc) in &den.terms {
                rem.add_term(qm.mul(dm), -(&qc * dc));
            }
            quot.add_term(qm, qc);
        }
        Ok(quot)
    }

    fn from_rational(q: Rational) -> Self {
        MultiPoly::constant(q)
    }

    fn size_hint(&self) -> usize {
        self.terms.len()
    }
}
