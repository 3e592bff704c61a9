//! Multivariate polynomials over a generic coefficient ring.
//!
//! Coefficients only need `Clone + Num`, so the same code runs over
//! `Ratio<i64>` (exact harmonic-basis construction) and over `f32`/`f64`
//! (evaluation).

use std::collections::BTreeMap;

use num_rational::Ratio;
use num_traits::{Num, ToPrimitive};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Exponent vector of a monomial.
pub type MultiIndex = Vec<u32>;

pub type Rational = Ratio<i64>;

#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<C> {
    n: usize,
    // sorted by multi-index, no zero coefficients
    terms: Vec<(MultiIndex, C)>,
}

impl<C: Clone + Num> Polynomial<C> {
    pub fn zero(n: usize) -> Self {
        Self { n, terms: Vec::new() }
    }

    pub fn constant(n: usize, c: C) -> Self {
        Self::from_terms(n, [(vec![0; n], c)])
    }

    pub fn monomial(exps: MultiIndex, c: C) -> Self {
        let n = exps.len();
        Self::from_terms(n, [(exps, c)])
    }

    /// The coordinate function `x_i`.
    pub fn variable(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Self::monomial(e, C::one())
    }

    /// Sums duplicate monomials and drops zeros.
    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (MultiIndex, C)>) -> Self {
        let mut acc: BTreeMap<MultiIndex, C> = BTreeMap::new();
        for (e, c) in terms {
            assert_eq!(e.len(), n, "multi-index length must equal the dimension");
            let slot = acc.entry(e).or_insert_with(C::zero);
            *slot = slot.clone() + c;
        }
        Self { n, terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(MultiIndex, C)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(e, _)| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn coefficient(&self, exps: &[u32]) -> C {
        self.terms
            .binary_search_by(|(e, _)| e.as_slice().cmp(exps))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| C::zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_terms(self.n, self.terms.iter().chain(&other.terms).cloned())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_terms(
            self.n,
            self.terms
                .iter()
                .cloned()
                .chain(other.terms.iter().map(|(e, c)| (e.clone(), C::zero() - c.clone()))),
        )
    }

    pub fn scale(&self, s: C) -> Self {
        Self::from_terms(self.n, self.terms.iter().map(|(e, c)| (e.clone(), c.clone() * s.clone())))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let e = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.push((e, ca.clone() * cb.clone()));
            }
        }
        Self::from_terms(self.n, out)
    }

    /// Partial derivative with respect to `x_i`.
    pub fn derivative(&self, i: usize) -> Self {
        Self::from_terms(
            self.n,
            self.terms.iter().filter(|(e, _)| e[i] > 0).map(|(e, c)| {
                let mut d = e.clone();
                let k = d[i];
                d[i] -= 1;
                (d, c.clone() * repeat_one::<C>(k))
            }),
        )
    }

    /// Second derivative in `x_i`, done at coefficient level.
    fn second_derivative(&self, i: usize) -> Self {
        Self::from_terms(
            self.n,
            self.terms.iter().filter(|(e, _)| e[i] > 1).map(|(e, c)| {
                let mut d = e.clone();
                let k = d[i];
                d[i] -= 2;
                (d, c.clone() * repeat_one::<C>(k) * repeat_one::<C>(k - 1))
            }),
        )
    }

    /// Laplacian restricted to the variables whose index is in `vars`.
    fn partial_laplacian(&self, vars: impl Iterator<Item = usize>) -> Self {
        vars.fold(Self::zero(self.n), |acc, i| acc.add(&self.second_derivative(i)))
    }

    pub fn laplacian(&self) -> Self {
        self.partial_laplacian(0..self.n)
    }

    pub fn map_coeffs<D: Clone + Num>(&self, f: impl Fn(&C) -> D) -> Polynomial<D> {
        Polynomial::from_terms(self.n, self.terms.iter().map(|(e, c)| (e.clone(), f(c))))
    }
}

/// `k` as an element of a ring with only `one()` available.
fn repeat_one<C: Clone + Num>(k: u32) -> C {
    (0..k).fold(C::zero(), |acc, _| acc + C::one())
}

impl<T: Real> Polynomial<T> {
    pub fn eval(&self, x: &[T]) -> T {
        debug_assert_eq!(x.len(), self.n);
        let mut acc = T::zero();
        for (e, c) in &self.terms {
            let mut m = *c;
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    m = m * xi.powi(k as i32);
                }
            }
            acc = acc + m;
        }
        acc
    }

    pub fn max_abs_coefficient(&self) -> T {
        self.terms.iter().fold(T::zero(), |m, (_, c)| m.max(c.abs()))
    }

    /// Coefficient table keyed by comma-separated exponents, e.g. `"2,0"`.
    pub fn to_table(&self) -> BTreeMap<String, f64> {
        self.terms
            .iter()
            .map(|(e, c)| (format_multi_index(e), c.as_f64()))
            .collect()
    }

    pub fn from_table(n: usize, table: &BTreeMap<String, f64>) -> Result<Self> {
        let mut terms = Vec::with_capacity(table.len());
        for (key, &c) in table {
            let e = parse_multi_index(key)?;
            if e.len() != n {
                return Err(Error::domain(format!("multi-index `{key}` has {} entries, expected {n}", e.len())));
            }
            if !c.is_finite() {
                return Err(Error::domain(format!("coefficient of `{key}` is not finite")));
            }
            terms.push((e, T::lit(c)));
        }
        Ok(Self::from_terms(n, terms))
    }
}

impl Polynomial<Rational> {
    pub fn to_real<T: Real>(&self) -> Polynomial<T> {
        self.map_coeffs(|c| {
            let v = c.numer().to_f64().unwrap_or(f64::NAN) / c.denom().to_f64().unwrap_or(f64::NAN);
            T::lit(v)
        })
    }
}

pub fn format_multi_index(e: &[u32]) -> String {
    e.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",")
}

pub fn parse_multi_index(s: &str) -> Result<MultiIndex> {
    s.trim()
        .trim_start_matches('[')
        .trim_end_matches(']')
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| Error::domain(format!("bad multi-index `{s}`")))
        })
        .collect()
}

/// All exponent vectors of total degree exactly `d` in `m` variables, in
/// lexicographic order.
pub fn monomials_of_degree(m: usize, d: u32) -> Vec<MultiIndex> {
    fn rec(m: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if prefix.len() + 1 == m {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=d).rev() {
            prefix.push(k);
            rec(m, d - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if m == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(m, d, &mut Vec::with_capacity(m), &mut out);
    out
}

/// Basis of the homogeneous harmonic polynomials of degree `d` in `n`
/// variables, with exact rational coefficients.
///
/// Writing `p = Σ_k x_1^k p_k(x_2..x_n)`, harmonicity is equivalent to
/// `(k+1)(k+2) p_{k+2} = -Δ' p_k`, so `p_0` and `p_1` may be chosen freely.
/// Each seed monomial for `p_0` (degree `d`) or `p_1` (degree `d-1`) yields
/// one basis element; there are `N_d - N_{d-2}` of them.
pub fn homogeneous_harmonic_basis(n: usize, d: u32) -> Vec<Polynomial<Rational>> {
    assert!(n >= 2, "harmonic basis needs n >= 2");
    let lift = |e: &MultiIndex, x1: u32| -> MultiIndex {
        let mut full = Vec::with_capacity(n);
        full.push(x1);
        full.extend_from_slice(e);
        full
    };
    let complete = |p0: Polynomial<Rational>, p1: Polynomial<Rational>| -> Polynomial<Rational> {
        // layers[k] holds p_k embedded with x_1-exponent 0
        let mut layers = vec![p0, p1];
        let mut k = 0usize;
        while !layers[k].is_zero() || !layers[k + 1].is_zero() {
            let next = layers[k]
                .partial_laplacian(1..n)
                .scale(Rational::new(-1, ((k + 1) * (k + 2)) as i64));
            layers.push(next);
            k += 1;
        }
        let mut terms = Vec::new();
        for (k, layer) in layers.iter().enumerate() {
            for (e, c) in layer.terms() {
                let mut e = e.clone();
                e[0] = k as u32;
                terms.push((e, *c));
            }
        }
        Polynomial::from_terms(n, terms)
    };
    let mut basis = Vec::new();
    for e in monomials_of_degree(n - 1, d) {
        basis.push(complete(Polynomial::monomial(lift(&e, 0), Rational::from_integer(1)), Polynomial::zero(n)));
    }
    if d >= 1 {
        for e in monomials_of_degree(n - 1, d - 1) {
            basis.push(complete(Polynomial::zero(n), Polynomial::monomial(lift(&e, 0), Rational::from_integer(1))));
        }
    }
    basis
}

/// `binom(d + m - 1, m - 1)`: number of monomials of degree `d` in `m` variables.
pub fn monomial_count(m: usize, d: u32) -> usize {
    if m == 0 {
        return usize::from(d == 0);
    }
    let (mut num, mut den) = (1u128, 1u128);
    for i in 1..m as u128 {
        num *= d as u128 + i;
        den *= i;
    }
    (num / den) as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: i64) -> Rational {
        Rational::from_integer(v)
    }

    #[test]
    fn derivative_and_laplacian() {
        // p = x^3 y + 2 y^2
        let p = Polynomial::from_terms(2, [(vec![3, 1], r(1)), (vec![0, 2], r(2))]);
        let dx = p.derivative(0);
        assert_eq!(dx, Polynomial::monomial(vec![2, 1], r(3)));
        // Δp = 6xy + 4
        let lap = p.laplacian();
        assert_eq!(lap, Polynomial::from_terms(2, [(vec![1, 1], r(6)), (vec![0, 0], r(4))]));
    }

    #[test]
    fn two_dimensional_degree_two_basis() {
        let b = homogeneous_harmonic_basis(2, 2);
        assert_eq!(b.len(), 2);
        let x2_minus_x1 = Polynomial::from_terms(2, [(vec![0, 2], r(1)), (vec![2, 0], r(-1))]);
        assert!(b.contains(&x2_minus_x1));
        assert!(b.contains(&Polynomial::monomial(vec![1, 1], r(1))));
    }

    #[test]
    fn dimension_counts_match_spherical_harmonics() {
        for n in 2..=5 {
            for d in 0..=6u32 {
                let b = homogeneous_harmonic_basis(n, d);
                let expected = monomial_count(n, d) - if d >= 2 { monomial_count(n, d - 2) } else { 0 };
                assert_eq!(b.len(), expected, "n={n} d={d}");
                for p in &b {
                    assert!(p.laplacian().is_zero());
                    assert!(p.terms().iter().all(|(e, _)| e.iter().sum::<u32>() == d));
                }
            }
        }
        assert_eq!(homogeneous_harmonic_basis(3, 2).len(), 5);
    }

    #[test]
    fn basis_is_linearly_independent() {
        // leading seeds are distinct monomials with x1-exponent 0 or 1, so the
        // restriction to those monomials is the identity pattern
        let b = homogeneous_harmonic_basis(3, 4);
        let mut seeds: Vec<MultiIndex> = Vec::new();
        for p in &b {
            let s = p.terms().iter().filter(|(e, _)| e[0] <= 1).map(|(e, _)| e.clone()).collect::<Vec<_>>();
            assert_eq!(s.len(), 1);
            seeds.push(s[0].clone());
        }
        seeds.sort();
        seeds.dedup();
        assert_eq!(seeds.len(), b.len());
    }

    #[test]
    fn real_evaluation() {
        let p = Polynomial::from_terms(2, [(vec![2, 0], 1.0f64), (vec![0, 2], -1.0)]);
        assert!((p.eval(&[0.2, 0.3]) - (0.04 - 0.09)).abs() < 1e-15);
    }

    #[test]
    fn table_roundtrip_and_errors() {
        let p = Polynomial::from_terms(3, [(vec![1, 0, 2], 0.5), (vec![0, 0, 0], -2.0)]);
        let t = p.to_table();
        assert_eq!(t.get("1,0,2"), Some(&0.5));
        assert_eq!(Polynomial::<f64>::from_table(3, &t).unwrap(), p);
        assert!(Polynomial::<f64>::from_table(2, &t).is_err());
        assert!(parse_multi_index("1,x").is_err());
        assert_eq!(parse_multi_index("[2, 0]").unwrap(), vec![2, 0]);
    }

    #[test]
    fn monomial_enumeration() {
        assert_eq!(monomials_of_degree(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(monomials_of_degree(3, 3).len(), monomial_count(3, 3));
        assert_eq!(monomial_count(3, 2), 6);
    }
}
