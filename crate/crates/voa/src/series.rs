//! Truncated triple-graded series.
//!
//! A [`CharacterSeries`] collects exact coefficients of `z^a q^b p^c`: `z`
//! tracks an integer charge, `q` a non-negative energy level (the series is a
//! power series in `q`, truncated at a fixed order), and `p` an integer cubic
//! grading whose exponents may be negative. Terms are stored sparsely as a
//! Laurent polynomial in `p` per `(charge, level)` cell; zero coefficients
//! are never stored.

use std::collections::BTreeMap;
use std::fmt;

use crate::scalar::Scalar;
use crate::Error;

/// Sparse Laurent polynomial in `p`.
pub type LaurentP = BTreeMap<i64, Scalar>;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CharacterSeries {
    truncation_q: u32,
    terms: BTreeMap<(i64, u32), LaurentP>,
}

impl CharacterSeries {
    pub fn zero(truncation_q: u32) -> Self {
        CharacterSeries {
            truncation_q,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(truncation_q: u32) -> Self {
        let mut s = CharacterSeries::zero(truncation_q);
        s.add_term(0, 0, 0, Scalar::one());
        s
    }

    pub fn truncation_q(&self) -> u32 {
        self.truncation_q
    }

    pub fn terms(&self) -> &BTreeMap<(i64, u32), LaurentP> {
        &self.terms
    }

    /// Adds `coeff * z^charge q^level p^pexp`, dropping the term if the level
    /// exceeds the truncation and pruning cancellations.
    pub fn add_term(&mut self, charge: i64, level: u32, pexp: i64, coeff: Scalar) {
        if level > self.truncation_q || coeff.is_zero() {
            return;
        }
        let cell = self.terms.entry((charge, level)).or_default();
        let entry = cell.entry(pexp).or_insert_with(Scalar::zero);
        *entry = &*entry + &coeff;
        if entry.is_zero() {
            cell.remove(&pexp);
        }
        if cell.is_empty() {
            self.terms.remove(&(charge, level));
        }
    }

    pub fn coefficient(&self, charge: i64, level: u32, pexp: i64) -> Scalar {
        self.terms
            .get(&(charge, level))
            .and_then(|cell| cell.get(&pexp))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    pub fn add(&self, rhs: &CharacterSeries) -> Result<CharacterSeries, Error> {
        if self.truncation_q != rhs.truncation_q {
            return Err(Error::TruncationMismatch(format!(
                "{} vs {}",
                self.truncation_q, rhs.truncation_q
            )));
        }
        let mut out = self.clone();
        for (&(charge, level), cell) in &rhs.terms {
            for (&pexp, coeff) in cell {
                out.add_term(charge, level, pexp, coeff.clone());
            }
        }
        Ok(out)
    }

    /// Exact product, truncated at the shared `q` order.
    pub fn mul(&self, rhs: &CharacterSeries) -> Result<CharacterSeries, Error> {
        if self.truncation_q != rhs.truncation_q {
            return Err(Error::TruncationMismatch(format!(
                "{} vs {}",
                self.truncation_q, rhs.truncation_q
            )));
        }
        let mut out = CharacterSeries::zero(self.truncation_q);
        for (&(ch_a, lv_a), cell_a) in &self.terms {
            for (&(ch_b, lv_b), cell_b) in &rhs.terms {
                let level = lv_a + lv_b;
                if level > self.truncation_q {
                    continue;
                }
                for (&pa, ca) in cell_a {
                    for (&pb, cb) in cell_b {
                        out.add_term(ch_a + ch_b, level, pa + pb, ca * cb);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &Scalar) -> CharacterSeries {
        let mut out = CharacterSeries::zero(self.truncation_q);
        for (&(charge, level), cell) in &self.terms {
            for (&pexp, coeff) in cell {
                out.add_term(charge, level, pexp, coeff * factor);
            }
        }
        out
    }

    /// The charge-`l` component as a series concentrated at charge 0
    /// (i.e. the coefficient of `z^l` as a `(q, p)` series).
    pub fn component(&self, l: i64) -> CharacterSeries {
        let mut out = CharacterSeries::zero(self.truncation_q);
        for (&(charge, level), cell) in &self.terms {
            if charge != l {
                continue;
            }
            for (&pexp, coeff) in cell {
                out.add_term(0, level, pexp, coeff.clone());
            }
        }
        out
    }

    pub fn charges(&self) -> Vec<i64> {
        let mut cs: Vec<i64> = self.terms.keys().map(|&(c, _)| c).collect();
        cs.sort_unstable();
        cs.dedup();
        cs
    }

    /// Forgets the `p` grading: sums every cell's Laurent coefficients.
    pub fn drop_p(&self) -> CharacterSeries {
        let mut out = CharacterSeries::zero(self.truncation_q);
        for (&(charge, level), cell) in &self.terms {
            for coeff in cell.values() {
                out.add_term(charge, level, 0, coeff.clone());
            }
        }
        out
    }

    /// Substitutes `z -> 1/z`, `p -> 1/p`.
    pub fn invert_zp(&self) -> CharacterSeries {
        let mut out = CharacterSeries::zero(self.truncation_q);
        for (&(charge, level), cell) in &self.terms {
            for (&pexp, coeff) in cell {
                out.add_term(-charge, level, -pexp, coeff.clone());
            }
        }
        out
    }

    /// First cell-by-cell mismatch against `rhs`, as a rendered description.
    pub fn first_mismatch(&self, rhs: &CharacterSeries) -> Option<String> {
        let mut keys: Vec<(i64, u32, i64)> = Vec::new();
        for (&(c, l), cell) in self.terms.iter().chain(rhs.terms.iter()) {
            for &p in cell.keys() {
                keys.push((c, l, p));
            }
        }
        keys.sort_unstable();
        keys.dedup();
        for (c, l, p) in keys {
            let a = self.coefficient(c, l, p);
            let b = rhs.coefficient(c, l, p);
            if a != b {
                return Some(format!("z^{c} q^{l} p^{p}: {a} vs {b}"));
            }
        }
        None
    }
}

impl fmt::Display for CharacterSeries {
    /// Sorted term list, one `z^a q^b p^c : coeff` line per term.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return writeln!(f, "0");
        }
        for (&(charge, level), cell) in &self.terms {
            for (&pexp, coeff) in cell {
                writeln!(f, "z^{charge} q^{level} p^{pexp} : {coeff}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binomial_pair(trunc: u32) -> CharacterSeries {
        // (1 + z q)(1 + z^-1 q)
        let mut a = CharacterSeries::one(trunc);
        a.add_term(1, 1, 0, Scalar::one());
        let mut b = CharacterSeries::one(trunc);
        b.add_term(-1, 1, 0, Scalar::one());
        a.mul(&b).unwrap()
    }

    #[test]
    fn binomial_expansion() {
        // (1 + zq)(1 + z^-1 q) = 1 + zq + z^-1 q + q^2
        let s = binomial_pair(4);
        assert_eq!(s.coefficient(0, 0, 0), Scalar::one());
        assert_eq!(s.coefficient(1, 1, 0), Scalar::one());
        assert_eq!(s.coefficient(-1, 1, 0), Scalar::one());
        assert_eq!(s.coefficient(0, 2, 0), Scalar::one());
        assert_eq!(s.terms().len(), 4);
    }

    #[test]
    fn multiplicative_identity() {
        let s = binomial_pair(4);
        assert_eq!(s.mul(&CharacterSeries::one(4)).unwrap(), s);
    }

    #[test]
    fn two_factor_product_z0_q2() {
        // prod_{n=1,2} (1 + z q^n)(1 + z^-1 q^n): the z^0 q^2 coefficient
        // comes only from pairing the two n=1 factors.
        let trunc = 4;
        let mut s = CharacterSeries::one(trunc);
        for n in 1..=2u32 {
            let mut f1 = CharacterSeries::one(trunc);
            f1.add_term(1, n, 0, Scalar::one());
            let mut f2 = CharacterSeries::one(trunc);
            f2.add_term(-1, n, 0, Scalar::one());
            s = s.mul(&f1).unwrap().mul(&f2).unwrap();
        }
        assert_eq!(s.coefficient(0, 2, 0), Scalar::one());
    }

    #[test]
    fn truncation_mismatch_is_an_error() {
        let a = CharacterSeries::one(3);
        let b = CharacterSeries::one(4);
        assert!(a.mul(&b).is_err());
    }
}
