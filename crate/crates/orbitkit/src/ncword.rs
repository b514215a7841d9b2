//! Formal linear combinations of noncommutative words over an indexed
//! alphabet, with the symmetrization map used by the quantization of
//! polynomial symbols.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use itertools::Itertools;

use crate::scalar::ScalarExpr;

/// Linear combination of finite sequences of alphabet indices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NcWord {
    pub terms: BTreeMap<Vec<usize>, ScalarExpr>,
}

impl NcWord {
    pub fn zero() -> Self {
        NcWord {
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(c: ScalarExpr) -> Self {
        let mut out = Self::zero();
        out.insert_term(Vec::new(), c);
        out
    }

    pub fn letter(index: usize) -> Self {
        let mut out = Self::zero();
        out.insert_term(vec![index], ScalarExpr::one());
        out
    }

    pub fn monomial(word: Vec<usize>, c: ScalarExpr) -> Self {
        let mut out = Self::zero();
        out.insert_term(word, c);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert_term(&mut self, w: Vec<usize>, c: ScalarExpr) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.terms.remove(&w);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn scale(&self, c: &ScalarExpr) -> NcWord {
        if c.is_zero() {
            return NcWord::zero();
        }
        NcWord {
            terms: self
                .terms
                .iter()
                .map(|(w, v)| (w.clone(), v * c))
                .collect(),
        }
    }

    /// Replace each length-k word by the average of its k! permutations.
    pub fn symmetrize(&self) -> NcWord {
        let mut out = NcWord::zero();
        for (w, c) in &self.terms {
            let k = w.len();
            if k <= 1 {
                out.insert_term(w.clone(), c.clone());
                continue;
            }
            let mut factorial = 1i64;
            for j in 2..=k as i64 {
                factorial *= j;
            }
            let weight = &*c * &ScalarExpr::from_rat(1, factorial);
            for perm in (0..k).permutations(k) {
                let word: Vec<usize> = perm.iter().map(|&i| w[i]).collect();
                out.insert_term(word, weight.clone());
            }
        }
        out
    }

    /// Render with the given letter names.
    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut pieces = Vec::new();
        for (w, c) in &self.terms {
            let mono = w.iter().map(|&i| names[i].clone()).join("*");
            let (neg, body) = crate::poly::render_coeff_term(c, &mono);
            pieces.push((neg, body));
        }
        let mut out = String::new();
        for (i, (neg, body)) in pieces.iter().enumerate() {
            if i == 0 {
                if *neg {
                    out.push('-');
                }
                out.push_str(body);
            } else {
                out.push_str(if *neg { " - " } else { " + " });
                out.push_str(body);
            }
        }
        out
    }
}

impl Add for &NcWord {
    type Output = NcWord;
    fn add(self, rhs: &NcWord) -> NcWord {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.insert_term(w.clone(), c.clone());
        }
        out
    }
}

impl Sub for &NcWord {
    type Output = NcWord;
    fn sub(self, rhs: &NcWord) -> NcWord {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.insert_term(w.clone(), -c);
        }
        out
    }
}

impl Mul for &NcWord {
    type Output = NcWord;
    fn mul(self, rhs: &NcWord) -> NcWord {
        let mut out = NcWord::zero();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &rhs.terms {
                let mut w = wa.clone();
                w.extend_from_slice(wb);
                out.insert_term(w, ca * cb);
            }
        }
        out
    }
}

impl Neg for &NcWord {
    type Output = NcWord;
    fn neg(self) -> NcWord {
        self.scale(&ScalarExpr::from_int(-1))
    }
}

impl fmt::Display for NcWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let max = self
            .terms
            .keys()
            .flat_map(|w| w.iter().copied())
            .max()
            .map(|m| m + 1)
            .unwrap_or(0);
        let names: Vec<String> = (0..max).map(|i| format!("e{}", i)).collect();
        write!(f, "{}", self.render(&names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetrize_pair() {
        // X·Y -> (XY + YX)/2
        let xy = NcWord::monomial(vec![0, 1], ScalarExpr::one());
        let sym = xy.symmetrize();
        let expected = &NcWord::monomial(vec![0, 1], ScalarExpr::from_rat(1, 2))
            + &NcWord::monomial(vec![1, 0], ScalarExpr::from_rat(1, 2));
        assert_eq!(sym, expected);
    }

    #[test]
    fn symmetrize_fixes_squares() {
        let xx = NcWord::monomial(vec![0, 0], ScalarExpr::one());
        assert_eq!(xx.symmetrize(), xx);
    }

    #[test]
    fn symmetrize_triple() {
        let xyz = NcWord::monomial(vec![0, 1, 2], ScalarExpr::one());
        let sym = xyz.symmetrize();
        assert_eq!(sym.terms.len(), 6);
        for c in sym.terms.values() {
            assert_eq!(c, &ScalarExpr::from_rat(1, 6));
        }
    }

    #[test]
    fn symmetrize_idempotent() {
        let w = &NcWord::monomial(vec![0, 1, 1], ScalarExpr::from_int(3))
            + &NcWord::monomial(vec![2, 0], ScalarExpr::i());
        let s = w.symmetrize();
        assert_eq!(s.symmetrize(), s);
    }
}
