use super::{DatumError, SuperCartanDatum};
use crate::scalar::QPiScalar;
use std::fmt;

/// An element `ν = Σ ν_i i` of `Z[I]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight(pub Vec<i64>);

/// Statistics of `ν ∈ N[I]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightStats {
    pub ht: i64,
    pub parity: i64,
    pub q_nu: QPiScalar,
    pub pi_nu: QPiScalar,
    pub e_nu: i64,
}

impl Weight {
    pub fn zero(n: usize) -> Self {
        Weight(vec![0; n])
    }

    pub fn simple(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        Weight(v)
    }

    /// Weight of a word: `Σ_k i_k`.
    pub fn of_word(n: usize, word: &[usize]) -> Self {
        let mut v = vec![0; n];
        for &i in word {
            v[i] += 1;
        }
        Weight(v)
    }

    pub fn ht(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn add_simple(&self, i: usize, k: i64) -> Weight {
        let mut v = self.0.clone();
        v[i] += k;
        Weight(v)
    }

    pub fn scale(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|a| a * k).collect())
    }

    /// Number of odd letters, counted with multiplicity.
    pub fn odd_count(&self, c: &SuperCartanDatum) -> i64 {
        self.0.iter().enumerate().map(|(i, &v)| v * c.p(i)).sum()
    }

    /// `e(ν) = C(k, 2)` with `k` the number of odd letters.
    pub fn e(&self, c: &SuperCartanDatum) -> i64 {
        let k = self.odd_count(c);
        k * (k - 1) / 2
    }

    /// `q_ν = Π q_i^{ν_i}`.
    pub fn q_nu(&self, c: &SuperCartanDatum) -> QPiScalar {
        QPiScalar::q_pow(self.0.iter().enumerate().map(|(i, &v)| v * c.d(i)).sum())
    }

    /// `π_ν = Π π_i^{ν_i}`.
    pub fn pi_nu(&self, c: &SuperCartanDatum) -> QPiScalar {
        QPiScalar::pi_pow(self.odd_count(c))
    }

    pub fn stats(&self, c: &SuperCartanDatum) -> Result<WeightStats, DatumError> {
        if let Some((i, &v)) = self.0.iter().enumerate().find(|(_, &v)| v < 0) {
            return Err(DatumError::NegativeWeight(v, i));
        }
        Ok(WeightStats {
            ht: self.ht(),
            parity: c.weight_parity(&self.0),
            q_nu: self.q_nu(c),
            pi_nu: self.pi_nu(c),
            e_nu: self.e(c),
        })
    }

    /// All `ν ∈ N[I]` with `ht(ν) = h`, in lexicographic order.
    pub fn all_of_height(n: usize, h: i64) -> Vec<Weight> {
        fn rec(n: usize, h: i64, cur: &mut Vec<i64>, out: &mut Vec<Weight>) {
            if cur.len() == n - 1 {
                cur.push(h);
                out.push(Weight(cur.clone()));
                cur.pop();
                return;
            }
            for k in (0..=h).rev() {
                cur.push(k);
                rec(n, h - k, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if n == 0 {
            return out;
        }
        rec(n, h, &mut Vec::new(), &mut out);
        out.sort();
        out
    }

    /// All `ν ∈ N[I]` with `ht(ν) ≤ h`, by height then lexicographically.
    pub fn all_up_to_height(n: usize, h: i64) -> Vec<Weight> {
        (0..=h).flat_map(|k| Weight::all_of_height(n, k)).collect()
    }

    /// Whether `self − other ∈ N[I]`.
    pub fn dominates(&self, other: &Weight) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datum::builtin;

    #[test]
    fn e_of_small_weights() {
        let d = builtin("B(0,2)").unwrap();
        let c = &d.cartan;
        assert_eq!(Weight(vec![1, 0]).e(c), 0);
        assert_eq!(Weight(vec![2, 0]).e(c), 1);
        assert_eq!(Weight(vec![1, 1]).e(c), 0);
        assert_eq!(Weight(vec![3, 5]).e(c), 3);
    }

    #[test]
    fn negative_weight_rejected() {
        let d = builtin("rank1").unwrap();
        assert_eq!(
            d.weight_stats(&Weight(vec![-1])),
            Err(DatumError::NegativeWeight(-1, 0))
        );
    }

    #[test]
    fn enumerates_heights() {
        assert_eq!(Weight::all_of_height(2, 2).len(), 3);
        assert_eq!(Weight::all_up_to_height(3, 2).len(), 10);
    }
}
