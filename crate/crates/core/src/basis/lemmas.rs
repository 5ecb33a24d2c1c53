//! The two alternating binomial identities behind the closed-form mean radii
//! of the `sin^{2l+2}θ` and `cosθ sin^{2l+2}θ` modes.

use super::BasisError;
use crate::scalar::{binomial, rat, Rational};
use num_traits::Zero;

/// `Σ_{k=m−1}^{l} (−1)^{k+m} (k+2)/(k+1) C(l,k) C(k+1,m)` for `l ≥ m−1 ≥ 0`.
pub fn first_sum(l: usize, m: usize) -> Result<Rational, BasisError> {
    if m == 0 || l + 1 < m {
        return Err(BasisError::LemmaDomain { l, m });
    }
    let mut total = Rational::zero();
    for k in (m - 1)..=l {
        let term = rat(k as i64 + 2, k as i64 + 1)
            * binomial(l as i64, k as i64)
            * binomial(k as i64 + 1, m as i64);
        if (k + m).is_multiple_of(2) {
            total += term;
        } else {
            total -= term;
        }
    }
    Ok(total)
}

/// Value the first sum takes: 0 for `l > m`, 1 for `l = m`, `−1 − 1/(l+1)` for `l = m−1`.
pub fn first_expected(l: usize, m: usize) -> Result<Rational, BasisError> {
    if m == 0 || l + 1 < m {
        return Err(BasisError::LemmaDomain { l, m });
    }
    Ok(if l > m {
        Rational::zero()
    } else if l == m {
        rat(1, 1)
    } else {
        rat(-1, 1) - rat(1, l as i64 + 1)
    })
}

/// The second sum for `l ≥ m ≥ 0`:
/// `Σ_{k=m+1}^{l+1} (−1)^{k+m} C(l+1,k)[(1−(2k+1)(m+2))(2m+2)/(2k+1)·C(k,m+1)
///  + (1−(2k+1)(m+1))(2m+1)/(2k+1)·C(k,m)] + (1−(2m+1)(m+1)) C(l+1,m)`.
pub fn second_sum(l: usize, m: usize) -> Result<Rational, BasisError> {
    if m > l {
        return Err(BasisError::LemmaDomain { l, m });
    }
    let (li, mi) = (l as i64, m as i64);
    let mut total = Rational::zero();
    for k in (m + 1)..=(l + 1) {
        let ki = k as i64;
        let odd = 2 * ki + 1;
        let first = rat((1 - odd * (mi + 2)) * (2 * mi + 2), odd) * binomial(ki, mi + 1);
        let second = rat((1 - odd * (mi + 1)) * (2 * mi + 1), odd) * binomial(ki, mi);
        let term = binomial(li + 1, ki) * (first + second);
        if (k + m).is_multiple_of(2) {
            total += term;
        } else {
            total -= term;
        }
    }
    total += rat(1 - (2 * mi + 1) * (mi + 1), 1) * binomial(li + 1, mi);
    Ok(total)
}

/// Value the second sum takes: 0 for `l > m`, `2(l+1)(l+2)` for `l = m`.
pub fn second_expected(l: usize, m: usize) -> Result<Rational, BasisError> {
    if m > l {
        return Err(BasisError::LemmaDomain { l, m });
    }
    Ok(if l > m {
        Rational::zero()
    } else {
        rat(2 * (l as i64 + 1) * (l as i64 + 2), 1)
    })
}

/// `(first holds, second holds)`; each is `None` when `(l, m)` is outside that identity's domain.
pub fn verify_lemma_identities(l: usize, m: usize) -> (Option<bool>, Option<bool>) {
    let first = match (first_sum(l, m), first_expected(l, m)) {
        (Ok(a), Ok(b)) => Some(a == b),
        _ => None,
    };
    let second = match (second_sum(l, m), second_expected(l, m)) {
        (Ok(a), Ok(b)) => Some(a == b),
        _ => None,
    };
    (first, second)
}

/// Outcome of sweeping both identities over `0 ≤ l, m ≤ max`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LemmaSweep {
    /// In-domain pairs that were evaluated and compared.
    pub verified: usize,
    /// Out-of-domain pairs confirmed to be rejected.
    pub rejected: usize,
    /// `(which identity, l, m)` for every in-domain mismatch.
    pub failures: Vec<(u8, usize, usize)>,
}

impl LemmaSweep {
    pub fn cases(&self) -> usize {
        self.verified + self.rejected
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn sweep_lemmas(max: usize) -> LemmaSweep {
    let mut out = LemmaSweep::default();
    for l in 0..=max {
        for m in 0..=max {
            let (a, b) = verify_lemma_identities(l, m);
            for (which, result) in [(1u8, a), (2u8, b)] {
                match result {
                    Some(true) => out.verified += 1,
                    Some(false) => {
                        out.verified += 1;
                        out.failures.push((which, l, m));
                    }
                    None => out.rejected += 1,
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_cases() {
        assert_eq!(first_sum(3, 3).unwrap(), rat(1, 1));
        assert_eq!(first_sum(2, 3).unwrap(), rat(-4, 3));
        assert_eq!(second_sum(4, 4).unwrap(), rat(60, 1));
        assert_eq!(second_sum(0, 0).unwrap(), rat(4, 1));
        assert_eq!(second_sum(1, 1).unwrap(), rat(12, 1));
        assert_eq!(second_sum(5, 2).unwrap(), rat(0, 1));
    }

    #[test]
    fn domain_rejection() {
        assert!(first_sum(3, 0).is_err());
        assert!(first_sum(1, 3).is_err());
        assert!(second_sum(1, 2).is_err());
        assert_eq!(verify_lemma_identities(0, 5), (None, None));
    }

    #[test]
    fn full_sweep() {
        let sweep = sweep_lemmas(30);
        assert!(sweep.passed(), "{:?}", sweep.failures);
        assert_eq!(sweep.cases(), 2 * 31 * 31);
        // first: m ≥ 1 and l ≥ m − 1; second: l ≥ m
        assert_eq!(sweep.verified, 495 + 496);
    }
}
