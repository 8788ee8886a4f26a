use super::poly::MultiPolynomial;
use crate::error::{Error, Result};

/// Determinant by fraction-free (Bareiss) elimination. Every intermediate
/// division is exact; zero pivots are handled by row exchange.
pub fn det_fraction_free(m: &[Vec<MultiPolynomial>]) -> Result<MultiPolynomial> {
    let n = m.len();
    if n == 0 || m.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidInput("determinant needs a non-empty square matrix".into()));
    }
    let mut a: Vec<Vec<MultiPolynomial>> = m.to_vec();
    let mut prev = MultiPolynomial::one();
    let mut negate = false;
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return Ok(MultiPolynomial::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.exact_div(&prev).ok_or_else(|| {
                    Error::Internal("fraction-free elimination produced an inexact division".into())
                })?;
            }
            a[i][k] = MultiPolynomial::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if negate { -d } else { d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{GaussianRational, Rational};

    #[test]
    fn one_by_one() {
        assert_eq!(det_fraction_free(&[vec![MultiPolynomial::one()]]).unwrap(), MultiPolynomial::one());
    }

    #[test]
    fn heisenberg_two_by_two() {
        let a = MultiPolynomial::var("a");
        let half_i = MultiPolynomial::constant(GaussianRational::new(Rational::zero(), Rational::new(1, 2)));
        let m = vec![vec![a.clone(), half_i.clone()], vec![-&half_i, a.clone()]];
        let expect = &a * &a - MultiPolynomial::rational(Rational::new(1, 4));
        assert_eq!(det_fraction_free(&m).unwrap(), expect);
    }

    #[test]
    fn needs_row_exchange() {
        let x = MultiPolynomial::var("x");
        let z = MultiPolynomial::zero();
        let one = MultiPolynomial::one();
        let m = vec![
            vec![z.clone(), one.clone(), z.clone()],
            vec![x.clone(), z.clone(), z.clone()],
            vec![z.clone(), z.clone(), one.clone()],
        ];
        assert_eq!(det_fraction_free(&m).unwrap(), -x);
    }

    #[test]
    fn rejects_ragged() {
        assert!(det_fraction_free(&[vec![MultiPolynomial::one(), MultiPolynomial::one()]]).is_err());
    }
}
