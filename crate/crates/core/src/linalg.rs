//! Exact nullspaces.
//!
//! Rational matrices are cleared of denominators and eliminated fraction-free
//! over the integers, with the content of each row divided out. Matrices with
//! parameter-dependent entries use Gauss-Jordan over the field of
//! expressions. In both cases the basis returned has a 1 at its own free
//! column and 0 at every other free column, which makes it unique.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::expr::{Expr, Q};

fn row_content(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for a in row.iter() {
        if !a.is_zero() {
            g = g.gcd(a);
            if g.is_one() {
                return;
            }
        }
    }
    if g > BigInt::one() {
        for a in row.iter_mut() {
            *a /= &g;
        }
    }
}

/// Row echelon form of an integer matrix; returns the pivot columns.
fn echelon_int(m: &mut Vec<Vec<BigInt>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        // smallest nonzero entry as pivot keeps numbers small
        let pick = (r..m.len()).filter(|&i| !m[i][c].is_zero()).min_by(|&a, &b| m[a][c].abs().cmp(&m[b][c].abs()));
        let Some(i) = pick else { continue };
        m.swap(r, i);
        let (head, tail) = m.split_at_mut(r + 1);
        let prow = &head[r];
        for row in tail.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let g = row[c].gcd(&prow[c]);
            let fr = &prow[c] / &g;
            let fp = &row[c] / &g;
            for j in c..ncols {
                let v = &row[j] * &fr - &prow[j] * &fp;
                row[j] = v;
            }
            row_content(row);
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    pivots
}

fn nullspace_rational(rows: &[Vec<Q>], ncols: usize) -> Vec<Vec<Q>> {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .filter(|r| r.iter().any(|q| !q.is_zero()))
        .map(|r| {
            let l = r.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
            let mut row: Vec<BigInt> = r.iter().map(|q| (q * Q::from_integer(l.clone())).to_integer()).collect();
            row_content(&mut row);
            row
        })
        .collect();
    m.sort();
    m.dedup();
    let pivots = echelon_int(&mut m, ncols);
    let rq: Vec<Vec<Q>> = m.into_iter().map(|r| r.into_iter().map(Q::from_integer).collect()).collect();
    back_substitute(&rq, &pivots, ncols, |a, b| a / b, Q::zero(), Q::one())
}

fn back_substitute<T: Clone>(
    m: &[Vec<T>],
    pivots: &[usize],
    ncols: usize,
    div: impl Fn(&T, &T) -> T,
    zero: T,
    one: T,
) -> Vec<Vec<T>>
where
    for<'a> &'a T: std::ops::Mul<&'a T, Output = T> + std::ops::Sub<&'a T, Output = T>,
{
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let mut out = Vec::with_capacity(free.len());
    for &f in &free {
        let mut x = vec![zero.clone(); ncols];
        x[f] = one.clone();
        for (r, &pc) in pivots.iter().enumerate().rev() {
            let mut s = zero.clone();
            for j in pc + 1..ncols {
                let t = &m[r][j] * &x[j];
                s = &s - &t;
            }
            x[pc] = div(&s, &m[r][pc]);
        }
        out.push(x);
    }
    out
}

/// Nullspace of a matrix with expression entries (rational functions of
/// parameters). Zero detection is structural on canonical forms.
pub fn nullspace(rows: &[Vec<Expr>], ncols: usize) -> Vec<Vec<Expr>> {
    if rows.iter().all(|r| r.iter().all(|e| e.as_rational().is_some())) {
        let qrows: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(|e| e.as_rational().unwrap()).collect()).collect();
        return nullspace_rational(&qrows, ncols)
            .into_iter()
            .map(|v| v.into_iter().map(Expr::rational).collect())
            .collect();
    }
    let mut m: Vec<Vec<Expr>> = rows.iter().filter(|r| r.iter().any(|e| !e.is_zero())).cloned().collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        // prefer rational pivots, then the smallest entry
        let pick = (r..m.len())
            .filter(|&i| !m[i][c].is_zero())
            .min_by_key(|&i| (m[i][c].as_rational().is_none(), m[i][c].size(), i));
        let Some(i) = pick else { continue };
        m.swap(r, i);
        let inv = m[r][c].recip();
        for j in c..ncols {
            m[r][j] = &m[r][j] * &inv;
        }
        let prow = m[r].clone();
        for (k, row) in m.iter_mut().enumerate() {
            if k == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for j in c..ncols {
                if !prow[j].is_zero() {
                    row[j] = &row[j] - &(&f * &prow[j]);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    back_substitute(&m, &pivots, ncols, |a, b| a / b, Expr::zero(), Expr::one())
}

/// Reduced row echelon form of the row space; zero rows dropped.
pub fn row_basis(rows: &[Vec<Expr>], ncols: usize) -> Vec<Vec<Expr>> {
    let mut m: Vec<Vec<Expr>> = rows.iter().filter(|r| r.iter().any(|e| !e.is_zero())).cloned().collect();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let pick = (r..m.len())
            .filter(|&i| !m[i][c].is_zero())
            .min_by_key(|&i| (m[i][c].as_rational().is_none(), m[i][c].size(), i));
        let Some(i) = pick else { continue };
        m.swap(r, i);
        let inv = m[r][c].recip();
        for j in c..ncols {
            m[r][j] = &m[r][j] * &inv;
        }
        let prow = m[r].clone();
        for (k, row) in m.iter_mut().enumerate() {
            if k == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for j in c..ncols {
                if !prow[j].is_zero() {
                    row[j] = &row[j] - &(&f * &prow[j]);
                }
            }
        }
        r += 1;
    }
    m.truncate(r);
    m
}

/// Reduce `v` modulo the span of an RREF basis (as returned by [`row_basis`]).
pub fn reduce(v: &[Expr], basis: &[Vec<Expr>]) -> Vec<Expr> {
    let mut v = v.to_vec();
    for row in basis {
        let Some(p) = row.iter().position(|e| !e.is_zero()) else { continue };
        if v[p].is_zero() {
            continue;
        }
        let f = v[p].clone();
        for (x, r) in v.iter_mut().zip(row) {
            if !r.is_zero() {
                *x = &*x - &(&f * r);
            }
        }
    }
    v
}

/// Rank of a rational matrix.
pub fn rank(rows: &[Vec<Expr>], ncols: usize) -> usize {
    ncols - nullspace(rows, ncols).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: i64) -> Expr {
        Expr::int(n)
    }

    #[test]
    fn simple_nullspace() {
        // x + y + z = 0, x - y = 0
        let rows = vec![vec![e(1), e(1), e(1)], vec![e(1), e(-1), e(0)]];
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 1);
        assert_eq!(ns[0], vec![Expr::frac(-1, 2), Expr::frac(-1, 2), e(1)]);
    }

    #[test]
    fn parametric_nullspace() {
        let b = Expr::parse("b").unwrap();
        // b x - y = 0
        let rows = vec![vec![b.clone(), e(-1)]];
        let ns = nullspace(&rows, 2);
        assert_eq!(ns, vec![vec![b.recip(), e(1)]]);
    }

    #[test]
    fn rref_and_reduce() {
        let rows = vec![vec![e(2), e(4), e(0)], vec![e(1), e(2), e(1)], vec![e(3), e(6), e(1)]];
        let b = row_basis(&rows, 3);
        assert_eq!(b, vec![vec![e(1), e(2), e(0)], vec![e(0), e(0), e(1)]]);
        assert_eq!(reduce(&[e(1), e(3), e(5)], &b), vec![e(0), e(1), e(0)]);
    }

    #[test]
    fn full_rank_has_empty_nullspace() {
        let rows = vec![vec![e(2), e(0)], vec![e(0), e(3)], vec![e(1), e(1)]];
        assert!(nullspace(&rows, 2).is_empty());
        assert_eq!(rank(&rows, 2), 2);
    }
}
