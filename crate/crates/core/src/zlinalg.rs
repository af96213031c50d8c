//! Integer linear systems by unimodular column reduction.
//!
//! `A U = H` with `U` unimodular and `H` in column echelon form. Integer
//! solutions of `A x = b` are `x = U y` where `H y = b`, and the columns of
//! `U` past the rank span the integer kernel of `A`.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntegerSolveError {
    #[error("integer overflow during elimination")]
    Overflow,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
}

pub type Row = Vec<i64>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerSolution {
    pub particular: Vec<i64>,
    pub kernel: Vec<Vec<i64>>,
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        if a < 0 { (-a, -1, 0) } else { (a, 1, 0) }
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

fn ck(v: Option<i128>) -> Result<i128, IntegerSolveError> {
    v.ok_or(IntegerSolveError::Overflow)
}

struct Echelon {
    h: Vec<Vec<i128>>,
    u: Vec<Vec<i128>>,
    pivots: Vec<(usize, usize)>, // (row, column)
}

/// Applies the column operation `(c_j, c_k) ← (s c_j + t c_k, q c_j + r c_k)`.
fn col_op(m: &mut [Vec<i128>], j: usize, k: usize, s: i128, t: i128, q: i128, r: i128) -> Result<(), IntegerSolveError> {
    for row in m.iter_mut() {
        let (a, b) = (row[j], row[k]);
        row[j] = ck(ck(s.checked_mul(a))?.checked_add(ck(t.checked_mul(b))?))?;
        row[k] = ck(ck(q.checked_mul(a))?.checked_add(ck(r.checked_mul(b))?))?;
    }
    Ok(())
}

fn echelon(a: &[Row], ncols: usize) -> Result<Echelon, IntegerSolveError> {
    let mut h: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut u: Vec<Vec<i128>> = (0..ncols).map(|i| (0..ncols).map(|j| i128::from(i == j)).collect()).collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut c = 0;
    for i in 0..h.len() {
        if c == ncols {
            break;
        }
        for k in c + 1..ncols {
            let (x, y) = (h[i][c], h[i][k]);
            if y == 0 {
                continue;
            }
            let (g, s, t) = ext_gcd(x, y);
            // [s -y/g; t x/g] has determinant (s x + t y)/g = 1
            let (q, r) = (-y / g, x / g);
            col_op(&mut h, c, k, s, t, q, r)?;
            col_op(&mut u, c, k, s, t, q, r)?;
        }
        if h[i][c] != 0 {
            if h[i][c] < 0 {
                for row in h.iter_mut().chain(u.iter_mut()) {
                    row[c] = -row[c];
                }
            }
            // reduce earlier pivot columns modulo this pivot to keep entries small
            for &(_, pc) in &pivots {
                let f: i128 = h[i][pc].div_euclid(h[i][c]);
                if f != 0 {
                    col_op(&mut h, pc, c, 1, -f, 0, 1)?;
                    col_op(&mut u, pc, c, 1, -f, 0, 1)?;
                }
            }
            pivots.push((i, c));
            c += 1;
        }
    }
    Ok(Echelon { h, u, pivots })
}

/// Solves `A x = b` over the integers. Returns `Ok(None)` when no integer
/// solution exists; otherwise one particular solution and a basis of the
/// integer kernel of `A`.
pub fn solve_integer(a: &[Row], ncols: usize, b: &[i64]) -> Result<Option<IntegerSolution>, IntegerSolveError> {
    if b.len() != a.len() {
        return Err(IntegerSolveError::Dimension { expected: a.len(), got: b.len() });
    }
    if let Some(r) = a.iter().find(|r| r.len() != ncols) {
        return Err(IntegerSolveError::Dimension { expected: ncols, got: r.len() });
    }
    let e = echelon(a, ncols)?;
    let rank = e.pivots.len();
    let mut y = vec![0i128; ncols];
    for (k, &(i, c)) in e.pivots.iter().enumerate() {
        debug_assert_eq!(c, k);
        let mut rest = b[i] as i128;
        for j in 0..k {
            rest = ck(rest.checked_sub(ck(e.h[i][j].checked_mul(y[j]))?))?;
        }
        if rest % e.h[i][c] != 0 {
            return Ok(None);
        }
        y[c] = rest / e.h[i][c];
    }
    for (i, row) in e.h.iter().enumerate() {
        let mut s: i128 = 0;
        for j in 0..rank {
            s = ck(s.checked_add(ck(row[j].checked_mul(y[j]))?))?;
        }
        if s != b[i] as i128 {
            return Ok(None);
        }
    }
    let to_i64 = |v: i128| i64::try_from(v).map_err(|_| IntegerSolveError::Overflow);
    let mut particular = vec![0i64; ncols];
    for (r, out) in particular.iter_mut().enumerate() {
        let mut s: i128 = 0;
        for j in 0..rank {
            s = ck(s.checked_add(ck(e.u[r][j].checked_mul(y[j]))?))?;
        }
        *out = to_i64(s)?;
    }
    let kernel = (rank..ncols)
        .map(|j| (0..ncols).map(|r| to_i64(e.u[r][j])).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Some(IntegerSolution { particular, kernel }))
}

/// Integer kernel basis of `A`.
pub fn integer_kernel(a: &[Row], ncols: usize) -> Result<Vec<Vec<i64>>, IntegerSolveError> {
    let zero = vec![0; a.len()];
    Ok(solve_integer(a, ncols, &zero)?.map(|s| s.kernel).unwrap_or_default())
}

pub fn mat_vec(a: &[Row], x: &[i64]) -> Vec<i64> {
    a.iter().map(|r| r.iter().zip(x).map(|(p, q)| p * q).sum()).collect()
}

/// Decides whether `{ s ≥ 0 : A s = b }` is nonempty, by phase-one simplex
/// in exact rational arithmetic with Bland's pivoting rule.
pub fn nonnegative_feasible(a: &[Row], ncols: usize, b: &[i64]) -> bool {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{Signed, Zero};

    let m = a.len();
    let q = |v: i64| BigRational::from_integer(BigInt::from(v));
    // columns: original variables, then one artificial per row, then rhs
    let width = ncols + m + 1;
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(m + 1);
    for (i, row) in a.iter().enumerate() {
        let flip = if b[i] < 0 { -1 } else { 1 };
        let mut r: Vec<BigRational> = row.iter().map(|&x| q(flip * x)).collect();
        r.extend((0..m).map(|j| q(i64::from(i == j))));
        r.push(q(flip * b[i]));
        t.push(r);
    }
    // objective row: minimise the sum of artificials, written as reduced costs
    let mut obj = vec![BigRational::zero(); width];
    for r in &t {
        for j in 0..ncols {
            obj[j] -= &r[j];
        }
        obj[width - 1] -= &r[width - 1];
    }
    t.push(obj);
    let mut basis: Vec<usize> = (ncols..ncols + m).collect();
    loop {
        let Some(enter) = (0..ncols + m).find(|&j| t[m][j].is_negative()) else { break };
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((li, _)) = leave else { break };
        let piv = t[li][enter].clone();
        for x in t[li].iter_mut() {
            *x /= &piv;
        }
        let pivot_row = t[li].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != li && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        basis[li] = enter;
    }
    t[m][width - 1].is_zero()
}
