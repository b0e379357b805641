//! Exact strict feasibility of homogeneous integer systems `D w > 0`.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Rat;

/// A rational `w` with `d . w >= 1` for every row `d`, or `None` when no such
/// `w` exists. Decided by phase one of the simplex method (Bland's rule) on
/// the alternative system `D^T lambda = 0, sum lambda = 1, lambda >= 0`; the
/// witness is read off the optimal duals.
pub fn strictly_feasible(rows: &[Vec<i64>]) -> Option<Vec<Rat>> {
    let Some(first) = rows.first() else { return Some(Vec::new()) };
    let n = first.len();
    let k = rows.len();
    if rows.iter().any(|r| r.iter().all(|&x| x == 0)) {
        return None;
    }
    let m = n + 1;
    let width = k + m;
    // tableau rows: B^-1 [A | I], rhs B^-1 b
    let mut t: Vec<Vec<Rat>> = (0..m)
        .map(|i| {
            let mut row = Vec::with_capacity(width);
            for d in rows {
                row.push(if i < n { Rat::from_int(d[i]) } else { Rat::ONE });
            }
            for a in 0..m {
                row.push(if a == i { Rat::ONE } else { Rat::ZERO });
            }
            row
        })
        .collect();
    let mut rhs: Vec<Rat> = (0..m).map(|i| if i == n { Rat::ONE } else { Rat::ZERO }).collect();
    let mut basis: Vec<usize> = (k..width).collect();
    let mut cost: Vec<Rat> = (0..width)
        .map(|j| if j < k { -(0..m).fold(Rat::ZERO, |acc, i| &acc + &t[i][j]) } else { Rat::ZERO })
        .collect();
    loop {
        let Some(enter) = (0..width).find(|&j| cost[j].is_negative()) else { break };
        let mut leave: Option<(usize, Rat)> = None;
        for i in 0..m {
            if !t[i][enter].is_positive() {
                continue;
            }
            let ratio = &rhs[i] / &t[i][enter];
            leave = match leave {
                None => Some((i, ratio)),
                Some((li, lr)) => {
                    if ratio < lr || (ratio == lr && basis[i] < basis[li]) {
                        Some((i, ratio))
                    } else {
                        Some((li, lr))
                    }
                }
            };
        }
        // phase one is bounded below by zero, so a leaving row always exists
        let (p, _) = leave.expect("bounded phase one");
        let inv = t[p][enter].recip();
        for x in t[p].iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        rhs[p] = &rhs[p] * &inv;
        let pivot_row = t[p].clone();
        let pivot_rhs = rhs[p].clone();
        for i in 0..m {
            if i == p || t[i][enter].is_zero() {
                continue;
            }
            let f = t[i][enter].clone();
            for (x, y) in t[i].iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
            rhs[i] = &rhs[i] - &(&f * &pivot_rhs);
        }
        let f = cost[enter].clone();
        for (x, y) in cost.iter_mut().zip(&pivot_row) {
            if !y.is_zero() {
                *x = &*x - &(&f * y);
            }
        }
        basis[p] = enter;
    }
    let value = (0..m).filter(|&i| basis[i] >= k).fold(Rat::ZERO, |acc, i| &acc + &rhs[i]);
    if !value.is_positive() {
        return None;
    }
    // duals y_i = 1 - reduced cost of artificial i; y = (w, t) with w.d + t <= 0 and t > 0
    let y: Vec<Rat> = (0..m).map(|i| &Rat::ONE - &cost[k + i]).collect();
    let tt = y[n].clone();
    debug_assert!(tt.is_positive());
    Some(y[..n].iter().map(|w| -&(w / &tt)).collect())
}

/// Smallest positive integer multiple of a rational vector.
pub fn clear_denominators(v: &[Rat]) -> Vec<i64> {
    let mut l = num_bigint::BigInt::one();
    for x in v {
        l = l.lcm(&x.denom());
    }
    let ints: Vec<num_bigint::BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let g = ints.iter().fold(num_bigint::BigInt::zero(), |acc, x| acc.gcd(x));
    ints.iter()
        .map(|x| {
            let y = if g.is_zero() { x.clone() } else { x / &g };
            i64::try_from(y.abs()).map(|a| if y.is_negative() { -a } else { a }).expect("witness fits in i64")
        })
        .collect()
}
