//! Smith normal form over the integers, used to present finite abelian
//! unit groups and to solve character-extension systems.

/// `U * A * V = diag(d)` with `U`, `V` unimodular.
#[derive(Clone, Debug)]
pub struct Snf {
    pub d: Vec<i128>,
    pub u: Vec<Vec<i128>>,
    pub v: Vec<Vec<i128>>,
}

fn identity(n: usize) -> Vec<Vec<i128>> {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

pub fn smith(a: &[Vec<i128>], cols: usize) -> Snf {
    let rows = a.len();
    let mut m: Vec<Vec<i128>> = a.to_vec();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let n = rows.min(cols);

    for t in 0..n {
        loop {
            // pivot: smallest nonzero magnitude in the lower-right block
            let mut best: Option<(usize, usize)> = None;
            for (i, row) in m.iter().enumerate().skip(t) {
                for (j, &x) in row.iter().enumerate().skip(t) {
                    if x != 0 && best.is_none_or(|(bi, bj)| x.abs() < m[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            m.swap(t, pi);
            u.swap(t, pi);
            for row in m.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }

            let mut clean = true;
            let piv = m[t][t];
            for i in t + 1..rows {
                let q = m[i][t].div_euclid(piv);
                if q != 0 {
                    for j in 0..cols {
                        m[i][j] -= q * m[t][j];
                    }
                    for j in 0..rows {
                        u[i][j] -= q * u[t][j];
                    }
                }
                if m[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let q = m[t][j].div_euclid(piv);
                if q != 0 {
                    for i in 0..rows {
                        m[i][j] -= q * m[i][t];
                    }
                    for row in v.iter_mut() {
                        row[j] -= q * row[t];
                    }
                }
                if m[t][j] != 0 {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility of the remaining block by the pivot
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| m[i][j] % piv != 0));
            match bad {
                Some(i) => {
                    for j in 0..cols {
                        m[t][j] += m[i][j];
                    }
                    for j in 0..rows {
                        u[t][j] += u[i][j];
                    }
                }
                None => break,
            }
        }
        if m[t][t] < 0 {
            for j in 0..cols {
                m[t][j] = -m[t][j];
            }
            for j in 0..rows {
                u[t][j] = -u[t][j];
            }
        }
    }
    let d = (0..n).map(|i| m[i][i]).collect();
    Snf { d, u, v }
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a.abs(), a.signum(), 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// Solves `B k = rhs (mod l)` for an integer vector `k`, returning the
/// canonical solution produced by the Smith form (free coordinates zero).
pub fn solve_mod(b: &[Vec<i128>], cols: usize, rhs: &[i128], l: i128) -> Option<Vec<i128>> {
    let s = smith(b, cols);
    let rows = b.len();
    let c: Vec<i128> = (0..rows)
        .map(|i| (0..rows).map(|j| s.u[i][j].rem_euclid(l) * rhs[j].rem_euclid(l) % l).sum::<i128>() % l)
        .collect();
    let mut y = vec![0i128; cols];
    for i in 0..rows {
        let di = if i < s.d.len() { s.d[i] } else { 0 };
        if di == 0 {
            if c[i].rem_euclid(l) != 0 {
                return None;
            }
            continue;
        }
        let (g, x, _) = ext_gcd(di.rem_euclid(l), l);
        let g = if g == 0 { l } else { g };
        if c[i].rem_euclid(g) != 0 {
            return None;
        }
        let lg = l / g;
        y[i] = ((c[i] / g) % lg * x.rem_euclid(lg)).rem_euclid(lg);
    }
    let k = (0..cols)
        .map(|i| (0..cols).map(|j| s.v[i][j].rem_euclid(l) * y[j] % l).sum::<i128>().rem_euclid(l))
        .collect();
    Some(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn matmul(a: &[Vec<i128>], b: &[Vec<i128>]) -> Vec<Vec<i128>> {
        let n = a.len();
        let k = b.len();
        let m = b[0].len();
        (0..n).map(|i| (0..m).map(|j| (0..k).map(|t| a[i][t] * b[t][j]).sum()).collect()).collect()
    }

    #[test]
    fn small_example() {
        let a = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        let s = smith(&a, 3);
        assert_eq!(s.d, vec![2, 6, 12]);
        let prod = matmul(&matmul(&s.u, &a), &s.v);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(prod[i][j], if i == j { s.d[i] } else { 0 });
            }
        }
    }

    #[test]
    fn solves_congruences() {
        let b = vec![vec![2, 0], vec![0, 3], vec![1, 1]];
        let rhs = vec![0, 0, 5];
        let k = solve_mod(&b, 2, &rhs, 6).unwrap();
        for (row, r) in b.iter().zip(&rhs) {
            let lhs: i128 = row.iter().zip(&k).map(|(x, y)| x * y).sum();
            assert_eq!((lhs - r).rem_euclid(6), 0);
        }
        assert!(solve_mod(&[vec![2]], 1, &[1], 4).is_none());
    }

    proptest! {
        #[test]
        fn snf_is_a_factorization(entries in proptest::collection::vec(-9i128..10, 12)) {
            let a: Vec<Vec<i128>> = entries.chunks(3).map(|c| c.to_vec()).collect();
            let s = smith(&a, 3);
            let prod = matmul(&matmul(&s.u, &a), &s.v);
            for i in 0..4 {
                for j in 0..3 {
                    let expect = if i == j { s.d[i] } else { 0 };
                    prop_assert_eq!(prod[i][j], expect);
                }
            }
            for w in s.d.windows(2) {
                if w[0] != 0 { prop_assert_eq!(w[1] % w[0], 0); }
            }
        }
    }
}
