//! Exact feasibility for small linear systems over ℚ, by phase-one simplex
//! with Bland's rule.

use crate::field::Rational;

/// Some `x ≥ 0` with `a·x = b`, or `None` when no such point exists.
///
/// Every row of `a` must have the same length. Bland's rule (smallest
/// eligible index enters, smallest basic index leaves on ties) prevents
/// cycling, so the loop terminates.
pub fn feasible_point(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    assert_eq!(b.len(), m, "one right-hand side per row");
    if m == 0 {
        return Some(vec![Rational::zero(); n]);
    }
    let rhs = n + m;
    let mut t: Vec<Vec<Rational>> = Vec::with_capacity(m);
    for (r, (row, br)) in a.iter().zip(b).enumerate() {
        assert_eq!(row.len(), n, "ragged constraint matrix");
        let flip = br.is_negative();
        let mut line: Vec<Rational> = row.iter().map(|x| if flip { -x } else { x.clone() }).collect();
        line.extend((0..m).map(|k| if k == r { Rational::one() } else { Rational::zero() }));
        line.push(if flip { -br } else { br.clone() });
        t.push(line);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    // reduced costs of the phase-one objective Σ artificials
    let mut obj: Vec<Rational> = (0..=rhs)
        .map(|j| if (n..rhs).contains(&j) { Rational::zero() } else { -t.iter().map(|row| &row[j]).sum::<Rational>() })
        .collect();

    while let Some(enter) = (0..rhs).find(|&j| obj[j].is_negative()) {
        let mut leave: Option<usize> = None;
        for r in 0..m {
            if !t[r][enter].is_positive() {
                continue;
            }
            let ratio = &t[r][rhs] / &t[r][enter];
            leave = match leave {
                None => Some(r),
                Some(l) => {
                    let best = &t[l][rhs] / &t[l][enter];
                    if ratio < best || (ratio == best && basis[r] < basis[l]) {
                        Some(r)
                    } else {
                        Some(l)
                    }
                }
            };
        }
        // the phase-one objective is bounded below by 0
        let l = leave.expect("phase one is bounded");
        let pivot = t[l][enter].clone();
        for x in t[l].iter_mut() {
            *x = &*x / &pivot;
        }
        let pivot_row = t[l].clone();
        for (r, row) in t.iter_mut().enumerate() {
            if r != l && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x = &*x - &(&f * p);
                }
            }
        }
        let f = obj[enter].clone();
        for (x, p) in obj.iter_mut().zip(&pivot_row) {
            *x = &*x - &(&f * p);
        }
        basis[l] = enter;
    }
    if !obj[rhs].is_zero() {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (r, &j) in basis.iter().enumerate() {
        if j < n {
            x[j] = t[r][rhs].clone();
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    fn check(a: &[Vec<Rational>], b: &[Rational], x: &[Rational]) {
        assert!(x.iter().all(|v| !v.is_negative()));
        for (row, br) in a.iter().zip(b) {
            let lhs: Rational = row.iter().zip(x).map(|(p, q)| p * q).sum();
            assert_eq!(&lhs, br);
        }
    }

    #[test]
    fn finds_a_simplex_point() {
        // x + y + z = 1, x − y = 0
        let a = vec![vec![r(1), r(1), r(1)], vec![r(1), r(-1), r(0)]];
        let b = vec![r(1), r(0)];
        let x = feasible_point(&a, &b).unwrap();
        check(&a, &b, &x);
    }

    #[test]
    fn detects_infeasibility() {
        // x + y = 1, x + y = 2
        let a = vec![vec![r(1), r(1)], vec![r(1), r(1)]];
        assert!(feasible_point(&a, &[r(1), r(2)]).is_none());
        // x = −1 has no nonnegative solution
        assert!(feasible_point(&[vec![r(1)]], &[r(-1)]).is_none());
    }

    #[test]
    fn negative_right_hand_sides_are_flipped() {
        let a = vec![vec![r(-1), r(-2)]];
        let b = vec![r(-4)];
        let x = feasible_point(&a, &b).unwrap();
        check(&a, &b, &x);
    }

    #[test]
    fn degenerate_system_terminates() {
        // many redundant rows through the origin
        let a: Vec<Vec<Rational>> = (0..6).map(|k| vec![r(k), r(-k), r(0), r(1)]).chain([vec![r(1); 4]]).collect();
        let mut b = vec![r(0); 6];
        b.push(r(1));
        let x = feasible_point(&a, &b).unwrap();
        check(&a, &b, &x);
    }
}
