//! Revised simplex for max c·x subject to Mx ≤ b, b ≥ 0, with each x_j
//! either free or ≥ 0, so the all-slack basis is feasible from the start.
//! Bland's rule throughout; free columns never leave the basis once in.
//!
//! A basis is described by the basic structural columns J and the tight rows
//! T (rows whose slack is nonbasic), with |J| = |T|. Every iteration
//! refactors the small matrix M[T, J] from the original data, so no rounding
//! error accumulates across pivots. The right-hand side is perturbed by
//! distinct tiny amounts against degenerate cycling, and the final vertex is
//! re-solved with the unperturbed b.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

const EPS: f64 = 1e-12;
const PERTURB: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Outcome {
    Optimal { x: Vec<f64>, value: f64 },
    Unbounded,
}

/// Bland order: structural columns first, then row slacks.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum Var {
    Col(usize),
    Slack(usize),
}

fn singular() -> Error {
    Error::Convergence {
        estimate: f64::NAN,
        error_bound: f64::NAN,
    }
}

/// `m` holds the rows of M, all of equal length; `free[j]` lifts x_j ≥ 0.
pub(crate) fn maximize(
    c: &[f64],
    m: &[Vec<f64>],
    b: &[f64],
    free: &[bool],
    max_pivots: usize,
) -> Result<Outcome> {
    let nv = c.len();
    let rows = m.len();
    if b.iter().any(|&v| v < 0.0) || m.iter().any(|r| r.len() != nv) || free.len() != nv {
        return Err(Error::InvalidParameter(
            "simplex needs b ≥ 0 and rectangular rows".into(),
        ));
    }
    let original = b;
    let scale = b.iter().fold(1.0f64, |a, v| a.max(v.abs()));
    let perturbed: Vec<f64> = b
        .iter()
        .enumerate()
        .map(|(i, v)| {
            v + PERTURB * scale * (1.0 + ((i as f64 + 1.0) * 0.618_033_988_749_895).fract())
        })
        .collect();
    let b = &perturbed[..];
    let mut cols: Vec<usize> = Vec::new();
    let mut tight: Vec<usize> = Vec::new();
    let mut is_tight = vec![false; rows];
    let mut in_basis = vec![false; nv];

    for _ in 0..max_pivots {
        let k = cols.len();
        let lu = DMatrix::from_fn(k, k, |i, j| m[tight[i]][cols[j]]).lu();
        let lu_t = DMatrix::from_fn(k, k, |i, j| m[tight[j]][cols[i]]).lu();
        let solve = |v: DVector<f64>| -> Result<DVector<f64>> {
            if k == 0 {
                return Ok(v);
            }
            lu.solve(&v).ok_or_else(singular)
        };
        let x_j = solve(DVector::from_iterator(k, tight.iter().map(|&i| b[i])))?;
        // duals from Bᵀ y = c_J
        let y = if k == 0 {
            DVector::zeros(0)
        } else {
            lu_t.solve(&DVector::from_iterator(k, cols.iter().map(|&j| c[j])))
                .ok_or_else(singular)?
        };

        let reduced = |v: Var| -> f64 {
            match v {
                Var::Col(j) => {
                    c[j] - tight
                        .iter()
                        .enumerate()
                        .map(|(t, &i)| y[t] * m[i][j])
                        .sum::<f64>()
                }
                Var::Slack(i) => -y[tight.iter().position(|&t| t == i).unwrap_or(0)],
            }
        };
        let improves = |v: Var| {
            let rc = reduced(v);
            rc > EPS || (matches!(v, Var::Col(j) if free[j]) && rc < -EPS)
        };
        let entering = (0..nv)
            .filter(|&j| !in_basis[j])
            .map(Var::Col)
            .chain(tight.iter().map(|&i| Var::Slack(i)))
            .filter(|&v| improves(v))
            .min();
        let Some(entering) = entering else {
            let x_j = solve(DVector::from_iterator(
                k,
                tight.iter().map(|&i| original[i]),
            ))?;
            let mut x = vec![0.0; nv];
            for (t, &j) in cols.iter().enumerate() {
                x[j] = if free[j] { x_j[t] } else { x_j[t].max(0.0) };
            }
            let value = x.iter().zip(c).map(|(a, w)| a * w).sum();
            return Ok(Outcome::Optimal { x, value });
        };

        // direction of the entering variable, and change per unit step of the basic structurals
        let dir = if reduced(entering) < 0.0 { -1.0 } else { 1.0 };
        let rhs = match entering {
            Var::Col(j) => DVector::from_iterator(k, tight.iter().map(|&i| dir * m[i][j])),
            Var::Slack(i) => {
                DVector::from_iterator(k, tight.iter().map(|&t| if t == i { 1.0 } else { 0.0 }))
            }
        };
        let dx = -solve(rhs)?;
        let mut leave: Option<(Var, f64)> = None;
        let mut consider = |v: Var, value: f64, rate: f64| {
            if rate < -EPS {
                let ratio = value.max(0.0) / -rate;
                leave = match leave {
                    Some((w, best)) if best < ratio || (best == ratio && w < v) => Some((w, best)),
                    _ => Some((v, ratio)),
                };
            }
        };
        for (t, &j) in cols.iter().enumerate() {
            if !free[j] {
                consider(Var::Col(j), x_j[t], dx[t]);
            }
        }
        for i in (0..rows).filter(|&i| !is_tight[i]) {
            let mut slack = b[i];
            let mut rate = 0.0;
            for (t, &j) in cols.iter().enumerate() {
                slack -= m[i][j] * x_j[t];
                rate -= m[i][j] * dx[t];
            }
            if let Var::Col(j) = entering {
                rate -= dir * m[i][j];
            }
            consider(Var::Slack(i), slack, rate);
        }
        let Some((leaving, _)) = leave else {
            return Ok(Outcome::Unbounded);
        };

        match entering {
            Var::Col(j) => {
                cols.push(j);
                in_basis[j] = true;
            }
            Var::Slack(i) => {
                tight.retain(|&t| t != i);
                is_tight[i] = false;
            }
        }
        match leaving {
            Var::Col(j) => {
                cols.retain(|&c| c != j);
                in_basis[j] = false;
            }
            Var::Slack(i) => {
                tight.push(i);
                is_tight[i] = true;
            }
        }
    }
    Err(Error::SolverStall(max_pivots))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_problem() {
        // max 3x + 2y, x + y ≤ 4, x + 3y ≤ 6, x ≤ 3
        let m = vec![vec![1.0, 1.0], vec![1.0, 3.0], vec![1.0, 0.0]];
        match maximize(&[3.0, 2.0], &m, &[4.0, 6.0, 3.0], &[false; 2], 100).unwrap() {
            Outcome::Optimal { x, value } => {
                assert!((value - 11.0).abs() < 1e-12);
                assert!((x[0] - 3.0).abs() < 1e-12 && (x[1] - 1.0).abs() < 1e-12);
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn unbounded_and_stall() {
        let m = vec![vec![1.0, -1.0]];
        assert_eq!(
            maximize(&[0.0, 1.0], &m, &[1.0], &[false; 2], 100).unwrap(),
            Outcome::Unbounded
        );
        let m = vec![vec![1.0], vec![2.0]];
        assert!(matches!(
            maximize(&[1.0], &m, &[1.0, 1.0], &[false], 0),
            Err(Error::SolverStall(0))
        ));
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's example cycles under the largest-coefficient rule
        let m = vec![
            vec![0.25, -60.0, -0.04, 9.0],
            vec![0.5, -90.0, -0.02, 3.0],
            vec![0.0, 0.0, 1.0, 0.0],
        ];
        match maximize(
            &[0.75, -150.0, 0.02, -6.0],
            &m,
            &[0.0, 0.0, 1.0],
            &[false; 4],
            1000,
        )
        .unwrap()
        {
            Outcome::Optimal { value, .. } => assert!((value - 0.05).abs() < 1e-12),
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn free_variables() {
        // max −x subject to −x ≤ 2 with x free: x = −2
        match maximize(&[-1.0], &[vec![-1.0]], &[2.0], &[true], 10).unwrap() {
            Outcome::Optimal { x, value } => assert_eq!((x[0], value), (-2.0, 2.0)),
            o => panic!("{o:?}"),
        }
        assert_eq!(
            maximize(&[-1.0], &[vec![1.0]], &[2.0], &[true], 10).unwrap(),
            Outcome::Unbounded
        );
    }
}
