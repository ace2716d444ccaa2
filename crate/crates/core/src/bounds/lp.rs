//! Zero-error capacity of a channel graph with feedback.
//!
//! `P_o = min_P max_j sum_{i -> j} P_i` over input distributions `P`; the
//! capacity is `log_q(1/P_o)`. The LP is tiny (one variable per input plus
//! the objective), so it is solved by enumerating vertices: a float pass
//! finds the optimal value, then every near-optimal vertex is recomputed in
//! exact rational arithmetic and the best exactly feasible one wins.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::channel::{ChannelGraph, Symbol};

/// Probability assigned to each input symbol.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InputDistribution {
    pub inputs: Vec<Symbol>,
    #[serde(serialize_with = "serialize_ratios")]
    pub probabilities: Vec<BigRational>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroErrorSolution {
    #[serde(serialize_with = "serialize_ratio")]
    pub p_o: BigRational,
    pub distribution: InputDistribution,
    /// `log_q(1/P_o)`.
    pub capacity: f64,
}

fn serialize_ratio<S: serde::Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn serialize_ratios<S: serde::Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| r.to_string()))
}

/// One row `a . (P, v) = rhs`, with `a` over `n + 1` variables.
struct Row {
    coeffs: Vec<i64>,
    rhs: i64,
}

fn rows(graph: &ChannelGraph) -> (Row, Vec<Row>) {
    let inputs = graph.inputs();
    let n = inputs.len();
    let normalization = Row {
        coeffs: (0..=n).map(|c| i64::from(c < n)).collect(),
        rhs: 1,
    };
    // Output rows: sum_{i -> j} P_i - v <= 0. Nonnegativity rows: -P_i <= 0.
    let mut candidates: Vec<Row> = graph
        .outputs()
        .iter()
        .map(|&j| {
            let mut coeffs: Vec<i64> = inputs
                .iter()
                .map(|&i| i64::from(graph.has_edge(i, j)))
                .collect();
            coeffs.push(-1);
            Row { coeffs, rhs: 0 }
        })
        .collect();
    candidates.extend((0..n).map(|c| {
        let mut coeffs = vec![0; n + 1];
        coeffs[c] = -1;
        Row { coeffs, rhs: 0 }
    }));
    (normalization, candidates)
}

fn solve_f64(system: &[&Row]) -> Option<Vec<f64>> {
    let dim = system.len();
    let mut a: Vec<Vec<f64>> = system
        .iter()
        .map(|r| {
            let mut v: Vec<f64> = r.coeffs.iter().map(|&c| c as f64).collect();
            v.push(r.rhs as f64);
            v
        })
        .collect();
    for col in 0..dim {
        let pivot = (col..dim).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))?;
        if a[pivot][col].abs() < 1e-9 {
            return None;
        }
        a.swap(col, pivot);
        for row in 0..dim {
            if row != col {
                let f = a[row][col] / a[col][col];
                if f != 0.0 {
                    for c in col..=dim {
                        a[row][c] -= f * a[col][c];
                    }
                }
            }
        }
    }
    Some((0..dim).map(|i| a[i][dim] / a[i][i]).collect())
}

fn solve_exact(system: &[&Row]) -> Option<Vec<BigRational>> {
    let dim = system.len();
    let mut a: Vec<Vec<BigRational>> = system
        .iter()
        .map(|r| {
            r.coeffs
                .iter()
                .chain(std::iter::once(&r.rhs))
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect()
        })
        .collect();
    for col in 0..dim {
        let pivot = (col..dim).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let inv = a[col][col].recip();
        for c in col..=dim {
            a[col][c] = &a[col][c] * &inv;
        }
        for row in 0..dim {
            if row != col && !a[row][col].is_zero() {
                let f = a[row][col].clone();
                for c in col..=dim {
                    let d = &f * &a[col][c];
                    a[row][c] -= d;
                }
            }
        }
    }
    Some(
        a.into_iter()
            .map(|mut r| r.pop().expect("rhs column"))
            .collect(),
    )
}

fn dot_f64(row: &Row, x: &[f64]) -> f64 {
    row.coeffs.iter().zip(x).map(|(&c, &v)| c as f64 * v).sum()
}

fn dot_exact(row: &Row, x: &[BigRational]) -> BigRational {
    row.coeffs
        .iter()
        .zip(x)
        .filter(|(&c, _)| c != 0)
        .map(|(&c, v)| v * BigRational::from_integer(BigInt::from(c)))
        .sum()
}

/// Calls `f` with every `k`-subset of `0..n` in lexicographic order.
fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Solves the zero-error LP for `graph` exactly.
pub fn zero_error_capacity(graph: &ChannelGraph) -> ZeroErrorSolution {
    const TOL: f64 = 1e-9;
    let n = graph.inputs().len();
    let (normalization, candidates) = rows(graph);

    let mut vertices: Vec<(f64, Vec<usize>)> = Vec::new();
    for_each_subset(candidates.len(), n, |chosen| {
        let mut system = vec![&normalization];
        system.extend(chosen.iter().map(|&c| &candidates[c]));
        let Some(x) = solve_f64(&system) else { return };
        if candidates
            .iter()
            .all(|r| dot_f64(r, &x) <= r.rhs as f64 + TOL)
        {
            vertices.push((x[n], chosen.to_vec()));
        }
    });
    let best = vertices
        .iter()
        .map(|(v, _)| *v)
        .fold(f64::INFINITY, f64::min);

    let mut exact: Option<Vec<BigRational>> = None;
    for (v, chosen) in &vertices {
        if *v > best + TOL {
            continue;
        }
        let mut system = vec![&normalization];
        system.extend(chosen.iter().map(|&c| &candidates[c]));
        let Some(x) = solve_exact(&system) else {
            continue;
        };
        let feasible = candidates
            .iter()
            .all(|r| dot_exact(r, &x) <= BigRational::from_integer(BigInt::from(r.rhs)));
        if feasible && exact.as_ref().is_none_or(|e| x[n] < e[n]) {
            exact = Some(x);
        }
    }
    // A point mass on any input is feasible with v = 1, so a vertex exists.
    let mut x = exact.expect("the zero-error LP always has a vertex");
    let p_o = x.pop().expect("objective variable");
    let q = graph.alphabet().size() as f64;
    let capacity = if p_o.is_one() {
        0.0
    } else {
        let num = p_o.numer().to_f64().unwrap_or(f64::NAN);
        let den = p_o.denom().to_f64().unwrap_or(f64::NAN);
        (den.ln() - num.ln()) / q.ln()
    };
    debug_assert!(x.iter().all(|p| !p.is_negative()));
    ZeroErrorSolution {
        p_o,
        distribution: InputDistribution {
            inputs: graph.inputs().to_vec(),
            probabilities: x,
        },
        capacity,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ratio(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn z_and_inverse_z() {
        for q in 2..=8usize {
            let half = q.div_ceil(2) as i64;
            for g in [
                ChannelGraph::z(q).unwrap(),
                ChannelGraph::inverse_z(q).unwrap(),
            ] {
                let sol = zero_error_capacity(&g);
                assert_eq!(sol.p_o, ratio(1, half), "q={q}");
                let expect = (half as f64).ln() / (q as f64).ln();
                assert!((sol.capacity - expect).abs() < 1e-12);
                let total: BigRational = sol.distribution.probabilities.iter().sum();
                assert!(total.is_one());
            }
        }
    }

    #[test]
    fn optimal_distribution_meets_the_bound() {
        let g = ChannelGraph::z(5).unwrap();
        let sol = zero_error_capacity(&g);
        for &j in g.outputs() {
            let mass: BigRational = g
                .inputs_reaching(j)
                .iter()
                .map(|i| {
                    let k = g.inputs().iter().position(|x| x == i).unwrap();
                    sol.distribution.probabilities[k].clone()
                })
                .sum();
            assert!(mass <= sol.p_o);
        }
    }

    #[test]
    fn symmetric_channel_has_no_zero_error_rate() {
        let sol = zero_error_capacity(&ChannelGraph::symmetric(4).unwrap());
        assert!(sol.p_o.is_one());
        assert_eq!(sol.capacity, 0.0);
    }

    #[test]
    fn star_channel() {
        // Half on 1 and half on 3 reaches each output at most once; weights
        // 1/2 on outputs 1 and 3 cover every input at least 1/2.
        let sol = zero_error_capacity(&ChannelGraph::gamma_star(4).unwrap());
        assert_eq!(sol.p_o, ratio(1, 2));
    }

    #[test]
    fn noiseless_graph() {
        let q = 3;
        let alphabet = crate::channel::Alphabet::new(q).unwrap();
        let g = ChannelGraph::new(alphabet, 0..3, 0..3, (0..3).map(|i| (i, i))).unwrap();
        let sol = zero_error_capacity(&g);
        assert_eq!(sol.p_o, ratio(1, 3));
        assert!((sol.capacity - 1.0).abs() < 1e-15);
    }

    #[test]
    fn subsets() {
        let mut seen = vec![];
        for_each_subset(4, 2, |s| seen.push(s.to_vec()));
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[0], vec![0, 1]);
        assert_eq!(seen[5], vec![2, 3]);
        let mut empty = 0;
        for_each_subset(3, 0, |_| empty += 1);
        assert_eq!(empty, 1);
    }
}
