//! Independent brute-force enumerators used to cross-check the main
//! implementations. Nothing here shares code with the paths it checks.

use crate::characters::LaurentExpansion;
use crate::scalar::Q;
use crate::weights::Weight;
use num::bigint::BigInt;
use num::{One, Zero};

/// All semistandard tableaux of shape `lambda` with entries in 1..=n,
/// returned as row-major fillings. Rows weakly increase, columns strictly
/// increase.
pub fn semistandard_tableaux(lambda: &[i64], n: usize) -> Vec<Vec<Vec<u8>>> {
    let rows: Vec<usize> = lambda.iter().map(|&v| v as usize).collect();
    let mut filling: Vec<Vec<u8>> = rows.iter().map(|&r| vec![0u8; r]).collect();
    let mut out = Vec::new();
    fill(&rows, n as u8, &mut filling, 0, 0, &mut out);
    out
}

fn fill(
    rows: &[usize],
    n: u8,
    filling: &mut Vec<Vec<u8>>,
    r: usize,
    c: usize,
    out: &mut Vec<Vec<Vec<u8>>>,
) {
    if r == rows.len() {
        out.push(filling.clone());
        return;
    }
    if c == rows[r] {
        fill(rows, n, filling, r + 1, 0, out);
        return;
    }
    let min_row = if c > 0 { filling[r][c - 1] } else { 1 };
    let min_col = if r > 0 && c < rows[r - 1] {
        filling[r - 1][c] + 1
    } else {
        1
    };
    for v in min_row.max(min_col)..=n {
        filling[r][c] = v;
        fill(rows, n, filling, r, c + 1, out);
    }
    filling[r][c] = 0;
}

/// Number of semistandard tableaux of shape λ with entries in 1..=n: the
/// dimension of the SL(n) module Γ_λ.
pub fn semistandard_count(lambda: &[i64], n: usize) -> BigInt {
    BigInt::from(semistandard_tableaux(lambda, n).len())
}

/// The Schur polynomial s_λ(x₁,…,x_n) as the tableau generating sum.
pub fn schur_laurent(lambda: &[i64], n: usize) -> LaurentExpansion {
    let mut out = LaurentExpansion::zero(n);
    for t in semistandard_tableaux(lambda, n) {
        let mut mono = vec![0i16; n];
        for row in &t {
            for &v in row {
                mono[v as usize - 1] += 1;
            }
        }
        out = out.add(&LaurentExpansion::monomial(n, mono, BigInt::one()));
    }
    out
}

/// Brute-force interlacing enumeration for SO(n) → SO(n−1) branching,
/// scanning the full box of candidate tuples rather than recursing on the
/// interlacing chain.
pub fn interlacing_brute_force(w: &Weight, n: usize) -> Vec<Weight> {
    let k = (n - 1) / 2;
    let bound = w.entry(1).abs();
    let mut out = Vec::new();
    let mut cur = vec![0i64; k];
    scan(&mut cur, 0, bound, &mut |mu: &[i64]| {
        if interlaces(w, mu, n) {
            if let Ok(m) = Weight::new(mu, n - 1) {
                out.push(m);
            }
        }
    });
    out.sort();
    out.dedup();
    out
}

fn scan(cur: &mut Vec<i64>, pos: usize, bound: i64, f: &mut dyn FnMut(&[i64])) {
    if pos == cur.len() {
        f(cur);
        return;
    }
    for v in -bound..=bound {
        cur[pos] = v;
        scan(cur, pos + 1, bound, f);
    }
}

fn interlaces(w: &Weight, mu: &[i64], n: usize) -> bool {
    let k = mu.len();
    let lam = |j: usize| -> i64 {
        if j == n / 2 {
            w.entry(j).abs()
        } else {
            w.entry(j)
        }
    };
    for j in 1..=k {
        let v = mu[j - 1];
        if v > lam(j) {
            return false;
        }
        let lower_ok = if j == k && (n - 1) % 2 == 0 {
            v >= -lam(j)
        } else {
            v >= lam(j + 1)
        };
        if !lower_ok {
            return false;
        }
        // μ itself must be a valid weakly decreasing tuple
        if j < k {
            let next = if j + 1 == k { mu[j].abs() } else { mu[j] };
            if v < next {
                return false;
            }
        }
    }
    true
}

/// The column-exchange relations for a filled tableau: for each pair of
/// adjacent columns and each exchange size k, the symmetrised tensor of the
/// filling equals the sum over all ways to swap the top k entries of the
/// right column against k entries of the left column, keeping vertical
/// order. Returns true when μ_λ(e_T − Σ_S e_S) = 0 for every semistandard T.
pub fn check_bianchi_all(lambda: &[i64], n: usize) -> bool {
    use crate::tensor::{SparseTensor, TableauShape};
    let shape = TableauShape::from_rows(lambda);
    let cols = shape.columns().to_vec();
    let tensor_of = |columns: &[Vec<u8>]| -> SparseTensor {
        let flat: Vec<u8> = columns.iter().flatten().copied().collect();
        SparseTensor::basis(n, &flat)
    };
    for t in semistandard_tableaux(lambda, n) {
        // column-major values
        let col_vals: Vec<Vec<u8>> = (0..cols.len())
            .map(|c| (0..cols[c]).map(|r| t[r][c]).collect())
            .collect();
        for c in 1..cols.len() {
            let hl = cols[c - 1];
            let hr = cols[c];
            for k in 1..=hl.min(hr) {
                let mut rel = crate::tensor::young_symmetrize(&tensor_of(&col_vals), &shape)
                    .expect("shape matches");
                for subset in k_subsets(hl, k) {
                    let mut new_cols = col_vals.clone();
                    for (a, &row) in subset.iter().enumerate() {
                        new_cols[c - 1][row] = col_vals[c][a];
                        new_cols[c][a] = col_vals[c - 1][row];
                    }
                    let s = crate::tensor::young_symmetrize(&tensor_of(&new_cols), &shape)
                        .expect("shape matches");
                    rel = rel.sub(&s);
                }
                if !rel.is_zero() {
                    return false;
                }
            }
        }
    }
    true
}

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Intrinsic volumes of an axis-aligned box with the given side lengths:
/// μ_k = e_k(a₁, …, a_n), the elementary symmetric polynomial.
pub fn box_intrinsic_volume(sides: &[Q], k: usize) -> Q {
    let n = sides.len();
    if k > n {
        return Q::zero();
    }
    // e_k by dynamic programming
    let mut e = vec![Q::zero(); k + 1];
    e[0] = Q::one();
    for s in sides {
        for j in (1..=k).rev() {
            let add = &e[j - 1] * s;
            e[j] += add;
        }
    }
    e[k].clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qi;

    #[test]
    fn tableau_counts() {
        // dim Sym²ℝ³ = 6, dim Λ²ℝ³ = 3
        assert_eq!(semistandard_count(&[2], 3), BigInt::from(6));
        assert_eq!(semistandard_count(&[1, 1], 3), BigInt::from(3));
        assert_eq!(semistandard_count(&[2, 1], 3), BigInt::from(8));
    }

    #[test]
    fn box_volumes() {
        let sides = [qi(1), qi(1), qi(1)];
        assert_eq!(box_intrinsic_volume(&sides, 0), qi(1));
        assert_eq!(box_intrinsic_volume(&sides, 1), qi(3));
        assert_eq!(box_intrinsic_volume(&sides, 2), qi(3));
        assert_eq!(box_intrinsic_volume(&sides, 3), qi(1));
    }
}
