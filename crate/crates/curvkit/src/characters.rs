//! Character ring in elementary-symmetric generators E_k, with Giambelli
//! determinants for SL(n) and SO(n), interlacing branching rules, and the
//! exterior-power decomposition identity used to cross-check multiplicities.
//!
//! SO(n) characters satisfy E_j = E_{n−j}; expressions are normalised so that
//! only generators E_1, …, E_{⌊n/2⌋} survive. Laurent expansions substitute
//! the eigenvalue variable set (x₁…x_m, x₁⁻¹…x_m⁻¹[, 1]) and are the oracle
//! of record for identity checks.

use crate::scalar::binomial;
use crate::weights::{conjugate_entries, Weight};
use num::bigint::BigInt;
use num::{One, Zero};
use std::collections::BTreeMap;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Group {
    SL,
    SO,
}

/// Integer polynomial in the generators E_1, …, E_n (E_0 ≡ 1). A monomial is
/// the exponent vector over E_1..E_n.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CharacterExpr {
    pub group: Group,
    pub n: usize,
    poly: BTreeMap<Vec<u16>, BigInt>,
}

impl CharacterExpr {
    pub fn zero(group: Group, n: usize) -> Self {
        CharacterExpr {
            group,
            n,
            poly: BTreeMap::new(),
        }
    }

    pub fn constant(group: Group, n: usize, c: i64) -> Self {
        let mut e = Self::zero(group, n);
        if c != 0 {
            e.poly.insert(vec![0; n], BigInt::from(c));
        }
        e
    }

    /// The generator E_j, already normalised for the group.
    pub fn generator(group: Group, n: usize, j: i64) -> Self {
        let mut e = Self::zero(group, n);
        let j = match group {
            Group::SL => {
                if j < 0 || j > n as i64 {
                    return e;
                }
                j as usize
            }
            Group::SO => {
                if j < 0 || j > n as i64 {
                    return e;
                }
                let j = j as usize;
                // E_j = E_{n−j}; keep the smaller index
                j.min(n - j)
            }
        };
        if j == 0 {
            return Self::constant(group, n, 1);
        }
        let mut exp = vec![0u16; n];
        exp[j - 1] = 1;
        e.poly.insert(exp, BigInt::one());
        e
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        assert_eq!(self.group, other.group);
        let mut out = self.clone();
        for (m, c) in &other.poly {
            let e = out.poly.entry(m.clone()).or_insert_with(BigInt::zero);
            *e += c;
            if e.is_zero() {
                out.poly.remove(m);
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        CharacterExpr {
            group: self.group,
            n: self.n,
            poly: self.poly.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        assert_eq!(self.group, other.group);
        let mut out = Self::zero(self.group, self.n);
        for (m1, c1) in &self.poly {
            for (m2, c2) in &other.poly {
                let m: Vec<u16> = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                let e = out.poly.entry(m.clone()).or_insert_with(BigInt::zero);
                *e += c1 * c2;
                if e.is_zero() {
                    out.poly.remove(&m);
                }
            }
        }
        out
    }

    pub fn monomials(&self) -> impl Iterator<Item = (&Vec<u16>, &BigInt)> {
        self.poly.iter()
    }

    /// Character dimension: every E_j evaluated at the all-ones point, i.e.
    /// E_j ↦ C(n, j) for the group's n-element eigenvalue multiset.
    pub fn dimension(&self) -> BigInt {
        let mut total = num::BigRational::zero();
        for (m, c) in &self.poly {
            let mut term = num::BigRational::from_integer(c.clone());
            for (j0, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    term *= binomial(self.n as i64, j0 as i64 + 1);
                }
            }
            total += term;
        }
        assert!(total.is_integer(), "dimension must be an integer");
        total.to_integer()
    }

    /// Expand into a Laurent polynomial in the group's eigenvalue variables.
    pub fn laurent(&self) -> LaurentExpansion {
        let vars = match self.group {
            Group::SL => free_vars(self.n),
            Group::SO => so_vars(self.n),
        };
        let m_vars = match self.group {
            Group::SL => self.n,
            Group::SO => self.n / 2,
        };
        let gens: Vec<LaurentExpansion> = (1..=self.n)
            .map(|j| elementary_laurent(&vars, m_vars, j))
            .collect();
        let mut out = LaurentExpansion::zero(m_vars);
        for (m, c) in &self.poly {
            let mut term = LaurentExpansion::constant(m_vars, c.clone());
            for (j0, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    term = term.mul(&gens[j0]);
                }
            }
            out = out.add(&term);
        }
        out
    }
}

/// Integer Laurent polynomial in m variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentExpansion {
    pub m: usize,
    terms: BTreeMap<Vec<i16>, BigInt>,
}

impl LaurentExpansion {
    pub fn zero(m: usize) -> Self {
        LaurentExpansion {
            m,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(m: usize, c: BigInt) -> Self {
        Self::monomial(m, vec![0; m], c)
    }

    pub fn monomial(m: usize, mono: Vec<i16>, c: BigInt) -> Self {
        let mut t = Self::zero(m);
        if !c.is_zero() {
            t.terms.insert(mono, c);
        }
        t
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            let e = out.terms.entry(m.clone()).or_insert_with(BigInt::zero);
            *e += c;
            if e.is_zero() {
                out.terms.remove(m);
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.m);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m: Vec<i16> = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                let e = out.terms.entry(m.clone()).or_insert_with(BigInt::zero);
                *e += c1 * c2;
                if e.is_zero() {
                    out.terms.remove(&m);
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, mono: &[i16]) -> BigInt {
        self.terms.get(mono).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }
}

/// Variable descriptors: exponent vector contribution of each eigenvalue.
fn free_vars(n: usize) -> Vec<Vec<i16>> {
    (0..n)
        .map(|i| {
            let mut v = vec![0i16; n];
            v[i] = 1;
            v
        })
        .collect()
}

fn so_vars(n: usize) -> Vec<Vec<i16>> {
    let m = n / 2;
    let mut vars = Vec::new();
    for i in 0..m {
        let mut v = vec![0i16; m];
        v[i] = 1;
        vars.push(v);
    }
    for i in 0..m {
        let mut v = vec![0i16; m];
        v[i] = -1;
        vars.push(v);
    }
    if n % 2 == 1 {
        vars.push(vec![0i16; m]);
    }
    vars
}

/// Elementary symmetric polynomial E_j of the given eigenvalue variables.
fn elementary_laurent(vars: &[Vec<i16>], m: usize, j: usize) -> LaurentExpansion {
    let mut out = LaurentExpansion::zero(m);
    let n = vars.len();
    if j > n {
        return out;
    }
    // iterate over j-subsets
    let mut idx: Vec<usize> = (0..j).collect();
    loop {
        let mut mono = vec![0i16; m];
        for &i in &idx {
            for (a, e) in vars[i].iter().enumerate() {
                mono[a] += e;
            }
        }
        let entry = out.terms.entry(mono.clone()).or_insert_with(BigInt::zero);
        *entry += BigInt::one();
        if entry.is_zero() {
            out.terms.remove(&mono);
        }
        // next combination
        let mut a = j;
        loop {
            if a == 0 {
                return out;
            }
            a -= 1;
            if idx[a] != a + n - j {
                break;
            }
        }
        idx[a] += 1;
        for b in a + 1..j {
            idx[b] = idx[b - 1] + 1;
        }
    }
}

/// Giambelli determinant for SL(n): Char Γ_λ = det(E_{μ_i + j − i}) where
/// μ is the conjugate partition of λ.
pub fn giambelli_sl(w: &Weight, n: usize) -> CharacterExpr {
    giambelli_sl_raw(w.entries(), n)
}

/// SL Giambelli determinant for an arbitrary partition slice (SL(n) weights
/// may have up to n rows, more than the SO length bound of `Weight`).
pub fn giambelli_sl_raw(entries: &[i64], n: usize) -> CharacterExpr {
    let mu = conjugate_entries(entries).expect("non-negative partition");
    let l = mu.len();
    if l == 0 {
        return CharacterExpr::constant(Group::SL, n, 1);
    }
    let entry = |i: usize, j: usize| {
        CharacterExpr::generator(Group::SL, n, mu[i] + j as i64 - i as i64)
    };
    det(l, Group::SL, n, &entry)
}

/// Giambelli determinant for SO(n): the ℓ×ℓ matrix with i-th row
/// (E_{μ_i−i+1}, E_{μ_i−i+2}+E_{μ_i−i}, E_{μ_i−i+3}+E_{μ_i−i−1}, …).
/// This computes the character of the full trace-free module Γ̄_[λ], which
/// splits into a dual pair when n is even and λ_{n/2} ≠ 0.
pub fn giambelli_so(w: &Weight, n: usize) -> CharacterExpr {
    assert!(w.is_nonneg());
    giambelli_so_raw(w.entries(), n)
}

fn det(
    l: usize,
    group: Group,
    n: usize,
    entry: &dyn Fn(usize, usize) -> CharacterExpr,
) -> CharacterExpr {
    // cofactor expansion over the (small) matrix
    let cells: Vec<Vec<CharacterExpr>> = (0..l)
        .map(|i| (0..l).map(|j| entry(i, j)).collect())
        .collect();
    det_rec(&cells, &(0..l).collect::<Vec<_>>(), 0, group, n)
}

fn det_rec(
    cells: &[Vec<CharacterExpr>],
    cols: &[usize],
    row: usize,
    group: Group,
    n: usize,
) -> CharacterExpr {
    if cols.is_empty() {
        return CharacterExpr::constant(group, n, 1);
    }
    let mut acc = CharacterExpr::zero(group, n);
    for (pos, &c) in cols.iter().enumerate() {
        let sub: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let minor = det_rec(cells, &sub, row + 1, group, n);
        let term = cells[row][c].mul(&minor);
        acc = if pos % 2 == 0 {
            acc.add(&term)
        } else {
            acc.sub(&term)
        };
    }
    acc
}

/// Dimension of the irreducible SO(n) module Γ_[λ]: the Γ̄ character halves
/// when n is even and λ has full length n/2.
pub fn dimension_so_irreducible(w: &Weight, n: usize) -> BigInt {
    let bar = giambelli_so(&w.abs(), n).dimension();
    if n % 2 == 0 && w.nonzero_len() == n / 2 {
        let two = BigInt::from(2);
        assert!((&bar % &two).is_zero());
        bar / two
    } else {
        bar
    }
}

/// SO(n) → SO(n−1) branching: all interlacing weights μ. For odd n the last
/// entry of μ may be negative; for even n the bound uses |λ_{n/2}|.
pub fn branch(w: &Weight, n: usize) -> Vec<Weight> {
    assert!(n >= 2);
    assert_eq!(w.ambient_dim(), n);
    let n1 = n - 1;
    let k = n1 / 2; // number of entries of μ
    let lam = |j: usize| -> i64 {
        if j == n / 2 {
            w.entry(j).abs()
        } else {
            w.entry(j)
        }
    };
    let mut out = Vec::new();
    let mut cur: Vec<i64> = Vec::new();
    branch_rec(&lam, n, k, &mut cur, &mut out);
    out.sort();
    out.dedup();
    out
}

fn branch_rec(
    lam: &dyn Fn(usize) -> i64,
    n: usize,
    k: usize,
    cur: &mut Vec<i64>,
    out: &mut Vec<Weight>,
) {
    let n1 = n - 1;
    if cur.len() == k {
        out.push(Weight::new(cur, n1).expect("interlacing weights are valid"));
        return;
    }
    let j = cur.len() + 1; // choosing μ_j
    let hi = lam(j);
    // for odd n the final entry μ_k is only bounded in absolute value
    let signed_last = j == k && n1 % 2 == 0;
    let lo = if signed_last { -hi } else { lam(j + 1) };
    for v in lo..=hi {
        cur.push(v);
        branch_rec(lam, n, k, cur, out);
        cur.pop();
    }
}

/// Counts of branch components of type [q;0;0] (weight (2, …, 2) with q twos,
/// counting the dual (2,…,−2) separately), keyed by q.
pub fn count_type_q00(w: &Weight, n: usize) -> BTreeMap<usize, usize> {
    let mut counts = BTreeMap::new();
    for mu in branch(w, n) {
        let e = mu.entries();
        if e.iter().all(|&v| v.abs() == 2) {
            *counts.entry(e.len()).or_insert(0) += 1;
        } else if e.is_empty() {
            *counts.entry(0).or_insert(0) += 1;
        }
    }
    counts
}

/// Independent multiplicity of Γ_[λ] in Curv_k via branching: the number of
/// type-[q;0;0] components of the restriction for 0 ≤ q ≤ min(k, n−k−1).
pub fn curv_multiplicity_from_branching(w: &Weight, n: usize, k: usize) -> usize {
    let cap = k.min(n - 1 - k);
    count_type_q00(w, n)
        .into_iter()
        .filter(|&(q, _)| q <= cap)
        .map(|(_, c)| c)
        .sum()
}

/// The exterior-power decomposition: Char(Λ^{i,j} V) as an SO(n) character
/// equals Σ_k Char Res Γ̄_((2×(j'−k), 1×(2k+i'−j'))), where each summand is
/// the SL module restricted to SO(n), i.e. Σ_{m≤j'−k} of the trace-free
/// modules Γ̄_[(2×m, 1×(2k+i'−j'))]. The left side is a plain product of
/// elementary generators, the right side goes through the SO Giambelli
/// determinants; both are expanded to Laurent polynomials and compared.
pub fn verify_lambda_decomposition(i: usize, j: usize, n: usize) -> bool {
    assert!(i <= n && j <= n);
    let ip = (i.min(n - i)).max(j.min(n - j));
    let jp = (i.min(n - i)).min(j.min(n - j));
    let lhs = CharacterExpr::generator(Group::SO, n, i as i64)
        .mul(&CharacterExpr::generator(Group::SO, n, j as i64));
    let mut rhs = CharacterExpr::zero(Group::SO, n);
    for k in 0..=jp {
        let twos = jp - k;
        let ones = 2 * k + ip - jp;
        for m in 0..=twos {
            let mut entries = vec![2i64; m];
            entries.extend(std::iter::repeat(1).take(ones));
            // partitions here may exceed the ⌊n/2⌋ length bound of `Weight`;
            // the Giambelli determinant handles them directly
            rhs = rhs.add(&giambelli_so_raw(&entries, n));
        }
    }
    lhs.laurent() == rhs.laurent()
}

/// SO Giambelli determinant for an arbitrary partition (with any number of
/// rows), used where the partition may exceed the SO(n) weight length bound.
pub fn giambelli_so_raw(entries: &[i64], n: usize) -> CharacterExpr {
    let mu = conjugate_entries(entries).expect("non-negative partition");
    let l = mu.len();
    if l == 0 {
        return CharacterExpr::constant(Group::SO, n, 1);
    }
    let entry = |i: usize, j: usize| {
        // row i (0-based): E_{μ_i−i+1+j} plus, from the second entry on,
        // E_{μ_i−i+1−j}
        let base = mu[i] - i as i64;
        let first = CharacterExpr::generator(Group::SO, n, base + j as i64);
        if j == 0 {
            first
        } else {
            first.add(&CharacterExpr::generator(Group::SO, n, base - j as i64))
        }
    };
    det(l, Group::SO, n, &entry)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles;

    fn w(entries: &[i64], n: usize) -> Weight {
        Weight::new(entries, n).unwrap()
    }

    #[test]
    fn giambelli_sl_examples() {
        // λ=(2): E₁² − E₂
        let e = giambelli_sl(&w(&[2], 4), 4);
        let e1 = CharacterExpr::generator(Group::SL, 4, 1);
        let e2 = CharacterExpr::generator(Group::SL, 4, 2);
        assert_eq!(e, e1.mul(&e1).sub(&e2));
        // λ=(1): E₁
        assert_eq!(giambelli_sl(&w(&[1], 4), 4), e1);
        // trivial
        assert_eq!(
            giambelli_sl(&Weight::trivial(4), 4),
            CharacterExpr::constant(Group::SL, 4, 1)
        );
    }

    #[test]
    fn giambelli_sl_matches_tableau_sum() {
        // Schur polynomial via semistandard tableaux, as Laurent polynomials
        for n in 2..=4usize {
            for entries in [vec![1i64, 1], vec![2], vec![2, 1], vec![2, 2], vec![3, 1]] {
                if entries.len() > n {
                    continue;
                }
                let got = giambelli_sl_raw(&entries, n).laurent();
                let want = oracles::schur_laurent(&entries, n);
                assert_eq!(got, want, "λ={entries:?} n={n}");
            }
        }
    }

    #[test]
    fn giambelli_so_examples() {
        // λ=(1,1), n=5 → E₂
        let e = giambelli_so(&w(&[1, 1], 5), 5);
        assert_eq!(e, CharacterExpr::generator(Group::SO, 5, 2));
        assert_eq!(e.dimension(), BigInt::from(10)); // dim Λ²ℝ⁵
        // trivial λ
        assert_eq!(
            giambelli_so(&Weight::trivial(5), 5),
            CharacterExpr::constant(Group::SO, 5, 1)
        );
        // λ=(2,1,1), n=6: det of the 2×2 pattern (E₃, E₄+E₂; 1, E₁)
        let e = giambelli_so(&w(&[2, 1, 1], 6), 6);
        let g = |j| CharacterExpr::generator(Group::SO, 6, j);
        let want = g(3).mul(&g(1)).sub(&g(4).add(&g(2)));
        assert_eq!(e, want);
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(giambelli_sl(&w(&[2], 6), 3).dimension(), BigInt::from(6)); // Sym²ℝ³
        assert_eq!(
            giambelli_so(&w(&[2], 3), 3).dimension(),
            BigInt::from(5)
        );
        assert_eq!(
            CharacterExpr::constant(Group::SL, 5, 1).dimension(),
            BigInt::one()
        );
    }

    #[test]
    fn so_rewrite_idempotent() {
        // building a generator twice normalises once and stays fixed
        for n in 2..=6 {
            for j in 0..=n as i64 {
                let a = CharacterExpr::generator(Group::SO, n, j);
                let b = CharacterExpr::generator(Group::SO, n, (n as i64) - j);
                assert_eq!(a, b, "E_{j} vs E_{} at n={n}", n as i64 - j);
            }
        }
    }

    #[test]
    fn branch_examples() {
        let mus = branch(&w(&[2, 1], 4), 4);
        assert_eq!(mus, vec![w(&[1], 3), w(&[2], 3)]);

        let mus = branch(&w(&[1, 1], 5), 5);
        assert_eq!(mus, vec![w(&[1], 4), w(&[1, -1], 4), w(&[1, 1], 4)]);

        let mus = branch(&w(&[2], 3), 3);
        assert_eq!(
            mus,
            vec![Weight::trivial(2), w(&[-2], 2), w(&[-1], 2), w(&[1], 2), w(&[2], 2)]
        );
    }

    #[test]
    fn branch_matches_brute_force() {
        for n in 3..=6usize {
            for wt in crate::weights::enumerate_weights(n, 4) {
                let got = branch(&wt, n);
                let want = oracles::interlacing_brute_force(&wt, n);
                assert_eq!(got, want, "λ={wt:?} n={n}");
            }
        }
    }

    #[test]
    fn branching_dimension_sum() {
        for n in 3..=6usize {
            for wt in crate::weights::enumerate_weights(n, 5) {
                let total: BigInt = branch(&wt, n)
                    .iter()
                    .map(|mu| dimension_so_irreducible(mu, n - 1))
                    .sum();
                assert_eq!(
                    dimension_so_irreducible(&wt, n),
                    total,
                    "λ={wt:?} n={n}"
                );
            }
        }
    }

    #[test]
    fn count_q00_examples() {
        let c = count_type_q00(&w(&[2], 3), 3);
        assert_eq!(c.get(&1), Some(&2));
        assert_eq!(c.get(&0), Some(&1));

        let c = count_type_q00(&Weight::trivial(5), 5);
        assert_eq!(c.get(&0), Some(&1));

        let c = count_type_q00(&w(&[2, 2], 4), 4);
        assert_eq!(c.get(&1), Some(&1));
    }

    #[test]
    fn lambda_decomposition_spots() {
        assert!(verify_lambda_decomposition(1, 1, 4));
        assert!(verify_lambda_decomposition(2, 1, 5));
        assert!(verify_lambda_decomposition(2, 2, 4));
    }
}
