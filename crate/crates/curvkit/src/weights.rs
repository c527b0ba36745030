//! Highest-weight bookkeeping for SO(n): admissibility tests and multiplicity
//! rules for the spaces of smooth curvature measures and valuations.
//!
//! Weights are weakly decreasing integer tuples with at most ⌊n/2⌋ entries;
//! for even n the last entry may be negative (the two members of a dual pair
//! share one multiplicity report). Every weight occurring in `Curv_k` is of
//! "type [q;p;r]": its conjugate diagram is (q+r, q, 1, …, 1) with p ones.

use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WeightError {
    #[error("weight entries must be weakly decreasing, got {0:?}")]
    NotDecreasing(Vec<i64>),
    #[error("weight has {len} nonzero entries but ambient dimension {n} allows at most {max}")]
    TooLong { len: usize, n: usize, max: usize },
    #[error("negative entry allowed only in the last slot for even n, got {0:?}")]
    BadNegative(Vec<i64>),
    #[error("operation requires a non-negative weight, got {0:?}")]
    NegativeEntry(Vec<i64>),
    #[error("type triple [{q};{p};{r}] is invalid for n = {n}")]
    BadType { q: usize, p: usize, r: usize, n: usize },
    #[error("weight {0:?} is not of type [q;p;r]")]
    NotTyped(Vec<i64>),
}

/// Highest weight λ for SO(n): weakly decreasing entries, trailing zeros
/// stripped, at most ⌊n/2⌋ entries; the last entry may be negative when
/// n is even and the weight has full length n/2.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight {
    entries: Vec<i64>,
    ambient_dim: usize,
}

impl Weight {
    pub fn new(entries: &[i64], n: usize) -> Result<Weight, WeightError> {
        assert!(n >= 1, "ambient dimension must be at least 1");
        let mut e: Vec<i64> = entries.to_vec();
        while e.last() == Some(&0) {
            e.pop();
        }
        let len = e.len();
        let max = n / 2;
        if len > max {
            return Err(WeightError::TooLong { len, n, max });
        }
        for i in 0..len {
            if e[i] < 0 && !(i + 1 == len && n % 2 == 0 && len == max) {
                return Err(WeightError::BadNegative(e));
            }
            if i + 1 < len {
                let next = if i + 2 == len { e[i + 1].abs() } else { e[i + 1] };
                if e[i] < next {
                    return Err(WeightError::NotDecreasing(e));
                }
            }
        }
        Ok(Weight {
            entries: e,
            ambient_dim: n,
        })
    }

    pub fn trivial(n: usize) -> Weight {
        Weight {
            entries: vec![],
            ambient_dim: n,
        }
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Number of nonzero entries (the paper's m).
    pub fn nonzero_len(&self) -> usize {
        self.entries.len()
    }

    /// Σ|λᵢ|.
    pub fn size(&self) -> i64 {
        self.entries.iter().map(|v| v.abs()).sum()
    }

    /// Entry λ_j (1-based), 0 beyond the stored length.
    pub fn entry(&self, j: usize) -> i64 {
        self.entries.get(j - 1).copied().unwrap_or(0)
    }

    pub fn is_nonneg(&self) -> bool {
        self.entries.iter().all(|&v| v >= 0)
    }

    /// |λ| entrywise: the dual partner for even n, identity otherwise.
    pub fn abs(&self) -> Weight {
        Weight {
            entries: self.entries.iter().map(|v| v.abs()).collect(),
            ambient_dim: self.ambient_dim,
        }
    }

    /// The dual weight (λ₁, …, −λ_m) when n is even and λ_{n/2} ≠ 0.
    pub fn dual(&self) -> Weight {
        let mut e = self.entries.clone();
        if self.ambient_dim % 2 == 0 && e.len() == self.ambient_dim / 2 {
            if let Some(last) = e.last_mut() {
                *last = -*last;
            }
        }
        Weight {
            entries: e,
            ambient_dim: self.ambient_dim,
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Conjugate (transposed) Young diagram of a non-negative weight. The result
/// keeps the ambient dimension; the conjugate of a valid SO(n) weight need
/// not itself satisfy the length bound, so this returns raw entries.
pub fn conjugate_entries(entries: &[i64]) -> Result<Vec<i64>, WeightError> {
    if entries.iter().any(|&v| v < 0) {
        return Err(WeightError::NegativeEntry(entries.to_vec()));
    }
    let lambda1 = entries.first().copied().unwrap_or(0);
    let mut out = Vec::with_capacity(lambda1 as usize);
    for j in 1..=lambda1 {
        out.push(entries.iter().filter(|&&v| v >= j).count() as i64);
    }
    Ok(out)
}

/// Conjugate as a `Weight` where it fits the SO(n) length bound.
pub fn conjugate(w: &Weight) -> Result<Weight, WeightError> {
    let raw = conjugate_entries(w.entries())?;
    Weight::new(&raw, w.ambient_dim())
}

/// A weight "of type [q;p;r]": the conjugate diagram is (q+r, q, 1×p).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct TypeTriple {
    pub q: usize,
    pub p: usize,
    pub r: usize,
}

impl TypeTriple {
    pub fn new(q: usize, p: usize, r: usize) -> TypeTriple {
        assert!(r <= 1, "r must be 0 or 1");
        TypeTriple { q, p, r }
    }
}

/// Build the weight of type [q;p;r] in ambient dimension n.
pub fn weight_from_type(t: TypeTriple, n: usize) -> Result<Weight, WeightError> {
    if t.r > 1 || t.q + t.r > n / 2 {
        return Err(WeightError::BadType {
            q: t.q,
            p: t.p,
            r: t.r,
            n,
        });
    }
    let mut conj: Vec<i64> = Vec::new();
    if t.q + t.r > 0 {
        conj.push((t.q + t.r) as i64);
    }
    if t.q > 0 {
        conj.push(t.q as i64);
    }
    conj.extend(std::iter::repeat(1).take(t.p));
    // conjugating twice recovers λ from λ'
    let lambda = conjugate_entries(&conj)?;
    Weight::new(&lambda, n).map_err(|_| WeightError::BadType {
        q: t.q,
        p: t.p,
        r: t.r,
        n,
    })
}

/// Recover [q;p;r] from a non-negative weight, if it is of that shape:
/// q = height of the second column, r = height difference of the first two
/// columns (must be ≤ 1), all further columns must have height 1.
pub fn type_from_weight(w: &Weight) -> Result<TypeTriple, WeightError> {
    if !w.is_nonneg() {
        return Err(WeightError::NegativeEntry(w.entries().to_vec()));
    }
    let conj = conjugate_entries(w.entries())?;
    let c1 = conj.first().copied().unwrap_or(0);
    let c2 = conj.get(1).copied().unwrap_or(0);
    let r = c1 - c2;
    if r > 1 {
        return Err(WeightError::NotTyped(w.entries().to_vec()));
    }
    if conj.iter().skip(2).any(|&c| c != 1) {
        return Err(WeightError::NotTyped(w.entries().to_vec()));
    }
    Ok(TypeTriple {
        q: c2 as usize,
        p: conj.len().saturating_sub(2),
        r: r as usize,
    })
}

/// Which space a multiplicity report refers to.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SpaceKind {
    CurvK,
    ValK,
}

/// Multiplicity of an isotypic component together with the basis labels of
/// the covariant curvature measures (or valuations) realising it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiplicityReport {
    pub weight: Weight,
    pub space: SpaceKind,
    pub k: usize,
    pub multiplicity: usize,
    pub basis_labels: Vec<String>,
}

/// Admissibility of λ for Curv_k: λ_j = 0 for j > min(k+1, n−k), at most one
/// entry of absolute value 1, and |λ₂| ≤ 2.
pub fn curv_admissible(w: &Weight, n: usize, k: usize) -> bool {
    debug_assert!(k < n);
    let m = w.nonzero_len();
    if m > (k + 1).min(n - k) {
        return false;
    }
    if w.entries().iter().filter(|v| v.abs() == 1).count() > 1 {
        return false;
    }
    if w.entry(2).abs() > 2 {
        return false;
    }
    true
}

/// Multiplicity of Γ_[λ] in Curv_k together with its basis labels.
///
/// The multiplicity is 2, except that it drops to 1 when m = min(k+1, n−k)
/// or |λ_m| < 2, and rises to 3 when n = 2k+1, m = k and |λ_m| ≥ 2.
/// Inadmissible weights report multiplicity 0 with no labels.
pub fn curv_multiplicity(w: &Weight, n: usize, k: usize) -> MultiplicityReport {
    assert!(k < n, "curvature measures exist for 0 ≤ k ≤ n−1");
    assert_eq!(w.ambient_dim(), n);
    let empty = |mult| MultiplicityReport {
        weight: w.clone(),
        space: SpaceKind::CurvK,
        k,
        multiplicity: mult,
        basis_labels: vec![],
    };
    if !curv_admissible(w, n, k) {
        return empty(0);
    }
    let abs = w.abs();
    let m = abs.nonzero_len();
    let lam_m = if m == 0 { 0 } else { abs.entry(m) };
    let multiplicity = if m == (k + 1).min(n - k) || lam_m < 2 {
        1
    } else if n == 2 * k + 1 && m == k {
        3
    } else {
        2
    };
    let basis_labels = curv_basis_labels(w, n, k);
    debug_assert_eq!(multiplicity, basis_labels.len());
    MultiplicityReport {
        weight: w.clone(),
        space: SpaceKind::CurvK,
        k,
        multiplicity,
        basis_labels,
    }
}

fn curv_basis_labels(w: &Weight, n: usize, k: usize) -> Vec<String> {
    let abs = w.abs();
    let m = abs.nonzero_len();
    if m == 0 {
        return vec![format!("Φ_[{k},0,0]")];
    }
    let t = type_from_weight(&abs).expect("admissible curv weights are typed");
    let p = t.p;
    let lam_m = abs.entry(m);
    let k_prime = k.min(n - k - 1);
    if 2 * m == n {
        // self-star pairing: the sign of λ_m selects the *₁-eigenvector
        let neg = w.entry(m) < 0;
        let sgn = if neg { '+' } else { '-' };
        let base = if lam_m == 1 {
            format!("Ξ_[{k},{p},{}]", m - 1)
        } else {
            format!("Ψ_[{k},{p},{m}]")
        };
        return vec![format!("{base} {sgn} i^{m}·*₁{base}")];
    }
    if lam_m == 1 {
        return vec![format!("Ξ_[{k},{p},{}]", m - 1)];
    }
    if m == k_prime + 1 {
        return vec![format!("Ψ_[{k},{p},{m}]")];
    }
    let mut labels = vec![format!("Φ_[{k},{p},{m}]"), format!("Ψ_[{k},{p},{m}]")];
    if n == 2 * k + 1 && m == k {
        labels.push(format!("Θ_[{k},{p}]"));
    }
    labels
}

/// Admissibility of λ for Val_k: λ_j = 0 for j > min(k, n−k), no entry of
/// absolute value 1, |λ₂| ≤ 2. Val_k is multiplicity-free on these.
pub fn val_admissible(w: &Weight, n: usize, k: usize) -> bool {
    assert!(k <= n);
    let m = w.nonzero_len();
    if m > k.min(n - k) {
        return false;
    }
    if w.entries().iter().any(|v| v.abs() == 1) {
        return false;
    }
    if w.entry(2).abs() > 2 {
        return false;
    }
    true
}

/// Basis labels of the λ-isotypic component of covariant valuations:
/// φ_[k,0,0] for the trivial weight, ψ_[k,p,m] when m < n/2, and the real
/// pair ψ, *₁ψ when m = n/2.
pub fn tval_basis(w: &Weight, n: usize, k: usize) -> Vec<String> {
    if !val_admissible(w, n, k) {
        return vec![];
    }
    let abs = w.abs();
    let m = abs.nonzero_len();
    if m == 0 {
        return vec![format!("φ_[{k},0,0]")];
    }
    let t = type_from_weight(&abs).expect("admissible val weights are typed");
    let p = t.p;
    if 2 * m == n {
        vec![
            format!("ψ_[{k},{p},{m}]"),
            format!("*₁ψ_[{k},{p},{m}]"),
        ]
    } else {
        vec![format!("ψ_[{k},{p},{m}]")]
    }
}

/// All non-negative weights for SO(n) with Σλᵢ ≤ bound, plus the duals with
/// negative last entry for even n.
pub fn enumerate_weights(n: usize, bound: i64) -> Vec<Weight> {
    let max_len = n / 2;
    let mut out = vec![Weight::trivial(n)];
    let mut stack: Vec<Vec<i64>> = vec![vec![]];
    while let Some(prefix) = stack.pop() {
        if prefix.len() == max_len {
            continue;
        }
        let cap = prefix.last().copied().unwrap_or(bound);
        let used: i64 = prefix.iter().sum();
        for v in 1..=cap.min(bound - used) {
            let mut next = prefix.clone();
            next.push(v);
            out.push(Weight::new(&next, n).unwrap());
            if n % 2 == 0 && next.len() == max_len {
                let mut dual = next.clone();
                *dual.last_mut().unwrap() *= -1;
                out.push(Weight::new(&dual, n).unwrap());
            }
            stack.push(next);
        }
    }
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(entries: &[i64], n: usize) -> Weight {
        Weight::new(entries, n).unwrap()
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(conjugate_entries(&[2, 2, 1]).unwrap(), vec![3, 2]);
        assert_eq!(conjugate_entries(&[0]).unwrap(), Vec::<i64>::new());
        // (3,2) has conjugate (2,2,1), matching type [2;1;0]
        assert_eq!(conjugate_entries(&[3, 2]).unwrap(), vec![2, 2, 1]);
        let t = type_from_weight(&w(&[3, 2], 6)).unwrap();
        assert_eq!(t, TypeTriple::new(2, 1, 0));
        assert_eq!(
            conjugate_entries(&[-1, 2]),
            Err(WeightError::NegativeEntry(vec![-1, 2]))
        );
    }

    #[test]
    fn conjugate_involutive_exhaustive() {
        // all partitions with at most 12 boxes
        for n in [24usize] {
            for wt in enumerate_weights(n, 12) {
                if !wt.is_nonneg() {
                    continue;
                }
                let c = conjugate_entries(wt.entries()).unwrap();
                let cc = conjugate_entries(&c).unwrap();
                assert_eq!(cc, wt.entries());
            }
        }
    }

    #[test]
    fn weight_from_type_examples() {
        assert_eq!(
            weight_from_type(TypeTriple::new(0, 0, 0), 5).unwrap(),
            Weight::trivial(5)
        );
        assert_eq!(
            weight_from_type(TypeTriple::new(2, 1, 0), 5).unwrap(),
            w(&[3, 2], 5)
        );
        assert_eq!(
            weight_from_type(TypeTriple::new(1, 0, 1), 5).unwrap(),
            w(&[2, 1], 5)
        );
        assert!(weight_from_type(TypeTriple::new(3, 0, 0), 5).is_err());
    }

    #[test]
    fn type_round_trip_on_admissible() {
        for n in 2..=6 {
            for k in 0..n {
                for wt in enumerate_weights(n, 6) {
                    if !wt.is_nonneg() || !curv_admissible(&wt, n, k) {
                        continue;
                    }
                    let t = type_from_weight(&wt).unwrap();
                    assert_eq!(weight_from_type(t, n).unwrap(), wt);
                }
            }
        }
    }

    #[test]
    fn multiplicity_spot_values() {
        let r = curv_multiplicity(&w(&[2], 3), 3, 1);
        assert_eq!(r.multiplicity, 3);
        assert_eq!(
            r.basis_labels,
            vec!["Φ_[1,0,1]", "Ψ_[1,0,1]", "Θ_[1,0]"]
        );

        let r = curv_multiplicity(&Weight::trivial(3), 3, 1);
        assert_eq!(r.multiplicity, 1);
        assert_eq!(r.basis_labels, vec!["Φ_[1,0,0]"]);

        let r = curv_multiplicity(&w(&[2, 2], 4), 4, 1);
        assert_eq!(r.multiplicity, 1);

        let r = curv_multiplicity(&w(&[2], 5), 5, 2);
        assert_eq!(r.multiplicity, 2);
    }

    #[test]
    fn multiplicity_star_pair_labels() {
        let r = curv_multiplicity(&w(&[2, 2], 4), 4, 2);
        assert_eq!(r.multiplicity, 1);
        assert_eq!(r.basis_labels, vec!["Ψ_[2,0,2] - i^2·*₁Ψ_[2,0,2]"]);
        let r = curv_multiplicity(&w(&[2, -2], 4), 4, 2);
        assert_eq!(r.basis_labels, vec!["Ψ_[2,0,2] + i^2·*₁Ψ_[2,0,2]"]);
    }

    #[test]
    fn invalid_weight_reports_zero() {
        let r = curv_multiplicity(&w(&[3, 3], 4), 4, 1);
        assert_eq!(r.multiplicity, 0);
        assert!(r.basis_labels.is_empty());
        // two entries of absolute value one
        let r = curv_multiplicity(&w(&[1, 1], 4), 4, 2);
        assert_eq!(r.multiplicity, 0);
    }

    #[test]
    fn val_admissibility_examples() {
        assert!(val_admissible(&w(&[2, 2], 4), 4, 2));
        assert!(!val_admissible(&w(&[1], 4), 4, 2));
        assert!(!val_admissible(&w(&[2], 4), 4, 0));
    }

    #[test]
    fn tval_basis_examples() {
        assert_eq!(tval_basis(&w(&[2, 2], 5), 5, 2), vec!["ψ_[2,0,2]"]);
        assert_eq!(
            tval_basis(&w(&[2, 2], 4), 4, 2),
            vec!["ψ_[2,0,2]", "*₁ψ_[2,0,2]"]
        );
        assert_eq!(tval_basis(&Weight::trivial(3), 3, 1), vec!["φ_[1,0,0]"]);
    }

    #[test]
    fn tval_elements_have_curv_preimages() {
        // the val-side pair ψ, *₁ψ at m = n/2 corresponds to the reports of
        // λ and its dual λ̄, so sum curv multiplicities over the dual pair
        for n in 2..=6usize {
            for k in 0..n {
                for wt in enumerate_weights(n, 6) {
                    if !wt.is_nonneg() {
                        continue;
                    }
                    let val_count = tval_basis(&wt, n, k).len();
                    if val_count == 0 {
                        continue;
                    }
                    let mut curv = curv_multiplicity(&wt, n, k).multiplicity;
                    if wt.dual() != wt {
                        curv += curv_multiplicity(&wt.dual(), n, k).multiplicity;
                    }
                    assert!(
                        curv >= val_count,
                        "n={n} k={k} λ={wt:?}: curv {curv} < val {val_count}"
                    );
                }
            }
        }
    }
}
