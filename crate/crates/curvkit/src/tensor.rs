//! Exact sparse tensors over ℚ with the right S_d action, Young
//! symmetrisers, metric traces, the orthogonal trace-free projection, and
//! the Hodge star on antisymmetric tensors.
//!
//! The trace-free projection is computed as an exact Krylov solve for the
//! operator G = Σ_{a<b} ins_{a,b} ∘ tr_{a,b}: G is self-adjoint with
//! image equal to the span of all metric insertions and kernel equal to the
//! joint kernel of all contractions, so the projection of a tensor onto the
//! trace ideal lies in the Krylov space of G and is found by a small linear
//! solve over ℚ.

use crate::perm::{all_perms, perms_of_positions, Perm};
use crate::scalar::Q;
use crate::weights::{conjugate_entries, Weight};
use num::{One, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TensorError {
    #[error("permutation degree {perm} does not match tensor order {order}")]
    DegreeMismatch { perm: usize, order: usize },
    #[error("trace positions must satisfy 1 ≤ p < q ≤ order, got ({p},{q}) at order {order}")]
    BadTracePositions { p: usize, q: usize, order: usize },
    #[error("hodge star requires an antisymmetric tensor")]
    NotAntisymmetric,
    #[error("tableau has {boxes} boxes but tensor order is {order}")]
    ShapeMismatch { boxes: usize, order: usize },
    #[error("ambient dimensions differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
}

/// Exact sparse tensor: a map from multi-indices in {1..n}^d to rationals.
/// No zero coefficients are stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SparseTensor {
    n: usize,
    order: usize,
    entries: BTreeMap<Vec<u8>, Q>,
}

impl SparseTensor {
    pub fn zero(n: usize, order: usize) -> Self {
        SparseTensor {
            n,
            order,
            entries: BTreeMap::new(),
        }
    }

    /// Scalar tensor of order 0.
    pub fn scalar(n: usize, c: Q) -> Self {
        let mut t = Self::zero(n, 0);
        t.insert(vec![], c);
        t
    }

    /// Basis tensor e_{i₁} ⊗ … ⊗ e_{i_d} with 1-based indices.
    pub fn basis(n: usize, idx: &[u8]) -> Self {
        let mut t = Self::zero(n, idx.len());
        t.insert(idx.to_vec(), Q::one());
        t
    }

    /// The metric tensor Q = Σ eᵢ ⊗ eᵢ.
    pub fn metric(n: usize) -> Self {
        let mut t = Self::zero(n, 2);
        for i in 1..=n as u8 {
            t.insert(vec![i, i], Q::one());
        }
        t
    }

    /// Full antisymmetrisation Σ_σ sgn σ e_{i_{σ(1)}} ⊗ … ⊗ e_{i_{σ(k)}},
    /// the wedge convention used throughout (no 1/k! factor).
    pub fn wedge_basis(n: usize, idx: &[u8]) -> Self {
        let k = idx.len();
        let mut t = Self::zero(n, k);
        for p in all_perms(k) {
            let v: Vec<u8> = (0..k).map(|a| idx[p.apply(a)]).collect();
            t.insert(v, Q::from_integer(p.sign().into()));
        }
        t
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn num_entries(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, idx: &[u8]) -> Q {
        self.entries.get(idx).cloned().unwrap_or_else(Q::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<u8>, &Q)> {
        self.entries.iter()
    }

    pub fn insert(&mut self, idx: Vec<u8>, c: Q) {
        debug_assert_eq!(idx.len(), self.order);
        debug_assert!(idx.iter().all(|&i| i >= 1 && i as usize <= self.n));
        if c.is_zero() {
            return;
        }
        let e = self.entries.entry(idx.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.entries.remove(&idx);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order);
        let mut out = self.clone();
        for (idx, c) in &other.entries {
            out.insert(idx.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(self.n, self.order);
        }
        SparseTensor {
            n: self.n,
            order: self.order,
            entries: self
                .entries
                .iter()
                .map(|(i, v)| (i.clone(), v * c))
                .collect(),
        }
    }

    pub fn tensor_product(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut out = Self::zero(self.n, self.order + other.order);
        for (i1, c1) in &self.entries {
            for (i2, c2) in &other.entries {
                let mut idx = i1.clone();
                idx.extend_from_slice(i2);
                out.insert(idx, c1 * c2);
            }
        }
        out
    }

    /// Standard inner product with orthonormal basis tensors.
    pub fn dot(&self, other: &Self) -> Q {
        let (small, big) = if self.entries.len() <= other.entries.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc = Q::zero();
        for (idx, c) in &small.entries {
            if let Some(d) = big.entries.get(idx) {
                acc += c * d;
            }
        }
        acc
    }
}

/// Right S_d action: (v₁⊗…⊗v_d)·σ = v_{σ(1)}⊗…⊗v_{σ(d)}.
pub fn permute(t: &SparseTensor, sigma: &Perm) -> Result<SparseTensor, TensorError> {
    if sigma.degree() != t.order() {
        return Err(TensorError::DegreeMismatch {
            perm: sigma.degree(),
            order: t.order(),
        });
    }
    let mut out = SparseTensor::zero(t.n, t.order);
    for (idx, c) in &t.entries {
        let new_idx: Vec<u8> = (0..t.order).map(|a| idx[sigma.apply(a)]).collect();
        out.insert(new_idx, c.clone());
    }
    Ok(out)
}

/// Element of the group algebra ℚS_d: finite rational combination of
/// permutations.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupAlgebraElement {
    d: usize,
    terms: BTreeMap<Perm, Q>,
}

impl GroupAlgebraElement {
    pub fn zero(d: usize) -> Self {
        GroupAlgebraElement {
            d,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(d: usize) -> Self {
        Self::from_perm(Perm::identity(d))
    }

    pub fn from_perm(p: Perm) -> Self {
        let d = p.degree();
        let mut terms = BTreeMap::new();
        terms.insert(p, Q::one());
        GroupAlgebraElement { d, terms }
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Perm, &Q)> {
        self.terms.iter()
    }

    pub fn insert(&mut self, p: Perm, c: Q) {
        debug_assert_eq!(p.degree(), self.d);
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(p.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&p);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.d, other.d);
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.insert(p.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(self.d);
        }
        GroupAlgebraElement {
            d: self.d,
            terms: self
                .terms
                .iter()
                .map(|(p, v)| (p.clone(), v * c))
                .collect(),
        }
    }

    /// Convolution product with e_g · e_h = e_{g∘h}.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.d, other.d);
        let mut out = Self::zero(self.d);
        for (g, a) in &self.terms {
            for (h, b) in &other.terms {
                out.insert(g.compose(h), a * b);
            }
        }
        out
    }

    /// Is this a rational multiple of `other`? Returns the factor.
    pub fn proportionality(&self, other: &Self) -> Option<Q> {
        if other.terms.is_empty() {
            return if self.terms.is_empty() {
                Some(Q::zero())
            } else {
                None
            };
        }
        let (p0, c0) = other.terms.iter().next().unwrap();
        let factor = self.terms.get(p0)? / c0;
        if self == &other.scale(&factor) {
            Some(factor)
        } else {
            None
        }
    }
}

/// Linear extension of the right action to group-algebra elements.
pub fn apply_group_algebra(
    t: &SparseTensor,
    g: &GroupAlgebraElement,
) -> Result<SparseTensor, TensorError> {
    if g.degree() != t.order() {
        return Err(TensorError::DegreeMismatch {
            perm: g.degree(),
            order: t.order(),
        });
    }
    let mut out = SparseTensor::zero(t.n, t.order);
    for (idx, c) in &t.entries {
        for (p, a) in &g.terms {
            let new_idx: Vec<u8> = (0..t.order).map(|x| idx[p.apply(x)]).collect();
            out.insert(new_idx, c * a);
        }
    }
    Ok(out)
}

/// Young-diagram shape with the box ↔ tensor-slot correspondence: boxes are
/// numbered down each column, columns left to right.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TableauShape {
    rows: Vec<usize>,    // λ
    columns: Vec<usize>, // λ'
    /// positions[c][r] = linear slot (0-based) of the box in column c, row r
    positions: Vec<Vec<usize>>,
}

impl TableauShape {
    pub fn from_rows(lambda: &[i64]) -> TableauShape {
        let columns: Vec<usize> = conjugate_entries(lambda)
            .expect("non-negative shape")
            .iter()
            .map(|&v| v as usize)
            .collect();
        Self::from_columns_usize(&columns)
    }

    pub fn from_weight(w: &Weight) -> TableauShape {
        Self::from_rows(w.entries())
    }

    /// Build directly from column heights λ'.
    pub fn from_columns(columns: &[i64]) -> TableauShape {
        Self::from_columns_usize(&columns.iter().map(|&v| v as usize).collect::<Vec<_>>())
    }

    fn from_columns_usize(columns: &[usize]) -> TableauShape {
        let columns = columns.to_vec();
        let rows: Vec<usize> = {
            let max_h = columns.iter().copied().max().unwrap_or(0);
            (1..=max_h)
                .map(|r| columns.iter().filter(|&&h| h >= r).count())
                .collect()
        };
        let mut positions = Vec::with_capacity(columns.len());
        let mut next = 0usize;
        for &h in &columns {
            positions.push((0..h).map(|r| next + r).collect());
            next += h;
        }
        TableauShape {
            rows,
            columns,
            positions,
        }
    }

    pub fn num_boxes(&self) -> usize {
        self.columns.iter().sum()
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn columns(&self) -> &[usize] {
        &self.columns
    }

    /// Linear slot of the box in `column` (0-based) and `row` (0-based).
    pub fn slot(&self, column: usize, row: usize) -> usize {
        self.positions[column][row]
    }

    /// Transposition exchanging box (col i, row a) with box (col j, row b),
    /// all 0-based, as an S_d element. The paper's (i_a j_b).
    pub fn box_transposition(&self, i: usize, a: usize, j: usize, b: usize) -> Perm {
        Perm::transposition(self.num_boxes(), self.slot(i, a), self.slot(j, b))
    }

    /// σ_𝐫 = Π_{j∈𝐫} (1_j 2_j): exchange the chosen rows of the first two
    /// columns (`rows` are 0-based row indices).
    pub fn sigma_r(&self, rows: &[usize]) -> Perm {
        let mut p = Perm::identity(self.num_boxes());
        for &r in rows {
            p = p.compose(&self.box_transposition(0, r, 1, r));
        }
        p
    }

    /// Row symmetriser a_λ: sum over all permutations preserving each row.
    pub fn row_symmetrizer(&self) -> GroupAlgebraElement {
        let d = self.num_boxes();
        let mut out = GroupAlgebraElement::identity(d);
        for (r, &len) in self.rows.iter().enumerate() {
            let positions: Vec<usize> = (0..len).map(|c| self.slot(c, r)).collect();
            let mut factor = GroupAlgebraElement::zero(d);
            for p in perms_of_positions(d, &positions) {
                factor.insert(p, Q::one());
            }
            out = out.mul(&factor);
        }
        out
    }

    /// Column antisymmetriser b_λ: signed sum over permutations preserving
    /// each column.
    pub fn column_antisymmetrizer(&self) -> GroupAlgebraElement {
        let d = self.num_boxes();
        let mut out = GroupAlgebraElement::identity(d);
        for positions in &self.positions {
            let mut factor = GroupAlgebraElement::zero(d);
            for p in perms_of_positions(d, positions) {
                let sign = p.sign();
                factor.insert(p, Q::from_integer(sign.into()));
            }
            out = out.mul(&factor);
        }
        out
    }

    /// Young symmetriser c_λ: the column antisymmetriser acts on the tensor
    /// first, then the row symmetriser. This is the composite that is
    /// idempotent up to n_λ and satisfies the column-exchange relations;
    /// under the right action t·(g·h) = (t·g)·h it is the product b_λ · a_λ.
    pub fn young_symmetrizer(&self) -> GroupAlgebraElement {
        self.column_antisymmetrizer().mul(&self.row_symmetrizer())
    }

    /// h_λ: the symmetriser of the single-box columns (3rd column onwards).
    pub fn single_column_symmetrizer(&self) -> GroupAlgebraElement {
        let d = self.num_boxes();
        let singles: Vec<usize> = (2..self.columns.len())
            .filter(|&c| self.columns[c] == 1)
            .map(|c| self.slot(c, 0))
            .collect();
        let mut out = GroupAlgebraElement::zero(d);
        for p in perms_of_positions(d, &singles) {
            out.insert(p, Q::one());
        }
        out
    }
}

/// Young symmetrisation μ_λ(t) = t · c_λ.
pub fn young_symmetrize(t: &SparseTensor, shape: &TableauShape) -> Result<SparseTensor, TensorError> {
    if shape.num_boxes() != t.order() {
        return Err(TensorError::ShapeMismatch {
            boxes: shape.num_boxes(),
            order: t.order(),
        });
    }
    apply_group_algebra(t, &shape.young_symmetrizer())
}

/// Metric contraction tr_{p,q} with 1-based positions p < q.
pub fn trace(t: &SparseTensor, p: usize, q: usize) -> Result<SparseTensor, TensorError> {
    if p < 1 || q <= p || q > t.order() {
        return Err(TensorError::BadTracePositions {
            p,
            q,
            order: t.order(),
        });
    }
    let mut out = SparseTensor::zero(t.n(), t.order() - 2);
    for (idx, c) in &t.entries {
        if idx[p - 1] != idx[q - 1] {
            continue;
        }
        let mut rest = Vec::with_capacity(idx.len() - 2);
        for (a, &v) in idx.iter().enumerate() {
            if a != p - 1 && a != q - 1 {
                rest.push(v);
            }
        }
        out.insert(rest, c.clone());
    }
    Ok(out)
}

/// Insertion adjoint to tr_{p,q}: place Q's paired index at positions
/// (p, q) of the result (1-based in the result's order = t.order()+2).
pub fn insert_metric(t: &SparseTensor, p: usize, q: usize) -> SparseTensor {
    let d = t.order() + 2;
    assert!(p >= 1 && p < q && q <= d);
    let mut out = SparseTensor::zero(t.n(), d);
    for (idx, c) in &t.entries {
        for i in 1..=t.n() as u8 {
            let mut v = Vec::with_capacity(d);
            let mut src = idx.iter();
            for a in 1..=d {
                if a == p || a == q {
                    v.push(i);
                } else {
                    v.push(*src.next().unwrap());
                }
            }
            out.insert(v, c.clone());
        }
    }
    out
}

/// G = Σ_{a<b} ins_{a,b} ∘ tr_{a,b}: self-adjoint with kernel the trace-free
/// subspace and image the trace ideal.
pub fn trace_ideal_operator(t: &SparseTensor) -> SparseTensor {
    let d = t.order();
    let mut out = SparseTensor::zero(t.n(), d);
    for a in 1..=d {
        for b in a + 1..=d {
            let tr = trace(t, a, b).expect("valid positions");
            out = out.add(&insert_metric(&tr, a, b));
        }
    }
    out
}

/// Orthogonal projection onto the joint kernel of all contractions tr_{p,q}.
pub fn trace_free_project(t: &SparseTensor) -> SparseTensor {
    if t.order() < 2 || t.is_zero() {
        return t.clone();
    }
    let ideal_part = krylov_image_projection(t, &trace_ideal_operator);
    t.sub(&ideal_part)
}

/// Projection of `t` onto im(G) for a self-adjoint PSD operator `g`,
/// computed exactly in the Krylov space {Gt, G²t, …}.
pub fn krylov_image_projection(
    t: &SparseTensor,
    g: &dyn Fn(&SparseTensor) -> SparseTensor,
) -> SparseTensor {
    let mut basis: Vec<SparseTensor> = Vec::new(); // v_1 = Gt, v_2 = G v_1, ...
    let mut v = g(t);
    if v.is_zero() {
        return SparseTensor::zero(t.n(), t.order());
    }
    loop {
        basis.push(v.clone());
        v = g(&v);
        // stop once v is linearly dependent on the basis: solve in the Gram
        // matrix of the collected vectors
        if let Some(coeffs) = solve_in_span(&basis, &v) {
            // v_{m+1} = Σ coeffs_i v_i. Now solve Σ c_i v_{i+1} = v_1 for the
            // ideal component s = Σ c_i v_i.
            let m = basis.len();
            // Represent the shift action: in the Krylov basis, G v_i = v_{i+1}
            // for i < m and G v_m = Σ coeffs_i v_i.
            // Solve (c_1, …, c_m) from Σ c_i (G v_i) = v_1.
            let mut mat = vec![vec![Q::zero(); m]; m]; // columns: G v_i in basis coords
            for (i, row) in mat.iter_mut().enumerate().take(m - 1) {
                let _ = i;
                let _ = row;
            }
            for i in 0..m {
                if i + 1 < m {
                    mat[i + 1][i] = Q::one();
                } else {
                    for (r, c) in coeffs.iter().enumerate() {
                        mat[r][i] = c.clone();
                    }
                }
            }
            let mut rhs = vec![Q::zero(); m];
            rhs[0] = Q::one();
            let sol = solve_linear(mat, rhs).expect("Krylov system is consistent");
            let mut s = SparseTensor::zero(t.n(), t.order());
            for (c, b) in sol.iter().zip(&basis) {
                s = s.add(&b.scale(c));
            }
            debug_assert!(g(&t.sub(&s)).is_zero());
            return s;
        }
    }
}

/// If `v` lies in the span of `basis`, return its coefficients.
fn solve_in_span(basis: &[SparseTensor], v: &SparseTensor) -> Option<Vec<Q>> {
    // Gram system: Σ x_j ⟨b_i, b_j⟩ = ⟨b_i, v⟩. For vectors in the span this
    // is necessary and sufficient; verify the candidate afterwards.
    let m = basis.len();
    let mut mat = vec![vec![Q::zero(); m]; m];
    for i in 0..m {
        for j in 0..=i {
            let g = basis[i].dot(&basis[j]);
            mat[i][j] = g.clone();
            mat[j][i] = g;
        }
    }
    let rhs: Vec<Q> = basis.iter().map(|b| b.dot(v)).collect();
    let x = solve_linear(mat, rhs)?;
    let mut cand = SparseTensor::zero(v.n(), v.order());
    for (c, b) in x.iter().zip(basis) {
        cand = cand.add(&b.scale(c));
    }
    if &cand == v {
        Some(x)
    } else {
        None
    }
}

/// Gaussian elimination over ℚ; returns one solution if the system is
/// consistent.
pub fn solve_linear(mut mat: Vec<Vec<Q>>, mut rhs: Vec<Q>) -> Option<Vec<Q>> {
    let rows = mat.len();
    if rows == 0 {
        return Some(vec![]);
    }
    let cols = mat[0].len();
    let mut pivot_col_of_row = vec![usize::MAX; rows];
    let mut r = 0usize;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !mat[i][c].is_zero()) else {
            continue;
        };
        mat.swap(r, p);
        rhs.swap(r, p);
        let inv = mat[r][c].clone();
        for x in mat[r].iter_mut() {
            *x /= &inv;
        }
        rhs[r] /= &inv;
        for i in 0..rows {
            if i != r && !mat[i][c].is_zero() {
                let f = mat[i][c].clone();
                for j in 0..cols {
                    let t = &mat[r][j] * &f;
                    mat[i][j] -= t;
                }
                let t = &rhs[r] * &f;
                rhs[i] -= t;
            }
        }
        pivot_col_of_row[r] = c;
        r += 1;
        if r == rows {
            break;
        }
    }
    // consistency
    for i in r..rows {
        if !rhs[i].is_zero() {
            return None;
        }
    }
    let mut x = vec![Q::zero(); cols];
    for i in 0..r {
        x[pivot_col_of_row[i]] = rhs[i].clone();
    }
    Some(x)
}

/// Hodge star on antisymmetric tensors: *e_{π₁…π_k} = sgn π · e_{π_{k+1}…π_n}
/// where e_I denotes the full signed wedge sum. The input decomposes over
/// sorted index representatives; each wedge unit maps to the complementary
/// wedge unit with the sign of the concatenated permutation.
pub fn hodge_star(t: &SparseTensor, n: usize) -> Result<SparseTensor, TensorError> {
    if t.n() != n {
        return Err(TensorError::DimensionMismatch(t.n(), n));
    }
    if !is_antisymmetric(t) {
        return Err(TensorError::NotAntisymmetric);
    }
    let k = t.order();
    let mut out = SparseTensor::zero(n, n - k);
    for (idx, c) in &t.entries {
        if !idx.windows(2).all(|w| w[0] < w[1]) {
            continue; // only the sorted representative of each wedge
        }
        let mut used = vec![false; n + 1];
        for &i in idx {
            used[i as usize] = true;
        }
        let comp: Vec<u8> = (1..=n as u8).filter(|&i| !used[i as usize]).collect();
        // sign of the permutation (idx, comp) of (1..n)
        let mut full: Vec<u8> = idx.clone();
        full.extend_from_slice(&comp);
        let sign = Q::from_integer(perm_sign_of_list(&full).into());
        out = out.add(&SparseTensor::wedge_basis(n, &comp).scale(&(c * sign)));
    }
    Ok(out)
}

fn has_repeat(idx: &[u8]) -> bool {
    let mut seen = 0u64;
    for &i in idx {
        let bit = 1u64 << i;
        if seen & bit != 0 {
            return true;
        }
        seen |= bit;
    }
    false
}

fn perm_sign_of_list(list: &[u8]) -> i32 {
    let mut inv = 0usize;
    for i in 0..list.len() {
        for j in i + 1..list.len() {
            if list[i] > list[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

fn is_antisymmetric(t: &SparseTensor) -> bool {
    // reconstruct from sorted representatives and compare
    let mut recon = SparseTensor::zero(t.n(), t.order());
    for (idx, _) in t.entries() {
        if has_repeat(idx) {
            return false;
        }
        if idx.windows(2).all(|w| w[0] < w[1]) {
            recon = recon.add(&SparseTensor::wedge_basis(t.n(), idx).scale(&t.get(idx)));
        }
    }
    &recon == t
}

/// The wedge-block tensor 𝐞_{π,𝐫}: the tensor product of full signed wedges
/// of consecutive π-segments of lengths r₁, …, r_d.
pub fn wedge_blocks(n: usize, pi: &Perm, r: &[usize]) -> SparseTensor {
    let mut out = SparseTensor::scalar(n, Q::one());
    let mut start = 0usize;
    for &len in r {
        let seg: Vec<u8> = (0..len).map(|a| pi.apply(start + a) as u8 + 1).collect();
        out = out.tensor_product(&SparseTensor::wedge_basis(n, &seg));
        start += len;
    }
    out
}

/// The identity Σ_{i∈S} Σ_π sgn π e_{π_i} ⊗ e_{π_{i₁}…π_{i_k}}
/// = k Σ_π sgn π e_{π_{i₁}} ⊗ e_{π_{i₁}…π_{i_k}}, with S = {i₁,…,i_k} a set
/// of positions and wedge the full signed sum.
pub fn verify_main_tool(n: usize, positions: &[usize]) -> bool {
    let k = positions.len();
    assert!(k <= n && k >= 1);
    let mut lhs = SparseTensor::zero(n, 1 + k);
    let mut rhs = SparseTensor::zero(n, 1 + k);
    for pi in all_perms(n) {
        let sgn = Q::from_integer(pi.sign().into());
        let wedge_idx: Vec<u8> = positions.iter().map(|&p| pi.apply(p) as u8 + 1).collect();
        let wedge = SparseTensor::wedge_basis(n, &wedge_idx);
        for &i in positions {
            let head = SparseTensor::basis(n, &[pi.apply(i) as u8 + 1]);
            lhs = lhs.add(&head.tensor_product(&wedge).scale(&sgn));
        }
        let head = SparseTensor::basis(n, &[pi.apply(positions[0]) as u8 + 1]);
        rhs = rhs.add(
            &head
                .tensor_product(&wedge)
                .scale(&(&sgn * Q::from_integer(k.into()))),
        );
    }
    lhs == rhs
}

/// 𝐞_{π,𝐫,i,𝐤}: the wedge-block tensor with e_{π_i} prepended to every
/// block indexed by 𝐤 (0-based block indices).
fn wedge_blocks_marked(n: usize, pi: &Perm, r: &[usize], i: usize, marked: &[usize]) -> SparseTensor {
    let mut out = SparseTensor::scalar(n, Q::one());
    let mut start = 0usize;
    for (b, &len) in r.iter().enumerate() {
        let mut seg: Vec<u8> = Vec::with_capacity(len + 1);
        if marked.contains(&b) {
            seg.push(pi.apply(i) as u8 + 1);
        }
        seg.extend((0..len).map(|a| pi.apply(start + a) as u8 + 1));
        out = out.tensor_product(&SparseTensor::wedge_basis(n, &seg));
        start += len;
    }
    out
}

/// Same, with e_{π_i} in marked block `p` exchanged against the leading
/// vector e_{π_{s_q}} of unmarked block `q` (the σ_{pq} operation).
fn wedge_blocks_sigma(
    n: usize,
    pi: &Perm,
    r: &[usize],
    i: usize,
    marked: &[usize],
    p_block: usize,
    q_block: usize,
) -> SparseTensor {
    let starts: Vec<usize> = r
        .iter()
        .scan(0usize, |acc, &len| {
            let s = *acc;
            *acc += len;
            Some(s)
        })
        .collect();
    let sq = starts[q_block];
    let mut out = SparseTensor::scalar(n, Q::one());
    for (b, &len) in r.iter().enumerate() {
        let mut seg: Vec<u8> = Vec::with_capacity(len + 1);
        if marked.contains(&b) {
            // the marked insertion: in block p use e_{π_{s_q}} instead
            if b == p_block {
                seg.push(pi.apply(sq) as u8 + 1);
            } else {
                seg.push(pi.apply(i) as u8 + 1);
            }
        }
        for a in 0..len {
            let pos = starts[b] + a;
            if b == q_block && a == 0 {
                seg.push(pi.apply(i) as u8 + 1);
            } else {
                seg.push(pi.apply(pos) as u8 + 1);
            }
        }
        out = out.tensor_product(&SparseTensor::wedge_basis(n, &seg));
    }
    out
}

/// The proto-Bianchi identity: for a composition 𝐫 of n, marked blocks 𝐤
/// (0-based), p ∈ 𝐤 and 𝐤' the complement,
/// (r_p+1) Σ_{i,π} sgn π 𝐞_{π,𝐫,i,𝐤} = Σ_{q∈𝐤'} r_q Σ_{i,π} sgn π σ_{pq}(𝐞_{π,𝐫,i,𝐤}).
pub fn verify_proto_bianchi(n: usize, r: &[usize], marked: &[usize], p_block: usize) -> bool {
    assert_eq!(r.iter().sum::<usize>(), n, "𝐫 must be a composition of n");
    assert!(marked.contains(&p_block));
    let unmarked: Vec<usize> = (0..r.len()).filter(|b| !marked.contains(b)).collect();
    assert!(!marked.is_empty() && !unmarked.is_empty());
    let order: usize = n + marked.len();
    let mut lhs = SparseTensor::zero(n, order);
    let mut rhs = SparseTensor::zero(n, order);
    let rp = Q::from_integer((r[p_block] as i64 + 1).into());
    for pi in all_perms(n) {
        let sgn = Q::from_integer(pi.sign().into());
        for i in 0..n {
            lhs = lhs.add(&wedge_blocks_marked(n, &pi, r, i, marked).scale(&(&sgn * &rp)));
            for &qb in &unmarked {
                let rq = Q::from_integer((r[qb] as i64).into());
                rhs = rhs.add(
                    &wedge_blocks_sigma(n, &pi, r, i, marked, p_block, qb)
                        .scale(&(&sgn * &rq)),
                );
            }
        }
    }
    lhs == rhs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{qi, qr};

    #[test]
    fn permute_examples() {
        let t = SparseTensor::basis(3, &[1, 2]);
        let swapped = permute(&t, &Perm::transposition(2, 0, 1)).unwrap();
        assert_eq!(swapped, SparseTensor::basis(3, &[2, 1]));
        let id = permute(&t, &Perm::identity(2)).unwrap();
        assert_eq!(id, t);
        assert!(permute(&t, &Perm::identity(3)).is_err());
    }

    #[test]
    fn right_action_composition() {
        // (t·σ)·τ = t·(σ∘τ)
        let mut t = SparseTensor::zero(3, 4);
        t.insert(vec![1, 2, 3, 1], qi(2));
        t.insert(vec![3, 3, 2, 1], qi(-1));
        t.insert(vec![2, 1, 1, 2], qr(1, 3));
        for s in all_perms(4).into_iter().take(8) {
            for u in all_perms(4).into_iter().rev().take(8) {
                let a = permute(&permute(&t, &s).unwrap(), &u).unwrap();
                let b = permute(&t, &s.compose(&u)).unwrap();
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn symmetrizer_on_pairs() {
        let t = SparseTensor::basis(3, &[1, 2]);
        // antisymmetrizer of the single column (1,1)' = shape rows (1,1)
        let anti = TableauShape::from_rows(&[1, 1]);
        let r = young_symmetrize(&t, &anti).unwrap();
        let want = SparseTensor::basis(3, &[1, 2]).sub(&SparseTensor::basis(3, &[2, 1]));
        assert_eq!(r, want);
        // symmetrizer of the single row (2)
        let sym = TableauShape::from_rows(&[2]);
        let r = young_symmetrize(&t, &sym).unwrap();
        let want = SparseTensor::basis(3, &[1, 2]).add(&SparseTensor::basis(3, &[2, 1]));
        assert_eq!(r, want);
        // antisymmetrization kills repeated indices
        let t = SparseTensor::basis(3, &[1, 1]);
        assert!(young_symmetrize(&t, &anti).unwrap().is_zero());
    }

    #[test]
    fn young_idempotent_up_to_factor() {
        // c_λ · c_λ = n_λ c_λ with n_λ a positive integer, |λ| ≤ 5
        for lambda in [
            vec![1i64],
            vec![2],
            vec![1, 1],
            vec![2, 1],
            vec![3],
            vec![1, 1, 1],
            vec![2, 2],
            vec![3, 1],
            vec![2, 1, 1],
            vec![4],
            vec![3, 2],
            vec![2, 2, 1],
            vec![4, 1],
            vec![3, 1, 1],
            vec![5],
            vec![2, 1, 1, 1],
            vec![1, 1, 1, 1, 1],
        ] {
            let shape = TableauShape::from_rows(&lambda);
            let c = shape.young_symmetrizer();
            let cc = c.mul(&c);
            let factor = cc.proportionality(&c).expect("c² must be ∝ c");
            assert!(factor.is_integer() && factor > Q::zero(), "λ={lambda:?}");
        }
    }

    #[test]
    fn trace_examples() {
        let t = SparseTensor::basis(3, &[1, 1, 3]);
        assert_eq!(trace(&t, 1, 2).unwrap(), SparseTensor::basis(3, &[3]));
        let q = SparseTensor::metric(3);
        assert_eq!(trace(&q, 1, 2).unwrap(), SparseTensor::scalar(3, qi(3)));
        let t = SparseTensor::basis(3, &[1, 2, 2]);
        assert!(trace(&t, 1, 3).unwrap().is_zero());
        assert!(trace(&t, 0, 1).is_err());
    }

    #[test]
    fn trace_free_projection_examples() {
        // e₁⊗e₁ − Q/3 at n = 3
        let t = SparseTensor::basis(3, &[1, 1]);
        let p = trace_free_project(&t);
        let want = t.sub(&SparseTensor::metric(3).scale(&qr(1, 3)));
        assert_eq!(p, want);
        // order ≤ 1 unchanged
        let t = SparseTensor::basis(3, &[2]);
        assert_eq!(trace_free_project(&t), t);
        // π_tr(Q) = 0
        assert!(trace_free_project(&SparseTensor::metric(4)).is_zero());
    }

    #[test]
    fn trace_free_is_idempotent_and_equivariant() {
        let mut t = SparseTensor::zero(3, 3);
        t.insert(vec![1, 1, 2], qi(1));
        t.insert(vec![2, 3, 3], qi(2));
        t.insert(vec![1, 2, 3], qi(-1));
        let p = trace_free_project(&t);
        assert_eq!(trace_free_project(&p), p);
        for a in 1..=3 {
            for b in a + 1..=3 {
                assert!(trace(&p, a, b).unwrap().is_zero());
            }
        }
        // commutes with the S_d action
        for s in all_perms(3) {
            let a = trace_free_project(&permute(&t, &s).unwrap());
            let b = permute(&trace_free_project(&t), &s).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn hodge_star_examples() {
        let e12 = SparseTensor::wedge_basis(3, &[1, 2]);
        assert_eq!(hodge_star(&e12, 3).unwrap(), SparseTensor::basis(3, &[3]));
        let e1 = SparseTensor::basis(2, &[1]);
        assert_eq!(hodge_star(&e1, 2).unwrap(), SparseTensor::basis(2, &[2]));
        let e2 = SparseTensor::basis(2, &[2]);
        assert_eq!(
            hodge_star(&e2, 2).unwrap(),
            SparseTensor::basis(2, &[1]).scale(&qi(-1))
        );
        // non-antisymmetric input rejected
        let t = SparseTensor::basis(3, &[1, 2]);
        assert_eq!(hodge_star(&t, 3), Err(TensorError::NotAntisymmetric));
    }

    #[test]
    fn hodge_star_double_sign() {
        // ** = (−1)^{k(n−k)}
        for n in 2..=4usize {
            for k in 1..n {
                let idx: Vec<u8> = (1..=k as u8).collect();
                let t = SparseTensor::wedge_basis(n, &idx);
                let ss = hodge_star(&hodge_star(&t, n).unwrap(), n).unwrap();
                let sign = if (k * (n - k)) % 2 == 0 { 1 } else { -1 };
                assert_eq!(ss, t.scale(&qi(sign)));
            }
        }
    }

    #[test]
    fn main_tool_identity() {
        assert!(verify_main_tool(3, &[0, 1]));
        assert!(verify_main_tool(4, &[2]));
        assert!(verify_main_tool(5, &[0, 2, 4]));
    }

    #[test]
    fn proto_bianchi_examples() {
        assert!(verify_proto_bianchi(3, &[1, 1, 1], &[0], 0));
        assert!(verify_proto_bianchi(4, &[2, 1, 1], &[0, 1], 0));
        assert!(verify_proto_bianchi(4, &[1, 1, 1, 1], &[0], 0));
    }

    #[test]
    fn bianchi_relations_small() {
        // μ_λ(e_T − Σ_S e_S) = 0 for semistandard T, λ = (2,1), n = 3
        for (lambda, n) in [(vec![2i64, 1], 3usize), (vec![2, 2], 3), (vec![3, 1], 3)] {
            assert!(crate::oracles::check_bianchi_all(&lambda, n));
        }
    }
}
