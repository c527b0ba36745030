//! Translation-invariant tensor-valued differential forms on the sphere
//! bundle of ℝⁿ, stored fully expanded: each term is a wedge monomial
//! dx_I ∧ dy_J, a monomial in the fibre coordinates y, and a tensor slot
//! multi-index. The Φ/Ξ/Ψ/Θ families, exterior calculus, Hodge-type and
//! Lefschetz operators, basepoint evaluation and exact ideal-membership
//! tests all live here.
//!
//! Identity checks follow the covariance reduction: both sides of every
//! identity are SO(n)-covariant, so equality modulo the vertical/symplectic/
//! trace ideals is tested at the single point (0, eₙ), where y = eₙ, dyₙ = 0
//! and dxₙ spans the contact direction. Ideal membership is an exact Krylov
//! projection for the sum of the ideals' positive-semidefinite "insert ∘
//! extract" operators, so membership comes with a residual that vanishes
//! exactly on the ideal.

use crate::perm::{all_perms, Perm};
use crate::scalar::{qi, Q};
use crate::tensor::{GroupAlgebraElement, SparseTensor, TableauShape};
use num::{One, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

pub mod ideal;
pub mod verify;

pub use ideal::{ideal_reduce, reduces_to, IdealReduction, IdealSpec};
pub use verify::{
    covariance_sign, kernel_catalog, verify_exchange_columns, verify_glob_relation,
    verify_slnbase, KernelEntry, SignedPermutation,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormError {
    #[error("family parameters out of range: {0}")]
    BadParameters(String),
    #[error("forms live on different sphere bundles: n = {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("operation needs a homogeneous bidegree")]
    NotHomogeneous,
    #[error("tensor order mismatch: shape has {shape} boxes, tensor part has {order} slots")]
    OrderMismatch { shape: usize, order: usize },
    #[error("operation requires a basepoint-evaluated form (no y dependence, no dyₙ)")]
    NotBasepoint,
}

/// One monomial key: dx-index set, dy-index set (both as sorted bitmasks over
/// 1..=n), y-monomial exponents, tensor slot multi-index.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct FormKey {
    pub dx: u32,
    pub dy: u32,
    pub ypow: Vec<u8>,
    pub slots: Vec<u8>,
}

/// A Γ-valued translation-invariant form: finite rational combination of
/// monomial keys. All terms share the tensor order; homogeneous bidegree is
/// required only where an operation needs it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FormExpr {
    n: usize,
    tensor_order: usize,
    terms: BTreeMap<FormKey, Q>,
}

fn popcount(mask: u32) -> usize {
    mask.count_ones() as usize
}

/// Sign to insert index `i` (0-based) at its sorted place, entering from the
/// left: parity of set bits below i.
fn insert_sign(mask: u32, i: u8) -> i32 {
    let below = mask & ((1u32 << i) - 1);
    if popcount(below) % 2 == 0 {
        1
    } else {
        -1
    }
}

impl FormExpr {
    pub fn zero(n: usize, tensor_order: usize) -> Self {
        FormExpr {
            n,
            tensor_order,
            terms: BTreeMap::new(),
        }
    }

    /// The scalar constant 1 (a 0-form with empty tensor part).
    pub fn one(n: usize) -> Self {
        let mut f = Self::zero(n, 0);
        f.insert(
            FormKey {
                dx: 0,
                dy: 0,
                ypow: vec![0; n],
                slots: vec![],
            },
            Q::one(),
        );
        f
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tensor_order(&self) -> usize {
        self.tensor_order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FormKey, &Q)> {
        self.terms.iter()
    }

    pub fn insert(&mut self, key: FormKey, c: Q) {
        debug_assert_eq!(key.slots.len(), self.tensor_order);
        debug_assert_eq!(key.ypow.len(), self.n);
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(key.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        assert_eq!(self.tensor_order, other.tensor_order);
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.insert(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(self.n, self.tensor_order);
        }
        FormExpr {
            n: self.n,
            tensor_order: self.tensor_order,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    /// Standard inner product in the monomial basis.
    pub fn dot(&self, other: &Self) -> Q {
        let (small, big) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc = Q::zero();
        for (k, c) in &small.terms {
            if let Some(d) = big.terms.get(k) {
                acc += c * d;
            }
        }
        acc
    }

    /// The bidegree (|I|, |J|) if constant across terms (None when zero).
    pub fn bidegree(&self) -> Result<Option<(usize, usize)>, FormError> {
        let mut deg = None;
        for k in self.terms.keys() {
            let d = (popcount(k.dx), popcount(k.dy));
            match deg {
                None => deg = Some(d),
                Some(prev) if prev != d => return Err(FormError::NotHomogeneous),
                _ => {}
            }
        }
        Ok(deg)
    }

    /// Group terms by (dx, dy, ypow), returning the tensor part of each group.
    pub fn tensor_parts(&self) -> BTreeMap<(u32, u32, Vec<u8>), SparseTensor> {
        let mut out: BTreeMap<(u32, u32, Vec<u8>), SparseTensor> = BTreeMap::new();
        for (k, c) in &self.terms {
            let t = out
                .entry((k.dx, k.dy, k.ypow.clone()))
                .or_insert_with(|| SparseTensor::zero(self.n, self.tensor_order));
            t.insert(k.slots.clone(), c.clone());
        }
        out
    }

    /// Rebuild from grouped tensor parts.
    pub fn from_tensor_parts(
        n: usize,
        tensor_order: usize,
        parts: impl IntoIterator<Item = ((u32, u32, Vec<u8>), SparseTensor)>,
    ) -> Self {
        let mut out = Self::zero(n, tensor_order);
        for ((dx, dy, ypow), t) in parts {
            for (slots, c) in t.entries() {
                out.insert(
                    FormKey {
                        dx,
                        dy,
                        ypow: ypow.clone(),
                        slots: slots.clone(),
                    },
                    c.clone(),
                );
            }
        }
        out
    }

    /// Apply a map to every tensor-part group.
    pub fn map_tensor_parts(&self, f: &dyn Fn(&SparseTensor) -> SparseTensor) -> Self {
        let mut order = None;
        let parts: Vec<_> = self
            .tensor_parts()
            .into_iter()
            .map(|(k, t)| {
                let ft = f(&t);
                order.get_or_insert(ft.order());
                (k, ft)
            })
            .collect();
        Self::from_tensor_parts(self.n, order.unwrap_or(self.tensor_order), parts)
    }

    /// True if no term depends on y and no term contains dyₙ: the shape of a
    /// basepoint-evaluated form.
    pub fn is_basepoint(&self) -> bool {
        self.terms
            .keys()
            .all(|k| k.ypow.iter().all(|&e| e == 0) && (k.dy >> (self.n - 1)) & 1 == 0)
    }
}

/// The four form families.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Family {
    Phi,
    Xi,
    Psi,
    Theta,
}

impl Family {
    pub fn letter(&self) -> &'static str {
        match self {
            Family::Phi => "Φ",
            Family::Xi => "Ξ",
            Family::Psi => "Ψ",
            Family::Theta => "Θ",
        }
    }
}

/// Tableau shape of a family's tensor part: columns run (i-block [+y]),
/// (π-block [+y]), then p single boxes. For Ψ the parameter q is the label
/// and each of the first two columns ends in a y slot.
pub fn family_shape(family: Family, k: usize, p: usize, q: usize) -> TableauShape {
    let (c1, c2) = match family {
        Family::Phi | Family::Psi => (q, q),
        Family::Xi => (q + 1, q),
        Family::Theta => (k, k),
    };
    let mut cols: Vec<i64> = Vec::new();
    if c1 > 0 {
        cols.push(c1 as i64);
    }
    if c2 > 0 {
        cols.push(c2 as i64);
    }
    cols.extend(std::iter::repeat(1).take(p));
    TableauShape::from_columns(&cols)
}

/// Valid parameter ranges for the family constructions.
pub fn family_params_valid(family: Family, n: usize, k: usize, p: usize, q: usize) -> bool {
    if k >= n {
        return false;
    }
    let cap = k.min(n - k - 1);
    match family {
        Family::Phi | Family::Xi => q <= cap,
        Family::Psi => q >= 1 && q <= cap + 1,
        Family::Theta => n == 2 * k + 1 && k >= 1 && q == k && p != usize::MAX,
    }
}

/// Build the plain (unsymmetrised) family form T̃_{⊗k,p,q}.
///
/// For Φ, Ξ, Ψ the sum runs over π ∈ S_n and free indices i₁…i_m ∈ {1..n}
/// with the prefactor (−1)^{n−1} sgn π · y_{π_n}; the tensor slots are
/// [i-block, (y), π-block, (y), y^⊗p] depending on the family. For Ψ the
/// parameter q is the label: the form uses q−1 free i-indices and carries a
/// y at the bottom of each of the first two columns. Θ̃ (n = 2k+1) has no
/// prefactor and sums over independent i- and j-blocks.
pub fn build_family(
    family: Family,
    n: usize,
    k: usize,
    p: usize,
    q: usize,
) -> Result<FormExpr, FormError> {
    if !family_params_valid(family, n, k, p, q) {
        return Err(FormError::BadParameters(format!(
            "{family:?} n={n} k={k} p={p} q={q}"
        )));
    }
    match family {
        Family::Theta => build_theta(n, k, p),
        _ => build_phi_like(family, n, k, p, q),
    }
}

/// Wedge the 1-based indices in the given order into a sorted mask; None if
/// an index repeats.
pub(crate) fn mask_of(indices: &[u8]) -> Option<(u32, i32)> {
    let mut mask = 0u32;
    let mut sign = 1i32;
    for &i in indices {
        let bit = 1u32 << (i - 1);
        if mask & bit != 0 {
            return None;
        }
        // appended on the right, so count existing factors above i
        let above = mask >> i;
        if popcount(above) % 2 == 1 {
            sign = -sign;
        }
        mask |= bit;
    }
    Some((mask, sign))
}

fn build_phi_like(
    family: Family,
    n: usize,
    k: usize,
    p: usize,
    q: usize,
) -> Result<FormExpr, FormError> {
    let num_i = match family {
        Family::Phi => q,
        Family::Xi => q,
        Family::Psi => q - 1,
        Family::Theta => unreachable!(),
    };
    let (y_in_col1, y_in_col2) = match family {
        Family::Phi => (false, false),
        Family::Xi => (true, false),
        Family::Psi => (true, true),
        Family::Theta => unreachable!(),
    };
    let tensor_order = match family {
        Family::Phi => 2 * q + p,
        Family::Xi => 2 * q + p + 1,
        Family::Psi => 2 * q + p,
        Family::Theta => unreachable!(),
    };
    let cn = if n % 2 == 0 { -1i64 } else { 1 };
    let mut out = FormExpr::zero(n, tensor_order);
    let mut i_tuple = vec![1u8; num_i];
    loop {
        for pi in all_perms(n) {
            let sgn = pi.sign();
            // dx_{i₁…i_m π_{m+1}…π_k}
            let mut dx_idx: Vec<u8> = i_tuple.clone();
            for pos in num_i..k {
                dx_idx.push(pi.apply(pos) as u8 + 1);
            }
            let Some((dx, sx)) = mask_of(&dx_idx) else {
                continue;
            };
            // dy_{π_{k+1}…π_{n−1}}
            let mut dy_idx: Vec<u8> = Vec::with_capacity(n - 1 - k);
            for pos in k..n - 1 {
                dy_idx.push(pi.apply(pos) as u8 + 1);
            }
            let Some((dy, sy)) = mask_of(&dy_idx) else {
                continue;
            };
            let y_factor = pi.apply(n - 1) as u8 + 1;
            // slot templates: Some(index) for fixed slots, None for y slots
            let mut slot_templates: Vec<Option<u8>> = Vec::with_capacity(tensor_order);
            for &i in &i_tuple {
                slot_templates.push(Some(i));
            }
            if y_in_col1 {
                slot_templates.push(None);
            }
            for pos in 0..num_i {
                slot_templates.push(Some(pi.apply(pos) as u8 + 1));
            }
            if y_in_col2 {
                slot_templates.push(None);
            }
            for _ in 0..p {
                slot_templates.push(None);
            }
            let coeff = qi(cn * (sgn * sx * sy) as i64);
            expand_y_slots(&mut out, n, dx, dy, &[(y_factor, 1)], &slot_templates, &coeff);
        }
        if !advance_tuple(&mut i_tuple, n as u8) {
            break;
        }
    }
    Ok(out)
}

fn build_theta(n: usize, k: usize, p: usize) -> Result<FormExpr, FormError> {
    let tensor_order = 2 * k + p;
    let mut out = FormExpr::zero(n, tensor_order);
    let mut i_tuple = vec![1u8; k];
    loop {
        if let Some((dx, sx)) = mask_of(&i_tuple) {
            let mut j_tuple = vec![1u8; k];
            loop {
                if let Some((dy, sy)) = mask_of(&j_tuple) {
                    let mut slot_templates: Vec<Option<u8>> =
                        Vec::with_capacity(tensor_order);
                    for &i in &i_tuple {
                        slot_templates.push(Some(i));
                    }
                    for &j in &j_tuple {
                        slot_templates.push(Some(j));
                    }
                    for _ in 0..p {
                        slot_templates.push(None);
                    }
                    let coeff = qi((sx * sy) as i64);
                    expand_y_slots(&mut out, n, dx, dy, &[], &slot_templates, &coeff);
                }
                if !advance_tuple(&mut j_tuple, n as u8) {
                    break;
                }
            }
        }
        if !advance_tuple(&mut i_tuple, n as u8) {
            break;
        }
    }
    Ok(out)
}

/// Fill every `None` slot with a basis index carrying a matching y-power,
/// accumulating all expansions into `out`.
pub(crate) fn expand_y_slots(
    out: &mut FormExpr,
    n: usize,
    dx: u32,
    dy: u32,
    y_fixed: &[(u8, u8)],
    slot_templates: &[Option<u8>],
    coeff: &Q,
) {
    let free: Vec<usize> = slot_templates
        .iter()
        .enumerate()
        .filter_map(|(a, s)| s.is_none().then_some(a))
        .collect();
    let mut fill = vec![1u8; free.len()];
    loop {
        let mut slots: Vec<u8> = slot_templates.iter().map(|s| s.unwrap_or(0)).collect();
        let mut ypow = vec![0u8; n];
        for &(var, e) in y_fixed {
            ypow[var as usize - 1] += e;
        }
        for (a, &slot_pos) in free.iter().enumerate() {
            slots[slot_pos] = fill[a];
            ypow[fill[a] as usize - 1] += 1;
        }
        out.insert(FormKey { dx, dy, ypow, slots }, coeff.clone());
        if free.is_empty() || !advance_tuple(&mut fill, n as u8) {
            break;
        }
    }
}

pub(crate) fn advance_tuple(t: &mut [u8], n: u8) -> bool {
    for v in t.iter_mut().rev() {
        if *v < n {
            *v += 1;
            return true;
        }
        *v = 1;
    }
    false
}

/// Apply a group-algebra element to the tensor part of every term.
pub fn symmetrize_family(f: &FormExpr, g: &GroupAlgebraElement) -> Result<FormExpr, FormError> {
    if g.degree() != f.tensor_order() {
        return Err(FormError::OrderMismatch {
            shape: g.degree(),
            order: f.tensor_order(),
        });
    }
    let mut out = FormExpr::zero(f.n, f.tensor_order);
    for (key, c) in &f.terms {
        for (perm, a) in g.terms() {
            let slots: Vec<u8> = (0..f.tensor_order)
                .map(|x| key.slots[perm.apply(x)])
                .collect();
            out.insert(
                FormKey {
                    dx: key.dx,
                    dy: key.dy,
                    ypow: key.ypow.clone(),
                    slots,
                },
                c * a,
            );
        }
    }
    Ok(out)
}

/// The symmetrisation levels of the form families.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SymLevel {
    /// b_λ only: wedge columns. T̃_{k,p,q}.
    Columns,
    /// h_λ then b_λ: additionally symmetrise the single boxes. T̃_{(k,p,q)}.
    Round,
    /// Full Young symmetrisation with the rows acting first, the composite
    /// under which the column-exchange expansion of the row symmetriser
    /// holds. T̃_{{k,p,q}}.
    Curly,
}

/// Build T̃ at the requested symmetrisation level, with an optional
/// permutation applied to the tensor slots first.
pub fn family_symmetrized(
    family: Family,
    n: usize,
    k: usize,
    p: usize,
    q: usize,
    pre: Option<&Perm>,
    level: SymLevel,
) -> Result<FormExpr, FormError> {
    let base = build_family(family, n, k, p, q)?;
    let shape = family_shape(family, k, p, q);
    let d = shape.num_boxes();
    if d != base.tensor_order() {
        return Err(FormError::OrderMismatch {
            shape: d,
            order: base.tensor_order(),
        });
    }
    let mut g = match pre {
        Some(perm) => GroupAlgebraElement::from_perm(perm.clone()),
        None => GroupAlgebraElement::identity(d),
    };
    g = match level {
        SymLevel::Columns => g.mul(&shape.column_antisymmetrizer()),
        SymLevel::Round => g
            .mul(&shape.single_column_symmetrizer())
            .mul(&shape.column_antisymmetrizer()),
        SymLevel::Curly => g
            .mul(&shape.row_symmetrizer())
            .mul(&shape.column_antisymmetrizer()),
    };
    symmetrize_family(&base, &g)
}

/// The harmonic form T̃_[k,p,q]: Young symmetrisation followed by the
/// trace-free projection of every tensor part.
pub fn harmonic_form(
    family: Family,
    n: usize,
    k: usize,
    p: usize,
    q: usize,
) -> Result<FormExpr, FormError> {
    let sym = family_symmetrized(family, n, k, p, q, None, SymLevel::Curly)?;
    Ok(sym.map_tensor_parts(&crate::tensor::trace_free_project))
}

/// Wedge product; tensor parts concatenate.
pub fn wedge(f: &FormExpr, g: &FormExpr) -> Result<FormExpr, FormError> {
    if f.n != g.n {
        return Err(FormError::DimensionMismatch(f.n, g.n));
    }
    let n = f.n;
    let mut out = FormExpr::zero(n, f.tensor_order + g.tensor_order);
    for (k1, c1) in &f.terms {
        for (k2, c2) in &g.terms {
            if k1.dx & k2.dx != 0 || k1.dy & k2.dy != 0 {
                continue;
            }
            let mut sign = 1i32;
            // dx₂ moves past the dy₁ block
            if popcount(k1.dy) % 2 == 1 && popcount(k2.dx) % 2 == 1 {
                sign = -sign;
            }
            sign *= merge_sign(k1.dx, k2.dx);
            sign *= merge_sign(k1.dy, k2.dy);
            let mut ypow = k1.ypow.clone();
            for (a, e) in ypow.iter_mut().zip(&k2.ypow) {
                *a += e;
            }
            let mut slots = k1.slots.clone();
            slots.extend_from_slice(&k2.slots);
            out.insert(
                FormKey {
                    dx: k1.dx | k2.dx,
                    dy: k1.dy | k2.dy,
                    ypow,
                    slots,
                },
                c1 * c2 * qi(sign as i64),
            );
        }
    }
    Ok(out)
}

/// Sign of sorting the concatenation (sorted mask₁, sorted mask₂) of two
/// disjoint masks: parity of pairs (a ∈ first, b ∈ second) with b < a.
fn merge_sign(first: u32, second: u32) -> i32 {
    let mut inversions = 0usize;
    let mut b = second;
    while b != 0 {
        let i = b.trailing_zeros();
        b &= b - 1;
        inversions += popcount(first >> (i + 1));
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Exterior derivative: d acts on the y-coefficients (including the expanded
/// tensor-slot y's) by Σᵢ ∂/∂yᵢ · dyᵢ; the dx and dy generators are closed.
pub fn exterior_d(f: &FormExpr) -> FormExpr {
    let n = f.n;
    let mut out = FormExpr::zero(n, f.tensor_order);
    for (key, c) in &f.terms {
        for i in 0..n {
            let e = key.ypow[i];
            if e == 0 {
                continue;
            }
            let bit = 1u32 << i;
            if key.dy & bit != 0 {
                continue;
            }
            // dyᵢ enters from the left: past the dx block, then into dy
            let mut sign = if popcount(key.dx) % 2 == 0 { 1 } else { -1 };
            sign *= insert_sign(key.dy, i as u8);
            let mut ypow = key.ypow.clone();
            ypow[i] -= 1;
            out.insert(
                FormKey {
                    dx: key.dx,
                    dy: key.dy | bit,
                    ypow,
                    slots: key.slots.clone(),
                },
                c * qi(e as i64 * sign as i64),
            );
        }
    }
    out
}

/// The contact form α = Σ yᵢ dxᵢ.
pub fn contact_form(n: usize) -> FormExpr {
    let mut out = FormExpr::zero(n, 0);
    for i in 0..n {
        let mut ypow = vec![0u8; n];
        ypow[i] = 1;
        out.insert(
            FormKey {
                dx: 1 << i,
                dy: 0,
                ypow,
                slots: vec![],
            },
            Q::one(),
        );
    }
    out
}

/// dα = Σ dyᵢ ∧ dxᵢ.
pub fn symplectic_form(n: usize) -> FormExpr {
    exterior_d(&contact_form(n))
}

/// Interior product with ∂/∂yⱼ (1-based j).
pub fn contract_dy(f: &FormExpr, j: u8) -> FormExpr {
    let n = f.n;
    let bit = 1u32 << (j - 1);
    let mut out = FormExpr::zero(n, f.tensor_order);
    for (key, c) in &f.terms {
        if key.dy & bit == 0 {
            continue;
        }
        let mut sign = if popcount(key.dx) % 2 == 0 { 1 } else { -1 };
        sign *= insert_sign(key.dy & !bit, j - 1);
        out.insert(
            FormKey {
                dx: key.dx,
                dy: key.dy & !bit,
                ypow: key.ypow.clone(),
                slots: key.slots.clone(),
            },
            c * qi(sign as i64),
        );
    }
    out
}

/// Evaluate at the basepoint (0, eₙ): y ↦ eₙ, terms containing dyₙ drop,
/// dxₙ is retained (it spans the contact direction there).
pub fn at_basepoint(f: &FormExpr) -> FormExpr {
    let n = f.n;
    let mut out = FormExpr::zero(n, f.tensor_order);
    for (key, c) in &f.terms {
        if key.ypow[..n - 1].iter().any(|&e| e != 0) {
            continue;
        }
        if (key.dy >> (n - 1)) & 1 == 1 {
            continue;
        }
        out.insert(
            FormKey {
                dx: key.dx,
                dy: key.dy,
                ypow: vec![0u8; n],
                slots: key.slots.clone(),
            },
            c.clone(),
        );
    }
    out
}

/// Hodge star on the dx part: Ω^{i,j} → Ω^{n−i,j}.
pub fn star1(f: &FormExpr) -> Result<FormExpr, FormError> {
    f.bidegree()?;
    let n = f.n;
    let full: u32 = (1u32 << n) - 1;
    let mut out = FormExpr::zero(n, f.tensor_order);
    for (key, c) in &f.terms {
        let comp = full & !key.dx;
        let sign = merge_sign(key.dx, comp);
        out.insert(
            FormKey {
                dx: comp,
                dy: key.dy,
                ypow: key.ypow.clone(),
                slots: key.slots.clone(),
            },
            c * qi(sign as i64),
        );
    }
    Ok(out)
}

/// Hodge star on the dy part of a basepoint-evaluated form: the fibre
/// cotangent space at eₙ is spanned by dy₁…dy_{n−1}, so complements are
/// taken within {1..n−1}.
pub fn star2(f: &FormExpr) -> Result<FormExpr, FormError> {
    if !f.is_basepoint() {
        return Err(FormError::NotBasepoint);
    }
    f.bidegree()?;
    let n = f.n;
    let full: u32 = (1u32 << (n - 1)) - 1;
    let mut out = FormExpr::zero(n, f.tensor_order);
    for (key, c) in &f.terms {
        let comp = full & !key.dy;
        let sign = merge_sign(key.dy, comp);
        out.insert(
            FormKey {
                dx: key.dx,
                dy: comp,
                ypow: key.ypow.clone(),
                slots: key.slots.clone(),
            },
            c * qi(sign as i64),
        );
    }
    Ok(out)
}

/// Lefschetz operator: wedge with dα.
pub fn lefschetz(f: &FormExpr) -> Result<FormExpr, FormError> {
    wedge(f, &symplectic_form(f.n))
}

/// dα restricted to the basepoint: the dyₙ term vanishes there.
pub fn symplectic_form_basepoint(n: usize) -> FormExpr {
    at_basepoint(&symplectic_form(n))
}

/// Wedge with dα at the basepoint.
pub fn lefschetz_basepoint(f: &FormExpr) -> FormExpr {
    wedge(f, &symplectic_form_basepoint(f.n)).expect("same bundle")
}

/// Sign with which wedging dyᵢ∧dxᵢ maps the monomial (dx, dy) to
/// (dx ∪ i, dy ∪ i).
fn symplectic_step_sign(dx: u32, dy: u32, i: u8) -> i32 {
    // matches f ∧ (dyᵢ∧dxᵢ) = −f ∧ (dxᵢ∧dyᵢ): dxᵢ crosses the dy block,
    // then both factors sort into place
    let mut sign = -1i32;
    if popcount(dy) % 2 == 1 {
        sign = -sign;
    }
    sign *= insert_sign_high(dx, i);
    sign *= insert_sign_high(dy, i);
    sign
}

/// Sign to append index i (0-based) on the right and sort it in: parity of
/// set bits above i.
fn insert_sign_high(mask: u32, i: u8) -> i32 {
    if popcount(mask >> (i + 1)) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Transpose of `lefschetz_basepoint` in the monomial basis.
pub fn lefschetz_dual_basepoint(f: &FormExpr) -> FormExpr {
    let n = f.n;
    let mut out = FormExpr::zero(n, f.tensor_order);
    for (key, c) in &f.terms {
        for i in 0..n - 1 {
            let bit = 1u32 << i;
            if key.dx & bit == 0 || key.dy & bit == 0 {
                continue;
            }
            let dx = key.dx & !bit;
            let dy = key.dy & !bit;
            let sign = symplectic_step_sign(dx, dy, i as u8);
            out.insert(
                FormKey {
                    dx,
                    dy,
                    ypow: key.ypow.clone(),
                    slots: key.slots.clone(),
                },
                c * qi(sign as i64),
            );
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::factorial;

    fn phi(n: usize, k: usize, p: usize, q: usize) -> FormExpr {
        build_family(Family::Phi, n, k, p, q).unwrap()
    }

    #[test]
    fn phi_n2_explicit() {
        // Φ̃_{⊗1,0,0} at n=2 is −(y₂ dx₁ − y₁ dx₂)
        let f = phi(2, 1, 0, 0);
        let mut want = FormExpr::zero(2, 0);
        want.insert(
            FormKey {
                dx: 0b01,
                dy: 0,
                ypow: vec![0, 1],
                slots: vec![],
            },
            qi(-1),
        );
        want.insert(
            FormKey {
                dx: 0b10,
                dy: 0,
                ypow: vec![1, 0],
                slots: vec![],
            },
            qi(1),
        );
        assert_eq!(f, want);
    }

    #[test]
    fn basepoint_examples() {
        // α|₀ = dxₙ
        let a = at_basepoint(&contact_form(3));
        assert_eq!(a.num_terms(), 1);
        let (key, c) = a.terms().next().unwrap();
        assert_eq!(key.dx, 0b100);
        assert_eq!(c, &Q::one());
        // Φ̃_{⊗1,0,0}|₀ at n=2 is −dx₁
        let f = at_basepoint(&phi(2, 1, 0, 0));
        assert_eq!(f.num_terms(), 1);
        let (key, c) = f.terms().next().unwrap();
        assert_eq!((key.dx, key.dy), (0b01, 0));
        assert_eq!(c, &qi(-1));
        // y₁y₂ evaluates to 0
        let mut g = FormExpr::zero(2, 0);
        g.insert(
            FormKey {
                dx: 0,
                dy: 0,
                ypow: vec![1, 1],
                slots: vec![],
            },
            Q::one(),
        );
        assert!(at_basepoint(&g).is_zero());
    }

    #[test]
    fn d_squared_is_zero() {
        let f = phi(3, 1, 1, 1);
        assert!(exterior_d(&exterior_d(&f)).is_zero());
        assert!(exterior_d(&exterior_d(&contact_form(4))).is_zero());
        let x = build_family(Family::Xi, 4, 2, 1, 1).unwrap();
        assert!(exterior_d(&exterior_d(&x)).is_zero());
    }

    #[test]
    fn d_of_y_dx() {
        // d(y₁ dx₁) = dy₁ ∧ dx₁ = −dx₁ ∧ dy₁
        let mut f = FormExpr::zero(2, 0);
        f.insert(
            FormKey {
                dx: 0b01,
                dy: 0,
                ypow: vec![1, 0],
                slots: vec![],
            },
            Q::one(),
        );
        let d = exterior_d(&f);
        assert_eq!(d.num_terms(), 1);
        let (key, c) = d.terms().next().unwrap();
        assert_eq!((key.dx, key.dy), (0b01, 0b01));
        assert_eq!(c, &qi(-1));
        // dα has one term per coordinate
        assert_eq!(symplectic_form(3).num_terms(), 3);
    }

    #[test]
    fn wedge_graded_commutative() {
        // α ∧ α = 0; α ∧ dα = dα ∧ α (odd·even)
        let a = contact_form(3);
        let da = symplectic_form(3);
        assert!(wedge(&a, &a).unwrap().is_zero());
        assert_eq!(wedge(&a, &da).unwrap(), wedge(&da, &a).unwrap());
        // two distinct odd forms anticommute
        let mut dx1 = FormExpr::zero(3, 0);
        dx1.insert(
            FormKey {
                dx: 0b001,
                dy: 0,
                ypow: vec![0; 3],
                slots: vec![],
            },
            Q::one(),
        );
        let mut dy2 = FormExpr::zero(3, 0);
        dy2.insert(
            FormKey {
                dx: 0,
                dy: 0b010,
                ypow: vec![0; 3],
                slots: vec![],
            },
            Q::one(),
        );
        let ab = wedge(&dx1, &dy2).unwrap();
        let ba = wedge(&dy2, &dx1).unwrap();
        assert_eq!(ab, ba.scale(&qi(-1)));
    }

    #[test]
    fn lefschetz_of_one_is_symplectic() {
        let one = FormExpr::one(3);
        assert_eq!(lefschetz(&one).unwrap(), symplectic_form(3));
        // basepoint Lefschetz agrees with wedging dα then evaluating
        let f = at_basepoint(&phi(3, 1, 0, 1));
        let a = lefschetz_basepoint(&f);
        let b = at_basepoint(&lefschetz(&at_basepoint(&phi(3, 1, 0, 1))).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn lefschetz_dual_is_transpose() {
        // ⟨Λf, g⟩ = ⟨f, Lg⟩ on random-ish basepoint monomials
        let n = 4;
        let mut f = FormExpr::zero(n, 1);
        f.insert(
            FormKey {
                dx: 0b0011,
                dy: 0b0101,
                ypow: vec![0; n],
                slots: vec![2],
            },
            qi(3),
        );
        f.insert(
            FormKey {
                dx: 0b1010,
                dy: 0b0110,
                ypow: vec![0; n],
                slots: vec![1],
            },
            qi(-2),
        );
        let mut g = FormExpr::zero(n, 1);
        g.insert(
            FormKey {
                dx: 0b0001,
                dy: 0b0100,
                ypow: vec![0; n],
                slots: vec![2],
            },
            qi(5),
        );
        g.insert(
            FormKey {
                dx: 0b0010,
                dy: 0b0010,
                ypow: vec![0; n],
                slots: vec![1],
            },
            qi(7),
        );
        assert_eq!(lefschetz_dual_basepoint(&f).dot(&g), f.dot(&lefschetz_basepoint(&g)));
    }

    #[test]
    fn star1_examples() {
        // *₁ dx₁ = dx₂ at n=2
        let mut f = FormExpr::zero(2, 0);
        f.insert(
            FormKey {
                dx: 0b01,
                dy: 0,
                ypow: vec![0; 2],
                slots: vec![],
            },
            Q::one(),
        );
        let s = star1(&f).unwrap();
        let (key, c) = s.terms().next().unwrap();
        assert_eq!(key.dx, 0b10);
        assert_eq!(c, &Q::one());
        // *₁*₁ = (−1)^{i(n−i)}
        for n in 2..=4usize {
            for i in 0..=n {
                let mask = (1u32 << i) - 1;
                let mut f = FormExpr::zero(n, 0);
                f.insert(
                    FormKey {
                        dx: mask,
                        dy: 0,
                        ypow: vec![0; n],
                        slots: vec![],
                    },
                    Q::one(),
                );
                let ss = star1(&star1(&f).unwrap()).unwrap();
                let sign = if (i * (n - i)) % 2 == 0 { 1 } else { -1 };
                assert_eq!(ss, f.scale(&qi(sign)));
            }
        }
    }

    #[test]
    fn family_round_is_p_factorial() {
        // T̃_{(k,p,q)} = p! T̃_{k,p,q} for Φ at n=4, k=1, p=2, q=1
        let cols = family_symmetrized(Family::Phi, 4, 1, 2, 1, None, SymLevel::Columns).unwrap();
        let round = family_symmetrized(Family::Phi, 4, 1, 2, 1, None, SymLevel::Round).unwrap();
        assert_eq!(round, cols.scale(&factorial(2)));
    }

    #[test]
    fn psi_single_box_swap_vanishes() {
        // Ψ̃^{(1₁3)}_{(k,p,q)} = 0: the swap moves a free y into column 1,
        // which already ends in a y, and the column antisymmetrisation
        // kills the symmetric pair. Label q = 2 at n=5, k=2, p=1.
        let shape = family_shape(Family::Psi, 2, 1, 2);
        let perm = shape.box_transposition(0, 0, 2, 0); // (1₁ 3)
        let f = family_symmetrized(Family::Psi, 5, 2, 1, 2, Some(&perm), SymLevel::Round).unwrap();
        assert!(f.is_zero());
        // for Φ there is no y in the columns and the swap survives
        let shape = family_shape(Family::Phi, 2, 1, 2);
        let perm = shape.box_transposition(0, 0, 2, 0);
        let f = family_symmetrized(Family::Phi, 5, 2, 1, 2, Some(&perm), SymLevel::Round).unwrap();
        assert!(!f.is_zero());
    }

    #[test]
    fn lower_rank_relations_exact() {
        // Φ̃_{k,1,0} = Ξ̃_{k,0,0} and Ψ̃_{k,p,1} = Ξ̃_{k,p+1,0} = Φ̃_{k,p+2,0}
        for n in 2..=4usize {
            for k in 0..n {
                if family_params_valid(Family::Phi, n, k, 1, 0) {
                    let a = family_symmetrized(Family::Phi, n, k, 1, 0, None, SymLevel::Columns)
                        .unwrap();
                    let b = family_symmetrized(Family::Xi, n, k, 0, 0, None, SymLevel::Columns)
                        .unwrap();
                    assert_eq!(a, b, "Φ(k,1,0) vs Ξ(k,0,0) n={n} k={k}");
                }
                for p in 0..=1usize {
                    if family_params_valid(Family::Psi, n, k, p, 1) {
                        let a = family_symmetrized(Family::Psi, n, k, p, 1, None, SymLevel::Columns)
                            .unwrap();
                        let b =
                            family_symmetrized(Family::Xi, n, k, p + 1, 0, None, SymLevel::Columns)
                                .unwrap();
                        let c =
                            family_symmetrized(Family::Phi, n, k, p + 2, 0, None, SymLevel::Columns)
                                .unwrap();
                        assert_eq!(a, b, "Ψ(k,p,1) vs Ξ(k,p+1,0) n={n} k={k} p={p}");
                        assert_eq!(b, c, "Ξ(k,p+1,0) vs Φ(k,p+2,0) n={n} k={k} p={p}");
                    }
                }
            }
        }
    }

    #[test]
    fn bad_parameters_rejected() {
        assert!(build_family(Family::Phi, 3, 1, 0, 2).is_err());
        assert!(build_family(Family::Theta, 4, 1, 0, 1).is_err());
        assert!(build_family(Family::Psi, 3, 1, 0, 0).is_err());
    }
}
