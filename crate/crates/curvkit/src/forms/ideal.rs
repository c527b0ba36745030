//! Exact ideal-membership tests for basepoint-evaluated forms.
//!
//! A form at (0, eₙ) is reduced modulo any combination of four ideals:
//! vertical (multiples of α = dxₙ), symplectic (multiples of dα), trace
//! (terms whose tensor part is a metric insertion), and exact (the span of
//! explicitly supplied d-images). Each ideal contributes a self-adjoint
//! positive-semidefinite operator whose image is the ideal; membership in
//! the sum of images is an exact Krylov projection, mirroring the
//! trace-free projection of tensors.

use super::{
    at_basepoint, exterior_d, lefschetz_basepoint, lefschetz_dual_basepoint, FormError, FormExpr,
    FormKey,
};
use crate::scalar::Q;
use crate::tensor::solve_linear;
use num::{One, Zero};

/// Which ideals to reduce by.
#[derive(Clone, Default)]
pub struct IdealSpec {
    pub vertical: bool,
    pub symplectic: bool,
    pub trace: bool,
    /// Reference forms whose exterior derivatives (evaluated at the
    /// basepoint) generate the "exact" part of the ideal.
    pub exact_witnesses: Vec<FormExpr>,
}

impl IdealSpec {
    pub fn vertical_only() -> Self {
        IdealSpec {
            vertical: true,
            ..Default::default()
        }
    }

    pub fn symplectic_only() -> Self {
        IdealSpec {
            symplectic: true,
            ..Default::default()
        }
    }

    pub fn vs() -> Self {
        IdealSpec {
            vertical: true,
            symplectic: true,
            ..Default::default()
        }
    }

    pub fn vst() -> Self {
        IdealSpec {
            vertical: true,
            symplectic: true,
            trace: true,
            ..Default::default()
        }
    }

    pub fn with_exact(mut self, witnesses: Vec<FormExpr>) -> Self {
        self.exact_witnesses = witnesses;
        self
    }
}

/// Result of an ideal reduction: the residual (zero iff the input lies in
/// the ideal) and the ideal component, their sum being the input.
pub struct IdealReduction {
    pub residual: FormExpr,
    pub ideal_part: FormExpr,
}

impl IdealReduction {
    /// Number of nonzero residual terms, the "residual norm" reported by
    /// the CLI.
    pub fn residual_terms(&self) -> usize {
        self.residual.num_terms()
    }
}

/// Projection onto the dxₙ-multiples (an orthogonal projection already).
fn vertical_part(f: &FormExpr) -> FormExpr {
    let n = f.n();
    let bit = 1u32 << (n - 1);
    let mut out = FormExpr::zero(n, f.tensor_order());
    for (k, c) in f.terms() {
        if k.dx & bit != 0 {
            out.insert(k.clone(), c.clone());
        }
    }
    out
}

/// G_T: Σ_{a<b} insert ∘ trace on every tensor-part group.
fn trace_operator(f: &FormExpr) -> FormExpr {
    f.map_tensor_parts(&crate::tensor::trace_ideal_operator)
}

/// Reduce `f` (a basepoint-evaluated form) modulo the requested ideals.
pub fn ideal_reduce(f: &FormExpr, spec: &IdealSpec) -> Result<IdealReduction, FormError> {
    if !f.is_basepoint() {
        return Err(FormError::NotBasepoint);
    }
    let witnesses: Vec<FormExpr> = spec
        .exact_witnesses
        .iter()
        .map(|w| at_basepoint(&exterior_d(w)))
        .collect();
    let op = |g: &FormExpr| -> FormExpr {
        let mut acc = FormExpr::zero(g.n(), g.tensor_order());
        if spec.vertical {
            acc = acc.add(&vertical_part(g));
        }
        if spec.symplectic {
            acc = acc.add(&lefschetz_basepoint(&lefschetz_dual_basepoint(g)));
        }
        if spec.trace {
            acc = acc.add(&trace_operator(g));
        }
        for w in &witnesses {
            let coeff = w.dot(g);
            if !coeff.is_zero() {
                acc = acc.add(&w.scale(&coeff));
            }
        }
        acc
    };
    let ideal_part = krylov_image_projection_form(f, &op);
    Ok(IdealReduction {
        residual: f.sub(&ideal_part),
        ideal_part,
    })
}

/// Krylov projection of `f` onto im(G), exactly as for tensors.
fn krylov_image_projection_form(f: &FormExpr, g: &dyn Fn(&FormExpr) -> FormExpr) -> FormExpr {
    let mut basis: Vec<FormExpr> = Vec::new();
    let mut v = g(f);
    if v.is_zero() {
        return FormExpr::zero(f.n(), f.tensor_order());
    }
    loop {
        basis.push(v.clone());
        v = g(&v);
        if let Some(coeffs) = solve_in_span_form(&basis, &v) {
            let m = basis.len();
            let mut mat = vec![vec![Q::zero(); m]; m];
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
            let mut s = FormExpr::zero(f.n(), f.tensor_order());
            for (c, b) in sol.iter().zip(&basis) {
                s = s.add(&b.scale(c));
            }
            debug_assert!(g(&f.sub(&s)).is_zero());
            return s;
        }
    }
}

fn solve_in_span_form(basis: &[FormExpr], v: &FormExpr) -> Option<Vec<Q>> {
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
    let mut cand = FormExpr::zero(v.n(), v.tensor_order());
    for (c, b) in x.iter().zip(basis) {
        cand = cand.add(&b.scale(c));
    }
    if &cand == v {
        Some(x)
    } else {
        None
    }
}

/// Convenience: residual of the difference f − g under the spec.
pub fn reduces_to(f: &FormExpr, g: &FormExpr, spec: &IdealSpec) -> Result<bool, FormError> {
    Ok(ideal_reduce(&f.sub(g), spec)?.residual.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{
        build_family, contact_form, symplectic_form_basepoint, wedge, Family,
    };
    use crate::scalar::qi;
    use num::One;

    fn dx(n: usize, mask: u32) -> FormExpr {
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
        f
    }

    #[test]
    fn vertical_membership() {
        // α ∧ dx₁ at the basepoint is a dxₙ-multiple
        let n = 3;
        let a = at_basepoint(&contact_form(n));
        let f = wedge(&a, &dx(n, 0b001)).unwrap();
        let r = ideal_reduce(&f, &IdealSpec::vertical_only()).unwrap();
        assert!(r.residual.is_zero());
        // dx₁ alone is not vertical
        let r = ideal_reduce(&dx(n, 0b001), &IdealSpec::vertical_only()).unwrap();
        assert!(!r.residual.is_zero());
    }

    #[test]
    fn symplectic_membership() {
        let n = 3;
        let da = symplectic_form_basepoint(n);
        let f = wedge(&da, &dx(n, 0b001)).unwrap();
        let r = ideal_reduce(&f, &IdealSpec::symplectic_only()).unwrap();
        assert!(r.residual.is_zero());
        // a single monomial dx₁∧dy₁ is not a dα-multiple at n = 3
        let mut g = FormExpr::zero(n, 0);
        g.insert(
            FormKey {
                dx: 0b001,
                dy: 0b001,
                ypow: vec![0; n],
                slots: vec![],
            },
            qi(1),
        );
        let r = ideal_reduce(&g, &IdealSpec::symplectic_only()).unwrap();
        assert!(!r.residual.is_zero());
        // but dα itself is
        let r = ideal_reduce(&da, &IdealSpec::symplectic_only()).unwrap();
        assert!(r.residual.is_zero());
    }

    #[test]
    fn trace_membership() {
        // a form with tensor part Q is in the trace ideal
        let n = 3;
        let mut f = FormExpr::zero(n, 2);
        for i in 1..=n as u8 {
            f.insert(
                FormKey {
                    dx: 0b001,
                    dy: 0,
                    ypow: vec![0; n],
                    slots: vec![i, i],
                },
                Q::one(),
            );
        }
        let spec = IdealSpec {
            trace: true,
            ..Default::default()
        };
        let r = ideal_reduce(&f, &spec).unwrap();
        assert!(r.residual.is_zero());
        // e₁⊗e₁ is not purely a trace part
        let mut g = FormExpr::zero(n, 2);
        g.insert(
            FormKey {
                dx: 0b001,
                dy: 0,
                ypow: vec![0; n],
                slots: vec![1, 1],
            },
            Q::one(),
        );
        let r = ideal_reduce(&g, &spec).unwrap();
        assert!(!r.residual.is_zero());
    }

    #[test]
    fn exact_membership_with_witness() {
        // d of a family member is exact by construction
        let n = 3;
        let e = build_family(Family::Xi, n, 1, 0, 1).unwrap();
        let de0 = at_basepoint(&exterior_d(&e));
        let spec = IdealSpec::default().with_exact(vec![e]);
        let r = ideal_reduce(&de0, &spec).unwrap();
        assert!(r.residual.is_zero());
    }

    #[test]
    fn residual_plus_ideal_is_input() {
        let n = 3;
        let f = at_basepoint(&build_family(Family::Phi, n, 1, 0, 1).unwrap());
        let r = ideal_reduce(&f, &IdealSpec::vst()).unwrap();
        assert_eq!(r.residual.add(&r.ideal_part), f);
    }
}
