//! Verification of the structural identities between the form families:
//! column exchanges, the Young-symmetrised family relations, the
//! globalisation kernel congruence, and the covariance signs under signed
//! permutation matrices.

use super::ideal::{ideal_reduce, IdealSpec};
use super::{
    at_basepoint, build_family, exterior_d, family_params_valid, family_shape,
    family_symmetrized, symmetrize_family, Family, FormError, FormExpr, FormKey, SymLevel,
};
use crate::perm::Perm;
use crate::scalar::{binomial, factorial, qi, qr, Q};
use crate::tensor::GroupAlgebraElement;
use num::{One, Zero};

/// Column-exchange identity: T̃^{σ_𝐫}_{k,p,q} ≡ C(q',ℓ')⁻¹ T̃_{k,p,q}
/// modulo the vertical and symplectic ideals, where q' = q−1 for Ψ (its last
/// transposition swaps the two y-slots and is the identity) and q otherwise,
/// and ℓ' is the number of transpositions exchanging an i-slot with a
/// π-slot. `rows` is the 1-based subset 𝐫 ⊆ {1..q}.
///
/// The vertical ideal is genuinely needed for Φ and Ξ: modulo dα alone the
/// two sides differ by dxₙ-multiples at the basepoint.
pub fn verify_exchange_columns(
    family: Family,
    n: usize,
    k: usize,
    p: usize,
    q: usize,
    rows: &[usize],
) -> Result<bool, FormError> {
    if !family_params_valid(family, n, k, p, q) || matches!(family, Family::Theta) {
        return Err(FormError::BadParameters(format!(
            "{family:?} n={n} k={k} p={p} q={q}"
        )));
    }
    assert!(rows.iter().all(|&r| r >= 1 && r <= q));
    let shape = family_shape(family, k, p, q);
    let rows0: Vec<usize> = rows.iter().map(|&r| r - 1).collect();
    let sigma = shape.sigma_r(&rows0);
    let (q_eff, l_eff) = match family {
        Family::Psi => (q - 1, rows.iter().filter(|&&r| r < q).count()),
        _ => (q, rows.len()),
    };
    let lhs = at_basepoint(&family_symmetrized(
        family,
        n,
        k,
        p,
        q,
        Some(&sigma),
        SymLevel::Columns,
    )?);
    let rhs = at_basepoint(&family_symmetrized(
        family, n, k, p, q, None, SymLevel::Columns,
    )?);
    let factor = binomial(q_eff as i64, l_eff as i64);
    // f ≡ C⁻¹ g  ⇔  C·f − g ≡ 0
    let diff = lhs.scale(&factor).sub(&rhs);
    let red = ideal_reduce(&diff, &IdealSpec::vs())?;
    Ok(red.residual.is_zero())
}

/// Box permutations used by the symmetrised-family relations.
fn box_cycle(shape: &crate::tensor::TableauShape, boxes: &[(usize, usize)]) -> Perm {
    let slots: Vec<usize> = boxes.iter().map(|&(c, r)| shape.slot(c, r)).collect();
    Perm::cycle(shape.num_boxes(), &slots)
}

/// The three identities relating the fully Young-symmetrised families to the
/// round-symmetrised ones, tested modulo the vertical and symplectic ideals:
///
/// Ψ_{{k,p,q}} ≡ 2q Ψ_{(k,p,q)}
/// Ξ_{{k,p,q}} ≡ (q+1) Ξ_{(k,p,q)} + qp (Ξ^{(2₁3)} − (q−1)/2 · Ξ^{(1₁2₁3)})_{(k,p,q)}
/// Φ_{{k,p,q}} ≡ (q+1) Φ_{(k,p,q)} + qp (Φ^{(2₁1₁3)·d_λ} + Φ^{(2₁3)·d_λ} + (p−1) Φ^{(1₁3)(2₁4)})_{(k,p,q)}
pub fn verify_slnbase(
    family: Family,
    n: usize,
    k: usize,
    p: usize,
    q: usize,
) -> Result<bool, FormError> {
    if !family_params_valid(family, n, k, p, q)
        || matches!(family, Family::Theta)
        || q == 0
    {
        return Err(FormError::BadParameters(format!(
            "{family:?} n={n} k={k} p={p} q={q}"
        )));
    }
    let shape = family_shape(family, k, p, q);
    let d = shape.num_boxes();
    let curly = at_basepoint(&family_symmetrized(family, n, k, p, q, None, SymLevel::Curly)?);
    let round =
        |pre: Option<&Perm>| -> Result<FormExpr, FormError> {
            Ok(at_basepoint(&family_symmetrized(
                family,
                n,
                k,
                p,
                q,
                pre,
                SymLevel::Round,
            )?))
        };
    let round_alg = |g: &GroupAlgebraElement| -> Result<FormExpr, FormError> {
        let base = build_family(family, n, k, p, q)?;
        let full = g
            .mul(&shape.single_column_symmetrizer())
            .mul(&shape.column_antisymmetrizer());
        Ok(at_basepoint(&symmetrize_family(&base, &full)?))
    };
    let rhs = match family {
        Family::Psi => round(None)?.scale(&qi(2 * q as i64)),
        Family::Xi => {
            let mut acc = round(None)?.scale(&qi(q as i64 + 1));
            if p >= 1 {
                let t213 = shape.box_transposition(1, 0, 2, 0); // (2₁ 3)
                let c113 = box_cycle(&shape, &[(0, 0), (1, 0), (2, 0)]); // (1₁ 2₁ 3)
                let qp = qi((q * p) as i64);
                acc = acc.add(&round(Some(&t213))?.scale(&qp));
                acc = acc.add(
                    &round(Some(&c113))?.scale(&(qp * qr(-(q as i64 - 1), 2))),
                );
            }
            acc
        }
        Family::Phi => {
            let mut acc = round(None)?.scale(&qi(q as i64 + 1));
            if p >= 1 {
                let qp = qi((q * p) as i64);
                // d_λ = id + σ_q (exchange the full first two columns)
                let sigma_q = shape.sigma_r(&(0..q).collect::<Vec<_>>());
                let d_lambda = GroupAlgebraElement::identity(d)
                    .add(&GroupAlgebraElement::from_perm(sigma_q));
                let c213 = box_cycle(&shape, &[(1, 0), (0, 0), (2, 0)]); // (2₁ 1₁ 3)
                let t213 = shape.box_transposition(1, 0, 2, 0); // (2₁ 3)
                let g1 = GroupAlgebraElement::from_perm(c213).mul(&d_lambda);
                let g2 = GroupAlgebraElement::from_perm(t213).mul(&d_lambda);
                acc = acc.add(&round_alg(&g1)?.scale(&qp));
                acc = acc.add(&round_alg(&g2)?.scale(&qp));
                if p >= 2 {
                    let t113 = shape.box_transposition(0, 0, 2, 0); // (1₁ 3)
                    let t214 = shape.box_transposition(1, 0, 3, 0); // (2₁ 4)
                    let g3 = GroupAlgebraElement::from_perm(t113.compose(&t214));
                    acc = acc.add(
                        &round_alg(&g3)?.scale(&(qp * qi(p as i64 - 1))),
                    );
                }
            }
            acc
        }
        Family::Theta => unreachable!(),
    };
    let red = ideal_reduce(&curly.sub(&rhs), &IdealSpec::vs())?;
    Ok(red.residual.is_zero())
}

/// The contracted family Ẽ_{k,p,q} := −ι_h Φ̃_{(k,p,q−1)}, where the
/// section h contracts ∂/∂yʲ into the form part and wedges y into the first
/// and eⱼ into the second tensor column, divided by (n−k−1). Here q ≥ 1 is
/// the label of the resulting (n−2)-form.
pub fn build_e(n: usize, k: usize, p: usize, q: usize) -> Result<FormExpr, FormError> {
    if q < 1 || q > k.min(n - k - 1) || k >= n {
        return Err(FormError::BadParameters(format!("E n={n} k={k} p={p} q={q}")));
    }
    let qm = q - 1;
    let phi = family_symmetrized(Family::Phi, n, k, p, qm, None, SymLevel::Round)?;
    let order = 2 * q + p;
    let mut acc = FormExpr::zero(n, order);
    for j in 1..=n as u8 {
        let contracted = super::contract_dy(&phi, j);
        if contracted.is_zero() {
            continue;
        }
        // append y at the bottom of column 1 (slot qm) and e_j at the bottom
        // of column 2 (slot 2qm+1 after the first insertion)
        let mut ins = FormExpr::zero(n, order);
        for (key, c) in contracted.terms() {
            for yv in 1..=n as u8 {
                let mut slots = key.slots.clone();
                slots.insert(qm, yv);
                slots.insert(2 * qm + 1, j);
                let mut ypow = key.ypow.clone();
                ypow[yv as usize - 1] += 1;
                ins.insert(
                    FormKey {
                        dx: key.dx,
                        dy: key.dy,
                        ypow,
                        slots,
                    },
                    c.clone(),
                );
            }
        }
        acc = acc.add(&ins);
    }
    let e = acc.scale(&(qi(-1) / qi(n as i64 - k as i64 - 1)));
    // wedge the extended columns
    let shape = family_shape(Family::Psi, k, p, q);
    symmetrize_family(&e, &shape.column_antisymmetrizer())
}

/// Report of the globalisation-kernel verification at one parameter set.
pub struct GlobReport {
    /// residual terms of
    /// p!(n−k−1)dẼ − [q(n−k+p)Ψ̃ + (k−q+1)Φ̃ + p(k−q+1)Φ̃^{(1₁3)}]_{(k,p,q)}
    /// modulo {vertical, symplectic, trace}
    pub de_residual_terms: usize,
    /// residual terms of q(n−k+p)Ψ̃_[k,p,q] + (k−q+1)(qp+1)Φ̃_[k,p,q]
    /// modulo {vertical, symplectic, trace, exact}
    pub kernel_residual_terms: usize,
}

impl GlobReport {
    pub fn all_zero(&self) -> bool {
        self.de_residual_terms == 0 && self.kernel_residual_terms == 0
    }
}

/// The globalisation-kernel coefficients at (n, k, p, q): the combination
/// psi_coeff·ψ_[k,p,q] + phi_coeff·φ_[k,p,q] spans ker(glob) within the
/// two-dimensional isotypic component.
pub fn glob_kernel_coefficients(n: usize, k: usize, p: usize, q: usize) -> (i64, i64) {
    (
        (q * (n - k + p)) as i64,
        ((k - q + 1) * (q * p + 1)) as i64,
    )
}

/// Verify the globalisation congruence and the kernel combination at
/// (n, k, p, q), 1 ≤ q ≤ min(k, n−k−1).
///
/// The congruence is p!(n−k−1)dẼ_{k,p,q} ≡ q(n−k+p)Ψ̃_{(k,p,q)}
/// + (k−q+1)Φ̃_{(k,p,q)} + p(k−q+1)Φ̃^{(1₁3)}_{(k,p,q)} modulo the vertical,
/// symplectic and trace ideals; applying the Young symmetriser and the
/// trace-free projection turns it into the kernel relation
/// q(n−k+p)ψ + (k−q+1)(qp+1)φ ≡ 0 modulo the ideals and the exact form dẼ.
pub fn verify_glob_relation(
    n: usize,
    k: usize,
    p: usize,
    q: usize,
) -> Result<GlobReport, FormError> {
    let e = build_e(n, k, p, q)?;
    let de0 = at_basepoint(&exterior_d(&e));

    let psi_round = at_basepoint(&family_symmetrized(
        Family::Psi,
        n,
        k,
        p,
        q,
        None,
        SymLevel::Round,
    )?);
    let phi_round = at_basepoint(&family_symmetrized(
        Family::Phi,
        n,
        k,
        p,
        q,
        None,
        SymLevel::Round,
    )?);
    let mut combo = psi_round
        .scale(&qi((q * (n - k + p)) as i64))
        .add(&phi_round.scale(&qi((k - q + 1) as i64)));
    if p >= 1 {
        let shape = family_shape(Family::Phi, k, p, q);
        let t113 = shape.box_transposition(0, 0, 2, 0);
        let phi_113 = at_basepoint(&family_symmetrized(
            Family::Phi,
            n,
            k,
            p,
            q,
            Some(&t113),
            SymLevel::Round,
        )?);
        combo = combo.add(&phi_113.scale(&qi((p * (k - q + 1)) as i64)));
    }
    let lhs = de0.scale(&(factorial(p) * qi(n as i64 - k as i64 - 1)));
    let de_res = ideal_reduce(&lhs.sub(&combo), &IdealSpec::vst())?;

    // the kernel element reduces to zero with dẼ's harmonic image as the
    // exact witness
    let shape = family_shape(Family::Phi, k, p, q);
    let c_lambda = shape.young_symmetrizer();
    let harmonic = |f: &FormExpr| -> Result<FormExpr, FormError> {
        Ok(symmetrize_family(f, &c_lambda)?
            .map_tensor_parts(&crate::tensor::trace_free_project))
    };
    let psi_h = harmonic(&at_basepoint(&build_family(Family::Psi, n, k, p, q)?))?;
    let phi_h = harmonic(&at_basepoint(&build_family(Family::Phi, n, k, p, q)?))?;
    let (a, b) = glob_kernel_coefficients(n, k, p, q);
    let kernel_elem = psi_h.scale(&qi(a)).add(&phi_h.scale(&qi(b)));
    let witness = harmonic(&e)?;
    let spec = IdealSpec::vst().with_exact(vec![witness]);
    let kernel_res = ideal_reduce(&kernel_elem, &spec)?;

    Ok(GlobReport {
        de_residual_terms: de_res.residual.num_terms(),
        kernel_residual_terms: kernel_res.residual.num_terms(),
    })
}

/// A signed permutation matrix g: e_i ↦ sign_i · e_{perm(i)} (0-based).
#[derive(Clone, Debug)]
pub struct SignedPermutation {
    pub perm: Perm,
    pub signs: Vec<i8>,
}

impl SignedPermutation {
    pub fn det(&self) -> i32 {
        let s: i32 = self.signs.iter().map(|&s| s as i32).product();
        self.perm.sign() * s
    }

    /// All 2ⁿ·n! signed permutation matrices.
    pub fn all(n: usize) -> Vec<SignedPermutation> {
        let mut out = Vec::new();
        for p in crate::perm::all_perms(n) {
            for bits in 0..(1u32 << n) {
                let signs: Vec<i8> = (0..n)
                    .map(|i| if bits >> i & 1 == 1 { -1 } else { 1 })
                    .collect();
                out.push(SignedPermutation {
                    perm: p.clone(),
                    signs,
                });
            }
        }
        out
    }
}

/// Transform a form under the combined action of g on base, fibre and tensor
/// slots. For SO(n) elements the form families are invariant; improper
/// elements scale Φ/Ψ/Ξ by det g and fix Θ.
pub fn transform(f: &FormExpr, g: &SignedPermutation) -> FormExpr {
    let n = f.n();
    let mut out = FormExpr::zero(n, f.tensor_order());
    for (key, c) in f.terms() {
        let mut sign = 1i64;
        let (dx, sx) = transform_mask(key.dx, g);
        let (dy, sy) = transform_mask(key.dy, g);
        sign *= (sx * sy) as i64;
        let mut ypow = vec![0u8; n];
        for (i, &e) in key.ypow.iter().enumerate() {
            if e == 0 {
                continue;
            }
            ypow[g.perm.apply(i)] += e;
            if g.signs[i] < 0 && e % 2 == 1 {
                sign = -sign;
            }
        }
        let slots: Vec<u8> = key
            .slots
            .iter()
            .map(|&s| {
                if g.signs[s as usize - 1] < 0 {
                    sign = -sign;
                }
                g.perm.apply(s as usize - 1) as u8 + 1
            })
            .collect();
        out.insert(
            FormKey { dx, dy, ypow, slots },
            c * qi(sign),
        );
    }
    out
}

fn transform_mask(mask: u32, g: &SignedPermutation) -> (u32, i32) {
    let mut order: Vec<u8> = Vec::new();
    let mut sign = 1i32;
    let mut m = mask;
    while m != 0 {
        let i = m.trailing_zeros() as usize;
        m &= m - 1;
        if g.signs[i] < 0 {
            sign = -sign;
        }
        order.push(g.perm.apply(i) as u8 + 1);
    }
    match super::mask_of(&order) {
        Some((new_mask, s)) => (new_mask, sign * s),
        None => unreachable!("permutations preserve distinctness"),
    }
}

/// The covariance sign of a family form under g: +1 if g·T̃ = T̃, −1 if
/// g·T̃ = −T̃, None otherwise. Φ/Ψ/Ξ give det g, Θ gives +1.
pub fn covariance_sign(
    family: Family,
    n: usize,
    k: usize,
    p: usize,
    q: usize,
    g: &SignedPermutation,
) -> Result<Option<i32>, FormError> {
    let f = build_family(family, n, k, p, q)?;
    let tf = transform(&f, g);
    if tf == f {
        Ok(Some(1))
    } else if tf == f.scale(&-Q::one()) {
        Ok(Some(-1))
    } else {
        Ok(None)
    }
}

/// One entry of the globalisation kernel catalogue; coefficients may depend
/// linearly on the symmetric-power index p, kept symbolic.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum KernelEntry {
    /// Ξ_[k,p,q] for all p.
    Xi { k: usize, q: usize },
    /// Θ_[k,p] for all p (n = 2k+1 only).
    Theta { k: usize },
    /// Ψ_[k,p,k+1] for all p.
    PsiMargin { k: usize },
    /// q(n−k+p) Ψ_[k,p,q] + (k−q+1)(qp+1) Φ_[k,p,q] for all p; coefficients
    /// stored as (constant, coefficient of p).
    Combo {
        k: usize,
        q: usize,
        psi_coeff: (i64, i64),
        phi_coeff: (i64, i64),
    },
}

fn linear_in_p(coeff: &(i64, i64)) -> String {
    match coeff {
        (c, 0) => format!("{c}"),
        (0, 1) => "p".to_string(),
        (0, l) => format!("{l}p"),
        (c, 1) => format!("(p+{c})"),
        (c, l) => format!("({l}p+{c})"),
    }
}

impl KernelEntry {
    pub fn label(&self) -> String {
        match self {
            KernelEntry::Xi { k, q } => format!("Ξ_[{k},p,{q}]"),
            KernelEntry::Theta { k } => format!("Θ_[{k},p]"),
            KernelEntry::PsiMargin { k } => format!("Ψ_[{k},p,{}]", k + 1),
            KernelEntry::Combo {
                k,
                q,
                psi_coeff,
                phi_coeff,
            } => {
                format!(
                    "{}Ψ_[{k},p,{q}] + {}Φ_[{k},p,{q}]",
                    linear_in_p(psi_coeff),
                    linear_in_p(phi_coeff)
                )
            }
        }
    }
}

/// The spanning set of ker(glob: Curv_k → Val_k): all Ξ and Θ measures, the
/// marginal Ψ_[k,p,k+1] (for k ≥ 1; at k = 0 it coincides with Ξ_[0,p+1,0]
/// by the lower-rank relations), and the Ψ/Φ combinations.
pub fn kernel_catalog(n: usize, k: usize) -> Vec<KernelEntry> {
    assert!(k < n);
    let cap = k.min(n - k - 1);
    let mut out = Vec::new();
    for q in 0..=cap {
        out.push(KernelEntry::Xi { k, q });
    }
    if n == 2 * k + 1 && k >= 1 {
        out.push(KernelEntry::Theta { k });
    }
    if k >= 1 && 2 * k <= n - 1 {
        out.push(KernelEntry::PsiMargin { k });
    }
    for q in 1..=cap {
        out.push(KernelEntry::Combo {
            k,
            q,
            psi_coeff: ((q * (n - k)) as i64, q as i64),
            phi_coeff: ((k - q + 1) as i64, ((k - q + 1) * q) as i64),
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exchange_columns_trivial_empty_set() {
        assert!(verify_exchange_columns(Family::Phi, 4, 1, 0, 1, &[]).unwrap());
    }

    #[test]
    fn exchange_columns_spot() {
        // Φ, n=5, k=2, p=0, q=2, 𝐫={1}: factor C(2,1)⁻¹ = 1/2
        assert!(verify_exchange_columns(Family::Phi, 5, 2, 0, 2, &[1]).unwrap());
        // Ψ with 𝐫={q}: the transposition is trivial, factor 1
        assert!(verify_exchange_columns(Family::Psi, 5, 2, 0, 2, &[2]).unwrap());
    }

    #[test]
    fn covariance_spots() {
        // g = diag(−1,1,1) flips Φ̃_[1,0,0] at n = 3
        let g = SignedPermutation {
            perm: Perm::identity(3),
            signs: vec![-1, 1, 1],
        };
        assert_eq!(g.det(), -1);
        assert_eq!(
            covariance_sign(Family::Phi, 3, 1, 0, 0, &g).unwrap(),
            Some(-1)
        );
        // identity fixes everything
        let id = SignedPermutation {
            perm: Perm::identity(3),
            signs: vec![1, 1, 1],
        };
        assert_eq!(
            covariance_sign(Family::Phi, 3, 1, 0, 0, &id).unwrap(),
            Some(1)
        );
        // a rotation (two sign flips, det = 1) fixes Φ̃
        let rot = SignedPermutation {
            perm: Perm::transposition(3, 0, 1),
            signs: vec![1, -1, 1],
        };
        assert_eq!(rot.det(), 1);
        assert_eq!(
            covariance_sign(Family::Phi, 3, 1, 0, 0, &rot).unwrap(),
            Some(1)
        );
        // Θ is fixed by improper elements too
        let g = SignedPermutation {
            perm: Perm::identity(3),
            signs: vec![-1, 1, 1],
        };
        assert_eq!(
            covariance_sign(Family::Theta, 3, 1, 0, 1, &g).unwrap(),
            Some(1)
        );
    }

    #[test]
    fn kernel_catalog_examples() {
        // n=3, k=1: Ξ_[1,p,0], Ξ_[1,p,1], Θ_[1,p], Ψ_[1,p,2], (p+2)Ψ+(p+1)Φ
        let entries = kernel_catalog(3, 1);
        assert!(entries.contains(&KernelEntry::Xi { k: 1, q: 0 }));
        assert!(entries.contains(&KernelEntry::Theta { k: 1 }));
        assert!(entries.contains(&KernelEntry::PsiMargin { k: 1 }));
        assert!(entries.contains(&KernelEntry::Combo {
            k: 1,
            q: 1,
            psi_coeff: (2, 1),
            phi_coeff: (1, 1),
        }));
        let combo = KernelEntry::Combo {
            k: 1,
            q: 1,
            psi_coeff: (2, 1),
            phi_coeff: (1, 1),
        };
        assert_eq!(combo.label(), "(p+2)Ψ_[1,p,1] + (p+1)Φ_[1,p,1]");

        // n=4, k=3: no PsiMargin (k > (n−1)/2), no Combo (cap = 0)
        let entries = kernel_catalog(4, 3);
        assert_eq!(entries, vec![KernelEntry::Xi { k: 3, q: 0 }]);

        // n=2, k=0: only the Ξ entry (Ψ_[0,p,1] = Ξ_[0,p+1,0] is already listed)
        let entries = kernel_catalog(2, 0);
        assert_eq!(entries, vec![KernelEntry::Xi { k: 0, q: 0 }]);
    }

    #[test]
    fn glob_relation_smallest_case() {
        // n=3, k=1, p=0, q=1: 3Ψ_[1,0,1] + Φ_[1,0,1] ∈ ker glob
        let report = verify_glob_relation(3, 1, 0, 1).unwrap();
        assert_eq!(report.de_residual_terms, 0, "dE congruence");
        assert_eq!(report.kernel_residual_terms, 0, "kernel combination");
    }
}
