// scratch: kernel ratio with ROW-FIRST harmonic projector
use curvkit::forms::ideal::{ideal_reduce, IdealSpec};
use curvkit::forms::verify::build_e;
use curvkit::forms::{
    at_basepoint, build_family, family_shape, symmetrize_family, Family, FormExpr,
};
use curvkit::scalar::Q;
use num::Zero;

fn main() {
    for (n, k, p, q) in [
        (3usize, 1usize, 0usize, 1usize), (4, 1, 0, 1), (4, 2, 0, 1), (5, 2, 0, 1),
        (5, 2, 0, 2), (5, 3, 0, 1), (3, 1, 1, 1), (4, 1, 1, 1), (4, 2, 1, 1),
        (4, 1, 2, 1), (5, 2, 1, 2),
    ] {
        let e = build_e(n, k, p, q).unwrap();
        let shape = family_shape(Family::Phi, k, p, q);
        let c_ab = shape.row_symmetrizer().mul(&shape.column_antisymmetrizer());
        let harmonic = |f: &FormExpr| -> FormExpr {
            symmetrize_family(f, &c_ab)
                .unwrap()
                .map_tensor_parts(&curvkit::tensor::trace_free_project)
        };
        let psi_h = harmonic(&at_basepoint(&build_family(Family::Psi, n, k, p, q).unwrap()));
        let phi_h = harmonic(&at_basepoint(&build_family(Family::Phi, n, k, p, q).unwrap()));
        let witness = harmonic(&e);
        let spec = IdealSpec::vst().with_exact(vec![witness]);
        let rp = ideal_reduce(&psi_h, &spec).unwrap().residual;
        let rf = ideal_reduce(&phi_h, &spec).unwrap().residual;
        let msg = if rf.is_zero() && rp.is_zero() {
            "both zero".to_string()
        } else if rf.is_zero() || rp.is_zero() {
            "one zero".to_string()
        } else {
            let c: Q = rp.dot(&rf) / rf.dot(&rf);
            if rp == rf.scale(&c) { format!("rψ = {c}·rφ") } else { "not proportional".to_string() }
        };
        println!(
            "n={n} k={k} p={p} q={q}: {msg}   [paper: −{}/{} = −(k−q+1)(qp+1)/q(n−k+1); mine: −{}/{}]",
            (k - q + 1) * (q * p + 1), q * (n - k + 1),
            (k - q + 1) * (q * p + 1), q * (n - k + p),
        );
    }
}
