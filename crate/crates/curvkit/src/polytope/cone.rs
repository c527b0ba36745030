//! Normal cones and the spherical moments ∫ y^β dσ over their intersection
//! with the unit sphere.
//!
//! Axis-aligned cones (all rays along ±eᵢ, lineality along coordinate axes)
//! admit exact moments through gamma-function products; cones with pairwise
//! orthogonal rays admit the exact p = 0 external angle 2^{−r}·s_{m−1}.
//! Everything else falls back to seeded Monte Carlo rejection sampling on
//! the sphere of the cone's linear span, with reported standard errors.

use super::{linalg, PolytopeError};
use crate::scalar::{q_to_f64, PiScalar, Q};
use num::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};
use std::collections::BTreeMap;

/// A polyhedral cone: conical hull of the rays plus the linear span of the
/// lineality basis.
#[derive(Clone, Debug)]
pub struct NormalCone {
    pub n: usize,
    pub rays: Vec<Vec<Q>>,
    pub lineality: Vec<Vec<Q>>,
}

/// Per-coordinate description of an axis-aligned cone.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AxisSign {
    Zero,
    Pos,
    Neg,
    Free,
}

impl NormalCone {
    pub fn dim(&self) -> usize {
        let mut rows = self.rays.clone();
        rows.extend(self.lineality.clone());
        linalg::rank(&rows)
    }

    /// The axis pattern when every ray is ±eᵢ and the lineality is spanned
    /// by coordinate directions.
    pub fn axis_pattern(&self) -> Option<Vec<AxisSign>> {
        let mut pattern = vec![AxisSign::Zero; self.n];
        let coordinate_of = |v: &Vec<Q>| -> Option<(usize, bool)> {
            let mut found = None;
            for (i, x) in v.iter().enumerate() {
                if !x.is_zero() {
                    if found.is_some() {
                        return None;
                    }
                    found = Some((i, x.is_positive()));
                }
            }
            found
        };
        for l in &self.lineality {
            let (i, _) = coordinate_of(l)?;
            pattern[i] = AxisSign::Free;
        }
        for r in &self.rays {
            let (i, pos) = coordinate_of(r)?;
            let new = if pos { AxisSign::Pos } else { AxisSign::Neg };
            pattern[i] = match pattern[i] {
                AxisSign::Zero => new,
                AxisSign::Free => AxisSign::Free,
                prev if prev == new => prev,
                _ => AxisSign::Free,
            };
        }
        Some(pattern)
    }

    /// Pairwise orthogonal rays and no lineality.
    pub fn is_right_angled(&self) -> bool {
        if !self.lineality.is_empty() {
            return false;
        }
        for (i, a) in self.rays.iter().enumerate() {
            for b in self.rays.iter().skip(i + 1) {
                if !linalg::dot(a, b).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Membership test for f64 points.
    pub fn contains_f64(&self, y: &[f64]) -> bool {
        // y must lie in span(rays, lineality) and decompose with
        // non-negative ray coefficients; for the sampling path we only test
        // the facet inequalities supplied by the polytope instead. This
        // generic test uses a least-squares decomposition and is only used
        // for axis cones in tests.
        let _ = y;
        unimplemented!("membership is tested against the parent polytope");
    }
}

/// Configuration for Monte Carlo moments.
#[derive(Clone, Copy, Debug)]
pub struct McConfig {
    pub seed: u64,
    pub samples: u64,
}

/// A spherical moment tensor: entries indexed by multi-indices of length p
/// over the support coordinates, either exact PiScalar values or Monte Carlo
/// estimates with standard errors.
#[derive(Clone, Debug)]
pub enum SphericalMoment {
    Exact(BTreeMap<Vec<u8>, PiScalar>),
    MonteCarlo {
        values: BTreeMap<Vec<u8>, f64>,
        std_errors: BTreeMap<Vec<u8>, f64>,
        samples: u64,
    },
}

impl SphericalMoment {
    pub fn is_exact(&self) -> bool {
        matches!(self, SphericalMoment::Exact(_))
    }

    pub fn get_f64(&self, idx: &[u8]) -> f64 {
        match self {
            SphericalMoment::Exact(m) => m.get(idx).map(|v| v.to_f64()).unwrap_or(0.0),
            SphericalMoment::MonteCarlo { values, .. } => {
                values.get(idx).copied().unwrap_or(0.0)
            }
        }
    }
}

/// Moment of the monomial Π yᵢ^{βᵢ} over the part of S^{m−1} cut out by an
/// axis pattern, where m is the cone dimension. Exact.
pub fn axis_moment(pattern: &[AxisSign], beta: &[u32]) -> PiScalar {
    let support: Vec<usize> = pattern
        .iter()
        .enumerate()
        .filter(|(_, s)| !matches!(s, AxisSign::Zero))
        .map(|(i, _)| i)
        .collect();
    // β must be supported on the cone's span
    for (i, &b) in beta.iter().enumerate() {
        if b > 0 && matches!(pattern[i], AxisSign::Zero) {
            return PiScalar::zero();
        }
    }
    let m = support.len();
    if m == 0 {
        // zero-dimensional cone: the empty sphere carries no measure; by the
        // counting convention of facet strata this case never arises here
        return PiScalar::zero();
    }
    let mut half_constrained = 0usize;
    let mut sign = 1i64;
    let mut gamma_product = PiScalar::one();
    let mut total_b = 0i64;
    for &i in &support {
        let b = beta[i] as i64;
        total_b += b + 1;
        match pattern[i] {
            AxisSign::Pos => half_constrained += 1,
            AxisSign::Neg => {
                half_constrained += 1;
                if b % 2 == 1 {
                    sign = -sign;
                }
            }
            AxisSign::Free => {
                if b % 2 == 1 {
                    return PiScalar::zero();
                }
            }
            AxisSign::Zero => unreachable!(),
        }
        gamma_product = gamma_product * PiScalar::gamma_half(b + 1);
    }
    let full = gamma_product
        .scale(&crate::scalar::qi(2))
        .div_monomial(&PiScalar::gamma_half(total_b));
    let scale = Q::new(sign.into(), num::bigint::BigInt::from(2).pow(half_constrained as u32));
    full.scale(&scale)
}

/// ∫ y^{⊗p} dσ over ν ∩ S^{n−1} for a normal cone ν.
///
/// Exact when the cone is axis-aligned (iterated one-dimensional integrals)
/// or when p = 0 and the rays are pairwise orthogonal (external angle
/// 2^{−r} s_{m−1}). Otherwise seeded Monte Carlo over the sphere of the
/// cone's span, with the membership test supplied by the caller.
pub fn spherical_moment(
    cone: &NormalCone,
    p: usize,
    mc: Option<&McConfig>,
    membership: Option<&dyn Fn(&[f64]) -> bool>,
) -> Result<SphericalMoment, PolytopeError> {
    if let Some(pattern) = cone.axis_pattern() {
        let mut out = BTreeMap::new();
        let mut idx = vec![1u8; p];
        loop {
            let mut beta = vec![0u32; cone.n];
            for &i in &idx {
                beta[i as usize - 1] += 1;
            }
            let v = axis_moment(&pattern, &beta);
            if !v.is_zero() {
                out.insert(idx.clone(), v);
            }
            if p == 0 || !advance(&mut idx, cone.n as u8) {
                break;
            }
        }
        return Ok(SphericalMoment::Exact(out));
    }
    if p == 0 && cone.is_right_angled() {
        let m = cone.dim();
        let r = cone.rays.len();
        let angle = PiScalar::sphere_volume(m - 1)
            .scale(&Q::new(1.into(), num::bigint::BigInt::from(2).pow(r as u32)));
        let mut out = BTreeMap::new();
        out.insert(vec![], angle);
        return Ok(SphericalMoment::Exact(out));
    }
    // Monte Carlo
    let Some(cfg) = mc else {
        return Err(PolytopeError::MissingSeed);
    };
    let Some(inside) = membership else {
        return Err(PolytopeError::NotPointed);
    };
    Ok(monte_carlo_moment(cone, p, cfg, inside))
}

fn monte_carlo_moment(
    cone: &NormalCone,
    p: usize,
    cfg: &McConfig,
    inside: &dyn Fn(&[f64]) -> bool,
) -> SphericalMoment {
    let n = cone.n;
    // orthonormal basis of the cone's span (f64 Gram-Schmidt)
    let mut span: Vec<Vec<f64>> = Vec::new();
    let mut all = cone.rays.clone();
    all.extend(cone.lineality.clone());
    for v in &all {
        let mut w: Vec<f64> = v.iter().map(q_to_f64).collect();
        for b in &span {
            let d: f64 = w.iter().zip(b).map(|(x, y)| x * y).sum();
            for (x, y) in w.iter_mut().zip(b) {
                *x -= d * y;
            }
        }
        let norm: f64 = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-9 {
            for x in w.iter_mut() {
                *x /= norm;
            }
            span.push(w);
        }
    }
    let m = span.len();
    let sphere = PiScalar::sphere_volume(m - 1).to_f64();
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
    // accumulate sums and squared sums per monomial
    let mut idx_list: Vec<Vec<u8>> = Vec::new();
    {
        let mut idx = vec![1u8; p];
        loop {
            idx_list.push(idx.clone());
            if p == 0 || !advance(&mut idx, n as u8) {
                break;
            }
        }
    }
    let mut sums = vec![0f64; idx_list.len()];
    let mut sq_sums = vec![0f64; idx_list.len()];
    for _ in 0..cfg.samples {
        // uniform point on the (m−1)-sphere of the span
        let mut y = vec![0f64; n];
        let mut norm2 = 0f64;
        let mut coeffs = Vec::with_capacity(m);
        for _ in 0..m {
            let g: f64 = StandardNormal.sample(&mut rng);
            coeffs.push(g);
            norm2 += g * g;
        }
        let norm = norm2.sqrt();
        for (c, b) in coeffs.iter().zip(&span) {
            for (yi, bi) in y.iter_mut().zip(b) {
                *yi += c / norm * bi;
            }
        }
        let ok = inside(&y);
        for (s, (sq, idx)) in sums.iter_mut().zip(sq_sums.iter_mut().zip(&idx_list)) {
            let f = if ok {
                idx.iter().map(|&i| y[i as usize - 1]).product::<f64>()
            } else {
                0.0
            };
            *s += f;
            *sq += f * f;
        }
    }
    let nn = cfg.samples as f64;
    let mut values = BTreeMap::new();
    let mut std_errors = BTreeMap::new();
    for ((s, sq), idx) in sums.iter().zip(&sq_sums).zip(&idx_list) {
        let mean = s / nn;
        let var = (sq / nn - mean * mean).max(0.0);
        values.insert(idx.clone(), sphere * mean);
        std_errors.insert(idx.clone(), sphere * (var / nn).sqrt());
    }
    SphericalMoment::MonteCarlo {
        values,
        std_errors,
        samples: cfg.samples,
    }
}

fn advance(t: &mut [u8], n: u8) -> bool {
    for v in t.iter_mut().rev() {
        if *v < n {
            *v += 1;
            return true;
        }
        *v = 1;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{qi, qr};

    fn ray(n: usize, i: usize, sign: i64) -> Vec<Q> {
        let mut v = vec![Q::zero(); n];
        v[i] = qi(sign);
        v
    }

    #[test]
    fn facet_stratum_is_counting() {
        // single ray: S⁰-type stratum, p = 0 moment is 1
        let cone = NormalCone {
            n: 3,
            rays: vec![ray(3, 2, 1)],
            lineality: vec![],
        };
        let m = spherical_moment(&cone, 0, None, None).unwrap();
        let SphericalMoment::Exact(map) = m else { panic!() };
        assert_eq!(map[&vec![]], PiScalar::one());
    }

    #[test]
    fn cube_edge_and_vertex_angles() {
        // edge: quarter circle π/2
        let cone = NormalCone {
            n: 3,
            rays: vec![ray(3, 0, 1), ray(3, 1, 1)],
            lineality: vec![],
        };
        let SphericalMoment::Exact(map) = spherical_moment(&cone, 0, None, None).unwrap() else {
            panic!()
        };
        assert_eq!(map[&vec![]], PiScalar::monomial(qr(1, 2), 2));
        // vertex: octant of S², area π/2
        let cone = NormalCone {
            n: 3,
            rays: vec![ray(3, 0, 1), ray(3, 1, 1), ray(3, 2, 1)],
            lineality: vec![],
        };
        let SphericalMoment::Exact(map) = spherical_moment(&cone, 0, None, None).unwrap() else {
            panic!()
        };
        assert_eq!(map[&vec![]], PiScalar::monomial(qr(1, 2), 2));
    }

    #[test]
    fn octant_second_moments() {
        // ∫ y², over the octant: diag entries π/6, mixed y₁y₂ entry 1/2·1/4 of
        // full-circle style products
        let cone = NormalCone {
            n: 3,
            rays: vec![ray(3, 0, 1), ray(3, 1, 1), ray(3, 2, 1)],
            lineality: vec![],
        };
        let SphericalMoment::Exact(map) = spherical_moment(&cone, 2, None, None).unwrap() else {
            panic!()
        };
        assert_eq!(map[&vec![1, 1]], PiScalar::monomial(qr(1, 6), 2));
        // trace equals the external angle π/2
        let trace = map[&vec![1, 1]].clone() + map[&vec![2, 2]].clone() + map[&vec![3, 3]].clone();
        assert_eq!(trace, PiScalar::monomial(qr(1, 2), 2));
    }

    #[test]
    fn lineality_moments() {
        // half-plane cone (one ray, one free direction): half circle π
        let cone = NormalCone {
            n: 3,
            rays: vec![ray(3, 0, 1)],
            lineality: vec![ray(3, 2, 1)],
        };
        let SphericalMoment::Exact(map) = spherical_moment(&cone, 0, None, None).unwrap() else {
            panic!()
        };
        assert_eq!(map[&vec![]], PiScalar::monomial(qi(1), 2));
        // odd moment along the free axis vanishes
        let SphericalMoment::Exact(map) = spherical_moment(&cone, 1, None, None).unwrap() else {
            panic!()
        };
        assert!(!map.contains_key(&vec![3]));
        assert!(map.contains_key(&vec![1]));
    }

    #[test]
    fn right_angled_non_axis() {
        // rays (1,1,0)/√2 and (1,−1,0)/√2: right-angled, not axis-aligned
        let cone = NormalCone {
            n: 3,
            rays: vec![
                vec![qi(1), qi(1), qi(0)],
                vec![qi(1), qi(-1), qi(0)],
            ],
            lineality: vec![],
        };
        assert!(cone.axis_pattern().is_none());
        assert!(cone.is_right_angled());
        let SphericalMoment::Exact(map) = spherical_moment(&cone, 0, None, None).unwrap() else {
            panic!()
        };
        assert_eq!(map[&vec![]], PiScalar::monomial(qr(1, 2), 2));
    }

    #[test]
    fn mc_needs_seed() {
        let cone = NormalCone {
            n: 3,
            rays: vec![vec![qi(1), qi(1), qi(0)], vec![qi(0), qi(1), qi(1)]],
            lineality: vec![],
        };
        assert!(matches!(
            spherical_moment(&cone, 1, None, Some(&|_: &[f64]| true)),
            Err(PolytopeError::MissingSeed)
        ));
    }

    #[test]
    fn mc_octant_matches_exact() {
        let cone = NormalCone {
            n: 3,
            rays: vec![ray(3, 0, 1), ray(3, 1, 1), ray(3, 2, 1)],
            lineality: vec![],
        };
        let inside = |y: &[f64]| y.iter().all(|&v| v >= 0.0);
        let cfg = McConfig {
            seed: 7,
            samples: 200_000,
        };
        let SphericalMoment::MonteCarlo { values, std_errors, .. } =
            monte_carlo_moment(&cone, 0, &cfg, &inside)
        else {
            panic!()
        };
        let exact = std::f64::consts::PI / 2.0;
        let got = values[&vec![]];
        let se = std_errors[&vec![]];
        assert!((got - exact).abs() < 4.0 * se, "got {got}, exact {exact}, se {se}");
    }
}
