//! Convex polytopes with exact rational vertices: face lattices, normal
//! cones, exact volumes, box clipping, spherical moments of normal cones and
//! the face-sum evaluation of tensor-valued curvature measures.

use crate::scalar::Q;
use num::{One, Signed, Zero};
use std::collections::BTreeSet;
use thiserror::Error;

pub mod cone;
pub mod eval;

pub use cone::{spherical_moment, McConfig, NormalCone, SphericalMoment};
pub use eval::{
    eval_harmonic, eval_phi, integrate_over_normal_cycle, q_wedge, BorelBox, MomentData,
    MomentTensor,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolytopeError {
    #[error("a polytope needs at least one vertex")]
    Empty,
    #[error("vertex coordinate count {got} does not match ambient dimension {expected}")]
    BadVertex { expected: usize, got: usize },
    #[error("parameters out of range: {0}")]
    BadParameters(String),
    #[error("normal cone is not pointed and not axis-aligned; Monte Carlo sampling refused")]
    NotPointed,
    #[error("Monte Carlo moments need a seed in the configuration")]
    MissingSeed,
    #[error("{0}")]
    Form(#[from] crate::forms::FormError),
}

/// Exact linear algebra over ℚ on small dense matrices.
pub(crate) mod linalg {
    use super::Q;
    use num::Zero;

    /// Row echelon form in place; returns the rank and pivot columns.
    pub fn row_reduce(mat: &mut Vec<Vec<Q>>) -> (usize, Vec<usize>) {
        let rows = mat.len();
        if rows == 0 {
            return (0, vec![]);
        }
        let cols = mat[0].len();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..rows).find(|&i| !mat[i][c].is_zero()) else {
                continue;
            };
            mat.swap(r, p);
            let inv = mat[r][c].clone();
            for x in mat[r].iter_mut() {
                *x /= &inv;
            }
            for i in 0..rows {
                if i != r && !mat[i][c].is_zero() {
                    let f = mat[i][c].clone();
                    for j in 0..cols {
                        let t = &mat[r][j] * &f;
                        mat[i][j] -= t;
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == rows {
                break;
            }
        }
        (r, pivots)
    }

    pub fn rank(rows: &[Vec<Q>]) -> usize {
        let mut m = rows.to_vec();
        row_reduce(&mut m).0
    }

    /// Basis of the null space of the matrix (rows are equations).
    pub fn null_space(rows: &[Vec<Q>]) -> Vec<Vec<Q>> {
        if rows.is_empty() {
            return vec![];
        }
        let cols = rows[0].len();
        let mut m = rows.to_vec();
        let (_, pivots) = row_reduce(&mut m);
        let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::new();
        for &f in &free {
            let mut v = vec![Q::zero(); cols];
            v[f] = Q::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][f].clone();
            }
            basis.push(v);
        }
        basis
    }

    pub fn dot(a: &[Q], b: &[Q]) -> Q {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    /// Determinant by fraction-free-ish Gaussian elimination.
    pub fn det(mat: &[Vec<Q>]) -> Q {
        let n = mat.len();
        let mut m = mat.to_vec();
        let mut acc = Q::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
                return Q::zero();
            };
            if p != c {
                m.swap(p, c);
                acc = -acc;
            }
            let inv = m[c][c].clone();
            acc *= &inv;
            for x in m[c].iter_mut() {
                *x /= &inv;
            }
            for i in c + 1..n {
                if !m[i][c].is_zero() {
                    let f = m[i][c].clone();
                    for j in c..n {
                        let t = &m[c][j] * &f;
                        m[i][j] -= t;
                    }
                }
            }
        }
        acc
    }

    /// Solve a square system; None if singular or inconsistent.
    pub fn solve(mat: &[Vec<Q>], rhs: &[Q]) -> Option<Vec<Q>> {
        let aug: Vec<Vec<Q>> = mat
            .iter()
            .zip(rhs)
            .map(|(row, b)| {
                let mut r = row.clone();
                r.push(b.clone());
                r
            })
            .collect();
        let cols = mat.first().map(|r| r.len()).unwrap_or(0);
        let mut m = aug;
        let (rank, pivots) = row_reduce(&mut m);
        // inconsistent if a pivot sits in the augmented column
        if pivots.iter().any(|&c| c == cols) {
            return None;
        }
        let mut x = vec![Q::zero(); cols];
        for (r, &pc) in pivots.iter().enumerate().take(rank) {
            x[pc] = m[r][cols].clone();
        }
        // require full column rank for a unique vertex solution
        if rank < cols {
            return None;
        }
        Some(x)
    }
}

/// A face of a polytope: its vertex set (indices into the parent's vertex
/// list), dimension, a rational basis of the parallel linear space, and the
/// normal cone data.
#[derive(Clone, Debug)]
pub struct Face {
    pub dim: usize,
    pub vertices: Vec<usize>,
    /// Rational basis of L(F), the linear space parallel to aff(F).
    pub basis: Vec<Vec<Q>>,
    pub cone: NormalCone,
}

/// A convex polytope given by its vertices, with the derived face lattice.
#[derive(Clone, Debug)]
pub struct Polytope {
    n: usize,
    vertices: Vec<Vec<Q>>,
    dim: usize,
    /// faces[d] lists the d-dimensional faces; the top entry is P itself.
    faces: Vec<Vec<Face>>,
}

impl Polytope {
    /// Build the polytope and its full face lattice from a vertex list.
    /// Points that are not extreme are discarded.
    pub fn from_vertices(n: usize, points: &[Vec<Q>]) -> Result<Polytope, PolytopeError> {
        if points.is_empty() {
            return Err(PolytopeError::Empty);
        }
        for p in points {
            if p.len() != n {
                return Err(PolytopeError::BadVertex {
                    expected: n,
                    got: p.len(),
                });
            }
        }
        let mut points: Vec<Vec<Q>> = points.to_vec();
        points.sort();
        points.dedup();

        // affine hull
        let base = points[0].clone();
        let dirs: Vec<Vec<Q>> = points[1..]
            .iter()
            .map(|p| sub(p, &base))
            .collect();
        let hull_basis = independent_subset(&dirs);
        let dim = hull_basis.len();

        // chart coordinates within the affine hull: solve p − base = B t
        let chart = |p: &[Q]| -> Vec<Q> {
            chart_coords(&hull_basis, &sub(p, &base))
        };
        let chart_points: Vec<Vec<Q>> = points.iter().map(|p| chart(p)).collect();

        // full-dimensional facial structure in the chart
        let structure = full_dim_structure(dim, &chart_points)?;

        // keep only extreme points
        let vertex_ids: BTreeSet<usize> = structure.vertex_ids.iter().copied().collect();
        let vertices: Vec<Vec<Q>> = vertex_ids.iter().map(|&i| points[i].clone()).collect();
        let reindex: std::collections::BTreeMap<usize, usize> = vertex_ids
            .iter()
            .enumerate()
            .map(|(new, &old)| (old, new))
            .collect();

        // lineality of every normal cone: the orthogonal complement of the
        // affine hull
        let hull_rows: Vec<Vec<Q>> = hull_basis.clone();
        let complement = linalg::null_space(&hull_rows);

        // lift chart facet normals to ambient covectors: a chart normal u
        // corresponds to the ambient vector Σ u_a ĝ_a where ĝ is the dual
        // basis of the hull basis inside span(hull)
        let dual = dual_basis(&hull_basis);
        let mut faces: Vec<Vec<Face>> = vec![Vec::new(); dim + 1];
        for cf in &structure.faces {
            let verts: Vec<usize> = cf
                .vertices
                .iter()
                .map(|v| reindex[&structure.vertex_ids[*v]])
                .collect();
            let basis: Vec<Vec<Q>> = cf
                .basis
                .iter()
                .map(|u| lift(&hull_basis, u))
                .collect();
            let rays: Vec<Vec<Q>> = cf
                .normals
                .iter()
                .map(|u| normalize_ray(&lift_covector(&dual, u)))
                .collect();
            faces[cf.dim].push(Face {
                dim: cf.dim,
                vertices: verts,
                basis,
                cone: NormalCone {
                    n,
                    rays,
                    lineality: complement.clone(),
                },
            });
        }
        Ok(Polytope {
            n,
            vertices,
            dim,
            faces,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<Q>] {
        &self.vertices
    }

    pub fn faces(&self, d: usize) -> &[Face] {
        static EMPTY: Vec<Face> = Vec::new();
        self.faces.get(d).map(|v| v.as_slice()).unwrap_or(&EMPTY)
    }

    pub fn face_counts(&self) -> Vec<usize> {
        self.faces.iter().map(|f| f.len()).collect()
    }

    /// Exact volume of a face (its dim-dimensional Hausdorff measure).
    /// None when the squared simplex volumes are not perfect squares.
    pub fn face_volume(&self, face: &Face) -> Option<Q> {
        let pts: Vec<Vec<Q>> = face.vertices.iter().map(|&i| self.vertices[i].clone()).collect();
        polytope_volume(face.dim, &pts)
    }

    /// The face volume as f64, exact when possible.
    pub fn face_volume_f64(&self, face: &Face) -> f64 {
        match self.face_volume(face) {
            Some(q) => crate::scalar::q_to_f64(&q),
            None => {
                let pts: Vec<Vec<Q>> =
                    face.vertices.iter().map(|&i| self.vertices[i].clone()).collect();
                polytope_volume_f64(face.dim, &pts)
            }
        }
    }
}

fn sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// A maximal linearly independent subset of the given vectors.
fn independent_subset(vectors: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let mut basis: Vec<Vec<Q>> = Vec::new();
    for v in vectors {
        let mut m: Vec<Vec<Q>> = basis.clone();
        m.push(v.clone());
        if linalg::rank(&m) > basis.len() {
            basis.push(v.clone());
        }
    }
    basis
}

/// Coordinates of v in span(basis): solve Bᵀ t = coords via the Gram system.
fn chart_coords(basis: &[Vec<Q>], v: &[Q]) -> Vec<Q> {
    let m = basis.len();
    if m == 0 {
        return vec![];
    }
    let mut gram = vec![vec![Q::zero(); m]; m];
    for i in 0..m {
        for j in 0..m {
            gram[i][j] = linalg::dot(&basis[i], &basis[j]);
        }
    }
    let rhs: Vec<Q> = basis.iter().map(|b| linalg::dot(b, v)).collect();
    linalg::solve(&gram, &rhs).expect("vector lies in the span")
}

/// Σ u_a basis_a.
fn lift(basis: &[Vec<Q>], u: &[Q]) -> Vec<Q> {
    let n = basis.first().map(|b| b.len()).unwrap_or(0);
    let mut out = vec![Q::zero(); n];
    for (c, b) in u.iter().zip(basis) {
        for (o, x) in out.iter_mut().zip(b) {
            *o += c * x;
        }
    }
    out
}

/// Dual basis of the given independent set within its span: rows d_i with
/// ⟨d_i, b_j⟩ = δ_ij.
fn dual_basis(basis: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let m = basis.len();
    if m == 0 {
        return vec![];
    }
    let mut gram = vec![vec![Q::zero(); m]; m];
    for i in 0..m {
        for j in 0..m {
            gram[i][j] = linalg::dot(&basis[i], &basis[j]);
        }
    }
    let mut duals = Vec::with_capacity(m);
    for i in 0..m {
        let mut rhs = vec![Q::zero(); m];
        rhs[i] = Q::one();
        let coeffs = linalg::solve(&gram, &rhs).expect("gram is invertible");
        duals.push(lift(basis, &coeffs));
    }
    duals
}

/// A chart facet covector u (⟨u, t⟩ ≤ c) lifts to the ambient normal
/// Σ u_a d_a with d the dual basis.
fn lift_covector(dual: &[Vec<Q>], u: &[Q]) -> Vec<Q> {
    lift(dual, u)
}

/// Scale a rational vector to a primitive integer direction.
fn normalize_ray(v: &[Q]) -> Vec<Q> {
    use num::bigint::BigInt;
    let mut lcm = BigInt::one();
    for x in v {
        lcm = num::integer::lcm(lcm, x.denom().clone());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut gcd = BigInt::zero();
    for i in &ints {
        gcd = num::integer::gcd(gcd, i.clone());
    }
    if gcd.is_zero() {
        return v.to_vec();
    }
    ints.into_iter()
        .map(|i| Q::from_integer(i / &gcd))
        .collect()
}

struct ChartFace {
    dim: usize,
    vertices: Vec<usize>, // indices into vertex_ids
    basis: Vec<Vec<Q>>,   // chart-coordinate basis of the face's linear part
    normals: Vec<Vec<Q>>, // chart covectors of the facets containing the face
}

struct ChartStructure {
    vertex_ids: Vec<usize>, // indices into the original point list
    faces: Vec<ChartFace>,
}

/// Facial structure of a full-dimensional polytope given by points in ℝ^dim.
fn full_dim_structure(dim: usize, points: &[Vec<Q>]) -> Result<ChartStructure, PolytopeError> {
    if dim == 0 {
        return Ok(ChartStructure {
            vertex_ids: vec![0],
            faces: vec![ChartFace {
                dim: 0,
                vertices: vec![0],
                basis: vec![],
                normals: vec![],
            }],
        });
    }
    // interior point
    let m = points.len();
    let centroid: Vec<Q> = (0..dim)
        .map(|c| {
            points.iter().map(|p| &p[c]).sum::<Q>() / Q::from_integer((m as i64).into())
        })
        .collect();

    // enumerate facet hyperplanes from dim-subsets of points
    let mut facets: Vec<(Vec<Q>, Q, Vec<usize>)> = Vec::new(); // (normal, offset, incident points)
    let mut seen: BTreeSet<Vec<Q>> = BTreeSet::new();
    let mut subset: Vec<usize> = (0..dim).collect();
    loop {
        if let Some((normal, offset)) = hyperplane_through(points, &subset, dim) {
            // orient outward
            let side = linalg::dot(&normal, &centroid) - &offset;
            let (normal, offset) = if side.is_positive() {
                (
                    normal.iter().map(|x| -x).collect::<Vec<Q>>(),
                    -offset.clone(),
                )
            } else {
                (normal, offset)
            };
            let key = {
                let mut k = normalize_ray(&normal);
                k.push(&offset / norm1(&normal));
                k
            };
            if !seen.contains(&key) {
                let mut incident = Vec::new();
                let mut valid = true;
                for (i, p) in points.iter().enumerate() {
                    let v = linalg::dot(&normal, p) - &offset;
                    if v.is_positive() {
                        valid = false;
                        break;
                    }
                    if v.is_zero() {
                        incident.push(i);
                    }
                }
                if valid {
                    seen.insert(key);
                    facets.push((normal, offset, incident));
                }
            }
        }
        if !advance_subset(&mut subset, m) {
            break;
        }
    }

    // extreme points: those on at least dim facets
    let mut vertex_ids: Vec<usize> = (0..m)
        .filter(|&i| {
            facets
                .iter()
                .filter(|(_, _, inc)| inc.contains(&i))
                .count()
                >= dim
        })
        .collect();
    vertex_ids.sort_unstable();

    // faces: closure of facet vertex sets under intersection
    let full: BTreeSet<usize> = vertex_ids.iter().copied().collect();
    let mut sets: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    sets.insert(full.clone());
    for (_, _, inc) in &facets {
        sets.insert(inc.iter().copied().filter(|i| full.contains(i)).collect());
    }
    loop {
        let mut new_sets = Vec::new();
        for a in &sets {
            for b in &sets {
                let inter: BTreeSet<usize> = a.intersection(b).copied().collect();
                if !inter.is_empty() && !sets.contains(&inter) {
                    new_sets.push(inter);
                }
            }
        }
        if new_sets.is_empty() {
            break;
        }
        sets.extend(new_sets);
    }

    let id_of: std::collections::BTreeMap<usize, usize> = vertex_ids
        .iter()
        .enumerate()
        .map(|(a, &b)| (b, a))
        .collect();
    let mut faces = Vec::new();
    for set in &sets {
        let pts: Vec<&Vec<Q>> = set.iter().map(|&i| &points[i]).collect();
        let base = pts[0].clone();
        let dirs: Vec<Vec<Q>> = pts[1..].iter().map(|p| sub(p, &base)).collect();
        let basis = independent_subset(&dirs);
        let fdim = basis.len();
        let normals: Vec<Vec<Q>> = facets
            .iter()
            .filter(|(_, _, inc)| set.iter().all(|i| inc.contains(i)))
            .map(|(nrm, _, _)| nrm.clone())
            .collect();
        faces.push(ChartFace {
            dim: fdim,
            vertices: set.iter().map(|i| id_of[i]).collect(),
            basis,
            normals,
        });
    }
    Ok(ChartStructure { vertex_ids, faces })
}

fn norm1(v: &[Q]) -> Q {
    v.iter().map(|x| x.abs()).sum()
}

/// Hyperplane through the chosen points, if they are affinely independent
/// and span one.
fn hyperplane_through(points: &[Vec<Q>], subset: &[usize], dim: usize) -> Option<(Vec<Q>, Q)> {
    let base = &points[subset[0]];
    let rows: Vec<Vec<Q>> = subset[1..]
        .iter()
        .map(|&i| sub(&points[i], base))
        .collect();
    let null = linalg::null_space(&rows);
    if null.len() != 1 {
        return None;
    }
    let normal = null.into_iter().next().unwrap();
    let offset = linalg::dot(&normal, base);
    let _ = dim;
    Some((normal, offset))
}

fn advance_subset(subset: &mut [usize], m: usize) -> bool {
    let k = subset.len();
    if k == 0 || k > m {
        return false;
    }
    let mut i = k;
    loop {
        if i == 0 {
            return false;
        }
        i -= 1;
        if subset[i] != i + m - k {
            break;
        }
    }
    subset[i] += 1;
    for j in i + 1..k {
        subset[j] = subset[j - 1] + 1;
    }
    true
}

/// Exact volume of a polytope of intrinsic dimension `dim` given by its
/// vertex list (in ambient coordinates). None if an intermediate square
/// root is irrational.
pub fn polytope_volume(dim: usize, points: &[Vec<Q>]) -> Option<Q> {
    if dim == 0 {
        return Some(Q::one());
    }
    let simplices = triangulate(dim, points)?;
    let mut total = Q::zero();
    for s in simplices {
        total += simplex_volume(dim, &s)?;
    }
    Some(total)
}

fn polytope_volume_f64(dim: usize, points: &[Vec<Q>]) -> f64 {
    if dim == 0 {
        return 1.0;
    }
    match triangulate(dim, points) {
        Some(simplices) => simplices
            .iter()
            .map(|s| {
                let g = gram_det(dim, s);
                crate::scalar::q_to_f64(&g).max(0.0).sqrt()
                    / crate::scalar::q_to_f64(&crate::scalar::factorial(dim))
            })
            .sum(),
        None => f64::NAN,
    }
}

/// Triangulation by recursive coning from the first vertex over facet
/// triangulations.
fn triangulate(dim: usize, points: &[Vec<Q>]) -> Option<Vec<Vec<Vec<Q>>>> {
    let poly = Polytope::from_vertices(points[0].len(), points).ok()?;
    if poly.dim() < dim {
        return Some(vec![]); // degenerate: zero volume
    }
    Some(triangulate_rec(&poly, dim))
}

fn triangulate_rec(poly: &Polytope, dim: usize) -> Vec<Vec<Vec<Q>>> {
    if dim == 0 {
        return vec![vec![poly.vertices()[0].clone()]];
    }
    let apex = poly.vertices()[0].clone();
    let mut simplices = Vec::new();
    for facet in poly.faces(dim - 1) {
        // skip facets containing the apex
        if facet
            .vertices
            .iter()
            .any(|&v| poly.vertices()[v] == apex)
        {
            continue;
        }
        let pts: Vec<Vec<Q>> = facet
            .vertices
            .iter()
            .map(|&v| poly.vertices()[v].clone())
            .collect();
        let sub = Polytope::from_vertices(apex.len(), &pts).expect("facet is a polytope");
        for mut s in triangulate_rec(&sub, dim - 1) {
            s.push(apex.clone());
            simplices.push(s);
        }
    }
    simplices
}

/// Gram determinant of the edge vectors of a simplex: (dim! · vol)².
fn gram_det(dim: usize, simplex: &[Vec<Q>]) -> Q {
    let base = &simplex[dim];
    let edges: Vec<Vec<Q>> = simplex[..dim].iter().map(|p| sub(p, base)).collect();
    let mut gram = vec![vec![Q::zero(); dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            gram[i][j] = linalg::dot(&edges[i], &edges[j]);
        }
    }
    linalg::det(&gram)
}

fn simplex_volume(dim: usize, simplex: &[Vec<Q>]) -> Option<Q> {
    let g = gram_det(dim, simplex);
    let root = sqrt_exact(&g)?;
    Some(root / crate::scalar::factorial(dim))
}

/// Exact square root of a non-negative rational, if it exists.
pub fn sqrt_exact(q: &Q) -> Option<Q> {
    use num::bigint::BigInt;
    if q.is_negative() {
        return None;
    }
    let num = q.numer().sqrt();
    let den = q.denom().sqrt();
    if &(&num * &num) == q.numer() && &(&den * &den) == q.denom() {
        Some(Q::new(num, den))
    } else {
        let _ = BigInt::zero();
        None
    }
}

/// Clip a face to an axis-aligned box and return the exact volume of the
/// intersection (None when an irrational volume appears).
pub fn clipped_face_volume(
    poly: &Polytope,
    face: &Face,
    lo: &[Q],
    hi: &[Q],
) -> Option<Q> {
    if face.dim == 0 {
        let v = &poly.vertices()[face.vertices[0]];
        let inside = v
            .iter()
            .zip(lo.iter().zip(hi))
            .all(|(x, (l, h))| x >= l && x <= h);
        return Some(if inside { Q::one() } else { Q::zero() });
    }
    // affine chart of the face
    let pts: Vec<Vec<Q>> = face
        .vertices
        .iter()
        .map(|&i| poly.vertices()[i].clone())
        .collect();
    let base = pts[0].clone();
    let basis = &face.basis;
    let d = face.dim;
    // constraints in chart coordinates: face's own facets plus box walls
    let mut constraints: Vec<(Vec<Q>, Q)> = Vec::new(); // ⟨a, t⟩ ≤ c
    let chart_pts: Vec<Vec<Q>> = pts.iter().map(|p| chart_coords(basis, &sub(p, &base))).collect();
    let sub_structure = full_dim_structure(d, &chart_pts).ok()?;
    for f in &sub_structure.faces {
        if f.dim == d - 1 {
            for nrm in &f.normals {
                let any_pt = &chart_pts[f.vertices[0]];
                constraints.push((nrm.clone(), linalg::dot(nrm, any_pt)));
            }
        }
    }
    for c in 0..poly.n() {
        // lo_c ≤ base_c + Σ t_a basis_a[c] ≤ hi_c
        let coeffs: Vec<Q> = basis.iter().map(|b| b[c].clone()).collect();
        if coeffs.iter().all(|x| x.is_zero()) {
            if base[c] < lo[c] || base[c] > hi[c] {
                return Some(Q::zero());
            }
            continue;
        }
        constraints.push((coeffs.iter().map(|x| -x).collect(), &base[c] - &lo[c]));
        constraints.push((coeffs.clone(), &hi[c] - &base[c]));
    }
    // vertex enumeration
    let mut verts: Vec<Vec<Q>> = Vec::new();
    let m = constraints.len();
    if m < d {
        return Some(Q::zero());
    }
    let mut subset: Vec<usize> = (0..d).collect();
    loop {
        let mat: Vec<Vec<Q>> = subset.iter().map(|&i| constraints[i].0.clone()).collect();
        let rhs: Vec<Q> = subset.iter().map(|&i| constraints[i].1.clone()).collect();
        if let Some(t) = linalg::solve(&mat, &rhs) {
            if constraints
                .iter()
                .all(|(a, c)| &linalg::dot(a, &t) <= &(c + Q::zero()))
            {
                verts.push(t);
            }
        }
        if !advance_subset(&mut subset, m) {
            break;
        }
    }
    verts.sort();
    verts.dedup();
    if verts.len() <= d {
        return Some(Q::zero());
    }
    // back to ambient coordinates, then measure
    let ambient: Vec<Vec<Q>> = verts
        .iter()
        .map(|t| {
            let mut p = base.clone();
            for (c, b) in t.iter().zip(basis) {
                for (x, y) in p.iter_mut().zip(b) {
                    *x += c * y;
                }
            }
            p
        })
        .collect();
    polytope_volume(d, &ambient)
}
