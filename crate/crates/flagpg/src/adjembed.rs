//! The natural embedding of the flag geometry into the projective space of
//! null-traced square matrices, and the hyperplane families it carries.
//!
//! A flag (p, H) with representative vector x and covector xi maps to the
//! rank-1 matrix x (x) xi, which is null-traced exactly because xi(x) = 0.
//! The ambient matrix space carries the symmetric bilinear trace form
//! f(X, Y) = trace(XY); perps of non-scalar matrices cut out the tensor-type
//! hyperplanes, with membership reducing to xi * M * x = 0.

use crate::bits::BitVec;
use crate::exactlinalg::{dot, rank_and_kernel, Mat};
use crate::flaggeometry::{FlagGeometry, SingularBase};
use crate::gf::{Fe, Field};
use crate::hyperplanelab::{is_geometric_hyperplane, FlagSet};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AdjError {
    #[error("matrix is proportional to the identity; its perp is the whole null-trace space")]
    ScalarMatrix,
    #[error("operands have different sizes")]
    SizeMismatch,
    #[error("functional is identically zero")]
    ZeroFunctional,
    #[error("construction violates the hyperplane axiom: line {line} meets it in {count} flags")]
    NotAHyperplane { line: u32, count: usize },
}

/// A rank-1 null-traced matrix together with its factorization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PureTensor {
    pub x: Vec<Fe>,
    pub xi: Vec<Fe>,
    pub mat: Mat,
}

/// Where a hyperplane bitmap came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    Tensor { matrix: Vec<Vec<Fe>> },
    QuasiSingular { point: Vec<Fe>, hyp: Vec<Fe> },
    Spread { tag: String },
    Raw,
}

/// A geometric hyperplane of the flag geometry: a validated membership
/// bitmap plus its provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeometricHyperplane {
    pub set: FlagSet,
    pub provenance: Provenance,
}

impl GeometricHyperplane {
    pub fn size(&self) -> usize {
        self.set.count()
    }

    pub fn contains(&self, flag: u32) -> bool {
        self.set.contains(flag as usize)
    }
}

/// The embedding on one flag: canonical representatives multiply to a matrix
/// whose first nonzero entry is already 1.
pub fn embed_flag(geom: &FlagGeometry, flag: u32) -> PureTensor {
    let field = geom.field();
    let f = geom.flag(flag);
    let x = geom.pg().point(f.point).coords.clone();
    let xi = geom.pg().hyp(f.hyp).coords.clone();
    let mat = Mat::outer(field, &x, &xi);
    PureTensor { x, xi, mat }
}

/// Coordinates of a null-traced matrix in the standard basis of the
/// null-trace subspace: every entry except the last diagonal one (which the
/// vanishing trace determines).
pub fn null_trace_coords(m: &Mat) -> Vec<Fe> {
    let mut v = m.entries().to_vec();
    v.pop();
    v
}

/// Linear dimension of the null-trace subspace for matrices of order n+1.
pub fn null_trace_dim(n: usize) -> usize {
    (n + 2) * n
}

/// The saturation form f(X, Y) = sum_ij x_ij y_ji, which equals trace(XY).
pub fn saturation_form(field: &Field, x: &Mat, y: &Mat) -> Result<Fe, AdjError> {
    if x.n != y.n {
        return Err(AdjError::SizeMismatch);
    }
    let mut acc = 0;
    for i in 0..x.n {
        for j in 0..x.n {
            acc = field.add(acc, field.mul(x.get(i, j), y.get(j, i)));
        }
    }
    Ok(acc)
}

fn validated(geom: &FlagGeometry, set: FlagSet, provenance: Provenance) -> Result<GeometricHyperplane, AdjError> {
    let check = is_geometric_hyperplane(geom, &set);
    if !check.ok {
        let (line, count) = check.violation.unwrap_or((0, geom.flag_count()));
        return Err(AdjError::NotAHyperplane { line, count });
    }
    Ok(GeometricHyperplane { set, provenance })
}

/// The tensor-type hyperplane of a non-scalar matrix M: all flags (x, xi)
/// with xi * M * x = 0. Validated before being returned.
pub fn tensor_hyperplane(geom: &FlagGeometry, m: &Mat) -> Result<GeometricHyperplane, AdjError> {
    if m.n != geom.pg().n() + 1 {
        return Err(AdjError::SizeMismatch);
    }
    if m.is_scalar() {
        return Err(AdjError::ScalarMatrix);
    }
    let set = tensor_membership(geom, m);
    validated(
        geom,
        set,
        Provenance::Tensor {
            matrix: m.to_grid(),
        },
    )
}

/// Membership bitmap of the tensor hyperplane, without validation. The
/// images M * x are cached per point, so the scan is O(flags * (n+1)).
pub fn tensor_membership(geom: &FlagGeometry, m: &Mat) -> FlagSet {
    let field = geom.field();
    let pg = geom.pg();
    let images: Vec<Vec<Fe>> = (0..pg.point_count() as u32)
        .map(|p| m.mat_vec(field, &pg.point(p).coords))
        .collect();
    let mut set = FlagSet::new(geom.flag_count());
    for f in 0..geom.flag_count() as u32 {
        let flag = geom.flag(f);
        let xi = &pg.hyp(flag.hyp).coords;
        if dot(field, xi, &images[flag.point as usize]) == 0 {
            set.insert(f as usize);
        }
    }
    set
}

/// The quasi-singular hyperplane of a point-hyperplane pair (incidence not
/// required): the tensor hyperplane of the rank-1 matrix a (x) alpha.
pub fn quasi_singular_hyperplane(
    geom: &FlagGeometry,
    point: u32,
    hyp: u32,
) -> Result<GeometricHyperplane, AdjError> {
    let pg = geom.pg();
    let a = pg.point(point).coords.clone();
    let alpha = pg.hyp(hyp).coords.clone();
    let m = Mat::outer(geom.field(), &a, &alpha);
    let mut h = tensor_hyperplane(geom, &m)?;
    h.provenance = Provenance::QuasiSingular {
        point: a,
        hyp: alpha,
    };
    Ok(h)
}

/// Preimage of the kernel of a linear functional on the null-trace space,
/// the functional given by its coefficient vector in the standard basis.
pub fn hyperplane_from_functional(
    geom: &FlagGeometry,
    coeffs: &[Fe],
) -> Result<GeometricHyperplane, AdjError> {
    let n = geom.pg().n();
    if coeffs.len() != null_trace_dim(n) {
        return Err(AdjError::SizeMismatch);
    }
    if coeffs.iter().all(|&c| c == 0) {
        return Err(AdjError::ZeroFunctional);
    }
    let field = geom.field();
    let mut set = FlagSet::new(geom.flag_count());
    for f in 0..geom.flag_count() as u32 {
        let t = embed_flag(geom, f);
        if dot(field, coeffs, &null_trace_coords(&t.mat)) == 0 {
            set.insert(f as usize);
        }
    }
    validated(geom, set, Provenance::Raw)
}

/// Does the hyperplane arise from the embedding: do its images span a
/// hyperplane of the null-trace space whose preimage is exactly the set?
pub fn arises_from_embedding(geom: &FlagGeometry, h: &GeometricHyperplane) -> bool {
    let field = geom.field();
    let dim = null_trace_dim(geom.pg().n());
    let rows: Vec<Vec<Fe>> = h
        .set
        .ones()
        .map(|f| null_trace_coords(&embed_flag(geom, f as u32).mat))
        .collect();
    let (rank, _) = rank_and_kernel(field, &rows, dim);
    if rank != dim - 1 {
        return false;
    }
    // the annihilating functional of the span is unique up to scale
    match functional_annihilating(field, &rows, dim) {
        None => false,
        Some(c) => match hyperplane_from_functional(geom, &c) {
            Ok(pre) => pre.set == h.set,
            Err(_) => false,
        },
    }
}

/// A nonzero functional vanishing on all rows, when the rows span a
/// hyperplane of F^width.
fn functional_annihilating(field: &Field, rows: &[Vec<Fe>], width: usize) -> Option<Vec<Fe>> {
    let (_, kernel) = rank_and_kernel(field, rows, width);
    if kernel.len() == 1 {
        Some(kernel.into_iter().next().unwrap())
    } else {
        None
    }
}

/// Singular subspaces fully contained in the hyperplane, if any: returns the
/// first point-based and the first hyperplane-based witness.
pub fn contained_singular_subspaces(
    geom: &FlagGeometry,
    h: &GeometricHyperplane,
) -> (Option<u32>, Option<u32>) {
    let pg = geom.pg();
    let point_witness = (0..pg.point_count() as u32).find(|&a| {
        let m = geom.singular_subspace(SingularBase::Point(a));
        m.flags.iter().all(|&f| h.contains(f))
    });
    let hyp_witness = (0..pg.hyp_count() as u32).find(|&a| {
        let m = geom.singular_subspace(SingularBase::Hyperplane(a));
        m.flags.iter().all(|&f| h.contains(f))
    });
    (point_witness, hyp_witness)
}

/// Diagnostics for the saturation form at a given (n, q).
#[derive(Debug, Clone, Serialize)]
pub struct GramReport {
    pub gram_rank: usize,
    pub expected_rank: usize,
    /// Reordering the basis into (E_ij, E_ji) pairs followed by the diagonal
    /// turns the Gram matrix into hyperbolic 2x2 blocks plus an identity
    /// block.
    pub block_structure_ok: bool,
    /// In characteristic 2 only: f(X,X) = 0 iff trace X = 0, together with
    /// how many matrices were checked and whether that was all of them.
    pub char2_isotropy_ok: Option<bool>,
    pub char2_checked: u64,
    pub char2_exhaustive: bool,
    /// Isotropic pure tensors are exactly the null-traced ones, in every
    /// characteristic: f(X, X) = xi(x)^2 for X = x (x) xi.
    pub pure_isotropy_ok: bool,
}

impl GramReport {
    pub fn ok(&self) -> bool {
        self.gram_rank == self.expected_rank
            && self.block_structure_ok
            && self.char2_isotropy_ok.unwrap_or(true)
            && self.pure_isotropy_ok
    }
}

/// Gram matrix of the saturation form over the matrix-unit basis, rank and
/// structure checks, and the characteristic-2 isotropy law.
pub fn gram_diagnostics(field: &Field, n: usize, sample_seed: u64) -> GramReport {
    use rand::{Rng, SeedableRng};
    let d = n + 1;
    let dim = d * d;
    // Gram over E_ij ordered row-major: f(E_ij, E_kl) = [j == k][l == i]
    let unit = |i: usize, j: usize| -> Mat {
        let mut m = Mat::zeros(d);
        m.set(i, j, 1);
        m
    };
    let mut gram: Vec<Vec<Fe>> = Vec::with_capacity(dim);
    let units: Vec<(usize, usize)> = (0..d)
        .flat_map(|i| (0..d).map(move |j| (i, j)))
        .collect();
    for &(i, j) in &units {
        let mi = unit(i, j);
        let row: Vec<Fe> = units
            .iter()
            .map(|&(k, l)| saturation_form(field, &mi, &unit(k, l)).expect("same size"))
            .collect();
        gram.push(row);
    }
    let (gram_rank, _) = rank_and_kernel(field, &gram, dim);

    // permute to pairs (E_ij, E_ji) for i < j, then the diagonal units
    let mut order: Vec<usize> = Vec::with_capacity(dim);
    for i in 0..d {
        for j in i + 1..d {
            order.push(i * d + j);
            order.push(j * d + i);
        }
    }
    for i in 0..d {
        order.push(i * d + i);
    }
    let mut block_structure_ok = true;
    for (a, &oa) in order.iter().enumerate() {
        for (b, &ob) in order.iter().enumerate() {
            let got = gram[oa][ob];
            let off = d * (d - 1);
            let want = if a < off && b < off {
                // hyperbolic pairs
                if a / 2 == b / 2 && a != b {
                    1
                } else {
                    0
                }
            } else if a >= off && b >= off {
                u32::from(a == b)
            } else {
                0
            };
            if got != want {
                block_structure_ok = false;
            }
        }
    }

    // characteristic-2 law: f(X, X) = 0 iff trace X = 0
    let (char2_isotropy_ok, char2_checked, char2_exhaustive) = if field.char2() {
        let total = (field.q() as u128).pow(dim as u32);
        if total <= 1 << 20 {
            let mut ok = true;
            for idx in 0..total as u64 {
                let m = Mat::from_counter(d, field.q(), idx);
                let iso = saturation_form(field, &m, &m).unwrap() == 0;
                if iso != (m.trace(field) == 0) {
                    ok = false;
                    break;
                }
            }
            (Some(ok), total as u64, true)
        } else {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(sample_seed);
            let mut ok = true;
            let samples = 4096u64;
            for _ in 0..samples {
                let mut m = Mat::zeros(d);
                for i in 0..d {
                    for j in 0..d {
                        m.set(i, j, rng.gen_range(0..field.q()));
                    }
                }
                let iso = saturation_form(field, &m, &m).unwrap() == 0;
                if iso != (m.trace(field) == 0) {
                    ok = false;
                    break;
                }
            }
            (Some(ok), samples, false)
        }
    } else {
        (None, 0, false)
    };

    // pure tensors: f(X, X) = xi(x)^2, so isotropic iff null-traced
    let reps = crate::exactlinalg::canonical_reps(field.q(), d);
    let mut pure_isotropy_ok = true;
    'outer: for x in &reps {
        for xi in &reps {
            let m = Mat::outer(field, x, xi);
            let fxx = saturation_form(field, &m, &m).unwrap();
            let pairing = dot(field, xi, x);
            if fxx != field.mul(pairing, pairing) || (fxx == 0) != (m.trace(field) == 0) {
                pure_isotropy_ok = false;
                break 'outer;
            }
        }
    }

    GramReport {
        gram_rank,
        expected_rank: dim,
        block_structure_ok,
        char2_isotropy_ok,
        char2_checked,
        char2_exhaustive,
        pure_isotropy_ok,
    }
}

/// On-disk hyperplane format: provenance, size, and the member list either
/// plain or as (start, length) runs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HyperplaneFile {
    pub provenance: Provenance,
    pub size: usize,
    pub encoding: String,
    pub members: MemberEncoding,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MemberEncoding {
    Plain(Vec<u32>),
    Rle(Vec<(u32, u32)>),
}

impl HyperplaneFile {
    pub fn from_hyperplane(h: &GeometricHyperplane, rle: bool) -> HyperplaneFile {
        let plain: Vec<u32> = h.set.ones().map(|f| f as u32).collect();
        let (encoding, members) = if rle {
            let mut runs: Vec<(u32, u32)> = Vec::new();
            for &f in &plain {
                match runs.last_mut() {
                    Some((start, len)) if *start + *len == f => *len += 1,
                    _ => runs.push((f, 1)),
                }
            }
            ("rle".to_string(), MemberEncoding::Rle(runs))
        } else {
            ("plain".to_string(), MemberEncoding::Plain(plain))
        };
        HyperplaneFile {
            provenance: h.provenance.clone(),
            size: h.size(),
            encoding,
            members,
        }
    }

    /// Decode against a geometry of the given flag count. The set is not
    /// re-validated here; run the hyperplane check on it explicitly.
    pub fn into_parts(self, flag_count: usize) -> Result<(FlagSet, Provenance), AdjError> {
        let mut set = FlagSet::new(flag_count);
        let mut add = |f: u32| -> Result<(), AdjError> {
            if f as usize >= flag_count {
                return Err(AdjError::SizeMismatch);
            }
            set.insert(f as usize);
            Ok(())
        };
        match self.members {
            MemberEncoding::Plain(v) => {
                for f in v {
                    add(f)?;
                }
            }
            MemberEncoding::Rle(runs) => {
                for (start, len) in runs {
                    for f in start..start + len {
                        add(f)?;
                    }
                }
            }
        }
        Ok((set, self.provenance))
    }
}

/// Flags at distance <= 2 from the given flag, as a bitmap. The ball
/// description that singular hyperplanes must match.
pub fn ball_radius_two(geom: &FlagGeometry, flag: u32) -> BitVec {
    let mut set = BitVec::new(geom.flag_count());
    for f in 0..geom.flag_count() as u32 {
        if geom.pair_class(flag, f).distance() <= 2 {
            set.insert(f as usize);
        }
    }
    set
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flaggeometry::FlagGeometry;
    use crate::gf::Field;
    use std::sync::Arc;

    fn geom(n: usize, q: u32) -> FlagGeometry {
        FlagGeometry::build(Arc::new(Field::of_order(q).unwrap()), n, 1 << 20).unwrap()
    }

    #[test]
    fn embed_examples() {
        let g = geom(3, 2);
        let pg = g.pg();
        let f = g
            .flag_id(
                pg.point_index(&[1, 0, 0, 0]).unwrap(),
                pg.hyp_index(&[0, 0, 0, 1]).unwrap(),
            )
            .unwrap();
        let t = embed_flag(&g, f);
        // outer product of e0 and eta3 is the single-one matrix E03
        let mut e03 = Mat::zeros(4);
        e03.set(0, 3, 1);
        assert_eq!(t.mat, e03);

        let field = g.field();
        for f in 0..g.flag_count() as u32 {
            let t = embed_flag(&g, f);
            assert_eq!(t.mat.trace(field), 0);
            assert_eq!(t.mat.rank(field), 1);
        }
        // injective: all images distinct
        let mut seen = std::collections::HashSet::new();
        for f in 0..g.flag_count() as u32 {
            assert!(seen.insert(embed_flag(&g, f).mat));
        }
    }

    #[test]
    fn embedded_lines_are_collinear() {
        for (n, q) in [(3usize, 2u32), (2, 3)] {
            let g = geom(n, q);
            let field = g.field();
            for line in g.lines() {
                let rows: Vec<Vec<Fe>> = line
                    .flags
                    .iter()
                    .map(|&f| embed_flag(&g, f).mat.entries().to_vec())
                    .collect();
                let (rank, _) = rank_and_kernel(field, &rows, (n + 1) * (n + 1));
                assert_eq!(rank, 2, "q+1 images must span a projective line");
            }
        }
    }

    #[test]
    fn saturation_form_examples() {
        let f2 = Field::of_order(2).unwrap();
        let mut e01 = Mat::zeros(4);
        e01.set(0, 1, 1);
        let mut e10 = Mat::zeros(4);
        e10.set(1, 0, 1);
        assert_eq!(saturation_form(&f2, &e01, &e10).unwrap(), 1);
        assert_eq!(saturation_form(&f2, &e01, &e01).unwrap(), 0);
        let id = Mat::identity(4);
        assert_eq!(saturation_form(&f2, &id, &id).unwrap(), 0); // 4 mod 2

        let wrong = Mat::identity(3);
        assert_eq!(
            saturation_form(&f2, &id, &wrong).unwrap_err(),
            AdjError::SizeMismatch
        );
    }

    #[test]
    fn saturation_form_equals_trace_of_product() {
        let f = Field::of_order(3).unwrap();
        for a in 0..81u64 {
            for b in 0..81u64 {
                let x = Mat::from_counter(2, 3, a);
                let y = Mat::from_counter(2, 3, b);
                assert_eq!(
                    saturation_form(&f, &x, &y).unwrap(),
                    x.mul(&f, &y).trace(&f)
                );
            }
        }
    }

    #[test]
    fn form_on_pure_tensors_is_pairing_product() {
        let g = geom(2, 2);
        let field = g.field();
        let pg = g.pg();
        for px in 0..pg.point_count() as u32 {
            for hx in 0..pg.hyp_count() as u32 {
                for py in 0..pg.point_count() as u32 {
                    for hy in 0..pg.hyp_count() as u32 {
                        let x = Mat::outer(field, &pg.point(px).coords, &pg.hyp(hx).coords);
                        let y = Mat::outer(field, &pg.point(py).coords, &pg.hyp(hy).coords);
                        let lhs = saturation_form(field, &x, &y).unwrap();
                        let rhs = field.mul(
                            dot(field, &pg.hyp(hy).coords, &pg.point(px).coords),
                            dot(field, &pg.hyp(hx).coords, &pg.point(py).coords),
                        );
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn tensor_hyperplane_examples() {
        let g = geom(3, 2);
        let field = g.field();
        let pg = g.pg();

        let mut e00 = Mat::zeros(4);
        e00.set(0, 0, 1);
        let h = tensor_hyperplane(&g, &e00).unwrap();
        let (pw, hw) = contained_singular_subspaces(&g, &h);
        assert_eq!(pw, Some(pg.point_index(&[1, 0, 0, 0]).unwrap()));
        assert_eq!(hw, Some(pg.hyp_index(&[1, 0, 0, 0]).unwrap()));

        let b = Mat::companion2(field, 1, 1);
        let bb = Mat::block_diag(&[b.clone(), b]);
        let hb = tensor_hyperplane(&g, &bb).unwrap();
        assert_eq!(contained_singular_subspaces(&g, &hb), (None, None));

        // M and M + I cut the same hyperplane
        let shifted = bb.add(field, &Mat::identity(4));
        let hs = tensor_hyperplane(&g, &shifted).unwrap();
        assert_eq!(hb.set, hs.set);

        assert_eq!(
            tensor_hyperplane(&g, &Mat::identity(4)).unwrap_err(),
            AdjError::ScalarMatrix
        );
        assert_eq!(
            tensor_hyperplane(&g, &Mat::zeros(4)).unwrap_err(),
            AdjError::ScalarMatrix
        );
    }

    #[test]
    fn quasi_singular_sizes_and_ball() {
        let g = geom(2, 2);
        let pg = g.pg();
        for a in 0..pg.point_count() as u32 {
            for big_a in 0..pg.hyp_count() as u32 {
                let h = quasi_singular_hyperplane(&g, a, big_a).unwrap();
                if pg.point_incident_hyp(a, big_a) {
                    assert_eq!(h.size(), 13);
                    let deepest = g.flag_id(a, big_a).unwrap();
                    assert!(h.contains(deepest));
                    assert_eq!(h.set, ball_radius_two(&g, deepest));
                } else {
                    assert_eq!(h.size(), 15);
                }
            }
        }
    }

    #[test]
    fn arising_examples() {
        let g = geom(2, 2);
        let field = g.field();
        // every tensor hyperplane arises
        for idx in [3u64, 17, 100, 300, 511] {
            let m = Mat::from_counter(3, 2, idx);
            if m.is_scalar() {
                continue;
            }
            let h = tensor_hyperplane(&g, &m).unwrap();
            assert!(arises_from_embedding(&g, &h), "matrix index {}", idx);
        }
        // a raw copy of a tensor hyperplane also arises
        let m = Mat::companion2(field, 1, 1);
        let mut padded = Mat::zeros(3);
        for i in 0..2 {
            for j in 0..2 {
                padded.set(i, j, m.get(i, j));
            }
        }
        padded.set(2, 2, 1);
        let h = tensor_hyperplane(&g, &padded).unwrap();
        let raw = GeometricHyperplane {
            set: h.set.clone(),
            provenance: Provenance::Raw,
        };
        assert!(arises_from_embedding(&g, &raw));
    }

    #[test]
    fn gram_diagnostics_small() {
        let f3 = Field::of_order(3).unwrap();
        let r = gram_diagnostics(&f3, 2, 0);
        assert_eq!(r.gram_rank, 9);
        assert!(r.block_structure_ok);
        assert!(r.char2_isotropy_ok.is_none());
        assert!(r.pure_isotropy_ok);
        assert!(r.ok());

        let f2 = Field::of_order(2).unwrap();
        let r = gram_diagnostics(&f2, 2, 0);
        assert_eq!(r.gram_rank, 9);
        assert_eq!(r.char2_isotropy_ok, Some(true));
        assert!(r.char2_exhaustive);
        assert!(r.ok());
    }
}
