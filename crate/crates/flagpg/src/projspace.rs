//! Enumeration and incidence for PG(n, q): points, subspaces of any
//! dimension, hyperplanes, spans and meets.
//!
//! Points are canonical vectors (first nonzero coordinate 1), hyperplanes
//! canonical covectors, both indexed in the fixed enumeration order of
//! [`canonical_reps`]. Subspaces of higher dimension carry their reduced
//! echelon basis together with the explicit sorted list of point indices;
//! span/meet work on the echelon algebra, incidence-heavy loops use the
//! index lists.

use crate::bits::BitVec;
use crate::exactlinalg::{
    canonical_reps, canonicalize_slice, dot, echelonize, kernel_of_rows, Covector, Vector,
};
use crate::gf::{Fe, FieldRc};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProjError {
    #[error("dimension {dim} out of range for PG({n}, q)")]
    DimOutOfRange { dim: usize, n: usize },
    #[error("operands live in different ambient spaces")]
    AmbientMismatch,
}

/// A subspace of PG(n, q) in canonical form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjSubspace {
    /// Projective dimension (0 = point, 1 = line, n-2 = sub-hyperplane, ...).
    pub dim: usize,
    /// Reduced echelon basis rows; unique per subspace.
    pub basis: Vec<Vec<Fe>>,
    /// Sorted indices of the points it contains.
    pub points: Vec<u32>,
}

impl ProjSubspace {
    pub fn contains_point(&self, point: u32) -> bool {
        self.points.binary_search(&point).is_ok()
    }
}

/// The projective space PG(n, q) with its point and hyperplane enumerations.
#[derive(Clone)]
pub struct ProjSpace {
    field: FieldRc,
    n: usize,
    points: Vec<Vector>,
    point_ids: HashMap<Vec<Fe>, u32>,
    hyps: Vec<Covector>,
    hyp_ids: HashMap<Vec<Fe>, u32>,
    points_on_hyp: Vec<Vec<u32>>,
    hyps_on_point: Vec<Vec<u32>>,
    hyp_masks: Vec<BitVec>,
}

impl std::fmt::Debug for ProjSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PG({}, {})", self.n, self.field.q())
    }
}

impl ProjSpace {
    pub fn new(field: FieldRc, n: usize) -> ProjSpace {
        assert!(n >= 1, "PG(n, q) needs n >= 1");
        let q = field.q();
        let reps = canonical_reps(q, n + 1);
        let points: Vec<Vector> = reps
            .iter()
            .map(|r| Vector::new(field.clone(), r.clone()))
            .collect();
        let point_ids: HashMap<Vec<Fe>, u32> = reps
            .iter()
            .enumerate()
            .map(|(i, r)| (r.clone(), i as u32))
            .collect();
        let hyps: Vec<Covector> = reps
            .iter()
            .map(|r| Covector::new(field.clone(), r.clone()))
            .collect();
        let hyp_ids = point_ids.clone();
        let np = points.len();
        let mut points_on_hyp = vec![Vec::new(); np];
        let mut hyps_on_point = vec![Vec::new(); np];
        let mut hyp_masks = vec![BitVec::new(np); np];
        for (h, xi) in hyps.iter().enumerate() {
            for (p, x) in points.iter().enumerate() {
                if dot(&field, &xi.coords, &x.coords) == 0 {
                    points_on_hyp[h].push(p as u32);
                    hyps_on_point[p].push(h as u32);
                    hyp_masks[h].insert(p);
                }
            }
        }
        ProjSpace {
            field,
            n,
            points,
            point_ids,
            hyps,
            hyp_ids,
            points_on_hyp,
            hyps_on_point,
            hyp_masks,
        }
    }

    pub fn field(&self) -> &FieldRc {
        &self.field
    }
    pub fn q(&self) -> u32 {
        self.field.q()
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn point_count(&self) -> usize {
        self.points.len()
    }
    pub fn hyp_count(&self) -> usize {
        self.hyps.len()
    }
    pub fn point(&self, id: u32) -> &Vector {
        &self.points[id as usize]
    }
    pub fn hyp(&self, id: u32) -> &Covector {
        &self.hyps[id as usize]
    }
    pub fn points_on_hyp(&self, h: u32) -> &[u32] {
        &self.points_on_hyp[h as usize]
    }
    pub fn hyps_on_point(&self, p: u32) -> &[u32] {
        &self.hyps_on_point[p as usize]
    }
    pub fn hyp_mask(&self, h: u32) -> &BitVec {
        &self.hyp_masks[h as usize]
    }

    /// Index of the point represented by any nonzero vector.
    pub fn point_index(&self, coords: &[Fe]) -> Option<u32> {
        self.point_ids
            .get(&canonicalize_slice(&self.field, coords))
            .copied()
    }

    /// Index of the hyperplane represented by any nonzero covector.
    pub fn hyp_index(&self, coords: &[Fe]) -> Option<u32> {
        self.hyp_ids
            .get(&canonicalize_slice(&self.field, coords))
            .copied()
    }

    pub fn point_incident_hyp(&self, p: u32, h: u32) -> bool {
        self.hyp_masks[h as usize].contains(p as usize)
    }

    /// Build a subspace from spanning rows. None for the zero span.
    pub fn subspace_from_rows(&self, rows: &[Vec<Fe>]) -> Option<ProjSubspace> {
        let mut work: Vec<Vec<Fe>> = rows.to_vec();
        let ech = echelonize(&self.field, &mut work);
        if ech.rank == 0 {
            return None;
        }
        work.truncate(ech.rank);
        let mut points: Vec<u32> = canonical_reps(self.q(), ech.rank)
            .iter()
            .map(|coef| {
                let mut v = vec![0; self.n + 1];
                for (ci, row) in coef.iter().zip(&work) {
                    for (j, &rj) in row.iter().enumerate() {
                        v[j] = self.field.add(v[j], self.field.mul(*ci, rj));
                    }
                }
                self.point_index(&v).expect("span point exists")
            })
            .collect();
        points.sort_unstable();
        Some(ProjSubspace {
            dim: ech.rank - 1,
            basis: work,
            points,
        })
    }

    pub fn subspace_of_points(&self, ids: &[u32]) -> Option<ProjSubspace> {
        let rows: Vec<Vec<Fe>> = ids
            .iter()
            .map(|&i| self.points[i as usize].coords.clone())
            .collect();
        self.subspace_from_rows(&rows)
    }

    /// The smallest subspace containing every part.
    pub fn span(&self, parts: &[&ProjSubspace]) -> Result<ProjSubspace, ProjError> {
        let mut rows = Vec::new();
        for p in parts {
            if p.basis.first().map(|r| r.len()) != Some(self.n + 1) {
                return Err(ProjError::AmbientMismatch);
            }
            rows.extend(p.basis.iter().cloned());
        }
        self.subspace_from_rows(&rows)
            .ok_or(ProjError::AmbientMismatch)
    }

    /// The largest common subspace, or None when the parts are disjoint.
    pub fn meet(
        &self,
        a: &ProjSubspace,
        b: &ProjSubspace,
    ) -> Result<Option<ProjSubspace>, ProjError> {
        if a.basis.first().map(|r| r.len()) != Some(self.n + 1)
            || b.basis.first().map(|r| r.len()) != Some(self.n + 1)
        {
            return Err(ProjError::AmbientMismatch);
        }
        let mut ann = self.annihilator(a);
        ann.extend(self.annihilator(b));
        let basis = kernel_of_rows(&self.field, &ann, self.n + 1);
        Ok(self.subspace_from_rows(&basis))
    }

    /// Covectors vanishing on the subspace, as a kernel basis.
    pub fn annihilator(&self, s: &ProjSubspace) -> Vec<Vec<Fe>> {
        kernel_of_rows(&self.field, &s.basis, self.n + 1)
    }

    /// Hyperplane indices containing the subspace.
    pub fn hyps_containing(&self, s: &ProjSubspace) -> Vec<u32> {
        (0..self.hyp_count() as u32)
            .filter(|&h| {
                s.basis
                    .iter()
                    .all(|row| dot(&self.field, &self.hyps[h as usize].coords, row) == 0)
            })
            .collect()
    }

    pub fn point_as_subspace(&self, p: u32) -> ProjSubspace {
        ProjSubspace {
            dim: 0,
            basis: vec![self.points[p as usize].coords.clone()],
            points: vec![p],
        }
    }

    /// All subspaces of the given projective dimension, enumerated by reduced
    /// echelon pivot patterns and sorted by their point lists.
    pub fn subspaces(&self, dim: usize) -> Result<Vec<ProjSubspace>, ProjError> {
        if dim > self.n {
            return Err(ProjError::DimOutOfRange { dim, n: self.n });
        }
        if dim == 0 {
            return Ok((0..self.point_count() as u32)
                .map(|p| self.point_as_subspace(p))
                .collect());
        }
        let rows = dim + 1;
        let cols = self.n + 1;
        let q = self.q();
        let mut out = Vec::new();
        for pivots in combinations(cols, rows) {
            // free positions: to the right of each pivot, outside pivot columns
            let mut free = Vec::new();
            for (i, &ci) in pivots.iter().enumerate() {
                for j in ci + 1..cols {
                    if !pivots.contains(&j) {
                        free.push((i, j));
                    }
                }
            }
            let mut fill = vec![0u32; free.len()];
            loop {
                let mut basis = vec![vec![0; cols]; rows];
                for (i, &ci) in pivots.iter().enumerate() {
                    basis[i][ci] = 1;
                }
                for (&(i, j), &v) in free.iter().zip(&fill) {
                    basis[i][j] = v;
                }
                let sub = self
                    .subspace_from_rows(&basis)
                    .expect("pivot pattern spans");
                debug_assert_eq!(sub.dim, dim);
                out.push(sub);
                // odometer over the free entries
                let mut pos = 0;
                loop {
                    if pos == fill.len() {
                        break;
                    }
                    fill[pos] += 1;
                    if fill[pos] < q {
                        break;
                    }
                    fill[pos] = 0;
                    pos += 1;
                }
                if pos == fill.len() {
                    break;
                }
            }
        }
        out.sort_by(|a, b| a.points.cmp(&b.points));
        Ok(out)
    }

    pub fn format_point(&self, p: u32) -> String {
        format!("{}", self.points[p as usize])
    }

    pub fn format_hyp(&self, h: u32) -> String {
        format!("{}", self.hyps[h as usize])
    }
}

fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    rec(0, n, r, &mut cur, &mut out);
    out
}

/// Number of r-dimensional linear subspaces of F_q^m (the Gaussian binomial).
pub fn gaussian_binomial(m: u32, r: u32, q: u32) -> u128 {
    if r > m {
        return 0;
    }
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..r {
        num *= (q as u128).pow(m - i) - 1;
        den *= (q as u128).pow(i + 1) - 1;
    }
    num / den
}

/// Number of points of PG(d, q): (q^(d+1) - 1)/(q - 1).
pub fn theta(d: u32, q: u32) -> u128 {
    gaussian_binomial(d + 1, 1, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;
    use std::sync::Arc;

    fn pg(n: usize, q: u32) -> ProjSpace {
        ProjSpace::new(Arc::new(Field::of_order(q).unwrap()), n)
    }

    #[test]
    fn point_line_plane_counts_pg32() {
        let pg = pg(3, 2);
        assert_eq!(pg.point_count(), 15);
        assert_eq!(pg.subspaces(1).unwrap().len(), 35);
        assert_eq!(pg.subspaces(2).unwrap().len(), 15);
        assert_eq!(pg.hyp_count(), 15);
    }

    #[test]
    fn counts_match_gaussian_binomials() {
        for (n, q) in [(2usize, 2u32), (2, 3), (3, 2), (3, 3), (5, 2)] {
            let pg = pg(n, q);
            for dim in 0..=n {
                let expect = gaussian_binomial(n as u32 + 1, dim as u32 + 1, q) as usize;
                assert_eq!(
                    pg.subspaces(dim).unwrap().len(),
                    expect,
                    "dim {} of PG({},{})",
                    dim,
                    n,
                    q
                );
            }
            // duality
            assert_eq!(pg.point_count(), pg.hyp_count());
            if n == 3 {
                assert_eq!(
                    pg.subspaces(1).unwrap().len(),
                    pg.subspaces(n - 2).unwrap().len()
                );
            }
        }
    }

    #[test]
    fn every_line_has_q_plus_1_points() {
        for (n, q) in [(2usize, 3u32), (3, 2)] {
            let pg = pg(n, q);
            for line in pg.subspaces(1).unwrap() {
                assert_eq!(line.points.len(), q as usize + 1);
            }
        }
    }

    #[test]
    fn span_examples() {
        let pg = pg(3, 2);
        let e0 = pg.point_index(&[1, 0, 0, 0]).unwrap();
        let e1 = pg.point_index(&[0, 1, 0, 0]).unwrap();
        let line = pg.subspace_of_points(&[e0, e1]).unwrap();
        let expect: Vec<u32> = [
            pg.point_index(&[1, 0, 0, 0]).unwrap(),
            pg.point_index(&[0, 1, 0, 0]).unwrap(),
            pg.point_index(&[1, 1, 0, 0]).unwrap(),
        ]
        .into_iter()
        .collect();
        let mut sorted = expect.clone();
        sorted.sort_unstable();
        assert_eq!(line.points, sorted);

        // span of a line with a point on it is the line
        let again = pg
            .span(&[&line, &pg.point_as_subspace(e0)])
            .unwrap();
        assert_eq!(again, line);

        // two distinct planes span the whole space
        let planes = pg.subspaces(2).unwrap();
        let whole = pg.span(&[&planes[0], &planes[1]]).unwrap();
        assert_eq!(whole.dim, 3);
    }

    #[test]
    fn meet_examples() {
        let pg = pg(3, 2);
        let planes = pg.subspaces(2).unwrap();
        let m = pg.meet(&planes[0], &planes[1]).unwrap().unwrap();
        assert_eq!(m.dim, 1);

        // plane x3 = 0 meets the line <e0, e3> in the point [1:0:0:0]
        let h = pg.hyp_index(&[0, 0, 0, 1]).unwrap();
        let plane = pg
            .subspace_of_points(pg.points_on_hyp(h))
            .unwrap();
        let e0 = pg.point_index(&[1, 0, 0, 0]).unwrap();
        let e3 = pg.point_index(&[0, 0, 0, 1]).unwrap();
        let line = pg.subspace_of_points(&[e0, e3]).unwrap();
        let pt = pg.meet(&plane, &line).unwrap().unwrap();
        assert_eq!(pt.dim, 0);
        assert_eq!(pt.points, vec![e0]);

        // two disjoint lines meet in nothing
        let l1 = pg
            .subspace_of_points(&[e0, pg.point_index(&[0, 1, 0, 0]).unwrap()])
            .unwrap();
        let l2 = pg
            .subspace_of_points(&[pg.point_index(&[0, 0, 1, 0]).unwrap(), e3])
            .unwrap();
        assert_eq!(pg.meet(&l1, &l2).unwrap(), None);
    }

    #[test]
    fn incidence_examples() {
        let pg = pg(3, 2);
        let h = pg.hyp_index(&[0, 0, 0, 1]).unwrap(); // x3 = 0
        let e0 = pg.point_index(&[1, 0, 0, 0]).unwrap();
        let e3 = pg.point_index(&[0, 0, 0, 1]).unwrap();
        assert!(pg.point_incident_hyp(e0, h));
        assert!(!pg.point_incident_hyp(e3, h));
        let e1 = pg.point_index(&[0, 1, 0, 0]).unwrap();
        let line = pg.subspace_of_points(&[e0, e1]).unwrap();
        let p = pg.point_index(&[1, 1, 0, 0]).unwrap();
        assert!(line.contains_point(p));
    }

    #[test]
    fn modular_law_on_line_pairs() {
        // linear dimensions: dim a + dim b = dim span + dim meet
        let pg = pg(3, 2);
        let lines = pg.subspaces(1).unwrap();
        for a in &lines {
            for b in &lines {
                let span = pg.span(&[a, b]).unwrap();
                let meet_dim = match pg.meet(a, b).unwrap() {
                    Some(m) => m.dim + 1,
                    None => 0,
                };
                assert_eq!(4, span.dim + 1 + meet_dim);
            }
        }
    }

    #[test]
    fn subspace_point_lists_consistent_with_masks() {
        let pg = pg(2, 3);
        for h in 0..pg.hyp_count() as u32 {
            let pts = pg.points_on_hyp(h);
            assert_eq!(pts.len(), 4); // lines of PG(2,3) have q+1 points
            for &p in pts {
                assert!(pg.point_incident_hyp(p, h));
            }
        }
    }

    #[test]
    fn dim_out_of_range() {
        let pg = pg(2, 2);
        assert_eq!(
            pg.subspaces(3).unwrap_err(),
            ProjError::DimOutOfRange { dim: 3, n: 2 }
        );
    }
}
