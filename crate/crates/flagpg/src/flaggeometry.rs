//! The point-line geometry of incident point-hyperplane pairs of PG(n, q).
//!
//! Points of the geometry are flags (p, H) with p a point of PG(n, q) lying
//! on the hyperplane H. Lines come in two families:
//!
//! * pencil lines: fix a point p and a codimension-2 subspace L through p;
//!   the line is every (p, H) with H containing L;
//! * axial lines: fix a projective line l inside a hyperplane H; the line is
//!   every (x, H) with x on l.
//!
//! Two flags are collinear exactly when they share the point or share the
//! hyperplane. The closed-form pair classification below is an O(1) claim
//! about this graph; breadth-first search is kept alongside it as the
//! independent oracle.

use crate::exactlinalg::Vector;
use crate::gf::FieldRc;
use crate::projspace::{ProjSpace, ProjSubspace};
use std::collections::VecDeque;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("flag count {flags} exceeds the configured cap {cap}")]
    SizeCap { flags: usize, cap: usize },
    #[error("the two flags do not form a polar pair")]
    NotPolar,
}

/// An incident point-hyperplane pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Flag {
    pub point: u32,
    pub hyp: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LineKind {
    /// {(p, H) : H contains the codimension-2 subspace}, based at `point`.
    Pencil { point: u32, subhyp: u32 },
    /// {(x, H) : x on the projective line}, inside the hyperplane `hyp`.
    Axial { line: u32, hyp: u32 },
}

#[derive(Debug, Clone)]
pub struct FlagLine {
    pub kind: LineKind,
    /// Sorted flag indices; always q + 1 of them.
    pub flags: Vec<u32>,
}

/// Distance-0/1/2/2/3 classification of a flag pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairClass {
    Equal,
    Collinear,
    Polar,
    Special,
    Opposite,
}

impl PairClass {
    pub fn distance(self) -> u32 {
        match self {
            PairClass::Equal => 0,
            PairClass::Collinear => 1,
            PairClass::Polar | PairClass::Special => 2,
            PairClass::Opposite => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PairClass::Equal => "EQUAL",
            PairClass::Collinear => "COLLINEAR",
            PairClass::Polar => "POLAR",
            PairClass::Special => "SPECIAL",
            PairClass::Opposite => "OPPOSITE",
        }
    }
}

/// Base of a maximal singular subspace: all flags through one point, or all
/// flags inside one hyperplane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularBase {
    Point(u32),
    Hyperplane(u32),
}

#[derive(Debug, Clone)]
pub struct SingularSubspace {
    pub base: SingularBase,
    /// Sorted flag indices.
    pub flags: Vec<u32>,
}

pub struct FlagGeometry {
    pg: ProjSpace,
    lines1: Vec<ProjSubspace>,
    subhyps: Vec<ProjSubspace>,
    flags: Vec<Flag>,
    flag_ids: Vec<u32>, // dense point-major table, u32::MAX = not a flag
    lines: Vec<FlagLine>,
    lines_of_flag: Vec<Vec<u32>>,
    neighbors: Vec<Vec<u32>>,
}

impl std::fmt::Debug for FlagGeometry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "FlagGeometry({:?}: {} flags, {} lines)",
            self.pg,
            self.flags.len(),
            self.lines.len()
        )
    }
}

const NO_FLAG: u32 = u32::MAX;

impl FlagGeometry {
    /// Enumerate the whole geometry. Fails early when the flag count would
    /// exceed `cap_flags`.
    pub fn build(field: FieldRc, n: usize, cap_flags: usize) -> Result<FlagGeometry, GeometryError> {
        assert!(n >= 2, "the flag geometry needs n >= 2");
        let pg = ProjSpace::new(field, n);
        let flag_count: usize = (0..pg.point_count() as u32)
            .map(|p| pg.hyps_on_point(p).len())
            .sum();
        if flag_count > cap_flags {
            return Err(GeometryError::SizeCap {
                flags: flag_count,
                cap: cap_flags,
            });
        }

        let mut flags = Vec::with_capacity(flag_count);
        let mut flag_ids = vec![NO_FLAG; pg.point_count() * pg.hyp_count()];
        for p in 0..pg.point_count() as u32 {
            for &h in pg.hyps_on_point(p) {
                flag_ids[p as usize * pg.hyp_count() + h as usize] = flags.len() as u32;
                flags.push(Flag { point: p, hyp: h });
            }
        }

        let lines1 = pg.subspaces(1).expect("lines exist for n >= 2");
        let subhyps = pg.subspaces(n - 2).expect("sub-hyperplanes exist");

        let mut lines: Vec<FlagLine> = Vec::new();
        for (si, sh) in subhyps.iter().enumerate() {
            let hs = pg.hyps_containing(sh);
            debug_assert_eq!(hs.len(), pg.q() as usize + 1);
            for &p in &sh.points {
                let mut members: Vec<u32> = hs
                    .iter()
                    .map(|&h| flag_ids[p as usize * pg.hyp_count() + h as usize])
                    .collect();
                debug_assert!(members.iter().all(|&f| f != NO_FLAG));
                members.sort_unstable();
                lines.push(FlagLine {
                    kind: LineKind::Pencil {
                        point: p,
                        subhyp: si as u32,
                    },
                    flags: members,
                });
            }
        }
        for (li, l) in lines1.iter().enumerate() {
            for h in pg.hyps_containing(l) {
                let mut members: Vec<u32> = l
                    .points
                    .iter()
                    .map(|&p| flag_ids[p as usize * pg.hyp_count() + h as usize])
                    .collect();
                debug_assert!(members.iter().all(|&f| f != NO_FLAG));
                members.sort_unstable();
                lines.push(FlagLine {
                    kind: LineKind::Axial {
                        line: li as u32,
                        hyp: h,
                    },
                    flags: members,
                });
            }
        }

        let mut lines_of_flag = vec![Vec::new(); flags.len()];
        let mut neighbors: Vec<Vec<u32>> = vec![Vec::new(); flags.len()];
        for (li, line) in lines.iter().enumerate() {
            for &f in &line.flags {
                lines_of_flag[f as usize].push(li as u32);
                for &g in &line.flags {
                    if g != f {
                        neighbors[f as usize].push(g);
                    }
                }
            }
        }
        for nb in &mut neighbors {
            nb.sort_unstable();
            // a collinear pair lies on exactly one common line, so there is
            // nothing to deduplicate; assert that in debug builds
            debug_assert!(nb.windows(2).all(|w| w[0] != w[1]));
        }

        Ok(FlagGeometry {
            pg,
            lines1,
            subhyps,
            flags,
            flag_ids,
            lines,
            lines_of_flag,
            neighbors,
        })
    }

    pub fn pg(&self) -> &ProjSpace {
        &self.pg
    }
    pub fn q(&self) -> u32 {
        self.pg.q()
    }
    pub fn flag_count(&self) -> usize {
        self.flags.len()
    }
    pub fn line_count(&self) -> usize {
        self.lines.len()
    }
    pub fn flag(&self, id: u32) -> Flag {
        self.flags[id as usize]
    }
    pub fn line(&self, id: u32) -> &FlagLine {
        &self.lines[id as usize]
    }
    pub fn lines(&self) -> &[FlagLine] {
        &self.lines
    }
    pub fn lines_of_flag(&self, f: u32) -> &[u32] {
        &self.lines_of_flag[f as usize]
    }
    pub fn neighbors(&self, f: u32) -> &[u32] {
        &self.neighbors[f as usize]
    }
    pub fn proj_lines(&self) -> &[ProjSubspace] {
        &self.lines1
    }
    pub fn subhyperplanes(&self) -> &[ProjSubspace] {
        &self.subhyps
    }

    pub fn flag_id(&self, point: u32, hyp: u32) -> Option<u32> {
        let id = self.flag_ids[point as usize * self.pg.hyp_count() + hyp as usize];
        (id != NO_FLAG).then_some(id)
    }

    /// Closed-form classification of a flag pair by incidences alone.
    pub fn pair_class(&self, a: u32, b: u32) -> PairClass {
        if a == b {
            return PairClass::Equal;
        }
        let (fa, fb) = (self.flags[a as usize], self.flags[b as usize]);
        if fa.point == fb.point || fa.hyp == fb.hyp {
            return PairClass::Collinear;
        }
        let p_in_k = self.pg.point_incident_hyp(fa.point, fb.hyp);
        let q_in_h = self.pg.point_incident_hyp(fb.point, fa.hyp);
        match (p_in_k, q_in_h) {
            (true, true) => PairClass::Polar,
            (false, false) => PairClass::Opposite,
            _ => PairClass::Special,
        }
    }

    /// Graph distances from one flag to all flags, by breadth-first search
    /// over the collinearity graph. This is the oracle for `pair_class`.
    pub fn bfs_distances(&self, from: u32) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.flags.len()];
        dist[from as usize] = 0;
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            for &v in self.neighbors(u) {
                if dist[v as usize] == u32::MAX {
                    dist[v as usize] = dist[u as usize] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn bfs_distance(&self, a: u32, b: u32) -> u32 {
        self.bfs_distances(a)[b as usize]
    }

    /// Diameter of the collinearity graph.
    pub fn diameter(&self) -> u32 {
        (0..self.flags.len() as u32)
            .map(|f| {
                self.bfs_distances(f)
                    .into_iter()
                    .max()
                    .expect("nonempty geometry")
            })
            .max()
            .expect("nonempty geometry")
    }

    /// The unique symp through a polar pair: all flags (x, X) with x on the
    /// line joining the two points and X through the meet of the two
    /// hyperplanes. Returns the sorted flag indices; (q+1)^2 of them forming
    /// a grid.
    pub fn symp(&self, a: u32, b: u32) -> Result<Vec<u32>, GeometryError> {
        if self.pair_class(a, b) != PairClass::Polar {
            return Err(GeometryError::NotPolar);
        }
        let (fa, fb) = (self.flags[a as usize], self.flags[b as usize]);
        let line = self
            .pg
            .subspace_of_points(&[fa.point, fb.point])
            .expect("distinct points span a line");
        let ha = self
            .pg
            .subspace_of_points(self.pg.points_on_hyp(fa.hyp))
            .expect("hyperplane");
        let hb = self
            .pg
            .subspace_of_points(self.pg.points_on_hyp(fb.hyp))
            .expect("hyperplane");
        let meet = self
            .pg
            .meet(&ha, &hb)
            .expect("same ambient")
            .expect("distinct hyperplanes meet in codimension 2");
        let mut out = Vec::new();
        for &x in &line.points {
            for h in self.pg.hyps_containing(&meet) {
                out.push(
                    self.flag_id(x, h)
                        .expect("x lies on the joining line inside every such hyperplane"),
                );
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Flags collinear with both `a` and `b` (excluding the pair itself).
    pub fn common_neighbors(&self, a: u32, b: u32) -> Vec<u32> {
        let (na, nb) = (self.neighbors(a), self.neighbors(b));
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < na.len() && j < nb.len() {
            match na[i].cmp(&nb[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push(na[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out
    }

    /// The maximal singular subspace based at a point or at a hyperplane.
    pub fn singular_subspace(&self, base: SingularBase) -> SingularSubspace {
        let mut flags: Vec<u32> = match base {
            SingularBase::Point(p) => self
                .pg
                .hyps_on_point(p)
                .iter()
                .map(|&h| self.flag_id(p, h).expect("incident"))
                .collect(),
            SingularBase::Hyperplane(h) => self
                .pg
                .points_on_hyp(h)
                .iter()
                .map(|&p| self.flag_id(p, h).expect("incident"))
                .collect(),
        };
        flags.sort_unstable();
        SingularSubspace { base, flags }
    }

    /// Girth of the bipartite flag-line incidence graph.
    pub fn incidence_girth(&self) -> u32 {
        let nf = self.flags.len();
        let nv = nf + self.lines.len();
        let adj = |v: usize| -> Vec<usize> {
            if v < nf {
                self.lines_of_flag[v]
                    .iter()
                    .map(|&l| nf + l as usize)
                    .collect()
            } else {
                self.lines[v - nf].flags.iter().map(|&f| f as usize).collect()
            }
        };
        let mut best = u32::MAX;
        for start in 0..nv {
            let mut dist = vec![u32::MAX; nv];
            let mut parent = vec![usize::MAX; nv];
            dist[start] = 0;
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                if 2 * dist[u] + 1 >= best {
                    break;
                }
                for v in adj(u) {
                    if dist[v] == u32::MAX {
                        dist[v] = dist[u] + 1;
                        parent[v] = u;
                        queue.push_back(v);
                    } else if parent[u] != v {
                        best = best.min(dist[u] + dist[v] + 1);
                    }
                }
            }
        }
        best
    }

    pub fn format_flag(&self, f: u32) -> String {
        let flag = self.flags[f as usize];
        format!(
            "({},{})",
            self.pg.format_point(flag.point),
            self.pg.format_hyp(flag.hyp)
        )
    }

    pub fn field(&self) -> &FieldRc {
        self.pg.field()
    }

    pub fn point_vector(&self, f: u32) -> &Vector {
        self.pg.point(self.flags[f as usize].point)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;
    use std::sync::Arc;

    fn geom(n: usize, q: u32) -> FlagGeometry {
        FlagGeometry::build(Arc::new(Field::of_order(q).unwrap()), n, 1 << 20).unwrap()
    }

    #[test]
    fn flag_and_line_counts() {
        let g32 = geom(3, 2);
        assert_eq!(g32.flag_count(), 105);
        assert_eq!(g32.line_count(), 210);
        for line in g32.lines() {
            assert_eq!(line.flags.len(), 3);
        }
        // each flag on 2 * (q^(n-1) - 1)/(q - 1) = 6 lines
        for f in 0..105 {
            assert_eq!(g32.lines_of_flag(f).len(), 6);
        }

        let g22 = geom(2, 2);
        assert_eq!(g22.flag_count(), 21);
        assert_eq!(g22.line_count(), 14);
        for f in 0..21 {
            assert_eq!(g22.lines_of_flag(f).len(), 2);
        }

        let g23 = geom(2, 3);
        assert_eq!(g23.flag_count(), 52);
        assert_eq!(g23.line_count(), 26);
    }

    #[test]
    fn the_two_line_families_have_equal_size() {
        for (n, q) in [(2, 2), (3, 2), (2, 3)] {
            let g = geom(n, q);
            let pencils = g
                .lines()
                .iter()
                .filter(|l| matches!(l.kind, LineKind::Pencil { .. }))
                .count();
            assert_eq!(2 * pencils, g.line_count());
        }
    }

    #[test]
    fn size_cap_is_enforced() {
        let err = FlagGeometry::build(Arc::new(Field::of_order(2).unwrap()), 3, 50).unwrap_err();
        assert_eq!(
            err,
            GeometryError::SizeCap {
                flags: 105,
                cap: 50
            }
        );
    }

    #[test]
    fn pair_class_examples() {
        let g = geom(3, 2);
        let pg = g.pg();
        let p0 = pg.point_index(&[1, 0, 0, 0]).unwrap();
        let p1 = pg.point_index(&[0, 1, 0, 0]).unwrap();
        let p3 = pg.point_index(&[0, 0, 0, 1]).unwrap();
        let h3 = pg.hyp_index(&[0, 0, 0, 1]).unwrap(); // x3 = 0
        let h2 = pg.hyp_index(&[0, 0, 1, 0]).unwrap(); // x2 = 0
        let h0 = pg.hyp_index(&[1, 0, 0, 0]).unwrap(); // x0 = 0

        let a = g.flag_id(p0, h3).unwrap();
        let b = g.flag_id(p0, h2).unwrap();
        assert_eq!(g.pair_class(a, b), PairClass::Collinear);

        let c = g.flag_id(p3, h0).unwrap();
        assert_eq!(g.pair_class(a, c), PairClass::Opposite);
        assert_eq!(g.bfs_distance(a, c), 3);

        let d = g.flag_id(p1, h2).unwrap();
        assert_eq!(g.pair_class(a, d), PairClass::Polar);
        assert_eq!(g.bfs_distance(a, d), 2);
    }

    #[test]
    fn classification_matches_bfs_exhaustively() {
        for (n, q) in [(2, 2), (3, 2), (2, 3)] {
            let g = geom(n, q);
            for a in 0..g.flag_count() as u32 {
                let dist = g.bfs_distances(a);
                for b in 0..g.flag_count() as u32 {
                    assert_eq!(
                        g.pair_class(a, b).distance(),
                        dist[b as usize],
                        "flags {} and {} of A_{{{},{{1,n}}}}(GF({}))",
                        a,
                        b,
                        n,
                        q
                    );
                }
            }
            assert_eq!(g.diameter(), 3);
        }
    }

    #[test]
    fn hexagon_girth() {
        assert_eq!(geom(2, 2).incidence_girth(), 12);
        assert_eq!(geom(2, 3).incidence_girth(), 12);
    }

    #[test]
    fn flag_display_format() {
        let g = geom(3, 2);
        let pg = g.pg();
        let f = g
            .flag_id(
                pg.point_index(&[1, 1, 1, 0]).unwrap(),
                pg.hyp_index(&[0, 1, 1, 1]).unwrap(),
            )
            .unwrap();
        assert_eq!(g.format_flag(f), "([1:1:1:0],[0:1:1:1])");
    }

    #[test]
    fn symp_is_a_grid() {
        let g = geom(3, 2);
        let pg = g.pg();
        let a = g
            .flag_id(
                pg.point_index(&[1, 0, 0, 0]).unwrap(),
                pg.hyp_index(&[0, 0, 0, 1]).unwrap(),
            )
            .unwrap();
        let b = g
            .flag_id(
                pg.point_index(&[0, 1, 0, 0]).unwrap(),
                pg.hyp_index(&[0, 0, 1, 0]).unwrap(),
            )
            .unwrap();
        assert_eq!(g.pair_class(a, b), PairClass::Polar);
        let symp = g.symp(a, b).unwrap();
        assert_eq!(symp.len(), 9);
        assert!(symp.binary_search(&a).is_ok());
        assert!(symp.binary_search(&b).is_ok());
        // inside the symp every flag sees exactly 2q others
        for &f in &symp {
            let inside = g
                .neighbors(f)
                .iter()
                .filter(|x| symp.binary_search(x).is_ok())
                .count();
            assert_eq!(inside, 4);
        }
        // the two common neighbors of the defining pair lie in the symp
        let common = g.common_neighbors(a, b);
        assert_eq!(common.len(), 2);
        for c in common {
            assert!(symp.binary_search(&c).is_ok());
        }
        // non-polar input is rejected
        let e = g.symp(a, a).unwrap_err();
        assert_eq!(e, GeometryError::NotPolar);
    }

    #[test]
    fn singular_subspace_examples() {
        let g = geom(3, 2);
        let pg = g.pg();
        let a = pg.point_index(&[1, 0, 0, 0]).unwrap();
        let ma = g.singular_subspace(SingularBase::Point(a));
        assert_eq!(ma.flags.len(), 7);
        // pairwise collinear
        for &x in &ma.flags {
            for &y in &ma.flags {
                assert!(g.pair_class(x, y).distance() <= 1);
            }
        }
        // M_A and M_a meet in exactly the flag (a, A) when a lies on A
        let h = pg.hyps_on_point(a)[0];
        let mh = g.singular_subspace(SingularBase::Hyperplane(h));
        let both: Vec<u32> = ma
            .flags
            .iter()
            .copied()
            .filter(|f| mh.flags.binary_search(f).is_ok())
            .collect();
        assert_eq!(both, vec![g.flag_id(a, h).unwrap()]);
        // an external flag is collinear with at most one member
        for f in 0..g.flag_count() as u32 {
            if ma.flags.binary_search(&f).is_ok() {
                continue;
            }
            let touching = ma
                .flags
                .iter()
                .filter(|&&m| g.pair_class(f, m) == PairClass::Collinear)
                .count();
            assert!(touching <= 1);
        }
    }

    #[test]
    fn special_pair_unique_common_neighbor() {
        let g = geom(3, 2);
        for a in 0..g.flag_count() as u32 {
            for b in 0..g.flag_count() as u32 {
                if g.pair_class(a, b) != PairClass::Special {
                    continue;
                }
                let (fa, fb) = (g.flag(a), g.flag(b));
                // predicted: (p, K) when p lies in K, else (q, H)
                let predicted = if g.pg().point_incident_hyp(fa.point, fb.hyp) {
                    g.flag_id(fa.point, fb.hyp).unwrap()
                } else {
                    g.flag_id(fb.point, fa.hyp).unwrap()
                };
                assert_eq!(g.common_neighbors(a, b), vec![predicted]);
            }
        }
    }
}
