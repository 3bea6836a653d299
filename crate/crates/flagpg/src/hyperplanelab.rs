//! Generic subspace and hyperplane machinery over a flag geometry.
//!
//! A subspace is a flag set that swallows any line meeting it twice; a
//! geometric hyperplane is a proper subset meeting every line in exactly 1
//! or q+1 flags. Closure runs a worklist over the lines touched by newly
//! added flags. Maximality is tested against every external flag, not one
//! per component: the claims being checked quantify universally and desk
//! scale affords it.

use crate::bits::BitVec;
use crate::flaggeometry::FlagGeometry;
use std::collections::VecDeque;
use thiserror::Error;

/// Membership bitmap over the flag indices of one geometry.
pub type FlagSet = BitVec;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LabError {
    #[error("the flag set is not a geometric hyperplane (line {line} meets it in {count} flags)")]
    NotAHyperplane { line: u32, count: usize },
}

/// Least subspace containing the given set: saturate every line with two or
/// more members. Idempotent, monotone and extensive.
pub fn subspace_closure(geom: &FlagGeometry, set: &FlagSet) -> FlagSet {
    let mut out = set.clone();
    let mut queued = BitVec::new(geom.line_count());
    let mut queue: VecDeque<u32> = VecDeque::new();
    for f in set.ones() {
        for &l in geom.lines_of_flag(f as u32) {
            if !queued.contains(l as usize) {
                queued.insert(l as usize);
                queue.push_back(l);
            }
        }
    }
    while let Some(l) = queue.pop_front() {
        queued.remove(l as usize);
        let line = geom.line(l);
        let inside = line.flags.iter().filter(|&&f| out.contains(f as usize)).count();
        if inside < 2 || inside == line.flags.len() {
            continue;
        }
        for &f in &line.flags {
            if !out.contains(f as usize) {
                out.insert(f as usize);
                for &l2 in geom.lines_of_flag(f) {
                    if l2 != l && !queued.contains(l2 as usize) {
                        queued.insert(l2 as usize);
                        queue.push_back(l2);
                    }
                }
            }
        }
    }
    out
}

/// Per-line tally outcome of the hyperplane test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperplaneCheck {
    pub ok: bool,
    /// First offending line and its member count, when not a hyperplane.
    pub violation: Option<(u32, usize)>,
}

/// True iff the set is proper and every line meets it in 1 or q+1 flags.
pub fn is_geometric_hyperplane(geom: &FlagGeometry, set: &FlagSet) -> HyperplaneCheck {
    if set.is_full() {
        return HyperplaneCheck {
            ok: false,
            violation: None,
        };
    }
    for (l, line) in geom.lines().iter().enumerate() {
        let inside = line.flags.iter().filter(|&&f| set.contains(f as usize)).count();
        if inside != 1 && inside != line.flags.len() {
            return HyperplaneCheck {
                ok: false,
                violation: Some((l as u32, inside)),
            };
        }
    }
    HyperplaneCheck {
        ok: true,
        violation: None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximalityCheck {
    pub ok: bool,
    /// External flag whose closure stalls, with the stalled closure size.
    pub witness: Option<(u32, usize)>,
}

/// A hyperplane is maximal when adjoining any external flag and closing up
/// yields the whole geometry. Tests every external flag.
pub fn is_maximal_hyperplane(
    geom: &FlagGeometry,
    set: &FlagSet,
) -> Result<MaximalityCheck, LabError> {
    require_hyperplane(geom, set)?;
    for f in set.complement().ones() {
        let mut augmented = set.clone();
        augmented.insert(f);
        let closed = subspace_closure(geom, &augmented);
        if !closed.is_full() {
            return Ok(MaximalityCheck {
                ok: false,
                witness: Some((f as u32, closed.count())),
            });
        }
    }
    Ok(MaximalityCheck { ok: true, witness: None })
}

/// Connectivity of the collinearity graph restricted to the complement.
pub fn complement_connected(geom: &FlagGeometry, set: &FlagSet) -> Result<bool, LabError> {
    require_hyperplane(geom, set)?;
    let complement = set.complement();
    let start = match complement.ones().next() {
        Some(f) => f,
        None => return Ok(true),
    };
    let mut seen = BitVec::new(geom.flag_count());
    seen.insert(start);
    let mut queue = VecDeque::from([start as u32]);
    let mut reached = 1;
    while let Some(u) = queue.pop_front() {
        for &v in geom.neighbors(u) {
            if complement.contains(v as usize) && !seen.contains(v as usize) {
                seen.insert(v as usize);
                reached += 1;
                queue.push_back(v);
            }
        }
    }
    Ok(reached == complement.count())
}

fn require_hyperplane(geom: &FlagGeometry, set: &FlagSet) -> Result<(), LabError> {
    let check = is_geometric_hyperplane(geom, set);
    if check.ok {
        Ok(())
    } else {
        let (line, count) = check.violation.unwrap_or((0, geom.flag_count()));
        Err(LabError::NotAHyperplane { line, count })
    }
}
