//! The open-frame monad: carrier of the sober reflection of X is the set of
//! completely prime filters on the frame of opens of X, topologized by the
//! sets A* = { filters containing A }.
//!
//! Filters are stored extensionally. Enumeration walks all upward-closed
//! subsets of the frame (the canonical element order is a linear extension of
//! inclusion, so up-sets can be generated directly) and keeps those passing
//! the filter conditions. The complete-primality condition is checked
//! literally against every subfamily when the frame is small enough for a
//! join table; beyond that the equivalent single test on the complement's
//! join is used.

use std::collections::HashMap;

use thiserror::Error;

use crate::space::{
    canonical_set_order, format_set, full_mask, generate_topology, ContinuousMap, FiniteSpace,
    PointSet, TopologyError,
};

/// Largest index count for Sierpinski powers unless a caller raises the cap.
pub const DEFAULT_INDEX_CAP: usize = 4;

/// Frames with at most this many elements get the literal all-subfamilies
/// primality check via a join table.
const JOIN_TABLE_LIMIT: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SoberError {
    #[error("point-space family is not a topology: {source}")]
    NotATopology { source: TopologyError },
    #[error("unit at {context} is not a homeomorphism, so the multiplication does not exist")]
    UnitNotIso { context: String },
    #[error("sierpinski power index count {requested} exceeds the cap {cap}")]
    IndexCapExceeded { requested: usize, cap: usize },
    #[error("family entry {index} is {}, which is not open in the domain", format_set(*.subset))]
    NotOpen { index: usize, subset: PointSet },
}

/// The frame of open sets of a base space, elements in canonical set order
/// (bottom first, top last). Meet and join are intersection and union;
/// closure and distributivity are verified on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpenFrame {
    base: FiniteSpace,
    elements: Vec<PointSet>,
}

impl OpenFrame {
    pub fn of(x: &FiniteSpace) -> Self {
        let elements: Vec<PointSet> = x.opens().to_vec();
        let frame = OpenFrame { base: x.clone(), elements };
        frame.verify_lattice();
        frame
    }

    fn verify_lattice(&self) {
        let n = self.elements.len();
        assert!(n <= 63, "frame too large for element-index masks");
        for i in 0..n {
            for j in i..n {
                let meet = self.elements[i] & self.elements[j];
                let join = self.elements[i] | self.elements[j];
                assert!(self.element_index(meet).is_some(), "frame not closed under meet");
                assert!(self.element_index(join).is_some(), "frame not closed under join");
                for k in 0..n {
                    let e = self.elements[k];
                    assert!(
                        e & join == (e & self.elements[i]) | (e & self.elements[j]),
                        "distributivity failed"
                    );
                }
            }
        }
    }

    pub fn base(&self) -> &FiniteSpace {
        &self.base
    }

    pub fn elements(&self) -> &[PointSet] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn top(&self) -> PointSet {
        self.base.full_set()
    }

    pub fn bottom(&self) -> PointSet {
        0
    }

    pub fn element_index(&self, a: PointSet) -> Option<usize> {
        self.elements.binary_search_by(|probe| canonical_set_order(*probe, a)).ok()
    }

    /// Join of a subfamily given as an element-index mask.
    pub fn join_of(&self, subfamily: u64) -> PointSet {
        let mut acc = 0u64;
        for (i, &e) in self.elements.iter().enumerate() {
            if subfamily & (1u64 << i) != 0 {
                acc |= e;
            }
        }
        acc
    }

    /// Joins of every subfamily, indexed by subfamily mask. Only for small
    /// frames.
    fn join_table(&self) -> Vec<PointSet> {
        let n = self.elements.len();
        assert!(n <= JOIN_TABLE_LIMIT);
        let mut table = vec![0u64; 1usize << n];
        for m in 1..table.len() {
            let low = m.trailing_zeros() as usize;
            table[m] = table[m & (m - 1)] | self.elements[low];
        }
        table
    }

    /// Element-index mask of all supersets-or-equal of element `i` (its
    /// upward closure in the frame order).
    fn up_mask(&self, i: usize) -> u64 {
        let mut mask = 0u64;
        for (j, &e) in self.elements.iter().enumerate() {
            if self.elements[i] & !e == 0 {
                mask |= 1u64 << j;
            }
        }
        mask
    }
}

/// True iff `table` (element indices in `src`, one per src element index)
/// preserves top, bottom, binary meets, and all finite joins. Joins are
/// checked subfamily by subfamily on small frames, pairwise (plus the empty
/// join) otherwise.
pub fn is_frame_homomorphism(src: &OpenFrame, dst: &OpenFrame, table: &[usize]) -> bool {
    if table.len() != src.len() || table.iter().any(|&t| t >= dst.len()) {
        return false;
    }
    let src_els = src.elements();
    let dst_els = dst.elements();
    let top_ok = dst_els[table[src.element_index(src.top()).unwrap()]] == dst.top();
    let bot_ok = dst_els[table[src.element_index(src.bottom()).unwrap()]] == dst.bottom();
    if !top_ok || !bot_ok {
        return false;
    }
    let idx = |a: PointSet, frame: &OpenFrame| frame.element_index(a).expect("closed op");
    for i in 0..src.len() {
        for j in i..src.len() {
            let meet_src = idx(src_els[i] & src_els[j], src);
            if dst_els[table[meet_src]] != dst_els[table[i]] & dst_els[table[j]] {
                return false;
            }
            let join_src = idx(src_els[i] | src_els[j], src);
            if dst_els[table[join_src]] != dst_els[table[i]] | dst_els[table[j]] {
                return false;
            }
        }
    }
    if src.len() <= JOIN_TABLE_LIMIT {
        let joins = src.join_table();
        for m in 0..joins.len() {
            let join_src = idx(joins[m], src);
            let mut dst_join = 0u64;
            for i in 0..src.len() {
                if m & (1usize << i) != 0 {
                    dst_join |= dst_els[table[i]];
                }
            }
            if dst_els[table[join_src]] != dst_join {
                return false;
            }
        }
    }
    true
}

/// All upward-closed index subsets of a poset presented by `down_masks`,
/// where `down_masks[i]` holds every j <= i with element j below-or-equal to
/// element i (indices must be a linear extension). Emitted by a DFS that
/// decides the top element first; excluding an element forces exclusion of
/// everything below it.
fn up_sets_of(down_masks: &[u64]) -> Vec<u64> {
    let n = down_masks.len();
    assert!(n <= 63);
    let mut out = Vec::new();
    fn rec(i: isize, chosen: u64, blocked: u64, down_masks: &[u64], out: &mut Vec<u64>) {
        if i < 0 {
            out.push(chosen);
            return;
        }
        let bit = 1u64 << i;
        if blocked & bit == 0 {
            rec(i - 1, chosen | bit, blocked, down_masks, out);
        }
        rec(i - 1, chosen, blocked | down_masks[i as usize], down_masks, out);
    }
    rec(n as isize - 1, 0, 0, down_masks, &mut out);
    out
}

/// A completely prime filter on an open frame: the member list (canonical set
/// order) plus the same data as a bitmask over frame element indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CompletelyPrimeFilter {
    members: Vec<PointSet>,
    index_mask: u64,
}

impl CompletelyPrimeFilter {
    pub fn members(&self) -> &[PointSet] {
        &self.members
    }

    pub fn index_mask(&self) -> u64 {
        self.index_mask
    }

    pub fn contains(&self, a: PointSet) -> bool {
        self.members.binary_search_by(|probe| canonical_set_order(*probe, a)).is_ok()
    }
}

/// The five filter conditions on a subset of frame elements (as an index
/// mask): contains the top, omits the bottom, closed under binary meets,
/// upward closed, and meets every subfamily whose join it contains.
pub fn cpf_axioms_hold(frame: &OpenFrame, subset: &u64) -> bool {
    let subset = *subset;
    let n = frame.len();
    let top_i = frame.element_index(frame.top()).expect("top is open");
    let bot_i = frame.element_index(frame.bottom()).expect("bottom is open");
    if subset & (1u64 << top_i) == 0 || subset & (1u64 << bot_i) != 0 {
        return false;
    }
    for i in 0..n {
        if subset & (1u64 << i) == 0 {
            continue;
        }
        if frame.up_mask(i) & !subset != 0 {
            return false;
        }
        for j in i..n {
            if subset & (1u64 << j) == 0 {
                continue;
            }
            let meet = frame.element_index(frame.elements()[i] & frame.elements()[j]).unwrap();
            if subset & (1u64 << meet) == 0 {
                return false;
            }
        }
    }
    condition_v(frame, subset)
}

/// Complete primality: whenever the join of a subfamily belongs to the
/// filter, some member of the subfamily does. Checked against every
/// subfamily on frames small enough for a join table; on larger frames the
/// single equivalent check on the join of the filter's complement is used
/// (for an upward-closed filter a violating subfamily exists iff the whole
/// complement is one).
fn condition_v(frame: &OpenFrame, subset: u64) -> bool {
    let n = frame.len();
    if n <= JOIN_TABLE_LIMIT {
        let joins = frame.join_table();
        for m in 0..joins.len() {
            let join_i = frame.element_index(joins[m]).expect("join of opens is open");
            if subset & (1u64 << join_i) != 0 && (m as u64) & subset == 0 {
                return false;
            }
        }
        true
    } else {
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let complement = full & !subset;
        let join_i = frame.element_index(frame.join_of(complement)).expect("join of opens is open");
        subset & (1u64 << join_i) == 0
    }
}

/// All completely prime filters, ordered by ascending element-index mask.
pub fn completely_prime_filters(frame: &OpenFrame) -> Vec<CompletelyPrimeFilter> {
    let n = frame.len();
    let top_i = frame.element_index(frame.top()).expect("top is open");
    let bot_i = frame.element_index(frame.bottom()).expect("bottom is open");
    // down_masks for the up-set walk: canonical order is a linear extension
    // of inclusion (proper subsets have strictly smaller cardinality).
    let down_masks: Vec<u64> = (0..n)
        .map(|i| {
            let mut mask = 0u64;
            for j in 0..=i {
                if frame.elements()[j] & !frame.elements()[i] == 0 {
                    mask |= 1u64 << j;
                }
            }
            mask
        })
        .collect();
    let mut masks: Vec<u64> = up_sets_of(&down_masks)
        .into_iter()
        .filter(|&s| {
            if s & (1u64 << top_i) == 0 || s & (1u64 << bot_i) != 0 {
                return false;
            }
            for i in 0..n {
                if s & (1u64 << i) == 0 {
                    continue;
                }
                for j in i..n {
                    if s & (1u64 << j) == 0 {
                        continue;
                    }
                    let meet =
                        frame.element_index(frame.elements()[i] & frame.elements()[j]).unwrap();
                    if s & (1u64 << meet) == 0 {
                        return false;
                    }
                }
            }
            condition_v(frame, s)
        })
        .collect();
    masks.sort_unstable();
    masks
        .into_iter()
        .map(|mask| {
            let members: Vec<PointSet> = frame
                .elements()
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1u64 << i) != 0)
                .map(|(_, &e)| e)
                .collect();
            CompletelyPrimeFilter { members, index_mask: mask }
        })
        .collect()
}

/// Point space of a frame: carrier points are its completely prime filters,
/// opens are the sets A* = { filters containing A }. Also returns A* for
/// each frame element, aligned with `frame.elements()`.
pub fn point_space(
    frame: &OpenFrame,
) -> Result<(FiniteSpace, Vec<CompletelyPrimeFilter>, Vec<PointSet>), SoberError> {
    let filters = completely_prime_filters(frame);
    let star: Vec<PointSet> = frame
        .elements()
        .iter()
        .enumerate()
        .map(|(e, _)| {
            let mut mask = 0u64;
            for (i, f) in filters.iter().enumerate() {
                if f.index_mask & (1u64 << e) != 0 {
                    mask |= 1u64 << i;
                }
            }
            mask
        })
        .collect();
    let space = FiniteSpace::validate(filters.len(), &star)
        .map_err(|source| SoberError::NotATopology { source })?;
    Ok((space, filters, star))
}

/// The monad's value at a space: frame, filters, carrier, the opens A*
/// (aligned with the frame elements), and the unit sending a point to the
/// filter of opens containing it.
#[derive(Debug, Clone)]
pub struct FpoObject {
    pub base: FiniteSpace,
    pub frame: OpenFrame,
    pub filters: Vec<CompletelyPrimeFilter>,
    pub carrier: FiniteSpace,
    pub star: Vec<PointSet>,
    pub unit: ContinuousMap,
    lookup: HashMap<u64, usize>,
}

impl FpoObject {
    pub fn filter_index(&self, index_mask: u64) -> Option<usize> {
        self.lookup.get(&index_mask).copied()
    }
}

pub fn fpo_object(x: &FiniteSpace) -> FpoObject {
    let frame = OpenFrame::of(x);
    let (carrier, filters, star) = point_space(&frame).expect("star family is a topology");
    let lookup: HashMap<u64, usize> =
        filters.iter().enumerate().map(|(i, f)| (f.index_mask, i)).collect();
    let table: Vec<usize> = x
        .points()
        .map(|p| {
            let mut mask = 0u64;
            for (e, &a) in frame.elements().iter().enumerate() {
                if a & (1u64 << p) != 0 {
                    mask |= 1u64 << e;
                }
            }
            *lookup.get(&mask).expect("point filter is completely prime")
        })
        .collect();
    let unit = ContinuousMap::new(x.clone(), carrier.clone(), table)
        .expect("unit into the point space is continuous");
    FpoObject { base: x.clone(), frame, filters, carrier, star, unit, lookup }
}

/// Functorial action on a morphism, given precomputed endpoints: the image
/// filter of p under f collects the codomain opens whose preimage lies in p.
pub fn fpo_morphism_between(src: &FpoObject, dst: &FpoObject, f: &ContinuousMap) -> ContinuousMap {
    assert!(f.domain() == &src.base && f.codomain() == &dst.base, "endpoint mismatch");
    let table: Vec<usize> = src
        .filters
        .iter()
        .map(|p| {
            let mut mask = 0u64;
            for (e, &a) in dst.frame.elements().iter().enumerate() {
                if p.contains(f.preimage(a)) {
                    mask |= 1u64 << e;
                }
            }
            dst.filter_index(mask).expect("pushforward of a filter is completely prime")
        })
        .collect();
    ContinuousMap::new(src.carrier.clone(), dst.carrier.clone(), table)
        .expect("pushforward on point spaces is continuous")
}

pub fn fpo_morphism(f: &ContinuousMap) -> ContinuousMap {
    fpo_morphism_between(&fpo_object(f.domain()), &fpo_object(f.codomain()), f)
}

/// Standalone unit map: p goes to the filter of opens containing p.
pub fn unit_eta_sober(x: &FiniteSpace) -> ContinuousMap {
    fpo_object(x).unit
}

/// Multiplication at x: inverse of the unit at the carrier (the carrier is
/// sober, so that unit is always iso; the error path guards the claim).
pub fn mu_sober(x: &FiniteSpace) -> Result<ContinuousMap, SoberError> {
    let t1 = fpo_object(x);
    let t2 = fpo_object(&t1.carrier);
    t2.unit.inverse().ok_or_else(|| SoberError::UnitNotIso {
        context: format!("point space of ({})", t1.carrier),
    })
}

/// A space is sober here iff its unit is a homeomorphism.
pub fn is_sober(x: &FiniteSpace) -> bool {
    fpo_object(x).unit.is_homeomorphism()
}

/// Sierpinski power P(m): points are the subsets of {0, .., m-1} indexed by
/// their masks, opens generated by the coordinate opens { A : i in A }.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SierpinskiPower {
    pub index_count: usize,
    pub space: FiniteSpace,
}

/// Open-set counts of P(m) for m = 0..=5: the number of monotone boolean
/// functions of m variables.
const UP_SET_COUNTS: [usize; 6] = [2, 3, 6, 20, 168, 7581];

pub fn sierpinski_power(m: usize) -> Result<SierpinskiPower, SoberError> {
    sierpinski_power_with_cap(m, DEFAULT_INDEX_CAP)
}

pub fn sierpinski_power_with_cap(m: usize, cap: usize) -> Result<SierpinskiPower, SoberError> {
    if m > cap {
        return Err(SoberError::IndexCapExceeded { requested: m, cap });
    }
    assert!(m <= 5, "P(m) for m > 5 exceeds the point limit");
    let point_count = 1usize << m;
    let subbasis: Vec<PointSet> = (0..m)
        .map(|i| {
            let mut mask = 0u64;
            for p in 0..point_count {
                if p & (1usize << i) != 0 {
                    mask |= 1u64 << p;
                }
            }
            mask
        })
        .collect();
    let opens = generate_topology(point_count, &subbasis);
    let space = FiniteSpace::validate(point_count, &opens).expect("generated family is a topology");
    // Cross-check: the topology must be exactly the up-set topology of
    // inclusion on the subset poset.
    for &u in space.opens() {
        for p in 0..point_count {
            if u & (1u64 << p) == 0 {
                continue;
            }
            for q in 0..point_count {
                if p & !q == 0 {
                    assert!(u & (1u64 << q) != 0, "open {} is not up-closed", format_set(u));
                }
            }
        }
    }
    let down_masks: Vec<u64> = (0..point_count)
        .map(|p| {
            let mut mask = 0u64;
            for q in 0..=p {
                if q & !p == 0 {
                    mask |= 1u64 << q;
                }
            }
            mask
        })
        .collect();
    assert_eq!(space.open_count(), up_sets_of(&down_masks).len());
    assert_eq!(space.open_count(), UP_SET_COUNTS[m]);
    Ok(SierpinskiPower { index_count: m, space })
}

/// The map X -> P(m) classifying an m-tuple of opens: a point goes to the
/// subset of indices whose open contains it. Errors with the offending index
/// if an entry is not open.
pub fn family_to_map(x: &FiniteSpace, family: &[PointSet]) -> Result<ContinuousMap, SoberError> {
    family_to_map_with_cap(x, family, DEFAULT_INDEX_CAP)
}

pub fn family_to_map_with_cap(
    x: &FiniteSpace,
    family: &[PointSet],
    cap: usize,
) -> Result<ContinuousMap, SoberError> {
    for (index, &subset) in family.iter().enumerate() {
        if !x.is_open(subset) {
            return Err(SoberError::NotOpen { index, subset });
        }
    }
    let power = sierpinski_power_with_cap(family.len(), cap)?;
    let table: Vec<usize> = x
        .points()
        .map(|p| {
            let mut idx = 0usize;
            for (i, &a) in family.iter().enumerate() {
                if a & (1u64 << p) != 0 {
                    idx |= 1usize << i;
                }
            }
            idx
        })
        .collect();
    Ok(ContinuousMap::new(x.clone(), power.space, table)
        .expect("classifying map of an open family is continuous"))
}

/// Inverse of `family_to_map`: recovers the open family from a map into
/// P(m). The codomain must be exactly P(m) for the inferred m.
pub fn map_to_family(f: &ContinuousMap) -> Vec<PointSet> {
    let n = f.codomain().point_count();
    assert!(n.is_power_of_two(), "codomain is not a sierpinski power");
    let m = n.trailing_zeros() as usize;
    let power = sierpinski_power_with_cap(m, 5).expect("cap 5 covers every legal power");
    assert!(f.codomain() == &power.space, "codomain is not a sierpinski power");
    (0..m)
        .map(|i| {
            let mut coord = 0u64;
            for p in 0..n {
                if p & (1usize << i) != 0 {
                    coord |= 1u64 << p;
                }
            }
            f.preimage(coord)
        })
        .collect()
}

/// Projection out of the point space induced by a map f: X -> P(m):
/// a filter goes to the subset of indices whose coordinate open pulls back
/// into it.
pub fn projection_psi_sober_with(fpo: &FpoObject, f: &ContinuousMap) -> ContinuousMap {
    assert!(f.domain() == &fpo.base, "map does not start at the point space's base");
    let family = map_to_family(f);
    let table: Vec<usize> = fpo
        .filters
        .iter()
        .map(|p| {
            let mut idx = 0usize;
            for (i, &a) in family.iter().enumerate() {
                if p.contains(a) {
                    idx |= 1usize << i;
                }
            }
            idx
        })
        .collect();
    ContinuousMap::new(fpo.carrier.clone(), f.codomain().clone(), table)
        .expect("projection out of the point space is continuous")
}

pub fn projection_psi_sober(f: &ContinuousMap) -> ContinuousMap {
    projection_psi_sober_with(&fpo_object(f.domain()), f)
}

/// For every filter p: psi_f(p) lands in the open D iff f^-1(D) belongs
/// to p.
pub fn membership_transfer_holds(fpo: &FpoObject, f: &ContinuousMap, d: PointSet) -> bool {
    assert!(f.codomain().is_open(d), "D must be open in the power");
    let psi = projection_psi_sober_with(fpo, f);
    let pre = f.preimage(d);
    fpo.filters
        .iter()
        .enumerate()
        .all(|(i, p)| (d & (1u64 << psi.apply(i)) != 0) == p.contains(pre))
}

/// Characteristic map of an open subset into P(1), sending members to the
/// open point.
pub fn open_indicator(x: &FiniteSpace, a: PointSet) -> Result<ContinuousMap, SoberError> {
    family_to_map(x, &[a])
}

/// Coordinate projection P(m) -> P(1), reading off index i.
pub fn coordinate_projection(m: usize, i: usize) -> ContinuousMap {
    assert!(i < m);
    let power = sierpinski_power_with_cap(m, 5).expect("cap 5 covers every legal power");
    let mut coord = 0u64;
    for p in 0..(1usize << m) {
        if p & (1usize << i) != 0 {
            coord |= 1u64 << p;
        }
    }
    family_to_map(&power.space, &[coord]).expect("coordinate open is open")
}

/// P(m) -> P(1) detecting the full index set (the meet of all coordinates).
pub fn top_indicator(m: usize) -> ContinuousMap {
    let power = sierpinski_power_with_cap(m, 5).expect("cap 5 covers every legal power");
    let full_point = (1usize << m) - 1;
    open_indicator(&power.space, 1u64 << full_point).expect("the top cell is open")
}

/// P(m) -> P(1) detecting nonempty index sets (the join of all coordinates).
pub fn nonempty_indicator(m: usize) -> ContinuousMap {
    let power = sierpinski_power_with_cap(m, 5).expect("cap 5 covers every legal power");
    let nonzero = full_mask(1usize << m) & !1u64;
    open_indicator(&power.space, nonzero).expect("the nonempty cells are open")
}

/// The unique map X -> P(0).
pub fn terminal_map(x: &FiniteSpace) -> ContinuousMap {
    family_to_map(x, &[]).expect("empty family always classifies")
}

/// P(0) -> P(1) picking the open point, so that composing with the terminal
/// map gives the indicator of the whole space.
pub fn terminal_section() -> ContinuousMap {
    let p0 = sierpinski_power(0).expect("index count 0 is under any cap").space;
    open_indicator(&p0, p0.full_set()).expect("the full set is open")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::disjoint_union;

    fn chain3() -> FiniteSpace {
        FiniteSpace::validate(3, &[0b000, 0b001, 0b011, 0b111]).unwrap()
    }

    #[test]
    fn frame_of_sierpinski() {
        let f = OpenFrame::of(&FiniteSpace::sierpinski());
        assert_eq!(f.elements(), &[0b00, 0b10, 0b11]);
        assert_eq!(f.join_of(0b011), 0b10);
        assert_eq!(f.element_index(0b10), Some(1));
    }

    #[test]
    fn up_set_walk_counts() {
        // Chain of 3 elements: up-sets are the 4 suffixes.
        let down = vec![0b001u64, 0b011, 0b111];
        assert_eq!(up_sets_of(&down).len(), 4);
        // Antichain of 3: all 8 subsets.
        let down = vec![0b001u64, 0b010, 0b100];
        assert_eq!(up_sets_of(&down).len(), 8);
    }

    #[test]
    fn cpf_enumeration_matches_axioms_brute_force() {
        for x in [
            FiniteSpace::empty(),
            FiniteSpace::point(),
            FiniteSpace::sierpinski(),
            FiniteSpace::discrete(2),
            FiniteSpace::indiscrete(3),
            chain3(),
            FiniteSpace::discrete(3),
        ] {
            let frame = OpenFrame::of(&x);
            let listed: Vec<u64> =
                completely_prime_filters(&frame).iter().map(|f| f.index_mask()).collect();
            // Oracle: scan every subset of the frame.
            let mut expected: Vec<u64> = (0..(1u64 << frame.len()))
                .filter(|s| cpf_axioms_hold(&frame, s))
                .collect();
            expected.sort_unstable();
            assert_eq!(listed, expected, "filter enumeration mismatch over {x}");
        }
    }

    #[test]
    fn filters_of_familiar_spaces() {
        // Discrete n: one principal filter per point.
        let frame = OpenFrame::of(&FiniteSpace::discrete(3));
        assert_eq!(completely_prime_filters(&frame).len(), 3);
        // Sierpinski: two (it is sober).
        let frame = OpenFrame::of(&FiniteSpace::sierpinski());
        assert_eq!(completely_prime_filters(&frame).len(), 2);
        // Indiscrete n >= 1: single filter {top}.
        let frame = OpenFrame::of(&FiniteSpace::indiscrete(3));
        let filters = completely_prime_filters(&frame);
        assert_eq!(filters.len(), 1);
        assert_eq!(filters[0].members(), &[0b111]);
        // Empty space: degenerate frame, no filters.
        let frame = OpenFrame::of(&FiniteSpace::empty());
        assert!(completely_prime_filters(&frame).is_empty());
    }

    #[test]
    fn point_space_and_unit() {
        // Indiscrete 3 collapses to a point.
        let t = fpo_object(&FiniteSpace::indiscrete(3));
        assert_eq!(t.carrier.point_count(), 1);
        assert_eq!(t.unit.mapping(), &[0, 0, 0]);
        // Sierpinski is sober: unit is iso.
        let t = fpo_object(&FiniteSpace::sierpinski());
        assert!(t.unit.is_homeomorphism());
        // The chain is sober too.
        assert!(is_sober(&chain3()));
        // Finite T0 spaces are sober: three filters, one per point, and the
        // unit matches opens exactly.
        let x = FiniteSpace::validate(3, &[0b000, 0b001, 0b010, 0b011, 0b111]).unwrap();
        assert!(x.is_t0());
        assert!(is_sober(&x));
        // Non-T0: the unit merges indistinguishable points 0 and 1.
        let y = FiniteSpace::validate(3, &[0b000, 0b011, 0b111]).unwrap();
        assert!(!y.is_t0());
        assert!(!is_sober(&y));
        let t = fpo_object(&y);
        assert_eq!(t.carrier.point_count(), 2);
        // Points 0 and 1 share a filter; point 2 gets the other.
        assert_eq!(t.unit.mapping()[0], t.unit.mapping()[1]);
        assert_ne!(t.unit.mapping()[0], t.unit.mapping()[2]);
        // Empty space is sober.
        assert!(is_sober(&FiniteSpace::empty()));
        assert!(is_sober(&FiniteSpace::point()));
    }

    #[test]
    fn morphism_action_and_unit_square() {
        // Naturality square of the unit on a sample map.
        let x = FiniteSpace::indiscrete(2);
        let y = FiniteSpace::sierpinski();
        for f in crate::space::enumerate_continuous_maps(&x, &y) {
            let tf = fpo_morphism(&f);
            let tx = fpo_object(&x);
            let ty = fpo_object(&y);
            assert_eq!(
                tx.unit.then(&tf).mapping(),
                f.then(&ty.unit).mapping(),
                "unit naturality fails at {:?}",
                f.mapping()
            );
        }
    }

    #[test]
    fn standalone_unit_merges_indistinguishable_points() {
        let eta = unit_eta_sober(&FiniteSpace::indiscrete(2));
        assert_eq!(eta.codomain().point_count(), 1);
        assert_eq!(eta.mapping(), &[0, 0]);
        assert!(unit_eta_sober(&FiniteSpace::sierpinski()).is_homeomorphism());
        assert!(unit_eta_sober(&FiniteSpace::discrete(3)).is_homeomorphism());
    }

    #[test]
    fn mu_inverts_unit_at_carrier() {
        for x in [
            FiniteSpace::empty(),
            FiniteSpace::sierpinski(),
            FiniteSpace::indiscrete(3),
            chain3(),
            disjoint_union(&FiniteSpace::sierpinski(), &FiniteSpace::point()),
        ] {
            let mu = mu_sober(&x).expect("carrier is sober");
            let t1 = fpo_object(&x);
            let t2 = fpo_object(&t1.carrier);
            let round = t2.unit.then(&mu);
            assert_eq!(round.mapping(), ContinuousMap::identity(&t1.carrier).mapping());
        }
    }

    #[test]
    fn sierpinski_power_shapes() {
        let p0 = sierpinski_power(0).unwrap();
        assert_eq!(p0.space.point_count(), 1);
        assert_eq!(p0.space.open_count(), 2);
        let p1 = sierpinski_power(1).unwrap();
        assert_eq!(p1.space, FiniteSpace::sierpinski());
        let p2 = sierpinski_power(2).unwrap();
        assert_eq!(p2.space.point_count(), 4);
        assert_eq!(p2.space.open_count(), 6);
        let p3 = sierpinski_power(3).unwrap();
        assert_eq!(p3.space.point_count(), 8);
        assert_eq!(p3.space.open_count(), 20);
        assert_eq!(
            sierpinski_power(5),
            Err(SoberError::IndexCapExceeded { requested: 5, cap: 4 })
        );
        let p4 = sierpinski_power_with_cap(4, 5).unwrap();
        assert_eq!(p4.space.open_count(), 168);
    }

    #[test]
    fn family_map_round_trip() {
        let x = chain3();
        let family = vec![0b001u64, 0b011];
        let f = family_to_map(&x, &family).unwrap();
        assert_eq!(f.mapping(), &[0b11, 0b10, 0b00]);
        assert_eq!(map_to_family(&f), family);
        assert_eq!(
            family_to_map(&x, &[0b010]),
            Err(SoberError::NotOpen { index: 0, subset: 0b010 })
        );
        // Empty family: terminal map.
        let t = terminal_map(&x);
        assert_eq!(t.codomain().point_count(), 1);
        assert_eq!(map_to_family(&t), Vec::<PointSet>::new());
    }

    #[test]
    fn projection_membership_transfer() {
        let x = chain3();
        let fpo = fpo_object(&x);
        for family in [vec![], vec![0b001], vec![0b011, 0b111], vec![0b001, 0b011]] {
            let f = family_to_map(&x, &family).unwrap();
            for &d in f.codomain().opens() {
                assert!(
                    membership_transfer_holds(&fpo, &f, d),
                    "membership transfer fails for family {family:?} at {}",
                    format_set(d)
                );
            }
            // psi after the unit recovers f.
            let psi = projection_psi_sober_with(&fpo, &f);
            assert_eq!(fpo.unit.then(&psi).mapping(), f.mapping());
        }
    }

    #[test]
    fn auxiliary_map_identities() {
        let x = chain3();
        let opens: Vec<PointSet> = x.opens().to_vec();
        // Pair encodings against coordinates, meet, join.
        for &a1 in &opens {
            for &a2 in &opens {
                let chi = family_to_map(&x, &[a1, a2]).unwrap();
                assert_eq!(
                    chi.then(&coordinate_projection(2, 0)).mapping(),
                    open_indicator(&x, a1).unwrap().mapping()
                );
                assert_eq!(
                    chi.then(&coordinate_projection(2, 1)).mapping(),
                    open_indicator(&x, a2).unwrap().mapping()
                );
                assert_eq!(
                    chi.then(&top_indicator(2)).mapping(),
                    open_indicator(&x, a1 & a2).unwrap().mapping()
                );
                assert_eq!(
                    chi.then(&nonempty_indicator(2)).mapping(),
                    open_indicator(&x, a1 | a2).unwrap().mapping()
                );
            }
        }
        // Terminal section: tau' after tau is the indicator of the whole space.
        assert_eq!(
            terminal_map(&x).then(&terminal_section()).mapping(),
            open_indicator(&x, x.full_set()).unwrap().mapping()
        );
    }

    #[test]
    fn frame_homomorphism_checks() {
        // Preimage along a continuous map is a frame homomorphism.
        let x = FiniteSpace::indiscrete(2);
        let y = FiniteSpace::sierpinski();
        let fy = OpenFrame::of(&y);
        let fx = OpenFrame::of(&x);
        for f in crate::space::enumerate_continuous_maps(&x, &y) {
            let table: Vec<usize> = fy
                .elements()
                .iter()
                .map(|&a| fx.element_index(f.preimage(a)).expect("preimage of open is open"))
                .collect();
            assert!(is_frame_homomorphism(&fy, &fx, &table));
        }
        // A non-example: collapse everything to the top.
        let fy2 = OpenFrame::of(&y);
        let top = fy2.element_index(fy2.top()).unwrap();
        let table = vec![top; fy2.len()];
        assert!(!is_frame_homomorphism(&fy2, &fy2, &table));
    }
}
