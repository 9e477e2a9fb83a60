//! Finite topological spaces on point sets {0, .., n-1}, with subsets of
//! points stored as `u64` bitmasks. A space owns its full open-set family in
//! canonical order, so structural equality of spaces is `==` on the struct.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

/// Subset of points, bit `p` set iff point `p` is a member.
pub type PointSet = u64;

/// Largest supported point count. Masks are `u64` and index tuples elsewhere
/// assume this bound.
pub const MAX_POINTS: usize = 63;

/// Canonical order on subsets: smaller cardinality first, then the set whose
/// ascending index list is lexicographically smaller. At the lowest bit where
/// the two differ, the set containing that bit is the smaller one.
pub fn canonical_set_order(a: PointSet, b: PointSet) -> Ordering {
    a.count_ones().cmp(&b.count_ones()).then_with(|| {
        if a == b {
            Ordering::Equal
        } else {
            let low = (a ^ b).trailing_zeros();
            if a & (1u64 << low) != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        }
    })
}

/// Ascending member indices of a mask.
pub fn set_members(mask: PointSet) -> Vec<usize> {
    (0..64).filter(|p| mask & (1u64 << p) != 0).collect()
}

/// Mask from member indices. Panics if an index exceeds `MAX_POINTS`.
pub fn set_from_members(members: &[usize]) -> PointSet {
    let mut mask = 0u64;
    for &p in members {
        assert!(p <= MAX_POINTS, "point index {p} out of range");
        mask |= 1u64 << p;
    }
    mask
}

/// Renders a mask as `{0, 2, 5}` for error messages.
pub fn format_set(mask: PointSet) -> String {
    let items: Vec<String> = set_members(mask).iter().map(|p| p.to_string()).collect();
    format!("{{{}}}", items.join(", "))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TopologyError {
    #[error("point count {point_count} exceeds the supported maximum {MAX_POINTS}")]
    TooManyPoints { point_count: usize },
    #[error("subset {} mentions points outside 0..{point_count}", format_set(*.subset))]
    PointOutOfRange { subset: PointSet, point_count: usize },
    #[error("open family must contain the empty set and the full point set")]
    MissingEmptyOrFull,
    #[error("union of opens {} and {} is not open", format_set(*.left), format_set(*.right))]
    NotClosedUnderUnion { left: PointSet, right: PointSet },
    #[error("intersection of opens {} and {} is not open", format_set(*.left), format_set(*.right))]
    NotClosedUnderIntersection { left: PointSet, right: PointSet },
}

/// A finite topological space. `opens` is the complete open family in
/// canonical order, always containing the empty and full sets. The empty
/// space (zero points, one open) is legal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteSpace {
    point_count: usize,
    opens: Vec<PointSet>,
}

impl FiniteSpace {
    /// Checks the axioms and returns the space with opens in canonical order.
    /// Duplicate subsets in the input are merged.
    pub fn validate(point_count: usize, opens: &[PointSet]) -> Result<Self, TopologyError> {
        if point_count > MAX_POINTS {
            return Err(TopologyError::TooManyPoints { point_count });
        }
        let full = full_mask(point_count);
        let mut family: Vec<PointSet> = opens.to_vec();
        family.sort_by(|a, b| canonical_set_order(*a, *b));
        family.dedup();
        for &s in &family {
            if s & !full != 0 {
                return Err(TopologyError::PointOutOfRange { subset: s, point_count });
            }
        }
        let have: HashSet<PointSet> = family.iter().copied().collect();
        if !have.contains(&0) || !have.contains(&full) {
            return Err(TopologyError::MissingEmptyOrFull);
        }
        for (i, &a) in family.iter().enumerate() {
            for &b in &family[i + 1..] {
                if !have.contains(&(a | b)) {
                    return Err(TopologyError::NotClosedUnderUnion { left: a, right: b });
                }
                if !have.contains(&(a & b)) {
                    return Err(TopologyError::NotClosedUnderIntersection { left: a, right: b });
                }
            }
        }
        Ok(FiniteSpace { point_count, opens: family })
    }

    /// Discrete topology: every subset open.
    pub fn discrete(point_count: usize) -> Self {
        assert!(point_count <= 20, "discrete space too large to materialize");
        let opens: Vec<PointSet> = (0..(1u64 << point_count)).collect();
        FiniteSpace::validate(point_count, &opens).expect("discrete family is a topology")
    }

    /// Indiscrete topology: only the empty and full sets.
    pub fn indiscrete(point_count: usize) -> Self {
        FiniteSpace::validate(point_count, &[0, full_mask(point_count)])
            .expect("indiscrete family is a topology")
    }

    /// The empty space.
    pub fn empty() -> Self {
        FiniteSpace::discrete(0)
    }

    /// One-point space.
    pub fn point() -> Self {
        FiniteSpace::discrete(1)
    }

    /// Two points with opens {}, {1}, {0,1}: point 1 is open, point 0 closed.
    pub fn sierpinski() -> Self {
        FiniteSpace::validate(2, &[0b00, 0b10, 0b11]).expect("sierpinski family is a topology")
    }

    pub fn point_count(&self) -> usize {
        self.point_count
    }

    pub fn points(&self) -> impl Iterator<Item = usize> {
        0..self.point_count
    }

    pub fn full_set(&self) -> PointSet {
        full_mask(self.point_count)
    }

    /// Opens in canonical order.
    pub fn opens(&self) -> &[PointSet] {
        &self.opens
    }

    pub fn open_count(&self) -> usize {
        self.opens.len()
    }

    pub fn is_open(&self, set: PointSet) -> bool {
        self.opens
            .binary_search_by(|probe| canonical_set_order(*probe, set))
            .is_ok()
    }

    pub fn is_closed(&self, set: PointSet) -> bool {
        self.is_open(self.full_set() & !set)
    }

    pub fn is_clopen(&self, set: PointSet) -> bool {
        self.is_open(set) && self.is_closed(set)
    }

    /// Smallest open set containing `p`: the intersection of all opens
    /// containing `p`. Finite spaces always have one.
    pub fn min_open(&self, p: usize) -> PointSet {
        assert!(p < self.point_count, "point {p} out of range");
        let bit = 1u64 << p;
        let mut acc = self.full_set();
        for &u in &self.opens {
            if u & bit != 0 {
                acc &= u;
            }
        }
        acc
    }

    /// `min_open` for every point.
    pub fn min_opens(&self) -> Vec<PointSet> {
        (0..self.point_count).map(|p| self.min_open(p)).collect()
    }

    /// Closure of a subset: complement of the union of opens disjoint from it.
    pub fn closure(&self, set: PointSet) -> PointSet {
        let mut avoid = 0u64;
        for &u in &self.opens {
            if u & set == 0 {
                avoid |= u;
            }
        }
        self.full_set() & !avoid
    }

    /// Distinct points are separated by some open set.
    pub fn is_t0(&self) -> bool {
        let mins = self.min_opens();
        for p in 0..self.point_count {
            for q in (p + 1)..self.point_count {
                if mins[p] == mins[q] {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_discrete(&self) -> bool {
        self.opens.len() == 1usize << self.point_count
    }

    /// Canonical order: point count, then open-family size, then opens
    /// elementwise in canonical set order.
    pub fn canonical_cmp(&self, other: &FiniteSpace) -> Ordering {
        self.point_count
            .cmp(&other.point_count)
            .then_with(|| self.opens.len().cmp(&other.opens.len()))
            .then_with(|| {
                for (&a, &b) in self.opens.iter().zip(other.opens.iter()) {
                    let ord = canonical_set_order(a, b);
                    if ord != Ordering::Equal {
                        return ord;
                    }
                }
                Ordering::Equal
            })
    }
}

impl fmt::Display for FiniteSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opens: Vec<String> = self.opens.iter().map(|&u| format_set(u)).collect();
        write!(f, "space on {} points, opens [{}]", self.point_count, opens.join(", "))
    }
}

pub fn full_mask(point_count: usize) -> PointSet {
    if point_count == 0 {
        0
    } else {
        u64::MAX >> (64 - point_count)
    }
}

/// Smallest topology containing `subbasis`: inserts empty and full sets, then
/// closes under pairwise intersections and unions to a fixpoint.
pub fn generate_topology(point_count: usize, subbasis: &[PointSet]) -> Vec<PointSet> {
    assert!(point_count <= MAX_POINTS);
    let full = full_mask(point_count);
    let mut have: HashSet<PointSet> = HashSet::new();
    have.insert(0);
    have.insert(full);
    for &s in subbasis {
        assert!(s & !full == 0, "subbasis set {} out of range", format_set(s));
        have.insert(s);
    }
    loop {
        let snapshot: Vec<PointSet> = have.iter().copied().collect();
        let before = have.len();
        for i in 0..snapshot.len() {
            for j in (i + 1)..snapshot.len() {
                have.insert(snapshot[i] & snapshot[j]);
                have.insert(snapshot[i] | snapshot[j]);
            }
        }
        if have.len() == before {
            break;
        }
    }
    let mut family: Vec<PointSet> = have.into_iter().collect();
    family.sort_by(|a, b| canonical_set_order(*a, *b));
    family
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MapError {
    #[error("mapping table has {got} entries, domain has {expected} points")]
    WrongLength { got: usize, expected: usize },
    #[error("mapping sends point {point} to {target}, outside the codomain")]
    TargetOutOfRange { point: usize, target: usize },
    #[error("preimage of open {} is {}, which is not open", format_set(*.open), format_set(*.preimage))]
    NotContinuous { open: PointSet, preimage: PointSet },
}

/// A continuous map between finite spaces, stored as a total point table.
/// Construction checks continuity, so a value of this type is always a
/// morphism.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ContinuousMap {
    domain: FiniteSpace,
    codomain: FiniteSpace,
    mapping: Vec<usize>,
}

impl ContinuousMap {
    pub fn new(
        domain: FiniteSpace,
        codomain: FiniteSpace,
        mapping: Vec<usize>,
    ) -> Result<Self, MapError> {
        if mapping.len() != domain.point_count() {
            return Err(MapError::WrongLength {
                got: mapping.len(),
                expected: domain.point_count(),
            });
        }
        for (p, &t) in mapping.iter().enumerate() {
            if t >= codomain.point_count() {
                return Err(MapError::TargetOutOfRange { point: p, target: t });
            }
        }
        for &u in codomain.opens() {
            let pre = preimage_mask(&mapping, u);
            if !domain.is_open(pre) {
                return Err(MapError::NotContinuous { open: u, preimage: pre });
            }
        }
        Ok(ContinuousMap { domain, codomain, mapping })
    }

    pub fn identity(space: &FiniteSpace) -> Self {
        ContinuousMap {
            domain: space.clone(),
            codomain: space.clone(),
            mapping: (0..space.point_count()).collect(),
        }
    }

    pub fn constant(domain: &FiniteSpace, codomain: &FiniteSpace, target: usize) -> Self {
        assert!(target < codomain.point_count() || domain.point_count() == 0);
        ContinuousMap {
            domain: domain.clone(),
            codomain: codomain.clone(),
            mapping: vec![target; domain.point_count()],
        }
    }

    pub fn domain(&self) -> &FiniteSpace {
        &self.domain
    }

    pub fn codomain(&self) -> &FiniteSpace {
        &self.codomain
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    pub fn apply(&self, p: usize) -> usize {
        self.mapping[p]
    }

    pub fn preimage(&self, set: PointSet) -> PointSet {
        preimage_mask(&self.mapping, set)
    }

    pub fn image(&self, set: PointSet) -> PointSet {
        let mut out = 0u64;
        for p in 0..self.mapping.len() {
            if set & (1u64 << p) != 0 {
                out |= 1u64 << self.mapping[p];
            }
        }
        out
    }

    /// Composition `g . self` (apply `self` first). Panics on a wiring
    /// mismatch: composable pairs are the caller's responsibility.
    pub fn then(&self, g: &ContinuousMap) -> ContinuousMap {
        assert!(
            self.codomain == g.domain,
            "composition mismatch: codomain of first map differs from domain of second"
        );
        let mapping: Vec<usize> = self.mapping.iter().map(|&p| g.mapping[p]).collect();
        // Composites of continuous maps are continuous; skip the re-check.
        ContinuousMap { domain: self.domain.clone(), codomain: g.codomain.clone(), mapping }
    }

    pub fn is_bijective(&self) -> bool {
        if self.domain.point_count() != self.codomain.point_count() {
            return false;
        }
        let mut seen = vec![false; self.codomain.point_count()];
        for &t in &self.mapping {
            if seen[t] {
                return false;
            }
            seen[t] = true;
        }
        true
    }

    /// Inverse as a continuous map, if this map is a homeomorphism.
    pub fn inverse(&self) -> Option<ContinuousMap> {
        if !self.is_bijective() {
            return None;
        }
        let mut inv = vec![0usize; self.mapping.len()];
        for (p, &t) in self.mapping.iter().enumerate() {
            inv[t] = p;
        }
        ContinuousMap::new(self.codomain.clone(), self.domain.clone(), inv).ok()
    }

    pub fn is_homeomorphism(&self) -> bool {
        self.inverse().is_some()
    }
}

fn preimage_mask(mapping: &[usize], set: PointSet) -> PointSet {
    let mut out = 0u64;
    for (p, &t) in mapping.iter().enumerate() {
        if set & (1u64 << t) != 0 {
            out |= 1u64 << p;
        }
    }
    out
}

/// Continuity test for a raw table, without constructing the map.
pub fn is_continuous(domain: &FiniteSpace, codomain: &FiniteSpace, mapping: &[usize]) -> bool {
    mapping.len() == domain.point_count()
        && mapping.iter().all(|&t| t < codomain.point_count())
        && codomain.opens().iter().all(|&u| domain.is_open(preimage_mask(mapping, u)))
}

/// All continuous maps `domain -> codomain` in lexicographic order of their
/// point tables. Uses the specialization preorder: a point table is continuous
/// iff it is monotone, i.e. q in min_open(p) forces f(q) in min_open(f(p)).
pub fn enumerate_continuous_maps(
    domain: &FiniteSpace,
    codomain: &FiniteSpace,
) -> Vec<ContinuousMap> {
    enumerate_continuous_maps_up_to(domain, codomain, usize::MAX)
        .expect("no limit to exceed")
}

/// Like `enumerate_continuous_maps` but gives up once more than `limit` maps
/// exist, returning how many were seen at that point.
pub fn enumerate_continuous_maps_up_to(
    domain: &FiniteSpace,
    codomain: &FiniteSpace,
    limit: usize,
) -> Result<Vec<ContinuousMap>, usize> {
    let n = domain.point_count();
    let m = codomain.point_count();
    if n == 0 {
        if limit == 0 {
            return Err(1);
        }
        return Ok(vec![ContinuousMap {
            domain: domain.clone(),
            codomain: codomain.clone(),
            mapping: Vec::new(),
        }]);
    }
    if m == 0 {
        return Ok(Vec::new());
    }
    let dom_min = domain.min_opens();
    let cod_min = codomain.min_opens();
    let mut out = Vec::new();
    let mut table = vec![0usize; n];
    fn consistent(dom_min: &[PointSet], cod_min: &[PointSet], table: &[usize], j: usize) -> bool {
        for i in 0..=j {
            let (fi, fj) = (table[i], table[j]);
            if dom_min[i] & (1u64 << j) != 0 && cod_min[fi] & (1u64 << fj) == 0 {
                return false;
            }
            if dom_min[j] & (1u64 << i) != 0 && cod_min[fj] & (1u64 << fi) == 0 {
                return false;
            }
        }
        true
    }
    #[allow(clippy::too_many_arguments)]
    fn rec(
        j: usize,
        n: usize,
        m: usize,
        limit: usize,
        dom_min: &[PointSet],
        cod_min: &[PointSet],
        table: &mut Vec<usize>,
        domain: &FiniteSpace,
        codomain: &FiniteSpace,
        out: &mut Vec<ContinuousMap>,
    ) -> bool {
        if j == n {
            if out.len() >= limit {
                return false;
            }
            debug_assert!(is_continuous(domain, codomain, table));
            out.push(ContinuousMap {
                domain: domain.clone(),
                codomain: codomain.clone(),
                mapping: table.clone(),
            });
            return true;
        }
        for t in 0..m {
            table[j] = t;
            if consistent(dom_min, cod_min, table, j)
                && !rec(j + 1, n, m, limit, dom_min, cod_min, table, domain, codomain, out)
            {
                return false;
            }
        }
        true
    }
    if rec(0, n, m, limit, &dom_min, &cod_min, &mut table, domain, codomain, &mut out) {
        Ok(out)
    } else {
        Err(out.len() + 1)
    }
}

/// Binary product with its two projections.
pub fn product(a: &FiniteSpace, b: &FiniteSpace) -> (FiniteSpace, ContinuousMap, ContinuousMap) {
    let (space, projections, _) = limit_engine(&[a, b], &[]);
    let mut it = projections.into_iter();
    (space, it.next().unwrap(), it.next().unwrap())
}

/// Product of an arbitrary finite list of spaces.
pub fn product_of(factors: &[&FiniteSpace]) -> (FiniteSpace, Vec<ContinuousMap>) {
    let (space, projections, _) = limit_engine(factors, &[]);
    (space, projections)
}

/// An arrow of a finite diagram: `mapping` is a point table for a continuous
/// map `objects[src] -> objects[dst]`.
#[derive(Debug, Clone)]
pub struct DiagramArrowSpec<'a> {
    pub src: usize,
    pub dst: usize,
    pub mapping: &'a [usize],
}

/// Limit of a finite diagram of finite spaces. The carrier's points are the
/// arrow-compatible tuples in lexicographic order; its topology is the
/// subspace topology induced from the (never materialized) product, generated
/// by restricting each factor's opens through the projections.
///
/// Returns the carrier, one projection per object, and the tuple table.
pub fn limit_of_finite_diagram(
    objects: &[FiniteSpace],
    arrows: &[(usize, usize, ContinuousMap)],
) -> (FiniteSpace, Vec<ContinuousMap>, Vec<Vec<usize>>) {
    for (src, dst, f) in arrows {
        assert!(*src < objects.len() && *dst < objects.len(), "arrow endpoints out of range");
        assert!(f.domain() == &objects[*src], "arrow domain differs from its source object");
        assert!(f.codomain() == &objects[*dst], "arrow codomain differs from its target object");
    }
    let refs: Vec<&FiniteSpace> = objects.iter().collect();
    let specs: Vec<DiagramArrowSpec> = arrows
        .iter()
        .map(|(src, dst, f)| DiagramArrowSpec { src: *src, dst: *dst, mapping: f.mapping() })
        .collect();
    limit_engine(&refs, &specs)
}

/// Shared limit search. Tuples are found by backtracking over coordinates in
/// object order; arrows touching already-assigned coordinates prune branches,
/// so naturality of every arrow holds for each emitted tuple by construction.
pub(crate) fn limit_engine(
    objects: &[&FiniteSpace],
    arrows: &[DiagramArrowSpec],
) -> (FiniteSpace, Vec<ContinuousMap>, Vec<Vec<usize>>) {
    let k = objects.len();
    // incoming[j]: arrows src -> j with src < j determine the value at j.
    // outgoing[j]: arrows j -> dst with dst < j constrain it.
    let mut incoming: Vec<Vec<(usize, &[usize])>> = vec![Vec::new(); k];
    let mut outgoing: Vec<Vec<(usize, &[usize])>> = vec![Vec::new(); k];
    let mut loops: Vec<Vec<&[usize]>> = vec![Vec::new(); k];
    for a in arrows {
        match a.dst.cmp(&a.src) {
            Ordering::Greater => incoming[a.dst].push((a.src, a.mapping)),
            Ordering::Less => outgoing[a.src].push((a.dst, a.mapping)),
            Ordering::Equal => loops[a.src].push(a.mapping),
        }
    }
    let mut tuples: Vec<Vec<usize>> = Vec::new();
    let mut current = vec![0usize; k];
    fn admissible(
        v: usize,
        current: &[usize],
        incoming: &[(usize, &[usize])],
        outgoing: &[(usize, &[usize])],
        loops: &[&[usize]],
    ) -> bool {
        incoming.iter().all(|(src, m)| m[current[*src]] == v)
            && outgoing.iter().all(|(dst, m)| m[v] == current[*dst])
            && loops.iter().all(|m| m[v] == v)
    }
    fn rec(
        j: usize,
        objects: &[&FiniteSpace],
        incoming: &[Vec<(usize, &[usize])>],
        outgoing: &[Vec<(usize, &[usize])>],
        loops: &[Vec<&[usize]>],
        current: &mut Vec<usize>,
        tuples: &mut Vec<Vec<usize>>,
    ) {
        if j == objects.len() {
            tuples.push(current.clone());
            return;
        }
        if let Some((src0, m0)) = incoming[j].first() {
            // Value forced by the first incoming arrow; the rest must agree.
            let v = m0[current[*src0]];
            current[j] = v;
            if admissible(v, current, &incoming[j], &outgoing[j], &loops[j]) {
                rec(j + 1, objects, incoming, outgoing, loops, current, tuples);
            }
            return;
        }
        for v in 0..objects[j].point_count() {
            current[j] = v;
            if admissible(v, current, &incoming[j], &outgoing[j], &loops[j]) {
                rec(j + 1, objects, incoming, outgoing, loops, current, tuples);
            }
        }
    }
    rec(0, objects, &incoming, &outgoing, &loops, &mut current, &mut tuples);

    let carrier_size = tuples.len();
    assert!(carrier_size <= MAX_POINTS, "limit carrier exceeds {MAX_POINTS} points");
    let mut subbasis: Vec<PointSet> = Vec::new();
    for (j, obj) in objects.iter().enumerate() {
        for &u in obj.opens() {
            let mut restricted = 0u64;
            for (idx, tuple) in tuples.iter().enumerate() {
                if u & (1u64 << tuple[j]) != 0 {
                    restricted |= 1u64 << idx;
                }
            }
            subbasis.push(restricted);
        }
    }
    let opens = generate_topology(carrier_size, &subbasis);
    let carrier =
        FiniteSpace::validate(carrier_size, &opens).expect("generated family is a topology");
    let projections: Vec<ContinuousMap> = (0..k)
        .map(|j| {
            let table: Vec<usize> = tuples.iter().map(|t| t[j]).collect();
            ContinuousMap::new(carrier.clone(), (*objects[j]).clone(), table)
                .expect("projection is continuous by construction of the subspace topology")
        })
        .collect();
    (carrier, projections, tuples)
}

/// Disjoint union, with `b`'s points shifted above `a`'s.
pub fn disjoint_union(a: &FiniteSpace, b: &FiniteSpace) -> FiniteSpace {
    let na = a.point_count();
    assert!(na + b.point_count() <= MAX_POINTS);
    let mut opens = Vec::with_capacity(a.open_count() * b.open_count());
    for &u in a.opens() {
        for &v in b.opens() {
            opens.push(u | (v << na));
        }
    }
    FiniteSpace::validate(na + b.point_count(), &opens).expect("sum family is a topology")
}

/// Homeomorphism search. Quick invariant screens (point count, open-family
/// size, per-point open-degree multiset), then backtracking over point images
/// in ascending order; the first witness found is returned. Deterministic.
pub fn is_homeomorphic(a: &FiniteSpace, b: &FiniteSpace) -> Option<ContinuousMap> {
    if a.point_count() != b.point_count() || a.open_count() != b.open_count() {
        return None;
    }
    let n = a.point_count();
    let degree = |x: &FiniteSpace, p: usize| -> usize {
        x.opens().iter().filter(|&&u| u & (1u64 << p) != 0).count()
    };
    let deg_a: Vec<usize> = (0..n).map(|p| degree(a, p)).collect();
    let deg_b: Vec<usize> = (0..n).map(|p| degree(b, p)).collect();
    let mut sorted_a = deg_a.clone();
    let mut sorted_b = deg_b.clone();
    sorted_a.sort_unstable();
    sorted_b.sort_unstable();
    if sorted_a != sorted_b {
        return None;
    }
    let min_a = a.min_opens();
    let min_b = b.min_opens();
    let mut assign = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn rec(
        p: usize,
        n: usize,
        deg_a: &[usize],
        deg_b: &[usize],
        min_a: &[PointSet],
        min_b: &[PointSet],
        assign: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if p == n {
            return true;
        }
        for q in 0..n {
            if used[q] || deg_a[p] != deg_b[q] {
                continue;
            }
            // Specialization order must match in both directions against all
            // previously assigned points.
            let ok = (0..p).all(|i| {
                let qi = assign[i];
                (min_a[p] & (1u64 << i) != 0) == (min_b[q] & (1u64 << qi) != 0)
                    && (min_a[i] & (1u64 << p) != 0) == (min_b[qi] & (1u64 << q) != 0)
            }) && (min_a[p] & (1u64 << p) != 0) == (min_b[q] & (1u64 << q) != 0);
            if !ok {
                continue;
            }
            assign[p] = q;
            used[q] = true;
            if rec(p + 1, n, deg_a, deg_b, min_a, min_b, assign, used) {
                return true;
            }
            assign[p] = usize::MAX;
            used[q] = false;
        }
        false
    }
    if !rec(0, n, &deg_a, &deg_b, &min_a, &min_b, &mut assign, &mut used) {
        return None;
    }
    // Matching specialization preorders on a bijection gives a continuous map
    // both ways, but verify open-image exactness rather than trust it.
    let candidate = ContinuousMap::new(a.clone(), b.clone(), assign).ok()?;
    if candidate.is_homeomorphism() {
        Some(candidate)
    } else {
        None
    }
}

/// A partition of a space's points into nonempty disjoint blocks covering
/// everything, blocks in canonical set order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpacePartition {
    pub blocks: Vec<PointSet>,
}

impl SpacePartition {
    fn new(space: &FiniteSpace, mut blocks: Vec<PointSet>) -> Self {
        blocks.sort_by(|a, b| canonical_set_order(*a, *b));
        blocks.dedup();
        let mut seen = 0u64;
        for &blk in &blocks {
            assert!(blk != 0, "partition block is empty");
            assert!(seen & blk == 0, "partition blocks overlap");
            seen |= blk;
        }
        assert!(seen == space.full_set(), "partition does not cover the space");
        SpacePartition { blocks }
    }

    pub fn block_of(&self, p: usize) -> usize {
        self.blocks
            .iter()
            .position(|&blk| blk & (1u64 << p) != 0)
            .expect("partition covers every point")
    }
}

/// Quasi-components: the block of `p` is the intersection of all clopen sets
/// containing `p`.
pub fn quasi_components(x: &FiniteSpace) -> SpacePartition {
    let clopens: Vec<PointSet> = x.opens().iter().copied().filter(|&u| x.is_clopen(u)).collect();
    let blocks: Vec<PointSet> = x
        .points()
        .map(|p| {
            let bit = 1u64 << p;
            clopens.iter().filter(|&&c| c & bit != 0).fold(x.full_set(), |acc, &c| acc & c)
        })
        .collect();
    SpacePartition::new(x, blocks)
}

/// Kolmogorov quotient: identifies points with the same minimal open set.
/// Returns the quotient space and the (continuous, surjective) quotient map.
pub fn kolmogorov_quotient(x: &FiniteSpace) -> (FiniteSpace, ContinuousMap) {
    let mins = x.min_opens();
    // Class representatives in ascending point order.
    let mut reps: Vec<PointSet> = Vec::new();
    let mut class_of = vec![usize::MAX; x.point_count()];
    for p in x.points() {
        match reps.iter().position(|&m| m == mins[p]) {
            Some(i) => class_of[p] = i,
            None => {
                reps.push(mins[p]);
                class_of[p] = reps.len() - 1;
            }
        }
    }
    let q_points = reps.len();
    let mut q_opens: Vec<PointSet> = Vec::new();
    for &u in x.opens() {
        let mut img = 0u64;
        for p in x.points() {
            if u & (1u64 << p) != 0 {
                img |= 1u64 << class_of[p];
            }
        }
        q_opens.push(img);
    }
    let quotient = FiniteSpace::validate(q_points, &q_opens)
        .expect("open images form a topology on the quotient");
    let map = ContinuousMap::new(x.clone(), quotient.clone(), class_of)
        .expect("quotient map is continuous");
    (quotient, map)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_order_examples() {
        // {0} < {1} < {2} < {0,1} < {0,2} < {1,2}
        let order = [0b001u64, 0b010, 0b100, 0b011, 0b101, 0b110];
        for w in order.windows(2) {
            assert_eq!(canonical_set_order(w[0], w[1]), Ordering::Less);
        }
        assert_eq!(canonical_set_order(0b011, 0b011), Ordering::Equal);
        // At the lowest differing bit (bit 0), {0,1} contains it, {1,2} does not.
        assert_eq!(canonical_set_order(0b011, 0b110), Ordering::Less);
    }

    #[test]
    fn validate_accepts_standard_spaces() {
        assert_eq!(FiniteSpace::empty().open_count(), 1);
        assert_eq!(FiniteSpace::point().open_count(), 2);
        assert_eq!(FiniteSpace::sierpinski().open_count(), 3);
        assert_eq!(FiniteSpace::discrete(3).open_count(), 8);
        assert_eq!(FiniteSpace::indiscrete(4).open_count(), 2);
    }

    #[test]
    fn validate_rejects_bad_families() {
        assert_eq!(
            FiniteSpace::validate(2, &[0b00, 0b10]),
            Err(TopologyError::MissingEmptyOrFull)
        );
        // {0} and {1} present but {0,1} missing from a 3-point family.
        let err = FiniteSpace::validate(3, &[0b000, 0b001, 0b010, 0b111]).unwrap_err();
        assert_eq!(err, TopologyError::NotClosedUnderUnion { left: 0b001, right: 0b010 });
        // {0,1} and {1,2} present but {1} missing.
        let err = FiniteSpace::validate(3, &[0b000, 0b011, 0b110, 0b111]).unwrap_err();
        assert_eq!(err, TopologyError::NotClosedUnderIntersection { left: 0b011, right: 0b110 });
        assert_eq!(
            FiniteSpace::validate(1, &[0b00, 0b11]),
            Err(TopologyError::PointOutOfRange { subset: 0b11, point_count: 1 })
        );
    }

    #[test]
    fn min_open_and_closure() {
        let s = FiniteSpace::sierpinski();
        assert_eq!(s.min_open(0), 0b11);
        assert_eq!(s.min_open(1), 0b10);
        assert_eq!(s.closure(0b10), 0b11);
        assert_eq!(s.closure(0b01), 0b01);
        assert!(s.is_t0());
        assert!(!s.is_discrete());
        assert!(!FiniteSpace::indiscrete(2).is_t0());
        assert!(FiniteSpace::empty().is_t0());
        assert!(FiniteSpace::empty().is_discrete());
    }

    #[test]
    fn generate_topology_from_subbasis() {
        // Subbasis {0,1}, {1,2} on 3 points: opens are {}, {1}, {0,1}, {1,2}, {0,1,2}.
        let opens = generate_topology(3, &[0b011, 0b110]);
        assert_eq!(opens, vec![0b000, 0b010, 0b011, 0b110, 0b111]);
    }

    #[test]
    fn continuous_map_checks() {
        let s = FiniteSpace::sierpinski();
        let d2 = FiniteSpace::discrete(2);
        // id on sierpinski fine; swap is not continuous.
        assert!(ContinuousMap::new(s.clone(), s.clone(), vec![0, 1]).is_ok());
        let err = ContinuousMap::new(s.clone(), s.clone(), vec![1, 0]).unwrap_err();
        assert_eq!(err, MapError::NotContinuous { open: 0b10, preimage: 0b01 });
        // discrete domain: everything continuous.
        assert!(ContinuousMap::new(d2.clone(), s.clone(), vec![1, 0]).is_ok());
        // into discrete codomain from sierpinski: only constants.
        let maps = enumerate_continuous_maps(&s, &d2);
        assert_eq!(maps.len(), 2);
        assert!(maps.iter().all(|f| f.mapping()[0] == f.mapping()[1]));
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let spaces = [
            FiniteSpace::sierpinski(),
            FiniteSpace::discrete(2),
            FiniteSpace::indiscrete(3),
            FiniteSpace::validate(3, &[0b000, 0b001, 0b011, 0b111]).unwrap(),
            FiniteSpace::validate(3, &[0b000, 0b010, 0b110, 0b010 | 0b001, 0b111]).unwrap(),
        ];
        for dom in &spaces {
            for cod in &spaces {
                let fast: Vec<Vec<usize>> =
                    enumerate_continuous_maps(dom, cod).iter().map(|f| f.mapping().to_vec()).collect();
                // Brute force: filter all point tables by the definition.
                let n = dom.point_count();
                let m = cod.point_count();
                let mut slow: Vec<Vec<usize>> = Vec::new();
                let total = (m as u64).pow(n as u32);
                for code in 0..total {
                    let mut t = Vec::with_capacity(n);
                    let mut c = code;
                    for _ in 0..n {
                        t.push((c % m as u64) as usize);
                        c /= m as u64;
                    }
                    if is_continuous(dom, cod, &t) {
                        slow.push(t);
                    }
                }
                slow.sort();
                assert_eq!(fast, slow, "map enumeration mismatch {dom} -> {cod}");
            }
        }
    }

    #[test]
    fn map_count_examples() {
        // Self-maps of sierpinski: 3 of the 4 tables (the swap fails).
        let s = FiniteSpace::sierpinski();
        assert_eq!(enumerate_continuous_maps(&s, &s).len(), 3);
        // Any map from a discrete space is continuous.
        let d3 = FiniteSpace::discrete(3);
        assert_eq!(enumerate_continuous_maps(&d3, &s).len(), 8);
        // Empty domain: exactly one (empty) map, even into the empty space.
        let e = FiniteSpace::empty();
        assert_eq!(enumerate_continuous_maps(&e, &s).len(), 1);
        assert_eq!(enumerate_continuous_maps(&e, &e).len(), 1);
        // Empty codomain, nonempty domain: none.
        assert_eq!(enumerate_continuous_maps(&s, &e).len(), 0);
    }

    #[test]
    fn product_of_sierpinski_pair() {
        let s = FiniteSpace::sierpinski();
        let (p, pr0, pr1) = product(&s, &s);
        assert_eq!(p.point_count(), 4);
        // Opens of S x S: products of opens closed under union: count is 6... the
        // up-set count of the 2x2 grid poset.
        assert_eq!(p.open_count(), 6);
        for &u in s.opens() {
            assert!(p.is_open(pr0.preimage(u)));
            assert!(p.is_open(pr1.preimage(u)));
        }
    }

    #[test]
    fn limit_of_equalizer_diagram() {
        // Equalizer of id and the constant-1 map on discrete 2: points where they agree.
        let d2 = FiniteSpace::discrete(2);
        let id = ContinuousMap::identity(&d2);
        let c1 = ContinuousMap::constant(&d2, &d2, 1);
        let objects = vec![d2.clone(), d2.clone()];
        let arrows = vec![(0, 1, id), (0, 1, c1)];
        let (carrier, projections, tuples) = limit_of_finite_diagram(&objects, &arrows);
        assert_eq!(tuples, vec![vec![1, 1]]);
        assert_eq!(carrier.point_count(), 1);
        assert_eq!(projections[0].apply(0), 1);
    }

    #[test]
    fn limit_of_empty_diagram_is_a_point() {
        let (carrier, projections, tuples) = limit_of_finite_diagram(&[], &[]);
        assert_eq!(carrier.point_count(), 1);
        assert!(projections.is_empty());
        assert_eq!(tuples, vec![Vec::<usize>::new()]);
    }

    #[test]
    fn limit_can_be_empty() {
        // Two constant maps with different targets: no compatible tuples.
        let d2 = FiniteSpace::discrete(2);
        let c0 = ContinuousMap::constant(&d2, &d2, 0);
        let c1 = ContinuousMap::constant(&d2, &d2, 1);
        let objects = vec![d2.clone(), d2.clone()];
        let arrows = vec![(0, 1, c0), (0, 1, c1)];
        let (carrier, _, tuples) = limit_of_finite_diagram(&objects, &arrows);
        assert_eq!(carrier.point_count(), 0);
        assert!(tuples.is_empty());
    }

    #[test]
    fn homeomorphism_detection() {
        // Sierpinski vs its mirror (open point 0 instead of 1).
        let s = FiniteSpace::sierpinski();
        let mirror = FiniteSpace::validate(2, &[0b00, 0b01, 0b11]).unwrap();
        let w = is_homeomorphic(&s, &mirror).expect("mirror image is homeomorphic");
        assert_eq!(w.mapping(), &[1, 0]);
        assert!(w.is_homeomorphism());
        assert!(is_homeomorphic(&s, &FiniteSpace::discrete(2)).is_none());
        assert!(is_homeomorphic(&s, &FiniteSpace::indiscrete(2)).is_none());
        // Same invariants, different spaces: need the search to discriminate.
        let a = FiniteSpace::validate(3, &[0b000, 0b001, 0b011, 0b111]).unwrap();
        let b = FiniteSpace::validate(3, &[0b000, 0b010, 0b011, 0b111]).unwrap();
        assert!(is_homeomorphic(&a, &b).is_some());
        let chain = FiniteSpace::validate(3, &[0b000, 0b001, 0b011, 0b111]).unwrap();
        let vee = FiniteSpace::validate(3, &[0b000, 0b001, 0b010, 0b011, 0b111]).unwrap();
        assert!(is_homeomorphic(&chain, &vee).is_none());
        assert!(is_homeomorphic(&FiniteSpace::empty(), &FiniteSpace::empty()).is_some());
    }

    #[test]
    fn quasi_components_examples() {
        // Indiscrete 3: single block.
        let q = quasi_components(&FiniteSpace::indiscrete(3));
        assert_eq!(q.blocks, vec![0b111]);
        // Discrete 3: singletons.
        let q = quasi_components(&FiniteSpace::discrete(3));
        assert_eq!(q.blocks, vec![0b001, 0b010, 0b100]);
        // Sierpinski: connected, one block.
        let q = quasi_components(&FiniteSpace::sierpinski());
        assert_eq!(q.blocks, vec![0b11]);
        // Sierpinski + isolated point: two blocks.
        let su1 = disjoint_union(&FiniteSpace::sierpinski(), &FiniteSpace::point());
        let q = quasi_components(&su1);
        assert_eq!(q.blocks, vec![0b100, 0b011]);
    }

    #[test]
    fn kolmogorov_quotient_examples() {
        let (q, map) = kolmogorov_quotient(&FiniteSpace::indiscrete(3));
        assert_eq!(q.point_count(), 1);
        assert_eq!(map.mapping(), &[0, 0, 0]);
        let (q, _) = kolmogorov_quotient(&FiniteSpace::sierpinski());
        assert_eq!(q.point_count(), 2);
        assert!(q.is_t0());
        // T0 space: quotient is a homeomorphic copy.
        let chain = FiniteSpace::validate(3, &[0b000, 0b001, 0b011, 0b111]).unwrap();
        let (q, map) = kolmogorov_quotient(&chain);
        assert_eq!(q, chain);
        assert!(map.is_homeomorphism());
        // Mixed: 3 points where 0 and 1 are indistinguishable.
        let x = FiniteSpace::validate(3, &[0b000, 0b011, 0b111]).unwrap();
        let (q, map) = kolmogorov_quotient(&x);
        assert_eq!(q.point_count(), 2);
        assert!(q.is_t0());
        assert_eq!(map.mapping(), &[0, 0, 1]);
    }

    #[test]
    fn disjoint_union_opens() {
        let s = disjoint_union(&FiniteSpace::point(), &FiniteSpace::point());
        assert_eq!(s, FiniteSpace::discrete(2));
        let e = disjoint_union(&FiniteSpace::empty(), &FiniteSpace::sierpinski());
        assert_eq!(e, FiniteSpace::sierpinski());
    }
}
