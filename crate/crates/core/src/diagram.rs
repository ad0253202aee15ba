//! Wilson loop diagrams and their diagram-level predicates.
//!
//! A diagram is a cyclic vertex set `[n]` together with a set of
//! propagators, each an unordered pair of distinct boundary edges; edge
//! `e_i` joins vertices `i` and `i+1` (cyclically). The dependency set of a
//! propagator `(i, j)` is `V_p = {i, i+1, j, j+1}` taken mod `n`; it has
//! size 3 when the two edges are adjacent and size 4 otherwise.
//!
//! Everything here is pure combinatorics on bitmasks: definedness
//! classification, chord crossings, restriction and contraction, exact
//! equivalence, and the untangling search that replaces crossing exact
//! families by non-crossing ones.

use crate::bits::{self, Mask};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Hard cap on vertices; subset scans stay exact and desk-scale below it.
pub const MAX_VERTICES: usize = 24;
/// Hard cap on propagators per diagram.
pub const MAX_PROPS: usize = 16;

/// Set of vertices of `[n]`, bit `v-1` for vertex `v`.
pub type VertexSet = Mask;
/// Set of propagators, bit `i` for index `i` into [`WilsonDiagram::props`].
pub type PropSet = u16;

/// Errors from diagram construction and diagram-level operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiagramError {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("edge index {edge} out of range 1..={n}")]
    EdgeOutOfRange { edge: usize, n: usize },
    #[error("propagator joins edge {0} to itself")]
    SelfPaired(usize),
    #[error("duplicate propagator ({0},{1})")]
    DuplicateProp(usize, usize),
    #[error("vertex count {0} exceeds cap {MAX_VERTICES}")]
    TooManyVertices(usize),
    #[error("propagator count {0} exceeds cap {MAX_PROPS}")]
    TooManyProps(usize),
    #[error("propagators are not a subset of the diagram")]
    PropsNotSubset,
    #[error("diagrams have different vertex counts")]
    DifferentVertexCount,
    #[error("diagram is not exact")]
    NotExact,
    #[error("some crossing pair extends to no disjoint exact family")]
    UntanglePrecondition,
    #[error("untangling search exhausted without a witness")]
    NoWitness,
}

/// An unordered pair of distinct boundary edges, stored with `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Propagator {
    i: u8,
    j: u8,
}

impl Propagator {
    /// Canonicalizes the pair; rejects `i = j` and out-of-range edges.
    pub fn new(i: usize, j: usize, n: usize) -> Result<Self, DiagramError> {
        for e in [i, j] {
            if e < 1 || e > n {
                return Err(DiagramError::EdgeOutOfRange { edge: e, n });
            }
        }
        if i == j {
            return Err(DiagramError::SelfPaired(i));
        }
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        Ok(Propagator { i: i as u8, j: j as u8 })
    }

    pub fn i(&self) -> usize {
        self.i as usize
    }

    pub fn j(&self) -> usize {
        self.j as usize
    }

    /// `V_p = {i, i+1, j, j+1}` mod `n`; size 3 when the edges are adjacent.
    pub fn dependency_set(&self, n: usize) -> VertexSet {
        let succ = |e: usize| e % n + 1;
        bits::mask_of(&[self.i(), succ(self.i()), self.j(), succ(self.j())])
    }

    /// Chord interleaving on the cyclic edge order: exactly one endpoint of
    /// `other` lies strictly inside the edge interval `(i, j)`. Propagators
    /// sharing an edge never cross.
    pub fn crosses(&self, other: &Propagator, _n: usize) -> bool {
        let (a, b) = (self.i(), self.j());
        let (c, d) = (other.i(), other.j());
        if a == c || a == d || b == c || b == d {
            return false;
        }
        let inside = |x: usize| a < x && x < b;
        inside(c) != inside(d)
    }
}

/// Definedness class of a diagram, with the subset witnessing the defining
/// (in)equality when one exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DefinednessClass {
    /// `|V_P| > |P| + 3` for every nonempty subset `P`.
    WellDefinedGeneric,
    /// Not overdefined, and `|V_P| = |P| + 3` for the witness.
    Exact { witness: PropSet },
    /// `|V_P| < |P| + 3` for the witness (minimal, then lowest mask).
    Overdefined { witness: PropSet },
}

impl DefinednessClass {
    pub fn is_well_defined(&self) -> bool {
        !matches!(self, DefinednessClass::Overdefined { .. })
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, DefinednessClass::Exact { .. })
    }
}

/// A Wilson loop diagram: `n` cyclic vertices and a duplicate-free set of
/// propagators, kept sorted in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WilsonDiagram {
    n: usize,
    props: Vec<Propagator>,
}

impl WilsonDiagram {
    /// Validates ranges and duplicates; sorts the propagators. `n = 0` is
    /// allowed only as the degenerate result of contracting everything.
    pub fn new(n: usize, mut props: Vec<Propagator>) -> Result<Self, DiagramError> {
        if n > MAX_VERTICES {
            return Err(DiagramError::TooManyVertices(n));
        }
        if props.len() > MAX_PROPS {
            return Err(DiagramError::TooManyProps(props.len()));
        }
        props.sort();
        for w in props.windows(2) {
            if w[0] == w[1] {
                return Err(DiagramError::DuplicateProp(w[0].i(), w[0].j()));
            }
        }
        for p in &props {
            if p.j() > n {
                return Err(DiagramError::EdgeOutOfRange { edge: p.j(), n });
            }
        }
        Ok(WilsonDiagram { n, props })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of propagators.
    pub fn k(&self) -> usize {
        self.props.len()
    }

    pub fn props(&self) -> &[Propagator] {
        &self.props
    }

    /// Mask of all propagators.
    pub fn all_props(&self) -> PropSet {
        ((1u32 << self.k()) - 1) as PropSet
    }

    /// Mask of all vertices.
    pub fn all_vertices(&self) -> VertexSet {
        bits::full(self.n)
    }

    /// Converts an explicit propagator list into a mask, requiring each to
    /// be present in the diagram.
    pub fn prop_set_of(&self, props: &[Propagator]) -> Result<PropSet, DiagramError> {
        let mut mask: PropSet = 0;
        for p in props {
            match self.props.binary_search(p) {
                Ok(idx) => mask |= 1 << idx,
                Err(_) => return Err(DiagramError::PropsNotSubset),
            }
        }
        Ok(mask)
    }

    /// The propagators selected by a mask.
    pub fn props_in(&self, ps: PropSet) -> Vec<Propagator> {
        (0..self.k()).filter(|i| ps & (1 << i) != 0).map(|i| self.props[i]).collect()
    }

    /// `V_P`, the union of dependency sets over the selected propagators.
    pub fn dependency_set(&self, ps: PropSet) -> VertexSet {
        let mut v = 0;
        for i in 0..self.k() {
            if ps & (1 << i) != 0 {
                v |= self.props[i].dependency_set(self.n);
            }
        }
        v
    }

    /// `Prop(V)`: every propagator whose dependency set meets `V`.
    pub fn prop_of(&self, v: VertexSet) -> PropSet {
        let mut ps: PropSet = 0;
        for i in 0..self.k() {
            if self.props[i].dependency_set(self.n) & v != 0 {
                ps |= 1 << i;
            }
        }
        ps
    }

    /// Scans every nonempty propagator subset for the defining
    /// (in)equalities; witnesses are minimal in size, then in mask value.
    pub fn classify_definedness(&self) -> DefinednessClass {
        let mut over: Option<PropSet> = None;
        let mut exact: Option<PropSet> = None;
        for ps in 1..=u32::from(self.all_props()) {
            let ps = ps as PropSet;
            let size = ps.count_ones() as usize;
            let deps = self.dependency_set(ps).count_ones() as usize;
            let better = |cur: &Option<PropSet>| match cur {
                None => true,
                Some(w) => size < w.count_ones() as usize,
            };
            if deps < size + 3 {
                if better(&over) {
                    over = Some(ps);
                }
            } else if deps == size + 3 && better(&exact) {
                exact = Some(ps);
            }
        }
        match (over, exact) {
            (Some(witness), _) => DefinednessClass::Overdefined { witness },
            (None, Some(witness)) => DefinednessClass::Exact { witness },
            (None, None) => DefinednessClass::WellDefinedGeneric,
        }
    }

    pub fn is_well_defined(&self) -> bool {
        self.classify_definedness().is_well_defined()
    }

    /// All crossing pairs, each reported once with the lower propagator
    /// first (canonical order).
    pub fn crossing_pairs(&self) -> Vec<(Propagator, Propagator)> {
        let mut out = Vec::new();
        for a in 0..self.k() {
            for b in a + 1..self.k() {
                if self.props[a].crosses(&self.props[b], self.n) {
                    out.push((self.props[a], self.props[b]));
                }
            }
        }
        out
    }

    /// `W|P`: same vertices, propagators restricted to the mask.
    pub fn restrict(&self, ps: PropSet) -> WilsonDiagram {
        WilsonDiagram { n: self.n, props: self.props_in(ps) }
    }

    /// `W/P`: drops the selected propagators, keeps only the vertices
    /// `V_{P^c}` relabeled along the induced cyclic order. Returns the
    /// diagram and the relabeling (`map[new - 1] = old`).
    ///
    /// Consecutive vertices `i, i+1` of a surviving propagator both survive,
    /// so its edges stay edges: the new pair is the relabeled pair.
    pub fn contract(&self, ps: PropSet) -> (WilsonDiagram, Vec<usize>) {
        let keep_props = self.all_props() & !ps;
        let keep_vs = self.dependency_set(keep_props);
        let map = bits::elems(keep_vs);
        let rank = |old: usize| map.iter().position(|&v| v == old).unwrap() + 1;
        let props = self
            .props_in(keep_props)
            .iter()
            .map(|p| Propagator::new(rank(p.i()), rank(p.j()), map.len()).unwrap())
            .collect();
        (WilsonDiagram { n: map.len(), props }, map)
    }

    /// Parses the grammar `n=<int>; props=(i1,j1),(i2,j2),...` (whitespace
    /// optional, empty list allowed).
    pub fn parse(text: &str) -> Result<Self, DiagramError> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let rest = compact
            .strip_prefix("n=")
            .ok_or_else(|| DiagramError::Syntax("expected `n=<int>`".into()))?;
        let (n_str, rest) = rest
            .split_once(';')
            .ok_or_else(|| DiagramError::Syntax("expected `;` after vertex count".into()))?;
        let n: usize = n_str
            .parse()
            .map_err(|_| DiagramError::Syntax(format!("bad vertex count `{n_str}`")))?;
        if n < 1 {
            return Err(DiagramError::Syntax("vertex count must be at least 1".into()));
        }
        let list = rest
            .strip_prefix("props=")
            .ok_or_else(|| DiagramError::Syntax("expected `props=`".into()))?;
        let mut props = Vec::new();
        let mut s = list;
        while !s.is_empty() {
            let body = s
                .strip_prefix('(')
                .ok_or_else(|| DiagramError::Syntax("expected `(` starting a propagator".into()))?;
            let (pair, tail) = body
                .split_once(')')
                .ok_or_else(|| DiagramError::Syntax("unclosed propagator".into()))?;
            let (i_str, j_str) = pair
                .split_once(',')
                .ok_or_else(|| DiagramError::Syntax(format!("bad propagator `({pair})`")))?;
            let parse_edge = |e: &str| {
                e.parse::<usize>()
                    .map_err(|_| DiagramError::Syntax(format!("bad edge index `{e}`")))
            };
            props.push(Propagator::new(parse_edge(i_str)?, parse_edge(j_str)?, n)?);
            s = match tail.strip_prefix(',') {
                Some(next) if !next.is_empty() => next,
                Some(_) => return Err(DiagramError::Syntax("trailing `,`".into())),
                None if tail.is_empty() => tail,
                None => return Err(DiagramError::Syntax("expected `,` between propagators".into())),
            };
        }
        WilsonDiagram::new(n, props)
    }
}

impl fmt::Display for WilsonDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={}; props=", self.n)?;
        for (idx, p) in self.props.iter().enumerate() {
            if idx > 0 {
                write!(f, ",")?;
            }
            write!(f, "({},{})", p.i(), p.j())?;
        }
        Ok(())
    }
}

/// Exact-diagram equivalence: both diagrams split into disjoint exact
/// families with pairwise-equal sizes and dependency sets, leaving identical
/// residual propagators.
pub fn are_exact_equivalent(
    w1: &WilsonDiagram,
    w2: &WilsonDiagram,
) -> Result<bool, DiagramError> {
    if w1.n() != w2.n() {
        return Err(DiagramError::DifferentVertexCount);
    }
    if !w1.classify_definedness().is_exact() || !w2.classify_definedness().is_exact() {
        return Err(DiagramError::NotExact);
    }
    for covered1 in bits::subsets_of(u32::from(w1.all_props())) {
        let covered1 = covered1 as PropSet;
        let residual = w1.props_in(w1.all_props() & !covered1);
        let Ok(res2) = w2.prop_set_of(&residual) else { continue };
        let covered2 = w2.all_props() & !res2;
        if covered2.count_ones() != covered1.count_ones() {
            continue;
        }
        if families_match(w1, covered1, w2, covered2) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Whether the covered propagators of both diagrams split into matched
/// exact families (equal sizes, equal dependency sets).
fn families_match(w1: &WilsonDiagram, s1: PropSet, w2: &WilsonDiagram, s2: PropSet) -> bool {
    if s1 == 0 {
        return s2 == 0;
    }
    let lead: PropSet = 1 << s1.trailing_zeros();
    for p1 in bits::subsets_of(u32::from(s1 & !lead)) {
        let p1 = p1 as PropSet | lead;
        let v1 = w1.dependency_set(p1);
        if v1.count_ones() as usize != p1.count_ones() as usize + 3 {
            continue;
        }
        for p2 in bits::subsets_of(u32::from(s2)) {
            let p2 = p2 as PropSet;
            if p2.count_ones() != p1.count_ones() || w2.dependency_set(p2) != v1 {
                continue;
            }
            if families_match(w1, s1 & !p1, w2, s2 & !p2) {
                return true;
            }
        }
    }
    false
}

/// Replaces crossing propagators by a non-crossing exact-equivalent diagram.
///
/// Each connected component of the crossing graph must extend to an exact
/// family (`|V_P| = |P| + 3`); the families are chosen disjoint, and every
/// family is replaced by a same-size non-crossing propagator set on the same
/// dependency set. The search is exhaustive in ascending mask order, so the
/// first witness is deterministic.
pub fn untangle(w: &WilsonDiagram) -> Result<WilsonDiagram, DiagramError> {
    if w.crossing_pairs().is_empty() {
        return Ok(w.clone());
    }
    let components = crossing_components(w);
    let mut families: Vec<PropSet> = Vec::new();
    if !choose_families(w, &components, 0, w.all_props(), &mut families) {
        return Err(DiagramError::UntanglePrecondition);
    }
    families.clear();
    let mut witness = None;
    search_families(w, &components, 0, w.all_props(), &mut families, &mut witness);
    witness.ok_or(DiagramError::NoWitness)
}

/// Connected components of the crossing graph, restricted to propagators
/// that cross something; each component is a prop mask.
fn crossing_components(w: &WilsonDiagram) -> Vec<PropSet> {
    let k = w.k();
    let mut comp: Vec<usize> = (0..k).collect();
    fn find(comp: &mut Vec<usize>, x: usize) -> usize {
        if comp[x] != x {
            let root = find(comp, comp[x]);
            comp[x] = root;
        }
        comp[x]
    }
    let mut crossing: PropSet = 0;
    for a in 0..k {
        for b in a + 1..k {
            if w.props()[a].crosses(&w.props()[b], w.n()) {
                crossing |= (1 << a) | (1 << b);
                let (ra, rb) = (find(&mut comp, a), find(&mut comp, b));
                comp[ra] = rb;
            }
        }
    }
    let mut out: Vec<PropSet> = Vec::new();
    for root in 0..k {
        if crossing & (1 << root) == 0 || find(&mut comp, root) != root {
            continue;
        }
        let mut mask: PropSet = 0;
        for x in 0..k {
            if crossing & (1 << x) != 0 && find(&mut comp, x) == root {
                mask |= 1 << x;
            }
        }
        out.push(mask);
    }
    out.sort_by_key(|m| m.trailing_zeros());
    out
}

/// Precondition probe: can components from `idx` on be covered by disjoint
/// exact families drawn from `avail`? A family may swallow later components
/// whole but never split one.
fn choose_families(
    w: &WilsonDiagram,
    comps: &[PropSet],
    idx: usize,
    avail: PropSet,
    families: &mut Vec<PropSet>,
) -> bool {
    let Some(&need) = comps.get(idx) else { return true };
    if families.iter().any(|f| f & need == need) {
        return choose_families(w, comps, idx + 1, avail, families);
    }
    for sup in bits::subsets_of(u32::from(avail & !need)) {
        let family = sup as PropSet | need;
        let v = w.dependency_set(family);
        if v.count_ones() as usize != family.count_ones() as usize + 3 {
            continue;
        }
        if comps.iter().any(|&c| family & c != 0 && family & c != c) {
            continue;
        }
        families.push(family);
        if choose_families(w, comps, idx + 1, avail & !family, families) {
            return true;
        }
        families.pop();
    }
    false
}

/// Full search: for each admissible family assignment, try non-crossing
/// replacements; records the first complete witness.
fn search_families(
    w: &WilsonDiagram,
    comps: &[PropSet],
    idx: usize,
    avail: PropSet,
    families: &mut Vec<PropSet>,
    witness: &mut Option<WilsonDiagram>,
) {
    if witness.is_some() {
        return;
    }
    let next_uncovered = (idx..comps.len())
        .find(|&i| !families.iter().any(|f| f & comps[i] == comps[i]));
    let Some(i) = next_uncovered else {
        try_replacements(w, families, witness);
        return;
    };
    let need = comps[i];
    for sup in bits::subsets_of(u32::from(avail & !need)) {
        if witness.is_some() {
            return;
        }
        let family = sup as PropSet | need;
        let v = w.dependency_set(family);
        if v.count_ones() as usize != family.count_ones() as usize + 3 {
            continue;
        }
        if comps.iter().any(|&c| family & c != 0 && family & c != c) {
            continue;
        }
        families.push(family);
        search_families(w, comps, i + 1, avail & !family, families, witness);
        families.pop();
    }
}

/// Enumerates non-crossing replacement sets for every family (lexicographic
/// combinations of candidate propagators) and keeps the first assembled
/// diagram that is crossing-free, well defined, and exact-equivalent to `w`.
fn try_replacements(w: &WilsonDiagram, families: &[PropSet], witness: &mut Option<WilsonDiagram>) {
    let residual_mask = families.iter().fold(w.all_props(), |m, f| m & !f);
    let residual = w.props_in(residual_mask);
    let mut replacements: Vec<Vec<Propagator>> = Vec::new();
    assemble(w, families, 0, &residual, &mut replacements, witness);
}

fn assemble(
    w: &WilsonDiagram,
    families: &[PropSet],
    idx: usize,
    residual: &[Propagator],
    replacements: &mut Vec<Vec<Propagator>>,
    witness: &mut Option<WilsonDiagram>,
) {
    if witness.is_some() {
        return;
    }
    if idx == families.len() {
        let mut props = residual.to_vec();
        for q in replacements.iter() {
            props.extend_from_slice(q);
        }
        let Ok(cand) = WilsonDiagram::new(w.n(), props) else { return };
        if !cand.crossing_pairs().is_empty() || !cand.is_well_defined() {
            return;
        }
        if are_exact_equivalent(w, &cand) == Ok(true) {
            *witness = Some(cand);
        }
        return;
    }
    let family = families[idx];
    let target_v = w.dependency_set(family);
    let size = family.count_ones() as usize;
    let candidates = supported_props(w.n(), target_v);
    let mut combo = Vec::with_capacity(size);
    pick_combo(w, &candidates, 0, size, target_v, &mut combo, |q| {
        replacements.push(q.to_vec());
        assemble(w, families, idx + 1, residual, replacements, witness);
        replacements.pop();
        witness.is_some()
    });
}

/// All propagators whose dependency set lies inside `v`, in canonical order.
fn supported_props(n: usize, v: VertexSet) -> Vec<Propagator> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            let p = Propagator::new(i, j, n).unwrap();
            if p.dependency_set(n) & !v == 0 {
                out.push(p);
            }
        }
    }
    out
}

/// Lexicographic enumeration of internally non-crossing `size`-combinations
/// covering `target_v`; `emit` returns true to stop the whole search.
fn pick_combo(
    w: &WilsonDiagram,
    candidates: &[Propagator],
    start: usize,
    size: usize,
    target_v: VertexSet,
    combo: &mut Vec<Propagator>,
    mut emit: impl FnMut(&[Propagator]) -> bool,
) -> bool {
    fn rec(
        w: &WilsonDiagram,
        candidates: &[Propagator],
        start: usize,
        size: usize,
        target_v: VertexSet,
        combo: &mut Vec<Propagator>,
        emit: &mut dyn FnMut(&[Propagator]) -> bool,
    ) -> bool {
        if combo.len() == size {
            let union = combo
                .iter()
                .fold(0u32, |m, p| m | p.dependency_set(w.n()));
            if union == target_v {
                return emit(combo);
            }
            return false;
        }
        for c in start..candidates.len() {
            let p = candidates[c];
            if combo.iter().any(|q| q.crosses(&p, w.n())) {
                continue;
            }
            combo.push(p);
            if rec(w, candidates, c + 1, size, target_v, combo, emit) {
                return true;
            }
            combo.pop();
        }
        false
    }
    rec(w, candidates, start, size, target_v, combo, &mut emit)
}
