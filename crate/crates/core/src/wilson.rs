//! From Wilson loop diagrams to matroids and admissibility verdicts.
//!
//! The ground set of `M(W)` is the vertex set `[n]`; a `k`-subset `B` is a
//! basis exactly when no `U ⊆ B` touches fewer than `|U|` propagators. That
//! condition is Hall's criterion for a perfect matching of `B` into distinct
//! incident propagators, so the basis test runs a bipartite matching instead
//! of scanning `2^|B|` subsets.
//!
//! On top of `M(W)` sit the propagator-level notions: the flat `F(P)` carved
//! out by a propagator subset, diagram connectivity and components, the
//! three-condition flacet test, the positroid decision, and the final
//! admissibility verdict with its route and certificates.

use crate::bits::{self, Mask};
use crate::diagram::{
    untangle, DiagramError, PropSet, Propagator, VertexSet, WilsonDiagram,
};
use crate::matroid::{
    is_cyclic_interval, is_noncrossing_partition, Matroid, MatroidError,
};

/// Work-unit ceiling for matroid construction; one unit is roughly one
/// candidate-subset matching step or one exchange-validation pair.
pub const DEFAULT_BUDGET: u128 = 400_000_000;

/// Errors from the diagram-to-matroid bridge.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WilsonError {
    #[error("diagram is overdefined (witness propagator mask {witness:#b})")]
    OverdefinedDiagram { witness: PropSet },
    #[error("operation requires a connected diagram")]
    DisconnectedDiagram,
    #[error("estimated work {estimate} exceeds budget {budget}")]
    BudgetExceeded { estimate: u128, budget: u128 },
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// A diagram together with its matroid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WilsonMatroid {
    diagram: WilsonDiagram,
    matroid: Matroid,
}

/// The vertex flat carved out by a propagator subset:
/// `F(P) = V_P ∖ V_{P^c}` for nonempty `P`, and `F(∅)` is the set of
/// vertices touching no propagator at all.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PropagatorFlat {
    pub props: PropSet,
    pub flat: VertexSet,
}

/// One flacet entry of a connected diagram, with its interval status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlacetCertificate {
    pub props: PropSet,
    pub flat: VertexSet,
    pub cyclic_interval: bool,
}

/// How the admissibility decision was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    /// No two propagators cross; admissible outright.
    NonCrossing,
    /// Crossings untangle into an equivalent non-crossing diagram.
    ExactUntangled,
    /// Crossings persist but every flacet flat is a cyclic interval.
    FlacetCriterion,
    /// The positroid test fails.
    NotPositroid,
    /// Some propagator subset has too few supporting vertices.
    Overdefined,
}

impl Route {
    pub fn as_str(self) -> &'static str {
        match self {
            Route::NonCrossing => "non_crossing",
            Route::ExactUntangled => "exact_untangled",
            Route::FlacetCriterion => "flacet_criterion",
            Route::NotPositroid => "not_positroid",
            Route::Overdefined => "overdefined",
        }
    }
}

/// Full admissibility result with certificates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibilityVerdict {
    pub well_defined: bool,
    pub connected: bool,
    pub positroid: bool,
    pub admissible: bool,
    pub route: Route,
    /// Diagram components as (propagator subset, vertex set) pairs.
    pub components: Vec<(PropSet, VertexSet)>,
    /// Flacet certificates; filled for connected well-defined diagrams.
    pub flacets: Vec<FlacetCertificate>,
    /// All crossing propagator pairs.
    pub crossings: Vec<(Propagator, Propagator)>,
    /// Equivalent non-crossing witness when the untangle route succeeds.
    pub untangled: Option<WilsonDiagram>,
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Perfect matching of the vertices in `verts` into distinct propagators,
/// where a vertex can serve any propagator whose dependency set contains
/// it (Kuhn's augmenting paths).
fn has_perfect_matching(deps: &[VertexSet], verts: Mask) -> bool {
    let k = deps.len();
    let mut owner: Vec<Option<usize>> = vec![None; k];
    let mut m = verts;
    while m != 0 {
        let v = m.trailing_zeros() as usize + 1;
        m &= m - 1;
        let mut visited = vec![false; k];
        if !augment(deps, v, &mut owner, &mut visited) {
            return false;
        }
    }
    true
}

fn augment(
    deps: &[VertexSet],
    v: usize,
    owner: &mut Vec<Option<usize>>,
    visited: &mut Vec<bool>,
) -> bool {
    for p in 0..deps.len() {
        if visited[p] || !bits::contains(deps[p], v) {
            continue;
        }
        visited[p] = true;
        if owner[p].is_none() || augment(deps, owner[p].unwrap(), owner, visited) {
            owner[p] = Some(v);
            return true;
        }
    }
    false
}

/// Builds `M(W)` under the default work budget.
pub fn build_matroid(w: &WilsonDiagram) -> Result<WilsonMatroid, WilsonError> {
    build_matroid_with_budget(w, DEFAULT_BUDGET)
}

/// Builds `M(W)`: enumerate `k`-subsets, keep those admitting a perfect
/// matching into the propagators, validate the exchange axiom.
pub fn build_matroid_with_budget(
    w: &WilsonDiagram,
    budget: u128,
) -> Result<WilsonMatroid, WilsonError> {
    if let crate::diagram::DefinednessClass::Overdefined { witness } = w.classify_definedness() {
        return Err(WilsonError::OverdefinedDiagram { witness });
    }
    let n = w.n();
    let k = w.k();
    let kk = (k as u128 * k as u128).max(1);
    let enum_cost = binomial(n, k) * kk;
    if enum_cost > budget {
        return Err(WilsonError::BudgetExceeded { estimate: enum_cost, budget });
    }
    let deps: Vec<VertexSet> = w.props().iter().map(|p| p.dependency_set(n)).collect();
    let bases: Vec<Mask> = bits::ksubsets(n, k)
        .filter(|&b| has_perfect_matching(&deps, b))
        .collect();
    let pair_cost = (bases.len() as u128).pow(2) * (k as u128).max(1);
    if enum_cost + pair_cost > budget {
        return Err(WilsonError::BudgetExceeded { estimate: enum_cost + pair_cost, budget });
    }
    let matroid = Matroid::from_bases(n, bases)?;
    debug_assert_eq!(matroid.rank_total(), k);
    Ok(WilsonMatroid { diagram: w.clone(), matroid })
}

/// `F(P)` as defined above; `P` is masked to the diagram's propagators.
pub fn propagator_flat(w: &WilsonDiagram, props: PropSet) -> PropagatorFlat {
    let props = props & w.all_props();
    let flat = if props == 0 {
        bits::full(w.n()) & !w.dependency_set(w.all_props())
    } else {
        w.dependency_set(props) & !w.dependency_set(w.all_props() & !props)
    };
    PropagatorFlat { props, flat }
}

/// Components without the definedness precondition; used internally and
/// by the verdict assembly.
fn components_unchecked(w: &WilsonDiagram) -> Vec<(PropSet, VertexSet)> {
    let k = w.k();
    let deps: Vec<VertexSet> = w.props().iter().map(|p| p.dependency_set(w.n())).collect();
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let root = find(parent, parent[x]);
            parent[x] = root;
        }
        parent[x]
    }
    for a in 0..k {
        for b in a + 1..k {
            if deps[a] & deps[b] != 0 {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra] = rb;
                }
            }
        }
    }
    let mut groups: Vec<(PropSet, VertexSet)> = Vec::new();
    let mut roots: Vec<Option<usize>> = vec![None; k.max(1)];
    for p in 0..k {
        let r = find(&mut parent, p);
        match roots[r] {
            Some(idx) => {
                groups[idx].0 |= 1 << p;
                groups[idx].1 |= deps[p];
            }
            None => {
                roots[r] = Some(groups.len());
                groups.push((1 << p, deps[p]));
            }
        }
    }
    let untouched = propagator_flat(w, 0).flat;
    for v in bits::elems(untouched) {
        groups.push((0, bits::single(v)));
    }
    groups.sort_by_key(|&(_, vs)| vs.trailing_zeros());
    groups
}

/// Diagram components as (propagator subset, vertex set) pairs, ordered
/// by least vertex. Vertices touching no propagator form singleton
/// components with an empty propagator part.
pub fn wilson_components(
    w: &WilsonDiagram,
) -> Result<Vec<(PropSet, VertexSet)>, WilsonError> {
    if let crate::diagram::DefinednessClass::Overdefined { witness } = w.classify_definedness() {
        return Err(WilsonError::OverdefinedDiagram { witness });
    }
    Ok(components_unchecked(w))
}

/// A diagram on at most one component (hence at most one vertex when it
/// has no propagators) is connected.
pub fn wilson_is_connected(w: &WilsonDiagram) -> Result<bool, WilsonError> {
    Ok(wilson_components(w)?.len() <= 1)
}

impl WilsonMatroid {
    pub fn diagram(&self) -> &WilsonDiagram {
        &self.diagram
    }

    pub fn matroid(&self) -> &Matroid {
        &self.matroid
    }

    /// All propagator subsets defining flacets of `M(W)`. Three
    /// conditions on nonempty `P ⊆ props`:
    ///
    /// 1. `F(P)` is a cyclic flat with `rk F(P) = |P|`;
    /// 2. no bipartition `Q₁ ⊔ Q₂ = P^c` has disjoint dependency sets
    ///    (equivalently, the overlap graph on `P^c` is connected);
    /// 3. no bipartition `P₁ ⊔ P₂ = P` has `F(P₁) ⊔ F(P₂) = F(P)`.
    pub fn propagator_flacets(&self) -> Result<Vec<PropSet>, WilsonError> {
        let w = &self.diagram;
        if components_unchecked(w).len() > 1 {
            return Err(WilsonError::DisconnectedDiagram);
        }
        let all = w.all_props();
        let mut out = Vec::new();
        for ps in 1..=u32::from(all) {
            let ps = ps as PropSet;
            if self.flacet_conditions(ps) {
                out.push(ps);
            }
        }
        Ok(out)
    }

    fn flacet_conditions(&self, ps: PropSet) -> bool {
        let w = &self.diagram;
        let f = propagator_flat(w, ps).flat;
        let m = &self.matroid;
        if m.rank(f) != ps.count_ones() as usize || !m.is_flat(f) || !m.is_cyclic_set(f) {
            return false;
        }
        if !overlap_connected(w, w.all_props() & !ps) {
            return false;
        }
        // Condition 3: scan proper nonempty sub-splits of `ps`; each
        // unordered bipartition is visited once via the low-bit anchor.
        let low = ps & ps.wrapping_neg();
        let rest = ps & !low;
        let mut sub = rest;
        loop {
            let p1 = low | sub;
            if p1 != ps {
                let p2 = ps & !p1;
                let f1 = propagator_flat(w, p1).flat;
                let f2 = propagator_flat(w, p2).flat;
                if f1 & f2 == 0 && (f1 | f2) == f {
                    return false;
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        true
    }

    /// Positroid decision on the diagram side: connected diagrams check
    /// that every flacet flat is a cyclic interval; disconnected ones
    /// check that the component partition is non-crossing and recurse
    /// into each component along its induced cyclic order.
    pub fn wilson_is_positroid(&self) -> Result<bool, WilsonError> {
        let w = &self.diagram;
        let comps = components_unchecked(w);
        if comps.len() <= 1 {
            let n = w.n();
            return Ok(self
                .propagator_flacets()?
                .into_iter()
                .all(|ps| is_cyclic_interval(propagator_flat(w, ps).flat, n)));
        }
        let parts: Vec<Mask> = comps.iter().map(|&(_, vs)| vs).collect();
        if !is_noncrossing_partition(&parts, w.n())? {
            return Ok(false);
        }
        for &(ps, _) in &comps {
            if ps == 0 {
                continue;
            }
            let (sub, _) = w.contract(w.all_props() & !ps);
            if !build_matroid(&sub)?.wilson_is_positroid()? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `rk V ≤ min {|V|, |Prop(V)|}` for the given vertex set.
    pub fn rank_bound_check(&self, v: VertexSet) -> bool {
        let bound = (v.count_ones() as usize)
            .min(self.diagram.prop_of(v).count_ones() as usize);
        self.matroid.rank(v) <= bound
    }

    /// Whether contracting `F(P)` in `M(W)` gives `M(W/P)` (up to the
    /// relabeling maps; vertices touching no propagator stay loops on
    /// the contracted side and are ignored by the basis comparison).
    /// `P = ∅` contracts `F(∅)`, which only deletes loops, so both sides
    /// reduce to the restriction onto the touched vertices.
    pub fn check_contraction_identity(&self, ps: PropSet) -> Result<bool, WilsonError> {
        let w = &self.diagram;
        let f = propagator_flat(w, ps & w.all_props()).flat;
        let (lhs, lhs_map) = self.matroid.contract(f);
        let (sub, rhs_map) = w.contract(ps);
        let rhs = build_matroid(&sub)?;
        let relabel = |bases: &[Mask], map: &[usize]| -> Vec<Mask> {
            let mut out: Vec<Mask> = bases
                .iter()
                .map(|&b| {
                    bits::elems(b)
                        .into_iter()
                        .map(|e| bits::single(map[e - 1]))
                        .fold(0, |acc, m| acc | m)
                })
                .collect();
            out.sort_unstable();
            out
        };
        Ok(relabel(lhs.bases(), &lhs_map) == relabel(rhs.matroid.bases(), &rhs_map))
    }
}

/// Whether the dependency-overlap graph on the selected propagators is
/// connected (at most one propagator counts as connected).
fn overlap_connected(w: &WilsonDiagram, ps: PropSet) -> bool {
    let idx: Vec<usize> = (0..w.k()).filter(|i| ps & (1 << i) != 0).collect();
    if idx.len() <= 1 {
        return true;
    }
    let deps: Vec<VertexSet> = idx
        .iter()
        .map(|&i| w.props()[i].dependency_set(w.n()))
        .collect();
    let mut reached = vec![false; idx.len()];
    let mut stack = vec![0];
    reached[0] = true;
    while let Some(a) = stack.pop() {
        for b in 0..idx.len() {
            if !reached[b] && deps[a] & deps[b] != 0 {
                reached[b] = true;
                stack.push(b);
            }
        }
    }
    reached.into_iter().all(|r| r)
}

/// Full admissibility pipeline. Domain outcomes land in the verdict; the
/// only error is the construction budget.
pub fn is_admissible(w: &WilsonDiagram) -> Result<AdmissibilityVerdict, WilsonError> {
    is_admissible_with_budget(w, DEFAULT_BUDGET)
}

pub fn is_admissible_with_budget(
    w: &WilsonDiagram,
    budget: u128,
) -> Result<AdmissibilityVerdict, WilsonError> {
    let components = components_unchecked(w);
    let connected = components.len() <= 1;
    let crossings = w.crossing_pairs();
    if let crate::diagram::DefinednessClass::Overdefined { .. } = w.classify_definedness() {
        return Ok(AdmissibilityVerdict {
            well_defined: false,
            connected,
            positroid: false,
            admissible: false,
            route: Route::Overdefined,
            components,
            flacets: Vec::new(),
            crossings,
            untangled: None,
        });
    }
    let wm = build_matroid_with_budget(w, budget)?;
    let flacets = if connected {
        wm.propagator_flacets()?
            .into_iter()
            .map(|ps| {
                let flat = propagator_flat(w, ps).flat;
                FlacetCertificate {
                    props: ps,
                    flat,
                    cyclic_interval: is_cyclic_interval(flat, w.n()),
                }
            })
            .collect()
    } else {
        Vec::new()
    };
    let (route, positroid, untangled) = if crossings.is_empty() {
        (Route::NonCrossing, true, None)
    } else {
        match untangle(w) {
            Ok(witness) => (Route::ExactUntangled, true, Some(witness)),
            Err(DiagramError::UntanglePrecondition) | Err(DiagramError::NoWitness) => {
                let pos = wm.wilson_is_positroid()?;
                (
                    if pos { Route::FlacetCriterion } else { Route::NotPositroid },
                    pos,
                    None,
                )
            }
            Err(e) => return Err(e.into()),
        }
    };
    Ok(AdmissibilityVerdict {
        well_defined: true,
        connected,
        positroid,
        admissible: positroid,
        route,
        components,
        flacets,
        crossings,
        untangled,
    })
}
