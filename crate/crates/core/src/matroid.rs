//! Finite matroids over explicit basis collections.
//!
//! A matroid is stored as its full list of bases, bitmask-encoded over a
//! ground set `{1..n}` with `n ≤ 24`. Construction validates the basis
//! exchange axiom exhaustively, so every value of [`Matroid`] is a genuine
//! matroid. On top of the kernel (rank, duality, minors, circuits, closure)
//! sit the polytope-flavored notions used by the positroid decision:
//! connectivity and components, flacets, cyclic intervals, non-crossing
//! partitions, and an independent Grassmann-necklace positroid oracle.

use crate::bits::{self, Mask};

/// Ground sets larger than this are refused at construction.
pub const MAX_GROUND: usize = 24;
/// Full-subset enumerations (`flats`, `cyclic_flats`) refuse above this.
pub const MAX_ENUM_GROUND: usize = 20;

/// Errors from matroid construction and operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatroidError {
    #[error("basis collection is empty")]
    EmptyBases,
    #[error("bases {0:#b} and {1:#b} have different sizes")]
    UnequalSizes(Mask, Mask),
    #[error("basis {0:#b} is out of the ground range")]
    OutOfRange(Mask),
    #[error("exchange axiom fails for bases {b1:#b}, {b2:#b} at element {drop}")]
    ExchangeViolation { b1: Mask, b2: Mask, drop: usize },
    #[error("ground set size {0} exceeds cap {MAX_GROUND}")]
    TooLarge(usize),
    #[error("subset enumeration refused for ground size {0} > {MAX_ENUM_GROUND}")]
    EnumerationBudget(usize),
    #[error("operation requires a connected matroid")]
    DisconnectedInput,
    #[error("blocks do not partition the ground set")]
    NotAPartition,
}

/// A matroid given by the explicit collection of its bases.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matroid {
    n: usize,
    rank: usize,
    bases: Vec<Mask>,
}

impl Matroid {
    /// Builds a matroid from its bases, checking sizes and the exchange
    /// axiom over all pairs. The basis list is sorted and deduplicated.
    pub fn from_bases(n: usize, bases: impl IntoIterator<Item = Mask>) -> Result<Self, MatroidError> {
        if n > MAX_GROUND {
            return Err(MatroidError::TooLarge(n));
        }
        let mut bases: Vec<Mask> = bases.into_iter().collect();
        bases.sort_unstable();
        bases.dedup();
        let Some(&first) = bases.first() else {
            return Err(MatroidError::EmptyBases);
        };
        let rank = first.count_ones() as usize;
        for &b in &bases {
            if b.count_ones() as usize != rank {
                return Err(MatroidError::UnequalSizes(first, b));
            }
            if b & !bits::full(n) != 0 {
                return Err(MatroidError::OutOfRange(b));
            }
        }
        let m = Matroid { n, rank, bases };
        m.validate_exchange()?;
        Ok(m)
    }

    fn validate_exchange(&self) -> Result<(), MatroidError> {
        for &b1 in &self.bases {
            for &b2 in &self.bases {
                let mut only1 = b1 & !b2;
                while only1 != 0 {
                    let drop = only1.trailing_zeros() as usize + 1;
                    only1 &= only1 - 1;
                    let stripped = b1 & !bits::single(drop);
                    let mut only2 = b2 & !b1;
                    let mut ok = false;
                    while only2 != 0 {
                        let add = only2 & only2.wrapping_neg();
                        only2 &= only2 - 1;
                        if self.is_basis(stripped | add) {
                            ok = true;
                            break;
                        }
                    }
                    if !ok {
                        return Err(MatroidError::ExchangeViolation { b1, b2, drop });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn rank_total(&self) -> usize {
        self.rank
    }

    pub fn bases(&self) -> &[Mask] {
        &self.bases
    }

    pub fn is_basis(&self, s: Mask) -> bool {
        self.bases.binary_search(&s).is_ok()
    }

    /// `rk(S) = max |B ∩ S|` over all bases.
    pub fn rank(&self, s: Mask) -> usize {
        self.bases
            .iter()
            .map(|b| (b & s).count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn is_independent(&self, s: Mask) -> bool {
        self.rank(s) == s.count_ones() as usize
    }

    /// Dual matroid: complements of bases.
    pub fn dual(&self) -> Matroid {
        let full = bits::full(self.n);
        let mut bases: Vec<Mask> = self.bases.iter().map(|b| full & !b).collect();
        bases.sort_unstable();
        Matroid { n: self.n, rank: self.n - self.rank, bases }
    }

    /// Restriction `M|S` on ground set `S`, relabeled ascending; also
    /// returns the relabeling (`map[new - 1] = old`).
    pub fn restrict(&self, s: Mask) -> (Matroid, Vec<usize>) {
        let map = bits::elems(s);
        let r = self.rank(s);
        let mut bases: Vec<Mask> = self
            .bases
            .iter()
            .filter(|b| (*b & s).count_ones() as usize == r)
            .map(|b| compress(b & s, s))
            .collect();
        bases.sort_unstable();
        bases.dedup();
        (Matroid { n: map.len(), rank: r, bases }, map)
    }

    /// Contraction `M/S` on ground set `E ∖ S`, relabeled ascending; also
    /// returns the relabeling (`map[new - 1] = old`).
    pub fn contract(&self, s: Mask) -> (Matroid, Vec<usize>) {
        let rest = bits::full(self.n) & !s;
        let map = bits::elems(rest);
        let r = self.rank(s);
        let mut bases: Vec<Mask> = self
            .bases
            .iter()
            .filter(|b| (*b & s).count_ones() as usize == r)
            .map(|b| compress(b & rest, rest))
            .collect();
        bases.sort_unstable();
        bases.dedup();
        (Matroid { n: map.len(), rank: self.rank - r, bases }, map)
    }

    /// Minimally dependent sets; every circuit has size at most `rank + 1`.
    pub fn circuits(&self) -> Vec<Mask> {
        let mut out = Vec::new();
        for size in 1..=self.rank + 1 {
            for s in bits::ksubsets(self.n, size) {
                if self.is_circuit_sized(s, size) {
                    out.push(s);
                }
            }
        }
        out.sort_unstable();
        out
    }

    fn is_circuit_sized(&self, s: Mask, size: usize) -> bool {
        if self.is_independent(s) {
            return false;
        }
        let mut m = s;
        while m != 0 {
            let e = m & m.wrapping_neg();
            m &= m - 1;
            if !self.is_independent(s & !e) {
                return false;
            }
        }
        let _ = size;
        true
    }

    pub fn is_circuit(&self, s: Mask) -> bool {
        s != 0 && self.is_circuit_sized(s, s.count_ones() as usize)
    }

    /// `cl(S) = {e : rk(S ∪ e) = rk(S)}`.
    pub fn closure(&self, s: Mask) -> Mask {
        let r = self.rank(s);
        let mut cl = s;
        for e in 1..=self.n {
            if !bits::contains(s, e) && self.rank(s | bits::single(e)) == r {
                cl |= bits::single(e);
            }
        }
        cl
    }

    pub fn is_flat(&self, s: Mask) -> bool {
        self.closure(s) == s
    }

    /// All flats, ascending by mask; refuses ground sets above the
    /// enumeration cap.
    pub fn flats(&self) -> Result<Vec<Mask>, MatroidError> {
        if self.n > MAX_ENUM_GROUND {
            return Err(MatroidError::EnumerationBudget(self.n));
        }
        Ok((0..=bits::full(self.n))
            .filter(|&s| self.is_flat(s))
            .collect())
    }

    /// A cyclic set is a union of circuits; equivalently `M|S` has no
    /// coloop, i.e. dropping any element leaves the rank unchanged.
    pub fn is_cyclic_set(&self, s: Mask) -> bool {
        let r = self.rank(s);
        let mut m = s;
        while m != 0 {
            let e = m & m.wrapping_neg();
            m &= m - 1;
            if self.rank(s & !e) != r {
                return false;
            }
        }
        true
    }

    /// All cyclic flats, ascending by mask.
    pub fn cyclic_flats(&self) -> Result<Vec<Mask>, MatroidError> {
        Ok(self
            .flats()?
            .into_iter()
            .filter(|&s| self.is_cyclic_set(s))
            .collect())
    }

    /// Ground-set partition into connected components: two elements are
    /// related when some circuit contains both. Loops and coloops end up as
    /// singletons. Components are sorted by their minimal element.
    ///
    /// Circuits meeting a fixed basis suffice: every fundamental circuit
    /// with respect to one basis is used, which yields the same partition.
    pub fn components(&self) -> Vec<Mask> {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let root = find(parent, parent[x]);
                parent[x] = root;
            }
            parent[x]
        }
        let base = *self.bases.first().expect("nonempty bases");
        for e in 1..=self.n {
            if bits::contains(base, e) {
                continue;
            }
            let circuit = self.fundamental_circuit(base, e);
            let first = circuit.trailing_zeros() as usize;
            let mut m = circuit & (circuit - 1);
            while m != 0 {
                let x = m.trailing_zeros() as usize;
                m &= m - 1;
                let (ra, rb) = (find(&mut parent, first), find(&mut parent, x));
                parent[ra] = rb;
            }
        }
        let mut comps: Vec<Mask> = Vec::new();
        let mut roots: Vec<Option<usize>> = vec![None; self.n];
        for x in 0..self.n {
            let r = find(&mut parent, x);
            match roots[r] {
                Some(idx) => comps[idx] |= 1 << x,
                None => {
                    roots[r] = Some(comps.len());
                    comps.push(1 << x);
                }
            }
        }
        comps.sort_by_key(|c| c.trailing_zeros());
        comps
    }

    /// The circuit of `e` in `B ∪ {e}`: `e` plus every `b ∈ B` whose
    /// exchange keeps a basis.
    fn fundamental_circuit(&self, basis: Mask, e: usize) -> Mask {
        let emask = bits::single(e);
        if self.rank(emask) == 0 {
            return emask;
        }
        let mut circuit = emask;
        let mut m = basis;
        while m != 0 {
            let b = m & m.wrapping_neg();
            m &= m - 1;
            if self.is_basis((basis & !b) | emask) {
                circuit |= b;
            }
        }
        circuit
    }

    /// Connectivity convention: at most one element is connected; a matroid
    /// on two or more elements is connected when the circuit relation links
    /// everything.
    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    /// Direct sum: grounds concatenated, bases are unions over all pairs.
    pub fn direct_sum(&self, other: &Matroid) -> Result<Matroid, MatroidError> {
        let n = self.n + other.n;
        if n > MAX_GROUND {
            return Err(MatroidError::TooLarge(n));
        }
        let mut bases = Vec::with_capacity(self.bases.len() * other.bases.len());
        for &b1 in &self.bases {
            for &b2 in &other.bases {
                bases.push(b1 | (b2 << self.n));
            }
        }
        bases.sort_unstable();
        Ok(Matroid { n, rank: self.rank + other.rank, bases })
    }

    /// All flacets: proper nonempty `F` with both `M|F` and `M/F`
    /// connected. Requires a connected input.
    pub fn flacets(&self) -> Result<Vec<Mask>, MatroidError> {
        if !self.is_connected() {
            return Err(MatroidError::DisconnectedInput);
        }
        let full = bits::full(self.n);
        let mut out = Vec::new();
        for f in 1..full {
            if self.restrict(f).0.is_connected() && self.contract(f).0.is_connected() {
                out.push(f);
            }
        }
        Ok(out)
    }

    /// Positroid test by the flacet criterion: a connected matroid is a
    /// positroid exactly when every flacet is a cyclic interval; a
    /// disconnected one exactly when the components form a non-crossing
    /// partition and each component, relabeled along the induced cyclic
    /// order, is itself a positroid.
    pub fn is_positroid(&self) -> bool {
        if self.is_connected() {
            self.flacets()
                .expect("connected")
                .into_iter()
                .all(|f| is_cyclic_interval(f, self.n))
        } else {
            let comps = self.components();
            if !is_noncrossing_partition(&comps, self.n).unwrap_or(false) {
                return false;
            }
            comps.iter().all(|&c| self.restrict(c).0.is_positroid())
        }
    }

    /// Independent positroid oracle via the Grassmann necklace: for each
    /// cyclic start the lexicographically minimal basis in the shifted
    /// order, then the necklace's positroid envelope by Gale comparison.
    /// `M` is a positroid exactly when the envelope equals its bases.
    pub fn necklace_positroid_oracle(&self) -> bool {
        let orders: Vec<Vec<usize>> = (1..=self.n.max(1))
            .map(|start| {
                (0..self.n).map(|ofs| (start - 1 + ofs) % self.n + 1).collect()
            })
            .collect();
        if self.n == 0 {
            return true;
        }
        let necklace: Vec<Vec<usize>> = orders.iter().map(|ord| self.greedy_basis(ord)).collect();
        let envelope: Vec<Mask> = bits::ksubsets(self.n, self.rank)
            .filter(|&cand| {
                orders.iter().zip(&necklace).all(|(ord, ideal)| {
                    let sorted = sort_in_order(cand, ord);
                    ideal
                        .iter()
                        .zip(&sorted)
                        .all(|(&a, &b)| position(ord, a) <= position(ord, b))
                })
            })
            .collect();
        envelope == self.bases
    }

    /// Lexicographically minimal basis in the given element order (greedy).
    fn greedy_basis(&self, order: &[usize]) -> Vec<usize> {
        let mut picked: Mask = 0;
        let mut out = Vec::with_capacity(self.rank);
        for &e in order {
            if out.len() == self.rank {
                break;
            }
            let cand = picked | bits::single(e);
            if self.rank(cand) > self.rank(picked) {
                picked = cand;
                out.push(e);
            }
        }
        out
    }
}

/// Bit positions of `sub` renumbered within `within` (both masks;
/// `sub ⊆ within`).
fn compress(sub: Mask, within: Mask) -> Mask {
    let mut out = 0;
    let mut bit = 0;
    let mut m = within;
    while m != 0 {
        let e = m & m.wrapping_neg();
        m &= m - 1;
        if sub & e != 0 {
            out |= 1 << bit;
        }
        bit += 1;
    }
    out
}

fn position(order: &[usize], e: usize) -> usize {
    order.iter().position(|&x| x == e).expect("element in order")
}

/// Elements of `mask` sorted by the given cyclic order.
fn sort_in_order(mask: Mask, order: &[usize]) -> Vec<usize> {
    order.iter().copied().filter(|&e| bits::contains(mask, e)).collect()
}

/// Whether `s` is a contiguous run in the cyclic order `1..n`; the empty
/// set and the full set count as intervals.
pub fn is_cyclic_interval(s: Mask, n: usize) -> bool {
    let full = bits::full(n);
    if s == 0 || s == full {
        return true;
    }
    let mut boundaries = 0;
    for v in 1..=n {
        let succ = v % n + 1;
        if bits::contains(s, v) && !bits::contains(s, succ) {
            boundaries += 1;
        }
    }
    boundaries == 1
}

/// Whether the blocks partition `[n]` without two of them interleaving
/// cyclically. Blocks of size ≤ 1 never cross anything.
pub fn is_noncrossing_partition(parts: &[Mask], n: usize) -> Result<bool, MatroidError> {
    let full = bits::full(n);
    let mut seen: Mask = 0;
    for &p in parts {
        if p == 0 || p & seen != 0 {
            return Err(MatroidError::NotAPartition);
        }
        seen |= p;
    }
    if seen != full {
        return Err(MatroidError::NotAPartition);
    }
    for (idx, &a) in parts.iter().enumerate() {
        for &b in &parts[idx + 1..] {
            // Walk the circle over elements of a ∪ b; crossing blocks
            // alternate membership more than twice.
            let mut tags: Vec<bool> = Vec::new();
            for v in 1..=n {
                if bits::contains(a, v) {
                    tags.push(true);
                } else if bits::contains(b, v) {
                    tags.push(false);
                }
            }
            let switches = (0..tags.len())
                .filter(|&i| tags[i] != tags[(i + 1) % tags.len()])
                .count();
            if switches > 2 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Same ground size and identical basis collections.
pub fn matroids_equal(m1: &Matroid, m2: &Matroid) -> bool {
    m1.n == m2.n && m1.bases == m2.bases
}

/// The uniform matroid `U_{k,n}`.
pub fn uniform(k: usize, n: usize) -> Matroid {
    Matroid::from_bases(n, bits::ksubsets(n, k)).expect("uniform matroid is valid")
}
