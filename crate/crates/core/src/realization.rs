//! Exact rational realizations of Wilson loop diagram matroids.
//!
//! A twistor configuration is a star row plus `n` moment-curve rows
//! `Z_i = (1, t_i, t_i², …, t_i^{3+k})` over arbitrary-precision rationals.
//! Increasing positive parameters make every ordered maximal minor of the
//! vertex block a positive Vandermonde-type determinant, and the star row
//! is rejection-sampled until no maximal minor of either augmented matrix
//! vanishes. Each propagator row is then solved by Cramer's rule on the
//! 4-column momentum block, giving the matrices `C` (with star column) and
//! `M` (without). Everything downstream is exact: ranks, realized
//! matroids, row-space comparisons, non-negativity probes, and the
//! closed-form integrand.

use crate::bits;
use crate::diagram::{Propagator, WilsonDiagram};
use crate::linalg::{self, LinalgError, Mat};
use crate::matroid::{Matroid, MatroidError};
use crate::{QMat, Rat};
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// Ceiling on exact-minor sweeps (validation, matroid extraction, probes).
pub const MINOR_BUDGET: u128 = 2_000_000;
/// Star-row rejection sampling attempts before giving up.
pub const RESAMPLE_ATTEMPTS: usize = 256;

/// Errors from configuration building and realization arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RealizationError {
    #[error("curve parameters must be strictly increasing and positive")]
    ParamsNotIncreasing,
    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("star row must end in {0} zeros")]
    StarTailNotZero(usize),
    #[error("no generic star row found in {RESAMPLE_ATTEMPTS} attempts")]
    ResamplingExhausted,
    #[error("degenerate minor: {0}")]
    DegenerateMinor(String),
    #[error("matrix does not have full row rank")]
    RankDeficient,
    #[error("propagators {0} and {1} share boundary edge {2}")]
    SharedEdge(usize, usize, usize),
    #[error("propagator ({0},{1}) lies on adjacent edges")]
    AdjacentEdges(usize, usize),
    #[error("estimated work {estimate} exceeds budget {budget}")]
    BudgetExceeded { estimate: u128, budget: u128 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
}

/// Star row plus `n` curve rows with `4 + k` columns each. The last `k`
/// star entries are zero, so the star carries no wavy-line component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistorConfig {
    n: usize,
    k: usize,
    t: Vec<Rat>,
    star: Vec<Rat>,
    rows: Vec<Vec<Rat>>,
}

fn moment_row(t: &Rat, width: usize) -> Vec<Rat> {
    let mut row = Vec::with_capacity(width);
    let mut acc = Rat::one();
    for _ in 0..width {
        row.push(acc.clone());
        acc *= t;
    }
    row
}

impl TwistorConfig {
    /// Builds a configuration from explicit parameters; shapes and the
    /// zero star tail are enforced, genericity is not (see
    /// [`validate_config`]).
    pub fn from_params(
        n: usize,
        k: usize,
        t: Vec<Rat>,
        star: Vec<Rat>,
    ) -> Result<Self, RealizationError> {
        if t.len() != n {
            return Err(RealizationError::ShapeMismatch { expected: n, got: t.len() });
        }
        if star.len() != 4 + k {
            return Err(RealizationError::ShapeMismatch { expected: 4 + k, got: star.len() });
        }
        if star[4..].iter().any(|x| !x.is_zero()) {
            return Err(RealizationError::StarTailNotZero(k));
        }
        let rows = t.iter().map(|ti| moment_row(ti, 4 + k)).collect();
        Ok(TwistorConfig { n, k, t, star, rows })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> &[Rat] {
        &self.t
    }

    pub fn star(&self) -> &[Rat] {
        &self.star
    }

    pub fn rows(&self) -> &[Vec<Rat>] {
        &self.rows
    }

    /// The vertex block, `n × (4+k)`.
    pub fn full_matrix(&self) -> QMat {
        Mat::from_rows(self.rows.clone()).expect("nonempty by construction")
    }

    /// Star row first, then the vertex block: `(n+1) × (4+k)`.
    pub fn augmented(&self) -> QMat {
        let mut rows = Vec::with_capacity(self.n + 1);
        rows.push(self.star.clone());
        rows.extend(self.rows.iter().cloned());
        Mat::from_rows(rows).expect("nonempty by construction")
    }

    /// First four columns of the vertex block, `n × 4`.
    pub fn momentum(&self) -> QMat {
        Mat::from_rows(self.rows.iter().map(|r| r[..4].to_vec()).collect())
            .expect("nonempty by construction")
    }

    /// Star momentum row first, then the vertex momentum block.
    pub fn momentum_augmented(&self) -> QMat {
        let mut rows = Vec::with_capacity(self.n + 1);
        rows.push(self.star[..4].to_vec());
        rows.extend(self.rows.iter().map(|r| r[..4].to_vec()));
        Mat::from_rows(rows).expect("nonempty by construction")
    }

    /// Momentum 4-vector of a 1-based vertex.
    fn momentum_row(&self, v: usize) -> &[Rat] {
        &self.rows[v - 1][..4]
    }

    /// Wavy-line component of a 1-based vertex for the propagator at
    /// list index `r`.
    fn z_entry(&self, v: usize, r: usize) -> &Rat {
        &self.rows[v - 1][4 + r]
    }

    /// Zeroes the wavy-line columns of every vertex row. The result no
    /// longer lies on the moment curve; intended for integrand tests.
    pub fn zero_z_columns(&mut self) {
        for row in &mut self.rows {
            for entry in &mut row[4..] {
                *entry = Rat::zero();
            }
        }
    }
}

/// Four minor families certifying genericity; counts of checked minors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenericityCertificate {
    /// Maximal minors of the vertex block, all positive.
    pub full_block: usize,
    /// Maximal minors of the star-augmented block, all nonzero.
    pub full_augmented: usize,
    /// 4-column vertex minors, all positive.
    pub momentum_block: usize,
    /// 4-column star-augmented minors, all nonzero.
    pub momentum_augmented: usize,
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

/// Sweeps one family of square minors. `positive` demands every
/// determinant be strictly positive, otherwise merely nonzero.
fn sweep_minors(
    m: &QMat,
    size: usize,
    positive: bool,
    family: &str,
) -> Result<usize, RealizationError> {
    if size > m.rows() || size == 0 {
        return Ok(0);
    }
    let cols: Vec<usize> = (0..size).collect();
    debug_assert_eq!(size, m.cols());
    let mut checked = 0;
    for rows_mask in bits::ksubsets(m.rows(), size) {
        let rows: Vec<usize> = bits::elems(rows_mask).into_iter().map(|r| r - 1).collect();
        let d = m.submatrix(&rows, &cols)?.det()?;
        let bad = if positive { !d.is_positive() } else { d.is_zero() };
        if bad {
            return Err(RealizationError::DegenerateMinor(format!(
                "{family} minor on rows {rows:?}"
            )));
        }
        checked += 1;
    }
    Ok(checked)
}

/// Exactly checks the four genericity families and returns their sizes.
pub fn validate_config(z: &TwistorConfig) -> Result<GenericityCertificate, RealizationError> {
    let wide = 4 + z.k;
    let estimate = binomial(z.n, wide)
        + binomial(z.n + 1, wide)
        + binomial(z.n, 4)
        + binomial(z.n + 1, 4);
    if estimate > MINOR_BUDGET {
        return Err(RealizationError::BudgetExceeded { estimate, budget: MINOR_BUDGET });
    }
    Ok(GenericityCertificate {
        full_block: sweep_minors(&z.full_matrix(), wide, true, "vertex block")?,
        full_augmented: sweep_minors(&z.augmented(), wide, false, "augmented block")?,
        momentum_block: sweep_minors(&z.momentum(), 4, true, "momentum block")?,
        momentum_augmented: sweep_minors(
            &z.momentum_augmented(),
            4,
            false,
            "augmented momentum block",
        )?,
    })
}

/// Moment-curve configuration: curve rows from the given strictly
/// increasing positive parameters, star row sampled from `star_seed`
/// until every genericity minor is nonzero.
pub fn moment_curve_config(
    n: usize,
    k: usize,
    t: Vec<Rat>,
    star_seed: u64,
) -> Result<TwistorConfig, RealizationError> {
    if t.len() != n || t.is_empty() {
        return Err(RealizationError::ShapeMismatch { expected: n, got: t.len() });
    }
    if !t[0].is_positive() || t.windows(2).any(|w| w[0] >= w[1]) {
        return Err(RealizationError::ParamsNotIncreasing);
    }
    let mut rng = ChaCha20Rng::seed_from_u64(star_seed);
    for _ in 0..RESAMPLE_ATTEMPTS {
        let mut star: Vec<Rat> = (0..4)
            .map(|_| Rat::from_integer(rng.gen_range(-9i64..=9).into()))
            .collect();
        star.extend(std::iter::repeat(Rat::zero()).take(k));
        let cfg = TwistorConfig::from_params(n, k, t.clone(), star)?;
        if validate_config(&cfg).is_ok() {
            return Ok(cfg);
        }
    }
    Err(RealizationError::ResamplingExhausted)
}

/// Configuration whose star momentum row is the given weighted mix of
/// the curve rows. Parameters may appear in any order, so vertices need
/// not sit on the curve cyclically; useful for steering the star into a
/// prescribed cone. No genericity is enforced here.
pub fn curve_mix_config(
    n: usize,
    k: usize,
    t: Vec<Rat>,
    weights: &[Rat],
) -> Result<TwistorConfig, RealizationError> {
    if weights.len() != n {
        return Err(RealizationError::ShapeMismatch { expected: n, got: weights.len() });
    }
    let mut star = vec![Rat::zero(); 4 + k];
    for (ti, w) in t.iter().zip(weights) {
        let mut acc = Rat::one();
        for entry in star.iter_mut().take(4) {
            *entry += w.clone() * acc.clone();
            acc *= ti;
        }
    }
    TwistorConfig::from_params(n, k, t, star)
}

/// Derives both curve parameters (integer steps of 1 to 3) and the star
/// row from one seed; distinct seeds give independent configurations.
pub fn seeded_config(n: usize, k: usize, seed: u64) -> Result<TwistorConfig, RealizationError> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut t: Vec<Rat> = Vec::with_capacity(n);
    let mut cur: i64 = rng.gen_range(1..=3);
    for _ in 0..n {
        t.push(Rat::from_integer(cur.into()));
        cur += rng.gen_range(1..=3);
    }
    moment_curve_config(n, k, t, rng.gen())
}

/// One solved propagator row: coefficients over `{*} ∪ [n]`, index 0
/// holding the star coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropagatorSolution {
    pub propagator: Propagator,
    pub c: Vec<Rat>,
}

/// Cramer-rule row for one propagator. Four support vertices: star
/// coefficient `−det(Z|V_p)`, vertex coefficients the star-replacement
/// determinants, so the momentum combination vanishes identically.
/// Three support vertices (adjacent edges): the row is the exact kernel
/// of the star-augmented 4×4 momentum system, which is zero for a
/// generic configuration.
pub fn solve_propagator(
    w: &WilsonDiagram,
    z: &TwistorConfig,
    p: Propagator,
) -> Result<PropagatorSolution, RealizationError> {
    let n = w.n();
    debug_assert_eq!(n, z.n);
    let support = bits::elems(p.dependency_set(n));
    let mut c = vec![Rat::zero(); n + 1];
    if support.len() == 4 {
        let rows: Vec<Vec<Rat>> = support.iter().map(|&v| z.momentum_row(v).to_vec()).collect();
        let base = Mat::from_rows(rows.clone())?;
        let det = base.det()?;
        if det.is_zero() {
            return Err(RealizationError::DegenerateMinor(format!(
                "momentum minor on vertices {support:?}"
            )));
        }
        c[0] = -det.clone();
        for (pos, &v) in support.iter().enumerate() {
            let mut replaced = rows.clone();
            replaced[pos] = z.star[..4].to_vec();
            c[v] = Mat::from_rows(replaced)?.det()?;
        }
    } else {
        // Star-augmented square system on the three support vertices.
        let mut rows: Vec<Vec<Rat>> = vec![z.star[..4].to_vec()];
        rows.extend(support.iter().map(|&v| z.momentum_row(v).to_vec()));
        let system = Mat::from_rows(rows)?.transpose();
        let kernel = system.kernel();
        if let Some(vec) = kernel.first() {
            c[0] = vec[0].clone();
            for (pos, &v) in support.iter().enumerate() {
                c[v] = vec[pos + 1].clone();
            }
        }
    }
    for mu in 0..4 {
        let mut acc = c[0].clone() * z.star[mu].clone();
        for v in 1..=n {
            if !c[v].is_zero() {
                acc += c[v].clone() * z.rows[v - 1][mu].clone();
            }
        }
        assert!(acc.is_zero(), "momentum components must vanish exactly");
    }
    Ok(PropagatorSolution { propagator: p, c })
}

/// The stacked coefficient matrices: `C` with the star column, `M`
/// without it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealizedMatrix {
    pub c: QMat,
    pub m: QMat,
}

/// Stacks the propagator solutions in label order.
pub fn build_realization(
    w: &WilsonDiagram,
    z: &TwistorConfig,
) -> Result<RealizedMatrix, RealizationError> {
    let n = w.n();
    if w.k() == 0 {
        return Ok(RealizedMatrix { c: Mat::zeros(0, n + 1), m: Mat::zeros(0, n) });
    }
    let mut c_rows = Vec::with_capacity(w.k());
    for &p in w.props() {
        c_rows.push(solve_propagator(w, z, p)?.c);
    }
    let m_rows: Vec<Vec<Rat>> = c_rows.iter().map(|r| r[1..].to_vec()).collect();
    Ok(RealizedMatrix {
        c: Mat::from_rows(c_rows)?,
        m: Mat::from_rows(m_rows)?,
    })
}

/// Exact rank (fraction-free elimination).
pub fn rank_of(m: &QMat) -> usize {
    m.rank()
}

/// The matroid realized by the columns: bases are the column sets with
/// nonzero maximal minor. Requires full row rank.
pub fn matroid_of_matrix(m: &QMat) -> Result<Matroid, RealizationError> {
    let k = m.rows();
    let n = m.cols();
    let estimate = binomial(n, k);
    if estimate > MINOR_BUDGET {
        return Err(RealizationError::BudgetExceeded { estimate, budget: MINOR_BUDGET });
    }
    if m.rank() != k {
        return Err(RealizationError::RankDeficient);
    }
    let rows: Vec<usize> = (0..k).collect();
    let mut bases = Vec::new();
    for cols_mask in bits::ksubsets(n, k) {
        let cols: Vec<usize> = bits::elems(cols_mask).into_iter().map(|c| c - 1).collect();
        if !m.submatrix(&rows, &cols)?.det()?.is_zero() {
            bases.push(cols_mask);
        }
    }
    Ok(Matroid::from_bases(n, bases)?)
}

/// Rank-side verdict: full rank exactly for well-defined diagrams, and
/// the witnessed support restriction is itself deficient when not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankTheoremReport {
    pub rank: usize,
    pub k: usize,
    pub well_defined: bool,
    /// `rank = k ⇔ well defined` held.
    pub consistent: bool,
    /// For overdefined diagrams: the `C` rows of the witness `P`,
    /// restricted to the columns `{*} ∪ V_P`, have rank `< |P|`.
    pub witness_restriction_deficient: Option<bool>,
}

pub fn check_rank_theorems(
    w: &WilsonDiagram,
    z: &TwistorConfig,
) -> Result<RankTheoremReport, RealizationError> {
    let real = build_realization(w, z)?;
    let rank = real.m.rank();
    let k = w.k();
    let class = w.classify_definedness();
    let well_defined = class.is_well_defined();
    let consistent = (rank == k) == well_defined;
    let witness_restriction_deficient = match class {
        crate::diagram::DefinednessClass::Overdefined { witness } => {
            let prop_rows: Vec<usize> = (0..k).filter(|i| witness & (1 << i) != 0).collect();
            let mut cols: Vec<usize> = vec![0];
            cols.extend(bits::elems(w.dependency_set(witness)));
            let sub = real.c.submatrix(&prop_rows, &cols)?;
            Some(sub.rank() < prop_rows.len())
        }
        _ => None,
    };
    Ok(RankTheoremReport { rank, k, well_defined, consistent, witness_restriction_deficient })
}

/// Row spaces compared exactly; see [`linalg::same_rowspace`].
pub fn rowspace_equal(a: &QMat, b: &QMat) -> bool {
    linalg::same_rowspace(a, b)
}

/// Outcome of the non-negativity probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeOutcome {
    /// All maximal minors of the sign-adjusted realization are ≥ 0, the
    /// rank is `k`, and the realized matroid equals `M(W)`.
    Witness { config_index: usize, row_signs: u32 },
    Inconclusive,
}

/// Scans every configuration and every row-sign gauge for a nonnegative
/// full-rank realization of `M(W)`. One-sided: a witness certifies
/// admissibility; `Inconclusive` claims nothing.
pub fn probe_nonnegativity(
    w: &WilsonDiagram,
    configs: &[TwistorConfig],
) -> Result<ProbeOutcome, RealizationError> {
    let n = w.n();
    let k = w.k();
    let estimate = binomial(n, k) * (1u128 << k.min(64)) * configs.len().max(1) as u128;
    if estimate > MINOR_BUDGET {
        return Err(RealizationError::BudgetExceeded { estimate, budget: MINOR_BUDGET });
    }
    let expected = crate::wilson::build_matroid(w).map_err(|e| match e {
        crate::wilson::WilsonError::BudgetExceeded { estimate, budget } => {
            RealizationError::BudgetExceeded { estimate, budget }
        }
        // An overdefined diagram realizes below full rank at every config.
        _ => RealizationError::RankDeficient,
    })?;
    let rows: Vec<usize> = (0..k).collect();
    for (config_index, z) in configs.iter().enumerate() {
        let real = build_realization(w, z)?;
        let mut minors = Vec::new();
        let mut bases = Vec::new();
        for cols_mask in bits::ksubsets(n, k) {
            let cols: Vec<usize> =
                bits::elems(cols_mask).into_iter().map(|c| c - 1).collect();
            let d = real.m.submatrix(&rows, &cols)?.det()?;
            if !d.is_zero() {
                bases.push(cols_mask);
            }
            minors.push(d);
        }
        // Soundness: a witness must realize M(W) itself, not merely have
        // nonnegative minors; row signs cannot change the zero pattern.
        if bases.is_empty() || &bases[..] != expected.matroid().bases() {
            continue;
        }
        for row_signs in 0..(1u32 << k) {
            let parity_negative = (row_signs.count_ones() & 1) == 1;
            let ok = minors.iter().all(|d| {
                if parity_negative {
                    !d.is_positive()
                } else {
                    !d.is_negative()
                }
            });
            if ok {
                return Ok(ProbeOutcome::Witness { config_index, row_signs });
            }
        }
    }
    Ok(ProbeOutcome::Inconclusive)
}

/// The five determinants and the assembled value for one propagator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropagatorIntegrand {
    pub propagator: Propagator,
    /// `det` of the momentum rows on the four support vertices.
    pub det_base: Rat,
    /// Star-replacement determinants, in ascending support order.
    pub det_star: Vec<Rat>,
    /// Fourth power of the wavy-line combination.
    pub numerator: Rat,
    /// Product of the five determinants.
    pub denominator: Rat,
}

/// Integrand report: per-propagator factors and their product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegrandReport {
    pub per_propagator: Vec<PropagatorIntegrand>,
    pub value: Rat,
}

/// Closed-form integrand for diagrams whose propagators lie on pairwise
/// distinct, non-adjacent boundary edges. Per propagator `p` at list
/// index `r`: numerator `(Σ_m det_m · z_m^{(r)})⁴` over the support,
/// denominator `det · Π_m det_m`.
pub fn integrand_value(
    w: &WilsonDiagram,
    z: &TwistorConfig,
) -> Result<IntegrandReport, RealizationError> {
    let n = w.n();
    for (a, pa) in w.props().iter().enumerate() {
        if pa.dependency_set(n).count_ones() != 4 {
            return Err(RealizationError::AdjacentEdges(pa.i(), pa.j()));
        }
        for (b, pb) in w.props().iter().enumerate().skip(a + 1) {
            for ea in [pa.i(), pa.j()] {
                if ea == pb.i() || ea == pb.j() {
                    return Err(RealizationError::SharedEdge(a + 1, b + 1, ea));
                }
            }
        }
    }
    let mut per_propagator = Vec::with_capacity(w.k());
    let mut value = Rat::one();
    for (r, &p) in w.props().iter().enumerate() {
        let support = bits::elems(p.dependency_set(n));
        let rows: Vec<Vec<Rat>> = support.iter().map(|&v| z.momentum_row(v).to_vec()).collect();
        let det_base = Mat::from_rows(rows.clone())?.det()?;
        let mut det_star = Vec::with_capacity(4);
        let mut combo = Rat::zero();
        let mut denominator = det_base.clone();
        for (pos, &v) in support.iter().enumerate() {
            let mut replaced = rows.clone();
            replaced[pos] = z.star[..4].to_vec();
            let d = Mat::from_rows(replaced)?.det()?;
            combo += d.clone() * z.z_entry(v, r).clone();
            denominator *= d.clone();
            det_star.push(d);
        }
        if denominator.is_zero() {
            return Err(RealizationError::DegenerateMinor(format!(
                "integrand denominator for propagator ({},{})",
                p.i(),
                p.j()
            )));
        }
        let numerator = combo.clone() * combo.clone() * combo.clone() * combo;
        value *= numerator.clone() / denominator.clone();
        per_propagator.push(PropagatorIntegrand {
            propagator: p,
            det_base,
            det_star,
            numerator,
            denominator,
        });
    }
    Ok(IntegrandReport { per_propagator, value })
}
