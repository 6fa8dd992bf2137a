//! Analytic densities and their certified discretization onto shifted grids.
//!
//! A density spec is an evaluation oracle plus a certified Lipschitz bound.
//! Discretization keeps the grid cells where the sampled supremum clears a
//! threshold `eta` and assigns each kept cell that sampled value, yielding a
//! piecewise-constant approximation whose sup-norm error is certified from
//! the Lipschitz budget: `max(eta, L·scale·√d)` plus the sampling slack
//! `L·scale·√d/(k-1)`. Shrinking the scale (with `eta` coupled to it) drives
//! the certified error to zero, which is what the convergence experiment
//! makes visible: the discretized trees' merge heights approach the true
//! ones at least as fast as the certificate.

use std::collections::{BTreeSet, HashMap, VecDeque};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grid::{CellId, ShiftedGrid};
use crate::metric::MergeIndex;
use crate::rational::{rational_from_f64, rational_to_f64, Rational};
use crate::regions::{Adjacency, RegionComplex};
use crate::tree::{sweep_forest, sweep_tree, Dendrogram};

/// Hard cap on cells visited during support discovery.
const CELL_CAP: usize = 1_000_000;

/// The analytic families a density spec can take.
#[derive(Debug, Clone, PartialEq)]
pub enum MixtureFamily {
    /// Weighted isotropic normal bumps: weight, center, standard deviation
    /// per component.
    GaussianMixture {
        weights: Vec<f64>,
        means: Vec<Vec<f64>>,
        scales: Vec<f64>,
    },
    /// Weighted indicators of half-open boxes `[lo, hi)`.
    BoxMixture {
        weights: Vec<f64>,
        boxes: Vec<(Vec<f64>, Vec<f64>)>,
    },
}

/// An analytic density with an evaluation oracle and a certified Lipschitz
/// bound.
#[derive(Debug, Clone, PartialEq)]
pub struct DensitySpec {
    dim: usize,
    family: MixtureFamily,
    lipschitz_bound: f64,
    modes: Option<Vec<Vec<f64>>>,
}

impl DensitySpec {
    /// A mixture of isotropic normal bumps. Weights must be positive and
    /// sum to one. The Lipschitz bound is the analytic one: the sum over
    /// components of the weight times the component's peak gradient norm.
    pub fn gaussian_mixture(
        dim: usize,
        weights: Vec<f64>,
        means: Vec<Vec<f64>>,
        scales: Vec<f64>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDensity("dimension must be at least 1".into()));
        }
        if weights.is_empty() || weights.len() != means.len() || weights.len() != scales.len() {
            return Err(Error::InvalidDensity(
                "weights, means, and scales must have equal nonzero length".into(),
            ));
        }
        validate_weights(&weights)?;
        for mean in &means {
            if mean.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: mean.len(),
                });
            }
        }
        for &s in &scales {
            if !(s > 0.0) || !s.is_finite() {
                return Err(Error::InvalidDensity(format!(
                    "component scale must be positive, got {s}"
                )));
            }
        }
        // Peak gradient of an isotropic normal: attained at radius sigma.
        let lipschitz_bound = weights
            .iter()
            .zip(&scales)
            .map(|(&w, &s)| {
                let norm = (2.0 * std::f64::consts::PI * s * s).powf(-(dim as f64) / 2.0);
                w * norm * (-0.5f64).exp() / s
            })
            .sum();
        Ok(DensitySpec {
            dim,
            family: MixtureFamily::GaussianMixture {
                weights,
                means,
                scales,
            },
            lipschitz_bound,
            modes: None,
        })
    }

    /// A weighted sum of half-open box indicators. Discontinuous, so no
    /// finite Lipschitz bound exists; the stored bound is zero, which makes
    /// the discretization certificates meaningful only when the grid is
    /// aligned with the box faces.
    pub fn box_mixture(
        dim: usize,
        weights: Vec<f64>,
        boxes: Vec<(Vec<f64>, Vec<f64>)>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDensity("dimension must be at least 1".into()));
        }
        if weights.is_empty() || weights.len() != boxes.len() {
            return Err(Error::InvalidDensity(
                "weights and boxes must have equal nonzero length".into(),
            ));
        }
        validate_weights(&weights)?;
        for (lo, hi) in &boxes {
            if lo.len() != dim || hi.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: lo.len().max(hi.len()),
                });
            }
            if lo.iter().zip(hi).any(|(&a, &b)| !(a < b)) {
                return Err(Error::InvalidDensity(
                    "box corners must satisfy lo < hi per axis".into(),
                ));
            }
        }
        Ok(DensitySpec {
            dim,
            family: MixtureFamily::BoxMixture { weights, boxes },
            lipschitz_bound: 0.0,
            modes: None,
        })
    }

    /// Overrides the certified Lipschitz bound (caller asserts validity).
    pub fn with_lipschitz_bound(mut self, bound: f64) -> Self {
        self.lipschitz_bound = bound;
        self
    }

    /// Attaches known mode locations, used as extra discretization seeds
    /// and for diagnostics.
    pub fn with_modes(mut self, modes: Vec<Vec<f64>>) -> Self {
        self.modes = Some(modes);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn family(&self) -> &MixtureFamily {
        &self.family
    }

    pub fn lipschitz_bound(&self) -> f64 {
        self.lipschitz_bound
    }

    pub fn modes(&self) -> Option<&[Vec<f64>]> {
        self.modes.as_deref()
    }

    /// Density value at a point.
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        match &self.family {
            MixtureFamily::GaussianMixture {
                weights,
                means,
                scales,
            } => {
                let mut total = 0.0;
                for ((w, mean), s) in weights.iter().zip(means).zip(scales) {
                    let r2: f64 = x
                        .iter()
                        .zip(mean)
                        .map(|(&xi, &mi)| (xi - mi) * (xi - mi))
                        .sum();
                    let norm = (2.0 * std::f64::consts::PI * s * s).powf(-(self.dim as f64) / 2.0);
                    total += w * norm * (-r2 / (2.0 * s * s)).exp();
                }
                total
            }
            MixtureFamily::BoxMixture { weights, boxes } => {
                let mut total = 0.0;
                for (w, (lo, hi)) in weights.iter().zip(boxes) {
                    let inside = x
                        .iter()
                        .zip(lo.iter().zip(hi))
                        .all(|(&xi, (&l, &h))| l <= xi && xi < h);
                    if inside {
                        total += w;
                    }
                }
                total
            }
        }
    }

    /// Starting points for support discovery: component centers plus any
    /// declared modes.
    pub fn seed_points(&self) -> Vec<Vec<f64>> {
        let mut seeds: Vec<Vec<f64>> = match &self.family {
            MixtureFamily::GaussianMixture { means, .. } => means.clone(),
            MixtureFamily::BoxMixture { boxes, .. } => boxes
                .iter()
                .map(|(lo, hi)| lo.iter().zip(hi).map(|(&a, &b)| (a + b) / 2.0).collect())
                .collect(),
        };
        if let Some(modes) = &self.modes {
            seeds.extend(modes.iter().cloned());
        }
        seeds
    }
}

fn validate_weights(weights: &[f64]) -> Result<()> {
    let mut sum = 0.0;
    for &w in weights {
        if !(w > 0.0) || !w.is_finite() {
            return Err(Error::InvalidDensity(format!(
                "weights must be positive, got {w}"
            )));
        }
        sum += w;
    }
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidDensity(format!(
            "weights must sum to 1, got {sum}"
        )));
    }
    Ok(())
}

/// Two-sided bracket of a cell's supremum from closure sampling.
#[derive(Debug, Clone, PartialEq)]
pub struct CellSup {
    /// Largest sampled value; a lower bound on the supremum, and the level
    /// the discretizer assigns.
    pub lower: f64,
    /// `lower` plus the Lipschitz slack for the sample spacing; the true
    /// supremum over the closed cell is at most this.
    pub certified_upper: f64,
}

/// Samples the density on a `k^d` lattice over the closed cell, corners
/// included. The true supremum lies in `[lower, certified_upper]`.
pub fn sup_on_cell(
    spec: &DensitySpec,
    cell: &CellId,
    grid: &ShiftedGrid,
    samples_per_axis: usize,
) -> Result<CellSup> {
    let lower = sample_max(spec, cell, grid, samples_per_axis, false)?;
    let slack = sampling_slack(spec, grid, samples_per_axis);
    Ok(CellSup {
        lower,
        certified_upper: lower + slack,
    })
}

fn sampling_slack(spec: &DensitySpec, grid: &ShiftedGrid, samples_per_axis: usize) -> f64 {
    spec.lipschitz_bound() * grid.scale() * (grid.dim() as f64).sqrt()
        / (samples_per_axis as f64 - 1.0)
}

/// Max of the density over the sample lattice; with `half_open` the samples
/// on upper faces are skipped so only points inside the half-open cell
/// count.
fn sample_max(
    spec: &DensitySpec,
    cell: &CellId,
    grid: &ShiftedGrid,
    k: usize,
    half_open: bool,
) -> Result<f64> {
    if k < 2 {
        return Err(Error::InvalidDensity(
            "samples_per_axis must be at least 2".into(),
        ));
    }
    let b = grid.cell_box(cell)?;
    let d = grid.dim();
    let step = grid.scale() / (k as f64 - 1.0);
    let mut idx = vec![0usize; d];
    let mut best = f64::NEG_INFINITY;
    loop {
        if !(half_open && idx.iter().any(|&j| j == k - 1)) {
            let point: Vec<f64> = idx
                .iter()
                .zip(&b.lo)
                .map(|(&j, &lo)| lo + j as f64 * step)
                .collect();
            let v = spec.evaluate(&point);
            if v > best {
                best = v;
            }
        }
        let mut axis = 0;
        loop {
            if axis == d {
                return Ok(best);
            }
            idx[axis] += 1;
            if idx[axis] < k {
                break;
            }
            idx[axis] = 0;
            axis += 1;
        }
    }
}

/// A discretized density with its certificate.
#[derive(Debug, Clone)]
pub struct DiscretizeOutput {
    pub complex: RegionComplex,
    pub eta: f64,
    pub scale: f64,
    pub samples_per_axis: usize,
    /// Certified bound on the sup-norm distance between the analytic
    /// density and the discretization.
    pub certified_sup_norm: f64,
}

/// Discretizes a density at threshold `eta` on a grid of the given scale:
/// keeps every cell whose sampled supremum (over the half-open cell)
/// reaches `eta`, with the sampled closure supremum as its level. The
/// result must come out connected with the internally connected property;
/// a disconnected support means `eta` is too large for this scale.
pub fn discretize(
    spec: &DensitySpec,
    eta: f64,
    grid_scale: f64,
    samples_per_axis: usize,
) -> Result<DiscretizeOutput> {
    let out = discretize_unchecked(spec, eta, grid_scale, samples_per_axis)?;
    let report = out.complex.classify();
    if !report.in_f_int {
        let why = report
            .witness
            .map(|w| w.to_string())
            .unwrap_or_else(|| "not in F_int".into());
        return Err(Error::NotInClassF(format!(
            "discretization at eta={eta}, scale={grid_scale} failed: {why}"
        )));
    }
    Ok(out)
}

/// Discretization without the class check; the support may come out
/// disconnected (several level-set islands), which the convergence
/// experiment handles as a forest.
pub fn discretize_unchecked(
    spec: &DensitySpec,
    eta: f64,
    grid_scale: f64,
    samples_per_axis: usize,
) -> Result<DiscretizeOutput> {
    if !(eta > 0.0) || !eta.is_finite() {
        return Err(Error::InvalidDensity(format!(
            "eta must be positive, got {eta}"
        )));
    }
    let grid = ShiftedGrid::new(spec.dim(), grid_scale)?;
    let slack = sampling_slack(spec, &grid, samples_per_axis);

    let mut visited: BTreeSet<CellId> = BTreeSet::new();
    let mut kept: Vec<(CellId, f64)> = Vec::new();
    let mut queue: VecDeque<CellId> = VecDeque::new();
    for seed in spec.seed_points() {
        let cell = grid.cell_of(&seed)?;
        if visited.insert(cell.clone()) {
            queue.push_back(cell);
        }
    }
    while let Some(cell) = queue.pop_front() {
        if visited.len() > CELL_CAP {
            return Err(Error::ExcessiveCells(visited.len(), CELL_CAP));
        }
        let reaches = sample_max(spec, &cell, &grid, samples_per_axis, true)? >= eta;
        if !reaches {
            continue;
        }
        let level = sample_max(spec, &cell, &grid, samples_per_axis, false)?;
        kept.push((cell.clone(), level));
        for next in grid.cell_neighbors(&cell)? {
            if visited.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    if kept.is_empty() {
        return Err(Error::EmptySupport(eta));
    }
    kept.sort_by(|(a, _), (b, _)| a.cmp(b));

    let cells: Vec<(CellId, Rational)> = kept
        .into_iter()
        .map(|(cell, level)| Ok((cell, rational_from_f64(level)?)))
        .collect::<Result<_>>()?;
    let complex = RegionComplex::from_cells(cells, grid)?;

    let l_term = spec.lipschitz_bound() * grid_scale * (spec.dim() as f64).sqrt();
    Ok(DiscretizeOutput {
        complex,
        eta,
        scale: grid_scale,
        samples_per_axis,
        certified_sup_norm: eta.max(l_term) + slack,
    })
}

/// One row of the convergence experiment.
#[derive(Debug, Clone)]
pub struct ConvergenceRow {
    pub scale: f64,
    pub eta_used: f64,
    /// Certified sup-norm bound for this discretization.
    pub sup_norm_bound: f64,
    /// Largest sampled |f - g| over the experiment's sample points.
    pub sup_norm_sampled: f64,
    /// Largest sampled merge-height difference against the exact merge
    /// heights of the analytic density.
    pub d_m_to_truth: f64,
    pub cell_count: usize,
    pub in_f_int: bool,
}

/// Rows of the convergence experiment, coarsest scale first.
#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    pub lipschitz_bound: f64,
}

impl ConvergenceReport {
    /// Every row's sampled merge distortion within its certified bound.
    pub fn all_rows_within_bound(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.d_m_to_truth <= r.sup_norm_bound)
    }

    /// The sampled merge distortion never grows as the scale shrinks.
    pub fn d_m_non_increasing(&self) -> bool {
        self.rows
            .windows(2)
            .all(|w| w[1].d_m_to_truth <= w[0].d_m_to_truth)
    }

    /// CSV with one row per scale.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "scale,eta_used,sup_norm_bound,sup_norm_sampled,d_M_to_truth,cell_count,in_F_int\n",
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.scale,
                r.eta_used,
                r.sup_norm_bound,
                r.sup_norm_sampled,
                r.d_m_to_truth,
                r.cell_count,
                r.in_f_int
            ));
        }
        out
    }
}

/// Exact merge height of the analytic density on the line: connected sets
/// are intervals, so the merge height of two points is the minimum of the
/// density between them, here by dense scan.
fn line_merge_height(spec: &DensitySpec, x: f64, y: f64) -> f64 {
    let (a, b) = if x <= y { (x, y) } else { (y, x) };
    let steps = (((b - a) / 0.002).ceil() as usize).max(1);
    let mut min = f64::INFINITY;
    for i in 0..=steps {
        let t = a + (b - a) * i as f64 / steps as f64;
        let v = spec.evaluate(&[t]);
        if v < min {
            min = v;
        }
    }
    min
}

/// Runs the discretization at each scale with `eta = L·scale·√d`, builds
/// the level-set forest, and compares its merge heights against the exact
/// ones at sampled point pairs. Only densities on the line have the exact
/// oracle.
pub fn convergence_experiment(
    spec: &DensitySpec,
    scales: &[f64],
    pair_samples: usize,
    samples_per_axis: usize,
    seed: u64,
) -> Result<ConvergenceReport> {
    if spec.dim() != 1 {
        return Err(Error::TruthOracleUnavailable(spec.dim()));
    }
    if scales.is_empty() || scales.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidDensity(
            "scales must be a nonempty strictly decreasing list".into(),
        ));
    }
    let l = spec.lipschitz_bound();
    let dim_factor = (spec.dim() as f64).sqrt();

    // Sample pairs from a box around the coarsest support, fixed across
    // rows so values are comparable.
    let first = discretize_unchecked(spec, l * scales[0] * dim_factor, scales[0], samples_per_axis)?;
    let (lo, hi) = first
        .complex
        .bounding_box()
        .expect("discretization has cells");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(f64, f64)> = (0..pair_samples)
        .map(|_| {
            (
                rng.random_range(lo[0] - 1.0..hi[0] + 1.0),
                rng.random_range(lo[0] - 1.0..hi[0] + 1.0),
            )
        })
        .collect();
    let truth: Vec<f64> = pairs
        .iter()
        .map(|&(x, y)| line_merge_height(spec, x, y))
        .collect();

    let mut rows = Vec::with_capacity(scales.len());
    for &scale in scales {
        let eta = l * scale * dim_factor;
        let out = if scale == scales[0] {
            first.clone()
        } else {
            discretize_unchecked(spec, eta, scale, samples_per_axis)?
        };
        let complex = &out.complex;
        let forest = sweep_forest(complex, Adjacency::Touch)?;
        let index = MergeIndex::from_forest(&forest);

        let mut d_m = 0.0f64;
        let mut sup_sampled = 0.0f64;
        for (&(x, y), &m_true) in pairs.iter().zip(&truth) {
            let rx = complex.region_at(&[x])?;
            let ry = complex.region_at(&[y])?;
            let m_disc = rational_to_f64(&index.merge_height_opt(rx, ry));
            d_m = d_m.max((m_disc - m_true).abs());
            for &p in &[x, y] {
                let g = rational_to_f64(&complex.density_at(&[p])?);
                sup_sampled = sup_sampled.max((spec.evaluate(&[p]) - g).abs());
            }
        }
        log::debug!(
            "convergence row: scale={scale} eta={eta} cells={} d_m={d_m}",
            complex.len()
        );
        rows.push(ConvergenceRow {
            scale,
            eta_used: eta,
            sup_norm_bound: out.certified_sup_norm,
            sup_norm_sampled: sup_sampled,
            d_m_to_truth: d_m,
            cell_count: complex.len(),
            in_f_int: complex.classify().in_f_int,
        });
    }
    Ok(ConvergenceReport {
        rows,
        lipschitz_bound: l,
    })
}

/// A discretized bimodal density with the height at which its tree splits.
#[derive(Debug, Clone)]
pub struct SplitReport {
    pub tree: Dendrogram,
    pub complex: RegionComplex,
    /// Height of the first node, walking up from the root, with at least
    /// two children: the level at which the upper level set splits. For a
    /// bimodal density this approximates the saddle value.
    pub split_height: f64,
    /// Certified tolerance `L·scale·√d` on that approximation.
    pub tolerance: f64,
}

/// Discretizes at `eta = L·scale·√d` and finds the height at which the
/// level-set tree first splits into two branches. Errors with
/// [`Error::NoSplit`] when the tree is a bare chain (unimodal at this
/// resolution).
pub fn split_fixture(
    spec: &DensitySpec,
    grid_scale: f64,
    samples_per_axis: usize,
) -> Result<SplitReport> {
    let l = spec.lipschitz_bound();
    let tolerance = l * grid_scale * (spec.dim() as f64).sqrt();
    let out = discretize(spec, tolerance, grid_scale, samples_per_axis)?;
    let tree = sweep_tree(&out.complex, Adjacency::Touch)?;

    let mut node = tree.root();
    loop {
        let children = tree.children(node);
        match children.len() {
            0 => return Err(Error::NoSplit),
            1 => node = children[0],
            _ => {
                let split_height = rational_to_f64(&tree.nodes()[node].height);
                return Ok(SplitReport {
                    tree,
                    complex: out.complex,
                    split_height,
                    tolerance,
                });
            }
        }
    }
}

/// Largest sampled |f - g| between a density and a complex, over uniform
/// points from the complex's padded bounding box. A sampled check of the
/// discretization certificate.
pub fn sup_norm_sampled(
    spec: &DensitySpec,
    complex: &RegionComplex,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    let (lo, hi) = complex.bounding_box().ok_or(Error::MissingGeometry)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let p: Vec<f64> = lo
            .iter()
            .zip(&hi)
            .map(|(&a, &b)| rng.random_range(a - 0.5..b + 0.5))
            .collect();
        let g = rational_to_f64(&complex.density_at(&p)?);
        worst = worst.max((spec.evaluate(&p) - g).abs());
    }
    Ok(worst)
}

/// Cells of a complex grouped with their levels, for tests and reports.
pub fn cell_levels(complex: &RegionComplex) -> HashMap<Vec<i64>, Rational> {
    let mut out = HashMap::new();
    for region in complex.regions() {
        for cell in &region.cells {
            out.insert(cell.units().to_vec(), region.level.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{bimodal_mixture_1d, bimodal_mixture_2d};
    use crate::rational::ratio;

    /// Dense 1-D scan for the maximum absolute slope, the test-side
    /// Lipschitz oracle.
    fn dense_scan_slope(spec: &DensitySpec, lo: f64, hi: f64, steps: usize) -> f64 {
        let mut worst = 0.0f64;
        let h = (hi - lo) / steps as f64;
        let mut prev = spec.evaluate(&[lo]);
        for i in 1..=steps {
            let x = lo + h * i as f64;
            let v = spec.evaluate(&[x]);
            worst = worst.max(((v - prev) / h).abs());
            prev = v;
        }
        worst
    }

    #[test]
    fn gaussian_evaluation_matches_known_values() {
        let spec =
            DensitySpec::gaussian_mixture(1, vec![1.0], vec![vec![0.0]], vec![1.0]).unwrap();
        assert!((spec.evaluate(&[0.0]) - 0.3989422804014327).abs() < 1e-15);
        assert!((spec.evaluate(&[1.0]) - 0.24197072451914337).abs() < 1e-15);
    }

    #[test]
    fn analytic_lipschitz_bound_dominates_dense_scan() {
        let spec = bimodal_mixture_1d();
        let scanned = dense_scan_slope(&spec, -6.0, 6.0, 200_000);
        assert!(scanned <= spec.lipschitz_bound());
        // The bound is not wildly loose either: the single-bump peak slope
        // scaled by the heaviest weight is attainable up to cross terms.
        assert!(scanned > 0.5 * spec.lipschitz_bound());
    }

    #[test]
    fn weights_are_validated() {
        assert!(DensitySpec::gaussian_mixture(
            1,
            vec![0.5, 0.4],
            vec![vec![0.0], vec![1.0]],
            vec![1.0, 1.0]
        )
        .is_err());
        assert!(DensitySpec::gaussian_mixture(1, vec![-1.0, 2.0], vec![vec![0.0], vec![1.0]], vec![1.0, 1.0]).is_err());
        assert!(DensitySpec::box_mixture(1, vec![1.0], vec![(vec![1.0], vec![0.0])]).is_err());
    }

    #[test]
    fn sup_on_constant_cell_is_exact() {
        let spec =
            DensitySpec::box_mixture(1, vec![1.0], vec![(vec![-10.0], vec![10.0])]).unwrap();
        let grid = ShiftedGrid::new(1, 1.0).unwrap();
        let cell = grid.cell_of(&[0.5]).unwrap();
        let sup = sup_on_cell(&spec, &cell, &grid, 5).unwrap();
        assert_eq!(sup.lower, 1.0);
        // Zero Lipschitz bound collapses the bracket.
        assert_eq!(sup.certified_upper, 1.0);
    }

    #[test]
    fn sup_on_gaussian_cells_hits_the_corner() {
        let spec =
            DensitySpec::gaussian_mixture(1, vec![1.0], vec![vec![0.0]], vec![1.0]).unwrap();
        let grid = ShiftedGrid::new(1, 1.0).unwrap();
        // Decreasing on [0, 1): the supremum is at the sampled corner 0.
        let c0 = grid.cell_of(&[0.5]).unwrap();
        let sup = sup_on_cell(&spec, &c0, &grid, 11).unwrap();
        assert!((sup.lower - 0.3989422804014327).abs() < 1e-15);
        assert!(sup.certified_upper >= sup.lower);
        // Same on [1, 2).
        let c1 = grid.cell_of(&[1.5]).unwrap();
        let sup = sup_on_cell(&spec, &c1, &grid, 11).unwrap();
        assert!((sup.lower - 0.24197072451914337).abs() < 1e-15);
    }

    #[test]
    fn sup_requires_two_samples() {
        let spec = bimodal_mixture_1d();
        let grid = ShiftedGrid::new(1, 1.0).unwrap();
        let cell = grid.cell_of(&[0.0]).unwrap();
        assert!(sup_on_cell(&spec, &cell, &grid, 1).is_err());
    }

    #[test]
    fn discretize_bimodal_connected_chain() {
        let out = discretize(&bimodal_mixture_1d(), 0.02, 0.25, 11).unwrap();
        let report = out.complex.classify();
        assert!(report.in_f);
        assert!(report.in_f_int);
        assert!(out.complex.len() > 20);
        // Sampled deviation stays within the certificate.
        let sampled = sup_norm_sampled(&bimodal_mixture_1d(), &out.complex, 4000, 3).unwrap();
        assert!(sampled <= out.certified_sup_norm + 1e-12);
    }

    #[test]
    fn discretize_rejects_threshold_above_maximum() {
        let spec = bimodal_mixture_1d();
        assert!(matches!(
            discretize(&spec, 1.0, 0.25, 9),
            Err(Error::EmptySupport(_))
        ));
    }

    #[test]
    fn discretize_reports_disconnection() {
        // 0.07 sits above the saddle (~0.0525), so the support splits in
        // two; the strict entry point refuses, the unchecked one reports.
        let spec = bimodal_mixture_1d();
        assert!(matches!(
            discretize(&spec, 0.07, 0.0625, 9),
            Err(Error::NotInClassF(_))
        ));
        let out = discretize_unchecked(&spec, 0.07, 0.0625, 9).unwrap();
        assert!(!out.complex.classify().in_f);
        let forest = sweep_forest(&out.complex, Adjacency::Touch).unwrap();
        assert_eq!(forest.len(), 2);
    }

    #[test]
    fn aligned_box_discretizes_exactly() {
        let spec = DensitySpec::box_mixture(1, vec![1.0], vec![(vec![0.0], vec![1.0])]).unwrap();
        let out = discretize(&spec, 0.5, 0.5, 9).unwrap();
        assert_eq!(out.complex.len(), 2);
        for region in out.complex.regions() {
            assert_eq!(region.level, ratio(1, 1));
        }
        let tree = sweep_tree(&out.complex, Adjacency::Touch).unwrap();
        assert_eq!(tree.len(), 1);
        // The kept support is exactly the box: g matches f everywhere.
        assert_eq!(out.complex.region_at(&[-0.25]).unwrap(), None);
        assert_eq!(out.complex.region_at(&[1.25]).unwrap(), None);
        assert!(out.complex.region_at(&[0.25]).unwrap().is_some());
    }

    #[test]
    fn convergence_on_constant_box_is_exact() {
        let spec = DensitySpec::box_mixture(1, vec![1.0], vec![(vec![0.0], vec![1.0])]).unwrap();
        // Zero Lipschitz bound would give eta = 0; give the box a small
        // positive threshold by overriding the bound.
        let spec = spec.with_lipschitz_bound(0.5);
        let report = convergence_experiment(&spec, &[0.5, 0.25], 300, 9, 11).unwrap();
        for row in &report.rows {
            assert_eq!(row.d_m_to_truth, 0.0);
            assert!(row.in_f_int);
        }
    }

    #[test]
    fn convergence_requires_line_densities() {
        let spec = bimodal_mixture_2d();
        assert!(matches!(
            convergence_experiment(&spec, &[0.25], 10, 9, 0),
            Err(Error::TruthOracleUnavailable(2))
        ));
    }

    #[test]
    fn convergence_rejects_unsorted_scales() {
        let spec = bimodal_mixture_1d();
        assert!(convergence_experiment(&spec, &[0.25, 0.5], 10, 9, 0).is_err());
        assert!(convergence_experiment(&spec, &[], 10, 9, 0).is_err());
    }

    #[test]
    fn split_height_tracks_the_saddle_on_the_line() {
        let spec = bimodal_mixture_1d();
        let report = split_fixture(&spec, 0.0625, 11).unwrap();
        // Dense-scan oracle for the interior local minimum between the modes.
        let mut saddle = f64::INFINITY;
        for i in 0..=4000 {
            let x = -2.0 + 4.0 * i as f64 / 4000.0;
            saddle = saddle.min(spec.evaluate(&[x]));
        }
        assert!((report.split_height - saddle).abs() <= report.tolerance);
    }

    #[test]
    fn split_height_at_symmetric_2d_saddle() {
        let spec = bimodal_mixture_2d();
        let report = split_fixture(&spec, 0.125, 7).unwrap();
        // By symmetry the saddle is the midpoint of the two centers.
        let saddle = spec.evaluate(&[0.0, 0.0]);
        assert!((report.split_height - saddle).abs() <= report.tolerance);
    }

    #[test]
    fn unimodal_density_never_splits() {
        let spec =
            DensitySpec::gaussian_mixture(1, vec![1.0], vec![vec![0.0]], vec![1.0]).unwrap();
        assert!(matches!(
            split_fixture(&spec, 0.25, 9),
            Err(Error::NoSplit)
        ));
    }
}
