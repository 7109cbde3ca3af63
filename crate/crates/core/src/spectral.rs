//! Spectral applications: transfer-matrix cocycles over words with
//! log-scale renormalization, Lyapunov exponents via the subadditive
//! engine, finite-range invariant operators on words, Sturm-sequence
//! eigenvalue counting, and the integrated density of states of window
//! restrictions.
//!
//! The transfer matrix at energy E over a site with potential a is
//!   T(E, a) = [[E - a, -1], [1, 0]],
//! a determinant-one matrix; products over a word are taken letter by
//! letter in antimultiplicative order (the last letter's matrix acts
//! first from the left in the product M(w) = T(w_n) ... T(w_1)).

use crate::ergodic::{self, ErgodicError, MeansReport, SubadditiveFn};
use crate::scalar::{MatScalar, Real};
use crate::words::{ByteBudget, Generator, Letter, Word, WordsError};
use num_traits::{Float, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

/// Renormalization band: the running product is rescaled to unit Frobenius
/// norm whenever the norm leaves [2^-64, 2^64].
pub const RENORM_EXP: i32 = 64;

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error(transparent)]
    Words(#[from] WordsError),
    #[error(transparent)]
    Ergodic(#[from] ErgodicError),
    #[error("word uses symbol {symbol} but the potential covers only {alphabet} letters")]
    SymbolOutsidePotential { symbol: u8, alphabet: usize },
    #[error("rule radius must be >= 1")]
    ZeroRadius,
    #[error("prefix of {required} letters needed for the requested windows")]
    InsufficientPrefix { required: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// A 2x2 matrix over a real or complex scalar.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2<S: MatScalar> {
    pub m: [[S; 2]; 2],
}

impl<S: MatScalar> Mat2<S> {
    pub fn new(m: [[S; 2]; 2]) -> Self {
        Mat2 { m }
    }

    pub fn identity() -> Self {
        Mat2 {
            m: [[S::one(), S::zero()], [S::zero(), S::one()]],
        }
    }

    pub fn mul(&self, rhs: &Mat2<S>) -> Mat2<S> {
        let a = &self.m;
        let b = &rhs.m;
        Mat2 {
            m: [
                [
                    a[0][0] * b[0][0] + a[0][1] * b[1][0],
                    a[0][0] * b[0][1] + a[0][1] * b[1][1],
                ],
                [
                    a[1][0] * b[0][0] + a[1][1] * b[1][0],
                    a[1][0] * b[0][1] + a[1][1] * b[1][1],
                ],
            ],
        }
    }

    pub fn det(&self) -> S {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn frobenius_sq(&self) -> S::R {
        self.m[0][0].modulus_sq()
            + self.m[0][1].modulus_sq()
            + self.m[1][0].modulus_sq()
            + self.m[1][1].modulus_sq()
    }

    /// Largest singular value, in closed form: with t the squared Frobenius
    /// norm and d the squared determinant modulus, the singular values
    /// satisfy s1^2 + s2^2 = t and s1^2 s2^2 = d.
    pub fn spectral_norm(&self) -> S::R {
        let t = self.frobenius_sq();
        let d = self.det().modulus_sq();
        let four = <S::R>::of(4.0);
        let disc = (t * t - four * d).max(<S::R as Zero>::zero());
        let half = <S::R>::of(0.5);
        ((t + disc.sqrt()) * half).sqrt()
    }

    pub fn scale_down(&self, r: S::R) -> Mat2<S> {
        Mat2 {
            m: [
                [self.m[0][0].div_real(r), self.m[0][1].div_real(r)],
                [self.m[1][0].div_real(r), self.m[1][1].div_real(r)],
            ],
        }
    }
}

/// The transfer matrix T(E, a) = [[E - a, -1], [1, 0]]; determinant one by
/// construction.
pub fn transfer_matrix<S: MatScalar>(energy: S, a: S::R) -> Mat2<S> {
    Mat2::new([
        [energy - S::from_real(a), -S::one()],
        [S::one(), S::zero()],
    ])
}

/// Per-letter potential values; total on the alphabet.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PotentialMap<T: Real> {
    values: Vec<T>,
}

impl<T: Real> PotentialMap<T> {
    pub fn new(values: Vec<T>) -> Result<Self, SpectralError> {
        if values.is_empty() {
            return Err(SpectralError::InvalidParameter(
                "potential needs at least one letter".into(),
            ));
        }
        Ok(PotentialMap { values })
    }

    /// Zero potential on an alphabet of the given size.
    pub fn zero(alphabet: usize) -> Self {
        PotentialMap {
            values: vec![T::zero(); alphabet.max(1)],
        }
    }

    /// Potentials from letter decorations; undecorated letters get zero.
    pub fn from_letters(letters: &[Letter]) -> Result<Self, SpectralError> {
        let size = letters
            .iter()
            .map(|l| l.symbol as usize + 1)
            .max()
            .unwrap_or(0);
        if size == 0 {
            return Err(SpectralError::InvalidParameter(
                "potential needs at least one letter".into(),
            ));
        }
        let mut values = vec![T::zero(); size];
        for l in letters {
            values[l.symbol as usize] = T::of(l.decoration.unwrap_or(0.0));
        }
        Ok(PotentialMap { values })
    }

    pub fn alphabet_size(&self) -> usize {
        self.values.len()
    }

    pub fn value(&self, symbol: u8) -> T {
        self.values[symbol as usize]
    }

    pub fn max_abs(&self) -> T {
        self.values
            .iter()
            .fold(T::zero(), |acc, v| acc.max(v.abs()))
    }

    fn check_word(&self, w: &Word) -> Result<(), SpectralError> {
        if let Some(m) = w.max_symbol() {
            if m as usize >= self.values.len() {
                return Err(SpectralError::SymbolOutsidePotential {
                    symbol: m,
                    alphabet: self.values.len(),
                });
            }
        }
        Ok(())
    }
}

/// A log-renormalized running transfer product: the true product equals
/// `matrix * exp(log_scale)`, with the stored matrix kept at moderate norm.
#[derive(Clone, Debug)]
pub struct TransferState<S: MatScalar> {
    matrix: Mat2<S>,
    log_scale: S::R,
}

impl<S: MatScalar> TransferState<S> {
    pub fn identity() -> Self {
        TransferState {
            matrix: Mat2::identity(),
            log_scale: <S::R as Zero>::zero(),
        }
    }

    pub fn matrix(&self) -> &Mat2<S> {
        &self.matrix
    }

    pub fn log_scale(&self) -> S::R {
        self.log_scale
    }

    /// Left-multiply by the next letter's transfer matrix, renormalizing
    /// when the stored norm leaves the safe band.
    pub fn push_letter(&mut self, energy: S, potential: S::R) {
        self.matrix = transfer_matrix(energy, potential).mul(&self.matrix);
        let norm_sq = self.matrix.frobenius_sq();
        let hi = <S::R>::of(2.0).powi(2 * RENORM_EXP);
        let lo = <S::R>::of(2.0).powi(-2 * RENORM_EXP);
        if norm_sq > hi || norm_sq < lo {
            self.renormalize();
        }
    }

    /// Rescale the stored matrix to unit Frobenius norm, moving the factor
    /// into `log_scale`.
    pub fn renormalize(&mut self) {
        let norm = self.matrix.frobenius_sq().sqrt();
        if norm > <S::R as Zero>::zero() && norm.is_finite() {
            self.matrix = self.matrix.scale_down(norm);
            self.log_scale = self.log_scale + norm.ln();
        }
    }

    /// ln of the spectral norm of the true product.
    pub fn log_norm(&self) -> S::R {
        self.log_scale + self.matrix.spectral_norm().ln()
    }

    /// Unimodularity residual: | |det(stored)| - exp(-2 log_scale) |.
    /// The true product has determinant modulus one, so the stored matrix
    /// should carry exp(-2 log_scale); the comparison happens at the stored
    /// matrix's O(1) scale, where floating-point determinants are meaningful.
    pub fn det_residual(&self) -> S::R {
        let two = <S::R>::of(2.0);
        let expected = (-self.log_scale * two).exp();
        (self.matrix.det().modulus_sq().sqrt() - expected).abs()
    }
}

/// The cocycle product M(E)(w) = T(E, w_n) x ... x T(E, w_1): letters are
/// consumed left to right, each acting by left multiplication, which makes
/// the map antimultiplicative: M(uv) = M(v) M(u).
pub fn cocycle_product<S: MatScalar>(
    energy: S,
    w: &Word,
    pot: &PotentialMap<S::R>,
) -> Result<TransferState<S>, SpectralError> {
    pot.check_word(w)?;
    let mut state = TransferState::identity();
    for &b in w.symbols() {
        state.push_letter(energy, pot.value(b));
    }
    Ok(state)
}

/// F(w) = ln ||M(E)(w)||: subadditive along concatenation because the norm
/// is submultiplicative and the cocycle antimultiplicative.
pub fn log_norm<S: MatScalar>(
    energy: S,
    w: &Word,
    pot: &PotentialMap<S::R>,
) -> Result<S::R, SpectralError> {
    Ok(cocycle_product(energy, w, pot)?.log_norm())
}

/// The log-norm functional as a subadditive word function with zero defect.
/// The linear bound is ln of the largest per-letter matrix norm.
pub fn transfer_log_norm_fn<T>(energy: T, pot: &PotentialMap<T>) -> SubadditiveFn<'_, T>
where
    T: Real + MatScalar<R = T>,
{
    let d_bound = (0..pot.alphabet_size())
        .map(|b| transfer_matrix(energy, pot.value(b as u8)).spectral_norm().ln())
        .fold(<T as Zero>::zero(), T::max);
    let p = pot.clone();
    SubadditiveFn::new(
        move |w: &Word| {
            log_norm(energy, w, &p).expect("alphabet checked at construction")
        },
        |_| <T as Zero>::zero(),
        1,
        d_bound,
    )
}

/// Lyapunov exponent estimate with its convergence table.
#[derive(Clone, Debug, Serialize)]
pub struct LyapunovReport<T: Real> {
    pub energy: T,
    pub gamma: T,
    pub n_max: usize,
    pub gap_at_n_max: T,
    pub means: MeansReport<T>,
}

/// Estimate the Lyapunov exponent at `energy` as the certified infimum of
/// the upper means of ln ||M(E)(w)|| over the generated language, tabulated
/// on the default grid up to `n_max`. Requires an LR-certified generator
/// (the limit exists uniformly there) unless `allow_non_lr` is set.
pub fn lyapunov<T>(
    energy: T,
    generator: &Generator,
    pot: &PotentialMap<T>,
    n_max: usize,
    allow_non_lr: bool,
    budget: ByteBudget,
) -> Result<LyapunovReport<T>, SpectralError>
where
    T: Real + MatScalar<R = T>,
{
    if !allow_non_lr && !generator.lr_certified() {
        return Err(SpectralError::Ergodic(ErgodicError::NotLrCertified));
    }
    let f = transfer_log_norm_fn(energy, pot);
    let means = ergodic::fekete_limit(&f, generator, n_max, budget)?;
    let last = means.entries.last().expect("grid is nonempty");
    Ok(LyapunovReport {
        energy,
        gamma: means.fbar,
        n_max: last.n,
        gap_at_n_max: last.gap,
        means,
    })
}

/// Symmetric tridiagonal operator with constant off-diagonal 1: the
/// nearest-neighbor model on a window, diagonal given by the potential.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TridiagonalOperator<T: Real> {
    pub diagonal: Vec<T>,
}

impl<T: Real> TridiagonalOperator<T> {
    pub fn new(diagonal: Vec<T>) -> Result<Self, SpectralError> {
        if diagonal.is_empty() {
            return Err(SpectralError::InvalidParameter(
                "operator needs size >= 1".into(),
            ));
        }
        Ok(TridiagonalOperator { diagonal })
    }

    pub fn size(&self) -> usize {
        self.diagonal.len()
    }

    pub fn max_abs_potential(&self) -> T {
        self.diagonal
            .iter()
            .fold(T::zero(), |acc, v| acc.max(v.abs()))
    }
}

/// The nearest-neighbor operator of a word window under a potential:
/// diagonal = potential along the window, off-diagonal 1 (Dirichlet
/// truncation at the window ends).
pub fn schrodinger_operator<T: Real>(
    w: &Word,
    pot: &PotentialMap<T>,
) -> Result<TridiagonalOperator<T>, SpectralError> {
    pot.check_word(w)?;
    if w.is_empty() {
        return Err(SpectralError::InvalidParameter(
            "empty window has no operator".into(),
        ));
    }
    TridiagonalOperator::new(w.symbols().iter().map(|&b| pot.value(b)).collect())
}

/// A finite-range rule: matrix entries within distance < radius are read
/// off the radius-neighborhood pattern of the two positions. Entries must
/// be symmetric in the two in-window offsets.
pub trait LocalRule<T: Real> {
    /// Interaction radius R >= 1: entries vanish at distance >= R.
    fn radius(&self) -> usize;
    /// Entry for positions at offsets `i_off <= j_off` inside `window`,
    /// which covers all letters within distance R of the two positions
    /// (clipped at word edges).
    fn entry(&self, window: &[u8], i_off: usize, j_off: usize) -> T;
}

/// Banded symmetric matrix: bands[b][i] = A[i][i+b].
#[derive(Clone, Debug, PartialEq)]
pub struct BandedSymMatrix<T: Real> {
    pub size: usize,
    pub bandwidth: usize,
    bands: Vec<Vec<T>>,
}

impl<T: Real> BandedSymMatrix<T> {
    pub fn entry(&self, i: usize, j: usize) -> T {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        let b = hi - lo;
        if b >= self.bandwidth {
            T::zero()
        } else {
            self.bands[b][lo]
        }
    }

    /// Row i restricted to the band, as (column, value) pairs.
    pub fn row(&self, i: usize) -> Vec<(usize, T)> {
        let mut out = Vec::new();
        let lo = i.saturating_sub(self.bandwidth - 1);
        let hi = (i + self.bandwidth).min(self.size);
        for j in lo..hi {
            out.push((j, self.entry(i, j)));
        }
        out
    }
}

/// Assemble the finite-range operator of `w` under `rule`: entries at
/// |i - j| < R are computed from the radius-R window around i and j;
/// windows clipped by the word edge use the truncated pattern.
pub fn local_operator<T: Real>(
    w: &Word,
    rule: &impl LocalRule<T>,
) -> Result<BandedSymMatrix<T>, SpectralError> {
    let r = rule.radius();
    if r == 0 {
        return Err(SpectralError::ZeroRadius);
    }
    let n = w.len();
    if n == 0 {
        return Err(SpectralError::InvalidParameter(
            "empty word has no operator".into(),
        ));
    }
    let mut bands = Vec::with_capacity(r);
    for b in 0..r {
        let mut band = Vec::with_capacity(n.saturating_sub(b));
        for i in 0..n.saturating_sub(b) {
            let j = i + b;
            let lo = i.saturating_sub(r);
            let hi = (j + r + 1).min(n);
            let window = &w.symbols()[lo..hi];
            band.push(rule.entry(window, i - lo, j - lo));
        }
        bands.push(band);
    }
    Ok(BandedSymMatrix {
        size: n,
        bandwidth: r,
        bands,
    })
}

/// The nearest-neighbor rule as a [`LocalRule`] with radius 2.
pub struct SchroedingerRule<'a, T: Real> {
    pub pot: &'a PotentialMap<T>,
}

impl<T: Real> LocalRule<T> for SchroedingerRule<'_, T> {
    fn radius(&self) -> usize {
        2
    }

    fn entry(&self, window: &[u8], i_off: usize, j_off: usize) -> T {
        match j_off - i_off {
            0 => self.pot.value(window[i_off]),
            1 => T::one(),
            _ => T::zero(),
        }
    }
}

/// Number of eigenvalues of a symmetric tridiagonal matrix strictly below
/// `x`, by the Sturm sign count of the LDL^T pivots.
fn sturm_count_below<T: Real>(diag: &[T], off: &[T], x: T) -> Option<usize> {
    let n = diag.len();
    let mut count = 0usize;
    let mut q = diag[0] - x;
    if q == T::zero() {
        return None; // factorization breakdown: x hits a leading-minor root
    }
    if q < T::zero() {
        count += 1;
    }
    for i in 1..n {
        q = (diag[i] - x) - off[i - 1] * off[i - 1] / q;
        if q == T::zero() {
            return None;
        }
        if q < T::zero() {
            count += 1;
        }
    }
    Some(count)
}

/// Count eigenvalues <= lambda of a general symmetric tridiagonal matrix.
/// Ties resolve toward inclusion by counting strictly below
/// lambda + tie_epsilon with tie_epsilon = 1e-12 * (2 + max |entries|);
/// a factorization breakdown shifts by another tie_epsilon and recounts,
/// deterministically.
pub fn eigen_count_tridiagonal<T: Real>(diag: &[T], off: &[T], lambda: T) -> usize {
    debug_assert_eq!(off.len() + 1, diag.len());
    let scale = diag
        .iter()
        .chain(off.iter())
        .fold(T::zero(), |acc, v| acc.max(v.abs()));
    let tie = T::of(1e-12) * (T::of(2.0) + scale);
    let mut shift = tie;
    loop {
        if let Some(c) = sturm_count_below(diag, off, lambda + shift) {
            return c;
        }
        shift = shift + tie;
    }
}

/// Count eigenvalues <= lambda of the nearest-neighbor window operator.
pub fn eigen_count<T: Real>(op: &TridiagonalOperator<T>, lambda: T) -> usize {
    let off = vec![T::one(); op.size() - 1];
    eigen_count_tridiagonal(&op.diagonal, &off, lambda)
}

/// Normalized eigenvalue-counting curves per window size and offset, with
/// the per-size uniformity spread.
#[derive(Clone, Debug, Serialize)]
pub struct IdsCurve<T: Real> {
    pub size: usize,
    pub offset: usize,
    /// k(lambda) per grid point: eigen count at lambda divided by size.
    pub values: Vec<T>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdsSizeSummary<T: Real> {
    pub size: usize,
    /// sup over lambda of (max over offsets - min over offsets) of k.
    pub spread: T,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdsReport<T: Real> {
    pub lambda_grid: Vec<T>,
    pub curves: Vec<IdsCurve<T>>,
    pub spreads: Vec<IdsSizeSummary<T>>,
}

/// Prefix length used to host the translated windows: 100 x the largest
/// window size, so offsets genuinely probe different local configurations.
pub const IDS_PREFIX_FACTOR: usize = 100;

/// Integrated-density-of-states probe: for each window size and each of
/// `offsets_per_size` evenly spaced window positions in a long generator
/// prefix, tabulate k(lambda) = (eigenvalues <= lambda) / size over the
/// grid, and summarize per size the sup-over-lambda spread across offsets.
pub fn ids<T: Real>(
    generator: &Generator,
    pot: &PotentialMap<T>,
    lambda_grid: &[T],
    sizes: &[usize],
    offsets_per_size: usize,
    budget: ByteBudget,
) -> Result<IdsReport<T>, SpectralError> {
    if sizes.is_empty() || lambda_grid.is_empty() || offsets_per_size == 0 {
        return Err(SpectralError::InvalidParameter(
            "need nonempty sizes, grid, and at least one offset".into(),
        ));
    }
    if sizes.iter().any(|&s| s == 0) {
        return Err(SpectralError::InvalidParameter(
            "window sizes must be >= 1".into(),
        ));
    }
    let max_size = *sizes.iter().max().expect("nonempty");
    let required = IDS_PREFIX_FACTOR * max_size;
    let prefix = generator
        .prefix(required, budget)
        .map_err(|e| match e {
            WordsError::InsufficientDepth { .. } => SpectralError::InsufficientPrefix { required },
            other => SpectralError::Words(other),
        })?;
    pot.check_word(&prefix)?;
    let mut jobs: Vec<(usize, usize)> = Vec::new();
    for &size in sizes {
        for k in 0..offsets_per_size {
            let span = prefix.len() - size;
            let offset = if offsets_per_size == 1 {
                0
            } else {
                k * span / (offsets_per_size - 1)
            };
            jobs.push((size, offset));
        }
    }
    let curves: Vec<IdsCurve<T>> = jobs
        .par_iter()
        .map(|&(size, offset)| {
            let window = prefix.factor(offset, size);
            let op = schrodinger_operator(&window, pot).expect("validated prefix");
            let size_t = T::from_usize(size).expect("size fits");
            let values = lambda_grid
                .iter()
                .map(|&l| T::from_usize(eigen_count(&op, l)).expect("count fits") / size_t)
                .collect();
            IdsCurve {
                size,
                offset,
                values,
            }
        })
        .collect();
    let mut spreads = Vec::with_capacity(sizes.len());
    for &size in sizes {
        let group: Vec<&IdsCurve<T>> = curves.iter().filter(|c| c.size == size).collect();
        let mut spread = T::zero();
        for li in 0..lambda_grid.len() {
            let mut lo = T::infinity();
            let mut hi = T::neg_infinity();
            for c in &group {
                lo = lo.min(c.values[li]);
                hi = hi.max(c.values[li]);
            }
            spread = spread.max(hi - lo);
        }
        spreads.push(IdsSizeSummary { size, spread });
    }
    Ok(IdsReport {
        lambda_grid: lambda_grid.to_vec(),
        curves,
        spreads,
    })
}
