//! Exact integer/rational f-vector algebra: Dehn–Sommerville residuals,
//! the universal completion coefficients, d-vectors of bistellar moves,
//! hat-f-vectors and the virtual-move plan solver.
//!
//! Everything here is exact arithmetic on big integers and rationals; there
//! is no floating point anywhere in the crate.

use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FvError {
    #[error("move type {i} outside [0, {n}]")]
    BadType { n: usize, i: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("Euler characteristics differ: {0} vs {1}")]
    ChiMismatch(BigRational, BigRational),
    #[error("Dehn-Sommerville residual nonzero at index {index}: {value}")]
    ResidualNonzero { index: i32, value: BigRational },
    #[error("plan verification failed: {0}")]
    VerificationFailed(String),
    #[error("non-integral completion coefficient at (i={i}, j={j}): {value}")]
    NonIntegralCoefficient { i: i32, j: i32, value: BigRational },
}

/// Binomial coefficient, zero whenever the arguments fall out of range.
pub fn binomial(a: i64, b: i64) -> BigInt {
    if b < 0 || b > a || a < 0 {
        return BigInt::zero();
    }
    let b = b.min(a - b);
    let mut result = BigInt::one();
    for t in 1..=b {
        result = result * BigInt::from(a - b + t) / BigInt::from(t);
    }
    result
}

fn sign(pow: i64) -> BigInt {
    if pow.rem_euclid(2) == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

fn ratio_int(i: BigInt) -> BigRational {
    BigRational::from_integer(i)
}

/// The f-vector (f_0, …, f_n) of an n-complex together with the paper's
/// extra slot f_{-1} := χ/2, kept as an exact rational.
///
/// Vectors read off concrete complexes always have f_{-1} = χ/2 and
/// nonnegative counts; vectors produced by virtual moves are flagged and
/// may carry any integers.
#[derive(Debug, Clone)]
pub struct FVector {
    n: usize,
    chi_half: BigRational,
    counts: Vec<BigInt>,
    is_virtual: bool,
}

impl PartialEq for FVector {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.chi_half == other.chi_half && self.counts == other.counts
    }
}

impl Eq for FVector {}

impl FVector {
    /// Builds from integer counts (f_0..f_n); the χ/2 slot is derived.
    pub fn from_counts(counts: Vec<BigInt>) -> Self {
        assert!(!counts.is_empty(), "an f-vector needs at least f_0");
        let mut chi = BigInt::zero();
        for (k, c) in counts.iter().enumerate() {
            if k % 2 == 0 {
                chi += c;
            } else {
                chi -= c;
            }
        }
        let chi_half = BigRational::new(chi, BigInt::from(2));
        Self { n: counts.len() - 1, chi_half, counts, is_virtual: false }
    }

    pub fn from_u64_counts(counts: &[u64]) -> Self {
        Self::from_counts(counts.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// The all-zero vector of the given dimension (χ/2 = 0).
    pub fn zeros(n: usize) -> Self {
        Self::from_counts(vec![BigInt::zero(); n + 1])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn counts(&self) -> &[BigInt] {
        &self.counts
    }

    pub fn count(&self, k: usize) -> &BigInt {
        &self.counts[k]
    }

    pub fn chi_half(&self) -> &BigRational {
        &self.chi_half
    }

    pub fn chi(&self) -> BigRational {
        &self.chi_half * ratio_int(BigInt::from(2))
    }

    pub fn is_virtual(&self) -> bool {
        self.is_virtual
    }

    pub fn mark_virtual(mut self) -> Self {
        self.is_virtual = true;
        self
    }

    /// The full rational vector (f_{-1}, f_0, …, f_n), length n+2.
    pub fn to_rationals(&self) -> Vec<BigRational> {
        let mut out = Vec::with_capacity(self.n + 2);
        out.push(self.chi_half.clone());
        out.extend(self.counts.iter().cloned().map(ratio_int));
        out
    }

    pub fn to_u64_counts(&self) -> Option<Vec<u64>> {
        self.counts
            .iter()
            .map(|c| u64::try_from(c.clone()).ok())
            .collect()
    }
}

impl fmt::Display for FVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.counts.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// A rational f-vector indexed −1..n; the form hat-f-vectors and
/// completions take.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFVector {
    n: usize,
    entries: Vec<BigRational>,
}

impl RationalFVector {
    pub fn new(n: usize, entries: Vec<BigRational>) -> Self {
        assert_eq!(entries.len(), n + 2, "need entries for indices -1..=n");
        Self { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry at index i, −1 ≤ i ≤ n.
    pub fn at(&self, i: i32) -> &BigRational {
        &self.entries[(i + 1) as usize]
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }

    pub fn from_fvector(fv: &FVector) -> Self {
        Self { n: fv.n(), entries: fv.to_rationals() }
    }
}

impl fmt::Display for RationalFVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries[1..].iter().map(|c| c.to_string()).collect();
        write!(f, "chi/2={}; {}", self.entries[0], parts.join(","))
    }
}

/// The f-vector effect of an n-dimensional bistellar i-move.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DVector {
    n: usize,
    i: usize,
    d: Vec<BigInt>,
}

impl DVector {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn move_type(&self) -> usize {
        self.i
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.d
    }

    pub fn at(&self, k: usize) -> &BigInt {
        &self.d[k]
    }
}

/// d_{k,i} = C(n+1−i, k−i) − C(i+1, n+1−k) for 0 ≤ k ≤ n.
pub fn d_vector(n: usize, i: usize) -> Result<DVector, FvError> {
    if i > n {
        return Err(FvError::BadType { n, i });
    }
    let (ni, ii) = (n as i64, i as i64);
    let d = (0..=ni)
        .map(|k| binomial(ni + 1 - ii, k - ii) - binomial(ii + 1, ni + 1 - k))
        .collect();
    Ok(DVector { n, i, d })
}

/// True when every residual vanishes.
pub fn residuals_zero(residuals: &[BigRational]) -> bool {
    residuals.iter().all(Zero::is_zero)
}

/// Dehn–Sommerville residuals of a closed f-vector, indexed i = −1..n.
///
/// residual_i = f_i − Σ_{j=i}^{n} (−1)^{n−j} C(j+1, i+1) f_j, where the
/// i = −1 row includes the j = −1 term with the χ/2 slot. The vector is
/// zero exactly when the closed Dehn–Sommerville relations hold.
pub fn ds_residual_closed(fv: &FVector) -> Vec<BigRational> {
    ds_residual_closed_entries(fv.n(), &fv.to_rationals())
}

/// Residuals of a rational vector (entries indexed −1..n); used for
/// hat-f-vectors, which satisfy the closed relations entrywise.
pub fn ds_residual_closed_entries(n: usize, entries: &[BigRational]) -> Vec<BigRational> {
    assert_eq!(entries.len(), n + 2);
    let ni = n as i64;
    let mut out = Vec::with_capacity(n + 2);
    for i in -1..=ni {
        let mut acc = entries[(i + 1) as usize].clone();
        for j in i..=ni {
            let coeff = sign(ni - j) * binomial(j + 1, i + 1);
            acc -= ratio_int(coeff) * &entries[(j + 1) as usize];
        }
        out.push(acc);
    }
    out
}

/// Residuals of the bounded Dehn–Sommerville relations:
/// residual_i = (f_i(M) − f_i(∂M)) − Σ_{j=i}^{n} (−1)^{n−j} C(j+1,i+1) f_j(M).
pub fn ds_residual_boundary(
    fv_m: &FVector,
    fv_b: &FVector,
) -> Result<Vec<BigRational>, FvError> {
    let n = fv_m.n();
    if n == 0 || fv_b.n() != n - 1 {
        return Err(FvError::DimensionMismatch(n, fv_b.n() + 1));
    }
    let m = fv_m.to_rationals();
    let mut b = fv_b.to_rationals();
    b.push(BigRational::zero()); // pad f_n(∂M) = 0
    let ni = n as i64;
    let mut out = Vec::with_capacity(n + 2);
    for i in -1..=ni {
        let idx = (i + 1) as usize;
        let mut acc = m[idx].clone() - &b[idx];
        for j in i..=ni {
            let coeff = sign(ni - j) * binomial(j + 1, i + 1);
            acc -= ratio_int(coeff) * &m[(j + 1) as usize];
        }
        out.push(acc);
    }
    Ok(out)
}

/// Index of the last "free" coordinate: ⌊(n−1)/2⌋ (−1 when n = 0).
pub fn lower_end(n: usize) -> i32 {
    (n as i32 - 1).div_euclid(2)
}

/// The universal integer coefficients expressing the upper half of a
/// closed f-vector in terms of (f_{-1}, …, f_{⌊(n−1)/2⌋}).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    n: usize,
    /// Rows for i = ⌊(n+1)/2⌋..n; columns for j = −1..⌊(n−1)/2⌋.
    rows: Vec<Vec<BigInt>>,
}

impl QMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn upper_start(&self) -> i32 {
        lower_end(self.n) + 1
    }

    /// Coefficient q_{ij}, with ⌊(n+1)/2⌋ ≤ i ≤ n and −1 ≤ j ≤ ⌊(n−1)/2⌋.
    pub fn entry(&self, i: i32, j: i32) -> &BigInt {
        let row = (i - self.upper_start()) as usize;
        let col = (j + 1) as usize;
        &self.rows[row][col]
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }
}

/// Solves the closed Dehn–Sommerville system by exact rational elimination,
/// expressing f_i for i ≥ ⌊(n+1)/2⌋ in terms of f_{-1}..f_{⌊(n−1)/2⌋}, and
/// asserts every coefficient is an integer.
pub fn q_matrix(n: usize) -> Result<QMatrix, FvError> {
    assert!(n >= 1, "q_matrix needs n >= 1");
    let ni = n as i64;
    let cols = n + 2; // f_{-1}..f_n
    // One homogeneous row per equation: f_i − Σ_j (−1)^{n−j} C(j+1,i+1) f_j = 0.
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for i in -1..=ni {
        let mut row = vec![BigRational::zero(); cols];
        row[(i + 1) as usize] += BigRational::one();
        for j in i..=ni {
            let coeff = sign(ni - j) * binomial(j + 1, i + 1);
            row[(j + 1) as usize] -= ratio_int(coeff);
        }
        if row.iter().any(|c| !c.is_zero()) {
            rows.push(row);
        }
    }
    // Eliminate with column priority f_n, f_{n−1}, …, so pivots land on the
    // dependent upper coordinates.
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
    let mut used_rows: Vec<usize> = Vec::new();
    for col in (0..cols).rev() {
        let Some(r) = (0..rows.len())
            .find(|r| !used_rows.contains(r) && !rows[*r][col].is_zero())
        else {
            continue;
        };
        let pivot = rows[r][col].clone();
        for c in 0..cols {
            rows[r][c] = &rows[r][c] / &pivot;
        }
        for other in 0..rows.len() {
            if other != r && !rows[other][col].is_zero() {
                let factor = rows[other][col].clone();
                for c in 0..cols {
                    let delta = &factor * &rows[r][c];
                    rows[other][c] -= delta;
                }
            }
        }
        pivot_of_col[col] = Some(r);
        used_rows.push(r);
    }
    let le = lower_end(n);
    let upper_start = le + 1;
    // Sanity: every upper coordinate received a pivot and no lower one did.
    for j in -1..=ni as i32 {
        let col = (j + 1) as usize;
        let has_pivot = pivot_of_col[col].is_some();
        if j >= upper_start && !has_pivot {
            return Err(FvError::NonIntegralCoefficient {
                i: j,
                j: -2,
                value: BigRational::zero(),
            });
        }
        if j <= le && has_pivot {
            return Err(FvError::NonIntegralCoefficient {
                i: j,
                j: -3,
                value: BigRational::zero(),
            });
        }
    }
    let mut out_rows = Vec::new();
    for i in upper_start..=(ni as i32) {
        let r = pivot_of_col[(i + 1) as usize].expect("checked above");
        let mut out = Vec::with_capacity((le + 2) as usize);
        for j in -1..=le {
            let coeff = -rows[r][(j + 1) as usize].clone();
            if !coeff.is_integer() {
                return Err(FvError::NonIntegralCoefficient { i, j, value: coeff });
            }
            out.push(coeff.to_integer());
        }
        // The row must not involve other upper coordinates.
        for j in upper_start..=(ni as i32) {
            if j != i && !rows[r][(j + 1) as usize].is_zero() {
                return Err(FvError::NonIntegralCoefficient {
                    i,
                    j,
                    value: rows[r][(j + 1) as usize].clone(),
                });
            }
        }
        out_rows.push(out);
    }
    Ok(QMatrix { n, rows: out_rows })
}

/// Completes a lower vector (f_{-1}, …, f_{⌊(n−1)/2⌋}) to a full rational
/// f-vector using the universal coefficients.
pub fn complete_f(lower: &[BigRational], n: usize) -> Result<RationalFVector, FvError> {
    let le = lower_end(n);
    let expected = (le + 2) as usize;
    if lower.len() != expected {
        return Err(FvError::DimensionMismatch(lower.len(), expected));
    }
    let q = q_matrix(n)?;
    let mut entries = lower.to_vec();
    for i in (le + 1)..=(n as i32) {
        let mut acc = BigRational::zero();
        for j in -1..=le {
            acc += ratio_int(q.entry(i, j).clone()) * &lower[(j + 1) as usize];
        }
        entries.push(acc);
    }
    Ok(RationalFVector::new(n, entries))
}

/// f(M) − ½ f(∂M) entrywise, including the χ/2 slot.
pub fn hat_f(fv_m: &FVector, fv_b: &FVector) -> Result<RationalFVector, FvError> {
    let n = fv_m.n();
    if n == 0 || fv_b.n() != n - 1 {
        return Err(FvError::DimensionMismatch(n, fv_b.n() + 1));
    }
    let m = fv_m.to_rationals();
    let mut b = fv_b.to_rationals();
    b.push(BigRational::zero());
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let entries = m
        .iter()
        .zip(b.iter())
        .map(|(fm, fb)| fm - &half * fb)
        .collect();
    Ok(RationalFVector::new(n, entries))
}

/// Signed counts x_0..x_{⌊(n−1)/2⌋} of virtual moves: positive entries are
/// i-moves, negative entries (n−i)-moves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VirtualMovePlan {
    n: usize,
    x: Vec<BigInt>,
}

impl VirtualMovePlan {
    pub fn new(n: usize, x: Vec<BigInt>) -> Self {
        let expected = (lower_end(n) + 1).max(0) as usize;
        assert_eq!(x.len(), expected);
        Self { n, x }
    }

    pub fn zero(n: usize) -> Self {
        let len = (lower_end(n) + 1).max(0) as usize;
        Self { n, x: vec![BigInt::zero(); len] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.x
    }

    /// N = Σ |x_i|, the number of bistellar moves the plan realizes.
    pub fn total_moves(&self) -> BigInt {
        self.x.iter().map(|x| x.abs()).sum()
    }

    pub fn negated(&self) -> Self {
        Self { n: self.n, x: self.x.iter().map(|x| -x).collect() }
    }

    /// The realized move types in firing order: |x_i| copies of type i
    /// (or n−i when x_i < 0), lowest i first.
    pub fn realized_types(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (i, x) in self.x.iter().enumerate() {
            let count = x.abs();
            let ty = if x.is_negative() { self.n - i } else { i };
            let mut c = BigInt::zero();
            while c < count {
                out.push(ty);
                c += 1;
            }
        }
        out
    }
}

impl fmt::Display for VirtualMovePlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, x) in self.x.iter().enumerate() {
            if !x.is_zero() {
                parts.push(format!("{i}:{x:+}"));
            }
        }
        if parts.is_empty() {
            write!(f, "N=0")
        } else {
            write!(f, "{}; N={}", parts.join("; "), self.total_moves())
        }
    }
}

/// Solves for the unique plan turning `src` into `dst` by forward
/// substitution on the unit-lower-triangular reduced system, then verifies
/// the full n+1 coordinates.
pub fn solve_virtual_plan(src: &FVector, dst: &FVector) -> Result<VirtualMovePlan, FvError> {
    if src.n() != dst.n() {
        return Err(FvError::DimensionMismatch(src.n(), dst.n()));
    }
    solve_plan_entries(src.n(), &src.to_rationals(), &dst.to_rationals())
}

/// The same solver on rational entry vectors (indexed −1..n); hat-f-vectors
/// go through here.
pub fn solve_plan_entries(
    n: usize,
    src: &[BigRational],
    dst: &[BigRational],
) -> Result<VirtualMovePlan, FvError> {
    assert_eq!(src.len(), n + 2);
    assert_eq!(dst.len(), n + 2);
    if src[0] != dst[0] {
        return Err(FvError::ChiMismatch(src[0].clone(), dst[0].clone()));
    }
    for (label, entries) in [("source", src), ("target", dst)] {
        let residual = ds_residual_closed_entries(n, entries);
        if let Some((idx, value)) = residual
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_zero())
        {
            let _ = label;
            return Err(FvError::ResidualNonzero {
                index: idx as i32 - 1,
                value: value.clone(),
            });
        }
    }
    let m = lower_end(n);
    let mut x: Vec<BigRational> = Vec::new();
    for k in 0..=m {
        // d_{k,i} = C(n+1−i, k−i) on the reduced range; diagonal is 1.
        let mut acc = dst[(k + 1) as usize].clone() - &src[(k + 1) as usize];
        for (i, xi) in x.iter().enumerate().take(k as usize) {
            let coeff = binomial(n as i64 + 1 - i as i64, k as i64 - i as i64);
            acc -= ratio_int(coeff) * xi;
        }
        x.push(acc);
    }
    let mut ints = Vec::with_capacity(x.len());
    for (k, xi) in x.iter().enumerate() {
        if !xi.is_integer() {
            return Err(FvError::VerificationFailed(format!(
                "plan coefficient x_{k} = {xi} is not an integer"
            )));
        }
        ints.push(xi.to_integer());
    }
    let plan = VirtualMovePlan { n, x: ints };
    // Full-coordinate check across all of f_0..f_n.
    let mut current: Vec<BigRational> = src[1..].to_vec();
    for (i, xi) in plan.x.iter().enumerate() {
        let d = d_vector(n, i).expect("type in range");
        for (k, slot) in current.iter_mut().enumerate() {
            *slot += ratio_int(xi * d.at(k));
        }
    }
    if current != dst[1..] {
        return Err(FvError::VerificationFailed(
            "plan does not reproduce the target in all coordinates".into(),
        ));
    }
    Ok(plan)
}

/// fv + Σ x_i 𝐝_i; the result is flagged virtual.
pub fn apply_virtual(fv: &FVector, plan: &VirtualMovePlan) -> Result<FVector, FvError> {
    if fv.n() != plan.n() {
        return Err(FvError::DimensionMismatch(fv.n(), plan.n()));
    }
    let mut counts = fv.counts().to_vec();
    for (i, xi) in plan.coefficients().iter().enumerate() {
        let d = d_vector(fv.n(), i)?;
        for (k, slot) in counts.iter_mut().enumerate() {
            *slot += xi * d.at(k);
        }
    }
    let out = FVector::from_counts(counts).mark_virtual();
    debug_assert_eq!(out.chi_half(), fv.chi_half(), "virtual moves preserve chi");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fv(counts: &[i64]) -> FVector {
        FVector::from_counts(counts.iter().map(|&c| BigInt::from(c)).collect())
    }

    fn assert_zero(residual: &[BigRational]) {
        assert!(residual.iter().all(|r| r.is_zero()), "residual {residual:?}");
    }

    #[test]
    fn binomial_conventions() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(5, 0), BigInt::one());
        assert_eq!(binomial(3, -1), BigInt::zero());
        assert_eq!(binomial(3, 4), BigInt::zero());
    }

    #[test]
    fn d_vector_small_cases() {
        assert_eq!(
            d_vector(2, 0).unwrap().entries(),
            &[BigInt::from(1), BigInt::from(3), BigInt::from(2)]
        );
        assert!(d_vector(2, 1).unwrap().entries().iter().all(|d| d.is_zero()));
        assert_eq!(
            d_vector(3, 1).unwrap().entries(),
            &[BigInt::from(0), BigInt::from(1), BigInt::from(2), BigInt::from(1)]
        );
        assert_eq!(
            d_vector(3, 3).unwrap().entries(),
            &[BigInt::from(-1), BigInt::from(-4), BigInt::from(-6), BigInt::from(-3)]
        );
        assert!(matches!(d_vector(3, 4), Err(FvError::BadType { .. })));
    }

    #[test]
    fn d_vector_antisymmetry_and_middle_zero() {
        for n in 0..=10usize {
            for i in 0..=n {
                let di = d_vector(n, i).unwrap();
                let dni = d_vector(n, n - i).unwrap();
                for k in 0..=n {
                    assert_eq!(*di.at(k), -dni.at(k).clone(), "n={n} i={i} k={k}");
                }
                if 2 * i == n {
                    assert!(di.entries().iter().all(|d| d.is_zero()));
                }
            }
        }
    }

    #[test]
    fn closed_residuals_on_known_vectors() {
        assert_zero(&ds_residual_closed(&fv(&[4, 6, 4])));
        assert_zero(&ds_residual_closed(&fv(&[7, 21, 14])));
        assert_zero(&ds_residual_closed(&fv(&[5, 10, 10, 5])));
        // Perturbed f_2 breaks the i = 1 relation: 6 − (−6 + 15) = −3.
        let residual = ds_residual_closed(&fv(&[4, 6, 5]));
        assert_eq!(residual[2], ratio_int(BigInt::from(-3)));
        assert!(residual.iter().any(|r| !r.is_zero()));
    }

    #[test]
    fn boundary_residuals_on_disks() {
        assert_zero(&ds_residual_boundary(&fv(&[4, 6, 3]), &fv(&[3, 3])).unwrap());
        assert_zero(&ds_residual_boundary(&fv(&[3, 3, 1]), &fv(&[3, 3])).unwrap());
        let bad = ds_residual_boundary(&fv(&[4, 6, 3]), &fv(&[4, 4])).unwrap();
        assert!(bad.iter().any(|r| !r.is_zero()));
        assert!(matches!(
            ds_residual_boundary(&fv(&[4, 6, 3]), &fv(&[3, 3, 1])),
            Err(FvError::DimensionMismatch(..))
        ));
    }

    #[test]
    fn q_matrix_dimension_two_and_three() {
        let q2 = q_matrix(2).unwrap();
        // f_1 = 3 f_0 − 6 f_{-1}; f_2 = 2 f_0 − 4 f_{-1}.
        assert_eq!(*q2.entry(1, -1), BigInt::from(-6));
        assert_eq!(*q2.entry(1, 0), BigInt::from(3));
        assert_eq!(*q2.entry(2, -1), BigInt::from(-4));
        assert_eq!(*q2.entry(2, 0), BigInt::from(2));

        let q3 = q_matrix(3).unwrap();
        // f_2 = 2 f_1 − 2 f_0; f_3 = f_1 − f_0 (no χ dependence).
        assert_eq!(*q3.entry(2, -1), BigInt::zero());
        assert_eq!(*q3.entry(2, 0), BigInt::from(-2));
        assert_eq!(*q3.entry(2, 1), BigInt::from(2));
        assert_eq!(*q3.entry(3, -1), BigInt::zero());
        assert_eq!(*q3.entry(3, 0), BigInt::from(-1));
        assert_eq!(*q3.entry(3, 1), BigInt::from(1));
    }

    #[test]
    fn complete_f_reproduces_fixtures() {
        let one = BigRational::one;
        let completed = complete_f(&[one(), ratio_int(BigInt::from(4))], 2).unwrap();
        assert_eq!(completed.at(1), &ratio_int(BigInt::from(6)));
        assert_eq!(completed.at(2), &ratio_int(BigInt::from(4)));

        let torus = complete_f(&[BigRational::zero(), ratio_int(BigInt::from(7))], 2).unwrap();
        assert_eq!(torus.at(1), &ratio_int(BigInt::from(21)));
        assert_eq!(torus.at(2), &ratio_int(BigInt::from(14)));

        let closed3 = complete_f(
            &[
                BigRational::zero(),
                ratio_int(BigInt::from(7)),
                ratio_int(BigInt::from(21)),
            ],
            3,
        )
        .unwrap();
        assert_eq!(closed3.at(2), &ratio_int(BigInt::from(28)));
        assert_eq!(closed3.at(3), &ratio_int(BigInt::from(14)));
    }

    #[test]
    fn hat_f_of_coned_triangle() {
        let hat = hat_f(&fv(&[4, 6, 3]), &fv(&[3, 3])).unwrap();
        assert_eq!(hat.at(-1), &BigRational::new(BigInt::one(), BigInt::from(2)));
        assert_eq!(hat.at(0), &BigRational::new(BigInt::from(5), BigInt::from(2)));
        assert_eq!(hat.at(1), &BigRational::new(BigInt::from(9), BigInt::from(2)));
        assert_eq!(hat.at(2), &ratio_int(BigInt::from(3)));
    }

    #[test]
    fn solve_plan_sphere_to_icosahedron_shape() {
        let plan = solve_virtual_plan(&fv(&[4, 6, 4]), &fv(&[12, 30, 20])).unwrap();
        assert_eq!(plan.coefficients(), &[BigInt::from(8)]);
        assert_eq!(plan.total_moves(), BigInt::from(8));
        assert_eq!(plan.to_string(), "0:+8; N=8");
        let applied = apply_virtual(&fv(&[4, 6, 4]), &plan).unwrap();
        assert_eq!(applied, fv(&[12, 30, 20]));
    }

    #[test]
    fn solve_plan_three_dimensional_zero_move() {
        let plan = solve_virtual_plan(&fv(&[5, 10, 10, 5]), &fv(&[6, 14, 16, 8])).unwrap();
        assert_eq!(plan.coefficients(), &[BigInt::one(), BigInt::zero()]);
    }

    #[test]
    fn solve_plan_identity_and_errors() {
        let plan = solve_virtual_plan(&fv(&[4, 6, 4]), &fv(&[4, 6, 4])).unwrap();
        assert!(plan.total_moves().is_zero());
        assert_eq!(plan.to_string(), "N=0");
        assert!(matches!(
            solve_virtual_plan(&fv(&[4, 6, 4]), &fv(&[7, 21, 14])),
            Err(FvError::ChiMismatch(..))
        ));
        assert!(matches!(
            solve_virtual_plan(&fv(&[4, 6, 5]), &fv(&[4, 6, 5])),
            Err(FvError::ResidualNonzero { .. })
        ));
    }

    #[test]
    fn apply_then_negate_is_identity() {
        let base = fv(&[12, 30, 20]);
        let plan = VirtualMovePlan::new(2, vec![BigInt::from(3)]);
        let there = apply_virtual(&base, &plan).unwrap();
        let back = apply_virtual(&there, &plan.negated()).unwrap();
        assert_eq!(back, base);
        assert!(there.is_virtual());
    }

    #[test]
    fn residuals_invariant_under_d_vectors() {
        for n in 1..=6usize {
            let base = {
                // f-vector of the boundary of an (n+1)-simplex.
                let counts = (0..=n)
                    .map(|k| binomial(n as i64 + 2, k as i64 + 1))
                    .collect::<Vec<_>>();
                FVector::from_counts(counts)
            };
            assert_zero(&ds_residual_closed(&base));
            for i in 0..=n {
                let d = d_vector(n, i).unwrap();
                let counts = base
                    .counts()
                    .iter()
                    .zip(d.entries())
                    .map(|(c, dk)| c + dk)
                    .collect();
                let moved = FVector::from_counts(counts);
                assert_zero(&ds_residual_closed(&moved));
            }
        }
    }
}
