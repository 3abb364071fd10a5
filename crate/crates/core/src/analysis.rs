//! Exact counting behind the list-size bound.
//!
//! Records of the colouring loop map to `±1` sequences (one `+1` per
//! coloured vertex, one `-1` per uncoloured one). A sequence with maximal
//! `-1` blocks of lengths `h_1, .., h_p` stands for at most
//! `f(S) = Π 2Δh_i` records, and `a_m` sums `f` over all `±1` sequences of
//! length `m`. The sequence satisfies
//! `a_m = 3a_{m-1} + (2Δ-3)a_{m-2} + a_{m-3}`, so its growth rate is the
//! dominant root of `λ³ - 3λ² - (2Δ-3)λ - 1`.

use std::f64::consts::PI;

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("Δ = {0} is below the supported range (need Δ >= {1})")]
    DeltaTooSmall(u64, u64),
}

/// A `±1` sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignSequence(Vec<i8>);

impl SignSequence {
    pub fn new(signs: Vec<i8>) -> Option<Self> {
        signs
            .iter()
            .all(|&s| s == 1 || s == -1)
            .then_some(SignSequence(signs))
    }

    /// Bit `i` of `mask` set means position `i` holds `-1`.
    pub fn from_mask(m: usize, mask: u64) -> Self {
        SignSequence((0..m).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect())
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }

    /// Lengths of the maximal `-1` blocks, left to right.
    pub fn minus_blocks(&self) -> Vec<u64> {
        let mut blocks = Vec::new();
        let mut run = 0u64;
        for &s in &self.0 {
            if s == -1 {
                run += 1;
            } else if run > 0 {
                blocks.push(run);
                run = 0;
            }
        }
        if run > 0 {
            blocks.push(run);
        }
        blocks
    }

    pub fn reversed(&self) -> Self {
        SignSequence(self.0.iter().rev().copied().collect())
    }
}

/// `Π 2Δh_i` over the `-1` blocks; `1` when there are none.
pub fn f_weight(s: &SignSequence, delta: u64) -> BigUint {
    s.minus_blocks()
        .into_iter()
        .fold(BigUint::one(), |acc, h| acc * BigUint::from(2 * delta * h))
}

/// `a_m` straight from the definition: a sum over all `2^m` sequences.
pub fn a_def(m: usize, delta: u64) -> BigUint {
    assert!(m < 64, "a_def enumerates 2^m sequences");
    (0..1u64 << m).fold(BigUint::zero(), |acc, mask| {
        acc + f_weight(&SignSequence::from_mask(m, mask), delta)
    })
}

/// The three equivalent recurrences for `a_m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Recurrence {
    /// `a_m = a_{m-1} + Σ_{k=1}^{m-2} 2Δk a_{m-1-k} + 2Δ(m-1) + 2Δm`, `m >= 2`.
    ByLastBlock,
    /// `a_m = 2a_{m-1} + (2Δ-1)a_{m-2} + 2Δ Σ_{j=1}^{m-3} a_j + 4Δ`, `m >= 3`.
    Differenced,
    /// `a_m = 3a_{m-1} + (2Δ-3)a_{m-2} + a_{m-3}`, `m >= 4`.
    ThreeTerm,
}

impl Recurrence {
    fn first_index(self) -> usize {
        match self {
            Recurrence::ByLastBlock => 2,
            Recurrence::Differenced => 3,
            Recurrence::ThreeTerm => 4,
        }
    }
}

fn base_values(delta: u64) -> [BigUint; 3] {
    let d = BigUint::from(delta);
    [
        BigUint::from(2u32) * &d + 1u32,
        BigUint::from(8u32) * &d + 1u32,
        BigUint::from(4u32) * &d * &d + BigUint::from(20u32) * &d + 1u32,
    ]
}

/// `a_1, .., a_{m_max}` using `form` from its first valid index on; earlier
/// terms are the closed base values `2Δ+1`, `8Δ+1`, `4Δ²+20Δ+1`.
pub fn a_sequence(form: Recurrence, m_max: usize, delta: u64) -> Vec<BigUint> {
    let base = base_values(delta);
    let d = BigUint::from(delta);
    let two_d = BigUint::from(2u32) * &d;
    let mut a: Vec<BigUint> = Vec::with_capacity(m_max);
    for m in 1..=m_max {
        if m < form.first_index() {
            a.push(base[m - 1].clone());
            continue;
        }
        // a[k - 1] holds a_k.
        let next = match form {
            Recurrence::ByLastBlock => {
                let mut s = a[m - 2].clone();
                for k in 1..=m - 2 {
                    s += &two_d * BigUint::from(k) * &a[m - 2 - k];
                }
                s + &two_d * BigUint::from(m - 1) + &two_d * BigUint::from(m)
            }
            Recurrence::Differenced => {
                let tail: BigUint = a[..m - 3].iter().sum();
                BigUint::from(2u32) * &a[m - 2] + (&two_d - 1u32) * &a[m - 3] + &two_d * tail + &two_d * 2u32
            }
            Recurrence::ThreeTerm => {
                // 2Δ - 3 is negative only for Δ = 1.
                let s = BigUint::from(3u32) * &a[m - 2] + &a[m - 4];
                if 2 * delta >= 3 {
                    s + BigUint::from(2 * delta - 3) * &a[m - 3]
                } else {
                    s - BigUint::from(3 - 2 * delta) * &a[m - 3]
                }
            }
        };
        a.push(next);
    }
    a
}

/// `a_m` by the three-term recurrence.
pub fn a_rec(m: usize, delta: u64) -> BigUint {
    assert!(m >= 1);
    a_sequence(Recurrence::ThreeTerm, m, delta).pop().unwrap()
}

/// Value of `λ³ - 3λ² - (2Δ-3)λ - 1`.
pub fn char_poly(delta: u64, x: Complex64) -> Complex64 {
    x * x * x - 3.0 * x * x - (2.0 * delta as f64 - 3.0) * x - 1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CubicRoots {
    pub delta: u64,
    /// Dominant real root.
    pub lambda0: f64,
    pub lambda1: Complex64,
    pub lambda2: Complex64,
    /// Only for `Δ >= 4`: the angle `arccos(√(27/(8Δ)))/3`.
    pub phi: Option<f64>,
}

impl CubicRoots {
    pub fn all(&self) -> [Complex64; 3] {
        [Complex64::new(self.lambda0, 0.0), self.lambda1, self.lambda2]
    }

    pub fn all_real(&self) -> bool {
        self.lambda1.im == 0.0 && self.lambda2.im == 0.0
    }

    pub fn dominant(&self) -> bool {
        self.lambda1.norm() < self.lambda0 && self.lambda2.norm() < self.lambda0
    }
}

/// `Δ² (1 - 8Δ/27)`, the discriminant of the depressed cubic `y³ - 2Δy - 2Δ`.
pub fn discriminant(delta: u64) -> f64 {
    let d = delta as f64;
    d * d * (1.0 - 8.0 * d / 27.0)
}

/// `arccos(√(27/(8Δ)))/3`.
pub fn phi(delta: u64) -> f64 {
    (27.0 / (8.0 * delta as f64)).sqrt().acos() / 3.0
}

/// Roots of the characteristic cubic from closed forms.
///
/// `Δ = 3`: `1 + ∛2 + ∛4` and the conjugate pair
/// `1 - (∛2 + ∛4)/2 ± i (√3/2)(∛4 - ∛2)`.
/// `Δ >= 4`: `1 + 2√(2Δ/3) cos(φ + 2πk/3)`, `k = 0, 1, 2`.
pub fn char_roots(delta: u64) -> Result<CubicRoots, AnalysisError> {
    match delta {
        0..=2 => Err(AnalysisError::DeltaTooSmall(delta, 3)),
        3 => {
            let (c2, c4) = (2f64.cbrt(), 4f64.cbrt());
            let re = 1.0 - 0.5 * (c2 + c4);
            let im = 3f64.sqrt() / 2.0 * (c4 - c2);
            Ok(CubicRoots {
                delta,
                lambda0: 1.0 + c2 + c4,
                lambda1: Complex64::new(re, im),
                lambda2: Complex64::new(re, -im),
                phi: None,
            })
        }
        _ => {
            let phi = phi(delta);
            let amp = 2.0 * (2.0 * delta as f64 / 3.0).sqrt();
            let root = |k: f64| 1.0 + amp * (phi + k * 2.0 * PI / 3.0).cos();
            Ok(CubicRoots {
                delta,
                lambda0: root(0.0),
                lambda1: Complex64::new(root(1.0), 0.0),
                lambda2: Complex64::new(root(2.0), 0.0),
                phi: Some(phi),
            })
        }
    }
}

/// Sign of `p(√(l - 1/2))` for the characteristic cubic `p`, computed
/// exactly in integers. For `Δ >= 4` and `l >= 2` the point lies above the
/// two smaller roots, so the result is `true` iff `λ0² <= l - 1/2`.
fn cubic_nonnegative_at_sqrt_half(delta: u64, l: u64) -> bool {
    // With s = l - 1/2: p(√s) = √s (s - 2Δ + 3) - (3s + 1).
    let (l, d) = (l as i128, delta as i128);
    let a2 = 2 * l + 5 - 4 * d; // 2 (s - 2Δ + 3)
    let b2 = 6 * l - 1; // 2 (3s + 1)
    a2 > 0 && (2 * l - 1) * a2 * a2 >= 2 * b2 * b2
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ListSize {
    pub delta: u64,
    pub l: u64,
    pub lambda0: f64,
    pub phi: f64,
    /// `l < 5Δ`.
    pub below_five_delta: bool,
    /// `λ0² <= l - 1/2`, decided in exact integer arithmetic.
    pub margin_certified: bool,
    /// `l - 1` fails the margin, so `l` is exactly the ceiling.
    pub ceiling_certified: bool,
    /// `l - 1.5 - λ0²`; the estimate `λ0² + 1 < l - 1/2` needs this positive.
    pub chain_slack: f64,
}

/// `l(Δ) = ⌈(1 + 2√(2Δ/3) cos φ)² + 0.5⌉` for `Δ >= 4`.
pub fn list_size(delta: u64) -> Result<ListSize, AnalysisError> {
    if delta < 4 {
        return Err(AnalysisError::DeltaTooSmall(delta, 4));
    }
    let roots = char_roots(delta)?;
    let sq = roots.lambda0 * roots.lambda0;
    let l = (sq + 0.5).ceil() as u64;
    Ok(ListSize {
        delta,
        l,
        lambda0: roots.lambda0,
        phi: roots.phi.unwrap(),
        below_five_delta: l < 5 * delta,
        margin_certified: cubic_nonnegative_at_sqrt_half(delta, l),
        ceiling_certified: !cubic_nonnegative_at_sqrt_half(delta, l - 1),
        chain_slack: l as f64 - 1.5 - sq,
    })
}

/// `(8/3)cos²φ - 2 + 4√(2/(3Δ)) cos φ + 2.5/Δ`, i.e. `(l_bound/Δ) - 2`; tends to 0.
pub fn excess_over_two(delta: u64) -> f64 {
    let phi = phi(delta);
    let d = delta as f64;
    8.0 / 3.0 * phi.cos().powi(2) - 2.0 + 4.0 * (2.0 / (3.0 * d)).sqrt() * phi.cos() + 2.5 / d
}

/// `(8/3)cos²(π/6) - 2`, the limit of [`excess_over_two`].
pub fn excess_limit() -> f64 {
    8.0 / 3.0 * (PI / 6.0).cos().powi(2) - 2.0
}

/// `a / b` as a float, for arbitrarily large integers.
pub fn big_ratio(a: &BigUint, b: &BigUint) -> f64 {
    let shift = b.bits().max(a.bits()).saturating_sub(900);
    (a >> shift).to_f64().unwrap() / (b >> shift).to_f64().unwrap()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthReport {
    pub delta: u64,
    pub lambda0: f64,
    /// `a_m / a_{m-1}` for `m = 2..=m_max`.
    pub ratios: Vec<f64>,
    pub final_error: f64,
    pub converged: bool,
    /// Whether `|a_m/a_{m-1} - λ0|` never increases; the subdominant roots
    /// are negative or complex, so this can fail while the ratios converge.
    pub error_monotone: bool,
    pub lambda0_squared: f64,
    /// List length the growth is compared against: 15 for `Δ = 3`, `l(Δ)` above.
    pub list_length: u64,
    pub lambda0_squared_below_list: bool,
}

/// Ratios of consecutive `a_m` against `λ0`, and `λ0²` against the list length.
pub fn growth_certificate(delta: u64, m_max: usize, tolerance: f64) -> Result<GrowthReport, AnalysisError> {
    let roots = char_roots(delta)?;
    let list_length = if delta == 3 { 15 } else { list_size(delta)?.l };
    let a = a_sequence(Recurrence::ThreeTerm, m_max.max(2), delta);
    let ratios: Vec<f64> = a.windows(2).map(|w| big_ratio(&w[1], &w[0])).collect();
    let errors: Vec<f64> = ratios.iter().map(|r| (r - roots.lambda0).abs()).collect();
    let final_error = *errors.last().unwrap();
    let sq = roots.lambda0 * roots.lambda0;
    Ok(GrowthReport {
        delta,
        lambda0: roots.lambda0,
        ratios,
        final_error,
        converged: final_error < tolerance,
        error_monotone: errors.windows(2).all(|w| w[1] <= w[0]),
        lambda0_squared: sq,
        list_length,
        lambda0_squared_below_list: sq < list_length as f64,
    })
}
