use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{BranchWeights, RegionKind, Slot, TrackError, TrainTrack};
use crate::linalg;
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::scalar::{int, primitive_integer, Rational, Scalar};

/// Rows are switches, columns branches. A large end contributes +1 and a
/// small end -1, so `A w = 0` is the switch condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwitchMatrix {
    pub rows: Vec<Vec<i64>>,
    pub cols: usize,
}

impl SwitchMatrix {
    pub fn from_rows(rows: Vec<Vec<i64>>, cols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols));
        SwitchMatrix { rows, cols }
    }

    pub fn apply<W: Scalar>(&self, w: &[W]) -> Vec<W> {
        self.rows
            .iter()
            .map(|row| {
                row.iter().zip(w).fold(W::zero(), |acc, (&a, x)| match a {
                    0 => acc,
                    1 => acc + x.clone(),
                    -1 => acc - x.clone(),
                    a => acc + W::from_i64(a) * x.clone(),
                })
            })
            .collect()
    }

    pub fn annihilates<W: Scalar>(&self, w: &[W], tol: f64) -> bool {
        self.apply(w).iter().all(|x| x.is_zero_tol(tol))
    }

    pub fn rational_rows(&self) -> Vec<Vec<Rational>> {
        self.rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    pub fn rank(&self) -> usize {
        linalg::rank(&self.rational_rows())
    }
}

pub(crate) fn switch_residuals<W: Scalar>(track: &TrainTrack, w: &[W]) -> Vec<W> {
    let mut out = vec![W::zero(); track.switch_count()];
    for (b, br) in track.branches().iter().enumerate() {
        for p in br.ends {
            let v = &mut out[p.switch];
            *v = if p.slot == Slot::Large {
                v.clone() + w[b].clone()
            } else {
                v.clone() - w[b].clone()
            };
        }
    }
    out
}

fn require_valid(track: &TrainTrack) -> Result<(), TrackError> {
    let report = track.validate();
    if report.is_valid() {
        Ok(())
    } else {
        Err(TrackError::Invalid(report))
    }
}

pub fn switch_system(track: &TrainTrack) -> Result<SwitchMatrix, TrackError> {
    require_valid(track)?;
    let mut rows = vec![vec![0i64; track.branch_count()]; track.switch_count()];
    for (b, br) in track.branches().iter().enumerate() {
        for p in br.ends {
            rows[p.switch][b] += if p.slot == Slot::Large { 1 } else { -1 };
        }
    }
    Ok(SwitchMatrix::from_rows(rows, track.branch_count()))
}

pub fn cone_dimension(track: &TrainTrack) -> Result<usize, TrackError> {
    let m = switch_system(track)?;
    Ok(m.cols - m.rank())
}

/// Sides of every trigon, as branch lists with multiplicity.
pub fn trigon_inequalities(track: &TrainTrack) -> Result<Vec<[Vec<usize>; 3]>, TrackError> {
    Ok(track
        .census()?
        .into_iter()
        .filter(|r| r.cusps == 3 && r.kind() == Some(RegionKind::Trigon))
        .map(|r| {
            let s = r.sides();
            [s[0].clone(), s[1].clone(), s[2].clone()]
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct Recurrence {
    pub holds: bool,
    /// Strictly positive primitive integral witness when `holds`.
    pub witness: Option<BranchWeights>,
}

/// Maximize the smallest coordinate of `w` over `{A w = 0, sum w = 1, w >= 0}`.
/// Returns the optimizing point when that minimum is positive.
pub fn recurrence_lp(rows: &[Vec<Rational>], n: usize) -> Option<Vec<Rational>> {
    maximize_min_coordinate(rows, &[], n)
}

fn maximize_min_coordinate(eq_rows: &[Vec<Rational>], le_rows: &[Vec<Rational>], n: usize) -> Option<Vec<Rational>> {
    // variables: w_0..w_{n-1}, t
    let mut lp = LinearProgram::new(n + 1);
    lp.objective[n] = Rational::one();
    let extend = |row: &Vec<Rational>| {
        let mut r = row.clone();
        r.push(Rational::zero());
        r
    };
    for row in eq_rows {
        lp.constrain(extend(row), Relation::Eq, Rational::zero());
    }
    for row in le_rows {
        lp.constrain(extend(row), Relation::Le, Rational::zero());
    }
    let mut total = vec![Rational::one(); n];
    total.push(Rational::zero());
    lp.constrain(total, Relation::Eq, Rational::one());
    for b in 0..n {
        let mut r = vec![Rational::zero(); n + 1];
        r[b] = Rational::one();
        r[n] = -Rational::one();
        lp.constrain(r, Relation::Ge, Rational::zero());
    }
    match lp.maximize() {
        LpOutcome::Optimal { value, mut x } if value.is_positive() => {
            x.truncate(n);
            Some(x)
        }
        _ => None,
    }
}

fn integral_weights(v: &[Rational]) -> Vec<Rational> {
    primitive_integer(v).into_iter().map(Rational::from_integer).collect()
}

pub fn is_recurrent(track: &TrainTrack) -> Result<Recurrence, TrackError> {
    let m = switch_system(track)?;
    match recurrence_lp(&m.rational_rows(), m.cols) {
        Some(w) => {
            let w = BranchWeights::transverse(track, integral_weights(&w)).expect("recurrence witness violates the switch conditions");
            Ok(Recurrence {
                holds: true,
                witness: Some(w),
            })
        }
        None => Ok(Recurrence {
            holds: false,
            witness: None,
        }),
    }
}

pub fn is_transversely_recurrent(track: &TrainTrack) -> Result<Recurrence, TrackError> {
    require_valid(track)?;
    let n = track.branch_count();
    let ones = vec![Rational::one(); n];
    if let Ok(w) = BranchWeights::tangential(track, ones) {
        return Ok(Recurrence {
            holds: true,
            witness: Some(w),
        });
    }
    let mut rows = Vec::new();
    for sides in trigon_inequalities(track)? {
        for k in 0..3 {
            let mut r = vec![Rational::zero(); n];
            for &b in &sides[k] {
                r[b] += Rational::one();
            }
            for &b in sides[(k + 1) % 3].iter().chain(&sides[(k + 2) % 3]) {
                r[b] -= Rational::one();
            }
            rows.push(r);
        }
    }
    match maximize_min_coordinate(&[], &rows, n) {
        Some(w) => {
            let w = BranchWeights::tangential(track, integral_weights(&w)).expect("tangential witness violates a trigon inequality");
            Ok(Recurrence {
                holds: true,
                witness: Some(w),
            })
        }
        None => Ok(Recurrence {
            holds: false,
            witness: None,
        }),
    }
}

fn zero_mask(r: &[BigInt]) -> u128 {
    r.iter()
        .enumerate()
        .filter(|(_, x)| x.is_zero())
        .fold(0u128, |m, (i, _)| m | (1u128 << i))
}

fn make_primitive(v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        return v;
    }
    v.into_iter().map(|x| x / &g).collect()
}

/// Extreme rays of `{w >= 0, A w = 0}` by double description, each certified
/// by the support-rank test. Rays are primitive and sorted.
pub fn extreme_rays(m: &SwitchMatrix) -> Vec<Vec<BigInt>> {
    let n = m.cols;
    assert!(n <= 128, "extreme ray search supports at most 128 branches");
    let mut rays: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut v = vec![BigInt::zero(); n];
            v[i] = BigInt::one();
            v
        })
        .collect();
    for row in &m.rows {
        let vals: Vec<BigInt> = rays
            .iter()
            .map(|r| row.iter().zip(r).fold(BigInt::zero(), |acc, (&a, x)| acc + BigInt::from(a) * x))
            .collect();
        let masks: Vec<u128> = rays.iter().map(|r| zero_mask(r)).collect();
        let mut next = Vec::new();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        for i in 0..rays.len() {
            if vals[i].is_zero() {
                next.push(rays[i].clone());
            }
        }
        for &p in &pos {
            for &q in &neg {
                let common = masks[p] & masks[q];
                let blocked = (0..rays.len()).any(|r| r != p && r != q && masks[r] & common == common);
                if blocked {
                    continue;
                }
                let a = &vals[p];
                let b = -&vals[q];
                let v: Vec<BigInt> = rays[q].iter().zip(&rays[p]).map(|(x, y)| a * x + &b * y).collect();
                next.push(make_primitive(v));
            }
        }
        next.sort();
        next.dedup();
        rays = next;
    }
    let rows = m.rational_rows();
    rays.retain(|r| certify_extreme(&rows, r));
    rays.sort();
    rays
}

/// A nonzero nonnegative solution spans an extreme ray iff the solutions
/// supported inside its support form a line.
pub fn certify_extreme(rows: &[Vec<Rational>], ray: &[BigInt]) -> bool {
    let support: Vec<usize> = (0..ray.len()).filter(|&i| !ray[i].is_zero()).collect();
    if support.is_empty() || ray.iter().any(|x| x.is_negative()) {
        return false;
    }
    linalg::column_rank(rows, &support) + 1 == support.len()
}

pub fn vertex_cycles(track: &TrainTrack) -> Result<Vec<BranchWeights>, TrackError> {
    if !is_recurrent(track)?.holds {
        return Err(TrackError::EmptyCone);
    }
    let m = switch_system(track)?;
    Ok(extreme_rays(&m)
        .into_iter()
        .map(|r| {
            let w = r.into_iter().map(Rational::from_integer).collect();
            BranchWeights::transverse(track, w).expect("extreme ray violates the switch conditions")
        })
        .collect())
}
