//! Grids `C_m × C_n`: classification of subsets, the straight / injective
//! skew chain description of their retracts, exact retract counts, and two
//! maximal chains of the retract lattice.

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{check_cap, Error, Result};
use crate::limits::Limits;
use crate::order::{Lattice, SubsetMask};

/// Sizes of the two chain factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct GridShape {
    pub m: usize,
    pub n: usize,
}

impl GridShape {
    pub fn new(m: usize, n: usize) -> Result<GridShape> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidShape { m, n, reason: "chains need at least one element" });
        }
        Ok(GridShape { m, n })
    }

    /// Both factors have at least two elements.
    pub fn is_grid(&self) -> bool {
        self.m >= 2 && self.n >= 2
    }

    fn require_grid(&self) -> Result<()> {
        if self.is_grid() {
            Ok(())
        } else {
            Err(Error::InvalidShape {
                m: self.m,
                n: self.n,
                reason: "both chains need at least two elements",
            })
        }
    }

    pub fn size(&self) -> usize {
        self.m * self.n
    }

    /// Element index of `(i, j)`, matching [`make_grid`].
    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.n + j
    }

    #[inline]
    pub fn coords(&self, x: usize) -> (usize, usize) {
        (x / self.n, x % self.n)
    }

    pub fn mask<I: IntoIterator<Item = (usize, usize)>>(&self, points: I) -> SubsetMask {
        SubsetMask::from_indices(self.size(), points.into_iter().map(|(i, j)| self.index(i, j)))
    }
}

/// `C_m × C_n` with element `(i, j)` at index `i * n + j`.
pub fn make_grid(shape: GridShape, limits: &Limits) -> Result<Lattice> {
    check_cap("grid", shape.m.saturating_mul(shape.n), limits.max_elements)?;
    Lattice::chain(shape.m)?.product(&Lattice::chain(shape.n)?, limits)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SubsetClass {
    pub empty: bool,
    pub straight: bool,
    pub skew: bool,
    pub left_injective: bool,
    pub right_injective: bool,
    pub doubly_injective: bool,
    pub chain: bool,
    pub is_retract: bool,
}

pub fn classify_subset(shape: GridShape, s: &SubsetMask) -> SubsetClass {
    let points: Vec<(usize, usize)> = s.iter().map(|x| shape.coords(x)).collect();
    let empty = points.is_empty();
    let firsts: Vec<usize> = points.iter().map(|p| p.0).sorted().dedup().collect();
    let seconds: Vec<usize> = points.iter().map(|p| p.1).sorted().dedup().collect();
    let straight = empty || firsts.len() * seconds.len() == points.len();
    let left_injective = firsts.len() == points.len();
    let right_injective = seconds.len() == points.len();
    let chain = points
        .iter()
        .tuple_combinations()
        .all(|(a, b)| (a.0 <= b.0 && a.1 <= b.1) || (b.0 <= a.0 && b.1 <= a.1));
    let skew = !straight;
    SubsetClass {
        empty,
        straight,
        skew,
        left_injective,
        right_injective,
        doubly_injective: left_injective && right_injective,
        chain,
        is_retract: straight || (chain && (left_injective || right_injective)),
    }
}

fn require_small_factors(shape: GridShape) -> Result<()> {
    // straight subsets are walked as pairs of factor bitmasks
    check_cap("grid factor for retract enumeration", shape.m.max(shape.n), 63)
}

/// Streams every nonempty retract of a grid exactly once: the straight
/// subsets `A1 × A2`, then left injective skew chains, then right injective
/// skew chains that are not doubly injective.
pub fn grid_retracts(shape: GridShape, limits: &Limits) -> Result<Box<dyn Iterator<Item = SubsetMask>>> {
    shape.require_grid()?;
    check_cap("grid", shape.size(), limits.max_elements)?;
    require_small_factors(shape)?;
    let GridShape { m, n } = shape;

    let straight = (1u64..1 << m).flat_map(move |a| {
        (1u64..1 << n).map(move |b| {
            shape.mask(
                (0..m)
                    .filter(|i| a >> i & 1 == 1)
                    .flat_map(|i| (0..n).filter(move |j| b >> j & 1 == 1).map(move |j| (i, j))),
            )
        })
    });

    // x strictly increasing, y weakly increasing and not constant
    let left = (2..=m).flat_map(move |s| {
        (0..m).combinations(s).flat_map(move |xs| {
            (0..n)
                .combinations_with_replacement(s)
                .filter(move |ys| ys[0] != ys[s - 1])
                .map(move |ys| shape.mask(xs.iter().copied().zip(ys)))
        })
    });

    // y strictly increasing, x weakly increasing, neither constant nor strict
    let right = (2..=n).flat_map(move |s| {
        (0..n).combinations(s).flat_map(move |ys| {
            (0..m)
                .combinations_with_replacement(s)
                .filter(move |xs| xs[0] != xs[s - 1] && xs.windows(2).any(|w| w[0] == w[1]))
                .map(move |xs| shape.mask(xs.into_iter().zip(ys.iter().copied())))
        })
    });

    Ok(Box::new(straight.chain(left).chain(right)))
}

/// `binomial(a, b)`, zero when `b > a`.
pub fn binomial(a: u64, b: u64) -> BigUint {
    if b > a {
        return BigUint::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigUint::one();
    for i in 0..b {
        acc *= a - i;
        acc /= i + 1;
    }
    acc
}

/// Exact retract counts of a grid; every count includes `∅` in `sts`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RetractCount {
    pub shape: GridShape,
    pub sts: BigUint,
    pub isc: BigUint,
    pub total: BigUint,
}

#[derive(Serialize)]
struct RetractCountJson {
    m: usize,
    n: usize,
    sts: String,
    isc: String,
    total: String,
}

impl RetractCount {
    /// `{"m":..,"n":..,"sts":"<decimal>","isc":"<decimal>","total":"<decimal>"}`
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(RetractCountJson {
            m: self.shape.m,
            n: self.shape.n,
            sts: self.sts.to_string(),
            isc: self.isc.to_string(),
            total: self.total.to_string(),
        })
        .expect("plain data serializes")
    }
}

/// Counts straight subsets and injective skew chains of `C_m × C_n`.
///
/// `|sts| = 1 + (2^m - 1)(2^n - 1)`. For each chain size `s` from 2 to
/// `max(m, n)`, left injective chains number `C(m,s)·C(n+s-1,s)` and right
/// injective ones `C(n,s)·C(m+s-1,s)`; doubly injective chains were counted
/// twice and the straight ones `X × {y}` and `{x} × Y` are not skew, hence
/// the three subtracted terms. Binomials are advanced incrementally in `s`.
pub fn count_retracts(shape: GridShape) -> Result<RetractCount> {
    shape.require_grid()?;
    let (m, n) = (shape.m as u64, shape.n as u64);
    let one = BigUint::one();
    let sts = &one + ((&one << m) - &one) * ((&one << n) - &one);

    // C(m,s), C(n+s-1,s), C(n,s), C(m+s-1,s) at s = 1
    let mut cm = BigUint::from(m);
    let mut cn_rep = BigUint::from(n);
    let mut cn = BigUint::from(n);
    let mut cm_rep = BigUint::from(m);
    let mut plus = BigUint::zero();
    let mut minus = BigUint::zero();
    for s in 2..=m.max(n) {
        cm = cm * (m + 1).saturating_sub(s) / s;
        cn = cn * (n + 1).saturating_sub(s) / s;
        cn_rep = cn_rep * (n + s - 1) / s;
        cm_rep = cm_rep * (m + s - 1) / s;
        plus += &cm * &cn_rep + &cn * &cm_rep;
        minus += &cm * &cn + &cm * n + &cn * m;
    }
    let isc = plus - minus;
    let total = &sts + &isc;
    Ok(RetractCount { shape, sts, isc, total })
}

/// `|Ret C_k| = 2^k`: every subset of a chain is a retract or empty.
pub fn chain_ret_size(k: usize) -> BigUint {
    BigUint::one() << k
}

/// `|Ret C_m × C_n|` for any shape, chains included.
pub fn ret_size(shape: GridShape) -> BigUint {
    if shape.is_grid() {
        count_retracts(shape).expect("grid shape").total
    } else {
        chain_ret_size(shape.m.max(shape.n))
    }
}

/// Rounds to `digits` significant digits, half up: `(mantissa, exponent)`
/// with `mantissa` written like `"7.551515"`.
pub fn scientific(value: &BigUint, digits: usize) -> (String, usize) {
    assert!(digits >= 1);
    let text = value.to_string();
    let mut exponent = text.len() - 1;
    let bytes = text.as_bytes();
    let mut kept: Vec<u8> = bytes.iter().take(digits).map(|b| b - b'0').collect();
    kept.resize(digits, 0);
    if bytes.len() > digits && bytes[digits] >= b'5' {
        let mut i = digits;
        loop {
            if i == 0 {
                kept.insert(0, 1);
                kept.truncate(digits);
                exponent += 1;
                break;
            }
            i -= 1;
            if kept[i] == 9 {
                kept[i] = 0;
            } else {
                kept[i] += 1;
                break;
            }
        }
    }
    let mut mantissa = String::new();
    for (i, d) in kept.iter().enumerate() {
        if i == 1 {
            mantissa.push('.');
        }
        mantissa.push((b'0' + d) as char);
    }
    (mantissa, exponent)
}

/// The two maximal chains of `Ret G`: `H1` grows a diagonal and then widens
/// it into `C_m × ↓d_j` (`max(m, n) + 2` members), `H2` grows the bottom
/// row and then stacks rows (`m + n` members). Both start at `∅`.
pub fn maximal_chains(shape: GridShape) -> Result<(Vec<SubsetMask>, Vec<SubsetMask>)> {
    shape.require_grid()?;
    let GridShape { m, n } = shape;
    let k = m.min(n);

    let mut h1 = vec![SubsetMask::empty(shape.size())];
    for len in 1..=k {
        h1.push(shape.mask((0..len).map(|t| (t, t))));
    }
    if m <= n {
        for top in m - 1..n {
            h1.push(shape.mask((0..m).flat_map(|i| (0..=top).map(move |j| (i, j)))));
        }
    } else {
        for top in n - 1..m {
            h1.push(shape.mask((0..=top).flat_map(|i| (0..n).map(move |j| (i, j)))));
        }
    }

    let mut h2 = vec![SubsetMask::empty(shape.size())];
    for top in 0..m {
        h2.push(shape.mask((0..=top).map(|i| (i, 0))));
    }
    for top in 1..n {
        h2.push(shape.mask((0..m).flat_map(|i| (0..=top).map(move |j| (i, j)))));
    }
    Ok((h1, h2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_convention() {
        assert_eq!(binomial(5, 2), BigUint::from(10u32));
        assert_eq!(binomial(2, 3), BigUint::zero());
        assert_eq!(binomial(0, 0), BigUint::one());
        assert_eq!(binomial(60, 30), BigUint::from(118264581564861424u64));
    }

    #[test]
    fn small_counts() {
        let c = count_retracts(GridShape::new(2, 2).unwrap()).unwrap();
        assert_eq!((c.sts, c.isc, c.total), (10u32.into(), 1u32.into(), 11u32.into()));
        let c = count_retracts(GridShape::new(2, 3).unwrap()).unwrap();
        assert_eq!(c.total, BigUint::from(27u32));
        assert!(count_retracts(GridShape::new(1, 3).unwrap()).is_err());
        assert_eq!(ret_size(GridShape::new(1, 4).unwrap()), BigUint::from(16u32));
        assert!(GridShape::new(0, 3).is_err());
    }

    #[test]
    fn count_json_uses_decimal_strings() {
        let c = count_retracts(GridShape::new(2, 2).unwrap()).unwrap();
        assert_eq!(c.to_json(), serde_json::json!({"m": 2, "n": 2, "sts": "10", "isc": "1", "total": "11"}));
    }

    #[test]
    fn scientific_rounding() {
        assert_eq!(scientific(&BigUint::from(123456789u32), 3), ("1.23".into(), 8));
        assert_eq!(scientific(&BigUint::from(125u32), 2), ("1.3".into(), 2));
        assert_eq!(scientific(&BigUint::from(9999u32), 2), ("1.0".into(), 4));
        assert_eq!(scientific(&BigUint::from(7u32), 3), ("7.00".into(), 0));
    }

    #[test]
    fn classification_of_square_subsets() {
        let sh = GridShape::new(2, 2).unwrap();
        let diag = classify_subset(sh, &sh.mask([(0, 0), (1, 1)]));
        assert!(diag.skew && diag.doubly_injective && diag.chain && diag.is_retract);
        let anti = classify_subset(sh, &sh.mask([(0, 1), (1, 0)]));
        assert!(anti.skew && anti.doubly_injective && !anti.chain && !anti.is_retract);
        let edge = classify_subset(sh, &sh.mask([(0, 0), (1, 0)]));
        assert!(edge.straight && !edge.skew && edge.is_retract);
        let none = classify_subset(sh, &SubsetMask::empty(4));
        assert!(none.empty && none.straight && none.is_retract);
    }

    #[test]
    fn square_retract_stream() {
        let all: Vec<_> = grid_retracts(GridShape::new(2, 2).unwrap(), &Limits::DEFAULT).unwrap().collect();
        assert_eq!(all.len(), 10);
        assert!(all.contains(&SubsetMask::from_indices(4, [0, 3])));
        assert!(grid_retracts(GridShape::new(1, 2).unwrap(), &Limits::DEFAULT).is_err());
    }

    #[test]
    fn chain_sizes() {
        for (m, n, h1, h2) in [(2, 2, 4, 4), (2, 3, 5, 5), (3, 3, 5, 6), (3, 2, 5, 5), (4, 2, 6, 6)] {
            let (a, b) = maximal_chains(GridShape::new(m, n).unwrap()).unwrap();
            assert_eq!((a.len(), b.len()), (h1, h2), "{m}x{n}");
        }
    }
}
