//! Symmetric Alexander polynomials, torsion coefficients, and V-sequences.
//!
//! A polynomial is stored sparsely as the map `i -> a_i` for `i >= 0`, with
//! the full Laurent polynomial understood as `a_0 + sum a_i (t^i + t^-i)`.
//! Normalization means evaluating to 1 at `t = 1`.

use std::collections::BTreeMap;

use crate::error::{Error, VSeqViolation};
use crate::numeric::{gcd_u64, rational_int, Rational};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AlexanderPolynomial {
    coeffs: BTreeMap<u32, i64>,
}

impl AlexanderPolynomial {
    /// The unknot polynomial, constant 1.
    pub fn one() -> AlexanderPolynomial {
        AlexanderPolynomial {
            coeffs: BTreeMap::from([(0, 1)]),
        }
    }

    /// Builds from `(degree, coefficient)` pairs, dropping zeros and
    /// rejecting anything that does not evaluate to 1 at `t = 1`.
    pub fn from_coeffs(
        pairs: impl IntoIterator<Item = (u32, i64)>,
    ) -> Result<AlexanderPolynomial, Error> {
        let mut coeffs = BTreeMap::new();
        for (i, a) in pairs {
            if a != 0 {
                *coeffs.entry(i).or_insert(0) += a;
            }
        }
        coeffs.retain(|_, a| *a != 0);
        let poly = AlexanderPolynomial { coeffs };
        let at_one = poly.eval_at_one();
        if at_one != 1 {
            return Err(Error::NotNormalized(at_one));
        }
        Ok(poly)
    }

    pub fn coeff(&self, i: u32) -> i64 {
        self.coeffs.get(&i).copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (u32, i64)> + '_ {
        self.coeffs.iter().map(|(&i, &a)| (i, a))
    }

    /// Largest `i` with `a_i != 0`; 0 for the unknot.
    pub fn degree(&self) -> u32 {
        self.coeffs.keys().next_back().copied().unwrap_or(0)
    }

    fn eval_at_one(&self) -> i64 {
        self.coeffs
            .iter()
            .map(|(&i, &a)| if i == 0 { a } else { 2 * a })
            .sum()
    }

    /// Exact evaluation `a_0 + sum a_i (t^i + t^-i)` at nonzero rational `t`.
    pub fn eval(&self, t: &Rational) -> Rational {
        let mut acc = rational_int(0);
        for (&i, &a) in &self.coeffs {
            let ai = rational_int(a as i128);
            if i == 0 {
                acc += ai;
            } else {
                let pw = power(t, i);
                acc += ai * (&pw + pw.recip());
            }
        }
        acc
    }

    /// Substitutes `t -> t^w`, mapping `a_i` to degree `w * i`.
    pub fn substitute_power(&self, w: u32) -> AlexanderPolynomial {
        assert!(w >= 1, "power must be positive");
        AlexanderPolynomial {
            coeffs: self.coeffs.iter().map(|(&i, &a)| (i * w, a)).collect(),
        }
    }

    /// Renders in ascending degree with symmetric pairs expanded, e.g.
    /// `-1 + t + t^-1`.
    pub fn render(&self) -> String {
        let mut parts: Vec<(i64, String)> = Vec::new();
        for (&i, &a) in &self.coeffs {
            if i == 0 {
                parts.push((a, a.abs().to_string()));
            } else {
                let mag = if a.abs() == 1 {
                    String::new()
                } else {
                    a.abs().to_string()
                };
                if i == 1 {
                    parts.push((a, format!("{mag}t")));
                    parts.push((a, format!("{mag}t^-1")));
                } else {
                    parts.push((a, format!("{mag}t^{i}")));
                    parts.push((a, format!("{mag}t^-{i}")));
                }
            }
        }
        let mut out = String::new();
        for (k, (a, term)) in parts.iter().enumerate() {
            if k == 0 {
                if *a < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(if *a < 0 { " - " } else { " + " });
            }
            out.push_str(term);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// JSON form `{"a": [[i, a_i], ...]}` with nonzero entries ascending.
    pub fn to_json(&self) -> serde_json::Value {
        let a: Vec<serde_json::Value> = self
            .coeffs
            .iter()
            .map(|(&i, &c)| serde_json::json!([i, c]))
            .collect();
        serde_json::json!({ "a": a })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<AlexanderPolynomial, Error> {
        let a = v["a"]
            .as_array()
            .ok_or_else(|| Error::Parse("missing coefficient array".into()))?;
        let mut pairs = Vec::with_capacity(a.len());
        for entry in a {
            let i = entry[0]
                .as_u64()
                .ok_or_else(|| Error::Parse("coefficient degree must be nonnegative".into()))?;
            let c = entry[1]
                .as_i64()
                .ok_or_else(|| Error::Parse("coefficient must be an integer".into()))?;
            pairs.push((i as u32, c));
        }
        AlexanderPolynomial::from_coeffs(pairs)
    }

    fn to_full(&self) -> (i64, Vec<i64>) {
        // full Laurent coefficients c_{-g}..c_g with offset g
        let g = self.degree() as i64;
        let mut full = vec![0i64; (2 * g + 1) as usize];
        for (&i, &a) in &self.coeffs {
            full[(g + i as i64) as usize] = a;
            full[(g - i as i64) as usize] = a;
        }
        (g, full)
    }
}

impl std::ops::Mul for &AlexanderPolynomial {
    type Output = AlexanderPolynomial;

    fn mul(self, rhs: &AlexanderPolynomial) -> AlexanderPolynomial {
        let (ga, fa) = self.to_full();
        let (gb, fb) = rhs.to_full();
        let g = ga + gb;
        let mut full = vec![0i64; (2 * g + 1) as usize];
        for (ia, &ca) in fa.iter().enumerate() {
            if ca == 0 {
                continue;
            }
            for (ib, &cb) in fb.iter().enumerate() {
                full[ia + ib] += ca * cb;
            }
        }
        let pairs = (0..=g).map(|i| (i as u32, full[(g + i) as usize]));
        // the product of normalized symmetric polynomials stays normalized
        AlexanderPolynomial::from_coeffs(pairs).expect("product normalization")
    }
}

fn power(t: &Rational, e: u32) -> Rational {
    let mut acc = rational_int(1);
    for _ in 0..e {
        acc *= t;
    }
    acc
}

/// Alexander polynomial of the torus knot `T(m, n)`: the symmetric expansion
/// of `t^-(m-1)(n-1)/2 (t^{mn} - 1)(t - 1) / ((t^m - 1)(t^n - 1))`.
pub fn torus_alexander(m: u64, n: u64) -> Result<AlexanderPolynomial, Error> {
    if m < 2 || n < 2 || gcd_u64(m, n) != 1 {
        return Err(Error::BadTorusKnot { m, n });
    }
    let mn = (m * n) as usize;
    // (t^{mn} - 1)(t - 1) = t^{mn+1} - t^{mn} - t + 1
    let mut num = vec![0i64; mn + 2];
    num[mn + 1] = 1;
    num[mn] = -1;
    num[1] = -1;
    num[0] = 1;
    let quot = divide_by_cyclotomic_like(&divide_by_cyclotomic_like(&num, m as usize), n as usize);
    let two_g = (m as usize - 1) * (n as usize - 1);
    debug_assert_eq!(quot.len(), two_g + 1);
    let g = two_g / 2;
    for k in 0..=g {
        debug_assert_eq!(quot[g + k], quot[g - k], "torus polynomial symmetry");
    }
    AlexanderPolynomial::from_coeffs((0..=g).map(|k| (k as u32, quot[g + k])))
}

/// Exact division by `t^m - 1`; panics if the division leaves a remainder.
fn divide_by_cyclotomic_like(poly: &[i64], m: usize) -> Vec<i64> {
    let deg = poly.len() - 1;
    let mut rem = poly.to_vec();
    let mut quot = vec![0i64; deg - m + 1];
    for i in (m..=deg).rev() {
        let c = rem[i];
        if c == 0 {
            continue;
        }
        quot[i - m] = c;
        rem[i] = 0;
        rem[i - m] += c;
    }
    assert!(rem.iter().all(|&c| c == 0), "inexact division");
    quot
}

/// Nonnegative sequence `V_0, V_1, ...` with steps `V_i - V_{i+1}` in
/// `{0, 1}`, stored without trailing zeros; indices past the end read 0.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VSequence {
    values: Vec<u64>,
}

impl VSequence {
    pub fn empty() -> VSequence {
        VSequence { values: Vec::new() }
    }

    /// Validates against the implicit all-zero tail, then trims.
    pub fn new(values: Vec<i64>) -> Result<VSequence, VSeqViolation> {
        let mut with_tail = values;
        with_tail.push(0);
        VSequence::check(&with_tail)?;
        let mut vals: Vec<u64> = with_tail.into_iter().map(|v| v as u64).collect();
        while vals.last() == Some(&0) {
            vals.pop();
        }
        Ok(VSequence { values: vals })
    }

    /// First violated constraint of a raw sequence: entries nonnegative,
    /// consecutive differences in `{0, 1}`, and the sequence ends at 0.
    pub fn check(values: &[i64]) -> Result<(), VSeqViolation> {
        for (index, &value) in values.iter().enumerate() {
            if value < 0 {
                return Err(VSeqViolation::Negative { index, value });
            }
        }
        for (index, pair) in values.windows(2).enumerate() {
            let step = pair[0] - pair[1];
            if step != 0 && step != 1 {
                return Err(VSeqViolation::BadStep {
                    index,
                    from: pair[0],
                    to: pair[1],
                });
            }
        }
        if let Some(&last) = values.last() {
            if last != 0 {
                return Err(VSeqViolation::NonzeroTail { last });
            }
        }
        Ok(())
    }

    pub fn get(&self, i: u64) -> u64 {
        self.values.get(i as usize).copied().unwrap_or(0)
    }

    /// Smallest index from which every value is 0.
    pub fn support_bound(&self) -> u64 {
        self.values.len() as u64
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }
}

/// Torsion coefficients `b_i = sum_{j >= 1} j * a_{i+j}` for `0 <= i < g`.
pub fn torsion_coefficients(poly: &AlexanderPolynomial) -> Vec<i64> {
    let g = poly.degree();
    (0..g)
        .map(|i| {
            ((i + 1)..=g)
                .map(|k| (k - i) as i64 * poly.coeff(k))
                .sum()
        })
        .collect()
}

/// Torsion coefficients as a V-sequence, when they satisfy its constraints
/// (true for any knot admitting an L-space surgery, e.g. torus knots).
pub fn v_sequence(poly: &AlexanderPolynomial) -> Result<VSequence, VSeqViolation> {
    VSequence::new(torsion_coefficients(poly))
}

/// Recovers the polynomial with torsion coefficients `b = v`:
/// `a_i = b_{i-1} - 2 b_i + b_{i+1}` for `i > 0`, and `a_0` fixed by
/// normalization. Inverse of `torsion_coefficients` on valid sequences.
pub fn alexander_from_torsion(v: &VSequence) -> AlexanderPolynomial {
    let g = v.support_bound();
    if g == 0 {
        return AlexanderPolynomial::one();
    }
    let b = |i: u64| v.get(i) as i64;
    let mut pairs: Vec<(u32, i64)> = (1..=g)
        .map(|i| (i as u32, b(i - 1) - 2 * b(i) + b(i + 1)))
        .collect();
    let tail: i64 = pairs.iter().map(|&(_, a)| 2 * a).sum();
    pairs.push((0, 1 - tail));
    AlexanderPolynomial::from_coeffs(pairs).expect("a_0 chosen to normalize")
}

/// The right-handed trefoil polynomial `-1 + t + t^-1`.
pub fn trefoil() -> AlexanderPolynomial {
    torus_alexander(3, 2).expect("T(3,2)")
}

/// V-sequence of the trefoil: `(1)`.
pub fn trefoil_v() -> VSequence {
    v_sequence(&trefoil()).expect("trefoil torsion")
}
