//! Effective finiteness certificates for surgery slopes of the form
//! `p = l*q + zeta*r` matched against denominator `Q`.
//!
//! The certificate consists of the constant `N` bounding `|a - mp/l|` by
//! `N*sqrt(p)`, the number of values the step term `C_k` can take, and the
//! resulting slope bound `4 l^2 N^2 (3 l M Q r + 2)^2`. The step difference
//! of a delta profile decomposes as `A k + B + C_k` with
//!
//! ```text
//! A = eps*zeta * 2(al - mp)^2 / (pr) + 2l / (pQ)
//! B = eps * ( zeta * l/(pr) * (a - mp/l)^2 - m^2/l + m*alpha )
//! ```
//!
//! and `A = 0` is impossible whenever `rl/Q` is not a perfect square.

use num_bigint::{BigInt, BigUint};

use crate::alexander::VSequence;
use crate::error::Error;
use crate::lens::{d_lens_vector, DVector};
use crate::matching::AffineIdentification;
use crate::numeric::{
    gcd_u64, modu, rational, rational_int, Rational, Sign,
};

/// True iff `sqrt(rl/Q)` is not an integer, decided exactly:
/// an integer square root exists iff `Q | rl` and `rl/Q` is a perfect square.
pub fn rl_over_q_not_square(r: u64, l: u64, cand_q: u64) -> bool {
    let rl = r as u128 * l as u128;
    if !rl.is_multiple_of(cand_q as u128) {
        return true;
    }
    let m = rl / cand_q as u128;
    let s = BigUint::from(m).sqrt();
    &s * &s != BigUint::from(m)
}

fn max_gap(vec: &DVector) -> Rational {
    let mut iter = vec.entries().iter();
    let first = iter.next().expect("nonempty vector");
    let (mut lo, mut hi) = (first.clone(), first.clone());
    for e in iter {
        if e < &lo {
            lo = e.clone();
        }
        if e > &hi {
            hi = e.clone();
        }
    }
    hi - lo
}

/// Largest spread of `d(L(n, q'), *)` over all `q'` coprime to `n`.
fn max_table_gap(n: u64) -> Result<Rational, Error> {
    if n == 1 {
        return Ok(rational_int(0));
    }
    let mut best = rational_int(0);
    for qp in 1..n {
        if gcd_u64(n, qp) != 1 {
            continue;
        }
        let gap = max_gap(&d_lens_vector(n, qp as i64)?);
        if gap > best {
            best = gap;
        }
    }
    Ok(best)
}

/// Exact bound on `|C_0|`: the initial fraction is at most 1, the
/// `d(L(Q,*))` difference at most the largest table gap, the V-term at most
/// `2 V_0`, and the `d(L(r,*))` difference at most that table's gap.
fn c0_bound(v: &VSequence, r: u64, cand_q: u64) -> Result<Rational, Error> {
    Ok(rational_int(1)
        + max_table_gap(cand_q)?
        + rational_int(2 * v.get(0) as i128)
        + max_table_gap(r)?)
}

/// Least positive integer `N` with
/// `N^2 >= r * (2 + max_{0<=m<=l/2, alpha} |m^2/l - m*alpha| + C0_bound) / l`.
pub fn bound_constant_n(v: &VSequence, r: u64, l: u64, cand_q: u64) -> Result<u64, Error> {
    if l == 0 || !l.is_multiple_of(2) {
        return Err(Error::BadParams(format!("l must be even and positive, got {l}")));
    }
    if r == 0 || cand_q == 0 {
        return Err(Error::BadParams("r and Q must be positive".into()));
    }
    let mut m_term = rational_int(0);
    for m in 0..=l / 2 {
        for alpha in [0u64, 1] {
            let t = rational((m * m) as i128, l as i128)? - rational_int((m * alpha) as i128);
            let abs = if t < rational_int(0) { -t } else { t };
            if abs > m_term {
                m_term = abs;
            }
        }
    }
    let bound = rational_int(r as i128) * (rational_int(2) + m_term + c0_bound(v, r, cand_q)?)
        / rational_int(l as i128);
    // least integer whose square clears the bound
    let ceil: BigUint = bound.ceil().to_integer().try_into().expect("bound >= 0");
    let mut n: BigUint = ceil.sqrt();
    let as_rat = |x: &BigUint| Rational::from_integer(BigInt::from(x.clone()));
    while &as_rat(&n) * &as_rat(&n) < bound {
        n += 1u32;
    }
    let n = u64::try_from(n).map_err(|_| Error::BadParams("N overflows u64".into()))?;
    Ok(n.max(1))
}

/// Number of values the step term `C_k` can take as `k` varies:
/// `(2 V_0 + 1)` achievable V-differences times the `Q` residue classes of
/// the `d(L(Q,*))` term times the `r` residue classes of `j_k`.
pub fn ck_value_count(v: &VSequence, r: u64, cand_q: u64) -> u64 {
    (2 * v.get(0) + 1) * cand_q * r
}

/// The slope bound `4 l^2 N^2 (3 l M Q r + 2)^2` with `M Q r` the `C_k`
/// value count.
pub fn p_bound(l: u64, n: u64, ck_count: u64) -> BigUint {
    let l = BigUint::from(l);
    let n = BigUint::from(n);
    let inner = 3u32 * &l * BigUint::from(ck_count) + 2u32;
    4u32 * &l * &l * &n * &n * &inner * &inner
}

#[derive(Clone, Debug)]
pub struct BoundCertificate {
    pub l: u64,
    pub r: u64,
    pub cand_q: u64,
    pub n: u64,
    pub ck_count: u64,
    pub p_max: BigUint,
}

/// Assembles the certificate for a knot with V-sequence `v`.
pub fn certificate(v: &VSequence, r: u64, l: u64, cand_q: u64) -> Result<BoundCertificate, Error> {
    let n = bound_constant_n(v, r, l, cand_q)?;
    let ck_count = ck_value_count(v, r, cand_q);
    Ok(BoundCertificate {
        l,
        r,
        cand_q,
        n,
        ck_count,
        p_max: p_bound(l, n, ck_count),
    })
}

impl BoundCertificate {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "l": self.l,
            "r": self.r,
            "Q": self.cand_q,
            "N": self.n,
            "ck_count": self.ck_count,
            "ck_rule": "(2*V0+1)*Q*r",
            "p_max": self.p_max.to_string(),
        })
    }
}

/// Parameters of one step-difference decomposition. `b` is a conjugation
/// fixed point on the candidate side and `m` the unique integer with
/// `0 <= a + j_0 - m q < q`.
#[derive(Clone, Debug)]
pub struct StepParams {
    pub p: u64,
    pub q: u64,
    pub cand_q: u64,
    pub r: u64,
    pub l: u64,
    pub a: u64,
    pub b: u64,
    pub m: u64,
    pub alpha: u8,
    pub epsilon: Sign,
    pub zeta: Sign,
}

/// The decomposition `A k + B + C_k` of a delta step difference.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepTerms {
    pub a_coef: Rational,
    pub b_coef: Rational,
    pub c_k: Rational,
    pub i_k: i128,
    pub j_k: i128,
}

impl StepTerms {
    pub fn total(&self, k: u64) -> Rational {
        &self.a_coef * rational_int(k as i128) + &self.b_coef + &self.c_k
    }
}

impl StepParams {
    pub fn validate(&self) -> Result<(), Error> {
        let fail = |msg: String| Err(Error::BadParams(msg));
        if self.l == 0 || !self.l.is_multiple_of(2) {
            return fail(format!("l must be even and positive, got {}", self.l));
        }
        if self.q == 0 || self.r == 0 || self.cand_q == 0 {
            return fail("q, r, Q must be positive".into());
        }
        let p = self.l as i128 * self.q as i128 + self.zeta.value() as i128 * self.r as i128;
        if p <= 0 || p as u64 != self.p {
            return fail(format!("p must equal l*q + zeta*r, got p={} vs {}", self.p, p));
        }
        if gcd_u64(self.p, self.q) != 1 || gcd_u64(self.p, self.cand_q) != 1 {
            return fail("p must be coprime to q and Q".into());
        }
        if self.a == 0 || (self.p > 2 && 2 * self.a >= self.p) || gcd_u64(self.a, self.p) != 1 {
            return fail(format!("a = {} out of range or not a unit", self.a));
        }
        if self.alpha > 1 {
            return fail(format!("alpha must be 0 or 1, got {}", self.alpha));
        }
        let two_b = 2 * self.b as i128;
        if two_b != self.cand_q as i128 - 1
            && two_b != self.p as i128 + self.cand_q as i128 - 1
        {
            return fail(format!("b = {} is not a conjugation fixed point", self.b));
        }
        // both translation terms must be integers
        if ((1 - self.alpha as i128) * self.p as i128 + self.q as i128 - 1) % 2 != 0 {
            return fail("translation (1-alpha)p + q - 1 is odd".into());
        }
        if self.j0_twice() % 2 != 0 {
            return fail("translation (1-alpha)*zeta*r + q - 1 is odd".into());
        }
        // m is determined by 0 <= a + j_0 - m q < q
        let slack = self.a as i128 + self.j_k(0) - self.m as i128 * self.q as i128;
        if slack < 0 || slack >= self.q as i128 {
            return fail(format!("m = {} violates its defining inequality", self.m));
        }
        Ok(())
    }

    fn j0_twice(&self) -> i128 {
        (1 - self.alpha as i128) * self.zeta.value() as i128 * self.r as i128 + self.q as i128 - 1
    }

    /// `a*l - m*p`, the drift of `phi` across one stride.
    fn al_minus_mp(&self) -> i128 {
        self.a as i128 * self.l as i128 - self.m as i128 * self.p as i128
    }

    pub fn i_k(&self, k: u64) -> i128 {
        ((1 - self.alpha as i128) * self.p as i128 + self.q as i128 - 1) / 2
            + k as i128 * self.al_minus_mp()
    }

    pub fn j_k(&self, k: u64) -> i128 {
        self.j0_twice() / 2 + k as i128 * self.al_minus_mp()
    }

    pub fn a_coef(&self) -> Rational {
        let drift = self.al_minus_mp();
        let ez = (self.epsilon * self.zeta).value() as i128;
        rational(ez * 2 * drift * drift, self.p as i128 * self.r as i128).unwrap()
            + rational(2 * self.l as i128, self.p as i128 * self.cand_q as i128).unwrap()
    }

    pub fn b_coef(&self) -> Rational {
        let drift = self.al_minus_mp();
        let m = self.m as i128;
        let inner = rational(
            self.zeta.value() as i128 * drift * drift,
            self.l as i128 * self.p as i128 * self.r as i128,
        )
        .unwrap()
            - rational(m * m, self.l as i128).unwrap()
            + rational_int(m * self.alpha as i128);
        rational_int(self.epsilon.value() as i128) * inner
    }

    fn phi(&self) -> AffineIdentification {
        AffineIdentification::new(self.a, self.b, self.alpha, self.p, self.q)
            .expect("validated parameters describe an identification")
    }

    pub fn c_k(&self, k: u64, v: &VSequence) -> Result<Rational, Error> {
        let p = self.p as i128;
        let cq = self.cand_q;
        let lead = rational(
            2 * self.b as i128 + 2 - p - cq as i128,
            p * cq as i128,
        )?;

        let lens_q = d_lens_vector(cq, self.p as i64)?;
        let label = self.b as i128 + self.l as i128 * k as i128;
        let dq_hi = lens_q.get(modu(label + 1, cq)).clone();
        let dq_lo = lens_q.get(modu(label, cq)).clone();

        let phi = self.phi();
        let kap = |i: u64| {
            let far = ((self.p as u128 + self.q as u128 - 1 - i as u128) / self.q as u128) as u64;
            (i / self.q).min(far)
        };
        let v_hi = v.get(kap(phi.apply(modu(label + 1, self.p)))) as i128;
        let v_lo = v.get(kap(phi.apply(modu(label, self.p)))) as i128;
        let v_term = rational_int(2 * self.epsilon.value() as i128 * (v_hi - v_lo));

        let lens_r = d_lens_vector(self.r, self.q as i64)?;
        let jk = self.j_k(k);
        let shift = self.a as i128 - self.m as i128 * self.q as i128;
        let dr_hi = lens_r.get(modu(shift + jk, self.r)).clone();
        let dr_lo = lens_r.get(modu(jk, self.r)).clone();
        let ez = rational_int((self.epsilon * self.zeta).value() as i128);

        Ok(lead - dq_hi + dq_lo + v_term - ez * (dr_hi - dr_lo))
    }

    /// Full decomposition at step `k` for the knot with V-sequence `v`.
    pub fn decompose(&self, k: u64, v: &VSequence) -> Result<StepTerms, Error> {
        self.validate()?;
        Ok(StepTerms {
            a_coef: self.a_coef(),
            b_coef: self.b_coef(),
            c_k: self.c_k(k, v)?,
            i_k: self.i_k(k),
            j_k: self.j_k(k),
        })
    }

    /// Window conditions under which the decomposition equals the direct
    /// step difference: `0 <= i_k < i_k + a < p + q` and
    /// `0 <= j_k, j_k + a - mq < q`.
    pub fn identity_window_ok(&self, k: u64) -> bool {
        let ik = self.i_k(k);
        let jk = self.j_k(k);
        let shift = self.a as i128 - self.m as i128 * self.q as i128;
        ik >= 0
            && ik + (self.a as i128) < self.p as i128 + self.q as i128
            && jk >= 0
            && jk < self.q as i128
            && jk + shift >= 0
            && jk + shift < self.q as i128
    }

    /// Exact test of `0 <= k < (p - (2l+1)r + l) / (2 N l^2 sqrt(p)) - 1/l`,
    /// squared to avoid the irrational intermediate.
    pub fn k_in_certified_range(&self, k: u64, n: u64) -> bool {
        let rhs = self.p as i128 - (2 * self.l as i128 + 1) * self.r as i128 + self.l as i128;
        if rhs <= 0 {
            return false;
        }
        let lhs = 2 * n as i128 * self.l as i128 * (k as i128 * self.l as i128 + 1);
        // lhs * sqrt(p) < rhs  <=>  lhs^2 * p < rhs^2
        BigInt::from(lhs).pow(2) * BigInt::from(self.p) < BigInt::from(rhs).pow(2)
    }
}

/// Direct evaluation of `delta(b + lk + 1) - delta(b + lk)` from the
/// definition, the oracle the decomposition is checked against.
pub fn direct_delta_step(params: &StepParams, k: u64, v: &VSequence) -> Result<Rational, Error> {
    let p = params.p;
    let phi = AffineIdentification::new(params.a, params.b, params.alpha, p, params.q)
        .ok_or_else(|| Error::BadParams("no such identification".into()))?;
    let eps = rational_int(params.epsilon.value() as i128);
    let delta = |label: i128| -> Result<Rational, Error> {
        let i = modu(label, p);
        let target = crate::surgery::d_surgery_point(v, p, params.q, phi.apply(i))?;
        Ok(crate::lens::d_lens(p, params.cand_q as i64, i)? - &eps * target)
    };
    let base = params.b as i128 + params.l as i128 * k as i128;
    Ok(delta(base + 1)? - delta(base)?)
}

/// One row of the degenerate-leading-coefficient case check.
#[derive(Clone, Debug)]
pub struct NilCaseRow {
    pub m: u64,
    pub q_class: u64,
    pub alpha: u8,
    pub zeta: Sign,
    pub sign: Sign,
    pub value: Rational,
    pub integral: bool,
}

/// Evaluates the 64 cases of the expression
/// `-eps m^2/6 + d(L(6,q), [zeta*m +- 1 + base]_6) - d(L(6,q), base)` with
/// `base = [3 zeta (1-alpha) + (q-1)/2]_6` and `eps = -zeta`, over
/// `m in 0..=3`, `q in {1, 5} mod 6`, `alpha in {0,1}`, both zeta and both
/// signs, using the supplied `d(L(6, q), label)` lookup.
pub fn nil_case_table_with(
    lookup: impl Fn(u64, u64) -> Rational,
) -> Vec<NilCaseRow> {
    let mut rows = Vec::with_capacity(64);
    for m in 0..=3u64 {
        for q_class in [1u64, 5] {
            for alpha in [0u8, 1] {
                for zeta in Sign::BOTH {
                    for sign in Sign::BOTH {
                        let epsilon = zeta.flip();
                        let base = modu(
                            3 * zeta.value() as i128 * (1 - alpha as i128)
                                + (q_class as i128 - 1) / 2,
                            6,
                        );
                        let shifted = modu(
                            zeta.value() as i128 * m as i128
                                + sign.value() as i128
                                + base as i128,
                            6,
                        );
                        let value = rational(
                            -(epsilon.value() as i128) * (m * m) as i128,
                            6,
                        )
                        .unwrap()
                            + lookup(q_class, shifted)
                            - lookup(q_class, base);
                        rows.push(NilCaseRow {
                            m,
                            q_class,
                            alpha,
                            zeta,
                            sign,
                            integral: value.is_integer(),
                            value,
                        });
                    }
                }
            }
        }
    }
    rows
}

/// The 64-row case table over the true `d(L(6, *))` values.
pub fn nil_case_table() -> Vec<NilCaseRow> {
    let l61 = d_lens_vector(6, 1).expect("L(6,1)");
    let l65 = d_lens_vector(6, 5).expect("L(6,5)");
    nil_case_table_with(move |q_class, label| {
        match q_class {
            1 => l61.get(label).clone(),
            5 => l65.get(label).clone(),
            _ => unreachable!("q classes are 1 and 5"),
        }
    })
}

/// True iff no case row is integer valued, which rules out `A = 0` for
/// every slope of the form `6q +- 6`.
pub fn verify_nil_a_nonzero() -> bool {
    nil_case_table().iter().all(|row| !row.integral)
}

pub fn nil_case_table_csv(rows: &[NilCaseRow]) -> String {
    let mut out = String::from("m,q_class,alpha,zeta,sign,value,integral\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.m,
            r.q_class,
            r.alpha,
            r.zeta.value(),
            r.sign.value(),
            r.value,
            r.integral
        ));
    }
    out
}
