//! Correction terms of `p/q`-surgery on a knot given by its V-sequence:
//!
//! ```text
//! d(S^3_K(p/q), i) = d(L(p,q), i) - 2 V_{kappa(i)},
//! kappa(i) = min{ floor(i/q), floor((p+q-1-i)/q) }
//! ```
//!
//! for `p, q > 0` coprime and labels `i` in `[0, p)`.

use crate::alexander::VSequence;
use crate::error::Error;
use crate::lens::{d_lens, d_lens_vector, DVector};
use crate::numeric::{gcd_u64, rational_int, Rational, Sign};

/// Index map from spin^c labels to V-sequence indices.
pub fn kappa(i: u64, p: u64, q: u64) -> Result<u64, Error> {
    if q == 0 {
        return Err(Error::ZeroDenom);
    }
    if i >= p {
        return Err(Error::LabelOutOfRange { label: i, order: p });
    }
    let far = (p as u128 + q as u128 - 1 - i as u128) / q as u128;
    Ok((i / q).min(far as u64))
}

/// A surgery `S^3_K(p/q)` on the knot with V-sequence `v`, carried with the
/// orientation sign `epsilon`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurgeryDescription {
    pub v: VSequence,
    pub p: u64,
    pub q: u64,
    pub epsilon: Sign,
}

impl SurgeryDescription {
    pub fn new(v: VSequence, p: u64, q: u64, epsilon: Sign) -> Result<SurgeryDescription, Error> {
        if p == 0 {
            return Err(Error::ZeroOrder);
        }
        if q == 0 {
            return Err(Error::ZeroDenom);
        }
        let g = gcd_u64(p, q);
        if g != 1 {
            return Err(Error::NotCoprime {
                a: p,
                b: q as i64,
                g,
            });
        }
        Ok(SurgeryDescription { v, p, q, epsilon })
    }
}

pub(crate) fn surgery_entries(v: &VSequence, p: u64, q: u64, lens: &DVector) -> Vec<Rational> {
    (0..p)
        .map(|i| {
            let far = ((p as u128 + q as u128 - 1 - i as u128) / q as u128) as u64;
            let j = (i / q).min(far);
            lens.get(i) - rational_int(2 * v.get(j) as i128)
        })
        .collect()
}

/// The vector `d(S^3_K(p/q), *)` over all spin^c labels.
pub fn d_surgery(v: &VSequence, p: u64, q: u64) -> Result<DVector, Error> {
    let desc = SurgeryDescription::new(v.clone(), p, q, Sign::Plus)?;
    let lens = d_lens_vector(desc.p, desc.q as i64)?;
    Ok(DVector::new(p, q, surgery_entries(v, p, q, &lens)))
}

/// Single-entry evaluation without materializing the vector.
pub fn d_surgery_point(v: &VSequence, p: u64, q: u64, i: u64) -> Result<Rational, Error> {
    let j = kappa(i, p, q)?;
    Ok(d_lens(p, q as i64, i)? - rational_int(2 * v.get(j) as i128))
}

/// Applies the orientation: `epsilon = -1` negates every entry, leaving the
/// spin^c labels untouched (relabelling is the matching engine's job).
pub fn oriented_d(desc: &SurgeryDescription) -> Result<DVector, Error> {
    let d = d_surgery(&desc.v, desc.p, desc.q)?;
    Ok(match desc.epsilon {
        Sign::Plus => d,
        Sign::Minus => d.negated(),
    })
}
