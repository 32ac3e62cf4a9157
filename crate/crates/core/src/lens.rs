//! Correction terms of lens spaces.
//!
//! `d(L(p,q), i)` is computed by the recursion
//!
//! ```text
//! d(S^3, 0) = 0
//! d(L(p,q), i) = -1/4 + (2i+1-p-q)^2 / (4pq) - d(L(q, p mod q), i mod q)
//! ```
//!
//! which terminates because `(p, q) -> (q, p mod q)` is the Euclidean
//! algorithm. Spin^c structures are labelled by `Z/p`; the recursion is
//! evaluated at the canonical representative in `[0, p)`.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};

use crate::error::Error;
use crate::numeric::{gcd_u64, modu, rational, rational_from_pair, rational_int, rational_to_pair, Rational};

/// A lens space `L(p, q)`, i.e. `p/q`-surgery on the unknot, with `q`
/// stored as its canonical representative in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LensSpace {
    p: u64,
    q: u64,
}

impl LensSpace {
    pub fn new(p: u64, q: i64) -> Result<LensSpace, Error> {
        if p == 0 {
            return Err(Error::ZeroOrder);
        }
        let qr = modu(q as i128, p);
        let g = gcd_u64(p, qr);
        // gcd(p, 0) = p, so q = 0 survives only for p = 1
        if g != 1 {
            return Err(Error::NotCoprime { a: p, b: q, g });
        }
        Ok(LensSpace { p, q: qr })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }
}

/// Conjugation on spin^c labels: `J(i) = p + q - 1 - i` reduced into `[0, p)`.
pub fn conjugate(i: u64, p: u64, q: u64) -> Result<u64, Error> {
    check_label(i, p)?;
    Ok(modu(p as i128 + q as i128 - 1 - i as i128, p))
}

fn check_label(i: u64, p: u64) -> Result<(), Error> {
    if i >= p {
        return Err(Error::LabelOutOfRange { label: i, order: p });
    }
    Ok(())
}

/// The full set `{ d(L(p,q), i) : i in [0, p) }` of a surgered manifold,
/// indexed by spin^c label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DVector {
    p: u64,
    q: u64,
    entries: Vec<Rational>,
}

impl DVector {
    pub(crate) fn new(p: u64, q: u64, entries: Vec<Rational>) -> DVector {
        debug_assert_eq!(entries.len(), p as usize);
        DVector { p, q, entries }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn get(&self, i: u64) -> &Rational {
        &self.entries[i as usize]
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn negated(&self) -> DVector {
        DVector {
            p: self.p,
            q: self.q,
            entries: self.entries.iter().map(|x| -x).collect(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let d: Vec<serde_json::Value> = self
            .entries
            .iter()
            .map(|x| {
                let (n, dn) = rational_to_pair(x);
                serde_json::json!([n, dn])
            })
            .collect();
        serde_json::json!({ "p": self.p, "q": self.q, "d": d })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<DVector, Error> {
        let p = v["p"]
            .as_u64()
            .ok_or_else(|| Error::Parse("missing p".into()))?;
        let q = v["q"]
            .as_u64()
            .ok_or_else(|| Error::Parse("missing q".into()))?;
        let d = v["d"]
            .as_array()
            .ok_or_else(|| Error::Parse("missing d".into()))?;
        if d.len() != p as usize {
            return Err(Error::Parse(format!(
                "expected {} entries, found {}",
                p,
                d.len()
            )));
        }
        let mut entries = Vec::with_capacity(d.len());
        for pair in d {
            let num = pair[0]
                .as_str()
                .ok_or_else(|| Error::Parse("entry numerator must be a string".into()))?;
            let den = pair[1]
                .as_str()
                .ok_or_else(|| Error::Parse("entry denominator must be a string".into()))?;
            entries.push(rational_from_pair(num, den)?);
        }
        Ok(DVector { p, q, entries })
    }
}

/// Point evaluation of the recursion; `q` canonical in `[0, p)`.
/// All intermediates are widened so labels near `u64::MAX` stay exact.
fn d_point(p: u64, q: u64, i: u64) -> Rational {
    use num_bigint::BigInt;
    if p == 1 {
        return rational_int(0);
    }
    debug_assert!(q >= 1 && q < p);
    let num = BigInt::from(2 * i as i128 + 1 - p as i128 - q as i128);
    let den = BigInt::from(4) * BigInt::from(p) * BigInt::from(q);
    let term = Rational::new(&num * &num, den) - rational(1, 4).unwrap();
    term - d_point(q, p % q, i % q)
}

/// Builds the whole vector for `(p, q)` by walking the Euclidean chain
/// bottom-up, so each level is computed once.
fn d_vector_raw(p: u64, q: u64) -> Vec<Rational> {
    let mut chain = vec![(p, q)];
    let (mut cp, mut cq) = (p, q);
    while cp != 1 {
        let next = (cq, cp % cq);
        chain.push(next);
        (cp, cq) = next;
    }
    let mut lower = vec![rational_int(0)];
    for &(lp, lq) in chain.iter().rev().skip(1) {
        let quarter = rational(1, 4).unwrap();
        let den = 4 * lp as i128 * lq as i128;
        let mut entries = Vec::with_capacity(lp as usize);
        for i in 0..lp {
            let num = 2 * i as i128 + 1 - lp as i128 - lq as i128;
            let e = rational(num * num, den).unwrap() - &quarter - &lower[(i % lq) as usize];
            entries.push(e);
        }
        lower = entries;
    }
    lower
}

/// `d(L(p,q), i)` without any caching.
pub fn d_lens(p: u64, q: i64, i: u64) -> Result<Rational, Error> {
    let lens = LensSpace::new(p, q)?;
    check_label(i, p)?;
    Ok(d_point(lens.p, lens.q, i))
}

/// All of `d(L(p,q), *)` without any caching.
pub fn d_lens_vector(p: u64, q: i64) -> Result<DVector, Error> {
    let lens = LensSpace::new(p, q)?;
    Ok(DVector::new(lens.p, lens.q, d_vector_raw(lens.p, lens.q)))
}

/// Environment variable naming the on-disk cache directory.
pub const CACHE_ENV: &str = "NILSURF_CACHE";

/// Memoizing calculator for lens-space correction terms.
///
/// Full vectors are cached in memory per `(p, q)`; an optional disk cache
/// stores one JSON file per pair. The cache is a pure accelerator: results
/// are identical with it disabled. Point queries recurse directly and never
/// materialize a vector.
pub struct LensCache {
    memo: Mutex<HashMap<(u64, u64), Arc<DVector>>>,
    disk: Option<PathBuf>,
}

impl LensCache {
    pub fn new() -> LensCache {
        LensCache {
            memo: Mutex::new(HashMap::new()),
            disk: None,
        }
    }

    pub fn with_disk_dir(dir: PathBuf) -> LensCache {
        LensCache {
            memo: Mutex::new(HashMap::new()),
            disk: Some(dir),
        }
    }

    /// Disk cache directory taken from `NILSURF_CACHE` when set.
    pub fn from_env() -> LensCache {
        match std::env::var_os(CACHE_ENV) {
            Some(dir) if !dir.is_empty() => LensCache::with_disk_dir(PathBuf::from(dir)),
            _ => LensCache::new(),
        }
    }

    pub fn vector(&self, p: u64, q: i64) -> Result<Arc<DVector>, Error> {
        let lens = LensSpace::new(p, q)?;
        let key = (lens.p, lens.q);
        if let Some(v) = self.memo.lock().unwrap().get(&key) {
            return Ok(Arc::clone(v));
        }
        let vec = self
            .read_disk(lens)
            .unwrap_or_else(|| {
                let v = DVector::new(lens.p, lens.q, d_vector_raw(lens.p, lens.q));
                self.write_disk(&v);
                v
            });
        let arc = Arc::new(vec);
        self.memo
            .lock()
            .unwrap()
            .entry(key)
            .or_insert_with(|| Arc::clone(&arc));
        Ok(arc)
    }

    pub fn d(&self, p: u64, q: i64, i: u64) -> Result<Rational, Error> {
        let lens = LensSpace::new(p, q)?;
        check_label(i, p)?;
        if let Some(v) = self.memo.lock().unwrap().get(&(lens.p, lens.q)) {
            return Ok(v.get(i).clone());
        }
        Ok(d_point(lens.p, lens.q, i))
    }

    fn cache_file(&self, lens: LensSpace) -> Option<PathBuf> {
        self.disk
            .as_ref()
            .map(|d| d.join(format!("d_L_{}_{}.json", lens.p, lens.q)))
    }

    /// A malformed or missing file falls through to recomputation.
    fn read_disk(&self, lens: LensSpace) -> Option<DVector> {
        let path = self.cache_file(lens)?;
        let text = std::fs::read_to_string(path).ok()?;
        let value: serde_json::Value = serde_json::from_str(&text).ok()?;
        let vec = DVector::from_json(&value).ok()?;
        (vec.p == lens.p && vec.q == lens.q).then_some(vec)
    }

    /// Best effort: written via a temp file and renamed, so a concurrent
    /// reader never observes a partial entry. IO errors are ignored.
    fn write_disk(&self, vec: &DVector) {
        let Some(path) = self.cache_file(LensSpace { p: vec.p, q: vec.q }) else {
            return;
        };
        let Some(dir) = path.parent() else { return };
        if std::fs::create_dir_all(dir).is_err() {
            return;
        }
        let tmp = path.with_extension(format!("tmp.{}", std::process::id()));
        if std::fs::write(&tmp, vec.to_json().to_string()).is_ok() {
            let _ = std::fs::rename(&tmp, &path);
        }
    }
}

impl Default for LensCache {
    fn default() -> Self {
        LensCache::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational;

    fn frac(n: i128, d: i128) -> Rational {
        rational(n, d).unwrap()
    }

    #[test]
    fn l61_row() {
        let v = d_lens_vector(6, 1).unwrap();
        let expect = [
            frac(5, 4),
            frac(5, 12),
            frac(-1, 12),
            frac(-1, 4),
            frac(-1, 12),
            frac(5, 12),
        ];
        assert_eq!(v.entries(), &expect);
    }

    #[test]
    fn l65_row() {
        let v = d_lens_vector(6, 5).unwrap();
        let expect = [
            frac(-5, 12),
            frac(1, 12),
            frac(1, 4),
            frac(1, 12),
            frac(-5, 12),
            frac(-5, 4),
        ];
        assert_eq!(v.entries(), &expect);
    }

    #[test]
    fn three_sphere() {
        assert_eq!(d_lens(1, 0, 0).unwrap(), rational_int(0));
        assert_eq!(d_lens_vector(1, 0).unwrap().entries(), &[rational_int(0)]);
    }

    #[test]
    fn l21_by_hand() {
        assert_eq!(d_lens(2, 1, 0).unwrap(), frac(1, 4));
        assert_eq!(d_lens(2, 1, 1).unwrap(), frac(-1, 4));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(d_lens(0, 1, 0).is_err());
        assert!(d_lens(6, 2, 0).is_err());
        assert!(d_lens(6, 1, 6).is_err());
    }

    #[test]
    fn q_reduced_at_construction() {
        // q may be supplied negative or >= p
        assert_eq!(d_lens_vector(6, 7).unwrap(), d_lens_vector(6, 1).unwrap());
        assert_eq!(d_lens_vector(6, -1).unwrap(), d_lens_vector(6, 5).unwrap());
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(conjugate(0, 6, 1).unwrap(), 0);
        assert_eq!(conjugate(2, 6, 1).unwrap(), 4);
        assert_eq!(conjugate(1, 6, 5).unwrap(), 3);
        assert!(conjugate(6, 6, 1).is_err());
    }

    #[test]
    fn point_matches_vector() {
        for (p, q) in [(12, 1i64), (13, 5), (60, 11), (144, 25)] {
            let v = d_lens_vector(p, q).unwrap();
            for i in 0..p {
                assert_eq!(&d_lens(p, q, i).unwrap(), v.get(i));
            }
        }
    }

    #[test]
    fn closed_form_q1() {
        // independent form for q = 1: ((p - 2i)^2 - p) / (4p)
        for p in 1..=50u64 {
            for i in 0..p {
                let expect = frac(
                    (p as i128 - 2 * i as i128).pow(2) - p as i128,
                    4 * p as i128,
                );
                assert_eq!(d_lens(p, 1, i).unwrap(), expect, "p={p} i={i}");
            }
        }
    }

    #[test]
    fn memo_and_disk_cache_transparent() {
        let dir = tempfile::tempdir().unwrap();
        let cached = LensCache::with_disk_dir(dir.path().to_path_buf());
        let plain = d_lens_vector(60, 11).unwrap();
        let first = cached.vector(60, 11).unwrap();
        assert_eq!(first.as_ref(), &plain);
        // second instance reads the file written by the first
        let reread = LensCache::with_disk_dir(dir.path().to_path_buf());
        assert!(dir.path().join("d_L_60_11.json").exists());
        assert_eq!(reread.vector(60, 11).unwrap().as_ref(), &plain);
        assert_eq!(cached.d(60, 11, 7).unwrap(), plain.get(7).clone());
    }

    #[test]
    fn corrupt_cache_entry_is_recomputed() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("d_L_6_1.json"), "{ not json").unwrap();
        let cache = LensCache::with_disk_dir(dir.path().to_path_buf());
        assert_eq!(
            cache.vector(6, 1).unwrap().as_ref(),
            &d_lens_vector(6, 1).unwrap()
        );
    }

    #[test]
    fn json_round_trip() {
        let v = d_lens_vector(6, 5).unwrap();
        let j = v.to_json();
        assert_eq!(DVector::from_json(&j).unwrap(), v);
    }

    #[test]
    fn point_queries_at_large_orders() {
        // the recursion is logarithmic in p, so huge orders are legitimate
        let p: u64 = 1_000_000_000_000_037; // prime
        for i in [0u64, 1, p / 2, p - 1] {
            let expect = frac(
                (p as i128 - 2 * i as i128).pow(2) - p as i128,
                4 * p as i128,
            );
            assert_eq!(d_lens(p, 1, i).unwrap(), expect);
        }
        // conjugation symmetry survives the widened arithmetic
        let q: i64 = 999_999_999_999_999;
        for i in [0u64, 17, p - 3] {
            let j = conjugate(i, p, q as u64).unwrap();
            assert_eq!(d_lens(p, q, i).unwrap(), d_lens(p, q, j).unwrap());
        }
    }
}
