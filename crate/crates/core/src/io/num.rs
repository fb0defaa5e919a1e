//! Fixed-precision real number output.

use serde::ser::{SerializeSeq, SerializeStruct};
use serde::Serializer;

use crate::psp::PspResult;
use crate::scalar::Scalar;

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds to 12 significant digits. Non-finite values pass through.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        // drop the sign of -0.0
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses")
}

/// Text form used in CSV output: the shortest representation of the rounded value.
pub fn fmt_real(x: f64) -> String {
    format!("{}", round_sig(x))
}

pub fn sig12<T: Scalar, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(round_sig(v.as_f64()))
}

pub fn sig12_vec<T: Scalar, S: Serializer>(v: &[T], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&round_sig(x.as_f64()))?;
    }
    seq.end()
}

pub fn sig12_pairs<S: Serializer>(v: &[(f64, f64)], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for (a, b) in v {
        seq.serialize_element(&[round_sig(*a), round_sig(*b)])?;
    }
    seq.end()
}

pub fn sig12_map<K: serde::Serialize, S: Serializer>(
    v: &std::collections::BTreeMap<K, f64>,
    s: S,
) -> Result<S::Ok, S::Error> {
    s.collect_map(v.iter().map(|(k, x)| (k, round_sig(*x))))
}

pub fn psp_result<T: Scalar, S: Serializer>(v: &PspResult<T>, s: S) -> Result<S::Ok, S::Error> {
    let mut st = s.serialize_struct("PspResult", 2)?;
    st.serialize_field("d_tv", &round_sig(v.d_tv.as_f64()))?;
    st.serialize_field("psp_percent", &round_sig(v.psp_percent.as_f64()))?;
    st.end()
}

pub fn opt_psp<T: Scalar, S: Serializer>(v: &Option<PspResult<T>>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(p) => psp_result(p, s),
        None => s.serialize_none(),
    }
}
