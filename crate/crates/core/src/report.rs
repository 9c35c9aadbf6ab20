//! Output conventions shared by all reports: CSV numbers carry 17
//! significant digits, and extended reals serialize to JSON as numbers when
//! finite and as the strings "inf", "-inf" or "nan" otherwise.

use serde::Serializer;

/// Version tag embedded in every JSON report.
pub const SCHEMA: u32 = 1;

pub fn fmt17(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        nonfinite(v).to_string()
    }
}

fn nonfinite(v: f64) -> &'static str {
    if v.is_nan() {
        "nan"
    } else if v > 0.0 {
        "inf"
    } else {
        "-inf"
    }
}

pub fn extended<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_str(nonfinite(*v))
    }
}

pub fn extended_vec<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&Extended(*x))?;
    }
    seq.end()
}

/// Wrapper that serializes through [`extended`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extended(pub f64);

impl serde::Serialize for Extended {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        extended(&self.0, s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for v in [0.1, 1.0 / 3.0, 2.163953413738653, -1e-300, 6.0] {
            let s = fmt17(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
            let mantissa = s.split('e').next().unwrap().trim_start_matches('-');
            assert_eq!(mantissa.replace('.', "").len(), 17);
        }
        assert_eq!(fmt17(f64::INFINITY), "inf");
    }

    #[test]
    fn json_extended() {
        let j = serde_json::to_string(&[Extended(1.5), Extended(f64::INFINITY)]).unwrap();
        assert_eq!(j, r#"[1.5,"inf"]"#);
    }
}
