//! Parameter bundles, evaluation policies and results, with the canonical
//! JSON encoding used by the CLI and the C ABI.
//!
//! Matrices serialize as `{"rows":r,"cols":c,"data":[[[re,im],…],…]}` with
//! `data` in row order; bare complex numbers as `[re,im]` pairs.

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64};
pub use crate::special::Kind;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// The three coupling patterns across lattice indices.
///
/// With M = m₁+…+mₙ the general term of each family is
///
/// * `A`: (A;x)_M · Πᵢ (Bᵢ)_{mᵢ} (Cᵢ)⁻¹_{mᵢ} zᵢ^{mᵢ}/mᵢ!
/// * `C`: (A;x)_M (B)_M · Πᵢ (Cᵢ)⁻¹_{mᵢ} zᵢ^{mᵢ}/mᵢ!
/// * `D`: (A;x)_M (C)⁻¹_M · Πᵢ (Bᵢ)_{mᵢ} zᵢ^{mᵢ}/mᵢ!
///
/// where the incomplete symbol (A;x)_M becomes [A;x]_M for the upper kind
/// and the complete (A)_M when `kind` is complete.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    A,
    C,
    D,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::A => "A",
            Family::C => "C",
            Family::D => "D",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Family::A),
            "C" | "c" => Ok(Family::C),
            "D" | "d" => Ok(Family::D),
            other => Err(Error::InvalidParams(format!("unknown family {other:?}"))),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    data: Vec<Vec<[f64; 2]>>,
}

impl Serialize for CMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let data = (0..self.rows())
            .map(|i| {
                (0..self.cols())
                    .map(|j| {
                        let v = self.get(i, j);
                        [v.re, v.im]
                    })
                    .collect()
            })
            .collect();
        MatrixRepr {
            rows: self.rows(),
            cols: self.cols(),
            data,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(deserializer)?;
        if repr.data.len() != repr.rows {
            return Err(D::Error::custom(format!(
                "matrix data has {} rows, header says {}",
                repr.data.len(),
                repr.rows
            )));
        }
        let mut entries = Vec::with_capacity(repr.rows * repr.cols);
        for (i, row) in repr.data.iter().enumerate() {
            if row.len() != repr.cols {
                return Err(D::Error::custom(format!(
                    "matrix row {i} has {} entries, header says {}",
                    row.len(),
                    repr.cols
                )));
            }
            entries.extend(row.iter().map(|&[re, im]| C64::new(re, im)));
        }
        CMatrix::new(repr.rows, repr.cols, entries)
            .map_err(|e| D::Error::custom(format!("invalid matrix: {e}")))
    }
}

/// serde adapter for `Vec<C64>` as a list of `[re,im]` pairs.
pub mod c64_pairs {
    use super::*;

    pub fn serialize<S: Serializer>(
        v: &[C64],
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = v.iter().map(|z| [z.re, z.im]).collect();
        pairs.serialize(serializer)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Vec<C64>, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(deserializer)?;
        let v: Vec<C64> = pairs.iter().map(|&[re, im]| C64::new(re, im)).collect();
        for (k, z) in v.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(D::Error::custom(format!("non-finite entry at index {k}")));
            }
        }
        Ok(v)
    }
}

/// Full parameter set of one incomplete Lauricella matrix function.
///
/// All matrices must be square of one shared dimension and belong to a single
/// commuting family.  `x` is required for the incomplete kinds and ignored
/// for the complete kind.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IlmfParams {
    pub family: Family,
    pub kind: Kind,
    #[serde(rename = "A")]
    pub a: CMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    #[serde(rename = "B_list")]
    pub b_list: Vec<CMatrix>,
    #[serde(rename = "C_list")]
    pub c_list: Vec<CMatrix>,
    #[serde(with = "c64_pairs")]
    pub z_list: Vec<C64>,
}

impl IlmfParams {
    pub fn n(&self) -> usize {
        self.z_list.len()
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    /// Number of B resp. C matrices the family expects for n variables.
    pub fn expected_counts(family: Family, n: usize) -> (usize, usize) {
        match family {
            Family::A => (n, n),
            Family::C => (1, n),
            Family::D => (n, 1),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if n == 0 {
            return Err(Error::InvalidParams("empty z_list".into()));
        }
        if n > 6 {
            return Err(Error::InvalidParams(format!(
                "n = {n} variables unsupported (max 6)"
            )));
        }
        let (want_b, want_c) = Self::expected_counts(self.family, n);
        if self.b_list.len() != want_b {
            return Err(Error::InvalidParams(format!(
                "family {} with n = {n} expects {want_b} B matrices, got {}",
                self.family.as_str(),
                self.b_list.len()
            )));
        }
        if self.c_list.len() != want_c {
            return Err(Error::InvalidParams(format!(
                "family {} with n = {n} expects {want_c} C matrices, got {}",
                self.family.as_str(),
                self.c_list.len()
            )));
        }
        let r = self.a.rows();
        if r == 0 || r > 4 {
            return Err(Error::InvalidParams(format!(
                "matrix dimension {r} outside supported range 1..=4"
            )));
        }
        for (label, m) in self.all_matrices() {
            if !m.is_square() || m.rows() != r {
                return Err(Error::InvalidParams(format!(
                    "{label} is {}x{}, expected {r}x{r}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        if self.kind.is_incomplete() {
            match self.x {
                Some(x) if x > 0.0 => {}
                Some(x) => {
                    return Err(Error::InvalidParams(format!(
                        "incomplete kind requires x > 0, got {x}"
                    )))
                }
                None => {
                    return Err(Error::InvalidParams(
                        "incomplete kind requires x".into(),
                    ))
                }
            }
        }
        Ok(())
    }

    pub fn all_matrices(&self) -> Vec<(String, &CMatrix)> {
        let mut out = vec![("A".to_string(), &self.a)];
        for (i, b) in self.b_list.iter().enumerate() {
            out.push((format!("B_list[{i}]"), b));
        }
        for (i, c) in self.c_list.iter().enumerate() {
            out.push((format!("C_list[{i}]"), c));
        }
        out
    }
}

/// Truncation and convergence policy for lattice summation.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SeriesPolicy {
    #[serde(default = "default_per_index")]
    pub max_order_per_index: usize,
    #[serde(default = "default_total")]
    pub max_total_order: usize,
    #[serde(default = "default_tail_tol")]
    pub tail_tol: f64,
    #[serde(default = "default_z_guard")]
    pub z_guard: f64,
}

fn default_per_index() -> usize {
    40
}
fn default_total() -> usize {
    80
}
fn default_tail_tol() -> f64 {
    1e-14
}
fn default_z_guard() -> f64 {
    0.5
}

impl Default for SeriesPolicy {
    fn default() -> Self {
        Self {
            max_order_per_index: default_per_index(),
            max_total_order: default_total(),
            tail_tol: default_tail_tol(),
            z_guard: default_z_guard(),
        }
    }
}

/// Result of a series evaluation with convergence diagnostics.
///
/// `tail_estimate` is the norm of the last summed shell; `truncated` is set
/// when the order caps were hit before the tail criterion was met.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Evaluation {
    pub value: CMatrix,
    pub terms_summed: usize,
    pub tail_estimate: f64,
    pub truncated: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_params() -> IlmfParams {
        IlmfParams {
            family: Family::A,
            kind: Kind::Lower,
            a: CMatrix::diagonal(&[C64::new(1.1, 0.2), C64::new(0.8, 0.0)]),
            x: Some(0.7),
            b_list: vec![CMatrix::identity(2)],
            c_list: vec![CMatrix::scaled_identity(2, C64::new(1.5, 0.0))],
            z_list: vec![C64::new(0.1, -0.05)],
        }
    }

    #[test]
    fn matrix_json_round_trip() {
        let m = CMatrix::new(
            1,
            2,
            vec![C64::new(1.5, -0.25), C64::new(0.0, 3.0)],
        )
        .unwrap();
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(text, r#"{"rows":1,"cols":2,"data":[[[1.5,-0.25],[0.0,3.0]]]}"#);
        let back: CMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn matrix_json_shape_mismatch_is_named() {
        let err = serde_json::from_str::<CMatrix>(
            r#"{"rows":2,"cols":1,"data":[[[1.0,0.0]]]}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("rows"), "{err}");
    }

    #[test]
    fn matrix_json_rejects_non_finite() {
        let err = serde_json::from_str::<CMatrix>(
            r#"{"rows":1,"cols":1,"data":[[[1e999,0.0]]]}"#,
        );
        assert!(err.is_err());
    }

    #[test]
    fn params_round_trip_preserves_everything() {
        let p = sample_params();
        let text = serde_json::to_string(&p).unwrap();
        let back: IlmfParams = serde_json::from_str(&text).unwrap();
        assert_eq!(back.family, p.family);
        assert_eq!(back.kind, p.kind);
        assert_eq!(back.x, p.x);
        assert_eq!(back.a, p.a);
        assert_eq!(back.z_list, p.z_list);
    }

    #[test]
    fn complete_kind_omits_x() {
        let mut p = sample_params();
        p.kind = Kind::Complete;
        p.x = None;
        let text = serde_json::to_string(&p).unwrap();
        assert!(!text.contains("\"x\""));
        assert!(serde_json::from_str::<IlmfParams>(&text).is_ok());
    }

    #[test]
    fn validation_catches_count_mismatches() {
        let mut p = sample_params();
        p.z_list.push(C64::new(0.05, 0.0));
        assert!(matches!(p.validate(), Err(Error::InvalidParams(_))));

        let mut p = sample_params();
        p.x = None;
        assert!(matches!(p.validate(), Err(Error::InvalidParams(_))));

        let mut p = sample_params();
        p.b_list[0] = CMatrix::identity(3);
        assert!(matches!(p.validate(), Err(Error::InvalidParams(_))));

        assert!(sample_params().validate().is_ok());
    }

    #[test]
    fn policy_defaults_fill_missing_fields() {
        let p: SeriesPolicy = serde_json::from_str("{}").unwrap();
        assert_eq!(p, SeriesPolicy::default());
        let p: SeriesPolicy = serde_json::from_str(r#"{"tail_tol":1e-10}"#).unwrap();
        assert_eq!(p.tail_tol, 1e-10);
        assert_eq!(p.max_total_order, 80);
    }
}
