use super::{Datum, DatumError, IParams, RootDatum, SuperCartanDatum};
use crate::scalar::{parse_scalar, render_ratfunc, QPiScalar};
use serde::{Deserialize, Serialize};

/// A scalar given by its specializations at `π = 1` and `π = −1`, each a rational function of `q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarPair {
    pub plus: String,
    pub minus: String,
}

impl ScalarPair {
    pub fn from_scalar(x: &QPiScalar) -> Self {
        ScalarPair {
            plus: render_ratfunc(&x.plus),
            minus: render_ratfunc(&x.minus),
        }
    }

    pub fn to_scalar(&self) -> Result<QPiScalar, DatumError> {
        let comp = |s: &str| -> Result<_, DatumError> {
            let v = parse_scalar(s)
                .map_err(|e| DatumError::Malformed(format!("varsigma {s:?}: {e}")))?;
            if v.plus != v.minus {
                return Err(DatumError::Malformed(format!(
                    "varsigma component {s:?} must not involve p"
                )));
            }
            Ok(v.plus)
        };
        Ok(QPiScalar::new(comp(&self.plus)?, comp(&self.minus)?))
    }
}

/// On-disk datum format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatumDescriptor {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(rename = "I")]
    pub index_set: Vec<i64>,
    pub dot: Vec<Vec<i64>>,
    pub parity: Vec<u8>,
    #[serde(rename = "super", default, skip_serializing_if = "Option::is_none")]
    pub is_super: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub varsigma: Option<Vec<ScalarPair>>,
    #[serde(rename = "X_rank", default, skip_serializing_if = "Option::is_none")]
    pub x_rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairing: Option<Vec<Vec<i64>>>,
}

impl DatumDescriptor {
    pub fn from_json(src: &str) -> Result<Self, DatumError> {
        serde_json::from_str(src).map_err(|e| DatumError::Malformed(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("descriptor serializes")
    }

    pub fn from_datum(d: &Datum) -> Self {
        let c = &d.cartan;
        DatumDescriptor {
            name: Some(d.name.clone()),
            index_set: c.labels.clone(),
            dot: c.dot.clone(),
            parity: c.parity.clone(),
            is_super: Some(c.is_super),
            tau: Some(d.params.tau.iter().map(|&t| c.labels[t]).collect()),
            varsigma: Some(
                d.params
                    .varsigma
                    .iter()
                    .map(ScalarPair::from_scalar)
                    .collect(),
            ),
            x_rank: Some(d.root.x_rank),
            pairing: Some(d.root.pairing.clone()),
        }
    }

    /// Builds a datum; shape problems are errors, axiom failures are left to validation.
    pub fn to_datum(&self) -> Result<Datum, DatumError> {
        let n = self.index_set.len();
        if n == 0 {
            return Err(DatumError::Malformed("empty index set".into()));
        }
        if self.parity.len() != n {
            return Err(DatumError::Malformed(format!("parity needs {n} entries")));
        }
        if self.dot.len() != n || self.dot.iter().any(|r| r.len() != n) {
            return Err(DatumError::Malformed(format!("dot must be {n}x{n}")));
        }
        let mut sorted = self.index_set.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != n {
            return Err(DatumError::Malformed(
                "index labels must be distinct".into(),
            ));
        }
        let cartan = SuperCartanDatum {
            labels: self.index_set.clone(),
            dot: self.dot.clone(),
            parity: self.parity.clone(),
            is_super: self.is_super.unwrap_or(false),
        };
        let root = match (&self.pairing, self.x_rank) {
            (Some(p), xr) => {
                let x_rank = xr.unwrap_or_else(|| p.first().map_or(0, |r| r.len()));
                if p.len() != n || p.iter().any(|r| r.len() != x_rank) {
                    return Err(DatumError::Malformed(format!(
                        "pairing must be {n}x{x_rank}"
                    )));
                }
                RootDatum {
                    x_rank,
                    pairing: p.clone(),
                }
            }
            (None, _) if self.dot.iter().enumerate().all(|(i, r)| r[i] > 0) => {
                RootDatum::simply_connected(&cartan)
            }
            (None, _) => RootDatum {
                x_rank: n,
                pairing: vec![vec![0; n]; n],
            },
        };
        let mut params = if self.dot.iter().enumerate().all(|(i, r)| r[i] > 0) {
            IParams::standard(&cartan)
        } else {
            IParams {
                tau: (0..n).collect(),
                varsigma: vec![QPiScalar::one(); n],
            }
        };
        if let Some(t) = &self.tau {
            if t.len() != n {
                return Err(DatumError::Malformed(format!("tau needs {n} entries")));
            }
            params.tau = t
                .iter()
                .map(|l| {
                    cartan
                        .index_of_label(*l)
                        .ok_or_else(|| DatumError::Malformed(format!("tau label {l} not in I")))
                })
                .collect::<Result<_, _>>()?;
        }
        if let Some(v) = &self.varsigma {
            if v.len() != n {
                return Err(DatumError::Malformed(format!("varsigma needs {n} entries")));
            }
            params.varsigma = v
                .iter()
                .map(ScalarPair::to_scalar)
                .collect::<Result<_, _>>()?;
        }
        let name = self.name.clone().unwrap_or_else(|| "custom".to_string());
        Ok(Datum::new(&name, cartan, root, params))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datum::{builtin, builtin_names};

    #[test]
    fn round_trips_builtins() {
        for name in builtin_names() {
            let d = builtin(name).unwrap();
            let js = DatumDescriptor::from_datum(&d).to_json();
            let back = DatumDescriptor::from_json(&js).unwrap().to_datum().unwrap();
            assert_eq!(back, d);
        }
    }

    #[test]
    fn rejects_pi_in_varsigma() {
        let js = r#"{"I":[1],"dot":[[2]],"parity":[1],"varsigma":[{"plus":"p","minus":"1"}]}"#;
        assert!(DatumDescriptor::from_json(js).unwrap().to_datum().is_err());
    }

    #[test]
    fn parity_mismatch_descriptor() {
        let js = r#"{"I":[1],"dot":[[4]],"parity":[1]}"#;
        let d = DatumDescriptor::from_json(js).unwrap().to_datum().unwrap();
        assert!(d
            .validate_datum()
            .iter()
            .any(|v| v.condition.contains("bar-consistency")));
    }
}
