//! JSON encodings of the report types. Field names follow the struct
//! fields; infinities are written as `"inf"` and an unavailable bound as
//! `null` with a `<field>_reason` sibling.

use num_complex::Complex64;
use serde_json::{Map, Value};

use crate::distances::{InstabilityReport, SingularityReport};
use crate::error::{Error, Result};
use crate::io::{real_from_json, real_to_json};
use crate::linalg::CVector;
use crate::perturbation::{Bound, JointPerturbReport, OperatorPerturbReport, RhsPerturbReport};
use crate::spectra::{InclusionCertificate, Lemma, ResolventSample};

/// Types with a stable JSON schema.
pub trait JsonReport: Sized {
    fn to_json(&self) -> Value;
    fn from_json(value: &Value) -> Result<Self>;
}

fn missing(key: &str) -> Error {
    Error::InvalidArgument(format!("report field `{key}` missing or malformed"))
}

struct Writer(Map<String, Value>);

impl Writer {
    fn new() -> Self {
        Self(Map::new())
    }

    fn real(mut self, key: &str, v: f64) -> Self {
        self.0.insert(key.into(), real_to_json(v));
        self
    }

    fn flag(mut self, key: &str, v: bool) -> Self {
        self.0.insert(key.into(), Value::Bool(v));
        self
    }

    fn complex(mut self, key: &str, z: Complex64) -> Self {
        self.0.insert(key.into(), complex_to_json(z));
        self
    }

    fn vector(mut self, key: &str, v: &CVector) -> Self {
        self.0.insert(
            key.into(),
            Value::Array(v.iter().map(|&z| complex_to_json(z)).collect()),
        );
        self
    }

    fn bound(mut self, key: &str, b: &Bound) -> Self {
        match b {
            Bound::Value(v) => {
                self.0.insert(key.into(), real_to_json(*v));
            }
            Bound::NotApplicable(reason) => {
                self.0.insert(key.into(), Value::Null);
                self.0
                    .insert(format!("{key}_reason"), Value::String(reason.clone()));
            }
        }
        self
    }

    fn value(mut self, key: &str, v: Value) -> Self {
        self.0.insert(key.into(), v);
        self
    }

    fn done(self) -> Value {
        Value::Object(self.0)
    }
}

fn complex_to_json(z: Complex64) -> Value {
    Value::Array(vec![real_to_json(z.re), real_to_json(z.im)])
}

fn complex_from_json(v: &Value) -> Option<Complex64> {
    match v.as_array()?.as_slice() {
        [re, im] => Some(Complex64::new(real_from_json(re)?, real_from_json(im)?)),
        _ => None,
    }
}

struct Reader<'a>(&'a Map<String, Value>);

impl<'a> Reader<'a> {
    fn new(v: &'a Value) -> Result<Self> {
        v.as_object()
            .map(Reader)
            .ok_or_else(|| Error::InvalidArgument("report must be a JSON object".into()))
    }

    fn real(&self, key: &str) -> Result<f64> {
        self.0
            .get(key)
            .and_then(real_from_json)
            .ok_or_else(|| missing(key))
    }

    fn flag(&self, key: &str) -> Result<bool> {
        self.0
            .get(key)
            .and_then(Value::as_bool)
            .ok_or_else(|| missing(key))
    }

    fn complex(&self, key: &str) -> Result<Complex64> {
        self.0
            .get(key)
            .and_then(complex_from_json)
            .ok_or_else(|| missing(key))
    }

    fn vector(&self, key: &str) -> Result<CVector> {
        let items = self
            .0
            .get(key)
            .and_then(Value::as_array)
            .ok_or_else(|| missing(key))?;
        let data = items
            .iter()
            .map(complex_from_json)
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| missing(key))?;
        CVector::new(data)
    }

    fn bound(&self, key: &str) -> Result<Bound> {
        match self.0.get(key) {
            Some(Value::Null) => {
                let reason = self
                    .0
                    .get(&format!("{key}_reason"))
                    .and_then(Value::as_str)
                    .unwrap_or_default();
                Ok(Bound::NotApplicable(reason.to_string()))
            }
            Some(v) => real_from_json(v)
                .map(Bound::Value)
                .ok_or_else(|| missing(key)),
            None => Err(missing(key)),
        }
    }

    fn str(&self, key: &str) -> Result<&'a str> {
        self.0
            .get(key)
            .and_then(Value::as_str)
            .ok_or_else(|| missing(key))
    }
}

impl JsonReport for RhsPerturbReport {
    fn to_json(&self) -> Value {
        Writer::new()
            .vector("x", &self.x)
            .vector("delta_x", &self.delta_x)
            .real("rel_observed", self.rel_observed)
            .real("rel_rhs", self.rel_rhs)
            .real("kappa", self.kappa)
            .real("lower", self.lower)
            .real("upper", self.upper)
            .flag("holds", self.holds)
            .done()
    }

    fn from_json(value: &Value) -> Result<Self> {
        let r = Reader::new(value)?;
        Ok(Self {
            x: r.vector("x")?,
            delta_x: r.vector("delta_x")?,
            rel_observed: r.real("rel_observed")?,
            rel_rhs: r.real("rel_rhs")?,
            kappa: r.real("kappa")?,
            lower: r.real("lower")?,
            upper: r.real("upper")?,
            holds: r.flag("holds")?,
        })
    }
}

impl JsonReport for OperatorPerturbReport {
    fn to_json(&self) -> Value {
        Writer::new()
            .vector("x", &self.x)
            .vector("delta_x", &self.delta_x)
            .real("ratio_x", self.ratio_x)
            .real("ratio_xpdx", self.ratio_xpdx)
            .bound("bound_pseudo_x", &self.bound_pseudo_x)
            .bound("bound_pseudo_xpdx", &self.bound_pseudo_xpdx)
            .bound("bound_cond_x", &self.bound_cond_x)
            .bound("bound_cond_xpdx", &self.bound_cond_xpdx)
            .flag("holds", self.holds)
            .done()
    }

    fn from_json(value: &Value) -> Result<Self> {
        let r = Reader::new(value)?;
        Ok(Self {
            x: r.vector("x")?,
            delta_x: r.vector("delta_x")?,
            ratio_x: r.real("ratio_x")?,
            ratio_xpdx: r.real("ratio_xpdx")?,
            bound_pseudo_x: r.bound("bound_pseudo_x")?,
            bound_pseudo_xpdx: r.bound("bound_pseudo_xpdx")?,
            bound_cond_x: r.bound("bound_cond_x")?,
            bound_cond_xpdx: r.bound("bound_cond_xpdx")?,
            holds: r.flag("holds")?,
        })
    }
}

impl JsonReport for JointPerturbReport {
    fn to_json(&self) -> Value {
        Writer::new()
            .vector("x", &self.x)
            .vector("delta_x", &self.delta_x)
            .real("rel_observed", self.rel_observed)
            .real("contraction", self.contraction)
            .bound("bound", &self.bound)
            .flag("holds", self.holds)
            .done()
    }

    fn from_json(value: &Value) -> Result<Self> {
        let r = Reader::new(value)?;
        Ok(Self {
            x: r.vector("x")?,
            delta_x: r.vector("delta_x")?,
            rel_observed: r.real("rel_observed")?,
            contraction: r.real("contraction")?,
            bound: r.bound("bound")?,
            holds: r.flag("holds")?,
        })
    }
}

impl JsonReport for ResolventSample {
    fn to_json(&self) -> Value {
        Writer::new()
            .complex("z", self.z)
            .real("shifted_norm", self.shifted_norm)
            .real("resolvent_norm", self.resolvent_norm)
            .real("cond", self.cond)
            .real("kappa", self.kappa)
            .real("kappa1", self.kappa1)
            .done()
    }

    fn from_json(value: &Value) -> Result<Self> {
        let r = Reader::new(value)?;
        Ok(Self {
            z: r.complex("z")?,
            shifted_norm: r.real("shifted_norm")?,
            resolvent_norm: r.real("resolvent_norm")?,
            cond: r.real("cond")?,
            kappa: r.real("kappa")?,
            kappa1: r.real("kappa1")?,
        })
    }
}

impl JsonReport for InstabilityReport {
    fn to_json(&self) -> Value {
        Writer::new()
            .flag("stable", self.stable)
            .real("d1_estimate", self.d1_estimate)
            .real("argmin_omega", self.argmin_omega)
            .real("lower_bound", self.lower_bound)
            .real("upper_bound", self.upper_bound)
            .real("g", self.g)
            .real("g_omega", self.g_omega)
            .done()
    }

    fn from_json(value: &Value) -> Result<Self> {
        let r = Reader::new(value)?;
        Ok(Self {
            stable: r.flag("stable")?,
            d1_estimate: r.real("d1_estimate")?,
            argmin_omega: r.real("argmin_omega")?,
            lower_bound: r.real("lower_bound")?,
            upper_bound: r.real("upper_bound")?,
            g: r.real("g")?,
            g_omega: r.real("g_omega")?,
        })
    }
}

impl JsonReport for SingularityReport {
    fn to_json(&self) -> Value {
        Writer::new()
            .real("d2", self.d2)
            .real("epsilon_star", self.epsilon_star)
            .real("witness_norm", self.witness_norm)
            .flag("scalar_matrix", self.scalar_matrix)
            .done()
    }

    fn from_json(value: &Value) -> Result<Self> {
        let r = Reader::new(value)?;
        Ok(Self {
            d2: r.real("d2")?,
            epsilon_star: r.real("epsilon_star")?,
            witness_norm: r.real("witness_norm")?,
            scalar_matrix: r.flag("scalar_matrix")?,
        })
    }
}

impl JsonReport for InclusionCertificate {
    fn to_json(&self) -> Value {
        Writer::new()
            .value("lemma", Value::String(self.lemma.as_str().into()))
            .real("epsilon", self.epsilon)
            .value("checked_points", Value::from(self.checked_points))
            .value(
                "violations",
                Value::Array(
                    self.violations
                        .iter()
                        .map(|&z| complex_to_json(z))
                        .collect(),
                ),
            )
            .flag("vacuous", self.vacuous)
            .flag("passed", self.passed())
            .done()
    }

    fn from_json(value: &Value) -> Result<Self> {
        let r = Reader::new(value)?;
        let violations =
            r.0.get("violations")
                .and_then(Value::as_array)
                .and_then(|v| v.iter().map(complex_from_json).collect::<Option<Vec<_>>>())
                .ok_or_else(|| missing("violations"))?;
        Ok(Self {
            lemma: r.str("lemma")?.parse::<Lemma>()?,
            epsilon: r.real("epsilon")?,
            checked_points: r
                .0
                .get("checked_points")
                .and_then(Value::as_u64)
                .ok_or_else(|| missing("checked_points"))? as usize,
            violations,
            vacuous: r.flag("vacuous")?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{CMatrix, NormKind};
    use crate::perturbation::{perturb_joint, perturb_operator, perturb_rhs};
    use crate::spectra::sample;

    fn round_trip<T: JsonReport + PartialEq + std::fmt::Debug>(r: &T) {
        let text = serde_json::to_string(&r.to_json()).unwrap();
        let back = T::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(&back, r);
    }

    #[test]
    fn reports_round_trip() {
        let a = CMatrix::from_real_rows(&[[1.0, 2.0, 0.0], [0.0, -1.0, 1.0], [0.5, 0.0, 3.0]]);
        let z = Complex64::new(0.3, 0.7);
        let y = CVector::from_real(&[1.0, -2.0, 0.5]);
        let dy = CVector::from_real(&[0.01, 0.0, -0.02]);
        let da = CMatrix::from_real_diag(&[0.01, -0.02, 0.0]);
        let n = NormKind::Spectral;
        round_trip(&perturb_rhs(&a, z, &y, &dy, n).unwrap());
        round_trip(&perturb_operator(&a, z, &y, &da, n).unwrap());
        round_trip(&perturb_joint(&a, z, &y, &da, &dy, n).unwrap());
        round_trip(&sample(&a, z, n).unwrap());
        round_trip(&sample(&a, Complex64::new(3.0, 0.0), n).unwrap());
    }

    #[test]
    fn not_applicable_is_null_with_reason() {
        let a = CMatrix::from_real_diag(&[1.0, 2.0]);
        let y = CVector::from_real(&[1.0, 1.0]);
        let big = CMatrix::identity(2).scaled(Complex64::new(3.0, 0.0));
        let r = perturb_joint(
            &a,
            Complex64::new(0.0, 0.5),
            &y,
            &big,
            &y,
            NormKind::Spectral,
        )
        .unwrap();
        let v = r.to_json();
        assert_eq!(v["bound"], Value::Null);
        assert!(v["bound_reason"].as_str().unwrap().contains("not below 1"));
        round_trip(&r);

        let s = sample(&a, Complex64::new(1.0, 0.0), NormKind::One).unwrap();
        assert_eq!(s.to_json()["resolvent_norm"], Value::String("inf".into()));
    }
}
