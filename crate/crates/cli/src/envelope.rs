// SPDX-License-Identifier: Apache-2.0

//! JSON payloads. Exact values (form coefficients, witnesses, ideals) are
//! carried as strings in their text syntax so nothing is rounded.

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct OutputEnvelope<I, R> {
    pub schema_version: String,
    pub command: String,
    pub input: I,
    pub result: Option<R>,
    pub diagnostics: Vec<String>,
}

impl<I, R> OutputEnvelope<I, R> {
    pub fn new(command: &str, input: I, result: Option<R>, diagnostics: Vec<String>) -> Self {
        OutputEnvelope {
            schema_version: SCHEMA_VERSION.to_string(),
            command: command.to_string(),
            input,
            result,
            diagnostics,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FormInput {
    pub form: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ReduceResult {
    pub reduced: String,
    pub transform: String,
    pub discriminant: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ClassGroupInput {
    pub discriminant: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ClassEntry {
    pub index: usize,
    pub form: String,
    pub inverse: usize,
    pub order: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ClassGroupResult {
    pub discriminant: i64,
    pub fundamental_discriminant: i64,
    pub conductor: u64,
    pub class_number: usize,
    pub identity: String,
    pub classes: Vec<ClassEntry>,
    pub table: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DecideInput {
    pub form: String,
    pub m: String,
    pub certificate: bool,
    pub explain: bool,
    pub oracle_check: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub x: String,
    pub y: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ClassWitnessEntry {
    pub factor: String,
    pub class: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FailureInfo {
    pub kind: String,
    pub prime: Option<u64>,
    pub exponent: Option<u32>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct OracleCheck {
    pub agrees: bool,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DecideResult {
    pub verdict: bool,
    pub witness: Option<Witness>,
    pub class_witness: Option<Vec<ClassWitnessEntry>>,
    pub failure: Option<FailureInfo>,
    pub trace: Option<Vec<String>>,
    pub oracle: Option<OracleCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct IdealInput {
    pub operation: String,
    pub ideals: Vec<String>,
    pub discriminant: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PrimePart {
    pub ideal: String,
    pub exponent: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct InertPart {
    pub prime: u64,
    pub exponent: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ConductorPart {
    pub prime: u64,
    pub ideal: String,
    pub norm: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Decomposition {
    pub primes: Vec<PrimePart>,
    pub inert: Vec<InertPart>,
    pub conductor_parts: Vec<ConductorPart>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct IdealResult {
    pub ideal: Option<String>,
    pub norm: String,
    pub proper: bool,
    pub prime_to_relative_conductor: Option<bool>,
    pub decomposition: Option<Decomposition>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PiInput {
    pub discriminant: i64,
    pub target: i64,
    pub form: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PiResult {
    pub image: String,
    pub relative_conductor: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExamplesInput {
    pub id: String,
    pub max: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DisagreementEntry {
    pub m: u64,
    pub decide: bool,
    pub predicate: bool,
    pub oracle: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExamplesResult {
    pub id: String,
    pub form: String,
    pub checked: u64,
    pub represented: u64,
    pub ok: bool,
    pub disagreements: Vec<DisagreementEntry>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde::de::DeserializeOwned;

    fn round_trip<T: Serialize + DeserializeOwned + PartialEq + std::fmt::Debug>(x: T) {
        let text = serde_json::to_string_pretty(&x).unwrap();
        assert_eq!(serde_json::from_str::<T>(&text).unwrap(), x);
    }

    #[test]
    fn envelopes_round_trip() {
        round_trip(OutputEnvelope::new(
            "reduce",
            FormInput { form: "(5,4,1)".into() },
            Some(ReduceResult {
                reduced: "(1,0,1)".into(),
                transform: "[[0,-1],[1,-2]]".into(),
                discriminant: "-4".into(),
            }),
            vec![],
        ));
        round_trip(OutputEnvelope::new(
            "decide",
            DecideInput { form: "(1,0,1)".into(), m: "45".into(), certificate: true, explain: false, oracle_check: true },
            Some(DecideResult {
                verdict: true,
                witness: Some(Witness { x: "3".into(), y: "6".into() }),
                class_witness: Some(vec![ClassWitnessEntry { factor: "5".into(), class: "(1,0,1)".into() }]),
                failure: None,
                trace: Some(vec!["m = 3^2 * 5".into()]),
                oracle: Some(OracleCheck { agrees: true, witness: None }),
            }),
            vec!["note".into()],
        ));
        round_trip(OutputEnvelope::<ClassGroupInput, ClassGroupResult>::new(
            "classgroup",
            ClassGroupInput { discriminant: -5 },
            None,
            vec!["error: invalid discriminant".into()],
        ));
        round_trip(OutputEnvelope::new(
            "ideal",
            IdealInput { operation: "decompose".into(), ideals: vec!["-32:1:12:2".into()], discriminant: None },
            Some(IdealResult {
                ideal: None,
                norm: "12".into(),
                proper: true,
                prime_to_relative_conductor: None,
                decomposition: Some(Decomposition {
                    primes: vec![PrimePart { ideal: "-32:1:3:2".into(), exponent: 1 }],
                    inert: vec![InertPart { prime: 5, exponent: 1 }],
                    conductor_parts: vec![ConductorPart { prime: 2, ideal: "-32:1:4:0".into(), norm: "4".into() }],
                }),
            }),
            vec![],
        ));
        round_trip(OutputEnvelope::new(
            "examples",
            ExamplesInput { id: "1.1".into(), max: 10 },
            Some(ExamplesResult {
                id: "1.1".into(),
                form: "(1,0,1)".into(),
                checked: 10,
                represented: 7,
                ok: false,
                disagreements: vec![DisagreementEntry { m: 3, decide: true, predicate: false, oracle: false }],
            }),
            vec![],
        ));
        round_trip(OutputEnvelope::new(
            "pi",
            PiInput { discriminant: -32, target: -8, form: "(3,2,3)".into() },
            Some(PiResult { image: "(1,0,2)".into(), relative_conductor: 2 }),
            vec![],
        ));
    }
}
