//! JSON documents read and written by the command-line tool.
//!
//! Jets:
//!
//! ```text
//! {"kind":"map"|"field","alpha":<real>,"degree":<int>,
//!  "coeffs":[{"j":<int>,"k":<int>,"re":<real>,"im":<real>},...]}
//! ```
//!
//! Schedules: `{"seasons":[{"field":<field jet>,"duration":<real>},...]}`.

use serde::{Deserialize, Serialize};

use crate::birkhoff::{StabilityReport, Verdict};
use crate::error::{Error, Result};
use crate::inverse::{ResonanceTable, SolveOutcome};
use crate::jets::{graded_coeffs, Jet, MapJet, VectorFieldJet};
use crate::scalar::Cx;
use crate::seasonal::{Season, SeasonSchedule};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JetKind {
    Map,
    Field,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffDoc {
    pub j: u32,
    pub k: u32,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JetDoc {
    pub kind: JetKind,
    pub alpha: f64,
    pub degree: u32,
    pub coeffs: Vec<CoeffDoc>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum AnyJet {
    Map(MapJet<f64>),
    Field(VectorFieldJet<f64>),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ComplexDoc {
    pub re: f64,
    pub im: f64,
}

impl From<Cx<f64>> for ComplexDoc {
    fn from(c: Cx<f64>) -> Self {
        ComplexDoc { re: c.re, im: c.im }
    }
}

fn parse_error(what: &str, e: serde_json::Error) -> Error {
    Error::Usage(format!("invalid {what} JSON: {e}"))
}

impl JetDoc {
    pub fn from_jet<J: Jet<f64>>(kind: JetKind, jet: &J) -> Self {
        JetDoc {
            kind,
            alpha: jet.alpha(),
            degree: jet.degree(),
            coeffs: graded_coeffs(jet)
                .into_iter()
                .map(|((j, k), c)| CoeffDoc { j, k, re: c.re, im: c.im })
                .collect(),
        }
    }

    fn pairs(&self) -> Vec<((u32, u32), Cx<f64>)> {
        self.coeffs.iter().map(|c| ((c.j, c.k), Cx::new(c.re, c.im))).collect()
    }

    pub fn into_jet(self) -> Result<AnyJet> {
        Ok(match self.kind {
            JetKind::Map => AnyJet::Map(MapJet::new(self.alpha, self.degree, self.pairs())?),
            JetKind::Field => AnyJet::Field(VectorFieldJet::new(self.alpha, self.degree, self.pairs())?),
        })
    }
}

pub fn parse_jet_doc(text: &str) -> Result<JetDoc> {
    serde_json::from_str(text).map_err(|e| parse_error("jet", e))
}

pub fn parse_jet(text: &str) -> Result<AnyJet> {
    parse_jet_doc(text)?.into_jet()
}

pub fn parse_map(text: &str) -> Result<MapJet<f64>> {
    match parse_jet(text)? {
        AnyJet::Map(m) => Ok(m),
        AnyJet::Field(_) => Err(Error::InvalidJet("expected a map jet, got a field".into())),
    }
}

pub fn parse_field(text: &str) -> Result<VectorFieldJet<f64>> {
    match parse_jet(text)? {
        AnyJet::Field(x) => Ok(x),
        AnyJet::Map(_) => Err(Error::InvalidJet("expected a field jet, got a map".into())),
    }
}

fn pretty<S: Serialize>(value: &S) -> String {
    serde_json::to_string_pretty(value).expect("documents serialize")
}

pub fn map_to_json(m: &MapJet<f64>) -> String {
    pretty(&JetDoc::from_jet(JetKind::Map, m))
}

pub fn field_to_json(x: &VectorFieldJet<f64>) -> String {
    pretty(&JetDoc::from_jet(JetKind::Field, x))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SeasonDoc {
    field: JetDoc,
    duration: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ScheduleDoc {
    seasons: Vec<SeasonDoc>,
}

pub fn parse_schedule(text: &str) -> Result<SeasonSchedule<f64>> {
    let doc: ScheduleDoc = serde_json::from_str(text).map_err(|e| parse_error("schedule", e))?;
    let seasons = doc
        .seasons
        .into_iter()
        .enumerate()
        .map(|(i, s)| match s.field.into_jet()? {
            AnyJet::Field(field) => Ok(Season {
                field,
                duration: s.duration,
            }),
            AnyJet::Map(_) => Err(Error::InvalidJet(format!("season {i}: expected a field jet"))),
        })
        .collect::<Result<Vec<_>>>()?;
    SeasonSchedule::new(seasons)
}

#[derive(Serialize)]
struct ObstructionDoc {
    status: &'static str,
    at: [u32; 2],
    defect: ComplexDoc,
}

#[derive(Serialize)]
struct FamilyDoc {
    status: &'static str,
    free: Vec<[u32; 2]>,
    dependence: String,
    field: JetDoc,
}

#[derive(Serialize)]
struct UniqueDoc {
    status: &'static str,
    field: JetDoc,
}

#[derive(Serialize)]
#[serde(untagged)]
enum OutcomeDoc {
    Unique(UniqueDoc),
    Family(FamilyDoc),
    Obstructed(ObstructionDoc),
}

fn outcome_doc(o: &SolveOutcome<f64>) -> OutcomeDoc {
    match o {
        SolveOutcome::Unique(x) => OutcomeDoc::Unique(UniqueDoc {
            status: "unique",
            field: JetDoc::from_jet(JetKind::Field, x),
        }),
        SolveOutcome::Family(fam) => OutcomeDoc::Family(FamilyDoc {
            status: "family",
            free: fam.free.iter().map(|m| [m.0, m.1]).collect(),
            dependence: fam.dependence.clone(),
            field: JetDoc::from_jet(JetKind::Field, &fam.base),
        }),
        SolveOutcome::Obstructed { at, defect } => OutcomeDoc::Obstructed(ObstructionDoc {
            status: "obstructed",
            at: [at.0, at.1],
            defect: (*defect).into(),
        }),
    }
}

/// Field JSON for a unique or family solution, the obstruction report
/// otherwise.
pub fn outcome_to_json(o: &SolveOutcome<f64>) -> String {
    match o {
        SolveOutcome::Obstructed { .. } => pretty(&outcome_doc(o)),
        _ => field_to_json(o.field().expect("solved")),
    }
}

/// Resonance table together with the full outcome, including family data.
pub fn outcome_with_resonances_to_json(o: &SolveOutcome<f64>, table: &ResonanceTable) -> String {
    #[derive(Serialize)]
    struct Doc<'a> {
        resonances: &'a ResonanceTable,
        result: OutcomeDoc,
    }
    pretty(&Doc {
        resonances: table,
        result: outcome_doc(o),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DriftDoc {
    pub radius: f64,
    pub iterations: usize,
    #[serde(rename = "V1_fit")]
    pub v1_fit: f64,
}

#[derive(Serialize)]
struct StabilityDoc {
    #[serde(rename = "B1")]
    b1: ComplexDoc,
    #[serde(rename = "V1")]
    v1: f64,
    verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    drift: Option<DriftDoc>,
}

pub fn stability_to_json(r: &StabilityReport<f64>, drift: Option<DriftDoc>) -> String {
    pretty(&StabilityDoc {
        b1: r.b1.into(),
        v1: r.v1,
        verdict: r.verdict,
        drift,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::inverse::invert_map;
    use std::collections::BTreeMap;

    #[test]
    fn map_round_trip() {
        let f = catalog::f1::<f64>();
        let text = map_to_json(&f);
        assert_eq!(parse_map(&text).unwrap(), f);
        assert_eq!(map_to_json(&parse_map(&text).unwrap()), text);
    }

    #[test]
    fn field_round_trip() {
        let x = catalog::x1::<f64>(Cx::new(0.25, -1.0 / 3.0));
        assert_eq!(parse_field(&field_to_json(&x)).unwrap(), x);
    }

    #[test]
    fn rejects_bad_documents() {
        let unknown = r#"{"kind":"map","alpha":1.0,"degree":2,"coeffs":[],"extra":1}"#;
        assert!(parse_jet(unknown).is_err());
        let linear = r#"{"kind":"map","alpha":1.0,"degree":2,"coeffs":[{"j":1,"k":0,"re":1,"im":0}]}"#;
        assert!(matches!(parse_jet(linear), Err(Error::InvalidJet(_))));
        let high = r#"{"kind":"map","alpha":1.0,"degree":2,"coeffs":[{"j":3,"k":0,"re":1,"im":0}]}"#;
        assert!(parse_jet(high).is_err());
        let dup = r#"{"kind":"map","alpha":1.0,"degree":2,"coeffs":[{"j":2,"k":0,"re":1,"im":0},{"j":2,"k":0,"re":1,"im":0}]}"#;
        assert!(parse_jet(dup).is_err());
        let bad_key = r#"{"kind":"map","alpha":1.0,"degree":2,"coeffs":[{"j":2,"k":0,"re":1,"im":0,"x":0}]}"#;
        assert!(parse_jet(bad_key).is_err());
        let err = parse_jet("{\n  \"kind\": \"map\",\n  \"alpha\": nope\n}").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        assert!(parse_map(&field_to_json(&catalog::x2())).is_err());
    }

    #[test]
    fn schedule_parsing() {
        let x = field_to_json(&catalog::x2());
        let text = format!(r#"{{"seasons":[{{"field":{x},"duration":1.5}}]}}"#);
        let s = parse_schedule(&text).unwrap();
        assert_eq!(s.period(), 1.5);
        let bad = format!(r#"{{"seasons":[{{"field":{x},"duration":-1}}]}}"#);
        assert!(parse_schedule(&bad).is_err());
        assert!(parse_schedule(r#"{"seasons":[]}"#).is_err());
    }

    #[test]
    fn obstruction_document() {
        let f = MapJet::new(2.0 * std::f64::consts::PI / 3.0, 2, [((0, 2), Cx::new(1.0, 0.0))]).unwrap();
        let o = invert_map(&f, &BTreeMap::new()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&outcome_to_json(&o)).unwrap();
        assert_eq!(v["status"], "obstructed");
        assert_eq!(v["at"], serde_json::json!([0, 2]));
    }
}
