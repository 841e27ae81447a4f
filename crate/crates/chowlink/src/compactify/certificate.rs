use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde_json::{Map, Value};

use super::{surface_name, Descriptor, P2Compactification, QuadricCompactification};
use crate::chow_core::DivisorClass;
use crate::error::{Error, Result};
use crate::links::{pp_link, qp_link, qq_link, twist_bundle, LinkKind, LinkStep, EXC_KEY};
use crate::models::{all_pass, Check, CurveData, ThreefoldModel, DF, DH, F, H};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FinalModel {
    /// F(0,0,1), the blow-up of P3 along a line.
    StandardP3,
    /// The blow-up of Q3 along a conic, projected from the vertex.
    StandardQ3,
}

impl FinalModel {
    pub fn name(&self) -> &'static str {
        match self {
            FinalModel::StandardP3 => "StandardP3",
            FinalModel::StandardQ3 => "StandardQ3",
        }
    }

    fn via(&self) -> &'static str {
        match self {
            FinalModel::StandardP3 => "F(0,0,1)",
            FinalModel::StandardQ3 => "Bl_conic Q3",
        }
    }
}

/// The model after a step, with its boundary classes.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub model: ThreefoldModel,
    pub boundary_h: DivisorClass,
    pub boundary_f: DivisorClass,
    pub surface: String,
    pub type_m: Option<u32>,
}

impl Snapshot {
    pub fn of_quadric(st: &QuadricCompactification) -> Self {
        Self {
            model: st.ambient.clone(),
            boundary_h: st.boundary_h(),
            boundary_f: st.boundary_f(),
            surface: st.embedding.as_ref().map(surface_name).unwrap_or_else(|| "non-normal".into()),
            type_m: st.boundary_normal.then_some(st.type_m),
        }
    }

    pub fn of_p2(st: &P2Compactification) -> Self {
        Self {
            model: st.ambient.clone(),
            boundary_h: st.boundary_h(),
            boundary_f: st.ambient.tracked(DF).cloned().unwrap_or_else(|| DivisorClass::gen(F)),
            surface: surface_name(&st.embedding),
            type_m: None,
        }
    }

    fn to_json(&self) -> Value {
        let mut form = Map::new();
        for (k, v) in self.model.form.entries() {
            form.insert(k.join("."), Value::String(v.to_string()));
        }
        let mut m = Map::new();
        m.insert("form".into(), Value::Object(form));
        m.insert("canonical".into(), self.model.canonical.to_string().into());
        m.insert("boundary_h".into(), self.boundary_h.to_string().into());
        m.insert("boundary_f".into(), self.boundary_f.to_string().into());
        m.insert("surface".into(), self.surface.clone().into());
        if let Some(t) = self.type_m {
            m.insert("type".into(), t.to_string().into());
        }
        Value::Object(m)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertStep {
    pub step: LinkStep,
    pub state: Snapshot,
}

impl CertStep {
    pub fn new(step: LinkStep, state: Snapshot) -> Self {
        Self { step, state }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub initial: Descriptor,
    pub start: Snapshot,
    pub steps: Vec<CertStep>,
    pub final_model: FinalModel,
    /// Step count predicted from the shape of the pipeline.
    pub expected_step_count: usize,
}

impl Certificate {
    pub(crate) fn new(initial: Descriptor, start: Snapshot, steps: Vec<CertStep>, final_model: FinalModel, expected_step_count: usize) -> Self {
        Self { initial, start, steps, final_model, expected_step_count }
    }

    pub fn step_count(&self) -> usize {
        self.steps.len()
    }

    pub fn all_checks_pass(&self) -> bool {
        self.steps.iter().all(|s| s.step.passed())
    }

    pub fn failing_checks(&self) -> Vec<(usize, &Check)> {
        self.steps.iter().enumerate().flat_map(|(i, s)| s.step.checks.iter().filter(|c| !c.pass).map(move |c| (i, c))).collect()
    }

    pub fn to_json(&self) -> Value {
        let mut root = Map::new();
        root.insert("format".into(), Value::from(1));
        root.insert("initial".into(), self.initial.to_json());
        root.insert("start".into(), self.start.to_json());
        let steps = self.steps.iter().map(|s| step_json(&s.step, &s.state)).collect();
        root.insert("steps".into(), Value::Array(steps));
        let mut fin = Map::new();
        fin.insert("model".into(), self.final_model.name().into());
        fin.insert("via".into(), self.final_model.via().into());
        root.insert("final".into(), Value::Object(fin));
        root.insert("step_count".into(), self.step_count().to_string().into());
        root.insert("expected_step_count".into(), self.expected_step_count.to_string().into());
        if self.step_count() != self.expected_step_count {
            root.insert("step_count_deviation".into(), true.into());
        }
        root.insert("all_checks_pass".into(), self.all_checks_pass().into());
        Value::Object(root)
    }

    /// Pretty JSON with sorted keys and a trailing newline.
    pub fn to_canonical_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("serializable");
        s.push('\n');
        s
    }
}

fn step_json(step: &LinkStep, state: &Snapshot) -> Value {
    let mut m = Map::new();
    m.insert("kind".into(), step.kind.to_string().into());
    let center: Map<String, Value> = step.center.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
    m.insert("center".into(), Value::Object(center));
    let transform: Map<String, Value> = step.transform.iter().map(|(k, v)| (k.clone(), Value::String(v.to_string()))).collect();
    m.insert("transform".into(), Value::Object(transform));
    let checks = step
        .checks
        .iter()
        .map(|c| {
            let mut o = Map::new();
            o.insert("name".into(), c.name.clone().into());
            o.insert("expected".into(), c.expected.clone().into());
            o.insert("computed".into(), c.computed.clone().into());
            o.insert("pass".into(), c.pass.into());
            Value::Object(o)
        })
        .collect();
    m.insert("checks".into(), Value::Array(checks));
    m.insert("state".into(), state.to_json());
    Value::Object(m)
}

fn center_int(step: &LinkStep, key: &str) -> Result<BigInt> {
    step.center.get(key).and_then(|v| v.parse().ok()).ok_or_else(|| Error::Descriptor(format!("step {} has no center `{key}`", step.kind)))
}

fn linkable(s: &Snapshot) -> ThreefoldModel {
    let mut m = s.model.clone();
    m.tracked = BTreeMap::new();
    m.with_tracked(DH, s.boundary_h.clone())
}

/// Re-runs each link from its recorded center on the previous snapshot and
/// compares forms, canonical classes and boundary transforms.
pub fn replay(cert: &Certificate) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let mut prev = &cert.start;
    for (i, cs) in cert.steps.iter().enumerate() {
        let step = &cs.step;
        let base = linkable(prev);
        let (model, bh, bf) = match step.kind {
            LinkKind::PPLink { center_dim, center_in_boundary } => {
                let (mut p, _) = pp_link(&base, center_dim, &prev.boundary_h, center_in_boundary)?;
                if let Ok(k) = center_int(step, "twist") {
                    p = twist_bundle(&p, k.try_into().unwrap_or(0))?.0;
                }
                let mu = u32::from(center_in_boundary);
                (p, step.apply(&prev.boundary_h, mu), step.transform.get(EXC_KEY).cloned().unwrap_or_default())
            }
            LinkKind::QQLink { boundary_mult } => {
                let l = CurveData::new(0).hit(H, 1).hit(F, 0).mult(DH, boundary_mult);
                let (q, _, _) = qq_link(&base, &l)?;
                (q, step.apply(&prev.boundary_h, boundary_mult), step.transform.get(EXC_KEY).cloned().unwrap_or_default())
            }
            LinkKind::QPLink => {
                let mult = center_int(step, "boundary_mult")?;
                let s = CurveData::new(0).hit(H, center_int(step, "section_H_degree")?).hit(F, 1).mult(DH, mult.try_into().unwrap_or(0));
                let (p, _, _) = qp_link(&base, &s)?;
                let bh = step.transform.get(EXC_KEY).cloned().unwrap_or_default();
                (p, bh, step.apply(&prev.boundary_f, 0))
            }
            LinkKind::BlowDownToP3 => {
                let k = center_int(step, "twist")?;
                let (p, _) = twist_bundle(&base, k.try_into().unwrap_or(0))?;
                (p, step.apply(&prev.boundary_h, 0), step.apply(&prev.boundary_f, 0))
            }
            LinkKind::InverseQPLink | LinkKind::BlowDownToQ3 | LinkKind::ProjectionFromVertex => {
                (prev.model.clone(), prev.boundary_h.clone(), prev.boundary_f.clone())
            }
        };
        let tag = |s: &str| format!("step {i} ({}) {s}", step.kind);
        out.push(Check::holds(&tag("form and K"), "replayed lattice equals recorded", model.same_lattice(&cs.state.model)));
        out.push(Check::eq(&tag("boundary D_h"), cs.state.boundary_h.clone(), bh));
        out.push(Check::eq(&tag("boundary D_f"), cs.state.boundary_f.clone(), bf));
        out.push(Check::holds(&tag("recorded checks"), "all pass", all_pass(&step.checks)));
        prev = &cs.state;
    }
    Ok(out)
}
