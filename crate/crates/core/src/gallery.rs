//! Named operator presets with fixed grids and budgets.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::operators::{
    build_witness_tree, index_estimate, BasicSequence, IndexReport, Operator, SearchConfig,
    WitnessTree, WitnessTreeSpec,
};
use crate::ordinal::Ordinal;
use crate::rational::{ratio, Q};
use crate::spaces::NormDescriptor;

pub const NAMES: [&str; 4] = [
    "diagonal-compact",
    "l1-identity",
    "schreier-into-sup",
    "tsirelson-omega-to-one",
];

#[derive(Clone, Debug)]
pub struct TreeSettings {
    pub m: u32,
    pub depth_bound: usize,
    pub width_bound: u32,
}

#[derive(Clone, Debug)]
pub struct Preset {
    pub name: &'static str,
    pub operator: Operator,
    pub xi_grid: Vec<Ordinal>,
    pub epsilon_grid: Vec<Q>,
    pub sequence_length: u32,
    pub config: SearchConfig,
    pub tree: Option<TreeSettings>,
}

fn d(s: &str) -> NormDescriptor {
    s.parse().expect("preset descriptor")
}

fn o(s: &str) -> Ordinal {
    s.parse().expect("preset ordinal")
}

pub fn preset(name: &str, seed: u64) -> Result<Preset> {
    let config = SearchConfig {
        seed,
        ..SearchConfig::default()
    };
    let halves = vec![ratio(1, 2), ratio(1, 4), ratio(1, 8)];
    Ok(match name {
        "diagonal-compact" => Preset {
            name: NAMES[0],
            operator: Operator::diagonal(d("l1"), "1/i")?,
            xi_grid: vec![o("1")],
            epsilon_grid: halves,
            sequence_length: 32,
            config,
            tree: Some(TreeSettings {
                m: 2,
                depth_bound: 4,
                width_bound: 10,
            }),
        },
        "l1-identity" => Preset {
            name: NAMES[1],
            operator: Operator::identity(d("l1"), d("l1")),
            xi_grid: vec![o("0"), o("1"), o("2"), o("w")],
            epsilon_grid: halves,
            sequence_length: 12,
            config,
            tree: None,
        },
        "schreier-into-sup" => Preset {
            name: NAMES[2],
            operator: Operator::identity(d("schreier(1)"), d("linf")),
            xi_grid: vec![o("1")],
            epsilon_grid: vec![ratio(1, 2), ratio(1, 4), ratio(1, 5)],
            sequence_length: 12,
            config,
            tree: None,
        },
        "tsirelson-omega-to-one" => Preset {
            name: NAMES[3],
            operator: Operator::identity(d("tsirelson(w,1/2)"), d("tsirelson(1,1/2)")),
            xi_grid: vec![o("1"), o("w")],
            epsilon_grid: vec![ratio(1, 4)],
            sequence_length: 24,
            config: SearchConfig {
                random_trials: 2_000,
                candidate_budget: 128,
                refine_rounds: 4,
                ..config
            },
            tree: None,
        },
        other => {
            return Err(Error::domain(format!(
                "unknown gallery preset `{other}`; expected one of {}",
                NAMES.join(", ")
            )))
        }
    })
}

#[derive(Clone, Debug)]
pub struct GalleryRun {
    pub preset: Preset,
    pub sequence: BasicSequence,
    pub report: IndexReport,
    pub certificates_verified: usize,
    pub tree: Option<WitnessTree>,
}

impl GalleryRun {
    pub fn to_json(&self) -> Value {
        let p = &self.preset;
        json!({
            "preset": p.name,
            "operator": p.operator.to_string(),
            "sequence": format!("e_1..e_{}", p.sequence_length),
            "xi_grid": p.xi_grid.iter().map(Ordinal::to_string).collect::<Vec<_>>(),
            "epsilon_grid": p.epsilon_grid.iter().map(Q::to_string).collect::<Vec<_>>(),
            "report": self.report.to_json(),
            "certificates_verified": self.certificates_verified,
            "witness_tree": self.tree.as_ref().map(|t| {
                let s = p.tree.as_ref().expect("tree settings");
                json!({
                    "m": s.m,
                    "depth_bound": s.depth_bound,
                    "width_bound": s.width_bound,
                    "tree": t.to_json(),
                })
            }),
        })
    }
}

/// Runs the estimate, re-verifies every certificate and builds the witness tree.
pub fn run(name: &str, seed: u64) -> Result<GalleryRun> {
    let preset = preset(name, seed)?;
    let sequence = BasicSequence::unit_vectors(&preset.operator.domain, preset.sequence_length)?;
    let report = index_estimate(
        &preset.operator,
        &preset.xi_grid,
        &preset.epsilon_grid,
        &sequence,
        &preset.config,
    )?;
    let mut verified = 0;
    for entry in &report.entries {
        if let Some(c) = &entry.outcome.certificate {
            if !c.verify(&preset.operator, &sequence)? {
                return Err(Error::domain(format!(
                    "certificate for xi = {}, epsilon = {} failed re-evaluation",
                    c.xi, c.epsilon
                )));
            }
            verified += 1;
        }
    }
    let tree = match &preset.tree {
        Some(s) => Some(build_witness_tree(&WitnessTreeSpec {
            operator: preset.operator.clone(),
            m: s.m,
            sequence: sequence.clone(),
            depth_bound: s.depth_bound,
            width_bound: s.width_bound,
            arbitrary_tuples: false,
        })?),
        None => None,
    };
    Ok(GalleryRun {
        preset,
        sequence,
        report,
        certificates_verified: verified,
        tree,
    })
}
