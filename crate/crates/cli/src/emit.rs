//! Canonical dumps of the structure constants.

use std::fmt::Display;

use serde_json::{json, Map, Value as Json};

use qeuclid_core::frame::{build_gammas, radicands};
use qeuclid_core::{
    AlgebraElement, Calculus, CalculusTag, Coefficient, FrameData, GammaBranch, GammaChoice, KConvention, Radical,
    SparseTensor4, Space,
};

use crate::SCHEMA;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Emit {
    Rmatrix,
    Metric,
    Projectors,
    Lambdas,
    Frame,
    Dirac,
}

impl Emit {
    pub fn name(self) -> &'static str {
        match self {
            Emit::Rmatrix => "rmatrix",
            Emit::Metric => "metric",
            Emit::Projectors => "projectors",
            Emit::Lambdas => "lambdas",
            Emit::Frame => "frame",
            Emit::Dirac => "dirac",
        }
    }
}

#[derive(Debug, Clone)]
pub struct EmitConfig {
    pub dim: usize,
    pub tags: Vec<CalculusTag>,
    pub k_convention: KConvention,
    pub gamma_choice: GammaChoice,
    pub gamma_branch: GammaBranch,
}

fn entry(index: Json, value: impl Display) -> Json {
    json!({ "index": index, "value": value.to_string() })
}

fn tensor4<S: Coefficient>(t: &SparseTensor4<S>) -> Json {
    Json::Array(t.iter().map(|(idx, v)| entry(json!(idx), v)).collect())
}

fn elements<S: Coefficient, K: Into<Json> + Copy>(
    space: &Space<S>,
    items: impl IntoIterator<Item = (K, AlgebraElement<S>)>,
) -> Json {
    Json::Array(items.into_iter().map(|(k, v)| entry(k.into(), space.alg.text(&v))).collect())
}

fn pair(p: (i32, i32)) -> Json {
    json!([p.0, p.1])
}

pub fn emit(what: Emit, cfg: &EmitConfig) -> Result<Json, String> {
    let space = Space::with_convention(cfg.dim, cfg.k_convention).map_err(|e| e.to_string())?;
    let core = &space.core;
    let mut body = Map::new();
    match what {
        Emit::Rmatrix => {
            body.insert("rhat".into(), tensor4(&core.rhat));
            body.insert("rhat_inverse".into(), tensor4(&core.rhat_inv));
        }
        Emit::Metric => {
            let lower = core.g_lower.iter().map(|((i, j), v)| entry(json!([i, j]), v)).collect();
            let upper = core.g_upper.iter().map(|((i, j), v)| entry(json!([i, j]), v)).collect();
            body.insert("lower".into(), Json::Array(lower));
            body.insert("upper".into(), Json::Array(upper));
        }
        Emit::Projectors => {
            body.insert("s".into(), tensor4(&core.ps));
            body.insert("a".into(), tensor4(&core.pa));
            body.insert("t".into(), tensor4(&core.pt));
        }
        Emit::Lambdas | Emit::Frame => {
            let radical = Space::radical(cfg.dim, cfg.k_convention).map_err(|e| e.to_string())?;
            let roots: Vec<String> =
                radicands(space.ctx()).iter().enumerate().map(|(j, r)| format!("t{j} = sqrt({r})")).collect();
            body.insert("roots".into(), json!(roots));
            let mut per_tag = Map::new();
            for &tag in &cfg.tags {
                let gammas = build_gammas(space.ctx(), tag, cfg.gamma_choice, cfg.gamma_branch);
                let data = FrameData::build(&radical, tag, &gammas.values).map_err(|e| e.to_string())?;
                let mut part = Map::new();
                if what == Emit::Lambdas {
                    let g = gammas.values.iter().map(|(a, v)| entry(json!(a), v)).collect();
                    part.insert("gammas".into(), Json::Array(g));
                    part.insert("lambdas".into(), elements(&radical, data.lambdas.clone()));
                } else {
                    part.insert("e".into(), frame_entries(&radical, &data.e));
                    part.insert("theta".into(), frame_entries(&radical, &data.theta));
                }
                per_tag.insert(tag.name().into(), Json::Object(part));
            }
            body.insert("calculi".into(), Json::Object(per_tag));
        }
        Emit::Dirac => {
            let mut per_tag = Map::new();
            for &tag in &cfg.tags {
                let theta = Calculus::new(&space, tag).dirac_theta();
                let items = theta.components().map(|(i, c)| (*i, c.clone()));
                per_tag.insert(tag.name().into(), elements(&space, items));
            }
            body.insert("calculi".into(), Json::Object(per_tag));
        }
    }
    Ok(json!({
        "schema": SCHEMA,
        "command": "emit",
        "what": what.name(),
        "n": cfg.dim,
        "k_convention": cfg.k_convention,
        "data": body,
    }))
}

fn frame_entries(
    space: &Space<Radical<qeuclid_core::QScalar>>,
    items: &std::collections::BTreeMap<(i32, i32), AlgebraElement<Radical<qeuclid_core::QScalar>>>,
) -> Json {
    Json::Array(items.iter().map(|(k, v)| entry(pair(*k), space.alg.text(v))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(dim: usize) -> EmitConfig {
        EmitConfig {
            dim,
            tags: CalculusTag::BOTH.to_vec(),
            k_convention: KConvention::Standard,
            gamma_choice: GammaChoice::default(),
            gamma_branch: GammaBranch::default(),
        }
    }

    #[test]
    fn metric_n3() {
        let doc = emit(Emit::Metric, &cfg(3)).unwrap();
        let values: Vec<_> = doc["data"]["lower"].as_array().unwrap().iter().map(|e| e["value"].as_str().unwrap()).collect();
        assert_eq!(values, ["s^-1", "1", "s"]);
        assert_eq!(doc["schema"], 1);
    }

    #[test]
    fn lambda_zero_n3() {
        let doc = emit(Emit::Lambdas, &cfg(3)).unwrap();
        let lambdas = doc["data"]["calculi"]["plain"]["lambdas"].as_array().unwrap();
        let zero = lambdas.iter().find(|e| e["index"] == 0).unwrap();
        let space = Space::exact(3).unwrap();
        let want = crate::expr::normalize(&space, "(-q^-1/2/h)*L*x(0)^-1").unwrap();
        let got = crate::expr::normalize(&space, zero["value"].as_str().unwrap()).unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn output_is_stable() {
        for what in [Emit::Rmatrix, Emit::Projectors, Emit::Frame, Emit::Dirac] {
            assert_eq!(emit(what, &cfg(4)).unwrap().to_string(), emit(what, &cfg(4)).unwrap().to_string());
        }
    }
}
