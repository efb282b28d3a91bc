use serde::{Deserialize, Serialize};

use super::{Gamow, Label, LabelError, NVector};
use crate::zoo::{self, ZooParams};

/// Wire form of a [`Label`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LabelJson {
    Generated {
        generators: Vec<NVector>,
    },
    Builtin {
        name: String,
        #[serde(flatten)]
        params: ZooParams,
    },
    Minus {
        base: Box<LabelJson>,
        r: NVector,
    },
    Oplus {
        left: Box<LabelJson>,
        right: Box<LabelJson>,
    },
    Union {
        parts: Vec<LabelJson>,
    },
    Intersect {
        parts: Vec<LabelJson>,
    },
    Meet {
        base: Box<LabelJson>,
        ell: u32,
    },
    Gamow {
        base: Box<LabelJson>,
        map: Vec<(u32, u32)>,
    },
}

impl LabelJson {
    pub fn parse(s: &str) -> Result<LabelJson, LabelError> {
        serde_json::from_str(s).map_err(|e| LabelError::Json(e.to_string()))
    }

    pub fn to_label(&self) -> Result<Label, LabelError> {
        Ok(match self {
            LabelJson::Generated { generators } => Label::generated(generators.iter().cloned()),
            LabelJson::Builtin { name, params } => zoo::builtin(name, params)?,
            LabelJson::Minus { base, r } => base.to_label()?.minus(r),
            LabelJson::Oplus { left, right } => left.to_label()?.oplus(&right.to_label()?),
            LabelJson::Union { parts } => Label::union(&parts.iter().map(|p| p.to_label()).collect::<Result<Vec<_>, _>>()?),
            LabelJson::Intersect { parts } => {
                if parts.is_empty() {
                    return Err(LabelError::Json("intersect needs at least one part".into()));
                }
                Label::intersect(&parts.iter().map(|p| p.to_label()).collect::<Result<Vec<_>, _>>()?)
            }
            LabelJson::Meet { base, ell } => base.to_label()?.meet_interval(*ell),
            LabelJson::Gamow { base, map } => base.to_label()?.gamow(&Gamow::new(map)?)?,
        })
    }

    pub fn from_label(label: &Label) -> Result<LabelJson, LabelError> {
        Ok(match label {
            Label::Finite(f) => LabelJson::Generated { generators: f.maxima().to_vec() },
            Label::Oracle(o) => serde_json::from_value(o.builtin()).map_err(|e| LabelError::Json(e.to_string()))?,
            Label::Minus(b, r) => LabelJson::Minus { base: Box::new(Self::from_label(b)?), r: r.clone() },
            Label::Oplus(a, b) => LabelJson::Oplus {
                left: Box::new(Self::from_label(a)?),
                right: Box::new(Self::from_label(b)?),
            },
            Label::Union(p) => LabelJson::Union { parts: p.iter().map(Self::from_label).collect::<Result<_, _>>()? },
            Label::Intersect(p) => LabelJson::Intersect { parts: p.iter().map(Self::from_label).collect::<Result<_, _>>()? },
            Label::Meet(b, l) => LabelJson::Meet { base: Box::new(Self::from_label(b)?), ell: *l },
            Label::Gamow(b, t) => LabelJson::Gamow { base: Box::new(Self::from_label(b)?), map: t.pairs() },
        })
    }
}
