//! JSON model files: generators, differentials, torus weights and a symplectic form.
//!
//! ```json
//! {
//!   "name": "h3z2",
//!   "generators": ["x1", "x2", "x3"],
//!   "differential": {"x3": "-x1^x2"},
//!   "weights": {"x1": {"free": [], "sign": [0]}, "x2": {"free": [], "sign": [1]}, "x3": {"free": [], "sign": [1]}},
//!   "symplectic": null
//! }
//! ```
//!
//! Coefficients inside expressions are exact rationals such as `-1` or `3/2`.

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::coeffective::{validate_symplectic, CoeffError, SymplecticForm};
use crate::exterior::{format_form, parse_form, Blade, FormError, Multivector, MAX_GENERATORS};
use crate::lie_ce::{validate_presentation, FormComplex, LieError, LiePresentation, ValidationReport};
use crate::torus::{
    check_weight_compatibility, invariant_complex, Character, TorusError, WeightAssignment,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("schema: {0}")]
    Schema(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("{field} refers to unknown generator `{name}`")]
    UnknownGenerator { field: String, name: String },
    #[error("{field}: {source}")]
    Expression { field: String, source: FormError },
    #[error("weight of `{generator}` has shape ({found_free}, {found_sign}), expected ({free}, {sign})")]
    WeightShape {
        generator: String,
        free: usize,
        sign: usize,
        found_free: usize,
        found_sign: usize,
    },
    #[error("model has {count} generators, above the cap of {limit}")]
    TooManyGenerators { count: usize, limit: usize },
    #[error("generator name `{0}` occurs in both factors after renaming")]
    NameCollision(String),
    #[error("model `{0}` has no weights; --invariant needs them")]
    NoWeights(String),
    #[error("model `{0}` has no symplectic form")]
    NoSymplectic(String),
    #[error("structure constants fail the Jacobi identity on {0} triple(s)")]
    NotJacobi(usize),
    #[error("weights are not compatible with the brackets on {0} triple(s)")]
    IncompatibleWeights(usize),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Torus(#[from] TorusError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelFile {
    pub name: String,
    pub generators: Vec<String>,
    /// `d` of each generator, in generator order.
    pub differential: Vec<Multivector>,
    pub weights: Option<WeightAssignment>,
    pub symplectic: Option<Multivector>,
}

fn schema(msg: impl Into<String>) -> ModelError {
    ModelError::Schema(msg.into())
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn expression(field: &str, text: &str, names: &[String]) -> Result<Multivector, ModelError> {
    parse_form(text, names).map_err(|e| match e {
        FormError::UnknownGenerator { name, .. } => ModelError::UnknownGenerator {
            field: field.to_string(),
            name,
        },
        source => ModelError::Expression {
            field: field.to_string(),
            source,
        },
    })
}

fn string_field<'a>(v: &'a Value, field: &str) -> Result<&'a str, ModelError> {
    v.as_str()
        .ok_or_else(|| schema(format!("`{field}` must be a string")))
}

fn object_field<'a>(v: &'a Value, field: &str) -> Result<&'a Map<String, Value>, ModelError> {
    v.as_object()
        .ok_or_else(|| schema(format!("`{field}` must be an object")))
}

pub fn parse_model(text: &str) -> Result<ModelFile, ModelError> {
    let value: Value = serde_json::from_str(text).map_err(|e| ModelError::Json(e.to_string()))?;
    model_from_value(&value)
}

pub fn model_from_value(value: &Value) -> Result<ModelFile, ModelError> {
    let obj = object_field(value, "model")?;
    for key in obj.keys() {
        if !matches!(
            key.as_str(),
            "name" | "generators" | "differential" | "weights" | "symplectic"
        ) {
            return Err(schema(format!("unexpected key `{key}`")));
        }
    }
    let name = string_field(obj.get("name").ok_or_else(|| schema("missing `name`"))?, "name")?;
    let gens = obj
        .get("generators")
        .ok_or_else(|| schema("missing `generators`"))?
        .as_array()
        .ok_or_else(|| schema("`generators` must be an array"))?;
    if gens.len() > MAX_GENERATORS {
        return Err(ModelError::TooManyGenerators {
            count: gens.len(),
            limit: MAX_GENERATORS,
        });
    }
    let mut generators: Vec<String> = Vec::with_capacity(gens.len());
    for g in gens {
        let g = string_field(g, "generators")?;
        if !valid_name(g) {
            return Err(schema(format!("`{g}` is not a valid generator name")));
        }
        if generators.iter().any(|x| x == g) {
            return Err(ModelError::DuplicateGenerator(g.to_string()));
        }
        generators.push(g.to_string());
    }
    let m = generators.len();
    let index = |field: &str, g: &str| {
        generators
            .iter()
            .position(|x| x == g)
            .ok_or_else(|| ModelError::UnknownGenerator {
                field: field.to_string(),
                name: g.to_string(),
            })
    };

    let mut differential = vec![Multivector::zero(m); m];
    if let Some(d) = obj.get("differential").filter(|v| !v.is_null()) {
        for (g, expr) in object_field(d, "differential")? {
            let k = index("differential", g)?;
            let field = format!("differential.{g}");
            differential[k] = expression(&field, string_field(expr, &field)?, &generators)?;
        }
    }

    let weights = match obj.get("weights").filter(|v| !v.is_null()) {
        None => None,
        Some(w) => Some(parse_weights(object_field(w, "weights")?, &generators, index)?),
    };

    let symplectic = match obj.get("symplectic").filter(|v| !v.is_null()) {
        None => None,
        Some(s) => Some(expression("symplectic", string_field(s, "symplectic")?, &generators)?),
    };

    Ok(ModelFile {
        name: name.to_string(),
        generators,
        differential,
        weights,
        symplectic,
    })
}

fn parse_weights(
    w: &Map<String, Value>,
    generators: &[String],
    index: impl Fn(&str, &str) -> Result<usize, ModelError>,
) -> Result<WeightAssignment, ModelError> {
    let mut chars: Vec<Option<Character>> = vec![None; generators.len()];
    for (g, entry) in w {
        let k = index("weights", g)?;
        let field = format!("weights.{g}");
        let entry = object_field(entry, &field)?;
        for key in entry.keys() {
            if key != "free" && key != "sign" {
                return Err(schema(format!("unexpected key `{key}` in `{field}`")));
            }
        }
        let list = |key: &str| -> Result<Vec<Value>, ModelError> {
            match entry.get(key) {
                None => Ok(Vec::new()),
                Some(v) => v
                    .as_array()
                    .cloned()
                    .ok_or_else(|| schema(format!("`{field}.{key}` must be an array"))),
            }
        };
        let free = list("free")?
            .iter()
            .map(|v| {
                v.as_i64()
                    .ok_or_else(|| schema(format!("`{field}.free` entries must be integers")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let sign = list("sign")?
            .iter()
            .map(|v| match v.as_u64() {
                Some(0) => Ok(false),
                Some(1) => Ok(true),
                _ => Err(schema(format!("`{field}.sign` entries must be 0 or 1"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        chars[k] = Some(Character::new(free, sign));
    }
    let mut shape = None;
    let mut out = Vec::with_capacity(generators.len());
    for (g, c) in generators.iter().zip(chars) {
        let c = c.ok_or_else(|| schema(format!("`weights` has no entry for `{g}`")))?;
        let (r, s) = *shape.get_or_insert(c.shape());
        if c.shape() != (r, s) {
            return Err(ModelError::WeightShape {
                generator: g.clone(),
                free: r,
                sign: s,
                found_free: c.shape().0,
                found_sign: c.shape().1,
            });
        }
        out.push(c);
    }
    let (r, s) = shape.unwrap_or((0, 0));
    Ok(WeightAssignment::new(r, s, out)?)
}

pub fn model_to_value(model: &ModelFile) -> Value {
    let mut obj = Map::new();
    obj.insert("name".into(), json!(model.name));
    obj.insert("generators".into(), json!(model.generators));
    let mut d = Map::new();
    for (g, dx) in model.generators.iter().zip(&model.differential) {
        if !dx.is_zero() {
            d.insert(g.clone(), json!(format_form(dx, &model.generators)));
        }
    }
    obj.insert("differential".into(), Value::Object(d));
    if let Some(w) = &model.weights {
        let mut ws = Map::new();
        for (g, c) in model.generators.iter().zip(w.characters()) {
            let sign: Vec<u8> = c.sign().iter().map(|&b| b as u8).collect();
            ws.insert(g.clone(), json!({"free": c.free(), "sign": sign}));
        }
        obj.insert("weights".into(), Value::Object(ws));
    }
    if let Some(s) = &model.symplectic {
        obj.insert("symplectic".into(), json!(format_form(s, &model.generators)));
    }
    Value::Object(obj)
}

pub fn format_model(model: &ModelFile) -> String {
    let mut s = serde_json::to_string_pretty(&model_to_value(model)).expect("serializable");
    s.push('\n');
    s
}

/// Replace the alphabetic stem of `name` by `prefix` when the name is a stem
/// followed by digits (`x3` -> `y3`); otherwise prepend `prefix`.
pub fn rename(name: &str, prefix: &str) -> String {
    let stem = name.trim_end_matches(|c: char| c.is_ascii_digit());
    if !stem.is_empty() && stem.len() < name.len() && stem.chars().all(|c| c.is_ascii_alphabetic())
    {
        format!("{prefix}{}", &name[stem.len()..])
    } else {
        format!("{prefix}{name}")
    }
}

fn embed(mv: &Multivector, ambient: usize, offset: usize) -> Multivector {
    let mut out = Multivector::zero(ambient);
    for (b, c) in mv.terms() {
        out.add_term(Blade::from_bits(b.bits() << offset), c.clone());
    }
    out
}

fn padded(c: &Character, before: (usize, usize), after: (usize, usize)) -> Character {
    let mut free = vec![0; before.0];
    free.extend_from_slice(c.free());
    free.extend(std::iter::repeat_n(0, after.0));
    let mut sign = vec![false; before.1];
    sign.extend_from_slice(c.sign());
    sign.extend(std::iter::repeat_n(false, after.1));
    Character::new(free, sign)
}

/// Direct sum of the two Lie algebras, with character spaces concatenated.
///
/// The symplectic form of the product is the sum of the factors' forms when
/// both have one.
pub fn product_model(
    a: &ModelFile,
    b: &ModelFile,
    prefix_a: &str,
    prefix_b: &str,
) -> Result<ModelFile, ModelError> {
    let (ma, mb) = (a.generators.len(), b.generators.len());
    let m = ma + mb;
    if m > MAX_GENERATORS {
        return Err(ModelError::TooManyGenerators {
            count: m,
            limit: MAX_GENERATORS,
        });
    }
    let mut generators: Vec<String> = a.generators.iter().map(|g| rename(g, prefix_a)).collect();
    for g in &b.generators {
        let g = rename(g, prefix_b);
        if generators.contains(&g) {
            return Err(ModelError::NameCollision(g));
        }
        generators.push(g);
    }
    for (i, g) in generators.iter().enumerate() {
        if generators[..i].contains(g) {
            return Err(ModelError::NameCollision(g.clone()));
        }
    }
    let differential = a
        .differential
        .iter()
        .map(|d| embed(d, m, 0))
        .chain(b.differential.iter().map(|d| embed(d, m, ma)))
        .collect();
    let weights = match (&a.weights, &b.weights) {
        (None, None) => None,
        (wa, wb) => {
            let wa = wa.clone().unwrap_or_else(|| WeightAssignment::trivial(ma));
            let wb = wb.clone().unwrap_or_else(|| WeightAssignment::trivial(mb));
            let (sa, sb) = (wa.shape(), wb.shape());
            let chars = wa
                .characters()
                .iter()
                .map(|c| padded(c, (0, 0), sb))
                .chain(wb.characters().iter().map(|c| padded(c, sa, (0, 0))))
                .collect();
            Some(WeightAssignment::new(sa.0 + sb.0, sa.1 + sb.1, chars)?)
        }
    };
    let symplectic = match (&a.symplectic, &b.symplectic) {
        (Some(x), Some(y)) => Some(
            embed(x, m, 0)
                .try_add(&embed(y, m, ma))
                .map_err(LieError::from)?,
        ),
        _ => None,
    };
    Ok(ModelFile {
        name: format!("{}_x_{}", a.name, b.name),
        generators,
        differential,
        weights,
        symplectic,
    })
}

/// A model checked and turned into a complex of forms.
#[derive(Debug, Clone)]
pub struct BuiltModel {
    pub model: ModelFile,
    pub presentation: LiePresentation,
    /// The full complex, or the invariant subcomplex when requested.
    pub complex: FormComplex,
    pub invariant: bool,
}

impl ModelFile {
    pub fn presentation(&self) -> Result<LiePresentation, ModelError> {
        Ok(LiePresentation::from_differentials(
            self.generators.clone(),
            &self.differential,
        )?)
    }

    pub fn validation(&self) -> Result<ValidationReport, ModelError> {
        Ok(validate_presentation(&self.presentation()?))
    }

    /// Check the model and build its (invariant) complex of forms.
    pub fn build(&self, invariant: bool, max_generators: usize) -> Result<BuiltModel, ModelError> {
        let m = self.generators.len();
        if m > max_generators {
            return Err(ModelError::TooManyGenerators {
                count: m,
                limit: max_generators,
            });
        }
        let presentation = self.presentation()?;
        let report = validate_presentation(&presentation);
        if !report.is_valid() {
            return Err(ModelError::NotJacobi(report.jacobi_failures.len()));
        }
        let full = FormComplex::full(&presentation)?;
        let complex = if invariant {
            let w = self
                .weights
                .as_ref()
                .ok_or_else(|| ModelError::NoWeights(self.name.clone()))?;
            let compat = check_weight_compatibility(&presentation, w)?;
            if !compat.is_compatible() {
                return Err(ModelError::IncompatibleWeights(compat.failures.len()));
            }
            invariant_complex(&full, w)?.0
        } else {
            full
        };
        Ok(BuiltModel {
            model: self.clone(),
            presentation,
            complex,
            invariant,
        })
    }
}

impl BuiltModel {
    pub fn symplectic(&self) -> Result<SymplecticForm, ModelError> {
        let omega = self
            .model
            .symplectic
            .as_ref()
            .ok_or_else(|| ModelError::NoSymplectic(self.model.name.clone()))?;
        Ok(validate_symplectic(&self.complex, omega)?)
    }
}
