//! Built-in models with their expected result tables.

use thiserror::Error;

use crate::exterior::{parse_form, Multivector};
use crate::model::{product_model, ModelFile};
use crate::torus::{Character, WeightAssignment};

pub const KEYS: [&str; 7] = [
    "abelian_<m>",
    "h3",
    "h3z2",
    "ex52_product",
    "nilprod",
    "ex51_solv",
    "torus_<2n>",
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown example `{0}`; available: abelian_<m>, h3, h3z2, ex52_product, nilprod, ex51_solv, torus_<2n>")]
pub struct UnknownExample(pub String);

/// Expected values for a registry model, computed on the invariant complex
/// when `invariant` is set and on the full complex otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Golden {
    pub invariant: bool,
    pub betti: Vec<usize>,
    pub comparison: Option<GoldenComparison>,
}

/// Comparison data for degrees `n..=2n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldenComparison {
    pub n: usize,
    pub coeffective: Vec<usize>,
    pub tilde: Vec<usize>,
    pub isomorphic: Vec<usize>,
    pub non_isomorphic: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegistryEntry {
    pub key: String,
    pub model: ModelFile,
    pub expected: Option<Golden>,
}

fn names(stem: &str, range: std::ops::RangeInclusive<usize>) -> Vec<String> {
    range.map(|i| format!("{stem}{i}")).collect()
}

fn form(text: &str, generators: &[String]) -> Multivector {
    parse_form(text, generators).expect("registry forms are well formed")
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn abelian_model(name: String, generators: Vec<String>, symplectic: Option<Multivector>) -> ModelFile {
    let m = generators.len();
    ModelFile {
        name,
        generators,
        differential: vec![Multivector::zero(m); m],
        weights: None,
        symplectic,
    }
}

/// Golden table of a flat model with the standard form: everything is a
/// binomial coefficient.
fn flat_golden(m: usize) -> Golden {
    let betti = (0..=m).map(|p| binomial(m, p)).collect();
    let comparison = m.is_multiple_of(2).then(|| {
        let n = m / 2;
        let coe: Vec<usize> = (n..=m)
            .map(|p| binomial(m, p) - binomial(m, p + 2))
            .collect();
        GoldenComparison {
            n,
            coeffective: coe.clone(),
            tilde: coe,
            isomorphic: (n..=m).collect(),
            non_isomorphic: vec![],
        }
    });
    Golden {
        invariant: false,
        betti,
        comparison,
    }
}

fn abelian(m: usize) -> RegistryEntry {
    let generators = names("e", 1..=m);
    let symplectic = m.is_multiple_of(2).then(|| {
        let text = (1..=m / 2)
            .map(|i| format!("e{}^e{}", 2 * i - 1, 2 * i))
            .collect::<Vec<_>>()
            .join(" + ");
        form(&text, &generators)
    });
    RegistryEntry {
        key: format!("abelian_{m}"),
        model: abelian_model(format!("abelian_{m}"), generators, symplectic),
        expected: Some(flat_golden(m)),
    }
}

fn torus(m: usize) -> RegistryEntry {
    let n = m / 2;
    let mut generators = names("x", 1..=n);
    generators.extend(names("y", 1..=n));
    let text = (1..=n)
        .map(|i| format!("x{i}^y{i}"))
        .collect::<Vec<_>>()
        .join(" + ");
    let omega = form(&text, &generators);
    RegistryEntry {
        key: format!("torus_{m}"),
        model: abelian_model(format!("torus_{m}"), generators, Some(omega)),
        expected: Some(flat_golden(m)),
    }
}

fn h3_model() -> ModelFile {
    let generators = names("x", 1..=3);
    let differential = vec![
        Multivector::zero(3),
        Multivector::zero(3),
        form("-x1^x2", &generators),
    ];
    ModelFile {
        name: "h3".into(),
        generators,
        differential,
        weights: None,
        symplectic: None,
    }
}

fn h3z2_model() -> ModelFile {
    let chars = [false, true, true]
        .iter()
        .map(|&b| Character::new(vec![], vec![b]))
        .collect();
    ModelFile {
        name: "h3z2".into(),
        weights: Some(WeightAssignment::new(0, 1, chars).expect("uniform shape")),
        ..h3_model()
    }
}

const PRODUCT_OMEGA: &str = "x1^y1 + x2^x3 + y2^y3";

fn ex52_product() -> RegistryEntry {
    let mut model = product_model(&h3z2_model(), &h3z2_model(), "x", "y").expect("disjoint names");
    model.name = "ex52_product".into();
    model.symplectic = Some(form(PRODUCT_OMEGA, &model.generators));
    RegistryEntry {
        key: "ex52_product".into(),
        model,
        expected: Some(Golden {
            invariant: true,
            betti: vec![1, 2, 3, 4, 3, 2, 1],
            comparison: Some(GoldenComparison {
                n: 3,
                coeffective: vec![2, 2, 2, 1],
                tilde: vec![2, 2, 2, 1],
                isomorphic: vec![3, 4, 5, 6],
                non_isomorphic: vec![],
            }),
        }),
    }
}

fn nilprod() -> RegistryEntry {
    let mut model = product_model(&h3_model(), &h3_model(), "x", "y").expect("disjoint names");
    model.name = "nilprod".into();
    model.symplectic = Some(form(PRODUCT_OMEGA, &model.generators));
    RegistryEntry {
        key: "nilprod".into(),
        model,
        expected: Some(Golden {
            invariant: false,
            betti: vec![1, 4, 8, 10, 8, 4, 1],
            comparison: Some(GoldenComparison {
                n: 3,
                coeffective: vec![9, 7, 4, 1],
                tilde: vec![6, 7, 4, 1],
                isomorphic: vec![4, 5, 6],
                non_isomorphic: vec![3],
            }),
        }),
    }
}

fn ex51_solv() -> RegistryEntry {
    let generators = names("e", 1..=6);
    let chars = [0, 0, 1, 1, -1, -1]
        .iter()
        .map(|&w| Character::new(vec![w], vec![]))
        .collect();
    let omega = form("e1^e2 + e3^e5 + e4^e6", &generators);
    let mut model = abelian_model("ex51_solv".into(), generators, Some(omega));
    model.weights = Some(WeightAssignment::new(1, 0, chars).expect("uniform shape"));
    RegistryEntry {
        key: "ex51_solv".into(),
        model,
        expected: Some(Golden {
            invariant: true,
            betti: vec![1, 2, 5, 8, 5, 2, 1],
            comparison: Some(GoldenComparison {
                n: 3,
                coeffective: vec![6, 4, 2, 1],
                tilde: vec![6, 4, 2, 1],
                isomorphic: vec![3, 4, 5, 6],
                non_isomorphic: vec![],
            }),
        }),
    }
}

fn parametrized(key: &str, stem: &str) -> Option<usize> {
    key.strip_prefix(stem)?
        .parse()
        .ok()
        .filter(|&m| (1..=crate::exterior::MAX_GENERATORS).contains(&m))
}

pub fn builtin_example(key: &str) -> Result<RegistryEntry, UnknownExample> {
    let entry = match key {
        "h3" => RegistryEntry {
            key: "h3".into(),
            model: h3_model(),
            expected: Some(Golden {
                invariant: false,
                betti: vec![1, 2, 2, 1],
                comparison: None,
            }),
        },
        "h3z2" => RegistryEntry {
            key: "h3z2".into(),
            model: h3z2_model(),
            expected: Some(Golden {
                invariant: true,
                betti: vec![1, 1, 1, 1],
                comparison: None,
            }),
        },
        "ex52_product" => ex52_product(),
        "nilprod" => nilprod(),
        "ex51_solv" => ex51_solv(),
        _ => {
            if let Some(m) = parametrized(key, "abelian_") {
                abelian(m)
            } else if let Some(m) = parametrized(key, "torus_").filter(|m| m % 2 == 0) {
                torus(m)
            } else {
                return Err(UnknownExample(key.to_string()));
            }
        }
    };
    Ok(entry)
}

/// Concrete keys covered by the checked-in model files and the test suites.
pub fn standard_keys() -> Vec<String> {
    [
        "abelian_2",
        "abelian_4",
        "h3",
        "h3z2",
        "ex52_product",
        "nilprod",
        "ex51_solv",
        "torus_4",
        "torus_6",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect()
}
