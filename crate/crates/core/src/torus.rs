//! Diagonalizable torus actions on the dual generators, recorded as characters
//! in `Z^r ⊕ (Z/2)^s`, and the invariant subcomplex they cut out.

use std::fmt;
use std::ops::Add;

use thiserror::Error;

use crate::complexes::{ChainMap, ComplexError};
use crate::exterior::{blades_of_degree, Blade};
use crate::lie_ce::{FormComplex, LieError, LiePresentation};
use crate::linalg::RatMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TorusError {
    #[error("character shape mismatch: ({0}, {1}) vs ({2}, {3})")]
    ShapeMismatch(usize, usize, usize, usize),
    #[error("weights given for {found} generators, expected {expected}")]
    WrongLength { expected: usize, found: usize },
    #[error("differential does not preserve invariant forms in degree {degree}")]
    NotRestricting { degree: usize },
    #[error(transparent)]
    Lie(#[from] LieError),
}

/// Element of `Z^r ⊕ (Z/2)^s`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character {
    free: Vec<i64>,
    sign: Vec<bool>,
}

impl Character {
    pub fn new(free: Vec<i64>, sign: Vec<bool>) -> Self {
        Character { free, sign }
    }

    pub fn trivial(r: usize, s: usize) -> Self {
        Character {
            free: vec![0; r],
            sign: vec![false; s],
        }
    }

    pub fn free(&self) -> &[i64] {
        &self.free
    }

    pub fn sign(&self) -> &[bool] {
        &self.sign
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.free.len(), self.sign.len())
    }

    pub fn is_trivial(&self) -> bool {
        self.free.iter().all(|&x| x == 0) && self.sign.iter().all(|&b| !b)
    }
}

impl Add for &Character {
    type Output = Character;

    fn add(self, other: &Character) -> Character {
        assert_eq!(self.shape(), other.shape(), "character shape mismatch");
        Character {
            free: self.free.iter().zip(&other.free).map(|(a, b)| a + b).collect(),
            sign: self.sign.iter().zip(&other.sign).map(|(a, b)| a ^ b).collect(),
        }
    }
}

impl fmt::Debug for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bits: Vec<u8> = self.sign.iter().map(|&b| b as u8).collect();
        write!(f, "χ({:?}; {:?})", self.free, bits)
    }
}

/// One character per generator, all of the same shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightAssignment {
    r: usize,
    s: usize,
    characters: Vec<Character>,
}

impl WeightAssignment {
    pub fn new(r: usize, s: usize, characters: Vec<Character>) -> Result<Self, TorusError> {
        for c in &characters {
            if c.shape() != (r, s) {
                let (cr, cs) = c.shape();
                return Err(TorusError::ShapeMismatch(r, s, cr, cs));
            }
        }
        Ok(WeightAssignment { r, s, characters })
    }

    pub fn trivial(generators: usize) -> Self {
        WeightAssignment {
            r: 0,
            s: 0,
            characters: vec![Character::trivial(0, 0); generators],
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.r, self.s)
    }

    pub fn len(&self) -> usize {
        self.characters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.characters.is_empty()
    }

    pub fn character(&self, generator: usize) -> &Character {
        &self.characters[generator]
    }

    pub fn characters(&self) -> &[Character] {
        &self.characters
    }
}

/// Sum of the characters of the generators in `blade`.
pub fn blade_character(blade: Blade, weights: &WeightAssignment) -> Character {
    blade
        .indices()
        .into_iter()
        .fold(Character::trivial(weights.r, weights.s), |acc, i| {
            &acc + weights.character(i)
        })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatibilityReport {
    /// Nonzero `c^k_ij` with `χ(x_i) + χ(x_j) != χ(x_k)`.
    pub failures: Vec<(usize, usize, usize)>,
}

impl CompatibilityReport {
    pub fn is_compatible(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn check_weight_compatibility(
    pres: &LiePresentation,
    weights: &WeightAssignment,
) -> Result<CompatibilityReport, TorusError> {
    if weights.len() != pres.dim() {
        return Err(TorusError::WrongLength {
            expected: pres.dim(),
            found: weights.len(),
        });
    }
    let failures = pres
        .constants()
        .keys()
        .filter(|&&(i, j, k)| {
            &(weights.character(i) + weights.character(j)) != weights.character(k)
        })
        .copied()
        .collect();
    Ok(CompatibilityReport { failures })
}

/// The subcomplex spanned by forms of trivial total character, and its inclusion.
pub fn invariant_complex(
    c: &FormComplex,
    weights: &WeightAssignment,
) -> Result<(FormComplex, ChainMap), TorusError> {
    let m = c.ambient();
    if weights.len() != m {
        return Err(TorusError::WrongLength {
            expected: m,
            found: weights.len(),
        });
    }
    let subspaces: Vec<_> = (0..=c.complex().top_degree())
        .map(|p| {
            let blades = blades_of_degree(m, p);
            let embedding = c.embedding(p);
            let varying: Vec<usize> = blades
                .iter()
                .enumerate()
                .filter(|(_, b)| !blade_character(**b, weights).is_trivial())
                .map(|(i, _)| i)
                .collect();
            // rows of the embedding at non-invariant blades must vanish
            let mut selector = RatMatrix::zeros(varying.len(), embedding.cols());
            for (r, c, x) in embedding.entries() {
                if let Ok(at) = varying.binary_search(&r) {
                    selector.set(at, c, x.clone());
                }
            }
            selector.kernel()
        })
        .collect();
    let sub = c.restrict(&subspaces).map_err(|e| match e {
        LieError::Complex(ComplexError::NotStable { degree, .. }) => {
            TorusError::NotRestricting { degree }
        }
        other => other.into(),
    })?;
    let inclusion = sub.inclusion_into(c)?;
    Ok((sub, inclusion))
}
