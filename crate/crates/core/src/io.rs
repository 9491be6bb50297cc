//! JSON file formats for morphisms and generator sets.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::noether::{CoefficientField, ModuleElement};
use crate::ovic::{OvicMorphism, VicMorphism};
use crate::ring::{FiniteRing, RMatrix};
use crate::wedderburn::AwEmbedding;

/// `{"ring", "d", "n", "f_prime", "f_dprime"}`; `ring` is a ring name or content hash.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismFile {
    pub ring: String,
    pub d: usize,
    pub n: usize,
    pub f_prime: Vec<Vec<usize>>,
    pub f_dprime: Vec<Vec<usize>>,
}

impl MorphismFile {
    pub fn from_vic(f: &VicMorphism) -> Self {
        MorphismFile {
            ring: f.ring().name().to_string(),
            d: f.d(),
            n: f.n(),
            f_prime: f.f_prime().to_rows(),
            f_dprime: f.f_dprime().to_rows(),
        }
    }

    pub fn to_vic(&self, aw: &AwEmbedding) -> Result<VicMorphism> {
        let ring: &FiniteRing = aw.ring();
        if self.ring != ring.name() && self.ring != ring.content_hash() {
            return Err(Error::InvalidInput(format!(
                "morphism refers to ring {:?}, loaded ring is {:?}",
                self.ring,
                ring.name()
            )));
        }
        let f_prime = RMatrix::from_rows(&self.f_prime, self.d)?;
        let f_dprime = RMatrix::from_rows(&self.f_dprime, self.n)?;
        if f_prime.rows() != self.n || f_dprime.rows() != self.d {
            return Err(Error::BadShape(format!("matrices do not match d = {}, n = {}", self.d, self.n)));
        }
        VicMorphism::new(aw.ring_arc().clone(), f_prime, f_dprime)
    }

    pub fn to_ovic(&self, aw: &AwEmbedding) -> Result<OvicMorphism> {
        OvicMorphism::new(self.to_vic(aw)?, aw)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermEntry {
    pub morphism: MorphismFile,
    pub coeff: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorEntry {
    pub degree: usize,
    pub terms: Vec<TermEntry>,
}

/// Parses a generator list for `P(d)`.
pub fn parse_generators(
    entries: &[GeneratorEntry],
    d: usize,
    field: &CoefficientField,
    aw: &AwEmbedding,
) -> Result<Vec<ModuleElement>> {
    entries
        .iter()
        .map(|e| {
            let mut x = ModuleElement::zero(d, e.degree);
            for t in &e.terms {
                if t.morphism.d != d {
                    return Err(Error::SourceMismatch(d, t.morphism.d));
                }
                x.add_term(field, t.morphism.to_ovic(aw)?, field.parse(&t.coeff)?)?;
            }
            Ok(x)
        })
        .collect()
}

pub fn generator_entries(gens: &[ModuleElement], field: &CoefficientField) -> Vec<GeneratorEntry> {
    gens.iter()
        .map(|g| GeneratorEntry {
            degree: g.degree(),
            terms: g
                .terms()
                .map(|(f, c)| TermEntry { morphism: MorphismFile::from_vic(f.vic()), coeff: field.to_json(c) })
                .collect(),
        })
        .collect()
}

/// Machine-readable command output. Everything except `wall_time_ms` is a
/// function of the inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub verb: String,
    pub inputs_digest: String,
    pub result: Value,
    pub verified: BTreeMap<String, bool>,
    pub wall_time_ms: u64,
}

/// SHA-256 over length-prefixed parts, hex encoded.
pub fn inputs_digest<'a>(parts: impl IntoIterator<Item = &'a [u8]>) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    hex::encode(h.finalize())
}
