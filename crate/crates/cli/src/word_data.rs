//! Word-data files and the census checks for the `S_15` certificate word.

use std::path::Path;

use hecke_cert::coxeter::{
    is_min_coset_rep, longest_element, min_coset_rep, ParabolicSubset, Permutation, Word,
};
use hecke_cert::subexpr::{Allowed, EnumConstraint};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// On-disk description of a word, the parabolic subsets and the forced
/// positions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WordData {
    pub n: usize,
    pub word: Vec<usize>,
    #[serde(rename = "A")]
    pub a: Vec<usize>,
    #[serde(rename = "B")]
    pub b: Vec<usize>,
    #[serde(default)]
    pub forced: Forced,
    #[serde(default = "default_degree")]
    pub degree: i64,
}

fn default_degree() -> i64 {
    -1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Forced {
    Rule(ForcedRule),
    /// One entry per position: `0`, `1`, or `null` for free.
    Explicit(Vec<Option<u8>>),
}

impl Default for Forced {
    fn default() -> Self {
        Forced::Rule(ForcedRule::LettersInB)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ForcedRule {
    /// `e_i = 1` whenever `t_i` lies in `B`.
    #[serde(rename = "letters-in-B")]
    LettersInB,
    #[serde(rename = "none")]
    None,
}

/// A validated instance.
#[derive(Clone, Debug)]
pub struct Instance {
    pub word: Word,
    pub a: ParabolicSubset,
    pub b: ParabolicSubset,
    pub constraint: EnumConstraint,
    /// `w_B`
    pub x: Permutation,
    /// minimal representative of the word's product
    pub w: Permutation,
    pub degree: i64,
}

impl WordData {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| CliError::Input(e.to_string()))?;
        if value.get("word").is_none_or(|w| w.is_null()) {
            return Err(CliError::Input(
                "word data is incomplete (no \"word\"); fill in the full word before certifying"
                    .into(),
            ));
        }
        serde_json::from_value(value).map_err(|e| CliError::Input(e.to_string()))
    }

    pub fn resolve(&self) -> Result<Instance, CliError> {
        if self.n == 0 {
            return Err(CliError::Input("n must be positive".into()));
        }
        let word = Word::new(self.n, self.word.clone())?;
        let a = ParabolicSubset::new(self.n, self.a.iter().copied())?;
        let b = ParabolicSubset::new(self.n, self.b.iter().copied())?;
        let constraint = match &self.forced {
            Forced::Rule(ForcedRule::LettersInB) => EnumConstraint::forced_in(&word, &b),
            Forced::Rule(ForcedRule::None) => EnumConstraint::free(word.len()),
            Forced::Explicit(v) => {
                if v.len() != word.len() {
                    return Err(CliError::Input(format!(
                        "forced has {} entries but the word has {} letters",
                        v.len(),
                        word.len()
                    )));
                }
                let allowed = v
                    .iter()
                    .map(|e| match e {
                        None => Ok(Allowed::Free),
                        Some(0) => Ok(Allowed::Zero),
                        Some(1) => Ok(Allowed::One),
                        Some(k) => Err(CliError::Input(format!(
                            "forced entries must be 0, 1 or null, got {k}"
                        ))),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                EnumConstraint::new(allowed)
            }
        };
        let x = longest_element(&b);
        if !is_min_coset_rep(&x, &a) {
            return Err(CliError::Input(format!(
                "w_B = {x} is not a minimal coset representative for A = {a}"
            )));
        }
        let w = min_coset_rep(&word.evaluate(), &a);
        Ok(Instance {
            word,
            a,
            b,
            constraint,
            x,
            w,
            degree: self.degree,
        })
    }
}

/// Letters of the known prefix of the certificate word.
pub fn documented_prefix() -> Vec<usize> {
    [(1, 14), (2, 13), (4, 12), (3, 11)]
        .iter()
        .flat_map(|&(lo, hi)| lo..=hi)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusCheck {
    pub name: &'static str,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Census {
    pub checks: Vec<CensusCheck>,
    pub pass: bool,
}

/// Checks a candidate for the 78-letter `S_15` word against the facts that
/// are known independently of the full word.
pub fn census(inst: &Instance) -> Census {
    let letters = inst.word.letters();
    let count = |f: &dyn Fn(usize) -> bool| letters.iter().filter(|&&s| f(s)).count();
    let prefix = documented_prefix();
    let mut checks = Vec::new();
    let mut push = |name, expected: String, actual: String| {
        let pass = expected == actual;
        checks.push(CensusCheck {
            name,
            expected,
            actual,
            pass,
        });
    };
    push("rank", "15".into(), inst.word.rank().to_string());
    push("length", "78".into(), letters.len().to_string());
    push("reduced", "true".into(), inst.word.is_reduced().to_string());
    push(
        "free positions",
        "23".into(),
        inst.constraint.free_positions().len().to_string(),
    );
    push(
        "letters of index <= 3",
        "12".into(),
        count(&|s| s <= 3).to_string(),
    );
    push("letters s4", "11".into(), count(&|s| s == 4).to_string());
    push(
        "prefix",
        format!("{prefix:?}"),
        format!("{:?}", &letters[..prefix.len().min(letters.len())]),
    );
    let pass = checks.iter().all(|c| c.pass);
    Census { checks, pass }
}
