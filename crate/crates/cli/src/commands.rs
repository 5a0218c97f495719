//! Argument parsing and dispatch.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use hecke_cert::coxeter::{ParabolicSubset, Permutation, Word};
use hecke_cert::demazure::{intersection_vector, DemazureExpr};
use hecke_cert::hecke::{is_perverse_character, kl_basis, pairing, HeckeElement};
use hecke_cert::spherical::{
    expansion_from_tally, is_perverse_spherical, spherical_kl_basis, spherical_pairing,
    SphericalElement,
};
use hecke_cert::subexpr::{tally, EnumConstraint};
use serde::Serialize;
use serde_json::{json, Value};

use crate::certify::{certify, Timing};
use crate::word_data::{census, WordData};
use crate::{CliError, Status};

#[derive(Debug, Parser)]
#[command(
    name = "hecke-cert",
    version,
    about = "Exact Hecke algebra computations and the S_15 non-perversity certificate"
)]
pub struct Cli {
    /// Print a human-readable summary instead of JSON.
    #[arg(long, global = true)]
    pub human: bool,
    /// Leave the timing section out of the output.
    #[arg(long, global = true)]
    pub no_timing: bool,
    /// Worker threads for subexpression enumeration.
    #[arg(long, global = true, env = "HECKE_CERT_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Basis {
    Standard,
    Kl,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Kazhdan-Lusztig basis element b_x in the standard basis.
    Kl {
        #[arg(long)]
        n: usize,
        /// One-line notation `[3,2,1]` or a word `s1 s2 s1`.
        #[arg(long)]
        element: String,
    },
    /// Spherical Kazhdan-Lusztig basis element c_x in the standard basis.
    Skl {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "")]
        parabolic: String,
        #[arg(long)]
        element: String,
    },
    /// Bott-Samelson element, in H or (with --parabolic) in M.
    Bs {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        word: String,
        #[arg(long)]
        parabolic: Option<String>,
    },
    /// Pairing of two basis elements, in H or (with --parabolic) in M.
    Pair {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        parabolic: Option<String>,
        #[arg(long, value_enum, default_value = "standard")]
        basis: Basis,
    },
    /// Standard-basis expansion of a Bott-Samelson element by subexpressions.
    Deodhar {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        word: String,
        #[arg(long, default_value = "")]
        parabolic: String,
        /// Force e_i = 1 for letters in this subset.
        #[arg(long)]
        forced_in: Option<String>,
    },
    /// Histogram of parabolic defects, optionally at one endpoint coset.
    DefectStats {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        word: String,
        #[arg(long, default_value = "")]
        parabolic: String,
        #[arg(long)]
        forced_in: Option<String>,
        #[arg(long)]
        target: Option<String>,
    },
    /// Evaluate a Demazure operator expression.
    DemazureEval {
        /// Builtin name or a file holding the expression.
        #[arg(long)]
        expr: String,
        /// Erase the k-th operator (1-based, written order) first.
        #[arg(long)]
        erase: Option<usize>,
    },
    /// Intersection-form row from single-operator erasures, with ranks.
    IntersectionForm {
        #[arg(long, default_value = "paper-GL15")]
        expr: String,
        #[arg(long, default_value_t = 2)]
        p: u64,
    },
    /// Whether a Bott-Samelson element has constant KL coefficients.
    PerverseCheck {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        word: String,
        #[arg(long)]
        parabolic: Option<String>,
    },
    /// Run the full certificate.
    Certify {
        /// Word-data JSON file; without it only the rank conditions run.
        #[arg(long)]
        word: Option<PathBuf>,
        #[arg(long, default_value = "paper-GL15")]
        expr: String,
        #[arg(long, default_value_t = 2)]
        p: u64,
    },
    /// Check a word-data file against the known census of the S_15 word.
    ValidateWord {
        #[arg(long)]
        word: PathBuf,
    },
}

/// Result of one command.
pub struct Outcome {
    pub payload: Value,
    pub human: String,
    pub timing: Option<Timing>,
    pub status: Status,
}

impl Outcome {
    fn ok(payload: Value, human: String) -> Self {
        Outcome {
            payload,
            human,
            timing: None,
            status: Status::Verified,
        }
    }

    /// Text written to stdout.
    pub fn render(&self, human: bool, with_timing: bool) -> String {
        if human {
            let mut s = self.human.clone();
            if let (true, Some(t)) = (with_timing, &self.timing) {
                let _ = writeln!(
                    s,
                    "timing: {} ms total on {} threads",
                    t.total_ms, t.threads
                );
            }
            return s;
        }
        let mut payload = self.payload.clone();
        if let (true, Some(t), Value::Object(map)) = (with_timing, &self.timing, &mut payload) {
            map.insert("timing".into(), to_value(t));
        }
        let mut s = serde_json::to_string_pretty(&payload).expect("serialisable");
        s.push('\n');
        s
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serialisable")
}

pub fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn parse_element(n: usize, s: &str) -> Result<Permutation, CliError> {
    if s.trim_start().starts_with('[') {
        let x = Permutation::parse(s)?;
        if x.rank() != n {
            return Err(CliError::Input(format!("{x} is not in S_{n}")));
        }
        Ok(x)
    } else {
        Ok(Word::parse(n, s)?.evaluate())
    }
}

fn parse_subset(n: usize, s: &str) -> Result<ParabolicSubset, CliError> {
    Ok(ParabolicSubset::new(
        n,
        Word::parse(n, s)?.letters().iter().copied(),
    )?)
}

fn constraint(word: &Word, forced_in: Option<&str>) -> Result<EnumConstraint, CliError> {
    Ok(match forced_in {
        Some(b) => EnumConstraint::forced_in(word, &parse_subset(word.rank(), b)?),
        None => EnumConstraint::free(word.len()),
    })
}

pub fn resolve_expr(spec: &str) -> Result<DemazureExpr, CliError> {
    if let Some(e) = DemazureExpr::builtin(spec) {
        return Ok(e);
    }
    let text = std::fs::read_to_string(spec).map_err(|e| {
        CliError::Input(format!(
            "{spec:?} is neither a builtin expression nor a readable file: {e}"
        ))
    })?;
    Ok(DemazureExpr::parse(&text)?)
}

fn hist_text(h: &BTreeMap<i64, u64>) -> String {
    let parts: Vec<String> = h.iter().map(|(d, c)| format!("{d}: {c}")).collect();
    format!("{{{}}}", parts.join(", "))
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let threads = cli.threads.unwrap_or_else(default_threads).max(1);
    match &cli.command {
        Command::Kl { n, element } => {
            let x = parse_element(*n, element)?;
            let b = kl_basis(&x);
            Ok(Outcome::ok(
                json!({ "element": x, "kl_basis": to_value(&b) }),
                format!("b_{x} = {b}\n"),
            ))
        }
        Command::Skl {
            n,
            parabolic,
            element,
        } => {
            let a = parse_subset(*n, parabolic)?;
            let x = parse_element(*n, element)?;
            let c = spherical_kl_basis(&x, &a)?;
            Ok(Outcome::ok(
                json!({ "element": x, "parabolic": a.indices().collect::<Vec<_>>(), "kl_basis": to_value(&c) }),
                format!("c_{x} = {c}  (A = {a})\n"),
            ))
        }
        Command::Bs { n, word, parabolic } => {
            let w = Word::parse(*n, word)?;
            match parabolic {
                None => {
                    let h = HeckeElement::bott_samelson(&w);
                    Ok(Outcome::ok(
                        json!({ "word": w.letters(), "bott_samelson": to_value(&h) }),
                        format!("b_{w} = {h}\n"),
                    ))
                }
                Some(p) => {
                    let a = parse_subset(*n, p)?;
                    let m = SphericalElement::bott_samelson(&w, &a);
                    Ok(Outcome::ok(
                        json!({ "word": w.letters(), "bott_samelson": to_value(&m) }),
                        format!("b_{w} m_id = {m}  (A = {a})\n"),
                    ))
                }
            }
        }
        Command::Pair {
            n,
            left,
            right,
            parabolic,
            basis,
        } => {
            let (x, y) = (parse_element(*n, left)?, parse_element(*n, right)?);
            let p = match parabolic {
                None => {
                    let elt = |z: &Permutation| match basis {
                        Basis::Standard => HeckeElement::standard(z),
                        Basis::Kl => kl_basis(z),
                    };
                    pairing(&elt(&x), &elt(&y))
                }
                Some(s) => {
                    let a = parse_subset(*n, s)?;
                    let elt = |z: &Permutation| match basis {
                        Basis::Standard => {
                            if !hecke_cert::coxeter::is_min_coset_rep(z, &a) {
                                return Err(CliError::Input(format!(
                                    "{z} is not a minimal coset representative"
                                )));
                            }
                            Ok(SphericalElement::standard(z, &a))
                        }
                        Basis::Kl => Ok(spherical_kl_basis(z, &a)?),
                    };
                    spherical_pairing(&elt(&x)?, &elt(&y)?)?
                }
            };
            Ok(Outcome::ok(
                json!({ "left": x, "right": y, "pairing": to_value(&p) }),
                format!("({x}, {y}) = {p}\n"),
            ))
        }
        Command::Deodhar {
            n,
            word,
            parabolic,
            forced_in,
        } => {
            let w = Word::parse(*n, word)?;
            let a = parse_subset(*n, parabolic)?;
            let c = constraint(&w, forced_in.as_deref())?;
            let t = tally(&w, &a, &c, threads)?;
            let m = expansion_from_tally(&t, &a);
            Ok(Outcome::ok(
                json!({ "word": w.letters(), "subexpressions": t.visited(), "expansion": to_value(&m) }),
                format!("{} subexpressions\n{m}\n", t.visited()),
            ))
        }
        Command::DefectStats {
            n,
            word,
            parabolic,
            forced_in,
            target,
        } => {
            let w = Word::parse(*n, word)?;
            let a = parse_subset(*n, parabolic)?;
            let c = constraint(&w, forced_in.as_deref())?;
            let target = target
                .as_deref()
                .map(|t| parse_element(*n, t))
                .transpose()?;
            let t = tally(&w, &a, &c, threads)?;
            let target = target.map(|x| hecke_cert::coxeter::min_coset_rep(&x, &a));
            let h = t.histogram(target.as_ref());
            Ok(Outcome::ok(
                json!({ "subexpressions": t.visited(), "target": target, "histogram": to_value(&h) }),
                format!(
                    "{} subexpressions, defects {}\n",
                    t.visited(),
                    hist_text(&h)
                ),
            ))
        }
        Command::DemazureEval { expr, erase } => {
            let e = resolve_expr(expr)?;
            let e = match erase {
                Some(k) => e.erase(*k)?,
                None => e,
            };
            let (value, audit) = e.eval_audited()?;
            let audit_ok = audit.iter().all(|c| c.ok());
            if !audit_ok {
                return Err(CliError::Internal(format!("grading audit failed for {e}")));
            }
            Ok(Outcome::ok(
                json!({
                    "expression": e.to_string(),
                    "value": value.to_string(),
                    "expected_degree": e.expected_degree(),
                    "degree": value.graded_degree(),
                    "audit_ok": audit_ok,
                }),
                format!("{e}\n= {value}\n"),
            ))
        }
        Command::IntersectionForm { expr, p } => {
            check_prime(*p)?;
            let r = intersection_vector(&resolve_expr(expr)?, *p)?;
            let entries: Vec<String> = r.entries.iter().map(ToString::to_string).collect();
            let human = format!(
                "entries ({})\nrank over Q: {}\nrank over F_{}: {}\n",
                entries.join(", "),
                r.rank_over_q,
                p,
                r.rank_over_p
            );
            Ok(Outcome::ok(to_value(&r), human))
        }
        Command::PerverseCheck { n, word, parabolic } => {
            let w = Word::parse(*n, word)?;
            let (perverse, payload) = match parabolic {
                None => {
                    let r = is_perverse_character(&HeckeElement::bott_samelson(&w));
                    (r.perverse, to_value(&r))
                }
                Some(s) => {
                    let a = parse_subset(*n, s)?;
                    let r = is_perverse_spherical(&SphericalElement::bott_samelson(&w, &a))?;
                    (r.perverse, to_value(&r))
                }
            };
            Ok(Outcome::ok(
                payload,
                format!(
                    "{w}: {}\n",
                    if perverse { "perverse" } else { "not perverse" }
                ),
            ))
        }
        Command::Certify { word, expr, p } => {
            check_prime(*p)?;
            let e = resolve_expr(expr)?;
            let inst = word
                .as_deref()
                .map(|path| WordData::load(path)?.resolve())
                .transpose()?;
            let (r, timing) = certify(&e, *p, inst.as_ref(), threads)?;
            let mut human = String::new();
            let entries: Vec<String> = r
                .intersection_form
                .entries
                .iter()
                .map(ToString::to_string)
                .collect();
            let _ = writeln!(human, "intersection form ({})", entries.join(", "));
            let _ = writeln!(
                human,
                "rank over Q: {}, rank over F_{}: {}",
                r.intersection_form.rank_over_q, p, r.intersection_form.rank_over_p
            );
            if let Some(h) = &r.histogram_at_x {
                let _ = writeln!(human, "defects at x: {}", hist_text(h));
            }
            let _ = writeln!(
                human,
                "interval: {} ({} cosets)",
                r.interval.status,
                r.interval.cosets_checked.unwrap_or(0)
            );
            for f in &r.interval.failures {
                let _ = writeln!(human, "  {} has coefficient {}", f.coset, f.coefficient);
            }
            let _ = writeln!(human, "verdict: {}", r.verdict);
            let status = if r.verdict {
                Status::Verified
            } else {
                Status::HypothesisFails
            };
            Ok(Outcome {
                payload: to_value(&r),
                human,
                timing: Some(timing),
                status,
            })
        }
        Command::ValidateWord { word } => {
            let inst = WordData::load(word)?.resolve()?;
            let c = census(&inst);
            let mut human = String::new();
            for check in &c.checks {
                let mark = if check.pass { "ok  " } else { "FAIL" };
                let _ = writeln!(
                    human,
                    "{mark} {}: expected {}, got {}",
                    check.name, check.expected, check.actual
                );
            }
            let status = if c.pass {
                Status::Verified
            } else {
                Status::HypothesisFails
            };
            Ok(Outcome {
                payload: to_value(&c),
                human,
                timing: None,
                status,
            })
        }
    }
}

fn check_prime(p: u64) -> Result<(), CliError> {
    if hecke_cert::ring::is_prime(p) {
        Ok(())
    } else {
        Err(CliError::Input(format!("{p} is not prime")))
    }
}
