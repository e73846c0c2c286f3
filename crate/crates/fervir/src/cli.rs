//! Front-end plumbing: the element and vector text grammar, module
//! descriptors, and the command handlers behind the binary.
//!
//! Grammar (whitespace insignificant between tokens):
//!
//! ```text
//! element := term { ("+"|"-") term }
//! term    := [ coef "*" ] sym | coef
//! sym     := ("L"|"psi"|"d"|"h") "_" index | "c" | "z" | "c1" | "c2" | "c3"
//! index   := ["-"] digits [ "/2" ]
//! coef    := rat | "(" rat ("+"|"-") rat "*w2" ")"
//! rat     := ["-"] digits [ "/" digits ]
//! ```
//!
//! Vectors use the same coefficient syntax with `xi(i1,...,ik)` symbols.
//! A bare coefficient term is accepted only when it is zero.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::findim::{self, MatrixModule, Subspace};
use crate::fock::{self, FockModule, FockVector, IndexSet, Monomial};
use crate::rank2::{
    classify_rank2, ClassificationOutcome, Rank2Data, Rank2Family, Rank2Tag,
};
use crate::report::VerificationReport;
use crate::scalar::{Rational, ScalarK};
use crate::superalg::{
    jacobi_check, AlgebraElement, AlgebraId, BasisSymbol, Delta, HalfIndex,
};
use crate::verify::verify_module_axioms;
use crate::virmod::{TensorModule, VermaModule};

// ---------------------------------------------------------------------------
// Tokenizer and parsers
// ---------------------------------------------------------------------------

struct Cursor {
    chars: Vec<char>,
    pos: usize,
}

impl Cursor {
    fn new(text: &str) -> Self {
        Cursor {
            chars: text.chars().collect(),
            pos: 0,
        }
    }

    fn col(&self) -> usize {
        self.pos + 1
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            msg: msg.into(),
            col: self.col(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, want: char) -> Result<()> {
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => Err(self.err(format!("expected `{want}`, found `{c}`"))),
            None => Err(self.err(format!("expected `{want}`, found end of input"))),
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    /// digits, at least one.
    fn digits(&mut self) -> Result<String> {
        let mut s = String::new();
        while let Some(c) = self.chars.get(self.pos) {
            if c.is_ascii_digit() {
                s.push(*c);
                self.pos += 1;
            } else {
                break;
            }
        }
        if s.is_empty() {
            Err(self.err("expected digits"))
        } else {
            Ok(s)
        }
    }

    /// identifier: a letter followed by letters and digits.
    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let mut s = String::new();
        match self.chars.get(self.pos) {
            Some(c) if c.is_ascii_alphabetic() => {
                s.push(*c);
                self.pos += 1;
            }
            _ => return Err(self.err("expected a symbol name")),
        }
        while let Some(c) = self.chars.get(self.pos) {
            if c.is_ascii_alphanumeric() {
                s.push(*c);
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(s)
    }

    /// rat := ["-"] digits ["/" digits]
    fn rational(&mut self) -> Result<Rational> {
        self.skip_ws();
        let negative = if self.chars.get(self.pos) == Some(&'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let numer = self.digits()?;
        let denom = if self.chars.get(self.pos) == Some(&'/') {
            self.pos += 1;
            self.digits()?
        } else {
            "1".to_string()
        };
        let n: num_bigint::BigInt = numer.parse().expect("digits");
        let d: num_bigint::BigInt = denom.parse().expect("digits");
        if d == num_bigint::BigInt::from(0) {
            return Err(self.err("zero denominator"));
        }
        let r = Rational::new(if negative { -n } else { n }, d);
        Ok(r)
    }

    /// coef := rat | "(" rat ("+"|"-") rat "*w2" ")"
    fn coefficient(&mut self) -> Result<ScalarK> {
        match self.peek() {
            Some('(') => {
                self.expect('(')?;
                let a = self.rational()?;
                let sign = match self.peek() {
                    Some('+') => 1,
                    Some('-') => -1,
                    _ => return Err(self.err("expected `+` or `-` inside coefficient")),
                };
                self.pos += 1;
                let b = self.rational()?;
                self.expect('*')?;
                let name = self.ident()?;
                if name != "w2" {
                    return Err(self.err(format!("expected `w2`, found `{name}`")));
                }
                self.expect(')')?;
                Ok(ScalarK::new(
                    a,
                    b * Rational::from_integer(num_bigint::BigInt::from(sign)),
                ))
            }
            _ => Ok(ScalarK::from_rational(self.rational()?)),
        }
    }

    /// index := ["-"] digits ["/2"]
    fn index(&mut self) -> Result<HalfIndex> {
        self.skip_ws();
        let negative = if self.chars.get(self.pos) == Some(&'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let digits = self.digits()?;
        let n: i64 = digits
            .parse()
            .map_err(|_| self.err("index out of range"))?;
        let mut twice = 2 * n;
        if self.chars.get(self.pos) == Some(&'/') {
            self.pos += 1;
            let d = self.digits()?;
            if d != "2" {
                return Err(self.err("index denominator must be 2"));
            }
            twice = n;
        }
        Ok(HalfIndex::from_twice(if negative { -twice } else { twice }))
    }
}

fn symbol_from_name(cursor: &mut Cursor, name: &str, algebra: AlgebraId) -> Result<BasisSymbol> {
    let sym = match name {
        "L" | "psi" | "d" | "h" => {
            cursor.expect('_')?;
            let at = cursor.col();
            let idx = cursor.index()?;
            match name {
                "psi" => BasisSymbol::Psi(idx),
                "L" | "d" | "h" => {
                    let Some(i) = idx.as_integer() else {
                        return Err(Error::Parse {
                            msg: format!("{name} takes an integer index"),
                            col: at,
                        });
                    };
                    match name {
                        "L" => BasisSymbol::L(i),
                        "d" => BasisSymbol::D(i),
                        _ => BasisSymbol::H(i),
                    }
                }
                _ => unreachable!(),
            }
        }
        "c" => BasisSymbol::C,
        "z" => BasisSymbol::Z,
        "c1" => BasisSymbol::C1,
        "c2" => BasisSymbol::C2,
        "c3" => BasisSymbol::C3,
        other => return Err(cursor.err(format!("unknown symbol `{other}`"))),
    };
    algebra.admits(&sym)?;
    Ok(sym)
}

/// Parses the element grammar against an algebra, validating admissibility
/// and index parity. Canonical text round-trips through `format_element`.
pub fn parse_element(text: &str, algebra: AlgebraId) -> Result<AlgebraElement> {
    let mut cursor = Cursor::new(text);
    let mut out = AlgebraElement::zero(algebra);
    let mut first = true;
    loop {
        let sign = if first {
            1
        } else {
            match cursor.peek() {
                None => break,
                Some('+') => {
                    cursor.pos += 1;
                    1
                }
                Some('-') => {
                    cursor.pos += 1;
                    -1
                }
                Some(c) => return Err(cursor.err(format!("expected `+` or `-`, found `{c}`"))),
            }
        };
        first = false;
        // term := [ coef "*" ] sym | coef
        let (coeff, sym) = match cursor.peek() {
            Some(c) if c.is_ascii_alphabetic() => {
                let name = cursor.ident()?;
                (ScalarK::one(), Some(symbol_from_name(&mut cursor, &name, algebra)?))
            }
            Some(_) => {
                let at = cursor.col();
                let coeff = cursor.coefficient()?;
                if cursor.peek() == Some('*') {
                    cursor.pos += 1;
                    let name = cursor.ident()?;
                    (coeff, Some(symbol_from_name(&mut cursor, &name, algebra)?))
                } else if coeff.is_zero() {
                    (coeff, None)
                } else {
                    return Err(Error::Parse {
                        msg: "constant term without a symbol".into(),
                        col: at,
                    });
                }
            }
            None => return Err(cursor.err("expected a term")),
        };
        if let Some(sym) = sym {
            out.add_term(sym, &coeff * &ScalarK::from_int(sign));
        }
        if cursor.at_end() {
            break;
        }
    }
    Ok(out)
}

/// Canonical text of an element (the inverse of `parse_element` on canonical
/// input).
pub fn format_element(el: &AlgebraElement) -> String {
    el.to_string()
}

/// Parses the vector grammar (`xi(...)` symbols) against a Fock module.
pub fn parse_fock_vector(text: &str, module: &FockModule) -> Result<FockVector> {
    let mut cursor = Cursor::new(text);
    let mut out = FockVector::zero(module.clone());
    let mut first = true;
    loop {
        let sign = if first {
            1
        } else {
            match cursor.peek() {
                None => break,
                Some('+') => {
                    cursor.pos += 1;
                    1
                }
                Some('-') => {
                    cursor.pos += 1;
                    -1
                }
                Some(c) => return Err(cursor.err(format!("expected `+` or `-`, found `{c}`"))),
            }
        };
        first = false;
        let (coeff, mono) = match cursor.peek() {
            Some(c) if c.is_ascii_alphabetic() => (ScalarK::one(), Some(parse_xi(&mut cursor)?)),
            Some(_) => {
                let at = cursor.col();
                let coeff = cursor.coefficient()?;
                if cursor.peek() == Some('*') {
                    cursor.pos += 1;
                    (coeff, Some(parse_xi(&mut cursor)?))
                } else if coeff.is_zero() {
                    (coeff, None)
                } else {
                    return Err(Error::Parse {
                        msg: "constant term without a basis vector".into(),
                        col: at,
                    });
                }
            }
            None => return Err(cursor.err("expected a term")),
        };
        if let Some(mono) = mono {
            let basis = FockVector::basis(module.clone(), mono)?;
            out = out.add(&basis.scale(&(&coeff * &ScalarK::from_int(sign))))?;
        }
        if cursor.at_end() {
            break;
        }
    }
    Ok(out)
}

fn parse_xi(cursor: &mut Cursor) -> Result<Monomial> {
    let name = cursor.ident()?;
    if name != "xi" {
        return Err(cursor.err(format!("expected `xi`, found `{name}`")));
    }
    cursor.expect('(')?;
    let mut indices = Vec::new();
    if cursor.peek() != Some(')') {
        loop {
            indices.push(cursor.index()?);
            match cursor.peek() {
                Some(',') => {
                    cursor.pos += 1;
                }
                _ => break,
            }
        }
    }
    cursor.expect(')')?;
    Monomial::new(indices)
}

pub fn format_fock_vector(v: &FockVector) -> String {
    v.to_string()
}

// ---------------------------------------------------------------------------
// Module descriptors
// ---------------------------------------------------------------------------

/// JSON shape of an index set: `{"finite": [...]}` or `{"cofinite": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IndexSetDescriptor {
    Finite(Vec<i64>),
    Cofinite(Vec<i64>),
}

impl IndexSetDescriptor {
    fn to_index_set(&self) -> Result<IndexSet> {
        let build = |v: &[i64]| {
            let mut idx: Vec<HalfIndex> = v.iter().map(|i| HalfIndex::integer(*i)).collect();
            idx.sort();
            idx
        };
        match self {
            IndexSetDescriptor::Finite(v) => IndexSet::finite(build(v)),
            IndexSetDescriptor::Cofinite(v) => IndexSet::cofinite(build(v)),
        }
    }
}

/// JSON descriptor of any module the front end can address.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum ModuleDescriptor {
    #[serde(rename = "V")]
    V {
        delta: Delta,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        twist: Option<ScalarK>,
    },
    #[serde(rename = "V_I")]
    VI {
        #[serde(rename = "I")]
        reference: IndexSetDescriptor,
    },
    #[serde(rename = "V_m")]
    Vm {
        m: i64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        twist: Option<ScalarK>,
    },
    #[serde(rename = "sum")]
    Sum { parts: Vec<ModuleDescriptor> },
    #[serde(rename = "tensor")]
    Tensor {
        delta: Delta,
        sqrt_lambda: ScalarK,
        central_charge: ScalarK,
        highest_weight: ScalarK,
        depth: i64,
    },
    #[serde(rename = "omega")]
    Omega {
        delta: Delta,
        sqrt_lambda: ScalarK,
        a: ScalarK,
        b: ScalarK,
    },
    #[serde(rename = "omega_prime")]
    OmegaPrime {
        delta: Delta,
        sqrt_lambda: ScalarK,
        a: ScalarK,
        b: ScalarK,
    },
    #[serde(rename = "omega_double_prime")]
    OmegaDoublePrime {
        delta: Delta,
        sqrt_lambda: ScalarK,
        b: ScalarK,
    },
    #[serde(rename = "omega_double_prime_tilde")]
    OmegaDoublePrimeTilde {
        delta: Delta,
        sqrt_lambda: ScalarK,
        b: ScalarK,
    },
}

impl ModuleDescriptor {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::InvalidData(format!("invalid module descriptor: {e}")))
    }

    pub fn to_fock(&self) -> Result<FockModule> {
        match self {
            ModuleDescriptor::V { delta, twist } => match twist {
                Some(mu) => FockModule::v_twisted(*delta, mu.clone()),
                None => Ok(FockModule::v(*delta)),
            },
            ModuleDescriptor::VI { reference } => Ok(FockModule::v_i(reference.to_index_set()?)),
            ModuleDescriptor::Vm { m, twist } => match twist {
                Some(mu) => FockModule::v_m_twisted(*m, mu.clone()),
                None => FockModule::v_m(*m),
            },
            other => Err(Error::UnsupportedModule(format!(
                "expected a Fock module descriptor, got {}",
                other.kind_name()
            ))),
        }
    }

    pub fn to_matrix(&self) -> Result<MatrixModule> {
        match self {
            ModuleDescriptor::Vm { m, twist } => {
                let mu = twist.clone().unwrap_or_else(ScalarK::one);
                findim::build_vm(*m, &mu)
            }
            ModuleDescriptor::Sum { parts } => {
                let mut built: Option<MatrixModule> = None;
                for part in parts {
                    let next = part.to_matrix()?;
                    built = Some(match built {
                        None => next,
                        Some(acc) => acc.direct_sum(&next)?,
                    });
                }
                built.ok_or_else(|| Error::InvalidData("empty sum descriptor".into()))
            }
            other => Err(Error::UnsupportedModule(format!(
                "expected a finite-dimensional module descriptor, got {}",
                other.kind_name()
            ))),
        }
    }

    pub fn to_rank2(&self) -> Result<Rank2Family> {
        let (tag, delta, s, a, b) = match self {
            ModuleDescriptor::Omega {
                delta,
                sqrt_lambda,
                a,
                b,
            } => (Rank2Tag::Omega, *delta, sqrt_lambda, Some(a.clone()), b),
            ModuleDescriptor::OmegaPrime {
                delta,
                sqrt_lambda,
                a,
                b,
            } => (Rank2Tag::OmegaPrime, *delta, sqrt_lambda, Some(a.clone()), b),
            ModuleDescriptor::OmegaDoublePrime {
                delta,
                sqrt_lambda,
                b,
            } => (Rank2Tag::OmegaDoublePrime, *delta, sqrt_lambda, None, b),
            ModuleDescriptor::OmegaDoublePrimeTilde {
                delta,
                sqrt_lambda,
                b,
            } => (
                Rank2Tag::OmegaDoublePrimeTilde,
                *delta,
                sqrt_lambda,
                None,
                b,
            ),
            other => {
                return Err(Error::UnsupportedModule(format!(
                    "expected a rank-2 family descriptor, got {}",
                    other.kind_name()
                )))
            }
        };
        Rank2Family::new(tag, delta, s.clone(), a, b.clone())
    }

    pub fn to_tensor(&self) -> Result<TensorModule> {
        match self {
            ModuleDescriptor::Tensor {
                delta,
                sqrt_lambda,
                central_charge,
                highest_weight,
                depth,
            } => TensorModule::new(
                *delta,
                sqrt_lambda.clone(),
                VermaModule::new(central_charge.clone(), highest_weight.clone(), *depth)?,
            ),
            other => Err(Error::UnsupportedModule(format!(
                "expected a tensor module descriptor, got {}",
                other.kind_name()
            ))),
        }
    }

    fn kind_name(&self) -> &'static str {
        match self {
            ModuleDescriptor::V { .. } => "V",
            ModuleDescriptor::VI { .. } => "V_I",
            ModuleDescriptor::Vm { .. } => "V_m",
            ModuleDescriptor::Sum { .. } => "sum",
            ModuleDescriptor::Tensor { .. } => "tensor",
            ModuleDescriptor::Omega { .. } => "omega",
            ModuleDescriptor::OmegaPrime { .. } => "omega_prime",
            ModuleDescriptor::OmegaDoublePrime { .. } => "omega_double_prime",
            ModuleDescriptor::OmegaDoublePrimeTilde { .. } => "omega_double_prime_tilde",
        }
    }

    fn is_fock(&self) -> bool {
        matches!(
            self,
            ModuleDescriptor::V { .. } | ModuleDescriptor::VI { .. } | ModuleDescriptor::Vm { .. }
        )
    }
}

// ---------------------------------------------------------------------------
// Command handlers
// ---------------------------------------------------------------------------

/// Outcome of one CLI command: human text, JSON body, and whether a
/// verification failed (exit code 1).
#[derive(Debug, Clone)]
pub struct CommandOutput {
    pub text: String,
    pub json: serde_json::Value,
    pub failed: bool,
}

fn report_output(report: VerificationReport) -> CommandOutput {
    CommandOutput {
        text: report.summary(),
        json: serde_json::to_value(&report).expect("report serializes"),
        failed: !report.passed(),
    }
}

pub fn cmd_bracket(algebra: &str, x_text: &str, y_text: &str) -> Result<CommandOutput> {
    let algebra: AlgebraId = algebra.parse()?;
    let x = parse_element(x_text, algebra)?;
    let y = parse_element(y_text, algebra)?;
    let result = crate::superalg::bracket(&x, &y)?;
    let rendered = format_element(&result);
    Ok(CommandOutput {
        text: rendered.clone(),
        json: serde_json::json!({
            "algebra": algebra.to_string(),
            "x": format_element(&x),
            "y": format_element(&y),
            "result": rendered,
        }),
        failed: false,
    })
}

pub fn cmd_jacobi(algebra: &str, range: i64) -> Result<CommandOutput> {
    let algebra: AlgebraId = algebra.parse()?;
    Ok(report_output(jacobi_check(algebra, range)?))
}

pub fn cmd_act(module_text: &str, element_text: &str, vector_text: &str) -> Result<CommandOutput> {
    let desc = ModuleDescriptor::parse(module_text)?;
    if !desc.is_fock() {
        return Err(Error::UnsupportedModule(
            "act addresses Fock module descriptors (V, V_I, V_m)".into(),
        ));
    }
    let module = desc.to_fock()?;
    let algebra = match module.kind() {
        fock::FockKind::V { delta } => AlgebraId::FermionVirasoro(*delta),
        _ => AlgebraId::Fermion(Delta::Zero),
    };
    let element = parse_element(element_text, algebra)?;
    let vector = parse_fock_vector(vector_text, &module)?;
    let result = fock::act_element(&element, &vector)?;
    let rendered = format_fock_vector(&result);
    Ok(CommandOutput {
        text: rendered.clone(),
        json: serde_json::json!({
            "module": serde_json::to_value(&desc).expect("descriptor serializes"),
            "element": format_element(&element),
            "vector": format_fock_vector(&vector),
            "result": rendered,
        }),
        failed: false,
    })
}

pub fn cmd_character(delta: &str, max_n: i64) -> Result<CommandOutput> {
    let delta: Delta = delta.parse()?;
    let rows = fock::character(delta, max_n)?;
    let mut text = String::new();
    let mut json_rows = Vec::new();
    for row in &rows {
        text.push_str(&format!(
            "n={}  eigenvalue={}  dim={}\n",
            row.n, row.eigenvalue, row.dimension
        ));
        json_rows.push(serde_json::json!({
            "n": row.n.to_string(),
            "eigenvalue": row.eigenvalue.to_string(),
            "dimension": row.dimension,
        }));
    }
    Ok(CommandOutput {
        text: text.trim_end().to_string(),
        json: serde_json::json!({
            "delta": delta.to_string(),
            "max_n": max_n,
            "rows": json_rows,
        }),
        failed: false,
    })
}

pub fn cmd_verify_module(
    module_text: &str,
    index_bound: i64,
    degree_bound: i64,
) -> Result<CommandOutput> {
    let desc = ModuleDescriptor::parse(module_text)?;
    let report = match &desc {
        d if d.is_fock() => verify_module_axioms(&d.to_fock()?, index_bound, degree_bound)?,
        ModuleDescriptor::Tensor { .. } => {
            verify_module_axioms(&desc.to_tensor()?, index_bound, degree_bound)?
        }
        ModuleDescriptor::Omega { .. }
        | ModuleDescriptor::OmegaPrime { .. }
        | ModuleDescriptor::OmegaDoublePrime { .. }
        | ModuleDescriptor::OmegaDoublePrimeTilde { .. } => {
            verify_module_axioms(&desc.to_rank2()?, index_bound, degree_bound)?
        }
        ModuleDescriptor::Sum { .. } => {
            return Err(Error::UnsupportedModule(
                "sum descriptors are for decompose".into(),
            ))
        }
        _ => unreachable!(),
    };
    Ok(report_output(report))
}

pub fn cmd_classify_rank2(data_text: &str) -> Result<CommandOutput> {
    let data: Rank2Data = serde_json::from_str(data_text)
        .map_err(|e| Error::InvalidData(format!("invalid rank-2 data: {e}")))?;
    let outcome = classify_rank2(&data)?;
    let json = match &outcome {
        ClassificationOutcome::Identified {
            family,
            parity_changed,
        } => {
            let mut fam = serde_json::json!({
                "kind": family.tag.to_string(),
                "delta": family.delta.to_string(),
                "sqrt_lambda": family.sqrt_lambda.to_string(),
                "b": family.b.to_string(),
            });
            if let Some(a) = &family.a {
                fam["a"] = serde_json::Value::String(a.to_string());
            }
            serde_json::json!({
                "outcome": "identified",
                "family": fam,
                "parity_changed": parity_changed,
            })
        }
        ClassificationOutcome::OddPartDecoupled => {
            serde_json::json!({ "outcome": "odd-part-decoupled" })
        }
        ClassificationOutcome::Inconsistent { kind, detail } => serde_json::json!({
            "outcome": "inconsistent",
            "check": kind.to_string(),
            "detail": detail,
        }),
    };
    Ok(CommandOutput {
        text: outcome.to_string(),
        json,
        failed: matches!(outcome, ClassificationOutcome::Inconsistent { .. }),
    })
}

fn subspace_json(s: &Subspace) -> serde_json::Value {
    serde_json::json!({
        "dimension": s.dim(),
        "basis": s
            .basis()
            .iter()
            .map(|row| row.iter().map(|c| c.to_string()).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    })
}

pub fn cmd_decompose(module_text: &str, vector_text: &str) -> Result<CommandOutput> {
    let desc = ModuleDescriptor::parse(module_text)?;
    let module = desc.to_matrix()?;
    let coords: Vec<String> = serde_json::from_str(vector_text)
        .map_err(|e| Error::InvalidData(format!("invalid vector (expected a JSON array): {e}")))?;
    if coords.len() != module.dimension() {
        return Err(Error::InvalidData(format!(
            "vector length {} does not match dimension {}",
            coords.len(),
            module.dimension()
        )));
    }
    let v: Vec<ScalarK> = coords
        .iter()
        .map(|c| c.parse())
        .collect::<Result<_>>()?;
    let summands = findim::decompose(&module, &v)?;
    let mut text = format!("{} summand(s)\n", summands.len());
    for (i, s) in summands.iter().enumerate() {
        text.push_str(&format!("summand {}: dimension {}\n", i + 1, s.dim()));
    }
    Ok(CommandOutput {
        text: text.trim_end().to_string(),
        json: serde_json::json!({
            "module": serde_json::to_value(&desc).expect("descriptor serializes"),
            "summands": summands.iter().map(subspace_json).collect::<Vec<_>>(),
        }),
        failed: false,
    })
}

pub fn cmd_is_smooth(module_text: &str) -> Result<CommandOutput> {
    let desc = ModuleDescriptor::parse(module_text)?;
    if !desc.is_fock() {
        return Err(Error::UnsupportedModule(
            "smoothness is defined for Fock module descriptors".into(),
        ));
    }
    let module = desc.to_fock()?;
    let smooth = module.is_smooth();
    Ok(CommandOutput {
        text: smooth.to_string(),
        json: serde_json::json!({
            "module": serde_json::to_value(&desc).expect("descriptor serializes"),
            "smooth": smooth,
        }),
        failed: false,
    })
}

/// Resolves `@file` arguments to the file contents.
pub fn resolve_arg(arg: &str) -> Result<String> {
    if let Some(path) = arg.strip_prefix('@') {
        std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidData(format!("cannot read {path}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

/// Builds a rank-2 data JSON body from a family descriptor (test and
/// documentation helper).
pub fn rank2_data_json(family: &Rank2Family, window: i64) -> Result<String> {
    let data = crate::rank2::generate_rank2_data(family, window)?;
    serde_json::to_string(&data).map_err(|e| Error::Internal(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const S0: AlgebraId = AlgebraId::FermionVirasoro(Delta::Zero);
    const S12: AlgebraId = AlgebraId::FermionVirasoro(Delta::Half);

    #[test]
    fn parse_examples() {
        let el = parse_element("3/2*L_-2 + psi_1 - z", S0).unwrap();
        assert_eq!(el.terms().count(), 3);
        assert_eq!(el.coeff(&BasisSymbol::L(-2)), ScalarK::from_rat(3, 2));
        assert_eq!(el.coeff(&BasisSymbol::Z), ScalarK::from_int(-1));

        let el = parse_element("(1/2+1/2*w2)*psi_3/2", S12).unwrap();
        let want = ScalarK::new(
            Rational::new(1.into(), 2.into()),
            Rational::new(1.into(), 2.into()),
        );
        assert_eq!(el.coeff(&BasisSymbol::Psi(HalfIndex::from_twice(3))), want);

        assert!(matches!(
            parse_element("psi_1/2", S0),
            Err(Error::IndexParity { .. })
        ));
        assert!(matches!(
            parse_element("L_1/2", S0),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(parse_element("q_3", S0), Err(Error::Parse { .. })));
        assert!(matches!(parse_element("5", S0), Err(Error::Parse { .. })));
        assert!(parse_element("0", S0).unwrap().is_zero());
    }

    #[test]
    fn format_parse_round_trip() {
        let texts = [
            "4*L_0 + 1/2*c",
            "L_1",
            "-1*L_0",
            "3/2*L_-2 + psi_1 - z",
            "(0+1*w2)*psi_0",
            "(1/2-3/4*w2)*L_2 + z",
            "psi_-3/2 + psi_3/2",
            "0",
        ];
        for t in texts {
            let algebra = if t.contains("3/2*psi") || t.contains("psi_-3/2") {
                S12
            } else {
                S0
            };
            let el = parse_element(t, algebra).unwrap();
            assert_eq!(format_element(&el), t, "round trip of `{t}`");
        }
    }

    #[test]
    fn parse_error_columns() {
        match parse_element("L_2 + + z", S0) {
            Err(Error::Parse { col, .. }) => assert_eq!(col, 7),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn vector_round_trip() {
        let module = FockModule::v(Delta::Zero);
        for t in ["xi()", "xi(0,2)", "-1*xi(0,1,3) + 2*xi(1)", "(0+1/2*w2)*xi(0)"] {
            let v = parse_fock_vector(t, &module).unwrap();
            assert_eq!(format_fock_vector(&v), t, "round trip of `{t}`");
        }
        assert!(parse_fock_vector("xi(1,1)", &module).is_err());
        assert!(parse_fock_vector("xi(1/2)", &module).is_err());
    }

    #[test]
    fn descriptor_parsing() {
        let d = ModuleDescriptor::parse(r#"{"kind":"V","delta":"0","twist":"2"}"#).unwrap();
        let module = d.to_fock().unwrap();
        assert_eq!(module.level(), ScalarK::from_int(4));

        let d = ModuleDescriptor::parse(r#"{"kind":"V_I","I":{"cofinite":[0]}}"#).unwrap();
        assert!(!d.to_fock().unwrap().is_smooth());

        let d = ModuleDescriptor::parse(r#"{"kind":"V_m","m":2}"#).unwrap();
        assert_eq!(d.to_matrix().unwrap().dimension(), 8);

        let d = ModuleDescriptor::parse(
            r#"{"kind":"omega","delta":"1/2","sqrt_lambda":"2","a":"0","b":"1"}"#,
        )
        .unwrap();
        assert_eq!(d.to_rank2().unwrap().lambda(), ScalarK::from_int(4));

        assert!(ModuleDescriptor::parse(r#"{"kind":"bogus"}"#).is_err());
    }

    #[test]
    fn bracket_command_output() {
        let out = cmd_bracket("s0", "L_2", "L_-2").unwrap();
        assert_eq!(out.text, "4*L_0 + 1/2*c");
        assert!(!out.failed);
        assert_eq!(out.json["result"], "4*L_0 + 1/2*c");
    }

    #[test]
    fn jacobi_command_output() {
        let out = cmd_jacobi("s0", 2).unwrap();
        assert!(!out.failed);
        assert_eq!(out.json["status"], "pass");
    }

    #[test]
    fn act_command_output() {
        let out = cmd_act(r#"{"kind":"V","delta":"0"}"#, "psi_0", "xi()").unwrap();
        assert_eq!(out.text, "(0+1/2*w2)*xi(0)");
    }

    #[test]
    fn character_command_output() {
        let out = cmd_character("0", 5).unwrap();
        let dims: Vec<u64> = out.json["rows"]
            .as_array()
            .unwrap()
            .iter()
            .map(|r| r["dimension"].as_u64().unwrap())
            .collect();
        assert_eq!(dims, vec![2, 2, 2, 4, 4, 6]);
    }

    #[test]
    fn classify_command_round_trip() {
        let fam = Rank2Family::new(
            Rank2Tag::OmegaPrime,
            Delta::Zero,
            ScalarK::one(),
            Some(ScalarK::zero()),
            ScalarK::one(),
        )
        .unwrap();
        let body = rank2_data_json(&fam, 4).unwrap();
        let out = cmd_classify_rank2(&body).unwrap();
        assert!(!out.failed);
        assert_eq!(out.json["outcome"], "identified");
        assert_eq!(out.json["family"]["kind"], "omega_prime");
    }

    #[test]
    fn decompose_command_output() {
        let module = r#"{"kind":"sum","parts":[{"kind":"V_m","m":1},{"kind":"V_m","m":1}]}"#;
        let vector = r#"["1","0","0","0","1","0","0","0"]"#;
        let out = cmd_decompose(module, vector).unwrap();
        let summands = out.json["summands"].as_array().unwrap();
        let total: u64 = summands
            .iter()
            .map(|s| s["dimension"].as_u64().unwrap())
            .sum();
        assert_eq!(total, 4);
    }

    #[test]
    fn is_smooth_command_output() {
        let out = cmd_is_smooth(r#"{"kind":"V_I","I":{"cofinite":[]}}"#).unwrap();
        assert_eq!(out.text, "false");
        assert_eq!(out.json["smooth"], false);
    }

    #[test]
    fn verify_module_command_dispatch() {
        let out = cmd_verify_module(r#"{"kind":"V","delta":"0"}"#, 2, 3).unwrap();
        assert!(!out.failed);
        let out = cmd_verify_module(
            r#"{"kind":"omega_double_prime","delta":"0","sqrt_lambda":"1","b":"1"}"#,
            2,
            2,
        )
        .unwrap();
        assert!(!out.failed);
    }

    #[test]
    fn rank2_data_serde_round_trip() {
        let fam = Rank2Family::new(
            Rank2Tag::OmegaDoublePrimeTilde,
            Delta::Half,
            ScalarK::from_int(2),
            None,
            ScalarK::from_int(2),
        )
        .unwrap();
        let data = crate::rank2::generate_rank2_data(&fam, 3).unwrap();
        let text = serde_json::to_string(&data).unwrap();
        let back: Rank2Data = serde_json::from_str(&text).unwrap();
        assert_eq!(back, data);
    }

    #[test]
    fn descriptor_serde_uses_spec_shapes() {
        // The documented JSON forms parse and re-serialize identically.
        for text in [
            r#"{"kind":"V","delta":"0","twist":"2"}"#,
            r#"{"kind":"V_I","I":{"finite":[1,4]}}"#,
            r#"{"kind":"V_I","I":{"cofinite":[0]}}"#,
            r#"{"kind":"V_m","m":2}"#,
        ] {
            let d = ModuleDescriptor::parse(text).unwrap();
            let back = serde_json::to_string(&d).unwrap();
            assert_eq!(back, text);
        }
    }
}
