//! Virasoro modules: the rank-1 polynomial module, truncated highest-weight
//! modules with exact straightening into the ordered-monomial basis, and
//! tensor products of a twisted Fock factor with a highest-weight factor.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::fock::{self, FockModule, FockVector, Monomial};
use crate::scalar::ScalarK;
use crate::superalg::{AlgebraElement, AlgebraId, BasisSymbol, Delta, Parity};

/// Dense univariate polynomial over K, coefficients ascending, no trailing
/// zeros (the zero polynomial stores nothing).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    coeffs: Vec<ScalarK>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: ScalarK) -> Self {
        Poly::from_coeffs(vec![c])
    }

    pub fn one() -> Self {
        Poly::constant(ScalarK::one())
    }

    /// The variable itself.
    pub fn x() -> Self {
        Poly::from_coeffs(vec![ScalarK::zero(), ScalarK::one()])
    }

    /// x + c.
    pub fn x_plus(c: ScalarK) -> Self {
        Poly::from_coeffs(vec![c, ScalarK::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<ScalarK>) -> Self {
        while coeffs.last().is_some_and(ScalarK::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[ScalarK] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> ScalarK {
        self.coeffs.get(i).cloned().unwrap_or_else(ScalarK::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> Option<&ScalarK> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (long, short) = if self.coeffs.len() >= other.coeffs.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = long.coeffs.clone();
        for (i, c) in short.coeffs.iter().enumerate() {
            out[i] = &out[i] + c;
        }
        Poly::from_coeffs(out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&ScalarK::from_int(-1)))
    }

    pub fn scale(&self, k: &ScalarK) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        if k.is_one() {
            return self.clone();
        }
        Poly::from_coeffs(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![ScalarK::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::from_coeffs(out)
    }

    /// f(x + c), by Horner evaluation in the shifted variable.
    pub fn shift(&self, c: &ScalarK) -> Poly {
        if c.is_zero() || self.is_zero() {
            return self.clone();
        }
        // out <- out * (x + c) + a, done in place.
        let mut out: Vec<ScalarK> = Vec::with_capacity(self.coeffs.len());
        for a in self.coeffs.iter().rev() {
            out.push(ScalarK::zero());
            for i in (0..out.len() - 1).rev() {
                let scaled = &out[i] * c;
                out[i + 1] = &out[i + 1] + &out[i];
                out[i] = scaled;
            }
            out[0] = &out[0] + a;
        }
        Poly::from_coeffs(out)
    }

    pub fn eval(&self, x: &ScalarK) -> ScalarK {
        let mut acc = ScalarK::zero();
        for a in self.coeffs.iter().rev() {
            acc = &(&acc * x) + a;
        }
        acc
    }

    /// Exact roots for degree <= 2; `None` when a needed square root does not
    /// exist in K (or the degree exceeds 2). Double roots are listed twice.
    pub fn roots_deg_le2(&self) -> Option<Vec<ScalarK>> {
        match self.degree() {
            None => Some(Vec::new()),
            Some(0) => Some(Vec::new()),
            Some(1) => {
                let root = (-&self.coeff(0)).div(&self.coeff(1)).expect("leading nonzero");
                Some(vec![root])
            }
            Some(2) => {
                let a = self.coeff(2);
                let b = self.coeff(1);
                let c = self.coeff(0);
                let disc = &(&b * &b) - &(&(&ScalarK::from_int(4) * &a) * &c);
                let s = disc.sqrt()?;
                let two_a = &ScalarK::from_int(2) * &a;
                let r1 = (&(-&b) + &s).div(&two_a).expect("leading nonzero");
                let r2 = (&(-&b) - &s).div(&two_a).expect("leading nonzero");
                let mut roots = vec![r1, r2];
                roots.sort();
                Some(roots)
            }
            Some(_) => None,
        }
    }

    pub fn display_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let first = out.is_empty();
            let (sign_str, body) = if c.is_rational() && c.is_negative() {
                ("-", -c)
            } else {
                ("+", c.clone())
            };
            if first {
                if sign_str == "-" {
                    out.push('-');
                }
            } else {
                out.push_str(if sign_str == "-" { " - " } else { " + " });
            }
            let coeff_str = if body.is_rational() {
                body.to_string()
            } else {
                format!("({body})")
            };
            match i {
                0 => out.push_str(&coeff_str),
                _ => {
                    if !body.is_one() || !body.is_rational() {
                        out.push_str(&coeff_str);
                        out.push('*');
                    }
                    if i == 1 {
                        out.push_str(var);
                    } else {
                        out.push_str(&format!("{var}^{i}"));
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with("t"))
    }
}

impl serde::Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serde::Serialize::serialize(&self.coeffs, s)
    }
}

impl<'de> serde::Deserialize<'de> for Poly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let coeffs = Vec::<ScalarK>::deserialize(d)?;
        Ok(Poly::from_coeffs(coeffs))
    }
}

/// The rank-1 polynomial module action: L_m . f(x) = lambda^m (x + m a) f(x + m),
/// with the central element acting as zero.
pub fn omega_act(m: i64, f: &Poly, lambda: &ScalarK, a: &ScalarK) -> Result<Poly> {
    if lambda.is_zero() {
        return Err(Error::ZeroLambda);
    }
    let lm = lambda.pow(m)?;
    let prefactor = Poly::x_plus(&ScalarK::from_int(m) * a);
    Ok(prefactor.mul(&f.shift(&ScalarK::from_int(m))).scale(&lm))
}

/// Weakly decreasing list of positive integers; the ordered-monomial label
/// L_{-p1} ... L_{-pk} applied to the highest-weight vector.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Partition(Vec<i64>);

impl Partition {
    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn new(parts: Vec<i64>) -> Result<Self> {
        if parts.iter().any(|p| *p <= 0) {
            return Err(Error::InvalidData("partition parts must be positive".into()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidData(
                "partition parts must be weakly decreasing".into(),
            ));
        }
        Ok(Partition(parts))
    }

    pub fn parts(&self) -> &[i64] {
        &self.0
    }

    pub fn weight(&self) -> i64 {
        self.0.iter().sum()
    }

    /// All partitions of weight <= bound, ascending by (weight, lex).
    pub fn up_to_weight(bound: i64) -> Vec<Partition> {
        fn gen(remaining: i64, max_part: i64, prefix: &mut Vec<i64>, out: &mut Vec<Partition>) {
            out.push(Partition(prefix.clone()));
            for p in (1..=max_part.min(remaining)).rev() {
                prefix.push(p);
                gen(remaining - p, p, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if bound >= 0 {
            gen(bound, bound, &mut Vec::new(), &mut out);
        }
        out.sort_by_key(|p| (p.weight(), p.0.clone()));
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "v");
        }
        let labels: Vec<String> = self.0.iter().map(|p| format!("L_-{p}")).collect();
        write!(f, "{} v", labels.join(" "))
    }
}

impl serde::Serialize for Partition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serde::Serialize::serialize(&self.0, s)
    }
}

impl<'de> serde::Deserialize<'de> for Partition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<i64>::deserialize(d)?;
        Partition::new(parts).map_err(serde::de::Error::custom)
    }
}

/// Truncated highest-weight module data: central charge, highest weight, and
/// the weight cutoff beyond which monomials are dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VermaModule {
    pub central_charge: ScalarK,
    pub highest_weight: ScalarK,
    pub depth: i64,
}

impl VermaModule {
    pub fn new(central_charge: ScalarK, highest_weight: ScalarK, depth: i64) -> Result<Self> {
        if depth < 1 {
            return Err(Error::InvalidBound(format!("depth must be >= 1, got {depth}")));
        }
        Ok(VermaModule {
            central_charge,
            highest_weight,
            depth,
        })
    }
}

/// Vector of a truncated highest-weight module. `truncated` records whether
/// any monomial was dropped by the weight cutoff while producing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VermaVector {
    module: VermaModule,
    terms: BTreeMap<Partition, ScalarK>,
    truncated: bool,
}

impl VermaVector {
    pub fn zero(module: VermaModule) -> Self {
        VermaVector {
            module,
            terms: BTreeMap::new(),
            truncated: false,
        }
    }

    pub fn highest_weight_vector(module: VermaModule) -> Self {
        let mut v = VermaVector::zero(module);
        v.add_term(Partition::empty(), ScalarK::one());
        v
    }

    pub fn basis(module: VermaModule, partition: Partition) -> Result<Self> {
        if partition.weight() > module.depth {
            return Err(Error::InvalidBound(format!(
                "partition weight {} exceeds depth {}",
                partition.weight(),
                module.depth
            )));
        }
        let mut v = VermaVector::zero(module);
        v.add_term(partition, ScalarK::one());
        Ok(v)
    }

    pub fn module(&self) -> &VermaModule {
        &self.module
    }

    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &ScalarK)> {
        self.terms.iter()
    }

    pub fn coeff(&self, p: &Partition) -> ScalarK {
        self.terms.get(p).cloned().unwrap_or_else(ScalarK::zero)
    }

    pub fn add_term(&mut self, p: Partition, coeff: ScalarK) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(p.clone()).or_insert_with(ScalarK::zero);
        *entry = &*entry + &coeff;
        if entry.is_zero() {
            self.terms.remove(&p);
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.module != other.module {
            return Err(Error::ModuleMismatch);
        }
        let mut out = self.clone();
        out.truncated |= other.truncated;
        for (p, c) in other.terms() {
            out.add_term(p.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, k: &ScalarK) -> Self {
        let mut out = VermaVector::zero(self.module.clone());
        out.truncated = self.truncated;
        for (p, c) in self.terms() {
            out.add_term(p.clone(), c * k);
        }
        out
    }
}

impl fmt::Display for VermaVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rendered =
            crate::scalar::format_terms(self.terms().map(|(p, c)| (c.clone(), format!("[{p}]"))));
        write!(f, "{rendered}")
    }
}

fn virasoro_central(m: i64) -> ScalarK {
    let mb = BigInt::from(m);
    ScalarK::from_rational(BigRational::new(&mb * &mb * &mb - &mb, BigInt::from(12)))
}

/// Straightens the word L_{w[0]} ... L_{w[n-1]} v into the ordered-monomial
/// basis. Index sums are preserved by every rewrite, so all surviving
/// monomials share the weight -sum(w); if that exceeds the depth the whole
/// word is dropped and the truncation flag raised.
///
/// Rewrites: a trailing positive index kills the highest-weight vector, a
/// trailing zero is absorbed as the highest weight, and an adjacent inversion
/// L_a L_b with a > b becomes L_b L_a + (a-b) L_{a+b} plus the central term
/// when a + b = 0. Each rewrite lowers (length, inversions) lexicographically,
/// so the loop terminates; since the rewrites are exactly the defining
/// relations, any rewriting order yields the same normal form.
pub fn straighten_word(module: &VermaModule, word: &[i64]) -> (BTreeMap<Partition, ScalarK>, bool) {
    let mut out: BTreeMap<Partition, ScalarK> = BTreeMap::new();
    let weight: i64 = -word.iter().sum::<i64>();
    if weight > module.depth {
        return (out, true);
    }
    let mut stack: Vec<(ScalarK, Vec<i64>)> = vec![(ScalarK::one(), word.to_vec())];
    while let Some((mut c, mut w)) = stack.pop() {
        loop {
            match w.last().copied() {
                None => {
                    let entry = out.entry(Partition::empty()).or_insert_with(ScalarK::zero);
                    *entry = &*entry + &c;
                    if entry.is_zero() {
                        out.remove(&Partition::empty());
                    }
                    break;
                }
                Some(a) if a > 0 => break,
                Some(0) => {
                    c = &c * &module.highest_weight;
                    w.pop();
                }
                Some(_) => {
                    // Trailing index negative: reduce the rightmost adjacent
                    // inversion, if any.
                    let inv = (0..w.len().saturating_sub(1)).rev().find(|&i| w[i] > w[i + 1]);
                    match inv {
                        Some(i) => {
                            let (a, b) = (w[i], w[i + 1]);
                            let mut fused = w.clone();
                            fused[i] = a + b;
                            fused.remove(i + 1);
                            stack.push((&c * &ScalarK::from_int(a - b), fused));
                            if a + b == 0 {
                                let mut dropped = w.clone();
                                dropped.remove(i + 1);
                                dropped.remove(i);
                                let cc = &(&c * &virasoro_central(a)) * &module.central_charge;
                                stack.push((cc, dropped));
                            }
                            w.swap(i, i + 1);
                        }
                        None => {
                            // Weakly ascending with a negative last entry:
                            // every entry is negative, an ordered monomial
                            // L_{w0} ... L_{wk} v with -w0 >= ... >= -wk.
                            let parts: Vec<i64> = w.iter().map(|a| -a).collect();
                            let p = Partition::new(parts).expect("ordered negative word");
                            let entry = out.entry(p.clone()).or_insert_with(ScalarK::zero);
                            *entry = &*entry + &c;
                            if entry.is_zero() {
                                out.remove(&p);
                            }
                            break;
                        }
                    }
                }
            }
        }
    }
    (out, false)
}

/// Applies a Virasoro element (L_m and c symbols) to a truncated
/// highest-weight vector by straightening.
pub fn verma_act(x: &AlgebraElement, v: &VermaVector) -> Result<VermaVector> {
    if x.algebra() != AlgebraId::Vir {
        return Err(Error::UnsupportedModule(format!(
            "highest-weight action takes vir elements, got {}",
            x.algebra()
        )));
    }
    let mut out = VermaVector::zero(v.module.clone());
    out.truncated = v.truncated;
    for (sym, coeff) in x.terms() {
        match sym {
            BasisSymbol::C => {
                out = out.add(&v.scale(&(coeff * &v.module.central_charge)))?;
            }
            BasisSymbol::L(m) => {
                for (p, pc) in v.terms() {
                    let mut word = Vec::with_capacity(p.parts().len() + 1);
                    word.push(*m);
                    word.extend(p.parts().iter().map(|q| -q));
                    let (terms, truncated) = straighten_word(&v.module, &word);
                    out.truncated |= truncated;
                    for (q, qc) in terms {
                        out.add_term(q, &(coeff * pc) * &qc);
                    }
                }
            }
            other => {
                return Err(Error::UnsupportedModule(format!(
                    "{other} is not a vir symbol"
                )))
            }
        }
    }
    Ok(out)
}

/// Tensor module of a twisted Fock factor with a truncated highest-weight
/// factor. The twist is the supplied square root of the level; z acts as its
/// square and c as 1/2 plus the highest-weight factor's central charge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorModule {
    pub delta: Delta,
    pub sqrt_lambda: ScalarK,
    pub verma: VermaModule,
}

impl TensorModule {
    pub fn new(delta: Delta, sqrt_lambda: ScalarK, verma: VermaModule) -> Result<Self> {
        if sqrt_lambda.is_zero() {
            return Err(Error::ZeroTwist);
        }
        Ok(TensorModule {
            delta,
            sqrt_lambda,
            verma,
        })
    }

    pub fn level(&self) -> ScalarK {
        &self.sqrt_lambda * &self.sqrt_lambda
    }

    pub fn central_scalar(&self) -> ScalarK {
        &ScalarK::from_rat(1, 2) + &self.verma.central_charge
    }

    fn fock_module(&self) -> FockModule {
        FockModule::v_twisted(self.delta, self.sqrt_lambda.clone())
            .expect("sqrt_lambda validated nonzero")
    }
}

/// Vector of a tensor module, indexed by (Fock monomial, ordered monomial).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorVector {
    module: TensorModule,
    terms: BTreeMap<(Monomial, Partition), ScalarK>,
    truncated: bool,
}

impl TensorVector {
    pub fn zero(module: TensorModule) -> Self {
        TensorVector {
            module,
            terms: BTreeMap::new(),
            truncated: false,
        }
    }

    pub fn basis(module: TensorModule, mono: Monomial, partition: Partition) -> Result<Self> {
        if partition.weight() > module.verma.depth {
            return Err(Error::InvalidBound(format!(
                "partition weight {} exceeds depth {}",
                partition.weight(),
                module.verma.depth
            )));
        }
        let mut v = TensorVector::zero(module);
        v.add_term((mono, partition), ScalarK::one());
        Ok(v)
    }

    pub fn module(&self) -> &TensorModule {
        &self.module
    }

    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Monomial, Partition), &ScalarK)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, key: (Monomial, Partition), coeff: ScalarK) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(key.clone()).or_insert_with(ScalarK::zero);
        *entry = &*entry + &coeff;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.module != other.module {
            return Err(Error::ModuleMismatch);
        }
        let mut out = self.clone();
        out.truncated |= other.truncated;
        for (k, c) in other.terms() {
            out.add_term(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&ScalarK::from_int(-1)))
    }

    pub fn scale(&self, k: &ScalarK) -> Self {
        let mut out = TensorVector::zero(self.module.clone());
        out.truncated = self.truncated;
        for (key, c) in self.terms() {
            out.add_term(key.clone(), c * k);
        }
        out
    }

    /// Parity of the Fock factor (the highest-weight factor is purely even).
    pub fn parity(&self) -> Option<Parity> {
        let mut seen: Option<Parity> = None;
        for ((m, _), _) in self.terms() {
            match seen {
                None => seen = Some(m.parity()),
                Some(p) if p == m.parity() => {}
                Some(_) => return None,
            }
        }
        Some(seen.unwrap_or(Parity::Even))
    }
}

impl fmt::Display for TensorVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rendered = crate::scalar::format_terms(
            self.terms()
                .map(|((m, p), c)| (c.clone(), format!("{m}(x)[{p}]"))),
        );
        write!(f, "{rendered}")
    }
}

/// Action of a fermion-Virasoro element on a tensor vector: psi_r acts on the
/// Fock factor with the twist, L_m acts as the normal-ordered operator on the
/// Fock factor plus the straightened action on the highest-weight factor,
/// z acts as the level and c as 1/2 plus the factor's central charge.
pub fn tensor_act(x: &AlgebraElement, w: &TensorVector) -> Result<TensorVector> {
    let module = w.module().clone();
    match x.algebra() {
        AlgebraId::FermionVirasoro(d) if d == module.delta => {}
        other => {
            return Err(Error::UnsupportedModule(format!(
                "{other} does not act on this tensor module"
            )))
        }
    }
    let fock_module = module.fock_module();
    let mut out = TensorVector::zero(module.clone());
    out.truncated = w.truncated;
    for (sym, coeff) in x.terms() {
        match sym {
            BasisSymbol::Psi(r) => {
                for ((mono, p), c) in w.terms() {
                    let single = FockVector::basis(fock_module.clone(), mono.clone())?;
                    let moved = fock::psi_act(*r, &single)?;
                    for (m2, c2) in moved.terms() {
                        out.add_term((m2.clone(), p.clone()), &(coeff * c) * c2);
                    }
                }
            }
            BasisSymbol::L(m) => {
                for ((mono, p), c) in w.terms() {
                    let single = FockVector::basis(fock_module.clone(), mono.clone())?;
                    let moved = fock::lbar_act(*m, &single)?;
                    for (m2, c2) in moved.terms() {
                        out.add_term((m2.clone(), p.clone()), &(coeff * c) * c2);
                    }
                    let mut word = Vec::with_capacity(p.parts().len() + 1);
                    word.push(*m);
                    word.extend(p.parts().iter().map(|q| -q));
                    let (terms, truncated) = straighten_word(&module.verma, &word);
                    out.truncated |= truncated;
                    for (q, qc) in terms {
                        out.add_term((mono.clone(), q), &(coeff * c) * &qc);
                    }
                }
            }
            BasisSymbol::C => {
                out = out.add(&w.scale(&(coeff * &module.central_scalar())))?;
            }
            BasisSymbol::Z => {
                out = out.add(&w.scale(&(coeff * &module.level())))?;
            }
            other => {
                return Err(Error::UnsupportedModule(format!(
                    "{other} does not act on tensor modules"
                )))
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superalg::HalfIndex;

    fn k(n: i64) -> ScalarK {
        ScalarK::from_int(n)
    }

    fn vir_l(m: i64) -> AlgebraElement {
        AlgebraElement::from_symbol(AlgebraId::Vir, BasisSymbol::L(m)).unwrap()
    }

    fn s_sym(delta: Delta, sym: BasisSymbol) -> AlgebraElement {
        AlgebraElement::from_symbol(AlgebraId::FermionVirasoro(delta), sym).unwrap()
    }

    #[test]
    fn poly_shift_and_roots() {
        // (x+1)(x+3) = x^2 + 4x + 3
        let f = Poly::x_plus(k(1)).mul(&Poly::x_plus(k(3)));
        assert_eq!(f.coeffs(), &[k(3), k(4), k(1)]);
        assert_eq!(f.roots_deg_le2(), Some(vec![k(-3), k(-1)]));
        // shift by 2: (x+3)(x+5)
        let g = f.shift(&k(2));
        assert_eq!(g, Poly::x_plus(k(3)).mul(&Poly::x_plus(k(5))));
        // irrational-outside-K discriminant
        let h = Poly::from_coeffs(vec![k(-3), k(0), k(1)]); // x^2 - 3
        assert_eq!(h.roots_deg_le2(), None);
        // x^2 - 2 factors through sqrt2
        let r = Poly::from_coeffs(vec![k(-2), k(0), k(1)]);
        assert_eq!(
            r.roots_deg_le2(),
            Some(vec![-&ScalarK::sqrt2(), ScalarK::sqrt2()])
        );
    }

    #[test]
    fn poly_display() {
        let f = Poly::from_coeffs(vec![k(3), k(-4), k(1)]);
        assert_eq!(f.display_with("t"), "t^2 - 4*t + 3");
        assert_eq!(Poly::zero().display_with("t"), "0");
        assert_eq!(Poly::constant(k(-2)).display_with("t"), "-2");
        let g = Poly::from_coeffs(vec![ScalarK::sqrt2(), k(1)]);
        assert_eq!(g.display_with("x1"), "x1 + (0+1*w2)");
    }

    #[test]
    fn omega_examples() {
        assert_eq!(
            omega_act(1, &Poly::one(), &k(1), &k(3)).unwrap(),
            Poly::x_plus(k(3))
        );
        let f = Poly::x_plus(k(7)).mul(&Poly::x());
        assert_eq!(omega_act(0, &f, &k(5), &k(2)).unwrap(), Poly::x().mul(&f));
        // m=-1, f=x, lambda=2, a=0 -> (1/2) x (x-1)
        assert_eq!(
            omega_act(-1, &Poly::x(), &k(2), &k(0)).unwrap(),
            Poly::x().mul(&Poly::x_plus(k(-1))).scale(&ScalarK::from_rat(1, 2))
        );
        assert_eq!(
            omega_act(1, &Poly::one(), &ScalarK::zero(), &k(0)),
            Err(Error::ZeroLambda)
        );
    }

    #[test]
    fn omega_is_a_module() {
        // (L_m L_n - L_n L_m - [L_m, L_n]) f = 0; the central part acts as 0.
        let lambda = ScalarK::from_rat(3, 2);
        let a = ScalarK::new(
            BigRational::new(BigInt::from(1), BigInt::from(2)),
            BigRational::new(BigInt::from(1), BigInt::from(1)),
        );
        for m in -5..=5i64 {
            for n in -5..=5i64 {
                for d in 0..=6usize {
                    let mut cs = vec![ScalarK::zero(); d + 1];
                    cs[d] = ScalarK::one();
                    if d > 0 {
                        cs[0] = k(2);
                    }
                    let f = Poly::from_coeffs(cs);
                    let lhs = omega_act(m, &omega_act(n, &f, &lambda, &a).unwrap(), &lambda, &a)
                        .unwrap()
                        .sub(&omega_act(n, &omega_act(m, &f, &lambda, &a).unwrap(), &lambda, &a).unwrap());
                    let rhs = omega_act(m + n, &f, &lambda, &a).unwrap().scale(&k(m - n));
                    assert_eq!(lhs, rhs, "module relation at m={m}, n={n}, deg={d}");
                }
            }
        }
    }

    fn module(cc: i64, h: (i64, i64), depth: i64) -> VermaModule {
        VermaModule::new(k(cc), ScalarK::from_rat(h.0, h.1), depth).unwrap()
    }

    #[test]
    fn verma_examples() {
        let m = module(1, (1, 2), 6);
        let hw = VermaVector::highest_weight_vector(m.clone());
        // L_0 v = h v
        assert_eq!(
            verma_act(&vir_l(0), &hw).unwrap(),
            hw.scale(&ScalarK::from_rat(1, 2))
        );
        // L_1 L_{-1} v = 2h v
        let lm1 = verma_act(&vir_l(-1), &hw).unwrap();
        assert_eq!(verma_act(&vir_l(1), &lm1).unwrap(), hw.scale(&k(1)));
        // L_2 L_{-2} v = (4h + cc/2) v
        let lm2 = verma_act(&vir_l(-2), &hw).unwrap();
        assert_eq!(
            verma_act(&vir_l(2), &lm2).unwrap(),
            hw.scale(&ScalarK::from_rat(5, 2))
        );
    }

    #[test]
    fn verma_relations_on_safe_window() {
        let m = module(1, (1, 2), 6);
        for a in -4..=4i64 {
            for b in -4..=4i64 {
                let safe = m.depth - a.abs() - b.abs();
                if safe < 0 {
                    continue;
                }
                for p in Partition::up_to_weight(safe) {
                    let u = VermaVector::basis(m.clone(), p).unwrap();
                    let lhs = verma_act(&vir_l(a), &verma_act(&vir_l(b), &u).unwrap())
                        .unwrap()
                        .add(
                            &verma_act(&vir_l(b), &verma_act(&vir_l(a), &u).unwrap())
                                .unwrap()
                                .scale(&k(-1)),
                        )
                        .unwrap();
                    let mut rhs = verma_act(&vir_l(a + b), &u).unwrap().scale(&k(a - b));
                    if a + b == 0 {
                        rhs = rhs
                            .add(&u.scale(&(&virasoro_central(a) * &m.central_charge)))
                            .unwrap();
                    }
                    assert!(!lhs.truncated(), "window not truncation-safe at ({a},{b})");
                    assert_eq!(lhs, rhs, "commutator at ({a},{b})");
                }
            }
        }
    }

    #[test]
    fn straightening_is_order_independent() {
        // Composing single-generator actions must agree with straightening
        // the whole word at once, wherever no truncation occurs.
        let m = module(2, (1, 3), 8);
        let samples: Vec<Vec<i64>> = vec![
            vec![1, -2, -1],
            vec![2, -1, -1, -2],
            vec![-1, 2, -3],
            vec![0, -2, 1, -1],
            vec![3, -1, -2],
        ];
        for word in samples {
            let (oneshot, trunc) = straighten_word(&m, &word);
            assert!(!trunc);
            let mut v = VermaVector::highest_weight_vector(m.clone());
            for idx in word.iter().rev() {
                v = verma_act(&vir_l(*idx), &v).unwrap();
            }
            assert!(!v.truncated());
            let got: Vec<(Partition, ScalarK)> =
                v.terms().map(|(p, c)| (p.clone(), c.clone())).collect();
            let want: Vec<(Partition, ScalarK)> = oneshot.into_iter().collect();
            assert_eq!(got, want, "word {word:?}");
        }
    }

    #[test]
    fn truncation_is_flagged() {
        let m = module(0, (0, 1), 3);
        let hw = VermaVector::highest_weight_vector(m.clone());
        let deep = verma_act(&vir_l(-2), &verma_act(&vir_l(-2), &hw).unwrap()).unwrap();
        assert!(deep.truncated());
        assert!(deep.is_zero());
    }

    fn tensor(delta: Delta, s: i64, cc: i64, h: (i64, i64)) -> TensorModule {
        TensorModule::new(delta, k(s), module(cc, h, 6)).unwrap()
    }

    #[test]
    fn tensor_examples() {
        let t = tensor(Delta::Zero, 2, 1, (0, 1));
        let top = TensorVector::basis(t.clone(), Monomial::empty(), Partition::empty()).unwrap();
        // z . (1 (x) v) = lambda = 4
        let z = s_sym(Delta::Zero, BasisSymbol::Z);
        assert_eq!(tensor_act(&z, &top).unwrap(), top.scale(&k(4)));
        // c . (1 (x) v) = (1/2 + 1) = 3/2
        let c = s_sym(Delta::Zero, BasisSymbol::C);
        assert_eq!(
            tensor_act(&c, &top).unwrap(),
            top.scale(&ScalarK::from_rat(3, 2))
        );
        // L_0 . (xi_1 (x) v) with h = 0: eigenvalue 1/16 + 1.
        let t0 = tensor(Delta::Zero, 2, 1, (0, 1));
        let xi1 = TensorVector::basis(
            t0.clone(),
            Monomial::new(vec![HalfIndex::integer(1)]).unwrap(),
            Partition::empty(),
        )
        .unwrap();
        let l0 = s_sym(Delta::Zero, BasisSymbol::L(0));
        assert_eq!(
            tensor_act(&l0, &xi1).unwrap(),
            xi1.scale(&ScalarK::from_rat(17, 16))
        );
    }

    #[test]
    fn tensor_weight_compatibility() {
        // L_0-eigenvalue of xi_J (x) monomial = (1-2delta)/16 + sum J + h + weight.
        let t = tensor(Delta::Half, 1, 0, (1, 2));
        let l0 = s_sym(Delta::Half, BasisSymbol::L(0));
        let mono = Monomial::new(vec![HalfIndex::from_twice(1), HalfIndex::from_twice(5)]).unwrap();
        let p = Partition::new(vec![2, 1]).unwrap();
        let v = TensorVector::basis(t, mono, p).unwrap();
        // 0 + 3 + 1/2 + 3 = 13/2
        assert_eq!(
            tensor_act(&l0, &v).unwrap(),
            v.scale(&ScalarK::from_rat(13, 2))
        );
    }
}
