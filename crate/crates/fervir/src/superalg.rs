//! The four algebras, their structure constants, bracket evaluation, the
//! graded Jacobi sweep and the twist automorphism.
//!
//! Basis symbols carry their index; elements are finite maps from symbols to
//! scalars. Half-integer indices are stored doubled so that all index
//! arithmetic stays in the integers.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::report::{Counts, Status, VerificationReport, Witness};
use crate::scalar::{format_terms, ScalarK};

/// delta selects between integer and strictly half-integer fermion indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Delta {
    Zero,
    Half,
}

impl Delta {
    /// Residue of 2*index modulo 2 on this grid.
    pub fn twice_offset(self) -> i64 {
        match self {
            Delta::Zero => 0,
            Delta::Half => 1,
        }
    }

    pub fn contains(self, index: HalfIndex) -> bool {
        index.twice().rem_euclid(2) == self.twice_offset()
    }

    /// All grid indices r with |r| <= bound, ascending.
    pub fn grid(self, bound: i64) -> Vec<HalfIndex> {
        let mut out = Vec::new();
        for twice in -2 * bound..=2 * bound {
            if twice.rem_euclid(2) == self.twice_offset() {
                out.push(HalfIndex::from_twice(twice));
            }
        }
        out
    }

    /// The constant (1 - 2*delta)/16.
    pub fn vacuum_energy(self) -> ScalarK {
        match self {
            Delta::Zero => ScalarK::from_rat(1, 16),
            Delta::Half => ScalarK::zero(),
        }
    }
}

impl fmt::Display for Delta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Delta::Zero => write!(f, "0"),
            Delta::Half => write!(f, "1/2"),
        }
    }
}

impl FromStr for Delta {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "0" => Ok(Delta::Zero),
            "1/2" | "0.5" => Ok(Delta::Half),
            other => Err(Error::InvalidData(format!("invalid delta `{other}`"))),
        }
    }
}

impl serde::Serialize for Delta {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Delta {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An element of (1/2)Z stored as its double.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfIndex {
    twice: i64,
}

impl HalfIndex {
    pub fn from_twice(twice: i64) -> Self {
        HalfIndex { twice }
    }

    pub fn integer(n: i64) -> Self {
        HalfIndex { twice: 2 * n }
    }

    pub fn twice(self) -> i64 {
        self.twice
    }

    pub fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    pub fn as_integer(self) -> Option<i64> {
        if self.is_integer() {
            Some(self.twice / 2)
        } else {
            None
        }
    }

    pub fn is_zero(self) -> bool {
        self.twice == 0
    }

    pub fn is_positive(self) -> bool {
        self.twice > 0
    }

    pub fn neg(self) -> Self {
        HalfIndex { twice: -self.twice }
    }

    pub fn abs(self) -> Self {
        HalfIndex {
            twice: self.twice.abs(),
        }
    }

    pub fn add_int(self, n: i64) -> Self {
        HalfIndex {
            twice: self.twice + 2 * n,
        }
    }

    pub fn add(self, other: Self) -> Self {
        HalfIndex {
            twice: self.twice + other.twice,
        }
    }

    pub fn to_scalar(self) -> ScalarK {
        ScalarK::from_rat(self.twice, 2)
    }
}

impl fmt::Display for HalfIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice % 2 == 0 {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl FromStr for HalfIndex {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::Parse {
            msg: format!("invalid index `{s}`"),
            col: 0,
        };
        if let Some(head) = s.strip_suffix("/2") {
            let twice: i64 = head.parse().map_err(|_| err())?;
            Ok(HalfIndex::from_twice(twice))
        } else {
            let n: i64 = s.parse().map_err(|_| err())?;
            Ok(HalfIndex::integer(n))
        }
    }
}

impl serde::Serialize for HalfIndex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for HalfIndex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn flip(self) -> Self {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn sign_product(self, other: Self) -> i64 {
        if self == Parity::Odd && other == Parity::Odd {
            -1
        } else {
            1
        }
    }
}

/// A basis symbol of one of the algebras. The declaration order fixes the
/// canonical printing order of element terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasisSymbol {
    L(i64),
    Psi(HalfIndex),
    C,
    Z,
    D(i64),
    H(i64),
    C1,
    C2,
    C3,
}

impl BasisSymbol {
    pub fn parity(&self) -> Parity {
        match self {
            BasisSymbol::Psi(_) => Parity::Odd,
            _ => Parity::Even,
        }
    }

    /// Z-degree: the index, with central symbols in degree zero.
    pub fn degree(&self) -> HalfIndex {
        match self {
            BasisSymbol::L(m) | BasisSymbol::D(m) => HalfIndex::integer(*m),
            BasisSymbol::Psi(r) => *r,
            BasisSymbol::H(r) => HalfIndex::integer(*r),
            _ => HalfIndex::integer(0),
        }
    }
}

impl fmt::Display for BasisSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisSymbol::L(m) => write!(f, "L_{m}"),
            BasisSymbol::Psi(r) => write!(f, "psi_{r}"),
            BasisSymbol::C => write!(f, "c"),
            BasisSymbol::Z => write!(f, "z"),
            BasisSymbol::D(m) => write!(f, "d_{m}"),
            BasisSymbol::H(r) => write!(f, "h_{r}"),
            BasisSymbol::C1 => write!(f, "c1"),
            BasisSymbol::C2 => write!(f, "c2"),
            BasisSymbol::C3 => write!(f, "c3"),
        }
    }
}

/// Which algebra an element lives in. This fixes the admissible symbols and
/// the structure-constant table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AlgebraId {
    /// d_m, h_r, c1, c2, c3 with integer indices.
    TwistedHV,
    /// L_m, c.
    Vir,
    /// psi_r, z over the delta grid.
    Fermion(Delta),
    /// L_m, psi_r, c, z.
    FermionVirasoro(Delta),
}

impl AlgebraId {
    pub fn delta(self) -> Option<Delta> {
        match self {
            AlgebraId::Fermion(d) | AlgebraId::FermionVirasoro(d) => Some(d),
            _ => None,
        }
    }

    pub fn admits(self, sym: &BasisSymbol) -> Result<()> {
        let ok = match (self, sym) {
            (AlgebraId::TwistedHV, BasisSymbol::D(_))
            | (AlgebraId::TwistedHV, BasisSymbol::H(_))
            | (AlgebraId::TwistedHV, BasisSymbol::C1)
            | (AlgebraId::TwistedHV, BasisSymbol::C2)
            | (AlgebraId::TwistedHV, BasisSymbol::C3) => true,
            (AlgebraId::Vir, BasisSymbol::L(_)) | (AlgebraId::Vir, BasisSymbol::C) => true,
            (AlgebraId::Fermion(d), BasisSymbol::Psi(r)) => {
                if d.contains(*r) {
                    true
                } else {
                    return Err(Error::IndexParity {
                        index: r.to_string(),
                        delta: d.to_string(),
                    });
                }
            }
            (AlgebraId::Fermion(_), BasisSymbol::Z) => true,
            (AlgebraId::FermionVirasoro(_), BasisSymbol::L(_))
            | (AlgebraId::FermionVirasoro(_), BasisSymbol::C)
            | (AlgebraId::FermionVirasoro(_), BasisSymbol::Z) => true,
            (AlgebraId::FermionVirasoro(d), BasisSymbol::Psi(r)) => {
                if d.contains(*r) {
                    true
                } else {
                    return Err(Error::IndexParity {
                        index: r.to_string(),
                        delta: d.to_string(),
                    });
                }
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InadmissibleSymbol {
                symbol: sym.to_string(),
                algebra: self.to_string(),
            })
        }
    }

    /// All basis symbols with |index| <= bound, in canonical order.
    pub fn basis_symbols(self, bound: i64) -> Vec<BasisSymbol> {
        let mut out = Vec::new();
        match self {
            AlgebraId::TwistedHV => {
                out.extend((-bound..=bound).map(BasisSymbol::D));
                out.extend((-bound..=bound).map(BasisSymbol::H));
                out.push(BasisSymbol::C1);
                out.push(BasisSymbol::C2);
                out.push(BasisSymbol::C3);
            }
            AlgebraId::Vir => {
                out.extend((-bound..=bound).map(BasisSymbol::L));
                out.push(BasisSymbol::C);
            }
            AlgebraId::Fermion(d) => {
                out.extend(d.grid(bound).into_iter().map(BasisSymbol::Psi));
                out.push(BasisSymbol::Z);
            }
            AlgebraId::FermionVirasoro(d) => {
                out.extend((-bound..=bound).map(BasisSymbol::L));
                out.extend(d.grid(bound).into_iter().map(BasisSymbol::Psi));
                out.push(BasisSymbol::C);
                out.push(BasisSymbol::Z);
            }
        }
        out
    }
}

impl fmt::Display for AlgebraId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraId::TwistedHV => write!(f, "thv"),
            AlgebraId::Vir => write!(f, "vir"),
            AlgebraId::Fermion(Delta::Zero) => write!(f, "f0"),
            AlgebraId::Fermion(Delta::Half) => write!(f, "f12"),
            AlgebraId::FermionVirasoro(Delta::Zero) => write!(f, "s0"),
            AlgebraId::FermionVirasoro(Delta::Half) => write!(f, "s12"),
        }
    }
}

impl FromStr for AlgebraId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "thv" => Ok(AlgebraId::TwistedHV),
            "vir" => Ok(AlgebraId::Vir),
            "f0" => Ok(AlgebraId::Fermion(Delta::Zero)),
            "f12" => Ok(AlgebraId::Fermion(Delta::Half)),
            "s0" => Ok(AlgebraId::FermionVirasoro(Delta::Zero)),
            "s12" => Ok(AlgebraId::FermionVirasoro(Delta::Half)),
            other => Err(Error::InvalidData(format!("unknown algebra `{other}`"))),
        }
    }
}

/// Finite K-linear combination of basis symbols of one algebra. No zero
/// coefficients are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraElement {
    algebra: AlgebraId,
    terms: BTreeMap<BasisSymbol, ScalarK>,
}

impl AlgebraElement {
    pub fn zero(algebra: AlgebraId) -> Self {
        AlgebraElement {
            algebra,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_symbol(algebra: AlgebraId, sym: BasisSymbol) -> Result<Self> {
        algebra.admits(&sym)?;
        let mut el = AlgebraElement::zero(algebra);
        el.add_term(sym, ScalarK::one());
        Ok(el)
    }

    pub fn algebra(&self) -> AlgebraId {
        self.algebra
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisSymbol, &ScalarK)> {
        self.terms.iter()
    }

    pub fn coeff(&self, sym: &BasisSymbol) -> ScalarK {
        self.terms.get(sym).cloned().unwrap_or_else(ScalarK::zero)
    }

    pub fn add_term(&mut self, sym: BasisSymbol, coeff: ScalarK) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(sym).or_insert_with(ScalarK::zero);
        *entry = &*entry + &coeff;
        if entry.is_zero() {
            self.terms.remove(&sym);
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.algebra != other.algebra {
            return Err(Error::MixedAlgebras(
                self.algebra.to_string(),
                other.algebra.to_string(),
            ));
        }
        let mut out = self.clone();
        for (sym, c) in other.terms() {
            out.add_term(*sym, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&ScalarK::from_int(-1)))
    }

    pub fn scale(&self, k: &ScalarK) -> Self {
        let mut out = AlgebraElement::zero(self.algebra);
        for (sym, c) in self.terms() {
            out.add_term(*sym, c * k);
        }
        out
    }

    /// Even/Odd when all stored symbols agree (the zero element counts as
    /// even); None for a mixed-parity sum.
    pub fn parity(&self) -> Option<Parity> {
        let mut seen: Option<Parity> = None;
        for (sym, _) in self.terms() {
            match seen {
                None => seen = Some(sym.parity()),
                Some(p) if p == sym.parity() => {}
                Some(_) => return None,
            }
        }
        Some(seen.unwrap_or(Parity::Even))
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rendered =
            format_terms(self.terms().map(|(sym, c)| (c.clone(), sym.to_string())));
        write!(f, "{rendered}")
    }
}

fn rat(n: i64, d: i64) -> ScalarK {
    ScalarK::from_rat(n, d)
}

/// (m^3 - m)/12 as an exact scalar.
fn virasoro_central(m: i64) -> ScalarK {
    let mb = BigInt::from(m);
    ScalarK::from_rational(BigRational::new(&mb * &mb * &mb - &mb, BigInt::from(12)))
}

/// Bracket of two basis symbols from the standard structure-constant table.
pub fn bracket_symbols(algebra: AlgebraId, x: &BasisSymbol, y: &BasisSymbol) -> AlgebraElement {
    let mut out = AlgebraElement::zero(algebra);
    match (algebra, x, y) {
        (AlgebraId::Vir, BasisSymbol::L(m), BasisSymbol::L(n))
        | (AlgebraId::FermionVirasoro(_), BasisSymbol::L(m), BasisSymbol::L(n)) => {
            out.add_term(BasisSymbol::L(m + n), ScalarK::from_int(m - n));
            if m + n == 0 {
                out.add_term(BasisSymbol::C, virasoro_central(*m));
            }
        }
        (AlgebraId::FermionVirasoro(_), BasisSymbol::L(m), BasisSymbol::Psi(r)) => {
            // [L_m, psi_r] = (-r - m/2) psi_{m+r}
            out.add_term(BasisSymbol::Psi(r.add_int(*m)), rat(-(r.twice() + m), 2));
        }
        (AlgebraId::FermionVirasoro(_), BasisSymbol::Psi(r), BasisSymbol::L(m)) => {
            out.add_term(BasisSymbol::Psi(r.add_int(*m)), rat(r.twice() + m, 2));
        }
        (AlgebraId::Fermion(_), BasisSymbol::Psi(r), BasisSymbol::Psi(s))
        | (AlgebraId::FermionVirasoro(_), BasisSymbol::Psi(r), BasisSymbol::Psi(s)) => {
            if r.twice() + s.twice() == 0 {
                out.add_term(BasisSymbol::Z, ScalarK::one());
            }
        }
        (AlgebraId::TwistedHV, BasisSymbol::D(m), BasisSymbol::D(n)) => {
            out.add_term(BasisSymbol::D(m + n), ScalarK::from_int(m - n));
            if m + n == 0 {
                out.add_term(BasisSymbol::C1, virasoro_central(*m));
            }
        }
        (AlgebraId::TwistedHV, BasisSymbol::D(m), BasisSymbol::H(r)) => {
            out.add_term(BasisSymbol::H(m + r), ScalarK::from_int(-r));
            if m + r == 0 {
                out.add_term(BasisSymbol::C2, ScalarK::from_int(m * m + m));
            }
        }
        (AlgebraId::TwistedHV, BasisSymbol::H(r), BasisSymbol::D(m)) => {
            out.add_term(BasisSymbol::H(m + r), ScalarK::from_int(*r));
            if m + r == 0 {
                out.add_term(BasisSymbol::C2, ScalarK::from_int(-(m * m + m)));
            }
        }
        (AlgebraId::TwistedHV, BasisSymbol::H(r), BasisSymbol::H(s)) => {
            if r + s == 0 {
                out.add_term(BasisSymbol::C3, ScalarK::from_int(*r));
            }
        }
        // Everything involving a central symbol brackets to zero.
        _ => {}
    }
    out
}

/// Bilinear super-bracket of two elements of the same algebra.
pub fn bracket(x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
    if x.algebra() != y.algebra() {
        return Err(Error::MixedAlgebras(
            x.algebra().to_string(),
            y.algebra().to_string(),
        ));
    }
    let mut out = AlgebraElement::zero(x.algebra());
    for (sx, cx) in x.terms() {
        for (sy, cy) in y.terms() {
            let part = bracket_symbols(x.algebra(), sx, sy).scale(&(cx * cy));
            out = out.add(&part)?;
        }
    }
    Ok(out)
}

/// The twist sigma_mu: psi_l -> mu psi_l, z -> mu^2 z, fixing L_k and c.
pub fn sigma_twist(mu: &ScalarK, x: &AlgebraElement) -> Result<AlgebraElement> {
    if mu.is_zero() {
        return Err(Error::ZeroTwist);
    }
    match x.algebra() {
        AlgebraId::Fermion(_) | AlgebraId::FermionVirasoro(_) => {}
        other => {
            return Err(Error::UnsupportedModule(format!(
                "sigma twist is not defined on {other}"
            )))
        }
    }
    let mut out = AlgebraElement::zero(x.algebra());
    for (sym, c) in x.terms() {
        let factor = match sym {
            BasisSymbol::Psi(_) => mu.clone(),
            BasisSymbol::Z => mu * mu,
            _ => ScalarK::one(),
        };
        out.add_term(*sym, c * &factor);
    }
    Ok(out)
}

/// Graded Jacobi residual of an ordered symbol triple under an arbitrary
/// symbol-level bracket table.
fn jacobi_residual(
    algebra: AlgebraId,
    x: &BasisSymbol,
    y: &BasisSymbol,
    z: &BasisSymbol,
    table: &dyn Fn(AlgebraId, &BasisSymbol, &BasisSymbol) -> AlgebraElement,
) -> Result<AlgebraElement> {
    // Bilinear extension of the table to (symbol, element) pairs.
    let ext = |a: &BasisSymbol, e: &AlgebraElement, flip: bool| -> Result<AlgebraElement> {
        let mut out = AlgebraElement::zero(algebra);
        for (s, c) in e.terms() {
            let part = if flip {
                table(algebra, s, a)
            } else {
                table(algebra, a, s)
            };
            out = out.add(&part.scale(c))?;
        }
        Ok(out)
    };
    let sign = |p: Parity, q: Parity| {
        if p == Parity::Odd && q == Parity::Odd {
            ScalarK::from_int(-1)
        } else {
            ScalarK::one()
        }
    };
    let (px, py, pz) = (x.parity(), y.parity(), z.parity());
    // (-1)^{|x||z|} [x,[y,z]] + (-1)^{|y||x|} [y,[z,x]] + (-1)^{|z||y|} [z,[x,y]]
    let t1 = ext(x, &table(algebra, y, z), false)?.scale(&sign(px, pz));
    let t2 = ext(y, &table(algebra, z, x), false)?.scale(&sign(py, px));
    let t3 = ext(z, &table(algebra, x, y), false)?.scale(&sign(pz, py));
    t1.add(&t2)?.add(&t3)
}

/// Sweeps the graded Jacobi identity over every ordered basis triple with
/// |index| <= bound, using a caller-supplied symbol bracket. The first
/// witness is reported in lexicographic triple order.
pub fn jacobi_check_with(
    algebra: AlgebraId,
    bound: i64,
    table: &dyn Fn(AlgebraId, &BasisSymbol, &BasisSymbol) -> AlgebraElement,
) -> Result<VerificationReport> {
    if bound < 1 {
        return Err(Error::InvalidBound(format!(
            "index bound must be >= 1, got {bound}"
        )));
    }
    let start = Instant::now();
    let symbols = algebra.basis_symbols(bound);
    let mut checked = 0u64;
    let mut witness = None;
    'outer: for x in &symbols {
        for y in &symbols {
            for z in &symbols {
                checked += 1;
                let residual = jacobi_residual(algebra, x, y, z, table)?;
                if !residual.is_zero() {
                    witness = Some(Witness {
                        x: x.to_string(),
                        y: y.to_string(),
                        v: z.to_string(),
                        residual: residual.to_string(),
                    });
                    break 'outer;
                }
            }
        }
    }
    let status = if witness.is_none() {
        Status::Pass
    } else {
        Status::Fail
    };
    Ok(VerificationReport {
        check: "jacobi".to_string(),
        params: serde_json::json!({
            "algebra": algebra.to_string(),
            "range": bound,
        }),
        status,
        witness,
        counts: Counts {
            triples_checked: checked,
        },
        duration_ms: start.elapsed().as_millis() as u64,
    })
}

/// Jacobi sweep against the standard structure-constant table.
pub fn jacobi_check(algebra: AlgebraId, bound: i64) -> Result<VerificationReport> {
    jacobi_check_with(algebra, bound, &bracket_symbols)
}
