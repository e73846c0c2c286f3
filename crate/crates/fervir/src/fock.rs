//! Fermionic Fock modules: the exterior-algebra module over each grid, its
//! finite truncations, the indexed family stored by symmetric difference,
//! twists, the normal-ordered Virasoro operator, spectra and characters.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{format_terms, ScalarK};
use crate::superalg::{AlgebraElement, AlgebraId, BasisSymbol, Delta, HalfIndex, Parity};

/// A set of non-negative grid indices, either listed or listed by exclusion.
/// The cofinite form is admitted only as the reference set of the indexed
/// family (integer grid).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IndexSet {
    Finite(Vec<HalfIndex>),
    Cofinite(Vec<HalfIndex>),
}

fn check_sorted_nonneg(indices: &[HalfIndex]) -> Result<()> {
    for w in indices.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::InvalidData(
                "index set must be strictly ascending".to_string(),
            ));
        }
    }
    if indices.iter().any(|i| i.twice() < 0) {
        return Err(Error::InvalidData(
            "index set entries must be non-negative".to_string(),
        ));
    }
    Ok(())
}

impl IndexSet {
    pub fn finite(indices: Vec<HalfIndex>) -> Result<Self> {
        check_sorted_nonneg(&indices)?;
        Ok(IndexSet::Finite(indices))
    }

    pub fn cofinite(excluded: Vec<HalfIndex>) -> Result<Self> {
        check_sorted_nonneg(&excluded)?;
        if excluded.iter().any(|i| !i.is_integer()) {
            return Err(Error::InvalidData(
                "cofinite reference sets live on the integer grid".to_string(),
            ));
        }
        Ok(IndexSet::Cofinite(excluded))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, IndexSet::Finite(_))
    }

    pub fn contains(&self, i: HalfIndex) -> bool {
        match self {
            IndexSet::Finite(v) => v.binary_search(&i).is_ok(),
            IndexSet::Cofinite(excl) => i.twice() >= 0 && excl.binary_search(&i).is_err(),
        }
    }

    /// Number of members strictly below the integer k (the set is contained
    /// in the non-negative integers in the cofinite case).
    fn count_below(&self, k: HalfIndex) -> i64 {
        match self {
            IndexSet::Finite(v) => v.iter().filter(|i| **i < k).count() as i64,
            IndexSet::Cofinite(excl) => {
                let k_int = k.as_integer().expect("cofinite sets use integer indices");
                let below = k_int.max(0);
                below - excl.iter().filter(|i| **i < k).count() as i64
            }
        }
    }
}

/// Which Fock module a vector lives in.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FockKind {
    /// The full exterior module on the delta grid.
    V { delta: Delta },
    /// The indexed family: vectors are stored by symmetric difference with
    /// the reference set. Integer grid only.
    VI { reference: IndexSet },
    /// The truncation to indices 0..=m (integer grid).
    Vm { m: i64 },
}

/// A Fock module descriptor: the kind plus an optional twist mu realizing
/// the twisted module (z then acts as mu^2).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FockModule {
    kind: FockKind,
    twist: Option<ScalarK>,
}

impl FockModule {
    pub fn v(delta: Delta) -> Self {
        FockModule {
            kind: FockKind::V { delta },
            twist: None,
        }
    }

    pub fn v_twisted(delta: Delta, mu: ScalarK) -> Result<Self> {
        if mu.is_zero() {
            return Err(Error::ZeroTwist);
        }
        Ok(FockModule {
            kind: FockKind::V { delta },
            twist: if mu.is_one() { None } else { Some(mu) },
        })
    }

    pub fn v_i(reference: IndexSet) -> Self {
        FockModule {
            kind: FockKind::VI { reference },
            twist: None,
        }
    }

    pub fn v_m(m: i64) -> Result<Self> {
        if m < 0 {
            return Err(Error::InvalidBound(format!("m must be >= 0, got {m}")));
        }
        Ok(FockModule {
            kind: FockKind::Vm { m },
            twist: None,
        })
    }

    pub fn v_m_twisted(m: i64, mu: ScalarK) -> Result<Self> {
        if mu.is_zero() {
            return Err(Error::ZeroTwist);
        }
        let mut module = FockModule::v_m(m)?;
        if !mu.is_one() {
            module.twist = Some(mu);
        }
        Ok(module)
    }

    pub fn kind(&self) -> &FockKind {
        &self.kind
    }

    pub fn delta(&self) -> Delta {
        match &self.kind {
            FockKind::V { delta } => *delta,
            FockKind::VI { .. } | FockKind::Vm { .. } => Delta::Zero,
        }
    }

    pub fn twist(&self) -> ScalarK {
        self.twist.clone().unwrap_or_else(ScalarK::one)
    }

    /// The scalar by which z acts: the square of the twist.
    pub fn level(&self) -> ScalarK {
        let mu = self.twist();
        &mu * &mu
    }

    fn validate_index(&self, r: HalfIndex) -> Result<()> {
        let delta = self.delta();
        if !delta.contains(r) {
            return Err(Error::IndexParity {
                index: r.to_string(),
                delta: delta.to_string(),
            });
        }
        if let FockKind::Vm { m } = &self.kind {
            if r.abs() > HalfIndex::integer(*m) {
                return Err(Error::IndexRange {
                    index: r.to_string(),
                    bound: m.to_string(),
                });
            }
        }
        Ok(())
    }

    fn validate_monomial(&self, mono: &Monomial) -> Result<()> {
        for i in mono.indices() {
            if !self.delta().contains(*i) {
                return Err(Error::IndexParity {
                    index: i.to_string(),
                    delta: self.delta().to_string(),
                });
            }
            if let FockKind::Vm { m } = &self.kind {
                if *i > HalfIndex::integer(*m) {
                    return Err(Error::IndexRange {
                        index: i.to_string(),
                        bound: m.to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    /// True when every basis vector is annihilated by all sufficiently
    /// positive fermion modes.
    pub fn is_smooth(&self) -> bool {
        match &self.kind {
            FockKind::V { .. } | FockKind::Vm { .. } => true,
            FockKind::VI { reference } => reference.is_finite(),
        }
    }
}

/// A strictly ascending list of non-negative grid indices. For the full and
/// truncated modules this is the monomial index set itself; for the indexed
/// family it is the symmetric difference with the reference set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<HalfIndex>);

impl Monomial {
    pub fn empty() -> Self {
        Monomial(Vec::new())
    }

    pub fn new(mut indices: Vec<HalfIndex>) -> Result<Self> {
        indices.sort();
        for w in indices.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidData(format!(
                    "repeated index {} in monomial",
                    w[0]
                )));
            }
        }
        if indices.iter().any(|i| i.twice() < 0) {
            return Err(Error::InvalidData(
                "monomial indices must be non-negative".to_string(),
            ));
        }
        Ok(Monomial(indices))
    }

    pub fn indices(&self) -> &[HalfIndex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: HalfIndex) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn parity(&self) -> Parity {
        if self.0.len() % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    fn count_below(&self, k: HalfIndex) -> usize {
        match self.0.binary_search(&k) {
            Ok(pos) | Err(pos) => pos,
        }
    }

    /// Symmetric difference with a single index.
    fn toggled(&self, k: HalfIndex) -> Monomial {
        let mut v = self.0.clone();
        match v.binary_search(&k) {
            Ok(pos) => {
                v.remove(pos);
            }
            Err(pos) => {
                v.insert(pos, k);
            }
        }
        Monomial(v)
    }

    pub fn weight_sum(&self) -> ScalarK {
        ScalarK::from_rat(self.0.iter().map(|i| i.twice()).sum::<i64>(), 2)
    }

    pub fn max_twice(&self) -> i64 {
        self.0.last().map(|i| i.twice()).unwrap_or(0)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inner: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "xi({})", inner.join(","))
    }
}

/// Finite K-linear combination of basis monomials of one Fock module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FockVector {
    module: FockModule,
    terms: BTreeMap<Monomial, ScalarK>,
}

impl FockVector {
    pub fn zero(module: FockModule) -> Self {
        FockVector {
            module,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(module: FockModule, mono: Monomial) -> Result<Self> {
        module.validate_monomial(&mono)?;
        let mut v = FockVector::zero(module);
        v.add_term(mono, ScalarK::one());
        Ok(v)
    }

    /// The empty monomial (vacuum for the full and truncated modules; the
    /// reference vector for the indexed family).
    pub fn vacuum(module: FockModule) -> Self {
        let mut v = FockVector::zero(module);
        v.add_term(Monomial::empty(), ScalarK::one());
        v
    }

    pub fn module(&self) -> &FockModule {
        &self.module
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &ScalarK)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mono: &Monomial) -> ScalarK {
        self.terms.get(mono).cloned().unwrap_or_else(ScalarK::zero)
    }

    pub fn add_term(&mut self, mono: Monomial, coeff: ScalarK) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(mono.clone()).or_insert_with(ScalarK::zero);
        *entry = &*entry + &coeff;
        if entry.is_zero() {
            self.terms.remove(&mono);
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.module != other.module {
            return Err(Error::ModuleMismatch);
        }
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&ScalarK::from_int(-1)))
    }

    pub fn scale(&self, k: &ScalarK) -> Self {
        let mut out = FockVector::zero(self.module.clone());
        for (m, c) in self.terms() {
            out.add_term(m.clone(), c * k);
        }
        out
    }

    pub fn parity(&self) -> Option<Parity> {
        let mut seen: Option<Parity> = None;
        for (m, _) in self.terms() {
            match seen {
                None => seen = Some(m.parity()),
                Some(p) if p == m.parity() => {}
                Some(_) => return None,
            }
        }
        Some(seen.unwrap_or(Parity::Even))
    }
}

impl fmt::Display for FockVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rendered = format_terms(self.terms().map(|(m, c)| (c.clone(), m.to_string())));
        write!(f, "{rendered}")
    }
}

/// Signed single-mode action on one monomial: annihilation for positive
/// modes, creation for negative modes, and the self-adjoint zero mode with
/// its 1/sqrt(2) factor. The sign is (-1)^(number of occupied indices below
/// the mode), which covers every module kind uniformly; for the index 0 it is
/// vacuously +1.
fn psi_on_monomial(
    module: &FockModule,
    r: HalfIndex,
    mono: &Monomial,
) -> Option<(Monomial, ScalarK)> {
    let k = r.abs();
    let (occupied, sign_count): (bool, i64) = match module.kind() {
        FockKind::V { .. } | FockKind::Vm { .. } => {
            (mono.contains(k), mono.count_below(k) as i64)
        }
        FockKind::VI { reference } => {
            // Membership and counting refer to the actual index set J, which
            // is reference XOR diff.
            let occupied = reference.contains(k) != mono.contains(k);
            let in_ref = reference.count_below(k);
            let diff_below = mono.indices().iter().take_while(|i| **i < k);
            let mut count = in_ref;
            for i in diff_below {
                if reference.contains(*i) {
                    count -= 1; // removed from the reference set
                } else {
                    count += 1; // added to it
                }
            }
            (occupied, count)
        }
    };
    let sign = if sign_count % 2 == 0 {
        ScalarK::one()
    } else {
        ScalarK::from_int(-1)
    };
    if r.is_zero() {
        // (1/sqrt 2)(creation + annihilation); exactly one branch applies.
        let half_sqrt2 = ScalarK::new(
            crate::scalar::Rational::from_integer(0.into()),
            crate::scalar::Rational::new(1.into(), 2.into()),
        );
        return Some((mono.toggled(k), &sign * &half_sqrt2));
    }
    if r.is_positive() {
        // Annihilation.
        if occupied {
            Some((mono.toggled(k), sign))
        } else {
            None
        }
    } else {
        // Creation.
        if occupied {
            None
        } else {
            Some((mono.toggled(k), sign))
        }
    }
}

fn psi_act_inner(r: HalfIndex, v: &FockVector, apply_twist: bool) -> Result<FockVector> {
    v.module.validate_index(r)?;
    let mut out = FockVector::zero(v.module.clone());
    let factor = if apply_twist {
        v.module.twist()
    } else {
        ScalarK::one()
    };
    for (mono, coeff) in v.terms() {
        if let Some((new_mono, sign)) = psi_on_monomial(&v.module, r, mono) {
            out.add_term(new_mono, &(coeff * &sign) * &factor);
        }
    }
    Ok(out)
}

/// Action of the fermion mode psi_r, including the twist factor mu.
pub fn psi_act(r: HalfIndex, v: &FockVector) -> Result<FockVector> {
    psi_act_inner(r, v, true)
}

/// Action of the central element z: multiplication by the level.
pub fn z_act(v: &FockVector) -> FockVector {
    v.scale(&v.module.level())
}

/// The normal-ordered Virasoro operator on the full module (twisted or not):
/// the vacuum-energy constant at k = 0 plus (1/2) sum_j j :psi_{-j} psi_{j+k}:.
///
/// The twist does not enter: on the twisted module the action of L_k is by
/// definition the untwisted normal-ordered operator (the twist fixes L_k).
pub fn lbar_act(k: i64, v: &FockVector) -> Result<FockVector> {
    lbar_act_window(k, v, 0)
}

/// Same as `lbar_act` with the summation window widened by `extra`; the
/// result is independent of `extra`, which tests assert.
pub fn lbar_act_window(k: i64, v: &FockVector, extra: i64) -> Result<FockVector> {
    match v.module.kind() {
        FockKind::V { .. } => {}
        other => {
            return Err(Error::UnsupportedModule(format!(
                "normal-ordered operator is defined on the full module only, got {other:?}"
            )))
        }
    }
    let delta = v.module.delta();
    let mut out = FockVector::zero(v.module.clone());
    for (mono, coeff) in v.terms() {
        if k == 0 {
            out.add_term(mono.clone(), coeff * &delta.vacuum_energy());
        }
        // For xi_J only finitely many j survive: write the normal-ordered
        // term as psi_a psi_b with psi_b acting first. For j > max(J) + |k|
        // the first-acting index is j+k > max(J) (annihilation of an
        // unoccupied mode); for j < -(max(J) + |k|) it is -j > max(J).
        // Either way the term kills xi_J, so |j| <= max(J u {0}) + |k| + 1
        // covers every surviving term.
        let max_twice = mono.max_twice().max(0);
        let bound_twice = max_twice + 2 * k.abs() + 2 + 2 * extra;
        let single = FockVector::basis(v.module.clone(), mono.clone())?;
        for jt in -bound_twice..=bound_twice {
            if jt == 0 || jt.rem_euclid(2) != delta.twice_offset() {
                continue;
            }
            let j = HalfIndex::from_twice(jt);
            let a = j.neg();
            let b = j.add_int(k);
            // :psi_a psi_b: with the convention that the larger second index
            // keeps the written order.
            let (first, second, order_sign) = if b >= a { (a, b, 1) } else { (b, a, -1) };
            let inner = psi_act_inner(second, &single, false)?;
            if inner.is_zero() {
                continue;
            }
            let outer = psi_act_inner(first, &inner, false)?;
            // coefficient (1/2) * j * order_sign
            let c = ScalarK::from_rat(jt * order_sign, 4);
            out = out.add(&outer.scale(&(&c * coeff)))?;
        }
    }
    Ok(out)
}

/// Applies a fermion-Virasoro or fermion algebra element to a Fock vector:
/// L_m through the normal-ordered operator, psi_r through the (twisted) mode
/// action, c as the scalar 1/2, z as the level.
pub fn act_element(x: &AlgebraElement, v: &FockVector) -> Result<FockVector> {
    match x.algebra() {
        AlgebraId::Fermion(d) | AlgebraId::FermionVirasoro(d) => {
            if d != v.module().delta() {
                return Err(Error::IndexParity {
                    index: format!("algebra grid {d}"),
                    delta: v.module().delta().to_string(),
                });
            }
        }
        other => {
            return Err(Error::UnsupportedModule(format!(
                "{other} does not act on Fock modules"
            )))
        }
    }
    let mut out = FockVector::zero(v.module().clone());
    for (sym, coeff) in x.terms() {
        let part = match sym {
            BasisSymbol::Psi(r) => psi_act(*r, v)?,
            BasisSymbol::L(m) => lbar_act(*m, v)?,
            BasisSymbol::C => v.scale(&ScalarK::from_rat(1, 2)),
            BasisSymbol::Z => z_act(v),
            other => {
                return Err(Error::UnsupportedModule(format!(
                    "{other} does not act on Fock modules"
                )))
            }
        };
        out = out.add(&part.scale(coeff))?;
    }
    Ok(out)
}

/// L_0-eigenvalue of a basis monomial: base plus the signed index sum. For
/// the full and truncated modules the contribution is the plain index sum;
/// for the indexed family, indices added to the reference set count
/// positively and removed ones negatively.
pub fn weight_of(module: &FockModule, mono: &Monomial, base: &ScalarK) -> ScalarK {
    match module.kind() {
        FockKind::V { .. } | FockKind::Vm { .. } => base + &mono.weight_sum(),
        FockKind::VI { reference } => {
            let mut acc = base.clone();
            for i in mono.indices() {
                if reference.contains(*i) {
                    acc = &acc - &i.to_scalar();
                } else {
                    acc = &acc + &i.to_scalar();
                }
            }
            acc
        }
    }
}

/// One row of the character table of the full module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterRow {
    /// Offset n over the vacuum, on the delta grid.
    pub n: HalfIndex,
    /// The eigenvalue (1-2*delta)/16 + n.
    pub eigenvalue: ScalarK,
    pub dimension: u64,
}

/// Exact multiplicities of the L_0 spectrum of the full module up to offset
/// n_max. Computed by enumerating monomials by weight and cross-checked
/// against the generating-function product prod_j (1 + q^j), with the weight
/// zero index doubling every count on the integer grid.
pub fn character(delta: Delta, n_max: i64) -> Result<Vec<CharacterRow>> {
    if n_max < 0 {
        return Err(Error::InvalidBound(format!("n_max must be >= 0, got {n_max}")));
    }
    let top = 2 * n_max;
    // dp[t] = number of subsets of positive grid indices with doubled sum t.
    let mut dp = vec![0u64; (top + 1) as usize];
    dp[0] = 1;
    let mut part_twice = match delta {
        Delta::Zero => 2,
        Delta::Half => 1,
    };
    while part_twice <= top {
        for t in (part_twice..=top).rev() {
            dp[t as usize] += dp[(t - part_twice) as usize];
        }
        part_twice += 2;
    }
    let zero_mode_factor = match delta {
        Delta::Zero => 2,
        Delta::Half => 1,
    };

    // Second route: expand the product of (1 + q^j) directly.
    let mut gf = vec![0u64; (top + 1) as usize];
    gf[0] = 1;
    let mut j = match delta {
        Delta::Zero => 2,
        Delta::Half => 1,
    };
    while j <= top {
        for t in (j..=top).rev() {
            gf[t as usize] += gf[(t - j) as usize];
        }
        j += 2;
    }
    assert_eq!(dp, gf, "character enumeration disagrees with the product expansion");

    let mut rows = Vec::new();
    for t in 0..=top {
        if t % 2 != 0 && delta == Delta::Zero {
            continue;
        }
        let n = HalfIndex::from_twice(t);
        let dim = dp[t as usize] * zero_mode_factor;
        rows.push(CharacterRow {
            n,
            eigenvalue: &delta.vacuum_energy() + &n.to_scalar(),
            dimension: dim,
        });
    }
    Ok(rows)
}

/// Joint eigenvalue data of the number operators psi_{-k} psi_k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FWeightVector {
    pub entries: BTreeMap<HalfIndex, ScalarK>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FWeightOutcome {
    Eigen(FWeightVector),
    NotEigen,
}

/// Eigenvalues of psi_{-k} psi_k on v for every positive grid index k up to
/// k_max, or NotEigen if v is not a simultaneous eigenvector.
pub fn f_weight_vector(v: &FockVector, k_max: HalfIndex) -> Result<FWeightOutcome> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let delta = v.module().delta();
    let mut entries = BTreeMap::new();
    let probe = v.terms().next().expect("nonzero vector").0.clone();
    for k in delta.grid(((k_max.twice()) / 2) + 1) {
        if !k.is_positive() || k > k_max {
            continue;
        }
        let w = psi_act(k.neg(), &psi_act(k, v)?)?;
        let lambda = match w.terms.get(&probe) {
            None if w.is_zero() => ScalarK::zero(),
            None => return Ok(FWeightOutcome::NotEigen),
            Some(c) => c.div(&v.coeff(&probe)).expect("probe coefficient nonzero"),
        };
        if w != v.scale(&lambda) {
            return Ok(FWeightOutcome::NotEigen);
        }
        entries.insert(k, lambda);
    }
    Ok(FWeightOutcome::Eigen(FWeightVector { entries }))
}
