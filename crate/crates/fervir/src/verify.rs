//! Generic exhaustive verification of module axioms: for every ordered pair
//! of generator symbols and every test vector, the residual
//! x(yv) - (-1)^{|x||y|} y(xv) - [x,y]v must vanish exactly.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::fock::{self, FockKind, FockModule, FockVector, Monomial};
use crate::report::{Counts, Status, VerificationReport, Witness};
use crate::scalar::ScalarK;
use crate::superalg::{bracket_symbols, AlgebraId, BasisSymbol};
use crate::virmod::{tensor_act, Partition, TensorModule, TensorVector};

/// A module of one of the algebras with a distinguished family of test
/// vectors, as consumed by `verify_module_axioms`.
pub trait SuperModule {
    type Vector: Clone + PartialEq + std::fmt::Display;

    /// The algebra whose relations this module realizes.
    fn algebra(&self) -> AlgebraId;

    /// Generator symbols to sweep, restricted to |index| <= bound.
    fn symbols(&self, index_bound: i64) -> Vec<BasisSymbol>;

    fn act(&self, sym: &BasisSymbol, v: &Self::Vector) -> Result<Self::Vector>;

    /// Basis test vectors up to the degree bound, in a fixed order.
    fn test_vectors(&self, degree_bound: i64) -> Result<Vec<Self::Vector>>;

    /// Whether v stays clear of any truncation cutoff when the pair being
    /// checked can raise its weight by `slack`. Non-truncating modules accept
    /// everything.
    fn safe_for(&self, _v: &Self::Vector, _slack: i64) -> bool {
        true
    }

    fn is_zero_vec(&self, v: &Self::Vector) -> bool;

    fn add(&self, a: &Self::Vector, b: &Self::Vector) -> Result<Self::Vector>;

    fn scale(&self, v: &Self::Vector, k: &ScalarK) -> Self::Vector;

    /// Module description for the verification report parameters.
    fn describe(&self) -> serde_json::Value;

    fn sub(&self, a: &Self::Vector, b: &Self::Vector) -> Result<Self::Vector> {
        self.add(a, &self.scale(b, &ScalarK::from_int(-1)))
    }

    /// Bilinear extension of the symbol action to algebra elements.
    fn act_element(
        &self,
        x: &crate::superalg::AlgebraElement,
        v: &Self::Vector,
    ) -> Result<Self::Vector> {
        let mut acc = self.scale(v, &ScalarK::zero());
        for (sym, c) in x.terms() {
            let part = self.scale(&self.act(sym, v)?, c);
            acc = self.add(&acc, &part)?;
        }
        Ok(acc)
    }
}

/// Largest weight by which acting with `sym` can raise a truncation-sensitive
/// factor: only Virasoro generators with negative index do.
fn weight_slack(sym: &BasisSymbol) -> i64 {
    match sym {
        BasisSymbol::L(m) => m.abs(),
        _ => 0,
    }
}

/// Sweeps x(yv) - (-1)^{|x||y|} y(xv) = [x,y]v over all ordered symbol pairs
/// with |index| <= index_bound and all test vectors up to degree_bound,
/// skipping (pair, vector) combinations the module marks as truncation-unsafe.
/// The first witness is reported in (vector, x, y) scan order.
pub fn verify_module_axioms<M: SuperModule>(
    module: &M,
    index_bound: i64,
    degree_bound: i64,
) -> Result<VerificationReport> {
    if index_bound < 1 {
        return Err(Error::InvalidBound(format!(
            "index bound must be >= 1, got {index_bound}"
        )));
    }
    if degree_bound < 0 {
        return Err(Error::InvalidBound(format!(
            "degree bound must be >= 0, got {degree_bound}"
        )));
    }
    let start = Instant::now();
    let algebra = module.algebra();
    let symbols = module.symbols(index_bound);
    let vectors = module.test_vectors(degree_bound)?;
    let mut checked = 0u64;
    let mut witness = None;

    let index_of: std::collections::BTreeMap<BasisSymbol, usize> = symbols
        .iter()
        .enumerate()
        .map(|(i, s)| (*s, i))
        .collect();
    'outer: for v in &vectors {
        // Single-symbol applications shared by every pair at this vector.
        let mut base = Vec::with_capacity(symbols.len());
        for sym in &symbols {
            base.push(module.act(sym, v)?);
        }
        for (i, x) in symbols.iter().enumerate() {
            for (j, y) in symbols.iter().enumerate() {
                let slack = weight_slack(x) + weight_slack(y);
                if !module.safe_for(v, slack) {
                    continue;
                }
                checked += 1;
                let xy = module.act(x, &base[j])?;
                let yx = module.act(y, &base[i])?;
                let commutator = if x.parity() == crate::superalg::Parity::Odd
                    && y.parity() == crate::superalg::Parity::Odd
                {
                    module.add(&xy, &yx)?
                } else {
                    module.sub(&xy, &yx)?
                };
                // Bracket action on v, reusing the cached single-symbol
                // images for in-window symbols.
                let mut bracket_action = module.scale(v, &ScalarK::zero());
                for (sym, c) in bracket_symbols(algebra, x, y).terms() {
                    let image = match index_of.get(sym) {
                        Some(&idx) => module.scale(&base[idx], c),
                        None => module.scale(&module.act(sym, v)?, c),
                    };
                    bracket_action = module.add(&bracket_action, &image)?;
                }
                let residual = module.sub(&commutator, &bracket_action)?;
                if !module.is_zero_vec(&residual) {
                    witness = Some(Witness {
                        x: x.to_string(),
                        y: y.to_string(),
                        v: v.to_string(),
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
        check: "module-axioms".to_string(),
        params: serde_json::json!({
            "module": module.describe(),
            "index_bound": index_bound,
            "degree_bound": degree_bound,
        }),
        status,
        witness,
        counts: Counts {
            triples_checked: checked,
        },
        duration_ms: start.elapsed().as_millis() as u64,
    })
}

/// Monomials over the ascending index list `indices`, enumerated by bitmask.
fn monomial_subsets(indices: &[crate::superalg::HalfIndex]) -> Vec<Monomial> {
    let n = indices.len();
    let mut out = Vec::with_capacity(1 << n);
    for mask in 0u32..(1 << n) {
        let chosen: Vec<_> = indices
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, idx)| *idx)
            .collect();
        out.push(Monomial::new(chosen).expect("ascending distinct indices"));
    }
    out
}

impl FockModule {
    fn nonneg_indices_up_to(&self, degree_bound: i64) -> Vec<crate::superalg::HalfIndex> {
        let mut limit = degree_bound;
        if let FockKind::Vm { m } = self.kind() {
            limit = limit.min(*m);
        }
        self.delta()
            .grid(limit)
            .into_iter()
            .filter(|i| i.twice() >= 0)
            .collect()
    }
}

impl SuperModule for FockModule {
    type Vector = FockVector;

    fn algebra(&self) -> AlgebraId {
        match self.kind() {
            FockKind::V { delta } => AlgebraId::FermionVirasoro(*delta),
            FockKind::VI { .. } | FockKind::Vm { .. } => AlgebraId::Fermion(crate::superalg::Delta::Zero),
        }
    }

    fn symbols(&self, index_bound: i64) -> Vec<BasisSymbol> {
        let bound = match self.kind() {
            FockKind::Vm { m } => index_bound.min(*m),
            _ => index_bound,
        };
        self.algebra().basis_symbols(bound)
    }

    fn act(&self, sym: &BasisSymbol, v: &FockVector) -> Result<FockVector> {
        match sym {
            BasisSymbol::Psi(r) => fock::psi_act(*r, v),
            BasisSymbol::L(m) => fock::lbar_act(*m, v),
            BasisSymbol::C => Ok(v.scale(&ScalarK::from_rat(1, 2))),
            BasisSymbol::Z => Ok(fock::z_act(v)),
            other => Err(Error::UnsupportedModule(format!(
                "{other} does not act on Fock modules"
            ))),
        }
    }

    fn test_vectors(&self, degree_bound: i64) -> Result<Vec<FockVector>> {
        let indices = self.nonneg_indices_up_to(degree_bound);
        monomial_subsets(&indices)
            .into_iter()
            .map(|m| FockVector::basis(self.clone(), m))
            .collect()
    }

    fn is_zero_vec(&self, v: &FockVector) -> bool {
        v.is_zero()
    }

    fn add(&self, a: &FockVector, b: &FockVector) -> Result<FockVector> {
        a.add(b)
    }

    fn scale(&self, v: &FockVector, k: &ScalarK) -> FockVector {
        v.scale(k)
    }

    fn describe(&self) -> serde_json::Value {
        match self.kind() {
            FockKind::V { delta } => serde_json::json!({
                "kind": "V",
                "delta": delta.to_string(),
                "twist": self.twist().to_string(),
            }),
            FockKind::VI { reference } => {
                let body = match reference {
                    crate::fock::IndexSet::Finite(v) => serde_json::json!({
                        "finite": v.iter().map(|i| i.to_string()).collect::<Vec<_>>()
                    }),
                    crate::fock::IndexSet::Cofinite(v) => serde_json::json!({
                        "cofinite": v.iter().map(|i| i.to_string()).collect::<Vec<_>>()
                    }),
                };
                serde_json::json!({ "kind": "V_I", "I": body })
            }
            FockKind::Vm { m } => serde_json::json!({
                "kind": "V_m",
                "m": m,
                "twist": self.twist().to_string(),
            }),
        }
    }
}

impl SuperModule for TensorModule {
    type Vector = TensorVector;

    fn algebra(&self) -> AlgebraId {
        AlgebraId::FermionVirasoro(self.delta)
    }

    fn symbols(&self, index_bound: i64) -> Vec<BasisSymbol> {
        self.algebra().basis_symbols(index_bound)
    }

    fn act(&self, sym: &BasisSymbol, v: &TensorVector) -> Result<TensorVector> {
        let x = crate::superalg::AlgebraElement::from_symbol(self.algebra(), *sym)?;
        tensor_act(&x, v)
    }

    fn test_vectors(&self, degree_bound: i64) -> Result<Vec<TensorVector>> {
        let fock = FockModule::v(self.delta);
        let indices = fock.nonneg_indices_up_to(degree_bound);
        let monos = monomial_subsets(&indices);
        let partitions = Partition::up_to_weight(self.verma.depth);
        let mut out = Vec::with_capacity(monos.len() * partitions.len());
        for p in &partitions {
            for m in &monos {
                out.push(TensorVector::basis(self.clone(), m.clone(), p.clone())?);
            }
        }
        Ok(out)
    }

    fn safe_for(&self, v: &TensorVector, slack: i64) -> bool {
        v.terms()
            .all(|((_, p), _)| p.weight() + slack <= self.verma.depth)
    }

    fn is_zero_vec(&self, v: &TensorVector) -> bool {
        v.is_zero()
    }

    fn add(&self, a: &TensorVector, b: &TensorVector) -> Result<TensorVector> {
        a.add(b)
    }

    fn scale(&self, v: &TensorVector, k: &ScalarK) -> TensorVector {
        v.scale(k)
    }

    fn describe(&self) -> serde_json::Value {
        serde_json::json!({
            "kind": "tensor",
            "delta": self.delta.to_string(),
            "sqrt_lambda": self.sqrt_lambda.to_string(),
            "central_charge": self.verma.central_charge.to_string(),
            "highest_weight": self.verma.highest_weight.to_string(),
            "depth": self.verma.depth,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::IndexSet;
    use crate::superalg::{Delta, HalfIndex};
    use crate::virmod::VermaModule;

    #[test]
    fn full_module_satisfies_axioms() {
        let report = verify_module_axioms(&FockModule::v(Delta::Zero), 3, 4).unwrap();
        assert!(report.passed(), "{}", report.summary());
        let report = verify_module_axioms(&FockModule::v(Delta::Half), 3, 4).unwrap();
        assert!(report.passed(), "{}", report.summary());
    }

    #[test]
    fn twisted_module_satisfies_axioms() {
        let module = FockModule::v_twisted(Delta::Zero, ScalarK::sqrt2()).unwrap();
        let report = verify_module_axioms(&module, 3, 3).unwrap();
        assert!(report.passed(), "{}", report.summary());
    }

    #[test]
    fn indexed_and_truncated_modules_satisfy_fermion_axioms() {
        let vi = FockModule::v_i(IndexSet::cofinite(vec![HalfIndex::integer(1)]).unwrap());
        let report = verify_module_axioms(&vi, 4, 4).unwrap();
        assert!(report.passed(), "{}", report.summary());

        let vm = FockModule::v_m_twisted(2, ScalarK::from_int(-1)).unwrap();
        let report = verify_module_axioms(&vm, 4, 4).unwrap();
        assert!(report.passed(), "{}", report.summary());
    }

    #[test]
    fn tensor_module_satisfies_axioms_on_safe_window() {
        let module = TensorModule::new(
            Delta::Zero,
            ScalarK::from_int(2),
            VermaModule::new(ScalarK::one(), ScalarK::from_rat(1, 2), 4).unwrap(),
        )
        .unwrap();
        let report = verify_module_axioms(&module, 2, 2).unwrap();
        assert!(report.passed(), "{}", report.summary());
    }
}
