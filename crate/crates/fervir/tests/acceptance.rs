//! Acceptance suite: every criterion runs exhaustively at its stated window
//! with exact (zero-residual) checks and prints one pass/fail line.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::Instant;

use fervir::findim::{build_vm, cyclic_span, decompose, find_proper_submodule, is_simple, Subspace};
use fervir::fock::{
    self, character, lbar_act, psi_act, weight_of, FockModule, FockVector, Monomial,
};
use fervir::rank2::{
    classify_rank2, generate_rank2_data, ClassificationOutcome, InconsistencyKind, Rank2Family,
    Rank2Tag,
};
use fervir::scalar::ScalarK;
use fervir::superalg::{jacobi_check, AlgebraId, Delta, HalfIndex, Parity};
use fervir::verify::verify_module_axioms;
use fervir::virmod::{verma_act, Poly, TensorModule, VermaModule, VermaVector};
use fervir::{cli, Error};

fn k(n: i64) -> ScalarK {
    ScalarK::from_int(n)
}

fn kr(p: i64, q: i64) -> ScalarK {
    ScalarK::from_rat(p, q)
}

fn hi(n: i64) -> HalfIndex {
    HalfIndex::integer(n)
}

fn pass(criterion: u32, name: &str) {
    println!("ACCEPTANCE {criterion} ({name}): PASS");
}

/// Deterministic generator for the seeded samples.
struct SplitMix64(u64);

impl SplitMix64 {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn small(&mut self) -> i64 {
        (self.next() % 7) as i64 - 3
    }
}

/// All monomials over the delta grid with indices up to `max_index`.
fn monomials_up_to(delta: Delta, max_index: i64) -> Vec<Monomial> {
    let indices: Vec<HalfIndex> = delta
        .grid(max_index)
        .into_iter()
        .filter(|i| i.twice() >= 0)
        .collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << indices.len()) {
        let chosen: Vec<HalfIndex> = indices
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, idx)| *idx)
            .collect();
        out.push(Monomial::new(chosen).unwrap());
    }
    out
}

// -------------------------------------------------------------------------
// 1. Graded Jacobi identity for all six algebras, |index| <= 6.
// -------------------------------------------------------------------------
#[test]
fn criterion_01_jacobi_suite() {
    let start = Instant::now();
    for algebra in [
        AlgebraId::TwistedHV,
        AlgebraId::Vir,
        AlgebraId::Fermion(Delta::Zero),
        AlgebraId::Fermion(Delta::Half),
        AlgebraId::FermionVirasoro(Delta::Zero),
        AlgebraId::FermionVirasoro(Delta::Half),
    ] {
        let report = jacobi_check(algebra, 6).unwrap();
        assert!(report.passed(), "{algebra}: {}", report.summary());
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs() < 30,
        "jacobi suite took {elapsed:?}, budget is 30s"
    );
    pass(1, "jacobi identity, six algebras, |index| <= 6");
}

// -------------------------------------------------------------------------
// 2. Virasoro commutators of the normal-ordered operators, with the exact
//    central value (m^3 - m)/24, on both grids.
// -------------------------------------------------------------------------
#[test]
fn criterion_02_normal_ordered_commutators() {
    for delta in [Delta::Zero, Delta::Half] {
        let module = FockModule::v(delta);
        let vectors: Vec<FockVector> = monomials_up_to(delta, 6)
            .into_iter()
            .map(|m| FockVector::basis(module.clone(), m).unwrap())
            .collect();
        for m in -4..=4i64 {
            for n in -4..=4i64 {
                for v in &vectors {
                    let lhs = lbar_act(m, &lbar_act(n, v).unwrap())
                        .unwrap()
                        .sub(&lbar_act(n, &lbar_act(m, v).unwrap()).unwrap())
                        .unwrap();
                    let mut rhs = lbar_act(m + n, v).unwrap().scale(&k(m - n));
                    if m + n == 0 {
                        rhs = rhs
                            .add(&v.scale(&kr(m * m * m - m, 24)))
                            .unwrap();
                    }
                    assert_eq!(lhs, rhs, "commutator at ({m},{n}) on {v}, delta={delta}");
                }
            }
        }
    }
    // Spot value: [L_2, L_{-2}] . 1 = (4/16 + 6/24) . 1 = (1/2) . 1.
    let v0 = FockModule::v(Delta::Zero);
    let vac = FockVector::vacuum(v0);
    let got = lbar_act(2, &lbar_act(-2, &vac).unwrap())
        .unwrap()
        .sub(&lbar_act(-2, &lbar_act(2, &vac).unwrap()).unwrap())
        .unwrap();
    assert_eq!(got, vac.scale(&kr(1, 2)));
    pass(2, "normal-ordered commutators with central value (m^3-m)/24");
}

// -------------------------------------------------------------------------
// 3. Mixed commutators [L_m, psi_n] = (-n - m/2) psi_{m+n} on the same
//    window.
// -------------------------------------------------------------------------
#[test]
fn criterion_03_mixed_commutators() {
    for delta in [Delta::Zero, Delta::Half] {
        let module = FockModule::v(delta);
        let vectors: Vec<FockVector> = monomials_up_to(delta, 6)
            .into_iter()
            .map(|m| FockVector::basis(module.clone(), m).unwrap())
            .collect();
        for m in -4..=4i64 {
            for n in delta.grid(4) {
                for v in &vectors {
                    let lhs = lbar_act(m, &psi_act(n, v).unwrap())
                        .unwrap()
                        .sub(&psi_act(n, &lbar_act(m, v).unwrap()).unwrap())
                        .unwrap();
                    let coeff = kr(-(n.twice() + m), 2);
                    let rhs = psi_act(n.add_int(m), v).unwrap().scale(&coeff);
                    assert_eq!(lhs, rhs, "[L_{m}, psi_{n}] on {v}, delta={delta}");
                }
            }
        }
    }
    pass(3, "mixed commutators [L_m, psi_n]");
}

// -------------------------------------------------------------------------
// 4. Weight spectrum: the eigenvalue of xi_J is (1-2 delta)/16 + sum(J) for
//    all J with max index <= 8.
// -------------------------------------------------------------------------
#[test]
fn criterion_04_weight_spectrum() {
    for delta in [Delta::Zero, Delta::Half] {
        let module = FockModule::v(delta);
        for mono in monomials_up_to(delta, 8) {
            let v = FockVector::basis(module.clone(), mono.clone()).unwrap();
            let eigen = &delta.vacuum_energy() + &mono.weight_sum();
            assert_eq!(lbar_act(0, &v).unwrap(), v.scale(&eigen), "L_0 on {v}");
            assert_eq!(
                weight_of(&module, &mono, &delta.vacuum_energy()),
                eigen,
                "weight bookkeeping on {mono}"
            );
        }
    }
    pass(4, "weight spectrum (1-2*delta)/16 + sum(J), indices <= 8");
}

// -------------------------------------------------------------------------
// 5. Character table vs an independent distinct-partition oracle.
// -------------------------------------------------------------------------
#[test]
fn criterion_05_character_table() {
    let start = Instant::now();
    // Oracle: number of partitions into distinct parts drawn from the
    // doubled-value list, by subset-sum dynamic programming.
    let distinct_partitions = |parts_twice: &[i64], top_twice: i64| -> Vec<u64> {
        let mut dp = vec![0u64; (top_twice + 1) as usize];
        dp[0] = 1;
        for &p in parts_twice {
            for t in (p..=top_twice).rev() {
                dp[t as usize] += dp[(t - p) as usize];
            }
        }
        dp
    };

    // Integer grid up to n = 20: dimension = 2 * q(n).
    let rows = character(Delta::Zero, 20).unwrap();
    let parts: Vec<i64> = (1..=20).map(|p| 2 * p).collect();
    let q = distinct_partitions(&parts, 40);
    assert_eq!(rows.len(), 21);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row.n, hi(i as i64));
        assert_eq!(row.dimension, 2 * q[2 * i], "dimension at n = {i}");
    }

    // Half grid up to n = 20 on the half-integer lattice.
    let rows = character(Delta::Half, 20).unwrap();
    let parts: Vec<i64> = (0..=20).map(|p| 2 * p + 1).collect();
    let q = distinct_partitions(&parts, 40);
    assert_eq!(rows.len(), 41);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row.n.twice(), i as i64);
        assert_eq!(row.dimension, q[i], "dimension at 2n = {i}");
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 5, "character took {elapsed:?}, budget 5s");
    pass(5, "character table = 2 * distinct partitions, n <= 20");
}

// -------------------------------------------------------------------------
// 6. Simplicity of the truncations: cyclic generation from every probe, and
//    the exact proper-submodule search for m <= 2.
// -------------------------------------------------------------------------
#[test]
fn criterion_06_truncation_simplicity() {
    for m in 0..=3i64 {
        let module = build_vm(m, &ScalarK::one()).unwrap();
        assert!(is_simple(&module), "truncation at {m} must be simple");
        assert_eq!(module.dimension(), 1 << (m + 1));
    }
    for m in 0..=2i64 {
        let module = build_vm(m, &ScalarK::one()).unwrap();
        assert_eq!(
            find_proper_submodule(&module).unwrap(),
            None,
            "exact search at m = {m}"
        );
        // The search must also detect non-simplicity.
        let sum = module.direct_sum(&module).unwrap();
        assert!(!is_simple(&sum));
        let witness = find_proper_submodule(&sum).unwrap().expect("proper submodule");
        assert!(witness.dim() > 0 && witness.dim() < sum.dimension());
    }
    pass(6, "truncation simplicity, m <= 3, exact search m <= 2");
}

// -------------------------------------------------------------------------
// 7. Constructive decomposition on the sum of a truncation and its sign
//    twist, over a seeded sample of homogeneous vectors.
// -------------------------------------------------------------------------
#[test]
fn criterion_07_constructive_decomposition() {
    let a = build_vm(2, &ScalarK::one()).unwrap();
    let b = build_vm(2, &k(-1)).unwrap();
    let module = a.direct_sum(&b).unwrap();
    let n = module.dimension();
    let mut rng = SplitMix64(0x5eed_cafe_f00d_0001);
    let mut produced = 0;
    while produced < 20 {
        let parity = if produced % 2 == 0 { Parity::Even } else { Parity::Odd };
        let mut v = vec![ScalarK::zero(); n];
        for (i, slot) in v.iter_mut().enumerate() {
            if module.parity_mask()[i] == parity {
                *slot = k(rng.small());
            }
        }
        if v.iter().all(ScalarK::is_zero) {
            continue;
        }
        produced += 1;
        let summands = decompose(&module, &v).unwrap();
        let total: usize = summands.iter().map(Subspace::dim).sum();
        let cyclic = cyclic_span(&module, &v).unwrap();
        assert_eq!(total, cyclic.dim(), "summands must fill the cyclic span");
        for s in &summands {
            assert_eq!(s.dim(), 8, "every summand is simple of dimension 2^3");
        }
    }
    pass(7, "decomposition into simple dimension-8 summands, 20 seeded vectors");
}

// -------------------------------------------------------------------------
// 8. Module axioms for the four rank-2 families over the parameter grid.
// -------------------------------------------------------------------------

fn rank2_grid() -> Vec<Rank2Family> {
    let mut out = Vec::new();
    let sqrt_lambdas = [k(1), k(2), k(3)];
    let a_values = [k(0), k(1), kr(5, 2), kr(-3, 2)];
    let b_values = [k(1), k(2)];
    for delta in [Delta::Zero, Delta::Half] {
        for s in &sqrt_lambdas {
            for b in &b_values {
                for a in &a_values {
                    for tag in [Rank2Tag::Omega, Rank2Tag::OmegaPrime] {
                        out.push(
                            Rank2Family::new(tag, delta, s.clone(), Some(a.clone()), b.clone())
                                .unwrap(),
                        );
                    }
                }
                for tag in [Rank2Tag::OmegaDoublePrime, Rank2Tag::OmegaDoublePrimeTilde] {
                    out.push(Rank2Family::new(tag, delta, s.clone(), None, b.clone()).unwrap());
                }
            }
        }
    }
    out
}

#[test]
fn criterion_08_rank2_module_axioms() {
    let start = Instant::now();
    let grid = rank2_grid();
    assert_eq!(grid.len(), 120);
    for family in &grid {
        let report = verify_module_axioms(family, 5, 6).unwrap();
        assert!(
            report.passed(),
            "{} delta={} s={} b={}: {}",
            family.tag,
            family.delta,
            family.sqrt_lambda,
            family.b,
            report.summary()
        );
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs() < 60,
        "rank-2 sweep took {elapsed:?}, budget 60s"
    );
    pass(8, "rank-2 family axioms, 120 grid points, M=5, D=6");
}

// -------------------------------------------------------------------------
// 9. Classifier round trip over the same grid, plus the decoupled and
//    inconsistent outcomes.
// -------------------------------------------------------------------------
#[test]
fn criterion_09_classifier_round_trip() {
    for family in rank2_grid() {
        let data = generate_rank2_data(&family, 4).unwrap();
        match classify_rank2(&data).unwrap() {
            ClassificationOutcome::Identified {
                family: got,
                parity_changed,
            } => {
                assert!(!parity_changed);
                assert_eq!(got, family, "round trip of {}", family.tag);
            }
            other => panic!("expected identification of {}, got {other}", family.tag),
        }
    }

    // All-zero tables: the odd part decouples.
    let probe = Rank2Family::new(Rank2Tag::Omega, Delta::Zero, k(1), Some(k(0)), k(1)).unwrap();
    let mut zero = generate_rank2_data(&probe, 4).unwrap();
    for p in zero.f_table.values_mut() {
        *p = Poly::zero();
    }
    assert_eq!(
        classify_rank2(&zero).unwrap(),
        ClassificationOutcome::OddPartDecoupled
    );

    // A table violating the index recursion is flagged as exactly that (the
    // corruption keeps the degree constant so no earlier check fires).
    let mut broken = generate_rank2_data(&probe, 4).unwrap();
    broken.f_table.insert(hi(2), Poly::constant(k(17)));
    match classify_rank2(&broken).unwrap() {
        ClassificationOutcome::Inconsistent { kind, .. } => {
            assert_eq!(kind, InconsistencyKind::Recursion);
        }
        other => panic!("expected recursion inconsistency, got {other}"),
    }
    pass(9, "classifier round trip, decoupled and inconsistent outcomes");
}

// -------------------------------------------------------------------------
// 10. Tensor modules: all defining relations on the truncation-safe window,
//     with z acting as the level and c as 1/2 plus the factor charge.
// -------------------------------------------------------------------------
#[test]
fn criterion_10_tensor_modules() {
    for delta in [Delta::Zero, Delta::Half] {
        for s in [k(1), k(2)] {
            for (cc, h) in [(k(0), k(0)), (k(1), kr(1, 2))] {
                let module = TensorModule::new(
                    delta,
                    s.clone(),
                    VermaModule::new(cc.clone(), h.clone(), 6).unwrap(),
                )
                .unwrap();
                let report = verify_module_axioms(&module, 3, 3).unwrap();
                assert!(
                    report.passed(),
                    "delta={delta} s={s} cc={cc} h={h}: {}",
                    report.summary()
                );
                // Central scalars.
                assert_eq!(module.level(), &s * &s);
                assert_eq!(module.central_scalar(), &kr(1, 2) + &cc);
            }
        }
    }
    pass(10, "tensor module relations, |m|,|n| <= 3, depth 6");
}

// -------------------------------------------------------------------------
// 11. Highest-weight sanity: L_1 L_{-1} v = 2h v and
//     L_2 L_{-2} v = (4h + cc/2) v.
// -------------------------------------------------------------------------
#[test]
fn criterion_11_highest_weight_sanity() {
    let vir_l = |m: i64| {
        fervir::superalg::AlgebraElement::from_symbol(
            AlgebraId::Vir,
            fervir::superalg::BasisSymbol::L(m),
        )
        .unwrap()
    };
    for (cc, h) in [(k(0), k(0)), (k(1), kr(1, 2))] {
        let module = VermaModule::new(cc.clone(), h.clone(), 6).unwrap();
        let hw = VermaVector::highest_weight_vector(module);
        let got = verma_act(&vir_l(1), &verma_act(&vir_l(-1), &hw).unwrap()).unwrap();
        assert_eq!(got, hw.scale(&(&k(2) * &h)));
        let got = verma_act(&vir_l(2), &verma_act(&vir_l(-2), &hw).unwrap()).unwrap();
        let want = &(&k(4) * &h) + &(&cc * &kr(1, 2));
        assert_eq!(got, hw.scale(&want));
    }
    pass(11, "highest-weight sanity values");
}

// -------------------------------------------------------------------------
// 12. CLI: golden corpus round trips, report schema, exit codes, and the
//     contracted bracket output.
// -------------------------------------------------------------------------

const GOLDEN_CORPUS: &[(&str, &str)] = &[
    ("s0", "L_0"),
    ("s0", "4*L_0 + 1/2*c"),
    ("s0", "3/2*L_-2 + psi_1 - z"),
    ("s0", "-1*L_0"),
    ("s0", "psi_0"),
    ("s0", "(0+1*w2)*psi_0"),
    ("s0", "(1/2-3/4*w2)*L_2 + z"),
    ("s0", "L_-6 + L_6"),
    ("s0", "2*psi_-3 - 5*psi_3"),
    ("s0", "c + z"),
    ("s0", "-7/2*c"),
    ("s0", "(-1/2+1/2*w2)*z"),
    ("s0", "L_-1 + 2*L_0 + 3*L_1 + psi_0"),
    ("s12", "psi_1/2"),
    ("s12", "psi_-3/2 + psi_3/2"),
    ("s12", "(1/2+1/2*w2)*psi_3/2"),
    ("s12", "L_1 - psi_1/2"),
    ("s12", "5*psi_-11/2"),
    ("s12", "-2*L_-3 + c"),
    ("vir", "L_0"),
    ("vir", "c"),
    ("vir", "-2*L_-1 + 3*L_1"),
    ("f0", "psi_0 + z"),
    ("f0", "psi_-4"),
    ("f12", "psi_-1/2"),
    ("f12", "z"),
    ("thv", "d_1 + h_-1"),
    ("thv", "h_0 + 2*c2"),
    ("thv", "c1 + c2 + c3"),
    ("thv", "-3*d_-2 - d_0 + 1/2*h_2"),
];

/// Minimal JSON-schema validation covering the keywords the shipped schema
/// uses: type, required, properties, enum, minimum.
fn validate_schema(schema: &serde_json::Value, value: &serde_json::Value) -> Result<(), String> {
    if let Some(allowed) = schema.get("enum") {
        let ok = allowed
            .as_array()
            .map(|a| a.contains(value))
            .unwrap_or(false);
        if !ok {
            return Err(format!("{value} not in enum {allowed}"));
        }
    }
    if let Some(ty) = schema.get("type").and_then(|t| t.as_str()) {
        let ok = match ty {
            "object" => value.is_object(),
            "string" => value.is_string(),
            "integer" => value.is_i64() || value.is_u64(),
            "boolean" => value.is_boolean(),
            "array" => value.is_array(),
            other => return Err(format!("unsupported schema type {other}")),
        };
        if !ok {
            return Err(format!("{value} is not of type {ty}"));
        }
    }
    if let Some(min) = schema.get("minimum").and_then(|m| m.as_i64()) {
        if let Some(v) = value.as_i64() {
            if v < min {
                return Err(format!("{v} below minimum {min}"));
            }
        }
    }
    if let Some(required) = schema.get("required").and_then(|r| r.as_array()) {
        for key in required {
            let key = key.as_str().expect("required names are strings");
            if value.get(key).is_none() {
                return Err(format!("missing required field {key}"));
            }
        }
    }
    if let Some(props) = schema.get("properties").and_then(|p| p.as_object()) {
        for (key, subschema) in props {
            if let Some(sub) = value.get(key) {
                validate_schema(subschema, sub).map_err(|e| format!("{key}: {e}"))?;
            }
        }
    }
    Ok(())
}

#[test]
fn criterion_12_cli_contract() {
    // Golden parse/format round trips.
    assert_eq!(GOLDEN_CORPUS.len(), 30);
    for (algebra, text) in GOLDEN_CORPUS {
        let id: AlgebraId = algebra.parse().unwrap();
        let el = cli::parse_element(text, id).unwrap();
        assert_eq!(cli::format_element(&el), *text, "round trip of `{text}`");
    }

    let bin = env!("CARGO_BIN_EXE_fervir");

    // Contracted bracket output and exit 0.
    let out = Command::new(bin)
        .args(["bracket", "--algebra", "s0", "L_2", "L_-2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "4*L_0 + 1/2*c");

    // Report JSON validates against the shipped schema, and identical inputs
    // produce byte-identical bodies once duration_ms is removed.
    let schema_text = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../docs/report.schema.json"
    ))
    .unwrap();
    let schema: serde_json::Value = serde_json::from_str(&schema_text).unwrap();
    let run_jacobi = || {
        let out = Command::new(bin)
            .args(["jacobi", "--algebra", "s0", "--range", "3", "--json"])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        String::from_utf8(out.stdout).unwrap()
    };
    let first = run_jacobi();
    let second = run_jacobi();
    let strip = |text: &str| {
        let mut v: serde_json::Value = serde_json::from_str(text).unwrap();
        v.as_object_mut().unwrap().remove("duration_ms");
        serde_json::to_string(&v).unwrap()
    };
    assert_eq!(strip(&first), strip(&second), "reports must be deterministic");
    let report: serde_json::Value = serde_json::from_str(&first).unwrap();
    validate_schema(&schema, &report).unwrap();

    // A failing verification exits 1 and its report carries a witness.
    let probe = Rank2Family::new(Rank2Tag::Omega, Delta::Zero, k(1), Some(k(0)), k(1)).unwrap();
    let mut broken = generate_rank2_data(&probe, 4).unwrap();
    broken.f_table.insert(hi(2), Poly::constant(k(17)));
    let body = serde_json::to_string(&broken).unwrap();
    let out = Command::new(bin)
        .args(["classify-rank2", "--data", &body, "--json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1), "inconsistent data exits 1");
    let outcome: serde_json::Value =
        serde_json::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(outcome["outcome"], "inconsistent");
    assert_eq!(outcome["check"], "recursion");

    // Usage and parse errors exit 2.
    let out = Command::new(bin)
        .args(["bracket", "--algebra", "s0", "L_2", "nonsense(("])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "parse errors exit 2");
    let out = Command::new(bin).args(["no-such-command"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2), "usage errors exit 2");

    // Fail-status reports include the witness (schema invariant).
    let vm = FockModule::v(Delta::Zero);
    let report = verify_module_axioms(&vm, 2, 2).unwrap();
    assert!(report.passed());
    let value = serde_json::to_value(&report).unwrap();
    validate_schema(&schema, &value).unwrap();

    pass(12, "cli golden corpus, schema, exit codes, bracket output");
}

// -------------------------------------------------------------------------
// Supplementary cross-checks tying the criteria together.
// -------------------------------------------------------------------------

/// The full module handles pass the generic sweep as modules over the whole
/// algebra (a different route to criteria 2 and 3: structure constants and
/// the c -> 1/2 action instead of explicit centrals).
#[test]
fn full_module_generic_sweep() {
    for delta in [Delta::Zero, Delta::Half] {
        let report = verify_module_axioms(&FockModule::v(delta), 4, 6).unwrap();
        assert!(report.passed(), "{}", report.summary());
    }
    let twisted = FockModule::v_twisted(Delta::Zero, k(2)).unwrap();
    let report = verify_module_axioms(&twisted, 3, 3).unwrap();
    assert!(report.passed(), "{}", report.summary());
}

/// The window bound of the normal-ordered operator is slack: widening it
/// changes nothing on a spread of vectors.
#[test]
fn normal_ordered_window_is_slack() {
    for delta in [Delta::Zero, Delta::Half] {
        let module = FockModule::v(delta);
        for mono in monomials_up_to(delta, 5) {
            let v = FockVector::basis(module.clone(), mono).unwrap();
            for m_idx in -3..=3 {
                assert_eq!(
                    lbar_act(m_idx, &v).unwrap(),
                    fock::lbar_act_window(m_idx, &v, 5).unwrap()
                );
            }
        }
    }
}

/// classify-rank2 window errors name the missing indices.
#[test]
fn classifier_window_error_names_indices() {
    let probe = Rank2Family::new(Rank2Tag::Omega, Delta::Zero, k(1), Some(k(0)), k(1)).unwrap();
    let mut data = generate_rank2_data(&probe, 4).unwrap();
    let small: BTreeMap<_, _> = data
        .f_table
        .iter()
        .filter(|(idx, _)| idx.twice().abs() <= 2)
        .map(|(i, p)| (*i, p.clone()))
        .collect();
    data.f_table = small.clone();
    data.g_table = small;
    match classify_rank2(&data) {
        Err(Error::WindowTooSmall { missing }) => {
            assert!(missing.contains('2') || missing.contains('3'), "{missing}");
        }
        other => panic!("expected window error, got {other:?}"),
    }
}
