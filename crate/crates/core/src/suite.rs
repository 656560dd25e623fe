//! Named certificate suites over seeded corpora, with replayable
//! reports.
//!
//! Every case re-runs through the same check function during replay,
//! so a serialized reproducer always reproduces its verdict. Reports
//! are deterministic for a fixed (suite, config) pair.

use num_traits::{Signed, Zero};
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::corpus::{
    rand_net, rand_nonzero_rat, rand_pure_combo, rand_rat, rand_sparse, rand_unit_combo,
    rand_unit_sparse, rng_for, SuiteConfig,
};
use crate::daugavet::{
    daugavet_defect, inf_sum_counterexample, slice_point_cert, weakstar_slice_cert,
    InfSumFunctional, RankOneOp,
};
use crate::error::{Error, Result};
use crate::rat::{format_rat, parse_rat, rat, rat_int, Rat};
use crate::renorm::{
    equivalence_scan, lemma41_suite, model_norm, p_r, renorm_type_check, EmbeddingModel,
    ModelSeminorm,
};
use crate::signs::{double_norming_witness, eps_orthogonality_check, DualVector};
use crate::sparse::{norm_l1, SparseVec};
use crate::thickness::{
    net_radius_bruteforce, thickness_witness, type_trajectory, FiniteNet, TrajectorySequence,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteName {
    Defect,
    Signs,
    Thickness,
    Renorm,
    All,
}

impl std::str::FromStr for SuiteName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "defect" => Ok(SuiteName::Defect),
            "signs" => Ok(SuiteName::Signs),
            "thickness" => Ok(SuiteName::Thickness),
            "renorm" => Ok(SuiteName::Renorm),
            "all" => Ok(SuiteName::All),
            other => Err(Error::UnknownSuite(other.to_string())),
        }
    }
}

impl std::fmt::Display for SuiteName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SuiteName::Defect => "defect",
            SuiteName::Signs => "signs",
            SuiteName::Thickness => "thickness",
            SuiteName::Renorm => "renorm",
            SuiteName::All => "all",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteCase {
    pub index: u64,
    pub check: String,
    pub passed: bool,
    pub detail: String,
    /// Serialized inputs; replaying them reproduces the verdict.
    pub reproducer: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteSummary {
    pub total: u64,
    pub passed: u64,
    pub failed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub config: SuiteConfig,
    pub summary: SuiteSummary,
    pub cases: Vec<SuiteCase>,
}

impl SuiteReport {
    fn assemble(suite: String, config: SuiteConfig, mut cases: Vec<SuiteCase>) -> Self {
        for (i, case) in cases.iter_mut().enumerate() {
            case.index = i as u64 + 1;
        }
        let total = cases.len() as u64;
        let passed = cases.iter().filter(|c| c.passed).count() as u64;
        SuiteReport {
            suite,
            config,
            summary: SuiteSummary {
                total,
                passed,
                failed: total - passed,
            },
            cases,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }
}

const STREAM_DEFECT: u64 = 1;
const STREAM_SIGNS: u64 = 2;
const STREAM_THICKNESS: u64 = 3;
const STREAM_RENORM: u64 = 4;

fn push(cases: &mut Vec<SuiteCase>, check: &str, outcome: (bool, String), reproducer: Value) {
    cases.push(SuiteCase {
        index: 0,
        check: check.to_string(),
        passed: outcome.0,
        detail: outcome.1,
        reproducer,
    });
}

/// The pinned off-span operators with strictly positive defect.
pub fn pinned_counterexamples() -> Vec<(DualVector, SparseVec, Rat)> {
    let e = SparseVec::basis;
    vec![
        (
            DualVector::from_correction(e(1).neg()),
            e(1),
            rat_int(1),
        ),
        (
            DualVector::from_correction(e(1).neg()),
            e(1).add(&e(2)).scale(&rat(1, 2)),
            rat_int(1),
        ),
        (
            DualVector::from_correction(
                SparseVec::from_entries([(1, rat(-1, 2)), (3, rat(-1, 2))]).unwrap(),
            ),
            e(1).add(&e(3)).scale(&rat(1, 2)),
            rat(1, 2),
        ),
    ]
}

fn check_defect(y_star: &DualVector, x: &SparseVec, expected: &Rat) -> (bool, String) {
    match daugavet_defect(&RankOneOp::new(y_star.clone(), x.clone())) {
        Ok(d) => (d == *expected, format!("defect = {}", format_rat(&d))),
        Err(e) => (false, e.to_string()),
    }
}

fn check_slice(x: &SparseVec, y_star: &DualVector) -> (bool, String) {
    match slice_point_cert(x, y_star, &Rat::zero()) {
        Ok(r) => (
            r.value == rat_int(2),
            format!("||x + y|| = {}", format_rat(&r.value)),
        ),
        Err(e) => (false, e.to_string()),
    }
}

fn check_weakstar(x_star: &DualVector, x: &SparseVec) -> (bool, String) {
    match weakstar_slice_cert(x_star, x, &Rat::zero()) {
        Ok(r) => (
            r.value == rat_int(2),
            format!("||x* + f_n|| = {}", format_rat(&r.value)),
        ),
        Err(e) => (false, e.to_string()),
    }
}

fn check_infsum(z_star: &InfSumFunctional) -> (bool, String) {
    match inf_sum_counterexample(z_star) {
        Ok(o) => {
            let floor = rat_int(1).min(rat_int(2) * z_star.scalar_part.abs());
            let ok = o.extreme_sup <= o.sup_bound
                && o.defect_lower_bound >= floor
                && o.defect_lower_bound.is_positive();
            (
                ok,
                format!(
                    "sup = {}, defect >= {}",
                    format_rat(&o.extreme_sup),
                    format_rat(&o.defect_lower_bound)
                ),
            )
        }
        Err(e) => (false, e.to_string()),
    }
}

fn check_isometry(y_star: &DualVector) -> (bool, String) {
    let expected = y_star.combo_abs_sum();
    match y_star.norm() {
        Ok((norm, j)) => {
            let attained = y_star.coordinate(j).abs() == norm;
            (
                norm == expected && attained,
                format!("norm = {} at j = {j}", format_rat(&norm)),
            )
        }
        Err(e) => (false, e.to_string()),
    }
}

fn check_double_norming(x: &SparseVec, m: u64) -> (bool, String) {
    match double_norming_witness(x, m) {
        Ok(n) => {
            let hit = DualVector::f_basis(n).eval(x) == norm_l1(x);
            (n > m && hit, format!("m = {m}, n = {n}"))
        }
        Err(e) => (false, e.to_string()),
    }
}

fn check_orthogonality(coefficients: &[Rat], t: &Rat) -> (bool, String) {
    let expected: Rat = coefficients.iter().map(|a| a.abs()).sum::<Rat>() + t.abs();
    match eps_orthogonality_check(coefficients, t) {
        Ok(r) => (
            r.value == expected,
            format!("||x + t e|| = {}", format_rat(&r.value)),
        ),
        Err(e) => (false, e.to_string()),
    }
}

fn check_thickness(net: &FiniteNet) -> (bool, String) {
    let (y, distances) = thickness_witness(net);
    let all_two = distances.iter().all(|d| *d == rat_int(2));
    (
        all_two,
        format!("m = {}, points = {}", y.max_support(), distances.len()),
    )
}

fn check_trajectory(x: &SparseVec, n_max: u64, model: Option<&EmbeddingModel>) -> (bool, String) {
    let sequence = match model {
        None => TrajectorySequence::Basis,
        Some(m) => TrajectorySequence::ModelPairs(m),
    };
    match type_trajectory(x, n_max, sequence) {
        Ok(t) => (
            t.stable_beyond_bound(),
            format!("stabilization = {}", t.stabilization),
        ),
        Err(e) => (false, e.to_string()),
    }
}

fn check_net_radius(
    d: u64,
    net: &FiniteNet,
    expected_radius: &Rat,
    expected_maximizer: Option<&SparseVec>,
) -> (bool, String) {
    match net_radius_bruteforce(d, net) {
        Ok((r, y)) => {
            let ok = r == *expected_radius
                && expected_maximizer.is_none_or(|want| y == *want);
            (ok, format!("radius = {} at {y}", format_rat(&r)))
        }
        Err(e) => (false, e.to_string()),
    }
}

fn check_renorm_type(x: &SparseVec, n: u64) -> (bool, String) {
    let model = EmbeddingModel::consecutive();
    match (renorm_type_check(x, n, &model), model_norm(x, &model)) {
        (Ok(r), Ok(base)) => (
            r.value == base + rat_int(1),
            format!("|||x + y_{n}||| = {}", format_rat(&r.value)),
        ),
        (Err(e), _) | (_, Err(e)) => (false, e.to_string()),
    }
}

fn check_ratio(x: &SparseVec, expected: Option<&Rat>) -> (bool, String) {
    let model = EmbeddingModel::consecutive();
    match equivalence_scan(std::slice::from_ref(x), &model) {
        Ok((lo, hi)) => {
            let in_band = lo >= rat(1, 3) && hi <= rat_int(2);
            let hit = expected.is_none_or(|want| lo == *want && hi == *want);
            (in_band && hit, format!("ratio = {}", format_rat(&lo)))
        }
        Err(e) => (false, e.to_string()),
    }
}

fn check_p_r_stability(x: &SparseVec, r: &Rat) -> (bool, String) {
    let model = EmbeddingModel::consecutive();
    match (p_r(x, r, &ModelSeminorm, &model), model_norm(x, &model)) {
        (Ok(v), Ok(base)) => (
            v == base,
            format!("p_r = {} = |||x|||", format_rat(&v)),
        ),
        (Err(e), _) | (_, Err(e)) => (false, e.to_string()),
    }
}

fn check_lemma41(samples: &[SparseVec], scalars: &[Rat]) -> (bool, String) {
    let model = EmbeddingModel::consecutive();
    match lemma41_suite(samples, scalars, &ModelSeminorm, &model) {
        Ok(report) => {
            let detail = report
                .items
                .iter()
                .map(|i| format!("{}:{}", i.item, if i.passed { "ok" } else { "FAIL" }))
                .collect::<Vec<_>>()
                .join(" ");
            (report.all_pass(), detail)
        }
        Err(e) => (false, e.to_string()),
    }
}

fn defect_suite(cfg: &SuiteConfig) -> Vec<SuiteCase> {
    let mut rng = rng_for(cfg.seed, STREAM_DEFECT);
    let mut cases = Vec::new();
    let combo_rows = cfg.max_support.min(8);
    for _ in 0..cfg.cases {
        let y = rand_pure_combo(&mut rng, combo_rows, cfg.max_gen, cfg.max_denom);
        let x = rand_sparse(&mut rng, 0, cfg.max_support, cfg.max_gen, cfg.max_denom);
        push(
            &mut cases,
            "defect-zero",
            check_defect(&y, &x, &Rat::zero()),
            json!({"y_star": y, "x": x, "expected": "0"}),
        );

        let xu = rand_unit_sparse(&mut rng, cfg.max_support, cfg.max_gen, cfg.max_denom);
        let yu = rand_unit_combo(&mut rng, combo_rows, cfg.max_gen, cfg.max_denom);
        push(
            &mut cases,
            "slice-point",
            check_slice(&xu, &yu),
            json!({"x": xu, "y_star": yu}),
        );

        let xs = rand_unit_combo(&mut rng, combo_rows, cfg.max_gen, cfg.max_denom);
        let xv = rand_unit_sparse(&mut rng, cfg.max_support, cfg.max_gen, cfg.max_denom);
        push(
            &mut cases,
            "weakstar-slice",
            check_weakstar(&xs, &xv),
            json!({"x_star": xs, "x": xv}),
        );

        let b_abs = rat(rng.gen_range(1..=9), 10);
        let b0 = if rng.gen() { b_abs.clone() } else { -b_abs.clone() };
        let x_part = rand_unit_combo(&mut rng, combo_rows, cfg.max_gen, cfg.max_denom)
            .scale(&(rat_int(1) - &b_abs));
        let z_star = InfSumFunctional {
            x_part,
            scalar_part: b0,
        };
        push(
            &mut cases,
            "inf-sum",
            check_infsum(&z_star),
            json!({"z_star": z_star}),
        );
    }
    for (y, x, expected) in pinned_counterexamples() {
        push(
            &mut cases,
            "defect-counterexample",
            check_defect(&y, &x, &expected),
            json!({"y_star": y, "x": x, "expected": format_rat(&expected)}),
        );
    }
    cases
}

fn signs_suite(cfg: &SuiteConfig) -> Vec<SuiteCase> {
    let mut rng = rng_for(cfg.seed, STREAM_SIGNS);
    let mut cases = Vec::new();
    for _ in 0..cfg.cases {
        let y = rand_pure_combo(&mut rng, cfg.max_support, cfg.max_gen, cfg.max_denom);
        push(&mut cases, "isometry", check_isometry(&y), json!({"y_star": y}));

        let x = rand_unit_sparse(&mut rng, cfg.max_support, cfg.max_gen, cfg.max_denom);
        for m in [1u64, 10, 1_000, 100_000] {
            push(
                &mut cases,
                "double-norming",
                check_double_norming(&x, m),
                json!({"x": x, "m": m}),
            );
        }

        let count = rng.gen_range(0..=cfg.max_support);
        let coefficients: Vec<Rat> = (0..count)
            .map(|_| rand_rat(&mut rng, cfg.max_denom))
            .collect();
        let t = rand_rat(&mut rng, cfg.max_denom);
        push(
            &mut cases,
            "orthogonality",
            check_orthogonality(&coefficients, &t),
            json!({
                "coefficients": coefficients.iter().map(format_rat).collect::<Vec<_>>(),
                "t": format_rat(&t),
            }),
        );
    }
    cases
}

fn thickness_suite(cfg: &SuiteConfig) -> Vec<SuiteCase> {
    let mut rng = rng_for(cfg.seed, STREAM_THICKNESS);
    let mut cases = Vec::new();
    for i in 0..cfg.cases {
        let net = rand_net(&mut rng, 100, cfg.max_support, cfg.max_gen, cfg.max_denom);
        push(
            &mut cases,
            "thickness-witness",
            check_thickness(&net),
            json!({"net": net}),
        );

        let x = rand_sparse(&mut rng, 0, cfg.max_support, cfg.max_gen, cfg.max_denom);
        let n_max = x.max_support() + 4;
        push(
            &mut cases,
            "type-trajectory",
            check_trajectory(&x, n_max, None),
            json!({"x": x, "n_max": n_max}),
        );

        if i % 2 == 0 {
            let model = EmbeddingModel::consecutive();
            let n_max = model.stabilization_bound(&x) + 3;
            push(
                &mut cases,
                "type-trajectory-model",
                check_trajectory(&x, n_max, Some(&model)),
                json!({"x": x, "n_max": n_max}),
            );
        }
    }

    let e = SparseVec::basis;
    let cross = FiniteNet::new(vec![e(1), e(1).neg(), e(2), e(2).neg()]).unwrap();
    let half = SparseVec::from_entries([(1, rat(1, 2)), (2, rat(1, 2))]).unwrap();
    push(
        &mut cases,
        "net-radius",
        check_net_radius(2, &cross, &rat_int(1), Some(&half)),
        json!({"d": 2, "net": cross, "expected_radius": "1", "expected_maximizer": half}),
    );
    let single = FiniteNet::new(vec![e(1)]).unwrap();
    push(
        &mut cases,
        "net-radius",
        check_net_radius(1, &single, &rat_int(2), Some(&e(1).neg())),
        json!({"d": 1, "net": single, "expected_radius": "2", "expected_maximizer": e(1).neg()}),
    );
    let pair = FiniteNet::new(vec![e(1), e(1).neg()]).unwrap();
    push(
        &mut cases,
        "net-radius",
        check_net_radius(2, &pair, &rat_int(2), None),
        json!({"d": 2, "net": pair, "expected_radius": "2", "expected_maximizer": null}),
    );
    cases
}

fn renorm_suite(cfg: &SuiteConfig) -> Vec<SuiteCase> {
    let mut rng = rng_for(cfg.seed, STREAM_RENORM);
    let mut cases = Vec::new();
    let model = EmbeddingModel::consecutive();
    for i in 0..cfg.cases {
        let x = rand_sparse(&mut rng, 0, cfg.max_support, cfg.max_gen, cfg.max_denom);
        let n = model.stabilization_bound(&x) + 1 + i % 3;
        push(
            &mut cases,
            "renorm-type",
            check_renorm_type(&x, n),
            json!({"x": x, "n": n}),
        );

        if !norm_l1(&x).is_zero() {
            push(
                &mut cases,
                "equivalence-ratio",
                check_ratio(&x, None),
                json!({"x": x, "expected": null}),
            );
        }

        let r = rand_nonzero_rat(&mut rng, cfg.max_denom).abs();
        push(
            &mut cases,
            "p-r-stability",
            check_p_r_stability(&x, &r),
            json!({"x": x, "r": format_rat(&r)}),
        );
    }

    let e1 = SparseVec::basis(1);
    push(
        &mut cases,
        "ratio-attained",
        check_ratio(&e1, Some(&rat_int(2))),
        json!({"x": e1, "expected": "2"}),
    );

    let samples: Vec<SparseVec> = (0..50)
        .map(|_| rand_sparse(&mut rng, 0, cfg.max_support, cfg.max_gen, cfg.max_denom))
        .collect();
    let scalars = vec![rat(1, 2), rat_int(1), rat(3, 2), rat_int(2), rat_int(3)];
    push(
        &mut cases,
        "lemma41",
        check_lemma41(&samples, &scalars),
        json!({
            "samples": samples,
            "scalars": scalars.iter().map(format_rat).collect::<Vec<_>>(),
        }),
    );
    cases
}

pub fn run_suite(name: SuiteName, cfg: &SuiteConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let cases = match name {
        SuiteName::Defect => defect_suite(cfg),
        SuiteName::Signs => signs_suite(cfg),
        SuiteName::Thickness => thickness_suite(cfg),
        SuiteName::Renorm => renorm_suite(cfg),
        SuiteName::All => {
            let mut all = defect_suite(cfg);
            all.extend(signs_suite(cfg));
            all.extend(thickness_suite(cfg));
            all.extend(renorm_suite(cfg));
            all
        }
    };
    Ok(SuiteReport::assemble(name.to_string(), cfg.clone(), cases))
}

fn field<'a>(value: &'a Value, key: &str) -> Result<&'a Value> {
    value
        .get(key)
        .ok_or_else(|| Error::InvalidConfig(format!("reproducer is missing field {key:?}")))
}

fn parse_field<T: serde::de::DeserializeOwned>(value: &Value, key: &str) -> Result<T> {
    serde_json::from_value(field(value, key)?.clone())
        .map_err(|e| Error::InvalidConfig(format!("bad reproducer field {key:?}: {e}")))
}

fn parse_rat_field(value: &Value, key: &str) -> Result<Rat> {
    let s: String = parse_field(value, key)?;
    parse_rat(&s)
}

/// Re-runs the check a reproducer came from; returns its verdict.
pub fn replay_case(check: &str, reproducer: &Value) -> Result<bool> {
    let verdict = match check {
        "defect-zero" | "defect-counterexample" => {
            let y: DualVector = parse_field(reproducer, "y_star")?;
            let x: SparseVec = parse_field(reproducer, "x")?;
            let expected = parse_rat_field(reproducer, "expected")?;
            check_defect(&y, &x, &expected)
        }
        "slice-point" => {
            let x: SparseVec = parse_field(reproducer, "x")?;
            let y: DualVector = parse_field(reproducer, "y_star")?;
            check_slice(&x, &y)
        }
        "weakstar-slice" => {
            let x_star: DualVector = parse_field(reproducer, "x_star")?;
            let x: SparseVec = parse_field(reproducer, "x")?;
            check_weakstar(&x_star, &x)
        }
        "inf-sum" => {
            let z_star: InfSumFunctional = parse_field(reproducer, "z_star")?;
            check_infsum(&z_star)
        }
        "isometry" => {
            let y: DualVector = parse_field(reproducer, "y_star")?;
            check_isometry(&y)
        }
        "double-norming" => {
            let x: SparseVec = parse_field(reproducer, "x")?;
            let m: u64 = parse_field(reproducer, "m")?;
            check_double_norming(&x, m)
        }
        "orthogonality" => {
            let raw: Vec<String> = parse_field(reproducer, "coefficients")?;
            let coefficients = raw
                .iter()
                .map(|s| parse_rat(s))
                .collect::<Result<Vec<_>>>()?;
            let t = parse_rat_field(reproducer, "t")?;
            check_orthogonality(&coefficients, &t)
        }
        "thickness-witness" => {
            let net: FiniteNet = parse_field(reproducer, "net")?;
            check_thickness(&net)
        }
        "type-trajectory" => {
            let x: SparseVec = parse_field(reproducer, "x")?;
            let n_max: u64 = parse_field(reproducer, "n_max")?;
            check_trajectory(&x, n_max, None)
        }
        "type-trajectory-model" => {
            let x: SparseVec = parse_field(reproducer, "x")?;
            let n_max: u64 = parse_field(reproducer, "n_max")?;
            check_trajectory(&x, n_max, Some(&EmbeddingModel::consecutive()))
        }
        "net-radius" => {
            let d: u64 = parse_field(reproducer, "d")?;
            let net: FiniteNet = parse_field(reproducer, "net")?;
            let expected_radius = parse_rat_field(reproducer, "expected_radius")?;
            let expected_maximizer: Option<SparseVec> =
                parse_field(reproducer, "expected_maximizer")?;
            check_net_radius(d, &net, &expected_radius, expected_maximizer.as_ref())
        }
        "renorm-type" => {
            let x: SparseVec = parse_field(reproducer, "x")?;
            let n: u64 = parse_field(reproducer, "n")?;
            check_renorm_type(&x, n)
        }
        "equivalence-ratio" | "ratio-attained" => {
            let x: SparseVec = parse_field(reproducer, "x")?;
            let expected: Option<String> = parse_field(reproducer, "expected")?;
            let expected = expected.map(|s| parse_rat(&s)).transpose()?;
            check_ratio(&x, expected.as_ref())
        }
        "p-r-stability" => {
            let x: SparseVec = parse_field(reproducer, "x")?;
            let r = parse_rat_field(reproducer, "r")?;
            check_p_r_stability(&x, &r)
        }
        "lemma41" => {
            let samples: Vec<SparseVec> = parse_field(reproducer, "samples")?;
            let raw: Vec<String> = parse_field(reproducer, "scalars")?;
            let scalars = raw
                .iter()
                .map(|s| parse_rat(s))
                .collect::<Result<Vec<_>>>()?;
            check_lemma41(&samples, &scalars)
        }
        other => return Err(Error::UnknownCheck(other.to_string())),
    };
    Ok(verdict.0)
}
