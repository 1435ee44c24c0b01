//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Oracles are closed forms or brute-force sweeps written here.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use oscillometer::approx::{assumption_check, ApproxFamily, ApproxKind, FamilySpec, Ladder, Verdict};
use oscillometer::cli::{self, Builtin};
use oscillometer::distance::{distance_estimate, sandwich_check};
use oscillometer::family::seminorm_sup;
use oscillometer::funcrep::{Arc, ArcAverager, FunctionData, PeriodicSamples, QuadratureRule, TaylorFunction};
use oscillometer::spaces::{bmo_oscillation, build_family, build_family_for, qk_local, KKernel, SpaceDescriptor};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Outcome);

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Run the command-line front end in-process and read back its report.
fn run_cli(command: &str, config: Value) -> (i32, Value) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("config.json");
    std::fs::write(&path, serde_json::to_vec(&config).unwrap()).unwrap();
    let code = cli::run([
        "oscillometer",
        command,
        "--config",
        path.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    let report = std::fs::read(dir.path().join("report.json"))
        .ok()
        .and_then(|b| serde_json::from_slice(&b).ok())
        .unwrap_or(Value::Null);
    (code, report)
}

fn num(v: &Value, key: &str) -> f64 {
    v.pointer(key).and_then(Value::as_f64).unwrap_or(f64::NAN)
}

fn norm_and_distance(space: Value, function: Value) -> (f64, f64, f64) {
    let cfg = json!({"space": space, "function": function});
    let (c1, norm) = run_cli("norm", cfg.clone());
    let (c2, dist) = run_cli("distance", cfg);
    assert_eq!((c1, c2), (0, 0), "exit codes");
    (
        num(&norm, "/value"),
        num(&dist, "/limsup_estimate"),
        num(&dist, "/uncertainty"),
    )
}

fn within(x: f64, lo: f64, hi: f64) -> bool {
    x >= lo && x <= hi
}

fn c1_bloch_log() -> Outcome {
    // sup (1 − |w|²)|f'(w)| = 1 + |w| on the positive axis; outermost shell
    let r = 1.0 - 2f64.powi(-12);
    let oracle = 1.0 + r;
    let (n, d, u) = norm_and_distance(
        json!({"space": "bloch"}),
        json!({"kind": "builtin", "name": "log_singular"}),
    );
    ensure(
        within(n, 1.96, 2.0) && within(d, 1.95, 2.02) && u <= 0.05,
        format!("norm {n:.6} (oracle {oracle:.6}), distance {d:.6} ± {u:.4}"),
    )
}

fn c2_bloch_poly() -> Outcome {
    let c = |re| Complex64::new(re, 0.0);
    let f = FunctionData::Taylor(TaylorFunction::polynomial(vec![c(0.0), c(1.0), c(0.0), c(1.0)]));
    let d = distance_estimate(&SpaceDescriptor::bloch(), &f).map_err(|e| e.to_string())?;
    ensure(d.estimate <= 1e-2, format!("distance {:.3e}", d.estimate))
}

/// Brute-force sup of the mean oscillation of the half-circle indicator
/// over all arcs on the sample grid, as `2s(1 − s)` for covered fraction `s`.
fn step_oracle(n: usize) -> f64 {
    let half = n / 2;
    let mut best = 0.0f64;
    for cells in 1..=n {
        for start in 0..n {
            let ones = (0..cells).filter(|k| (start + k) % n < half).count();
            let s = ones as f64 / cells as f64;
            best = best.max(2.0 * s * (1.0 - s));
        }
    }
    best
}

fn c3_bmo_step() -> Outcome {
    let oracle = step_oracle(64);
    let (n, d, u) = norm_and_distance(
        json!({"space": "bmo_circle", "p": 1}),
        json!({"kind": "builtin", "name": "step_half"}),
    );
    ensure(
        (n - 0.5).abs() <= 0.02 && (d - 0.5).abs() <= 0.02 && (oracle - 0.5).abs() < 1e-12,
        format!("norm {n:.6}, distance {d:.6} ± {u:.4}, sweep oracle {oracle}"),
    )
}

fn c4_rect() -> Outcome {
    // product identity: osc(g⊗g) = a b + a' b' style reduction gives 1/4
    let oracle = {
        let s = step_oracle(32);
        s * s
    };
    let (n, d, u) = norm_and_distance(
        json!({"space": "rect_bmo"}),
        json!({"kind": "builtin", "name": "step_product"}),
    );
    let (code, one) = run_cli(
        "norm",
        json!({"space": {"space": "rect_bmo"}, "function": {"kind": "builtin", "name": "one_variable"}}),
    );
    let n1 = num(&one, "/value");
    ensure(
        (n - 0.25).abs() <= 0.02 && (d - 0.25).abs() <= 0.02 && code == 0 && n1 <= 1e-10,
        format!("norm {n:.6}, distance {d:.6} ± {u:.4}, one-variable {n1:.1e}, oracle {oracle}"),
    )
}

fn c5_lip() -> Outcome {
    let (n, d, u) = norm_and_distance(
        json!({"space": "lip", "alpha": 0.5}),
        json!({"kind": "builtin", "name": "holder_cusp"}),
    );
    ensure(
        (n - 1.0).abs() <= 0.01 && (d - 1.0).abs() <= 0.02,
        format!("norm {n:.6}, distance {d:.6} ± {u:.4}"),
    )
}

fn c6_weighted() -> Outcome {
    let (n, d, u) = norm_and_distance(
        json!({"space": "weighted"}),
        json!({"kind": "builtin", "name": "cauchy_kernel"}),
    );
    ensure(
        within(n, 1.95, 2.02) && within(d, 1.95, 2.02),
        format!("norm {n:.6}, distance {d:.6} ± {u:.4}"),
    )
}

fn c7_qk_quadrature() -> Outcome {
    let z = TaylorFunction::monomial(1, Complex64::new(1.0, 0.0));
    let a = Complex64::new(0.0, 0.0);
    let rule = QuadratureRule::default();
    let log = qk_local(&z, a, &KKernel::Power { exponent: 1.0 }, rule).map_err(|e| e.to_string())?;
    let one = qk_local(&z, a, &KKernel::Constant, rule).map_err(|e| e.to_string())?;
    ensure(
        (log - PI / 2.0).abs() <= 1e-3 && (one - PI).abs() <= 1e-3,
        format!("K=t {log:.8} (π/2 = {:.8}), K=1 {one:.8}", PI / 2.0),
    )
}

fn random_polynomial(rng: &mut ChaCha8Rng) -> TaylorFunction {
    let degree = rng.gen_range(1..=12);
    let mut coeffs = vec![Complex64::new(0.0, 0.0)];
    coeffs.extend((0..degree).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))));
    TaylorFunction::polynomial(coeffs)
}

fn c8_fejer() -> Outcome {
    let space = SpaceDescriptor::qk(KKernel::Power { exponent: 1.0 });
    let grid = build_family(&space).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut violations = 0;
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..50 {
        let f = random_polynomial(&mut rng);
        let base = seminorm_sup(&grid, &FunctionData::Taylor(f.clone()))
            .map_err(|e| e.to_string())?
            .value;
        for n in [2, 4, 8] {
            let g = FunctionData::Taylor(f.fejer(n).map_err(|e| e.to_string())?);
            let v = seminorm_sup(&grid, &g).map_err(|e| e.to_string())?.value;
            worst = worst.max(v / base - 1.0);
            if v > base * (1.0 + 1e-3) {
                violations += 1;
            }
        }
    }
    ensure(
        violations == 0,
        format!("{violations} violation(s) in 150, worst ratio − 1 = {worst:.3e}"),
    )
}

fn c9_mobius() -> Outcome {
    let (code, rep) = run_cli(
        "check",
        json!({
            "space": {"space": "qk", "K": {"name": "power", "exponent": 1}},
            "function": {"kind": "builtin", "name": "monomial", "degree": 2},
            "invariance": {"a": [0.3, 0.2]}
        }),
    );
    let dev = num(&rep, "/relative_deviation");
    ensure(code == 0 && dev <= 0.02, format!("relative deviation {dev:.3e}"))
}

struct Case {
    space: SpaceDescriptor,
    functions: Vec<Builtin>,
    families: Vec<FamilySpec>,
}

fn dyadic_r(kind: ApproxKind, levels: usize) -> FamilySpec {
    FamilySpec::new(kind, Ladder::DyadicR { levels, start: 1 })
}

fn suite() -> Vec<Case> {
    let taylor_families = || {
        vec![
            dyadic_r(ApproxKind::Dilation, 10),
            FamilySpec::new(ApproxKind::Fejer, Ladder::DyadicN { levels: 8, start: 1 }),
        ]
    };
    vec![
        Case {
            space: SpaceDescriptor::bmo(1.0),
            functions: vec![
                Builtin::StepHalf { n: None },
                Builtin::Cosine { n: None, mode: Some(3) },
            ],
            families: vec![dyadic_r(ApproxKind::PoissonCircle, 12)],
        },
        Case {
            space: SpaceDescriptor::bloch(),
            functions: vec![
                Builtin::Z,
                Builtin::Monomial { degree: 3 },
                Builtin::LogSingular { terms: None },
                Builtin::Lacunary { levels: None },
            ],
            families: taylor_families(),
        },
        Case {
            space: SpaceDescriptor::qk(KKernel::Power { exponent: 1.0 }),
            functions: vec![
                Builtin::Z,
                Builtin::Monomial { degree: 3 },
                Builtin::Lacunary { levels: Some(4) },
            ],
            families: taylor_families(),
        },
        Case {
            space: SpaceDescriptor::weighted(Default::default(), Default::default()),
            functions: vec![Builtin::Z, Builtin::CauchyKernel { terms: None }],
            families: taylor_families(),
        },
        Case {
            space: SpaceDescriptor::lip(0.5),
            functions: vec![Builtin::HolderCusp {
                alpha: None,
                nodes: None,
                lower: None,
                upper: None,
            }],
            families: vec![FamilySpec::new(
                ApproxKind::LipSmooth,
                Ladder::DyadicT {
                    levels: 6,
                    t0: 1.0 / 16.0,
                },
            )],
        },
        Case {
            space: SpaceDescriptor::rect_bmo(),
            functions: vec![Builtin::StepProduct { n: None }, Builtin::OneVariable { n: None }],
            families: vec![dyadic_r(ApproxKind::PoissonTorus, 8)],
        },
    ]
}

fn c10_sandwich() -> Outcome {
    let mut checked = 0;
    let mut violations = Vec::new();
    let mut triangle_violations = 0;
    for case in suite() {
        for b in &case.functions {
            let f = b.build(&case.space).map_err(|e| e.to_string())?;
            let mut approximants = Vec::new();
            for spec in &case.families {
                let fam = ApproxFamily::generate(spec, &f).map_err(|e| e.to_string())?;
                approximants.extend(fam.ids().into_iter().zip(fam.members));
            }
            let rep = sandwich_check(&case.space, &f, &approximants).map_err(|e| e.to_string())?;
            checked += rep.upper_bounds.len();
            if !rep.triangle_ok {
                triangle_violations += 1;
            }
            for ub in &rep.upper_bounds {
                if rep.limsup_estimate > ub.value + rep.uncertainty + rep.slack {
                    violations.push(format!(
                        "{} {:?} {}: limsup {:.4} > {:.4} + {:.4} (approximant tail {:.4})",
                        case.space.tag().name(),
                        b,
                        ub.id,
                        rep.limsup_estimate,
                        ub.value,
                        rep.uncertainty,
                        ub.tail_estimate
                    ));
                }
            }
        }
    }
    for v in &violations {
        eprintln!("    {v}");
    }
    ensure(
        violations.is_empty(),
        format!(
            "{} violation(s) over {checked} certified approximants; with approximant tails added: {triangle_violations}",
            violations.len()
        ),
    )
}

fn c11_assumption() -> Outcome {
    let cases: Vec<(SpaceDescriptor, Builtin, FamilySpec)> = vec![
        (
            SpaceDescriptor::bmo(1.0),
            Builtin::StepHalf { n: None },
            dyadic_r(ApproxKind::PoissonCircle, 14),
        ),
        (
            SpaceDescriptor::rect_bmo(),
            Builtin::StepProduct { n: None },
            dyadic_r(ApproxKind::PoissonTorus, 10),
        ),
        (
            SpaceDescriptor::bloch(),
            Builtin::Monomial { degree: 3 },
            dyadic_r(ApproxKind::Dilation, 10),
        ),
        (
            SpaceDescriptor::bloch(),
            Builtin::Monomial { degree: 3 },
            FamilySpec::new(ApproxKind::Fejer, Ladder::DyadicN { levels: 11, start: 1 }),
        ),
        (
            SpaceDescriptor::qk(KKernel::Power { exponent: 1.0 }),
            Builtin::Lacunary { levels: Some(4) },
            dyadic_r(ApproxKind::Dilation, 10),
        ),
        (
            SpaceDescriptor::qk(KKernel::Power { exponent: 1.0 }),
            Builtin::Lacunary { levels: Some(4) },
            FamilySpec::new(ApproxKind::Fejer, Ladder::DyadicN { levels: 11, start: 1 }),
        ),
        (
            SpaceDescriptor::lip(0.5),
            Builtin::HolderCusp {
                alpha: None,
                nodes: Some(65537),
                lower: None,
                upper: None,
            },
            FamilySpec::new(
                ApproxKind::LipSmooth,
                Ladder::DyadicT {
                    levels: 12,
                    t0: 1.0 / 16.0,
                },
            ),
        ),
    ];
    let mut failed = Vec::new();
    let mut worst = 0.0f64;
    for (space, b, spec) in &cases {
        let f = b.build(space).map_err(|e| e.to_string())?;
        let fam = ApproxFamily::generate(spec, &f).map_err(|e| e.to_string())?;
        let rep = assumption_check(space, &f, &fam, 1e-3).map_err(|e| e.to_string())?;
        let rel = rep.x_distances.last().copied().unwrap_or(f64::NAN) / rep.x_norm_input;
        worst = worst.max(rel);
        if rep.verdict != Verdict::Pass || rel.is_nan() || rel >= 1e-2 {
            failed.push(format!("{} {}: {:?}", space.tag().name(), spec.kind.name(), rep.notes));
        }
    }
    for f in &failed {
        eprintln!("    {f}");
    }
    ensure(
        failed.is_empty(),
        format!(
            "{} of {} families pass, worst final relative X-distance {worst:.3e}",
            cases.len() - failed.len(),
            cases.len()
        ),
    )
}

fn homogeneity(space: &SpaceDescriptor, f: &FunctionData) -> Result<f64, String> {
    let c = -2.7;
    let grid = build_family_for(space, f).map_err(|e| e.to_string())?;
    let g = f.scale(c);
    let n0 = seminorm_sup(&grid, f).map_err(|e| e.to_string())?.value;
    let n1 = seminorm_sup(&grid, &g).map_err(|e| e.to_string())?.value;
    let d0 = distance_estimate(space, f).map_err(|e| e.to_string())?.estimate;
    let d1 = distance_estimate(space, &g).map_err(|e| e.to_string())?.estimate;
    let rel = |a: f64, b: f64| (b - c.abs() * a).abs() / (c.abs() * a).max(1e-300);
    Ok(rel(n0, n1).max(if d0 > 0.0 { rel(d0, d1) } else { d1 }))
}

fn c12_metamorphic() -> Outcome {
    let cases = [
        (SpaceDescriptor::bmo(1.0), Builtin::StepHalf { n: None }),
        (SpaceDescriptor::bloch(), Builtin::LogSingular { terms: None }),
        (
            SpaceDescriptor::qk(KKernel::Power { exponent: 1.0 }),
            Builtin::Monomial { degree: 2 },
        ),
        (
            SpaceDescriptor::weighted(Default::default(), Default::default()),
            Builtin::CauchyKernel { terms: None },
        ),
        (
            SpaceDescriptor::lip(0.5),
            Builtin::HolderCusp {
                alpha: None,
                nodes: None,
                lower: None,
                upper: None,
            },
        ),
        (SpaceDescriptor::rect_bmo(), Builtin::StepProduct { n: None }),
    ];
    let mut worst_h = 0.0f64;
    let mut monotone = true;
    for (space, b) in &cases {
        let f = b.build(space).map_err(|e| e.to_string())?;
        worst_h = worst_h.max(homogeneity(space, &f)?);
        let prof = distance_estimate(space, &f).map_err(|e| e.to_string())?.profile;
        let sups: Vec<f64> = prof.tail_sups.iter().flatten().copied().collect();
        monotone &= sups.windows(2).all(|w| w[1] <= w[0]);
    }

    // prefix-sum second moments against the library's direct sums
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let n = 4096;
    let f = PeriodicSamples::from_fn(n, |t| Complex64::new((3.0 * t).sin() + 0.5 * (t * 7.0).cos(), t.cos()))
        .map_err(|e| e.to_string())?;
    let vals = f.values();
    let mut s2 = vec![0.0; 2 * n + 1];
    for k in 0..2 * n {
        s2[k + 1] = s2[k] + vals[k % n].norm_sqr();
    }
    let averager = ArcAverager::new(vals);
    let mut worst_p = 0.0f64;
    for _ in 0..100 {
        let length = rng.gen_range(64.0 * 2.0 * PI / n as f64..2.0 * PI);
        let arc = Arc::new(rng.gen_range(0.0..2.0 * PI), length).map_err(|e| e.to_string())?;
        let span = arc.snap(n).map_err(|e| e.to_string())?;
        let mean = averager.average(span);
        let m2 = (s2[span.start + span.cells] - s2[span.start]) / span.cells as f64;
        let prefix = m2 - mean.norm_sqr();
        let direct = bmo_oscillation(&f, &arc, 2.0).map_err(|e| e.to_string())?.powi(2);
        worst_p = worst_p.max((prefix - direct).abs());
    }
    ensure(
        worst_h <= 1e-12 && monotone && worst_p <= 1e-12,
        format!("homogeneity {worst_h:.1e}, monotone {monotone}, prefix vs direct {worst_p:.1e}"),
    )
}

fn main() -> ExitCode {
    // keep the gate independent of the working directory
    let _ = std::env::set_current_dir(Path::new(env!("CARGO_MANIFEST_DIR")));
    let criteria: [Criterion; 12] = [
        (1, "Bloch log 1/(1-z) norm and distance", c1_bloch_log),
        (2, "Bloch z+z^3 distance", c2_bloch_poly),
        (3, "BMO step norm and distance", c3_bmo_step),
        (4, "rectangular BMO step product", c4_rect),
        (5, "Lip 1/2 cusp", c5_lip),
        (6, "weighted Cauchy kernel", c6_weighted),
        (7, "Q_K quadrature", c7_qk_quadrature),
        (8, "Fejer contractivity", c8_fejer),
        (9, "Mobius invariance", c9_mobius),
        (10, "sandwich suite", c10_sandwich),
        (11, "approximation assumption suite", c11_assumption),
        (12, "metamorphic micro-suite", c12_metamorphic),
    ];
    let mut failures = 0;
    for (id, name, check) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {id:>2} {name}: {detail} [{secs:.1}s]"),
            Err(detail) => {
                failures += 1;
                println!("FAIL {id:>2} {name}: {detail} [{secs:.1}s]");
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
