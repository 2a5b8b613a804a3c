//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use gerbe_dual::clifford::{clifford_count_check, orbit_checks, twisted_irreps};
use gerbe_dual::dual::{cocycle_triviality, DualSpace, Tolerances, Triviality};
use gerbe_dual::group::FiniteGroup;
use gerbe_dual::gw::{duality_check, gw_point, hom_count_oracle, GwValue, DEFAULT_BUDGET};
use gerbe_dual::library::{bundled_library, find};
use gerbe_dual::rcoeff::{fit_poly, PolyFit, RcoeffError, SampleSet};
use gerbe_dual::repr::{character_inner_product, compute_irreps};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEEDS: [u64; 3] = [0, 42, 20261015];

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || {
        format!("took {elapsed:.2?}, limit {limit:?}")
    })
}

fn clifford_correspondence() -> Verdict {
    let start = Instant::now();
    let lib = bundled_library();
    ensure(lib.len() >= 7, || {
        format!("only {} bundled extensions", lib.len())
    })?;
    for entry in &lib {
        let report = clifford_count_check(&entry.extension, 0, &Tolerances::default())
            .map_err(|e| format!("{}: {e}", entry.name))?;
        ensure(report.passed, || {
            format!(
                "{}: predicted {:?}, found {:?}",
                entry.name, report.predicted_dims, report.actual_dims
            )
        })?;
    }
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("{} extensions, {:.2?}", lib.len(), start.elapsed()))
}

fn duality() -> Verdict {
    let start = Instant::now();
    let tol = Tolerances::default();
    let mut checked = 0;
    let mut examples = Vec::new();
    for entry in bundled_library() {
        let ext = &entry.extension;
        let dual = DualSpace::from_extension(ext, 0, &tol).map_err(|e| e.to_string())?;
        let orbits = orbit_checks(&dual, 0).map_err(|e| e.to_string())?;
        let h = compute_irreps(ext.h(), 0).map_err(|e| e.to_string())?;
        for g in 0..=3 {
            let e = duality_check(&h, ext.g().order(), &orbits, g);
            ensure(e.pass, || {
                format!(
                    "{} at genus {g}: {} != {} * {}",
                    entry.name, e.lhs, e.factor, e.rhs
                )
            })?;
            if g == 2 && ["z3-s3-z2", "z2-q8-v4", "v4-s4-s3"].contains(&entry.name) {
                examples.push(format!("{}={}*{}", e.lhs, e.factor, e.rhs));
            }
            checked += 1;
        }
    }
    let expected = ["272=4*68", "81=9*9", "1424=16*89"];
    ensure(examples == expected, || {
        format!("genus-2 values {examples:?}, expected {expected:?}")
    })?;
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!(
        "{checked} (extension, genus) pairs, {}, {:.2?}",
        examples.join(" "),
        start.elapsed()
    ))
}

fn distinct_groups() -> Vec<FiniteGroup> {
    let mut seen: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut out = Vec::new();
    for entry in bundled_library() {
        let ext = entry.extension;
        for g in [ext.g(), ext.h(), ext.q()] {
            let rows = g.rows();
            if !seen.contains(&rows) {
                seen.push(rows);
                out.push(g.clone());
            }
        }
    }
    out
}

fn oracle() -> Verdict {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .map_err(|e| e.to_string())?;
    let start = Instant::now();
    let mut checked = 0;
    pool.install(|| -> Result<(), String> {
        for entry in bundled_library() {
            let h = entry.extension.h();
            let n = h.order();
            if n > 24 {
                continue;
            }
            let irreps = compute_irreps(h, 0).map_err(|e| e.to_string())?;
            let genera: &[u32] = if n <= 8 { &[1, 2, 3] } else { &[1, 2] };
            for &g in genera {
                let count = hom_count_oracle(h, g, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
                let predicted = &GwValue::from_integer(n as i64) * &gw_point(&irreps, g);
                ensure(predicted == GwValue::from_integer(count as i64), || {
                    format!(
                        "{} genus {g}: count {count}, |H| * gw = {predicted}",
                        entry.name
                    )
                })?;
                checked += 1;
            }
        }
        Ok(())
    })?;
    let s3 = gerbe_dual::library::symmetric(3);
    let s3_counts = [
        hom_count_oracle(&s3, 1, DEFAULT_BUDGET).unwrap(),
        hom_count_oracle(&s3, 2, DEFAULT_BUDGET).unwrap(),
    ];
    ensure(s3_counts == [18, 486], || {
        format!("S3 counts {s3_counts:?}")
    })?;
    within(start.elapsed(), Duration::from_secs(30))?;
    Ok(format!(
        "{checked} (group, genus) pairs single-threaded, {:.2?}",
        start.elapsed()
    ))
}

fn cocycle_exactness() -> Verdict {
    let tol = Tolerances::default();
    let mut worst_residual: f64 = 0.0;
    let mut worst_snap: f64 = 0.0;
    let mut count = 0;
    for seed in SEEDS {
        for entry in bundled_library() {
            let dual = DualSpace::from_extension(&entry.extension, seed, &tol)
                .map_err(|e| format!("{}: {e}", entry.name))?;
            for o in dual.orbits() {
                ensure(o.cocycle.identity_violation().is_none(), || {
                    format!("{}: identity fails", entry.name)
                })?;
                worst_residual = worst_residual.max(o.diagnostics.max_scalar_residual);
                worst_snap = worst_snap.max(o.diagnostics.max_snap_distance);
                count += 1;
            }
        }
    }
    ensure(worst_residual < 1e-9, || {
        format!("scalar residual {worst_residual:e}")
    })?;
    ensure(worst_snap < 1e-6, || {
        format!("snap distance {worst_snap:e}")
    })?;
    let sign_orbit = |name: &str| {
        let ext = find(name).unwrap().extension;
        let dual = DualSpace::from_extension(&ext, 0, &tol).unwrap();
        cocycle_triviality(&dual.orbits()[1].cocycle)
    };
    ensure(sign_orbit("z2-q8-v4") == Triviality::NonTrivial, || {
        "Q8 cocycle is not NonTrivial".into()
    })?;
    ensure(sign_orbit("z2-z4-z2") == Triviality::Trivial, || {
        "Z4 cocycle is not Trivial".into()
    })?;
    Ok(format!(
        "{count} cocycles over 3 seeds, residual {worst_residual:.1e}, snap {worst_snap:.1e}; Q8 NonTrivial, Z4 Trivial"
    ))
}

fn representation_numerics() -> Verdict {
    let groups = distinct_groups();
    let mut worst: f64 = 0.0;
    for g in &groups {
        let sets: Vec<_> = SEEDS
            .iter()
            .map(|&s| compute_irreps(g, s))
            .collect::<Result<_, _>>()
            .map_err(|e| format!("{}: {e}", g.name()))?;
        for set in &sets {
            worst = worst
                .max(set.max_homomorphism_residual())
                .max(set.max_unitarity_residual())
                .max(set.orthogonality_residual());
            let sum: usize = set.dims().iter().map(|d| d * d).sum();
            ensure(sum == g.order(), || {
                format!("{}: sum of squares {sum}", g.name())
            })?;
            let classes = g.conjugacy_classes().len();
            ensure(set.len() == classes, || {
                format!("{}: {} irreps, {classes} classes", g.name(), set.len())
            })?;
        }
        for other in &sets[1..] {
            for rho in sets[0].irreps() {
                let matched = other.irreps().iter().any(|s| {
                    (character_inner_product(rho.character(), s.character()).re - 1.0).abs() < 1e-6
                });
                ensure(matched, || {
                    format!("{}: irrep sets differ between seeds", g.name())
                })?;
            }
        }
    }
    ensure(worst < 1e-8, || format!("residual {worst:e}"))?;
    Ok(format!(
        "{} groups x 3 seeds, worst residual {worst:.1e}",
        groups.len()
    ))
}

fn coboundary_invariance() -> Verdict {
    let ext = find("z2-q8-v4").unwrap().extension;
    let dual =
        DualSpace::from_extension(&ext, 0, &Tolerances::default()).map_err(|e| e.to_string())?;
    let c = &dual.orbits()[1].cocycle;
    let m = c.modulus();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for trial in 0..10 {
        let mut lambda: Vec<u32> = (0..c.base().order())
            .map(|_| rng.random_range(0..m))
            .collect();
        lambda[0] = 0;
        let shifted = c.with_coboundary(&lambda);
        let dims = twisted_irreps(&shifted, trial)
            .map_err(|e| e.to_string())?
            .dims;
        ensure(dims == [2], || {
            format!("coboundary {lambda:?} gives dims {dims:?}")
        })?;
    }
    Ok(format!("10 coboundaries in mu_{m}, dims {{2}} each time"))
}

fn rational(rng: &mut ChaCha8Rng) -> BigRational {
    BigRational::new(
        BigInt::from(rng.random_range(-99i64..=99)),
        BigInt::from(rng.random_range(1i64..=20)),
    )
}

fn rcoeff_round_trip() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..100 {
        let degree = rng.random_range(0..=5usize);
        let poly = PolyFit {
            coefficients: (0..=degree).map(|_| rational(&mut rng)).collect(),
        };
        let mut rs: Vec<u64> = (1..=40).collect();
        rs.shuffle(&mut rng);
        let samples: Vec<_> = rs[..degree + 2]
            .iter()
            .map(|&r| (r, poly.eval(&BigRational::from_integer(BigInt::from(r)))))
            .collect();
        let set = SampleSet::new(samples).map_err(|e| e.to_string())?;
        let fit = fit_poly(&set, degree).map_err(|e| format!("trial {trial}: {e}"))?;
        ensure(fit == poly, || {
            format!("trial {trial}: recovered {:?}", fit.coefficients)
        })?;
    }
    let exp: Vec<_> = (1..=4u64)
        .map(|r| (r, BigRational::from_integer(BigInt::from(1u64 << r))))
        .collect();
    let rejected = matches!(
        fit_poly(&SampleSet::new(exp).unwrap(), 2),
        Err(RcoeffError::Inconsistent { .. })
    );
    ensure(rejected, || "2^r was not rejected".into())?;
    Ok("100 polynomials recovered exactly, 2^r rejected as Inconsistent".into())
}

fn determinism() -> Verdict {
    let runs: [&[&str]; 5] = [
        &["dual", "--builtin", "q8-sl23-z3", "--seed", "3"],
        &["clifford-check", "--builtin", "v4-s4-s3", "--seed", "5"],
        &["duality-check", "--builtin", "a4-s4-z2", "--genus", "0..3"],
        &["irreps", "--builtin", "a4-s4-z2", "--seed", "9"],
        &["oracle", "--builtin", "z2-q8-v4", "--genus", "1..3"],
    ];
    for args in runs {
        let once = || {
            Command::new(env!("CARGO_BIN_EXE_gerbe-dual"))
                .args(args)
                .output()
                .map_err(|e| e.to_string())
        };
        let (a, b) = (once()?, once()?);
        ensure(a.status.success(), || {
            format!("{args:?} failed: {}", String::from_utf8_lossy(&a.stderr))
        })?;
        ensure(a.stdout == b.stdout, || {
            format!("{args:?} produced different output")
        })?;
    }
    Ok(format!(
        "{} commands, identical bytes on repeat",
        runs.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("clifford correspondence", clifford_correspondence),
        ("duality at point targets", duality),
        ("oracle equivalence", oracle),
        ("cocycle exactness", cocycle_exactness),
        ("representation numerics", representation_numerics),
        ("coboundary invariance", coboundary_invariance),
        ("rcoeff round-trip", rcoeff_round_trip),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("[PASS] {}. {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {}. {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
