//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits nonzero if any fails.

use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use qkd_audit_core::dist::{
    guessing_probability, posterior_guess_by_fiber, variational_distance, KeyDistribution, SubsetSpec,
};
use qkd_audit_core::extremal::{kpa_witness_family, max_guess_given_information, max_guess_given_vd};
use qkd_audit_core::loss::{
    breach_threshold, detectable_rate_deficit, rate_covered, run_protocol, AttackStrategy, ProtocolConfig,
    RunTallies,
};
use qkd_audit_core::pa::{pa_invariance_check, LinearHash};
use qkd_audit_core::quantum::{
    cq_distance, independent_mismatch, maximal_coupling, measure, trace_distance,
};
use qkd_audit_core::random::{random_cq_ensemble, random_density, random_distribution, random_povm};
use qkd_audit_oracles as oracle;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA11);
    let mut worst = 0.0f64;
    for n in 2..=4u32 {
        let nf = f64::from(n);
        let floor = nf.exp2().recip();
        let at_zero = max_guess_given_information(n, 0.0).map_err(|e| e.to_string())?;
        ensure!(at_zero.p1_star == floor, "n={n}: info 0 gives {}", at_zero.p1_star);
        let at_n = max_guess_given_information(n, nf).map_err(|e| e.to_string())?;
        ensure!(at_n.p1_star == 1.0, "n={n}: info n gives {}", at_n.p1_star);
        for _ in 0..20 {
            let info = rng.random_range(0.0..nf);
            let solver = max_guess_given_information(n, info).map_err(|e| e.to_string())?.p1_star;
            let search = oracle::max_guess_given_information(n, info, 2000, &mut rng);
            ensure!(search <= solver + 1e-6, "n={n} info={info}: oracle {search} above solver {solver}");
            ensure!((solver - search).abs() <= 1e-6, "n={n} info={info}: oracle {search}, solver {solver}");
            worst = worst.max((solver - search).abs());
        }
    }
    Ok(format!("60 cases, max |solver - oracle| = {worst:.1e}"))
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA12);
    let mut worst = 0.0f64;
    for n in 1..=4u32 {
        let floor = f64::from(n).exp2().recip();
        for _ in 0..20 {
            let eps = rng.random_range(0.0..=1.0 - floor);
            let solver = max_guess_given_vd(n, eps).map_err(|e| e.to_string())?.p1_star;
            ensure!((solver - (floor + eps)).abs() <= 1e-12, "n={n} eps={eps}: {solver}");
            let search = oracle::max_guess_given_vd(n, eps, 20, 200, &mut rng);
            ensure!((solver - search).abs() <= 1e-6, "n={n} eps={eps}: oracle {search}, solver {solver}");
            worst = worst.max((solver - search).abs());
        }
    }
    Ok(format!("80 cases, max |solver - search| = {worst:.1e}"))
}

fn criterion_3() -> Outcome {
    for (n, l_prime) in [(16u32, 7u32), (20, 9)] {
        let w = kpa_witness_family(n, l_prime, 0xA13).map_err(|e| e.to_string())?;
        let exact = 2f64.powi(-(l_prime as i32));
        ensure!(w.p1_before == exact, "({n}, {l_prime}): p1_before {}", w.p1_before);
        ensure!(guessing_probability(&w.distribution).p1 == exact, "({n}, {l_prime}): p1 of witness");
        let fibers = posterior_guess_by_fiber(&w.distribution, &SubsetSpec::leading(l_prime))
            .map_err(|e| e.to_string())?;
        ensure!(fibers.len() == 1usize << l_prime, "({n}, {l_prime}): {} fibers", fibers.len());
        ensure!(fibers.values().all(|&p| p == 1.0), "({n}, {l_prime}): a fiber has p1 < 1");
        ensure!(w.p1_after == 1.0, "({n}, {l_prime}): p1_after {}", w.p1_after);
    }
    Ok("(16, 7) and (20, 9): p1 = 2^-l' before, 1 in every fiber".into())
}

fn rows(m: &qkd_audit_core::quantum::Matrix) -> Vec<Complex64> {
    m.as_slice().to_vec()
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA14);
    let mut violations = 0;
    let mut tightest = f64::INFINITY;
    for _ in 0..1000 {
        let dim = rng.random_range(1..=8);
        let a = random_density(dim, rng.random_range(1..=dim), &mut rng).map_err(|e| e.to_string())?;
        let b = random_density(dim, rng.random_range(1..=dim), &mut rng).map_err(|e| e.to_string())?;
        let povm = random_povm(dim, rng.random_range(1..=8), &mut rng).map_err(|e| e.to_string())?;
        let d = trace_distance(&a, &b).map_err(|e| e.to_string())?;
        let reference = oracle::trace_distance(dim, &rows(a.matrix()), &rows(b.matrix()));
        ensure!((d - reference).abs() <= 1e-9, "trace distance {d} vs nalgebra {reference}");
        let pa = measure(&a, &povm).map_err(|e| e.to_string())?;
        let pb = measure(&b, &povm).map_err(|e| e.to_string())?;
        let delta = pa.variational_distance(&pb).map_err(|e| e.to_string())?;
        if delta > d + 1e-9 {
            violations += 1;
        }
        tightest = tightest.min(d - delta);
    }
    ensure!(violations == 0, "{violations} violations");
    Ok(format!("1000 triples, 0 violations, min(d - delta) = {tightest:.1e}"))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA15);
    let mut worst = 0.0f64;
    for i in 0..100 {
        let keys = rng.random_range(1..=16);
        let dim = rng.random_range(1..=(64 / keys).min(8));
        let e = random_cq_ensemble(keys, dim, i % 3 == 0, &mut rng).map_err(|e| e.to_string())?;
        let states: Vec<Vec<Complex64>> = e.states().iter().map(|s| rows(s.matrix())).collect();
        let full = oracle::cq_distance_tensor(e.weights(), &states, dim);
        let blockwise = cq_distance(&e).map_err(|e| e.to_string())?;
        ensure!((blockwise - full).abs() <= 1e-9, "N={keys} dim={dim}: {blockwise} vs {full}");
        worst = worst.max((blockwise - full).abs());
    }
    Ok(format!("100 ensembles, max |blockwise - tensor| = {worst:.1e}"))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA16);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let n = rng.random_range(1..=6);
        let p = random_distribution(n, &mut rng).map_err(|e| e.to_string())?;
        let q = random_distribution(n, &mut rng).map_err(|e| e.to_string())?;
        let delta = variational_distance(&p, &q).map_err(|e| e.to_string())?;
        let reference = oracle::half_l1(&p.to_dense().unwrap(), &q.to_dense().unwrap());
        ensure!((delta - reference).abs() <= 1e-12, "delta {delta} vs {reference}");
        let maximal = maximal_coupling(&p, &q).map_err(|e| e.to_string())?.mismatch_probability();
        ensure!((maximal - delta).abs() <= 1e-12, "maximal mismatch {maximal} vs delta {delta}");
        let independent = independent_mismatch(&p, &q).map_err(|e| e.to_string())?;
        ensure!(independent >= maximal - 1e-12, "independent {independent} < maximal {maximal}");
        worst = worst.max((maximal - delta).abs());
    }
    Ok(format!("1000 pairs, max |mismatch - delta| = {worst:.1e}"))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA17);
    let (mut hashes, mut checks, mut spikes) = (0usize, 0usize, 0usize);
    for m in 1..=4u32 {
        for n in 1..=m as usize {
            for h in oracle::full_rank_matrices(n, m as usize) {
                let hash = LinearHash::from_rows(m, n as u32, oracle::row_masks(&h), 0)
                    .map_err(|e| e.to_string())?;
                hashes += 1;
                for _ in 0..100 {
                    let p = random_distribution(m, &mut rng).map_err(|e| e.to_string())?;
                    let r = pa_invariance_check(&p, &hash).map_err(|e| e.to_string())?;
                    let reference = oracle::max_prob(&oracle::pushforward(&p.to_dense().unwrap(), m, &h));
                    ensure!((r.p1 - reference).abs() <= 1e-12, "m={m} n={n}: p1 {} vs {reference}", r.p1);
                    ensure!(r.never_decreases && r.p1 >= r.q1, "m={m} n={n}: p1 {} < q1 {}", r.p1, r.q1);
                    checks += 1;
                }
                let x = rng.random_range(0..1u32 << m);
                let point = KeyDistribution::point_mass(m, x).map_err(|e| e.to_string())?;
                let r = pa_invariance_check(&point, &hash).map_err(|e| e.to_string())?;
                ensure!(r.equal && r.spike_to_spike, "m={m} n={n}: point mass at {x} not spike-to-spike");
                spikes += 1;
            }
        }
    }
    Ok(format!("{hashes} hashes, {checks} pushforwards, {spikes} spike-to-spike cases"))
}

fn sd(p: f64, trials: u64) -> f64 {
    (p * (1.0 - p) / trials as f64).sqrt()
}

fn rate_sigma(a: &RunTallies, b: &RunTallies) -> f64 {
    sd(a.detection_rate, a.pulses_sent()).hypot(sd(b.detection_rate, b.pulses_sent()))
}

fn criterion_8() -> Outcome {
    let base = ProtocolConfig::b92(0.5, 0.4).with_pulses(100_000).with_seed(0xA18);
    let eta_star = breach_threshold(0.5, &base).map_err(|e| e.to_string())?;
    ensure!(eta_star == 0.5, "eta* = {eta_star}");

    let honest = run_protocol(&base, AttackStrategy::None).map_err(|e| e.to_string())?;
    let attacked = run_protocol(&base, AttackStrategy::UsdResend).map_err(|e| e.to_string())?;
    ensure!(attacked.qber == 0.0, "qber {}", attacked.qber);
    ensure!(attacked.eve_known_fraction == 1.0, "eve_known_fraction {}", attacked.eve_known_fraction);
    let sigma = rate_sigma(&honest, &attacked);
    ensure!(
        attacked.detection_rate >= honest.detection_rate - 3.0 * sigma && rate_covered(&honest, &attacked, 3.0),
        "eta 0.4: attacked rate {} below honest {} by more than 3 sigma",
        attacked.detection_rate,
        honest.detection_rate
    );

    let above = ProtocolConfig::b92(0.5, 0.55).with_pulses(100_000).with_seed(0xA18);
    let honest_hi = run_protocol(&above, AttackStrategy::None).map_err(|e| e.to_string())?;
    let attacked_hi = run_protocol(&above, AttackStrategy::UsdResend).map_err(|e| e.to_string())?;
    let sigma_hi = rate_sigma(&honest_hi, &attacked_hi);
    ensure!(
        honest_hi.detection_rate - attacked_hi.detection_rate > 3.0 * sigma_hi
            && detectable_rate_deficit(&honest_hi, &attacked_hi, 3.0),
        "eta 0.55: deficit {} not above 3 sigma = {}",
        honest_hi.detection_rate - attacked_hi.detection_rate,
        3.0 * sigma_hi
    );
    Ok(format!(
        "eta* = 0.5; eta 0.4 rates {:.4} (attack) vs {:.4}; eta 0.55 deficit {:.1} sigma",
        attacked.detection_rate,
        honest.detection_rate,
        (honest_hi.detection_rate - attacked_hi.detection_rate) / sigma_hi
    ))
}

fn criterion_9() -> Outcome {
    let (sifted, errors) = oracle::bb84_intercept_resend_enumeration();
    let expected = errors / sifted;
    ensure!(expected == 0.25, "enumeration gives {expected}");
    let config = ProtocolConfig::bb84(1.0).with_pulses(100_000).with_seed(0xA19);
    let t = run_protocol(&config, AttackStrategy::InterceptResend { intercept_fraction: 1.0 })
        .map_err(|e| e.to_string())?;
    let sigma = sd(expected, t.sifted_bits());
    ensure!((t.qber - expected).abs() <= 3.0 * sigma, "qber {} vs 0.25 +- {}", t.qber, 3.0 * sigma);
    Ok(format!("qber {:.5} over {} sifted bits ({:.2} sigma)", t.qber, t.sifted_bits(), (t.qber - expected) / sigma))
}

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn invoke(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_qkd-audit"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr)));
    }
    Ok(out.stdout)
}

fn criterion_10() -> Outcome {
    let demo = root().join("demo");
    let bundle = demo.join("bundle_demo.json");
    let b = bundle.to_str().unwrap();
    let grid = demo.join("grid_11.json");
    let g = grid.to_str().unwrap();
    let commands: Vec<Vec<&str>> = vec![
        vec!["criteria", "-i", b],
        vec!["criteria", "-i", b, "-f", "csv"],
        vec!["audit", "-i", b],
        vec!["audit", "-i", b, "-f", "md"],
        vec!["simulate", "-i", b],
        vec!["simulate", "-i", b, "-g", g, "-f", "csv"],
        vec!["report", "-i", b],
        vec!["report", "-i", b, "-f", "json"],
        vec!["report", "-i", b, "-f", "csv"],
        vec!["witness", "-k", "kpa", "-n", "16", "--l-prime", "7", "--seed", "11"],
        vec!["witness", "-k", "info", "-n", "8", "--value", "1"],
    ];
    for args in &commands {
        let first = invoke(args)?;
        let second = invoke(args)?;
        ensure!(!first.is_empty(), "{args:?}: empty output");
        ensure!(first == second, "{args:?}: outputs differ between runs");
    }
    let golden = fs::read(demo.join("report_demo.md")).map_err(|e| e.to_string())?;
    let report = invoke(&["report", "-i", b])?;
    ensure!(report == golden, "report differs from demo/report_demo.md");
    Ok(format!("{} commands byte-identical; report matches golden file", commands.len()))
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "extremal information solver vs simplex oracle", limit: Some(Duration::from_secs(60)), run: criterion_1 },
        Criterion { id: 2, name: "variational-distance extremal vs search", limit: None, run: criterion_2 },
        Criterion { id: 3, name: "known-plaintext witness", limit: Some(Duration::from_secs(10)), run: criterion_3 },
        Criterion { id: 4, name: "data-processing inequality", limit: None, run: criterion_4 },
        Criterion { id: 5, name: "blockwise cq distance vs tensor product", limit: None, run: criterion_5 },
        Criterion { id: 6, name: "coupling identities", limit: None, run: criterion_6 },
        Criterion { id: 7, name: "privacy amplification invariance", limit: Some(Duration::from_secs(120)), run: criterion_7 },
        Criterion { id: 8, name: "B92 loss breach", limit: Some(Duration::from_secs(30)), run: criterion_8 },
        Criterion { id: 9, name: "BB84 intercept-resend error rate", limit: None, run: criterion_9 },
        Criterion { id: 10, name: "CLI determinism and golden report", limit: None, run: criterion_10 },
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|payload| {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| (*s).to_owned()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let outcome = match (outcome, c.limit) {
            (Ok(_), Some(limit)) if elapsed > limit => Err(format!("took {elapsed:.1?}, limit {limit:?}")),
            (other, _) => other,
        };
        let (status, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        println!("criterion {:>2} {status}: {} ({elapsed:.2?}); {detail}", c.id, c.name);
        failed += usize::from(outcome.is_err());
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
