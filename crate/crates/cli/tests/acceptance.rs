//! The twelve acceptance criteria, one pass/fail line each.
//! Run with `cargo test -p entdist-cli --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use entdist_cli::{cmd_fig_ad, cmd_phase_damping, Command, RunConfig};
use entdist_core::channels::{apply_on, random_channel, KrausChannel};
use entdist_core::measures::{concurrence, concurrence_pure, Bipartition, DiscordMeasure, EntanglementMeasure, OptimizerConfig};
use entdist_core::protocols::{
    alpha_max, distributed_entanglement, en_damped_alpha, little_entanglement_witness, run_suite, DistributionScenario,
    Suite, SuiteOptions,
};
use entdist_core::qla::{binary_entropy, SystemShape};
use entdist_core::states::{ef_squared_witness_state, max_entangled, random_pure, RandomSpec};

type Outcome = Result<String, String>;

/// Damped log-negativity of `|α>` from the 2×2 block of the partial transpose.
fn en_closed_form(gamma: f64, alpha: f64) -> f64 {
    let r = (alpha * alpha * gamma * gamma + 4.0 * alpha * (1.0 - alpha) * (1.0 - gamma)).sqrt();
    (1.0 + r - alpha * gamma).log2()
}

fn gamma_grid() -> Vec<f64> {
    (1..=99).map(|k| k as f64 / 100.0).collect()
}

/// Low-discrepancy points in the unit square.
fn r2(k: usize) -> (f64, f64) {
    const G: f64 = 1.324_717_957_244_746;
    let x = (0.5 + k as f64 / G).fract();
    let y = (0.5 + k as f64 / (G * G)).fract();
    (x, y)
}

fn within(elapsed: Duration, limit: Duration) -> Outcome {
    if elapsed <= limit {
        Ok(format!("{:.1}s", elapsed.as_secs_f64()))
    } else {
        Err(format!("took {:.1}s, limit {:.0}s", elapsed.as_secs_f64(), limit.as_secs_f64()))
    }
}

fn alpha_max_matches_argmax() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0_f64;
    for g in gamma_grid() {
        let mut best = (f64::NEG_INFINITY, 0.0);
        for k in 0..=50_000 {
            let a = k as f64 * 1e-5;
            let v = en_closed_form(g, a);
            if v > best.0 {
                best = (v, a);
            }
        }
        worst = worst.max((alpha_max(g).map_err(|e| e.to_string())? - best.1).abs());
    }
    // the closed form above is checked against the library at a few points
    for (g, a) in [(0.3, 0.2), (0.7, 0.45), (0.95, 0.01)] {
        let lib = en_damped_alpha(g, a).map_err(|e| e.to_string())?;
        if (lib - en_closed_form(g, a)).abs() > 1e-12 {
            return Err(format!("oracle disagrees with library at ({g}, {a})"));
        }
    }
    let t = within(start.elapsed(), Duration::from_secs(30))?;
    if worst <= 1e-3 {
        Ok(format!("max |alpha_max - argmax| = {worst:.2e}, {t}"))
    } else {
        Err(format!("max |alpha_max - argmax| = {worst:.2e}"))
    }
}

fn crossover_equality() -> Outcome {
    let en = |g: f64, a: f64| en_damped_alpha(g, a).map_err(|e| e.to_string());
    let mut worst_eq = 0.0_f64;
    for g in gamma_grid() {
        worst_eq = worst_eq.max((en(g, (1.0 - g) / 2.0)? - en(g, 0.5)?).abs());
    }
    if worst_eq > 1e-9 {
        return Err(format!("crossover mismatch {worst_eq:.2e}"));
    }
    let mut min_adv = f64::INFINITY;
    let mut max_below = f64::NEG_INFINITY;
    for k in 0..50 {
        let (u, v) = r2(k);
        let g = 0.05 + 0.9 * u;
        let line = (1.0 - g) / 2.0;
        let above = line + (0.05 + 0.9 * v) * (0.5 - line);
        min_adv = min_adv.min(en(g, above)? - en(g, 0.5)?);
        let below = v * line;
        max_below = max_below.max(en(g, below)? - en(g, 0.5)?);
    }
    if min_adv > 1e-12 && max_below <= 1e-12 {
        Ok(format!(
            "crossover gap {worst_eq:.1e}, min advantage {min_adv:.2e}, max below-line diff {max_below:.2e}"
        ))
    } else {
        Err(format!("min advantage {min_adv:.2e}, max below-line diff {max_below:.2e}"))
    }
}

fn fig_ad_shape() -> Outcome {
    let cfg = RunConfig::new(Command::FigAd);
    let text = cmd_fig_ad(&cfg).map_err(|e| e.to_string())?.text;
    let rows: Vec<(f64, f64)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let c: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            (c[0], c[4])
        })
        .collect();
    let interior: Vec<(f64, f64)> = rows.iter().copied().filter(|&(g, _)| g > 0.0 && g < 1.0).collect();
    if let Some(&(g, d)) = interior.iter().find(|&&(_, d)| !(d > 0.0)) {
        return Err(format!("diff {d} at gamma {g}"));
    }
    let at = |target: f64| rows.iter().find(|&&(g, _)| (g - target).abs() < 1e-9).map(|r| r.1);
    let (lo, hi) = (at(0.01).ok_or("no 0.01 row")?, at(0.99).ok_or("no 0.99 row")?);
    if !(lo < 0.1 && hi < 0.1) {
        return Err(format!("endpoint diffs {lo}, {hi}"));
    }
    let steps: Vec<f64> = interior.windows(2).map(|w| w[1].1 - w[0].1).collect();
    let turns = steps.windows(2).filter(|w| w[0] > 0.0 && w[1] < 0.0 || w[0] < 0.0 && w[1] > 0.0).count();
    let peak = interior.iter().copied().fold((0.0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
    if turns <= 1 {
        Ok(format!("peak diff {:.4} at gamma {:.2}, endpoints {lo:.2e} / {hi:.2e}", peak.1, peak.0))
    } else {
        Err(format!("{turns} direction changes"))
    }
}

fn formation_squared_example() -> Outcome {
    let s = DistributionScenario::new(
        ef_squared_witness_state().density(),
        KrausChannel::identity(2),
        EntanglementMeasure::FormationSquared,
        DiscordMeasure::RelativeEntropy,
    )
    .map_err(|e| e.to_string())?;
    let (i, f, g) = distributed_entanglement(&s, &OptimizerConfig::default()).map_err(|e| e.to_string())?;
    if (i - 1.0).abs() <= 1e-9 && (f - 4.0).abs() <= 1e-9 && (g - 3.0).abs() <= 1e-9 {
        Ok(format!("({i:.12}, {f:.12}, {g:.12})"))
    } else {
        Err(format!("({i}, {f}, {g})"))
    }
}

fn suite(s: Suite, trials: usize, limit: Option<Duration>) -> Outcome {
    let start = Instant::now();
    let opts = SuiteOptions {
        trials: Some(trials),
        ..SuiteOptions::default()
    };
    let r = run_suite(s, &opts).map_err(|e| e.to_string())?;
    let t = match limit {
        Some(l) => within(start.elapsed(), l)?,
        None => format!("{:.1}s", start.elapsed().as_secs_f64()),
    };
    if r.passed() {
        Ok(format!("{s}: {trials} trials, worst slack {:.3e}, {t}", r.worst_slack))
    } else {
        Err(format!("{s}: {} failures, first {:?}", r.failures.len(), r.failures[0]))
    }
}

fn teleport_reduction() -> Outcome {
    suite(Suite::Teleport, 200, Some(Duration::from_secs(60)))
}

fn main_sweep() -> Outcome {
    suite(Suite::Main, 1000, Some(Duration::from_secs(20 * 60)))
}

fn channel_sweeps() -> Outcome {
    let parts: Vec<String> = [Suite::Noisy, Suite::Divisible, Suite::Markov]
        .into_iter()
        .map(|s| suite(s, 300, None))
        .collect::<Result<_, _>>()?;
    Ok(parts.join("; "))
}

fn subadditive_sweep() -> Outcome {
    suite(Suite::Subadditive, 1000, None)
}

fn phase_damping_tightness() -> Outcome {
    let cfg = RunConfig::new(Command::PhaseDamping);
    let text = cmd_phase_damping(&cfg).map_err(|e| e.to_string())?.text;
    let mut worst = 0.0_f64;
    for line in text.lines().skip(1) {
        let c: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        let (p, delta, e, gap) = (c[0], c[1], c[2], c[4]);
        let want = 1.0 - binary_entropy(p);
        let err = (delta - want).abs().max((e - want).abs());
        if gap > 1e-4 || err > 1e-4 {
            return Err(format!("p = {p}: delta {delta}, e {e}, expected {want}"));
        }
        worst = worst.max(err).max(gap.abs());
    }
    Ok(format!("worst deviation {worst:.2e}"))
}

fn concurrence_factorization() -> Outcome {
    let shape = SystemShape::new(&[2, 2]).unwrap();
    let cut = Bipartition::new(&[0], &[1]).unwrap();
    let bell = max_entangled(2).unwrap().density();
    let mut worst = 0.0_f64;
    for k in 0..500u64 {
        let ch = random_channel(2, 1 + (k as usize % 4), RandomSpec::ginibre(k)).map_err(|e| e.to_string())?;
        let psi = random_pure(&shape, RandomSpec::haar(k ^ 0xFACE)).map_err(|e| e.to_string())?;
        let out = apply_on(&ch, &psi.density(), 1).map_err(|e| e.to_string())?;
        let lhs = concurrence(&out, &cut).map_err(|e| e.to_string())?;
        let cb = concurrence(&apply_on(&ch, &bell, 1).unwrap(), &cut).map_err(|e| e.to_string())?;
        let rhs = cb * concurrence_pure(&psi, &[0]).map_err(|e| e.to_string())?;
        worst = worst.max((lhs - rhs).abs());
    }
    if worst <= 1e-8 {
        Ok(format!("max deviation {worst:.2e}"))
    } else {
        Err(format!("max deviation {worst:.2e}"))
    }
}

fn norm_factorization() -> Outcome {
    suite(Suite::Schatten, 100, None)
}

fn little_entanglement() -> Outcome {
    let mut parts = Vec::new();
    for eps in [0.1, 0.01, 0.001] {
        let w = little_entanglement_witness(eps).map_err(|e| e.to_string())?;
        if !(w.en_state > 0.0 && w.en_state <= eps && w.advantage > 1e-10) {
            return Err(format!("eps {eps}: E_n {}, advantage {}", w.en_state, w.advantage));
        }
        parts.push(format!("eps {eps}: advantage {:.2e}", w.advantage));
    }
    Ok(parts.join(", "))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("alpha_max formula", alpha_max_matches_argmax),
        ("crossover equality", crossover_equality),
        ("fig-ad shape", fig_ad_shape),
        ("formation-squared example", formation_squared_example),
        ("teleportation reduction", teleport_reduction),
        ("discord bound sweep", main_sweep),
        ("noisy/divisible/markov sweeps", channel_sweeps),
        ("subadditive Pauli sweep", subadditive_sweep),
        ("phase-damping tightness", phase_damping_tightness),
        ("concurrence factorization", concurrence_factorization),
        ("norm factorization", norm_factorization),
        ("little-entanglement witness", little_entanglement),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(msg) => println!("criterion {:>2} PASS  {name}: {msg}", k + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {msg}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
