//! Acceptance suite. Runs without the libtest harness so that every criterion
//! prints its own PASS/FAIL line in the normal `cargo test` output.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use entq_cli::{figure2, table1};
use entq_core::linalg::CMatrix;
use entq_core::measures::{
    dicke_lambda_sq_closed_form, e_gme_of_lambda, entropy_of_entanglement, lemma1_lower_bound,
    log_robustness, rg_bipartite_pure, rg_lower_from_lambda, schmidt,
};
use entq_core::overlap::{grid_oracle, lambda_sq_over_partitions, lambda_sq_pure, max_overlap_mixed, OptConfig, OracleTarget};
use entq_core::states::{
    make_bell, make_dicke, make_ghz, make_psi_p, make_w3, random_state_from_rng, random_unit_vector, rng_stream,
    to_density, DensityMatrix, PartitionSpec, StateVector,
};
use entq_core::witness::{build_lemma1_witness, build_pure_witness, WitnessOperator};

struct Outcome {
    pass: bool,
    detail: String,
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

/// The bipartite ensemble shared by criteria 3 and 4: 1000 states cycling
/// through every shape from 2×2 to 4×4.
fn bipartite_ensemble(count: usize, seed: u64) -> Vec<StateVector> {
    let mut rng = rng_stream(seed, 0);
    (0..count)
        .map(|i| {
            let dims = [2 + i % 3, 2 + (i / 3) % 3];
            random_state_from_rng(&dims, &mut rng).unwrap()
        })
        .collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let rows = match table1::compute(&OptConfig::default()) {
        Ok(rows) => rows,
        Err(e) => return outcome(false, format!("table1 failed: {e}")),
    };
    let elapsed = start.elapsed();
    let e_dev = rows.iter().map(table1::Table1Row::e_gme_dev).fold(0.0, f64::max);
    let r_dev = rows.iter().map(table1::Table1Row::r_g_dev).fold(0.0, f64::max);
    let pass = e_dev <= 0.01 && r_dev <= 0.02 && elapsed < Duration::from_secs(10);
    outcome(
        pass,
        format!("max |dE_GME|={e_dev:.4} (<=0.01), max |dR_g|={r_dev:.4} (<=0.02), runtime={elapsed:.2?} (<10s)"),
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let rows = match figure2::sweep(1001) {
        Ok(rows) => rows,
        Err(e) => return outcome(false, format!("sweep failed: {e}")),
    };
    let _csv = figure2::to_csv(&rows);
    let elapsed = start.elapsed();
    let worst = rows
        .iter()
        .map(|r| (r.lr_g - r.e_r).min(r.e_r - r.lr_lower))
        .fold(f64::INFINITY, f64::min);
    let mid = rows[500];
    let mid_ok = mid.p == 0.5 && [mid.e_r, mid.lr_g, mid.lr_lower].iter().all(|v| (v - 1.0).abs() <= 1e-9);
    let ends_ok = [rows[0], rows[1000]]
        .iter()
        .all(|r| r.e_r == 0.0 && r.lr_g == 0.0 && r.lr_lower == 0.0);
    let pass = rows.len() == 1001 && worst >= -1e-9 && mid_ok && ends_ok && elapsed < Duration::from_secs(1);
    outcome(
        pass,
        format!(
            "points={}, worst ordering margin={worst:.3e}, p=0.5 all one: {mid_ok}, p in {{0,1}} all zero: {ends_ok}, runtime={elapsed:.2?} (<1s)",
            rows.len()
        ),
    )
}

fn criterion_3(ensemble: &[StateVector]) -> Outcome {
    let part = PartitionSpec::finest(2);
    let mut worst = f64::INFINITY;
    for psi in ensemble {
        let sd = schmidt(psi, &part).unwrap();
        let c = sd.max_coefficient();
        worst = worst.min(rg_bipartite_pure(&sd) - (1.0 - c * c));
    }
    outcome(
        worst >= -1e-9,
        format!("{} states, min of (sum c)^2-1 - (1-c_max^2) = {worst:.3e}", ensemble.len()),
    )
}

fn criterion_4(ensemble: &[StateVector]) -> Outcome {
    // x spans [1/16, 1], the range of overlaps reachable in dimensions up to 4×4.
    let mut rng = rng_stream(404, 0);
    let mut identity_err: f64 = 0.0;
    for _ in 0..10_000 {
        let u = random_unit_vector(1, &mut rng)[0].re.abs();
        let x = 1.0 / 16.0 + (1.0 - 1.0 / 16.0) * u;
        let e = e_gme_of_lambda(x).unwrap();
        let direct = rg_lower_from_lambda(x).unwrap();
        identity_err = identity_err.max((direct - e / (1.0 - e)).abs());
    }
    let part = PartitionSpec::finest(2);
    let mut worst = f64::INFINITY;
    for psi in ensemble {
        let sd = schmidt(psi, &part).unwrap();
        let c = sd.max_coefficient();
        worst = worst.min(rg_bipartite_pure(&sd) - rg_lower_from_lambda(c * c).unwrap());
    }
    outcome(
        identity_err <= 1e-12 && worst >= -1e-9,
        format!("identity max error={identity_err:.3e} over 1e4 x, min R_g - bound={worst:.3e}"),
    )
}

fn random_mixture(seed: u64, parts: usize) -> DensityMatrix {
    let mut rng = rng_stream(seed, 0);
    let weights = random_unit_vector(parts, &mut rng);
    let states: Vec<DensityMatrix> = (0..parts)
        .map(|_| to_density(&random_state_from_rng(&[2, 2], &mut rng).unwrap()))
        .collect();
    let mix: Vec<(f64, &DensityMatrix)> = weights.iter().map(|w| w.norm_sqr()).zip(states.iter()).collect();
    DensityMatrix::mixture(&mix).unwrap()
}

fn criterion_5() -> Outcome {
    let cfg = OptConfig::default();
    let part = PartitionSpec::finest(2);
    let mut bound_gap: f64 = 0.0;
    let mut identity_err: f64 = 0.0;
    for trial in 0..100u64 {
        let rho = random_mixture(5000 + trial, 1 + trial as usize % 4);
        let purity = rho.purity();
        let opt = max_overlap_mixed(&rho, &part, &cfg).unwrap().value;
        let grid = grid_oracle(&rho, &part, 100).unwrap();
        let via_opt = lemma1_lower_bound(purity, opt).unwrap();
        let via_grid = lemma1_lower_bound(purity, grid).unwrap();
        bound_gap = bound_gap.max((via_opt - via_grid).abs());
        let w = build_lemma1_witness(&rho, opt, &part).unwrap();
        identity_err = identity_err.max((-w.expectation(&rho) - (purity / opt - 1.0)).abs());
    }
    outcome(
        bound_gap <= 3e-3 && identity_err <= 1e-10,
        format!("100 mixtures, max bound gap optimizer vs grid={bound_gap:.3e} (<=3e-3), witness identity error={identity_err:.3e}"),
    )
}

fn criterion_6() -> Outcome {
    let cfg = OptConfig::default();
    let mut worst_err: f64 = 0.0;
    let mut worst_step = f64::INFINITY;
    let mut all_converged = true;
    for n in 2..=5 {
        for zeros in 0..=n {
            let psi = make_dicke(n, zeros).unwrap();
            let res = lambda_sq_over_partitions(&psi, n, &cfg).unwrap();
            let closed = dicke_lambda_sq_closed_form(n, zeros).unwrap();
            worst_err = worst_err.max((res.value - closed).abs());
            all_converged &= res.converged && res.restarts == 32;
            for trace in &res.traces {
                for pair in trace.windows(2) {
                    worst_step = worst_step.min(pair[1] - pair[0]);
                }
            }
        }
    }
    // Round-off in the block updates can lower an already optimal overlap by a few ulps.
    let pass = worst_err <= 1e-6 && worst_step >= -1e-12 && all_converged;
    outcome(
        pass,
        format!("max |opt - closed form|={worst_err:.3e} (<=1e-6), most negative trace step={worst_step:.3e}, converged with 32 restarts: {all_converged}"),
    )
}

fn grid_minimum(w: &WitnessOperator, resolution: usize) -> f64 {
    let top = w.max_eigenvalue().unwrap();
    let d = w.matrix().nrows();
    let shifted = CMatrix::identity(d, d).scale(top) - w.matrix();
    top - grid_oracle(OracleTarget::Operator { dims: w.dims(), matrix: &shifted }, w.partition(), resolution).unwrap()
}

fn criterion_7() -> Outcome {
    let cfg = OptConfig::default();
    let mut states = vec![make_bell(), make_psi_p(0.9).unwrap(), make_ghz(3).unwrap(), make_w3()];
    let mut rng = rng_stream(707, 0);
    for i in 0..12 {
        let dims: &[usize] = if i < 8 { &[2, 2] } else { &[2, 2, 2] };
        states.push(random_state_from_rng(dims, &mut rng).unwrap());
    }
    let mut min_grid = f64::INFINITY;
    let mut max_eig = f64::NEG_INFINITY;
    let mut identity_err: f64 = 0.0;
    let mut converged = true;
    for psi in &states {
        let part = PartitionSpec::finest(psi.n());
        let opt = lambda_sq_pure(psi, &part, &cfg).unwrap();
        converged &= opt.converged;
        let w = build_pure_witness(psi, opt.value, &part).unwrap();
        let resolution = if psi.n() == 2 { 100 } else { 40 };
        min_grid = min_grid.min(grid_minimum(&w, resolution));
        max_eig = max_eig.max(w.max_eigenvalue().unwrap());
        identity_err = identity_err.max((w.expectation_pure(psi) - (opt.value - 1.0)).abs());
    }
    outcome(
        converged && min_grid >= -1e-6 && max_eig <= 1.0 + 1e-10 && identity_err <= 1e-12,
        format!(
            "{} witnesses, grid min={min_grid:.3e} (>=-1e-6), max eigenvalue={max_eig:.6} (<=1+1e-10), identity error={identity_err:.3e}",
            states.len()
        ),
    )
}

fn criterion_8() -> Outcome {
    let ensemble = bipartite_ensemble(10_000, 808);
    let part = PartitionSpec::finest(2);
    let mut min_gap = f64::INFINITY;
    let mut hard_ok = true;
    for psi in &ensemble {
        let sd = schmidt(psi, &part).unwrap();
        let r_g = rg_bipartite_pure(&sd);
        let c = sd.max_coefficient();
        hard_ok &= r_g >= 1.0 - c * c - 1e-9 && r_g >= rg_lower_from_lambda(c * c).unwrap() - 1e-9;
        min_gap = min_gap.min(log_robustness(r_g).unwrap() - entropy_of_entanglement(&sd));
    }
    let finding = if min_gap < -1e-9 { "conjecture violated (finding)" } else { "conjecture holds on sample" };
    outcome(
        hard_ok,
        format!("1e4 states, min LR_g - E_R={min_gap:.6e}, {finding}, hard invariants hold: {hard_ok}"),
    )
}

fn main() -> ExitCode {
    let ensemble = bipartite_ensemble(1000, 303);
    let criteria: Vec<Criterion> = vec![
        ("1 table reproduction", Box::new(criterion_1)),
        ("2 figure sweep", Box::new(criterion_2)),
        ("3 R_g >= E_GME", Box::new(|| criterion_3(&ensemble))),
        ("4 overlap bound identity and ordering", Box::new(|| criterion_4(&ensemble))),
        ("5 mixed-state bound, optimizer vs grid", Box::new(criterion_5)),
        ("6 Dicke optimizer vs closed form", Box::new(criterion_6)),
        ("7 witness suite", Box::new(criterion_7)),
        ("8 LR_g >= E_R monitoring", Box::new(criterion_8)),
    ];
    let mut failures = 0;
    for (name, check) in &criteria {
        let result = check();
        println!("criterion {name}: {} ({})", if result.pass { "PASS" } else { "FAIL" }, result.detail);
        failures += usize::from(!result.pass);
    }
    println!("acceptance: {}/{} passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
