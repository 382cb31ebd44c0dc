//! Drivers, planner and fixed-point checks.

mod common;

use common::*;
use idempo::io::{density_to_csv, execute, render_pgm};
use idempo::{
    discrete_step, discretize_map, fixed_point_check, grey_maps, hutchinson_step,
    hutchinson_step_tuples, markov_step, plan_iterations, run_deterministic, run_discrete,
    run_gifs, theta_backward, theta_forward, AffineMap, CombineRule, DensityMap, Error, Grid,
    GridChoice, MaxPlusSystem, Metric, Point, QuantizedMap, RunOptions, ScaleFunction, TNorm,
};
use proptest::prelude::*;

fn opts() -> RunOptions {
    RunOptions::default()
}

fn tracked() -> RunOptions {
    RunOptions {
        track_residuals: true,
        ..RunOptions::default()
    }
}

/// Smallest `n >= 1` with `floor + α^n·D < δ`, by a plain scan.
fn scan_n(delta: f64, alpha: f64, d: f64, floor: f64) -> usize {
    let mut n = 1;
    let mut t = alpha * d;
    while floor + t >= delta {
        n += 1;
        t *= alpha;
    }
    n
}

#[test]
fn plan_examples() {
    let p = plan_iterations(1e-6, 1.0 / 3.0, 1.0, GridChoice::Exact).unwrap();
    assert_eq!(p.iterations, 13);
    assert_eq!(p.iterations, scan_n(1e-6, 1.0 / 3.0, 1.0, 0.0));
    // 500 cells on [0,1] give ε = 0.001
    let g = Grid::uniform(&[0.0], &[1.0], 500).unwrap();
    let p = plan_iterations(0.02, 0.8, 2f64.sqrt(), GridChoice::Fixed(g)).unwrap();
    assert_eq!(p.iterations, 21);
    assert_eq!(p.iterations, scan_n(0.02, 0.8, 2f64.sqrt(), 0.005));
}

#[test]
fn plan_rejects_infeasible() {
    let g = Grid::uniform(&[0.0], &[1.0], 10).unwrap();
    assert!(matches!(
        plan_iterations(0.01, 0.5, 1.0, GridChoice::Fixed(g)),
        Err(Error::Infeasible(_))
    ));
    assert!(matches!(plan_iterations(0.1, 1.0, 1.0, GridChoice::Exact), Err(Error::Domain(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn plan_is_minimal(delta in 1e-6..1.0f64, alpha in 0.05..0.95f64, d in 0.1..10.0f64, cells in 10usize..100_000) {
        let g = Grid::uniform(&[0.0, 0.0], &[1.0, 1.0], cells).unwrap();
        let floor = g.epsilon() / (1.0 - alpha);
        match plan_iterations(delta, alpha, d, GridChoice::Fixed(g)) {
            Ok(p) => {
                prop_assert!(p.error_bound() < delta);
                prop_assert_eq!(p.iterations, scan_n(delta, alpha, d, floor));
            }
            Err(_) => prop_assert!(floor >= delta),
        }
    }

    #[test]
    fn free_grid_meets_delta(delta in 1e-4..1.0f64, alpha in 0.05..0.95f64) {
        let p = plan_iterations(delta, alpha, 2f64.sqrt(), GridChoice::Free { lower: vec![0.0, 0.0], upper: vec![1.0, 1.0] }).unwrap();
        prop_assert!(p.epsilon() / (1.0 - alpha) <= delta / 2.0 + 1e-15);
        prop_assert!(p.error_bound() < delta);
    }
}

#[test]
fn residuals_decay_on_exact_runs() {
    for (sys, seed) in [
        (cantor(), Point::new(&[0.5])),
        (load_config("maple.cfg").system().unwrap(), Point::new(&[0.5, 0.5])),
    ] {
        let trace = run_deterministic(&sys, &DensityMap::dirac(seed), 7, &tracked()).unwrap();
        let r: Vec<f64> = trace.residuals.iter().flatten().copied().collect();
        assert_eq!(r.len(), 7);
        for w in r.windows(2) {
            assert!(w[1] <= (sys.alpha() + 1e-9) * w[0] + 1e-9, "{r:?}");
        }
    }
}

#[test]
fn cardinalities_are_bounded() {
    let sys = load_config("maple.cfg").system().unwrap();
    let g = Grid::uniform(&[0.0, 0.0], &[1.0, 1.0], 64).unwrap();
    let seed = DensityMap::dirac(Point::new(&[0.5, 0.5]));
    let t = run_discrete(&sys, &g, &seed, 8, &opts()).unwrap();
    for w in t.cardinalities.windows(2) {
        assert!(w[1] <= sys.len() * w[0] && w[1] <= g.node_count());
    }
    let gifs = load_config("gifs1.cfg").system().unwrap();
    let t = run_gifs(&gifs, &g, &seed, 3, CombineRule::Min, &opts()).unwrap();
    for w in t.cardinalities.windows(2) {
        assert!(w[1] <= gifs.len() * w[0] * w[0]);
    }
}

#[test]
fn degenerate_gifs_reduces_to_ifs() {
    // φ(x, y) = x/3 (+2/3) ignores its second argument
    let pair = |b| AffineMap::new(1, 2, vec![1.0 / 3.0, 0.0], vec![b]).unwrap();
    let gifs = MaxPlusSystem::new(vec![pair(0.0), pair(2.0 / 3.0)], vec![0.0, -1.0], Some(0.34)).unwrap();
    let g = Grid::uniform(&[0.0], &[1.0], 243).unwrap();
    let seed = DensityMap::dirac(g.project(&Point::new(&[0.5])));
    let a = run_gifs(&gifs, &g, &seed, 6, CombineRule::Min, &opts()).unwrap();
    let b = run_discrete(&cantor(), &g, &seed, 6, &opts()).unwrap();
    assert_eq!(max_entry_gap(&a.final_density, &b.final_density), 0.0);
}

#[test]
fn sum_and_min_differ_only_where_both_parts_are_negative() {
    // φ(x, y) = x/4 + y/2 on the nodes 0 and 1 of a 12-cell grid
    let map = AffineMap::new(1, 2, vec![0.25, 0.5], vec![0.0]).unwrap();
    let sys = MaxPlusSystem::new(vec![map], vec![0.0], Some(0.75)).unwrap();
    let g = Grid::uniform(&[0.0], &[1.0], 12).unwrap();
    let mu = density(1, &[(vec![0.0], 0.0), (vec![1.0], -1.0)]);
    let min = discrete_step(&mu, &sys, &g, CombineRule::Min).unwrap();
    let sum = discrete_step(&mu, &sys, &g, CombineRule::Sum).unwrap();
    let at = |m: &DensityMap, x: f64| m.get(&Point::new(&[x]));
    for (x, want_min, want_sum) in [(0.0, 0.0, 0.0), (0.5, -1.0, -1.0), (0.25, -1.0, -1.0), (0.75, -1.0, -2.0)] {
        assert_eq!(at(&min, x), want_min, "min at {x}");
        assert_eq!(at(&sum, x), want_sum, "sum at {x}");
    }
    assert_eq!(min.len(), 4);
    assert_eq!(sum.len(), 4);
}

fn assert_conjugate(max_plus: &DensityMap, fuzzy: &idempo::FuzzyMap, theta: ScaleFunction) {
    let back = theta_backward(fuzzy, theta);
    assert!(max_entry_gap(max_plus, &back) <= 1e-9, "gap {}", max_entry_gap(max_plus, &back));
}

#[test]
fn engine_commutes_with_theta() {
    let theta = ScaleFunction::exponential(2.0).unwrap();
    let sys = load_config("maple.cfg").system().unwrap();
    let greys = grey_maps(&sys, theta);
    let seed = DensityMap::dirac(Point::new(&[0.5, 0.5]));

    let q: Vec<QuantizedMap> = sys.maps().iter().map(|m| QuantizedMap { map: m.clone(), digits: 12 }).collect();
    let mut u = theta_forward(&seed, theta);
    for _ in 0..6 {
        u = hutchinson_step(&u, &q, &greys).unwrap();
    }
    assert_conjugate(&run_deterministic(&sys, &seed, 6, &opts()).unwrap().final_density, &u, theta);

    let g = Grid::uniform(&[0.0, 0.0], &[1.0, 1.0], 128).unwrap();
    let dm: Vec<_> = sys.maps().iter().map(|m| discretize_map(m, &g).unwrap()).collect();
    let mut u = theta_forward(&seed, theta);
    for _ in 0..8 {
        u = hutchinson_step(&u, &dm, &greys).unwrap();
    }
    assert_conjugate(&run_discrete(&sys, &g, &seed, 8, &opts()).unwrap().final_density, &u, theta);

    let gifs = load_config("gifs1.cfg").system().unwrap();
    let greys = grey_maps(&gifs, theta);
    let g = Grid::uniform(&[0.0, 0.0], &[1.0, 1.0], 64).unwrap();
    let dm: Vec<_> = gifs.maps().iter().map(|m| discretize_map(m, &g).unwrap()).collect();
    for (rule, tnorm) in [(CombineRule::Min, TNorm::Minimum), (CombineRule::Sum, TNorm::Product)] {
        let mut u = theta_forward(&seed, theta);
        for _ in 0..3 {
            u = hutchinson_step_tuples(&u, &dm, &greys, tnorm).unwrap();
        }
        assert_conjugate(&run_gifs(&gifs, &g, &seed, 3, rule, &opts()).unwrap().final_density, &u, theta);
    }
}

#[test]
fn exact_step_matches_markov_step() {
    let sys = cantor();
    let mut mu = DensityMap::dirac(Point::new(&[0.5]));
    for _ in 0..5 {
        mu = markov_step(&mu, sys.weights(), sys.maps()).unwrap();
    }
    let t = run_deterministic(&sys, &DensityMap::dirac(Point::new(&[0.5])), 5, &opts()).unwrap();
    assert!(idempo::dtheta_distance(&mu, &t.final_density, Metric::Euclidean).unwrap() < 1e-11);
}

fn outputs(cfg: &idempo::io::RunConfig) -> (String, Vec<u8>) {
    let out = execute(cfg, false).unwrap();
    let spec = cfg.render_spec().unwrap();
    (density_to_csv(&out.trace.final_density), render_pgm(&out.trace.final_density, &spec).unwrap())
}

#[test]
fn outputs_do_not_depend_on_thread_count() {
    let mut maple = load_config("maple.cfg");
    maple.run.iterations = Some(7);
    let mut gifs = load_config("gifs2.cfg");
    gifs.run.cells = Some(vec![96]);
    gifs.run.iterations = Some(3);
    for cfg in [maple, gifs] {
        let pool = |n| rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap();
        let one = pool(1).install(|| outputs(&cfg));
        let four = pool(4).install(|| outputs(&cfg));
        assert_eq!(one, four);
        assert_eq!(one, outputs(&cfg));
    }
}

#[test]
fn triadic_cantor_is_a_fixed_point() {
    let g = Grid::uniform(&[0.0], &[1.0], 3usize.pow(7)).unwrap();
    let seed = DensityMap::dirac(Point::new(&[0.0]));
    let t = run_discrete(&cantor(), &g, &seed, 30, &opts()).unwrap();
    // each level-7 interval projects onto both of its end nodes
    assert_eq!(t.final_density.len(), 1 << 8);
    assert_eq!(fixed_point_check(&t, &cantor(), Some(&g)).unwrap(), 0.0);
}

#[test]
fn caps_abort_with_resource_errors() {
    let sys = load_config("maple.cfg").system().unwrap();
    let seed = DensityMap::dirac(Point::new(&[0.5, 0.5]));
    let small = RunOptions { support_cap: 1000, ..opts() };
    assert!(run_deterministic(&sys, &seed, 8, &small).unwrap_err().is_resource());
    let gifs = load_config("gifs1.cfg").system().unwrap();
    let g = Grid::uniform(&[0.0, 0.0], &[1.0, 1.0], 64).unwrap();
    let small = RunOptions { tuple_cap: 1000, ..opts() };
    assert!(run_gifs(&gifs, &g, &seed, 4, CombineRule::Min, &small).unwrap_err().is_resource());
}

#[test]
fn off_grid_seed_is_rejected() {
    let g = Grid::uniform(&[0.0], &[1.0], 10).unwrap();
    let seed = DensityMap::dirac(Point::new(&[0.55]));
    assert!(run_discrete(&cantor(), &g, &seed, 2, &opts()).is_err());
}
