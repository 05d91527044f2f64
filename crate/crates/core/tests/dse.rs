use omr_core::bfv::HeParams;
use omr_core::dse::{
    dsp_usage, explore, iteration_latency, rotation_bound, total_latency, CostFixture, DesignPoint,
    DesignSpace, FpgaBudget, OperatorLatencies, Workload,
};
use omr_core::Error;
use proptest::prelude::*;

fn full_workload() -> Workload {
    Workload::from_params(&HeParams::sophomr()).unwrap()
}

fn point(pc_ccadd: usize, pc_pcmul: usize, pi: usize, pc_rot: usize, pb: usize) -> DesignPoint {
    DesignPoint {
        pc_ccadd,
        pc_pcmul,
        pi,
        pc_rot,
        pb,
    }
}

/// Straight-line re-evaluation of every grid point with the shipped
/// fixture's numbers written out by hand.
fn brute_force(budget: &FpgaBudget) -> Vec<(DesignPoint, f64, u64)> {
    let (giant, baby) = (23.0, 46.0);
    let grid_pc = [1usize, 2, 4, 8, 16];
    let mut rows = Vec::new();
    for &a in &grid_pc {
        for &m in &grid_pc {
            for &pi in &[1usize, 2, 4, 8, 16] {
                for &r in &grid_pc {
                    for &pb in &[8usize, 16, 32, 64] {
                        let la = 0.80 * 16.0 / a as f64;
                        let lm = 0.80 * 16.0 / m as f64;
                        let lr = 31.35 * (0.9 * 64.0 / pb as f64 + 0.1 * 16.0 / r as f64);
                        let il = f64::max(baby / pi as f64 * lm + la, lr) + la;
                        let tl = (baby - 1.0) * lr + giant * il;
                        let d_a = (a as u64).div_ceil(16);
                        let d_m = (897 * m as u64).div_ceil(16);
                        let d_r = if (r, pb) == (16, 64) {
                            5123
                        } else {
                            (5123.0 * (0.75 * pb as f64 / 64.0 + 0.25 * r as f64 / 16.0)).ceil() as u64
                        };
                        let dsp = (pi as u64 + 1) * d_a + pi as u64 * d_m + d_r;
                        let bram = 1536 * pb as u64 / 64;
                        let matrix = 75_000_000u64.div_ceil(pi as u64 * 288_000);
                        let uram = 313 + 3 * 28 + pi as u64 * matrix;
                        if dsp <= budget.dsp && bram <= budget.bram && uram <= budget.uram {
                            let score = dsp + bram.div_ceil(2) + uram;
                            rows.push((point(a, m, pi, r, pb), tl, score));
                        }
                    }
                }
            }
        }
    }
    rows.sort_by(|x, y| {
        x.1.total_cmp(&y.1)
            .then(x.2.cmp(&y.2))
            .then(y.0.pc_pcmul.cmp(&x.0.pc_pcmul))
            .then(x.0.cmp(&y.0))
    });
    rows
}

#[test]
fn top_four_under_u55c() {
    let ranked = explore(
        &DesignSpace::default(),
        &full_workload(),
        &CostFixture::bundled(),
        &FpgaBudget::u55c(),
    )
    .unwrap();
    let top: Vec<DesignPoint> = ranked.iter().take(4).map(|r| r.point).collect();
    assert_eq!(
        top,
        vec![
            point(16, 16, 2, 16, 64),
            point(16, 8, 4, 16, 64),
            point(16, 4, 8, 16, 64),
            point(16, 2, 16, 16, 64),
        ]
    );
    for r in &ranked[..4] {
        assert_eq!(r.point.pc_pcmul * r.point.pi, 32);
        assert!((r.cost.tl_ms - 2150.2).abs() < 1e-9);
    }
    assert!(ranked[4].cost.tl_ms > ranked[3].cost.tl_ms || ranked[4].cost.resource_score() > 8385);
}

#[test]
fn ranking_matches_brute_force() {
    for dsp in [9024, 6000] {
        let budget = FpgaBudget {
            dsp,
            ..FpgaBudget::u55c()
        };
        let ranked = explore(&DesignSpace::default(), &full_workload(), &CostFixture::bundled(), &budget)
            .unwrap();
        let oracle = brute_force(&budget);
        assert_eq!(ranked.len(), oracle.len());
        for (r, o) in ranked.iter().zip(&oracle) {
            assert_eq!(r.point, o.0);
            assert!((r.cost.tl_ms - o.1).abs() < 1e-9);
            assert_eq!(r.cost.resource_score(), o.2);
        }
    }
}

#[test]
fn tight_dsp_budget_excludes_best() {
    let budget = FpgaBudget {
        dsp: 6000,
        ..FpgaBudget::u55c()
    };
    let ranked = explore(&DesignSpace::default(), &full_workload(), &CostFixture::bundled(), &budget)
        .unwrap();
    assert!(ranked.iter().all(|r| r.point != point(16, 16, 2, 16, 64)));
    assert!(ranked.iter().all(|r| r.cost.dsp <= 6000));
    assert!(ranked[0].cost.tl_ms > 2150.2);
}

#[test]
fn unit_dsp_budget_is_empty() {
    let budget = FpgaBudget {
        dsp: 1,
        ..FpgaBudget::u55c()
    };
    let err = explore(&DesignSpace::default(), &full_workload(), &CostFixture::bundled(), &budget)
        .unwrap_err();
    assert!(matches!(err, Error::BudgetTooSmall { .. }));
}

#[test]
fn exploration_is_deterministic() {
    let run = || {
        explore(
            &DesignSpace::default(),
            &full_workload(),
            &CostFixture::bundled(),
            &FpgaBudget::u55c(),
        )
        .unwrap()
    };
    let a = format!("{:?}", run());
    let b = format!("{:?}", run());
    assert_eq!(a, b);
}

#[test]
fn shipped_fixture_file_parses() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/u55c_operators.cfg");
    assert_eq!(CostFixture::from_file(path).unwrap(), CostFixture::bundled());
}

fn latencies() -> impl Strategy<Value = OperatorLatencies> {
    (0.01f64..10.0, 0.01f64..10.0, 0.0f64..200.0).prop_map(|(a, m, r)| OperatorLatencies {
        ccadd_ms: a,
        pcmul_ms: m,
        rot_ms: r,
    })
}

proptest! {
    #[test]
    fn iteration_latency_matches_formula(lat in latencies(), baby in 1usize..128, pi in 1usize..32) {
        let expect = {
            let chain = baby as f64 * lat.pcmul_ms / pi as f64 + lat.ccadd_ms;
            if chain > lat.rot_ms { chain + lat.ccadd_ms } else { lat.rot_ms + lat.ccadd_ms }
        };
        let got = iteration_latency(&lat, baby, pi).unwrap();
        prop_assert!((got - expect).abs() <= 1e-9 * expect.max(1.0));
    }

    #[test]
    fn more_cores_never_slow_down(lat in latencies(), giant in 1usize..64, baby in 1usize..128, log_pi in 0u32..5) {
        let pi = 1usize << log_pi;
        let slow = total_latency(&lat, giant, baby, pi).unwrap();
        let fast = total_latency(&lat, giant, baby, 2 * pi).unwrap();
        prop_assert!(fast <= slow + 1e-9);
    }

    #[test]
    fn slower_rotation_never_speeds_up(lat in latencies(), extra in 0.0f64..50.0, giant in 1usize..64, baby in 1usize..128, pi in 1usize..32) {
        let slower = OperatorLatencies { rot_ms: lat.rot_ms + extra, ..lat };
        prop_assert!(total_latency(&slower, giant, baby, pi).unwrap() >= total_latency(&lat, giant, baby, pi).unwrap() - 1e-9);
    }

    #[test]
    fn rotation_bound_fixes_latency(lat in latencies(), giant in 1usize..64, baby in 1usize..128, log_pi in 0u32..5) {
        let pi = 1usize << log_pi;
        if rotation_bound(&lat, baby, pi) {
            let here = total_latency(&lat, giant, baby, pi).unwrap();
            let more = total_latency(&lat, giant, baby, 2 * pi).unwrap();
            prop_assert_eq!(here, more);
        }
    }

    #[test]
    fn rotation_bound_total_is_affine(lat in latencies(), giant in 1usize..64, baby in 1usize..128, pi in 1usize..32, extra in 0.0f64..50.0) {
        if rotation_bound(&lat, baby, pi) {
            let slower = OperatorLatencies { rot_ms: lat.rot_ms + extra, ..lat };
            let delta = total_latency(&slower, giant, baby, pi).unwrap() - total_latency(&lat, giant, baby, pi).unwrap();
            let expect = (baby as f64 - 1.0 + giant as f64) * extra;
            prop_assert!((delta - expect).abs() <= 1e-6 * expect.max(1.0));
        }
    }

    #[test]
    fn dsp_is_linear_in_cores(pi in 0u64..1000, a in 0u64..10_000, m in 0u64..10_000, r in 0u64..100_000) {
        prop_assert_eq!(dsp_usage(pi, a, m, r), (pi + 1) * a + pi * m + r);
        prop_assert_eq!(dsp_usage(pi + 1, a, m, r) - dsp_usage(pi, a, m, r), a + m);
    }
}
