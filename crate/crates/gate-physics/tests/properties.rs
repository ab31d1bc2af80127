use num_complex::Complex64;
use proptest::prelude::*;
use rydberg_gate::lindblad::{Generator, Segment, DIM};
use rydberg_gate::*;

fn twice(x: u32) -> f64 {
    x as f64 / 2.0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn six_j_column_permutation_symmetry(a in 0u32..7, b in 0u32..7, c in 0u32..7, d in 0u32..7, e in 0u32..7, f in 0u32..7) {
        let (a, b, c, d, e, f) = (twice(a), twice(b), twice(c), twice(d), twice(e), twice(f));
        if let Ok(w) = six_j(a, b, c, d, e, f) {
            for v in [six_j(b, a, c, e, d, f), six_j(a, c, b, d, f, e), six_j(c, b, a, f, e, d)] {
                prop_assert!((v.unwrap() - w).abs() < 1e-12);
            }
            // Swapping upper and lower entries in two columns.
            prop_assert!((six_j(d, e, c, a, b, f).unwrap() - w).abs() < 1e-12);
        }
    }

    #[test]
    fn six_j_orthogonality(j1 in 0u32..5, j2 in 0u32..5, j4 in 0u32..5, j5 in 0u32..5, k in 0usize..8, kp in 0usize..8) {
        // sum_x (2x+1)(2j6+1) {j1 j2 x; j4 j5 j6} {j1 j2 x; j4 j5 j6'} = δ(j6, j6')
        // whenever both (j1 j5 j6) and (j4 j2 j6) triads close.
        let (j1, j2, j4, j5) = (twice(j1), twice(j2), twice(j4), twice(j5));
        prop_assume!((j1 + j5 - j4 - j2).fract() == 0.0);
        let lo = (j1 - j5).abs().max((j4 - j2).abs());
        let hi = (j1 + j5).min(j4 + j2);
        prop_assume!(lo <= hi);
        let allowed: Vec<f64> = (0..).map(|n| lo + n as f64).take_while(|&x| x <= hi).collect();
        let (j6, j6p) = (allowed[k % allowed.len()], allowed[kp % allowed.len()]);
        let mut sum = 0.0;
        let mut x = (j1 - j2).abs();
        while x <= j1 + j2 {
            if let (Ok(u), Ok(v)) = (six_j(j1, j2, x, j4, j5, j6), six_j(j1, j2, x, j4, j5, j6p)) {
                sum += (2.0 * x + 1.0) * (2.0 * j6 + 1.0) * u * v;
            }
            x += 1.0;
        }
        let want = if j6 == j6p { 1.0 } else { 0.0 };
        prop_assert!((sum - want).abs() < 1e-10, "sum {}", sum);
    }

    #[test]
    fn branching_is_scale_free(scale in 1e-3f64..1e6) {
        let input = branching::yb_3s1_decay().input;
        let scaled = BranchingInput {
            finals: input.finals.iter().map(|f| branching::FinalLevel { omega: f.omega * scale, ..*f }).collect(),
            ..input.clone()
        };
        for (a, b) in branching_ratios(&input).unwrap().iter().zip(branching_ratios(&scaled).unwrap()) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn channels_are_probabilities(
        gamma_tg in 1e-5f64..3e-2,
        b in 0.0f64..1.0,
        r_share in 0.0f64..1.0,
        p01 in 0.0f64..1.0,
        p11_share in 0.0f64..1.0,
    ) {
        let r = (1.0 - b) * r_share;
        let fractions = BranchingFractions { b, r, q: 1.0 - b - r };
        let cfg = GatePhysicsConfig::from_gamma_tg(gamma_tg, 1e6).with_branching(fractions);
        let p11 = (1.0 - p01) * p11_share;
        let dist = InitialDistribution { p00: 1.0 - p01 - p11, p01, p11 };
        let c = TrajectoryCoefficients {
            alpha: 0.53, r_01: 0.70, beta: 0.47, r_11: 0.64, r_11_prime: 0.70,
            beta_prime: 0.27, beta_double: 4e-6, s: 1e-5,
        };
        let ch = channel_probabilities(&cfg, &c, &dist).unwrap();
        for p in [ch.p_qr, ch.p_qb, ch.p_rb, ch.p_rr, ch.p_bb, ch.p_e, ch.p_f, ch.p_p] {
            prop_assert!((0.0..=1.0).contains(&p), "{:?}", ch);
        }
        prop_assert!((ch.p_e - (ch.p_qr + ch.p_qb + ch.p_rb + ch.p_rr)).abs() < 1e-15);
        prop_assert!(ch.p_e <= gamma_tg);
    }

    #[test]
    fn master_equation_preserves_trace(
        gamma in 0.0f64..2.0,
        b in 0.0f64..1.0,
        omega in 0.1f64..5.0,
        phase in 0.0f64..6.3,
        delta in -3.0f64..3.0,
        v in prop_oneof![Just(f64::INFINITY), 1.0f64..50.0],
        noise in prop::collection::vec(-0.5f64..0.5, 2 * DIM * DIM),
    ) {
        let cfg = GatePhysicsConfig {
            gamma,
            branching: BranchingFractions { b, r: (1.0 - b) * 0.5, q: (1.0 - b) * 0.5 },
            omega,
            v_rr: v,
            v_rp: v,
            v_pp: v,
            t_g: 1.0,
        };
        let seg = Segment { duration: 1.0, omega: Complex64::from_polar(omega, phase), delta };
        let gen = Generator::new(&cfg, &seg);
        // Random Hermitian, unit-trace input.
        let mut h = vec![Complex64::default(); DIM * DIM];
        for i in 0..DIM {
            for j in i..DIM {
                let (x, y) = (noise[2 * (i * DIM + j)], noise[2 * (i * DIM + j) + 1]);
                let z = if i == j { Complex64::new(x + 1.0, 0.0) } else { Complex64::new(x, y) * 0.1 };
                h[i * DIM + j] = z;
                h[j * DIM + i] = z.conj();
            }
        }
        let tr: f64 = (0..DIM).map(|i| h[i * DIM + i].re).sum();
        h.iter_mut().for_each(|z| *z /= tr);
        let mut out = vec![Complex64::default(); DIM * DIM];
        gen.apply_lindblad(&h, &mut out);
        let dtrace: Complex64 = (0..DIM).map(|i| out[i * DIM + i]).sum();
        prop_assert!(dtrace.norm() < 1e-12);
        for i in 0..DIM {
            for j in 0..DIM {
                prop_assert!((out[i * DIM + j] - out[j * DIM + i].conj()).norm() < 1e-12);
            }
        }
    }
}
