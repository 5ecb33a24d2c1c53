use hopf_flow::basis::coeffs::AstigmatismCoefficients;
use hopf_flow::basis::poly::Pole;
use hopf_flow::cli::config::RunConfig;
use hopf_flow::flow::operators::{psi_rhs_theta, s_rhs_theta};
use hopf_flow::flow::params::FlowParams;
use hopf_flow::flow::rates::mode_rates;
use hopf_flow::flow::soliton::Soliton;
use hopf_flow::flow::solution::{FlowSolution, InitialSupport};
use hopf_flow::geometry::events::pole_astigmatism;
use hopf_flow::geometry::fate::{classify_solution, Verdict};
use hopf_flow::geometry::profile::profile_radius_mismatch;
use hopf_flow::geometry::roc::roc_diagram;
use hopf_flow::geometry::umbilic::{slope_at_poles, Slope};
use hopf_flow::scalar::{rat, Rational, Scalar};
use proptest::prelude::*;
use std::path::Path;

fn q(v: i64) -> Rational {
    rat(v, 1)
}

fn solution(n: usize, a: &[i64], b: &[i64], c0: i64) -> FlowSolution {
    let a: Vec<Rational> = a.iter().map(|&v| q(v)).collect();
    let b: Vec<Rational> = b.iter().map(|&v| q(v)).collect();
    let coeffs = AstigmatismCoefficients::from_trig(n, &a, &b);
    let params = FlowParams::new(n, q(10)).unwrap();
    FlowSolution::new(params, &coeffs, InitialSupport::Offsets { c0: q(c0), c1: q(0) }).unwrap()
}

fn modal_data() -> impl Strategy<Value = (usize, Vec<i64>, Vec<i64>)> {
    (0usize..=3).prop_flat_map(|n| {
        (
            Just(n),
            prop::collection::vec(-5i64..=5, 0..=n + 2),
            prop::collection::vec(-5i64..=5, 0..=n + 2),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closed_form_satisfies_both_equations(
        (n, a, b) in modal_data(),
        c0 in -3i64..=3,
        t in 0.0f64..1.0,
        thetas in prop::collection::vec(0.05f64..std::f64::consts::PI - 0.05, 200),
    ) {
        let sol = solution(n, &a, &b, c0);
        let lambda = sol.params().lambda_f64();
        let s = sol.s_at(t);
        let (ds, d2s) = (s.d_theta(), s.d_theta().d_theta());
        let psi = sol.psi_at(t);
        let (dpsi, d2psi) = (psi.d_theta(), psi.d_theta().d_theta());
        let s_dot = sol.s_series().time_derivative();
        let psi_dot = sol.psi_series().time_derivative();
        let scale = 1.0 + s.max_abs_coeff() + psi.max_abs_coeff();
        for &th in &thetas {
            let lhs = s_dot.eval(t, th);
            let rhs = s_rhs_theta(lambda, th, s.eval(th), ds.eval(th), d2s.eval(th));
            prop_assert!((lhs - rhs).abs() < 1e-9 * scale, "s at θ={th}: {lhs} vs {rhs}");
            let lhs = psi_dot.eval(t, th);
            let rhs = psi_rhs_theta(lambda, 10.0, th, psi.eval(th), dpsi.eval(th), d2psi.eval(th), s.eval(th));
            prop_assert!((lhs - rhs).abs() < 1e-9 * scale, "ψ at θ={th}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn modal_chain_matches_rk4((n, a, b) in modal_data().prop_filter("finite modes", |d| d.0 > 0)) {
        let sol = solution(n, &a, &b, 0);
        let rates = mode_rates(n);
        let f = |x: &[f64], rate: &[Rational]| -> Vec<f64> {
            (0..n)
                .map(|l| {
                    let feed = if l + 1 < n { rates.nu[l + 1].as_f64() * x[l + 1] } else { 0.0 };
                    rate[l].as_f64() * x[l] - feed
                })
                .collect()
        };
        let t_end = 0.5;
        let steps = 2000;
        let h = t_end / steps as f64;
        let evolved = sol.evolve_s(t_end);
        for (start, rate, got) in [
            (sol.initial().trig_a(), &rates.mu, evolved.trig_a()),
            (sol.initial().trig_b(), &rates.mu_half, evolved.trig_b()),
        ] {
            let mut x: Vec<f64> = start.iter().map(Scalar::as_f64).collect();
            for _ in 0..steps {
                let axpy = |k: &[f64], c: f64| -> Vec<f64> { x.iter().zip(k).map(|(u, v)| u + c * v).collect() };
                let k1 = f(&x, rate);
                let k2 = f(&axpy(&k1, h / 2.0), rate);
                let k3 = f(&axpy(&k2, h / 2.0), rate);
                let k4 = f(&axpy(&k3, h), rate);
                for i in 0..n {
                    x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
                }
            }
            for (u, v) in x.iter().zip(got) {
                prop_assert!((u - v).abs() < 1e-10 * (1.0 + v.abs()), "{u} vs {v}");
            }
        }
    }

    #[test]
    fn exact_identities_hold((n, a, b) in modal_data(), c0 in -3i64..=3) {
        prop_assert!(solution(n, &a, &b, c0).satisfies_flow_exactly().unwrap());
    }

    #[test]
    fn soliton_moves_by_isometry(
        lambda in prop_oneof![1.2f64..2.8, 3.2f64..5.0],
        psi_inf in 1.0f64..20.0,
        s_half in -2.0f64..2.0,
        psi0 in 0.0f64..20.0,
        t in 0.0f64..2.0,
    ) {
        let sol = Soliton::dilation(lambda, psi_inf, s_half).unwrap().unwrap();
        let start = roc_diagram(&sol.state(0.0), 257);
        let later = roc_diagram(&sol.state(t), 257);
        let scale = psi_inf + sol.psi0().abs() + s_half.abs();
        prop_assert!(later.distance(&start.dilated(psi_inf, sol.dilation_factor(t))) < 1e-10 * scale);

        let sol = Soliton::new(2.0, psi_inf, psi0, s_half).unwrap();
        let shift = sol.relaxation().unwrap() * ((-t).exp() - 1.0);
        let start = roc_diagram(&sol.state(0.0), 257);
        let later = roc_diagram(&sol.state(t), 257);
        prop_assert!(later.distance(&start.translated(shift)) < 1e-10 * (psi_inf + psi0 + s_half.abs()));
    }

    #[test]
    fn profile_curvature_matches_principal_radius(
        (n, a, b) in modal_data(),
        t in 0.0f64..0.5,
    ) {
        // Small astigmatism keeps ψ ± s well away from zero.
        let a: Vec<i64> = a.iter().map(|&v| v.clamp(-1, 1)).collect();
        let b: Vec<i64> = b.iter().map(|&v| v.clamp(-1, 1)).collect();
        let sol = solution(n, &a, &b, 0);
        let state = sol.state_at(t);
        prop_assume!(state.min_principal_radius(1025) > 1.0);
        let gap = profile_radius_mismatch(&state, 4096);
        prop_assert!(gap < 1e-6, "{gap}");
    }

    #[test]
    fn pole_values_decide_initial_slopes((n, a, b) in modal_data()) {
        let sol = solution(n, &a, &b, 0);
        prop_assume!(!sol.initial().is_zero(0.0));
        let slopes = slope_at_poles(sol.initial()).unwrap();
        for (pole, slope) in [(Pole::North, &slopes.north), (Pole::South, &slopes.south)] {
            let at_pole: Rational = pole_astigmatism(&sol, pole).unwrap().terms.iter().map(|(_, c)| c.clone()).sum();
            let two = Slope::Exact(q(2));
            prop_assert_eq!(
                num_traits::Zero::is_zero(&at_pole),
                slope != &two,
                "{:?}: pole value {} with slope {}", pole, at_pole, slope
            );
        }
    }

    #[test]
    fn fate_agrees_with_long_time_coefficients((n, a, b) in modal_data()) {
        let sol = solution(n, &a, &b, 0);
        let start = sol.initial().to_f64().max_abs();
        prop_assume!(start > 0.0);
        let late = sol.evolve_s(40.0);
        let end = late.max_abs();
        let verdict = classify_solution(&sol).unwrap().verdict;
        match verdict {
            Verdict::Diverges => prop_assert!(end > 1e6 * start),
            Verdict::ConvergesRound => prop_assert!(end < 1e-9 * start),
            Verdict::ConvergesHopf => {
                let stationary = sol.initial().legendre(n).as_f64();
                prop_assert!((late.legendre(n) - stationary).abs() < 1e-12 * start);
                prop_assert!((end - late.legendre(n).abs()).abs() < 1e-9 * start);
            }
        }
    }

    #[test]
    fn config_times_must_be_sorted(mut times in prop::collection::vec(0u32..1000, 1..8)) {
        let body = |ts: &[u32]| {
            let list: Vec<String> = ts.iter().map(|v| format!("{}", *v as f64 / 100.0)).collect();
            format!("flow.n = 1\nflow.psi_inf = 10\ninitial.coefficients.a = 1\ntimes = {}\n", list.join(", "))
        };
        let unsorted = times.windows(2).any(|w| w[0] > w[1]);
        let parsed = RunConfig::parse(&body(&times), Path::new("."));
        if unsorted {
            let faults = parsed.unwrap_err();
            prop_assert_eq!(faults, vec!["line 4: times: not sorted".to_string()]);
        } else {
            let cfg = parsed.unwrap();
            prop_assert_eq!(cfg.times.len(), times.len());
        }
        times.sort_unstable();
        let cfg = RunConfig::parse(&body(&times), Path::new(".")).unwrap();
        for (got, raw) in cfg.times.iter().zip(&times) {
            prop_assert_eq!(*got, *raw as f64 / 100.0);
        }
    }

    #[test]
    fn unknown_keys_are_reported(key in "[a-z]{3,8}\\.[a-z]{3,8}") {
        prop_assume!(!key.starts_with("flow.") && !key.starts_with("output.") && !key.starts_with("initial."));
        let text = format!("flow.n = 1\nflow.psi_inf = 10\ninitial.coefficients.a = 1\ntimes = 0\n{key} = 1\n");
        let faults = RunConfig::parse(&text, Path::new(".")).unwrap_err();
        prop_assert_eq!(faults.len(), 1);
        prop_assert!(faults[0].starts_with("line 5:"), "{}", faults[0]);
    }
}
