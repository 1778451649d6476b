use qmaps_experiments::*;
use std::process::Command;

fn qmaps(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_qmaps")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn outputs_repeat_bit_for_bit() {
    let runs = [
        vec!["exp-condensation", "--ladder", "300,600", "--replicas", "4", "--seed", "9"],
        vec!["exp-profile", "--ladder", "1000", "--replicas", "2", "--seed", "9"],
        vec!["exp-counts", "--n", "4"],
        vec!["exp-order", "--replicas", "1", "--budget", "5", "--ladder", "3"],
        vec!["exp-exchangeable", "--n", "5", "--ladder", "20,40", "--replicas", "2"],
        vec!["sample", "--n", "30", "--seed", "3"],
        vec!["decompose", "--n", "300", "--seed", "3"],
        vec!["order-check", "--n", "4", "--seed", "3"],
    ];
    for args in runs {
        let (c1, a) = qmaps(&args);
        let (c2, b) = qmaps(&args);
        assert_eq!((c1, c2), (0, 0), "{args:?}");
        assert_eq!(a, b, "{args:?}");
        if args[0].starts_with("exp-") {
            // CSV files start with the provenance line; JSON carries it as "header"
            let head = a.lines().find(|l| l.contains("# qmaps ")).unwrap();
            assert!(head.contains(&format!("version={VERSION}")), "{head}");
            for field in ["experiment=", "ladder=", "replicas=", "seed=", "budget=", "out="] {
                assert!(head.contains(field), "{field} missing from {head}");
            }
        }
    }
}

#[test]
fn seeds_change_the_output() {
    let (_, a) = qmaps(&["exp-condensation", "--ladder", "500", "--replicas", "3", "--seed", "1"]);
    let (_, b) = qmaps(&["exp-condensation", "--ladder", "500", "--replicas", "3", "--seed", "2"]);
    assert_ne!(a.lines().nth(2), b.lines().nth(2));
}

#[test]
fn exit_codes() {
    assert_eq!(qmaps(&["enumerate", "--n", "9"]).0, 2);
    assert_eq!(qmaps(&["exp-condensation", "--ladder", "5000", "--budget", "1000"]).0, 2);
    assert_eq!(qmaps(&["exp-profile", "--ladder", "100"]).0, 2);
    assert_eq!(qmaps(&["exp-order", "--budget", "12"]).0, 2);
    assert_eq!(qmaps(&["sample", "--n", "10", "--class", "irreducible", "--budget", "50"]).0, 2);
    assert_eq!(qmaps(&["enumerate", "--class", "hexagon", "--n", "5"]).0, 0);
}

#[test]
fn enumerate_lists_parse_back() {
    let (code, text) = qmaps(&["enumerate", "--n", "2", "--list"]);
    assert_eq!(code, 0);
    let records: Vec<&str> = text.split("PMAP").filter(|s| !s.trim().is_empty()).collect();
    assert_eq!(records.len(), 9);
    for r in records {
        let m = qmaps::map_kernel::deserialize(&format!("PMAP{r}")).unwrap();
        assert!(m.is_quadrangulation());
    }
}

#[test]
fn condensation_rows_and_summary() {
    let cfg = ExperimentConfig::new("condensation", &[400], 5, 3, 1000);
    let rep = run_condensation(&cfg).unwrap();
    assert_eq!(rep.rows.len(), 5);
    let s = &rep.summaries[0];
    assert!(s.mean_lirr <= s.mean_ls && s.unique_freq <= 1.0);
    for r in &rep.rows {
        assert!(r.second <= r.l_irr && r.l_irr <= r.l_s);
    }
    let csv = rep.to_csv(&cfg);
    assert_eq!(csv.lines().count(), 1 + 1 + 5 + 1);
}

#[test]
fn profile_floor_and_ks() {
    let cfg = ExperimentConfig::new("profile", &[PROFILE_FLOOR - 1], 1, 3, 10_000);
    assert!(matches!(run_profile_match(&cfg), Err(ExpError::Input(_))));
    assert_eq!(ks_statistic(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]), 0.0);
    assert_eq!(ks_statistic(&[0.0, 0.0], &[1.0, 1.0]), 1.0);
    assert!((ks_statistic(&[1.0, 2.0], &[2.0, 3.0]) - 0.5).abs() < 1e-12);
    let rep = run_profile_match(&ExperimentConfig::new("profile", &[1500], 2, 3, 10_000)).unwrap();
    for r in &rep.replicas {
        assert!(r.ks > 0.0 && r.ks <= 1.0);
        assert!(r.host_cdf.windows(2).all(|w| w[0] <= w[1]) && r.comp_cdf.windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn order_demo_chains_are_witnessed() {
    let mut cfg = ExperimentConfig::new("order", &[3], 2, 5, 6);
    cfg.n = Some(1);
    let rep = run_order_demos(&cfg).unwrap();
    for c in &rep.chains {
        assert_eq!(c.witnessed, order::CHAIN_STEPS);
        assert!(c.composite_verified);
        assert!(c.vertices.windows(2).all(|w| w[1] == w[0] + 1));
    }
    assert_eq!(rep.exact_witnessed, rep.exact_openings);
    assert_eq!(rep.antisymmetry.violations(), 0);
    assert!(rep.to_json(&cfg).contains("not the uniform growth coupling"));
}

#[test]
fn counts_report() {
    let mut cfg = ExperimentConfig::new("counts", &[1000], 1, 0, 7);
    cfg.n = Some(5);
    let rep = run_counts(&cfg).unwrap();
    assert!(rep.all_match());
    assert_eq!(rep.counts.len(), 4 + 5);
    cfg.n = Some(8);
    assert!(matches!(run_counts(&cfg), Err(ExpError::Budget(_))));
}

#[test]
fn exchangeable_report_rejects_the_trend() {
    let mut cfg = ExperimentConfig::new("exchangeable", &[30, 60], 2, 4, 100);
    cfg.n = Some(4);
    let rep = run_exchangeable(&cfg).unwrap();
    let rejected: Vec<_> = rep.concentration.iter().filter(|c| c.1.is_err()).map(|c| c.0).collect();
    assert_eq!(rejected, vec![qmaps::exchangeable::MassGenerator::Increasing]);
    assert_eq!(rep.remark.first_violation, Some(35));
}
