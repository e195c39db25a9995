use fastcons::config::{parse_config, to_args};
use fastcons::edgelist::{parse_edge_list, write_edge_list, ParseError};
use fastcons::export;
use fastcons_core::finite_time::deadbeat_schedule;
use fastcons_core::rng::SeededRng;
use fastcons_core::sim::{simulate_constant, uniform_initial_state};
use fastcons_core::spectrum::spectrum_default;
use fastcons_core::{GainVector, Graph, SystemConfig};
use proptest::prelude::*;

fn random_graph() -> impl Strategy<Value = Graph> {
    (2usize..25, 0.0..0.5f64, any::<bool>(), any::<u64>()).prop_map(|(n, p, weighted, seed)| {
        let mut rng = SeededRng::new(seed, 0);
        Graph::random_connected(n, p, weighted, &mut rng).unwrap()
    })
}

fn to_text(g: &Graph) -> String {
    let mut buf = Vec::new();
    write_edge_list(g, &mut buf).unwrap();
    String::from_utf8(buf).unwrap()
}

fn parse_reals(line: &str) -> Vec<f64> {
    line.split(',').skip(1).map(|c| c.parse().unwrap()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn edge_list_round_trips(g in random_graph()) {
        let back = parse_edge_list(&to_text(&g)).unwrap();
        prop_assert_eq!(back.node_count(), g.node_count());
        prop_assert_eq!(back.edges(), g.edges());
    }

    #[test]
    fn comments_and_blank_lines_are_ignored(g in random_graph(), seed in any::<u64>()) {
        let mut rng = SeededRng::new(seed, 1);
        let mut noisy = String::new();
        for line in to_text(&g).lines() {
            if rng.next_f64() < 0.3 {
                noisy.push_str("# note\n\n");
            }
            noisy.push_str(line);
            noisy.push_str(if rng.next_f64() < 0.3 { "  # trailing\n" } else { "\n" });
        }
        let back = parse_edge_list(&noisy).unwrap();
        prop_assert_eq!(back.edges(), g.edges());
    }

    #[test]
    fn bad_line_is_located(g in random_graph(), junk in "[a-z]{1,6}") {
        let text = to_text(&g);
        let line = text.lines().count() + 1;
        let err = parse_edge_list(&format!("{text}1 {junk}\n")).unwrap_err();
        prop_assert!(matches!(err, ParseError::Syntax { line: l, .. } if l == line), "{}", err);
    }

    #[test]
    fn reals_round_trip_through_csv(v in any::<f64>().prop_filter("finite", |v| v.is_finite())) {
        prop_assert_eq!(export::real(v).parse::<f64>().unwrap(), v);
    }

    #[test]
    fn trajectory_csv_matches_states(g in random_graph(), seed in any::<u64>()) {
        let cfg = SystemConfig::new(2, 0.1).unwrap();
        let x0 = uniform_initial_state(g.node_count(), 2, 1.0, seed);
        let t = simulate_constant(&g, &cfg, &GainVector::new(vec![0.1, 0.3]), &x0, 6).unwrap();
        let mut buf = Vec::new();
        export::write_trajectory(&t, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        prop_assert_eq!(lines.len(), 8);
        prop_assert_eq!(lines[0].split(',').count(), 2 + 2 * g.node_count());
        for (k, line) in lines[1..].iter().enumerate() {
            let vals = parse_reals(line);
            prop_assert_eq!(vals[0], t.errors()[k]);
            prop_assert_eq!(&vals[1..], &t.states().unwrap()[k][..]);
        }
    }

    #[test]
    fn config_values_survive_expansion(tau in 0.01..1.0f64, order in 1usize..7) {
        let text = format!("tau = {tau}\norder={order}\n");
        let args = to_args(&parse_config(&text, "c").unwrap());
        prop_assert_eq!(args, vec!["--tau".to_string(), tau.to_string(), "--order".into(), order.to_string()]);
    }
}

#[test]
fn schedule_csv_has_one_row_per_step() {
    let cfg = SystemConfig::new(3, 0.1).unwrap();
    let s = spectrum_default(&Graph::cycle(10).unwrap()).unwrap();
    let sched = deadbeat_schedule(&s, &cfg).unwrap();
    let mut buf = Vec::new();
    export::write_schedule(&sched, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "step,K1,K2,K3");
    assert_eq!(lines.len(), 16);
    for (step, line) in lines[1..].iter().enumerate() {
        assert_eq!(parse_reals(line), sched.gain_at(step).to_vec());
    }
}

#[test]
fn spectrum_csv_marks_clusters() {
    let s = spectrum_default(&Graph::cycle(6).unwrap()).unwrap();
    let mut buf = Vec::new();
    export::write_spectrum(&s, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let marked: Vec<&str> = text.lines().skip(1).filter(|l| !l.ends_with(",,")).collect();
    // C6: 1 (x2), 3 (x2), 4 (x1)
    assert_eq!(marked.len(), 3);
    assert!(marked[0].ends_with(",2"));
    assert!(marked[2].ends_with(",1"));
}
