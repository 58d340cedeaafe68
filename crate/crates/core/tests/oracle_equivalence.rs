use fermiroot::models;
use fermiroot::oracle::{compare_multisets, dense_matrix, full_spectrum};
use fermiroot::{solve_full, HamiltonianSpec, SolveOptions};

const TOL: f64 = 1e-8;

fn check(name: &str, h: &HamiltonianSpec) {
    let report = solve_full(h, &SolveOptions::default()).unwrap_or_else(|e| panic!("{name}: {e}"));
    assert!(report.complete, "{name}: incomplete");
    assert_eq!(report.total_states, 1u128 << h.n(), "{name}: state count");
    let pipeline = report.expanded();
    let oracle = full_spectrum(&dense_matrix(h).unwrap()).unwrap();
    let cmp = compare_multisets(&pipeline, &oracle, TOL);
    assert!(cmp.equal, "{name}: {cmp:?}");
    assert!((report.ground_energy - oracle[0]).abs() < TOL, "{name}: ground {} vs {}", report.ground_energy, oracle[0]);
}

#[test]
fn canned() {
    for (name, h) in models::canned_examples() {
        if name == "claw" {
            continue;
        }
        check(name, &h);
    }
}

#[test]
fn chains() {
    for seed in 0..4 {
        check("xy open", &models::xy_chain_random(6, false, seed).unwrap());
        check("xy periodic", &models::xy_chain_random(5, true, seed).unwrap());
        check("xy periodic even", &models::xy_chain_random(6, true, seed).unwrap());
    }
    check("tfim", &models::tfim(5, 0.7, 1.3).unwrap());
}

#[test]
fn honeycomb() {
    check("honeycomb", &models::kitaev_honeycomb(2, 2, [1.0, 0.6, 0.3]).unwrap());
}

#[test]
fn sierpinski() {
    check("sierpinski J=0", &models::sierpinski_hanoi(2, 0.0).unwrap());
    check("sierpinski J=0.3", &models::sierpinski_hanoi(2, 0.3).unwrap());
}

#[test]
fn planted() {
    for seed in 0..30 {
        let p = models::planted_root_random(4..=10, seed).unwrap();
        check(&format!("planted {seed}"), &p.hamiltonian);
    }
}

fn check_sectors(name: &str, h: &HamiltonianSpec) {
    let model = fermiroot::analyze(h, Default::default()).unwrap();
    let dense = dense_matrix(h).unwrap();
    let report = model.solve(&SolveOptions::default()).unwrap();
    for s in &report.sectors {
        let oracle = fermiroot::oracle::sector_project(&dense, &model.sector_stabilizers(&s.label)).unwrap();
        let mine: Vec<f64> =
            s.energies.iter().flat_map(|&(e, m)| std::iter::repeat_n(e, m as usize)).collect();
        let cmp = compare_multisets(&mine, &oracle, TOL);
        assert!(cmp.equal, "{name} sector {}: {cmp:?}", s.label_string());
    }
}

#[test]
fn sector_by_sector() {
    check_sectors("twin demo", &models::twin_demo());
    check_sectors("two qubit", &models::two_qubit_full());
    check_sectors("xy periodic", &models::xy_chain_random(4, true, 3).unwrap());
    check_sectors("honeycomb", &models::kitaev_honeycomb(2, 2, [1.0, 0.6, 0.3]).unwrap());
    check_sectors("sierpinski", &models::sierpinski_hanoi(2, 0.3).unwrap());
    for seed in 0..10 {
        check_sectors("planted", &models::planted_root_random(6..=14, seed).unwrap().hamiltonian);
    }
}

#[test]
fn larger_planted_roots() {
    for seed in 0..10 {
        let p = models::planted_root_random(8..=18, 100 + seed).unwrap();
        check(&format!("planted {seed}"), &p.hamiltonian);
    }
}
