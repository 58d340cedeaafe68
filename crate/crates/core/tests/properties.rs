use fermiroot::models::planted_root;
use fermiroot::oracle::{compare_multisets, dense_matrix, full_spectrum, projector, signed_matrix};
use fermiroot::pauli::{anticommutes, multiply, validate_hamiltonian};
use fermiroot::solver::{block_diagonalize, orient, orientation_consistent, pfaffian, recognize_hamiltonian};
use fermiroot::{analyze, solve_full, Error, K3Root, PauliWord, SignedPauli, SolveOptions, TreeOrientation};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

fn word(n: usize) -> impl Strategy<Value = PauliWord> {
    prop::collection::vec(prop::sample::select(vec!['I', 'X', 'Y', 'Z']), n).prop_map(move |cs| {
        let mut w = PauliWord::identity(n);
        for (q, c) in cs.into_iter().enumerate() {
            w.set(q, c);
        }
        w
    })
}

fn word_pair() -> impl Strategy<Value = (PauliWord, PauliWord, PauliWord)> {
    (1usize..=8).prop_flat_map(|n| (word(n), word(n), word(n)))
}

fn antisymmetric(max: usize) -> impl Strategy<Value = DMatrix<f64>> {
    (1usize..=max).prop_flat_map(|n| {
        prop::collection::vec(-1.0f64..1.0, n * n).prop_map(move |v| {
            let m = DMatrix::from_vec(n, n, v);
            &m - m.transpose()
        })
    })
}

fn max_dev(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    (a - b).iter().map(|c| c.norm()).fold(0.0, f64::max)
}

proptest! {
    #[test]
    fn symplectic_form_is_symmetric_and_bilinear((a, b, c) in word_pair()) {
        prop_assert_eq!(anticommutes(&a, &b), anticommutes(&b, &a));
        prop_assert!(!anticommutes(&a, &a));
        prop_assert_eq!(anticommutes(&a, &b.xor(&c)), anticommutes(&a, &b) ^ anticommutes(&a, &c));
    }

    #[test]
    fn multiplication_matches_matrices(
        (a, b) in (1usize..=3).prop_flat_map(|n| (word(n), word(n))),
        pa in 0u8..4,
        pb in 0u8..4,
    ) {
        let (x, y) = (SignedPauli::new(a, pa), SignedPauli::new(b, pb));
        let p = multiply(&x, &y).unwrap();
        let dense = signed_matrix(&x) * signed_matrix(&y);
        prop_assert!(max_dev(&signed_matrix(&p), &dense) < 1e-12);
    }

    /// Any Hamiltonian the pipeline accepts, twins included, reproduces the
    /// dense spectrum with full multiplicity.
    #[test]
    fn accepted_models_match_dense_spectrum(
        words in (1usize..=4).prop_flat_map(|n| prop::collection::vec((word(n), -1.0f64..1.0), 1..8)),
    ) {
        let n = words[0].0.n();
        let mut words = words;
        words.sort_by(|a, b| a.0.cmp(&b.0));
        words.dedup_by(|a, b| a.0 == b.0);
        words.retain(|(w, c)| !w.is_identity() && c.abs() > 1e-3);
        prop_assume!(!words.is_empty());
        let h = validate_hamiltonian(n, words).unwrap();
        match solve_full(&h, &SolveOptions::default()) {
            Ok(r) => {
                let oracle = full_spectrum(&dense_matrix(&h).unwrap()).unwrap();
                let cmp = compare_multisets(&r.expanded(), &oracle, 1e-9);
                prop_assert!(cmp.equal, "{:?}", cmp);
                prop_assert_eq!(r.total_states, 1u128 << n);
                prop_assert!(r.expanded().iter().sum::<f64>().abs() < 1e-9 * (1u64 << n) as f64);
            }
            Err(Error::Obstruction(_)) => {}
            Err(e) => prop_assert!(false, "unexpected error {}", e),
        }
    }

    #[test]
    fn orientations_satisfy_cycle_constraints(
        v in 3usize..=9,
        extra in 0usize..=8,
        seed in any::<u64>(),
        bits in prop::collection::vec(any::<bool>(), 64),
    ) {
        let edges = (v - 1 + extra).min(v * (v - 1) / 2);
        let p = planted_root(v, edges, seed).unwrap();
        let m = analyze(&p.hamiltonian, K3Root::Claw).unwrap();
        for comp in &m.components {
            let x = &bits[..comp.cycles.cycles.len()];
            for tree in [TreeOrientation::LowToHigh, TreeOrientation::Seeded(seed)] {
                let o = orient(&comp.root, &comp.cycles, x, tree);
                prop_assert!(orientation_consistent(&comp.root, &comp.cycles, x, &o));
            }
        }
    }

    #[test]
    fn single_particle_energies(h in antisymmetric(9)) {
        let s = block_diagonalize(&h).unwrap();
        let n = h.nrows();
        prop_assert_eq!(s.lambdas.len(), n / 2);
        prop_assert!(s.lambdas.iter().all(|&l| l >= 0.0));
        prop_assert!(s.lambdas.windows(2).all(|w| w[0] >= w[1]));
        // tr(hᵀh) = 2Σλ²
        let frob: f64 = h.iter().map(|x| x * x).sum();
        let sq: f64 = s.lambdas.iter().map(|l| l * l).sum();
        prop_assert!((frob - 2.0 * sq).abs() < 1e-9 * (1.0 + frob));
        let energies = s.energies(None);
        prop_assert_eq!(energies.len(), 1 << (n / 2));
        prop_assert!(energies.iter().sum::<f64>().abs() < 1e-9 * energies.len() as f64);
        if n % 2 == 0 {
            // Pf² = det and |Pf| = ∏λ
            let pf = pfaffian(&h);
            prop_assert!((pf * pf - h.determinant()).abs() < 1e-8 * (1.0 + pf * pf));
            let prod: f64 = s.lambdas.iter().map(|l| l).product();
            prop_assert!((pf.abs() - prod).abs() < 1e-8 * (1.0 + prod));
        }
    }

    #[test]
    fn projectors_are_idempotent(
        zs in (1usize..=3).prop_flat_map(|n| prop::collection::vec((word(n), any::<bool>()), 0..4)),
    ) {
        let n = zs.first().map_or(1, |(w, _)| w.n());
        // keep only the Z part so the stabilizers commute
        let stabs: Vec<(SignedPauli, i8)> = zs
            .into_iter()
            .map(|(w, s)| {
                let mut z = PauliWord::identity(n);
                for q in 0..n {
                    if w.get(q) != 'I' {
                        z.set(q, 'Z');
                    }
                }
                (SignedPauli::hermitian(z), if s { -1 } else { 1 })
            })
            .collect();
        let p = projector(n, &stabs).unwrap();
        prop_assert!(max_dev(&(&p * &p), &p) < 1e-12);
        prop_assert!(max_dev(&p.adjoint(), &p) < 1e-12);
    }

    /// Recognition recovers a root whose line graph is the frustration graph
    /// and which is isomorphic to the planted hopping graph.
    #[test]
    fn line_graph_round_trip(v in 4usize..=9, extra in 0usize..=10, seed in any::<u64>()) {
        let edges = (v - 1 + extra).min(v * (v - 1) / 2);
        let p = planted_root(v, edges, seed).unwrap();
        let comps = recognize_hamiltonian(&p.hamiltonian, K3Root::Claw).unwrap();
        prop_assert_eq!(comps.len(), 1);
        let c = &comps[0];
        prop_assert!(c.root.is_simple());
        prop_assert!(c.root.line_graph().is_isomorphic(&c.graph.graph));
        let planted = fermiroot::SimpleGraph::from_edges(v, p.edges.iter().copied());
        let triangle = c.root.edges.len() == 3 && c.graph.graph.edge_count() == 3;
        prop_assert!(triangle || c.root.as_graph().is_isomorphic(&planted));
    }
}
