use bmz::bcs::{build_bcs_matrix, defective_example, random_antisymmetric, random_unitary, uv_amplitudes, BcsSpec};
use bmz::canonical::{canonical_pair_form, classic_bloch_messiah, verify_canonical, Convention, Tolerances};
use bmz::fock::{apply_annihilation, apply_creation, expand_condensate, fock_overlap, FockVector};
use bmz::gcm::{overlap, transition_density};
use bmz::io::MatrixFile;
use bmz::jordan::{jordan_decompose, JordanBlock, UpperToeplitz, DEFAULT_CLUSTER_TOL};
use bmz::linalg::{eigenvalues, inverse, multiply, svd_rank, AntisymmetricMatrix, ComplexMatrix, DEFAULT_RANK_TOL};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_matrix(r: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))
    })
}

fn antisym_pair(seed: u64, dim: usize) -> (AntisymmetricMatrix, AntisymmetricMatrix) {
    let mut r = rng(seed);
    (random_antisymmetric(&mut r, dim), random_antisymmetric(&mut r, dim))
}

// Greedy matching of two eigenvalue lists; returns the largest distance.
fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for x in a {
        let (k, d) = b
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, y)| (k, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        used[k] = true;
        worst = worst.max(d);
    }
    worst
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn multiply_is_associative(seed in any::<u64>(), n in 1usize..6) {
        let mut r = rng(seed);
        let (a, b, c) = (random_matrix(&mut r, n, n + 1), random_matrix(&mut r, n + 1, n), random_matrix(&mut r, n, 2));
        let left = multiply(&multiply(&a, &b).unwrap(), &c).unwrap();
        let right = multiply(&a, &multiply(&b, &c).unwrap()).unwrap();
        prop_assert!(left.max_abs_diff(&right) < 1e-13);
    }

    #[test]
    fn inverse_is_involutive(seed in any::<u64>(), n in 1usize..7) {
        let mut r = rng(seed);
        let a = random_matrix(&mut r, n, n).shift_diagonal(Complex64::new(3.0, 0.0));
        let back = inverse(&inverse(&a, 1e-12).unwrap(), 1e-12).unwrap();
        prop_assert!(back.max_abs_diff(&a) < 1e-12);
    }

    #[test]
    fn transpose_keeps_spectrum(seed in any::<u64>(), n in 1usize..7) {
        let mut r = rng(seed);
        let a = random_matrix(&mut r, n, n);
        let d = multiset_distance(&eigenvalues(&a).unwrap(), &eigenvalues(&a.transpose()).unwrap());
        prop_assert!(d < 1e-9, "{d}");
    }

    #[test]
    fn rank_is_bounded(seed in any::<u64>(), n in 1usize..6, k in 0usize..6) {
        let mut r = rng(seed);
        let k = k.min(n);
        let a = &random_matrix(&mut r, n, k) * &random_matrix(&mut r, k, n);
        let (rank, sv) = svd_rank(&a, 1e-10);
        prop_assert!(rank <= k);
        prop_assert!(sv.windows(2).all(|w| w[0] >= w[1]) && sv.iter().all(|&s| s >= 0.0));
    }

    #[test]
    fn antisymmetric_constructor(seed in any::<u64>(), n in 2usize..7) {
        let mut r = rng(seed);
        let x = random_matrix(&mut r, n, n);
        prop_assert!(AntisymmetricMatrix::new(&x - &x.transpose(), 1e-12).is_ok());
        prop_assert!(AntisymmetricMatrix::new(&x + &x.transpose(), 1e-12).is_err());
    }

    #[test]
    fn matrix_file_round_trip(seed in any::<u64>(), n in 0usize..6) {
        let mut r = rng(seed);
        let m = ComplexMatrix::from_fn(n, n, |_, _| {
            Complex64::new(r.gen_range(-1e3..1e3) * 10f64.powi(r.gen_range(-20..20)), r.gen_range(-1.0..1.0))
        });
        let text = MatrixFile::from_matrix(&m, Some("m")).render();
        prop_assert_eq!(MatrixFile::parse(&text, "mem").unwrap().to_matrix().unwrap(), m);
    }

    #[test]
    fn uv_normalized(c in 0.0f64..1e6) {
        let (u, v) = uv_amplitudes(c);
        prop_assert!((u * u + v * v - 1.0).abs() < 1e-15);
        prop_assert!(u >= 0.0 && v >= 0.0);
    }

    #[test]
    fn fock_anticommutation(seed in any::<u64>(), i in 0usize..4, j in 0usize..4) {
        let mut r = rng(seed);
        let amps: Vec<Complex64> = (0..16).map(|_| Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))).collect();
        let v = FockVector::from_amplitudes(4, amps).unwrap();
        let ab = apply_annihilation(&apply_creation(&v, j).unwrap(), i).unwrap();
        let ba = apply_creation(&apply_annihilation(&v, i).unwrap(), j).unwrap();
        for mask in 0..16 {
            let sum = ab.amplitude(mask) + ba.amplitude(mask);
            let want = if i == j { v.amplitude(mask) } else { Complex64::new(0.0, 0.0) };
            prop_assert!((sum - want).norm() < 1e-14);
        }
        // Creation operators anticommute among themselves.
        let cc = apply_creation(&apply_creation(&v, i).unwrap(), j).unwrap();
        let cc2 = apply_creation(&apply_creation(&v, j).unwrap(), i).unwrap();
        for mask in 0..16 {
            prop_assert!((cc.amplitude(mask) + cc2.amplitude(mask)).norm() < 1e-14);
        }
    }

    #[test]
    fn condensates_have_even_parity(seed in any::<u64>(), n in 2usize..7) {
        let c = random_antisymmetric(&mut rng(seed), n);
        let v = expand_condensate(&c).unwrap();
        prop_assert_eq!(v.amplitude(0), Complex64::new(1.0, 0.0));
        for mask in 0..1usize << n {
            if mask.count_ones() % 2 == 1 {
                prop_assert_eq!(v.amplitude(mask), Complex64::new(0.0, 0.0));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // Rank drops of (M - lambda)^k shrink with k and recover the planted
    // block lengths.
    #[test]
    fn planted_jordan_structure(seed in any::<u64>(), lengths in prop::collection::vec(1usize..4, 1..4)) {
        let mut r = rng(seed);
        let mut blocks = Vec::new();
        let mut start = 0;
        for (id, &length) in lengths.iter().enumerate() {
            let eigenvalue = Complex64::new(id as f64 + 1.0, 0.5 * id as f64);
            blocks.push(JordanBlock { id, eigenvalue, length, start });
            start += length;
        }
        let n = start;
        let mut j = ComplexMatrix::zeros(n, n);
        for b in &blocks {
            j.set_block(b.start, b.start, &UpperToeplitz::jordan_block(b.length, b.eigenvalue).to_matrix());
        }
        let u = random_unitary(&mut r, n);
        let m = &(&u * &j) * &u.adjoint();
        for b in &blocks {
            let shifted = m.shift_diagonal(-b.eigenvalue);
            let mut prev_null = 0;
            let mut prev_gain = usize::MAX;
            for k in 1..=n {
                let null = svd_rank(&shifted.powi(k), 1e-9).1.iter().filter(|&&s| s <= 1e-9).count();
                let gain = null - prev_null;
                prop_assert!(gain <= prev_gain, "Weyr characteristic increased");
                prev_gain = gain;
                prev_null = null;
            }
            prop_assert_eq!(prev_null, b.length);
        }
        let d = jordan_decompose(&m, DEFAULT_CLUSTER_TOL, DEFAULT_RANK_TOL).unwrap();
        let mut got: Vec<usize> = d.blocks.iter().map(|b| b.length).collect();
        let mut want = lengths.clone();
        got.sort_unstable();
        want.sort_unstable();
        prop_assert_eq!(got, want);
        prop_assert!(d.residual < 1e-9, "{}", d.residual);
    }

    #[test]
    fn series_transform_preserves_chains(seed in any::<u64>(), a0 in 0.2f64..3.0, a1 in -2.0f64..2.0, a2 in -2.0f64..2.0) {
        let (c, cp) = defective_example(Complex64::new(0.5, 0.0));
        let m = c.adjoint_product(&cp).unwrap();
        let mut d = jordan_decompose(&m, DEFAULT_CLUSTER_TOL, DEFAULT_RANK_TOL).unwrap();
        let phase = Complex64::from_polar(1.0, (seed % 628) as f64 / 100.0);
        let alpha = UpperToeplitz::new(vec![phase * a0, Complex64::new(a1, a2)]);
        let before = d.jordan_matrix();
        d.transform_series(0, &alpha).unwrap();
        prop_assert!(d.residual < 1e-12 * (1.0 + a0 + a1.abs() + a2.abs()));
        prop_assert_eq!(d.jordan_matrix(), before);
    }

    #[test]
    fn spectrum_of_product_is_paired(seed in any::<u64>(), half in 1usize..5) {
        let (c, cp) = antisym_pair(seed, 2 * half);
        let form = canonical_pair_form(&c, &cp, Convention::BetaEqD, &Tolerances::default()).unwrap();
        prop_assert_eq!(form.pairs.len(), half);
        for p in &form.pairs {
            let (a, b) = (&form.blocks[p.block], &form.blocks[p.partner]);
            prop_assert_eq!(a.length, b.length);
            prop_assert!((a.eigenvalue - b.eigenvalue).norm() < 1e-7);
        }
    }

    #[test]
    fn overlap_is_hermitian(seed in any::<u64>(), n in 2usize..7) {
        let (c, cp) = antisym_pair(seed, n);
        let forward = overlap(&c, &cp).unwrap().value;
        let backward = overlap(&cp, &c).unwrap().value;
        prop_assert!((forward - backward.conj()).norm() < 1e-9 * (1.0 + forward.norm()));
    }

    #[test]
    fn overlap_matches_fock_oracle(seed in any::<u64>(), n in 2usize..8) {
        let (c, cp) = antisym_pair(seed, n);
        let value = overlap(&c, &cp).unwrap().value;
        let exact = fock_overlap(&expand_condensate(&cp).unwrap(), &expand_condensate(&c).unwrap()).unwrap();
        prop_assert!((value - exact).norm() < 1e-9 * (1.0 + exact.norm()));
    }

    #[test]
    fn conventions_agree_on_invariants(seed in any::<u64>(), half in 1usize..4) {
        let (c, cp) = antisym_pair(seed, 2 * half);
        let tols = Tolerances::default();
        let a = canonical_pair_form(&c, &cp, Convention::BetaEqD, &tols).unwrap();
        let b = canonical_pair_form(&c, &cp, Convention::SqrtD, &tols).unwrap();
        let key = |f: &bmz::canonical::PairedCanonicalForm| {
            let mut v: Vec<(usize, Complex64)> = f.pairs.iter().map(|p| (p.length, p.eigenvalue)).collect();
            v.sort_by(|x, y| x.1.re.total_cmp(&y.1.re).then(x.1.im.total_cmp(&y.1.im)));
            v
        };
        for ((la, da), (lb, db)) in key(&a).into_iter().zip(key(&b)) {
            prop_assert_eq!(la, lb);
            prop_assert!((da - db).norm() < 1e-9);
        }
        for f in [&a, &b] {
            let r = verify_canonical(&c, &cp, f).unwrap();
            prop_assert!(r.failing_invariant(1e-8).is_none(), "{:?}", r);
        }
    }

    #[test]
    fn density_trace_identity(seed in any::<u64>(), half in 1usize..5) {
        let (c, cp) = antisym_pair(seed, 2 * half);
        let ov = overlap(&c, &cp).unwrap();
        let rho = transition_density(&c, &cp).unwrap();
        prop_assert!((rho.trace() - ov.block_trace()).norm() < 1e-8 * (1.0 + rho.trace().norm()));
    }

    #[test]
    fn bcs_rotation_preserves_overlap_with_vacuum(seed in any::<u64>(), cs in prop::collection::vec(0.0f64..2.0, 1..4)) {
        let spec = BcsSpec::with_phase(&cs, Complex64::new(1.0, 0.0)).unwrap();
        let u = random_unitary(&mut rng(seed), spec.modes());
        let c = build_bcs_matrix(&spec, Some(&u)).unwrap();
        let ov = overlap(&c, &c).unwrap().value;
        let want: f64 = cs.iter().map(|x| 1.0 + x * x).product();
        prop_assert!((ov - want).norm() < 1e-9 * want);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn self_pair_matches_classic_form(seed in any::<u64>(), half in 1usize..5) {
        let c = random_antisymmetric(&mut rng(seed), 2 * half);
        let classic = classic_bloch_messiah(&c, 1e-10).unwrap();
        for convention in [Convention::BetaEqD, Convention::SqrtD] {
            let form = canonical_pair_form(&c, &c, convention, &Tolerances::default()).unwrap();
            let mut products: Vec<f64> = form.pairs.iter().map(|p| (p.c_value() * p.cp_value()).norm()).collect();
            products.sort_by(|a, b| b.total_cmp(a));
            prop_assert_eq!(products.len(), classic.c.len());
            for (got, c) in products.iter().zip(&classic.c) {
                prop_assert!((got - c * c).abs() < 1e-8, "{} vs {}", got, c * c);
            }
        }
    }
}

// The overlap follows a continuous path as a moves around a circle: no
// branch jumps between neighbouring samples.
#[test]
fn overlap_phase_is_continuous() {
    let steps = 400;
    let mut prev: Option<Complex64> = None;
    for k in 0..=steps {
        let theta = std::f64::consts::TAU * k as f64 / steps as f64;
        let a = Complex64::from_polar(0.7, theta);
        let (c, cp) = defective_example(a);
        let value = overlap(&c, &cp).unwrap().value;
        let exact = fock_overlap(&expand_condensate(&cp).unwrap(), &expand_condensate(&c).unwrap()).unwrap();
        assert!((value - exact).norm() < 1e-7, "theta {theta}: {value} vs {exact}");
        if let Some(p) = prev {
            assert!((value - p).norm() < 0.1, "jump at theta {theta}: {p} -> {value}");
        }
        prev = Some(value);
    }
}
