mod common;

use elmono::boundary::{assemble_single_layer, discretize, BoundaryDiscretization, BoundaryOperatorMatrix, ParametricBoundary, Shape};
use elmono::elastic::{green_tensor, unit_direction, ElasticMedium, Frequency, Point};
use elmono::forward::{
    add_noise, assemble_data_to_pattern, assemble_farfield_operator, farfield_coefficients, scattered_farfield,
    solve_exterior_dirichlet, DirectionSet, SingleLayerSolver,
};
use elmono::validation::{boundary_residual, catalog, kite, uniqueness_defect, INTERIOR_SOURCE};
use elmono::Error;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use common::{extracted_amplitude, richardson, vdiff, vnorm};

fn medium(omega: f64) -> ElasticMedium {
    ElasticMedium::new(2.0, 1.0, omega).unwrap()
}

fn setup(shape: Shape, n: usize, medium: &ElasticMedium) -> (BoundaryDiscretization, BoundaryOperatorMatrix) {
    let disc = discretize(&ParametricBoundary::new(shape).unwrap(), n).unwrap();
    let s = assemble_single_layer(&disc, medium, Frequency::Real).unwrap();
    (disc, s)
}

/// Nodal trace of the column `G(., z) e`.
fn point_source_trace(disc: &BoundaryDiscretization, medium: &ElasticMedium, z: Point, e: Point) -> DVector<Complex64> {
    let e = [Complex64::from(e[0]), Complex64::from(e[1])];
    disc.sample(|x| green_tensor(x, z, medium).unwrap().apply(e))
}

fn random_vector(len: usize, seed: u64) -> DVector<Complex64> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    DVector::from_fn(len, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

#[test]
fn zero_data_gives_zero_density_and_field() {
    let m = medium(1.0);
    let (disc, s) = setup(kite(), 64, &m);
    let phi = solve_exterior_dirichlet(&disc, &s, &DVector::zeros(disc.dim())).unwrap();
    assert!(phi.iter().all(|z| *z == Complex64::new(0.0, 0.0)));
    let dirs = DirectionSet::new(16).unwrap();
    let ff = scattered_farfield(&phi, &disc, &dirs, &m).unwrap();
    assert!(ff.iter().all(|(p, s)| vnorm(*p) == 0.0 && vnorm(*s) == 0.0));
}

#[test]
fn singular_and_mismatched_systems_are_reported() {
    let m = medium(1.0);
    let (disc, s) = setup(kite(), 32, &m);
    let singular = BoundaryOperatorMatrix { matrix: DMatrix::zeros(disc.dim(), disc.dim()), frequency: Frequency::Real };
    assert!(matches!(SingleLayerSolver::new(&disc, &singular), Err(Error::InteriorEigenvalue { .. })));
    let imag = assemble_single_layer(&disc, &m, Frequency::ImaginaryUnit).unwrap();
    assert!(SingleLayerSolver::new(&disc, &imag).is_err());
    let solver = SingleLayerSolver::new(&disc, &s).unwrap();
    assert!(solver.solve_vec(&DVector::zeros(disc.dim() + 2)).is_err());
}

#[test]
fn boundary_residual_for_catalog_and_frequencies() {
    for omega in [0.5, 1.0, 2.0] {
        for shape in catalog() {
            let res = boundary_residual(shape, 128, &medium(omega)).unwrap();
            assert!(res <= 1e-6, "{} at omega {omega}: {res:e}", shape.name());
        }
    }
}

#[test]
fn interior_point_source_is_reproduced_outside() {
    let targets: Vec<Point> = (0..12).map(|k| {
        let d = unit_direction(0.5 * k as f64);
        [3.0 * d[0], 3.0 * d[1]]
    }).collect();
    for shape in catalog() {
        let u = uniqueness_defect(shape, 128, &medium(1.0), INTERIOR_SOURCE, &targets).unwrap();
        assert!(u <= 1e-6, "{}: {u:e}", shape.name());
    }
}

#[test]
fn farfield_of_interior_source_matches_asymptotic_extraction() {
    let m = medium(1.0);
    let (disc, s) = setup(kite(), 128, &m);
    let dirs = DirectionSet::new(8).unwrap();
    for e in [[1.0, 0.0], [0.0, 1.0]] {
        let phi = solve_exterior_dirichlet(&disc, &s, &point_source_trace(&disc, &m, INTERIOR_SOURCE, e)).unwrap();
        let ff = scattered_farfield(&phi, &disc, &dirs, &m).unwrap();
        for (&xhat, (up, us)) in dirs.directions.iter().zip(&ff) {
            let scale = vnorm(*up).max(vnorm(*us));
            for (shear, computed) in [(false, *up), (true, *us)] {
                let a: Vec<_> = [400.0, 800.0].iter().map(|&r| extracted_amplitude(&m, INTERIOR_SOURCE, e, xhat, r, shear)).collect();
                let extracted = richardson(a[0], a[1]);
                assert!(vdiff(computed, extracted) <= 1e-4 * scale, "xhat {xhat:?} shear {shear}");
            }
        }
    }
}

#[test]
fn farfield_patterns_have_projector_structure() {
    let m = medium(1.0);
    let (disc, _) = setup(Shape::Peanut { center: [0.3, -0.2], scale: 1.2 }, 64, &m);
    let dirs = DirectionSet::new(32).unwrap();
    let phi = random_vector(disc.dim(), 3);
    let ff = scattered_farfield(&phi, &disc, &dirs, &m).unwrap();
    for (&xhat, (up, us)) in dirs.directions.iter().zip(&ff) {
        let scale = vnorm(*up).max(vnorm(*us));
        let cross = up[0] * xhat[1] - up[1] * xhat[0];
        let along = us[0] * xhat[0] + us[1] * xhat[1];
        assert!(cross.norm() <= 1e-12 * scale && along.norm() <= 1e-12 * scale);
    }
}

#[test]
fn data_to_pattern_reproduces_point_source_farfield() {
    let m = medium(1.0);
    let (disc, s) = setup(kite(), 128, &m);
    let dirs = DirectionSet::new(32).unwrap();
    let g = assemble_data_to_pattern(&disc, &s, &m, &dirs).unwrap();
    for e in [[1.0, 0.0], [0.6, 0.8]] {
        let trace = point_source_trace(&disc, &m, INTERIOR_SOURCE, e);
        let computed = &g.matrix * &trace;
        let c = [Complex64::from(e[0]), Complex64::from(e[1])];
        let exact: Vec<_> = dirs
            .directions
            .iter()
            .map(|&xhat| {
                let (kp, ks) = elmono::elastic::farfield_kernel(xhat, INTERIOR_SOURCE, &m).unwrap();
                let ap = |k: &elmono::elastic::CMat2| [k[0][0] * c[0] + k[0][1] * c[1], k[1][0] * c[0] + k[1][1] * c[1]];
                (ap(&kp), ap(&ks))
            })
            .collect();
        let exact = farfield_coefficients(&exact, &dirs);
        let rel = (&computed - &exact).camax() / exact.camax();
        assert!(rel <= 1e-5, "relative mismatch {rel:e}");
        let scaled = &g.matrix * (&trace * Complex64::new(0.3, -2.0));
        assert!((&scaled - &computed * Complex64::new(0.3, -2.0)).camax() <= 1e-13 * scaled.camax());
    }
    let sv = g.matrix.singular_values();
    println!("smallest singular value of G (kite, n = 128, m = 32): {:e}", sv.min());
    assert!(sv.min() > 0.0);
}

#[test]
fn doubling_directions_leaves_common_entries_unchanged() {
    let m = medium(1.0);
    let (disc, s) = setup(kite(), 128, &m);
    let coarse = assemble_farfield_operator(&disc, &s, &m, &DirectionSet::new(16).unwrap()).unwrap();
    let fine = assemble_farfield_operator(&disc, &s, &m, &DirectionSet::new(32).unwrap()).unwrap();
    let scale = coarse.matrix.camax();
    for bi in 0..2 {
        for bj in 0..2 {
            for i in 0..16 {
                for j in 0..16 {
                    let a = coarse.matrix[(16 * bi + i, 16 * bj + j)];
                    // quadrature weight 2 pi / m halves with m
                    let b = fine.matrix[(32 * bi + 2 * i, 32 * bj + 2 * j)] * 2.0;
                    assert!((a - b).norm() <= 1e-8 * scale);
                }
            }
        }
    }
}

#[test]
fn disk_farfield_operator_is_block_circulant() {
    let m = medium(1.0);
    let (disc, s) = setup(Shape::Circle { center: [0.0, 0.0], radius: 1.0 }, 64, &m);
    let f = assemble_farfield_operator(&disc, &s, &m, &DirectionSet::new(16).unwrap()).unwrap().matrix;
    let shift = |i: usize| (i / 16) * 16 + (i % 16 + 1) % 16;
    let scale = f.camax();
    for i in 0..32 {
        for j in 0..32 {
            assert!((f[(shift(i), shift(j))] - f[(i, j)]).norm() <= 1e-10 * scale);
        }
    }
}

#[test]
fn noise_contract() {
    let m = medium(1.0);
    let (disc, s) = setup(kite(), 64, &m);
    let f = assemble_farfield_operator(&disc, &s, &m, &DirectionSet::new(64).unwrap()).unwrap();
    assert_eq!(add_noise(&f, 0.0, 9).unwrap().matrix, f.matrix);
    assert!(add_noise(&f, 1.0, 9).is_err());
    assert!(add_noise(&f, -0.1, 9).is_err());
    let a = add_noise(&f, 0.05, 9).unwrap();
    let b = add_noise(&f, 0.05, 9).unwrap();
    assert_eq!(a.matrix, b.matrix);
    assert_ne!(add_noise(&f, 0.05, 10).unwrap().matrix, a.matrix);
    let ratio = (&a.matrix - &f.matrix).norm() / (0.05 * f.matrix.norm());
    assert!((ratio - 1.0).abs() <= 0.1, "ratio {ratio}");
    let info = a.noise.unwrap();
    assert_eq!((info.level, info.seed), (0.05, 9));
}
