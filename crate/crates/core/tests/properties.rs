use elmono::config::{GridSpec, RunConfig};
use elmono::elastic::ElasticMedium;
use elmono::forward::{ffd, FarFieldOperatorMatrix, NoiseInfo};
use elmono::probe::count_above;
use elmono::reconstruct::{indicator_csv, parse_indicator_csv, Calibration, Cell, Classification, IndicatorGrid, Source};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![-1e3..1e3f64, (-300i32..300).prop_map(|e| 10f64.powi(e)), Just(0.0), Just(-0.0)]
}

fn farfield() -> impl Strategy<Value = FarFieldOperatorMatrix> {
    (prop_oneof![Just(2usize), Just(4)], prop::option::of((0.0..0.9f64, any::<u64>())), 0.1..5.0f64, 0.1..5.0f64, 0.1..5.0f64)
        .prop_flat_map(|(m, noise, lambda, mu, omega)| {
            prop::collection::vec((finite(), finite()), 4 * m * m).prop_map(move |entries| {
                let matrix = DMatrix::from_row_iterator(2 * m, 2 * m, entries.into_iter().map(|(re, im)| Complex64::new(re, im)));
                let medium = ElasticMedium::new(lambda, mu, omega).unwrap();
                FarFieldOperatorMatrix::new(matrix, medium, noise.map(|(level, seed)| NoiseInfo { level, seed })).unwrap()
            })
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ffd_roundtrip_is_bit_exact(f in farfield()) {
        let text = ffd::to_string(&f);
        let back = ffd::parse(&text).unwrap();
        prop_assert_eq!(back.m, f.m);
        prop_assert_eq!(back.medium, f.medium);
        prop_assert_eq!(back.noise, f.noise);
        for (a, b) in back.matrix.iter().zip(f.matrix.iter()) {
            prop_assert_eq!(a.re.to_bits(), b.re.to_bits());
            prop_assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
        prop_assert_eq!(ffd::to_string(&back), text);
    }

    #[test]
    fn ffd_rejects_truncated_rows(f in farfield(), cut in 1usize..8) {
        let text = ffd::to_string(&f);
        let mut lines: Vec<&str> = text.lines().collect();
        let last = lines.pop().unwrap();
        let fields: Vec<&str> = last.split_whitespace().collect();
        let keep = fields.len().saturating_sub(cut).max(1);
        let shortened = fields[..keep].join(" ");
        lines.push(&shortened);
        prop_assert!(ffd::parse(&lines.join("\n")).is_err());
    }

    #[test]
    fn count_above_is_monotone_in_delta(mut eigs in prop::collection::vec(-10.0..10.0f64, 0..40), a in 1e-6..5.0f64, b in 1e-6..5.0f64) {
        eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let c_lo = count_above(&eigs, lo).unwrap();
        let c_hi = count_above(&eigs, hi).unwrap();
        prop_assert!(c_hi.count_above <= c_lo.count_above);
        prop_assert_eq!(c_lo.count_above, eigs.iter().filter(|&&l| l > lo).count());
    }

    #[test]
    fn grid_forms_parse_identically(
        xmin in -5.0..0.0f64, w in 0.1..5.0f64, ymin in -5.0..0.0f64, h in 0.1..5.0f64, nx in 2usize..60, ny in 2usize..60,
    ) {
        let base = "lambda = 2\nmu = 1\nomega = 1\nscatterer = ellipse # trailing\nscatterer.a = 1.5\nscatterer.b = 1\n";
        let (xmax, ymax) = (xmin + w, ymin + h);
        let a = RunConfig::parse(&format!("{base}grid = {xmin},{xmax},{ymin},{ymax},{nx},{ny}\n")).unwrap();
        let b = RunConfig::parse(&format!(
            "# header\n{base}grid.xmin = {xmin}\ngrid.xmax = {xmax}\ngrid.ymin = {ymin}\ngrid.ymax = {ymax}\ngrid.nx = {nx}\ngrid.ny = {ny}\n"
        )).unwrap();
        prop_assert_eq!(&a, &b);
        let g = a.grid;
        prop_assert_eq!(g.point(0, 0), [xmin, ymin]);
        prop_assert_eq!(g.point(nx - 1, ny - 1), [xmax, ymax]);
        let both = format!("{base}grid = {xmin},{xmax},{ymin},{ymax},{nx},{ny}\ngrid.nx = {nx}\n");
        prop_assert!(RunConfig::parse(&both).is_err());
    }

    #[test]
    fn csv_roundtrip_preserves_cells(nx in 2usize..6, ny in 2usize..6, r_max in 0usize..6, counts in prop::collection::vec(prop::option::of(0usize..10), 36)) {
        let grid = GridSpec::new(-1.0, 1.0, -0.5, 0.5, nx, ny).unwrap();
        let mut cells = Vec::new();
        for iy in 0..ny {
            for ix in 0..nx {
                let count = counts[iy * nx + ix];
                let class = match count {
                    None => Classification::Failed,
                    Some(c) if c <= r_max => Classification::Inside,
                    Some(_) => Classification::Outside,
                };
                cells.push(Cell { center: grid.point(ix, iy), count, class });
            }
        }
        let calibration = Calibration { delta: 1e-3, r_max, delta_source: Source::Explicit, r_max_source: Source::Explicit, reference_count: None };
        let ind = IndicatorGrid { grid, test_radius: 0.3, cells, calibration };
        let rows = parse_indicator_csv(&indicator_csv(&ind)).unwrap();
        prop_assert_eq!(rows.len(), nx * ny);
        for (row, cell) in rows.iter().zip(&ind.cells) {
            prop_assert_eq!([row.x, row.y], cell.center);
            prop_assert_eq!(row.count, cell.count.map_or(-1, |c| c as i64));
            prop_assert_eq!(row.inside, cell.class == Classification::Inside);
        }
    }
}
