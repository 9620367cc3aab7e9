use iconv_core::oracle::{naive_circular_conv, naive_dft, naive_dft2};
use iconv_core::spectral::{
    dft2_forward, dft2_inverse, dft_forward, dft_inverse, spectrum_matrix_inverse,
    spectrum_multiply,
};
use iconv_core::{FrequencySet, Spectrum};
use num_complex::Complex;
use proptest::prelude::*;

fn signal(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    (1..=max_len).prop_flat_map(|n| prop::collection::vec(-1.0f64..1.0, n))
}

fn max_diff(a: &[Complex<f64>], b: &[Complex<f64>]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(p, q)| (p - q).norm())
        .fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn fast_transform_matches_the_sum(x in signal(64)) {
        prop_assert!(max_diff(&dft_forward(&x), &naive_dft(&x)) <= 1e-9);
    }

    #[test]
    fn roundtrip(x in signal(64)) {
        let back = dft_inverse(&dft_forward(&x), 1e-9).unwrap();
        let err = x.iter().zip(&back).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(err <= 1e-12);
    }

    #[test]
    fn parseval(x in signal(64)) {
        let energy: f64 = x.iter().map(|v| v * v).sum();
        let spectral: f64 = dft_forward(&x).iter().map(|z| z.norm_sqr()).sum();
        prop_assert!((spectral - x.len() as f64 * energy).abs() <= 1e-10 * (1.0 + spectral));
    }

    #[test]
    fn conjugate_symmetry(x in signal(64)) {
        let xf = dft_forward(&x);
        let m = x.len();
        for k in 0..m {
            prop_assert!((xf[(m - k) % m] - xf[k].conj()).norm() <= 1e-12 * (1.0 + m as f64));
        }
    }

    #[test]
    fn single_precision_tracks_double(x in signal(32)) {
        let single: Vec<f32> = x.iter().map(|&v| v as f32).collect();
        let a = dft_forward(&single);
        let b = dft_forward(&x);
        for (p, q) in a.iter().zip(&b) {
            prop_assert!((Complex::new(p.re as f64, p.im as f64) - q).norm() <= 1e-4);
        }
    }

    #[test]
    fn plane_transform_matches_the_sum(
        (h, w, x) in (1usize..9, 1usize..9)
            .prop_flat_map(|(h, w)| (Just(h), Just(w), prop::collection::vec(-1.0f64..1.0, h * w))),
    ) {
        let fast = dft2_forward(&x, h, w).unwrap();
        prop_assert!(max_diff(&fast, &naive_dft2(&x, h, w)) <= 1e-9);
        let back = dft2_inverse(&fast, h, w, 1e-9).unwrap();
        prop_assert!(x.iter().zip(&back).all(|(a, b)| (a - b).abs() <= 1e-12));
    }

    #[test]
    fn multiplication_is_circular_convolution(
        (m, c_in, c_out, x, w) in (1usize..17, 1usize..4, 1usize..4).prop_flat_map(|(m, ci, co)| (
            Just(m),
            Just(ci),
            Just(co),
            prop::collection::vec(-1.0f64..1.0, ci * m),
            prop::collection::vec(-1.0f64..1.0, co * ci * m),
        )),
    ) {
        let xs = Spectrum::from_real_blocks(&x, c_in, 1, &[m]).unwrap();
        let ws = Spectrum::from_real_blocks(&w, c_out, c_in, &[m]).unwrap();
        let y = spectrum_multiply(&ws, &xs).unwrap().to_real_blocks(1e-9).unwrap();
        let reference = naive_circular_conv(&x, c_in, &w, c_out, &[m]).unwrap();
        prop_assert!(y.iter().zip(&reference).all(|(a, b)| (a - b).abs() <= 1e-10));
    }

    #[test]
    fn element_inverse_undoes_multiplication(
        (m, c, w, x) in (2usize..12, 1usize..4).prop_flat_map(|(m, c)| (
            Just(2 * m),
            Just(c),
            prop::collection::vec(-0.2f64..0.2, c * c * 2 * m),
            prop::collection::vec(-1.0f64..1.0, c * 2 * m),
        )),
    ) {
        // strong delta on the diagonal keeps every frequency well conditioned
        let mut w = w;
        for i in 0..c {
            w[(i * c + i) * m] += 1.0 + 0.2 * (c * m) as f64;
        }
        let ws = Spectrum::from_real_blocks(&w, c, c, &[m]).unwrap();
        let xs = Spectrum::from_real_blocks(&x, c, 1, &[m]).unwrap();
        let inv = spectrum_matrix_inverse(&ws, &FrequencySet::empty(vec![m]), 1e-10).unwrap();
        let back = spectrum_multiply(&inv, &spectrum_multiply(&ws, &xs).unwrap())
            .unwrap()
            .to_real_blocks(1e-9)
            .unwrap();
        prop_assert!(x.iter().zip(&back).all(|(a, b)| (a - b).abs() <= 1e-10));
    }
}
