//! Fourier transforms and per-frequency channel algebra.
//!
//! Forward transforms are unnormalized with the `exp(-i 2 pi k n / M)` kernel;
//! inverse transforms carry the `1/M` factor. 2D transforms apply the 1D
//! transform along each axis.

use num_complex::Complex;
use num_traits::Zero;
use rustfft::{FftDirection, FftPlanner};

use crate::error::{Error, Result};
use crate::linalg;
use crate::padding::{PaddedSignal, ZeroFlags};
use crate::real::Real;

/// In-place unnormalized transform of one plane with the given per-axis periods.
fn transform_plane<T: Real>(
    planner: &mut FftPlanner<T>,
    buf: &mut [Complex<T>],
    periods: &[usize],
    direction: FftDirection,
) {
    match *periods {
        [m] => planner.plan_fft(m, direction).process(buf),
        [h, w] => {
            planner.plan_fft(w, direction).process(buf);
            let col_fft = planner.plan_fft(h, direction);
            let mut column = vec![Complex::zero(); h];
            for j in 0..w {
                for i in 0..h {
                    column[i] = buf[i * w + j];
                }
                col_fft.process(&mut column);
                for i in 0..h {
                    buf[i * w + j] = column[i];
                }
            }
        }
        _ => unreachable!("1 or 2 axes"),
    }
}

fn check_periods(periods: &[usize], len: usize) -> Result<()> {
    if periods.is_empty() || periods.len() > 2 {
        return Err(Error::Shape(format!("1 or 2 axes, got {}", periods.len())));
    }
    if periods.contains(&0) || periods.iter().product::<usize>() != len {
        return Err(Error::Shape(format!(
            "periods {periods:?} do not match {len} samples"
        )));
    }
    Ok(())
}

fn forward_nd<T: Real>(x: &[T], periods: &[usize]) -> Result<Vec<Complex<T>>> {
    check_periods(periods, x.len())?;
    let mut buf: Vec<Complex<T>> = x.iter().map(|&v| Complex::new(v, T::zero())).collect();
    transform_plane(
        &mut FftPlanner::new(),
        &mut buf,
        periods,
        FftDirection::Forward,
    );
    Ok(buf)
}

fn inverse_nd<T: Real>(xf: &[Complex<T>], periods: &[usize], tol: f64) -> Result<Vec<T>> {
    check_periods(periods, xf.len())?;
    let mut buf = xf.to_vec();
    transform_plane(
        &mut FftPlanner::new(),
        &mut buf,
        periods,
        FftDirection::Inverse,
    );
    take_real(&buf, tol)
}

/// Scales by `1/len` and drops the imaginary part, failing when it is not
/// negligible relative to the largest output magnitude.
fn take_real<T: Real>(buf: &[Complex<T>], tol: f64) -> Result<Vec<T>> {
    let scale = T::one() / T::from_f(buf.len() as f64);
    let mut max_im = 0.0f64;
    let mut max_abs = 0.0f64;
    for z in buf {
        max_im = max_im.max(z.im.abs().to_f());
        max_abs = max_abs.max(z.norm().to_f());
    }
    if max_im > tol * max_abs {
        return Err(Error::NotReal {
            residue: max_im / max_abs,
        });
    }
    Ok(buf.iter().map(|z| z.re * scale).collect())
}

pub fn dft_forward<T: Real>(x: &[T]) -> Vec<Complex<T>> {
    let mut buf: Vec<Complex<T>> = x.iter().map(|&v| Complex::new(v, T::zero())).collect();
    if !buf.is_empty() {
        FftPlanner::new()
            .plan_fft_forward(buf.len())
            .process(&mut buf);
    }
    buf
}

/// Inverse transform of a spectrum that should come from a real signal.
/// `tol` bounds the relative imaginary residue.
pub fn dft_inverse<T: Real>(xf: &[Complex<T>], tol: f64) -> Result<Vec<T>> {
    inverse_nd(xf, &[xf.len()], tol)
}

pub fn dft2_forward<T: Real>(x: &[T], h: usize, w: usize) -> Result<Vec<Complex<T>>> {
    forward_nd(x, &[h, w])
}

pub fn dft2_inverse<T: Real>(xf: &[Complex<T>], h: usize, w: usize, tol: f64) -> Result<Vec<T>> {
    inverse_nd(xf, &[h, w], tol)
}

/// Frequency-domain tensor: per frequency a `rows x cols` complex matrix
/// (`cols == 1` for signal spectra).
///
/// Stored block-wise: entry `(r, c)` of every frequency is the contiguous
/// block `coeffs[(r*cols + c)*F .. (r*cols + c + 1)*F]`, `F` = frequency count.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T = f64> {
    coeffs: Vec<Complex<T>>,
    periods: Vec<usize>,
    rows: usize,
    cols: usize,
}

impl<T: Real> Spectrum<T> {
    pub fn from_coeffs(
        coeffs: Vec<Complex<T>>,
        periods: Vec<usize>,
        rows: usize,
        cols: usize,
    ) -> Result<Self> {
        let f: usize = periods.iter().product();
        check_periods(&periods, f)?;
        if coeffs.len() != rows * cols * f {
            return Err(Error::Shape(format!(
                "{} coefficients for {rows}x{cols} blocks of {f} frequencies",
                coeffs.len()
            )));
        }
        Ok(Self {
            coeffs,
            periods,
            rows,
            cols,
        })
    }

    /// Transforms `rows * cols` real periods laid out block after block.
    pub fn from_real_blocks(
        data: &[T],
        rows: usize,
        cols: usize,
        periods: &[usize],
    ) -> Result<Self> {
        let f: usize = periods.iter().product();
        check_periods(periods, f)?;
        if data.len() != rows * cols * f {
            return Err(Error::Shape(format!(
                "{} samples for {rows}x{cols} blocks of {f}",
                data.len()
            )));
        }
        let mut planner = FftPlanner::new();
        let mut coeffs: Vec<Complex<T>> =
            data.iter().map(|&v| Complex::new(v, T::zero())).collect();
        for block in coeffs.chunks_exact_mut(f) {
            transform_plane(&mut planner, block, periods, FftDirection::Forward);
        }
        Ok(Self {
            coeffs,
            periods: periods.to_vec(),
            rows,
            cols,
        })
    }

    /// Spectrum of a padded multi-channel signal (one column).
    pub fn from_padded(p: &PaddedSignal<T>) -> Self {
        Self::from_real_blocks(p.data(), p.channels(), 1, p.periods())
            .expect("padded signal has consistent periods")
    }

    /// Inverse transform of every block back to real periods.
    pub fn to_real_blocks(&self, tol: f64) -> Result<Vec<T>> {
        let f = self.freq_count();
        let mut planner = FftPlanner::new();
        let mut out = Vec::with_capacity(self.coeffs.len());
        let mut buf = vec![Complex::zero(); f];
        for block in self.coeffs.chunks_exact(f) {
            buf.copy_from_slice(block);
            transform_plane(&mut planner, &mut buf, &self.periods, FftDirection::Inverse);
            out.extend(take_real(&buf, tol)?);
        }
        Ok(out)
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.coeffs
    }

    pub fn periods(&self) -> &[usize] {
        &self.periods
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn freq_count(&self) -> usize {
        self.periods.iter().product()
    }

    pub fn block(&self, r: usize, c: usize) -> &[Complex<T>] {
        let f = self.freq_count();
        let b = r * self.cols + c;
        &self.coeffs[b * f..(b + 1) * f]
    }

    pub fn get(&self, r: usize, c: usize, k: usize) -> Complex<T> {
        self.coeffs[(r * self.cols + c) * self.freq_count() + k]
    }

    /// The row-major channel matrix at flat frequency index `k`.
    pub fn matrix_at(&self, k: usize) -> Vec<Complex<T>> {
        let f = self.freq_count();
        (0..self.rows * self.cols)
            .map(|b| self.coeffs[b * f + k])
            .collect()
    }

    fn set_matrix(&mut self, k: usize, m: &[Complex<T>]) {
        let f = self.freq_count();
        for (b, &v) in m.iter().enumerate() {
            self.coeffs[b * f + k] = v;
        }
    }

    /// Per-axis frequency indices of flat index `k`.
    pub fn freq_index(&self, k: usize) -> Vec<usize> {
        match self.periods[..] {
            [_] => vec![k],
            [_, w] => vec![k / w, k % w],
            _ => unreachable!(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|z| z.norm().to_f())
            .fold(0.0, f64::max)
    }
}

/// Frequencies lying on the axis lines `k_axis in {0, M/2}` selected per axis.
/// A 2D member is any frequency on at least one selected line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencySet {
    periods: Vec<usize>,
    axes: Vec<ZeroFlags>,
}

impl FrequencySet {
    pub fn new(periods: Vec<usize>, axes: Vec<ZeroFlags>) -> Self {
        assert_eq!(periods.len(), axes.len(), "one flag set per axis");
        Self { periods, axes }
    }

    pub fn empty(periods: Vec<usize>) -> Self {
        let axes = vec![ZeroFlags::NONE; periods.len()];
        Self { periods, axes }
    }

    pub fn axes(&self) -> &[ZeroFlags] {
        &self.axes
    }

    pub fn union(&self, other: &FrequencySet) -> FrequencySet {
        assert_eq!(self.periods, other.periods);
        FrequencySet {
            periods: self.periods.clone(),
            axes: self
                .axes
                .iter()
                .zip(&other.axes)
                .map(|(a, b)| a.union(*b))
                .collect(),
        }
    }

    pub fn contains_index(&self, index: &[usize]) -> bool {
        index
            .iter()
            .zip(&self.axes)
            .zip(&self.periods)
            .any(|((&k, flags), &m)| flags.hits(k, m))
    }

    pub fn contains(&self, flat: usize) -> bool {
        match self.periods[..] {
            [_] => self.contains_index(&[flat]),
            [_, w] => self.contains_index(&[flat / w, flat % w]),
            _ => false,
        }
    }

    /// Sorted flat indices of all members.
    pub fn members(&self) -> Vec<usize> {
        let f: usize = self.periods.iter().product();
        (0..f).filter(|&k| self.contains(k)).collect()
    }
}

/// `Y(k) = W(k) X(k)` at every frequency.
pub fn spectrum_multiply<T: Real>(w: &Spectrum<T>, x: &Spectrum<T>) -> Result<Spectrum<T>> {
    if w.periods != x.periods {
        return Err(Error::Shape(format!(
            "period mismatch: {:?} vs {:?}",
            w.periods, x.periods
        )));
    }
    if w.cols != x.rows {
        return Err(Error::Shape(format!(
            "kernel has {} input channels, signal has {}",
            w.cols, x.rows
        )));
    }
    let f = w.freq_count();
    let (rows, inner, cols) = (w.rows, w.cols, x.cols);
    let mut coeffs = vec![Complex::zero(); rows * cols * f];
    for r in 0..rows {
        for c in 0..cols {
            let out = &mut coeffs[(r * cols + c) * f..(r * cols + c + 1) * f];
            for i in 0..inner {
                let wb = w.block(r, i);
                let xb = x.block(i, c);
                for k in 0..f {
                    out[k] = out[k] + wb[k] * xb[k];
                }
            }
        }
    }
    Ok(Spectrum {
        coeffs,
        periods: w.periods.clone(),
        rows,
        cols,
    })
}

/// Smallest-to-largest singular value ratio of the channel matrix at every
/// frequency (0 for an all-zero matrix).
pub fn condition_ratios<T: Real>(w: &Spectrum<T>) -> Result<Vec<f64>> {
    if w.rows != w.cols {
        return Err(Error::Shape(format!(
            "channel matrices are {}x{}, need square",
            w.rows, w.cols
        )));
    }
    Ok((0..w.freq_count())
        .map(|k| linalg::condition_ratio(&w.matrix_at(k), w.rows))
        .collect())
}

/// Element-wise matrix inverse of a kernel spectrum. Frequencies in `skip` get a
/// zero matrix; any other frequency whose condition ratio is below `tol_sing`
/// is an error.
pub fn spectrum_matrix_inverse<T: Real>(
    w: &Spectrum<T>,
    skip: &FrequencySet,
    tol_sing: f64,
) -> Result<Spectrum<T>> {
    if w.rows != w.cols {
        return Err(Error::Shape(format!(
            "element-wise inversion needs equal channels, got {}x{}",
            w.rows, w.cols
        )));
    }
    if skip.periods != w.periods {
        return Err(Error::Shape(
            "skip set periods differ from the spectrum".into(),
        ));
    }
    let n = w.rows;
    let mut out = Spectrum {
        coeffs: vec![Complex::zero(); w.coeffs.len()],
        periods: w.periods.clone(),
        rows: n,
        cols: n,
    };
    for k in 0..w.freq_count() {
        if skip.contains(k) {
            continue;
        }
        let m = w.matrix_at(k);
        let ratio = linalg::condition_ratio(&m, n);
        let singular = || Error::SingularFrequency {
            frequency: w.freq_index(k),
            ratio,
        };
        if ratio < tol_sing {
            return Err(singular());
        }
        let inv = linalg::invert(&m, n).ok_or_else(singular)?;
        out.set_matrix(k, &inv);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex<f64> {
        Complex::new(re, 0.0)
    }

    #[test]
    fn constant_and_delta() {
        let x = dft_forward(&[1.0f64, 1.0, 1.0, 1.0]);
        assert_eq!(x, vec![c(4.0), c(0.0), c(0.0), c(0.0)]);
        let d = dft_forward(&[1.0f64, 0.0, 0.0, 0.0]);
        assert_eq!(d, vec![c(1.0); 4]);
    }

    #[test]
    fn inverse_rejects_non_hermitian_spectra() {
        let xf = vec![c(0.0), Complex::new(0.0, 1.0), c(0.0), c(0.0)];
        assert!(matches!(dft_inverse(&xf, 1e-6), Err(Error::NotReal { .. })));
    }

    #[test]
    fn all_ones_2d() {
        let x = dft2_forward(&[1.0f64; 4], 2, 2).unwrap();
        assert_eq!(x[0], c(4.0));
        assert!(x[1..].iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn scalar_reciprocal_inverse() {
        let w = Spectrum::from_coeffs(vec![c(2.0); 6], vec![6], 1, 1).unwrap();
        let inv = spectrum_matrix_inverse(&w, &FrequencySet::empty(vec![6]), 1e-10).unwrap();
        assert!(inv.coeffs().iter().all(|&z| z == c(0.5)));
    }

    #[test]
    fn skipped_frequencies_become_zero() {
        let mut coeffs = vec![Complex::new(0.0, 1.5); 8];
        coeffs[0] = c(0.0);
        coeffs[4] = c(0.0);
        let w = Spectrum::from_coeffs(coeffs, vec![8], 1, 1).unwrap();
        let skip = FrequencySet::new(vec![8], vec![ZeroFlags::BOTH]);
        let inv = spectrum_matrix_inverse(&w, &skip, 1e-10).unwrap();
        assert_eq!(inv.get(0, 0, 0), c(0.0));
        assert_eq!(inv.get(0, 0, 4), c(0.0));
        assert!((inv.get(0, 0, 1) - Complex::new(0.0, -1.0 / 1.5)).norm() < 1e-15);
        // without skipping, frequency 0 is reported
        let err = spectrum_matrix_inverse(&w, &FrequencySet::empty(vec![8]), 1e-10).unwrap_err();
        assert!(matches!(err, Error::SingularFrequency { ref frequency, .. } if frequency == &[0]));
    }

    #[test]
    fn identity_multiply() {
        let periods = vec![4];
        let mut eye = vec![c(0.0); 2 * 2 * 4];
        for k in 0..4 {
            eye[k] = c(1.0);
            eye[3 * 4 + k] = c(1.0);
        }
        let w = Spectrum::from_coeffs(eye, periods.clone(), 2, 2).unwrap();
        let x =
            Spectrum::from_real_blocks(&[1.0, 2.0, 3.0, 4.0, -1.0, 0.5, 0.0, 2.0], 2, 1, &periods)
                .unwrap();
        assert_eq!(spectrum_multiply(&w, &x).unwrap(), x);
    }

    #[test]
    fn channel_mismatch() {
        let w = Spectrum::from_coeffs(vec![c(1.0); 4 * 3], vec![4], 1, 3).unwrap();
        let x = Spectrum::from_real_blocks(&[0.0f64; 8], 2, 1, &[4]).unwrap();
        assert!(matches!(spectrum_multiply(&w, &x), Err(Error::Shape(_))));
    }

    #[test]
    fn frequency_set_lines() {
        let s = FrequencySet::new(vec![4, 6], vec![ZeroFlags::DC, ZeroFlags::NYQUIST]);
        // row k1 = 0 (6 members) plus column k2 = 3 in the other 3 rows
        assert_eq!(s.members().len(), 9);
        assert!(s.contains_index(&[0, 5]));
        assert!(s.contains_index(&[2, 3]));
        assert!(!s.contains_index(&[2, 2]));
    }
}
