//! Forward/inverse discrete Fourier transform: iterative radix-2 for
//! power-of-two lengths, direct summation otherwise.

use std::f64::consts::PI;

use num_complex::Complex64;

/// `X[k] = Σ_j x[j]·e^{−2πi·jk/n}`.
pub fn fft(input: &[Complex64]) -> Vec<Complex64> {
    transform(input, -1.0)
}

/// Inverse of [`fft`], including the `1/n` factor.
pub fn ifft(input: &[Complex64]) -> Vec<Complex64> {
    let n = input.len() as f64;
    transform(input, 1.0).into_iter().map(|z| z / n).collect()
}

fn transform(input: &[Complex64], sign: f64) -> Vec<Complex64> {
    let n = input.len();
    if n <= 1 {
        return input.to_vec();
    }
    if n.is_power_of_two() {
        radix2(input, sign)
    } else {
        direct(input, sign)
    }
}

fn radix2(input: &[Complex64], sign: f64) -> Vec<Complex64> {
    let n = input.len();
    let bits = n.trailing_zeros();
    let mut a: Vec<Complex64> = (0..n)
        .map(|i| input[i.reverse_bits() >> (usize::BITS - bits)])
        .collect();
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let twiddles: Vec<Complex64> = (0..half)
            .map(|k| Complex64::from_polar(1.0, sign * 2.0 * PI * k as f64 / len as f64))
            .collect();
        for start in (0..n).step_by(len) {
            for k in 0..half {
                let u = a[start + k];
                let v = a[start + k + half] * twiddles[k];
                a[start + k] = u + v;
                a[start + k + half] = u - v;
            }
        }
        len *= 2;
    }
    a
}

fn direct(input: &[Complex64], sign: f64) -> Vec<Complex64> {
    let n = input.len();
    let roots: Vec<Complex64> = (0..n)
        .map(|m| Complex64::from_polar(1.0, sign * 2.0 * PI * m as f64 / n as f64))
        .collect();
    (0..n)
        .map(|k| {
            input
                .iter()
                .enumerate()
                .map(|(j, &x)| x * roots[(j * k) % n])
                .sum()
        })
        .collect()
}
