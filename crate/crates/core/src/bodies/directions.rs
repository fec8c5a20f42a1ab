//! Deterministic direction sets for sampled support-function checks.

use crate::linalg::real;
use crate::num;
use crate::rng::SeededRng;
use alloc::vec::Vec;
use core::f64::consts::PI;

const GOLDEN: f64 = 0.618_033_988_749_894_9;
const PRIMES: [u32; 24] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89];

/// Unit directions in `ℝ^dim`: `±e_i` followed by `count` low-discrepancy
/// directions (evenly spaced angles in 2-D, a Fibonacci sphere in 3-D,
/// a Halton set pushed through Box-Muller above). The seed shifts the set.
pub fn directions(dim: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(2 * dim + count);
    for i in 0..dim {
        out.push(real::unit(dim, i));
        out.push(real::scale(&real::unit(dim, i), -1.0));
    }
    if dim <= 1 {
        return out;
    }
    let offset = SeededRng::new(seed).uniform();
    match dim {
        2 => {
            for k in 0..count {
                let t = 2.0 * PI * (k as f64 + offset) / count as f64;
                out.push(alloc::vec![num::cos(t), num::sin(t)]);
            }
        }
        3 => {
            for k in 0..count {
                let z = 1.0 - 2.0 * (k as f64 + 0.5) / count as f64;
                let r = num::sqrt((1.0 - z * z).max(0.0));
                let phi = 2.0 * PI * ((k as f64 * GOLDEN + offset) % 1.0);
                out.push(alloc::vec![r * num::cos(phi), r * num::sin(phi), z]);
            }
        }
        _ => {
            let mut k = 1 + (offset * 1000.0) as usize;
            while out.len() < 2 * dim + count {
                let u: Vec<f64> = (0..dim.next_multiple_of(2))
                    .map(|i| halton(k, PRIMES[i % PRIMES.len()]).clamp(1e-12, 1.0 - 1e-12))
                    .collect();
                let mut g = Vec::with_capacity(dim);
                for pair in u.chunks(2) {
                    let rad = num::sqrt(-2.0 * num::ln(pair[0]));
                    g.push(rad * num::cos(2.0 * PI * pair[1]));
                    g.push(rad * num::sin(2.0 * PI * pair[1]));
                }
                g.truncate(dim);
                let n = real::norm(&g);
                if n > 1e-9 {
                    out.push(real::scale(&g, 1.0 / n));
                }
                k += 1;
            }
        }
    }
    out
}

fn halton(mut index: usize, base: u32) -> f64 {
    let b = base as usize;
    let mut f = 1.0;
    let mut r = 0.0;
    while index > 0 {
        f /= base as f64;
        r += f * (index % b) as f64;
        index /= b;
    }
    r
}
