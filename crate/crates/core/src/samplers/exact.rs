use crate::democratic::DemocraticParams;
use rand::Rng;

use super::primitives::sample_gamma;

/// One exact draw from the democratic distribution: pick the dominant index
/// uniformly, draw its value from `dG(N, λ)`, then fill the remaining
/// coordinates uniformly on `(-|x_dom|, |x_dom|)`.
pub fn sample_exact<R: Rng + ?Sized>(params: &DemocraticParams, rng: &mut R) -> Vec<f64> {
    let n = params.dim();
    let dom = rng.random_range(0..n);
    let mag = sample_gamma(n as f64, params.rate(), rng);
    let mut x = Vec::with_capacity(n);
    for j in 0..n {
        if j == dom {
            x.push(if rng.random::<bool>() { mag } else { -mag });
        } else {
            x.push(mag * (2.0 * rng.random::<f64>() - 1.0));
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::democratic::linf_norm;
    use crate::rng::RngStream;

    #[test]
    fn dominant_bounds_others() {
        let p = DemocraticParams::new(7, 2.0).unwrap();
        let mut rng = RngStream::new(1, 0);
        for _ in 0..1000 {
            let x = sample_exact(&p, &mut rng);
            let m = linf_norm(&x);
            assert_eq!(x.iter().filter(|v| v.abs() == m).count(), 1);
        }
    }
}
