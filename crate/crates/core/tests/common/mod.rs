//! Independent numerical oracles shared by the integration tests.
#![allow(dead_code)]

// Gauss-Kronrod 7/15 nodes and weights (QUADPACK).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

fn adapt(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let (v, e) = gk15(f, a, b);
    if e <= tol || depth == 0 {
        return v;
    }
    let c = 0.5 * (a + b);
    adapt(f, a, c, 0.5 * tol, depth - 1) + adapt(f, c, b, 0.5 * tol, depth - 1)
}

/// Adaptive quadrature on `[a, b]` split at the interior `breaks`.
pub fn integrate(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64, breaks: &[f64], tol: f64) -> f64 {
    let mut pts: Vec<f64> = breaks.iter().copied().filter(|&p| p > a && p < b).collect();
    pts.push(a);
    pts.push(b);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let k = (pts.len() - 1) as f64;
    pts.windows(2).map(|w| adapt(f, w[0], w[1], tol / k, 40)).sum()
}

/// Fixed composite rule: every piece between breaks is cut into equal
/// panels no wider than `width`, each integrated with Kronrod-15. Unlike
/// the adaptive rule its result varies smoothly with the endpoints, which
/// keeps nested integrals accurate.
pub fn composite(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64, breaks: &[f64], width: f64) -> f64 {
    let mut pts: Vec<f64> = breaks.iter().copied().filter(|&p| p > a && p < b).collect();
    pts.push(a);
    pts.push(b);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let mut total = 0.0;
    for w in pts.windows(2) {
        let k = ((w[1] - w[0]) / width).ceil().max(1.0) as usize;
        let h = (w[1] - w[0]) / k as f64;
        for i in 0..k {
            let lo = w[0] + i as f64 * h;
            total += gk15(f, lo, lo + h).0;
        }
    }
    total
}

/// Integral of `f` over `[-l, l]^dim`, for integrands whose only kinks sit
/// at `0` and at `±max|outer coordinates|`.
pub fn integrate_box(dim: usize, l: f64, width: f64, f: &dyn Fn(&[f64]) -> f64) -> f64 {
    integrate_box_given(&[], dim, l, width, f)
}

/// Like `integrate_box` over the trailing `dim` coordinates with the
/// leading ones held at `fixed`; `f` sees the full vector.
pub fn integrate_box_given(fixed: &[f64], dim: usize, l: f64, width: f64, f: &dyn Fn(&[f64]) -> f64) -> f64 {
    let mut x = fixed.to_vec();
    x.resize(fixed.len() + dim, 0.0);
    nested(fixed.len(), &mut x, l, width, f)
}

fn nested(level: usize, x: &mut Vec<f64>, l: f64, width: f64, f: &dyn Fn(&[f64]) -> f64) -> f64 {
    if level == x.len() {
        return f(x);
    }
    let m = x[..level].iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let breaks = [-m, 0.0, m];
    let mut g = |t: f64| {
        x[level] = t;
        let v = nested(level + 1, x, l, width, f);
        x[level] = 0.0;
        v
    };
    composite(&mut g, -l, l, &breaks, width)
}

/// Half-width beyond which `exp(-λ t)` times any polynomial prefactor we
/// meet is negligible.
pub fn tail_cut(lambda: f64) -> f64 {
    36.0 / lambda
}

/// `prox_{w‖·‖∞}(x) = x - w·P_{B1}(x / w)` with a sort-based projection.
pub fn moreau_prox(x: &[f64], w: f64) -> Vec<f64> {
    let v: Vec<f64> = x.iter().map(|a| a / w).collect();
    let l1: f64 = v.iter().map(|a| a.abs()).sum();
    let proj: Vec<f64> = if l1 <= 1.0 {
        v.clone()
    } else {
        let mut u: Vec<f64> = v.iter().map(|a| a.abs()).collect();
        u.sort_by(|a, b| b.total_cmp(a));
        let mut cum = 0.0;
        let mut theta = 0.0;
        for (k, &uk) in u.iter().enumerate() {
            cum += uk;
            let t = (cum - 1.0) / (k + 1) as f64;
            if uk - t > 0.0 {
                theta = t;
            }
        }
        v.iter().map(|a| a.signum() * (a.abs() - theta).max(0.0)).collect()
    };
    x.iter().zip(&proj).map(|(a, p)| a - w * p).collect()
}

/// Total variation `½∫|p - q|` with the fixed composite rule, for costly
/// oracles.
pub fn tv_composite(p: &dyn Fn(f64) -> f64, q: &dyn Fn(f64) -> f64, a: f64, b: f64, breaks: &[f64], width: f64) -> f64 {
    let mut g = |t: f64| (p(t) - q(t)).abs();
    0.5 * composite(&mut g, a, b, breaks, width)
}

/// Total variation `½∫|p - q|` by adaptive quadrature.
pub fn tv_distance(p: &dyn Fn(f64) -> f64, q: &dyn Fn(f64) -> f64, a: f64, b: f64, breaks: &[f64]) -> f64 {
    let mut g = |t: f64| (p(t) - q(t)).abs();
    0.5 * integrate(&mut g, a, b, breaks, 1e-10)
}

/// Deterministic xorshift for picking test instances without touching
/// the library's generators.
pub struct XorShift(pub u64);

impl XorShift {
    pub fn next_f64(&mut self) -> f64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Standard normal by Box-Muller.
    pub fn normal(&mut self) -> f64 {
        let u = self.next_f64().max(1e-300);
        let v = self.next_f64();
        (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
    }
}
