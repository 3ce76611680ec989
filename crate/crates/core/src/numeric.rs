//! Small numeric helpers: compensated summation and monotone interpolation.

/// Neumaier compensated summation. Long days of tiny squared increments lose
/// digits under naive accumulation; this keeps the error at one ulp of the
/// final sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.comp += (self.sum - t) + value;
        } else {
            self.comp += (value - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Monotone cubic (Fritsch–Carlson) interpolant through strictly increasing
/// knots. Slopes are limited so the interpolant preserves monotonicity of the
/// data; evaluation outside the knot range is an error handled by the caller.
#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneCubic {
    /// Build from knots with strictly increasing `xs`. Panics are avoided by
    /// the callers validating grid order; a single knot yields a constant.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Self {
        assert_eq!(xs.len(), ys.len());
        assert!(!xs.is_empty());
        let n = xs.len();
        if n == 1 {
            return Self {
                xs,
                ys,
                slopes: vec![0.0],
            };
        }
        let mut secants = Vec::with_capacity(n - 1);
        for i in 0..n - 1 {
            secants.push((ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]));
        }
        let mut slopes = vec![0.0; n];
        slopes[0] = secants[0];
        slopes[n - 1] = secants[n - 2];
        for i in 1..n - 1 {
            if secants[i - 1] * secants[i] <= 0.0 {
                slopes[i] = 0.0;
            } else {
                slopes[i] = 0.5 * (secants[i - 1] + secants[i]);
            }
        }
        // Fritsch-Carlson limiter.
        for i in 0..n - 1 {
            if secants[i] == 0.0 {
                slopes[i] = 0.0;
                slopes[i + 1] = 0.0;
                continue;
            }
            let a = slopes[i] / secants[i];
            let b = slopes[i + 1] / secants[i];
            let norm = (a * a + b * b).sqrt();
            if norm > 3.0 {
                let t = 3.0 / norm;
                slopes[i] = t * a * secants[i];
                slopes[i + 1] = t * b * secants[i];
            }
        }
        Self { xs, ys, slopes }
    }

    /// True when `x` lies inside the knot range.
    pub fn covers(&self, x: f64) -> bool {
        x >= self.xs[0] && x <= self.xs[self.xs.len() - 1]
    }

    /// Evaluate at `x`; the caller guarantees `covers(x)`.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if n == 1 {
            return self.ys[0];
        }
        let i = match self.xs.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
            Ok(i) => return self.ys[i],
            Err(i) => i.clamp(1, n - 1) - 1,
        };
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.ys[i] + h10 * h * self.slopes[i] + h01 * self.ys[i + 1]
            + h11 * h * self.slopes[i + 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_beats_naive() {
        // 1 + 1e-16 added 10^7 times: the tiny terms vanish under naive f64.
        let mut c = CompensatedSum::new();
        c.add(1.0);
        for _ in 0..10_000_000 {
            c.add(1e-16);
        }
        assert!((c.total() - (1.0 + 1e-9)).abs() < 1e-12);
    }

    #[test]
    fn monotone_cubic_interpolates_and_stays_monotone() {
        let xs: Vec<f64> = vec![0.0, 1.0, 2.0, 4.0, 8.0];
        let ys: Vec<f64> = vec![1.0, 2.0, 2.2, 2.6, 2.7];
        let c = MonotoneCubic::new(xs.clone(), ys.clone());
        for (x, y) in xs.iter().zip(&ys) {
            assert_eq!(c.eval(*x), *y);
        }
        let mut prev = f64::NEG_INFINITY;
        let mut x = 0.0;
        while x <= 8.0 {
            let v = c.eval(x);
            assert!(v >= prev - 1e-12, "not monotone at {x}");
            prev = v;
            x += 0.01;
        }
        assert!(!c.covers(8.5));
        assert!(!c.covers(-0.1));
    }
}
