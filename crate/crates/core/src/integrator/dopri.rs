//! Dormand–Prince 5(4) stepper with FSAL and 4th-order continuous extension.

// Butcher tableau
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// 5th minus embedded 4th order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

// dense output
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// Right-hand side of a first-order system `y' = f(t, y)`.
pub(crate) trait OdeSystem {
    fn dim(&self) -> usize;
    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]);
}

/// Work buffers and the most recent step's interpolation data.
pub(crate) struct Stepper {
    k: [Vec<f64>; 7],
    ytmp: Vec<f64>,
    pub y_new: Vec<f64>,
    /// Kahan compensation carried with the accepted state.
    comp: Vec<f64>,
    comp_new: Vec<f64>,
    err: Vec<f64>,
    cont: [Vec<f64>; 5],
    pub t_old: f64,
    pub h_used: f64,
}

impl Stepper {
    pub fn new(dim: usize) -> Self {
        let z = || vec![0.0; dim];
        Self {
            k: [z(), z(), z(), z(), z(), z(), z()],
            ytmp: z(),
            y_new: z(),
            comp: z(),
            comp_new: z(),
            err: z(),
            cont: [z(), z(), z(), z(), z()],
            t_old: 0.0,
            h_used: 0.0,
        }
    }

    /// Derivative at the start of the next step (FSAL slot).
    pub fn k1_mut(&mut self) -> &mut [f64] {
        &mut self.k[0]
    }

    /// Attempts one step from `(t, y)` with size `h`, writing the candidate to
    /// `y_new`. Returns the scaled RMS error norm (NaN if the state blew up).
    pub fn attempt<S: OdeSystem>(
        &mut self,
        sys: &S,
        t: f64,
        y: &[f64],
        h: f64,
        rel_tol: f64,
        abs_tol: f64,
    ) -> f64 {
        let dim = y.len();
        let [k1, k2, k3, k4, k5, k6, k7] = &mut self.k;
        let ytmp = &mut self.ytmp;

        for i in 0..dim {
            ytmp[i] = y[i] + h * A21 * k1[i];
        }
        sys.rhs(t + C2 * h, ytmp, k2);
        for i in 0..dim {
            ytmp[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        }
        sys.rhs(t + C3 * h, ytmp, k3);
        for i in 0..dim {
            ytmp[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        sys.rhs(t + C4 * h, ytmp, k4);
        for i in 0..dim {
            ytmp[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        sys.rhs(t + C5 * h, ytmp, k5);
        for i in 0..dim {
            ytmp[i] = y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        let t_end = t + h;
        sys.rhs(t_end, ytmp, k6);
        for i in 0..dim {
            let incr = h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i])
                + self.comp[i];
            let next = y[i] + incr;
            self.comp_new[i] = incr - (next - y[i]);
            self.y_new[i] = next;
        }
        sys.rhs(t_end, &self.y_new, k7);

        let mut sum = 0.0;
        for i in 0..dim {
            self.err[i] =
                h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let scale = abs_tol + rel_tol * y[i].abs().max(self.y_new[i].abs());
            let r = self.err[i] / scale;
            sum += r * r;
        }
        if self.y_new.iter().any(|v| !v.is_finite()) || k7.iter().any(|v| !v.is_finite()) {
            return f64::NAN;
        }
        (sum / dim as f64).sqrt()
    }

    /// Records interpolation data for an accepted step and moves the FSAL
    /// derivative into the first stage slot.
    pub fn accept(&mut self, t: f64, y: &[f64], h: f64) {
        let dim = y.len();
        let [k1, _, k3, k4, k5, k6, k7] = &self.k;
        let [r1, r2, r3, r4, r5] = &mut self.cont;
        for i in 0..dim {
            let ydiff = self.y_new[i] - y[i];
            let bspl = h * k1[i] - ydiff;
            r1[i] = y[i];
            r2[i] = ydiff;
            r3[i] = bspl;
            r4[i] = ydiff - h * k7[i] - bspl;
            r5[i] = h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
        }
        self.t_old = t;
        self.h_used = h;
        std::mem::swap(&mut self.comp, &mut self.comp_new);
        let (first, rest) = self.k.split_at_mut(1);
        first[0].copy_from_slice(&rest[5]);
    }

    /// Evaluates the continuous extension of the last accepted step at `t`.
    pub fn interpolate(&self, t: f64, out: &mut [f64]) {
        let s = (t - self.t_old) / self.h_used;
        let s1 = 1.0 - s;
        let [r1, r2, r3, r4, r5] = &self.cont;
        for i in 0..out.len() {
            out[i] = r1[i] + s * (r2[i] + s1 * (r3[i] + s * (r4[i] + s1 * r5[i])));
        }
    }
}

/// Initial step-size heuristic (Hairer, Nørsett & Wanner, II.4).
pub(crate) fn initial_step<S: OdeSystem>(
    sys: &S,
    t: f64,
    y: &[f64],
    f0: &[f64],
    span: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> f64 {
    let dim = y.len();
    let scale: Vec<f64> = y.iter().map(|v| abs_tol + rel_tol * v.abs()).collect();
    let rms = |v: &[f64]| (v.iter().zip(&scale).map(|(a, s)| (a / s).powi(2)).sum::<f64>() / dim as f64).sqrt();
    let d0 = rms(y);
    let d1 = rms(f0);
    let mut h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h0 = h0.min(span);
    let y1: Vec<f64> = y.iter().zip(f0).map(|(a, b)| a + h0 * b).collect();
    let mut f1 = vec![0.0; dim];
    sys.rhs(t + h0, &y1, &mut f1);
    let diff: Vec<f64> = f1.iter().zip(f0).map(|(a, b)| a - b).collect();
    let d2 = rms(&diff) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(1.0 / 5.0)
    };
    let h = (100.0 * h0).min(h1).min(span);
    if h.is_finite() && h > 0.0 {
        h
    } else {
        1e-6 * span
    }
}
