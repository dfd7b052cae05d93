//! Explicit Runge–Kutta integrators on fixed-size states.

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

/// One classical fourth-order Runge–Kutta step.
pub fn rk4_step<const N: usize, F>(rhs: &mut F, t: f64, y: &[f64; N], h: f64) -> [f64; N]
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    let k1 = rhs(t, y);
    let k2 = rhs(t + 0.5 * h, &axpy(y, 0.5 * h, &k1));
    let k3 = rhs(t + 0.5 * h, &axpy(y, 0.5 * h, &k2));
    let k4 = rhs(t + h, &axpy(y, h, &k3));
    let mut out = *y;
    for i in 0..N {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

fn axpy<const N: usize>(y: &[f64; N], a: f64, k: &[f64; N]) -> [f64; N] {
    let mut out = *y;
    for i in 0..N {
        out[i] += a * k[i];
    }
    out
}

/// What the observer wants after an accepted step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Control {
    Continue,
    Stop,
}

/// Where an adaptive integration ended.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Endpoint<const N: usize> {
    pub t: f64,
    pub y: [f64; N],
    pub steps: usize,
    pub stopped: bool,
}

/// The step size collapsed below `h_min` at `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepUnderflow {
    pub t: f64,
    pub h: f64,
}

/// Dormand–Prince 5(4) with standard PI-free step control.
#[derive(Debug, Clone, Copy)]
pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
    pub h_min: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for Dopri5 {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-14,
            h_min: 1e-14,
            h_max: f64::INFINITY,
            max_steps: 1_000_000,
        }
    }
}

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
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// fifth minus fourth order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

impl Dopri5 {
    pub fn with_rtol(rtol: f64) -> Self {
        Self {
            rtol,
            ..Self::default()
        }
    }

    /// Integrates from `t0` towards `t_end` (either direction), calling
    /// `observer(t_prev, y_prev, t, y)` after every accepted step.
    pub fn integrate<const N: usize, F, O>(
        &self,
        mut rhs: F,
        t0: f64,
        y0: [f64; N],
        t_end: f64,
        h0: f64,
        mut observer: O,
    ) -> Result<Endpoint<N>, StepUnderflow>
    where
        F: FnMut(f64, &[f64; N]) -> [f64; N],
        O: FnMut(f64, &[f64; N], f64, &[f64; N]) -> Control,
    {
        let dir = if t_end >= t0 { 1.0 } else { -1.0 };
        let span = (t_end - t0).abs();
        let mut t = t0;
        let mut y = y0;
        let mut h = h0.abs().min(span).min(self.h_max).max(self.h_min);
        let mut k1 = rhs(t, &y);
        let mut steps = 0;
        while (t_end - t) * dir > 0.0 {
            if steps >= self.max_steps {
                return Err(StepUnderflow { t, h });
            }
            let remaining = (t_end - t).abs();
            let last = h >= remaining;
            let hs = dir * if last { remaining } else { h };

            let mut st = [0.0; N];
            for i in 0..N {
                st[i] = y[i] + hs * A21 * k1[i];
            }
            let k2 = rhs(t + C2 * hs, &st);
            for i in 0..N {
                st[i] = y[i] + hs * (A31 * k1[i] + A32 * k2[i]);
            }
            let k3 = rhs(t + C3 * hs, &st);
            for i in 0..N {
                st[i] = y[i] + hs * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
            }
            let k4 = rhs(t + C4 * hs, &st);
            for i in 0..N {
                st[i] = y[i] + hs * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
            }
            let k5 = rhs(t + C5 * hs, &st);
            for i in 0..N {
                st[i] = y[i]
                    + hs * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
            }
            let k6 = rhs(t + hs, &st);
            let mut y_new = [0.0; N];
            for i in 0..N {
                y_new[i] =
                    y[i] + hs * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
            }
            let k7 = rhs(t + hs, &y_new);

            let mut err = 0.0f64;
            let mut finite = true;
            for i in 0..N {
                let e = hs
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let sc = self.atol + self.rtol * y[i].abs().max(y_new[i].abs());
                let r = e / sc;
                err = err.max(r.abs());
                finite &= y_new[i].is_finite() && k7[i].is_finite();
            }
            if !finite || !err.is_finite() {
                h *= 0.25;
                if h < self.h_min {
                    return Err(StepUnderflow { t, h });
                }
                continue;
            }
            if err <= 1.0 {
                let t_new = if last { t_end } else { t + hs };
                steps += 1;
                let ctl = observer(t, &y, t_new, &y_new);
                t = t_new;
                y = y_new;
                k1 = k7;
                if ctl == Control::Stop {
                    return Ok(Endpoint {
                        t,
                        y,
                        steps,
                        stopped: true,
                    });
                }
                let fac = if err == 0.0 {
                    5.0
                } else {
                    (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                };
                h = (h * fac).min(self.h_max).max(self.h_min);
            } else {
                h *= (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
                if h < self.h_min {
                    return Err(StepUnderflow { t, h });
                }
            }
        }
        Ok(Endpoint {
            t,
            y,
            steps,
            stopped: false,
        })
    }
}
