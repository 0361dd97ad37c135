//! Explicit Runge-Kutta pair of orders 8 and 5(3) with the Dormand-Prince
//! coefficients and Hairer's combined error estimate.

const STAGES: usize = 12;

#[cfg(test)]
const NODES: [f64; STAGES] = [
    0.0,
    0.05260015195876773,
    0.0789002279381516,
    0.1183503419072274,
    0.2816496580927726,
    0.3333333333333333,
    0.25,
    0.3076923076923077,
    0.6512820512820513,
    0.6,
    0.8571428571428571,
    1.0,
];
const COUPLING: [[f64; STAGES]; STAGES] = [
    [0.0; STAGES],
    [
        0.05260015195876773,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        0.0197250569845379,
        0.0591751709536137,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        0.02958758547680685,
        0.0,
        0.08876275643042054,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        0.2413651341592667,
        0.0,
        -0.8845494793282861,
        0.924834003261792,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        0.037037037037037035,
        0.0,
        0.0,
        0.17082860872947386,
        0.12546768756682242,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        0.037109375,
        0.0,
        0.0,
        0.17025221101954405,
        0.06021653898045596,
        -0.017578125,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        0.03709200011850479,
        0.0,
        0.0,
        0.17038392571223998,
        0.10726203044637328,
        -0.015319437748624402,
        0.008273789163814023,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        0.6241109587160757,
        0.0,
        0.0,
        -3.3608926294469414,
        -0.868219346841726,
        27.59209969944671,
        20.154067550477894,
        -43.48988418106996,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        0.47766253643826434,
        0.0,
        0.0,
        -2.4881146199716677,
        -0.590290826836843,
        21.230051448181193,
        15.279233632882423,
        -33.28821096898486,
        -0.020331201708508627,
        0.0,
        0.0,
        0.0,
    ],
    [
        -0.9371424300859873,
        0.0,
        0.0,
        5.186372428844064,
        1.0914373489967295,
        -8.149787010746927,
        -18.52006565999696,
        22.739487099350505,
        2.4936055526796523,
        -3.0467644718982196,
        0.0,
        0.0,
    ],
    [
        2.273310147516538,
        0.0,
        0.0,
        -10.53449546673725,
        -2.0008720582248625,
        -17.9589318631188,
        27.94888452941996,
        -2.8589982771350235,
        -8.87285693353063,
        12.360567175794303,
        0.6433927460157636,
        0.0,
    ],
];
const WEIGHTS: [f64; STAGES] = [
    0.054293734116568765,
    0.0,
    0.0,
    0.0,
    0.0,
    4.450312892752409,
    1.8915178993145003,
    -5.801203960010585,
    0.3111643669578199,
    -0.1521609496625161,
    0.20136540080403034,
    0.04471061572777259,
];
const ERROR_WEIGHTS: [f64; STAGES] = [
    0.01312004499419488,
    0.0,
    0.0,
    0.0,
    0.0,
    -1.2251564463762044,
    -0.4957589496572502,
    1.6643771824549864,
    -0.35032884874997366,
    0.3341791187130175,
    0.08192320648511571,
    -0.022355307863886294,
];
const LOW_ORDER: [f64; 3] = [0.2440944881889764, 0.7338466882816118, 0.022058823529411766];

/// Step-size control with a proportional-integral factor.
#[derive(Debug, Clone, Copy)]
pub struct StepControl {
    pub rtol: f64,
    pub atol: f64,
    previous_error: f64,
}

impl StepControl {
    const SAFETY: f64 = 0.9;
    const BETA: f64 = 0.04;
    const MIN_SHRINK: f64 = 1.0 / 3.0;
    const MAX_GROWTH: f64 = 6.0;

    pub fn new(rtol: f64, atol: f64) -> Self {
        Self {
            rtol,
            atol,
            previous_error: 1e-4,
        }
    }

    /// Next step size after a step of size `h` with scaled error `err`, and
    /// whether the step is accepted.
    pub fn update(&mut self, h: f64, err: f64) -> (f64, bool) {
        let exponent = 1.0 / 8.0 - 0.2 * Self::BETA;
        let raw = err.powf(exponent);
        if err <= 1.0 {
            let factor = raw / self.previous_error.powf(Self::BETA) / Self::SAFETY;
            let factor = factor.clamp(1.0 / Self::MAX_GROWTH, 1.0 / Self::MIN_SHRINK);
            self.previous_error = err.max(1e-4);
            (h / factor, true)
        } else {
            let factor = (raw / Self::SAFETY).min(1.0 / Self::MIN_SHRINK);
            (h / factor, false)
        }
    }
}

/// One step of the autonomous system `y' = f(y)`. Returns the new state and
/// the error estimate scaled by the tolerances (accept when at most 1).
pub fn step<const N: usize>(
    f: &impl Fn(&[f64; N]) -> [f64; N],
    y: &[f64; N],
    h: f64,
    control: &StepControl,
) -> ([f64; N], f64) {
    let mut k = [[0.0; N]; STAGES];
    k[0] = f(y);
    for s in 1..STAGES {
        let mut stage = *y;
        for (j, kj) in k.iter().enumerate().take(s) {
            let a = COUPLING[s][j];
            if a != 0.0 {
                for i in 0..N {
                    stage[i] += h * a * kj[i];
                }
            }
        }
        k[s] = f(&stage);
    }

    let mut y_new = *y;
    let mut err_high = 0.0;
    let mut err_low = 0.0;
    for i in 0..N {
        let mut increment = 0.0;
        let mut estimate = 0.0;
        for s in 0..STAGES {
            increment += WEIGHTS[s] * k[s][i];
            estimate += ERROR_WEIGHTS[s] * k[s][i];
        }
        y_new[i] = y[i] + h * increment;
        let low =
            increment - LOW_ORDER[0] * k[0][i] - LOW_ORDER[1] * k[8][i] - LOW_ORDER[2] * k[11][i];
        let scale = control.atol + control.rtol * y[i].abs().max(y_new[i].abs());
        err_high += (estimate / scale).powi(2);
        err_low += (low / scale).powi(2);
    }
    let mut denominator = err_high + 0.01 * err_low;
    if denominator <= 0.0 {
        denominator = 1.0;
    }
    let err = h.abs() * err_high * (1.0 / (denominator * N as f64)).sqrt();
    (y_new, err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_are_consistent() {
        let sum: f64 = WEIGHTS.iter().sum();
        assert!((sum - 1.0).abs() < 1e-14);
        for s in 1..STAGES {
            let row: f64 = COUPLING[s].iter().sum();
            assert!((row - NODES[s]).abs() < 1e-13, "stage {s}");
        }
    }

    #[test]
    fn eighth_order_on_exponential() {
        let f = |y: &[f64; 1]| [y[0]];
        let control = StepControl::new(1e-12, 1e-12);
        let error = |h: f64| {
            let n = (1.0 / h).round() as usize;
            let mut y = [1.0];
            for _ in 0..n {
                y = step(&f, &y, h, &control).0;
            }
            (y[0] - 1f64.exp()).abs()
        };
        let ratio = error(0.25) / error(0.125);
        assert!(ratio > 150.0, "ratio {ratio}");
    }
}
