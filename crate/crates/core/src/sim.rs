//! Fixed-step integration of `ẋ = -Lx`.

use num_traits::Float;
use serde_json::json;

use crate::error::SimError;
use crate::graph::{laplacian_matrix, SignedDigraph};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct SimOptions {
    pub dt: f64,
    pub t_end: f64,
    /// Convergence threshold on `‖x(t) - x(t - window·dt)‖∞`.
    pub conv_tol: f64,
    /// Trailing window, in steps.
    pub window: usize,
    /// Store every `decimation`-th step; the final state is always stored.
    pub decimation: usize,
    /// Skip the explicit-integrator step-size check.
    pub allow_unstable_step: bool,
}

impl Default for SimOptions {
    fn default() -> Self {
        Self {
            dt: 0.01,
            t_end: 50.0,
            conv_tol: 1e-9,
            window: 100,
            decimation: 10,
            allow_unstable_step: false,
        }
    }
}

impl SimOptions {
    pub fn with_horizon(mut self, t_end: f64) -> Self {
        self.t_end = t_end;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub times: Vec<f64>,
    pub states: Vec<Vec<T>>,
    pub converged: bool,
    pub final_state: Vec<T>,
    pub final_time: f64,
}

impl<T: Scalar> Trajectory<T> {
    /// Header `t,x1,…,xn`, one row per stored step.
    pub fn to_csv(&self) -> String {
        let n = self.final_state.len();
        let mut out = String::from("t");
        for i in 1..=n {
            out.push_str(&format!(",x{i}"));
        }
        out.push('\n');
        for (t, x) in self.times.iter().zip(&self.states) {
            out.push_str(&t.to_string());
            for v in x {
                out.push(',');
                out.push_str(&v.to_string());
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self, graph_hash: &str, dt: f64, seed: Option<u64>) -> serde_json::Value {
        let row = |x: &Vec<T>| x.iter().map(Scalar::to_json).collect::<Vec<_>>();
        json!({
            "metadata": { "graph_hash": graph_hash, "dt": dt, "seed": seed },
            "converged": self.converged,
            "final_time": self.final_time,
            "final_state": row(&self.final_state),
            "times": self.times,
            "states": self.states.iter().map(row).collect::<Vec<_>>(),
        })
    }
}

/// Largest admissible step `1 / (2 max_i l_ii)`; infinite for edgeless graphs.
pub fn stability_bound(g: &SignedDigraph) -> f64 {
    let max_diag = (0..g.node_count())
        .map(|i| g.in_neighbors(i).map(|j| g.weight(i, j).abs()).sum::<f64>())
        .fold(0.0, f64::max);
    if max_diag == 0.0 {
        f64::INFINITY
    } else {
        1.0 / (2.0 * max_diag)
    }
}

/// Classical fourth-order Runge–Kutta on `ẋ = -Lx`, stopping early once the
/// trailing-window criterion holds.
pub fn simulate<T: Scalar + Float>(
    g: &SignedDigraph,
    x0: &[T],
    opts: &SimOptions,
) -> Result<Trajectory<T>, SimError> {
    let n = g.node_count();
    if x0.len() != n {
        return Err(SimError::LengthMismatch {
            expected: n,
            found: x0.len(),
        });
    }
    if !opts.dt.is_finite() || opts.dt <= 0.0 {
        return Err(SimError::InvalidParameters(format!(
            "dt must be positive, got {}",
            opts.dt
        )));
    }
    if opts.t_end.is_nan() || opts.t_end < opts.dt {
        return Err(SimError::InvalidParameters(format!(
            "t_end ({}) must be at least dt ({})",
            opts.t_end, opts.dt
        )));
    }
    if opts.conv_tol.is_nan() || opts.conv_tol <= 0.0 || opts.window == 0 || opts.decimation == 0 {
        return Err(SimError::InvalidParameters(
            "conv_tol, window and decimation must be positive".into(),
        ));
    }
    let bound = stability_bound(g);
    if opts.dt > bound && !opts.allow_unstable_step {
        return Err(SimError::UnstableStep { dt: opts.dt, bound });
    }

    let l: Matrix<T> = laplacian_matrix(g);
    let dt = T::lift(opts.dt);
    let half = T::lift(0.5);
    let sixth = T::lift(1.0 / 6.0);
    let two = T::lift(2.0);
    let rhs = |x: &[T]| -> Vec<T> { l.mul_vec(x).into_iter().map(|v| -v).collect() };
    let axpy =
        |x: &[T], k: &[T], h: T| -> Vec<T> { x.iter().zip(k).map(|(a, b)| *a + h * *b).collect() };

    let steps = (opts.t_end / opts.dt).round() as usize;
    let mut x = x0.to_vec();
    let mut times = vec![0.0];
    let mut states = vec![x.clone()];
    // history[s % (window + 1)] holds the state after step s
    let mut history = vec![x.clone(); opts.window + 1];
    let mut converged = false;
    let mut last_step = 0;

    for step in 1..=steps {
        let k1 = rhs(&x);
        let k2 = rhs(&axpy(&x, &k1, dt * half));
        let k3 = rhs(&axpy(&x, &k2, dt * half));
        let k4 = rhs(&axpy(&x, &k3, dt));
        for i in 0..n {
            x[i] = x[i] + dt * sixth * (k1[i] + two * k2[i] + two * k3[i] + k4[i]);
        }
        let t = step as f64 * opts.dt;
        if x.iter().any(|v| !v.is_finite()) {
            return Err(SimError::Diverged { t });
        }
        last_step = step;
        history[step % (opts.window + 1)] = x.clone();
        if step >= opts.window {
            let past = &history[(step - opts.window) % (opts.window + 1)];
            let diff = x
                .iter()
                .zip(past)
                .fold(0.0f64, |acc, (a, b)| acc.max((*a - *b).abs().approx()));
            if diff <= opts.conv_tol {
                converged = true;
            }
        }
        let last = converged || step == steps;
        if step % opts.decimation == 0 || last {
            times.push(t);
            states.push(x.clone());
        }
        if converged {
            break;
        }
    }

    Ok(Trajectory {
        times,
        states,
        converged,
        final_time: last_step as f64 * opts.dt,
        final_state: x,
    })
}

/// The empirical limit `θ` of a converged trajectory.
pub fn converged_state<T: Clone>(traj: &Trajectory<T>) -> Result<Vec<T>, SimError> {
    if traj.converged {
        Ok(traj.final_state.clone())
    } else {
        Err(SimError::NotConverged {
            t_end: traj.final_time,
        })
    }
}
