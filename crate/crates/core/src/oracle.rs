//! Brute-force propagators used to cross-check the closed-form dynamics.
//!
//! [`block_propagate`] exponentiates each 2x2 block through its eigenvectors.
//! [`ode_propagate`] integrates the Schrodinger equation on the whole
//! truncated basis with fixed-step RK4; it builds the Hamiltonian by applying
//! `f(n)` and the lowering operator literally and never sees `gamma`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::evolution::JointState;
use crate::fockspace::TruncatedFieldState;
use crate::model::{ModelParams, RabiSpectrum};
use crate::C64;

/// Blocks `[[eta/2, kappa_n], [kappa_n, -eta/2]]` acting on
/// `span{|+, n>, |-, n+m>}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockHamiltonian {
    blocks: Vec<[[f64; 2]; 2]>,
}

impl BlockHamiltonian {
    pub fn new(params: &ModelParams, n_max: usize) -> Self {
        let h = 0.5 * params.eta();
        let blocks = (0..=n_max)
            .map(|n| {
                let k = params.coupling_kernel(n);
                [[h, k], [k, -h]]
            })
            .collect();
        BlockHamiltonian { blocks }
    }

    pub fn blocks(&self) -> &[[[f64; 2]; 2]] {
        &self.blocks
    }

    /// Positive eigenvalue of block `n`.
    pub fn eigenvalue(&self, n: usize) -> f64 {
        let b = &self.blocks[n];
        b[0][0].hypot(b[0][1])
    }
}

/// Normalized eigenvector of `[[a, k], [k, -a]]` for eigenvalue `+lambda`,
/// picking the algebraic form that avoids cancellation.
fn upper_eigenvector(a: f64, k: f64, lambda: f64) -> (f64, f64) {
    let (x, y) = if a >= 0.0 {
        (a + lambda, k)
    } else {
        (k, lambda - a)
    };
    let norm = x.hypot(y);
    (x / norm, y / norm)
}

fn block_apply(block: &[[f64; 2]; 2], lambda: f64, t: f64, c: C64) -> (C64, C64) {
    if lambda == 0.0 {
        return (c, C64::new(0.0, 0.0));
    }
    let (v1, v2) = upper_eigenvector(block[0][0], block[0][1], lambda);
    // U = e^{-i t l} v v^T + e^{+i t l} w w^T with w = (-v2, v1)
    let minus = C64::from_polar(1.0, -t * lambda);
    let plus = minus.conj();
    let u00 = minus * v1 * v1 + plus * v2 * v2;
    let u10 = (minus - plus) * v1 * v2;
    (u00 * c, u10 * c)
}

/// Exact propagation by per-block eigendecomposition.
pub fn block_propagate(field: &TruncatedFieldState, params: &ModelParams, t: f64) -> JointState {
    let ham = BlockHamiltonian::new(params, field.n_max());
    let lambdas: Vec<f64> = (0..=field.n_max()).map(|n| ham.eigenvalue(n)).collect();
    propagate_blocks(field, params, &ham, &lambdas, t)
}

/// [`block_propagate`] with eigenvalues taken from `spectrum` instead of the
/// blocks themselves.
pub fn block_propagate_with_spectrum(
    field: &TruncatedFieldState,
    params: &ModelParams,
    spectrum: &RabiSpectrum,
    t: f64,
) -> JointState {
    let ham = BlockHamiltonian::new(params, field.n_max());
    propagate_blocks(field, params, &ham, &spectrum.values()[..=field.n_max()], t)
}

fn propagate_blocks(
    field: &TruncatedFieldState,
    params: &ModelParams,
    ham: &BlockHamiltonian,
    lambdas: &[f64],
    t: f64,
) -> JointState {
    let (excited, ground): (Vec<C64>, Vec<C64>) = field
        .amplitudes()
        .iter()
        .zip(ham.blocks())
        .zip(lambdas)
        .map(|((c, b), &l)| block_apply(b, l, t, *c))
        .unzip();
    JointState::from_parts(
        t,
        params.m(),
        excited,
        ground,
        field.support(),
        field.tail_mass(),
    )
    .expect("block propagation preserves basis shape")
}

/// Sparse Hamiltonian on `{|+, j>: j <= n_max} U {|-, j>: j <= n_max + m}`.
struct FullHamiltonian {
    diag: Vec<f64>,
    /// Symmetric off-diagonal couplings `(row, col, value)`, stored once.
    offdiag: Vec<(usize, usize, f64)>,
    n_max: usize,
    m: usize,
}

impl FullHamiltonian {
    fn new(params: &ModelParams, n_max: usize) -> Self {
        let m = params.m() as usize;
        let excited_len = n_max + 1;
        let ground_len = n_max + m + 1;
        let h = 0.5 * params.eta();
        let mut diag = vec![h; excited_len];
        diag.extend(std::iter::repeat_n(-h, ground_len));

        // R sigma_+ |-, j> = a^m f(n) |j> |+>
        let mut offdiag = Vec::new();
        for j in 0..ground_len {
            let mut amp = params.nonlinearity().f(j as u64);
            let mut photon = j;
            let mut alive = true;
            for _ in 0..m {
                if photon == 0 {
                    alive = false;
                    break;
                }
                amp *= (photon as f64).sqrt();
                photon -= 1;
            }
            if alive && photon <= n_max && amp != 0.0 {
                offdiag.push((photon, excited_len + j, amp));
            }
        }
        FullHamiltonian {
            diag,
            offdiag,
            n_max,
            m,
        }
    }

    fn dim(&self) -> usize {
        self.diag.len()
    }

    /// `out = -i H psi`
    fn apply(&self, psi: &[C64], out: &mut [C64]) {
        let minus_i = C64::new(0.0, -1.0);
        for ((o, d), p) in out.iter_mut().zip(&self.diag).zip(psi) {
            *o = minus_i * d * p;
        }
        for &(r, c, v) in &self.offdiag {
            out[r] += minus_i * v * psi[c];
            out[c] += minus_i * v * psi[r];
        }
    }

    /// Largest absolute row sum, an upper bound on the spectral radius.
    fn row_sum_bound(&self) -> f64 {
        let mut rows: Vec<f64> = self.diag.iter().map(|d| d.abs()).collect();
        for &(r, c, v) in &self.offdiag {
            rows[r] += v.abs();
            rows[c] += v.abs();
        }
        rows.into_iter().fold(0.0, f64::max)
    }
}

struct Rk4 {
    ham: FullHamiltonian,
    k: [Vec<C64>; 4],
    tmp: Vec<C64>,
}

impl Rk4 {
    fn new(ham: FullHamiltonian) -> Self {
        let d = ham.dim();
        let z = vec![C64::new(0.0, 0.0); d];
        Rk4 {
            ham,
            k: [z.clone(), z.clone(), z.clone(), z.clone()],
            tmp: z,
        }
    }

    fn step(&mut self, psi: &mut [C64], h: f64) {
        let [k1, k2, k3, k4] = &mut self.k;
        self.ham.apply(psi, k1);
        for ((t, p), k) in self.tmp.iter_mut().zip(psi.iter()).zip(k1.iter()) {
            *t = p + k * (0.5 * h);
        }
        self.ham.apply(&self.tmp, k2);
        for ((t, p), k) in self.tmp.iter_mut().zip(psi.iter()).zip(k2.iter()) {
            *t = p + k * (0.5 * h);
        }
        self.ham.apply(&self.tmp, k3);
        for ((t, p), k) in self.tmp.iter_mut().zip(psi.iter()).zip(k3.iter()) {
            *t = p + k * h;
        }
        self.ham.apply(&self.tmp, k4);
        let w = h / 6.0;
        for (i, p) in psi.iter_mut().enumerate() {
            *p += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * w;
        }
    }
}

/// Largest RK4 step accepted for a basis whose fastest pair has frequency
/// `gamma_max`.
pub fn max_ode_step(gamma_max: f64) -> f64 {
    PI / (40.0 * gamma_max)
}

/// Fixed-step RK4 propagation to time `t` with step at most `dt`.
///
/// The norm is not renormalized, so its drift measures integration error.
pub fn ode_propagate(
    field: &TruncatedFieldState,
    params: &ModelParams,
    t: f64,
    dt: f64,
) -> Result<JointState> {
    Ok(ode_trajectory(field, params, &[t], dt)?.pop().unwrap())
}

/// RK4 states at each of the nondecreasing, nonnegative `times`.
pub fn ode_trajectory(
    field: &TruncatedFieldState,
    params: &ModelParams,
    times: &[f64],
    dt: f64,
) -> Result<Vec<JointState>> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidStep(format!(
            "dt must be positive and finite, got {dt}"
        )));
    }
    let gamma_max = params.rabi_spectrum(field.n_max()).max();
    let limit = max_ode_step(gamma_max);
    if dt > limit {
        return Err(Error::InvalidStep(format!(
            "dt = {dt} exceeds pi / (40 gamma_max) = {limit:.3e} (gamma_max = {gamma_max:.6e})"
        )));
    }
    if times.iter().any(|t| !t.is_finite() || *t < 0.0) || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::invalid(
            "ODE sample times must be finite, nonnegative and sorted",
        ));
    }
    let ham = FullHamiltonian::new(params, field.n_max());
    debug_assert!(ham.row_sum_bound() >= gamma_max * (1.0 - 1e-12));
    let (n_max, m) = (ham.n_max, ham.m);
    let excited_len = n_max + 1;
    let mut psi = vec![C64::new(0.0, 0.0); ham.dim()];
    psi[..excited_len].copy_from_slice(field.amplitudes());
    let mut rk = Rk4::new(ham);

    let mut out = Vec::with_capacity(times.len());
    let mut now = 0.0;
    for &target in times {
        let span = target - now;
        if span > 0.0 {
            let steps = (span / dt).ceil() as usize;
            let h = span / steps as f64;
            for _ in 0..steps {
                rk.step(&mut psi, h);
            }
        }
        now = target;
        let excited = psi[..excited_len].to_vec();
        let ground = psi[excited_len + m..excited_len + m + n_max + 1].to_vec();
        out.push(JointState::from_parts(
            target,
            params.m(),
            excited,
            ground,
            field.support(),
            field.tail_mass(),
        )?);
    }
    Ok(out)
}

/// `<a^k>` by applying the lowering operator `k` times to photon-indexed copies
/// of both branches and projecting back onto the state.
pub fn moment_oracle(state: &JointState, k: usize) -> Result<C64> {
    if state.headroom() < k {
        return Err(Error::Headroom {
            required: k,
            available: state.headroom(),
        });
    }
    let m = state.m() as usize;
    let excited: Vec<C64> = state.excited().to_vec();
    let mut ground = vec![C64::new(0.0, 0.0); m];
    ground.extend_from_slice(state.ground());

    let lower = |v: &[C64]| -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); v.len()];
        for j in 1..v.len() {
            out[j - 1] = v[j] * (j as f64).sqrt();
        }
        out
    };
    let (mut le, mut lg) = (excited.clone(), ground.clone());
    for _ in 0..k {
        le = lower(&le);
        lg = lower(&lg);
    }
    let inner = |a: &[C64], b: &[C64]| -> C64 { a.iter().zip(b).map(|(x, y)| x.conj() * y).sum() };
    Ok(inner(&excited, &le) + inner(&ground, &lg))
}
