//! Multi-start Levenberg–Marquardt search for deviances `(x,y,z,w) ∈ ℂ⁴`
//! solving `Ω^LC + Ω_P + [η∧η̄] = 0`, independent of the analytic case analysis.

use nalgebra::{SMatrix, SVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::deviance::projective_blocks;
use crate::error::{PskError, Result};
use crate::lie_kahler::{CurvatureBlocks, CurvatureTensor, UnitaryCoframe};

type Vec8 = SVector<f64, 8>;
type Vec16 = SVector<f64, 16>;
type Jac = SMatrix<f64, 16, 8>;

/// Constant part `Ω^LC + Ω_P` of the curvature condition in block form.
#[derive(Clone, Debug)]
pub struct D1Target {
    constant: CurvatureBlocks,
}

impl D1Target {
    pub fn from_curvature(rlc: &CurvatureTensor) -> Result<Self> {
        if rlc.dim() != 4 {
            return Err(PskError::UnsupportedDimension { expected: 2, got: rlc.dim() / 2 });
        }
        let blocks = rlc.complexify(&UnitaryCoframe::standard(4))?;
        Ok(D1Target { constant: blocks.add(&projective_blocks(2)) })
    }

    /// The 16 independent real components of the condition at `p`.
    fn residual(&self, p: &Vec8) -> Vec16 {
        let q = to_complex(p);
        flatten(&self.constant, &sesquilinear(&q, &q))
    }

    fn jacobian(&self, p: &Vec8) -> Jac {
        let q = to_complex(p);
        let mut j = Jac::zeros();
        for k in 0..8 {
            let mut e = [Complex64::new(0.0, 0.0); 4];
            e[k / 2] = if k % 2 == 0 { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 1.0) };
            let s1 = sesquilinear(&e, &q);
            let s2 = sesquilinear(&q, &e);
            let col = flatten_sum(&s1, &s2);
            j.set_column(k, &col);
        }
        j
    }

    /// Max-abs residual of the condition at a point.
    pub fn max_residual(&self, point: &[Complex64; 4]) -> f64 {
        self.residual(&from_complex(point)).amax()
    }
}

fn to_complex(p: &Vec8) -> [Complex64; 4] {
    [0, 1, 2, 3].map(|i| Complex64::new(p[2 * i], p[2 * i + 1]))
}

fn from_complex(q: &[Complex64; 4]) -> Vec8 {
    Vec8::from_fn(|i, _| if i % 2 == 0 { q[i / 2].re } else { q[i / 2].im })
}

/// Blocks with entries `⟨v_{j+k}(p), v_{h+k'}(q)⟩` (0-based), the polarization
/// of the bracket in the v-vector form.
fn sesquilinear(p: &[Complex64; 4], q: &[Complex64; 4]) -> [[Complex64; 4]; 4] {
    let v = |t: &[Complex64; 4], i: usize| [t[i], t[i + 1]];
    let ip = |a: [Complex64; 2], b: [Complex64; 2]| a[0].conj() * b[0] + a[1].conj() * b[1];
    let mut out = [[Complex64::new(0.0, 0.0); 4]; 4];
    for c in 0..2 {
        for d in 0..2 {
            for j in 0..2 {
                for h in 0..2 {
                    out[2 * c + d][2 * j + h] = ip(v(p, j + c), v(q, h + d));
                }
            }
        }
    }
    out
}

/// Independent real components: Hermitian diagonal blocks contribute
/// `Re A(0,0), Re A(1,1), Re A(0,1), Im A(0,1)`; the off-diagonal block
/// `A_{1̄2}` contributes all 8 real parts.
fn components(blocks: &[[Complex64; 4]; 4]) -> Vec16 {
    let mut v = Vec16::zeros();
    let mut i = 0;
    for b in [0usize, 3] {
        let m = &blocks[b];
        for val in [m[0].re, m[3].re, m[1].re, m[1].im] {
            v[i] = val;
            i += 1;
        }
    }
    for z in blocks[1] {
        v[i] = z.re;
        v[i + 1] = z.im;
        i += 2;
    }
    v
}

fn flatten(constant: &CurvatureBlocks, bracket: &[[Complex64; 4]; 4]) -> Vec16 {
    let mut k = [[Complex64::new(0.0, 0.0); 4]; 4];
    for c in 0..2 {
        for d in 0..2 {
            let m = constant.get(c, d);
            for j in 0..2 {
                for h in 0..2 {
                    k[2 * c + d][2 * j + h] = m[(j, h)] + bracket[2 * c + d][2 * j + h];
                }
            }
        }
    }
    components(&k)
}

fn flatten_sum(a: &[[Complex64; 4]; 4], b: &[[Complex64; 4]; 4]) -> Vec16 {
    let mut s = *a;
    for (x, y) in s.iter_mut().zip(b) {
        for (u, v) in x.iter_mut().zip(y) {
            *u += v;
        }
    }
    components(&s)
}

fn levenberg_marquardt(target: &D1Target, start: Vec8) -> (Vec8, f64) {
    let mut p = start;
    let mut r = target.residual(&p);
    let mut cost = r.norm_squared();
    let mut mu = 1e-3;
    for _ in 0..300 {
        if r.amax() < 1e-13 {
            break;
        }
        let j = target.jacobian(&p);
        let jt = j.transpose();
        let jtj = jt * j;
        let g = jt * r;
        let mut accepted = false;
        let mut stalled = false;
        for _ in 0..30 {
            let mut a = jtj;
            for i in 0..8 {
                a[(i, i)] += mu * (1.0 + jtj[(i, i)]);
            }
            let Some(step) = a.lu().solve(&(-g)) else {
                mu *= 10.0;
                continue;
            };
            let trial = p + step;
            let tr = target.residual(&trial);
            let tc = tr.norm_squared();
            if tc < cost {
                stalled = cost - tc < 1e-6 * cost;
                p = trial;
                r = tr;
                cost = tc;
                mu = (mu * 0.3).max(1e-15);
                accepted = true;
                break;
            }
            mu *= 10.0;
        }
        if !accepted || stalled {
            break;
        }
    }
    (p, r.amax())
}

#[derive(Clone, Debug, PartialEq)]
pub struct BruteForceResult {
    /// Converged points (max-abs residual below `1e-6`).
    pub points: Vec<[Complex64; 4]>,
    /// Smallest max-abs residual reached over all starts.
    pub floor: f64,
    pub trials: usize,
}

impl BruteForceResult {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Multi-start search with starts drawn uniformly from `[−2, 2]⁸`.
pub fn brute_force_solutions(rlc: &CurvatureTensor, trials: usize, seed: u64) -> Result<BruteForceResult> {
    let target = D1Target::from_curvature(rlc)?;
    let runs: Vec<(Vec8, f64)> = (0..trials.max(1))
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(t as u64));
            let start = Vec8::from_fn(|_, _| rng.random_range(-2.0..2.0));
            levenberg_marquardt(&target, start)
        })
        .collect();
    let floor = runs.iter().map(|(_, r)| *r).fold(f64::INFINITY, f64::min);
    let points = runs.iter().filter(|(_, r)| *r < 1e-6).map(|(p, _)| to_complex(p)).collect();
    Ok(BruteForceResult { points, floor, trials: trials.max(1) })
}

