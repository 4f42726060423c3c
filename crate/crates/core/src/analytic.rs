//! Closed-form energies and radial nodes of the free (unconfined) systems.

use serde::Serialize;

use crate::error::{invalid, Error, Result};

/// Free isotropic oscillator level `2n + ℓ + 3/2` in units of `ħω`.
///
/// The result does not depend on `k`; multiply by `√k` for hartree.
pub fn free_iho_energy(n: usize, ell: u32, _k: f64) -> f64 {
    2.0 * n as f64 + f64::from(ell) + 1.5
}

/// Free hydrogen-like level `-1 / (2 n²)` in hartree (Z = 1).
pub fn free_hydrogen_energy(n_principal: usize) -> Result<f64> {
    if n_principal == 0 {
        return Err(invalid("principal quantum number must be >= 1"));
    }
    let n = n_principal as f64;
    Ok(-0.5 / (n * n))
}

/// Effective angular momentum absorbing a `λ / 2r²` term:
/// `ℓ_eff (ℓ_eff + 1) = ℓ(ℓ + 1) + λ`.
pub fn effective_ell(ell: u32, lambda: f64) -> f64 {
    let l = f64::from(ell) + 0.5;
    -0.5 + (l * l + lambda).sqrt()
}

/// Free Davidson oscillator level `2n + 1 + √((ℓ + ½)² + λ)` in units of `ħω`.
pub fn davidson_energy(n: usize, ell: u32, lambda: f64) -> f64 {
    let l = f64::from(ell) + 0.5;
    2.0 * n as f64 + 1.0 + (l * l + lambda).sqrt()
}

/// Single node of the free `(1, ℓ)` Davidson state, `√((2 ℓ_eff + 3) / 2)` (k = 1).
pub fn davidson_first_node(ell: u32, lambda: f64) -> f64 {
    ((2.0 * effective_ell(ell, lambda) + 3.0) / 2.0).sqrt()
}

/// Generalized Laguerre polynomial `L_n^{(a)}(t)` and its derivative.
pub fn laguerre_eval(n: usize, a: f64, t: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + a - t;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + a - t) * cur - (kf + a) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    // d/dt L_n^{(a)} = -L_{n-1}^{(a+1)}
    let (dp, _) = laguerre_eval(n - 1, a + 1.0, t);
    (cur, -dp)
}

/// The `n` roots of `L_n^{(a)}`, ascending, by Newton iteration with
/// deflation against the roots already found.
pub fn laguerre_roots(n: usize, a: f64) -> Result<Vec<f64>> {
    if a <= -1.0 {
        return Err(invalid(format!("Laguerre parameter must exceed -1, got {a}")));
    }
    const MAX_ITER: usize = 200;
    let nf = n as f64;
    let mut roots: Vec<f64> = Vec::with_capacity(n);
    for i in 0..n {
        // Stroud & Secrest style initial guesses.
        let mut t = match i {
            0 => (1.0 + a) * (3.0 + 0.92 * a) / (1.0 + 2.4 * nf + 1.8 * a),
            1 => roots[0] + (15.0 + 6.25 * a) / (1.0 + 0.9 * a + 2.5 * nf),
            _ => {
                let ai = (i - 1) as f64;
                roots[i - 1]
                    + ((1.0 + 2.55 * ai) / (1.9 * ai) + 1.26 * ai * a / (1.0 + 3.5 * ai))
                        * (roots[i - 1] - roots[i - 2])
                        / (1.0 + 0.3 * a)
            }
        };
        let mut converged = false;
        for _ in 0..MAX_ITER {
            let (p, dp) = laguerre_eval(n, a, t);
            let ratio = p / dp;
            let deflate: f64 = roots.iter().map(|r| 1.0 / (t - r)).sum();
            let step = ratio / (1.0 - ratio * deflate);
            t -= step;
            if step.abs() <= 1e-15 * t.abs().max(1.0) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence {
                what: "Laguerre root Newton iteration",
                iterations: MAX_ITER,
            });
        }
        roots.push(t);
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-10 * b.abs().max(1.0));
    let valid = roots.iter().all(|&t| t > 0.0);
    if roots.len() != n || !valid {
        return Err(Error::RootCount {
            expected: n,
            found: roots.iter().filter(|&&t| t > 0.0).count(),
        });
    }
    Ok(roots)
}

/// Radial nodes of a free oscillator state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeSet {
    pub n: usize,
    pub ell: u32,
    pub force_constant: f64,
    pub nodes: Vec<f64>,
}

/// Nodes of the radial function `r^{ℓ+1} L_n^{(ℓ_eff+½)}(√k r²) e^{-√k r²/2}`
/// for a possibly non-integer effective angular momentum.
pub fn oscillator_nodes(n: usize, ell_eff: f64, k: f64) -> Result<Vec<f64>> {
    if !(k > 0.0) {
        return Err(invalid(format!("force constant must be positive, got {k}")));
    }
    let scale = k.powf(0.25);
    Ok(laguerre_roots(n, ell_eff + 0.5)?
        .into_iter()
        .map(|t| t.sqrt() / scale)
        .collect())
}

/// Radial nodes of the free isotropic oscillator state `(n, ℓ)`.
pub fn iho_nodes(n: usize, ell: u32, k: f64) -> Result<NodeSet> {
    if n == 0 {
        return Err(invalid("the (0, ℓ) state has no radial nodes; need n >= 1"));
    }
    Ok(NodeSet {
        n,
        ell,
        force_constant: k,
        nodes: oscillator_nodes(n, f64::from(ell), k)?,
    })
}
