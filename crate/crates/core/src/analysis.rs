//! Closed-form overhead, complexity, and recoding-probability expressions.
//! These are the analytic counterparts the simulations are checked against.

/// Harmonic number H_n.
pub fn harmonic(n: u32) -> f64 {
    (1..=n).map(|r| 1.0 / r as f64).sum()
}

/// Overhead bounds in packets: `alpha` is the dense-code lower bound shared
/// by any code over the field, `beta` the coverage penalty of the banded
/// vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverheadBounds {
    pub alpha: f64,
    pub beta: f64,
    pub upper: f64,
}

/// Expected extra packets for a dense random code: each missing rank `g'`
/// costs `1/(q^(g-g') - 1)` expected retries. Summed smallest-term first.
pub fn rlnc_overhead_lower(g: u32, q: u32) -> f64 {
    let q = q as f64;
    let mut sum = 0.0;
    for k in (1..=g).rev() {
        let term = q.powi(k as i32) - 1.0;
        if term.is_finite() && term > 0.0 {
            sum += 1.0 / term;
        }
    }
    sum
}

/// Probability that every symbol is covered by at least one of `x` coded
/// packets. A packet covers a fixed symbol if it is the pivot (1/g) or one
/// of the `w` window slots weighted by the pivot-hit expectation.
pub fn coverage_cdf(x: u32, g: u32, w: u32) -> f64 {
    let gf = g as f64;
    let p_cover = 1.0 / gf + w as f64 / (gf * harmonic(g));
    (1.0 - (1.0 - p_cover).powi(x as i32)).powi(g as i32)
}

/// Coverage penalty: sum of the survival function from `x = g`, truncated
/// once terms fall below 1e-12. Together with `alpha` this sandwiches the
/// measured overhead from above.
pub fn overhead_upper(g: u32, w: u32, q: u32) -> OverheadBounds {
    let alpha = rlnc_overhead_lower(g, q);
    let mut beta = 0.0;
    let mut x = g;
    loop {
        let term = 1.0 - coverage_cdf(x, g, w);
        if term < 1e-12 {
            break;
        }
        beta += term;
        x += 1;
        if x > 100_000_000 {
            break;
        }
    }
    OverheadBounds {
        alpha,
        beta,
        upper: alpha + beta,
    }
}

/// Expected row operations to encode one packet: the pivot copy plus one
/// operation per nonzero window coefficient.
pub fn encode_ops(w: u32, q: u32) -> f64 {
    1.0 + w as f64 * (1.0 - 1.0 / q as f64)
}

/// Per-packet row-operation bounds for decoding, split by phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpBounds {
    /// On-the-fly forward substitution.
    pub fly: f64,
    /// Final forward pass, clearing the wrapped corner.
    pub forward1: f64,
    /// Final forward pass inside the bottom w-by-w block.
    pub forward2: f64,
    /// fly + 2*forward1 + 2*forward2 (backward substitution mirrors the
    /// two forward terms).
    pub total: f64,
}

pub fn op_bounds(g: u32, w: u32, q: u32) -> OpBounds {
    let qf = q as f64;
    let gf = g as f64;
    let wf = w as f64;
    let fly = qf / (qf - 1.0) * harmonic(g);
    let scale = (qf - 1.0) / (qf * gf);
    let forward1 = scale * (gf - wf) * wf;
    let forward2 = scale * wf * (wf - 1.0) / 2.0;
    OpBounds {
        fly,
        forward1,
        forward2,
        total: fly + 2.0 * forward1 + 2.0 * forward2,
    }
}

/// Probability that a recoded packet combining `mu` symbols contains at
/// least one symbol the downstream node has not seen, at erasure rate eps.
pub fn p_unseen(eps: f64, mu: u32) -> f64 {
    1.0 - (1.0 - eps).powi(mu as i32)
}

/// Probability that a freshly received symbol absorbs `mu` or more stored
/// rows during its insertion walk, at decoder rank `r`: the candidate hits
/// present pivots `mu` times in a row, sampling without replacement.
pub fn p_passive(r: u32, mu: u32, g: u32) -> f64 {
    if r < mu {
        return 0.0;
    }
    if r == g {
        return 1.0;
    }
    let mut p = 1.0;
    for i in 0..mu {
        p *= (r - i) as f64 / (g - i) as f64;
    }
    p
}

/// ln-factorial table for log-space binomials; exact enough for relative
/// errors far below 1e-9 at the sizes used here.
fn ln_factorials(n: usize) -> Vec<f64> {
    let mut t = vec![0.0f64; n + 1];
    let mut acc = 0.0f64;
    for (i, slot) in t.iter_mut().enumerate().skip(1) {
        acc += (i as f64).ln();
        *slot = acc;
    }
    t
}

fn ln_choose(t: &[f64], n: i64, k: i64) -> Option<f64> {
    if k < 0 || n < 0 || k > n {
        return None;
    }
    Some(t[n as usize] - t[k as usize] - t[(n - k) as usize])
}

/// Probability that at least one of the `g` circular ranges of `delta`
/// consecutive indices holds `mu` or more of the `r` present pivots.
/// Binomials are evaluated in log space; impossible terms contribute zero.
pub fn p_active(r: u32, mu: u32, delta: u32, g: u32) -> f64 {
    if r == 0 {
        return 0.0;
    }
    if r == g {
        return 1.0;
    }
    let t = ln_factorials(g as usize);
    let ln_total = ln_choose(&t, g as i64, r as i64).expect("r <= g");
    let mut miss = 0.0f64;
    for j in 0..mu as i64 {
        let a = ln_choose(&t, delta as i64, j);
        let b = ln_choose(&t, (g - delta) as i64, r as i64 - j);
        if let (Some(a), Some(b)) = (a, b) {
            miss += (a + b - ln_total).exp();
        }
    }
    let miss = miss.clamp(0.0, 1.0);
    1.0 - miss.powi(g as i32)
}

/// Expected distribution of repair-packet kinds over a relay's fill-up,
/// rank averaged uniformly over `[1, g]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RecodeDistribution {
    pub p_passive_total: f64,
    /// Probability mass of active recoding at each extra width, ascending
    /// from `mu` to `delta_max`.
    pub p_active_by_delta: Vec<(u32, f64)>,
    pub p_reencode_total: f64,
}

impl RecodeDistribution {
    pub fn total_mass(&self) -> f64 {
        self.p_passive_total
            + self.p_reencode_total
            + self.p_active_by_delta.iter().map(|(_, p)| p).sum::<f64>()
    }

    pub fn active_total(&self) -> f64 {
        self.p_active_by_delta.iter().map(|(_, p)| p).sum()
    }
}

/// Preference-ordered mass allocation per rank: passive takes its own
/// probability, active splits the rest by the first range size that works
/// (increments of `p_active` in ascending delta), and whatever remains is
/// deferred to re-encoding. The result is averaged uniformly over ranks.
pub fn recode_delta_distribution(g: u32, mu: u32, delta_max: u32) -> RecodeDistribution {
    let mut passive = 0.0f64;
    let mut active = vec![0.0f64; (delta_max - mu + 1) as usize];
    let mut reencode = 0.0f64;
    for r in 1..=g {
        let m_pass = p_passive(r, mu, g);
        let rest = 1.0 - m_pass;
        let mut prev = 0.0f64;
        for (k, delta) in (mu..=delta_max).enumerate() {
            let pa = p_active(r, mu, delta, g);
            let inc = (pa - prev).max(0.0);
            active[k] += rest * inc;
            prev = prev.max(pa);
        }
        reencode += rest * (1.0 - prev).max(0.0);
        passive += m_pass;
    }
    let n = g as f64;
    passive /= n;
    reencode /= n;
    for a in active.iter_mut() {
        *a /= n;
    }
    // Normalize away the residual floating-point drift.
    let total = passive + reencode + active.iter().sum::<f64>();
    let dist = RecodeDistribution {
        p_passive_total: passive / total,
        p_active_by_delta: (mu..=delta_max).zip(active.iter().map(|a| a / total)).collect(),
        p_reencode_total: reencode / total,
    };
    debug_assert!((dist.total_mass() - 1.0).abs() < 1e-9);
    dist
}
