//! Small statistics toolbox for the property tests: chi-square and
//! Kolmogorov-Smirnov p-values, with the usual asymptotic approximations.
//! Nothing here is exposed as part of the cryptographic API; test code and
//! the acceptance suite are the only consumers.

/// Natural log of the gamma function (Lanczos approximation, ~15 digits).
pub fn ln_gamma(x: f64) -> f64 {
    const G: [f64; 9] = [
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    if x < 0.5 {
        // Reflection.
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = G[0];
    let t = x + 7.5;
    for (i, &g) in G.iter().enumerate().skip(1) {
        a += g / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// Regularized lower incomplete gamma P(s, x).
pub fn gamma_p(s: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x < s + 1.0 {
        // Series expansion.
        let mut term = 1.0 / s;
        let mut sum = term;
        let mut n = s;
        for _ in 0..1000 {
            n += 1.0;
            term *= x / n;
            sum += term;
            if term.abs() < sum.abs() * 1e-16 {
                break;
            }
        }
        (sum.ln() + s * x.ln() - x - ln_gamma(s)).exp()
    } else {
        1.0 - gamma_q_cf(s, x)
    }
}

/// Regularized upper incomplete gamma Q(s, x) by continued fraction,
/// valid for x >= s + 1.
fn gamma_q_cf(s: f64, x: f64) -> f64 {
    let mut b = x + 1.0 - s;
    let mut c = 1.0 / 1e-300;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..1000 {
        let an = -(i as f64) * (i as f64 - s);
        b += 2.0;
        d = an * d + b;
        if d.abs() < 1e-300 {
            d = 1e-300;
        }
        c = b + an / c;
        if c.abs() < 1e-300 {
            c = 1e-300;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (s * x.ln() - x - ln_gamma(s)).exp() * h
}

/// p-value of a chi-square statistic with `dof` degrees of freedom.
pub fn chi2_sf(stat: f64, dof: f64) -> f64 {
    (1.0 - gamma_p(dof / 2.0, stat / 2.0)).clamp(0.0, 1.0)
}

/// Chi-square goodness-of-fit p-value with standard merging of sparse
/// buckets: adjacent cells are pooled until every expected count is at
/// least 5.
pub fn chi_square_p(observed: &[u64], expected: &[f64]) -> f64 {
    assert_eq!(observed.len(), expected.len());
    let mut obs_m = Vec::new();
    let mut exp_m = Vec::new();
    let mut o_acc = 0.0f64;
    let mut e_acc = 0.0f64;
    for (&o, &e) in observed.iter().zip(expected) {
        o_acc += o as f64;
        e_acc += e;
        if e_acc >= 5.0 {
            obs_m.push(o_acc);
            exp_m.push(e_acc);
            o_acc = 0.0;
            e_acc = 0.0;
        }
    }
    // Fold any trailing sparse remainder into the last cell.
    if e_acc > 0.0 || o_acc > 0.0 {
        if let (Some(lo), Some(le)) = (obs_m.last_mut(), exp_m.last_mut()) {
            *lo += o_acc;
            *le += e_acc;
        } else {
            obs_m.push(o_acc);
            exp_m.push(e_acc);
        }
    }
    if obs_m.len() < 2 {
        return 1.0;
    }
    let stat: f64 = obs_m
        .iter()
        .zip(&exp_m)
        .map(|(&o, &e)| (o - e) * (o - e) / e)
        .sum();
    chi2_sf(stat, (obs_m.len() - 1) as f64)
}

/// Two-sample chi-square test of homogeneity on paired histograms.
pub fn chi_square_two_sample_p(a: &[u64], b: &[u64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let na: f64 = a.iter().map(|&x| x as f64).sum();
    let nb: f64 = b.iter().map(|&x| x as f64).sum();
    assert!(na > 0.0 && nb > 0.0);
    let ka = (nb / na).sqrt();
    let kb = (na / nb).sqrt();
    // Merge sparse cells so the asymptotics hold.
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let mut acc = (0.0f64, 0.0f64);
    for (&oa, &ob) in a.iter().zip(b) {
        acc.0 += oa as f64;
        acc.1 += ob as f64;
        if acc.0 + acc.1 >= 10.0 {
            cells.push(acc);
            acc = (0.0, 0.0);
        }
    }
    if acc.0 + acc.1 > 0.0 {
        if let Some(last) = cells.last_mut() {
            last.0 += acc.0;
            last.1 += acc.1;
        } else {
            cells.push(acc);
        }
    }
    if cells.len() < 2 {
        return 1.0;
    }
    let stat: f64 = cells
        .iter()
        .map(|&(oa, ob)| {
            let d = ka * oa - kb * ob;
            d * d / (oa + ob)
        })
        .sum();
    chi2_sf(stat, (cells.len() - 1) as f64)
}

/// Asymptotic Kolmogorov distribution tail Q(lambda).
fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 1e-6 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..=100 {
        let term = (-2.0 * (k as f64) * (k as f64) * lambda * lambda).exp();
        sum += sign * term;
        sign = -sign;
        if term < 1e-12 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// One-sample KS p-value of `samples` against the uniform distribution on
/// the full 64-bit range.
pub fn ks_uniform_u64_p(samples: &[u64]) -> f64 {
    let mut s = samples.to_vec();
    s.sort_unstable();
    let n = s.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in s.iter().enumerate() {
        let cdf = x as f64 / 2f64.powi(64);
        let lo = i as f64 / n;
        let hi = (i + 1) as f64 / n;
        d = d.max((cdf - lo).abs()).max((hi - cdf).abs());
    }
    let sq = n.sqrt();
    kolmogorov_q((sq + 0.12 + 0.11 / sq) * d)
}

/// Two-sample KS p-value.
pub fn ks_two_sample_p(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(|x, y| x.partial_cmp(y).unwrap());
    b.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            i += 1;
        } else {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let ne = (na * nb / (na + nb)).sqrt();
    kolmogorov_q((ne + 0.12 + 0.11 / ne) * d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tape::{RandomTape, WordSource};

    #[test]
    fn gamma_matches_known_values() {
        // Gamma(5) = 24.
        assert!((ln_gamma(5.0) - 24f64.ln()).abs() < 1e-10);
        // P(1, x) = 1 - exp(-x).
        assert!((gamma_p(1.0, 2.0) - (1.0 - (-2.0f64).exp())).abs() < 1e-10);
        // Chi-square with 1 dof at its median.
        assert!((chi2_sf(0.4549, 1.0) - 0.5).abs() < 1e-3);
    }

    #[test]
    fn chi_square_accepts_uniform_words() {
        let mut t = RandomTape::from_seed([1; 32], "chi");
        let mut counts = vec![0u64; 64];
        for _ in 0..64_000 {
            counts[t.next_below(64) as usize] += 1;
        }
        let expected = vec![1000.0; 64];
        assert!(chi_square_p(&counts, &expected) > 0.001);
    }

    #[test]
    fn chi_square_rejects_skew() {
        let observed = vec![2000u64, 1000, 1000, 1000];
        let expected = vec![1250.0; 4];
        assert!(chi_square_p(&observed, &expected) < 1e-6);
    }

    #[test]
    fn ks_accepts_uniform_and_rejects_halved() {
        let mut t = RandomTape::from_seed([2; 32], "ks");
        let words: Vec<u64> = (0..5000).map(|_| t.next_word()).collect();
        assert!(ks_uniform_u64_p(&words) > 0.001);
        let halved: Vec<u64> = words.iter().map(|&w| w / 2).collect();
        assert!(ks_uniform_u64_p(&halved) < 1e-9);
    }

    #[test]
    fn two_sample_tests_agree_on_same_source() {
        let mut t = RandomTape::from_seed([3; 32], "two");
        let a: Vec<f64> = (0..3000).map(|_| t.next_below(1000) as f64).collect();
        let b: Vec<f64> = (0..3000).map(|_| t.next_below(1000) as f64).collect();
        assert!(ks_two_sample_p(&a, &b) > 0.001);
        let mut ha = vec![0u64; 20];
        let mut hb = vec![0u64; 20];
        for &x in &a {
            ha[(x as usize) / 50] += 1;
        }
        for &x in &b {
            hb[(x as usize) / 50] += 1;
        }
        assert!(chi_square_two_sample_p(&ha, &hb) > 0.001);
        let shifted: Vec<f64> = a.iter().map(|&x| x + 200.0).collect();
        assert!(ks_two_sample_p(&shifted, &b) < 1e-6);
    }
}
