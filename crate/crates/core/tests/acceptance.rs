//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rectcover::boolmat::{disjointness, kneser_submatrix, kronecker, triangular};
use rectcover::covers::fractional_cost;
use rectcover::exact::{exact_boolean_rank, exact_or2, exact_or2_with_budget, verify_direct_product};
use rectcover::greedy::{
    disjointness_block_cover, disjointness_full_cover, ell_star, entropy_exponent, eta_covering, mu_star,
    trinomial_identity_check,
};
use rectcover::lp::{build_cover_lp, solve_dual, solve_lp, triangular_certificate, verify_certificate};
use rectcover::network::{covering_to_depth2, family, net19, net20};
use rectcover::regexlang::{divide_and_conquer_regex, optimal_regex_length, TwoLetterLanguage};
use rectcover::BooleanMatrix;

const TRIANGULAR_LIMIT: Duration = Duration::from_secs(60);
const CERTIFICATE_LIMIT: Duration = Duration::from_secs(300);
const SWEEP_LIMIT: Duration = Duration::from_secs(600);
const ENTROPY_VALUE_TOL: f64 = 1e-9;
const ENTROPY_ARG_TOL: f64 = 1e-6;
/// Node budget for the exact searches in the k ≤ 6 sandwich.
const SANDWICH_BUDGET: u64 = 300_000;
const TRINOMIAL_SAMPLES: usize = 5_000;
const DIRECT_PRODUCT_PAIRS: usize = 24;
const SEED: u64 = 0x5eed_2024;

type Q = BigRational;
type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn q(v: u128) -> Q {
    Q::from_integer(BigInt::from(v))
}

/// `s(1) = 0`, `s(n+1) = s(n) + ⌊log₂ n⌋ + 2`.
fn s(n: usize) -> usize {
    let mut acc = 0;
    for t in 1..n {
        acc += (usize::BITS - 1 - t.leading_zeros()) as usize + 2;
    }
    acc
}

fn binom(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    (0..r).fold(1u128, |acc, t| acc * (n - t) as u128 / (t + 1) as u128)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// `((1 1),(0 1)) ⊗ J_n`, written out entrywise.
fn upper_block(n: usize) -> BooleanMatrix {
    BooleanMatrix::from_fn(2 * n, 2 * n, |i, j| !(i >= n && j < n)).unwrap()
}

fn c1_triangular_exact() -> Outcome {
    let start = Instant::now();
    let mut seen = Vec::new();
    for n in 2..=8 {
        let a = triangular(n).map_err(err)?;
        let r = exact_or2(&a).map_err(err)?;
        r.covering.validate(&a).map_err(err)?;
        ensure(r.optimal && r.value == s(n) && r.covering.cost() == s(n), || {
            format!("n={n}: got {} (optimal={}), want {}", r.value, r.optimal, s(n))
        })?;
        seen.push(r.value);
    }
    let t = start.elapsed();
    ensure(t < TRIANGULAR_LIMIT, || format!("took {t:?}"))?;
    Ok(format!("values {seen:?} in {t:.1?}"))
}

fn c2_fractional_tightness() -> Outcome {
    for n in 2..=8 {
        let a = triangular(n).map_err(err)?;
        let lp = build_cover_lp(&a, true).map_err(err)?;
        let sol = solve_lp(&lp.lp).map_err(err)?;
        let want = q(s(n) as u128);
        ensure(sol.objective == want, || {
            format!("n={n}: primal {} want {want}", sol.objective)
        })?;
        let cov = lp.covering(&sol);
        ensure(fractional_cost(&a, &cov).map_err(err)? == want, || {
            format!("n={n}: covering cost mismatch")
        })?;
        let (dual, y) = solve_dual(&a, true).map_err(err)?;
        let total: Q = y.values().cloned().sum();
        ensure(dual == want && total == want, || {
            format!("n={n}: dual {dual}, sum {total}")
        })?;
    }
    Ok("primal = dual = s(n) for n = 2..8".into())
}

fn c3_certificate() -> Outcome {
    let mut t18 = Duration::ZERO;
    for n in 2..=18 {
        let start = Instant::now();
        let a = triangular(n).map_err(err)?;
        let cert = triangular_certificate(n).map_err(err)?;
        let total = cert.total();
        ensure(total == q(s(n) as u128), || format!("n={n}: total {total}"))?;
        // an entry sum over rows {i} x cols C never exceeds 1 + |C| on its own
        for i in 0..n {
            let row: Q = (0..n).map(|j| cert.get(i, j)).sum();
            let support = (i + 1..n).count();
            ensure(row <= q(1 + support as u128), || {
                format!("n={n}: row {i} sums to {row}")
            })?;
        }
        let report = verify_certificate(&a, &cert).map_err(err)?;
        ensure(report.feasible && report.value == total, || {
            format!("n={n}: feasible={} violation={:?}", report.feasible, report.violation)
        })?;
        if n == 18 {
            t18 = start.elapsed();
        }
    }
    ensure(t18 < CERTIFICATE_LIMIT, || format!("n=18 took {t18:?}"))?;
    Ok(format!("feasible with total s(n) for n = 2..18; n=18 in {t18:.1?}"))
}

/// `C(k−x−y, ℓ−x)/C(k, ℓ)` with `ℓ = x + ⌈(k−x−y)/2⌉`; for even `k−x−y`
/// this is `C(2z,z)/C(k,x+z)`.
fn density(k: usize, x: usize, y: usize) -> (usize, Q) {
    let r = k - x - y;
    let ell = x + r.div_ceil(2);
    (
        ell,
        Q::new(BigInt::from(binom(r, ell - x)), BigInt::from(binom(k, ell))),
    )
}

/// Minimum over disjoint pairs of the fraction of `ℓ`-sets covering them.
fn counted_density(k: usize, x: usize, y: usize, ell: usize) -> Q {
    let sets: Vec<u32> = (0u32..1 << k).filter(|m| m.count_ones() as usize == ell).collect();
    let xs: Vec<u32> = (0u32..1 << k).filter(|m| m.count_ones() as usize == x).collect();
    let ys: Vec<u32> = (0u32..1 << k).filter(|m| m.count_ones() as usize == y).collect();
    let mut min = usize::MAX;
    for &a in &xs {
        for &b in ys.iter().filter(|&&b| a & b == 0) {
            let hit = sets.iter().filter(|&&s| s & a == a && s & b == 0).count();
            min = min.min(hit);
        }
    }
    Q::new(BigInt::from(min), BigInt::from(sets.len()))
}

fn c4_greedy_size() -> Outcome {
    let mut runs = 0;
    for k in 0..=12 {
        for x in 0..=k {
            for y in 0..=x.min(k - x) {
                let (ell, gamma) = density(k, x, y);
                if k <= 7 {
                    ensure(counted_density(k, x, y, ell) == gamma, || {
                        format!("density oracle k={k} x={x} y={y}")
                    })?;
                }
                let bc = disjointness_block_cover(k, x, y).map_err(err)?;
                let universe = binom(k, x) * binom(k - x, y);
                ensure(bc.universe as u128 == universe, || {
                    format!("k={k} x={x} y={y}: universe {}", bc.universe)
                })?;
                bc.covering
                    .validate(&kneser_submatrix(k, x, y).map_err(err)?)
                    .map_err(err)?;
                // ⌈(1/γ) ln⁺(γ|U|)⌉ in binary64, 1/γ exact
                let mass = &gamma * q(universe);
                let head = if mass <= Q::one() {
                    0
                } else {
                    (mass.to_f64().unwrap().ln() / gamma.to_f64().unwrap()).ceil() as u128
                };
                let bound = q(head) + gamma.recip();
                let size = bc.covering.len();
                ensure(q(size as u128) <= bound, || {
                    format!("k={k} x={x} y={y}: size {size} > {bound}")
                })?;
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} block runs, zero violations"))
}

fn c5_cost_chain() -> Outcome {
    let mut runs = 0;
    for k in 0..=12 {
        for x in 0..=k {
            for y in (0..=x.min(k - x)).filter(|y| (k - x - y) % 2 == 0) {
                let z = (k - x - y) / 2;
                let n = binom(k, x + z) as f64 / binom(2 * z, z) as f64 * (1.0 + k as f64 * 4f64.ln()) + 1.0;
                let bound = 2.0 * binom(x + z, z) as f64 * n;
                let cost = disjointness_block_cover(k, x, y).map_err(err)?.covering.cost();
                ensure(cost as f64 <= bound, || {
                    format!("k={k} x={x} y={y}: cost {cost} > {bound}")
                })?;
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} even-parity blocks within bound"))
}

fn mu_oracle(k: usize, x: usize, y: usize) -> Q {
    (x..=k - y)
        .map(|ell| q(binom(ell, x)).recip() + q(binom(k - ell, y)).recip())
        .min()
        .unwrap()
}

fn c6_fractional_blocks() -> Outcome {
    let mut identities = 0;
    for k in 0..=12 {
        for x in 0..=k {
            for y in 0..=k - x {
                for ell in x..=k - y {
                    ensure(trinomial_identity_check(k, x, y, ell).map_err(err)?, || {
                        format!("identity fails at k={k} x={x} y={y} ell={ell}")
                    })?;
                    identities += 1;
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..TRINOMIAL_SAMPLES {
        let k = rng.gen_range(13..=30);
        let x = rng.gen_range(0..=k);
        let y = rng.gen_range(0..=k - x);
        let ell = rng.gen_range(x..=k - y);
        let lhs = binom(k, x) * binom(k - x, y) * binom(k - x - y, ell - x);
        let rhs = binom(k, ell) * binom(ell, x) * binom(k - ell, y);
        ensure(lhs == rhs, || format!("oracle mismatch k={k} x={x} y={y} ell={ell}"))?;
        ensure(trinomial_identity_check(k, x, y, ell).map_err(err)?, || {
            format!("identity fails at k={k} x={x} y={y} ell={ell}")
        })?;
        identities += 1;
    }

    for k in 0..=10 {
        for x in 0..=k {
            for y in 0..=k - x {
                let mu = mu_oracle(k, x, y);
                ensure(mu_star(k, x, y).map_err(err)? == mu, || {
                    format!("mu* mismatch k={k} x={x} y={y}")
                })?;
                let eta = eta_covering(k, x, y, ell_star(k, x, y).map_err(err)?).map_err(err)?;
                let a = kneser_submatrix(k, x, y).map_err(err)?;
                let cost = fractional_cost(&a, &eta).map_err(err)?;
                let want = &mu * q(binom(k, x) * binom(k - x, y));
                ensure(cost == want, || {
                    format!("k={k} x={x} y={y}: eta cost {cost}, want {want}")
                })?;
            }
        }
    }

    let (mut solved, mut bounded) = (0, 0);
    for k in 0..=6 {
        for x in 0..=k {
            for y in 0..=k - x {
                let a = kneser_submatrix(k, x, y).map_err(err)?;
                let low = mu_oracle(k, x, y) * q(a.ones_count() as u128);
                let r = exact_or2_with_budget(&a, SANDWICH_BUDGET).map_err(err)?;
                r.covering.validate(&a).map_err(err)?;
                ensure(low <= q(r.lower_bound as u128) && r.lower_bound <= r.value, || {
                    format!(
                        "k={k} x={x} y={y}: mu*|U|={low}, certified {}, found {}",
                        r.lower_bound, r.value
                    )
                })?;
                if r.optimal {
                    solved += 1;
                } else {
                    bounded += 1;
                }
            }
        }
    }
    Ok(format!(
        "{identities} identities; eta cost exact for k <= 10; sandwich {solved} solved + {bounded} by certified bound"
    ))
}

fn c7_entropy() -> Outcome {
    let (arg, value) = entropy_exponent();
    let want = (9.0f64 / 4.0).log2();
    ensure((value - want).abs() <= ENTROPY_VALUE_TOL, || {
        format!("value {value}, want {want}")
    })?;
    ensure((arg - 1.0 / 9.0).abs() <= ENTROPY_ARG_TOL, || format!("argmax {arg}"))?;
    Ok(format!("max {value:.12} at {arg:.9}"))
}

fn c8_example_networks() -> Outcome {
    let b = upper_block(4);
    let (n19, n20) = (net19(), net20());
    ensure(n19.express().map_err(err)? == b, || "net19 does not express B".into())?;
    ensure(n20.express().map_err(err)? == b, || "net20 does not express B".into())?;
    ensure(n19.size() == 19 && n20.size() == 20, || {
        format!("sizes {} {}", n19.size(), n20.size())
    })?;
    let (p19, p20) = (n19.depth_profile().map_err(err)?, n20.depth_profile().map_err(err)?);
    ensure(p19 == (3, 3) && p20 == (2, 2), || {
        format!("depth profiles {p19:?} {p20:?}")
    })?;
    let r = exact_or2(&b).map_err(err)?;
    ensure(r.optimal && r.value == 20, || {
        format!("OR2(B) = {} (optimal={})", r.value, r.optimal)
    })?;
    Ok("sizes 19/20, depths (3,3)/(2,2), OR2(B) = 20".into())
}

fn c9_family() -> Outcome {
    for n in 1..=8 {
        let net = family(n).map_err(err)?;
        ensure(net.express().map_err(err)? == upper_block(n), || {
            format!("n={n}: wrong matrix")
        })?;
        ensure(net.size() == 4 * n + 1, || format!("n={n}: {} edges", net.size()))?;
    }
    Ok("4n+1 edges for n = 1..8".into())
}

fn random_matrix(rng: &mut ChaCha8Rng) -> BooleanMatrix {
    loop {
        let (r, c) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let cells: Vec<bool> = (0..r * c).map(|_| rng.gen_bool(0.6)).collect();
        let a = BooleanMatrix::from_fn(r, c, |i, j| cells[i * c + j]).unwrap();
        if a.ones_count() > 0 {
            return a;
        }
    }
}

fn c10_direct_product() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut edges = 0;
    for p in 0..DIRECT_PRODUCT_PAIRS {
        let k = random_matrix(&mut rng);
        let m = random_matrix(&mut rng);
        let km = kronecker(&k, &m).map_err(err)?;
        let net = covering_to_depth2(&exact_or2(&km).map_err(err)?.covering).map_err(err)?;
        let rep = verify_direct_product(&k, &m, &net).map_err(err)?;
        let bad_edges = rep.edges.iter().filter(|e| !e.ok || e.w_prime > Q::one()).count();
        let bad_subs = rep.subnetworks.iter().filter(|s| !s.expresses).count();
        ensure(bad_edges == 0 && bad_subs == 0, || {
            format!("pair {p}: {bad_edges} edges, {bad_subs} subnetworks")
        })?;
        ensure(rep.subnetworks.len() == k.ones_count(), || {
            format!("pair {p}: subnetwork count")
        })?;
        let total = q(net.size() as u128);
        ensure(total >= rep.product && rep.chain_holds(), || {
            format!("pair {p}: |E|={} < {}", net.size(), rep.product)
        })?;
        let rank = exact_boolean_rank(&k).map_err(err)?.value;
        ensure(rep.rk_star >= Q::one() && rep.rk_star <= q(rank as u128), || {
            format!("pair {p}: rk* {}", rep.rk_star)
        })?;
        edges += net.size();
    }
    Ok(format!(
        "{DIRECT_PRODUCT_PAIRS} pairs, {edges} edges checked, zero violations"
    ))
}

fn c11_regex() -> Outcome {
    for n in 2..=64 {
        let r = divide_and_conquer_regex(n).map_err(err)?;
        ensure(r.alphabetic_length() == s(n), || {
            format!("n={n}: length {}", r.alphabetic_length())
        })?;
        let want: BTreeSet<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        ensure(r.words() == want, || format!("n={n}: wrong language"))?;
    }
    let l4 = TwoLetterLanguage::triangular(4).map_err(err)?;
    let opt = optimal_regex_length(&l4).map_err(err)?;
    ensure(opt.exact && opt.length == 8 && opt.regex.denotes(&l4), || {
        format!("L_4 length {}", opt.length)
    })?;
    Ok(format!("lengths s(n) for n <= 64; L_4 optimum 8 ({})", opt.regex))
}

fn c12_sweep() -> Outcome {
    let start = Instant::now();
    let mut costs = Vec::new();
    for k in 6..=12 {
        let fc = disjointness_full_cover(k).map_err(err)?;
        fc.covering.validate(&disjointness(k).map_err(err)?).map_err(err)?;
        let c = fc.cost();
        let bound = (9.0f64 / 4.0).powi(k as i32) * ((k + 1) as f64).powi(4);
        ensure(c as f64 <= bound, || format!("k={k}: c={c} > {bound:.0}"))?;
        costs.push(format!("c({k})={c}"));
    }
    let t = start.elapsed();
    ensure(t < SWEEP_LIMIT, || format!("took {t:?}"))?;
    Ok(format!("{} in {t:.1?}", costs.join(" ")))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("triangular exact value", c1_triangular_exact),
        ("fractional tightness", c2_fractional_tightness),
        ("triangular certificate", c3_certificate),
        ("greedy size bound", c4_greedy_size),
        ("block cost chain", c5_cost_chain),
        ("fractional block coverings", c6_fractional_blocks),
        ("entropy optimum", c7_entropy),
        ("example networks", c8_example_networks),
        ("4n+1 family", c9_family),
        ("direct product chain", c10_direct_product),
        ("regular expressions", c11_regex),
        ("disjointness sweep", c12_sweep),
    ];
    // optional criterion numbers on the command line restrict the run
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    let mut ran = 0;
    for (idx, (name, run)) in criteria.iter().enumerate() {
        if !only.is_empty() && !only.contains(&(idx + 1)) {
            continue;
        }
        ran += 1;
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let t = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail} [{t:.1?}]", idx + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {why} [{t:.1?}]", idx + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", ran - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
