//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints its `PASS`/`FAIL` line (plus per-row detail) under a
//! plain `cargo test`. The process fails if any criterion fails.
//! Pass criterion names (e.g. `c7`) as arguments to run a subset.

use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use pff_core::arith::{self, c_bound, check_primorial_bound, PrimeFilter};
use pff_core::catalog::{self, RTableRow};
use pff_core::charsum::{CharacterTable, ComplexVal, MulChar};
use pff_core::fpoly::{factor_xn_minus_1, format_poly, parse_poly};
use pff_core::pff::{self, primitive_polynomials, verify_pff_polynomial, ElementTable};
use pff_core::sieve::{self, certify_many, eval_decomposition, sieve_inequality_sides, to_f64, EXCEPTIONS};
use pff_core::{
    BaseField, CertifyConfig, FPoly, Factorization, PffContext, PolyRing, SearchConfig, SearchMode, SieveAtom,
    SieveDecomposition, Status,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn verdict(id: u32, title: &str, pass: bool, started: Instant) -> bool {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("{tag} criterion {id}: {title} ({:.1} s)", started.elapsed().as_secs_f64());
    pass
}

fn prime_powers_up_to(limit: u64) -> Vec<u64> {
    (2..=limit).filter(|&q| arith::prime_power(q).is_ok()).collect()
}

/// All `(q, n)` with `n >= n_min` and `q^n <= bound`.
fn fields_up_to(bound: u128, n_min: u32) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for q in prime_powers_up_to(bound as u64) {
        let mut n = n_min.max(1);
        while (q as u128).pow(n) <= bound {
            out.push((q, n));
            n += 1;
        }
    }
    out
}

fn c1_exception_reproduction() -> bool {
    let started = Instant::now();
    let config = SearchConfig::default();
    let pairs = fields_up_to(5000, 3);
    let mut failures = Vec::new();
    let mut none_found = Vec::new();
    for &(q, n) in &pairs {
        let out = pff::search_pff(q, n as usize, SearchMode::First, &config).unwrap();
        if out.polynomials.is_empty() {
            none_found.push((q, n as u64));
        }
    }
    none_found.sort();
    let mut expected = EXCEPTIONS.to_vec();
    expected.sort();
    if none_found != expected {
        failures.push(format!("pairs without PFF elements: {none_found:?}"));
    }
    println!("  {} pairs searched; no PFF element for {none_found:?}", pairs.len());
    let secs = started.elapsed().as_secs_f64();
    if secs >= 60.0 {
        failures.push(format!("runtime {secs:.1} s exceeds 60 s"));
    }
    for f in &failures {
        println!("  {f}");
    }
    verdict(1, "exceptional pairs are exactly the five listed ones", failures.is_empty(), started)
}

fn c2_polynomial_tables() -> bool {
    let started = Instant::now();
    let mut all_ok = true;
    for entry in catalog::known_pff_polynomials() {
        let base = Arc::new(BaseField::new(entry.q).unwrap());
        if entry.corrupt {
            let config = SearchConfig { first_budget: 100_000_000, ..SearchConfig::default() };
            let out = pff::search_pff(entry.q, entry.n, SearchMode::First, &config).unwrap();
            let ok = match out.polynomials.first() {
                Some(f) => verify_pff_polynomial(Arc::clone(&base), entry.n, f).unwrap().is_pff(),
                None => false,
            };
            let found = out.polynomials.first().map(|f| format_poly(&base, f)).unwrap_or_default();
            println!("  {} ({},{}) printed {} is corrupt; searched {found}", ok_tag(ok), entry.q, entry.n, entry.text);
            all_ok &= ok;
            continue;
        }
        let f = parse_poly(&base, entry.text).unwrap();
        let (ok, note) = match verify_pff_polynomial(Arc::clone(&base), entry.n, &f) {
            Ok(v) if v.is_pff() => (true, String::new()),
            Ok(v) => (
                false,
                format!(
                    "primitive={} free={} inverse_free={}",
                    v.is_primitive, v.is_free, v.inverse_free
                ),
            ),
            Err(e) => (false, e.to_string()),
        };
        let mut line = format!("  {} ({},{}) {}", ok_tag(ok), entry.q, entry.n, entry.text);
        if !ok {
            let found = pff::search_pff(entry.q, entry.n, SearchMode::First, &SearchConfig::default())
                .ok()
                .and_then(|o| o.polynomials.first().map(|g| format_poly(&base, g)));
            line += &format!(": {note}; a PFF polynomial of this degree is {}", found.unwrap_or("?".into()));
        }
        println!("{line}");
        all_ok &= ok;
    }
    let secs = started.elapsed().as_secs_f64();
    if secs >= 600.0 {
        println!("  runtime {secs:.1} s exceeds 10 min");
        all_ok = false;
    }
    verdict(2, "every tabulated polynomial verifies as PFF", all_ok, started)
}

fn ok_tag(ok: bool) -> &'static str {
    if ok {
        "ok  "
    } else {
        "BAD "
    }
}

fn c3_counting_cross_checks() -> bool {
    let started = Instant::now();
    let cubics = primitive_polynomials(&PffContext::for_pair(4, 3).unwrap());
    let quartics = primitive_polynomials(&PffContext::for_pair(5, 4).unwrap());
    let both = quartics.iter().filter(|f| f.coeff(3) != 0 && f.coeff(1) != 0).count();
    println!(
        "  primitive cubics over GF(4): {}; primitive quartics over GF(5): {}, with x^3 and x terms: {both}",
        cubics.len(),
        quartics.len()
    );
    verdict(3, "primitive polynomial counts 12, 48, 32", cubics.len() == 12 && quartics.len() == 48 && both == 32, started)
}

fn charsum_suite() -> Vec<(u64, usize)> {
    vec![(2, 4), (2, 6), (2, 8), (2, 10), (3, 3), (3, 4), (3, 6), (4, 3), (4, 4), (5, 2), (5, 3), (7, 2), (8, 3), (9, 3), (11, 2), (13, 2), (16, 2), (25, 2), (31, 2), (43, 2)]
}

fn c4_character_sum_oracle() -> bool {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC4);
    let mut combos = 0;
    let mut bad = Vec::new();
    for (q, n) in charsum_suite() {
        let ctx = PffContext::for_pair(q, n).unwrap();
        assert!(ctx.tower().size() <= 2000);
        let et = ElementTable::build(&ctx, 2000).unwrap();
        let tb = CharacterTable::build(ctx, 2000).unwrap();
        let ctx = tb.ctx();
        let ring = PolyRing::new(ctx.tower().base());
        let n1 = tb.group_order();
        let divisors: Vec<u128> = (1..=n1).filter(|d| n1 % d == 0).collect();
        let factors = ctx.freeness().factors().to_vec();
        let xn1 = ctx.freeness().xn_minus_1().clone();
        for k in 0..4 {
            let m = match k {
                0 => n1,
                1 => 1,
                _ => *divisors.choose(&mut rng).unwrap(),
            };
            let pick = |rng: &mut ChaCha8Rng| {
                factors.iter().filter(|_| rng.gen_bool(0.5)).fold(FPoly::one(), |a, f| ring.mul(&a, f))
            };
            let (g, h) = if k == 0 { (xn1.clone(), xn1.clone()) } else { (pick(&mut rng), pick(&mut rng)) };
            let z = tb.n_formula(m, &g, &h).unwrap();
            let brute = et.brute_n(ctx, m, &g, &h).unwrap();
            combos += 1;
            let zv = ComplexVal::from(z);
            if zv.im.abs() >= 1e-6 || zv.nearest_integer() != brute as i128 {
                bad.push(format!("({q},{n}) m={m} g={g} h={h}: formula {z} brute {brute}"));
            }
        }
    }
    println!("  {combos} (q,n,m,g,h) combinations checked against brute force");

    let fields: Vec<(u64, u32)> = fields_up_to(1024, 1);
    let lemma_bad: Vec<String> = {
        use rayon::prelude::*;
        fields
            .par_iter()
            .flat_map_iter(|&(q, n)| gauss_kloosterman_checks(q, n as usize))
            .collect()
    };
    println!("  Gauss and Kloosterman identities checked on {} fields", fields.len());
    for b in bad.iter().chain(&lemma_bad) {
        println!("  {b}");
    }
    verdict(4, "character-sum formula and Gauss/Kloosterman lemmas", combos >= 60 && bad.is_empty() && lemma_bad.is_empty(), started)
}

fn gauss_kloosterman_checks(q: u64, n: usize) -> Vec<String> {
    let tb = CharacterTable::build(PffContext::for_pair(q, n).unwrap(), 1024).unwrap();
    let t = tb.ctx().tower();
    let size = tb.size() as f64;
    let n1 = tb.group_order();
    let mut rng = ChaCha8Rng::seed_from_u64(q * 1000 + n as u64);
    let nonzero = |rng: &mut ChaCha8Rng| loop {
        let a = t.random(rng);
        if !t.is_zero(&a) {
            break a;
        }
    };
    let mut bad = Vec::new();
    let zero = t.zero();
    for k in 0..n1 {
        let eta = MulChar { k };
        let g = tb.gauss(eta);
        if k != 0 && (g.norm_sqr() - size).abs() >= 1e-6 * size {
            bad.push(format!("({q},{n}) |G(eta_{k})|^2 = {}", g.norm_sqr()));
        }
        let (a, b) = (nonzero(&mut rng), nonzero(&mut rng));
        let kab = tb.kloosterman(&a, &b, eta);
        if kab.norm() > 2.0 * size.sqrt() + 1e-6 {
            bad.push(format!("({q},{n}) |K| = {} for eta_{k}", kab.norm()));
        }
        let alpha = nonzero(&mut rng);
        let lhs = tb.kloosterman(&alpha, &zero, eta);
        let rhs = tb.mul_char(eta, &alpha).unwrap().conj() * g;
        if (lhs - rhs).norm() >= 1e-6 * (1.0 + rhs.norm()) {
            bad.push(format!("({q},{n}) K(a,0;eta_{k}) = {lhs} but conj(eta)(a) G = {rhs}"));
        }
    }
    bad
}

fn random_decomposition(ctx: &PffContext, rng: &mut ChaCha8Rng) -> SieveDecomposition {
    let q = ctx.tower().q();
    let primes = ctx.group().primes();
    let factors = ctx.freeness().factors().to_vec();
    let mut core_primes = Vec::new();
    let mut atoms = Vec::new();
    for &l in &primes {
        match rng.gen_range(0..3) {
            0 => core_primes.push((l, 1)),
            1 => atoms.push(SieveAtom::Prime { value: l }),
            _ => {}
        }
    }
    let mut sides = [Vec::new(), Vec::new()];
    for (side, core) in sides.iter_mut().enumerate() {
        for f in &factors {
            match rng.gen_range(0..3) {
                0 => core.push(f.clone()),
                1 => atoms.push(SieveAtom::poly(q, f.clone(), side == 1)),
                _ => {}
            }
        }
    }
    atoms.shuffle(rng);
    let [f0, g0] = sides;
    SieveDecomposition { m0: Factorization::from_prime_powers(core_primes), f0, g0, atoms }
}

fn c5_sieve_inequality() -> bool {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC5);
    let fields = fields_up_to(2000, 2);
    let mut checked = 0;
    let mut violations = Vec::new();
    for &(q, n) in &fields {
        let ctx = PffContext::for_pair(q, n as usize).unwrap();
        let table = ElementTable::build(&ctx, 2000).unwrap();
        for _ in 0..50 {
            let d = random_decomposition(&ctx, &mut rng);
            let (lhs, rhs) = sieve_inequality_sides(&table, &ctx, &d).unwrap();
            checked += 1;
            if lhs < rhs {
                violations.push(format!("({q},{n}) r={}: {lhs} < {rhs}", d.r()));
            }
        }
    }
    println!("  {checked} decompositions over {} fields, {} violations", fields.len(), violations.len());
    for v in &violations {
        println!("  {v}");
    }
    verdict(5, "sieving inequality holds exactly", violations.is_empty(), started)
}

fn largest_primes_delta(primes: &[u128], t: usize) -> BigRational {
    primes[primes.len() - t..]
        .iter()
        .fold(BigRational::one(), |acc, &l| acc - BigRational::new(BigInt::one(), BigInt::from(l)))
}

fn check_r_row(row: &RTableRow) -> (bool, String) {
    let rc = row.recompute().unwrap();
    let show = |r: &Result<f64, String>| r.as_ref().map_or_else(|e| e.clone(), |v| format!("{v:.3}"));
    let mut line = format!(
        "({},{}) printed s={} rho={}/{} u={} R={} | recomputed s={} rho={}/{} u={}",
        row.q, row.n, row.s, row.rho.0, row.rho.1, row.u, row.r, rc.s, rc.rho.0, rc.rho.1, rc.u
    );
    line += &format!(
        " | R at printed params {} | R at recomputed params {}",
        show(&rc.r_at_printed),
        show(&rc.r_at_recomputed)
    );
    if row.t > 0 {
        line += &format!(" | delta {:.4} (printed {})", rc.delta, row.delta);
    }
    (rc.params_match(row) && rc.r_within(row, 0.005), line)
}

fn c6_table_golden_values() -> bool {
    let started = Instant::now();
    let mut all_ok = true;
    for row in catalog::r_table() {
        let (ok, line) = check_r_row(row);
        println!("  {} {line}", ok_tag(ok));
        all_ok &= ok;
    }

    let mut num = |label: &str, value: f64, target: f64, ok: bool| {
        println!("  {} {label} = {value:.5} (target {target})", ok_tag(ok));
        all_ok &= ok;
    };
    let within = |v: f64, t: f64| (v - t).abs() <= 0.001;

    let qd = sieve::compute_q(17, 16).unwrap();
    let profile = factor_xn_minus_1(&BaseField::new(17).unwrap(), 16);
    let factors = profile.factors();
    let sieving: Vec<u128> = qd.q.primes().into_iter().filter(|&l| l > 5).collect();
    let d = sieve::symmetric_decomposition(17, &qd, &profile, &sieving, &factors[..10]);
    let ev = eval_decomposition(17, 16, &d).unwrap();
    let (delta, big_delta) = (to_f64(&ev.delta), to_f64(&ev.big_delta));
    num("(17,16) delta", delta, 0.2595, delta > 0.2595 && within(delta, 0.2595));
    num("(17,16) Delta", big_delta, 59.79, within(big_delta, 59.79));
    num("(17,16) W(k0)", ev.w_core as f64, (1u64 << 22) as f64, ev.w_core == 1 << 22);

    let qd = sieve::compute_q(5, 16).unwrap();
    let primes = qd.q.primes();
    let delta = to_f64(&largest_primes_delta(&primes, 4));
    num("(5,16) delta (u=2, t=4)", delta, 0.8610, primes.len() == 6 && within(delta, 0.8610));

    let d = sieve::special_decomposition_2_21().unwrap();
    let ev = eval_decomposition(2, 21, &d).unwrap();
    let delta = to_f64(&ev.delta);
    num("(2,21) denominator", delta, 0.2838, within(delta, 0.2838));
    num("(2,21) R", ev.r_value, 1.963, within(ev.r_value, 1.963));
    verdict(6, "tabulated R values and decomposition numerics", all_ok, started)
}

fn c7_certifier_closure() -> bool {
    let started = Instant::now();
    let config = CertifyConfig {
        search: SearchConfig { first_budget: 100_000_000, ..SearchConfig::default() },
        ..CertifyConfig::default()
    };
    let pairs: Vec<(u64, u64)> =
        prime_powers_up_to(13).into_iter().flat_map(|q| (3..=24u64).map(move |n| (q, n))).collect();
    let results = certify_many(&pairs, &config);
    let mut bad = Vec::new();
    let mut methods = std::collections::BTreeMap::new();
    for (&(q, n), r) in pairs.iter().zip(&results) {
        match r {
            Ok(c) => {
                *methods.entry(format!("{:?}", c.method)).or_insert(0) += 1;
                let expect = if EXCEPTIONS.contains(&(q, n)) { Status::NotPff } else { Status::Pff };
                if c.status != expect {
                    bad.push(format!("({q},{n}) {:?} via {:?}", c.status, c.method));
                }
            }
            Err(e) => bad.push(format!("({q},{n}) error {e}")),
        }
    }
    println!("  {} pairs certified; methods {methods:?}", pairs.len());
    let secs = started.elapsed().as_secs_f64();
    if secs >= 900.0 {
        bad.push(format!("runtime {secs:.1} s exceeds 15 min"));
    }
    for b in &bad {
        println!("  {b}");
    }
    verdict(7, "certifier decides every pair with q <= 13, 3 <= n <= 24", bad.is_empty(), started)
}

fn c8_q_reduction_identity() -> bool {
    use rayon::prelude::*;
    let started = Instant::now();
    let fields: Vec<(u64, u32)> = fields_up_to(2500, 1)
        .into_iter()
        .filter(|&(q, n)| sieve::compute_q(q, n as u64).unwrap().r > 1)
        .collect();
    let bad: Vec<String> = fields
        .par_iter()
        .flat_map_iter(|&(q, n)| {
            let ctx = PffContext::for_pair(q, n as usize).unwrap();
            let table = ElementTable::build(&ctx, 2500).unwrap();
            let qd = sieve::compute_q(q, n as u64).unwrap();
            let r_phi = arith::phi(qd.r).unwrap();
            // freeness for 1 and x^n - 1 is invariant under multiplication by R-th roots of unity
            let divisors = [FPoly::one(), ctx.freeness().xn_minus_1().clone()];
            let mut bad = Vec::new();
            for f in &divisors {
                for g in &divisors {
                    let reduced = table.brute_n(&ctx, qd.q.value, f, g).unwrap();
                    let full = table.brute_n(&ctx, qd.group.value, f, g).unwrap();
                    if reduced * r_phi != qd.r * full {
                        bad.push(format!("({q},{n}) f={f} g={g}: {reduced}*{r_phi} != {}*{full}", qd.r));
                    }
                }
            }
            bad
        })
        .collect();
    println!("  identity checked on {} fields with R > 1", fields.len());
    for b in &bad {
        println!("  {b}");
    }
    verdict(8, "N(Q,.,.) phi(R) = R N(q^n-1,.,.)", bad.is_empty() && !fields.is_empty(), started)
}

fn c9_w_bound_lemmas() -> bool {
    let started = Instant::now();
    const LIMIT: usize = 1_000_000;
    // smallest prime factor sieve
    let mut spf = vec![0u32; LIMIT + 1];
    for i in 2..=LIMIT {
        if spf[i] == 0 {
            for j in (i..=LIMIT).step_by(i) {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
            }
        }
    }
    let mut bad = Vec::new();
    for m in 1..=LIMIT {
        let mut rest = m;
        let mut omega = 0;
        while rest > 1 {
            let p = spf[rest] as usize;
            while rest % p == 0 {
                rest /= p;
            }
            omega += 1;
        }
        let c = c_bound(m as u64);
        let w = 1u128 << omega;
        let cap_ok = if m % 2 == 1 { c.less_than(29, 10) } else { c.less_than(49, 10) };
        if !c.bounds_w(w, m as u128) || !cap_ok {
            bad.push(format!("m={m}: W={w} c={:.4}", c.to_f64()));
            if bad.len() > 10 {
                break;
            }
        }
    }
    let primorials = [
        ("omega >= 49, exponent 1/6", check_primorial_bound(49, 1, 6, PrimeFilter::All)),
        ("omega >= 52 without 3, exponent 4/25", check_primorial_bound(52, 4, 25, PrimeFilter::Omit(3))),
        ("omega >= 175 odd, exponent 3/25", check_primorial_bound(175, 3, 25, PrimeFilter::Omit(2))),
    ];
    println!("  W(m) <= c_m m^(1/4) with c_m < 4.9 (2.9 for odd m) for all m <= {LIMIT}: {}", bad.is_empty());
    for (label, ok) in primorials {
        println!("  {} primorial bound {label}", ok_tag(ok));
    }
    for b in &bad {
        println!("  {b}");
    }
    let pass = bad.is_empty() && primorials.iter().all(|p| p.1);
    verdict(9, "W bounds and primorial boundary checks", pass, started)
}

type Criterion = (&'static str, fn() -> bool);

const CRITERIA: &[Criterion] = &[
    ("c1", c1_exception_reproduction),
    ("c2", c2_polynomial_tables),
    ("c3", c3_counting_cross_checks),
    ("c4", c4_character_sum_oracle),
    ("c5", c5_sieve_inequality),
    ("c6", c6_table_golden_values),
    ("c7", c7_certifier_closure),
    ("c8", c8_q_reduction_identity),
    ("c9", c9_w_bound_lemmas),
];

fn main() -> std::process::ExitCode {
    // libtest flags such as --nocapture are accepted and ignored
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = Vec::new();
    let mut ran = 0;
    for &(name, run) in CRITERIA {
        if !filters.is_empty() && !filters.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        ran += 1;
        let id = &name[1..];
        let pass = std::panic::catch_unwind(run).unwrap_or_else(|_| {
            println!("FAIL criterion {id}: panicked");
            false
        });
        if !pass {
            failed.push(name);
        }
    }
    println!("acceptance: {} of {ran} criteria passed; failing: {failed:?}", ran - failed.len());
    if failed.is_empty() {
        std::process::ExitCode::SUCCESS
    } else {
        std::process::ExitCode::FAILURE
    }
}
