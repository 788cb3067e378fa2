//! Cross-checks between the analytic criteria and exhaustive counting.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use pff_core::fpoly::factor_xn_minus_1;
use pff_core::pff::{self, ElementTable};
use pff_core::sieve::{self, BoundForm, PartitionStrategy};
use pff_core::{arith, certify, BaseField, CertifyConfig, FPoly, PffContext, PolyRing, SearchConfig, SearchMode, Status};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn pairs_up_to(bound: u128, n_min: u32) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for q in (2..=bound as u64).filter(|&q| arith::prime_power(q).is_ok()) {
        let mut n = n_min;
        while (q as u128).pow(n) <= bound {
            out.push((q, n as u64));
            n += 1;
        }
    }
    out
}

fn has_pff(q: u64, n: u64) -> bool {
    let config = SearchConfig { first_budget: 200_000, ..SearchConfig::default() };
    !pff::search_pff(q, n as usize, SearchMode::First, &config).unwrap().polynomials.is_empty()
}

/// Every criterion that claims existence must agree with search.
#[test]
fn passing_criteria_are_confirmed_by_search() {
    let mut claims = 0;
    for (q, n) in pairs_up_to(100_000, 3) {
        let base = BaseField::new(q).unwrap();
        let profile = factor_xn_minus_1(&base, n);
        let qdata = sieve::compute_q(q, n).unwrap();
        let mut passed = Vec::new();
        let strategies = [PartitionStrategy::AdditiveOnly, PartitionStrategy::PrimesBelowQ]
            .into_iter()
            .chain((1..=qdata.q.factors.len()).map(PartitionStrategy::LargestSieving));
        for strategy in strategies {
            let part = sieve::choose_partition(&qdata, strategy);
            for form in [BoundForm::Exact, BoundForm::Refined, BoundForm::Basic] {
                if sieve::key_ineq(&profile, &part, form).is_ok_and(|k| k.pass) {
                    passed.push(format!("{strategy:?}/{form:?}"));
                }
            }
        }
        if sieve::search_decompositions(&qdata, &profile).is_some() {
            passed.push("decomposition".into());
        }
        let ring = PolyRing::new(&base);
        let target = sieve::reduction_target(&base, n);
        let w_e = 1u128 << profile.factors().iter().filter(|f| ring.divides(f, &target)).count();
        if sieve::nosieve_positive(q, n, qdata.q.w(), w_e, w_e) {
            passed.push("nosieve".into());
        }
        if !passed.is_empty() {
            claims += 1;
            assert!(has_pff(q, n), "({q},{n}) claimed by {passed:?} but search finds nothing");
        }
    }
    assert!(claims > 20);
}

fn theta_poly(q: u64, factors: &[FPoly], g: &FPoly, ring: &PolyRing<'_>) -> BigRational {
    factors.iter().filter(|f| ring.divides(f, g)).fold(BigRational::one(), |acc, f| {
        let norm = BigInt::from(q).pow(f.degree() as u32);
        acc * BigRational::new(&norm - 1, norm)
    })
}

/// `N(m, g, h) >= theta(m) Theta(g) Theta(h) q^{n/2} (q^{n/2} - 2 W(m) W(g) W(h))`.
#[test]
fn usual_lower_bound_is_sound() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for (q, n) in pairs_up_to(2000, 2) {
        let ctx = PffContext::for_pair(q, n as usize).unwrap();
        let table = ElementTable::build(&ctx, 2000).unwrap();
        let ring = PolyRing::new(ctx.tower().base());
        let factors = ctx.freeness().factors().to_vec();
        let n1 = ctx.group().value;
        let divisors: Vec<u128> = (1..=n1).filter(|d| n1 % d == 0).collect();
        for _ in 0..8 {
            let m = divisors[rng.gen_range(0..divisors.len())];
            let mut pick = || factors.iter().filter(|_| rng.gen_bool(0.5)).fold(FPoly::one(), |a, f| ring.mul(&a, f));
            let (g, h) = (pick(), pick());
            let count = table.brute_n(&ctx, m, &g, &h).unwrap();
            let mf = arith::factor(m).unwrap().radical_factorization();
            let theta = BigRational::new(BigInt::from(mf.phi()), BigInt::from(mf.value));
            let c = theta * theta_poly(q, &factors, &g, &ring) * theta_poly(q, &factors, &h, &ring);
            let wg = 1u128 << factors.iter().filter(|f| ring.divides(f, &g)).count();
            let wh = 1u128 << factors.iter().filter(|f| ring.divides(f, &h)).count();
            assert!(
                sieve::usual_lower_bound_holds(count, &c, q, n, mf.w() * wg * wh),
                "({q},{n}) m={m} g={g} h={h} N={count}"
            );
        }
    }
}

#[test]
fn certificates_agree_with_search() {
    let config = CertifyConfig::default();
    for (q, n) in pairs_up_to(20_000, 1) {
        let cert = certify(q, n, &config).unwrap();
        assert_ne!(cert.status, Status::Undecided, "({q},{n})");
        let found = n < 3 || has_pff(q, n);
        assert_eq!(cert.status == Status::Pff, found, "({q},{n}) {:?}", cert.method);
        if cert.status == Status::NotPff {
            assert!(matches!(cert.method, pff_core::Method::ExceptionList | pff_core::Method::DirectSearch));
        }
        if cert.method == pff_core::Method::LemmaPrimeN {
            assert!(cert.external_axiom);
        }
    }
}

#[test]
fn exceptions_have_no_pff_polynomials_by_count() {
    for (q, n) in sieve::EXCEPTIONS {
        let out = pff::search_pff(q, n as usize, SearchMode::Count, &SearchConfig::default()).unwrap();
        assert_eq!(out.count, 0, "({q},{n})");
    }
}
