//! Cross-checks of the public API against independent brute-force oracles.

use midylab::jenkins::{jenkins_check, jenkins_check_gcd, JenkinsInstance};
use midylab::midy::{Direct, MidyDecider, MidyQuery, Ppl2, Ppl3, QuantifyOver};
use midylab::order::order_mod_naive;
use midylab::{factor, gcd, guel_triple, is_prime, midy_set, order_mod, period_digits, MidyError, Natural};

/// `d ∈ M_b(N)` straight from the definition: sum the `d` blocks of every
/// `x/N` as integers and test divisibility by `b^k - 1`.
fn brute_midy(b: Natural, n: Natural, d: Natural) -> bool {
    let l = order_mod_naive(b, n).unwrap();
    let k = (l / d) as u32;
    let block_mod = b.pow(k) - 1;
    (1..n).filter(|&x| gcd(x, n) == 1).all(|x| {
        let digits = period_digits(x, n, b).unwrap().digits;
        let sum: Natural = digits
            .chunks(k as usize)
            .map(|c| c.iter().fold(0, |acc, &g| acc * b + g as Natural))
            .sum();
        sum % block_mod == 0
    })
}

#[test]
fn deciders_match_integer_block_sums() {
    for b in [2 as Natural, 3, 5, 7, 10] {
        for n in (2..=150).filter(|&n| gcd(n, b) == 1) {
            let l = order_mod(b, n).unwrap();
            if l > 24 {
                continue;
            }
            for d in (2..=l).filter(|d| l % d == 0) {
                let truth = brute_midy(b, n, d);
                let q = MidyQuery::new(b, n, d).unwrap();
                assert_eq!(Ppl2.decide_query(&q).unwrap().holds, truth, "ppl2 b={b} n={n} d={d}");
                assert_eq!(Ppl3::default().decide_query(&q).unwrap().holds, truth, "ppl3 b={b} n={n} d={d}");
                assert_eq!(Direct.decide_query(&q).unwrap().holds, truth, "direct b={b} n={n} d={d}");
            }
        }
    }
}

#[test]
fn q_range_readings_agree_for_odd_moduli() {
    let over_d = Ppl3 {
        over: QuantifyOver::BlockCountDivisors,
    };
    for b in [2 as Natural, 3, 10] {
        for n in (3..=400).step_by(2).filter(|&n| gcd(n, b) == 1) {
            let l = order_mod(b, n).unwrap();
            for d in factor(l).unwrap().divisors().into_iter().filter(|&d| d > 1) {
                let q = MidyQuery::new(b, n, d).unwrap();
                assert_eq!(
                    over_d.decide_query(&q).unwrap().holds,
                    Ppl3::default().decide_query(&q).unwrap().holds,
                    "b={b} n={n} d={d}"
                );
            }
        }
    }
}

#[test]
fn gcd_triple_agrees_for_odd_moduli() {
    let mut applicable = 0;
    for b in [2 as Natural, 10] {
        for n in (3..=600).step_by(2).filter(|&n| gcd(n, b) == 1) {
            let l = order_mod(b, n).unwrap();
            for d in factor(l).unwrap().divisors().into_iter().filter(|&d| d > 1) {
                match guel_triple(b, n, d) {
                    Ok(t) => {
                        applicable += 1;
                        assert!(t.agrees(), "b={b} n={n} d={d}: {t:?}");
                        assert_eq!(t.in_midy_set, Direct.decide(b, n, d).unwrap().holds);
                    }
                    Err(MidyError::HypothesisNotApplicable(_)) => {}
                    Err(e) => panic!("b={b} n={n} d={d}: {e}"),
                }
            }
        }
    }
    assert!(applicable > 1000);
}

#[test]
fn midy_sets_are_upward_closed() {
    for b in [2 as Natural, 3, 8, 10, 16] {
        for n in (2..=1000).filter(|&n| gcd(n, b) == 1) {
            assert!(midy_set(b, n).unwrap().is_upward_closed(), "b={b} n={n}");
        }
    }
}

#[test]
fn jenkins_verdict_ignores_exponents() {
    let primes: Vec<Natural> = (3..60).filter(|&p| is_prime(p)).collect();
    for b in [2 as Natural, 10] {
        for d in 2..=12 {
            let eligible: Vec<Natural> = primes
                .iter()
                .copied()
                .filter(|&p| b % p != 0 && order_mod(b, p).unwrap() % d == 0)
                .collect();
            for (i, &p1) in eligible.iter().enumerate() {
                for &p2 in &eligible[i + 1..] {
                    let base = JenkinsInstance::new(b, d, &[(p1, 1), (p2, 1)]).unwrap();
                    let expected = jenkins_check(&base).unwrap();
                    for h in [[1, 2], [2, 1], [3, 3]] {
                        let inst = base.with_exponents(&h).unwrap();
                        assert_eq!(jenkins_check(&inst).unwrap(), expected);
                        assert_eq!(jenkins_check_gcd(&inst).unwrap(), expected);
                        let n = inst.modulus().unwrap();
                        if n < 5000 {
                            assert_eq!(Direct.decide(b, n, d).unwrap().holds, expected, "b={b} n={n} d={d}");
                        }
                    }
                }
            }
        }
    }
}
