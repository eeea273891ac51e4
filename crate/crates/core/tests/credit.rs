use condenlab::credit::{bankruptcy_fraction, credit_spiral, refinance_game, RefinanceGameConfig};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use proptest::prelude::*;

fn config(interest_pct: f64, n: usize, seed: u64) -> RefinanceGameConfig {
    RefinanceGameConfig {
        n_borrowers: n,
        interest_pct,
        rounds: 1000,
        refinance: false,
        money_growth_pct: 0.0,
        seed,
    }
}

proptest! {
    #[test]
    fn bankruptcy_fraction_rises_concavely(x in 0.0f64..1e4, h in 1e-2f64..100.0) {
        let y0 = bankruptcy_fraction(x).unwrap();
        let y1 = bankruptcy_fraction(x + h).unwrap();
        let y2 = bankruptcy_fraction(x + 2.0 * h).unwrap();
        prop_assert!(y1 > y0);
        prop_assert!(y1 < 100.0);
        prop_assert!(y1 - y0 >= y2 - y1 - 1e-12 * y2);
    }

    /// `1 - y/100` cancels as `y` nears 100, so the error bound carries the
    /// condition factor `1 + x/100`.
    #[test]
    fn lender_breaks_even_on_what_returns(x in 0.0f64..1e4) {
        let y = bankruptcy_fraction(x).unwrap();
        let lhs = (1.0 - y / 100.0) * (1.0 + x / 100.0);
        prop_assert!((lhs - 1.0).abs() <= 4.0 * f64::EPSILON * (1.0 + x / 100.0));
    }
}

/// The identity evaluated exactly on the returned `y`, rounded once.
#[test]
fn identity_within_one_ulp_on_the_grid() {
    let hundred = BigRational::from_integer(100.into());
    for x in [0.0, 1.0, 3.0, 5.0, 10.0, 50.0, 100.0, 1000.0] {
        let y = BigRational::from_float(bankruptcy_fraction(x).unwrap()).unwrap();
        let xr = BigRational::from_float(x).unwrap();
        let one = BigRational::one();
        let lhs = ((&one - y / &hundred) * (&one + xr / &hundred)).to_f64().unwrap();
        let ulps = (lhs.to_bits() as i64 - 1f64.to_bits() as i64).abs();
        assert!(ulps <= 1, "x = {x}: {lhs}");
    }
}

#[test]
fn fraction_tends_to_one_hundred() {
    assert!(bankruptcy_fraction(1e12).unwrap() > 99.999_999);
}

#[test]
fn game_tracks_the_formula() {
    for x in [10.0, 50.0, 100.0, 300.0] {
        let want = bankruptcy_fraction(x).unwrap();
        let runs: Vec<f64> = (0..5)
            .map(|s| refinance_game(&config(x, 500, s)).unwrap().defaulted_money_fraction)
            .collect();
        let mean = runs.iter().sum::<f64>() / runs.len() as f64;
        assert!((mean - want).abs() < 3.0, "x = {x}: mean {mean} vs {want}");
    }
}

#[test]
fn lender_gain_shrinks_with_population() {
    let gain = |n: usize| {
        (0..5)
            .map(|s| refinance_game(&config(100.0, n, s)).unwrap().lender_net_gain_pct.abs())
            .sum::<f64>()
            / 5.0
    };
    assert!(gain(2000) < 2.0);
}

#[test]
fn game_is_reproducible() {
    let cfg = config(40.0, 300, 17);
    assert_eq!(refinance_game(&cfg).unwrap(), refinance_game(&cfg).unwrap());
}

#[test]
fn ledger_rows_are_consistent() {
    let out = refinance_game(&config(25.0, 300, 3)).unwrap();
    let mut last_repaid = 0;
    for row in &out.rounds {
        assert!(row.repaid_principal >= last_repaid);
        last_repaid = row.repaid_principal;
        assert!(row.repaid_principal + row.defaulted_principal <= out.total_principal);
    }
    let last = out.rounds.last().unwrap();
    assert_eq!(last.repaid_principal + last.defaulted_principal, out.total_principal);
}

#[test]
fn refinancing_survives_only_with_growth() {
    let refi = |growth: f64| RefinanceGameConfig {
        refinance: true,
        money_growth_pct: growth,
        rounds: 50,
        ..config(3.0, 300, 8)
    };
    assert_eq!(refinance_game(&refi(3.0)).unwrap().defaulted_borrower_fraction, 0.0);
    assert_eq!(refinance_game(&refi(5.0)).unwrap().defaulted_borrower_fraction, 0.0);
    assert!(refinance_game(&refi(1.0)).unwrap().defaulted_borrower_fraction > 0.0);
}

#[test]
fn spiral_matches_direct_iteration() {
    let t = credit_spiral(0.05, 0.04, 50.0, 40).unwrap();
    let mut r = 0.05f64;
    for &got in &t.rates[1..] {
        r *= 1.0 + 50.0 * (r - 0.04).max(0.0);
        assert_eq!(got, r);
    }
    assert!(t.rates.windows(2).all(|p| p[1] > p[0]));
    assert!(t.diverged);
    let calm = credit_spiral(0.04, 0.04, 50.0, 40).unwrap();
    assert!(calm.rates.iter().all(|&r| r == 0.04));
    assert!(!calm.diverged);
}
