#![allow(clippy::needless_range_loop)]

use condenlab::ownership::{
    dividend_flow, dividend_tax, ownership_by_series, ownership_by_solve, spectral_radius,
    ultimate_ownership, DividendRound, OwnershipNetwork,
};
use proptest::prelude::*;
use rust_decimal::prelude::ToPrimitive;
use rust_decimal::Decimal;
use rust_decimal_macros::dec;

/// Gaussian elimination with partial pivoting on `o (I - C) = d`.
fn eliminate(c: &[Vec<f64>], d: &[f64]) -> Vec<f64> {
    let n = d.len();
    // rows of (I - C)^T augmented with d
    let mut a: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut row: Vec<f64> = (0..n)
                .map(|i| if i == j { 1.0 } else { 0.0 } - c[i][j])
                .collect();
            row.push(d[j]);
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .unwrap();
        a.swap(col, pivot);
        for r in 0..n {
            if r != col {
                let f = a[r][col] / a[col][col];
                for k in col..=n {
                    a[r][k] -= f * a[col][k];
                }
            }
        }
    }
    (0..n).map(|r| a[r][n] / a[r][r]).collect()
}

/// Holdings with every column summing to at most 0.9, so the spectral
/// radius is at most 0.9. Stakes are in basis points.
fn network(sole_outsider: bool) -> impl Strategy<Value = OwnershipNetwork> {
    (2usize..7).prop_flat_map(move |n| {
        (
            prop::collection::vec(prop::collection::vec(0u32..100, n), n),
            prop::collection::vec(0u32..=100, n),
        )
            .prop_map(move |(raw, outside)| {
                let mut c = vec![vec![Decimal::ZERO; n]; n];
                let mut d = vec![Decimal::ZERO; n];
                for j in 0..n {
                    let col: u32 = (0..n).filter(|&i| i != j).map(|i| raw[i][j]).sum::<u32>().max(1);
                    let budget = 9000 * (outside[j] + 1) / 101;
                    let mut held = 0;
                    for i in (0..n).filter(|&i| i != j) {
                        let bp = raw[i][j] * budget / col;
                        held += bp;
                        c[i][j] = Decimal::new(bp as i64, 4);
                    }
                    let rest = 10_000 - held;
                    let direct = if sole_outsider { rest } else { rest * outside[j] / 100 };
                    d[j] = Decimal::new(direct as i64, 4);
                }
                OwnershipNetwork::new(c, d).unwrap()
            })
    })
}

fn as_f64(net: &OwnershipNetwork) -> (Vec<Vec<f64>>, Vec<f64>) {
    let c = net
        .holdings()
        .iter()
        .map(|r| r.iter().map(|x| x.to_f64().unwrap()).collect())
        .collect();
    let d = net.direct().iter().map(|x| x.to_f64().unwrap()).collect();
    (c, d)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]
    #[test]
    fn series_and_solve_agree(net in network(false)) {
        prop_assert!(spectral_radius(&net) < 0.95);
        let o = ultimate_ownership(&net).unwrap();
        prop_assert!(o.max_discrepancy() <= 1e-10);
        let (c, d) = as_f64(&net);
        for (got, want) in o.solve.iter().zip(eliminate(&c, &d)) {
            prop_assert!((got - want).abs() <= 1e-10);
            prop_assert!((-1e-12..=1.0 + 1e-10).contains(got));
        }
    }

    #[test]
    fn sole_outsider_owns_everything(net in network(true)) {
        for v in ownership_by_solve(&net).unwrap().iter().chain(&ownership_by_series(&net).unwrap()) {
            prop_assert!((v - 1.0).abs() <= 1e-10);
        }
    }

    #[test]
    fn more_direct_stake_never_lowers_ownership(net in network(false), j in 0usize..6, bump in 1i64..50) {
        let j = j % net.len();
        let stake = net.direct()[j] + Decimal::new(bump, 4);
        if let Ok(richer) = net.with_direct(j, stake) {
            let before = ownership_by_solve(&net).unwrap();
            let after = ownership_by_solve(&richer).unwrap();
            prop_assert!(after[j] >= before[j] - 1e-12);
        }
    }

    #[test]
    fn dividend_flows_conserve_money(
        net in network(false),
        amounts in prop::collection::vec((0i64..1_000_000, 0i64..1_000_000), 6),
    ) {
        let n = net.len();
        let round = DividendRound {
            ops_profit: amounts[..n].iter().map(|a| Decimal::new(a.0, 2)).collect(),
            declared: amounts[..n].iter().map(|a| Decimal::new(a.1, 2)).collect(),
        };
        let flow = dividend_flow(&net, &round).unwrap();
        prop_assert_eq!(flow.accounted(), round.ops_profit.iter().copied().sum::<Decimal>());
    }
}

#[test]
fn single_stake_against_elimination() {
    let net = OwnershipNetwork::three_banks()
        .with_direct(1, Decimal::ZERO)
        .unwrap()
        .with_direct(2, Decimal::ZERO)
        .unwrap();
    let (c, d) = as_f64(&net);
    let want = eliminate(&c, &d);
    let got = ultimate_ownership(&net).unwrap();
    for k in 0..3 {
        assert!((got.solve[k] - want[k]).abs() < 1e-12);
        assert!((got.series[k] - want[k]).abs() < 1e-10);
    }
    assert!((want[0] - 0.342_281_879).abs() < 1e-9);
    assert!((want[1] - 0.328_859_060).abs() < 1e-9);
}

/// Pays every declared dividend out of the payer's account into the
/// holders' accounts, one payment at a time.
fn replay(net: &OwnershipNetwork, round: &DividendRound) -> (Vec<Decimal>, Decimal, Decimal) {
    let n = net.len();
    let mut banks = round.ops_profit.clone();
    let mut outsider = Decimal::ZERO;
    let mut others = Decimal::ZERO;
    for payer in 0..n {
        let amount = round.declared[payer];
        banks[payer] -= amount;
        let mut paid = Decimal::ZERO;
        for holder in 0..n {
            let share = net.holdings()[holder][payer] * amount;
            banks[holder] += share;
            paid += share;
        }
        let direct = net.direct()[payer] * amount;
        outsider += direct;
        others += amount - paid - direct;
    }
    (banks, outsider, others)
}

#[test]
fn asymmetric_round_matches_replay() {
    let net = OwnershipNetwork::three_banks();
    let round = DividendRound {
        ops_profit: vec![dec!(2); 3],
        declared: vec![dec!(100), dec!(0), dec!(0)],
    };
    let flow = dividend_flow(&net, &round).unwrap();
    let (banks, outsider, others) = replay(&net, &round);
    let nets: Vec<Decimal> = flow.banks.iter().map(|b| b.net).collect();
    assert_eq!(nets, banks);
    assert_eq!(nets, vec![dec!(-98), dec!(51), dec!(51)]);
    assert_eq!(flow.outsider_receipts, outsider);
    assert_eq!(flow.other_receipts, others);
    assert_eq!(flow.accounted(), dec!(6));
}

#[test]
fn honest_dividends_are_taxable() {
    let round = DividendRound {
        ops_profit: vec![dec!(2), dec!(3), dec!(5)],
        declared: vec![dec!(2), dec!(3), dec!(5)],
    };
    let t = dividend_tax(&round, dec!(0.25)).unwrap();
    assert_eq!(t.tax, vec![dec!(0.5), dec!(0.75), dec!(1.25)]);
    assert!(t.insolvent.iter().all(|f| !f));
}

#[test]
fn fixture_is_the_three_bank_network() {
    let text = include_str!("../fixtures/three_banks.txt");
    assert_eq!(OwnershipNetwork::parse(text).unwrap(), OwnershipNetwork::three_banks());
}
