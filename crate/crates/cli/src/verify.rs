//! Replays the worked numbers of the model as named pass/fail checks.

use std::io::Write;
use std::str::FromStr;

use condenlab::banking::{lending_roi, money_multiplier, BankLedger};
use condenlab::condensation::{
    capital_share_exact, clothespin_sim, flow_scenario, marx_cycle, robotization_sweep,
    ClothespinPath, CycleDecision, FlowScenario, FlowState,
};
use condenlab::credit::bankruptcy_fraction;
use condenlab::distribution::{classify_equilibrium, incentive_total, Equilibrium, WealthDistribution};
use condenlab::exact::{self, Exact};
use condenlab::macro_dynamics::{
    debt_ratio_trajectory, house_price, malthus_classify, print_money, seigniorage_transfer,
    EconomyState, MonetaryState,
};
use condenlab::ownership::{dividend_flow, dividend_tax, voting_outcome, DividendRound, OwnershipNetwork, Support};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rust_decimal::Decimal;
use serde_json::Value;

use crate::config::parse_config;
use crate::run_scenario;
use crate::trajectory::{Cell, Trajectory};

/// Functions under test, swappable so a deliberately broken implementation
/// can be shown to fail the suite.
#[derive(Clone, Copy)]
pub struct VerifyContext {
    pub bankruptcy_fraction: fn(f64) -> condenlab::Result<f64>,
}

impl Default for VerifyContext {
    fn default() -> Self {
        Self { bankruptcy_fraction }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Anchor {
    /// A number worked out in the source text.
    Example,
    /// A consequence checked against an independent computation.
    Derived,
}

impl Anchor {
    pub fn as_str(self) -> &'static str {
        match self {
            Anchor::Example => "example",
            Anchor::Derived => "derived",
        }
    }
}

type CheckFn = fn(&VerifyContext) -> Result<(), String>;

pub struct Check {
    pub name: &'static str,
    pub scenario: &'static str,
    pub anchor: Anchor,
    pub run: CheckFn,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub scenario: &'static str,
    pub anchor: Anchor,
    pub outcome: Result<(), String>,
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($fmt)+));
        }
    };
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn d(s: &str) -> Decimal {
    Decimal::from_str(s).expect("decimal literal")
}

fn scenario(json: &str) -> Result<Trajectory, String> {
    let config = parse_config(json.as_bytes()).map_err(err)?;
    run_scenario(&config).map_err(err)
}

fn nums(t: &Trajectory, column: &str) -> Result<Vec<f64>, String> {
    t.column(column)
        .ok_or_else(|| format!("no column {column}"))?
        .into_iter()
        .map(|c| c.numeric().ok_or_else(|| format!("non-numeric {column}")))
        .collect()
}

fn ratios(t: &Trajectory, column: &str) -> Result<Vec<Exact>, String> {
    t.column(column)
        .ok_or_else(|| format!("no column {column}"))?
        .into_iter()
        .map(|c| match c {
            Cell::Ratio(r) => Ok(r.clone()),
            other => Err(format!("{column} holds {other:?}, not an exact ratio")),
        })
        .collect()
}

fn summary<'a>(t: &'a Trajectory, key: &str) -> Result<&'a Value, String> {
    t.metadata.summary.get(key).ok_or_else(|| format!("no summary {key}"))
}

/// Distance in units in the last place between two finite doubles.
pub fn ulps(a: f64, b: f64) -> u64 {
    let key = |x: f64| {
        let bits = x.to_bits() as i64;
        if bits < 0 {
            i64::MIN - bits
        } else {
            bits
        }
    };
    key(a).abs_diff(key(b))
}

/// `(1 - y/100)(1 + x/100)` computed exactly on the binary values of `x` and
/// `y`, then rounded once.
pub fn identity_product(x: f64, y: f64) -> f64 {
    let exact = |v: f64| BigRational::from_float(v).expect("finite");
    let hundred = exact::int(100);
    let one = exact::int(1);
    let p = (&one - exact(y) / &hundred) * (&one + exact(x) / &hundred);
    p.to_f64().unwrap_or(f64::NAN)
}

pub const IDENTITY_GRID: [f64; 8] = [0.0, 1.0, 3.0, 5.0, 10.0, 50.0, 100.0, 1000.0];

pub static CHECKS: &[Check] = &[
    Check {
        name: "nine_to_one_reserve_multiplies_by_nine",
        scenario: "lending_roi",
        anchor: Anchor::Example,
        run: |_| {
            let m = money_multiplier(Decimal::ONE / Decimal::from(9)).map_err(err)?;
            ensure!((m - Decimal::from(9)).abs() < d("1e-20"), "multiplier {m}");
            Ok(())
        },
    },
    Check {
        name: "ten_percent_reserve_multiplies_by_ten",
        scenario: "lending_roi",
        anchor: Anchor::Example,
        run: |_| {
            let m = money_multiplier(d("0.10")).map_err(err)?;
            ensure!(m == Decimal::from(10), "multiplier {m}");
            Ok(())
        },
    },
    Check {
        name: "three_percent_at_ten_percent_reserve_returns_thirty",
        scenario: "lending_roi",
        anchor: Anchor::Example,
        run: |_| {
            let t = scenario(r#"{"scenario": "lending_roi"}"#)?;
            let roi = lending_roi(d("0.03"), d("0.10")).map_err(err)?;
            ensure!(roi == d("0.30"), "roi {roi}");
            ensure!(t.rows()[0][3] == Cell::Dec(roi), "scenario row {:?}", t.rows()[0]);
            Ok(())
        },
    },
    Check {
        name: "five_percent_at_twenty_fold_leverage_doubles",
        scenario: "lending_roi",
        anchor: Anchor::Example,
        run: |_| {
            let roi = lending_roi(d("0.05"), d("0.05")).map_err(err)?;
            ensure!(roi == Decimal::ONE, "roi {roi}");
            Ok(())
        },
    },
    Check {
        name: "loan_of_ten_owes_ten_point_three",
        scenario: "lending_roi",
        anchor: Anchor::Example,
        run: |_| {
            let ledger = BankLedger::new(Decimal::ONE, d("0.1")).map_err(err)?;
            let (ledger, id) = ledger.issue_loan(Decimal::from(10), d("0.03")).map_err(err)?;
            ensure!(ledger.outstanding_credit() == Decimal::from(10), "credit {}", ledger.outstanding_credit());
            let owed = ledger.loan(id).map(|l| l.outstanding);
            ensure!(owed == Some(d("10.3")), "owed {owed:?}");
            ensure!(ledger.equity().is_zero(), "equity {}", ledger.equity());
            Ok(())
        },
    },
    Check {
        name: "repayment_cancels_principal_and_books_interest",
        scenario: "lending_roi",
        anchor: Anchor::Example,
        run: |_| {
            let ledger = BankLedger::new(Decimal::from(10), d("0.1")).map_err(err)?;
            let (issued, id) = ledger.issue_loan(Decimal::from(100), d("0.03")).map_err(err)?;
            let repaid = issued.repay_loan(id, Decimal::from(103)).map_err(err)?;
            let credit = repaid.outstanding_credit() - issued.outstanding_credit();
            let equity = repaid.equity() - issued.equity();
            ensure!(credit == Decimal::from(-100), "credit change {credit}");
            ensure!(equity == Decimal::from(3), "equity change {equity}");
            Ok(())
        },
    },
    Check {
        name: "redeposit_cascade_approaches_ten",
        scenario: "redeposit_cascade",
        anchor: Anchor::Derived,
        run: |_| {
            let t = scenario(r#"{"scenario": "redeposit_cascade"}"#)?;
            let totals = nums(&t, "total_deposits")?;
            let last = totals.last().copied().unwrap_or(f64::NAN);
            ensure!((last - 10.0).abs() <= 1e-6, "total {last}");
            ensure!(totals.windows(2).all(|w| w[0] <= w[1]), "totals not monotone");
            Ok(())
        },
    },
    Check {
        name: "hundred_percent_interest_bankrupts_half",
        scenario: "bankruptcy_fraction",
        anchor: Anchor::Example,
        run: |ctx| {
            let y = (ctx.bankruptcy_fraction)(100.0).map_err(err)?;
            ensure!(y == 50.0, "y = {y}");
            Ok(())
        },
    },
    Check {
        name: "repaid_share_times_interest_is_one",
        scenario: "bankruptcy_fraction",
        anchor: Anchor::Derived,
        run: |ctx| {
            for x in IDENTITY_GRID {
                let y = (ctx.bankruptcy_fraction)(x).map_err(err)?;
                let p = identity_product(x, y);
                ensure!(ulps(p, 1.0) <= 1, "x = {x}: product {p} is {} ulps from 1", ulps(p, 1.0));
            }
            Ok(())
        },
    },
    Check {
        name: "refinancing_with_growth_avoids_default",
        scenario: "refinance_game",
        anchor: Anchor::Example,
        run: |_| {
            let t = scenario(
                r#"{"scenario": "refinance_game", "params": {"n_borrowers": 200, "interest_pct": 3,
                    "rounds": 100, "refinance": true, "money_growth_pct": 3}}"#,
            )?;
            let defaults: f64 = nums(&t, "defaults")?.iter().sum();
            ensure!(defaults == 0.0, "{defaults} defaults");
            ensure!(summary(&t, "defaulted_money_fraction")?.as_f64() == Some(0.0), "money lost");
            Ok(())
        },
    },
    Check {
        name: "forced_repayment_matches_formula",
        scenario: "refinance_game",
        anchor: Anchor::Derived,
        run: |ctx| {
            let y = (ctx.bankruptcy_fraction)(100.0).map_err(err)?;
            let mut total = 0.0;
            for seed in 0..5 {
                let t = scenario(&format!(
                    r#"{{"scenario": "refinance_game", "seed": {seed}}}"#
                ))?;
                total += summary(&t, "defaulted_money_fraction")?.as_f64().unwrap_or(f64::NAN);
            }
            let mean = total / 5.0;
            ensure!((mean - y).abs() <= 3.0, "simulated {mean}, formula {y}");
            Ok(())
        },
    },
    Check {
        name: "speculative_spiral_diverges",
        scenario: "credit_spiral",
        anchor: Anchor::Derived,
        run: |_| {
            let t = scenario(r#"{"scenario": "credit_spiral"}"#)?;
            let rates = nums(&t, "rate")?;
            let mut r = 0.05f64;
            for (k, &got) in rates.iter().enumerate() {
                ensure!(got == r, "round {k}: {got} vs {r}");
                r *= 1.0 + 50.0 * (r - 0.04).max(0.0);
            }
            ensure!(rates.windows(2).all(|w| w[1] > w[0]), "not strictly increasing");
            ensure!(summary(&t, "diverged")? == &Value::Bool(true), "no divergence flag");
            Ok(())
        },
    },
    Check {
        name: "runge_kutta_tracks_exponential",
        scenario: "growth",
        anchor: Anchor::Derived,
        run: |_| {
            let t = scenario(r#"{"scenario": "growth"}"#)?;
            let worst = nums(&t, "rel_diff")?.into_iter().fold(0.0, f64::max);
            ensure!(worst <= 1e-9, "relative gap {worst}");
            Ok(())
        },
    },
    Check {
        name: "shrinking_economy_is_a_catastrophe",
        scenario: "growth",
        anchor: Anchor::Example,
        run: |_| {
            let state = malthus_classify(&[1.0, 1.03, 1.02, 1.05], 1e-9).map_err(err)?;
            ensure!(state == EconomyState::Catastrophe, "{state:?}");
            Ok(())
        },
    },
    Check {
        name: "deficit_equal_to_growth_holds_debt_constant",
        scenario: "debt_ratio",
        anchor: Anchor::Derived,
        run: |_| {
            let t = scenario(r#"{"scenario": "debt_ratio"}"#)?;
            let ratios = nums(&t, "ratio")?;
            ensure!(ratios.len() == 101, "{} rows", ratios.len());
            let worst = ratios.iter().map(|r| (r - 1.0).abs()).fold(0.0, f64::max);
            ensure!(worst <= 1e-12, "drift {worst}");
            Ok(())
        },
    },
    Check {
        name: "stagnation_grows_debt_without_bound",
        scenario: "debt_ratio",
        anchor: Anchor::Example,
        run: |_| {
            let path = debt_ratio_trajectory(3.0, 0.0, 100, 1.0).map_err(err)?;
            for (k, w) in path.ratios.windows(2).enumerate() {
                ensure!(((w[1] - w[0]) - 0.03).abs() <= 1e-12, "year {k}: step {}", w[1] - w[0]);
            }
            ensure!(path.fixed_point.is_none(), "fixed point {:?}", path.fixed_point);
            Ok(())
        },
    },
    Check {
        name: "tenfold_printing_is_900_inflation_90_devaluation",
        scenario: "print_money",
        anchor: Anchor::Example,
        run: |_| {
            let t = scenario(r#"{"scenario": "print_money"}"#)?;
            ensure!(summary(&t, "inflation_pct")? == "900", "inflation {}", summary(&t, "inflation_pct")?);
            ensure!(summary(&t, "devaluation_pct")? == "90", "devaluation {}", summary(&t, "devaluation_pct")?);
            let external = ratios(&t, "external_value")?;
            ensure!(external[0] == external[1], "external value moved");
            Ok(())
        },
    },
    Check {
        name: "three_percent_printing_is_three_percent_inflation",
        scenario: "print_money",
        anchor: Anchor::Example,
        run: |_| {
            let state = MonetaryState::new(exact::int(100), exact::int(1), exact::int(1)).map_err(err)?;
            let (_, report) = print_money(&state, &exact::ratio(103, 100)).map_err(err)?;
            ensure!(report.inflation_pct == exact::int(3), "inflation {}", report.inflation_pct);
            Ok(())
        },
    },
    Check {
        name: "everyone_lending_gains_nothing",
        scenario: "seigniorage",
        anchor: Anchor::Example,
        run: |_| {
            let s = seigniorage_transfer(&exact::int(1), &exact::int(3)).map_err(err)?;
            ensure!(s.lender_gain_pct == exact::int(0), "lender {}", s.lender_gain_pct);
            ensure!(s.nonlender_gain_pct == exact::int(0), "non-lender {}", s.nonlender_gain_pct);
            Ok(())
        },
    },
    Check {
        name: "seigniorage_is_zero_sum",
        scenario: "seigniorage",
        anchor: Anchor::Derived,
        run: |_| {
            let t = scenario(r#"{"scenario": "seigniorage"}"#)?;
            let sums = ratios(&t, "weighted_sum")?;
            ensure!(sums.iter().all(|s| *s == exact::int(0)), "non-zero weighted sum");
            let half = seigniorage_transfer(&exact::ratio(1, 2), &exact::int(3)).map_err(err)?;
            ensure!(half.lender_gain_pct == exact::ratio(3, 2), "lender {}", half.lender_gain_pct);
            ensure!(half.nonlender_gain_pct == exact::ratio(-3, 2), "non-lender {}", half.nonlender_gain_pct);
            Ok(())
        },
    },
    Check {
        name: "three_thousand_a_year_buys_a_hundred_thousand",
        scenario: "house_price",
        anchor: Anchor::Example,
        run: |_| {
            let h = house_price(&exact::int(3000), &exact::ratio(3, 100), &exact::int(0)).map_err(err)?;
            ensure!(h.price == exact::int(100_000), "price {}", h.price);
            Ok(())
        },
    },
    Check {
        name: "half_refund_doubles_the_price",
        scenario: "house_price",
        anchor: Anchor::Example,
        run: |_| {
            let h = house_price(&exact::int(3000), &exact::ratio(3, 100), &exact::ratio(1, 2)).map_err(err)?;
            ensure!(h.price == exact::int(200_000), "price {}", h.price);
            Ok(())
        },
    },
    Check {
        name: "refund_leaves_net_cost_unchanged",
        scenario: "house_price",
        anchor: Anchor::Derived,
        run: |_| {
            let t = scenario(r#"{"scenario": "house_price"}"#)?;
            let costs = ratios(&t, "net_annual_cost")?;
            ensure!(costs.iter().all(|c| *c == exact::int(3000)), "net cost moved");
            let last = ratios(&t, "price")?.pop();
            ensure!(last == Some(exact::int(1_000_000)), "price at 90% refund {last:?}");
            Ok(())
        },
    },
    Check {
        name: "capital_refuses_without_profit",
        scenario: "marx_cycle",
        anchor: Anchor::Example,
        run: |_| {
            let c = marx_cycle(d("100"), d("40"), d("60"), d("100")).map_err(err)?;
            ensure!(c.decision == CycleDecision::Refuse, "{:?}", c.decision);
            ensure!(c.lp_spend.is_zero(), "labor paid {}", c.lp_spend);
            Ok(())
        },
    },
    Check {
        name: "circuit_without_labor_still_proceeds",
        scenario: "marx_cycle",
        anchor: Anchor::Example,
        run: |_| {
            let t = scenario(
                r#"{"scenario": "marx_cycle", "params": {"m": 100, "mop_spend": 100, "lp_spend": 0, "output_value": 120}}"#,
            )?;
            ensure!(summary(&t, "decision")? == "proceed", "decision {}", summary(&t, "decision")?);
            ensure!(t.rows()[0][5] == Cell::Dec(d("20")), "surplus {:?}", t.rows()[0][5]);
            Ok(())
        },
    },
    Check {
        name: "capital_share_half_then_two_thirds",
        scenario: "capital_share",
        anchor: Anchor::Example,
        run: |_| {
            ensure!(capital_share_exact(1).map_err(err)? == exact::ratio(1, 2), "n = 1");
            ensure!(capital_share_exact(2).map_err(err)? == exact::ratio(2, 3), "n = 2");
            Ok(())
        },
    },
    Check {
        name: "capital_share_eighty_then_eighty_nine",
        scenario: "capital_share",
        anchor: Anchor::Example,
        run: |_| {
            ensure!(capital_share_exact(3).map_err(err)? == exact::ratio(4, 5), "n = 3");
            ensure!(capital_share_exact(4).map_err(err)? == exact::ratio(8, 9), "n = 4");
            Ok(())
        },
    },
    Check {
        name: "capital_share_doubling_recurrence",
        scenario: "capital_share",
        anchor: Anchor::Derived,
        run: |_| {
            let t = scenario(r#"{"scenario": "capital_share"}"#)?;
            let shares = ratios(&t, "share_exact")?;
            ensure!(shares.len() == 30, "{} rows", shares.len());
            // Capital doubles while the human part stays put.
            let (mut k, h) = (exact::int(1), exact::int(1));
            for (n, s) in shares.iter().enumerate() {
                ensure!(*s == &k / (&k + &h), "n = {}: {s}", n + 1);
                k *= exact::int(2);
            }
            let floats = nums(&t, "share")?;
            ensure!(floats.windows(2).all(|w| w[1] > w[0]), "not increasing");
            ensure!((1.0 - floats[29] - 1.8626e-9).abs() < 1e-13, "n = 30: {}", floats[29]);
            Ok(())
        },
    },
    Check {
        name: "reinvesting_gives_two_thirds_in_cycle_two",
        scenario: "flow_reinvest",
        anchor: Anchor::Example,
        run: |_| {
            let t = scenario(r#"{"scenario": "flow_reinvest", "params": {"cycles": 1}}"#)?;
            let shares = ratios(&t, "capital_prod_share")?;
            let cycles = nums(&t, "cycle")?;
            ensure!(cycles == [1.0, 2.0], "cycles {cycles:?}");
            ensure!(shares[1] == exact::ratio(2, 3), "share {}", shares[1]);
            ensure!(ratios(&t, "human_debt")?.iter().all(|x| *x == exact::int(0)), "debt appeared");
            Ok(())
        },
    },
    Check {
        name: "consuming_95_producing_50_borrows_45",
        scenario: "flow_loan",
        anchor: Anchor::Example,
        run: |_| {
            let states = flow_scenario(FlowScenario::Loan, 1, &FlowState::default_loan());
            let s = &states[1];
            let expected = exact::ratio(45, 100) * &s.total_production;
            ensure!(s.human_debt == expected, "debt {}", s.human_debt);
            let t = scenario(r#"{"scenario": "flow_loan"}"#)?;
            let prod = ratios(&t, "total_production")?;
            let cons = ratios(&t, "total_consumption")?;
            ensure!(prod == cons, "production and consumption differ");
            Ok(())
        },
    },
    Check {
        name: "first_machine_splits_four_thirds_two_thirds",
        scenario: "clothespin",
        anchor: Anchor::Example,
        run: |_| {
            let t = scenario(r#"{"scenario": "clothespin", "params": {"years": 1}}"#)?;
            let mine = ratios(&t, "my_rights")?;
            let theirs = ratios(&t, "neighbor_rights")?;
            ensure!(mine[0] == exact::int(1) && theirs[0] == exact::int(1), "year 0 asymmetric");
            ensure!(mine[1] == exact::ratio(4, 3), "mine {}", mine[1]);
            ensure!(theirs[1] == exact::ratio(2, 3), "neighbor {}", theirs[1]);
            Ok(())
        },
    },
    Check {
        name: "second_machine_splits_three_halves_one_half",
        scenario: "clothespin",
        anchor: Anchor::Example,
        run: |_| {
            let states = clothespin_sim(ClothespinPath::BuildMachines, 2);
            let s = &states[2];
            ensure!(s.my_rights == exact::ratio(3, 2), "mine {}", s.my_rights);
            ensure!(s.neighbor_rights == exact::ratio(1, 2), "neighbor {}", s.neighbor_rights);
            ensure!(s.total_units() == exact::int(4), "units {}", s.total_units());
            Ok(())
        },
    },
    Check {
        name: "full_robotization_collapses_demand",
        scenario: "robotization",
        anchor: Anchor::Example,
        run: |_| {
            let r = robotization_sweep(&[0.0; 10], 10.0, 0.5).map_err(err)?;
            ensure!(r.collapse, "no collapse");
            ensure!(r.aggregate_demand == 0.0, "demand {}", r.aggregate_demand);
            Ok(())
        },
    },
    Check {
        name: "lone_robotized_firm_profits_from_the_others",
        scenario: "robotization",
        anchor: Anchor::Example,
        run: |_| {
            let t = scenario(r#"{"scenario": "robotization"}"#)?;
            let margins = nums(&t, "margin")?;
            ensure!(margins[1..].iter().all(|&m| margins[0] > m), "margins {margins:?}");
            ensure!(summary(&t, "collapse")? == &Value::Bool(false), "collapse");
            Ok(())
        },
    },
    Check {
        name: "exponential_family_is_feasible",
        scenario: "exponential_family",
        anchor: Anchor::Derived,
        run: |_| {
            let t = scenario(r#"{"scenario": "exponential_family"}"#)?;
            let w = nums(&t, "weight")?;
            let total: f64 = w.iter().sum();
            ensure!((total - 1.0).abs() <= 1e-12, "total {total}");
            ensure!(w.windows(2).all(|p| p[0] < p[1]), "not increasing");
            ensure!(w[0] >= 1.0 / 300.0, "below the floor");
            let inc = nums(&t, "incentive")?;
            let direct: f64 = w.windows(2).map(|p| (p[1] - p[0]) / p[0]).sum();
            let reported = summary(&t, "total_incentive")?.as_f64().unwrap_or(f64::NAN);
            ensure!((inc.iter().sum::<f64>() - direct).abs() <= 1e-12 * direct, "incentive sum");
            ensure!((reported - direct).abs() <= 1e-12 * direct, "reported total {reported}");
            Ok(())
        },
    },
    Check {
        name: "equal_wealth_gives_no_incentive",
        scenario: "ga_optimize",
        anchor: Anchor::Example,
        run: |_| {
            let inc = incentive_total(&WealthDistribution::uniform(30, 1.0 / 300.0).map_err(err)?).map_err(err)?;
            ensure!(inc.total == 0.0, "total {}", inc.total);
            ensure!(inc.per_person.iter().all(|&i| i == 0.0), "non-zero incentive");
            Ok(())
        },
    },
    Check {
        name: "equal_start_settles_into_slave_and_officials",
        scenario: "ga_optimize",
        anchor: Anchor::Example,
        run: |_| {
            let t = scenario(r#"{"scenario": "ga_optimize", "seed": 0}"#)?;
            let eq = summary(&t, "equilibrium")?;
            ensure!(eq == Equilibrium::SlaveOfficial.as_str(), "equilibrium {eq}");
            let history = nums(&t, "objective")?;
            ensure!(history.windows(2).all(|w| w[0] <= w[1]), "objective decreased");
            Ok(())
        },
    },
    Check {
        name: "random_start_settles_into_banker_and_wheedler",
        scenario: "ga_optimize",
        anchor: Anchor::Example,
        run: |_| {
            let t = scenario(
                r#"{"scenario": "ga_optimize", "seed": 0, "params": {"random_init": true, "mutation_scale": 30}}"#,
            )?;
            let eq = summary(&t, "equilibrium")?;
            ensure!(eq == Equilibrium::BankerWheedler.as_str(), "equilibrium {eq}");
            let top = summary(&t, "top")?.as_f64().unwrap_or(f64::NAN);
            let ratio = summary(&t, "top_over_floor")?.as_f64().unwrap_or(f64::NAN);
            ensure!(top >= 0.88, "top {top}");
            ensure!((ratio / 270.0 - 1.0).abs() <= 0.05, "top over floor {ratio}");
            Ok(())
        },
    },
    Check {
        name: "poor_majority_with_penultimate_is_banker_and_wheedler",
        scenario: "ga_optimize",
        anchor: Anchor::Example,
        run: |_| {
            let w0 = 1.0 / 300.0;
            let mut w = vec![w0; 28];
            w.push(0.02);
            w.push(1.0 - 28.0 * w0 - 0.02);
            let dist = WealthDistribution::new(w, w0).map_err(err)?;
            let eq = classify_equilibrium(&dist, 0.05);
            ensure!(eq == Equilibrium::BankerWheedler, "{eq:?}");
            Ok(())
        },
    },
    Check {
        name: "prisoners_confess_though_silence_is_better",
        scenario: "dilemma",
        anchor: Anchor::Example,
        run: |_| {
            let t = scenario(r#"{"scenario": "dilemma"}"#)?;
            ensure!(summary(&t, "dominant_a")? == "confess", "dominant for A");
            ensure!(summary(&t, "dominant_b")? == "confess", "dominant for B");
            let nash: Vec<(String, String)> = t
                .rows()
                .iter()
                .filter(|r| r[4] == Cell::Bool(true))
                .map(|r| (r[0].to_csv(), r[1].to_csv()))
                .collect();
            ensure!(nash == [("confess".into(), "confess".into())], "nash {nash:?}");
            let silent_pareto = t
                .rows()
                .iter()
                .any(|r| r[0].to_csv() == "silent" && r[1].to_csv() == "silent" && r[5] == Cell::Bool(true));
            ensure!(silent_pareto, "mutual silence not Pareto optimal");
            Ok(())
        },
    },
    Check {
        name: "two_percent_stakes_own_all_three_banks",
        scenario: "ownership",
        anchor: Anchor::Example,
        run: |_| {
            let t = scenario(r#"{"scenario": "ownership"}"#)?;
            let last = t.rows().last().ok_or("no rows")?;
            for cell in &last[1..] {
                let v = cell.numeric().unwrap_or(f64::NAN);
                ensure!((v - 1.0).abs() <= 1e-10, "series {v}");
            }
            let solve = summary(&t, "solve")?.as_array().ok_or("no solve")?;
            for v in solve {
                let v = v.as_f64().unwrap_or(f64::NAN);
                ensure!((v - 1.0).abs() <= 1e-10, "solve {v}");
            }
            Ok(())
        },
    },
    Check {
        name: "dividends_circulate_and_outsider_gets_six",
        scenario: "dividend_flow",
        anchor: Anchor::Example,
        run: |_| {
            let flow = dividend_flow(&OwnershipNetwork::three_banks(), &DividendRound::three_banks()).map_err(err)?;
            for (j, b) in flow.banks.iter().enumerate() {
                ensure!(b.total_income == Decimal::from(100), "bank {j} income {}", b.total_income);
                ensure!(b.payout == Decimal::from(100), "bank {j} payout {}", b.payout);
                ensure!(b.net.is_zero(), "bank {j} net {}", b.net);
            }
            ensure!(flow.outsider_receipts == Decimal::from(6), "outsider {}", flow.outsider_receipts);
            Ok(())
        },
    },
    Check {
        name: "quarter_dividend_tax_exceeds_real_profit",
        scenario: "dividend_flow",
        anchor: Anchor::Example,
        run: |_| {
            let tax = dividend_tax(&DividendRound::three_banks(), d("0.25")).map_err(err)?;
            ensure!(tax.total == Decimal::from(75), "total {}", tax.total);
            ensure!(tax.insolvent.iter().all(|&f| f), "flags {:?}", tax.insolvent);
            let t = scenario(r#"{"scenario": "dividend_flow"}"#)?;
            ensure!(summary(&t, "tax_total")? == "75", "scenario tax {}", summary(&t, "tax_total")?);
            Ok(())
        },
    },
    Check {
        name: "peer_banks_outvote_the_outsider",
        scenario: "voting",
        anchor: Anchor::Example,
        run: |_| {
            let net = OwnershipNetwork::three_banks();
            let support = Support {
                outsider: false,
                banks: vec![true; 3],
            };
            let tally = voting_outcome(&net, 0, &support).map_err(err)?;
            ensure!(tally.passed, "proposal failed");
            ensure!(tally.yes == d("0.98") && tally.no == d("0.02"), "{} : {}", tally.yes, tally.no);
            let t = scenario(r#"{"scenario": "voting"}"#)?;
            ensure!(summary(&t, "passed")? == &Value::Bool(true), "scenario vote failed");
            Ok(())
        },
    },
];

pub fn run_checks(ctx: &VerifyContext) -> Vec<CheckResult> {
    CHECKS
        .iter()
        .map(|c| CheckResult {
            name: c.name,
            scenario: c.scenario,
            anchor: c.anchor,
            outcome: (c.run)(ctx),
        })
        .collect()
}

/// Prints one line per check and a total; returns the exit code, 0 iff
/// every check passed.
pub fn verify(ctx: &VerifyContext, out: &mut impl Write) -> i32 {
    let results = run_checks(ctx);
    let mut failed = 0;
    for r in &results {
        let status = if r.outcome.is_ok() { "PASS" } else { "FAIL" };
        let _ = write!(out, "{status} [{}] {}/{}", r.anchor.as_str(), r.scenario, r.name);
        if let Err(why) = &r.outcome {
            failed += 1;
            let _ = write!(out, ": {why}");
        }
        let _ = writeln!(out);
    }
    let examples = results.iter().filter(|r| r.anchor == Anchor::Example).count();
    let _ = writeln!(
        out,
        "{}/{} checks passed ({examples} worked examples, {} derived)",
        results.len() - failed,
        results.len(),
        results.len() - examples
    );
    i32::from(failed > 0)
}
