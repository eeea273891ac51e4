//! How surplus accumulates with capital.
//!
//! * [`marx_cycle`]: one turn of M - C{MoP, LP} - P - C' - M'. Capital only
//!   acts when it profits.
//! * [`capital_share`] and [`flow_scenario`]: production and consumption
//!   split between humans and machines, with the machines' share reinvested
//!   or lent back to humans.
//! * [`clothespin_sim`]: two producers, one of whom builds a machine.
//! * [`robotization_sweep`]: aggregate demand when firms stop paying wages.

use num_traits::{One, Zero};
use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, Exact};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CycleDecision {
    Proceed,
    Refuse,
}

/// Outcome of one circuit. On `Refuse` nothing was bought, so `mop_spend`,
/// `lp_spend`, `output_value` and `m_prime` are zero and `m_prime` equals
/// nothing earned.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitState {
    pub m: Decimal,
    pub mop_spend: Decimal,
    pub lp_spend: Decimal,
    pub output_value: Decimal,
    pub m_prime: Decimal,
    pub decision: CycleDecision,
}

impl CircuitState {
    /// `M' - M` for a completed cycle, zero when capital refused.
    pub fn surplus(&self) -> Decimal {
        match self.decision {
            CycleDecision::Proceed => self.m_prime - self.m,
            CycleDecision::Refuse => Decimal::ZERO,
        }
    }
}

/// Capital advances `m`, planning to spend `mop_spend` on means of production
/// and `lp_spend` on labor, and expects to sell the product for
/// `output_value`. It only goes ahead if `output_value > m`.
pub fn marx_cycle(
    m: Decimal,
    mop_spend: Decimal,
    lp_spend: Decimal,
    output_value: Decimal,
) -> Result<CircuitState> {
    if mop_spend.is_sign_negative() {
        return Err(Error::domain("mop_spend", mop_spend, ">= 0"));
    }
    if lp_spend.is_sign_negative() {
        return Err(Error::domain("lp_spend", lp_spend, ">= 0"));
    }
    let spend = mop_spend + lp_spend;
    if spend > m {
        return Err(Error::Infeasible {
            spend,
            available: m,
        });
    }
    if output_value > m {
        Ok(CircuitState {
            m,
            mop_spend,
            lp_spend,
            output_value,
            m_prime: output_value,
            decision: CycleDecision::Proceed,
        })
    } else {
        Ok(CircuitState {
            m,
            mop_spend: Decimal::ZERO,
            lp_spend: Decimal::ZERO,
            output_value: Decimal::ZERO,
            m_prime: Decimal::ZERO,
            decision: CycleDecision::Refuse,
        })
    }
}

/// Capital's share of production in cycle `n` when capital doubles every
/// cycle and human production stays constant: `2^(n-1) / (2^(n-1) + 1)`.
pub fn capital_share(n: u32) -> Result<f64> {
    if n < 1 {
        return Err(Error::domain("n", n, ">= 1"));
    }
    let k = 2f64.powi(n as i32 - 1);
    Ok(k / (k + 1.0))
}

/// Exact form of [`capital_share`].
pub fn capital_share_exact(n: u32) -> Result<Exact> {
    if n < 1 {
        return Err(Error::domain("n", n, ">= 1"));
    }
    let k = Exact::from_integer(num_bigint::BigInt::from(2u8).pow(n - 1));
    Ok(&k / (&k + Exact::one()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FlowScenario {
    /// Capital's income is lent to humans; shares stay fixed and human debt grows.
    Loan,
    /// Capital's income buys more capital; capital doubles every cycle.
    Reinvest,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowState {
    pub cycle: u32,
    pub human_prod_share: Exact,
    pub capital_prod_share: Exact,
    pub human_cons_share: Exact,
    pub capital_cons_share: Exact,
    /// Production in this cycle; human production is one unit per cycle in
    /// the reinvest scenario, total output is one unit in the loan scenario.
    pub total_production: Exact,
    pub total_consumption: Exact,
    pub human_debt: Exact,
}

impl FlowState {
    /// Humans produce half and consume 95%.
    pub fn default_loan() -> Self {
        Self::new(exact::ratio(1, 2), exact::ratio(19, 20)).expect("valid shares")
    }

    /// Humans and capital each produce and consume half.
    pub fn default_reinvest() -> Self {
        Self::new(exact::ratio(1, 2), exact::ratio(1, 2)).expect("valid shares")
    }

    pub fn new(human_prod_share: Exact, human_cons_share: Exact) -> Result<Self> {
        for (name, v) in [
            ("human_prod_share", &human_prod_share),
            ("human_cons_share", &human_cons_share),
        ] {
            if *v < Exact::zero() || *v > Exact::one() {
                return Err(Error::domain(name, v, "in [0, 1]"));
            }
        }
        Ok(Self {
            cycle: 1,
            capital_prod_share: Exact::one() - &human_prod_share,
            capital_cons_share: Exact::one() - &human_cons_share,
            human_prod_share,
            human_cons_share,
            total_production: Exact::one(),
            total_consumption: Exact::one(),
            human_debt: Exact::zero(),
        })
    }
}

/// Runs `cycles` further cycles from `initial` and returns the initial state
/// followed by one state per cycle.
///
/// In the loan scenario, humans are paid their production share but consume
/// their consumption share; the difference is borrowed from capital each
/// cycle. In the reinvest scenario capital's income is turned into new
/// capital, doubling the machine stock, and nobody borrows.
pub fn flow_scenario(scenario: FlowScenario, cycles: u32, initial: &FlowState) -> Vec<FlowState> {
    let mut out = Vec::with_capacity(cycles as usize + 1);
    out.push(initial.clone());
    let mut state = initial.clone();
    for _ in 0..cycles {
        state = match scenario {
            FlowScenario::Loan => {
                let shortfall = (&state.human_cons_share - &state.human_prod_share)
                    * &state.total_production;
                FlowState {
                    cycle: state.cycle + 1,
                    human_debt: &state.human_debt + shortfall,
                    ..state.clone()
                }
            }
            FlowScenario::Reinvest => {
                let human = &state.human_prod_share * &state.total_production;
                let capital = &state.capital_prod_share * &state.total_production * exact::int(2);
                let total = &human + &capital;
                let human_share = &human / &total;
                let capital_share = &capital / &total;
                FlowState {
                    cycle: state.cycle + 1,
                    human_cons_share: human_share.clone(),
                    capital_cons_share: capital_share.clone(),
                    human_prod_share: human_share,
                    capital_prod_share: capital_share,
                    total_consumption: total.clone(),
                    total_production: total,
                    human_debt: state.human_debt.clone(),
                }
            }
        };
        out.push(state.clone());
    }
    out
}

/// Loan rate in the lend-rights path of the clothespin story.
pub fn clothespin_loan_rate() -> Exact {
    exact::ratio(1, 10)
}

/// Consumption rights per year the market pays for clothespins in total.
pub fn clothespin_market_rights() -> Exact {
    exact::int(2)
}

/// Consumption rights a person needs per year to live.
pub fn clothespin_survival() -> Exact {
    exact::int(1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClothespinPath {
    /// Keep one machine and lend the neighbor his shortfall at 10% a year.
    LendRights,
    /// Spend free time building machines; the machine count doubles yearly.
    BuildMachines,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DuopolyState {
    pub year: u32,
    pub my_manual_units: Exact,
    pub neighbor_units: Exact,
    pub my_machines: u64,
    /// Consumption rights per unit of pins.
    pub price: Exact,
    pub my_rights: Exact,
    pub neighbor_rights: Exact,
    pub neighbor_debt: Exact,
}

impl DuopolyState {
    pub fn total_units(&self) -> Exact {
        &self.my_manual_units + &self.neighbor_units + exact::int(self.my_machines as i64)
    }

    pub fn total_rights(&self) -> Exact {
        &self.my_rights + &self.neighbor_rights
    }
}

/// Year-by-year story of two clothespin makers after one of them builds a
/// machine that works like one person.
///
/// The market pays two consumption rights a year for pins whatever the
/// volume, so the price per unit is `2 / units` and rights split by share
/// of units produced. Year 0 is the symmetric start; year 1 is the first
/// year with one machine.
pub fn clothespin_sim(path: ClothespinPath, years: u32) -> Vec<DuopolyState> {
    let market = clothespin_market_rights();
    let survival = clothespin_survival();
    let rate = clothespin_loan_rate();

    let mut out = Vec::with_capacity(years as usize + 1);
    let mut debt = Exact::zero();
    for year in 0..=years {
        let machines: u64 = match (year, path) {
            (0, _) => 0,
            (_, ClothespinPath::LendRights) => 1,
            (y, ClothespinPath::BuildMachines) => 1u64 << (y - 1).min(62),
        };
        let mine = exact::int(1) + exact::int(machines as i64);
        let neighbor = exact::int(1);
        let units = &mine + &neighbor;
        let price = &market / &units;
        let my_rights = &mine * &price;
        let neighbor_rights = &neighbor * &price;

        if path == ClothespinPath::LendRights {
            debt = &debt * (exact::one() + &rate);
            if neighbor_rights < survival {
                debt += &survival - &neighbor_rights;
            }
        }

        out.push(DuopolyState {
            year,
            my_manual_units: exact::int(1),
            neighbor_units: neighbor,
            my_machines: machines,
            price,
            my_rights,
            neighbor_rights,
            neighbor_debt: debt.clone(),
        });
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FirmResult {
    pub lp_share: f64,
    pub wages: f64,
    pub cost: f64,
    pub revenue: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobotizationReport {
    pub firms: Vec<FirmResult>,
    /// Total wages paid, which is all the money available to buy output.
    pub aggregate_demand: f64,
    /// Output at its pre-robotization value.
    pub output_value: f64,
    pub collapse: bool,
}

/// Closed economy of firms with identical output. Firm `k` spends
/// `lp_shares[k]` of its input budget `wage_bill` on labor and the rest on
/// machines, which cost `mop_cost_ratio` per unit of labor replaced. Wages
/// are the only income, so they are the only demand; each firm sells an
/// equal share of it. Demand of zero against positive output is a collapse.
pub fn robotization_sweep(
    lp_shares: &[f64],
    wage_bill: f64,
    mop_cost_ratio: f64,
) -> Result<RobotizationReport> {
    if lp_shares.is_empty() {
        return Err(Error::domain("n_firms", 0, ">= 1"));
    }
    if let Some(bad) = lp_shares.iter().find(|s| !(0.0..=1.0).contains(*s)) {
        return Err(Error::domain("lp_share", bad, "in [0, 1]"));
    }
    if !(wage_bill > 0.0) {
        return Err(Error::domain("wage_bill", wage_bill, "> 0"));
    }
    if !(mop_cost_ratio >= 0.0) {
        return Err(Error::domain("mop_cost_ratio", mop_cost_ratio, ">= 0"));
    }
    let n = lp_shares.len() as f64;
    let aggregate_demand: f64 = lp_shares.iter().map(|s| s * wage_bill).sum();
    let output_value = n * wage_bill;
    let revenue = aggregate_demand / n;
    let firms = lp_shares
        .iter()
        .map(|&s| {
            let wages = s * wage_bill;
            let cost = wages + (1.0 - s) * wage_bill * mop_cost_ratio;
            FirmResult {
                lp_share: s,
                wages,
                cost,
                revenue,
                margin: revenue - cost,
            }
        })
        .collect();
    Ok(RobotizationReport {
        firms,
        aggregate_demand,
        output_value,
        collapse: aggregate_demand == 0.0 && output_value > 0.0,
    })
}
