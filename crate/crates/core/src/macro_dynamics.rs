//! Aggregate models: growth financed by borrowing from tomorrow, the debt
//! ratio under a permanent deficit, money printing, and how a mortgage tax
//! break is capitalized into house prices.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, Exact};

/// `E0` is the economy today; `alpha` is the borrowing-from-tomorrow factor
/// in `E = alpha * dE/dt`, so the growth rate is `1/alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthParams {
    pub e0: f64,
    pub alpha: f64,
}

impl GrowthParams {
    pub fn new(e0: f64, alpha: f64) -> Result<Self> {
        if !(e0 > 0.0) {
            return Err(Error::domain("e0", e0, "> 0"));
        }
        if !(alpha > 0.0) {
            return Err(Error::domain("alpha", alpha, "> 0"));
        }
        Ok(Self { e0, alpha })
    }

    /// Growth per unit of time, `e^{1/alpha} - 1`.
    pub fn growth_rate(&self) -> f64 {
        (1.0 / self.alpha).exp_m1()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GrowthMethod {
    /// `E0 * e^{t/alpha}`.
    Closed,
    /// Classical fourth-order Runge-Kutta on `dE/dt = E/alpha` with at most
    /// `step` per step (the last step is shortened to land on `t`).
    Rk4 { step: f64 },
}

pub fn growth_value(params: GrowthParams, t: f64, method: GrowthMethod) -> Result<f64> {
    let GrowthParams { e0, alpha } = GrowthParams::new(params.e0, params.alpha)?;
    if !(t >= 0.0) {
        return Err(Error::domain("t", t, ">= 0"));
    }
    match method {
        GrowthMethod::Closed => Ok(e0 * (t / alpha).exp()),
        GrowthMethod::Rk4 { step } => {
            if !(step > 0.0) {
                return Err(Error::domain("step", step, "> 0"));
            }
            if t == 0.0 {
                return Ok(e0);
            }
            let n = (t / step).ceil().max(1.0) as u64;
            let h = t / n as f64;
            let f = |e: f64| e / alpha;
            let mut e = e0;
            for _ in 0..n {
                let k1 = f(e);
                let k2 = f(e + 0.5 * h * k1);
                let k3 = f(e + 0.5 * h * k2);
                let k4 = f(e + h * k3);
                e += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            }
            Ok(e)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EconomyState {
    Growing,
    Stagnating,
    Catastrophe,
}

impl EconomyState {
    pub fn as_str(&self) -> &'static str {
        match self {
            EconomyState::Growing => "growing",
            EconomyState::Stagnating => "stagnating",
            EconomyState::Catastrophe => "catastrophe",
        }
    }
}

/// Classifies an economy-size series.
///
/// Any value at or below zero, or any decline, is a catastrophe: with a
/// fixed borrowing factor a shrinking economy has no consistent positive
/// solution. A series whose last step is within `rel_tol` of flat, or that
/// stalled anywhere, is stagnating. Otherwise it is growing.
pub fn malthus_classify(series: &[f64], rel_tol: f64) -> Result<EconomyState> {
    if series.len() < 2 {
        return Err(Error::domain("series length", series.len(), ">= 2"));
    }
    if series.iter().any(|&e| !(e > 0.0)) || series.windows(2).any(|w| w[1] < w[0]) {
        return Ok(EconomyState::Catastrophe);
    }
    let last = series[series.len() - 1];
    let prev = series[series.len() - 2];
    if (last - prev).abs() <= rel_tol * prev.abs() {
        return Ok(EconomyState::Stagnating);
    }
    if series.windows(2).all(|w| w[1] > w[0]) {
        Ok(EconomyState::Growing)
    } else {
        Ok(EconomyState::Stagnating)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DebtRatioPath {
    /// Debt over GDP for years `0..=years`.
    pub ratios: Vec<f64>,
    /// `deficit / growth`, defined when the economy grows.
    pub fixed_point: Option<f64>,
}

/// Debt-to-GDP under a permanent deficit: each year's deficit is added to
/// the debt, then the ratio is taken against the grown GDP,
/// `r' = (r + d/100) / (1 + g/100)`.
pub fn debt_ratio_trajectory(
    deficit_pct: f64,
    gdp_growth_pct: f64,
    years: u32,
    initial_ratio: f64,
) -> Result<DebtRatioPath> {
    if years == 0 {
        return Err(Error::domain("years", years, ">= 1"));
    }
    if !(gdp_growth_pct > -100.0) {
        return Err(Error::domain("gdp_growth_pct", gdp_growth_pct, "> -100"));
    }
    let d = deficit_pct / 100.0;
    let g = 1.0 + gdp_growth_pct / 100.0;
    let mut ratios = Vec::with_capacity(years as usize + 1);
    let mut r = initial_ratio;
    ratios.push(r);
    for _ in 0..years {
        r = (r + d) / g;
        ratios.push(r);
    }
    let fixed_point = (gdp_growth_pct > 0.0).then(|| deficit_pct / gdp_growth_pct);
    Ok(DebtRatioPath { ratios, fixed_point })
}

/// Money in circulation, its domestic price level, and its value abroad.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonetaryState {
    pub money_supply: Exact,
    pub price_index: Exact,
    pub fx_value: Exact,
}

impl MonetaryState {
    pub fn new(money_supply: Exact, price_index: Exact, fx_value: Exact) -> Result<Self> {
        for (name, v) in [
            ("money_supply", &money_supply),
            ("price_index", &price_index),
            ("fx_value", &fx_value),
        ] {
            if !exact::is_positive(v) {
                return Err(Error::domain(name, v, "> 0"));
            }
        }
        Ok(Self {
            money_supply,
            price_index,
            fx_value,
        })
    }

    /// Buying power abroad.
    pub fn external_value(&self) -> Exact {
        &self.money_supply * &self.fx_value
    }

    /// Buying power at home.
    pub fn real_balance(&self) -> Exact {
        &self.money_supply / &self.price_index
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrintingReport {
    pub inflation_pct: Exact,
    pub devaluation_pct: Exact,
}

/// Multiplies the money supply by `factor`. Prices follow, the exchange rate
/// falls by the same factor, and neither external nor real buying power
/// changes.
pub fn print_money(state: &MonetaryState, factor: &Exact) -> Result<(MonetaryState, PrintingReport)> {
    if *factor < Exact::one() {
        return Err(Error::domain("factor", factor, ">= 1"));
    }
    let hundred = exact::int(100);
    let next = MonetaryState {
        money_supply: &state.money_supply * factor,
        price_index: &state.price_index * factor,
        fx_value: &state.fx_value / factor,
    };
    let report = PrintingReport {
        inflation_pct: (factor - Exact::one()) * &hundred,
        devaluation_pct: (factor - Exact::one()) / factor * &hundred,
    };
    Ok((next, report))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeigniorageSplit {
    /// Real gain per lender, percent.
    pub lender_gain_pct: Exact,
    /// Real gain per non-lender, percent (negative: a loss).
    pub nonlender_gain_pct: Exact,
}

impl SeigniorageSplit {
    /// Population-weighted total; zero in every case.
    pub fn weighted_sum(&self, lender_fraction: &Exact) -> Exact {
        lender_fraction * &self.lender_gain_pct
            + (Exact::one() - lender_fraction) * &self.nonlender_gain_pct
    }
}

/// Two-class economy in which the state pays `interest_pct` on its bonds by
/// printing money. A fraction `lender_fraction` of the (equal-sized) money
/// holders lent to the state.
///
/// Printing adds `i * f` percent to the money stock, so prices rise by that
/// much. Lenders earn `i` and lose `i * f`; non-lenders only lose `i * f`.
pub fn seigniorage_transfer(lender_fraction: &Exact, interest_pct: &Exact) -> Result<SeigniorageSplit> {
    if lender_fraction.is_negative() || *lender_fraction > Exact::one() {
        return Err(Error::domain("lender_fraction", lender_fraction, "in [0, 1]"));
    }
    if interest_pct.is_negative() {
        return Err(Error::domain("interest_pct", interest_pct, ">= 0"));
    }
    // An empty class has no members to gain or lose anything.
    let inflation = interest_pct * lender_fraction;
    let lender_gain_pct = if lender_fraction.is_zero() {
        Exact::zero()
    } else {
        interest_pct - &inflation
    };
    let nonlender_gain_pct = if lender_fraction.is_one() {
        Exact::zero()
    } else {
        -inflation
    };
    Ok(SeigniorageSplit {
        lender_gain_pct,
        nonlender_gain_pct,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HousePrice {
    pub price: Exact,
    /// What the buyer pays per year after the refund.
    pub net_annual_cost: Exact,
}

/// Market price when buyers spend exactly `affordable_payment` a year and the
/// state refunds `refund_fraction` of mortgage interest.
pub fn house_price(
    affordable_payment: &Exact,
    mortgage_rate: &Exact,
    refund_fraction: &Exact,
) -> Result<HousePrice> {
    if !exact::is_positive(affordable_payment) {
        return Err(Error::domain("affordable_payment", affordable_payment, "> 0"));
    }
    if !exact::is_positive(mortgage_rate) {
        return Err(Error::domain("mortgage_rate", mortgage_rate, "> 0"));
    }
    if refund_fraction.is_negative() || *refund_fraction >= Exact::one() {
        return Err(Error::domain("refund_fraction", refund_fraction, "in [0, 1)"));
    }
    let kept = Exact::one() - refund_fraction;
    let price = affordable_payment / (mortgage_rate * &kept);
    let net_annual_cost = &price * mortgage_rate * kept;
    Ok(HousePrice {
        price,
        net_annual_cost,
    })
}

/// Trade balances between countries always sum to zero; a surplus somewhere
/// is a deficit elsewhere. Returns the sum so callers can check it.
pub fn trade_balance_sum(balances: &[Exact]) -> Exact {
    balances.iter().fold(Exact::zero(), |acc, b| acc + b)
}
