//! The compiled-in scenario set: parameter schemas and the code that turns
//! validated parameters into a trajectory.

use std::fmt;
use std::str::FromStr;

use condenlab::banking::{lending_roi, money_multiplier, redeposit_steps};
use condenlab::condensation::{
    capital_share, capital_share_exact, clothespin_sim, flow_scenario, marx_cycle,
    robotization_sweep, ClothespinPath, CycleDecision, FlowScenario, FlowState,
};
use condenlab::credit::{bankruptcy_fraction, credit_spiral, refinance_game, RefinanceGameConfig};
use condenlab::dilemma::{solve_dilemma, PayoffTable};
use condenlab::distribution::{
    classify_equilibrium, exponential_family, ga_optimize, incentive_total, WealthDistribution,
};
use condenlab::exact::{self, Exact};
use condenlab::macro_dynamics::{
    debt_ratio_trajectory, growth_value, house_price, malthus_classify, print_money,
    seigniorage_transfer, GrowthMethod, GrowthParams, MonetaryState,
};
use condenlab::ownership::{
    dividend_flow, dividend_tax, series_partial_sums, ultimate_ownership, voting_outcome,
    DividendRound, OwnershipNetwork, Support,
};
use condenlab::{Error, Result};
use rust_decimal::Decimal;
use serde_json::Value;

use crate::config::{ParamValue, Params};
use crate::trajectory::{Cell, Metadata, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Number,
    /// Non-negative integer.
    Count,
    Flag,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    Open,
    Inclusive(f64),
    Exclusive(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamSpec {
    pub name: &'static str,
    pub kind: Kind,
    /// `None` makes the parameter required.
    pub default: Option<ParamValue>,
    pub min: Bound,
    pub max: Bound,
    pub doc: &'static str,
}

impl ParamSpec {
    /// The admissible range in words, e.g. `>= 0` or `in (0, 1]`.
    pub fn range_text(&self) -> String {
        match (self.min, self.max) {
            (Bound::Open, Bound::Open) => "any number".into(),
            (Bound::Inclusive(m), Bound::Open) => format!(">= {m}"),
            (Bound::Exclusive(m), Bound::Open) => format!("> {m}"),
            (Bound::Open, Bound::Inclusive(m)) => format!("<= {m}"),
            (Bound::Open, Bound::Exclusive(m)) => format!("< {m}"),
            (lo, hi) => {
                let (open, a) = match lo {
                    Bound::Inclusive(a) => ('[', a),
                    Bound::Exclusive(a) => ('(', a),
                    Bound::Open => unreachable!(),
                };
                let (b, close) = match hi {
                    Bound::Inclusive(b) => (b, ']'),
                    Bound::Exclusive(b) => (b, ')'),
                    Bound::Open => unreachable!(),
                };
                format!("in {open}{a}, {b}{close}")
            }
        }
    }
}

/// Inputs of one run besides its metadata.
pub struct RunContext<'a> {
    pub params: &'a Params,
    pub seed: u64,
    pub network: &'a OwnershipNetwork,
}

pub type RunFn = fn(&RunContext, Metadata) -> Result<Trajectory>;
pub type CrossCheck = fn(&Params) -> Vec<String>;

pub struct ScenarioSpec {
    pub name: &'static str,
    pub description: &'static str,
    pub params: &'static [ParamSpec],
    /// Whether the scenario reads an ownership network.
    pub uses_network: bool,
    pub cross_check: CrossCheck,
    pub run: RunFn,
}

impl ScenarioSpec {
    pub fn param(&self, name: &str) -> Option<&'static ParamSpec> {
        self.params.iter().find(|p| p.name == name)
    }
}

impl PartialEq for ScenarioSpec {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
    }
}

impl fmt::Debug for ScenarioSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScenarioSpec").field("name", &self.name).finish_non_exhaustive()
    }
}

pub fn lookup(name: &str) -> Option<&'static ScenarioSpec> {
    SCENARIOS.iter().find(|s| s.name == name)
}

const fn num(name: &'static str, default: f64, min: Bound, max: Bound, doc: &'static str) -> ParamSpec {
    ParamSpec {
        name,
        kind: Kind::Number,
        default: Some(ParamValue::Number(default)),
        min,
        max,
        doc,
    }
}

const fn required(name: &'static str, min: Bound, doc: &'static str) -> ParamSpec {
    ParamSpec {
        name,
        kind: Kind::Number,
        default: None,
        min,
        max: Bound::Open,
        doc,
    }
}

const fn count(name: &'static str, default: u32, min: f64, max: f64, doc: &'static str) -> ParamSpec {
    ParamSpec {
        name,
        kind: Kind::Count,
        default: Some(ParamValue::Number(default as f64)),
        min: Bound::Inclusive(min),
        max: Bound::Inclusive(max),
        doc,
    }
}

const fn flag(name: &'static str, default: bool, doc: &'static str) -> ParamSpec {
    ParamSpec {
        name,
        kind: Kind::Flag,
        default: Some(ParamValue::Bool(default)),
        min: Bound::Open,
        max: Bound::Open,
        doc,
    }
}

use Bound::{Exclusive as Gt, Exclusive as Lt, Inclusive as Ge, Inclusive as Le, Open};

fn no_cross_check(_: &Params) -> Vec<String> {
    Vec::new()
}

fn grid_cross_check(span: &'static str, step: &'static str) -> impl Fn(&Params) -> Vec<String> {
    move |p| {
        let points = p.num(span) / p.num(step);
        if points > 1e6 {
            vec![format!("{span} / {step} gives {points} grid points; at most 1e6 allowed")]
        } else {
            Vec::new()
        }
    }
}

pub static SCENARIOS: &[ScenarioSpec] = &[
    ScenarioSpec {
        name: "bankruptcy_fraction",
        description: "Share of lent money never returned when interest is charged in a closed economy",
        params: &[
            num("interest_pct", 100.0, Ge(0.0), Open, "interest rate reported in the summary, percent"),
            num("x_max", 200.0, Ge(0.0), Open, "largest interest rate of the sweep, percent"),
            num("step", 10.0, Gt(0.0), Open, "spacing of the sweep"),
        ],
        uses_network: false,
        cross_check: |p| grid_cross_check("x_max", "step")(p),
        run: run_bankruptcy,
    },
    ScenarioSpec {
        name: "refinance_game",
        description: "Monte-Carlo borrowers repaying with interest out of a fixed or growing money stock",
        params: &[
            count("n_borrowers", 1000, 1.0, 1e6, "number of borrowers"),
            num("interest_pct", 100.0, Ge(0.0), Le(1e6), "interest per loan, percent"),
            count("rounds", 1000, 1.0, 1e6, "rounds to play"),
            flag("refinance", false, "roll loans over instead of forcing repayment"),
            num("money_growth_pct", 0.0, Ge(0.0), Le(1e6), "money-supply growth per round, percent"),
        ],
        uses_network: false,
        cross_check: no_cross_check,
        run: run_refinance,
    },
    ScenarioSpec {
        name: "credit_spiral",
        description: "Interest-rate feedback when rates above a reference attract a risk surcharge",
        params: &[
            num("r0", 0.05, Ge(0.0), Open, "starting rate"),
            num("r_ref", 0.04, Ge(0.0), Open, "reference rate"),
            num("sensitivity", 50.0, Ge(0.0), Open, "surcharge per unit of excess rate"),
            count("rounds", 40, 0.0, 1e6, "iterations"),
        ],
        uses_network: false,
        cross_check: no_cross_check,
        run: run_spiral,
    },
    ScenarioSpec {
        name: "lending_roi",
        description: "Return on real money committed when lending against fractional reserves",
        params: &[
            num("interest_rate", 0.03, Ge(0.0), Open, "interest rate as a fraction"),
            num("reserve_ratio", 0.1, Gt(0.0), Le(1.0), "reserve ratio as a fraction"),
        ],
        uses_network: false,
        cross_check: no_cross_check,
        run: run_lending_roi,
    },
    ScenarioSpec {
        name: "redeposit_cascade",
        description: "Deposits created as lent money is redeposited bank after bank",
        params: &[
            num("base", 1.0, Gt(0.0), Open, "initial deposit"),
            num("reserve_ratio", 0.1, Gt(0.0), Le(1.0), "reserve kept by each bank"),
            count("n_banks", 200, 0.0, 1e5, "banks the money passes through"),
        ],
        uses_network: false,
        cross_check: no_cross_check,
        run: run_redeposit,
    },
    ScenarioSpec {
        name: "growth",
        description: "Economy borrowing from tomorrow: closed form against fourth-order Runge-Kutta",
        params: &[
            num("e0", 1.0, Gt(0.0), Open, "initial economy size"),
            num("alpha", 10.0, Gt(0.0), Open, "borrowing-from-tomorrow factor"),
            num("t_max", 50.0, Ge(0.0), Le(1e4), "last time point"),
            num("dt", 1.0, Gt(0.0), Open, "output spacing"),
            num("rk4_step", 1e-3, Gt(0.0), Open, "largest integration step"),
        ],
        uses_network: false,
        cross_check: |p| {
            let mut out = grid_cross_check("t_max", "dt")(p);
            if p.num("t_max") / p.num("rk4_step") > 1e7 {
                out.push("t_max / rk4_step exceeds 1e7 integration steps".into());
            }
            out
        },
        run: run_growth,
    },
    ScenarioSpec {
        name: "debt_ratio",
        description: "Public debt over GDP under a permanent deficit",
        params: &[
            num("deficit_pct", 3.0, Open, Open, "deficit per year, percent of GDP"),
            num("growth_pct", 3.0, Gt(-100.0), Open, "GDP growth per year, percent"),
            count("years", 100, 1.0, 1e6, "years to run"),
            num("initial_ratio", 1.0, Ge(0.0), Open, "starting debt over GDP"),
        ],
        uses_network: false,
        cross_check: no_cross_check,
        run: run_debt_ratio,
    },
    ScenarioSpec {
        name: "print_money",
        description: "Inflation and devaluation from multiplying the money supply",
        params: &[
            num("factor", 10.0, Ge(1.0), Open, "money-supply multiplier"),
            num("money_supply", 100.0, Gt(0.0), Open, "money before printing"),
            num("price_index", 1.0, Gt(0.0), Open, "price level before printing"),
            num("fx_value", 1.0, Gt(0.0), Open, "external value per money unit before printing"),
        ],
        uses_network: false,
        cross_check: no_cross_check,
        run: run_print_money,
    },
    ScenarioSpec {
        name: "seigniorage",
        description: "Real gains when interest is paid out of newly printed money",
        params: &[
            num("interest_pct", 3.0, Ge(0.0), Open, "interest rate, percent"),
            count("steps", 10, 1.0, 1e4, "grid points for the lender fraction beyond zero"),
        ],
        uses_network: false,
        cross_check: no_cross_check,
        run: run_seigniorage,
    },
    ScenarioSpec {
        name: "house_price",
        description: "House prices capitalizing a mortgage-interest tax refund",
        params: &[
            num("payment", 3000.0, Gt(0.0), Open, "affordable yearly payment"),
            num("mortgage_rate", 0.03, Gt(0.0), Open, "mortgage rate as a fraction"),
            num("refund_max", 0.9, Ge(0.0), Lt(1.0), "largest refund fraction of the sweep"),
            count("refund_steps", 18, 1.0, 1e4, "sweep points beyond zero"),
        ],
        uses_network: false,
        cross_check: no_cross_check,
        run: run_house_price,
    },
    ScenarioSpec {
        name: "marx_cycle",
        description: "One money-commodity-money circuit with the refuse-unless-profitable rule",
        params: &[
            required("m", Ge(0.0), "money advanced"),
            required("mop_spend", Ge(0.0), "spent on means of production"),
            required("lp_spend", Ge(0.0), "spent on labor power"),
            required("output_value", Ge(0.0), "sale value of the product"),
        ],
        uses_network: false,
        cross_check: |p| {
            if p.num("mop_spend") + p.num("lp_spend") > p.num("m") {
                vec!["mop_spend + lp_spend must not exceed m".into()]
            } else {
                Vec::new()
            }
        },
        run: run_marx,
    },
    ScenarioSpec {
        name: "capital_share",
        description: "Capital's production share when its income is reinvested every cycle",
        params: &[count("cycles", 30, 1.0, 1000.0, "cycles to tabulate")],
        uses_network: false,
        cross_check: no_cross_check,
        run: run_capital_share,
    },
    ScenarioSpec {
        name: "flow_loan",
        description: "Humans consume more than they produce and borrow the difference from capital",
        params: &[
            count("cycles", 10, 0.0, 1e5, "cycles to run"),
            num("human_prod_share", 0.5, Ge(0.0), Le(1.0), "humans' share of production"),
            num("human_cons_share", 0.95, Ge(0.0), Le(1.0), "humans' share of consumption"),
        ],
        uses_network: false,
        cross_check: no_cross_check,
        run: run_flow_loan,
    },
    ScenarioSpec {
        name: "flow_reinvest",
        description: "Capital reinvests its income; the machine stock doubles each cycle",
        params: &[
            count("cycles", 10, 0.0, 1000.0, "cycles to run"),
            num("human_prod_share", 0.5, Gt(0.0), Lt(1.0), "humans' initial share of production"),
        ],
        uses_network: false,
        cross_check: no_cross_check,
        run: run_flow_reinvest,
    },
    ScenarioSpec {
        name: "clothespin",
        description: "Two clothespin makers after one of them builds a machine",
        params: &[
            flag("build_machines", false, "keep building machines instead of lending rights"),
            count("years", 5, 0.0, 60.0, "years to run"),
        ],
        uses_network: false,
        cross_check: no_cross_check,
        run: run_clothespin,
    },
    ScenarioSpec {
        name: "robotization",
        description: "Firms replacing labor with machines when wages are the only demand",
        params: &[
            count("n_firms", 10, 1.0, 1e5, "number of firms"),
            count("robotized", 1, 0.0, 1e5, "firms that pay no wages"),
            num("wage_bill", 10.0, Gt(0.0), Open, "input budget per firm"),
            num("mop_cost_ratio", 0.5, Ge(0.0), Open, "machine cost per unit of labor replaced"),
        ],
        uses_network: false,
        cross_check: |p| {
            if p.count("robotized") > p.count("n_firms") {
                vec!["robotized must not exceed n_firms".into()]
            } else {
                Vec::new()
            }
        },
        run: run_robotization,
    },
    ScenarioSpec {
        name: "exponential_family",
        description: "Wealth distribution w0 + (wmax - w0)(e^{bx} - 1)/(e^b - 1) and its incentives",
        params: &[
            num("w0", 1.0 / 300.0, Gt(0.0), Le(1.0), "wealth floor"),
            num("b", 5.0, Open, Open, "shape exponent, non-zero"),
            count("n", 30, 2.0, 1e6, "persons"),
        ],
        uses_network: false,
        cross_check: |p| {
            let mut out = Vec::new();
            if p.num("b") == 0.0 {
                out.push("b must be non-zero".into());
            }
            if p.num("w0") * p.num("n") > 1.0 + 1e-12 {
                out.push("w0 * n must not exceed 1".into());
            }
            out
        },
        run: run_exponential_family,
    },
    ScenarioSpec {
        name: "ga_optimize",
        description: "Random-mutation search for the wealth distribution with the most incentive",
        params: &[
            count("n", 30, 2.0, 1e4, "persons"),
            num("floor_fraction", 0.1, Ge(0.0), Le(1.0), "floor as a fraction of the mean wealth 1/n"),
            count("steps", 100_000, 0.0, 1e8, "mutation steps"),
            num("mutation_scale", 0.1, Gt(0.0), Open, "largest transfer in units of the mean wealth"),
            flag("random_init", false, "start from a random distribution instead of the uniform one"),
            count("record_every", 1000, 1.0, 1e8, "steps between recorded rows"),
        ],
        uses_network: false,
        cross_check: no_cross_check,
        run: run_ga,
    },
    ScenarioSpec {
        name: "dilemma",
        description: "Dominant strategies, Nash equilibria and Pareto set of the prisoner's dilemma",
        params: &[],
        uses_network: false,
        cross_check: no_cross_check,
        run: run_dilemma,
    },
    ScenarioSpec {
        name: "ownership",
        description: "Ultimate ownership of cross-held banks as partial sums of the holding series",
        params: &[count("stride", 50, 1.0, 1e6, "series terms between recorded rows")],
        uses_network: true,
        cross_check: no_cross_check,
        run: run_ownership,
    },
    ScenarioSpec {
        name: "dividend_flow",
        description: "One round of dividends through cross-held banks, with a dividend tax",
        params: &[
            num("ops_profit", 2.0, Open, Open, "operating profit of every bank"),
            num("declared", 100.0, Ge(0.0), Open, "dividend declared by every bank"),
            num("tax_rate", 0.25, Ge(0.0), Le(1.0), "tax on declared dividends"),
        ],
        uses_network: true,
        cross_check: no_cross_check,
        run: run_dividend_flow,
    },
    ScenarioSpec {
        name: "voting",
        description: "Shareholder vote in one bank of a cross-held network",
        params: &[
            count("bank", 0, 0.0, 1e6, "bank whose shareholders vote"),
            flag("outsider_supports", false, "the outside investor votes yes"),
            flag("banks_support", true, "the other banks vote yes"),
        ],
        uses_network: true,
        cross_check: no_cross_check,
        run: run_voting,
    },
];

fn param_error(name: &'static str, value: f64) -> Error {
    Error::Domain {
        name,
        value: value.to_string(),
        expected: "representable as a decimal",
    }
}

fn dec(p: &Params, name: &'static str) -> Result<Decimal> {
    let v = p.num(name);
    Decimal::from_str(&v.to_string()).map_err(|_| param_error(name, v))
}

fn exact_param(p: &Params, name: &'static str) -> Result<Exact> {
    let v = p.num(name);
    exact::from_f64(v).ok_or_else(|| param_error(name, v))
}

fn row(cells: impl IntoIterator<Item = Cell>) -> Vec<Cell> {
    cells.into_iter().collect()
}

fn grid(span: f64, step: f64) -> impl Iterator<Item = f64> {
    let n = (span / step + 1e-9).floor() as u64;
    (0..=n).map(move |k| k as f64 * step)
}

fn ratio_text(x: &Exact) -> Value {
    Value::String(x.to_string())
}

fn run_bankruptcy(ctx: &RunContext, meta: Metadata) -> Result<Trajectory> {
    let p = ctx.params;
    let mut t = Trajectory::new(&["interest_pct", "y_pct", "identity_residual"], meta);
    for x in grid(p.num("x_max"), p.num("step")) {
        let y = bankruptcy_fraction(x)?;
        let residual = (1.0 - y / 100.0) * (1.0 + x / 100.0) - 1.0;
        t.push(row([x.into(), y.into(), residual.into()]));
    }
    t.summarize("y_pct", bankruptcy_fraction(p.num("interest_pct"))?);
    Ok(t)
}

fn run_refinance(ctx: &RunContext, meta: Metadata) -> Result<Trajectory> {
    let p = ctx.params;
    let config = RefinanceGameConfig {
        n_borrowers: p.count("n_borrowers") as usize,
        interest_pct: p.num("interest_pct"),
        rounds: p.count("rounds") as u32,
        refinance: p.flag("refinance"),
        money_growth_pct: p.num("money_growth_pct"),
        seed: ctx.seed,
    };
    let out = refinance_game(&config)?;
    let mut t = Trajectory::new(
        &[
            "round",
            "active_borrowers",
            "money_supply",
            "outstanding_debt",
            "repaid_principal",
            "defaulted_principal",
            "repayments",
            "defaults",
        ],
        meta,
    );
    for r in &out.rounds {
        t.push(row([
            r.round.into(),
            r.active_borrowers.into(),
            r.money_supply.into(),
            r.outstanding_debt.into(),
            r.repaid_principal.into(),
            r.defaulted_principal.into(),
            r.repayments.into(),
            r.defaults.into(),
        ]));
    }
    t.summarize("defaulted_money_fraction", out.defaulted_money_fraction);
    t.summarize("defaulted_borrower_fraction", out.defaulted_borrower_fraction);
    t.summarize("lender_net_gain_pct", out.lender_net_gain_pct);
    t.summarize("total_principal", out.total_principal);
    t.summarize("outstanding_principal", out.outstanding_principal);
    t.summarize("formula_y_pct", bankruptcy_fraction(config.interest_pct)?);
    Ok(t)
}

fn run_spiral(ctx: &RunContext, meta: Metadata) -> Result<Trajectory> {
    let p = ctx.params;
    let s = credit_spiral(p.num("r0"), p.num("r_ref"), p.num("sensitivity"), p.count("rounds") as u32)?;
    let mut t = Trajectory::new(&["round", "rate"], meta);
    for (k, r) in s.rates.iter().enumerate() {
        t.push(row([k.into(), (*r).into()]));
    }
    t.summarize("diverged", s.diverged);
    Ok(t)
}

fn run_lending_roi(ctx: &RunContext, meta: Metadata) -> Result<Trajectory> {
    let i = dec(ctx.params, "interest_rate")?;
    let rr = dec(ctx.params, "reserve_ratio")?;
    let mut t = Trajectory::new(&["interest_rate", "reserve_ratio", "money_multiplier", "roi"], meta);
    let roi = lending_roi(i, rr)?;
    t.push(row([i.into(), rr.into(), money_multiplier(rr)?.into(), roi.into()]));
    t.summarize("roi", roi.normalize().to_string());
    Ok(t)
}

fn run_redeposit(ctx: &RunContext, meta: Metadata) -> Result<Trajectory> {
    let base = dec(ctx.params, "base")?;
    let rr = dec(ctx.params, "reserve_ratio")?;
    let steps = redeposit_steps(base, rr, ctx.params.count("n_banks") as u32)?;
    let mut t = Trajectory::new(&["bank", "total_deposits"], meta);
    for (k, total) in steps.iter().enumerate() {
        t.push(row([k.into(), (*total).into()]));
    }
    let last = steps.last().copied().unwrap_or(base);
    t.summarize("total_deposits", last.normalize().to_string());
    t.summarize("limit", (base / rr).normalize().to_string());
    Ok(t)
}

fn run_growth(ctx: &RunContext, meta: Metadata) -> Result<Trajectory> {
    let p = ctx.params;
    let params = GrowthParams::new(p.num("e0"), p.num("alpha"))?;
    let step = p.num("rk4_step");
    let mut t = Trajectory::new(&["t", "closed", "rk4", "rel_diff"], meta);
    let mut series = Vec::new();
    for time in grid(p.num("t_max"), p.num("dt")) {
        let closed = growth_value(params, time, GrowthMethod::Closed)?;
        let rk4 = growth_value(params, time, GrowthMethod::Rk4 { step })?;
        series.push(closed);
        t.push(row([time.into(), closed.into(), rk4.into(), ((rk4 - closed) / closed).abs().into()]));
    }
    t.summarize("growth_rate", params.growth_rate());
    if series.len() >= 2 {
        t.summarize("economy_state", malthus_classify(&series, 1e-12)?.as_str());
    }
    Ok(t)
}

fn run_debt_ratio(ctx: &RunContext, meta: Metadata) -> Result<Trajectory> {
    let p = ctx.params;
    let path = debt_ratio_trajectory(
        p.num("deficit_pct"),
        p.num("growth_pct"),
        p.count("years") as u32,
        p.num("initial_ratio"),
    )?;
    let mut t = Trajectory::new(&["year", "ratio"], meta);
    for (k, r) in path.ratios.iter().enumerate() {
        t.push(row([k.into(), (*r).into()]));
    }
    t.summarize("fixed_point", path.fixed_point);
    Ok(t)
}

fn run_print_money(ctx: &RunContext, meta: Metadata) -> Result<Trajectory> {
    let p = ctx.params;
    let before = MonetaryState::new(
        exact_param(p, "money_supply")?,
        exact_param(p, "price_index")?,
        exact_param(p, "fx_value")?,
    )?;
    let (after, report) = print_money(&before, &exact_param(p, "factor")?)?;
    let mut t = Trajectory::new(
        &["stage", "money_supply", "price_index", "fx_value", "external_value", "real_balance"],
        meta,
    );
    for (stage, s) in [("before", &before), ("after", &after)] {
        t.push(row([
            stage.into(),
            (&s.money_supply).into(),
            (&s.price_index).into(),
            (&s.fx_value).into(),
            s.external_value().into(),
            s.real_balance().into(),
        ]));
    }
    t.summarize("inflation_pct", ratio_text(&report.inflation_pct));
    t.summarize("devaluation_pct", ratio_text(&report.devaluation_pct));
    Ok(t)
}

fn run_seigniorage(ctx: &RunContext, meta: Metadata) -> Result<Trajectory> {
    let i = exact_param(ctx.params, "interest_pct")?;
    let steps = ctx.params.count("steps") as i64;
    let mut t = Trajectory::new(
        &["lender_fraction", "lender_gain_pct", "nonlender_gain_pct", "weighted_sum"],
        meta,
    );
    for k in 0..=steps {
        let f = exact::ratio(k, steps);
        let split = seigniorage_transfer(&f, &i)?;
        let sum = split.weighted_sum(&f);
        t.push(row([
            (&f).into(),
            split.lender_gain_pct.into(),
            split.nonlender_gain_pct.into(),
            sum.into(),
        ]));
    }
    Ok(t)
}

fn run_house_price(ctx: &RunContext, meta: Metadata) -> Result<Trajectory> {
    let p = ctx.params;
    let pay = exact_param(p, "payment")?;
    let rate = exact_param(p, "mortgage_rate")?;
    let max = exact_param(p, "refund_max")?;
    let steps = p.count("refund_steps") as i64;
    let mut t = Trajectory::new(&["refund_fraction", "price", "net_annual_cost"], meta);
    for k in 0..=steps {
        let refund = &max * exact::ratio(k, steps);
        let h = house_price(&pay, &rate, &refund)?;
        t.push(row([refund.into(), h.price.into(), h.net_annual_cost.into()]));
    }
    Ok(t)
}

fn run_marx(ctx: &RunContext, meta: Metadata) -> Result<Trajectory> {
    let p = ctx.params;
    let s = marx_cycle(
        dec(p, "m")?,
        dec(p, "mop_spend")?,
        dec(p, "lp_spend")?,
        dec(p, "output_value")?,
    )?;
    let decision = match s.decision {
        CycleDecision::Proceed => "proceed",
        CycleDecision::Refuse => "refuse",
    };
    let mut t = Trajectory::new(
        &["m", "mop_spend", "lp_spend", "output_value", "m_prime", "surplus", "decision"],
        meta,
    );
    t.push(row([
        s.m.into(),
        s.mop_spend.into(),
        s.lp_spend.into(),
        s.output_value.into(),
        s.m_prime.into(),
        s.surplus().into(),
        decision.into(),
    ]));
    t.summarize("decision", decision);
    Ok(t)
}

fn run_capital_share(ctx: &RunContext, meta: Metadata) -> Result<Trajectory> {
    let mut t = Trajectory::new(&["n", "share", "share_exact"], meta);
    for n in 1..=ctx.params.count("cycles") as u32 {
        t.push(row([n.into(), capital_share(n)?.into(), capital_share_exact(n)?.into()]));
    }
    Ok(t)
}

const FLOW_COLUMNS: [&str; 8] = [
    "cycle",
    "human_prod_share",
    "capital_prod_share",
    "human_cons_share",
    "capital_cons_share",
    "total_production",
    "total_consumption",
    "human_debt",
];

fn flow_trajectory(states: &[FlowState], meta: Metadata) -> Trajectory {
    let mut t = Trajectory::new(&FLOW_COLUMNS, meta);
    for s in states {
        t.push(row([
            s.cycle.into(),
            (&s.human_prod_share).into(),
            (&s.capital_prod_share).into(),
            (&s.human_cons_share).into(),
            (&s.capital_cons_share).into(),
            (&s.total_production).into(),
            (&s.total_consumption).into(),
            (&s.human_debt).into(),
        ]));
    }
    t
}

fn run_flow_loan(ctx: &RunContext, meta: Metadata) -> Result<Trajectory> {
    let p = ctx.params;
    let initial = FlowState::new(exact_param(p, "human_prod_share")?, exact_param(p, "human_cons_share")?)?;
    let states = flow_scenario(FlowScenario::Loan, p.count("cycles") as u32, &initial);
    let mut t = flow_trajectory(&states, meta);
    let debt = &states.last().expect("initial state").human_debt;
    t.summarize("human_debt", ratio_text(debt));
    Ok(t)
}

fn run_flow_reinvest(ctx: &RunContext, meta: Metadata) -> Result<Trajectory> {
    let p = ctx.params;
    let share = exact_param(p, "human_prod_share")?;
    let initial = FlowState::new(share.clone(), share)?;
    let states = flow_scenario(FlowScenario::Reinvest, p.count("cycles") as u32, &initial);
    let mut t = flow_trajectory(&states, meta);
    let last = states.last().expect("initial state");
    t.summarize("capital_prod_share", ratio_text(&last.capital_prod_share));
    Ok(t)
}

fn run_clothespin(ctx: &RunContext, meta: Metadata) -> Result<Trajectory> {
    let path = if ctx.params.flag("build_machines") {
        ClothespinPath::BuildMachines
    } else {
        ClothespinPath::LendRights
    };
    let mut t = Trajectory::new(
        &[
            "year",
            "my_manual_units",
            "neighbor_units",
            "my_machines",
            "price",
            "my_rights",
            "neighbor_rights",
            "neighbor_debt",
            "total_rights",
        ],
        meta,
    );
    for s in clothespin_sim(path, ctx.params.count("years") as u32) {
        t.push(row([
            s.year.into(),
            (&s.my_manual_units).into(),
            (&s.neighbor_units).into(),
            s.my_machines.into(),
            (&s.price).into(),
            (&s.my_rights).into(),
            (&s.neighbor_rights).into(),
            (&s.neighbor_debt).into(),
            s.total_rights().into(),
        ]));
    }
    Ok(t)
}

fn run_robotization(ctx: &RunContext, meta: Metadata) -> Result<Trajectory> {
    let p = ctx.params;
    let n = p.count("n_firms") as usize;
    let robotized = p.count("robotized") as usize;
    let shares: Vec<f64> = (0..n).map(|k| if k < robotized { 0.0 } else { 1.0 }).collect();
    let report = robotization_sweep(&shares, p.num("wage_bill"), p.num("mop_cost_ratio"))?;
    let mut t = Trajectory::new(&["firm", "lp_share", "wages", "cost", "revenue", "margin"], meta);
    for (k, f) in report.firms.iter().enumerate() {
        t.push(row([
            k.into(),
            f.lp_share.into(),
            f.wages.into(),
            f.cost.into(),
            f.revenue.into(),
            f.margin.into(),
        ]));
    }
    t.summarize("aggregate_demand", report.aggregate_demand);
    t.summarize("output_value", report.output_value);
    t.summarize("collapse", report.collapse);
    Ok(t)
}

fn run_exponential_family(ctx: &RunContext, meta: Metadata) -> Result<Trajectory> {
    let p = ctx.params;
    let fam = exponential_family(p.num("w0"), p.num("b"), p.count("n") as usize)?;
    let inc = incentive_total(&fam.distribution)?;
    let mut t = Trajectory::new(&["rank", "weight", "incentive"], meta);
    for (k, (w, i)) in fam.distribution.weights().iter().zip(&inc.per_person).enumerate() {
        t.push(row([(k + 1).into(), (*w).into(), (*i).into()]));
    }
    t.summarize("wmax", fam.params.wmax);
    t.summarize("total_incentive", inc.total);
    Ok(t)
}

fn run_ga(ctx: &RunContext, meta: Metadata) -> Result<Trajectory> {
    let p = ctx.params;
    let n = p.count("n") as usize;
    let floor = p.num("floor_fraction") / n as f64;
    let init = if p.flag("random_init") {
        WealthDistribution::random(n, floor, ga_init_seed(ctx.seed))?
    } else {
        WealthDistribution::uniform(n, floor)?
    };
    let steps = p.count("steps") as usize;
    let every = p.count("record_every") as usize;
    let out = ga_optimize(&init, steps, p.num("mutation_scale"), ctx.seed);
    let mut t = Trajectory::new(&["step", "objective"], meta);
    for (k, v) in out.history.iter().enumerate() {
        if k % every == 0 || k == steps {
            t.push(row([k.into(), (*v).into()]));
        }
    }
    let w = out.distribution.weights();
    let top = w[w.len() - 1];
    t.summarize("equilibrium", classify_equilibrium(&out.distribution, 0.05).as_str());
    t.summarize("objective", out.objective());
    t.summarize("accepted", out.accepted);
    t.summarize("top", top);
    t.summarize("top_over_floor", if floor > 0.0 { top / floor } else { f64::INFINITY });
    t.summarize("weights", w.to_vec());
    Ok(t)
}

/// Seed of the random starting distribution, kept apart from the mutation
/// stream so both can be replayed independently.
pub fn ga_init_seed(seed: u64) -> u64 {
    seed.wrapping_add(1000)
}

fn run_dilemma(_: &RunContext, meta: Metadata) -> Result<Trajectory> {
    let table = PayoffTable::prisoners();
    let s = solve_dilemma(&table);
    let mut t = Trajectory::new(&["action_a", "action_b", "utility_a", "utility_b", "nash", "pareto"], meta);
    for a in condenlab::dilemma::Action::ALL {
        for b in condenlab::dilemma::Action::ALL {
            let (ua, ub) = table.payoff((a, b));
            t.push(row([
                a.as_str().into(),
                b.as_str().into(),
                ua.into(),
                ub.into(),
                s.nash.contains(&(a, b)).into(),
                s.pareto.contains(&(a, b)).into(),
            ]));
        }
    }
    let name = |x: Option<condenlab::dilemma::Action>| x.map_or(Value::Null, |a| a.as_str().into());
    t.summarize("dominant_a", name(s.dominant.0));
    t.summarize("dominant_b", name(s.dominant.1));
    Ok(t)
}

fn run_ownership(ctx: &RunContext, meta: Metadata) -> Result<Trajectory> {
    let net = ctx.network;
    let stride = ctx.params.count("stride") as usize;
    let mut columns = vec!["term".to_string()];
    columns.extend((0..net.len()).map(|j| format!("bank_{j}")));
    let mut t = Trajectory::with_columns(columns, meta);
    let mut k = 0usize;
    let mut last = Vec::new();
    let terms = series_partial_sums(net, |total| {
        if k.is_multiple_of(stride) {
            let mut r = vec![Cell::from(k)];
            r.extend(total.iter().map(|&v| Cell::from(v)));
            t.push(r);
        }
        last = total.to_vec();
        k += 1;
    })?;
    if !(k - 1).is_multiple_of(stride) {
        let mut r = vec![Cell::from(k - 1)];
        r.extend(last.iter().map(|&v| Cell::from(v)));
        t.push(r);
    }
    let u = ultimate_ownership(net)?;
    t.summarize("series_terms", terms);
    t.summarize("solve", u.solve.clone());
    t.summarize("spectral_radius", u.spectral_radius);
    t.summarize("max_discrepancy", u.max_discrepancy());
    Ok(t)
}

fn run_dividend_flow(ctx: &RunContext, meta: Metadata) -> Result<Trajectory> {
    let p = ctx.params;
    let n = ctx.network.len();
    let round = DividendRound {
        ops_profit: vec![dec(p, "ops_profit")?; n],
        declared: vec![dec(p, "declared")?; n],
    };
    let flow = dividend_flow(ctx.network, &round)?;
    let tax = dividend_tax(&round, dec(p, "tax_rate")?)?;
    let mut t = Trajectory::new(
        &[
            "bank",
            "ops_profit",
            "declared",
            "dividend_income",
            "total_income",
            "payout",
            "net",
            "tax",
            "insolvent",
        ],
        meta,
    );
    for (j, b) in flow.banks.iter().enumerate() {
        t.push(row([
            j.into(),
            round.ops_profit[j].into(),
            round.declared[j].into(),
            b.dividend_income.into(),
            b.total_income.into(),
            b.payout.into(),
            b.net.into(),
            tax.tax[j].into(),
            tax.insolvent[j].into(),
        ]));
    }
    t.summarize("outsider_receipts", flow.outsider_receipts.normalize().to_string());
    t.summarize("other_receipts", flow.other_receipts.normalize().to_string());
    t.summarize("tax_total", tax.total.normalize().to_string());
    Ok(t)
}

fn run_voting(ctx: &RunContext, meta: Metadata) -> Result<Trajectory> {
    let p = ctx.params;
    let bank = p.count("bank") as usize;
    let support = Support {
        outsider: p.flag("outsider_supports"),
        banks: vec![p.flag("banks_support"); ctx.network.len()],
    };
    let tally = voting_outcome(ctx.network, bank, &support)?;
    let mut t = Trajectory::new(&["bank", "yes", "no", "abstained", "passed"], meta);
    t.push(row([
        bank.into(),
        tally.yes.into(),
        tally.no.into(),
        tally.abstained.into(),
        tally.passed.into(),
    ]));
    t.summarize("passed", tally.passed);
    Ok(t)
}
