//! Interest and forced default in a closed economy.
//!
//! When only the lender can create money, borrowers as a group can never
//! return principal plus interest. With `x` percent interest the lender
//! breaks even only if `y = 100x / (100 + x)` percent of the lent money is
//! never returned. [`refinance_game`] plays this out agent by agent.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Percent of borrowed money that is never returned when `interest_pct`
/// interest is charged and the lender exactly breaks even.
pub fn bankruptcy_fraction(interest_pct: f64) -> Result<f64> {
    if !(interest_pct >= 0.0) || !interest_pct.is_finite() {
        return Err(Error::domain("interest_pct", interest_pct, "finite and >= 0"));
    }
    Ok(100.0 * interest_pct / (100.0 + interest_pct))
}

/// Cash each borrower starts with, in integer money units.
pub const ENDOWMENT_UNITS: u64 = 1_000_000;

/// Upper bound on the share of its cash a borrower spends in one trading round.
pub const TRADE_SHARE: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefinanceGameConfig {
    pub n_borrowers: usize,
    pub interest_pct: f64,
    pub rounds: u32,
    pub refinance: bool,
    pub money_growth_pct: f64,
    pub seed: u64,
}

impl RefinanceGameConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_borrowers == 0 {
            return Err(Error::domain("n_borrowers", self.n_borrowers, ">= 1"));
        }
        if self.rounds == 0 {
            return Err(Error::domain("rounds", self.rounds, ">= 1"));
        }
        if !(self.interest_pct >= 0.0) || !self.interest_pct.is_finite() {
            return Err(Error::domain("interest_pct", self.interest_pct, "finite and >= 0"));
        }
        if !(self.money_growth_pct >= 0.0) || !self.money_growth_pct.is_finite() {
            return Err(Error::domain(
                "money_growth_pct",
                self.money_growth_pct,
                "finite and >= 0",
            ));
        }
        Ok(())
    }
}

/// One row of the per-round ledger. Amounts are in money units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: u32,
    pub active_borrowers: usize,
    pub money_supply: u64,
    pub outstanding_debt: u64,
    pub repaid_principal: u64,
    pub defaulted_principal: u64,
    pub repayments: usize,
    pub defaults: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DefaultOutcome {
    /// Percent of lent principal never returned.
    pub defaulted_money_fraction: f64,
    /// Percent of borrowers that defaulted.
    pub defaulted_borrower_fraction: f64,
    /// Lender's gain on the money it lent, percent. Tends to zero.
    pub lender_net_gain_pct: f64,
    pub total_principal: u64,
    /// Principal still rolling over when the game stops. Only nonzero with
    /// refinancing.
    pub outstanding_principal: u64,
    pub rounds: Vec<RoundRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Active,
    Repaid,
    Defaulted,
}

struct Game {
    cash: Vec<u64>,
    principal: Vec<u64>,
    due: Vec<u64>,
    status: Vec<Status>,
    rng: ChaCha8Rng,
    repaid_principal: u64,
    defaulted_principal: u64,
    received: u64,
    idle_cash: u64,
}

impl Game {
    fn new(config: &RefinanceGameConfig) -> Self {
        let n = config.n_borrowers;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let money = ENDOWMENT_UNITS * n as u64;

        // Loan sizes vary; the money they created sits in equal cash holdings.
        let weights: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..1.5)).collect();
        let total_weight: f64 = weights.iter().sum();
        let mut principal: Vec<u64> = weights
            .iter()
            .map(|w| (w / total_weight * money as f64).floor() as u64)
            .collect();
        let remainder = (money - principal.iter().sum::<u64>()) as usize;
        for p in principal.iter_mut().take(remainder) {
            *p += 1;
        }
        let due = principal
            .iter()
            .map(|&p| with_interest(p, config.interest_pct))
            .collect();

        Self {
            cash: vec![ENDOWMENT_UNITS; n],
            principal,
            due,
            status: vec![Status::Active; n],
            rng,
            repaid_principal: 0,
            defaulted_principal: 0,
            received: 0,
            idle_cash: 0,
        }
    }

    fn active(&self) -> Vec<usize> {
        (0..self.status.len())
            .filter(|&i| self.status[i] == Status::Active)
            .collect()
    }

    fn money_supply(&self) -> u64 {
        self.cash.iter().sum::<u64>() + self.idle_cash
    }

    fn outstanding_debt(&self) -> u64 {
        self.active().iter().map(|&i| self.due[i]).sum()
    }

    fn trade(&mut self) {
        let active = self.active();
        if active.len() < 2 {
            return;
        }
        for &i in &active {
            let j = loop {
                let j = *active.choose(&mut self.rng).expect("non-empty");
                if j != i {
                    break j;
                }
            };
            let share: f64 = self.rng.gen_range(0.0..TRADE_SHARE);
            let amount = (self.cash[i] as f64 * share).floor() as u64;
            self.cash[i] -= amount;
            self.cash[j] += amount;
        }
    }

    /// Hands `amount` to a random active borrower other than `from`, or parks
    /// it as idle money when nobody is left to take it.
    fn spend(&mut self, from: usize, amount: u64) {
        if amount == 0 {
            return;
        }
        let others: Vec<usize> = self.active().into_iter().filter(|&j| j != from).collect();
        match others.choose(&mut self.rng) {
            Some(&j) => self.cash[j] += amount,
            None => self.idle_cash += amount,
        }
    }

    /// Lowest cash first, ties to the lowest index.
    fn weakest(&self) -> Option<usize> {
        self.active()
            .into_iter()
            .min_by_key(|&i| (self.cash[i], i))
    }

    fn default_borrower(&mut self, i: usize) {
        self.status[i] = Status::Defaulted;
        self.defaulted_principal += self.principal[i];
        let cash = std::mem::take(&mut self.cash[i]);
        self.spend(i, cash);
    }

    fn record(&self, round: u32, repayments: usize, defaults: usize) -> RoundRecord {
        RoundRecord {
            round,
            active_borrowers: self.active().len(),
            money_supply: self.money_supply(),
            outstanding_debt: self.outstanding_debt(),
            repaid_principal: self.repaid_principal,
            defaulted_principal: self.defaulted_principal,
            repayments,
            defaults,
        }
    }

    /// Maturity without refinancing. Whenever the borrowers together hold
    /// less cash than they owe, the weakest defaults and its cash moves on to
    /// the others. Anyone who can then pay does so and spends the rest.
    fn settle(&mut self) -> (usize, usize) {
        let mut defaults = 0;
        loop {
            let active = self.active();
            let cash: u64 = active.iter().map(|&i| self.cash[i]).sum();
            let owed: u64 = active.iter().map(|&i| self.due[i]).sum();
            if active.is_empty() || cash >= owed {
                break;
            }
            let i = self.weakest().expect("non-empty");
            self.default_borrower(i);
            defaults += 1;
        }

        let mut repayments = 0;
        for i in self.active() {
            if self.status[i] == Status::Active && self.cash[i] >= self.due[i] {
                self.cash[i] -= self.due[i];
                self.received += self.due[i];
                self.repaid_principal += self.principal[i];
                self.status[i] = Status::Repaid;
                repayments += 1;
                let surplus = std::mem::take(&mut self.cash[i]);
                self.spend(i, surplus);
            }
        }
        (repayments, defaults)
    }

    /// Maturity with refinancing: new money enters evenly and every loan is
    /// rolled over at the same rate, as long as debt per unit of money stays
    /// at or below its level at the first maturity.
    fn roll_over(&mut self, interest_pct: f64, growth_pct: f64, ceiling: f64) -> usize {
        let active = self.active();
        if active.is_empty() {
            return 0;
        }
        let injection = (self.money_supply() as f64 * growth_pct / 100.0).round() as u64;
        let share = injection / active.len() as u64;
        let mut extra = injection - share * active.len() as u64;
        for &i in &active {
            self.cash[i] += share;
            if extra > 0 {
                self.cash[i] += 1;
                extra -= 1;
            }
        }

        let mut defaults = 0;
        while !self.active().is_empty()
            && self.outstanding_debt() as f64 > ceiling * self.money_supply() as f64 * (1.0 + 1e-9)
        {
            let i = self.weakest().expect("non-empty");
            self.default_borrower(i);
            defaults += 1;
        }
        for i in self.active() {
            self.due[i] = with_interest(self.due[i], interest_pct);
        }
        defaults
    }

    /// Without refinancing whatever is still owed at the end defaults and the
    /// lender seizes its cash. With refinancing open loans simply stay open.
    fn finish(
        mut self,
        rounds: Vec<RoundRecord>,
        mut last: Option<RoundRecord>,
        close_out: bool,
    ) -> DefaultOutcome {
        let mut rounds = rounds;
        if !close_out {
            if let Some(row) = last.take() {
                rounds.push(row);
            }
        }
        let mut late_defaults = 0;
        for i in self.active().into_iter().filter(|_| close_out) {
            self.status[i] = Status::Defaulted;
            self.defaulted_principal += self.principal[i];
            self.received += std::mem::take(&mut self.cash[i]);
            late_defaults += 1;
        }
        if let Some(mut row) = last.take() {
            row.defaults += late_defaults;
            row.active_borrowers = 0;
            row.outstanding_debt = 0;
            row.defaulted_principal = self.defaulted_principal;
            row.money_supply = self.money_supply();
            rounds.push(row);
        }

        let n = self.status.len() as f64;
        let total_principal: u64 = self.principal.iter().sum();
        let defaulted = self.status.iter().filter(|&&s| s == Status::Defaulted).count();
        let outstanding_principal = self.active().iter().map(|&i| self.principal[i]).sum();
        DefaultOutcome {
            defaulted_money_fraction: 100.0 * self.defaulted_principal as f64
                / total_principal as f64,
            defaulted_borrower_fraction: 100.0 * defaulted as f64 / n,
            lender_net_gain_pct: 100.0 * (self.received as f64 - total_principal as f64)
                / total_principal as f64,
            total_principal,
            outstanding_principal,
            rounds,
        }
    }
}

fn with_interest(amount: u64, interest_pct: f64) -> u64 {
    amount + (amount as f64 * interest_pct / 100.0).round() as u64
}

/// Plays the lending game and reports who could not pay.
///
/// Borrowers trade among themselves each round (random kinetic exchange), so
/// who ends up short is random; how much money goes unreturned is not.
/// Deterministic for a given seed.
pub fn refinance_game(config: &RefinanceGameConfig) -> Result<DefaultOutcome> {
    config.validate()?;
    let mut game = Game::new(config);
    let money = game.money_supply();
    let ceiling = game.outstanding_debt() as f64 / money as f64;

    let mut rows = Vec::new();
    for round in 1..=config.rounds {
        if game.active().is_empty() {
            break;
        }
        game.trade();
        let (repayments, defaults) = if config.refinance {
            let defaults = game.roll_over(config.interest_pct, config.money_growth_pct, ceiling);
            (0, defaults)
        } else {
            game.settle()
        };
        rows.push(game.record(round, repayments, defaults));
    }

    let last = if game.active().is_empty() {
        None
    } else {
        rows.pop()
    };
    Ok(game.finish(rows, last, !config.refinance))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpiralTrajectory {
    pub rates: Vec<f64>,
    /// Set once the rate exceeds ten times its starting value.
    pub diverged: bool,
}

/// Stylized speculation feedback: a rate above the reference attracts a
/// surcharge proportional to the excess,
/// `r' = r * (1 + sensitivity * max(0, r - r_ref))`.
///
/// Iteration stops early if the next rate would overflow to infinity.
pub fn credit_spiral(r0: f64, r_ref: f64, sensitivity: f64, rounds: u32) -> Result<SpiralTrajectory> {
    if !(r0 >= 0.0) {
        return Err(Error::domain("r0", r0, ">= 0"));
    }
    if !(r_ref >= 0.0) {
        return Err(Error::domain("r_ref", r_ref, ">= 0"));
    }
    if !(sensitivity >= 0.0) {
        return Err(Error::domain("sensitivity", sensitivity, ">= 0"));
    }
    let mut rates = Vec::with_capacity(rounds as usize + 1);
    let mut r = r0;
    let mut diverged = false;
    rates.push(r);
    for _ in 0..rounds {
        let next = r * (1.0 + sensitivity * (r - r_ref).max(0.0));
        if !next.is_finite() {
            diverged = true;
            break;
        }
        r = next;
        rates.push(r);
        if r > 10.0 * r0 {
            diverged = true;
        }
    }
    Ok(SpiralTrajectory { rates, diverged })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn game(interest_pct: f64, refinance: bool, growth: f64, seed: u64) -> RefinanceGameConfig {
        RefinanceGameConfig {
            n_borrowers: 200,
            interest_pct,
            rounds: 1000,
            refinance,
            money_growth_pct: growth,
            seed,
        }
    }

    #[test]
    fn bankruptcy_fraction_values() {
        assert_eq!(bankruptcy_fraction(100.0).unwrap(), 50.0);
        assert_eq!(bankruptcy_fraction(0.0).unwrap(), 0.0);
        let y = bankruptcy_fraction(5.0).unwrap();
        assert!((y - 4.761_904_761_904_762).abs() < 1e-12);
        assert!(((1.0 - y / 100.0) * 1.05 - 1.0).abs() <= f64::EPSILON);
        assert!(bankruptcy_fraction(-1.0).is_err());
        assert!(bankruptcy_fraction(f64::NAN).is_err());
    }

    #[test]
    fn zero_interest_means_no_defaults() {
        let out = refinance_game(&game(0.0, false, 0.0, 5)).unwrap();
        assert_eq!(out.defaulted_money_fraction, 0.0);
        assert_eq!(out.defaulted_borrower_fraction, 0.0);
        assert_eq!(out.lender_net_gain_pct, 0.0);
    }

    #[test]
    fn hundred_percent_interest_loses_half() {
        let out = refinance_game(&game(100.0, false, 0.0, 11)).unwrap();
        assert!((out.defaulted_money_fraction - 50.0).abs() < 3.0);
        assert!(out.lender_net_gain_pct.abs() < 3.0);
    }

    #[test]
    fn refinancing_with_matching_growth_never_defaults() {
        let cfg = RefinanceGameConfig {
            rounds: 30,
            ..game(3.0, true, 3.0, 2)
        };
        let out = refinance_game(&cfg).unwrap();
        assert_eq!(out.defaulted_borrower_fraction, 0.0);
        let debts: Vec<f64> = out.rounds.iter().map(|r| r.outstanding_debt as f64).collect();
        for pair in debts.windows(2) {
            let growth = pair[1] / pair[0];
            assert!((growth - 1.03).abs() < 1e-4, "debt grew by {growth}");
        }
    }

    #[test]
    fn refinancing_in_a_stagnant_economy_defaults() {
        let cfg = RefinanceGameConfig {
            rounds: 10,
            ..game(3.0, true, 0.0, 2)
        };
        let out = refinance_game(&cfg).unwrap();
        assert!(out.defaulted_borrower_fraction > 0.0);
    }

    #[test]
    fn same_seed_same_outcome() {
        let a = refinance_game(&game(20.0, false, 0.0, 42)).unwrap();
        let b = refinance_game(&game(20.0, false, 0.0, 42)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn config_validation() {
        let mut cfg = game(3.0, false, 0.0, 1);
        cfg.n_borrowers = 0;
        assert!(refinance_game(&cfg).is_err());
        let mut cfg = game(-3.0, false, 0.0, 1);
        assert!(refinance_game(&cfg).is_err());
        cfg.interest_pct = 3.0;
        cfg.rounds = 0;
        assert!(refinance_game(&cfg).is_err());
    }

    #[test]
    fn spiral_without_feedback_is_flat() {
        let t = credit_spiral(0.05, 0.01, 0.0, 10).unwrap();
        assert!(t.rates.iter().all(|&r| r == 0.05));
        assert!(!t.diverged);
        let t = credit_spiral(0.04, 0.04, 50.0, 10).unwrap();
        assert!(t.rates.iter().all(|&r| r == 0.04));
    }

    #[test]
    fn spiral_above_reference_diverges() {
        let t = credit_spiral(0.05, 0.04, 50.0, 40).unwrap();
        assert!(t.diverged);
        assert!(t.rates.windows(2).all(|w| w[1] > w[0]));
        // direct iteration
        let mut r = 0.05f64;
        for (step, &got) in t.rates.iter().enumerate().skip(1).take(4) {
            r *= 1.0 + 50.0 * (r - 0.04).max(0.0);
            assert_eq!(got, r, "step {step}");
        }
    }
}
