//! Fractional-reserve accounting for a single bank.
//!
//! A bank holding base money `B` under reserve fraction `rr` may carry up to
//! `B / rr` of credit. Loans are created by writing a number into the
//! borrower's account and destroyed again when the principal is repaid; only
//! the interest survives the round trip, as equity.
//!
//! Every operation takes the ledger by reference and returns a new one.
//! Amounts are [`Decimal`], so the ledger identities hold digit for digit.
//!
//! A reserve "ratio" quoted as a multiplier (say 20) corresponds to the
//! reserve fraction `1/20 = 0.05` accepted by the functions here.

use std::collections::BTreeMap;
use std::fmt;

use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LoanId(pub u64);

impl fmt::Display for LoanId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A single-period loan. `outstanding` starts at `principal * (1 + rate)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoanRecord {
    pub id: LoanId,
    pub principal: Decimal,
    pub interest_rate: Decimal,
    pub outstanding: Decimal,
    /// Part of `outstanding` that is still principal; repayments retire it first.
    pub principal_outstanding: Decimal,
}

impl LoanRecord {
    pub fn interest_outstanding(&self) -> Decimal {
        self.outstanding - self.principal_outstanding
    }

    pub fn is_settled(&self) -> bool {
        self.outstanding.is_zero()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BankLedger {
    base_money: Decimal,
    reserve_ratio: Decimal,
    outstanding_credit: Decimal,
    equity: Decimal,
    loans: BTreeMap<LoanId, LoanRecord>,
    next_id: u64,
}

impl BankLedger {
    pub fn new(base_money: Decimal, reserve_ratio: Decimal) -> Result<Self> {
        if base_money.is_sign_negative() {
            return Err(Error::domain("base_money", base_money, ">= 0"));
        }
        check_reserve_ratio(reserve_ratio)?;
        Ok(Self {
            base_money,
            reserve_ratio,
            outstanding_credit: Decimal::ZERO,
            equity: Decimal::ZERO,
            loans: BTreeMap::new(),
            next_id: 1,
        })
    }

    pub fn base_money(&self) -> Decimal {
        self.base_money
    }

    pub fn reserve_ratio(&self) -> Decimal {
        self.reserve_ratio
    }

    pub fn outstanding_credit(&self) -> Decimal {
        self.outstanding_credit
    }

    pub fn equity(&self) -> Decimal {
        self.equity
    }

    /// Maximum credit the reserve allows: `base_money / reserve_ratio`.
    pub fn credit_cap(&self) -> Decimal {
        self.base_money / self.reserve_ratio
    }

    pub fn loan(&self, id: LoanId) -> Option<&LoanRecord> {
        self.loans.get(&id)
    }

    pub fn loans(&self) -> impl Iterator<Item = &LoanRecord> {
        self.loans.values()
    }

    /// Creates `amount` of credit out of nothing. Base money and equity are
    /// untouched.
    pub fn issue_loan(&self, amount: Decimal, interest_rate: Decimal) -> Result<(Self, LoanId)> {
        if amount <= Decimal::ZERO {
            return Err(Error::domain("amount", amount, "> 0"));
        }
        if interest_rate.is_sign_negative() {
            return Err(Error::domain("interest_rate", interest_rate, ">= 0"));
        }
        let would_be = self.outstanding_credit + amount;
        let cap = self.credit_cap();
        if would_be > cap {
            return Err(Error::ReserveBreach {
                requested: amount,
                would_be,
                cap,
            });
        }

        let mut next = self.clone();
        let id = LoanId(next.next_id);
        next.next_id += 1;
        next.outstanding_credit = would_be;
        next.loans.insert(
            id,
            LoanRecord {
                id,
                principal: amount,
                interest_rate,
                outstanding: amount * (Decimal::ONE + interest_rate),
                principal_outstanding: amount,
            },
        );
        Ok((next, id))
    }

    /// Applies a repayment, principal first. The principal part is destroyed
    /// (credit shrinks); the interest part is booked to equity.
    pub fn repay_loan(&self, id: LoanId, amount: Decimal) -> Result<Self> {
        let loan = self.loans.get(&id).ok_or(Error::UnknownLoan(id))?;
        if amount.is_sign_negative() {
            return Err(Error::domain("amount", amount, ">= 0"));
        }
        if amount > loan.outstanding {
            return Err(Error::Overpayment {
                id,
                amount,
                outstanding: loan.outstanding,
            });
        }
        if amount.is_zero() {
            return Ok(self.clone());
        }

        let principal_part = amount.min(loan.principal_outstanding);
        let interest_part = amount - principal_part;

        let mut next = self.clone();
        let loan = next.loans.get_mut(&id).expect("loan present");
        loan.principal_outstanding -= principal_part;
        loan.outstanding -= amount;
        next.outstanding_credit -= principal_part;
        next.equity += interest_part;
        Ok(next)
    }

    /// Books a loss on a loan: the remaining principal leaves the credit book
    /// and is charged against equity.
    pub fn write_off(&self, id: LoanId) -> Result<Self> {
        let loan = self.loans.get(&id).ok_or(Error::UnknownLoan(id))?;
        let lost = loan.principal_outstanding;
        let mut next = self.clone();
        let loan = next.loans.get_mut(&id).expect("loan present");
        loan.principal_outstanding = Decimal::ZERO;
        loan.outstanding = Decimal::ZERO;
        next.outstanding_credit -= lost;
        next.equity -= lost;
        Ok(next)
    }
}

fn check_reserve_ratio(rr: Decimal) -> Result<()> {
    if rr <= Decimal::ZERO || rr > Decimal::ONE {
        return Err(Error::domain("reserve_ratio", rr, "in (0, 1]"));
    }
    Ok(())
}

/// Credit that one unit of base money supports: `1 / reserve_ratio`.
pub fn money_multiplier(reserve_ratio: Decimal) -> Result<Decimal> {
    check_reserve_ratio(reserve_ratio)?;
    Ok(Decimal::ONE / reserve_ratio)
}

/// Profit per unit of real money committed when lending at `interest_rate`
/// against a reserve of `reserve_ratio`.
pub fn lending_roi(interest_rate: Decimal, reserve_ratio: Decimal) -> Result<Decimal> {
    if interest_rate.is_sign_negative() {
        return Err(Error::domain("interest_rate", interest_rate, ">= 0"));
    }
    check_reserve_ratio(reserve_ratio)?;
    Ok(interest_rate / reserve_ratio)
}

/// Deposits created when `base` is lent on and redeposited through `n_banks`
/// further banks, each keeping `reserve_ratio` back:
/// `base * sum_{k=0..n_banks} (1 - rr)^k`.
pub fn redeposit_cascade(base: Decimal, reserve_ratio: Decimal, n_banks: u32) -> Result<Decimal> {
    Ok(redeposit_steps(base, reserve_ratio, n_banks)?
        .last()
        .copied()
        .unwrap_or(base))
}

/// Running totals of [`redeposit_cascade`] for `0..=n_banks`.
pub fn redeposit_steps(base: Decimal, reserve_ratio: Decimal, n_banks: u32) -> Result<Vec<Decimal>> {
    if base <= Decimal::ZERO {
        return Err(Error::domain("base", base, "> 0"));
    }
    check_reserve_ratio(reserve_ratio)?;
    let retained = Decimal::ONE - reserve_ratio;
    let mut deposit = base;
    let mut total = base;
    let mut totals = Vec::with_capacity(n_banks as usize + 1);
    totals.push(total);
    for _ in 0..n_banks {
        deposit *= retained;
        if deposit.is_zero() {
            totals.push(total);
            continue;
        }
        total += deposit;
        totals.push(total);
    }
    Ok(totals)
}
