//! Banks holding each other's stock.
//!
//! `c[i][j]` is the fraction of bank `j` held by bank `i`; `d[j]` is the
//! outside investor's direct stake in bank `j`. Whoever owns a bank also
//! owns a slice of everything the bank owns, so the investor's ultimate
//! stake solves `o = d + o C`.

use std::fmt::Write as _;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rust_decimal::prelude::ToPrimitive;
use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest number of series terms before giving up on convergence.
pub const MAX_SERIES_TERMS: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OwnershipNetwork {
    c: Vec<Vec<Decimal>>,
    d: Vec<Decimal>,
}

impl OwnershipNetwork {
    pub fn new(c: Vec<Vec<Decimal>>, d: Vec<Decimal>) -> Result<Self> {
        let n = d.len();
        if n == 0 {
            return Err(Error::InvalidNetwork("no banks".into()));
        }
        if c.len() != n || c.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidNetwork(format!(
                "holdings must be {n} x {n} to match {n} direct stakes"
            )));
        }
        let in_unit = |x: &Decimal| *x >= Decimal::ZERO && *x <= Decimal::ONE;
        for (i, row) in c.iter().enumerate() {
            if let Some((j, x)) = row.iter().enumerate().find(|(_, x)| !in_unit(x)) {
                return Err(Error::InvalidNetwork(format!(
                    "holding [{i}][{j}] = {x} is outside [0, 1]"
                )));
            }
        }
        if let Some((j, x)) = d.iter().enumerate().find(|(_, x)| !in_unit(x)) {
            return Err(Error::InvalidNetwork(format!(
                "direct stake {j} = {x} is outside [0, 1]"
            )));
        }
        for j in 0..n {
            let held = d[j] + c.iter().map(|row| row[j]).sum::<Decimal>();
            if held > Decimal::ONE {
                return Err(Error::InvalidNetwork(format!(
                    "bank {j} is {held} owned, more than all of it"
                )));
            }
        }
        Ok(Self { c, d })
    }

    /// Three banks each holding 49% of the other two; the investor holds the
    /// remaining 2% of each.
    pub fn three_banks() -> Self {
        let x = Decimal::new(49, 2);
        let z = Decimal::ZERO;
        Self::new(
            vec![vec![z, x, x], vec![x, z, x], vec![x, x, z]],
            vec![Decimal::new(2, 2); 3],
        )
        .expect("valid network")
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    pub fn holdings(&self) -> &[Vec<Decimal>] {
        &self.c
    }

    pub fn direct(&self) -> &[Decimal] {
        &self.d
    }

    /// Share of bank `j` held by nobody in the model.
    pub fn other_holders(&self, j: usize) -> Decimal {
        Decimal::ONE - self.d[j] - self.c.iter().map(|row| row[j]).sum::<Decimal>()
    }

    /// Same network with the investor's direct stake in bank `j` replaced.
    pub fn with_direct(&self, j: usize, stake: Decimal) -> Result<Self> {
        let mut d = self.d.clone();
        d[j] = stake;
        Self::new(self.c.clone(), d)
    }

    fn matrix(&self) -> DMatrix<f64> {
        let n = self.len();
        DMatrix::from_fn(n, n, |i, j| to_f64(self.c[i][j]))
    }

    fn direct_f64(&self) -> Vec<f64> {
        self.d.iter().map(|&x| to_f64(x)).collect()
    }

    /// Parses the plain-text format: a line with `n`, then `n` rows of `n`
    /// holdings, then one row of `n` direct stakes. Blank lines and anything
    /// after `#` are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows = text.lines().enumerate().filter_map(|(k, line)| {
            let body = line.split('#').next().unwrap_or("").trim();
            (!body.is_empty()).then_some((k + 1, body))
        });
        let (line, header) = rows.next().ok_or(Error::Parse {
            line: 0,
            message: "empty network file".into(),
        })?;
        let n: usize = header.parse().map_err(|_| Error::Parse {
            line,
            message: format!("expected bank count, found '{header}'"),
        })?;
        if n == 0 {
            return Err(Error::Parse {
                line,
                message: "bank count must be at least 1".into(),
            });
        }
        let mut parse_row = |what: &str| -> Result<Vec<Decimal>> {
            let (line, body) = rows.next().ok_or_else(|| Error::Parse {
                line: 0,
                message: format!("missing {what}"),
            })?;
            let values = body
                .split(|ch: char| ch.is_whitespace() || ch == ',')
                .filter(|s| !s.is_empty())
                .map(|s| {
                    Decimal::from_str(s).map_err(|_| Error::Parse {
                        line,
                        message: format!("'{s}' is not a decimal number"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            if values.len() != n {
                return Err(Error::Parse {
                    line,
                    message: format!("{what} has {} values, expected {n}", values.len()),
                });
            }
            Ok(values)
        };
        let c = (0..n)
            .map(|i| parse_row(&format!("holdings row {}", i + 1)))
            .collect::<Result<Vec<_>>>()?;
        let d = parse_row("direct stakes")?;
        if let Some((line, _)) = rows.next() {
            return Err(Error::Parse {
                line,
                message: "unexpected content after direct stakes".into(),
            });
        }
        Self::new(c, d)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.len());
        for row in &self.c {
            let _ = writeln!(out, "{}", join(row));
        }
        let _ = writeln!(out, "{}", join(&self.d));
        out
    }
}

fn join(values: &[Decimal]) -> String {
    values
        .iter()
        .map(|v| v.normalize().to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn to_f64(x: Decimal) -> f64 {
    x.to_f64().expect("stakes lie in [0, 1]")
}

/// Largest eigenvalue modulus of the holdings matrix.
pub fn spectral_radius(net: &OwnershipNetwork) -> f64 {
    net.matrix()
        .complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

fn check_resolvable(net: &OwnershipNetwork) -> Result<f64> {
    let rho = spectral_radius(net);
    if rho >= 1.0 {
        Err(Error::IrresolvableNetwork(rho))
    } else {
        Ok(rho)
    }
}

/// Solves `o (I - C) = d` directly.
pub fn ownership_by_solve(net: &OwnershipNetwork) -> Result<Vec<f64>> {
    check_resolvable(net)?;
    let n = net.len();
    let system = (DMatrix::identity(n, n) - net.matrix()).transpose();
    let rhs = DVector::from_vec(net.direct_f64());
    let o = system
        .lu()
        .solve(&rhs)
        .ok_or(Error::IrresolvableNetwork(1.0))?;
    Ok(o.iter().copied().collect())
}

/// Sums direct stakes, stakes held through one bank, through two banks and
/// so on, `d + d C + d C^2 + ...`, until a term no longer changes the total.
pub fn ownership_by_series(net: &OwnershipNetwork) -> Result<Vec<f64>> {
    let mut last = None;
    series_partial_sums(net, |total| last = Some(total.to_vec()))?;
    Ok(last.expect("at least the direct stakes"))
}

/// Calls `visit` with every partial sum of the series, starting with the
/// direct stakes and ending with the converged total. Returns the number of
/// terms added after the direct stakes.
pub fn series_partial_sums(net: &OwnershipNetwork, mut visit: impl FnMut(&[f64])) -> Result<usize> {
    check_resolvable(net)?;
    let n = net.len();
    let c: Vec<Vec<f64>> = net
        .holdings()
        .iter()
        .map(|row| row.iter().map(|&x| to_f64(x)).collect())
        .collect();
    let mut term = net.direct_f64();
    let mut total = term.clone();
    visit(&total);
    for k in 1..=MAX_SERIES_TERMS {
        let next: Vec<f64> = (0..n)
            .map(|j| (0..n).map(|i| term[i] * c[i][j]).sum())
            .collect();
        let mut changed = false;
        for j in 0..n {
            let updated = total[j] + next[j];
            changed |= updated != total[j];
            total[j] = updated;
        }
        if !changed {
            return Ok(k - 1);
        }
        visit(&total);
        term = next;
    }
    Err(Error::IrresolvableNetwork(spectral_radius(net)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UltimateOwnership {
    pub solve: Vec<f64>,
    pub series: Vec<f64>,
    pub spectral_radius: f64,
}

impl UltimateOwnership {
    pub fn max_discrepancy(&self) -> f64 {
        self.solve
            .iter()
            .zip(&self.series)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Both routes to the investor's ultimate stake in every bank.
pub fn ultimate_ownership(net: &OwnershipNetwork) -> Result<UltimateOwnership> {
    let spectral_radius = check_resolvable(net)?;
    Ok(UltimateOwnership {
        solve: ownership_by_solve(net)?,
        series: ownership_by_series(net)?,
        spectral_radius,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DividendRound {
    /// Profit from actual banking.
    pub ops_profit: Vec<Decimal>,
    /// Dividend each bank pays out in total.
    pub declared: Vec<Decimal>,
}

impl DividendRound {
    /// Each bank makes 2 and declares 100.
    pub fn three_banks() -> Self {
        Self {
            ops_profit: vec![Decimal::TWO; 3],
            declared: vec![Decimal::ONE_HUNDRED; 3],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BankFlow {
    pub dividend_income: Decimal,
    pub total_income: Decimal,
    pub payout: Decimal,
    pub net: Decimal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DividendFlow {
    pub banks: Vec<BankFlow>,
    pub outsider_receipts: Decimal,
    /// Paid to holders outside the model.
    pub other_receipts: Decimal,
}

impl DividendFlow {
    /// Everything that left the banks plus what they kept.
    pub fn accounted(&self) -> Decimal {
        self.banks.iter().map(|b| b.net).sum::<Decimal>()
            + self.outsider_receipts
            + self.other_receipts
    }
}

fn check_round(net: &OwnershipNetwork, round: &DividendRound) -> Result<()> {
    let n = net.len();
    if round.ops_profit.len() != n || round.declared.len() != n {
        return Err(Error::InvalidNetwork(format!(
            "dividend round must list {n} banks"
        )));
    }
    if let Some(x) = round.declared.iter().find(|x| x.is_sign_negative()) {
        return Err(Error::domain("declared", x, ">= 0"));
    }
    Ok(())
}

/// One round of dividends: every bank pays out what it declared to its
/// holders, pro rata.
pub fn dividend_flow(net: &OwnershipNetwork, round: &DividendRound) -> Result<DividendFlow> {
    check_round(net, round)?;
    let n = net.len();
    let c = net.holdings();
    let banks = (0..n)
        .map(|j| {
            let dividend_income: Decimal = (0..n).map(|i| c[j][i] * round.declared[i]).sum();
            let total_income = round.ops_profit[j] + dividend_income;
            BankFlow {
                dividend_income,
                total_income,
                payout: round.declared[j],
                net: total_income - round.declared[j],
            }
        })
        .collect();
    let outsider_receipts = (0..n).map(|j| net.direct()[j] * round.declared[j]).sum();
    let other_receipts = (0..n).map(|j| net.other_holders(j) * round.declared[j]).sum();
    Ok(DividendFlow {
        banks,
        outsider_receipts,
        other_receipts,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DividendTax {
    pub tax: Vec<Decimal>,
    pub total: Decimal,
    /// Set where the tax exceeds what the bank really earned.
    pub insolvent: Vec<bool>,
}

/// Tax at `rate` on declared dividends, compared with operating profit.
pub fn dividend_tax(round: &DividendRound, rate: Decimal) -> Result<DividendTax> {
    if rate < Decimal::ZERO || rate > Decimal::ONE {
        return Err(Error::domain("rate", rate, "in [0, 1]"));
    }
    let tax: Vec<Decimal> = round.declared.iter().map(|&x| rate * x).collect();
    let insolvent = tax
        .iter()
        .zip(&round.ops_profit)
        .map(|(t, p)| t > p)
        .collect();
    Ok(DividendTax {
        total: tax.iter().sum(),
        tax,
        insolvent,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Support {
    pub outsider: bool,
    /// Position of each bank when voting its stakes.
    pub banks: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VoteTally {
    pub yes: Decimal,
    pub no: Decimal,
    /// Stock held outside the model or by the bank itself.
    pub abstained: Decimal,
    pub passed: bool,
}

/// Shareholder vote in bank `bank`. Holders vote their stakes; a bank does
/// not vote its own stock, and holders outside the model abstain. A
/// proposal needs strictly more yes than no; ties fail.
pub fn voting_outcome(net: &OwnershipNetwork, bank: usize, support: &Support) -> Result<VoteTally> {
    let n = net.len();
    if bank >= n {
        return Err(Error::domain("bank", bank, "an existing bank index"));
    }
    if support.banks.len() != n {
        return Err(Error::InvalidNetwork(format!(
            "support must list {n} banks"
        )));
    }
    let mut yes = Decimal::ZERO;
    let mut no = Decimal::ZERO;
    let mut cast = |stake: Decimal, vote: bool| {
        if vote {
            yes += stake;
        } else {
            no += stake;
        }
    };
    cast(net.direct()[bank], support.outsider);
    for i in (0..n).filter(|&i| i != bank) {
        cast(net.holdings()[i][bank], support.banks[i]);
    }
    Ok(VoteTally {
        abstained: Decimal::ONE - yes - no,
        passed: yes > no,
        yes,
        no,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rust_decimal_macros::dec;

    #[test]
    fn three_banks_are_fully_owned() {
        let o = ultimate_ownership(&OwnershipNetwork::three_banks()).unwrap();
        for v in o.solve.iter().chain(&o.series) {
            assert!((v - 1.0).abs() < 1e-10, "{v}");
        }
        assert!((o.spectral_radius - 0.98).abs() < 1e-12);
    }

    #[test]
    fn no_cross_holdings() {
        let net = OwnershipNetwork::new(
            vec![vec![Decimal::ZERO; 2]; 2],
            vec![dec!(0.3), dec!(0.7)],
        )
        .unwrap();
        let o = ultimate_ownership(&net).unwrap();
        assert_eq!(o.solve, vec![0.3, 0.7]);
        assert_eq!(o.series, vec![0.3, 0.7]);
    }

    #[test]
    fn single_direct_stake() {
        let net = OwnershipNetwork::three_banks()
            .with_direct(1, Decimal::ZERO)
            .unwrap()
            .with_direct(2, Decimal::ZERO)
            .unwrap();
        let o = ultimate_ownership(&net).unwrap();
        let expect = [0.0102 / 0.0298, 0.0098 / 0.0298, 0.0098 / 0.0298];
        for (got, want) in o.solve.iter().zip(expect) {
            assert!((got - want).abs() < 1e-12);
        }
        assert!(o.max_discrepancy() < 1e-10);
    }

    #[test]
    fn circular_without_outsiders_is_irresolvable() {
        let h = dec!(0.5);
        let z = Decimal::ZERO;
        let net = OwnershipNetwork::new(
            vec![vec![z, h, h], vec![h, z, h], vec![h, h, z]],
            vec![z; 3],
        )
        .unwrap();
        assert!(matches!(
            ultimate_ownership(&net),
            Err(Error::IrresolvableNetwork(_))
        ));
    }

    #[test]
    fn overowned_bank_is_rejected() {
        let net = OwnershipNetwork::new(
            vec![vec![Decimal::ZERO, dec!(0.6)], vec![Decimal::ZERO; 2]],
            vec![dec!(0.1), dec!(0.5)],
        );
        assert!(matches!(net, Err(Error::InvalidNetwork(_))));
    }

    #[test]
    fn dividend_table() {
        let flow = dividend_flow(&OwnershipNetwork::three_banks(), &DividendRound::three_banks())
            .unwrap();
        for b in &flow.banks {
            assert_eq!(b.dividend_income, dec!(98));
            assert_eq!(b.total_income, dec!(100));
            assert_eq!(b.payout, dec!(100));
            assert_eq!(b.net, dec!(0));
        }
        assert_eq!(flow.outsider_receipts, dec!(6));
        assert_eq!(flow.accounted(), dec!(6));
    }

    #[test]
    fn no_dividends_keeps_profit() {
        let round = DividendRound {
            ops_profit: vec![dec!(2); 3],
            declared: vec![Decimal::ZERO; 3],
        };
        let flow = dividend_flow(&OwnershipNetwork::three_banks(), &round).unwrap();
        assert!(flow.banks.iter().all(|b| b.net == dec!(2)));
    }

    #[test]
    fn tax_on_inflated_dividends() {
        let t = dividend_tax(&DividendRound::three_banks(), dec!(0.25)).unwrap();
        assert_eq!(t.tax, vec![dec!(25); 3]);
        assert_eq!(t.total, dec!(75));
        assert_eq!(t.insolvent, vec![true; 3]);
        let t = dividend_tax(&DividendRound::three_banks(), Decimal::ZERO).unwrap();
        assert_eq!(t.total, Decimal::ZERO);
        assert!(t.insolvent.iter().all(|f| !f));
        assert!(dividend_tax(&DividendRound::three_banks(), dec!(1.5)).is_err());
    }

    #[test]
    fn outsider_is_outvoted() {
        let support = Support {
            outsider: false,
            banks: vec![true; 3],
        };
        let t = voting_outcome(&OwnershipNetwork::three_banks(), 0, &support).unwrap();
        assert!(t.passed);
        assert_eq!((t.yes, t.no), (dec!(0.98), dec!(0.02)));
    }

    #[test]
    fn sole_owner_decides_and_ties_fail() {
        let z = Decimal::ZERO;
        let net = OwnershipNetwork::new(vec![vec![z, z], vec![z, z]], vec![dec!(1), dec!(0.5)])
            .unwrap();
        let no = Support {
            outsider: false,
            banks: vec![true, true],
        };
        assert!(!voting_outcome(&net, 0, &no).unwrap().passed);
        let yes = Support {
            outsider: true,
            ..no.clone()
        };
        assert!(voting_outcome(&net, 0, &yes).unwrap().passed);

        let tied = OwnershipNetwork::new(
            vec![vec![z, dec!(0.5)], vec![z, z]],
            vec![dec!(0.5), dec!(0.5)],
        )
        .unwrap();
        let t = voting_outcome(&tied, 1, &no).unwrap();
        assert_eq!(t.yes, t.no);
        assert!(!t.passed);
    }

    #[test]
    fn text_round_trip() {
        let net = OwnershipNetwork::three_banks();
        let text = net.to_text();
        assert_eq!(text, "3\n0 0.49 0.49\n0.49 0 0.49\n0.49 0.49 0\n0.02 0.02 0.02\n");
        assert_eq!(OwnershipNetwork::parse(&text).unwrap(), net);
    }

    #[test]
    fn parse_errors_name_the_line() {
        let err = OwnershipNetwork::parse("# comment\n2\n0 0.5\n0 x\n0.5 0.5\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }));
        assert!(OwnershipNetwork::parse("2\n0 0\n0 0\n").is_err());
        assert!(OwnershipNetwork::parse("").is_err());
    }
}
