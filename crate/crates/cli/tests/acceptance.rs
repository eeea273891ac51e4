//! Acceptance criteria 1-11, one PASS/FAIL line each. Run with
//! `cargo test --release -p condenlab-cli --test acceptance -- --nocapture`.

use std::process::Command;
use std::str::FromStr;
use std::time::{Duration, Instant};

use condenlab::banking::{lending_roi, redeposit_cascade};
use condenlab::condensation::{capital_share, capital_share_exact, clothespin_sim, ClothespinPath};
use condenlab::credit::{bankruptcy_fraction, refinance_game, RefinanceGameConfig};
use condenlab::dilemma::{solve_dilemma, Action, PayoffTable};
use condenlab::distribution::{classify_equilibrium, ga_optimize, Equilibrium, WealthDistribution};
use condenlab::exact::{self, Exact};
use condenlab::macro_dynamics::{
    debt_ratio_trajectory, growth_value, house_price, print_money, seigniorage_transfer,
    GrowthMethod, GrowthParams, MonetaryState,
};
use condenlab::ownership::{
    dividend_flow, dividend_tax, ownership_by_series, ownership_by_solve, DividendRound,
    OwnershipNetwork,
};
use condenlab_cli::registry::ga_init_seed;
use condenlab_cli::verify::{identity_product, ulps, IDENTITY_GRID};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rust_decimal::Decimal;

const IDENTITY_MAX_ULPS: u64 = 1;
const MC_SEEDS: u64 = 20;
const MC_TOLERANCE_PCT: f64 = 3.0;
const MC_MIN_HITS: usize = 18;
const CASCADE_TOLERANCE: f64 = 1e-6;
const GROWTH_REL_TOLERANCE: f64 = 1e-9;
/// `t / 1000` alone leaves a 2.6e-8 gap at alpha = 0.5, t = 10.
const RK4_MAX_STEP: f64 = 1e-3;
const DEBT_TOLERANCE: f64 = 1e-12;
const GA_SEEDS: u64 = 20;
const GA_N: usize = 30;
const GA_STEPS: usize = 100_000;
const GA_UNIFORM_SCALE: f64 = 0.1;
const GA_RANDOM_SCALE: f64 = 30.0;
const GA_CLASSIFY_TOLERANCE: f64 = 0.05;
const GA_MIN_SHARE: f64 = 0.9;
const BANKER_MIN_TOP: f64 = 0.88;
const BANKER_RATIO: f64 = 270.0;
const BANKER_RATIO_TOLERANCE: f64 = 0.05;
const OWNERSHIP_TOLERANCE: f64 = 1e-10;
const DILEMMA_TABLES: usize = 1000;

type Outcome = Result<String, String>;
type Pair = (Action, Action);

struct Report {
    failures: Vec<u32>,
}

impl Report {
    fn criterion(&mut self, id: u32, title: &str, limit: Option<Duration>, f: impl FnOnce() -> Outcome) {
        let start = Instant::now();
        let mut outcome = f();
        let elapsed = start.elapsed();
        if let (Ok(_), Some(limit)) = (&outcome, limit) {
            if elapsed > limit {
                outcome = Err(format!("took {elapsed:.2?}, limit {limit:?}"));
            }
        }
        match &outcome {
            Ok(detail) => println!("PASS {id:>2} {title}: {detail} [{elapsed:.2?}]"),
            Err(why) => {
                println!("FAIL {id:>2} {title}: {why} [{elapsed:.2?}]");
                self.failures.push(id);
            }
        }
    }
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($fmt)+));
        }
    };
}

fn d(s: &str) -> Decimal {
    Decimal::from_str(s).unwrap()
}

fn bankruptcy() -> Outcome {
    let y = bankruptcy_fraction(100.0).map_err(|e| e.to_string())?;
    ensure!(y == 50.0, "f(100) = {y}");
    let mut worst = 0;
    for x in IDENTITY_GRID {
        let y = bankruptcy_fraction(x).map_err(|e| e.to_string())?;
        let u = ulps(identity_product(x, y), 1.0);
        ensure!(u <= IDENTITY_MAX_ULPS, "x = {x}: {u} ulps");
        worst = worst.max(u);
    }
    Ok(format!("f(100) = 50, identity within {worst} ulp on the grid"))
}

fn monte_carlo() -> Outcome {
    let mut hits = 0;
    let mut values = Vec::new();
    for seed in 0..MC_SEEDS {
        let out = refinance_game(&RefinanceGameConfig {
            n_borrowers: 1000,
            interest_pct: 100.0,
            rounds: 1000,
            refinance: false,
            money_growth_pct: 0.0,
            seed,
        })
        .map_err(|e| e.to_string())?;
        let y = out.defaulted_money_fraction;
        if (y - 50.0).abs() <= MC_TOLERANCE_PCT {
            hits += 1;
        }
        values.push(y);
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    ensure!(hits >= MC_MIN_HITS, "{hits}/{MC_SEEDS} seeds within 50 ± 3 (range {lo:.2}..{hi:.2})");
    Ok(format!("{hits}/{MC_SEEDS} seeds within 50 ± 3, range {lo:.2}..{hi:.2}"))
}

fn reserve_banking() -> Outcome {
    let a = lending_roi(d("0.03"), d("0.10")).map_err(|e| e.to_string())?;
    let b = lending_roi(d("0.05"), d("0.05")).map_err(|e| e.to_string())?;
    ensure!(a == d("0.30"), "roi(0.03, 0.10) = {a}");
    ensure!(b == d("1.00"), "roi(0.05, 0.05) = {b}");
    let c = redeposit_cascade(Decimal::ONE, d("0.1"), 200).map_err(|e| e.to_string())?;
    let gap = (c - Decimal::from(10)).abs().to_f64().unwrap_or(f64::NAN);
    ensure!(gap <= CASCADE_TOLERANCE, "cascade {c}");
    Ok(format!("roi 0.30 and 1.00, cascade {:.9}", c.to_f64().unwrap_or(f64::NAN)))
}

fn growth() -> Outcome {
    let mut worst: f64 = 0.0;
    for alpha in [0.5, 1.0, 10.0, 1.0 / 0.03, 100.0] {
        for t in [0.0, 0.5, 1.0, 10.0, 50.0] {
            let p = GrowthParams::new(1.0, alpha).map_err(|e| e.to_string())?;
            let closed = growth_value(p, t, GrowthMethod::Closed).map_err(|e| e.to_string())?;
            let step = if t > 0.0 { (t / 1000.0).min(RK4_MAX_STEP) } else { RK4_MAX_STEP };
            let rk4 = growth_value(p, t, GrowthMethod::Rk4 { step }).map_err(|e| e.to_string())?;
            let rel = ((rk4 - closed) / closed).abs();
            ensure!(rel <= GROWTH_REL_TOLERANCE, "alpha {alpha}, t {t}: relative gap {rel:e}");
            worst = worst.max(rel);
        }
    }
    let path = debt_ratio_trajectory(3.0, 3.0, 100, 1.0).map_err(|e| e.to_string())?;
    ensure!(path.ratios.len() == 101, "{} ratios", path.ratios.len());
    let drift = path.ratios.iter().map(|r| (r - 1.0).abs()).fold(0.0, f64::max);
    ensure!(drift <= DEBT_TOLERANCE, "debt ratio drift {drift:e}");
    ensure!(path.fixed_point == Some(1.0), "fixed point {:?}", path.fixed_point);
    Ok(format!("worst RK4 gap {worst:.1e}, debt drift {drift:.1e}"))
}

fn condensation() -> Outcome {
    for n in 1..=20u32 {
        let p = exact::int(1i64 << (n - 1));
        let expected = &p / (&p + exact::int(1));
        let got = capital_share_exact(n).map_err(|e| e.to_string())?;
        ensure!(got == expected, "n = {n}: {got}");
        let float = capital_share(n).map_err(|e| e.to_string())?;
        ensure!(float == expected.to_f64().unwrap(), "n = {n}: float {float}");
    }
    let named = [(1, 1, 2), (2, 2, 3), (3, 4, 5), (4, 8, 9)];
    for (n, p, q) in named {
        ensure!(capital_share_exact(n).unwrap() == exact::ratio(p, q), "n = {n}");
    }
    let lend = clothespin_sim(ClothespinPath::LendRights, 1);
    ensure!(
        lend[1].my_rights == exact::ratio(4, 3) && lend[1].neighbor_rights == exact::ratio(2, 3),
        "year 1 split {} / {}",
        lend[1].my_rights,
        lend[1].neighbor_rights
    );
    let build = clothespin_sim(ClothespinPath::BuildMachines, 2);
    ensure!(
        build[2].my_rights == exact::ratio(3, 2) && build[2].neighbor_rights == exact::ratio(1, 2),
        "machine path split {} / {}",
        build[2].my_rights,
        build[2].neighbor_rights
    );
    Ok("shares exact for n = 1..20, splits 4/3 | 2/3 and 3/2 | 1/2".into())
}

fn optimizer() -> Outcome {
    let floor = 1.0 / 300.0;
    let mut slave = 0;
    let mut banker = 0;
    let mut monotone = 0;
    let mut worst_top = f64::INFINITY;
    let mut ratio_range = (f64::INFINITY, f64::NEG_INFINITY);
    let mut banker_shape_ok = true;
    for seed in 0..GA_SEEDS {
        let uniform = WealthDistribution::uniform(GA_N, floor).map_err(|e| e.to_string())?;
        let a = ga_optimize(&uniform, GA_STEPS, GA_UNIFORM_SCALE, seed);
        let random = WealthDistribution::random(GA_N, floor, ga_init_seed(seed)).map_err(|e| e.to_string())?;
        let b = ga_optimize(&random, GA_STEPS, GA_RANDOM_SCALE, seed);
        for run in [&a, &b] {
            if run.history.windows(2).all(|w| w[0] <= w[1]) {
                monotone += 1;
            }
        }
        if classify_equilibrium(&a.distribution, GA_CLASSIFY_TOLERANCE) == Equilibrium::SlaveOfficial {
            slave += 1;
        }
        if classify_equilibrium(&b.distribution, GA_CLASSIFY_TOLERANCE) == Equilibrium::BankerWheedler {
            banker += 1;
            let top = *b.distribution.weights().last().unwrap();
            let ratio = top / floor;
            worst_top = worst_top.min(top);
            ratio_range = (ratio_range.0.min(ratio), ratio_range.1.max(ratio));
            banker_shape_ok &= top >= BANKER_MIN_TOP
                && (ratio / BANKER_RATIO - 1.0).abs() <= BANKER_RATIO_TOLERANCE;
        }
    }
    let needed = (GA_MIN_SHARE * GA_SEEDS as f64).ceil() as usize;
    let detail = format!(
        "slave/official {slave}/{GA_SEEDS}, banker/wheedler {banker}/{GA_SEEDS}, \
         top >= {worst_top:.4}, top/floor {:.1}..{:.1}, monotone {monotone}/{}",
        ratio_range.0,
        ratio_range.1,
        2 * GA_SEEDS
    );
    ensure!(slave >= needed && banker >= needed, "{detail}");
    ensure!(banker_shape_ok, "{detail}");
    ensure!(monotone == 2 * GA_SEEDS as usize, "{detail}");
    Ok(detail)
}

fn ownership() -> Outcome {
    let net = OwnershipNetwork::three_banks();
    let solve = ownership_by_solve(&net).map_err(|e| e.to_string())?;
    let series = ownership_by_series(&net).map_err(|e| e.to_string())?;
    for (k, (a, b)) in solve.iter().zip(&series).enumerate() {
        ensure!((a - 1.0).abs() <= OWNERSHIP_TOLERANCE, "solve bank {k}: {a}");
        ensure!((b - 1.0).abs() <= OWNERSHIP_TOLERANCE, "series bank {k}: {b}");
    }
    let flow = dividend_flow(&net, &DividendRound::three_banks()).map_err(|e| e.to_string())?;
    for (k, bank) in flow.banks.iter().enumerate() {
        ensure!(
            bank.total_income == Decimal::from(100)
                && bank.payout == Decimal::from(100)
                && bank.net == Decimal::ZERO,
            "bank {k}: income {}, payout {}, net {}",
            bank.total_income,
            bank.payout,
            bank.net
        );
    }
    ensure!(flow.outsider_receipts == Decimal::from(6), "outsider {}", flow.outsider_receipts);
    let tax = dividend_tax(&DividendRound::three_banks(), d("0.25")).map_err(|e| e.to_string())?;
    ensure!(tax.total == Decimal::from(75), "tax {}", tax.total);
    ensure!(tax.insolvent == vec![true; 3], "flags {:?}", tax.insolvent);
    Ok("ownership (1, 1, 1) by both methods, dividend table exact, tax 75 with all flags".into())
}

fn housing() -> Outcome {
    let pay = exact::int(3000);
    let rate = exact::ratio(3, 100);
    let p0 = house_price(&pay, &rate, &exact::int(0)).map_err(|e| e.to_string())?;
    let p5 = house_price(&pay, &rate, &exact::ratio(1, 2)).map_err(|e| e.to_string())?;
    ensure!(p0.price == exact::int(100_000), "price {}", p0.price);
    ensure!(p5.price == exact::int(200_000), "price {}", p5.price);
    for refund in [exact::int(0), exact::ratio(1, 4), exact::ratio(1, 2), exact::ratio(9, 10)] {
        let h = house_price(&pay, &rate, &refund).map_err(|e| e.to_string())?;
        let cost = &h.price * &rate * (exact::int(1) - &refund);
        ensure!(cost == pay && h.net_annual_cost == pay, "refund {refund}: cost {cost}");
    }
    Ok("100000 and 200000, net cost 3000 at every refund".into())
}

fn monetary() -> Outcome {
    let state = MonetaryState::new(exact::int(100), exact::int(1), exact::int(1)).map_err(|e| e.to_string())?;
    let (_, report) = print_money(&state, &exact::int(10)).map_err(|e| e.to_string())?;
    ensure!(report.inflation_pct == exact::int(900), "inflation {}", report.inflation_pct);
    ensure!(report.devaluation_pct == exact::int(90), "devaluation {}", report.devaluation_pct);
    let rates: [Exact; 10] = [0, 1, 2, 3, 5, 7, 10, 25, 50, 100].map(exact::int);
    for k in 0..10 {
        let f = exact::ratio(k, 9);
        for i in &rates {
            let s = seigniorage_transfer(&f, i).map_err(|e| e.to_string())?;
            let sum = &f * &s.lender_gain_pct + (exact::int(1) - &f) * &s.nonlender_gain_pct;
            ensure!(sum == exact::int(0), "f {f}, i {i}: sum {sum}");
        }
    }
    Ok("900% / 90%, zero-sum on the 10 x 10 grid".into())
}

/// Independent enumeration over pure strategies.
fn brute_force(t: &PayoffTable) -> (Vec<Pair>, Vec<Pair>) {
    let all: Vec<_> = Action::ALL
        .iter()
        .flat_map(|&a| Action::ALL.iter().map(move |&b| (a, b)))
        .collect();
    let nash = all
        .iter()
        .copied()
        .filter(|&(a, b)| {
            let (ua, ub) = t.payoff((a, b));
            Action::ALL.iter().all(|&a2| t.payoff((a2, b)).0 <= ua)
                && Action::ALL.iter().all(|&b2| t.payoff((a, b2)).1 <= ub)
        })
        .collect();
    let pareto = all
        .iter()
        .copied()
        .filter(|&o| {
            let (pa, pb) = t.payoff(o);
            all.iter().all(|&q| {
                let (qa, qb) = t.payoff(q);
                !(qa >= pa && qb >= pb && (qa > pa || qb > pb))
            })
        })
        .collect();
    (nash, pareto)
}

fn dilemma() -> Outcome {
    let s = solve_dilemma(&PayoffTable::prisoners());
    ensure!(s.nash == [(Action::Confess, Action::Confess)], "nash {:?}", s.nash);
    ensure!(s.pareto.contains(&(Action::Silent, Action::Silent)), "pareto {:?}", s.pareto);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for k in 0..DILEMMA_TABLES {
        let mut payoffs = [[(0.0, 0.0); 2]; 2];
        for cell in payoffs.iter_mut().flatten() {
            // Small integers so ties occur often.
            *cell = (rng.gen_range(-3..=3) as f64, rng.gen_range(-3..=3) as f64);
        }
        let table = PayoffTable { payoffs };
        let s = solve_dilemma(&table);
        let (nash, pareto) = brute_force(&table);
        ensure!(s.nash == nash && s.pareto == pareto, "table {k} disagrees: {table:?}");
    }
    Ok(format!("confess/confess, silent/silent Pareto, {DILEMMA_TABLES} random tables agree"))
}

fn cli() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_condenlab");
    let configs = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut compared = 0;
    for name in ["ga_optimize", "refinance_game", "ownership", "capital_share", "house_price"] {
        let mut outputs = Vec::new();
        for run in ["a", "b"] {
            let out = dir.path().join(format!("{name}_{run}"));
            let status = Command::new(bin)
                .args(["run", "--format", "csv,json", "--config"])
                .arg(configs.join(format!("{name}.json")))
                .arg("--out")
                .arg(&out)
                .status()
                .map_err(|e| e.to_string())?;
            ensure!(status.success(), "{name} run {run} exited {status}");
            let read = |ext: &str| std::fs::read(out.join(format!("{name}.{ext}"))).map_err(|e| e.to_string());
            outputs.push((read("csv")?, read("json")?));
        }
        ensure!(outputs[0] == outputs[1], "{name}: outputs differ between runs");
        compared += 1;
    }
    let out = Command::new(bin).arg("verify").output().map_err(|e| e.to_string())?;
    let text = String::from_utf8_lossy(&out.stdout);
    let examples = text.lines().filter(|l| l.starts_with("PASS [example]")).count();
    let failed = text.lines().filter(|l| l.starts_with("FAIL")).count();
    ensure!(out.status.code() == Some(0), "verify exited {:?} with {failed} failures", out.status.code());
    ensure!(examples >= 20, "only {examples} worked-example checks");
    Ok(format!("{compared} scenarios byte-identical, verify passed {examples} worked-example checks"))
}

#[test]
fn acceptance() {
    let mut r = Report { failures: Vec::new() };
    r.criterion(1, "bankruptcy formula", Some(Duration::from_secs(1)), bankruptcy);
    r.criterion(2, "Monte-Carlo consistency", Some(Duration::from_secs(10)), monte_carlo);
    r.criterion(3, "reserve-banking arithmetic", None, reserve_banking);
    r.criterion(4, "growth model", None, growth);
    r.criterion(5, "condensation", None, condensation);
    r.criterion(6, "incentive optimizer", Some(Duration::from_secs(120)), optimizer);
    r.criterion(7, "ownership", None, ownership);
    r.criterion(8, "housing", None, housing);
    r.criterion(9, "monetary", None, monetary);
    r.criterion(10, "dilemma", None, dilemma);
    r.criterion(11, "CLI determinism", None, cli);
    assert!(r.failures.is_empty(), "failed criteria: {:?}", r.failures);
}
