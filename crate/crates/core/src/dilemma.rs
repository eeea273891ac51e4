//! Two-player, two-action games and the prisoner's dilemma.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Action {
    Confess,
    Silent,
}

impl Action {
    pub const ALL: [Action; 2] = [Action::Confess, Action::Silent];

    fn index(self) -> usize {
        match self {
            Action::Confess => 0,
            Action::Silent => 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Action::Confess => "confess",
            Action::Silent => "silent",
        }
    }
}

/// `(action of A, action of B)`.
pub type Outcome = (Action, Action);

/// Utilities indexed by `[action of A][action of B]`, each `(u_A, u_B)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PayoffTable {
    pub payoffs: [[(f64, f64); 2]; 2],
}

impl PayoffTable {
    pub fn payoff(&self, (a, b): Outcome) -> (f64, f64) {
        self.payoffs[a.index()][b.index()]
    }

    /// Both silent walk free; a lone confessor gets 10 (thousand euro) and
    /// the other 50 years; both confessing get 20 years each. Years count
    /// negative.
    pub fn prisoners() -> Self {
        Self {
            payoffs: [[(-20.0, -20.0), (10.0, -50.0)], [(-50.0, 10.0), (0.0, 0.0)]],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DilemmaSolution {
    /// Strictly dominant action of A and of B, if any.
    pub dominant: (Option<Action>, Option<Action>),
    /// Pure-strategy Nash equilibria.
    pub nash: Vec<Outcome>,
    /// Outcomes no other outcome Pareto-dominates.
    pub pareto: Vec<Outcome>,
}

fn outcomes() -> impl Iterator<Item = Outcome> {
    Action::ALL
        .into_iter()
        .flat_map(|a| Action::ALL.into_iter().map(move |b| (a, b)))
}

fn other(action: Action) -> Action {
    match action {
        Action::Confess => Action::Silent,
        Action::Silent => Action::Confess,
    }
}

pub fn solve_dilemma(table: &PayoffTable) -> DilemmaSolution {
    let u_a = |o: Outcome| table.payoff(o).0;
    let u_b = |o: Outcome| table.payoff(o).1;

    let dominant_a = Action::ALL.into_iter().find(|&x| {
        Action::ALL
            .into_iter()
            .all(|b| u_a((x, b)) > u_a((other(x), b)))
    });
    let dominant_b = Action::ALL.into_iter().find(|&y| {
        Action::ALL
            .into_iter()
            .all(|a| u_b((a, y)) > u_b((a, other(y))))
    });

    let nash = outcomes()
        .filter(|&(a, b)| u_a((a, b)) >= u_a((other(a), b)) && u_b((a, b)) >= u_b((a, other(b))))
        .collect();

    let pareto = outcomes()
        .filter(|&o| {
            let (pa, pb) = table.payoff(o);
            !outcomes().any(|q| {
                let (qa, qb) = table.payoff(q);
                qa >= pa && qb >= pb && (qa > pa || qb > pb)
            })
        })
        .collect();

    DilemmaSolution {
        dominant: (dominant_a, dominant_b),
        nash,
        pareto,
    }
}
