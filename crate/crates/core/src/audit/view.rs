//! What each adversary observes, as a flat tuple cut out of a transcript.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Params, Variant};
use crate::transcript::{Node, Phase, Transcript};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AdversaryView {
    /// Queries received by a set of colluding databases.
    Colluding { databases: Vec<Node> },
    /// Queries and answers on the links of tapped databases.
    Eavesdropper { databases: Vec<Node> },
    /// Storage shares of one party held by communicating databases.
    Storage { party: usize, databases: Vec<Node> },
    /// Every answer delivered to the user.
    User,
}

impl AdversaryView {
    pub fn databases(&self) -> &[Node] {
        match self {
            AdversaryView::Colluding { databases }
            | AdversaryView::Eavesdropper { databases }
            | AdversaryView::Storage { databases, .. } => databases,
            AdversaryView::User => &[],
        }
    }

    /// The observed tuple, in selection order then emission order.
    pub fn extract(&self, t: &Transcript) -> Vec<u64> {
        match self {
            AdversaryView::Colluding { databases } => databases
                .iter()
                .flat_map(|&d| t.values_at(Phase::Query, d))
                .collect(),
            AdversaryView::Eavesdropper { databases } => databases
                .iter()
                .flat_map(|&d| t.values_at(Phase::Query, d).chain(t.values_at(Phase::Answer, d)))
                .collect(),
            AdversaryView::Storage { party, databases } => databases
                .iter()
                .flat_map(|&d| {
                    t.events()
                        .iter()
                        .filter(move |e| {
                            e.phase == Phase::StorageDistribution && e.from == Node::Party(*party) && e.to == d
                        })
                        .map(|e| e.value)
                })
                .collect(),
            AdversaryView::User => t
                .events()
                .iter()
                .filter(|e| e.phase == Phase::Answer)
                .map(|e| e.value)
                .collect(),
        }
    }

    /// Checks that every selected database takes part in the run.
    pub fn check(&self, params: &Params) -> Result<()> {
        let mut seen = Vec::new();
        for &d in self.databases() {
            let Node::Database { party, db } = d else {
                return Err(Error::Param(format!("{d} is not a database")));
            };
            let live = party < params.m()
                && db < params.n()
                && (!params.variant().is_type_two() || party * params.n() + db < params.active_databases());
            if !live {
                return Err(Error::Param(format!("{d} does not take part in this run")));
            }
            if seen.contains(&d) {
                return Err(Error::Param(format!("{d} is selected twice")));
            }
            seen.push(d);
        }
        if let AdversaryView::Storage { party, .. } = self {
            if !params.variant().is_type_two() || *party >= params.m() {
                return Err(Error::Param("storage views need a type II run and a valid party".into()));
            }
        }
        Ok(())
    }

    /// Whether the selection respects the collusion or eavesdropping budget
    /// the scheme was parameterised for.
    pub fn within_budget(&self, params: &Params) -> bool {
        let dbs = self.databases();
        let one_party = dbs.windows(2).all(|w| party_of(w[0]) == party_of(w[1]));
        let type_two = params.variant().scheme() == Variant::Spma2;
        match self {
            AdversaryView::Colluding { .. } if type_two => dbs.len() <= params.n() * params.t(),
            AdversaryView::Colluding { .. } => {
                (0..params.m()).all(|i| dbs.iter().filter(|&&d| party_of(d) == Some(i)).count() <= params.t())
            }
            AdversaryView::Eavesdropper { .. } if type_two => dbs.len() <= params.max_y(),
            AdversaryView::Eavesdropper { .. } => one_party && dbs.len() <= params.max_y(),
            AdversaryView::Storage { .. } => dbs.len() <= params.storage_degree(),
            AdversaryView::User => true,
        }
    }

    pub fn describe(&self) -> String {
        let names: Vec<String> = self.databases().iter().map(Node::to_string).collect();
        match self {
            AdversaryView::Colluding { .. } => format!("colluding {{{}}}", names.join(", ")),
            AdversaryView::Eavesdropper { .. } => format!("tapping {{{}}}", names.join(", ")),
            AdversaryView::Storage { party, .. } => format!("party{} shares at {{{}}}", party + 1, names.join(", ")),
            AdversaryView::User => "user".into(),
        }
    }
}

fn party_of(n: Node) -> Option<usize> {
    match n {
        Node::Database { party, .. } => Some(party),
        _ => None,
    }
}

/// Parses `party1.db2` style names (1-based).
pub fn parse_database(s: &str) -> Result<Node> {
    let bad = || Error::Param(format!("cannot parse database name {s:?}, expected e.g. party1.db2"));
    let (p, d) = s.trim().split_once('.').ok_or_else(bad)?;
    let num = |x: &str, prefix: &str| -> Result<usize> {
        x.strip_prefix(prefix)
            .and_then(|n| n.parse::<usize>().ok())
            .filter(|&n| n >= 1)
            .map(|n| n - 1)
            .ok_or_else(bad)
    };
    Ok(Node::Database {
        party: num(p, "party")?,
        db: num(d, "db")?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fe;
    use crate::model::SchemeParams;

    fn db(party: usize, db: usize) -> Node {
        Node::Database { party, db }
    }

    #[test]
    fn extraction_order() {
        let mut t = Transcript::new();
        t.extend(Phase::Query, Node::User, db(0, 0), &[Fe::ONE, Fe::ZERO]);
        t.extend(Phase::Query, Node::User, db(0, 1), &[Fe::ZERO, Fe::ZERO]);
        t.push(Phase::Answer, db(0, 1), Node::User, Fe::ONE);
        t.push(Phase::Answer, db(0, 0), Node::User, Fe::ZERO);
        let v = AdversaryView::Colluding { databases: vec![db(0, 1), db(0, 0)] };
        assert_eq!(v.extract(&t), vec![0, 0, 1, 0]);
        let v = AdversaryView::Eavesdropper { databases: vec![db(0, 0)] };
        assert_eq!(v.extract(&t), vec![1, 0, 0]);
        assert_eq!(AdversaryView::User.extract(&t), vec![1, 0]);
        assert!(AdversaryView::Colluding { databases: vec![] }.extract(&t).is_empty());
    }

    #[test]
    fn budgets() {
        let p = SchemeParams::new(Variant::Pma1, 2, 2, 1, 1, 2, 3).validate().unwrap();
        let c = |d: Vec<Node>| AdversaryView::Colluding { databases: d };
        assert!(c(vec![db(0, 0)]).within_budget(&p));
        assert!(!c(vec![db(0, 0), db(0, 1)]).within_budget(&p));
        assert!(c(vec![db(0, 0), db(1, 0)]).within_budget(&p));
        assert!(!AdversaryView::Eavesdropper { databases: vec![db(0, 0), db(1, 0)] }.within_budget(&p));

        let p = SchemeParams::new(Variant::Spma2, 3, 1, 1, 0, 2, 5).validate().unwrap();
        assert!(c(vec![db(1, 0)]).within_budget(&p));
        assert!(!c(vec![db(0, 0), db(1, 0)]).within_budget(&p));
        assert!(c(vec![db(3, 0)]).check(&p).is_err());
        assert!(c(vec![db(0, 0), db(0, 0)]).check(&p).is_err());
    }

    #[test]
    fn names() {
        assert_eq!(parse_database("party2.db1").unwrap(), db(1, 0));
        assert!(parse_database("party0.db1").is_err());
        assert!(parse_database("db1").is_err());
    }
}
