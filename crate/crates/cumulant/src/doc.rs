//! Serialized document formats: JSON games, extensive form games, play
//! scripts, and CSV table export. One schema covers both payload kinds via a
//! `kind` discriminator; `version` is mandatory.

use serde::{Deserialize, Serialize};

use crate::algebra::NpTable;
use crate::efg::{EfgState, ExtensiveFormGame};
use crate::error::{Error, Result};
use crate::game::{CumulativeGame, GroundedPosition, HeapPosition, Matrix, Player};
use crate::lab::CriticalSetReport;
use crate::outcome::{SiPartizanTable, SiSymmetricTable, ZsPartizanTable, ZsSymmetricTable};
use crate::rulesets::{build_game, prologue_compound, RulesetSpec, UtilitySpec};

pub const DOCUMENT_VERSION: u32 = 1;

/// A parsed top-level document.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Document {
    CumulativeGame(GameDoc),
    Efg(EfgDoc),
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct InitialDoc {
    pub heaps: Vec<u32>,
    /// Row-per-player cumulation; defaults to all zeros.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cumulation: Option<Vec<Vec<f64>>>,
    pub previous_player: u8,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GameDoc {
    pub version: u32,
    pub players: usize,
    pub heaps: usize,
    pub ruleset: RulesetSpec,
    pub utility: UtilitySpec,
    pub initial: InitialDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub move_budget: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EfgStateDoc {
    pub id: usize,
    pub turn: u8,
    #[serde(default)]
    pub children: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub utilities: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EfgDoc {
    pub version: u32,
    pub players: usize,
    pub states: Vec<EfgStateDoc>,
    pub root: usize,
}

/// A scripted line of play: one action vector per move.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ScriptDoc {
    pub version: u32,
    pub actions: Vec<Vec<i64>>,
}

fn invalid(field: &str, message: impl Into<String>) -> Error {
    Error::Validation { field: field.into(), message: message.into() }
}

/// Parse any supported document from JSON, reporting schema violations with
/// the offending field path.
pub fn parse_document(text: &str) -> Result<Document> {
    let doc: Document = serde_json::from_str(text)
        .map_err(|e| invalid("(document)", e.to_string()))?;
    match &doc {
        Document::CumulativeGame(g) => g.validate()?,
        Document::Efg(e) => e.validate()?,
    }
    Ok(doc)
}

pub fn parse_script(text: &str) -> Result<ScriptDoc> {
    let doc: ScriptDoc = serde_json::from_str(text)
        .map_err(|e| invalid("(script)", e.to_string()))?;
    if doc.version != DOCUMENT_VERSION {
        return Err(invalid("version", format!("unsupported version {}", doc.version)));
    }
    Ok(doc)
}

impl GameDoc {
    pub fn validate(&self) -> Result<()> {
        if self.version != DOCUMENT_VERSION {
            return Err(invalid("version", format!("unsupported version {}", self.version)));
        }
        if self.players == 0 {
            return Err(invalid("players", "must be positive"));
        }
        if self.heaps == 0 {
            return Err(invalid("heaps", "must be positive"));
        }
        if self.initial.heaps.len() != self.heaps {
            return Err(invalid(
                "initial.heaps",
                format!("expected {} entries, got {}", self.heaps, self.initial.heaps.len()),
            ));
        }
        if let Some(c) = &self.initial.cumulation {
            if c.len() != self.players || c.iter().any(|row| row.len() != self.heaps) {
                return Err(invalid(
                    "initial.cumulation",
                    format!("expected a {}x{} matrix", self.players, self.heaps),
                ));
            }
        }
        let p = self.initial.previous_player;
        if p == 0 || p as usize > self.players {
            return Err(invalid(
                "initial.previous_player",
                format!("player {} out of 1..={}", p, self.players),
            ));
        }
        Ok(())
    }

    /// Instantiate the described game and its starting grounded position.
    pub fn build(&self) -> Result<(CumulativeGame, GroundedPosition)> {
        self.validate()?;
        let mut game = match &self.ruleset {
            RulesetSpec::PrologueCompound => prologue_compound(self.players)?.0,
            spec => build_game(spec, &self.utility, self.players, self.heaps)?,
        };
        if let Some(b) = self.move_budget {
            game.move_budget = b;
        }
        let cumulation = match &self.initial.cumulation {
            Some(rows) => Matrix::from_rows(rows.clone())?,
            None => Matrix::zeros(self.players, self.heaps),
        };
        let start = GroundedPosition::new(
            HeapPosition::new(self.initial.heaps.clone(), cumulation)?,
            Player(self.initial.previous_player),
        );
        Ok((game, start))
    }

    /// Document describing a game built from explicit pieces.
    pub fn new(
        ruleset: RulesetSpec,
        utility: UtilitySpec,
        players: usize,
        heaps: Vec<u32>,
        cumulation: Option<Vec<Vec<f64>>>,
        previous_player: u8,
    ) -> GameDoc {
        GameDoc {
            version: DOCUMENT_VERSION,
            players,
            heaps: heaps.len(),
            ruleset,
            utility,
            initial: InitialDoc { heaps, cumulation, previous_player },
            move_budget: None,
        }
    }
}

impl EfgDoc {
    pub fn validate(&self) -> Result<()> {
        if self.version != DOCUMENT_VERSION {
            return Err(invalid("version", format!("unsupported version {}", self.version)));
        }
        let mut seen = std::collections::HashSet::new();
        for (k, s) in self.states.iter().enumerate() {
            if !seen.insert(s.id) {
                return Err(invalid(&format!("states[{k}].id"), "duplicate id"));
            }
        }
        Ok(())
    }

    /// Build the in-memory game, remapping declared ids to dense indices.
    pub fn build(&self) -> Result<ExtensiveFormGame> {
        self.validate()?;
        let index: std::collections::HashMap<usize, usize> =
            self.states.iter().enumerate().map(|(k, s)| (s.id, k)).collect();
        let mut states = Vec::with_capacity(self.states.len());
        for (k, s) in self.states.iter().enumerate() {
            let children = s
                .children
                .iter()
                .map(|c| {
                    index.get(c).copied().ok_or_else(|| {
                        invalid(&format!("states[{k}].children"), format!("unknown id {c}"))
                    })
                })
                .collect::<Result<Vec<usize>>>()?;
            states.push(EfgState {
                turn: Player(s.turn),
                children,
                utilities: s.utilities.clone(),
            });
        }
        let root = *index
            .get(&self.root)
            .ok_or_else(|| invalid("root", format!("unknown id {}", self.root)))?;
        let efg = ExtensiveFormGame { n: self.players, states, root };
        efg.validate()?;
        Ok(efg)
    }

    pub fn from_game(efg: &ExtensiveFormGame) -> EfgDoc {
        EfgDoc {
            version: DOCUMENT_VERSION,
            players: efg.n,
            states: efg
                .states
                .iter()
                .enumerate()
                .map(|(id, s)| EfgStateDoc {
                    id,
                    turn: s.turn.0,
                    children: s.children.clone(),
                    utilities: s.utilities.clone(),
                })
                .collect(),
            root: efg.root,
        }
    }
}

/// Deterministic pretty JSON for any serializable payload.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| invalid("(serialize)", e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn fmt_f64(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

/// CSV layouts: comma separator, header row, LF endings.
pub fn csv_zs_symmetric(t: &ZsSymmetricTable) -> String {
    let mut out = String::from("heap,outcome\n");
    for (x, o) in t.rows.iter().enumerate() {
        out.push_str(&format!("{x},{o}\n"));
    }
    out
}

pub fn csv_si_symmetric(t: &SiSymmetricTable) -> String {
    let mut out = String::from("heap,o1,o2\n");
    for (x, (o1, o2)) in t.rows.iter().enumerate() {
        out.push_str(&format!("{x},{o1},{o2}\n"));
    }
    out
}

/// Columns by previous player: `prev1` is the value after player 1 moved.
pub fn csv_zs_partizan(t: &ZsPartizanTable) -> String {
    let mut out = String::from("heap,prev1,prev2\n");
    for (x, row) in t.rows.iter().enumerate() {
        out.push_str(&format!("{x},{},{}\n", row[0], row[1]));
    }
    out
}

pub fn csv_si_partizan(t: &SiPartizanTable) -> String {
    let mut out = String::from("heap,o1_prev1,o2_prev1,o1_prev2,o2_prev2\n");
    for (x, row) in t.rows.iter().enumerate() {
        out.push_str(&format!(
            "{x},{},{},{},{}\n",
            row[0].0, row[0].1, row[1].0, row[1].1
        ));
    }
    out
}

pub fn csv_np_table(t: &NpTable) -> String {
    let mut out = String::from("heap,left_to_move,right_to_move,class\n");
    for (x, ((l, r), class)) in t.results.iter().zip(&t.classes).enumerate() {
        out.push_str(&format!("{x},{l:?},{r:?},{class}\n"));
    }
    out
}

pub fn csv_critical_sets(report: &CriticalSetReport) -> String {
    let mut out = String::from("set,first_divergence\n");
    for c in &report.critical {
        let set = c
            .set
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        out.push_str(&format!("{set},{}\n", c.first_divergence));
    }
    out
}

/// One row per player of a value vector.
pub fn csv_values(values: &[f64]) -> String {
    let mut out = String::from("player,value\n");
    for (i, v) in values.iter().enumerate() {
        out.push_str(&format!("{},{}\n", i + 1, fmt_f64(*v)));
    }
    out
}
