//! EVRP instance files in the keyed-header format of the public EVRP benchmark.
//!
//! ```text
//! NAME: E-n22-k4
//! DIMENSION: 22                 # depot + customers
//! STATIONS: 8
//! CAPACITY: 6000
//! ENERGY_CAPACITY: 94
//! ENERGY_CONSUMPTION: 1.2
//! NODE_COORD_SECTION            # "<id> <x> <y>"
//! 1 145 215
//! ...
//! DEMAND_SECTION                # "<id> <demand>", one line per depot/customer id
//! 1 0
//! ...
//! STATIONS_COORD_SECTION        # "<id>" referring to a node coordinate, or "<id> <x> <y>"
//! 23
//! ...
//! DEPOT_SECTION                 # depot id, optionally terminated by -1
//! 1
//! -1
//! EOF
//! ```
//!
//! Header lines are `KEY: value` or `KEY value`; keys are case-insensitive.
//! When stations are listed by id only, `NODE_COORD_SECTION` must hold
//! `DIMENSION + STATIONS` entries; with inline coordinates it holds `DIMENSION`.
//! Customers are numbered `0..n` in increasing id order, stations `0..m` in
//! the order of `STATIONS_COORD_SECTION`. Coordinates are kept as doubles and
//! distances are exact Euclidean, never rounded.

use std::collections::{BTreeMap, HashMap};

use log::warn;
use thiserror::Error;

use crate::model::{Customer, Instance, ModelError, Point};

#[derive(Debug, Error, PartialEq)]
pub enum ParseError {
    #[error("line {line}: malformed number `{token}`")]
    Number { line: usize, token: String },
    #[error("missing header key {0}")]
    MissingKey(&'static str),
    #[error("missing section {0}")]
    MissingSection(&'static str),
    #[error("{section}: expected {expected} entries, found {found}")]
    Count {
        section: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: duplicate id {id} in {section}")]
    DuplicateId {
        line: usize,
        id: i64,
        section: &'static str,
    },
    #[error("line {line}: id {id} in {section} has no coordinates")]
    UnknownId {
        line: usize,
        id: i64,
        section: &'static str,
    },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("customer id {0} has no demand entry")]
    MissingDemand(i64),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A parsed file: the instance plus header entries that were read but not used.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceFile {
    pub instance: Instance,
    pub extra_headers: Vec<(String, String)>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Header,
    Coords,
    Demands,
    Stations,
    Depot,
    Done,
}

const SECTIONS: [(&str, Section); 4] = [
    ("NODE_COORD_SECTION", Section::Coords),
    ("DEMAND_SECTION", Section::Demands),
    ("STATIONS_COORD_SECTION", Section::Stations),
    ("DEPOT_SECTION", Section::Depot),
];

/// Keys read for information only; kept without a warning.
const KNOWN_UNUSED: [&str; 5] = ["COMMENT", "TYPE", "VEHICLES", "OPTIMAL_VALUE", "EDGE_WEIGHT_TYPE"];

fn number(token: &str, line: usize) -> Result<f64, ParseError> {
    token
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| ParseError::Number {
            line,
            token: token.to_string(),
        })
}

fn id(token: &str, line: usize) -> Result<i64, ParseError> {
    token.parse::<i64>().map_err(|_| ParseError::Number {
        line,
        token: token.to_string(),
    })
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    parse_instance_file(text).map(|f| f.instance)
}

pub fn parse_instance_file(text: &str) -> Result<InstanceFile, ParseError> {
    let mut headers: BTreeMap<String, (usize, String)> = BTreeMap::new();
    let mut extra = Vec::new();
    let mut coords: BTreeMap<i64, Point> = BTreeMap::new();
    let mut demands: HashMap<i64, f64> = HashMap::new();
    let mut station_entries: Vec<(usize, i64, Option<Point>)> = Vec::new();
    let mut depot_ids: Vec<(usize, i64)> = Vec::new();
    let mut seen = [false; 4];
    let mut section = Section::Header;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || section == Section::Done {
            continue;
        }
        let upper = trimmed.to_ascii_uppercase();
        if upper == "EOF" {
            section = Section::Done;
            continue;
        }
        if let Some(pos) = SECTIONS.iter().position(|(name, _)| upper == *name) {
            if seen[pos] {
                return Err(ParseError::Syntax {
                    line,
                    message: format!("section {} repeated", SECTIONS[pos].0),
                });
            }
            seen[pos] = true;
            section = SECTIONS[pos].1;
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        match section {
            Section::Header | Section::Done => {
                let (key, value) = match trimmed.split_once(':') {
                    Some((k, v)) => (k.trim(), v.trim()),
                    None => match trimmed.split_once(char::is_whitespace) {
                        Some((k, v)) => (k.trim(), v.trim()),
                        None => {
                            return Err(ParseError::Syntax {
                                line,
                                message: format!("expected `KEY: value`, got `{trimmed}`"),
                            })
                        }
                    },
                };
                let key = key.to_ascii_uppercase();
                if headers.contains_key(&key) {
                    return Err(ParseError::Syntax {
                        line,
                        message: format!("header {key} repeated"),
                    });
                }
                headers.insert(key, (line, value.to_string()));
            }
            Section::Coords => {
                if tokens.len() != 3 {
                    return Err(ParseError::Syntax {
                        line,
                        message: "expected `<id> <x> <y>`".into(),
                    });
                }
                let node = id(tokens[0], line)?;
                let p = Point::new(number(tokens[1], line)?, number(tokens[2], line)?);
                if coords.insert(node, p).is_some() {
                    return Err(ParseError::DuplicateId {
                        line,
                        id: node,
                        section: "NODE_COORD_SECTION",
                    });
                }
            }
            Section::Demands => {
                if tokens.len() != 2 {
                    return Err(ParseError::Syntax {
                        line,
                        message: "expected `<id> <demand>`".into(),
                    });
                }
                let node = id(tokens[0], line)?;
                if demands.insert(node, number(tokens[1], line)?).is_some() {
                    return Err(ParseError::DuplicateId {
                        line,
                        id: node,
                        section: "DEMAND_SECTION",
                    });
                }
            }
            Section::Stations => {
                let node = id(tokens[0], line)?;
                let inline = match tokens.len() {
                    1 => None,
                    3 => Some(Point::new(number(tokens[1], line)?, number(tokens[2], line)?)),
                    _ => {
                        return Err(ParseError::Syntax {
                            line,
                            message: "expected `<id>` or `<id> <x> <y>`".into(),
                        })
                    }
                };
                if station_entries.iter().any(|&(_, s, _)| s == node) {
                    return Err(ParseError::DuplicateId {
                        line,
                        id: node,
                        section: "STATIONS_COORD_SECTION",
                    });
                }
                station_entries.push((line, node, inline));
            }
            Section::Depot => {
                for t in tokens {
                    let node = id(t, line)?;
                    if node == -1 {
                        section = Section::Done;
                        break;
                    }
                    depot_ids.push((line, node));
                }
            }
        }
    }

    for (pos, (name, _)) in SECTIONS.iter().enumerate() {
        if !seen[pos] {
            return Err(ParseError::MissingSection(name));
        }
    }

    let header = |key: &'static str| -> Result<(usize, &str), ParseError> {
        headers
            .get(key)
            .map(|(l, v)| (*l, v.as_str()))
            .ok_or(ParseError::MissingKey(key))
    };
    let header_num = |key: &'static str| -> Result<f64, ParseError> {
        let (line, v) = header(key)?;
        number(v, line)
    };
    let header_count = |key: &'static str| -> Result<usize, ParseError> {
        let (line, v) = header(key)?;
        v.parse::<usize>().map_err(|_| ParseError::Number {
            line,
            token: v.to_string(),
        })
    };

    let name = headers
        .get("NAME")
        .map(|(_, v)| v.clone())
        .ok_or(ParseError::MissingKey("NAME"))?;
    let dimension = header_count("DIMENSION")?;
    let num_stations = header_count("STATIONS")?;
    let cargo = header_num("CAPACITY")?;
    let battery = header_num("ENERGY_CAPACITY")?;
    let rate = header_num("ENERGY_CONSUMPTION")?;

    for (key, (_, value)) in &headers {
        let used = matches!(
            key.as_str(),
            "NAME" | "DIMENSION" | "STATIONS" | "CAPACITY" | "ENERGY_CAPACITY" | "ENERGY_CONSUMPTION"
        );
        if used {
            continue;
        }
        if !KNOWN_UNUSED.contains(&key.as_str()) {
            warn!("ignoring unknown header key {key}");
        }
        extra.push((key.clone(), value.clone()));
    }

    if station_entries.len() != num_stations {
        return Err(ParseError::Count {
            section: "STATIONS_COORD_SECTION",
            expected: num_stations,
            found: station_entries.len(),
        });
    }
    let by_reference = station_entries.iter().filter(|e| e.2.is_none()).count();
    if by_reference != 0 && by_reference != station_entries.len() {
        return Err(ParseError::Syntax {
            line: station_entries[0].0,
            message: "stations must all be listed by id or all with coordinates".into(),
        });
    }
    let expected_coords = dimension + by_reference;
    if coords.len() != expected_coords {
        return Err(ParseError::Count {
            section: "NODE_COORD_SECTION",
            expected: expected_coords,
            found: coords.len(),
        });
    }

    let &[(depot_line, depot_id)] = depot_ids.as_slice() else {
        return Err(ParseError::Count {
            section: "DEPOT_SECTION",
            expected: 1,
            found: depot_ids.len(),
        });
    };
    let depot = *coords.get(&depot_id).ok_or(ParseError::UnknownId {
        line: depot_line,
        id: depot_id,
        section: "DEPOT_SECTION",
    })?;

    let mut stations = Vec::with_capacity(num_stations);
    for &(line, sid, inline) in &station_entries {
        let p = match inline {
            Some(p) => p,
            None => *coords.get(&sid).ok_or(ParseError::UnknownId {
                line,
                id: sid,
                section: "STATIONS_COORD_SECTION",
            })?,
        };
        if sid == depot_id {
            return Err(ParseError::Syntax {
                line,
                message: "depot listed as a station".into(),
            });
        }
        stations.push(p);
    }

    let station_ids: Vec<i64> = if by_reference > 0 {
        station_entries.iter().map(|e| e.1).collect()
    } else {
        Vec::new()
    };
    let mut customers = Vec::with_capacity(dimension.saturating_sub(1));
    for (&node, &position) in &coords {
        if node == depot_id || station_ids.contains(&node) {
            continue;
        }
        let demand = *demands.get(&node).ok_or(ParseError::MissingDemand(node))?;
        customers.push(Customer { position, demand });
    }
    if customers.len() + 1 != dimension {
        return Err(ParseError::Count {
            section: "NODE_COORD_SECTION",
            expected: dimension,
            found: customers.len() + 1,
        });
    }

    // the depot has a (zero) demand line too
    if demands.len() != dimension {
        return Err(ParseError::Count {
            section: "DEMAND_SECTION",
            expected: dimension,
            found: demands.len(),
        });
    }

    let instance = Instance::new(name, depot, customers, stations, cargo, battery, rate)?;
    Ok(InstanceFile {
        instance,
        extra_headers: extra,
    })
}

/// Writes an instance in the same format; depot is id 1, customers follow,
/// stations are appended to the coordinate section and referenced by id.
pub fn emit_instance(instance: &Instance) -> String {
    use std::fmt::Write;
    let n = instance.num_customers();
    let m = instance.num_stations();
    let mut s = String::new();
    let _ = writeln!(s, "NAME: {}", instance.name());
    let _ = writeln!(s, "TYPE: EVRP");
    let _ = writeln!(s, "DIMENSION: {}", n + 1);
    let _ = writeln!(s, "STATIONS: {m}");
    let _ = writeln!(s, "CAPACITY: {}", instance.cargo_capacity());
    let _ = writeln!(s, "ENERGY_CAPACITY: {}", instance.battery_capacity());
    let _ = writeln!(s, "ENERGY_CONSUMPTION: {}", instance.consumption_rate());
    let _ = writeln!(s, "EDGE_WEIGHT_TYPE: EUC_2D");
    let _ = writeln!(s, "NODE_COORD_SECTION");
    let d = instance.depot();
    let _ = writeln!(s, "1 {} {}", d.x, d.y);
    for (i, c) in instance.customers().iter().enumerate() {
        let _ = writeln!(s, "{} {} {}", i + 2, c.position.x, c.position.y);
    }
    for (j, p) in instance.stations().iter().enumerate() {
        let _ = writeln!(s, "{} {} {}", n + 2 + j, p.x, p.y);
    }
    let _ = writeln!(s, "DEMAND_SECTION");
    let _ = writeln!(s, "1 0");
    for (i, c) in instance.customers().iter().enumerate() {
        let _ = writeln!(s, "{} {}", i + 2, c.demand);
    }
    let _ = writeln!(s, "STATIONS_COORD_SECTION");
    for j in 0..m {
        let _ = writeln!(s, "{}", n + 2 + j);
    }
    let _ = writeln!(s, "DEPOT_SECTION");
    let _ = writeln!(s, "1");
    let _ = writeln!(s, "-1");
    let _ = writeln!(s, "EOF");
    s
}
