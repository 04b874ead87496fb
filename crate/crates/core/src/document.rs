//! JSON documents for systems and cochains. Piece indices are 1-based in
//! documents; rationals and decimals are strings.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::adjunction::{AdjunctionSystem, CoreAssignment, GluingMap};
use crate::cochain::{Cochain, GlobalCochain};
use crate::complex::{Cell, CellComplex, CellSet, Orientation, Sign};
use crate::rational::{format_q, parse_q, Q};
use crate::{Error, Result};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellDoc {
    pub id: String,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub faces: BTreeMap<String, Sign>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceDoc {
    pub name: String,
    pub cells: Vec<CellDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionDoc {
    pub i: usize,
    pub j: usize,
    pub cells: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub i: usize,
    pub j: usize,
    pub pairs: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub closure_pairs: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrientationDoc {
    pub piece: usize,
    pub signs: BTreeMap<String, Sign>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoreDoc {
    pub tuple: Vec<usize>,
    pub cells: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LengthsDoc {
    pub piece: usize,
    pub lengths: BTreeMap<String, String>,
}

/// On-disk form of an adjunction system. A region without a matching map
/// is glued by equal ids; a map without a matching region uses the domain
/// of its pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDocument {
    pub schema_version: String,
    pub pieces: Vec<PieceDoc>,
    #[serde(default)]
    pub regions: Vec<RegionDoc>,
    #[serde(default)]
    pub maps: Vec<MapDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientations: Option<Vec<OrientationDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cores: Option<Vec<CoreDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_lengths: Option<Vec<LengthsDoc>>,
}

fn parse_err(at: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        at: at.into(),
        message: message.into(),
    }
}

fn json_err(e: serde_json::Error) -> Error {
    parse_err(format!("line {} column {}", e.line(), e.column()), e.to_string())
}

fn piece_index(n: usize, k: usize, at: &str) -> Result<usize> {
    if k == 0 || k > n {
        return Err(parse_err(at, format!("piece index {k} outside 1..={n}")));
    }
    Ok(k - 1)
}

fn lookup(p: &CellComplex, id: &str, at: &str) -> Result<usize> {
    p.lookup(id).ok_or_else(|| parse_err(at, format!("unknown cell `{id}`")))
}

impl SystemDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SystemDocument = serde_json::from_str(text).map_err(json_err)?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(parse_err(
                "schema_version",
                format!("unsupported schema version `{}`", doc.schema_version),
            ));
        }
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    /// Builds the system without validating it.
    pub fn to_system(&self) -> Result<AdjunctionSystem> {
        let pieces: Vec<CellComplex> = self
            .pieces
            .iter()
            .map(|p| {
                CellComplex::new(
                    p.cells
                        .iter()
                        .map(|c| Cell::with_faces(c.id.clone(), c.dim, c.faces.iter().map(|(f, s)| (f.clone(), *s))))
                        .collect(),
                )
            })
            .collect();
        let n = pieces.len();
        let mut regions: BTreeMap<(usize, usize), &RegionDoc> = BTreeMap::new();
        for (k, r) in self.regions.iter().enumerate() {
            let at = format!("regions[{k}]");
            let key = (piece_index(n, r.i, &at)?, piece_index(n, r.j, &at)?);
            if regions.insert(key, r).is_some() {
                return Err(parse_err(at, "duplicate region"));
            }
        }
        let mut gluings = Vec::new();
        let mut mapped = BTreeMap::new();
        for (k, m) in self.maps.iter().enumerate() {
            let at = format!("maps[{k}]");
            let (i, j) = (piece_index(n, m.i, &at)?, piece_index(n, m.j, &at)?);
            for (which, pairs, src, dst) in [("pairs", &m.pairs, i, j), ("closure_pairs", &m.closure_pairs, i, j)] {
                for (l, (a, b)) in pairs.iter().enumerate() {
                    let at = format!("{at}.{which}[{l}]");
                    lookup(&pieces[src], a, &at)?;
                    lookup(&pieces[dst], b, &at)?;
                }
            }
            let region = regions.get(&(i, j)).map(|r| r.cells.as_slice());
            if let Some(cells) = region {
                for id in cells {
                    lookup(&pieces[i], id, &format!("{at}.region"))?;
                }
            }
            let g = GluingMap::from_ids((&pieces[i], &pieces[j]), (i, j), region, &m.pairs, &m.closure_pairs)?;
            if mapped.insert((i, j), ()).is_some() {
                return Err(parse_err(at, "duplicate map"));
            }
            gluings.push(g);
        }
        for (&(i, j), r) in &regions {
            if mapped.contains_key(&(i, j)) || (mapped.contains_key(&(j, i)) && i != j) {
                continue;
            }
            let at = format!("regions[{}→{}]", i + 1, j + 1);
            for id in &r.cells {
                lookup(&pieces[i], id, &at)?;
            }
            gluings.push(GluingMap::by_id((&pieces[i], &pieces[j]), (i, j), &r.cells)?);
        }
        let mut system = AdjunctionSystem::new(self.pieces.iter().map(|p| p.name.clone()).collect(), pieces, gluings);

        if let Some(docs) = &self.orientations {
            let mut o: Vec<Orientation> = vec![Orientation::default(); n];
            for (k, d) in docs.iter().enumerate() {
                let at = format!("orientations[{k}]");
                let i = piece_index(n, d.piece, &at)?;
                for (id, s) in &d.signs {
                    o[i].0.insert(lookup(system.piece(i), id, &at)?, *s);
                }
            }
            system = system.with_orientations(o);
        }
        if let Some(docs) = &self.cores {
            let mut cores = CoreAssignment::new();
            for (k, d) in docs.iter().enumerate() {
                let at = format!("cores[{k}]");
                let tuple = d
                    .tuple
                    .iter()
                    .map(|&t| piece_index(n, t, &at))
                    .collect::<Result<Vec<_>>>()?;
                if tuple.is_empty() || tuple.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(parse_err(at, "core tuple must be strictly ascending"));
                }
                let set = d
                    .cells
                    .iter()
                    .map(|id| lookup(system.piece(tuple[0]), id, &at))
                    .collect::<Result<CellSet>>()?;
                cores.insert(tuple, set);
            }
            system = system.with_cores(cores);
        }
        if let Some(docs) = &self.edge_lengths {
            let mut lengths = vec![BTreeMap::new(); n];
            for (k, d) in docs.iter().enumerate() {
                let at = format!("edge_lengths[{k}]");
                let i = piece_index(n, d.piece, &at)?;
                for (id, v) in &d.lengths {
                    let x: f64 = v
                        .parse()
                        .map_err(|_| parse_err(format!("{at}.lengths.{id}"), format!("`{v}` is not a decimal")))?;
                    lengths[i].insert(lookup(system.piece(i), id, &at)?, x);
                }
            }
            system = system.with_edge_lengths(lengths);
        }
        Ok(system)
    }

    pub fn from_system(system: &AdjunctionSystem) -> Self {
        let pieces = system
            .names()
            .iter()
            .zip(system.pieces())
            .map(|(name, p)| PieceDoc {
                name: name.clone(),
                cells: p
                    .cells()
                    .iter()
                    .map(|c| CellDoc {
                        id: c.id.clone(),
                        dim: c.dim,
                        faces: c.faces.iter().cloned().collect(),
                    })
                    .collect(),
            })
            .collect();
        let mut regions = Vec::new();
        let mut maps = Vec::new();
        let write = |g: &GluingMap, regions: &mut Vec<RegionDoc>, maps: &mut Vec<MapDoc>| {
            let (src, dst) = (system.piece(g.source), system.piece(g.target));
            let pair = |(a, b): (&usize, &usize)| (src.id(*a).to_string(), dst.id(*b).to_string());
            regions.push(RegionDoc {
                i: g.source + 1,
                j: g.target + 1,
                cells: src.ids(&g.source_region),
            });
            maps.push(MapDoc {
                i: g.source + 1,
                j: g.target + 1,
                pairs: g.cell_bijection.iter().map(pair).collect(),
                closure_pairs: g
                    .closure_extension
                    .iter()
                    .filter(|(a, _)| !g.cell_bijection.contains_key(a))
                    .map(pair)
                    .collect(),
            });
        };
        for g in system.self_maps() {
            write(g, &mut regions, &mut maps);
        }
        for g in system.gluings() {
            let reverse_is_inverse = system.gluing(g.target, g.source).is_some_and(|r| *r == g.inverse());
            if g.source < g.target || !reverse_is_inverse {
                write(g, &mut regions, &mut maps);
            }
        }
        let orientations = system.orientations().map(|os| {
            os.iter()
                .enumerate()
                .map(|(i, o)| OrientationDoc {
                    piece: i + 1,
                    signs: o.0.iter().map(|(&c, &s)| (system.piece(i).id(c).to_string(), s)).collect(),
                })
                .collect()
        });
        let cores = (!system.cores().is_empty()).then(|| {
            system
                .cores()
                .iter()
                .map(|(t, set)| CoreDoc {
                    tuple: t.iter().map(|k| k + 1).collect(),
                    cells: system.piece(t[0]).ids(set),
                })
                .collect()
        });
        let edge_lengths = system.edge_lengths().map(|ls| {
            ls.iter()
                .enumerate()
                .map(|(i, m)| LengthsDoc {
                    piece: i + 1,
                    lengths: m.iter().map(|(&e, &x)| (system.piece(i).id(e).to_string(), format!("{x:?}"))).collect(),
                })
                .collect()
        });
        SystemDocument {
            schema_version: SCHEMA_VERSION.to_string(),
            pieces,
            regions,
            maps,
            orientations,
            cores,
            edge_lengths,
        }
    }
}

pub fn parse_system(text: &str) -> Result<AdjunctionSystem> {
    SystemDocument::from_json(text)?.to_system()
}

pub fn system_to_json(system: &AdjunctionSystem) -> String {
    SystemDocument::from_system(system).to_json()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentDoc {
    pub piece: usize,
    pub values: BTreeMap<String, String>,
}

/// Per-piece cochain values; pieces not listed are zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CochainDocument {
    pub degree: usize,
    pub components: Vec<ComponentDoc>,
}

impl CochainDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(json_err)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    /// Whole-piece components, not yet checked for compatibility.
    pub fn to_components(&self, system: &AdjunctionSystem) -> Result<Vec<Cochain>> {
        let n = system.len();
        let mut values: Vec<BTreeMap<usize, Q>> = vec![BTreeMap::new(); n];
        for (k, c) in self.components.iter().enumerate() {
            let at = format!("components[{k}]");
            let i = piece_index(n, c.piece, &at)?;
            for (id, v) in &c.values {
                let at = format!("{at}.values.{id}");
                let cell = lookup(system.piece(i), id, &at)?;
                let x = parse_q(v).ok_or_else(|| parse_err(&at, format!("`{v}` is not a rational")))?;
                values[i].insert(cell, x);
            }
        }
        values
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                let p = system.piece(i);
                Cochain::new(p, p.all(), self.degree, v)
            })
            .collect()
    }

    pub fn from_global(system: &AdjunctionSystem, w: &GlobalCochain) -> Self {
        CochainDocument {
            degree: w.degree,
            components: w
                .components
                .iter()
                .enumerate()
                .map(|(i, c)| ComponentDoc {
                    piece: i + 1,
                    values: c
                        .values
                        .iter()
                        .map(|(&k, v)| (system.piece(i).id(k).to_string(), format_q(v)))
                        .collect(),
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::assemble_global;
    use crate::fixtures;
    use crate::rational::q;

    #[test]
    fn round_trip_keeps_structure() {
        for (name, build) in fixtures::catalog() {
            let s = build();
            let text = system_to_json(&s);
            let back = parse_system(&text).unwrap();
            assert_eq!(back.glued_cell_classes().labelled(&back), s.glued_cell_classes().labelled(&s), "{name}");
            assert_eq!(back.validate().issues, s.validate().issues, "{name}");
            assert_eq!(system_to_json(&back), text, "{name}");
        }
    }

    #[test]
    fn errors_name_their_location() {
        let err = parse_system("{\"schema_version\": \"1\",\n \"pieces\": 3}").unwrap_err();
        assert!(matches!(err, Error::Parse { ref at, .. } if at.starts_with("line 2")), "{err}");
        let err = parse_system(r#"{"schema_version": "2", "pieces": []}"#).unwrap_err();
        assert!(err.to_string().contains("schema_version"));
        let doc = r#"{"schema_version": "1",
            "pieces": [{"name": "A", "cells": [{"id": "v", "dim": 0}]}],
            "regions": [{"i": 1, "j": 2, "cells": ["v"]}]}"#;
        assert!(parse_system(doc).unwrap_err().to_string().contains("regions[0]"));
        let doc = r#"{"schema_version": "1",
            "pieces": [{"name": "A", "cells": [{"id": "v", "dim": 0}]},
                       {"name": "B", "cells": [{"id": "v", "dim": 0}]}],
            "maps": [{"i": 1, "j": 2, "pairs": [["v", "w"]]}]}"#;
        assert!(parse_system(doc).unwrap_err().to_string().contains("maps[0].pairs[0]"));
    }

    #[test]
    fn region_without_map_glues_by_id() {
        let doc = r#"{"schema_version": "1",
            "pieces": [{"name": "A", "cells": [{"id": "v", "dim": 0}, {"id": "w", "dim": 0}]},
                       {"name": "B", "cells": [{"id": "v", "dim": 0}]}],
            "regions": [{"i": 1, "j": 2, "cells": ["v"]}]}"#;
        let s = parse_system(doc).unwrap();
        assert!(s.validate().is_valid());
        assert_eq!(s.glued_cell_classes().len(), 2);
    }

    #[test]
    fn cochain_round_trip() {
        let s = fixtures::line_two_origins();
        let w = GlobalCochain::from_closure_classes(&s, 0, |k| q(k as i64) / q(3));
        let text = CochainDocument::from_global(&s, &w).to_json();
        let comps = CochainDocument::from_json(&text).unwrap().to_components(&s).unwrap();
        assert_eq!(assemble_global(&s, comps).unwrap(), w);
        let bad = r#"{"degree": 0, "components": [{"piece": 1, "values": {"v0": "1/0"}}]}"#;
        let err = CochainDocument::from_json(bad).unwrap().to_components(&s).unwrap_err();
        assert!(err.to_string().contains("values.v0"));
    }
}
