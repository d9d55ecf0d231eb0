//! On-disk formats: the line-oriented series text format, its JSON mirror,
//! and the Norton-series document.
//!
//! Series text format, one term per line after the header:
//!
//! ```text
//! denom=<N> trunc=<r_num>/<r_den>
//! <exp_num>/<exp_den> <coeff>
//! ```
//!
//! where `<coeff>` is a rational `p/q` or a cyclotomic vector
//! `[p1/q1,...;order=L]`. The JSON documents mirror the same fields.

use crate::error::{Error, Result};
use crate::exact_arith::{format_rat, parse_rat, CycloElem, Rat};
use crate::finite_groups::{pair_classes, Group};
use crate::norton::{NortonSeries, TwistEntry};
use crate::qseries::PuiseuxSeries;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

// ---------------------------------------------------------------------------
// Series text format
// ---------------------------------------------------------------------------

pub fn series_to_text(s: &PuiseuxSeries) -> String {
    let mut out = format!("denom={} trunc={}\n", s.denom(), format_rat(s.trunc()));
    for (e, c) in s.terms() {
        out.push_str(&format!("{} {}\n", format_rat(e), coeff_to_text(c)));
    }
    out
}

fn coeff_to_text(c: &CycloElem) -> String {
    match c.try_rational() {
        Some(r) => format_rat(&r),
        None => {
            let coords: Vec<String> = c.coords().iter().map(format_rat).collect();
            format!("[{};order={}]", coords.join(","), c.order())
        }
    }
}

fn coeff_from_text(s: &str) -> Result<CycloElem> {
    let s = s.trim();
    if let Some(body) = s.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
        let (coords_part, order_part) = body
            .rsplit_once(';')
            .ok_or_else(|| Error::BadInput(format!("bad cyclotomic vector `{s}`")))?;
        let order: u64 = order_part
            .trim()
            .strip_prefix("order=")
            .ok_or_else(|| Error::BadInput(format!("missing order in `{s}`")))?
            .parse()
            .map_err(|_| Error::BadInput(format!("bad order in `{s}`")))?;
        let coords = coords_part
            .split(',')
            .map(parse_rat)
            .collect::<Result<Vec<_>>>()?;
        if coords.len() as u64 != crate::exact_arith::euler_phi(order) {
            return Err(Error::BadInput(format!(
                "expected {} coordinates for order {order}",
                crate::exact_arith::euler_phi(order)
            )));
        }
        Ok(CycloElem::from_poly(order, coords))
    } else {
        Ok(CycloElem::from_rat(parse_rat(s)?))
    }
}

pub fn series_from_text(text: &str) -> Result<PuiseuxSeries> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::BadInput("empty series file".into()))?;
    let mut denom: Option<u64> = None;
    let mut trunc: Option<Rat> = None;
    for field in header.split_whitespace() {
        if let Some(v) = field.strip_prefix("denom=") {
            denom = Some(
                v.parse()
                    .map_err(|_| Error::BadInput(format!("bad denom `{v}`")))?,
            );
        } else if let Some(v) = field.strip_prefix("trunc=") {
            trunc = Some(parse_rat(v)?);
        } else {
            return Err(Error::BadInput(format!("unknown header field `{field}`")));
        }
    }
    let denom = denom.ok_or_else(|| Error::BadInput("missing denom=".into()))?;
    let trunc = trunc.ok_or_else(|| Error::BadInput("missing trunc=".into()))?;
    let mut terms = Vec::new();
    for (i, line) in lines.enumerate() {
        let (e, c) = line
            .trim()
            .split_once(char::is_whitespace)
            .ok_or_else(|| Error::BadInput(format!("line {}: expected `exp coeff`", i + 2)))?;
        let exp = parse_rat(e)?;
        let coeff = coeff_from_text(c)?;
        let ed = exp
            .denom()
            .to_u64()
            .ok_or_else(|| Error::BadInput("exponent denominator overflow".into()))?;
        if denom % ed != 0 {
            return Err(Error::BadInput(format!(
                "line {}: exponent {} not in (1/{})Z",
                i + 2,
                format_rat(&exp),
                denom
            )));
        }
        terms.push((exp, coeff));
    }
    PuiseuxSeries::from_terms(terms, trunc)
}

// ---------------------------------------------------------------------------
// JSON mirrors
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffDoc {
    Rational(String),
    Cyclotomic { coords: Vec<String>, order: u64 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermDoc {
    pub exp: String,
    pub coeff: CoeffDoc,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeriesDoc {
    pub denom: u64,
    pub trunc: String,
    pub terms: Vec<TermDoc>,
}

impl SeriesDoc {
    pub fn from_series(s: &PuiseuxSeries) -> SeriesDoc {
        SeriesDoc {
            denom: s.denom(),
            trunc: format_rat(s.trunc()),
            terms: s
                .terms()
                .map(|(e, c)| TermDoc {
                    exp: format_rat(e),
                    coeff: match c.try_rational() {
                        Some(r) => CoeffDoc::Rational(format_rat(&r)),
                        None => CoeffDoc::Cyclotomic {
                            coords: c.coords().iter().map(format_rat).collect(),
                            order: c.order(),
                        },
                    },
                })
                .collect(),
        }
    }

    pub fn to_series(&self) -> Result<PuiseuxSeries> {
        let trunc = parse_rat(&self.trunc)?;
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let exp = parse_rat(&t.exp)?;
                let coeff = match &t.coeff {
                    CoeffDoc::Rational(r) => CycloElem::from_rat(parse_rat(r)?),
                    CoeffDoc::Cyclotomic { coords, order } => {
                        let cs = coords.iter().map(|c| parse_rat(c)).collect::<Result<Vec<_>>>()?;
                        if cs.len() as u64 != crate::exact_arith::euler_phi(*order) {
                            return Err(Error::BadInput(
                                "coordinate count does not match order".into(),
                            ));
                        }
                        CycloElem::from_poly(*order, cs)
                    }
                };
                Ok((exp, coeff))
            })
            .collect::<Result<Vec<_>>>()?;
        PuiseuxSeries::from_terms(terms, trunc)
    }
}

/// Parses either the text format or the JSON mirror, sniffing on `{`.
pub fn series_from_str(content: &str) -> Result<PuiseuxSeries> {
    if content.trim_start().starts_with('{') {
        let doc: SeriesDoc = serde_json::from_str(content)
            .map_err(|e| Error::BadInput(format!("bad series json: {e}")))?;
        doc.to_series()
    } else {
        series_from_text(content)
    }
}

// ---------------------------------------------------------------------------
// Group specs and Norton documents
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpecDoc {
    Named(String),
    Table {
        labels: Vec<String>,
        table: Vec<Vec<usize>>,
    },
}

impl GroupSpecDoc {
    pub fn to_group(&self) -> Result<Group> {
        match self {
            GroupSpecDoc::Named(s) => Group::parse_spec(s),
            GroupSpecDoc::Table { labels, table } => {
                Group::from_cayley_table(labels.clone(), table.clone())
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NortonClassDoc {
    /// Representative pair `[g, h]` as element indices.
    pub rep: [usize; 2],
    pub series: SeriesDoc,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TwistDoc {
    pub g: usize,
    pub s: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NortonDoc {
    pub group: GroupSpecDoc,
    pub classes: Vec<NortonClassDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub twist: Option<Vec<TwistDoc>>,
}

impl NortonDoc {
    pub fn from_norton(f: &NortonSeries) -> NortonDoc {
        NortonDoc {
            group: GroupSpecDoc::Named(f.group().label().to_string()),
            classes: f
                .classes()
                .iter()
                .zip(f.values())
                .map(|(c, v)| NortonClassDoc {
                    rep: [c.representative.g, c.representative.h],
                    series: SeriesDoc::from_series(v),
                })
                .collect(),
            twist: f.twist().map(|ts| {
                ts.iter()
                    .map(|t| TwistDoc { g: t.g, s: t.s })
                    .collect()
            }),
        }
    }

    pub fn to_norton(&self) -> Result<NortonSeries> {
        let group = self.group.to_group()?;
        let classes = pair_classes(&group);
        let mut values: Vec<Option<PuiseuxSeries>> = vec![None; classes.len()];
        for entry in &self.classes {
            let [g, h] = entry.rep;
            if g >= group.order() || h >= group.order() || !group.commute(g, h) {
                return Err(Error::BadInput(format!("bad representative [{g}, {h}]")));
            }
            let key = crate::finite_groups::canonical_pair(&group, g, h);
            let idx = classes
                .iter()
                .position(|c| (c.representative.g, c.representative.h) == key)
                .expect("canonical pair is a class representative");
            if values[idx].is_some() {
                return Err(Error::BadInput(format!(
                    "duplicate value for the class of [{g}, {h}]"
                )));
            }
            values[idx] = Some(entry.series.to_series()?);
        }
        let missing: Vec<String> = classes
            .iter()
            .zip(values.iter())
            .filter(|(_, v)| v.is_none())
            .map(|(c, _)| format!("[{}, {}]", c.representative.g, c.representative.h))
            .collect();
        if !missing.is_empty() {
            return Err(Error::BadInput(format!(
                "missing class values: {}",
                missing.join(", ")
            )));
        }
        let norton = NortonSeries::from_class_values(
            group,
            values.into_iter().map(Option::unwrap).collect(),
        )?;
        Ok(match &self.twist {
            Some(ts) => norton.with_twist(
                ts.iter()
                    .map(|t| TwistEntry { g: t.g, s: t.s })
                    .collect(),
            ),
            None => norton,
        })
    }
}

pub fn norton_to_json(f: &NortonSeries) -> String {
    serde_json::to_string_pretty(&NortonDoc::from_norton(f)).expect("serializable")
}

pub fn norton_from_str(content: &str) -> Result<NortonSeries> {
    let doc: NortonDoc = serde_json::from_str(content)
        .map_err(|e| Error::BadInput(format!("bad norton json: {e}")))?;
    doc.to_norton()
}
