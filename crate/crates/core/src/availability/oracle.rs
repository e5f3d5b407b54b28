//! Exhaustive reference for the availability counts.
//!
//! Works on plain frequency values with all-pairs checks and enumerates
//! every subset (and, for pairs, every matching). Nothing here relies on the
//! spectrum layout, sortedness or the greedy argument used by
//! [`super::Availability`]. Pruning only cuts branches whose optimistic size
//! cannot beat the best found so far.

use thiserror::Error;

use crate::model::Spectrum;

use super::{SiteDomains, SiteState, Strategy};

/// Largest candidate set the oracle accepts.
pub const ORACLE_LIMIT: usize = 20;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("{candidates} candidate frequencies exceed the exhaustive limit of {ORACLE_LIMIT}")]
pub struct OracleError {
    pub candidates: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleValue {
    Async { tx: u32, rx: u32 },
    Sync { pairs: u32 },
}

struct Inputs {
    tx_cands: Vec<u32>,
    rx_cands: Vec<u32>,
    tt: u32,
    tr: u32,
    rr: u32,
    duplex: u32,
}

fn far(a: u32, b: u32, gap: u32) -> bool {
    a.abs_diff(b) >= gap
}

fn inputs(spectrum: &Spectrum, state: &SiteState, domains: SiteDomains) -> Result<Inputs, OracleError> {
    let assigned_tx: Vec<u32> = spectrum.to_vec(state.tx).iter().map(|f| f.0).collect();
    let assigned_rx: Vec<u32> = spectrum.to_vec(state.rx).iter().map(|f| f.0).collect();
    let g = state.gaps;
    let tx_dom: Vec<u32> = spectrum.to_vec(domains.tx).iter().map(|f| f.0).collect();
    let rx_dom: Vec<u32> = spectrum.to_vec(domains.rx).iter().map(|f| f.0).collect();
    let mut union: Vec<u32> = tx_dom.iter().chain(&rx_dom).copied().collect();
    union.sort_unstable();
    union.dedup();
    if union.len() > ORACLE_LIMIT {
        return Err(OracleError {
            candidates: union.len(),
        });
    }
    let tx_cands = tx_dom
        .into_iter()
        .filter(|&f| {
            assigned_tx.iter().all(|&a| far(f, a, g.tx_tx)) && assigned_rx.iter().all(|&a| far(f, a, g.tx_rx))
        })
        .collect();
    let rx_cands = rx_dom
        .into_iter()
        .filter(|&f| {
            assigned_tx.iter().all(|&a| far(f, a, g.tx_rx)) && assigned_rx.iter().all(|&a| far(f, a, g.rx_rx))
        })
        .collect();
    Ok(Inputs {
        tx_cands,
        rx_cands,
        tt: g.tx_tx,
        tr: g.tx_rx,
        rr: g.rx_rx,
        duplex: g.duplex,
    })
}

/// Size of the largest subset of `cands` pairwise at least `gap` apart.
fn largest_packing(cands: &[u32], gap: u32) -> u32 {
    fn go(cands: &[u32], k: usize, gap: u32, chosen: &mut Vec<u32>, best: &mut u32) {
        if chosen.len() + (cands.len() - k) <= *best as usize {
            return;
        }
        if k == cands.len() {
            *best = chosen.len() as u32;
            return;
        }
        let f = cands[k];
        if chosen.iter().all(|&c| far(c, f, gap)) {
            chosen.push(f);
            go(cands, k + 1, gap, chosen, best);
            chosen.pop();
        }
        go(cands, k + 1, gap, chosen, best);
    }
    let mut best = 0;
    go(cands, 0, gap, &mut Vec::new(), &mut best);
    best
}

/// Largest matching by trying every partner for every transmitter.
fn brute_matching(tx: &[u32], rx: &[u32], gap: u32) -> u32 {
    fn go(tx: &[u32], rx: &[u32], gap: u32, k: usize, used: &mut Vec<bool>) -> u32 {
        if k == tx.len() {
            return 0;
        }
        let mut best = go(tx, rx, gap, k + 1, used);
        for y in 0..rx.len() {
            if !used[y] && far(tx[k], rx[y], gap) {
                used[y] = true;
                best = best.max(1 + go(tx, rx, gap, k + 1, used));
                used[y] = false;
            }
        }
        best
    }
    go(tx, rx, gap, 0, &mut vec![false; rx.len()])
}

fn largest_pairing(inp: &Inputs) -> u32 {
    // every candidate with its possible roles
    let mut cands: Vec<(u32, bool, bool)> = Vec::new();
    for &f in inp.tx_cands.iter().chain(&inp.rx_cands) {
        if cands.iter().any(|c| c.0 == f) {
            continue;
        }
        cands.push((f, inp.tx_cands.contains(&f), inp.rx_cands.contains(&f)));
    }

    struct Ctx<'a> {
        inp: &'a Inputs,
        cands: Vec<(u32, bool, bool)>,
        tx: Vec<u32>,
        rx: Vec<u32>,
        best: u32,
    }
    fn go(c: &mut Ctx<'_>, k: usize) {
        let rest = c.cands.len() - k;
        if (c.tx.len() + rest).min(c.rx.len() + rest) <= c.best as usize {
            return;
        }
        if k == c.cands.len() {
            c.best = c.best.max(brute_matching(&c.tx, &c.rx, c.inp.duplex));
            return;
        }
        let (f, can_tx, can_rx) = c.cands[k];
        let inp = c.inp;
        if can_tx && c.tx.iter().all(|&x| far(x, f, inp.tt)) && c.rx.iter().all(|&y| far(y, f, inp.tr)) {
            c.tx.push(f);
            go(c, k + 1);
            c.tx.pop();
        }
        if can_rx && c.rx.iter().all(|&y| far(y, f, inp.rr)) && c.tx.iter().all(|&x| far(x, f, inp.tr)) {
            c.rx.push(f);
            go(c, k + 1);
            c.rx.pop();
        }
        go(c, k + 1);
    }
    let mut ctx = Ctx {
        inp,
        cands,
        tx: Vec::new(),
        rx: Vec::new(),
        best: 0,
    };
    go(&mut ctx, 0);
    ctx.best
}

pub fn oracle_disp(
    spectrum: &Spectrum,
    state: &SiteState,
    domains: impl Into<SiteDomains>,
    mode: Strategy,
) -> Result<OracleValue, OracleError> {
    let inp = inputs(spectrum, state, domains.into())?;
    Ok(match mode {
        Strategy::Async => OracleValue::Async {
            tx: largest_packing(&inp.tx_cands, inp.tt),
            rx: largest_packing(&inp.rx_cands, inp.rr),
        },
        Strategy::Sync => OracleValue::Sync {
            pairs: largest_pairing(&inp),
        },
    })
}
