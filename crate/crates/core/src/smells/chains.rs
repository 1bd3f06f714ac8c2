use std::cmp::Reverse;
use std::collections::HashMap;

use crate::formula::{resolve_references, Resolved};
use crate::grid::{CellAddr, Rect, SheetId, Workbook};
use crate::structure::{FormulaGroupId, StructureModel};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mark {
    Open,
    Done,
}

/// Successors of one formula cell: formula cells it reads, plus its lowest referenced address.
struct CellEdges {
    formulas: Vec<CellAddr>,
    first_ref: Option<CellAddr>,
}

/// Longest reference chain of every formula cell in a workbook.
#[derive(Debug, Clone, Default)]
pub struct CellChains {
    length: HashMap<CellAddr, u32>,
    next: HashMap<CellAddr, CellAddr>,
    /// A reference cycle was cut while computing lengths.
    pub cyclic: bool,
}

fn cell_edges(wb: &Workbook, addr: CellAddr, cache: &mut HashMap<(SheetId, Rect), Vec<CellAddr>>) -> CellEdges {
    let mut formulas = Vec::new();
    let mut first_ref: Option<CellAddr> = None;
    let Some(cell) = wb.cell(addr) else {
        return CellEdges { formulas, first_ref };
    };
    for (_, r) in resolve_references(cell, wb) {
        let Ok(r) = r else { continue };
        let lowest = CellAddr::new(r.sheet(), r.rect().top_left);
        first_ref = Some(first_ref.map_or(lowest, |f| f.min(lowest)));
        match r {
            Resolved::Cell(a) => {
                if wb.cell(a).is_some_and(|c| c.is_formula()) {
                    formulas.push(a);
                }
            }
            Resolved::Area { sheet, rect } => {
                let hits = cache.entry((sheet, rect)).or_insert_with(|| {
                    wb.sheet(sheet)
                        .cells_in(rect)
                        .filter(|c| c.is_formula())
                        .map(|c| c.addr())
                        .collect()
                });
                formulas.extend(hits.iter().copied());
            }
        }
    }
    formulas.sort();
    formulas.dedup();
    CellEdges { formulas, first_ref }
}

impl CellChains {
    pub fn compute(wb: &Workbook) -> Self {
        let mut edges: HashMap<CellAddr, CellEdges> = HashMap::new();
        let mut cache = HashMap::new();
        for ws in wb.sheets() {
            for c in ws.formula_cells() {
                edges.insert(c.addr(), cell_edges(wb, c.addr(), &mut cache));
            }
        }
        let mut out = CellChains::default();
        let mut mark: HashMap<CellAddr, Mark> = HashMap::new();
        let mut roots: Vec<CellAddr> = edges.keys().copied().collect();
        roots.sort();
        for root in roots {
            if mark.contains_key(&root) {
                continue;
            }
            // Frames: (cell, index of the next successor to visit).
            let mut stack = vec![(root, 0usize)];
            mark.insert(root, Mark::Open);
            while let Some(top) = stack.len().checked_sub(1) {
                let (cur, i) = stack[top];
                let e = &edges[&cur];
                if i < e.formulas.len() {
                    let succ = e.formulas[i];
                    stack[top].1 += 1;
                    match mark.get(&succ) {
                        None => {
                            mark.insert(succ, Mark::Open);
                            stack.push((succ, 0));
                        }
                        Some(Mark::Open) => out.cyclic = true,
                        Some(Mark::Done) => {}
                    }
                    continue;
                }
                stack.pop();
                mark.insert(cur, Mark::Done);
                let best = e
                    .formulas
                    .iter()
                    .filter(|s| mark.get(s) == Some(&Mark::Done) && **s != cur)
                    .map(|s| (out.length.get(s).copied().unwrap_or(0), *s))
                    .max_by_key(|&(len, addr)| (len, Reverse(addr)));
                let (len, next) = match (best, e.first_ref) {
                    (Some((l, a)), _) if l > 0 => (l + 1, a),
                    (_, Some(f)) => (1, f),
                    (_, None) => (0, cur),
                };
                out.length.insert(cur, len);
                if len > 0 {
                    out.next.insert(cur, next);
                }
            }
        }
        out
    }

    /// Zero for non-formula cells and formulas without references.
    pub fn length(&self, addr: CellAddr) -> u32 {
        self.length.get(&addr).copied().unwrap_or(0)
    }

    /// One longest chain starting at `addr` and ending at a cell without successors.
    pub fn witness(&self, addr: CellAddr) -> Vec<CellAddr> {
        let mut path = vec![addr];
        let mut cur = addr;
        while let Some(&n) = self.next.get(&cur) {
            if path.contains(&n) {
                break;
            }
            path.push(n);
            cur = n;
        }
        path
    }
}

/// Computes chains for the whole workbook; use [`CellChains`] when querying many cells.
pub fn baseline_chain_length(wb: &Workbook, addr: CellAddr) -> u32 {
    CellChains::compute(wb).length(addr)
}

/// Longest chain of every partitioned formula group, following referred groups across sheets.
#[derive(Debug, Clone, Default)]
pub struct GroupChains {
    length: Vec<u32>,
    next: Vec<Option<FormulaGroupId>>,
    pub cyclic: bool,
}

impl GroupChains {
    pub fn compute(model: &StructureModel) -> Self {
        let n = model.formula_groups.len();
        let mut out = GroupChains {
            length: vec![0; n],
            next: vec![None; n],
            cyclic: false,
        };
        let mut mark: Vec<Option<Mark>> = vec![None; n];
        for root in 0..n {
            if mark[root].is_some() {
                continue;
            }
            let mut stack = vec![(root, 0usize)];
            mark[root] = Some(Mark::Open);
            while let Some(top) = stack.len().checked_sub(1) {
                let (cur, i) = stack[top];
                let succ = model.referred_formula_groups(FormulaGroupId(cur));
                if i < succ.len() {
                    let s = succ[i].0;
                    stack[top].1 += 1;
                    match mark[s] {
                        None => {
                            mark[s] = Some(Mark::Open);
                            stack.push((s, 0));
                        }
                        Some(Mark::Open) => out.cyclic = true,
                        Some(Mark::Done) => {}
                    }
                    continue;
                }
                stack.pop();
                mark[cur] = Some(Mark::Done);
                let best = succ
                    .iter()
                    .filter(|s| mark[s.0] == Some(Mark::Done))
                    .map(|s| (out.length[s.0], *s))
                    .max_by_key(|&(len, id)| (len, Reverse(id)));
                out.length[cur] = match best {
                    Some((len, id)) => {
                        out.next[cur] = Some(id);
                        len + 1
                    }
                    None if !model.reference_groups_of(FormulaGroupId(cur)).is_empty() => 1,
                    None => 0,
                };
            }
        }
        out
    }

    pub fn length(&self, g: FormulaGroupId) -> u32 {
        self.length[g.0]
    }

    /// Group ids along one longest chain, starting at `g`.
    pub fn witness(&self, g: FormulaGroupId) -> Vec<FormulaGroupId> {
        let mut path = vec![g];
        let mut cur = g;
        while let Some(n) = self.next[cur.0] {
            if path.contains(&n) {
                break;
            }
            path.push(n);
            cur = n;
        }
        path
    }
}

pub fn group_longest_chain(model: &StructureModel, g: FormulaGroupId) -> u32 {
    GroupChains::compute(model).length(g)
}
