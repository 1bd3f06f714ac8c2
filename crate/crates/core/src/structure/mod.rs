//! Structure inference: cell groups, computation blocks and header layers.

mod blocks;
mod groups;
mod headers;
pub(crate) mod index;
mod references;

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::Serialize;

use crate::formula::{deref_area, deref_cell, RefSlot};
use crate::grid::{CellAddr, CellType, Coordinate, Rect, SheetId, Workbook, Worksheet};

pub use blocks::block_neighbor;
pub use groups::{formula_groups, partition_formula_group, type_based_groups};
pub use references::merge_reference_groups;

use index::CellIndex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Row,
    Column,
    Singleton,
    /// Only for unmerged area reference groups spanning several rows and columns.
    Rectangle,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TypeBasedGroup {
    pub sheet: SheetId,
    pub cells: BTreeSet<Coordinate>,
    pub group_type: CellType,
    pub formula: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartitionedFormulaGroup {
    pub sheet: SheetId,
    pub cells: Vec<Coordinate>,
    pub orientation: Orientation,
    pub formula: String,
}

impl PartitionedFormulaGroup {
    pub fn rect(&self) -> Rect {
        Rect::new(self.cells[0], *self.cells.last().expect("non-empty"))
    }
}

/// Index into [`StructureModel::formula_groups`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct FormulaGroupId(pub usize);

/// Index into [`StructureModel::reference_groups`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct ReferenceGroupId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Provenance {
    pub group: FormulaGroupId,
    pub slot: RefSlot,
}

/// Cells referred to by a partitioned formula group; always a rectangle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReferenceBasedGroup {
    pub sheet: SheetId,
    pub rect: Rect,
    pub orientation: Orientation,
    pub provenance: Vec<Provenance>,
}

impl ReferenceBasedGroup {
    pub fn cells(&self) -> impl Iterator<Item = Coordinate> {
        self.rect.cells()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", content = "id", rename_all = "lowercase")]
pub enum GroupRef {
    Formula(FormulaGroupId),
    Reference(ReferenceGroupId),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Block {
    pub sheet: SheetId,
    pub rect: Rect,
    pub groups: Vec<GroupRef>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LayerOrientation {
    /// A row above the block labelling its columns.
    ColumnLayer,
    /// A column left of the block labelling its rows.
    RowLayer,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HeaderLayer {
    /// Index into the sheet's blocks.
    pub block: usize,
    pub orientation: LayerOrientation,
    pub level: u32,
    pub span: Rect,
    pub meta_header: Option<Coordinate>,
}

impl HeaderLayer {
    /// Every position of the layer, empty ones included.
    pub fn cells(&self) -> impl Iterator<Item = Coordinate> {
        self.span.cells()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MetaHeader {
    pub cell: Coordinate,
    /// Index into the sheet's layers.
    pub layer: usize,
}

/// A reference that could not be dereferenced at one origin cell of a group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReferenceIssue {
    pub group: FormulaGroupId,
    pub slot: RefSlot,
    pub origin: CellAddr,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SheetStructure {
    pub sheet: SheetId,
    pub name: String,
    pub type_groups: Vec<TypeBasedGroup>,
    pub formula_groups: Vec<FormulaGroupId>,
    pub reference_groups: Vec<ReferenceGroupId>,
    pub non_blockables: BTreeSet<Coordinate>,
    pub blocks: Vec<Block>,
    pub layers: Vec<HeaderLayer>,
    pub meta_headers: Vec<MetaHeader>,
}

impl SheetStructure {
    pub fn layers_of(&self, block: usize) -> impl Iterator<Item = &HeaderLayer> + '_ {
        self.layers.iter().filter(move |l| l.block == block)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureModel {
    pub sheets: Vec<SheetStructure>,
    /// Partitioned formula groups of the whole workbook, sheet by sheet.
    pub formula_groups: Vec<PartitionedFormulaGroup>,
    /// Merged reference groups, sheet by sheet.
    pub reference_groups: Vec<ReferenceBasedGroup>,
    /// Unmerged reference groups of each formula group.
    pub group_references: Vec<Vec<ReferenceBasedGroup>>,
    /// Other formula groups each formula group refers to.
    pub referred: Vec<Vec<FormulaGroupId>>,
    pub issues: Vec<ReferenceIssue>,
    #[serde(skip)]
    group_of_cell: HashMap<CellAddr, FormulaGroupId>,
}

impl StructureModel {
    pub fn build(wb: &Workbook) -> Self {
        let mut sheets = Vec::new();
        let mut formula_groups = Vec::new();
        for ws in wb.sheets() {
            let type_groups = type_based_groups(ws);
            let mut ids = Vec::new();
            let mut parts: Vec<PartitionedFormulaGroup> = type_groups
                .iter()
                .filter(|g| g.group_type == CellType::Formula)
                .flat_map(partition_formula_group)
                .collect();
            parts.sort_by_key(|p| p.cells[0]);
            for p in parts {
                ids.push(FormulaGroupId(formula_groups.len()));
                formula_groups.push(p);
            }
            sheets.push(SheetStructure {
                sheet: ws.id(),
                name: ws.name().to_string(),
                type_groups,
                formula_groups: ids,
                reference_groups: Vec::new(),
                non_blockables: BTreeSet::new(),
                blocks: Vec::new(),
                layers: Vec::new(),
                meta_headers: Vec::new(),
            });
        }

        let mut group_of_cell = HashMap::new();
        for (i, g) in formula_groups.iter().enumerate() {
            for &c in &g.cells {
                group_of_cell.insert(CellAddr::new(g.sheet, c), FormulaGroupId(i));
            }
        }

        let mut issues = Vec::new();
        let group_references: Vec<Vec<ReferenceBasedGroup>> = formula_groups
            .iter()
            .enumerate()
            .map(|(i, g)| references::build_reference_groups(FormulaGroupId(i), g, wb, &mut issues))
            .collect();

        let referred = formula_groups
            .iter()
            .enumerate()
            .map(|(i, g)| referred_groups(FormulaGroupId(i), g, wb, &group_of_cell))
            .collect();

        let mut per_sheet: Vec<Vec<ReferenceBasedGroup>> = vec![Vec::new(); sheets.len()];
        for g in group_references.iter().flatten() {
            per_sheet[g.sheet.0].push(g.clone());
        }
        let mut reference_groups = Vec::new();
        for (s, groups) in per_sheet.into_iter().enumerate() {
            for g in merge_reference_groups(groups) {
                sheets[s]
                    .reference_groups
                    .push(ReferenceGroupId(reference_groups.len()));
                reference_groups.push(g);
            }
        }

        let mut model = StructureModel {
            sheets,
            formula_groups,
            reference_groups,
            group_references,
            referred,
            issues,
            group_of_cell,
        };
        for ws in wb.sheets() {
            model.build_sheet(ws);
        }
        model
    }

    fn build_sheet(&mut self, ws: &Worksheet) {
        let s = ws.id().0;
        let mut grouped: HashSet<Coordinate> = HashSet::new();
        let mut members = Vec::new();
        for &id in &self.sheets[s].formula_groups {
            let g = &self.formula_groups[id.0];
            grouped.extend(g.cells.iter().copied());
            members.push(blocks::Member {
                id: GroupRef::Formula(id),
                rect: g.rect(),
            });
        }
        for &id in &self.sheets[s].reference_groups {
            let g = &self.reference_groups[id.0];
            grouped.extend(g.cells());
            members.push(blocks::Member {
                id: GroupRef::Reference(id),
                rect: g.rect,
            });
        }
        let non_blockables: BTreeSet<Coordinate> =
            ws.cells().map(|c| c.coord).filter(|c| !grouped.contains(c)).collect();
        let nb = CellIndex::new(&non_blockables);
        let blocks = blocks::build_blocks(ws.id(), members, &nb);
        let mut layers = headers::build_layers(&blocks, &nb);
        let occupied = CellIndex::new(ws.cells().map(|c| &c.coord));
        let meta_headers = headers::assign_meta_headers(&mut layers, &non_blockables, &occupied);
        let sheet = &mut self.sheets[s];
        sheet.non_blockables = non_blockables;
        sheet.blocks = blocks;
        sheet.layers = layers;
        sheet.meta_headers = meta_headers;
    }

    pub fn sheet(&self, id: SheetId) -> &SheetStructure {
        &self.sheets[id.0]
    }

    pub fn formula_group(&self, id: FormulaGroupId) -> &PartitionedFormulaGroup {
        &self.formula_groups[id.0]
    }

    pub fn reference_group(&self, id: ReferenceGroupId) -> &ReferenceBasedGroup {
        &self.reference_groups[id.0]
    }

    /// The partitioned formula group containing a formula cell.
    pub fn group_of(&self, addr: CellAddr) -> Option<FormulaGroupId> {
        self.group_of_cell.get(&addr).copied()
    }

    pub fn reference_groups_of(&self, g: FormulaGroupId) -> &[ReferenceBasedGroup] {
        &self.group_references[g.0]
    }

    pub fn referred_formula_groups(&self, g: FormulaGroupId) -> &[FormulaGroupId] {
        &self.referred[g.0]
    }

    pub fn merged_reference_groups(&self, sheet: SheetId) -> impl Iterator<Item = &ReferenceBasedGroup> + '_ {
        self.sheets[sheet.0]
            .reference_groups
            .iter()
            .map(|id| &self.reference_groups[id.0])
    }

    pub fn sheet_formula_groups(
        &self,
        sheet: SheetId,
    ) -> impl Iterator<Item = (FormulaGroupId, &PartitionedFormulaGroup)> + '_ {
        self.sheets[sheet.0]
            .formula_groups
            .iter()
            .map(|&id| (id, &self.formula_groups[id.0]))
    }

    pub fn non_blockables(&self, sheet: SheetId) -> &BTreeSet<Coordinate> {
        &self.sheets[sheet.0].non_blockables
    }

    /// True iff the area spanned by `cells` holds no non-blockable cell; false for an empty set.
    pub fn is_block(&self, sheet: SheetId, cells: &BTreeSet<Coordinate>) -> bool {
        match Rect::bounding(cells) {
            Some(r) => {
                let nb = self.non_blockables(sheet);
                // Non-blockables are few compared with large areas, so test them directly.
                !nb.iter().any(|c| r.contains(*c))
            }
            None => false,
        }
    }

    pub fn blocks(&self, sheet: SheetId) -> &[Block] {
        &self.sheets[sheet.0].blocks
    }

    /// Union of the member group cells of a block.
    pub fn block_cells(&self, b: &Block) -> BTreeSet<Coordinate> {
        let mut out = BTreeSet::new();
        for g in &b.groups {
            match g {
                GroupRef::Formula(id) => out.extend(self.formula_groups[id.0].cells.iter().copied()),
                GroupRef::Reference(id) => out.extend(self.reference_groups[id.0].cells()),
            }
        }
        out
    }

    pub fn group_rect(&self, g: GroupRef) -> Rect {
        match g {
            GroupRef::Formula(id) => self.formula_groups[id.0].rect(),
            GroupRef::Reference(id) => self.reference_groups[id.0].rect,
        }
    }
}

fn referred_groups(
    id: FormulaGroupId,
    g: &PartitionedFormulaGroup,
    wb: &Workbook,
    group_of_cell: &HashMap<CellAddr, FormulaGroupId>,
) -> Vec<FormulaGroupId> {
    let ws = wb.sheet(g.sheet);
    let mut out = BTreeSet::new();
    let mut seen_areas = HashSet::new();
    for &c in &g.cells {
        let Some(cell) = ws.get(c) else { continue };
        let Some(f) = &cell.formula else { continue };
        for r in f.cell_refs() {
            if let Ok(a) = deref_cell(r, cell, wb) {
                if let Some(&t) = group_of_cell.get(&a) {
                    out.insert(t);
                }
            }
        }
        for r in f.area_refs() {
            let Ok((sheet, rect)) = deref_area(r, cell, wb) else {
                continue;
            };
            if !seen_areas.insert((sheet, rect)) {
                continue;
            }
            for target in wb.sheet(sheet).cells_in(rect).filter(|t| t.is_formula()) {
                if let Some(&t) = group_of_cell.get(&target.addr()) {
                    out.insert(t);
                }
            }
        }
    }
    out.remove(&id);
    out.into_iter().collect()
}
