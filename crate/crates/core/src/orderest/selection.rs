use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Estimates `ν(λ_i, t̂_j)` on the `K₁ × K₂` parameter grid; `None` marks a
/// cell whose estimate failed.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateTable {
    k1: usize,
    k2: usize,
    cells: Vec<Option<f64>>,
}

impl EstimateTable {
    pub fn new(k1: usize, k2: usize, cells: Vec<Option<f64>>) -> Result<Self> {
        if cells.len() != k1 * k2 {
            return Err(Error::invalid(
                "estimate table",
                format!("{} cells for a {k1}x{k2} grid", cells.len()),
            ));
        }
        Ok(Self { k1, k2, cells })
    }

    pub fn from_fn(k1: usize, k2: usize, f: impl Fn(usize, usize) -> Option<f64>) -> Self {
        let cells = (0..k1).flat_map(|i| (0..k2).map(move |j| (i, j))).map(|(i, j)| f(i, j)).collect();
        Self { k1, k2, cells }
    }

    /// Number of `λ` values (rows).
    pub fn k1(&self) -> usize {
        self.k1
    }

    /// Number of `t̂` values (columns).
    pub fn k2(&self) -> usize {
        self.k2
    }

    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.cells[i * self.k2 + j]
    }

    pub fn is_failed(&self, i: usize, j: usize) -> bool {
        self.get(i, j).is_none()
    }

    fn diff(&self, a: (usize, usize), b: (usize, usize)) -> Option<f64> {
        Some((self.get(a.0, a.1)? - self.get(b.0, b.1)?).abs())
    }
}

/// How the `t̂` index is chosen once each column has its `λ` index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThatCriterion {
    /// Minimize `|ν(λ_{i_j}, t̂_j) − ν(λ_{i_{j−1}}, t̂_{j−1})|` over `j ≥ 2`.
    Consecutive,
    /// Minimize the smallest consecutive `λ` difference of column `j` over `j ≥ 2`.
    #[default]
    SweepStability,
}

/// Indices `(i, j)` (0-based) of the selected cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Selection {
    pub i: usize,
    pub j: usize,
}

/// For one column: the later index of the closest consecutive pair and that
/// distance. Ties go to the smallest index.
fn inner_select(table: &EstimateTable, j: usize) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for i in 1..table.k1 {
        if let Some(d) = table.diff((i, j), (i - 1, j)) {
            if best.map_or(true, |(_, b)| d < b) {
                best = Some((i, d));
            }
        }
    }
    best
}

fn column_choices(table: &EstimateTable) -> Result<Vec<(usize, f64)>> {
    if table.k1 < 2 || table.k2 < 2 {
        return Err(Error::Selection(format!(
            "a {}x{} table has no consecutive pairs",
            table.k1, table.k2
        )));
    }
    (0..table.k2)
        .map(|j| {
            inner_select(table, j)
                .ok_or_else(|| Error::Selection(format!("column {} has no admissible λ difference", j + 1)))
        })
        .collect()
}

/// Double quasi-optimality: for each `t̂_j` the `λ_i` (`i ≥ 2`) minimizing
/// `|ν(λ_i, t̂_j) − ν(λ_{i−1}, t̂_j)|`, then the `j ≥ 2` minimizing the change
/// between consecutive selected columns. Failed cells make every difference
/// they take part in inadmissible.
pub fn quasi_opt_select(table: &EstimateTable) -> Result<Selection> {
    select(table, ThatCriterion::Consecutive)
}

pub fn select(table: &EstimateTable, criterion: ThatCriterion) -> Result<Selection> {
    let cols = column_choices(table)?;
    let mut best: Option<(usize, f64)> = None;
    for j in 1..table.k2 {
        let score = match criterion {
            ThatCriterion::Consecutive => table.diff((cols[j].0, j), (cols[j - 1].0, j - 1)),
            ThatCriterion::SweepStability => Some(cols[j].1),
        };
        if let Some(d) = score {
            if best.map_or(true, |(_, b)| d < b) {
                best = Some((j, d));
            }
        }
    }
    let (j, _) = best.ok_or_else(|| Error::Selection("no admissible t̂ difference".into()))?;
    Ok(Selection { i: cols[j].0, j })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn constant_table_ties_to_smallest() {
        let t = EstimateTable::from_fn(5, 4, |_, _| Some(0.3));
        assert_eq!(quasi_opt_select(&t).unwrap(), Selection { i: 1, j: 1 });
        assert_eq!(select(&t, ThatCriterion::SweepStability).unwrap(), Selection { i: 1, j: 1 });
    }

    #[test]
    fn strict_minima() {
        // column j: values i*(j+1) except a repeated pair at i = j+1, j+2
        let t = EstimateTable::from_fn(6, 3, |i, j| {
            let base = (i as f64) * (j as f64 + 1.0);
            Some(if i == j + 2 { (j + 1) as f64 * (j as f64 + 1.0) } else { base + 0.01 * j as f64 })
        });
        let i_sel: Vec<usize> = (0..3).map(|j| inner_select(&t, j).unwrap().0).collect();
        assert_eq!(i_sel, vec![2, 3, 4]);
        let d1 = (t.get(3, 1).unwrap() - t.get(2, 0).unwrap()).abs();
        let d2 = (t.get(4, 2).unwrap() - t.get(3, 1).unwrap()).abs();
        let expect = if d2 < d1 { 2 } else { 1 };
        assert_eq!(quasi_opt_select(&t).unwrap(), Selection { i: i_sel[expect], j: expect });
    }

    #[test]
    fn failed_cells_are_skipped() {
        let t = EstimateTable::from_fn(4, 2, |i, j| if i == 1 && j == 0 { None } else { Some((i * i) as f64 + j as f64) });
        // column 0 differences: (1,0) and (2,1) inadmissible, (3,2) = 5
        assert_eq!(inner_select(&t, 0), Some((3, 5.0)));
        let dead = EstimateTable::from_fn(3, 2, |i, j| if j == 1 && i != 0 { None } else { Some(1.0) });
        assert!(matches!(quasi_opt_select(&dead), Err(Error::Selection(_))));
        assert!(quasi_opt_select(&EstimateTable::from_fn(1, 3, |_, _| Some(1.0))).is_err());
    }

    proptest! {
        #[test]
        fn selection_is_a_grid_member(
            vals in prop::collection::vec(prop::option::weighted(0.9, -1.0f64..1.0), 12 * 5),
            sweep in any::<bool>(),
        ) {
            let table = EstimateTable::new(12, 5, vals).unwrap();
            let crit = if sweep { ThatCriterion::SweepStability } else { ThatCriterion::Consecutive };
            if let Ok(s) = select(&table, crit) {
                prop_assert!(s.i >= 1 && s.i < 12 && s.j >= 1 && s.j < 5);
                prop_assert!(table.get(s.i, s.j).is_some());
                prop_assert_eq!(s.i, inner_select(&table, s.j).unwrap().0);
            }
        }
    }
}
