//! One function per subcommand, each turning library results into a
//! [`Table`]. No numerics live here beyond grid bookkeeping.

use invbin_core::{
    alpha, exact_normalized_mae, fixed_normalized_mae, matched_sample_size, mc_normalized_mae,
    plan, rmse_bound, series_coefficient, Criterion, Error, Probability, Result, RunConfig,
    SuccessTarget,
};

use crate::grid::GridSpec;
use crate::output::{Table, Value};

pub fn mae(successes: SuccessTarget, p: Probability) -> Table {
    let result = exact_normalized_mae(successes, p);
    let bound = alpha(successes);
    Table::record(vec![
        ("N", successes.get().into()),
        ("p", p.get().into()),
        ("normalized_mae", result.normalized_mae.into()),
        ("n0", result.n0.into()),
        ("alpha_N", bound.into()),
        ("slack", (bound - result.normalized_mae).into()),
    ])
}

pub fn curve(successes: &[SuccessTarget], grid: &GridSpec, include_fixed: bool) -> Result<Table> {
    let probabilities = grid
        .values()
        .into_iter()
        .map(Probability::new)
        .collect::<Result<Vec<_>>>()?;
    let mut columns = vec!["N", "p", "normalized_mae"];
    if include_fixed {
        columns.push("fixed_normalized_mae");
    }
    let mut table = Table::new(columns);
    for &n in successes {
        for &p in &probabilities {
            let mut row: Vec<Value> = vec![
                n.get().into(),
                p.get().into(),
                exact_normalized_mae(n, p).normalized_mae.into(),
            ];
            if include_fixed {
                let fixed = match matched_sample_size(n, p) {
                    Some(size) => Some(fixed_normalized_mae(size, p)?.normalized_mae),
                    None => None,
                };
                row.push(fixed.into());
            }
            table.push(row);
        }
    }
    Ok(table)
}

/// Success targets from an explicit list or a grid rounded to integers.
pub fn success_grid(list: &[u64], grid: Option<&GridSpec>) -> Result<Vec<SuccessTarget>> {
    let mut values: Vec<u64> = list.to_vec();
    if let Some(g) = grid {
        for v in g.values() {
            if !(v >= SuccessTarget::MIN as f64) {
                return Err(Error::InvalidSuccessTarget {
                    got: v.max(0.0) as u64,
                    min: SuccessTarget::MIN,
                });
            }
            let n = v.round() as u64;
            if values.last() != Some(&n) {
                values.push(n);
            }
        }
    }
    values.into_iter().map(SuccessTarget::new).collect()
}

pub fn bounds(successes: &[SuccessTarget]) -> Table {
    let mut table = Table::new(vec!["N", "alpha_N", "rmse_bound"]);
    for &n in successes {
        table.push(vec![n.get().into(), alpha(n).into(), rmse_bound(n).into()]);
    }
    table
}

pub fn plan_record(target: f64, criterion: Criterion) -> Result<Table> {
    let plan = plan(target, criterion)?;
    Ok(Table::record(vec![
        ("criterion", criterion.as_str().into()),
        ("target", plan.target.into()),
        ("N", plan.successes.into()),
        ("achieved_bound", plan.achieved_bound.into()),
    ]))
}

pub fn simulate(cfg: &RunConfig) -> Result<Table> {
    let est = mc_normalized_mae(cfg)?;
    let exact = exact_normalized_mae(cfg.successes, cfg.p).normalized_mae;
    let z = (est.mean_normalized_abs_error - exact) / est.std_error;
    Ok(Table::record(vec![
        ("N", cfg.successes.get().into()),
        ("p", cfg.p.get().into()),
        ("trials", est.trials.into()),
        ("seed", est.seed.into()),
        ("shards", est.shards.into()),
        ("mean_normalized_abs_error", est.mean_normalized_abs_error.into()),
        ("std_error", est.std_error.into()),
        ("mean_sample_size", est.mean_sample_size.into()),
        ("sample_size_std_error", est.sample_size_std_error.into()),
        ("mean_estimate", est.mean_estimate.into()),
        ("estimate_std_error", est.estimate_std_error.into()),
        ("exact_normalized_mae", exact.into()),
        ("z_score", z.into()),
    ]))
}

pub fn coeffs(successes: SuccessTarget, j_max: u32) -> Table {
    let mut table = Table::new(vec!["j", "x_j"]);
    for j in 0..=j_max {
        let c = series_coefficient(successes, j);
        table.push(vec![c.j.into(), c.value.into()]);
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u64) -> SuccessTarget {
        SuccessTarget::new(v).unwrap()
    }

    fn real(v: &Value) -> f64 {
        match v {
            Value::Real(x) => *x,
            other => panic!("expected a real, got {other:?}"),
        }
    }

    #[test]
    fn curve_monotone_and_bounded() {
        let grid: GridSpec = "0.01:0.99:99".parse().unwrap();
        let table = curve(&[n(2)], &grid, true).unwrap();
        let a = alpha(n(2));
        let mut prev = f64::INFINITY;
        for row in table.rows() {
            let v = real(&row[2]);
            assert!(v < prev && v < a);
            prev = v;
        }
        let half = table
            .rows()
            .iter()
            .find(|r| (real(&r[1]) - 0.5).abs() < 1e-12)
            .unwrap();
        assert!((real(&half[3]) - 0.375).abs() < 1e-12);
        // 2 / 0.03 is not an integer.
        let off = table
            .rows()
            .iter()
            .find(|r| (real(&r[1]) - 0.03).abs() < 1e-12)
            .unwrap();
        assert_eq!(off[3], Value::Empty);
    }

    #[test]
    fn curve_rejects_grid_outside_unit_interval() {
        let grid: GridSpec = "0.5:1.5:3".parse().unwrap();
        assert!(curve(&[n(2)], &grid, false).is_err());
    }

    #[test]
    fn bounds_rows() {
        let table = bounds(&[n(2), n(3), n(65), n(102)]);
        let rows = table.rows();
        assert_eq!(rows[0][2], Value::Empty);
        assert_eq!(real(&rows[1][2]), 1.0);
        assert!((real(&rows[2][1]) - 0.0996).abs() < 1e-4);
        assert_eq!(real(&rows[3][2]), 0.1);
    }

    #[test]
    fn success_grid_dedups_and_validates() {
        let g: GridSpec = "2:5:7".parse().unwrap();
        let ns: Vec<u64> = success_grid(&[], Some(&g)).unwrap().iter().map(|n| n.get()).collect();
        assert_eq!(ns, vec![2, 3, 4, 5]);
        let g: GridSpec = "1:5:3".parse().unwrap();
        assert!(success_grid(&[], Some(&g)).is_err());
        assert!(success_grid(&[1], None).is_err());
    }

    #[test]
    fn coeffs_for_two() {
        let table = coeffs(n(2), 10);
        for (j, row) in table.rows().iter().enumerate() {
            assert!((real(&row[1]) - 1.0 / (j as f64 + 2.0)).abs() < 1e-15);
        }
    }
}
