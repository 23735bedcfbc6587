//! One row of trajectory data per grid point.

use cavity_qfi::qfi::{cavity_excitation_series, qfi_series, qubit_state, QfiSample};
use cavity_qfi::{gamma_minus, gamma_plus, kernel_integrals, Mode};

use crate::scenario::{Family, Scenario};
use crate::CliError;

/// Column names, in output order.
pub const COLUMNS: [&str; 13] = [
    "gamma0_t",
    "F_closed",
    "F_sld",
    "qfi_flow",
    "rho11",
    "rho22",
    "re_rho12",
    "im_rho12",
    "purity",
    "I_minus",
    "I_plus",
    "gamma_minus",
    "gamma_plus",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Row {
    pub values: [f64; 13],
}

impl Row {
    pub fn get(&self, column: &str) -> Option<f64> {
        column_index(column).map(|k| self.values[k])
    }

    pub fn t(&self) -> f64 {
        self.values[0]
    }
}

pub fn column_index(column: &str) -> Option<usize> {
    COLUMNS.iter().position(|&c| c == column)
}

/// Evaluates the scenario on its grid.
pub fn compute_table(s: &Scenario) -> Result<Vec<Row>, CliError> {
    s.validate()?;
    let p = s.params()?;
    let grid = s.grid()?;
    let spec = s.state()?;
    let samples: Vec<QfiSample> = match s.family {
        Family::Raw => cavity_excitation_series(s.theta, s.phi, &p, &grid)?,
        Family::Dressed | Family::Standard => qfi_series(&spec, &p, &grid, s.mode)?,
    };
    // the raw family is only defined on the first-principles path
    let state_mode = match s.family {
        Family::Raw => Mode::Rederived,
        _ => s.mode,
    };
    samples
        .iter()
        .map(|q| {
            let rho = qubit_state(&spec, q.t, &p, state_mode)?;
            let k = kernel_integrals(q.t, &p)?;
            Ok(Row {
                values: [
                    q.t,
                    q.f_closed,
                    q.f_sld,
                    q.flow,
                    rho.rho[(0, 0)].re,
                    rho.rho[(1, 1)].re,
                    rho.rho[(0, 1)].re,
                    rho.rho[(0, 1)].im,
                    rho.purity(),
                    k.i_minus,
                    k.i_plus,
                    gamma_minus(q.t, &p)?,
                    gamma_plus(q.t, &p)?,
                ],
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(name: &str) -> Scenario {
        let mut s = Scenario::preset(name).unwrap();
        s.samples = 101;
        s
    }

    #[test]
    fn first_row_of_fig1a_is_exact() {
        let rows = compute_table(&small("fig1a")).unwrap();
        assert_eq!(rows.len(), 101);
        let first = rows[0];
        assert_eq!(first.t(), 0.0);
        assert_eq!(first.get("F_closed"), Some(1.0));
        assert!((first.get("F_sld").unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(first.get("I_minus"), Some(0.0));
        assert_eq!(rows[100].t(), 20.0);
    }

    #[test]
    fn sld_column_tracks_closed_column() {
        for name in ["fig1b", "fig3b", "fig3b-inset"] {
            for row in compute_table(&small(name)).unwrap() {
                let diff = row.get("F_closed").unwrap() - row.get("F_sld").unwrap();
                assert!(diff.abs() < 1e-9, "{name} at {}", row.t());
            }
        }
    }

    #[test]
    fn raw_family_follows_standard_closed_form() {
        let mut s = small("fig3b");
        s.family = Family::Raw;
        s.mode = Mode::Rederived;
        let raw = compute_table(&s).unwrap();
        let printed = compute_table(&small("fig3b")).unwrap();
        for (a, b) in raw.iter().zip(&printed) {
            assert_eq!(a.get("F_closed"), b.get("F_closed"));
            assert!((a.get("F_sld").unwrap() - b.get("F_closed").unwrap()).abs() < 1e-9);
            assert!((a.get("rho11").unwrap() - b.get("rho11").unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn trace_and_purity_columns_are_consistent() {
        for row in compute_table(&small("fig1d")).unwrap() {
            let trace = row.get("rho11").unwrap() + row.get("rho22").unwrap();
            assert!((trace - 1.0).abs() < 1e-12);
            let purity = row.get("purity").unwrap();
            assert!((0.5 - 1e-12..=1.0 + 1e-12).contains(&purity));
        }
    }

    #[test]
    fn unknown_columns_have_no_index() {
        assert_eq!(column_index("gamma0_t"), Some(0));
        assert_eq!(column_index("F"), None);
    }
}
