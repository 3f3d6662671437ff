//! CSV writers for characteristic matrices, trajectories and continuity
//! reports.
//!
//! Numbers use 17 significant digits in scientific notation. Complex values
//! occupy two columns suffixed `_re` and `_im`. Missing values are empty.

use std::fmt::Write;

use num_complex::Complex;

use crate::charmat::CharacteristicMatrix;
use crate::continuity::ContinuityReport;
use crate::odeint::Trajectory;
use crate::scalar::Real;

pub fn number<T: Real>(x: T) -> String {
    format!("{:.16e}", x.as_f64())
}

fn complex<T: Real>(z: Complex<T>) -> String {
    format!("{},{}", number(z.re), number(z.im))
}

fn optional<T: Real>(x: Option<T>) -> String {
    x.map(number).unwrap_or_default()
}

/// One row per matrix row; columns `m{j}_re,m{j}_im`.
pub fn characteristic_matrix<T: Real>(m: &CharacteristicMatrix<T>) -> String {
    let data = m.data();
    let mut out = String::from("row");
    for j in 0..data.ncols() {
        write!(out, ",m{j}_re,m{j}_im").unwrap();
    }
    out.push('\n');
    for i in 0..data.nrows() {
        write!(out, "{i}").unwrap();
        for j in 0..data.ncols() {
            write!(out, ",{}", complex(data[(i, j)])).unwrap();
        }
        out.push('\n');
    }
    out
}

/// One row per grid node: `t`, then every stored derivative order of every
/// entry. Entry `(i, c)` of order `k` is `y{i}_{c}_d{k}`; for single-column
/// trajectories the column index is dropped.
pub fn trajectory<T: Real>(y: &Trajectory<T>) -> String {
    let (rows, cols) = (y.rows(), y.cols());
    let mut out = String::from("t");
    for k in 0..=y.max_order() {
        for i in 0..rows {
            for c in 0..cols {
                let name = if cols == 1 {
                    format!("y{i}_d{k}")
                } else {
                    format!("y{i}_{c}_d{k}")
                };
                write!(out, ",{name}_re,{name}_im").unwrap();
            }
        }
    }
    out.push('\n');
    for (node, t) in y.grid().nodes().enumerate() {
        out.push_str(&number(t));
        for k in 0..=y.max_order() {
            let v = y.at(k, node);
            for i in 0..rows {
                for c in 0..cols {
                    write!(out, ",{}", complex(v[(i, c)])).unwrap();
                }
            }
        }
        out.push('\n');
    }
    out
}

/// One row per scheduled ε.
pub fn continuity<T: Real>(report: &ContinuityReport<T>) -> String {
    let mut out = String::from(
        "eps,matrix_distance,dim_ker,dim_coker,index,status,error,discrepancy,ratio,\
         coefficient_distance,boundary_distance\n",
    );
    let cond = &report.conditions;
    for (i, e) in report.entries.iter().enumerate() {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            number(e.eps),
            number(e.matrix_distance),
            e.fredholm.dim_ker,
            e.fredholm.dim_coker,
            e.fredholm.index,
            e.status,
            optional(e.error),
            optional(e.discrepancy),
            optional(e.ratio),
            optional(cond.coefficient_distances.get(i).copied()),
            optional(cond.boundary_distances.get(i).copied()),
        )
        .unwrap();
    }
    out
}
