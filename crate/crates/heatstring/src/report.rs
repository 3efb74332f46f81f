//! CSV rendering. Column layouts are part of the external contract;
//! formatting is fixed-width scientific so identical inputs produce
//! byte-identical files.

use crate::integrator::TrajectoryRecord;

/// Deterministic float formatting used in every report.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Trajectory CSV: `t,energy,hs_u_x,hs_u_t,hs_theta_dev,theta0_dev,min_theta`.
pub fn trajectory_csv(traj: &TrajectoryRecord) -> String {
    let mut out = String::from("t,energy,hs_u_x,hs_u_t,hs_theta_dev,theta0_dev,min_theta\n");
    for (r, &mt) in traj.norms.iter().zip(&traj.min_theta) {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            fmt_float(r.t),
            fmt_float(r.energy),
            fmt_float(r.hs_u_x),
            fmt_float(r.hs_u_t),
            fmt_float(r.hs_theta_dev),
            fmt_float(r.theta0_dev),
            fmt_float(mt),
        ));
    }
    out
}

/// One row of the per-mode spectral report.
#[derive(Debug, Clone, Copy)]
pub struct EigenReportRow {
    pub n: usize,
    pub lambda: [(f64, f64); 3],
    /// `|λ_j − λ_j^{asym}|` per branch.
    pub asym_err: [f64; 3],
    /// max over branches of `‖A* V − λ V‖_∞` for the asymptotic pairs.
    pub eigvec_residual: f64,
    pub similarity_residual: f64,
}

/// Spectral CSV: `n,re_lambda_1,im_lambda_1,...,asym_err_1,...,eigvec_residual,similarity_residual`.
pub fn eigen_report_csv(rows: &[EigenReportRow]) -> String {
    let mut out = String::from(
        "n,re_lambda_1,im_lambda_1,re_lambda_2,im_lambda_2,re_lambda_3,im_lambda_3,\
         asym_err_1,asym_err_2,asym_err_3,eigvec_residual,similarity_residual\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.n,
            fmt_float(r.lambda[0].0),
            fmt_float(r.lambda[0].1),
            fmt_float(r.lambda[1].0),
            fmt_float(r.lambda[1].1),
            fmt_float(r.lambda[2].0),
            fmt_float(r.lambda[2].1),
            fmt_float(r.asym_err[0]),
            fmt_float(r.asym_err[1]),
            fmt_float(r.asym_err[2]),
            fmt_float(r.eigvec_residual),
            fmt_float(r.similarity_residual),
        ));
    }
    out
}

/// Picard iteration log: `iteration,x_norm_diff,contraction_ratio`
/// (ratio empty on the first row).
pub fn iteration_log_csv(diffs: &[f64], ratios: &[f64]) -> String {
    let mut out = String::from("iteration,x_norm_diff,contraction_ratio\n");
    for (i, &d) in diffs.iter().enumerate() {
        let ratio = if i >= 1 && i - 1 < ratios.len() {
            fmt_float(ratios[i - 1])
        } else {
            String::new()
        };
        out.push_str(&format!("{},{},{}\n", i + 1, fmt_float(d), ratio));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_is_stable() {
        assert_eq!(fmt_float(0.25), "2.5000000000000000e-1");
        assert_eq!(fmt_float(0.25), fmt_float(0.25));
    }

    #[test]
    fn iteration_log_shape() {
        let csv = iteration_log_csv(&[1.0, 0.5, 0.25], &[0.5, 0.5]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], "iteration,x_norm_diff,contraction_ratio");
        assert!(lines[1].ends_with(','));
        assert!(lines[2].contains("5.0000000000000000e-1"));
    }
}
