//! CSV tables of errors and rates.

use divdiv::biharmonic::{report_rates, ErrorReport};

fn field(v: Option<f64>, precision: usize) -> String {
    v.map_or(String::new(), |x| format!("{x:.precision$e}"))
}

/// One row per mesh, with the columns of [`ErrorReport::COLUMNS`] and,
/// when `deviation` is given, the hybrid/mixed deviation column.
pub fn errors_csv(rows: &[ErrorReport], deviation: Option<&[f64]>) -> String {
    let mut out = ErrorReport::COLUMNS.join(",");
    if deviation.is_some() {
        out.push_str(",hybrid_max_dev");
    }
    out.push('\n');
    for (i, r) in rows.iter().enumerate() {
        let mut cells = vec![format!("{:.6e}", r.h), r.dofs.to_string()];
        cells.extend(r.errors().iter().map(|e| field(*e, 6)));
        if let Some(d) = deviation {
            cells.push(field(d.get(i).copied(), 3));
        }
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Observed rates between successive rows.
pub fn rates_csv(rows: &[ErrorReport]) -> String {
    let mut header = vec!["h_coarse".to_string(), "h_fine".to_string()];
    header.extend(ErrorReport::COLUMNS[2..].iter().map(|c| c.replacen("err_", "rate_", 1)));
    let mut out = header.join(",");
    out.push('\n');
    for (w, rates) in rows.windows(2).zip(report_rates(rows)) {
        let mut cells = vec![format!("{:.6e}", w[0].h), format!("{:.6e}", w[1].h)];
        cells.extend(rates.iter().map(|r| r.map_or(String::new(), |x| format!("{x:.4}"))));
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(h: f64) -> ErrorReport {
        ErrorReport {
            h,
            dofs: 10,
            sigma_l2: h.powi(4),
            divdiv: h.powi(2),
            u_l2: h.powi(2),
            qhu_l2: h.powi(4),
            qhu_2h: h.powi(4),
            ustar_2h: None,
        }
    }

    #[test]
    fn tables_have_headers_and_rows() {
        let rows = [row(0.5), row(0.25), row(0.125)];
        let e = errors_csv(&rows, Some(&[1e-14, 2e-14, 3e-14]));
        let lines: Vec<&str> = e.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[0].ends_with("err_ustar_2h,hybrid_max_dev"));
        assert!(lines[1].contains(",,"));
        let r = rates_csv(&rows);
        let lines: Vec<&str> = r.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("h_coarse,h_fine,rate_sigma_L2"));
        assert!(lines[1].contains(",4.0000,2.0000,"));
    }
}
