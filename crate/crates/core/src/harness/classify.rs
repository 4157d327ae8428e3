use serde::Serialize;

/// One row of the outflow classification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegimeRow {
    pub name: &'static str,
    pub condition: &'static str,
    pub ep_boundary: &'static str,
    pub limit_boundary: &'static str,
    pub leading_layer: &'static str,
    pub supported: bool,
    pub experiments: Vec<&'static str>,
}

/// The four outflow regimes, slowest first.
pub fn classify_report() -> Vec<RegimeRow> {
    vec![
        RegimeRow {
            name: "characteristic",
            condition: "u.n = 0",
            ep_boundary: "u.n = 0 and phi = phi_b",
            limit_boundary: "u.n = 0",
            leading_layer: "Density and Potential",
            supported: false,
            experiments: vec![],
        },
        RegimeRow {
            name: "subsonic",
            condition: "u.n = ubar, -sqrt(Ti) < ubar < 0",
            ep_boundary: "u.n = ubar and phi = phi_b",
            limit_boundary: "u.n = ubar",
            leading_layer: "Density and Potential",
            supported: false,
            experiments: vec![],
        },
        RegimeRow {
            name: "intermediate",
            condition: "-sqrt(Ti+1) < u3(0) < -sqrt(Ti)",
            ep_boundary: "phi = phi_b",
            limit_boundary: "n = e^{-phi_b}",
            leading_layer: "No boundary layer",
            supported: true,
            experiments: vec!["limit", "solve", "converge"],
        },
        RegimeRow {
            name: "supersonic",
            condition: "u3(0) < -sqrt(Ti+1)",
            ep_boundary: "phi = phi_b",
            limit_boundary: "None",
            leading_layer: "Density, Potential and Velocity",
            supported: true,
            experiments: vec!["profile", "limit", "solve", "converge", "stability", "residual"],
        },
    ]
}

/// Plain-text rendering with `|`-separated columns.
pub fn render_table(rows: &[RegimeRow]) -> String {
    let header = ["regime", "condition", "eps > 0 BC", "eps = 0 BC", "leading layer", "supported"];
    let cells: Vec<[String; 6]> = rows
        .iter()
        .map(|r| {
            let support = if r.supported { r.experiments.join(",") } else { "unsupported".to_string() };
            [r.name, r.condition, r.ep_boundary, r.limit_boundary, r.leading_layer]
                .map(str::to_string)
                .into_iter()
                .chain([support])
                .collect::<Vec<_>>()
                .try_into()
                .unwrap()
        })
        .collect();
    let mut widths = header.map(str::len);
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let line = |row: &[String]| row.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect::<Vec<_>>().join(" | ");
    let mut out = line(&header.map(str::to_string)).trim_end().to_string();
    out.push('\n');
    for row in &cells {
        out.push_str(line(row).trim_end());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_rows() {
        let rows = classify_report();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[3].leading_layer, "Density, Potential and Velocity");
        assert_eq!(rows[2].leading_layer, "No boundary layer");
        assert!(!rows[0].supported && !rows[1].supported);
        let text = render_table(&rows);
        assert_eq!(text.lines().count(), 5);
        assert!(text.lines().nth(2).unwrap().ends_with("unsupported"));
    }
}
