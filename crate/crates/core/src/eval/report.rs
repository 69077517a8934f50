use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use super::{RougeScore, Variant, DIVERSITY_ORDERS};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterEval {
    pub id: String,
    /// Absent when the cluster has no references.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rouge: Option<BTreeMap<Variant, RougeScore>>,
    /// Unique n-gram ratios for n = 1..=4.
    pub uniq_ngram_ratio: [f64; 4],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub clusters: Vec<ClusterEval>,
    /// Means over clusters that have references.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_rouge: Option<BTreeMap<Variant, RougeScore>>,
    pub mean_uniq_ngram_ratio: [f64; 4],
}

impl EvalReport {
    pub fn from_clusters(clusters: Vec<ClusterEval>) -> Self {
        let scored: Vec<&BTreeMap<Variant, RougeScore>> = clusters.iter().filter_map(|c| c.rouge.as_ref()).collect();
        let mean_rouge = (!scored.is_empty()).then(|| {
            let k = scored.len() as f64;
            let mut sums: BTreeMap<Variant, RougeScore> = BTreeMap::new();
            for map in &scored {
                for (&v, s) in *map {
                    let acc = sums.entry(v).or_default();
                    acc.precision += s.precision;
                    acc.recall += s.recall;
                    acc.f1 += s.f1;
                }
            }
            for s in sums.values_mut() {
                s.precision /= k;
                s.recall /= k;
                s.f1 /= k;
            }
            sums
        });
        let mut mean_uniq_ngram_ratio = [0.0; 4];
        if !clusters.is_empty() {
            for c in &clusters {
                for (acc, v) in mean_uniq_ngram_ratio.iter_mut().zip(c.uniq_ngram_ratio) {
                    *acc += v;
                }
            }
            for acc in &mut mean_uniq_ngram_ratio {
                *acc /= clusters.len() as f64;
            }
        }
        EvalReport {
            clusters,
            mean_rouge,
            mean_uniq_ngram_ratio,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    fn variants(&self) -> Vec<Variant> {
        self.mean_rouge
            .as_ref()
            .map(|m| m.keys().copied().collect())
            .unwrap_or_default()
    }

    /// Aligned plain-text table: one row per cluster plus a mean row, ROUGE
    /// F1 and unique n-gram ratios in percent.
    pub fn to_table(&self) -> String {
        let variants = self.variants();
        let id_width = self.clusters.iter().map(|c| c.id.len()).chain([7]).max().unwrap_or(7);
        let mut header = format!("{:<id_width$}", "cluster");
        for v in &variants {
            let _ = write!(header, " {:>8}", format!("{}-f1", v));
        }
        for n in DIVERSITY_ORDERS {
            let _ = write!(header, " {:>8}", format!("uniq{n}"));
        }
        let mut out = String::new();
        out.push_str(&header);
        out.push('\n');
        out.push_str(&"-".repeat(header.len()));
        out.push('\n');
        let mut row = |id: &str, rouge: Option<&BTreeMap<Variant, RougeScore>>, uniq: &[f64; 4]| {
            let _ = write!(out, "{id:<id_width$}");
            for v in &variants {
                match rouge.and_then(|m| m.get(v)) {
                    Some(s) => {
                        let _ = write!(out, " {:>8.2}", 100.0 * s.f1);
                    }
                    None => {
                        let _ = write!(out, " {:>8}", "-");
                    }
                }
            }
            for u in uniq {
                let _ = write!(out, " {:>8.2}", 100.0 * u);
            }
            out.push('\n');
        };
        for c in &self.clusters {
            row(&c.id, c.rouge.as_ref(), &c.uniq_ngram_ratio);
        }
        row("mean", self.mean_rouge.as_ref(), &self.mean_uniq_ngram_ratio);
        out
    }

    /// `id,uniq1,uniq2,uniq3,uniq4` rows, with a final `mean` row.
    pub fn diversity_csv(&self) -> String {
        let mut out = String::from("id,uniq1,uniq2,uniq3,uniq4\n");
        let rows = self
            .clusters
            .iter()
            .map(|c| (c.id.as_str(), &c.uniq_ngram_ratio))
            .chain([("mean", &self.mean_uniq_ngram_ratio)]);
        for (id, u) in rows {
            let _ = writeln!(out, "{id},{:.6},{:.6},{:.6},{:.6}", u[0], u[1], u[2], u[3]);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cluster(id: &str, f1: Option<f64>, uniq: f64) -> ClusterEval {
        ClusterEval {
            id: id.into(),
            rouge: f1.map(|f| BTreeMap::from([(Variant::R1, RougeScore::from_pr(f, f))])),
            uniq_ngram_ratio: [uniq; 4],
        }
    }

    #[test]
    fn means_are_arithmetic() {
        let r = EvalReport::from_clusters(vec![cluster("a", Some(0.2), 0.5), cluster("b", Some(0.6), 1.0)]);
        let m = r.mean_rouge.as_ref().unwrap()[&Variant::R1];
        assert!((m.f1 - 0.4).abs() < 1e-12);
        assert_eq!(r.mean_uniq_ngram_ratio, [0.75; 4]);
    }

    #[test]
    fn clusters_without_references_do_not_count() {
        let r = EvalReport::from_clusters(vec![cluster("a", Some(0.2), 0.5), cluster("b", None, 1.0)]);
        assert!((r.mean_rouge.as_ref().unwrap()[&Variant::R1].f1 - 0.2).abs() < 1e-12);
        let r = EvalReport::from_clusters(vec![cluster("b", None, 1.0)]);
        assert!(r.mean_rouge.is_none());
        assert!(!r.to_json().contains("mean_rouge"));
    }

    #[test]
    fn table_and_csv_shapes() {
        let r = EvalReport::from_clusters(vec![cluster("alpha", Some(0.25), 0.5)]);
        let table = r.to_table();
        let lines: Vec<&str> = table.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[0].starts_with("cluster"));
        assert!(lines[2].contains("25.00"));
        assert!(lines[3].starts_with("mean"));
        let csv = r.diversity_csv();
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.contains("alpha,0.500000"));
    }
}
