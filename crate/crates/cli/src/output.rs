use elastnet::SampledCurve;
use serde_json::Value;

pub const SIGNIFICANT_DIGITS: usize = 10;

pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .unwrap_or(x)
}

/// Rounds every number in a JSON tree to ten significant digits.
pub fn round_json(v: Value) -> Value {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(x) if !n.is_i64() && !n.is_u64() => serde_json::Number::from_f64(round_sig(x))
                .map_or(Value::Null, Value::Number),
            _ => Value::Number(n),
        },
        Value::Array(a) => Value::Array(a.into_iter().map(round_json).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_json(v))).collect()),
        other => other,
    }
}

pub fn fmt_num(x: f64) -> String {
    round_sig(x).to_string()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    /// `s,x,y,k` rows for one curve.
    pub fn curve(c: &SampledCurve) -> Self {
        let mut t = Table::new(&["s", "x", "y", "k"]);
        t.push_curve(None, c);
        t
    }

    /// `curve,s,x,y,k` rows for several curves.
    pub fn curves<'a>(curves: impl IntoIterator<Item = (usize, &'a SampledCurve)>) -> Self {
        let mut t = Table::new(&["curve", "s", "x", "y", "k"]);
        for (i, c) in curves {
            t.push_curve(Some(i), c);
        }
        t
    }

    fn push_curve(&mut self, label: Option<usize>, c: &SampledCurve) {
        for i in 0..c.len() {
            let p = c.points()[i];
            let mut row: Vec<String> = label.map(|l| l.to_string()).into_iter().collect();
            row.extend([c.arclength()[i], p.x, p.y, c.curvature()[i]].map(fmt_num));
            self.rows.push(row);
        }
    }

    pub fn to_csv(&self) -> anyhow::Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn rounding() {
        assert_eq!(round_sig(21.207509023109843), 21.20750902);
        assert_eq!(round_sig(-0.0001234567890123), -0.0001234567890);
        assert_eq!(round_sig(0.0), 0.0);
        let v = round_json(json!({"a": [1.23456789012345, 3], "b": {"c": 2.0}}));
        assert_eq!(v, json!({"a": [1.23456789, 3], "b": {"c": 2.0}}));
    }

    #[test]
    fn csv_table() {
        let mut t = Table::new(&["a", "b"]);
        t.rows.push(vec!["1".into(), "x".into()]);
        assert_eq!(t.to_csv().unwrap(), "a,b\n1,x\n");
    }
}
