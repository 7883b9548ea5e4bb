//! Plain-text table layout.

/// Left-aligned grid; row 0 is the header, column 0 the row labels.
pub fn grid(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for (i, row) in rows.iter().enumerate() {
        let cells: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(c, s)| format!("{s:<w$}", w = widths[c]))
            .collect();
        let line = match cells.split_first() {
            Some((head, rest)) => format!("{head} | {}", rest.join("  ")),
            None => String::new(),
        };
        out.push_str(line.trim_end());
        out.push('\n');
        if i == 0 {
            let total: usize = widths.iter().sum::<usize>() + 3 + 2 * cols.saturating_sub(2);
            let mut rule = "-".repeat(widths[0] + 1);
            rule.push('+');
            rule.push_str(&"-".repeat(total.saturating_sub(widths[0] + 2)));
            out.push_str(&rule);
            out.push('\n');
        }
    }
    out
}

/// Operation table of `op` over `items`, labelled by `label`.
pub fn op_table<T: Copy>(corner: &str, items: &[T], label: impl Fn(T) -> String, op: impl Fn(T, T) -> T) -> String {
    let mut rows = Vec::with_capacity(items.len() + 1);
    let mut header = vec![corner.to_string()];
    header.extend(items.iter().map(|&b| label(b)));
    rows.push(header);
    for &a in items {
        let mut row = vec![label(a)];
        row.extend(items.iter().map(|&b| label(op(a, b))));
        rows.push(row);
    }
    grid(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xor_table() {
        let t = op_table("+", &[0u8, 1], |x| x.to_string(), |a, b| a ^ b);
        assert_eq!(t, "+ | 0  1\n--+-----\n0 | 0  1\n1 | 1  0\n");
    }
}
