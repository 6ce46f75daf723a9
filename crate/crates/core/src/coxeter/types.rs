use super::{CoxeterError, CoxeterMatrix};

/// Parses a type string such as `A2`, `B3~`, `I2(5)` or `A2xA1`.
pub fn parse_type(spec: &str) -> Result<CoxeterMatrix, CoxeterError> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Err(CoxeterError::InvalidType(spec.to_string()));
    }
    let mut acc: Option<CoxeterMatrix> = None;
    for factor in spec.split('x') {
        let m = parse_factor(factor.trim()).map_err(|e| match e {
            CoxeterError::InvalidType(_) => CoxeterError::InvalidType(spec.to_string()),
            other => other,
        })?;
        acc = Some(match acc {
            None => m,
            Some(prev) => prev.block_diagonal(&m),
        });
    }
    Ok(acc.expect("split yields at least one factor"))
}

fn parse_factor(factor: &str) -> Result<CoxeterMatrix, CoxeterError> {
    let bad = || CoxeterError::InvalidType(factor.to_string());
    let (base, affine) = match factor.strip_suffix('~') {
        Some(b) => (b, true),
        None => (factor, false),
    };
    if let Some(inner) = base.strip_prefix("I2(").and_then(|r| r.strip_suffix(')')) {
        let m: u32 = inner.parse().map_err(|_| bad())?;
        if m < 2 || affine {
            return Err(bad());
        }
        let mut mat = CoxeterMatrix::commuting(2);
        mat.set_edge(0, 1, Some(m));
        return Ok(mat);
    }
    let mut chars = base.chars();
    let letter = chars.next().ok_or_else(bad)?;
    let n: usize = chars.as_str().parse().map_err(|_| bad())?;
    if affine {
        affine_type(letter, n).ok_or_else(bad)
    } else {
        finite_type(letter, n, factor)
    }
}

fn chain(n: usize) -> CoxeterMatrix {
    let mut m = CoxeterMatrix::commuting(n);
    for i in 1..n {
        m.set_edge(i - 1, i, Some(3));
    }
    m
}

fn finite_type(letter: char, n: usize, name: &str) -> Result<CoxeterMatrix, CoxeterError> {
    let bad = || CoxeterError::InvalidType(name.to_string());
    let mut m;
    match letter {
        'A' if n >= 1 => m = chain(n),
        'B' | 'C' if n >= 2 => {
            m = chain(n);
            m.set_edge(n - 2, n - 1, Some(4));
        }
        'D' if n >= 4 => {
            m = chain(n - 1);
            m = grow(m, n - 3);
        }
        'E' if (6..=8).contains(&n) => {
            // 1-3-4-5-6(-7-8) with 2 attached to 4 (Bourbaki labels).
            m = CoxeterMatrix::commuting(n);
            m.set_edge(0, 2, Some(3));
            m.set_edge(1, 3, Some(3));
            for i in 2..n - 1 {
                m.set_edge(i, i + 1, Some(3));
            }
        }
        'F' if n == 4 => {
            m = chain(4);
            m.set_edge(1, 2, Some(4));
        }
        'G' if n == 2 => {
            m = CoxeterMatrix::commuting(2);
            m.set_edge(0, 1, Some(6));
        }
        'H' if n == 3 || n == 4 => return Err(CoxeterError::Unsupported(name.to_string())),
        _ => return Err(bad()),
    }
    Ok(m)
}

/// Appends one node joined to `attach` by an edge of order 3.
fn grow(m: CoxeterMatrix, attach: usize) -> CoxeterMatrix {
    grow_with(m, attach, Some(3))
}

fn grow_with(m: CoxeterMatrix, attach: usize, order: Option<u32>) -> CoxeterMatrix {
    let mut out = m.block_diagonal(&CoxeterMatrix::commuting(1));
    let last = out.rank() - 1;
    out.set_edge(attach, last, order);
    out
}

fn affine_type(letter: char, n: usize) -> Option<CoxeterMatrix> {
    let name = format!("{letter}{n}");
    let fin = |l: char| finite_type(l, n, &name).ok();
    Some(match letter {
        'A' if n == 1 => grow_with(chain(1), 0, None),
        'A' if n >= 2 => {
            let mut m = grow(chain(n), 0);
            m.set_edge(n - 1, n, Some(3));
            m
        }
        'B' if n >= 3 => grow(fin('B')?, 1),
        'C' if n >= 2 => grow_with(fin('C')?, 0, Some(4)),
        'D' if n >= 4 => grow(fin('D')?, 1),
        'E' if n == 6 => grow(fin('E')?, 1),
        'E' if n == 7 => grow(fin('E')?, 0),
        'E' if n == 8 => grow(fin('E')?, 7),
        'F' if n == 4 => grow(fin('F')?, 0),
        'G' if n == 2 => grow(fin('G')?, 1),
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        let d4 = parse_type("D4").unwrap();
        // Node 1 is the branch point.
        assert_eq!(d4.get(0, 1), Some(3));
        assert_eq!(d4.get(1, 2), Some(3));
        assert_eq!(d4.get(1, 3), Some(3));
        assert_eq!(d4.get(2, 3), Some(2));
        let b3 = parse_type("B3").unwrap();
        assert_eq!(b3.get(1, 2), Some(4));
        let a2t = parse_type("A2~").unwrap();
        assert_eq!(a2t.rank(), 3);
        assert!((0..3).all(|i| (0..3).all(|j| i == j || a2t.get(i, j) == Some(3))));
        let p = parse_type("A2xA1").unwrap();
        assert_eq!(p.rank(), 3);
        assert_eq!(p.components().len(), 2);
        assert_eq!(parse_type("I2(7)").unwrap().get(0, 1), Some(7));
        let e6 = parse_type("E6").unwrap();
        assert_eq!(e6.get(1, 3), Some(3));
        assert_eq!(e6.get(0, 2), Some(3));
    }

    #[test]
    fn rejects_bad_strings() {
        for s in ["", "Q3", "A0", "D2", "E9", "I2(1)", "I2(5)~", "A2x", "G3"] {
            assert!(parse_type(s).is_err(), "{s}");
        }
        assert!(matches!(parse_type("H3"), Err(CoxeterError::Unsupported(_))));
    }
}
