use std::cmp::Ordering;

/// Orders labels so that embedded digit runs compare numerically (`x2 < x10`).
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    let (mut ai, mut bi) = (a.as_bytes(), b.as_bytes());
    loop {
        match (ai.first(), bi.first()) {
            (None, None) => return a.cmp(b),
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(x), Some(y)) if x.is_ascii_digit() && y.is_ascii_digit() => {
                let na = ai.iter().take_while(|c| c.is_ascii_digit()).count();
                let nb = bi.iter().take_while(|c| c.is_ascii_digit()).count();
                let da = trim_zeros(&ai[..na]);
                let db = trim_zeros(&bi[..nb]);
                let ord = da.len().cmp(&db.len()).then_with(|| da.cmp(db));
                if ord != Ordering::Equal {
                    return ord;
                }
                ai = &ai[na..];
                bi = &bi[nb..];
            }
            (Some(x), Some(y)) => {
                if x != y {
                    return x.cmp(y);
                }
                ai = &ai[1..];
                bi = &bi[1..];
            }
        }
    }
}

fn trim_zeros(digits: &[u8]) -> &[u8] {
    let k = digits.iter().take_while(|&&c| c == b'0').count();
    &digits[k..]
}
