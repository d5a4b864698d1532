use two_children::Interval;

/// Formats `x` with 12 significant digits, trailing zeros trimmed.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn fmt_list(xs: &[f64]) -> String {
    xs.iter()
        .map(|&x| fmt_sig(x))
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn fmt_interval(iv: &Interval) -> String {
    if iv.is_singleton() {
        return format!("{{{}}}", fmt_sig(iv.lo()));
    }
    format!(
        "{}{}, {}{}",
        if iv.lo_closed() { '[' } else { '(' },
        fmt_sig(iv.lo()),
        fmt_sig(iv.hi()),
        if iv.hi_closed() { ']' } else { ')' },
    )
}
