//! Number formatting shared by the CSV and JSON writers.

/// Formats with 17 significant digits, enough to round-trip any `f64`.
pub fn fmt17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

/// JSON number with 17 significant digits; non-finite values become `null`.
pub fn json_number(x: f64) -> String {
    if x.is_finite() {
        fmt17(x)
    } else {
        "null".to_string()
    }
}

pub fn json_array1(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|&x| json_number(x)).collect();
    format!("[{}]", items.join(","))
}

pub fn json_array2(v: &[Vec<f64>]) -> String {
    let items: Vec<String> = v.iter().map(|r| json_array1(r)).collect();
    format!("[{}]", items.join(","))
}

pub fn json_array3(v: &[Vec<Vec<f64>>]) -> String {
    let items: Vec<String> = v.iter().map(|r| json_array2(r)).collect();
    format!("[{}]", items.join(","))
}
