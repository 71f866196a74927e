//! Row rendering shared by `check`, `witness` and `scan`.

use prodsq_core::SquareStatus;
use serde_json::{json, Value};

pub const STATUS_CSV_HEADER: &str = "n,status,b,witness_p,witness_alpha,direct_checked";

pub fn status_word(s: &SquareStatus) -> &'static str {
    if s.is_square() {
        "square"
    } else {
        "non-square"
    }
}

pub fn status_line(s: &SquareStatus) -> String {
    let body = match (&s.root, &s.witness) {
        (Some(b), _) => format!("square, b={b}"),
        (None, Some(w)) => format!("non-square, witness p={}, α={}", w.p, w.alpha),
        (None, None) => "non-square (direct)".to_string(),
    };
    format!("n={}: {body}", s.n)
}

pub fn status_csv(s: &SquareStatus) -> String {
    let opt = |v: Option<String>| v.unwrap_or_default();
    format!(
        "{},{},{},{},{},{}",
        s.n,
        status_word(s),
        opt(s.root.as_ref().map(|b| b.to_string())),
        opt(s.witness.map(|w| w.p.to_string())),
        opt(s.witness.map(|w| w.alpha.to_string())),
        s.direct
    )
}

pub fn status_json(s: &SquareStatus) -> Value {
    json!({
        "n": s.n.to_string(),
        "status": status_word(s),
        "b": s.root.as_ref().map(|b| b.to_string()),
        "witness": s.witness,
        "direct_checked": s.direct,
    })
}

pub fn pretty(value: &Value) -> String {
    serde_json::to_string_pretty(value).expect("json value serializes")
}
