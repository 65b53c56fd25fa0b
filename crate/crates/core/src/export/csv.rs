use crate::rational::Rational;

pub const SERIES_HEADER: [&str; 4] = ["n", "numerator", "denominator", "approx_6dp"];

/// `n,numerator,denominator,approx_6dp` rows; the decimal column is truncated
/// to six places and is informational only.
pub fn series_csv(values: &[(usize, Rational)]) -> String {
    let mut w = ::csv::Writer::from_writer(Vec::new());
    w.write_record(SERIES_HEADER).expect("write to memory");
    for (n, v) in values {
        w.write_record([
            n.to_string(),
            v.numer().to_string(),
            v.denom().to_string(),
            v.to_decimal(6),
        ])
        .expect("write to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8")
}
