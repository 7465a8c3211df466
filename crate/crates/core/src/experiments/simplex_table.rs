use std::io::Write;

use num_traits::One;

use crate::error::Result;
use crate::exact::{pow, to_f64, Rational};
use crate::geometry::simplex;
use crate::lattice::sumset;
use crate::util::binomial;
use crate::Caps;

pub const SIMPLEX_COLUMNS: [&str; 10] =
    ["k", "n", "size", "sumset_size", "binomial_sumset_size", "identity_holds", "ratio", "c_hat", "c_hat_approx", "k_over_4"];

/// One cell of the simplex doubling table.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplexRow {
    pub k: usize,
    pub n: u64,
    pub size: u128,
    pub sumset_size: u128,
    pub binomial_sumset_size: u128,
    /// `S_n + S_n` equals `S_{2n}` as a set.
    pub identity_holds: bool,
    pub ratio: Rational,
    /// `n (1 - ratio / 2^k)`.
    pub c_hat: Rational,
    pub k_over_4: Rational,
}

/// Rows for `1 <= k <= k_max`, `1 <= n <= n_max`, ordered by `(k, n)`.
pub fn simplex_doubling_table(k_max: usize, n_max: u64, caps: &Caps) -> Result<Vec<SimplexRow>> {
    caps.check_points("simplex table", binomial(2 * n_max + k_max as u64, k_max as u64))?;
    let mut rows = Vec::new();
    for k in 1..=k_max {
        for n in 1..=n_max {
            let s = simplex(k, n)?;
            let doubled = sumset(&s, &s)?;
            let size = s.len() as u128;
            let sumset_size = doubled.len() as u128;
            let ratio = Rational::new(sumset_size.into(), size.into());
            let c_hat = Rational::from_integer(n.into())
                * (Rational::one() - &ratio / pow(&Rational::from_integer(2.into()), k as u32));
            rows.push(SimplexRow {
                k,
                n,
                size,
                sumset_size,
                binomial_sumset_size: binomial(2 * n + k as u64, k as u64),
                identity_holds: doubled == simplex(k, 2 * n)?,
                ratio,
                c_hat,
                k_over_4: Rational::new((k as i64).into(), 4.into()),
            });
        }
    }
    Ok(rows)
}

pub fn write_simplex_csv<W: Write>(rows: &[SimplexRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SIMPLEX_COLUMNS)?;
    for r in rows {
        w.write_record([
            r.k.to_string(),
            r.n.to_string(),
            r.size.to_string(),
            r.sumset_size.to_string(),
            r.binomial_sumset_size.to_string(),
            r.identity_holds.to_string(),
            r.ratio.to_string(),
            r.c_hat.to_string(),
            format!("{:.9}", to_f64(&r.c_hat)),
            r.k_over_4.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational;

    #[test]
    fn first_rows() {
        let rows = simplex_doubling_table(2, 3, &Caps::default()).unwrap();
        assert_eq!(rows.len(), 6);
        let r = &rows[3];
        assert_eq!((r.k, r.n, r.size, r.sumset_size), (2, 1, 3, 6));
        assert_eq!(r.ratio, rational(2, 1));
        assert_eq!(r.c_hat, rational(1, 2));
        // one dimension: ratio (2n+1)/(n+1)
        assert_eq!(rows[2].ratio, rational(7, 4));
        assert!(rows.iter().all(|r| r.identity_holds && r.sumset_size == r.binomial_sumset_size));
    }

    #[test]
    fn csv_header_and_width() {
        let rows = simplex_doubling_table(1, 2, &Caps::default()).unwrap();
        let mut buf = Vec::new();
        write_simplex_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], SIMPLEX_COLUMNS.join(","));
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("1,1,2,3,3,true,3/2,1/4,"));
    }
}
