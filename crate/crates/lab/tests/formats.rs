use dixlab::format::{log_mean_csv, read_chain, read_series, write_chain, write_series};
use dixlab_core::chain::LaurentChain;
use dixlab_core::seq::{CircleSeries, Complex, FourierSeries, GaussRational as Q, TorusIndex};
use dixlab_core::trace::{log_mean, DiagonalOrder, DiagonalSequence, Schedule};
use proptest::prelude::*;

fn exact_series() -> impl Strategy<Value = CircleSeries<Q>> {
    prop::collection::vec((-50i64..=50, -9i64..=9, 1i64..=7, -9i64..=9, 1i64..=7), 0..8)
        .prop_map(|t| CircleSeries::from_terms(t.into_iter().map(|(k, a, b, c, d)| (k, Q::from_fractions((a, b), (c, d))))))
}

fn torus_series() -> impl Strategy<Value = FourierSeries<TorusIndex, Complex>> {
    prop::collection::vec((-9i64..=9, -9i64..=9, any::<f64>(), any::<f64>()), 0..8).prop_map(|t| {
        FourierSeries::from_terms(
            t.into_iter().filter(|(_, _, re, im)| re.is_finite() && im.is_finite()).map(|(a, b, re, im)| (TorusIndex::new(a, b), Complex::new(re, im))),
        )
    })
}

proptest! {
    #[test]
    fn exact_circle_series_survive_text(f in exact_series()) {
        prop_assert_eq!(read_series::<i64, Q>(&write_series(&f)).unwrap(), f);
    }

    #[test]
    fn float_torus_series_survive_text_bit_for_bit(f in torus_series()) {
        let back = read_series::<TorusIndex, Complex>(&write_series(&f)).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn chains_survive_text(terms in prop::collection::vec((1i64..=5, prop::collection::vec(exact_series(), 3)), 1..4)) {
        let terms = terms.into_iter().map(|(w, fs)| (Q::from_ints(w, 0), fs)).collect();
        let x = LaurentChain::from_terms(terms).unwrap();
        prop_assert_eq!(read_chain::<Q>(&write_chain(&x)).unwrap(), x);
    }
}

#[test]
fn circle_text_is_not_read_as_torus() {
    let f = CircleSeries::from_terms([(3, Complex::new(1.0, 0.5))]);
    assert!(read_series::<TorusIndex, Complex>(&write_series(&f)).is_err());
    assert!(read_series::<i64, Q>(&write_series(&f)).is_err());
}

#[test]
fn log_mean_csv_is_deterministic_and_parses_back() {
    let values: Vec<Complex> = (0..4096).map(|k| Complex::new(1.0 / (k as f64 + 1.0), (-(k as f64)).exp2())).collect();
    let series = log_mean(&DiagonalSequence::from_values(values, DiagonalOrder::OneSided), &Schedule::dyadic(2, 11)).unwrap();
    let (a, b) = (log_mean_csv(&series).unwrap(), log_mean_csv(&series).unwrap());
    assert_eq!(a, b);
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(a.as_bytes());
    assert_eq!(reader.headers().unwrap(), vec!["m", "N", "value", "value_im"]);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), series.len());
    for (row, pt) in rows.iter().zip(series.points()) {
        assert_eq!(row[1].parse::<u64>().unwrap(), pt.n);
        let v: f64 = row[2].parse().unwrap();
        assert!((v - pt.value.re).abs() <= 1e-14 * pt.value.re.abs());
    }
}
