use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;

use super::ledger::PnLLedger;
use super::taylor::{TaylorDecomposition, TaylorTerm};

/// Write one CSV row per ledger interval.
///
/// Columns: `level,interval_index,u,v,increment,cumulative`, followed by
/// `aux_column` holding the auxiliary coordinate at `u` when given (the
/// Asian ledgers use `I_u`).
pub fn write_ledger_csv<W: Write>(out: W, ledger: &PnLLedger, aux_column: Option<&str>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["level", "interval_index", "u", "v", "increment", "cumulative"];
    let aux = match (aux_column, &ledger.aux) {
        (Some(name), Some(a)) => {
            header.push(name);
            Some(a)
        }
        _ => None,
    };
    w.write_record(&header)?;
    for k in 0..ledger.intervals() {
        let mut row = vec![
            ledger.level.to_string(),
            k.to_string(),
            format!("{:.17e}", ledger.times[k]),
            format!("{:.17e}", ledger.times[k + 1]),
            format!("{:.17e}", ledger.increments[k]),
            format!("{:.17e}", ledger.cumulative[k]),
        ];
        if let Some(a) = aux {
            row.push(format!("{:.17e}", a[k]));
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// One JSON record per hedging run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerSummary {
    pub seed: u64,
    pub level: u32,
    pub mesh: f64,
    pub replication_error: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub taylor_terms: Option<Vec<TaylorTermRecord>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TaylorTermRecord {
    pub a1: u32,
    pub a2: u32,
    pub value: f64,
}

impl From<TaylorTerm> for TaylorTermRecord {
    fn from(t: TaylorTerm) -> Self {
        Self {
            a1: t.a1,
            a2: t.a2,
            value: t.value,
        }
    }
}

impl LedgerSummary {
    pub fn new(seed: u64, ledger: &PnLLedger, taylor: Option<&TaylorDecomposition>) -> Self {
        Self {
            seed,
            level: ledger.level,
            mesh: ledger.mesh,
            replication_error: ledger.replication_error,
            taylor_terms: taylor.map(|d| d.terms.iter().copied().map(Into::into).collect()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hedging::{run_hedge, HedgeSetup, WeightRule};
    use crate::paths::{brownian_path, exp_price_path, PartitionSequence};
    use crate::pricing::{analytic_instrument, Instrument, Payoff, PricedInstrument, Pricer, VolSource};
    use crate::tolerances::Tolerances;

    #[test]
    fn csv_rows_match_ledger() {
        let seq = PartitionSequence::dyadic(1.0, 5).unwrap();
        let s = exp_price_path(&brownian_path(&seq, 4, 1.0).unwrap(), 100.0, 0.2).unwrap();
        let c = PricedInstrument::new(
            Instrument::black_scholes(Payoff::call(100.0, 1.0).unwrap()),
            VolSource::Fixed(0.2),
        );
        let u = PricedInstrument::new(analytic_instrument("identity", 1.0).unwrap(), VolSource::Fixed(0.2));
        let inst: [&dyn Pricer; 2] = [&c, &u];
        let setup = HedgeSetup {
            price: &s,
            aux: None,
            seq: &seq,
            level: 3,
            instruments: &inst,
            rule: &WeightRule::Delta,
            t_cut: HedgeSetup::default_t_cut(&seq),
            tolerances: Tolerances::default(),
        };
        let ledger = run_hedge(&setup).unwrap();
        let mut buf = Vec::new();
        write_ledger_csv(&mut buf, &ledger, Some("I_u")).unwrap();
        let mut r = csv::Reader::from_reader(buf.as_slice());
        assert_eq!(r.headers().unwrap().len(), 6);
        let rows: Vec<csv::StringRecord> = r.records().map(|x| x.unwrap()).collect();
        assert_eq!(rows.len(), 8);
        let last: f64 = rows[7][5].parse().unwrap();
        assert_eq!(last, ledger.total());

        let json = serde_json::to_string(&LedgerSummary::new(7, &ledger, None)).unwrap();
        assert!(json.contains("\"replication_error\""));
        assert!(!json.contains("taylor_terms"));
    }
}
